//! Mod-2 boundary-matrix column reduction and persistence pairing.

use std::collections::HashMap;

use super::{Filtration, HomologyError, PersistenceInterval};

/// Symmetric difference of two ascending index lists, in place.
fn add_into(target: &mut Vec<usize>, other: &[usize]) {
    let mut out = Vec::with_capacity(target.len() + other.len());
    let (mut a, mut b) = (0usize, 0usize);
    while a < target.len() && b < other.len() {
        match target[a].cmp(&other[b]) {
            std::cmp::Ordering::Less => {
                out.push(target[a]);
                a += 1;
            }
            std::cmp::Ordering::Greater => {
                out.push(other[b]);
                b += 1;
            }
            std::cmp::Ordering::Equal => {
                a += 1;
                b += 1;
            }
        }
    }
    out.extend_from_slice(&target[a..]);
    out.extend_from_slice(&other[b..]);
    *target = out;
}

/// Persistence intervals of a filtration via the standard column-reduction
/// algorithm over the two-element field.
///
/// Zero-length pairs are returned too (callers decide whether to show them);
/// unpaired simplices become essential intervals with infinite death, in
/// every dimension up to the filtration's top dimension. Dimension-1
/// intervals carry a representative cycle: the reduced boundary of the
/// killing 2-simplex for finite intervals, the created cycle itself for
/// essential ones.
pub fn compute_persistence(
    filtration: &Filtration,
) -> Result<Vec<PersistenceInterval>, HomologyError> {
    let simplices = filtration.simplices();
    let m = simplices.len();

    let mut index_of: HashMap<&[u32], usize> = HashMap::with_capacity(m);
    for (i, s) in simplices.iter().enumerate() {
        index_of.insert(s.vertices.as_slice(), i);
    }

    // Filtration order sanity: values sorted, faces before cofaces.
    for w in simplices.windows(2) {
        if w[1].filtration < w[0].filtration {
            return Err(HomologyError::InvalidFiltration(
                "simplices not sorted by filtration value".into(),
            ));
        }
    }

    let boundary = |j: usize| -> Result<Vec<usize>, HomologyError> {
        let vs = &simplices[j].vertices;
        if vs.len() == 1 {
            return Ok(Vec::new());
        }
        let mut faces = Vec::with_capacity(vs.len());
        for skip in 0..vs.len() {
            let face: Vec<u32> = vs
                .iter()
                .enumerate()
                .filter(|(i, _)| *i != skip)
                .map(|(_, &v)| v)
                .collect();
            let idx = *index_of.get(face.as_slice()).ok_or_else(|| {
                HomologyError::InvalidFiltration(format!(
                    "face of simplex {vs:?} missing from the filtration"
                ))
            })?;
            if idx >= j {
                return Err(HomologyError::InvalidFiltration(format!(
                    "face of simplex {vs:?} does not precede it"
                )));
            }
            faces.push(idx);
        }
        faces.sort_unstable();
        Ok(faces)
    };

    let mut reduced: Vec<Vec<usize>> = Vec::with_capacity(m);
    let mut pivot_owner: Vec<Option<usize>> = vec![None; m];
    // Reduction-matrix columns, tracked for edges only: they provide the
    // cycle created by an unpaired edge.
    let mut v_edges: HashMap<usize, Vec<usize>> = HashMap::new();

    for j in 0..m {
        let mut col = boundary(j)?;
        let track_v = simplices[j].dimension() == 1;
        let mut v = if track_v { vec![j] } else { Vec::new() };
        while let Some(&low) = col.last() {
            match pivot_owner[low] {
                Some(k) => {
                    let other = reduced[k].clone();
                    add_into(&mut col, &other);
                    if track_v {
                        let vk = v_edges.get(&k).cloned().unwrap_or_default();
                        add_into(&mut v, &vk);
                    }
                }
                None => break,
            }
        }
        if let Some(&low) = col.last() {
            pivot_owner[low] = Some(j);
        }
        if track_v {
            v_edges.insert(j, v);
        }
        reduced.push(col);
    }

    let mut killed: Vec<bool> = vec![false; m];
    let mut intervals = Vec::new();
    let edge_pair = |e: usize| {
        let vs = &simplices[e].vertices;
        (vs[0], vs[1])
    };
    for j in 0..m {
        if let Some(&birth_idx) = reduced[j].last() {
            killed[birth_idx] = true;
            let dim = simplices[birth_idx].dimension();
            let representative = (dim == 1)
                .then(|| reduced[j].iter().map(|&e| edge_pair(e)).collect::<Vec<_>>());
            intervals.push(PersistenceInterval {
                dimension: dim,
                birth: simplices[birth_idx].filtration,
                death: simplices[j].filtration,
                representative,
            });
        }
    }
    for i in 0..m {
        if reduced[i].is_empty() && !killed[i] {
            let dim = simplices[i].dimension();
            let representative = (dim == 1).then(|| {
                v_edges
                    .get(&i)
                    .map(|es| es.iter().map(|&e| edge_pair(e)).collect::<Vec<_>>())
                    .unwrap_or_default()
            });
            intervals.push(PersistenceInterval {
                dimension: dim,
                birth: simplices[i].filtration,
                death: f64::INFINITY,
                representative,
            });
        }
    }
    intervals.sort_by(|a, b| {
        a.dimension
            .cmp(&b.dimension)
            .then(a.birth.partial_cmp(&b.birth).unwrap())
            .then(a.death.partial_cmp(&b.death).unwrap())
    });
    Ok(intervals)
}
