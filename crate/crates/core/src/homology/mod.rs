//! Vietoris-Rips persistent homology over an explicit dissimilarity matrix.
//!
//! The matrix does not need to satisfy the triangle inequality; a simplex
//! enters the filtration at the maximum pairwise dissimilarity of its
//! vertices. Persistence pairs come from mod-2 boundary-matrix reduction,
//! with representative 1-cycles read off the reduced column of the killing
//! 2-simplex.

mod reduction;

pub use reduction::compute_persistence;

use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HomologyError {
    #[error("invalid dissimilarity input: {0}")]
    InvalidInput(String),
    #[error("invalid filtration: {0}")]
    InvalidFiltration(String),
}

/// A simplex of the filtration: strictly increasing vertex tuple plus the
/// dissimilarity threshold at which it appears.
#[derive(Debug, Clone, PartialEq)]
pub struct Simplex {
    pub vertices: Vec<u32>,
    pub filtration: f64,
}

impl Simplex {
    pub fn dimension(&self) -> usize {
        self.vertices.len() - 1
    }
}

/// All simplices up to `max_dim` with diameter at most `max_filtration`,
/// sorted so that every face precedes its cofaces.
#[derive(Debug, Clone)]
pub struct Filtration {
    simplices: Vec<Simplex>,
    max_dim: usize,
    max_filtration: f64,
    vertex_count: usize,
}

impl Filtration {
    pub fn simplices(&self) -> &[Simplex] {
        &self.simplices
    }

    pub fn len(&self) -> usize {
        self.simplices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.simplices.is_empty()
    }

    pub fn max_dim(&self) -> usize {
        self.max_dim
    }

    pub fn max_filtration(&self) -> f64 {
        self.max_filtration
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    /// Number of simplices per dimension with filtration value <= tau.
    pub fn simplex_counts_at(&self, tau: f64) -> Vec<u64> {
        let mut counts = vec![0u64; self.max_dim + 1];
        for s in &self.simplices {
            if s.filtration <= tau {
                counts[s.dimension()] += 1;
            }
        }
        counts
    }
}

/// Build the Vietoris-Rips filtration of a matrix. The matrix must be
/// square, symmetric, zero on the diagonal, and free of negative or NaN
/// entries; `max_dim` may be 0 through 3 and `max_filtration` positive
/// (infinity for no cap).
pub fn build_filtration(
    matrix: &[Vec<f64>],
    max_dim: usize,
    max_filtration: f64,
) -> Result<Filtration, HomologyError> {
    let n = matrix.len();
    if matrix.iter().any(|r| r.len() != n) {
        return Err(HomologyError::InvalidInput("matrix is not square".into()));
    }
    for i in 0..n {
        if matrix[i][i] != 0.0 {
            return Err(HomologyError::InvalidInput(format!("nonzero diagonal at {i}")));
        }
        for j in 0..i {
            let v = matrix[i][j];
            if v.is_nan() || v < 0.0 {
                return Err(HomologyError::InvalidInput(format!(
                    "entry ({i}, {j}) is negative or NaN"
                )));
            }
            if v != matrix[j][i] {
                return Err(HomologyError::InvalidInput(format!("asymmetric at ({i}, {j})")));
            }
        }
    }
    if max_dim > 3 {
        return Err(HomologyError::InvalidInput(format!(
            "max_dim must be at most 3, got {max_dim}"
        )));
    }
    if !(max_filtration > 0.0) {
        return Err(HomologyError::InvalidInput(format!(
            "max_filtration must be positive, got {max_filtration}"
        )));
    }

    let d = |i: usize, j: usize| matrix[i][j];
    let mut simplices: Vec<Simplex> = Vec::new();
    for v in 0..n {
        simplices.push(Simplex { vertices: vec![v as u32], filtration: 0.0 });
    }
    if max_dim >= 1 {
        for i in 0..n {
            for j in (i + 1)..n {
                if d(i, j) <= max_filtration {
                    simplices.push(Simplex {
                        vertices: vec![i as u32, j as u32],
                        filtration: d(i, j),
                    });
                }
            }
        }
    }
    if max_dim >= 2 {
        for i in 0..n {
            for j in (i + 1)..n {
                if d(i, j) > max_filtration {
                    continue;
                }
                for k in (j + 1)..n {
                    let f = d(i, j).max(d(i, k)).max(d(j, k));
                    if f <= max_filtration {
                        simplices.push(Simplex {
                            vertices: vec![i as u32, j as u32, k as u32],
                            filtration: f,
                        });
                    }
                }
            }
        }
    }
    if max_dim >= 3 {
        for i in 0..n {
            for j in (i + 1)..n {
                if d(i, j) > max_filtration {
                    continue;
                }
                for k in (j + 1)..n {
                    let fijk = d(i, j).max(d(i, k)).max(d(j, k));
                    if fijk > max_filtration {
                        continue;
                    }
                    for l in (k + 1)..n {
                        let f = fijk.max(d(i, l)).max(d(j, l)).max(d(k, l));
                        if f <= max_filtration {
                            simplices.push(Simplex {
                                vertices: vec![i as u32, j as u32, k as u32, l as u32],
                                filtration: f,
                            });
                        }
                    }
                }
            }
        }
    }
    simplices.sort_by(|a, b| {
        a.filtration
            .partial_cmp(&b.filtration)
            .expect("no NaN filtration values")
            .then(a.vertices.len().cmp(&b.vertices.len()))
            .then_with(|| a.vertices.cmp(&b.vertices))
    });
    Ok(Filtration { simplices, max_dim, max_filtration, vertex_count: n })
}

/// A persistence interval [birth, death) with its dimension. The death is
/// `f64::INFINITY` for essential classes. Dimension-1 intervals carry a
/// representative cycle as a set of vertex-pair edges.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PersistenceInterval {
    pub dimension: usize,
    pub birth: f64,
    pub death: f64,
    pub representative: Option<Vec<(u32, u32)>>,
}

impl PersistenceInterval {
    pub fn persistence(&self) -> f64 {
        self.death - self.birth
    }

    pub fn is_essential(&self) -> bool {
        self.death.is_infinite()
    }

    /// Pairs created and destroyed at the same threshold; kept internally,
    /// hidden from barcode output.
    pub fn is_zero_length(&self) -> bool {
        self.birth == self.death
    }

    /// True when the interval contains `tau`.
    pub fn alive_at(&self, tau: f64) -> bool {
        self.birth <= tau && tau < self.death
    }
}

/// Betti number of one dimension sampled over a grid of thresholds.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BettiCurve {
    pub dimension: usize,
    pub samples: Vec<(f64, u64)>,
}

/// Count intervals of `dim` alive at each threshold. `taus` must be sorted
/// ascending.
pub fn betti_curve(intervals: &[PersistenceInterval], dim: usize, taus: &[f64]) -> BettiCurve {
    let samples = taus
        .iter()
        .map(|&tau| {
            let beta = intervals
                .iter()
                .filter(|iv| iv.dimension == dim && iv.alive_at(tau))
                .count() as u64;
            (tau, beta)
        })
        .collect();
    BettiCurve { dimension: dim, samples }
}

/// Betti number at a single threshold.
pub fn betti_at(intervals: &[PersistenceInterval], dim: usize, tau: f64) -> u64 {
    intervals
        .iter()
        .filter(|iv| iv.dimension == dim && iv.alive_at(tau))
        .count() as u64
}

/// Check the Euler characteristic identity at `tau`: the alternating sum of
/// simplex counts must equal the alternating sum of Betti numbers, both taken
/// over all dimensions of the filtration (intervals of the top enumerated
/// dimension included).
pub fn euler_characteristic_check(
    filtration: &Filtration,
    intervals: &[PersistenceInterval],
    tau: f64,
) -> bool {
    let counts = filtration.simplex_counts_at(tau);
    let chi_simplices: i64 = counts
        .iter()
        .enumerate()
        .map(|(k, &c)| if k % 2 == 0 { c as i64 } else { -(c as i64) })
        .sum();
    let chi_betti: i64 = (0..=filtration.max_dim())
        .map(|k| {
            let b = betti_at(intervals, k, tau) as i64;
            if k % 2 == 0 {
                b
            } else {
                -b
            }
        })
        .sum();
    chi_simplices == chi_betti
}

/// The worked 4-point example used across the tests: corners of a unit
/// square, sides 1 and diagonals sqrt(2).
#[cfg(test)]
pub(crate) fn unit_square_matrix() -> Vec<Vec<f64>> {
    let s = std::f64::consts::SQRT_2;
    vec![
        vec![0.0, 1.0, 1.0, s],
        vec![1.0, 0.0, s, 1.0],
        vec![1.0, s, 0.0, 1.0],
        vec![s, 1.0, 1.0, 0.0],
    ]
}
