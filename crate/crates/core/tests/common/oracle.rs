//! Brute-force oracles, all independent of the library's own algorithms.

use num::{BigInt, BigRational, One, Zero};

/// Rank of a matrix over the rationals by plain Gaussian elimination.
pub fn rank_rational(mut m: Vec<Vec<BigRational>>) -> usize {
    let rows = m.len();
    if rows == 0 {
        return 0;
    }
    let cols = m[0].len();
    let mut rank = 0;
    let mut pivot_row = 0;
    for col in 0..cols {
        let Some(r) = (pivot_row..rows).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(pivot_row, r);
        let pivot = m[pivot_row][col].clone();
        for r2 in 0..rows {
            if r2 != pivot_row && !m[r2][col].is_zero() {
                let factor = &m[r2][col] / &pivot;
                for c in col..cols {
                    let sub = &m[pivot_row][c] * &factor;
                    m[r2][c] = &m[r2][c] - sub;
                }
            }
        }
        rank += 1;
        pivot_row += 1;
        if pivot_row == rows {
            break;
        }
    }
    rank
}

/// All simplices of the clique complex at threshold `tau` (dimensions 0-3),
/// enumerated directly from the matrix.
pub fn clique_simplices_at(matrix: &[Vec<f64>], tau: f64) -> Vec<Vec<Vec<usize>>> {
    let n = matrix.len();
    let d = |i: usize, j: usize| matrix[i][j];
    let mut by_dim: Vec<Vec<Vec<usize>>> = vec![Vec::new(); 4];
    for v in 0..n {
        by_dim[0].push(vec![v]);
    }
    for i in 0..n {
        for j in (i + 1)..n {
            if d(i, j) <= tau {
                by_dim[1].push(vec![i, j]);
            }
        }
    }
    for i in 0..n {
        for j in (i + 1)..n {
            for k in (j + 1)..n {
                if d(i, j) <= tau && d(i, k) <= tau && d(j, k) <= tau {
                    by_dim[2].push(vec![i, j, k]);
                }
            }
        }
    }
    for i in 0..n {
        for j in (i + 1)..n {
            for k in (j + 1)..n {
                for l in (k + 1)..n {
                    if d(i, j) <= tau
                        && d(i, k) <= tau
                        && d(i, l) <= tau
                        && d(j, k) <= tau
                        && d(j, l) <= tau
                        && d(k, l) <= tau
                    {
                        by_dim[3].push(vec![i, j, k, l]);
                    }
                }
            }
        }
    }
    by_dim
}

/// Signed boundary matrix from k-simplices to (k-1)-simplices over Q.
fn boundary_matrix(
    faces: &[Vec<usize>],
    simplices: &[Vec<usize>],
) -> Vec<Vec<BigRational>> {
    let rows = faces.len();
    let cols = simplices.len();
    let mut m = vec![vec![BigRational::zero(); cols]; rows];
    for (c, s) in simplices.iter().enumerate() {
        for skip in 0..s.len() {
            let face: Vec<usize> = s
                .iter()
                .enumerate()
                .filter(|(i, _)| *i != skip)
                .map(|(_, &v)| v)
                .collect();
            let r = faces.iter().position(|f| *f == face).expect("face enumerated");
            let sign = if skip % 2 == 0 {
                BigRational::from_integer(BigInt::one())
            } else {
                -BigRational::from_integer(BigInt::one())
            };
            m[r][c] = sign;
        }
    }
    m
}

/// Betti numbers (dimensions 0-3) of the clique complex at `tau`, computed
/// over the rationals: beta_k = #k-simplices - rank d_k - rank d_{k+1}.
pub fn betti_by_rank(matrix: &[Vec<f64>], tau: f64) -> Vec<u64> {
    let by_dim = clique_simplices_at(matrix, tau);
    let rank_d: Vec<usize> = (0..4)
        .map(|k| {
            if k == 0 || by_dim[k].is_empty() {
                0
            } else {
                rank_rational(boundary_matrix(&by_dim[k - 1], &by_dim[k]))
            }
        })
        .collect();
    (0..4)
        .map(|k| {
            let n_k = by_dim[k].len();
            let rank_out = rank_d[k];
            let rank_in = if k + 1 < 4 { rank_d[k + 1] } else { 0 };
            (n_k - rank_out - rank_in) as u64
        })
        .collect()
}

/// Exhaustive search for the best simple path between two nodes. Objective:
/// min-hop compares (hops, sum of 1/w); min-cost compares (sum of 1/w, hops).
/// Returns None when no path exists.
pub fn best_path_exhaustive(
    n: usize,
    edges: &[(usize, usize, u64)],
    from: usize,
    to: usize,
    hop_first: bool,
) -> Option<(u64, BigRational)> {
    let mut adj: Vec<Vec<(usize, u64)>> = vec![Vec::new(); n];
    for &(a, b, w) in edges {
        adj[a].push((b, w));
        adj[b].push((a, w));
    }
    let mut best: Option<(u64, BigRational)> = None;
    let mut visited = vec![false; n];
    visited[from] = true;
    fn dfs(
        adj: &[Vec<(usize, u64)>],
        visited: &mut [bool],
        at: usize,
        to: usize,
        hops: u64,
        cost: BigRational,
        hop_first: bool,
        best: &mut Option<(u64, BigRational)>,
    ) {
        if at == to {
            let better = match best {
                None => true,
                Some((bh, bc)) => {
                    if hop_first {
                        (hops, &cost) < (*bh, bc)
                    } else {
                        (&cost, hops) < (bc, *bh)
                    }
                }
            };
            if better {
                *best = Some((hops, cost));
            }
            return;
        }
        for &(next, w) in &adj[at] {
            if !visited[next] {
                visited[next] = true;
                dfs(
                    adj,
                    visited,
                    next,
                    to,
                    hops + 1,
                    &cost + BigRational::new(BigInt::one(), BigInt::from(w)),
                    hop_first,
                    best,
                );
                visited[next] = false;
            }
        }
    }
    dfs(adj.as_slice(), &mut visited, from, to, 0, BigRational::zero(), hop_first, &mut best);
    best
}

// ---------------------------------------------------------------------------
// GF(2) linear algebra over edge space, for representative validity.
// ---------------------------------------------------------------------------

/// Bit vector over an indexed universe.
#[derive(Clone, PartialEq, Eq)]
pub struct Gf2Vec {
    blocks: Vec<u64>,
}

impl Gf2Vec {
    pub fn zero(universe: usize) -> Gf2Vec {
        Gf2Vec { blocks: vec![0; universe.div_ceil(64)] }
    }

    pub fn set(&mut self, i: usize) {
        self.blocks[i / 64] ^= 1 << (i % 64);
    }

    pub fn xor_with(&mut self, other: &Gf2Vec) {
        for (a, b) in self.blocks.iter_mut().zip(&other.blocks) {
            *a ^= b;
        }
    }

    pub fn is_zero(&self) -> bool {
        self.blocks.iter().all(|&b| b == 0)
    }

    pub fn highest_bit(&self) -> Option<usize> {
        for (i, &b) in self.blocks.iter().enumerate().rev() {
            if b != 0 {
                return Some(i * 64 + 63 - b.leading_zeros() as usize);
            }
        }
        None
    }
}

/// True when `target` lies in the GF(2) span of `vectors`.
pub fn in_span_gf2(vectors: &[Gf2Vec], target: &Gf2Vec) -> bool {
    let mut basis: Vec<Gf2Vec> = Vec::new();
    for v in vectors {
        let mut v = v.clone();
        reduce(&mut v, &basis);
        if !v.is_zero() {
            basis.push(v);
            basis.sort_by_key(|b| std::cmp::Reverse(b.highest_bit()));
        }
    }
    let mut t = target.clone();
    reduce(&mut t, &basis);
    t.is_zero()
}

fn reduce(v: &mut Gf2Vec, basis: &[Gf2Vec]) {
    loop {
        let Some(h) = v.highest_bit() else { return };
        match basis.iter().find(|b| b.highest_bit() == Some(h)) {
            Some(b) => v.xor_with(b),
            None => return,
        }
    }
}
