//! Cheeger constant and the second-smallest eigenvalue of the symmetric
//! normalized Laplacian `I - D^{-1/2} A D^{-1/2}`.
//!
//! The Cheeger constant here is the vertex-count form
//! `min_S |cut(S)| / min(|S|, N - |S|)`, with `|cut(S)|` counting undirected
//! crossing edges once.

use std::cmp::Ordering;

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::graph::Graph;

/// Largest graph accepted by [`cheeger_exact`].
pub const EXACT_CHEEGER_MAX_NODES: usize = 24;

/// Graphs at or above this size use the Lanczos path in [`lambda2`].
pub const DENSE_EIGEN_LIMIT: usize = 2048;

/// Absolute bound on `||L x - lambda x||` for a unit eigenvector `x`.
pub const EIGEN_TOLERANCE: f64 = 1e-8;

#[derive(Clone, Debug, PartialEq)]
pub struct CheegerResult {
    pub value: f64,
    /// Number of undirected edges crossing the witness cut.
    pub cut_edges: usize,
    /// Sorted node ids of one side of the minimizing (or sweep) cut.
    pub witness_set: Vec<usize>,
    pub exact: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SpectralResult {
    pub lambda2: f64,
    pub residual: f64,
}

/// Number of undirected edges with exactly one endpoint in `set`.
pub fn cut_size(g: &Graph, set: &[usize]) -> usize {
    let mut inside = vec![false; g.node_count()];
    for &u in set {
        inside[u] = true;
    }
    set.iter()
        .map(|&u| g.neighbors(u).iter().filter(|&&v| !inside[v]).count())
        .sum()
}

/// `|cut(S)| / min(|S|, N - |S|)`.
pub fn cut_ratio(g: &Graph, set: &[usize]) -> f64 {
    let small = set.len().min(g.node_count() - set.len());
    cut_size(g, set) as f64 / small as f64
}

fn check_cheeger_input(g: &Graph) -> Result<()> {
    if g.node_count() < 2 {
        return Err(Error::InvalidParameter(
            "Cheeger constant needs at least two nodes".into(),
        ));
    }
    g.ensure_connected()
}

#[derive(Clone, Copy, Debug)]
struct Candidate {
    cut: u64,
    small: u64,
    mask: u32,
}

impl Candidate {
    /// Orders by ratio, then by the lexicographic order of the sorted node
    /// lists.
    fn cmp(&self, other: &Self) -> Ordering {
        (self.cut * other.small)
            .cmp(&(other.cut * self.small))
            .then_with(|| lex_cmp_masks(self.mask, other.mask))
    }
}

fn lex_cmp_masks(a: u32, b: u32) -> Ordering {
    if a == b {
        return Ordering::Equal;
    }
    let d = (a ^ b).trailing_zeros();
    let (holder, other) = if a & (1 << d) != 0 { (a, b) } else { (b, a) };
    // The set holding `d` is smaller unless the other set ends before `d`.
    let holder_smaller = d < 31 && (other >> (d + 1)) != 0;
    let a_smaller = (holder == a) == holder_smaller;
    if a_smaller {
        Ordering::Less
    } else {
        Ordering::Greater
    }
}

/// Exhaustive minimum over all cuts, node 0 fixed inside `S`.
pub fn cheeger_exact(g: &Graph) -> Result<CheegerResult> {
    let n = g.node_count();
    if n > EXACT_CHEEGER_MAX_NODES {
        return Err(Error::TooLarge {
            n,
            max: EXACT_CHEEGER_MAX_NODES,
        });
    }
    check_cheeger_input(g)?;

    let adj: Vec<u32> = (0..n)
        .map(|u| g.neighbors(u).iter().fold(0u32, |m, &v| m | (1 << v)))
        .collect();
    let deg: Vec<u64> = (0..n).map(|u| g.degree(u) as u64).collect();
    let full: u32 = if n == 32 { u32::MAX } else { (1u32 << n) - 1 };

    // Subsets of nodes 1..n are enumerated in Gray-code order; index i maps
    // to S = {0} ∪ (gray(i) << 1).
    let total: u64 = 1 << (n - 1);
    const CHUNK: u64 = 1 << 14;
    let chunks = total.div_ceil(CHUNK);

    let best = (0..chunks)
        .into_par_iter()
        .filter_map(|c| {
            let lo = c * CHUNK;
            let hi = (lo + CHUNK).min(total);
            let gray = |i: u64| (i ^ (i >> 1)) as u32;
            let mut set = 1 | (gray(lo) << 1);
            let mut cut: u64 = (0..n)
                .filter(|&u| set & (1 << u) != 0)
                .map(|u| (adj[u] & !set).count_ones() as u64)
                .sum();
            let mut best: Option<Candidate> = None;
            let mut consider = |set: u32, cut: u64| {
                if set == full {
                    return;
                }
                let size = set.count_ones() as u64;
                let cand = Candidate {
                    cut,
                    small: size.min(n as u64 - size),
                    mask: set,
                };
                if best.is_none_or(|b| cand.cmp(&b) == Ordering::Less) {
                    best = Some(cand);
                }
            };
            consider(set, cut);
            for i in lo + 1..hi {
                let v = i.trailing_zeros() as usize + 1;
                let bit = 1u32 << v;
                let inside = (adj[v] & set & !bit).count_ones() as u64;
                let delta = deg[v] as i64 - 2 * inside as i64;
                if set & bit == 0 {
                    set |= bit;
                    cut = (cut as i64 + delta) as u64;
                } else {
                    set &= !bit;
                    cut = (cut as i64 - delta) as u64;
                }
                consider(set, cut);
            }
            best
        })
        .min_by(|a, b| a.cmp(b))
        .expect("a connected graph with n >= 2 has a proper cut");

    Ok(CheegerResult {
        value: best.cut as f64 / best.small as f64,
        cut_edges: best.cut as usize,
        witness_set: (0..n).filter(|&u| best.mask & (1 << u) != 0).collect(),
        exact: true,
    })
}

/// Best prefix cut of nodes ordered by the degree-scaled Fiedler vector.
/// Always an upper bound on the Cheeger constant.
pub fn cheeger_sweep(g: &Graph) -> Result<CheegerResult> {
    check_cheeger_input(g)?;
    let n = g.node_count();
    let (_, fiedler, _) = fiedler_pair(g)?;
    let embed: Vec<f64> = (0..n)
        .map(|u| fiedler[u] / (g.degree(u) as f64).sqrt())
        .collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| embed[a].total_cmp(&embed[b]).then(a.cmp(&b)));

    let mut inside = vec![false; n];
    let mut cut: i64 = 0;
    let mut best: Option<(u64, u64, usize)> = None;
    for (k, &v) in order[..n - 1].iter().enumerate() {
        let in_nb = g.neighbors(v).iter().filter(|&&w| inside[w]).count() as i64;
        cut += g.degree(v) as i64 - 2 * in_nb;
        inside[v] = true;
        let size = (k + 1) as u64;
        let small = size.min(n as u64 - size);
        let c = cut as u64;
        if best.is_none_or(|(bc, bs, _)| c * bs < bc * small) {
            best = Some((c, small, k + 1));
        }
    }
    let (c, small, len) = best.expect("n >= 2 gives at least one prefix");
    let mut witness_set = order[..len].to_vec();
    witness_set.sort_unstable();
    Ok(CheegerResult {
        value: c as f64 / small as f64,
        cut_edges: c as usize,
        witness_set,
        exact: false,
    })
}

/// Second-smallest eigenvalue of the symmetric normalized Laplacian.
pub fn lambda2(g: &Graph) -> Result<SpectralResult> {
    let (lambda2, _, residual) = fiedler_pair(g)?;
    Ok(SpectralResult { lambda2, residual })
}

pub fn normalized_laplacian(g: &Graph) -> DMatrix<f64> {
    let n = g.node_count();
    let inv_sqrt: Vec<f64> = (0..n).map(|u| inv_sqrt_degree(g, u)).collect();
    let mut l = DMatrix::zeros(n, n);
    for u in 0..n {
        if g.degree(u) > 0 {
            l[(u, u)] = 1.0;
        }
        for &v in g.neighbors(u) {
            l[(u, v)] = -inv_sqrt[u] * inv_sqrt[v];
        }
    }
    l
}

fn inv_sqrt_degree(g: &Graph, u: usize) -> f64 {
    match g.degree(u) {
        0 => 0.0,
        d => 1.0 / (d as f64).sqrt(),
    }
}

/// `y = L x` without forming `L`.
fn apply_laplacian(g: &Graph, inv_sqrt: &[f64], x: &[f64], y: &mut [f64]) {
    for (u, yu) in y.iter_mut().enumerate() {
        let acc: f64 = g.neighbors(u).iter().map(|&v| inv_sqrt[v] * x[v]).sum();
        *yu = x[u] - inv_sqrt[u] * acc;
    }
}

fn residual_norm(g: &Graph, lambda: f64, x: &[f64]) -> f64 {
    let inv_sqrt: Vec<f64> = (0..g.node_count()).map(|u| inv_sqrt_degree(g, u)).collect();
    let mut y = vec![0.0; x.len()];
    apply_laplacian(g, &inv_sqrt, x, &mut y);
    y.iter()
        .zip(x)
        .map(|(a, b)| (a - lambda * b).powi(2))
        .sum::<f64>()
        .sqrt()
}

/// Returns `(lambda2, unit eigenvector, residual)`.
pub(crate) fn fiedler_pair(g: &Graph) -> Result<(f64, Vec<f64>, f64)> {
    if g.node_count() < 2 {
        return Err(Error::InvalidParameter(
            "lambda2 needs at least two nodes".into(),
        ));
    }
    g.ensure_connected()?;
    let (lambda, vector) = if g.node_count() < DENSE_EIGEN_LIMIT {
        dense_fiedler(g)
    } else {
        lanczos_fiedler(g)?
    };
    let residual = residual_norm(g, lambda, &vector);
    if residual > EIGEN_TOLERANCE {
        return Err(Error::NoConvergence { residual });
    }
    Ok((lambda, vector, residual))
}

fn dense_fiedler(g: &Graph) -> (f64, Vec<f64>) {
    let eig = SymmetricEigen::new(normalized_laplacian(g));
    let mut idx: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    idx.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let i = idx[1];
    let v = eig.eigenvectors.column(i);
    let norm = v.norm();
    (eig.eigenvalues[i], v.iter().map(|x| x / norm).collect())
}

/// Lanczos with full reorthogonalization on the complement of the known
/// null vector `D^{1/2} 1`.
fn lanczos_fiedler(g: &Graph) -> Result<(f64, Vec<f64>)> {
    let n = g.node_count();
    let inv_sqrt: Vec<f64> = (0..n).map(|u| inv_sqrt_degree(g, u)).collect();
    let null: Vec<f64> = {
        let raw: Vec<f64> = (0..n).map(|u| (g.degree(u) as f64).sqrt()).collect();
        let norm = dot(&raw, &raw).sqrt();
        raw.into_iter().map(|x| x / norm).collect()
    };

    // Deterministic start vector.
    let mut q: Vec<f64> = (0..n)
        .map(|i| ((i.wrapping_mul(2654435761) % 1000) as f64) / 1000.0 - 0.5)
        .collect();
    let mut basis: Vec<Vec<f64>> = Vec::new();
    orthogonalize(&mut q, &null, &basis);
    normalize(&mut q);

    let mut alphas: Vec<f64> = Vec::new();
    let mut betas: Vec<f64> = Vec::new();
    let mut w = vec![0.0; n];
    let max_dim = n - 1;
    let mut last_residual = f64::INFINITY;

    loop {
        apply_laplacian(g, &inv_sqrt, &q, &mut w);
        let a = dot(&w, &q);
        alphas.push(a);
        basis.push(std::mem::take(&mut q));
        let mut r = w.clone();
        orthogonalize(&mut r, &null, &basis);
        let beta = dot(&r, &r).sqrt();
        let k = basis.len();

        let exhausted = beta < 1e-12 || k >= max_dim;
        if k.is_multiple_of(16) || exhausted {
            let (theta, s) = tridiagonal_min(&alphas, &betas);
            let estimate = beta * s[k - 1].abs();
            if estimate < EIGEN_TOLERANCE * 0.1 || exhausted {
                let mut x = vec![0.0; n];
                for (coef, vec) in s.iter().zip(&basis) {
                    axpy(*coef, vec, &mut x);
                }
                normalize(&mut x);
                let res = residual_norm(g, theta, &x);
                if res <= EIGEN_TOLERANCE {
                    return Ok((theta, x));
                }
                last_residual = res;
                if exhausted {
                    return Err(Error::NoConvergence {
                        residual: last_residual,
                    });
                }
            }
        }
        if beta < 1e-12 {
            return Err(Error::NoConvergence {
                residual: last_residual,
            });
        }
        betas.push(beta);
        q = r.into_iter().map(|x| x / beta).collect();
    }
}

fn tridiagonal_min(alphas: &[f64], betas: &[f64]) -> (f64, Vec<f64>) {
    let k = alphas.len();
    let mut t = DMatrix::zeros(k, k);
    for i in 0..k {
        t[(i, i)] = alphas[i];
        if i + 1 < k {
            t[(i, i + 1)] = betas[i];
            t[(i + 1, i)] = betas[i];
        }
    }
    let eig = SymmetricEigen::new(t);
    let i = eig.eigenvalues.imin();
    let s: DVector<f64> = eig.eigenvectors.column(i).into_owned();
    (eig.eigenvalues[i], s.iter().copied().collect())
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn axpy(a: f64, x: &[f64], y: &mut [f64]) {
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi += a * xi;
    }
}

fn normalize(x: &mut [f64]) {
    let norm = dot(x, x).sqrt();
    x.iter_mut().for_each(|v| *v /= norm);
}

fn orthogonalize(x: &mut [f64], null: &[f64], basis: &[Vec<f64>]) {
    // Two passes keep the basis orthogonal to working precision.
    for _ in 0..2 {
        let c = dot(x, null);
        axpy(-c, null, x);
        for b in basis {
            let c = dot(x, b);
            axpy(-c, b, x);
        }
    }
}
