use alloc::vec;
use alloc::vec::Vec;

#[allow(unused_imports)] // shadowed by inherent methods when std is linked
use num_traits::Float;

use super::{LinalgError, RealMatrix};

/// Floor applied to Perron weights before they are used as norm weights.
pub const W_FLOOR: f64 = 1e-12;

const MAX_ITERS: usize = 200_000;
const RESIDUAL_TOL: f64 = 1e-13;

/// Spectral radius of a nonnegative matrix with its right Perron vector.
#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct PerronResult {
    pub radius: f64,
    /// Unit 2-norm, entrywise nonnegative.
    pub vector: Vec<f64>,
    /// Set when the matrix is reducible or the vector has entries below
    /// [`W_FLOOR`]; the vector may then not be strictly positive or unique.
    pub degenerate: bool,
    /// `||A w - radius w||_2` at exit.
    pub residual: f64,
    pub iterations: usize,
}

impl PerronResult {
    /// Perron vector with entries floored at [`W_FLOOR`], safe as norm weights.
    pub fn weights(&self) -> Vec<f64> {
        self.vector.iter().map(|&w| w.max(W_FLOOR)).collect()
    }
}

/// Spectral radius as the largest radius over the strongly connected
/// components, each found by power iteration on `A_c + c I` with `c` the
/// largest entry of the block.
///
/// The shift makes the iteration matrix primitive for every irreducible
/// block (so periodic matrices such as `[[0, 1], [1, 0]]` converge) without
/// moving the eigenvector; the radius is recovered as a Rayleigh-type ratio on
/// the block itself. Splitting into components keeps reducible inputs such as
/// nilpotent matrices from stalling on a Jordan block. The returned vector
/// comes from the same iteration on the whole matrix.
pub fn spectral_radius(a: &RealMatrix) -> Result<PerronResult, LinalgError> {
    if a.rows() != a.cols() {
        return Err(LinalgError::NotSquare {
            rows: a.rows(),
            cols: a.cols(),
        });
    }
    if !a.as_slice().iter().all(|x| x.is_finite()) {
        return Err(LinalgError::NonFinite);
    }
    if !a.is_nonnegative() {
        return Err(LinalgError::NegativeEntry);
    }
    let n = a.rows();
    if n == 0 {
        return Ok(PerronResult {
            radius: 0.0,
            vector: Vec::new(),
            degenerate: true,
            residual: 0.0,
            iterations: 0,
        });
    }

    let comps = strong_components(a);
    let whole = power_iteration(a);
    if comps.len() == 1 {
        let degenerate = whole.vector.iter().any(|&x| x < W_FLOOR);
        return Ok(PerronResult { degenerate, ..whole });
    }
    let mut radius = 0.0_f64;
    for c in &comps {
        let r = if c.len() == 1 {
            a[(c[0], c[0])]
        } else {
            power_iteration(&RealMatrix::from_fn(c.len(), c.len(), |i, j| a[(c[i], c[j])])).radius
        };
        radius = radius.max(r);
    }
    Ok(PerronResult {
        radius,
        degenerate: true,
        ..whole
    })
}

fn power_iteration(a: &RealMatrix) -> PerronResult {
    let n = a.rows();
    let scale = a.as_slice().iter().fold(0.0_f64, |m, &x| m.max(x));
    let shift = if scale > 0.0 { scale } else { 1.0 };
    let mut w = vec![1.0 / (n as f64).sqrt(); n];
    let mut radius = 0.0;
    let mut residual = f64::INFINITY;
    let mut iterations = 0;
    for it in 1..=MAX_ITERS {
        iterations = it;
        let aw = a.mul_vec(&w);
        radius = dot(&w, &aw);
        residual = aw
            .iter()
            .zip(&w)
            .map(|(x, y)| (x - radius * y).powi(2))
            .sum::<f64>()
            .sqrt();
        if residual <= RESIDUAL_TOL * scale.max(1.0) {
            break;
        }
        let mut next: Vec<f64> = aw.iter().zip(&w).map(|(x, y)| x + shift * y).collect();
        let norm = dot(&next, &next).sqrt();
        for x in &mut next {
            *x /= norm;
        }
        w = next;
    }
    PerronResult {
        radius: radius.max(0.0),
        vector: w,
        degenerate: false,
        residual,
        iterations,
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Strongly connected components of the directed graph with an edge
/// `i -> j` wherever `a[i][j] > 0`.
fn strong_components(a: &RealMatrix) -> Vec<Vec<usize>> {
    let n = a.rows();
    let reach = |start: usize, forward: bool| {
        let mut seen = vec![false; n];
        let mut stack = vec![start];
        seen[start] = true;
        while let Some(i) = stack.pop() {
            for j in 0..n {
                let edge = if forward { a[(i, j)] } else { a[(j, i)] };
                if edge > 0.0 && !seen[j] {
                    seen[j] = true;
                    stack.push(j);
                }
            }
        }
        seen
    };
    let mut assigned = vec![false; n];
    let mut comps = Vec::new();
    for i in 0..n {
        if assigned[i] {
            continue;
        }
        let (fwd, bwd) = (reach(i, true), reach(i, false));
        let comp: Vec<usize> = (0..n).filter(|&j| fwd[j] && bwd[j]).collect();
        for &j in &comp {
            assigned[j] = true;
        }
        comps.push(comp);
    }
    comps
}
