//! Random matrix generators shared by channel generation and the numerical
//! verifiers. All generators take the RNG explicitly so every experiment is
//! reproducible from a single seed.

use alloc::vec::Vec;

#[allow(unused_imports)] // shadowed by inherent methods when std is linked
use num_traits::Float;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Exp1, StandardNormal};

use crate::linalg::{CMatrix, Hermitian, C64};

pub type SimRng = ChaCha8Rng;

pub fn rng_from_seed(seed: u64) -> SimRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// RNG on an independent ChaCha stream of the same seed.
pub fn rng_stream(seed: u64, stream: u64) -> SimRng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

#[cfg(test)]
pub(crate) fn test_rng(seed: u64) -> SimRng {
    rng_from_seed(seed ^ 0x5eed_0000_0000)
}

/// Mixes a base seed with a path of indices (SplitMix64 finalizer per step).
pub fn derive_seed(base: u64, path: &[u64]) -> u64 {
    let mut x = base;
    for &p in path {
        x = x.wrapping_add(0x9e37_79b9_7f4a_7c15).wrapping_add(p.wrapping_mul(0xd1b5_4a32_d192_ed03));
        x = (x ^ (x >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
        x = (x ^ (x >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
        x ^= x >> 31;
    }
    x
}

/// Circularly-symmetric complex Gaussian with `E|z|^2 = variance`.
pub fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R, variance: f64) -> C64 {
    let s = (0.5 * variance).sqrt();
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    C64::new(re * s, im * s)
}

pub fn complex_gaussian_matrix<R: Rng + ?Sized>(
    rng: &mut R,
    rows: usize,
    cols: usize,
    variance: f64,
) -> CMatrix {
    CMatrix::from_fn(rows, cols, |_, _| complex_gaussian(rng, variance))
}

/// Hermitian matrix with i.i.d. Gaussian entries of the given scale.
pub fn random_hermitian<R: Rng + ?Sized>(rng: &mut R, n: usize, scale: f64) -> Hermitian {
    Hermitian::symmetrize(complex_gaussian_matrix(rng, n, n, scale * scale))
}

/// `A A^H` with `A` an `n x n` standard complex Gaussian matrix.
pub fn random_psd<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Hermitian {
    let a = complex_gaussian_matrix(rng, n, n, 1.0);
    Hermitian::symmetrize(a.matmul(&a.adjoint()).expect("square"))
}

/// Random PSD matrix rescaled to trace exactly `trace`.
pub fn random_psd_with_trace<R: Rng + ?Sized>(rng: &mut R, n: usize, trace: f64) -> Hermitian {
    let m = random_psd(rng, n);
    let t = m.trace_re();
    if t <= 0.0 || trace == 0.0 {
        return Hermitian::zeros(n);
    }
    m.scale_h(trace / t)
}

/// Random point of `{X >= 0, Tr X <= budget}`: `A A^H` rescaled to a trace
/// drawn uniformly in `[0, budget]`.
pub fn random_psd_in_budget<R: Rng + ?Sized>(rng: &mut R, n: usize, budget: f64) -> Hermitian {
    let trace = rng.random::<f64>() * budget;
    random_psd_with_trace(rng, n, trace)
}

/// Haar-distributed unitary via Gram-Schmidt on a complex Gaussian matrix.
pub fn haar_unitary<R: Rng + ?Sized>(rng: &mut R, n: usize) -> CMatrix {
    loop {
        let mut a = complex_gaussian_matrix(rng, n, n, 1.0);
        let mut ok = true;
        for j in 0..n {
            for _ in 0..2 {
                for k in 0..j {
                    let proj: C64 = (0..n).map(|i| a[(i, k)].conj() * a[(i, j)]).sum();
                    for i in 0..n {
                        let v = a[(i, k)];
                        a[(i, j)] -= v * proj;
                    }
                }
            }
            let norm = (0..n).map(|i| a[(i, j)].norm_sqr()).sum::<f64>().sqrt();
            if norm < 1e-10 {
                ok = false;
                break;
            }
            for i in 0..n {
                a[(i, j)] /= norm;
            }
        }
        if ok {
            return a;
        }
    }
}

/// Uniform point on the simplex `{x >= 0, sum x = total}` (flat Dirichlet).
pub fn simplex_point<R: Rng + ?Sized>(rng: &mut R, n: usize, total: f64) -> Vec<f64> {
    let draws: Vec<f64> = (0..n).map(|_| rng.sample::<f64, _>(Exp1)).collect();
    let sum: f64 = draws.iter().sum();
    draws.iter().map(|d| total * d / sum).collect()
}

/// Full-budget covariance with a Haar eigenframe and simplex eigenvalues.
pub fn random_full_power<R: Rng + ?Sized>(rng: &mut R, n: usize, budget: f64) -> Hermitian {
    let u = haar_unitary(rng, n);
    let values = simplex_point(rng, n, budget);
    Hermitian::from_eigen(&u, &values)
}
