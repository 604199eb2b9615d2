use mimo_ee_core::linalg::{
    complexify, compact_svd, hermitian_evd, pseudo_inverse, psd_trace_projection, realify, spectral_radius, CMatrix,
    Hermitian, RealMatrix, C64,
};
use mimo_ee_core::sampling::{complex_gaussian_matrix, random_hermitian, random_psd_in_budget, rng_from_seed};
use nalgebra::DMatrix;
use proptest::prelude::*;
use rand::Rng;

fn to_na(m: &CMatrix) -> DMatrix<C64> {
    DMatrix::from_fn(m.rows(), m.cols(), |i, j| m[(i, j)])
}

fn to_na_real(m: &RealMatrix) -> DMatrix<f64> {
    DMatrix::from_fn(m.rows(), m.cols(), |i, j| m[(i, j)])
}

fn unitary_defect(u: &CMatrix) -> f64 {
    u.adjoint_mul(u).unwrap().max_abs_diff(&CMatrix::identity(u.cols()))
}

fn random_nonneg(seed: u64, n: usize, density: f64) -> RealMatrix {
    let mut rng = rng_from_seed(seed);
    RealMatrix::from_fn(n, n, |_, _| {
        if rng.random::<f64>() < density {
            rng.random::<f64>() * 3.0
        } else {
            0.0
        }
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn evd_reconstructs_and_matches_reference(n in 1usize..=8, seed in any::<u64>()) {
        let a = random_hermitian(&mut rng_from_seed(seed), n, 3.0);
        let eig = hermitian_evd(&a);
        let scale = a.max_abs().max(1.0);
        prop_assert!(eig.reconstruct().max_abs_diff(&a) <= 1e-10 * scale);
        prop_assert!(unitary_defect(&eig.vectors) <= 1e-10);
        prop_assert!(eig.values.windows(2).all(|w| w[0] >= w[1]));
        let mut reference: Vec<f64> = to_na(&a).symmetric_eigenvalues().iter().copied().collect();
        reference.sort_by(|x, y| y.partial_cmp(x).unwrap());
        for (x, y) in eig.values.iter().zip(&reference) {
            prop_assert!((x - y).abs() <= 1e-9 * scale);
        }
    }

    #[test]
    fn svd_reconstructs_and_matches_reference(m in 1usize..=8, n in 1usize..=8, seed in any::<u64>()) {
        let a = complex_gaussian_matrix(&mut rng_from_seed(seed), m, n, 1.0);
        let svd = compact_svd(&a);
        let scale = a.max_abs().max(1.0);
        prop_assert!(svd.reconstruct().max_abs_diff(&a) <= 1e-10 * scale);
        prop_assert!(unitary_defect(&svd.u) <= 1e-10);
        prop_assert!(unitary_defect(&svd.v) <= 1e-10);
        let mut reference: Vec<f64> = to_na(&a).singular_values().iter().copied().collect();
        reference.sort_by(|x, y| y.partial_cmp(x).unwrap());
        prop_assert_eq!(svd.rank(), m.min(n));
        for (x, y) in svd.sigma.iter().zip(&reference) {
            prop_assert!((x - y).abs() <= 1e-9 * scale);
        }
    }

    #[test]
    fn pseudo_inverse_satisfies_penrose_conditions(m in 1usize..=8, n in 1usize..=8, k in 1usize..=8, seed in any::<u64>()) {
        // Rank at most k: product of m x k and k x n factors.
        let mut rng = rng_from_seed(seed);
        let a = complex_gaussian_matrix(&mut rng, m, k, 1.0)
            .matmul(&complex_gaussian_matrix(&mut rng, k, n, 1.0))
            .unwrap();
        let x = pseudo_inverse(&a);
        let tol = 1e-8 * a.max_abs().max(1.0) * x.max_abs().max(1.0);
        let ax = a.matmul(&x).unwrap();
        let xa = x.matmul(&a).unwrap();
        prop_assert!(ax.matmul(&a).unwrap().max_abs_diff(&a) <= tol);
        prop_assert!(xa.matmul(&x).unwrap().max_abs_diff(&x) <= tol);
        prop_assert!(ax.hermitian_deviation() <= tol);
        prop_assert!(xa.hermitian_deviation() <= tol);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn realify_is_a_ring_homomorphism(m in 1usize..=5, k in 1usize..=5, n in 1usize..=5, seed in any::<u64>()) {
        let mut rng = rng_from_seed(seed);
        let x = complex_gaussian_matrix(&mut rng, m, k, 1.0);
        let y = complex_gaussian_matrix(&mut rng, k, n, 1.0);
        let lhs = realify(&x.matmul(&y).unwrap());
        let rhs = realify(&x).matmul(&realify(&y)).unwrap();
        prop_assert!(lhs.max_abs_diff(&rhs) <= 1e-10 * lhs.frobenius_norm().max(1.0));
        prop_assert!(realify(&x.adjoint()).max_abs_diff(&realify(&x).transpose()) == 0.0);
        prop_assert_eq!(complexify(&realify(&x)).unwrap(), x.clone());
        let fro = realify(&x).frobenius_norm();
        prop_assert!((fro * fro - 2.0 * x.frobenius_norm_sqr()).abs() <= 1e-10 * fro * fro);
    }

    #[test]
    fn realify_preserves_symmetry_and_doubles_spectra(n in 1usize..=5, seed in any::<u64>()) {
        let mut rng = rng_from_seed(seed);
        let h = random_hermitian(&mut rng, n, 2.0);
        let r = realify(&h);
        prop_assert!(r.max_abs_diff(&r.transpose()) == 0.0);
        prop_assert!((r.trace() - 2.0 * h.trace().re).abs() <= 1e-12 * r.frobenius_norm().max(1.0));
        let mut doubled: Vec<f64> = hermitian_evd(&h).values.iter().flat_map(|&v| [v, v]).collect();
        doubled.sort_by(|a, b| b.partial_cmp(a).unwrap());
        let mut reference: Vec<f64> = to_na_real(&r).symmetric_eigenvalues().iter().copied().collect();
        reference.sort_by(|a, b| b.partial_cmp(a).unwrap());
        for (a, b) in doubled.iter().zip(&reference) {
            prop_assert!((a - b).abs() <= 1e-10 * h.max_abs().max(1.0));
        }
        // A non-Hermitian matrix maps to a non-symmetric one.
        let z = complex_gaussian_matrix(&mut rng, n, n, 1.0);
        let rz = realify(&z);
        prop_assert_eq!(z.hermitian_deviation() > 1e-12, rz.max_abs_diff(&rz.transpose()) > 1e-12);
    }

    #[test]
    fn spectral_radius_matches_reference_and_is_monotone(n in 1usize..=7, density in 0.2f64..1.0, seed in any::<u64>()) {
        let a = random_nonneg(seed, n, density);
        let bump = random_nonneg(seed ^ 0x9e37_79b9, n, density);
        let b = RealMatrix::from_fn(n, n, |i, j| a[(i, j)] + bump[(i, j)]);
        let ra = spectral_radius(&a).unwrap();
        let rb = spectral_radius(&b).unwrap();
        // Bounded Schur iterations: the unbounded default can cycle on some inputs.
        let schur = nalgebra::Schur::try_new(to_na_real(&a), f64::EPSILON, 10_000);
        prop_assume!(schur.is_some());
        let reference = schur.unwrap().complex_eigenvalues().iter().map(|z| z.norm()).fold(0.0, f64::max);
        // Defective eigenvalues of reducible inputs are only computed to
        // about eps^(1/n) by the reference.
        let mut tol = 1e-7 * reference.max(1.0);
        if ra.degenerate {
            let top = a.as_slice().iter().fold(0.0f64, |m, &x| m.max(x));
            tol += 10.0 * f64::EPSILON.powf(1.0 / n as f64) * top;
        }
        prop_assert!((ra.radius - reference).abs() <= tol, "{} vs {}", ra.radius, reference);
        prop_assert!(ra.radius <= rb.radius + 1e-9 * rb.radius.max(1.0));
        let sym = spectral_radius(&a.symmetric_part()).unwrap();
        prop_assert!(ra.radius <= sym.radius + 1e-9);
    }

    #[test]
    fn trace_projection_is_feasible_and_optimal(n in 1usize..=6, p in 0.0f64..5.0, seed in any::<u64>()) {
        let mut rng = rng_from_seed(seed);
        let a = random_hermitian(&mut rng, n, 3.0);
        let x = psd_trace_projection(&a, p).unwrap();
        prop_assert!(hermitian_evd(&x).min_value() >= -1e-12);
        prop_assert!((x.trace_re() - p).abs() <= 1e-10 * p.max(1.0));
        // Variational characterization: <A - X, Y - X> <= 0 for every feasible Y.
        for _ in 0..5 {
            let mut y = random_psd_in_budget(&mut rng, n, p);
            let t = y.trace_re();
            if t > 0.0 {
                y = y.scale_h(p / t);
            }
            let lhs = a.sub_h(&x).inner_re(&y.sub_h(&x));
            prop_assert!(lhs <= 1e-9 * a.max_abs().max(1.0) * p.max(1.0));
        }
    }
}

#[test]
fn schwenk_ordering_on_a_thousand_matrices() {
    for seed in 0..1000 {
        let n = 2 + (seed % 7) as usize;
        let s = random_nonneg(seed, n, 0.7);
        let s = RealMatrix::from_fn(n, n, |i, j| if i == j { 0.0 } else { s[(i, j)] });
        let r = spectral_radius(&s).unwrap().radius;
        let rs = spectral_radius(&s.symmetric_part()).unwrap().radius;
        assert!(r <= rs + 1e-9, "seed {seed}: {r} > {rs}");
    }
}

#[test]
fn imaginary_unit_realifies_to_rotation() {
    let z = CMatrix::from_vec(1, 1, vec![C64::new(0.0, 1.0)]).unwrap();
    let r = realify(&z);
    assert_eq!(r.as_slice(), &[0.0, -1.0, 1.0, 0.0]);
    let h = Hermitian::from_real_diag(&[2.0]);
    assert_eq!(realify(&h).as_slice(), &[2.0, 0.0, 0.0, 2.0]);
}
