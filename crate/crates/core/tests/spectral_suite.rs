//! Spectral routines against a dense eigensolver oracle (nalgebra's Schur
//! decomposition), plus scale- and transpose-invariance properties.

mod common;

use nalgebra::DMatrix;
use pba_core::linalg::FMatrix;
use pba_core::spectral::{pf_eigendata, pf_projector, ProjectorMode, SpectralConfig};
use pba_core::util::SplitMix64;

fn random_positive(rng: &mut SplitMix64, dim: usize) -> FMatrix {
    let rows = (0..dim)
        .map(|_| (0..dim).map(|_| 0.1 + rng.next_f64()).collect())
        .collect();
    FMatrix::from_rows(rows)
}

fn to_na(m: &FMatrix) -> DMatrix<f64> {
    DMatrix::from_fn(m.nrows(), m.ncols(), |i, j| m[(i, j)])
}

#[test]
fn lambda_matches_dense_oracle_on_fixed_matrices() {
    let cfg = SpectralConfig::default();
    let mut rng = SplitMix64::new(12345);
    for _ in 0..20 {
        let dim = 2 + (rng.next_below(7) as usize);
        let m = random_positive(&mut rng, dim);
        let pf = pf_eigendata(&m, &cfg).unwrap();
        let eigen = to_na(&m).complex_eigenvalues();
        let oracle_max = eigen.iter().map(|z| z.norm()).fold(0.0_f64, f64::max);
        assert!(
            (pf.lambda - oracle_max).abs() <= 1e-9 * oracle_max,
            "lambda {} vs oracle {}",
            pf.lambda,
            oracle_max
        );
    }
}

#[test]
fn eigenvector_matches_oracle_nullspace() {
    let cfg = SpectralConfig::default();
    let mut rng = SplitMix64::new(777);
    for _ in 0..10 {
        let dim = 3 + (rng.next_below(4) as usize);
        let m = random_positive(&mut rng, dim);
        let pf = pf_eigendata(&m, &cfg).unwrap();
        // Oracle eigenvector: smallest-singular-value direction of M - lambda I.
        let shifted = to_na(&m) - DMatrix::identity(dim, dim) * pf.lambda;
        let svd = shifted.svd(true, true);
        let (k, _) = svd
            .singular_values
            .iter()
            .enumerate()
            .min_by(|a, b| a.1.partial_cmp(b.1).unwrap())
            .unwrap();
        let vt = svd.v_t.as_ref().unwrap();
        let mut oracle: Vec<f64> = (0..dim).map(|j| vt[(k, j)]).collect();
        let sum: f64 = oracle.iter().sum();
        for x in oracle.iter_mut() {
            *x /= sum;
        }
        for (a, b) in pf.v.iter().zip(&oracle) {
            assert!((a - b).abs() < 1e-7, "{:?} vs {:?}", pf.v, oracle);
        }
    }
}

#[test]
fn projector_modes_agree() {
    let cfg = SpectralConfig::default();
    let mut rng = SplitMix64::new(99);
    for _ in 0..10 {
        let m = random_positive(&mut rng, 4);
        let pf = pf_eigendata(&m, &cfg).unwrap();
        let outer = pf_projector(&m, &pf, ProjectorMode::Outer, &cfg).unwrap();
        let limit = pf_projector(&m, &pf, ProjectorMode::Limit, &cfg).unwrap();
        assert!(limit.max_abs_diff(&outer) < 1e-8);
        // The projector is idempotent.
        assert!(limit.mul(&limit).max_abs_diff(&limit) < 1e-8);
    }
}

#[test]
fn scale_invariance() {
    let cfg = SpectralConfig::default();
    let mut rng = SplitMix64::new(2024);
    for _ in 0..10 {
        let dim = 2 + (rng.next_below(5) as usize);
        let m = random_positive(&mut rng, dim);
        let alpha = 0.25 + 3.0 * rng.next_f64();
        let a = pf_eigendata(&m, &cfg).unwrap();
        let b = pf_eigendata(&m.scale(alpha), &cfg).unwrap();
        assert!((b.lambda - alpha * a.lambda).abs() <= 1e-9 * (alpha * a.lambda));
    }
}

#[test]
fn transpose_invariance() {
    let cfg = SpectralConfig::default();
    let mut rng = SplitMix64::new(5150);
    for _ in 0..10 {
        let dim = 2 + (rng.next_below(7) as usize);
        let m = random_positive(&mut rng, dim);
        let mt = FMatrix::from_fn(dim, dim, |i, j| m[(j, i)]);
        let a = pf_eigendata(&m, &cfg).unwrap();
        let b = pf_eigendata(&mt, &cfg).unwrap();
        assert!((a.lambda - b.lambda).abs() <= 1e-9 * a.lambda);
    }
}

#[test]
fn regular_module_group_sum_has_order_eigenvalue() {
    use pba_core::based_modules::BasedModule;
    use pba_core::scalar::rat_int;
    use pba_core::spectral::pf_action_matrix;

    for (table, order) in [
        (common::c2_table(), 2.0),
        (common::s3_table(), 6.0),
        (common::d4_table(), 8.0),
    ] {
        let alg = common::algebra_of(&table);
        let module = BasedModule::regular(alg.clone());
        let ones = vec![rat_int(1); alg.dim()];
        let action = pf_action_matrix(&module, &ones).unwrap();
        let pf = pf_eigendata(&action.to_f64(), &SpectralConfig::default()).unwrap();
        assert!((pf.lambda - order).abs() <= 1e-9 * order);
    }
}
