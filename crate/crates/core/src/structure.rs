//! Exact radical computation, submodule generation, module tops, simple
//! characters, and the cone-kernel check.
//!
//! The radical is exact over the rationals (in characteristic zero it is the
//! kernel of the trace form of the regular representation). Everything
//! downstream of a floating Perron-Frobenius eigenvector runs in f64 with a
//! pivot tolerance on 1-norm-normalized rows.

use num_traits::Zero;
use thiserror::Error;

use crate::algebra::PBAlgebra;
use crate::based_modules::BasedModule;
use crate::linalg::exact::ExactRowBasis;
use crate::linalg::float::ThinQr;
use crate::linalg::simplex::{cone_slice_feasible, cone_slice_feasible_exact};
use crate::linalg::{FMatrix, FloatRowBasis, QMatrix};
use crate::scalar::{rat_to_f64, Rat};

pub const DEFAULT_PIVOT_TOL: f64 = 1e-9;
pub const DEFAULT_CONE_EPS: f64 = 1e-7;
pub const DEFAULT_CHAR_TOL: f64 = 1e-6;

#[derive(Debug, Error, PartialEq)]
pub enum StructureError {
    #[error("zero vector cannot generate a submodule")]
    ZeroVector,
    #[error("the quotient V / rad V is zero")]
    ZeroQuotient,
    #[error("radical basis is not closed under multiplication by basis element {0}")]
    RadicalNotIdeal(usize),
    #[error("radical ideal chain does not reach zero")]
    RadicalNotNilpotent,
    #[error("action leaves the supplied subspace (residual {residual:e}); it is not invariant")]
    NotInvariant { residual: f64 },
    #[error("quotient basis is numerically degenerate")]
    DegenerateBasis,
    #[error("character trace at the unit ({got}) does not match the quotient dimension {dim}")]
    TraceSanity { got: f64, dim: usize },
    #[error("feasibility search did not terminate")]
    SimplexStalled,
}

impl StructureError {
    pub fn is_consistency(&self) -> bool {
        matches!(
            self,
            StructureError::RadicalNotIdeal(_)
                | StructureError::RadicalNotNilpotent
                | StructureError::NotInvariant { .. }
                | StructureError::TraceSanity { .. }
        )
    }
}

/// Exact basis of the radical, as fully reduced row vectors in algebra
/// coordinates.
#[derive(Debug, Clone)]
pub struct RadicalBasis {
    basis: ExactRowBasis,
}

impl RadicalBasis {
    pub fn dim(&self) -> usize {
        self.basis.dim()
    }

    pub fn rows(&self) -> &[Vec<Rat>] {
        self.basis.rows()
    }

    pub fn is_zero(&self) -> bool {
        self.basis.dim() == 0
    }

    pub fn contains(&self, v: &[Rat]) -> bool {
        self.basis.contains(v)
    }
}

/// Radical of a validated algebra over Q: the nullspace of the Gram matrix
/// `G[i][j] = tr(regular action of a_i a_j)`. The span is verified to be a
/// nilpotent two-sided ideal before it is returned.
pub fn radical(alg: &PBAlgebra) -> Result<RadicalBasis, StructureError> {
    let n = alg.dim();
    let traces: Vec<Rat> = (0..n).map(|k| alg.regular_trace(k)).collect();
    let mut gram = QMatrix::zeros(n, n);
    for (&(i, j, k), g) in alg.gamma_iter() {
        if !traces[k].is_zero() {
            gram[(i, j)] += g * &traces[k];
        }
    }
    let mut basis = ExactRowBasis::new();
    for v in gram.nullspace() {
        basis.insert(v);
    }
    // Closure under left and right multiplication by every basis element.
    for i in 0..n {
        let e = alg.basis_vector(i);
        for r in basis.rows().to_vec() {
            let left = alg.multiply_exact(&e, &r).expect("dimensions agree");
            let right = alg.multiply_exact(&r, &e).expect("dimensions agree");
            if !basis.contains(&left) || !basis.contains(&right) {
                return Err(StructureError::RadicalNotIdeal(i));
            }
        }
    }
    // Nilpotency: powers of the ideal must vanish.
    let mut current = basis.clone();
    for _ in 0..n + 1 {
        if current.dim() == 0 {
            return Ok(RadicalBasis { basis });
        }
        let mut next = ExactRowBasis::new();
        for u in current.rows() {
            for w in basis.rows() {
                let p = alg.multiply_exact(u, w).expect("dimensions agree");
                next.insert(p);
            }
        }
        if next.dim() >= current.dim() {
            return Err(StructureError::RadicalNotNilpotent);
        }
        current = next;
    }
    Err(StructureError::RadicalNotNilpotent)
}

/// The trace vector of a module in its given basis: one trace per algebra
/// basis element. Fingerprints an isomorphism class of simple modules in
/// characteristic zero.
#[derive(Debug, Clone)]
pub struct SimpleCharacter {
    pub traces: Vec<f64>,
    pub dim: usize,
    /// Which construction produced this character.
    pub source: String,
}

impl SimpleCharacter {
    pub fn max_distance(&self, other: &SimpleCharacter) -> f64 {
        self.traces
            .iter()
            .zip(&other.traces)
            .fold(0.0_f64, |m, (a, b)| m.max((a - b).abs()))
    }

    /// Equality criterion: equal dimension and max-norm distance below `tol`.
    pub fn agrees(&self, other: &SimpleCharacter, tol: f64) -> bool {
        self.dim == other.dim
            && self.traces.len() == other.traces.len()
            && self.max_distance(other) < tol
    }
}

/// Row basis of A.v inside a based module, closed under all action matrices.
pub fn generated_submodule(
    module: &BasedModule,
    v: &[f64],
    pivot_tol: f64,
) -> Result<FloatRowBasis, StructureError> {
    assert_eq!(v.len(), module.dim());
    let mut basis = FloatRowBasis::new(module.dim(), pivot_tol);
    if !basis.insert(v) {
        return Err(StructureError::ZeroVector);
    }
    let actions: Vec<FMatrix> = module.actions().iter().map(QMatrix::to_f64).collect();
    loop {
        let mut grew = false;
        for row in basis.rows().to_vec() {
            for m in &actions {
                if basis.insert(&m.mat_vec(&row)) {
                    grew = true;
                }
            }
        }
        if !grew {
            return Ok(basis);
        }
    }
}

/// Action matrices of a module restricted to an invariant subspace and
/// quotiented by rad(A) times it, with the character of the quotient.
#[derive(Debug, Clone)]
pub struct ModuleTop {
    /// Quotient action per algebra basis element (dim x dim).
    pub actions: Vec<FMatrix>,
    pub character: SimpleCharacter,
    /// Basis of the kernel rad(A).V of V -> top, as vectors in module
    /// coordinates.
    pub kernel: Vec<Vec<f64>>,
    pub dim: usize,
}

/// V / (rad(A).V) for an invariant subspace V given by a float row basis.
pub fn module_top(
    module: &BasedModule,
    subspace: &FloatRowBasis,
    rad: &RadicalBasis,
    pivot_tol: f64,
    source: &str,
) -> Result<ModuleTop, StructureError> {
    let mdim = module.dim();
    assert_eq!(subspace.ambient(), mdim);
    let actions: Vec<FMatrix> = module.actions().iter().map(QMatrix::to_f64).collect();
    // W = rad . V.
    let mut w = FloatRowBasis::new(mdim, pivot_tol);
    for r in rad.rows() {
        let rm = module.element_action(r).to_f64();
        for x in subspace.rows() {
            w.insert(&rm.mat_vec(x));
        }
    }
    // Complete W to a basis of V; the complement represents the quotient.
    let mut full = w.clone();
    let mut complement: Vec<Vec<f64>> = Vec::new();
    for x in subspace.rows() {
        if full.insert(x) {
            complement.push(x.clone());
        }
    }
    let q = complement.len();
    if q == 0 {
        return Err(StructureError::ZeroQuotient);
    }
    let mut columns: Vec<Vec<f64>> = w.rows().to_vec();
    columns.extend(complement.iter().cloned());
    let qr = ThinQr::new(&columns).ok_or(StructureError::DegenerateBasis)?;
    let wdim = w.dim();
    let mut top_actions = Vec::with_capacity(actions.len());
    let mut traces = Vec::with_capacity(actions.len());
    for m in &actions {
        let mut top = FMatrix::zeros(q, q);
        for (jc, c) in complement.iter().enumerate() {
            let y = m.mat_vec(c);
            let (alpha, resid) = qr.solve(&y, &columns);
            let scale = crate::linalg::float::norm1(&y).max(1.0);
            if resid > 1e-6 * scale {
                return Err(StructureError::NotInvariant { residual: resid });
            }
            for i in 0..q {
                top[(i, jc)] = alpha[wdim + i];
            }
        }
        traces.push(top.trace());
        top_actions.push(top);
    }
    let unit_trace = traces[module.algebra().unit_index()];
    if (unit_trace - q as f64).abs() > DEFAULT_CHAR_TOL {
        return Err(StructureError::TraceSanity {
            got: unit_trace,
            dim: q,
        });
    }
    Ok(ModuleTop {
        actions: top_actions,
        character: SimpleCharacter {
            traces,
            dim: q,
            source: source.to_string(),
        },
        kernel: w.rows().to_vec(),
        dim: q,
    })
}

/// Character of a based module itself (traces of the exact action matrices).
pub fn module_character(module: &BasedModule, source: &str) -> SimpleCharacter {
    let traces = module
        .actions()
        .iter()
        .map(|m| {
            let mut t = Rat::zero();
            for i in 0..m.nrows() {
                t += &m[(i, i)];
            }
            rat_to_f64(&t)
        })
        .collect();
    SimpleCharacter {
        traces,
        dim: module.dim(),
        source: source.to_string(),
    }
}

/// True iff the only nonnegative vector in the spanned kernel is zero,
/// decided by a feasibility search over the eps-relaxed normalized slice.
pub fn kernel_cone_check(
    kernel: &[Vec<f64>],
    ambient: usize,
    eps: f64,
) -> Result<bool, StructureError> {
    if kernel.is_empty() {
        return Ok(true);
    }
    match cone_slice_feasible(kernel, ambient, eps) {
        Some(feasible) => Ok(!feasible),
        None => Err(StructureError::SimplexStalled),
    }
}

/// Exact variant for rational kernels: no tolerance at all.
pub fn kernel_cone_check_exact(kernel: &[Vec<Rat>], ambient: usize) -> bool {
    if kernel.is_empty() {
        return true;
    }
    !cone_slice_feasible_exact(kernel, ambient)
}

/// Bilinear pairing of two characters through the inverse trace-form Gram
/// matrix. For a split semisimple algebra this is the multiplicity pairing:
/// characters of non-isomorphic simples pair to zero and each simple pairs
/// to one with itself. Returns `None` when the trace form is degenerate
/// (i.e. the algebra is not semisimple).
pub fn character_pairing(alg: &PBAlgebra, chi: &[f64], psi: &[f64]) -> Option<f64> {
    let n = alg.dim();
    assert_eq!(chi.len(), n);
    assert_eq!(psi.len(), n);
    let traces: Vec<Rat> = (0..n).map(|k| alg.regular_trace(k)).collect();
    let mut gram = QMatrix::zeros(n, n);
    for (&(i, j, k), g) in alg.gamma_iter() {
        if !traces[k].is_zero() {
            gram[(i, j)] += g * &traces[k];
        }
    }
    let inv = gram.inverse()?;
    let mut acc = 0.0;
    for i in 0..n {
        if chi[i] == 0.0 {
            continue;
        }
        for j in 0..n {
            if psi[j] != 0.0 {
                acc += chi[i] * rat_to_f64(&inv[(i, j)]) * psi[j];
            }
        }
    }
    Some(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cells::compute_cells;
    use crate::constructors::{from_cayley_table, monoid_closure, Transformation};
    use crate::scalar::rat_int;
    use std::sync::Arc;

    fn s3() -> Arc<PBAlgebra> {
        let t = monoid_closure(&[
            Transformation::new(vec![1, 2, 0]).unwrap(),
            Transformation::new(vec![1, 0, 2]).unwrap(),
        ])
        .unwrap();
        Arc::new(from_cayley_table(&t).unwrap())
    }

    fn t2() -> Arc<PBAlgebra> {
        let t = monoid_closure(&[
            Transformation::new(vec![1, 0]).unwrap(),
            Transformation::new(vec![0, 0]).unwrap(),
        ])
        .unwrap();
        Arc::new(from_cayley_table(&t).unwrap())
    }

    #[test]
    fn group_algebra_is_semisimple() {
        assert_eq!(radical(&s3()).unwrap().dim(), 0);
    }

    #[test]
    fn dual_numbers_have_radical_x() {
        // Q[x]/x^2 with basis {1, x}.
        let alg = PBAlgebra::new(
            2,
            vec!["1".into(), "x".into()],
            0,
            vec![
                (0, 0, 0, rat_int(1)),
                (0, 1, 1, rat_int(1)),
                (1, 0, 1, rat_int(1)),
            ],
        )
        .unwrap();
        let rad = radical(&alg).unwrap();
        assert_eq!(rad.dim(), 1);
        assert!(rad.contains(&[rat_int(0), rat_int(1)]));
        assert!(!rad.contains(&[rat_int(1), rat_int(0)]));
    }

    #[test]
    fn t2_radical_is_one_dimensional() {
        // Independent oracle in the test: recompute the Gram matrix from
        // explicit regular representation matrices and row-reduce from
        // scratch over floats with integer pivots.
        let alg = t2();
        let rad = radical(&alg).unwrap();
        let n = alg.dim();
        let mats: Vec<QMatrix> = (0..n).map(|i| alg.basis_action_matrix(i)).collect();
        let mut gram = vec![vec![0i64; n]; n];
        for i in 0..n {
            for j in 0..n {
                let prod = mats[i].mul(&mats[j]);
                let mut tr = Rat::zero();
                for d in 0..n {
                    tr += &prod[(d, d)];
                }
                assert!(tr.is_integer());
                gram[i][j] = rat_to_f64(&tr) as i64;
            }
        }
        // Fraction-free elimination for the rank.
        let mut m: Vec<Vec<i64>> = gram;
        let mut rank = 0;
        for col in 0..n {
            if let Some(p) = (rank..n).find(|&r| m[r][col] != 0) {
                m.swap(rank, p);
                for r in 0..n {
                    if r != rank && m[r][col] != 0 {
                        let (a, b) = (m[rank][col], m[r][col]);
                        for c in 0..n {
                            m[r][c] = m[r][c] * a - m[rank][c] * b;
                        }
                    }
                }
                rank += 1;
            }
        }
        assert_eq!(rad.dim(), n - rank);
        assert_eq!(rad.dim(), 1);
    }

    #[test]
    fn generated_submodule_of_group_pf_vector_is_trivial_line() {
        let alg = s3();
        let reg = BasedModule::regular(alg.clone());
        let v = vec![1.0 / 6.0; 6];
        let sub = generated_submodule(&reg, &v, DEFAULT_PIVOT_TOL).unwrap();
        assert_eq!(sub.dim(), 1);
    }

    #[test]
    fn zero_vector_is_rejected() {
        let alg = s3();
        let reg = BasedModule::regular(alg.clone());
        assert!(matches!(
            generated_submodule(&reg, &[0.0; 6], DEFAULT_PIVOT_TOL),
            Err(StructureError::ZeroVector)
        ));
    }

    #[test]
    fn top_of_trivial_line_in_group_algebra() {
        let alg = s3();
        let reg = BasedModule::regular(alg.clone());
        let rad = radical(&alg).unwrap();
        let sub = generated_submodule(&reg, &[1.0 / 6.0; 6], DEFAULT_PIVOT_TOL).unwrap();
        let top = module_top(&reg, &sub, &rad, DEFAULT_PIVOT_TOL, "trivial").unwrap();
        assert_eq!(top.dim, 1);
        for t in &top.character.traces {
            assert!((t - 1.0).abs() < 1e-9);
        }
        assert!(top.kernel.is_empty());
    }

    #[test]
    fn t2_constants_top_is_one_dimensional_and_cone_free() {
        let alg = t2();
        let cd = compute_cells(&alg);
        let rad = radical(&alg).unwrap();
        assert_eq!(rad.dim(), 1);
        let c = crate::based_modules::cell_module(&alg, &cd, 1).unwrap();
        let ones = vec![rat_int(1); 4];
        let action = c.element_action(&ones).to_f64();
        let pf = crate::spectral::pf_eigendata(&action, &Default::default()).unwrap();
        let v_l = generated_submodule(&c, &pf.v, DEFAULT_PIVOT_TOL).unwrap();
        assert_eq!(v_l.dim(), 2);
        let top = module_top(&c, &v_l, &rad, DEFAULT_PIVOT_TOL, "t2-constants").unwrap();
        assert_eq!(top.dim, 1);
        assert_eq!(top.kernel.len(), 1);
        assert!(kernel_cone_check(&top.kernel, 2, DEFAULT_CONE_EPS).unwrap());
    }

    #[test]
    fn injected_nonnegative_kernel_vector_is_detected() {
        let kernel = vec![vec![0.5, 0.5, 0.0]];
        assert!(!kernel_cone_check(&kernel, 3, DEFAULT_CONE_EPS).unwrap());
        let exact = vec![vec![rat_int(1), rat_int(1), rat_int(0)]];
        assert!(!kernel_cone_check_exact(&exact, 3));
        let signed = vec![vec![rat_int(1), rat_int(-1), rat_int(0)]];
        assert!(kernel_cone_check_exact(&signed, 3));
    }

    #[test]
    fn semisimple_pairing_recovers_multiplicities() {
        let alg = s3();
        // char of the regular module pairs to dim(S) with each simple; with
        // the trivial character (all ones) the multiplicity is 1.
        let reg_char: Vec<f64> = (0..6)
            .map(|i| rat_to_f64(&alg.regular_trace(i)))
            .collect();
        let triv = vec![1.0; 6];
        let pairing = character_pairing(&alg, &reg_char, &triv).unwrap();
        assert!((pairing - 1.0).abs() < 1e-9);
        let self_pairing = character_pairing(&alg, &triv, &triv).unwrap();
        assert!((self_pairing - 1.0).abs() < 1e-9);
    }

    #[test]
    fn degenerate_pairing_is_none() {
        let alg = t2();
        assert!(character_pairing(&alg, &[1.0; 4], &[1.0; 4]).is_none());
    }
}
