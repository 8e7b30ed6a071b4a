//! Perron-Frobenius analysis of positive matrices arising from based
//! modules: eigendata, limit projectors, and cell idempotents.
//!
//! Positivity of input matrices is certified on the exact side whenever the
//! data is exact; everything after that runs in f64 with configured
//! tolerances and a deterministic all-ones start vector, so results are
//! bit-stable across runs.

use std::sync::Arc;

use num_traits::Signed;
use thiserror::Error;

use crate::algebra::{ElementVector, PBAlgebra};
use crate::based_modules::{cell_module, BasedModule, ModuleError};
use crate::cells::{CellDecomposition, CellError, CellKind};
use crate::linalg::float::{dot, norm1, norm_inf};
use crate::linalg::{FMatrix, QMatrix};
use crate::scalar::{rat_to_f64, Rat};

#[derive(Debug, Clone)]
pub struct SpectralConfig {
    /// Convergence threshold on successive iterates.
    pub iterate_tol: f64,
    /// Acceptance threshold on eigen residuals.
    pub residual_tol: f64,
    /// Agreement threshold for projector cross-checks and idempotent residuals.
    pub agreement_tol: f64,
    /// Lower bound certifying "strictly positive" coefficients after 1-norm
    /// normalization.
    pub positivity_threshold: f64,
    pub max_iterations: usize,
}

impl Default for SpectralConfig {
    fn default() -> Self {
        Self {
            iterate_tol: 1e-12,
            residual_tol: 1e-9,
            agreement_tol: 1e-8,
            positivity_threshold: 1e-10,
            max_iterations: 1_000_000,
        }
    }
}

#[derive(Debug, Error, PartialEq)]
pub enum SpectralError {
    #[error("coefficient {index} is not strictly positive")]
    NonPositiveCoefficient { index: usize },
    #[error("action matrix has a zero entry at ({row}, {col}); the module is not transitive under these coefficients")]
    NotPerronFrobenius { row: usize, col: usize },
    #[error("matrix entry ({row}, {col}) is not strictly positive")]
    NotPositiveMatrix { row: usize, col: usize },
    #[error("no convergence within {iterations} iterations")]
    NoConvergence { iterations: usize },
    #[error("limit and outer-product projectors disagree by {diff:e}")]
    ProjectorMismatch { diff: f64 },
    #[error("two-sided cell {0} is not idempotent")]
    NotIdempotentCell(usize),
    #[error("left cell {left_cell} is not contained in two-sided cell {two_sided}")]
    LeftCellOutsideCell { left_cell: usize, two_sided: usize },
    #[error("idempotent coefficient {index} is {value:e}, below the positivity threshold")]
    PositivityFailure { index: usize, value: f64 },
    #[error(transparent)]
    Cell(#[from] CellError),
    #[error(transparent)]
    Module(#[from] ModuleError),
}

impl SpectralError {
    pub fn is_consistency(&self) -> bool {
        match self {
            SpectralError::ProjectorMismatch { .. } | SpectralError::PositivityFailure { .. } => {
                true
            }
            SpectralError::Module(e) => e.is_consistency(),
            _ => false,
        }
    }
}

/// Perron-Frobenius eigendata of a positive matrix.
#[derive(Debug, Clone)]
pub struct PFData {
    pub lambda: f64,
    /// Right eigenvector, entries > 0, unit 1-norm.
    pub v: Vec<f64>,
    /// Left eigenvector, entries > 0, scaled so that v_hat . v = 1.
    pub v_hat: Vec<f64>,
    /// Rank-one projector v v_hat^t.
    pub projector: FMatrix,
    pub residual_right: f64,
    pub residual_left: f64,
    pub iterations: usize,
}

/// The element a(c) = sum c_i a_i for strictly positive coefficients.
pub fn pf_element(alg: &PBAlgebra, c: &[Rat]) -> Result<ElementVector, SpectralError> {
    if c.len() != alg.dim() {
        return Err(ModuleError::ActionCountMismatch {
            expected: alg.dim(),
            got: c.len(),
        }
        .into());
    }
    for (index, ci) in c.iter().enumerate() {
        if !ci.is_positive() {
            return Err(SpectralError::NonPositiveCoefficient { index });
        }
    }
    Ok(ElementVector::Exact(c.to_vec()))
}

/// Exact action matrix of a(c) on a based module, certified entrywise
/// positive. On a transitive module this is guaranteed for every strictly
/// positive c.
pub fn pf_action_matrix(
    module: &BasedModule,
    c: &[Rat],
) -> Result<QMatrix, SpectralError> {
    pf_element(module.algebra(), c)?;
    let m = module.element_action(c);
    for i in 0..m.nrows() {
        for j in 0..m.ncols() {
            if !m[(i, j)].is_positive() {
                return Err(SpectralError::NotPerronFrobenius { row: i, col: j });
            }
        }
    }
    Ok(m)
}

/// Power iteration on M and M^t with the deterministic all-ones start;
/// lambda is the Rayleigh quotient at convergence.
pub fn pf_eigendata(m: &FMatrix, cfg: &SpectralConfig) -> Result<PFData, SpectralError> {
    let n = m.nrows();
    assert_eq!(n, m.ncols(), "pf_eigendata requires a square matrix");
    for i in 0..n {
        for j in 0..n {
            let x = m[(i, j)];
            if !x.is_finite() || x <= 0.0 {
                return Err(SpectralError::NotPositiveMatrix { row: i, col: j });
            }
        }
    }
    let (v, it_right) = power_iterate(cfg, |x| m.mat_vec(x), n)?;
    let (mut v_hat, it_left) = power_iterate(cfg, |x| m.vec_mat(x), n)?;
    let mv = m.mat_vec(&v);
    let lambda = dot(&v_hat, &mv) / dot(&v_hat, &v);
    let s = dot(&v_hat, &v);
    for x in v_hat.iter_mut() {
        *x /= s;
    }
    let residual_right = {
        let diff: Vec<f64> = mv.iter().zip(&v).map(|(a, b)| a - lambda * b).collect();
        norm_inf(&diff)
    };
    let residual_left = {
        let vm = m.vec_mat(&v_hat);
        let diff: Vec<f64> = vm.iter().zip(&v_hat).map(|(a, b)| a - lambda * b).collect();
        norm_inf(&diff)
    };
    let iterations = it_right.max(it_left);
    let scale = lambda.abs().max(1.0);
    if residual_right > cfg.residual_tol * scale || residual_left > cfg.residual_tol * scale {
        return Err(SpectralError::NoConvergence { iterations });
    }
    let projector = FMatrix::outer(&v, &v_hat);
    Ok(PFData {
        lambda,
        v,
        v_hat,
        projector,
        residual_right,
        residual_left,
        iterations,
    })
}

fn power_iterate(
    cfg: &SpectralConfig,
    step: impl Fn(&[f64]) -> Vec<f64>,
    n: usize,
) -> Result<(Vec<f64>, usize), SpectralError> {
    let mut v = vec![1.0 / n as f64; n];
    for it in 0..cfg.max_iterations {
        let mut w = step(&v);
        let s = norm1(&w);
        if !s.is_finite() || s == 0.0 {
            return Err(SpectralError::NoConvergence { iterations: it });
        }
        for x in w.iter_mut() {
            *x /= s;
        }
        let diff: f64 = v
            .iter()
            .zip(&w)
            .fold(0.0_f64, |m, (a, b)| m.max((a - b).abs()));
        v = w;
        if diff < cfg.iterate_tol {
            return Ok((v, it + 1));
        }
    }
    Err(SpectralError::NoConvergence {
        iterations: cfg.max_iterations,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProjectorMode {
    /// The outer product v v_hat^t.
    Outer,
    /// The limit of M^(2^k) / lambda^(2^k) by squaring with trace rescaling.
    Limit,
}

/// Rank-one limit projector of a positive matrix. In `Limit` mode the result
/// is cross-checked against the outer product within 10x the agreement
/// tolerance.
pub fn pf_projector(
    m: &FMatrix,
    pf: &PFData,
    mode: ProjectorMode,
    cfg: &SpectralConfig,
) -> Result<FMatrix, SpectralError> {
    match mode {
        ProjectorMode::Outer => Ok(FMatrix::outer(&pf.v, &pf.v_hat)),
        ProjectorMode::Limit => {
            let mut n = m.scale(1.0 / pf.lambda);
            let mut iterations = 0;
            loop {
                // The limit has trace v_hat . v = 1; normalizing each square
                // by its trace absorbs any error in lambda.
                let mut next = n.mul(&n);
                let tr = next.trace();
                if !tr.is_finite() || tr <= 0.0 {
                    return Err(SpectralError::NoConvergence { iterations });
                }
                next = next.scale(1.0 / tr);
                let diff = next.max_abs_diff(&n);
                n = next;
                iterations += 1;
                if diff < cfg.iterate_tol {
                    break;
                }
                if iterations >= cfg.max_iterations {
                    return Err(SpectralError::NoConvergence { iterations });
                }
            }
            let outer = FMatrix::outer(&pf.v, &pf.v_hat);
            let diff = n.max_abs_diff(&outer);
            if diff > 10.0 * cfg.agreement_tol {
                return Err(SpectralError::ProjectorMismatch { diff });
            }
            Ok(n)
        }
    }
}

/// The canonical idempotent of an idempotent two-sided cell, as coefficients
/// over the cell's basis indices.
#[derive(Debug, Clone)]
pub struct IdempotentData {
    pub two_sided_cell: usize,
    pub left_cell: usize,
    /// (original basis index, coefficient) pairs, indices increasing.
    pub coefficients: Vec<(usize, f64)>,
    /// max-norm of e*e - e, computed with the exact structure constants.
    pub idempotency_residual: f64,
    /// Smallest coefficient after normalizing e to unit 1-norm.
    pub positivity_margin: f64,
    /// Perron-Frobenius eigenvalue of a = sum of the cell's basis elements
    /// acting on the chosen cell module.
    pub lambda: f64,
    pub squarings: usize,
}

/// Computes lim a^m / lambda^m inside the span of a two-sided cell J, where
/// a is the sum of the cell's basis elements. The limit is reached by
/// repeated squaring; each square is rescaled by the trace of its action on
/// C_L (the limit has trace exactly 1), which keeps the iteration stable
/// against error in lambda.
pub fn cell_idempotent(
    alg: &Arc<PBAlgebra>,
    cd: &CellDecomposition,
    two_sided: usize,
    left_cell: usize,
    cfg: &SpectralConfig,
) -> Result<IdempotentData, SpectralError> {
    if !cd.is_idempotent_cell(alg, two_sided)? {
        return Err(SpectralError::NotIdempotentCell(two_sided));
    }
    let members = cd.members(CellKind::TwoSided, two_sided)?.to_vec();
    let l_members = cd.members(CellKind::Left, left_cell)?;
    if l_members
        .iter()
        .any(|&i| cd.cell_of(CellKind::TwoSided, i) != two_sided)
    {
        return Err(SpectralError::LeftCellOutsideCell {
            left_cell,
            two_sided,
        });
    }
    let c_l = cell_module(alg, cd, left_cell)?;
    // a = sum of the cell's basis elements, acting on C_L. Positivity of this
    // matrix is part of the structure (the cell is idempotent and C_L is
    // transitive); certify it exactly.
    let mut action = QMatrix::zeros(c_l.dim(), c_l.dim());
    for &j in &members {
        action.add_scaled(c_l.action(j), &crate::scalar::rat_int(1));
    }
    for i in 0..action.nrows() {
        for j in 0..action.ncols() {
            if !action[(i, j)].is_positive() {
                return Err(SpectralError::NotPerronFrobenius { row: i, col: j });
            }
        }
    }
    let pf = pf_eigendata(&action.to_f64(), cfg)?;

    // J-restricted multiplication table: products of cell elements truncate
    // to the cell inside A_J.
    let k = members.len();
    let mut pos = vec![None; alg.dim()];
    for (p, &i) in members.iter().enumerate() {
        pos[i] = Some(p);
    }
    let mut table: Vec<Vec<(usize, f64)>> = vec![Vec::new(); k * k];
    for (ip, &i) in members.iter().enumerate() {
        for (jp, &j) in members.iter().enumerate() {
            let mut terms = Vec::new();
            for (t, g) in alg.product_terms(i, j) {
                if let Some(tp) = pos[t] {
                    terms.push((tp, rat_to_f64(g)));
                }
            }
            table[ip * k + jp] = terms;
        }
    }
    let square = |x: &[f64]| {
        let mut out = vec![0.0; k];
        for ip in 0..k {
            if x[ip] == 0.0 {
                continue;
            }
            for jp in 0..k {
                let f = x[ip] * x[jp];
                if f != 0.0 {
                    for &(tp, g) in &table[ip * k + jp] {
                        out[tp] += f * g;
                    }
                }
            }
        }
        out
    };
    // Trace of the C_L action per cell element.
    let traces: Vec<f64> = members
        .iter()
        .map(|&i| {
            let mut t = Rat::from_integer(0.into());
            for d in 0..c_l.dim() {
                t += &c_l.action(i)[(d, d)];
            }
            rat_to_f64(&t)
        })
        .collect();
    let trace_of = |x: &[f64]| -> f64 { x.iter().zip(&traces).map(|(a, b)| a * b).sum() };

    let mut x = vec![1.0; k];
    let t0 = trace_of(&x);
    if !t0.is_finite() || t0 <= 0.0 {
        return Err(SpectralError::NoConvergence { iterations: 0 });
    }
    for v in x.iter_mut() {
        *v /= t0;
    }
    let mut squarings = 0;
    loop {
        let mut y = square(&x);
        let t = trace_of(&y);
        if !t.is_finite() || t <= 0.0 {
            return Err(SpectralError::NoConvergence {
                iterations: squarings,
            });
        }
        for v in y.iter_mut() {
            *v /= t;
        }
        let diff: f64 = x
            .iter()
            .zip(&y)
            .fold(0.0_f64, |m, (a, b)| m.max((a - b).abs()));
        x = y;
        squarings += 1;
        if diff < cfg.iterate_tol {
            break;
        }
        if squarings >= cfg.max_iterations {
            return Err(SpectralError::NoConvergence {
                iterations: squarings,
            });
        }
    }
    // Certify e^2 = e against the exact structure constants.
    let e2 = square(&x);
    let residual = x
        .iter()
        .zip(&e2)
        .fold(0.0_f64, |m, (a, b)| m.max((a - b).abs()));
    if residual > cfg.agreement_tol {
        return Err(SpectralError::NoConvergence {
            iterations: squarings,
        });
    }
    let n1 = norm1(&x);
    let mut margin = f64::INFINITY;
    let mut worst = 0;
    for (p, &c) in x.iter().enumerate() {
        if c / n1 < margin {
            margin = c / n1;
            worst = p;
        }
    }
    if margin <= cfg.positivity_threshold {
        return Err(SpectralError::PositivityFailure {
            index: members[worst],
            value: margin,
        });
    }
    Ok(IdempotentData {
        two_sided_cell: two_sided,
        left_cell,
        coefficients: members.iter().copied().zip(x).collect(),
        idempotency_residual: residual,
        positivity_margin: margin,
        lambda: pf.lambda,
        squarings,
    })
}
