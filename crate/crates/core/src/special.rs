//! Special subquotients, apexes, and the classification of special simple
//! modules over a positively based algebra.
//!
//! The special subquotient of a transitive based module is the unique simple
//! subquotient on which the Perron-Frobenius eigenvalue of a strictly
//! positive element is attained. It is computed here as the top of the
//! submodule generated by a Perron-Frobenius eigenvector, fingerprinted by
//! its character, and sampled over several positive coefficient vectors to
//! give falsifiable evidence for its independence of the choice.

use std::sync::Arc;

use num_traits::{One, Signed};
use thiserror::Error;

use crate::algebra::PBAlgebra;
use crate::based_modules::{cell_module, mj_module, BasedModule, ModuleError};
use crate::cells::{CellDecomposition, CellError, CellKind};
use crate::scalar::Rat;
use crate::spectral::{
    cell_idempotent, pf_action_matrix, pf_eigendata, IdempotentData, PFData, SpectralConfig,
    SpectralError,
};
use crate::structure::{
    generated_submodule, module_top, radical, ModuleTop, RadicalBasis, SimpleCharacter,
    StructureError, DEFAULT_CHAR_TOL, DEFAULT_PIVOT_TOL,
};
use crate::util::{parallel_map, SplitMix64};

pub const DEFAULT_C_SAMPLES: usize = 5;
pub const DEFAULT_SEED: u64 = 0x5eed_ce11;
pub const DEFAULT_NONZERO_TOL: f64 = 1e-8;

#[derive(Debug, Clone)]
pub struct SpecialConfig {
    pub spectral: SpectralConfig,
    /// Max-norm tolerance for character equality.
    pub char_tol: f64,
    /// Number of coefficient samples per cell (all-ones plus pseudorandom).
    pub c_samples: usize,
    pub seed: u64,
    /// Threshold for "acts nonzero" on a floating top.
    pub nonzero_tol: f64,
    pub pivot_tol: f64,
    pub jobs: usize,
}

impl Default for SpecialConfig {
    fn default() -> Self {
        Self {
            spectral: SpectralConfig::default(),
            char_tol: DEFAULT_CHAR_TOL,
            c_samples: DEFAULT_C_SAMPLES,
            seed: DEFAULT_SEED,
            nonzero_tol: DEFAULT_NONZERO_TOL,
            pivot_tol: DEFAULT_PIVOT_TOL,
            jobs: 1,
        }
    }
}

#[derive(Debug, Error)]
pub enum SpecialError {
    #[error(transparent)]
    Cell(#[from] CellError),
    #[error(transparent)]
    Module(#[from] ModuleError),
    #[error(transparent)]
    Spectral(#[from] SpectralError),
    #[error(transparent)]
    Structure(#[from] StructureError),
    #[error("the set of two-sided cells acting nonzero has no maximum (candidates {0:?})")]
    NoMaximum(Vec<usize>),
    #[error("apex cell {0} is not idempotent")]
    NotIdempotentApex(usize),
    #[error("basis element {index} is below the apex but annihilates the module")]
    ApexAnnihilated { index: usize },
    #[error("module is not transitive")]
    NotTransitive,
    #[error("characters for coefficient samples disagree by {distance:e} (dims {dim_a} vs {dim_b})")]
    CSampleDisagreement {
        distance: f64,
        dim_a: usize,
        dim_b: usize,
        first: Box<SimpleCharacter>,
        second: Box<SimpleCharacter>,
    },
    #[error("special characters of two-sided cells {0} and {1} coincide")]
    DuplicateSpecialAcrossCells(usize, usize),
    #[error("special module of a transitive module differs from the special of its apex cell by {distance:e}")]
    TransitiveSpecialMismatch { distance: f64 },
}

impl SpecialError {
    pub fn is_consistency(&self) -> bool {
        match self {
            SpecialError::NoMaximum(_)
            | SpecialError::NotIdempotentApex(_)
            | SpecialError::ApexAnnihilated { .. }
            | SpecialError::CSampleDisagreement { .. }
            | SpecialError::DuplicateSpecialAcrossCells(..)
            | SpecialError::TransitiveSpecialMismatch { .. } => true,
            SpecialError::Spectral(e) => e.is_consistency(),
            SpecialError::Structure(e) => e.is_consistency(),
            SpecialError::Module(e) => e.is_consistency(),
            SpecialError::Cell(_) => false,
            SpecialError::NotTransitive => false,
        }
    }
}

/// Consensus description of the special subquotient attached to a left cell
/// or a transitive module.
#[derive(Debug, Clone)]
pub struct SpecialReport {
    /// Left cell the report is for (the apex representative cell when the
    /// input was a transitive module).
    pub left_cell: usize,
    pub apex: usize,
    /// Perron-Frobenius eigenvalue for the all-ones coefficient vector.
    pub lambda: f64,
    pub character: SimpleCharacter,
    pub dim: usize,
    /// Coefficient vectors sampled, starting with all-ones.
    pub c_samples: Vec<Vec<Rat>>,
}

/// Apex of a transitive based module: the unique maximal two-sided cell
/// acting nonzero, verified to be a maximum, idempotent, and such that
/// everything below it acts nonzero.
pub fn apex_of_module(
    module: &BasedModule,
    cd: &CellDecomposition,
) -> Result<usize, SpecialError> {
    let alg = module.algebra();
    let acts_nonzero: Vec<bool> = (0..alg.dim())
        .map(|i| !module.action(i).is_zero())
        .collect();
    apex_from_flags(alg, cd, &acts_nonzero)
}

/// Apex of a cell module, computed exactly from the structure constants.
pub fn apex_of_cell(
    alg: &PBAlgebra,
    cd: &CellDecomposition,
    left_cell: usize,
) -> Result<usize, SpecialError> {
    let members = cd.members(CellKind::Left, left_cell)?;
    let acts_nonzero: Vec<bool> = (0..alg.dim())
        .map(|i| {
            members.iter().any(|&j| {
                alg.product_terms(i, j)
                    .any(|(k, v)| v.is_positive() && cd.cell_of(CellKind::Left, k) == left_cell)
            })
        })
        .collect();
    apex_from_flags(alg, cd, &acts_nonzero)
}

fn apex_from_flags(
    alg: &PBAlgebra,
    cd: &CellDecomposition,
    acts_nonzero: &[bool],
) -> Result<usize, SpecialError> {
    let mut active: Vec<usize> = (0..cd.num_cells(CellKind::TwoSided))
        .filter(|&j| {
            cd.members(CellKind::TwoSided, j)
                .unwrap()
                .iter()
                .any(|&i| acts_nonzero[i])
        })
        .collect();
    let maximal: Vec<usize> = active
        .iter()
        .copied()
        .filter(|&j| {
            active
                .iter()
                .all(|&j2| j2 == j || !cd.cell_leq(CellKind::TwoSided, j, j2).unwrap() || cd.cell_leq(CellKind::TwoSided, j2, j).unwrap())
        })
        .collect();
    if maximal.len() != 1 {
        return Err(SpecialError::NoMaximum(maximal));
    }
    let apex = maximal[0];
    // It must be a genuine maximum, not just maximal.
    if active
        .iter()
        .any(|&j| !cd.cell_leq(CellKind::TwoSided, j, apex).unwrap())
    {
        active.sort_unstable();
        return Err(SpecialError::NoMaximum(active));
    }
    if !cd.is_idempotent_cell(alg, apex)? {
        return Err(SpecialError::NotIdempotentApex(apex));
    }
    for i in 0..alg.dim() {
        let ji = cd.cell_of(CellKind::TwoSided, i);
        if cd.cell_leq(CellKind::TwoSided, ji, apex).unwrap() && !acts_nonzero[i] {
            return Err(SpecialError::ApexAnnihilated { index: i });
        }
    }
    Ok(apex)
}

/// One sample of the special-subquotient pipeline on a based module: the
/// Perron-Frobenius data of a(c), the generated submodule of its
/// eigenvector, and the top of that submodule.
pub struct SpecialSample {
    pub pf: PFData,
    pub top: ModuleTop,
    pub submodule_dim: usize,
}

pub fn special_sample(
    module: &BasedModule,
    c: &[Rat],
    rad: &RadicalBasis,
    cfg: &SpecialConfig,
    source: &str,
) -> Result<SpecialSample, SpecialError> {
    let action = pf_action_matrix(module, c)?;
    let pf = pf_eigendata(&action.to_f64(), &cfg.spectral)?;
    let v_l = generated_submodule(module, &pf.v, cfg.pivot_tol)?;
    let submodule_dim = v_l.dim();
    let top = module_top(module, &v_l, rad, cfg.pivot_tol, source)?;
    Ok(SpecialSample {
        pf,
        top,
        submodule_dim,
    })
}

/// The default coefficient samples: all-ones plus fixed-seed pseudorandom
/// positive rationals.
pub fn default_c_samples(n: usize, cfg: &SpecialConfig) -> Vec<Vec<Rat>> {
    let mut rng = SplitMix64::new(cfg.seed);
    let mut samples = vec![vec![Rat::one(); n]];
    for _ in 1..cfg.c_samples.max(1) {
        samples.push((0..n).map(|_| rng.next_positive_rat()).collect());
    }
    samples
}

fn special_on_module(
    module: &BasedModule,
    report_cell: usize,
    apex: usize,
    samples: &[Vec<Rat>],
    rad: &RadicalBasis,
    cfg: &SpecialConfig,
    source: &str,
) -> Result<SpecialReport, SpecialError> {
    assert!(!samples.is_empty());
    let mut consensus: Option<(PFData, SimpleCharacter)> = None;
    for c in samples {
        let sample = special_sample(module, c, rad, cfg, source)?;
        match &consensus {
            None => consensus = Some((sample.pf, sample.top.character)),
            Some((_, reference)) => {
                if !reference.agrees(&sample.top.character, cfg.char_tol) {
                    return Err(SpecialError::CSampleDisagreement {
                        distance: reference.max_distance(&sample.top.character),
                        dim_a: reference.dim,
                        dim_b: sample.top.character.dim,
                        first: Box::new(reference.clone()),
                        second: Box::new(sample.top.character),
                    });
                }
            }
        }
    }
    let (pf, character) = consensus.expect("at least one sample");
    Ok(SpecialReport {
        left_cell: report_cell,
        apex,
        lambda: pf.lambda,
        dim: character.dim,
        character,
        c_samples: samples.to_vec(),
    })
}

/// Special subquotient of the cell module of a left cell, sampled over the
/// default coefficient vectors.
pub fn special_of_cell(
    alg: &Arc<PBAlgebra>,
    cd: &CellDecomposition,
    left_cell: usize,
    cfg: &SpecialConfig,
) -> Result<SpecialReport, SpecialError> {
    let rad = radical(alg)?;
    special_of_cell_with(alg, cd, left_cell, &rad, cfg)
}

/// As [`special_of_cell`] with a precomputed radical (the radical depends
/// only on the algebra and is reused across cells).
pub fn special_of_cell_with(
    alg: &Arc<PBAlgebra>,
    cd: &CellDecomposition,
    left_cell: usize,
    rad: &RadicalBasis,
    cfg: &SpecialConfig,
) -> Result<SpecialReport, SpecialError> {
    let module = cell_module(alg, cd, left_cell)?;
    let apex = apex_of_cell(alg, cd, left_cell)?;
    let samples = default_c_samples(alg.dim(), cfg);
    special_on_module(
        &module,
        left_cell,
        apex,
        &samples,
        rad,
        cfg,
        &format!("cell:{left_cell}"),
    )
}

/// Special subquotient of an arbitrary transitive based module; verified to
/// agree with the special of a left cell of its apex.
pub fn special_of_transitive(
    module: &BasedModule,
    cd: &CellDecomposition,
    cfg: &SpecialConfig,
) -> Result<SpecialReport, SpecialError> {
    if !module.is_transitive() {
        return Err(SpecialError::NotTransitive);
    }
    let alg = module.algebra().clone();
    let rad = radical(&alg)?;
    let apex = apex_of_module(module, cd)?;
    let rep = representative_left_cell(cd, apex)?;
    let samples = default_c_samples(alg.dim(), cfg);
    let report = special_on_module(module, rep, apex, &samples, &rad, cfg, "transitive")?;
    let cell_report = special_of_cell_with(&alg, cd, rep, &rad, cfg)?;
    if !report.character.agrees(&cell_report.character, cfg.char_tol) {
        return Err(SpecialError::TransitiveSpecialMismatch {
            distance: report.character.max_distance(&cell_report.character),
        });
    }
    Ok(report)
}

/// The chosen left cell of a two-sided cell: maximal with respect to the
/// left order among the cell's left cells, ties broken by smallest member
/// index. The resulting special module is choice-independent.
pub fn representative_left_cell(
    cd: &CellDecomposition,
    two_sided: usize,
) -> Result<usize, SpecialError> {
    let lcells = cd.left_cells_in(two_sided)?;
    let maximal: Vec<usize> = lcells
        .iter()
        .copied()
        .filter(|&l| {
            lcells.iter().all(|&l2| {
                l2 == l
                    || !cd.cell_leq(CellKind::Left, l, l2).unwrap()
                    || cd.cell_leq(CellKind::Left, l2, l).unwrap()
            })
        })
        .collect();
    let rep = maximal
        .into_iter()
        .min_by_key(|&l| cd.members(CellKind::Left, l).unwrap()[0])
        .expect("a finite nonempty poset has a maximal element");
    Ok(rep)
}

/// One special module per idempotent two-sided cell, with the injectivity of
/// the correspondence checked empirically on characters.
pub fn classify_specials(
    alg: &Arc<PBAlgebra>,
    cd: &CellDecomposition,
    cfg: &SpecialConfig,
) -> Result<Vec<(usize, SpecialReport)>, SpecialError> {
    let rad = radical(alg)?;
    let idempotent_cells = cd.idempotent_two_sided_cells(alg);
    let results = parallel_map(cfg.jobs, idempotent_cells, |j| {
        let rep = representative_left_cell(cd, j)?;
        let report = special_of_cell_with(alg, cd, rep, &rad, cfg)?;
        Ok::<(usize, SpecialReport), SpecialError>((j, report))
    });
    let mut out = Vec::with_capacity(results.len());
    for r in results {
        out.push(r?);
    }
    for a in 0..out.len() {
        for b in a + 1..out.len() {
            if out[a].1.character.agrees(&out[b].1.character, cfg.char_tol) {
                return Err(SpecialError::DuplicateSpecialAcrossCells(
                    out[a].0, out[b].0,
                ));
            }
        }
    }
    Ok(out)
}

/// True iff all left cells of a two-sided cell yield the same special
/// character and the same apex.
pub fn j_invariance_check(
    alg: &Arc<PBAlgebra>,
    cd: &CellDecomposition,
    two_sided: usize,
    cfg: &SpecialConfig,
) -> Result<bool, SpecialError> {
    let rad = radical(alg)?;
    let lcells = cd.left_cells_in(two_sided)?;
    let mut reference: Option<SpecialReport> = None;
    for l in lcells {
        let report = special_of_cell_with(alg, cd, l, &rad, cfg)?;
        if let Some(r) = &reference {
            if r.apex != report.apex || !r.character.agrees(&report.character, cfg.char_tol) {
                return Ok(false);
            }
        } else {
            reference = Some(report);
        }
    }
    Ok(true)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum IncomparabilityOutcome {
    /// Distinct left cells of the two-sided cell are pairwise incomparable.
    Holds,
    /// A comparable pair was found (reported loudly: this would contradict
    /// the theory whenever the hypothesis held).
    Fails { lower: usize, upper: usize },
    /// M(I) is not a module over the apex quotient, so the statement does
    /// not apply.
    HypothesisNotMet { witness: usize },
}

/// Checks that the left cells inside a two-sided cell are pairwise
/// incomparable in the left order, under the hypothesis that M(I) is a
/// module over the apex quotient algebra (every basis element strictly above
/// the apex annihilates M(I); checked exactly).
pub fn incomparability_check(
    alg: &Arc<PBAlgebra>,
    cd: &CellDecomposition,
    two_sided: usize,
) -> Result<IncomparabilityOutcome, SpecialError> {
    let lcells = cd.left_cells_in(two_sided)?;
    let apex = apex_of_cell(alg, cd, lcells[0])?;
    let mj = mj_module(alg, cd, two_sided)?;
    for i in 0..alg.dim() {
        let ji = cd.cell_of(CellKind::TwoSided, i);
        let strictly_above = ji != apex && cd.cell_leq(CellKind::TwoSided, apex, ji)?;
        if strictly_above && !mj.action(i).is_zero() {
            return Ok(IncomparabilityOutcome::HypothesisNotMet { witness: i });
        }
    }
    for (a, &l1) in lcells.iter().enumerate() {
        for &l2 in &lcells[a + 1..] {
            if cd.cell_leq(CellKind::Left, l1, l2)? {
                return Ok(IncomparabilityOutcome::Fails {
                    lower: l1,
                    upper: l2,
                });
            }
            if cd.cell_leq(CellKind::Left, l2, l1)? {
                return Ok(IncomparabilityOutcome::Fails {
                    lower: l2,
                    upper: l1,
                });
            }
        }
    }
    Ok(IncomparabilityOutcome::Holds)
}

/// Goodness witness for the apex of a left cell: the cell idempotent, which
/// satisfies a^2 = a with positive coefficients.
pub fn good_cell_check(
    alg: &Arc<PBAlgebra>,
    cd: &CellDecomposition,
    left_cell: usize,
    cfg: &SpecialConfig,
) -> Result<IdempotentData, SpecialError> {
    let apex = apex_of_cell(alg, cd, left_cell)?;
    let rep = representative_left_cell(cd, apex)?;
    Ok(cell_idempotent(alg, cd, apex, rep, &cfg.spectral)?)
}
