//! The full invariant battery for one algebra: every structural property the
//! theory guarantees, checked on the actual data and reported one line per
//! check. Used by the `verify` CLI command and reused by the test suites.

use std::sync::Arc;

use num_traits::Signed;
use serde::Serialize;

use crate::algebra::PBAlgebra;
use crate::based_modules::{cell_module, delta_module, monoid_table_of};
use crate::cells::{compute_cells, CellDecomposition, CellKind};
use crate::linalg::FloatRowBasis;
use crate::special::{
    apex_of_cell, classify_specials, incomparability_check, j_invariance_check,
    representative_left_cell, special_of_cell_with, special_sample, IncomparabilityOutcome,
    SpecialConfig,
};
use crate::spectral::cell_idempotent;
use crate::structure::{character_pairing, module_character, module_top, radical};
use crate::util::parallel_map;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CheckStatus {
    Pass,
    Fail,
    Skipped,
}

#[derive(Debug, Clone, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub status: CheckStatus,
    pub detail: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct BatteryReport {
    pub checks: Vec<CheckResult>,
}

impl BatteryReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.status != CheckStatus::Fail)
    }

    pub fn failures(&self) -> usize {
        self.checks
            .iter()
            .filter(|c| c.status == CheckStatus::Fail)
            .count()
    }
}

#[derive(Debug, Clone)]
pub struct BatteryConfig {
    pub special: SpecialConfig,
    pub validation_cap: usize,
}

impl Default for BatteryConfig {
    fn default() -> Self {
        Self {
            special: SpecialConfig::default(),
            validation_cap: crate::algebra::DEFAULT_VALIDATION_CAP,
        }
    }
}

fn check(name: &str, outcome: Result<String, String>) -> CheckResult {
    match outcome {
        Ok(detail) => CheckResult {
            name: name.to_string(),
            status: CheckStatus::Pass,
            detail,
        },
        Err(detail) => CheckResult {
            name: name.to_string(),
            status: CheckStatus::Fail,
            detail,
        },
    }
}

fn skipped(name: &str, detail: &str) -> CheckResult {
    CheckResult {
        name: name.to_string(),
        status: CheckStatus::Skipped,
        detail: detail.to_string(),
    }
}

/// Runs every applicable check against one algebra.
pub fn run_battery(alg: &Arc<PBAlgebra>, cfg: &BatteryConfig) -> BatteryReport {
    let mut checks = Vec::new();
    let n = alg.dim();

    checks.push(check(
        "algebra-axioms",
        match alg.validate_with_cap(cfg.validation_cap) {
            Ok(report) if report.is_valid() => {
                Ok(format!("dim {n}, {} stored constants", alg.gamma_iter().count()))
            }
            Ok(report) => Err(format!("{} violations", report.violations.len())),
            Err(e) => Err(e.to_string()),
        },
    ));

    let cd = compute_cells(alg);
    checks.push(check("cell-partitions", partitions_check(alg, &cd)));
    checks.push(check("cell-closure", closure_check(alg, &cd)));
    checks.push(check("cell-modules", cell_modules_check(alg, &cd)));

    let rad = match radical(alg) {
        Ok(rad) => {
            checks.push(check(
                "radical",
                Ok(format!("radical dimension {}", rad.dim())),
            ));
            rad
        }
        Err(e) => {
            checks.push(check("radical", Err(e.to_string())));
            return BatteryReport { checks };
        }
    };

    let num_left = cd.num_cells(CellKind::Left);
    let num_two = cd.num_cells(CellKind::TwoSided);

    // Per-left-cell pipeline: apex verification, sample agreement, top
    // annihilator pattern, and the cone check.
    struct PerCell {
        cell: usize,
        apex: Result<String, String>,
        samples: Result<String, String>,
        annihilator: Result<String, String>,
    }
    let per_cell: Vec<PerCell> = parallel_map(cfg.special.jobs, (0..num_left).collect(), |l| {
        let apex = apex_check(alg, &cd, l);
        let (samples, annihilator) = special_checks(alg, &cd, &rad, l, cfg);
        PerCell {
            cell: l,
            apex,
            samples,
            annihilator,
        }
    });
    for pc in per_cell {
        let l = pc.cell;
        checks.push(check(&format!("apex-left-cell-{l}"), pc.apex));
        checks.push(check(&format!("eigendata-samples-left-cell-{l}"), pc.samples));
        checks.push(check(&format!("top-annihilator-left-cell-{l}"), pc.annihilator));
    }

    for j in 0..num_two {
        checks.push(check(
            &format!("j-invariance-cell-{j}"),
            match j_invariance_check(alg, &cd, j, &cfg.special) {
                Ok(true) => Ok("characters and apexes agree across left cells".into()),
                Ok(false) => Err("left cells disagree".into()),
                Err(e) => Err(e.to_string()),
            },
        ));
        match incomparability_check(alg, &cd, j) {
            Ok(IncomparabilityOutcome::Holds) => checks.push(check(
                &format!("left-incomparability-cell-{j}"),
                Ok("left cells pairwise incomparable".into()),
            )),
            Ok(IncomparabilityOutcome::Fails { lower, upper }) => checks.push(check(
                &format!("left-incomparability-cell-{j}"),
                Err(format!("left cells {lower} <= {upper} are comparable")),
            )),
            Ok(IncomparabilityOutcome::HypothesisNotMet { witness }) => checks.push(skipped(
                &format!("left-incomparability-cell-{j}"),
                &format!("subquotient is not a module over the apex quotient (witness {witness})"),
            )),
            Err(e) => checks.push(check(
                &format!("left-incomparability-cell-{j}"),
                Err(e.to_string()),
            )),
        }
    }

    let idempotent_cells = cd.idempotent_two_sided_cells(alg);
    for &j in &idempotent_cells {
        checks.push(check(
            &format!("cell-idempotent-{j}"),
            (|| {
                let rep = representative_left_cell(&cd, j).map_err(|e| e.to_string())?;
                let e = cell_idempotent(alg, &cd, j, rep, &cfg.special.spectral)
                    .map_err(|e| e.to_string())?;
                Ok(format!(
                    "residual {:.2e}, positivity margin {:.2e}",
                    e.idempotency_residual, e.positivity_margin
                ))
            })(),
        ));
        checks.push(check(
            &format!("apex-of-idempotent-cell-{j}"),
            (|| {
                let rep = representative_left_cell(&cd, j).map_err(|e| e.to_string())?;
                let apex = apex_of_cell(alg, &cd, rep).map_err(|e| e.to_string())?;
                if apex == j {
                    Ok("apex is the cell itself".into())
                } else {
                    Err(format!("apex is {apex}, expected {j}"))
                }
            })(),
        ));
    }

    checks.push(check(
        "classification",
        match classify_specials(alg, &cd, &cfg.special) {
            Ok(list) => Ok(format!(
                "{} idempotent cells, {} pairwise distinct specials",
                idempotent_cells.len(),
                list.len()
            )),
            Err(e) => Err(e.to_string()),
        },
    ));

    if rad.is_zero() {
        checks.push(check(
            "semisimple-suite",
            semisimple_suite(alg, &cd, cfg),
        ));
    } else {
        checks.push(skipped("semisimple-suite", "algebra is not semisimple"));
    }

    if monoid_table_of(alg).is_some() {
        checks.push(check(
            "idempotent-induction",
            monoid_induction_check(alg, &cd, cfg),
        ));
    } else {
        checks.push(skipped(
            "idempotent-induction",
            "algebra is not a standard-basis monoid algebra",
        ));
    }

    BatteryReport { checks }
}

fn partitions_check(alg: &PBAlgebra, cd: &CellDecomposition) -> Result<String, String> {
    let n = alg.dim();
    for kind in [CellKind::Left, CellKind::Right, CellKind::TwoSided] {
        let mut seen = vec![false; n];
        for (id, cell) in cd.cells(kind).iter().enumerate() {
            for &i in cell {
                if seen[i] {
                    return Err(format!("index {i} appears in two {kind:?} cells"));
                }
                seen[i] = true;
                if cd.cell_of(kind, i) != id {
                    return Err(format!("inconsistent cell id for index {i}"));
                }
            }
        }
        if seen.iter().any(|&s| !s) {
            return Err(format!("{kind:?} cells do not cover the basis"));
        }
    }
    for (kind, name) in [(CellKind::Left, "left"), (CellKind::Right, "right")] {
        for cell in cd.cells(kind) {
            let js: std::collections::BTreeSet<usize> = cell
                .iter()
                .map(|&i| cd.cell_of(CellKind::TwoSided, i))
                .collect();
            if js.len() != 1 {
                return Err(format!("a {name} cell meets several two-sided cells"));
            }
        }
        // The one-sided order refines the two-sided order.
        for c1 in 0..cd.num_cells(kind) {
            for c2 in 0..cd.num_cells(kind) {
                if cd.cell_leq(kind, c1, c2).unwrap() {
                    let j1 = cd.cell_of(
                        CellKind::TwoSided,
                        cd.members(kind, c1).unwrap()[0],
                    );
                    let j2 = cd.cell_of(
                        CellKind::TwoSided,
                        cd.members(kind, c2).unwrap()[0],
                    );
                    if !cd.cell_leq(CellKind::TwoSided, j1, j2).unwrap() {
                        return Err(format!(
                            "{name} order does not refine the two-sided order at ({c1}, {c2})"
                        ));
                    }
                }
            }
        }
    }
    let total: usize = cd.cells(CellKind::Left).iter().map(Vec::len).sum();
    if total != n {
        return Err("left cells do not account for every basis index".into());
    }
    Ok(format!(
        "{} left / {} right / {} two-sided cells over {n} indices",
        cd.num_cells(CellKind::Left),
        cd.num_cells(CellKind::Right),
        cd.num_cells(CellKind::TwoSided)
    ))
}

/// M_L and N_L are submodules: products never leave the upward closures.
fn closure_check(alg: &PBAlgebra, cd: &CellDecomposition) -> Result<String, String> {
    for l in 0..cd.num_cells(CellKind::Left) {
        let up = cd.upward_closure(CellKind::Left, l).unwrap();
        let mut in_up = vec![false; alg.dim()];
        for &i in &up {
            in_up[i] = true;
        }
        let members = cd.members(CellKind::Left, l).unwrap();
        let mut in_cell = vec![false; alg.dim()];
        for &i in members {
            in_cell[i] = true;
        }
        for i in 0..alg.dim() {
            for &j in &up {
                for (k, v) in alg.product_terms(i, j) {
                    if v.is_positive() {
                        if !in_up[k] {
                            return Err(format!(
                                "product a_{i} a_{j} leaves the closure of left cell {l}"
                            ));
                        }
                        // N_L: strictly-above part is also closed.
                        if !in_cell[j] && in_cell[k] {
                            return Err(format!(
                                "product a_{i} a_{j} falls back into left cell {l}"
                            ));
                        }
                    }
                }
            }
        }
    }
    Ok("M_L and N_L are closed under the left action".into())
}

fn cell_modules_check(alg: &Arc<PBAlgebra>, cd: &CellDecomposition) -> Result<String, String> {
    for l in 0..cd.num_cells(CellKind::Left) {
        let c = cell_module(alg, cd, l).map_err(|e| e.to_string())?;
        c.check_invariants()
            .map_err(|e| format!("left cell {l}: {e}"))?;
        if !c.is_transitive() {
            return Err(format!("cell module of left cell {l} is not transitive"));
        }
    }
    Ok("all cell modules satisfy the based-module identities exactly".into())
}

fn apex_check(
    alg: &Arc<PBAlgebra>,
    cd: &CellDecomposition,
    l: usize,
) -> Result<String, String> {
    let apex = apex_of_cell(alg, cd, l).map_err(|e| e.to_string())?;
    Ok(format!("apex is two-sided cell {apex}"))
}

fn special_checks(
    alg: &Arc<PBAlgebra>,
    cd: &CellDecomposition,
    rad: &crate::structure::RadicalBasis,
    l: usize,
    cfg: &BatteryConfig,
) -> (Result<String, String>, Result<String, String>) {
    let samples = match special_of_cell_with(alg, cd, l, rad, &cfg.special) {
        Ok(report) => Ok(format!(
            "{} samples agree; special dim {}",
            report.c_samples.len(),
            report.dim
        )),
        Err(e) => Err(e.to_string()),
    };
    let cor32 = (|| {
        let module = cell_module(alg, cd, l).map_err(|e| e.to_string())?;
        let ones = vec![crate::scalar::rat_int(1); alg.dim()];
        let sample =
            special_sample(&module, &ones, rad, &cfg.special, &format!("cell:{l}"))
                .map_err(|e| e.to_string())?;
        let apex = apex_of_cell(alg, cd, l).map_err(|e| e.to_string())?;
        for i in 0..alg.dim() {
            let nonzero = sample.top.actions[i].max_abs() > cfg.special.nonzero_tol;
            let below = cd
                .cell_leq(
                    CellKind::TwoSided,
                    cd.cell_of(CellKind::TwoSided, i),
                    apex,
                )
                .unwrap();
            if nonzero != below {
                return Err(format!(
                    "basis element {i}: acts-nonzero={nonzero} but below-apex={below}"
                ));
            }
        }
        // The cone of nonnegative vectors meets the kernel of V_L -> top
        // trivially.
        if !crate::structure::kernel_cone_check(
            &sample.top.kernel,
            module.dim(),
            crate::structure::DEFAULT_CONE_EPS,
        )
        .map_err(|e| e.to_string())?
        {
            return Err("kernel contains a nonnegative vector".into());
        }
        Ok("annihilator pattern matches the apex; kernel cone is trivial".into())
    })();
    (samples, cor32)
}

fn semisimple_suite(
    alg: &Arc<PBAlgebra>,
    cd: &CellDecomposition,
    cfg: &BatteryConfig,
) -> Result<String, String> {
    let rad = radical(alg).map_err(|e| e.to_string())?;
    // (i) every two-sided cell is idempotent.
    for j in 0..cd.num_cells(CellKind::TwoSided) {
        if !cd.is_idempotent_cell(alg, j).unwrap() {
            return Err(format!("two-sided cell {j} is not idempotent"));
        }
    }
    let tol = cfg.special.char_tol;
    let specials: Vec<(usize, crate::special::SpecialReport)> =
        classify_specials(alg, cd, &cfg.special).map_err(|e| e.to_string())?;
    for l in 0..cd.num_cells(CellKind::Left) {
        let report =
            special_of_cell_with(alg, cd, l, &rad, &cfg.special).map_err(|e| e.to_string())?;
        // (ii) dim of the special equals the number of left cells in the apex.
        let expected = cd.left_cells_in(report.apex).unwrap().len();
        if report.dim != expected {
            return Err(format!(
                "left cell {l}: special dim {} but {expected} left cells in its apex",
                report.dim
            ));
        }
        // (iii) the special occurs once in C_L, and the complement pairs to
        // zero with every special character.
        let module = cell_module(alg, cd, l).map_err(|e| e.to_string())?;
        let chi = module_character(&module, "cell");
        let self_norm = character_pairing(alg, &report.character.traces, &report.character.traces)
            .ok_or("trace form is degenerate on a semisimple algebra")?;
        let mult = character_pairing(alg, &chi.traces, &report.character.traces).unwrap() / self_norm;
        if (mult - 1.0).abs() > tol {
            return Err(format!(
                "left cell {l}: special multiplicity in its cell module is {mult}, not 1"
            ));
        }
        let defect: Vec<f64> = chi
            .traces
            .iter()
            .zip(&report.character.traces)
            .map(|(a, b)| a - b)
            .collect();
        for (j, other) in &specials {
            let other_norm =
                character_pairing(alg, &other.character.traces, &other.character.traces).unwrap();
            let pairing =
                character_pairing(alg, &defect, &other.character.traces).unwrap() / other_norm;
            if pairing.abs() > tol {
                return Err(format!(
                    "left cell {l}: complement of the special pairs to {pairing} with the special of cell {j}"
                ));
            }
        }
    }
    Ok("idempotency, dimension count and multiplicity-one all hold".into())
}

fn monoid_induction_check(
    alg: &Arc<PBAlgebra>,
    cd: &CellDecomposition,
    cfg: &BatteryConfig,
) -> Result<String, String> {
    let table = monoid_table_of(alg).ok_or("not monoid-backed")?;
    let rad = radical(alg).map_err(|e| e.to_string())?;
    let mut tested = 0;
    for e in 0..alg.dim() {
        if table[e][e] != e {
            continue;
        }
        let delta = delta_module(alg, cd, e).map_err(|e| e.to_string())?;
        let full = {
            let mut basis = FloatRowBasis::new(delta.module.dim(), cfg.special.pivot_tol);
            for i in 0..delta.module.dim() {
                let mut row = vec![0.0; delta.module.dim()];
                row[i] = 1.0;
                basis.insert(&row);
            }
            basis
        };
        let top = module_top(
            &delta.module,
            &full,
            &rad,
            cfg.special.pivot_tol,
            &format!("delta:{e}"),
        )
        .map_err(|err| format!("idempotent {e}: {err}"))?;
        let report = special_of_cell_with(alg, cd, delta.left_cell, &rad, &cfg.special)
            .map_err(|err| format!("idempotent {e}: {err}"))?;
        if !top.character.agrees(&report.character, cfg.special.char_tol) {
            return Err(format!(
                "idempotent {e}: induced top differs from the special of left cell {} by {:.2e}",
                delta.left_cell,
                top.character.max_distance(&report.character)
            ));
        }
        tested += 1;
    }
    Ok(format!(
        "induced tops match the specials at {tested} idempotents"
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructors::{from_cayley_table, monoid_closure, Transformation};

    #[test]
    fn t2_battery_passes() {
        let t = monoid_closure(&[
            Transformation::new(vec![1, 0]).unwrap(),
            Transformation::new(vec![0, 0]).unwrap(),
        ])
        .unwrap();
        let alg = Arc::new(from_cayley_table(&t).unwrap());
        let report = run_battery(&alg, &BatteryConfig::default());
        for c in &report.checks {
            assert_ne!(
                c.status,
                CheckStatus::Fail,
                "check {} failed: {}",
                c.name,
                c.detail
            );
        }
    }
}
