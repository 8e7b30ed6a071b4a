//! `pba`: cells, Perron-Frobenius data and special modules of positively
//! based algebras.
//!
//! Every command reads the JSON algebra document produced by the `gen`
//! subcommands and writes JSON to standard output. Exit codes: 0 on success,
//! 1 on bad input, 2 when a structural guarantee fails on the actual data
//! (never silently downgraded).

mod config;
mod output;

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand};
use serde::Deserialize;
use serde_json::json;

use pba_core::algebra::PBAlgebra;
use pba_core::based_modules::{cell_module, ModuleError};
use pba_core::cells::compute_cells;
use pba_core::constructors::{
    coset_module, from_cayley_table, monoid_closure_with_cap, CayleyTable, Transformation,
    DEFAULT_CLOSURE_CAP,
};
use pba_core::io::{algebra_to_json, module_to_json, parse_algebra};
use pba_core::kl::{
    cartan_of_type, enumerate_weyl_with_cap, kl_algebra, kl_basis, weyl::DEFAULT_ORDER_CAP,
    KlError,
};
use pba_core::scalar::{parse_rat, rat_int, Rat};
use pba_core::special::{
    apex_of_cell, classify_specials, good_cell_check, special_of_cell, SpecialError,
};
use pba_core::spectral::{cell_idempotent, pf_action_matrix, pf_eigendata, SpectralError};
use pba_core::structure::{radical, StructureError};
use pba_core::verify::run_battery;

use config::RunConfig;

const EXIT_DOMAIN: u8 = 1;
const EXIT_CONSISTENCY: u8 = 2;

#[derive(Parser)]
#[command(
    name = "pba",
    about = "Cells, Perron-Frobenius data and special modules of positively based algebras",
    version
)]
struct Cli {
    /// Optional JSON run configuration (tolerances, caps, seed, precision).
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Write output JSON to a file instead of standard output.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    /// Worker threads for per-cell computations in classify/verify.
    #[arg(long, global = true)]
    jobs: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check the positively-based-algebra axioms of a document.
    Validate {
        file: PathBuf,
        /// Raise the exhaustive-validation dimension cap.
        #[arg(long)]
        cap: Option<usize>,
    },
    /// Generate algebra or module documents.
    Gen {
        #[command(subcommand)]
        what: GenCommand,
    },
    /// Left/right/two-sided cells and their order DAGs.
    Cells { file: PathBuf },
    /// The cell module of one left cell, as a module document.
    CellModule {
        file: PathBuf,
        #[arg(long)]
        left_cell: usize,
    },
    /// Perron-Frobenius eigendata of a(c) on a cell module.
    Pf {
        file: PathBuf,
        #[arg(long)]
        left_cell: usize,
        /// Comma-separated positive coefficients (default: all ones).
        #[arg(long)]
        coeffs: Option<String>,
    },
    /// The canonical idempotent of an idempotent two-sided cell.
    Idempotent {
        file: PathBuf,
        #[arg(long)]
        two_sided_cell: usize,
    },
    /// Exact radical basis.
    Radical { file: PathBuf },
    /// Character and dimension of the special top of one left cell.
    Top {
        file: PathBuf,
        #[arg(long)]
        left_cell: usize,
    },
    /// Full special-module report for one left cell.
    Special {
        file: PathBuf,
        #[arg(long)]
        left_cell: usize,
    },
    /// Apex of the cell module of one left cell.
    Apex {
        file: PathBuf,
        #[arg(long)]
        left_cell: usize,
    },
    /// One special module per idempotent two-sided cell.
    Classify { file: PathBuf },
    /// Run the full invariant battery; exit 2 on any violation.
    Verify { file: PathBuf },
}

#[derive(Subcommand)]
enum GenCommand {
    /// Group algebra from a Cayley table document.
    Group {
        #[arg(long)]
        cayley: PathBuf,
    },
    /// Transformation-monoid algebra from a generator document.
    Monoid {
        #[arg(long)]
        transformations: PathBuf,
        /// Closure size cap (default 1000).
        #[arg(long)]
        cap: Option<usize>,
    },
    /// Coset permutation module of a group over a subgroup.
    Coset {
        #[arg(long)]
        group: PathBuf,
        /// Comma-separated element indices of the subgroup.
        #[arg(long)]
        subgroup: String,
    },
    /// Group algebra of a Weyl group in the Kazhdan-Lusztig basis (v = 1).
    WeylKl(WeylKlArgs),
}

#[derive(Args)]
struct WeylKlArgs {
    /// Named type: A1-A4, B2-B4, C2-C4, D4, F4, G2.
    #[arg(long = "type", value_name = "TYPE")]
    type_name: Option<String>,
    /// JSON file with a "cartan" integer matrix.
    #[arg(long)]
    cartan: Option<PathBuf>,
    /// Group-order cap (default 400; the hard ceiling is 1200).
    #[arg(long)]
    order_cap: Option<usize>,
}

struct CliError {
    code: u8,
    message: String,
}

impl CliError {
    fn domain(message: impl std::fmt::Display) -> Self {
        Self {
            code: EXIT_DOMAIN,
            message: message.to_string(),
        }
    }

    fn consistency(message: impl std::fmt::Display) -> Self {
        Self {
            code: EXIT_CONSISTENCY,
            message: message.to_string(),
        }
    }
}

fn spectral_err(e: SpectralError) -> CliError {
    if e.is_consistency() {
        CliError::consistency(e)
    } else {
        CliError::domain(e)
    }
}

fn special_err(e: SpecialError) -> CliError {
    if e.is_consistency() {
        CliError::consistency(e)
    } else {
        CliError::domain(e)
    }
}

fn structure_err(e: StructureError) -> CliError {
    if e.is_consistency() {
        CliError::consistency(e)
    } else {
        CliError::domain(e)
    }
}

fn module_err(e: ModuleError) -> CliError {
    if e.is_consistency() {
        CliError::consistency(e)
    } else {
        CliError::domain(e)
    }
}

fn kl_err(e: KlError) -> CliError {
    if e.is_consistency() {
        CliError::consistency(e)
    } else {
        CliError::domain(e)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let cfg = match load_config(&cli) {
        Ok(cfg) => cfg,
        Err(e) => {
            eprintln!("error: {}", e.message);
            return ExitCode::from(e.code);
        }
    };
    match run(&cli, &cfg) {
        Ok(RunOutcome { json, exit }) => {
            let rendered = serde_json::to_string_pretty(&json).expect("output serializes");
            let target = cli
                .output
                .clone()
                .or_else(|| cfg.output.as_ref().map(PathBuf::from));
            match target {
                Some(path) => {
                    if let Err(e) = std::fs::write(&path, rendered + "\n") {
                        eprintln!("error: cannot write {}: {e}", path.display());
                        return ExitCode::from(EXIT_DOMAIN);
                    }
                }
                None => {
                    use std::io::Write;
                    // Tolerate a closed pipe (e.g. piping into `head`).
                    let _ = writeln!(std::io::stdout(), "{rendered}");
                }
            }
            ExitCode::from(exit)
        }
        Err(e) => {
            eprintln!("error: {}", e.message);
            ExitCode::from(e.code)
        }
    }
}

struct RunOutcome {
    json: serde_json::Value,
    exit: u8,
}

impl RunOutcome {
    fn ok(json: serde_json::Value) -> Self {
        Self { json, exit: 0 }
    }
}

fn load_config(cli: &Cli) -> Result<RunConfig, CliError> {
    let mut cfg = match &cli.config {
        None => RunConfig::default(),
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| CliError::domain(format!("cannot read {}: {e}", path.display())))?;
            serde_json::from_str::<RunConfig>(&text)
                .map_err(|e| CliError::domain(format!("bad config: {e}")))?
        }
    };
    if let Some(jobs) = cli.jobs {
        cfg.jobs = Some(jobs);
    }
    cfg.validate().map_err(CliError::domain)?;
    Ok(cfg)
}

fn read_file(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path)
        .map_err(|e| CliError::domain(format!("cannot read {}: {e}", path.display())))
}

fn load_algebra(path: &Path) -> Result<Arc<PBAlgebra>, CliError> {
    let text = read_file(path)?;
    parse_algebra(&text)
        .map(Arc::new)
        .map_err(|e| CliError::domain(format!("{}: {e}", path.display())))
}

fn run(cli: &Cli, cfg: &RunConfig) -> Result<RunOutcome, CliError> {
    match &cli.command {
        Command::Validate { file, cap } => {
            let alg = load_algebra(file)?;
            let cap = cap.or(cfg.validation_cap).unwrap_or(pba_core::algebra::DEFAULT_VALIDATION_CAP);
            let report = alg.validate_with_cap(cap).map_err(CliError::domain)?;
            let violations: Vec<String> =
                report.violations.iter().map(|v| format!("{v:?}")).collect();
            let valid = report.is_valid();
            Ok(RunOutcome {
                json: json!({"valid": valid, "violations": violations}),
                exit: if valid { 0 } else { EXIT_DOMAIN },
            })
        }
        Command::Gen { what } => gen(what, cfg),
        Command::Cells { file } => {
            let alg = load_algebra(file)?;
            let cd = compute_cells(&alg);
            Ok(RunOutcome::ok(output::cells_json(&alg, &cd)))
        }
        Command::CellModule { file, left_cell } => {
            let alg = load_algebra(file)?;
            let cd = compute_cells(&alg);
            let m = cell_module(&alg, &cd, *left_cell).map_err(module_err)?;
            Ok(RunOutcome::ok(serde_json::from_str(&module_to_json(&m)).expect("valid json")))
        }
        Command::Pf {
            file,
            left_cell,
            coeffs,
        } => {
            let alg = load_algebra(file)?;
            let cd = compute_cells(&alg);
            let m = cell_module(&alg, &cd, *left_cell).map_err(module_err)?;
            let c = match coeffs {
                None => vec![rat_int(1); alg.dim()],
                Some(s) => parse_coeffs(s, alg.dim(), cfg.float_precision())?,
            };
            let action = pf_action_matrix(&m, &c).map_err(spectral_err)?;
            let pf = pf_eigendata(&action.to_f64(), &cfg.spectral()).map_err(spectral_err)?;
            Ok(RunOutcome::ok(output::pf_json(*left_cell, &c, &pf)))
        }
        Command::Idempotent {
            file,
            two_sided_cell,
        } => {
            let alg = load_algebra(file)?;
            let cd = compute_cells(&alg);
            let rep = pba_core::special::representative_left_cell(&cd, *two_sided_cell)
                .map_err(special_err)?;
            let data = cell_idempotent(&alg, &cd, *two_sided_cell, rep, &cfg.spectral())
                .map_err(spectral_err)?;
            Ok(RunOutcome::ok(output::idempotent_json(&alg, &data)))
        }
        Command::Radical { file } => {
            let alg = load_algebra(file)?;
            let rad = radical(&alg).map_err(structure_err)?;
            Ok(RunOutcome::ok(output::radical_json(&rad)))
        }
        Command::Top { file, left_cell } => {
            let alg = load_algebra(file)?;
            let cd = compute_cells(&alg);
            let report =
                special_of_cell(&alg, &cd, *left_cell, &cfg.special()).map_err(special_err)?;
            Ok(RunOutcome::ok(json!({
                "left_cell": left_cell,
                "dim": report.dim,
                "character": output::floats(&report.character.traces),
            })))
        }
        Command::Special { file, left_cell } => {
            let alg = load_algebra(file)?;
            let cd = compute_cells(&alg);
            let report =
                special_of_cell(&alg, &cd, *left_cell, &cfg.special()).map_err(special_err)?;
            Ok(RunOutcome::ok(output::special_json(&report)))
        }
        Command::Apex { file, left_cell } => {
            let alg = load_algebra(file)?;
            let cd = compute_cells(&alg);
            let apex = apex_of_cell(&alg, &cd, *left_cell).map_err(special_err)?;
            // The goodness witness doubles as a sanity check of the apex.
            let witness = good_cell_check(&alg, &cd, *left_cell, &cfg.special())
                .map_err(special_err)?;
            Ok(RunOutcome::ok(json!({
                "left_cell": left_cell,
                "apex": apex,
                "idempotent": true,
                "witness_residual": output::float(witness.idempotency_residual),
            })))
        }
        Command::Classify { file } => {
            let alg = load_algebra(file)?;
            let cd = compute_cells(&alg);
            let list = classify_specials(&alg, &cd, &cfg.special()).map_err(special_err)?;
            let entries: Vec<serde_json::Value> = list
                .iter()
                .map(|(j, report)| {
                    json!({
                        "two_sided_cell": j,
                        "report": output::special_json(report),
                    })
                })
                .collect();
            Ok(RunOutcome::ok(serde_json::Value::Array(entries)))
        }
        Command::Verify { file } => {
            let alg = load_algebra(file)?;
            let report = run_battery(&alg, &cfg.battery());
            let exit = if report.passed() { 0 } else { EXIT_CONSISTENCY };
            Ok(RunOutcome {
                json: output::battery_json(&report),
                exit,
            })
        }
    }
}

#[derive(Deserialize)]
struct CayleyDoc {
    table: Vec<Vec<usize>>,
    labels: Option<Vec<String>>,
}

#[derive(Deserialize)]
struct TransformationsDoc {
    transformations: Vec<Vec<usize>>,
}

#[derive(Deserialize)]
struct CartanDoc {
    cartan: Vec<Vec<i64>>,
}

fn load_cayley(path: &Path) -> Result<CayleyTable, CliError> {
    let doc: CayleyDoc = serde_json::from_str(&read_file(path)?)
        .map_err(|e| CliError::domain(format!("{}: {e}", path.display())))?;
    let labels = doc.labels.unwrap_or_else(|| {
        (0..doc.table.len()).map(|i| format!("x{i}")).collect()
    });
    CayleyTable::new(doc.table, labels).map_err(CliError::domain)
}

fn gen(what: &GenCommand, cfg: &RunConfig) -> Result<RunOutcome, CliError> {
    match what {
        GenCommand::Group { cayley } => {
            let table = load_cayley(cayley)?;
            table.check_group().map_err(CliError::domain)?;
            let alg = from_cayley_table(&table).map_err(CliError::domain)?;
            Ok(RunOutcome::ok(
                serde_json::from_str(&algebra_to_json(&alg)).expect("valid json"),
            ))
        }
        GenCommand::Monoid {
            transformations,
            cap,
        } => {
            let doc: TransformationsDoc =
                serde_json::from_str(&read_file(transformations)?)
                    .map_err(|e| CliError::domain(format!("{}: {e}", transformations.display())))?;
            let gens: Vec<Transformation> = doc
                .transformations
                .into_iter()
                .map(Transformation::new)
                .collect::<Result<_, _>>()
                .map_err(CliError::domain)?;
            let cap = cap.or(cfg.closure_cap).unwrap_or(DEFAULT_CLOSURE_CAP);
            let table = monoid_closure_with_cap(&gens, cap).map_err(CliError::domain)?;
            let alg = from_cayley_table(&table).map_err(CliError::domain)?;
            Ok(RunOutcome::ok(
                serde_json::from_str(&algebra_to_json(&alg)).expect("valid json"),
            ))
        }
        GenCommand::Coset { group, subgroup } => {
            let table = load_cayley(group)?;
            let indices: Vec<usize> = subgroup
                .split(',')
                .map(|s| {
                    s.trim()
                        .parse::<usize>()
                        .map_err(|e| CliError::domain(format!("bad subgroup index `{s}`: {e}")))
                })
                .collect::<Result<_, _>>()?;
            let m = coset_module(&table, &indices).map_err(CliError::domain)?;
            Ok(RunOutcome::ok(
                serde_json::from_str(&module_to_json(&m)).expect("valid json"),
            ))
        }
        GenCommand::WeylKl(args) => {
            let cartan = match (&args.type_name, &args.cartan) {
                (Some(name), None) => cartan_of_type(name).ok_or_else(|| {
                    CliError::domain(format!("unknown Weyl type `{name}`"))
                })?,
                (None, Some(path)) => {
                    let doc: CartanDoc = serde_json::from_str(&read_file(path)?)
                        .map_err(|e| CliError::domain(format!("{}: {e}", path.display())))?;
                    doc.cartan
                }
                _ => {
                    return Err(CliError::domain(
                        "exactly one of --type or --cartan is required",
                    ))
                }
            };
            let cap = args.order_cap.or(cfg.order_cap).unwrap_or(DEFAULT_ORDER_CAP);
            let group = enumerate_weyl_with_cap(&cartan, cap).map_err(kl_err)?;
            let basis = kl_basis(&group).map_err(kl_err)?;
            let alg = kl_algebra(&group, &basis).map_err(kl_err)?;
            Ok(RunOutcome::ok(
                serde_json::from_str(&algebra_to_json(&alg)).expect("valid json"),
            ))
        }
    }
}

/// Comma-separated coefficient list. Exact mode takes `p` or `p/q`; float
/// mode additionally accepts decimal strings, converted exactly.
fn parse_coeffs(s: &str, dim: usize, float_mode: bool) -> Result<Vec<Rat>, CliError> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    if parts.len() != dim {
        return Err(CliError::domain(format!(
            "expected {dim} coefficients, got {}",
            parts.len()
        )));
    }
    parts
        .iter()
        .map(|p| {
            if float_mode {
                parse_decimal_or_rat(p)
            } else {
                parse_rat(p)
            }
            .map_err(CliError::domain)
        })
        .collect()
}

fn parse_decimal_or_rat(s: &str) -> Result<Rat, String> {
    if !s.contains('.') {
        return parse_rat(s);
    }
    let (sign, body) = match s.strip_prefix('-') {
        Some(rest) => (-1i64, rest),
        None => (1, s),
    };
    let (int_part, frac_part) = body
        .split_once('.')
        .ok_or_else(|| format!("bad decimal `{s}`"))?;
    if frac_part.is_empty() || !frac_part.bytes().all(|b| b.is_ascii_digit()) {
        return Err(format!("bad decimal `{s}`"));
    }
    let int_part = if int_part.is_empty() { "0" } else { int_part };
    let whole = parse_rat(int_part)?;
    let num = parse_rat(frac_part)?;
    let den = parse_rat(&format!("1{}", "0".repeat(frac_part.len())))?;
    Ok(rat_int(sign) * (whole + num / den))
}

#[cfg(test)]
mod tests {
    use super::*;
    use pba_core::scalar::rat;

    #[test]
    fn decimals_convert_exactly() {
        assert_eq!(parse_decimal_or_rat("0.5").unwrap(), rat(1, 2));
        assert_eq!(parse_decimal_or_rat("-1.25").unwrap(), rat(-5, 4));
        assert_eq!(parse_decimal_or_rat("3").unwrap(), rat(3, 1));
        assert_eq!(parse_decimal_or_rat("2/3").unwrap(), rat(2, 3));
        assert!(parse_decimal_or_rat("1.").is_err());
    }
}
