//! Command-line front end: parse element and derivation literals, run the
//! library operations, and emit JSON reports on standard output.
//!
//! Exit codes: 0 on pass/success, 1 on a mathematical failure (infeasible
//! witness, disagreement, failed check), 2 on usage or parse errors.

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::json;

use w22local::algebra::{AlgebraId, Element};
use w22local::derivations::{solve_derivation_space, ElementMap};
use w22local::report::{
    two_local_check_report, DerivationLiteral, DerivationSpaceReport, TwoLocalMapLiteral,
    WitnessReport,
};
use w22local::reproduce::{run_all, run_case, CASE_IDS};
use w22local::two_local::{
    classify_thin_two_local, decompose_w22_two_local, is_two_local_on_set, witness_find,
    ClassifyFailure, DecomposeFailure, MapOracle, WitnessOutcome, WitnessParams,
};
use w22local::Error;

#[derive(Parser)]
#[command(name = "w22local", version, about = "Exact computations with derivations and 2-local derivations of W(2,2) and the thin Lie algebra")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Lie bracket of two elements.
    Bracket {
        #[arg(long, value_parser = parse_algebra)]
        algebra: AlgebraId,
        x: String,
        y: String,
    },
    /// Apply a derivation literal to an element.
    Apply {
        /// JSON derivation literal ({"kind":"w22",...} or {"kind":"thin",...}).
        #[arg(long)]
        derivation: String,
        element: String,
    },
    /// Solve the windowed Leibniz system and report dimensions.
    SolveDer {
        #[arg(long, value_parser = parse_algebra)]
        algebra: AlgebraId,
        #[arg(long)]
        window: i64,
    },
    /// Find a derivation matching two prescribed values.
    Witness {
        #[arg(long, value_parser = parse_algebra)]
        algebra: AlgebraId,
        #[arg(long)]
        x: String,
        #[arg(long)]
        vx: String,
        #[arg(long)]
        y: String,
        #[arg(long)]
        vy: String,
        #[arg(long)]
        window: i64,
    },
    /// Check 2-locality of a map on every pair from a probe file.
    #[command(name = "verify-2local")]
    Verify2Local {
        /// JSON map literal, or path to a table file (`<element> => <element>` per line).
        #[arg(long)]
        map: String,
        /// File with one probe element per line.
        #[arg(long)]
        probes: PathBuf,
        #[arg(long)]
        window: i64,
    },
    /// Decompose a W(2,2) map as inner + scalar multiple of the outer derivation.
    DecomposeW22 {
        #[arg(long)]
        map: String,
        #[arg(long)]
        window: i64,
        /// File with one verification probe per line.
        #[arg(long)]
        verify: PathBuf,
    },
    /// Classify a thin-algebra map as derivation + omega part.
    ClassifyThin {
        #[arg(long)]
        map: String,
        #[arg(long)]
        window: i64,
    },
    /// Run reproduction cases ("all" or a case id).
    Reproduce {
        #[arg(long)]
        case: String,
    },
}

fn parse_algebra(s: &str) -> Result<AlgebraId, String> {
    match s {
        "w22" => Ok(AlgebraId::W22),
        "thin" => Ok(AlgebraId::Thin),
        other => Err(format!("unknown algebra {other:?} (expected w22 or thin)")),
    }
}

fn parse_element(algebra: AlgebraId, s: &str) -> Result<Element, String> {
    Element::parse(algebra, s).map_err(|e| format!("bad element {s:?}: {e}"))
}

fn read_file(path: &PathBuf) -> Result<String, String> {
    std::fs::read_to_string(path).map_err(|e| format!("cannot read {}: {e}", path.display()))
}

fn parse_elements_file(algebra: AlgebraId, content: &str) -> Result<Vec<Element>, String> {
    content
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty())
        .map(|l| parse_element(algebra, l))
        .collect()
}

fn parse_table_with(algebra: AlgebraId, content: &str) -> Result<BTreeMap<Element, Element>, String> {
    let mut entries = BTreeMap::new();
    for line in content.lines().map(str::trim).filter(|l| !l.is_empty()) {
        let (lhs, rhs) = line
            .split_once("=>")
            .ok_or_else(|| format!("bad table line (expected `<element> => <element>`): {line}"))?;
        entries.insert(parse_element(algebra, lhs.trim())?, parse_element(algebra, rhs.trim())?);
    }
    Ok(entries)
}

/// Loads `--map`: inline JSON (two-local map or derivation literal) when the
/// argument starts with `{`, otherwise a table file.
fn load_map(arg: &str, expected: Option<AlgebraId>) -> Result<MapOracle, String> {
    let oracle = if arg.trim_start().starts_with('{') {
        if let Ok(lit) = serde_json::from_str::<TwoLocalMapLiteral>(arg) {
            MapOracle::ThinTwoLocal(lit.to_map()?)
        } else {
            let lit: DerivationLiteral =
                serde_json::from_str(arg).map_err(|e| format!("bad map JSON: {e}"))?;
            match lit.to_derivation()? {
                WitnessParams::W22(d) => MapOracle::W22Derivation(d),
                WitnessParams::Thin(d) => MapOracle::ThinDerivation(d),
            }
        }
    } else {
        let content = read_file(&PathBuf::from(arg))?;
        let algebra = match expected {
            Some(a) => a,
            // Infer the algebra: try W(2,2) first, then thin.
            None => match parse_table_with(AlgebraId::W22, &content) {
                Ok(_) => AlgebraId::W22,
                Err(w22_err) => {
                    if parse_table_with(AlgebraId::Thin, &content).is_ok() {
                        AlgebraId::Thin
                    } else {
                        return Err(w22_err);
                    }
                }
            },
        };
        MapOracle::Table { algebra, entries: parse_table_with(algebra, &content)? }
    };
    if let Some(a) = expected {
        if oracle.algebra() != a {
            return Err(format!("map is over {}, expected {a}", oracle.algebra()));
        }
    }
    Ok(oracle)
}

fn emit<T: serde::Serialize>(value: &T) {
    println!("{}", serde_json::to_string(value).expect("reports are serializable"));
}

/// Precondition-style errors are usage errors (exit 2); `Infeasible` and
/// friends are mathematical outcomes handled per command.
fn usage(err: Error) -> String {
    err.to_string()
}

fn run(cli: Cli) -> Result<u8, String> {
    match cli.command {
        Command::Bracket { algebra, x, y } => {
            let x = parse_element(algebra, &x)?;
            let y = parse_element(algebra, &y)?;
            let result = x.bracket(&y).map_err(usage)?;
            emit(&json!({"result": result.to_string()}));
            Ok(0)
        }
        Command::Apply { derivation, element } => {
            let lit: DerivationLiteral = serde_json::from_str(&derivation)
                .map_err(|e| format!("bad derivation JSON: {e}"))?;
            let d = lit.to_derivation()?;
            let algebra = match &d {
                WitnessParams::W22(_) => AlgebraId::W22,
                WitnessParams::Thin(_) => AlgebraId::Thin,
            };
            let x = parse_element(algebra, &element)?;
            let result = d.apply(&x).map_err(usage)?;
            emit(&json!({"result": result.to_string()}));
            Ok(0)
        }
        Command::SolveDer { algebra, window } => {
            if window < 3 {
                return Err("window must be at least 3".into());
            }
            let space = solve_derivation_space(algebra, window);
            emit(&DerivationSpaceReport::from(&space));
            Ok(0)
        }
        Command::Witness { algebra, x, vx, y, vy, window } => {
            let x = parse_element(algebra, &x)?;
            let vx = parse_element(algebra, &vx)?;
            let y = parse_element(algebra, &y)?;
            let vy = parse_element(algebra, &vy)?;
            let outcome = witness_find(algebra, &x, &vx, &y, &vy, window).map_err(usage)?;
            emit(&WitnessReport::from(&outcome));
            Ok(if outcome == WitnessOutcome::Infeasible { 1 } else { 0 })
        }
        Command::Verify2Local { map, probes, window } => {
            let oracle = load_map(&map, None)?;
            let probes = parse_elements_file(oracle.algebra(), &read_file(&probes)?)?;
            let report = is_two_local_on_set(&oracle, &probes, window).map_err(usage)?;
            let json_report = two_local_check_report(&report);
            emit(&json_report);
            Ok(if report.pass() { 0 } else { 1 })
        }
        Command::DecomposeW22 { map, window, verify } => {
            let oracle = load_map(&map, Some(AlgebraId::W22))?;
            let probes = parse_elements_file(AlgebraId::W22, &read_file(&verify)?)?;
            match decompose_w22_two_local(&oracle, window, &probes) {
                Ok(d) => {
                    emit(&json!({
                        "status": "pass",
                        "derivation": DerivationLiteral::from(&d),
                    }));
                    Ok(0)
                }
                Err(DecomposeFailure::Eval(e)) => Err(usage(e)),
                Err(failure) => {
                    emit(&json!({"status": "fail", "error": failure.to_string()}));
                    Ok(1)
                }
            }
        }
        Command::ClassifyThin { map, window } => {
            if window < 6 {
                return Err("window must be at least 6 for classification".into());
            }
            let oracle = load_map(&map, Some(AlgebraId::Thin))?;
            match classify_thin_two_local(&oracle, window) {
                Ok(m) => {
                    emit(&json!({"status": "pass", "map": TwoLocalMapLiteral::from(&m)}));
                    Ok(0)
                }
                Err(ClassifyFailure::Eval(e)) => Err(usage(e)),
                Err(failure) => {
                    emit(&json!({"status": "fail", "error": failure.to_string()}));
                    Ok(1)
                }
            }
        }
        Command::Reproduce { case } => {
            if case == "all" {
                let cases = run_all();
                let pass = cases.iter().all(|c| c.passed());
                emit(&json!({
                    "status": if pass { "pass" } else { "fail" },
                    "cases": cases,
                }));
                Ok(if pass { 0 } else { 1 })
            } else {
                let report = run_case(&case).ok_or_else(|| {
                    format!("unknown case {case:?}; known cases: {}, all", CASE_IDS.join(", "))
                })?;
                let pass = report.passed();
                emit(&report);
                Ok(if pass { 0 } else { 1 })
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(message) => {
            eprintln!("error: {message}");
            ExitCode::from(2)
        }
    }
}
