//! `agq`: build and report one-point AG codes, tabulate stabilizer
//! parameters, run channel simulations and regenerate the reference examples.

mod manifest;

use std::fs::File;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use agq_core::agcode::{check_duality_claim, format_matrix, hermitian_readings, load_explicit_code};
use agq_core::golden::{golden_report, QUANTUM_TABLE};
use agq_core::quantum::{read_known_codes, table, write_table_csv, TableRow};
use agq_core::rrspace::{dimension_comparison, semigroup};
use agq_core::simulator::{preset_codes, run_sweep, write_bundle, PresetCode};
use agq_core::{build_onepoint_code, verified_basis, Curve, CurveSpec, EvalSet, Family, Field, LinearCode, SimConfig};
use anyhow::{anyhow, bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use manifest::RunManifest;

const DEFAULT_SEED: u64 = 1;
const FIGURE_RATES: &str = "0,0.05,0.1,0.15,0.2,0.25,0.3";

#[derive(Parser)]
#[command(name = "agq", version, about = "One-point AG codes over GF(q^2)")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone, Debug)]
struct CurveArgs {
    /// `superelliptic` (y^((q+1)/2) = x^m + x) or `hermitian`
    #[arg(long, default_value = "superelliptic")]
    family: Family,
    #[arg(long)]
    q: Option<u32>,
    /// Exponent of x; ignored for the Hermitian family
    #[arg(long)]
    m: Option<u32>,
    /// Accept parameters violating the gcd hypotheses
    #[arg(long)]
    relaxed: bool,
    /// Evaluate at the first N affine points only
    #[arg(long)]
    points: Option<usize>,
}

impl CurveArgs {
    fn spec(&self) -> anyhow::Result<CurveSpec> {
        let q = self.q.ok_or_else(|| anyhow!("--q is required"))?;
        Ok(match (self.family, self.relaxed) {
            (Family::Superelliptic, true) => {
                CurveSpec::superelliptic_relaxed(q, self.m.ok_or_else(|| anyhow!("--m is required"))?)?
            }
            _ => CurveSpec::new(self.family, q, self.m)?,
        })
    }

    fn curve(&self) -> anyhow::Result<Curve> {
        Ok(Curve::new(self.spec()?)?)
    }

    fn eval_set(&self) -> EvalSet {
        self.points.map_or(EvalSet::AllAffine, EvalSet::First)
    }

    fn to_json(&self) -> serde_json::Value {
        json!({
            "family": self.family.to_string(),
            "q": self.q,
            "m": self.m,
            "relaxed": self.relaxed,
            "points": self.points,
        })
    }
}

#[derive(Copy, Clone, Debug, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Describe GF(p^e): modulus, primitive element, cardinality
    FieldInfo {
        #[arg(long)]
        p: u32,
        #[arg(long, default_value_t = 1)]
        e: u32,
    },
    /// Enumerate rational points and check maximality
    Points {
        #[command(flatten)]
        curve: CurveArgs,
        /// Write the point list as CSV
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Rank-verified monomial basis of L(r P_inf)
    Basis {
        #[command(flatten)]
        curve: CurveArgs,
        #[arg(long, allow_negative_numbers = true)]
        r: i64,
    },
    /// Weierstrass semigroup at infinity up to a bound, as CSV
    Semigroup {
        #[command(flatten)]
        curve: CurveArgs,
        #[arg(long, default_value_t = 30)]
        bound: u64,
    },
    /// Parameters, distances and self-orthogonality of C(D, r P_inf) or of a matrix file
    CodeReport {
        #[command(flatten)]
        curve: CurveArgs,
        #[arg(long, allow_negative_numbers = true)]
        r: Option<i64>,
        /// Generator matrix file instead of a curve
        #[arg(long, conflicts_with = "r")]
        matrix: Option<PathBuf>,
        #[arg(long, default_value_t = agq_core::DEFAULT_BUDGET)]
        budget: u128,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Stabilizer parameters for r in [r-min, r-max]
    QuantumTable {
        #[arg(long)]
        q: u32,
        #[arg(long)]
        m: u32,
        #[arg(long, allow_negative_numbers = true)]
        r_min: i64,
        #[arg(long, allow_negative_numbers = true)]
        r_max: i64,
        /// CSV of known codes `n,k,d,reference` for the comparison column
        #[arg(long)]
        known: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Monte-Carlo transmission over a q-ary symmetric channel
    Simulate {
        #[command(flatten)]
        curve: CurveArgs,
        #[arg(long, allow_negative_numbers = true)]
        r: Option<i64>,
        #[arg(long, conflicts_with = "r")]
        matrix: Option<PathBuf>,
        /// Run the three-code sweep
        #[arg(long, conflicts_with_all = ["r", "matrix"])]
        preset: bool,
        #[arg(long, value_delimiter = ',', default_value = FIGURE_RATES)]
        rates: Vec<f64>,
        #[arg(long, default_value_t = 10_000)]
        trials: u64,
        #[arg(long, env = "AGQ_SEED", default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[arg(long)]
        threads: Option<usize>,
        #[arg(long, default_value_t = agq_core::DEFAULT_BUDGET)]
        budget: u128,
        #[arg(long)]
        out: PathBuf,
    },
    /// Regenerate every reference value; exits 2 on any mismatch
    Reproduce {
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        skip_sim: bool,
        #[arg(long, value_delimiter = ',', default_value = FIGURE_RATES)]
        rates: Vec<f64>,
        #[arg(long, default_value_t = 10_000)]
        trials: u64,
        #[arg(long, env = "AGQ_SEED", default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[arg(long, default_value_t = agq_core::DEFAULT_BUDGET)]
        budget: u128,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}

fn emit(text: &str, out: Option<&Path>) -> anyhow::Result<()> {
    match out {
        Some(path) => std::fs::write(path, text).with_context(|| format!("writing {}", path.display())),
        None => {
            io::stdout().write_all(text.as_bytes())?;
            Ok(())
        }
    }
}

fn pretty<T: serde::Serialize>(v: &T) -> anyhow::Result<String> {
    Ok(serde_json::to_string_pretty(v)? + "\n")
}

fn run(command: Command) -> anyhow::Result<ExitCode> {
    match command {
        Command::FieldInfo { p, e } => {
            let field = Field::new(p, e)?;
            let desc = field.description();
            let report = json!({
                "p": desc.p,
                "e": desc.e,
                "order": desc.order,
                "modulus": desc.modulus,
                "modulus_polynomial": polynomial(&desc.modulus),
                "primitive": field.format(field.primitive()),
                "primitive_index": field.primitive().index(),
            });
            emit(&pretty(&report)?, None)?;
        }
        Command::Points { curve, csv } => {
            let c = curve.curve()?;
            if let Some(path) = csv {
                c.write_points_csv(&c.enumerate_points(), File::create(&path)?)?;
            }
            emit(&pretty(&c.maximality_check())?, None)?;
        }
        Command::Basis { curve, r } => {
            let c = curve.curve()?;
            let points = curve.eval_set().select(&c)?;
            let (basis, _) = verified_basis(&c, r, &points)?;
            emit(&pretty(&basis.to_json())?, None)?;
        }
        Command::Semigroup { curve, bound } => {
            let table = semigroup(&curve.spec()?, bound)?;
            table.write_csv(io::stdout())?;
        }
        Command::CodeReport { curve, r, matrix, budget, out } => {
            let report = match (matrix, r) {
                (Some(path), _) => {
                    let code = load_explicit_code(&path)?;
                    json!({ "matrix": path, "report": code.report(budget) })
                }
                (None, Some(r)) => curve_report(&curve, r, budget)?,
                (None, None) => bail!("give --r with curve parameters, or --matrix"),
            };
            emit(&pretty(&report)?, out.as_deref())?;
        }
        Command::QuantumTable { q, m, r_min, r_max, known, format, out } => {
            let known = match &known {
                Some(path) => {
                    read_known_codes(File::open(path).with_context(|| format!("opening {}", path.display()))?)?
                }
                None => Vec::new(),
            };
            let rows = table(q, m, r_min..=r_max, &known);
            let text = match format {
                Format::Json => pretty(&rows)?,
                Format::Csv => table_csv(&rows)?,
            };
            emit(&text, out.as_deref())?;
        }
        Command::Simulate { curve, r, matrix, preset, rates, trials, seed, threads, budget, out } => {
            let config = SimConfig { error_rates: rates, num_transmissions: trials, master_seed: seed, threads };
            config.validate()?;
            let mut inputs = Vec::new();
            let codes = if preset {
                preset_codes(budget)?
            } else if let Some(path) = matrix {
                let code = load_explicit_code(&path)?;
                inputs.push(path.clone());
                vec![preset_from(code, budget, format!("explicit matrix {}", path.display()))]
            } else {
                let r = r.ok_or_else(|| anyhow!("give --r, --matrix or --preset"))?;
                let c = curve.curve()?;
                let code = build_onepoint_code(&c, r, &curve.eval_set())?;
                vec![preset_from(code, budget, format!("C(D, {r}P) on {}", c.spec()))]
            };
            let params = json!({
                "curve": curve.to_json(),
                "r": r,
                "preset": preset,
                "config": config,
                "budget": budget.to_string(),
            });
            let mut manifest = RunManifest::start("simulate", params, Some(seed));
            manifest.inputs = inputs;
            let results = run_sweep(&codes, &config)?;
            manifest.outputs = write_bundle(&results, &out)?;
            let summary = out.join("simulation.json");
            std::fs::write(&summary, pretty(&results)?)?;
            manifest.outputs.push(summary);
            manifest.finish(&out)?;
        }
        Command::Reproduce { out, skip_sim, rates, trials, seed, budget } => {
            return reproduce(&out, skip_sim, rates, trials, seed, budget);
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn preset_from(code: LinearCode, budget: u128, note: String) -> PresetCode {
    let d = code.min_distance(budget).d;
    PresetCode { code, d, note }
}

fn polynomial(coeffs: &[u32]) -> String {
    let terms: Vec<String> = coeffs
        .iter()
        .enumerate()
        .rev()
        .filter(|(_, &c)| c != 0)
        .map(|(i, &c)| {
            let coef = if c == 1 && i > 0 { String::new() } else { c.to_string() };
            match i {
                0 => coef,
                1 => format!("{coef}x"),
                _ => format!("{coef}x^{i}"),
            }
        })
        .collect();
    terms.join(" + ")
}

fn table_csv(rows: &[TableRow]) -> anyhow::Result<String> {
    let mut buf = Vec::new();
    write_table_csv(rows, &mut buf)?;
    Ok(String::from_utf8(buf)?)
}

fn curve_report(args: &CurveArgs, r: i64, budget: u128) -> anyhow::Result<serde_json::Value> {
    let curve = args.curve()?;
    let eval_set = args.eval_set();
    let code = build_onepoint_code(&curve, r, &eval_set)?;
    let mut report = code.report(budget);
    report.duality_claim = Some(check_duality_claim(&curve, r, &eval_set)?);
    if curve.field().is_quadratic_extension() {
        report.hermitian_readings = Some(hermitian_readings(&curve, r, &eval_set)?);
    }
    let dimension = dimension_comparison(&curve, [r])?.rows.into_iter().next();
    Ok(json!({
        "curve": curve.spec(),
        "equation": curve.spec().equation(),
        "genus": curve.genus(),
        "maximality": curve.maximality_check(),
        "basis": code.basis().map(|b| b.to_json()),
        "report": report,
        "dimension": dimension,
    }))
}

fn reproduce(
    out: &Path,
    skip_sim: bool,
    rates: Vec<f64>,
    trials: u64,
    seed: u64,
    budget: u128,
) -> anyhow::Result<ExitCode> {
    std::fs::create_dir_all(out)?;
    let params = json!({
        "skip_sim": skip_sim,
        "rates": rates,
        "trials": trials,
        "budget": budget.to_string(),
    });
    let mut manifest = RunManifest::start("reproduce", params, (!skip_sim).then_some(seed));
    let report = golden_report(budget)?;

    let golden = out.join("golden.json");
    std::fs::write(&golden, pretty(&report)?)?;
    let dims = out.join("dimension_comparison.json");
    std::fs::write(&dims, pretty(&report.dimension_comparison)?)?;

    let mut rows = table(3, 3, 2..=4, &[]);
    rows.extend(table(5, 3, 4..=8, &[]));
    debug_assert_eq!(rows.len(), QUANTUM_TABLE.len());
    let qtable = out.join("quantum_table.csv");
    std::fs::write(&qtable, table_csv(&rows)?)?;

    let code = build_onepoint_code(&Curve::new(CurveSpec::hermitian(2)?)?, 3, &EvalSet::AllAffine)?;
    let gen = out.join("hermitian_q2_r3.generator");
    std::fs::write(&gen, format_matrix(code.field(), code.generator()))?;
    let par = out.join("hermitian_q2_r3.parity");
    std::fs::write(&par, format_matrix(code.field(), code.parity_check()))?;
    manifest.outputs = vec![golden, dims, qtable, gen, par];

    if !skip_sim {
        let config = SimConfig { error_rates: rates, num_transmissions: trials, master_seed: seed, threads: None };
        let results = run_sweep(&preset_codes(budget)?, &config)?;
        manifest.outputs.extend(write_bundle(&results, out)?);
    }
    manifest.finish(out)?;

    for c in &report.checks {
        if c.passed {
            println!("PASS  {}", c.name);
        } else {
            println!("FAIL  {}: expected {}, got {}", c.name, c.expected, c.actual);
        }
    }
    println!("reference G * H^T = 0: {}", report.reference_orthogonal);
    println!("formula disagrees with rank at r = {:?}", report.dimension_comparison.disagreements);
    for v in &report.hermitian_verdicts {
        println!(
            "Hermitian self-orthogonal, r = {}: deg r -> {}, deg r(q+1) -> {}",
            v.r, v.degree_r, v.degree_r_q_plus_1
        );
    }
    let failures = report.failures();
    if failures.is_empty() {
        println!("all {} golden checks passed", report.checks.len());
        Ok(ExitCode::SUCCESS)
    } else {
        eprintln!("{} golden check(s) failed", failures.len());
        Ok(ExitCode::from(2))
    }
}
