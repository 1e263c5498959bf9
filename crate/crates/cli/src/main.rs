//! `hopforge`: solve, generate, verify, benchmark and inspect.
//!
//! Exit codes: 0 ok, 1 negative cycle, 2 input error, 3 verification
//! failure. Reports go to stdout as JSON.

mod bench;
mod report;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use hopforge_core::dimacs::{parse_dimacs, write_dimacs};
use hopforge_core::forge::{bootstrap_reducer, build_envelopes, ForgeParams};
use hopforge_core::generate::{generate, InstanceSpec, Mode};
use hopforge_core::solver::{bellman_ford, solve, verify};
use hopforge_core::stats::Counters;
use hopforge_core::{oracle, SolveResult, SolverConfig, WeightedDigraph};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use report::{error_report, SolveReport, FORMAT_VERSION};

const CONFIG_ENV: &str = "HOPFORGE_CONFIG";

#[derive(Parser)]
#[command(name = "hopforge", version, about = "Negative-length shortest paths workbench")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Shortest paths from one source, or a negative cycle.
    Solve {
        #[arg(long)]
        input: PathBuf,
        /// 1-based source vertex.
        #[arg(long)]
        source: usize,
        #[arg(long, value_enum, default_value_t = Baseline::Auto)]
        baseline: Baseline,
        #[arg(long)]
        seed: Option<u64>,
        /// Solver constant overrides, `key=value`; applied after the file
        /// named by HOPFORGE_CONFIG.
        #[arg(long = "config", value_name = "KEY=VALUE")]
        config: Vec<String>,
        /// Include per-iteration wall times (makes reports nondeterministic).
        #[arg(long)]
        timings: bool,
    },
    /// Writes a random instance in DIMACS form.
    Gen {
        #[arg(long)]
        mode: Mode,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 0.25)]
        neg_fraction: f64,
        #[arg(long, default_value_t = 8)]
        weight_bound: i64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Checks a solve report against its instance.
    Verify {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        result: PathBuf,
    },
    /// Runs a named suite and writes per-instance rows.
    Bench {
        #[arg(long, value_parser = suite_name)]
        suite: String,
        #[arg(long, default_value_t = 4, value_parser = clap::value_parser!(u64).range(1..=16))]
        seeds: u64,
        #[arg(long)]
        out: PathBuf,
        #[arg(long = "config", value_name = "KEY=VALUE")]
        config: Vec<String>,
    },
    /// Builds the bootstrapped reducer of `G_U` and dumps it (0-based ids).
    InspectReducer {
        #[arg(long)]
        input: PathBuf,
        /// 1-based negative vertices forming `U`.
        #[arg(long, value_delimiter = ',', num_args = 1..)]
        u_set: Vec<usize>,
        /// Hop parameter; defaults to `|U|`.
        #[arg(long)]
        h: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Baseline {
    Auto,
    Bf,
}

fn suite_name(s: &str) -> Result<String, String> {
    match bench::find(s) {
        Some(_) => Ok(s.to_string()),
        None => {
            let names: Vec<_> = bench::SUITES.iter().map(|s| s.name).collect();
            Err(format!("unknown suite, expected one of {}", names.join(", ")))
        }
    }
}

enum Failure {
    Input(String),
    Verification(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Input(_) => 2,
            Failure::Verification(_) => 3,
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Solve { input, source, baseline, seed, config, timings } => {
            cmd_solve(&input, source, baseline, seed, &config, timings)
        }
        Command::Gen { mode, n, m, seed, neg_fraction, weight_bound, out } => {
            cmd_gen(InstanceSpec { mode, n, m, neg_fraction, weight_bound, seed }, &out)
        }
        Command::Verify { input, result } => cmd_verify(&input, &result),
        Command::Bench { suite, seeds, out, config } => cmd_bench(&suite, seeds as usize, &out, &config),
        Command::InspectReducer { input, u_set, h, seed } => cmd_inspect(&input, &u_set, h, seed),
    };
    match outcome {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            let (Failure::Input(msg) | Failure::Verification(msg)) = &f;
            eprintln!("hopforge: {msg}");
            print_json(&error_report(msg));
            ExitCode::from(f.code())
        }
    }
}

fn print_json<T: Serialize>(value: &T) {
    emit(&(serde_json::to_string_pretty(value).expect("reports serialize") + "\n"));
}

/// Writes to stdout; a closed pipe (`| head`) is not an error.
fn emit(text: &str) {
    use std::io::Write;
    let _ = std::io::stdout().lock().write_all(text.as_bytes());
}

fn read_graph(path: &Path) -> Result<WeightedDigraph, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    parse_dimacs(&text).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

/// Defaults, then the TOML file named by HOPFORGE_CONFIG, then overrides.
fn load_config(overrides: &[String]) -> Result<SolverConfig, Failure> {
    let mut cfg = match std::env::var_os(CONFIG_ENV) {
        Some(path) => {
            let text = std::fs::read_to_string(&path)
                .map_err(|e| Failure::Input(format!("{CONFIG_ENV}={}: {e}", path.to_string_lossy())))?;
            toml::from_str::<SolverConfig>(&text)
                .map_err(|e| Failure::Input(format!("{CONFIG_ENV}={}: {e}", path.to_string_lossy())))?
        }
        None => SolverConfig::default(),
    };
    cfg.validate().map_err(Failure::Input)?;
    for kv in overrides {
        let (k, v) = kv.split_once('=').ok_or_else(|| Failure::Input(format!("config override {kv:?} is not key=value")))?;
        cfg.set(k.trim(), v.trim()).map_err(Failure::Input)?;
    }
    Ok(cfg)
}

fn cmd_solve(
    input: &Path,
    source: usize,
    baseline: Baseline,
    seed: Option<u64>,
    overrides: &[String],
    timings: bool,
) -> Result<u8, Failure> {
    let mut cfg = load_config(overrides)?;
    if let Some(seed) = seed {
        cfg.seed = seed;
    }
    let g = read_graph(input)?;
    if source == 0 || source > g.n() {
        return Err(Failure::Input(format!("source {source} outside 1..={}", g.n())));
    }
    let s = source - 1;
    let report = match baseline {
        Baseline::Auto => {
            let out = solve(&g, s, &cfg);
            SolveReport::new(&g, "auto", s, &out.result).with_run(&out.iterations, out.counters, timings)
        }
        Baseline::Bf => {
            let before = Counters::snapshot();
            let result = bellman_ford(&g, s);
            SolveReport::new(&g, "bf", s, &result).with_run(&[], Counters::snapshot().since(before), timings)
        }
    };
    finish_solve(&g, report)
}

/// Re-checks the printed report itself, so what is printed is what was verified.
fn finish_solve(g: &WeightedDigraph, mut report: SolveReport) -> Result<u8, Failure> {
    let result = report.to_result(g).map_err(Failure::Verification)?;
    verify(g, &result).map_err(|e| Failure::Verification(format!("result failed verification: {e}")))?;
    report.verified = true;
    print_json(&report);
    Ok(match result {
        SolveResult::Distances { .. } => 0,
        SolveResult::NegativeCycle(_) => 1,
    })
}

fn cmd_gen(spec: InstanceSpec, out: &Path) -> Result<u8, Failure> {
    spec.validate().map_err(|e| Failure::Input(e.to_string()))?;
    let g = generate(&spec);
    let mode = serde_json::to_value(spec.mode).expect("modes serialize");
    let header = format!(
        "c hopforge gen mode={} n={} m={} neg_fraction={} weight_bound={} seed={}\n",
        mode.as_str().unwrap_or_default(),
        spec.n,
        spec.m,
        spec.neg_fraction,
        spec.weight_bound,
        spec.seed
    );
    std::fs::write(out, header + &write_dimacs(&g)).map_err(|e| Failure::Input(format!("{}: {e}", out.display())))?;
    print_json(&serde_json::json!({
        "format_version": FORMAT_VERSION,
        "status": "ok",
        "out": out.display().to_string(),
        "n": g.n(),
        "m": g.m(),
        "negative_arcs": g.hop_arcs().count(),
    }));
    Ok(0)
}

fn cmd_verify(input: &Path, result: &Path) -> Result<u8, Failure> {
    let g = read_graph(input)?;
    let text = std::fs::read_to_string(result).map_err(|e| Failure::Input(format!("{}: {e}", result.display())))?;
    let report: SolveReport =
        serde_json::from_str(&text).map_err(|e| Failure::Input(format!("{}: {e}", result.display())))?;
    if report.format_version != FORMAT_VERSION {
        return Err(Failure::Input(format!("unsupported format_version {}", report.format_version)));
    }
    if (report.n, report.m) != (g.n(), g.m()) {
        return Err(Failure::Verification(format!(
            "report is for n={} m={}, instance has n={} m={}",
            report.n,
            report.m,
            g.n(),
            g.m()
        )));
    }
    let parsed = report.to_result(&g).map_err(Failure::Verification)?;
    verify(&g, &parsed).map_err(Failure::Verification)?;
    print_json(&serde_json::json!({
        "format_version": FORMAT_VERSION,
        "status": "ok",
        "verified": true,
        "result_status": report.status,
    }));
    Ok(0)
}

fn cmd_bench(suite: &str, seeds: usize, out: &Path, overrides: &[String]) -> Result<u8, Failure> {
    let cfg = load_config(overrides)?;
    let suite = bench::find(suite).expect("validated by clap");
    let report = bench::run(suite, seeds, &cfg);
    let text = serde_json::to_string_pretty(&report).expect("reports serialize");
    std::fs::write(out, text + "\n").map_err(|e| Failure::Input(format!("{}: {e}", out.display())))?;
    let bad: Vec<u64> = report.rows.iter().filter(|r| !r.verified || !r.agrees).map(|r| r.seed).collect();
    if !bad.is_empty() {
        return Err(Failure::Verification(format!("suite {} failed at seeds {bad:?}", suite.name)));
    }
    print_json(&serde_json::json!({
        "format_version": FORMAT_VERSION,
        "status": "ok",
        "suite": suite.name,
        "instances": report.rows.len(),
        "out": out.display().to_string(),
    }));
    Ok(0)
}

fn cmd_inspect(input: &Path, u_set: &[usize], h: Option<usize>, seed: u64) -> Result<u8, Failure> {
    let g = read_graph(input)?;
    let mut set = Vec::with_capacity(u_set.len());
    for &u in u_set {
        if u == 0 || u > g.n() {
            return Err(Failure::Input(format!("vertex {u} outside 1..={}", g.n())));
        }
        set.push(u - 1);
    }
    set.sort_unstable();
    set.dedup();
    let g_u = g.restrict_negatives(&set).map_err(|e| Failure::Input(format!("{e} (ids 0-based)")))?;
    if oracle::has_negative_cycle(&g_u) {
        return Err(Failure::Input("G_U has a negative cycle, no reducer exists".into()));
    }
    let h = h.unwrap_or(set.len()).max(1);
    let params = ForgeParams { enforce_envelope_sizes: false, ..ForgeParams::default() };
    let env = build_envelopes(&g_u, &set, h, false).map_err(|e| Failure::Input(e.to_string()))?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let reducer = bootstrap_reducer(&env, &params, &mut rng).map_err(|e| Failure::Input(e.to_string()))?;
    emit(&reducer.dump());
    Ok(0)
}
