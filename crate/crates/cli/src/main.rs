use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use s6lag::cubic_lab::{
    classify_stabilizer_with, fiber_bracket, fiber_solve, gauss_image_test, gauss_map, normal_form_eval, ClassifyTol,
    HarmonicCubic, Tensor3,
};
use s6lag::geometry_jet::is_austere;
use s6lag::linalg::SymMat3;
use s6lag::report::{
    example_patch, run_sweep, run_tube, run_verify, write_csv, JetMode, Report, ReportError, RunConfig, Suite,
};
use s6lag::tubes_rulings::{parse_gamma, PlaneBundle, TubeSpec};

#[derive(Parser)]
#[command(name = "s6lag", version, about = "Verify Lagrangian and pseudoholomorphic examples in the nearly Kähler S6")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Jet {
    Analytic,
    FiniteDifference,
}

#[derive(Subcommand)]
enum Command {
    /// Run the check list of one example.
    Verify {
        id: Option<String>,
        /// Base configuration as JSON; flags below override it.
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        grid: Option<usize>,
        #[arg(long = "tol-lag")]
        tol_lag: Option<f64>,
        #[arg(long)]
        jet: Option<Jet>,
        #[arg(long)]
        json: Option<PathBuf>,
        #[arg(long)]
        csv: Option<PathBuf>,
        /// Record elapsed time in the report (makes output run-dependent).
        #[arg(long)]
        wall_time: bool,
    },
    /// Stabilizer class of a harmonic cubic.
    ClassifyCubic {
        /// JSON 3×3×3 array.
        #[arg(long, conflicts_with = "params", required_unless_present = "params")]
        tensor: Option<PathBuf>,
        /// Normal-form parameters `r,s,a,b`.
        #[arg(long, value_parser = parse_params, allow_hyphen_values = true)]
        params: Option<[f64; 4]>,
    },
    /// Gauss image `K(h)` of a harmonic cubic.
    Gauss {
        #[arg(long)]
        tensor: PathBuf,
    },
    /// A cubic with prescribed Gauss image and parameter `r`.
    Fiber {
        /// JSON 3×3 symmetric matrix.
        #[arg(long = "K")]
        k: PathBuf,
        #[arg(long, allow_negative_numbers = true)]
        r: f64,
    },
    /// Build and verify a tube over a gallery curve.
    Tube {
        #[arg(long)]
        base: String,
        #[arg(long)]
        bundle: PlaneBundle,
        /// Radians, `pi/2` or `asin(2/3)`.
        #[arg(long, value_parser = parse_gamma)]
        gamma: f64,
        #[arg(long, default_value_t = 8)]
        grid: usize,
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Run a suite: all, cubics or tubes.
    Sweep {
        suite: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 8)]
        grid: usize,
        #[arg(long)]
        json: Option<PathBuf>,
        #[arg(long)]
        csv: Option<PathBuf>,
    },
}

fn parse_params(s: &str) -> Result<[f64; 4], String> {
    let v: Vec<f64> = s.split(',').map(|x| x.trim().parse::<f64>().map_err(|e| format!("`{x}`: {e}"))).collect::<Result<_, _>>()?;
    v.try_into().map_err(|v: Vec<f64>| format!("expected 4 comma-separated values, got {}", v.len()))
}

/// Anything that stops a run before checks can be judged. Exit code 2.
struct Fatal(String);

impl From<ReportError> for Fatal {
    fn from(e: ReportError) -> Self {
        Fatal(e.to_string())
    }
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T, Fatal> {
    let text = std::fs::read_to_string(path).map_err(|e| Fatal(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Fatal(format!("{}: {e}", path.display())))
}

fn print_report(r: &Report) {
    for c in &r.checks {
        let status = match (c.pass, c.expected_fail) {
            (true, false) => "ok",
            (true, true) => "ok (expected fail)",
            (false, _) => "FAIL",
        };
        let note = c.note.as_deref().map(|n| format!("  [{n}]")).unwrap_or_default();
        println!("  {:<28} {:>11.3e} <= {:<8.1e} {status}{note}", c.name, c.residual, c.tol);
    }
    println!("{}: {}", r.example, if r.pass { "pass" } else { "FAIL" });
}

fn outcome(pass: bool) -> ExitCode {
    if pass {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

fn print_json(v: serde_json::Value) {
    println!("{}", serde_json::to_string_pretty(&v).expect("json"));
}

fn load_cubic(path: &Path) -> Result<HarmonicCubic, Fatal> {
    let t: Tensor3 = read_json(path)?;
    HarmonicCubic::new(t).map_err(|e| Fatal(format!("{}: {e}", path.display())))
}

fn run(cli: Cli) -> Result<ExitCode, Fatal> {
    match cli.command {
        Command::Verify { id, config, grid, tol_lag, jet, json, csv, wall_time } => {
            let mut cfg = match (&config, id) {
                (Some(path), id) => {
                    let mut c = RunConfig::load(path)?;
                    if let Some(id) = id {
                        c.example = id;
                    }
                    c
                }
                (None, Some(id)) => RunConfig::new(id),
                (None, None) => return Err(Fatal("verify needs an example id or --config".into())),
            };
            if let Some(g) = grid {
                cfg.grid = g;
            }
            if let Some(t) = tol_lag {
                cfg.tolerances.lagrangian = t;
            }
            if let Some(j) = jet {
                cfg.jet_mode = match j {
                    Jet::Analytic => JetMode::Analytic,
                    Jet::FiniteDifference => JetMode::FiniteDifference,
                };
            }
            if json.is_some() {
                cfg.output = json;
            }
            cfg.wall_time |= wall_time;
            let report = run_verify(&cfg)?;
            print_report(&report);
            if let Some(path) = &cfg.output {
                report.write_json(path)?;
            }
            if let Some(path) = &csv {
                write_csv(path, std::slice::from_ref(&report))?;
            }
            Ok(outcome(report.pass))
        }
        Command::ClassifyCubic { tensor, params } => {
            let h = match (tensor, params) {
                (Some(path), _) => load_cubic(&path)?,
                (None, Some(p)) => normal_form_eval(p[0], p[1], p[2], p[3]),
                (None, None) => unreachable!("clap requires one of --tensor, --params"),
            };
            let class = classify_stabilizer_with(&h, &ClassifyTol::default());
            print_json(json!({ "class": class.to_string(), "austere": is_austere(&h), "norm": h.norm() }));
            Ok(ExitCode::SUCCESS)
        }
        Command::Gauss { tensor } => {
            let h = load_cubic(&tensor)?;
            let k = gauss_map(&h);
            let test = gauss_image_test(&k);
            print_json(json!({
                "K": k.0,
                "eigenvalues": k.eigen().values,
                "trace": test.trace,
                "sigma": test.sigma,
                "in_image": test.inside,
            }));
            Ok(ExitCode::SUCCESS)
        }
        Command::Fiber { k, r } => {
            let k: SymMat3 = SymMat3(read_json(&k)?);
            let h = fiber_solve(&k, r).map_err(|e| {
                let (lo, hi) = fiber_bracket(k.eigen().values);
                Fatal(format!("{e} (admissible r in [{lo}, {hi}])"))
            })?;
            print_json(json!({
                "h": h.tensor(),
                "round_trip": gauss_map(&h).max_abs_diff(&k),
            }));
            Ok(ExitCode::SUCCESS)
        }
        Command::Tube { base, bundle, gamma, grid, json } => {
            let base_patch = example_patch(&base).map_err(Fatal)?;
            if base_patch.dim() != 2 {
                return Err(Fatal(format!("tube base `{base}` is not a curve")));
            }
            let mut cfg = RunConfig::new(format!("tube:{base}:{bundle}:{gamma:.6}"));
            cfg.grid = grid;
            cfg.output = json;
            let report = run_tube(&TubeSpec { base: base_patch, bundle, gamma }, &cfg)?;
            print_report(&report);
            if let Some(path) = &cfg.output {
                report.write_json(path)?;
            }
            Ok(outcome(report.pass))
        }
        Command::Sweep { suite, seed, grid, json, csv } => {
            let suite: Suite = suite.parse()?;
            let sweep = run_sweep(suite, seed, grid)?;
            for r in &sweep.reports {
                let failing: Vec<&str> = r.checks.iter().filter(|c| !c.pass).map(|c| c.name.as_str()).collect();
                if failing.is_empty() {
                    println!("{:<24} pass ({} checks)", r.example, r.checks.len());
                } else {
                    println!("{:<24} FAIL: {}", r.example, failing.join(", "));
                }
            }
            println!("sweep {suite:?} seed {seed}: {}", if sweep.pass { "pass" } else { "FAIL" });
            if let Some(path) = &json {
                sweep.write_json(path)?;
            }
            if let Some(path) = &csv {
                sweep.write_csv(path)?;
            }
            Ok(outcome(sweep.pass))
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(Fatal(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
