use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Parser, Subcommand, ValueEnum};
use serde::de::DeserializeOwned;
use serde_json::{json, Map, Value};

use entcap::bloch;
use entcap::capacity::{maximize_rate, OptimizationConfig};
use entcap::protocol::steer;
use entcap::rates::{self, f_curve, f_vn_curve, RateReport, DEFAULT_DT};
use entcap::report::{self, to_csv, to_json};
use entcap::{HamiltonianFile, InteractionSpec, PureState, StateFile};

#[derive(Parser)]
#[command(name = "entcap", version, about = "Entanglement rates and capacities of two- and three-party interactions")]
struct Cli {
    /// Write the payload to this file instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Bloch decomposition, tensor norm and entanglement of a state.
    Decompose {
        #[arg(long)]
        state: PathBuf,
    },
    /// Entanglement generation rate of a state under an interaction.
    Rate {
        #[arg(long)]
        state: PathBuf,
        #[arg(long)]
        ham: PathBuf,
        #[arg(long, value_enum, default_value = "generic")]
        method: MethodArg,
        /// Half-step of the finite-difference route.
        #[arg(long, default_value_t = DEFAULT_DT)]
        dt: f64,
    },
    /// Maximize the rate over pure states.
    Capacity {
        #[arg(long)]
        ham: PathBuf,
        #[arg(long, default_value_t = 64)]
        restarts: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Two-qubit rate profile along the optimal family, as CSV (p, f).
    Curves {
        #[arg(long, value_enum)]
        measure: Measure,
        #[arg(long, default_value_t = 99)]
        samples: usize,
    },
    /// Steered two-qubit evolution, as CSV.
    Evolve {
        #[arg(long)]
        ham: PathBuf,
        #[arg(long)]
        p0: f64,
        #[arg(long)]
        dt: f64,
        #[arg(long)]
        tmax: f64,
    },
    /// Run every reproduction check and print a table.
    Reproduce,
}

#[derive(Clone, Copy, ValueEnum)]
enum MethodArg {
    Generic,
    Closed,
    Fd,
    All,
}

#[derive(Clone, Copy, ValueEnum)]
enum Measure {
    Tensor,
    Vn,
}

enum Outcome {
    Done(String),
    Mismatch(String),
}

fn read_json<T: DeserializeOwned>(path: &Path) -> anyhow::Result<T> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))
}

fn load_state(path: &Path) -> anyhow::Result<PureState> {
    let file: StateFile = read_json(path)?;
    let (state, renormalized) = file.to_state().with_context(|| format!("invalid state in {}", path.display()))?;
    if renormalized {
        eprintln!("warning: {} was renormalized on load", path.display());
    }
    Ok(state)
}

fn load_ham(path: &Path) -> anyhow::Result<InteractionSpec> {
    let file: HamiltonianFile = read_json(path)?;
    file.to_spec().with_context(|| format!("invalid interaction in {}", path.display()))
}

fn object(value: Value) -> Map<String, Value> {
    match value {
        Value::Object(m) => m,
        other => Map::from_iter([("value".to_string(), other)]),
    }
}

fn decompose(state: &Path) -> anyhow::Result<String> {
    let state = load_state(state)?;
    let d = bloch::decompose(&state)?;
    let mut out = object(serde_json::to_value(&d)?);
    out.insert("system".into(), json!(d.system()));
    out.insert("T_norm".into(), json!(d.tensor_norm()));
    out.insert("E".into(), json!(d.entanglement()?));
    Ok(to_json(&out))
}

fn rate(state: &Path, ham: &Path, method: MethodArg, dt: f64) -> anyhow::Result<String> {
    let state = load_state(state)?;
    let spec = load_ham(ham)?;
    if state.dims() != spec.system().dims() {
        bail!("state has dims {:?} but the interaction acts on {}", state.dims(), spec.system());
    }
    let generic = || rates::rate_generic(&state, &spec);
    let closed = || rates::rate_closed(&state, &spec);
    let fd = || rates::rate_finite_difference(&state, &spec, dt);
    let report: RateReport = match method {
        MethodArg::Generic => generic()?,
        MethodArg::Closed => closed()?,
        MethodArg::Fd => fd()?,
        MethodArg::All => {
            let (g, c, f) = (generic()?, closed()?, fd()?);
            let deltas = json!({
                "generic_closed": (g.gamma - c.gamma).abs(),
                "generic_fd": (g.gamma - f.gamma).abs(),
                "closed_fd": (c.gamma - f.gamma).abs(),
            });
            let max = [(g.gamma - c.gamma).abs(), (g.gamma - f.gamma).abs(), (c.gamma - f.gamma).abs()]
                .into_iter()
                .fold(0.0, f64::max);
            return Ok(to_json(&json!({
                "generic": g,
                "closed_form": c,
                "finite_difference": f,
                "deltas": deltas,
                "max_delta": max,
            })));
        }
    };
    Ok(to_json(&report))
}

fn capacity(ham: &Path, restarts: usize, seed: u64) -> anyhow::Result<String> {
    let spec = load_ham(ham)?;
    let config = OptimizationConfig { restarts, master_seed: seed, ..OptimizationConfig::default() };
    let res = maximize_rate(&spec, &config)?;
    eprintln!("{}/{} restarts converged", res.converged_restarts(), res.restarts.len());
    let mut out = Map::new();
    out.insert("system".into(), json!(res.system));
    out.insert("gamma_max".into(), json!(res.gamma_max));
    out.insert("E".into(), json!(res.entanglement_of_optimum));
    out.insert("state".into(), json!(StateFile::from(&res.best_state)));
    if let Some(sc) = &res.schmidt_coefficients {
        out.insert("schmidt_coefficients".into(), json!(sc));
    }
    if let Some(class) = res.classification {
        out.insert("class".into(), json!(class));
    }
    if let Some(t) = res.three_tangle {
        out.insert("three_tangle".into(), json!(t));
    }
    out.insert(
        "diagnostics".into(),
        json!({
            "seed": seed,
            "best_restart": res.best_restart,
            "converged": res.converged_restarts(),
            "restarts": res.restarts,
        }),
    );
    Ok(to_json(&out))
}

fn curves(measure: Measure, samples: usize) -> anyhow::Result<String> {
    if samples < 2 {
        bail!("--samples must be at least 2");
    }
    let f: fn(f64) -> entcap::Result<f64> = match measure {
        Measure::Tensor => f_curve,
        Measure::Vn => f_vn_curve,
    };
    let rows = (1..=samples)
        .map(|k| {
            let p = k as f64 / (samples + 1) as f64;
            Ok(vec![p, f(p)?])
        })
        .collect::<entcap::Result<Vec<_>>>()?;
    Ok(to_csv(&["p", "f"], rows))
}

fn evolve(ham: &Path, p0: f64, dt: f64, tmax: f64) -> anyhow::Result<String> {
    let spec = load_ham(ham)?;
    let traj = steer(&spec, p0, dt, tmax)?;
    eprintln!("stopped after {} points: {:?}", traj.points.len(), traj.stop);
    let rows =
        traj.points.iter().map(|pt| vec![pt.t, pt.p, pt.entanglement, pt.gamma, pt.residual_r, pt.residual_tau]);
    Ok(to_csv(&["t", "p", "E", "gamma", "res_r", "res_tau"], rows))
}

fn reproduce() -> anyhow::Result<Outcome> {
    let checks = report::run_checks()?;
    let text = report::table(&checks);
    Ok(if checks.iter().all(|c| c.pass) { Outcome::Done(text) } else { Outcome::Mismatch(text) })
}

fn run(cli: &Cli) -> anyhow::Result<Outcome> {
    let done = |s: anyhow::Result<String>| s.map(Outcome::Done);
    match &cli.command {
        Command::Decompose { state } => done(decompose(state)),
        Command::Rate { state, ham, method, dt } => done(rate(state, ham, *method, *dt)),
        Command::Capacity { ham, restarts, seed } => done(capacity(ham, *restarts, *seed)),
        Command::Curves { measure, samples } => done(curves(*measure, *samples)),
        Command::Evolve { ham, p0, dt, tmax } => done(evolve(ham, *p0, *dt, *tmax)),
        Command::Reproduce => reproduce(),
    }
}

fn emit(out: Option<&Path>, payload: &str) -> anyhow::Result<()> {
    match out {
        Some(path) => fs::write(path, payload).with_context(|| format!("writing {}", path.display())),
        None => {
            print!("{payload}");
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (payload, code) = match run(&cli) {
        Ok(Outcome::Done(s)) => (s, 0),
        Ok(Outcome::Mismatch(s)) => (s, 1),
        Err(e) => {
            eprintln!("error: {e:#}");
            return ExitCode::from(2);
        }
    };
    if let Err(e) = emit(cli.out.as_deref(), &payload) {
        eprintln!("error: {e:#}");
        return ExitCode::from(2);
    }
    ExitCode::from(code)
}
