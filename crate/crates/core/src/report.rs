//! Serialization helpers and the reproduction checks.
//!
//! Numbers leave the crate with 9 significant digits. The `criterion_*`
//! functions each return the rows of one reproduction check; `reproduce` and
//! the acceptance tests both consume them.

use std::fmt::Write as _;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::Value;

use crate::bloch::{self, TwoQubitBloch};
use crate::capacity::{capacity_two_qubit_vn, maximize_rate, OptimizationConfig, ThreeQubitClass};
use crate::error::Result;
use crate::generators::{jacobi_residual, su3_constants, verify_product_identity, GeneratorSet};
use crate::hamiltonian::{Couplings, InteractionSpec};
use crate::linalg::{random_local_unitary, random_state_with};
use crate::protocol::steer;
use crate::rates::{
    check_conditions, f_curve, psi_e, rate_closed, rate_finite_difference, rate_generic, rate_locked, DEFAULT_DT,
};
use crate::state::PureState;
use crate::system::System;

pub const SIGNIFICANT_DIGITS: usize = 9;

/// Rounds to `digits` significant digits; `-0.0` becomes `0.0`.
pub fn round_sig(x: f64, digits: usize) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return if x == 0.0 { 0.0 } else { x };
    }
    let y: f64 = format!("{:.*e}", digits.saturating_sub(1), x).parse().unwrap_or(x);
    if y == 0.0 {
        0.0
    } else {
        y
    }
}

/// Applies [`round_sig`] to every float inside a JSON value.
pub fn round_json(value: Value) -> Value {
    match value {
        Value::Number(n) if n.is_f64() => {
            let x = round_sig(n.as_f64().unwrap_or(0.0), SIGNIFICANT_DIGITS);
            serde_json::Number::from_f64(x).map_or(Value::Null, Value::Number)
        }
        Value::Array(items) => Value::Array(items.into_iter().map(round_json).collect()),
        Value::Object(map) => Value::Object(map.into_iter().map(|(k, v)| (k, round_json(v))).collect()),
        other => other,
    }
}

/// Pretty JSON with rounded numbers and a trailing newline.
pub fn to_json<T: Serialize>(value: &T) -> String {
    let v = serde_json::to_value(value).expect("output types serialize to JSON");
    let mut s = serde_json::to_string_pretty(&round_json(v)).expect("JSON values print");
    s.push('\n');
    s
}

pub fn format_number(x: f64) -> String {
    let y = round_sig(x, SIGNIFICANT_DIGITS);
    if y != 0.0 && (y.abs() < 1e-4 || y.abs() >= 1e15) {
        format!("{y:e}")
    } else {
        format!("{y}")
    }
}

/// Comma-separated table with a header row.
pub fn to_csv(header: &[&str], rows: impl IntoIterator<Item = Vec<f64>>) -> String {
    let mut out = header.join(",");
    out.push('\n');
    for row in rows {
        let cells: Vec<String> = row.into_iter().map(format_number).collect();
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Target {
    Within { expected: f64, tolerance: f64 },
    AtMost { limit: f64 },
    AtLeast { limit: f64 },
}

impl Target {
    pub fn accepts(self, x: f64) -> bool {
        match self {
            Target::Within { expected, tolerance } => (x - expected).abs() <= tolerance,
            Target::AtMost { limit } => x <= limit,
            Target::AtLeast { limit } => x >= limit,
        }
    }

    fn describe(self) -> (String, String) {
        match self {
            Target::Within { expected, tolerance } => (format_number(expected), format!("±{tolerance:e}")),
            Target::AtMost { limit } => ("-".into(), format!("<= {limit:e}")),
            Target::AtLeast { limit } => ("-".into(), format!(">= {limit:e}")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub criterion: u8,
    pub name: String,
    pub target: Target,
    pub computed: f64,
    pub pass: bool,
}

impl Check {
    fn new(criterion: u8, name: impl Into<String>, target: Target, computed: f64) -> Self {
        Self { criterion, name: name.into(), target, computed, pass: target.accepts(computed) }
    }

    pub fn line(&self) -> String {
        let (expected, tol) = self.target.describe();
        format!(
            "[{}] {:<2} {:<28} expected {:<14} computed {:<16} tolerance {}",
            if self.pass { "PASS" } else { "FAIL" },
            self.criterion,
            self.name,
            expected,
            format_number(self.computed),
            tol
        )
    }
}

pub fn table(checks: &[Check]) -> String {
    let mut s = String::new();
    for c in checks {
        let _ = writeln!(s, "{}", c.line());
    }
    let passed = checks.iter().filter(|c| c.pass).count();
    let _ = writeln!(s, "{passed}/{} checks passed", checks.len());
    s
}

fn within(criterion: u8, name: &str, expected: f64, tolerance: f64, x: f64) -> Check {
    Check::new(criterion, name, Target::Within { expected, tolerance }, x)
}

fn at_most(criterion: u8, name: &str, limit: f64, x: f64) -> Check {
    Check::new(criterion, name, Target::AtMost { limit }, x)
}

fn runtime(criterion: u8, start: Instant, limit: f64) -> Check {
    at_most(criterion, "runtime_s", limit, start.elapsed().as_secs_f64())
}

pub fn criterion_1() -> Vec<Check> {
    let start = Instant::now();
    let (p0, gamma) = capacity_two_qubit_vn();
    vec![within(1, "p0", 0.0832217, 1e-4, p0), within(1, "Gamma_max_vn", 1.9123, 1e-3, gamma), runtime(1, start, 1.0)]
}

pub fn criterion_2() -> Result<Vec<Check>> {
    let start = Instant::now();
    let res = maximize_rate(&InteractionSpec::isotropic(System::TwoQutrit, 1.0), &OptimizationConfig::default())?;
    let mut out = vec![within(2, "Gamma_max_qutrit", 3.90495, 0.01, res.gamma_max)];
    let sc = res.schmidt_coefficients.unwrap_or_default();
    for (i, want) in [0.884297, 0.448838, 0.128697].into_iter().enumerate() {
        out.push(within(2, &format!("schmidt_{}", i + 1), want, 0.01, sc.get(i).copied().unwrap_or(f64::NAN)));
    }
    out.push(within(2, "E_qutrit", 0.677882, 0.01, res.entanglement_of_optimum));
    out.push(runtime(2, start, 60.0));
    Ok(out)
}

pub fn criterion_3() -> Result<Vec<Check>> {
    let start = Instant::now();
    let res = maximize_rate(&InteractionSpec::isotropic(System::ThreeQubit, 1.0), &OptimizationConfig::default())?;
    let is_ghz = f64::from(u8::from(res.classification == Some(ThreeQubitClass::GhzClass)));
    Ok(vec![
        within(3, "Gamma_max_3qubit", 5.72523, 0.01, res.gamma_max),
        within(3, "E_3qubit", 0.258918, 0.01, res.entanglement_of_optimum),
        within(3, "class_is_GHZ", 1.0, 0.0, is_ghz),
        Check::new(3, "three_tangle", Target::AtLeast { limit: 1e-3 }, res.three_tangle.unwrap_or(0.0)),
        runtime(3, start, 120.0),
    ])
}

fn sorted_desc<const N: usize>(rng: &mut ChaCha8Rng) -> [f64; N] {
    let mut mu = [0.0f64; N];
    for m in mu.iter_mut() {
        *m = rng.random_range(-1.0..1.0);
    }
    mu.sort_by(|a, b| b.total_cmp(a));
    mu
}

/// Random ordered interaction of the given shape.
pub fn random_spec(system: System, rng: &mut ChaCha8Rng) -> InteractionSpec {
    let couplings = match system {
        System::TwoQubit => Couplings::TwoQubit(sorted_desc(rng)),
        System::TwoQutrit => Couplings::TwoQutrit(sorted_desc(rng)),
        System::ThreeQubit => {
            Couplings::ThreeQubit { ab: sorted_desc(rng), bc: sorted_desc(rng), ac: sorted_desc(rng) }
        }
    };
    InteractionSpec::new(couplings).expect("sorted couplings are ordered")
}

pub const ORACLE_SAMPLES: usize = 1000;

pub fn criterion_4() -> Result<Vec<Check>> {
    let start = Instant::now();
    let mut out = Vec::new();
    for (k, system) in System::ALL.into_iter().enumerate() {
        let mut rng = ChaCha8Rng::seed_from_u64(4000 + k as u64);
        let (mut fd_dev, mut closed_dev) = (0.0f64, 0.0f64);
        for _ in 0..ORACLE_SAMPLES {
            let state = random_state_with(system.dims(), &mut rng);
            let spec = random_spec(system, &mut rng);
            let g = rate_generic(&state, &spec)?.gamma;
            fd_dev = fd_dev.max((rate_finite_difference(&state, &spec, DEFAULT_DT)?.gamma - g).abs());
            closed_dev = closed_dev.max((rate_closed(&state, &spec)?.gamma - g).abs());
        }
        let closed_tol = if system == System::TwoQubit { 1e-10 } else { 1e-8 };
        out.push(at_most(4, &format!("fd_vs_generic_{system}"), 1e-6, fd_dev));
        out.push(at_most(4, &format!("closed_vs_generic_{system}"), closed_tol, closed_dev));
    }
    out.push(runtime(4, start, 30.0));
    Ok(out)
}

/// `p = k/100` for `k = 1..=99`.
pub fn p_grid() -> Vec<f64> {
    (1..100).map(|k| k as f64 / 100.0).collect()
}

pub fn criterion_5() -> Result<Vec<Check>> {
    let zeros = [0.0, 0.5, 1.0].into_iter().map(f_curve).collect::<Result<Vec<_>>>()?;
    let zero_dev = zeros.iter().fold(0.0f64, |m, f| m.max(f.abs()));
    let (mu1, mu2) = (1.0, 0.5);
    let (mut anti, mut locked) = (0.0f64, 0.0f64);
    for p in p_grid() {
        let f = f_curve(p)?;
        anti = anti.max((f + f_curve(1.0 - p)?).abs());
        let d = TwoQubitBloch::from_state(&psi_e(p)?)?;
        locked = locked.max((f * (mu1 + mu2) - rate_locked(&d, mu1, mu2)?).abs());
    }
    Ok(vec![
        at_most(5, "f_zeros", 1e-10, zero_dev),
        at_most(5, "f_antisymmetry", 1e-12, anti),
        at_most(5, "f_vs_rate_locked", 1e-10, locked),
    ])
}

pub fn criterion_6() -> Result<Vec<Check>> {
    let (mut res_r, mut res_tau) = (0.0f64, 0.0f64);
    for p in p_grid() {
        let (r, t) = check_conditions(&TwoQubitBloch::from_state(&psi_e(p)?)?);
        res_r = res_r.max(r);
        res_tau = res_tau.max(t);
    }
    let traj = steer(&InteractionSpec::two_qubit([1.0, 1.0, 0.0])?, 0.01, 1e-4, 2.0)?;
    let steer_res = traj.points.iter().fold(0.0f64, |m, pt| m.max(pt.residual_r).max(pt.residual_tau));
    let drops = traj.points.windows(2).filter(|w| w[1].entanglement < w[0].entanglement).count();
    Ok(vec![
        at_most(6, "grid_residual_r", 1e-12, res_r),
        at_most(6, "grid_residual_tau", 1e-12, res_tau),
        at_most(6, "steered_residual_max", 1e-10, steer_res),
        at_most(6, "steered_E_decreases", 0.0, drops as f64),
        within(6, "steered_final_p", 0.5, 1e-4, traj.last().p),
    ])
}

pub const INVARIANCE_SAMPLES: usize = 500;

fn random_product(dims: &[usize], rng: &mut ChaCha8Rng) -> Result<PureState> {
    let factors: Vec<Vec<_>> =
        dims.iter().map(|&d| random_state_with(&[d], rng).amplitudes().iter().copied().collect()).collect();
    PureState::product(&factors)
}

pub fn criterion_7() -> Result<Vec<Check>> {
    let mut out = Vec::new();
    for (k, system) in System::ALL.into_iter().enumerate() {
        let mut rng = ChaCha8Rng::seed_from_u64(7000 + k as u64);
        let (mut lu_dev, mut product_e) = (0.0f64, 0.0f64);
        for _ in 0..INVARIANCE_SAMPLES {
            let state = random_state_with(system.dims(), &mut rng);
            let u = random_local_unitary(system.dims(), &mut rng);
            lu_dev = lu_dev.max((bloch::entanglement(&state.apply(&u)?)? - bloch::entanglement(&state)?).abs());
            product_e = product_e.max(bloch::entanglement(&random_product(system.dims(), &mut rng)?)?.abs());
        }
        out.push(at_most(7, &format!("lu_invariance_{system}"), 1e-10, lu_dev));
        out.push(at_most(7, &format!("product_E_{system}"), 1e-8, product_e));
    }
    let gm = GeneratorSet::gell_mann();
    let sc = su3_constants();
    out.push(at_most(7, "product_identity", 1e-12, verify_product_identity(&gm, sc)?));
    out.push(at_most(7, "jacobi", 1e-12, jacobi_residual(sc)));
    out.push(at_most(7, "gell_mann_orthonormality", 1e-12, gm.orthonormality_residual()));
    out.push(at_most(7, "pauli_orthonormality", 1e-12, GeneratorSet::pauli().orthonormality_residual()));
    Ok(out)
}

/// All reproduction checks, criteria 1 through 7.
pub fn run_checks() -> Result<Vec<Check>> {
    let mut out = criterion_1();
    out.extend(criterion_2()?);
    out.extend(criterion_3()?);
    out.extend(criterion_4()?);
    out.extend(criterion_5()?);
    out.extend(criterion_6()?);
    out.extend(criterion_7()?);
    Ok(out)
}
