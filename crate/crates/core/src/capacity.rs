//! Single-shot entanglement capacity: `Γᵐᵃˣ = max_ψ dE/dt` over pure states.
//!
//! The search is multi-start projected gradient ascent on the unit sphere.
//! Each restart draws a Haar-random initial state from its own ChaCha stream
//! (`seed_from_u64(master_seed)` followed by `set_stream(index)`), so results
//! do not depend on how rayon schedules the restarts.

use nalgebra::DVector;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::bloch;
use crate::error::{Error, Result};
use crate::hamiltonian::InteractionSpec;
use crate::linalg::{partial_trace, random_state_with, schmidt_decompose, C64};
use crate::rates::{f_curve, f_vn_curve, RateKernel};
use crate::state::PureState;
use crate::system::System;

/// Tangle below which an entangled three-qubit state is called W-class.
pub const W_TANGLE_TOL: f64 = 1e-6;

/// A marginal with `|1 − Tr ρ²|` below this is treated as pure.
pub const PURITY_TOL: f64 = 1e-8;

const ARMIJO: f64 = 1e-4;
const MIN_STEP: f64 = 1e-14;
const MAX_STEP: f64 = 10.0;
const GRADIENT_TOL: f64 = 1e-7;
const FD_STEP: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum GradientMode {
    /// Closed-form gradient of `Γ` from the rate kernel.
    Analytic,
    /// Central differences over the real and imaginary parts of each amplitude.
    CentralDifference,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OptimizationConfig {
    pub restarts: usize,
    pub master_seed: u64,
    pub max_iterations: usize,
    /// Initial step length; adapted by backtracking and growth.
    pub step: f64,
    /// Stop once a step improves `Γ` by less than this (and the projected
    /// gradient is small).
    pub tolerance: f64,
    pub gradient: GradientMode,
}

impl Default for OptimizationConfig {
    fn default() -> Self {
        Self {
            restarts: 64,
            master_seed: 0,
            max_iterations: 5000,
            step: 0.05,
            tolerance: 1e-9,
            gradient: GradientMode::Analytic,
        }
    }
}

impl OptimizationConfig {
    pub fn with_seed(master_seed: u64) -> Self {
        Self { master_seed, ..Self::default() }
    }

    pub fn validate(&self) -> Result<()> {
        if self.restarts == 0 {
            return Err(Error::OutOfRange("restarts must be at least 1".into()));
        }
        if !(self.tolerance > 0.0) {
            return Err(Error::OutOfRange(format!("tolerance {} must be positive", self.tolerance)));
        }
        if !(self.step > 0.0) || !self.step.is_finite() {
            return Err(Error::OutOfRange(format!("step {} must be positive", self.step)));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RestartSummary {
    pub index: usize,
    pub gamma: f64,
    pub iterations: usize,
    pub converged: bool,
    pub gradient_norm: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ThreeQubitClass {
    #[serde(rename = "product")]
    Product,
    #[serde(rename = "biseparable")]
    Biseparable,
    #[serde(rename = "W")]
    WClass,
    #[serde(rename = "GHZ")]
    GhzClass,
}

impl ThreeQubitClass {
    pub fn label(self) -> &'static str {
        match self {
            ThreeQubitClass::Product => "product",
            ThreeQubitClass::Biseparable => "biseparable",
            ThreeQubitClass::WClass => "W",
            ThreeQubitClass::GhzClass => "GHZ",
        }
    }
}

#[derive(Debug, Clone)]
pub struct OptimizationResult {
    pub system: System,
    /// Phase-canonical maximizer.
    pub best_state: PureState,
    pub best_restart: usize,
    pub gamma_max: f64,
    pub entanglement_of_optimum: f64,
    pub restarts: Vec<RestartSummary>,
    /// Descending Schmidt coefficients (bipartite shapes).
    pub schmidt_coefficients: Option<Vec<f64>>,
    pub classification: Option<ThreeQubitClass>,
    pub three_tangle: Option<f64>,
}

impl OptimizationResult {
    pub fn converged_restarts(&self) -> usize {
        self.restarts.iter().filter(|r| r.converged).count()
    }
}

struct Ascent {
    psi: DVector<C64>,
    summary: RestartSummary,
}

fn normalize(v: DVector<C64>) -> DVector<C64> {
    let n = v.norm();
    v.unscale(n)
}

fn project(psi: &DVector<C64>, g: DVector<C64>) -> DVector<C64> {
    let along = psi.dotc(&g).re;
    g - psi.scale(along)
}

fn numerical_gradient(kernel: &RateKernel, psi: &DVector<C64>) -> DVector<C64> {
    let n = psi.len();
    let mut g = DVector::<C64>::zeros(n);
    for i in 0..n {
        for (unit, part) in [(C64::new(1.0, 0.0), 0), (C64::new(0.0, 1.0), 1)] {
            let mut plus = psi.clone();
            let mut minus = psi.clone();
            plus[i] += unit * FD_STEP;
            minus[i] -= unit * FD_STEP;
            let d = (kernel.gamma(&normalize(plus)) - kernel.gamma(&normalize(minus))) / (2.0 * FD_STEP);
            if part == 0 {
                g[i].re = d;
            } else {
                g[i].im = d;
            }
        }
    }
    g
}

fn gamma_and_tangent(kernel: &RateKernel, psi: &DVector<C64>, mode: GradientMode) -> (f64, DVector<C64>) {
    match mode {
        GradientMode::Analytic => {
            let (gamma, g) = kernel.gamma_and_gradient(psi);
            (gamma, project(psi, g))
        }
        GradientMode::CentralDifference => (kernel.gamma(psi), project(psi, numerical_gradient(kernel, psi))),
    }
}

fn ascend(kernel: &RateKernel, start: &DVector<C64>, index: usize, config: &OptimizationConfig) -> Ascent {
    let mut psi = normalize(start.clone());
    let (mut gamma, mut grad) = gamma_and_tangent(kernel, &psi, config.gradient);
    let mut step = config.step;
    let mut iterations = 0;
    let mut converged = false;
    while iterations < config.max_iterations {
        iterations += 1;
        let gnorm_sq = grad.norm_squared();
        if gnorm_sq.sqrt() < GRADIENT_TOL {
            converged = true;
            break;
        }
        let mut accepted = None;
        while step > MIN_STEP {
            let trial = normalize(&psi + grad.scale(step));
            let value = kernel.gamma(&trial);
            // Near the optimum the Armijo margin drops below rounding; any
            // non-decreasing step is then accepted.
            let margin = (ARMIJO * step * gnorm_sq).max(0.0);
            if value >= gamma + margin || (margin < 1e-14 && value >= gamma) {
                accepted = Some((trial, value));
                break;
            }
            step *= 0.5;
        }
        let Some((next, value)) = accepted else {
            // No ascent step left at machine resolution.
            converged = true;
            break;
        };
        let gain = value - gamma;
        psi = next;
        let (g, t) = gamma_and_tangent(kernel, &psi, config.gradient);
        gamma = g;
        grad = t;
        step = (step * 1.5).min(MAX_STEP);
        if gain < config.tolerance && grad.norm() < 10.0 * GRADIENT_TOL {
            converged = true;
            break;
        }
    }
    let gradient_norm = grad.norm();
    Ascent { psi, summary: RestartSummary { index, gamma, iterations, converged, gradient_norm } }
}

/// Seeded initial guess `index` for a `master_seed`.
pub fn restart_start(system: System, master_seed: u64, index: usize) -> PureState {
    let mut rng = ChaCha8Rng::seed_from_u64(master_seed);
    rng.set_stream(index as u64);
    random_state_with(system.dims(), &mut rng)
}

/// Maximizes `Γ` from `config.restarts` Haar-random starting points.
pub fn maximize_rate(spec: &InteractionSpec, config: &OptimizationConfig) -> Result<OptimizationResult> {
    config.validate()?;
    let system = spec.system();
    let starts: Vec<PureState> =
        (0..config.restarts).map(|i| restart_start(system, config.master_seed, i)).collect();
    run(spec, &starts, config)
}

/// Maximizes `Γ` from caller-supplied starting states (`config.restarts` and
/// `config.master_seed` are ignored).
pub fn maximize_rate_from(
    spec: &InteractionSpec,
    starts: &[PureState],
    config: &OptimizationConfig,
) -> Result<OptimizationResult> {
    OptimizationConfig { restarts: 1, ..config.clone() }.validate()?;
    if starts.is_empty() {
        return Err(Error::OutOfRange("at least one starting state is required".into()));
    }
    let system = spec.system();
    for s in starts {
        if s.dims() != system.dims() {
            return Err(Error::DimensionMismatch(format!(
                "start has dims {:?}, interaction acts on {}",
                s.dims(),
                system
            )));
        }
    }
    run(spec, starts, config)
}

fn run(spec: &InteractionSpec, starts: &[PureState], config: &OptimizationConfig) -> Result<OptimizationResult> {
    let system = spec.system();
    let kernel = RateKernel::new(spec);
    let ascents: Vec<Ascent> = starts
        .par_iter()
        .enumerate()
        .map(|(i, s)| ascend(&kernel, s.amplitudes(), i, config))
        .collect();

    let mut best = 0;
    for (i, a) in ascents.iter().enumerate() {
        if a.summary.gamma > ascents[best].summary.gamma {
            best = i;
        }
    }
    let best_state =
        PureState::from_vector_unchecked(system.dims().to_vec(), ascents[best].psi.clone()).canonical();
    let gamma_max = kernel.gamma(best_state.amplitudes());
    let entanglement_of_optimum = bloch::entanglement(&best_state)?;
    let (schmidt_coefficients, classification, three_tangle) = match system {
        System::ThreeQubit => {
            (None, Some(classify_three_qubit(&best_state)?), Some(three_tangle(&best_state)?))
        }
        _ => (Some(schmidt_decompose(&best_state)?.coefficients), None, None),
    };
    Ok(OptimizationResult {
        system,
        best_state,
        best_restart: best,
        gamma_max,
        entanglement_of_optimum,
        restarts: ascents.into_iter().map(|a| a.summary).collect(),
        schmidt_coefficients,
        classification,
        three_tangle,
    })
}

/// Maximizes a unimodal `f` on `[a, b]`; returns `(argmax, max)`.
pub fn golden_section(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64, tol: f64) -> (f64, f64) {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    while (b - a).abs() > tol {
        if fc > fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    let x = 0.5 * (a + b);
    (x, f(x))
}

const CURVE_EDGE: f64 = 1e-12;

/// Argmax and maximum of the von Neumann rate profile on `(0, 1/2)`.
pub fn capacity_two_qubit_vn() -> (f64, f64) {
    golden_section(|p| f_vn_curve(p).unwrap_or(f64::NEG_INFINITY), CURVE_EDGE, 0.5 - CURVE_EDGE, 1e-12)
}

/// Argmax and maximum of the tensor-measure rate profile `f(p)` on `(0, 1/2)`.
/// The two-qubit capacity is this maximum times `μ₁ + μ₂`.
pub fn capacity_two_qubit_tensor() -> (f64, f64) {
    golden_section(|p| f_curve(p).unwrap_or(f64::NEG_INFINITY), CURVE_EDGE, 0.5 - CURVE_EDGE, 1e-12)
}

fn require_three_qubits(state: &PureState) -> Result<()> {
    if state.dims() != [2, 2, 2] {
        return Err(Error::UnsupportedShape(state.dims().to_vec()));
    }
    Ok(())
}

/// `4·|Det|` with `Det` the Cayley hyperdeterminant of the amplitude table.
pub fn three_tangle(state: &PureState) -> Result<f64> {
    require_three_qubits(state)?;
    let a = |i: usize| state.amp(i);
    let (a000, a001, a010, a011) = (a(0), a(1), a(2), a(3));
    let (a100, a101, a110, a111) = (a(4), a(5), a(6), a(7));
    let sq = |x: C64| x * x;
    let d1 = sq(a000) * sq(a111) + sq(a001) * sq(a110) + sq(a010) * sq(a101) + sq(a100) * sq(a011);
    let d2 = a000 * a111 * a011 * a100
        + a000 * a111 * a101 * a010
        + a000 * a111 * a110 * a001
        + a011 * a100 * a101 * a010
        + a011 * a100 * a110 * a001
        + a101 * a010 * a110 * a001;
    let d3 = a000 * a110 * a101 * a011 + a111 * a001 * a010 * a100;
    Ok(4.0 * (d1 - d2 * 2.0 + d3 * 4.0).norm())
}

/// Purities `Tr ρ_k²` of the three single-qubit marginals.
pub fn marginal_purities(state: &PureState) -> Result<[f64; 3]> {
    require_three_qubits(state)?;
    let rho = state.density();
    let mut out = [0.0; 3];
    for (k, slot) in out.iter_mut().enumerate() {
        let m = partial_trace(&rho, &[2, 2, 2], &[k])?;
        *slot = (&m * &m).trace().re;
    }
    Ok(out)
}

pub fn classify_three_qubit(state: &PureState) -> Result<ThreeQubitClass> {
    let pure = marginal_purities(state)?.iter().filter(|p| (1.0 - **p).abs() < PURITY_TOL).count();
    Ok(match pure {
        // A pure state with two pure marginals has a pure third one.
        2 | 3 => ThreeQubitClass::Product,
        1 => ThreeQubitClass::Biseparable,
        _ if three_tangle(state)? < W_TANGLE_TOL => ThreeQubitClass::WClass,
        _ => ThreeQubitClass::GhzClass,
    })
}
