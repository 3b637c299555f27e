//! Steered two-qubit evolution.
//!
//! The state is evolved for a short step `dt` under the interaction, then
//! reset by (idealized, instantaneous) local unitaries onto the optimal
//! family `ψ_E(p′)` with the same Schmidt weight `p′`. Because the reset only
//! changes the local frame, entanglement is untouched, while the rate stays at
//! its maximum among states of equal entanglement.

use serde::Serialize;

use crate::bloch::{self, TwoQubitBloch};
use crate::error::{Error, Result};
use crate::hamiltonian::InteractionSpec;
use crate::linalg::{schmidt_decompose, HermitianEigen};
use crate::rates::{check_conditions, family_entanglement, psi_e, RateKernel};
use crate::state::PureState;
use crate::system::System;

/// Steering stops once `p` is this close to 1/2.
pub const P_MAX_TOL: f64 = 1e-9;

/// Largest allowed `dt` as a fraction of the interaction timescale.
pub const MAX_STEP_FRACTION: f64 = 0.01;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SteeringPoint {
    pub t: f64,
    pub p: f64,
    #[serde(rename = "E")]
    pub entanglement: f64,
    pub gamma: f64,
    pub residual_r: f64,
    pub residual_tau: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum StopReason {
    TimeLimit,
    /// `p` reached 1/2, where the rate vanishes.
    MaximallyEntangled,
    /// A step failed to increase `p` (non-positive rate).
    Stalled,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SteeringTrajectory {
    pub dt: f64,
    pub points: Vec<SteeringPoint>,
    pub stop: StopReason,
}

impl SteeringTrajectory {
    pub fn last(&self) -> &SteeringPoint {
        self.points.last().expect("trajectory has an initial point")
    }

    /// First recorded time at which `E ≥ level`.
    pub fn first_passage(&self, level: f64) -> Option<f64> {
        self.points.iter().find(|pt| pt.entanglement >= level).map(|pt| pt.t)
    }
}

fn step_count(dt: f64, t_end: f64) -> usize {
    (t_end / dt - 1e-9).ceil().max(0.0) as usize
}

fn check_step(spec: &InteractionSpec, dt: f64, t_end: f64) -> Result<()> {
    if !(dt > 0.0) || !dt.is_finite() {
        return Err(Error::OutOfRange(format!("dt = {dt} must be positive")));
    }
    if !(t_end > 0.0) || !t_end.is_finite() {
        return Err(Error::OutOfRange(format!("t_end = {t_end} must be positive")));
    }
    let limit = MAX_STEP_FRACTION * spec.timescale()?;
    if dt > limit {
        return Err(Error::StepTooLarge { dt, limit });
    }
    Ok(())
}

fn point(kernel: &RateKernel, t: f64, p: f64) -> Result<SteeringPoint> {
    let state = psi_e(p)?;
    let (residual_r, residual_tau) = check_conditions(&TwoQubitBloch::from_state(&state)?);
    Ok(SteeringPoint {
        t,
        p,
        entanglement: family_entanglement(p),
        gamma: kernel.gamma(state.amplitudes()),
        residual_r,
        residual_tau,
    })
}

/// Runs the steering protocol from `ψ_E(p_start)`.
pub fn steer(spec: &InteractionSpec, p_start: f64, dt: f64, t_end: f64) -> Result<SteeringTrajectory> {
    if spec.system() != System::TwoQubit {
        return Err(Error::UnsupportedShape(spec.system().dims().to_vec()));
    }
    if !(p_start > 0.0 && p_start < 0.5) {
        return Err(Error::OutOfRange(format!("p_start = {p_start} outside (0, 1/2)")));
    }
    check_step(spec, dt, t_end)?;

    let kernel = RateKernel::new(spec);
    let u = HermitianEigen::new(&spec.build_matrix())?.propagator(dt);
    let mut p = p_start;
    let mut points = vec![point(&kernel, 0.0, p)?];
    let mut stop = StopReason::TimeLimit;
    for k in 1..=step_count(dt, t_end) {
        if p >= 0.5 - P_MAX_TOL {
            stop = StopReason::MaximallyEntangled;
            break;
        }
        let evolved = psi_e(p)?.apply(&u)?;
        let next = schmidt_decompose(&evolved)?.minor_weight();
        if next <= p {
            stop = if 0.5 - p < 1e-3 { StopReason::MaximallyEntangled } else { StopReason::Stalled };
            break;
        }
        p = next;
        points.push(point(&kernel, k as f64 * dt, p)?);
    }
    if stop == StopReason::TimeLimit && p >= 0.5 - P_MAX_TOL {
        stop = StopReason::MaximallyEntangled;
    }
    Ok(SteeringTrajectory { dt, points, stop })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TracePoint {
    pub t: f64,
    #[serde(rename = "E")]
    pub entanglement: f64,
}

/// `E(t)` under plain evolution `e^{−iHt}|ψ⟩`, sampled every `dt` including `t = 0`.
pub fn free_evolution_trace(
    state: &PureState,
    spec: &InteractionSpec,
    dt: f64,
    t_end: f64,
) -> Result<Vec<TracePoint>> {
    if state.dims() != spec.system().dims() {
        return Err(Error::DimensionMismatch(format!(
            "state dims {:?} vs interaction on {}",
            state.dims(),
            spec.system()
        )));
    }
    if !(dt > 0.0) || !(t_end > 0.0) {
        return Err(Error::OutOfRange(format!("dt = {dt} and t_end = {t_end} must be positive")));
    }
    let u = HermitianEigen::new(&spec.build_matrix())?.propagator(dt);
    let mut current = state.clone();
    let mut out = vec![TracePoint { t: 0.0, entanglement: bloch::entanglement(&current)? }];
    for k in 1..=step_count(dt, t_end) {
        current = current.apply(&u)?;
        out.push(TracePoint { t: k as f64 * dt, entanglement: bloch::entanglement(&current)? });
    }
    Ok(out)
}
