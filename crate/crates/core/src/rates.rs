//! Entanglement generation rate `Γ = dE/dt` under an interaction Hamiltonian.
//!
//! Three independent routes are provided:
//!
//! * [`rate_generic`]: `Γ = (1/‖T‖) Σ τ·τ̇` with `τ̇ = i Tr(H [O, ρ])`
//!   evaluated by dense matrix algebra for every top-order correlator `O`;
//! * the closed forms [`rate_two_qubit_closed`], [`rate_two_qutrit_closed`]
//!   and [`rate_three_qubit_closed`], written in terms of Bloch data only;
//! * [`rate_finite_difference`], a central difference of `E` along the
//!   exact evolution `e^{−iHt}|ψ⟩`.
//!
//! Forward evolution is `e^{−iHt}` with ħ = 1; the finite-difference route
//! fixes every sign.
//!
//! The two-qubit optimal family `ψ_E(p) = √p|01⟩ + i√(1−p)|10⟩` and its
//! rate profile `f(p)` live here as well.

use std::collections::BTreeMap;

use nalgebra::DVector;
use serde::Serialize;

use crate::bloch::{self, ThreeQubitBloch, TwoQubitBloch, TwoQutritBloch};
use crate::error::{Error, Result};
use crate::generators::{gell_mann, pauli, StructureConstants};
use crate::hamiltonian::{Couplings, InteractionSpec};
use crate::linalg::{identity, kron_all, ComplexMatrix, HermitianEigen, C64};
use crate::state::PureState;
use crate::system::System;

/// Default central-difference step.
pub const DEFAULT_DT: f64 = 1e-5;

/// Tolerance on the optimality conditions accepted by [`rate_locked`].
pub const LOCK_TOL: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Generic,
    ClosedForm,
    FiniteDifference,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RateReport {
    pub gamma: f64,
    pub method: Method,
    /// Contribution of each coupling term, keyed by its label (`mu_1`, `mu_ab_2`, ...).
    #[serde(skip_serializing_if = "BTreeMap::is_empty")]
    pub breakdown: BTreeMap<String, f64>,
}

/// One `μ · (unit operator)` term of `H_I`.
#[derive(Debug, Clone)]
pub struct CouplingTerm {
    pub label: String,
    pub mu: f64,
    pub operator: ComplexMatrix,
}

/// The individual terms of the interaction Hamiltonian.
pub fn coupling_terms(spec: &InteractionSpec) -> Vec<CouplingTerm> {
    let term = |label: String, mu: f64, operator| CouplingTerm { label, mu, operator };
    match spec.couplings() {
        Couplings::TwoQubit(mu) => pauli()
            .iter()
            .zip(mu)
            .enumerate()
            .map(|(n, (s, &m))| term(format!("mu_{}", n + 1), m, kron_all(&[s, s])))
            .collect(),
        Couplings::TwoQutrit(mu) => gell_mann()
            .iter()
            .zip(mu)
            .enumerate()
            .map(|(n, (l, &m))| term(format!("mu_{}", n + 1), m, kron_all(&[l, l])))
            .collect(),
        Couplings::ThreeQubit { ab, bc, ac } => {
            let id = identity(2);
            let mut out = Vec::with_capacity(9);
            for (n, s) in pauli().iter().enumerate() {
                out.push(term(format!("mu_ab_{}", n + 1), ab[n], kron_all(&[s, s, &id])));
                out.push(term(format!("mu_bc_{}", n + 1), bc[n], kron_all(&[&id, s, s])));
                out.push(term(format!("mu_ac_{}", n + 1), ac[n], kron_all(&[s, &id, s])));
            }
            out
        }
    }
}

fn check_match(state: &PureState, spec: &InteractionSpec) -> Result<System> {
    let system = System::from_dims(state.dims())?;
    if system != spec.system() {
        return Err(Error::DimensionMismatch(format!(
            "state of shape {system} with a {} Hamiltonian",
            spec.system()
        )));
    }
    Ok(system)
}

/// `Tr(A B)` without forming the product.
fn trace_product(a: &ComplexMatrix, b: &ComplexMatrix) -> C64 {
    let n = a.nrows();
    let mut acc = C64::new(0.0, 0.0);
    for i in 0..n {
        for j in 0..n {
            acc += a[(i, j)] * b[(j, i)];
        }
    }
    acc
}

/// Generic route: commutator, then trace against each coupling term.
pub fn rate_generic(state: &PureState, spec: &InteractionSpec) -> Result<RateReport> {
    let system = check_match(state, spec)?;
    let rho = state.density();
    let terms = coupling_terms(spec);
    let ops = &bloch::operators(system).top;
    let mut norm_sq = 0.0;
    let mut per_term = vec![0.0; terms.len()];
    for op in ops {
        let tau = trace_product(op, &rho).re;
        norm_sq += tau * tau;
        let comm = op * &rho - &rho * op;
        for (acc, t) in per_term.iter_mut().zip(&terms) {
            // τ̇ = i Tr(H [O, ρ])
            let tau_dot = (C64::new(0.0, 1.0) * trace_product(&t.operator, &comm)).re * t.mu;
            *acc += tau * tau_dot;
        }
    }
    let norm = norm_sq.sqrt();
    if norm == 0.0 {
        return Err(Error::DegenerateTensor);
    }
    let breakdown: BTreeMap<String, f64> =
        terms.iter().zip(&per_term).map(|(t, v)| (t.label.clone(), v / norm)).collect();
    Ok(RateReport { gamma: per_term.iter().sum::<f64>() / norm, method: Method::Generic, breakdown })
}

/// `[‖T‖(e^{−iH·dt}ψ) − ‖T‖(e^{+iH·dt}ψ)] / (2 dt)`
pub fn rate_finite_difference(state: &PureState, spec: &InteractionSpec, dt: f64) -> Result<RateReport> {
    check_match(state, spec)?;
    if !(dt > 0.0) {
        return Err(Error::OutOfRange(format!("finite-difference step must be positive, got {dt}")));
    }
    let eig = HermitianEigen::new(&spec.build_matrix())?;
    let forward = state.apply(&eig.propagator(dt))?;
    let backward = state.apply(&eig.propagator(-dt))?;
    let gamma = (bloch::tensor_norm(&forward)? - bloch::tensor_norm(&backward)?) / (2.0 * dt);
    Ok(RateReport { gamma, method: Method::FiniteDifference, breakdown: BTreeMap::new() })
}

fn cross(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]]
}

fn unsupported(spec: &InteractionSpec) -> Error {
    Error::UnsupportedShape(spec.system().dims().to_vec())
}

/// `Γ = (2/‖T‖) Σ_n [(r × τ_:n)_n + (s × τ_n:)_n] μ_n`
pub fn rate_two_qubit_closed(decomp: &TwoQubitBloch, spec: &InteractionSpec) -> Result<RateReport> {
    let Couplings::TwoQubit(mu) = spec.couplings() else {
        return Err(unsupported(spec));
    };
    let norm = decomp.tensor_norm();
    if norm == 0.0 {
        return Err(Error::DegenerateTensor);
    }
    let mut breakdown = BTreeMap::new();
    let mut gamma = 0.0;
    for n in 0..3 {
        let term = 2.0 / norm * (cross(decomp.r, decomp.col(n))[n] + cross(decomp.s, decomp.row(n))[n]) * mu[n];
        breakdown.insert(format!("mu_{}", n + 1), term);
        gamma += term;
    }
    Ok(RateReport { gamma, method: Method::ClosedForm, breakdown })
}

/// `(|r₃ + s₃|, |τ₁₂ + τ₂₁|)`: both vanish on the optimal family.
pub fn check_conditions(decomp: &TwoQubitBloch) -> (f64, f64) {
    ((decomp.r[2] + decomp.s[2]).abs(), (decomp.t[0][1] + decomp.t[1][0]).abs())
}

/// Maximal rate at fixed entanglement, `Γ_E = (4/‖T‖) r₃ τ₁₂ (μ₁ + μ₂)`.
///
/// Only meaningful on states meeting both optimality conditions.
pub fn rate_locked(decomp: &TwoQubitBloch, mu1: f64, mu2: f64) -> Result<f64> {
    let (residual_r, residual_tau) = check_conditions(decomp);
    if residual_r > LOCK_TOL || residual_tau > LOCK_TOL {
        return Err(Error::ConditionsViolated { residual_r, residual_tau });
    }
    let norm = decomp.tensor_norm();
    Ok(4.0 / norm * decomp.r[2] * decomp.t[0][1] * (mu1 + mu2))
}

/// `√p|01⟩ + i√(1−p)|10⟩`
pub fn psi_e(p: f64) -> Result<PureState> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::OutOfRange(format!("p = {p} outside [0, 1]")));
    }
    let z = C64::new(0.0, 0.0);
    PureState::normalized(vec![2, 2], vec![z, C64::new(p.sqrt(), 0.0), C64::new(0.0, (1.0 - p).sqrt()), z])
}

/// Tensor-measure entanglement of `ψ_E(p)`: `√(1 + 8p(1−p)) − 1`.
pub fn family_entanglement(p: f64) -> f64 {
    (1.0 + 8.0 * p * (1.0 - p)).sqrt() - 1.0
}

/// `f(p) = 8(1−2p)√(p(1−p)) / √(1 + 8p(1−p))`
pub fn f_curve(p: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::OutOfRange(format!("p = {p} outside [0, 1]")));
    }
    let q = p * (1.0 - p);
    Ok(8.0 * (1.0 - 2.0 * p) * q.sqrt() / (1.0 + 8.0 * q).sqrt())
}

/// `dE/dp = 4(1−2p)/√(1 + 8p(1−p))` on the optimal family.
pub fn d_entanglement_dp(p: f64) -> f64 {
    4.0 * (1.0 - 2.0 * p) / (1.0 + 8.0 * p * (1.0 - p)).sqrt()
}

/// Derivative of the binary entropy of `{p, 1−p}` in bits: `log₂((1−p)/p)`.
pub fn d_von_neumann_dp(p: f64) -> f64 {
    ((1.0 - p) / p).log2()
}

/// Binary entropy of `{p, 1−p}` in bits.
pub fn von_neumann_entropy(p: f64) -> f64 {
    let h = |x: f64| if x <= 0.0 { 0.0 } else { -x * x.log2() };
    h(p) + h(1.0 - p)
}

/// `f_VN(p) = f(p) · (dE_VN/dp) / (dE/dp)` for `p ∈ (0, 1)`.
///
/// `f / (dE/dp)` is taken in the cancelled form `2√(p(1−p))`, which stays
/// finite at `p = 1/2`.
pub fn f_vn_curve(p: f64) -> Result<f64> {
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::OutOfRange(format!("f_VN is singular at p = {p}; need 0 < p < 1")));
    }
    let f_over_slope = 2.0 * (p * (1.0 - p)).sqrt();
    Ok(f_over_slope * d_von_neumann_dp(p))
}

/// `Γ = −(3/‖T‖) Σ_{k,p,l} μ_p f_klp (τ_kp Λ^A_l + τ_pk Λ^B_l)` with `τ` the 9/4-scaled tensor.
pub fn rate_two_qutrit_closed(
    decomp: &TwoQutritBloch,
    spec: &InteractionSpec,
    sc: &StructureConstants,
) -> Result<RateReport> {
    let Couplings::TwoQutrit(mu) = spec.couplings() else {
        return Err(unsupported(spec));
    };
    if sc.dim != 3 {
        return Err(Error::UnsupportedShape(vec![sc.dim]));
    }
    let norm = decomp.tensor_norm();
    if norm == 0.0 {
        return Err(Error::DegenerateTensor);
    }
    let t = &decomp.t;
    let (la, lb) = (&decomp.lambda_a, &decomp.lambda_b);
    let mut breakdown = BTreeMap::new();
    let mut gamma = 0.0;
    for p in 0..8 {
        let mut s = 0.0;
        for k in 0..8 {
            for l in 0..8 {
                let f = sc.f.get(k, l, p);
                if f != 0.0 {
                    s += f * (t[k][p] * la[l] + t[p][k] * lb[l]);
                }
            }
        }
        let term = -3.0 / norm * mu[p] * s;
        breakdown.insert(format!("mu_{}", p + 1), term);
        gamma += term;
    }
    Ok(RateReport { gamma, method: Method::ClosedForm, breakdown })
}

/// Three-qubit closed form: `Γ = (−2/‖τ‖)` times the pair-indexed sums of
/// cross-product components of `τ` slices against the pair correlation
/// matrices, one group per coupling `μ^{AB}_s, μ^{BC}_s, μ^{AC}_s`.
pub fn rate_three_qubit_closed(decomp: &ThreeQubitBloch, spec: &InteractionSpec) -> Result<RateReport> {
    let Couplings::ThreeQubit { ab, bc, ac } = spec.couplings() else {
        return Err(unsupported(spec));
    };
    let norm = decomp.tensor_norm();
    if norm == 0.0 {
        return Err(Error::DegenerateTensor);
    }
    let tau = &decomp.tau;
    let col = |m: &[[f64; 3]; 3], k: usize| [m[0][k], m[1][k], m[2][k]];
    let row = |m: &[[f64; 3]; 3], k: usize| m[k];
    // τ slices: first, second or third index free
    let free0 = |b: usize, c: usize| [tau[0][b][c], tau[1][b][c], tau[2][b][c]];
    let free1 = |a: usize, c: usize| [tau[a][0][c], tau[a][1][c], tau[a][2][c]];
    let free2 = |a: usize, b: usize| tau[a][b];

    let mut s_ab = [0.0; 3];
    let mut s_bc = [0.0; 3];
    let mut s_ac = [0.0; 3];
    for s in 0..3 {
        for k in 0..3 {
            s_ab[s] += cross(free0(s, k), col(&decomp.t_ac, k))[s] + cross(free1(s, k), col(&decomp.t_bc, k))[s];
            s_bc[s] += cross(free1(k, s), row(&decomp.t_ab, k))[s] + cross(free2(k, s), row(&decomp.t_ac, k))[s];
            s_ac[s] += cross(free0(k, s), col(&decomp.t_ab, k))[s] + cross(free2(s, k), row(&decomp.t_bc, k))[s];
        }
    }
    let mut breakdown = BTreeMap::new();
    let mut gamma = 0.0;
    for s in 0..3 {
        for (label, sums, mu) in [("ab", &s_ab, ab), ("bc", &s_bc, bc), ("ac", &s_ac, ac)] {
            let term = -2.0 / norm * sums[s] * mu[s];
            breakdown.insert(format!("mu_{label}_{}", s + 1), term);
            gamma += term;
        }
    }
    Ok(RateReport { gamma, method: Method::ClosedForm, breakdown })
}

/// Closed form for whichever shape `state` has.
pub fn rate_closed(state: &PureState, spec: &InteractionSpec) -> Result<RateReport> {
    check_match(state, spec)?;
    match spec.system() {
        System::TwoQubit => rate_two_qubit_closed(&TwoQubitBloch::from_state(state)?, spec),
        System::TwoQutrit => rate_two_qutrit_closed(
            &TwoQutritBloch::from_state(state)?,
            spec,
            crate::generators::su3_constants(),
        ),
        System::ThreeQubit => rate_three_qubit_closed(&ThreeQubitBloch::from_state(state)?, spec),
    }
}

/// Precomputed rate objective for repeated evaluation on one Hamiltonian.
///
/// Stores the top-order correlators `O_k` and their Heisenberg derivatives
/// `C_k = i[H, O_k]`, so `Γ(ψ) = Σ_k ⟨O_k⟩⟨C_k⟩ / ‖⟨O⟩‖`.
#[derive(Debug, Clone)]
pub struct RateKernel {
    system: System,
    ops: Vec<ComplexMatrix>,
    derivs: Vec<ComplexMatrix>,
}

impl RateKernel {
    pub fn new(spec: &InteractionSpec) -> Self {
        let system = spec.system();
        let h = spec.build_matrix();
        let ops = bloch::operators(system).top.clone();
        let derivs = ops.iter().map(|o| (&h * o - o * &h) * C64::new(0.0, 1.0)).collect();
        Self { system, ops, derivs }
    }

    pub fn system(&self) -> System {
        self.system
    }

    fn moments(&self, psi: &DVector<C64>) -> (Vec<f64>, Vec<f64>) {
        let tau = self.ops.iter().map(|o| psi.dotc(&(o * psi)).re).collect();
        let dot = self.derivs.iter().map(|c| psi.dotc(&(c * psi)).re).collect();
        (tau, dot)
    }

    /// `Γ` at a unit vector `psi`.
    pub fn gamma(&self, psi: &DVector<C64>) -> f64 {
        let (tau, dot) = self.moments(psi);
        let norm = tau.iter().map(|t| t * t).sum::<f64>().sqrt();
        tau.iter().zip(&dot).map(|(a, b)| a * b).sum::<f64>() / norm
    }

    /// `Γ` and its gradient with respect to `(Re ψ, Im ψ)`, packed as a
    /// complex vector (`∂/∂Re + i ∂/∂Im`). Valid at unit vectors.
    pub fn gamma_and_gradient(&self, psi: &DVector<C64>) -> (f64, DVector<C64>) {
        let (tau, dot) = self.moments(psi);
        let norm_sq: f64 = tau.iter().map(|t| t * t).sum();
        let norm = norm_sq.sqrt();
        let gamma = tau.iter().zip(&dot).map(|(a, b)| a * b).sum::<f64>() / norm;
        let n = psi.len();
        let mut m = ComplexMatrix::zeros(n, n);
        for k in 0..self.ops.len() {
            let wa = dot[k] / norm - gamma * tau[k] / norm_sq;
            let wb = tau[k] / norm;
            m += self.ops[k].scale(wa) + self.derivs[k].scale(wb);
        }
        (gamma, (m * psi).scale(2.0))
    }
}
