//! Bloch decompositions of pure states and the tensor-norm entanglement measure.
//!
//! For two qubits `ρ = ¼(I⊗I + Σ r_k σ_k⊗I + Σ s_l I⊗σ_l + Σ τ_kl σ_k⊗σ_l)`,
//! for three qubits the analogous expansion with prefactor ⅛ and pair and
//! triple correlations. For two qutrits the correlation tensor carries a
//! 9/4 scale, `τ_kl = (9/4)⟨λ_k⊗λ_l⟩`, so that product states have
//! `‖T‖ = 3`; the local vectors are plain expectations `Λ_k = ⟨λ_k⊗I⟩`.
//! With this convention
//! `ρ = I/9 + (1/6)(Σ Λ^A_k λ_k⊗I + Σ Λ^B_l I⊗λ_l) + (1/9)Σ τ_kl λ_k⊗λ_l`.

use std::sync::OnceLock;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::generators::{gell_mann, pauli};
use crate::linalg::{identity, kron_all, ComplexMatrix};
use crate::state::PureState;
use crate::system::System;

/// Scale on the two-qutrit correlation tensor.
pub const QUTRIT_TENSOR_SCALE: f64 = 9.0 / 4.0;

/// Round-off allowance below zero for the entanglement measure.
pub const NEGATIVE_E_TOL: f64 = 1e-8;

/// Operator tables for one system shape.
#[derive(Debug)]
pub struct CorrelationOperators {
    /// One list per subsystem: the local generators embedded in the full space.
    pub local: Vec<Vec<ComplexMatrix>>,
    /// Two-body correlators for three qubits in the order AB, AC, BC
    /// (row index on the first party). Empty for bipartite shapes.
    pub pairs: Vec<Vec<ComplexMatrix>>,
    /// Top-order correlators in row-major index order, already scaled, so
    /// `T` entries are plain expectations.
    pub top: Vec<ComplexMatrix>,
}

fn triples(n: usize) -> impl Iterator<Item = (usize, usize, usize)> {
    (0..n * n * n).map(move |k| (k / (n * n), (k / n) % n, k % n))
}

fn build_operators(system: System) -> CorrelationOperators {
    match system {
        System::TwoQubit => {
            let s = pauli();
            let id = identity(2);
            CorrelationOperators {
                local: vec![
                    s.iter().map(|a| kron_all(&[a, &id])).collect(),
                    s.iter().map(|a| kron_all(&[&id, a])).collect(),
                ],
                pairs: Vec::new(),
                top: s.iter().flat_map(|a| s.iter().map(move |b| kron_all(&[a, b]))).collect(),
            }
        }
        System::TwoQutrit => {
            let l = gell_mann();
            let id = identity(3);
            CorrelationOperators {
                local: vec![
                    l.iter().map(|a| kron_all(&[a, &id])).collect(),
                    l.iter().map(|a| kron_all(&[&id, a])).collect(),
                ],
                pairs: Vec::new(),
                top: l
                    .iter()
                    .flat_map(|a| l.iter().map(move |b| kron_all(&[a, b]).scale(QUTRIT_TENSOR_SCALE)))
                    .collect(),
            }
        }
        System::ThreeQubit => {
            let s = pauli();
            let id = identity(2);
            let pair = |f: &dyn Fn(&ComplexMatrix, &ComplexMatrix) -> ComplexMatrix| -> Vec<ComplexMatrix> {
                s.iter().flat_map(|a| s.iter().map(move |b| f(a, b))).collect()
            };
            CorrelationOperators {
                local: vec![
                    s.iter().map(|a| kron_all(&[a, &id, &id])).collect(),
                    s.iter().map(|a| kron_all(&[&id, a, &id])).collect(),
                    s.iter().map(|a| kron_all(&[&id, &id, a])).collect(),
                ],
                pairs: vec![
                    pair(&|a, b| kron_all(&[a, b, &id])),
                    pair(&|a, b| kron_all(&[a, &id, b])),
                    pair(&|a, b| kron_all(&[&id, a, b])),
                ],
                top: triples(3).map(|(a, b, c)| kron_all(&[&s[a], &s[b], &s[c]])).collect(),
            }
        }
    }
}

/// Shared operator tables, built on first use.
pub fn operators(system: System) -> &'static CorrelationOperators {
    static TABLES: OnceLock<[CorrelationOperators; 3]> = OnceLock::new();
    let tables = TABLES.get_or_init(|| System::ALL.map(build_operators));
    match system {
        System::TwoQubit => &tables[0],
        System::TwoQutrit => &tables[1],
        System::ThreeQubit => &tables[2],
    }
}

fn expect<const N: usize>(state: &PureState, ops: &[ComplexMatrix]) -> [f64; N] {
    let mut out = [0.0; N];
    for (o, op) in out.iter_mut().zip(ops) {
        *o = state.expectation(op).re;
    }
    out
}

fn expect_matrix<const N: usize>(state: &PureState, ops: &[ComplexMatrix]) -> [[f64; N]; N] {
    let mut out = [[0.0; N]; N];
    for (k, op) in ops.iter().enumerate() {
        out[k / N][k % N] = state.expectation(op).re;
    }
    out
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TwoQubitBloch {
    pub r: [f64; 3],
    pub s: [f64; 3],
    #[serde(rename = "T")]
    pub t: [[f64; 3]; 3],
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TwoQutritBloch {
    pub lambda_a: [f64; 8],
    pub lambda_b: [f64; 8],
    /// `(9/4)⟨λ_k⊗λ_l⟩`
    #[serde(rename = "T")]
    pub t: [[f64; 8]; 8],
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ThreeQubitBloch {
    pub r: [f64; 3],
    pub s: [f64; 3],
    pub q: [f64; 3],
    pub t_ab: [[f64; 3]; 3],
    pub t_ac: [[f64; 3]; 3],
    pub t_bc: [[f64; 3]; 3],
    /// `tau[a][b][c] = ⟨σ_a⊗σ_b⊗σ_c⟩`, indices in party order A, B, C.
    pub tau: [[[f64; 3]; 3]; 3],
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(untagged)]
pub enum BlochDecomposition {
    TwoQubit(TwoQubitBloch),
    TwoQutrit(TwoQutritBloch),
    ThreeQubit(ThreeQubitBloch),
}

fn frobenius<'a>(entries: impl Iterator<Item = &'a f64>) -> f64 {
    entries.map(|x| x * x).sum::<f64>().sqrt()
}

impl TwoQubitBloch {
    pub fn from_state(state: &PureState) -> Result<Self> {
        ensure_shape(state, System::TwoQubit)?;
        let ops = operators(System::TwoQubit);
        Ok(Self {
            r: expect(state, &ops.local[0]),
            s: expect(state, &ops.local[1]),
            t: expect_matrix(state, &ops.top),
        })
    }

    pub fn tensor_norm(&self) -> f64 {
        frobenius(self.t.iter().flatten())
    }

    /// Row `n` of the correlation matrix.
    pub fn row(&self, n: usize) -> [f64; 3] {
        self.t[n]
    }

    /// Column `n` of the correlation matrix.
    pub fn col(&self, n: usize) -> [f64; 3] {
        [self.t[0][n], self.t[1][n], self.t[2][n]]
    }

    pub fn reconstruct_density(&self) -> ComplexMatrix {
        let ops = operators(System::TwoQubit);
        let mut rho = identity(4);
        for k in 0..3 {
            rho += ops.local[0][k].scale(self.r[k]) + ops.local[1][k].scale(self.s[k]);
        }
        for (op, t) in ops.top.iter().zip(self.t.iter().flatten()) {
            rho += op.scale(*t);
        }
        rho.unscale(4.0)
    }
}

impl TwoQutritBloch {
    pub fn from_state(state: &PureState) -> Result<Self> {
        ensure_shape(state, System::TwoQutrit)?;
        let ops = operators(System::TwoQutrit);
        Ok(Self {
            lambda_a: expect(state, &ops.local[0]),
            lambda_b: expect(state, &ops.local[1]),
            t: expect_matrix(state, &ops.top),
        })
    }

    pub fn tensor_norm(&self) -> f64 {
        frobenius(self.t.iter().flatten())
    }

    pub fn reconstruct_density(&self) -> ComplexMatrix {
        let ops = operators(System::TwoQutrit);
        let mut rho = identity(9).unscale(9.0);
        for k in 0..8 {
            rho += (ops.local[0][k].scale(self.lambda_a[k]) + ops.local[1][k].scale(self.lambda_b[k])).unscale(6.0);
        }
        // top operators already carry the 9/4 scale: (1/9)·τ·(λ⊗λ) = (4/81)·τ·top
        for (op, t) in ops.top.iter().zip(self.t.iter().flatten()) {
            rho += op.scale(*t * 4.0 / 81.0);
        }
        rho
    }
}

impl ThreeQubitBloch {
    pub fn from_state(state: &PureState) -> Result<Self> {
        ensure_shape(state, System::ThreeQubit)?;
        let ops = operators(System::ThreeQubit);
        let mut tau = [[[0.0; 3]; 3]; 3];
        for (k, op) in ops.top.iter().enumerate() {
            tau[k / 9][(k / 3) % 3][k % 3] = state.expectation(op).re;
        }
        Ok(Self {
            r: expect(state, &ops.local[0]),
            s: expect(state, &ops.local[1]),
            q: expect(state, &ops.local[2]),
            t_ab: expect_matrix(state, &ops.pairs[0]),
            t_ac: expect_matrix(state, &ops.pairs[1]),
            t_bc: expect_matrix(state, &ops.pairs[2]),
            tau,
        })
    }

    pub fn tensor_norm(&self) -> f64 {
        frobenius(self.tau.iter().flatten().flatten())
    }

    pub fn reconstruct_density(&self) -> ComplexMatrix {
        let ops = operators(System::ThreeQubit);
        let mut rho = identity(8);
        for k in 0..3 {
            rho += ops.local[0][k].scale(self.r[k]) + ops.local[1][k].scale(self.s[k]) + ops.local[2][k].scale(self.q[k]);
        }
        for (pair, t) in ops.pairs.iter().zip([&self.t_ab, &self.t_ac, &self.t_bc]) {
            for (op, v) in pair.iter().zip(t.iter().flatten()) {
                rho += op.scale(*v);
            }
        }
        for (op, v) in ops.top.iter().zip(self.tau.iter().flatten().flatten()) {
            rho += op.scale(*v);
        }
        rho.unscale(8.0)
    }
}

impl BlochDecomposition {
    pub fn system(&self) -> System {
        match self {
            BlochDecomposition::TwoQubit(_) => System::TwoQubit,
            BlochDecomposition::TwoQutrit(_) => System::TwoQutrit,
            BlochDecomposition::ThreeQubit(_) => System::ThreeQubit,
        }
    }

    pub fn tensor_norm(&self) -> f64 {
        match self {
            BlochDecomposition::TwoQubit(d) => d.tensor_norm(),
            BlochDecomposition::TwoQutrit(d) => d.tensor_norm(),
            BlochDecomposition::ThreeQubit(d) => d.tensor_norm(),
        }
    }

    /// `‖T‖ − c` with the product-state baseline `c` of the shape.
    pub fn entanglement(&self) -> Result<f64> {
        measure_from_norm(self.tensor_norm(), self.system())
    }

    pub fn reconstruct_density(&self) -> ComplexMatrix {
        match self {
            BlochDecomposition::TwoQubit(d) => d.reconstruct_density(),
            BlochDecomposition::TwoQutrit(d) => d.reconstruct_density(),
            BlochDecomposition::ThreeQubit(d) => d.reconstruct_density(),
        }
    }
}

fn ensure_shape(state: &PureState, system: System) -> Result<()> {
    if state.dims() != system.dims() {
        return Err(Error::UnsupportedShape(state.dims().to_vec()));
    }
    Ok(())
}

pub(crate) fn measure_from_norm(norm: f64, system: System) -> Result<f64> {
    let e = norm - system.product_norm();
    if e < -NEGATIVE_E_TOL {
        return Err(Error::NegativeEntanglement(e));
    }
    Ok(e.max(0.0))
}

pub fn decompose(state: &PureState) -> Result<BlochDecomposition> {
    Ok(match System::from_dims(state.dims())? {
        System::TwoQubit => BlochDecomposition::TwoQubit(TwoQubitBloch::from_state(state)?),
        System::TwoQutrit => BlochDecomposition::TwoQutrit(TwoQutritBloch::from_state(state)?),
        System::ThreeQubit => BlochDecomposition::ThreeQubit(ThreeQubitBloch::from_state(state)?),
    })
}

/// `‖T‖` from the top-order correlators only.
pub fn tensor_norm(state: &PureState) -> Result<f64> {
    let system = System::from_dims(state.dims())?;
    Ok(operators(system)
        .top
        .iter()
        .map(|op| state.expectation(op).re.powi(2))
        .sum::<f64>()
        .sqrt())
}

/// Tensor-norm entanglement: `‖T‖ − 1` (qubits) or `‖T‖ − 3` (qutrits).
pub fn entanglement(state: &PureState) -> Result<f64> {
    let system = System::from_dims(state.dims())?;
    measure_from_norm(tensor_norm(state)?, system)
}
