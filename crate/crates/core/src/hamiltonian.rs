//! Diagonal-form interaction Hamiltonians.
//!
//! * two qubits: `Σ_n μ_n σ_n⊗σ_n`
//! * two qutrits: `Σ_p μ_p λ_p⊗λ_p`
//! * three qubits: `H_AB + H_BC + H_AC`, each pair term `Σ_s μ_s σ_s⊗σ_s` on its two parties

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::generators::{gell_mann, pauli};
use crate::linalg::{identity, kron_all, ComplexMatrix, HermitianEigen};
use crate::system::System;

#[derive(Debug, Clone, PartialEq)]
pub enum Couplings {
    TwoQubit([f64; 3]),
    TwoQutrit([f64; 8]),
    ThreeQubit { ab: [f64; 3], bc: [f64; 3], ac: [f64; 3] },
}

impl Couplings {
    pub fn system(&self) -> System {
        match self {
            Couplings::TwoQubit(_) => System::TwoQubit,
            Couplings::TwoQutrit(_) => System::TwoQutrit,
            Couplings::ThreeQubit { .. } => System::ThreeQubit,
        }
    }

    fn map(&self, f: impl Fn(f64) -> f64) -> Couplings {
        match self {
            Couplings::TwoQubit(m) => Couplings::TwoQubit(m.map(&f)),
            Couplings::TwoQutrit(m) => Couplings::TwoQutrit(m.map(&f)),
            Couplings::ThreeQubit { ab, bc, ac } => Couplings::ThreeQubit { ab: ab.map(&f), bc: bc.map(&f), ac: ac.map(&f) },
        }
    }
}

fn check_non_increasing(label: &str, mu: &[f64]) -> Result<()> {
    if let Some(w) = mu.windows(2).find(|w| w[0] < w[1]) {
        return Err(Error::OrderingViolation(format!(
            "{label} couplings {mu:?} must be non-increasing ({} < {})",
            w[0], w[1]
        )));
    }
    Ok(())
}

/// Coupling strengths defining `H_I`.
#[derive(Debug, Clone, PartialEq)]
pub struct InteractionSpec {
    couplings: Couplings,
}

impl InteractionSpec {
    /// Validates the non-increasing ordering convention.
    pub fn new(couplings: Couplings) -> Result<Self> {
        match &couplings {
            Couplings::TwoQubit(m) => check_non_increasing("two-qubit", m)?,
            Couplings::TwoQutrit(m) => check_non_increasing("two-qutrit", m)?,
            Couplings::ThreeQubit { ab, bc, ac } => {
                check_non_increasing("AB", ab)?;
                check_non_increasing("BC", bc)?;
                check_non_increasing("AC", ac)?;
            }
        }
        Ok(Self { couplings })
    }

    /// Skips the ordering check; the rate formulas do not depend on it.
    pub fn unordered(couplings: Couplings) -> Self {
        Self { couplings }
    }

    pub fn two_qubit(mu: [f64; 3]) -> Result<Self> {
        Self::new(Couplings::TwoQubit(mu))
    }

    pub fn two_qutrit(mu: [f64; 8]) -> Result<Self> {
        Self::new(Couplings::TwoQutrit(mu))
    }

    pub fn three_qubit(ab: [f64; 3], bc: [f64; 3], ac: [f64; 3]) -> Result<Self> {
        Self::new(Couplings::ThreeQubit { ab, bc, ac })
    }

    /// All couplings equal to `mu`.
    pub fn isotropic(system: System, mu: f64) -> Self {
        let couplings = match system {
            System::TwoQubit => Couplings::TwoQubit([mu; 3]),
            System::TwoQutrit => Couplings::TwoQutrit([mu; 8]),
            System::ThreeQubit => Couplings::ThreeQubit { ab: [mu; 3], bc: [mu; 3], ac: [mu; 3] },
        };
        Self { couplings }
    }

    pub fn couplings(&self) -> &Couplings {
        &self.couplings
    }

    pub fn system(&self) -> System {
        self.couplings.system()
    }

    pub fn scaled(&self, c: f64) -> Self {
        Self { couplings: self.couplings.map(|x| c * x) }
    }

    pub fn build_matrix(&self) -> ComplexMatrix {
        match &self.couplings {
            Couplings::TwoQubit(mu) => {
                let s = pauli();
                s.iter().zip(mu).fold(ComplexMatrix::zeros(4, 4), |acc, (a, m)| acc + kron_all(&[a, a]).scale(*m))
            }
            Couplings::TwoQutrit(mu) => {
                let l = gell_mann();
                l.iter().zip(mu).fold(ComplexMatrix::zeros(9, 9), |acc, (a, m)| acc + kron_all(&[a, a]).scale(*m))
            }
            Couplings::ThreeQubit { ab, bc, ac } => {
                let s = pauli();
                let id = identity(2);
                let mut h = ComplexMatrix::zeros(8, 8);
                for (k, a) in s.iter().enumerate() {
                    h += kron_all(&[a, a, &id]).scale(ab[k]);
                    h += kron_all(&[&id, a, a]).scale(bc[k]);
                    h += kron_all(&[a, &id, a]).scale(ac[k]);
                }
                h
            }
        }
    }

    /// Ascending eigenvalues of `H_I`.
    pub fn eigenvalues(&self) -> Vec<f64> {
        HermitianEigen::new(&self.build_matrix())
            .expect("interaction Hamiltonian is Hermitian by construction")
            .values
    }

    /// `τ_H = (e_max − e_min)⁻¹`
    pub fn timescale(&self) -> Result<f64> {
        let e = self.eigenvalues();
        let spread = e[e.len() - 1] - e[0];
        if spread <= 1e-12 {
            return Err(Error::ZeroHamiltonian);
        }
        Ok(1.0 / spread)
    }

    /// `μ₁ + μ₂` for two qubits.
    pub fn two_qubit_h_max(&self) -> Result<f64> {
        match &self.couplings {
            Couplings::TwoQubit(mu) => Ok(mu[0] + mu[1]),
            _ => Err(Error::UnsupportedShape(self.system().dims().to_vec())),
        }
    }
}

/// JSON form: `{ "system": "2x2", "mu": [...] }` or, for three qubits,
/// `{ "system": "2x2x2", "mu_ab": [...], "mu_bc": [...], "mu_ac": [...] }`.
/// A three-qubit `mu` of length 3 is applied to all pairs.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct HamiltonianFile {
    pub system: System,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mu: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mu_ab: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mu_bc: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mu_ac: Option<Vec<f64>>,
    /// Accept couplings that break the non-increasing convention.
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub allow_unordered: bool,
}

fn fixed<const N: usize>(label: &str, v: &[f64]) -> Result<[f64; N]> {
    v.try_into()
        .map_err(|_| Error::DimensionMismatch(format!("{label} has {} entries, expected {N}", v.len())))
}

impl HamiltonianFile {
    pub fn to_spec(&self) -> Result<InteractionSpec> {
        let missing = |name: &str| Error::DimensionMismatch(format!("missing \"{name}\" for system {}", self.system));
        let couplings = match self.system {
            System::TwoQubit => Couplings::TwoQubit(fixed("mu", self.mu.as_deref().ok_or_else(|| missing("mu"))?)?),
            System::TwoQutrit => Couplings::TwoQutrit(fixed("mu", self.mu.as_deref().ok_or_else(|| missing("mu"))?)?),
            System::ThreeQubit => match (&self.mu, &self.mu_ab, &self.mu_bc, &self.mu_ac) {
                (Some(mu), None, None, None) => {
                    let m = fixed("mu", mu)?;
                    Couplings::ThreeQubit { ab: m, bc: m, ac: m }
                }
                (None, Some(ab), Some(bc), Some(ac)) => Couplings::ThreeQubit {
                    ab: fixed("mu_ab", ab)?,
                    bc: fixed("mu_bc", bc)?,
                    ac: fixed("mu_ac", ac)?,
                },
                _ => return Err(missing("mu or mu_ab/mu_bc/mu_ac")),
            },
        };
        if self.allow_unordered {
            Ok(InteractionSpec::unordered(couplings))
        } else {
            InteractionSpec::new(couplings)
        }
    }
}

impl From<&InteractionSpec> for HamiltonianFile {
    fn from(spec: &InteractionSpec) -> Self {
        let mut f = HamiltonianFile {
            system: spec.system(),
            mu: None,
            mu_ab: None,
            mu_bc: None,
            mu_ac: None,
            allow_unordered: InteractionSpec::new(spec.couplings.clone()).is_err(),
        };
        match &spec.couplings {
            Couplings::TwoQubit(m) => f.mu = Some(m.to_vec()),
            Couplings::TwoQutrit(m) => f.mu = Some(m.to_vec()),
            Couplings::ThreeQubit { ab, bc, ac } => {
                f.mu_ab = Some(ab.to_vec());
                f.mu_bc = Some(bc.to_vec());
                f.mu_ac = Some(ac.to_vec());
            }
        }
        f
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{hermitian_deviation, max_abs};

    #[test]
    fn ordering_enforced_with_override() {
        assert!(matches!(InteractionSpec::two_qubit([0.0, 0.0, 1.0]), Err(Error::OrderingViolation(_))));
        let h = InteractionSpec::unordered(Couplings::TwoQubit([0.0, 0.0, 1.0])).build_matrix();
        let [_, _, z] = pauli();
        assert!(max_abs(&(h - kron_all(&[&z, &z]))) < 1e-15);
        let mut mu = [1.0; 8];
        mu[7] = 2.0;
        assert!(InteractionSpec::two_qutrit(mu).is_err());
        assert!(InteractionSpec::three_qubit([1.0; 3], [1.0, 0.5, 0.7], [1.0; 3]).is_err());
        // non-strict ordering
        assert!(InteractionSpec::two_qutrit([1.0; 8]).is_ok());
    }

    #[test]
    fn single_term_assembly() {
        let h = InteractionSpec::two_qubit([1.0, 0.0, 0.0]).unwrap().build_matrix();
        let [x, _, _] = pauli();
        assert!(max_abs(&(h - kron_all(&[&x, &x]))) < 1e-15);
    }

    #[test]
    fn isotropic_two_qubit_spectrum_and_timescale() {
        let spec = InteractionSpec::isotropic(System::TwoQubit, 1.0);
        let e = spec.eigenvalues();
        let want = [-3.0, 1.0, 1.0, 1.0];
        for (a, b) in e.iter().zip(want) {
            assert!((a - b).abs() < 1e-12);
        }
        assert!((spec.timescale().unwrap() - 0.25).abs() < 1e-12);
        let x = InteractionSpec::two_qubit([1.0, 0.0, 0.0]).unwrap();
        assert!((x.timescale().unwrap() - 0.5).abs() < 1e-12);
        assert_eq!(InteractionSpec::two_qubit([0.0; 3]).unwrap().timescale(), Err(Error::ZeroHamiltonian));
    }

    #[test]
    fn three_qubit_isotropic_assembly() {
        let spec = InteractionSpec::isotropic(System::ThreeQubit, 1.0);
        let h = spec.build_matrix();
        let s = pauli();
        let id = identity(2);
        let mut want = ComplexMatrix::zeros(8, 8);
        for a in &s {
            want += kron_all(&[a, a, &id]) + kron_all(&[&id, a, a]) + kron_all(&[a, &id, a]);
        }
        assert!(max_abs(&(&h - want)) < 1e-15);
        assert!(hermitian_deviation(&h) < 1e-12);
        assert!(h.trace().norm() < 1e-12);
    }

    #[test]
    fn file_round_trip_and_validation() {
        let f: HamiltonianFile = serde_json::from_str(r#"{"system":"2x2x2","mu":[1,1,1]}"#).unwrap();
        assert_eq!(f.to_spec().unwrap(), InteractionSpec::isotropic(System::ThreeQubit, 1.0));
        let f: HamiltonianFile = serde_json::from_str(r#"{"system":"3x3","mu":[1,1,1]}"#).unwrap();
        assert!(f.to_spec().is_err());
        let f: HamiltonianFile = serde_json::from_str(r#"{"system":"2x2","mu":[0,0,1],"allow_unordered":true}"#).unwrap();
        let spec = f.to_spec().unwrap();
        assert_eq!(HamiltonianFile::from(&spec).to_spec().unwrap(), spec);
    }
}
