//! Pure states on a product basis.
//!
//! Amplitudes are indexed with the first subsystem most significant, so for
//! three qubits the basis index is the binary number `abc`.

use nalgebra::DVector;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, C64};

/// Norm tolerance for states handed to the library.
pub const NORM_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    dims: Vec<usize>,
    amps: DVector<C64>,
}

impl PureState {
    /// Builds a state, checking shape and normalization.
    pub fn new(dims: Vec<usize>, amps: Vec<C64>) -> Result<Self> {
        let state = Self::from_unnormalized_parts(dims, amps)?;
        let norm = state.norm();
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(Error::NotNormalized(norm));
        }
        Ok(state)
    }

    /// Builds a state and rescales it to unit norm.
    pub fn normalized(dims: Vec<usize>, amps: Vec<C64>) -> Result<Self> {
        let mut state = Self::from_unnormalized_parts(dims, amps)?;
        let norm = state.norm();
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::NotNormalized(norm));
        }
        state.amps.unscale_mut(norm);
        Ok(state)
    }

    fn from_unnormalized_parts(dims: Vec<usize>, amps: Vec<C64>) -> Result<Self> {
        if dims.is_empty() || dims.iter().any(|&d| d < 2) {
            return Err(Error::UnsupportedShape(dims));
        }
        let total: usize = dims.iter().product();
        if amps.len() != total {
            return Err(Error::DimensionMismatch(format!(
                "{} amplitudes for dims {:?} (expected {})",
                amps.len(),
                dims,
                total
            )));
        }
        Ok(Self { dims, amps: DVector::from_vec(amps) })
    }

    /// Computational basis state `|index⟩`.
    pub fn basis(dims: Vec<usize>, index: usize) -> Result<Self> {
        let total: usize = dims.iter().product();
        if index >= total {
            return Err(Error::OutOfRange(format!("basis index {index} >= {total}")));
        }
        let mut amps = vec![C64::new(0.0, 0.0); total];
        amps[index] = C64::new(1.0, 0.0);
        Self::new(dims, amps)
    }

    /// Tensor product of single-subsystem states, first factor most significant.
    pub fn product(factors: &[Vec<C64>]) -> Result<Self> {
        let dims: Vec<usize> = factors.iter().map(Vec::len).collect();
        let mut amps = vec![C64::new(1.0, 0.0)];
        for f in factors {
            amps = amps
                .iter()
                .flat_map(|a| f.iter().map(move |b| a * b))
                .collect();
        }
        Self::normalized(dims, amps)
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amplitudes(&self) -> &DVector<C64> {
        &self.amps
    }

    pub fn amp(&self, index: usize) -> C64 {
        self.amps[index]
    }

    pub fn norm(&self) -> f64 {
        self.amps.norm()
    }

    pub(crate) fn from_vector_unchecked(dims: Vec<usize>, amps: DVector<C64>) -> Self {
        Self { dims, amps }
    }

    /// `|ψ⟩⟨ψ|`
    pub fn density(&self) -> ComplexMatrix {
        &self.amps * self.amps.adjoint()
    }

    /// `⟨ψ|op|ψ⟩`; real part only for Hermitian `op`.
    pub fn expectation(&self, op: &ComplexMatrix) -> C64 {
        self.amps.dotc(&(op * &self.amps))
    }

    pub fn inner(&self, other: &PureState) -> C64 {
        self.amps.dotc(&other.amps)
    }

    /// `op |ψ⟩` for a square operator of matching dimension.
    pub fn apply(&self, op: &ComplexMatrix) -> Result<PureState> {
        if op.nrows() != self.dim() || op.ncols() != self.dim() {
            return Err(Error::DimensionMismatch(format!(
                "operator {}x{} on state of dimension {}",
                op.nrows(),
                op.ncols(),
                self.dim()
            )));
        }
        Ok(Self { dims: self.dims.clone(), amps: op * &self.amps })
    }

    /// Multiplies by a global phase so that the largest-magnitude amplitude
    /// (lowest index on ties) is real and positive.
    pub fn canonicalize_phase(&mut self) {
        let mut best = 0;
        let mut best_mag = -1.0;
        for (i, a) in self.amps.iter().enumerate() {
            let m = a.norm();
            if m > best_mag + 1e-14 {
                best = i;
                best_mag = m;
            }
        }
        if best_mag > 0.0 {
            let a = self.amps[best];
            let phase = a.conj() / a.norm();
            self.amps.iter_mut().for_each(|x| *x *= phase);
            self.amps[best] = C64::new(self.amps[best].re, 0.0);
        }
    }

    pub fn canonical(&self) -> PureState {
        let mut s = self.clone();
        s.canonicalize_phase();
        s
    }

    /// Minimum over global phases of `max_i |a_i - e^{iφ} b_i|`.
    pub fn distance_up_to_phase(&self, other: &PureState) -> f64 {
        let overlap = other.inner(self);
        let phase = if overlap.norm() > 0.0 { overlap / overlap.norm() } else { C64::new(1.0, 0.0) };
        self.amps
            .iter()
            .zip(other.amps.iter())
            .map(|(a, b)| (a - phase * b).norm())
            .fold(0.0, f64::max)
    }
}

/// JSON form `{ "dims": [...], "amps": [[re, im], ...] }`.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct StateFile {
    pub dims: Vec<usize>,
    pub amps: Vec<[f64; 2]>,
}

impl From<&PureState> for StateFile {
    fn from(s: &PureState) -> Self {
        Self {
            dims: s.dims.clone(),
            amps: s.amps.iter().map(|a| [a.re, a.im]).collect(),
        }
    }
}

/// Largest norm deviation accepted (and repaired) when loading a state file.
pub const LOAD_NORM_TOL: f64 = 1e-6;

impl StateFile {
    /// Converts to a state. Files off-norm by at most `LOAD_NORM_TOL` are
    /// renormalized; the returned flag reports whether that happened.
    pub fn to_state(&self) -> Result<(PureState, bool)> {
        let amps: Vec<C64> = self.amps.iter().map(|[re, im]| C64::new(*re, *im)).collect();
        let raw = PureState::from_unnormalized_parts(self.dims.clone(), amps)?;
        let norm = raw.norm();
        if (norm - 1.0).abs() > LOAD_NORM_TOL {
            return Err(Error::NotNormalized(norm));
        }
        let renormalized = (norm - 1.0).abs() > 1e-9;
        let mut s = raw;
        s.amps.unscale_mut(norm);
        Ok((s, renormalized))
    }
}

/// Named states used throughout tests and examples.
pub mod named {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    /// `(|00⟩ + |11⟩)/√2`
    pub fn bell_phi_plus() -> PureState {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        PureState::new(vec![2, 2], vec![c(h, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(h, 0.0)]).unwrap()
    }

    /// `(|01⟩ − |10⟩)/√2`
    pub fn singlet() -> PureState {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        PureState::new(vec![2, 2], vec![c(0.0, 0.0), c(h, 0.0), c(-h, 0.0), c(0.0, 0.0)]).unwrap()
    }

    /// `(|00⟩ + |11⟩ + |22⟩)/√3`
    pub fn qutrit_max_entangled() -> PureState {
        let a = 1.0 / 3f64.sqrt();
        let mut amps = vec![c(0.0, 0.0); 9];
        amps[0] = c(a, 0.0);
        amps[4] = c(a, 0.0);
        amps[8] = c(a, 0.0);
        PureState::new(vec![3, 3], amps).unwrap()
    }

    /// `(|000⟩ + |111⟩)/√2`
    pub fn ghz() -> PureState {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let mut amps = vec![c(0.0, 0.0); 8];
        amps[0] = c(h, 0.0);
        amps[7] = c(h, 0.0);
        PureState::new(vec![2, 2, 2], amps).unwrap()
    }

    /// `(|001⟩ + |010⟩ + |100⟩)/√3`
    pub fn w() -> PureState {
        let a = 1.0 / 3f64.sqrt();
        let mut amps = vec![c(0.0, 0.0); 8];
        amps[1] = c(a, 0.0);
        amps[2] = c(a, 0.0);
        amps[4] = c(a, 0.0);
        PureState::new(vec![2, 2, 2], amps).unwrap()
    }
}
