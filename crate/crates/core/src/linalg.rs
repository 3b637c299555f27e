//! Dense complex linear algebra for small Hilbert spaces (dimension ≤ 9).
//!
//! Matrices are `nalgebra` dense matrices of `Complex64`. Hermitian
//! exponentials go through the spectral decomposition so propagators are
//! unitary to machine precision.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::state::PureState;

pub type C64 = Complex64;
pub type ComplexMatrix = DMatrix<C64>;

/// Tolerance on `‖M − M†‖∞` for inputs declared Hermitian.
pub const HERMITIAN_TOL: f64 = 1e-10;

pub fn identity(n: usize) -> ComplexMatrix {
    ComplexMatrix::identity(n, n)
}

pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    a.kronecker(b)
}

/// Kronecker product of a list of factors, left to right.
pub fn kron_all(factors: &[&ComplexMatrix]) -> ComplexMatrix {
    factors
        .iter()
        .fold(identity(1), |acc, f| acc.kronecker(*f))
}

fn check_square_pair(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<()> {
    if !a.is_square() || a.shape() != b.shape() {
        return Err(Error::DimensionMismatch(format!(
            "{:?} and {:?} are not equal square shapes",
            a.shape(),
            b.shape()
        )));
    }
    Ok(())
}

/// `AB − BA`
pub fn commutator(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<ComplexMatrix> {
    check_square_pair(a, b)?;
    Ok(a * b - b * a)
}

/// `AB + BA`
pub fn anticommutator(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<ComplexMatrix> {
    check_square_pair(a, b)?;
    Ok(a * b + b * a)
}

/// Largest entry of `|M − M†|` (infinite for non-square input).
pub fn hermitian_deviation(m: &ComplexMatrix) -> f64 {
    if !m.is_square() {
        return f64::INFINITY;
    }
    let n = m.nrows();
    let mut worst = 0.0f64;
    for i in 0..n {
        for j in i..n {
            worst = worst.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    worst
}

pub fn ensure_hermitian(m: &ComplexMatrix) -> Result<()> {
    let dev = hermitian_deviation(m);
    if dev > HERMITIAN_TOL {
        return Err(Error::NotHermitian(dev));
    }
    Ok(())
}

/// Largest entry magnitude.
pub fn max_abs(m: &ComplexMatrix) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Eigen-decomposition of a Hermitian matrix, eigenvalues ascending.
#[derive(Debug, Clone)]
pub struct HermitianEigen {
    pub values: Vec<f64>,
    /// Columns are the eigenvectors, matching `values`.
    pub vectors: ComplexMatrix,
}

impl HermitianEigen {
    pub fn new(h: &ComplexMatrix) -> Result<Self> {
        ensure_hermitian(h)?;
        // symmetrize so round-off below the tolerance cannot leak in
        let sym = (h + h.adjoint()).unscale(2.0);
        let eig = SymmetricEigen::new(sym);
        let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
        order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
        let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
        let vectors = ComplexMatrix::from_columns(
            &order.iter().map(|&i| eig.eigenvectors.column(i).into_owned()).collect::<Vec<_>>(),
        );
        Ok(Self { values, vectors })
    }

    /// `V f(Λ) V†` for a scalar function of the eigenvalues.
    pub fn map(&self, f: impl Fn(f64) -> C64) -> ComplexMatrix {
        let d = DVector::from_iterator(self.values.len(), self.values.iter().map(|&x| f(x)));
        let scaled = &self.vectors * ComplexMatrix::from_diagonal(&d);
        scaled * self.vectors.adjoint()
    }

    /// `e^{−iHt}`
    pub fn propagator(&self, t: f64) -> ComplexMatrix {
        self.map(|e| C64::from_polar(1.0, -e * t))
    }
}

/// `e^{−iHt}` for Hermitian `h`.
pub fn unitary_exp(h: &ComplexMatrix, t: f64) -> Result<ComplexMatrix> {
    Ok(HermitianEigen::new(h)?.propagator(t))
}

/// `e^{−iHt}|ψ⟩` with ħ = 1.
pub fn evolve(state: &PureState, h: &ComplexMatrix, t: f64) -> Result<PureState> {
    if h.nrows() != state.dim() {
        return Err(Error::DimensionMismatch(format!(
            "Hamiltonian of dimension {} on state of dimension {}",
            h.nrows(),
            state.dim()
        )));
    }
    state.apply(&unitary_exp(h, t)?)
}

fn digits(mut index: usize, dims: &[usize]) -> Vec<usize> {
    let mut out = vec![0; dims.len()];
    for (slot, &d) in out.iter_mut().zip(dims).rev() {
        *slot = index % d;
        index /= d;
    }
    out
}

fn compose(digits: &[usize], dims: &[usize]) -> usize {
    digits.iter().zip(dims).fold(0, |acc, (&x, &d)| acc * d + x)
}

/// Reduced operator on the subsystems in `keep` (any order; output follows
/// ascending subsystem index).
pub fn partial_trace(rho: &ComplexMatrix, dims: &[usize], keep: &[usize]) -> Result<ComplexMatrix> {
    let total: usize = dims.iter().product();
    if rho.shape() != (total, total) {
        return Err(Error::DimensionMismatch(format!(
            "operator {:?} for dims {:?}",
            rho.shape(),
            dims
        )));
    }
    let mut kept: Vec<usize> = keep.to_vec();
    kept.sort_unstable();
    kept.dedup();
    if kept.len() != keep.len() || kept.iter().any(|&k| k >= dims.len()) {
        return Err(Error::InvalidSubsystems(format!("{keep:?} for {} subsystems", dims.len())));
    }
    let traced: Vec<usize> = (0..dims.len()).filter(|i| !kept.contains(i)).collect();
    let kept_dims: Vec<usize> = kept.iter().map(|&k| dims[k]).collect();
    let kept_total: usize = kept_dims.iter().product();
    let mut out = ComplexMatrix::zeros(kept_total, kept_total);
    let all: Vec<Vec<usize>> = (0..total).map(|i| digits(i, dims)).collect();
    for (i, di) in all.iter().enumerate() {
        let ki = compose(&kept.iter().map(|&k| di[k]).collect::<Vec<_>>(), &kept_dims);
        for (j, dj) in all.iter().enumerate() {
            if traced.iter().all(|&t| di[t] == dj[t]) {
                let kj = compose(&kept.iter().map(|&k| dj[k]).collect::<Vec<_>>(), &kept_dims);
                out[(ki, kj)] += rho[(i, j)];
            }
        }
    }
    Ok(out)
}

/// Bipartite Schmidt form `Σ c_k |a_k⟩|b_k⟩`.
#[derive(Debug, Clone)]
pub struct SchmidtDecomposition {
    /// Descending, nonnegative.
    pub coefficients: Vec<f64>,
    pub left: Vec<DVector<C64>>,
    pub right: Vec<DVector<C64>>,
    dims: [usize; 2],
}

impl SchmidtDecomposition {
    pub fn reconstruct(&self) -> PureState {
        let (da, db) = (self.dims[0], self.dims[1]);
        let mut amps = DVector::zeros(da * db);
        for ((c, a), b) in self.coefficients.iter().zip(&self.left).zip(&self.right) {
            for i in 0..da {
                for j in 0..db {
                    amps[i * db + j] += a[i] * b[j] * *c;
                }
            }
        }
        PureState::from_vector_unchecked(self.dims.to_vec(), amps)
    }

    /// Smaller squared coefficient of a two-qubit state.
    pub fn minor_weight(&self) -> f64 {
        self.coefficients.last().map_or(0.0, |c| c * c)
    }
}

fn lex_cmp(a: &DVector<C64>, b: &DVector<C64>) -> std::cmp::Ordering {
    for (x, y) in a.iter().zip(b.iter()) {
        let o = x.re.total_cmp(&y.re).then(x.im.total_cmp(&y.im));
        if o != std::cmp::Ordering::Equal {
            return o;
        }
    }
    std::cmp::Ordering::Equal
}

pub fn schmidt_decompose(state: &PureState) -> Result<SchmidtDecomposition> {
    let dims = state.dims();
    if dims.len() != 2 {
        return Err(Error::UnsupportedShape(dims.to_vec()));
    }
    let (da, db) = (dims[0], dims[1]);
    let m = ComplexMatrix::from_fn(da, db, |i, j| state.amp(i * db + j));
    let svd = m.svd(true, true);
    let u = svd.u.expect("left singular vectors requested");
    let v_t = svd.v_t.expect("right singular vectors requested");
    let rank = svd.singular_values.len();
    let mut terms: Vec<(f64, DVector<C64>, DVector<C64>)> = (0..rank)
        .map(|k| {
            (
                svd.singular_values[k],
                u.column(k).into_owned(),
                v_t.row(k).transpose().into_owned(),
            )
        })
        .collect();
    terms.sort_by(|a, b| {
        if (a.0 - b.0).abs() <= 1e-12 {
            lex_cmp(&a.1, &b.1)
        } else {
            b.0.total_cmp(&a.0)
        }
    });
    let (coefficients, (left, right)): (Vec<f64>, (Vec<_>, Vec<_>)) =
        terms.into_iter().map(|(c, a, b)| (c, (a, b))).unzip();
    Ok(SchmidtDecomposition { coefficients, left, right, dims: [da, db] })
}

/// Haar-random pure state from normalized complex Gaussian amplitudes.
pub fn random_state(dims: &[usize], seed: u64) -> PureState {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    random_state_with(dims, &mut rng)
}

pub fn random_state_with<R: Rng + ?Sized>(dims: &[usize], rng: &mut R) -> PureState {
    let total: usize = dims.iter().product();
    let amps: Vec<C64> = (0..total).map(|_| gaussian(rng)).collect();
    PureState::normalized(dims.to_vec(), amps).expect("Gaussian vector is nonzero")
}

fn gaussian<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

/// Haar-random unitary via QR of a Ginibre matrix with phase correction.
pub fn random_unitary<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> ComplexMatrix {
    let z = ComplexMatrix::from_fn(dim, dim, |_, _| gaussian(rng));
    let qr = z.qr();
    let (q, r) = (qr.q(), qr.r());
    let phases = DVector::from_iterator(
        dim,
        (0..dim).map(|i| {
            let d = r[(i, i)];
            if d.norm() > 0.0 { d / d.norm() } else { C64::new(1.0, 0.0) }
        }),
    );
    q * ComplexMatrix::from_diagonal(&phases)
}

/// Random Hermitian matrix `(Z + Z†)/2` from a Ginibre `Z`.
pub fn random_hermitian<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> ComplexMatrix {
    let z = ComplexMatrix::from_fn(dim, dim, |_, _| gaussian(rng));
    (&z + z.adjoint()).unscale(2.0)
}

/// `U_1 ⊗ U_2 ⊗ …` with independent Haar factors for each subsystem.
pub fn random_local_unitary<R: Rng + ?Sized>(dims: &[usize], rng: &mut R) -> ComplexMatrix {
    let factors: Vec<ComplexMatrix> = dims.iter().map(|&d| random_unitary(d, rng)).collect();
    kron_all(&factors.iter().collect::<Vec<_>>())
}
