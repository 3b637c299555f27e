//! Pauli and Gell-Mann generator sets and SU(2)/SU(3) structure constants.
//!
//! Structure constants are computed from the trace formulas
//! `4i f_jkl = Tr([λ_j, λ_k] λ_l)` and `4 g_jkl = Tr({λ_j, λ_k} λ_l)`.

use std::sync::OnceLock;

use crate::error::{Error, Result};
use crate::linalg::{anticommutator, commutator, hermitian_deviation, identity, max_abs, ComplexMatrix, C64};

/// Entries of `f` and `g` below this magnitude are snapped to exactly zero.
pub const SNAP_TOL: f64 = 1e-12;

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

fn from_rows<const N: usize>(rows: [[C64; N]; N]) -> ComplexMatrix {
    ComplexMatrix::from_fn(N, N, |i, j| rows[i][j])
}

/// `[σ₁, σ₂, σ₃]`
pub fn pauli() -> [ComplexMatrix; 3] {
    let o = c(0.0, 0.0);
    let l = c(1.0, 0.0);
    let i = c(0.0, 1.0);
    [
        from_rows([[o, l], [l, o]]),
        from_rows([[o, -i], [i, o]]),
        from_rows([[l, o], [o, -l]]),
    ]
}

/// Outer product `|a⟩⟨b|` on a qutrit, basis labels 0, 1, 2.
fn ket_bra(a: usize, b: usize) -> ComplexMatrix {
    let mut m = ComplexMatrix::zeros(3, 3);
    m[(a, b)] = c(1.0, 0.0);
    m
}

/// `[λ₁, …, λ₈]` in the standard Gell-Mann convention.
pub fn gell_mann() -> [ComplexMatrix; 8] {
    let i = c(0.0, 1.0);
    let sym = |a, b| ket_bra(a, b) + ket_bra(b, a);
    let asym = |a, b| (ket_bra(a, b) - ket_bra(b, a)) * (-i);
    let l8 = (ket_bra(0, 0) + ket_bra(1, 1) - ket_bra(2, 2).scale(2.0)).unscale(3f64.sqrt());
    [
        sym(0, 1),
        asym(0, 1),
        ket_bra(0, 0) - ket_bra(1, 1),
        sym(0, 2),
        asym(0, 2),
        sym(1, 2),
        asym(1, 2),
        l8,
    ]
}

/// Ordered set of `d² − 1` traceless Hermitian generators with `Tr(λ_i λ_j) = 2δ_ij`.
#[derive(Debug, Clone)]
pub struct GeneratorSet {
    dim: usize,
    matrices: Vec<ComplexMatrix>,
}

impl GeneratorSet {
    pub fn pauli() -> Self {
        Self { dim: 2, matrices: pauli().to_vec() }
    }

    pub fn gell_mann() -> Self {
        Self { dim: 3, matrices: gell_mann().to_vec() }
    }

    /// Wraps arbitrary matrices, e.g. a deliberately perturbed set.
    /// Shape is checked; algebraic properties are not.
    pub fn from_matrices(dim: usize, matrices: Vec<ComplexMatrix>) -> Result<Self> {
        if matrices.len() != dim * dim - 1 || matrices.iter().any(|m| m.shape() != (dim, dim)) {
            return Err(Error::DimensionMismatch(format!(
                "expected {} matrices of size {dim}x{dim}",
                dim * dim - 1
            )));
        }
        Ok(Self { dim, matrices })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.matrices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.matrices.is_empty()
    }

    pub fn matrices(&self) -> &[ComplexMatrix] {
        &self.matrices
    }

    pub fn get(&self, i: usize) -> &ComplexMatrix {
        &self.matrices[i]
    }

    /// Largest violation of Hermiticity, tracelessness and `Tr(λ_i λ_j) = 2δ_ij`.
    pub fn orthonormality_residual(&self) -> f64 {
        let mut worst = 0.0f64;
        for (i, a) in self.matrices.iter().enumerate() {
            worst = worst.max(hermitian_deviation(a)).max(a.trace().norm());
            for (j, b) in self.matrices.iter().enumerate() {
                let target = if i == j { 2.0 } else { 0.0 };
                worst = worst.max(((a * b).trace() - c(target, 0.0)).norm());
            }
        }
        worst
    }
}

/// Dense `n×n×n` real table.
#[derive(Debug, Clone, PartialEq)]
pub struct Table3 {
    n: usize,
    data: Vec<f64>,
}

impl Table3 {
    pub fn zeros(n: usize) -> Self {
        Self { n, data: vec![0.0; n * n * n] }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize, k: usize) -> f64 {
        self.data[(i * self.n + j) * self.n + k]
    }

    #[inline]
    fn set(&mut self, i: usize, j: usize, k: usize, v: f64) {
        let n = self.n;
        self.data[(i * n + j) * n + k] = v;
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct StructureConstants {
    pub dim: usize,
    /// Completely antisymmetric.
    pub f: Table3,
    /// Completely symmetric.
    pub g: Table3,
}

fn snap(x: f64) -> f64 {
    if x.abs() < SNAP_TOL { 0.0 } else { x }
}

/// Structure constants from the trace formulas.
///
/// Each entry is computed once per unordered index triple and copied to all
/// permutations (with sign for `f`), so the symmetry is exact.
pub fn structure_constants(gen: &GeneratorSet) -> StructureConstants {
    let n = gen.len();
    let m = gen.matrices();
    let mut f = Table3::zeros(n);
    let mut g = Table3::zeros(n);
    for i in 0..n {
        for j in i..n {
            let comm = commutator(&m[i], &m[j]).expect("generators share a shape");
            let anti = anticommutator(&m[i], &m[j]).expect("generators share a shape");
            for k in j..n {
                // Tr([λ_i, λ_j] λ_k) = 4i f_ijk
                let fv = snap(((&comm * &m[k]).trace() / c(0.0, 4.0)).re);
                let gv = snap(((&anti * &m[k]).trace() / 4.0).re);
                for (a, b, cc, sign) in [
                    (i, j, k, 1.0),
                    (j, k, i, 1.0),
                    (k, i, j, 1.0),
                    (j, i, k, -1.0),
                    (i, k, j, -1.0),
                    (k, j, i, -1.0),
                ] {
                    f.set(a, b, cc, if a == b || b == cc || a == cc { 0.0 } else { sign * fv });
                    g.set(a, b, cc, gv);
                }
            }
        }
    }
    StructureConstants { dim: gen.dim(), f, g }
}

/// Shared SU(3) constants, computed on first use.
pub fn su3_constants() -> &'static StructureConstants {
    static SC: OnceLock<StructureConstants> = OnceLock::new();
    SC.get_or_init(|| structure_constants(&GeneratorSet::gell_mann()))
}

/// Levi-Civita symbol on `{0, 1, 2}`.
pub fn levi_civita(i: usize, j: usize, k: usize) -> f64 {
    match (i, j, k) {
        (0, 1, 2) | (1, 2, 0) | (2, 0, 1) => 1.0,
        (0, 2, 1) | (2, 1, 0) | (1, 0, 2) => -1.0,
        _ => 0.0,
    }
}

/// `max_{i,j} ‖λ_iλ_j − (2/3)δ_ij I − Σ_k (i f_ijk + g_ijk) λ_k‖∞` for SU(3).
pub fn verify_product_identity(gen: &GeneratorSet, sc: &StructureConstants) -> Result<f64> {
    if gen.dim() != 3 || sc.dim != 3 {
        return Err(Error::UnsupportedShape(vec![gen.dim()]));
    }
    let m = gen.matrices();
    let n = gen.len();
    let mut worst = 0.0f64;
    for i in 0..n {
        for j in 0..n {
            let mut rhs = if i == j { identity(3).scale(2.0 / 3.0) } else { ComplexMatrix::zeros(3, 3) };
            for (k, lk) in m.iter().enumerate() {
                rhs += lk * c(sc.g.get(i, j, k), sc.f.get(i, j, k));
            }
            worst = worst.max(max_abs(&(&m[i] * &m[j] - rhs)));
        }
    }
    Ok(worst)
}

/// Largest violation of `Σ_m (f_ijm f_mkl + f_jkm f_mil + f_kim f_mjl) = 0`.
pub fn jacobi_residual(sc: &StructureConstants) -> f64 {
    let f = &sc.f;
    let n = f.n();
    let mut worst = 0.0f64;
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                for l in 0..n {
                    let s: f64 = (0..n)
                        .map(|m| f.get(i, j, m) * f.get(m, k, l) + f.get(j, k, m) * f.get(m, i, l) + f.get(k, i, m) * f.get(m, j, l))
                        .sum();
                    worst = worst.max(s.abs());
                }
            }
        }
    }
    worst
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::DVector;

    fn ket(i: usize) -> DVector<C64> {
        let mut v = DVector::zeros(3);
        v[i] = c(1.0, 0.0);
        v
    }

    #[test]
    fn gell_mann_action_on_basis() {
        let l = gell_mann();
        assert_eq!(&l[2] * ket(0), ket(0));
        assert_eq!(&l[2] * ket(1), -ket(1));
        assert_eq!(&l[2] * ket(2), DVector::zeros(3));
        let v = &l[7] * ket(2);
        assert!((v[2].re + 2.0 / 3f64.sqrt()).abs() < 1e-15);
        assert_eq!(&l[1] * ket(0), ket(1) * c(0.0, 1.0));
        assert_eq!(&l[4] * ket(0), ket(2) * c(0.0, 1.0));
        assert_eq!(&l[4] * ket(2), ket(0) * c(0.0, -1.0));
        assert_eq!(&l[6] * ket(2), ket(1) * c(0.0, -1.0));
        assert!(((&l[3] * &l[3]).trace().re - 2.0).abs() < 1e-15);
    }

    #[test]
    fn generator_sets_are_orthonormal() {
        assert!(GeneratorSet::pauli().orthonormality_residual() < 1e-12);
        assert!(GeneratorSet::gell_mann().orthonormality_residual() < 1e-12);
    }

    #[test]
    fn su3_reference_entries() {
        let sc = su3_constants();
        assert!((sc.f.get(0, 1, 2) - 1.0).abs() < 1e-14);
        assert!((sc.f.get(3, 4, 7) - 3f64.sqrt() / 2.0).abs() < 1e-14);
        assert!((sc.g.get(0, 0, 7) - 1.0 / 3f64.sqrt()).abs() < 1e-14);
        assert!((sc.f.get(1, 0, 2) + 1.0).abs() < 1e-14);
    }

    #[test]
    fn su2_reduces_to_levi_civita() {
        let sc = structure_constants(&GeneratorSet::pauli());
        for i in 0..3 {
            for j in 0..3 {
                for k in 0..3 {
                    assert_eq!(sc.f.get(i, j, k), levi_civita(i, j, k));
                    assert_eq!(sc.g.get(i, j, k), 0.0);
                }
            }
        }
    }

    #[test]
    fn symmetry_is_exact() {
        let sc = su3_constants();
        for i in 0..8 {
            for j in 0..8 {
                for k in 0..8 {
                    assert_eq!(sc.f.get(i, j, k), -sc.f.get(j, i, k));
                    assert_eq!(sc.f.get(i, j, k), sc.f.get(j, k, i));
                    assert_eq!(sc.g.get(i, j, k), sc.g.get(j, i, k));
                    assert_eq!(sc.g.get(i, j, k), sc.g.get(i, k, j));
                }
            }
        }
    }

    #[test]
    fn product_identity_and_sensitivity() {
        let gen = GeneratorSet::gell_mann();
        let sc = su3_constants();
        assert!(verify_product_identity(&gen, sc).unwrap() < 1e-12);

        let mut perturbed = gell_mann().to_vec();
        perturbed[0][(0, 1)] += c(0.01, 0.0);
        let bad = GeneratorSet::from_matrices(3, perturbed).unwrap();
        assert!(verify_product_identity(&bad, sc).unwrap() > 1e-3);

        let su2 = GeneratorSet::pauli();
        assert!(verify_product_identity(&su2, &structure_constants(&su2)).is_err());
    }

    #[test]
    fn jacobi_identity_holds() {
        assert!(jacobi_residual(su3_constants()) < 1e-12);
        assert!(jacobi_residual(&structure_constants(&GeneratorSet::pauli())) < 1e-12);
    }
}
