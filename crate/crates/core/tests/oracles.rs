//! Independent re-derivations checked against the library.

use entcap::bloch::{self, ThreeQubitBloch, TwoQubitBloch};
use entcap::capacity::{capacity_two_qubit_tensor, capacity_two_qubit_vn, three_tangle};
use entcap::hamiltonian::InteractionSpec;
use entcap::linalg::{partial_trace, random_state, C64};
use entcap::rates::{
    check_conditions, f_curve, f_vn_curve, family_entanglement, psi_e, rate_closed, rate_finite_difference,
    rate_generic, von_neumann_entropy,
};
use entcap::report::random_spec;
use entcap::state::named;
use entcap::{PureState, System};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

/// Applies Pauli `k` (1, 2, 3; 0 = identity) to qubit `q` of an n-qubit amplitude list.
fn pauli_on(amps: &[C64], n: usize, q: usize, k: usize) -> Vec<C64> {
    let shift = n - 1 - q;
    let mut out = vec![c(0.0, 0.0); amps.len()];
    for (i, &a) in amps.iter().enumerate() {
        let bit = (i >> shift) & 1;
        let flipped = i ^ (1 << shift);
        match k {
            0 => out[i] += a,
            1 => out[flipped] += a,
            2 => out[flipped] += a * if bit == 0 { c(0.0, 1.0) } else { c(0.0, -1.0) },
            _ => out[i] += a * if bit == 0 { 1.0 } else { -1.0 },
        }
    }
    out
}

/// `⟨ψ| σ_{k₀} ⊗ σ_{k₁} ⊗ … |ψ⟩`
fn pauli_expectation(amps: &[C64], ks: &[usize]) -> f64 {
    let mut v = amps.to_vec();
    for (q, &k) in ks.iter().enumerate() {
        v = pauli_on(&v, ks.len(), q, k);
    }
    amps.iter().zip(&v).map(|(a, b)| a.conj() * b).sum::<C64>().re
}

fn amps(state: &PureState) -> Vec<C64> {
    state.amplitudes().iter().copied().collect()
}

#[test]
fn two_qubit_bloch_matches_hand_rolled_expectations() {
    for seed in 0..50 {
        let s = random_state(&[2, 2], seed);
        let a = amps(&s);
        let d = TwoQubitBloch::from_state(&s).unwrap();
        for i in 0..3 {
            assert!((d.r[i] - pauli_expectation(&a, &[i + 1, 0])).abs() < 1e-12);
            assert!((d.s[i] - pauli_expectation(&a, &[0, i + 1])).abs() < 1e-12);
            for j in 0..3 {
                assert!((d.t[i][j] - pauli_expectation(&a, &[i + 1, j + 1])).abs() < 1e-12);
            }
        }
    }
}

#[test]
fn three_qubit_bloch_matches_hand_rolled_expectations() {
    let s = random_state(&[2, 2, 2], 5);
    let a = amps(&s);
    let d = ThreeQubitBloch::from_state(&s).unwrap();
    for i in 0..3 {
        for j in 0..3 {
            assert!((d.t_ab[i][j] - pauli_expectation(&a, &[i + 1, j + 1, 0])).abs() < 1e-12);
            assert!((d.t_bc[i][j] - pauli_expectation(&a, &[0, i + 1, j + 1])).abs() < 1e-12);
            assert!((d.t_ac[i][j] - pauli_expectation(&a, &[i + 1, 0, j + 1])).abs() < 1e-12);
            for k in 0..3 {
                assert!((d.tau[i][j][k] - pauli_expectation(&a, &[i + 1, j + 1, k + 1])).abs() < 1e-12);
            }
        }
    }
}

#[test]
fn optimal_family_quarter_entries() {
    let a = amps(&psi_e(0.25).unwrap());
    assert!((pauli_expectation(&a, &[3, 0]) + 0.5).abs() < 1e-12);
    assert!((pauli_expectation(&a, &[0, 3]) - 0.5).abs() < 1e-12);
    assert!((pauli_expectation(&a, &[1, 2]) + 0.8660254037844386).abs() < 1e-12);
    assert!((pauli_expectation(&a, &[2, 1]) - 0.8660254037844386).abs() < 1e-12);
    assert!((pauli_expectation(&a, &[3, 3]) + 1.0).abs() < 1e-12);
}

#[test]
fn conditions_match_direct_expectations() {
    for seed in 0..20 {
        let s = random_state(&[2, 2], 100 + seed);
        let a = amps(&s);
        let (res_r, res_tau) = check_conditions(&TwoQubitBloch::from_state(&s).unwrap());
        let r = (pauli_expectation(&a, &[3, 0]) + pauli_expectation(&a, &[0, 3])).abs();
        let t = (pauli_expectation(&a, &[1, 2]) + pauli_expectation(&a, &[2, 1])).abs();
        assert!((res_r - r).abs() < 1e-12 && (res_tau - t).abs() < 1e-12);
    }
}

#[test]
fn family_marginal_is_diagonal() {
    for p in [0.1, 0.25, 0.4] {
        let rho = partial_trace(&psi_e(p).unwrap().density(), &[2, 2], &[0]).unwrap();
        assert!((rho[(0, 0)].re - p).abs() < 1e-12);
        assert!((rho[(1, 1)].re - (1.0 - p)).abs() < 1e-12);
        assert!(rho[(0, 1)].norm() < 1e-14);
    }
}

#[test]
fn family_norm_formula() {
    for k in 1..100 {
        let p = k as f64 / 100.0;
        let e = bloch::entanglement(&psi_e(p).unwrap()).unwrap();
        assert!((e - family_entanglement(p)).abs() < 1e-12);
    }
}

/// `Det = b² − 4ac` for `det(M₀ + t M₁) = a + b t + c t²`, `M_i` the slices on the first qubit.
fn hyperdeterminant_by_discriminant(s: &PureState) -> C64 {
    let m = |i: usize, j: usize, k: usize| s.amp(4 * i + 2 * j + k);
    let a = m(0, 0, 0) * m(0, 1, 1) - m(0, 0, 1) * m(0, 1, 0);
    let cc = m(1, 0, 0) * m(1, 1, 1) - m(1, 0, 1) * m(1, 1, 0);
    let b = m(0, 0, 0) * m(1, 1, 1) + m(1, 0, 0) * m(0, 1, 1) - m(0, 0, 1) * m(1, 1, 0) - m(1, 0, 1) * m(0, 1, 0);
    b * b - a * cc * 4.0
}

#[test]
fn tangle_matches_discriminant_form() {
    for seed in 0..200 {
        let s = random_state(&[2, 2, 2], seed);
        let t = three_tangle(&s).unwrap();
        assert!((t - 4.0 * hyperdeterminant_by_discriminant(&s).norm()).abs() < 1e-12);
        assert!((-1e-10..=1.0 + 1e-10).contains(&t));
    }
    assert!((4.0 * hyperdeterminant_by_discriminant(&named::ghz()).norm() - 1.0).abs() < 1e-12);
    assert!(hyperdeterminant_by_discriminant(&named::w()).norm() < 1e-14);
}

#[test]
fn closed_forms_agree_with_generic_on_sweeps() {
    for (k, system) in System::ALL.into_iter().enumerate() {
        let mut rng = ChaCha8Rng::seed_from_u64(900 + k as u64);
        let tol = if system == System::TwoQubit { 1e-10 } else { 1e-8 };
        for seed in 0..200 {
            let s = random_state(system.dims(), 10_000 + seed);
            let spec = random_spec(system, &mut rng);
            let g = rate_generic(&s, &spec).unwrap().gamma;
            assert!((rate_closed(&s, &spec).unwrap().gamma - g).abs() < tol, "{system} seed {seed}");
        }
    }
}

#[test]
fn finite_difference_is_second_order() {
    for (k, system) in System::ALL.into_iter().enumerate() {
        let spec = InteractionSpec::isotropic(system, 1.0);
        let s = random_state(system.dims(), 77 + k as u64);
        let g = rate_generic(&s, &spec).unwrap().gamma;
        let e1 = (rate_finite_difference(&s, &spec, 2e-2).unwrap().gamma - g).abs();
        let e2 = (rate_finite_difference(&s, &spec, 1e-2).unwrap().gamma - g).abs();
        let ratio = e1 / e2;
        assert!((3.5..4.5).contains(&ratio), "{system}: ratio {ratio}");
    }
}

#[test]
fn product_and_ghz_rates_vanish() {
    let zero3 = PureState::basis(vec![2, 2, 2], 0).unwrap();
    let iso3 = InteractionSpec::isotropic(System::ThreeQubit, 1.0);
    for s in [zero3, named::ghz()] {
        assert!(rate_generic(&s, &iso3).unwrap().gamma.abs() < 1e-10);
        assert!(rate_closed(&s, &iso3).unwrap().gamma.abs() < 1e-10);
        assert!(rate_finite_difference(&s, &iso3, 1e-5).unwrap().gamma.abs() < 1e-8);
    }
    let zero9 = PureState::basis(vec![3, 3], 0).unwrap();
    let iso9 = InteractionSpec::isotropic(System::TwoQutrit, 1.0);
    let fd = rate_finite_difference(&zero9, &iso9, 1e-5).unwrap().gamma;
    assert!((rate_closed(&zero9, &iso9).unwrap().gamma - fd).abs() < 1e-8);
}

#[test]
fn vn_profile_matches_numerical_derivative_ratio() {
    let h = 1e-6;
    for k in 1..50 {
        let p = k as f64 / 100.0;
        if (p - 0.5).abs() < 0.02 {
            continue;
        }
        let de = (family_entanglement(p + h) - family_entanglement(p - h)) / (2.0 * h);
        let dvn = (von_neumann_entropy(p + h) - von_neumann_entropy(p - h)) / (2.0 * h);
        let want = f_curve(p).unwrap() * dvn / de;
        assert!((f_vn_curve(p).unwrap() - want).abs() < 1e-6, "p = {p}");
    }
}

#[test]
fn golden_section_maxima_agree_with_grid() {
    let grid = |f: &dyn Fn(f64) -> f64| {
        (1..500_000).map(|k| k as f64 / 1e6).map(|p| (p, f(p))).fold((0.0, f64::MIN), |a, b| if b.1 > a.1 { b } else { a })
    };
    let (pt, ft) = capacity_two_qubit_tensor();
    let (gp, gf) = grid(&|p| f_curve(p).unwrap());
    assert!((pt - gp).abs() < 1e-5 && (ft - gf).abs() < 1e-9);
    let (pv, fv) = capacity_two_qubit_vn();
    let (gp, gf) = grid(&|p| f_vn_curve(p).unwrap());
    assert!((pv - gp).abs() < 1e-5 && (fv - gf).abs() < 1e-9);
}
