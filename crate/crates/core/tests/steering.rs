use entcap::bloch;
use entcap::error::Error;
use entcap::hamiltonian::InteractionSpec;
use entcap::linalg::{schmidt_decompose, HermitianEigen};
use entcap::protocol::{free_evolution_trace, steer, StopReason};
use entcap::rates::{family_entanglement, psi_e};

fn xy() -> InteractionSpec {
    InteractionSpec::two_qubit([1.0, 1.0, 0.0]).unwrap()
}

const E_MAX: f64 = 0.7320508075688772;

#[test]
fn residuals_and_monotone_growth() {
    let traj = steer(&xy(), 0.01, 1e-4, 2.0).unwrap();
    assert_eq!(traj.stop, StopReason::MaximallyEntangled);
    for pt in &traj.points {
        assert!(pt.residual_r <= 1e-10 && pt.residual_tau <= 1e-10);
        assert!((pt.entanglement - family_entanglement(pt.p)).abs() < 1e-8);
    }
    for w in traj.points.windows(2) {
        assert!(w[1].p >= w[0].p);
        assert!(w[1].entanglement >= w[0].entanglement);
        assert!(((w[1].t - w[0].t) - 1e-4).abs() < 1e-12);
    }
    assert!((traj.last().entanglement - E_MAX).abs() < 1e-4);
}

#[test]
fn reset_preserves_entanglement() {
    let spec = InteractionSpec::two_qubit([1.0, 0.4, 0.1]).unwrap();
    let u = HermitianEigen::new(&spec.build_matrix()).unwrap().propagator(1e-3);
    let mut p = 0.02;
    for _ in 0..200 {
        let evolved = psi_e(p).unwrap().apply(&u).unwrap();
        p = schmidt_decompose(&evolved).unwrap().minor_weight();
        let reset = psi_e(p).unwrap();
        let gap = bloch::entanglement(&evolved).unwrap() - bloch::entanglement(&reset).unwrap();
        assert!(gap.abs() <= 1e-9);
    }
}

fn max_rate_deviation(spec: &InteractionSpec, dt: f64) -> f64 {
    let traj = steer(spec, 0.05, dt, 0.1).unwrap();
    traj.points
        .windows(2)
        .map(|w| ((w[1].entanglement - w[0].entanglement) / dt - w[0].gamma).abs())
        .fold(0.0, f64::max)
}

#[test]
fn step_gain_converges_at_first_order() {
    let spec = InteractionSpec::two_qubit([1.0, 0.6, 0.3]).unwrap();
    let coarse = max_rate_deviation(&spec, 2e-4);
    let fine = max_rate_deviation(&spec, 1e-4);
    let ratio = coarse / fine;
    assert!((1.6..2.4).contains(&ratio), "ratio {ratio}");
    assert!(fine <= 1e-3);
}

#[test]
fn steering_is_never_slower_than_free_evolution() {
    for mu in [[1.0, 1.0, 0.0], [1.0, 0.5, 0.2], [1.0, 0.2, 0.2]] {
        let spec = InteractionSpec::two_qubit(mu).unwrap();
        let target = E_MAX - 1e-4;
        let steered = steer(&spec, 0.01, 1e-4, 5.0).unwrap().first_passage(target).unwrap();
        let free = free_evolution_trace(&psi_e(0.01).unwrap(), &spec, 1e-4, 5.0).unwrap();
        if let Some(t_free) = free.iter().find(|pt| pt.entanglement >= target).map(|pt| pt.t) {
            assert!(steered <= t_free + 1e-12, "{mu:?}: steered {steered} free {t_free}");
        }
    }
}

#[test]
fn free_trace_is_reproducible() {
    let s = psi_e(0.2).unwrap();
    let spec = InteractionSpec::two_qubit([1.0, 0.3, 0.1]).unwrap();
    let a = free_evolution_trace(&s, &spec, 1e-3, 1.0).unwrap();
    let b = free_evolution_trace(&s, &spec, 1e-3, 1.0).unwrap();
    assert_eq!(a, b);
}

#[test]
fn step_bound_is_enforced() {
    let spec = xy();
    let limit = 0.01 * spec.timescale().unwrap();
    assert!(steer(&spec, 0.1, limit, 0.1).is_ok());
    match steer(&spec, 0.1, limit * 1.01, 0.1) {
        Err(Error::StepTooLarge { limit: l, .. }) => assert!((l - limit).abs() < 1e-15),
        other => panic!("{other:?}"),
    }
}
