//! Steered evolution against free evolution for an XY interaction.

use entcap::hamiltonian::InteractionSpec;
use entcap::protocol::{free_evolution_trace, steer};
use entcap::rates::psi_e;
use entcap::Result;

fn main() -> Result<()> {
    let spec = InteractionSpec::two_qubit([1.0, 1.0, 0.0])?;
    let (p0, dt, t_end) = (0.01, 1e-4, 2.0);
    let traj = steer(&spec, p0, dt, t_end)?;
    let target = 3f64.sqrt() - 1.0 - 1e-6;

    for pt in traj.points.iter().step_by(500) {
        println!("t = {:.4}  p = {:.6}  E = {:.6}  Γ = {:.6}", pt.t, pt.p, pt.entanglement, pt.gamma);
    }
    println!("stop: {:?} at t = {:.4}", traj.stop, traj.last().t);

    let free = free_evolution_trace(&psi_e(p0)?, &spec, dt, t_end)?;
    let free_hit = free.iter().find(|pt| pt.entanglement >= target).map(|pt| pt.t);
    println!("first passage near E = √3−1: steered {:?}, free {:?}", traj.first_passage(target), free_hit);

    let weaker = InteractionSpec::two_qubit([1.0, 0.2, 0.2])?;
    let s = steer(&weaker, p0, dt, t_end)?;
    let f = free_evolution_trace(&psi_e(p0)?, &weaker, dt, t_end)?;
    let f_max = f.iter().map(|pt| pt.entanglement).fold(0.0, f64::max);
    println!("μ = (1, 0.2, 0.2): steered E(t_end) = {:.6}, free max E = {:.6}", s.last().entanglement, f_max);
    Ok(())
}
