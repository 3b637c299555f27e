//! Two-qubit capacities: the optimizer against the one-parameter profile.

use entcap::capacity::{capacity_two_qubit_tensor, maximize_rate, OptimizationConfig};
use entcap::hamiltonian::InteractionSpec;
use entcap::linalg::schmidt_decompose;
use entcap::Result;

fn main() -> Result<()> {
    let (p_star, f_max) = capacity_two_qubit_tensor();
    println!("profile maximum f = {f_max:.9} at p = {p_star:.9}");

    let config = OptimizationConfig { restarts: 16, ..OptimizationConfig::default() };
    for mu in [[1.0, 1.0, 1.0], [1.0, 1.0, 0.0], [1.0, 0.5, 0.5], [1.0, 0.3, 0.0]] {
        let spec = InteractionSpec::two_qubit(mu)?;
        let res = maximize_rate(&spec, &config)?;
        let p = schmidt_decompose(&res.best_state)?.minor_weight();
        println!(
            "μ = {mu:?}: Γmax = {:.9}, (μ1+μ2)·f = {:.9}, p = {p:.6}, E = {:.6}",
            res.gamma_max,
            (mu[0] + mu[1]) * f_max,
            res.entanglement_of_optimum
        );
    }
    Ok(())
}
