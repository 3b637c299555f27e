//! Isotropic three-qubit capacity with tangle-based classification.

use entcap::capacity::{classify_three_qubit, maximize_rate, marginal_purities, three_tangle, OptimizationConfig};
use entcap::hamiltonian::InteractionSpec;
use entcap::state::named;
use entcap::{Result, System};

fn main() -> Result<()> {
    for (name, s) in [("GHZ", named::ghz()), ("W", named::w())] {
        println!("{name}: tangle {:.6}, class {}", three_tangle(&s)?, classify_three_qubit(&s)?.label());
    }

    let res = maximize_rate(&InteractionSpec::isotropic(System::ThreeQubit, 1.0), &OptimizationConfig::default())?;
    println!("\nΓmax = {:.6}", res.gamma_max);
    println!("E(optimum) = {:.6}", res.entanglement_of_optimum);
    println!("three-tangle = {:.3e}", res.three_tangle.unwrap_or(f64::NAN));
    println!("marginal purities = {:?}", marginal_purities(&res.best_state)?);
    println!("class = {}", res.classification.map_or("-", |c| c.label()));
    for (i, a) in res.best_state.amplitudes().iter().enumerate() {
        println!("  |{:03b}⟩ {:+.6} {:+.6}i", i, a.re, a.im);
    }
    Ok(())
}
