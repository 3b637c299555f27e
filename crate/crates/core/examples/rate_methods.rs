//! The three rate routes (generic, closed form, finite difference) side by side.

use entcap::hamiltonian::InteractionSpec;
use entcap::linalg::random_state;
use entcap::rates::{rate_closed, rate_finite_difference, rate_generic, DEFAULT_DT};
use entcap::{Result, System};

fn main() -> Result<()> {
    let specs = [
        InteractionSpec::two_qubit([1.0, 0.4, -0.3])?,
        InteractionSpec::two_qutrit([1.0, 0.9, 0.5, 0.2, 0.0, -0.1, -0.6, -0.8])?,
        InteractionSpec::three_qubit([1.0, 0.5, 0.0], [0.8, 0.8, -0.2], [0.3, 0.1, 0.1])?,
    ];
    println!("{:>6} {:>14} {:>14} {:>14}", "shape", "generic", "closed", "fd");
    for (k, spec) in specs.iter().enumerate() {
        let state = random_state(spec.system().dims(), 11 + k as u64);
        let g = rate_generic(&state, spec)?;
        let c = rate_closed(&state, spec)?;
        let f = rate_finite_difference(&state, spec, DEFAULT_DT)?;
        println!("{:>6} {:>14.10} {:>14.10} {:>14.10}", spec.system().label(), g.gamma, c.gamma, f.gamma);
        for (label, v) in &g.breakdown {
            if v.abs() > 0.0 {
                println!("{:>22} {v:+.8}", label);
            }
        }
    }

    // Γ is linear in the couplings.
    let spec = InteractionSpec::isotropic(System::ThreeQubit, 1.0);
    let state = random_state(&[2, 2, 2], 3);
    let one = rate_generic(&state, &spec)?.gamma;
    let two = rate_generic(&state, &spec.scaled(2.5))?.gamma;
    println!("\nscaling couplings by 2.5 scales Γ by {:.12}", two / one);
    Ok(())
}
