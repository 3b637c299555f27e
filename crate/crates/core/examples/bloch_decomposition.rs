//! Bloch data and the tensor-norm entanglement measure for standard states.

use entcap::bloch::{decompose, BlochDecomposition};
use entcap::linalg::random_state;
use entcap::state::named;
use entcap::Result;

fn main() -> Result<()> {
    let states = [
        ("bell", named::bell_phi_plus()),
        ("singlet", named::singlet()),
        ("qutrit max", named::qutrit_max_entangled()),
        ("GHZ", named::ghz()),
        ("W", named::w()),
        ("random 3x3", random_state(&[3, 3], 7)),
    ];
    for (name, state) in &states {
        let d = decompose(state)?;
        println!("{name:>11}  {}  ‖T‖ = {:.6}  E = {:.6}", d.system(), d.tensor_norm(), d.entanglement()?);
    }

    if let BlochDecomposition::TwoQubit(d) = decompose(&named::singlet())? {
        println!("\nsinglet correlation matrix:");
        for row in d.t {
            println!("  {:>5.2} {:>5.2} {:>5.2}", row[0], row[1], row[2]);
        }
    }

    // The density matrix is rebuilt from the Bloch data alone.
    let w = named::w();
    let back = decompose(&w)?.reconstruct_density();
    println!("\nW reconstruction error: {:.2e}", (back - w.density()).camax());
    Ok(())
}
