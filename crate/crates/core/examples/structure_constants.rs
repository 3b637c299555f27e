//! SU(3) structure constants from the Gell-Mann matrices.

use entcap::generators::{jacobi_residual, su3_constants, verify_product_identity, GeneratorSet};
use entcap::Result;

fn main() -> Result<()> {
    let gm = GeneratorSet::gell_mann();
    let sc = su3_constants();

    println!("nonzero f_ijk (i<j<k):");
    for i in 0..8 {
        for j in i + 1..8 {
            for k in j + 1..8 {
                let f = sc.f.get(i, j, k);
                if f != 0.0 {
                    println!("  f{}{}{} = {f:+.6}", i + 1, j + 1, k + 1);
                }
            }
        }
    }
    println!("nonzero g_ijk (i<=j<=k):");
    for i in 0..8 {
        for j in i..8 {
            for k in j..8 {
                let g = sc.g.get(i, j, k);
                if g != 0.0 {
                    println!("  g{}{}{} = {g:+.6}", i + 1, j + 1, k + 1);
                }
            }
        }
    }

    println!("orthonormality residual {:.1e}", gm.orthonormality_residual());
    println!("product identity residual {:.1e}", verify_product_identity(&gm, sc)?);
    println!("Jacobi residual {:.1e}", jacobi_residual(sc));
    Ok(())
}
