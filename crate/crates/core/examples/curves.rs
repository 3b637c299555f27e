//! Rate profiles along the two-qubit optimal family, written as CSV.
//!
//! `cargo run --example curves > profile.csv`

use entcap::capacity::{capacity_two_qubit_tensor, capacity_two_qubit_vn};
use entcap::rates::{f_curve, f_vn_curve};
use entcap::report::to_csv;
use entcap::Result;

fn main() -> Result<()> {
    let n = 199;
    let rows = (1..=n)
        .map(|k| {
            let p = k as f64 / (n + 1) as f64;
            Ok(vec![p, f_curve(p)?, f_vn_curve(p)?])
        })
        .collect::<Result<Vec<_>>>()?;
    print!("{}", to_csv(&["p", "f_tensor", "f_vn"], rows));

    let (pt, ft) = capacity_two_qubit_tensor();
    let (pv, fv) = capacity_two_qubit_vn();
    eprintln!("tensor measure: max f = {ft:.7} at p = {pt:.7}");
    eprintln!("von Neumann:    max f = {fv:.7} at p = {pv:.7}");
    Ok(())
}
