//! Tripod dark pair: two loops through the same point give U(2)
//! holonomies that do not commute, and running a loop backwards undoes it.

use hkit::matlib::{commutator, identity, max_abs, max_abs_diff, unitary_eigenphases};
use hkit::models::tripod::{demo_loops, tripod_holonomy, TripodOptions};

/// Commutator size of the two loop holonomies.
pub fn run_example() -> hkit::Result<f64> {
    let opts = TripodOptions::default();
    let (l1, l2) = demo_loops();
    let h1 = tripod_holonomy(&l1, &opts)?;
    let h2 = tripod_holonomy(&l2, &opts)?;
    println!("loop 1: period {:.1}, dark phases {:?}", h1.period, unitary_eigenphases(&h1.dark)?);
    println!("loop 2: period {:.1}, dark phases {:?}", h2.period, unitary_eigenphases(&h2.dark)?);
    let comm = max_abs(&commutator(&h1.dark, &h2.dark));
    let back = tripod_holonomy(&l1.reversed(), &opts)?;
    println!("max |[U1, U2]| = {comm:.4}");
    println!("reverse * forward - 1 = {:.1e}", max_abs_diff(&(&back.dark * &h1.dark), &identity(2)));
    Ok(comm)
}

fn main() -> hkit::Result<()> {
    run_example()?;
    Ok(())
}
