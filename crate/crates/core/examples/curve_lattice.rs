//! Wall relations, the curve lattice and nef bases on the Hirzebruch surface F2.
//!
//!     cargo run --example curve_lattice

use toric_opengw::fixtures;
use toric_opengw::lattice::CurveLattice;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let f2 = fixtures::f2();
    for w in f2.fan.walls() {
        let rays: Vec<usize> = w.rays.iter().map(|r| r + 1).collect();
        println!("wall {rays:?} opposite ({}, {})", w.opposite.0 + 1, w.opposite.1 + 1);
    }
    for d in f2.fan.distinct_wall_classes() {
        println!("wall class {d}  c1 = {}", d.c1());
    }

    let lattice = CurveLattice::new(&f2.fan, f2.basis.clone())?;
    println!("\nbasis ({:?}):", lattice.origin());
    for (a, b) in lattice.basis().iter().enumerate() {
        println!("  Psi{} = {b}", a + 1);
    }
    for i in 0..f2.fan.num_rays() {
        println!("  D{} . Psi = {:?}", i + 1, lattice.divisor_row(i));
    }
    println!("coordinates of (1,2,1,0): {:?}", lattice.coordinates(&[1, 2, 1, 0])?);

    // No basis supplied: one is searched for.
    let found = CurveLattice::new(&f2.fan, None)?;
    let basis: Vec<String> = found.basis().iter().map(|b| b.to_string()).collect();
    println!("\ndefault basis: {}, nef = {}", basis.join(", "), found.is_nef());

    // A valid lattice basis that is not nef.
    let skew = CurveLattice::new(&f2.fan, Some(vec![vec![1, 1, 1, -1], vec![0, 1, 0, 1]]))?;
    println!("skewed basis nef = {}", skew.is_nef());
    if let Err(e) = skew.require_nef() {
        println!("  {e}");
    }

    // The a2-chain surface has more Mori generators than its rank.
    let a2 = fixtures::a2_chain();
    let lattice = CurveLattice::new(&a2.fan, None)?;
    println!("\n{}: rank {}, {:?}", a2.name(), lattice.rank(), lattice.origin());
    for b in lattice.basis() {
        println!("  {b}");
    }
    Ok(())
}
