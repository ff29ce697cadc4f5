//! Admissible classes on toric surfaces against the mirror computation.
//!
//!     cargo run --release --example surface_oracle

use toric_opengw::fixtures;
use toric_opengw::lattice::CurveLattice;
use toric_opengw::opengw::Computation;
use toric_opengw::series::TruncationBox;
use toric_opengw::surface::{admissible_patterns, cross_validate_surface, divisors, surface_admissible_delta};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let a2 = fixtures::a2_chain();
    let divs = divisors(&a2.fan)?;
    for d in &divs {
        println!("D{}^2 = {}", d.ray + 1, d.self_intersection);
    }
    for p in admissible_patterns(&divs, 4, 3) {
        let chain: Vec<usize> = p.chain.iter().map(|r| r + 1).collect();
        println!("ray 5: chain {chain:?} s = {:?} class {}", p.s, p.class(&divs));
    }

    let lattice = CurveLattice::new(&a2.fan, None)?;
    let bx = TruncationBox::uniform(lattice.rank(), 4);
    for i in 0..a2.fan.num_rays() {
        println!(
            "delta_{} = {}",
            i + 1,
            surface_admissible_delta(&a2.fan, &lattice, i, &bx)?
        );
    }
    let c = Computation::new(&a2.fan, lattice, &bx)?;
    println!("{}", cross_validate_surface(&a2.fan, &c.lattice, &c.deltas, &bx)?);
    Ok(())
}
