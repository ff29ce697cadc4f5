//! Every consistency report on every bundled fixture.
//!
//!     cargo run --release --example consistency_checks

use toric_opengw::fixtures;
use toric_opengw::lattice::CurveLattice;
use toric_opengw::opengw::{check_multiplicative_consistency, check_pf_equals_lf, check_structure, Computation};
use toric_opengw::series::TruncationBox;
use toric_opengw::surface::cross_validate_surface;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for (name, data) in fixtures::semi_fano() {
        let lattice = CurveLattice::new(&data.fan, data.basis.clone())?;
        let bx = TruncationBox::uniform(lattice.rank(), 3);
        let c = Computation::new(&data.fan, lattice, &bx)?;
        let w = c.superpotentials(&data.fan, data.default_cone.unwrap_or(0))?;
        println!("{name}");
        println!("  mirror round trip: {}", c.mirror.round_trip_holds()?);
        println!("  {}", check_pf_equals_lf(&w.pf, &w.lf));
        println!(
            "  {}",
            check_multiplicative_consistency(&c.deltas, &c.mirror, &c.lattice)?
        );
        println!("  {}", check_structure(&data.fan, &c.lattice, &c.deltas));
        if data.fan.dimension() == 2 {
            println!("  {}", cross_validate_surface(&data.fan, &c.lattice, &c.deltas, &bx)?);
        }
    }
    Ok(())
}
