//! Open invariants of the twice blown-up P(K_P2 + O), rays 1 and 2.
//!
//!     cargo run --release --example invariant_tables

use toric_opengw::fixtures;
use toric_opengw::lattice::CurveLattice;
use toric_opengw::opengw::{Computation, IntegralityMode};
use toric_opengw::series::TruncationBox;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let data = fixtures::kp2_blowup();
    let lattice = CurveLattice::new(&data.fan, data.basis.clone())?;
    let bx = TruncationBox::new(vec![7, 7, 7, 7]);
    let c = Computation::new(&data.fan, lattice, &bx)?;

    for ray in [0, 1] {
        let table = c.table(ray, IntegralityMode::Strict)?;
        println!("n(beta_{} + k1 Psi_1 + k2 Psi_2)", ray + 1);
        print!("{}", table.to_tsv(Some(&[0, 1])));
        println!();
    }
    println!("delta_4 = {}", c.deltas[3].delta);
    Ok(())
}
