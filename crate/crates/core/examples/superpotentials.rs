//! Hori-Vafa, Lagrangian Floer and Picard-Fuchs superpotentials.
//!
//!     cargo run --release --example superpotentials

use toric_opengw::fixtures;
use toric_opengw::lattice::CurveLattice;
use toric_opengw::opengw::{check_pf_equals_lf, Computation, RenderOptions, ZCoords};
use toric_opengw::series::TruncationBox;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let f2 = fixtures::f2();
    let lattice = CurveLattice::new(&f2.fan, f2.basis.clone())?;
    let c = Computation::new(&f2.fan, lattice, &TruncationBox::new(vec![5, 5]))?;
    let opts = RenderOptions::new(2);
    for sigma in 0..f2.fan.cones().len() {
        let w = c.superpotentials(&f2.fan, sigma)?;
        println!(
            "F2, cone {:?}",
            f2.fan.cone(sigma)?.iter().map(|r| r + 1).collect::<Vec<_>>()
        );
        for e in [&w.hv, &w.lf_raw, &w.lf, &w.pf] {
            println!("  {} = {}", e.kind, e.render(&opts));
        }
        println!("  {}", check_pf_equals_lf(&w.pf, &w.lf));
    }

    let data = fixtures::kp2_blowup();
    let lattice = CurveLattice::new(&data.fan, data.basis.clone())?;
    let c = Computation::new(&data.fan, lattice, &TruncationBox::uniform(4, 3))?;
    let w = c.superpotentials(&data.fan, data.default_cone.unwrap_or(0))?;
    let opts = RenderOptions {
        display_monomials: data.display_monomials.clone(),
        z: ZCoords::Ambient,
        ..RenderOptions::new(4)
    };
    println!("\n{}", data.name());
    println!("  {} = {}", w.hv.kind, w.hv.render(&opts));
    println!("  {} = {}", w.pf.kind, w.pf.render(&opts));
    println!("  {}", check_pf_equals_lf(&w.pf, &w.lf));
    Ok(())
}
