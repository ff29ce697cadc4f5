//! Classes contributing to g0 and the resulting series.
//!
//!     cargo run --release --example g0_enumeration

use toric_opengw::fixtures;
use toric_opengw::lattice::CurveLattice;
use toric_opengw::mirror::{enumerate_g0_classes, GZeroFamily};
use toric_opengw::series::{MultiSeries, TruncationBox};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let f2 = fixtures::f2();
    let lattice = CurveLattice::new(&f2.fan, f2.basis.clone())?;
    let bx = TruncationBox::new(vec![4, 4]);
    for c in enumerate_g0_classes(&f2.fan, &lattice, 3, &bx)? {
        println!("F2 ray 4: class {} exponent {:?}", c.class, c.exponent);
    }
    let g0 = GZeroFamily::compute(&f2.fan, &lattice, &bx)?;
    println!("g0_4 = {}\n", g0.get(3));

    let data = fixtures::kp2_blowup();
    let lattice = CurveLattice::new(&data.fan, data.basis.clone())?;
    let bx = TruncationBox::uniform(4, 6);
    let g0 = GZeroFamily::compute(&data.fan, &lattice, &bx)?;
    let names: Vec<String> = (1..=4).map(|a| format!("qhat{a}")).collect();
    for i in 0..data.fan.num_rays() {
        let s: &MultiSeries = g0.get(i);
        println!("{}: g0_{} = {}", data.name(), i + 1, s.render(&names));
    }
    Ok(())
}
