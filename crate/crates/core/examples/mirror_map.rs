//! Forward and inverse toric mirror maps.
//!
//!     cargo run --release --example mirror_map

use toric_opengw::fixtures;
use toric_opengw::lattice::CurveLattice;
use toric_opengw::mirror::{pullback_g0, GZeroFamily, MirrorMapPair};
use toric_opengw::series::{MultiSeries, TruncationBox};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for (data, cap) in [(fixtures::f2(), 5), (fixtures::kp2_blowup(), 3)] {
        let lattice = CurveLattice::new(&data.fan, data.basis.clone())?;
        let l = lattice.rank();
        let bx = TruncationBox::uniform(l, cap);
        let g0 = GZeroFamily::compute(&data.fan, &lattice, &bx)?;
        let mm = MirrorMapPair::assemble(&g0, &lattice)?;
        let q = MultiSeries::default_names(l);
        let qh: Vec<String> = (1..=l).map(|a| format!("qhat{a}")).collect();
        println!("{} at box {bx}", data.name());
        for (a, u) in mm.q_of_qhat.exponents().iter().enumerate() {
            println!("  q{0} = qhat{0} exp({1})", a + 1, u.render(&qh));
        }
        for (a, w) in mm.qhat_of_q.exponents().iter().enumerate() {
            println!("  qhat{0} = q{0} exp({1})", a + 1, w.render(&q));
        }
        println!("  round trip: {}", mm.round_trip_holds()?);
        for (i, s) in pullback_g0(&g0, &mm)?.iter().enumerate() {
            if !s.is_zero() {
                println!("  g0_{}(qhat(q)) = {}", i + 1, s.render(&q));
            }
        }
        println!();
    }
    Ok(())
}
