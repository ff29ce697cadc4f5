//! Exact truncated power series and diagonal unit maps.
//!
//!     cargo run --example series_algebra

use num_rational::BigRational;
use toric_opengw::series::{DiagonalUnitMap, MultiSeries, TruncationBox};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let bx = TruncationBox::new(vec![4, 2]);
    let q1 = MultiSeries::var(&bx, 0);
    let q2 = MultiSeries::var(&bx, 1);
    let s = q1
        .add(&q1.mul(&q2)?)?
        .sub(&q2.scale(&BigRational::new(1.into(), 2.into())))?;
    println!("s          = {s}");
    println!("exp(s)     = {}", s.exp()?);
    println!("log exp(s) = {}", s.exp()?.log()?);
    let one_plus = MultiSeries::one(&bx).add(&q1)?;
    println!("(1+q1)^-3  = {}", one_plus.powi(-3)?);

    // q1 -> q1 exp(-2 q1), q2 -> q2 exp(q1), and its inverse.
    let m = DiagonalUnitMap::new(&bx, vec![q1.scale(&BigRational::from_integer((-2).into())), q1.clone()])?;
    let inv = m.invert()?;
    let names = MultiSeries::default_names(2);
    for (a, w) in inv.render(&names).iter().enumerate() {
        println!("inverse u{} = {w}", a + 1);
    }
    println!("round trip identity: {}", m.after(&inv)?.is_identity());
    println!("s(m(q)) = {}", s.substitute(&m)?);
    Ok(())
}
