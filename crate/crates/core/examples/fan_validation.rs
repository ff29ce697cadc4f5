//! Smoothness, completeness, the semi-Fano test and fan polytope vertices.
//!
//!     cargo run --example fan_validation

use toric_opengw::fan::Fan;
use toric_opengw::fixtures;

fn main() {
    for (name, data) in fixtures::all() {
        let fan = &data.fan;
        let report = fan.validate();
        let sf = fan.is_semi_fano();
        let vertices: Vec<usize> = fan.fan_polytope_vertices().iter().map(|v| v + 1).collect();
        print!(
            "{name:24} valid={} semi-Fano={} vertices={vertices:?}",
            report.is_ok(),
            sf.holds
        );
        if let Some(w) = sf.witness {
            print!("  witness {w}, c1 = {}", w.c1());
        }
        println!();
    }

    // A cone that is not unimodular and a fan with a missing cone.
    let singular = Fan::new(
        2,
        vec![vec![1, 0], vec![1, 2], vec![-1, -1]],
        vec![vec![0, 1], vec![1, 2], vec![2, 0]],
    );
    println!("\nsingular:\n{}", singular.validate());
    let incomplete = Fan::new(
        2,
        vec![vec![1, 0], vec![0, 1], vec![-1, -1]],
        vec![vec![0, 1], vec![1, 2]],
    );
    println!("\nincomplete:\n{}", incomplete.validate());
}
