//! Reading a fan from JSON and running the pipeline through the CLI layer.
//!
//!     cargo run --example custom_input

use toric_opengw::cli::{run, Command, Format, JobConfig};
use toric_opengw::input::parse_input;
use toric_opengw::lattice::CurveLattice;
use toric_opengw::opengw::{Computation, IntegralityMode};
use toric_opengw::series::TruncationBox;

const F1_BLOWN_UP: &str = r#"{
  "name": "P2 blown up at two points",
  "dimension": 2,
  "rays": [[1, 0], [1, 1], [0, 1], [-1, 0], [-1, -1]],
  "max_cones": [[1, 2], [2, 3], [3, 4], [4, 5], [5, 1]]
}"#;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let data = parse_input(F1_BLOWN_UP)?;
    println!("{}: semi-Fano = {}", data.name(), data.fan.is_semi_fano().holds);
    let lattice = CurveLattice::new(&data.fan, None)?;
    let c = Computation::new(&data.fan, lattice, &TruncationBox::uniform(3, 3))?;
    for d in &c.deltas {
        let t = c.table(d.ray, IntegralityMode::Strict)?;
        println!(
            "ray {}: delta = {}, {} table entries",
            d.ray + 1,
            d.delta,
            t.entries().len()
        );
    }

    let path = std::env::temp_dir().join("custom_input_example.json");
    std::fs::write(&path, F1_BLOWN_UP)?;
    let mut job = JobConfig::new(Command::Check, path.to_str().unwrap());
    job.format = Format::Text;
    let out = run(&job);
    print!("{}", out.output);
    println!("exit code {}", out.exit_code);
    Ok(())
}
