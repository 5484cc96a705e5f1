// Two pointed cones in the plane that still contain every translate
// x - n y of a nonzero y, so neither is almost Archimedean.

use ovskit::corpus::{half_open_cone, lex_cone, open_orthant_cone};
use ovskit::linarith::int;

pub fn run_example() -> ovskit::Result<()> {
    for (name, v) in [("K1", half_open_cone(2)), ("K2", lex_cone(2))] {
        println!("{name}: {}", v.positive());
        println!("  cone: {}", v.is_cone()?);
        let a = v.almost_archimedean_verdict()?;
        println!("  almost Archimedean: {}", a.holds);
        if let Some(w) = &a.witness {
            println!("  x - n y positive for every integer n: {w}");
        }
    }

    // Strictly positive functions on three points.
    let g = open_orthant_cone(3);
    println!("open orthant: almost {} / Archimedean {}", g.is_almost_archimedean()?, g.is_archimedean()?);
    let v = g.archimedean_verdict()?;
    println!("  witness: {}", v.witness.unwrap());
    println!("  (1,1,1) order unit: {}", g.is_order_unit(&[int(1), int(1), int(1)])?);
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().expect("example runs");
}
