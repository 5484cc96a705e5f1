// Suprema and the Riesz property in small dimension.

use ovskit::corpus::{closed_orthant, generated_wedge, open_orthant_cone};
use ovskit::linalg::format_vector;
use ovskit::linarith::int;

pub fn run_example() -> ovskit::Result<()> {
    let q = closed_orthant(2);
    let s = q.exists_sup(&[int(1), int(-2)], &[int(-1), int(3)])?.expect("lattice");
    println!("sup in the quadrant: {}", format_vector(&s));

    let wide = generated_wedge(3, &[
        vec![int(1), int(0), int(1)],
        vec![int(0), int(1), int(1)],
        vec![int(-1), int(0), int(1)],
        vec![int(0), int(-1), int(1)],
    ])?;
    let v = wide.riesz_verdict()?;
    println!("square-based cone is Riesz: {}", v.holds);
    if let Some(w) = v.witness {
        println!("  no least upper bound: {w}");
    }
    println!("open orthant is Riesz: {}", open_orthant_cone(2).is_riesz()?);
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().expect("example runs");
}
