// Strictly positive quadratics are not Archimedean: 1 + n t² stays
// positive for every n, but t² is not strictly positive.

use ovskit::corpus::{falsify, poly_nonneg_cone_deg2, poly_pos_cone_deg2, Property};

pub fn run_example() -> ovskit::Result<()> {
    let k = poly_pos_cone_deg2();
    let r = falsify(&k, &Property::Archimedean, 100, 0).expect("seeded witness");
    println!("coefficients (a, b, c) of a t² + b t + c");
    println!("refutation: {r}");
    let neg_y: Vec<_> = r.y.iter().map(|c| -c).collect();
    println!("t² strictly positive: {}", k.contains(&neg_y));
    println!("t² nonnegative: {}", poly_nonneg_cone_deg2().contains(&neg_y));
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().expect("example runs");
}
