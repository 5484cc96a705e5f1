// Infinitesimals, the D-wedge and the uniform closure of zero.

use ovskit::corpus::{lex_cone, lex_pair_product};
use ovskit::ovskit::SemilinearSet;

pub fn run_example() -> ovskit::Result<()> {
    let k = lex_cone(2);
    let (n, basis) = k.infinitesimals()?;
    println!("N = {n}, basis {basis}");
    let d = k.d_wedge()?;
    println!("D = {d}");
    let closure = k.uniform_closure(&SemilinearSet::origin(2))?;
    println!("closure of zero = {closure}");
    assert!(closure.equivalent(&n, k.budget())?);

    let p = lex_pair_product(2);
    let (n, basis) = p.infinitesimals()?;
    println!("pairs: N = {n}, dim {}", basis.dim());
    println!("pairs: D = {}", p.d_wedge()?);
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().expect("example runs");
}
