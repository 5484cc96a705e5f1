// Linear arithmetic over the rationals: decide sentences, extract witnesses
// and eliminate quantifiers.

use std::collections::BTreeSet;

use ovskit::linarith::{parse_formula, Var};
use ovskit::qe::{self, Budget, PrenexFormula};

pub fn run_example() -> ovskit::Result<()> {
    let b = Budget::default();
    let (x, y) = (Var(0), Var(1));

    // Any two rationals are comparable.
    let total = PrenexFormula::forall(
        vec![x, y],
        parse_formula("x1 >= x2 or x1 < x2")?,
    );
    println!("trichotomy holds: {}", qe::decide(&total, &b)?);

    let s = PrenexFormula::exists(vec![x, y], parse_formula("x1 + x2 = 3 and x1 - x2 > 1 and x2 > 0")?);
    let w = qe::find_witness(&s, &b)?.expect("satisfiable");
    println!("witness: x1 = {}, x2 = {}", w.assignment[&x], w.assignment[&y]);

    // Project the strip 0 < x2 < x1 onto the first axis.
    let f = parse_formula("x2 > 0 and x1 - x2 > 0")?;
    let shadow = qe::eliminate_exists(&f, &BTreeSet::from([y]), &b)?;
    println!("exists x2: {shadow}");
    assert_eq!(shadow.to_string(), "x1 > 0");
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().expect("example runs");
}
