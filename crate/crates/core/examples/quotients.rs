// Quotients by order ideals under two different complements.

use ovskit::corpus::lex_pair_product;
use ovskit::linarith::int;
use ovskit::ovskit::Subspace;

pub fn run_example() -> ovskit::Result<()> {
    let v = lex_pair_product(2);
    let n = Subspace::from_spanning(4, &[vec![int(0), int(1), int(0), int(0)], vec![int(0), int(0), int(0), int(1)]]);
    println!("order ideal: {}", v.is_order_ideal(&n.to_set())?);
    let (q, p) = v.quotient(&n)?;
    println!("projection {}: {}", p.projection, q.positive());

    let complement = vec![vec![int(1), int(0), int(1), int(0)], vec![int(0), int(0), int(1), int(0)]];
    let (q2, p2) = v.quotient_with_complement(&n, complement)?;
    println!("projection {}: {}", p2.projection, q2.positive());

    // Not every subspace is an ideal.
    let line = Subspace::from_spanning(4, &[vec![int(1), int(0), int(0), int(0)]]);
    println!("x1-axis is an order ideal: {}", v.is_order_ideal(&line.to_set())?);
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().expect("example runs");
}
