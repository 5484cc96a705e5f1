// Archimedeanization and factoring a positive map through it.

use ovskit::archkit::{archimedeanize, factor_through, order_isomorphic, IsoSearch};
use ovskit::corpus::{closed_orthant, lex_cone, lex_pair_product};
use ovskit::linalg::Matrix;
use ovskit::ovskit::LinearMap;

pub fn run_example() -> ovskit::Result<()> {
    let r = archimedeanize(&lex_cone(2))?;
    println!("depth {}", r.stabilization_depth);
    for s in &r.steps {
        println!("  step {}: ideal {}, projection {}", s.index, s.ideal, s.map.projection);
    }
    println!("final: {}", r.final_space.positive());

    // φ(x) = (x1, 2 x1) is positive into the closed quadrant and kills x2.
    let phi = LinearMap::new(Matrix::from_i64(&[&[1, 0], &[2, 0]]));
    let tilde = factor_through(&r, &phi, &closed_orthant(2))?;
    println!("factor: {tilde}");

    let r3 = archimedeanize(&lex_pair_product(3))?;
    println!("three pairs collapse to {}", r3.final_space.positive());
    match order_isomorphic(&r3.final_space, &closed_orthant(3))? {
        IsoSearch::Found(t) => println!("isomorphic to the orthant via {t}"),
        IsoSearch::NotFound => println!("no isomorphism found"),
    }
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().expect("example runs");
}
