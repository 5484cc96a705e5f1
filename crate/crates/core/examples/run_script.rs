// Runs the bundled corpus script and prints the text report.

use ovskit::cli::{run_text, Options};

pub fn run_example() -> ovskit::Result<()> {
    let script = include_str!("scripts/corpus.ovs");
    let report = run_text(script, &Options::default());
    print!("{}", report.text());
    assert_eq!(report.exit_code, 0);
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().expect("example runs");
}
