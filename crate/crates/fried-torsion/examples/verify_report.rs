//! A deterministic verification report for one suite.

use fried_torsion::report::{run_verify, Suite, VerifyOptions};
use fried_torsion::Result;

pub fn run_example() -> Result<()> {
    let opts = VerifyOptions { seed: 7, ..Default::default() };
    let report = run_verify(Suite::Fried, &opts);
    for ch in &report.checks {
        println!("{} {:<60} {:.1e} ≤ {:.0e}", if ch.pass { "ok  " } else { "FAIL" }, ch.anchor, ch.residual, ch.tolerance);
    }
    println!("suite {} pass: {}", report.suite, report.pass);
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().expect("verify example");
}
