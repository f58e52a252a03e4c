//! Cutoff decompositions of L = [d, δ] and the glued value that does not depend on the cutoff.

use fried_torsion::graded::trial_rng;
use fried_torsion::spectral::{band_section_identity, default_representatives, direct_section, glued_section, random_glue_instance};
use fried_torsion::Result;

pub fn run_example() -> Result<()> {
    let mut rng = trial_rng(2, 0);
    let inst = random_glue_instance(&mut rng, 3, 3, true)?;
    let cx = &inst.complex;
    let reps = default_representatives(cx)?;
    println!("dims {:?}, dim H = {:?}", cx.space.dims(), reps.iter().map(|r| r.ncols()).collect::<Vec<_>>());
    for &a in &inst.cutoffs {
        let g = glued_section(cx, a, &reps)?;
        println!("a = {a:>6}: dims below {:?}, glued value {:.12}", g.below_dims, g.value);
    }
    println!("no cutoff:              glued value {:.12}", direct_section(cx, &reps)?);
    for w in inst.cutoffs.windows(2) {
        let b = band_section_identity(cx, w[0], w[1])?;
        println!("band ({}, {}): residual {:.1e}, multiplicativity {:.1e}", w[0], w[1], b.residual, b.multiplicativity);
    }
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().expect("spectral gluing example");
}
