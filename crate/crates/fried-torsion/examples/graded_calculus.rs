//! Graded spaces, shifted maps, supercommutators and cohomology.

use fried_torsion::graded::{cohomology, random_degree_map, random_exact_complex, trial_rng, GradedMap, GradedSpace};
use fried_torsion::Result;

pub fn run_example() -> Result<()> {
    let space = GradedSpace::new(0, vec![1, 3, 2])?;
    println!("E = {:?} on degrees {:?}, χ = {}, χ′ = {}", space.dims(), space.degrees(), space.chi(), space.chi_prime());

    let cx = random_exact_complex(3, &space)?;
    let d = cx.d()?;
    println!("|d∘d| = {:.2e}", d.compose(d)?.max_abs());

    let mut rng = trial_rng(3, 1);
    let f = random_degree_map(&mut rng, &space, 1);
    let g = random_degree_map(&mut rng, &space, -1);
    println!("Trs[f, g] = {:.2e}", f.supercommutator(&g)?.supertrace()?.norm());

    let n = GradedMap::number_operator(&space);
    println!("Trs N = {}", n.supertrace()?.re);

    let h = cohomology(&cx)?;
    println!("dim H = {:?}, exact: {}", h.dims, h.is_exact());
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().expect("graded calculus example");
}
