//! The connection form κ = −Trs[α 𝐝δ] against 𝐝 log τ(δ) along two families of codifferentials.

use fried_torsion::graded::{random_degree_map, random_exact_codifferential_with, trial_rng, GradedSpace};
use fried_torsion::linalg::c;
use fried_torsion::report::hand_model;
use fried_torsion::variation::{check_connection_identity, check_kappa_closed, kappa_eval, DifferentialCurve, Direction, DEFAULT_STEP};
use fried_torsion::Result;

pub fn run_example() -> Result<()> {
    let scaling = DifferentialCurve::scaling(hand_model().delta()?.clone());
    println!("hand model, δ(t) = e^t δ: κ(∂_t) = {:.9}", kappa_eval(&scaling, 0.0, 0.0, Direction::T, DEFAULT_STEP)?.re);

    let mut rng = trial_rng(5, 0);
    let space = GradedSpace::new(0, vec![1, 3, 3, 1])?;
    let delta0 = random_exact_codifferential_with(&mut rng, &space)?;
    let x = random_degree_map(&mut rng, &space, 0).scale(c(0.3));
    let y = random_degree_map(&mut rng, &space, 0).scale(c(0.3));
    let curve = DifferentialCurve::conjugation(delta0, x, y);
    for dir in [Direction::T, Direction::U] {
        let chk = check_connection_identity(&curve, 0.1, -0.2, dir, DEFAULT_STEP, 1e-5)?;
        println!("{dir:?}: κ = {:.9}, 𝐝 log τ(δ) = {:.9}, residual {:.1e}", chk.kappa, chk.dlog_tau, chk.residual);
    }
    println!("closedness residual {:.1e}", check_kappa_closed(&curve, 0.1, -0.2, 1e-3)?);
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().expect("kappa example");
}
