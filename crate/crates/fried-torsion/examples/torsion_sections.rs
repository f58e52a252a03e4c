//! Torsion sections τ(d), τ(δ) and the ratio identity on the hand model and a random pair.

use fried_torsion::detline::{tau_d, tau_d_with, tau_delta, torsion_ratio, Complements};
use fried_torsion::graded::{random_invertible_pair, trial_rng, GradedSpace, PairSpectrum};
use fried_torsion::report::ComplexDocument;
use fried_torsion::Result;

const HAND: &str = include_str!("data/hand_complex.json");

pub fn run_example() -> Result<()> {
    let hand = ComplexDocument::from_json(HAND)?.to_complex()?;
    let td = tau_d(&hand)?.scalar;
    let tx = tau_delta(&hand)?.scalar;
    println!("hand model: τ(d) = {td}, τ(δ) = {tx}, ratio = {}", td / tx);

    let mut rng = trial_rng(11, 0);
    let space = GradedSpace::new(-1, vec![2, 4, 3, 1])?;
    let cx = random_invertible_pair(&mut rng, &space, PairSpectrum::Generic)?;
    let r = torsion_ratio(&cx)?;
    println!("random pair: τ(d)/τ(δ) = {:.12}", r.ratio);
    println!("             ∏ det[d,δ]^((−1)^i i) = {:.12}", r.predicted);
    println!("             ratio residual {:.1e}, unit residual {:.1e}", r.ratio_residual(), r.unit_residual());

    let base = tau_d(&cx)?.scalar;
    let spread = (1..=5)
        .map(|s| Ok((tau_d_with(&cx, Complements::Random(s))?.scalar / base - 1.0).norm()))
        .collect::<Result<Vec<f64>>>()?
        .into_iter()
        .fold(0.0, f64::max);
    println!("τ(d) spread over random complements: {spread:.1e}");
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().expect("torsion sections example");
}
