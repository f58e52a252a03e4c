//! Reflection structures: τ(d) = τ(δ) = ρ_Γ on the contact models and the A ⊕ B ⊕ C split.

use fried_torsion::detline::{abc_split, contact_model, rho_gamma, tau_d, tau_delta};
use fried_torsion::Result;

pub fn run_example() -> Result<()> {
    for m in 0..3 {
        let gs = contact_model(m)?;
        let cx = &gs.complex;
        let td = tau_d(cx)?.scalar;
        let tx = tau_delta(cx)?.scalar;
        let rg = rho_gamma(&gs)?.scalar;
        let split = abc_split(&gs)?;
        println!(
            "m = {m}: dims {:?}, τ(d) = {td}, τ(δ) = {tx}, ρ_Γ = {rg}, ABC residual {:.1e}",
            cx.space.dims(),
            split.multiplicativity_residual(cx)?
        );
    }
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().expect("contact example");
}
