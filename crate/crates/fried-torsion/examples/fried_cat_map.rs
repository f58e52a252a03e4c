//! Orbit counts of the cat map suspension and its Fried zeta function.

use fried_torsion::fried::{duality_check, fried_closed_form, fried_zeta_truncated, OrbitTable, SuspensionModel};
use fried_torsion::linalg::C64;
use fried_torsion::Result;

pub fn run_example() -> Result<()> {
    let model = SuspensionModel::cat_map(0.0);
    let table = OrbitTable::build(&model, 8)?;
    println!("N_k = {:?}", table.fixed.iter().map(|n| n.to_string()).collect::<Vec<_>>());
    println!("P_k = {:?}", table.primitive.iter().map(|n| n.to_string()).collect::<Vec<_>>());

    for s in [1.5, 2.0, 3.0] {
        let sigma = C64::new(s, 0.0);
        let z = fried_zeta_truncated(&model, sigma, 60)?;
        let r = fried_closed_form(&model, sigma)?;
        println!("σ = {s}: truncated {:.12}, closed form {:.12}, tail bound {:.1e}", z.value.re, r.re, z.tail_bound);
    }

    let twisted = model.with_theta(0.7);
    let dual = duality_check(&twisted, C64::new(2.0, 0.3), 60)?;
    println!("reversed flow at θ = 0.7: residual {:.1e}", dual.residual);
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().expect("fried example");
}
