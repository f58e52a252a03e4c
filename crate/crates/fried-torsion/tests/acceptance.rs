mod common;

use fried_torsion::detline::torsion_ratio;
use fried_torsion::fried::{OrbitTable, SuspensionModel};
use fried_torsion::graded::trial_rng;
use fried_torsion::linalg::c;
use fried_torsion::report::{hand_model, run_verify, CheckRecord, Suite, SuiteReport, VerifyOptions};
use fried_torsion::spectral::{default_representatives, random_glue_instance};
use num_bigint::BigInt;
use std::process::Command;

const SEED: u64 = 7;

struct Criterion {
    id: usize,
    title: &'static str,
    failures: Vec<String>,
    notes: Vec<String>,
}

impl Criterion {
    fn new(id: usize, title: &'static str) -> Self {
        Criterion { id, title, failures: Vec::new(), notes: Vec::new() }
    }

    fn require(&mut self, ok: bool, what: impl Into<String>) {
        if !ok {
            self.failures.push(what.into());
        }
    }

    /// The check must exist, be error free, cover `min_trials` and stay within `tol`.
    fn check(&mut self, report: &SuiteReport, anchor: &str, tol: f64, min_trials: usize) {
        let Some(rec) = report.checks.iter().find(|r| r.anchor == anchor) else {
            self.failures.push(format!("missing check {anchor:?}"));
            return;
        };
        self.record(rec, tol, min_trials);
    }

    fn record(&mut self, rec: &CheckRecord, tol: f64, min_trials: usize) {
        if let Some(e) = &rec.error {
            self.failures.push(format!("{}: {e}", rec.anchor));
        } else if rec.residual.is_nan() || rec.residual > tol {
            self.failures.push(format!("{}: residual {:.2e} > {tol:.0e}", rec.anchor, rec.residual));
        }
        if rec.trials < min_trials {
            self.failures.push(format!("{}: {} trials < {min_trials}", rec.anchor, rec.trials));
        }
        self.notes.push(format!("{:.1e}", rec.residual));
    }

    fn report(&self) -> bool {
        let pass = self.failures.is_empty();
        let tag = if pass { "PASS" } else { "FAIL" };
        let detail = if pass { format!("observed [{}]", self.notes.join(", ")) } else { self.failures.join("; ") };
        println!("criterion {}: {tag}: {} ({detail})", self.id, self.title);
        pass
    }
}

fn main() {
    let opts = VerifyOptions { seed: SEED, ..Default::default() };
    let detline = run_verify(Suite::Detline, &opts);
    let variation = run_verify(Suite::Variation, &opts);
    let spectral = run_verify(Suite::Spectral, &opts);
    let fried = run_verify(Suite::Fried, &opts);
    let mut all = Vec::new();

    let mut c1 = Criterion::new(1, "torsion ratio theorem on 200 random pairs, hand instance exactly 1/6");
    c1.require(torsion_ratio(&hand_model()).map(|r| r.ratio == c(1.0 / 6.0)).unwrap_or(false), "hand ratio is not exactly 1/6");
    c1.check(&detline, "hand torsion ratio equals 1/6", 0.0, 1);
    c1.check(&detline, "torsion ratio τ(d)/τ(δ) = ∏ det[d,δ]^((-1)^i i)", 1e-9, 200);
    c1.check(&detline, "unit product ∏ det[d,δ]^((-1)^i) = 1", 1e-9, 200);
    all.push(c1);

    let mut c2 = Criterion::new(2, "τ(d), τ(δ) independent of 10 random complement choices");
    c2.check(&detline, "τ(d) independent of complements", 1e-9, 100);
    c2.check(&detline, "τ(δ) independent of complements", 1e-9, 100);
    all.push(c2);

    let mut c3 = Criterion::new(3, "scaling, Aut equivariance, cohomology determinant, duality, shift and norm identities on 100 trials");
    for anchor in [
        "scaling τ(ad) = a^χ′ τ(d)",
        "Aut equivariance τ(g·d) = det g|_E τ(d)",
        "det g|_E = det g|_H(E,d)",
        "duality pairing ⟨τ(d), τ(d̃)⟩ = 1",
        "shift pairing ⟨τ(d), τ(−d)⟩ = 1",
        "norm identities for ‖τ(d)‖, ‖τ(δ)‖ and their product",
    ] {
        c3.check(&detline, anchor, 1e-9, 100);
    }
    all.push(c3);

    let mut c4 = Criterion::new(4, "κ connection, closedness, homotopy independence and algebraic identities");
    c4.check(&variation, "connection identity 𝐝 log τ(δ) = κ", 1e-5, 1);
    c4.check(&variation, "κ is closed", 1e-4, 1);
    c4.check(&variation, "κ independent of the homotopy", 1e-9, 1);
    c4.check(&variation, "curvature identity 𝐝(α𝐝δ) = [δ, α𝐝α𝐝δ] + (α𝐝δ)²", 1e-12, 1);
    c4.check(&variation, "number identity N − αδ = [δ, αN]", 1e-12, 1);
    c4.check(&variation, "trace identity Trs[α[f, δ]] = Trs[f]", 1e-12, 1);
    all.push(c4);

    let mut c5 = Criterion::new(5, "τ(d) = τ(δ) = ρ_Γ on contact models m = 0, 1, 2");
    c5.check(&detline, "τ(d) = τ(δ) = ρ_Γ on contact models", 1e-9, 3);
    all.push(c5);

    let mut c6 = Criterion::new(6, "gluing over 50 instances, band identity, zeta orders equal Trs[N P]");
    c6.check(&spectral, "glued section independent of the cutoff", 1e-8, 50);
    c6.check(&spectral, "band identity τ_(a,b)(d) = R_(a,b)(0) τ_(a,b)(i_Z)", 1e-9, 50);
    c6.check(&spectral, "order of the truncated zeta equals Trs[N P]", 1e-6, 50);
    let with_h = (0..50u64)
        .filter(|&t| {
            let mut rng = trial_rng(SEED, t);
            random_glue_instance(&mut rng, 2 + (t as usize % 3), 3, t % 5 != 0)
                .and_then(|i| default_representatives(&i.complex))
                .map(|r| r.iter().any(|m| m.ncols() > 0))
                .unwrap_or(false)
        })
        .count();
    c6.require(with_h > 0, "no instance with dim H > 0");
    c6.notes.push(format!("{with_h} instances with dim H > 0"));
    all.push(c6);

    let mut c7 = Criterion::new(7, "cat map counts, truncated vs closed form, R(2), duality, pole, twist symmetries");
    let cat = SuspensionModel::cat_map(0.0);
    match OrbitTable::build(&cat, 30) {
        Ok(t) => {
            let smith: Vec<BigInt> = (1..=30).map(|k| common::fixed_points_by_smith([[2, 1], [1, 1]], k)).collect();
            c7.require(t.fixed == smith, "N_k differs from the Smith normal form oracle");
            c7.require(t.primitive == common::primitive_by_recursion(&smith), "P_k differs from the recursion oracle");
            let head: Vec<BigInt> = [1, 5, 16, 45].into_iter().map(BigInt::from).collect();
            let p_head: Vec<BigInt> = [1, 2, 5, 10].into_iter().map(BigInt::from).collect();
            c7.require(t.fixed[..4] == head[..] && t.primitive[..4] == p_head[..], "N or P head differs");
        }
        Err(e) => c7.require(false, format!("orbit table: {e}")),
    }
    c7.check(&fried, "cat map counts N = 1, 5, 16, 45 and P = 1, 2, 5, 10", 0.0, 1);
    c7.check(&fried, "truncated product vs closed form on σ ∈ [1.5, 3]", 1e-8, 1);
    c7.check(&fried, "R(2) ≈ 0.8190", 5e-5, 1);
    c7.require((common::closed_form_oracle(3.0, 2.0) - 0.8190).abs() < 5e-5, "closed form oracle at σ = 2");
    c7.check(&fried, "duality R_Z,F = R_{−Z,F*⊗o(TY)}", 1e-9, 2);
    c7.check(&fried, "pole order −2 at σ = 0", 0.0, 1);
    c7.check(&fried, "twist shift value(θ, σ) = value(0, σ − iθ)", 1e-10, 1);
    c7.check(&fried, "conjugation R_{F*}(σ) = conj R_F(σ̄)", 1e-10, 1);
    all.push(c7);

    let mut c8 = Criterion::new(8, "two runs of verify --suite all --seed 7 are byte identical");
    let run = || Command::new(common::bin()).args(["verify", "--suite", "all", "--seed", "7"]).output();
    match (run(), run()) {
        (Ok(a), Ok(b)) => {
            c8.require(!a.stdout.is_empty(), "empty report");
            c8.require(a.stdout == b.stdout, "reports differ");
            c8.require(a.status.success(), format!("exit status {:?}", a.status.code()));
            c8.notes.push(format!("{} bytes", a.stdout.len()));
        }
        (Err(e), _) | (_, Err(e)) => c8.require(false, format!("binary: {e}")),
    }
    all.push(c8);

    let passed = all.iter().map(|c| c.report()).filter(|&p| p).count();
    println!("acceptance: {passed}/{} criteria pass", all.len());
    if passed != all.len() {
        std::process::exit(1);
    }
}
