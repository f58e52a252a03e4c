//! Verification suites, zeta and gluing drivers, and their JSON/CSV documents.

use crate::detline::{
    abc_split, act_aut, contact_model, det_aut, det_on_cohomology, dual_identity_check, norm_identities, rho_gamma,
    shift_identity_check, tau_d, tau_d_with, tau_delta, tau_delta_with, torsion_ratio, Complements,
};
use crate::error::{Error, Result};
use crate::fried::{self, SuspensionModel};
use crate::graded::{
    random_aut, random_complex_with_symmetry, random_degree_map, random_exact_codifferential_with,
    random_exact_complex_with, random_exact_dims, random_invertible_pair, trial_rng, Complex, GradedMap, GradedSpace,
    PairSpectrum,
};
use crate::linalg::{c, Mat, C64};
use crate::spectral::{
    band_section_identity, clusters, default_representatives, direct_section, duality_shadow, glued_section,
    random_glue_instance, relative_spread,
};
use crate::variation::{
    check_algebraic_identities, check_connection_identity, check_kappa_closed, homotopy_from_metric, kappa_eval,
    kappa_from, DifferentialCurve, Direction, FormJets, DEFAULT_STEP,
};
use rand::Rng;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::time::Instant;

/// Process exit codes.
pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

/// One identity checked over a number of trials.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckRecord {
    pub suite: String,
    pub anchor: String,
    pub trials: usize,
    /// Largest residual over the trials.
    pub residual: f64,
    pub tolerance: f64,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub worst_trial: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub error: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub wall_time_s: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub suite: String,
    pub seed: u64,
    pub pass: bool,
    pub checks: Vec<CheckRecord>,
}

impl SuiteReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes") + "\n"
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, clap::ValueEnum)]
pub enum Suite {
    Detline,
    Variation,
    Spectral,
    Fried,
    All,
}

impl Suite {
    pub fn name(&self) -> &'static str {
        match self {
            Suite::Detline => "detline",
            Suite::Variation => "variation",
            Suite::Spectral => "spectral",
            Suite::Fried => "fried",
            Suite::All => "all",
        }
    }

    fn default_trials(&self) -> usize {
        match self {
            Suite::Detline => 200,
            Suite::Variation => 20,
            Suite::Spectral => 50,
            Suite::Fried | Suite::All => 1,
        }
    }
}

/// Options for [`run_verify`].
#[derive(Clone, Debug, Default)]
pub struct VerifyOptions {
    pub seed: u64,
    /// Overrides the per-suite trial counts.
    pub trials: Option<usize>,
    /// Tolerance overrides keyed by anchor, suite name or `all`.
    pub tolerances: BTreeMap<String, f64>,
    pub timing: bool,
}

struct Acc {
    anchor: &'static str,
    tolerance: f64,
    trials: usize,
    worst: f64,
    worst_trial: Option<u64>,
    error: Option<String>,
    elapsed: f64,
}

struct Checks<'a> {
    suite: &'static str,
    opts: &'a VerifyOptions,
    accs: Vec<Acc>,
}

impl<'a> Checks<'a> {
    fn new(suite: &'static str, opts: &'a VerifyOptions) -> Self {
        Checks { suite, opts, accs: Vec::new() }
    }

    fn tolerance(&self, anchor: &str, default: f64) -> f64 {
        let t = &self.opts.tolerances;
        t.get(anchor).or_else(|| t.get(self.suite)).or_else(|| t.get("all")).copied().unwrap_or(default)
    }

    fn run(&mut self, anchor: &'static str, default_tol: f64, trial: u64, f: impl FnOnce() -> Result<f64>) {
        let start = Instant::now();
        let outcome = f();
        let elapsed = start.elapsed().as_secs_f64();
        let tolerance = self.tolerance(anchor, default_tol);
        let idx = match self.accs.iter().position(|a| a.anchor == anchor) {
            Some(i) => i,
            None => {
                self.accs.push(Acc { anchor, tolerance, trials: 0, worst: 0.0, worst_trial: None, error: None, elapsed: 0.0 });
                self.accs.len() - 1
            }
        };
        let acc = &mut self.accs[idx];
        acc.trials += 1;
        acc.elapsed += elapsed;
        match outcome {
            Ok(r) if r.is_nan() => {
                acc.error.get_or_insert_with(|| format!("trial {trial}: residual is NaN"));
            }
            Ok(r) => {
                if r > acc.worst || acc.worst_trial.is_none() {
                    acc.worst = acc.worst.max(r);
                    acc.worst_trial = Some(trial);
                }
            }
            Err(e) => {
                acc.error.get_or_insert_with(|| format!("trial {trial}: {e}"));
            }
        }
    }

    fn finish(self) -> Vec<CheckRecord> {
        let timing = self.opts.timing;
        self.accs
            .into_iter()
            .map(|a| CheckRecord {
                suite: self.suite.to_string(),
                anchor: a.anchor.to_string(),
                trials: a.trials,
                residual: a.worst,
                tolerance: a.tolerance,
                pass: a.error.is_none() && a.worst <= a.tolerance,
                worst_trial: if a.trials > 1 { a.worst_trial } else { None },
                error: a.error,
                wall_time_s: timing.then_some(a.elapsed),
            })
            .collect()
    }
}

fn rel(a: C64, b: C64) -> f64 {
    (a / b - 1.0).norm()
}

fn flag(ok: bool) -> f64 {
    if ok {
        0.0
    } else {
        1.0
    }
}

fn hand_complex(dv: f64, xv: f64) -> Complex {
    let e = GradedSpace::new(0, vec![1, 1]).expect("hand space");
    let mut d = GradedMap::zero(&e, &e, 1);
    d.set_block(0, Mat::from_element(1, 1, c(dv))).expect("hand block");
    let mut x = GradedMap::zero(&e, &e, -1);
    x.set_block(1, Mat::from_element(1, 1, c(xv))).expect("hand block");
    Complex::new(e, Some(d), Some(x)).expect("hand complex")
}

/// `d = [[2]]`, `δ = [[3]]` on `ℂ → ℂ` in degrees 0 and 1.
pub fn hand_model() -> Complex {
    hand_complex(2.0, 3.0)
}

fn random_space(rng: &mut impl Rng, spans: std::ops::RangeInclusive<usize>, max_dim: usize) -> GradedSpace {
    let len = rng.random_range(spans);
    let p = rng.random_range(-2..=2);
    GradedSpace::new(p, random_exact_dims(rng, len, max_dim)).expect("random space")
}

fn only_d(cx: &Complex) -> Complex {
    Complex { space: cx.space.clone(), d: cx.d.clone(), delta: None }
}

fn detline_suite(opts: &VerifyOptions, trials: usize) -> Vec<CheckRecord> {
    let mut ch = Checks::new("detline", opts);
    ch.run("hand torsion ratio equals 1/6", 1e-12, 0, || {
        let r = torsion_ratio(&hand_model())?;
        Ok(rel(r.ratio, c(1.0 / 6.0)).max(rel(r.predicted, c(1.0 / 6.0))))
    });
    for trial in 0..trials as u64 {
        let mut rng = trial_rng(opts.seed, trial);
        let space = random_space(&mut rng, 2..=5, 6);
        let cx = match random_invertible_pair(&mut rng, &space, PairSpectrum::Generic) {
            Ok(c) => c,
            Err(e) => {
                ch.run("torsion ratio τ(d)/τ(δ) = ∏ det[d,δ]^((-1)^i i)", 1e-9, trial, || Err(e));
                continue;
            }
        };
        let ratio = torsion_ratio(&cx);
        ch.run("torsion ratio τ(d)/τ(δ) = ∏ det[d,δ]^((-1)^i i)", 1e-9, trial, || Ok(ratio.clone()?.ratio_residual()));
        ch.run("unit product ∏ det[d,δ]^((-1)^i) = 1", 1e-9, trial, || Ok(ratio?.unit_residual()));
        if trial >= 100 {
            continue;
        }
        ch.run("τ(d) independent of complements", 1e-9, trial, || {
            let v: Vec<C64> = (0..10).map(|s| tau_d_with(&cx, Complements::Random(trial * 100 + s)).map(|t| t.scalar)).collect::<Result<_>>()?;
            Ok(relative_spread(&v))
        });
        ch.run("τ(δ) independent of complements", 1e-9, trial, || {
            let v: Vec<C64> = (0..10).map(|s| tau_delta_with(&cx, Complements::Random(trial * 100 + s)).map(|t| t.scalar)).collect::<Result<_>>()?;
            Ok(relative_spread(&v))
        });
        let a: f64 = rng.random_range(0.5..2.0);
        ch.run("scaling τ(ad) = a^χ′ τ(d)", 1e-9, trial, || {
            let base = tau_d(&only_d(&cx))?.scalar;
            let scaled = Complex { space: cx.space.clone(), d: Some(cx.d()?.scale(c(a))), delta: None };
            Ok(rel(tau_d(&scaled)?.scalar, base * a.powi(cx.space.chi_prime() as i32)))
        });
        let g = random_aut(&mut rng, &cx.space);
        ch.run("Aut equivariance τ(g·d) = det g|_E τ(d)", 1e-9, trial, || {
            let (moved, dg) = act_aut(&g, &only_d(&cx))?;
            Ok(rel(tau_d(&moved)?.scalar, dg * tau_d(&only_d(&cx))?.scalar))
        });
        let exact = random_space(&mut rng, 2..=5, 4);
        let h_dims: Vec<usize> = (0..exact.len()).map(|_| rng.random_range(0..=2)).collect();
        let sym = random_complex_with_symmetry(&mut rng, &exact, &h_dims);
        ch.run("det g|_E = det g|_H(E,d)", 1e-9, trial, || {
            let (hc, hg) = sym?;
            Ok(rel(det_aut(&hg)?, det_on_cohomology(&hg, &hc)?))
        });
        ch.run("duality pairing ⟨τ(d), τ(d̃)⟩ = 1", 1e-9, trial, || Ok((dual_identity_check(&cx)? - 1.0).norm()));
        ch.run("shift pairing ⟨τ(d), τ(−d)⟩ = 1", 1e-9, trial, || Ok((shift_identity_check(&cx)? - 1.0).norm()));
        ch.run("norm identities for ‖τ(d)‖, ‖τ(δ)‖ and their product", 1e-9, trial, || Ok(norm_identities(&cx)?.max_residual()));
    }
    for m in 0..3u64 {
        ch.run("τ(d) = τ(δ) = ρ_Γ on contact models", 1e-9, m, || {
            let gs = contact_model(m as usize)?;
            let rg = rho_gamma(&gs)?.scalar;
            Ok(rel(tau_d(&gs.complex)?.scalar, rg).max(rel(tau_delta(&gs.complex)?.scalar, rg)))
        });
        ch.run("A ⊕ B ⊕ C multiplicativity on contact models", 1e-9, m, || {
            let gs = contact_model(m as usize)?;
            abc_split(&gs)?.multiplicativity_residual(&gs.complex)
        });
    }
    for trial in 0..trials.min(20) as u64 {
        let mut rng = trial_rng(opts.seed ^ 0x6a6d, trial);
        let m = (trial % 3) as usize;
        ch.run("τ(d) = τ(δ) = ρ_Γ on conjugated contact models", 1e-9, trial, || {
            let gs = contact_model(m)?;
            let g = random_aut(&mut rng, &gs.complex.space);
            let gs = gs.conjugate(&g)?;
            let rg = rho_gamma(&gs)?.scalar;
            Ok(rel(tau_d(&gs.complex)?.scalar, rg).max(rel(tau_delta(&gs.complex)?.scalar, rg)))
        });
    }
    ch.finish()
}

fn variation_suite(opts: &VerifyOptions, trials: usize) -> Vec<CheckRecord> {
    let mut ch = Checks::new("variation", opts);
    ch.run("κ on the scaling curve of δ = [[3]] equals 1", 1e-8, 0, || {
        let e = GradedSpace::new(0, vec![1, 1])?;
        let mut x = GradedMap::zero(&e, &e, -1);
        x.set_block(1, Mat::from_element(1, 1, c(3.0)))?;
        Ok((kappa_eval(&DifferentialCurve::scaling(x), 0.0, 0.0, Direction::T, DEFAULT_STEP)? - 1.0).norm())
    });
    for trial in 0..trials as u64 {
        let mut rng = trial_rng(opts.seed, trial);
        let space = random_space(&mut rng, 2..=4, 4);
        let delta0 = match random_exact_codifferential_with(&mut rng, &space) {
            Ok(x) => x,
            Err(e) => {
                ch.run("connection identity 𝐝 log τ(δ) = κ", 1e-5, trial, || Err(e));
                continue;
            }
        };
        let x = random_degree_map(&mut rng, &space, 0).scale(c(0.3));
        let y = random_degree_map(&mut rng, &space, 0).scale(c(0.3));
        let curve = DifferentialCurve::conjugation(delta0.clone(), x.clone(), y.clone());
        for dir in [Direction::T, Direction::U] {
            ch.run("connection identity 𝐝 log τ(δ) = κ", 1e-5, trial, || {
                Ok(check_connection_identity(&curve, 0.0, 0.0, dir, DEFAULT_STEP, 1e-5)?.residual)
            });
        }
        ch.run("κ is closed", 1e-4, trial, || check_kappa_closed(&curve, 0.0, 0.0, 1e-3));
        let beta = random_degree_map(&mut rng, &space, 2);
        ch.run("κ independent of the homotopy", 1e-9, trial, || {
            let a0 = homotopy_from_metric(&delta0)?;
            let a1 = a0.shifted_by(&delta0, &beta)?;
            let tangent = x.compose(&delta0)?.sub(&delta0.compose(&x)?)?;
            let k0 = kappa_from(&a0.alpha, &tangent)?;
            let k1 = kappa_from(&a1.alpha, &tangent)?;
            Ok((k0 - k1).norm() / k0.norm().max(1.0))
        });
        let betas: Vec<GradedMap> = (0..2).map(|_| random_degree_map(&mut rng, &space, 2)).collect();
        let f = random_degree_map(&mut rng, &space, 0);
        let ids = homotopy_from_metric(&delta0).and_then(|a| {
            let jets = FormJets::from_generators(&delta0, &a, &[x.clone(), y.clone()], &betas)?;
            check_algebraic_identities(&delta0, &a, &jets, &f)
        });
        ch.run("curvature identity 𝐝(α𝐝δ) = [δ, α𝐝α𝐝δ] + (α𝐝δ)²", 1e-12, trial, || Ok(ids.clone()?.curvature));
        ch.run("number identity N − αδ = [δ, αN]", 1e-12, trial, || Ok(ids.clone()?.number));
        ch.run("trace identity Trs[α[f, δ]] = Trs[f]", 1e-12, trial, || Ok(ids.clone()?.gap));
    }
    ch.finish()
}

fn spectral_suite(opts: &VerifyOptions, trials: usize) -> Vec<CheckRecord> {
    let mut ch = Checks::new("spectral", opts);
    ch.run("hand glued value equals 1/6 at cutoffs 1 and 10", 1e-12, 0, || {
        let cx = hand_model();
        let reps = default_representatives(&cx)?;
        let v: Vec<C64> = [1.0, 10.0].iter().map(|&a| glued_section(&cx, a, &reps).map(|g| g.value)).collect::<Result<_>>()?;
        Ok(rel(v[0], c(1.0 / 6.0)).max(rel(v[1], c(1.0 / 6.0))))
    });
    for trial in 0..trials as u64 {
        let mut rng = trial_rng(opts.seed, trial);
        let inst = match random_glue_instance(&mut rng, 2 + (trial as usize % 3), 3, trial % 5 != 0) {
            Ok(i) => i,
            Err(e) => {
                ch.run("glued section independent of the cutoff", 1e-8, trial, || Err(e));
                continue;
            }
        };
        let cx = &inst.complex;
        ch.run("glued section independent of the cutoff", 1e-8, trial, || {
            if inst.cutoffs.len() < 3 {
                return Err(Error::Invalid(format!("only {} admissible cutoffs", inst.cutoffs.len())));
            }
            let reps = default_representatives(cx)?;
            let mut v: Vec<C64> = inst.cutoffs.iter().map(|&a| glued_section(cx, a, &reps).map(|g| g.value)).collect::<Result<_>>()?;
            v.push(direct_section(cx, &reps)?);
            Ok(relative_spread(&v))
        });
        for w in inst.cutoffs.windows(2) {
            let band = band_section_identity(cx, w[0], w[1]);
            ch.run("band identity τ_(a,b)(d) = R_(a,b)(0) τ_(a,b)(i_Z)", 1e-9, trial, || Ok(band.clone()?.residual));
            ch.run("band multiplicativity of τ(δ)", 1e-9, trial, || Ok(band?.multiplicativity));
        }
        ch.run("order of the truncated zeta equals Trs[N P]", 1e-6, trial, || {
            let l = cx.laplacian()?;
            let mut worst: f64 = 0.0;
            for cl in clusters(&l)? {
                let o = crate::spectral::zeta_order_at(&l, cl.value)?;
                if o.order as f64 != o.supertrace.round() {
                    return Ok(f64::INFINITY);
                }
                worst = worst.max((o.supertrace - o.order as f64).abs());
            }
            Ok(worst)
        });
        ch.run("duality shadow on E♯", 1e-8, trial, || {
            let mut worst: f64 = 0.0;
            for &a in &inst.cutoffs {
                worst = worst.max(duality_shadow(cx, a)?.residual);
            }
            Ok(worst)
        });
    }
    ch.finish()
}

/// Real grid `start, start + step, …` up to `stop` inclusive.
pub fn sigma_range(start: f64, stop: f64, step: f64) -> Result<Vec<C64>> {
    let ordered = step > 0.0 && stop >= start;
    if !ordered {
        return Err(Error::Invalid(format!("bad range {start}:{stop}:{step}")));
    }
    let n = ((stop - start) / step + 1e-9).floor() as usize;
    Ok((0..=n).map(|j| C64::new(start + j as f64 * step, 0.0)).collect())
}

fn fried_suite(opts: &VerifyOptions) -> Vec<CheckRecord> {
    let mut ch = Checks::new("fried", opts);
    let k_max = 60;
    let cat = SuspensionModel::cat_map(0.0);
    ch.run("cat map counts N = 1, 5, 16, 45 and P = 1, 2, 5, 10", 0.0, 0, || {
        let t = fried::OrbitTable::build(&cat, 4)?;
        let want_n: Vec<i64> = vec![1, 5, 16, 45];
        let want_p: Vec<i64> = vec![1, 2, 5, 10];
        let ok = t.fixed.iter().zip(&want_n).all(|(a, b)| *a == (*b).into())
            && t.primitive.iter().zip(&want_p).all(|(a, b)| *a == (*b).into());
        Ok(flag(ok))
    });
    ch.run("Σ_{d|k} d P_d = N_k for k ≤ 60", 0.0, 0, || Ok(flag(fried::OrbitTable::build(&cat, k_max)?.first_inconsistency().is_none())));
    ch.run("growth N_k ≤ 3 e^{(log λ + 0.01) k}", 0.0, 0, || Ok(flag(fried::growth_bound_holds(&cat, k_max, 3.0, 0.01))));
    ch.run("ε_u = 1 on all return maps", 0.0, 0, || Ok(flag((1..=k_max).all(|k| fried::unstable_epsilon(&cat, k) == 1))));
    let grid = sigma_range(1.5, 3.0, 0.1).expect("fixed grid");
    let table = fried::OrbitTable::build(&cat, k_max).expect("cat map table");
    ch.run("truncated product vs closed form on σ ∈ [1.5, 3]", 1e-8, 0, || {
        let mut worst: f64 = 0.0;
        for &s in &grid {
            let ev = fried::evaluate_with_table(&cat, &table, s);
            worst = worst.max(ev.abs_diff().ok_or(Error::Pole { order: fried::closed_form_order(&cat, s) })?);
        }
        Ok(worst)
    });
    ch.run("truncation error within the tail bound", 1e-14, 0, || {
        let mut excess: f64 = 0.0;
        for &s in &grid {
            let ev = fried::evaluate_with_table(&cat, &table, s);
            excess = excess.max(ev.abs_diff().unwrap_or(f64::INFINITY) - ev.tail_bound);
        }
        Ok(excess.max(0.0))
    });
    ch.run("tail bound on σ ∈ [1.5, 3]", 1e-8, 0, || {
        Ok(grid.iter().map(|&s| fried::evaluate_with_table(&cat, &table, s).tail_bound).fold(0.0, f64::max))
    });
    ch.run("R(2) ≈ 0.8190", 5e-5, 0, || Ok((fried::fried_closed_form(&cat, c(2.0))? - 0.8190).norm()));
    ch.run("R(σ) → 1 as σ → ∞", 1e-12, 0, || Ok((fried::fried_closed_form(&cat, c(40.0))? - 1.0).norm()));
    ch.run("pole order −2 at σ = 0", 0.0, 0, || {
        let mut worst = 0;
        for a in [[[2, 1], [1, 1]], [[3, 1], [2, 1]], [[5, 2], [2, 1]]] {
            let m = SuspensionModel::new(a, 0.0)?;
            worst = worst.max((fried::closed_form_order(&m, c(0.0)) + 2).abs());
            if fried::fried_closed_form(&m, c(0.0)) != Err(Error::Pole { order: -2 }) {
                worst = worst.max(1);
            }
        }
        Ok(worst as f64)
    });
    ch.run("log series vs log of the truncated product", 1e-9, 0, || {
        let s = c(2.0);
        let series = fried::log_series_with_table(&cat, &table, s);
        Ok((series - fried::evaluate_with_table(&cat, &table, s).value.ln()).norm())
    });
    ch.run("log series vs log of the closed form", 1e-8, 0, || {
        let s = c(2.0);
        Ok((fried::log_series_with_table(&cat, &table, s) - fried::fried_closed_form(&cat, s)?.ln()).norm())
    });
    ch.run("d/dσ of the log series vs the closed form", 1e-6, 0, || {
        let (s, h) = (2.0, 1e-4);
        let f = |x: f64| fried::log_series_with_table(&cat, &table, c(x));
        let fd = (f(s + h) - f(s - h)) / (2.0 * h);
        Ok((fd - fried::fried_closed_form_log_derivative(&cat, c(s))).norm())
    });
    for (j, theta) in [0.0, 0.7].into_iter().enumerate() {
        ch.run("duality R_Z,F = R_{−Z,F*⊗o(TY)}", 1e-9, j as u64, || Ok(fried::duality_check(&cat.with_theta(theta), c(2.0), k_max)?.residual));
    }
    let twisted = cat.with_theta(0.7);
    let s = C64::new(2.0, 0.3);
    ch.run("twist shift value(θ, σ) = value(0, σ − iθ)", 1e-10, 0, || fried::twist_shift_residual(&twisted, s, k_max));
    ch.run("conjugation R_{F*}(σ) = conj R_F(σ̄)", 1e-10, 0, || fried::conjugation_residual(&twisted, s, k_max));
    ch.run("closed form with twist vs truncated product", 1e-8, 0, || {
        let ev = fried::fried_zeta_truncated(&twisted, s, k_max)?;
        ev.abs_diff().ok_or(Error::Pole { order: -2 })
    });
    ch.finish()
}

/// Runs one suite, or all of them in order.
pub fn run_verify(suite: Suite, opts: &VerifyOptions) -> SuiteReport {
    let trials = |s: Suite| opts.trials.unwrap_or(s.default_trials());
    let checks = match suite {
        Suite::Detline => detline_suite(opts, trials(suite)),
        Suite::Variation => variation_suite(opts, trials(suite)),
        Suite::Spectral => spectral_suite(opts, trials(suite)),
        Suite::Fried => fried_suite(opts),
        Suite::All => {
            let mut v = detline_suite(opts, trials(Suite::Detline));
            v.extend(variation_suite(opts, trials(Suite::Variation)));
            v.extend(spectral_suite(opts, trials(Suite::Spectral)));
            v.extend(fried_suite(opts));
            v
        }
    };
    SuiteReport { suite: suite.name().into(), seed: opts.seed, pass: checks.iter().all(|c| c.pass), checks }
}

/// One graded map as shift plus per-degree blocks of `[re, im]` pairs.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MapDocument {
    pub shift: i32,
    pub blocks: Vec<Option<Vec<Vec<[f64; 2]>>>>,
}

/// Serialized complex with keys `degrees`, `dims` and `maps`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ComplexDocument {
    pub degrees: [i32; 2],
    pub dims: Vec<usize>,
    pub maps: BTreeMap<String, MapDocument>,
}

impl MapDocument {
    pub fn from_map(f: &GradedMap) -> Self {
        let blocks = f
            .source()
            .degrees()
            .map(|i| f.block(i).map(|m| (0..m.nrows()).map(|r| (0..m.ncols()).map(|k| [m[(r, k)].re, m[(r, k)].im]).collect()).collect()))
            .collect();
        MapDocument { shift: f.shift(), blocks }
    }

    pub fn to_map(&self, space: &GradedSpace) -> Result<GradedMap> {
        if self.blocks.len() != space.len() {
            return Err(Error::Shape(format!("{} blocks for {} degrees", self.blocks.len(), space.len())));
        }
        let mut f = GradedMap::zero(space, space, self.shift);
        for (i, b) in space.degrees().zip(&self.blocks) {
            let Some(rows) = b else { continue };
            let ncols = rows.first().map_or(space.dim(i), |r| r.len());
            if rows.iter().any(|r| r.len() != ncols) {
                return Err(Error::Shape(format!("ragged block at degree {i}")));
            }
            let m = Mat::from_fn(rows.len(), ncols, |r, k| C64::new(rows[r][k][0], rows[r][k][1]));
            f.set_block(i, m)?;
        }
        Ok(f)
    }
}

impl ComplexDocument {
    pub fn from_complex(cx: &Complex) -> Self {
        let mut maps = BTreeMap::new();
        if let Some(d) = &cx.d {
            maps.insert("d".to_string(), MapDocument::from_map(d));
        }
        if let Some(x) = &cx.delta {
            maps.insert("delta".to_string(), MapDocument::from_map(x));
        }
        ComplexDocument { degrees: [cx.space.p(), cx.space.q()], dims: cx.space.dims().to_vec(), maps }
    }

    pub fn to_complex(&self) -> Result<Complex> {
        let space = GradedSpace::new(self.degrees[0], self.dims.clone())?;
        if space.q() != self.degrees[1] {
            return Err(Error::Shape(format!("degrees {:?} do not match {} dims", self.degrees, self.dims.len())));
        }
        for name in self.maps.keys() {
            if name != "d" && name != "delta" {
                return Err(Error::Invalid(format!("unknown map {name:?}")));
            }
        }
        let d = self.maps.get("d").map(|m| m.to_map(&space)).transpose()?;
        let delta = self.maps.get("delta").map(|m| m.to_map(&space)).transpose()?;
        Complex::new(space, d, delta)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("document serializes") + "\n"
    }

    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::Invalid(format!("complex document: {e}")))
    }
}

/// Parses `start:stop:step` or a comma-separated list of complex numbers such as `2,2.5+0.1i`.
pub fn parse_sigma(s: &str) -> Result<Vec<C64>> {
    let parts: Vec<&str> = s.split(':').collect();
    if parts.len() == 3 {
        let num = |x: &str| x.trim().parse::<f64>().map_err(|e| Error::Invalid(format!("σ range {s:?}: {e}")));
        return sigma_range(num(parts[0])?, num(parts[1])?, num(parts[2])?);
    }
    if parts.len() != 1 {
        return Err(Error::Invalid(format!("σ grid {s:?} is neither start:stop:step nor a list")));
    }
    s.split(',')
        .map(|x| x.trim().replace(' ', "").parse::<C64>().map_err(|e| Error::Invalid(format!("σ value {x:?}: {e}"))))
        .collect()
}

/// Parses `a,b,c,d` into a 2×2 integer matrix.
pub fn parse_matrix(s: &str) -> Result<[[i64; 2]; 2]> {
    let v: Vec<i64> = s
        .split(',')
        .map(|x| x.trim().parse::<i64>().map_err(|e| Error::Invalid(format!("matrix entry {x:?}: {e}"))))
        .collect::<Result<_>>()?;
    match v[..] {
        [a, b, c, d] => Ok([[a, b], [c, d]]),
        _ => Err(Error::Invalid(format!("matrix needs 4 entries, got {}", v.len()))),
    }
}

pub const CSV_HEADER: &str = "sigma_re,sigma_im,K,value_re,value_im,tail_bound,closed_re,closed_im,abs_diff";

/// One CSV row per σ with the truncated product, its tail bound and the closed form.
pub fn run_zeta(model: &SuspensionModel, sigmas: &[C64], k_max: usize) -> Result<String> {
    let table = fried::OrbitTable::build(model, k_max)?;
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for &s in sigmas {
        let ev = fried::evaluate_with_table(model, &table, s);
        let closed = ev.closed_form.unwrap_or(C64::new(f64::NAN, f64::NAN));
        let diff = ev.abs_diff().unwrap_or(f64::NAN);
        let row = [s.re, s.im, k_max as f64, ev.value.re, ev.value.im, ev.tail_bound, closed.re, closed.im, diff];
        let fields: Vec<String> =
            row.iter().enumerate().map(|(j, x)| if j == 2 { k_max.to_string() } else { format!("{x:.16e}") }).collect();
        out.push_str(&fields.join(","));
        out.push('\n');
    }
    Ok(out)
}

/// Glued value at one cutoff, or the reason the cutoff was rejected.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GlueEntry {
    pub cutoff: f64,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub value: Option<[f64; 2]>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub below_dims: Option<Vec<usize>>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub error: Option<String>,
}

/// Maximum spread that counts as cutoff-independent.
pub const GLUE_SPREAD_TOL: f64 = 1e-8;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GlueReport {
    pub dims: Vec<usize>,
    pub entries: Vec<GlueEntry>,
    pub spread: f64,
    pub pass: bool,
}

impl GlueReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("glue report serializes") + "\n"
    }
}

/// Glued values at each cutoff with their relative spread.
pub fn run_glue(cx: &Complex, cutoffs: &[f64]) -> Result<GlueReport> {
    if cutoffs.len() < 2 {
        return Err(Error::Invalid("gluing needs at least two cutoffs".into()));
    }
    let reps = default_representatives(cx)?;
    let mut entries = Vec::new();
    let mut values = Vec::new();
    for &a in cutoffs {
        match glued_section(cx, a, &reps) {
            Ok(g) => {
                values.push(g.value);
                entries.push(GlueEntry { cutoff: a, value: Some([g.value.re, g.value.im]), below_dims: Some(g.below_dims), error: None });
            }
            Err(e) => entries.push(GlueEntry { cutoff: a, value: None, below_dims: None, error: Some(e.to_string()) }),
        }
    }
    let spread = relative_spread(&values);
    let pass = values.len() == cutoffs.len() && spread <= GLUE_SPREAD_TOL;
    Ok(GlueReport { dims: cx.space.dims().to_vec(), entries, spread, pass })
}

/// Random pair `(d, δ)` with `[d, δ]` invertible on the given dims, or a random exact `d` with `δ = d*`.
pub fn random_glue_complex(p: i32, dims: Vec<usize>, seed: u64) -> Result<Complex> {
    let space = GradedSpace::new(p, dims)?;
    let mut rng = trial_rng(seed, 0);
    match random_invertible_pair(&mut rng, &space, PairSpectrum::Generic) {
        Ok(cx) => Ok(cx),
        Err(_) => {
            let cx = random_exact_complex_with(&mut rng, &space)?;
            let d = cx.d()?.clone();
            Complex::new(space, Some(d.clone()), Some(d.adjoint()))
        }
    }
}

pub mod cli {
    //! Argument parsing and dispatch for the `fried-torsion` binary.

    use super::*;
    use clap::{Parser, Subcommand};
    use std::io::Write;

    #[derive(Parser, Debug)]
    #[command(name = "fried-torsion", version, about = "Torsion sections, spectral gluing and Fried zeta checks")]
    pub struct Cli {
        #[command(subcommand)]
        pub command: Command,
    }

    #[derive(Subcommand, Debug)]
    pub enum Command {
        /// Run a verification suite and print a JSON report.
        Verify {
            #[arg(long, value_enum, default_value = "all")]
            suite: Suite,
            #[arg(long, default_value_t = 1)]
            seed: u64,
            #[arg(long)]
            trials: Option<usize>,
            /// `anchor=value`, `suite=value` or `all=value`; repeatable.
            #[arg(long)]
            tolerance: Vec<String>,
            /// Record wall time per check (reports are then no longer reproducible byte for byte).
            #[arg(long)]
            timing: bool,
            #[arg(long)]
            out: Option<std::path::PathBuf>,
        },
        /// Evaluate the Fried zeta function of a suspension flow on a σ grid and print CSV.
        Zeta {
            #[arg(long, default_value = "2,1,1,1")]
            matrix: String,
            #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
            theta: f64,
            #[arg(long, default_value = "1.5:3.0:0.1", allow_hyphen_values = true)]
            sigma: String,
            #[arg(long = "K", default_value_t = 60)]
            k: usize,
            #[arg(long)]
            out: Option<std::path::PathBuf>,
        },
        /// Compute glued sections at several cutoffs and report their spread.
        Glue {
            /// Exact dims such as `1,2,1`; ignored when `--input` is given.
            #[arg(long, default_value = "1,2,1")]
            dims: String,
            #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
            p: i32,
            /// ComplexDocument JSON file.
            #[arg(long)]
            input: Option<std::path::PathBuf>,
            #[arg(long, default_value = "1,10,100")]
            cutoffs: String,
            #[arg(long, default_value_t = 1)]
            seed: u64,
            #[arg(long)]
            out: Option<std::path::PathBuf>,
        },
    }

    fn parse_tolerances(items: &[String]) -> Result<BTreeMap<String, f64>> {
        items
            .iter()
            .map(|s| {
                let (k, v) = s.rsplit_once('=').ok_or_else(|| Error::Invalid(format!("tolerance {s:?} is not key=value")))?;
                let v: f64 = v.trim().parse().map_err(|e| Error::Invalid(format!("tolerance {s:?}: {e}")))?;
                Ok((k.trim().to_string(), v))
            })
            .collect()
    }

    fn parse_list<T: std::str::FromStr>(s: &str, what: &str) -> Result<Vec<T>>
    where
        T::Err: std::fmt::Display,
    {
        s.split(',').map(|x| x.trim().parse::<T>().map_err(|e| Error::Invalid(format!("{what} {x:?}: {e}")))).collect()
    }

    fn emit(text: &str, out: &Option<std::path::PathBuf>, stdout: &mut dyn Write) -> std::io::Result<()> {
        match out {
            Some(path) => std::fs::write(path, text),
            None => stdout.write_all(text.as_bytes()),
        }
    }

    fn execute(cmd: Command, stdout: &mut dyn Write) -> std::result::Result<i32, (i32, String)> {
        let usage = |e: Error| (EXIT_USAGE, e.to_string());
        let io = |e: std::io::Error| (EXIT_USAGE, format!("output: {e}"));
        match cmd {
            Command::Verify { suite, seed, trials, tolerance, timing, out } => {
                let opts = VerifyOptions { seed, trials, tolerances: parse_tolerances(&tolerance).map_err(usage)?, timing };
                let report = run_verify(suite, &opts);
                emit(&report.to_json(), &out, stdout).map_err(io)?;
                Ok(if report.pass { EXIT_PASS } else { EXIT_FAIL })
            }
            Command::Zeta { matrix, theta, sigma, k, out } => {
                let model = SuspensionModel::new(parse_matrix(&matrix).map_err(usage)?, theta).map_err(usage)?;
                let sigmas = parse_sigma(&sigma).map_err(usage)?;
                let csv = run_zeta(&model, &sigmas, k).map_err(usage)?;
                emit(&csv, &out, stdout).map_err(io)?;
                Ok(EXIT_PASS)
            }
            Command::Glue { dims, p, input, cutoffs, seed, out } => {
                let cx = match input {
                    Some(path) => {
                        let text = std::fs::read_to_string(&path).map_err(|e| (EXIT_USAGE, format!("{}: {e}", path.display())))?;
                        ComplexDocument::from_json(&text).and_then(|d| d.to_complex()).map_err(usage)?
                    }
                    None => random_glue_complex(p, parse_list(&dims, "dim").map_err(usage)?, seed).map_err(usage)?,
                };
                let cutoffs: Vec<f64> = parse_list(&cutoffs, "cutoff").map_err(usage)?;
                let report = run_glue(&cx, &cutoffs).map_err(usage)?;
                emit(&report.to_json(), &out, stdout).map_err(io)?;
                Ok(if report.pass { EXIT_PASS } else { EXIT_FAIL })
            }
        }
    }

    /// Parses `args` (including the program name), runs the command and returns the exit code.
    pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
    where
        I: IntoIterator<Item = T>,
        T: Into<std::ffi::OsString> + Clone,
    {
        let cli = match Cli::try_parse_from(args) {
            Ok(c) => c,
            Err(e) => {
                let _ = write!(stderr, "{e}");
                return if e.use_stderr() { EXIT_USAGE } else { EXIT_PASS };
            }
        };
        match execute(cli.command, stdout) {
            Ok(code) => code,
            Err((code, msg)) => {
                let _ = writeln!(stderr, "error: {msg}");
                code
            }
        }
    }
}
