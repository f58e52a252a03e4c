//! Fried zeta functions for suspension flows of hyperbolic unimodular integer 2×2 matrices
//! with a unitary twist along the suspension circle.

use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_complex::Complex64 as C64;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Unstable and stable dimensions of the suspension flow, and the dimension of the total space.
pub const N_U: u32 = 1;
pub const N_S: u32 = 1;
pub const N: u32 = 3;

/// Suspension of `A ∈ SL(2, ℤ)` with roof 1 and holonomy `e^{iθ}` per unit time.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SuspensionModel {
    a: [[i64; 2]; 2],
    pub theta: f64,
}

impl SuspensionModel {
    pub fn new(a: [[i64; 2]; 2], theta: f64) -> Result<Self> {
        let det = a[0][0] * a[1][1] - a[0][1] * a[1][0];
        if det != 1 {
            return Err(Error::NotHyperbolic(format!("det A = {det}, expected 1")));
        }
        let tr = a[0][0] + a[1][1];
        if tr.abs() <= 2 {
            return Err(Error::NotHyperbolic(format!("|tr A| = {} ≤ 2", tr.abs())));
        }
        Ok(SuspensionModel { a, theta })
    }

    /// The cat map `[[2, 1], [1, 1]]`.
    pub fn cat_map(theta: f64) -> Self {
        Self::new([[2, 1], [1, 1]], theta).expect("cat map is hyperbolic")
    }

    pub fn matrix(&self) -> [[i64; 2]; 2] {
        self.a
    }

    pub fn trace(&self) -> i64 {
        self.a[0][0] + self.a[1][1]
    }

    pub fn roof(&self) -> f64 {
        1.0
    }

    /// The eigenvalue `λ` with `|λ| > 1`, carrying the sign of `tr A`.
    pub fn eigenvalue(&self) -> f64 {
        let t = self.trace() as f64;
        (t + t.signum() * (t * t - 4.0).sqrt()) / 2.0
    }

    pub fn with_theta(&self, theta: f64) -> Self {
        SuspensionModel { a: self.a, theta }
    }
}

/// `tr A^k` for `k = 0..=K` by `t_{k+1} = tr A · t_k − t_{k−1}`.
pub fn trace_powers(model: &SuspensionModel, k_max: usize) -> Vec<BigInt> {
    let tr = BigInt::from(model.trace());
    let mut t = vec![BigInt::from(2), tr.clone()];
    while t.len() <= k_max {
        let n = t.len();
        let next = &tr * &t[n - 1] - &t[n - 2];
        t.push(next);
    }
    t.truncate(k_max + 1);
    t
}

/// `N_k = |det(A^k − I)| = |2 − tr A^k|` for `k = 1..=K`.
pub fn fixed_counts(model: &SuspensionModel, k_max: usize) -> Vec<BigInt> {
    trace_powers(model, k_max).into_iter().skip(1).map(|t| (BigInt::from(2) - t).abs()).collect()
}

/// Möbius function.
pub fn mobius(mut n: u64) -> i64 {
    let mut m = 1;
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            n /= p;
            if n.is_multiple_of(p) {
                return 0;
            }
            m = -m;
        }
        p += 1;
    }
    if n > 1 {
        m = -m;
    }
    m
}

/// `P_k = (1/k) Σ_{d|k} μ(k/d) N_d`.
pub fn primitive_counts(n: &[BigInt]) -> Result<Vec<BigInt>> {
    let mut out = Vec::with_capacity(n.len());
    for k in 1..=n.len() {
        let mut s = BigInt::zero();
        for d in (1..=k).filter(|d| k % d == 0) {
            s += &n[d - 1] * mobius((k / d) as u64);
        }
        let (q, r) = s.div_rem(&BigInt::from(k));
        if !r.is_zero() {
            return Err(Error::Invalid(format!("counts are not realizable: Σ μ(k/d) N_d is not divisible by {k}")));
        }
        out.push(q);
    }
    Ok(out)
}

/// Sign of the stable eigenvalue of `A^k`, equal to `sgn(tr A)^k`.
pub fn stable_sign(model: &SuspensionModel, k: usize) -> i8 {
    let lam_s = 1.0 / model.eigenvalue();
    if lam_s.powi(k as i32) > 0.0 || (lam_s < 0.0 && k.is_multiple_of(2)) {
        1
    } else {
        -1
    }
}

/// `sgn det(1 − φ_{−t*})|_{T_u}` for the period-`k` return map, with `φ_{−t*}|_{T_u} = λ^{−k}`.
pub fn unstable_epsilon(model: &SuspensionModel, k: usize) -> i8 {
    let mu = model.eigenvalue().powi(-(k as i32));
    if 1.0 - mu > 0.0 {
        1
    } else {
        -1
    }
}

/// Periodic orbit data up to period `K`.
#[derive(Clone, Debug, PartialEq)]
pub struct OrbitTable {
    pub fixed: Vec<BigInt>,
    pub primitive: Vec<BigInt>,
    pub signs: Vec<i8>,
    /// Flow period `t_y = k` of the orbits with `k` returns.
    pub periods: Vec<f64>,
}

impl OrbitTable {
    pub fn build(model: &SuspensionModel, k_max: usize) -> Result<Self> {
        let fixed = fixed_counts(model, k_max);
        let primitive = primitive_counts(&fixed)?;
        let signs = (1..=k_max).map(|k| stable_sign(model, k)).collect();
        let periods = (1..=k_max).map(|k| k as f64 * model.roof()).collect();
        Ok(OrbitTable { fixed, primitive, signs, periods })
    }

    pub fn len(&self) -> usize {
        self.fixed.len()
    }

    pub fn is_empty(&self) -> bool {
        self.fixed.is_empty()
    }

    /// First `k` with `Σ_{d|k} d P_d ≠ N_k`.
    pub fn first_inconsistency(&self) -> Option<usize> {
        (1..=self.len()).find(|&k| {
            let s: BigInt = (1..=k).filter(|d| k % d == 0).map(|d| &self.primitive[d - 1] * d).sum();
            s != self.fixed[k - 1]
        })
    }

    fn primitive_f64(&self, k: usize) -> f64 {
        self.primitive[k - 1].to_f64().unwrap_or(f64::INFINITY)
    }
}

/// A truncated Euler product with its tail bound and the closed form when defined.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ZetaEvaluation {
    pub sigma: C64,
    pub k: usize,
    pub value: C64,
    /// Bound on `|R(σ) − value|`; infinite when the tail estimate diverges.
    pub tail_bound: f64,
    pub closed_form: Option<C64>,
}

impl ZetaEvaluation {
    pub fn bounded(&self) -> bool {
        self.tail_bound.is_finite()
    }

    pub fn abs_diff(&self) -> Option<f64> {
        self.closed_form.map(|c| (c - self.value).norm())
    }
}

/// `log(1 − x)` on the principal branch, accurate for small `|x|`.
pub fn log_one_minus(x: C64) -> C64 {
    let re = 0.5 * (x.norm_sqr() - 2.0 * x.re).ln_1p();
    C64::new(re, (-x.im).atan2(1.0 - x.re))
}

fn orbit_weight(model: &SuspensionModel, table: &OrbitTable, k: usize, sigma: C64) -> C64 {
    let hol = C64::from_polar(1.0, k as f64 * model.theta);
    let s = table.signs[k - 1] as f64;
    hol * s * (-sigma * table.periods[k - 1]).exp()
}

/// `Σ_{k>K} (|λ|^k + 2)/k · |w|^k / (1 − |w|^k)` with `|w| = e^{−Re σ}`, or `None` if it diverges.
pub fn tail_exponent(model: &SuspensionModel, sigma: C64, k_max: usize) -> Option<f64> {
    let lam = model.eigenvalue().abs();
    let w = (-sigma.re).exp();
    if lam * w >= 1.0 {
        return None;
    }
    let mut sum = 0.0;
    for k in k_max + 1..k_max + 100_000 {
        let wk = w.powi(k as i32);
        let term = (lam.powi(k as i32) + 2.0) / k as f64 * wk / (1.0 - wk);
        sum += term;
        if term <= 1e-18 * sum || term == 0.0 {
            break;
        }
    }
    Some(sum)
}

/// `∏_{k≤K} (1 − s_k e^{ikθ} e^{−kσ})^{P_k}`.
pub fn fried_zeta_truncated(model: &SuspensionModel, sigma: C64, k_max: usize) -> Result<ZetaEvaluation> {
    let table = OrbitTable::build(model, k_max)?;
    Ok(evaluate_with_table(model, &table, sigma))
}

/// Same as [`fried_zeta_truncated`] with a prebuilt orbit table.
pub fn evaluate_with_table(model: &SuspensionModel, table: &OrbitTable, sigma: C64) -> ZetaEvaluation {
    let k_max = table.len();
    let mut log = C64::new(0.0, 0.0);
    for k in 1..=k_max {
        log += log_one_minus(orbit_weight(model, table, k, sigma)) * table.primitive_f64(k);
    }
    let value = log.exp();
    let tail_bound = tail_exponent(model, sigma, k_max).map_or(f64::INFINITY, |b| value.norm() * b.exp_m1());
    ZetaEvaluation { sigma, k: k_max, value, tail_bound, closed_form: fried_closed_form(model, sigma).ok() }
}

fn closed_w(model: &SuspensionModel, sigma: C64) -> C64 {
    (-sigma + C64::new(0.0, model.theta)).exp()
}

/// Order of the closed form at `σ`: `−2` at `w = 1`, `+1` at `w = λ^{∓1}`, otherwise 0.
pub fn closed_form_order(model: &SuspensionModel, sigma: C64) -> i64 {
    let w = closed_w(model, sigma);
    let lam = model.eigenvalue();
    let tol = 1e-12;
    if (w - 1.0).norm() <= tol {
        -2
    } else if (w * lam - 1.0).norm() <= tol || (w / lam - 1.0).norm() <= tol {
        1
    } else {
        0
    }
}

/// `(1 − λw)(1 − w/λ)/(1 − w)²` with `w = e^{−σ + iθ}` and `λ` the signed expanding eigenvalue.
pub fn fried_closed_form(model: &SuspensionModel, sigma: C64) -> Result<C64> {
    let order = closed_form_order(model, sigma);
    if order < 0 {
        return Err(Error::Pole { order });
    }
    let w = closed_w(model, sigma);
    let lam = model.eigenvalue();
    let one = C64::new(1.0, 0.0);
    Ok((one - w * lam) * (one - w / lam) / ((one - w) * (one - w)))
}

/// `d/dσ log` of the closed form.
pub fn fried_closed_form_log_derivative(model: &SuspensionModel, sigma: C64) -> C64 {
    let w = closed_w(model, sigma);
    let lam = model.eigenvalue();
    let one = C64::new(1.0, 0.0);
    w * lam / (one - w * lam) + (w / lam) / (one - w / lam) - w * 2.0 / (one - w)
}

/// `(−1)^{n_s} Σ_y Σ_{j ≥ 1, j t_y ≤ K} (1/j) Tr[hol^j] e^{−j t_y σ}` over primitive orbits `y`.
pub fn fried_log_series(model: &SuspensionModel, sigma: C64, k_max: usize) -> Result<C64> {
    let table = OrbitTable::build(model, k_max)?;
    Ok(log_series_with_table(model, &table, sigma))
}

pub fn log_series_with_table(model: &SuspensionModel, table: &OrbitTable, sigma: C64) -> C64 {
    let k_max = table.len();
    let mut acc = C64::new(0.0, 0.0);
    for k in 1..=k_max {
        let x = orbit_weight(model, table, k, sigma);
        let mut inner = C64::new(0.0, 0.0);
        let mut xj = C64::new(1.0, 0.0);
        for j in 1..=(k_max / k) {
            xj *= x;
            inner += xj / j as f64;
        }
        acc += inner * table.primitive_f64(k);
    }
    if N_S % 2 == 1 {
        -acc
    } else {
        acc
    }
}

/// Forward product and the product of the reversed flow on `F* ⊗ o(TY)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DualityCheck {
    pub forward: C64,
    pub reversed: C64,
    pub residual: f64,
}

/// Builds the reversed-flow product from the inverse return maps and compares it with the
/// `(−1)^{n−1}` power of the forward product.
pub fn duality_check(model: &SuspensionModel, sigma: C64, k_max: usize) -> Result<DualityCheck> {
    let table = OrbitTable::build(model, k_max)?;
    let forward = evaluate_with_table(model, &table, sigma).value;
    let inv = inverse_matrix(model.matrix());
    let reversed_model = SuspensionModel::new(inv, model.theta)?;
    let exponent: f64 = if (N_U + 1).is_multiple_of(2) { 1.0 } else { -1.0 };
    let mut log = C64::new(0.0, 0.0);
    for k in 1..=k_max {
        // F* has holonomy e^{−ikθ} along y, traversed backwards by −Z.
        let hol = C64::from_polar(1.0, -(k as f64) * model.theta).inv();
        // For −Z the stable bundle is T_uY, where A^{−k} acts by λ^{−k}.
        let s = stable_sign_of_inverse(&reversed_model, k) as f64;
        let orient = if matrix_power_det_sign(inv, k) > 0 { 1.0 } else { -1.0 };
        let x = hol * s * orient * (-sigma * table.periods[k - 1]).exp();
        log += log_one_minus(x) * table.primitive_f64(k) * exponent;
    }
    let reversed = log.exp();
    let power = if (N - 1).is_multiple_of(2) { forward } else { forward.inv() };
    Ok(DualityCheck { forward, reversed, residual: (reversed / power - 1.0).norm() })
}

fn inverse_matrix(a: [[i64; 2]; 2]) -> [[i64; 2]; 2] {
    [[a[1][1], -a[0][1]], [-a[1][0], a[0][0]]]
}

fn matrix_power_det_sign(a: [[i64; 2]; 2], k: usize) -> i64 {
    let det = a[0][0] * a[1][1] - a[0][1] * a[1][0];
    det.signum().pow(k as u32)
}

/// Sign of the eigenvalue of `B^k` on the contracting direction of `B`.
fn stable_sign_of_inverse(b: &SuspensionModel, k: usize) -> i8 {
    stable_sign(b, k)
}

/// `|value(θ, σ) − value(0, σ − iθ)|`.
pub fn twist_shift_residual(model: &SuspensionModel, sigma: C64, k_max: usize) -> Result<f64> {
    let a = fried_zeta_truncated(model, sigma, k_max)?.value;
    let b = fried_zeta_truncated(&model.with_theta(0.0), sigma - C64::new(0.0, model.theta), k_max)?.value;
    Ok((a - b).norm() / a.norm().max(1.0))
}

/// `|R_{F*}(σ) − conj R_F(σ̄)|` with `F*` carrying the conjugate twist.
pub fn conjugation_residual(model: &SuspensionModel, sigma: C64, k_max: usize) -> Result<f64> {
    let a = fried_zeta_truncated(&model.with_theta(-model.theta), sigma, k_max)?.value;
    let b = fried_zeta_truncated(model, sigma.conj(), k_max)?.value.conj();
    Ok((a - b).norm() / a.norm().max(1.0))
}

/// Whether `N_k ≤ C e^{c k}` for `k ≤ K` with `c = log|λ| + margin`.
pub fn growth_bound_holds(model: &SuspensionModel, k_max: usize, constant: f64, margin: f64) -> bool {
    let c = model.eigenvalue().abs().ln() + margin;
    fixed_counts(model, k_max)
        .iter()
        .enumerate()
        .all(|(j, n)| n.to_f64().unwrap_or(f64::INFINITY) <= constant * (c * (j + 1) as f64).exp())
}

/// Integer matrix power `A^k`.
pub fn matrix_power(a: [[i64; 2]; 2], k: usize) -> [[BigInt; 2]; 2] {
    let mut r = [[BigInt::one(), BigInt::zero()], [BigInt::zero(), BigInt::one()]];
    for _ in 0..k {
        let n = [
            [&r[0][0] * a[0][0] + &r[0][1] * a[1][0], &r[0][0] * a[0][1] + &r[0][1] * a[1][1]],
            [&r[1][0] * a[0][0] + &r[1][1] * a[1][0], &r[1][0] * a[0][1] + &r[1][1] * a[1][1]],
        ];
        r = n;
    }
    r
}
