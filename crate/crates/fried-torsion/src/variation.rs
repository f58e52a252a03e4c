//! Homotopies, the 1-form `κ = Trs[α 𝐝δ]` on families of exact codifferentials, finite
//! difference checks of the connection and closedness identities, and the exact algebraic
//! identities in `Λ(T*) ⊗̂ End(E)`.

use crate::detline::{delta_cohomology_dims, tau_delta};
use crate::error::{Error, Result};
use crate::graded::{sign, Complex, GradedMap, GradedSpace, DIFFERENTIAL_RTOL};
use crate::linalg::{self, c, zeros, Mat, C64};
use std::collections::BTreeMap;
use std::sync::Arc;

/// Tolerance for `[δ, α] = 1`.
pub const HOMOTOPY_TOL: f64 = 1e-10;
/// Default central-difference step.
pub const DEFAULT_STEP: f64 = 1e-4;

/// A map `α` of shift +1 with `[δ, α] = 1`.
#[derive(Clone, Debug, PartialEq)]
pub struct Homotopy {
    pub alpha: GradedMap,
}

impl Homotopy {
    /// Accepts `α` after checking `[δ, α] = 1`.
    pub fn new(delta: &GradedMap, alpha: GradedMap) -> Result<Self> {
        if alpha.shift() != 1 {
            return Err(Error::Shape(format!("a homotopy has shift +1, got {}", alpha.shift())));
        }
        let r = homotopy_residual(delta, &alpha)?;
        if r > HOMOTOPY_TOL * (1.0 + alpha.norm() * delta.norm()) {
            return Err(Error::Invalid(format!("[δ, α] − 1 has size {r:e}")));
        }
        Ok(Homotopy { alpha })
    }

    /// `α + [δ, β]` for `β` of shift +2, again a homotopy.
    pub fn shifted_by(&self, delta: &GradedMap, beta: &GradedMap) -> Result<Homotopy> {
        if beta.shift() != 2 {
            return Err(Error::Shape("gauge term must have shift +2".into()));
        }
        Homotopy::new(delta, self.alpha.add(&delta.supercommutator(beta)?)?)
    }
}

/// `max |[δ, α] − 1|`.
pub fn homotopy_residual(delta: &GradedMap, alpha: &GradedMap) -> Result<f64> {
    Ok(delta.supercommutator(alpha)?.sub(&GradedMap::identity(delta.source()))?.max_abs())
}

/// `α = [δ, δ*]⁻¹ δ*`, evaluated as the blockwise pseudo-inverse of `δ`.
pub fn homotopy_from_metric(delta: &GradedMap) -> Result<Homotopy> {
    let s = delta.source();
    let scale = delta.norm();
    let alpha = GradedMap::from_fn(s, s, 1, |i| linalg::pinv(&delta.block_or_zero(i + 1), scale))?;
    Homotopy::new(delta, alpha).map_err(|e| match e {
        Error::Invalid(_) => Error::Singular("δ is not exact".into()),
        other => other,
    })
}

/// `κ(δ̇) = −Trs[α δ̇]`; the sign is the odd map `α` passing the 1-form slot of `𝐝δ`.
pub fn kappa_from(alpha: &GradedMap, delta_dot: &GradedMap) -> Result<C64> {
    Ok(-alpha.compose(delta_dot)?.supertrace()?)
}

type Eval = dyn Fn(f64, f64) -> GradedMap + Send + Sync;

/// A smooth two-parameter family `(t, u) ↦ δ(t, u)` of exact codifferentials on a fixed space.
#[derive(Clone)]
pub struct DifferentialCurve {
    pub space: GradedSpace,
    eval: Arc<Eval>,
}

/// A coordinate direction in the parameter plane.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    T,
    U,
}

impl std::fmt::Debug for DifferentialCurve {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("DifferentialCurve").field("space", &self.space).finish_non_exhaustive()
    }
}

/// Blockwise `exp(x)` of a degree-0 map.
pub fn exp_degree_zero(x: &GradedMap) -> GradedMap {
    GradedMap::from_fn(x.source(), x.target(), 0, |i| x.block_or_zero(i).exp()).expect("exponential blocks")
}

impl DifferentialCurve {
    pub fn new(space: GradedSpace, eval: impl Fn(f64, f64) -> GradedMap + Send + Sync + 'static) -> Self {
        DifferentialCurve { space, eval: Arc::new(eval) }
    }

    pub fn constant(delta: GradedMap) -> Self {
        let space = delta.source().clone();
        Self::new(space, move |_, _| delta.clone())
    }

    /// `δ(t, u) = e^t δ₀`.
    pub fn scaling(delta0: GradedMap) -> Self {
        let space = delta0.source().clone();
        Self::new(space, move |t, _| delta0.scale(c(t.exp())))
    }

    /// `δ(t, u) = g δ₀ g⁻¹` with `g = exp(t X + u Y)` for degree-0 generators `X`, `Y`.
    pub fn conjugation(delta0: GradedMap, x: GradedMap, y: GradedMap) -> Self {
        let space = delta0.source().clone();
        Self::new(space, move |t, u| {
            let gen = x.scale(c(t)).add(&y.scale(c(u))).expect("generators on one space");
            let g = exp_degree_zero(&gen);
            let gi = exp_degree_zero(&gen.scale(c(-1.0)));
            g.compose(&delta0.compose(&gi).expect("composable")).expect("composable")
        })
    }

    pub fn at(&self, t: f64, u: f64) -> GradedMap {
        (self.eval)(t, u)
    }

    /// `δ(t, u)` after checking `δ² = 0` and exactness.
    pub fn checked_at(&self, t: f64, u: f64) -> Result<GradedMap> {
        let x = self.at(t, u);
        let c = Complex::new(self.space.clone(), None, Some(x.clone()))?;
        let dims = delta_cohomology_dims(&c.space, &x)?;
        if dims.iter().any(|&h| h > 0) {
            return Err(Error::NotExact { dims });
        }
        let sq = x.compose(&x)?.norm();
        if sq > DIFFERENTIAL_RTOL * x.norm().powi(2) && sq > 0.0 {
            return Err(Error::NotDifferential { name: "δ", residual: sq, tolerance: DIFFERENTIAL_RTOL * x.norm().powi(2) });
        }
        Ok(x)
    }

    fn shifted(&self, t: f64, u: f64, dir: Direction, s: f64) -> (f64, f64) {
        match dir {
            Direction::T => (t + s, u),
            Direction::U => (t, u + s),
        }
    }

    /// Central difference `(δ(x + h) − δ(x − h)) / 2h` along `dir`.
    pub fn derivative(&self, t: f64, u: f64, dir: Direction, h: f64) -> Result<GradedMap> {
        let (t1, u1) = self.shifted(t, u, dir, h);
        let (t0, u0) = self.shifted(t, u, dir, -h);
        Ok(self.at(t1, u1).sub(&self.at(t0, u0))?.scale(c(0.5 / h)))
    }
}

/// `κ(∂_dir)` at `(t, u)` with the metric homotopy and step `h`.
pub fn kappa_eval(curve: &DifferentialCurve, t: f64, u: f64, dir: Direction, h: f64) -> Result<C64> {
    let x = curve.checked_at(t, u)?;
    let a = homotopy_from_metric(&x)?;
    kappa_from(&a.alpha, &curve.derivative(t, u, dir, h)?)
}

/// `κ(∂_dir)` for an explicitly supplied homotopy at `(t, u)`.
pub fn kappa_eval_with(curve: &DifferentialCurve, alpha: &Homotopy, t: f64, u: f64, dir: Direction, h: f64) -> Result<C64> {
    kappa_from(&alpha.alpha, &curve.derivative(t, u, dir, h)?)
}

fn dlog_tau_delta(curve: &DifferentialCurve, t: f64, u: f64, dir: Direction, h: f64) -> Result<C64> {
    let tau = |s: f64| -> Result<C64> {
        let (a, b) = curve.shifted(t, u, dir, s);
        Ok(tau_delta(&Complex::new(curve.space.clone(), None, Some(curve.checked_at(a, b)?))?)?.scalar)
    };
    Ok((tau(h)? / tau(-h)?).ln() / (2.0 * h))
}

/// Outcome of the connection identity `𝐝 log τ(δ) = κ`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ConnectionCheck {
    pub kappa: C64,
    pub dlog_tau: C64,
    pub residual: f64,
    pub richardson: bool,
}

/// Compares `∂ log τ(δ)` with `κ(∂)`; when the residual exceeds `tol`, both sides are
/// Richardson-extrapolated from steps `h` and `h/2`.
pub fn check_connection_identity(
    curve: &DifferentialCurve,
    t: f64,
    u: f64,
    dir: Direction,
    h: f64,
    tol: f64,
) -> Result<ConnectionCheck> {
    let k1 = kappa_eval(curve, t, u, dir, h)?;
    let l1 = dlog_tau_delta(curve, t, u, dir, h)?;
    let r1 = (k1 - l1).norm();
    if r1 <= tol {
        return Ok(ConnectionCheck { kappa: k1, dlog_tau: l1, residual: r1, richardson: false });
    }
    let k2 = kappa_eval(curve, t, u, dir, h / 2.0)?;
    let l2 = dlog_tau_delta(curve, t, u, dir, h / 2.0)?;
    let kappa = (k2 * 4.0 - k1) / 3.0;
    let dlog_tau = (l2 * 4.0 - l1) / 3.0;
    Ok(ConnectionCheck { kappa, dlog_tau, residual: (kappa - dlog_tau).norm(), richardson: true })
}

/// `|∂_t κ(∂_u) − ∂_u κ(∂_t)|` by second-order central differences.
pub fn check_kappa_closed(curve: &DifferentialCurve, t: f64, u: f64, h: f64) -> Result<f64> {
    let ku = |a: f64| kappa_eval(curve, a, u, Direction::U, h);
    let kt = |b: f64| kappa_eval(curve, t, b, Direction::T, h);
    let dt_ku = (ku(t + h)? - ku(t - h)?) / (2.0 * h);
    let du_kt = (kt(u + h)? - kt(u - h)?) / (2.0 * h);
    Ok((dt_ku - du_kt).norm())
}

/// `∮ κ` around the square of side `side` centred at `(t, u)`, Simpson's rule with `n` panels per side.
pub fn kappa_loop_integral(curve: &DifferentialCurve, t: f64, u: f64, side: f64, n: usize, h: f64) -> Result<C64> {
    let n = n.max(2) & !1;
    let half = side / 2.0;
    let corners = [(t - half, u - half), (t + half, u - half), (t + half, u + half), (t - half, u + half)];
    let mut total = C64::new(0.0, 0.0);
    for k in 0..4 {
        let (a0, b0) = corners[k];
        let (a1, b1) = corners[(k + 1) % 4];
        let (dir, len) = if (b1 - b0).abs() < 1e-300 { (Direction::T, a1 - a0) } else { (Direction::U, b1 - b0) };
        let mut acc = C64::new(0.0, 0.0);
        for j in 0..=n {
            let s = j as f64 / n as f64;
            let w = if j == 0 || j == n { 1.0 } else if j % 2 == 1 { 4.0 } else { 2.0 };
            acc += kappa_eval(curve, a0 + s * (a1 - a0), b0 + s * (b1 - b0), dir, h)? * w;
        }
        total += acc * (len / (3.0 * n as f64));
    }
    Ok(total)
}

/// A homogeneous element of `Λ(ℝ^k) ⊗̂ End(E)`: coefficients indexed by form masks.
#[derive(Clone, Debug, PartialEq)]
pub struct FormOp {
    pub terms: BTreeMap<u32, Mat>,
    /// Parity of the operator part.
    pub parity: u8,
}

/// Sign of `dt_I ∧ dt_J` relative to `dt_{I∪J}` in increasing order, zero when they overlap.
pub fn wedge_sign(i: u32, j: u32) -> i32 {
    if i & j != 0 {
        return 0;
    }
    let mut swaps = 0;
    for b in 0..32 {
        if j >> b & 1 == 1 {
            swaps += (i >> (b + 1)).count_ones();
        }
    }
    if swaps % 2 == 0 {
        1
    } else {
        -1
    }
}

impl FormOp {
    pub fn scalar(m: Mat, parity: u8) -> Self {
        FormOp { terms: BTreeMap::from([(0, m)]), parity }
    }

    /// `Σ_j dt_j ⊗ m_j`.
    pub fn one_form(ms: &[Mat], parity: u8) -> Self {
        FormOp { terms: ms.iter().enumerate().map(|(j, m)| (1u32 << j, m.clone())).collect(), parity }
    }

    /// `(ω_I ⊗ A)(ω_J ⊗ B) = ε(I, J) (−1)^{|A||J|} ω_{I∪J} ⊗ AB`.
    pub fn mul(&self, other: &FormOp) -> FormOp {
        let mut terms: BTreeMap<u32, Mat> = BTreeMap::new();
        for (&i, a) in &self.terms {
            for (&j, b) in &other.terms {
                let w = wedge_sign(i, j);
                if w == 0 {
                    continue;
                }
                let s = w * if self.parity as u32 * j.count_ones() % 2 == 1 { -1 } else { 1 };
                let prod = a * b * c(s as f64);
                terms.entry(i | j).and_modify(|m| *m += &prod).or_insert(prod);
            }
        }
        FormOp { terms, parity: (self.parity + other.parity) % 2 }
    }

    pub fn add(&self, other: &FormOp) -> FormOp {
        let mut terms = self.terms.clone();
        for (k, v) in &other.terms {
            terms.entry(*k).and_modify(|m| *m += v).or_insert_with(|| v.clone());
        }
        FormOp { terms, parity: self.parity }
    }

    pub fn scale(&self, a: C64) -> FormOp {
        FormOp { terms: self.terms.iter().map(|(k, v)| (*k, v * a)).collect(), parity: self.parity }
    }

    /// Total parity, form degree plus operator parity, for homogeneous elements.
    pub fn total_parity(&self) -> u8 {
        let deg = self.terms.keys().next().map_or(0, |k| k.count_ones());
        ((self.parity as u32 + deg) % 2) as u8
    }

    pub fn supercommutator(&self, other: &FormOp) -> FormOp {
        let s = if self.total_parity() * other.total_parity() == 1 { 1.0 } else { -1.0 };
        self.mul(other).add(&other.mul(self).scale(c(s)))
    }

    pub fn coefficient(&self, mask: u32, n: usize) -> Mat {
        self.terms.get(&mask).cloned().unwrap_or_else(|| zeros(n, n))
    }
}

/// First and second order jets of `δ` and `α` along a family `g = exp(Σ t_j X_j)`, with
/// gauge terms `[δ, β_j]` added to `𝐝α`.
#[derive(Clone, Debug)]
pub struct FormJets {
    /// `∂_j δ = [X_j, δ]`.
    pub d_delta: Vec<Mat>,
    /// `∂_j α = [X_j, α] + [δ, β_j]`.
    pub d_alpha: Vec<Mat>,
    /// Symmetrized `∂_k ∂_j δ`.
    pub dd_delta: Vec<Vec<Mat>>,
}

fn comm(a: &Mat, b: &Mat) -> Mat {
    a * b - b * a
}

impl FormJets {
    /// Jets for degree-0 generators `xs` and shift +2 gauge terms `betas`.
    pub fn from_generators(delta: &GradedMap, alpha: &Homotopy, xs: &[GradedMap], betas: &[GradedMap]) -> Result<Self> {
        if xs.len() != betas.len() || xs.iter().any(|x| x.shift() != 0) || betas.iter().any(|b| b.shift() != 2) {
            return Err(Error::Shape("jets need matching degree-0 generators and shift +2 gauge terms".into()));
        }
        let dl = delta.to_dense();
        let al = alpha.alpha.to_dense();
        let xd: Vec<Mat> = xs.iter().map(|x| x.to_dense()).collect();
        let d_delta: Vec<Mat> = xd.iter().map(|x| comm(x, &dl)).collect();
        let d_alpha = xd
            .iter()
            .zip(betas)
            .map(|(x, b)| {
                let bd = b.to_dense();
                comm(x, &al) + &dl * &bd - &bd * &dl
            })
            .collect();
        let dd_delta = (0..xd.len())
            .map(|k| (0..xd.len()).map(|j| (comm(&xd[k], &d_delta[j]) + comm(&xd[j], &d_delta[k])) * c(0.5)).collect())
            .collect();
        Ok(FormJets { d_delta, d_alpha, dd_delta })
    }
}

/// Residuals of the three exact identities, relative to the largest term entering each.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AlgebraicIdentities {
    /// `𝐝(α𝐝δ) = [δ, (𝐝α)α𝐝δ] + (α𝐝δ)²`.
    pub curvature: f64,
    /// `N − αδ = [δ, αN]`.
    pub number: f64,
    /// `Trs[α[f, δ]] = Trs[f]` for `f = dt ⊗ F`.
    pub gap: f64,
}

impl AlgebraicIdentities {
    pub fn max(&self) -> f64 {
        self.curvature.max(self.number).max(self.gap)
    }
}

fn relative(diff: f64, scale: f64) -> f64 {
    diff / scale.max(1.0)
}

fn dense_supertrace(space: &GradedSpace, m: &Mat) -> C64 {
    let mut at = 0;
    let mut acc = C64::new(0.0, 0.0);
    for i in space.degrees() {
        for k in 0..space.dim(i) {
            acc += m[(at + k, at + k)] * sign(i as i64) as f64;
        }
        at += space.dim(i);
    }
    acc
}

/// Evaluates the three identities for `δ`, a homotopy `α`, jets and a degree-0 `F`.
pub fn check_algebraic_identities(
    delta: &GradedMap,
    alpha: &Homotopy,
    jets: &FormJets,
    f: &GradedMap,
) -> Result<AlgebraicIdentities> {
    if f.shift() != 0 {
        return Err(Error::NotDegreeZero { op: "gap identity", shift: f.shift() });
    }
    let space = delta.source();
    let n = space.total_dim();
    let dl = delta.to_dense();
    let al = alpha.alpha.to_dense();
    let k = jets.d_delta.len();

    let mut lhs: BTreeMap<u32, Mat> = BTreeMap::new();
    for a in 0..k {
        for b in 0..k {
            if a == b {
                continue;
            }
            let w = wedge_sign(1 << a, 1 << b) as f64;
            let term = (&jets.d_alpha[a] * &jets.d_delta[b] + &al * &jets.dd_delta[a][b]) * c(-w);
            lhs.entry((1 << a) | (1 << b)).and_modify(|m| *m += &term).or_insert(term);
        }
    }
    let de = FormOp::scalar(dl.clone(), 1);
    let alf = FormOp::scalar(al.clone(), 1);
    let ddf = FormOp::one_form(&jets.d_delta, 1);
    let daf = FormOp::one_form(&jets.d_alpha, 1);
    let c1 = alf.mul(&ddf);
    let rhs = de.supercommutator(&daf.mul(&alf).mul(&ddf)).add(&c1.mul(&c1));
    let mut diff: f64 = 0.0;
    let mut scale: f64 = 0.0;
    for mask in lhs.keys().chain(rhs.terms.keys()) {
        let l = lhs.get(mask).cloned().unwrap_or_else(|| zeros(n, n));
        let r = rhs.coefficient(*mask, n);
        diff = diff.max(linalg::max_abs(&(&l - &r)));
        scale = scale.max(linalg::max_abs(&l)).max(linalg::max_abs(&r));
    }
    let curvature = relative(diff, scale);

    let num = GradedMap::number_operator(space);
    let lhs_n = num.sub(&alpha.alpha.compose(delta)?)?;
    let rhs_n = delta.supercommutator(&alpha.alpha.compose(&num)?)?;
    let ad = alpha.alpha.compose(delta)?;
    let an = alpha.alpha.compose(&num)?;
    let term_scale = [num.max_abs(), ad.max_abs(), delta.compose(&an)?.max_abs(), an.compose(delta)?.max_abs()]
        .into_iter()
        .fold(0.0, f64::max);
    let number = relative(lhs_n.sub(&rhs_n)?.max_abs(), term_scale);

    let ff = FormOp::one_form(&[f.to_dense()], 0);
    let gap_form = alf.mul(&ff.supercommutator(&de));
    let lhs_g = dense_supertrace(space, &gap_form.coefficient(1, n));
    let rhs_g = f.supertrace()?;
    let gap_terms = gap_form.coefficient(1, n);
    let diag_scale: f64 = (0..n).map(|j| gap_terms[(j, j)].norm()).sum();
    let gap = relative((lhs_g - rhs_g).norm(), rhs_g.norm().max(diag_scale));
    Ok(AlgebraicIdentities { curvature, number, gap })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graded::{random_degree_map, random_exact_codifferential_with, trial_rng};

    fn hand_delta(v: f64) -> GradedMap {
        let e = GradedSpace::new(0, vec![1, 1]).unwrap();
        let mut x = GradedMap::zero(&e, &e, -1);
        x.set_block(1, Mat::from_element(1, 1, c(v))).unwrap();
        x
    }

    #[test]
    fn hand_homotopies() {
        assert!((homotopy_from_metric(&hand_delta(1.0)).unwrap().alpha.block(0).unwrap()[(0, 0)] - 1.0).norm() < 1e-15);
        let a = homotopy_from_metric(&hand_delta(3.0)).unwrap();
        assert!((a.alpha.block(0).unwrap()[(0, 0)] - 1.0 / 3.0).norm() < 1e-15);
    }

    #[test]
    fn pseudo_inverse_is_the_metric_homotopy() {
        let mut rng = trial_rng(21, 0);
        let e = GradedSpace::new(-1, vec![2, 3, 1]).unwrap();
        let x = random_exact_codifferential_with(&mut rng, &e).unwrap();
        let adj = x.adjoint();
        let l = x.supercommutator(&adj).unwrap();
        let direct = crate::graded::invert_degree_zero(&l).unwrap().compose(&adj).unwrap();
        let a = homotopy_from_metric(&x).unwrap();
        assert!(a.alpha.sub(&direct).unwrap().max_abs() < 1e-9 * (1.0 + direct.max_abs()));
    }

    #[test]
    fn scaling_curve_hand_value() {
        let curve = DifferentialCurve::scaling(hand_delta(3.0));
        let x = curve.at(0.3, 0.0);
        let a = homotopy_from_metric(&x).unwrap();
        let dot = curve.derivative(0.3, 0.0, Direction::T, DEFAULT_STEP).unwrap();
        let raw = a.alpha.compose(&dot).unwrap().supertrace().unwrap();
        assert!((raw + 1.0).norm() < 1e-8);
        let k = kappa_eval(&curve, 0.3, 0.0, Direction::T, DEFAULT_STEP).unwrap();
        assert!((k - 1.0).norm() < 1e-8);
        let chk = check_connection_identity(&curve, 0.3, 0.0, Direction::T, DEFAULT_STEP, 1e-5).unwrap();
        assert!(chk.residual < 1e-8);
    }

    #[test]
    fn constant_curve_has_zero_kappa() {
        let curve = DifferentialCurve::constant(hand_delta(2.0));
        assert_eq!(kappa_eval(&curve, 0.0, 0.0, Direction::T, DEFAULT_STEP).unwrap(), c(0.0));
        assert_eq!(check_kappa_closed(&curve, 0.0, 0.0, 1e-3).unwrap(), 0.0);
    }

    #[test]
    fn wedge_signs() {
        assert_eq!(wedge_sign(0b01, 0b10), 1);
        assert_eq!(wedge_sign(0b10, 0b01), -1);
        assert_eq!(wedge_sign(0b01, 0b01), 0);
        assert_eq!(wedge_sign(0b100, 0b011), 1);
    }

    #[test]
    fn identities_on_a_random_instance() {
        let mut rng = trial_rng(17, 0);
        let e = GradedSpace::new(0, vec![1, 3, 3, 1]).unwrap();
        let x = random_exact_codifferential_with(&mut rng, &e).unwrap();
        let a = homotopy_from_metric(&x).unwrap();
        let xs: Vec<GradedMap> = (0..2).map(|_| random_degree_map(&mut rng, &e, 0)).collect();
        let bs: Vec<GradedMap> = (0..2).map(|_| random_degree_map(&mut rng, &e, 2)).collect();
        let jets = FormJets::from_generators(&x, &a, &xs, &bs).unwrap();
        let f = random_degree_map(&mut rng, &e, 0);
        let r = check_algebraic_identities(&x, &a, &jets, &f).unwrap();
        assert!(r.max() < 1e-12, "{r:?}");
    }

    #[test]
    fn identities_on_the_hand_instance() {
        let x = hand_delta(1.0);
        let e = x.source().clone();
        let a = homotopy_from_metric(&x).unwrap();
        let jets = FormJets::from_generators(&x, &a, &[], &[]).unwrap();
        let f = GradedMap::identity(&e);
        let r = check_algebraic_identities(&x, &a, &jets, &f).unwrap();
        assert_eq!(r.number, 0.0);
        assert!(r.max() < 1e-15);
    }
}
