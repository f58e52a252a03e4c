//! Determinant lines as scalars relative to standard frames, the canonical sections
//! `τ(d)`, `τ(δ)` and `ρ`, torsion ratios, pairings, norms, determinants of graded
//! isomorphisms and the reflection-comparison section `ρ_Γ`.

use crate::error::{Error, Result};
use crate::graded::{
    cohomology, cohomology_with_scale, invert_degree_zero, random_matrix, sign, Complex, GradedMap, GradedSpace,
};
use crate::linalg::{self, det, eye, hstack, zeros, Mat, PowerProduct, C64, LOG_SPACE_DEGREES};
use num_traits::{One, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Tolerance for the reflection axioms, relative to the operator scale.
pub const GAMMA_RTOL: f64 = 1e-10;

/// `⊗_k (det E_k)^{e_k}` with each `det E_k = ⊗_{i=p}^{q} (det E_k^i)^{(−1)^i}` in increasing `i`.
#[derive(Clone, Debug, PartialEq)]
pub struct Frame {
    lines: Vec<(GradedSpace, i8)>,
}

/// One factor `(det E^i)^{±1}` of a frame, over space number `space`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FrameFactor {
    pub space: usize,
    pub degree: i32,
    pub exponent: i8,
}

impl Frame {
    pub fn standard(space: &GradedSpace) -> Frame {
        Frame { lines: vec![(space.clone(), 1)] }
    }

    pub fn lines(&self) -> &[(GradedSpace, i8)] {
        &self.lines
    }

    pub fn factors(&self) -> Vec<FrameFactor> {
        self.lines
            .iter()
            .enumerate()
            .flat_map(|(k, (s, e))| {
                s.degrees().map(move |i| FrameFactor { space: k, degree: i, exponent: e * sign(i as i64) as i8 })
            })
            .collect()
    }

    pub fn inverse(&self) -> Frame {
        Frame { lines: self.lines.iter().map(|(s, e)| (s.clone(), -e)).collect() }
    }

    pub fn tensor(&self, other: &Frame) -> Frame {
        Frame { lines: self.lines.iter().chain(other.lines.iter()).cloned().collect() }
    }

    /// Parity of the tensor product, the sum of `dim E_k mod 2`.
    pub fn parity(&self) -> u8 {
        (self.lines.iter().map(|(s, _)| s.parity() as usize).sum::<usize>() % 2) as u8
    }

    fn single(&self) -> Option<(&GradedSpace, i8)> {
        match self.lines.as_slice() {
            [(s, e)] => Some((s, *e)),
            _ => None,
        }
    }
}

/// An element of a determinant line: a coefficient on the standard frame.
#[derive(Clone, Debug, PartialEq)]
pub struct DetLineElement {
    pub frame: Frame,
    pub scalar: C64,
    pub parity: u8,
}

impl DetLineElement {
    pub fn new(frame: Frame, scalar: C64) -> Self {
        let parity = frame.parity();
        DetLineElement { frame, scalar, parity }
    }

    pub fn standard(space: &GradedSpace, scalar: C64) -> Self {
        Self::new(Frame::standard(space), scalar)
    }

    /// `s / t` for elements of the same line.
    pub fn ratio(&self, other: &DetLineElement) -> Result<C64> {
        if self.frame != other.frame {
            return Err(Error::FrameMismatch("ratio of elements of different lines".into()));
        }
        if other.scalar.is_zero() {
            return Err(Error::Singular("division by the zero element".into()));
        }
        Ok(self.scalar / other.scalar)
    }

    pub fn tensor(&self, other: &DetLineElement) -> DetLineElement {
        Self::new(self.frame.tensor(&other.frame), self.scalar * other.scalar)
    }

    pub fn inverse(&self) -> Result<DetLineElement> {
        if self.scalar.is_zero() {
            return Err(Error::Singular("inverse of the zero element".into()));
        }
        Ok(Self::new(self.frame.inverse(), self.scalar.inv()))
    }

    pub fn scale(&self, a: C64) -> DetLineElement {
        Self::new(self.frame.clone(), self.scalar * a)
    }
}

/// How the complements inside a section are chosen.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Complements {
    /// Orthonormal complements from a singular value decomposition.
    Orthogonal,
    /// Generic complements drawn from the given seed.
    Random(u64),
}

struct Picker {
    rng: Option<ChaCha8Rng>,
}

impl Picker {
    fn new(choice: Complements) -> Self {
        match choice {
            Complements::Orthogonal => Picker { rng: None },
            Complements::Random(s) => Picker { rng: Some(ChaCha8Rng::seed_from_u64(s)) },
        }
    }

    /// Complement of `ker m`, from the row space of `m`.
    fn complement_of_kernel(&mut self, m: &Mat, scale: f64) -> Mat {
        let sp = linalg::spaces(m, scale);
        match &mut self.rng {
            None => sp.coimage,
            Some(r) => random_matrix(r, m.ncols(), sp.rank),
        }
    }
}

fn product_for(space: &GradedSpace) -> PowerProduct {
    PowerProduct::new(space.len() > LOG_SPACE_DEGREES)
}

/// `Σ_i α_i β_i mod 2` with cumulative parities `α_i = Σ_{j≤i} a_j`, `β_i = Σ_{j≤i} b_j`.
fn cumulative_pairing(a: &[usize], b: &[usize]) -> usize {
    let (mut sa, mut sb, mut acc) = (0, 0, 0);
    for (x, y) in a.iter().zip(b) {
        sa += x;
        sb += y;
        acc += (sa % 2) * (sb % 2);
    }
    acc % 2
}

/// `∏ det[d σ^{i−1} | h^i | σ^i]^{(−1)^i}` with `σ^i` a complement of `ker d^i`, times the
/// reordering sign `(−1)^{Σ α_i β_i}`.
fn d_section(space: &GradedSpace, d: &GradedMap, reps: Option<&[Mat]>, choice: Complements, scale: f64) -> Result<C64> {
    let mut pick = Picker::new(choice);
    let mut prod = product_for(space);
    let mut prev: Option<Mat> = None;
    for (k, i) in space.degrees().enumerate() {
        let n = space.dim(i);
        let im = match &prev {
            Some(s) => d.block_or_zero(i - 1) * s,
            None => zeros(n, 0),
        };
        let s = pick.complement_of_kernel(&d.block_or_zero(i), scale);
        let h = reps.map_or_else(|| zeros(n, 0), |r| r[k].clone());
        if im.ncols() + h.ncols() + s.ncols() != n {
            return Err(Error::BadRepresentatives(format!(
                "degree {i}: {} + {} + {} columns for dimension {n}",
                im.ncols(),
                h.ncols(),
                s.ncols()
            )));
        }
        prod.push(det(&hstack(&[&im, &h, &s], n)), sign(i as i64));
        prev = Some(s);
    }
    let hdims: Vec<usize> = reps.map_or_else(|| vec![0; space.len()], |r| r.iter().map(|m| m.ncols()).collect());
    let turaev = if cumulative_pairing(space.dims(), &hdims) == 1 { -1.0 } else { 1.0 };
    Ok(prod.value() * turaev)
}

/// `∏ det[ρ^i | δ ρ^{i+1}]^{(−1)^i}` with `ρ^i` a complement of `ker δ^i`.
fn delta_section(space: &GradedSpace, delta: &GradedMap, choice: Complements, scale: f64) -> Result<C64> {
    let mut pick = Picker::new(choice);
    let mut prod = product_for(space);
    let mut next: Option<Mat> = None;
    for i in space.degrees().rev() {
        let n = space.dim(i);
        let im = match &next {
            Some(r) => delta.block_or_zero(i + 1) * r,
            None => zeros(n, 0),
        };
        let r = pick.complement_of_kernel(&delta.block_or_zero(i), scale);
        if im.ncols() + r.ncols() != n {
            return Err(Error::Singular(format!("δ is not exact at degree {i}")));
        }
        prod.push(det(&hstack(&[&r, &im], n)), sign(i as i64));
        next = Some(r);
    }
    Ok(prod.value())
}

/// Cohomology dims of `(E, δ)`.
pub fn delta_cohomology_dims(space: &GradedSpace, delta: &GradedMap) -> Result<Vec<usize>> {
    Ok(delta_cohomology_dims_scaled(space, delta, delta.norm()))
}

fn delta_cohomology_dims_scaled(space: &GradedSpace, delta: &GradedMap, scale: f64) -> Vec<usize> {
    let rank = |i: i32| linalg::spaces(&delta.block_or_zero(i), scale).rank;
    space.degrees().map(|i| space.dim(i).saturating_sub(rank(i) + rank(i + 1))).collect()
}

/// `τ(d)` with orthonormal complements.
pub fn tau_d(c: &Complex) -> Result<DetLineElement> {
    tau_d_with(c, Complements::Orthogonal)
}

pub fn tau_d_with(c: &Complex, choice: Complements) -> Result<DetLineElement> {
    tau_d_scaled(c, choice, 0.0)
}

/// `τ(d)` with rank decisions at `1e−9 · max(‖d‖, scale)`.
pub fn tau_d_scaled(c: &Complex, choice: Complements, scale: f64) -> Result<DetLineElement> {
    let d = c.d()?;
    let scale = scale.max(d.norm());
    let h = cohomology_with_scale(&c.space, d, scale)?;
    if !h.is_exact() {
        return Err(Error::NotExact { dims: h.dims });
    }
    let s = d_section(&c.space, d, None, choice, scale)?;
    Ok(DetLineElement::standard(&c.space, s))
}

/// `τ(δ)` with orthonormal complements.
pub fn tau_delta(c: &Complex) -> Result<DetLineElement> {
    tau_delta_with(c, Complements::Orthogonal)
}

pub fn tau_delta_with(c: &Complex, choice: Complements) -> Result<DetLineElement> {
    tau_delta_scaled(c, choice, 0.0)
}

/// `τ(δ)` with rank decisions at `1e−9 · max(‖δ‖, scale)`.
pub fn tau_delta_scaled(c: &Complex, choice: Complements, scale: f64) -> Result<DetLineElement> {
    let delta = c.delta()?;
    let scale = scale.max(delta.norm());
    let dims = delta_cohomology_dims_scaled(&c.space, delta, scale);
    if dims.iter().any(|&x| x > 0) {
        return Err(Error::NotExact { dims });
    }
    let s = delta_section(&c.space, delta, choice, scale)?;
    Ok(DetLineElement::standard(&c.space, s))
}

/// `ρ(h) ∈ det E` for a basis `h` of `H(E, d)` given by closed representatives per degree.
pub fn rho(c: &Complex, reps: &[Mat]) -> Result<DetLineElement> {
    rho_with(c, reps, Complements::Orthogonal, 0.0)
}

/// `ρ(h)` with explicit complements and rank scale.
pub fn rho_with(c: &Complex, reps: &[Mat], choice: Complements, scale: f64) -> Result<DetLineElement> {
    let d = c.d()?;
    let scale = scale.max(d.norm());
    if reps.len() != c.space.len() {
        return Err(Error::BadRepresentatives(format!("{} degrees of representatives for {}", reps.len(), c.space.len())));
    }
    let h = cohomology_with_scale(&c.space, d, scale)?;
    for (k, i) in c.space.degrees().enumerate() {
        let r = &reps[k];
        if r.nrows() != c.space.dim(i) || r.ncols() != h.dims[k] {
            return Err(Error::BadRepresentatives(format!(
                "degree {i}: got {}×{}, need {}×{}",
                r.nrows(),
                r.ncols(),
                c.space.dim(i),
                h.dims[k]
            )));
        }
        let image = d.block_or_zero(i) * r;
        let tol = 1e-8 * (1.0 + scale) * (1.0 + linalg::max_abs(r));
        if linalg::max_abs(&image) > tol {
            return Err(Error::BadRepresentatives(format!("representatives at degree {i} are not closed")));
        }
        let span = hstack(&[&h.image[k], r], r.nrows());
        if linalg::spaces(&span, 1.0).rank != span.ncols() {
            return Err(Error::BadRepresentatives(format!("representatives at degree {i} are not independent classes")));
        }
    }
    let s = d_section(&c.space, d, Some(reps), choice, scale)?;
    Ok(DetLineElement::standard(&c.space, s))
}

/// `∏ det(f|_{E^i})^{w(i)}` for a degree-0 endomorphism `f`.
pub fn weighted_det_product(f: &GradedMap, weight: impl Fn(i32) -> i64) -> Result<C64> {
    if f.shift() != 0 || f.source() != f.target() {
        return Err(Error::NotDegreeZero { op: "weighted determinant", shift: f.shift() });
    }
    let mut prod = product_for(f.source());
    for i in f.source().degrees() {
        let dt = det(&f.block_or_zero(i));
        let w = weight(i);
        if dt.is_zero() && w < 0 && f.source().dim(i) > 0 {
            return Err(Error::Singular(format!("zero determinant at degree {i} with negative exponent")));
        }
        prod.push(dt, w);
    }
    Ok(prod.value())
}

/// Exponent `(−1)^i i`.
pub fn torsion_weight(i: i32) -> i64 {
    sign(i as i64) * i as i64
}

/// Both sides of the torsion ratio identity.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TorsionRatio {
    /// `τ(d) τ(δ)⁻¹` from the canonical sections.
    pub ratio: C64,
    /// `∏ det([d,δ]|_{E^i})^{(−1)^i i}`.
    pub predicted: C64,
    /// `∏ det([d,δ]|_{E^i})^{(−1)^i}`, equal to 1.
    pub unit: C64,
}

impl TorsionRatio {
    pub fn ratio_residual(&self) -> f64 {
        (self.ratio / self.predicted - 1.0).norm()
    }

    pub fn unit_residual(&self) -> f64 {
        (self.unit - 1.0).norm()
    }
}

fn require_invertible(f: &GradedMap, what: &str) -> Result<()> {
    let scale = f.norm();
    for i in f.source().degrees() {
        let b = f.block_or_zero(i);
        if b.nrows() == 0 {
            continue;
        }
        let s = linalg::singular_values(&b);
        let lo = s.iter().cloned().fold(f64::INFINITY, f64::min);
        if lo <= linalg::RANK_RTOL * scale {
            return Err(Error::Singular(format!("{what} is singular at degree {i}")));
        }
    }
    Ok(())
}

/// `τ(d)/τ(δ)` together with the determinant formula predicted for it.
pub fn torsion_ratio(c: &Complex) -> Result<TorsionRatio> {
    let l = c.laplacian()?;
    require_invertible(&l, "[d, δ]")?;
    let ratio = tau_d(c)?.ratio(&tau_delta(c)?)?;
    Ok(TorsionRatio {
        ratio,
        predicted: weighted_det_product(&l, torsion_weight)?,
        unit: weighted_det_product(&l, |i| sign(i as i64))?,
    })
}

/// `det f ∈ (det E)⁻¹ ⊗ det F_r` for an isomorphism `f : E^i → F^{i+r}` of graded spaces.
pub fn det_graded_iso(f: &GradedMap) -> Result<DetLineElement> {
    let src = f.source();
    let tgt = f.target().shifted(f.shift());
    if src.dims() != tgt.dims() || src.p() != tgt.p() {
        return Err(Error::Shape("not an isomorphism of graded spaces".into()));
    }
    let mut prod = product_for(src);
    for i in src.degrees() {
        let dt = det(&f.block_or_zero(i));
        if dt.is_zero() && src.dim(i) > 0 {
            return Err(Error::Singular(format!("map singular at degree {i}")));
        }
        prod.push(dt, sign(i as i64));
    }
    let frame = Frame::standard(src).inverse().tensor(&Frame::standard(&tgt));
    Ok(DetLineElement::new(frame, prod.value()))
}

/// `det g|_E = ∏ det(g|_{E^i})^{(−1)^i}`.
pub fn det_aut(g: &GradedMap) -> Result<C64> {
    if g.shift() != 0 || g.source() != g.target() {
        return Err(Error::NotDegreeZero { op: "det of an automorphism", shift: g.shift() });
    }
    Ok(det_graded_iso(g)?.scalar)
}

/// `(g.d, g.δ)` and the scalar `det g|_E`.
pub fn act_aut(g: &GradedMap, c: &Complex) -> Result<(Complex, C64)> {
    invert_degree_zero(g)?;
    Ok((c.conjugate(g)?, det_aut(g)?))
}

/// `det g|_{H(E,d)}` for a degree-0 automorphism commuting with `d`.
pub fn det_on_cohomology(g: &GradedMap, c: &Complex) -> Result<C64> {
    let d = c.d()?;
    let comm = g.compose(d)?.sub(&d.compose(g)?)?;
    if comm.norm() > 1e-9 * (1.0 + g.norm() * d.norm()) {
        return Err(Error::Invalid("automorphism does not commute with d".into()));
    }
    let h = cohomology(c)?;
    let mut prod = product_for(&c.space);
    for (k, i) in c.space.degrees().enumerate() {
        if h.dims[k] == 0 {
            continue;
        }
        let moved = g.block_or_zero(i) * &h.representatives[k];
        prod.push(det(&h.class_of(i, &moved)?), sign(i as i64));
    }
    Ok(prod.value())
}

/// The dual complex `(E*, d̃, δ̃)`.
pub fn dual_complex(c: &Complex) -> Result<Complex> {
    Complex::new(
        c.space.dual(),
        c.d.as_ref().map(|d| d.dual_transpose()),
        c.delta.as_ref().map(|x| x.dual_transpose()),
    )
}

/// `∏ (−1)^{n_i(n_i−1)/2}`, the value of the pairing on standard frames.
pub fn dual_pairing_sign(space: &GradedSpace) -> i64 {
    space.dims().iter().map(|&n| sign((n * n.saturating_sub(1) / 2) as i64)).product()
}

/// Canonical pairing `det E ⊗ det E* → ℂ`.
pub fn pair_dual(s: &DetLineElement, t: &DetLineElement) -> Result<C64> {
    let (e, es) = s.frame.single().ok_or_else(|| Error::FrameMismatch("first factor is not a single line".into()))?;
    let (f, ft) = t.frame.single().ok_or_else(|| Error::FrameMismatch("second factor is not a single line".into()))?;
    if es != 1 || ft != 1 || &e.dual() != f {
        return Err(Error::FrameMismatch("frames are not dual".into()));
    }
    Ok(s.scalar * t.scalar * dual_pairing_sign(e) as f64)
}

/// Canonical pairing `det E ⊗ det E_1 → ℂ`; standard frames pair to `(−1)^{χ′(E)}`.
pub fn pair_shift(s: &DetLineElement, t: &DetLineElement) -> Result<C64> {
    let (e, es) = s.frame.single().ok_or_else(|| Error::FrameMismatch("first factor is not a single line".into()))?;
    let (f, ft) = t.frame.single().ok_or_else(|| Error::FrameMismatch("second factor is not a single line".into()))?;
    if es != 1 || ft != 1 || &e.shifted(1) != f {
        return Err(Error::FrameMismatch("second frame is not the shift of the first".into()));
    }
    Ok(s.scalar * t.scalar * sign(e.chi_prime()) as f64)
}

/// `(E_1, −d)` with `E_1^i = E^{i+1}`.
pub fn shifted_complex(c: &Complex) -> Result<Complex> {
    let d = c.d()?.regraded(1, 1).scale(C64::new(-1.0, 0.0));
    Complex::new(c.space.shifted(1), Some(d), None)
}

/// `τ_E(d) τ_{E_1}(−d)` under the canonical pairing.
pub fn shift_identity_check(c: &Complex) -> Result<C64> {
    let s = tau_d(&Complex { space: c.space.clone(), d: c.d.clone(), delta: None })?;
    let t = tau_d(&shifted_complex(c)?)?;
    pair_shift(&s, &t)
}

/// `pair_dual(τ(d), τ(d̃))`.
pub fn dual_identity_check(c: &Complex) -> Result<C64> {
    let s = tau_d(&Complex { space: c.space.clone(), d: c.d.clone(), delta: None })?;
    let dual = Complex::new(c.space.dual(), Some(c.d()?.dual_transpose()), None)?;
    pair_dual(&s, &tau_d(&dual)?)
}

/// Norm for the metric induced by the standard Hermitian metrics.
pub fn hermitian_norm(s: &DetLineElement) -> Result<f64> {
    s.frame
        .single()
        .map(|_| s.scalar.norm())
        .ok_or_else(|| Error::FrameMismatch("norm needs a single graded space".into()))
}

/// The three quantities of the norm identities.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NormIdentities {
    /// `‖τ(d)‖² / ∏ det[d,d*]^{(−1)^i i}`, with the determinants from [`gram_det_product`].
    pub d_quotient: f64,
    /// `‖τ(δ)‖² / ∏ det[δ,δ*]^{(−1)^{i−1} i}`.
    pub delta_quotient: f64,
    /// `∏ det[d,d*]^{(−1)^i i} ∏ det[δ,δ*]^{(−1)^i i} / |τ(d)/τ(δ)|²`.
    pub product_quotient: f64,
}

impl NormIdentities {
    pub fn max_residual(&self) -> f64 {
        [self.d_quotient, self.delta_quotient, self.product_quotient]
            .iter()
            .map(|x| (x - 1.0).abs())
            .fold(0.0, f64::max)
    }
}

/// `∏ det([f, f*]|_{E^i})^{w(i)}` for an exact `f` of shift `±1`, from the nonzero singular values
/// of `f` on `E^{i−shift}` and `E^i`, whose squares are the eigenvalues of `f f*` and `f* f` there.
pub fn gram_det_product(f: &GradedMap, weight: impl Fn(i32) -> i64) -> Result<f64> {
    let s = f.source();
    let shift = f.shift();
    if shift.abs() != 1 || f.target() != s {
        return Err(Error::Shape("gram determinant needs an endomorphism of shift ±1".into()));
    }
    let scale = f.norm();
    let mut log = 0.0;
    for i in s.degrees() {
        let mut count = 0;
        let mut part = 0.0;
        for j in [i - shift, i] {
            if s.index(j).is_none() || f.block(j).is_none() {
                continue;
            }
            for v in linalg::singular_values(&f.block_or_zero(j)) {
                if v > linalg::RANK_RTOL * scale {
                    count += 1;
                    part += 2.0 * v.ln();
                }
            }
        }
        if count != s.dim(i) {
            return Err(Error::Singular(format!("[f, f*] is singular at degree {i}")));
        }
        log += weight(i) as f64 * part;
    }
    Ok(log.exp())
}

pub fn norm_identities(c: &Complex) -> Result<NormIdentities> {
    let d = c.d()?;
    let x = c.delta()?;
    let pd = gram_det_product(d, torsion_weight)?;
    let px = gram_det_product(x, |i| -torsion_weight(i))?;
    let nd = hermitian_norm(&tau_d(c)?)?;
    let nx = hermitian_norm(&tau_delta(c)?)?;
    let ratio = torsion_ratio(c)?.ratio.norm();
    Ok(NormIdentities {
        d_quotient: nd * nd / pd,
        delta_quotient: nx * nx / px,
        product_quotient: pd / (px * ratio * ratio),
    })
}

/// `(−1)^{Σ_i α′_{i−1} α_i}`, comparing the frame of `det(E ⊕ E′)` with `det E ⊗ det E′`.
pub fn direct_sum_sign(e: &GradedSpace, f: &GradedSpace) -> i64 {
    let sum = e.direct_sum(f);
    let mut a = 0usize;
    let mut prev_b = 0usize;
    let mut b = 0usize;
    let mut acc = 0usize;
    for i in sum.degrees() {
        a += e.dim(i);
        acc += (prev_b % 2) * (a % 2);
        b += f.dim(i);
        prev_b = b;
    }
    sign(acc as i64)
}

/// An odd map `Γ : E^i → E^{p+q−i}`.
#[derive(Clone, Debug, PartialEq)]
pub struct Reflection {
    space: GradedSpace,
    blocks: Vec<Mat>,
}

impl Reflection {
    pub fn new(space: &GradedSpace, blocks: Vec<Mat>) -> Result<Self> {
        if blocks.len() != space.len() {
            return Err(Error::Shape(format!("{} blocks for {} degrees", blocks.len(), space.len())));
        }
        for (k, i) in space.degrees().enumerate() {
            let want = (space.dim(space.p() + space.q() - i), space.dim(i));
            if blocks[k].shape() != want {
                return Err(Error::Shape(format!("Γ block at degree {i} has shape {:?}, expected {want:?}", blocks[k].shape())));
            }
        }
        Ok(Reflection { space: space.clone(), blocks })
    }

    pub fn space(&self) -> &GradedSpace {
        &self.space
    }

    /// Block `E^i → E^{p+q−i}`.
    pub fn block(&self, i: i32) -> &Mat {
        &self.blocks[self.space.index(i).expect("degree in range")]
    }

    pub fn norm(&self) -> f64 {
        self.blocks.iter().map(linalg::op_norm).fold(0.0, f64::max)
    }

    /// `g Γ g⁻¹`.
    pub fn conjugate(&self, g: &GradedMap) -> Result<Reflection> {
        let gi = invert_degree_zero(g)?;
        let s = &self.space;
        let blocks = s
            .degrees()
            .map(|i| g.block_or_zero(s.p() + s.q() - i) * self.block(i) * gi.block_or_zero(i))
            .collect();
        Reflection::new(s, blocks)
    }
}

/// A complex with `[d, δ] = 1` and a reflection `Γ` with `Γ² = 1`, `δΓ = Γd` and `Γ|_B = d + δ`.
#[derive(Clone, Debug)]
pub struct GammaStructure {
    pub complex: Complex,
    pub gamma: Reflection,
}

/// Residuals of the four reflection axioms.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GammaResiduals {
    pub laplacian: f64,
    pub involution: f64,
    pub intertwining: f64,
    pub middle: f64,
}

impl GammaStructure {
    pub fn new(complex: Complex, gamma: Reflection) -> Result<Self> {
        let gs = GammaStructure { complex, gamma };
        let r = gs.residuals()?;
        let scale = 1.0 + gs.gamma.norm() * (1.0 + gs.complex.d()?.norm() + gs.complex.delta()?.norm());
        let tol = GAMMA_RTOL * scale;
        for (identity, residual) in [
            ("[d, δ] = 1", r.laplacian),
            ("Γ² = 1", r.involution),
            ("δΓ = Γd", r.intertwining),
            ("Γ|_B = d + δ", r.middle),
        ] {
            if residual > tol {
                return Err(Error::GammaAxiom { identity, residual });
            }
        }
        Ok(gs)
    }

    /// `(p + q − 1)/2`.
    pub fn middle(&self) -> i32 {
        (self.complex.space.p() + self.complex.space.q() - 1).div_euclid(2)
    }

    pub fn residuals(&self) -> Result<GammaResiduals> {
        let s = &self.complex.space;
        if (s.q() - s.p()).rem_euclid(2) != 1 {
            return Err(Error::Invalid("a reflection structure needs q − p odd".into()));
        }
        if self.gamma.space() != s {
            return Err(Error::Shape("Γ lives on a different space".into()));
        }
        let d = self.complex.d()?;
        let x = self.complex.delta()?;
        let l = self.complex.laplacian()?;
        let laplacian = l.sub(&GradedMap::identity(s))?.max_abs();
        let pq = s.p() + s.q();
        let mut involution: f64 = 0.0;
        let mut intertwining: f64 = 0.0;
        for i in s.degrees() {
            let g = self.gamma.block(i);
            let gg = self.gamma.block(pq - i) * g - eye(s.dim(i));
            involution = involution.max(linalg::max_abs(&gg));
            let lhs = x.block_or_zero(pq - i) * g;
            let rhs = if i < s.q() { self.gamma.block(i + 1) * d.block_or_zero(i) } else { zeros(lhs.nrows(), lhs.ncols()) };
            intertwining = intertwining.max(linalg::max_abs(&(lhs - rhs)));
        }
        let k = self.middle();
        let lower = linalg::col_basis(&x.block_or_zero(k + 1), x.norm());
        let upper = linalg::col_basis(&d.block_or_zero(k), d.norm());
        let m1 = self.gamma.block(k) * &lower - d.block_or_zero(k) * &lower;
        let m2 = self.gamma.block(k + 1) * &upper - x.block_or_zero(k + 1) * &upper;
        let middle = linalg::max_abs(&m1).max(linalg::max_abs(&m2));
        Ok(GammaResiduals { laplacian, involution, intertwining, middle })
    }

    pub fn conjugate(&self, g: &GradedMap) -> Result<GammaStructure> {
        GammaStructure::new(self.complex.conjugate(g)?, self.gamma.conjugate(g)?)
    }
}

/// `ρ_Γ = (det Γ_{−+})⁻¹ ∈ det E`, evaluated as `∏_{j=p}^{k} [det Γ_j (−1)^{r_j r_{j+1}}]^{−(−1)^j}`
/// with `r_j = rank d^{j−1}` and `k = (p+q−1)/2`.
pub fn rho_gamma(gs: &GammaStructure) -> Result<DetLineElement> {
    let s = &gs.complex.space;
    let r = s.exact_ranks()?;
    let mut prod = product_for(s);
    for j in s.p()..=gs.middle() {
        let k = s.index(j).unwrap();
        let dt = det(gs.gamma.block(j)) * sign((r[k] * r[k + 1]) as i64) as f64;
        if dt.is_zero() {
            return Err(Error::Singular(format!("Γ singular at degree {j}")));
        }
        prod.push(dt, -sign(j as i64));
    }
    Ok(DetLineElement::standard(s, prod.value()))
}

fn subsets(w: usize, k: usize) -> Vec<u32> {
    let mut out: Vec<u32> = (0u32..(1u32 << w)).filter(|m| m.count_ones() as usize == k).collect();
    out.sort_by_key(|m| {
        let mut idx: Vec<u32> = (0..w as u32).filter(|b| m >> b & 1 == 1).collect();
        idx.resize(w, u32::MAX);
        idx
    });
    out
}

/// The contact model on `Λ(W*) ⊕ α∧Λ(W*)` with `dim W = 2m`: `d = α∧`, `δ = i_Z`, and
/// `Γ(u + αv) = Kv + αKu` with `K e_I = e_{Iᶜ}` for `|I| ≠ m` and `K = 1` on `Λ^m`.
pub fn contact_model(m: usize) -> Result<GammaStructure> {
    let w = 2 * m;
    let top = 2 * m + 1;
    let full = (1u32 << w) - 1;
    let mons: Vec<Vec<u32>> = (0..=w).map(|k| subsets(w, k)).collect();
    let basis: Vec<Vec<(bool, u32)>> = (0..=top)
        .map(|i| {
            let mut b: Vec<(bool, u32)> = if i <= w { mons[i].iter().map(|&s| (false, s)).collect() } else { vec![] };
            if i >= 1 {
                b.extend(mons[i - 1].iter().map(|&s| (true, s)));
            }
            b
        })
        .collect();
    let index = |i: usize, e: (bool, u32)| basis[i].iter().position(|&x| x == e).expect("basis element");
    let space = GradedSpace::new(0, basis.iter().map(|b| b.len()).collect())?;
    let one = C64::one();
    let d = GradedMap::from_fn(&space, &space, 1, |i| {
        let i = i as usize;
        let mut b = zeros(basis[i + 1].len(), basis[i].len());
        for (j, &(a, s)) in basis[i].iter().enumerate() {
            if !a {
                b[(index(i + 1, (true, s)), j)] = one;
            }
        }
        b
    })?;
    let delta = GradedMap::from_fn(&space, &space, -1, |i| {
        let i = i as usize;
        let mut b = zeros(basis[i - 1].len(), basis[i].len());
        for (j, &(a, s)) in basis[i].iter().enumerate() {
            if a {
                b[(index(i - 1, (false, s)), j)] = one;
            }
        }
        b
    })?;
    let kmap = |s: u32| if s.count_ones() as usize == m { s } else { full & !s };
    let blocks = (0..=top)
        .map(|i| {
            let t = top - i;
            let mut b = zeros(basis[t].len(), basis[i].len());
            for (j, &(a, s)) in basis[i].iter().enumerate() {
                b[(index(t, (!a, kmap(s))), j)] = one;
            }
            b
        })
        .collect();
    let gamma = Reflection::new(&space, blocks)?;
    GammaStructure::new(Complex::new(space, Some(d), Some(delta))?, gamma)
}

/// The decomposition `E = A ⊕ B ⊕ C` into exact subcomplexes, with the basis map
/// `A ⊕ B ⊕ C → E`.
#[derive(Clone, Debug)]
pub struct AbcSplit {
    pub a: Complex,
    pub b: Complex,
    pub c: Complex,
    pub basis: GradedMap,
}

fn restrict_to(c: &Complex, bases: &[Mat]) -> Result<Complex> {
    let s = &c.space;
    let space = s.with_dims(bases.iter().map(|b| b.ncols()).collect())?;
    let basis_at = |i: i32| bases[s.index(i).unwrap()].clone();
    let restrict = |f: &GradedMap| {
        GradedMap::from_fn(&space, &space, f.shift(), |i| basis_at(i + f.shift()).adjoint() * f.block_or_zero(i) * basis_at(i))
    };
    Complex::new(space.clone(), Some(restrict(c.d()?)?), Some(restrict(c.delta()?)?))
}

impl AbcSplit {
    /// Relative gap between `τ(d)` on `E` and `det W · s · τ_A τ_B τ_C`, with `s` the
    /// direct-sum reordering signs.
    pub fn multiplicativity_residual(&self, whole: &Complex) -> Result<f64> {
        let t = tau_d(whole)?.scalar;
        let w = det_graded_iso(&self.basis)?.scalar;
        let (sa, sb, sc) = (&self.a.space, &self.b.space, &self.c.space);
        let sgn = direct_sum_sign(sa, sb) * direct_sum_sign(&sa.direct_sum(sb), sc);
        let parts = tau_d(&self.a)?.scalar * tau_d(&self.b)?.scalar * tau_d(&self.c)?.scalar;
        Ok((w * parts * sgn as f64 / t - 1.0).norm())
    }
}

pub fn abc_split(gs: &GammaStructure) -> Result<AbcSplit> {
    let c = &gs.complex;
    let s = &c.space;
    let d = c.d()?;
    let x = c.delta()?;
    let k = gs.middle();
    let mut a = Vec::new();
    let mut b = Vec::new();
    let mut cc = Vec::new();
    for i in s.degrees() {
        let n = s.dim(i);
        let none = zeros(n, 0);
        let (ai, bi, ci) = if i < k {
            (eye(n), none.clone(), none)
        } else if i == k {
            (linalg::col_basis(&d.block_or_zero(k - 1), d.norm()), linalg::col_basis(&x.block_or_zero(k + 1), x.norm()), none)
        } else if i == k + 1 {
            (none, linalg::col_basis(&d.block_or_zero(k), d.norm()), linalg::col_basis(&x.block_or_zero(k + 2), x.norm()))
        } else {
            (none.clone(), none, eye(n))
        };
        a.push(ai);
        b.push(bi);
        cc.push(ci);
    }
    let ac = restrict_to(c, &a)?;
    let bc = restrict_to(c, &b)?;
    let ccx = restrict_to(c, &cc)?;
    let sum = ac.space.direct_sum(&bc.space).direct_sum(&ccx.space);
    let basis = GradedMap::from_fn(&sum, s, 0, |i| {
        let j = s.index(i).unwrap();
        hstack(&[&a[j], &b[j], &cc[j]], s.dim(i))
    })?;
    Ok(AbcSplit { a: ac, b: bc, c: ccx, basis })
}
