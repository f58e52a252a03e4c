//! Finite ℤ-graded complex vector spaces, block maps between them, the supercalculus
//! (supercommutator, supertrace, number operator), cohomology and seeded generators.

use crate::error::{Error, Result};
use crate::linalg::{self, c, eye, zeros, Mat, C64};
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

/// Tolerance for `d∘d = 0`, relative to `‖d‖²`.
pub const DIFFERENTIAL_RTOL: f64 = 1e-12;

/// `E = ⊕_{i=p}^{q} E^i` with `dims[i - p] = dim E^i`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GradedSpace {
    p: i32,
    dims: Vec<usize>,
}

pub(crate) fn sign(i: i64) -> i64 {
    if i.rem_euclid(2) == 0 {
        1
    } else {
        -1
    }
}

impl GradedSpace {
    pub fn new(p: i32, dims: Vec<usize>) -> Result<Self> {
        if dims.is_empty() {
            return Err(Error::Invalid("a graded space needs p ≤ q (at least one degree)".into()));
        }
        Ok(GradedSpace { p, dims })
    }

    pub fn p(&self) -> i32 {
        self.p
    }

    pub fn q(&self) -> i32 {
        self.p + self.dims.len() as i32 - 1
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn degrees(&self) -> std::ops::RangeInclusive<i32> {
        self.p..=self.q()
    }

    pub fn len(&self) -> usize {
        self.dims.len()
    }

    pub fn is_empty(&self) -> bool {
        self.total_dim() == 0
    }

    pub fn index(&self, i: i32) -> Option<usize> {
        if i < self.p || i > self.q() {
            None
        } else {
            Some((i - self.p) as usize)
        }
    }

    /// `dim E^i`, zero outside `[p, q]`.
    pub fn dim(&self, i: i32) -> usize {
        self.index(i).map_or(0, |k| self.dims[k])
    }

    pub fn total_dim(&self) -> usize {
        self.dims.iter().sum()
    }

    /// `χ = Σ (−1)^i dim E^i`.
    pub fn chi(&self) -> i64 {
        self.degrees().map(|i| sign(i as i64) * self.dim(i) as i64).sum()
    }

    /// `χ′ = Σ (−1)^i i dim E^i`.
    pub fn chi_prime(&self) -> i64 {
        self.degrees().map(|i| sign(i as i64) * i as i64 * self.dim(i) as i64).sum()
    }

    /// Parity of `det E`, that is `dim E mod 2`.
    pub fn parity(&self) -> u8 {
        (self.total_dim() % 2) as u8
    }

    /// `E*` with `E^{*i} = (E^{−i})*`.
    pub fn dual(&self) -> GradedSpace {
        let mut dims = self.dims.clone();
        dims.reverse();
        GradedSpace { p: -self.q(), dims }
    }

    /// `E_r` with `E_r^i = E^{i+r}`.
    pub fn shifted(&self, r: i32) -> GradedSpace {
        GradedSpace { p: self.p - r, dims: self.dims.clone() }
    }

    /// `E ⊕ E′` over the union of the degree ranges.
    pub fn direct_sum(&self, other: &GradedSpace) -> GradedSpace {
        let p = self.p.min(other.p);
        let q = self.q().max(other.q());
        let dims = (p..=q).map(|i| self.dim(i) + other.dim(i)).collect();
        GradedSpace { p, dims }
    }

    /// Same degrees with the given dimensions.
    pub fn with_dims(&self, dims: Vec<usize>) -> Result<GradedSpace> {
        if dims.len() != self.dims.len() {
            return Err(Error::Shape(format!("{} dims for {} degrees", dims.len(), self.dims.len())));
        }
        Ok(GradedSpace { p: self.p, dims })
    }

    /// Ranks `r_i = rank(d: E^{i−1} → E^i)` forced by exactness, or the failed condition.
    pub fn exact_ranks(&self) -> Result<Vec<usize>> {
        if self.chi() != 0 {
            return Err(Error::InfeasibleDims {
                dims: self.dims.clone(),
                reason: format!("Euler characteristic χ = {} ≠ 0", self.chi()),
            });
        }
        let mut r = vec![0usize];
        for (k, &n) in self.dims.iter().enumerate() {
            let prev = *r.last().unwrap();
            if n < prev {
                return Err(Error::InfeasibleDims {
                    dims: self.dims.clone(),
                    reason: format!("rank feasibility fails at degree {}", self.p + k as i32),
                });
            }
            r.push(n - prev);
        }
        r.pop();
        Ok(r)
    }
}

/// A linear map raising degree by `shift`, stored as one block `E^i → F^{i+shift}` per
/// source degree; blocks whose target degree is out of range are absent.
#[derive(Clone, Debug, PartialEq)]
pub struct GradedMap {
    source: GradedSpace,
    target: GradedSpace,
    shift: i32,
    blocks: Vec<Option<Mat>>,
}

impl GradedMap {
    pub fn zero(source: &GradedSpace, target: &GradedSpace, shift: i32) -> Self {
        let blocks = source
            .degrees()
            .map(|i| target.index(i + shift).map(|_| zeros(target.dim(i + shift), source.dim(i))))
            .collect();
        GradedMap { source: source.clone(), target: target.clone(), shift, blocks }
    }

    /// Builds a map from a block generator called for each in-range pair of degrees.
    pub fn from_fn(
        source: &GradedSpace,
        target: &GradedSpace,
        shift: i32,
        mut f: impl FnMut(i32) -> Mat,
    ) -> Result<Self> {
        let mut m = Self::zero(source, target, shift);
        for i in source.degrees() {
            if target.index(i + shift).is_some() {
                m.set_block(i, f(i))?;
            }
        }
        Ok(m)
    }

    pub fn identity(space: &GradedSpace) -> Self {
        Self::from_fn(space, space, 0, |i| eye(space.dim(i))).expect("identity blocks")
    }

    /// The number operator `N`, acting by `i` on `E^i`.
    pub fn number_operator(space: &GradedSpace) -> Self {
        Self::from_fn(space, space, 0, |i| eye(space.dim(i)) * c(i as f64)).expect("number operator blocks")
    }

    /// `a^N`, acting by `a^i` on `E^i`.
    pub fn power_of_number(space: &GradedSpace, a: C64) -> Self {
        Self::from_fn(space, space, 0, |i| eye(space.dim(i)) * a.powi(i)).expect("power blocks")
    }

    pub fn source(&self) -> &GradedSpace {
        &self.source
    }

    pub fn target(&self) -> &GradedSpace {
        &self.target
    }

    pub fn shift(&self) -> i32 {
        self.shift
    }

    pub fn parity(&self) -> u8 {
        self.shift.rem_euclid(2) as u8
    }

    /// Block `E^i → F^{i+shift}`, or `None` when either degree is out of range.
    pub fn block(&self, i: i32) -> Option<&Mat> {
        self.source.index(i).and_then(|k| self.blocks[k].as_ref())
    }

    /// Block as a matrix, with implicit zeros where absent.
    pub fn block_or_zero(&self, i: i32) -> Mat {
        self.block(i).cloned().unwrap_or_else(|| zeros(self.target.dim(i + self.shift), self.source.dim(i)))
    }

    pub fn set_block(&mut self, i: i32, m: Mat) -> Result<()> {
        let k = self
            .source
            .index(i)
            .ok_or_else(|| Error::Shape(format!("source degree {i} out of range")))?;
        let j = i + self.shift;
        if self.target.index(j).is_none() {
            return Err(Error::Shape(format!("target degree {j} out of range")));
        }
        let want = (self.target.dim(j), self.source.dim(i));
        if m.shape() != want {
            return Err(Error::Shape(format!("block at degree {i} has shape {:?}, expected {want:?}", m.shape())));
        }
        self.blocks[k] = Some(m);
        Ok(())
    }

    /// `f ∘ g` (apply `g` first).
    pub fn compose(&self, g: &GradedMap) -> Result<GradedMap> {
        if g.target != self.source {
            return Err(Error::Shape(format!(
                "cannot compose: inner target {:?} differs from outer source {:?}",
                g.target, self.source
            )));
        }
        GradedMap::from_fn(&g.source, &self.target, self.shift + g.shift, |i| {
            match (g.block(i), self.block(i + g.shift)) {
                (Some(b), Some(a)) => a * b,
                _ => zeros(self.target.dim(i + g.shift + self.shift), g.source.dim(i)),
            }
        })
    }

    fn check_same_kind(&self, other: &GradedMap) -> Result<()> {
        if self.source != other.source || self.target != other.target || self.shift != other.shift {
            return Err(Error::Shape("maps differ in source, target or shift".into()));
        }
        Ok(())
    }

    pub fn add(&self, other: &GradedMap) -> Result<GradedMap> {
        self.check_same_kind(other)?;
        GradedMap::from_fn(&self.source, &self.target, self.shift, |i| self.block_or_zero(i) + other.block_or_zero(i))
    }

    pub fn sub(&self, other: &GradedMap) -> Result<GradedMap> {
        self.add(&other.scale(c(-1.0)))
    }

    pub fn scale(&self, a: C64) -> GradedMap {
        let mut m = self.clone();
        for b in m.blocks.iter_mut().flatten() {
            *b *= a;
        }
        m
    }

    /// `[f, g] = fg − (−1)^{|f||g|} gf`.
    pub fn supercommutator(&self, g: &GradedMap) -> Result<GradedMap> {
        let fg = self.compose(g)?;
        let gf = g.compose(self)?;
        let s = if self.parity() * g.parity() == 1 { 1.0 } else { -1.0 };
        fg.add(&gf.scale(c(s)))
    }

    fn check_endo(&self, op: &'static str) -> Result<()> {
        if self.shift != 0 || self.source != self.target {
            return Err(Error::NotDegreeZero { op, shift: self.shift });
        }
        Ok(())
    }

    /// `Trs[f] = Σ (−1)^i tr f|_{E^i}`.
    pub fn supertrace(&self) -> Result<C64> {
        self.check_endo("supertrace")?;
        Ok(self
            .source
            .degrees()
            .map(|i| self.block(i).map_or(C64::zero(), |b| b.trace()) * c(sign(i as i64) as f64))
            .sum())
    }

    /// Ordinary trace over all degrees.
    pub fn trace(&self) -> Result<C64> {
        self.check_endo("trace")?;
        Ok(self.source.degrees().map(|i| self.block(i).map_or(C64::zero(), |b| b.trace())).sum())
    }

    /// Conjugate transpose for the standard Hermitian metrics; the shift is negated.
    pub fn adjoint(&self) -> GradedMap {
        GradedMap::from_fn(&self.target, &self.source, -self.shift, |j| self.block_or_zero(j - self.shift).adjoint())
            .expect("adjoint blocks")
    }

    /// Transpose `f̃ : F* → E*`, regraded so that degree `i` of `E*` is `(E^{−i})*`.
    pub fn dual_transpose(&self) -> GradedMap {
        let s = self.target.dual();
        let t = self.source.dual();
        GradedMap::from_fn(&s, &t, self.shift, |j| self.block_or_zero(-j - self.shift).transpose()).expect("dual blocks")
    }

    /// The same blocks viewed between regraded copies with `E_r^i = E^{i+r}`.
    pub fn regraded(&self, source_shift: i32, target_shift: i32) -> GradedMap {
        let s = self.source.shifted(source_shift);
        let t = self.target.shifted(target_shift);
        let shift = self.shift + source_shift - target_shift;
        GradedMap::from_fn(&s, &t, shift, |i| self.block_or_zero(i + source_shift)).expect("regraded blocks")
    }

    /// Largest operator norm over blocks.
    pub fn norm(&self) -> f64 {
        self.blocks.iter().flatten().map(linalg::op_norm).fold(0.0, f64::max)
    }

    /// Largest absolute entry over blocks.
    pub fn max_abs(&self) -> f64 {
        self.blocks.iter().flatten().map(linalg::max_abs).fold(0.0, f64::max)
    }

    /// Ungraded matrix on `⊕ E^i`, ordered by increasing degree.
    pub fn to_dense(&self) -> Mat {
        let so = offsets(&self.source);
        let to = offsets(&self.target);
        let mut out = zeros(self.target.total_dim(), self.source.total_dim());
        for i in self.source.degrees() {
            if let Some(b) = self.block(i) {
                let r = to[self.target.index(i + self.shift).unwrap()];
                let k = so[self.source.index(i).unwrap()];
                out.view_mut((r, k), b.shape()).copy_from(b);
            }
        }
        out
    }

    /// Block-diagonal sum `f ⊕ f′` over direct-sum spaces.
    pub fn direct_sum(&self, other: &GradedMap) -> Result<GradedMap> {
        if self.shift != other.shift {
            return Err(Error::Shape("direct sum of maps with different shifts".into()));
        }
        let s = self.source.direct_sum(&other.source);
        let t = self.target.direct_sum(&other.target);
        GradedMap::from_fn(&s, &t, self.shift, |i| linalg::block_diag(&self.block_or_zero(i), &other.block_or_zero(i)))
    }
}

pub(crate) fn offsets(space: &GradedSpace) -> Vec<usize> {
    let mut o = Vec::with_capacity(space.len());
    let mut at = 0;
    for &n in space.dims() {
        o.push(at);
        at += n;
    }
    o
}

/// A graded space with an optional differential `d` (shift +1) and an optional
/// codifferential `δ` (shift −1).
#[derive(Clone, Debug, PartialEq)]
pub struct Complex {
    pub space: GradedSpace,
    pub d: Option<GradedMap>,
    pub delta: Option<GradedMap>,
}

fn check_square_zero(name: &'static str, m: &GradedMap, space: &GradedSpace, shift: i32) -> Result<()> {
    if m.source() != space || m.target() != space || m.shift() != shift {
        return Err(Error::Shape(format!("{name} must be an endomorphism of shift {shift}")));
    }
    let sq = m.compose(m)?;
    let n = m.norm();
    let residual = sq.norm();
    let tolerance = DIFFERENTIAL_RTOL * n * n;
    if residual > tolerance && residual > 0.0 {
        return Err(Error::NotDifferential { name, residual, tolerance });
    }
    Ok(())
}

impl Complex {
    pub fn new(space: GradedSpace, d: Option<GradedMap>, delta: Option<GradedMap>) -> Result<Self> {
        if let Some(d) = &d {
            check_square_zero("d", d, &space, 1)?;
        }
        if let Some(x) = &delta {
            check_square_zero("δ", x, &space, -1)?;
        }
        Ok(Complex { space, d, delta })
    }

    pub fn d(&self) -> Result<&GradedMap> {
        self.d.as_ref().ok_or(Error::MissingDifferential("d"))
    }

    pub fn delta(&self) -> Result<&GradedMap> {
        self.delta.as_ref().ok_or(Error::MissingDifferential("δ"))
    }

    /// `L = [d, δ]`.
    pub fn laplacian(&self) -> Result<GradedMap> {
        self.d()?.supercommutator(self.delta()?)
    }

    /// `g.d = g d g⁻¹` and `g.δ = g δ g⁻¹` for a degree-0 automorphism `g`.
    pub fn conjugate(&self, g: &GradedMap) -> Result<Complex> {
        let gi = invert_degree_zero(g)?;
        let conj = |m: &GradedMap| -> Result<GradedMap> { g.compose(&m.compose(&gi)?) };
        Ok(Complex {
            space: self.space.clone(),
            d: self.d.as_ref().map(conj).transpose()?,
            delta: self.delta.as_ref().map(conj).transpose()?,
        })
    }

    /// Direct sum of complexes over a common degree range.
    pub fn direct_sum(&self, other: &Complex) -> Result<Complex> {
        let sum = |a: &Option<GradedMap>, b: &Option<GradedMap>| -> Result<Option<GradedMap>> {
            match (a, b) {
                (Some(a), Some(b)) => Ok(Some(a.direct_sum(b)?)),
                (None, None) => Ok(None),
                _ => Err(Error::MissingDifferential("direct sum needs matching differentials")),
            }
        };
        Ok(Complex {
            space: self.space.direct_sum(&other.space),
            d: sum(&self.d, &other.d)?,
            delta: sum(&self.delta, &other.delta)?,
        })
    }
}

/// Inverse of a degree-0 automorphism.
pub fn invert_degree_zero(g: &GradedMap) -> Result<GradedMap> {
    if g.shift() != 0 || g.source() != g.target() {
        return Err(Error::NotDegreeZero { op: "inverse", shift: g.shift() });
    }
    let mut out = GradedMap::zero(g.target(), g.source(), 0);
    for i in g.source().degrees() {
        let inv = linalg::inverse(&g.block_or_zero(i)).ok_or_else(|| Error::Singular(format!("automorphism singular at degree {i}")))?;
        out.set_block(i, inv)?;
    }
    Ok(out)
}

/// Cohomology of `(E, d)`: dimensions, representatives and the data to read off classes.
#[derive(Clone, Debug)]
pub struct CohomologyData {
    pub space: GradedSpace,
    pub dims: Vec<usize>,
    /// Columns spanning a complement of `im d` inside `ker d`, per degree.
    pub representatives: Vec<Mat>,
    /// Orthonormal basis of `im d^{i−1}` per degree.
    pub image: Vec<Mat>,
    scale: f64,
}

impl CohomologyData {
    pub fn dim(&self, i: i32) -> usize {
        self.space.index(i).map_or(0, |k| self.dims[k])
    }

    pub fn is_exact(&self) -> bool {
        self.dims.iter().all(|&h| h == 0)
    }

    /// `Σ (−1)^i dim H^i`.
    pub fn euler(&self) -> i64 {
        self.space.degrees().map(|i| sign(i as i64) * self.dim(i) as i64).sum()
    }

    /// Coordinates of the class of a closed element `x ∈ E^i` in the representative basis.
    pub fn class_of(&self, i: i32, x: &Mat) -> Result<Mat> {
        let k = self.space.index(i).ok_or_else(|| Error::Shape(format!("degree {i} out of range")))?;
        let b = &self.image[k];
        let h = &self.representatives[k];
        let basis = linalg::hstack(&[b, h], self.space.dims()[k]);
        let sol = linalg::lstsq(&basis, x);
        let resid = &basis * &sol - x;
        if linalg::max_abs(&resid) > 1e-8 * (1.0 + linalg::max_abs(x)) * (1.0 + self.scale) {
            return Err(Error::BadRepresentatives(format!("element at degree {i} is not closed")));
        }
        Ok(sol.rows(b.ncols(), h.ncols()).into_owned())
    }
}

/// Cohomology of `(E, d)` with ranks decided at `1e−9 · ‖d‖`.
pub fn cohomology(c: &Complex) -> Result<CohomologyData> {
    let d = c.d()?;
    cohomology_with_scale(&c.space, d, d.norm())
}

/// Cohomology with rank decisions relative to an externally supplied scale.
pub fn cohomology_with_scale(space: &GradedSpace, d: &GradedMap, scale: f64) -> Result<CohomologyData> {
    let mut dims = Vec::new();
    let mut reps = Vec::new();
    let mut image = Vec::new();
    for i in space.degrees() {
        let n = space.dim(i);
        let incoming = d.block_or_zero(i - 1);
        let im = linalg::col_basis(&incoming, scale);
        let outgoing = d.block_or_zero(i);
        let ker = linalg::spaces(&outgoing, scale).kernel;
        let h = ker.ncols().saturating_sub(im.ncols());
        let rep = if h == 0 {
            zeros(n, 0)
        } else {
            let proj = eye(n) - &im * im.adjoint();
            let sp = linalg::spaces(&(proj * &ker), 1.0);
            sp.range.columns(0, h.min(sp.rank)).into_owned()
        };
        if rep.ncols() != h {
            return Err(Error::Singular(format!("cohomology rank decision inconsistent at degree {i}")));
        }
        dims.push(h);
        reps.push(rep);
        image.push(im);
    }
    Ok(CohomologyData { space: space.clone(), dims, representatives: reps, image, scale })
}

/// Deterministic generator for trial `index` under a master seed.
pub fn trial_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    r.set_stream(index);
    r
}

/// Complex Gaussian matrix with unit-variance entries.
pub fn random_matrix(rng: &mut impl Rng, rows: usize, cols: usize) -> Mat {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    Mat::from_fn(rows, cols, |_, _| {
        let a: f64 = rng.sample(StandardNormal);
        let b: f64 = rng.sample(StandardNormal);
        C64::new(a * h, b * h)
    })
}

/// Condition bound for random automorphisms.
pub const AUT_MAX_COND: f64 = 1e4;

/// Condition bound for the conjugations and factors of annular pairs.
pub const ANNULUS_MAX_COND: f64 = 10.0;

/// `I + 0.5·X` with unit-variance Gaussian `X`, resampled until the condition number is at most 1e4.
pub fn random_invertible(rng: &mut impl Rng, n: usize) -> Mat {
    random_invertible_with_cond(rng, n, AUT_MAX_COND)
}

/// `I + 0.5·X` resampled until the condition number is at most `max_cond`.
pub fn random_invertible_with_cond(rng: &mut impl Rng, n: usize, max_cond: f64) -> Mat {
    loop {
        let g = eye(n) + random_matrix(rng, n, n) * c(0.5);
        if n == 0 {
            return g;
        }
        let s = linalg::singular_values(&g);
        let hi = s.first().cloned().unwrap_or(0.0);
        let lo = s.last().cloned().unwrap_or(0.0);
        if lo > 0.0 && hi / lo <= max_cond {
            return g;
        }
    }
}

/// Random degree-0 automorphism of `E`.
pub fn random_aut(rng: &mut impl Rng, space: &GradedSpace) -> GradedMap {
    random_aut_with_cond(rng, space, AUT_MAX_COND)
}

pub fn random_aut_with_cond(rng: &mut impl Rng, space: &GradedSpace, max_cond: f64) -> GradedMap {
    GradedMap::from_fn(space, space, 0, |i| random_invertible_with_cond(rng, space.dim(i), max_cond)).expect("automorphism blocks")
}

/// Random degree-0 map (not necessarily invertible).
pub fn random_degree_map(rng: &mut impl Rng, space: &GradedSpace, shift: i32) -> GradedMap {
    GradedMap::from_fn(space, space, shift, |i| random_matrix(rng, space.dim(i + shift), space.dim(i))).expect("random blocks")
}

/// Split model: `E^i = B^i ⊕ C^i` with `dim B^i = r_i`, `d = D_i : C^i → B^{i+1}` and
/// `δ = Δ_i : B^{i+1} → C^i`, where `D_i`, `Δ_i` are supplied by `make`.
fn split_model(
    space: &GradedSpace,
    ranks: &[usize],
    mut make: impl FnMut(i32, usize) -> (Mat, Mat),
) -> (GradedMap, GradedMap) {
    let mut d = GradedMap::zero(space, space, 1);
    let mut delta = GradedMap::zero(space, space, -1);
    for i in space.degrees() {
        let k = space.index(i).unwrap();
        if space.index(i + 1).is_none() {
            continue;
        }
        let r_here = ranks[k];
        let r_next = ranks[k + 1];
        let (dm, xm) = make(i, r_next);
        let mut db = zeros(space.dim(i + 1), space.dim(i));
        db.view_mut((0, r_here), (r_next, r_next)).copy_from(&dm);
        let mut xb = zeros(space.dim(i), space.dim(i + 1));
        xb.view_mut((r_here, 0), (r_next, r_next)).copy_from(&xm);
        d.set_block(i, db).unwrap();
        delta.set_block(i + 1, xb).unwrap();
    }
    (d, delta)
}

/// Random exact complex `(E, d)`: a split model conjugated by a random automorphism.
pub fn random_exact_complex(seed: u64, space: &GradedSpace) -> Result<Complex> {
    let mut rng = trial_rng(seed, 0);
    random_exact_complex_with(&mut rng, space)
}

pub fn random_exact_complex_with(rng: &mut impl Rng, space: &GradedSpace) -> Result<Complex> {
    let ranks = space.exact_ranks()?;
    let (d, _) = split_model(space, &ranks, |_, r| (random_invertible(rng, r), zeros(r, r)));
    let g = random_aut(rng, space);
    Complex { space: space.clone(), d: Some(d), delta: None }.conjugate(&g)
}

/// Random exact codifferential `(E, δ)`.
pub fn random_exact_codifferential_with(rng: &mut impl Rng, space: &GradedSpace) -> Result<GradedMap> {
    random_exact_codifferential_with_cond(rng, space, AUT_MAX_COND)
}

/// As [`random_exact_codifferential_with`] with all random factors of condition at most `max_cond`.
pub fn random_exact_codifferential_with_cond(rng: &mut impl Rng, space: &GradedSpace, max_cond: f64) -> Result<GradedMap> {
    let ranks = space.exact_ranks()?;
    let (_, delta) = split_model(space, &ranks, |_, r| (zeros(r, r), random_invertible_with_cond(rng, r, max_cond)));
    let g = random_aut_with_cond(rng, space, max_cond);
    Ok(Complex { space: space.clone(), d: None, delta: Some(delta) }.conjugate(&g)?.delta.unwrap())
}

/// How the spectrum of `[d, δ]` is shaped in a random pair.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum PairSpectrum {
    /// `Δ_i` is an independent random automorphism.
    Generic,
    /// Eigenvalue moduli of `[d, δ]` lie in `[0.7·s, 1.3·s]`.
    Annulus(f64),
    /// `[d, δ] = 1`.
    Identity,
}

/// Random pair `(d, δ)` with `[d, δ]` invertible.
pub fn random_invertible_pair(rng: &mut impl Rng, space: &GradedSpace, spectrum: PairSpectrum) -> Result<Complex> {
    let ranks = space.exact_ranks()?;
    let cond = match spectrum {
        PairSpectrum::Annulus(_) => ANNULUS_MAX_COND,
        _ => AUT_MAX_COND,
    };
    let (d, delta) = split_model(space, &ranks, |_, r| {
        let dm = random_invertible_with_cond(rng, r, cond);
        let (dm, lam) = match spectrum {
            PairSpectrum::Generic => (dm, random_invertible(rng, r)),
            PairSpectrum::Identity => (dm, eye(r)),
            PairSpectrum::Annulus(s) => {
                let u = random_invertible_with_cond(rng, r, cond);
                let mut diag = zeros(r, r);
                for j in 0..r {
                    let m: f64 = rng.random_range(0.7..1.3);
                    let ph: f64 = rng.random_range(0.0..std::f64::consts::TAU);
                    diag[(j, j)] = C64::from_polar(s * m, ph);
                }
                (dm * c(s.sqrt()), &u * diag * linalg::inverse(&u).unwrap())
            }
        };
        let xm = linalg::inverse(&dm).unwrap() * lam;
        (dm, xm)
    });
    let g = random_aut_with_cond(rng, space, cond);
    Complex::new(space.clone(), Some(d), Some(delta))?.conjugate(&g)
}

/// Random complex `(E, d)` on `exact ⊕ H` with `H` of dims `h_dims` carrying `d = 0`, and a random
/// degree-0 automorphism commuting with `d`.
pub fn random_complex_with_symmetry(
    rng: &mut impl Rng,
    exact: &GradedSpace,
    h_dims: &[usize],
) -> Result<(Complex, GradedMap)> {
    if h_dims.len() != exact.len() {
        return Err(Error::Shape("cohomology dims do not match the degree range".into()));
    }
    let ranks = exact.exact_ranks()?;
    let space = exact.with_dims(exact.dims().iter().zip(h_dims).map(|(a, b)| a + b).collect())?;
    let mut d = GradedMap::zero(&space, &space, 1);
    let mut g = GradedMap::zero(&space, &space, 0);
    let mut incoming: Option<Mat> = None;
    for i in space.degrees() {
        let k = space.index(i).unwrap();
        let (r_here, r_next, h) = (ranks[k], ranks.get(k + 1).copied().unwrap_or(0), h_dims[k]);
        let n = space.dim(i);
        let mut gb = zeros(n, n);
        if let Some(a) = incoming.take() {
            gb.view_mut((0, 0), (r_here, r_here)).copy_from(&a);
        }
        let cm = random_invertible(rng, r_next);
        gb.view_mut((r_here, r_here), (r_next, r_next)).copy_from(&cm);
        gb.view_mut((r_here + r_next, r_here + r_next), (h, h)).copy_from(&random_invertible(rng, h));
        g.set_block(i, gb)?;
        if space.index(i + 1).is_some() {
            let dm = random_invertible(rng, r_next);
            let mut db = zeros(space.dim(i + 1), n);
            db.view_mut((0, r_here), (r_next, r_next)).copy_from(&dm);
            d.set_block(i, db)?;
            incoming = Some(&dm * cm * linalg::inverse(&dm).ok_or_else(|| Error::Singular("random block".into()))?);
        }
    }
    let h = random_aut(rng, &space);
    let hinv = invert_degree_zero(&h)?;
    let c = Complex::new(space, Some(d), None)?.conjugate(&h)?;
    Ok((c, h.compose(&g)?.compose(&hinv)?))
}

/// Random feasible dims for an exact complex on `len` degrees with entries at most `max_dim`.
pub fn random_exact_dims(rng: &mut impl Rng, len: usize, max_dim: usize) -> Vec<usize> {
    loop {
        let ranks: Vec<usize> = (0..=len)
            .map(|k| if k == 0 || k == len { 0 } else { rng.random_range(0..=max_dim) })
            .collect();
        let dims: Vec<usize> = (0..len).map(|k| ranks[k] + ranks[k + 1]).collect();
        if dims.iter().all(|&n| n <= max_dim) && dims.iter().any(|&n| n > 0) {
            return dims;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::max_abs;

    fn space(p: i32, dims: &[usize]) -> GradedSpace {
        GradedSpace::new(p, dims.to_vec()).unwrap()
    }

    #[test]
    fn supertrace_examples() {
        let e = space(0, &[1, 1]);
        assert_eq!(GradedMap::identity(&e).supertrace().unwrap(), c(0.0));
        let e = space(0, &[1, 2]);
        assert_eq!(GradedMap::number_operator(&e).supertrace().unwrap(), c(-2.0));
    }

    #[test]
    fn supertrace_rejects_shifted_maps() {
        let e = space(0, &[1, 1]);
        let d = GradedMap::zero(&e, &e, 1);
        assert!(matches!(d.supertrace(), Err(Error::NotDegreeZero { .. })));
    }

    #[test]
    fn delta_bracket_with_number_operator() {
        let mut rng = trial_rng(5, 0);
        let e = space(-1, &[2, 3, 1]);
        let x = random_degree_map(&mut rng, &e, -1);
        let n = GradedMap::number_operator(&e);
        let br = x.supercommutator(&n).unwrap();
        assert!(br.sub(&x).unwrap().max_abs() < 1e-12);
    }

    #[test]
    fn even_self_bracket_vanishes() {
        let mut rng = trial_rng(6, 0);
        let e = space(0, &[2, 2]);
        let f = random_degree_map(&mut rng, &e, 0);
        assert!(f.supercommutator(&f).unwrap().max_abs() < 1e-12);
    }

    #[test]
    fn compose_checks_shapes() {
        let a = space(0, &[1, 1]);
        let b = space(0, &[2, 1]);
        let f = GradedMap::identity(&a);
        let g = GradedMap::identity(&b);
        assert!(matches!(f.compose(&g), Err(Error::Shape(_))));
        let mut bad = GradedMap::zero(&a, &a, 1);
        assert!(bad.set_block(0, zeros(2, 1)).is_err());
    }

    #[test]
    fn hand_cohomology() {
        let e = space(0, &[1, 2, 1]);
        let mut d = GradedMap::zero(&e, &e, 1);
        d.set_block(0, Mat::from_row_slice(2, 1, &[c(1.0), c(0.0)])).unwrap();
        d.set_block(1, Mat::from_row_slice(1, 2, &[c(0.0), c(1.0)])).unwrap();
        let cx = Complex::new(e, Some(d), None).unwrap();
        assert_eq!(cohomology(&cx).unwrap().dims, vec![0, 0, 0]);
    }

    #[test]
    fn zero_differential_cohomology_is_everything() {
        let e = space(2, &[2, 0, 3]);
        let cx = Complex::new(e.clone(), Some(GradedMap::zero(&e, &e, 1)), None).unwrap();
        let h = cohomology(&cx).unwrap();
        assert_eq!(h.dims, vec![2, 0, 3]);
        assert_eq!(h.euler(), e.chi());
    }

    #[test]
    fn infeasible_dims_name_the_obstruction() {
        let e = space(0, &[1, 1, 1]);
        match random_exact_complex(1, &e) {
            Err(Error::InfeasibleDims { reason, .. }) => assert!(reason.contains("Euler")),
            other => panic!("unexpected {other:?}"),
        }
        let e = space(0, &[2, 1, 1, 2]);
        match random_exact_complex(1, &e) {
            Err(Error::InfeasibleDims { reason, .. }) => assert!(reason.contains("rank")),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn generated_complexes_are_exact_and_deterministic() {
        let e = space(0, &[1, 2, 1]);
        let a = random_exact_complex(9, &e).unwrap();
        let b = random_exact_complex(9, &e).unwrap();
        assert_eq!(a, b);
        assert!(cohomology(&a).unwrap().is_exact());
        let e = space(0, &[1, 1]);
        let one = random_exact_complex(3, &e).unwrap();
        assert!(one.d.unwrap().block(0).unwrap()[(0, 0)].norm() > 0.0);
    }

    #[test]
    fn adjoint_and_dual_are_involutions() {
        let mut rng = trial_rng(2, 0);
        let e = space(-1, &[1, 3, 2]);
        let f = random_degree_map(&mut rng, &e, 1);
        assert_eq!(f.adjoint().adjoint(), f);
        assert_eq!(f.dual_transpose().dual_transpose(), f);
        let id = GradedMap::identity(&e);
        assert_eq!(id.adjoint(), id);
    }

    #[test]
    fn one_by_one_adjoint_and_dual() {
        let e = space(0, &[1, 1]);
        let mut d = GradedMap::zero(&e, &e, 1);
        d.set_block(0, Mat::from_element(1, 1, C64::new(2.0, 1.0))).unwrap();
        let a = d.adjoint();
        assert_eq!(a.shift(), -1);
        assert_eq!(a.block(1).unwrap()[(0, 0)], C64::new(2.0, -1.0));
        let t = d.dual_transpose();
        assert_eq!(t.source().p(), -1);
        assert_eq!(t.block(-1).unwrap()[(0, 0)], C64::new(2.0, 1.0));
    }

    #[test]
    fn dual_of_exact_is_exact() {
        let e = space(1, &[2, 3, 1]);
        let cx = random_exact_complex(4, &e).unwrap();
        let dt = cx.d.unwrap().dual_transpose();
        let dual = Complex::new(e.dual(), Some(dt), None).unwrap();
        assert!(cohomology(&dual).unwrap().is_exact());
    }

    #[test]
    fn random_pair_has_requested_laplacian() {
        let mut rng = trial_rng(8, 1);
        let e = space(0, &[2, 3, 1]);
        let cx = random_invertible_pair(&mut rng, &e, PairSpectrum::Identity).unwrap();
        let l = cx.laplacian().unwrap();
        assert!(l.sub(&GradedMap::identity(&e)).unwrap().max_abs() < 1e-9);
    }

    #[test]
    fn class_of_reads_representatives() {
        let e = space(0, &[2, 1]);
        let mut d = GradedMap::zero(&e, &e, 1);
        d.set_block(0, Mat::from_row_slice(1, 2, &[c(1.0), c(1.0)])).unwrap();
        let cx = Complex::new(e, Some(d), None).unwrap();
        let h = cohomology(&cx).unwrap();
        assert_eq!(h.dims, vec![1, 0]);
        let closed = Mat::from_row_slice(2, 1, &[c(2.0), c(-2.0)]);
        let coords = h.class_of(0, &closed).unwrap();
        let back = &h.representatives[0] * coords;
        assert!(max_abs(&(back - closed)) < 1e-12);
        let open = Mat::from_row_slice(2, 1, &[c(1.0), c(0.0)]);
        assert!(h.class_of(0, &open).is_err());
    }

    #[test]
    fn parity_bookkeeping() {
        for dims in [vec![1, 2, 1], vec![3, 0, 2, 5], vec![1, 1]] {
            for p in -2..3 {
                let e = space(p, &dims);
                let n = e.total_dim() as i64;
                assert_eq!((e.chi() - n).rem_euclid(2), 0);
                assert_eq!((e.chi_prime() - (e.chi() - n) / 2).rem_euclid(2), 0);
            }
        }
    }
}
