//! Cutoff decompositions `E = E_{<a} ⊕ E_{>a}` of a degree-0 operator commuting with the
//! differentials, truncated sections and zeta products, and the cutoff-independent glued value.

use crate::detline::{direct_sum_sign, rho_with, tau_d_scaled, tau_delta_scaled, torsion_weight, Complements};
use crate::error::{Error, Result};
use crate::graded::{
    cohomology_with_scale, random_aut_with_cond, random_exact_codifferential_with_cond, random_exact_dims, random_invertible_pair, sign,
    Complex, GradedMap, GradedSpace, PairSpectrum, ANNULUS_MAX_COND,
};
use crate::linalg::{self, det, hstack, spectral_piece, Mat, PowerProduct, C64, LOG_SPACE_DEGREES};
use rand::Rng;

/// Eigenvalues closer than this, relative to `max(1, max|λ|)`, form one cluster.
pub const CLUSTER_RTOL: f64 = 1e-8;
/// Cutoffs closer than this to an eigenvalue modulus, relative to `max|λ|`, are rejected.
pub const RING_RTOL: f64 = 1e-6;

/// A set of eigenvalue moduli.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Band {
    All,
    Below(f64),
    Above(f64),
    /// `a < |λ| < b`.
    Between(f64, f64),
}

impl Band {
    pub fn contains(&self, z: C64) -> bool {
        let r = z.norm();
        match *self {
            Band::All => true,
            Band::Below(a) => r < a,
            Band::Above(a) => r > a,
            Band::Between(a, b) => a < r && r < b,
        }
    }

    fn cutoffs(&self) -> Vec<f64> {
        match *self {
            Band::All => vec![],
            Band::Below(a) | Band::Above(a) => vec![a],
            Band::Between(a, b) => vec![a, b],
        }
    }
}

/// An eigenvalue cluster with its algebraic multiplicity in each degree.
#[derive(Clone, Debug, PartialEq)]
pub struct Cluster {
    pub value: C64,
    pub multiplicities: Vec<usize>,
}

impl Cluster {
    pub fn total(&self) -> usize {
        self.multiplicities.iter().sum()
    }
}

fn require_degree_zero(l: &GradedMap) -> Result<()> {
    if l.shift() != 0 || l.source() != l.target() {
        return Err(Error::NotDegreeZero { op: "spectral decomposition", shift: l.shift() });
    }
    Ok(())
}

/// Eigenvalues of each block of a degree-0 map.
pub fn degree_spectra(l: &GradedMap) -> Result<Vec<Vec<C64>>> {
    require_degree_zero(l)?;
    Ok(l.source().degrees().map(|i| linalg::eigenvalues(&l.block_or_zero(i))).collect())
}

fn spectral_scale(spectra: &[Vec<C64>]) -> f64 {
    spectra.iter().flatten().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Eigenvalue clusters over all degrees.
pub fn clusters(l: &GradedMap) -> Result<Vec<Cluster>> {
    let spectra = degree_spectra(l)?;
    let tol = CLUSTER_RTOL * spectral_scale(&spectra).max(1.0);
    let mut out: Vec<(Vec<C64>, Vec<usize>)> = Vec::new();
    for (k, ev) in spectra.iter().enumerate() {
        for &z in ev {
            match out.iter_mut().find(|(members, _)| members.iter().any(|w| (w - z).norm() <= tol)) {
                Some((members, mult)) => {
                    members.push(z);
                    mult[k] += 1;
                }
                None => {
                    let mut mult = vec![0; spectra.len()];
                    mult[k] = 1;
                    out.push((vec![z], mult));
                }
            }
        }
    }
    let mut cl: Vec<Cluster> = out
        .into_iter()
        .map(|(members, multiplicities)| {
            let value = members.iter().sum::<C64>() / members.len() as f64;
            Cluster { value, multiplicities }
        })
        .collect();
    cl.sort_by(|a, b| a.value.norm().total_cmp(&b.value.norm()).then(a.value.arg().total_cmp(&b.value.arg())));
    Ok(cl)
}

fn check_ring(spectra: &[Vec<C64>], cutoff: f64) -> Result<()> {
    let positive = cutoff > 0.0;
    if !positive {
        return Err(Error::Invalid(format!("cutoff {cutoff} must be positive")));
    }
    let tol = RING_RTOL * spectral_scale(spectra);
    for z in spectra.iter().flatten() {
        if (z.norm() - cutoff).abs() <= tol {
            return Err(Error::CutoffOnSpectrum { cutoff, re: z.re, im: z.im });
        }
    }
    Ok(())
}

/// `E = E_{<a} ⊕ E_{>a}` for a degree-0 operator `L`.
#[derive(Clone, Debug)]
pub struct SpectralSplit {
    pub operator: GradedMap,
    pub cutoff: f64,
    pub clusters: Vec<Cluster>,
    pub p_below: GradedMap,
    pub p_above: GradedMap,
}

impl SpectralSplit {
    /// Whether a cluster lies inside the disk `|z| < a`.
    pub fn is_below(&self, cl: &Cluster) -> bool {
        cl.value.norm() < self.cutoff
    }

    pub fn below_space(&self) -> GradedSpace {
        let s = self.operator.source();
        s.with_dims(s.degrees().map(|i| rank_of_projector(self.p_below.block(i))).collect()).expect("same degrees")
    }

    pub fn above_space(&self) -> GradedSpace {
        let s = self.operator.source();
        s.with_dims(s.degrees().map(|i| rank_of_projector(self.p_above.block(i))).collect()).expect("same degrees")
    }

    /// `max |P² − P|`.
    pub fn idempotency_residual(&self) -> f64 {
        self.p_below.compose(&self.p_below).unwrap().sub(&self.p_below).unwrap().max_abs()
    }

    /// `‖[P_{<a}, f]‖` for a map `f` on the same space.
    pub fn commutator_residual(&self, f: &GradedMap) -> Result<f64> {
        Ok(self.p_below.compose(f)?.sub(&f.compose(&self.p_below)?)?.norm())
    }
}

fn rank_of_projector(p: Option<&Mat>) -> usize {
    p.map_or(0, |m| m.trace().re.round().max(0.0) as usize)
}

fn piece(l: &GradedMap, band: Band) -> Vec<linalg::SpectralPiece> {
    l.source().degrees().map(|i| spectral_piece(&l.block_or_zero(i), |z| band.contains(z))).collect()
}

/// Cutoff decomposition at `|z| = a`.
pub fn spectral_split(l: &GradedMap, a: f64) -> Result<SpectralSplit> {
    let spectra = degree_spectra(l)?;
    check_ring(&spectra, a)?;
    let s = l.source();
    let pieces = piece(l, Band::Below(a));
    let p_below = GradedMap::from_fn(s, s, 0, |i| pieces[s.index(i).unwrap()].projector.clone())?;
    let p_above = GradedMap::identity(s).sub(&p_below)?;
    Ok(SpectralSplit { operator: l.clone(), cutoff: a, clusters: clusters(l)?, p_below, p_above })
}

/// A complex restricted to a spectral band, with the orthonormal bases used.
#[derive(Clone, Debug)]
pub struct Restricted {
    pub complex: Complex,
    pub bases: Vec<Mat>,
    /// Eigenvalues of `L` on the band, per degree.
    pub spectrum: Vec<Vec<C64>>,
    /// Scale of the parent complex for rank decisions.
    pub scale: f64,
}

/// Restriction of `(E, d, δ)` to the band of `L = [d, δ]`.
pub fn restrict(c: &Complex, l: &GradedMap, band: Band) -> Result<Restricted> {
    let spectra = degree_spectra(l)?;
    for a in band.cutoffs() {
        check_ring(&spectra, a)?;
    }
    let s = &c.space;
    let pieces = piece(l, band);
    let bases: Vec<Mat> = pieces.iter().map(|p| p.basis.clone()).collect();
    let space = s.with_dims(bases.iter().map(|b| b.ncols()).collect())?;
    let basis_at = |i: i32| bases[s.index(i).unwrap()].clone();
    let cut = |f: &GradedMap| {
        GradedMap::from_fn(&space, &space, f.shift(), |i| basis_at(i + f.shift()).adjoint() * f.block_or_zero(i) * basis_at(i))
    };
    let d = c.d.as_ref().map(&cut).transpose()?;
    let delta = c.delta.as_ref().map(&cut).transpose()?;
    let scale = c.d.as_ref().map_or(0.0, |m| m.norm()).max(c.delta.as_ref().map_or(0.0, |m| m.norm()));
    Ok(Restricted {
        complex: Complex { space, d, delta },
        bases,
        spectrum: pieces.into_iter().map(|p| p.selected).collect(),
        scale,
    })
}

/// `k_{<a} = P_{<a} k P_{<a}`.
pub fn truncated_homotopy(split: &SpectralSplit, k: &GradedMap) -> Result<GradedMap> {
    split.p_below.compose(&k.compose(&split.p_below)?)
}

/// `max |[δ, k_{<a}] − P_{<a}|`, the homotopy identity on `E_{<a}`.
pub fn truncated_homotopy_residual(split: &SpectralSplit, delta: &GradedMap, k_below: &GradedMap) -> Result<f64> {
    Ok(delta.supercommutator(k_below)?.sub(&split.p_below)?.max_abs())
}

/// `Σ (−1)^i dim E^i_{<a}`.
pub fn truncated_dim_alternating_sum(split: &SpectralSplit) -> i64 {
    split.below_space().chi()
}

/// `∏_i det((L + σ)|_{band ∩ E^i})^{(−1)^i i}`; a zero factor with nonzero total order is a pole.
pub fn truncated_zeta(l: &GradedMap, band: Band, sigma: C64) -> Result<C64> {
    let spectra = degree_spectra(l)?;
    for a in band.cutoffs() {
        check_ring(&spectra, a)?;
    }
    zeta_from_spectra(l.source(), &spectra, band, sigma)
}

fn zeta_from_spectra(space: &GradedSpace, spectra: &[Vec<C64>], band: Band, sigma: C64) -> Result<C64> {
    let tol = CLUSTER_RTOL * spectral_scale(spectra).max(1.0);
    let mut prod = PowerProduct::new(space.len() > LOG_SPACE_DEGREES);
    let mut order = 0i64;
    for (k, i) in space.degrees().enumerate() {
        let w = torsion_weight(i);
        for &z in spectra[k].iter().filter(|z| band.contains(**z)) {
            let f = z + sigma;
            if f.norm() <= tol {
                order += w;
            } else {
                prod.push(f, w);
            }
        }
    }
    if order != 0 {
        return Err(Error::Pole { order });
    }
    Ok(prod.value())
}

/// Order of `∏ det((L+σ)|_{E^i})^{(−1)^i i}` at `σ = −z₀`, with `Trs[N P_{z₀}]`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ZetaOrder {
    pub order: i64,
    pub supertrace: f64,
}

pub fn zeta_order_at(l: &GradedMap, z0: C64) -> Result<ZetaOrder> {
    let spectra = degree_spectra(l)?;
    let tol = CLUSTER_RTOL * spectral_scale(&spectra).max(1.0);
    let s = l.source();
    let near = |z: C64| (z - z0).norm() <= tol;
    let order = s
        .degrees()
        .enumerate()
        .map(|(k, i)| torsion_weight(i) * spectra[k].iter().filter(|z| near(**z)).count() as i64)
        .sum();
    let proj = GradedMap::from_fn(s, s, 0, |i| spectral_piece(&l.block_or_zero(i), near).projector)?;
    let np = GradedMap::number_operator(s).compose(&proj)?;
    Ok(ZetaOrder { order, supertrace: np.supertrace()?.re })
}

/// The glued coordinate at one cutoff.
#[derive(Clone, Debug, PartialEq)]
pub struct GluedValue {
    pub cutoff: f64,
    pub value: C64,
    pub below_dims: Vec<usize>,
}

/// `[ρh]_{<a} / τ_{<a}(δ) · ∏ det([d,δ]|_{E^i_{>a}})^{(−1)^i i}` for closed representatives `h`.
pub fn glued_section(c: &Complex, a: f64, reps: &[Mat]) -> Result<GluedValue> {
    let l = c.laplacian()?;
    let below = restrict(c, &l, Band::Below(a))?;
    let above = restrict(c, &l, Band::Above(a))?;
    let split = spectral_split(&l, a)?;
    let mut projected = Vec::with_capacity(reps.len());
    for (k, i) in c.space.degrees().enumerate() {
        let h = reps.get(k).ok_or_else(|| Error::BadRepresentatives("missing degree".into()))?;
        let ph = split.p_below.block_or_zero(i) * h;
        projected.push(below.bases[k].adjoint() * ph);
    }
    let scale = below.scale;
    let rho = rho_with(&below.complex, &projected, Complements::Orthogonal, scale)?;
    let tau = tau_delta_scaled(&below.complex, Complements::Orthogonal, scale)?;
    let zeta_above = zeta_from_spectra(&c.space, &above.spectrum, Band::All, C64::new(0.0, 0.0))?;
    Ok(GluedValue { cutoff: a, value: rho.ratio(&tau)? * zeta_above, below_dims: below.complex.space.dims().to_vec() })
}

/// `ρ(h) / τ(δ)` computed on the whole space.
pub fn direct_section(c: &Complex, reps: &[Mat]) -> Result<C64> {
    let scale = c.d()?.norm().max(c.delta()?.norm());
    let rho = rho_with(c, reps, Complements::Orthogonal, scale)?;
    rho.ratio(&tau_delta_scaled(c, Complements::Orthogonal, scale)?)
}

/// Closed representatives of `H(E, d)` at the scale of `(d, δ)`.
pub fn default_representatives(c: &Complex) -> Result<Vec<Mat>> {
    let scale = c.d()?.norm().max(c.delta.as_ref().map_or(0.0, |x| x.norm()));
    Ok(cohomology_with_scale(&c.space, c.d()?, scale)?.representatives)
}

/// Largest relative deviation of a set of values from their first entry.
pub fn relative_spread(values: &[C64]) -> f64 {
    let Some(first) = values.first() else { return 0.0 };
    values.iter().map(|v| (v - first).norm() / first.norm().max(f64::MIN_POSITIVE)).fold(0.0, f64::max)
}

/// `∏_i det(Bᵢ* L Bᵢ)^{(−1)^i i}` over the orthonormal band bases `Bᵢ`.
fn compressed_zeta(l: &GradedMap, band: &Restricted) -> Result<C64> {
    let s = l.source();
    let mut prod = PowerProduct::new(s.len() > LOG_SPACE_DEGREES);
    for (k, i) in s.degrees().enumerate() {
        let b = &band.bases[k];
        if b.ncols() == 0 {
            continue;
        }
        let f = det(&(b.adjoint() * l.block_or_zero(i) * b));
        if f.norm() == 0.0 {
            return Err(Error::Pole { order: torsion_weight(i) });
        }
        prod.push(f, torsion_weight(i));
    }
    Ok(prod.value())
}

/// Band identity and multiplicativity over `E_{<b} = E_{<a} ⊕ E_{(a,b)}`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BandCheck {
    /// `τ_{(a,b)}(d) / τ_{(a,b)}(δ)`.
    pub section_ratio: C64,
    /// `R_{(a,b)}(0)`.
    pub zeta: C64,
    pub residual: f64,
    /// `|τ_{<b}(δ) / (det W · s · τ_{<a}(δ) τ_{(a,b)}(δ)) − 1|`.
    pub multiplicativity: f64,
}

pub fn band_section_identity(c: &Complex, a: f64, b: f64) -> Result<BandCheck> {
    let ordered = a < b;
    if !ordered {
        return Err(Error::Invalid(format!("band needs a < b, got ({a}, {b})")));
    }
    let l = c.laplacian()?;
    let band = restrict(c, &l, Band::Between(a, b))?;
    let low = restrict(c, &l, Band::Below(a))?;
    let high = restrict(c, &l, Band::Below(b))?;
    let scale = band.scale;
    let zeta = compressed_zeta(&l, &band)?;
    let td = tau_d_scaled(&band.complex, Complements::Orthogonal, scale)?;
    let tx = tau_delta_scaled(&band.complex, Complements::Orthogonal, scale)?;
    let section_ratio = td.ratio(&tx)?;
    let residual = (section_ratio / zeta - 1.0).norm();

    let s = &c.space;
    let mut w = PowerProduct::new(s.len() > LOG_SPACE_DEGREES);
    for (k, i) in s.degrees().enumerate() {
        let joined = hstack(&[&low.bases[k], &band.bases[k]], s.dim(i));
        w.push(det(&(high.bases[k].adjoint() * joined)), sign(i as i64));
    }
    let sgn = direct_sum_sign(&low.complex.space, &band.complex.space) as f64;
    let t_low = tau_delta_scaled(&low.complex, Complements::Orthogonal, scale)?.scalar;
    let t_high = tau_delta_scaled(&high.complex, Complements::Orthogonal, scale)?.scalar;
    let multiplicativity = (w.value() * sgn * t_low * tx.scalar / t_high - 1.0).norm();
    Ok(BandCheck { section_ratio, zeta, residual, multiplicativity })
}

/// `E♯` with `E♯^i = (E^{p+q−i})*` and transposed differentials.
pub fn sharp_complex(c: &Complex) -> Result<Complex> {
    let s = &c.space;
    let pq = s.p() + s.q();
    let mut dims = s.dims().to_vec();
    dims.reverse();
    let t = s.with_dims(dims)?;
    let flip = |f: &GradedMap| {
        GradedMap::from_fn(&t, &t, f.shift(), |i| f.block_or_zero(pq - i - f.shift()).transpose())
    };
    Ok(Complex { space: t.clone(), d: c.d.as_ref().map(&flip).transpose()?, delta: c.delta.as_ref().map(&flip).transpose()? })
}

/// Comparison of a quantity on `E` and on `E♯` under the power `(−1)^{n−1}`, `n = q − p`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DualityShadow {
    pub forward: C64,
    pub sharp: C64,
    pub exponent: i32,
    pub residual: f64,
}

/// For exact `(E, d)` compares glued values; otherwise compares `R_{>a}(0)`.
pub fn duality_shadow(c: &Complex, a: f64) -> Result<DualityShadow> {
    let s = &c.space;
    let exponent = sign((s.q() - s.p() - 1) as i64) as i32;
    let sharp = sharp_complex(c)?;
    let reps = default_representatives(c)?;
    let exact = reps.iter().all(|r| r.ncols() == 0);
    let (forward, back) = if exact {
        let sharp_reps = default_representatives(&sharp)?;
        (glued_section(c, a, &reps)?.value, glued_section(&sharp, a, &sharp_reps)?.value)
    } else {
        let l = c.laplacian()?;
        let ls = sharp.laplacian()?;
        (truncated_zeta(&l, Band::Above(a), C64::new(0.0, 0.0))?, truncated_zeta(&ls, Band::Above(a), C64::new(0.0, 0.0))?)
    };
    let predicted = forward.powi(exponent);
    Ok(DualityShadow { forward, sharp: back, exponent, residual: (back / predicted - 1.0).norm() })
}

/// A random complex for gluing experiments with the cutoffs that avoid its spectrum.
#[derive(Clone, Debug)]
pub struct GlueInstance {
    pub complex: Complex,
    pub cutoffs: Vec<f64>,
}

/// Spectral scales of the exact blocks; eigenvalue moduli of `L` lie in `[0.7 s, 1.3 s]`.
pub const GLUE_SCALES: [f64; 3] = [1.0, 10.0, 100.0];
/// Cutoffs separating the annuli of `GLUE_SCALES` and the zero eigenvalue.
pub const GLUE_CUTOFFS: [f64; 4] = [0.3, 3.0, 30.0, 300.0];

/// Direct sum of exact pairs with annular spectra and a block with `d = 0`, `δ` exact
/// (so `dim H > 0` when `with_cohomology`), conjugated by a random automorphism.
pub fn random_glue_instance(rng: &mut impl Rng, len: usize, max_dim: usize, with_cohomology: bool) -> Result<GlueInstance> {
    let p = rng.random_range(-1..=1);
    let mut total: Option<Complex> = None;
    for &scale in &GLUE_SCALES {
        let dims = random_exact_dims(rng, len, max_dim);
        let space = GradedSpace::new(p, dims)?;
        let block = random_invertible_pair(rng, &space, PairSpectrum::Annulus(scale))?;
        total = Some(match total {
            None => block,
            Some(t) => t.direct_sum(&block)?,
        });
    }
    let mut c = total.unwrap();
    if with_cohomology {
        let space = GradedSpace::new(p, random_exact_dims(rng, len, max_dim))?;
        let delta = random_exact_codifferential_with_cond(rng, &space, ANNULUS_MAX_COND)?;
        let zero = Complex::new(space.clone(), Some(GradedMap::zero(&space, &space, 1)), Some(delta))?;
        c = c.direct_sum(&zero)?;
    }
    let g = random_aut_with_cond(rng, &c.space, ANNULUS_MAX_COND);
    let complex = c.conjugate(&g)?;
    let spectra = degree_spectra(&complex.laplacian()?)?;
    let cutoffs = GLUE_CUTOFFS.iter().cloned().filter(|&a| check_ring(&spectra, a).is_ok()).collect();
    Ok(GlueInstance { complex, cutoffs })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graded::trial_rng;
    use crate::linalg::{c, zeros};

    fn hand() -> Complex {
        let e = GradedSpace::new(0, vec![1, 1]).unwrap();
        let mut d = GradedMap::zero(&e, &e, 1);
        d.set_block(0, Mat::from_element(1, 1, c(2.0))).unwrap();
        let mut x = GradedMap::zero(&e, &e, -1);
        x.set_block(1, Mat::from_element(1, 1, c(3.0))).unwrap();
        Complex::new(e, Some(d), Some(x)).unwrap()
    }

    #[test]
    fn diagonal_split() {
        let e = GradedSpace::new(0, vec![2]).unwrap();
        let mut l = GradedMap::zero(&e, &e, 0);
        l.set_block(0, Mat::from_diagonal(&nalgebra::DVector::from_vec(vec![c(0.1), c(5.0)]))).unwrap();
        let s = spectral_split(&l, 1.0).unwrap();
        assert_eq!(s.below_space().dims(), &[1]);
        assert!(matches!(spectral_split(&l, 5.0), Err(Error::CutoffOnSpectrum { .. })));
    }

    #[test]
    fn hand_spectrum_and_zeta() {
        let cx = hand();
        let l = cx.laplacian().unwrap();
        assert_eq!(spectral_split(&l, 1.0).unwrap().below_space().dims(), &[0, 0]);
        assert_eq!(spectral_split(&l, 10.0).unwrap().below_space().dims(), &[1, 1]);
        let z = truncated_zeta(&l, Band::All, c(0.0)).unwrap();
        assert!((z - 1.0 / 6.0).norm() < 1e-14);
        assert_eq!(truncated_zeta(&l, Band::Below(1.0), c(0.0)).unwrap(), c(1.0));
        for a in [1.0, 10.0] {
            let g = glued_section(&cx, a, &[zeros(1, 0), zeros(1, 0)]).unwrap();
            assert!((g.value - 1.0 / 6.0).norm() < 1e-14, "a = {a}: {}", g.value);
        }
        let b = band_section_identity(&cx, 1.0, 10.0).unwrap();
        assert!((b.zeta - 1.0 / 6.0).norm() < 1e-14 && b.residual < 1e-14);
    }

    #[test]
    fn order_of_zero_operator() {
        let e = GradedSpace::new(0, vec![1, 1]).unwrap();
        let l = GradedMap::zero(&e, &e, 0);
        let o = zeta_order_at(&l, c(0.0)).unwrap();
        assert_eq!(o.order, -1);
        assert!((o.supertrace + 1.0).abs() < 1e-12);
        assert_eq!(zeta_order_at(&l, c(2.0)).unwrap().order, 0);
        assert_eq!(truncated_zeta(&l, Band::All, c(0.0)), Err(Error::Pole { order: -1 }));
    }

    #[test]
    fn glue_instance_is_cutoff_independent() {
        let mut rng = trial_rng(21, 0);
        let inst = random_glue_instance(&mut rng, 3, 3, true).unwrap();
        let reps = default_representatives(&inst.complex).unwrap();
        assert!(reps.iter().any(|r| r.ncols() > 0));
        let direct = direct_section(&inst.complex, &reps).unwrap();
        let vals: Vec<C64> = inst.cutoffs.iter().map(|&a| glued_section(&inst.complex, a, &reps).unwrap().value).collect();
        assert!(vals.len() >= 3);
        assert!(relative_spread(&vals) < 1e-8, "{vals:?}");
        assert!((vals[0] / direct - 1.0).norm() < 1e-8);
    }
}
