//! Dense complex linear algebra used throughout: ranks, complements, determinants and
//! ordered Schur forms.

use nalgebra::DMatrix;
use num_complex::Complex64;
use num_traits::Zero;

pub type C64 = Complex64;
pub type Mat = DMatrix<C64>;

/// Relative singular-value threshold for rank decisions.
pub const RANK_RTOL: f64 = 1e-9;

pub fn c(re: f64) -> C64 {
    C64::new(re, 0.0)
}

pub fn zeros(r: usize, k: usize) -> Mat {
    Mat::zeros(r, k)
}

pub fn eye(n: usize) -> Mat {
    Mat::identity(n, n)
}

/// Largest absolute entry, zero for empty matrices.
pub fn max_abs(m: &Mat) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Spectral norm (largest singular value).
pub fn op_norm(m: &Mat) -> f64 {
    singular_values(m).first().cloned().unwrap_or(0.0)
}

/// Full singular value decomposition `m = U S V*` with square unitary `U`, `V`.
pub struct FullSvd {
    pub u: Mat,
    /// Descending, `min(rows, cols)` entries.
    pub s: Vec<f64>,
    pub v: Mat,
}

const JACOBI_SWEEPS: usize = 80;

/// One-sided Jacobi on the columns of a tall `a`: returns `(a V, V)` with orthogonal columns in `a V`.
fn jacobi_columns(mut a: Mat) -> (Mat, Mat) {
    let n = a.ncols();
    let mut v = eye(n);
    for _ in 0..JACOBI_SWEEPS {
        let mut rotated = false;
        for p in 0..n {
            for q in p + 1..n {
                let alpha: f64 = a.column(p).iter().map(|z| z.norm_sqr()).sum();
                let beta: f64 = a.column(q).iter().map(|z| z.norm_sqr()).sum();
                let gamma: C64 = a.column(p).iter().zip(a.column(q).iter()).map(|(x, y)| x.conj() * y).sum();
                let g = gamma.norm();
                if g == 0.0 || g <= f64::EPSILON * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let phase = gamma / g;
                let zeta = (beta - alpha) / (2.0 * g);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let t = if zeta == 0.0 { 1.0 } else { t };
                let cs = 1.0 / (1.0 + t * t).sqrt();
                let sn = cs * t;
                for m in [&mut a, &mut v] {
                    for r in 0..m.nrows() {
                        let x = m[(r, p)];
                        let y = m[(r, q)] * phase.conj();
                        m[(r, p)] = x * cs - y * sn;
                        m[(r, q)] = x * sn + y * cs;
                    }
                }
            }
        }
        if !rotated {
            break;
        }
    }
    (a, v)
}

/// Extends orthonormal columns `q` to a unitary matrix of size `n`.
pub fn complete_unitary(q: &Mat, n: usize) -> Mat {
    let mut cols: Vec<nalgebra::DVector<C64>> = q.column_iter().map(|c| c.into_owned()).collect();
    let mut candidates: Vec<usize> = (0..n).collect();
    while cols.len() < n {
        let mut best: Option<(f64, nalgebra::DVector<C64>, usize)> = None;
        for (ci, &j) in candidates.iter().enumerate() {
            let mut e = nalgebra::DVector::from_element(n, C64::new(0.0, 0.0));
            e[j] = C64::new(1.0, 0.0);
            for _ in 0..2 {
                for c in &cols {
                    let proj = c.dotc(&e);
                    e -= c * proj;
                }
            }
            let nrm = e.norm();
            if best.as_ref().is_none_or(|b| nrm > b.0) {
                best = Some((nrm, e, ci));
            }
        }
        let (nrm, e, ci) = best.expect("candidate basis vector");
        candidates.remove(ci);
        cols.push(e / C64::new(nrm, 0.0));
    }
    if cols.is_empty() {
        return zeros(n, 0);
    }
    Mat::from_columns(&cols)
}

fn tall_svd(m: &Mat) -> FullSvd {
    let (r, k) = m.shape();
    let (av, v) = jacobi_columns(m.clone());
    let norms: Vec<f64> = av.column_iter().map(|c| c.norm()).collect();
    let mut idx: Vec<usize> = (0..k).collect();
    idx.sort_by(|&a, &b| norms[b].total_cmp(&norms[a]));
    let s: Vec<f64> = idx.iter().map(|&j| norms[j]).collect();
    let v = Mat::from_fn(k, k, |i, j| v[(i, idx[j])]);
    let top = s.first().cloned().unwrap_or(0.0);
    let reliable = s.iter().take_while(|&&x| x > 0.0 && x > 1e-13 * top).count();
    let mut u = zeros(r, reliable);
    for j in 0..reliable {
        let col = av.column(idx[j]) / C64::new(s[j], 0.0);
        u.set_column(j, &col);
    }
    // Re-orthonormalize the computed left vectors before completing them.
    let u = if reliable > 0 { gram_schmidt(&u) } else { u };
    FullSvd { u: complete_unitary(&u, r), s, v }
}

fn gram_schmidt(q: &Mat) -> Mat {
    let mut cols: Vec<nalgebra::DVector<C64>> = Vec::new();
    for c in q.column_iter() {
        let mut e = c.into_owned();
        for _ in 0..2 {
            for b in &cols {
                let proj = b.dotc(&e);
                e -= b * proj;
            }
        }
        let nrm = e.norm();
        cols.push(e / C64::new(nrm, 0.0));
    }
    Mat::from_columns(&cols)
}

/// Singular value decomposition by one-sided Jacobi rotations.
pub fn full_svd(m: &Mat) -> FullSvd {
    let (r, k) = m.shape();
    if r == 0 || k == 0 {
        return FullSvd { u: eye(r), s: vec![], v: eye(k) };
    }
    if r >= k {
        tall_svd(m)
    } else {
        let t = tall_svd(&m.adjoint());
        FullSvd { u: t.v, s: t.s, v: t.u }
    }
}

/// Singular values in descending order.
pub fn singular_values(m: &Mat) -> Vec<f64> {
    full_svd(m).s
}

/// Moore–Penrose pseudo-inverse, dropping singular values at or below `RANK_RTOL · max(σ_max, scale)`.
pub fn pinv(m: &Mat, scale: f64) -> Mat {
    let svd = full_svd(m);
    let rank = rank_with_scale(&svd.s, scale);
    let mut out = zeros(m.ncols(), m.nrows());
    for j in 0..rank {
        out += svd.v.column(j) * svd.u.column(j).adjoint() / C64::new(svd.s[j], 0.0);
    }
    out
}

/// Minimum-norm least-squares solution of `a x = b`.
pub fn lstsq(a: &Mat, b: &Mat) -> Mat {
    let svd = full_svd(a);
    let top = svd.s.first().cloned().unwrap_or(0.0);
    let mut x = zeros(a.ncols(), b.ncols());
    for (j, &sv) in svd.s.iter().enumerate() {
        if sv <= 1e-14 * top || sv == 0.0 {
            continue;
        }
        let coeff = svd.u.column(j).adjoint() * b / C64::new(sv, 0.0);
        x += svd.v.column(j) * coeff;
    }
    x
}

/// Rank with threshold `RANK_RTOL * max(sigma_max, scale)`.
pub fn rank_with_scale(s: &[f64], scale: f64) -> usize {
    let top = s.first().cloned().unwrap_or(0.0).max(scale);
    if top == 0.0 {
        return 0;
    }
    s.iter().filter(|&&x| x > RANK_RTOL * top).count()
}

/// Orthonormal basis of the column space, its orthogonal complement, and an
/// orthonormal basis of the kernel and of the row space.
pub struct Spaces {
    pub rank: usize,
    pub range: Mat,
    pub range_perp: Mat,
    pub kernel: Mat,
    pub coimage: Mat,
}

pub fn spaces(m: &Mat, scale: f64) -> Spaces {
    let (r, k) = m.shape();
    let svd = full_svd(m);
    let rank = rank_with_scale(&svd.s, scale);
    Spaces {
        rank,
        range: svd.u.columns(0, rank).into_owned(),
        range_perp: svd.u.columns(rank, r - rank).into_owned(),
        kernel: svd.v.columns(rank, k - rank).into_owned(),
        coimage: svd.v.columns(0, rank).into_owned(),
    }
}

/// Orthonormal basis of the span of the columns of `m`.
pub fn col_basis(m: &Mat, scale: f64) -> Mat {
    spaces(m, scale).range
}

pub fn det(m: &Mat) -> C64 {
    assert_eq!(m.nrows(), m.ncols(), "determinant of a non-square matrix");
    if m.nrows() == 0 {
        return C64::new(1.0, 0.0);
    }
    m.clone().lu().determinant()
}

pub fn inverse(m: &Mat) -> Option<Mat> {
    if m.nrows() == 0 {
        return Some(zeros(0, 0));
    }
    m.clone().lu().try_inverse()
}

pub fn hstack(parts: &[&Mat], rows: usize) -> Mat {
    let cols: usize = parts.iter().map(|p| p.ncols()).sum();
    let mut out = zeros(rows, cols);
    let mut at = 0;
    for p in parts {
        assert_eq!(p.nrows(), rows, "hstack row mismatch");
        out.view_mut((0, at), (rows, p.ncols())).copy_from(p);
        at += p.ncols();
    }
    out
}

pub fn block_diag(a: &Mat, b: &Mat) -> Mat {
    let mut out = zeros(a.nrows() + b.nrows(), a.ncols() + b.ncols());
    out.view_mut((0, 0), a.shape()).copy_from(a);
    out.view_mut((a.nrows(), a.ncols()), b.shape()).copy_from(b);
    out
}

/// Product of integer powers of complex numbers, switching to log-modulus plus phase
/// accumulation for long products.
pub struct PowerProduct {
    direct: C64,
    log_mod: f64,
    phase: f64,
    log_space: bool,
    zero: bool,
}

impl PowerProduct {
    pub fn new(log_space: bool) -> Self {
        PowerProduct { direct: C64::new(1.0, 0.0), log_mod: 0.0, phase: 0.0, log_space, zero: false }
    }

    pub fn push(&mut self, z: C64, e: i64) {
        if e == 0 {
            return;
        }
        if z.is_zero() {
            self.zero = true;
            return;
        }
        if self.log_space {
            self.log_mod += e as f64 * z.norm().ln();
            self.phase += e as f64 * z.arg();
        } else {
            self.direct *= z.powi(e as i32);
        }
    }

    pub fn value(&self) -> C64 {
        if self.zero {
            return C64::zero();
        }
        if self.log_space {
            C64::from_polar(self.log_mod.exp(), self.phase)
        } else {
            self.direct
        }
    }
}

/// Products over more than this many degrees are accumulated in log space.
pub const LOG_SPACE_DEGREES: usize = 6;

/// Complex Schur form `a = q t q*` with `t` upper triangular.
pub struct Schur {
    pub q: Mat,
    pub t: Mat,
}

pub fn schur(a: &Mat) -> Schur {
    let n = a.nrows();
    if n == 0 {
        return Schur { q: zeros(0, 0), t: zeros(0, 0) };
    }
    let (q, mut t) = a.clone().schur().unpack();
    for j in 0..n {
        for i in j + 1..n {
            t[(i, j)] = C64::zero();
        }
    }
    Schur { q, t }
}

fn givens(f: C64, g: C64) -> (f64, C64) {
    let fa = f.norm();
    let ga = g.norm();
    if ga == 0.0 {
        return (1.0, C64::zero());
    }
    if fa == 0.0 {
        return (0.0, g.conj() / ga);
    }
    let r = (fa * fa + ga * ga).sqrt();
    let cs = fa / r;
    let sn = (f / fa) * g.conj() / r;
    (cs, sn)
}

impl Schur {
    /// Swaps the diagonal entries at `k` and `k + 1` by a unitary rotation.
    fn swap(&mut self, k: usize) {
        let n = self.t.nrows();
        let t11 = self.t[(k, k)];
        let t22 = self.t[(k + 1, k + 1)];
        let (cs, sn) = givens(self.t[(k, k + 1)], t22 - t11);
        for j in k + 2..n {
            let x = self.t[(k, j)];
            let y = self.t[(k + 1, j)];
            self.t[(k, j)] = x * cs + sn * y;
            self.t[(k + 1, j)] = y * cs - sn.conj() * x;
        }
        for i in 0..k {
            let x = self.t[(i, k)];
            let y = self.t[(i, k + 1)];
            self.t[(i, k)] = x * cs + sn.conj() * y;
            self.t[(i, k + 1)] = y * cs - sn * x;
        }
        self.t[(k, k)] = t22;
        self.t[(k + 1, k + 1)] = t11;
        for i in 0..n {
            let x = self.q[(i, k)];
            let y = self.q[(i, k + 1)];
            self.q[(i, k)] = x * cs + sn.conj() * y;
            self.q[(i, k + 1)] = y * cs - sn * x;
        }
    }

    /// Reorders so that diagonal entries satisfying `select` come first; returns their count.
    pub fn reorder(&mut self, select: impl Fn(C64) -> bool) -> usize {
        let n = self.t.nrows();
        let mut placed = 0;
        for j in 0..n {
            if select(self.t[(j, j)]) {
                let mut k = j;
                while k > placed {
                    self.swap(k - 1);
                    k -= 1;
                }
                placed += 1;
            }
        }
        placed
    }

    pub fn eigenvalues(&self) -> Vec<C64> {
        (0..self.t.nrows()).map(|i| self.t[(i, i)]).collect()
    }
}

/// Solves `a x - x b = c` for upper-triangular `a`, `b` with disjoint spectra.
pub fn sylvester_triangular(a: &Mat, b: &Mat, cm: &Mat) -> Mat {
    let k = a.nrows();
    let m = b.nrows();
    let mut x = zeros(k, m);
    for j in 0..m {
        let mut rhs: Vec<C64> = (0..k).map(|i| cm[(i, j)]).collect();
        for l in 0..j {
            let blj = b[(l, j)];
            for i in 0..k {
                rhs[i] += x[(i, l)] * blj;
            }
        }
        let bjj = b[(j, j)];
        for i in (0..k).rev() {
            let mut s = rhs[i];
            for l in i + 1..k {
                s -= a[(i, l)] * x[(l, j)];
            }
            x[(i, j)] = s / (a[(i, i)] - bjj);
        }
    }
    x
}

/// Invariant subspace and spectral projector of `a` for the eigenvalues picked by `select`.
pub struct SpectralPiece {
    /// Orthonormal basis of the selected generalized eigenspace.
    pub basis: Mat,
    /// Projector onto that space along the complementary generalized eigenspace.
    pub projector: Mat,
    pub selected: Vec<C64>,
    pub rest: Vec<C64>,
}

pub fn spectral_piece(a: &Mat, select: impl Fn(C64) -> bool) -> SpectralPiece {
    let n = a.nrows();
    let mut sc = schur(a);
    let k = sc.reorder(&select);
    let ev = sc.eigenvalues();
    let t11 = sc.t.view((0, 0), (k, k)).into_owned();
    let t22 = sc.t.view((k, k), (n - k, n - k)).into_owned();
    let t12 = sc.t.view((0, k), (k, n - k)).into_owned();
    let y = sylvester_triangular(&t11, &t22, &(-t12));
    let mut mid = zeros(n, n);
    for i in 0..k {
        mid[(i, i)] = c(1.0);
    }
    mid.view_mut((0, k), (k, n - k)).copy_from(&(-y));
    let projector = &sc.q * mid * sc.q.adjoint();
    SpectralPiece {
        basis: sc.q.columns(0, k).into_owned(),
        projector,
        selected: ev[..k].to_vec(),
        rest: ev[k..].to_vec(),
    }
}

/// Eigenvalues of a square matrix.
pub fn eigenvalues(a: &Mat) -> Vec<C64> {
    schur(a).eigenvalues()
}
