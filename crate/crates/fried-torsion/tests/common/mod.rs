#![allow(dead_code)]

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// Diagonal of the Smith normal form of an integer matrix, by elementary row and column operations.
pub fn smith_diagonal(mut m: Vec<Vec<BigInt>>) -> Vec<BigInt> {
    let rows = m.len();
    let cols = m.first().map_or(0, |r| r.len());
    let mut diag = Vec::new();
    for t in 0..rows.min(cols) {
        let Some((pi, pj)) = smallest_nonzero(&m, t) else {
            diag.extend(std::iter::repeat_n(BigInt::zero(), rows.min(cols) - t));
            break;
        };
        m.swap(t, pi);
        for r in m.iter_mut() {
            r.swap(t, pj);
        }
        loop {
            let mut clean = true;
            for i in t + 1..rows {
                let q = -m[i][t].div_floor(&m[t][t]);
                add_row(&mut m, t, i, &q);
                clean &= m[i][t].is_zero();
            }
            for j in t + 1..cols {
                let q = -m[t][j].div_floor(&m[t][t]);
                add_col(&mut m, t, j, &q);
                clean &= m[t][j].is_zero();
            }
            if clean {
                let bad = (t + 1..rows).flat_map(|i| (t + 1..cols).map(move |j| (i, j))).find(|&(i, j)| !(&m[i][j] % &m[t][t]).is_zero());
                match bad {
                    None => break,
                    Some((i, _)) => add_row(&mut m, i, t, &BigInt::one()),
                }
            } else if let Some((pi, pj)) = smallest_nonzero(&m, t) {
                m.swap(t, pi);
                for r in m.iter_mut() {
                    r.swap(t, pj);
                }
            }
        }
        diag.push(m[t][t].abs());
    }
    diag
}

/// `row[to] += q · row[from]`.
fn add_row(m: &mut [Vec<BigInt>], from: usize, to: usize, q: &BigInt) {
    let src = m[from].clone();
    for (x, y) in m[to].iter_mut().zip(&src) {
        *x += y * q;
    }
}

/// `col[to] += q · col[from]`.
fn add_col(m: &mut [Vec<BigInt>], from: usize, to: usize, q: &BigInt) {
    for row in m.iter_mut() {
        let v = &row[from] * q;
        row[to] += v;
    }
}

fn smallest_nonzero(m: &[Vec<BigInt>], t: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize)> = None;
    for i in t..m.len() {
        for j in t..m[i].len() {
            if m[i][j].is_zero() {
                continue;
            }
            if best.is_none_or(|(a, b)| m[i][j].abs() < m[a][b].abs()) {
                best = Some((i, j));
            }
        }
    }
    best
}

/// `A^k` by repeated multiplication.
pub fn power(a: [[i64; 2]; 2], k: usize) -> Vec<Vec<BigInt>> {
    let mut p = vec![vec![BigInt::one(), BigInt::zero()], vec![BigInt::zero(), BigInt::one()]];
    for _ in 0..k {
        let next: Vec<Vec<BigInt>> = (0..2)
            .map(|i| (0..2).map(|j| (0..2).map(|l| &p[i][l] * BigInt::from(a[l][j])).sum()).collect())
            .collect();
        p = next;
    }
    p
}

/// `|coker(A^k − 1)|`, the number of fixed points of `A^k` on the torus.
pub fn fixed_points_by_smith(a: [[i64; 2]; 2], k: usize) -> BigInt {
    let mut m = power(a, k);
    for (i, row) in m.iter_mut().enumerate() {
        row[i] -= BigInt::one();
    }
    smith_diagonal(m).into_iter().product()
}

/// Primitive counts by the recursion `k P_k = N_k − Σ_{d|k, d<k} d P_d`.
pub fn primitive_by_recursion(n: &[BigInt]) -> Vec<BigInt> {
    let mut p: Vec<BigInt> = Vec::with_capacity(n.len());
    for k in 1..=n.len() {
        let mut rest = n[k - 1].clone();
        for d in 1..k {
            if k % d == 0 {
                rest -= &p[d - 1] * BigInt::from(d);
            }
        }
        p.push(rest / BigInt::from(k));
    }
    p
}

/// `(1 − λw)(1 − w/λ) / (1 − w)²` with `w = e^{−σ+iθ}` for the unit-roof suspension with stable sign `+`.
pub fn closed_form_oracle(trace: f64, sigma: f64) -> f64 {
    let lam = (trace + (trace * trace - 4.0).sqrt()) / 2.0;
    let w = (-sigma).exp();
    (1.0 - lam * w) * (1.0 - w / lam) / ((1.0 - w) * (1.0 - w))
}

pub fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_fried-torsion")
}
