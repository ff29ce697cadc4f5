//! Exact integer and rational linear algebra on small dense matrices.
//!
//! Matrices are row-major `Vec<Vec<_>>`. Everything here is sized for fan data
//! (a handful of rows and columns), so clarity wins over asymptotics.

#![allow(clippy::needless_range_loop)]

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type IntMatrix = Vec<Vec<i64>>;

/// Smith normal form `U * A * V = D` with `U`, `V` unimodular.
#[derive(Debug, Clone)]
pub struct Snf {
    /// Invariant factors, nonnegative, each dividing the next. Length = rank.
    pub factors: Vec<i64>,
    pub u: IntMatrix,
    pub v: IntMatrix,
}

fn identity(n: usize) -> Vec<Vec<i128>> {
    (0..n).map(|i| (0..n).map(|j| i128::from(i == j)).collect()).collect()
}

fn narrow(m: Vec<Vec<i128>>) -> IntMatrix {
    m.into_iter()
        .map(|row| {
            row.into_iter()
                .map(|x| i64::try_from(x).expect("SNF transform entry overflows i64"))
                .collect()
        })
        .collect()
}

/// Smith normal form of an `r x c` integer matrix.
pub fn smith_normal_form(a: &[Vec<i64>]) -> Snf {
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut m: Vec<Vec<i128>> = a.iter().map(|r| r.iter().map(|&x| i128::from(x)).collect()).collect();
    let mut u = identity(rows);
    let mut v = identity(cols);

    let swap_rows = |m: &mut Vec<Vec<i128>>, u: &mut Vec<Vec<i128>>, i: usize, j: usize| {
        m.swap(i, j);
        u.swap(i, j);
    };
    let swap_cols = |m: &mut Vec<Vec<i128>>, v: &mut Vec<Vec<i128>>, i: usize, j: usize| {
        for r in m.iter_mut() {
            r.swap(i, j);
        }
        for r in v.iter_mut() {
            r.swap(i, j);
        }
    };

    let mut factors = Vec::new();
    for t in 0..rows.min(cols) {
        loop {
            // smallest nonzero entry of the trailing block becomes the pivot
            let mut best: Option<(usize, usize)> = None;
            for i in t..rows {
                for j in t..cols {
                    if m[i][j] != 0 && best.is_none_or(|(bi, bj)| m[i][j].abs() < m[bi][bj].abs()) {
                        best = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = best else {
                return Snf {
                    factors,
                    u: narrow(u),
                    v: narrow(v),
                };
            };
            swap_rows(&mut m, &mut u, t, pi);
            swap_cols(&mut m, &mut v, t, pj);

            let p = m[t][t];
            let mut clean = true;
            for i in t + 1..rows {
                let q = m[i][t].div_euclid(p);
                if q != 0 {
                    for j in 0..cols {
                        m[i][j] -= q * m[t][j];
                    }
                    for j in 0..rows {
                        u[i][j] -= q * u[t][j];
                    }
                }
                clean &= m[i][t] == 0;
            }
            for j in t + 1..cols {
                let q = m[t][j].div_euclid(p);
                if q != 0 {
                    for i in 0..rows {
                        m[i][j] -= q * m[i][t];
                    }
                    for i in 0..cols {
                        v[i][j] -= q * v[i][t];
                    }
                }
                clean &= m[t][j] == 0;
            }
            if !clean {
                continue;
            }
            // divisibility: fold an offending row into row t and retry
            let offending = (t + 1..rows).find(|&i| (t + 1..cols).any(|j| m[i][j] % p != 0));
            if let Some(i) = offending {
                for j in 0..cols {
                    m[t][j] += m[i][j];
                }
                for j in 0..rows {
                    u[t][j] += u[i][j];
                }
                continue;
            }
            if p < 0 {
                for j in 0..cols {
                    m[t][j] = -m[t][j];
                }
                for j in 0..rows {
                    u[t][j] = -u[t][j];
                }
            }
            factors.push(i64::try_from(m[t][t]).expect("invariant factor overflows i64"));
            break;
        }
    }
    Snf {
        factors,
        u: narrow(u),
        v: narrow(v),
    }
}

/// A Z-basis of `{x in Z^c : A x = 0}`, one vector per entry.
pub fn integer_kernel(a: &[Vec<i64>], cols: usize) -> Vec<Vec<i64>> {
    if a.is_empty() {
        return (0..cols)
            .map(|i| (0..cols).map(|j| i64::from(i == j)).collect())
            .collect();
    }
    let snf = smith_normal_form(a);
    let rank = snf.factors.len();
    (rank..cols).map(|k| (0..cols).map(|i| snf.v[i][k]).collect()).collect()
}

/// True when the given vectors are linearly independent and generate a
/// saturated sublattice (all invariant factors equal one).
pub fn spans_saturated(vectors: &[Vec<i64>]) -> bool {
    if vectors.is_empty() {
        return true;
    }
    let snf = smith_normal_form(vectors);
    snf.factors.len() == vectors.len() && snf.factors.iter().all(|&f| f == 1)
}

/// Determinant of a square integer matrix (Bareiss, exact).
pub fn det(a: &[Vec<i64>]) -> i64 {
    let n = a.len();
    if n == 0 {
        return 1;
    }
    let mut m: Vec<Vec<i128>> = a.iter().map(|r| r.iter().map(|&x| i128::from(x)).collect()).collect();
    let mut sign = 1i128;
    let mut prev = 1i128;
    for k in 0..n - 1 {
        if m[k][k] == 0 {
            match (k + 1..n).find(|&i| m[i][k] != 0) {
                Some(i) => {
                    m.swap(k, i);
                    sign = -sign;
                }
                None => return 0,
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) / prev;
            }
        }
        prev = m[k][k];
    }
    i64::try_from(sign * m[n - 1][n - 1]).expect("determinant overflows i64")
}

pub fn int_to_rat(x: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(x))
}

/// Row-reduce a rational matrix in place; returns pivot columns.
fn row_reduce(m: &mut [Vec<BigRational>]) -> Vec<usize> {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][c].recip();
        for x in m[r].iter_mut() {
            *x = &*x * &inv;
        }
        for i in 0..rows {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for j in 0..cols {
                    let delta = &f * &m[r][j];
                    m[i][j] -= delta;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

/// Rank of an integer matrix over Q.
pub fn rank(a: &[Vec<i64>]) -> usize {
    let mut m: Vec<Vec<BigRational>> = a.iter().map(|r| r.iter().copied().map(int_to_rat).collect()).collect();
    row_reduce(&mut m).len()
}

/// Solve `A x = b` over Q. Returns `None` if inconsistent or underdetermined.
pub fn solve_unique(a: &[Vec<BigRational>], b: &[BigRational]) -> Option<Vec<BigRational>> {
    let cols = a.first().map_or(0, Vec::len);
    let mut aug: Vec<Vec<BigRational>> = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            let mut r = row.clone();
            r.push(rhs.clone());
            r
        })
        .collect();
    let pivots = row_reduce(&mut aug);
    if pivots.contains(&cols) || pivots.len() != cols {
        return None;
    }
    Some((0..cols).map(|i| aug[i][cols].clone()).collect())
}

/// Solve `A x = b` for square unimodular `A` with an integral answer.
pub fn solve_integral(a: &[Vec<i64>], b: &[i64]) -> Option<Vec<i64>> {
    let ar: Vec<Vec<BigRational>> = a.iter().map(|r| r.iter().copied().map(int_to_rat).collect()).collect();
    let br: Vec<BigRational> = b.iter().copied().map(int_to_rat).collect();
    solve_unique(&ar, &br)?
        .into_iter()
        .map(|x| {
            if x.is_integer() {
                i64::try_from(x.to_integer()).ok()
            } else {
                None
            }
        })
        .collect()
}

pub fn gcd_all(v: &[i64]) -> i64 {
    v.iter().fold(0i64, |g, &x| num_integer::gcd(g, x)).abs()
}

pub fn transpose(a: &[Vec<i64>], cols: usize) -> IntMatrix {
    (0..cols).map(|j| a.iter().map(|r| r[j]).collect()).collect()
}

pub fn is_unit_rational(x: &BigRational) -> bool {
    x.abs().is_one()
}
