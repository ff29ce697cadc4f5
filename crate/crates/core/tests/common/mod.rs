#![allow(dead_code, clippy::needless_range_loop)]

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::seq::SliceRandom;
use rand::Rng;

use toric_opengw::fan::Fan;
use toric_opengw::lattice::CurveLattice;
use toric_opengw::series::TruncationBox;

pub fn fact(n: i64) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

fn signed_ratio(n: i64, den: BigInt) -> BigRational {
    let num = if n % 2 == 0 { fact(n) } else { -fact(n) };
    BigRational::new(num, den)
}

/// Coefficient of `x^k1 y^k2` in the closed form `f`.
pub fn f_coef(k1: i64, k2: i64) -> BigRational {
    if (k1, k2) == (0, 0) || k2 < 0 || k1 < 2 * k2 {
        return BigRational::zero();
    }
    signed_ratio(3 * k1 - k2 - 1, fact(k1) * fact(k1) * fact(k2) * fact(k1 - 2 * k2))
}

/// Coefficient of `x^k1 y^k2` in the closed form `g`.
pub fn g_coef(k1: i64, k2: i64) -> BigRational {
    if (k1, k2) == (0, 0) || k1 < 0 || k2 < 3 * k1 {
        return BigRational::zero();
    }
    signed_ratio(2 * k2 - k1 - 1, fact(k1) * fact(k1) * fact(k2) * fact(k2 - 3 * k1))
}

/// Coefficient of `x^k` in the closed form `h`.
pub fn h_coef(k: i64) -> BigRational {
    if k <= 0 {
        return BigRational::zero();
    }
    signed_ratio(2 * k - 1, fact(k) * fact(k))
}

/// Dense bivariate series truncated to `0..=n` in each variable.
#[derive(Clone, PartialEq, Debug)]
pub struct Dense {
    pub n: usize,
    pub c: Vec<Vec<BigRational>>,
}

impl Dense {
    pub fn zero(n: usize) -> Self {
        Dense {
            n,
            c: vec![vec![BigRational::zero(); n + 1]; n + 1],
        }
    }

    pub fn from_fn(n: usize, f: impl Fn(i64, i64) -> BigRational) -> Self {
        let mut d = Dense::zero(n);
        for i in 0..=n {
            for j in 0..=n {
                d.c[i][j] = f(i as i64, j as i64);
            }
        }
        d
    }

    pub fn one(n: usize) -> Self {
        let mut d = Dense::zero(n);
        d.c[0][0] = BigRational::one();
        d
    }

    pub fn var(n: usize, a: usize) -> Self {
        let mut d = Dense::zero(n);
        if a == 0 {
            d.c[1][0] = BigRational::one();
        } else {
            d.c[0][1] = BigRational::one();
        }
        d
    }

    pub fn add(&self, o: &Dense) -> Dense {
        let mut d = self.clone();
        for i in 0..=self.n {
            for j in 0..=self.n {
                d.c[i][j] += &o.c[i][j];
            }
        }
        d
    }

    pub fn scale(&self, k: i64) -> Dense {
        let k = BigRational::from_integer(k.into());
        let mut d = self.clone();
        d.c.iter_mut().flatten().for_each(|x| *x *= &k);
        d
    }

    pub fn mul(&self, o: &Dense) -> Dense {
        let n = self.n;
        let mut d = Dense::zero(n);
        for i in 0..=n {
            for j in 0..=n {
                if self.c[i][j].is_zero() {
                    continue;
                }
                for k in 0..=n - i {
                    for l in 0..=n - j {
                        if !o.c[k][l].is_zero() {
                            d.c[i + k][j + l] += &self.c[i][j] * &o.c[k][l];
                        }
                    }
                }
            }
        }
        d
    }

    /// `exp` of a series without constant term, as a finite Taylor sum.
    pub fn exp(&self) -> Dense {
        assert!(self.c[0][0].is_zero());
        let mut out = Dense::one(self.n);
        let mut term = Dense::one(self.n);
        for k in 1..=2 * self.n {
            term = term.mul(self);
            let inv = BigRational::new(BigInt::one(), BigInt::from(k));
            term.c.iter_mut().flatten().for_each(|x| *x *= &inv);
            out = out.add(&term);
        }
        out
    }

    /// `self(x1, x2)` for series `x1`, `x2` without constant terms.
    pub fn compose(&self, x1: &Dense, x2: &Dense) -> Dense {
        let n = self.n;
        let mut p1 = vec![Dense::one(n)];
        let mut p2 = vec![Dense::one(n)];
        for k in 0..n {
            p1.push(p1[k].mul(x1));
            p2.push(p2[k].mul(x2));
        }
        let mut out = Dense::zero(n);
        for i in 0..=n {
            for j in 0..=n {
                if self.c[i][j].is_zero() {
                    continue;
                }
                let mut t = p1[i].mul(&p2[j]);
                t.c.iter_mut().flatten().for_each(|x| *x *= &self.c[i][j]);
                out = out.add(&t);
            }
        }
        out
    }
}

/// `1 + delta_1` and `1 + delta_2` for the threefold, straight from `f`, `g`
/// and the displayed mirror map, on `0..=n` in `q1`, `q2`.
pub fn threefold_tables(n: usize) -> (Dense, Dense) {
    let f = Dense::from_fn(n, f_coef);
    let g = Dense::from_fn(n, g_coef);
    let u1 = f.scale(-3).add(&g);
    let u2 = f.add(&g.scale(-2));
    let (mut w1, mut w2) = (Dense::zero(n), Dense::zero(n));
    for _ in 0..2 * n + 2 {
        let x1 = Dense::var(n, 0).mul(&w1.exp());
        let x2 = Dense::var(n, 1).mul(&w2.exp());
        let n1 = u1.compose(&x1, &x2).scale(-1);
        let n2 = u2.compose(&x1, &x2).scale(-1);
        if n1 == w1 && n2 == w2 {
            break;
        }
        w1 = n1;
        w2 = n2;
    }
    let x1 = Dense::var(n, 0).mul(&w1.exp());
    let x2 = Dense::var(n, 1).mul(&w2.exp());
    (f.compose(&x1, &x2).scale(-1).exp(), g.compose(&x1, &x2).scale(-1).exp())
}

/// Exponents of `g0^(i)` by scanning the whole box.
pub fn brute_force_g0(lattice: &CurveLattice, i: usize, bx: &TruncationBox) -> BTreeSet<Vec<u32>> {
    bx.exponents()
        .into_iter()
        .filter(|e| {
            let coords: Vec<i64> = e.iter().map(|&x| i64::from(x)).collect();
            let d = lattice.class_from_coordinates(&coords).0;
            d.iter().sum::<i64>() == 0 && d[i] < 0 && d.iter().enumerate().all(|(j, &x)| j == i || x >= 0)
        })
        .collect()
}

/// Rank over Q by fraction-free elimination.
pub fn rank(rows: &[Vec<i64>]) -> usize {
    let mut m: Vec<Vec<BigInt>> = rows
        .iter()
        .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
        .collect();
    let cols = m.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..m.len()).find(|&k| !m[k][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        for k in 0..m.len() {
            if k != r && !m[k][c].is_zero() {
                let (a, b) = (m[r][c].clone(), m[k][c].clone());
                for j in 0..cols {
                    m[k][j] = &m[k][j] * &a - &m[r][j] * &b;
                }
            }
        }
        r += 1;
    }
    r
}

/// A random unimodular 2x2 matrix.
pub fn random_gl2(rng: &mut impl Rng) -> [[i64; 2]; 2] {
    let mut m = [[1, 0], [0, 1]];
    for _ in 0..rng.gen_range(0..5) {
        let k = rng.gen_range(-2..=2);
        let (s, t) = if rng.gen_bool(0.5) { (0, 1) } else { (1, 0) };
        for row in m.iter_mut() {
            row[s] += k * row[t];
        }
    }
    if rng.gen_bool(0.5) {
        for row in m.iter_mut() {
            row.swap(0, 1);
        }
    }
    m
}

/// A random semi-Fano surface of Picard rank at most 2: `P2` or `F_a`, `a <= 2`,
/// in random coordinates with shuffled rays.
pub fn random_small_surface(rng: &mut impl Rng) -> Fan {
    let rays: Vec<[i64; 2]> = match rng.gen_range(0..4) {
        0 => vec![[1, 0], [0, 1], [-1, -1]],
        a => vec![[1, 0], [0, 1], [-1, a as i64 - 1], [0, -1]],
    };
    let m = random_gl2(rng);
    let rays: Vec<Vec<i64>> = rays
        .iter()
        .map(|v| (0..2).map(|r| m[r][0] * v[0] + m[r][1] * v[1]).collect())
        .collect();
    let k = rays.len();
    let cones: Vec<Vec<usize>> = (0..k).map(|i| vec![i, (i + 1) % k]).collect();
    let fan = Fan::new(2, rays, cones);
    let mut perm: Vec<usize> = (0..k).collect();
    perm.shuffle(rng);
    fan.permuted(&perm)
}
