//! Hypergeometric correction series `g0^(i)` and the toric mirror map built from them.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::fan::{CurveClass, Fan};
use crate::lattice::CurveLattice;
use crate::linalg;
use crate::series::{grlex, DiagonalUnitMap, MultiSeries, TruncationBox};

/// A class contributing to `g0^(i)` with its basis exponents.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct G0Class {
    pub class: CurveClass,
    pub exponent: Vec<u32>,
}

/// `B = sum_a max(0, -a_ia) E_a`: no class with `-d_i > B` lands in the box.
pub fn enumeration_bound(lattice: &CurveLattice, i: usize, bx: &TruncationBox) -> i64 {
    lattice
        .divisor_row(i)
        .iter()
        .zip(bx.caps())
        .map(|(&a, &e)| (-a).max(0) * i64::from(e))
        .sum()
}

// Visit every weak composition of a total <= `max` into `parts` parts.
fn for_each_composition(parts: usize, max: i64, f: &mut impl FnMut(&[i64]) -> Result<()>) -> Result<()> {
    fn rec(buf: &mut Vec<i64>, parts: usize, left: i64, f: &mut impl FnMut(&[i64]) -> Result<()>) -> Result<()> {
        if buf.len() == parts {
            return f(buf);
        }
        for k in 0..=left {
            buf.push(k);
            rec(buf, parts, left - k, f)?;
            buf.pop();
        }
        Ok(())
    }
    rec(&mut Vec::with_capacity(parts), parts, max, f)
}

/// All kernel points `d` with `sum d = 0`, `d_i < 0`, `d_j >= 0` otherwise,
/// whose exponents lie in the box. Sorted by exponent in graded-lex order.
pub fn enumerate_g0_classes(fan: &Fan, lattice: &CurveLattice, i: usize, bx: &TruncationBox) -> Result<Vec<G0Class>> {
    let m = fan.num_rays();
    if i >= m {
        return Err(Error::RayIndex { index: i, count: m });
    }
    if bx.arity() != lattice.rank() {
        return Err(Error::Arity {
            left: lattice.rank(),
            right: bx.arity(),
        });
    }
    lattice.require_nef()?;
    let bound = enumeration_bound(lattice, i, bx);
    if bound <= 0 {
        return Ok(vec![]);
    }
    let n = fan.dimension();
    let sigma = fan
        .cones()
        .iter()
        .find(|c| !c.contains(&i))
        .ok_or_else(|| Error::InvalidFan(format!("every cone contains ray {}", i + 1)))?
        .clone();
    let free: Vec<usize> = (0..m).filter(|j| *j != i && !sigma.contains(j)).collect();
    // columns v_s for s in sigma; unimodular
    let cone_matrix: Vec<Vec<i64>> = (0..n).map(|r| sigma.iter().map(|&s| fan.ray(s)[r]).collect()).collect();
    let vi = fan.ray(i).to_vec();

    let mut found = Vec::new();
    for b in 1..=bound {
        for_each_composition(free.len(), b, &mut |parts| {
            let free_sum: i64 = parts.iter().sum();
            let mut rhs: Vec<i64> = vi.iter().map(|x| b * x).collect();
            for (&j, &dj) in free.iter().zip(parts) {
                for (r, x) in rhs.iter_mut().zip(fan.ray(j)) {
                    *r -= dj * x;
                }
            }
            let Some(cone_part) = linalg::solve_integral(&cone_matrix, &rhs) else {
                return Ok(());
            };
            if cone_part.iter().any(|&x| x < 0) || free_sum + cone_part.iter().sum::<i64>() != b {
                return Ok(());
            }
            let mut d = vec![0i64; m];
            d[i] = -b;
            for (&j, &dj) in free.iter().zip(parts) {
                d[j] = dj;
            }
            for (&s, &ds) in sigma.iter().zip(&cone_part) {
                d[s] = ds;
            }
            let exponent = lattice.exponents(&d)?;
            if bx.contains(&exponent) {
                found.push(G0Class {
                    class: CurveClass(d),
                    exponent,
                });
            }
            Ok(())
        })?;
    }
    found.sort_by(|a, b| grlex(&a.exponent, &b.exponent).then_with(|| a.class.cmp(&b.class)));
    Ok(found)
}

fn factorials(n: usize) -> Vec<BigInt> {
    let mut f = vec![BigInt::one()];
    for k in 1..=n {
        let next = &f[k - 1] * BigInt::from(k);
        f.push(next);
    }
    f
}

/// `(-1)^{d_i} (-d_i - 1)! / prod_{j != i} d_j!`.
pub fn g0_coefficient(d: &[i64], i: usize, fact: &[BigInt]) -> BigRational {
    let b = (-d[i]) as usize;
    let mut den = BigInt::one();
    for (j, &dj) in d.iter().enumerate() {
        if j != i {
            den *= &fact[dj as usize];
        }
    }
    let num = if b.is_multiple_of(2) {
        fact[b - 1].clone()
    } else {
        -fact[b - 1].clone()
    };
    BigRational::new(num, den)
}

/// `g0^(i)` in the variables `q̂`.
pub fn g0_series(fan: &Fan, lattice: &CurveLattice, i: usize, bx: &TruncationBox) -> Result<MultiSeries> {
    let classes = enumerate_g0_classes(fan, lattice, i, bx)?;
    let top = classes
        .iter()
        .flat_map(|c| c.class.0.iter().map(|x| x.unsigned_abs() as usize))
        .max();
    let fact = factorials(top.unwrap_or(0));
    Ok(MultiSeries::from_terms(
        bx,
        classes.into_iter().map(|c| {
            let coeff = g0_coefficient(&c.class.0, i, &fact);
            (c.exponent, coeff)
        }),
    ))
}

/// `g0^(1..m)` for one fan, lattice and box.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GZeroFamily {
    bx: TruncationBox,
    series: Vec<MultiSeries>,
}

impl GZeroFamily {
    /// Computes each ray's series in parallel.
    pub fn compute(fan: &Fan, lattice: &CurveLattice, bx: &TruncationBox) -> Result<Self> {
        let series = (0..fan.num_rays())
            .into_par_iter()
            .map(|i| g0_series(fan, lattice, i, bx))
            .collect::<Result<Vec<_>>>()?;
        Ok(GZeroFamily { bx: bx.clone(), series })
    }

    pub fn truncation(&self) -> &TruncationBox {
        &self.bx
    }

    pub fn series(&self) -> &[MultiSeries] {
        &self.series
    }

    pub fn get(&self, i: usize) -> &MultiSeries {
        &self.series[i]
    }

    /// Rays with a nonzero series.
    pub fn support(&self) -> Vec<usize> {
        (0..self.series.len()).filter(|&i| !self.series[i].is_zero()).collect()
    }
}

/// Both directions of the mirror map, each `x_a -> x_a exp(u_a)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MirrorMapPair {
    /// `q_a = q̂_a exp(u_a(q̂))`.
    pub q_of_qhat: DiagonalUnitMap,
    /// `q̂_a = q_a exp(w_a(q))`.
    pub qhat_of_q: DiagonalUnitMap,
}

impl MirrorMapPair {
    /// `u_a = -sum_i a_ia g0^(i)`, then invert.
    pub fn assemble(g0: &GZeroFamily, lattice: &CurveLattice) -> Result<Self> {
        let bx = &g0.bx;
        let u = (0..lattice.rank())
            .map(|a| {
                let mut s = MultiSeries::zero(bx);
                for (i, gi) in g0.series.iter().enumerate() {
                    let coef = lattice.pairing(i, a);
                    if coef != 0 && !gi.is_zero() {
                        s = s.sub(&gi.scale(&linalg::int_to_rat(coef)))?;
                    }
                }
                Ok(s)
            })
            .collect::<Result<Vec<_>>>()?;
        let q_of_qhat = DiagonalUnitMap::new(bx, u)?;
        let qhat_of_q = q_of_qhat.invert()?;
        Ok(MirrorMapPair { q_of_qhat, qhat_of_q })
    }

    /// True if both compositions are the identity.
    pub fn round_trip_holds(&self) -> Result<bool> {
        Ok(
            self.q_of_qhat.after(&self.qhat_of_q)?.is_identity()
                && self.qhat_of_q.after(&self.q_of_qhat)?.is_identity(),
        )
    }
}

/// Each `g0^(i)(q̂(q))`.
pub fn pullback_g0(g0: &GZeroFamily, mm: &MirrorMapPair) -> Result<Vec<MultiSeries>> {
    g0.series.par_iter().map(|s| s.substitute(&mm.qhat_of_q)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use num_traits::Zero;

    fn r(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    fn setup(data: &crate::input::ToricData) -> CurveLattice {
        CurveLattice::new(&data.fan, data.basis.clone()).unwrap()
    }

    #[test]
    fn f2_classes() {
        let f2 = fixtures::f2();
        let lat = setup(&f2);
        let bx = TruncationBox::new(vec![3, 3]);
        let got = enumerate_g0_classes(&f2.fan, &lat, 3, &bx).unwrap();
        let want: Vec<G0Class> = (1..=3)
            .map(|k| G0Class {
                class: CurveClass(vec![k, 0, k, -2 * k]),
                exponent: vec![k as u32, 0],
            })
            .collect();
        assert_eq!(got, want);
        assert!(enumerate_g0_classes(&f2.fan, &lat, 0, &bx).unwrap().is_empty());
    }

    #[test]
    fn f2_g0_is_minus_h() {
        let f2 = fixtures::f2();
        let lat = setup(&f2);
        let bx = TruncationBox::new(vec![4, 2]);
        let g = g0_series(&f2.fan, &lat, 3, &bx).unwrap();
        assert_eq!(g.coeff(&[1, 0]), r(1, 1));
        assert_eq!(g.coeff(&[2, 0]), r(3, 2));
        assert_eq!(g.coeff(&[3, 0]), r(10, 3));
        assert_eq!(g.coeff(&[4, 0]), r(35, 4));
        assert_eq!(g.len(), 4);
    }

    #[test]
    fn fano_is_trivial() {
        for data in [fixtures::p2(), fixtures::p1xp1()] {
            let lat = setup(&data);
            let bx = TruncationBox::uniform(lat.rank(), 4);
            let fam = GZeroFamily::compute(&data.fan, &lat, &bx).unwrap();
            assert!(fam.support().is_empty());
            let mm = MirrorMapPair::assemble(&fam, &lat).unwrap();
            assert!(mm.q_of_qhat.is_identity() && mm.qhat_of_q.is_identity());
        }
    }

    #[test]
    fn f2_mirror_map() {
        let f2 = fixtures::f2();
        let lat = setup(&f2);
        let bx = TruncationBox::new(vec![5, 5]);
        let fam = GZeroFamily::compute(&f2.fan, &lat, &bx).unwrap();
        let mm = MirrorMapPair::assemble(&fam, &lat).unwrap();
        let h = fam.get(3).neg();
        assert_eq!(mm.q_of_qhat.exponents()[0], h.scale(&r(-2, 1)));
        assert_eq!(mm.q_of_qhat.exponents()[1], h);
        assert!(mm.round_trip_holds().unwrap());
        // g0^(4)(q̂(q)) = log(1 + q1)
        let pulled = pullback_g0(&fam, &mm).unwrap();
        let one_plus_q1 = MultiSeries::one(&bx).add(&MultiSeries::var(&bx, 0)).unwrap();
        assert_eq!(pulled[3], one_plus_q1.log().unwrap());
        assert!(pulled[0].is_zero() && pulled[1].is_zero() && pulled[2].is_zero());
    }

    #[test]
    fn kp2_blowup_g0_first_coefficients() {
        let data = fixtures::kp2_blowup();
        let lat = setup(&data);
        let bx = TruncationBox::new(vec![2, 2, 1, 2]);
        let fam = GZeroFamily::compute(&data.fan, &lat, &bx).unwrap();
        assert_eq!(fam.support(), vec![0, 1, 3]);
        assert_eq!(fam.get(0).coeff(&[1, 0, 0, 0]), r(-2, 1));
        assert!(fam.get(0).terms().all(|(e, _)| e[2] == 0 && e[3] == 0));
        assert!(fam.get(3).terms().all(|(e, _)| e[0] == 0 && e[1] == 0 && e[2] == 0));
        assert!(!fam.get(1).coeff(&[0, 1, 0, 0]).is_zero());
    }
}
