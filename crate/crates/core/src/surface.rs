//! Admissible disk classes on semi-Fano toric surfaces.
//!
//! Independent of the mirror map: `delta_i` is the sum of `q^alpha` over the
//! admissible classes `beta_i + alpha`.

use std::collections::BTreeSet;

use num_rational::BigRational;
use num_traits::One;

use crate::error::{Error, Result};
use crate::fan::{CurveClass, Fan};
use crate::lattice::CurveLattice;
use crate::opengw::{CheckReport, InvariantSeries};
use crate::series::{MultiSeries, TruncationBox};

/// Ray indices in counterclockwise order, starting from ray 0.
pub fn cyclic_order(fan: &Fan) -> Result<Vec<usize>> {
    if fan.dimension() != 2 {
        return Err(Error::NotSurface("cyclic ray order"));
    }
    let half = |v: &[i64]| if v[1] > 0 || (v[1] == 0 && v[0] > 0) { 0 } else { 1 };
    let mut idx: Vec<usize> = (0..fan.num_rays()).collect();
    idx.sort_by(|&a, &b| {
        let (u, v) = (fan.ray(a), fan.ray(b));
        half(u).cmp(&half(v)).then_with(|| {
            let cross = u[0] * v[1] - u[1] * v[0];
            0.cmp(&cross)
        })
    });
    let start = idx.iter().position(|&i| i == 0).unwrap_or(0);
    idx.rotate_left(start);
    Ok(idx)
}

/// A ray's neighbours and self-intersection.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Divisor {
    pub ray: usize,
    pub prev: usize,
    pub next: usize,
    pub self_intersection: i64,
}

impl Divisor {
    /// `D_k` as a curve class: the relation `v_prev + v_next + D_k^2 v_k = 0`.
    pub fn curve_class(&self, m: usize) -> CurveClass {
        let mut d = vec![0i64; m];
        d[self.prev] += 1;
        d[self.next] += 1;
        d[self.ray] += self.self_intersection;
        CurveClass(d)
    }
}

/// Self-intersections from `v_{k-1} + v_{k+1} + D_k^2 v_k = 0`, indexed by ray.
pub fn divisors(fan: &Fan) -> Result<Vec<Divisor>> {
    let order = cyclic_order(fan)?;
    let m = order.len();
    let mut out: Vec<Option<Divisor>> = vec![None; m];
    for pos in 0..m {
        let k = order[pos];
        let prev = order[(pos + m - 1) % m];
        let next = order[(pos + 1) % m];
        let (vp, vn, vk) = (fan.ray(prev), fan.ray(next), fan.ray(k));
        let s = [vp[0] + vn[0], vp[1] + vn[1]];
        let j = if vk[0] != 0 { 0 } else { 1 };
        let c = -s[j] / vk[j];
        if s[0] + c * vk[0] != 0 || s[1] + c * vk[1] != 0 {
            return Err(Error::InvalidFan(format!(
                "rays around {} are not adjacent cones",
                k + 1
            )));
        }
        out[k] = Some(Divisor {
            ray: k,
            prev,
            next,
            self_intersection: c,
        });
    }
    Ok(out.into_iter().map(|d| d.expect("every ray placed")).collect())
}

/// Basic disk ray and the chain of (−2)-divisors through it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AdmissiblePattern {
    pub base: usize,
    /// Chain rays in cyclic order.
    pub chain: Vec<usize>,
    /// Position of `base` in `chain`.
    pub center: usize,
    /// One coefficient per chain ray.
    pub s: Vec<u32>,
}

impl AdmissiblePattern {
    /// Non-increasing away from the center, steps 0 or 1, both ends at most 1.
    pub fn is_admissible(&self) -> bool {
        let s = &self.s;
        if s.len() != self.chain.len() || self.center >= s.len() {
            return false;
        }
        let ok_step = |a: u32, b: u32| a >= b && a - b <= 1;
        (self.center + 1..s.len()).all(|k| ok_step(s[k - 1], s[k]))
            && (0..self.center).all(|k| ok_step(s[k + 1], s[k]))
            && s[0] <= 1
            && s[s.len() - 1] <= 1
    }

    pub fn class(&self, divisors: &[Divisor]) -> CurveClass {
        let m = divisors.len();
        let mut d = vec![0i64; m];
        for (&k, &sk) in self.chain.iter().zip(&self.s) {
            for (x, y) in d.iter_mut().zip(divisors[k].curve_class(m).0) {
                *x += i64::from(sk) * y;
            }
        }
        CurveClass(d)
    }
}

/// The maximal run of consecutive (−2)-divisors containing `i`, or empty.
pub fn chain_through(divisors: &[Divisor], i: usize) -> (Vec<usize>, usize) {
    if divisors[i].self_intersection != -2 {
        return (vec![], 0);
    }
    let m = divisors.len();
    let mut left = vec![];
    let mut k = divisors[i].prev;
    while divisors[k].self_intersection == -2 && k != i && left.len() < m {
        left.push(k);
        k = divisors[k].prev;
    }
    let mut right = vec![];
    let mut k = divisors[i].next;
    while divisors[k].self_intersection == -2 && k != i && !left.contains(&k) && right.len() < m {
        right.push(k);
        k = divisors[k].next;
    }
    left.reverse();
    let center = left.len();
    let mut chain = left;
    chain.push(i);
    chain.extend(right);
    (chain, center)
}

/// All nonzero admissible patterns on the chain through ray `i`.
pub fn admissible_patterns(divisors: &[Divisor], i: usize, max_center: u32) -> Vec<AdmissiblePattern> {
    let (chain, center) = chain_through(divisors, i);
    if chain.is_empty() {
        return vec![];
    }
    let mut out = Vec::new();
    for s0 in 1..=max_center {
        let right = sides(s0, chain.len() - center - 1);
        let left = sides(s0, center);
        for r in &right {
            for l in &left {
                let mut s: Vec<u32> = l.iter().rev().copied().collect();
                s.push(s0);
                s.extend(r);
                let p = AdmissiblePattern {
                    base: i,
                    chain: chain.clone(),
                    center,
                    s,
                };
                if p.is_admissible() {
                    out.push(p);
                }
            }
        }
    }
    out
}

// Sequences of length `len` going away from a center valued `top`.
fn sides(top: u32, len: usize) -> Vec<Vec<u32>> {
    let mut out = vec![vec![]];
    for _ in 0..len {
        out = out
            .into_iter()
            .flat_map(|seq: Vec<u32>| {
                let last = *seq.last().unwrap_or(&top);
                [last, last.saturating_sub(1)]
                    .into_iter()
                    .collect::<BTreeSet<_>>()
                    .into_iter()
                    .map(move |x| {
                        let mut s = seq.clone();
                        s.push(x);
                        s
                    })
            })
            .collect();
    }
    out
}

/// `delta_i` from admissible classes alone.
pub fn surface_admissible_delta(
    fan: &Fan,
    lattice: &CurveLattice,
    i: usize,
    bx: &TruncationBox,
) -> Result<MultiSeries> {
    if fan.dimension() != 2 {
        return Err(Error::NotSurface("the admissibility oracle"));
    }
    let sf = fan.is_semi_fano();
    if !sf.holds {
        let (w, c1) = sf
            .witness
            .map(|w| (w.c1(), w))
            .map(|(c, w)| (w.0, c))
            .unwrap_or_default();
        return Err(Error::NotSemiFano { witness: w, c1 });
    }
    if i >= fan.num_rays() {
        return Err(Error::RayIndex {
            index: i,
            count: fan.num_rays(),
        });
    }
    let divs = divisors(fan)?;
    let bound = fan.num_rays() as u32;
    let mut exps: BTreeSet<Vec<u32>> = BTreeSet::new();
    for p in admissible_patterns(&divs, i, bound) {
        let e = lattice.exponents(&p.class(&divs).0)?;
        if bx.contains(&e) {
            exps.insert(e);
        }
    }
    Ok(MultiSeries::from_terms(
        bx,
        exps.into_iter().map(|e| (e, BigRational::one())),
    ))
}

/// Compare the admissibility oracle with computed `delta_i` for every ray.
pub fn cross_validate_surface(
    fan: &Fan,
    lattice: &CurveLattice,
    deltas: &[InvariantSeries],
    bx: &TruncationBox,
) -> Result<CheckReport> {
    let mut details = Vec::new();
    for d in deltas {
        let oracle = surface_admissible_delta(fan, lattice, d.ray, bx)?;
        if oracle != d.delta {
            details.push(format!("ray {}: oracle {} vs computed {}", d.ray + 1, oracle, d.delta));
        }
    }
    Ok(CheckReport {
        name: "surface oracle".into(),
        passed: details.is_empty(),
        details,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::opengw::Computation;

    #[test]
    fn f2_self_intersections() {
        let f2 = fixtures::f2();
        let d: Vec<i64> = divisors(&f2.fan).unwrap().iter().map(|d| d.self_intersection).collect();
        assert_eq!(d, vec![0, 2, 0, -2]);
    }

    #[test]
    fn a2_chain_fixture() {
        let a2 = fixtures::a2_chain();
        let d: Vec<i64> = divisors(&a2.fan).unwrap().iter().map(|d| d.self_intersection).collect();
        assert_eq!(d, vec![-1, 0, -2, -1, -2, -2, -1]);
        let divs = divisors(&a2.fan).unwrap();
        assert_eq!(chain_through(&divs, 4), (vec![4, 5], 0));
        assert_eq!(chain_through(&divs, 5), (vec![4, 5], 1));
        assert_eq!(chain_through(&divs, 0).0, Vec::<usize>::new());
    }

    #[test]
    fn pattern_rules() {
        let p = |s: Vec<u32>, center| AdmissiblePattern {
            base: 0,
            chain: vec![0; s.len()],
            center,
            s,
        };
        assert!(p(vec![1, 2, 1], 1).is_admissible());
        assert!(!p(vec![2, 2, 1], 1).is_admissible());
        assert!(!p(vec![0, 2, 1], 1).is_admissible());
        assert!(p(vec![1, 1, 0], 0).is_admissible());
        assert!(!p(vec![1, 2], 0).is_admissible());
    }

    #[test]
    fn f2_oracle() {
        let f2 = fixtures::f2();
        let lat = CurveLattice::new(&f2.fan, f2.basis.clone()).unwrap();
        let bx = TruncationBox::new(vec![5, 5]);
        assert_eq!(
            surface_admissible_delta(&f2.fan, &lat, 3, &bx).unwrap(),
            MultiSeries::var(&bx, 0)
        );
        for i in 0..3 {
            assert!(surface_admissible_delta(&f2.fan, &lat, i, &bx).unwrap().is_zero());
        }
        let c = Computation::new(&f2.fan, lat.clone(), &bx).unwrap();
        assert!(cross_validate_surface(&f2.fan, &lat, &c.deltas, &bx).unwrap().passed);
    }

    #[test]
    fn other_surfaces_agree() {
        for data in [
            fixtures::f2_blowup(),
            fixtures::a2_chain(),
            fixtures::p2(),
            fixtures::p1xp1(),
        ] {
            let lat = CurveLattice::new(&data.fan, data.basis.clone()).unwrap();
            let bx = TruncationBox::uniform(lat.rank(), 5);
            let c = Computation::new(&data.fan, lat.clone(), &bx).unwrap();
            let report = cross_validate_surface(&data.fan, &lat, &c.deltas, &bx).unwrap();
            assert!(report.passed, "{}: {report}", data.name());
        }
    }

    #[test]
    fn rejects_bad_input() {
        let f3 = fixtures::f3();
        let lat = CurveLattice::new(&f3.fan, None).unwrap();
        let bx = TruncationBox::uniform(2, 2);
        assert!(matches!(
            surface_admissible_delta(&f3.fan, &lat, 0, &bx),
            Err(Error::NotSemiFano { c1: -1, .. })
        ));
        let p3 = fixtures::p1xp1xp1();
        let lat = CurveLattice::new(&p3.fan, None).unwrap();
        assert!(matches!(
            surface_admissible_delta(&p3.fan, &lat, 0, &TruncationBox::uniform(3, 1)),
            Err(Error::NotSurface(_))
        ));
    }
}
