//! Smooth complete fans and their curve-class combinatorics.
//!
//! Rays and cones are 0-based internally. Anything user facing (reports,
//! `Display` impls, the JSON schema) is 1-based, matching how toric data is
//! usually written down.

use std::collections::BTreeMap;
use std::fmt;

use num_rational::BigRational;
use num_traits::Signed;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, int_to_rat};

/// A class `d` in the kernel of `Z^m -> Z^n`. Entry `i` is the pairing `<D_i, d>`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct CurveClass(pub Vec<i64>);

impl CurveClass {
    pub fn zero(m: usize) -> Self {
        CurveClass(vec![0; m])
    }

    /// Pairing with the divisor of ray `i`.
    pub fn pairing(&self, i: usize) -> i64 {
        self.0[i]
    }

    /// Anticanonical degree `-K_X . d = sum_i <D_i, d>`.
    pub fn c1(&self) -> i64 {
        self.0.iter().sum()
    }

    pub fn as_slice(&self) -> &[i64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&x| x == 0)
    }

    pub fn scaled(&self, k: i64) -> Self {
        CurveClass(self.0.iter().map(|x| x * k).collect())
    }
}

impl fmt::Display for CurveClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, ")")
    }
}

/// Ray generators plus maximal cones of a (claimed) smooth complete fan.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Fan {
    dimension: usize,
    rays: Vec<Vec<i64>>,
    cones: Vec<Vec<usize>>,
}

/// One broken fan invariant.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    RayDimension { ray: usize, len: usize },
    ZeroRay { ray: usize },
    NonPrimitive { ray: usize, gcd: i64 },
    DuplicateRay { first: usize, second: usize },
    ConeSize { cone: usize, size: usize },
    ConeIndex { cone: usize, ray: usize },
    RepeatedRayInCone { cone: usize },
    NonSmooth { cone: Vec<usize>, det: i64 },
    WallMultiplicity { wall: Vec<usize>, count: usize },
    OverlappingCones { wall: Vec<usize>, cones: (usize, usize) },
    UnusedRay { ray: usize },
    NoCones,
}

fn one_based(ix: &[usize]) -> String {
    let parts: Vec<String> = ix.iter().map(|i| (i + 1).to_string()).collect();
    format!("{{{}}}", parts.join(","))
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::RayDimension { ray, len } => {
                write!(f, "ray {} has {len} entries", ray + 1)
            }
            Violation::ZeroRay { ray } => write!(f, "ray {} is zero", ray + 1),
            Violation::NonPrimitive { ray, gcd } => {
                write!(f, "ray {} is not primitive (gcd {gcd})", ray + 1)
            }
            Violation::DuplicateRay { first, second } => {
                write!(f, "rays {} and {} coincide", first + 1, second + 1)
            }
            Violation::ConeSize { cone, size } => {
                write!(f, "cone {} has {size} rays", cone + 1)
            }
            Violation::ConeIndex { cone, ray } => {
                write!(f, "cone {} references missing ray {}", cone + 1, ray + 1)
            }
            Violation::RepeatedRayInCone { cone } => {
                write!(f, "cone {} repeats a ray", cone + 1)
            }
            Violation::NonSmooth { cone, det } => {
                write!(f, "cone {} determinant {det}, non-smooth", one_based(cone))
            }
            Violation::WallMultiplicity { wall, count } => {
                let noun = if *count == 1 { "cone" } else { "cones" };
                write!(f, "wall {} shared by {count} {noun}", one_based(wall))
            }
            Violation::OverlappingCones { wall, cones } => write!(
                f,
                "cones {} and {} lie on the same side of wall {}",
                cones.0 + 1,
                cones.1 + 1,
                one_based(wall)
            ),
            Violation::UnusedRay { ray } => {
                write!(f, "ray {} lies in no maximal cone", ray + 1)
            }
            Violation::NoCones => write!(f, "fan has no maximal cones"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_ok() {
            return write!(f, "ok");
        }
        for (i, v) in self.violations.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

/// Result of the anticanonical positivity test on wall curves.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SemiFano {
    pub holds: bool,
    /// Wall class with the most negative `c1` when `holds` is false.
    pub witness: Option<CurveClass>,
}

/// A wall `tau` shared by two maximal cones, with the two rays opposite it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Wall {
    pub rays: Vec<usize>,
    pub cones: (usize, usize),
    pub opposite: (usize, usize),
}

impl Fan {
    /// Build a fan from 0-based cone indices. No invariants are checked here;
    /// see [`Fan::validate`] and [`Fan::checked`].
    pub fn new(dimension: usize, rays: Vec<Vec<i64>>, cones: Vec<Vec<usize>>) -> Self {
        let cones = cones
            .into_iter()
            .map(|mut c| {
                c.sort_unstable();
                c
            })
            .collect();
        Fan { dimension, rays, cones }
    }

    /// Build and validate; any violation becomes [`Error::InvalidFan`].
    pub fn checked(dimension: usize, rays: Vec<Vec<i64>>, cones: Vec<Vec<usize>>) -> Result<Self> {
        let fan = Fan::new(dimension, rays, cones);
        let report = fan.validate();
        if report.is_ok() {
            Ok(fan)
        } else {
            Err(Error::InvalidFan(report.to_string().replace('\n', "; ")))
        }
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn rays(&self) -> &[Vec<i64>] {
        &self.rays
    }

    pub fn ray(&self, i: usize) -> &[i64] {
        &self.rays[i]
    }

    pub fn num_rays(&self) -> usize {
        self.rays.len()
    }

    pub fn cones(&self) -> &[Vec<usize>] {
        &self.cones
    }

    pub fn cone(&self, sigma: usize) -> Result<&[usize]> {
        self.cones.get(sigma).map(Vec::as_slice).ok_or(Error::ConeIndex {
            index: sigma,
            count: self.cones.len(),
        })
    }

    /// Index of the maximal cone whose ray set equals `rays` (any order).
    pub fn find_cone(&self, rays: &[usize]) -> Option<usize> {
        let mut want = rays.to_vec();
        want.sort_unstable();
        self.cones.iter().position(|c| *c == want)
    }

    /// Expected rank `m - n` of the curve lattice.
    pub fn picard_rank(&self) -> usize {
        self.rays.len().saturating_sub(self.dimension)
    }

    /// `sum_i d_i v_i`.
    pub fn boundary(&self, d: &[i64]) -> Vec<i64> {
        let mut out = vec![0i64; self.dimension];
        for (di, v) in d.iter().zip(&self.rays) {
            for (o, x) in out.iter_mut().zip(v) {
                *o += di * x;
            }
        }
        out
    }

    pub fn in_kernel(&self, d: &[i64]) -> bool {
        d.len() == self.rays.len() && self.boundary(d).iter().all(|&x| x == 0)
    }

    /// Check every fan invariant and collect the violations.
    pub fn validate(&self) -> ValidationReport {
        let n = self.dimension;
        let m = self.rays.len();
        let mut violations = Vec::new();

        for (i, v) in self.rays.iter().enumerate() {
            if v.len() != n {
                violations.push(Violation::RayDimension { ray: i, len: v.len() });
                continue;
            }
            match linalg::gcd_all(v) {
                0 => violations.push(Violation::ZeroRay { ray: i }),
                1 => {}
                g => violations.push(Violation::NonPrimitive { ray: i, gcd: g }),
            }
        }
        for i in 0..m {
            for j in i + 1..m {
                if self.rays[i] == self.rays[j] {
                    violations.push(Violation::DuplicateRay { first: i, second: j });
                }
            }
        }
        if !violations.is_empty() {
            return ValidationReport { violations };
        }
        if self.cones.is_empty() {
            violations.push(Violation::NoCones);
            return ValidationReport { violations };
        }

        let mut shape_ok = true;
        for (c, cone) in self.cones.iter().enumerate() {
            if cone.len() != n {
                violations.push(Violation::ConeSize {
                    cone: c,
                    size: cone.len(),
                });
                shape_ok = false;
            }
            if let Some(&r) = cone.iter().find(|&&r| r >= m) {
                violations.push(Violation::ConeIndex { cone: c, ray: r });
                shape_ok = false;
            }
            if cone.windows(2).any(|w| w[0] == w[1]) {
                violations.push(Violation::RepeatedRayInCone { cone: c });
                shape_ok = false;
            }
        }
        if !shape_ok {
            return ValidationReport { violations };
        }

        for cone in &self.cones {
            let d = linalg::det(&self.cone_matrix(cone));
            if d.abs() != 1 {
                violations.push(Violation::NonSmooth {
                    cone: cone.clone(),
                    det: d,
                });
            }
        }
        for i in 0..m {
            if !self.cones.iter().any(|c| c.contains(&i)) {
                violations.push(Violation::UnusedRay { ray: i });
            }
        }

        for (wall, members) in self.wall_map() {
            if members.len() != 2 {
                violations.push(Violation::WallMultiplicity {
                    wall,
                    count: members.len(),
                });
                continue;
            }
            let (c0, a) = members[0];
            let (c1, b) = members[1];
            // b expressed in the basis of cone c0 must have coefficient -1 on a
            // for the two cones to sit on opposite sides of a unimodular wall
            if let Some(coords) = self.coordinates_in(&self.cones[c0], b) {
                let pos = self.cones[c0].iter().position(|&r| r == a).unwrap();
                if coords[pos] >= 0 {
                    violations.push(Violation::OverlappingCones { wall, cones: (c0, c1) });
                }
            }
        }
        ValidationReport { violations }
    }

    fn cone_matrix(&self, cone: &[usize]) -> Vec<Vec<i64>> {
        // columns are the cone's rays
        (0..self.dimension)
            .map(|row| cone.iter().map(|&r| self.rays[r][row]).collect())
            .collect()
    }

    /// Integer coordinates of ray `k` in the basis given by `cone`.
    fn coordinates_in(&self, cone: &[usize], k: usize) -> Option<Vec<i64>> {
        linalg::solve_integral(&self.cone_matrix(cone), &self.rays[k])
    }

    /// `(n-1)`-faces of maximal cones -> list of (cone, opposite ray).
    fn wall_map(&self) -> BTreeMap<Vec<usize>, Vec<(usize, usize)>> {
        let mut walls: BTreeMap<Vec<usize>, Vec<(usize, usize)>> = BTreeMap::new();
        for (c, cone) in self.cones.iter().enumerate() {
            for skip in 0..cone.len() {
                let wall: Vec<usize> = cone
                    .iter()
                    .enumerate()
                    .filter(|&(i, _)| i != skip)
                    .map(|(_, &r)| r)
                    .collect();
                walls.entry(wall).or_default().push((c, cone[skip]));
            }
        }
        walls
    }

    /// All walls shared by exactly two maximal cones, in sorted wall order.
    pub fn walls(&self) -> Vec<Wall> {
        self.wall_map()
            .into_iter()
            .filter(|(_, members)| members.len() == 2)
            .map(|(rays, members)| Wall {
                rays,
                cones: (members[0].0, members[1].0),
                opposite: (members[0].1, members[1].1),
            })
            .collect()
    }

    /// The coefficients `v_k^j` with `v_k = sum_j v_k^j v_{sigma(j)}`.
    pub fn cone_coordinates(&self, sigma: usize, k: usize) -> Result<Vec<i64>> {
        let cone = self.cone(sigma)?;
        if k >= self.rays.len() {
            return Err(Error::RayIndex {
                index: k,
                count: self.rays.len(),
            });
        }
        self.coordinates_in(cone, k)
            .ok_or_else(|| Error::InvalidFan(format!("cone {} is not unimodular", one_based(cone))))
    }

    /// `alpha_k = e_k - sum_j v_k^j e_{sigma(j)}` for a ray `k` outside `sigma`.
    pub fn alpha_class(&self, sigma: usize, k: usize) -> Result<CurveClass> {
        let cone = self.cone(sigma)?.to_vec();
        if cone.contains(&k) {
            return Err(Error::RayInCone { ray: k, cone });
        }
        let coords = self.cone_coordinates(sigma, k)?;
        let mut d = vec![0i64; self.rays.len()];
        d[k] = 1;
        for (j, &r) in cone.iter().enumerate() {
            d[r] -= coords[j];
        }
        if !self.in_kernel(&d) {
            let image = self.boundary(&d);
            return Err(Error::NotInKernel { class: d, image });
        }
        Ok(CurveClass(d))
    }

    /// One primitive relation per wall, with the two opposite rays at +1.
    pub fn wall_curve_classes(&self) -> Vec<CurveClass> {
        self.walls()
            .into_iter()
            .filter_map(|w| self.wall_relation(&w))
            .collect()
    }

    /// Wall classes with duplicates removed, in sorted order.
    pub fn distinct_wall_classes(&self) -> Vec<CurveClass> {
        let mut classes = self.wall_curve_classes();
        classes.sort();
        classes.dedup();
        classes
    }

    fn wall_relation(&self, wall: &Wall) -> Option<CurveClass> {
        let (c0, _) = wall.cones;
        let (a, b) = wall.opposite;
        let cone = &self.cones[c0];
        let coords = self.coordinates_in(cone, b)?;
        // v_b = -v_a + sum_{tau} x_j v_j  =>  v_a + v_b - sum x_j v_j = 0
        let mut d = vec![0i64; self.rays.len()];
        d[a] += 1;
        d[b] += 1;
        for (j, &r) in cone.iter().enumerate() {
            if r != a {
                d[r] -= coords[j];
            } else {
                debug_assert_eq!(coords[j], -1);
            }
        }
        debug_assert!(self.in_kernel(&d));
        Some(CurveClass(d))
    }

    /// `c1 . C >= 0` on every wall curve.
    pub fn is_semi_fano(&self) -> SemiFano {
        let witness = self
            .wall_curve_classes()
            .into_iter()
            .filter(|d| d.c1() < 0)
            .min_by_key(|d| (d.c1(), d.clone()));
        SemiFano {
            holds: witness.is_none(),
            witness,
        }
    }

    /// Indices of rays that are vertices of `conv{v_1, ..., v_m}`.
    ///
    /// A ray is a non-vertex iff it is a convex combination of at most `n+1`
    /// affinely independent other rays, so it suffices to scan those subsets
    /// with exact rational solves.
    pub fn fan_polytope_vertices(&self) -> Vec<usize> {
        (0..self.rays.len()).filter(|&i| !self.in_hull_of_others(i)).collect()
    }

    fn in_hull_of_others(&self, i: usize) -> bool {
        let n = self.dimension;
        let others: Vec<usize> = (0..self.rays.len()).filter(|&j| j != i).collect();
        let target: Vec<BigRational> = self.rays[i]
            .iter()
            .copied()
            .map(int_to_rat)
            .chain(std::iter::once(int_to_rat(1)))
            .collect();
        for size in 1..=(n + 1).min(others.len()) {
            let mut found = false;
            for_each_subset(&others, size, &mut |subset| {
                if found {
                    return;
                }
                // (n+1) x size system: sum lambda_j v_j = v_i, sum lambda_j = 1
                let a: Vec<Vec<BigRational>> = (0..=n)
                    .map(|row| {
                        subset
                            .iter()
                            .map(|&j| {
                                if row < n {
                                    int_to_rat(self.rays[j][row])
                                } else {
                                    int_to_rat(1)
                                }
                            })
                            .collect()
                    })
                    .collect();
                if let Some(lambda) = linalg::solve_unique(&a, &target) {
                    if lambda.iter().all(|x| !x.is_negative()) {
                        found = true;
                    }
                }
            });
            if found {
                return true;
            }
        }
        false
    }

    /// Same fan with rays reordered: new ray `p` is old ray `perm[p]`.
    pub fn permuted(&self, perm: &[usize]) -> Fan {
        let mut inverse = vec![0; perm.len()];
        for (new, &old) in perm.iter().enumerate() {
            inverse[old] = new;
        }
        let rays = perm.iter().map(|&old| self.rays[old].clone()).collect();
        let cones = self
            .cones
            .iter()
            .map(|c| c.iter().map(|&old| inverse[old]).collect())
            .collect();
        Fan::new(self.dimension, rays, cones)
    }
}

fn for_each_subset(items: &[usize], size: usize, f: &mut dyn FnMut(&[usize])) {
    fn rec(items: &[usize], size: usize, start: usize, cur: &mut Vec<usize>, f: &mut dyn FnMut(&[usize])) {
        if cur.len() == size {
            f(cur);
            return;
        }
        for k in start..items.len() {
            if items.len() - k < size - cur.len() {
                break;
            }
            cur.push(items[k]);
            rec(items, size, k + 1, cur, f);
            cur.pop();
        }
    }
    rec(items, size, 0, &mut Vec::with_capacity(size), f);
}
