//! The curve lattice `H_2(X) = ker(Z^m -> Z^n)` with a chosen (ideally nef) basis.

use num_rational::BigRational;

use crate::error::{Error, Result};
use crate::fan::{CurveClass, Fan};
use crate::linalg::{self, int_to_rat};

/// Outcome of [`CurveLattice::nef_check`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NefCheck {
    pub holds: bool,
    /// A wall class with some negative basis coordinate, and those coordinates.
    pub witness: Option<(CurveClass, Vec<i64>)>,
}

/// Where the basis came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BasisOrigin {
    Supplied,
    /// Found among unimodular subsets of wall classes.
    NefSearch,
    /// Plain Smith-normal-form kernel basis; no nef basis was found.
    SmithKernel,
}

/// Rank-`l` kernel lattice with basis `Psi_1..Psi_l` and pairing matrix
/// `a[i][k] = <D_i, Psi_k>`.
#[derive(Debug, Clone)]
pub struct CurveLattice {
    basis: Vec<CurveClass>,
    pairings: Vec<Vec<i64>>,
    // rows of the basis matrix on which it is invertible over Q
    pivot_rows: Vec<usize>,
    nef: NefCheck,
    origin: BasisOrigin,
}

fn pivot_rows(basis: &[CurveClass], m: usize) -> Vec<usize> {
    let mut rows: Vec<usize> = Vec::new();
    let mut chosen: Vec<Vec<i64>> = Vec::new();
    for i in 0..m {
        let row: Vec<i64> = basis.iter().map(|b| b.0[i]).collect();
        let mut trial = chosen.clone();
        trial.push(row);
        if linalg::rank(&trial) == trial.len() {
            chosen = trial;
            rows.push(i);
            if rows.len() == basis.len() {
                break;
            }
        }
    }
    rows
}

impl CurveLattice {
    /// Verify a supplied basis, or compute one (preferring a nef basis).
    pub fn new(fan: &Fan, basis: Option<Vec<Vec<i64>>>) -> Result<Self> {
        let m = fan.num_rays();
        let n = fan.dimension();
        let ray_matrix = linalg::transpose(fan.rays(), n);
        let kernel = linalg::integer_kernel(&ray_matrix, m);
        let l = kernel.len();

        let (basis, origin) = match basis {
            Some(supplied) => {
                for b in &supplied {
                    if !fan.in_kernel(b) {
                        return Err(Error::NotInKernel {
                            class: b.clone(),
                            image: if b.len() == m { fan.boundary(b) } else { vec![] },
                        });
                    }
                }
                if supplied.len() != l {
                    return Err(Error::Basis(format!("expected {l} classes, got {}", supplied.len())));
                }
                if linalg::rank(&supplied) != l {
                    return Err(Error::Basis("classes are linearly dependent".into()));
                }
                if !linalg::spans_saturated(&supplied) {
                    let snf = linalg::smith_normal_form(&supplied);
                    let index: i64 = snf.factors.iter().product();
                    return Err(Error::Basis(format!("classes span a sublattice of index {index}")));
                }
                (supplied, BasisOrigin::Supplied)
            }
            None => match nef_basis_search(fan, &kernel) {
                Some(b) => (b, BasisOrigin::NefSearch),
                None => (kernel, BasisOrigin::SmithKernel),
            },
        };

        let basis: Vec<CurveClass> = basis.into_iter().map(CurveClass).collect();
        let pairings = (0..m).map(|i| basis.iter().map(|b| b.0[i]).collect()).collect();
        let pivot_rows = pivot_rows(&basis, m);
        let mut lattice = CurveLattice {
            basis,
            pairings,
            pivot_rows,
            nef: NefCheck {
                holds: true,
                witness: None,
            },
            origin,
        };
        lattice.nef = lattice.nef_check(fan);
        Ok(lattice)
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn num_rays(&self) -> usize {
        self.pairings.len()
    }

    pub fn basis(&self) -> &[CurveClass] {
        &self.basis
    }

    pub fn origin(&self) -> BasisOrigin {
        self.origin
    }

    /// `<D_i, Psi_k>`.
    pub fn pairing(&self, i: usize, k: usize) -> i64 {
        self.pairings[i][k]
    }

    /// Row `i` of the divisor-coordinate matrix: `D_i = sum_k a_ik p_k`.
    pub fn divisor_row(&self, i: usize) -> &[i64] {
        &self.pairings[i]
    }

    pub fn is_nef(&self) -> bool {
        self.nef.holds
    }

    pub fn nef_status(&self) -> &NefCheck {
        &self.nef
    }

    /// Coordinates `k` with `d = sum_a k_a Psi_a`, i.e. `<p_a, d>`.
    pub fn coordinates(&self, d: &[i64]) -> Result<Vec<i64>> {
        let l = self.rank();
        if l == 0 {
            return if d.iter().all(|&x| x == 0) {
                Ok(vec![])
            } else {
                Err(Error::NotInKernel {
                    class: d.to_vec(),
                    image: vec![],
                })
            };
        }
        let a: Vec<Vec<BigRational>> = self
            .pivot_rows
            .iter()
            .map(|&i| self.pairings[i].iter().copied().map(int_to_rat).collect())
            .collect();
        let b: Vec<BigRational> = self.pivot_rows.iter().map(|&i| int_to_rat(d[i])).collect();
        let sol =
            linalg::solve_unique(&a, &b).ok_or_else(|| Error::Basis("basis pairing matrix is singular".into()))?;
        let not_in = || Error::NotInKernel {
            class: d.to_vec(),
            image: vec![],
        };
        let coords: Vec<i64> = sol
            .into_iter()
            .map(|x| {
                if x.is_integer() {
                    i64::try_from(x.to_integer()).map_err(|_| not_in())
                } else {
                    Err(not_in())
                }
            })
            .collect::<Result<_>>()?;
        let rebuilt = self.class_from_coordinates(&coords);
        if rebuilt.0 != d {
            return Err(not_in());
        }
        Ok(coords)
    }

    /// Basis exponents of `q^d`; errors if any is negative.
    pub fn exponents(&self, d: &[i64]) -> Result<Vec<u32>> {
        let coords = self.coordinates(d)?;
        if coords.iter().any(|&k| k < 0) {
            return Err(Error::NegativeExponent {
                class: d.to_vec(),
                exponent: coords,
            });
        }
        Ok(coords.into_iter().map(|k| k as u32).collect())
    }

    pub fn class_from_coordinates(&self, coords: &[i64]) -> CurveClass {
        let m = self.num_rays();
        let mut d = vec![0i64; m];
        for (b, &k) in self.basis.iter().zip(coords) {
            for (x, y) in d.iter_mut().zip(&b.0) {
                *x += k * y;
            }
        }
        CurveClass(d)
    }

    /// Every wall class must have nonnegative coordinates in this basis.
    pub fn nef_check(&self, fan: &Fan) -> NefCheck {
        for w in fan.wall_curve_classes() {
            match self.coordinates(&w.0) {
                Ok(c) if c.iter().all(|&x| x >= 0) => {}
                Ok(c) => {
                    return NefCheck {
                        holds: false,
                        witness: Some((w, c)),
                    }
                }
                Err(_) => {
                    return NefCheck {
                        holds: false,
                        witness: Some((w, vec![])),
                    }
                }
            }
        }
        NefCheck {
            holds: true,
            witness: None,
        }
    }

    /// Fail with [`Error::NotNef`] unless the basis is nef.
    pub fn require_nef(&self) -> Result<()> {
        match &self.nef.witness {
            None => Ok(()),
            Some((w, c)) => Err(Error::NotNef {
                witness: w.0.clone(),
                coords: c.clone(),
            }),
        }
    }
}

fn unchecked(basis: Vec<CurveClass>, m: usize, origin: BasisOrigin) -> CurveLattice {
    CurveLattice {
        pairings: (0..m).map(|i| basis.iter().map(|b| b.0[i]).collect()).collect(),
        pivot_rows: pivot_rows(&basis, m),
        basis,
        nef: NefCheck {
            holds: true,
            witness: None,
        },
        origin,
    }
}

/// A nef basis: first among unimodular `l`-subsets of wall classes, then by
/// choosing small nef divisors in the dual of `kernel`.
fn nef_basis_search(fan: &Fan, kernel: &[Vec<i64>]) -> Option<Vec<Vec<i64>>> {
    let l = kernel.len();
    if l == 0 {
        return Some(vec![]);
    }
    wall_subset_search(fan, l).or_else(|| dual_search(fan, kernel))
}

fn wall_subset_search(fan: &Fan, l: usize) -> Option<Vec<Vec<i64>>> {
    const MAX_CANDIDATES: usize = 200_000;
    let walls = fan.distinct_wall_classes();
    let m = fan.num_rays();
    if walls.len() < l {
        return None;
    }
    let mut tried = 0usize;
    let mut idx: Vec<usize> = (0..l).collect();
    loop {
        tried += 1;
        let candidate: Vec<Vec<i64>> = idx.iter().map(|&i| walls[i].0.clone()).collect();
        if linalg::spans_saturated(&candidate) {
            let basis = candidate.iter().cloned().map(CurveClass).collect();
            if unchecked(basis, m, BasisOrigin::NefSearch).nef_check(fan).holds {
                return Some(candidate);
            }
        }
        if tried >= MAX_CANDIDATES || !next_combination(&mut idx, walls.len()) {
            return None;
        }
    }
}

// Rows r_a of a unimodular M with r_a . c >= 0 for every wall class c (in
// kernel coordinates); the new basis is kernel * M^-1.
fn dual_search(fan: &Fan, kernel: &[Vec<i64>]) -> Option<Vec<Vec<i64>>> {
    let l = kernel.len();
    let m = fan.num_rays();
    let base = unchecked(
        kernel.iter().cloned().map(CurveClass).collect(),
        m,
        BasisOrigin::SmithKernel,
    );
    let walls: Vec<Vec<i64>> = fan
        .distinct_wall_classes()
        .iter()
        .map(|w| base.coordinates(&w.0))
        .collect::<Result<_>>()
        .ok()?;
    for radius in 1..=3i64 {
        let mut cands: Vec<Vec<i64>> = Vec::new();
        let mut r = vec![-radius; l];
        loop {
            if r.iter().any(|&x| x != 0)
                && linalg::gcd_all(&r) == 1
                && walls
                    .iter()
                    .all(|c| c.iter().zip(&r).map(|(a, b)| a * b).sum::<i64>() >= 0)
            {
                cands.push(r.clone());
            }
            let mut pos = 0;
            while pos < l && r[pos] == radius {
                r[pos] = -radius;
                pos += 1;
            }
            if pos == l {
                break;
            }
            r[pos] += 1;
        }
        cands.sort_by_key(|r| (r.iter().map(|x| x.abs()).sum::<i64>(), r.clone()));
        let mut rows = Vec::new();
        if pick_rows(&cands, 0, l, &mut rows) {
            let inv: Vec<Vec<i64>> = (0..l)
                .map(|b| {
                    let e: Vec<i64> = (0..l).map(|a| i64::from(a == b)).collect();
                    linalg::solve_integral(&rows, &e)
                })
                .collect::<Option<_>>()?;
            // column b of M^-1 is inv[b]
            let basis: Vec<Vec<i64>> = (0..l)
                .map(|b| (0..m).map(|i| (0..l).map(|a| kernel[a][i] * inv[b][a]).sum()).collect())
                .collect();
            return Some(basis);
        }
    }
    None
}

fn pick_rows(cands: &[Vec<i64>], from: usize, l: usize, rows: &mut Vec<Vec<i64>>) -> bool {
    if rows.len() == l {
        return true;
    }
    for (k, c) in cands.iter().enumerate().skip(from) {
        rows.push(c.clone());
        if linalg::spans_saturated(rows) && pick_rows(cands, k + 1, l, rows) {
            return true;
        }
        rows.pop();
    }
    false
}

fn next_combination(idx: &mut [usize], n: usize) -> bool {
    let k = idx.len();
    for pos in (0..k).rev() {
        if idx[pos] < n - k + pos {
            idx[pos] += 1;
            for j in pos + 1..k {
                idx[j] = idx[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn f2_supplied_basis_is_nef() {
        let data = fixtures::f2();
        let lat = CurveLattice::new(&data.fan, data.basis.clone()).unwrap();
        assert_eq!(lat.rank(), 2);
        assert!(lat.is_nef());
        assert_eq!(lat.origin(), BasisOrigin::Supplied);
        assert_eq!(lat.coordinates(&[1, 2, 1, 0]).unwrap(), vec![1, 2]);
    }

    #[test]
    fn f2_skewed_basis_is_not_nef() {
        let data = fixtures::f2();
        let basis = vec![vec![1, 1, 1, -1], vec![0, 1, 0, 1]];
        let lat = CurveLattice::new(&data.fan, Some(basis)).unwrap();
        let check = lat.nef_check(&data.fan);
        assert!(!check.holds);
        let (w, coords) = check.witness.unwrap();
        assert!(coords.iter().any(|&c| c < 0), "{w} -> {coords:?}");
    }

    #[test]
    fn computed_bases() {
        let p2 = fixtures::p2();
        let lat = CurveLattice::new(&p2.fan, None).unwrap();
        assert_eq!(lat.basis(), &[CurveClass(vec![1, 1, 1])]);
        assert!(lat.is_nef());

        let f2 = fixtures::f2();
        let lat = CurveLattice::new(&f2.fan, None).unwrap();
        assert_eq!(lat.rank(), 2);
        assert!(lat.is_nef());
        let mut b: Vec<_> = lat.basis().to_vec();
        b.sort();
        assert_eq!(b, vec![CurveClass(vec![0, 1, 0, 1]), CurveClass(vec![1, 0, 1, -2])]);
    }

    #[test]
    fn degenerate_rank_zero() {
        let fan = Fan::new(2, vec![vec![1, 0], vec![0, 1]], vec![vec![0, 1]]);
        let lat = CurveLattice::new(&fan, None).unwrap();
        assert_eq!(lat.rank(), 0);
        assert!(lat.nef_check(&fan).holds);
    }

    #[test]
    fn rejects_bad_bases() {
        let f2 = fixtures::f2();
        let err = CurveLattice::new(&f2.fan, Some(vec![vec![1, 0, 0, 0], vec![0, 1, 0, 1]]));
        assert!(matches!(err, Err(Error::NotInKernel { .. })));
        let err = CurveLattice::new(&f2.fan, Some(vec![vec![2, 0, 2, -4], vec![0, 1, 0, 1]]));
        assert!(matches!(err, Err(Error::Basis(msg)) if msg.contains("index 2")));
    }

    #[test]
    fn kp2_blowup_basis_is_nef_and_matches_wall_curves() {
        let data = fixtures::kp2_blowup();
        let lat = CurveLattice::new(&data.fan, data.basis.clone()).unwrap();
        assert!(lat.is_nef());
        // Psi_a is the wall curve D_a . D_5
        for (a, psi) in lat.basis().iter().enumerate() {
            assert!(data.fan.wall_curve_classes().contains(psi), "Psi_{}", a + 1);
        }
    }

    #[test]
    fn kp2_gets_a_nef_basis() {
        let data = fixtures::kp2_compactified();
        let lat = CurveLattice::new(&data.fan, None).unwrap();
        assert!(lat.is_nef());
        assert_eq!(lat.origin(), BasisOrigin::NefSearch);
    }
}
