//! Truncated multivariate formal power series with exact rational coefficients.
//!
//! A [`MultiSeries`] lives in a [`TruncationBox`]: exponent `e` is kept iff
//! `e_a <= E_a` for every variable `a`. All arithmetic is exact in that quotient.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Per-variable degree caps.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TruncationBox {
    caps: Vec<u32>,
}

impl TruncationBox {
    pub fn new(caps: Vec<u32>) -> Self {
        TruncationBox { caps }
    }

    pub fn uniform(l: usize, cap: u32) -> Self {
        TruncationBox { caps: vec![cap; l] }
    }

    pub fn caps(&self) -> &[u32] {
        &self.caps
    }

    pub fn arity(&self) -> usize {
        self.caps.len()
    }

    pub fn contains(&self, e: &[u32]) -> bool {
        e.len() == self.caps.len() && e.iter().zip(&self.caps).all(|(x, c)| x <= c)
    }

    /// Largest total degree inside the box.
    pub fn max_degree(&self) -> u32 {
        self.caps.iter().sum()
    }

    /// True if every cap is `<=` the matching cap of `other`.
    pub fn fits_in(&self, other: &TruncationBox) -> bool {
        self.arity() == other.arity() && self.caps.iter().zip(&other.caps).all(|(a, b)| a <= b)
    }

    /// All exponent vectors in the box, in graded-lex order.
    pub fn exponents(&self) -> Vec<Vec<u32>> {
        let mut out = vec![vec![]];
        for &c in &self.caps {
            out = out
                .into_iter()
                .flat_map(|e: Vec<u32>| {
                    (0..=c).map(move |k| {
                        let mut e = e.clone();
                        e.push(k);
                        e
                    })
                })
                .collect();
        }
        out.sort_by(|a, b| grlex(a, b));
        out
    }

    fn check(&self, other: &TruncationBox) -> Result<()> {
        if self.arity() != other.arity() {
            return Err(Error::Arity {
                left: self.arity(),
                right: other.arity(),
            });
        }
        if self != other {
            return Err(Error::BoxMismatch {
                left: self.caps.clone(),
                right: other.caps.clone(),
            });
        }
        Ok(())
    }
}

impl fmt::Display for TruncationBox {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.caps.iter().map(u32::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}

fn degree(e: &[u32]) -> u32 {
    e.iter().sum()
}

/// Graded order: total degree first, then `x1 > x2 > ...` lexicographically,
/// so `q1` sorts before `q2` and `q1^2` before `q1*q2`.
pub fn grlex(a: &[u32], b: &[u32]) -> Ordering {
    degree(a).cmp(&degree(b)).then_with(|| b.cmp(a))
}

/// Exponent vector ordered by [`grlex`].
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
struct Mono(Vec<u32>);

impl Ord for Mono {
    fn cmp(&self, other: &Self) -> Ordering {
        grlex(&self.0, &other.0)
    }
}

impl PartialOrd for Mono {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

fn leq(f: &[u32], e: &[u32]) -> bool {
    f.iter().zip(e).all(|(a, b)| a <= b)
}

fn minus(e: &[u32], f: &[u32]) -> Vec<u32> {
    e.iter().zip(f).map(|(a, b)| a - b).collect()
}

/// A truncated power series in `l` variables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultiSeries {
    bx: TruncationBox,
    terms: BTreeMap<Mono, BigRational>,
}

impl MultiSeries {
    pub fn zero(bx: &TruncationBox) -> Self {
        MultiSeries {
            bx: bx.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn one(bx: &TruncationBox) -> Self {
        Self::constant(bx, BigRational::one())
    }

    pub fn constant(bx: &TruncationBox, c: BigRational) -> Self {
        Self::monomial(bx, &vec![0; bx.arity()], c)
    }

    /// The variable `x_a` (zero if `E_a = 0`).
    pub fn var(bx: &TruncationBox, a: usize) -> Self {
        let mut e = vec![0; bx.arity()];
        e[a] = 1;
        Self::monomial(bx, &e, BigRational::one())
    }

    /// `c * x^e`, or zero if `e` is outside the box.
    pub fn monomial(bx: &TruncationBox, e: &[u32], c: BigRational) -> Self {
        let mut s = Self::zero(bx);
        if bx.contains(e) && !c.is_zero() {
            s.terms.insert(Mono(e.to_vec()), c);
        }
        s
    }

    /// Sum of the given terms; exponents outside the box are dropped.
    pub fn from_terms<I>(bx: &TruncationBox, terms: I) -> Self
    where
        I: IntoIterator<Item = (Vec<u32>, BigRational)>,
    {
        let mut s = Self::zero(bx);
        for (e, c) in terms {
            assert_eq!(e.len(), bx.arity(), "exponent arity");
            if bx.contains(&e) {
                s.add_term(e, c);
            }
        }
        s
    }

    fn add_term(&mut self, e: Vec<u32>, c: BigRational) {
        if c.is_zero() {
            return;
        }
        let key = Mono(e);
        match self.terms.get_mut(&key) {
            Some(v) => {
                *v += c;
                if v.is_zero() {
                    self.terms.remove(&key);
                }
            }
            None => {
                self.terms.insert(key, c);
            }
        }
    }

    fn from_map(bx: &TruncationBox, map: HashMap<Vec<u32>, BigRational>) -> Self {
        MultiSeries {
            bx: bx.clone(),
            terms: map
                .into_iter()
                .filter(|(_, c)| !c.is_zero())
                .map(|(e, c)| (Mono(e), c))
                .collect(),
        }
    }

    pub fn truncation(&self) -> &TruncationBox {
        &self.bx
    }

    pub fn arity(&self) -> usize {
        self.bx.arity()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Nonzero terms in graded-lex order.
    pub fn terms(&self) -> impl Iterator<Item = (&[u32], &BigRational)> {
        self.terms.iter().map(|(e, c)| (e.0.as_slice(), c))
    }

    pub fn coeff(&self, e: &[u32]) -> BigRational {
        self.terms
            .get(&Mono(e.to_vec()))
            .cloned()
            .unwrap_or_else(BigRational::zero)
    }

    pub fn constant_term(&self) -> BigRational {
        self.coeff(&vec![0; self.arity()])
    }

    /// Indices of variables that occur in some term.
    pub fn support_variables(&self) -> Vec<usize> {
        (0..self.arity())
            .filter(|&a| self.terms.keys().any(|e| e.0[a] > 0))
            .collect()
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.bx.check(&other.bx)?;
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.0.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        MultiSeries {
            bx: self.bx.clone(),
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect(),
        }
    }

    pub fn scale(&self, k: &BigRational) -> Self {
        if k.is_zero() {
            return Self::zero(&self.bx);
        }
        MultiSeries {
            bx: self.bx.clone(),
            terms: self.terms.iter().map(|(e, c)| (e.clone(), c * k)).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.bx.check(&other.bx)?;
        let caps = self.bx.caps();
        let mut acc: HashMap<Vec<u32>, BigRational> = HashMap::new();
        let mut buf = vec![0u32; caps.len()];
        for (e, c) in &self.terms {
            'inner: for (f, d) in &other.terms {
                for a in 0..caps.len() {
                    let s = e.0[a] + f.0[a];
                    if s > caps[a] {
                        continue 'inner;
                    }
                    buf[a] = s;
                }
                let p = c * d;
                match acc.get_mut(&buf) {
                    Some(v) => *v += p,
                    None => {
                        acc.insert(buf.clone(), p);
                    }
                }
            }
        }
        Ok(Self::from_map(&self.bx, acc))
    }

    /// Restrict to a smaller box of the same arity.
    pub fn truncate(&self, smaller: &TruncationBox) -> Result<Self> {
        if smaller.arity() != self.arity() {
            return Err(Error::Arity {
                left: self.arity(),
                right: smaller.arity(),
            });
        }
        if !smaller.fits_in(&self.bx) {
            return Err(Error::BoxMismatch {
                left: self.bx.caps.clone(),
                right: smaller.caps.clone(),
            });
        }
        Ok(MultiSeries {
            bx: smaller.clone(),
            terms: self
                .terms
                .iter()
                .filter(|(e, _)| smaller.contains(&e.0))
                .map(|(e, c)| (e.clone(), c.clone()))
                .collect(),
        })
    }

    /// Drop every term of total degree above `d`.
    pub fn truncate_degree(&self, d: u32) -> Self {
        MultiSeries {
            bx: self.bx.clone(),
            terms: self
                .terms
                .iter()
                .filter(|(e, _)| degree(&e.0) <= d)
                .map(|(e, c)| (e.clone(), c.clone()))
                .collect(),
        }
    }

    /// Nonzero exponents reachable as sums of exponents in `supp`, inside the box,
    /// sorted by total degree.
    fn reachable(&self, supp: &[Vec<u32>]) -> Vec<Vec<u32>> {
        let mut seen: HashSet<Vec<u32>> = HashSet::new();
        let mut frontier: Vec<Vec<u32>> = supp.to_vec();
        for e in &frontier {
            seen.insert(e.clone());
        }
        while !frontier.is_empty() {
            let mut next = Vec::new();
            for g in &frontier {
                for f in supp {
                    let s: Vec<u32> = g.iter().zip(f).map(|(a, b)| a + b).collect();
                    if self.bx.contains(&s) && !seen.contains(&s) {
                        seen.insert(s.clone());
                        next.push(s);
                    }
                }
            }
            frontier = next;
        }
        let mut out: Vec<Vec<u32>> = seen.into_iter().collect();
        out.sort_by(|a, b| grlex(a, b));
        out
    }

    fn nonconstant(&self) -> Vec<(Vec<u32>, BigRational)> {
        self.terms
            .iter()
            .filter(|(e, _)| degree(&e.0) > 0)
            .map(|(e, c)| (e.0.clone(), c.clone()))
            .collect()
    }

    /// `exp(s)` for `s` with zero constant term.
    pub fn exp(&self) -> Result<Self> {
        let c0 = self.constant_term();
        if !c0.is_zero() {
            return Err(Error::ConstantTerm {
                expected: "0".into(),
                found: c0.to_string(),
            });
        }
        let zero = vec![0u32; self.arity()];
        let supp = self.nonconstant();
        let support: Vec<Vec<u32>> = supp.iter().map(|(e, _)| e.clone()).collect();
        let mut f: HashMap<Vec<u32>, BigRational> = HashMap::new();
        f.insert(zero.clone(), BigRational::one());
        // |e| F_e = sum_{g <= e} |g| S_g F_{e-g}
        for e in self.reachable(&support) {
            let mut acc = BigRational::zero();
            for (g, sg) in &supp {
                if leq(g, &e) {
                    if let Some(fr) = f.get(&minus(&e, g)) {
                        acc += sg * fr * rat(i64::from(degree(g)));
                    }
                }
            }
            if !acc.is_zero() {
                f.insert(e.clone(), acc / rat(i64::from(degree(&e))));
            }
        }
        Ok(Self::from_map(&self.bx, f))
    }

    /// `log(s)` for `s` with constant term 1.
    pub fn log(&self) -> Result<Self> {
        let c0 = self.constant_term();
        if !c0.is_one() {
            return Err(Error::ConstantTerm {
                expected: "1".into(),
                found: c0.to_string(),
            });
        }
        let supp = self.nonconstant();
        let support: Vec<Vec<u32>> = supp.iter().map(|(e, _)| e.clone()).collect();
        let mut l: HashMap<Vec<u32>, BigRational> = HashMap::new();
        // L_e = T_e - (1/|e|) sum_{g < e} |e-g| L_{e-g} T_g
        for e in self.reachable(&support) {
            let de = rat(i64::from(degree(&e)));
            let mut acc = BigRational::zero();
            for (g, tg) in &supp {
                if *g != e && leq(g, &e) {
                    let r = minus(&e, g);
                    if let Some(lr) = l.get(&r) {
                        acc += lr * tg * rat(i64::from(degree(&r)));
                    }
                }
            }
            let v = self.coeff(&e) - acc / de;
            if !v.is_zero() {
                l.insert(e, v);
            }
        }
        Ok(Self::from_map(&self.bx, l))
    }

    /// Multiplicative inverse; the constant term must be nonzero.
    pub fn recip(&self) -> Result<Self> {
        let c0 = self.constant_term();
        if c0.is_zero() {
            return Err(Error::ConstantTerm {
                expected: "nonzero".into(),
                found: "0".into(),
            });
        }
        let inv0 = c0.recip();
        let supp = self.nonconstant();
        let support: Vec<Vec<u32>> = supp.iter().map(|(e, _)| e.clone()).collect();
        let mut r: HashMap<Vec<u32>, BigRational> = HashMap::new();
        r.insert(vec![0; self.arity()], inv0.clone());
        for e in self.reachable(&support) {
            let mut acc = BigRational::zero();
            for (g, tg) in &supp {
                if leq(g, &e) {
                    if let Some(rr) = r.get(&minus(&e, g)) {
                        acc += tg * rr;
                    }
                }
            }
            if !acc.is_zero() {
                r.insert(e, -acc * &inv0);
            }
        }
        Ok(Self::from_map(&self.bx, r))
    }

    /// Integer power; negative powers need an invertible constant term.
    pub fn powi(&self, k: i64) -> Result<Self> {
        if k < 0 {
            return self.recip()?.powi(-k);
        }
        let mut base = self.clone();
        let mut out = Self::one(&self.bx);
        let mut k = k as u64;
        while k > 0 {
            if k & 1 == 1 {
                out = out.mul(&base)?;
            }
            k >>= 1;
            if k > 0 {
                base = base.mul(&base)?;
            }
        }
        Ok(out)
    }

    /// Evaluate at `x_a := x_a * exp(u_a(x))`.
    pub fn substitute(&self, map: &DiagonalUnitMap) -> Result<Self> {
        Substitution::new(map).apply(self)
    }

    /// Canonical text with the given variable names.
    pub fn render(&self, names: &[String]) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let mut out = String::new();
        for (i, (e, c)) in self.terms.iter().enumerate() {
            let mono = render_monomial(&e.0, names);
            let neg = c.is_negative();
            let abs = c.abs();
            if i == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            match (mono.is_empty(), abs.is_one()) {
                (true, _) => out.push_str(&abs.to_string()),
                (false, true) => out.push_str(&mono),
                (false, false) => {
                    out.push_str(&abs.to_string());
                    out.push('*');
                    out.push_str(&mono);
                }
            }
        }
        out
    }

    /// Default names `q1..ql`.
    pub fn default_names(l: usize) -> Vec<String> {
        (1..=l).map(|a| format!("q{a}")).collect()
    }
}

/// Evaluates many series under one [`DiagonalUnitMap`], sharing the images
/// of monomials between calls.
pub struct Substitution<'a> {
    map: &'a DiagonalUnitMap,
    shifted: Vec<Option<MultiSeries>>,
    memo: HashMap<Vec<u32>, MultiSeries>,
}

impl<'a> Substitution<'a> {
    pub fn new(map: &'a DiagonalUnitMap) -> Self {
        Substitution {
            map,
            shifted: vec![None; map.bx.arity()],
            memo: HashMap::new(),
        }
    }

    pub fn apply(&mut self, s: &MultiSeries) -> Result<MultiSeries> {
        s.bx.check(&self.map.bx)?;
        let mut acc: HashMap<Vec<u32>, BigRational> = HashMap::new();
        for (e, c) in s.terms() {
            let image = self.image(e)?;
            for (f, d) in image.terms() {
                let v = d * c;
                match acc.get_mut(f) {
                    Some(x) => *x += v,
                    None => {
                        acc.insert(f.to_vec(), v);
                    }
                }
            }
        }
        Ok(MultiSeries::from_map(&s.bx, acc))
    }

    // x^e * prod_a exp(u_a)^{e_a}
    fn image(&mut self, e: &[u32]) -> Result<MultiSeries> {
        if let Some(s) = self.memo.get(e) {
            return Ok(s.clone());
        }
        let Some(a) = e.iter().rposition(|&k| k > 0) else {
            return Ok(MultiSeries::one(&self.map.bx));
        };
        let mut prev = e.to_vec();
        prev[a] -= 1;
        let base = self.image(&prev)?;
        if self.shifted[a].is_none() {
            self.shifted[a] = Some(self.map.image(a)?);
        }
        let s = base.mul(self.shifted[a].as_ref().expect("just set"))?;
        self.memo.insert(e.to_vec(), s.clone());
        Ok(s)
    }
}

/// Text of `x^e`, empty for the constant monomial.
pub fn render_monomial(e: &[u32], names: &[String]) -> String {
    let parts: Vec<String> = e
        .iter()
        .enumerate()
        .filter(|(_, &k)| k > 0)
        .map(|(a, &k)| {
            if k == 1 {
                names[a].clone()
            } else {
                format!("{}^{k}", names[a])
            }
        })
        .collect();
    parts.join("*")
}

impl fmt::Display for MultiSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render(&Self::default_names(self.arity())))
    }
}

/// The coordinate change `x_a -> x_a * exp(u_a(x))`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiagonalUnitMap {
    bx: TruncationBox,
    u: Vec<MultiSeries>,
}

impl DiagonalUnitMap {
    pub fn new(bx: &TruncationBox, u: Vec<MultiSeries>) -> Result<Self> {
        if u.len() != bx.arity() {
            return Err(Error::Arity {
                left: bx.arity(),
                right: u.len(),
            });
        }
        for s in &u {
            bx.check(&s.bx)?;
            let c = s.constant_term();
            if !c.is_zero() {
                return Err(Error::ConstantTerm {
                    expected: "0".into(),
                    found: c.to_string(),
                });
            }
        }
        Ok(DiagonalUnitMap { bx: bx.clone(), u })
    }

    pub fn identity(bx: &TruncationBox) -> Self {
        DiagonalUnitMap {
            bx: bx.clone(),
            u: vec![MultiSeries::zero(bx); bx.arity()],
        }
    }

    pub fn truncation(&self) -> &TruncationBox {
        &self.bx
    }

    /// The exponents `u_a`.
    pub fn exponents(&self) -> &[MultiSeries] {
        &self.u
    }

    pub fn is_identity(&self) -> bool {
        self.u.iter().all(MultiSeries::is_zero)
    }

    /// The image `x_a * exp(u_a)` of variable `a`.
    pub fn image(&self, a: usize) -> Result<MultiSeries> {
        MultiSeries::var(&self.bx, a).mul(&self.u[a].exp()?)
    }

    /// The map `self ∘ inner`: first `inner`, then `self`.
    pub fn after(&self, inner: &DiagonalUnitMap) -> Result<Self> {
        let mut sub = Substitution::new(inner);
        let u = self
            .u
            .iter()
            .zip(&inner.u)
            .map(|(outer, w)| w.add(&sub.apply(outer)?))
            .collect::<Result<Vec<_>>>()?;
        DiagonalUnitMap::new(&self.bx, u)
    }

    /// The inverse map, by fixed-point iteration `w <- -u(x*exp(w))`.
    pub fn invert(&self) -> Result<Self> {
        let rounds = self.bx.max_degree() as usize + 2;
        let mut w = DiagonalUnitMap::identity(&self.bx);
        for _ in 0..rounds {
            let mut sub = Substitution::new(&w);
            let next = self
                .u
                .iter()
                .map(|ua| Ok(sub.apply(ua)?.neg()))
                .collect::<Result<Vec<_>>>()?;
            let next = DiagonalUnitMap {
                bx: self.bx.clone(),
                u: next,
            };
            if next == w {
                return Ok(w);
            }
            w = next;
        }
        unreachable!("fixed point must stabilize within the box degree")
    }

    /// `prod_a exp(u_a)^{k_a}` for an integer vector `k`.
    pub fn monomial_unit(&self, k: &[i64]) -> Result<MultiSeries> {
        let mut out = MultiSeries::one(&self.bx);
        for (ua, &ka) in self.u.iter().zip(k) {
            if ka != 0 && !ua.is_zero() {
                out = out.mul(&ua.exp()?.powi(ka)?)?;
            }
        }
        Ok(out)
    }

    pub fn render(&self, names: &[String]) -> Vec<String> {
        self.u.iter().map(|s| s.render(names)).collect()
    }
}
