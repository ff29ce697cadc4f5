//! Open Gromov-Witten generating functions, invariant tables and superpotentials.

use std::collections::BTreeMap;
use std::fmt;

use num_rational::BigRational;
use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::fan::Fan;
use crate::lattice::CurveLattice;
use crate::linalg;
use crate::mirror::{pullback_g0, GZeroFamily, MirrorMapPair};
use crate::series::{MultiSeries, TruncationBox};

/// `delta_i`, and optionally the normalized `delta~_i` for a chosen cone.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InvariantSeries {
    pub ray: usize,
    pub delta: MultiSeries,
    pub normalized: Option<MultiSeries>,
}

impl InvariantSeries {
    /// `1 + delta_i`.
    pub fn one_plus(&self) -> MultiSeries {
        MultiSeries::one(self.delta.truncation())
            .add(&self.delta)
            .expect("same box")
    }
}

/// `delta_i = exp(g0^(i)(q̂(q))) - 1`.
pub fn delta_series(pulled: &[MultiSeries], i: usize) -> Result<InvariantSeries> {
    let g = pulled.get(i).ok_or(Error::RayIndex {
        index: i,
        count: pulled.len(),
    })?;
    let delta = g.exp()?.sub(&MultiSeries::one(g.truncation()))?;
    Ok(InvariantSeries {
        ray: i,
        delta,
        normalized: None,
    })
}

/// `1 + delta~_k = (1 + delta_k) / prod_j (1 + delta_{sigma(j)})^{v_k^j}`.
pub fn normalized_unit(fan: &Fan, sigma: usize, deltas: &[InvariantSeries], k: usize) -> Result<MultiSeries> {
    let cone = fan.cone(sigma)?;
    if cone.contains(&k) {
        return Ok(MultiSeries::one(deltas[k].delta.truncation()));
    }
    let coords = fan.cone_coordinates(sigma, k)?;
    let mut log = deltas[k].one_plus().log()?;
    for (&s, &c) in cone.iter().zip(&coords) {
        if c != 0 && !deltas[s].delta.is_zero() {
            let ls = deltas[s].one_plus().log()?;
            log = log.sub(&ls.scale(&linalg::int_to_rat(c)))?;
        }
    }
    log.exp()
}

/// Fill in `normalized` for every ray outside `sigma`.
pub fn normalize_deltas(fan: &Fan, sigma: usize, deltas: &mut [InvariantSeries]) -> Result<()> {
    let cone = fan.cone(sigma)?.to_vec();
    let units: Vec<Option<MultiSeries>> = (0..deltas.len())
        .map(|k| {
            if cone.contains(&k) {
                Ok(None)
            } else {
                let u = normalized_unit(fan, sigma, deltas, k)?;
                Ok(Some(u.sub(&MultiSeries::one(u.truncation()))?))
            }
        })
        .collect::<Result<_>>()?;
    for (d, u) in deltas.iter_mut().zip(units) {
        d.normalized = u;
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IntegralityMode {
    Strict,
    Warn,
}

/// Coefficients `n_{beta_i + sum k_a Psi_a}` of `1 + delta_i` over the whole box.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InvariantTable {
    pub ray: usize,
    bx: TruncationBox,
    entries: Vec<(Vec<u32>, BigRational)>,
    non_integer: Vec<Vec<u32>>,
}

impl InvariantTable {
    pub fn new(delta: &InvariantSeries, mode: IntegralityMode) -> Result<Self> {
        let full = delta.one_plus();
        let bx = full.truncation().clone();
        let mut entries = Vec::new();
        let mut non_integer = Vec::new();
        for e in bx.exponents() {
            let c = full.coeff(&e);
            if !c.is_integer() {
                if mode == IntegralityMode::Strict {
                    return Err(Error::NonInteger {
                        ray: delta.ray,
                        exponent: e,
                        value: c.to_string(),
                    });
                }
                non_integer.push(e.clone());
            }
            entries.push((e, c));
        }
        Ok(InvariantTable {
            ray: delta.ray,
            bx,
            entries,
            non_integer,
        })
    }

    pub fn truncation(&self) -> &TruncationBox {
        &self.bx
    }

    /// All entries in graded-lex order, zeros included.
    pub fn entries(&self) -> &[(Vec<u32>, BigRational)] {
        &self.entries
    }

    pub fn get(&self, k: &[u32]) -> Option<&BigRational> {
        self.entries.iter().find(|(e, _)| e == k).map(|(_, c)| c)
    }

    /// Exponents whose entry is not an integer (only populated in warn mode).
    pub fn non_integer(&self) -> &[Vec<u32>] {
        &self.non_integer
    }

    pub fn is_integral(&self) -> bool {
        self.non_integer.is_empty()
    }

    /// Tab-separated table. With `active`, only exponents vanishing outside
    /// those variables are listed, with columns for the active ones.
    pub fn to_tsv(&self, active: Option<&[usize]>) -> String {
        let all: Vec<usize> = (0..self.bx.arity()).collect();
        let cols = active.unwrap_or(&all);
        let mut out = String::new();
        for &a in cols {
            out.push_str(&format!("k{}\t", a + 1));
        }
        out.push_str("n\n");
        for (e, c) in &self.entries {
            if e.iter().enumerate().any(|(a, &k)| k > 0 && !cols.contains(&a)) {
                continue;
            }
            for &a in cols {
                out.push_str(&format!("{}\t", e[a]));
            }
            out.push_str(&format!("{c}\n"));
        }
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SuperpotentialKind {
    HoriVafa,
    LagrangianFloerRaw,
    LagrangianFloer,
    PeriodFiber,
}

impl fmt::Display for SuperpotentialKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SuperpotentialKind::HoriVafa => "W0",
            SuperpotentialKind::LagrangianFloerRaw => "W_LF(raw)",
            SuperpotentialKind::LagrangianFloer => "W_LF",
            SuperpotentialKind::PeriodFiber => "W_PF",
        })
    }
}

/// `q^q * unit * z^z`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SuperpotentialTerm {
    pub ray: usize,
    /// Exponent of `z` in the chosen cone's coordinates.
    pub z_cone: Vec<i64>,
    /// Exponent of `z` in the ambient lattice, i.e. the ray itself.
    pub z_ambient: Vec<i64>,
    /// Basis coordinates of `alpha_k` (zero for cone rays).
    pub q: Vec<i64>,
    pub unit: MultiSeries,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SuperpotentialExpr {
    pub kind: SuperpotentialKind,
    pub cone: usize,
    pub terms: Vec<SuperpotentialTerm>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ZCoords {
    Cone,
    Ambient,
}

/// How to print superpotentials.
#[derive(Debug, Clone)]
pub struct RenderOptions {
    pub q_names: Vec<String>,
    pub display_monomials: BTreeMap<String, Vec<u32>>,
    pub z: ZCoords,
}

impl RenderOptions {
    pub fn new(l: usize) -> Self {
        RenderOptions {
            q_names: MultiSeries::default_names(l),
            display_monomials: BTreeMap::new(),
            z: ZCoords::Cone,
        }
    }
}

fn render_signed(e: &[i64], names: &[String]) -> String {
    e.iter()
        .enumerate()
        .filter(|(_, &k)| k != 0)
        .map(|(a, &k)| {
            if k == 1 {
                names[a].clone()
            } else {
                format!("{}^{k}", names[a])
            }
        })
        .collect::<Vec<_>>()
        .join("*")
}

/// Render `q^k`, absorbing display monomials greedily.
fn render_q(k: &[i64], opts: &RenderOptions) -> String {
    let mut rest = k.to_vec();
    let mut parts = Vec::new();
    if rest.iter().all(|&x| x >= 0) {
        for (name, m) in &opts.display_monomials {
            let t = rest
                .iter()
                .zip(m)
                .filter(|(_, &mi)| mi > 0)
                .map(|(&r, &mi)| r / i64::from(mi))
                .min()
                .unwrap_or(0);
            if t > 0 {
                for (r, &mi) in rest.iter_mut().zip(m) {
                    *r -= t * i64::from(mi);
                }
                parts.push(if t == 1 { name.clone() } else { format!("{name}^{t}") });
            }
        }
    }
    let base = render_signed(&rest, &opts.q_names);
    if !base.is_empty() {
        parts.insert(0, base);
    }
    parts.join("*")
}

impl SuperpotentialTerm {
    pub fn render(&self, opts: &RenderOptions) -> String {
        let z = match opts.z {
            ZCoords::Cone => &self.z_cone,
            ZCoords::Ambient => &self.z_ambient,
        };
        let z_names: Vec<String> = (1..=z.len()).map(|j| format!("z{j}")).collect();
        let mut parts = Vec::new();
        let q = render_q(&self.q, opts);
        if !q.is_empty() {
            parts.push(q);
        }
        if self.unit != MultiSeries::one(self.unit.truncation()) {
            parts.push(format!("({})", self.unit.render(&opts.q_names)));
        }
        let zs = render_signed(z, &z_names);
        if !zs.is_empty() {
            parts.push(zs);
        }
        if parts.is_empty() {
            "1".into()
        } else {
            parts.join("*")
        }
    }
}

impl SuperpotentialExpr {
    pub fn render(&self, opts: &RenderOptions) -> String {
        self.terms
            .iter()
            .map(|t| t.render(opts))
            .collect::<Vec<_>>()
            .join(" + ")
    }

    fn with_units(&self, kind: SuperpotentialKind, units: Vec<MultiSeries>) -> Self {
        SuperpotentialExpr {
            kind,
            cone: self.cone,
            terms: self
                .terms
                .iter()
                .zip(units)
                .map(|(t, unit)| SuperpotentialTerm {
                    unit: within_box(&unit, &t.q),
                    ..t.clone()
                })
                .collect(),
        }
    }
}

// Drop unit terms whose product with `q^shift` leaves the box.
fn within_box(unit: &MultiSeries, shift: &[i64]) -> MultiSeries {
    let bx = unit.truncation();
    let terms = unit.terms().filter(|(e, _)| {
        e.iter()
            .zip(shift)
            .zip(bx.caps())
            .all(|((&k, &s), &cap)| i64::from(k) + s.max(0) <= i64::from(cap))
    });
    MultiSeries::from_terms(bx, terms.map(|(e, c)| (e.to_vec(), c.clone())))
}

/// `W0 = z_1 + ... + z_n + sum_{k not in sigma} q^{alpha_k} z^{v_k}`.
pub fn assemble_w_hv(
    fan: &Fan,
    lattice: &CurveLattice,
    sigma: usize,
    bx: &TruncationBox,
) -> Result<SuperpotentialExpr> {
    let cone = fan.cone(sigma)?;
    let l = lattice.rank();
    let terms = (0..fan.num_rays())
        .map(|k| {
            let q = if cone.contains(&k) {
                vec![0; l]
            } else {
                lattice.coordinates(&fan.alpha_class(sigma, k)?.0)?
            };
            Ok(SuperpotentialTerm {
                ray: k,
                z_cone: fan.cone_coordinates(sigma, k)?,
                z_ambient: fan.ray(k).to_vec(),
                q,
                unit: MultiSeries::one(bx),
            })
        })
        .collect::<Result<_>>()?;
    Ok(SuperpotentialExpr {
        kind: SuperpotentialKind::HoriVafa,
        cone: sigma,
        terms,
    })
}

/// Term `k` multiplied by `1 + delta_k`.
pub fn assemble_w_lf(w_hv: &SuperpotentialExpr, deltas: &[InvariantSeries]) -> SuperpotentialExpr {
    let units = w_hv.terms.iter().map(|t| deltas[t.ray].one_plus()).collect();
    w_hv.with_units(SuperpotentialKind::LagrangianFloerRaw, units)
}

/// After `z_j -> z_j/(1+delta_{sigma(j)})`: cone terms get coefficient 1.
pub fn normalize_w_lf(fan: &Fan, w_hv: &SuperpotentialExpr, deltas: &[InvariantSeries]) -> Result<SuperpotentialExpr> {
    let units = w_hv
        .terms
        .iter()
        .map(|t| normalized_unit(fan, w_hv.cone, deltas, t.ray))
        .collect::<Result<_>>()?;
    Ok(w_hv.with_units(SuperpotentialKind::LagrangianFloer, units))
}

/// `W0` at `q̂(q)`: term `k` gets `prod_a exp(w_a)^{(alpha_k)_a}`.
pub fn assemble_w_pf(w_hv: &SuperpotentialExpr, mm: &MirrorMapPair) -> Result<SuperpotentialExpr> {
    let units = w_hv
        .terms
        .par_iter()
        .map(|t| mm.qhat_of_q.monomial_unit(&t.q))
        .collect::<Result<_>>()?;
    Ok(w_hv.with_units(SuperpotentialKind::PeriodFiber, units))
}

/// Outcome of a consistency check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CheckReport {
    pub name: String,
    pub passed: bool,
    pub details: Vec<String>,
}

impl fmt::Display for CheckReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.name, if self.passed { "EQUAL" } else { "MISMATCH" })?;
        for d in &self.details {
            write!(f, "\n  {d}")?;
        }
        Ok(())
    }
}

/// Term-by-term exact comparison.
pub fn check_pf_equals_lf(wpf: &SuperpotentialExpr, wlf: &SuperpotentialExpr) -> CheckReport {
    let mut details = Vec::new();
    if wpf.cone != wlf.cone || wpf.terms.len() != wlf.terms.len() {
        details.push("different cone or term count".into());
    }
    for (a, b) in wpf.terms.iter().zip(&wlf.terms) {
        if a.z_cone != b.z_cone || a.q != b.q {
            details.push(format!("ray {}: monomials differ", a.ray + 1));
        } else if a.unit != b.unit {
            let diff = a
                .unit
                .sub(&b.unit)
                .map(|d| d.to_string())
                .unwrap_or_else(|e| e.to_string());
            details.push(format!("ray {}: coefficient difference {diff}", a.ray + 1));
        }
    }
    CheckReport {
        name: "W_PF = W_LF".into(),
        passed: details.is_empty(),
        details,
    }
}

/// `q^{Psi_a} prod_i (1 + delta_i)^{a_ia} = q̂(q)^{Psi_a}` for each basis class.
pub fn check_multiplicative_consistency(
    deltas: &[InvariantSeries],
    mm: &MirrorMapPair,
    lattice: &CurveLattice,
) -> Result<CheckReport> {
    let mut details = Vec::new();
    for a in 0..lattice.rank() {
        let bx = mm.qhat_of_q.truncation();
        let mut log = MultiSeries::zero(bx);
        for d in deltas {
            let c = lattice.pairing(d.ray, a);
            if c != 0 && !d.delta.is_zero() {
                log = log.add(&d.one_plus().log()?.scale(&linalg::int_to_rat(c)))?;
            }
        }
        let lhs = log.exp()?;
        let rhs = mm.qhat_of_q.exponents()[a].exp()?;
        if lhs != rhs {
            details.push(format!("Psi_{}: {}", a + 1, lhs.sub(&rhs)?));
        }
    }
    Ok(CheckReport {
        name: "multiplicative".into(),
        passed: details.is_empty(),
        details,
    })
}

/// Support, count, independence and normalization of the `delta_i`.
pub fn check_structure(fan: &Fan, lattice: &CurveLattice, deltas: &[InvariantSeries]) -> CheckReport {
    let mut details = Vec::new();
    let vertices = fan.fan_polytope_vertices();
    let support: Vec<usize> = deltas.iter().filter(|d| !d.delta.is_zero()).map(|d| d.ray).collect();
    for &i in &support {
        if vertices.contains(&i) {
            details.push(format!("delta_{} nonzero on a vertex ray", i + 1));
        }
    }
    let l = lattice.rank();
    if !support.is_empty() && support.len() + 1 > l {
        details.push(format!("{} nonzero deltas with l = {l}", support.len()));
    }
    let rows: Vec<Vec<i64>> = support.iter().map(|&i| lattice.divisor_row(i).to_vec()).collect();
    if linalg::rank(&rows) != rows.len() {
        details.push("divisor rows of nonzero deltas are dependent".into());
    }
    for d in deltas {
        if !d.one_plus().constant_term().is_one() {
            details.push(format!("n_beta_{} != 1", d.ray + 1));
        }
        if !d.delta.constant_term().is_zero() {
            details.push(format!("delta_{} has a constant term", d.ray + 1));
        }
    }
    CheckReport {
        name: "structure".into(),
        passed: details.is_empty(),
        details,
    }
}

/// Everything downstream of a fan, a lattice and a box.
#[derive(Debug, Clone)]
pub struct Computation {
    pub lattice: CurveLattice,
    pub bx: TruncationBox,
    pub g0: GZeroFamily,
    pub mirror: MirrorMapPair,
    pub pulled: Vec<MultiSeries>,
    pub deltas: Vec<InvariantSeries>,
}

impl Computation {
    pub fn new(fan: &Fan, lattice: CurveLattice, bx: &TruncationBox) -> Result<Self> {
        if bx.arity() != lattice.rank() {
            return Err(Error::Arity {
                left: lattice.rank(),
                right: bx.arity(),
            });
        }
        let g0 = GZeroFamily::compute(fan, &lattice, bx)?;
        let mirror = MirrorMapPair::assemble(&g0, &lattice)?;
        let pulled = pullback_g0(&g0, &mirror)?;
        let deltas = (0..fan.num_rays())
            .into_par_iter()
            .map(|i| delta_series(&pulled, i))
            .collect::<Result<Vec<_>>>()?;
        Ok(Computation {
            lattice,
            bx: bx.clone(),
            g0,
            mirror,
            pulled,
            deltas,
        })
    }

    pub fn superpotentials(&self, fan: &Fan, sigma: usize) -> Result<Superpotentials> {
        let hv = assemble_w_hv(fan, &self.lattice, sigma, &self.bx)?;
        let lf_raw = assemble_w_lf(&hv, &self.deltas);
        let lf = normalize_w_lf(fan, &hv, &self.deltas)?;
        let pf = assemble_w_pf(&hv, &self.mirror)?;
        Ok(Superpotentials { hv, lf_raw, lf, pf })
    }

    pub fn table(&self, i: usize, mode: IntegralityMode) -> Result<InvariantTable> {
        let d = self.deltas.get(i).ok_or(Error::RayIndex {
            index: i,
            count: self.deltas.len(),
        })?;
        InvariantTable::new(d, mode)
    }
}

#[derive(Debug, Clone)]
pub struct Superpotentials {
    pub hv: SuperpotentialExpr,
    pub lf_raw: SuperpotentialExpr,
    pub lf: SuperpotentialExpr,
    pub pf: SuperpotentialExpr,
}
