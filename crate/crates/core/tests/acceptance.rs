//! Acceptance run: one pass/fail line per criterion, nonzero exit if any fails.

mod common;

use std::collections::{BTreeMap, BTreeSet};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::Command;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use toric_opengw::fan::Fan;
use toric_opengw::fixtures;
use toric_opengw::input::ToricData;
use toric_opengw::lattice::CurveLattice;
use toric_opengw::mirror::{enumerate_g0_classes, GZeroFamily};
use toric_opengw::opengw::{
    check_multiplicative_consistency, check_pf_equals_lf, Computation, IntegralityMode, RenderOptions,
};
use toric_opengw::series::{DiagonalUnitMap, MultiSeries, TruncationBox};
use toric_opengw::surface::surface_admissible_delta;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn computation(data: &ToricData, bx: &TruncationBox) -> Computation {
    let lattice = CurveLattice::new(&data.fan, data.basis.clone()).unwrap();
    Computation::new(&data.fan, lattice, bx).unwrap()
}

fn within(t: Instant, limit: Duration) -> Result<(), String> {
    ensure(t.elapsed() < limit, || {
        format!("took {:?}, limit {limit:?}", t.elapsed())
    })
}

fn f2_end_to_end() -> Outcome {
    let t = Instant::now();
    let f2 = fixtures::f2();
    let bx = TruncationBox::new(vec![5, 5]);
    let c = computation(&f2, &bx);
    ensure(c.deltas[3].delta == MultiSeries::var(&bx, 0), || {
        format!("delta4 = {}", c.deltas[3].delta)
    })?;
    for i in 0..3 {
        ensure(c.deltas[i].delta.is_zero(), || {
            format!("delta{} = {}", i + 1, c.deltas[i].delta)
        })?;
    }
    let w = c.superpotentials(&f2.fan, f2.default_cone.unwrap_or(0)).unwrap();
    let report = check_pf_equals_lf(&w.pf, &w.lf);
    ensure(report.passed, || report.to_string())?;
    let shown = w.pf.render(&RenderOptions::new(2));
    ensure(shown == "z1 + z2 + q1*q2^2*z1^-1*z2^-2 + q2*(1 + q1)*z2^-1", || {
        shown.clone()
    })?;
    within(t, Duration::from_secs(1))?;
    Ok(format!("delta4 = q1, W_PF = W_LF = {shown}"))
}

fn golden(text: &str) -> BTreeMap<(u32, u32), BigInt> {
    text.lines()
        .skip(1)
        .map(|l| {
            let f: Vec<&str> = l.split('\t').collect();
            ((f[0].parse().unwrap(), f[1].parse().unwrap()), f[2].parse().unwrap())
        })
        .collect()
}

fn threefold_tables() -> Outcome {
    let t = Instant::now();
    let data = fixtures::kp2_blowup();
    let bx = TruncationBox::uniform(4, 7);
    let c = computation(&data, &bx);
    let mut mismatches = Vec::new();
    let mut compared = 0;
    for (ray, text) in [
        (0, include_str!("golden/table1.tsv")),
        (1, include_str!("golden/table2.tsv")),
    ] {
        let table = c.table(ray, IntegralityMode::Strict).unwrap();
        for ((k1, k2), n) in golden(text) {
            compared += 1;
            let got = table.get(&[k1, k2, 0, 0]).unwrap();
            if *got != BigRational::from_integer(n.clone()) {
                mismatches.push(format!("T{}({k1},{k2}): {got} vs {n}", ray + 1));
            }
        }
    }
    let anchors = [
        (0, [2, 2], 9),
        (0, [7, 0], -454880),
        (1, [5, 3], -20232),
        (1, [7, 7], -65956176),
    ];
    for (ray, [k1, k2], n) in anchors {
        let got = c.deltas[ray].one_plus().coeff(&[k1, k2, 0, 0]);
        if got != BigRational::from_integer(n.into()) {
            mismatches.push(format!("anchor n(beta{}+{k1}Psi1+{k2}Psi2) = {got} vs {n}", ray + 1));
        }
    }
    ensure(c.deltas[3].delta == MultiSeries::var(&bx, 3), || {
        format!("delta4 = {}", c.deltas[3].delta)
    })?;
    within(t, Duration::from_secs(60))?;
    ensure(compared == 128, || format!("golden tables have {compared} entries"))?;
    ensure(mismatches.is_empty(), || {
        format!("{} mismatches: {}", mismatches.len(), mismatches.join("; "))
    })?;
    Ok("128 entries and 4 anchors agree, delta4 = q4".into())
}

fn closed_form_g0() -> Outcome {
    let data = fixtures::kp2_blowup();
    let lattice = CurveLattice::new(&data.fan, data.basis.clone()).unwrap();
    let bx = TruncationBox::new(vec![10, 10, 10, 10]);
    let g0 = GZeroFamily::compute(&data.fan, &lattice, &bx).unwrap();
    let mut f = Vec::new();
    let mut g = Vec::new();
    let mut h = Vec::new();
    for k1 in 0..=10u32 {
        for k2 in 0..=10u32 {
            f.push((vec![k1, k2, 0, 0], -common::f_coef(k1.into(), k2.into())));
            g.push((vec![k1, k2, 0, 0], -common::g_coef(k1.into(), k2.into())));
        }
        h.push((vec![0, 0, 0, k1], -common::h_coef(k1.into())));
    }
    let expected = [
        (0, MultiSeries::from_terms(&bx, f)),
        (1, MultiSeries::from_terms(&bx, g)),
        (3, MultiSeries::from_terms(&bx, h)),
    ];
    let mut terms = 0;
    for (i, e) in expected {
        ensure(*g0.get(i) == e, || {
            format!("g0_{} - closed form = {}", i + 1, g0.get(i).sub(&e).unwrap())
        })?;
        terms += e.len();
    }
    Ok(format!(
        "g0_1 = -f, g0_2 = -g, g0_4 = -h on box 10 ({terms} nonzero coefficients)"
    ))
}

fn fano_degeneration() -> Outcome {
    let t = Instant::now();
    for data in [fixtures::p2(), fixtures::p1xp1(), fixtures::p1xp1xp1()] {
        let name = data.name().to_string();
        let bx = TruncationBox::uniform(data.fan.num_rays() - data.fan.dimension(), 5);
        let c = computation(&data, &bx);
        ensure(c.g0.series().iter().all(MultiSeries::is_zero), || {
            format!("{name}: nonzero g0")
        })?;
        ensure(
            c.mirror.q_of_qhat.is_identity() && c.mirror.qhat_of_q.is_identity(),
            || format!("{name}: mirror map not the identity"),
        )?;
        ensure(c.deltas.iter().all(|d| d.delta.is_zero()), || {
            format!("{name}: nonzero delta")
        })?;
        for sigma in 0..data.fan.cones().len() {
            let w = c.superpotentials(&data.fan, sigma).unwrap();
            for (a, b) in [(&w.hv, &w.lf), (&w.hv, &w.pf), (&w.lf, &w.pf)] {
                let r = check_pf_equals_lf(a, b);
                ensure(r.passed, || format!("{name} cone {}: {r}", sigma + 1))?;
            }
        }
    }
    within(t, Duration::from_secs(1))?;
    Ok("P2, P1xP1, P1xP1xP1: g0 = 0, identity map, delta = 0, W0 = W_LF = W_PF".into())
}

fn random_series(rng: &mut impl Rng, bx: &TruncationBox, constant: bool) -> MultiSeries {
    let mut terms: Vec<(Vec<u32>, BigRational)> = Vec::new();
    for e in bx.exponents() {
        if (constant || e.iter().any(|&k| k > 0)) && rng.gen_bool(0.5) {
            let c = BigRational::new(rng.gen_range(-9..=9).into(), rng.gen_range(1..=4).into());
            terms.push((e, c));
        }
    }
    MultiSeries::from_terms(bx, terms)
}

fn random_box(rng: &mut impl Rng, l: usize, max: u32) -> TruncationBox {
    TruncationBox::new((0..l).map(|_| rng.gen_range(0..=max)).collect())
}

fn property_suite() -> Outcome {
    const CASES: usize = 100;
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut counts = Vec::new();

    for _ in 0..CASES {
        let bx = random_box(&mut rng, 2, 3);
        let (a, b, c) = (
            random_series(&mut rng, &bx, true),
            random_series(&mut rng, &bx, true),
            random_series(&mut rng, &bx, true),
        );
        ensure(a.mul(&b).unwrap() == b.mul(&a).unwrap(), || "commutativity".into())?;
        ensure(
            a.mul(&b).unwrap().mul(&c).unwrap() == a.mul(&b.mul(&c).unwrap()).unwrap(),
            || "associativity".into(),
        )?;
        let lhs = a.add(&b).unwrap().mul(&c).unwrap();
        let rhs = a.mul(&c).unwrap().add(&b.mul(&c).unwrap()).unwrap();
        ensure(lhs == rhs, || "distributivity".into())?;
        ensure(a.mul(&MultiSeries::one(&bx)).unwrap() == a, || "unit".into())?;
        ensure(a.sub(&a).unwrap().is_zero(), || "additive inverse".into())?;
    }
    counts.push(format!("ring axioms {CASES}"));

    for _ in 0..CASES {
        let bx = random_box(&mut rng, 2, 3);
        let a = random_series(&mut rng, &bx, false);
        ensure(a.exp().unwrap().log().unwrap() == a, || format!("log(exp({a}))"))?;
        let one_plus = MultiSeries::one(&bx).add(&a).unwrap();
        ensure(one_plus.log().unwrap().exp().unwrap() == one_plus, || {
            format!("exp(log(1 + {a}))")
        })?;
    }
    counts.push(format!("exp/log {CASES}"));

    for _ in 0..CASES {
        let bx = random_box(&mut rng, 2, 3);
        let u = vec![random_series(&mut rng, &bx, false), random_series(&mut rng, &bx, false)];
        let m = DiagonalUnitMap::new(&bx, u).unwrap();
        let inv = m.invert().unwrap();
        ensure(m.after(&inv).unwrap().is_identity(), || "m after m^-1".into())?;
        ensure(inv.after(&m).unwrap().is_identity(), || "m^-1 after m".into())?;
    }
    counts.push(format!("unit-map round trip {CASES}"));

    let fx = fixtures::semi_fano();
    let mut n = 0;
    while n < CASES {
        for (name, data) in &fx {
            let l = data.fan.num_rays() - data.fan.dimension();
            let bx = random_box(&mut rng, l, if l > 3 { 2 } else { 4 });
            let c = computation(data, &bx);
            ensure(c.mirror.round_trip_holds().unwrap(), || {
                format!("{name}: mirror round trip at {bx}")
            })?;
            let r = check_multiplicative_consistency(&c.deltas, &c.mirror, &c.lattice).unwrap();
            ensure(r.passed, || format!("{name} at {bx}: {r}"))?;
            n += 1;
        }
    }
    counts.push(format!("mirror round trip and multiplicative identity {n}"));

    for _ in 0..CASES {
        let fan = random_small_surface(&mut rng);
        let lattice = CurveLattice::new(&fan, None).unwrap();
        let bx = random_box(&mut rng, lattice.rank(), 6);
        for i in 0..fan.num_rays() {
            let got: BTreeSet<Vec<u32>> = enumerate_g0_classes(&fan, &lattice, i, &bx)
                .unwrap()
                .into_iter()
                .map(|c| c.exponent)
                .collect();
            ensure(got == common::brute_force_g0(&lattice, i, &bx), || {
                format!("enumeration on {:?}", fan.rays())
            })?;
        }
    }
    counts.push(format!("enumeration vs cube scan {CASES}"));

    for _ in 0..CASES {
        let (name, data) = fx.choose(&mut rng).unwrap();
        let l = data.fan.num_rays() - data.fan.dimension();
        let bx = TruncationBox::uniform(l, 2);
        let base = computation(data, &bx);
        let mut cones = data.fan.cones().to_vec();
        cones.shuffle(&mut rng);
        cones.iter_mut().for_each(|c| c.shuffle(&mut rng));
        let shuffled = Fan::new(data.fan.dimension(), data.fan.rays().to_vec(), cones);
        let lattice = CurveLattice::new(
            &shuffled,
            Some(base.lattice.basis().iter().map(|b| b.0.clone()).collect()),
        )
        .unwrap();
        let other = Computation::new(&shuffled, lattice, &bx).unwrap();
        ensure(base.g0 == other.g0 && base.deltas == other.deltas, || {
            format!("{name}: order dependence")
        })?;
    }
    counts.push(format!("determinism under shuffling {CASES}"));

    Ok(counts.join(", "))
}

fn random_small_surface(rng: &mut ChaCha8Rng) -> Fan {
    common::random_small_surface(rng)
}

fn structure() -> Outcome {
    let mut lines = Vec::new();
    for (name, data) in fixtures::semi_fano() {
        let l = data.fan.num_rays() - data.fan.dimension();
        let c = computation(&data, &TruncationBox::uniform(l, if l > 3 { 3 } else { 5 }));
        let vertices = data.fan.fan_polytope_vertices();
        let support: Vec<usize> = c.deltas.iter().filter(|d| !d.delta.is_zero()).map(|d| d.ray).collect();
        ensure(support.iter().all(|i| !vertices.contains(i)), || {
            format!("{name}: delta on a vertex")
        })?;
        ensure(support.is_empty() || support.len() < l, || {
            format!("{name}: {} nonzero deltas", support.len())
        })?;
        let rows: Vec<Vec<i64>> = support.iter().map(|&i| c.lattice.divisor_row(i).to_vec()).collect();
        ensure(common::rank(&rows) == rows.len(), || {
            format!("{name}: dependent divisor rows")
        })?;
        for d in &c.deltas {
            let n = d.one_plus().coeff(&vec![0; l]);
            ensure(n.is_one(), || format!("{name}: n_beta{} = {n}", d.ray + 1))?;
        }
        lines.push(format!(
            "{name} {:?}",
            support.iter().map(|i| i + 1).collect::<Vec<_>>()
        ));
    }
    Ok(format!("nonzero deltas: {}", lines.join(", ")))
}

fn surface_oracle() -> Outcome {
    let mut seen = Vec::new();
    for data in [fixtures::f2(), fixtures::f2_blowup(), fixtures::a2_chain()] {
        ensure(data.fan.is_semi_fano().holds, || {
            format!("{} is not semi-Fano", data.name())
        })?;
        let l = data.fan.num_rays() - 2;
        let bx = TruncationBox::uniform(l, 5);
        let c = computation(&data, &bx);
        let mut nonzero = 0;
        for i in 0..data.fan.num_rays() {
            let oracle = surface_admissible_delta(&data.fan, &c.lattice, i, &bx).unwrap();
            ensure(oracle == c.deltas[i].delta, || {
                format!("{} ray {}: {oracle} vs {}", data.name(), i + 1, c.deltas[i].delta)
            })?;
            nonzero += usize::from(!oracle.is_zero());
        }
        seen.push(format!("{} ({nonzero} nonzero)", data.name()));
    }
    Ok(format!("agree on every ray of {}", seen.join(", ")))
}

fn negative_control() -> Outcome {
    let f3 = fixtures::f3();
    let sf = f3.fan.is_semi_fano();
    ensure(!sf.holds, || "F3 accepted".into())?;
    let w = sf.witness.ok_or("no witness")?;
    ensure(w.c1() == -1, || format!("witness {w} has c1 {}", w.c1()))?;
    let bin = env!("CARGO_BIN_EXE_opengw");
    for cmd in ["validate", "check", "invariants"] {
        let status = Command::new(bin)
            .args([cmd, "f3.json"])
            .output()
            .map_err(|e| e.to_string())?
            .status;
        ensure(!status.success(), || format!("opengw {cmd} f3.json exited 0"))?;
    }
    Ok(format!("witness {w} with c1 = -1, CLI exits nonzero"))
}

fn main() {
    let criteria: [Criterion; 8] = [
        ("F2 end-to-end", f2_end_to_end),
        ("threefold invariant tables", threefold_tables),
        ("closed-form g0", closed_form_g0),
        ("Fano degeneration", fano_degeneration),
        ("property suite", property_suite),
        ("structural constraints", structure),
        ("surface oracle", surface_oracle),
        ("negative control", negative_control),
    ];
    let mut failed = 0;
    for (k, (name, run)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let result = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|p| {
            Err(p
                .downcast_ref::<String>()
                .cloned()
                .or(p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default())
        });
        let secs = t.elapsed().as_secs_f64();
        match result {
            Ok(msg) => println!("criterion {} {name}: PASS ({secs:.2}s) {msg}", k + 1),
            Err(msg) => {
                failed += 1;
                println!("criterion {} {name}: FAIL ({secs:.2}s) {msg}", k + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
