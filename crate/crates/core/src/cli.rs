//! Batch driver behind the `opengw` binary.

use std::fmt::Write as _;
use std::path::Path;

use clap::{Parser, Subcommand, ValueEnum};
use num_rational::BigRational;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::fixtures;
use crate::input::{parse_document, ToricData};
use crate::lattice::CurveLattice;
use crate::opengw::{
    check_multiplicative_consistency, check_pf_equals_lf, check_structure, CheckReport, Computation, IntegralityMode,
    InvariantTable, RenderOptions, SuperpotentialExpr, ZCoords,
};
use crate::series::{MultiSeries, TruncationBox};
use crate::surface::{cross_validate_surface, surface_admissible_delta};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Tsv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Integrality {
    Strict,
    Warn,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// Fan report, semi-Fano test and fan polytope vertices.
    Validate,
    /// The series g0^(i) in the mirror variables.
    G0,
    /// Both directions of the mirror map.
    MirrorMap,
    /// Tables of open invariants.
    Invariants,
    /// W0, W_LF and W_PF with the equality report.
    Superpotential,
    /// Admissible-class oracle for surfaces.
    SurfaceOracle,
    /// Every consistency report.
    Check,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Validate => "validate",
            Command::G0 => "g0",
            Command::MirrorMap => "mirror-map",
            Command::Invariants => "invariants",
            Command::Superpotential => "superpotential",
            Command::SurfaceOracle => "surface-oracle",
            Command::Check => "check",
        }
    }
}

/// Open Gromov-Witten invariants of semi-Fano toric manifolds.
#[derive(Debug, Clone, Parser)]
#[command(name = "opengw", version)]
pub struct JobConfig {
    #[command(subcommand)]
    pub command: Command,
    /// Input JSON file, or the name of a bundled fixture such as `f2.json`.
    #[arg(global = true, default_value = "")]
    pub input: String,
    /// Degree caps, one per variable or a single cap for all (default 5).
    #[arg(long = "box", global = true, value_delimiter = ',', value_name = "CAPS")]
    pub bx: Option<Vec<u32>>,
    /// Maximal cone, 1-based in the order of `max_cones`.
    #[arg(long, global = true)]
    pub cone: Option<usize>,
    /// Restrict to one ray, 1-based.
    #[arg(long, global = true)]
    pub ray: Option<usize>,
    /// Table columns, 1-based variables (default: those the table depends on).
    #[arg(long, global = true, value_delimiter = ',', value_name = "VARS")]
    pub vars: Option<Vec<usize>>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    #[arg(long, global = true, value_enum, default_value_t = Integrality::Strict)]
    pub integrality: Integrality,
    /// Print superpotential monomials in ambient coordinates.
    #[arg(long, global = true)]
    pub ambient: bool,
}

impl JobConfig {
    pub fn new(command: Command, input: &str) -> Self {
        JobConfig {
            command,
            input: input.into(),
            bx: None,
            cone: None,
            ray: None,
            vars: None,
            format: Format::Text,
            integrality: Integrality::Strict,
            ambient: false,
        }
    }
}

/// Rendered output and process exit status.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub exit_code: i32,
    pub output: String,
    /// The output is an error diagnostic rather than a result.
    pub diagnostic: bool,
}

/// Read a file, falling back to a bundled fixture of the same name.
pub fn load_source(input: &str) -> Result<String> {
    if input.is_empty() {
        return Err(Error::Input("no input file given".into()));
    }
    if Path::new(input).exists() {
        return std::fs::read_to_string(input).map_err(|e| Error::Input(format!("{input}: {e}")));
    }
    fixtures::source(input)
        .or_else(|| fixtures::source(&format!("{input}.json")))
        .map(str::to_string)
        .ok_or_else(|| Error::Input(format!("{input}: no such file or bundled fixture")))
}

/// Run a job. Exit 1 flags a failed check or a fan outside scope, 2 bad input.
pub fn run(job: &JobConfig) -> Outcome {
    match run_inner(job) {
        Ok(o) => o,
        Err(e) => {
            let output = match job.format {
                Format::Json => {
                    let v = json!({
                        "schema_version": SCHEMA_VERSION,
                        "command": job.command.name(),
                        "error": e.to_string(),
                    });
                    format!("{}\n", serde_json::to_string_pretty(&v).expect("json"))
                }
                _ => format!("error: {e}\n"),
            };
            let exit_code = if matches!(e, Error::NotSemiFano { .. }) { 1 } else { 2 };
            Outcome {
                exit_code,
                output,
                diagnostic: true,
            }
        }
    }
}

struct Ctx {
    job: JobConfig,
    data: ToricData,
    digest: String,
}

fn digest(source: &str, job: &JobConfig) -> String {
    let mut h = Sha256::new();
    h.update(source.as_bytes());
    h.update(format!(
        "\0{}\0{:?}\0{:?}\0{:?}\0{:?}",
        job.command.name(),
        job.bx,
        job.cone,
        job.ray,
        job.integrality
    ));
    hex::encode(h.finalize())
}

fn run_inner(job: &JobConfig) -> Result<Outcome> {
    let source = load_source(&job.input)?;
    let data = parse_document(&source)?;
    let ctx = Ctx {
        digest: digest(&source, job),
        job: job.clone(),
        data,
    };
    if job.command == Command::Validate {
        return validate(&ctx);
    }
    let report = ctx.data.fan.validate();
    if !report.is_ok() {
        return Err(Error::InvalidFan(report.to_string().replace('\n', "; ")));
    }
    let sf = ctx.data.fan.is_semi_fano();
    if let Some(w) = sf.witness {
        return Err(Error::NotSemiFano {
            c1: w.c1(),
            witness: w.0,
        });
    }
    let lattice = CurveLattice::new(&ctx.data.fan, ctx.data.basis.clone())?;
    lattice.require_nef()?;
    let bx = match &job.bx {
        Some(caps) if caps.len() == 1 => TruncationBox::uniform(lattice.rank(), caps[0]),
        Some(caps) if caps.len() != lattice.rank() => {
            return Err(Error::Input(format!(
                "--box has {} caps but the curve lattice has rank {}",
                caps.len(),
                lattice.rank()
            )))
        }
        Some(caps) => TruncationBox::new(caps.clone()),
        None => TruncationBox::uniform(lattice.rank(), 5),
    };
    let m = ctx.data.fan.num_rays();
    let rays: Vec<usize> = match job.ray {
        Some(r) if r == 0 || r > m => return Err(Error::RayIndex { index: r, count: m }),
        Some(r) => vec![r - 1],
        None => (0..m).collect(),
    };
    let sigma = match job.cone {
        Some(c) if c == 0 || c > ctx.data.fan.cones().len() => {
            return Err(Error::ConeIndex {
                index: c,
                count: ctx.data.fan.cones().len(),
            })
        }
        Some(c) => c - 1,
        None => ctx.data.default_cone.unwrap_or(0),
    };
    if job.format == Format::Tsv && !matches!(job.command, Command::G0 | Command::Invariants) {
        return Err(Error::Input(
            "tsv output is only available for g0 and invariants".into(),
        ));
    }
    match job.command {
        Command::Validate => unreachable!(),
        Command::G0 => g0(&ctx, lattice, &bx, &rays),
        Command::MirrorMap => mirror_map(&ctx, lattice, &bx),
        Command::Invariants => invariants(&ctx, lattice, &bx, &rays),
        Command::Superpotential => superpotential(&ctx, lattice, &bx, sigma),
        Command::SurfaceOracle => surface_oracle(&ctx, lattice, &bx, &rays),
        Command::Check => check(&ctx, lattice, &bx, sigma),
    }
}

fn envelope(ctx: &Ctx, results: Value) -> String {
    let v = json!({
        "schema_version": SCHEMA_VERSION,
        "command": ctx.job.command.name(),
        "inputs_digest": ctx.digest,
        "results": results,
    });
    format!("{}\n", serde_json::to_string_pretty(&v).expect("json"))
}

fn finish(ctx: &Ctx, ok: bool, text: String, results: Value) -> Result<Outcome> {
    let output = match ctx.job.format {
        Format::Json => envelope(ctx, results),
        _ => text,
    };
    Ok(Outcome {
        exit_code: if ok { 0 } else { 1 },
        output,
        diagnostic: false,
    })
}

fn series_json(s: &MultiSeries, names: &[String]) -> Value {
    let terms: Vec<Value> = s.terms().map(|(e, c)| json!([e, c.to_string()])).collect();
    json!({ "text": s.render(names), "terms": terms })
}

fn report_json(r: &CheckReport) -> Value {
    json!({ "name": r.name, "passed": r.passed, "details": r.details })
}

fn hat_names(l: usize) -> Vec<String> {
    (1..=l).map(|a| format!("qhat{a}")).collect()
}

fn validate(ctx: &Ctx) -> Result<Outcome> {
    let fan = &ctx.data.fan;
    let report = fan.validate();
    let mut text = String::new();
    let mut ok = report.is_ok();
    writeln!(
        text,
        "{}: {} rays, {} maximal cones",
        ctx.data.name(),
        fan.num_rays(),
        fan.cones().len()
    )
    .unwrap();
    if report.is_ok() {
        writeln!(text, "fan: smooth and complete").unwrap();
    } else {
        writeln!(text, "fan: invalid\n{report}").unwrap();
    }
    let mut results = json!({
        "valid": report.is_ok(),
        "violations": report.violations.iter().map(|v| v.to_string()).collect::<Vec<_>>(),
    });
    if report.is_ok() {
        let sf = fan.is_semi_fano();
        match &sf.witness {
            None => writeln!(text, "semi-Fano: yes").unwrap(),
            Some(w) => {
                ok = false;
                writeln!(text, "not semi-Fano, witness {w} with c1.d = {}", w.c1()).unwrap();
            }
        }
        let vertices: Vec<usize> = fan.fan_polytope_vertices().iter().map(|v| v + 1).collect();
        writeln!(text, "fan polytope vertices: {vertices:?}").unwrap();
        results["semi_fano"] = json!(sf.holds);
        results["witness"] = json!(sf.witness.as_ref().map(|w| json!({ "class": w.0, "c1": w.c1() })));
        results["vertices"] = json!(vertices);
        match CurveLattice::new(fan, ctx.data.basis.clone()) {
            Ok(lat) => {
                let basis: Vec<String> = lat.basis().iter().map(|b| b.to_string()).collect();
                writeln!(text, "curve lattice rank {}: {}", lat.rank(), basis.join(", ")).unwrap();
                writeln!(text, "nef basis: {}", if lat.is_nef() { "yes" } else { "no" }).unwrap();
                ok &= lat.is_nef();
                results["basis"] = json!(lat.basis().iter().map(|b| b.0.clone()).collect::<Vec<_>>());
                results["nef"] = json!(lat.is_nef());
            }
            Err(e) => {
                ok = false;
                writeln!(text, "curve lattice: {e}").unwrap();
                results["basis_error"] = json!(e.to_string());
            }
        }
    }
    finish(ctx, ok, text, results)
}

fn g0(ctx: &Ctx, lattice: CurveLattice, bx: &TruncationBox, rays: &[usize]) -> Result<Outcome> {
    let fam = crate::mirror::GZeroFamily::compute(&ctx.data.fan, &lattice, bx)?;
    let names = hat_names(lattice.rank());
    let mut text = String::new();
    let mut results = Vec::new();
    for &i in rays {
        let s = fam.get(i);
        if ctx.job.format == Format::Tsv {
            writeln!(text, "# g0_{}", i + 1).unwrap();
            text.push_str(&series_tsv(s, lattice.rank()));
        } else {
            writeln!(text, "g0_{} = {}", i + 1, s.render(&names)).unwrap();
        }
        results.push(json!({ "ray": i + 1, "series": series_json(s, &names) }));
    }
    finish(ctx, true, text, json!(results))
}

fn series_tsv(s: &MultiSeries, l: usize) -> String {
    let mut out: String = (1..=l).map(|a| format!("e{a}\t")).collect();
    out.push_str("c\n");
    for (e, c) in s.terms() {
        for k in e {
            write!(out, "{k}\t").unwrap();
        }
        writeln!(out, "{c}").unwrap();
    }
    out
}

fn mirror_map(ctx: &Ctx, lattice: CurveLattice, bx: &TruncationBox) -> Result<Outcome> {
    let c = Computation::new(&ctx.data.fan, lattice, bx)?;
    let l = c.lattice.rank();
    let (q, qh) = (MultiSeries::default_names(l), hat_names(l));
    let mut text = String::new();
    let mut forward = Vec::new();
    let mut inverse = Vec::new();
    for a in 0..l {
        let u = &c.mirror.q_of_qhat.exponents()[a];
        writeln!(text, "q{} = qhat{}*exp({})", a + 1, a + 1, u.render(&qh)).unwrap();
        forward.push(series_json(u, &qh));
    }
    for a in 0..l {
        let w = &c.mirror.qhat_of_q.exponents()[a];
        writeln!(text, "qhat{} = q{}*exp({})", a + 1, a + 1, w.render(&q)).unwrap();
        inverse.push(series_json(w, &q));
    }
    let round_trip = c.mirror.round_trip_holds()?;
    writeln!(text, "round trip: {}", if round_trip { "identity" } else { "FAILED" }).unwrap();
    let results = json!({ "q_of_qhat": forward, "qhat_of_q": inverse, "round_trip": round_trip });
    finish(ctx, round_trip, text, results)
}

fn mode(ctx: &Ctx) -> IntegralityMode {
    match ctx.job.integrality {
        Integrality::Strict => IntegralityMode::Strict,
        Integrality::Warn => IntegralityMode::Warn,
    }
}

fn table_columns(ctx: &Ctx, c: &Computation, i: usize) -> Vec<usize> {
    match &ctx.job.vars {
        Some(v) => v.iter().map(|a| a.saturating_sub(1)).collect(),
        None => {
            let vars = c.deltas[i].delta.support_variables();
            if vars.is_empty() {
                (0..c.lattice.rank()).collect()
            } else {
                vars
            }
        }
    }
}

fn invariants(ctx: &Ctx, lattice: CurveLattice, bx: &TruncationBox, rays: &[usize]) -> Result<Outcome> {
    let l = lattice.rank();
    if let Some(v) = &ctx.job.vars {
        if v.iter().any(|&a| a == 0 || a > l) {
            return Err(Error::Input(format!("--vars entries must lie in 1..={l}")));
        }
    }
    let c = Computation::new(&ctx.data.fan, lattice, bx)?;
    let mut text = String::new();
    let mut results = Vec::new();
    let mut ok = true;
    for &i in rays {
        let table = c.table(i, mode(ctx))?;
        let cols = table_columns(ctx, &c, i);
        ok &= table.is_integral();
        if ctx.job.format != Format::Tsv {
            writeln!(
                text,
                "n(beta_{} + k.Psi), delta_{} = {}",
                i + 1,
                i + 1,
                c.deltas[i].delta
            )
            .unwrap();
        } else if rays.len() > 1 {
            writeln!(text, "# ray {}", i + 1).unwrap();
        }
        text.push_str(&table.to_tsv(Some(&cols)));
        for e in table.non_integer() {
            writeln!(text, "warning: non-integer entry at {e:?}").unwrap();
        }
        results.push(table_json(&table, &cols));
    }
    finish(ctx, ok, text, json!(results))
}

fn table_json(t: &InvariantTable, cols: &[usize]) -> Value {
    let rows: Vec<Value> = t
        .entries()
        .iter()
        .filter(|(e, _)| e.iter().enumerate().all(|(a, &k)| k == 0 || cols.contains(&a)))
        .map(|(e, c): &(Vec<u32>, BigRational)| json!([e, c.to_string()]))
        .collect();
    json!({
        "ray": t.ray + 1,
        "columns": cols.iter().map(|a| a + 1).collect::<Vec<_>>(),
        "entries": rows,
        "integral": t.is_integral(),
    })
}

fn render_opts(ctx: &Ctx, l: usize) -> RenderOptions {
    RenderOptions {
        q_names: MultiSeries::default_names(l),
        display_monomials: ctx.data.display_monomials.clone(),
        z: if ctx.job.ambient {
            ZCoords::Ambient
        } else {
            ZCoords::Cone
        },
    }
}

fn superpotential(ctx: &Ctx, lattice: CurveLattice, bx: &TruncationBox, sigma: usize) -> Result<Outcome> {
    let c = Computation::new(&ctx.data.fan, lattice, bx)?;
    let w = c.superpotentials(&ctx.data.fan, sigma)?;
    let opts = render_opts(ctx, c.lattice.rank());
    let report = check_pf_equals_lf(&w.pf, &w.lf);
    let mut text = String::new();
    let cone: Vec<usize> = ctx.data.fan.cone(sigma)?.iter().map(|r| r + 1).collect();
    writeln!(text, "cone {cone:?}").unwrap();
    let exprs: [&SuperpotentialExpr; 4] = [&w.hv, &w.lf_raw, &w.lf, &w.pf];
    let mut results = json!({ "cone": cone });
    for e in exprs {
        let r = e.render(&opts);
        writeln!(text, "{} = {r}", e.kind).unwrap();
        results[e.kind.to_string()] = json!(r);
    }
    writeln!(text, "{}", if report.passed { "EQUAL" } else { "NOT EQUAL" }).unwrap();
    for d in &report.details {
        writeln!(text, "  {d}").unwrap();
    }
    results["equality"] = report_json(&report);
    finish(ctx, report.passed, text, results)
}

fn surface_oracle(ctx: &Ctx, lattice: CurveLattice, bx: &TruncationBox, rays: &[usize]) -> Result<Outcome> {
    if ctx.data.fan.dimension() != 2 {
        return Err(Error::NotSurface("surface-oracle"));
    }
    let c = Computation::new(&ctx.data.fan, lattice, bx)?;
    let mut text = String::new();
    let mut results = Vec::new();
    let mut ok = true;
    for &i in rays {
        let oracle = surface_admissible_delta(&ctx.data.fan, &c.lattice, i, bx)?;
        let agree = oracle == c.deltas[i].delta;
        ok &= agree;
        writeln!(
            text,
            "ray {}: admissible {} | mirror {} | {}",
            i + 1,
            oracle,
            c.deltas[i].delta,
            if agree { "agree" } else { "DIFFER" }
        )
        .unwrap();
        let names = MultiSeries::default_names(c.lattice.rank());
        results.push(json!({
            "ray": i + 1,
            "admissible": series_json(&oracle, &names),
            "mirror": series_json(&c.deltas[i].delta, &names),
            "agree": agree,
        }));
    }
    finish(ctx, ok, text, json!(results))
}

fn check(ctx: &Ctx, lattice: CurveLattice, bx: &TruncationBox, sigma: usize) -> Result<Outcome> {
    let fan = &ctx.data.fan;
    let c = Computation::new(fan, lattice, bx)?;
    let w = c.superpotentials(fan, sigma)?;
    let round_trip = c.mirror.round_trip_holds()?;
    let mut reports = vec![
        CheckReport {
            name: "mirror round trip".into(),
            passed: round_trip,
            details: vec![],
        },
        check_pf_equals_lf(&w.pf, &w.lf),
        check_multiplicative_consistency(&c.deltas, &c.mirror, &c.lattice)?,
        check_structure(fan, &c.lattice, &c.deltas),
    ];
    let mut integral = CheckReport {
        name: "integrality".into(),
        passed: true,
        details: vec![],
    };
    for i in 0..fan.num_rays() {
        let t = c.table(i, IntegralityMode::Warn)?;
        for e in t.non_integer() {
            integral.details.push(format!("ray {} at {e:?}", i + 1));
        }
    }
    integral.passed = integral.details.is_empty() || ctx.job.integrality == Integrality::Warn;
    reports.push(integral);
    if fan.dimension() == 2 {
        reports.push(cross_validate_surface(fan, &c.lattice, &c.deltas, bx)?);
    }
    let ok = reports.iter().all(|r| r.passed);
    let text: String = reports
        .iter()
        .map(|r| {
            let mut s = format!("{}: {}\n", r.name, if r.passed { "pass" } else { "FAIL" });
            for d in &r.details {
                s.push_str(&format!("  {d}\n"));
            }
            s
        })
        .collect();
    let results = json!(reports.iter().map(report_json).collect::<Vec<_>>());
    finish(ctx, ok, text, results)
}
