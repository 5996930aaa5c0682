//! Running a verification job and rendering the outcome.
//!
//! Every check ends up as one or more records (`ResidualReport`), so the
//! verdict counts always sum to the record count. Soliton-type checks also
//! keep a one-line summary, and catalog runs attach the per-entry
//! comparisons. Floats are written as `%.12e`; the JSON document parses back
//! into an equal `Report` and re-renders to the same bytes.

use std::fmt::Write as _;

use serde_json::{Map, Number, Value as Json};

use crate::catalog::{self, CatalogError, Category, Comparison, Provenance};
use crate::manifest::{Check, VerificationJob};
use crate::riemann::GeomError;
use crate::soliton::{self, SolitonReport};
use crate::verify::{Hypothesis, ResidualReport, Value, Verdict, Verifier};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, thiserror::Error)]
pub enum ReportError {
    #[error("invalid setup: {0}")]
    Invalid(String),
    #[error(transparent)]
    Geom(#[from] GeomError),
    #[error(transparent)]
    Catalog(#[from] CatalogError),
    #[error("malformed report: {0}")]
    Json(String),
}

#[derive(Clone, Debug, PartialEq)]
pub struct StructureRow {
    pub name: String,
    pub holds: bool,
    pub max_violation: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct JobSummary {
    pub source: String,
    pub m: usize,
    pub n: usize,
    pub points: usize,
    pub lambda_min: f64,
    pub lambda_max: f64,
    pub max_anisotropy: f64,
    pub structure: Vec<StructureRow>,
    pub checks: Vec<String>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SolitonSummary {
    pub check: String,
    pub claim: String,
    pub coefficient: String,
    pub value: f64,
    pub spread: f64,
    pub max_residual: f64,
    pub extras: Vec<(String, f64)>,
    pub verdict: Verdict,
    pub flags: Vec<String>,
    pub note: Option<String>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExampleSection {
    pub id: String,
    pub comparisons: Vec<Comparison>,
    pub notes: Vec<String>,
}

impl ExampleSection {
    pub fn paper_divergent(&self) -> Vec<&Comparison> {
        self.comparisons.iter().filter(|c| c.verdict == Verdict::PaperDivergent).collect()
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Counts {
    pub pass: usize,
    pub fail: usize,
    pub hypothesis_not_met: usize,
    pub paper_divergent: usize,
}

impl Counts {
    pub fn of(records: &[ResidualReport]) -> Counts {
        let mut c = Counts::default();
        for r in records {
            match r.verdict {
                Verdict::Pass => c.pass += 1,
                Verdict::Fail => c.fail += 1,
                Verdict::HypothesisNotMet => c.hypothesis_not_met += 1,
                Verdict::PaperDivergent => c.paper_divergent += 1,
            }
        }
        c
    }

    pub fn total(&self) -> usize {
        self.pass + self.fail + self.hypothesis_not_met + self.paper_divergent
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Meta {
    pub tol: f64,
    pub seed: u64,
    pub version: String,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Report {
    pub job: JobSummary,
    pub records: Vec<ResidualReport>,
    pub solitons: Vec<SolitonSummary>,
    pub example: Option<ExampleSection>,
    pub counts: Counts,
    pub meta: Meta,
}

impl Report {
    /// Process exit code: 1 if anything failed, else 0.
    pub fn exit_code(&self) -> i32 {
        if self.counts.fail > 0 {
            1
        } else {
            0
        }
    }
}

fn error_record(kind: &str, id: &str, p: &[f64], err: &dyn std::fmt::Display, tol: f64) -> ResidualReport {
    let mut r = ResidualReport::new(
        kind,
        id,
        p,
        String::new(),
        Value::Scalar(f64::NAN),
        Value::Scalar(f64::NAN),
        Vec::new(),
        Vec::new(),
        tol,
    );
    r.verdict = Verdict::Fail;
    r.flags.push("evaluation-error".into());
    r.note = Some(err.to_string());
    r
}

fn soliton_records(check: &str, rep: &SolitonReport, out: &mut Vec<ResidualReport>, tol: f64) -> SolitonSummary {
    for sp in &rep.points {
        let mut r = ResidualReport::new(
            "soliton",
            check,
            &sp.point,
            format!("{} {}", rep.claim, rep.coefficient),
            Value::Scalar(sp.fitted),
            Value::Scalar(sp.claimed),
            vec![("closing residual at claimed".into(), sp.conclusion_residual)],
            sp.hypotheses.clone(),
            tol,
        );
        r.abs_residual = sp.conclusion_residual;
        r.rel_residual = sp.conclusion_residual / (1.0 + sp.claimed.abs());
        r.verdict = sp.verdict;
        if sp.verdict != Verdict::Pass {
            r.flags = rep.flags.clone();
            r.note = rep.note.clone();
        }
        out.push(r);
    }
    SolitonSummary {
        check: check.into(),
        claim: rep.claim.clone(),
        coefficient: rep.coefficient.clone(),
        value: rep.fitted_mean,
        spread: rep.spread,
        max_residual: rep.max_residual,
        extras: rep.extras.clone(),
        verdict: rep.verdict,
        flags: rep.flags.clone(),
        note: rep.note.clone(),
    }
}

/// Executes every requested check at every point of `job`.
pub fn run_job(job: &VerificationJob, source: &str, seed: u64) -> Result<Report, ReportError> {
    let s = &job.setup;
    let tol = job.tolerance;
    let pts = &job.points;

    let (mut lmin, mut lmax, mut aniso) = (f64::INFINITY, f64::NEG_INFINITY, 0.0f64);
    let mut good = Vec::new();
    for p in pts {
        if let Ok(d) = s.dilation(p) {
            let l = d.lambda_sq.sqrt();
            lmin = lmin.min(l);
            lmax = lmax.max(l);
            aniso = aniso.max(d.anisotropy);
            good.push(p.clone());
        }
    }
    if good.is_empty() && !pts.is_empty() {
        return Err(ReportError::Invalid("the map is not a submersion at any sample point".into()));
    }
    let structure = if good.is_empty() {
        Vec::new()
    } else {
        s.structure_flags(&good, tol)?
            .entries()
            .iter()
            .map(|(n, f)| StructureRow { name: (*n).into(), holds: f.holds, max_violation: f.max_violation })
            .collect()
    };
    let summary = JobSummary {
        source: source.into(),
        m: s.m(),
        n: s.n(),
        points: pts.len(),
        lambda_min: if lmin.is_finite() { lmin } else { f64::NAN },
        lambda_max: if lmax.is_finite() { lmax } else { f64::NAN },
        max_anisotropy: aniso,
        structure,
        checks: job.checks.iter().map(|c| c.name()).collect(),
    };

    let verifier = Verifier::new(s, tol, seed);
    let mut pcs = None;
    let xi = job.xi_spec();
    let mut fitted: Option<soliton::MuFit> = None;
    let mut records = Vec::new();
    let mut solitons = Vec::new();

    let fit = |fitted: &mut Option<soliton::MuFit>| -> Result<soliton::MuFit, GeomError> {
        if fitted.is_none() {
            *fitted = Some(soliton::fit_mu(&s.total, &xi, pts, seed, tol)?);
        }
        Ok(fitted.clone().expect("just fitted"))
    };

    for check in &job.checks {
        let name = check.name();
        let needs_mu =
            matches!(check, Check::FiberSoliton | Check::BaseSoliton | Check::ScalarMu | Check::Harmonicity);
        // Without a declared μ the soliton checks use the fitted one.
        let mu = match job.mu {
            Some(mu) => Ok(mu),
            None if pts.is_empty() || !needs_mu => Ok(0.0),
            None => fit(&mut fitted).map(|f| f.mu),
        };
        let mu_value = *mu.as_ref().unwrap_or(&f64::NAN);
        match check {
            Check::Identity(id) => {
                let pcs = pcs.get_or_insert_with(|| pts.iter().map(|p| verifier.point(p)).collect::<Vec<_>>());
                for (p, pc) in pts.iter().zip(pcs.iter()) {
                    match pc.as_ref().map_err(|e| e.to_string()).and_then(|pc| {
                        verifier.run_at(id, pc).map_err(|e| e.to_string())
                    }) {
                        Ok(rs) => records.extend(rs),
                        Err(e) => records.push(error_record("identity", id, p, &e, tol)),
                    }
                }
            }
            Check::Dilation => {
                for p in pts {
                    match s.dilation(p) {
                        Ok(d) => {
                            records.push(ResidualReport::new(
                                "dilation",
                                "conformality",
                                p,
                                String::new(),
                                Value::Scalar(d.anisotropy),
                                Value::Scalar(0.0),
                                Vec::new(),
                                Vec::new(),
                                tol,
                            ));
                            if let Some(l) = &s.lambda_declared {
                                let r = l.eval(p, &s.total.coords).map_err(GeomError::from).map(|v| {
                                    ResidualReport::new(
                                        "dilation",
                                        "declared-lambda",
                                        p,
                                        String::new(),
                                        Value::Scalar(d.lambda_sq.sqrt()),
                                        Value::Scalar(v),
                                        Vec::new(),
                                        Vec::new(),
                                        tol,
                                    )
                                });
                                records.push(r.unwrap_or_else(|e| error_record("dilation", "declared-lambda", p, &e, tol)));
                            }
                        }
                        Err(e) => records.push(error_record("dilation", "conformality", p, &e, tol)),
                    }
                }
            }
            Check::Structure => {
                for p in pts {
                    records.push(match s.horizontal_mean_curvature(p) {
                        Ok(h) => ResidualReport::new(
                            "structure",
                            "horizontal-mean-curvature",
                            p,
                            "A-trace vs dilation formula".into(),
                            Value::Vector(h.via_a),
                            Value::Vector(h.via_formula),
                            Vec::new(),
                            Vec::new(),
                            tol,
                        ),
                        Err(e) => error_record("structure", "horizontal-mean-curvature", p, &e, tol),
                    });
                }
            }
            Check::FitMu => match fit(&mut fitted) {
                Ok(f) => {
                    let claimed = job.mu.unwrap_or(f.mu);
                    let mut r = ResidualReport::new(
                        "soliton",
                        "fit-mu",
                        &[],
                        f.classification.as_str().into(),
                        Value::Scalar(f.mu),
                        Value::Scalar(claimed),
                        vec![("closing residual".into(), f.max_residual)],
                        Vec::new(),
                        tol,
                    );
                    if f.max_residual > tol {
                        r.verdict = Verdict::Fail;
                        r.note = Some(format!(
                            "no constant μ closes the soliton equation for this ξ (residual {})",
                            fmt_e(f.max_residual)
                        ));
                    }
                    solitons.push(SolitonSummary {
                        check: name.clone(),
                        claim: "ricci-soliton".into(),
                        coefficient: "μ".into(),
                        value: f.mu,
                        spread: 0.0,
                        max_residual: f.max_residual,
                        extras: Vec::new(),
                        verdict: r.verdict,
                        flags: Vec::new(),
                        note: Some(f.classification.as_str().into()),
                    });
                    records.push(r);
                }
                Err(e) => records.push(error_record("soliton", "fit-mu", &[], &e, tol)),
            },
            Check::FiberSoliton | Check::BaseSoliton => {
                let rep = mu.and_then(|mu| match check {
                    Check::FiberSoliton => soliton::fiber_soliton_report(s, &xi, mu, pts, tol),
                    _ => soliton::base_soliton_report(s, &xi, mu, pts, tol),
                });
                match rep {
                    Ok(rep) => solitons.push(soliton_records(&name, &rep, &mut records, tol)),
                    Err(e) => records.push(error_record("soliton", &name, &[], &e, tol)),
                }
            }
            Check::ScalarMu => match mu.and_then(|mu| soliton::scalar_mu_consistency(s, &xi, mu, pts, tol)) {
                Ok(rs) => records.extend(rs),
                Err(e) => records.push(error_record("soliton", "scalar-mu", &[], &e, tol)),
            },
            Check::Harmonicity => match mu.and_then(|mu| soliton::harmonicity_report(s, &xi, mu, pts, tol)) {
                Ok(h) => {
                    let mut r = ResidualReport::new(
                        "soliton",
                        "harmonicity",
                        &[],
                        format!("harmonic={} scalar_condition={}", h.harmonic, h.scalar_condition),
                        Value::Scalar(h.max_tension),
                        Value::Scalar(h.max_scalar_gap),
                        Vec::new(),
                        h.hypotheses.clone(),
                        tol,
                    );
                    let gap = if h.harmonic == h.scalar_condition { 0.0 } else { 1.0 };
                    r.abs_residual = gap;
                    r.rel_residual = gap;
                    r.verdict = h.verdict;
                    solitons.push(SolitonSummary {
                        check: name.clone(),
                        claim: "harmonic iff s^ν = −μ(m−n)".into(),
                        coefficient: "μ".into(),
                        value: mu_value,
                        spread: 0.0,
                        max_residual: h.max_tension.max(h.max_scalar_gap),
                        extras: vec![
                            ("max |τ|".into(), h.max_tension),
                            ("max |s^ν + μ(m−n)|".into(), h.max_scalar_gap),
                        ],
                        verdict: h.verdict,
                        flags: Vec::new(),
                        note: None,
                    });
                    records.push(r);
                    records.extend(h.trace_identity);
                }
                Err(e) => records.push(error_record("soliton", "harmonicity", &[], &e, tol)),
            },
            Check::Conformal(field) => {
                let spec = job.field(field).map(|f| f.spec.clone());
                let fit = spec
                    .ok_or_else(|| GeomError::Invalid(format!("unknown field {field}")))
                    .and_then(|spec| soliton::conformal_field_fit(&s.total, &spec, pts, tol));
                match fit {
                    Ok(c) => {
                        let fs: Vec<f64> = c.f_values.iter().map(|v| v.1).collect();
                        let mean = fs.iter().sum::<f64>() / fs.len().max(1) as f64;
                        let spread = fs.iter().cloned().fold(f64::NEG_INFINITY, f64::max)
                            - fs.iter().cloned().fold(f64::INFINITY, f64::min);
                        let spread = if spread.is_finite() { spread } else { 0.0 };
                        let claim = if c.is_killing { "killing" } else { "conformal" };
                        let mut r = ResidualReport::new(
                            "conformal",
                            &name,
                            &[],
                            format!("{claim} f={}", fmt_e(mean)),
                            Value::Scalar(c.max_residual),
                            Value::Scalar(0.0),
                            Vec::new(),
                            Vec::new(),
                            tol,
                        );
                        if r.verdict == Verdict::Fail {
                            r.note = Some("L_ξ g is not a multiple of g".into());
                        }
                        solitons.push(SolitonSummary {
                            check: name.clone(),
                            claim: claim.into(),
                            coefficient: "f".into(),
                            value: mean,
                            spread,
                            max_residual: c.max_residual,
                            extras: Vec::new(),
                            verdict: r.verdict,
                            flags: Vec::new(),
                            note: None,
                        });
                        records.push(r);
                    }
                    Err(e) => records.push(error_record("conformal", &name, &[], &e, tol)),
                }
            }
        }
    }
    let counts = Counts::of(&records);
    Ok(Report {
        job: summary,
        records,
        solitons,
        example: None,
        counts,
        meta: Meta { tol, seed, version: VERSION.into() },
    })
}

/// `run_job` on a catalog job plus the example's expected-value comparisons
/// at the job's points.
pub fn run_example_report(id: &str, job: &VerificationJob, seed: u64) -> Result<Report, ReportError> {
    let mut report = run_job(job, &format!("example {id}"), seed)?;
    let ex = catalog::run_example_with(id, job.tolerance, Some(&job.points), seed)?;
    report.records.extend(ex.records);
    report.records.extend(ex.mu_records);
    report.example = Some(ExampleSection { id: id.into(), comparisons: ex.comparisons, notes: ex.notes });
    report.counts = Counts::of(&report.records);
    Ok(report)
}

/// C-style `%.12e`; non-finite values render as `null` in JSON.
pub fn fmt_e(x: f64) -> String {
    if !x.is_finite() {
        return format!("{x}");
    }
    let s = format!("{x:.12e}");
    let (mant, exp) = s.split_once('e').expect("exponent present");
    let e: i32 = exp.parse().expect("integer exponent");
    format!("{mant}e{}{:02}", if e < 0 { '-' } else { '+' }, e.abs())
}

fn num(x: f64) -> Json {
    if x.is_finite() {
        Json::Number(fmt_e(x).parse::<Number>().expect("valid number literal"))
    } else {
        Json::Null
    }
}

fn nums(v: &[f64]) -> Json {
    Json::Array(v.iter().map(|x| num(*x)).collect())
}

fn value_json(v: &Value) -> Json {
    match v {
        Value::Scalar(x) => num(*x),
        Value::Vector(xs) => nums(xs),
    }
}

fn pairs_json(v: &[(String, f64)]) -> Json {
    Json::Array(
        v.iter()
            .map(|(n, x)| {
                let mut o = Map::new();
                o.insert("name".into(), Json::String(n.clone()));
                o.insert("value".into(), num(*x));
                Json::Object(o)
            })
            .collect(),
    )
}

fn strings(v: &[String]) -> Json {
    Json::Array(v.iter().cloned().map(Json::String).collect())
}

fn opt_string(v: &Option<String>) -> Json {
    v.clone().map_or(Json::Null, Json::String)
}

fn record_json(r: &ResidualReport) -> Json {
    let mut o = Map::new();
    o.insert("kind".into(), Json::String(r.kind.clone()));
    o.insert("identity_id".into(), Json::String(r.identity_id.clone()));
    o.insert("point".into(), nums(&r.point));
    o.insert("args".into(), Json::String(r.args.clone()));
    o.insert("lhs".into(), value_json(&r.lhs));
    o.insert("rhs".into(), value_json(&r.rhs));
    o.insert("abs_residual".into(), num(r.abs_residual));
    o.insert("rel_residual".into(), num(r.rel_residual));
    o.insert("terms".into(), pairs_json(&r.terms));
    let hyps = r
        .hypotheses
        .iter()
        .map(|h| {
            let mut m = Map::new();
            m.insert("name".into(), Json::String(h.name.clone()));
            m.insert("ok".into(), Json::Bool(h.ok));
            m.insert("violation".into(), num(h.violation));
            Json::Object(m)
        })
        .collect();
    o.insert("hypotheses".into(), Json::Array(hyps));
    o.insert("verdict".into(), Json::String(r.verdict.as_str().into()));
    o.insert("flags".into(), strings(&r.flags));
    o.insert("note".into(), opt_string(&r.note));
    Json::Object(o)
}

fn comparison_json(c: &Comparison) -> Json {
    let mut o = Map::new();
    o.insert("name".into(), Json::String(c.name.clone()));
    o.insert("category".into(), Json::String(c.category.as_str().into()));
    o.insert("provenance".into(), Json::String(c.provenance.as_str().into()));
    o.insert("point".into(), nums(&c.point));
    o.insert("expected".into(), value_json(&c.expected));
    o.insert("computed".into(), value_json(&c.computed));
    o.insert("abs_residual".into(), num(c.abs_residual));
    o.insert("rel_residual".into(), num(c.rel_residual));
    o.insert("verdict".into(), Json::String(c.verdict.as_str().into()));
    Json::Object(o)
}

pub fn to_json_value(r: &Report) -> Json {
    let j = &r.job;
    let mut job = Map::new();
    job.insert("source".into(), Json::String(j.source.clone()));
    job.insert("m".into(), Json::from(j.m));
    job.insert("n".into(), Json::from(j.n));
    job.insert("points".into(), Json::from(j.points));
    let mut lam = Map::new();
    lam.insert("min".into(), num(j.lambda_min));
    lam.insert("max".into(), num(j.lambda_max));
    job.insert("lambda".into(), Json::Object(lam));
    job.insert("max_anisotropy".into(), num(j.max_anisotropy));
    let st = j
        .structure
        .iter()
        .map(|s| {
            let mut o = Map::new();
            o.insert("name".into(), Json::String(s.name.clone()));
            o.insert("holds".into(), Json::Bool(s.holds));
            o.insert("max_violation".into(), num(s.max_violation));
            Json::Object(o)
        })
        .collect();
    job.insert("structure".into(), Json::Array(st));
    job.insert("checks".into(), strings(&j.checks));

    let solitons = r
        .solitons
        .iter()
        .map(|s| {
            let mut o = Map::new();
            o.insert("check".into(), Json::String(s.check.clone()));
            o.insert("claim".into(), Json::String(s.claim.clone()));
            o.insert("coefficient".into(), Json::String(s.coefficient.clone()));
            o.insert("value".into(), num(s.value));
            o.insert("spread".into(), num(s.spread));
            o.insert("max_residual".into(), num(s.max_residual));
            o.insert("extras".into(), pairs_json(&s.extras));
            o.insert("verdict".into(), Json::String(s.verdict.as_str().into()));
            o.insert("flags".into(), strings(&s.flags));
            o.insert("note".into(), opt_string(&s.note));
            Json::Object(o)
        })
        .collect();

    let example = match &r.example {
        None => Json::Null,
        Some(e) => {
            let mut o = Map::new();
            o.insert("id".into(), Json::String(e.id.clone()));
            o.insert("comparisons".into(), Json::Array(e.comparisons.iter().map(comparison_json).collect()));
            o.insert(
                "paper_divergent".into(),
                Json::Array(e.paper_divergent().into_iter().map(comparison_json).collect()),
            );
            o.insert("notes".into(), strings(&e.notes));
            Json::Object(o)
        }
    };

    let c = &r.counts;
    let mut counts = Map::new();
    counts.insert("pass".into(), Json::from(c.pass));
    counts.insert("fail".into(), Json::from(c.fail));
    counts.insert("hypothesis_not_met".into(), Json::from(c.hypothesis_not_met));
    counts.insert("paper_divergent".into(), Json::from(c.paper_divergent));

    let mut meta = Map::new();
    meta.insert("tol".into(), num(r.meta.tol));
    meta.insert("seed".into(), Json::from(r.meta.seed));
    meta.insert("version".into(), Json::String(r.meta.version.clone()));

    let mut top = Map::new();
    top.insert("job".into(), Json::Object(job));
    top.insert("records".into(), Json::Array(r.records.iter().map(record_json).collect()));
    top.insert("solitons".into(), Json::Array(solitons));
    top.insert("example".into(), example);
    top.insert("counts".into(), Json::Object(counts));
    top.insert("meta".into(), Json::Object(meta));
    Json::Object(top)
}

pub fn render_json(r: &Report) -> String {
    let mut s = serde_json::to_string_pretty(&to_json_value(r)).expect("json values serialize");
    s.push('\n');
    s
}

fn bad(what: &str) -> ReportError {
    ReportError::Json(format!("missing or malformed `{what}`"))
}

fn field<'a>(o: &'a Json, k: &str) -> Result<&'a Json, ReportError> {
    o.get(k).ok_or_else(|| bad(k))
}

fn f(o: &Json, k: &str) -> Result<f64, ReportError> {
    match field(o, k)? {
        Json::Null => Ok(f64::NAN),
        v => v.as_f64().ok_or_else(|| bad(k)),
    }
}

fn float_of(v: &Json, k: &str) -> Result<f64, ReportError> {
    match v {
        Json::Null => Ok(f64::NAN),
        v => v.as_f64().ok_or_else(|| bad(k)),
    }
}

fn u(o: &Json, k: &str) -> Result<u64, ReportError> {
    field(o, k)?.as_u64().ok_or_else(|| bad(k))
}

fn st(o: &Json, k: &str) -> Result<String, ReportError> {
    field(o, k)?.as_str().map(String::from).ok_or_else(|| bad(k))
}

fn arr<'a>(o: &'a Json, k: &str) -> Result<&'a Vec<Json>, ReportError> {
    field(o, k)?.as_array().ok_or_else(|| bad(k))
}

fn floats(o: &Json, k: &str) -> Result<Vec<f64>, ReportError> {
    arr(o, k)?.iter().map(|v| float_of(v, k)).collect()
}

fn strs(o: &Json, k: &str) -> Result<Vec<String>, ReportError> {
    arr(o, k)?.iter().map(|v| v.as_str().map(String::from).ok_or_else(|| bad(k))).collect()
}

fn value_of(o: &Json, k: &str) -> Result<Value, ReportError> {
    match field(o, k)? {
        Json::Array(xs) => Ok(Value::Vector(xs.iter().map(|v| float_of(v, k)).collect::<Result<_, _>>()?)),
        v => Ok(Value::Scalar(float_of(v, k)?)),
    }
}

fn verdict_of(o: &Json) -> Result<Verdict, ReportError> {
    Verdict::parse(&st(o, "verdict")?).ok_or_else(|| bad("verdict"))
}

fn note_of(o: &Json) -> Result<Option<String>, ReportError> {
    match field(o, "note")? {
        Json::Null => Ok(None),
        v => v.as_str().map(|s| Some(s.to_string())).ok_or_else(|| bad("note")),
    }
}

fn pairs_of(o: &Json, k: &str) -> Result<Vec<(String, f64)>, ReportError> {
    arr(o, k)?.iter().map(|t| Ok((st(t, "name")?, f(t, "value")?))).collect()
}

fn comparison_of(c: &Json) -> Result<Comparison, ReportError> {
    Ok(Comparison {
        name: st(c, "name")?,
        category: Category::parse(&st(c, "category")?).ok_or_else(|| bad("category"))?,
        provenance: Provenance::parse(&st(c, "provenance")?).ok_or_else(|| bad("provenance"))?,
        point: floats(c, "point")?,
        expected: value_of(c, "expected")?,
        computed: value_of(c, "computed")?,
        abs_residual: f(c, "abs_residual")?,
        rel_residual: f(c, "rel_residual")?,
        verdict: verdict_of(c)?,
    })
}

/// Inverse of `render_json`.
pub fn parse_json(src: &str) -> Result<Report, ReportError> {
    let top: Json = serde_json::from_str(src).map_err(|e| ReportError::Json(e.to_string()))?;
    let j = field(&top, "job")?;
    let lam = field(j, "lambda")?;
    let job = JobSummary {
        source: st(j, "source")?,
        m: u(j, "m")? as usize,
        n: u(j, "n")? as usize,
        points: u(j, "points")? as usize,
        lambda_min: f(lam, "min")?,
        lambda_max: f(lam, "max")?,
        max_anisotropy: f(j, "max_anisotropy")?,
        structure: arr(j, "structure")?
            .iter()
            .map(|s| {
                Ok(StructureRow {
                    name: st(s, "name")?,
                    holds: field(s, "holds")?.as_bool().ok_or_else(|| bad("holds"))?,
                    max_violation: f(s, "max_violation")?,
                })
            })
            .collect::<Result<_, ReportError>>()?,
        checks: strs(j, "checks")?,
    };
    let records = arr(&top, "records")?
        .iter()
        .map(|r| {
            Ok(ResidualReport {
                kind: st(r, "kind")?,
                identity_id: st(r, "identity_id")?,
                point: floats(r, "point")?,
                args: st(r, "args")?,
                lhs: value_of(r, "lhs")?,
                rhs: value_of(r, "rhs")?,
                abs_residual: f(r, "abs_residual")?,
                rel_residual: f(r, "rel_residual")?,
                terms: pairs_of(r, "terms")?,
                hypotheses: arr(r, "hypotheses")?
                    .iter()
                    .map(|h| {
                        Ok(Hypothesis {
                            name: st(h, "name")?,
                            ok: field(h, "ok")?.as_bool().ok_or_else(|| bad("ok"))?,
                            violation: f(h, "violation")?,
                        })
                    })
                    .collect::<Result<_, ReportError>>()?,
                verdict: verdict_of(r)?,
                flags: strs(r, "flags")?,
                note: note_of(r)?,
            })
        })
        .collect::<Result<Vec<_>, ReportError>>()?;
    let solitons = arr(&top, "solitons")?
        .iter()
        .map(|s| {
            Ok(SolitonSummary {
                check: st(s, "check")?,
                claim: st(s, "claim")?,
                coefficient: st(s, "coefficient")?,
                value: f(s, "value")?,
                spread: f(s, "spread")?,
                max_residual: f(s, "max_residual")?,
                extras: pairs_of(s, "extras")?,
                verdict: verdict_of(s)?,
                flags: strs(s, "flags")?,
                note: note_of(s)?,
            })
        })
        .collect::<Result<_, ReportError>>()?;
    let example = match field(&top, "example")? {
        Json::Null => None,
        e => Some(ExampleSection {
            id: st(e, "id")?,
            comparisons: arr(e, "comparisons")?.iter().map(comparison_of).collect::<Result<_, _>>()?,
            notes: strs(e, "notes")?,
        }),
    };
    let c = field(&top, "counts")?;
    let counts = Counts {
        pass: u(c, "pass")? as usize,
        fail: u(c, "fail")? as usize,
        hypothesis_not_met: u(c, "hypothesis_not_met")? as usize,
        paper_divergent: u(c, "paper_divergent")? as usize,
    };
    if counts != Counts::of(&records) {
        return Err(ReportError::Json("counts do not match the records".into()));
    }
    let m = field(&top, "meta")?;
    let meta = Meta { tol: f(m, "tol")?, seed: u(m, "seed")?, version: st(m, "version")? };
    Ok(Report { job, records, solitons, example, counts, meta })
}

fn show(v: &Value) -> String {
    match v {
        Value::Scalar(x) => fmt_e(*x),
        Value::Vector(xs) => format!("[{}]", xs.iter().map(|x| fmt_e(*x)).collect::<Vec<_>>().join(", ")),
    }
}

fn show_point(p: &[f64]) -> String {
    if p.is_empty() {
        "-".into()
    } else {
        format!("({})", p.iter().map(|x| format!("{x}")).collect::<Vec<_>>().join(", "))
    }
}

fn table(out: &mut String, header: &[&str], rows: &[Vec<String>]) {
    let mut w: Vec<usize> = header.iter().map(|h| h.chars().count()).collect();
    for r in rows {
        for (i, c) in r.iter().enumerate() {
            w[i] = w[i].max(c.chars().count());
        }
    }
    let line = |out: &mut String, cells: &mut dyn Iterator<Item = &str>| {
        let mut s = String::from(" ");
        for (i, c) in cells.enumerate() {
            let pad = w[i] - c.chars().count();
            s.push(' ');
            s.push_str(c);
            s.extend(std::iter::repeat(' ').take(pad + 1));
        }
        out.push_str(s.trim_end());
        out.push('\n');
    };
    line(out, &mut header.iter().copied());
    for r in rows {
        line(out, &mut r.iter().map(String::as_str));
    }
}

fn remarks(r: &ResidualReport) -> String {
    let mut parts: Vec<String> = r
        .hypotheses
        .iter()
        .filter(|h| !h.ok)
        .map(|h| format!("{} violated by {}", h.name, fmt_e(h.violation)))
        .collect();
    parts.extend(r.flags.iter().cloned());
    if let Some(n) = &r.note {
        parts.push(n.clone());
    }
    parts.join("; ")
}

/// Aligned plain-text tables carrying the same data as the JSON document.
pub fn render_text(r: &Report) -> String {
    let mut out = String::new();
    let j = &r.job;
    let _ = writeln!(out, "job        {}", j.source);
    let _ = writeln!(out, "dims       m = {}, n = {}", j.m, j.n);
    let _ = writeln!(out, "points     {}", j.points);
    let _ = writeln!(out, "lambda     [{}, {}]", fmt_e(j.lambda_min), fmt_e(j.lambda_max));
    let _ = writeln!(out, "anisotropy {}", fmt_e(j.max_anisotropy));
    let _ = writeln!(out, "checks     {}", j.checks.join(", "));
    let _ = writeln!(out, "tolerance  {}   seed {}   version {}", fmt_e(r.meta.tol), r.meta.seed, r.meta.version);

    out.push_str("\nstructure\n");
    let rows: Vec<Vec<String>> =
        j.structure.iter().map(|s| vec![s.name.clone(), s.holds.to_string(), fmt_e(s.max_violation)]).collect();
    table(&mut out, &["flag", "holds", "max violation"], &rows);

    let mut groups: Vec<(&str, &str)> = Vec::new();
    for rec in &r.records {
        let key = (rec.kind.as_str(), rec.identity_id.as_str());
        if !groups.contains(&key) {
            groups.push(key);
        }
    }
    for (kind, id) in groups {
        let _ = writeln!(out, "\n{kind} {id}");
        let rows: Vec<Vec<String>> = r
            .records
            .iter()
            .filter(|x| x.kind == kind && x.identity_id == id)
            .map(|x| {
                vec![
                    show_point(&x.point),
                    x.args.clone(),
                    show(&x.lhs),
                    show(&x.rhs),
                    fmt_e(x.abs_residual),
                    fmt_e(x.rel_residual),
                    x.verdict.as_str().into(),
                    remarks(x),
                ]
            })
            .collect();
        table(&mut out, &["point", "args", "lhs", "rhs", "abs", "rel", "verdict", "remarks"], &rows);
        for x in r.records.iter().filter(|x| x.kind == kind && x.identity_id == id && x.verdict != Verdict::Pass) {
            if !x.terms.is_empty() {
                let terms: Vec<String> = x.terms.iter().map(|(n, v)| format!("{n} = {}", fmt_e(*v))).collect();
                let _ = writeln!(out, "    terms at {} {}: {}", show_point(&x.point), x.args, terms.join(", "));
            }
        }
    }

    if !r.solitons.is_empty() {
        out.push_str("\nsoliton summaries\n");
        let rows: Vec<Vec<String>> = r
            .solitons
            .iter()
            .map(|s| {
                let mut rem: Vec<String> = s.extras.iter().map(|(n, v)| format!("{n} = {}", fmt_e(*v))).collect();
                rem.extend(s.flags.iter().cloned());
                rem.extend(s.note.iter().cloned());
                vec![
                    s.check.clone(),
                    s.claim.clone(),
                    s.coefficient.clone(),
                    fmt_e(s.value),
                    fmt_e(s.spread),
                    fmt_e(s.max_residual),
                    s.verdict.as_str().into(),
                    rem.join("; "),
                ]
            })
            .collect();
        table(&mut out, &["check", "claim", "coef", "value", "spread", "max residual", "verdict", "remarks"], &rows);
    }

    if let Some(e) = &r.example {
        let _ = writeln!(out, "\nexample {} comparisons", e.id);
        let row = |c: &Comparison| {
            vec![
                c.name.clone(),
                c.category.as_str().into(),
                c.provenance.as_str().into(),
                show_point(&c.point),
                show(&c.expected),
                show(&c.computed),
                fmt_e(c.abs_residual),
                c.verdict.as_str().into(),
            ]
        };
        let header = ["entry", "category", "provenance", "worst point", "expected", "computed", "abs", "verdict"];
        let rows: Vec<Vec<String>> = e.comparisons.iter().map(row).collect();
        table(&mut out, &header, &rows);
        let div = e.paper_divergent();
        let _ = writeln!(out, "\npaper-divergent ({})", div.len());
        let rows: Vec<Vec<String>> = div.into_iter().map(row).collect();
        table(&mut out, &header, &rows);
        for n in &e.notes {
            let _ = writeln!(out, "note: {n}");
        }
    }

    let c = &r.counts;
    let _ = writeln!(
        out,
        "\ncounts     pass {}  fail {}  hypothesis-not-met {}  paper-divergent {}",
        c.pass, c.fail, c.hypothesis_not_met, c.paper_divergent
    );
    out
}
