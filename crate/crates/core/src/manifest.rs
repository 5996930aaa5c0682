//! Keyed plain-text manifests describing a verification job.
//!
//! ```text
//! # comment
//! total.dim    = 2
//! total.coords = x1, x2
//! total.metric = exp(-2*x2), 0; 0, 1
//! total.domain = x1 != 0 && x2 != 0
//! base.dim     = 1
//! base.coords  = y1
//! base.metric  = 1
//! map.components = x1
//! map.lambda   = exp(x2)
//! fields.xi    = total: 0, 0
//! soliton.xi   = xi
//! soliton.mu   = 1
//! checks       = G2.12, P3.1, structure, fit-mu
//! points.list  = 1, 0.5; -1, 1
//! tolerance    = 1e-6
//! ```
//!
//! Lists are comma separated, grid rows `;` separated. Instead of
//! `points.list` a box may be given as `points.box = lo, hi; lo, hi` (one row
//! per total coordinate) with `points.count` and `points.seed`; box points
//! are drawn from `ChaCha8Rng::seed_from_u64(seed)`, one `gen_range(lo..hi)`
//! per coordinate in order, rejecting points outside either domain.

use std::collections::BTreeMap;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::expr::{parse_expression, parse_predicate, Expr, ParseError, ScalarFieldExpr};
use crate::riemann::{ChartManifold, GeomError, VectorFieldSpec};
use crate::submersion::SubmersionSetup;
use crate::verify::IDENTITY_IDS;

/// Report operations accepted in `checks` besides identity ids.
pub const REPORT_OPS: &[&str] = &[
    "structure",
    "dilation",
    "fit-mu",
    "fiber-soliton",
    "base-soliton",
    "scalar-mu",
    "harmonicity",
    "conformal",
];

#[derive(Debug, thiserror::Error)]
pub enum ManifestError {
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("missing key `{0}`")]
    MissingKey(String),
    #[error("schema violation: {0}")]
    Schema(String),
    #[error("key `{key}`: {source}")]
    Expr { key: String, source: ParseError },
    #[error("unresolved field `{0}`")]
    UnresolvedField(String),
    #[error("unknown check `{0}`")]
    UnknownCheck(String),
    #[error("point {0:?} lies outside the domain")]
    OutsideDomain(Vec<f64>),
    #[error(transparent)]
    Geom(#[from] GeomError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FieldTarget {
    Total,
    Base,
}

#[derive(Clone, Debug, PartialEq)]
pub struct NamedField {
    pub name: String,
    pub target: FieldTarget,
    pub spec: VectorFieldSpec,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Check {
    Identity(String),
    Structure,
    Dilation,
    FitMu,
    FiberSoliton,
    BaseSoliton,
    ScalarMu,
    Harmonicity,
    /// Conformal fit of a named total-space field.
    Conformal(String),
}

impl Check {
    pub fn name(&self) -> String {
        match self {
            Check::Identity(id) => id.clone(),
            Check::Structure => "structure".into(),
            Check::Dilation => "dilation".into(),
            Check::FitMu => "fit-mu".into(),
            Check::FiberSoliton => "fiber-soliton".into(),
            Check::BaseSoliton => "base-soliton".into(),
            Check::ScalarMu => "scalar-mu".into(),
            Check::Harmonicity => "harmonicity".into(),
            Check::Conformal(f) => format!("conformal:{f}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Sampling {
    List(Vec<Vec<f64>>),
    Box { ranges: Vec<(f64, f64)>, count: usize, seed: u64 },
}

#[derive(Clone, Debug, PartialEq)]
pub struct VerificationJob {
    pub setup: SubmersionSetup,
    pub fields: Vec<NamedField>,
    /// Name of the soliton potential field, if any.
    pub xi: Option<String>,
    pub mu: Option<f64>,
    pub checks: Vec<Check>,
    pub sampling: Sampling,
    pub points: Vec<Vec<f64>>,
    pub tolerance: f64,
}

/// Splits a document into `key → (line, value)`.
fn entries(doc: &str) -> Result<BTreeMap<String, (usize, String)>, ManifestError> {
    let mut out = BTreeMap::new();
    for (i, raw) in doc.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let Some((k, v)) = line.split_once('=') else {
            return Err(ManifestError::Syntax { line: i + 1, msg: "expected `key = value`".into() });
        };
        // `==`/`!=`/`<=`/`>=` only occur in values; the first `=` splits.
        let k = k.trim();
        if k.is_empty() || k.contains(char::is_whitespace) {
            return Err(ManifestError::Syntax { line: i + 1, msg: format!("bad key `{k}`") });
        }
        if out.insert(k.to_string(), (i + 1, v.trim().to_string())).is_some() {
            return Err(ManifestError::Syntax { line: i + 1, msg: format!("duplicate key `{k}`") });
        }
    }
    Ok(out)
}

struct Doc {
    map: BTreeMap<String, (usize, String)>,
}

impl Doc {
    fn get(&self, k: &str) -> Option<&str> {
        self.map.get(k).map(|v| v.1.as_str())
    }

    fn req(&self, k: &str) -> Result<&str, ManifestError> {
        self.get(k).ok_or_else(|| ManifestError::MissingKey(k.into()))
    }
}

fn list(v: &str) -> Vec<String> {
    v.split(',').map(|s| s.trim().to_string()).filter(|s| !s.is_empty()).collect()
}

fn grid(v: &str) -> Vec<Vec<String>> {
    v.split(';').map(list).collect()
}

fn number(key: &str, v: &str) -> Result<f64, ManifestError> {
    v.trim().parse().map_err(|_| ManifestError::Schema(format!("`{key}` expects a number, got `{v}`")))
}

fn expr(key: &str, src: &str, names: &[String]) -> Result<Expr, ManifestError> {
    parse_expression(src, names).map_err(|source| ManifestError::Expr { key: key.into(), source })
}

fn chart(doc: &Doc, prefix: &str) -> Result<ChartManifold, ManifestError> {
    let dim_key = format!("{prefix}.dim");
    let dim = number(&dim_key, doc.req(&dim_key)?)?;
    let coords = list(doc.req(&format!("{prefix}.coords"))?);
    if dim < 1.0 || dim.fract() != 0.0 || coords.len() != dim as usize {
        return Err(ManifestError::Schema(format!(
            "{prefix}.dim = {dim} but {} coordinates declared",
            coords.len()
        )));
    }
    let names: Arc<[String]> = coords.into();
    let mkey = format!("{prefix}.metric");
    let rows = grid(doc.req(&mkey)?);
    let d = names.len();
    if rows.len() != d || rows.iter().any(|r| r.len() != d) {
        return Err(ManifestError::Schema(format!(
            "{mkey} must be a {d}×{d} grid, got {} rows of lengths {:?}",
            rows.len(),
            rows.iter().map(|r| r.len()).collect::<Vec<_>>()
        )));
    }
    let metric = rows
        .iter()
        .map(|r| r.iter().map(|s| expr(&mkey, s, &names)).collect())
        .collect::<Result<_, _>>()?;
    let dkey = format!("{prefix}.domain");
    let domain = match doc.get(&dkey) {
        Some(src) => Some(
            parse_predicate(src, &names).map_err(|source| ManifestError::Expr { key: dkey, source })?,
        ),
        None => None,
    };
    Ok(ChartManifold { coords: names, metric, domain })
}

fn parse_checks(src: &str, has_soliton: bool) -> Result<Vec<Check>, ManifestError> {
    let mut out = Vec::new();
    for c in list(src) {
        if c == "all" {
            out.extend(IDENTITY_IDS.iter().map(|id| Check::Identity(id.to_string())));
            out.push(Check::Structure);
            out.push(Check::Dilation);
            if has_soliton {
                out.extend([
                    Check::FitMu,
                    Check::FiberSoliton,
                    Check::BaseSoliton,
                    Check::ScalarMu,
                    Check::Harmonicity,
                ]);
            }
            continue;
        }
        out.push(match c.as_str() {
            "structure" => Check::Structure,
            "dilation" => Check::Dilation,
            "fit-mu" => Check::FitMu,
            "fiber-soliton" => Check::FiberSoliton,
            "base-soliton" => Check::BaseSoliton,
            "scalar-mu" => Check::ScalarMu,
            "harmonicity" => Check::Harmonicity,
            id if IDENTITY_IDS.contains(&id) => Check::Identity(id.into()),
            other => match other.strip_prefix("conformal:") {
                Some(f) => Check::Conformal(f.trim().into()),
                None => return Err(ManifestError::UnknownCheck(other.into())),
            },
        });
    }
    Ok(out)
}

/// Parses a check list outside a manifest, e.g. from a command-line flag.
pub fn parse_check_list(src: &str, has_soliton: bool) -> Result<Vec<Check>, ManifestError> {
    parse_checks(src, has_soliton)
}

impl VerificationJob {
    fn in_domains(&self, p: &[f64]) -> Result<bool, GeomError> {
        if !self.setup.total.in_domain(p)? {
            return Ok(false);
        }
        let y = self.setup.base_point(p)?;
        Ok(self.setup.base.in_domain(&y)?)
    }

    /// Recomputes `points` from `sampling`, validating every point.
    pub fn resample(&mut self) -> Result<(), ManifestError> {
        let m = self.setup.m();
        self.points = match &self.sampling {
            Sampling::List(pts) => {
                for p in pts {
                    if p.len() != m {
                        return Err(ManifestError::Schema(format!(
                            "point {p:?} has {} coordinates, expected {m}",
                            p.len()
                        )));
                    }
                    if !self.in_domains(p)? {
                        return Err(ManifestError::OutsideDomain(p.clone()));
                    }
                }
                pts.clone()
            }
            Sampling::Box { ranges, count, seed } => {
                let mut rng = ChaCha8Rng::seed_from_u64(*seed);
                let mut out = Vec::with_capacity(*count);
                let mut tries = 0usize;
                while out.len() < *count {
                    tries += 1;
                    if tries > 1000 * count.max(&1) {
                        return Err(ManifestError::Schema(
                            "sampling box has too few points inside the domain".into(),
                        ));
                    }
                    let p: Vec<f64> = ranges.iter().map(|&(lo, hi)| rng.gen_range(lo..hi)).collect();
                    if self.in_domains(&p)? {
                        out.push(p);
                    }
                }
                out
            }
        };
        Ok(())
    }

    pub fn field(&self, name: &str) -> Option<&NamedField> {
        self.fields.iter().find(|f| f.name == name)
    }

    /// The soliton potential, or the zero field when none is declared.
    pub fn xi_spec(&self) -> VectorFieldSpec {
        match self.xi.as_deref().and_then(|n| self.field(n)) {
            Some(f) => f.spec.clone(),
            None => VectorFieldSpec { components: vec![Expr::Num(0.0); self.setup.m()] },
        }
    }

    /// Canonical manifest text; parsing it yields an equal job.
    pub fn to_manifest(&self) -> String {
        let mut s = String::new();
        let chart = |s: &mut String, prefix: &str, c: &ChartManifold| {
            s.push_str(&format!("{prefix}.dim = {}\n", c.dim()));
            s.push_str(&format!("{prefix}.coords = {}\n", c.coords.join(", ")));
            let rows: Vec<String> = c
                .metric
                .iter()
                .map(|r| r.iter().map(|e| e.render(&c.coords)).collect::<Vec<_>>().join(", "))
                .collect();
            s.push_str(&format!("{prefix}.metric = {}\n", rows.join("; ")));
            if let Some(d) = &c.domain {
                s.push_str(&format!("{prefix}.domain = {}\n", d.render(&c.coords)));
            }
        };
        let st = &self.setup;
        chart(&mut s, "total", &st.total);
        chart(&mut s, "base", &st.base);
        let comps: Vec<String> = st.map.iter().map(|f| f.ast.render(&st.total.coords)).collect();
        s.push_str(&format!("map.components = {}\n", comps.join(", ")));
        if let Some(l) = &st.lambda_declared {
            s.push_str(&format!("map.lambda = {}\n", l.render(&st.total.coords)));
        }
        for f in &self.fields {
            let (t, names) = match f.target {
                FieldTarget::Total => ("total", &st.total.coords),
                FieldTarget::Base => ("base", &st.base.coords),
            };
            let c: Vec<String> = f.spec.components.iter().map(|e| e.render(names)).collect();
            s.push_str(&format!("fields.{} = {t}: {}\n", f.name, c.join(", ")));
        }
        if let Some(x) = &self.xi {
            s.push_str(&format!("soliton.xi = {x}\n"));
        }
        if let Some(mu) = self.mu {
            s.push_str(&format!("soliton.mu = {mu:?}\n"));
        }
        let checks: Vec<String> = self.checks.iter().map(|c| c.name()).collect();
        s.push_str(&format!("checks = {}\n", checks.join(", ")));
        match &self.sampling {
            Sampling::List(pts) => {
                let rows: Vec<String> = pts
                    .iter()
                    .map(|p| p.iter().map(|v| format!("{v:?}")).collect::<Vec<_>>().join(", "))
                    .collect();
                s.push_str(&format!("points.list = {}\n", rows.join("; ")));
            }
            Sampling::Box { ranges, count, seed } => {
                let rows: Vec<String> = ranges.iter().map(|(a, b)| format!("{a:?}, {b:?}")).collect();
                s.push_str(&format!("points.box = {}\n", rows.join("; ")));
                s.push_str(&format!("points.count = {count}\npoints.seed = {seed}\n"));
            }
        }
        s.push_str(&format!("tolerance = {:?}\n", self.tolerance));
        s
    }
}

const KNOWN: &[&str] = &[
    "total.dim",
    "total.coords",
    "total.metric",
    "total.domain",
    "base.dim",
    "base.coords",
    "base.metric",
    "base.domain",
    "map.components",
    "map.lambda",
    "soliton.xi",
    "soliton.mu",
    "checks",
    "points.list",
    "points.box",
    "points.count",
    "points.seed",
    "tolerance",
];

pub fn parse_manifest(text: &str) -> Result<VerificationJob, ManifestError> {
    let doc = Doc { map: entries(text)? };
    for (k, (line, _)) in &doc.map {
        if !KNOWN.contains(&k.as_str()) && !k.starts_with("fields.") {
            return Err(ManifestError::Syntax { line: *line, msg: format!("unknown key `{k}`") });
        }
    }
    let total = chart(&doc, "total")?;
    let base = chart(&doc, "base")?;
    let comps = list(doc.req("map.components")?);
    if comps.len() != base.dim() {
        return Err(ManifestError::Schema(format!(
            "map.components has {} entries, base.dim is {}",
            comps.len(),
            base.dim()
        )));
    }
    let map = comps
        .iter()
        .map(|c| {
            ScalarFieldExpr::parse_in(c, &total.coords)
                .map_err(|source| ManifestError::Expr { key: "map.components".into(), source })
        })
        .collect::<Result<_, _>>()?;
    let lambda = match doc.get("map.lambda") {
        Some(src) => Some(expr("map.lambda", src, &total.coords)?),
        None => None,
    };
    let mut setup = SubmersionSetup::new(total, base, map)?;
    setup.lambda_declared = lambda;

    let mut fields = Vec::new();
    for (k, (_, v)) in doc.map.range("fields.".to_string()..) {
        let Some(name) = k.strip_prefix("fields.") else { break };
        let Some((t, body)) = v.split_once(':') else {
            return Err(ManifestError::Schema(format!("`{k}` expects `total: ...` or `base: ...`")));
        };
        let (target, names) = match t.trim() {
            "total" => (FieldTarget::Total, &setup.total.coords),
            "base" => (FieldTarget::Base, &setup.base.coords),
            other => return Err(ManifestError::Schema(format!("`{k}`: unknown target `{other}`"))),
        };
        let comps = list(body);
        if comps.len() != names.len() {
            return Err(ManifestError::Schema(format!(
                "`{k}` has {} components, expected {}",
                comps.len(),
                names.len()
            )));
        }
        let components = comps.iter().map(|c| expr(k, c, names)).collect::<Result<_, _>>()?;
        fields.push(NamedField { name: name.into(), target, spec: VectorFieldSpec { components } });
    }

    let xi = doc.get("soliton.xi").map(|s| s.to_string());
    if let Some(x) = &xi {
        match fields.iter().find(|f| &f.name == x) {
            Some(f) if f.target == FieldTarget::Total => {}
            Some(_) => return Err(ManifestError::Schema(format!("soliton.xi `{x}` must target total"))),
            None => return Err(ManifestError::UnresolvedField(x.clone())),
        }
    }
    let mu = doc.get("soliton.mu").map(|s| number("soliton.mu", s)).transpose()?;
    let checks = parse_checks(doc.get("checks").unwrap_or(""), xi.is_some() || mu.is_some())?;
    for c in &checks {
        if let Check::Conformal(f) = c {
            if !fields.iter().any(|g| &g.name == f && g.target == FieldTarget::Total) {
                return Err(ManifestError::UnresolvedField(f.clone()));
            }
        }
    }

    let sampling = match (doc.get("points.list"), doc.get("points.box")) {
        (Some(_), Some(_)) => {
            return Err(ManifestError::Schema("give either points.list or points.box".into()))
        }
        (Some(src), None) => Sampling::List(
            grid(src)
                .iter()
                .map(|r| r.iter().map(|v| number("points.list", v)).collect())
                .collect::<Result<_, _>>()?,
        ),
        (None, Some(src)) => {
            let rows = grid(src);
            let mut ranges = Vec::new();
            for r in &rows {
                if r.len() != 2 {
                    return Err(ManifestError::Schema("points.box rows are `lo, hi`".into()));
                }
                let (lo, hi) = (number("points.box", &r[0])?, number("points.box", &r[1])?);
                if !(lo < hi) {
                    return Err(ManifestError::Schema(format!("empty box range {lo}..{hi}")));
                }
                ranges.push((lo, hi));
            }
            if ranges.len() != setup.m() {
                return Err(ManifestError::Schema(format!(
                    "points.box has {} rows, expected {}",
                    ranges.len(),
                    setup.m()
                )));
            }
            let count = number("points.count", doc.req("points.count")?)?;
            let seed = number("points.seed", doc.get("points.seed").unwrap_or("0"))?;
            if count < 0.0 || count.fract() != 0.0 || seed < 0.0 || seed.fract() != 0.0 {
                return Err(ManifestError::Schema("points.count and points.seed are non-negative integers".into()));
            }
            Sampling::Box { ranges, count: count as usize, seed: seed as u64 }
        }
        (None, None) => return Err(ManifestError::MissingKey("points.list or points.box".into())),
    };
    let tolerance = match doc.get("tolerance") {
        Some(s) => number("tolerance", s)?,
        None => 1e-6,
    };
    if !(tolerance > 0.0) {
        return Err(ManifestError::Schema("tolerance must be positive".into()));
    }
    let mut job = VerificationJob { setup, fields, xi, mu, checks, sampling, points: vec![], tolerance };
    job.resample()?;
    Ok(job)
}
