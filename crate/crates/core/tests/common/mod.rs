//! Setups, a finite-difference curvature oracle and the property checks
//! shared by the property suite and the acceptance target.
#![allow(dead_code)]

use std::sync::Arc;

use cgeom::catalog::{load_example, EXAMPLE_IDS};
use cgeom::field::{cnst, oneill_a, oneill_t, Ctx};
use cgeom::jet::{eval_with_derivatives, lie_bracket};
use cgeom::riemann::unit;
use cgeom::verify::Verifier;
use cgeom::{ChartManifold, ScalarFieldExpr, SubmersionSetup, VectorFieldSpec};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub struct Case {
    pub name: String,
    pub s: SubmersionSetup,
    pub points: Vec<Vec<f64>>,
}

pub fn setup(tc: &[&str], tg: &[Vec<String>], bc: &[&str], bg: &[Vec<String>], map: &[&str]) -> SubmersionSetup {
    fn rows(g: &[Vec<String>]) -> Vec<Vec<&str>> {
        g.iter().map(|r| r.iter().map(|s| s.as_str()).collect()).collect()
    }
    let (tr, br) = (rows(tg), rows(bg));
    let tref: Vec<&[&str]> = tr.iter().map(|r| r.as_slice()).collect();
    let bref: Vec<&[&str]> = br.iter().map(|r| r.as_slice()).collect();
    let total = ChartManifold::new(tc, &tref).unwrap();
    let base = ChartManifold::new(bc, &bref).unwrap();
    let map = map.iter().map(|s| ScalarFieldExpr::parse_in(s, &total.coords).unwrap()).collect();
    SubmersionSetup::new(total, base, map).unwrap()
}

fn diag(entries: &[&str]) -> Vec<Vec<String>> {
    let n = entries.len();
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { entries[i].to_string() } else { "0".into() }).collect())
        .collect()
}

pub fn box_points(m: usize, count: usize, lo: f64, hi: f64, seed: u64) -> Vec<Vec<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|_| (0..m).map(|_| rng.gen_range(lo..hi)).collect()).collect()
}

/// Riemannian submersion `(x, u) ↦ x` with metric
/// `h(x) + Σ φ_i²(du_i + θ_i)²`; `θ = 0` gives a warped product.
/// The first `n` coordinates are the base ones.
pub fn riemannian_case(seed: u64, m: usize, n: usize, twisted: bool) -> Case {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut c = || format!("({:.4})", rng.gen_range(-0.5..0.5));
    let x = |i: usize| format!("x{}", i + 1);
    let y = |i: usize| format!("y{}", i + 1);
    let k = m - n;
    let hcoef: Vec<String> = (0..n).map(|_| c()).collect();
    let hb = |a: usize, v: &dyn Fn(usize) -> String| format!("(1 + {}^2*{}^2)", hcoef[a], v((a + 1) % n));
    let phi2: Vec<String> =
        (0..k).map(|i| format!("exp({}*x1 + {}*{}*{})", c(), c(), x(n - 1), x(n + i))).collect();
    let theta: Vec<Vec<String>> = (0..k)
        .map(|_| {
            (0..n)
                .map(|a| if twisted { format!("({}*{} + {}*{})", c(), x((a + 1) % n), c(), x(n)) } else { "0".into() })
                .collect()
        })
        .collect();
    let mut g = vec![vec![String::from("0"); m]; m];
    for a in 0..n {
        for b in 0..n {
            let mut e = if a == b { hb(a, &x) } else { "0".into() };
            if twisted {
                for i in 0..k {
                    e += &format!(" + {}*{}*{}", phi2[i], theta[i][a], theta[i][b]);
                }
            }
            g[a][b] = e;
        }
        for i in 0..k {
            if twisted {
                g[a][n + i] = format!("{}*{}", phi2[i], theta[i][a]);
                g[n + i][a] = g[a][n + i].clone();
            }
        }
    }
    for i in 0..k {
        g[n + i][n + i] = phi2[i].clone();
    }
    let h: Vec<Vec<String>> =
        (0..n).map(|a| (0..n).map(|b| if a == b { hb(a, &y) } else { "0".into() }).collect()).collect();
    let tc: Vec<String> = (0..m).map(x).collect();
    let bc: Vec<String> = (0..n).map(y).collect();
    let tc: Vec<&str> = tc.iter().map(|s| s.as_str()).collect();
    let bc: Vec<&str> = bc.iter().map(|s| s.as_str()).collect();
    let s = setup(&tc, &g, &bc, &h, &tc[..n]);
    let kind = if twisted { "twisted" } else { "warped" };
    Case { name: format!("{kind}-{m}-{n}-{seed}"), s, points: box_points(m, 20, -1.0, 1.0, seed ^ 0x5eed) }
}

/// λ ≡ 1 corpus: m ≤ 4, n ≤ 2, warped and twisted.
pub fn riemannian_cases() -> Vec<Case> {
    [(11, 2, 1, false), (12, 3, 1, true), (13, 3, 2, false), (14, 3, 2, true), (15, 4, 2, true), (16, 4, 1, true)]
        .into_iter()
        .map(|(seed, m, n, tw)| riemannian_case(seed, m, n, tw))
        .collect()
}

pub fn catalog_case(id: &str) -> Case {
    let (job, _) = load_example(id).unwrap();
    Case { name: format!("example {id}"), s: job.setup, points: job.points }
}

/// Conformal setups with non-constant λ that are not from the catalog.
pub fn extra_conformal_cases() -> Vec<Case> {
    let gen = setup(
        &["x1", "x2", "x3"],
        &diag(&["exp(2*(x1*x3 + x2))", "exp(2*(x1*x3 + x2))", "1 + x1^2"]),
        &["y1", "y2"],
        &diag(&["1", "1"]),
        &["x1", "x2"],
    );
    let gen2 = setup(
        &["x1", "x2", "x3", "x4"],
        &diag(&["exp(2*x3*x1)", "exp(2*x3*x1)", "1 + x4^2", "exp(x1)"]),
        &["y1", "y2"],
        &diag(&["1", "1"]),
        &["x1", "x2"],
    );
    vec![
        Case { name: "gen".into(), s: gen, points: box_points(3, 20, -1.0, 1.0, 7) },
        Case { name: "gen2".into(), s: gen2, points: box_points(4, 20, -1.0, 1.0, 8) },
    ]
}

/// Catalog examples plus the extra conformal setups.
pub fn conformal_cases() -> Vec<Case> {
    let mut v: Vec<Case> = EXAMPLE_IDS.iter().map(|id| catalog_case(id)).collect();
    v.extend(extra_conformal_cases());
    v
}

pub fn hyperbolic_plane() -> ChartManifold {
    ChartManifold::new(&["x", "y"], &[&["y^(-2)", "0"], &["0", "y^(-2)"]]).unwrap()
}

pub fn flat(m: usize) -> ChartManifold {
    let names: Vec<String> = (1..=m).map(|i| format!("x{i}")).collect();
    let names: Vec<&str> = names.iter().map(|s| s.as_str()).collect();
    let g = diag(&vec!["1"; m]);
    let rows: Vec<Vec<&str>> = g.iter().map(|r| r.iter().map(|s| s.as_str()).collect()).collect();
    let rows: Vec<&[&str]> = rows.iter().map(|r| r.as_slice()).collect();
    ChartManifold::new(&names, &rows).unwrap()
}

pub fn field(m: &ChartManifold, comps: &[&str]) -> VectorFieldSpec {
    VectorFieldSpec {
        components: comps.iter().map(|c| cgeom::parse_expression(c, &m.coords).unwrap()).collect(),
    }
}

/// Smooth vector field with random polynomial-trigonometric components.
pub fn random_field(m: &ChartManifold, rng: &mut ChaCha8Rng) -> VectorFieldSpec {
    let d = m.dim();
    let comps: Vec<String> = (0..d)
        .map(|_| {
            let (i, j, l) = (rng.gen_range(1..=d), rng.gen_range(1..=d), rng.gen_range(1..=d));
            format!(
                "({:.3}) + ({:.3})*x{i} + ({:.3})*x{j}*x{l} + ({:.3})*sin(x{l})",
                rng.gen_range(-1.0..1.0),
                rng.gen_range(-1.0..1.0),
                rng.gen_range(-1.0..1.0),
                rng.gen_range(-1.0..1.0)
            )
        })
        .collect();
    let renamed: Vec<String> = comps
        .iter()
        .map(|c| {
            let mut s = c.clone();
            for (i, name) in m.coords.iter().enumerate().rev() {
                s = s.replace(&format!("x{}", i + 1), name);
            }
            s
        })
        .collect();
    VectorFieldSpec {
        components: renamed.iter().map(|c| cgeom::parse_expression(c, &m.coords).unwrap()).collect(),
    }
}

pub fn random_vec(d: usize, rng: &mut ChaCha8Rng) -> Vec<f64> {
    (0..d).map(|_| rng.gen_range(-1.0..1.0)).collect()
}

// ------------------------------------------------------------ FD oracle

fn solve(a: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let n = a.len();
    let mut m: Vec<Vec<f64>> = a
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let mut row = r.clone();
            row.extend((0..n).map(|j| if i == j { 1.0 } else { 0.0 }));
            row
        })
        .collect();
    for c in 0..n {
        let piv = (c..n).max_by(|&i, &j| m[i][c].abs().total_cmp(&m[j][c].abs())).unwrap();
        m.swap(c, piv);
        let d = m[c][c];
        for v in m[c].iter_mut() {
            *v /= d;
        }
        for r in 0..n {
            if r != c {
                let f = m[r][c];
                let row_c = m[c].clone();
                for (v, w) in m[r].iter_mut().zip(row_c) {
                    *v -= f * w;
                }
            }
        }
    }
    m.into_iter().map(|r| r[n..].to_vec()).collect()
}

fn metric_f(m: &ChartManifold, p: &[f64]) -> Vec<Vec<f64>> {
    m.metric.iter().map(|r| r.iter().map(|e| e.eval(p, &m.coords).unwrap()).collect()).collect()
}

/// Five-point central difference of a vector-valued function along `e_i`.
fn d5<F: Fn(&[f64]) -> Vec<f64>>(f: &F, p: &[f64], i: usize, h: f64) -> Vec<f64> {
    let at = |t: f64| {
        let mut q = p.to_vec();
        q[i] += t;
        f(&q)
    };
    let (a, b, c, d) = (at(2.0 * h), at(h), at(-h), at(-2.0 * h));
    (0..a.len()).map(|k| (-a[k] + 8.0 * b[k] - 8.0 * c[k] + d[k]) / (12.0 * h)).collect()
}

const FD_H: f64 = 1e-3;

/// `Γ^k_ij` as `gam[k][i][j]` from finite differences of the metric.
pub fn fd_christoffel(m: &ChartManifold, p: &[f64]) -> Vec<Vec<Vec<f64>>> {
    let d = m.dim();
    let flat = |q: &[f64]| metric_f(m, q).concat();
    let dg: Vec<Vec<f64>> = (0..d).map(|i| d5(&flat, p, i, FD_H)).collect();
    let dgij = |l: usize, i: usize, j: usize| dg[l][i * d + j];
    let ginv = solve(&metric_f(m, p));
    let mut gam = vec![vec![vec![0.0; d]; d]; d];
    for k in 0..d {
        for i in 0..d {
            for j in 0..d {
                gam[k][i][j] = 0.5
                    * (0..d)
                        .map(|l| ginv[k][l] * (dgij(i, j, l) + dgij(j, i, l) - dgij(l, i, j)))
                        .sum::<f64>();
            }
        }
    }
    gam
}

/// Coordinate Ricci tensor `Ric_jk = R^i_{ijk}` by nested finite differences.
pub fn fd_ricci(m: &ChartManifold, p: &[f64]) -> Vec<Vec<f64>> {
    let d = m.dim();
    let gam = fd_christoffel(m, p);
    let flat = |q: &[f64]| fd_christoffel(m, q).concat().concat();
    let dgam: Vec<Vec<f64>> = (0..d).map(|i| d5(&flat, p, i, FD_H)).collect();
    let dg = |i: usize, l: usize, j: usize, k: usize| dgam[i][(l * d + j) * d + k];
    let mut ric = vec![vec![0.0; d]; d];
    for j in 0..d {
        for k in 0..d {
            let mut s = 0.0;
            for i in 0..d {
                s += dg(i, i, j, k) - dg(j, i, i, k);
                for q in 0..d {
                    s += gam[i][i][q] * gam[q][j][k] - gam[i][j][q] * gam[q][i][k];
                }
            }
            ric[j][k] = s;
        }
    }
    ric
}

pub fn fd_scalar(m: &ChartManifold, p: &[f64]) -> f64 {
    let ginv = solve(&metric_f(m, p));
    let ric = fd_ricci(m, p);
    let d = m.dim();
    (0..d).flat_map(|j| (0..d).map(move |k| (j, k))).map(|(j, k)| ginv[j][k] * ric[j][k]).sum()
}

// ------------------------------------------------------------ checks

/// Scalar fields used for the jet-vs-difference comparison.
pub fn expression_corpus() -> Vec<ScalarFieldExpr> {
    let c3 = ["x1", "x2", "x3"];
    let mut v: Vec<ScalarFieldExpr> = [
        "sin(x1)*exp(x2)",
        "log(1 + x1^2) / (2 + cos(x2))",
        "sqrt(x1*x2 + 1)",
        "x1^(3/2) * x2^(-1)",
        "exp(-2*x2)",
        "(x1 - x2)^3 + 4*x1*x2^2 - x3",
        "cos(x1*x2) - sin(x1 + x3)^2",
        "1 / (1 + x1^2 + x2^2 + x3^2)",
        "exp(sin(x1)) * log(x2 + x3)",
        "-x3^(-2) + x1^(1/3)",
    ]
    .iter()
    .map(|s| ScalarFieldExpr::parse(s, &c3).unwrap())
    .collect();
    for case in conformal_cases().into_iter().chain(riemannian_cases()) {
        let coords = case.s.total.coords.clone();
        for row in &case.s.total.metric {
            for e in row {
                v.push(ScalarFieldExpr { ast: e.clone(), coords: coords.clone() });
            }
        }
        v.extend(case.s.map.iter().cloned());
    }
    v
}

const H2: f64 = 1e-3;

/// Largest relative gap between jet and central-difference first (step `h`)
/// and second directional derivatives.
pub fn ad_vs_fd(f: &ScalarFieldExpr, p: &[f64], dirs: &[Vec<f64>], h: f64) -> (f64, f64) {
    let jet = eval_with_derivatives(f, p, dirs, 2).unwrap();
    let at = |a: &[f64], s: f64, b: &[f64], t: f64| {
        let q: Vec<f64> = (0..p.len()).map(|k| p[k] + s * a[k] + t * b[k]).collect();
        f.eval::<f64>(&q).unwrap()
    };
    let (mut e1, mut e2): (f64, f64) = (0.0, 0.0);
    for (i, a) in dirs.iter().enumerate() {
        let fd = (at(a, h, a, 0.0) - at(a, -h, a, 0.0)) / (2.0 * h);
        let ad = jet.first[&i];
        e1 = e1.max((ad - fd).abs() / (1.0 + ad.abs()));
        for (j, b) in dirs.iter().enumerate() {
            let mixed = |k: f64| (at(a, k, b, k) - at(a, k, b, -k) - at(a, -k, b, k) + at(a, -k, b, -k)) / (4.0 * k * k);
            // A 1e-5 step would drown in rounding (ε|f|/h²), so extrapolate from a wider one.
            let fd2 = (4.0 * mixed(H2 / 2.0) - mixed(H2)) / 3.0;
            let ad2 = jet.second[&(i, j)];
            e2 = e2.max((ad2 - fd2).abs() / (1.0 + ad2.abs()));
        }
    }
    (e1, e2)
}

fn rel(a: f64, scale: f64) -> f64 {
    a.abs() / (1.0 + scale.abs())
}

fn g_at(m: &ChartManifold, p: &[f64], a: &[f64], b: &[f64]) -> f64 {
    let g = metric_f(m, p);
    (0..a.len()).map(|i| (0..b.len()).map(|j| g[i][j] * a[i] * b[j]).sum::<f64>()).sum()
}

fn field_at(x: &VectorFieldSpec, m: &ChartManifold, p: &[f64]) -> Vec<f64> {
    x.components.iter().map(|e| e.eval(p, &m.coords).unwrap()).collect()
}

/// `X g(Y,Z) − g(∇_X Y, Z) − g(Y, ∇_X Z)` with the derivative taken by
/// differences along the integral direction of `X`.
pub fn metric_compatibility(
    m: &ChartManifold,
    p: &[f64],
    x: &VectorFieldSpec,
    y: &VectorFieldSpec,
    z: &VectorFieldSpec,
) -> f64 {
    let xv = field_at(x, m, p);
    let gyz = |t: f64| {
        let q: Vec<f64> = p.iter().zip(&xv).map(|(a, b)| a + t * b).collect();
        g_at(m, &q, &field_at(y, m, &q), &field_at(z, m, &q))
    };
    let d = |h: f64| (-gyz(2.0 * h) + 8.0 * gyz(h) - 8.0 * gyz(-h) + gyz(-2.0 * h)) / (12.0 * h);
    let lhs = (16.0 * d(FD_H / 2.0) - d(FD_H)) / 15.0;
    let a = g_at(m, p, &m.covariant_derivative(x, y, p).unwrap(), &field_at(z, m, p));
    let b = g_at(m, p, &field_at(y, m, p), &m.covariant_derivative(x, z, p).unwrap());
    rel(lhs - a - b, lhs.abs().max(a.abs()).max(b.abs()))
}

/// `|∇_X Y − ∇_Y X − [X,Y]|` against the jet bracket, plus `|Γ^k_ij − Γ^k_ji|`.
pub fn torsion(m: &ChartManifold, p: &[f64], x: &VectorFieldSpec, y: &VectorFieldSpec) -> f64 {
    let sfe = |v: &VectorFieldSpec| -> Vec<ScalarFieldExpr> {
        v.components.iter().map(|e| ScalarFieldExpr { ast: e.clone(), coords: m.coords.clone() }).collect()
    };
    let br = lie_bracket(&sfe(x), &sfe(y), p).unwrap();
    let a = m.covariant_derivative(x, y, p).unwrap();
    let b = m.covariant_derivative(y, x, p).unwrap();
    let mut worst: f64 = 0.0;
    for k in 0..m.dim() {
        worst = worst.max(rel(a[k] - b[k] - br[k], a[k].abs().max(b[k].abs())));
    }
    let gam = m.christoffel_symbols(p).unwrap();
    for k in 0..m.dim() {
        for i in 0..m.dim() {
            for j in 0..m.dim() {
                worst = worst.max(rel(gam[k][i][j] - gam[k][j][i], gam[k][i][j]));
            }
        }
    }
    worst
}

/// Pair antisymmetries, pair symmetry and first Bianchi of `R`, plus the
/// agreement of the component tensor with the field-composition route.
pub fn curvature_symmetries(m: &ChartManifold, p: &[f64], v: &[Vec<f64>; 4]) -> f64 {
    let [x, y, z, w] = v;
    let r4 = |a: &[f64], b: &[f64], c: &[f64], d: &[f64]| m.curvature4(p, a, b, c, d).unwrap();
    let base = r4(x, y, z, w);
    let mut worst = rel(base + r4(y, x, z, w), base)
        .max(rel(base + r4(x, y, w, z), base))
        .max(rel(base - r4(z, w, x, y), base));
    let c1 = m.curvature_vec(p, x, y, z).unwrap();
    let c2 = m.curvature_vec(p, y, z, x).unwrap();
    let c3 = m.curvature_vec(p, z, x, y).unwrap();
    let spec = |u: &[f64]| VectorFieldSpec { components: u.iter().map(|&c| cgeom::Expr::Num(c)).collect() };
    let via_fields = m.riemann_tensor(&spec(x), &spec(y), &spec(z), p).unwrap();
    for k in 0..m.dim() {
        let sc = c1[k].abs().max(c2[k].abs()).max(c3[k].abs());
        worst = worst.max(rel(c1[k] + c2[k] + c3[k], sc));
        worst = worst.max(rel(c1[k] - via_fields[k], c1[k]));
    }
    worst
}

fn mat_err(a: &[Vec<f64>], b: &[Vec<f64>]) -> f64 {
    a.iter().zip(b).flat_map(|(r, s)| r.iter().zip(s).map(|(x, y)| (x - y).abs())).fold(0.0, f64::max)
}

fn mul(a: &[Vec<f64>], b: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let n = a.len();
    (0..n).map(|i| (0..n).map(|j| (0..n).map(|k| a[i][k] * b[k][j]).sum()).collect()).collect()
}

/// `ℋ² = ℋ`, `ν² = ν`, `ℋ + ν = 1`, `F_*ν = 0` and `g(ℋa, νb) = 0`.
pub fn projector_errors(s: &SubmersionSetup, p: &[f64]) -> f64 {
    let h = s.horz_proj_at::<f64>(p).unwrap();
    let v = s.vert_proj_at::<f64>(p).unwrap();
    let m = s.m();
    let id: Vec<Vec<f64>> = (0..m).map(|i| unit(m, i)).collect();
    let sum: Vec<Vec<f64>> = (0..m).map(|i| (0..m).map(|j| h[i][j] + v[i][j]).collect()).collect();
    let mut worst = mat_err(&mul(&h, &h), &h).max(mat_err(&mul(&v, &v), &v)).max(mat_err(&sum, &id));
    let jac = s.jacobian(p).unwrap();
    let zero = vec![vec![0.0; m]; jac.len()];
    let jv: Vec<Vec<f64>> =
        jac.iter().map(|r| (0..m).map(|j| (0..m).map(|k| r[k] * v[k][j]).sum()).collect()).collect();
    worst = worst.max(mat_err(&jv, &zero));
    for a in 0..m {
        for b in 0..m {
            let ha: Vec<f64> = (0..m).map(|i| h[i][a]).collect();
            let vb: Vec<f64> = (0..m).map(|i| v[i][b]).collect();
            worst = worst.max(g_at(&s.total, p, &ha, &vb).abs());
        }
    }
    worst
}

/// Skew-symmetry of `T_E`, `A_E` and their swapping of the distributions.
pub fn oneill_errors(s: &SubmersionSetup, p: &[f64], v: &[Vec<f64>; 3]) -> (f64, f64) {
    let ctx = Ctx::setup(s);
    let hm = s.horz_proj_at::<f64>(p).unwrap();
    let vm = s.vert_proj_at::<f64>(p).unwrap();
    let app = |m: &[Vec<f64>], x: &[f64]| -> Vec<f64> {
        m.iter().map(|r| r.iter().zip(x).map(|(a, b)| a * b).sum()).collect()
    };
    let norm = |x: &[f64]| g_at(&s.total, p, x, x).max(0.0).sqrt();
    let g = |a: &[f64], b: &[f64]| g_at(&s.total, p, a, b);
    let [e, f, w] = v;
    let (mut skew, mut rev): (f64, f64) = (0.0, 0.0);
    for op in [oneill_t, oneill_a] {
        let at = |a: &[f64], b: &[f64]| ctx.at(&op(&cnst(a), &cnst(b)), p).unwrap();
        let (ef, ew) = (at(e, f), at(e, w));
        let lhs = g(&ef, w);
        let rhs = -g(f, &ew);
        skew = skew.max(rel(lhs - rhs, lhs.abs().max(norm(&ef) * norm(w))));
        // Vertical arguments go horizontal and horizontal ones vertical.
        let fv = app(&vm, f);
        let fh = app(&hm, f);
        let of_v = at(e, &fv);
        let of_h = at(e, &fh);
        rev = rev.max(rel(norm(&app(&vm, &of_v)), norm(&of_v)));
        rev = rev.max(rel(norm(&app(&hm, &of_h)), norm(&of_h)));
    }
    // T_E depends only on νE, A_E only on ℋE.
    let t_h = ctx.at(&oneill_t(&cnst(&app(&hm, e)), &cnst(f)), p).unwrap();
    let a_v = ctx.at(&oneill_a(&cnst(&app(&vm, e)), &cnst(f)), p).unwrap();
    rev = rev.max(norm(&t_h)).max(norm(&a_v));
    (skew, rev)
}

/// Largest relative residual over the records of one identity.
pub fn identity_max_rel(s: &SubmersionSetup, id: &str, p: &[f64], seed: u64) -> f64 {
    Verifier::new(s, 1e-8, seed)
        .run(id, p)
        .unwrap()
        .iter()
        .map(|r| r.rel_residual)
        .fold(0.0, f64::max)
}

pub fn scalar_fields_of(case: &Case) -> Vec<cgeom::Expr> {
    let mut v: Vec<cgeom::Expr> = case.s.total.metric.iter().flatten().cloned().collect();
    v.extend(case.s.map.iter().map(|f| f.ast.clone()));
    v
}

pub fn arc_names(names: &[&str]) -> Arc<[String]> {
    names.iter().map(|s| s.to_string()).collect()
}
