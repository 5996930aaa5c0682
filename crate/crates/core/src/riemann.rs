//! Geometry of a single coordinate chart: metric, Levi-Civita connection,
//! curvature and the first- and second-order calculus operators.
//!
//! Curvature convention: `R(X,Y)Z = ∇_X∇_Y Z − ∇_Y∇_X Z − ∇_[X,Y] Z` and
//! `Ric(X,Y) = Σ_a g(R(e_a,X)Y, e_a)`, so a space form of curvature `K` has
//! `Ric = (m−1)K g`.

use std::sync::Arc;

use crate::expr::{EvalError, Expr, ParseError, Pred};
use crate::field::{bracket, cnst, cov, grad, Ctx, SField, VField};
use crate::jet::{seed_point, values, DepthExceeded, Scalar};
use crate::linalg::{bilinear, inverse, is_positive_definite, Mat};

#[derive(Clone, Debug, PartialEq, thiserror::Error)]
pub enum GeomError {
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("degenerate metric at {point:?}")]
    Degenerate { point: Vec<f64> },
    #[error("map is not a submersion at {point:?} (rank-deficient Jacobian)")]
    NotSubmersion { point: Vec<f64> },
    #[error("linearly dependent frame input")]
    Dependent,
    #[error("{0}")]
    Invalid(String),
}

impl From<DepthExceeded> for GeomError {
    fn from(e: DepthExceeded) -> Self {
        GeomError::Eval(e.into())
    }
}

/// Chart with metric components given as expressions.
#[derive(Clone, Debug, PartialEq)]
pub struct ChartManifold {
    pub coords: Arc<[String]>,
    /// Row-major `dim × dim` grid; only the upper triangle is evaluated
    /// inside jets, the full grid is checked for symmetry at sample points.
    pub metric: Vec<Vec<Expr>>,
    pub domain: Option<Pred>,
}

/// Vector field given by coordinate-component expressions.
#[derive(Clone, Debug, PartialEq)]
pub struct VectorFieldSpec {
    pub components: Vec<Expr>,
}

impl VectorFieldSpec {
    pub fn field(&self) -> Arc<VField> {
        Arc::new(VField::Comps(self.components.clone()))
    }
}

/// Orthonormal vectors at one point with their cached Gram matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct Frame {
    pub vectors: Vec<Vec<f64>>,
    pub gram: Vec<Vec<f64>>,
}

impl ChartManifold {
    pub fn new(coords: &[&str], metric: &[&[&str]]) -> Result<Self, ParseError> {
        let names: Arc<[String]> = coords.iter().map(|s| s.to_string()).collect();
        let metric = metric
            .iter()
            .map(|row| row.iter().map(|s| crate::expr::parse_expression(s, &names)).collect())
            .collect::<Result<_, _>>()?;
        Ok(ChartManifold { coords: names, metric, domain: None })
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn in_domain(&self, p: &[f64]) -> Result<bool, EvalError> {
        match &self.domain {
            Some(d) => d.holds(p, &self.coords),
            None => Ok(true),
        }
    }

    pub fn ctx(&self) -> Ctx<'_> {
        Ctx::manifold(self)
    }

    pub fn metric_at<S: Scalar>(&self, x: &[S]) -> Result<Mat<S>, GeomError> {
        let m = self.dim();
        let mut g = vec![vec![S::cst(0.0); m]; m];
        for i in 0..m {
            for j in i..m {
                let v = self.metric[i][j].eval(x, &self.coords)?;
                g[i][j] = v;
                g[j][i] = v;
            }
        }
        Ok(g)
    }

    /// `∂_l g_ij` as `dg[l][i][j]`.
    fn metric_derivs<S: Scalar>(&self, x: &[S]) -> Result<Vec<Mat<S>>, GeomError> {
        let m = self.dim();
        let mut dir = vec![S::cst(0.0); m];
        let mut out = Vec::with_capacity(m);
        for l in 0..m {
            dir[l] = S::cst(1.0);
            let xs = seed_point(x, &dir)?;
            dir[l] = S::cst(0.0);
            let gu = self.metric_at(&xs)?;
            out.push(gu.into_iter().map(|r| r.into_iter().map(|v| S::split(v).1).collect()).collect());
        }
        Ok(out)
    }

    /// `Γ^k_ij` as `gam[k][i][j]`.
    pub fn christoffel_at<S: Scalar>(&self, x: &[S]) -> Result<Vec<Mat<S>>, GeomError> {
        let m = self.dim();
        let g = self.metric_at(x)?;
        let ginv = inverse(&g).ok_or_else(|| GeomError::Degenerate { point: values(x) })?;
        let dg = self.metric_derivs(x)?;
        let mut gam = vec![vec![vec![S::cst(0.0); m]; m]; m];
        for i in 0..m {
            for j in i..m {
                // lowered symbol Γ_{l,ij}
                let low: Vec<S> = (0..m)
                    .map(|l| (dg[i][j][l] + dg[j][i][l] - dg[l][i][j]).scale(0.5))
                    .collect();
                for k in 0..m {
                    let mut s = S::cst(0.0);
                    for l in 0..m {
                        s = s + ginv[k][l] * low[l];
                    }
                    gam[k][i][j] = s;
                    gam[k][j][i] = s;
                }
            }
        }
        Ok(gam)
    }

    /// `R^l_{ijk}` with `R(e_i,e_j)e_k = R^l_{ijk} e_l`, as `r[l][i][j][k]`.
    pub fn riemann_at<S: Scalar>(&self, x: &[S]) -> Result<Vec<Vec<Mat<S>>>, GeomError> {
        let m = self.dim();
        let gam = self.christoffel_at(x)?;
        let mut dgam = Vec::with_capacity(m);
        let mut dir = vec![S::cst(0.0); m];
        for i in 0..m {
            dir[i] = S::cst(1.0);
            let xs = seed_point(x, &dir)?;
            dir[i] = S::cst(0.0);
            let gu = self.christoffel_at(&xs)?;
            let d: Vec<Mat<S>> = gu
                .into_iter()
                .map(|a| a.into_iter().map(|r| r.into_iter().map(|v| S::split(v).1).collect()).collect())
                .collect();
            dgam.push(d);
        }
        let mut r = vec![vec![vec![vec![S::cst(0.0); m]; m]; m]; m];
        for l in 0..m {
            for i in 0..m {
                for j in 0..m {
                    for k in 0..m {
                        let mut s = dgam[i][l][j][k] - dgam[j][l][i][k];
                        for q in 0..m {
                            s = s + gam[l][i][q] * gam[q][j][k] - gam[l][j][q] * gam[q][i][k];
                        }
                        r[l][i][j][k] = s;
                    }
                }
            }
        }
        Ok(r)
    }

    // ------------------------------------------------------------ public ops

    /// Metric at `p`, checked symmetric and positive definite.
    pub fn metric_matrix(&self, p: &[f64]) -> Result<Mat<f64>, GeomError> {
        let m = self.dim();
        let mut g = vec![vec![0.0; m]; m];
        for i in 0..m {
            for j in 0..m {
                g[i][j] = self.metric[i][j].eval(p, &self.coords)?;
            }
        }
        for i in 0..m {
            for j in 0..i {
                if (g[i][j] - g[j][i]).abs() > 1e-12 * (1.0 + g[i][j].abs()) {
                    return Err(GeomError::Degenerate { point: p.to_vec() });
                }
            }
        }
        if !is_positive_definite(&g) {
            return Err(GeomError::Degenerate { point: p.to_vec() });
        }
        Ok(g)
    }

    pub fn christoffel_symbols(&self, p: &[f64]) -> Result<Vec<Mat<f64>>, GeomError> {
        self.christoffel_at(p)
    }

    /// `(∇_X Y)^k = X^i ∂_i Y^k + Γ^k_ij X^i Y^j`.
    pub fn covariant_derivative(
        &self,
        x: &VectorFieldSpec,
        y: &VectorFieldSpec,
        p: &[f64],
    ) -> Result<Vec<f64>, GeomError> {
        self.ctx().at(&cov(&x.field(), &y.field()), p)
    }

    /// `R(X,Y)Z` by composing covariant derivatives of the given fields.
    pub fn riemann_tensor(
        &self,
        x: &VectorFieldSpec,
        y: &VectorFieldSpec,
        z: &VectorFieldSpec,
        p: &[f64],
    ) -> Result<Vec<f64>, GeomError> {
        let (xf, yf, zf) = (x.field(), y.field(), z.field());
        curvature_of_fields(&self.ctx(), &xf, &yf, &zf, p)
    }

    /// `R(X,Y)Z` for vectors at `p`, from the component tensor.
    pub fn curvature_vec(
        &self,
        p: &[f64],
        x: &[f64],
        y: &[f64],
        z: &[f64],
    ) -> Result<Vec<f64>, GeomError> {
        let r = self.riemann_at(p)?;
        Ok(contract_r(&r, x, y, z))
    }

    /// `g(R(X,Y)Z, W)` at `p`.
    pub fn curvature4(
        &self,
        p: &[f64],
        x: &[f64],
        y: &[f64],
        z: &[f64],
        w: &[f64],
    ) -> Result<f64, GeomError> {
        let g = self.metric_at(p)?;
        Ok(bilinear(&g, &self.curvature_vec(p, x, y, z)?, w))
    }

    /// Ricci tensor in coordinates, traced over an orthonormal frame.
    pub fn ricci_matrix(&self, p: &[f64]) -> Result<Mat<f64>, GeomError> {
        let m = self.dim();
        let r = self.riemann_at(p)?;
        let g = self.metric_at(p)?;
        let frame = self.orthonormalize(p, &coordinate_basis(m))?;
        let mut ric = vec![vec![0.0; m]; m];
        for j in 0..m {
            for k in 0..m {
                let (ej, ek) = (unit(m, j), unit(m, k));
                let mut s = 0.0;
                for e in &frame.vectors {
                    s += bilinear(&g, &contract_r(&r, e, &ej, &ek), e);
                }
                ric[j][k] = s;
            }
        }
        Ok(ric)
    }

    /// `Ric(X,Y) = Σ_a g(R(e_a,X)Y, e_a)`.
    pub fn ricci(&self, x: &[f64], y: &[f64], p: &[f64]) -> Result<f64, GeomError> {
        Ok(bilinear(&self.ricci_matrix(p)?, x, y))
    }

    pub fn scalar_curvature(&self, p: &[f64]) -> Result<f64, GeomError> {
        self.scalar_curvature_with_seed(p, &coordinate_basis(self.dim()))
    }

    /// Scalar curvature traced over the frame built from `seed`.
    pub fn scalar_curvature_with_seed(
        &self,
        p: &[f64],
        seed: &[Vec<f64>],
    ) -> Result<f64, GeomError> {
        let ric = self.ricci_matrix(p)?;
        let frame = self.orthonormalize(p, seed)?;
        Ok(frame.vectors.iter().map(|e| bilinear(&ric, e, e)).sum())
    }

    /// Components `g^{ij} ∂_j f`.
    pub fn gradient(&self, f: &Expr, p: &[f64]) -> Result<Vec<f64>, GeomError> {
        self.ctx().at(&grad(&Arc::new(SField::Expr(f.clone()))), p)
    }

    /// `div X = Σ_a g(∇_{e_a} X, e_a)` over an orthonormal frame.
    pub fn divergence(&self, x: &VectorFieldSpec, p: &[f64]) -> Result<f64, GeomError> {
        divergence_of(&self.ctx(), &x.field(), p)
    }

    /// `Hess f(X,Y) = g(∇_X grad f, Y)`.
    pub fn hessian(&self, f: &Expr, x: &[f64], y: &[f64], p: &[f64]) -> Result<f64, GeomError> {
        let gf = grad(&Arc::new(SField::Expr(f.clone())));
        let v = self.ctx().at(&cov(&cnst(x), &gf), p)?;
        self.ctx().g(p, &v, y)
    }

    /// `Δf = div grad f`.
    pub fn laplacian(&self, f: &Expr, p: &[f64]) -> Result<f64, GeomError> {
        divergence_of(&self.ctx(), &grad(&Arc::new(SField::Expr(f.clone()))), p)
    }

    /// `(L_ξ g)(X,Y) = g(∇_X ξ, Y) + g(∇_Y ξ, X)`.
    pub fn lie_derivative_metric(
        &self,
        xi: &VectorFieldSpec,
        x: &[f64],
        y: &[f64],
        p: &[f64],
    ) -> Result<f64, GeomError> {
        lie_metric_of(&self.ctx(), &xi.field(), x, y, p)
    }

    /// Stabilized Gram–Schmidt in input order.
    pub fn orthonormalize(&self, p: &[f64], vectors: &[Vec<f64>]) -> Result<Frame, GeomError> {
        let g = self.metric_matrix(p)?;
        orthonormalize_with(&g, vectors)
    }
}

pub fn coordinate_basis(m: usize) -> Vec<Vec<f64>> {
    (0..m).map(|i| unit(m, i)).collect()
}

pub fn unit(m: usize, i: usize) -> Vec<f64> {
    let mut e = vec![0.0; m];
    e[i] = 1.0;
    e
}

pub fn contract_r(r: &[Vec<Mat<f64>>], x: &[f64], y: &[f64], z: &[f64]) -> Vec<f64> {
    let m = x.len();
    (0..m)
        .map(|l| {
            let mut s = 0.0;
            for i in 0..m {
                if x[i] == 0.0 {
                    continue;
                }
                for j in 0..m {
                    if y[j] == 0.0 {
                        continue;
                    }
                    for k in 0..m {
                        s += r[l][i][j][k] * x[i] * y[j] * z[k];
                    }
                }
            }
            s
        })
        .collect()
}

/// Gram–Schmidt with one reorthogonalization pass, relative to metric `g`.
pub fn orthonormalize_with(g: &Mat<f64>, vectors: &[Vec<f64>]) -> Result<Frame, GeomError> {
    let mut out: Vec<Vec<f64>> = Vec::with_capacity(vectors.len());
    for v in vectors {
        let n0 = bilinear(g, v, v).max(0.0).sqrt();
        let mut w = v.clone();
        for _ in 0..2 {
            for e in &out {
                let c = bilinear(g, &w, e);
                for (a, b) in w.iter_mut().zip(e) {
                    *a -= c * b;
                }
            }
        }
        let n = bilinear(g, &w, &w).max(0.0).sqrt();
        if !(n > 1e-10 * n0.max(1e-300)) || n0 == 0.0 {
            return Err(GeomError::Dependent);
        }
        out.push(w.iter().map(|a| a / n).collect());
    }
    let gram = out.iter().map(|a| out.iter().map(|b| bilinear(g, a, b)).collect()).collect();
    Ok(Frame { vectors: out, gram })
}

pub fn curvature_of_fields(
    ctx: &Ctx,
    x: &Arc<VField>,
    y: &Arc<VField>,
    z: &Arc<VField>,
    p: &[f64],
) -> Result<Vec<f64>, GeomError> {
    let a = ctx.at(&cov(x, &cov(y, z)), p)?;
    let b = ctx.at(&cov(y, &cov(x, z)), p)?;
    let c = ctx.at(&cov(&bracket(x, y), z), p)?;
    Ok((0..a.len()).map(|k| a[k] - b[k] - c[k]).collect())
}

/// `Σ_a g(∇_{e_a} X, e_a)` over the orthonormalized coordinate frame.
pub fn divergence_of(ctx: &Ctx, x: &Arc<VField>, p: &[f64]) -> Result<f64, GeomError> {
    let m = ctx.total.dim();
    let frame = ctx.total.orthonormalize(p, &coordinate_basis(m))?;
    let mut s = 0.0;
    for e in &frame.vectors {
        let v = ctx.at(&cov(&cnst(e), x), p)?;
        s += ctx.g(p, &v, e)?;
    }
    Ok(s)
}

pub fn lie_metric_of(
    ctx: &Ctx,
    xi: &Arc<VField>,
    x: &[f64],
    y: &[f64],
    p: &[f64],
) -> Result<f64, GeomError> {
    let a = ctx.at(&cov(&cnst(x), xi), p)?;
    let b = ctx.at(&cov(&cnst(y), xi), p)?;
    Ok(ctx.g(p, &a, y)? + ctx.g(p, &b, x)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse_expression;

    fn ex51() -> ChartManifold {
        ChartManifold::new(&["x1", "x2"], &[&["exp(-2*x2)", "0"], &["0", "1"]]).unwrap()
    }

    fn hyperbolic_plane() -> ChartManifold {
        ChartManifold::new(&["x", "y"], &[&["y^-2", "0"], &["0", "y^-2"]]).unwrap()
    }

    fn ex53() -> ChartManifold {
        ChartManifold::new(
            &["x1", "x2", "x3"],
            &[&["x3^-2", "0", "0"], &["0", "x3^-2", "0"], &["0", "0", "x3^-2"]],
        )
        .unwrap()
    }

    fn euclid(m: usize) -> ChartManifold {
        let names: Vec<String> = (1..=m).map(|i| format!("x{i}")).collect();
        let n: Vec<&str> = names.iter().map(|s| s.as_str()).collect();
        let rows: Vec<Vec<&str>> =
            (0..m).map(|i| (0..m).map(|j| if i == j { "1" } else { "0" }).collect()).collect();
        let r: Vec<&[&str]> = rows.iter().map(|r| r.as_slice()).collect();
        ChartManifold::new(&n, &r).unwrap()
    }

    fn vf(m: &ChartManifold, comps: &[&str]) -> VectorFieldSpec {
        VectorFieldSpec {
            components: comps.iter().map(|c| parse_expression(c, &m.coords).unwrap()).collect(),
        }
    }

    #[test]
    fn metric_examples() {
        assert_eq!(ex51().metric_matrix(&[0.0, 0.0]).unwrap(), vec![vec![1.0, 0.0], vec![0.0, 1.0]]);
        let m = ChartManifold::new(
            &["x1", "x2", "x3"],
            &[&["4", "0", "0"], &["0", "4", "0"], &["0", "0", "4"]],
        )
        .unwrap();
        let g = m.metric_matrix(&[0.3, -1.0, 2.0]).unwrap();
        assert_eq!(g, vec![vec![4.0, 0.0, 0.0], vec![0.0, 4.0, 0.0], vec![0.0, 0.0, 4.0]]);
        let bad = ChartManifold::new(&["x"], &[&["-1"]]).unwrap();
        assert!(matches!(bad.metric_matrix(&[0.0]), Err(GeomError::Degenerate { .. })));
    }

    #[test]
    fn christoffels_of_example_metrics() {
        let p = [0.7, 0.3];
        let gam = ex51().christoffel_symbols(&p).unwrap();
        assert!((gam[1][0][0] - (-0.6f64).exp()).abs() < 1e-14);
        assert!((gam[0][0][1] + 1.0).abs() < 1e-14);
        assert!((gam[0][1][0] + 1.0).abs() < 1e-14);
        assert_eq!(gam[0][0][0], 0.0);
        assert_eq!(gam[1][1][1], 0.0);
        let gam = ex53().christoffel_symbols(&[0.0, 0.0, 2.0]).unwrap();
        assert!((gam[2][0][0] - 0.5).abs() < 1e-14);
        assert!((gam[0][0][2] + 0.5).abs() < 1e-14);
    }

    #[test]
    fn covariant_derivative_examples() {
        let m = ex51();
        let e1 = vf(&m, &["1", "0"]);
        let v = m.covariant_derivative(&e1, &e1, &[0.0, 0.5]).unwrap();
        assert!((v[1] - (-1.0f64).exp()).abs() < 1e-14 && v[0] == 0.0);
        let m3 = ex53();
        let e3 = vf(&m3, &["0", "0", "1"]);
        let v = m3.covariant_derivative(&e3, &e3, &[0.0, 0.0, 4.0]).unwrap();
        assert!((v[2] + 0.25).abs() < 1e-14);
        let e = euclid(2);
        let c = vf(&e, &["1", "2"]);
        assert_eq!(e.covariant_derivative(&c, &c, &[1.0, 1.0]).unwrap(), vec![0.0, 0.0]);
    }

    #[test]
    fn hyperbolic_sectional_curvature() {
        let h = hyperbolic_plane();
        let (e1, e2) = (vf(&h, &["1", "0"]), vf(&h, &["0", "1"]));
        let r = h.riemann_tensor(&e1, &e2, &e2, &[0.0, 1.0]).unwrap();
        let g = h.metric_matrix(&[0.0, 1.0]).unwrap();
        assert!((bilinear(&g, &r, &[1.0, 0.0]) + 1.0).abs() < 1e-12);
        let r2 = h.curvature_vec(&[0.0, 1.0], &[1.0, 0.0], &[0.0, 1.0], &[0.0, 1.0]).unwrap();
        assert!((r[0] - r2[0]).abs() < 1e-12 && (r[1] - r2[1]).abs() < 1e-12);
    }

    #[test]
    fn space_form_ricci_and_scalar() {
        let h = hyperbolic_plane();
        assert!((h.ricci(&[1.0, 0.0], &[1.0, 0.0], &[0.0, 1.0]).unwrap() + 1.0).abs() < 1e-12);
        assert!((h.scalar_curvature(&[0.3, 2.0]).unwrap() + 2.0).abs() < 1e-12);
        let m = ex53();
        let p = [0.1, -0.4, 1.7];
        let ric = m.ricci_matrix(&p).unwrap();
        let g = m.metric_matrix(&p).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                assert!((ric[i][j] + 2.0 * g[i][j]).abs() < 1e-12);
            }
        }
        assert!((m.scalar_curvature(&p).unwrap() + 6.0).abs() < 1e-12);
        assert_eq!(euclid(3).scalar_curvature(&[1.0, 2.0, 3.0]).unwrap(), 0.0);
    }

    #[test]
    fn gradient_examples() {
        let e = euclid(2);
        let x1 = parse_expression("x1", &e.coords).unwrap();
        assert_eq!(e.gradient(&x1, &[0.4, 0.1]).unwrap(), vec![1.0, 0.0]);
        let m = ex51();
        let x2 = parse_expression("x2", &m.coords).unwrap();
        assert_eq!(m.gradient(&x2, &[0.4, 0.1]).unwrap(), vec![0.0, 1.0]);
        let c = parse_expression("3", &m.coords).unwrap();
        assert_eq!(m.gradient(&c, &[0.4, 0.1]).unwrap(), vec![0.0, 0.0]);
    }

    #[test]
    fn divergence_examples() {
        let e = euclid(2);
        assert!((e.divergence(&vf(&e, &["x1", "x2"]), &[0.3, 0.2]).unwrap() - 2.0).abs() < 1e-14);
        assert_eq!(e.divergence(&vf(&e, &["1", "-1"]), &[0.3, 0.2]).unwrap(), 0.0);
        // coordinate formula (1/√det g) ∂_i(√det g X^i): √det g = x3^-3, X = e3 → -3/x3 + ...
        // d/dx3 (x3^-3) / x3^-3 = -3/x3 → -1.5 at x3 = 2
        let m = ex53();
        let d = m.divergence(&vf(&m, &["0", "0", "1"]), &[0.0, 0.0, 2.0]).unwrap();
        assert!((d + 1.5).abs() < 1e-13);
    }

    #[test]
    fn hessian_and_laplacian() {
        let e = euclid(2);
        let f = parse_expression("x1^2", &e.coords).unwrap();
        assert!((e.hessian(&f, &[1.0, 0.0], &[1.0, 0.0], &[0.2, 0.3]).unwrap() - 2.0).abs() < 1e-14);
        let f = parse_expression("x1^2 + x2^2", &e.coords).unwrap();
        assert!((e.laplacian(&f, &[0.2, 0.3]).unwrap() - 4.0).abs() < 1e-14);
        let m = ex51();
        let f = parse_expression("exp(-2*x2)", &m.coords).unwrap();
        let p = [0.3, 0.4];
        let a = m.hessian(&f, &[1.0, 0.0], &[0.0, 1.0], &p).unwrap();
        let b = m.hessian(&f, &[0.0, 1.0], &[1.0, 0.0], &p).unwrap();
        assert!((a - b).abs() < 1e-9);
        let frame = m.orthonormalize(&p, &coordinate_basis(2)).unwrap();
        let tr: f64 = frame.vectors.iter().map(|v| m.hessian(&f, v, v, &p).unwrap()).sum();
        assert!((m.laplacian(&f, &p).unwrap() - tr).abs() < 1e-9);
    }

    #[test]
    fn lie_derivative_examples() {
        let e = euclid(2);
        let p = [0.7, -0.2];
        let dil = vf(&e, &["x1", "x2"]);
        let rot = vf(&e, &["-x2", "x1"]);
        let zero = vf(&e, &["0", "0"]);
        for (i, j) in [(0, 0), (0, 1), (1, 1)] {
            let (a, b) = (unit(2, i), unit(2, j));
            let d = if i == j { 2.0 } else { 0.0 };
            assert!((e.lie_derivative_metric(&dil, &a, &b, &p).unwrap() - d).abs() < 1e-14);
            assert!(e.lie_derivative_metric(&rot, &a, &b, &p).unwrap().abs() < 1e-14);
            assert_eq!(e.lie_derivative_metric(&zero, &a, &b, &p).unwrap(), 0.0);
        }
    }

    #[test]
    fn orthonormalize_examples() {
        let e = euclid(3);
        let f = e.orthonormalize(&[0.0; 3], &coordinate_basis(3)).unwrap();
        assert_eq!(f.vectors, coordinate_basis(3));
        let m = ex51();
        let f = m.orthonormalize(&[0.0, 1.0], &[vec![1.0, 0.0]]).unwrap();
        assert!((f.vectors[0][0] - 1f64.exp()).abs() < 1e-12);
        assert!((f.gram[0][0] - 1.0).abs() < 1e-10);
        let m4 = ChartManifold::new(
            &["x1", "x2", "x3"],
            &[&["4", "0", "0"], &["0", "4", "0"], &["0", "0", "4"]],
        )
        .unwrap();
        let f = m4.orthonormalize(&[0.0; 3], &coordinate_basis(3)).unwrap();
        for (i, v) in f.vectors.iter().enumerate() {
            assert_eq!(v[i], 0.5);
        }
        assert!(matches!(
            e.orthonormalize(&[0.0; 3], &[vec![1.0, 0.0, 0.0], vec![2.0, 0.0, 0.0]]),
            Err(GeomError::Dependent)
        ));
    }
}
