//! Lazily composed vector and scalar fields.
//!
//! A field is a small expression tree over geometric operations (covariant
//! derivative, bracket, projectors, lifts, gradients). Evaluating a node at a
//! jet point evaluates its children one jet level up wherever a derivative is
//! needed, so composites such as `∇_E (T_U E′)` stay exact to rounding.

use std::sync::Arc;

use crate::expr::Expr;
use crate::jet::{consts, lift_all, seed_point, Scalar};
use crate::linalg::{add, bilinear, dot, inverse, matvec, scale, Mat};
use crate::riemann::{ChartManifold, GeomError};
use crate::submersion::SubmersionSetup;

pub type V = Arc<VField>;
pub type Sf = Arc<SField>;

/// Vector field on the total manifold (coordinate components).
#[derive(Clone, Debug)]
pub enum VField {
    Const(Vec<f64>),
    Comps(Vec<Expr>),
    /// Horizontal lift of a base field given in base coordinates.
    Lift(Vec<Expr>),
    Vert(V),
    Horz(V),
    /// `∇_a b`.
    Cov(V, V),
    Bracket(V, V),
    Grad(Sf),
    Scale(Sf, V),
    Lin(Vec<(f64, V)>),
    /// Column `b` of `ν g⁻¹`; summing `T` over these gives the vertical trace.
    VertCoframe(usize),
}

/// Scalar field on the total manifold.
#[derive(Clone, Debug)]
pub enum SField {
    Const(f64),
    Expr(Expr),
    /// Averaged horizontal dilation `tr(h J g⁻¹ Jᵀ)/n`.
    LambdaSq,
    Inner(V, V),
    /// `X(f)`.
    Deriv(V, Sf),
    Mul(Sf, Sf),
    Recip(Sf),
    Lin(Vec<(f64, Sf)>),
}

// ---------------------------------------------------------------- builders

pub fn cnst(v: &[f64]) -> V {
    Arc::new(VField::Const(v.to_vec()))
}
pub fn vert(a: &V) -> V {
    Arc::new(VField::Vert(a.clone()))
}
pub fn horz(a: &V) -> V {
    Arc::new(VField::Horz(a.clone()))
}
pub fn cov(a: &V, b: &V) -> V {
    Arc::new(VField::Cov(a.clone(), b.clone()))
}
pub fn bracket(a: &V, b: &V) -> V {
    Arc::new(VField::Bracket(a.clone(), b.clone()))
}
pub fn lin(terms: Vec<(f64, V)>) -> V {
    Arc::new(VField::Lin(terms))
}
pub fn grad(f: &Sf) -> V {
    Arc::new(VField::Grad(f.clone()))
}
pub fn scaled(f: &Sf, a: &V) -> V {
    Arc::new(VField::Scale(f.clone(), a.clone()))
}
pub fn lift_const(c: &[f64]) -> V {
    Arc::new(VField::Lift(c.iter().map(|&x| Expr::Num(x)).collect()))
}

/// O'Neill `A_E E′ = ℋ∇_{ℋE} νE′ + ν∇_{ℋE} ℋE′`.
pub fn oneill_a(e: &V, ep: &V) -> V {
    let he = horz(e);
    lin(vec![(1.0, horz(&cov(&he, &vert(ep)))), (1.0, vert(&cov(&he, &horz(ep))))])
}

/// O'Neill `T_E E′ = ℋ∇_{νE} νE′ + ν∇_{νE} ℋE′`.
pub fn oneill_t(e: &V, ep: &V) -> V {
    let ve = vert(e);
    lin(vec![(1.0, horz(&cov(&ve, &vert(ep)))), (1.0, vert(&cov(&ve, &horz(ep))))])
}

/// `(∇_E T)_U E′ = ∇_E(T_U E′) − T_{ν∇_E U} E′ − T_U(∇_E E′)`.
pub fn cov_t(e: &V, u: &V, ep: &V) -> V {
    lin(vec![
        (1.0, cov(e, &oneill_t(u, ep))),
        (-1.0, oneill_t(&vert(&cov(e, u)), ep)),
        (-1.0, oneill_t(u, &cov(e, ep))),
    ])
}

/// `(∇_E A)_X E′ = ∇_E(A_X E′) − A_{ℋ∇_E X} E′ − A_X(∇_E E′)`.
pub fn cov_a(e: &V, x: &V, ep: &V) -> V {
    lin(vec![
        (1.0, cov(e, &oneill_a(x, ep))),
        (-1.0, oneill_a(&horz(&cov(e, x)), ep)),
        (-1.0, oneill_a(x, &cov(e, ep))),
    ])
}

pub fn lambda_sq() -> Sf {
    Arc::new(SField::LambdaSq)
}

pub fn inv_lambda_sq() -> Sf {
    Arc::new(SField::Recip(lambda_sq()))
}

/// `H′ = −(λ²/2) ∇_ν(1/λ²)`.
pub fn h_prime() -> V {
    let half_l2 = Arc::new(SField::Lin(vec![(-0.5, lambda_sq())]));
    scaled(&half_l2, &vert(&grad(&inv_lambda_sq())))
}

/// Fiber mean curvature `H = (1/(m−n)) Σ_i T_{U_i} U_i`.
pub fn mean_curvature(m: usize, n: usize) -> V {
    let k = (m - n) as f64;
    lin((0..m)
        .map(|b| {
            let mut e = vec![0.0; m];
            e[b] = 1.0;
            (1.0 / k, oneill_t(&Arc::new(VField::VertCoframe(b)), &cnst(&e)))
        })
        .collect())
}

// ---------------------------------------------------------------- evaluation

/// Evaluation context: a bare manifold or a full submersion setup.
#[derive(Clone, Copy)]
pub struct Ctx<'a> {
    pub total: &'a ChartManifold,
    pub sub: Option<&'a SubmersionSetup>,
}

impl<'a> Ctx<'a> {
    pub fn manifold(m: &'a ChartManifold) -> Self {
        Ctx { total: m, sub: None }
    }

    pub fn setup(s: &'a SubmersionSetup) -> Self {
        Ctx { total: &s.total, sub: Some(s) }
    }

    fn need_sub(&self) -> Result<&'a SubmersionSetup, GeomError> {
        self.sub.ok_or_else(|| GeomError::Invalid("operation needs a submersion setup".into()))
    }

    pub fn vec<S: Scalar>(&self, f: &VField, x: &[S]) -> Result<Vec<S>, GeomError> {
        let m = self.total.dim();
        Ok(match f {
            VField::Const(c) => consts(c),
            VField::Comps(c) => c
                .iter()
                .map(|e| e.eval(x, &self.total.coords))
                .collect::<Result<_, _>>()?,
            VField::Lift(c) => {
                let s = self.need_sub()?;
                let y = s.map_at(x)?;
                let yb: Vec<S> = c
                    .iter()
                    .map(|e| e.eval(&y, &s.base.coords))
                    .collect::<Result<_, _>>()?;
                s.lift_at(x, &yb)?
            }
            VField::Vert(a) => {
                let v = self.vec(a, x)?;
                matvec(&self.need_sub()?.vert_proj_at(x)?, &v)
            }
            VField::Horz(a) => {
                let v = self.vec(a, x)?;
                matvec(&self.need_sub()?.horz_proj_at(x)?, &v)
            }
            VField::Cov(a, b) => {
                let va = self.vec(a, x)?;
                let (vb, dvb) = self.along(b, x, &va)?;
                let gam = self.total.christoffel_at(x)?;
                (0..m)
                    .map(|k| {
                        let mut s = dvb[k];
                        for i in 0..m {
                            for j in 0..m {
                                s = s + gam[k][i][j] * va[i] * vb[j];
                            }
                        }
                        s
                    })
                    .collect()
            }
            VField::Bracket(a, b) => {
                let va = self.vec(a, x)?;
                let vb = self.vec(b, x)?;
                let (_, db) = self.along(b, x, &va)?;
                let (_, da) = self.along(a, x, &vb)?;
                db.iter().zip(&da).map(|(p, q)| *p - *q).collect()
            }
            VField::Grad(f) => {
                let df = self.sgrad_cov(f, x)?;
                let ginv = self.ginv(x)?;
                matvec(&ginv, &df)
            }
            VField::Scale(f, a) => {
                let c = self.scalar(f, x)?;
                scale(c, &self.vec(a, x)?)
            }
            VField::Lin(terms) => {
                let mut acc = vec![S::cst(0.0); m];
                for (c, t) in terms {
                    let v = self.vec(t, x)?;
                    acc = add(&acc, &v.iter().map(|z| z.scale(*c)).collect::<Vec<_>>());
                }
                acc
            }
            VField::VertCoframe(b) => {
                let nu = self.need_sub()?.vert_proj_at(x)?;
                let ginv = self.ginv(x)?;
                (0..m)
                    .map(|a| {
                        let mut s = S::cst(0.0);
                        for l in 0..m {
                            s = s + nu[a][l] * ginv[l][*b];
                        }
                        s
                    })
                    .collect()
            }
        })
    }

    pub fn scalar<S: Scalar>(&self, f: &SField, x: &[S]) -> Result<S, GeomError> {
        Ok(match f {
            SField::Const(c) => S::cst(*c),
            SField::Expr(e) => e.eval(x, &self.total.coords)?,
            SField::LambdaSq => self.need_sub()?.lambda_sq_at(x)?,
            SField::Inner(a, b) => {
                let g = self.total.metric_at(x)?;
                bilinear(&g, &self.vec(a, x)?, &self.vec(b, x)?)
            }
            SField::Deriv(v, f) => {
                let d = self.vec(v, x)?;
                let xs = seed_point(x, &d)?;
                S::split(self.scalar(f, &xs)?).1
            }
            SField::Mul(a, b) => self.scalar(a, x)? * self.scalar(b, x)?,
            SField::Recip(a) => {
                let v = self.scalar(a, x)?;
                if v.val() == 0.0 {
                    return Err(GeomError::Invalid("reciprocal of zero scalar field".into()));
                }
                S::cst(1.0) / v
            }
            SField::Lin(terms) => {
                let mut acc = S::cst(0.0);
                for (c, t) in terms {
                    acc = acc + self.scalar(t, x)?.scale(*c);
                }
                acc
            }
        })
    }

    /// Value of `b` at `x` and its directional derivative along `d`.
    fn along<S: Scalar>(
        &self,
        b: &VField,
        x: &[S],
        d: &[S],
    ) -> Result<(Vec<S>, Vec<S>), GeomError> {
        let xs = seed_point(x, d)?;
        let vb = self.vec(b, &xs)?;
        Ok(vb.into_iter().map(S::split).unzip())
    }

    /// Coordinate differential `∂_i f`.
    fn sgrad_cov<S: Scalar>(&self, f: &SField, x: &[S]) -> Result<Vec<S>, GeomError> {
        let m = x.len();
        let mut dir = vec![S::cst(0.0); m];
        let mut out = Vec::with_capacity(m);
        for i in 0..m {
            dir[i] = S::cst(1.0);
            let xs = seed_point(x, &dir)?;
            dir[i] = S::cst(0.0);
            out.push(S::split(self.scalar(f, &xs)?).1);
        }
        Ok(out)
    }

    fn ginv<S: Scalar>(&self, x: &[S]) -> Result<Mat<S>, GeomError> {
        let g = self.total.metric_at(x)?;
        inverse(&g).ok_or_else(|| GeomError::Degenerate { point: crate::jet::values(x) })
    }

    // ------------------------------------------------------------ f64 helpers

    pub fn at(&self, f: &VField, p: &[f64]) -> Result<Vec<f64>, GeomError> {
        self.vec::<f64>(f, p)
    }

    pub fn sat(&self, f: &SField, p: &[f64]) -> Result<f64, GeomError> {
        self.scalar::<f64>(f, p)
    }

    pub fn g(&self, p: &[f64], a: &[f64], b: &[f64]) -> Result<f64, GeomError> {
        Ok(bilinear(&self.total.metric_at::<f64>(p)?, a, b))
    }

    /// `g(field_a, field_b)` at `p`.
    pub fn gf(&self, p: &[f64], a: &VField, b: &VField) -> Result<f64, GeomError> {
        let (va, vb) = (self.at(a, p)?, self.at(b, p)?);
        self.g(p, &va, &vb)
    }

    pub fn norm(&self, p: &[f64], a: &[f64]) -> Result<f64, GeomError> {
        Ok(self.g(p, a, a)?.max(0.0).sqrt())
    }
}

/// `X(f)` for a vector at a point, evaluated with one seeded pass.
pub fn directional<S: Scalar>(
    ctx: &Ctx,
    f: &SField,
    x: &[S],
    d: &[S],
) -> Result<S, GeomError> {
    let xs = seed_point(x, d)?;
    Ok(S::split(ctx.scalar(f, &xs)?).1)
}

/// Lifts a point one jet level without seeding.
pub fn lifted<S: Scalar>(x: &[S]) -> Vec<S::Up> {
    lift_all(x)
}

pub fn dot_f(a: &[f64], b: &[f64]) -> f64 {
    dot(a, b)
}
