//! Structure attached to a map `F: (M,g) → (N,h)` between two charts.
//!
//! Projectors, dilation and lifts are written without frames so they stay
//! smooth under jet evaluation:
//! `ℋ = g⁻¹Jᵀ(Jg⁻¹Jᵀ)⁻¹J`, `ν = I − ℋ`, `λ² = tr(h(F) J g⁻¹ Jᵀ)/n`.

use std::sync::Arc;

use crate::expr::{Expr, ScalarFieldExpr};
use crate::field::{
    self, bracket, cnst, grad, horz, lambda_sq, lift_const, oneill_a, oneill_t, vert, Ctx, SField,
    VField, V,
};
use crate::jet::{jacobian_at, values, Scalar};
use crate::linalg::{bilinear, identity, inverse, matmul, matvec, null_space, sub, transpose, Mat};
use crate::riemann::{coordinate_basis, orthonormalize_with, ChartManifold, GeomError};

#[derive(Clone, Debug, PartialEq)]
pub struct SubmersionSetup {
    pub total: ChartManifold,
    pub base: ChartManifold,
    /// `n` components over the total coordinates.
    pub map: Vec<ScalarFieldExpr>,
    /// Optional user-declared λ, only cross-checked.
    pub lambda_declared: Option<Expr>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct DilationResult {
    pub lambda_sq: f64,
    pub anisotropy: f64,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Flag {
    pub holds: bool,
    pub max_violation: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct StructureFlags {
    pub fibers_totally_geodesic: Flag,
    pub fibers_totally_umbilical: Flag,
    pub horizontal_integrable: Flag,
    pub horizontal_totally_geodesic: Flag,
    pub homothetic: Flag,
    pub lambda_vertical_constant: Flag,
    pub map_totally_geodesic: Flag,
}

impl StructureFlags {
    pub fn entries(&self) -> [(&'static str, Flag); 7] {
        [
            ("fibers_totally_geodesic", self.fibers_totally_geodesic),
            ("fibers_totally_umbilical", self.fibers_totally_umbilical),
            ("horizontal_integrable", self.horizontal_integrable),
            ("horizontal_totally_geodesic", self.horizontal_totally_geodesic),
            ("homothetic", self.homothetic),
            ("lambda_vertical_constant", self.lambda_vertical_constant),
            ("map_totally_geodesic", self.map_totally_geodesic),
        ]
    }
}

/// Adapted frames at one point.
#[derive(Clone, Debug, PartialEq)]
pub struct Frames {
    /// g-orthonormal vertical vectors.
    pub vertical: Vec<Vec<f64>>,
    /// g-orthonormal horizontal vectors; `horizontal[j]` lifts `base_coeffs[j]`.
    pub horizontal: Vec<Vec<f64>>,
    pub base_coeffs: Vec<Vec<f64>>,
}

impl Frames {
    /// Vertical frame extended as the fields `ν(const)`.
    pub fn vertical_fields(&self) -> Vec<V> {
        self.vertical.iter().map(|u| vert(&cnst(u))).collect()
    }

    /// Horizontal frame extended as basic fields.
    pub fn horizontal_fields(&self) -> Vec<V> {
        self.base_coeffs.iter().map(|c| lift_const(c)).collect()
    }
}

/// Horizontal mean curvature by the A-trace and by the dilation formula.
#[derive(Clone, Debug, PartialEq)]
pub struct HorizontalMeanCurvature {
    pub via_a: Vec<f64>,
    pub via_formula: Vec<f64>,
    pub residual: f64,
    pub integrable: bool,
}

impl SubmersionSetup {
    pub fn new(
        total: ChartManifold,
        base: ChartManifold,
        map: Vec<ScalarFieldExpr>,
    ) -> Result<Self, GeomError> {
        if map.len() != base.dim() {
            return Err(GeomError::Invalid(format!(
                "map has {} components but the base has dimension {}",
                map.len(),
                base.dim()
            )));
        }
        if base.dim() >= total.dim() {
            return Err(GeomError::Invalid("base dimension must be below total dimension".into()));
        }
        Ok(SubmersionSetup { total, base, map, lambda_declared: None })
    }

    pub fn m(&self) -> usize {
        self.total.dim()
    }

    pub fn n(&self) -> usize {
        self.base.dim()
    }

    pub fn ctx(&self) -> Ctx<'_> {
        Ctx::setup(self)
    }

    // ------------------------------------------------------------ jet level

    pub fn map_at<S: Scalar>(&self, x: &[S]) -> Result<Vec<S>, GeomError> {
        Ok(self.map.iter().map(|c| c.eval(x)).collect::<Result<_, _>>()?)
    }

    pub fn jac_at<S: Scalar>(&self, x: &[S]) -> Result<Mat<S>, GeomError> {
        Ok(jacobian_at(&self.map, x)?)
    }

    /// `(g⁻¹Jᵀ(Jg⁻¹Jᵀ)⁻¹, J)`.
    fn pseudo_lift<S: Scalar>(&self, x: &[S]) -> Result<(Mat<S>, Mat<S>), GeomError> {
        let j = self.jac_at(x)?;
        let g = self.total.metric_at(x)?;
        let ginv = inverse(&g).ok_or_else(|| GeomError::Degenerate { point: values(x) })?;
        let gjt = matmul(&ginv, &transpose(&j));
        let k = matmul(&j, &gjt);
        let kinv = inverse(&k).ok_or_else(|| GeomError::NotSubmersion { point: values(x) })?;
        Ok((matmul(&gjt, &kinv), j))
    }

    pub fn horz_proj_at<S: Scalar>(&self, x: &[S]) -> Result<Mat<S>, GeomError> {
        let (l, j) = self.pseudo_lift(x)?;
        Ok(matmul(&l, &j))
    }

    pub fn vert_proj_at<S: Scalar>(&self, x: &[S]) -> Result<Mat<S>, GeomError> {
        let h = self.horz_proj_at(x)?;
        let id = identity::<S>(h.len());
        Ok(id.iter().zip(&h).map(|(a, b)| sub(a, b)).collect())
    }

    pub fn lambda_sq_at<S: Scalar>(&self, x: &[S]) -> Result<S, GeomError> {
        let j = self.jac_at(x)?;
        let g = self.total.metric_at(x)?;
        let ginv = inverse(&g).ok_or_else(|| GeomError::Degenerate { point: values(x) })?;
        let y = self.map_at(x)?;
        let h = self.base.metric_at(&y)?;
        let k = matmul(&j, &matmul(&ginv, &transpose(&j)));
        let hk = matmul(&h, &k);
        let mut tr = S::cst(0.0);
        for (i, row) in hk.iter().enumerate() {
            tr = tr + row[i];
        }
        Ok(tr.scale(1.0 / self.n() as f64))
    }

    /// Horizontal vector mapped by `J` onto `yb`.
    pub fn lift_at<S: Scalar>(&self, x: &[S], yb: &[S]) -> Result<Vec<S>, GeomError> {
        let (l, _) = self.pseudo_lift(x)?;
        Ok(matvec(&l, yb))
    }

    // ------------------------------------------------------------ f64 level

    pub fn jacobian(&self, p: &[f64]) -> Result<Mat<f64>, GeomError> {
        self.jac_at(p)
    }

    pub fn base_point(&self, p: &[f64]) -> Result<Vec<f64>, GeomError> {
        self.map_at(p)
    }

    pub fn push(&self, p: &[f64], v: &[f64]) -> Result<Vec<f64>, GeomError> {
        Ok(matvec(&self.jacobian(p)?, v))
    }

    /// `h(a, b)` at `F(p)`.
    pub fn h(&self, p: &[f64], a: &[f64], b: &[f64]) -> Result<f64, GeomError> {
        let y = self.base_point(p)?;
        Ok(bilinear(&self.base.metric_matrix(&y)?, a, b))
    }

    pub fn h_norm(&self, p: &[f64], a: &[f64]) -> Result<f64, GeomError> {
        Ok(self.h(p, a, a)?.max(0.0).sqrt())
    }

    pub fn vertical_horizontal_split(
        &self,
        p: &[f64],
        v: &[f64],
    ) -> Result<(Vec<f64>, Vec<f64>), GeomError> {
        let h = self.horz_proj_at(p)?;
        let hv = matvec(&h, v);
        Ok((sub(v, &hv), hv))
    }

    /// Vertical frame from a fixed-order null-space basis, and horizontal
    /// frame from lifts of base coordinate vectors orthonormalized for the
    /// pulled-back metric `(Jg⁻¹Jᵀ)⁻¹`.
    pub fn frames(&self, p: &[f64]) -> Result<Frames, GeomError> {
        let (m, n) = (self.m(), self.n());
        let g = self.total.metric_matrix(p)?;
        let j = self.jacobian(p)?;
        let ns = null_space(&j, m).ok_or_else(|| GeomError::NotSubmersion { point: p.to_vec() })?;
        let vertical = orthonormalize_with(&g, &ns)?.vectors;
        let (l, _) = self.pseudo_lift(p)?;
        let pulled = matmul(&transpose(&l), &matmul(&g, &l));
        let base_coeffs = orthonormalize_with(&pulled, &coordinate_basis(n))?.vectors;
        let horizontal = base_coeffs.iter().map(|c| matvec(&l, c)).collect();
        Ok(Frames { vertical, horizontal, base_coeffs })
    }

    pub fn dilation(&self, p: &[f64]) -> Result<DilationResult, GeomError> {
        let lambda_sq = self.lambda_sq_at(p)?;
        let fr = self.frames(p)?;
        let pushed: Vec<Vec<f64>> =
            fr.horizontal.iter().map(|x| self.push(p, x)).collect::<Result<_, _>>()?;
        let mut anisotropy: f64 = 0.0;
        for (i, a) in pushed.iter().enumerate() {
            for (k, b) in pushed.iter().enumerate() {
                let target = if i == k { lambda_sq } else { 0.0 };
                anisotropy = anisotropy.max((self.h(p, a, b)? - target).abs());
            }
        }
        Ok(DilationResult { lambda_sq, anisotropy })
    }

    /// `|λ_declared² − λ²|` when a λ was declared.
    pub fn declared_lambda_mismatch(&self, p: &[f64]) -> Result<Option<f64>, GeomError> {
        let Some(l) = &self.lambda_declared else { return Ok(None) };
        let v = l.eval(p, &self.total.coords)?;
        Ok(Some((v * v - self.lambda_sq_at(p)?).abs()))
    }

    pub fn horizontal_lift(&self, base_field: &[Expr], p: &[f64]) -> Result<Vec<f64>, GeomError> {
        self.ctx().at(&VField::Lift(base_field.to_vec()), p)
    }

    pub fn oneill_t(&self, p: &[f64], e: &V, ep: &V) -> Result<Vec<f64>, GeomError> {
        self.ctx().at(&oneill_t(e, ep), p)
    }

    pub fn oneill_a(&self, p: &[f64], e: &V, ep: &V) -> Result<Vec<f64>, GeomError> {
        self.ctx().at(&oneill_a(e, ep), p)
    }

    pub fn cov_deriv_t(&self, p: &[f64], e: &V, u: &V, ep: &V) -> Result<Vec<f64>, GeomError> {
        self.ctx().at(&field::cov_t(e, u, ep), p)
    }

    pub fn cov_deriv_a(&self, p: &[f64], e: &V, x: &V, ep: &V) -> Result<Vec<f64>, GeomError> {
        self.ctx().at(&field::cov_a(e, x, ep), p)
    }

    /// Normalized fiber mean curvature `H = trace_ν T / (m−n)`.
    pub fn mean_curvature(&self, p: &[f64]) -> Result<Vec<f64>, GeomError> {
        self.ctx().at(&field::mean_curvature(self.m(), self.n()), p)
    }

    /// Unnormalized trace `Σ_i T_{U_i}U_i`.
    pub fn mean_curvature_trace(&self, p: &[f64]) -> Result<Vec<f64>, GeomError> {
        let k = (self.m() - self.n()) as f64;
        Ok(self.mean_curvature(p)?.iter().map(|v| v * k).collect())
    }

    pub fn horizontal_mean_curvature(&self, p: &[f64]) -> Result<HorizontalMeanCurvature, GeomError> {
        let ctx = self.ctx();
        let fr = self.frames(p)?;
        let xs = fr.horizontal_fields();
        let n = self.n() as f64;
        let mut via_a = vec![0.0; self.m()];
        for x in &xs {
            let a = ctx.at(&oneill_a(x, x), p)?;
            via_a = crate::linalg::add(&via_a, &a);
        }
        via_a.iter_mut().for_each(|v| *v /= n);
        let via_formula = ctx.at(&field::h_prime(), p)?;
        let residual = ctx.norm(p, &sub(&via_a, &via_formula))?;
        let mut bracket_max: f64 = 0.0;
        for (i, a) in xs.iter().enumerate() {
            for b in &xs[i + 1..] {
                let v = ctx.at(&vert(&bracket(a, b)), p)?;
                bracket_max = bracket_max.max(ctx.norm(p, &v)?);
            }
        }
        Ok(HorizontalMeanCurvature { via_a, via_formula, residual, integrable: bracket_max <= 1e-9 })
    }

    /// `(∇F_*)(X,Y) = ∇^N_{F_*X}F_*Y − F_*(∇_X Y)` for basic `X`, `Y` given by
    /// base components.
    pub fn second_fundamental_form(
        &self,
        xt: &[Expr],
        yt: &[Expr],
        p: &[f64],
    ) -> Result<Vec<f64>, GeomError> {
        let y = self.base_point(p)?;
        if !self.base.in_domain(&y)? {
            return Err(GeomError::Invalid(format!("base point {y:?} outside the base chart domain")));
        }
        let bx = Arc::new(VField::Comps(xt.to_vec()));
        let by = Arc::new(VField::Comps(yt.to_vec()));
        let nabla_n = self.base.ctx().at(&field::cov(&bx, &by), &y)?;
        let lx = Arc::new(VField::Lift(xt.to_vec()));
        let ly = Arc::new(VField::Lift(yt.to_vec()));
        let nabla_m = self.ctx().at(&field::cov(&lx, &ly), p)?;
        Ok(sub(&nabla_n, &self.push(p, &nabla_m)?))
    }

    /// Tensorial form `(∂_X J)Y + Γ^N(JX,JY) − J Γ^M(X,Y)` on vectors at `p`.
    pub fn second_fundamental_form_vectors(
        &self,
        p: &[f64],
        x: &[f64],
        yv: &[f64],
    ) -> Result<Vec<f64>, GeomError> {
        let (m, n) = (self.m(), self.n());
        let xs = crate::jet::seed_point(p, x)?;
        let dj: Mat<f64> = self
            .jac_at(&xs)?
            .into_iter()
            .map(|r| r.into_iter().map(|v| v.du).collect())
            .collect();
        let j = self.jacobian(p)?;
        let (jx, jy) = (matvec(&j, x), matvec(&j, yv));
        let gam_n = self.base.christoffel_at(&self.base_point(p)?)?;
        let gam_m = self.total.christoffel_at(p)?;
        let gm: Vec<f64> = (0..m)
            .map(|k| {
                let mut s = 0.0;
                for a in 0..m {
                    for b in 0..m {
                        s += gam_m[k][a][b] * x[a] * yv[b];
                    }
                }
                s
            })
            .collect();
        let jgm = matvec(&j, &gm);
        Ok((0..n)
            .map(|c| {
                let mut s = matvec(&dj, yv)[c] - jgm[c];
                for a in 0..n {
                    for b in 0..n {
                        s += gam_n[c][a][b] * jx[a] * jy[b];
                    }
                }
                s
            })
            .collect())
    }

    /// Tension via the submersion decomposition
    /// `τ = (n−2)(λ²/2) F_*(∇_ℋ(1/λ²)) − (m−n) F_*(H)`.
    pub fn tension_field(&self, p: &[f64]) -> Result<Vec<f64>, GeomError> {
        let ctx = self.ctx();
        let (m, n) = (self.m() as f64, self.n() as f64);
        let l2 = ctx.sat(&SField::LambdaSq, p)?;
        let gh = ctx.at(&horz(&grad(&field::inv_lambda_sq())), p)?;
        let h = self.mean_curvature(p)?;
        let a = self.push(p, &gh)?;
        let b = self.push(p, &h)?;
        Ok(a.iter().zip(&b).map(|(u, v)| (n - 2.0) * l2 / 2.0 * u - (m - n) * v).collect())
    }

    /// Tension as the trace of `∇F_*` over an orthonormal frame of `M`.
    pub fn tension_trace(&self, p: &[f64]) -> Result<Vec<f64>, GeomError> {
        let frame = self.total.orthonormalize(p, &coordinate_basis(self.m()))?;
        let mut acc = vec![0.0; self.n()];
        for e in &frame.vectors {
            acc = crate::linalg::add(&acc, &self.second_fundamental_form_vectors(p, e, e)?);
        }
        Ok(acc)
    }

    /// `Ric^ν(U,V)` through the Gauss equation.
    pub fn fiber_ricci(&self, u: &[f64], v: &[f64], p: &[f64]) -> Result<f64, GeomError> {
        let ctx = self.ctx();
        let fr = self.frames(p)?;
        let t = |a: &[f64], b: &[f64]| ctx.at(&oneill_t(&cnst(a), &cnst(b)), p);
        let tuv = t(u, v)?;
        let mut s = 0.0;
        for ui in &fr.vertical {
            s += self.total.curvature4(p, ui, u, v, ui)?;
            s -= ctx.g(p, &t(ui, v)?, &t(u, ui)?)?;
            s += ctx.g(p, &tuv, &t(ui, ui)?)?;
        }
        Ok(s)
    }

    /// `g(R^ν(U,V)W, S)` from the induced fiber connection `ν∇`, with the
    /// vectors extended as `ν(const)` fields.
    pub fn fiber_curvature4(
        &self,
        p: &[f64],
        u: &[f64],
        v: &[f64],
        w: &[f64],
        s: &[f64],
    ) -> Result<f64, GeomError> {
        let ctx = self.ctx();
        let (uf, vf, wf) = (vert(&cnst(u)), vert(&cnst(v)), vert(&cnst(w)));
        let nab = |a: &V, b: &V| vert(&field::cov(a, b));
        let r = field::lin(vec![
            (1.0, nab(&uf, &nab(&vf, &wf))),
            (-1.0, nab(&vf, &nab(&uf, &wf))),
            (-1.0, nab(&bracket(&uf, &vf), &wf)),
        ]);
        ctx.g(p, &ctx.at(&r, p)?, s)
    }

    /// `Ric^ν(U,V)` from the induced fiber connection.
    pub fn fiber_ricci_intrinsic(&self, u: &[f64], v: &[f64], p: &[f64]) -> Result<f64, GeomError> {
        let fr = self.frames(p)?;
        let mut s = 0.0;
        for ui in &fr.vertical {
            s += self.fiber_curvature4(p, ui, u, v, ui)?;
        }
        Ok(s)
    }

    /// Scalar curvature of the fibers, `Σ_i Ric^ν(U_i,U_i)`.
    pub fn fiber_scalar_curvature(&self, p: &[f64]) -> Result<f64, GeomError> {
        let fr = self.frames(p)?;
        let mut s = 0.0;
        for u in &fr.vertical {
            s += self.fiber_ricci_intrinsic(u, u, p)?;
        }
        Ok(s)
    }

    /// Gradient of `λ = √λ²`.
    pub fn grad_lambda(&self, p: &[f64]) -> Result<Vec<f64>, GeomError> {
        let ctx = self.ctx();
        let l = ctx.sat(&SField::LambdaSq, p)?.sqrt();
        let g2 = ctx.at(&grad(&lambda_sq()), p)?;
        Ok(g2.iter().map(|v| v / (2.0 * l)).collect())
    }

    pub fn structure_flags(&self, points: &[Vec<f64>], tol: f64) -> Result<StructureFlags, GeomError> {
        let mut v = [0.0f64; 7];
        for p in points {
            let w = self.structure_violations(p)?;
            for (a, b) in v.iter_mut().zip(w) {
                *a = a.max(b);
            }
        }
        let f = |x: f64| Flag { holds: x <= tol, max_violation: x };
        Ok(StructureFlags {
            fibers_totally_geodesic: f(v[0]),
            fibers_totally_umbilical: f(v[1]),
            horizontal_integrable: f(v[2]),
            horizontal_totally_geodesic: f(v[3]),
            homothetic: f(v[4]),
            lambda_vertical_constant: f(v[5]),
            map_totally_geodesic: f(v[6]),
        })
    }

    /// Violation magnitudes at one point, in [`StructureFlags::entries`] order.
    pub fn structure_violations(&self, p: &[f64]) -> Result<[f64; 7], GeomError> {
        let ctx = self.ctx();
        let fr = self.frames(p)?;
        let us = fr.vertical_fields();
        let xs = fr.horizontal_fields();
        let h = self.mean_curvature(p)?;
        let mut out = [0.0f64; 7];
        for (i, a) in us.iter().enumerate() {
            for (k, b) in us.iter().enumerate() {
                let t = ctx.at(&oneill_t(a, b), p)?;
                out[0] = out[0].max(ctx.norm(p, &t)?);
                let d = if i == k { h.clone() } else { vec![0.0; h.len()] };
                out[1] = out[1].max(ctx.norm(p, &sub(&t, &d))?);
            }
        }
        for a in &xs {
            for b in &xs {
                let br = ctx.at(&vert(&bracket(a, b)), p)?;
                out[2] = out[2].max(ctx.norm(p, &br)?);
                let aa = ctx.at(&oneill_a(a, b), p)?;
                out[3] = out[3].max(ctx.norm(p, &aa)?);
            }
        }
        let gl = self.grad_lambda(p)?;
        let (nu, hz) = self.vertical_horizontal_split(p, &gl)?;
        out[4] = ctx.norm(p, &hz)?;
        out[5] = ctx.norm(p, &nu)?;
        let frame = self.total.orthonormalize(p, &coordinate_basis(self.m()))?;
        for a in &frame.vectors {
            for b in &frame.vectors {
                let s = self.second_fundamental_form_vectors(p, a, b)?;
                out[6] = out[6].max(self.h_norm(p, &s)?);
            }
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse_expression;

    fn setup(
        tc: &[&str],
        tg: &[&[&str]],
        bc: &[&str],
        bg: &[&[&str]],
        map: &[&str],
    ) -> SubmersionSetup {
        let total = ChartManifold::new(tc, tg).unwrap();
        let base = ChartManifold::new(bc, bg).unwrap();
        let map = map.iter().map(|s| ScalarFieldExpr::parse_in(s, &total.coords).unwrap()).collect();
        SubmersionSetup::new(total, base, map).unwrap()
    }

    fn ex51() -> SubmersionSetup {
        setup(&["x1", "x2"], &[&["exp(-2*x2)", "0"], &["0", "1"]], &["y1"], &[&["1"]], &["x1"])
    }

    fn ex53() -> SubmersionSetup {
        setup(
            &["x1", "x2", "x3"],
            &[&["x3^-2", "0", "0"], &["0", "x3^-2", "0"], &["0", "0", "x3^-2"]],
            &["y1", "y2"],
            &[&["1", "0"], &["0", "1"]],
            &["x2", "x3"],
        )
    }

    fn ex54() -> SubmersionSetup {
        setup(
            &["x1", "x2", "x3"],
            &[&["4", "0", "0"], &["0", "4", "0"], &["0", "0", "4"]],
            &["y1", "y2"],
            &[&["1", "0"], &["0", "1"]],
            &["x1", "x2"],
        )
    }

    fn close(a: &[f64], b: &[f64], tol: f64) -> bool {
        a.iter().zip(b).all(|(x, y)| (x - y).abs() <= tol)
    }

    #[test]
    fn split_examples() {
        let s = ex51();
        let p = [0.3, 0.4];
        let (v, h) = s.vertical_horizontal_split(&p, &[0.0, 1.0]).unwrap();
        assert!(close(&v, &[0.0, 1.0], 1e-15) && close(&h, &[0.0, 0.0], 1e-15));
        let (v, h) = s.vertical_horizontal_split(&p, &[1.0, 0.0]).unwrap();
        assert!(close(&v, &[0.0, 0.0], 1e-15) && close(&h, &[1.0, 0.0], 1e-15));
        let bad = setup(&["x1", "x2"], &[&["1", "0"], &["0", "1"]], &["y"], &[&["1"]], &["x1^2"]);
        assert!(matches!(
            bad.vertical_horizontal_split(&[0.0, 1.0], &[1.0, 0.0]),
            Err(GeomError::NotSubmersion { .. })
        ));
    }

    #[test]
    fn dilation_examples() {
        let d = ex51().dilation(&[0.3, 0.4]).unwrap();
        assert!((d.lambda_sq - 0.8f64.exp()).abs() < 1e-12 && d.anisotropy < 1e-10);
        let d = ex54().dilation(&[0.1, 0.2, 0.3]).unwrap();
        assert!((d.lambda_sq - 0.25).abs() < 1e-14);
        let d = ex53().dilation(&[0.1, 0.2, 1.5]).unwrap();
        assert!((d.lambda_sq - 2.25).abs() < 1e-12 && d.anisotropy < 1e-10);
    }

    #[test]
    fn lift_examples() {
        let s = ex51();
        let c = |src: &str| parse_expression(src, &s.base.coords).unwrap();
        assert!(close(&s.horizontal_lift(&[c("1")], &[0.2, 0.7]).unwrap(), &[1.0, 0.0], 1e-14));
        assert!(close(&s.horizontal_lift(&[c("0")], &[0.2, 0.7]).unwrap(), &[0.0, 0.0], 0.0));
        let s = ex53();
        let c = |src: &str| parse_expression(src, &s.base.coords).unwrap();
        let l = s.horizontal_lift(&[c("0"), c("1")], &[0.2, 0.7, 1.3]).unwrap();
        assert!(close(&l, &[0.0, 0.0, 1.0], 1e-14));
    }

    #[test]
    fn oneill_examples() {
        let s = ex51();
        let p = [0.3, 0.4];
        let (e1, e2) = (cnst(&[1.0, 0.0]), cnst(&[0.0, 1.0]));
        assert!(close(&s.oneill_t(&p, &e2, &e2).unwrap(), &[0.0, 0.0], 1e-14));
        let a = s.oneill_a(&p, &e1, &e1).unwrap();
        assert!(close(&a, &[0.0, (-0.8f64).exp()], 1e-14));
        assert!(close(&s.oneill_a(&p, &e2, &e1).unwrap(), &[0.0, 0.0], 1e-14));
        let s = ex53();
        let p = [0.1, 0.2, 2.0];
        let u = cnst(&[1.0, 0.0, 0.0]);
        // coordinate reading: T_{e1} e1 = x3⁻¹ e3
        assert!(close(&s.oneill_t(&p, &u, &u).unwrap(), &[0.0, 0.0, 0.5], 1e-14));
        let x = cnst(&[0.0, 1.0, 0.0]);
        assert!(close(&s.oneill_a(&p, &x, &x).unwrap(), &[0.0; 3], 1e-14));
        assert!(close(&s.oneill_t(&p, &x, &u).unwrap(), &[0.0; 3], 1e-14));
    }

    #[test]
    fn covariant_derivative_of_tensors() {
        let s = ex54();
        let p = [0.1, 0.2, 0.3];
        let (e1, e2, e3) = (cnst(&[1.0, 0.0, 0.0]), cnst(&[0.0, 1.0, 0.0]), cnst(&[0.0, 0.0, 1.0]));
        assert!(close(&s.cov_deriv_t(&p, &e1, &e3, &e3).unwrap(), &[0.0; 3], 1e-14));
        assert!(close(&s.cov_deriv_a(&p, &e3, &e1, &e2).unwrap(), &[0.0; 3], 1e-14));
        let s = ex51();
        let (a, b) = (cnst(&[1.0, 0.0]), cnst(&[0.0, 1.0]));
        assert!(close(&s.cov_deriv_t(&[0.3, 0.4], &a, &b, &b).unwrap(), &[0.0, 0.0], 1e-13));
    }

    #[test]
    fn mean_curvature_examples() {
        assert!(close(&ex51().mean_curvature(&[0.3, 0.4]).unwrap(), &[0.0, 0.0], 1e-14));
        assert!(close(&ex54().mean_curvature(&[0.3, 0.4, 0.5]).unwrap(), &[0.0; 3], 1e-14));
        // H = x3 e3 in coordinates; g(U,U)H for U = e1 is x3⁻¹ e3
        let h = ex53().mean_curvature(&[0.1, 0.2, 2.0]).unwrap();
        assert!(close(&h, &[0.0, 0.0, 2.0], 1e-13));
        assert!(close(&ex53().mean_curvature_trace(&[0.1, 0.2, 2.0]).unwrap(), &h, 1e-13));
    }

    #[test]
    fn horizontal_mean_curvature_example() {
        // unit frame X = e^{x2} e1 gives A_X X = e^{2x2} e^{-2x2} e2 = e2
        let r = ex51().horizontal_mean_curvature(&[0.3, 0.4]).unwrap();
        assert!(close(&r.via_a, &[0.0, 1.0], 1e-13));
        assert!(r.residual < 1e-9 && r.integrable);
        let r = ex54().horizontal_mean_curvature(&[0.3, 0.4, 0.5]).unwrap();
        assert!(close(&r.via_a, &[0.0; 3], 1e-14) && close(&r.via_formula, &[0.0; 3], 1e-14));
    }

    #[test]
    fn second_fundamental_form_and_tension() {
        let s = ex54();
        let c = |src: &str| parse_expression(src, &s.base.coords).unwrap();
        let p = [0.3, 0.4, 0.5];
        let v = s.second_fundamental_form(&[c("1"), c("0")], &[c("y1"), c("1")], &p).unwrap();
        assert!(close(&v, &[0.0, 0.0], 1e-14));
        assert!(close(&s.tension_field(&p).unwrap(), &[0.0, 0.0], 1e-14));
        let s = ex51();
        let c = |src: &str| parse_expression(src, &s.base.coords).unwrap();
        let p = [0.3, 0.4];
        // Lemma-2.1 style: −(λ²/2)(2X(1/λ²) − g(X,X) grad_ℋ(1/λ²)) pushes to 0 here,
        // but ∇_X X has a vertical part only, so the form vanishes.
        let v = s.second_fundamental_form(&[c("1")], &[c("1")], &p).unwrap();
        let w = s.second_fundamental_form_vectors(&p, &[1.0, 0.0], &[1.0, 0.0]).unwrap();
        assert!(close(&v, &w, 1e-12));
        assert!(close(&s.tension_field(&p).unwrap(), &[0.0], 1e-12));
        assert!(close(&s.tension_trace(&p).unwrap(), &[0.0], 1e-12));
        let s = ex53();
        let p = [0.1, 0.2, 2.0];
        let t = s.tension_field(&p).unwrap();
        assert!(close(&t, &[0.0, -2.0], 1e-12));
        assert!(close(&s.tension_trace(&p).unwrap(), &t, 1e-12));
    }

    #[test]
    fn fiber_ricci_on_line_fibers() {
        for (s, p) in [(ex51(), vec![0.3, 0.4]), (ex53(), vec![0.1, 0.2, 2.0])] {
            let fr = s.frames(&p).unwrap();
            let u = &fr.vertical[0];
            assert!(s.fiber_ricci(u, u, &p).unwrap().abs() < 1e-12);
        }
    }

    #[test]
    fn structure_flag_examples() {
        let f = ex51().structure_flags(&[vec![0.3, 0.4], vec![-1.0, 0.5]], 1e-9).unwrap();
        assert!(f.fibers_totally_geodesic.holds && f.horizontal_integrable.holds && f.homothetic.holds);
        let f = ex53().structure_flags(&[vec![0.1, 0.2, 2.0], vec![1.0, -1.0, 0.5]], 1e-9).unwrap();
        assert!(f.fibers_totally_umbilical.holds && f.horizontal_totally_geodesic.holds);
        assert!(!f.fibers_totally_geodesic.holds);
        let f = ex54().structure_flags(&[vec![0.1, 0.2, 0.3]], 1e-9).unwrap();
        assert!(f.map_totally_geodesic.holds);
    }
    #[test]
    fn fiber_curvature_intrinsic_matches_gauss() {
        // R^4 with warped metric, fibers are 2-dim and curved
        let s = setup(
            &["x1", "x2", "x3", "x4"],
            &[
                &["1 + x3^2", "0", "0", "0"],
                &["0", "exp(x1)", "0", "0"],
                &["0", "0", "1", "0"],
                &["0", "0", "0", "1"],
            ],
            &["y1", "y2"],
            &[&["1", "0"], &["0", "1"]],
            &["x3", "x4"],
        );
        let p = [0.2, -0.3, 0.5, 0.1];
        let fr = s.frames(&p).unwrap();
        let (u, v) = (&fr.vertical[0], &fr.vertical[1]);
        let a = s.fiber_ricci(u, u, &p).unwrap();
        let b = s.fiber_ricci_intrinsic(u, u, &p).unwrap();
        assert!((a - b).abs() < 1e-10, "{a} {b}");
        let a = s.fiber_ricci(u, v, &p).unwrap();
        let b = s.fiber_ricci_intrinsic(u, v, &p).unwrap();
        assert!((a - b).abs() < 1e-10, "{a} {b}");
    }
}
