//! Nested forward-mode differentiation.
//!
//! [`Dual<T>`] carries a value and one directional derivative. Nesting
//! `Dual<Dual<f64>>` yields mixed second derivatives, and so on. Every
//! geometric quantity in the crate is evaluated generically over [`Scalar`],
//! so a field that already contains Christoffel symbols or projectors can be
//! differentiated once more simply by evaluating it one level up.
//!
//! The tower is capped: [`D3`] is the deepest level and refuses to seed a
//! further direction.

use std::collections::BTreeMap;
use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Neg, Sub};

use crate::expr::{EvalError, ScalarFieldExpr};

/// Arithmetic needed by expression evaluation.
pub trait Real:
    Copy
    + Debug
    + Send
    + Sync
    + 'static
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    fn cst(c: f64) -> Self;
    /// Innermost real value.
    fn val(&self) -> f64;
    fn scale(self, c: f64) -> Self;
    fn exp(self) -> Self;
    fn ln(self) -> Self;
    fn sin(self) -> Self;
    fn cos(self) -> Self;
    fn sqrt(self) -> Self;
    fn powi(self, n: i32) -> Self;
    fn powf(self, r: f64) -> Self;
    /// True when every stored component is finite.
    fn all_finite(&self) -> bool;
}

impl Real for f64 {
    fn cst(c: f64) -> Self {
        c
    }
    fn val(&self) -> f64 {
        *self
    }
    fn scale(self, c: f64) -> Self {
        self * c
    }
    fn exp(self) -> Self {
        f64::exp(self)
    }
    fn ln(self) -> Self {
        f64::ln(self)
    }
    fn sin(self) -> Self {
        f64::sin(self)
    }
    fn cos(self) -> Self {
        f64::cos(self)
    }
    fn sqrt(self) -> Self {
        f64::sqrt(self)
    }
    fn powi(self, n: i32) -> Self {
        f64::powi(self, n)
    }
    fn powf(self, r: f64) -> Self {
        f64::powf(self, r)
    }
    fn all_finite(&self) -> bool {
        self.is_finite()
    }
}

/// Truncated first-order Taylor number `re + du·ε`, `ε² = 0`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Dual<T> {
    pub re: T,
    pub du: T,
}

impl<T: Real> Dual<T> {
    pub fn new(re: T, du: T) -> Self {
        Dual { re, du }
    }
    pub fn constant(re: T) -> Self {
        Dual { re, du: T::cst(0.0) }
    }
}

impl<T: Real> Add for Dual<T> {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Dual::new(self.re + o.re, self.du + o.du)
    }
}

impl<T: Real> Sub for Dual<T> {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Dual::new(self.re - o.re, self.du - o.du)
    }
}

impl<T: Real> Mul for Dual<T> {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        Dual::new(self.re * o.re, self.re * o.du + self.du * o.re)
    }
}

impl<T: Real> Div for Dual<T> {
    type Output = Self;
    fn div(self, o: Self) -> Self {
        let q = self.re / o.re;
        Dual::new(q, (self.du - q * o.du) / o.re)
    }
}

impl<T: Real> Neg for Dual<T> {
    type Output = Self;
    fn neg(self) -> Self {
        Dual::new(-self.re, -self.du)
    }
}

impl<T: Real> Real for Dual<T> {
    fn cst(c: f64) -> Self {
        Dual::constant(T::cst(c))
    }
    fn val(&self) -> f64 {
        self.re.val()
    }
    fn scale(self, c: f64) -> Self {
        Dual::new(self.re.scale(c), self.du.scale(c))
    }
    fn exp(self) -> Self {
        let e = self.re.exp();
        Dual::new(e, self.du * e)
    }
    fn ln(self) -> Self {
        Dual::new(self.re.ln(), self.du / self.re)
    }
    fn sin(self) -> Self {
        Dual::new(self.re.sin(), self.du * self.re.cos())
    }
    fn cos(self) -> Self {
        Dual::new(self.re.cos(), -(self.du * self.re.sin()))
    }
    fn sqrt(self) -> Self {
        let s = self.re.sqrt();
        Dual::new(s, self.du / s.scale(2.0))
    }
    fn powi(self, n: i32) -> Self {
        if n == 0 {
            return Self::cst(1.0);
        }
        let p = self.re.powi(n - 1);
        Dual::new(p * self.re, (self.du * p).scale(n as f64))
    }
    fn powf(self, r: f64) -> Self {
        if r == 0.0 {
            return Self::cst(1.0);
        }
        let p = self.re.powf(r - 1.0);
        Dual::new(p * self.re, (self.du * p).scale(r))
    }
    fn all_finite(&self) -> bool {
        self.re.all_finite() && self.du.all_finite()
    }
}

pub type D1 = Dual<f64>;
pub type D2 = Dual<D1>;
pub type D3 = Dual<D2>;

/// Raised when a derivative is requested beyond the deepest jet level.
#[derive(Clone, Debug, PartialEq, thiserror::Error)]
#[error("derivative nesting exceeds the jet depth cap")]
pub struct DepthExceeded;

/// A jet level that knows the next level up.
pub trait Scalar: Real {
    type Up: Scalar;
    /// `x + d·ε` one level up.
    fn seed(x: Self, d: Self) -> Result<Self::Up, DepthExceeded>;
    fn lift(x: Self) -> Self::Up;
    /// Inverse of [`Scalar::seed`]: value and directional derivative.
    fn split(u: Self::Up) -> (Self, Self);
}

macro_rules! nested_scalar {
    ($t:ty) => {
        impl Scalar for $t {
            type Up = Dual<$t>;
            fn seed(x: Self, d: Self) -> Result<Self::Up, DepthExceeded> {
                Ok(Dual::new(x, d))
            }
            fn lift(x: Self) -> Self::Up {
                Dual::constant(x)
            }
            fn split(u: Self::Up) -> (Self, Self) {
                (u.re, u.du)
            }
        }
    };
}

nested_scalar!(f64);
nested_scalar!(D1);
nested_scalar!(D2);

impl Scalar for D3 {
    type Up = D3;
    fn seed(_: Self, _: Self) -> Result<Self::Up, DepthExceeded> {
        Err(DepthExceeded)
    }
    fn lift(x: Self) -> Self::Up {
        x
    }
    fn split(u: Self::Up) -> (Self, Self) {
        (u, D3::cst(0.0))
    }
}

/// Seeds a whole point along a direction.
pub fn seed_point<S: Scalar>(x: &[S], d: &[S]) -> Result<Vec<S::Up>, DepthExceeded> {
    x.iter().zip(d).map(|(&a, &b)| S::seed(a, b)).collect()
}

pub fn lift_all<S: Scalar>(x: &[S]) -> Vec<S::Up> {
    x.iter().map(|&a| S::lift(a)).collect()
}

pub fn consts<S: Real>(v: &[f64]) -> Vec<S> {
    v.iter().map(|&c| S::cst(c)).collect()
}

pub fn values<S: Real>(v: &[S]) -> Vec<f64> {
    v.iter().map(|s| s.val()).collect()
}

/// Value and directional derivatives of a scalar field at a point.
#[derive(Clone, Debug, PartialEq)]
pub struct JetResult {
    pub value: f64,
    /// Keyed by direction index.
    pub first: BTreeMap<usize, f64>,
    /// Keyed by ordered direction pair; both orders are stored.
    pub second: BTreeMap<(usize, usize), f64>,
}

/// Evaluates `f` at `p` together with derivatives along `dirs`.
pub fn eval_with_derivatives(
    f: &ScalarFieldExpr,
    p: &[f64],
    dirs: &[Vec<f64>],
    order: u8,
) -> Result<JetResult, EvalError> {
    let value = f.eval::<f64>(p)?;
    let mut first = BTreeMap::new();
    let mut second = BTreeMap::new();
    if order >= 1 {
        for (i, d) in dirs.iter().enumerate() {
            let x: Vec<D1> = p.iter().zip(d).map(|(&a, &b)| Dual::new(a, b)).collect();
            first.insert(i, f.eval(&x)?.du);
        }
    }
    if order >= 2 {
        for i in 0..dirs.len() {
            for j in i..dirs.len() {
                let x: Vec<D2> = (0..p.len())
                    .map(|k| {
                        Dual::new(
                            Dual::new(p[k], dirs[i][k]),
                            Dual::new(dirs[j][k], 0.0),
                        )
                    })
                    .collect();
                let v = f.eval(&x)?.du.du;
                second.insert((i, j), v);
                second.insert((j, i), v);
            }
        }
    }
    Ok(JetResult { value, first, second })
}

/// `J[a][i] = ∂F_a/∂x_i` at `p`.
pub fn jacobian(map: &[ScalarFieldExpr], p: &[f64]) -> Result<Vec<Vec<f64>>, EvalError> {
    jacobian_at::<f64>(map, p)
}

/// Jacobian evaluated at a jet point; one seeded pass per coordinate.
pub fn jacobian_at<S: Scalar>(
    map: &[ScalarFieldExpr],
    x: &[S],
) -> Result<Vec<Vec<S>>, EvalError> {
    let m = x.len();
    let mut jac = vec![vec![S::cst(0.0); m]; map.len()];
    let mut dir = vec![S::cst(0.0); m];
    for i in 0..m {
        dir[i] = S::cst(1.0);
        let xs = seed_point(x, &dir)?;
        dir[i] = S::cst(0.0);
        for (a, comp) in map.iter().enumerate() {
            jac[a][i] = S::split(comp.eval(&xs)?).1;
        }
    }
    Ok(jac)
}

/// `[X,Y]^k = X^i ∂_i Y^k − Y^i ∂_i X^k`.
pub fn lie_bracket(
    xf: &[ScalarFieldExpr],
    yf: &[ScalarFieldExpr],
    p: &[f64],
) -> Result<Vec<f64>, EvalError> {
    let xv: Vec<f64> = xf.iter().map(|c| c.eval(p)).collect::<Result<_, _>>()?;
    let yv: Vec<f64> = yf.iter().map(|c| c.eval(p)).collect::<Result<_, _>>()?;
    let along = |field: &[ScalarFieldExpr], d: &[f64]| -> Result<Vec<f64>, EvalError> {
        let x: Vec<D1> = p.iter().zip(d).map(|(&a, &b)| Dual::new(a, b)).collect();
        field.iter().map(|c| c.eval(&x).map(|v| v.du)).collect()
    };
    let dy = along(yf, &xv)?;
    let dx = along(xf, &yv)?;
    Ok(dy.iter().zip(&dx).map(|(a, b)| a - b).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::ScalarFieldExpr;

    fn sf(src: &str, coords: &[&str]) -> ScalarFieldExpr {
        ScalarFieldExpr::parse(src, coords).unwrap()
    }

    #[test]
    fn square_has_exact_derivatives() {
        let f = sf("x1^2", &["x1"]);
        let r = eval_with_derivatives(&f, &[3.0], &[vec![1.0]], 2).unwrap();
        assert_eq!(r.value, 9.0);
        assert_eq!(r.first[&0], 6.0);
        assert_eq!(r.second[&(0, 0)], 2.0);
    }

    #[test]
    fn exponential_chain_rule() {
        let f = sf("exp(-2*x2)", &["x1", "x2"]);
        let r = eval_with_derivatives(&f, &[0.0, 0.0], &[vec![0.0, 1.0]], 1).unwrap();
        assert_eq!(r.first[&0], -2.0);
    }

    #[test]
    fn inverse_square_matches_central_difference() {
        let f = sf("x3^-2", &["x1", "x2", "x3"]);
        let p = [0.0, 0.0, 2.0];
        let r = eval_with_derivatives(&f, &p, &[vec![0.0, 0.0, 1.0]], 1).unwrap();
        let h = 1e-5;
        let fd = (f.eval(&[0.0, 0.0, 2.0 + h]).unwrap() - f.eval(&[0.0, 0.0, 2.0 - h]).unwrap())
            / (2.0 * h);
        assert!(((r.first[&0] - fd) / fd).abs() < 1e-6);
    }

    #[test]
    fn mixed_second_derivatives_are_stored_symmetrically() {
        let f = sf("sin(x1*x2) + x1^3*x2", &["x1", "x2"]);
        let dirs = vec![vec![1.0, 0.0], vec![0.3, -0.7]];
        let r = eval_with_derivatives(&f, &[0.4, 1.1], &dirs, 2).unwrap();
        assert_eq!(r.second[&(0, 1)], r.second[&(1, 0)]);
    }

    #[test]
    fn jacobian_of_coordinate_maps() {
        let f1 = vec![sf("x1", &["x1", "x2"])];
        assert_eq!(jacobian(&f1, &[0.3, 0.2]).unwrap(), vec![vec![1.0, 0.0]]);
        let c = ["x1", "x2", "x3"];
        let f2 = vec![sf("x2", &c), sf("x3", &c)];
        assert_eq!(
            jacobian(&f2, &[1.0, 2.0, 3.0]).unwrap(),
            vec![vec![0.0, 1.0, 0.0], vec![0.0, 0.0, 1.0]]
        );
        let id = vec![sf("x1", &["x1", "x2"]), sf("x2", &["x1", "x2"])];
        assert_eq!(
            jacobian(&id, &[5.0, -1.0]).unwrap(),
            vec![vec![1.0, 0.0], vec![0.0, 1.0]]
        );
    }

    #[test]
    fn bracket_examples() {
        let c = ["x1", "x2"];
        let x = vec![sf("x2", &c), sf("0", &c)];
        let y = vec![sf("0", &c), sf("1", &c)];
        assert_eq!(lie_bracket(&x, &y, &[1.0, 1.0]).unwrap(), vec![-1.0, 0.0]);
        assert_eq!(lie_bracket(&x, &x, &[1.0, 1.0]).unwrap(), vec![0.0, 0.0]);
        let e1 = vec![sf("1", &c), sf("0", &c)];
        assert_eq!(lie_bracket(&e1, &y, &[0.2, 0.9]).unwrap(), vec![0.0, 0.0]);
    }

    #[test]
    fn depth_cap_is_enforced() {
        let x = D3::cst(1.0);
        assert_eq!(D3::seed(x, x), Err(DepthExceeded));
        assert!(D2::seed(D2::cst(1.0), D2::cst(1.0)).is_ok());
    }

    #[test]
    fn third_derivative_through_the_tower() {
        // d³/dx³ x^5 at 2 = 60·4 = 240
        let x: D3 = Dual::new(
            Dual::new(Dual::new(2.0, 1.0), Dual::new(1.0, 0.0)),
            Dual::new(Dual::new(1.0, 0.0), Dual::new(0.0, 0.0)),
        );
        let y = x.powi(5);
        assert!((y.du.du.du - 240.0).abs() < 1e-9);
    }
}
