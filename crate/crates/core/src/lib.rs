//! Numerical verification toolkit for horizontally conformal submersions.
//!
//! Geometry is evaluated exactly to rounding with nested forward-mode jets;
//! no finite differences are used outside test oracles.

pub mod catalog;
pub mod expr;
pub mod field;
pub mod jet;
pub mod linalg;
pub mod manifest;
pub mod report;
pub mod riemann;
pub mod soliton;
pub mod submersion;
pub mod verify;

pub use expr::{parse_expression, EvalError, Expr, ParseError, ScalarFieldExpr};
pub use riemann::{ChartManifold, Frame, GeomError, VectorFieldSpec};
pub use submersion::{DilationResult, StructureFlags, SubmersionSetup};
