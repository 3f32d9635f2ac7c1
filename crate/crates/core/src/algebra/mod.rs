//! Group `H₃`, its group ring with exact coefficients, and evaluations.

pub mod angle;
pub mod coeff;
pub mod element;
pub mod group;

pub use angle::{eval_at_angle, ComplexMatrix, MatrixJson, RationalAngle};
pub use coeff::Coeff;
pub use element::AlgebraElement;
pub use group::{GroupElement, UnitriangularMatrix};
