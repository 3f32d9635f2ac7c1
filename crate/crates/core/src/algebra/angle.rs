//! Rational rotation angles and the clock-and-shift evaluation into `t×t` matrices.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use nalgebra::DMatrix;
use num_complex::Complex64;
use num_integer::Integer;
use serde::{Deserialize, Serialize};

use super::element::AlgebraElement;
use crate::error::{HncError, Result};

pub type ComplexMatrix = DMatrix<Complex64>;

/// `θ = s/t` in lowest terms with `t ≥ 1`; `λ = exp(2πiθ)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "AngleJson", into = "AngleJson")]
pub struct RationalAngle {
    s: i64,
    t: i64,
}

#[derive(Serialize, Deserialize)]
struct AngleJson {
    s: i64,
    t: i64,
}

impl TryFrom<AngleJson> for RationalAngle {
    type Error = HncError;
    fn try_from(a: AngleJson) -> Result<Self> {
        RationalAngle::new(a.s, a.t)
    }
}

impl From<RationalAngle> for AngleJson {
    fn from(a: RationalAngle) -> Self {
        AngleJson { s: a.s, t: a.t }
    }
}

impl RationalAngle {
    pub fn new(s: i64, t: i64) -> Result<Self> {
        if t == 0 {
            return Err(HncError::InvalidArgument("angle denominator is zero".into()));
        }
        let g = s.gcd(&t).max(1);
        let (mut s, mut t) = (s / g, t / g);
        if t < 0 {
            s = -s;
            t = -t;
        }
        Ok(RationalAngle { s, t })
    }

    pub fn numerator(&self) -> i64 {
        self.s
    }

    pub fn denominator(&self) -> i64 {
        self.t
    }

    /// `λᵏ = exp(2πi k s / t)`, computed from the residue of `k·s` mod `t`.
    pub fn lambda_pow(&self, k: i64) -> Complex64 {
        let m = (k as i128 * self.s as i128).rem_euclid(self.t as i128) as f64;
        Complex64::from_polar(1.0, 2.0 * PI * m / self.t as f64)
    }
}

impl fmt::Display for RationalAngle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.s, self.t)
    }
}

impl FromStr for RationalAngle {
    type Err = HncError;
    fn from_str(s: &str) -> Result<Self> {
        let bad = || HncError::Parse(format!("invalid angle `{s}` (expected s/t)"));
        let (n, d) = s.split_once('/').unwrap_or((s, "1"));
        let n: i64 = n.trim().parse().map_err(|_| bad())?;
        let d: i64 = d.trim().parse().map_err(|_| bad())?;
        RationalAngle::new(n, d)
    }
}

/// Image of `x` under `U ↦ shift`, `V ↦ clock`, `W ↦ λ·1` on `Cᵗ`.
///
/// The shift sends `e_j ↦ e_{j+1 mod t}` and the clock is `diag(λʲ)`, so the
/// images satisfy `π(V)π(U) = λ π(U)π(V)`.
pub fn eval_at_angle(x: &AlgebraElement, theta: RationalAngle) -> ComplexMatrix {
    let t = theta.denominator() as usize;
    let mut out = ComplexMatrix::zeros(t, t);
    for (g, a) in x.terms() {
        let a = a.to_complex();
        // U^p V^q W^r e_j = λ^{qj + r} e_{j+p}
        for j in 0..t {
            let phase = theta.lambda_pow(g.q * j as i64 + g.r);
            let row = (j as i64 + g.p).rem_euclid(t as i64) as usize;
            out[(row, j)] += a * phase;
        }
    }
    out
}

/// Row-major `{ "rows", "cols", "data": [[re, im], ...] }`.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct MatrixJson {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<[f64; 2]>,
}

impl From<&ComplexMatrix> for MatrixJson {
    fn from(m: &ComplexMatrix) -> Self {
        let mut data = Vec::with_capacity(m.nrows() * m.ncols());
        for i in 0..m.nrows() {
            for j in 0..m.ncols() {
                let z = m[(i, j)];
                data.push([z.re, z.im]);
            }
        }
        MatrixJson {
            rows: m.nrows(),
            cols: m.ncols(),
            data,
        }
    }
}
