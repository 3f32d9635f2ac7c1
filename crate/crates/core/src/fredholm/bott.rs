//! Rank-one projector fields over the 2-torus and their Fourier data.

use std::f64::consts::PI;

use nalgebra::Matrix2;
use num_complex::Complex64;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use super::spec::AlgebraMatrix;
use crate::error::{HncError, Result};

pub type Fiber = Matrix2<Complex64>;

pub const PROJECTION_TOL: f64 = 1e-10;
pub const DECAY_TOL: f64 = 1e-8;

#[derive(Clone, Debug, PartialEq)]
pub enum FieldSource {
    /// Lower band of `sin k₁ σx + sin k₂ σy + (m + cos k₁ + cos k₂) σz`.
    Bott { mass: f64 },
    Constant { matrix: Fiber },
    /// `Σ c_{a,b} e^{i(a k₁ + b k₂)}`, i.e. `U ↦ e^{ik₁}`, `V ↦ e^{ik₂}`.
    Polynomial { terms: Vec<(i64, i64, Fiber)> },
}

impl FieldSource {
    pub fn sample(&self, k1: f64, k2: f64) -> Fiber {
        match self {
            FieldSource::Bott { mass } => bott_sample(*mass, k1, k2),
            FieldSource::Constant { matrix } => *matrix,
            FieldSource::Polynomial { terms } => {
                let mut m = Fiber::zeros();
                for (a, b, c) in terms {
                    let phase = Complex64::from_polar(1.0, *a as f64 * k1 + *b as f64 * k2);
                    m += c * phase;
                }
                m
            }
        }
    }

    pub fn label(&self) -> String {
        match self {
            FieldSource::Bott { mass } => format!("bott(mass={mass})"),
            FieldSource::Constant { .. } => "constant".into(),
            FieldSource::Polynomial { terms } => format!("polynomial({} terms)", terms.len()),
        }
    }

    /// Exact Fourier support radius, if finite.
    pub fn support_radius(&self) -> Option<i64> {
        match self {
            FieldSource::Bott { .. } => None,
            FieldSource::Constant { .. } => Some(0),
            FieldSource::Polynomial { terms } => Some(terms.iter().map(|(a, b, _)| a.abs().max(b.abs())).max().unwrap_or(0)),
        }
    }
}

fn bott_sample(mass: f64, k1: f64, k2: f64) -> Fiber {
    let (dx, dy, dz) = (k1.sin(), k2.sin(), mass + k1.cos() + k2.cos());
    let n = (dx * dx + dy * dy + dz * dz).sqrt();
    let (x, y, z) = (dx / n, dy / n, dz / n);
    let half = |c: Complex64| c * 0.5;
    Fiber::new(
        half(Complex64::new(1.0 - z, 0.0)),
        half(-Complex64::new(x, -y)),
        half(-Complex64::new(x, y)),
        half(Complex64::new(1.0 + z, 0.0)),
    )
}

#[derive(Clone, Debug)]
pub struct ProjectorField {
    pub grid: usize,
    pub samples: Vec<Fiber>,
    pub source: FieldSource,
    pub rank: usize,
    pub max_residual: f64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FieldSummary {
    pub source: String,
    pub grid: usize,
    pub rank: usize,
    pub max_residual: f64,
    pub trace_average: f64,
}

pub fn grid_angle(j: usize, g: usize) -> f64 {
    2.0 * PI * j as f64 / g as f64
}

impl ProjectorField {
    pub fn new(source: FieldSource, grid: usize) -> Result<Self> {
        if grid < 8 {
            return Err(HncError::InvalidArgument(format!("grid {grid} < 8")));
        }
        let mut samples = Vec::with_capacity(grid * grid);
        let mut worst = 0.0f64;
        let mut rank = None;
        for j1 in 0..grid {
            for j2 in 0..grid {
                let p = source.sample(grid_angle(j1, grid), grid_angle(j2, grid));
                let res = (p * p - p).camax().max((p.adjoint() - p).camax());
                worst = worst.max(res);
                if res > PROJECTION_TOL {
                    return Err(HncError::NotProjection(format!(
                        "sample ({j1},{j2}) has residual {res:.3e}"
                    )));
                }
                let r = p.trace().re.round() as usize;
                match rank {
                    None => rank = Some(r),
                    Some(r0) if r0 != r => {
                        return Err(HncError::NotProjection(format!("rank jumps from {r0} to {r} at ({j1},{j2})")))
                    }
                    _ => {}
                }
                samples.push(p);
            }
        }
        Ok(ProjectorField {
            grid,
            samples,
            source,
            rank: rank.unwrap_or(0),
            max_residual: worst,
        })
    }

    pub fn at(&self, j1: usize, j2: usize) -> &Fiber {
        let g = self.grid;
        &self.samples[(j1 % g) * g + (j2 % g)]
    }

    pub fn resample(&self, grid: usize) -> Result<Self> {
        ProjectorField::new(self.source.clone(), grid)
    }

    pub fn summary(&self) -> FieldSummary {
        let tr: f64 = self.samples.iter().map(|p| p.trace().re).sum();
        FieldSummary {
            source: self.source.label(),
            grid: self.grid,
            rank: self.rank,
            max_residual: self.max_residual,
            trace_average: tr / self.samples.len() as f64,
        }
    }

    /// Fourier coefficients `P̂(d)` with `p(k) = Σ P̂(d) e^{ik·d}`, computed on
    /// an `m × m` sampling of the source; index `(d₁ mod m, d₂ mod m)`.
    pub fn fourier_coefficients(&self, m: usize) -> Vec<Fiber> {
        let mut planner = FftPlanner::new();
        let fft = planner.plan_fft_forward(m);
        let mut out = vec![Fiber::zeros(); m * m];
        for a in 0..2 {
            for b in 0..2 {
                let mut buf: Vec<Complex64> = (0..m * m)
                    .map(|i| self.source.sample(grid_angle(i / m, m), grid_angle(i % m, m))[(a, b)])
                    .collect();
                fft.process(&mut buf);
                transpose(&mut buf, m);
                fft.process(&mut buf);
                transpose(&mut buf, m);
                let norm = (m * m) as f64;
                for (i, z) in buf.into_iter().enumerate() {
                    out[i][(a, b)] = z / norm;
                }
            }
        }
        out
    }

    /// Frobenius mass of the Fourier coefficients outside `|d|∞ ≤ radius`.
    pub fn decay_certificate(&self, box_size: usize) -> DecayCertificate {
        let radius = box_size / 2;
        if let Some(r) = self.source.support_radius() {
            return DecayCertificate {
                box_size,
                sampling: 0,
                tail_mass: 0.0,
                pass: (r as usize) < radius,
            };
        }
        let m = 2 * box_size;
        let coeffs = self.fourier_coefficients(m);
        let wrap = |i: usize| if i <= m / 2 { i } else { m - i };
        let tail: f64 = coeffs
            .iter()
            .enumerate()
            .filter(|(i, _)| wrap(i / m).max(wrap(i % m)) > radius)
            .map(|(_, c)| c.norm())
            .sum();
        DecayCertificate {
            box_size,
            sampling: m,
            tail_mass: tail,
            pass: tail < DECAY_TOL,
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DecayCertificate {
    pub box_size: usize,
    pub sampling: usize,
    pub tail_mass: f64,
    pub pass: bool,
}

pub(crate) fn transpose(buf: &mut [Complex64], m: usize) {
    for i in 0..m {
        for j in (i + 1)..m {
            buf.swap(i * m + j, j * m + i);
        }
    }
}

/// Lower-band projector of the two-band Bott family.
pub fn bott_projector(grid: usize, mass: f64) -> Result<ProjectorField> {
    if !mass.is_finite() || [-2.0, 0.0, 2.0].contains(&mass) {
        return Err(HncError::Gapless(format!("mass {mass} closes the gap")));
    }
    ProjectorField::new(FieldSource::Bott { mass }, grid)
}

pub fn constant_projector(grid: usize, matrix: Fiber) -> Result<ProjectorField> {
    ProjectorField::new(FieldSource::Constant { matrix }, grid)
}

/// The symbol of a projection over `C*(U,V)` (after `W ↦ 1`); a 1×1 input
/// `p` is embedded as `diag(p, 0)`.
pub fn field_from_algebra(p: &AlgebraMatrix, grid: usize) -> Result<ProjectorField> {
    if p.k() > 2 {
        return Err(HncError::InvalidArgument("symbols larger than 2×2 are not supported".into()));
    }
    let mut terms: std::collections::BTreeMap<(i64, i64), Fiber> = Default::default();
    for i in 0..p.k() {
        for j in 0..p.k() {
            for (g, c) in p.get(i, j).quotient_to_torus().terms() {
                terms.entry((g.p, g.q)).or_insert_with(Fiber::zeros)[(i, j)] += c.to_complex();
            }
        }
    }
    let terms = terms.into_iter().map(|((a, b), m)| (a, b, m)).collect();
    ProjectorField::new(FieldSource::Polynomial { terms }, grid)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::AlgebraElement;

    #[test]
    fn bott_is_rank_one_projection() {
        let f = bott_projector(64, 1.0).unwrap();
        assert_eq!(f.rank, 1);
        assert!(f.max_residual < 1e-12);
        assert!((f.summary().trace_average - 1.0).abs() < 1e-6);
        for p in &f.samples {
            let eig = p.symmetric_eigenvalues();
            for e in eig.iter() {
                assert!(e.abs() < 1e-12 || (e - 1.0).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn gapless_masses_rejected() {
        for m in [-2.0, 0.0, 2.0] {
            assert!(matches!(bott_projector(16, m), Err(HncError::Gapless(_))));
        }
        assert!(bott_projector(4, 1.0).is_err());
    }

    #[test]
    fn fourier_inverts_sampling() {
        let f = bott_projector(16, 1.0).unwrap();
        let m = 32;
        let c = f.fourier_coefficients(m);
        let (k1, k2) = (grid_angle(3, m), grid_angle(7, m));
        let mut s = Fiber::zeros();
        for (i, ci) in c.iter().enumerate() {
            let (d1, d2) = ((i / m) as f64, (i % m) as f64);
            s += ci * Complex64::from_polar(1.0, d1 * k1 + d2 * k2);
        }
        assert!((s - f.source.sample(k1, k2)).camax() < 1e-12);
    }

    #[test]
    fn decay() {
        let f = bott_projector(16, 1.0).unwrap();
        let good = f.decay_certificate(64);
        assert!(good.pass, "{good:?}");
        let bad = f.decay_certificate(16);
        assert!(!bad.pass);
    }

    #[test]
    fn polynomial_symbols() {
        let one = AlgebraMatrix::identity(1);
        let f = field_from_algebra(&one, 8).unwrap();
        assert_eq!(f.rank, 1);
        let u = AlgebraMatrix::scalar(AlgebraElement::u());
        assert!(matches!(field_from_algebra(&u, 8), Err(HncError::NotProjection(_))));
    }
}
