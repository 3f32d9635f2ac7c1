//! Matrix-free evaluation of the even Dirac pairing on `ℓ²(Z²) ⊕ ℓ²(Z²)`.
//!
//! With `F = [[0,F₀],[F₀*,0]]`, `π(p) = P ⊕ P` and `γ = 1 ⊕ −1`,
//! `(−1)ⁿ Tr(γ π(p) [F,π(p)]²ⁿ) = Tr Q′ⁿ − Tr Qⁿ` where
//! `Q = P F₀*(1−P) F₀ P` and `Q′ = P F₀(1−P) F₀* P`. Both are trace class for
//! `n ≥ 2`, so the trace is summed site by site over `|x|∞ ≤ N`. Each site is
//! evaluated in a periodic box around it in which `P` acts as a Fourier
//! multiplier.

use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};
use serde::{Deserialize, Serialize};

use super::bott::{grid_angle, transpose, FieldSource, ProjectorField};
use super::operator::dirac_phase;
use crate::error::{HncError, Result};

/// Sign relating the trace formula to the oriented lattice Chern number,
/// calibrated once on the Bott field at mass 1.
pub const DIRAC_ORIENTATION: i64 = 1;

pub const BOX_SIZES: [usize; 6] = [16, 32, 48, 64, 96, 128];

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TraceEstimate {
    pub n_commutators: usize,
    pub truncation: usize,
    pub value: f64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DiracPairingReport {
    /// Oriented pairing.
    pub value: i64,
    /// Rounded value of the trace formula itself.
    pub trace_value: i64,
    pub box_size: usize,
    pub tail_mass: f64,
    pub estimates: Vec<TraceEstimate>,
    pub spread: f64,
}

struct BoxOperator {
    l: usize,
    fwd: Arc<dyn Fft<f64>>,
    inv: Arc<dyn Fft<f64>>,
    scratch: Vec<Complex64>,
    /// `p(−k)` at transposed spectral index `k₂·L + k₁`, row-major 2×2.
    mult: Vec<[Complex64; 4]>,
}

type Field2 = [Vec<Complex64>; 2];

impl BoxOperator {
    fn new(source: &FieldSource, l: usize) -> Self {
        let mut planner = FftPlanner::new();
        let fwd = planner.plan_fft_forward(l);
        let inv = planner.plan_fft_inverse(l);
        let scratch_len = fwd.get_inplace_scratch_len().max(inv.get_inplace_scratch_len());
        let mut mult = vec![[Complex64::new(0.0, 0.0); 4]; l * l];
        for k2 in 0..l {
            for k1 in 0..l {
                let p = source.sample(-grid_angle(k1, l), -grid_angle(k2, l));
                mult[k2 * l + k1] = [p[(0, 0)], p[(0, 1)], p[(1, 0)], p[(1, 1)]];
            }
        }
        BoxOperator {
            l,
            fwd,
            inv,
            scratch: vec![Complex64::new(0.0, 0.0); scratch_len],
            mult,
        }
    }

    fn zeros(&self) -> Field2 {
        [vec![Complex64::new(0.0, 0.0); self.l * self.l], vec![Complex64::new(0.0, 0.0); self.l * self.l]]
    }

    /// Layout `i·L + j` with box offset `(i, j)` taken mod L.
    fn forward(&mut self, buf: &mut [Complex64]) {
        self.fwd.process_with_scratch(buf, &mut self.scratch);
        transpose(buf, self.l);
        self.fwd.process_with_scratch(buf, &mut self.scratch);
    }

    fn inverse(&mut self, buf: &mut [Complex64]) {
        self.inv.process_with_scratch(buf, &mut self.scratch);
        transpose(buf, self.l);
        self.inv.process_with_scratch(buf, &mut self.scratch);
        let s = 1.0 / (self.l * self.l) as f64;
        for z in buf.iter_mut() {
            *z *= s;
        }
    }

    fn apply_p(&mut self, w: &Field2) -> Field2 {
        let mut a = w[0].clone();
        let mut b = w[1].clone();
        self.forward(&mut a);
        self.forward(&mut b);
        for (i, m) in self.mult.iter().enumerate() {
            let (x, y) = (a[i], b[i]);
            a[i] = m[0] * x + m[1] * y;
            b[i] = m[2] * x + m[3] * y;
        }
        self.inverse(&mut a);
        self.inverse(&mut b);
        [a, b]
    }

    /// `P φ̄(1−P) φ P w` for `w` in the range of `P`, with `φ` the pointwise phase.
    fn apply_q(&mut self, w: &Field2, phase: &[Complex64], adjoint_first: bool) -> Field2 {
        let mut t = w.clone();
        for c in 0..2 {
            for (z, f) in t[c].iter_mut().zip(phase) {
                *z *= if adjoint_first { f.conj() } else { *f };
            }
        }
        let s = self.apply_p(&t);
        for c in 0..2 {
            for (i, f) in phase.iter().enumerate() {
                let u = t[c][i] - s[c][i];
                t[c][i] = u * if adjoint_first { *f } else { f.conj() };
            }
        }
        self.apply_p(&t)
    }
}

fn inner(a: &Field2, b: &Field2) -> f64 {
    let mut s = Complex64::new(0.0, 0.0);
    for c in 0..2 {
        for (x, y) in a[c].iter().zip(&b[c]) {
            s += x.conj() * y;
        }
    }
    s.re
}

fn choose_box(field: &ProjectorField, chain: usize) -> Result<(usize, f64)> {
    let mut last = f64::NAN;
    for &l in &BOX_SIZES {
        if let Some(r) = field.source.support_radius() {
            // exact for finite support once the whole chain fits without wrapping
            if 2 * (3 * r as usize * chain) + 2 <= l {
                return Ok((l, 0.0));
            }
            continue;
        }
        if l < 32 {
            continue;
        }
        let cert = field.decay_certificate(l);
        last = cert.tail_mass;
        if cert.pass {
            return Ok((l, cert.tail_mass));
        }
    }
    Err(HncError::InsufficientDecay(format!(
        "Fourier tail {last:.3e} exceeds the bound at every box size up to {}",
        BOX_SIZES[BOX_SIZES.len() - 1]
    )))
}

/// Trace-formula values `Tr Q′ˢ − Tr Qˢ` for `s = n, n+1`, summed over
/// `|x|∞ ≤ r` for every `r ≤ truncation`. Returns `(box, tail, sums[s][r])`.
fn site_sums(field: &ProjectorField, truncation: usize, n: usize) -> Result<(usize, f64, [Vec<f64>; 2])> {
    let chain = (n + 2) / 2;
    let (l, tail) = choose_box(field, chain)?;
    let mut op = BoxOperator::new(&field.source, l);
    let lh = l as i64;
    let offset = |i: usize| -> i64 {
        let i = i as i64;
        if i < lh / 2 {
            i
        } else {
            i - lh
        }
    };

    let kernels: Vec<Field2> = (0..2)
        .map(|c| {
            let mut delta = op.zeros();
            delta[c][0] = Complex64::new(1.0, 0.0);
            op.apply_p(&delta)
        })
        .collect();

    let nt = truncation as i64;
    let mut ring = [vec![0.0; truncation + 1], vec![0.0; truncation + 1]];
    let mut phase = vec![Complex64::new(0.0, 0.0); l * l];
    for x1 in -nt..=nt {
        for x2 in -nt..=nt {
            for i in 0..l {
                for j in 0..l {
                    phase[i * l + j] = dirac_phase(x1 + offset(i), x2 + offset(j));
                }
            }
            let r = x1.abs().max(x2.abs()) as usize;
            for k in &kernels {
                for (sign, adjoint_first) in [(-1.0, false), (1.0, true)] {
                    let mut v = vec![k.clone()];
                    for _ in 0..chain {
                        let next = op.apply_q(v.last().unwrap(), &phase, adjoint_first);
                        v.push(next);
                    }
                    for (slot, s) in [n, n + 1].into_iter().enumerate() {
                        ring[slot][r] += sign * inner(&v[s / 2], &v[s.div_ceil(2)]);
                    }
                }
            }
        }
    }
    for sums in ring.iter_mut() {
        for r in 1..sums.len() {
            sums[r] += sums[r - 1];
        }
    }
    Ok((l, tail, ring))
}

/// `⟨Dirac, [p]⟩` for a projector field, as the trace formula with `n` and
/// `n+1` (`n = n_commutators / 2`) at truncations `N` and `N/2`, which must
/// agree within `agree_tol` before rounding.
pub fn dirac_even_pairing(
    field: &ProjectorField,
    truncation: usize,
    n_commutators: usize,
    agree_tol: f64,
) -> Result<DiracPairingReport> {
    if n_commutators < 4 || !n_commutators.is_multiple_of(2) {
        return Err(HncError::InvalidArgument(
            "the 2-D trace needs an even number of commutators, at least 4".into(),
        ));
    }
    if truncation < 2 {
        return Err(HncError::WindowTooSmall(format!("truncation {truncation}")));
    }
    let n = n_commutators / 2;
    let (box_size, tail_mass, sums) = site_sums(field, truncation, n)?;
    let mut estimates = Vec::new();
    for &t in &[truncation, truncation / 2] {
        for (slot, s) in [n, n + 1].into_iter().enumerate() {
            estimates.push(TraceEstimate {
                n_commutators: 2 * s,
                truncation: t,
                value: sums[slot][t],
            });
        }
    }
    let max = estimates.iter().map(|e| e.value).fold(f64::NEG_INFINITY, f64::max);
    let min = estimates.iter().map(|e| e.value).fold(f64::INFINITY, f64::min);
    let spread = max - min;
    if spread > agree_tol {
        return Err(HncError::NotConverged(format!(
            "trace estimates spread over {spread:.4} (from {min:.4} to {max:.4})"
        )));
    }
    let trace_value = estimates[0].value.round() as i64;
    Ok(DiracPairingReport {
        value: DIRAC_ORIENTATION * trace_value,
        trace_value,
        box_size,
        tail_mass,
        estimates,
        spread,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fredholm::bott::{bott_projector, constant_projector, Fiber};

    #[test]
    fn constant_fields_pair_to_zero() {
        let mut m = Fiber::zeros();
        m[(0, 0)] = Complex64::new(1.0, 0.0);
        for p in [m, Fiber::identity()] {
            let f = constant_projector(8, p).unwrap();
            let rep = dirac_even_pairing(&f, 6, 4, 0.1).unwrap();
            assert_eq!(rep.value, 0);
            assert!(rep.estimates.iter().all(|e| e.value.abs() < 1e-12));
        }
    }

    #[test]
    fn rejects_bad_arguments() {
        let f = bott_projector(16, 1.0).unwrap();
        assert!(dirac_even_pairing(&f, 8, 2, 0.1).is_err());
        assert!(dirac_even_pairing(&f, 8, 5, 0.1).is_err());
    }

    #[test]
    fn slow_decay_is_reported() {
        let f = bott_projector(16, 0.01).unwrap();
        assert!(matches!(dirac_even_pairing(&f, 4, 4, 0.1), Err(HncError::InsufficientDecay(_))));
    }
}
