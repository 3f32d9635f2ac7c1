//! Even pairings through the trace formula `(−1)ⁿ Tr(γ π(p) [F, π(p)]²ⁿ)`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::bott::field_from_algebra;
use super::dirac::{dirac_even_pairing, TraceEstimate};
use super::operator::{build_grading, build_representation, build_symmetry};
use super::spec::{AlgebraMatrix, BaseSpace, FredholmModuleSpec, ModuleName, Parity};
use crate::error::{HncError, Result};

pub const DEFAULT_AGREE_TOL: f64 = 0.1;

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct EvenPairingReport {
    pub module: ModuleName,
    pub value: i64,
    pub estimates: Vec<TraceEstimate>,
    pub spread: f64,
}

fn dense_trace(spec: &FredholmModuleSpec, p: &AlgebraMatrix, n: usize) -> Result<f64> {
    let pi = build_representation(spec, p)?.entries;
    let f = build_symmetry(spec, p.k()).entries;
    let g = build_grading(spec, p.k())
        .ok_or_else(|| HncError::InvalidArgument("module has no grading".into()))?
        .entries;
    let c = &f * &pi - &pi * &f;
    let c2 = &c * &c;
    let mut m = &g * &pi;
    for _ in 0..n {
        m *= &c2;
    }
    let tr: Complex64 = m.trace();
    let sign = if n.is_multiple_of(2) { 1.0 } else { -1.0 };
    Ok(sign * tr.re)
}

/// `⟨z, [p]⟩` for an even module, rounded once the values for `n` and `n+1`
/// at truncations `N` and `N/2` agree within `agree_tol`.
pub fn even_pairing_trace(
    module: ModuleName,
    p: &AlgebraMatrix,
    n_commutators: usize,
    truncation: usize,
    agree_tol: f64,
) -> Result<EvenPairingReport> {
    if module.parity() != Parity::Even {
        return Err(HncError::InvalidArgument(format!("{module} is not an even module")));
    }
    if n_commutators == 0 || !n_commutators.is_multiple_of(2) {
        return Err(HncError::InvalidArgument("n_commutators must be a positive even integer".into()));
    }
    if !p.is_projection() {
        return Err(HncError::NotProjection("p* = p = p² fails in the group ring".into()));
    }
    match module.base_space() {
        BaseSpace::L2Z2Pair => {
            let field = field_from_algebra(p, 16)?;
            let rep = dirac_even_pairing(&field, truncation, n_commutators, agree_tol)?;
            Ok(EvenPairingReport {
                module,
                value: rep.trace_value,
                estimates: rep.estimates,
                spread: rep.spread,
            })
        }
        _ => {
            let n = n_commutators / 2;
            let mut estimates = Vec::new();
            for t in [truncation, (truncation / 2).max(1)] {
                let spec = FredholmModuleSpec::new(module, t)?;
                for s in [n, n + 1] {
                    estimates.push(TraceEstimate {
                        n_commutators: 2 * s,
                        truncation: t,
                        value: dense_trace(&spec, p, s)?,
                    });
                }
            }
            let max = estimates.iter().map(|e| e.value).fold(f64::NEG_INFINITY, f64::max);
            let min = estimates.iter().map(|e| e.value).fold(f64::INFINITY, f64::min);
            if max - min > agree_tol {
                return Err(HncError::NotConverged(format!("trace estimates range over [{min}, {max}]")));
            }
            Ok(EvenPairingReport {
                module,
                value: estimates[0].value.round() as i64,
                spread: max - min,
                estimates,
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::AlgebraElement;
    use crate::fredholm::spec::KClass;

    #[test]
    fn z0_pairings() {
        for c in KClass::EVEN {
            let r = even_pairing_trace(ModuleName::Z0, &c.quotient_image(), 2, 8, 0.1).unwrap();
            assert_eq!(r.value, 1, "{c:?}");
            assert!(r.spread < 1e-12);
        }
        let w0 = even_pairing_trace(ModuleName::W0, &AlgebraMatrix::identity(2), 2, 8, 0.1).unwrap();
        assert_eq!(w0.value, 2);
    }

    #[test]
    fn del1_w1_pairs_to_zero() {
        for c in KClass::EVEN {
            let r = even_pairing_trace(ModuleName::Del1W1, &c.quotient_image(), 4, 6, 0.1).unwrap();
            assert_eq!(r.value, 0, "{c:?}");
        }
    }

    #[test]
    fn rejects_non_projections() {
        let u = AlgebraMatrix::scalar(AlgebraElement::u());
        assert!(matches!(
            even_pairing_trace(ModuleName::Z0, &u, 2, 8, 0.1),
            Err(HncError::NotProjection(_))
        ));
        assert!(even_pairing_trace(ModuleName::Z1, &AlgebraMatrix::identity(1), 2, 8, 0.1).is_err());
        assert!(even_pairing_trace(ModuleName::Z0, &AlgebraMatrix::identity(1), 3, 8, 0.1).is_err());
    }
}
