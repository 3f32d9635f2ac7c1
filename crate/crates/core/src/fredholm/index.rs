//! Fredholm indices of Toeplitz-type compressions and the odd pairing.

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::operator::{build_representation, CompressedOperator};
use super::spec::{AlgebraMatrix, FredholmModuleSpec, ModuleName, Parity};
use crate::error::{HncError, Result};

pub const DEFAULT_KERNEL_TOL: f64 = 1e-8;
pub const DEFAULT_STABILIZATION: [usize; 3] = [32, 64, 128];

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct KernelCount {
    pub truncation: usize,
    /// Singular values below tolerance, before edge filtering.
    pub small_singular_values: usize,
    pub kernel: usize,
    pub cokernel: usize,
    pub min_singular_value: f64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct IndexReport {
    pub index: i64,
    pub tol: f64,
    pub counts: Vec<KernelCount>,
}

/// Number of vectors among the columns of `basis` (orthonormal) that live
/// mostly away from the far edge of the window.
fn count_near(basis: &DMatrix<Complex64>, far: &[bool]) -> usize {
    if basis.ncols() == 0 {
        return 0;
    }
    let mut proj = basis.clone();
    for (i, &f) in far.iter().enumerate() {
        if !f {
            proj.row_mut(i).fill(Complex64::new(0.0, 0.0));
        }
    }
    let gram = basis.adjoint() * proj;
    let eig = SymmetricEigen::new(gram);
    eig.eigenvalues.iter().filter(|&&x| x < 0.5).count()
}

fn kernel_count(op: &CompressedOperator, tol: f64) -> Result<KernelCount> {
    let svd = op.matrix.clone().svd(true, true);
    let (u, v_t) = match (svd.u, svd.v_t) {
        (Some(u), Some(v)) => (u, v),
        _ => return Err(HncError::NotConverged("singular value decomposition failed".into())),
    };
    let small: Vec<usize> = (0..svd.singular_values.len())
        .filter(|&i| svd.singular_values[i] < tol)
        .collect();
    let d = op.matrix.nrows();
    let ker = DMatrix::from_fn(d, small.len(), |x, j| v_t[(small[j], x)].conj());
    let coker = DMatrix::from_fn(d, small.len(), |x, j| u[(x, small[j])]);
    let min = svd.singular_values.iter().cloned().fold(f64::INFINITY, f64::min);
    Ok(KernelCount {
        truncation: op.truncation,
        small_singular_values: small.len(),
        kernel: count_near(&ker, &op.far_mask),
        cokernel: count_near(&coker, &op.far_mask),
        min_singular_value: min,
    })
}

/// `dim ker T − dim ker T*` from singular values below `tol`, counting only
/// (co)kernel vectors supported away from the artificial edge of the window,
/// and accepted only when identical across every supplied truncation.
pub fn fredholm_index(ops: &[CompressedOperator], tol: f64) -> Result<IndexReport> {
    if ops.len() < 2 {
        return Err(HncError::InvalidArgument("stabilization needs at least two truncations".into()));
    }
    let counts = ops.iter().map(|op| kernel_count(op, tol)).collect::<Result<Vec<_>>>()?;
    let indices: Vec<i64> = counts.iter().map(|c| c.kernel as i64 - c.cokernel as i64).collect();
    if indices.iter().any(|&i| i != indices[0]) {
        let detail: Vec<String> = counts
            .iter()
            .zip(&indices)
            .map(|(c, i)| format!("N={}: {}", c.truncation, i))
            .collect();
        return Err(HncError::NotStabilized(format!("index varies with truncation ({})", detail.join(", "))));
    }
    Ok(IndexReport {
        index: indices[0],
        tol,
        counts,
    })
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct OddPairingReport {
    pub module: ModuleName,
    pub value: i64,
    pub index: IndexReport,
}

/// `⟨z, [u]⟩ = Index(E π(u) E)` with `E = (1+F)/2`.
pub fn odd_pairing(
    module: ModuleName,
    u: &AlgebraMatrix,
    truncations: &[usize],
    tol: f64,
) -> Result<OddPairingReport> {
    if module.parity() != Parity::Odd {
        return Err(HncError::InvalidArgument(format!("{module} is not an odd module")));
    }
    if !u.is_unitary() {
        return Err(HncError::NotUnitary("u·u* or u*·u differs from the identity".into()));
    }
    let ops = truncations
        .iter()
        .map(|&n| {
            let spec = FredholmModuleSpec::new(module, n)?;
            build_representation(&spec, u)?.compress_nonnegative()
        })
        .collect::<Result<Vec<_>>>()?;
    let index = fredholm_index(&ops, tol)?;
    Ok(OddPairingReport {
        module,
        value: index.index,
        index,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::AlgebraElement;
    use crate::fredholm::spec::KClass;

    fn pair(m: ModuleName, u: AlgebraMatrix) -> i64 {
        odd_pairing(m, &u, &[16, 32, 48], DEFAULT_KERNEL_TOL).unwrap().value
    }

    #[test]
    fn shift_indices() {
        let v = AlgebraMatrix::scalar(AlgebraElement::v());
        let u = AlgebraMatrix::scalar(AlgebraElement::u());
        assert_eq!(pair(ModuleName::Z1prime, v.clone()), 1);
        assert_eq!(pair(ModuleName::Z1prime, u.clone()), 0);
        assert_eq!(pair(ModuleName::Z1, u.clone()), 1);
        assert_eq!(pair(ModuleName::Z1, v.star()), 0);
        assert_eq!(pair(ModuleName::Z1prime, v.star()), -1);
        assert_eq!(pair(ModuleName::Z1prime, KClass::Va.quotient_image()), 1);
        assert_eq!(pair(ModuleName::Z1, KClass::Va.quotient_image()), 0);
        assert_eq!(pair(ModuleName::W1prime, AlgebraMatrix::scalar(AlgebraElement::w())), 1);
    }

    #[test]
    fn powers_add() {
        let v3 = AlgebraMatrix::scalar(AlgebraElement::basis(0, 3, 0));
        assert_eq!(pair(ModuleName::Del0W0, v3), 3);
    }

    #[test]
    fn rejects_non_unitary_and_even() {
        let x = AlgebraMatrix::scalar(&AlgebraElement::u() + &AlgebraElement::v());
        assert!(matches!(
            odd_pairing(ModuleName::Z1, &x, &[16, 32], 1e-8),
            Err(HncError::NotUnitary(_))
        ));
        let u = AlgebraMatrix::scalar(AlgebraElement::u());
        assert!(odd_pairing(ModuleName::Z0, &u, &[16, 32], 1e-8).is_err());
        assert!(odd_pairing(ModuleName::Z1, &u, &[16], 1e-8).is_err());
    }
}
