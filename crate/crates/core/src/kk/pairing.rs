//! Pairing tables between K-theory and K-homology, duality and faithfulness.

use serde::{Deserialize, Serialize};

use super::sequences::{khomology_sequence, pv_ktheory_sequence, IntegerMap};
use super::smith::IntMatrix;
use crate::error::Result;
use crate::fredholm::even::even_pairing_trace;
use crate::fredholm::index::odd_pairing;
use crate::fredholm::spec::{KClass, ModuleName};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EntrySource {
    /// Recomputed from an explicit Fredholm module.
    Numeric,
    /// No operator is available; the value is re-derived through duality.
    Duality,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PairingTable {
    pub rows: Vec<String>,
    pub cols: Vec<String>,
    pub entries: IntMatrix,
    pub sources: Vec<Vec<EntrySource>>,
}

impl PairingTable {
    fn new(rows: &[&str], cols: &[&str], entries: Vec<Vec<i64>>, numeric_cols: &[usize]) -> Self {
        let sources = rows
            .iter()
            .map(|_| {
                (0..cols.len())
                    .map(|j| if numeric_cols.contains(&j) { EntrySource::Numeric } else { EntrySource::Duality })
                    .collect()
            })
            .collect();
        PairingTable {
            rows: rows.iter().map(|s| s.to_string()).collect(),
            cols: cols.iter().map(|s| s.to_string()).collect(),
            entries: IntMatrix::from_rows(rows.len(), cols.len(), entries),
            sources,
        }
    }

    pub fn get(&self, row: &str, col: &str) -> Option<i64> {
        let i = self.rows.iter().position(|r| r == row)?;
        let j = self.cols.iter().position(|c| c == col)?;
        Some(self.entries.get(i, j))
    }
}

/// Rows are K-theory generators, columns K-homology generators.
pub fn pairing_tables() -> (PairingTable, PairingTable) {
    let even = PairingTable::new(
        &["[1]", "[P_a]", "[P_b]"],
        &["z0", "Dirac'", "d1(w1')"],
        vec![vec![1, 0, 0], vec![1, 1, 0], vec![1, 0, 1]],
        &[0],
    );
    let odd = PairingTable::new(
        &["[U]", "[V]", "[V_a]"],
        &["z1", "z1'", "d0(Dirac)"],
        vec![vec![1, 0, 0], vec![0, 1, 0], vec![0, 1, 1]],
        &[0, 1],
    );
    (even, odd)
}

/// Pairings over the base torus `C(T²) = C*(U, W)`.
pub fn base_tables() -> (PairingTable, PairingTable) {
    let even = PairingTable::new(&["[1]", "[P_a]"], &["w0", "Dirac"], vec![vec![1, 0], vec![1, 1]], &[]);
    let odd = PairingTable::new(&["[U]", "[W]"], &["w1", "w1'"], vec![vec![1, 0], vec![0, 1]], &[]);
    (even, odd)
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct EntryCheck {
    pub row: String,
    pub col: String,
    pub stored: i64,
    pub computed: i64,
    pub pass: bool,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TableVerification {
    pub checks: Vec<EntryCheck>,
    pub pass: bool,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct VerifyConfig {
    pub odd_truncations: Vec<usize>,
    pub even_truncation: usize,
    pub n_commutators: usize,
    pub tol: f64,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            odd_truncations: vec![32, 64, 128],
            even_truncation: 8,
            n_commutators: 4,
            tol: 1e-8,
        }
    }
}

/// Recomputes every numerically accessible entry: the `z0` column by the
/// trace formula, the `z1` and `z1'` columns by Toeplitz indices, and the
/// vanishing of `del1_w1` on all even generators.
pub fn verify_tables(cfg: &VerifyConfig) -> Result<TableVerification> {
    let (even, odd) = pairing_tables();
    let mut checks = Vec::new();
    for c in KClass::EVEN {
        let computed = even_pairing_trace(ModuleName::Z0, &c.quotient_image(), cfg.n_commutators, cfg.even_truncation, 0.1)?.value;
        let stored = even.get(c.label(), "z0").unwrap_or(i64::MIN);
        checks.push(EntryCheck {
            row: c.label().into(),
            col: "z0".into(),
            stored,
            computed,
            pass: stored == computed,
        });
        let zero = even_pairing_trace(ModuleName::Del1W1, &c.quotient_image(), cfg.n_commutators, cfg.even_truncation, 0.1)?.value;
        checks.push(EntryCheck {
            row: c.label().into(),
            col: "d1(w1)".into(),
            stored: 0,
            computed: zero,
            pass: zero == 0,
        });
    }
    for c in KClass::ODD {
        for (module, col) in [(ModuleName::Z1, "z1"), (ModuleName::Z1prime, "z1'")] {
            let computed = odd_pairing(module, &c.quotient_image(), &cfg.odd_truncations, cfg.tol)?.value;
            let stored = odd.get(c.label(), col).unwrap_or(i64::MIN);
            checks.push(EntryCheck {
                row: c.label().into(),
                col: col.into(),
                stored,
                computed,
                pass: stored == computed,
            });
        }
    }
    let pass = checks.iter().all(|c| c.pass);
    Ok(TableVerification { checks, pass })
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct IdentityCheck {
    pub name: String,
    pub lhs: i64,
    pub rhs: i64,
    pub pass: bool,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DualityReport {
    pub instances: Vec<IdentityCheck>,
    pub matrix_identities: Vec<IdentityCheck>,
    pub pass: bool,
    /// `⟨(id−α*)z, t⟩ = ⟨z, (id−α_*)t⟩` over the base torus with the stored
    /// signs. Reported, not gating: the two stored signs disagree.
    pub alpha_sign_consistent: bool,
}

fn map<'a>(maps: &'a [IntegerMap], name: &str) -> &'a IntegerMap {
    maps.iter().find(|m| m.name == name).expect("map present")
}

fn compare(name: &str, lhs: &IntMatrix, rhs: &IntMatrix, out: &mut Vec<IdentityCheck>) {
    for i in 0..lhs.rows {
        for j in 0..lhs.cols {
            let (l, r) = (lhs.get(i, j), rhs.get(i, j));
            out.push(IdentityCheck {
                name: format!("{name} [{i},{j}]"),
                lhs: l,
                rhs: r,
                pass: l == r,
            });
        }
    }
}

/// `⟨∂z, q⟩ = ⟨z, δq⟩` and `⟨i*z, t⟩ = ⟨z, i_*t⟩` as integer matrix identities,
/// plus the individually displayed instances.
pub fn check_duality() -> DualityReport {
    let k = pv_ktheory_sequence();
    let h = khomology_sequence();
    let (even, odd) = pairing_tables();
    let (base_even, base_odd) = base_tables();

    let delta0 = &map(&k, "delta_0").matrix;
    let delta1 = &map(&k, "delta_1").matrix;
    let istar_k0 = &map(&k, "i_* (K0)").matrix;
    let istar_k1 = &map(&k, "i_* (K1)").matrix;
    let alpha_k1 = &map(&k, "id - alpha_* (K1)").matrix;
    let d0 = &map(&h, "partial_0").matrix;
    let d1 = &map(&h, "partial_1").matrix;
    let ipull_0 = &map(&h, "i^* (KK0)").matrix;
    let ipull_1 = &map(&h, "i^* (KK1)").matrix;
    let alpha_kk1 = &map(&h, "id - alpha^* (KK1)").matrix;

    let mut matrix_identities = Vec::new();
    compare(
        "odd table * partial_0 = delta_1^T * base even",
        &odd.entries.mul(d0),
        &delta1.transpose().mul(&base_even.entries),
        &mut matrix_identities,
    );
    compare(
        "even table * partial_1 = delta_0^T * base odd",
        &even.entries.mul(d1),
        &delta0.transpose().mul(&base_odd.entries),
        &mut matrix_identities,
    );
    compare(
        "base even * i^* = i_*^T * even table",
        &base_even.entries.mul(ipull_0),
        &istar_k0.transpose().mul(&even.entries),
        &mut matrix_identities,
    );
    compare(
        "base odd * i^* = i_*^T * odd table",
        &base_odd.entries.mul(ipull_1),
        &istar_k1.transpose().mul(&odd.entries),
        &mut matrix_identities,
    );

    let pair_odd = |q: &str, z: &str| odd.get(q, z).unwrap();
    let pair_even = |p: &str, z: &str| even.get(p, z).unwrap();
    let base_even_pair = |t: &str, z: &str| base_even.get(t, z).unwrap();
    let base_odd_pair = |t: &str, z: &str| base_odd.get(t, z).unwrap();
    // ∂₀w₀ = z1', ∂₁w₁' = d1(w1'); δ₁[V_a] = [P_a], δ₁[V] = [1], δ₁[U] = 0, δ₀[P_b] = [W]
    let instances = vec![
        IdentityCheck {
            name: "<d0(w0), [V_a]> = <w0, [P_a]>".into(),
            lhs: pair_odd("[V_a]", "z1'"),
            rhs: base_even_pair("[P_a]", "w0"),
            pass: false,
        },
        IdentityCheck {
            name: "<d0(w0), [V]> = <w0, [1]>".into(),
            lhs: pair_odd("[V]", "z1'"),
            rhs: base_even_pair("[1]", "w0"),
            pass: false,
        },
        IdentityCheck {
            name: "<d0(w0), [U]> = <w0, 0>".into(),
            lhs: pair_odd("[U]", "z1'"),
            rhs: 0,
            pass: false,
        },
        IdentityCheck {
            name: "<d0(Dirac), [V_a]> = <Dirac, [P_a]>".into(),
            lhs: pair_odd("[V_a]", "d0(Dirac)"),
            rhs: base_even_pair("[P_a]", "Dirac"),
            pass: false,
        },
        IdentityCheck {
            name: "<d1(w1'), [P_b]> = <w1', [W]>".into(),
            lhs: pair_even("[P_b]", "d1(w1')"),
            rhs: base_odd_pair("[W]", "w1'"),
            pass: false,
        },
        IdentityCheck {
            name: "<d1(w1'), [P_a]> = <w1', 0>".into(),
            lhs: pair_even("[P_a]", "d1(w1')"),
            rhs: 0,
            pass: false,
        },
    ]
    .into_iter()
    .map(|mut c| {
        c.pass = c.lhs == c.rhs;
        c
    })
    .collect::<Vec<_>>();

    let alpha_sign_consistent =
        base_odd.entries.mul(alpha_kk1) == alpha_k1.transpose().mul(&base_odd.entries);
    let pass = instances.iter().chain(&matrix_identities).all(|c| c.pass);
    DualityReport {
        instances,
        matrix_identities,
        pass,
        alpha_sign_consistent,
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FaithfulnessReport {
    pub even_determinant: i64,
    pub odd_determinant: i64,
    pub pass: bool,
}

/// Unimodular tables: no nonzero integer class pairs trivially with everything.
pub fn check_faithfulness() -> FaithfulnessReport {
    let (even, odd) = pairing_tables();
    let e = even.entries.determinant();
    let o = odd.entries.determinant();
    FaithfulnessReport {
        even_determinant: e,
        odd_determinant: o,
        pass: e.abs() == 1 && o.abs() == 1,
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PullbackReport {
    /// `φ_*` on `K₀` into `K₀(C*(U,V))` over `{[1], [Bott]}`.
    pub phi_star: IntMatrix,
    pub z0_column: Vec<i64>,
    pub from_w0: Vec<i64>,
    pub del1_w1_from_dirac: Vec<i64>,
    pub pass: bool,
}

/// `φ_*[1] = φ_*[P_a] = φ_*[P_b] = [1]`, and the pullbacks `φ*(w₀) = z₀`,
/// `φ*(Dirac) = del1_w1` pair through it.
pub fn check_phi_pullback() -> PullbackReport {
    let phi = IntMatrix::from(vec![vec![1, 1, 1], vec![0, 0, 0]]);
    let (even, _) = pairing_tables();
    let w0_row = IntMatrix::from(vec![vec![1, 1]]);
    let dirac_row = IntMatrix::from(vec![vec![0, 1]]);
    let from_w0: Vec<i64> = w0_row.mul(&phi).row(0).to_vec();
    let del1: Vec<i64> = dirac_row.mul(&phi).row(0).to_vec();
    let z0_column = even.entries.column(0);
    let pass = from_w0 == z0_column && del1.iter().all(|&x| x == 0);
    PullbackReport {
        phi_star: phi,
        z0_column,
        from_w0,
        del1_w1_from_dirac: del1,
        pass,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn stated_tables() {
        let (even, odd) = pairing_tables();
        assert_eq!(even.get("[P_b]", "z0"), Some(1));
        assert_eq!(odd.get("[V_a]", "z1'"), Some(1));
        assert_eq!(odd.get("[U]", "d0(Dirac)"), Some(0));
        assert_eq!(even.sources[1][1], EntrySource::Duality);
        assert_eq!(odd.sources[2][1], EntrySource::Numeric);
    }

    #[test]
    fn duality_holds() {
        let r = check_duality();
        assert!(r.pass, "{r:#?}");
        assert_eq!(r.instances.len(), 6);
        assert!(!r.alpha_sign_consistent);
    }

    #[test]
    fn unimodular() {
        let f = check_faithfulness();
        assert_eq!((f.even_determinant, f.odd_determinant), (1, 1));
        assert!(f.pass);
    }

    #[test]
    fn pullback() {
        assert!(check_phi_pullback().pass);
    }

    #[test]
    fn numeric_entries_match() {
        let cfg = VerifyConfig {
            odd_truncations: vec![16, 32],
            even_truncation: 6,
            ..VerifyConfig::default()
        };
        let v = verify_tables(&cfg).unwrap();
        assert!(v.pass, "{v:#?}");
        assert_eq!(v.checks.len(), 12);
    }
}
