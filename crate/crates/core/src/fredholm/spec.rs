//! Named Fredholm modules and square matrices over the group ring.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::algebra::AlgebraElement;
use crate::error::{HncError, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ModuleName {
    Z0,
    Z1,
    Z1prime,
    W0,
    W1,
    W1prime,
    DiracT2,
    Del1W1,
    Del0W0,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Parity {
    Even,
    Odd,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum BaseSpace {
    C2,
    #[serde(rename = "l2Z")]
    L2Z,
    #[serde(rename = "l2Z2_pair")]
    L2Z2Pair,
}

impl ModuleName {
    pub const ALL: [ModuleName; 9] = [
        ModuleName::Z0,
        ModuleName::Z1,
        ModuleName::Z1prime,
        ModuleName::W0,
        ModuleName::W1,
        ModuleName::W1prime,
        ModuleName::DiracT2,
        ModuleName::Del1W1,
        ModuleName::Del0W0,
    ];

    pub fn parity(self) -> Parity {
        match self {
            ModuleName::Z0 | ModuleName::W0 | ModuleName::DiracT2 | ModuleName::Del1W1 => Parity::Even,
            _ => Parity::Odd,
        }
    }

    pub fn base_space(self) -> BaseSpace {
        match self {
            ModuleName::Z0 | ModuleName::W0 => BaseSpace::C2,
            ModuleName::DiracT2 | ModuleName::Del1W1 => BaseSpace::L2Z2Pair,
            _ => BaseSpace::L2Z,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            ModuleName::Z0 => "z0",
            ModuleName::Z1 => "z1",
            ModuleName::Z1prime => "z1prime",
            ModuleName::W0 => "w0",
            ModuleName::W1 => "w1",
            ModuleName::W1prime => "w1prime",
            ModuleName::DiracT2 => "dirac_T2",
            ModuleName::Del1W1 => "del1_w1",
            ModuleName::Del0W0 => "del0_w0",
        }
    }
}

impl fmt::Display for ModuleName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ModuleName {
    type Err = HncError;
    fn from_str(s: &str) -> Result<Self> {
        let norm = s.trim().to_ascii_lowercase().replace('\'', "prime").replace('-', "");
        let name = match norm.as_str() {
            "z0" => ModuleName::Z0,
            "z1" => ModuleName::Z1,
            "z1prime" | "z1p" => ModuleName::Z1prime,
            "w0" => ModuleName::W0,
            "w1" => ModuleName::W1,
            "w1prime" | "w1p" => ModuleName::W1prime,
            "dirac_t2" | "dirac" => ModuleName::DiracT2,
            "del1_w1" | "d1_w1" => ModuleName::Del1W1,
            "del0_w0" | "d0_w0" => ModuleName::Del0W0,
            _ => return Err(HncError::Parse(format!("unknown module `{s}`"))),
        };
        Ok(name)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FredholmModuleSpec {
    pub name: ModuleName,
    pub parity: Parity,
    pub base_space: BaseSpace,
    pub truncation: usize,
}

impl FredholmModuleSpec {
    pub fn new(name: ModuleName, truncation: usize) -> Result<Self> {
        if truncation == 0 {
            return Err(HncError::InvalidArgument("truncation must be positive".into()));
        }
        Ok(FredholmModuleSpec {
            name,
            parity: name.parity(),
            base_space: name.base_space(),
            truncation,
        })
    }

    pub fn with_truncation(&self, truncation: usize) -> Result<Self> {
        FredholmModuleSpec::new(self.name, truncation)
    }
}

/// A `k×k` matrix over the group ring, row-major.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlgebraMatrix {
    pub rows: Vec<Vec<AlgebraElement>>,
}

impl AlgebraMatrix {
    pub fn scalar(x: AlgebraElement) -> Self {
        AlgebraMatrix { rows: vec![vec![x]] }
    }

    pub fn diag(entries: Vec<AlgebraElement>) -> Self {
        let k = entries.len();
        let mut rows = vec![vec![AlgebraElement::zero(); k]; k];
        for (i, e) in entries.into_iter().enumerate() {
            rows[i][i] = e;
        }
        AlgebraMatrix { rows }
    }

    pub fn identity(k: usize) -> Self {
        AlgebraMatrix::diag(vec![AlgebraElement::one(); k])
    }

    pub fn from_rows(rows: Vec<Vec<AlgebraElement>>) -> Result<Self> {
        let k = rows.len();
        if k == 0 || rows.iter().any(|r| r.len() != k) {
            return Err(HncError::InvalidArgument("matrix over the algebra must be square and nonempty".into()));
        }
        Ok(AlgebraMatrix { rows })
    }

    pub fn k(&self) -> usize {
        self.rows.len()
    }

    pub fn get(&self, i: usize, j: usize) -> &AlgebraElement {
        &self.rows[i][j]
    }

    pub fn star(&self) -> Self {
        let k = self.k();
        let rows = (0..k)
            .map(|i| (0..k).map(|j| self.rows[j][i].star()).collect())
            .collect();
        AlgebraMatrix { rows }
    }

    pub fn mul(&self, other: &AlgebraMatrix) -> Self {
        let k = self.k();
        let mut rows = vec![vec![AlgebraElement::zero(); k]; k];
        for (i, row) in rows.iter_mut().enumerate() {
            for (j, cell) in row.iter_mut().enumerate() {
                for l in 0..k {
                    *cell = &*cell + &self.rows[i][l].mul(&other.rows[l][j]);
                }
            }
        }
        AlgebraMatrix { rows }
    }

    pub fn is_unitary(&self) -> bool {
        let id = AlgebraMatrix::identity(self.k());
        self.mul(&self.star()) == id && self.star().mul(self) == id
    }

    pub fn is_projection(&self) -> bool {
        self.star() == *self && self.mul(self) == *self
    }

    /// Largest `|p|, |q|` exponent over all entries.
    pub fn support_radius(&self) -> i64 {
        self.rows
            .iter()
            .flatten()
            .map(|e| {
                let (p, q, _) = e.max_abs_exponents();
                p.max(q)
            })
            .max()
            .unwrap_or(0)
    }

    pub fn uses_v(&self) -> bool {
        self.rows.iter().flatten().any(|e| e.support().any(|g| g.q != 0))
    }
}

/// Generators of `K₀` and `K₁` of the group C*-algebra, by label.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum KClass {
    #[serde(rename = "[1]")]
    One,
    #[serde(rename = "[P_a]")]
    Pa,
    #[serde(rename = "[P_b]")]
    Pb,
    #[serde(rename = "[U]")]
    U,
    #[serde(rename = "[V]")]
    V,
    #[serde(rename = "[V_a]")]
    Va,
}

impl KClass {
    pub const EVEN: [KClass; 3] = [KClass::One, KClass::Pa, KClass::Pb];
    pub const ODD: [KClass; 3] = [KClass::U, KClass::V, KClass::Va];

    pub fn label(self) -> &'static str {
        match self {
            KClass::One => "[1]",
            KClass::Pa => "[P_a]",
            KClass::Pb => "[P_b]",
            KClass::U => "[U]",
            KClass::V => "[V]",
            KClass::Va => "[V_a]",
        }
    }

    /// Image under the quotient `W ↦ 1`. Every module used for numeric
    /// pairings factors through this quotient, so the image carries the
    /// whole pairing: `P_a, P_b ↦ diag(1,0)` and `V_a ↦ diag(V,1)`.
    pub fn quotient_image(self) -> AlgebraMatrix {
        let one = AlgebraElement::one;
        let zero = AlgebraElement::zero;
        match self {
            KClass::One => AlgebraMatrix::scalar(one()),
            KClass::Pa | KClass::Pb => AlgebraMatrix::diag(vec![one(), zero()]),
            KClass::U => AlgebraMatrix::scalar(AlgebraElement::u()),
            KClass::V => AlgebraMatrix::scalar(AlgebraElement::v()),
            KClass::Va => AlgebraMatrix::diag(vec![AlgebraElement::v(), one()]),
        }
    }
}

impl FromStr for KClass {
    type Err = HncError;
    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim().trim_start_matches('[').trim_end_matches(']');
        match t {
            "1" => Ok(KClass::One),
            "P_a" | "Pa" => Ok(KClass::Pa),
            "P_b" | "Pb" => Ok(KClass::Pb),
            "U" => Ok(KClass::U),
            "V" => Ok(KClass::V),
            "V_a" | "Va" => Ok(KClass::Va),
            _ => Err(HncError::Parse(format!("unknown K-theory class `{s}`"))),
        }
    }
}

/// Parses a unitary or projection argument: a K-class label, an element JSON,
/// or a `{"rows": [[...]]}` matrix JSON.
pub fn parse_algebra_matrix(s: &str) -> Result<AlgebraMatrix> {
    if let Ok(c) = s.parse::<KClass>() {
        return Ok(c.quotient_image());
    }
    match s.trim() {
        "1" | "I" => return Ok(AlgebraMatrix::identity(1)),
        "U" => return Ok(AlgebraMatrix::scalar(AlgebraElement::u())),
        "V" => return Ok(AlgebraMatrix::scalar(AlgebraElement::v())),
        "W" => return Ok(AlgebraMatrix::scalar(AlgebraElement::w())),
        _ => {}
    }
    let value: serde_json::Value = serde_json::from_str(s)
        .map_err(|e| HncError::Parse(format!("expected a class label or JSON: {e}")))?;
    if value.get("rows").is_some() {
        let m: AlgebraMatrix = serde_json::from_value(value)?;
        AlgebraMatrix::from_rows(m.rows)
    } else {
        Ok(AlgebraMatrix::scalar(serde_json::from_value(value)?))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_round_trip() {
        for n in ModuleName::ALL {
            assert_eq!(n.as_str().parse::<ModuleName>().unwrap(), n);
        }
        assert_eq!("z1'".parse::<ModuleName>().unwrap(), ModuleName::Z1prime);
        assert!("z7".parse::<ModuleName>().is_err());
    }

    #[test]
    fn class_images_are_unitary_or_projections() {
        for c in KClass::EVEN {
            assert!(c.quotient_image().is_projection(), "{c:?}");
        }
        for c in KClass::ODD {
            assert!(c.quotient_image().is_unitary(), "{c:?}");
        }
        let m = AlgebraMatrix::scalar(&AlgebraElement::u() + &AlgebraElement::v());
        assert!(!m.is_unitary());
    }

    #[test]
    fn parse_arguments() {
        assert_eq!(parse_algebra_matrix("[V_a]").unwrap(), KClass::Va.quotient_image());
        assert_eq!(parse_algebra_matrix("U").unwrap(), AlgebraMatrix::scalar(AlgebraElement::u()));
        let m = parse_algebra_matrix(r#"{"terms":[{"p":0,"q":1,"r":0,"re":"1","im":"0"}]}"#).unwrap();
        assert_eq!(m, AlgebraMatrix::scalar(AlgebraElement::v()));
        assert!(parse_algebra_matrix("{").is_err());
    }
}
