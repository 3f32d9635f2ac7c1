//! Finitely supported twisted Laurent polynomials in `U`, `V`, `W`.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::coeff::Coeff;
use super::group::GroupElement;

/// An element `Σ a_{p,q,r} U^p V^q W^r` of the group ring with finite support.
///
/// Zero coefficients are never stored; terms iterate in lexicographic `(p,q,r)` order.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct AlgebraElement {
    terms: BTreeMap<GroupElement, Coeff>,
}

impl AlgebraElement {
    pub fn zero() -> Self {
        AlgebraElement::default()
    }

    pub fn one() -> Self {
        Self::monomial(GroupElement::IDENTITY, Coeff::one())
    }

    pub fn monomial(g: GroupElement, c: Coeff) -> Self {
        let mut x = AlgebraElement::zero();
        x.add_term(g, &c);
        x
    }

    pub fn basis(p: i64, q: i64, r: i64) -> Self {
        Self::monomial(GroupElement::new(p, q, r), Coeff::one())
    }

    pub fn u() -> Self {
        Self::basis(1, 0, 0)
    }

    pub fn v() -> Self {
        Self::basis(0, 1, 0)
    }

    pub fn w() -> Self {
        Self::basis(0, 0, 1)
    }

    pub fn scalar(c: Coeff) -> Self {
        Self::monomial(GroupElement::IDENTITY, c)
    }

    pub fn from_terms<I: IntoIterator<Item = (GroupElement, Coeff)>>(terms: I) -> Self {
        let mut x = AlgebraElement::zero();
        for (g, c) in terms {
            x.add_term(g, &c);
        }
        x
    }

    pub fn add_term(&mut self, g: GroupElement, c: &Coeff) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(g).or_insert_with(Coeff::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&g);
        }
    }

    pub fn coeff(&self, g: GroupElement) -> Coeff {
        self.terms.get(&g).cloned().unwrap_or_else(Coeff::zero)
    }

    pub fn coeff_at(&self, p: i64, q: i64, r: i64) -> Coeff {
        self.coeff(GroupElement::new(p, q, r))
    }

    pub fn terms(&self) -> impl Iterator<Item = (&GroupElement, &Coeff)> {
        self.terms.iter()
    }

    pub fn support(&self) -> impl Iterator<Item = GroupElement> + '_ {
        self.terms.keys().copied()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn scale(&self, c: &Coeff) -> Self {
        if c.is_zero() {
            return AlgebraElement::zero();
        }
        AlgebraElement {
            terms: self.terms.iter().map(|(g, a)| (*g, a * c)).collect(),
        }
    }

    /// Twisted convolution.
    pub fn mul(&self, other: &AlgebraElement) -> AlgebraElement {
        let mut out = AlgebraElement::zero();
        for (g1, a1) in &self.terms {
            for (g2, a2) in &other.terms {
                out.add_term(g1.mul(*g2), &(a1 * a2));
            }
        }
        out
    }

    /// Involution: `a·U^pV^qW^r ↦ conj(a)·(U^pV^qW^r)⁻¹`.
    pub fn star(&self) -> AlgebraElement {
        AlgebraElement {
            terms: self.terms.iter().map(|(g, a)| (g.inv(), a.conj())).collect(),
        }
    }

    /// `xy - yx`.
    pub fn commutator(&self, other: &AlgebraElement) -> AlgebraElement {
        &self.mul(other) - &other.mul(self)
    }

    /// Central iff it commutes with both `U` and `V`.
    pub fn is_central(&self) -> bool {
        self.commutator(&AlgebraElement::u()).is_zero()
            && self.commutator(&AlgebraElement::v()).is_zero()
    }

    pub fn supported_on_w_axis(&self) -> bool {
        self.support().all(|g| g.is_central())
    }

    /// `αⁿ(x) = Vⁿ x V⁻ⁿ`; on monomials `(p,q,r) ↦ (p,q,r+np)`.
    pub fn apply_automorphism(&self, n: i64) -> AlgebraElement {
        AlgebraElement {
            terms: self
                .terms
                .iter()
                .map(|(g, a)| (GroupElement::new(g.p, g.q, g.r + n * g.p), a.clone()))
                .collect(),
        }
    }

    /// Image under `W ↦ 1`: coefficients summed along `r`, result supported on `r = 0`.
    pub fn quotient_to_torus(&self) -> AlgebraElement {
        let mut out = AlgebraElement::zero();
        for (g, a) in &self.terms {
            out.add_term(GroupElement::new(g.p, g.q, 0), a);
        }
        out
    }

    /// Sum of all coefficients: the character `U, V, W ↦ 1`.
    pub fn augmentation(&self) -> Coeff {
        let mut s = Coeff::zero();
        for a in self.terms.values() {
            s += a;
        }
        s
    }

    pub fn pow(&self, n: u32) -> AlgebraElement {
        let mut acc = AlgebraElement::one();
        for _ in 0..n {
            acc = acc.mul(self);
        }
        acc
    }

    /// Largest `|p|`, `|q|`, `|r|` appearing in the support.
    pub fn max_abs_exponents(&self) -> (i64, i64, i64) {
        self.support().fold((0, 0, 0), |(a, b, c), g| {
            (a.max(g.p.abs()), b.max(g.q.abs()), c.max(g.r.abs()))
        })
    }
}

impl<'a> Add<&'a AlgebraElement> for &'a AlgebraElement {
    type Output = AlgebraElement;
    fn add(self, rhs: &AlgebraElement) -> AlgebraElement {
        let mut out = self.clone();
        for (g, c) in &rhs.terms {
            out.add_term(*g, c);
        }
        out
    }
}

impl<'a> Sub<&'a AlgebraElement> for &'a AlgebraElement {
    type Output = AlgebraElement;
    fn sub(self, rhs: &AlgebraElement) -> AlgebraElement {
        let mut out = self.clone();
        for (g, c) in &rhs.terms {
            out.add_term(*g, &-c);
        }
        out
    }
}

impl<'a> Mul<&'a AlgebraElement> for &'a AlgebraElement {
    type Output = AlgebraElement;
    fn mul(self, rhs: &AlgebraElement) -> AlgebraElement {
        AlgebraElement::mul(self, rhs)
    }
}

impl Neg for &AlgebraElement {
    type Output = AlgebraElement;
    fn neg(self) -> AlgebraElement {
        AlgebraElement {
            terms: self.terms.iter().map(|(g, a)| (*g, -a)).collect(),
        }
    }
}

impl fmt::Display for AlgebraElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (g, a) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "{a}·U^{}V^{}W^{}", g.p, g.q, g.r)?;
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct TermJson {
    p: i64,
    q: i64,
    r: i64,
    re: String,
    im: String,
}

#[derive(Serialize, Deserialize)]
struct ElementJson {
    terms: Vec<TermJson>,
}

impl Serialize for AlgebraElement {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let terms = self
            .terms
            .iter()
            .map(|(g, a)| TermJson {
                p: g.p,
                q: g.q,
                r: g.r,
                re: Coeff::format_rational(&a.re),
                im: Coeff::format_rational(&a.im),
            })
            .collect();
        ElementJson { terms }.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for AlgebraElement {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let raw = ElementJson::deserialize(deserializer)?;
        let mut x = AlgebraElement::zero();
        for t in raw.terms {
            let re = Coeff::parse_rational(&t.re).map_err(D::Error::custom)?;
            let im = Coeff::parse_rational(&t.im).map_err(D::Error::custom)?;
            x.add_term(GroupElement::new(t.p, t.q, t.r), &Coeff::new(re, im));
        }
        Ok(x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn b(p: i64, q: i64, r: i64) -> AlgebraElement {
        AlgebraElement::basis(p, q, r)
    }

    #[test]
    fn vu_is_wuv() {
        let vu = AlgebraElement::v().mul(&AlgebraElement::u());
        assert_eq!(vu, b(1, 1, 1));
    }

    #[test]
    fn square_of_u_plus_v() {
        let s = &AlgebraElement::u() + &AlgebraElement::v();
        let sq = s.mul(&s);
        let expected = AlgebraElement::from_terms(
            [(2, 0, 0), (1, 1, 0), (1, 1, 1), (0, 2, 0)]
                .into_iter()
                .map(|(p, q, r)| (GroupElement::new(p, q, r), Coeff::one())),
        );
        assert_eq!(sq, expected);
    }

    #[test]
    fn zero_coefficients_are_dropped() {
        let x = &b(1, 0, 0) - &b(1, 0, 0);
        assert!(x.is_zero());
        assert_eq!(x.len(), 0);
    }

    #[test]
    fn star_examples() {
        assert_eq!(AlgebraElement::u().star(), b(-1, 0, 0));
        assert_eq!(b(1, 1, 0).star(), b(-1, -1, 1));
        let x = AlgebraElement::monomial(GroupElement::W, Coeff::from_ints(2, 3));
        assert_eq!(
            x.star(),
            AlgebraElement::monomial(GroupElement::new(0, 0, -1), Coeff::from_ints(2, -3))
        );
    }

    #[test]
    fn centrality_examples() {
        assert!(AlgebraElement::w().is_central());
        assert!(!AlgebraElement::u().is_central());
        let x = &AlgebraElement::scalar(Coeff::from_int(2))
            + &AlgebraElement::monomial(GroupElement::new(0, 0, -1), Coeff::from_int(3));
        assert!(x.is_central());
        // [U,V] = (W-1)UV
        let c = AlgebraElement::u().commutator(&AlgebraElement::v());
        assert_eq!(c, &b(1, 1, 0) - &b(1, 1, 1));
    }

    #[test]
    fn automorphism_examples() {
        assert_eq!(AlgebraElement::u().apply_automorphism(1), b(1, 0, 1));
        assert_eq!(AlgebraElement::w().apply_automorphism(1), AlgebraElement::w());
        assert_eq!(AlgebraElement::v().apply_automorphism(3), AlgebraElement::v());
        let x = &b(2, -1, 3) + &b(-1, 4, 0);
        let conj = AlgebraElement::v()
            .mul(&x)
            .mul(&AlgebraElement::v().star());
        assert_eq!(x.apply_automorphism(1), conj);
        assert_eq!(x.apply_automorphism(5).apply_automorphism(-5), x);
    }

    #[test]
    fn torus_quotient_examples() {
        assert!((&AlgebraElement::w() - &AlgebraElement::one())
            .quotient_to_torus()
            .is_zero());
        let vu = AlgebraElement::v().mul(&AlgebraElement::u());
        let uv = AlgebraElement::u().mul(&AlgebraElement::v());
        assert!((&vu - &uv).quotient_to_torus().is_zero());
        let x = &AlgebraElement::u()
            + &AlgebraElement::w()
                .mul(&AlgebraElement::u())
                .scale(&Coeff::from_int(2));
        assert_eq!(
            x.quotient_to_torus(),
            AlgebraElement::u().scale(&Coeff::from_int(3))
        );
    }

    #[test]
    fn json_round_trip_and_order() {
        let x = AlgebraElement::from_terms([
            (GroupElement::new(1, 0, 0), Coeff::ratio(3, 4)),
            (GroupElement::new(-1, 2, 0), Coeff::from_ints(0, -2)),
        ]);
        let s = serde_json::to_string(&x).unwrap();
        assert_eq!(
            s,
            r#"{"terms":[{"p":-1,"q":2,"r":0,"re":"0","im":"-2"},{"p":1,"q":0,"r":0,"re":"3/4","im":"0"}]}"#
        );
        let back: AlgebraElement = serde_json::from_str(&s).unwrap();
        assert_eq!(back, x);
        assert!(serde_json::from_str::<AlgebraElement>(
            r#"{"terms":[{"p":0,"q":0,"r":0,"re":"a","im":"0"}]}"#
        )
        .is_err());
    }
}
