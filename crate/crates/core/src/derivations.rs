//! Derivations of `C[H₃]` given by their values on `U` and `V`, and the
//! constructive splitting `∂ = z₁∂₁ + z₂∂₂ + ∂ₓ`.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::algebra::{AlgebraElement, Coeff, GroupElement};
use crate::error::{HncError, Result};

/// `∂` determined by `∂(U)` (coefficients `a`) and `∂(V)` (coefficients `b`).
/// `∂(W)` vanishes for every consistent pair and is not stored.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Derivation {
    #[serde(rename = "dU")]
    pub du: AlgebraElement,
    #[serde(rename = "dV")]
    pub dv: AlgebraElement,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecompositionResult {
    pub z1: AlgebraElement,
    pub z2: AlgebraElement,
    pub x: AlgebraElement,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ConsistencyRule {
    /// `(b_{p,q+1,r-1} - b_{p,q+1,r+q-1}) + (a_{p+1,q,r-p+q-1} - a_{p+1,q,r+q-1}) = 0`
    CommutatorRelation,
    /// `a_{p,0,r} = 0` for `p ≠ 1`
    UAxis,
    /// `b_{0,q,r} = 0` for `q ≠ 1`
    VAxis,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub rule: ConsistencyRule,
    pub p: i64,
    pub q: i64,
    pub r: i64,
    pub residual: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConsistencyReport {
    pub pass: bool,
    pub violations: Vec<Violation>,
}

impl Derivation {
    pub fn new(du: AlgebraElement, dv: AlgebraElement) -> Self {
        Derivation { du, dv }
    }

    pub fn zero() -> Self {
        Derivation::new(AlgebraElement::zero(), AlgebraElement::zero())
    }

    /// `∂₁(U) = U, ∂₁(V) = 0` for `which = 1`; `∂₂(U) = 0, ∂₂(V) = V` for `which = 2`.
    pub fn canonical(which: u8) -> Result<Self> {
        match which {
            1 => Ok(Derivation::new(AlgebraElement::u(), AlgebraElement::zero())),
            2 => Ok(Derivation::new(AlgebraElement::zero(), AlgebraElement::v())),
            _ => Err(HncError::InvalidArgument(format!(
                "canonical derivation index must be 1 or 2, got {which}"
            ))),
        }
    }

    /// `∂ₓ(a) = ax - xa`.
    pub fn inner(x: &AlgebraElement) -> Self {
        Derivation::new(AlgebraElement::u().commutator(x), AlgebraElement::v().commutator(x))
    }

    pub fn add(&self, other: &Derivation) -> Derivation {
        Derivation::new(&self.du + &other.du, &self.dv + &other.dv)
    }

    pub fn check_consistency(&self) -> ConsistencyReport {
        let a = &self.du;
        let b = &self.dv;
        let mut violations = Vec::new();

        for (g, c) in a.terms() {
            if g.q == 0 && g.p != 1 {
                violations.push(violation(ConsistencyRule::UAxis, *g, c));
            }
        }
        for (g, c) in b.terms() {
            if g.p == 0 && g.q != 1 {
                violations.push(violation(ConsistencyRule::VAxis, *g, c));
            }
        }

        // Only cells that touch the support can carry a nonzero residual.
        let mut cells = BTreeSet::new();
        for g in b.support() {
            let (p, q) = (g.p, g.q - 1);
            cells.insert((p, q, g.r + 1));
            cells.insert((p, q, g.r - q + 1));
        }
        for g in a.support() {
            let (p, q) = (g.p - 1, g.q);
            cells.insert((p, q, g.r + p - q + 1));
            cells.insert((p, q, g.r - q + 1));
        }
        for (p, q, r) in cells {
            let res = relation_residual(a, b, p, q, r);
            if !res.is_zero() {
                violations.push(violation(
                    ConsistencyRule::CommutatorRelation,
                    GroupElement::new(p, q, r),
                    &res,
                ));
            }
        }

        ConsistencyReport {
            pass: violations.is_empty(),
            violations,
        }
    }

    pub fn is_consistent(&self) -> bool {
        self.check_consistency().pass
    }

    /// Leibniz expansion of `∂(VUV*U*)`, defined for any pair of images.
    /// It vanishes exactly when the pair extends to a derivation.
    pub fn formal_dw(&self) -> AlgebraElement {
        let u = AlgebraElement::u();
        let v = AlgebraElement::v();
        let us = u.star();
        let vs = v.star();
        let dus = self.d_inverse_unit(&us, &self.du);
        let dvs = self.d_inverse_unit(&vs, &self.dv);
        let mut out = AlgebraElement::zero();
        out = &out + &self.dv.mul(&u).mul(&vs).mul(&us);
        out = &out + &v.mul(&self.du).mul(&vs).mul(&us);
        out = &out + &v.mul(&u).mul(&dvs).mul(&us);
        out = &out + &v.mul(&u).mul(&vs).mul(&dus);
        out
    }

    fn d_inverse_unit(&self, inv: &AlgebraElement, d: &AlgebraElement) -> AlgebraElement {
        -&inv.mul(d).mul(inv)
    }

    /// Leibniz extension to an arbitrary element.
    pub fn apply(&self, x: &AlgebraElement) -> Result<AlgebraElement> {
        let report = self.check_consistency();
        if !report.pass {
            return Err(inconsistent(&report));
        }
        Ok(self.apply_unchecked(x))
    }

    fn apply_unchecked(&self, x: &AlgebraElement) -> AlgebraElement {
        let mut out = AlgebraElement::zero();
        let mut cache_u: BTreeMap<i64, AlgebraElement> = BTreeMap::new();
        let mut cache_v: BTreeMap<i64, AlgebraElement> = BTreeMap::new();
        for (g, c) in x.terms() {
            if g.p == 0 && g.q == 0 {
                continue;
            }
            let up = AlgebraElement::basis(g.p, 0, 0);
            let vq = AlgebraElement::basis(0, g.q, 0);
            let wr = AlgebraElement::basis(0, 0, g.r);
            let dup = cache_u
                .entry(g.p)
                .or_insert_with(|| self.d_power(&AlgebraElement::u(), &self.du, g.p))
                .clone();
            let dvq = cache_v
                .entry(g.q)
                .or_insert_with(|| self.d_power(&AlgebraElement::v(), &self.dv, g.q))
                .clone();
            // ∂(U^p V^q W^r) = ∂(U^p) V^q W^r + U^p ∂(V^q) W^r
            let term = &dup.mul(&vq).mul(&wr) + &up.mul(&dvq).mul(&wr);
            out = &out + &term.scale(c);
        }
        out
    }

    /// `∂(gⁿ)` for a unitary generator `g` with `∂(g) = dg`.
    fn d_power(&self, g: &AlgebraElement, dg: &AlgebraElement, n: i64) -> AlgebraElement {
        let (base, dbase) = if n < 0 {
            let gi = g.star();
            let dgi = self.d_inverse_unit(&gi, dg);
            (gi, dgi)
        } else {
            (g.clone(), dg.clone())
        };
        let mut pow = AlgebraElement::one();
        let mut dpow = AlgebraElement::zero();
        for _ in 0..n.unsigned_abs() {
            dpow = &dpow.mul(&base) + &pow.mul(&dbase);
            pow = pow.mul(&base);
        }
        dpow
    }
}

fn violation(rule: ConsistencyRule, g: GroupElement, c: &Coeff) -> Violation {
    Violation {
        rule,
        p: g.p,
        q: g.q,
        r: g.r,
        residual: c.to_string(),
    }
}

fn inconsistent(report: &ConsistencyReport) -> HncError {
    let first = &report.violations[0];
    HncError::InconsistentDerivation(format!(
        "{} violation(s); first: {:?} at ({},{},{}) with residual {}",
        report.violations.len(),
        first.rule,
        first.p,
        first.q,
        first.r,
        first.residual
    ))
}

fn relation_residual(a: &AlgebraElement, b: &AlgebraElement, p: i64, q: i64, r: i64) -> Coeff {
    let mut s = b.coeff_at(p, q + 1, r - 1);
    s -= &b.coeff_at(p, q + 1, r + q - 1);
    s += &a.coeff_at(p + 1, q, r - p + q - 1);
    s -= &a.coeff_at(p + 1, q, r + q - 1);
    s
}

/// `dU = z₁U + [U,x]`, `dV = z₂V + [V,x]`.
pub fn compose_from_parts(
    z1: &AlgebraElement,
    z2: &AlgebraElement,
    x: &AlgebraElement,
) -> Result<Derivation> {
    for (name, z) in [("z1", z1), ("z2", z2)] {
        if !z.is_central() {
            return Err(HncError::NotCentral(format!("{name} = {z}")));
        }
    }
    let inner = Derivation::inner(x);
    Ok(Derivation::new(
        &z1.mul(&AlgebraElement::u()) + &inner.du,
        &z2.mul(&AlgebraElement::v()) + &inner.dv,
    ))
}

/// Sign region of a cell with `p, q ≠ 0`; the eight regions partition the
/// off-axis cells by `(sign p, sign q, sign r)` with `r = 0` counted as positive.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SignCase(pub u8);

impl SignCase {
    pub fn of(p: i64, q: i64, r: i64) -> Option<SignCase> {
        if p == 0 || q == 0 {
            return None;
        }
        let idx = match (p > 0, q > 0, r >= 0) {
            (true, true, true) => 1,
            (true, true, false) => 2,
            (true, false, true) => 3,
            (true, false, false) => 4,
            (false, true, true) => 5,
            (false, true, false) => 6,
            (false, false, true) => 7,
            (false, false, false) => 8,
        };
        Some(SignCase(idx))
    }

    /// Which telescope each case uses: `true` for the tail `Σ_{k≥1}` toward
    /// larger `r`, `false` for the head `Σ_{k≥0}` toward smaller `r`.
    fn a_uses_upper_tail(self) -> bool {
        matches!(self.0, 1 | 4 | 5 | 8)
    }

    fn b_uses_upper_tail(self) -> bool {
        matches!(self.0, 1 | 3 | 6 | 8)
    }
}

/// `α_{p,q,r}` from the inner residual `a'`: `α_{p,q,r} - α_{p,q,r-q} = a'_{p+1,q,r}`.
fn alpha_from_a(a: &AlgebraElement, p: i64, q: i64, r: i64, upper: bool, span: i64) -> Coeff {
    debug_assert!(q != 0);
    let mut s = Coeff::zero();
    if upper {
        // -Σ_{k≥1} a'_{p+1,q,r+kq}
        for k in 1..=span {
            s -= &a.coeff_at(p + 1, q, r + k * q);
        }
    } else {
        // Σ_{k≥0} a'_{p+1,q,r-kq}
        for k in 0..=span {
            s += &a.coeff_at(p + 1, q, r - k * q);
        }
    }
    s
}

/// `α_{p,q,r}` from the inner residual `b'`: `α_{p,q,r-p} - α_{p,q,r} = b'_{p,q+1,r}`.
fn alpha_from_b(b: &AlgebraElement, p: i64, q: i64, r: i64, upper: bool, span: i64) -> Coeff {
    debug_assert!(p != 0);
    let mut s = Coeff::zero();
    if upper {
        // Σ_{k≥1} b'_{p,q+1,r+kp}
        for k in 1..=span {
            s += &b.coeff_at(p, q + 1, r + k * p);
        }
    } else {
        // -Σ_{k≥0} b'_{p,q+1,r-kp}
        for k in 0..=span {
            s -= &b.coeff_at(p, q + 1, r - k * p);
        }
    }
    s
}

/// Number of telescope steps that can reach the support: the r-extent of the
/// support plus the distance from `r` to it, in units of the step.
fn telescope_span(x: &AlgebraElement, r: i64, step: i64) -> i64 {
    let (lo, hi) = x
        .support()
        .fold((i64::MAX, i64::MIN), |(lo, hi), g| (lo.min(g.r), hi.max(g.r)));
    if lo > hi {
        return 0;
    }
    let far = (r - lo).abs().max((r - hi).abs());
    far / step.abs() + 1
}

/// Both telescoped expressions for `α_{p,q,r}` at an off-axis cell, as
/// `(from a, from b)`.
pub fn alpha_both_ways(residual: &Derivation, p: i64, q: i64, r: i64) -> Option<(Coeff, Coeff)> {
    let case = SignCase::of(p, q, r)?;
    let sa = telescope_span(&residual.du, r, q);
    let sb = telescope_span(&residual.dv, r, p);
    Some((
        alpha_from_a(&residual.du, p, q, r, case.a_uses_upper_tail(), sa),
        alpha_from_b(&residual.dv, p, q, r, case.b_uses_upper_tail(), sb),
    ))
}

/// Strips the central parts: returns `(z₁, z₂, residual)` where the residual
/// is expected to be inner.
pub fn split_central(d: &Derivation) -> (AlgebraElement, AlgebraElement, Derivation) {
    let z1 = AlgebraElement::from_terms(
        d.du.terms()
            .filter(|(g, _)| g.p == 1 && g.q == 0)
            .map(|(g, c)| (GroupElement::new(0, 0, g.r), c.clone())),
    );
    let z2 = AlgebraElement::from_terms(
        d.dv.terms()
            .filter(|(g, _)| g.p == 0 && g.q == 1)
            .map(|(g, c)| (GroupElement::new(0, 0, g.r), c.clone())),
    );
    let residual = Derivation::new(
        &d.du - &z1.mul(&AlgebraElement::u()),
        &d.dv - &z2.mul(&AlgebraElement::v()),
    );
    (z1, z2, residual)
}

pub fn decompose(d: &Derivation) -> Result<DecompositionResult> {
    let report = d.check_consistency();
    if !report.pass {
        return Err(inconsistent(&report));
    }
    let (z1, z2, res) = split_central(d);
    check_axis_obstruction(&res)?;

    // Columns (p,q) of x that can be nonzero, and the r-range to scan in each.
    let mut columns: BTreeMap<(i64, i64), (i64, i64)> = BTreeMap::new();
    let mut widen = |p: i64, q: i64, r: i64, pad: i64| {
        let e = columns.entry((p, q)).or_insert((r, r));
        e.0 = e.0.min(r - pad);
        e.1 = e.1.max(r + pad);
    };
    for g in res.du.support() {
        if g.p - 1 != 0 || g.q != 0 {
            widen(g.p - 1, g.q, g.r, g.q.abs());
        }
    }
    for g in res.dv.support() {
        if g.q - 1 != 0 || g.p != 0 {
            widen(g.p, g.q - 1, g.r, g.p.abs());
        }
    }

    let mut x = AlgebraElement::zero();
    for (&(p, q), &(lo, hi)) in &columns {
        if p == 0 && q == 0 {
            continue;
        }
        for r in lo..=hi {
            let alpha = if q != 0 && p != 0 {
                let case = SignCase::of(p, q, r).expect("off-axis cell");
                let span = telescope_span(&res.du, r, q);
                alpha_from_a(&res.du, p, q, r, case.a_uses_upper_tail(), span)
            } else if q == 0 {
                let span = telescope_span(&res.dv, r, p);
                alpha_from_b(&res.dv, p, 0, r, false, span)
            } else {
                let span = telescope_span(&res.du, r, q);
                alpha_from_a(&res.du, 0, q, r, false, span)
            };
            x.add_term(GroupElement::new(p, q, r), &alpha);
        }
    }

    let rebuilt = compose_from_parts(&z1, &z2, &x)?;
    if &rebuilt != d {
        let diff = rebuilt.add(&Derivation::new(-&d.du, -&d.dv));
        return Err(HncError::ReconstructionMismatch(format!(
            "dU differs by {}, dV differs by {}",
            diff.du, diff.dv
        )));
    }
    Ok(DecompositionResult { z1, z2, x })
}

/// On the axis columns `α_{0,q,·}` and `α_{p,0,·}` the telescope runs over the
/// whole column, so the column total of `a'_{1,q,·}` (resp. `b'_{p,1,·}`) must
/// vanish for the inner part to have finite support. Consistency alone does not
/// force this: `∂(U) = UV, ∂(V) = 0` is a consistent derivation whose inner part
/// would be `V(1-W)⁻¹`.
fn check_axis_obstruction(res: &Derivation) -> Result<()> {
    let mut a_tot: BTreeMap<i64, Coeff> = BTreeMap::new();
    for (g, c) in res.du.terms() {
        if g.p == 1 && g.q != 0 {
            *a_tot.entry(g.q).or_insert_with(Coeff::zero) += c;
        }
    }
    let mut b_tot: BTreeMap<i64, Coeff> = BTreeMap::new();
    for (g, c) in res.dv.terms() {
        if g.q == 1 && g.p != 0 {
            *b_tot.entry(g.p).or_insert_with(Coeff::zero) += c;
        }
    }
    let bad_a: Vec<String> = a_tot
        .iter()
        .filter(|(_, c)| !c.is_zero())
        .map(|(q, c)| format!("Σ_r a(1,{q},r) = {c}"))
        .collect();
    let bad_b: Vec<String> = b_tot
        .iter()
        .filter(|(_, c)| !c.is_zero())
        .map(|(p, c)| format!("Σ_r b({p},1,r) = {c}"))
        .collect();
    if bad_a.is_empty() && bad_b.is_empty() {
        return Ok(());
    }
    let all: Vec<String> = bad_a.into_iter().chain(bad_b).collect();
    Err(HncError::ReconstructionMismatch(format!(
        "no finitely supported inner part: {}",
        all.join(", ")
    )))
}

impl DecompositionResult {
    pub fn compose(&self) -> Result<Derivation> {
        compose_from_parts(&self.z1, &self.z2, &self.x)
    }
}

/// Convenience for tests and the CLI: `c·U^pV^qW^r`.
pub fn term(p: i64, q: i64, r: i64, c: i64) -> AlgebraElement {
    if c == 0 {
        return AlgebraElement::zero();
    }
    let coeff = if c == 1 { Coeff::one() } else { Coeff::from_int(c) };
    AlgebraElement::monomial(GroupElement::new(p, q, r), coeff)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e(p: i64, q: i64, r: i64) -> AlgebraElement {
        AlgebraElement::basis(p, q, r)
    }

    #[test]
    fn canonical_derivations() {
        let d1 = Derivation::canonical(1).unwrap();
        assert_eq!(d1.du, e(1, 0, 0));
        assert!(d1.dv.is_zero());
        let d2 = Derivation::canonical(2).unwrap();
        assert_eq!(d2.dv, e(0, 1, 0));
        assert!(d1.is_consistent() && d2.is_consistent());
        assert!(Derivation::canonical(3).is_err());
    }

    #[test]
    fn inner_derivation_of_u() {
        let d = Derivation::inner(&AlgebraElement::u());
        assert!(d.du.is_zero());
        assert_eq!(d.dv, &e(1, 1, 1) - &e(1, 1, 0));
        assert!(Derivation::inner(&AlgebraElement::w()).du.is_zero());
        assert!(Derivation::inner(&AlgebraElement::w()).dv.is_zero());
    }

    #[test]
    fn inner_derivation_shift_formulas() {
        let x = &(&e(1, 1, 0) + &e(-2, 3, 1)) + &term(2, -1, 4, 5);
        let d = Derivation::inner(&x);
        let (pmax, qmax, rmax) = (6, 6, 12);
        for p in -pmax..=pmax {
            for q in -qmax..=qmax {
                for r in -rmax..=rmax {
                    let a = &x.coeff_at(p - 1, q, r) - &x.coeff_at(p - 1, q, r - q);
                    let b = &x.coeff_at(p, q - 1, r - p) - &x.coeff_at(p, q - 1, r);
                    assert_eq!(d.du.coeff_at(p, q, r), a, "a at ({p},{q},{r})");
                    assert_eq!(d.dv.coeff_at(p, q, r), b, "b at ({p},{q},{r})");
                }
            }
        }
    }

    #[test]
    fn apply_examples() {
        let d1 = Derivation::canonical(1).unwrap();
        assert_eq!(d1.apply(&e(2, 0, 0)).unwrap(), term(2, 0, 0, 2));
        assert!(d1.apply(&AlgebraElement::w()).unwrap().is_zero());
        let d2 = Derivation::canonical(2).unwrap();
        assert_eq!(d2.apply(&e(1, 1, 0)).unwrap(), e(1, 1, 0));
        assert_eq!(d1.apply(&e(-3, 2, 1)).unwrap(), term(-3, 2, 1, -3));
    }

    #[test]
    fn axis_rule_violation() {
        let d = Derivation::new(e(2, 0, 0), AlgebraElement::zero());
        let rep = d.check_consistency();
        assert!(!rep.pass);
        assert!(rep.violations.iter().any(|v| v.rule == ConsistencyRule::UAxis && v.p == 2));
        assert!(d.apply(&AlgebraElement::u()).is_err());
        assert!(matches!(decompose(&d), Err(HncError::InconsistentDerivation(_))));
    }

    #[test]
    fn formal_dw_detects_inconsistency() {
        let good = Derivation::inner(&(&e(1, 2, 0) + &e(-1, 1, 3)));
        assert!(good.formal_dw().is_zero());
        let bad = good.add(&Derivation::new(AlgebraElement::zero(), e(1, 2, 0)));
        assert!(!bad.formal_dw().is_zero());
        assert!(!bad.is_consistent());
    }

    #[test]
    fn consistent_but_not_finitely_decomposable() {
        let d = Derivation::new(e(1, 1, 0), AlgebraElement::zero());
        assert!(d.is_consistent());
        assert!(d.formal_dw().is_zero());
        assert!(matches!(decompose(&d), Err(HncError::ReconstructionMismatch(_))));
        let d = Derivation::new(AlgebraElement::zero(), term(-2, 1, 3, 4));
        assert!(d.is_consistent());
        assert!(matches!(decompose(&d), Err(HncError::ReconstructionMismatch(_))));
    }

    #[test]
    fn decompose_examples() {
        let r = decompose(&Derivation::canonical(1).unwrap()).unwrap();
        assert_eq!(r.z1, AlgebraElement::one());
        assert!(r.z2.is_zero() && r.x.is_zero());

        let r = decompose(&Derivation::inner(&AlgebraElement::u())).unwrap();
        assert!(r.z1.is_zero() && r.z2.is_zero());
        assert_eq!(r.x, AlgebraElement::u());

        let z1 = AlgebraElement::w();
        let x = e(1, 1, 0);
        let d = compose_from_parts(&z1, &AlgebraElement::zero(), &x).unwrap();
        let r = decompose(&d).unwrap();
        assert_eq!((r.z1, r.z2, r.x), (z1, AlgebraElement::zero(), x));
    }

    #[test]
    fn compose_rejects_non_central() {
        let err = compose_from_parts(&AlgebraElement::u(), &AlgebraElement::zero(), &AlgebraElement::zero());
        assert!(matches!(err, Err(HncError::NotCentral(_))));
        let d = compose_from_parts(&AlgebraElement::w(), &e(0, 0, -1), &(&AlgebraElement::u() + &AlgebraElement::v()))
            .unwrap();
        assert!(d.is_consistent());
    }

    #[test]
    fn sign_cases_partition() {
        assert_eq!(SignCase::of(1, 1, 0), Some(SignCase(1)));
        assert_eq!(SignCase::of(1, 1, -1), Some(SignCase(2)));
        assert_eq!(SignCase::of(-1, -1, -1), Some(SignCase(8)));
        assert_eq!(SignCase::of(0, 1, 1), None);
    }

    #[test]
    fn json_shape() {
        let d = Derivation::canonical(1).unwrap();
        let s = serde_json::to_string(&d).unwrap();
        assert!(s.starts_with("{\"dU\":"));
        let back: Derivation = serde_json::from_str(&s).unwrap();
        assert_eq!(back, d);
    }
}
