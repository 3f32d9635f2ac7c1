//! Seeded random inputs for verification suites.

use rand::Rng;

use crate::algebra::{AlgebraElement, Coeff, GroupElement};
use crate::group_structure::CentralizerCase;

pub fn random_group_element<R: Rng>(rng: &mut R, bx: i64) -> GroupElement {
    GroupElement::new(rng.gen_range(-bx..=bx), rng.gen_range(-bx..=bx), rng.gen_range(-bx..=bx))
}

/// Small Gaussian rational, never zero.
pub fn random_coeff<R: Rng>(rng: &mut R) -> Coeff {
    loop {
        let den = rng.gen_range(1..=4);
        let re = Coeff::ratio(rng.gen_range(-5..=5), den);
        let im = if rng.gen_bool(0.3) {
            Coeff::ratio(rng.gen_range(-3..=3), den)
        } else {
            Coeff::from_int(0)
        };
        let c = re + im * Coeff::i();
        if c != Coeff::from_int(0) {
            return c;
        }
    }
}

pub fn random_element<R: Rng>(rng: &mut R, bx: i64, max_terms: usize) -> AlgebraElement {
    let n = rng.gen_range(1..=max_terms);
    AlgebraElement::from_terms((0..n).map(|_| (random_group_element(rng, bx), random_coeff(rng))))
}

/// Polynomial in `W` only.
pub fn random_central<R: Rng>(rng: &mut R, bx: i64, max_terms: usize) -> AlgebraElement {
    let n = rng.gen_range(0..=max_terms);
    AlgebraElement::from_terms((0..n).map(|_| (GroupElement::new(0, 0, rng.gen_range(-bx..=bx)), random_coeff(rng))))
}

/// Drops the `U⁰V⁰` column, which no inner derivation sees.
pub fn strip_central(x: &AlgebraElement) -> AlgebraElement {
    AlgebraElement::from_terms(x.terms().filter(|(g, _)| g.p != 0 || g.q != 0).map(|(g, c)| (*g, c.clone())))
}

fn nonzero<R: Rng>(rng: &mut R, bx: i64) -> i64 {
    let v = rng.gen_range(1..=bx);
    if rng.gen_bool(0.5) {
        v
    } else {
        -v
    }
}

/// An element of the requested centralizer case with coordinates in `[-bx, bx]`.
pub fn random_case_element<R: Rng>(rng: &mut R, case: CentralizerCase, bx: i64) -> GroupElement {
    let r = rng.gen_range(-bx..=bx);
    match case {
        CentralizerCase::Case1 => GroupElement::new(nonzero(rng, bx), nonzero(rng, bx), r),
        CentralizerCase::Case2 => GroupElement::new(nonzero(rng, bx), 0, r),
        CentralizerCase::Case3 => GroupElement::new(0, nonzero(rng, bx), r),
        CentralizerCase::Case4a => GroupElement::new(0, 0, if rng.gen_bool(0.5) { 1 } else { -1 }),
        CentralizerCase::Case4b => {
            let m = rng.gen_range(2..=bx.max(2));
            GroupElement::new(0, 0, if rng.gen_bool(0.5) { m } else { -m })
        }
        CentralizerCase::Identity => GroupElement::IDENTITY,
    }
}
