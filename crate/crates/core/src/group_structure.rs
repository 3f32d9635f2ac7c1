//! Conjugacy classes and centralizers in `H₃`, cohomology of the quotients
//! `N_g = C_g/⟨g⟩`, and the aggregated cyclic-cohomology dimensions of `C[H₃]`.

use std::fmt;
use std::str::FromStr;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::algebra::GroupElement;
use crate::error::{HncError, Result};

pub const MAX_BRUTE_FORCE_BOX: i64 = 12;

/// Highest common factor with `hcf(a, 0) = |a|` and a nonnegative result.
pub fn hcf(a: i64, b: i64) -> i64 {
    a.gcd(&b)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum CentralizerCase {
    Case1,
    Case2,
    Case3,
    Case4a,
    Case4b,
    Identity,
}

/// Isomorphism type of `N_g`, or `H₃` itself.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "type")]
pub enum NgType {
    Z,
    ZxZl { l: i64 },
    Z2,
    CentralExtension { order: i64 },
    H3,
}

impl fmt::Display for NgType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NgType::Z => write!(f, "Z"),
            NgType::ZxZl { l } => write!(f, "ZxZ{l}"),
            NgType::Z2 => write!(f, "Z2"),
            NgType::CentralExtension { order } => write!(f, "CentralExtension({order})"),
            NgType::H3 => write!(f, "H3"),
        }
    }
}

impl FromStr for NgType {
    type Err = HncError;

    /// Accepts `Z`, `Z2`, `H3`, `ZxZ<l>`, `ZxZl(<l>)`, `CentralExtension(<n>)`.
    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        let bad = || HncError::Parse(format!("unsupported group descriptor `{s}`"));
        let num = |body: &str| -> Result<i64> { body.trim().parse::<i64>().map_err(|_| bad()) };
        let inside = |prefix: &str| -> Option<&str> {
            t.strip_prefix(prefix).and_then(|rest| rest.strip_prefix('(')).and_then(|r| r.strip_suffix(')'))
        };
        let ty = match t {
            "Z" => NgType::Z,
            "Z2" | "Z^2" | "ZxZ" => NgType::Z2,
            "H3" => NgType::H3,
            _ => {
                if let Some(body) = inside("ZxZl") {
                    NgType::ZxZl { l: num(body)? }
                } else if let Some(body) = inside("CentralExtension") {
                    NgType::CentralExtension { order: num(body)? }
                } else if let Some(body) = t.strip_prefix("ZxZ") {
                    NgType::ZxZl { l: num(body)? }
                } else {
                    return Err(bad());
                }
            }
        };
        match ty {
            NgType::ZxZl { l } if l < 2 => Err(HncError::InvalidArgument(format!(
                "Z×Z_l needs l ≥ 2 (l = 1 is reported as Z), got {l}"
            ))),
            NgType::CentralExtension { order } if order < 2 => Err(HncError::InvalidArgument(
                format!("central extension needs order ≥ 2, got {order}"),
            )),
            ty => Ok(ty),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CentralizerReport {
    pub element: GroupElement,
    pub case: CentralizerCase,
    pub k: i64,
    pub p_prime: i64,
    pub q_prime: i64,
    #[serde(rename = "S_k")]
    pub s_k: i64,
    pub l: i64,
    pub ng_type: NgType,
}

impl CentralizerReport {
    /// Closed-form membership of `h` in `C_g`.
    pub fn centralizes(&self, h: GroupElement) -> bool {
        match self.case {
            // h ∈ {(n p′, n q′, c)}
            CentralizerCase::Case1 => {
                h.p * self.q_prime == h.q * self.p_prime
            }
            CentralizerCase::Case2 => h.q == 0,
            CentralizerCase::Case3 => h.p == 0,
            CentralizerCase::Case4a | CentralizerCase::Case4b | CentralizerCase::Identity => true,
        }
    }
}

/// `S_n = p′q′n(n−1)/2`, the `W`-exponent of `(U^{p′}V^{q′})ⁿ`.
pub fn s_n(p_prime: i64, q_prime: i64, n: i64) -> i64 {
    p_prime * q_prime * (n * (n - 1) / 2)
}

fn ng_from_l(l: i64) -> NgType {
    if l == 1 {
        NgType::Z
    } else {
        NgType::ZxZl { l }
    }
}

pub fn classify_element(g: GroupElement) -> CentralizerReport {
    let (p, q, r) = (g.p, g.q, g.r);
    let k = hcf(p, q);
    let (p_prime, q_prime) = if k == 0 { (0, 0) } else { (p / k, q / k) };
    let base = |case, s_k, l, ng_type| CentralizerReport {
        element: g,
        case,
        k,
        p_prime,
        q_prime,
        s_k,
        l,
        ng_type,
    };
    if p != 0 && q != 0 {
        // C_g ≅ Z² on (U^{p′}V^{q′}, W); g = (U^{p′}V^{q′})^k W^{r−S_k}.
        let s_k = s_n(p_prime, q_prime, k);
        let l = hcf(k, r - s_k);
        base(CentralizerCase::Case1, s_k, l, ng_from_l(l))
    } else if p != 0 {
        let l = hcf(p, r);
        base(CentralizerCase::Case2, 0, l, ng_from_l(l))
    } else if q != 0 {
        let l = hcf(q, r);
        base(CentralizerCase::Case3, 0, l, ng_from_l(l))
    } else if r.abs() == 1 {
        base(CentralizerCase::Case4a, 0, 1, NgType::Z2)
    } else if r != 0 {
        base(CentralizerCase::Case4b, 0, r.abs(), NgType::CentralExtension { order: r.abs() })
    } else {
        base(CentralizerCase::Identity, 0, 0, NgType::H3)
    }
}

/// `(p, q, r mod hcf(p,q))`; central elements are their own representatives.
pub fn conjugacy_representative(g: GroupElement) -> GroupElement {
    let k = hcf(g.p, g.q);
    if k == 0 {
        g
    } else {
        GroupElement::new(g.p, g.q, g.r.rem_euclid(k))
    }
}

pub fn brute_force_centralizer(g: GroupElement, bx: i64) -> Result<Vec<GroupElement>> {
    if !(1..=MAX_BRUTE_FORCE_BOX).contains(&bx) {
        return Err(HncError::InvalidArgument(format!(
            "box must be in 1..={MAX_BRUTE_FORCE_BOX}, got {bx}"
        )));
    }
    let mut out = Vec::new();
    for p in -bx..=bx {
        for q in -bx..=bx {
            for r in -bx..=bx {
                let h = GroupElement::new(p, q, r);
                if g.mul(h) == h.mul(g) {
                    out.push(h);
                }
            }
        }
    }
    Ok(out)
}

/// Whether `y ∈ ⟨g⟩`.
pub fn in_cyclic_subgroup(y: GroupElement, g: GroupElement) -> bool {
    let n = if g.p != 0 {
        if y.p % g.p != 0 {
            return false;
        }
        y.p / g.p
    } else if g.q != 0 {
        if y.q % g.q != 0 {
            return false;
        }
        y.q / g.q
    } else if g.r != 0 {
        if y.p != 0 || y.q != 0 || y.r % g.r != 0 {
            return false;
        }
        y.r / g.r
    } else {
        return y.is_identity();
    };
    g.pow(n) == y
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CohomologyProfile {
    pub dims: Vec<usize>,
}

impl CohomologyProfile {
    pub fn dim(&self, n: usize) -> usize {
        self.dims.get(n).copied().unwrap_or(0)
    }

    fn trimmed(mut dims: Vec<usize>) -> Self {
        while dims.last() == Some(&0) {
            dims.pop();
        }
        CohomologyProfile { dims }
    }
}

fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

/// `H*(Zᵈ; C)` is the exterior algebra on `d` generators.
fn torus_betti(d: usize) -> Vec<usize> {
    (0..=d).map(|n| binomial(d, n)).collect()
}

/// Cohomology of a central extension `1 → Z → E → Z² → 1` with Euler class
/// `e ∈ H²(Z²)`, via the Gysin sequence:
/// `dim Hⁿ(E) = dim coker(∪e : Hⁿ⁻² → Hⁿ) + dim ker(∪e : Hⁿ⁻¹ → Hⁿ⁺¹)`.
/// Over `C` only `∪e : H⁰ → H²` can be nonzero, and it is an isomorphism
/// exactly when the extension is non-split.
fn circle_extension_of_torus(euler_nonzero: bool) -> Vec<usize> {
    let base = torus_betti(2);
    let b = |n: i64| -> usize {
        if n < 0 {
            0
        } else {
            base.get(n as usize).copied().unwrap_or(0)
        }
    };
    let rank_cup = |from: i64| -> usize {
        if euler_nonzero && from == 0 {
            1
        } else {
            0
        }
    };
    (0..=3)
        .map(|n: i64| (b(n) - rank_cup(n - 2)) + (b(n - 1) - rank_cup(n - 1)))
        .collect()
}

/// Trivial complex coefficients throughout. Finite cyclic factors and finite
/// central kernels are invisible over `C`.
pub fn group_cohomology(t: NgType) -> CohomologyProfile {
    let dims = match t {
        NgType::Z | NgType::ZxZl { .. } => torus_betti(1),
        NgType::Z2 | NgType::CentralExtension { .. } => torus_betti(2),
        // W generates the centre and is the commutator of U and V, so the
        // extension by ⟨W⟩ does not split.
        NgType::H3 => circle_extension_of_torus(true),
    };
    CohomologyProfile::trimmed(dims)
}

/// One conjugacy family of infinite-order elements, for the Burghelea sum.
#[derive(Clone, Copy, Debug)]
struct ClassFamily {
    ng: NgType,
    infinitely_many: bool,
}

fn infinite_order_families() -> [ClassFamily; 4] {
    [
        // non-central with l = 1, e.g. U^n
        ClassFamily { ng: NgType::Z, infinitely_many: true },
        // non-central with l ≥ 2, e.g. U^n W^n
        ClassFamily { ng: NgType::ZxZl { l: 2 }, infinitely_many: true },
        // W and W⁻¹ only
        ClassFamily { ng: NgType::Z2, infinitely_many: false },
        // W^r, |r| ≥ 2
        ClassFamily { ng: NgType::CentralExtension { order: 2 }, infinitely_many: true },
    ]
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CyclicDimReport {
    pub degree: usize,
    pub finite_rank: usize,
    pub countable_factor: bool,
}

/// `HCⁿ(C[H₃])`: the identity class contributes `⊕_j H^{n−2j}(H₃)`; every
/// other class has infinite order and contributes `Hⁿ(N_g)`, and a family with
/// infinitely many classes yields a countable product in each degree where its
/// `N_g` has cohomology.
pub fn cyclic_cohomology_dim(n: usize) -> CyclicDimReport {
    let h3 = group_cohomology(NgType::H3);
    let finite_rank = (0..=n / 2).map(|j| h3.dim(n - 2 * j)).sum();
    let countable_factor = infinite_order_families()
        .iter()
        .any(|f| f.infinitely_many && group_cohomology(f.ng).dim(n) > 0);
    CyclicDimReport {
        degree: n,
        finite_rank,
        countable_factor,
    }
}

/// Stable even/odd ranks of the identity-class contribution.
pub fn periodic_cyclic_dims() -> (usize, usize) {
    let top = group_cohomology(NgType::H3).dims.len();
    let even = 2 * top + 2;
    (
        cyclic_cohomology_dim(even).finite_rank,
        cyclic_cohomology_dim(even + 1).finite_rank,
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(p: i64, q: i64, r: i64) -> GroupElement {
        GroupElement::new(p, q, r)
    }

    #[test]
    fn classify_examples() {
        let c = classify_element(g(3, 0, 6));
        assert_eq!(c.case, CentralizerCase::Case2);
        assert_eq!(c.l, 3);
        assert_eq!(c.ng_type, NgType::ZxZl { l: 3 });

        assert_eq!(classify_element(g(0, 0, 1)).ng_type, NgType::Z2);
        assert_eq!(classify_element(g(0, 0, 1)).case, CentralizerCase::Case4a);

        let c = classify_element(g(2, 4, 1));
        assert_eq!(c.case, CentralizerCase::Case1);
        assert_eq!((c.k, c.p_prime, c.q_prime, c.s_k, c.l), (2, 1, 2, 2, 1));
        assert_eq!(c.ng_type, NgType::Z);

        let c = classify_element(g(0, 0, -4));
        assert_eq!(c.case, CentralizerCase::Case4b);
        assert_eq!(c.ng_type, NgType::CentralExtension { order: 4 });
        assert_eq!(classify_element(GroupElement::IDENTITY).ng_type, NgType::H3);
    }

    #[test]
    fn representatives() {
        assert_eq!(conjugacy_representative(g(2, 4, 7)), g(2, 4, 1));
        assert_eq!(conjugacy_representative(g(0, 0, 5)), g(0, 0, 5));
        assert_eq!(conjugacy_representative(g(1, 0, 9)), g(1, 0, 0));
        assert_eq!(conjugacy_representative(g(-3, 0, -4)), g(-3, 0, 2));
    }

    #[test]
    fn brute_force_examples() {
        assert_eq!(brute_force_centralizer(GroupElement::W, 2).unwrap().len(), 125);
        let c = brute_force_centralizer(g(1, 1, 0), 4).unwrap();
        assert!(c.iter().all(|h| h.p == h.q));
        assert_eq!(c.len(), 9 * 9);
        let c = brute_force_centralizer(g(3, 0, 6), 5).unwrap();
        assert!(c.iter().all(|h| h.q == 0));
        assert_eq!(c.len(), 11 * 11);
        assert!(brute_force_centralizer(GroupElement::W, 13).is_err());
        assert!(brute_force_centralizer(GroupElement::W, 0).is_err());
    }

    #[test]
    fn cohomology_profiles() {
        assert_eq!(group_cohomology(NgType::H3).dims, vec![1, 2, 2, 1]);
        assert_eq!(group_cohomology(NgType::ZxZl { l: 2 }).dims, vec![1, 1]);
        assert_eq!(group_cohomology(NgType::Z2).dims, vec![1, 2, 1]);
        assert_eq!(group_cohomology(NgType::Z).dims, vec![1, 1]);
        assert_eq!(group_cohomology(NgType::CentralExtension { order: 5 }).dims, vec![1, 2, 1]);
        // split extension would be Z³
        assert_eq!(circle_extension_of_torus(false), vec![1, 3, 3, 1]);
    }

    #[test]
    fn descriptor_parsing() {
        assert_eq!("H3".parse::<NgType>().unwrap(), NgType::H3);
        assert_eq!("ZxZ2".parse::<NgType>().unwrap(), NgType::ZxZl { l: 2 });
        assert_eq!("ZxZl(6)".parse::<NgType>().unwrap(), NgType::ZxZl { l: 6 });
        assert_eq!(
            "CentralExtension(3)".parse::<NgType>().unwrap(),
            NgType::CentralExtension { order: 3 }
        );
        assert!("SL2Z".parse::<NgType>().is_err());
        assert!("ZxZ1".parse::<NgType>().is_err());
    }

    #[test]
    fn cyclic_dims() {
        let r = cyclic_cohomology_dim(3);
        assert_eq!((r.finite_rank, r.countable_factor), (3, false));
        assert!(cyclic_cohomology_dim(0).countable_factor);
        assert_eq!(cyclic_cohomology_dim(0).finite_rank, 1);
        assert_eq!(cyclic_cohomology_dim(1).finite_rank, 2);
        assert_eq!(cyclic_cohomology_dim(2).finite_rank, 3);
        assert!(cyclic_cohomology_dim(2).countable_factor);
        assert_eq!(periodic_cyclic_dims(), (3, 3));
        assert_eq!(cyclic_cohomology_dim(10).finite_rank, 3);
        assert_eq!(cyclic_cohomology_dim(11).finite_rank, 3);
    }

    #[test]
    fn burghelea_differences() {
        let h3 = group_cohomology(NgType::H3);
        for n in 2..12 {
            let diff = cyclic_cohomology_dim(n).finite_rank as i64
                - cyclic_cohomology_dim(n - 2).finite_rank as i64;
            assert_eq!(diff, h3.dim(n) as i64, "n = {n}");
        }
    }

    #[test]
    fn cyclic_subgroup_membership() {
        let x = g(2, 1, -1);
        assert!(in_cyclic_subgroup(x.pow(5), x));
        assert!(in_cyclic_subgroup(x.pow(-3), x));
        assert!(in_cyclic_subgroup(g(4, 2, 0), x));
        assert!(!in_cyclic_subgroup(g(4, 2, 1), x));
        assert!(in_cyclic_subgroup(g(0, 0, -6), g(0, 0, 3)));
    }
}
