//! The discrete Heisenberg group in normal form `U^p V^q W^r`.

use std::fmt;

use serde::{Deserialize, Serialize};

/// Normal-form word `U^p V^q W^r`.
///
/// Multiplication follows from `VU = WUV` with `W` central:
/// `(p1,q1,r1)·(p2,q2,r2) = (p1+p2, q1+q2, r1+r2+q1·p2)`.
/// Field order gives the lexicographic term ordering used for serialization.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize, Default)]
pub struct GroupElement {
    pub p: i64,
    pub q: i64,
    pub r: i64,
}

impl GroupElement {
    pub const IDENTITY: GroupElement = GroupElement { p: 0, q: 0, r: 0 };
    pub const U: GroupElement = GroupElement { p: 1, q: 0, r: 0 };
    pub const V: GroupElement = GroupElement { p: 0, q: 1, r: 0 };
    pub const W: GroupElement = GroupElement { p: 0, q: 0, r: 1 };

    pub const fn new(p: i64, q: i64, r: i64) -> Self {
        GroupElement { p, q, r }
    }

    pub fn mul(self, other: GroupElement) -> GroupElement {
        GroupElement {
            p: self.p + other.p,
            q: self.q + other.q,
            r: self.r + other.r + self.q * other.p,
        }
    }

    pub fn inv(self) -> GroupElement {
        GroupElement {
            p: -self.p,
            q: -self.q,
            r: self.p * self.q - self.r,
        }
    }

    pub fn pow(self, n: i64) -> GroupElement {
        let (base, n) = if n < 0 { (self.inv(), -n) } else { (self, n) };
        let mut acc = GroupElement::IDENTITY;
        let mut sq = base;
        let mut e = n;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(sq);
            }
            sq = sq.mul(sq);
            e >>= 1;
        }
        acc
    }

    /// `g h g⁻¹`.
    pub fn conjugate_by(self, h: GroupElement) -> GroupElement {
        h.mul(self).mul(h.inv())
    }

    pub fn commutes_with(self, h: GroupElement) -> bool {
        self.q * h.p == h.q * self.p
    }

    pub fn is_central(self) -> bool {
        self.p == 0 && self.q == 0
    }

    pub fn is_identity(self) -> bool {
        self == GroupElement::IDENTITY
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.p, self.q, self.r)
    }
}

/// Upper unitriangular integer matrix `[[1,a,c],[0,1,b],[0,0,1]]`.
///
/// Independent model of the group used as an oracle; a normal-form triple
/// `(p,q,r)` corresponds to `a = q`, `b = p`, `c = r`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct UnitriangularMatrix(pub [[i64; 3]; 3]);

impl UnitriangularMatrix {
    pub fn from_entries(a: i64, b: i64, c: i64) -> Self {
        UnitriangularMatrix([[1, a, c], [0, 1, b], [0, 0, 1]])
    }

    pub fn from_element(g: GroupElement) -> Self {
        Self::from_entries(g.q, g.p, g.r)
    }

    pub fn to_element(&self) -> GroupElement {
        let m = &self.0;
        GroupElement::new(m[1][2], m[0][1], m[0][2])
    }

    pub fn matmul(&self, other: &Self) -> Self {
        let mut out = [[0i64; 3]; 3];
        for (i, row) in out.iter_mut().enumerate() {
            for (j, cell) in row.iter_mut().enumerate() {
                *cell = (0..3).map(|k| self.0[i][k] * other.0[k][j]).sum();
            }
        }
        UnitriangularMatrix(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(p: i64, q: i64, r: i64) -> GroupElement {
        GroupElement::new(p, q, r)
    }

    #[test]
    fn multiplication_examples() {
        assert_eq!(g(1, 0, 0).mul(g(0, 1, 0)), g(1, 1, 0));
        assert_eq!(g(0, 1, 0).mul(g(1, 0, 0)), g(1, 1, 1));
        assert_eq!(g(2, 3, 1).mul(g(1, -1, 2)), g(3, 2, 6));
    }

    #[test]
    fn matrix_model_agrees_on_examples() {
        let m = UnitriangularMatrix::from_element(g(2, 3, 1))
            .matmul(&UnitriangularMatrix::from_element(g(1, -1, 2)));
        assert_eq!(m.to_element(), g(3, 2, 6));
    }

    #[test]
    fn inverse_examples() {
        assert_eq!(g(0, 0, 5).inv(), g(0, 0, -5));
        assert_eq!(g(1, 1, 0).inv(), g(-1, -1, 1));
        assert_eq!(GroupElement::IDENTITY.inv(), GroupElement::IDENTITY);
        let x = g(3, -2, 7);
        assert!(x.mul(x.inv()).is_identity());
        assert!(x.inv().mul(x).is_identity());
    }

    #[test]
    fn powers_and_conjugation() {
        let x = g(2, 1, -1);
        let mut acc = GroupElement::IDENTITY;
        for n in 0..6 {
            assert_eq!(x.pow(n), acc);
            assert_eq!(x.pow(-n), acc.inv());
            acc = acc.mul(x);
        }
        let h = g(1, 1, 0);
        let c = g(2, 4, 7).conjugate_by(h);
        assert_eq!((c.p, c.q), (2, 4));
        assert_eq!((c.r - 7).rem_euclid(2), 0);
    }
}
