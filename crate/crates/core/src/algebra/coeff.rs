//! Exact Gaussian-rational coefficients.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{HncError, Result};

/// A complex number `re + i·im` with arbitrary-precision rational parts.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Coeff {
    pub re: BigRational,
    pub im: BigRational,
}

impl Coeff {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        Coeff { re, im }
    }

    pub fn from_int(n: i64) -> Self {
        Coeff::new(BigRational::from_integer(BigInt::from(n)), BigRational::zero())
    }

    pub fn from_ints(re: i64, im: i64) -> Self {
        Coeff::new(
            BigRational::from_integer(BigInt::from(re)),
            BigRational::from_integer(BigInt::from(im)),
        )
    }

    /// `num/den + i·0`.
    pub fn ratio(num: i64, den: i64) -> Self {
        Coeff::new(
            BigRational::new(BigInt::from(num), BigInt::from(den)),
            BigRational::zero(),
        )
    }

    pub fn i() -> Self {
        Coeff::from_ints(0, 1)
    }

    pub fn conj(&self) -> Self {
        Coeff::new(self.re.clone(), -self.im.clone())
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn to_complex(&self) -> Complex64 {
        Complex64::new(
            self.re.to_f64().unwrap_or(f64::NAN),
            self.im.to_f64().unwrap_or(f64::NAN),
        )
    }

    /// Parses the string form used in the JSON element format: `"3"`, `"-7/4"`.
    pub fn parse_rational(s: &str) -> Result<BigRational> {
        let t = s.trim();
        let parsed = if let Some((n, d)) = t.split_once('/') {
            let n = BigInt::from_str(n.trim());
            let d = BigInt::from_str(d.trim());
            match (n, d) {
                (Ok(n), Ok(d)) if !d.is_zero() => Some(BigRational::new(n, d)),
                _ => None,
            }
        } else {
            BigInt::from_str(t).ok().map(BigRational::from_integer)
        };
        parsed.ok_or_else(|| HncError::Parse(format!("invalid rational `{s}`")))
    }

    pub fn format_rational(q: &BigRational) -> String {
        if q.denom().is_one() {
            q.numer().to_string()
        } else {
            format!("{}/{}", q.numer(), q.denom())
        }
    }
}

impl Zero for Coeff {
    fn zero() -> Self {
        Coeff::new(BigRational::zero(), BigRational::zero())
    }
    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
}

impl One for Coeff {
    fn one() -> Self {
        Coeff::from_int(1)
    }
}

impl From<i64> for Coeff {
    fn from(n: i64) -> Self {
        Coeff::from_int(n)
    }
}

impl fmt::Display for Coeff {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let re = Coeff::format_rational(&self.re);
        if self.im.is_zero() {
            return write!(f, "{re}");
        }
        let im = Coeff::format_rational(&self.im.abs());
        let sign = if self.im.is_negative() { '-' } else { '+' };
        if self.re.is_zero() {
            let lead = if self.im.is_negative() { "-" } else { "" };
            write!(f, "{lead}{im}i")
        } else {
            write!(f, "({re}{sign}{im}i)")
        }
    }
}

impl<'a> Add<&'a Coeff> for &'a Coeff {
    type Output = Coeff;
    fn add(self, rhs: &Coeff) -> Coeff {
        Coeff::new(&self.re + &rhs.re, &self.im + &rhs.im)
    }
}

impl Add for Coeff {
    type Output = Coeff;
    fn add(self, rhs: Coeff) -> Coeff {
        &self + &rhs
    }
}

impl<'a> Sub<&'a Coeff> for &'a Coeff {
    type Output = Coeff;
    fn sub(self, rhs: &Coeff) -> Coeff {
        Coeff::new(&self.re - &rhs.re, &self.im - &rhs.im)
    }
}

impl Sub for Coeff {
    type Output = Coeff;
    fn sub(self, rhs: Coeff) -> Coeff {
        &self - &rhs
    }
}

impl<'a> Mul<&'a Coeff> for &'a Coeff {
    type Output = Coeff;
    fn mul(self, rhs: &Coeff) -> Coeff {
        if self.im.is_zero() && rhs.im.is_zero() {
            return Coeff::new(&self.re * &rhs.re, BigRational::zero());
        }
        Coeff::new(
            &self.re * &rhs.re - &self.im * &rhs.im,
            &self.re * &rhs.im + &self.im * &rhs.re,
        )
    }
}

impl Mul for Coeff {
    type Output = Coeff;
    fn mul(self, rhs: Coeff) -> Coeff {
        &self * &rhs
    }
}

impl Neg for Coeff {
    type Output = Coeff;
    fn neg(self) -> Coeff {
        Coeff::new(-self.re, -self.im)
    }
}

impl Neg for &Coeff {
    type Output = Coeff;
    fn neg(self) -> Coeff {
        Coeff::new(-self.re.clone(), -self.im.clone())
    }
}

impl AddAssign<&Coeff> for Coeff {
    fn add_assign(&mut self, rhs: &Coeff) {
        self.re += &rhs.re;
        self.im += &rhs.im;
    }
}

impl SubAssign<&Coeff> for Coeff {
    fn sub_assign(&mut self, rhs: &Coeff) {
        self.re -= &rhs.re;
        self.im -= &rhs.im;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_format() {
        let q = Coeff::parse_rational("-6/8").unwrap();
        assert_eq!(Coeff::format_rational(&q), "-3/4");
        assert_eq!(Coeff::format_rational(&Coeff::parse_rational(" 5 ").unwrap()), "5");
        assert!(Coeff::parse_rational("1/0").is_err());
        assert!(Coeff::parse_rational("x").is_err());
    }

    #[test]
    fn gaussian_product() {
        let a = Coeff::from_ints(2, 3);
        let b = Coeff::from_ints(1, -1);
        assert_eq!(&a * &b, Coeff::from_ints(5, 1));
        assert_eq!(&a * &a.conj(), Coeff::from_int(13));
        assert_eq!(format!("{}", Coeff::from_ints(2, -3)), "(2-3i)");
        assert_eq!(format!("{}", Coeff::from_ints(0, -1)), "-1i");
    }
}
