//! Exact fractions for densities and threshold exponents.

use core::cmp::Ordering;
use core::fmt;
use core::ops::{Add, Div, Mul, Neg, Sub};
use core::str::FromStr;

/// A fraction in lowest terms with a positive denominator.
///
/// Arithmetic goes through `i128` and panics if a reduced result does not
/// fit in `i64`; the densities handled here have tiny numerators.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Rational {
    num: i64,
    den: i64,
}

fn gcd(mut a: i128, mut b: i128) -> i128 {
    a = a.abs();
    b = b.abs();
    while b != 0 {
        let r = a % b;
        a = b;
        b = r;
    }
    a
}

impl Rational {
    pub const ZERO: Rational = Rational { num: 0, den: 1 };
    pub const ONE: Rational = Rational { num: 1, den: 1 };

    /// Panics if `den == 0`.
    pub fn new(num: i64, den: i64) -> Rational {
        Rational::checked_new(num as i128, den as i128).expect("rational with zero denominator")
    }

    fn checked_new(num: i128, den: i128) -> Option<Rational> {
        if den == 0 {
            return None;
        }
        let g = gcd(num, den).max(1);
        let sign = if den < 0 { -1 } else { 1 };
        let (n, d) = (sign * num / g, sign * den / g);
        Some(Rational {
            num: i64::try_from(n).expect("rational numerator overflow"),
            den: i64::try_from(d).expect("rational denominator overflow"),
        })
    }

    pub const fn integer(n: i64) -> Rational {
        Rational { num: n, den: 1 }
    }

    pub fn numer(self) -> i64 {
        self.num
    }

    pub fn denom(self) -> i64 {
        self.den
    }

    pub fn is_zero(self) -> bool {
        self.num == 0
    }

    /// `1 / self`, or `None` for zero.
    pub fn recip(self) -> Option<Rational> {
        Rational::checked_new(self.den as i128, self.num as i128)
    }

    pub fn checked_div(self, rhs: Rational) -> Option<Rational> {
        Rational::checked_new(self.num as i128 * rhs.den as i128, self.den as i128 * rhs.num as i128)
    }

    pub fn to_f64(self) -> f64 {
        self.num as f64 / self.den as f64
    }
}

impl Default for Rational {
    fn default() -> Self {
        Rational::ZERO
    }
}

impl From<i64> for Rational {
    fn from(n: i64) -> Self {
        Rational::integer(n)
    }
}

impl Ord for Rational {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.num as i128 * other.den as i128).cmp(&(other.num as i128 * self.den as i128))
    }
}

impl PartialOrd for Rational {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Add for Rational {
    type Output = Rational;
    fn add(self, rhs: Rational) -> Rational {
        let (a, b, c, d) = (self.num as i128, self.den as i128, rhs.num as i128, rhs.den as i128);
        Rational::checked_new(a * d + c * b, b * d).unwrap()
    }
}

impl Sub for Rational {
    type Output = Rational;
    fn sub(self, rhs: Rational) -> Rational {
        self + (-rhs)
    }
}

impl Neg for Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational { num: -self.num, den: self.den }
    }
}

impl Mul for Rational {
    type Output = Rational;
    fn mul(self, rhs: Rational) -> Rational {
        Rational::checked_new(self.num as i128 * rhs.num as i128, self.den as i128 * rhs.den as i128).unwrap()
    }
}

impl Div for Rational {
    type Output = Rational;
    /// Panics on division by zero; see [`Rational::checked_div`].
    fn div(self, rhs: Rational) -> Rational {
        self.checked_div(rhs).expect("division by zero rational")
    }
}

/// Always `num/den`, including integers (`2/1`) and zero (`0/1`).
impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("invalid rational {0:?}: expected an integer or num/den with nonzero den")]
pub struct ParseRationalError(pub alloc::string::String);

impl FromStr for Rational {
    type Err = ParseRationalError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || ParseRationalError(s.into());
        let t = s.trim();
        let (n, d) = match t.split_once('/') {
            Some((n, d)) => (n.trim().parse::<i64>().map_err(|_| err())?, d.trim().parse::<i64>().map_err(|_| err())?),
            None => (t.parse::<i64>().map_err(|_| err())?, 1),
        };
        Rational::checked_new(n as i128, d as i128).ok_or_else(err)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn normalizes() {
        assert_eq!(Rational::new(6, -4), Rational::new(-3, 2));
        assert_eq!(Rational::new(0, -7), Rational::ZERO);
        assert_eq!(Rational::new(35, 343).to_string(), "5/49");
        assert_eq!(Rational::integer(2).to_string(), "2/1");
    }

    #[test]
    fn arithmetic() {
        let a = Rational::new(1, 2);
        let b = Rational::new(1, 3);
        assert_eq!(a + b, Rational::new(5, 6));
        assert_eq!(a - b, Rational::new(1, 6));
        assert_eq!(a * b, Rational::new(1, 6));
        assert_eq!(a / b, Rational::new(3, 2));
        assert_eq!(Rational::ZERO.recip(), None);
        assert_eq!(Rational::new(15, 7).recip(), Some(Rational::new(7, 15)));
    }

    #[test]
    fn parsing() {
        assert_eq!("2/5".parse::<Rational>().unwrap(), Rational::new(2, 5));
        assert_eq!(" 3 ".parse::<Rational>().unwrap(), Rational::integer(3));
        assert!("1/0".parse::<Rational>().is_err());
        assert!("a/2".parse::<Rational>().is_err());
    }

    proptest! {
        #[test]
        fn order_matches_cross_multiplication(a in -1000i64..1000, b in 1i64..1000, c in -1000i64..1000, d in 1i64..1000) {
            let x = Rational::new(a, b);
            let y = Rational::new(c, d);
            prop_assert_eq!(x.cmp(&y), (a * d).cmp(&(c * b)));
            prop_assert_eq!(x.to_string().parse::<Rational>().unwrap(), x);
            prop_assert_eq!((x + y) - y, x);
        }
    }
}
