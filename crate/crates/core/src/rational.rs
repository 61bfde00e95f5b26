//! Exact rationals used for thresholds and inequality checks.

use alloc::format;
use core::fmt;
use core::str::FromStr;

use num_rational::Ratio;
use num_traits::{One, Zero};

use crate::error::{domain, Error};

pub type Rational = Ratio<i128>;

pub fn int(v: impl Into<i128>) -> Rational {
    Rational::from_integer(v.into())
}

pub fn frac(num: i128, den: i128) -> Rational {
    Rational::new(num, den)
}

/// A value strictly between 0 and 1, held exactly.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Threshold(Rational);

impl Threshold {
    pub fn new(value: Rational) -> Result<Self, Error> {
        if value <= Rational::zero() || value >= Rational::one() {
            return Err(domain(format!("threshold {value} must lie strictly between 0 and 1")));
        }
        Ok(Threshold(value))
    }

    pub fn from_parts(num: i128, den: i128) -> Result<Self, Error> {
        if den == 0 {
            return Err(domain("threshold denominator is zero"));
        }
        Self::new(Rational::new(num, den))
    }

    pub fn value(self) -> Rational {
        self.0
    }

    /// `count > value·k`, decided in integers.
    pub fn exceeded_by(self, count: usize, k: usize) -> bool {
        let (num, den) = (*self.0.numer(), *self.0.denom());
        count as i128 * den > num * k as i128
    }
}

impl fmt::Display for Threshold {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.0.numer(), self.0.denom())
    }
}

/// Parses the strict `p/q` form; bare integers and decimals are rejected.
impl FromStr for Threshold {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        let (p, q) = s
            .trim()
            .split_once('/')
            .ok_or_else(|| domain(format!("expected a rational of the form p/q, got {s:?}")))?;
        let p: i128 = p.trim().parse().map_err(|_| domain(format!("bad numerator in {s:?}")))?;
        let q: i128 = q.trim().parse().map_err(|_| domain(format!("bad denominator in {s:?}")))?;
        Self::from_parts(p, q)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_display() {
        let t: Threshold = "2/4".parse().unwrap();
        assert_eq!(alloc::string::ToString::to_string(&t), "1/2");
        assert!("0.5".parse::<Threshold>().is_err());
        assert!("1".parse::<Threshold>().is_err());
        assert!("1/1".parse::<Threshold>().is_err());
        assert!("0/3".parse::<Threshold>().is_err());
        assert!("1/0".parse::<Threshold>().is_err());
    }

    #[test]
    fn strict_comparison_on_integer_boundary() {
        let half: Threshold = "1/2".parse().unwrap();
        // αk = 1 for k = 2: one shared element is not "more than".
        assert!(!half.exceeded_by(1, 2));
        assert!(half.exceeded_by(2, 2));
        // αk = 1.5 for k = 3.
        assert!(!half.exceeded_by(1, 3));
        assert!(half.exceeded_by(2, 3));
    }
}
