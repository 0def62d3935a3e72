//! Exact rational numbers and the harmonic series.

use std::cmp::Ordering;
use std::fmt;
use std::iter::Sum;
use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_rational::Ratio;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::Error;

/// An exact rational in canonical reduced form with a positive denominator.
///
/// Every monetary or value quantity in the crate is a `Rat`; there is no
/// floating point anywhere in mechanism logic.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Rat(Ratio<i128>);

impl Rat {
    pub fn new(numer: i128, denom: i128) -> Self {
        assert!(denom != 0, "zero denominator");
        Rat(Ratio::new(numer, denom))
    }

    pub fn int(value: i128) -> Self {
        Rat(Ratio::from_integer(value))
    }

    pub fn zero() -> Self {
        Rat(Ratio::zero())
    }

    pub fn one() -> Self {
        Rat(Ratio::one())
    }

    pub fn numer(&self) -> i128 {
        *self.0.numer()
    }

    pub fn denom(&self) -> i128 {
        *self.0.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_positive(&self) -> bool {
        self.0.is_positive()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn max(self, other: Rat) -> Rat {
        if other > self {
            other
        } else {
            self
        }
    }

    pub fn min(self, other: Rat) -> Rat {
        if other < self {
            other
        } else {
            self
        }
    }

    pub fn recip(self) -> Rat {
        Rat(self.0.recip())
    }

    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::NAN)
    }

    /// Largest rational with denominator `scale` not exceeding `sqrt(value)`.
    ///
    /// Used for the few catalog functions that are irrational by
    /// construction; the error is below `1/scale`.
    pub fn sqrt_floor(value: u64, scale: u64) -> Rat {
        let target = (value as u128) * (scale as u128) * (scale as u128);
        let mut root = (target as f64).sqrt() as u128;
        while root * root > target {
            root -= 1;
        }
        while (root + 1) * (root + 1) <= target {
            root += 1;
        }
        Rat::new(root as i128, scale as i128)
    }
}

impl From<i128> for Rat {
    fn from(v: i128) -> Self {
        Rat::int(v)
    }
}

impl From<usize> for Rat {
    fn from(v: usize) -> Self {
        Rat::int(v as i128)
    }
}

impl fmt::Display for Rat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.numer(), self.denom())
    }
}

impl fmt::Debug for Rat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.numer(), self.denom())
    }
}

impl FromStr for Rat {
    type Err = Error;

    /// Accepts `p/q` or a bare integer `p`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || Error::Parse {
            line: 0,
            column: 0,
            message: format!("invalid rational literal `{s}`"),
        };
        let (p, q) = match s.split_once('/') {
            Some((p, q)) => (p, q),
            None => (s, "1"),
        };
        let p: i128 = p.trim().parse().map_err(|_| bad())?;
        let q: i128 = q.trim().parse().map_err(|_| bad())?;
        if q <= 0 {
            return Err(bad());
        }
        Ok(Rat::new(p, q))
    }
}

macro_rules! binop {
    ($trait:ident, $method:ident, $assign_trait:ident, $assign:ident) => {
        impl $trait for Rat {
            type Output = Rat;
            fn $method(self, rhs: Rat) -> Rat {
                Rat(self.0.$method(rhs.0))
            }
        }
        impl<'a> $trait<&'a Rat> for Rat {
            type Output = Rat;
            fn $method(self, rhs: &'a Rat) -> Rat {
                Rat(self.0.$method(rhs.0))
            }
        }
        impl $assign_trait for Rat {
            fn $assign(&mut self, rhs: Rat) {
                self.0 = self.0.$method(rhs.0);
            }
        }
    };
}

binop!(Add, add, AddAssign, add_assign);
binop!(Sub, sub, SubAssign, sub_assign);

impl Mul for Rat {
    type Output = Rat;
    fn mul(self, rhs: Rat) -> Rat {
        Rat(self.0 * rhs.0)
    }
}

impl Div for Rat {
    type Output = Rat;
    fn div(self, rhs: Rat) -> Rat {
        Rat(self.0 / rhs.0)
    }
}

impl Neg for Rat {
    type Output = Rat;
    fn neg(self) -> Rat {
        Rat(-self.0)
    }
}

impl Sum for Rat {
    fn sum<I: Iterator<Item = Rat>>(iter: I) -> Rat {
        iter.fold(Rat::zero(), |a, b| a + b)
    }
}

impl<'a> Sum<&'a Rat> for Rat {
    fn sum<I: Iterator<Item = &'a Rat>>(iter: I) -> Rat {
        iter.fold(Rat::zero(), |a, b| a + *b)
    }
}

/// H_k = 1 + 1/2 + ... + 1/k, with H_0 = 0.
pub fn harmonic(k: usize) -> Rat {
    (1..=k).map(|t| Rat::new(1, t as i128)).sum()
}

/// A ratio that may be unbounded: approximation factors, alpha parameters.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Factor {
    Finite(Rat),
    Unbounded,
}

impl Factor {
    /// `num / den` with 0/0 read as 1 and positive/0 as unbounded.
    pub fn ratio(num: Rat, den: Rat) -> Factor {
        if den.is_zero() {
            if num.is_zero() {
                Factor::Finite(Rat::one())
            } else {
                Factor::Unbounded
            }
        } else {
            Factor::Finite(num / den)
        }
    }

    pub fn finite(&self) -> Option<Rat> {
        match self {
            Factor::Finite(r) => Some(*r),
            Factor::Unbounded => None,
        }
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, Factor::Finite(_))
    }

    /// `true` when `self <= bound`; an unbounded factor satisfies only an
    /// unbounded bound.
    pub fn le(&self, bound: &Factor) -> bool {
        self <= bound
    }
}

impl PartialOrd for Factor {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Factor {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Factor::Finite(a), Factor::Finite(b)) => a.cmp(b),
            (Factor::Finite(_), Factor::Unbounded) => Ordering::Less,
            (Factor::Unbounded, Factor::Finite(_)) => Ordering::Greater,
            (Factor::Unbounded, Factor::Unbounded) => Ordering::Equal,
        }
    }
}

impl fmt::Display for Factor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Factor::Finite(r) => write!(f, "{r}"),
            Factor::Unbounded => write!(f, "inf"),
        }
    }
}

impl FromStr for Factor {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s == "inf" {
            Ok(Factor::Unbounded)
        } else {
            s.parse().map(Factor::Finite)
        }
    }
}
