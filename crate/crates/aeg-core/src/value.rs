//! Exact payoff values: big rationals extended with the two infinities.

use alloc::string::String;
use core::cmp::Ordering;
use core::fmt;

use num_bigint::BigInt;

/// Exact rational number used for all finite payoff values and thresholds.
pub type Rational = num_rational::BigRational;

/// A payoff value: an exact rational or one of the two infinities.
///
/// The ordering is the usual total order on `ℝ ∪ {-∞, +∞}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ExtRational {
    NegInf,
    Fin(Rational),
    PosInf,
}

impl ExtRational {
    pub fn finite(&self) -> Option<&Rational> {
        match self {
            ExtRational::Fin(r) => Some(r),
            _ => None,
        }
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, ExtRational::Fin(_))
    }

    /// Renders the value the way all tools print it: `p/q`, `+inf`, `-inf`.
    /// Finite values always carry an explicit denominator, integers included.
    pub fn render(&self) -> String {
        use alloc::format;
        match self {
            ExtRational::NegInf => String::from("-inf"),
            ExtRational::PosInf => String::from("+inf"),
            ExtRational::Fin(r) => format!("{}/{}", r.numer(), r.denom()),
        }
    }
}

impl PartialOrd for ExtRational {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for ExtRational {
    fn cmp(&self, other: &Self) -> Ordering {
        use ExtRational::*;
        match (self, other) {
            (NegInf, NegInf) | (PosInf, PosInf) => Ordering::Equal,
            (NegInf, _) | (_, PosInf) => Ordering::Less,
            (_, NegInf) | (PosInf, _) => Ordering::Greater,
            (Fin(a), Fin(b)) => a.cmp(b),
        }
    }
}

impl fmt::Display for ExtRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

impl From<Rational> for ExtRational {
    fn from(r: Rational) -> Self {
        ExtRational::Fin(r)
    }
}

impl From<i64> for ExtRational {
    fn from(n: i64) -> Self {
        ExtRational::Fin(rat(n, 1))
    }
}

/// Shorthand for an exact rational from machine integers. Panics on `d == 0`.
pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// The rational `n/1` from a big integer.
pub fn rat_int(n: BigInt) -> Rational {
    Rational::from_integer(n)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn total_order_with_infinities() {
        let vals = [
            ExtRational::NegInf,
            ExtRational::Fin(rat(-7, 2)),
            ExtRational::Fin(rat(0, 1)),
            ExtRational::Fin(rat(11, 3)),
            ExtRational::PosInf,
        ];
        for i in 0..vals.len() {
            for j in 0..vals.len() {
                assert_eq!(vals[i].cmp(&vals[j]), i.cmp(&j), "{i} vs {j}");
            }
        }
    }

    #[test]
    fn rendering_always_shows_denominator() {
        assert_eq!(ExtRational::from(3).render(), "3/1");
        assert_eq!(ExtRational::Fin(rat(22, -6)).render(), "-11/3");
        assert_eq!(ExtRational::PosInf.render(), "+inf");
        assert_eq!(ExtRational::NegInf.render(), "-inf");
    }
}
