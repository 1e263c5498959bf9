use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

/// Exact arc length. Every addition goes through [`checked`] so that sign
/// tests never observe a wrapped value.
pub type Length = i64;

/// Adds two lengths, panicking on overflow.
#[inline]
pub fn checked(a: Length, b: Length) -> Length {
    a.checked_add(b).expect("length arithmetic overflowed i64")
}

/// A distance value: either a finite length or the unreachable marker.
///
/// `Infinite` compares greater than every finite value and never takes part
/// in arithmetic.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Dist {
    Finite(Length),
    Infinite,
}

impl Dist {
    pub const ZERO: Dist = Dist::Finite(0);

    #[inline]
    pub fn finite(self) -> Option<Length> {
        match self {
            Dist::Finite(d) => Some(d),
            Dist::Infinite => None,
        }
    }

    #[inline]
    pub fn is_finite(self) -> bool {
        matches!(self, Dist::Finite(_))
    }

    #[inline]
    pub fn is_negative(self) -> bool {
        matches!(self, Dist::Finite(d) if d < 0)
    }

    /// `self + len`; unreachable stays unreachable.
    #[inline]
    pub fn plus(self, len: Length) -> Dist {
        match self {
            Dist::Finite(d) => Dist::Finite(checked(d, len)),
            Dist::Infinite => Dist::Infinite,
        }
    }

    /// Sum of two distances, unreachable if either one is.
    #[inline]
    pub fn join(self, other: Dist) -> Dist {
        match (self, other) {
            (Dist::Finite(a), Dist::Finite(b)) => Dist::Finite(checked(a, b)),
            _ => Dist::Infinite,
        }
    }
}

impl Ord for Dist {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Dist::Finite(a), Dist::Finite(b)) => a.cmp(b),
            (Dist::Finite(_), Dist::Infinite) => Ordering::Less,
            (Dist::Infinite, Dist::Finite(_)) => Ordering::Greater,
            (Dist::Infinite, Dist::Infinite) => Ordering::Equal,
        }
    }
}

impl PartialOrd for Dist {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl From<Length> for Dist {
    fn from(d: Length) -> Self {
        Dist::Finite(d)
    }
}

impl fmt::Display for Dist {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Dist::Finite(d) => write!(f, "{d}"),
            Dist::Infinite => f.write_str("inf"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn infinity_is_the_top_element() {
        assert!(Dist::Finite(i64::MAX) < Dist::Infinite);
        assert!(Dist::Finite(-3) < Dist::Finite(2));
        assert_eq!(Dist::Infinite.plus(-100), Dist::Infinite);
        assert_eq!(Dist::Finite(4).join(Dist::Infinite), Dist::Infinite);
        assert_eq!(Dist::Finite(4).join(Dist::Finite(-6)), Dist::Finite(-2));
    }

    #[test]
    #[should_panic(expected = "overflowed")]
    fn overflow_is_caught() {
        let _ = Dist::Finite(i64::MAX).plus(1);
    }
}
