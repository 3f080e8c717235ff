use std::fmt;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

/// Element `(a, b, c)` of the discrete Heisenberg group, the upper
/// unitriangular matrix with `a`, `c` on the superdiagonal and `b` in the
/// corner.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Triple {
    pub a: BigInt,
    pub b: BigInt,
    pub c: BigInt,
}

impl Triple {
    pub fn new(a: impl Into<BigInt>, b: impl Into<BigInt>, c: impl Into<BigInt>) -> Self {
        Triple { a: a.into(), b: b.into(), c: c.into() }
    }

    pub fn identity() -> Self {
        Triple::default()
    }

    pub fn is_identity(&self) -> bool {
        self.a.is_zero() && self.b.is_zero() && self.c.is_zero()
    }

    /// `(a,b,c)(p,q,r) = (a+p, b+q+ar, c+r)`.
    pub fn mul(&self, o: &Triple) -> Triple {
        Triple {
            a: &self.a + &o.a,
            b: &self.b + &o.b + &self.a * &o.c,
            c: &self.c + &o.c,
        }
    }

    /// `(a,b,c)⁻¹ = (−a, ac−b, −c)`.
    pub fn inverse(&self) -> Triple {
        Triple { a: -&self.a, b: &self.a * &self.c - &self.b, c: -&self.c }
    }

    /// `max(|a|, |c|, ⌈√|b|⌉)`, equivalent to word length up to constants.
    pub fn quasi_length(&self) -> BigInt {
        let b = self.b.abs();
        let mut root = b.sqrt();
        if &root * &root < b {
            root += 1;
        }
        self.a.abs().max(self.c.abs()).max(root)
    }
}

impl fmt::Display for Triple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.a, self.b, self.c)
    }
}
