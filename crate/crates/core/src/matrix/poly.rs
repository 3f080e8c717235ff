use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::IntMatrix;
use crate::error::Result;

/// Polynomial with integer coefficients, lowest degree first, no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IntPoly {
    coeffs: Vec<BigInt>,
}

impl IntPoly {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        IntPoly { coeffs }
    }

    pub fn zero() -> Self {
        IntPoly { coeffs: Vec::new() }
    }

    pub fn coefficients(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; the zero polynomial reports `None`.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&BigInt> {
        self.coeffs.last()
    }

    pub fn eval(&self, x: &BigInt) -> BigInt {
        self.coeffs.iter().rev().fold(BigInt::zero(), |acc, c| acc * x + c)
    }

    pub fn derivative(&self) -> IntPoly {
        IntPoly::new(self.coeffs.iter().enumerate().skip(1).map(|(i, c)| c * BigInt::from(i)).collect())
    }

    pub fn content(&self) -> BigInt {
        self.coeffs.iter().fold(BigInt::zero(), |g, c| g.gcd(c))
    }

    /// Primitive part with positive leading coefficient.
    pub fn primitive_part(&self) -> IntPoly {
        if self.is_zero() {
            return self.clone();
        }
        let mut g = self.content();
        if self.leading().is_some_and(Signed::is_negative) {
            g = -g;
        }
        IntPoly::new(self.coeffs.iter().map(|c| c / &g).collect())
    }

    /// Number of zero roots (the power of `x` dividing the polynomial).
    pub fn zero_root_multiplicity(&self) -> usize {
        self.coeffs.iter().take_while(|c| c.is_zero()).count()
    }

    /// Divides out `x^k`.
    pub fn shift_down(&self, k: usize) -> IntPoly {
        IntPoly::new(self.coeffs[k.min(self.coeffs.len())..].to_vec())
    }

    /// Pseudo-remainder of `self` by `divisor`.
    pub fn pseudo_rem(&self, divisor: &IntPoly) -> IntPoly {
        let Some(dd) = divisor.degree() else {
            panic!("pseudo-remainder by the zero polynomial");
        };
        let lead = divisor.leading().unwrap().clone();
        let mut r = self.coeffs.clone();
        while r.len() > dd && !r.is_empty() {
            let top = r.last().unwrap().clone();
            let shift = r.len() - 1 - dd;
            for c in r.iter_mut() {
                *c *= &lead;
            }
            for (i, d) in divisor.coeffs.iter().enumerate() {
                r[shift + i] -= &top * d;
            }
            r.pop();
            while r.last().is_some_and(Zero::is_zero) {
                r.pop();
            }
        }
        IntPoly::new(r)
    }

    /// Greatest common divisor over ℤ[x] (primitive, positive leading coefficient).
    pub fn gcd(&self, other: &IntPoly) -> IntPoly {
        let mut a = self.primitive_part();
        let mut b = other.primitive_part();
        if a.degree() < b.degree() {
            std::mem::swap(&mut a, &mut b);
        }
        while !b.is_zero() {
            let r = a.pseudo_rem(&b).primitive_part();
            a = b;
            b = r;
        }
        a
    }

    /// Exact division; `None` when `divisor` does not divide `self` in ℤ[x].
    pub fn exact_div(&self, divisor: &IntPoly) -> Option<IntPoly> {
        let dd = divisor.degree()?;
        let lead = divisor.leading()?;
        if self.is_zero() {
            return Some(IntPoly::zero());
        }
        let mut r = self.coeffs.clone();
        if r.len() <= dd {
            return None;
        }
        let mut q = vec![BigInt::zero(); r.len() - dd];
        for k in (0..q.len()).rev() {
            let (qk, rem) = r[k + dd].div_rem(lead);
            if !rem.is_zero() {
                return None;
            }
            for (i, d) in divisor.coeffs.iter().enumerate() {
                r[k + i] -= &qk * d;
            }
            q[k] = qk;
        }
        if r.iter().all(Zero::is_zero) {
            Some(IntPoly::new(q))
        } else {
            None
        }
    }

    /// Product of the distinct irreducible factors: same roots, each simple.
    pub fn square_free_part(&self) -> IntPoly {
        if self.degree().unwrap_or(0) < 1 {
            return self.primitive_part();
        }
        let g = self.gcd(&self.derivative());
        self.primitive_part().exact_div(&g).expect("gcd divides the polynomial")
    }

    /// Evaluates the polynomial at a square matrix, exactly.
    pub fn eval_matrix(&self, a: &IntMatrix) -> Result<IntMatrix> {
        let n = a.rows();
        let mut acc = IntMatrix::zeros(n, n);
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(a)?;
            for i in 0..n {
                acc[(i, i)] += c;
            }
        }
        Ok(acc)
    }
}

impl fmt::Display for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let sign = if c.is_negative() { "-" } else { "+" };
            let mag = c.abs();
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            let show_coeff = !mag.is_one() || i == 0;
            match (i, show_coeff) {
                (0, _) => write!(f, "{mag}")?,
                (1, true) => write!(f, "{mag}x")?,
                (1, false) => write!(f, "x")?,
                (_, true) => write!(f, "{mag}x^{i}")?,
                (_, false) => write!(f, "x^{i}")?,
            }
        }
        Ok(())
    }
}

/// Monic characteristic polynomial of a square integer matrix.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CharPoly(IntPoly);

impl CharPoly {
    pub(super) fn from_monic(p: IntPoly) -> Self {
        debug_assert!(p.leading().is_some_and(One::is_one));
        CharPoly(p)
    }

    pub fn poly(&self) -> &IntPoly {
        &self.0
    }

    pub fn coefficients(&self) -> &[BigInt] {
        self.0.coefficients()
    }

    pub fn degree(&self) -> usize {
        self.0.degree().unwrap_or(0)
    }

    /// Cayley–Hamilton: `p(A) = 0`, checked exactly.
    pub fn annihilates(&self, a: &IntMatrix) -> Result<bool> {
        Ok(self.0.eval_matrix(a)?.is_zero())
    }
}

impl fmt::Display for CharPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}
