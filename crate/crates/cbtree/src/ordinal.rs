//! Ordinals below ε₀ in Cantor normal form.
//!
//! Ranks of regular trees are finite; the schematic plugged families push the
//! calculus to ω·s + t territory, which is all this type needs to carry. A
//! value is a sum `ω^e₁·c₁ + … + ω^e_k·c_k` with strictly decreasing natural
//! exponents and positive coefficients, compared lexicographically. Exponents
//! above 2 are representable but unused by the shipped constructions.

use std::cmp::Ordering;
use std::fmt;

/// An ordinal in Cantor normal form: `(exponent, coefficient)` terms with
/// strictly decreasing exponents. The empty sum is 0.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Ordinal {
    terms: Vec<(u64, u64)>,
}

impl Ordinal {
    pub fn zero() -> Ordinal {
        Ordinal { terms: Vec::new() }
    }

    pub fn finite(n: u64) -> Ordinal {
        if n == 0 {
            Ordinal::zero()
        } else {
            Ordinal { terms: vec![(0, n)] }
        }
    }

    pub fn omega() -> Ordinal {
        Ordinal { terms: vec![(1, 1)] }
    }

    /// `ω·c` (zero when `c = 0`).
    pub fn omega_times(c: u64) -> Ordinal {
        if c == 0 {
            Ordinal::zero()
        } else {
            Ordinal { terms: vec![(1, c)] }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// `Some(n)` when the ordinal is the natural number `n`.
    pub fn as_finite(&self) -> Option<u64> {
        match self.terms.as_slice() {
            [] => Some(0),
            [(0, n)] => Some(*n),
            _ => None,
        }
    }

    pub fn succ(&self) -> Ordinal {
        let mut terms = self.terms.clone();
        match terms.last_mut() {
            Some((0, c)) => *c += 1,
            _ => terms.push((0, 1)),
        }
        Ordinal { terms }
    }
}

impl Ord for Ordinal {
    fn cmp(&self, other: &Self) -> Ordering {
        // Lexicographic on the CNF term list; a longer list with an equal
        // prefix is the larger ordinal (its tail adds positive terms).
        for (x, y) in self.terms.iter().zip(other.terms.iter()) {
            let ord = x.0.cmp(&y.0).then(x.1.cmp(&y.1));
            if ord != Ordering::Equal {
                return ord;
            }
        }
        self.terms.len().cmp(&other.terms.len())
    }
}

impl PartialOrd for Ordinal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// The larger of two ordinals.
pub fn ord_max(a: &Ordinal, b: &Ordinal) -> Ordinal {
    if a >= b { a.clone() } else { b.clone() }
}

/// Strict supremum of the affine pattern `{s·n + t : n ∈ ω}`: `ω·s` when the
/// slope is positive, otherwise the constant `t` itself.
pub fn sup_affine(slope: u64, intercept: u64) -> Ordinal {
    if slope >= 1 {
        Ordinal::omega_times(slope)
    } else {
        Ordinal::finite(intercept)
    }
}

impl fmt::Display for Ordinal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, &(e, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                f.write_str("+")?;
            }
            match (e, c) {
                (0, c) => write!(f, "{c}")?,
                (1, 1) => f.write_str("w")?,
                (1, c) => write!(f, "w.{c}")?,
                (e, 1) => write!(f, "w^{e}")?,
                (e, c) => write!(f, "w^{e}.{c}")?,
            }
        }
        Ok(())
    }
}
