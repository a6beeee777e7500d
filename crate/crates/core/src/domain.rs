//! Finite domains and their tuples.
//!
//! Elements of a domain of size `k` are the dense integers `0..k`. Tuples
//! carry a fixed big-endian mixed-radix encoding: the first coordinate is the
//! most significant digit, so tuples listed in encoding order read like the
//! rows of a truth table.

use std::fmt;

use crate::error::{Error, Result};

/// Number of elements of a finite domain; elements are `0..size`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct DomainSize(usize);

impl DomainSize {
    pub fn new(size: usize) -> Result<Self> {
        if size == 0 {
            return Err(Error::EmptyDomain);
        }
        Ok(DomainSize(size))
    }

    pub fn get(self) -> usize {
        self.0
    }

    /// Iterator over the elements `0..size`.
    pub fn elements(self) -> std::ops::Range<usize> {
        0..self.0
    }

    /// `size^exp`, saturating at `u128::MAX`.
    pub fn pow(self, exp: usize) -> u128 {
        let exp = u32::try_from(exp).unwrap_or(u32::MAX);
        (self.0 as u128).saturating_pow(exp)
    }

    /// Number of points of `self^arity` when it fits in memory-addressable
    /// range; callers enumerate spaces only below explicit budgets.
    pub(crate) fn point_count(self, arity: usize) -> Result<usize> {
        let n = self.pow(arity);
        usize::try_from(n).map_err(|_| Error::BudgetExceeded {
            what: format!("point space {}^{}", self.0, arity),
            needed: n,
            budget: usize::MAX as u128,
        })
    }
}

impl fmt::Display for DomainSize {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A tuple of domain elements, the unary-map reading of a row `a: m -> A`.
///
/// Ordering is lexicographic on the entries, which for tuples of a common
/// arity and base coincides with the order of [`Point::encode`].
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Point {
    entries: Vec<usize>,
    base: DomainSize,
}

impl Point {
    pub fn new(entries: Vec<usize>, base: DomainSize) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::ZeroArity);
        }
        if let Some(&e) = entries.iter().find(|&&e| e >= base.get()) {
            return Err(Error::ShapeMismatch(format!(
                "entry {e} is not an element of a {base}-element domain"
            )));
        }
        Ok(Point { entries, base })
    }

    /// Parses a digit string such as `"012"`; only usable for bases up to 10.
    pub fn from_digits(digits: &str, base: DomainSize) -> Result<Self> {
        let entries = digits
            .chars()
            .map(|c| {
                c.to_digit(10)
                    .map(|d| d as usize)
                    .ok_or_else(|| Error::ShapeMismatch(format!("invalid digit {c:?} in tuple")))
            })
            .collect::<Result<Vec<_>>>()?;
        Point::new(entries, base)
    }

    pub fn arity(&self) -> usize {
        self.entries.len()
    }

    pub fn base(&self) -> DomainSize {
        self.base
    }

    pub fn entries(&self) -> &[usize] {
        &self.entries
    }

    /// Entry at coordinate `i`; panics if out of range.
    pub fn entry(&self, i: usize) -> usize {
        self.entries[i]
    }

    /// Big-endian mixed-radix index of this tuple within `base^arity`.
    pub fn encode(&self) -> usize {
        self.entries
            .iter()
            .fold(0usize, |acc, &e| acc * self.base.get() + e)
    }

    /// Inverse of [`Point::encode`]: the `index`-th tuple of `base^arity`.
    pub fn decode(index: usize, arity: usize, base: DomainSize) -> Result<Self> {
        if arity == 0 {
            return Err(Error::ZeroArity);
        }
        let count = base.pow(arity);
        if (index as u128) >= count {
            return Err(Error::IndexOutOfRange { index, count });
        }
        let b = base.get();
        let mut entries = vec![0usize; arity];
        let mut rest = index;
        for slot in entries.iter_mut().rev() {
            *slot = rest % b;
            rest /= b;
        }
        Ok(Point { entries, base })
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.base.get() <= 10 {
            for e in &self.entries {
                write!(f, "{e}")?;
            }
            Ok(())
        } else {
            write!(f, "(")?;
            for (i, e) in self.entries.iter().enumerate() {
                if i > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{e}")?;
            }
            write!(f, ")")
        }
    }
}
