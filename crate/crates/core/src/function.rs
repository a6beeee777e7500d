//! Functions of several variables stored as flat lookup tables.

use std::fmt;

use crate::domain::{DomainSize, Point};
use crate::error::{Error, Result};

/// An `arity`-ary map from one finite domain to another, tabulated over all
/// argument tuples in big-endian encoding order.
///
/// Ordering is by `(arity, dom, cod, table)`, so within one class functions
/// sort by arity and then by the table read as a word.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FiniteFunction {
    arity: usize,
    dom: DomainSize,
    cod: DomainSize,
    table: Vec<usize>,
}

impl FiniteFunction {
    pub fn new(arity: usize, dom: DomainSize, cod: DomainSize, table: Vec<usize>) -> Result<Self> {
        if arity == 0 {
            return Err(Error::ZeroArity);
        }
        let expected = dom.pow(arity);
        if table.len() as u128 != expected {
            return Err(Error::ShapeMismatch(format!(
                "table length {} differs from {dom}^{arity} = {expected}",
                table.len()
            )));
        }
        if let Some(&v) = table.iter().find(|&&v| v >= cod.get()) {
            return Err(Error::ShapeMismatch(format!(
                "table value {v} is not an element of a {cod}-element codomain"
            )));
        }
        Ok(FiniteFunction {
            arity,
            dom,
            cod,
            table,
        })
    }

    /// Construction bypass for values produced by the kernel itself.
    pub(crate) fn new_unchecked(
        arity: usize,
        dom: DomainSize,
        cod: DomainSize,
        table: Vec<usize>,
    ) -> Self {
        debug_assert_eq!(table.len() as u128, dom.pow(arity));
        debug_assert!(table.iter().all(|&v| v < cod.get()));
        FiniteFunction {
            arity,
            dom,
            cod,
            table,
        }
    }

    /// Parses a table given as a digit string such as `"0001"`; only usable
    /// for codomains of size up to 10.
    pub fn from_digits(arity: usize, dom: DomainSize, cod: DomainSize, digits: &str) -> Result<Self> {
        let table = digits
            .chars()
            .map(|c| {
                c.to_digit(10)
                    .map(|d| d as usize)
                    .ok_or_else(|| Error::ShapeMismatch(format!("invalid digit {c:?} in table")))
            })
            .collect::<Result<Vec<_>>>()?;
        FiniteFunction::new(arity, dom, cod, table)
    }

    /// The `arity`-ary projection onto coordinate `coord`.
    pub fn projection(dom: DomainSize, arity: usize, coord: usize) -> Result<Self> {
        if arity == 0 {
            return Err(Error::ZeroArity);
        }
        if coord >= arity {
            return Err(Error::IndexOutOfRange {
                index: coord,
                count: arity as u128,
            });
        }
        let count = dom.point_count(arity)?;
        let mut table = Vec::with_capacity(count);
        for index in 0..count {
            table.push(Point::decode(index, arity, dom)?.entry(coord));
        }
        Ok(FiniteFunction::new_unchecked(arity, dom, dom, table))
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn dom(&self) -> DomainSize {
        self.dom
    }

    pub fn cod(&self) -> DomainSize {
        self.cod
    }

    pub fn table(&self) -> &[usize] {
        &self.table
    }

    pub fn is_endofunction(&self) -> bool {
        self.dom == self.cod
    }

    /// Value of the function on one argument tuple.
    pub fn apply(&self, args: &Point) -> Result<usize> {
        if args.arity() != self.arity || args.base() != self.dom {
            return Err(Error::ShapeMismatch(format!(
                "argument tuple {args} does not match a {}-ary function over {} elements",
                self.arity, self.dom
            )));
        }
        Ok(self.table[args.encode()])
    }

    /// Applies the function to `arity` rows of equal length, pointwise: the
    /// result at coordinate `i` is the value on the `i`-th entries of the
    /// rows. This is the action of a function on tuples-as-unary-maps that
    /// underlies images, preservation and constraint satisfaction.
    pub fn apply_componentwise(&self, rows: &[&Point]) -> Result<Point> {
        if rows.len() != self.arity {
            return Err(Error::ShapeMismatch(format!(
                "{} rows supplied to a {}-ary function",
                rows.len(),
                self.arity
            )));
        }
        let len = rows[0].arity();
        for row in rows {
            if row.arity() != len || row.base() != self.dom {
                return Err(Error::ShapeMismatch(format!(
                    "row {row} does not match length {len} over {} elements",
                    self.dom
                )));
            }
        }
        let b = self.dom.get();
        let mut entries = Vec::with_capacity(len);
        for i in 0..len {
            let mut idx = 0usize;
            for row in rows {
                idx = idx * b + row.entry(i);
            }
            entries.push(self.table[idx]);
        }
        Point::new(entries, self.cod)
    }
}

impl fmt::Display for FiniteFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.cod.get() <= 10 {
            write!(f, "{}:", self.arity)?;
            for v in &self.table {
                write!(f, "{v}")?;
            }
            Ok(())
        } else {
            write!(f, "{}:{:?}", self.arity, self.table)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn dom(n: usize) -> DomainSize {
        DomainSize::new(n).unwrap()
    }

    fn bool_fn(arity: usize, digits: &str) -> FiniteFunction {
        FiniteFunction::from_digits(arity, dom(2), dom(2), digits).unwrap()
    }

    fn pt(digits: &str) -> Point {
        Point::from_digits(digits, dom(2)).unwrap()
    }

    #[test]
    fn apply_examples() {
        let and = bool_fn(2, "0001");
        assert_eq!(and.apply(&pt("11")).unwrap(), 1);
        let xor3 = bool_fn(3, "01101001");
        assert_eq!(xor3.apply(&pt("110")).unwrap(), 0);
        let or = bool_fn(2, "0111");
        assert_eq!(or.apply(&pt("10")).unwrap(), 1);
    }

    #[test]
    fn apply_shape_errors() {
        let and = bool_fn(2, "0001");
        assert!(and.apply(&pt("1")).is_err());
        let p = Point::from_digits("12", dom(3)).unwrap();
        assert!(and.apply(&p).is_err());
    }

    #[test]
    fn componentwise_examples() {
        let and = bool_fn(2, "0001");
        let r1 = pt("011");
        let r2 = pt("110");
        assert_eq!(
            and.apply_componentwise(&[&r1, &r2]).unwrap(),
            pt("010")
        );

        let id = bool_fn(1, "01");
        let r = pt("01");
        assert_eq!(id.apply_componentwise(&[&r]).unwrap(), r);

        // The triple sum of three equal rows returns the row.
        let xor3 = bool_fn(3, "01101001");
        assert_eq!(xor3.apply_componentwise(&[&r, &r, &r]).unwrap(), r);
    }

    #[test]
    fn componentwise_shape_errors() {
        let and = bool_fn(2, "0001");
        let r1 = pt("01");
        let r2 = pt("011");
        assert!(and.apply_componentwise(&[&r1, &r2]).is_err());
        assert!(and.apply_componentwise(&[&r1]).is_err());
    }

    #[test]
    fn table_length_is_validated() {
        assert!(FiniteFunction::from_digits(2, dom(2), dom(2), "001").is_err());
        assert!(FiniteFunction::from_digits(1, dom(2), dom(2), "02").is_err());
        assert!(FiniteFunction::from_digits(0, dom(2), dom(2), "").is_err());
    }

    #[test]
    fn projections_return_coordinates() {
        let p2 = FiniteFunction::projection(dom(2), 2, 1).unwrap();
        assert_eq!(p2.table(), &[0, 1, 0, 1]);
        let p1 = FiniteFunction::projection(dom(3), 1, 0).unwrap();
        assert_eq!(p1.table(), &[0, 1, 2]);
        assert!(FiniteFunction::projection(dom(2), 2, 2).is_err());
    }

    proptest! {
        #[test]
        fn componentwise_projection_returns_the_row(
            arity in 1usize..4,
            coord in 0usize..4,
            len in 1usize..6,
            seed in proptest::collection::vec(0usize..100, 1..6),
        ) {
            let coord = coord % arity;
            let d = dom(3);
            let proj = FiniteFunction::projection(d, arity, coord).unwrap();
            let rows: Vec<Point> = (0..arity)
                .map(|k| {
                    let entries = (0..len)
                        .map(|i| (seed[i % seed.len()] + k * 7 + i) % 3)
                        .collect();
                    Point::new(entries, d).unwrap()
                })
                .collect();
            let refs: Vec<&Point> = rows.iter().collect();
            prop_assert_eq!(proj.apply_componentwise(&refs).unwrap(), rows[coord].clone());
        }
    }
}
