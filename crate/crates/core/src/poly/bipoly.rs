//! Sparse bivariate polynomials over Z for sweep evaluation.

use super::hompoly::HomPoly;
use super::PolyError;
use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use std::collections::BTreeMap;
use std::fmt;

/// Terms keyed by (x-exponent, y-exponent).
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct BiPoly {
    pub terms: BTreeMap<(u32, u32), BigInt>,
}

impl BiPoly {
    pub fn zero() -> Self {
        BiPoly::default()
    }

    pub fn constant(c: BigInt) -> Self {
        let mut t = BTreeMap::new();
        if !c.is_zero() {
            t.insert((0, 0), c);
        }
        BiPoly { terms: t }
    }

    pub fn var_x() -> Self {
        let mut t = BTreeMap::new();
        t.insert((1, 0), BigInt::from(1));
        BiPoly { terms: t }
    }

    pub fn var_y() -> Self {
        let mut t = BTreeMap::new();
        t.insert((0, 1), BigInt::from(1));
        BiPoly { terms: t }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn insert(&mut self, key: (u32, u32), c: BigInt) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(key).or_insert_with(BigInt::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&key);
        }
    }

    pub fn add(&self, other: &BiPoly) -> BiPoly {
        let mut out = self.clone();
        for (&k, c) in &other.terms {
            out.insert(k, c.clone());
        }
        out
    }

    pub fn neg(&self) -> BiPoly {
        BiPoly {
            terms: self.terms.iter().map(|(&k, c)| (k, -c)).collect(),
        }
    }

    pub fn sub(&self, other: &BiPoly) -> BiPoly {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &BiPoly) -> BiPoly {
        let mut out = BiPoly::zero();
        for (&(i1, j1), c1) in &self.terms {
            for (&(i2, j2), c2) in &other.terms {
                out.insert((i1 + i2, j1 + j2), c1 * c2);
            }
        }
        out
    }

    pub fn pow(&self, e: u32) -> BiPoly {
        let mut acc = BiPoly::constant(BigInt::from(1));
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|&(i, j)| i + j).max()
    }

    pub fn eval(&self, x: &BigInt, y: &BigInt) -> BigInt {
        let d = self.total_degree().unwrap_or(0) as usize;
        let mut xp = vec![BigInt::from(1)];
        let mut yp = vec![BigInt::from(1)];
        for i in 1..=d {
            xp.push(&xp[i - 1] * x);
            yp.push(&yp[i - 1] * y);
        }
        let mut acc = BigInt::zero();
        for (&(i, j), c) in &self.terms {
            acc += c * &xp[i as usize] * &yp[j as usize];
        }
        acc
    }

    /// Fast path: exact i128 evaluation, None on overflow.
    pub fn eval_i128(&self, x: i64, y: i64) -> Option<i128> {
        let mut acc: i128 = 0;
        for (&(i, j), c) in &self.terms {
            let c = c.to_i128()?;
            let mut term = c;
            for _ in 0..i {
                term = term.checked_mul(x as i128)?;
            }
            for _ in 0..j {
                term = term.checked_mul(y as i128)?;
            }
            acc = acc.checked_add(term)?;
        }
        Some(acc)
    }

    /// Squashes y: P(x, 0)-style univariate view P(t) := P(t, 0)? No --
    /// substitutes y = 0 is rarely wanted; instead expose P(t) := P(t, t2)
    /// via eval. For univariate use, parse with only one variable.
    pub fn uses_y(&self) -> bool {
        self.terms.keys().any(|&(_, j)| j > 0)
    }

    pub fn uses_x(&self) -> bool {
        self.terms.keys().any(|&(i, _)| i > 0)
    }

    /// Converts to a homogeneous polynomial when all terms share total
    /// degree.
    pub fn to_hompoly(&self) -> Result<HomPoly, PolyError> {
        let d = self.total_degree().ok_or(PolyError::ZeroPolynomial)?;
        if self.terms.keys().any(|&(i, j)| i + j != d) {
            return Err(PolyError::NotHomogeneous);
        }
        let mut coeffs = vec![BigInt::zero(); d as usize + 1];
        for (&(i, _), c) in &self.terms {
            coeffs[i as usize] = c.clone();
        }
        HomPoly::new(coeffs)
    }

    /// Whether P = c * Q^2 for some polynomial Q (the degenerate shape
    /// every lambda-average precondition excludes). Conservative check via
    /// the univariate restrictions.
    pub fn is_constant_times_square(&self) -> bool {
        if self.is_zero() {
            return true;
        }
        // P(t, 1) and P(1, t) must both be constant multiples of squares
        let restrict = |swap: bool| {
            let mut coeffs: Vec<BigInt> = Vec::new();
            for (&(i, j), c) in &self.terms {
                let e = if swap { j } else { i } as usize;
                if coeffs.len() <= e {
                    coeffs.resize(e + 1, BigInt::zero());
                }
                coeffs[e] += c;
            }
            super::intpoly::IntPoly::new(coeffs)
        };
        let check = |p: &super::intpoly::IntPoly| {
            if p.is_zero() {
                return true;
            }
            p.squarefree_decomposition()
                .iter()
                .all(|(_, e)| e % 2 == 0)
        };
        check(&restrict(false)) && check(&restrict(true))
    }
}

impl fmt::Display for BiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", super::parse::bipoly_to_string(self))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn eval_matches_big() {
        // x*y*(x+y)
        let p = BiPoly::var_x()
            .mul(&BiPoly::var_y())
            .mul(&BiPoly::var_x().add(&BiPoly::var_y()));
        for x in -5i64..5 {
            for y in -5i64..5 {
                let big = p.eval(&BigInt::from(x), &BigInt::from(y));
                let fast = p.eval_i128(x, y).unwrap();
                assert_eq!(big, BigInt::from(fast));
                assert_eq!(fast, (x * y * (x + y)) as i128);
            }
        }
    }

    #[test]
    fn hom_conversion() {
        let p = BiPoly::var_x().pow(3).add(
            &BiPoly::constant(BigInt::from(2)).mul(&BiPoly::var_y().pow(3)),
        );
        let h = p.to_hompoly().unwrap();
        assert_eq!(h.degree(), 3);
        let q = BiPoly::var_x().pow(2).add(&BiPoly::var_y());
        assert!(q.to_hompoly().is_err());
    }

    #[test]
    fn square_detection() {
        let sq = BiPoly::var_x()
            .add(&BiPoly::var_y())
            .pow(2)
            .mul(&BiPoly::constant(BigInt::from(3)));
        assert!(sq.is_constant_times_square());
        let not = BiPoly::var_x().mul(&BiPoly::var_y());
        assert!(!not.is_constant_times_square());
    }
}
