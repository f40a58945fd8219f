//! Rational functions over Q: field arithmetic with canonical reduced form.

use super::intpoly::IntPoly;
use super::PolyError;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use std::fmt;

/// scalar * num / den with num, den primitive coprime in Z[t] and den
/// having positive leading coefficient. Zero is scalar 0 with num = den = 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RatFunc {
    pub scalar: BigRational,
    pub num: IntPoly,
    pub den: IntPoly,
}

impl RatFunc {
    pub fn zero() -> Self {
        RatFunc {
            scalar: BigRational::zero(),
            num: IntPoly::one(),
            den: IntPoly::one(),
        }
    }

    pub fn one() -> Self {
        RatFunc::constant(BigRational::one())
    }

    pub fn constant(c: BigRational) -> Self {
        if c.is_zero() {
            return RatFunc::zero();
        }
        RatFunc {
            scalar: c,
            num: IntPoly::one(),
            den: IntPoly::one(),
        }
    }

    pub fn from_int(c: i64) -> Self {
        RatFunc::constant(BigRational::from(BigInt::from(c)))
    }

    /// t
    pub fn var() -> Self {
        RatFunc {
            scalar: BigRational::one(),
            num: IntPoly::monomial(1),
            den: IntPoly::one(),
        }
    }

    pub fn from_poly(p: &IntPoly) -> Self {
        if p.is_zero() {
            return RatFunc::zero();
        }
        let c = p.signed_content();
        RatFunc {
            scalar: BigRational::from(c),
            num: p.primitive(),
            den: IntPoly::one(),
        }
    }

    /// Builds and reduces from an integer-polynomial fraction.
    pub fn from_frac(num: &IntPoly, den: &IntPoly) -> Result<Self, PolyError> {
        if den.is_zero() {
            return Err(PolyError::DivisionByZero);
        }
        if num.is_zero() {
            return Ok(RatFunc::zero());
        }
        let g = num.gcd(den);
        let n = num.div_exact(&g).expect("gcd divides");
        let d = den.div_exact(&g).expect("gcd divides");
        let cn = n.signed_content();
        let cd = d.signed_content();
        Ok(RatFunc {
            scalar: BigRational::new(cn, cd),
            num: n.primitive(),
            den: d.primitive(),
        })
    }

    pub fn is_zero(&self) -> bool {
        self.scalar.is_zero()
    }

    pub fn is_constant(&self) -> bool {
        self.is_zero() || (self.num.deg() == 0 && self.den.deg() == 0)
    }

    pub fn as_constant(&self) -> Option<BigRational> {
        if self.is_constant() {
            Some(self.scalar.clone())
        } else {
            None
        }
    }

    pub fn add(&self, other: &RatFunc) -> RatFunc {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        // s1 n1/d1 + s2 n2/d2 = (s1 n1 d2 + s2 n2 d1) / (d1 d2), scalars
        // cleared to a common integer frame first
        let (a1, a2) = (self.scalar.numer(), self.scalar.denom());
        let (b1, b2) = (other.scalar.numer(), other.scalar.denom());
        // common scale 1/(a2 b2)
        let left = self.num.mul(&other.den).scale(&(a1 * b2));
        let right = other.num.mul(&self.den).scale(&(b1 * a2));
        let num = left.add(&right);
        let den = self.den.mul(&other.den).scale(&(a2 * b2));
        RatFunc::from_frac(&num, &den).expect("den nonzero")
    }

    pub fn neg(&self) -> RatFunc {
        RatFunc {
            scalar: -self.scalar.clone(),
            num: self.num.clone(),
            den: self.den.clone(),
        }
    }

    pub fn sub(&self, other: &RatFunc) -> RatFunc {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &RatFunc) -> RatFunc {
        if self.is_zero() || other.is_zero() {
            return RatFunc::zero();
        }
        let mut out = RatFunc::from_frac(
            &self.num.mul(&other.num),
            &self.den.mul(&other.den),
        )
        .expect("den nonzero");
        out.scalar *= &self.scalar * &other.scalar;
        out
    }

    pub fn inv(&self) -> Result<RatFunc, PolyError> {
        if self.is_zero() {
            return Err(PolyError::DivisionByZero);
        }
        let mut out = RatFunc::from_frac(&self.den, &self.num)?;
        out.scalar *= self.scalar.recip();
        Ok(out)
    }

    pub fn div(&self, other: &RatFunc) -> Result<RatFunc, PolyError> {
        Ok(self.mul(&other.inv()?))
    }

    pub fn pow(&self, e: i32) -> Result<RatFunc, PolyError> {
        if e == 0 {
            return Ok(RatFunc::one());
        }
        let base = if e < 0 { self.inv()? } else { self.clone() };
        let mut acc = RatFunc::one();
        for _ in 0..e.unsigned_abs() {
            acc = acc.mul(&base);
        }
        Ok(acc)
    }

    /// Evaluation; None at poles of the reduced form.
    pub fn eval(&self, t: &BigRational) -> Option<BigRational> {
        if self.is_zero() {
            return Some(BigRational::zero());
        }
        let d = self.den.eval_q(t);
        if d.is_zero() {
            return None;
        }
        Some(&self.scalar * self.num.eval_q(t) / d)
    }

    /// Numerator as a Q-coefficient polynomial folded with the scalar:
    /// returns (scaled numerator over Z, integer denominator).
    pub fn clear_denominators(&self) -> (IntPoly, BigInt) {
        let n = self.num.scale(self.scalar.numer());
        (n, self.scalar.denom() * BigInt::one())
    }

    /// Degree of the valuation deg(den) - deg(num) at the place at
    /// infinity; None for the zero function.
    pub fn inf_valuation(&self) -> Option<i64> {
        if self.is_zero() {
            return None;
        }
        Some(self.den.deg() as i64 - self.num.deg() as i64)
    }
}

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", super::parse::ratfunc_to_string(self))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t() -> RatFunc {
        RatFunc::var()
    }

    #[test]
    fn field_ops_reduce() {
        // (t^2 - 1)/(t - 1) reduces to t + 1
        let num = IntPoly::from_i64(&[-1, 0, 1]);
        let den = IntPoly::from_i64(&[-1, 1]);
        let f = RatFunc::from_frac(&num, &den).unwrap();
        assert_eq!(f.num, IntPoly::from_i64(&[1, 1]));
        assert_eq!(f.den, IntPoly::one());
        assert!(f.scalar.is_one());
    }

    #[test]
    fn arithmetic_identities() {
        let f = t().pow(-1).unwrap(); // 1/t
        let g = f.mul(&f); // 1/t^2
        let sum = f.add(&g); // (t + 1)/t^2
        assert_eq!(sum.num, IntPoly::from_i64(&[1, 1]));
        assert_eq!(sum.den, IntPoly::from_i64(&[0, 0, 1]));
        let back = sum.sub(&g);
        assert_eq!(back, f);
        let quot = g.div(&f).unwrap();
        assert_eq!(quot, f);
    }

    #[test]
    fn eval_with_poles() {
        let f = RatFunc::from_frac(
            &IntPoly::from_i64(&[1, 1]),
            &IntPoly::from_i64(&[-2, 1]),
        )
        .unwrap();
        let two = BigRational::from(BigInt::from(2));
        assert!(f.eval(&two).is_none());
        let three = BigRational::from(BigInt::from(3));
        assert_eq!(f.eval(&three).unwrap(), BigRational::from(BigInt::from(4)));
    }

    #[test]
    fn scalar_normalization() {
        // 6t/4 = (3/2) t
        let f = RatFunc::from_frac(
            &IntPoly::from_i64(&[0, 6]),
            &IntPoly::from_i64(&[4]),
        )
        .unwrap();
        assert_eq!(f.scalar, BigRational::new(BigInt::from(3), BigInt::from(2)));
        assert_eq!(f.num, IntPoly::monomial(1));
        assert_eq!(f.den, IntPoly::one());
    }
}
