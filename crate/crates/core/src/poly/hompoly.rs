//! Homogeneous bivariate polynomials over Z.

use super::factor::factor_q_bounded;
use super::intpoly::IntPoly;
use super::PolyError;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use std::fmt;

/// Homogeneous polynomial of fixed degree; `coeffs[i]` multiplies
/// `x^i * y^(degree - i)`. Never zero (the zero polynomial has no degree).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct HomPoly {
    coeffs: Vec<BigInt>,
}

impl HomPoly {
    /// Builds from coefficients of x^i y^(d-i), i = 0..=d. Errors on all
    /// zeros.
    pub fn new(coeffs: Vec<BigInt>) -> Result<Self, PolyError> {
        if coeffs.is_empty() || coeffs.iter().all(|c| c.is_zero()) {
            return Err(PolyError::ZeroPolynomial);
        }
        Ok(HomPoly { coeffs })
    }

    pub fn constant(c: BigInt) -> Result<Self, PolyError> {
        HomPoly::new(vec![c])
    }

    pub fn one() -> Self {
        HomPoly {
            coeffs: vec![BigInt::one()],
        }
    }

    /// The place x (degree valuation).
    pub fn x() -> Self {
        HomPoly {
            coeffs: vec![BigInt::zero(), BigInt::one()],
        }
    }

    pub fn y() -> Self {
        HomPoly {
            coeffs: vec![BigInt::one(), BigInt::zero()],
        }
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff_xpow(&self, i: usize) -> BigInt {
        self.coeffs.get(i).cloned().unwrap_or_else(BigInt::zero)
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn is_constant(&self) -> bool {
        self.degree() == 0
    }

    /// P(x, y) = x^(deg q) * q(y/x) for a univariate q; the classical
    /// homogenization of a place polynomial.
    pub fn from_place_poly(q: &IntPoly) -> Result<Self, PolyError> {
        if q.is_zero() {
            return Err(PolyError::ZeroPolynomial);
        }
        let d = q.deg();
        // coefficient of x^(d-m) y^m is q_m, i.e. coeffs[d-m] = q_m
        let mut coeffs = vec![BigInt::zero(); d + 1];
        for (m, c) in q.coeffs.iter().enumerate() {
            coeffs[d - m] = c.clone();
        }
        HomPoly::new(coeffs)
    }

    /// Homogenization of a univariate polynomial to a *chosen* degree
    /// d >= deg g: x^d * g(y/x).
    pub fn homogenize_to(g: &IntPoly, d: usize) -> Result<Self, PolyError> {
        if g.is_zero() {
            return Err(PolyError::ZeroPolynomial);
        }
        if g.deg() > d {
            return Err(PolyError::DegreeTooLarge {
                degree: g.deg(),
                bound: d,
            });
        }
        let mut coeffs = vec![BigInt::zero(); d + 1];
        for (m, c) in g.coeffs.iter().enumerate() {
            coeffs[d - m] = c.clone();
        }
        HomPoly::new(coeffs)
    }

    /// F(1, t) as a univariate polynomial in t.
    pub fn dehomogenize_x1(&self) -> IntPoly {
        let d = self.degree();
        let mut c = vec![BigInt::zero(); d + 1];
        for (i, v) in self.coeffs.iter().enumerate() {
            c[d - i] = v.clone();
        }
        IntPoly::new(c)
    }

    /// F(t, 1) as a univariate polynomial in t.
    pub fn dehomogenize_y1(&self) -> IntPoly {
        IntPoly::new(self.coeffs.clone())
    }

    /// Multiplicity of x dividing F.
    pub fn x_multiplicity(&self) -> u32 {
        self.coeffs
            .iter()
            .position(|c| !c.is_zero())
            .expect("nonzero") as u32
    }

    pub fn eval(&self, x: &BigInt, y: &BigInt) -> BigInt {
        let d = self.degree();
        let mut xpow = vec![BigInt::one()];
        let mut ypow = vec![BigInt::one()];
        for i in 1..=d {
            xpow.push(&xpow[i - 1] * x);
            ypow.push(&ypow[i - 1] * y);
        }
        let mut acc = BigInt::zero();
        for (i, c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() {
                acc += c * &xpow[i] * &ypow[d - i];
            }
        }
        acc
    }

    pub fn eval_i64(&self, x: i64, y: i64) -> BigInt {
        self.eval(&BigInt::from(x), &BigInt::from(y))
    }

    pub fn mul(&self, other: &HomPoly) -> HomPoly {
        let d = self.degree() + other.degree();
        let mut out = vec![BigInt::zero(); d + 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        HomPoly { coeffs: out }
    }

    pub fn pow(&self, e: u32) -> HomPoly {
        let mut acc = HomPoly::one();
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn content(&self) -> BigInt {
        let mut g = BigInt::zero();
        for c in &self.coeffs {
            g = g.gcd(c);
        }
        g
    }

    /// Primitive with the highest nonzero x-power coefficient positive;
    /// the unit normalization fixed once and for all.
    pub fn normalized(&self) -> HomPoly {
        let content = self.content();
        let lead = self
            .coeffs
            .iter()
            .rev()
            .find(|c| !c.is_zero())
            .expect("nonzero");
        let div = if lead.is_negative() { -content } else { content };
        HomPoly {
            coeffs: self.coeffs.iter().map(|c| c / &div).collect(),
        }
    }

    /// Exact division; None when not divisible.
    pub fn div_exact(&self, d: &HomPoly) -> Option<HomPoly> {
        if d.degree() > self.degree() {
            return None;
        }
        // reduce to univariate exact division on the y=1 dehomogenizations
        // plus x-multiplicity bookkeeping
        let vx_self = self.x_multiplicity();
        let vx_d = d.x_multiplicity();
        if vx_d > vx_self {
            return None;
        }
        let a = self.dehomogenize_x1();
        let b = d.dehomogenize_x1();
        let q = a.div_exact(&b)?;
        let dq = self.degree() - d.degree();
        if q.is_zero() || q.deg() > dq {
            return None;
        }
        let cand = HomPoly::homogenize_to(&q, dq).ok()?;
        if cand.mul(d) == *self {
            Some(cand)
        } else {
            None
        }
    }

    /// True if no irreducible factor repeats.
    pub fn is_squarefree(&self) -> bool {
        let vx = self.x_multiplicity();
        if vx >= 2 {
            return false;
        }
        self.dehomogenize_x1().is_squarefree()
    }

    /// Factors into content * x^k * prod(irreducible places^mult). The
    /// returned places are normalized primitive irreducible homogeneous
    /// polynomials sorted deterministically.
    pub fn factor(&self, degree_bound: usize) -> Result<HomFactorization, PolyError> {
        let g = self.dehomogenize_x1();
        let x_mult = self.degree() as u32 - g.deg() as u32;
        let (mut content, uni) = factor_q_bounded(&g, degree_bound)?;
        let mut places: Vec<(HomPoly, u32)> = Vec::new();
        if x_mult > 0 {
            places.push((HomPoly::x(), x_mult));
        }
        for (q, e) in uni {
            // the (x, y) unit normalization may flip the sign relative to
            // the univariate one; keep the product exact via the content
            let h = HomPoly::from_place_poly(&q)?;
            let hn = h.normalized();
            if hn != h && e % 2 == 1 {
                content = -content;
            }
            places.push((hn, e));
        }
        places.sort_by(|a, b| {
            (a.0.degree(), a.0.coeffs(), a.1).cmp(&(b.0.degree(), b.0.coeffs(), b.1))
        });
        Ok(HomFactorization {
            content,
            factors: places,
        })
    }

    /// Discriminant of a homogeneous polynomial: the lcm of the resultants
    /// of the two dehomogenizations with their derivatives; nonnegative by
    /// convention.
    pub fn discriminant(&self) -> BigInt {
        let fx = self.dehomogenize_x1();
        let fy = self.dehomogenize_y1();
        let r1 = if fx.degree().map_or(true, |d| d == 0) {
            BigInt::one()
        } else {
            fx.resultant(&fx.derivative())
        };
        let r2 = if fy.degree().map_or(true, |d| d == 0) {
            BigInt::one()
        } else {
            fy.resultant(&fy.derivative())
        };
        if r1.is_zero() || r2.is_zero() {
            return BigInt::zero();
        }
        r1.lcm(&r2).abs()
    }

    /// Largest degree among the irreducible factors.
    pub fn deg_irr(&self, degree_bound: usize) -> Result<usize, PolyError> {
        let f = self.factor(degree_bound)?;
        Ok(f.factors.iter().map(|(p, _)| p.degree()).max().unwrap_or(0))
    }
}

#[derive(Debug, Clone)]
pub struct HomFactorization {
    pub content: BigInt,
    pub factors: Vec<(HomPoly, u32)>,
}

impl HomFactorization {
    pub fn value(&self) -> HomPoly {
        let mut acc = HomPoly::constant(self.content.clone()).expect("content nonzero");
        for (p, e) in &self.factors {
            acc = acc.mul(&p.pow(*e));
        }
        acc
    }
}

impl fmt::Display for HomPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", super::parse::hompoly_to_string(self))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn place_polynomials() {
        // t - 3 -> y - 3x
        let q = IntPoly::from_i64(&[-3, 1]);
        let p = HomPoly::from_place_poly(&q).unwrap();
        assert_eq!(p.eval_i64(1, 3), BigInt::zero());
        assert_eq!(p.eval_i64(2, 1), BigInt::from(1 - 6));
        // t^2 + 1 -> y^2 + x^2
        let q = IntPoly::from_i64(&[1, 0, 1]);
        let p = HomPoly::from_place_poly(&q).unwrap();
        assert_eq!(p.eval_i64(1, 2), BigInt::from(5));
        assert_eq!(p.eval_i64(3, 0), BigInt::from(9));
    }

    #[test]
    fn homogenize_evaluates_like_original() {
        // P(1, t) = q(t) as polynomials
        let q = IntPoly::from_i64(&[4, -1, 0, 7]);
        let p = HomPoly::from_place_poly(&q).unwrap();
        assert_eq!(p.dehomogenize_x1(), q);
        for t in -5i64..5 {
            assert_eq!(p.eval_i64(1, t), q.eval_i64(t));
        }
    }

    #[test]
    fn normalization_sign() {
        // -3x + y: leading x coefficient must come out positive
        let p = HomPoly::new(vec![BigInt::from(2), BigInt::from(-6)]).unwrap();
        let n = p.normalized();
        assert_eq!(n.coeffs(), &[BigInt::from(-1), BigInt::from(3)]);
    }

    #[test]
    fn factor_splits_x_power() {
        // x^2 * (y - 3x) * (y + x)
        let a = HomPoly::from_place_poly(&IntPoly::from_i64(&[-3, 1])).unwrap();
        let b = HomPoly::from_place_poly(&IntPoly::from_i64(&[1, 1])).unwrap();
        let f = HomPoly::x().pow(2).mul(&a).mul(&b);
        let fac = f.factor(24).unwrap();
        assert_eq!(fac.value(), f);
        assert!(fac.factors.contains(&(HomPoly::x(), 2)));
        assert_eq!(fac.factors.len(), 3);
        // every factor carries the fixed unit normalization
        for (p, _) in &fac.factors {
            assert_eq!(p, &p.normalized());
        }
    }

    #[test]
    fn hom_discriminant_of_xy_is_one() {
        let f = HomPoly::x().mul(&HomPoly::y());
        assert_eq!(f.discriminant(), BigInt::one());
    }

    #[test]
    fn div_exact_works() {
        let a = HomPoly::from_place_poly(&IntPoly::from_i64(&[5, 2])).unwrap();
        let b = HomPoly::from_place_poly(&IntPoly::from_i64(&[-1, 1, 1])).unwrap();
        let f = a.mul(&b).mul(&HomPoly::x());
        assert_eq!(f.div_exact(&a).unwrap(), b.mul(&HomPoly::x()));
        assert_eq!(f.div_exact(&b).unwrap(), a.mul(&HomPoly::x()));
        assert!(f
            .div_exact(&HomPoly::from_place_poly(&IntPoly::from_i64(&[7, 1])).unwrap())
            .is_none());
    }
}
