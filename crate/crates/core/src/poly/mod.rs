//! Exact polynomial arithmetic over Q: univariate, homogeneous bivariate,
//! rational functions, resultants, discriminants, and factorization into
//! irreducibles.

pub mod bipoly;
pub mod factor;
pub mod hompoly;
pub mod intpoly;
pub mod parse;
pub mod ratfunc;

pub use bipoly::BiPoly;
pub use factor::{factor_q, factor_q_bounded, DEFAULT_DEGREE_BOUND};
pub use hompoly::{HomFactorization, HomPoly};
pub use intpoly::IntPoly;
pub use parse::{
    parse_bipoly, parse_hompoly, parse_intpoly, parse_ratfunc, poly_to_string,
};
pub use ratfunc::RatFunc;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PolyError {
    #[error("polynomial degree {degree} exceeds factorization bound {bound}")]
    DegreeTooLarge { degree: usize, bound: usize },
    #[error("polynomial must be squarefree")]
    NotSquarefree,
    #[error("division by zero")]
    DivisionByZero,
    #[error("zero polynomial not allowed here")]
    ZeroPolynomial,
    #[error("expression is not a polynomial")]
    NotAPolynomial,
    #[error("polynomial is not homogeneous")]
    NotHomogeneous,
    #[error("parse error at {position}: {message}")]
    Parse { position: usize, message: String },
}

/// Lcm of two squarefree polynomials: F*G*H where A = F*H, B = G*H with
/// F, G, H pairwise coprime; normalized primitive positive-leading.
pub fn lcm_sqfree(a: &IntPoly, b: &IntPoly) -> Result<IntPoly, PolyError> {
    if a.is_zero() || b.is_zero() {
        return Err(PolyError::ZeroPolynomial);
    }
    if !a.is_squarefree() || !b.is_squarefree() {
        return Err(PolyError::NotSquarefree);
    }
    let h = a.gcd(b);
    let f = a.div_exact(&h).expect("gcd divides").primitive();
    Ok(f.mul(&b.primitive()).primitive())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: &[i64]) -> IntPoly {
        IntPoly::from_i64(c)
    }

    #[test]
    fn lcm_sqfree_examples() {
        let t1 = p(&[-1, 1]);
        let t2 = p(&[-2, 1]);
        let t3 = p(&[-3, 1]);
        let a = t1.mul(&t2);
        let b = t2.mul(&t3);
        assert_eq!(lcm_sqfree(&a, &b).unwrap(), t1.mul(&t2).mul(&t3));
        assert_eq!(lcm_sqfree(&a, &a).unwrap(), a);
        let c = t3.clone();
        assert_eq!(lcm_sqfree(&a, &c).unwrap(), a.mul(&c));
        // symmetric up to normalization
        assert_eq!(lcm_sqfree(&a, &b).unwrap(), lcm_sqfree(&b, &a).unwrap());
        // idempotent
        let l = lcm_sqfree(&a, &b).unwrap();
        assert_eq!(lcm_sqfree(&l, &a).unwrap(), l);
        // rejects non-squarefree input
        assert!(matches!(
            lcm_sqfree(&t1.pow(2), &b),
            Err(PolyError::NotSquarefree)
        ));
    }
}

#[cfg(test)]
mod prop_tests {
    use super::*;
    use num_bigint::BigInt;
    use proptest::prelude::*;

    fn small_poly() -> impl Strategy<Value = IntPoly> {
        prop::collection::vec(-9i64..10, 1..5)
            .prop_map(|v| IntPoly::from_i64(&v))
            .prop_filter("nonzero", |p| !p.is_zero())
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn resultant_zero_iff_common_factor(f in small_poly(), g in small_poly(), c in small_poly()) {
            // planted common factor makes the resultant vanish
            if c.deg() > 0 {
                let fc = f.mul(&c);
                let gc = g.mul(&c);
                prop_assert_eq!(fc.resultant(&gc), BigInt::from(0));
            }
            // conversely a nonzero resultant implies constant gcd
            let r = f.resultant(&g);
            if !num_traits::Zero::is_zero(&r) && f.deg() > 0 && g.deg() > 0 {
                prop_assert_eq!(f.gcd(&g).deg(), 0);
            }
        }

        #[test]
        fn gcd_value_divides_resultant(f in small_poly(), g in small_poly(), x in -50i64..50) {
            use num_integer::Integer;
            // two constants have an empty Sylvester matrix; skip that case
            if f.deg() == 0 && g.deg() == 0 { return Ok(()); }
            let r = f.resultant(&g);
            if !num_traits::Zero::is_zero(&r) {
                let gv = f.eval_i64(x).gcd(&g.eval_i64(x));
                prop_assert!(num_traits::Zero::is_zero(&(&r % &gv)));
            }
        }

        #[test]
        fn factor_roundtrip(parts in prop::collection::vec(
            prop::collection::vec(-5i64..6, 2..4), 1..4), scale in 1i64..20) {
            let mut f = IntPoly::constant(BigInt::from(scale));
            for c in &parts {
                let g = IntPoly::from_i64(c);
                if g.is_zero() { continue; }
                f = f.mul(&g);
            }
            if f.is_zero() || f.deg() == 0 { return Ok(()); }
            let (content, factors) = factor_q(&f).unwrap();
            let mut rebuilt = IntPoly::constant(content);
            for (g, e) in &factors {
                rebuilt = rebuilt.mul(&g.pow(*e));
            }
            prop_assert_eq!(rebuilt, f);
        }

        #[test]
        fn homogenize_place_identity(coeffs in prop::collection::vec(-9i64..10, 2..5)) {
            let q = IntPoly::from_i64(&coeffs);
            if q.is_zero() || q.deg() == 0 { return Ok(()); }
            let p = HomPoly::from_place_poly(&q).unwrap();
            // P(1, t) = q(t)
            prop_assert_eq!(p.dehomogenize_x1(), q);
        }
    }
}
