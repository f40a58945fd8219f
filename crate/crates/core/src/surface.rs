//! Elliptic surfaces over Q(t): homogenized invariants, places of bad
//! reduction, their classification, and the M, B, B' products.

use crate::poly::{
    HomFactorization, HomPoly, IntPoly, PolyError, RatFunc,
};
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::One;
use serde::Serialize;
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum SurfaceError {
    #[error("discriminant is identically zero; not an elliptic surface")]
    NotASurface,
    #[error(transparent)]
    Poly(#[from] PolyError),
}

/// A family of elliptic curves over Q given by c4, c6 in Q(t), the fiber
/// at t being y^2 = x^3 - c4(t)/48 x - c6(t)/864.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EllipticSurface {
    pub c4: RatFunc,
    pub c6: RatFunc,
}

/// Reduction type of the family at a place of Q(t), or of a fiber at p.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ReductionClass {
    Good,
    Multiplicative,
    AddPotMult,
    AddPotGood,
}

/// Whether a quadratic twist can repair the place.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Badness {
    NotBad,
    HalfBad,
    QuiteBad,
}

/// Exact exponent data of one place. `e4`/`e6` are None when c4 resp. c6
/// is identically zero (the exponent is +infinity).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlaceRecord {
    pub place: HomPoly,
    pub e4: Option<u32>,
    pub e6: Option<u32>,
    pub e_d: u32,
    pub klass: ReductionClass,
    pub badness: Badness,
}

/// Full analysis: homogeneous invariants with their factorizations, one
/// record per bad place plus the degree place, and the M | B' | B tower.
#[derive(Debug, Clone)]
pub struct SurfaceAnalysis {
    pub surface: EllipticSurface,
    pub c4_hom: Option<HomPoly>,
    pub c6_hom: Option<HomPoly>,
    pub d_hom: HomPoly,
    pub c4_fact: Option<HomFactorization>,
    pub c6_fact: Option<HomFactorization>,
    pub d_fact: HomFactorization,
    pub places: Vec<PlaceRecord>,
    pub m: HomPoly,
    pub b: HomPoly,
    pub bprime: HomPoly,
    pub j: RatFunc,
    pub j_constant: bool,
}

impl EllipticSurface {
    pub fn new(c4: RatFunc, c6: RatFunc) -> Result<Self, SurfaceError> {
        let s = EllipticSurface { c4, c6 };
        if s.delta().is_zero() {
            return Err(SurfaceError::NotASurface);
        }
        Ok(s)
    }

    /// (c4^3 - c6^2) / 1728
    pub fn delta(&self) -> RatFunc {
        let c43 = self.c4.pow(3).expect("positive power");
        let c62 = self.c6.pow(2).expect("positive power");
        c43.sub(&c62).mul(&RatFunc::constant(BigRational::new(
            BigInt::one(),
            BigInt::from(1728),
        )))
    }

    /// j = c4^3 / Delta, reduced.
    pub fn j_invariant(&self) -> RatFunc {
        let c43 = self.c4.pow(3).expect("positive power");
        c43.div(&self.delta()).expect("delta nonzero")
    }

    pub fn analyze(&self) -> Result<SurfaceAnalysis, SurfaceError> {
        let (a, b) = self.clear_to_polynomials()?;
        // e with 4e >= deg A, 6e >= deg B over the nonzero ones
        let e = {
            let ea = a.as_ref().map(|p| (p.deg() + 3) / 4);
            let eb = b.as_ref().map(|p| (p.deg() + 5) / 6);
            ea.into_iter().chain(eb).max().unwrap_or(0)
        };
        // D = (A^3 - B^2)/1728, a polynomial after clearing
        let a3 = a.as_ref().map(|p| p.pow(3)).unwrap_or_else(IntPoly::zero);
        let b2 = b.as_ref().map(|p| p.pow(2)).unwrap_or_else(IntPoly::zero);
        let d = a3
            .sub(&b2)
            .div_exact(&IntPoly::constant(BigInt::from(1728)))
            .expect("cleared to divisibility by 1728");
        if d.is_zero() {
            return Err(SurfaceError::NotASurface);
        }
        debug_assert!(d.deg() <= 12 * e);
        let c4_hom = match &a {
            Some(p) => Some(HomPoly::homogenize_to(p, 4 * e)?),
            None => None,
        };
        let c6_hom = match &b {
            Some(p) => Some(HomPoly::homogenize_to(p, 6 * e)?),
            None => None,
        };
        let d_hom = HomPoly::homogenize_to(&d, 12 * e)?;

        let bound = crate::poly::DEFAULT_DEGREE_BOUND.max(12 * e);
        let c4_fact = match &c4_hom {
            Some(h) => Some(h.factor(bound)?),
            None => None,
        };
        let c6_fact = match &c6_hom {
            Some(h) => Some(h.factor(bound)?),
            None => None,
        };
        let d_fact = d_hom.factor(bound)?;

        let places = classify_places(&c4_fact, &c6_fact, &d_fact);
        let (m, b_poly, bprime) = mbb(&places);
        let j = self.j_invariant();
        let j_constant = j.is_constant();
        Ok(SurfaceAnalysis {
            surface: self.clone(),
            c4_hom,
            c6_hom,
            d_hom,
            c4_fact,
            c6_fact,
            d_fact,
            places,
            m,
            b: b_poly,
            bprime,
            j,
            j_constant,
        })
    }

    /// Clears c4, c6 to integer polynomials A = (q1 q0)^4 c4 and
    /// B = (q1 q0)^6 c6 with q0 the minimal rational-function clearing
    /// factor and q1 the minimal positive integer making A, B and
    /// (A^3 - B^2)/1728 integral.
    fn clear_to_polynomials(
        &self,
    ) -> Result<(Option<IntPoly>, Option<IntPoly>), SurfaceError> {
        // valuations of c4 and c6 at every irreducible appearing in either
        let mut vals: BTreeMap<IntPoly, (i64, i64)> = BTreeMap::new();
        {
            let mut record = |f: &RatFunc, slot: usize| -> Result<(), SurfaceError> {
                if f.is_zero() {
                    return Ok(());
                }
                for (poly, sign) in [(&f.num, 1i64), (&f.den, -1i64)] {
                    if poly.deg() == 0 {
                        continue;
                    }
                    // surfaces may legitimately exceed the CLI-facing
                    // factorization cap; their own degree is the bound
                    let bound = crate::poly::DEFAULT_DEGREE_BOUND.max(poly.deg());
                    let (_, factors) = crate::poly::factor_q_bounded(poly, bound)?;
                    for (q, mult) in factors {
                        let entry = vals.entry(q).or_insert((0, 0));
                        if slot == 0 {
                            entry.0 += sign * mult as i64;
                        } else {
                            entry.1 += sign * mult as i64;
                        }
                    }
                }
                Ok(())
            };
            record(&self.c4, 0)?;
            record(&self.c6, 1)?;
        }
        let c4_zero = self.c4.is_zero();
        let c6_zero = self.c6.is_zero();
        // q0 = prod q^(m_q), m_q = max over defined slots
        let mut q0 = RatFunc::one();
        for (q, (v4, v6)) in &vals {
            let mut m = i64::MIN;
            if !c4_zero {
                m = m.max(div_ceil_i(-v4, 4));
            }
            if !c6_zero {
                m = m.max(div_ceil_i(-v6, 6));
            }
            if m != 0 && m != i64::MIN {
                let qf = RatFunc::from_poly(q);
                q0 = q0.mul(&qf.pow(m as i32).expect("q nonzero"));
            }
        }
        let a0 = if c4_zero {
            None
        } else {
            Some(q0.pow(4).expect("q0 nonzero").mul(&self.c4))
        };
        let b0 = if c6_zero {
            None
        } else {
            Some(q0.pow(6).expect("q0 nonzero").mul(&self.c6))
        };
        debug_assert!(a0.as_ref().map_or(true, |f| f.den.deg() == 0));
        debug_assert!(b0.as_ref().map_or(true, |f| f.den.deg() == 0));
        // q1: clear the scalar denominators, then fix 1728-divisibility
        let mut q1 = BigInt::one();
        if let Some(f) = &a0 {
            q1 = q1.lcm(&root_clearing(f.scalar.denom(), 4));
        }
        if let Some(f) = &b0 {
            q1 = q1.lcm(&root_clearing(f.scalar.denom(), 6));
        }
        for extra in [1u32, 2, 3, 6] {
            let q1e = &q1 * BigInt::from(extra);
            let a = a0.as_ref().map(|f| scaled_int_poly(f, &q1e.pow(4)));
            let b = b0.as_ref().map(|f| scaled_int_poly(f, &q1e.pow(6)));
            if a.iter().chain(b.iter()).any(|o| o.is_none()) {
                continue;
            }
            let a = a.flatten();
            let b = b.flatten();
            let a3 = a.as_ref().map(|p| p.pow(3)).unwrap_or_else(IntPoly::zero);
            let b2 = b.as_ref().map(|p| p.pow(2)).unwrap_or_else(IntPoly::zero);
            if a3
                .sub(&b2)
                .div_exact(&IntPoly::constant(BigInt::from(1728)))
                .is_some()
            {
                return Ok((a, b));
            }
        }
        unreachable!("multiplying q1 by 6 always clears 1728");
    }
}

fn div_ceil_i(a: i64, b: i64) -> i64 {
    num_integer::Integer::div_ceil(&a, &b)
}

/// Minimal positive n with n^k divisible by every prime power of d:
/// prod p^(ceil(e_p / k)).
fn root_clearing(d: &BigInt, k: u32) -> BigInt {
    if d.is_one() {
        return BigInt::one();
    }
    let f = crate::arith::factorize(d, &crate::arith::FactorBudget::default())
        .expect("denominator nonzero");
    let mut out = BigInt::one();
    for (p, e) in f.factors {
        let need = (e + k - 1) / k;
        out *= p.pow(need);
    }
    out
}

/// scale * f as an integer polynomial, None when not integral.
fn scaled_int_poly(f: &RatFunc, scale: &BigInt) -> Option<IntPoly> {
    let s = &f.scalar * BigRational::from(scale.clone());
    if !s.denom().is_one() {
        return None;
    }
    Some(f.num.scale(&s.to_integer()))
}

fn mult_in(fact: &Option<HomFactorization>, place: &HomPoly) -> Option<u32> {
    match fact {
        None => None, // exponent +infinity: the polynomial is zero
        Some(f) => Some(
            f.factors
                .iter()
                .find(|(p, _)| p == place)
                .map(|(_, e)| *e)
                .unwrap_or(0),
        ),
    }
}

/// One record per irreducible factor of D plus the degree place.
pub fn classify_places(
    c4_fact: &Option<HomFactorization>,
    c6_fact: &Option<HomFactorization>,
    d_fact: &HomFactorization,
) -> Vec<PlaceRecord> {
    let mut places: Vec<HomPoly> = vec![HomPoly::x()];
    for (p, _) in &d_fact.factors {
        if *p != HomPoly::x() {
            places.push(p.clone());
        }
    }
    places.sort_by(|a, b| (a.degree(), a.coeffs()).cmp(&(b.degree(), b.coeffs())));
    places
        .into_iter()
        .map(|place| {
            let e4 = mult_in(c4_fact, &place);
            let e6 = mult_in(c6_fact, &place);
            let e_d = d_fact
                .factors
                .iter()
                .find(|(p, _)| *p == place)
                .map(|(_, e)| *e)
                .unwrap_or(0);
            let klass = classify_exponents(e4, e6, e_d);
            let badness = badness_of(e4, e6, e_d);
            PlaceRecord {
                place,
                e4,
                e6,
                e_d,
                klass,
                badness,
            }
        })
        .collect()
}

/// The valuative criteria on the exponents; None means +infinity.
pub fn classify_exponents(e4: Option<u32>, e6: Option<u32>, e_d: u32) -> ReductionClass {
    if e_d == 0 {
        return ReductionClass::Good;
    }
    if e4 == Some(0) && e6 == Some(0) {
        return ReductionClass::Multiplicative;
    }
    if e4 == Some(2) && e6 == Some(3) && e_d > 6 {
        return ReductionClass::AddPotMult;
    }
    ReductionClass::AddPotGood
}

fn badness_of(e4: Option<u32>, e6: Option<u32>, e_d: u32) -> Badness {
    if e_d == 0 {
        return Badness::NotBad;
    }
    let e4_ge2 = e4.map_or(true, |e| e >= 2);
    let e6_ge3 = e6.map_or(true, |e| e >= 3);
    if e4_ge2 && e6_ge3 && e_d == 6 {
        Badness::HalfBad
    } else {
        Badness::QuiteBad
    }
}

/// Products over multiplicative, bad, and quite-bad places.
pub fn mbb(places: &[PlaceRecord]) -> (HomPoly, HomPoly, HomPoly) {
    let mut m = HomPoly::one();
    let mut b = HomPoly::one();
    let mut bp = HomPoly::one();
    for rec in places {
        if rec.klass == ReductionClass::Multiplicative {
            m = m.mul(&rec.place);
        }
        if rec.e_d > 0 {
            b = b.mul(&rec.place);
        }
        if rec.badness == Badness::QuiteBad {
            bp = bp.mul(&rec.place);
        }
    }
    (m.normalized(), b.normalized(), bp.normalized())
}

// ---------------------------------------------------------------------------
// report schema

#[derive(Debug, Serialize)]
pub struct PlaceJson {
    pub poly: String,
    pub e4: Option<u32>,
    pub e6: Option<u32>,
    #[serde(rename = "eD")]
    pub e_d: u32,
    pub class: ReductionClass,
    pub badness: Badness,
}

#[derive(Debug, Serialize)]
pub struct SurfaceReport {
    pub c4: String,
    pub c6: String,
    pub j: String,
    pub j_constant: bool,
    pub places: Vec<PlaceJson>,
    #[serde(rename = "M")]
    pub m: String,
    #[serde(rename = "B")]
    pub b: String,
    #[serde(rename = "Bprime")]
    pub bprime: String,
}

impl SurfaceAnalysis {
    pub fn report(&self) -> SurfaceReport {
        SurfaceReport {
            c4: self.surface.c4.to_string(),
            c6: self.surface.c6.to_string(),
            j: self.j.to_string(),
            j_constant: self.j_constant,
            places: self
                .places
                .iter()
                .map(|p| PlaceJson {
                    poly: p.place.to_string(),
                    e4: p.e4,
                    e6: p.e6,
                    e_d: p.e_d,
                    class: p.klass,
                    badness: p.badness,
                })
                .collect(),
            m: self.m.to_string(),
            b: self.b.to_string(),
            bprime: self.bprime.to_string(),
        }
    }
}
