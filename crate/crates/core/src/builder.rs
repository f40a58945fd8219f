//! Family construction: from a chosen (j, d) pair, and from a target
//! multiplicative polynomial via the standard recipe, with round-trip
//! verification against the surface analyzer.

use crate::poly::{factor_q, HomPoly, IntPoly, RatFunc};
use crate::surface::{EllipticSurface, SurfaceAnalysis, SurfaceError};
use num_bigint::BigInt;
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum BuilderError {
    #[error("j must not be identically 0 or 1728, and d must be nonzero")]
    DegenerateJ,
    #[error("target must be a nonconstant squarefree homogeneous polynomial")]
    TargetUnachievable(String),
    #[error(transparent)]
    Surface(#[from] SurfaceError),
    #[error(transparent)]
    Poly(#[from] crate::poly::PolyError),
}

/// A constructed family together with the recipe pieces it came from.
#[derive(Debug, Clone)]
pub struct FamilyRecipe {
    pub j: RatFunc,
    pub d: RatFunc,
    pub c4: RatFunc,
    pub c6: RatFunc,
    /// Place polynomials Q_i of the target's non-degree factors.
    pub q_polys: Vec<IntPoly>,
    pub k_exps: Vec<u32>,
    pub r1: IntPoly,
    pub r2: IntPoly,
    pub r3: IntPoly,
    pub r4: IntPoly,
    /// Full denominator of j including its integer content:
    /// j = r3 / denom_full.
    pub denom_full: IntPoly,
}

/// Surface from j and a twist d: c4 = d^2 j (j - 1728),
/// c6 = d^3 j (j - 1728)^2.
pub fn from_j_d(j: &RatFunc, d: &RatFunc) -> Result<EllipticSurface, BuilderError> {
    if j.is_zero() || d.is_zero() {
        return Err(BuilderError::DegenerateJ);
    }
    let c1728 = RatFunc::from_int(1728);
    let jm = j.sub(&c1728);
    if jm.is_zero() {
        return Err(BuilderError::DegenerateJ);
    }
    let c4 = d.pow(2).expect("d nonzero").mul(j).mul(&jm);
    let c6 = d.pow(3).expect("d nonzero").mul(j).mul(&jm).mul(&jm);
    let s = EllipticSurface::new(c4, c6)?;
    debug_assert_eq!(&s.j_invariant(), j);
    Ok(s)
}

/// Recipe pieces for a given (j, d): the denominator of j is factored
/// into the Q_i, the numerator becomes R3, and R4 carries d's cofactor.
pub fn recipe_from_j_d(j: &RatFunc, d: &RatFunc) -> Result<FamilyRecipe, BuilderError> {
    let s = from_j_d(j, d)?;
    let (num, num_den) = j.clear_denominators();
    // j = (num / num_den) / den  =>  r3 = num, denom_full = num_den * den
    let denom_full = j.den.scale(&num_den);
    let (_, qfactors) = factor_q(&j.den)?;
    Ok(FamilyRecipe {
        j: j.clone(),
        d: d.clone(),
        c4: s.c4,
        c6: s.c6,
        q_polys: qfactors.iter().map(|(q, _)| q.clone()).collect(),
        k_exps: qfactors.iter().map(|(_, e)| *e).collect(),
        r1: IntPoly::one(),
        r2: IntPoly::one(),
        r3: num,
        r4: IntPoly::one(),
        denom_full,
    })
}

/// Builds a family whose multiplicative polynomial is the given
/// squarefree homogeneous target, using the default recipe
/// (all k_i = 1, auxiliary polynomials trivial): j = R3 / prod Q_i,
/// d = prod Q_i. When the degree place divides the target, R3 is chosen
/// of even degree exceeding the Q-degrees and coprime to them.
pub fn target_m(p: &HomPoly) -> Result<FamilyRecipe, BuilderError> {
    if p.is_constant() {
        return Err(BuilderError::TargetUnachievable("constant target".into()));
    }
    if !p.is_squarefree() {
        return Err(BuilderError::TargetUnachievable("target not squarefree".into()));
    }
    let fact = p.factor(crate::poly::DEFAULT_DEGREE_BOUND)?;
    let mut wants_x = false;
    let mut q_polys: Vec<IntPoly> = Vec::new();
    for (place, e) in &fact.factors {
        debug_assert_eq!(*e, 1);
        if *place == HomPoly::x() {
            wants_x = true;
        } else {
            q_polys.push(place.dehomogenize_x1());
        }
    }
    let qprod = q_polys
        .iter()
        .fold(IntPoly::one(), |acc, q| acc.mul(q));
    let s: usize = q_polys.iter().map(|q| q.deg()).sum();
    let r3 = if !wants_x {
        IntPoly::one()
    } else {
        // smallest even degree beyond the Q-part keeps the degree place
        // multiplicative; constants tried until coprime to every Q_i
        let deg = if s % 2 == 0 { s + 2 } else { s + 1 };
        let mut chosen = None;
        for c in 1i64..=64 {
            let cand = IntPoly::monomial(deg).add(&IntPoly::constant(BigInt::from(c)));
            if q_polys.iter().all(|q| cand.gcd(q).deg() == 0) {
                let diff = cand.sub(&qprod.scale(&BigInt::from(1728)));
                if !diff.is_zero() {
                    chosen = Some(cand);
                    break;
                }
            }
        }
        chosen.ok_or_else(|| {
            BuilderError::TargetUnachievable("no admissible R3 found".into())
        })?
    };
    let j = RatFunc::from_frac(&r3, &qprod)?;
    let d = RatFunc::from_poly(&qprod);
    let srf = from_j_d(&j, &d)?;
    // verify the recipe a posteriori
    let an = srf.analyze()?;
    if an.m != p.normalized() {
        return Err(BuilderError::TargetUnachievable(format!(
            "recipe produced M = {}, expected {}",
            an.m,
            p.normalized()
        )));
    }
    Ok(FamilyRecipe {
        j,
        d,
        c4: srf.c4,
        c6: srf.c6,
        q_polys,
        k_exps: vec![1; fact.factors.len()],
        r1: IntPoly::one(),
        r2: IntPoly::one(),
        r3: r3.clone(),
        r4: IntPoly::one(),
        denom_full: qprod,
    })
}

impl FamilyRecipe {
    pub fn surface(&self) -> Result<EllipticSurface, BuilderError> {
        Ok(EllipticSurface::new(self.c4.clone(), self.c6.clone())?)
    }

    pub fn analyze(&self) -> Result<SurfaceAnalysis, BuilderError> {
        Ok(self.surface()?.analyze()?)
    }
}

/// Largest irreducible-factor degree, with constants counted as 1 (the
/// convention used when every recipe term degenerates).
pub fn deg_irr_floor1(p: &IntPoly) -> Result<usize, BuilderError> {
    if p.is_zero() {
        return Ok(1);
    }
    if p.deg() == 0 {
        return Ok(1);
    }
    let (_, factors) = factor_q(p)?;
    Ok(factors.iter().map(|(q, _)| q.deg()).max().unwrap_or(1).max(1))
}

/// Predicted largest irreducible degree of B'(1, t): the maximum over
/// the recipe terms R1, R2, R3, R3 - 1728 R1 R2^2 prod Q^k, and the
/// target's own factors.
pub fn predict_deg_irr_bprime(recipe: &FamilyRecipe, m: &HomPoly) -> Result<usize, BuilderError> {
    let mut cands: Vec<usize> = Vec::new();
    cands.push(deg_irr_floor1(&m.dehomogenize_x1())?);
    cands.push(deg_irr_floor1(&recipe.r1)?);
    cands.push(deg_irr_floor1(&recipe.r2)?);
    cands.push(deg_irr_floor1(&recipe.r3)?);
    let diff = recipe
        .r3
        .sub(&recipe.denom_full.scale(&BigInt::from(1728)));
    cands.push(deg_irr_floor1(&diff)?);
    Ok(cands.into_iter().max().unwrap_or(1))
}

/// Recipe JSON: inputs plus the verified analysis products.
#[derive(Debug, Serialize)]
pub struct RecipeReport {
    pub j: String,
    pub d: String,
    pub c4: String,
    pub c6: String,
    #[serde(rename = "M")]
    pub m: String,
    #[serde(rename = "B")]
    pub b: String,
    #[serde(rename = "Bprime")]
    pub bprime: String,
    pub predicted_deg_irr_bprime: usize,
    pub actual_deg_irr_bprime: usize,
}

pub fn recipe_report(recipe: &FamilyRecipe) -> Result<RecipeReport, BuilderError> {
    let an = recipe.analyze()?;
    let predicted = predict_deg_irr_bprime(recipe, &an.m)?;
    let actual = deg_irr_floor1(&an.bprime.dehomogenize_x1())?;
    Ok(RecipeReport {
        j: recipe.j.to_string(),
        d: recipe.d.to_string(),
        c4: recipe.c4.to_string(),
        c6: recipe.c6.to_string(),
        m: an.m.to_string(),
        b: an.b.to_string(),
        bprime: an.bprime.to_string(),
        predicted_deg_irr_bprime: predicted,
        actual_deg_irr_bprime: actual,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{parse_hompoly, parse_ratfunc};

    #[test]
    fn j_inverse_t_matches_known_family() {
        let j = parse_ratfunc("1/t").unwrap();
        let d = parse_ratfunc("t").unwrap();
        let s = from_j_d(&j, &d).unwrap();
        assert_eq!(s.c4, parse_ratfunc("1 - 1728*t").unwrap());
        assert_eq!(s.c6, parse_ratfunc("(1 - 1728*t)^2").unwrap());
        assert_eq!(s.j_invariant(), j);
    }

    #[test]
    fn quartic_j_family() {
        let j = parse_ratfunc("t^-4 - 3").unwrap();
        let d = parse_ratfunc("t + 1").unwrap();
        let s = from_j_d(&j, &d).unwrap();
        assert_eq!(s.j_invariant(), j);
        let an = s.analyze().unwrap();
        assert_eq!(an.m, HomPoly::y());
    }

    #[test]
    fn constant_j_gives_constant_m() {
        let j = parse_ratfunc("2").unwrap();
        let d = parse_ratfunc("1").unwrap();
        let s = from_j_d(&j, &d).unwrap();
        let an = s.analyze().unwrap();
        assert!(an.j_constant);
        assert!(an.m.is_constant());
    }

    #[test]
    fn degenerate_j_rejected() {
        let zero = RatFunc::zero();
        let one = RatFunc::one();
        assert!(matches!(from_j_d(&zero, &one), Err(BuilderError::DegenerateJ)));
        let j1728 = parse_ratfunc("1728").unwrap();
        assert!(matches!(from_j_d(&j1728, &one), Err(BuilderError::DegenerateJ)));
    }

    #[test]
    fn target_y_reproduces_reference_family() {
        let recipe = target_m(&HomPoly::y()).unwrap();
        assert_eq!(recipe.j, parse_ratfunc("1/t").unwrap());
        assert_eq!(recipe.d, parse_ratfunc("t").unwrap());
        let an = recipe.analyze().unwrap();
        assert_eq!(an.m, HomPoly::y());
    }

    #[test]
    fn target_heathbrown_cubic() {
        let p = parse_hompoly("x^3 + 2*y^3").unwrap();
        let recipe = target_m(&p).unwrap();
        let an = recipe.analyze().unwrap();
        assert_eq!(an.m, p.normalized());
        // the recipe's c4 is 1 - 1728 (2 t^3 + 1)
        assert_eq!(
            recipe.c4,
            parse_ratfunc("1 - 1728*(2*t^3 + 1)").unwrap()
        );
    }

    #[test]
    fn target_degree_place_alone() {
        let recipe = target_m(&HomPoly::x()).unwrap();
        // R3 of even degree > 0, j a polynomial
        assert!(recipe.r3.deg() >= 2 && recipe.r3.deg() % 2 == 0);
        let an = recipe.analyze().unwrap();
        assert_eq!(an.m, HomPoly::x());
    }

    #[test]
    fn target_with_x_and_linear_factor() {
        let p = parse_hompoly("x*(3*x + y)").unwrap();
        let recipe = target_m(&p).unwrap();
        let an = recipe.analyze().unwrap();
        assert_eq!(an.m, p.normalized());
    }

    #[test]
    fn rejects_bad_targets() {
        // not squarefree
        let p = parse_hompoly("x^2").unwrap();
        assert!(matches!(
            target_m(&p),
            Err(BuilderError::TargetUnachievable(_))
        ));
        let c = HomPoly::one();
        assert!(target_m(&c).is_err());
    }

    #[test]
    fn prediction_matches_analyzer() {
        for target in ["y", "x", "x^3 + 2*y^3", "x*(3*x + y)", "(x + y)*y"] {
            let p = parse_hompoly(target).unwrap();
            let recipe = target_m(&p).unwrap();
            let an = recipe.analyze().unwrap();
            let predicted = predict_deg_irr_bprime(&recipe, &an.m).unwrap();
            let actual = deg_irr_floor1(&an.bprime.dehomogenize_x1()).unwrap();
            assert_eq!(predicted, actual, "target {target}");
        }
        // from (j, d) directly: the quadratic-pole family
        let j = parse_ratfunc("t^-2 (t^-2 - 1728)").unwrap();
        let j = j.div(&parse_ratfunc("t^-2 - 1728").unwrap()).unwrap(); // j = t^-2
        let d = RatFunc::one();
        let recipe = recipe_from_j_d(&j, &d).unwrap();
        let an = recipe.analyze().unwrap();
        let predicted = predict_deg_irr_bprime(&recipe, &an.m).unwrap();
        let actual = deg_irr_floor1(&an.bprime.dehomogenize_x1()).unwrap();
        assert_eq!(predicted, actual);
    }

    #[test]
    fn recipe_report_roundtrip() {
        let p = parse_hompoly("x^3 + 2*y^3").unwrap();
        let recipe = target_m(&p).unwrap();
        let rep = recipe_report(&recipe).unwrap();
        assert_eq!(rep.m, "x^3 + 2*y^3");
        assert_eq!(rep.predicted_deg_irr_bprime, rep.actual_deg_irr_bprime);
        let json = serde_json::to_string(&rep).unwrap();
        assert!(json.contains("Bprime"));
    }
}
