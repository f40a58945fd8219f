//! Class numbers of binary quadratic forms, the elliptic-point factor
//! eps_N, the Fricke-involution trace on weight-k cusp forms, and the
//! newform root-number sum with its size check.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ModformError {
    #[error("discriminant must be negative and 0 or 1 mod 4")]
    BadDiscriminant,
    #[error("weight must be even and at least 2")]
    BadWeight,
    #[error("the trace formula does not cover N = 4")]
    Inapplicable,
    #[error("level N = R^2, 2R^2, 3R^2 or 4R^2 is excluded from the sum")]
    ExcludedLevel,
}

/// h(D): reduced primitive positive definite forms (a, b, c) of
/// discriminant D < 0, counted with -a < b <= a <= c and b >= 0 whenever
/// |b| = a or a = c.
pub fn class_number(d: i64) -> Result<u64, ModformError> {
    if d >= 0 || d.rem_euclid(4) > 1 {
        return Err(ModformError::BadDiscriminant);
    }
    let abs = (-d) as u64;
    let mut count = 0u64;
    // loop over b >= 0 of the right parity; pair (a, b, c) with (a, -b, c)
    let bmax = ((abs as f64 / 3.0).sqrt() as u64) + 1;
    let mut b = (abs % 2) as u64; // b = D mod 2
    while b <= bmax {
        let num = b * b + abs; // b^2 - D
        if num % 4 == 0 {
            let ac = num / 4;
            let mut a = b.max(1);
            while a * a <= ac {
                if ac % a == 0 {
                    let c = ac / a;
                    // reduction: |b| <= a <= c holds by construction
                    if gcd3(a, b, c) == 1 {
                        let negatable = b > 0 && b < a && a < c;
                        count += if negatable { 2 } else { 1 };
                    }
                }
                a += 1;
            }
        }
        b += 2;
    }
    Ok(count)
}

/// Independent route for the same count: scan a, then b in (-a, a],
/// solving for c. Used as the two-implementation check.
pub fn class_number_by_scan(d: i64) -> Result<u64, ModformError> {
    if d >= 0 || d.rem_euclid(4) > 1 {
        return Err(ModformError::BadDiscriminant);
    }
    let abs = -d;
    let amax = ((abs as f64 / 3.0).sqrt() as i64) + 1;
    let mut count = 0u64;
    for a in 1..=amax {
        for b in (-a + 1)..=a {
            let num = b * b + abs;
            if num % (4 * a) != 0 {
                continue;
            }
            let c = num / (4 * a);
            if c < a {
                continue;
            }
            if a == c && b < 0 {
                continue;
            }
            if gcd3(a as u64, b.unsigned_abs(), c as u64) == 1 {
                count += 1;
            }
        }
    }
    Ok(count)
}

fn gcd3(a: u64, b: u64, c: u64) -> u64 {
    fn g(mut a: u64, mut b: u64) -> u64 {
        while b != 0 {
            let t = a % b;
            a = b;
            b = t;
        }
        a
    }
    g(g(a, b), c)
}

/// The elliptic-point correction 2, 4/3 or 1 by N mod 8.
pub fn epsilon(n: u64) -> BigRational {
    match n % 8 {
        7 => BigRational::from(BigInt::from(2)),
        3 => BigRational::new(BigInt::from(4), BigInt::from(3)),
        _ => BigRational::one(),
    }
}

/// Trace of the Fricke involution on S_k(Gamma_0(N)), k even >= 2.
///
/// For N = 1, 2, 3 the space is zero at k = 2 and the genus-zero
/// formulas apply for k > 2; N = 4 is not covered.
pub fn fricke_trace(n: u64, k: u64) -> Result<BigRational, ModformError> {
    if k < 2 || k % 2 != 0 {
        return Err(ModformError::BadWeight);
    }
    match n {
        0 => Err(ModformError::BadDiscriminant),
        1 | 2 | 3 if k == 2 => Ok(BigRational::zero()),
        1 => {
            let base = BigInt::from(k / 12);
            let corr = BigInt::from(u64::from(k % 12 == 2));
            Ok(BigRational::from(base - corr))
        }
        2 => Ok(BigRational::from(BigInt::from(3 * (k / 4)) - BigInt::one())),
        3 => {
            let v: i64 = match k % 3 {
                0 => 1,
                1 => 0,
                _ => -1,
            };
            Ok(BigRational::from(BigInt::from(v)))
        }
        4 => Err(ModformError::Inapplicable),
        _ => {
            let h = class_number(-4 * n as i64)? as i64;
            let half = BigRational::new(BigInt::one(), BigInt::from(2));
            let term = half * epsilon(n) * BigRational::from(BigInt::from(h));
            if k == 2 {
                Ok(BigRational::one() - term)
            } else if k % 4 == 0 {
                Ok(term)
            } else {
                Ok(-term)
            }
        }
    }
}

/// Sum of newform root numbers on level N, weight k, via Moebius
/// inversion of the trace: sum over R^2 M = N of mu(R) Tr(W_M, S_k(M)).
pub fn eta_sum(n: u64, k: u64) -> Result<BigRational, ModformError> {
    if k < 2 || k % 2 != 0 {
        return Err(ModformError::BadWeight);
    }
    // excluded shapes: N = R^2, 2R^2, 3R^2, 4R^2
    let mut r = 1u64;
    while r * r <= n {
        if n % (r * r) == 0 && matches!(n / (r * r), 1 | 2 | 3 | 4) {
            return Err(ModformError::ExcludedLevel);
        }
        r += 1;
    }
    let mut acc = BigRational::zero();
    let mut r = 1u64;
    while r * r <= n {
        if n % (r * r) == 0 {
            let mu = moebius_u64(r);
            if mu != 0 {
                let m = n / (r * r);
                let tr = fricke_trace(m, k)?;
                acc += BigRational::from(BigInt::from(mu)) * tr;
            }
        }
        r += 1;
    }
    Ok(acc)
}

fn moebius_u64(mut n: u64) -> i64 {
    let mut sign = 1i64;
    let mut p = 2u64;
    while p * p <= n {
        if n % p == 0 {
            n /= p;
            if n % p == 0 {
                return 0;
            }
            sign = -sign;
        }
        p += 1;
    }
    if n > 1 {
        sign = -sign;
    }
    sign
}

/// One row of the trace table.
#[derive(Debug, Clone, Serialize)]
pub struct TraceReport {
    pub n: u64,
    pub k: u64,
    /// h(-4N); None for the small-level special cases.
    pub h: Option<u64>,
    pub epsilon: String,
    pub trace: Option<String>,
    pub eta_sum: Option<String>,
    pub applicable: bool,
}

pub fn trace_report(n: u64, k: u64) -> TraceReport {
    let h = if n > 4 { class_number(-4 * (n as i64)).ok() } else { None };
    let trace = fricke_trace(n, k).ok();
    let eta = eta_sum(n, k).ok();
    TraceReport {
        n,
        k,
        h,
        epsilon: epsilon(n).to_string(),
        applicable: trace.is_some() && eta.is_some(),
        trace: trace.map(|t| t.to_string()),
        eta_sum: eta.map(|t| t.to_string()),
    }
}

impl TraceReport {
    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{},{}",
            self.n,
            self.k,
            self.h.map(|h| h.to_string()).unwrap_or_default(),
            self.epsilon,
            self.trace.clone().unwrap_or_default(),
            self.eta_sum.clone().unwrap_or_default(),
            self.applicable
        )
    }

    pub fn csv_header() -> &'static str {
        "N,k,h,epsilon,trace,eta_sum,applicable"
    }
}

/// Integer value of an integral rational, or None.
pub fn as_integer(r: &BigRational) -> Option<BigInt> {
    if r.denom().is_one() {
        Some(r.numer().clone())
    } else {
        None
    }
}

/// |eta| / (sqrt(N) log N (log log N)^2), the shape functional of the
/// size bound; the caller fits the single constant.
pub fn eta_bound_ratio(n: u64, eta: &BigRational) -> f64 {
    let nf = n as f64;
    let val = eta.to_f64().unwrap_or(f64::NAN).abs();
    let ll = nf.ln().ln().max(0.1);
    val / (nf.sqrt() * nf.ln() * ll * ll)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_class_numbers() {
        assert_eq!(class_number(-3).unwrap(), 1);
        assert_eq!(class_number(-4).unwrap(), 1);
        assert_eq!(class_number(-7).unwrap(), 1);
        assert_eq!(class_number(-8).unwrap(), 1);
        assert_eq!(class_number(-20).unwrap(), 2);
        assert_eq!(class_number(-23).unwrap(), 3);
        assert_eq!(class_number(-24).unwrap(), 2);
        assert_eq!(class_number(-44).unwrap(), 3);
        assert_eq!(class_number(-47).unwrap(), 5);
        assert_eq!(class_number(-163).unwrap(), 1);
        assert!(class_number(-5).is_err());
        assert!(class_number(4).is_err());
    }

    #[test]
    fn two_implementations_agree() {
        for d in (-20000i64..0).filter(|d| d.rem_euclid(4) <= 1) {
            assert_eq!(
                class_number(d).unwrap(),
                class_number_by_scan(d).unwrap(),
                "D = {d}"
            );
        }
    }

    #[test]
    fn epsilon_cases() {
        assert_eq!(epsilon(7), BigRational::from(BigInt::from(2)));
        assert_eq!(
            epsilon(11),
            BigRational::new(BigInt::from(4), BigInt::from(3))
        );
        assert_eq!(epsilon(10), BigRational::one());
        assert_eq!(epsilon(15), BigRational::from(BigInt::from(2)));
    }

    #[test]
    fn fricke_trace_level_eleven() {
        // 1 - (1/2)(4/3) * 3 = -1; the level-11 curve has genus 1
        assert_eq!(
            fricke_trace(11, 2).unwrap(),
            BigRational::from(BigInt::from(-1))
        );
    }

    #[test]
    fn fricke_trace_special_levels() {
        // weight 2: no cusp forms at N = 1, 2, 3
        for n in [1u64, 2, 3] {
            assert_eq!(fricke_trace(n, 2).unwrap(), BigRational::zero());
        }
        // N = 2, k > 2: 3 floor(k/4) - 1
        for k in [4u64, 6, 8, 10, 12] {
            assert_eq!(
                fricke_trace(2, k).unwrap(),
                BigRational::from(BigInt::from(3 * (k as i64 / 4) - 1))
            );
        }
        // N = 1: floor(k/12) with the k = 2 mod 12 correction
        assert_eq!(fricke_trace(1, 12).unwrap(), BigRational::one());
        assert_eq!(fricke_trace(1, 14).unwrap(), BigRational::zero());
        assert_eq!(fricke_trace(1, 26).unwrap(), BigRational::one());
        // N = 3: 1 - 3{k/3}
        assert_eq!(fricke_trace(3, 6).unwrap(), BigRational::one());
        assert_eq!(fricke_trace(3, 4).unwrap(), BigRational::zero());
        assert_eq!(fricke_trace(3, 8).unwrap(), BigRational::from(BigInt::from(-1)));
        assert!(fricke_trace(4, 2).is_err());
        assert!(fricke_trace(5, 3).is_err());
    }

    #[test]
    fn weight_four_branch_sign() {
        // 4 | k: + (1/2) eps h
        let n = 17u64; // 1 mod 8, eps = 1
        let h = class_number(-68).unwrap(); // 4
        assert_eq!(
            fricke_trace(n, 4).unwrap(),
            BigRational::new(BigInt::from(h), BigInt::from(2))
        );
        assert_eq!(
            fricke_trace(n, 6).unwrap(),
            BigRational::new(-BigInt::from(h), BigInt::from(2))
        );
    }

    #[test]
    fn trace_is_integral_for_applicable_levels() {
        for n in 5..=2000u64 {
            if n == 4 {
                continue;
            }
            match fricke_trace(n, 2) {
                Ok(t) => {
                    assert!(as_integer(&t).is_some(), "N = {n}: trace {t}");
                }
                Err(_) => unreachable!("N = {n} should be covered"),
            }
        }
    }

    #[test]
    fn eta_sum_degenerates_on_squarefree() {
        for n in [5u64, 6, 10, 11, 13, 14, 15, 21, 22, 2026] {
            assert_eq!(eta_sum(n, 2).unwrap(), fricke_trace(n, 2).unwrap(), "N = {n}");
        }
    }

    #[test]
    fn eta_sum_level_45() {
        // 45 = 9 * 5: Tr(45) - Tr(5)
        let expect = fricke_trace(45, 2).unwrap() - fricke_trace(5, 2).unwrap();
        assert_eq!(eta_sum(45, 2).unwrap(), expect);
    }

    #[test]
    fn excluded_levels_rejected() {
        for n in [1u64, 2, 3, 4, 9, 18, 12, 16, 25, 50, 75, 100] {
            assert!(matches!(eta_sum(n, 2), Err(ModformError::ExcludedLevel)), "N = {n}");
        }
    }

    #[test]
    fn report_csv_shape() {
        let r = trace_report(11, 2);
        assert!(r.applicable);
        assert_eq!(r.h, Some(3));
        let row = r.csv_row();
        assert_eq!(row.split(',').count(), 7);
    }
}
