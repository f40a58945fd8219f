//! Concrete square-free sieve: local root counts, truncated density
//! products, exact censuses, and exceptional-set counters.

use crate::arith::{self, FactorBudget};
use crate::averaging::gcd_i64;
use crate::exec;
use crate::poly::BiPoly;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

/// Census mode: P(x) over 1..N, or P(x, y) over coprime pairs of the box.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CensusMode {
    Univariate,
    BivariateCoprime,
}

/// Exact square-free census against the truncated local-density product.
#[derive(Debug, Clone, Serialize)]
pub struct CensusReport {
    pub n: u64,
    /// Number of arguments with square-free value.
    pub count: u64,
    /// Arguments enumerated (census + non-square-free = domain size).
    pub domain_size: u64,
    /// Truncated Euler product, exact.
    pub main_term: String,
    pub main_term_f64: f64,
    pub truncation_bound: u64,
    /// count/domain - main term.
    pub residual: f64,
    /// Values that would not factor even after a retry.
    pub factorization_incomplete: u64,
}

impl CensusReport {
    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{}",
            self.n,
            self.count,
            self.domain_size,
            self.main_term_f64,
            self.residual,
            self.factorization_incomplete
        )
    }

    pub fn csv_header() -> &'static str {
        "N,count,domain_size,main_term,residual,factorization_incomplete"
    }
}

// ---------------------------------------------------------------------------
// local root counts

/// Reduces the polynomial's coefficients mod m for fast evaluation.
fn coeffs_mod(p: &BiPoly, m: u64) -> Vec<(u32, u32, u64)> {
    let mb = BigInt::from(m);
    p.terms
        .iter()
        .map(|(&(i, j), c)| {
            let r = ((c % &mb + &mb) % &mb).to_u64().unwrap();
            (i, j, r)
        })
        .collect()
}

fn eval_mod(terms: &[(u32, u32, u64)], x: u64, y: u64, m: u64) -> u64 {
    let mut acc: u128 = 0;
    for &(i, j, c) in terms {
        let mut t = c as u128;
        for _ in 0..i {
            t = (t * x as u128) % m as u128;
        }
        for _ in 0..j {
            t = (t * y as u128) % m as u128;
        }
        acc = (acc + t) % m as u128;
    }
    acc as u64
}

/// l(m): count of x in Z/m with P(x) = 0 mod m (univariate P in x).
pub fn roots_mod(p: &BiPoly, m: u64) -> u64 {
    assert!(m >= 1);
    let terms = coeffs_mod(p, m);
    (0..m).filter(|&x| eval_mod(&terms, x, 0, m) == 0).count() as u64
}

/// l2(m): count of pairs (x, y) in (Z/m)^2 with P(x, y) = 0 mod m.
pub fn roots_mod_bivariate(p: &BiPoly, m: u64) -> u64 {
    assert!(m >= 1);
    let terms = coeffs_mod(p, m);
    let mut count = 0u64;
    for x in 0..m {
        for y in 0..m {
            if eval_mod(&terms, x, y, m) == 0 {
                count += 1;
            }
        }
    }
    count
}

/// Same count at m = p^2 restricted to pairs with p not dividing
/// gcd(x, y), for the coprime-conditioned density.
pub fn roots_mod_bivariate_coprime(p: &BiPoly, prime: u64) -> u64 {
    let m = prime * prime;
    let terms = coeffs_mod(p, m);
    let mut count = 0u64;
    for x in 0..m {
        for y in 0..m {
            if x % prime == 0 && y % prime == 0 {
                continue;
            }
            if eval_mod(&terms, x, y, m) == 0 {
                count += 1;
            }
        }
    }
    count
}

/// Truncated density product over primes up to `bound`:
///  - univariate: prod (1 - l(p^2)/p^2)
///  - bivariate coprime: prod (1 - l2(p^2, coprime)/(p^4 - p^2))
pub fn density_main_term(p: &BiPoly, bound: u64, mode: CensusMode) -> BigRational {
    let primes = arith::primes_up_to(bound);
    let mut acc = BigRational::one();
    for q in primes {
        let factor = match mode {
            CensusMode::Univariate => {
                let l = roots_mod(p, q * q);
                BigRational::new(
                    BigInt::from((q * q - l.min(q * q)) as i128),
                    BigInt::from((q * q) as i128),
                )
            }
            CensusMode::BivariateCoprime => {
                let l = roots_mod_bivariate_coprime(p, q);
                let total = (q * q) as i128 * (q * q) as i128 - (q * q) as i128;
                BigRational::new(BigInt::from(total - l as i128), BigInt::from(total))
            }
        };
        acc *= factor;
    }
    acc
}

// ---------------------------------------------------------------------------
// census

fn squarefree_retry(v: i128, budget: &FactorBudget) -> Result<bool, ()> {
    match arith::is_squarefree_i128(v, budget) {
        Ok(b) => Ok(b),
        Err(_) => match arith::is_squarefree_i128(v, &FactorBudget::generous()) {
            Ok(b) => Ok(b),
            Err(_) => Err(()),
        },
    }
}

fn squarefree_big_retry(v: &BigInt, budget: &FactorBudget) -> Result<bool, ()> {
    if v.is_zero() {
        return Ok(false);
    }
    let check = |b: &FactorBudget| -> Option<bool> {
        let f = arith::factorize(v, b).ok()?;
        f.is_squarefree().ok()
    };
    check(budget)
        .or_else(|| check(&FactorBudget::generous()))
        .ok_or(())
}

fn squarefree_value(p: &BiPoly, x: i64, y: i64, budget: &FactorBudget) -> Result<bool, ()> {
    match p.eval_i128(x, y) {
        Some(v) => squarefree_retry(v, budget),
        None => squarefree_big_retry(&p.eval(&BigInt::from(x), &BigInt::from(y)), budget),
    }
}

/// Exact count of square-free values with the truncated main term.
pub fn census(
    p: &BiPoly,
    n: u64,
    mode: CensusMode,
    truncation_bound: u64,
    budget: &FactorBudget,
) -> CensusReport {
    #[derive(Clone, Copy, Default)]
    struct T {
        count: u64,
        domain: u64,
        incomplete: u64,
    }
    let merge = |mut a: T, b: T| {
        a.count += b.count;
        a.domain += b.domain;
        a.incomplete += b.incomplete;
        a
    };
    let t = match mode {
        CensusMode::Univariate => {
            let chunks = exec::chunk_range(1, n as i64, 64);
            exec::map_reduce(
                chunks,
                |(lo, hi)| {
                    let mut t = T::default();
                    for x in lo..=hi {
                        t.domain += 1;
                        match squarefree_value(p, x, 0, budget) {
                            Ok(true) => t.count += 1,
                            Ok(false) => {}
                            Err(()) => t.incomplete += 1,
                        }
                    }
                    t
                },
                T::default(),
                merge,
            )
        }
        CensusMode::BivariateCoprime => {
            let nn = n as i64;
            let chunks = exec::chunk_range(-nn, nn, 64);
            exec::map_reduce(
                chunks,
                |(lo, hi)| {
                    let mut t = T::default();
                    for x in lo..=hi {
                        for y in -nn..=nn {
                            if gcd_i64(x, y) != 1 {
                                continue;
                            }
                            t.domain += 1;
                            match squarefree_value(p, x, y, budget) {
                                Ok(true) => t.count += 1,
                                Ok(false) => {}
                                Err(()) => t.incomplete += 1,
                            }
                        }
                    }
                    t
                },
                T::default(),
                merge,
            )
        }
    };
    let main = density_main_term(p, truncation_bound, mode);
    let main_f = crate::averaging::rational_to_f64(&main);
    let ratio = if t.domain > 0 {
        t.count as f64 / t.domain as f64
    } else {
        0.0
    };
    CensusReport {
        n,
        count: t.count,
        domain_size: t.domain,
        main_term: main.to_string(),
        main_term_f64: main_f,
        truncation_bound,
        residual: ratio - main_f,
        factorization_incomplete: t.incomplete,
    }
}

// ---------------------------------------------------------------------------
// exceptional set

/// delta(N): arguments where some prime beyond the threshold divides the
/// value to a square. Univariate threshold sqrt(N), bivariate threshold N.
/// Returns (count, factorization_incomplete tally).
pub fn delta_exceptional(
    p: &BiPoly,
    n: u64,
    mode: CensusMode,
    require_coprime: bool,
    budget: &FactorBudget,
) -> (u64, u64) {
    let has_large_square =
        |v: &BigInt, threshold: &BigInt, budget: &FactorBudget| -> Result<bool, ()> {
            if v.is_zero() {
                // 0 is divisible by every square
                return Ok(true);
            }
            let f = arith::factorize(v, budget)
                .or_else(|_| arith::factorize(v, &FactorBudget::generous()))
                .map_err(|_| ())?;
            if !f.complete {
                // a repeated large prime may hide in the cofactor
                return Err(());
            }
            Ok(f.factors.iter().any(|(q, e)| *e >= 2 && q > threshold))
        };
    match mode {
        CensusMode::Univariate => {
            let threshold = BigInt::from((n as f64).sqrt().floor() as u64);
            let chunks = exec::chunk_range(1, n as i64, 64);
            exec::map_reduce(
                chunks,
                |(lo, hi)| {
                    let mut c = (0u64, 0u64);
                    for x in lo..=hi {
                        let v = p.eval(&BigInt::from(x), &BigInt::zero());
                        match has_large_square(&v, &threshold, budget) {
                            Ok(true) => c.0 += 1,
                            Ok(false) => {}
                            Err(()) => c.1 += 1,
                        }
                    }
                    c
                },
                (0, 0),
                |a, b| (a.0 + b.0, a.1 + b.1),
            )
        }
        CensusMode::BivariateCoprime => {
            let threshold = BigInt::from(n);
            let nn = n as i64;
            let chunks = exec::chunk_range(-nn, nn, 64);
            exec::map_reduce(
                chunks,
                |(lo, hi)| {
                    let mut c = (0u64, 0u64);
                    for x in lo..=hi {
                        for y in -nn..=nn {
                            if require_coprime && gcd_i64(x, y) != 1 {
                                continue;
                            }
                            if !require_coprime && (x, y) == (0, 0) {
                                continue;
                            }
                            let v = p.eval(&BigInt::from(x), &BigInt::from(y));
                            match has_large_square(&v, &threshold, budget) {
                                Ok(true) => c.0 += 1,
                                Ok(false) => {}
                                Err(()) => c.1 += 1,
                            }
                        }
                    }
                    c
                },
                (0, 0),
                |a, b| (a.0 + b.0, a.1 + b.1),
            )
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::parse_bipoly;

    fn poly(s: &str) -> BiPoly {
        parse_bipoly(s).unwrap()
    }

    #[test]
    fn roots_mod_examples() {
        // x^2 mod 4: roots 0 and 2
        assert_eq!(roots_mod(&poly("x^2"), 4), 2);
        // x mod anything: exactly one root
        for m in [1u64, 2, 9, 25, 100] {
            assert_eq!(roots_mod(&poly("x"), m), 1);
        }
        // x^3 + 2 mod 25 by direct enumeration
        let expect = (0..25i64)
            .filter(|&x| (x * x * x + 2) % 25 == 0)
            .count() as u64;
        assert_eq!(roots_mod(&poly("x^3 + 2"), 25), expect);
    }

    #[test]
    fn roots_multiplicative_crt() {
        let p = poly("x^3 + 2");
        for (a, b) in [(4u64, 9u64), (25, 49), (8, 27), (9, 121), (49, 4)] {
            assert_eq!(
                roots_mod(&p, a * b),
                roots_mod(&p, a) * roots_mod(&p, b),
                "{a} * {b}"
            );
        }
        let q = poly("x^2 + 1");
        for (a, b) in [(4u64, 25u64), (9, 169), (8, 125)] {
            assert_eq!(roots_mod(&q, a * b), roots_mod(&q, a) * roots_mod(&q, b));
        }
    }

    #[test]
    fn density_main_term_examples() {
        // P = x: l(p^2) = 1, so the product to 3 is (1 - 1/4)(1 - 1/9) = 2/3
        let d = density_main_term(&poly("x"), 3, CensusMode::Univariate);
        assert_eq!(d, BigRational::new(BigInt::from(2), BigInt::from(3)));
        // a constant with no roots mod any p^2 keeps the product at 1
        let d = density_main_term(&poly("2"), 50, CensusMode::Univariate);
        assert_eq!(d, BigRational::one());
    }

    #[test]
    fn density_two_route_agreement() {
        // second implementation: independent BigInt evaluation per residue
        let p = poly("x^3 + 2");
        let bound = 100;
        let direct = {
            let mut acc = BigRational::one();
            for q in arith::primes_up_to(bound) {
                let m = q * q;
                let mut l = 0u64;
                for x in 0..m {
                    let v = BigInt::from(x) * BigInt::from(x) * BigInt::from(x)
                        + BigInt::from(2);
                    if (v % BigInt::from(m)).is_zero() {
                        l += 1;
                    }
                }
                acc *= BigRational::new(BigInt::from(m - l), BigInt::from(m));
            }
            acc
        };
        assert_eq!(density_main_term(&p, bound, CensusMode::Univariate), direct);
    }

    #[test]
    fn main_term_monotone_in_bound() {
        let p = poly("x^3 + 2");
        let mut last = BigRational::one();
        for bound in [2u64, 5, 20, 60, 150] {
            let d = density_main_term(&p, bound, CensusMode::Univariate);
            assert!(d <= last);
            last = d;
        }
    }

    #[test]
    fn census_of_identity_matches_classical_density() {
        // square-free integers have density 6/pi^2
        let budget = FactorBudget::default();
        let r = census(&poly("x"), 10_000, CensusMode::Univariate, 100, &budget);
        assert_eq!(r.domain_size, 10_000);
        assert_eq!(r.factorization_incomplete, 0);
        let density = r.count as f64 / r.domain_size as f64;
        assert!((density - 6.0 / (std::f64::consts::PI.powi(2))).abs() < 0.01);
    }

    #[test]
    fn census_complement_is_exact() {
        let budget = FactorBudget::default();
        let p = poly("x^3 + 2");
        let n = 2000;
        let r = census(&p, n, CensusMode::Univariate, 50, &budget);
        let mut not_sf = 0u64;
        for x in 1..=n as i64 {
            let v = (x as i128).pow(3) + 2;
            if !arith::is_squarefree_i128(v, &budget).unwrap() {
                not_sf += 1;
            }
        }
        assert_eq!(r.count + not_sf, r.domain_size);
    }

    #[test]
    fn square_polynomial_census_is_tiny() {
        // P = (x+1)^2: every value for x >= 1 is a square > 1
        let budget = FactorBudget::default();
        let r = census(&poly("(x+1)^2"), 500, CensusMode::Univariate, 20, &budget);
        assert_eq!(r.count, 0);
    }

    #[test]
    fn delta_for_linear_is_zero() {
        let budget = FactorBudget::default();
        for n in [10u64, 100, 1000] {
            let (d, bad) =
                delta_exceptional(&poly("x"), n, CensusMode::Univariate, false, &budget);
            assert_eq!((d, bad), (0, 0), "N = {n}");
        }
    }

    #[test]
    fn delta_subset_of_non_squarefree() {
        let budget = FactorBudget::default();
        let p = poly("x^3 + 2");
        let n = 1500u64;
        let (d, bad) = delta_exceptional(&p, n, CensusMode::Univariate, false, &budget);
        assert_eq!(bad, 0);
        let r = census(&p, n, CensusMode::Univariate, 20, &budget);
        let non_sf = r.domain_size - r.count;
        assert!(d <= non_sf, "delta {d} vs non-squarefree {non_sf}");
    }

    #[test]
    fn bivariate_census_runs() {
        let budget = FactorBudget::default();
        let p = poly("x^3 + 2*y^3");
        let r = census(&p, 40, CensusMode::BivariateCoprime, 20, &budget);
        assert!(r.count > 0);
        assert!(r.count <= r.domain_size);
        assert!(r.residual.abs() < 0.1, "residual {}", r.residual);
    }

    #[test]
    fn bivariate_roots_plain_and_coprime() {
        let p = poly("x*y");
        // mod p^2 = 4: pairs with xy = 0 mod 4
        let all = roots_mod_bivariate(&p, 4);
        let expect = (0..4u64)
            .flat_map(|x| (0..4u64).map(move |y| (x, y)))
            .filter(|&(x, y)| (x * y) % 4 == 0)
            .count() as u64;
        assert_eq!(all, expect);
        let cop = roots_mod_bivariate_coprime(&p, 2);
        let expect_cop = (0..4u64)
            .flat_map(|x| (0..4u64).map(move |y| (x, y)))
            .filter(|&(x, y)| !(x % 2 == 0 && y % 2 == 0) && (x * y) % 4 == 0)
            .count() as u64;
        assert_eq!(cop, expect_cop);
    }
}
