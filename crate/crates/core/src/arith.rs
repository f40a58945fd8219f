//! Arbitrary-precision integer arithmetic and multiplicative functions.
//!
//! Factorization is staged: trial division against a cached prime table,
//! then Pollard-Brent rho with a deterministic parameter schedule. Values
//! that resist both stages within the budget come back with
//! `complete == false` and the unfactored cofactor recorded; the
//! sign-valued functions refuse to guess on such input.

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};
use std::sync::OnceLock;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ArithError {
    /// The factorization backend gave up within its budget; the offending
    /// cofactor is carried along for diagnostics.
    #[error("factorization incomplete: unfactored cofactor {0}")]
    FactorizationIncomplete(BigInt),
    #[error("argument must be nonzero")]
    ZeroArgument,
}

/// Effort policy for `factorize`.
#[derive(Debug, Clone, Copy)]
pub struct FactorBudget {
    /// Upper bound for the trial-division stage.
    pub trial_bound: u64,
    /// Brent cycle iterations per rho round before the parameter changes.
    pub rho_iterations: u64,
    /// Number of rho parameter choices to try per composite.
    pub rho_rounds: u32,
}

impl Default for FactorBudget {
    fn default() -> Self {
        FactorBudget {
            trial_bound: 1_000_000,
            rho_iterations: 1 << 20,
            rho_rounds: 24,
        }
    }
}

impl FactorBudget {
    /// A larger budget for retries after an incomplete first attempt.
    pub fn generous() -> Self {
        FactorBudget {
            trial_bound: 1_000_000,
            rho_iterations: 1 << 24,
            rho_rounds: 64,
        }
    }
}

/// Sign and prime-power decomposition of an integer.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factorization {
    pub sign: i8,
    /// (prime, exponent) with primes strictly increasing.
    pub factors: Vec<(BigInt, u32)>,
    pub complete: bool,
    /// Composite remainder when `complete` is false.
    pub cofactor: Option<BigInt>,
}

impl Factorization {
    pub fn unit(sign: i8) -> Self {
        Factorization {
            sign,
            factors: Vec::new(),
            complete: true,
            cofactor: None,
        }
    }

    /// Reconstructs the factored integer (including the cofactor if any).
    pub fn value(&self) -> BigInt {
        let mut v = BigInt::from(self.sign);
        for (p, e) in &self.factors {
            v *= p.pow(*e);
        }
        if let Some(c) = &self.cofactor {
            v *= c;
        }
        v
    }

    /// Total number of prime divisors with multiplicity, when known.
    pub fn big_omega(&self) -> Result<u64, ArithError> {
        if !self.complete {
            return Err(ArithError::FactorizationIncomplete(
                self.cofactor.clone().unwrap_or_else(BigInt::zero),
            ));
        }
        Ok(self.factors.iter().map(|(_, e)| *e as u64).sum())
    }

    pub fn is_squarefree(&self) -> Result<bool, ArithError> {
        // an exponent >= 2 among the known factors settles it even if the
        // cofactor is unfactored only when the answer is "no"
        if self.factors.iter().any(|(_, e)| *e >= 2) {
            return Ok(false);
        }
        if !self.complete {
            return Err(ArithError::FactorizationIncomplete(
                self.cofactor.clone().unwrap_or_else(BigInt::zero),
            ));
        }
        Ok(true)
    }
}

// ---------------------------------------------------------------------------
// prime table

static SMALL_PRIMES: OnceLock<Vec<u32>> = OnceLock::new();

/// Primes below 2^16, enough to trial-divide anything up to 2^32 to
/// completion and to seed the staged factorizer.
pub fn small_primes() -> &'static [u32] {
    SMALL_PRIMES.get_or_init(|| {
        let n = 1usize << 16;
        let mut sieve = vec![true; n];
        sieve[0] = false;
        sieve[1] = false;
        let mut i = 2;
        while i * i < n {
            if sieve[i] {
                let mut j = i * i;
                while j < n {
                    sieve[j] = false;
                    j += i;
                }
            }
            i += 1;
        }
        (2..n).filter(|&i| sieve[i]).map(|i| i as u32).collect()
    })
}

/// Primes up to `bound` inclusive (fresh sieve; callers cache as needed).
pub fn primes_up_to(bound: u64) -> Vec<u64> {
    let n = bound as usize + 1;
    let mut sieve = vec![true; n.max(2)];
    sieve[0] = false;
    sieve[1] = false;
    let mut i = 2usize;
    while i * i < n {
        if sieve[i] {
            let mut j = i * i;
            while j < n {
                sieve[j] = false;
                j += i;
            }
        }
        i += 1;
    }
    (2..n).filter(|&i| sieve[i]).map(|i| i as u64).collect()
}

// ---------------------------------------------------------------------------
// u64 kernels

#[inline]
fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut acc = 1u64;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, b, m);
        }
        b = mul_mod(b, b, m);
        e >>= 1;
    }
    acc
}

/// Deterministic Miller-Rabin for u64 (the standard 7-base certificate).
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n % p == 0 {
            return n == p;
        }
    }
    let d = n - 1;
    let s = d.trailing_zeros();
    let d = d >> s;
    'witness: for a in [2u64, 325, 9375, 28178, 450775, 9780504, 1795265022] {
        let a = a % n;
        if a == 0 {
            continue;
        }
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn gcd_u64(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

// ---------------------------------------------------------------------------
// u128 kernels (for cofactors between 2^64 and 2^128)

fn gcd_u128(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// (a * b) mod m via 128x128 -> 256-bit schoolbook multiplication and
/// shift-subtract reduction of the high half. Requires m < 2^127.
fn mul_mod_u128(a: u128, b: u128, m: u128) -> u128 {
    debug_assert!(m > 1 && m < 1 << 127);
    let (a, b) = (a % m, b % m);
    if a.leading_zeros() + b.leading_zeros() >= 128 {
        // the plain product fits
        return a.wrapping_mul(b) % m;
    }
    const MASK: u128 = (1u128 << 64) - 1;
    let (a_hi, a_lo) = (a >> 64, a & MASK);
    let (b_hi, b_lo) = (b >> 64, b & MASK);
    // full product = hi * 2^128 + lo
    let ll = a_lo * b_lo;
    let lh = a_lo * b_hi;
    let hl = a_hi * b_lo;
    let hh = a_hi * b_hi;
    let mid = (ll >> 64) + (lh & MASK) + (hl & MASK);
    let lo = (mid << 64) | (ll & MASK);
    let hi = hh + (lh >> 64) + (hl >> 64) + (mid >> 64);
    // r = hi * 2^128 mod m by 128 modular doublings (safe: r < m < 2^127)
    let mut r = hi % m;
    for _ in 0..128 {
        r <<= 1;
        if r >= m {
            r -= m;
        }
    }
    (r + lo % m) % m
}

fn pow_mod_u128(mut b: u128, mut e: u128, m: u128) -> u128 {
    let mut acc = 1u128 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod_u128(acc, b, m);
        }
        b = mul_mod_u128(b, b, m);
        e >>= 1;
    }
    acc
}

/// Miller-Rabin on u128 with a fixed witness set; deterministic below
/// 2^64 and a strong probable-prime test above.
pub fn is_prime_u128(n: u128) -> bool {
    if let Ok(u) = u64::try_from(n) {
        return is_prime_u64(u);
    }
    for p in [2u128, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n % p == 0 {
            return false;
        }
    }
    let d = n - 1;
    let s = d.trailing_zeros();
    let d = d >> s;
    'witness: for a in [2u128, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41] {
        let mut x = pow_mod_u128(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod_u128(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Pollard-Brent rho on u128.
fn rho_u128(n: u128, budget: &FactorBudget) -> Option<u128> {
    debug_assert!(n % 2 == 1);
    for round in 0..budget.rho_rounds {
        let c = 1 + round as u128;
        let f = |x: u128| {
            let v = mul_mod_u128(x, x, n);
            if v + c >= n {
                v + c - n
            } else {
                v + c
            }
        };
        let mut x = 2 + round as u128;
        let mut y = x;
        let mut count = 0u64;
        let cap = budget.rho_iterations;
        let mut saved = x;
        let mut d = 1u128;
        'outer: while d == 1 && count < cap {
            saved = x;
            let mut q = 1u128;
            for _ in 0..64 {
                x = f(x);
                y = f(f(y));
                let diff = if x > y { x - y } else { y - x };
                if diff == 0 {
                    d = 0;
                    break 'outer;
                }
                q = mul_mod_u128(q, diff, n);
                count += 1;
            }
            d = gcd_u128(q, n);
        }
        if d == 0 || d == n {
            let mut x = saved;
            let mut yy = y;
            for _ in 0..64 {
                x = f(x);
                yy = f(f(yy));
                let diff = if x > yy { x - yy } else { yy - x };
                if diff != 0 {
                    let g = gcd_u128(diff, n);
                    if g != 1 && g != n {
                        return Some(g);
                    }
                }
            }
            continue;
        }
        if d != 1 && d != n {
            return Some(d);
        }
    }
    None
}

/// Fully factor a u128 that has no prime factors below 2^16; pushes
/// (prime, exponent) pairs, returns the unfactored cofactor on stall.
fn factor_rough_u128(n: u128, budget: &FactorBudget, out: &mut Vec<(u128, u32)>) -> Option<u128> {
    let mut stack = vec![n];
    let mut cofactor: Option<u128> = None;
    while let Some(m) = stack.pop() {
        if m == 1 {
            continue;
        }
        if let Ok(u) = u64::try_from(m) {
            let mut small = Vec::new();
            match factor_u64_into(u, budget, &mut small) {
                None => {
                    for (p, e) in small {
                        push_merge_u128(out, p as u128, e);
                    }
                }
                Some(c) => {
                    for (p, e) in small {
                        push_merge_u128(out, p as u128, e);
                    }
                    cofactor = Some(cofactor.map_or(c as u128, |prev| prev * c as u128));
                }
            }
            continue;
        }
        if is_prime_u128(m) {
            push_merge_u128(out, m, 1);
            continue;
        }
        if let Some((b, k)) = perfect_power_u128(m) {
            for _ in 0..k {
                stack.push(b);
            }
            continue;
        }
        match rho_u128(m, budget) {
            Some(d) => {
                stack.push(d);
                stack.push(m / d);
            }
            None => {
                cofactor = Some(cofactor.map_or(m, |prev| prev.saturating_mul(m)));
            }
        }
    }
    cofactor
}

fn push_merge_u128(out: &mut Vec<(u128, u32)>, p: u128, e: u32) {
    if let Some(entry) = out.iter_mut().find(|(q, _)| *q == p) {
        entry.1 += e;
    } else {
        out.push((p, e));
    }
}

fn perfect_power_u128(n: u128) -> Option<(u128, u32)> {
    for k in [2u32, 3, 5, 7, 11] {
        let r = (n as f64).powf(1.0 / k as f64).round() as u128;
        for cand in r.saturating_sub(1)..=r + 1 {
            if cand > 1 && cand.checked_pow(k).map_or(false, |v| v == n) {
                return Some((cand, k));
            }
        }
    }
    None
}

/// Pollard-Brent rho on u64 with fixed parameter schedule; returns a
/// nontrivial factor or None if every round stalled.
fn rho_u64(n: u64, budget: &FactorBudget) -> Option<u64> {
    debug_assert!(n > 1 && !is_prime_u64(n) && n % 2 == 1);
    for round in 0..budget.rho_rounds {
        let c = 1 + round as u64; // deterministic "randomness"
        let f = |x: u64| (mul_mod(x, x, n) + c) % n;
        let mut x = 2 + round as u64 % (n - 2);
        let mut y = x;
        let mut d = 1u64;
        let mut count = 0u64;
        let mut saved_x = x;
        // Brent: batch gcds of 128 products
        'outer: while d == 1 && count < budget.rho_iterations {
            saved_x = x;
            let mut q = 1u64;
            for _ in 0..128 {
                x = f(x);
                y = f(f(y));
                let diff = x.abs_diff(y);
                if diff == 0 {
                    d = 0; // cycle met exactly; retry with next c
                    break 'outer;
                }
                q = mul_mod(q, diff, n);
                count += 1;
            }
            d = gcd_u64(q, n);
        }
        if d == 0 || d == n {
            // backtrack one batch one step at a time
            let mut x = saved_x;
            let mut yy = y;
            for _ in 0..128 {
                x = f(x);
                yy = f(f(yy));
                let diff = x.abs_diff(yy);
                if diff != 0 {
                    d = gcd_u64(diff, n);
                    if d != 1 && d != n {
                        return Some(d);
                    }
                }
            }
            continue;
        }
        if d != 1 && d != n {
            return Some(d);
        }
    }
    None
}

/// Complete factorization of a u64 into (prime, exponent) pairs, or the
/// surviving composite cofactor on budget exhaustion.
fn factor_u64_into(mut n: u64, budget: &FactorBudget, out: &mut Vec<(u64, u32)>) -> Option<u64> {
    if n <= 1 {
        return None;
    }
    let tz = n.trailing_zeros();
    if tz > 0 {
        out.push((2, tz));
        n >>= tz;
    }
    for &p in small_primes().iter().skip(1) {
        let p = p as u64;
        if p > budget.trial_bound {
            break;
        }
        if p * p > n {
            break;
        }
        if n % p == 0 {
            let mut e = 0;
            while n % p == 0 {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
    }
    if n == 1 {
        return None;
    }
    if n < (65_537u64 * 65_537).min(budget.trial_bound.saturating_mul(budget.trial_bound).max(1))
        || is_prime_u64(n)
    {
        // below the square of the last trial prime it must be prime
        out.push((n, 1));
        return None;
    }
    // composite beyond the trial range: split recursively with rho
    let mut stack = vec![n];
    while let Some(m) = stack.pop() {
        if is_prime_u64(m) {
            push_merge(out, m, 1);
            continue;
        }
        // perfect powers make rho stall; peel them first
        if let Some((b, k)) = perfect_power_u64(m) {
            for _ in 0..k {
                stack.push(b);
            }
            continue;
        }
        match rho_u64(m, budget) {
            Some(d) => {
                stack.push(d);
                stack.push(m / d);
            }
            None => {
                out.sort_unstable();
                return Some(m);
            }
        }
    }
    out.sort_unstable();
    // merge equal primes produced by independent splits
    let mut merged: Vec<(u64, u32)> = Vec::with_capacity(out.len());
    for &(p, e) in out.iter() {
        if let Some(last) = merged.last_mut() {
            if last.0 == p {
                last.1 += e;
                continue;
            }
        }
        merged.push((p, e));
    }
    *out = merged;
    None
}

fn push_merge(out: &mut Vec<(u64, u32)>, p: u64, e: u32) {
    if let Some(entry) = out.iter_mut().find(|(q, _)| *q == p) {
        entry.1 += e;
    } else {
        out.push((p, e));
    }
}

/// (base, k) with base^k == n and k maximal >= 2, if n is a perfect power.
fn perfect_power_u64(n: u64) -> Option<(u64, u32)> {
    for k in [2u32, 3, 5, 7] {
        let r = (n as f64).powf(1.0 / k as f64).round() as u64;
        for cand in r.saturating_sub(1)..=r + 1 {
            if cand > 1 && cand.checked_pow(k).map_or(false, |v| v == n) {
                return Some((cand, k));
            }
        }
    }
    None
}

// ---------------------------------------------------------------------------
// BigInt front end

/// Factors a nonzero integer within the given budget.
///
/// Incompleteness is data, not an error: check `complete`.
pub fn factorize(n: &BigInt, budget: &FactorBudget) -> Result<Factorization, ArithError> {
    if n.is_zero() {
        return Err(ArithError::ZeroArgument);
    }
    let sign = if n.is_negative() { -1 } else { 1 };
    let mut m = n.abs();
    if let Some(u) = m.to_u64() {
        let mut small = Vec::new();
        let cof = factor_u64_into(u, budget, &mut small);
        return Ok(Factorization {
            sign,
            factors: small.into_iter().map(|(p, e)| (BigInt::from(p), e)).collect(),
            complete: cof.is_none(),
            cofactor: cof.map(BigInt::from),
        });
    }
    // big path: strip small primes, then factor the u64/u128-sized remainder
    let mut factors: Vec<(BigInt, u32)> = Vec::new();
    for &p in small_primes() {
        let p = p as u64;
        if p > budget.trial_bound {
            break;
        }
        let pb = BigInt::from(p);
        let mut e = 0u32;
        loop {
            let (q, r) = num_integer::Integer::div_rem(&m, &pb);
            if r.is_zero() {
                m = q;
                e += 1;
            } else {
                break;
            }
        }
        if e > 0 {
            factors.push((pb, e));
        }
        if m.to_u64().is_some() {
            break;
        }
    }
    if let Some(u) = m.to_u64() {
        if u > 1 {
            let mut small = Vec::new();
            let cof = factor_u64_into(u, budget, &mut small);
            for (p, e) in small {
                merge_big(&mut factors, BigInt::from(p), e);
            }
            factors.sort();
            return Ok(Factorization {
                sign,
                factors,
                complete: cof.is_none(),
                cofactor: cof.map(BigInt::from),
            });
        }
        factors.sort();
        return Ok(Factorization {
            sign,
            factors,
            complete: true,
            cofactor: None,
        });
    }
    // the remainder exceeds u64: run the u128 lane when it fits (below
    // 2^127), otherwise bigint rho after a primality test
    let mut stack = vec![m];
    let mut cofactor: Option<BigInt> = None;
    while let Some(c) = stack.pop() {
        if let Some(u) = c.to_u64() {
            let mut small = Vec::new();
            let cof = factor_u64_into(u, budget, &mut small);
            for (p, e) in small {
                merge_big(&mut factors, BigInt::from(p), e);
            }
            if let Some(cf) = cof {
                cofactor = Some(match cofactor.take() {
                    Some(prev) => prev * BigInt::from(cf),
                    None => BigInt::from(cf),
                });
            }
            continue;
        }
        if let Some(u) = c.to_u128() {
            if u < 1 << 127 {
                let mut found = Vec::new();
                let cof = factor_rough_u128(u, budget, &mut found);
                for (p, e) in found {
                    merge_big(&mut factors, BigInt::from(p), e);
                }
                if let Some(cf) = cof {
                    cofactor = Some(match cofactor.take() {
                        Some(prev) => prev * BigInt::from(cf),
                        None => BigInt::from(cf),
                    });
                }
                continue;
            }
        }
        if is_probable_prime_big(&c) {
            merge_big(&mut factors, c, 1);
            continue;
        }
        if let Some((b, k)) = perfect_power_big(&c) {
            for _ in 0..k {
                stack.push(b.clone());
            }
            continue;
        }
        match rho_big(&c, budget) {
            Some(d) => {
                stack.push(&c / &d);
                stack.push(d);
            }
            None => {
                cofactor = Some(match cofactor.take() {
                    Some(prev) => prev * &c,
                    None => c,
                });
            }
        }
    }
    factors.sort();
    Ok(Factorization {
        sign,
        factors,
        complete: cofactor.is_none(),
        cofactor,
    })
}

fn merge_big(factors: &mut Vec<(BigInt, u32)>, p: BigInt, e: u32) {
    if let Some(entry) = factors.iter_mut().find(|(q, _)| *q == p) {
        entry.1 += e;
    } else {
        factors.push((p, e));
    }
}

/// Miller-Rabin on BigInt with a fixed base set; probabilistic beyond u64
/// but deterministic as a function.
pub fn is_probable_prime_big(n: &BigInt) -> bool {
    use num_bigint::Sign;
    if let Some(u) = n.to_u64() {
        return is_prime_u64(u);
    }
    if n.sign() != Sign::Plus {
        return false;
    }
    let two = BigInt::from(2);
    if (n % &two).is_zero() {
        return false;
    }
    let n1: BigInt = n - 1;
    let mut d = n1.clone();
    let mut s = 0u64;
    while (&d % &two).is_zero() {
        d /= &two;
        s += 1;
    }
    'witness: for a in [2u32, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41] {
        let a = BigInt::from(a);
        let mut x = a.modpow(&d, n);
        if x == BigInt::from(1) || x == n1 {
            continue;
        }
        for _ in 1..s {
            x = x.modpow(&two, n);
            if x == n1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn perfect_power_big(n: &BigInt) -> Option<(BigInt, u32)> {
    let bits = n.bits();
    for k in [2u32, 3, 5, 7, 11, 13] {
        if bits / k as u64 == 0 {
            break;
        }
        let b = n.nth_root(k);
        if b.pow(k) == *n {
            return Some((b, k));
        }
    }
    None
}

fn rho_big(n: &BigInt, budget: &FactorBudget) -> Option<BigInt> {
    let one = BigInt::from(1);
    for round in 0..budget.rho_rounds {
        let c = BigInt::from(1 + round as u64);
        let mut x = BigInt::from(2 + round as u64);
        let mut y = x.clone();
        let mut count = 0u64;
        // iteration cap shrinks for bigints; they cost far more per step
        let cap = (budget.rho_iterations >> 4).max(1 << 14);
        while count < cap {
            x = (&x * &x + &c) % n;
            y = (&y * &y + &c) % n;
            y = (&y * &y + &c) % n;
            let diff = (&x - &y).abs();
            if diff.is_zero() {
                break;
            }
            let d = num_integer::Integer::gcd(&diff, n);
            if d != one && &d != n {
                return Some(d);
            }
            count += 1;
        }
    }
    None
}

// ---------------------------------------------------------------------------
// multiplicative functions

/// Liouville lambda: (-1)^Omega(|n|), with lambda(0) = 0.
pub fn liouville(n: &BigInt, budget: &FactorBudget) -> Result<i8, ArithError> {
    if n.is_zero() {
        return Ok(0);
    }
    let f = factorize(n, budget)?;
    let omega = f.big_omega()?;
    Ok(if omega % 2 == 0 { 1 } else { -1 })
}

/// Moebius mu: 0 on non-squarefree, else (-1)^(number of prime factors).
pub fn moebius(n: &BigInt, budget: &FactorBudget) -> Result<i8, ArithError> {
    if n.is_zero() {
        return Err(ArithError::ZeroArgument);
    }
    let f = factorize(n, budget)?;
    if f.factors.iter().any(|(_, e)| *e >= 2) {
        return Ok(0);
    }
    if !f.complete {
        return Err(ArithError::FactorizationIncomplete(
            f.cofactor.unwrap_or_else(BigInt::zero),
        ));
    }
    Ok(if f.factors.len() % 2 == 0 { 1 } else { -1 })
}

/// sq(n) = prod over p with p^2 | n of p^(v_p(n) - 1); sq(0) = 0.
pub fn sq_part(n: &BigInt, budget: &FactorBudget) -> Result<BigInt, ArithError> {
    if n.is_zero() {
        return Ok(BigInt::zero());
    }
    let f = factorize(n, budget)?;
    if !f.complete {
        return Err(ArithError::FactorizationIncomplete(
            f.cofactor.unwrap_or_else(BigInt::zero),
        ));
    }
    let mut s = BigInt::from(1);
    for (p, e) in &f.factors {
        if *e >= 2 {
            s *= p.pow(*e - 1);
        }
    }
    Ok(s)
}

/// Number of ordered k-tuples of positive integers with product |n|.
pub fn tau_k(n: &BigInt, k: u32, budget: &FactorBudget) -> Result<BigInt, ArithError> {
    if n.is_zero() {
        return Err(ArithError::ZeroArgument);
    }
    if k == 0 {
        return Ok(BigInt::from(if n.abs() == BigInt::from(1) { 1 } else { 0 }));
    }
    let f = factorize(n, budget)?;
    if !f.complete {
        return Err(ArithError::FactorizationIncomplete(
            f.cofactor.unwrap_or_else(BigInt::zero),
        ));
    }
    // multiplicative: each exponent e contributes binom(e + k - 1, k - 1)
    let mut t = BigInt::from(1);
    for (_, e) in &f.factors {
        t *= binomial(*e as u64 + k as u64 - 1, k as u64 - 1);
    }
    Ok(t)
}

fn binomial(n: u64, k: u64) -> BigInt {
    let k = k.min(n - k.min(n));
    let mut num = BigInt::from(1);
    for i in 0..k {
        num = num * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    num
}

/// Kronecker symbol (a|n), the total extension of the Legendre symbol.
pub fn kronecker(a: &BigInt, n: &BigInt) -> i8 {
    use num_integer::Integer;
    if n.is_zero() {
        return if a.abs() == BigInt::from(1) { 1 } else { 0 };
    }
    let mut a = a.clone();
    let mut n = n.clone();
    let mut result: i8 = 1;
    if n.is_negative() {
        n = -n;
        if a.is_negative() {
            result = -result;
        }
    }
    // factor out twos from n
    let mut n_tz = 0u64;
    while n.is_even() {
        n /= 2;
        n_tz += 1;
    }
    if n_tz > 0 {
        if a.is_even() {
            return 0;
        }
        // (2|a) repeated: depends on a mod 8
        let a8 = ((&a % 8i32) + 8i32) % 8i32;
        let a8 = a8.to_i64().unwrap();
        if n_tz % 2 == 1 && (a8 == 3 || a8 == 5) {
            result = -result;
        }
    }
    a = a.mod_floor(&n);
    while !a.is_zero() {
        let mut a_tz = 0u64;
        while a.is_even() {
            a /= 2;
            a_tz += 1;
        }
        if a_tz % 2 == 1 {
            let n8 = (&n % 8i32).to_i64().unwrap();
            if n8 == 3 || n8 == 5 {
                result = -result;
            }
        }
        // quadratic reciprocity flip
        let a4 = (&a % 4i32).to_i64().unwrap();
        let n4 = (&n % 4i32).to_i64().unwrap();
        if a4 == 3 && n4 == 3 {
            result = -result;
        }
        std::mem::swap(&mut a, &mut n);
        a = a.mod_floor(&n);
    }
    if n == BigInt::from(1) {
        result
    } else {
        0
    }
}

/// Kronecker symbol on machine integers.
pub fn kronecker_i64(a: i64, n: i64) -> i8 {
    kronecker(&BigInt::from(a), &BigInt::from(n))
}

// ---------------------------------------------------------------------------
// machine-word conveniences used by the sweep kernels

/// lambda on i128 without touching BigInt; errors only on rho stall.
pub fn liouville_i128(n: i128, budget: &FactorBudget) -> Result<i8, ArithError> {
    if n == 0 {
        return Ok(0);
    }
    let m = n.unsigned_abs();
    if let Ok(u) = u64::try_from(m) {
        let mut fs = Vec::new();
        match factor_u64_into(u, budget, &mut fs) {
            None => {
                let omega: u64 = fs.iter().map(|(_, e)| *e as u64).sum();
                Ok(if omega % 2 == 0 { 1 } else { -1 })
            }
            Some(c) => Err(ArithError::FactorizationIncomplete(BigInt::from(c))),
        }
    } else {
        liouville(&BigInt::from(n), budget)
    }
}

/// mu on i128 without touching BigInt in the common case.
pub fn moebius_i128(n: i128, budget: &FactorBudget) -> Result<i8, ArithError> {
    if n == 0 {
        return Err(ArithError::ZeroArgument);
    }
    let m = n.unsigned_abs();
    if let Ok(u) = u64::try_from(m) {
        let mut fs = Vec::new();
        let cof = factor_u64_into(u, budget, &mut fs);
        if fs.iter().any(|(_, e)| *e >= 2) {
            return Ok(0);
        }
        match cof {
            None => Ok(if fs.len() % 2 == 0 { 1 } else { -1 }),
            Some(c) => Err(ArithError::FactorizationIncomplete(BigInt::from(c))),
        }
    } else {
        moebius(&BigInt::from(n), budget)
    }
}

/// Squarefreeness of |n| with an early exit on a repeated small prime.
pub fn is_squarefree_i128(n: i128, budget: &FactorBudget) -> Result<bool, ArithError> {
    if n == 0 {
        return Ok(false);
    }
    let m = n.unsigned_abs();
    if let Ok(mut u) = u64::try_from(m) {
        let tz = u.trailing_zeros();
        if tz >= 2 {
            return Ok(false);
        }
        u >>= tz;
        for &p in small_primes().iter().skip(1) {
            let p = p as u64;
            if p > budget.trial_bound || p * p > u {
                break;
            }
            if u % p == 0 {
                u /= p;
                if u % p == 0 {
                    return Ok(false);
                }
            }
        }
        if u == 1 || is_prime_u64(u) {
            return Ok(true);
        }
        let mut fs = Vec::new();
        match factor_u64_into(u, budget, &mut fs) {
            None => Ok(fs.iter().all(|(_, e)| *e == 1)),
            Some(c) => {
                if fs.iter().any(|(_, e)| *e >= 2) {
                    Ok(false)
                } else {
                    Err(ArithError::FactorizationIncomplete(BigInt::from(c)))
                }
            }
        }
    } else {
        let f = factorize(&BigInt::from(n), budget)?;
        f.is_squarefree()
    }
}
