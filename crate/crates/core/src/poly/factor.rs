//! Factorization over Q: square-free decomposition, reduction mod a good
//! prime, Cantor-Zassenhaus, Hensel lifting, subset recombination.

use super::intpoly::IntPoly;
use super::PolyError;
use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Degree cap for the factorizer; families in practice stay well below.
pub const DEFAULT_DEGREE_BOUND: usize = 24;

/// Factors f over Q into (irreducible primitive positive-leading, mult)
/// pairs plus the integer content, so that
/// `f = content * prod f_i^(e_i)` exactly.
pub fn factor_q(f: &IntPoly) -> Result<(BigInt, Vec<(IntPoly, u32)>), PolyError> {
    factor_q_bounded(f, DEFAULT_DEGREE_BOUND)
}

pub fn factor_q_bounded(
    f: &IntPoly,
    degree_bound: usize,
) -> Result<(BigInt, Vec<(IntPoly, u32)>), PolyError> {
    if f.is_zero() {
        return Err(PolyError::ZeroPolynomial);
    }
    if f.deg() > degree_bound {
        return Err(PolyError::DegreeTooLarge {
            degree: f.deg(),
            bound: degree_bound,
        });
    }
    let content = f.signed_content();
    let mut out: Vec<(IntPoly, u32)> = Vec::new();
    for (g, mult) in f.squarefree_decomposition() {
        for irr in factor_squarefree(&g) {
            out.push((irr, mult));
        }
    }
    out.sort_by(|a, b| {
        (a.0.deg(), &a.0.coeffs, a.1).cmp(&(b.0.deg(), &b.0.coeffs, b.1))
    });
    Ok((content, out))
}

/// Factors a primitive squarefree polynomial into irreducibles.
fn factor_squarefree(f: &IntPoly) -> Vec<IntPoly> {
    let n = f.deg();
    if n == 0 {
        return Vec::new();
    }
    if n == 1 {
        return vec![f.primitive()];
    }
    // monicize: F(x) = lc^(n-1) f(x/lc) is monic with integer coefficients
    let lc = f.leading().clone();
    let monic = monicize(f);
    let factors_monic = factor_monic_squarefree(&monic);
    let mut out: Vec<IntPoly> = factors_monic
        .iter()
        .map(|g| unmonicize(g, &lc))
        .collect();
    out.sort_by(|a, b| (a.deg(), &a.coeffs).cmp(&(b.deg(), &b.coeffs)));
    out
}

fn monicize(f: &IntPoly) -> IntPoly {
    let n = f.deg();
    let lc = f.leading();
    let mut coeffs = Vec::with_capacity(n + 1);
    // coefficient of x^i in lc^(n-1) f(x/lc) is a_i lc^(n-1-i)
    for (i, a) in f.coeffs.iter().enumerate() {
        coeffs.push(a * lc.pow((n - 1 - i.min(n - 1)) as u32));
    }
    // the leading term: a_n * lc^(n-1-n) would be fractional; directly 1 * x^n
    coeffs[n] = BigInt::one();
    IntPoly::new(coeffs)
}

fn unmonicize(g: &IntPoly, lc: &BigInt) -> IntPoly {
    // g monic factor of F; g(lc*x) up to content is a factor of f
    let mut coeffs = Vec::with_capacity(g.coeffs.len());
    for (i, a) in g.coeffs.iter().enumerate() {
        coeffs.push(a * lc.pow(i as u32));
    }
    IntPoly::new(coeffs).primitive()
}

fn factor_monic_squarefree(f: &IntPoly) -> Vec<IntPoly> {
    let n = f.deg();
    debug_assert!(f.leading().is_one());
    // choose a prime keeping f squarefree mod p; among a few candidates
    // take the one with the fewest modular factors
    let mut best: Option<(u64, Vec<Vec<u64>>)> = None;
    let mut found = 0;
    for &p in crate::arith::small_primes().iter().skip(1) {
        let p = p as u64;
        let fp = reduce_mod(f, p);
        if fp.len() != n + 1 {
            continue; // p divides the leading coefficient (impossible: monic)
        }
        if !squarefree_mod(&fp, p) {
            continue;
        }
        let factors = factor_mod_p(&fp, p);
        let count = factors.len();
        if best.as_ref().map_or(true, |(_, bf)| count < bf.len()) {
            best = Some((p, factors));
        }
        found += 1;
        if found >= 4 || best.as_ref().map(|(_, bf)| bf.len()) == Some(1) {
            break;
        }
    }
    let (p, modular) = best.expect("a good prime always exists for a squarefree poly");
    if modular.len() == 1 {
        return vec![f.clone()];
    }
    // Hensel lift to p^k beyond twice the factor coefficient bound
    let bound = mignotte_bound(f);
    let target: BigInt = bound * 2 + 1;
    let mut pk = BigInt::from(p);
    let mut k = 1u32;
    while pk < target {
        pk = &pk * BigInt::from(p);
        k += 1;
    }
    let lifted = hensel_lift_tree(f, &modular, p, k);
    recombine(f, lifted, &pk)
}

// ---------------------------------------------------------------------------
// arithmetic mod small prime p (dense Vec<u64>, low degree first)

fn reduce_mod(f: &IntPoly, p: u64) -> Vec<u64> {
    let pb = BigInt::from(p);
    let mut v: Vec<u64> = f
        .coeffs
        .iter()
        .map(|c| c.mod_floor(&pb).to_u64().unwrap())
        .collect();
    trim(&mut v);
    v
}

fn trim(v: &mut Vec<u64>) {
    while v.last() == Some(&0) {
        v.pop();
    }
}

fn deg_m(v: &[u64]) -> usize {
    v.len().saturating_sub(1)
}

fn mulmod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn powmod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1u64;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = mulmod(acc, b, p);
        }
        b = mulmod(b, b, p);
        e >>= 1;
    }
    acc
}

fn inv_mod(a: u64, p: u64) -> u64 {
    powmod(a, p - 2, p)
}

fn poly_mul_mod(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + mulmod(x, y, p)) % p;
        }
    }
    trim(&mut out);
    out
}

/// Remainder of a by b mod p (b nonzero).
fn poly_rem_mod(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut r = a.to_vec();
    trim(&mut r);
    let db = deg_m(b);
    let binv = inv_mod(*b.last().unwrap(), p);
    while !r.is_empty() && deg_m(&r) >= db {
        let k = deg_m(&r) - db;
        let c = mulmod(*r.last().unwrap(), binv, p);
        for (j, &bc) in b.iter().enumerate() {
            let idx = k + j;
            let sub = mulmod(c, bc, p);
            r[idx] = (r[idx] + p - sub) % p;
        }
        trim(&mut r);
    }
    r
}

fn poly_gcd_mod(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let (mut f, mut g) = (a.to_vec(), b.to_vec());
    trim(&mut f);
    trim(&mut g);
    while !g.is_empty() {
        let r = poly_rem_mod(&f, &g, p);
        f = g;
        g = r;
    }
    // normalize monic
    if let Some(&lc) = f.last() {
        if lc != 1 {
            let inv = inv_mod(lc, p);
            for c in f.iter_mut() {
                *c = mulmod(*c, inv, p);
            }
        }
    }
    f
}

fn squarefree_mod(f: &[u64], p: u64) -> bool {
    let mut d = vec![0u64; f.len().saturating_sub(1)];
    for i in 1..f.len() {
        d[i - 1] = mulmod(f[i], (i as u64) % p, p);
    }
    trim(&mut d);
    if d.is_empty() {
        return false;
    }
    deg_m(&poly_gcd_mod(f, &d, p)) == 0
}

/// x^e mod (f, p) by square-and-multiply over the exponent bits.

fn poly_pow_mod(g: &[u64], e: &BigUint, f: &[u64], p: u64) -> Vec<u64> {
    let mut acc = vec![1u64];
    let mut base = poly_rem_mod(g, f, p);
    for i in 0..e.bits() {
        if e.bit(i) {
            acc = poly_rem_mod(&poly_mul_mod(&acc, &base, p), f, p);
        }
        base = poly_rem_mod(&poly_mul_mod(&base, &base, p), f, p);
    }
    acc
}

/// Full factorization of a monic squarefree polynomial mod p into monic
/// irreducibles: distinct-degree then equal-degree splitting.
fn factor_mod_p(f: &[u64], p: u64) -> Vec<Vec<u64>> {
    let mut out = Vec::new();
    let mut rest = f.to_vec();
    let mut d = 1usize;
    let mut h = vec![0u64, 1]; // x
    while 2 * d <= deg_m(&rest) {
        h = poly_pow_mod(&h, &BigUint::from(p), &rest, p);
        // gcd(h - x, rest)
        let mut hx = h.clone();
        if hx.len() < 2 {
            hx.resize(2, 0);
        }
        hx[1] = (hx[1] + p - 1) % p;
        let mut hv = hx;
        trim(&mut hv);
        let g = poly_gcd_mod(&hv, &rest, p);
        if deg_m(&g) > 0 {
            split_equal_degree(&g, d, p, &mut out);
            rest = poly_div_exact_mod(&rest, &g, p);
            h = poly_rem_mod(&h, &rest, p);
        }
        d += 1;
    }
    if deg_m(&rest) > 0 {
        out.push(monic_mod(rest, p));
    }
    out.sort();
    out
}

fn monic_mod(mut f: Vec<u64>, p: u64) -> Vec<u64> {
    let lc = *f.last().unwrap();
    if lc != 1 {
        let inv = inv_mod(lc, p);
        for c in f.iter_mut() {
            *c = mulmod(*c, inv, p);
        }
    }
    f
}

fn poly_div_exact_mod(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    // a = q*b exactly mod p
    let mut r = a.to_vec();
    trim(&mut r);
    let db = deg_m(b);
    let binv = inv_mod(*b.last().unwrap(), p);
    let mut q = vec![0u64; deg_m(&r) - db + 1];
    while !r.is_empty() && deg_m(&r) >= db {
        let k = deg_m(&r) - db;
        let c = mulmod(*r.last().unwrap(), binv, p);
        q[k] = c;
        for (j, &bc) in b.iter().enumerate() {
            let sub = mulmod(c, bc, p);
            r[k + j] = (r[k + j] + p - sub) % p;
        }
        trim(&mut r);
    }
    debug_assert!(r.is_empty());
    trim(&mut q);
    q
}

/// Cantor-Zassenhaus equal-degree splitting: g is a product of distinct
/// monic irreducibles all of degree d.
fn split_equal_degree(g: &[u64], d: usize, p: u64, out: &mut Vec<Vec<u64>>) {
    let g = monic_mod(g.to_vec(), p);
    if deg_m(&g) == d {
        out.push(g);
        return;
    }
    // (p^d - 1) / 2
    let e = (BigUint::from(p).pow(d as u32) - BigUint::one()) / BigUint::from(2u32);
    // deterministic pseudo-random trial polynomials
    let mut state = 0x9E3779B97F4A7C15u64 ^ (p.wrapping_mul(deg_m(&g) as u64 + 1));
    loop {
        let mut a: Vec<u64> = (0..deg_m(&g))
            .map(|_| {
                state ^= state << 13;
                state ^= state >> 7;
                state ^= state << 17;
                state % p
            })
            .collect();
        trim(&mut a);
        if a.is_empty() || deg_m(&a) == 0 {
            continue;
        }
        let mut b = poly_pow_mod(&a, &e, &g, p);
        // b - 1
        if b.is_empty() {
            b = vec![p - 1];
        } else {
            b[0] = (b[0] + p - 1) % p;
        }
        trim(&mut b);
        if b.is_empty() {
            continue;
        }
        let h = poly_gcd_mod(&b, &g, p);
        let dh = deg_m(&h);
        if dh > 0 && dh < deg_m(&g) {
            split_equal_degree(&h, d, p, out);
            split_equal_degree(&poly_div_exact_mod(&g, &h, p), d, p, out);
            return;
        }
    }
}

// ---------------------------------------------------------------------------
// Hensel lifting (BigInt moduli)

type ZPoly = Vec<BigInt>;

fn zp_from_mod(f: &[u64]) -> ZPoly {
    f.iter().map(|&c| BigInt::from(c)).collect()
}

fn zp_from_int(f: &IntPoly, m: &BigInt) -> ZPoly {
    f.coeffs.iter().map(|c| c.mod_floor(m)).collect()
}

fn zp_trim(f: &mut ZPoly) {
    while f.last().map_or(false, |c| c.is_zero()) {
        f.pop();
    }
}

fn zp_reduce(f: &mut ZPoly, m: &BigInt) {
    for c in f.iter_mut() {
        *c = c.mod_floor(m);
    }
    zp_trim(f);
}

fn zp_mul(a: &ZPoly, b: &ZPoly, m: &BigInt) -> ZPoly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    zp_reduce(&mut out, m);
    out
}

fn zp_add(a: &ZPoly, b: &ZPoly, m: &BigInt) -> ZPoly {
    let mut out = vec![BigInt::zero(); a.len().max(b.len())];
    for (i, c) in a.iter().enumerate() {
        out[i] += c;
    }
    for (i, c) in b.iter().enumerate() {
        out[i] += c;
    }
    zp_reduce(&mut out, m);
    out
}

fn zp_sub(a: &ZPoly, b: &ZPoly, m: &BigInt) -> ZPoly {
    let mut out = vec![BigInt::zero(); a.len().max(b.len())];
    for (i, c) in a.iter().enumerate() {
        out[i] += c;
    }
    for (i, c) in b.iter().enumerate() {
        out[i] -= c;
    }
    zp_reduce(&mut out, m);
    out
}

/// Division with remainder by a monic polynomial, coefficients mod m.
fn zp_divrem_monic(a: &ZPoly, b: &ZPoly, m: &BigInt) -> (ZPoly, ZPoly) {
    let mut r = a.clone();
    zp_trim(&mut r);
    let db = b.len() - 1;
    debug_assert!(b.last().map_or(false, |c| c.is_one()));
    if r.len() <= db {
        return (Vec::new(), r);
    }
    let mut q = vec![BigInt::zero(); r.len() - db];
    while r.len() > db {
        let k = r.len() - 1 - db;
        let c = r.last().unwrap().clone();
        q[k] = c.clone();
        for (j, bc) in b.iter().enumerate() {
            let idx = k + j;
            let v = (&r[idx] - &c * bc).mod_floor(m);
            r[idx] = v;
        }
        zp_trim(&mut r);
        if r.len() <= db {
            break;
        }
    }
    zp_trim(&mut q);
    (q, r)
}

/// One quadratic Hensel step: from modulus m to m^2 (clamped use by caller).
/// Inputs satisfy F = g*h (mod m), s*g + t*h = 1 (mod m), g, h monic.
#[allow(clippy::too_many_arguments)]
fn hensel_step(
    fpoly: &ZPoly,
    g: &ZPoly,
    h: &ZPoly,
    s: &ZPoly,
    t: &ZPoly,
    m2: &BigInt,
) -> (ZPoly, ZPoly, ZPoly, ZPoly) {
    // e = F - g h mod m^2
    let e = zp_sub(fpoly, &zp_mul(g, h, m2), m2);
    let (q, r) = zp_divrem_monic(&zp_mul(s, &e, m2), h, m2);
    // g' = g + t e + q g ; h' = h + r
    let g1 = zp_add(&zp_add(g, &zp_mul(t, &e, m2), m2), &zp_mul(&q, g, m2), m2);
    let h1 = zp_add(h, &r, m2);
    // lift the Bezout pair
    let b = zp_sub(&zp_add(&zp_mul(s, &g1, m2), &zp_mul(t, &h1, m2), m2), &[BigInt::one()].to_vec(), m2);
    let (c, d) = zp_divrem_monic(&zp_mul(s, &b, m2), &h1, m2);
    let s1 = zp_sub(s, &d, m2);
    let t1 = zp_sub(&zp_sub(t, &zp_mul(t, &b, m2), m2), &zp_mul(&c, &g1, m2), m2);
    (g1, h1, s1, t1)
}

/// Extended Euclid mod p for the initial Bezout pair: s*g + t*h = 1.
fn bezout_mod_p(g: &[u64], h: &[u64], p: u64) -> (ZPoly, ZPoly) {
    // classic extended euclid over F_p
    let (mut r0, mut r1) = (g.to_vec(), h.to_vec());
    let (mut s0, mut s1) = (vec![1u64], Vec::<u64>::new());
    let (mut t0, mut t1) = (Vec::<u64>::new(), vec![1u64]);
    while !r1.is_empty() {
        // q, rem of r0 / r1
        let mut rem = r0.clone();
        trim(&mut rem);
        let db = deg_m(&r1);
        let binv = inv_mod(*r1.last().unwrap(), p);
        let qlen = if rem.len() >= r1.len() {
            rem.len() - r1.len() + 1
        } else {
            0
        };
        let mut q = vec![0u64; qlen.max(1)];
        while !rem.is_empty() && deg_m(&rem) >= db {
            let k = deg_m(&rem) - db;
            let c = mulmod(*rem.last().unwrap(), binv, p);
            q[k] = c;
            for (j, &bc) in r1.iter().enumerate() {
                let sub = mulmod(c, bc, p);
                rem[k + j] = (rem[k + j] + p - sub) % p;
            }
            trim(&mut rem);
        }
        trim(&mut q);
        let new_s = sub_mod_vec(&s0, &poly_mul_mod(&q, &s1, p), p);
        let new_t = sub_mod_vec(&t0, &poly_mul_mod(&q, &t1, p), p);
        r0 = r1;
        r1 = rem;
        s0 = s1;
        s1 = new_s;
        t0 = t1;
        t1 = new_t;
    }
    // r0 is the gcd; scale to make it 1 (coprime inputs)
    debug_assert_eq!(deg_m(&r0), 0);
    let inv = inv_mod(r0[0], p);
    let s: Vec<u64> = s0.iter().map(|&c| mulmod(c, inv, p)).collect();
    let t: Vec<u64> = t0.iter().map(|&c| mulmod(c, inv, p)).collect();
    (zp_from_mod(&s), zp_from_mod(&t))
}

fn sub_mod_vec(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut out = vec![0u64; a.len().max(b.len())];
    for (i, &c) in a.iter().enumerate() {
        out[i] = c;
    }
    for (i, &c) in b.iter().enumerate() {
        out[i] = (out[i] + p - c) % p;
    }
    trim(&mut out);
    out
}

/// Lifts the monic modular factors of monic F from p to p^k via a factor
/// tree of pairwise quadratic lifts.
fn hensel_lift_tree(f: &IntPoly, modular: &[Vec<u64>], p: u64, k: u32) -> Vec<ZPoly> {
    let target = BigInt::from(p).pow(k);
    if modular.len() == 1 {
        return vec![zp_from_int(f, &target)];
    }
    let mid = modular.len() / 2;
    let (left, right) = modular.split_at(mid);
    let g0 = left
        .iter()
        .fold(vec![1u64], |acc, m| poly_mul_mod(&acc, m, p));
    let h0 = right
        .iter()
        .fold(vec![1u64], |acc, m| poly_mul_mod(&acc, m, p));
    let (mut s, mut t) = bezout_mod_p(&g0, &h0, p);
    let mut g = zp_from_mod(&g0);
    let mut h = zp_from_mod(&h0);
    let fz = zp_from_int(f, &target);
    let mut m = BigInt::from(p);
    while m < target {
        m = (&m * &m).min(target.clone());
        let (g1, h1, s1, t1) = hensel_step(&fz, &g, &h, &s, &t, &m);
        g = g1;
        h = h1;
        s = s1;
        t = t1;
    }
    // recurse: g and h are monic lifts of the half-products
    let gi = intpoly_from_sym(&g, &target);
    let hi = intpoly_from_sym(&h, &target);
    let mut out = hensel_lift_tree(&gi, left, p, k);
    out.extend(hensel_lift_tree(&hi, right, p, k));
    out
}

/// Symmetric representative lift: coefficients into (-m/2, m/2].
fn intpoly_from_sym(f: &ZPoly, m: &BigInt) -> IntPoly {
    let half = m / 2;
    IntPoly::new(
        f.iter()
            .map(|c| {
                let c = c.mod_floor(m);
                if c > half {
                    c - m
                } else {
                    c
                }
            })
            .collect(),
    )
}

// ---------------------------------------------------------------------------
// recombination

fn mignotte_bound(f: &IntPoly) -> BigInt {
    let n = f.deg() as u32;
    let height: BigInt = f
        .coeffs
        .iter()
        .map(|c| c.abs())
        .max()
        .unwrap_or_else(BigInt::zero);
    // 2^n * sqrt(n+1) * H(f); sqrt padded up to n+1
    (BigInt::one() << n) * BigInt::from(f.deg() as u64 + 1) * height
}

/// Searches subsets of the lifted modular factors for true divisors of F.
fn recombine(f: &IntPoly, lifted: Vec<ZPoly>, pk: &BigInt) -> Vec<IntPoly> {
    let mut remaining = f.clone();
    let mut pool: Vec<ZPoly> = lifted;
    let mut found = Vec::new();
    let mut size = 1usize;
    'outer: while 2 * size <= pool.len() {
        let indices: Vec<usize> = (0..pool.len()).collect();
        for combo in combinations(&indices, size) {
            let mut prod: ZPoly = vec![BigInt::one()];
            for &i in &combo {
                prod = zp_mul(&prod, &pool[i], pk);
            }
            let cand = intpoly_from_sym(&prod, pk);
            if cand.is_zero() {
                continue;
            }
            // quick filter on constant terms before the full division
            let c0 = cand.coeff(0);
            let f0 = remaining.coeff(0);
            if !c0.is_zero() && !f0.is_zero() && !(&f0 % &c0).is_zero() {
                continue;
            }
            if let Some(q) = remaining.div_exact(&cand) {
                found.push(cand.primitive());
                remaining = q;
                let keep: Vec<ZPoly> = pool
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| !combo.contains(i))
                    .map(|(_, v)| v.clone())
                    .collect();
                pool = keep;
                continue 'outer;
            }
        }
        size += 1;
    }
    if remaining.deg() > 0 {
        found.push(remaining.primitive());
    }
    found
}

fn combinations(items: &[usize], k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut combo: Vec<usize> = (0..k).collect();
    if k > items.len() {
        return out;
    }
    loop {
        out.push(combo.iter().map(|&i| items[i]).collect());
        // advance
        let mut i = k;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if combo[i] != i + items.len() - k {
                break;
            }
            if i == 0 {
                return out;
            }
        }
        combo[i] += 1;
        for j in i + 1..k {
            combo[j] = combo[j - 1] + 1;
        }
    }
}
