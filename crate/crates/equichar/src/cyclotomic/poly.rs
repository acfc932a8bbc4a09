//! Polynomial helpers used only for building and reducing modulo the
//! cyclotomic polynomial Phi_N.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

pub type Rat = BigRational;

/// Dense integer polynomial, ascending powers, no trailing zeros.
fn trim(mut p: Vec<BigInt>) -> Vec<BigInt> {
    while p.last().map_or(false, |c| c.is_zero()) {
        p.pop();
    }
    p
}

fn mul_int(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, ai) in a.iter().enumerate() {
        if ai.is_zero() {
            continue;
        }
        for (j, bj) in b.iter().enumerate() {
            out[i + j] += ai * bj;
        }
    }
    trim(out)
}

/// Exact division of integer polynomials; panics if not exact (the Mobius
/// product for Phi_N always divides exactly).
fn div_exact_int(num: &[BigInt], den: &[BigInt]) -> Vec<BigInt> {
    let mut rem = num.to_vec();
    let dl = den.len();
    assert!(dl >= 1 && den[dl - 1].is_one(), "divisor must be monic");
    if rem.len() < dl {
        assert!(trim(rem).is_empty());
        return Vec::new();
    }
    let mut quot = vec![BigInt::zero(); rem.len() - dl + 1];
    for k in (0..quot.len()).rev() {
        let c = rem[k + dl - 1].clone();
        if c.is_zero() {
            continue;
        }
        quot[k] = c.clone();
        for (j, dj) in den.iter().enumerate() {
            rem[k + j] -= &c * dj;
        }
    }
    assert!(trim(rem).is_empty(), "non-exact polynomial division");
    trim(quot)
}

fn x_pow_minus_one(d: u64) -> Vec<BigInt> {
    let mut p = vec![BigInt::zero(); d as usize + 1];
    p[0] = -BigInt::one();
    p[d as usize] = BigInt::one();
    p
}

fn mobius(mut n: u64) -> i64 {
    let mut mu = 1i64;
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            n /= p;
            if n % p == 0 {
                return 0;
            }
            mu = -mu;
        }
        p += 1;
    }
    if n > 1 {
        mu = -mu;
    }
    mu
}

/// Phi_N by Mobius inversion: prod_{d|N} (x^d - 1)^{mu(N/d)}.
fn cyclotomic_poly(n: u64) -> Vec<BigInt> {
    assert!(n >= 1);
    let mut num = vec![BigInt::one()];
    let mut den = vec![BigInt::one()];
    for d in 1..=n {
        if n % d != 0 {
            continue;
        }
        match mobius(n / d) {
            1 => num = mul_int(&num, &x_pow_minus_one(d)),
            -1 => den = mul_int(&den, &x_pow_minus_one(d)),
            _ => {}
        }
    }
    div_exact_int(&num, &den)
}

/// Cached Phi_N as rational coefficients, ascending, length phi(N)+1, monic.
pub fn minimal_polynomial(n: u64) -> Vec<Rat> {
    static CACHE: OnceLock<Mutex<HashMap<u64, Vec<BigInt>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    let ints = {
        let mut guard = cache.lock().unwrap();
        guard.entry(n).or_insert_with(|| cyclotomic_poly(n)).clone()
    };
    ints.into_iter().map(Rat::from_integer).collect()
}

/// Remainder of `p` (ascending coefficients) modulo the monic `m`,
/// trimmed of trailing zeros.
pub fn rem_monic(p: &[Rat], m: &[Rat]) -> Vec<Rat> {
    let deg_m = m.len() - 1;
    let mut rem: Vec<Rat> = p.to_vec();
    while rem.len() > deg_m {
        let lead = rem.pop().unwrap();
        if !lead.is_zero() {
            let k = rem.len() - deg_m;
            for j in 0..deg_m {
                let t = &lead * &m[j];
                rem[k + j] -= t;
            }
        }
    }
    while rem.last().map_or(false, |c| c.is_zero()) {
        rem.pop();
    }
    rem
}

/// Extended gcd in Q[x] against a monic modulus: returns u with
/// u * a = 1 (mod m) when gcd(a, m) = 1. Returns None for a = 0 mod m.
pub fn invert_mod(a: &[Rat], m: &[Rat]) -> Option<Vec<Rat>> {
    // standard extended Euclid over the field Q
    let mut r0: Vec<Rat> = m.to_vec();
    let mut r1: Vec<Rat> = rem_monic(a, m);
    if r1.is_empty() {
        return None;
    }
    let mut s0: Vec<Rat> = Vec::new(); // coefficient of `a` for r0
    let mut s1: Vec<Rat> = vec![Rat::one()];
    while !r1.is_empty() {
        let (q, r) = div_rem(&r0, &r1);
        let s = sub(&s0, &mul(&q, &s1));
        r0 = r1;
        r1 = r;
        s0 = s1;
        s1 = s;
    }
    // r0 is the gcd; it must be a nonzero constant since Phi_N is irreducible
    if r0.len() != 1 {
        return None;
    }
    let inv = Rat::one() / r0[0].clone();
    Some(rem_monic(&s0.iter().map(|c| c * &inv).collect::<Vec<_>>(), m))
}

fn div_rem(a: &[Rat], b: &[Rat]) -> (Vec<Rat>, Vec<Rat>) {
    let mut rem = a.to_vec();
    let db = b.len() - 1;
    let lead_inv = Rat::one() / b[db].clone();
    let mut quot = vec![Rat::zero(); a.len().saturating_sub(db)];
    while rem.len() > db {
        let k = rem.len() - 1 - db;
        let c = rem.last().unwrap() * &lead_inv;
        quot[k] = c.clone();
        for j in 0..=db {
            let t = &c * &b[j];
            rem[k + j] -= t;
        }
        while rem.last().map_or(false, |c| c.is_zero()) {
            rem.pop();
        }
    }
    while quot.last().map_or(false, |c| c.is_zero()) {
        quot.pop();
    }
    (quot, rem)
}

fn mul(a: &[Rat], b: &[Rat]) -> Vec<Rat> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![Rat::zero(); a.len() + b.len() - 1];
    for (i, ai) in a.iter().enumerate() {
        for (j, bj) in b.iter().enumerate() {
            out[i + j] += ai * bj;
        }
    }
    out
}

fn sub(a: &[Rat], b: &[Rat]) -> Vec<Rat> {
    let mut out = a.to_vec();
    if out.len() < b.len() {
        out.resize(b.len(), Rat::zero());
    }
    for (i, bi) in b.iter().enumerate() {
        out[i] -= bi;
    }
    while out.last().map_or(false, |c| c.is_zero()) {
        out.pop();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn int_poly(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&c| BigInt::from(c)).collect()
    }

    #[test]
    fn cyclotomic_polys() {
        assert_eq!(cyclotomic_poly(1), int_poly(&[-1, 1]));
        assert_eq!(cyclotomic_poly(2), int_poly(&[1, 1]));
        assert_eq!(cyclotomic_poly(4), int_poly(&[1, 0, 1]));
        assert_eq!(cyclotomic_poly(5), int_poly(&[1, 1, 1, 1, 1]));
        assert_eq!(cyclotomic_poly(12), int_poly(&[1, 0, -1, 0, 1]));
    }
}
