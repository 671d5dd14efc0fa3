//! Dense polynomials over a prime field, coefficients in ascending order.
//!
//! Everything here works on plain `u64` slices reduced into `[0, p)`; the
//! table-backed fields use these routines only while they are being built.

use crate::numth::{pow_mod, prime_divisors};

fn trim(mut v: Vec<u64>) -> Vec<u64> {
    while v.len() > 1 && *v.last().unwrap() == 0 {
        v.pop();
    }
    v
}

pub(crate) fn degree(a: &[u64]) -> Option<usize> {
    a.iter().rposition(|&c| c != 0)
}

pub(crate) fn add(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let n = a.len().max(b.len());
    let out = (0..n)
        .map(|i| (a.get(i).copied().unwrap_or(0) + b.get(i).copied().unwrap_or(0)) % p)
        .collect();
    trim(out)
}

pub(crate) fn sub(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let n = a.len().max(b.len());
    let out = (0..n)
        .map(|i| {
            let x = a.get(i).copied().unwrap_or(0);
            let y = b.get(i).copied().unwrap_or(0);
            (x + p - y) % p
        })
        .collect();
    trim(out)
}

pub(crate) fn mul(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return vec![0];
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + x * y) % p;
        }
    }
    trim(out)
}

/// Remainder of `a` modulo the monic-or-not nonzero `m`.
pub(crate) fn rem(a: &[u64], m: &[u64], p: u64) -> Vec<u64> {
    let dm = degree(m).expect("division by zero polynomial");
    let lead_inv = pow_mod(m[dm], p - 2, p);
    let mut r: Vec<u64> = a.to_vec();
    while let Some(dr) = degree(&r) {
        if dr < dm {
            break;
        }
        let c = r[dr] * lead_inv % p;
        let shift = dr - dm;
        for (j, &mj) in m.iter().enumerate().take(dm + 1) {
            r[shift + j] = (r[shift + j] + p - c * mj % p) % p;
        }
    }
    trim(r)
}

pub(crate) fn mul_mod(a: &[u64], b: &[u64], m: &[u64], p: u64) -> Vec<u64> {
    rem(&mul(a, b, p), m, p)
}

pub(crate) fn pow_mod_poly(base: &[u64], mut exp: u128, m: &[u64], p: u64) -> Vec<u64> {
    let mut acc = vec![1u64];
    let mut b = rem(base, m, p);
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(&acc, &b, m, p);
        }
        b = mul_mod(&b, &b, m, p);
        exp >>= 1;
    }
    acc
}

pub(crate) fn gcd(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut x = trim(a.to_vec());
    let mut y = trim(b.to_vec());
    while degree(&y).is_some() {
        let r = rem(&x, &y, p);
        x = y;
        y = r;
    }
    x
}

/// `x^(p^k) mod m` by repeated Frobenius.
fn frobenius_power(m: &[u64], k: usize, p: u64) -> Vec<u64> {
    let mut x = vec![0, 1];
    for _ in 0..k {
        x = pow_mod_poly(&x, p as u128, m, p);
    }
    x
}

/// Rabin's irreducibility test for a monic polynomial of degree `n`.
pub(crate) fn is_irreducible(m: &[u64], p: u64) -> bool {
    let n = match degree(m) {
        Some(0) | None => return false,
        Some(n) => n,
    };
    if m[0] == 0 {
        return n == 1;
    }
    let x = vec![0u64, 1];
    if frobenius_power(m, n, p) != rem(&x, m, p) {
        return false;
    }
    prime_divisors(n as u64).into_iter().all(|r| {
        let xr = frobenius_power(m, n / r as usize, p);
        let g = gcd(&sub(&xr, &x, p), m, p);
        degree(&g) == Some(0)
    })
}

/// The monic irreducible polynomial of degree `n` whose lower coefficients
/// `(c_0, .., c_{n-1})`, read as the base-`p` integer `sum c_i p^i`, are least.
pub(crate) fn least_irreducible(n: usize, p: u64) -> Vec<u64> {
    let mut lower = vec![0u64; n];
    loop {
        let mut cand = lower.clone();
        cand.push(1);
        if is_irreducible(&cand, p) {
            return cand;
        }
        // increment the base-p counter
        for c in lower.iter_mut() {
            *c += 1;
            if *c < p {
                break;
            }
            *c = 0;
        }
    }
}

pub(crate) fn to_code(coords: &[u64], p: u64) -> u64 {
    coords.iter().rev().fold(0, |acc, &c| acc * p + c)
}

pub(crate) fn from_code(mut code: u64, n: usize, p: u64) -> Vec<u64> {
    let mut out = vec![0u64; n];
    for c in out.iter_mut() {
        *c = code % p;
        code /= p;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn irreducibility_small() {
        // x^2 + 1 is irreducible mod 3 and 7, reducible mod 5
        assert!(is_irreducible(&[1, 0, 1], 3));
        assert!(is_irreducible(&[1, 0, 1], 7));
        assert!(!is_irreducible(&[1, 0, 1], 5));
        // x^3 + 2x + 1 over F_3
        assert!(is_irreducible(&[1, 2, 0, 1], 3));
        assert!(!is_irreducible(&[0, 1, 0, 1], 3));
    }

    #[test]
    fn least_irreducible_brute_force() {
        // against a root-search oracle for cubics
        for p in [3u64, 5, 7, 11] {
            let m = least_irreducible(3, p);
            assert_eq!(m.len(), 4);
            let has_root =
                |c: &[u64]| (0..p).any(|x| (c[0] + c[1] * x + c[2] * x * x + x * x * x) % p == 0);
            assert!(!has_root(&m));
            let code = to_code(&m[..3], p);
            for smaller in 0..code {
                let c = from_code(smaller, 3, p);
                assert!(has_root(&c), "p={p}: {c:?} should be reducible");
            }
        }
    }

    #[test]
    fn code_roundtrip() {
        let c = from_code(12345, 9, 3);
        assert_eq!(to_code(&c, 3), 12345);
    }
}
