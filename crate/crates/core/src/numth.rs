//! Small integer number theory used throughout the crate.

pub use num_integer::gcd;
use num_integer::Integer;

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

/// Prime factorization by trial division, as `(prime, exponent)` pairs in
/// increasing order.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            let mut e = 0;
            while n % d == 0 {
                n /= d;
                e += 1;
            }
            out.push((d, e));
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

pub fn prime_divisors(n: u64) -> Vec<u64> {
    factorize(n).into_iter().map(|(p, _)| p).collect()
}

/// Returns `(p, f)` with `q = p^f` when `q` is a prime power.
pub fn prime_power(q: u64) -> Option<(u64, u32)> {
    match factorize(q).as_slice() {
        [(p, f)] => Some((*p, *f)),
        _ => None,
    }
}

pub fn euler_phi(n: u64) -> u64 {
    factorize(n)
        .into_iter()
        .fold(n, |acc, (p, _)| acc / p * (p - 1))
}

pub fn pow_mod(base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let m128 = m as u128;
    let mut b = (base % m) as u128;
    let mut acc = 1u128;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * b % m128;
        }
        b = b * b % m128;
        exp >>= 1;
    }
    acc as u64
}

/// Inverse of `a` modulo `m`, canonical representative in `[0, m)`.
pub fn inv_mod(a: u64, m: u64) -> Option<u64> {
    let e = (a as i128 % m as i128).extended_gcd(&(m as i128));
    if e.gcd != 1 {
        return None;
    }
    Some(e.x.rem_euclid(m as i128) as u64)
}

/// Multiplicative order of `a` modulo `m`; `None` if `gcd(a, m) != 1`.
pub fn mult_order(a: u64, m: u64) -> Option<u64> {
    if m == 1 {
        return Some(1);
    }
    if a.gcd(&m) != 1 {
        return None;
    }
    let mut ord = euler_phi(m);
    for p in prime_divisors(ord) {
        while ord % p == 0 && pow_mod(a, ord / p, m) == 1 {
            ord /= p;
        }
    }
    Some(ord)
}

/// Legendre symbol `(a / p)` for an odd prime `p`, by Euler's criterion.
pub fn legendre(a: u64, p: u64) -> i8 {
    match pow_mod(a, (p - 1) / 2, p) {
        0 => 0,
        1 => 1,
        _ => -1,
    }
}

/// Primes up to and including `bound`.
pub fn primes_up_to(bound: u64) -> Vec<u64> {
    if bound < 2 {
        return Vec::new();
    }
    let n = bound as usize;
    let mut composite = vec![false; n + 1];
    let mut out = Vec::new();
    for i in 2..=n {
        if composite[i] {
            continue;
        }
        out.push(i as u64);
        let mut j = i * i;
        while j <= n {
            composite[j] = true;
            j += i;
        }
    }
    out
}

pub fn divisors(n: u64) -> Vec<u64> {
    let mut out = vec![1u64];
    for (p, e) in factorize(n) {
        let len = out.len();
        let mut pk = 1;
        for _ in 0..e {
            pk *= p;
            for i in 0..len {
                out.push(out[i] * pk);
            }
        }
    }
    out.sort_unstable();
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn orders_and_inverses() {
        assert_eq!(mult_order(2, 7), Some(3));
        assert_eq!(mult_order(2, 5), Some(4));
        assert_eq!(mult_order(4, 7), Some(3));
        assert_eq!(mult_order(3, 9), None);
        assert_eq!(inv_mod(2, 19), Some(10));
        assert_eq!(inv_mod(4, 19), Some(5));
        assert_eq!(inv_mod(3, 9), None);
    }

    #[test]
    fn factoring() {
        assert_eq!(factorize(728), vec![(2, 3), (7, 1), (13, 1)]);
        assert_eq!(prime_power(27), Some((3, 3)));
        assert_eq!(prime_power(12), None);
        assert_eq!(euler_phi(21), 12);
        assert_eq!(divisors(12), vec![1, 2, 3, 4, 6, 12]);
        assert_eq!(primes_up_to(20), vec![2, 3, 5, 7, 11, 13, 17, 19]);
    }

    #[test]
    fn legendre_matches_squares() {
        for p in [7u64, 11, 13, 31] {
            for a in 1..p {
                let square = (1..p).any(|x| x * x % p == a);
                assert_eq!(legendre(a, p), if square { 1 } else { -1 });
            }
        }
    }
}
