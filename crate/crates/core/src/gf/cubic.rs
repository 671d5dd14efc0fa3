use super::poly;
use super::Subfield;
use crate::error::{Error, Result};
use crate::numth::{is_prime, prime_divisors};

/// An element of `F_{q^3}` in coordinate form: the base-`p` code of its
/// coefficient vector in the power basis of the defining polynomial.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Elem(pub(crate) u32);

impl Elem {
    pub const ZERO: Elem = Elem(0);
    pub const ONE: Elem = Elem(1);

    pub fn code(self) -> u32 {
        self.0
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

const NO_LOG: u32 = u32::MAX;

/// `F_{q^3}` for `q = p^f`, realized as `F_p[x]/(R)` with `R` the least monic
/// irreducible of degree `3f` and `omega` the least primitive element, both in
/// coordinate-code order. Exponent, logarithm and absolute-trace tables are
/// dense and built once.
#[derive(Debug)]
pub struct CubicField {
    p: u64,
    f: u32,
    q: u64,
    size: u64,
    modulus: Vec<u64>,
    omega: Vec<u64>,
    exp: Vec<u32>,
    log: Vec<u32>,
    trace_by_log: Vec<u32>,
}

pub(crate) fn check_characteristic(p: u64) -> Result<()> {
    if p == 2 {
        return Err(Error::OddPrimeRequired(p));
    }
    if !is_prime(p) {
        return Err(Error::CompositeModulus(p));
    }
    Ok(())
}

impl CubicField {
    /// Default bound on `q^3`: the dense tables then take at most ~1.5 GiB.
    pub const DEFAULT_LIMIT: u64 = 1 << 27;

    pub fn new(p: u64, f: u32, size_limit: u64) -> Result<Self> {
        check_characteristic(p)?;
        if f == 0 {
            return Err(Error::BadParameters(
                "extension degree must be positive".into(),
            ));
        }
        let size = (p as u128).pow(3 * f);
        if size > size_limit as u128 || size > u32::MAX as u128 {
            return Err(Error::TooLarge {
                size,
                limit: size_limit as u128,
            });
        }
        let size = size as u64;
        let q = p.pow(f);
        let n = 3 * f as usize;
        let modulus = poly::least_irreducible(n, p);
        let group = size - 1;
        let factors = prime_divisors(group);
        let omega = (1..size)
            .map(|c| poly::from_code(c, n, p))
            .find(|cand| {
                factors
                    .iter()
                    .all(|&l| poly::pow_mod_poly(cand, (group / l) as u128, &modulus, p) != [1])
            })
            .expect("a finite field has a primitive element");

        // absolute traces of the power basis
        let basis_trace: Vec<u64> = (0..n)
            .map(|i| {
                let mut xi = vec![0u64; i + 1];
                xi[i] = 1;
                let mut t = poly::rem(&xi, &modulus, p);
                let mut acc = vec![0u64];
                for _ in 0..n {
                    acc = poly::add(&acc, &t, p);
                    t = poly::pow_mod_poly(&t, p as u128, &modulus, p);
                }
                debug_assert!(poly::degree(&acc).unwrap_or(0) == 0);
                acc[0]
            })
            .collect();

        let mut exp = vec![0u32; group as usize];
        let mut log = vec![NO_LOG; size as usize];
        let mut trace_by_log = vec![0u32; group as usize];
        let mut cur = vec![0u64; n];
        cur[0] = 1;
        let mut scratch = vec![0u64; 2 * n];
        let mut omega_full = omega.clone();
        omega_full.resize(n, 0);
        for k in 0..group as usize {
            let code = poly::to_code(&cur, p) as u32;
            exp[k] = code;
            log[code as usize] = k as u32;
            trace_by_log[k] = (cur
                .iter()
                .zip(&basis_trace)
                .map(|(a, b)| a * b)
                .sum::<u64>()
                % p) as u32;
            mul_in_place(&mut cur, &omega_full, &modulus, p, &mut scratch);
        }
        debug_assert_eq!(cur[0], 1);

        Ok(Self {
            p,
            f,
            q,
            size,
            modulus,
            omega,
            exp,
            log,
            trace_by_log,
        })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn f(&self) -> u32 {
        self.f
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    /// `q^3`.
    pub fn size(&self) -> u64 {
        self.size
    }

    /// `q^3 - 1`.
    pub fn group_order(&self) -> u64 {
        self.size - 1
    }

    /// `q^2 + q + 1`, the number of points of `PG(2, q)`.
    pub fn singer_order(&self) -> u64 {
        self.q * self.q + self.q + 1
    }

    pub fn modulus(&self) -> &[u64] {
        &self.modulus
    }

    pub fn omega_coords(&self) -> &[u64] {
        &self.omega
    }

    pub fn degree(&self) -> usize {
        3 * self.f as usize
    }

    pub fn from_int(&self, c: i64) -> Elem {
        Elem(c.rem_euclid(self.p as i64) as u32)
    }

    pub fn from_coords(&self, coords: &[u64]) -> Elem {
        Elem(poly::to_code(coords, self.p) as u32)
    }

    pub fn coords(&self, x: Elem) -> Vec<u64> {
        poly::from_code(x.0 as u64, self.degree(), self.p)
    }

    pub fn element(&self, code: u32) -> Option<Elem> {
        (u64::from(code) < self.size).then_some(Elem(code))
    }

    pub fn omega(&self) -> Elem {
        Elem(self.exp[1])
    }

    /// `omega^k`, with `k` read modulo `q^3 - 1`.
    pub fn exp(&self, k: u64) -> Elem {
        Elem(self.exp[(k % self.group_order()) as usize])
    }

    pub fn exp_signed(&self, k: i64) -> Elem {
        self.exp(k.rem_euclid(self.group_order() as i64) as u64)
    }

    /// Discrete logarithm to the base `omega`, in `[0, q^3 - 2]`.
    pub fn log(&self, x: Elem) -> Result<u64> {
        match self.log[x.0 as usize] {
            NO_LOG => Err(Error::ZeroElement),
            k => Ok(k as u64),
        }
    }

    pub fn add(&self, a: Elem, b: Elem) -> Elem {
        let (mut x, mut y) = (a.0 as u64, b.0 as u64);
        let mut out = 0u64;
        let mut place = 1u64;
        while x > 0 || y > 0 {
            let d = (x % self.p + y % self.p) % self.p;
            out += d * place;
            place *= self.p;
            x /= self.p;
            y /= self.p;
        }
        Elem(out as u32)
    }

    pub fn neg(&self, a: Elem) -> Elem {
        let mut x = a.0 as u64;
        let mut out = 0u64;
        let mut place = 1u64;
        while x > 0 {
            let d = (self.p - x % self.p) % self.p;
            out += d * place;
            place *= self.p;
            x /= self.p;
        }
        Elem(out as u32)
    }

    pub fn sub(&self, a: Elem, b: Elem) -> Elem {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        if a.is_zero() || b.is_zero() {
            return Elem::ZERO;
        }
        let k = self.log[a.0 as usize] as u64 + self.log[b.0 as usize] as u64;
        self.exp(k)
    }

    pub fn pow(&self, a: Elem, e: u64) -> Elem {
        if a.is_zero() {
            return if e == 0 { Elem::ONE } else { Elem::ZERO };
        }
        let k = self.log[a.0 as usize] as u128 * e as u128 % self.group_order() as u128;
        self.exp(k as u64)
    }

    pub fn inv(&self, a: Elem) -> Result<Elem> {
        let k = self.log(a)?;
        Ok(self.exp(self.group_order() - k))
    }

    /// Table-free exponentiation in `F_p[x]/(R)`, for cross-checks.
    pub fn pow_slow(&self, a: Elem, e: u128) -> Elem {
        let c = poly::pow_mod_poly(&self.coords(a), e, &self.modulus, self.p);
        self.from_coords(&c)
    }

    /// Table-free product, for cross-checks.
    pub fn mul_slow(&self, a: Elem, b: Elem) -> Elem {
        let c = poly::mul_mod(&self.coords(a), &self.coords(b), &self.modulus, self.p);
        self.from_coords(&c)
    }

    /// Absolute trace `Tr_{q^3/p}` as an integer in `[0, p)`.
    pub fn trace_p(&self, x: Elem) -> u64 {
        match self.log[x.0 as usize] {
            NO_LOG => 0,
            k => self.trace_by_log[k as usize] as u64,
        }
    }

    /// `Tr_{q^3/p}(omega^k)`.
    pub fn trace_p_of_power(&self, k: u64) -> u64 {
        self.trace_by_log[(k % self.group_order()) as usize] as u64
    }

    pub(crate) fn trace_table(&self) -> &[u32] {
        &self.trace_by_log
    }

    /// Relative trace `Tr_{q^3/q}(x) = x + x^q + x^{q^2}`.
    pub fn trace_q(&self, x: Elem) -> Elem {
        if x.is_zero() {
            return Elem::ZERO;
        }
        let x1 = self.pow(x, self.q);
        let x2 = self.pow(x1, self.q);
        self.add(self.add(x, x1), x2)
    }

    pub fn trace(&self, x: Elem, to: Subfield) -> Elem {
        match to {
            Subfield::Fp => Elem(self.trace_p(x) as u32),
            Subfield::Fq => self.trace_q(x),
            Subfield::Fq3 => x,
        }
    }

    /// Quadratic character: `0` at zero, else `(-1)^log(x)`.
    pub fn eta(&self, x: Elem) -> i8 {
        match self.log[x.0 as usize] {
            NO_LOG => 0,
            k if k % 2 == 0 => 1,
            _ => -1,
        }
    }

    /// Whether `x` lies in the subfield `F_q`.
    pub fn in_base_field(&self, x: Elem) -> bool {
        match self.log[x.0 as usize] {
            NO_LOG => true,
            k => k as u64 % self.singer_order() == 0,
        }
    }

    /// `omega^k` for every `k` in `[0, q^3 - 1)`, in exponent order.
    pub fn powers(&self) -> impl Iterator<Item = Elem> + '_ {
        self.exp.iter().map(|&c| Elem(c))
    }
}

/// `cur <- cur * w mod modulus` with fixed-width buffers.
fn mul_in_place(cur: &mut [u64], w: &[u64], modulus: &[u64], p: u64, scratch: &mut [u64]) {
    let n = cur.len();
    scratch.iter_mut().for_each(|s| *s = 0);
    for i in 0..n {
        if cur[i] == 0 {
            continue;
        }
        for j in 0..n {
            scratch[i + j] = (scratch[i + j] + cur[i] * w[j]) % p;
        }
    }
    // modulus is monic of degree n
    for d in (n..2 * n - 1).rev() {
        let c = scratch[d];
        if c == 0 {
            continue;
        }
        scratch[d] = 0;
        for j in 0..n {
            let idx = d - n + j;
            scratch[idx] = (scratch[idx] + p - c * modulus[j] % p) % p;
        }
    }
    cur.copy_from_slice(&scratch[..n]);
}

#[cfg(test)]
mod tests {
    use super::*;

    fn field(p: u64) -> CubicField {
        CubicField::new(p, 1, CubicField::DEFAULT_LIMIT).unwrap()
    }

    #[test]
    fn rejects_bad_characteristic() {
        assert_eq!(
            CubicField::new(2, 1, 1 << 20).unwrap_err(),
            Error::OddPrimeRequired(2)
        );
        assert_eq!(
            CubicField::new(9, 1, 1 << 20).unwrap_err(),
            Error::CompositeModulus(9)
        );
        assert!(matches!(
            CubicField::new(103, 1, 1 << 20),
            Err(Error::TooLarge { .. })
        ));
    }

    #[test]
    fn tables_agree_with_polynomial_arithmetic() {
        let k = field(7);
        let w = k.omega();
        for e in [0u64, 1, 5, 100, 341] {
            assert_eq!(k.exp(e), k.pow_slow(w, e as u128));
        }
        let a = k.exp(17);
        let b = k.exp(200);
        assert_eq!(k.mul(a, b), k.mul_slow(a, b));
        assert_eq!(k.log(k.exp(123)).unwrap(), 123);
        assert_eq!(k.log(Elem::ZERO), Err(Error::ZeroElement));
    }

    #[test]
    fn omega_is_primitive_and_base_field_generated() {
        for (p, f) in [(3u64, 1u32), (7, 1), (3, 2)] {
            let k = CubicField::new(p, f, CubicField::DEFAULT_LIMIT).unwrap();
            let n = k.group_order();
            let ord = (1..=n)
                .find(|&e| k.pow_slow(k.omega(), e as u128) == Elem::ONE)
                .unwrap();
            assert_eq!(ord, n);
            let g = k.exp(k.singer_order());
            assert!(k.in_base_field(g));
            // g generates F_q^*: its powers give q - 1 distinct elements
            let mut seen = std::collections::HashSet::new();
            for e in 0..k.q() - 1 {
                seen.insert(k.pow(g, e));
            }
            assert_eq!(seen.len() as u64, k.q() - 1);
        }
    }

    #[test]
    fn traces() {
        let k = field(7);
        assert_eq!(k.trace_q(Elem::ZERO), Elem::ZERO);
        assert_eq!(k.trace_q(Elem::ONE), k.from_int(3));
        assert_eq!(k.trace_p(Elem::ONE), 3);
        // omega + omega^7 + omega^49 by explicit powers
        let w = k.omega();
        let direct = k.add(k.add(w, k.pow_slow(w, 7)), k.pow_slow(w, 49));
        assert_eq!(k.trace_q(w), direct);
        assert!(k.in_base_field(direct));
        // q = p so Tr_{q^3/p} = Tr_{q^3/q}
        for e in 0..50 {
            let x = k.exp(e);
            assert_eq!(k.trace_p(x), k.trace_q(x).code() as u64);
        }
    }

    #[test]
    fn trace_over_fq_composes_for_prime_powers() {
        let k = CubicField::new(3, 2, CubicField::DEFAULT_LIMIT).unwrap();
        // Tr_{q^3/p} = Tr_{q/p} o Tr_{q^3/q}
        for e in (0..k.group_order()).step_by(37) {
            let x = k.exp(e);
            let t = k.trace_q(x);
            assert!(k.in_base_field(t));
            let tq = k.add(t, k.pow(t, 3));
            assert_eq!(tq.code() as u64, k.trace_p(x));
        }
    }

    #[test]
    fn eta_values() {
        let k = field(7);
        assert_eq!(k.eta(Elem::ONE), 1);
        assert_eq!(k.eta(Elem::ZERO), 0);
        let half = (k.size() - 1) / 2;
        for c in 1..7i64 {
            let x = k.from_int(c);
            let euler = k.pow_slow(x, half as u128);
            let expect = if euler == Elem::ONE { 1 } else { -1 };
            assert_eq!(k.eta(x), expect);
            // odd-degree extension: agrees with the Legendre symbol mod 7
            assert_eq!(k.eta(x), crate::numth::legendre(c as u64, 7));
        }
        assert_eq!(k.eta(k.from_int(-1)), -1);
        assert_eq!(k.eta(k.from_int(2)), 1);
    }
}
