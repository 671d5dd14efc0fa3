use crate::error::{Error, Result};
use crate::gf::check_characteristic;
use crate::numth::{legendre, prime_divisors};

/// Largest characteristic accepted: `p^3` must fit a `u64` code.
pub const MAX_PRIME: u64 = 1 << 21;

/// An element `c0 + c1 x + c2 x^2` of `F_{p^3}`.
pub type Cubic = [u64; 3];

/// `F_{p^3} = F_p[x]/(x^3 + a x + b)` without tables.
///
/// The cubic is the first irreducible one when ordered by `b` (from 1) and
/// then by `a`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrimeCubic {
    p: u64,
    a: u64,
    b: u64,
}

impl PrimeCubic {
    pub fn new(p: u64) -> Result<Self> {
        check_characteristic(p)?;
        if p >= MAX_PRIME {
            return Err(Error::TooLarge {
                size: p as u128,
                limit: MAX_PRIME as u128,
            });
        }
        for b in 1..p {
            for a in 0..p {
                if !has_root(p, a, b) {
                    return Ok(PrimeCubic { p, a, b });
                }
            }
        }
        unreachable!("an irreducible trinomial x^3 + ax + b exists for odd p")
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    /// `(a, b)` of the modulus `x^3 + a x + b`.
    pub fn modulus(&self) -> (u64, u64) {
        (self.a, self.b)
    }

    /// `p^3 - 1`.
    pub fn group_order(&self) -> u64 {
        self.p * self.p * self.p - 1
    }

    pub fn zero(&self) -> Cubic {
        [0, 0, 0]
    }

    pub fn one(&self) -> Cubic {
        [1, 0, 0]
    }

    pub fn from_int(&self, c: i64) -> Cubic {
        [c.rem_euclid(self.p as i64) as u64, 0, 0]
    }

    pub fn from_code(&self, code: u64) -> Cubic {
        let p = self.p;
        [code % p, (code / p) % p, (code / p / p) % p]
    }

    pub fn code(&self, x: Cubic) -> u64 {
        x[0] + self.p * (x[1] + self.p * x[2])
    }

    pub fn add(&self, x: Cubic, y: Cubic) -> Cubic {
        let p = self.p;
        [(x[0] + y[0]) % p, (x[1] + y[1]) % p, (x[2] + y[2]) % p]
    }

    pub fn neg(&self, x: Cubic) -> Cubic {
        let p = self.p;
        [(p - x[0]) % p, (p - x[1]) % p, (p - x[2]) % p]
    }

    pub fn sub(&self, x: Cubic, y: Cubic) -> Cubic {
        self.add(x, self.neg(y))
    }

    pub fn mul(&self, x: Cubic, y: Cubic) -> Cubic {
        let p = self.p as u128;
        let (x0, x1, x2) = (x[0] as u128, x[1] as u128, x[2] as u128);
        let (y0, y1, y2) = (y[0] as u128, y[1] as u128, y[2] as u128);
        let d0 = x0 * y0 % p;
        let d1 = (x0 * y1 + x1 * y0) % p;
        let d2 = (x0 * y2 + x1 * y1 + x2 * y0) % p;
        let d3 = (x1 * y2 + x2 * y1) % p;
        let d4 = x2 * y2 % p;
        // x^3 = -a x - b, x^4 = -a x^2 - b x
        let (a, b) = (self.a as u128, self.b as u128);
        let c0 = (d0 + p * p - b * d3 % p) % p;
        let c1 = (d1 + 2 * p * p - a * d3 % p - b * d4 % p) % p;
        let c2 = (d2 + p * p - a * d4 % p) % p;
        [c0 as u64, c1 as u64, c2 as u64]
    }

    pub fn pow(&self, x: Cubic, mut e: u128) -> Cubic {
        let mut acc = self.one();
        let mut b = x;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, b);
            }
            b = self.mul(b, b);
            e >>= 1;
        }
        acc
    }

    pub fn is_zero(&self, x: Cubic) -> bool {
        x == [0, 0, 0]
    }

    /// Quadratic character by Euler's criterion.
    pub fn eta(&self, x: Cubic) -> i8 {
        if self.is_zero(x) {
            return 0;
        }
        if self.pow(x, (self.group_order() / 2) as u128) == self.one() {
            1
        } else {
            -1
        }
    }

    /// `N_{p^3/p}(x)` as the determinant of multiplication by `x`.
    pub fn norm(&self, x: Cubic) -> u64 {
        let cols = [x, self.mul(x, [0, 1, 0]), self.mul(x, [0, 0, 1])];
        let p = self.p as i128;
        let m = |r: usize, c: usize| cols[c][r] as i128;
        let det = m(0, 0) * (m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1))
            - m(0, 1) * (m(1, 0) * m(2, 2) - m(1, 2) * m(2, 0))
            + m(0, 2) * (m(1, 0) * m(2, 1) - m(1, 1) * m(2, 0));
        det.rem_euclid(p) as u64
    }

    /// Quadratic character through the norm: for odd degree, `eta(x)` is the
    /// Legendre symbol of `N(x)`.
    pub fn eta_via_norm(&self, x: Cubic) -> i8 {
        legendre(self.norm(x), self.p)
    }

    /// Whether `x` has exact multiplicative order `order`.
    pub fn has_order(&self, x: Cubic, order: u64) -> bool {
        self.pow(x, order as u128) == self.one()
            && prime_divisors(order)
                .into_iter()
                .all(|l| self.pow(x, (order / l) as u128) != self.one())
    }

    /// Elements of exact order `m`, as `y^{(p^3-1)/m}` for `y` running through
    /// the non-constant codes `p, p+1, ..` and then the constants `2, .., p-1`
    /// (skipping candidates of smaller order).
    pub fn order_m_elements(&self, m: u64) -> Result<impl Iterator<Item = Cubic> + '_> {
        let order = self.group_order();
        if m == 0 || order % m != 0 {
            return Err(Error::NoOrderMElement { p: self.p, m });
        }
        let cof = (order / m) as u128;
        let primes = prime_divisors(m);
        Ok(self.candidate_codes().filter_map(move |code| {
            let e = self.pow(self.from_code(code), cof);
            primes
                .iter()
                .all(|&l| self.pow(e, (m / l) as u128) != self.one())
                .then_some(e)
        }))
    }

    /// The canonical `epsilon_M`: the first element of [`Self::order_m_elements`].
    pub fn epsilon(&self, m: u64) -> Result<Cubic> {
        let mut it = self.order_m_elements(m)?;
        Ok(it.next().expect("an element of order m exists"))
    }

    /// Codes with non-constant elements first: constants lie in `F_p^*` and
    /// rarely have the orders asked for.
    fn candidate_codes(&self) -> impl Iterator<Item = u64> {
        (self.p..=self.group_order()).chain(2..self.p)
    }

    /// The first primitive element in [`Self::candidate_codes`] order.
    pub fn primitive_element(&self) -> Cubic {
        let p = self.p;
        let mut primes = prime_divisors(p - 1);
        primes.extend(prime_divisors(p * p + p + 1));
        primes.sort_unstable();
        primes.dedup();
        let order = self.group_order();
        self.candidate_codes()
            .map(|c| self.from_code(c))
            .find(|&x| {
                primes
                    .iter()
                    .all(|&l| self.pow(x, (order / l) as u128) != self.one())
            })
            .expect("a primitive element exists")
    }
}

/// Whether `x^3 + a x + b` has a root in `F_p`, via `gcd(x^p - x, f)`.
fn has_root(p: u64, a: u64, b: u64) -> bool {
    use crate::gf::poly;
    let f = [b, a, 0, 1];
    let xp = poly::pow_mod_poly(&[0, 1], p as u128, &f, p);
    let g = poly::gcd(&poly::sub(&xp, &[0, 1], p), &f, p);
    poly::degree(&g) != Some(0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_primes() {
        assert_eq!(PrimeCubic::new(2), Err(Error::OddPrimeRequired(2)));
        assert_eq!(PrimeCubic::new(15), Err(Error::CompositeModulus(15)));
        assert!(matches!(
            PrimeCubic::new(2097169),
            Err(Error::TooLarge { .. })
        ));
    }

    #[test]
    fn modulus_has_no_roots() {
        for p in [3u64, 5, 7, 11, 13, 101, 1009] {
            let k = PrimeCubic::new(p).unwrap();
            let (a, b) = k.modulus();
            assert!((0..p).all(|x| (x * x % p * x + a * x + b) % p != 0));
        }
    }

    #[test]
    fn ring_laws_and_fermat() {
        let k = PrimeCubic::new(13).unwrap();
        for c in (1..2197).step_by(37) {
            let x = k.from_code(c);
            assert_eq!(k.pow(x, 2197), x);
            assert_eq!(k.pow(x, 2196), k.one());
            let y = k.from_code((c * 7 + 3) % 2197);
            let z = k.from_code((c * 11 + 5) % 2197);
            assert_eq!(k.mul(x, k.add(y, z)), k.add(k.mul(x, y), k.mul(x, z)));
        }
    }

    #[test]
    fn eta_agrees_with_norm() {
        for p in [3u64, 7, 11, 101] {
            let k = PrimeCubic::new(p).unwrap();
            for c in (1..k.group_order()).step_by((p as usize).max(7)) {
                let x = k.from_code(c);
                assert_eq!(k.eta(x), k.eta_via_norm(x), "p={p} x={c}");
            }
        }
    }

    #[test]
    fn eta_on_small_elements() {
        let k = PrimeCubic::new(7).unwrap();
        assert_eq!(k.eta(k.from_int(-1)), -1);
        assert_eq!(k.eta(k.from_int(2)), 1);
        assert_eq!(k.eta(k.from_int(2)), k.eta(k.pow(k.from_int(2), 171)));
    }

    #[test]
    fn order_m_elements_have_order_m() {
        let k = PrimeCubic::new(11).unwrap();
        let e = k.epsilon(7).unwrap();
        assert!(k.has_order(e, 7));
        assert!(k.order_m_elements(13).is_err());
        let g = k.primitive_element();
        assert!(k.has_order(g, 1330));
    }
}
