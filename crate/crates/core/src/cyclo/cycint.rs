use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::numth::divisors;

/// Coefficients of the `m`-th cyclotomic polynomial, ascending.
pub fn cyclotomic_polynomial(m: u32) -> Arc<Vec<i64>> {
    static CACHE: OnceLock<Mutex<HashMap<u32, Arc<Vec<i64>>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(p) = cache.lock().unwrap().get(&m) {
        return p.clone();
    }
    assert!(m >= 1, "cyclotomic polynomial of order 0");
    // x^m - 1 divided by every Phi_d with d | m, d < m
    let mut num = vec![0i64; m as usize + 1];
    num[0] = -1;
    num[m as usize] = 1;
    for d in divisors(m as u64) {
        let d = d as u32;
        if d == m {
            continue;
        }
        let den = cyclotomic_polynomial(d);
        num = exact_div(&num, &den);
    }
    let out = Arc::new(num);
    cache.lock().unwrap().insert(m, out.clone());
    out
}

fn exact_div(num: &[i64], den: &[i64]) -> Vec<i64> {
    let dn = num.len() - 1;
    let dd = den.len() - 1;
    let mut r = num.to_vec();
    let mut quot = vec![0i64; dn - dd + 1];
    for i in (0..=dn - dd).rev() {
        let c = r[i + dd];
        quot[i] = c;
        for (j, &dj) in den.iter().enumerate() {
            r[i + j] -= c * dj;
        }
    }
    debug_assert!(r.iter().all(|&x| x == 0), "inexact cyclotomic division");
    quot
}

/// An element of `Z[zeta_m]`, stored in the power basis
/// `1, zeta, .., zeta^{phi(m) - 1}` after total reduction modulo `Phi_m`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct CycInt {
    order: u32,
    coeffs: Vec<BigInt>,
}

impl CycInt {
    pub fn zero(m: u32) -> Self {
        let deg = cyclotomic_polynomial(m).len() - 1;
        CycInt {
            order: m,
            coeffs: vec![BigInt::zero(); deg],
        }
    }

    pub fn from_integer(m: u32, n: impl Into<BigInt>) -> Self {
        let mut z = CycInt::zero(m);
        z.coeffs[0] = n.into();
        z
    }

    /// `zeta_m^e` for any integer exponent.
    pub fn zeta_power(m: u32, e: i64) -> Self {
        let mut counts = vec![0i64; m as usize];
        counts[e.rem_euclid(m as i64) as usize] = 1;
        CycInt::from_exponent_counts(m, &counts)
    }

    /// `sum_e counts[e] * zeta_m^e`, where `counts` is indexed by exponent and
    /// may be longer than `m` (indices are read modulo `m`).
    pub fn from_exponent_counts<T: Clone + Into<BigInt>>(m: u32, counts: &[T]) -> Self {
        let mut dense = vec![BigInt::zero(); m as usize];
        for (e, c) in counts.iter().enumerate() {
            dense[e % m as usize] += c.clone().into();
        }
        CycInt::reduce(m, dense)
    }

    /// Reduces a dense vector over the exponents `0..m` modulo `Phi_m`.
    fn reduce(m: u32, mut dense: Vec<BigInt>) -> Self {
        let phi = cyclotomic_polynomial(m);
        let deg = phi.len() - 1;
        for i in (deg..dense.len()).rev() {
            if dense[i].is_zero() {
                continue;
            }
            let c = std::mem::take(&mut dense[i]);
            for (j, &pj) in phi.iter().enumerate().take(deg) {
                if pj != 0 {
                    dense[i - deg + j] -= &c * pj;
                }
            }
        }
        dense.truncate(deg);
        dense.resize(deg, BigInt::zero());
        CycInt {
            order: m,
            coeffs: dense,
        }
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn coefficients(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn is_rational(&self) -> bool {
        self.coeffs.iter().skip(1).all(Zero::is_zero)
    }

    pub fn to_integer(&self) -> Option<BigInt> {
        self.is_rational().then(|| self.coeffs[0].clone())
    }

    pub fn scale(&self, k: impl Into<BigInt>) -> Self {
        let k = k.into();
        CycInt {
            order: self.order,
            coeffs: self.coeffs.iter().map(|c| c * &k).collect(),
        }
    }

    /// Image under `zeta -> zeta^k`, for `k` coprime to `m`.
    pub fn galois(&self, k: u64) -> Self {
        let m = self.order as u64;
        let mut dense = vec![BigInt::zero(); m as usize];
        for (e, c) in self.coeffs.iter().enumerate() {
            dense[((e as u64 * k) % m) as usize] += c;
        }
        CycInt::reduce(self.order, dense)
    }

    fn check(&self, other: &CycInt) {
        assert_eq!(self.order, other.order, "mixing cyclotomic orders");
    }

    fn mul_impl(&self, other: &CycInt) -> CycInt {
        self.check(other);
        let m = self.order as usize;
        let mut dense = vec![BigInt::zero(); m];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    dense[(i + j) % m] += a * b;
                }
            }
        }
        CycInt::reduce(self.order, dense)
    }

    pub fn pow(&self, mut e: u32) -> CycInt {
        let mut acc = CycInt::from_integer(self.order, BigInt::one());
        let mut b = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &b;
            }
            b = &b * &b;
            e >>= 1;
        }
        acc
    }
}

impl fmt::Debug for CycInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CycInt[{}](", self.order)?;
        let mut first = true;
        for (e, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match e {
                0 => write!(f, "{c}")?,
                _ => write!(f, "{c}z^{e}")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        write!(f, ")")
    }
}

impl Add for &CycInt {
    type Output = CycInt;
    fn add(self, rhs: &CycInt) -> CycInt {
        self.check(rhs);
        CycInt {
            order: self.order,
            coeffs: self
                .coeffs
                .iter()
                .zip(&rhs.coeffs)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

impl Sub for &CycInt {
    type Output = CycInt;
    fn sub(self, rhs: &CycInt) -> CycInt {
        self.check(rhs);
        CycInt {
            order: self.order,
            coeffs: self
                .coeffs
                .iter()
                .zip(&rhs.coeffs)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }
}

impl Mul for &CycInt {
    type Output = CycInt;
    fn mul(self, rhs: &CycInt) -> CycInt {
        self.mul_impl(rhs)
    }
}

impl Neg for &CycInt {
    type Output = CycInt;
    fn neg(self) -> CycInt {
        CycInt {
            order: self.order,
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $f:ident) => {
        impl $tr for CycInt {
            type Output = CycInt;
            fn $f(self, rhs: CycInt) -> CycInt {
                (&self).$f(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for CycInt {
    type Output = CycInt;
    fn neg(self) -> CycInt {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn small_cyclotomic_polynomials() {
        assert_eq!(*cyclotomic_polynomial(1), vec![-1, 1]);
        assert_eq!(*cyclotomic_polynomial(3), vec![1, 1, 1]);
        assert_eq!(*cyclotomic_polynomial(9), vec![1, 0, 0, 1, 0, 0, 1]);
        assert_eq!(cyclotomic_polynomial(21).len(), 13);
        // Phi_105 famously has a coefficient -2
        assert!(cyclotomic_polynomial(105).contains(&-2));
    }

    #[test]
    fn phi_of_zeta_vanishes() {
        for m in [3u32, 5, 7, 9, 12, 13, 21, 31] {
            let phi = cyclotomic_polynomial(m);
            assert!(CycInt::from_exponent_counts(m, &phi).is_zero(), "m = {m}");
        }
    }

    #[test]
    fn sum_of_all_roots_of_unity_is_zero() {
        for p in [3u32, 7, 11] {
            let ones = vec![1i64; p as usize];
            assert!(CycInt::from_exponent_counts(p, &ones).is_zero());
            let z = CycInt::zeta_power(p, 1);
            assert_eq!(z.pow(p), CycInt::from_integer(p, 1));
        }
    }

    #[test]
    fn quadratic_gauss_sum_mod_7() {
        // sum_x (x/7) zeta^x squares to -7
        let mut counts = vec![0i64; 7];
        for x in 1..7u64 {
            counts[x as usize] = crate::numth::legendre(x, 7) as i64;
        }
        let g = CycInt::from_exponent_counts(7, &counts);
        assert_eq!((&g * &g).to_integer(), Some(BigInt::from(-7)));
        assert_eq!(g.galois(3), -&g);
    }

    fn arb(m: u32) -> impl Strategy<Value = CycInt> {
        prop::collection::vec(-50i64..50, m as usize)
            .prop_map(move |v| CycInt::from_exponent_counts(m, &v))
    }

    proptest! {
        #[test]
        fn ring_laws((a, b, c) in prop::sample::select(vec![3u32, 5, 7, 9, 15, 21])
                         .prop_flat_map(|m| (arb(m), arb(m), arb(m)))) {
            prop_assert_eq!(&(&a + &b) * &c, &(&a * &c) + &(&b * &c));
            prop_assert_eq!(&a * &b, &b * &a);
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert!((&a - &a).is_zero());
        }

        #[test]
        fn distributive_mod_13(a in arb(13), b in arb(13), c in arb(13)) {
            prop_assert_eq!(&(&a + &b) * &c, &(&a * &c) + &(&b * &c));
        }
    }
}
