use std::sync::OnceLock;

use super::cubic::{check_characteristic, CubicField, Elem};
use super::Subfield;
use crate::error::{Error, Result};
use crate::numth::prime_divisors;

/// An element `re + im * y` of `F_{q^6} = F_{q^3}[y]/(y^2 - omega)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct SexticElem {
    pub re: Elem,
    pub im: Elem,
}

impl SexticElem {
    pub const ZERO: SexticElem = SexticElem {
        re: Elem::ZERO,
        im: Elem::ZERO,
    };
    pub const ONE: SexticElem = SexticElem {
        re: Elem::ONE,
        im: Elem::ZERO,
    };

    pub fn from_base(x: Elem) -> Self {
        SexticElem {
            re: x,
            im: Elem::ZERO,
        }
    }

    pub fn is_zero(self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
}

const NO_LOG: u32 = u32::MAX;

#[derive(Debug)]
pub(crate) struct SexticTables {
    pub(crate) log: Vec<u32>,
}

/// The tower `F_p < F_q < F_{q^3} < F_{q^6}`.
///
/// `F_{q^3}` carries dense tables (see [`CubicField`]); `F_{q^6}` is its
/// quadratic extension by a square root of `omega`, and `gamma` is the least
/// primitive element (in sextic code order) with `gamma^{q^3+1} = omega`.
/// The dense `F_{q^6}` logarithm table is only built on first use.
#[derive(Debug)]
pub struct FieldTower {
    cubic: CubicField,
    gamma: SexticElem,
    size_limit: u64,
    tables: OnceLock<SexticTables>,
}

/// Default bound on `p^{6f}`.
pub const DEFAULT_SIZE_LIMIT: u64 = 1 << 31;

/// Builds the tower for `q = p^f`, requiring `q^6 <= size_limit`.
pub fn build_tower(p: u64, f: u32, size_limit: u64) -> Result<FieldTower> {
    check_characteristic(p)?;
    if f == 0 {
        return Err(Error::BadParameters(
            "extension degree must be positive".into(),
        ));
    }
    let size = (p as u128).pow(6 * f);
    if size > size_limit as u128 {
        return Err(Error::TooLarge {
            size,
            limit: size_limit as u128,
        });
    }
    let cubic = CubicField::new(p, f, u64::MAX)?;
    let gamma = find_gamma(&cubic);
    Ok(FieldTower {
        cubic,
        gamma,
        size_limit,
        tables: OnceLock::new(),
    })
}

fn sextic_mul(k: &CubicField, a: SexticElem, b: SexticElem) -> SexticElem {
    let bd = k.mul(a.im, b.im);
    SexticElem {
        re: k.add(k.mul(a.re, b.re), k.mul(bd, k.omega())),
        im: k.add(k.mul(a.re, b.im), k.mul(a.im, b.re)),
    }
}

fn sextic_pow(k: &CubicField, a: SexticElem, mut e: u128) -> SexticElem {
    let mut acc = SexticElem::ONE;
    let mut b = a;
    while e > 0 {
        if e & 1 == 1 {
            acc = sextic_mul(k, acc, b);
        }
        b = sextic_mul(k, b, b);
        e >>= 1;
    }
    acc
}

fn sextic_norm(k: &CubicField, a: SexticElem) -> Elem {
    let w = k.mul(k.mul(a.im, a.im), k.omega());
    k.sub(k.mul(a.re, a.re), w)
}

fn find_gamma(k: &CubicField) -> SexticElem {
    let n3 = k.group_order();
    let order = (n3 as u128) * (n3 as u128 + 2);
    let mut factors = prime_divisors(n3);
    factors.extend(prime_divisors(n3 + 2));
    factors.sort_unstable();
    factors.dedup();
    let w = k.omega();
    for im in 1..k.size() as u32 {
        for re in 0..k.size() as u32 {
            let cand = SexticElem {
                re: Elem(re),
                im: Elem(im),
            };
            if sextic_norm(k, cand) != w {
                continue;
            }
            let primitive = factors
                .iter()
                .all(|&l| sextic_pow(k, cand, order / l as u128) != SexticElem::ONE);
            if primitive {
                return cand;
            }
        }
    }
    unreachable!("the norm map sends some primitive element onto omega")
}

impl FieldTower {
    pub fn cubic(&self) -> &CubicField {
        &self.cubic
    }

    pub fn p(&self) -> u64 {
        self.cubic.p()
    }

    pub fn f(&self) -> u32 {
        self.cubic.f()
    }

    pub fn q(&self) -> u64 {
        self.cubic.q()
    }

    /// `q^6`.
    pub fn size(&self) -> u64 {
        self.cubic.size() * self.cubic.size()
    }

    /// `q^6 - 1`.
    pub fn group_order(&self) -> u64 {
        self.size() - 1
    }

    pub fn size_limit(&self) -> u64 {
        self.size_limit
    }

    pub fn gamma(&self) -> SexticElem {
        self.gamma
    }

    pub fn omega(&self) -> Elem {
        self.cubic.omega()
    }

    /// Base-`p` code of the full coordinate vector: `re` digits then `im` digits.
    pub fn code(&self, x: SexticElem) -> u64 {
        x.re.code() as u64 + self.cubic.size() * x.im.code() as u64
    }

    pub fn from_code(&self, code: u64) -> SexticElem {
        let s = self.cubic.size();
        SexticElem {
            re: Elem((code % s) as u32),
            im: Elem((code / s) as u32),
        }
    }

    pub fn add(&self, a: SexticElem, b: SexticElem) -> SexticElem {
        SexticElem {
            re: self.cubic.add(a.re, b.re),
            im: self.cubic.add(a.im, b.im),
        }
    }

    pub fn neg(&self, a: SexticElem) -> SexticElem {
        SexticElem {
            re: self.cubic.neg(a.re),
            im: self.cubic.neg(a.im),
        }
    }

    pub fn sub(&self, a: SexticElem, b: SexticElem) -> SexticElem {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: SexticElem, b: SexticElem) -> SexticElem {
        sextic_mul(&self.cubic, a, b)
    }

    pub fn pow(&self, a: SexticElem, e: u128) -> SexticElem {
        sextic_pow(&self.cubic, a, e)
    }

    /// `x^{q^3}`, the nontrivial automorphism over `F_{q^3}`.
    pub fn conjugate(&self, a: SexticElem) -> SexticElem {
        SexticElem {
            re: a.re,
            im: self.cubic.neg(a.im),
        }
    }

    /// `N_{q^6/q^3}(x) = x^{q^3+1}`.
    pub fn norm(&self, a: SexticElem) -> Elem {
        sextic_norm(&self.cubic, a)
    }

    /// Absolute trace `Tr_{q^6/p}` as an integer in `[0, p)`.
    pub fn trace_p(&self, x: SexticElem) -> u64 {
        let two_re = self.cubic.add(x.re, x.re);
        self.cubic.trace_p(two_re)
    }

    /// Trace down to the named subfield; every subfield sits inside `F_{q^3}`.
    pub fn trace(&self, x: SexticElem, to: Subfield) -> Elem {
        let t = self.cubic.add(x.re, x.re);
        self.cubic.trace(t, to)
    }

    /// Calls `visit(k, gamma^k)` for `k = 0, 1, .., q^6 - 2` in order.
    pub fn for_each_power(&self, mut visit: impl FnMut(u64, SexticElem)) {
        let mut cur = SexticElem::ONE;
        for k in 0..self.group_order() {
            visit(k, cur);
            cur = self.mul(cur, self.gamma);
        }
        debug_assert_eq!(cur, SexticElem::ONE);
    }

    pub(crate) fn tables(&self) -> &SexticTables {
        self.tables.get_or_init(|| self.build_tables())
    }

    fn build_tables(&self) -> SexticTables {
        let mut log = vec![NO_LOG; self.size() as usize];
        self.for_each_power(|k, x| log[self.code(x) as usize] = k as u32);
        SexticTables { log }
    }

    pub(crate) fn install_log_table(&self, log: Vec<u32>) -> Result<()> {
        if log.len() as u64 != self.size() {
            return Err(Error::Cache("log table has the wrong length".into()));
        }
        self.tables
            .set(SexticTables { log })
            .map_err(|_| Error::Cache("log table already built".into()))
    }

    pub fn log_table_built(&self) -> bool {
        self.tables.get().is_some()
    }

    /// Dense `F_{q^6}` logarithms in code order, `u32::MAX` at zero.
    pub fn log_table(&self) -> &[u32] {
        &self.tables().log
    }

    /// Discrete logarithm to the base `gamma`, in `[0, q^6 - 2]`.
    pub fn dlog(&self, x: SexticElem) -> Result<u64> {
        if x.is_zero() {
            return Err(Error::ZeroElement);
        }
        if x.im.is_zero() {
            let k = self.cubic.log(x.re)?;
            return Ok(k * (self.cubic.size() + 1));
        }
        Ok(self.tables().log[self.code(x) as usize] as u64)
    }

    /// `gamma^k` by square-and-multiply.
    pub fn exp(&self, k: u64) -> SexticElem {
        self.pow(self.gamma, (k % self.group_order()) as u128)
    }

    /// Minimal polynomial of `gamma` over `F_p`, ascending and monic, degree `6f`.
    pub fn gamma_minimal_polynomial(&self) -> Vec<u64> {
        let n = 6 * self.f() as usize;
        let mut coeffs = vec![SexticElem::ONE];
        let mut root = self.gamma;
        for _ in 0..n {
            // coeffs *= (X - root)
            let mut next = vec![SexticElem::ZERO; coeffs.len() + 1];
            for (i, &c) in coeffs.iter().enumerate() {
                next[i + 1] = self.add(next[i + 1], c);
                next[i] = self.sub(next[i], self.mul(c, root));
            }
            coeffs = next;
            root = self.pow(root, self.p() as u128);
        }
        debug_assert_eq!(root, self.gamma);
        coeffs
            .into_iter()
            .map(|c| {
                debug_assert!(c.im.is_zero() && (c.re.code() as u64) < self.p());
                c.re.code() as u64
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tower_errors() {
        assert_eq!(
            build_tower(2, 1, DEFAULT_SIZE_LIMIT).unwrap_err(),
            Error::OddPrimeRequired(2)
        );
        assert_eq!(
            build_tower(15, 1, DEFAULT_SIZE_LIMIT).unwrap_err(),
            Error::CompositeModulus(15)
        );
        assert!(matches!(
            build_tower(7, 1, 1000),
            Err(Error::TooLarge { .. })
        ));
    }

    #[test]
    fn gamma_order_q3() {
        let t = build_tower(3, 1, DEFAULT_SIZE_LIMIT).unwrap();
        assert_eq!(t.size(), 729);
        let g = t.gamma();
        let ord = (1..=728u128)
            .find(|&e| t.pow(g, e) == SexticElem::ONE)
            .unwrap();
        assert_eq!(ord, 728);
        assert_eq!(t.dlog(SexticElem::ONE).unwrap(), 0);
        assert_eq!(t.dlog(g).unwrap(), 1);
        assert_eq!(t.dlog(SexticElem::from_base(t.omega())).unwrap(), 28);
        assert_eq!(t.dlog(SexticElem::ZERO), Err(Error::ZeroElement));
    }

    #[test]
    fn omega_order_q7() {
        let t = build_tower(7, 1, DEFAULT_SIZE_LIMIT).unwrap();
        let w = t.pow(t.gamma(), 344);
        assert_eq!(w, SexticElem::from_base(t.omega()));
        // order by brute force over divisors of 342
        let ord = crate::numth::divisors(342)
            .into_iter()
            .find(|&d| t.pow(w, d as u128) == SexticElem::ONE)
            .unwrap();
        assert_eq!(ord, 342);
    }

    #[test]
    fn dlog_is_a_homomorphism() {
        let t = build_tower(3, 1, DEFAULT_SIZE_LIMIT).unwrap();
        let n = t.group_order();
        for (a, b) in [(3u64, 17u64), (100, 700), (364, 364), (5, 0)] {
            let x = t.exp(a);
            let y = t.exp(b);
            assert_eq!(t.dlog(t.mul(x, y)).unwrap(), (a + b) % n);
        }
    }

    #[test]
    fn minimal_polynomial_has_gamma_as_root() {
        for p in [3u64, 5] {
            let t = build_tower(p, 1, DEFAULT_SIZE_LIMIT).unwrap();
            let m = t.gamma_minimal_polynomial();
            assert_eq!(m.len(), 7);
            assert_eq!(m[6], 1);
            let mut acc = SexticElem::ZERO;
            for &c in m.iter().rev() {
                acc = t.mul(acc, t.gamma());
                acc = t.add(acc, SexticElem::from_base(t.cubic().from_int(c as i64)));
            }
            assert!(acc.is_zero());
        }
    }

    #[test]
    fn sextic_trace_restricts_correctly() {
        let t = build_tower(3, 1, DEFAULT_SIZE_LIMIT).unwrap();
        let k = t.cubic();
        for e in 0..(k.group_order()) {
            let x = k.exp(e);
            // [F_{q^6} : F_{q^3}] = 2
            assert_eq!(t.trace_p(SexticElem::from_base(x)), 2 * k.trace_p(x) % 3);
        }
        // additivity
        let a = t.exp(11);
        let b = t.exp(400);
        assert_eq!(t.trace_p(t.add(a, b)), (t.trace_p(a) + t.trace_p(b)) % 3);
    }
}
