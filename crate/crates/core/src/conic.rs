//! The conic `Q(x) = Tr_{q^3/q}(x^2)` of `PG(2, q)`, its lift `X_Q` to
//! `Z_{2(q^2+q+1)}`, and the reductions modulo `2N`.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::cyclo::{
    gauss_sum_eta, gauss_sum_square, period_spectrum, ClassHistogram, CycInt, PeriodSpectrum,
};
use crate::error::{Error, Result};
use crate::gf::{CubicField, Elem};
use crate::numth::inv_mod;

/// `W_Q = {i mod q^2+q+1 : Q(w^i) = 0}`, ascending.
pub fn conic_support(field: &CubicField) -> Vec<u64> {
    let k = field.singer_order();
    (0..k)
        .filter(|&i| {
            let x = field.exp(i);
            field.trace_q(field.mul(x, x)).is_zero()
        })
        .collect()
}

/// The Singer difference set `S = {i mod q^2+q+1 : Tr_{q^3/q}(w^i) = 0}`.
pub fn singer_set(field: &CubicField) -> Vec<u64> {
    let k = field.singer_order();
    (0..k)
        .filter(|&i| field.trace_q(field.exp(i)).is_zero())
        .collect()
}

/// Whether every nonzero residue mod `k` is a difference of `set` exactly once.
pub fn is_planar_difference_set(set: &[u64], k: u64) -> bool {
    let mut hits = vec![0u32; k as usize];
    for &a in set {
        for &b in set {
            if a != b {
                hits[((a + k - b) % k) as usize] += 1;
            }
        }
    }
    hits[1..].iter().all(|&h| h == 1)
}

/// `{x * s mod n : x in set}` as a sorted set.
pub fn scale_set(set: &[u64], s: u64, n: u64) -> Vec<u64> {
    let out: BTreeSet<u64> = set
        .iter()
        .map(|&x| (x as u128 * s as u128 % n as u128) as u64)
        .collect();
    out.into_iter().collect()
}

/// `2^{-1} * set mod n` for odd `n`.
pub fn halve(set: &[u64], n: u64) -> Vec<u64> {
    let h = inv_mod(2, n).expect("n is odd");
    scale_set(set, h, n)
}

/// `X_Q` based at `d0`: logs modulo `2(q^2+q+1)` of
/// `{w^{d_i} Tr(w^{d0 + d_i}) : d_i != d0} ∪ {2 w^{d0}}`, ascending.
pub fn build_xq(field: &CubicField, w_q: &[u64], d0: u64) -> Result<Vec<u64>> {
    if !w_q.contains(&d0) {
        return Err(Error::BadBasePoint(d0));
    }
    let k2 = 2 * field.singer_order();
    let mut out = Vec::with_capacity(w_q.len());
    for &d in w_q {
        let x = if d == d0 {
            field.mul(field.from_int(2), field.exp(d0))
        } else {
            field.mul(field.exp(d), field.trace_q(field.exp(d0 + d)))
        };
        out.push(field.log(x)? % k2);
    }
    out.sort_unstable();
    out.dedup();
    Ok(out)
}

/// `(E1, E2)` with `X_Q = 2 E1 ∪ (2 E2 + K) mod 2K`.
pub fn even_odd_parts(x_q: &[u64], k: u64) -> (Vec<u64>, Vec<u64>) {
    let mut e1 = Vec::new();
    let mut e2 = Vec::new();
    for &x in x_q {
        if x % 2 == 0 {
            e1.push(x / 2);
        } else {
            e2.push((x + k) % (2 * k) / 2);
        }
    }
    e1.sort_unstable();
    e2.sort_unstable();
    (e1, e2)
}

/// `X_i = [x mod 2N : x in X_Q, x mod N in 2^{-1} I_i]`, returned as sorted
/// multisets `(X1, X2)`.
pub fn reduce_partition(x_q: &[u64], spectrum: &PeriodSpectrum) -> Result<(Vec<u64>, Vec<u64>)> {
    if !spectrum.arc_valued {
        return Err(Error::NotThreeValued);
    }
    let n = spectrum.n;
    let h1 = halve(&spectrum.i1, n);
    let h2 = halve(&spectrum.i2, n);
    let mut x1 = Vec::new();
    let mut x2 = Vec::new();
    for &x in x_q {
        let r = x % n;
        if h1.binary_search(&r).is_ok() {
            x1.push(x % (2 * n));
        } else if h2.binary_search(&r).is_ok() {
            x2.push(x % (2 * n));
        }
    }
    x1.sort_unstable();
    x2.sort_unstable();
    Ok((x1, x2))
}

/// No element repeats in the sorted multiset.
pub fn purity_check(x1: &[u64]) -> bool {
    x1.windows(2).all(|w| w[0] != w[1])
}

/// `eta(2) != eta(1 + w^{l (q^3-1)/M})` for every `l` in `1..M`.
pub fn purity_via_characters(field: &CubicField, m: u64) -> bool {
    let e2 = field.eta(field.from_int(2));
    let step = field.group_order() / m;
    (1..m).all(|l| field.eta(field.add(Elem::ONE, field.exp(l * step))) != e2)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConicPartition {
    pub q: u64,
    pub n: u64,
    pub m: u64,
    pub w_q: Vec<u64>,
    pub d0: u64,
    pub x_q: Vec<u64>,
    pub e1: Vec<u64>,
    pub e2: Vec<u64>,
    /// Multiset, sorted with repeats.
    pub x1: Vec<u64>,
    pub x2: Vec<u64>,
    /// `2^{-1} I_1` and `2^{-1} I_2` modulo `N`.
    pub half_i1: Vec<u64>,
    pub half_i2: Vec<u64>,
    pub pure: bool,
}

/// The full conic data for `N = (q^2+q+1)/M`, based at `d0 = min W_Q`.
pub fn conic_partition(field: &CubicField, m: u64) -> Result<ConicPartition> {
    let k = field.singer_order();
    if m == 0 || k % m != 0 {
        return Err(Error::BadParameters(format!(
            "M = {m} must divide q^2+q+1 = {k}"
        )));
    }
    let n = k / m;
    let spectrum = period_spectrum(field, n, m)?;
    partition_with(field, &spectrum)
}

pub fn partition_with(field: &CubicField, spectrum: &PeriodSpectrum) -> Result<ConicPartition> {
    let k = field.singer_order();
    let n = spectrum.n;
    let w_q = conic_support(field);
    let d0 = w_q[0];
    let x_q = build_xq(field, &w_q, d0)?;
    let (e1, e2) = even_odd_parts(&x_q, k);
    let (x1, x2) = reduce_partition(&x_q, spectrum)?;
    let pure = purity_check(&x1);
    Ok(ConicPartition {
        q: field.q(),
        n,
        m: spectrum.m,
        w_q,
        d0,
        x_q,
        e1,
        e2,
        x1,
        x2,
        half_i1: halve(&spectrum.i1, n),
        half_i2: halve(&spectrum.i2, n),
        pure,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GmCheck {
    pub u: u64,
    pub ell: u64,
    /// `eta(g_M(w^u))` from the direct value.
    pub eta_g: i8,
    /// `eta(-1) eta(1 - w^{l(q+1)(q^3-1)/M}) eta(1 - w^{2lq(q^3-1)/M})`.
    pub product_form: i8,
    /// `eta(1 + w^{l(q^3-1)/M})`.
    pub simplified_form: i8,
    pub eta2: i8,
}

impl GmCheck {
    pub fn holds(&self) -> bool {
        self.eta_g == self.product_form && self.eta_g == self.simplified_form
    }
}

/// The unique `l` in `1..M` with `u + l N` in `W_Q`.
pub fn partner(w_q: &[u64], u: u64, n: u64, m: u64) -> Result<u64> {
    let k = n * m;
    let found: Vec<u64> = (1..m)
        .filter(|&l| w_q.binary_search(&((u + l * n) % k)).is_ok())
        .collect();
    match found[..] {
        [l] => Ok(l),
        _ => Err(Error::NoPartner(u)),
    }
}

/// Evaluates `g_M(w^u) = Tr(w^{2u + l N}) w^{l N}` and both closed forms of
/// its quadratic character.
pub fn g_m_identity_check(field: &CubicField, part: &ConicPartition, u: u64) -> Result<GmCheck> {
    let (n, m) = (part.n, part.m);
    if part.w_q.binary_search(&u).is_err() || part.half_i1.binary_search(&(u % n)).is_err() {
        return Err(Error::BadParameters(format!(
            "u = {u} must lie in W_Q with u mod N in 2^-1 I_1"
        )));
    }
    let ell = partner(&part.w_q, u, n, m)?;
    let q = field.q();
    let order = field.group_order();
    let step = order / m;
    let g = field.mul(
        field.trace_q(field.exp(2 * u + ell * n)),
        field.exp(ell * n),
    );
    let eta = |x: Elem| field.eta(x);
    let one_minus = |e: u128| eta(field.sub(Elem::ONE, field.exp((e % order as u128) as u64)));
    let ell_step = (ell * step) as u128;
    let product_form = eta(field.neg(Elem::ONE))
        * one_minus(ell_step * (q as u128 + 1))
        * one_minus(ell_step * 2 * q as u128);
    let simplified_form = eta(field.add(Elem::ONE, field.exp(ell * step % order)));
    Ok(GmCheck {
        u,
        ell,
        eta_g: eta(g),
        product_form,
        simplified_form,
        eta2: eta(field.from_int(2)),
    })
}

/// [`g_m_identity_check`] for every qualifying `u`.
pub fn g_m_all(field: &CubicField, part: &ConicPartition) -> Result<Vec<GmCheck>> {
    part.w_q
        .iter()
        .filter(|&&u| part.half_i1.binary_search(&(u % part.n)).is_ok())
        .map(|&u| g_m_identity_check(field, part, u))
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SumClass {
    Zero,
    PlusG,
    MinusG,
    /// Neither zero nor a square root of `eta(-1) q^3`.
    Other,
}

impl SumClass {
    pub fn is_plus_or_minus_g(self) -> bool {
        matches!(self, SumClass::PlusG | SumClass::MinusG)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct SumEntry {
    pub c: u64,
    pub class: SumClass,
    /// `c mod N in 2^{-1} I_2`.
    pub expected_nonzero: bool,
}

/// `L(c) = 2 psi(w^c ∪_{l in X} C_l^{(2N)}) - psi(w^c ∪_{l in H} C_l^{(N)})`
/// for every `c` in `Z_{2N}`, classified without asserting anything.
pub fn classify_sums(
    field: &CubicField,
    n: u64,
    x: &[u64],
    half_i2: &[u64],
) -> Result<Vec<SumEntry>> {
    let hist = ClassHistogram::cubic(field, 2 * n)?;
    let g = gauss_sum_eta(field);
    let g2 = gauss_sum_square(field);
    let p = field.p() as u32;
    let neg_g = -&g;
    let mut out = Vec::with_capacity(2 * n as usize);
    for c in 0..2 * n {
        let a = hist.union_counts(c, x.iter().copied());
        let b = hist.union_counts(c, half_i2.iter().flat_map(|&l| [l, l + n]));
        let counts: Vec<i64> = a.iter().zip(&b).map(|(a, b)| 2 * a - b).collect();
        let l = CycInt::from_exponent_counts(p, &counts);
        let class = if l.is_zero() {
            SumClass::Zero
        } else if &l * &l != g2 {
            SumClass::Other
        } else if l == g {
            SumClass::PlusG
        } else if l == neg_g {
            SumClass::MinusG
        } else {
            SumClass::Other
        };
        out.push(SumEntry {
            c,
            class,
            expected_nonzero: half_i2.binary_search(&(c % n)).is_ok(),
        });
    }
    Ok(out)
}

/// As [`classify_sums`], failing with the first `c` whose class does not
/// match `c mod N in 2^{-1} I_2`.
pub fn verify_identity(
    field: &CubicField,
    n: u64,
    x: &[u64],
    half_i2: &[u64],
) -> Result<Vec<SumEntry>> {
    let entries = classify_sums(field, n, x, half_i2)?;
    for e in &entries {
        let ok = match e.class {
            SumClass::Zero => !e.expected_nonzero,
            SumClass::PlusG | SumClass::MinusG => e.expected_nonzero,
            SumClass::Other => false,
        };
        if !ok {
            return Err(Error::IdentityViolated(e.c));
        }
    }
    Ok(entries)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn field(q: u64) -> CubicField {
        let (p, f) = crate::numth::prime_power(q).unwrap();
        CubicField::new(p, f, 1 << 24).unwrap()
    }

    #[test]
    fn support_and_singer_set() {
        for q in [3u64, 5, 7, 9, 11] {
            let k = field(q);
            let w = conic_support(&k);
            let s = singer_set(&k);
            let kk = k.singer_order();
            assert_eq!(w.len() as u64, q + 1);
            assert_eq!(scale_set(&w, 2, kk), s);
            assert!(is_planar_difference_set(&w, kk));
            assert!(is_planar_difference_set(&s, kk));
        }
    }

    #[test]
    fn xq_reduces_to_wq_and_has_two_shift_classes() {
        for q in [3u64, 7, 9] {
            let k = field(q);
            let kk = k.singer_order();
            let w = conic_support(&k);
            let base = build_xq(&k, &w, w[0]).unwrap();
            assert_eq!(base.len() as u64, q + 1);
            assert_eq!(scale_set(&base, 1, kk), w);
            let shifted: Vec<u64> =
                scale_set(&base.iter().map(|x| x + kk).collect::<Vec<_>>(), 1, 2 * kk);
            let mut seen = BTreeSet::new();
            for &d in &w {
                let x = build_xq(&k, &w, d).unwrap();
                assert!(x == base || x == shifted, "q={q} d0={d}");
                seen.insert(x);
            }
            assert_eq!(seen.len(), 2, "q={q}");
            let (e1, e2) = even_odd_parts(&base, kk);
            assert_eq!((e1.len() + e2.len()) as u64, q + 1);
            let mut back: Vec<u64> = e1
                .iter()
                .map(|e| 2 * e)
                .chain(e2.iter().map(|e| (2 * e + kk) % (2 * kk)))
                .collect();
            back.sort_unstable();
            assert_eq!(back, base);
        }
        let k = field(3);
        assert_eq!(
            build_xq(&k, &conic_support(&k), 1),
            Err(Error::BadBasePoint(1))
        );
    }

    #[test]
    fn partition_sizes() {
        let p = conic_partition(&field(7), 3).unwrap();
        assert_eq!((p.x1.len(), p.x2.len()), (2, 6));
        assert!(p.pure);
        let p = conic_partition(&field(11), 7).unwrap();
        assert_eq!((p.x1.len(), p.x2.len()), (6, 6));
        assert!(purity_check(&p.x2));
        let p = conic_partition(&field(3), 1).unwrap();
        assert!(p.x1.is_empty());
        assert_eq!(p.x2, p.x_q);
        assert!(p.pure);
    }

    #[test]
    fn purity_agrees_with_characters() {
        for (q, m, pure) in [
            (7u64, 3u64, true),
            (19, 3, false),
            (11, 7, true),
            (13, 3, true),
            (3, 1, true),
        ] {
            let k = field(q);
            let p = conic_partition(&k, m).unwrap();
            assert_eq!(p.pure, pure, "q={q} M={m}");
            assert_eq!(purity_via_characters(&k, m), pure, "q={q} M={m}");
        }
    }

    #[test]
    fn g_m_identity() {
        for (q, m) in [(7u64, 3u64), (11, 7), (19, 3)] {
            let k = field(q);
            let p = conic_partition(&k, m).unwrap();
            let checks = g_m_all(&k, &p).unwrap();
            assert_eq!(checks.len() as u64, m - 1);
            assert!(checks.iter().all(GmCheck::holds), "q={q}");
            let ells: BTreeSet<u64> = checks.iter().map(|c| c.ell).collect();
            assert_eq!(ells, (1..m).collect());
        }
    }

    #[test]
    fn prop_ab_small() {
        let k = field(3);
        let p = conic_partition(&k, 1).unwrap();
        let e = verify_identity(&k, 13, &p.x2, &p.half_i2).unwrap();
        assert_eq!(e.len(), 26);
        let residues: BTreeSet<u64> = e
            .iter()
            .filter(|e| e.class.is_plus_or_minus_g())
            .map(|e| e.c % 13)
            .collect();
        assert_eq!(residues.len(), 4);

        let k = field(7);
        let p = conic_partition(&k, 3).unwrap();
        let e = verify_identity(&k, 19, &p.x2, &p.half_i2).unwrap();
        assert_eq!(e.len(), 38);
    }
}
