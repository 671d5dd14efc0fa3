use std::collections::BTreeMap;

use num_bigint::BigInt;

use super::CycInt;
use crate::error::{Error, Result};
use crate::gf::{CubicField, FieldTower};

/// Trace-value frequencies per cyclotomic class: `count(i, t)` is the number
/// of `x` in `C_i^{(n)}` with absolute trace `t`.
///
/// Translating a class by `g^c` moves it to class `i + c`, so every additive
/// character sum over a union of shifted classes is a sum of rows.
#[derive(Clone, Debug)]
pub struct ClassHistogram {
    classes: u64,
    p: u64,
    counts: Vec<u64>,
}

impl ClassHistogram {
    /// Histogram over the `n`-th cyclotomic classes of `F_{q^3}` (base `omega`).
    pub fn cubic(field: &CubicField, n: u64) -> Result<Self> {
        let order = field.group_order();
        check_modulus(n, order)?;
        let p = field.p();
        let mut counts = vec![0u64; (n * p) as usize];
        for (k, &t) in field.trace_table().iter().enumerate() {
            let i = k as u64 % n;
            counts[(i * p + t as u64) as usize] += 1;
        }
        Ok(ClassHistogram {
            classes: n,
            p,
            counts,
        })
    }

    /// Histogram over the `n`-th cyclotomic classes of `F_{q^6}` (base `gamma`).
    pub fn sextic(tower: &FieldTower, n: u64) -> Result<Self> {
        check_modulus(n, tower.group_order())?;
        let p = tower.p();
        let mut counts = vec![0u64; (n * p) as usize];
        tower.for_each_power(|k, x| {
            let i = k % n;
            counts[(i * p + tower.trace_p(x)) as usize] += 1;
        });
        Ok(ClassHistogram {
            classes: n,
            p,
            counts,
        })
    }

    pub fn classes(&self) -> u64 {
        self.classes
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn row(&self, i: u64) -> &[u64] {
        let i = (i % self.classes) as usize;
        let p = self.p as usize;
        &self.counts[i * p..(i + 1) * p]
    }

    /// Trace frequencies of the union (with multiplicity) of `g^shift * C_i`
    /// over `indices`; classes are read modulo the number of classes.
    pub fn union_counts(&self, shift: u64, indices: impl IntoIterator<Item = u64>) -> Vec<i64> {
        let mut acc = vec![0i64; self.p as usize];
        for i in indices {
            for (a, &c) in acc.iter_mut().zip(self.row(i + shift)) {
                *a += c as i64;
            }
        }
        acc
    }

    /// `psi(g^shift * union of C_i)` as a cyclotomic integer in `Z[zeta_p]`.
    pub fn character_sum(&self, shift: u64, indices: impl IntoIterator<Item = u64>) -> CycInt {
        let counts = self.union_counts(shift, indices);
        CycInt::from_exponent_counts(self.p as u32, &counts)
    }

    /// The Gauss period `psi(C_i)`.
    pub fn period(&self, i: u64) -> CycInt {
        self.character_sum(0, [i])
    }
}

fn check_modulus(n: u64, order: u64) -> Result<()> {
    if n == 0 || order % n != 0 {
        return Err(Error::BadModulus { n, order });
    }
    Ok(())
}

/// Integer value of `sum_t counts[t] zeta_p^t` when all nonzero traces are
/// equally frequent.
pub fn rational_value(counts: &[i64]) -> Option<i64> {
    let first = *counts.get(1)?;
    counts[1..]
        .iter()
        .all(|&c| c == first)
        .then(|| counts[0] - first)
}

/// `i` with `x` in `C_i^{(n)}` of `F_{q^3}`.
pub fn class_index(field: &CubicField, x: crate::gf::Elem, n: u64) -> Result<u64> {
    check_modulus(n, field.group_order())?;
    Ok(field.log(x)? % n)
}

/// All `n` Gauss periods of `F_{q^3}`, exactly.
pub fn gauss_periods(field: &CubicField, n: u64) -> Result<Vec<CycInt>> {
    let hist = ClassHistogram::cubic(field, n)?;
    Ok((0..n).map(|i| hist.period(i)).collect())
}

/// Period of a single class, brute force over the class members.
pub fn gauss_period(field: &CubicField, i: u64, n: u64) -> Result<CycInt> {
    check_modulus(n, field.group_order())?;
    let p = field.p();
    let mut counts = vec![0i64; p as usize];
    let mut k = i % n;
    while k < field.group_order() {
        counts[field.trace_p_of_power(k) as usize] += 1;
        k += n;
    }
    Ok(CycInt::from_exponent_counts(p as u32, &counts))
}

/// The `N`-th Gauss periods of `F_{q^3}` grouped by value, for `N M = q^2+q+1`.
#[derive(Clone, Debug)]
pub struct PeriodSpectrum {
    pub q: u64,
    pub n: u64,
    pub m: u64,
    pub periods: Vec<CycInt>,
    /// Integer value of each period, `None` if irrational.
    pub values: Vec<Option<i64>>,
    /// Distinct integer values, descending.
    pub value_set: Vec<i64>,
    pub index_sets: BTreeMap<i64, Vec<u64>>,
    /// Values are exactly the three numbers `-M+2q, -M+q, -M`.
    pub three_valued: bool,
    /// Values lie among `-M+2q, -M+q, -M` with the cardinalities forced by an
    /// `M`-arc. Coincides with `three_valued` except for `M = 1`.
    pub arc_valued: bool,
    pub i1: Vec<u64>,
    pub i2: Vec<u64>,
    pub i3: Vec<u64>,
}

impl PeriodSpectrum {
    pub fn sum(&self) -> CycInt {
        let p = self.periods[0].order();
        self.periods.iter().fold(CycInt::zero(p), |acc, x| &acc + x)
    }

    pub fn all_rational(&self) -> bool {
        self.values.iter().all(Option::is_some)
    }

    /// `(value, multiplicity)` pairs, values descending.
    pub fn multiplicities(&self) -> Vec<(i64, usize)> {
        self.value_set
            .iter()
            .map(|v| (*v, self.index_sets[v].len()))
            .collect()
    }

    /// Sizes of `I_1, I_2, I_3` forced by an `M`-arc, `M` odd.
    pub fn expected_sizes(q: u64, m: u64) -> Option<(u64, u64, u64)> {
        Some(((m - 1) / 2, (q + 2).checked_sub(m)?, size_i3(q, m)?))
    }
}

/// `|I_3|` written without negative intermediates.
fn size_i3(q: u64, m: u64) -> Option<u64> {
    let k = q * q + q + 1;
    // k/M - q + (M-3)/2, M odd
    (k / m + (m - 1) / 2).checked_sub(q + 1)
}

pub fn period_spectrum(field: &CubicField, n: u64, m: u64) -> Result<PeriodSpectrum> {
    let q = field.q();
    let k = q * q + q + 1;
    if n.checked_mul(m) != Some(k) {
        return Err(Error::BadParameters(format!(
            "N * M = {n} * {m} must equal q^2+q+1 = {k}"
        )));
    }
    let hist = ClassHistogram::cubic(field, n)?;
    let mut periods = Vec::with_capacity(n as usize);
    let mut values = Vec::with_capacity(n as usize);
    for i in 0..n {
        let counts = hist.union_counts(0, [i]);
        values.push(rational_value(&counts));
        periods.push(CycInt::from_exponent_counts(field.p() as u32, &counts));
    }
    let mut index_sets: BTreeMap<i64, Vec<u64>> = BTreeMap::new();
    for (i, v) in values.iter().enumerate() {
        if let Some(v) = v {
            index_sets.entry(*v).or_default().push(i as u64);
        }
    }
    let value_set: Vec<i64> = index_sets.keys().rev().copied().collect();
    let (a1, a2, a3) = (2 * q as i64 - m as i64, q as i64 - m as i64, -(m as i64));
    let take = |v: i64| index_sets.get(&v).cloned().unwrap_or_default();
    let (i1, i2, i3) = (take(a1), take(a2), take(a3));

    let all_rational = values.iter().all(Option::is_some);
    let in_ap = value_set.iter().all(|v| [a1, a2, a3].contains(v));
    let sizes_ok = m % 2 == 1
        && PeriodSpectrum::expected_sizes(q, m)
            == Some((i1.len() as u64, i2.len() as u64, i3.len() as u64));
    let arc_valued = all_rational && in_ap && sizes_ok;
    let three_valued = all_rational && value_set == vec![a1, a2, a3];

    Ok(PeriodSpectrum {
        q,
        n,
        m,
        periods,
        values,
        value_set,
        index_sets,
        three_valued,
        arc_valued,
        i1,
        i2,
        i3,
    })
}

/// `(i, j)_n = |(C_i + 1) ∩ C_j|` in `F_{q^3}`, by enumerating `C_i`.
pub fn cyclotomic_number(field: &CubicField, i: u64, j: u64, n: u64) -> Result<u64> {
    let order = field.group_order();
    check_modulus(n, order)?;
    let mut count = 0;
    let mut k = i % n;
    while k < order {
        let y = field.add(field.exp(k), crate::gf::Elem::ONE);
        if !y.is_zero() && field.log(y)? % n == j % n {
            count += 1;
        }
        k += n;
    }
    Ok(count)
}

/// The quadratic Gauss sum `G(eta) = sum_{x != 0} eta(x) zeta_p^{Tr(x)}` of `F_{q^3}`.
pub fn gauss_sum_eta(field: &CubicField) -> CycInt {
    let p = field.p();
    let mut counts = vec![0i64; p as usize];
    for (k, &t) in field.trace_table().iter().enumerate() {
        counts[t as usize] += if k % 2 == 0 { 1 } else { -1 };
    }
    CycInt::from_exponent_counts(p as u32, &counts)
}

/// `eta(-1) q^3` as a cyclotomic integer, the square every quadratic Gauss sum has.
pub fn gauss_sum_square(field: &CubicField) -> CycInt {
    let minus_one = field.neg(crate::gf::Elem::ONE);
    let v = BigInt::from(field.eta(minus_one)) * BigInt::from(field.size());
    CycInt::from_integer(field.p() as u32, v)
}
