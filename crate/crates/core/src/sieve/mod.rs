//! Quadratic-character data of `1 + epsilon_M^i` in `F_{p^3}` over ranges of primes.

mod field;
mod relations;

use rayon::prelude::*;
use serde::Serialize;

pub use field::{Cubic, PrimeCubic, MAX_PRIME};
pub use relations::{
    canonical_x, nece_mul_c, relations_check, relations_check_with, Relation, RelationOutcome,
    RelationsReport,
};

use crate::error::{Error, Result};
use crate::numth::{mult_order, primes_up_to};

/// All `h` in `[1, M-1]` with `M | h^2 + h + 1`.
pub fn solve_h(m: u64) -> Vec<u64> {
    (1..m).filter(|h| (h * h + h + 1) % m == 0).collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct TwoOrder {
    pub m: u64,
    /// `ord_M(2)`.
    pub order: u64,
    pub minus_one_in_two: bool,
    pub odd: bool,
}

pub fn order_of_two(m: u64) -> Result<TwoOrder> {
    if m < 3 || m % 2 == 0 {
        return Err(Error::BadParameters(format!(
            "M = {m} must be odd and at least 3"
        )));
    }
    let order = mult_order(2, m).expect("2 is a unit modulo odd M");
    let minus_one_in_two = order % 2 == 0 && crate::numth::pow_mod(2, order / 2, m) == m - 1;
    Ok(TwoOrder {
        m,
        order,
        minus_one_in_two,
        odd: order % 2 == 1,
    })
}

/// The data `eta(1 + epsilon_M^i)`, `eta(2)`, `eta(-1)` for one prime.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PsiRecord {
    pub p: u64,
    pub m: u64,
    pub h: u64,
    /// `eta(1 + epsilon_M^i)` for `i = 1, .., M-1`.
    pub eta_values: Vec<i8>,
    pub eta2: i8,
    pub eta_minus1: i8,
}

impl PsiRecord {
    /// The common value of all `eta(1 + epsilon_M^i)`, if there is one.
    pub fn common_value(&self) -> Option<i8> {
        let first = *self.eta_values.first()?;
        self.eta_values.iter().all(|&v| v == first).then_some(first)
    }

    /// `(alpha, beta)` with `p` in `Psi_{M,h,alpha,beta}`: all values equal
    /// `alpha`, `eta(2) = -alpha`, `eta(-1) = beta`.
    pub fn membership(&self) -> Option<(i8, i8)> {
        let a = self.common_value()?;
        (self.eta2 == -a).then_some((a, self.eta_minus1))
    }

    /// The cell `(alpha, beta)` ignoring `eta(2)`.
    pub fn cell(&self) -> Option<(i8, i8)> {
        self.common_value().map(|a| (a, self.eta_minus1))
    }

    /// `eta(2) != eta(1 + epsilon_M^i)` for every `i`.
    pub fn pure(&self) -> bool {
        self.eta_values.iter().all(|&v| v != self.eta2)
    }
}

/// Classifies `p` using the canonical `epsilon_M`.
pub fn psi_classify(p: u64, m: u64) -> Result<PsiRecord> {
    let k = PrimeCubic::new(p)?;
    if m < 3 || m % 2 == 0 || m % p == 0 {
        return Err(Error::BadParameters(format!(
            "M = {m} must be odd, >= 3 and prime to p"
        )));
    }
    let eps = k.epsilon(m)?;
    Ok(psi_classify_with(&k, eps, m))
}

/// Classifies with a caller-chosen element `eps` of order `m`.
pub fn psi_classify_with(k: &PrimeCubic, eps: Cubic, m: u64) -> PsiRecord {
    let one = k.one();
    let mut eta_values = Vec::with_capacity(m as usize - 1);
    let mut e = eps;
    for _ in 1..m {
        eta_values.push(k.eta(k.add(one, e)));
        e = k.mul(e, eps);
    }
    PsiRecord {
        p: k.p(),
        m,
        h: k.p() % m,
        eta_values,
        eta2: k.eta(k.from_int(2)),
        eta_minus1: k.eta(k.from_int(-1)),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CellCount {
    pub alpha: i8,
    pub beta: i8,
    pub count: u64,
}

/// Counts per `(alpha, beta)` in the order `(1,-1), (1,1), (-1,-1), (-1,1)`.
fn cell_counts(
    records: &[PsiRecord],
    key: impl Fn(&PsiRecord) -> Option<(i8, i8)>,
) -> Vec<CellCount> {
    [(1, -1), (1, 1), (-1, -1), (-1, 1)]
        .into_iter()
        .map(|(alpha, beta)| CellCount {
            alpha,
            beta,
            count: records
                .iter()
                .filter(|r| key(r) == Some((alpha, beta)))
                .count() as u64,
        })
        .collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct SieveReport {
    pub m: u64,
    pub h: u64,
    pub alpha: i8,
    pub beta: i8,
    pub bound: u64,
    /// Every odd prime `p <= bound` with `p = h mod M`.
    pub records: Vec<PsiRecord>,
    /// Primes of `records` lying in `Psi_{M,h,alpha,beta}`.
    pub members: Vec<u64>,
    /// Membership counts for all four cells over `records`.
    pub cells: Vec<CellCount>,
}

impl SieveReport {
    /// Density of the requested cell as `(count, total)`.
    pub fn density(&self) -> (u64, u64) {
        (self.members.len() as u64, self.records.len() as u64)
    }
}

fn check_sign(v: i8) -> Result<()> {
    match v {
        1 | -1 => Ok(()),
        _ => Err(Error::BadParameters(format!("sign {v} must be 1 or -1"))),
    }
}

/// Classifies every odd prime `p <= bound` with `p = h mod M`, in parallel.
pub fn sieve_range(m: u64, h: u64, alpha: i8, beta: i8, bound: u64) -> Result<SieveReport> {
    if m < 3 || m % 2 == 0 {
        return Err(Error::BadParameters(format!(
            "M = {m} must be odd and at least 3"
        )));
    }
    if !solve_h(m).contains(&h) {
        return Err(Error::BadParameters(format!(
            "M = {m} does not divide h^2+h+1 for h = {h}"
        )));
    }
    check_sign(alpha)?;
    check_sign(beta)?;
    if bound >= MAX_PRIME {
        return Err(Error::TooLarge {
            size: bound as u128,
            limit: MAX_PRIME as u128,
        });
    }
    let primes: Vec<u64> = primes_up_to(bound)
        .into_iter()
        .filter(|&p| p > 2 && p % m == h)
        .collect();
    let records = primes
        .par_iter()
        .map(|&p| psi_classify(p, m))
        .collect::<Result<Vec<_>>>()?;
    let members = records
        .iter()
        .filter(|r| r.membership() == Some((alpha, beta)))
        .map(|r| r.p)
        .collect();
    let cells = cell_counts(&records, PsiRecord::membership);
    Ok(SieveReport {
        m,
        h,
        alpha,
        beta,
        bound,
        records,
        members,
        cells,
    })
}

/// A congruence description of the primes for which `X_1` is pure.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CongruenceClasses {
    pub modulus: u64,
    pub classes: Vec<u64>,
}

impl CongruenceClasses {
    pub fn contains(&self, p: u64) -> bool {
        self.classes.contains(&(p % self.modulus))
    }
}

/// The proven classes for `M` in `{3, 7, 21}`.
pub fn stated_classes(m: u64) -> Option<CongruenceClasses> {
    let (modulus, classes) = match m {
        3 => (24, vec![7, 13]),
        7 => (56, vec![11, 37, 51, 53]),
        21 => (168, vec![37, 109]),
        _ => return None,
    };
    Some(CongruenceClasses { modulus, classes })
}

/// The variant of the `M = 7` classes printed with modulus 54.
pub fn printed_variant(m: u64) -> Option<CongruenceClasses> {
    (m == 7).then(|| CongruenceClasses {
        modulus: 54,
        classes: vec![11, 37, 51, 53],
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct CongruenceEntry {
    pub p: u64,
    pub pure: bool,
    pub predicted: bool,
    pub printed_predicted: Option<bool>,
}

#[derive(Clone, Debug, Serialize)]
pub struct CongruenceReport {
    pub m: u64,
    pub bound: u64,
    pub classes: CongruenceClasses,
    pub printed: Option<CongruenceClasses>,
    pub entries: Vec<CongruenceEntry>,
    /// Primes where the direct test and `classes` disagree.
    pub discrepancies: Vec<u64>,
    /// Primes where the direct test and `printed` disagree.
    pub printed_discrepancies: Vec<u64>,
}

impl CongruenceReport {
    pub fn agrees(&self) -> bool {
        self.discrepancies.is_empty()
    }

    pub fn printed_agrees(&self) -> Option<bool> {
        self.printed
            .as_ref()
            .map(|_| self.printed_discrepancies.is_empty())
    }
}

/// Tests purity directly for every admissible prime `p <= bound` (odd, with
/// `p mod M` in [`solve_h`]) and compares with the congruence classes.
pub fn congruence_characterization(m: u64, bound: u64) -> Result<CongruenceReport> {
    let classes = stated_classes(m)
        .ok_or_else(|| Error::BadParameters(format!("no congruence description for M = {m}")))?;
    let printed = printed_variant(m);
    let hs = solve_h(m);
    let primes: Vec<u64> = primes_up_to(bound)
        .into_iter()
        .filter(|&p| p > 2 && hs.contains(&(p % m)))
        .collect();
    let entries = primes
        .par_iter()
        .map(|&p| {
            let r = psi_classify(p, m)?;
            Ok(CongruenceEntry {
                p,
                pure: r.pure(),
                predicted: classes.contains(p),
                printed_predicted: printed.as_ref().map(|c| c.contains(p)),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let discrepancies = entries
        .iter()
        .filter(|e| e.pure != e.predicted)
        .map(|e| e.p)
        .collect();
    let printed_discrepancies = entries
        .iter()
        .filter(|e| e.printed_predicted.is_some_and(|v| v != e.pure))
        .map(|e| e.p)
        .collect();
    Ok(CongruenceReport {
        m,
        bound,
        classes,
        printed,
        entries,
        discrepancies,
        printed_discrepancies,
    })
}

/// A cell `(alpha, beta)` forced empty by the orbit relations, with the case
/// number of the hypothesis pattern that empties it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PredictedEmpty {
    pub case: u8,
    pub alpha: i8,
    pub beta: i8,
}

/// Cells predicted empty from `ord_M(2)` alone.
pub fn predicted_empty(two: &TwoOrder) -> Vec<PredictedEmpty> {
    let mut out = Vec::new();
    let half_even = two.order % 4 == 0;
    if two.minus_one_in_two {
        out.push(PredictedEmpty {
            case: 1,
            alpha: 1,
            beta: -1,
        });
        if half_even {
            out.push(PredictedEmpty {
                case: 2,
                alpha: -1,
                beta: -1,
            });
        } else {
            out.push(PredictedEmpty {
                case: 3,
                alpha: -1,
                beta: 1,
            });
        }
    }
    if two.odd {
        out.push(PredictedEmpty {
            case: 4,
            alpha: -1,
            beta: 1,
        });
        out.push(PredictedEmpty {
            case: 4,
            alpha: -1,
            beta: -1,
        });
    }
    out
}

#[derive(Clone, Debug, Serialize)]
pub struct EmptinessReport {
    pub m: u64,
    pub bound: u64,
    pub two: TwoOrder,
    pub predicted: Vec<PredictedEmpty>,
    /// Number of primes examined.
    pub population: u64,
    /// Counts for all four cells, ignoring `eta(2)`.
    pub cells: Vec<CellCount>,
    /// Primes found in a cell predicted empty.
    pub violations: Vec<(u64, i8, i8)>,
}

impl EmptinessReport {
    pub fn confirmed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Confirms [`predicted_empty`] on every odd prime `p <= bound` with `p` prime
/// to `M` and `M | p^3 - 1`, where `epsilon_M` lives in `F_{p^3}`.
pub fn emptiness_check(m: u64, bound: u64) -> Result<EmptinessReport> {
    let two = order_of_two(m)?;
    let predicted = predicted_empty(&two);
    let primes: Vec<u64> = primes_up_to(bound)
        .into_iter()
        .filter(|&p| p > 2 && m % p != 0 && crate::numth::pow_mod(p % m, 3, m) == 1 % m)
        .collect();
    let records = primes
        .par_iter()
        .map(|&p| psi_classify(p, m))
        .collect::<Result<Vec<_>>>()?;
    let violations = records
        .iter()
        .filter_map(|r| {
            let (a, b) = r.cell()?;
            predicted
                .iter()
                .any(|c| (c.alpha, c.beta) == (a, b))
                .then_some((r.p, a, b))
        })
        .collect();
    Ok(EmptinessReport {
        m,
        bound,
        two,
        predicted,
        population: records.len() as u64,
        cells: cell_counts(&records, PsiRecord::cell),
        violations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn h_solutions() {
        assert_eq!(solve_h(3), vec![1]);
        assert_eq!(solve_h(7), vec![2, 4]);
        assert_eq!(solve_h(21), vec![4, 16]);
        assert_eq!(solve_h(31), vec![5, 25]);
        assert_eq!(solve_h(49), vec![18, 30]);
        for m in [5, 9, 17] {
            assert!(solve_h(m).is_empty());
        }
    }

    #[test]
    fn two_orders() {
        let t = order_of_two(7).unwrap();
        assert_eq!((t.order, t.odd, t.minus_one_in_two), (3, true, false));
        let t = order_of_two(5).unwrap();
        assert_eq!((t.order, t.odd, t.minus_one_in_two), (4, false, true));
        let t = order_of_two(9).unwrap();
        assert_eq!((t.order, t.minus_one_in_two), (6, true));
        let t = order_of_two(21).unwrap();
        assert_eq!((t.order, t.minus_one_in_two), (6, false));
        for m in [7, 31, 49, 73, 79, 103, 127, 151, 199] {
            assert!(order_of_two(m).unwrap().odd, "M = {m}");
        }
        assert!(order_of_two(4).is_err());
    }

    #[test]
    fn classify_small_primes() {
        let r = psi_classify(7, 3).unwrap();
        assert_eq!(r.membership(), Some((-1, -1)));
        assert_eq!(r.eta2, 1);
        let r = psi_classify(11, 7).unwrap();
        assert_eq!(r.membership(), Some((1, -1)));
        assert_eq!(r.eta_values, vec![1; 6]);
        let r = psi_classify(13, 3).unwrap();
        assert_eq!(r.eta_minus1, 1);
        assert_eq!(
            psi_classify(13, 7),
            Err(Error::NoOrderMElement { p: 13, m: 7 })
        );
    }

    #[test]
    fn eta_minus_one_tracks_p_mod_4() {
        for p in primes_up_to(300)
            .into_iter()
            .filter(|&p| p > 3 && p % 3 == 1)
        {
            let r = psi_classify(p, 3).unwrap();
            assert_eq!(r.eta_minus1 == -1, p % 4 == 3, "p = {p}");
        }
    }

    #[test]
    fn small_sieves() {
        let s = sieve_range(3, 1, -1, -1, 100).unwrap();
        assert_eq!(s.members, vec![7, 31, 79]);
        let s = sieve_range(7, 4, 1, -1, 200).unwrap();
        assert_eq!(s.members, vec![11, 67, 179]);
        assert!(s.members.iter().all(|p| p % 56 == 11));
        assert_eq!(s.density(), (3, s.records.len() as u64));
        assert!(sieve_range(7, 3, 1, -1, 100).is_err());
    }
}
