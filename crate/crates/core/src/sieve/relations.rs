use num_integer::gcd;
use serde::Serialize;

use super::field::{Cubic, PrimeCubic};
use super::order_of_two;
use crate::error::{Error, Result};

use crate::numth::{euler_phi, factorize, prime_divisors};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Relation {
    /// `eta(1 + e^l) = eta(1 + e^-l)`.
    ConjugateSymmetry,
    /// `eta(1 + e_t^{sl}) = prod_i eta(1 + e_s^i e_t^l)`.
    NormProduct,
    /// The product over the `<2>`-orbit of `l` is 1.
    OrbitProduct,
    /// The product over half the orbit is `eta(-1)` when `-1` is in `<2>`.
    HalfOrbitProduct,
    /// The `<4>`-coset identity for composite `M`.
    CosetProduct,
}

impl Relation {
    pub const ALL: [Relation; 5] = [
        Relation::ConjugateSymmetry,
        Relation::NormProduct,
        Relation::OrbitProduct,
        Relation::HalfOrbitProduct,
        Relation::CosetProduct,
    ];
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RelationOutcome {
    pub relation: Relation,
    /// `None` when the hypotheses of the relation fail for this `(p, M, l)`.
    pub holds: Option<bool>,
    pub note: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RelationsReport {
    pub p: u64,
    pub m: u64,
    pub ell: u64,
    pub outcomes: Vec<RelationOutcome>,
}

impl RelationsReport {
    pub fn outcome(&self, r: Relation) -> &RelationOutcome {
        self.outcomes
            .iter()
            .find(|o| o.relation == r)
            .expect("every relation is reported")
    }

    /// No applicable relation failed.
    pub fn all_hold(&self) -> bool {
        self.outcomes.iter().all(|o| o.holds != Some(false))
    }
}

struct Ctx<'a> {
    k: &'a PrimeCubic,
    eps: Cubic,
    m: u64,
    ell: u64,
}

impl Ctx<'_> {
    /// `eta(1 + eps^e)`.
    fn eta1(&self, e: u64) -> i8 {
        let x = self.k.pow(self.eps, (e % self.m) as u128);
        self.k.eta(self.k.add(self.k.one(), x))
    }
}

/// The `<4>`-coset transversal `X` of `U_M` with `X, -X, 2X, -2X` covering
/// `U_M`, choosing cosets greedily by least representative.
pub fn canonical_x(m: u64) -> Result<Vec<u64>> {
    let two = order_of_two(m)?;
    if prime_divisors(m).len() < 2 || two.minus_one_in_two || two.order % 2 == 1 {
        return Err(Error::HypothesisNotMet(format!(
            "M = {m} must be composite, not a prime power, with -1 outside an even-order <2>"
        )));
    }
    let mut covered = vec![false; m as usize];
    let mut x = Vec::new();
    for a in 1..m {
        if gcd(a, m) != 1 || covered[a as usize] {
            continue;
        }
        let mut y = a;
        loop {
            x.push(y);
            for z in [y, m - y, 2 * y % m, m - 2 * y % m] {
                covered[z as usize] = true;
            }
            y = 4 * y % m;
            if y == a {
                break;
            }
        }
    }
    x.sort_unstable();
    debug_assert_eq!(x.len() as u64 * 4, euler_phi(m));
    Ok(x)
}

/// `c = |{x in X ∪ 2X (mod M) : (M+1)/2 <= x < M}|`.
pub fn nece_mul_c(m: u64, x: &[u64]) -> u64 {
    let mut union: Vec<u64> = x.iter().flat_map(|&v| [v % m, 2 * v % m]).collect();
    union.sort_unstable();
    union.dedup();
    union.iter().filter(|&&v| v >= (m + 1) / 2).count() as u64
}

fn conjugate_symmetry(c: &Ctx) -> RelationOutcome {
    let holds = c.eta1(c.ell) == c.eta1(c.m - c.ell);
    RelationOutcome {
        relation: Relation::ConjugateSymmetry,
        holds: Some(holds),
        note: String::new(),
    }
}

/// Odd `s > 1` dividing `p^3 - 1` with `M` not dividing `s`: the least such
/// prime, plus every proper prime-power divisor `r^j` of a prime-power `M`.
fn norm_product_moduli(p: u64, m: u64) -> Vec<u64> {
    let order = p * p * p - 1;
    let mut out: Vec<u64> = prime_divisors(order)
        .into_iter()
        .filter(|&s| s % 2 == 1 && s % m != 0)
        .take(1)
        .collect();
    if let [(r, e)] = factorize(m)[..] {
        out.extend((1..e).map(|j| r.pow(j)));
    }
    out.sort_unstable();
    out.dedup();
    out
}

fn norm_product(c: &Ctx) -> Result<RelationOutcome> {
    let moduli = norm_product_moduli(c.k.p(), c.m);
    if moduli.is_empty() {
        return Ok(RelationOutcome {
            relation: Relation::NormProduct,
            holds: None,
            note: "no admissible s".into(),
        });
    }
    let k = c.k;
    let et = k.pow(c.eps, c.ell as u128);
    let mut holds = true;
    for &s in &moduli {
        let es = k.epsilon(s)?;
        let lhs = k.eta(k.add(k.one(), k.pow(et, s as u128)));
        let mut rhs = 1i8;
        let mut y = et;
        for _ in 0..s {
            rhs *= k.eta(k.add(k.one(), y));
            y = k.mul(y, es);
        }
        holds &= lhs == rhs;
    }
    Ok(RelationOutcome {
        relation: Relation::NormProduct,
        holds: Some(holds),
        note: format!("s in {moduli:?}"),
    })
}

fn orbit_product(c: &Ctx, half: bool) -> Result<RelationOutcome> {
    let two = order_of_two(c.m)?;
    let relation = if half {
        Relation::HalfOrbitProduct
    } else {
        Relation::OrbitProduct
    };
    if half && !two.minus_one_in_two {
        return Ok(RelationOutcome {
            relation,
            holds: None,
            note: "-1 is not a power of 2".into(),
        });
    }
    let len = if half { two.order / 2 } else { two.order };
    let mut prod = 1i8;
    let mut e = c.ell % c.m;
    for _ in 0..len {
        prod *= c.eta1(e);
        e = 2 * e % c.m;
    }
    let expected = if half { c.k.eta(c.k.from_int(-1)) } else { 1 };
    Ok(RelationOutcome {
        relation,
        holds: Some(prod == expected),
        note: String::new(),
    })
}

fn coset_product(c: &Ctx) -> RelationOutcome {
    let x = match canonical_x(c.m) {
        Ok(x) => x,
        Err(e) => {
            return RelationOutcome {
                relation: Relation::CosetProduct,
                holds: None,
                note: e.to_string(),
            }
        }
    };
    let cc = nece_mul_c(c.m, &x);
    let prod: i8 = x.iter().map(|&v| c.eta1(2 * v % c.m * c.ell)).product();
    let exponent = euler_phi(c.m) / 4 + cc;
    let eta_m1 = c.k.eta(c.k.from_int(-1));
    let expected = if exponent % 2 == 0 { 1 } else { eta_m1 };
    RelationOutcome {
        relation: Relation::CosetProduct,
        holds: Some(prod == expected),
        note: format!("X = {x:?}, c = {cc}"),
    }
}

/// Evaluates every relation for `epsilon_M^ell` in `F_{p^3}`.
pub fn relations_check(p: u64, m: u64, ell: u64) -> Result<RelationsReport> {
    let k = PrimeCubic::new(p)?;
    relations_check_with(&k, None, m, ell)
}

/// As [`relations_check`], optionally with a chosen `epsilon_M`.
pub fn relations_check_with(
    k: &PrimeCubic,
    eps: Option<Cubic>,
    m: u64,
    ell: u64,
) -> Result<RelationsReport> {
    if m < 3 || m % 2 == 0 || m % k.p() == 0 {
        return Err(Error::BadParameters(format!(
            "M = {m} must be odd, >= 3 and prime to p"
        )));
    }
    if ell == 0 || ell >= m || gcd(ell, m) != 1 {
        return Err(Error::HypothesisNotMet(format!(
            "l = {ell} must be a unit below M = {m}"
        )));
    }
    let eps = match eps {
        Some(e) => e,
        None => k.epsilon(m)?,
    };
    let c = Ctx { k, eps, m, ell };
    let outcomes = vec![
        conjugate_symmetry(&c),
        norm_product(&c)?,
        orbit_product(&c, false)?,
        orbit_product(&c, true)?,
        coset_product(&c),
    ];
    Ok(RelationsReport {
        p: k.p(),
        m,
        ell,
        outcomes,
    })
}
