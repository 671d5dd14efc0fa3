//! The connection set `D_X` in `F_{q^6}` and certification of the strongly
//! regular Cayley graph `Cay(F_{q^6}, D_X)`.

use std::collections::BTreeSet;

use num_integer::Roots;
use serde::Serialize;

use crate::arcs::arc_report;
use crate::conic::{
    partition_with, purity_via_characters, scale_set, verify_identity, ConicPartition,
};
use crate::cyclo::{period_spectrum, rational_value, ClassHistogram};
use crate::error::{Error, Result};
use crate::gf::{FieldTower, SexticElem};
use crate::numth::inv_mod;

/// `(v, k, lambda, mu)` with `r = M(q^2-1)/2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct SrgParams {
    pub v: u64,
    pub k: u64,
    pub lambda: i64,
    pub mu: u64,
    pub r: u64,
}

/// Nonprincipal eigenvalues with their multiplicities.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Multiplicities {
    pub theta1: i64,
    pub m1: u64,
    pub theta2: i64,
    pub m2: u64,
}

impl SrgParams {
    /// The tuple for `(q, M)` with no hypothesis check.
    pub fn formula(q: u64, m: u64) -> Self {
        let r = m * (q * q - 1) / 2;
        let q3 = (q * q * q) as i64;
        let ri = r as i64;
        SrgParams {
            v: q.pow(6),
            k: r * (q * q * q + 1),
            lambda: -q3 + ri * ri + 3 * ri,
            mu: r * r + r,
            r,
        }
    }

    /// Solves `x^2 - (lambda - mu) x - (k - mu) = 0` for the eigenvalues, then
    /// `m1 + m2 = v - 1`, `k + m1 theta1 + m2 theta2 = 0` for the
    /// multiplicities. `None` if either step has no integral solution.
    pub fn multiplicities(&self) -> Option<Multiplicities> {
        let b = self.lambda - self.mu as i64;
        let c = self.k as i64 - self.mu as i64;
        let disc = b * b + 4 * c;
        if disc < 0 {
            return None;
        }
        let s = disc.sqrt();
        if s * s != disc || (b + s) % 2 != 0 {
            return None;
        }
        let (t1, t2) = ((b + s) / 2, (b - s) / 2);
        let v1 = self.v as i64 - 1;
        let k = self.k as i64;
        // m1 (t1 - t2) = -k - (v-1) t2
        let num = -k - v1 * t2;
        if s == 0 || num % s != 0 {
            return None;
        }
        let m1 = num / s;
        let m2 = v1 - m1;
        if m1 < 0 || m2 < 0 {
            return None;
        }
        Some(Multiplicities {
            theta1: t1,
            m1: m1 as u64,
            theta2: t2,
            m2: m2 as u64,
        })
    }

    /// `[(k, 1), (theta1, m1), (theta2, m2)]`, values descending.
    pub fn spectrum(&self) -> Option<Vec<(i64, u64)>> {
        let m = self.multiplicities()?;
        Some(vec![(self.k as i64, 1), (m.theta1, m.m1), (m.theta2, m.m2)])
    }
}

/// The parameter tuple, for `q = 3 mod 4`, `M` odd dividing `q^2+q+1`.
pub fn expected_params(q: u64, m: u64) -> Result<SrgParams> {
    if q % 4 != 3 || m % 2 == 0 || (q * q + q + 1) % m != 0 {
        return Err(Error::BadParameters(format!(
            "need q = 3 mod 4 and odd M | q^2+q+1, got q={q}, M={m}"
        )));
    }
    Ok(SrgParams::formula(q, m))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConnectionSpec {
    pub q: u64,
    pub n: u64,
    pub m: u64,
    pub t1_prime: Vec<u64>,
    pub t2_prime: Vec<u64>,
    pub y_x: Vec<u64>,
    pub params: SrgParams,
}

impl ConnectionSpec {
    /// `|D_X| = |Y_X| (q^6 - 1) / 4N`.
    pub fn connection_size(&self) -> u64 {
        self.y_x.len() as u64 * (self.q.pow(6) - 1) / (4 * self.n)
    }
}

/// Inverts `X = 2 T1' ∪ (2 T2' + N) mod 2N`.
pub fn split_x(x: &[u64], n: u64) -> Result<(Vec<u64>, Vec<u64>)> {
    let mut t1 = BTreeSet::new();
    let mut t2 = BTreeSet::new();
    for &v in x {
        if v >= 2 * n {
            return Err(Error::MalformedX(format!(
                "{v} is not below 2N = {}",
                2 * n
            )));
        }
        let fresh = if v % 2 == 0 {
            t1.insert(v / 2)
        } else {
            t2.insert((v + n) % (2 * n) / 2)
        };
        if !fresh {
            return Err(Error::MalformedX(format!("{v} repeats")));
        }
    }
    if let Some(t) = t1.intersection(&t2).next() {
        return Err(Error::MalformedX(format!(
            "{t} lies in both the even and the odd part"
        )));
    }
    Ok((t1.into_iter().collect(), t2.into_iter().collect()))
}

/// `Y_X` from `X` (in `Z_{2N}`) and `I_1` (in `Z_N`), ascending.
pub fn build_yx(x: &[u64], i1: &[u64], n: u64) -> Result<Vec<u64>> {
    let (t1, t2) = split_x(x, n)?;
    Ok(assemble_yx(&t1, &t2, i1, n))
}

fn assemble_yx(t1: &[u64], t2: &[u64], i1: &[u64], n: u64) -> Vec<u64> {
    let four_n = 4 * n;
    let quarter = inv_mod(4, n).expect("N is odd");
    let mut y = BTreeSet::new();
    let mut put = |i: u64, j: u64| {
        y.insert((n * i + 4 * j) % four_n);
    };
    for &j in t1 {
        put(0, j);
        put(3, j);
    }
    for &j in t2 {
        put(1, j);
        put(2, j);
    }
    for j in scale_set(i1, quarter, n) {
        for i in 0..4 {
            put(i, j);
        }
    }
    y.into_iter().collect()
}

/// The connection data of the conic construction for `part`.
pub fn connection_spec(part: &ConicPartition) -> Result<ConnectionSpec> {
    let n = part.n;
    let (t1, t2) = split_x(&part.x2, n)?;
    let i1 = scale_set(&part.half_i1, 2, n);
    let y_x = assemble_yx(&t1, &t2, &i1, n);
    Ok(ConnectionSpec {
        q: part.q,
        n,
        m: part.m,
        t1_prime: t1,
        t2_prime: t2,
        y_x,
        params: SrgParams::formula(part.q, part.m),
    })
}

/// Eigenvalues `psi_a(D_X)` over one `a` per class `C_t^{(4N)}` plus `a = 0`,
/// collected as `(value, multiplicity)`, values descending.
pub fn spectrum_via_characters(
    tower: &FieldTower,
    spec: &ConnectionSpec,
) -> Result<Vec<(i64, u64)>> {
    let four_n = 4 * spec.n;
    let hist = ClassHistogram::sextic(tower, four_n)?;
    spectrum_from_histogram(&hist, spec)
}

pub fn spectrum_from_histogram(
    hist: &ClassHistogram,
    spec: &ConnectionSpec,
) -> Result<Vec<(i64, u64)>> {
    let four_n = 4 * spec.n;
    let class_size = (spec.q.pow(6) - 1) / four_n;
    let mut values = std::collections::BTreeMap::new();
    *values.entry(spec.connection_size() as i64).or_insert(0u64) += 1;
    for t in 0..four_n {
        let counts = hist.union_counts(t, spec.y_x.iter().copied());
        let v = rational_value(&counts).ok_or(Error::IrrationalEigenvalue(t))?;
        *values.entry(v).or_insert(0) += class_size;
    }
    Ok(values.into_iter().rev().collect())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AdjacencyObservation {
    pub degree: u64,
    /// Common-neighbour counts of `(0, y)` over the sampled adjacent `y`.
    pub lambda_values: Vec<u64>,
    /// The same over the sampled nonadjacent `y != 0`.
    pub mu_values: Vec<u64>,
    pub adjacent_pairs: u64,
    pub nonadjacent_pairs: u64,
    pub minus_one_in_c0: bool,
    pub inverse_closed: bool,
}

impl AdjacencyObservation {
    pub fn lambda(&self) -> Option<u64> {
        match self.lambda_values[..] {
            [l] => Some(l),
            _ => None,
        }
    }

    pub fn mu(&self) -> Option<u64> {
        match self.mu_values[..] {
            [m] => Some(m),
            _ => None,
        }
    }
}

/// Largest field handled by [`direct_adjacency_oracle`].
pub const DIRECT_LIMIT: u64 = 1_000_000;

/// Counts common neighbours in `Cay(F_{q^6}, D_X)` through a dense membership
/// index. By translation invariance only pairs `(0, y)` are needed; with
/// `sample_size = None` every `y` is visited, otherwise up to `sample_size`
/// adjacent and as many nonadjacent `y`, evenly spaced. `Some(0)` observes
/// nothing and returns `None`.
pub fn direct_adjacency_oracle(
    tower: &FieldTower,
    spec: &ConnectionSpec,
    sample_size: Option<usize>,
) -> Result<Option<AdjacencyObservation>> {
    let size = tower.size();
    if size > DIRECT_LIMIT {
        return Err(Error::TooLargeForDirect(size));
    }
    if sample_size == Some(0) {
        return Ok(None);
    }
    let four_n = 4 * spec.n;
    let in_y: Vec<bool> = {
        let mut v = vec![false; four_n as usize];
        for &y in &spec.y_x {
            v[y as usize] = true;
        }
        v
    };
    let log = tower.log_table();
    let member: Vec<bool> = log
        .iter()
        .map(|&l| l != u32::MAX && in_y[(l as u64 % four_n) as usize])
        .collect();
    let d: Vec<SexticElem> = (0..size)
        .filter(|&c| member[c as usize])
        .map(|c| tower.from_code(c))
        .collect();
    let minus_one = tower.neg(SexticElem::ONE);
    let minus_one_in_c0 = tower.dlog(minus_one)? % four_n == 0;
    let inverse_closed = d.iter().all(|&x| member[tower.code(tower.neg(x)) as usize]);

    let common = |y: SexticElem| -> u64 {
        d.iter()
            .filter(|&&x| member[tower.code(tower.sub(y, x)) as usize])
            .count() as u64
    };
    let nonadjacent: Vec<u64> = (1..size).filter(|&c| !member[c as usize]).collect();
    let adjacent: Vec<u64> = d.iter().map(|&x| tower.code(x)).collect();
    let pick = |all: &[u64]| -> Vec<u64> {
        match sample_size {
            Some(s) if s < all.len() => (0..s).map(|i| all[i * all.len() / s]).collect(),
            _ => all.to_vec(),
        }
    };
    let adj = pick(&adjacent);
    let non = pick(&nonadjacent);
    let lambda: BTreeSet<u64> = adj.iter().map(|&c| common(tower.from_code(c))).collect();
    let mu: BTreeSet<u64> = non.iter().map(|&c| common(tower.from_code(c))).collect();
    Ok(Some(AdjacencyObservation {
        degree: d.len() as u64,
        lambda_values: lambda.into_iter().collect(),
        mu_values: mu.into_iter().collect(),
        adjacent_pairs: adj.len() as u64,
        nonadjacent_pairs: non.len() as u64,
        minus_one_in_c0,
        inverse_closed,
    }))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StageResult {
    pub stage: String,
    pub ok: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Provenance {
    /// Minimal polynomial of `gamma` over `F_p`, ascending.
    pub defining_poly: Vec<u64>,
    /// `gamma = re + im sqrt(omega)` as coordinate codes in `F_{q^3}`.
    pub gamma: [u32; 2],
    /// Defining polynomial of `F_{q^3}` over `F_p`, ascending.
    pub cubic_modulus: Vec<u64>,
    /// `omega` in coordinates over `F_p`.
    pub omega: Vec<u64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Checks {
    pub arc: bool,
    pub three_valued: bool,
    pub pure: bool,
    pub purity_via_characters: bool,
    pub identity: bool,
    pub eigenvalues: bool,
    pub direct: Option<AdjacencyObservation>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SrgCertificate {
    pub schema: u32,
    pub q: u64,
    #[serde(rename = "M")]
    pub m: u64,
    #[serde(rename = "N")]
    pub n: u64,
    /// `X_Q` was replaced by `X_Q + (q^2+q+1)`.
    pub shifted: bool,
    pub params: SrgParams,
    pub spectrum: Vec<(i64, u64)>,
    pub expected_spectrum: Vec<(i64, u64)>,
    pub method: String,
    pub checks: Checks,
    pub stages: Vec<StageResult>,
    pub connection: Option<ConnectionSpec>,
    pub verdict: bool,
    pub generator_provenance: Provenance,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct VerifyOptions {
    /// Use `X_Q + (q^2+q+1)` in place of `X_Q`.
    pub shifted: bool,
    /// Run the direct adjacency oracle with this sample size (`None` = off,
    /// `Some(None)` = every pair).
    pub direct: Option<Option<usize>>,
    /// Stop after the first failing stage.
    pub fail_fast: bool,
}

fn provenance(tower: &FieldTower) -> Provenance {
    let g = tower.gamma();
    let k = tower.cubic();
    Provenance {
        defining_poly: tower.gamma_minimal_polynomial(),
        gamma: [g.re.code(), g.im.code()],
        cubic_modulus: k.modulus().to_vec(),
        omega: k.omega_coords().to_vec(),
    }
}

/// Re-derives every hypothesis of the construction for `(q, M)` and checks
/// the spectrum of `Cay(F_{q^6}, D_X)`. Failures are recorded, not raised.
pub fn verify_srg(tower: &FieldTower, m: u64, opts: VerifyOptions) -> Result<SrgCertificate> {
    let field = tower.cubic();
    let q = tower.q();
    let kk = q * q + q + 1;
    if m == 0 || kk % m != 0 {
        return Err(Error::BadParameters(format!(
            "M = {m} must divide q^2+q+1 = {kk}"
        )));
    }
    let n = kk / m;
    let params = SrgParams::formula(q, m);
    let expected_spectrum = params.spectrum().unwrap_or_default();
    let mut stages = vec![StageResult {
        stage: "tower".into(),
        ok: true,
        detail: format!("F_{{{q}^6}} with gamma^(q^3+1) = omega"),
    }];
    let mut checks = Checks {
        arc: false,
        three_valued: false,
        pure: false,
        purity_via_characters: false,
        identity: false,
        eigenvalues: false,
        direct: None,
    };
    let mut cert = SrgCertificate {
        schema: 1,
        q,
        m,
        n,
        shifted: opts.shifted,
        params,
        spectrum: Vec::new(),
        expected_spectrum: expected_spectrum.clone(),
        method: "character_sums".into(),
        checks: checks.clone(),
        stages: Vec::new(),
        connection: None,
        verdict: false,
        generator_provenance: provenance(tower),
    };
    let finish = |mut cert: SrgCertificate, checks: Checks, stages: Vec<StageResult>| {
        cert.checks = checks;
        cert.stages = stages;
        cert
    };

    let arc = arc_report(field, m)?;
    checks.arc = arc.is_arc && arc.criteria_agree();
    stages.push(StageResult {
        stage: "arc".into(),
        ok: checks.arc,
        detail: format!("{:?}", arc.criterion_results),
    });
    if opts.fail_fast && !checks.arc {
        return Ok(finish(cert, checks, stages));
    }

    let spectrum = period_spectrum(field, n, m)?;
    checks.three_valued = spectrum.arc_valued;
    stages.push(StageResult {
        stage: "spectrum_three_valued".into(),
        ok: spectrum.arc_valued,
        detail: format!("{:?}", spectrum.multiplicities()),
    });
    if !spectrum.arc_valued {
        return Ok(finish(cert, checks, stages));
    }

    let mut part = partition_with(field, &spectrum)?;
    if opts.shifted {
        let k2 = 2 * kk;
        let shifted: Vec<u64> = part.x_q.iter().map(|x| (x + kk) % k2).collect();
        let (x1, x2) = crate::conic::reduce_partition(&shifted, &spectrum)?;
        part.pure = crate::conic::purity_check(&x1);
        part.x_q = scale_set(&shifted, 1, k2);
        part.x1 = x1;
        part.x2 = x2;
    }
    checks.pure = part.pure;
    checks.purity_via_characters = purity_via_characters(field, m);
    stages.push(StageResult {
        stage: "purity".into(),
        ok: part.pure && checks.purity_via_characters,
        detail: format!("X1 = {:?}", part.x1),
    });
    if opts.fail_fast && !stages[stages.len() - 1].ok {
        return Ok(finish(cert, checks, stages));
    }

    let identity = verify_identity(field, n, &part.x2, &part.half_i2);
    checks.identity = identity.is_ok();
    stages.push(StageResult {
        stage: "identity".into(),
        ok: checks.identity,
        detail: match &identity {
            Ok(e) => format!("{} values of c classified", e.len()),
            Err(e) => e.to_string(),
        },
    });
    if opts.fail_fast && !checks.identity {
        return Ok(finish(cert, checks, stages));
    }

    let spec = connection_spec(&part)?;
    let observed = spectrum_via_characters(tower, &spec);
    let (ok, detail) = match &observed {
        Ok(s) => (
            *s == expected_spectrum && !expected_spectrum.is_empty(),
            format!("{s:?}"),
        ),
        Err(e) => (false, e.to_string()),
    };
    checks.eigenvalues = ok;
    stages.push(StageResult {
        stage: "eigenvalues".into(),
        ok,
        detail,
    });
    cert.spectrum = observed.unwrap_or_default();

    if let Some(sample) = opts.direct {
        let obs = direct_adjacency_oracle(tower, &spec, sample)?;
        let ok = obs.as_ref().is_none_or(|o| {
            o.lambda() == Some(params.lambda as u64)
                && o.mu() == Some(params.mu)
                && o.degree == params.k
        });
        stages.push(StageResult {
            stage: "direct_adjacency".into(),
            ok,
            detail: format!("{obs:?}"),
        });
        checks.direct = obs;
    }

    cert.verdict = checks.eigenvalues;
    cert.connection = Some(spec);
    Ok(finish(cert, checks, stages))
}
