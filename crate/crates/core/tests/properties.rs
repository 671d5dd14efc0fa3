use cyclarc::arcs::{arc_criteria_prime, maruta_szonyi_bound};
use cyclarc::conic::{conic_partition, verify_identity, SumClass};
use cyclarc::numth::{is_prime, prime_power, primes_up_to};
use cyclarc::sieve::PrimeCubic;
use cyclarc::sieve::{psi_classify, psi_classify_with};
use cyclarc::srg::{expected_params, verify_srg, VerifyOptions};
use cyclarc::{build_tower, CubicField};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn field(q: u64) -> CubicField {
    let (p, f) = prime_power(q).unwrap();
    CubicField::new(p, f, 1 << 24).unwrap()
}

#[test]
fn bound_implies_arc_for_small_primes() {
    let mut checked = 0;
    for p in primes_up_to(464).into_iter().filter(|&p| p > 2) {
        let k = p * p + p + 1;
        for m in [3u64, 7, 9, 13, 21] {
            if k % m != 0 {
                continue;
            }
            let w = maruta_szonyi_bound(p, m, p % m).unwrap();
            let (det, cyc) = arc_criteria_prime(p, m).unwrap();
            assert_eq!(det, cyc, "criteria disagree at p={p}, M={m}");
            if w.holds {
                assert!(det, "bound holds but no arc at p={p}, M={m}");
                checked += 1;
            }
        }
    }
    assert!(checked > 50, "only {checked} instances above the bound");
}

#[test]
fn sum_identity_never_violated_on_pure_configs() {
    for q in (3..=31u64).step_by(2).filter(|&q| prime_power(q).is_some()) {
        let f = field(q);
        let k = q * q + q + 1;
        for m in (3..k).step_by(2).filter(|m| k % m == 0) {
            let Ok(part) = conic_partition(&f, m) else {
                continue;
            };
            if !part.pure {
                continue;
            }
            let entries = verify_identity(&f, part.n, &part.x2, &part.half_i2)
                .unwrap_or_else(|e| panic!("q={q}, M={m}: {e}"));
            assert!(entries
                .iter()
                .any(|e| matches!(e.class, SumClass::PlusG | SumClass::MinusG)));
        }
    }
}

#[test]
fn sieve_is_independent_of_generator_choice() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for p in primes_up_to(400).into_iter().filter(|&p| p > 3) {
        for m in [7u64, 13, 31] {
            if (p * p * p - 1) % m != 0 || p % m == 0 {
                continue;
            }
            let base = psi_classify(p, m).unwrap();
            let k = PrimeCubic::new(p).unwrap();
            let pool: Vec<_> = k.order_m_elements(m).unwrap().take(12).collect();
            for _ in 0..3 {
                let eps = pool[rng.gen_range(0..pool.len())];
                let r = psi_classify_with(&k, eps, m);
                assert_eq!(r.membership(), base.membership(), "p={p}, M={m}");
                assert_eq!(r.common_value(), base.common_value());
                assert_eq!(r.pure(), base.pure());
            }
        }
    }
}

#[test]
fn shifted_x_gives_the_same_graph_spectrum() {
    for (q, m) in [(3u64, 1u64), (7, 3)] {
        let t = build_tower(q, 1, 1 << 24).unwrap();
        let a = verify_srg(&t, m, VerifyOptions::default()).unwrap();
        let b = verify_srg(
            &t,
            m,
            VerifyOptions {
                shifted: true,
                ..Default::default()
            },
        )
        .unwrap();
        assert!(a.verdict && b.verdict);
        assert_eq!(a.spectrum, b.spectrum);
        assert_eq!(a.params, expected_params(q, m).unwrap());
    }
}

#[test]
fn impure_instance_is_reported_not_raised() {
    let t = build_tower(19, 1, 1 << 26).unwrap();
    let cert = verify_srg(&t, 3, VerifyOptions::default()).unwrap();
    assert!(cert.checks.arc);
    assert!(!cert.checks.pure);
    assert!(!cert.checks.purity_via_characters);
    let stage = cert.stages.iter().find(|s| s.stage == "purity").unwrap();
    assert!(!stage.ok);
    eprintln!(
        "(19,3): verdict {} spectrum {:?}",
        cert.verdict, cert.spectrum
    );
}

#[test]
fn arc_criteria_reject_non_divisors() {
    assert!(arc_criteria_prime(7, 5).is_err());
    assert!(is_prime(11) && arc_criteria_prime(11, 7).unwrap() == (true, true));
}
