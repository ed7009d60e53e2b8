//! Property suites and oracles shared by the `properties` and `acceptance`
//! targets. Each suite runs under a fixed seed, printed on stderr.

#![allow(dead_code)]

use std::sync::{Arc, OnceLock};

use chernvan::chern::{
    dual_flip, is_homogeneous, log_cotangent_total, total_mul, LogCotangent, TotalChernClass,
};
use chernvan::cohomology::{GradedAlgebra, Rings, S2Model, TruncatedRing};
use chernvan::groebner::{QuotientRing, ReductionStats};
use chernvan::poly::{ratio, Ambient, Monomial, Polynomial};
use chernvan::stability::{
    is_regular, lambda_set, reverse_transfer, slope_compare, transfer, ChainBundle, Polarization,
    SheafInvariants, Q,
};
use chernvan::vanish::{DisplayName, Displays};
use proptest::prelude::*;
use proptest::test_runner::{RngSeed, TestRunner};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub type Outcome = Result<(), String>;

fn runner(cases: u32, seed: u64) -> TestRunner {
    eprintln!("proptest seed {seed:#x}, {cases} cases");
    TestRunner::new(ProptestConfig {
        cases,
        rng_seed: RngSeed::Fixed(seed),
        failure_persistence: None,
        ..ProptestConfig::default()
    })
}

pub fn rings() -> &'static Rings {
    static R: OnceLock<Rings> = OnceLock::new();
    R.get_or_init(Rings::bundled)
}

fn model() -> &'static S2Model {
    static M: OnceLock<S2Model> = OnceLock::new();
    M.get_or_init(|| S2Model::new(rings(), 16).unwrap())
}

fn lc() -> &'static LogCotangent {
    static L: OnceLock<LogCotangent> = OnceLock::new();
    L.get_or_init(|| log_cotangent_total(rings(), 16).unwrap())
}

fn small_ambient() -> Arc<Ambient> {
    Ambient::from_pairs(&[("x", 2), ("y", 2), ("z", 4)]).unwrap()
}

type Terms = Vec<(Vec<u16>, i64, i64)>;

/// Random terms: exponents below `max_exp`, coefficients `n/d` with small `n`, `d`.
fn terms(nvars: usize, max_exp: u16, max_terms: usize) -> impl Strategy<Value = Terms> {
    prop::collection::vec(
        (
            prop::collection::vec(0..max_exp, nvars),
            -9i64..=9,
            1i64..=4,
        ),
        0..=max_terms,
    )
}

fn build(amb: &Arc<Ambient>, t: &[(Vec<u16>, i64, i64)]) -> Polynomial {
    Polynomial::from_terms(
        amb,
        t.iter()
            .map(|(e, n, d)| (Monomial::from_exponents(e), ratio(*n, *d))),
    )
}

/// Random polynomial in `amb` of weighted degree at most `max_deg`.
fn build_bounded(amb: &Arc<Ambient>, t: &[(Vec<u16>, i64, i64)], max_deg: u32) -> Polynomial {
    build(amb, t).truncate(max_deg)
}

fn random_nf(ring: &QuotientRing, p: &Polynomial, seed: u64) -> Polynomial {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut choose = |eligible: &[usize]| rng.gen_range(0..eligible.len());
    ring.basis()
        .normal_form_with(p, &mut choose, &mut ReductionStats::default())
        .unwrap()
}

fn done<E: std::fmt::Display>(r: Result<(), E>) -> Outcome {
    r.map_err(|e| e.to_string())
}

#[allow(clippy::eq_op)]
pub fn ring_axioms() -> Outcome {
    let s = (terms(3, 4, 5), terms(3, 4, 5), terms(3, 4, 5));
    done(runner(1000, 0x5eed_0001).run(&s, |(a, b, c)| {
        let amb = small_ambient();
        let (p, q, r) = (build(&amb, &a), build(&amb, &b), build(&amb, &c));
        let zero = Polynomial::zero(&amb);
        let one = Polynomial::one(&amb);
        prop_assert_eq!(&(&p + &q) + &r, &p + &(&q + &r));
        prop_assert_eq!(&p + &q, &q + &p);
        prop_assert_eq!(&(&p * &q) * &r, &p * &(&q * &r));
        prop_assert_eq!(&p * &q, &q * &p);
        prop_assert_eq!(&p * &(&q + &r), &(&p * &q) + &(&p * &r));
        prop_assert_eq!(&p + &zero, p.clone());
        prop_assert_eq!(&p * &one, p.clone());
        prop_assert!((&p - &p).is_zero());
        prop_assert_eq!(&p + &(-&p), zero);
        Ok(())
    }))
}

pub fn nf_idempotent_linear_confluent() -> Outcome {
    let s = (terms(5, 4, 4), terms(5, 4, 4), -5i64..=5, any::<u64>());
    done(runner(200, 0x5eed_0002).run(&s, |(a, b, n, seed)| {
        for ring in [&rings().btilde, &rings().b, &rings().s1] {
            let amb = ring.ambient();
            let k = amb.len();
            let cut = |t: &[(Vec<u16>, i64, i64)]| -> Terms {
                t.iter()
                    .map(|(e, x, y)| (e[..k].to_vec(), *x, *y))
                    .collect()
            };
            let p = build_bounded(amb, &cut(&a), 14);
            let q = build_bounded(amb, &cut(&b), 14);
            let np = ring.nf(&p);
            prop_assert_eq!(ring.nf(&np), np.clone());
            let c = ratio(n, 3);
            let lhs = ring.nf(&(&p.scale(&c) + &q));
            prop_assert_eq!(lhs, &np.scale(&c) + &ring.nf(&q));
            prop_assert_eq!(random_nf(ring, &p, seed), np.clone());
            prop_assert_eq!(ring.nf(&(&p * &q)), ring.nf(&(&np * &ring.nf(&q))));
        }
        Ok(())
    }))
}

pub fn nf_preserves_degree() -> Outcome {
    done(
        runner(200, 0x5eed_0002).run(&(terms(5, 4, 4), 0u32..=7), |(a, d)| {
            let bt = &rings().btilde;
            let p = build(bt.ambient(), &a).piece(2 * d);
            let np = bt.nf(&p);
            prop_assert!(np.is_zero() || np.is_homogeneous_of(2 * d));
            Ok(())
        }),
    )
}

pub fn truncation_is_multiplicative() -> Outcome {
    let s = (terms(3, 5, 5), terms(3, 5, 5), 0u32..=12);
    done(runner(200, 0x5eed_0002).run(&s, |(a, b, d)| {
        let amb = small_ambient();
        let (p, q) = (build(&amb, &a), build(&amb, &b));
        let full = (&p * &q).truncate(d);
        prop_assert_eq!(&(&p.truncate(d) * &q.truncate(d)).truncate(d), &full);
        prop_assert_eq!(&p.mul_bounded(&q, Some(d)), &full);
        Ok(())
    }))
}

pub fn dual_flip_is_an_involution() -> Outcome {
    done(
        runner(200, 0x5eed_0002).run(&(terms(4, 3, 5), terms(4, 3, 5)), |(a, b)| {
            let alg = TruncatedRing::new(rings().b.clone(), 16);
            let amb = rings().b.ambient();
            let unit = |t: &[(Vec<u16>, i64, i64)]| {
                let p = build(amb, t);
                let p = &p - &Polynomial::constant(amb, p.constant_term());
                let p = &p + &Polynomial::one(amb);
                TotalChernClass::new(&alg, &alg.normalize(&p)).unwrap()
            };
            let (x, y) = (unit(&a), unit(&b));
            prop_assert_eq!(dual_flip(&alg, &dual_flip(&alg, &x)), x.clone());
            let xy = total_mul(&alg, &x, &y);
            prop_assert_eq!(
                dual_flip(&alg, &xy),
                total_mul(&alg, &dual_flip(&alg, &x), &dual_flip(&alg, &y))
            );
            Ok(())
        }),
    )
}

pub fn projection_formula() -> Outcome {
    done(
        runner(200, 0x5eed_0002).run(&(terms(3, 4, 4), terms(5, 3, 4)), |(a, b)| {
            let m = model();
            let p = build_bounded(m.s1().ambient(), &a, 16);
            let q = build_bounded(m.btilde().ambient(), &b, 14);
            let lhs = m.mul(&m.pullback(&p), &m.pushforward(&q));
            let rhs = m.pushforward(&(&m.restrict(&p) * &q));
            prop_assert_eq!(lhs, rhs);
            Ok(())
        }),
    )
}

pub fn rehouse_is_confluent() -> Outcome {
    let s = (terms(3, 7, 5), terms(5, 3, 3), any::<u64>());
    done(runner(200, 0x5eed_0002).run(&s, |(a, b, seed)| {
        let m = model();
        let x = m.class(
            build_bounded(m.s1().ambient(), &a, 16),
            build_bounded(m.btilde().ambient(), &b, 14),
        );
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut choose = |n: usize| rng.gen_range(0..n);
        let r = m.rehouse(&x);
        prop_assert_eq!(m.rehouse_with(&x, &mut choose), r.clone());
        prop_assert!(r
            .p
            .terms()
            .iter()
            .all(|(mono, _)| mono.exponent(0) <= 3 || m.s1().ambient().index_of("xi") != Some(0)));
        prop_assert_eq!(m.rehouse(&r), r);
        Ok(())
    }))
}

pub fn transfer_is_monotone() -> Outcome {
    let s = (1i64..=5, prop::collection::vec(0i64..=5, 1..=6));
    done(runner(1000, 0x5eed_0003).run(&s, |(r, ones)| {
        let cb = ChainBundle::from_ones(r, &ones);
        let a: Vec<i64> = ones.iter().map(|&x| x.min(r)).collect();
        let sum: i64 = a.iter().sum();
        let t = transfer(&cb, r).unwrap();
        prop_assert_eq!(t.dims[0], 0);
        prop_assert!(t.dims.windows(2).all(|w| w[0] <= w[1]));
        prop_assert!(t.forward <= r.min(sum));
        prop_assert_eq!(is_regular(&cb, r), sum <= r);
        if is_regular(&cb, r) {
            prop_assert_eq!(t.forward, sum);
            prop_assert_eq!(reverse_transfer(&cb, r).unwrap().forward, sum);
        }
        prop_assert_eq!(ChainBundle::parse(&cb.to_string()).unwrap(), cb);
        Ok(())
    }))
}

pub fn off_wall_slopes_never_tie() -> Outcome {
    let s = (
        2i64..=4,
        1i64..=12,
        0i64..60,
        0i64..12,
        0i64..12,
        -6i64..=12,
    );
    done(
        runner(1000, 0x5eed_0003).run(&s, |(r, chi_seed, num, r0_seed, rd_seed, chi0)| {
            // Step chi up to the next value coprime to r.
            let chi = (chi_seed..).find(|&c| num_integer::gcd(r, c) == 1).unwrap();
            let r0 = 1 + r0_seed % (r - 1);
            let (lo, hi) = ((2 * r0 - r).max(0), (2 * r0).min(r));
            let rd = lo + rd_seed % (hi - lo + 1);
            let alpha = Q::new(num, 60);
            let walls = lambda_set(r, chi).unwrap();
            prop_assume!(walls.iter().all(|w| w.alpha != alpha));
            let f = SheafInvariants::new(r0, rd, chi0);
            let e = SheafInvariants::new(r, r, chi);
            let ord = slope_compare(&f, &e, alpha, &Polarization::uniform(2)).unwrap();
            prop_assert_ne!(ord, std::cmp::Ordering::Equal);
            Ok(())
        }),
    )
}

/// Every rational `a/b` in [0, 1) with `b <= r^2` for which some admissible
/// `(chi0, r0, r_dag)` balances the slopes of `F` and `E`.
pub fn lambda_oracle(r: i64, chi: i64) -> Vec<Q> {
    let mut out = Vec::new();
    for b in 1..=r * r {
        for a in 0..b {
            let alpha = Q::new(a, b);
            if out.contains(&alpha) {
                continue;
            }
            let hit = (1..r).any(|r0| {
                (0..=r).any(|rd| {
                    if rd < 2 * r0 - r || rd > 2 * r0 || rd == r0 {
                        return false;
                    }
                    // chi0 = r0 (chi - alpha r)/r + alpha rd must be an integer.
                    let chi0 = Q::from(r0) * (Q::from(chi) - alpha * Q::from(r)) / Q::from(r)
                        + alpha * Q::from(rd);
                    chi0.is_integer()
                })
            });
            if hit {
                out.push(alpha);
            }
        }
    }
    out.sort();
    out
}

pub fn lambda_set_matches_oracle() -> Outcome {
    for r in 2..=5 {
        for chi in -7..=15 {
            if num_integer::gcd(r, chi) != 1 {
                continue;
            }
            let got: Vec<Q> = lambda_set(r, chi)
                .unwrap()
                .into_iter()
                .map(|w| w.alpha)
                .collect();
            let want = lambda_oracle(r, chi);
            if got != want {
                return Err(format!("r = {r}, chi = {chi}: {got:?} vs oracle {want:?}"));
            }
        }
    }
    Ok(())
}

fn ensure(ok: bool, what: impl FnOnce() -> String) -> Outcome {
    if ok {
        Ok(())
    } else {
        Err(what())
    }
}

pub fn pipeline_is_homogeneous() -> Outcome {
    let lc = lc();
    let m = &lc.model;
    for i in 0..=8 {
        let c = lc.c(i);
        ensure(is_homogeneous(m, &c, 2 * i), || format!("c{i}"))?;
        ensure(is_homogeneous(m, &m.rehouse(&c), 2 * i), || {
            format!("rehoused c{i}")
        })?;
    }
    let b = TruncatedRing::new(rings().b.clone(), 16);
    let bt = TruncatedRing::new(rings().btilde.clone(), 14);
    for i in 0..=4 {
        let piece = b.piece(&lc.normal_bundle, 2 * i);
        ensure(is_homogeneous(&b, &piece, 2 * i), || {
            format!("normal bundle degree {}", 2 * i)
        })?;
    }
    for (name, alg, x) in [
        ("cf", &bt, &lc.cf),
        ("grr product", &bt, &lc.grr.product),
        ("grr excess", &bt, &lc.grr.excess),
    ] {
        for d in bt.degrees(x) {
            ensure(d % 2 == 0 && d <= 14, || {
                format!("{name} has a piece in degree {d}")
            })?;
            let piece = alg.piece(x, d);
            ensure(is_homogeneous(alg, &piece, d), || {
                format!("{name} degree {d}")
            })?;
        }
    }
    for (name, x) in [
        ("relative", &lc.relative),
        ("base", &lc.base),
        ("divisors", &lc.divisors),
    ] {
        for d in m.degrees(x) {
            ensure(d % 2 == 0, || format!("{name} has odd degree {d}"))?;
        }
    }
    let displays = Displays::bundled();
    // Pushforward arguments sit two below the class they describe.
    for (name, deg) in [
        (DisplayName::C7, 14),
        (DisplayName::C8, 16),
        (DisplayName::Chk7, 12),
        (DisplayName::C8Minus3Mu, 14),
        (DisplayName::Ch8van, 14),
    ] {
        let p = displays.parse(name).unwrap();
        ensure(p.is_homogeneous_of(deg), || {
            format!("{name:?} display: degrees {:?}", p.degrees())
        })?;
    }
    Ok(())
}

pub type Suite = (&'static str, fn() -> Outcome);

/// Every property suite, by name.
pub const SUITES: [Suite; 11] = [
    ("ring axioms", ring_axioms),
    (
        "nf idempotence, linearity, confluence",
        nf_idempotent_linear_confluent,
    ),
    ("nf preserves degree", nf_preserves_degree),
    ("truncation is multiplicative", truncation_is_multiplicative),
    ("dual flip is an involution", dual_flip_is_an_involution),
    ("projection formula", projection_formula),
    ("rehouse is confluent", rehouse_is_confluent),
    ("transfer is monotone", transfer_is_monotone),
    ("off-wall slopes never tie", off_wall_slopes_never_tie),
    (
        "walls agree with the oracle scan",
        lambda_set_matches_oracle,
    ),
    ("pipeline is homogeneous", pipeline_is_homogeneous),
];
