//! Acceptance gate: ten checks, one test per criterion, every assertion an
//! exact equality over the rationals — there is no tolerance anywhere to
//! loosen. Criteria 1 and 2 drive the compiled binary and carry a wall-clock
//! bound; the rest exercise the library directly with pinned seeds so a
//! failure is reproducible bit for bit.

use std::collections::BTreeMap;
use std::process::{Command, Output};
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use csd_core::rat::{rat, rat_int, Rat};
use csd_core::{
    bch_product, build, combine, complete, dilog_series, enumerate_random_instances,
    invert_script, ray_logs_of_product, replay, scripted_lemma, Context, GroupElement, IdentityId,
    IdentityParams, LatticeVector, LieSeries, RewriteStep, SkewForm,
};

fn v(a1: u32, a2: u32) -> LatticeVector {
    LatticeVector::new(a1, a2)
}

fn csd(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_csd"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn random_vector(rng: &mut ChaCha8Rng, max_degree: u32) -> LatticeVector {
    loop {
        let a1 = rng.gen_range(0..=max_degree);
        let a2 = rng.gen_range(0..=max_degree - a1);
        if a1 + a2 > 0 {
            return v(a1, a2);
        }
    }
}

fn nonzero_rat(rng: &mut ChaCha8Rng) -> Rat {
    loop {
        let p = rng.gen_range(-9i64..=9);
        if p != 0 {
            return rat(p, rng.gen_range(1..=6));
        }
    }
}

fn verify_random_instances(id: IdentityId, count: usize, seed: u64, ctx: &Context) -> usize {
    let draws = enumerate_random_instances(id, count, seed, &ctx.form);
    assert_eq!(draws.len(), count);
    for params in &draws {
        let report = build(id, params, ctx).unwrap().verify(ctx).unwrap();
        assert!(
            report.is_equal(),
            "{id} with {params:?} fails: {}",
            report.to_json()
        );
    }
    count
}

fn timed_binary_verify(name: &str, degree: u32) -> Duration {
    let degree_arg = degree.to_string();
    let start = Instant::now();
    let out = csd(&["verify", "--identity", name, "--degree", &degree_arg]);
    let elapsed = start.elapsed();
    assert_eq!(
        out.status.code(),
        Some(0),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    assert_eq!(
        String::from_utf8_lossy(&out.stdout),
        format!("pass: {name} (degree {degree})\n")
    );
    assert!(elapsed < Duration::from_secs(10), "took {elapsed:?}");
    elapsed
}

#[test]
fn criterion_01_a11_exact_at_degree_16_under_ten_seconds() {
    let elapsed = timed_binary_verify("a11", 16);
    println!("criterion 01: PASS - a11 exact at degree 16 in {elapsed:?}");
}

#[test]
fn criterion_02_a22_exact_at_degree_16_under_ten_seconds() {
    let elapsed = timed_binary_verify("a22", 16);
    println!("criterion 02: PASS - a22 exact at degree 16 in {elapsed:?}");
}

#[test]
fn criterion_03_thm31_on_25_random_instances() {
    let ctx = Context::standard(10);
    let n = verify_random_instances(IdentityId::Thm31, 25, 31, &ctx);
    println!("criterion 03: PASS - thm31 on {n} random instances at degree 10, exact");
}

#[test]
fn criterion_04_thm41_on_25_random_instances() {
    let ctx = Context::standard(10);
    let n = verify_random_instances(IdentityId::Thm41, 25, 41, &ctx);
    println!("criterion 04: PASS - thm41 on {n} random instances at degree 10, exact");
}

#[test]
fn criterion_05_lemma_suite_randomized_plus_structural_coincidences() {
    let ctx = Context::standard(10);
    let mut checked = 0;
    for (id, seed) in [
        (IdentityId::B2Lower, 52),
        (IdentityId::B2Upper, 53),
        (IdentityId::Lem34a, 54),
        (IdentityId::Lem34b, 55),
        (IdentityId::Lem43a, 56),
        (IdentityId::Lem43b, 57),
    ] {
        checked += verify_random_instances(id, 10, seed, &ctx);
    }
    // the bounded ladders, at every level in range
    for (id, seed) in [(IdentityId::Lem33, 58), (IdentityId::Lem42, 59)] {
        for l in 0..=4u32 {
            for params in enumerate_random_instances(id, 5, seed + u64::from(l), &ctx.form) {
                let params = IdentityParams {
                    l: Some(l),
                    ..params
                };
                let report = build(id, &params, &ctx).unwrap().verify(&ctx).unwrap();
                assert!(
                    report.is_equal(),
                    "{id} at level {l} with {params:?} fails: {}",
                    report.to_json()
                );
                checked += 1;
            }
        }
    }
    // level-0 ladders are the doubled-pair identities, factor for factor
    for (ladder, base) in [
        (IdentityId::Lem33, IdentityId::B2Upper),
        (IdentityId::Lem42, IdentityId::B2Lower),
    ] {
        for params in enumerate_random_instances(base, 5, 60, &ctx.form) {
            let at_zero = IdentityParams {
                l: Some(0),
                ..params.clone()
            };
            let ladder_inst = build(ladder, &at_zero, &ctx).unwrap();
            let base_inst = build(base, &params, &ctx).unwrap();
            assert_eq!(ladder_inst.lhs, base_inst.lhs, "{ladder} level 0 vs {base}");
            assert_eq!(ladder_inst.rhs, base_inst.rhs, "{ladder} level 0 vs {base}");
            checked += 1;
        }
    }
    assert_eq!(checked, 120);
    println!("criterion 05: PASS - {checked} lemma checks at degree 10, exact");
}

#[test]
fn criterion_06_pentagon_commutation_and_bch_leading_terms() {
    // randomized relation instances at varying cutoffs
    for (id, seed) in [(IdentityId::Pentagon, 61u64), (IdentityId::Commute, 62)] {
        let form = SkewForm::standard();
        let mut deg_rng = ChaCha8Rng::seed_from_u64(seed ^ 0xD0);
        let draws = enumerate_random_instances(id, 100, seed, &form);
        assert_eq!(draws.len(), 100);
        for params in &draws {
            let ctx = Context::standard(deg_rng.gen_range(4..=10));
            let report = build(id, params, &ctx).unwrap().verify(&ctx).unwrap();
            assert!(
                report.is_equal(),
                "{id} with {params:?} at degree {} fails: {}",
                ctx.degree(),
                report.to_json()
            );
        }
    }

    // leading coefficients of log(exp(a X_{n'}) exp(b X_n)): the degree-2
    // bracket carries 1/2, the two degree-3 brackets carry +1/12 and -1/12
    let ctx = Context::standard(10);
    let mut rng = ChaCha8Rng::seed_from_u64(63);
    let half = rat(1, 2);
    let twelfth = rat(1, 12);
    let mut checked = 0;
    while checked < 25 {
        let nprime = random_vector(&mut rng, 3);
        let n = random_vector(&mut rng, 3);
        let s = ctx.skew(&nprime, &n);
        if s == rat_int(0) {
            continue;
        }
        let a = nonzero_rat(&mut rng);
        let b = nonzero_rat(&mut rng);
        let x = LieSeries::generator(&ctx, nprime, a.clone());
        let y = LieSeries::generator(&ctx, n, b.clone());
        let z = GroupElement::exp(&x).mul(&GroupElement::exp(&y)).log().unwrap();
        let mid = nprime.add(&n);
        assert_eq!(
            z.coeff(&mid),
            &half * &a * &b * &s,
            "degree-2 coefficient for {nprime}, {n}"
        );
        assert_eq!(
            z.coeff(&nprime.add(&mid)),
            &twelfth * &a * &a * &b * &s * ctx.skew(&nprime, &mid),
            "left degree-3 coefficient for {nprime}, {n}"
        );
        assert_eq!(
            z.coeff(&n.add(&mid)),
            -(&twelfth * &a * &b * &b * &s * ctx.skew(&n, &mid)),
            "right degree-3 coefficient for {nprime}, {n}"
        );
        assert_eq!(z, bch_product(&x, &y), "direct log vs series product");
        checked += 1;
    }
    println!(
        "criterion 06: PASS - 100 pentagon + 100 commutation instances, {checked} BCH term checks, exact"
    );
}

#[test]
fn criterion_07_dilog_closed_form_matches_exp_of_its_series() {
    let ctx = Context::standard(10);
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut checked = 0;
    for a1 in 0..=4u32 {
        for a2 in 0..=4 - a1 {
            if a1 + a2 == 0 {
                continue;
            }
            let n = v(a1, a2);
            for _ in 0..10 {
                let c = nonzero_rat(&mut rng);
                let closed = GroupElement::dilog(&ctx, &n, &c);
                let series = GroupElement::exp(&dilog_series(&ctx, &n, &c));
                assert!(closed.equals(&series), "routes disagree for [{n}]^({c})");
                checked += 1;
            }
        }
    }
    assert_eq!(checked, 140);
    println!(
        "criterion 07: PASS - both dilog routes agree on all 14 directions of degree <= 4, \
         10 exponents each, at degree 10"
    );
}

#[test]
fn criterion_08_completion_reproduces_the_affine_factorizations() {
    let ctx = Context::standard(12);

    // doubled walls on both axes
    let a11 = build(IdentityId::A11, &IdentityParams::default(), &ctx).unwrap();
    let diagram = complete(&a11.lhs, &ctx).unwrap();
    let expected = ray_logs_of_product(&a11.rhs, &ctx).unwrap();
    let got: BTreeMap<LatticeVector, LieSeries> = diagram
        .rays()
        .into_iter()
        .map(|(n, s)| (*n, s.clone()))
        .collect();
    assert_eq!(got, expected);
    assert_eq!(
        diagram.ray_element(&v(1, 0)),
        dilog_series(&ctx, &v(1, 0), &rat_int(2))
    );
    assert_eq!(
        diagram.ray_element(&v(0, 1)),
        dilog_series(&ctx, &v(0, 1), &rat_int(2))
    );
    let tail = [
        dilog_series(&ctx, &v(1, 1), &rat_int(4)),
        dilog_series(&ctx, &v(2, 2), &rat_int(2)),
        dilog_series(&ctx, &v(4, 4), &rat_int(1)),
        dilog_series(&ctx, &v(8, 8), &rat(1, 2)),
    ];
    let diagonal = combine(&[
        (rat_int(1), &tail[0]),
        (rat_int(1), &tail[1]),
        (rat_int(1), &tail[2]),
        (rat_int(1), &tail[3]),
    ]);
    assert_eq!(diagram.ray_element(&v(1, 1)), diagonal);
    assert!(diagram.check_consistency().unwrap().is_equal());

    // quadrupled wall against a single one
    let a22 = build(IdentityId::A22, &IdentityParams::default(), &ctx).unwrap();
    let diagram = complete(&a22.lhs, &ctx).unwrap();
    let expected = ray_logs_of_product(&a22.rhs, &ctx).unwrap();
    let got: BTreeMap<LatticeVector, LieSeries> = diagram
        .rays()
        .into_iter()
        .map(|(n, s)| (*n, s.clone()))
        .collect();
    assert_eq!(got, expected);
    // the middle wall collects its factors into multiplicity six
    assert_eq!(diagram.ray_element(&v(1, 2)).coeff(&v(1, 2)), rat_int(6));
    assert!(diagram.check_consistency().unwrap().is_equal());

    println!("criterion 08: PASS - completions at degree 12 match the closed factorizations, exact");
}

fn random_step_case(
    rng: &mut ChaCha8Rng,
    kind: usize,
    ctx: &Context,
) -> (Vec<(LatticeVector, Rat)>, RewriteStep) {
    let mut factors: Vec<(LatticeVector, Rat)> = (0..rng.gen_range(0..=2))
        .map(|_| (random_vector(rng, 4), nonzero_rat(rng)))
        .collect();
    let i = factors.len();
    let step = match kind {
        0 => {
            let c = nonzero_rat(rng);
            let left = match rng.gen_range(0..3) {
                0 => &c / rat_int(2),
                1 => &c * rat_int(2),
                _ => -c.clone(),
            };
            factors.push((random_vector(rng, 4), c));
            RewriteStep::split(i, left)
        }
        1 => {
            // repeated vector; cancelling exponents are legal and drop it
            let n = random_vector(rng, 4);
            factors.push((n, nonzero_rat(rng)));
            factors.push((n, nonzero_rat(rng)));
            RewriteStep::merge(i)
        }
        2 => {
            if rng.gen_bool(0.5) {
                // parallel pair, skew zero
                let n = random_vector(rng, 2);
                factors.push((n, nonzero_rat(rng)));
                factors.push((n.scale(rng.gen_range(2..=3)), nonzero_rat(rng)));
            } else {
                // combined degree past the cutoff
                for _ in 0..2 {
                    let a1 = rng.gen_range(0..=6);
                    factors.push((v(a1, 6 - a1), nonzero_rat(rng)));
                }
            }
            RewriteStep::commute(i)
        }
        3 => {
            let (nprime, n) = loop {
                let nprime = random_vector(rng, 3);
                let n = random_vector(rng, 3);
                if ctx.skew(&nprime, &n) != rat_int(0) {
                    break (nprime, n);
                }
            };
            let c = ctx.skew(&nprime, &n).recip();
            factors.push((nprime, c.clone()));
            factors.push((n, c));
            RewriteStep::pentagon_expand(i)
        }
        _ => {
            let (x, z) = loop {
                let x = random_vector(rng, 3);
                let z = random_vector(rng, 3);
                if ctx.skew(&z, &x) != rat_int(0) {
                    break (x, z);
                }
            };
            let a = ctx.skew(&z, &x).recip();
            factors.push((x, a.clone()));
            factors.push((x.add(&z), a.clone()));
            factors.push((z, a));
            RewriteStep::pentagon_contract(i)
        }
    };
    for _ in 0..rng.gen_range(0..=2) {
        factors.push((random_vector(rng, 4), nonzero_rat(rng)));
    }
    (factors, step)
}

#[test]
fn criterion_09_scripts_replay_and_random_steps_are_sound() {
    let ctx = Context::standard(10);

    // built-in doubled-pair scripts, both directions, two parameter shapes
    for (n, nprime, c) in [
        (v(1, 0), v(0, 1), rat_int(1)),
        (v(2, 0), v(0, 1), rat(1, 2)),
    ] {
        let params = IdentityParams::pair(n, nprime).with_c(c.clone());
        let instance = build(IdentityId::B2Upper, &params, &ctx).unwrap();
        let lhs = instance.lhs.expand(ctx.degree()).unwrap();
        let rhs = instance.rhs.expand(ctx.degree()).unwrap();
        let forward = scripted_lemma(IdentityId::B2Lower, &c).unwrap();
        let backward = scripted_lemma(IdentityId::B2Upper, &c).unwrap();
        assert_eq!(replay(&lhs, &forward, &ctx).unwrap().last().unwrap(), &rhs);
        assert_eq!(replay(&rhs, &backward, &ctx).unwrap().last().unwrap(), &lhs);
        assert_eq!(backward, invert_script(&lhs, &forward, &ctx).unwrap());
    }

    // constructed legal steps of every kind, replayed with the value check on
    let mut rng = ChaCha8Rng::seed_from_u64(90);
    let mut counts = [0usize; 5];
    for k in 0..1000 {
        let kind = k % 5;
        let (factors, step) = random_step_case(&mut rng, kind, &ctx);
        let trace = replay(&factors, &[step.clone()], &ctx).unwrap_or_else(|e| {
            panic!(
                "case {k}: `{}` on {factors:?} fails: {e:?}",
                step.format_line()
            )
        });
        assert_eq!(trace.len(), 2);
        counts[kind] += 1;
    }
    assert_eq!(counts, [200; 5]);
    println!(
        "criterion 09: PASS - doubled-pair scripts replay both ways, 1000 random steps sound, \
         zero discrepancies"
    );
}

fn random_series(rng: &mut ChaCha8Rng, ctx: &Context) -> LieSeries {
    let max_degree = ctx.degree().min(5);
    let count = rng.gen_range(1..=5);
    LieSeries::from_terms(
        ctx,
        (0..count).map(|_| (random_vector(rng, max_degree), nonzero_rat(rng))),
    )
}

fn random_element(rng: &mut ChaCha8Rng, ctx: &Context) -> GroupElement {
    let mut g = GroupElement::exp(&random_series(rng, ctx));
    for _ in 0..rng.gen_range(0..=2) {
        g = g.mul(&GroupElement::dilog(ctx, &random_vector(rng, 4), &nonzero_rat(rng)));
    }
    g
}

#[test]
fn criterion_10_group_law_suites_of_200_cases_each() {
    let mut rng = ChaCha8Rng::seed_from_u64(100);

    // exp/log round-trips in both directions
    for _ in 0..200 {
        let ctx = Context::standard(rng.gen_range(3..=10));
        let x = random_series(&mut rng, &ctx);
        assert!(GroupElement::exp(&x).log().unwrap() == x, "log . exp != id");
        let g = random_element(&mut rng, &ctx);
        assert!(
            GroupElement::exp(&g.log().unwrap()).equals(&g),
            "exp . log != id"
        );
    }

    // associativity
    for _ in 0..200 {
        let ctx = Context::standard(rng.gen_range(3..=10));
        let g = random_element(&mut rng, &ctx);
        let h = random_element(&mut rng, &ctx);
        let k = random_element(&mut rng, &ctx);
        assert!(
            g.mul(&h).mul(&k).equals(&g.mul(&h.mul(&k))),
            "associativity fails at degree {}",
            ctx.degree()
        );
    }

    // two-sided inverses
    for _ in 0..200 {
        let ctx = Context::standard(rng.gen_range(3..=10));
        let g = random_element(&mut rng, &ctx);
        let inv = g.inverse();
        assert!(g.mul(&inv).is_identity() && inv.mul(&g).is_identity());
    }

    // powers along a one-parameter subgroup add
    for _ in 0..200 {
        let ctx = Context::standard(rng.gen_range(3..=10));
        let g = random_element(&mut rng, &ctx);
        let s = nonzero_rat(&mut rng);
        let t = nonzero_rat(&mut rng);
        assert!(
            g.pow(&s).mul(&g.pow(&t)).equals(&g.pow(&(&s + &t))),
            "power additivity fails at degree {}",
            ctx.degree()
        );
    }

    println!(
        "criterion 10: PASS - 200-case suites each: exp/log round-trip, associativity, \
         inverses, power additivity, exact"
    );
}
