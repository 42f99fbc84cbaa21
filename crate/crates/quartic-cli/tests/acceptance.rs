//! Acceptance suite: one test per acceptance criterion, so the harness
//! prints exactly one pass/fail line for each.
//!
//! 1. the worked golden example (cor3.1 at p = 61) through the CLI;
//! 2. fast symbol vs. factoring oracle, exhaustive + randomized;
//! 3. reciprocity sign law, supplement closed forms, projection identities,
//!    conjugation-inverse, rational triviality (10^4 instances each);
//! 4. full theorem scans with zero counterexamples for p < 50,000;
//! 5. the lemma checks (2.7/2.8 exhaustive, 2.9 randomized, 2.12/2.13 on
//!    the criterion-4 grid);
//! 6. the eq5.5 identity for every p = 1 (mod 4) below 100,000;
//! 7. the Lucas engine against the naive recurrence and the doubling
//!    identity;
//! 8. representation normalization against brute-force enumeration;
//! 9. explore-mode scans reporting hypothesis-violating records as data.

use std::process::Command;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use quartic::gaussian::{gauss_gcd, integer_sqrt, GaussInt, OddGauss};
use quartic::modular::{
    check_doubling_identity, gcd, lucas_uv_mod, mul_mod, pow_mod, val2,
};
use quartic::represent::{quad_reps, two_squares};
use quartic::sieve::primes_up_to;
use quartic::symbols::{jacobi2, quartic_jacobi, quartic_jacobi_oracle, I4};
use quartic::verify::{lemma2_9_holds, run_suite, CheckId, RunConfig, SuiteSummary};

fn gi(re: i64, im: i64) -> GaussInt {
    GaussInt::new(re, im)
}

fn odd(z: GaussInt) -> OddGauss {
    OddGauss::new(z).expect("odd re / even im shape")
}

fn rand_odd_gauss(rng: &mut ChaCha8Rng, bound: i64) -> GaussInt {
    let a = 2 * rng.gen_range(-bound / 2..bound / 2) + 1;
    let b = 2 * rng.gen_range(-bound / 2..=bound / 2);
    gi(a, b)
}

fn rand_gauss(rng: &mut ChaCha8Rng, bound: i64) -> GaussInt {
    gi(rng.gen_range(-bound..=bound), rng.gen_range(-bound..=bound))
}

fn coprime(a: GaussInt, b: GaussInt) -> bool {
    gauss_gcd(a, b).norm() == 1
}

/// Criterion 1: `verify --check cor3.1` at p = 61 reproduces
/// 15^((61-5)/8) = 15^7 = 22 (mod 61) at the x = -1 representation.
#[test]
fn criterion_1_golden_example_cor3_1_at_61() {
    assert_eq!(pow_mod(15, 7, 61), 22);

    let out = Command::new(env!("CARGO_BIN_EXE_quartic"))
        .args(["verify", "--check", "cor3.1", "--pmin", "61", "--pmax", "61", "--json"])
        .output()
        .expect("binary runs");
    assert_eq!(out.status.code(), Some(0));
    let stdout = String::from_utf8(out.stdout).unwrap();
    let records: Vec<serde_json::Value> = stdout
        .lines()
        .map(|l| serde_json::from_str(l).expect("valid JSON line"))
        .collect();
    let neg = records
        .iter()
        .find(|r| r["x"] == -1)
        .expect("x = -1 record present");
    assert_eq!(neg["p"], 61);
    assert_eq!(neg["q"], 15);
    assert_eq!(neg["actual"], "22");
    assert_eq!(neg["predicted"], "22");
    assert_eq!(neg["matched"], true);
    println!("criterion 1 PASS: cor3.1 reproduces 15^7 = 22 (mod 61) at x = -1");
}

/// Criterion 2: the reciprocity-based symbol agrees with the
/// factor-and-multiply oracle on every admissible pair with norm(beta)
/// <= 3000 (numerators over a full residue system mod beta) plus 10^4
/// random pairs with norm(beta) <= 10^6.
#[test]
fn criterion_2_fast_symbol_equals_oracle() {
    let mut compared = 0u64;
    for cre in -54i64..=54 {
        for cim in -54i64..=54 {
            let bz = gi(cre, cim);
            if OddGauss::new(bz).is_err() || bz.norm() > 3_000 {
                continue;
            }
            let beta = odd(bz);
            let n = bz.norm() as i64;
            // The lattice generated by beta and i*beta has a rectangular
            // transversal of shape (N/g) x g with g = gcd(re, im).
            let g = gcd(cre, cim);
            for x in 0..n / g {
                for y in 0..g {
                    let alpha = gi(x, y);
                    match (quartic_jacobi(alpha, beta), quartic_jacobi_oracle(alpha, beta)) {
                        (Ok(f), Ok(o)) => {
                            assert_eq!(f, o, "alpha={alpha:?} beta={bz:?}");
                            compared += 1;
                        }
                        (Err(_), Err(_)) => {}
                        (f, o) => {
                            panic!("admissibility disagreement {f:?} vs {o:?} at alpha={alpha:?} beta={bz:?}")
                        }
                    }
                }
            }
        }
    }
    assert!(compared > 1_000_000, "only {compared} exhaustive pairs");

    let mut rng = ChaCha8Rng::seed_from_u64(0xacce_0002);
    let mut random_compared = 0u64;
    while random_compared < 10_000 {
        let bz = rand_odd_gauss(&mut rng, 1_400);
        if bz.norm() > 1_000_000 {
            continue;
        }
        let alpha = rand_gauss(&mut rng, 1_000);
        if !coprime(alpha, bz) {
            continue;
        }
        let beta = odd(bz);
        let f = quartic_jacobi(alpha, beta).unwrap();
        let o = quartic_jacobi_oracle(alpha, beta).unwrap();
        assert_eq!(f, o, "alpha={alpha:?} beta={bz:?}");
        random_compared += 1;
    }
    println!(
        "criterion 2 PASS: {compared} exhaustive + {random_compared} random pairs, zero disagreements"
    );
}

/// Criterion 3: the reciprocity sign law, the closed forms for
/// i / -1 / 2 / 1+i / b, the two quadratic projections, conjugation-inverse,
/// and rational triviality, 10^4 randomized instances each.
#[test]
fn criterion_3_reciprocity_and_supplements() {
    // Sign law: (a+bi / c+di) = (-1)^((b/2)(c-1)/2 + (d/2)(a+b-1)/2) (c+di / a+bi).
    let mut rng = ChaCha8Rng::seed_from_u64(0xacce_0301);
    let mut tested = 0u32;
    while tested < 10_000 {
        let az = rand_odd_gauss(&mut rng, 1_500);
        let bz = rand_odd_gauss(&mut rng, 1_500);
        if !coprime(az, bz) {
            continue;
        }
        let (a, b) = (az.re(), az.im());
        let (c, d) = (bz.re(), bz.im());
        let ab = quartic_jacobi(az, odd(bz)).unwrap();
        let ba = quartic_jacobi(bz, odd(az)).unwrap();
        let e = (b / 2) * ((c - 1) / 2) + (d / 2) * ((a + b - 1) / 2);
        assert_eq!(ab, I4::new(2 * e.rem_euclid(2)) * ba, "{az:?} vs {bz:?}");
        tested += 1;
    }

    // Supplements at a+bi (a odd, b even), with s = (-1)^((a-1)/2):
    //   (i/.) = i^((a^2+b^2-1)/4),   (-1/.) = (-1)^(b/2),   (2/.) = i^(s*b/2),
    //   (1+i/.) = i^((s(a-b)-1)/4) [4|b]  or  i^((s(b-a)-1)/4 - 1) [2||b],
    //   (b/.) = 1 [4|b]  or  s*i [2||b], given (a, b) = 1.
    let mut rng = ChaCha8Rng::seed_from_u64(0xacce_0302);
    for _ in 0..10_000 {
        let bz = rand_odd_gauss(&mut rng, 2_000);
        let (a, b) = (bz.re(), bz.im());
        let beta = odd(bz);
        let s = if (a - 1).div_euclid(2).rem_euclid(2) == 0 { 1 } else { -1 };
        assert_eq!(
            quartic_jacobi(gi(0, 1), beta).unwrap(),
            I4::new((bz.norm() as i64 - 1) / 4)
        );
        assert_eq!(quartic_jacobi(gi(-1, 0), beta).unwrap(), I4::new(b));
        assert_eq!(quartic_jacobi(gi(2, 0), beta).unwrap(), I4::new(s * (b / 2)));
        let e_ram = if b.rem_euclid(4) == 0 {
            (s * (a - b) - 1) / 4
        } else {
            (s * (b - a) - 1) / 4 - 1
        };
        assert_eq!(quartic_jacobi(gi(1, 1), beta).unwrap(), I4::new(e_ram));
        if b != 0 && gcd(a, b) == 1 {
            let expected = if b.rem_euclid(4) == 0 {
                I4::ONE
            } else {
                I4::new(1 + 2 * (a - 1).div_euclid(2).rem_euclid(2))
            };
            assert_eq!(quartic_jacobi(gi(b, 0), beta).unwrap(), expected);
        }
    }

    // (alpha / m)^2 = (N(alpha) / m)_2 for odd rational m.
    let mut rng = ChaCha8Rng::seed_from_u64(0xacce_0303);
    let mut tested = 0u32;
    while tested < 10_000 {
        let m = 2 * rng.gen_range(1..=49_999) + 1;
        let alpha = rand_gauss(&mut rng, 2_000);
        let nsq = alpha.norm() as i64;
        if gcd(nsq, m) != 1 {
            continue;
        }
        let s = quartic_jacobi(alpha, odd(gi(m, 0))).unwrap();
        assert_eq!(s.pow(2).as_sign(), Some(jacobi2(nsq, m).unwrap()));
        tested += 1;
    }

    // (x^2 / beta) = (x / N(beta))_2 for rational x.
    let mut rng = ChaCha8Rng::seed_from_u64(0xacce_0304);
    let mut tested = 0u32;
    while tested < 10_000 {
        let bz = rand_odd_gauss(&mut rng, 2_000);
        let x = rng.gen_range(1..=2_000) * if rng.gen_range(0..2) == 0 { 1 } else { -1 };
        let norm = bz.norm() as i64;
        if gcd(x, norm) != 1 {
            continue;
        }
        let s = quartic_jacobi(gi(x * x, 0), odd(bz)).unwrap();
        assert_eq!(s.as_sign(), Some(jacobi2(x, norm).unwrap()));
        tested += 1;
    }

    // Conjugation-inverse: (conj alpha / conj beta) = (alpha / beta)^-1.
    let mut rng = ChaCha8Rng::seed_from_u64(0xacce_0305);
    let mut tested = 0u32;
    while tested < 10_000 {
        let bz = rand_odd_gauss(&mut rng, 1_500);
        let alpha = rand_gauss(&mut rng, 1_500);
        if !coprime(alpha, bz) {
            continue;
        }
        let s = quartic_jacobi(alpha, odd(bz)).unwrap();
        let s_conj = quartic_jacobi(alpha.conj(), odd(bz.conj())).unwrap();
        assert_eq!(s_conj, s.inv());
        tested += 1;
    }

    // Rational triviality: (a / m) = 1 for coprime rationals.
    let mut rng = ChaCha8Rng::seed_from_u64(0xacce_0306);
    let mut tested = 0u32;
    while tested < 10_000 {
        let m = 2 * rng.gen_range(1..=49_999) + 1;
        let a = rng.gen_range(1..=100_000) * if rng.gen_range(0..2) == 0 { 1 } else { -1 };
        if gcd(a, m) != 1 {
            continue;
        }
        assert_eq!(quartic_jacobi(gi(a, 0), odd(gi(m, 0))).unwrap(), I4::ONE);
        tested += 1;
    }
    println!("criterion 3 PASS: 6 identity families x 10^4 randomized instances");
}

/// One scan group of the criterion-4 grid.
struct ScanGroup {
    label: &'static str,
    checks: Vec<CheckId>,
    q: Option<Vec<i64>>,
    b: Option<Vec<i64>>,
    a: Option<Vec<i64>>,
    alpha: Option<Vec<u32>>,
}

fn criterion_4_groups() -> Vec<ScanGroup> {
    let group = |label, checks, q, b, a, alpha| ScanGroup { label, checks, q, b, a, alpha };
    vec![
        group("cor3.1", vec![CheckId::Cor3_1], None, None, None, None),
        group(
            "thm3.1-3.5 backends",
            vec![CheckId::Thm3_1, CheckId::Thm3_2, CheckId::Thm3_3, CheckId::Thm3_4, CheckId::Thm3_5],
            None,
            None,
            None,
            None,
        ),
        group("thm4.1", vec![CheckId::Thm4_1], Some(vec![3, 11, 19]), None, None, None),
        group("thm4.2", vec![CheckId::Thm4_2], Some(vec![7, 23, 31]), None, None, None),
        group(
            "thm4.3 + thm4.4",
            vec![CheckId::Thm4_3, CheckId::Thm4_4],
            Some(vec![5, 13, 17, 29]),
            None,
            None,
            None,
        ),
        group("cor4.5", vec![CheckId::Cor4_5], None, None, None, None),
        group("thm4.5 a=2", vec![CheckId::Thm4_5], None, Some(vec![1, 3]), Some(vec![2]), None),
        group("thm4.5 a=4", vec![CheckId::Thm4_5], None, Some(vec![1]), Some(vec![4]), None),
        group(
            "thm5.1 + cor5.1",
            vec![CheckId::Thm5_1, CheckId::Cor5_1],
            None,
            Some(vec![1, 3]),
            None,
            None,
        ),
        group(
            "thm5.2 + cor5.2",
            vec![CheckId::Thm5_2, CheckId::Cor5_2],
            None,
            Some(vec![1, 3, 5, 7]),
            None,
            Some(vec![2, 3]),
        ),
        group(
            "thm6.1 + thm6.2",
            vec![CheckId::Thm6_1, CheckId::Thm6_2],
            None,
            Some(vec![1, 3]),
            None,
            None,
        ),
        group(
            "thm6.3 + thm6.4",
            vec![CheckId::Thm6_3, CheckId::Thm6_4],
            None,
            Some(vec![1, 3]),
            None,
            Some(vec![2, 3]),
        ),
        group(
            "thm7.1 + thm7.2 + cor7.1",
            vec![CheckId::Thm7_1, CheckId::Thm7_2, CheckId::Cor7_1],
            None,
            Some(vec![1, 2, 3]),
            Some(vec![1, 2, 3]),
            None,
        ),
    ]
}

fn run_group(g: &ScanGroup, p_max: i64, explore: bool) -> SuiteSummary {
    let mut cfg = RunConfig::new(g.checks.clone(), p_max);
    cfg.q = g.q.clone();
    cfg.b = g.b.clone();
    cfg.a = g.a.clone();
    cfg.alpha = g.alpha.clone();
    cfg.explore = explore;
    run_suite(&cfg, |_| {}).expect("scan runs")
}

/// Criterion 4: every listed scan over p < 50,000 finishes with zero
/// counterexamples and a nonempty applicable set per check.
#[test]
fn criterion_4_theorem_scans_below_50000() {
    let mut total_applicable = 0u64;
    for g in criterion_4_groups() {
        let summary = run_group(&g, 49_999, false);
        assert_eq!(
            summary.counterexample_count, 0,
            "counterexamples in {}: {:?}",
            g.label, summary.counterexamples
        );
        for (check, tally) in &summary.tallies {
            assert_eq!(tally.mismatched, 0, "{check} mismatched in {}", g.label);
            assert!(tally.applicable > 0, "{check} never applicable in {}", g.label);
            total_applicable += tally.applicable;
        }
    }
    println!("criterion 4 PASS: {total_applicable} applicable records, zero counterexamples");
}

/// The q values reached by the criterion-4 grid (form parameters of every
/// scanned representation), for the lemma2.12/lemma2.13 instance scans.
fn criterion_4_q_values() -> Vec<i64> {
    let mut qs = vec![
        // the default odd-q grid driving the section-3 backends
        3, 5, 7, 9, 11, 13, 15, 17, 19, 21, 23, 25, 27, 29, 31, 33,
        // thm4.x / cor4.x parameters
        37, 41, 65, 73, 89, 113,
    ];
    qs.sort_unstable();
    qs.dedup();
    qs
}

/// Criterion 5: lemma2.7/lemma2.8 exhaustively below 2000, lemma2.9 on 10^4
/// random instances, lemma2.12 and lemma2.13 across the criterion-4 grid.
#[test]
fn criterion_5_lemma_checks() {
    let odd_primes_below_2000 = primes_up_to(1_999).into_iter().filter(|&p| p > 2).count() as u64;
    let mut cfg = RunConfig::new(vec![CheckId::Lemma2_7, CheckId::Lemma2_8], 1_999);
    cfg.p_min = 3;
    let summary = run_suite(&cfg, |_| {}).unwrap();
    assert_eq!(summary.counterexample_count, 0);
    for (check, tally) in &summary.tallies {
        assert_eq!(tally.records, odd_primes_below_2000, "{check} coverage");
        assert_eq!(tally.matched, tally.records, "{check} all matched");
    }

    // lemma2.9 on constructed random instances: pick (c, d, x), then let m be
    // the odd part of c^2 + d^2 - x^2 so the congruence hypothesis holds.
    let mut rng = ChaCha8Rng::seed_from_u64(0xacce_0005);
    let mut tested = 0u32;
    while tested < 10_000 {
        let c = rng.gen_range(-300i64..=300);
        let d = rng.gen_range(-300i64..=300);
        let x = rng.gen_range(-300i64..=300);
        let n = c * c + d * d - x * x;
        let m = if n == 0 {
            2 * rng.gen_range(1..=499) + 1
        } else {
            n.abs() >> val2(n)
        };
        if m < 3 {
            continue;
        }
        match lemma2_9_holds(c, d, m, x) {
            Some(holds) => {
                assert!(holds, "lemma2.9 failed at c={c} d={d} m={m} x={x}");
                tested += 1;
            }
            None => continue, // coprimality preconditions failed; resample
        }
    }

    let mut cfg = RunConfig::new(vec![CheckId::Lemma2_12, CheckId::Lemma2_13], 49_999);
    cfg.q = Some(criterion_4_q_values());
    let summary = run_suite(&cfg, |_| {}).unwrap();
    assert_eq!(summary.counterexample_count, 0);
    for (check, tally) in &summary.tallies {
        assert!(tally.applicable > 0, "{check} never applicable");
        assert_eq!(tally.mismatched, 0, "{check} mismatched");
    }
    println!("criterion 5 PASS: lemmas 2.7/2.8 exhaustive, 2.9 x 10^4, 2.12/2.13 on the scan grid");
}

/// Criterion 6: eq5.5 holds at every prime p = 1 (mod 4) below 100,000.
#[test]
fn criterion_6_eq5_5_below_100000() {
    let expected = primes_up_to(99_999).into_iter().filter(|&p| p % 4 == 1).count() as u64;
    let summary = run_suite(&RunConfig::new(vec![CheckId::Eq5_5], 99_999), |_| {}).unwrap();
    assert_eq!(summary.counterexample_count, 0);
    let (_, tally) = &summary.tallies[0];
    assert_eq!(tally.records, expected, "one record per prime");
    assert_eq!(tally.matched, expected, "all matched");
    println!("criterion 6 PASS: eq5.5 at {expected} primes");
}

/// Criterion 7: fast doubling equals the naive recurrence for all n <= 2000
/// over the verifier's (b, c) parameter shapes, and the doubling identity
/// holds on 10^4 random non-degenerate instances.
#[test]
fn criterion_7_lucas_engine() {
    // All verifier uses have b odd and c in {-1, -4^(alpha-1)}.
    for b in [1i64, 3, 5, 7] {
        for c in [-1i64, -4, -16, -64] {
            for p in [3i64, 5, 13, 41, 97, 1009, 4001, 9973] {
                let bb = b.rem_euclid(p);
                let cc = c.rem_euclid(p);
                let (mut u_prev, mut u) = (0i64, 1 % p);
                let (mut v_prev, mut v) = (2 % p, bb);
                for n in 0u64..=2_000 {
                    let (nu, nv) = match n {
                        0 => (0, 2 % p),
                        1 => (u, v),
                        _ => {
                            let un = (mul_mod(bb, u, p) - mul_mod(cc, u_prev, p)).rem_euclid(p);
                            let vn = (mul_mod(bb, v, p) - mul_mod(cc, v_prev, p)).rem_euclid(p);
                            u_prev = u;
                            u = un;
                            v_prev = v;
                            v = vn;
                            (u, v)
                        }
                    };
                    let fast = lucas_uv_mod(b, c, n, p).unwrap();
                    assert_eq!((fast.u, fast.v), (nu, nv), "b={b} c={c} n={n} p={p}");
                }
            }
        }
    }

    let primes: Vec<i64> = primes_up_to(3_000)
        .into_iter()
        .filter(|&p| p > 3)
        .map(|p| p as i64)
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(0xacce_0007);
    let mut tested = 0u32;
    while tested < 10_000 {
        let p = primes[rng.gen_range(0..primes.len())];
        let b = rng.gen_range(1..p);
        let c = rng.gen_range(1..p);
        if (b * b - 4 * c).rem_euclid(p) == 0 {
            continue;
        }
        let n = rng.gen_range(0..50_000u64);
        assert_eq!(check_doubling_identity(b, c, n, p), Ok(true), "b={b} c={c} n={n} p={p}");
        tested += 1;
    }
    println!("criterion 7 PASS: naive agreement to n = 2000 and 10^4 doubling-identity instances");
}

/// Criterion 8: two_squares and quad_reps match brute-force enumeration for
/// all p < 10^4 and q <= 50.
#[test]
fn criterion_8_representations_match_brute_force() {
    let mut reps_checked = 0u64;
    for p in primes_up_to(9_999) {
        let p = p as i64;
        if p % 4 != 1 {
            continue;
        }
        let ts = two_squares(p).unwrap();
        assert_eq!(ts.c * ts.c + ts.d * ts.d, p);
        assert_eq!(ts.c.rem_euclid(4), 1);
        assert_eq!((1 << ts.r) * ts.d0, ts.d);
        assert_eq!(ts.d0.rem_euclid(4), 1);
        let mut pairs = Vec::new();
        for a in 1..=integer_sqrt(p / 2) {
            let b2 = p - a * a;
            let b = integer_sqrt(b2);
            if b * b == b2 {
                pairs.push((a.min(b), a.max(b)));
            }
        }
        assert_eq!(pairs.len(), 1, "p={p} has a unique two-squares pair");
        let mut got = (ts.c.abs(), ts.d.abs());
        if got.0 > got.1 {
            got = (got.1, got.0);
        }
        assert_eq!(got, pairs[0], "p={p}");

        for q in 2i64..=50 {
            if q % p == 0 {
                continue;
            }
            let reps = quad_reps(p, q).unwrap();
            let mut brute = Vec::new();
            let mut y = 1i64;
            while q * y * y < p {
                let x2 = p - q * y * y;
                let x = integer_sqrt(x2);
                if x * x == x2 && x > 0 {
                    let y0 = y >> val2(y);
                    let ys = if y0.rem_euclid(4) == 1 { y } else { -y };
                    brute.push((-x, ys));
                    brute.push((x, ys));
                }
                y += 1;
            }
            brute.sort_by_key(|&(x, y)| (y.abs(), x));
            let got: Vec<(i64, i64)> = reps.iter().map(|r| (r.x, r.y)).collect();
            assert_eq!(got, brute, "p={p} q={q}");
            for r in &reps {
                assert_eq!((1 << r.t) * r.y0, r.y);
                assert_eq!(r.y0.rem_euclid(4), 1);
                assert_eq!((1 << r.s) * r.x0, r.x);
                reps_checked += 1;
            }
        }
    }
    println!("criterion 8 PASS: {reps_checked} representations against brute force");
}

/// Criterion 9: explore-mode scans of the criterion-4 grid classify
/// hypothesis-violating records separately and report their outcomes as
/// data; they are never counted as counterexamples.
#[test]
fn criterion_9_explore_mode_reports_data() {
    let mut explored = 0u64;
    let mut held = 0u64;
    let mut mismatched = 0u64;
    let mut broken = 0u64;
    for g in criterion_4_groups() {
        let summary = run_group(&g, 49_999, true);
        assert_eq!(
            summary.counterexample_count, 0,
            "explore scan of {} produced counterexamples",
            g.label
        );
        for (_, tally) in &summary.tallies {
            explored += tally.explore_evaluated;
            held += tally.explore_matched;
            mismatched += tally.explore_mismatched;
            broken += tally.explore_broken;
        }
    }
    // Reported as data, not asserted: the expected mismatch count is 0.
    println!(
        "criterion 9 PASS: explore data: evaluated={explored} held={held} \
         mismatched={mismatched} symbol-undefined={broken}"
    );
    assert!(explored > 0, "explore mode never engaged");
}
