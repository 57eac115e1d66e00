//! One PASS/FAIL line per acceptance criterion.
//!
//! Run with `cargo test -p cinorm-core --test acceptance -- --nocapture` to
//! see the lines. Correctness checks are exact; the only tolerances are the
//! wall-clock bounds below.

use cinorm::displacement::{packing_number, verify_master_inequalities};
use cinorm::group::{Element, FiniteGroup, GroupDescriptor, SubgroupSpec, DEFAULT_LIMIT};
use cinorm::norms::{support_norm, SupportNorm};
use cinorm::par;
use cinorm::rational::int;
use cinorm::suites::{run_suite, SuiteConfig, SuiteReport, SUITES};
use std::time::{Duration, Instant};

const SECS_ELEMENTARY: u64 = 5;
const SECS_SEVEN_FCOMM: u64 = 10;
const SECS_LEMMA23: u64 = 10;
const SECS_DISPLACEMENT: u64 = 60;
const SECS_PACKING_EACH: u64 = 120;
const SECS_NORM_AXIOMS: u64 = 5;
const SECS_AFF_GBAR: u64 = 5;
const SECS_GBAR_DEFECT: u64 = 30;
const SECS_PROP_WITNESS: u64 = 10;
const SECS_STABILIZATION: u64 = 10;
const DETERMINISM_THREADS: [usize; 2] = [1, 4];

struct Outcome {
    id: u32,
    title: &'static str,
    passed: bool,
    detail: String,
}

fn timed<T>(f: impl FnOnce() -> T) -> (T, Duration) {
    let start = Instant::now();
    let v = f();
    (v, start.elapsed())
}

fn suite(name: &str, seed: u64, budget: Option<usize>) -> SuiteReport {
    run_suite(name, &SuiteConfig { seed, budget }).expect("suite runs").report
}

fn check_passed(r: &SuiteReport, name: &str) -> bool {
    r.checks.iter().any(|c| c.name == name && c.passed)
}

fn checked(r: &SuiteReport, name: &str) -> u64 {
    r.checks.iter().find(|c| c.name == name).and_then(|c| c.detail["checked"].as_u64()).unwrap_or(0)
}

fn within(elapsed: Duration, secs: u64) -> bool {
    elapsed <= Duration::from_secs(secs)
}

fn fmt_time(elapsed: Duration, secs: u64) -> String {
    format!("{:.2}s (bound {secs}s)", elapsed.as_secs_f64())
}

fn c1() -> Outcome {
    let (r, t) = timed(|| suite("elementary-sl", 0, None));
    let n3 = checked(&r, "sl3z-elementary-commutator");
    let n4 = checked(&r, "sl4z-elementary-commutator");
    Outcome {
        id: 1,
        title: "E_13^p = [E_12, E_23^p] in SL(3,Z) and SL(4,Z), |p| <= 1000",
        passed: r.passed && n3 == 6 * 2001 && n4 == 24 * 2001 && within(t, SECS_ELEMENTARY),
        detail: format!("{n3} + {n4} exact cases, {}", fmt_time(t, SECS_ELEMENTARY)),
    }
}

fn c2() -> Outcome {
    let (r, t) = timed(|| suite("seven-fcomm", 42, Some(100)));
    let ok = check_passed(&r, "seven-fcommutator-reconstruction")
        && check_passed(&r, "two-commutator-witness")
        && checked(&r, "seven-fcommutator-reconstruction") == 100;
    Outcome {
        id: 2,
        title: "seven F-commutators and the two-commutator witness, 100 seeded targets",
        passed: ok && within(t, SECS_SEVEN_FCOMM),
        detail: format!("seed 42, {}", fmt_time(t, SECS_SEVEN_FCOMM)),
    }
}

fn c3() -> Outcome {
    let (r, t) = timed(|| suite("lemma23", 0, Some(1000)));
    let n = checked(&r, "rearrange-identity-system");
    Outcome {
        id: 3,
        title: "[F, phi^-1] = prod Conj_{F^i}(g_i) with literal prefix products",
        passed: check_passed(&r, "rearrange-identity-system") && n == 1000 && within(t, SECS_LEMMA23),
        detail: format!("{n} tuples, {}", fmt_time(t, SECS_LEMMA23)),
    }
}

/// `e_1` by a direct scan: `H = <(1 2), (1 2 3)>` commutes with
/// `φHφ⁻¹` iff every generator pair commutes.
fn e1_oracle(g: &FiniteGroup, gens: &[Element]) -> Option<i64> {
    let d = g.descriptor();
    g.elements()
        .iter()
        .filter(|phi| {
            let conj: Vec<Element> = gens.iter().map(|x| d.conjugate_of(x, phi).unwrap()).collect();
            gens.iter().all(|a| conj.iter().all(|b| d.commutator_of(a, b).unwrap().is_identity()))
        })
        .map(|phi| *support_norm(phi).unwrap().numer())
        .min()
}

fn c4() -> Outcome {
    let ((report, oracle), t) = timed(|| {
        let d: GroupDescriptor = "sn:9".parse().unwrap();
        let g = FiniteGroup::enumerate(&d, DEFAULT_LIMIT).unwrap();
        let gens = d.parse_elements("(1 2), (1 2 3)").unwrap();
        let h = SubgroupSpec::new(gens.clone());
        (verify_master_inequalities(&g, &h, 1, &SupportNorm, DEFAULT_LIMIT).unwrap(), e1_oracle(&g, &gens))
    });
    let e1 = report.energies[0].value;
    let four_e1: Vec<_> = report.inequality_checks.iter().filter(|c| c.bound == "4e_1").collect();
    let ok = e1 == Some(int(6))
        && oracle == Some(6)
        && !four_e1.is_empty()
        && four_e1.iter().all(|c| c.ok)
        && report.chain.failures == 0
        && report.chain.checked >= 36
        && report.passed;
    Outcome {
        id: 4,
        title: "S_9, H = Sym{1,2,3}, support norm: nu(x) <= 4 e_1 and the pointwise chain",
        passed: ok && within(t, SECS_DISPLACEMENT),
        detail: format!(
            "e_1 = {} (oracle {:?}), {} x in H', chain {} cases, {}",
            e1.map(|v| v.to_string()).unwrap_or_else(|| "inf".into()),
            oracle,
            four_e1.len(),
            report.chain.checked,
            fmt_time(t, SECS_DISPLACEMENT)
        ),
    }
}

fn c5() -> Outcome {
    let mut ok = true;
    let mut parts = Vec::new();
    for (n, want) in [(6usize, 2usize), (9, 3)] {
        let (res, t) = timed(|| {
            let d = GroupDescriptor::Symmetric(n);
            let g = FiniteGroup::enumerate(&d, DEFAULT_LIMIT).unwrap();
            let h = SubgroupSpec::new(d.parse_elements("(1 2), (1 2 3)").unwrap());
            packing_number(&g, &h, want + 1, DEFAULT_LIMIT).unwrap()
        });
        ok &= res.p == Some(want) && res.exhausted && within(t, SECS_PACKING_EACH);
        parts.push(format!("p(S_{n}) = {:?} exhausted={} {}", res.p, res.exhausted, fmt_time(t, SECS_PACKING_EACH)));
    }
    Outcome { id: 5, title: "packing numbers p(S_6) = 2, p(S_9) = 3", passed: ok, detail: parts.join("; ") }
}

fn c6() -> Outcome {
    let (r, t) = timed(|| suite("norm-axioms", 0, None));
    let ok = ["a5-qk-axioms", "a5-qk-set-closure-oracle", "a5-commutator-length"].iter().all(|c| check_passed(&r, c));
    Outcome {
        id: 6,
        title: "q_K on A_5: five axioms, set-closure oracle, cl = 1 off identity",
        passed: ok && within(t, SECS_NORM_AXIOMS),
        detail: fmt_time(t, SECS_NORM_AXIOMS),
    }
}

fn c7() -> Outcome {
    let ((a, g), t) = timed(|| (suite("aff-z", 0, None), suite("gbar", 0, None)));
    let ok = check_passed(&a, "conjugacy-t-tz2n")
        && check_passed(&a, "commutator-witness-z2n")
        && check_passed(&g, "bar-s5-multiplication-oracle")
        && check_passed(&g, "bar-s3-multiplication-oracle")
        && check_passed(&g, "bar-s5-splitting");
    Outcome {
        id: 7,
        title: "t ~ t z^{2n} in Aff(Z), |n| <= 100; Bar(S_5) product law and splitting, k <= 20",
        passed: ok && within(t, SECS_AFF_GBAR),
        detail: fmt_time(t, SECS_AFF_GBAR),
    }
}

fn c8() -> Outcome {
    let (r, t) = timed(|| suite("gbar-defect", 0, Some(10_000)));
    let n = checked(&r, "counting-qm-defect-decomposition");
    Outcome {
        id: 8,
        title: "defect decomposition of the Bar extension on Bar(F_2), counting qm `a b`",
        passed: check_passed(&r, "counting-qm-defect-decomposition") && n == 10_000 && within(t, SECS_GBAR_DEFECT),
        detail: format!("{n} triples, {}", fmt_time(t, SECS_GBAR_DEFECT)),
    }
}

fn c9() -> Outcome {
    let (r, t) = timed(|| suite("prop-witness", 0, Some(1000)));
    let n = checked(&r, "free2-cubed-witness-additivity");
    Outcome {
        id: 9,
        title: "combined commutator witnesses in F_2^3 add exactly",
        passed: r.passed && n == 1000 && within(t, SECS_PROP_WITNESS),
        detail: format!("{n} cases, {}", fmt_time(t, SECS_PROP_WITNESS)),
    }
}

fn c10() -> Outcome {
    let (r, t) = timed(|| suite("stabilization", 0, None));
    Outcome {
        id: 10,
        title: "stabilization bounds antitone in n_max and 0 on torsion",
        passed: r.passed && within(t, SECS_STABILIZATION),
        detail: format!(
            "{} torsion cases, {} antitone cases, {}",
            checked(&r, "torsion-is-zero"),
            checked(&r, "upper-bound-antitone-in-n-max"),
            fmt_time(t, SECS_STABILIZATION)
        ),
    }
}

fn c11() -> Outcome {
    let mut diverged = Vec::new();
    for name in SUITES {
        let cfg = SuiteConfig { seed: 7, budget: None };
        let reports: Vec<String> = DETERMINISM_THREADS
            .iter()
            .map(|&n| par::with_threads(n, || run_suite(name, &cfg).unwrap().report.to_json()))
            .collect();
        if reports.windows(2).any(|w| w[0] != w[1]) {
            diverged.push(*name);
        }
    }
    Outcome {
        id: 11,
        title: "byte-identical reports across 1 and 4 threads",
        passed: diverged.is_empty(),
        detail: format!("{} suites, diverged: {diverged:?}", SUITES.len()),
    }
}

#[test]
fn acceptance() {
    let outcomes = [c1(), c2(), c3(), c4(), c5(), c6(), c7(), c8(), c9(), c10(), c11()];
    for o in &outcomes {
        println!("{} [{:>2}] {}: {}", if o.passed { "PASS" } else { "FAIL" }, o.id, o.title, o.detail);
    }
    let failed: Vec<u32> = outcomes.iter().filter(|o| !o.passed).map(|o| o.id).collect();
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
