//! Acceptance suite: one pass/fail line per criterion, with its time budget.
//! Exits non-zero if any criterion fails.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use proptest::prelude::*;
use proptest::test_runner::{Config as PropConfig, TestRunner};

use tsyslab_core::beta::check_beta;
use tsyslab_core::casorati::{run_casorati, CasoratiConfig, Precision};
use tsyslab_core::diffop::d34::check_d34_lemmas;
use tsyslab_core::diffop::{build_l, check_duality, check_tq, check_tq_dualized, check_tt2, extract_t, OrderBound};
use tsyslab_core::report::{CheckReport, Residual, Status};
use tsyslab_core::ring::text::{parse_poly, print_poly};
use tsyslab_core::ring::y_to_q;
use tsyslab_core::screening::{
    check_hk_annihilation, check_s_functional, check_screening_annihilation, ScreeningContext,
};
use tsyslab_core::tsystem::{check_tsystem_symbolic, jacobi_trudi, tableaux_sum, YoungData};
use tsyslab_core::{AlgebraKind, AlgebraSpec, Family, LaurentPoly, Shift, TTable};

const NUMERIC_TOL: f64 = 1e-8;
const TRIALS: usize = 20;
const SEED: u64 = 2024;
const PROPERTY_CASES: u32 = 500;

const A2_CASES: [(AlgebraKind, u32); 4] = [
    (AlgebraKind::A2Even, 1),
    (AlgebraKind::A2Even, 2),
    (AlgebraKind::A2Odd, 2),
    (AlgebraKind::A2Odd, 3),
];

type Verdict = Result<String, String>;

fn spec(kind: AlgebraKind, n: u32) -> AlgebraSpec {
    AlgebraSpec::new(kind, n).expect("in-scope algebra")
}

fn table(s: &AlgebraSpec, cutoff: usize) -> TTable {
    extract_t(s, &build_l(s, cutoff).expect("operator builds"))
}

fn label(s: &AlgebraSpec) -> String {
    let tz = if s.theta_zero() { ", theta-zero" } else { "" };
    format!("{} n={}{tz}", s.kind().name(), s.n())
}

fn require(report: tsyslab_core::Result<CheckReport>, what: &str) -> Result<CheckReport, String> {
    let r = report.map_err(|e| format!("{what}: {e}"))?;
    match r.first_failure() {
        None => Ok(r),
        Some(item) => Err(format!("{what}: {} failed: {:?}", item.label, item.residual)),
    }
}

fn worst_numeric(r: &CheckReport, prefix: &str) -> f64 {
    r.items
        .iter()
        .filter(|i| i.label.starts_with(prefix))
        .filter_map(|i| match i.residual {
            Residual::Numeric { max_rel_error, .. } => Some(max_rel_error),
            _ => None,
        })
        .fold(0.0, f64::max)
}

/// Casorati items whose label starts with `prefix`: present, passing, within `NUMERIC_TOL`.
fn numeric_items(r: &CheckReport, prefix: &str, expected: usize) -> Result<f64, String> {
    let items: Vec<_> = r.items.iter().filter(|i| i.label.starts_with(prefix)).collect();
    if items.len() < expected {
        return Err(format!(
            "{}: expected {expected} `{prefix}` items, got {}",
            r.check,
            items.len()
        ));
    }
    for i in &items {
        match i.residual {
            Residual::Numeric {
                max_rel_error,
                tolerance,
            } if max_rel_error <= NUMERIC_TOL && tolerance <= NUMERIC_TOL => {}
            _ => return Err(format!("{}: {} -> {:?}", r.check, i.label, i.residual)),
        }
        if i.status == Status::Fail {
            return Err(format!("{} failed", i.label));
        }
    }
    Ok(worst_numeric(r, prefix))
}

fn casorati(kind: AlgebraKind, n: u32) -> Result<CheckReport, String> {
    let cfg = CasoratiConfig {
        m_max: 3,
        ..CasoratiConfig::default()
    };
    assert!(cfg.base_points >= 3);
    let s = spec(kind, n);
    require(run_casorati(&s, &cfg, SEED, TRIALS, Precision::Double), &label(&s))
}

fn c1_expansion() -> Verdict {
    let mut slowest = Duration::ZERO;
    for (kind, n) in A2_CASES {
        let start = Instant::now();
        let s = spec(kind, n);
        let l = build_l(&s, 8).map_err(|e| e.to_string())?;
        let top = s.rank() as usize + 1;
        if l.bound() != OrderBound::Exact || l.degree() != Some(top) {
            return Err(format!("{}: operator is not exact of degree {top}", label(&s)));
        }
        let t = extract_t(&s, &l);
        let ok = t.upper(0).unwrap().is_one()
            && t.upper(top as i64).unwrap().is_one()
            && (top + 1..top + 4).all(|a| t.upper(a as i64).unwrap().is_zero());
        if !ok {
            return Err(format!("{}: boundary T-functions wrong", label(&s)));
        }
        let took = start.elapsed();
        if took > Duration::from_secs(5) {
            return Err(format!("{}: {took:?} exceeds 5 s", label(&s)));
        }
        slowest = slowest.max(took);
    }
    Ok(format!("4 cases exact, slowest {:.2} s", slowest.as_secs_f64()))
}

fn c2_screening() -> Verdict {
    let mut count = 0;
    for (kind, n) in A2_CASES {
        let s = spec(kind, n);
        let r = require(
            check_screening_annihilation(&table(&s, 0), s.rank() as usize + 1),
            &label(&s),
        )?;
        count += r.items.len();
    }
    for (kind, n) in [(AlgebraKind::D2, 2), (AlgebraKind::D2, 3), (AlgebraKind::D3_4, 2)] {
        let s = spec(kind, n);
        let r = require(check_screening_annihilation(&table(&s, 8), 6), &label(&s))?;
        if r.items.len() != 7 * s.n() as usize {
            return Err(format!("{}: expected b = 0..6 for each a", label(&s)));
        }
        count += r.items.len();
    }
    Ok(format!("{count} products S_a T^b are zero"))
}

fn c3_functional_equation() -> Verdict {
    let cases = [
        (AlgebraKind::A2Even, 1),
        (AlgebraKind::A2Even, 2),
        (AlgebraKind::A2Even, 3),
        (AlgebraKind::A2Odd, 2),
        (AlgebraKind::A2Odd, 3),
        (AlgebraKind::D2, 2),
        (AlgebraKind::D2, 3),
        (AlgebraKind::D3_4, 2),
    ];
    let mut count = 0;
    for (kind, n) in cases {
        let s = spec(kind, n);
        count += require(check_s_functional(&s), &label(&s))?.items.len();
    }
    Ok(format!("{count} (algebra, a) pairs"))
}

fn c4_duality() -> Verdict {
    let mut count = 0;
    for (kind, n) in A2_CASES {
        let s = spec(kind, n);
        count += require(check_duality(&table(&s, 0)), &label(&s))?.items.len();
    }
    Ok(format!("{count} identities T^a = T^(N+1-a)(u+t/2)"))
}

fn c5_tq_tt() -> Verdict {
    let mut count = 0;
    for theta_zero in [false, true] {
        for (kind, n) in A2_CASES {
            let s = spec(kind, n).with_theta_zero(theta_zero);
            let l = build_l(&s, 0).map_err(|e| e.to_string())?;
            let t = extract_t(&s, &l);
            count += require(check_tq(&s, &l), &label(&s))?.items.len();
            count += require(check_tq_dualized(&t), &label(&s))?.items.len();
            let lower = t.with_lower(6).map_err(|e| e.to_string())?;
            let r = require(check_tt2(&lower), &label(&s))?;
            if r.items.len() != 7 {
                return Err(format!("{}: TT-2 did not cover m = 0..6", label(&s)));
            }
            count += r.items.len();
        }
    }
    Ok(format!("{count} exact residuals, with and without theta-zero"))
}

fn c6_d34() -> Verdict {
    let s = spec(AlgebraKind::D3_4, 2);
    let lemmas = require(check_d34_lemmas(&s, 8), "d3_4 lemmas")?;
    let hk = require(check_hk_annihilation(&s), "d3_4 H/K")?;
    Ok(format!(
        "{} lemma items, {} H/K annihilations",
        lemmas.items.len(),
        hk.items.len()
    ))
}

fn c7_triple_agreement() -> Verdict {
    let mut worst: f64 = 0.0;
    for (kind, n) in [(AlgebraKind::A2Even, 1), (AlgebraKind::A2Odd, 2)] {
        let s = spec(kind, n);
        let t = table(&s, 0);
        for a in 1..=n {
            for m in 1..=3u32 {
                let base = Shift::real(-(a as i64) - m as i64 + 1);
                let data = YoungData::for_xi(s.rank(), a, m).map_err(|e| e.to_string())?;
                let sum = tableaux_sum(&s, &data, &base).map_err(|e| e.to_string())?;
                let jt = jacobi_trudi(&t, a as i64, m as usize, &Shift::zero()).map_err(|e| e.to_string())?;
                if sum != jt {
                    return Err(format!("{}: tableaux != Jacobi-Trudi at a={a} m={m}", label(&s)));
                }
            }
        }
        let r = casorati(kind, n)?;
        worst = worst.max(numeric_items(&r, "jacobi-trudi", 3 * n as usize)?);
        worst = worst.max(numeric_items(&r, "m-nnsy", 2)?);
    }
    Ok(format!(
        "exact tableaux = JT; Casorati worst rel.err {worst:.1e} over {TRIALS} trials"
    ))
}

fn c8_tsystem() -> Verdict {
    let mut worst: f64 = 0.0;
    for (kind, n) in [
        (AlgebraKind::A2Even, 1),
        (AlgebraKind::A2Even, 2),
        (AlgebraKind::A2Odd, 2),
    ] {
        let s = spec(kind, n);
        let r = require(check_tsystem_symbolic(&table(&s, 0), n, 2), &label(&s))?;
        if r.items.len() != 2 * n as usize {
            return Err(format!("{}: symbolic T-system did not cover a <= n, m <= 2", label(&s)));
        }
        let r = casorati(kind, n)?;
        worst = worst.max(numeric_items(&r, "t-system", 3 * n as usize)?);
    }
    Ok(format!("symbolic residuals zero; numeric worst rel.err {worst:.1e}"))
}

fn c9_casorati_structure() -> Verdict {
    let mut worst: f64 = 0.0;
    for (kind, n) in [(AlgebraKind::A2Even, 1), (AlgebraKind::A2Odd, 2)] {
        let big_n = spec(kind, n).rank() as usize;
        let r = casorati(kind, n)?;
        worst = worst.max(numeric_items(&r, "[0..N] = [1..N+1]", 1)?);
        worst = worst.max(numeric_items(&r, "ta1", big_n)?);
        worst = worst.max(numeric_items(&r, "plucker", 1)?);
        worst = worst.max(numeric_items(&r, "dual-Ca", 1)?);
    }
    Ok(format!("shift, ta1, Plucker, dual-Ca worst rel.err {worst:.1e}"))
}

fn c10_beta() -> Verdict {
    let cases = [
        (AlgebraKind::A2Even, 1, 0),
        (AlgebraKind::A2Even, 2, 0),
        (AlgebraKind::A2Odd, 2, 0),
        (AlgebraKind::A2Odd, 3, 0),
        (AlgebraKind::D2, 2, 8),
        (AlgebraKind::D2, 3, 8),
        (AlgebraKind::D3_4, 2, 8),
    ];
    let mut tops = 0;
    for (kind, n, k) in cases {
        let s = spec(kind, n);
        let r = require(check_beta(&table(&s, k)), &label(&s))?;
        tops += r.items.iter().filter(|i| i.label.ends_with("top weight")).count();
        if kind.is_a2() && !r.items.iter().any(|i| i.label == "T^1 term count") {
            return Err(format!("{}: term count missing", label(&s)));
        }
    }
    Ok(format!("{tops} top terms with coefficient 1 and weight Lambda_a"))
}

fn arb_poly(family: Family) -> impl Strategy<Value = LaurentPoly> {
    let sym = (1u32..3, -3i64..4, 0i64..4, -2i64..3);
    let term = (-3i64..4, prop::collection::vec(sym, 0..3), 0i64..2);
    prop::collection::vec(term, 0..6).prop_map(move |terms| {
        let mut p = LaurentPoly::zero();
        for (c, syms, unit) in terms {
            let mut t = LaurentPoly::constant(c);
            for (idx, sp, sq, e) in syms {
                let sym = LaurentPoly::symbol_pow(family, idx, &Shift::from_ints(sp, 1, sq, 2), e);
                t = &t * &sym;
            }
            if family == Family::Q {
                t = &t * &LaurentPoly::unit(1, unit);
            }
            p = &p + &t;
        }
        p
    })
}

fn arb_shift() -> impl Strategy<Value = Shift> {
    (-6i64..7, 1i64..4, -6i64..7, 1i64..4).prop_map(|(a, b, c, d)| Shift::from_ints(a, b, c, d))
}

fn runner() -> TestRunner {
    TestRunner::new(PropConfig {
        cases: PROPERTY_CASES,
        failure_persistence: None,
        ..PropConfig::default()
    })
}

fn c11_properties() -> Verdict {
    let fail = |name: &str, e: String| format!("{name}: {e}");
    for family in [Family::Y, Family::Q] {
        runner()
            .run(&(arb_poly(family), arb_poly(family), arb_poly(family)), |(x, y, z)| {
                prop_assert_eq!(&(&x + &y) + &z, &x + &(&y + &z));
                prop_assert_eq!(&(&x * &y) * &z, &x * &(&y * &z));
                prop_assert_eq!(&x * &y, &y * &x);
                prop_assert_eq!(&x * &(&y + &z), &(&x * &y) + &(&x * &z));
                prop_assert!((&x + &(-x.clone())).is_zero());
                prop_assert_eq!(&x * &LaurentPoly::one(), x.clone());
                Ok(())
            })
            .map_err(|e| fail("ring axioms", e.to_string()))?;
    }
    let s = spec(AlgebraKind::A2Odd, 2);
    runner()
        .run(&(arb_poly(Family::Y), arb_poly(Family::Y), 1u32..3), |(x, y, a)| {
            let mut ctx = ScreeningContext::new(&s, a).unwrap();
            let lhs = ctx.apply(&(&x * &y)).unwrap();
            let rhs =
                &(&ctx.apply(&x).unwrap() * &y_to_q(&y).unwrap()) + &(&y_to_q(&x).unwrap() * &ctx.apply(&y).unwrap());
            prop_assert_eq!(lhs, rhs);
            Ok(())
        })
        .map_err(|e| fail("Leibniz", e.to_string()))?;
    runner()
        .run(&(arb_poly(Family::Q), arb_shift(), arb_shift()), |(p, d1, d2)| {
            let sum = &d1 + &d2;
            prop_assert_eq!(p.shift_all(&d1).shift_all(&d2), p.shift_all(&sum));
            prop_assert_eq!(&sum, &(&d2 + &d1));
            prop_assert_eq!(p.shift_all(&Shift::zero()), p.clone());
            Ok(())
        })
        .map_err(|e| fail("shift composition", e.to_string()))?;
    for family in [Family::Y, Family::Q] {
        runner()
            .run(&arb_poly(family), |p| {
                let text = print_poly(&p);
                let back = parse_poly(&text).unwrap();
                prop_assert_eq!(&back, &p);
                prop_assert_eq!(print_poly(&back), text);
                Ok(())
            })
            .map_err(|e| fail("parser round-trip", e.to_string()))?;
    }
    Ok(format!("4 suites x {PROPERTY_CASES} cases, no failures"))
}

struct Criterion {
    id: u32,
    title: &'static str,
    budget_s: u64,
    run: fn() -> Verdict,
}

const CRITERIA: [Criterion; 11] = [
    Criterion {
        id: 1,
        title: "exact expansion closure",
        budget_s: 20,
        run: c1_expansion,
    },
    Criterion {
        id: 2,
        title: "screening annihilation",
        budget_s: 60,
        run: c2_screening,
    },
    Criterion {
        id: 3,
        title: "formal-solution functional equation",
        budget_s: 1,
        run: c3_functional_equation,
    },
    Criterion {
        id: 4,
        title: "duality",
        budget_s: 10,
        run: c4_duality,
    },
    Criterion {
        id: 5,
        title: "T-Q and T-T relations",
        budget_s: 30,
        run: c5_tq_tt,
    },
    Criterion {
        id: 6,
        title: "D(3)_4 structural lemmas",
        budget_s: 30,
        run: c6_d34,
    },
    Criterion {
        id: 7,
        title: "Jacobi-Trudi / tableaux / Casorati agreement",
        budget_s: 60,
        run: c7_triple_agreement,
    },
    Criterion {
        id: 8,
        title: "T-system",
        budget_s: 120,
        run: c8_tsystem,
    },
    Criterion {
        id: 9,
        title: "Casorati structure",
        budget_s: 60,
        run: c9_casorati_structure,
    },
    Criterion {
        id: 10,
        title: "beta top term",
        budget_s: 5,
        run: c10_beta,
    },
    Criterion {
        id: 11,
        title: "kernel robustness",
        budget_s: 60,
        run: c11_properties,
    },
];

fn main() {
    let mut failures = 0;
    println!("\nrunning {} acceptance criteria", CRITERIA.len());
    for c in &CRITERIA {
        let start = Instant::now();
        let verdict = catch_unwind(AssertUnwindSafe(c.run)).unwrap_or_else(|panic| {
            let msg = panic
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| panic.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panic".into());
            Err(format!("panicked: {msg}"))
        });
        let secs = start.elapsed().as_secs_f64();
        let verdict = match verdict {
            Ok(detail) if secs > c.budget_s as f64 => Err(format!("{detail}; over budget")),
            v => v,
        };
        let (tag, detail) = match &verdict {
            Ok(d) => ("PASS", d),
            Err(d) => ("FAIL", d),
        };
        if verdict.is_err() {
            failures += 1;
        }
        println!(
            "criterion {:>2} [{tag}] {}: {detail} ({secs:.2} s / {} s)",
            c.id, c.title, c.budget_s
        );
    }
    println!(
        "\nacceptance result: {}. {} passed; {failures} failed\n",
        if failures == 0 { "ok" } else { "FAILED" },
        CRITERIA.len() - failures
    );
    if failures > 0 {
        std::process::exit(1);
    }
}
