use tsyslab_core::casorati::{run_casorati, CasoratiConfig, FrameSet, Precision, Specialization};
use tsyslab_core::diffop::{build_l, check_tt2, extract_t};
use tsyslab_core::numeric::{lower, rel_err};
use tsyslab_core::report::Status;
use tsyslab_core::ring::text::{parse_poly, print_poly};
use tsyslab_core::root_data::make_algebra;
use tsyslab_core::tsystem::{jacobi_trudi, TSystem};
use tsyslab_core::{AlgebraKind, AlgebraSpec, Error, Shift};

#[test]
fn text_round_trip_of_computed_tables() {
    for (kind, n, k) in [
        (AlgebraKind::A2Odd, 2, 0),
        (AlgebraKind::D2, 2, 4),
        (AlgebraKind::D3_4, 2, 3),
    ] {
        let s = AlgebraSpec::new(kind, n).unwrap();
        let t = extract_t(&s, &build_l(&s, k).unwrap());
        for a in 0..t.upper_len() as i64 {
            let p = t.upper(a).unwrap();
            let text = print_poly(&p);
            assert_eq!(parse_poly(&text).unwrap(), p, "{kind:?} T^{a}");
        }
    }
}

#[test]
fn parse_errors_report_columns() {
    let e = parse_poly("Q[1](u").unwrap_err();
    assert_eq!(e.column, 7);
    assert!(parse_poly("Y[1](u) +").is_err());
    assert!(parse_poly("1").unwrap().is_one());
}

#[test]
fn spec_construction_errors() {
    assert!(matches!(make_algebra("e6", 2), Err(Error::UnknownKind(_))));
    assert!(matches!(make_algebra("a2odd", 1), Err(Error::RankOutOfRange { .. })));
    assert!(matches!(make_algebra("d3_4", 3), Err(Error::RankOutOfRange { .. })));
    assert!(make_algebra("d2", 2).is_ok());
}

#[test]
fn truncated_table_limits() {
    let s = make_algebra("d2", 2).unwrap();
    let t = extract_t(&s, &build_l(&s, 3).unwrap());
    assert_eq!(t.upper_len(), 4);
    assert!(t.upper(4).is_err());
    let r = check_tt2(&t.with_lower(3).unwrap()).unwrap();
    assert!(r.passed(), "{r}");
}

#[test]
fn casorati_agrees_with_symbolic_evaluation() {
    let s = make_algebra("a2even", 2).unwrap();
    let table = extract_t(&s, &build_l(&s, 0).unwrap());
    let cfg = CasoratiConfig::default();
    let spc = Specialization::<f64>::sample(&s, &cfg, 99).unwrap();
    let frames = FrameSet::new(&spc, 8, 1).unwrap();
    let mut ts = TSystem::new(&table).unwrap();
    for (a, m) in [(1, 1), (2, 1), (1, 2), (2, 2)] {
        let at = Shift::real(3);
        let numeric = frames.t_casorati(a, m, &at).unwrap();
        let exact = ts.get(a as i64, m as usize, &Shift::zero()).unwrap();
        let value = spc.eval_poly(&exact, &at).unwrap();
        assert!(
            rel_err(&numeric, &value, 0.0) < 1e-9,
            "a={a} m={m}: {:?} vs {:?}",
            lower(&numeric),
            lower(&value)
        );
        assert_eq!(
            exact,
            jacobi_trudi(&table, a as i64, m as usize, &Shift::zero()).unwrap()
        );
    }
}

#[test]
fn casorati_runs_are_reproducible() {
    let s = make_algebra("a2odd", 2).unwrap();
    let cfg = CasoratiConfig {
        m_max: 2,
        ..CasoratiConfig::default()
    };
    let a = run_casorati(&s, &cfg, 17, 3, Precision::Double).unwrap();
    let b = run_casorati(&s, &cfg, 17, 3, Precision::Double).unwrap();
    assert_eq!(a.items, b.items);
    assert_eq!(a.status, Status::Pass, "{a}");
    assert_eq!(a.params.seed, Some(17));
    assert_eq!(a.params.precision.as_deref(), Some("double"));
}

#[test]
fn high_precision_is_tighter() {
    let s = make_algebra("a2even", 1).unwrap();
    let cfg = CasoratiConfig::default();
    let r = run_casorati(&s, &cfg, 5, 1, Precision::High).unwrap();
    assert!(r.passed(), "{r}");
    let worst = r
        .items
        .iter()
        .filter_map(|i| match i.residual {
            tsyslab_core::report::Residual::Numeric { max_rel_error, .. } => Some(max_rel_error),
            _ => None,
        })
        .fold(0.0, f64::max);
    assert!(worst < 1e-30, "{worst}");
}

#[test]
fn series_algebras_are_out_of_casorati_scope() {
    let s = make_algebra("d3_4", 2).unwrap();
    let err = run_casorati(&s, &CasoratiConfig::default(), 0, 1, Precision::Double).unwrap_err();
    assert!(matches!(err, Error::Unsupported { .. }));
}
