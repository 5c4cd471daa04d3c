use ghwlab::code::build_code;
use ghwlab::defining::{
    class1_build, class2_build, class3_build, class3_variant_build, ClassRequest, DefiningSet,
    ThetaStrategy, TracePattern,
};
use ghwlab::ghw::{
    ghw_dual_oracle, ghw_support_oracle, verify_hierarchy, Limits, Method, Status, VerifyOptions,
};

fn oracle_columns(set: &DefiningSet) -> (Vec<usize>, Vec<usize>) {
    let code = build_code(set).unwrap();
    let kernel = code.kernel_space();
    let limits = Limits::default();
    let support = (1..=code.code_dim())
        .map(|r| ghw_support_oracle(&code, r, &limits).unwrap().value)
        .collect();
    let dual = (1..=code.code_dim())
        .map(|r| ghw_dual_oracle(set, &kernel, r, &limits).unwrap().value)
        .collect();
    (support, dual)
}

fn check(set: &DefiningSet, n: usize, dim: usize, hierarchy: &[usize]) {
    let report = verify_hierarchy(set, &VerifyOptions::default()).unwrap();
    assert_eq!((report.n, report.dim), (n, dim), "{:?}", set.params());
    assert_eq!(report.column(Method::Support).unwrap(), hierarchy);
    assert_eq!(report.column(Method::Dual).unwrap(), hierarchy);
    assert_eq!(report.status, Status::Passed, "{:#?}", report);
}

#[test]
fn class1_q3_m3_k1_h2() {
    let set = class1_build(3, 3, 1, 2, &ThetaStrategy::FirstCosets).unwrap();
    check(&set, 18, 3, &[12, 16, 18]);
}

#[test]
fn class1_q3_m4_k2_h2() {
    let set = class1_build(3, 4, 2, 2, &ThetaStrategy::FirstCosets).unwrap();
    check(&set, 54, 4, &[36, 48, 52, 54]);
}

#[test]
fn class1_q2_m4_k2_h1() {
    let set = class1_build(2, 4, 2, 1, &ThetaStrategy::FirstCosets).unwrap();
    check(&set, 8, 4, &[4, 6, 7, 8]);
    let report = verify_hierarchy(&set, &VerifyOptions::default()).unwrap();
    assert!(report.notes.iter().any(|n| n.contains("mismatch")));
}

#[test]
fn class2_examples() {
    check(
        &class2_build(2, 3, 1, 2, 1).unwrap(),
        12,
        5,
        &[4, 8, 10, 11, 12],
    );
    check(
        &class2_build(3, 2, 1, 2, 1).unwrap(),
        36,
        4,
        &[18, 30, 34, 36],
    );
}

#[test]
fn class2_exceptional_case_uses_oracles_only() {
    let set = class2_build(2, 2, 1, 2, 1).unwrap();
    let report = verify_hierarchy(&set, &VerifyOptions::default()).unwrap();
    assert_eq!((report.n, report.dim), (4, 3));
    assert_eq!(report.hierarchy(), vec![2, 3, 4]);
    assert!(report.rows.iter().all(|r| r.d_formula.is_none()));
    assert!(report.notes.iter().any(|n| n.contains("exceptional")));
    assert_eq!(report.status, Status::Passed);
}

#[test]
fn class3_examples() {
    check(&class3_build(2).unwrap(), 4, 4, &[1, 2, 3, 4]);
    check(&class3_build(3).unwrap(), 16, 6, &[6, 10, 12, 14, 15, 16]);
}

#[test]
fn class1_q2_m4_k2_h0_parameters() {
    let code = build_code(&class1_build(2, 4, 2, 0, &ThetaStrategy::FirstCosets).unwrap()).unwrap();
    assert_eq!((code.length(), code.code_dim()), (12, 4));
}

#[test]
fn theta_choice_does_not_change_hierarchy() {
    let greedy = class1_build(3, 3, 1, 2, &ThetaStrategy::FirstCosets).unwrap();
    let explicit = ClassRequest::Class1 {
        q: 3,
        m: 3,
        k: 1,
        h: 2,
        thetas: Some(vec!["001".into(), "002".into()]),
    }
    .build()
    .unwrap();
    assert_ne!(greedy.elements(), explicit.elements());
    assert_eq!(oracle_columns(&greedy), oracle_columns(&explicit));

    let a = class1_build(2, 4, 2, 1, &ThetaStrategy::FirstCosets).unwrap();
    let b = ClassRequest::Class1 {
        q: 2,
        m: 4,
        k: 2,
        h: 1,
        thetas: Some(vec!["0011".into()]),
    }
    .build()
    .unwrap();
    assert_ne!(a.elements(), b.elements());
    assert_eq!(oracle_columns(&a), oracle_columns(&b));
}

#[test]
fn oracles_agree_on_butterfly_variants() {
    for m in 2..=3 {
        for pattern in TracePattern::ALL {
            let set = class3_variant_build(m, pattern).unwrap();
            let (support, dual) = oracle_columns(&set);
            assert_eq!(support, dual, "m={m} pattern={pattern}");
        }
        let (a, _) = oracle_columns(&class3_variant_build(m, TracePattern(0, 1)).unwrap());
        let (b, _) = oracle_columns(&class3_variant_build(m, TracePattern(1, 0)).unwrap());
        assert_eq!(a, b);
    }
}

#[test]
fn class3_m4_dual_oracle_matches_formula() {
    let set = class3_build(4).unwrap();
    let opts = VerifyOptions {
        methods: vec![Method::Dual, Method::Formula],
        lemma_checks: false,
        limits: Limits::forced(),
        deterministic: true,
    };
    let report = verify_hierarchy(&set, &opts).unwrap();
    assert_eq!(report.status, Status::Passed, "{:#?}", report);
    assert_eq!(report.column(Method::Dual), report.column(Method::Formula));
    assert_eq!(report.dim, 8);
}
