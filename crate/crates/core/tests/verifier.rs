use ample_core::sequence::witness;
use ample_core::stallings::SubgroupGraph;
use ample_core::verifier::{
    check_acl_intersection, check_clause1, check_clause2, check_factorization, verify_ample, Config, Status,
    VerificationReport,
};
use ample_core::word::Word;

#[test]
fn small_n_pass_and_are_nested() {
    let config = Config::default();
    let reports: Vec<VerificationReport> = (1..=4).map(|n| verify_ample(n, &config).unwrap()).collect();
    for (k, r) in reports.iter().enumerate() {
        assert!(r.passed(), "n={}", k + 1);
    }
    // clause 2 and 4 results for n appear verbatim in the report for n + 1
    for pair in reports.windows(2) {
        for c in pair[0].clauses.iter().filter(|c| c.id.contains("i=")) {
            let later = pair[1].clauses.iter().find(|d| d.id == c.id).unwrap();
            assert_eq!((later.status, &later.evidence), (c.status, &c.evidence));
        }
    }
}

#[test]
fn reports_are_deterministic() {
    let a = verify_ample(3, &Config::default()).unwrap().without_timings();
    let b = verify_ample(3, &Config { parallelism: 1, ..Config::default() }).unwrap().without_timings();
    assert_eq!(a.clauses, b.clauses);
    assert_eq!(a.overall, b.overall);
    let again = verify_ample(3, &Config::default()).unwrap().without_timings();
    assert_eq!(a.to_json(), again.to_json());
}

#[test]
fn replay_reproduces_every_clause() {
    let r = verify_ample(3, &Config::default()).unwrap();
    let parsed = VerificationReport::from_json(&r.to_json()).unwrap();
    for (id, ok) in parsed.replay() {
        assert!(ok, "clause {id}");
    }
}

#[test]
fn clause1_minimal_lengths() {
    let config = Config::default();
    let expected = [4, 8, 12, 16];
    for (n, len) in (1..=4).zip(expected) {
        let r = check_clause1(n, &config).unwrap();
        assert_eq!(r.status, Status::Pass);
        assert_eq!(r.evidence["minimal_length"], len);
        assert_eq!(r.evidence["minimality_rechecked"], true);
    }
}

#[test]
fn negative_controls_flip_verdicts() {
    let w = |s: &str| s.parse::<Word>().unwrap();
    for i in 1..=3 {
        assert_eq!(check_clause2(i).status, Status::Pass);
        assert_eq!(check_factorization(i, &w("[e2,e3]")).status, Status::Fail);
        assert_eq!(check_factorization(i, &witness(i).pow(2)).status, Status::Fail);
    }
    // disjoint closures
    let h1 = SubgroupGraph::build(&[w("e1")]);
    let h2 = SubgroupGraph::build(&[w("e2")]);
    let ok = check_acl_intersection("x".into(), &h1, &h2, &SubgroupGraph::trivial(), 8);
    assert_eq!(ok.status, Status::Pass);
    let bad = check_acl_intersection("x".into(), &h1, &h2, &h1, 8);
    assert_eq!(bad.status, Status::Fail);
    // the wrong right-hand closure in clause 4
    let a: Vec<Word> = (0..3).map(witness).collect();
    let r = check_acl_intersection(
        "4".into(),
        &SubgroupGraph::build(&a[..2]),
        &SubgroupGraph::build(&a[1..]),
        &SubgroupGraph::build(&a[..1]),
        8,
    );
    assert_eq!(r.status, Status::Fail);
}
