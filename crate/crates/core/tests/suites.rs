use mmdist::checks::{axioms_suite, lemmas_suite, oracles_suite, Outcome, SuiteConfig};

fn assert_all(outcomes: Vec<Outcome>) {
    for o in &outcomes {
        assert!(o.cases > 0, "{} ran no cases", o.name);
        assert!(o.passed(), "{}: {}", o.name, o.failures.join("\n"));
    }
}

#[test]
fn axioms() {
    assert_all(axioms_suite(&SuiteConfig { seed: 7, count: Some(30), ..SuiteConfig::default() }));
}

#[test]
fn lemmas() {
    assert_all(lemmas_suite(&SuiteConfig { seed: 7, count: Some(60), ..SuiteConfig::default() }));
}

#[test]
fn oracles() {
    assert_all(oracles_suite(&SuiteConfig { seed: 7, count: Some(20), ..SuiteConfig::default() }));
}
