use ruletree::audit::{run_audit, AuditConfig};

fn small() -> AuditConfig {
    AuditConfig {
        max_n: 3,
        max_k: 2,
        trials: 30,
        seed: 3,
        ..AuditConfig::default()
    }
}

#[test]
fn default_audit_is_clean() {
    let report = run_audit(&AuditConfig::default());
    assert!(report.is_clean(), "{report}");
}

#[test]
fn corrupted_certified_trees_are_caught() {
    let report = run_audit(&AuditConfig {
        corrupt_certified_trees: true,
        ..small()
    });
    assert!(report.failed() > 0);
    let f = &report.failures[0];
    assert!(f.check.contains("certified trees"), "{f}");
    assert!(!f.system.is_empty());
    let tree = f.tree.as_ref().expect("failure carries its tree");
    assert!(tree.contains("system_digest"));
    // the artifact replays: the tree file parses against the dumped system
    let system = ruletree::dsl::parse_system(&f.system).unwrap();
    assert!(ruletree::tree_io::tree_from_json(tree, &system).is_ok());
}

#[test]
fn report_is_deterministic() {
    let a = run_audit(&small());
    let b = run_audit(&small());
    assert_eq!(a.tallies, b.tallies);
    assert_eq!(a.failures, b.failures);
}
