use std::collections::BTreeSet;

use godeaux::proof::{Fixtures, NodeKind, ProofTree, Report, Selector, Status};

fn run(tree: &ProofTree, sel: &Selector) -> Report {
    tree.run(sel, Fixtures::embedded().unwrap(), 2).unwrap().0
}

#[test]
fn only_the_homaloidal_step_is_open() {
    let r = run(&ProofTree::standard(), &Selector::All);
    assert!(r.summary.nodes >= 40);
    assert_eq!(r.summary.failed_ids, vec!["t.no0", "t.final"]);
    let t = r.node("t.final").unwrap();
    assert_eq!(t.reason.as_deref(), Some("dependency t.no0 failed"));
    let no0 = r.node("t.no0").unwrap();
    // the printed route closes, the lattice route does not
    assert!(no0.trace.iter().any(|l| l.starts_with("t.no0 0g/1a/1d/1f") && l.contains("contradiction")));
    assert!(no0.trace.iter().any(|l| l.starts_with("t.no0.lattice 0g/1a/1d/1f") && l.contains("survives")));
}

#[test]
fn statuses_follow_kinds() {
    let r = run(&ProofTree::standard(), &Selector::All);
    for n in &r.nodes {
        match (n.kind, n.status) {
            (_, Status::Failed) => {}
            (NodeKind::Axiom, s) => assert_eq!(s, Status::AxiomAssumed),
            (NodeKind::Elimination, s) => assert_eq!(s, Status::ContradictionAsExpected, "{}", n.id),
            (_, s) => assert_eq!(s, Status::Verified, "{}", n.id),
        }
    }
}

#[test]
fn removing_an_axiom_fails_everything_above_it() {
    let full = ProofTree::standard();
    let base = run(&full, &Selector::All);
    let axioms: Vec<&str> = full.nodes().iter().filter(|n| n.kind == NodeKind::Axiom).map(|n| n.id).collect();
    assert_eq!(axioms.len(), 7);
    for ax in axioms {
        let above: BTreeSet<&str> =
            full.nodes().iter().filter(|n| n.id != ax && full.closure(n.id).unwrap().contains(&ax)).map(|n| n.id).collect();
        assert!(above.contains("t.final"), "{ax} does not reach t.final");
        let cut = run(&full.clone().without(ax), &Selector::All);
        assert!(cut.node(ax).is_none());
        assert!(cut.axioms.iter().all(|a| a.id != ax));
        for id in &above {
            assert_eq!(cut.node(id).unwrap().status, Status::Failed, "{id} without {ax}");
        }
        for n in &cut.nodes {
            if !above.contains(n.id.as_str()) {
                assert_eq!(Some(n.status), base.node(&n.id).map(|b| b.status), "{} changed without {ax}", n.id);
            }
        }
    }
}

#[test]
fn axiom_removal_flips_a_verified_case() {
    let tree = ProofTree::standard();
    let sel = Selector::parse("i");
    assert!(run(&tree, &sel).verified());
    let cut = run(&tree.clone().without("ax.l-3Z"), &sel);
    assert!(!cut.verified());
    assert!(cut.node("l.fib").unwrap().reason.as_deref().unwrap().contains("ax.l-3Z is missing"));
}

#[test]
fn case_selectors_verify() {
    for (c, target) in [("i", "t.i"), ("ii", "t.ii"), ("iii", "t.iii2")] {
        let r = run(&ProofTree::standard(), &Selector::parse(c));
        assert_eq!(r.target, target);
        assert!(r.verified(), "{c}: {:?}", r.summary.failed_ids);
    }
}

#[test]
fn node_selection_runs_its_closure() {
    let tree = ProofTree::standard();
    let r = run(&tree, &Selector::Node("t.ii".into()));
    let ids: Vec<&str> = r.nodes.iter().map(|n| n.id.as_str()).collect();
    assert_eq!(ids, tree.closure("t.ii").unwrap());
    assert_eq!(r.nodes.iter().filter(|n| n.kind == NodeKind::Elimination).count(), 1);
}

#[test]
fn reports_do_not_depend_on_threads() {
    let tree = ProofTree::standard();
    let a = tree.run(&Selector::All, Fixtures::embedded().unwrap(), 1).unwrap().0;
    for jobs in [2, 5, 16] {
        let b = tree.run(&Selector::All, Fixtures::embedded().unwrap(), jobs).unwrap().0;
        assert_eq!(a.to_json(), b.to_json());
        assert_eq!(a.to_text(), b.to_text());
    }
}

#[test]
fn every_leaf_of_the_remaining_cases_is_closed() {
    let r = run(&ProofTree::standard(), &Selector::Node("s.more".into()));
    let s = r.node("s.more").unwrap();
    assert_eq!(s.status, Status::Verified);
    assert!(!s.trace.iter().any(|l| l.ends_with("OPEN")));
    for closer in ["t.no0", "t.no1rul", "t.no1", "t.3l-1", "t.no3lDP1", "t.no3lDP"] {
        assert!(s.trace.iter().any(|l| l.ends_with(closer)), "{closer} never closes a leaf");
    }
}
