use std::collections::{BTreeMap, BTreeSet};
use std::time::{Duration, Instant};

use rayon::prelude::*;
use thiserror::Error;

use super::fixtures::Fixtures;
use super::nodes::{registry, Ctx, NodeKind, NodeSpec, Outcome};
use super::report::{AxiomEntry, NodeResult, Report, Status};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum TreeError {
    #[error("unknown node {0}")]
    UnknownNode(String),
    #[error("duplicate node {0}")]
    Duplicate(String),
    #[error("cycle through {0}")]
    Cycle(String),
    #[error("thread pool: {0}")]
    Pool(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Selector {
    All,
    Node(String),
}

impl Selector {
    /// `i`, `ii`, `iii` name the case conclusions.
    pub fn parse(s: &str) -> Selector {
        match s {
            "all" => Selector::All,
            "i" => Selector::Node("t.i".into()),
            "ii" => Selector::Node("t.ii".into()),
            "iii" => Selector::Node("t.iii2".into()),
            _ => Selector::Node(s.into()),
        }
    }
}

#[derive(Debug, Clone)]
pub struct ProofTree {
    nodes: Vec<NodeSpec>,
}

impl ProofTree {
    pub fn standard() -> Self {
        ProofTree { nodes: registry() }
    }

    /// The tree with one node dropped; its dependents then report it missing.
    pub fn without(mut self, id: &str) -> Self {
        self.nodes.retain(|n| n.id != id);
        self
    }

    pub fn nodes(&self) -> &[NodeSpec] {
        &self.nodes
    }

    pub fn get(&self, id: &str) -> Option<&NodeSpec> {
        self.nodes.iter().find(|n| n.id == id)
    }

    /// Unique ids and no cycles. Dangling dependencies are allowed; they fail
    /// at run time.
    pub fn validate(&self) -> Result<(), TreeError> {
        let mut seen = BTreeSet::new();
        for n in &self.nodes {
            if !seen.insert(n.id) {
                return Err(TreeError::Duplicate(n.id.into()));
            }
        }
        self.waves().map(|_| ())
    }

    /// `id` and everything it depends on, in registry order.
    pub fn closure(&self, id: &str) -> Result<Vec<&'static str>, TreeError> {
        self.get(id).ok_or_else(|| TreeError::UnknownNode(id.into()))?;
        let mut keep = BTreeSet::new();
        let mut stack = vec![id.to_string()];
        while let Some(x) = stack.pop() {
            if let Some(n) = self.get(&x) {
                if keep.insert(n.id) {
                    stack.extend(n.depends_on.iter().map(|d| d.to_string()));
                }
            }
        }
        Ok(self.nodes.iter().map(|n| n.id).filter(|i| keep.contains(i)).collect())
    }

    /// Layers in which every node only depends on earlier layers.
    fn waves(&self) -> Result<Vec<Vec<usize>>, TreeError> {
        let pos: BTreeMap<&str, usize> = self.nodes.iter().enumerate().map(|(i, n)| (n.id, i)).collect();
        let mut level = vec![usize::MAX; self.nodes.len()];
        let mut todo: Vec<usize> = (0..self.nodes.len()).collect();
        while !todo.is_empty() {
            let before = todo.len();
            todo.retain(|&i| {
                let deps: Vec<usize> = self.nodes[i].depends_on.iter().filter_map(|d| pos.get(d).copied()).collect();
                if deps.iter().all(|&d| level[d] != usize::MAX) {
                    level[i] = deps.iter().map(|&d| level[d] + 1).max().unwrap_or(0);
                    false
                } else {
                    true
                }
            });
            if todo.len() == before {
                return Err(TreeError::Cycle(self.nodes[todo[0]].id.into()));
            }
        }
        let depth = level.iter().max().map_or(0, |m| m + 1);
        let mut out = vec![Vec::new(); depth];
        for (i, l) in level.into_iter().enumerate() {
            out[l].push(i);
        }
        Ok(out)
    }

    /// Runs the selected nodes on `jobs` threads. The report is the same for
    /// every `jobs`; per-node wall time comes back separately.
    pub fn run(&self, sel: &Selector, fixtures: Fixtures, jobs: usize) -> Result<(Report, Vec<(String, Duration)>), TreeError> {
        self.validate()?;
        let (target, sub) = match sel {
            Selector::All => ("t.final".to_string(), self.clone()),
            Selector::Node(id) => {
                let keep: BTreeSet<&str> = self.closure(id)?.into_iter().collect();
                (id.clone(), ProofTree { nodes: self.nodes.iter().filter(|n| keep.contains(n.id)).cloned().collect() })
            }
        };
        let origin = fixtures.origin.clone();
        let ctx = Ctx::new(fixtures);
        let pool = rayon::ThreadPoolBuilder::new().num_threads(jobs.max(1)).build().map_err(|e| TreeError::Pool(e.to_string()))?;
        let n = sub.nodes.len();
        let mut results: Vec<Option<NodeResult>> = vec![None; n];
        let mut timing = vec![Duration::ZERO; n];
        let pos: BTreeMap<&str, usize> = sub.nodes.iter().enumerate().map(|(i, n)| (n.id, i)).collect();
        for wave in sub.waves()? {
            let done: Vec<(usize, Result<Outcome, String>, Duration)> = pool.install(|| {
                wave.par_iter()
                    .map(|&i| {
                        let t = Instant::now();
                        let o = (sub.nodes[i].check)(&ctx);
                        (i, o, t.elapsed())
                    })
                    .collect()
            });
            for (i, o, dt) in done {
                timing[i] = dt;
                results[i] = Some(settle(&sub.nodes[i], o, |d| pos.get(d).and_then(|&j| results[j].as_ref()).map(|r| r.status)));
            }
        }
        let nodes: Vec<NodeResult> = results.into_iter().map(|r| r.expect("every wave assigned")).collect();
        let axioms = sub
            .nodes
            .iter()
            .filter(|n| n.kind == NodeKind::Axiom)
            .map(|n| AxiomEntry { id: n.id.into(), statement: n.title.into(), citation: n.citation.unwrap_or_default().into() })
            .collect();
        let timing = sub.nodes.iter().map(|n| n.id.to_string()).zip(timing).collect();
        Ok((Report::new(target, origin, nodes, axioms), timing))
    }
}

fn settle(spec: &NodeSpec, o: Result<Outcome, String>, dep: impl Fn(&str) -> Option<Status>) -> NodeResult {
    let (ok, summary, trace, mut reason) = match o {
        Ok(o) => (o.ok, o.summary, o.trace, None),
        Err(e) => (false, "check raised an error".to_string(), vec![], Some(e)),
    };
    if reason.is_none() && !ok {
        reason = Some("check did not close".to_string());
    }
    for d in spec.depends_on {
        match dep(d) {
            None => {
                reason.get_or_insert_with(|| format!("dependency {d} is missing"));
            }
            Some(Status::Failed) => {
                reason.get_or_insert_with(|| format!("dependency {d} failed"));
            }
            Some(_) => {}
        }
    }
    let status = match (&reason, spec.kind) {
        (Some(_), _) => Status::Failed,
        (None, NodeKind::Axiom) => Status::AxiomAssumed,
        (None, NodeKind::Elimination) => Status::ContradictionAsExpected,
        (None, _) => Status::Verified,
    };
    NodeResult {
        id: spec.id.into(),
        kind: spec.kind,
        title: spec.title.into(),
        depends_on: spec.depends_on.iter().map(|d| d.to_string()).collect(),
        status,
        summary,
        reason,
        trace,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn standard_tree_is_valid() {
        ProofTree::standard().validate().unwrap();
    }

    #[test]
    fn every_node_feeds_the_theorem() {
        let t = ProofTree::standard();
        let all: BTreeSet<&str> = t.nodes().iter().map(|n| n.id).collect();
        let reach: BTreeSet<&str> = t.closure("t.final").unwrap().into_iter().collect();
        assert_eq!(all, reach);
    }

    #[test]
    fn dependencies_exist_and_come_first() {
        let t = ProofTree::standard();
        for (i, n) in t.nodes().iter().enumerate() {
            for d in n.depends_on {
                let j = t.nodes().iter().position(|m| m.id == *d).unwrap_or_else(|| panic!("{} -> {d}", n.id));
                assert!(j < i, "{} before {d}", n.id);
            }
        }
    }

    #[test]
    fn selector_aliases() {
        assert_eq!(Selector::parse("iii"), Selector::Node("t.iii2".into()));
        assert_eq!(Selector::parse("all"), Selector::All);
        assert_eq!(Selector::parse("p.no2"), Selector::Node("p.no2".into()));
    }

    #[test]
    fn unknown_node() {
        let e = ProofTree::standard().closure("nope").unwrap_err();
        assert_eq!(e, TreeError::UnknownNode("nope".into()));
    }
}
