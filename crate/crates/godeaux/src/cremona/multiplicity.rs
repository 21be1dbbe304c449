//! Degree/multiplicity systems for a plane curve through P_1..P_8 and the
//! Cremona orbit linking their solutions.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use serde::{Deserialize, Serialize};

use super::{move_invariants, quadratic_transform, CremonaError, PlaneCurve, PointCluster};

/// 2d_0 + Σ d_i for the class −kK of the plane: 3k.
pub fn degree_budget(k: i64) -> Result<i64, CremonaError> {
    match k {
        6 | 7 => Ok(3 * k),
        _ => Err(CremonaError::Budget(k)),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct MultSolution {
    pub d0: i64,
    /// s_j, only nonzero entries
    pub s: BTreeMap<i64, i64>,
}

impl MultSolution {
    pub fn points(&self) -> i64 {
        self.s.values().sum()
    }

    /// The curve with multiplicities in decreasing order, padded to `n` points.
    pub fn curve(&self, n: usize) -> PlaneCurve {
        let mut m: Vec<i64> = Vec::new();
        for (j, s) in self.s.iter().rev() {
            m.extend(std::iter::repeat(*j).take(*s as usize));
        }
        m.resize(n.max(m.len()), 0);
        PlaneCurve::new(self.d0, m)
    }
}

impl std::fmt::Display for MultSolution {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "d0={}", self.d0)?;
        for (j, s) in self.s.iter().rev() {
            write!(f, ", s_{j}={s}")?;
        }
        Ok(())
    }
}

/// All (d0, s) with Σ j²s_j = d0² − c1, Σ js_j = 3d0 − c2, Σ s_j ≤ max_points.
pub fn solve_multiplicity_system(c1: i64, c2: i64, max_points: i64, d_range: std::ops::RangeInclusive<i64>) -> Vec<MultSolution> {
    let mut out = Vec::new();
    for d0 in d_range {
        let (sq, lin) = (d0 * d0 - c1, 3 * d0 - c2);
        if sq < 0 || lin < 0 {
            continue;
        }
        let jmax = (1..=d0.max(1)).filter(|j| j * j <= sq).max().unwrap_or(0);
        let mut cur = BTreeMap::new();
        solve_rec(jmax, sq, lin, max_points, &mut cur, &mut |s| out.push(MultSolution { d0, s: s.clone() }));
    }
    out
}

fn solve_rec(j: i64, sq: i64, lin: i64, room: i64, cur: &mut BTreeMap<i64, i64>, emit: &mut dyn FnMut(&BTreeMap<i64, i64>)) {
    if sq == 0 && lin == 0 {
        emit(cur);
        return;
    }
    if j == 0 {
        return;
    }
    let mut s = 0;
    while s <= room && s * j <= lin && s * j * j <= sq {
        if s > 0 {
            cur.insert(j, s);
        }
        solve_rec(j - 1, sq - s * j * j, lin - s * j, room - s, cur, emit);
        s += 1;
    }
    cur.remove(&j);
}

/// One quadratic move on a single curve, kept with the −kK class.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Move {
    pub before: PlaneCurve,
    pub base: [usize; 3],
    pub base_mults: [i64; 3],
    pub after: PlaneCurve,
    pub budget_degree: i64,
    pub invariants_kept: bool,
    /// Inverse of a certified move: it is based at the images of the three
    /// lines, which are never collinear.
    #[serde(default)]
    pub reverse: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrbitPath {
    pub from: usize,
    pub to: usize,
    pub moves: Vec<Move>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrbitCertificate {
    pub k: i64,
    pub states: Vec<PlaneCurve>,
    pub paths: Vec<OrbitPath>,
    /// Highest to lowest degree, one degree per move.
    pub chain: Vec<Move>,
}

impl OrbitCertificate {
    pub fn max_len(&self) -> usize {
        self.paths.iter().map(|p| p.moves.len()).max().unwrap_or(0)
    }
}

/// Admissible moves out of a sorted 8-point state, lexicographic in the
/// base triple; all points are treated as planar.
pub fn moves_from(state: &PlaneCurve, k: i64) -> Vec<Move> {
    let n = state.mults.len();
    let cl = PointCluster::new(n);
    let budget = PlaneCurve::new(3 * k, vec![k; n]);
    let mut out = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            for c in b + 1..n {
                let base = [a, b, c];
                let Ok(res) = quadratic_transform(&cl, &[state.clone(), budget.clone()], base) else {
                    continue;
                };
                if res[0].mults.iter().any(|m| *m < 0) {
                    continue;
                }
                let kept = move_invariants(&[state.clone(), budget.clone()]) == move_invariants(&res)
                    && res[1] == budget
                    && res[0].plane_genus() == state.plane_genus();
                out.push(Move {
                    before: state.clone(),
                    base,
                    base_mults: [state.mults[a], state.mults[b], state.mults[c]],
                    after: res[0].clone(),
                    budget_degree: res[1].degree,
                    invariants_kept: kept,
                    reverse: false,
                });
            }
        }
    }
    out
}

/// Breadth-first search inside the solution set; every pair gets a path.
pub fn cremona_orbit_connect(solutions: &[MultSolution], k: i64) -> Result<OrbitCertificate, CremonaError> {
    degree_budget(k)?;
    let states: Vec<PlaneCurve> = solutions.iter().map(|s| s.curve(8).sorted()).collect();
    let index: BTreeMap<&PlaneCurve, usize> = states.iter().enumerate().map(|(i, c)| (c, i)).collect();
    let mut edges: Vec<Vec<(usize, Move)>> = vec![vec![]; states.len()];
    let mut seen = BTreeSet::new();
    for (i, s) in states.iter().enumerate() {
        for m in moves_from(s, k).into_iter().filter(|m| m.invariants_kept) {
            let Some(&t) = index.get(&m.after.sorted()) else { continue };
            if t == i {
                continue;
            }
            let bm = m.base.map(|j| m.after.mults[j]);
            let back = Move { before: m.after.clone(), after: m.before.clone(), base_mults: bm, reverse: true, ..m.clone() };
            if seen.insert((i, t)) {
                edges[i].push((t, m));
            }
            if seen.insert((t, i)) {
                edges[t].push((i, back));
            }
        }
    }
    for e in &mut edges {
        e.sort_by_key(|(t, m)| (m.reverse, m.base, *t));
    }
    let mut paths = Vec::new();
    for from in 0..states.len() {
        let mut prev: Vec<Option<(usize, Move)>> = vec![None; states.len()];
        let mut done = vec![false; states.len()];
        done[from] = true;
        let mut q = VecDeque::from([from]);
        while let Some(u) = q.pop_front() {
            for (t, m) in &edges[u] {
                if !done[*t] {
                    done[*t] = true;
                    prev[*t] = Some((u, m.clone()));
                    q.push_back(*t);
                }
            }
        }
        for to in 0..states.len() {
            if to == from {
                continue;
            }
            if !done[to] {
                return Err(CremonaError::Unreachable(solutions[from].to_string(), solutions[to].to_string()));
            }
            let mut moves = Vec::new();
            let mut v = to;
            while let Some((u, m)) = &prev[v] {
                moves.push(m.clone());
                v = *u;
            }
            moves.reverse();
            paths.push(OrbitPath { from, to, moves });
        }
    }
    let mut chain = Vec::new();
    if let Some(mut cur) = states.iter().max_by_key(|c| c.degree).cloned() {
        let low = states.iter().map(|c| c.degree).min().unwrap_or(cur.degree);
        while cur.degree > low {
            let i = index[&cur];
            let Some((_, m)) = edges[i].iter().find(|(_, m)| m.after.degree == cur.degree - 1) else {
                break;
            };
            cur = m.after.sorted();
            chain.push(m.clone());
        }
    }
    Ok(OrbitCertificate { k, states, paths, chain })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn printed() -> Vec<(i64, Vec<(i64, i64)>)> {
        vec![
            (3, vec![(1, 7)]),
            (4, vec![(2, 2), (1, 6)]),
            (5, vec![(2, 5), (1, 3)]),
            (6, vec![(3, 1), (2, 6), (1, 1)]),
            (7, vec![(3, 3), (2, 5)]),
            (8, vec![(3, 6), (2, 2)]),
            (9, vec![(4, 1), (3, 7)]),
        ]
    }

    #[test]
    fn seven_solutions() {
        let got = solve_multiplicity_system(2, 2, 8, 0..=12);
        let want: Vec<MultSolution> =
            printed().into_iter().map(|(d0, s)| MultSolution { d0, s: s.into_iter().collect() }).collect();
        assert_eq!(got, want);
    }

    // independent route: nonincreasing 8-tuples of multiplicities
    fn brute(c1: i64, c2: i64, d0: i64) -> BTreeSet<Vec<i64>> {
        let mut out = BTreeSet::new();
        let mut m = [0i64; 8];
        fn rec(i: usize, hi: i64, m: &mut [i64; 8], c1: i64, c2: i64, d0: i64, out: &mut BTreeSet<Vec<i64>>) {
            if i == 8 {
                let sq: i64 = m.iter().map(|x| x * x).sum();
                let lin: i64 = m.iter().sum();
                if sq == d0 * d0 - c1 && lin == 3 * d0 - c2 {
                    out.insert(m.to_vec());
                }
                return;
            }
            for x in 0..=hi {
                m[i] = x;
                rec(i + 1, x, m, c1, c2, d0, out);
            }
        }
        rec(0, d0.min(8), &mut m, c1, c2, d0, &mut out);
        out
    }

    #[test]
    fn oracle_grid() {
        for (c1, c2) in [(2, 2), (1, 1), (0, 0), (1, 3)] {
            for d0 in 0..=12 {
                let fast: BTreeSet<Vec<i64>> =
                    solve_multiplicity_system(c1, c2, 8, d0..=d0).iter().map(|s| s.curve(8).sorted().mults).collect();
                assert_eq!(fast, brute(c1, c2, d0), "c=({c1},{c2}) d0={d0}");
            }
        }
    }

    #[test]
    fn orbit_is_connected() {
        let sols = solve_multiplicity_system(2, 2, 8, 0..=12);
        for k in [6, 7] {
            let cert = cremona_orbit_connect(&sols, k).unwrap();
            assert_eq!(cert.paths.len(), 42);
            assert!(cert.max_len() <= 6);
            for p in &cert.paths {
                for m in &p.moves {
                    assert!(m.invariants_kept);
                    assert_eq!(m.budget_degree, degree_budget(k).unwrap());
                    assert_eq!(m.after.self_intersection(), 2);
                    assert_eq!(m.before.transform(m.base), m.after);
                }
            }
            let degs: Vec<i64> = cert.chain.iter().map(|m| m.after.degree).collect();
            assert_eq!(degs, vec![8, 7, 6, 5, 4, 3]);
            let bases: Vec<[i64; 3]> = cert.chain.iter().map(|m| m.base_mults).collect();
            assert_eq!(bases, vec![[4, 3, 3], [3, 3, 3], [3, 3, 2], [3, 2, 2], [2, 2, 2], [2, 2, 1]]);
        }
    }

    #[test]
    fn budget() {
        assert_eq!(degree_budget(7), Ok(21));
        assert_eq!(degree_budget(6), Ok(18));
        assert!(degree_budget(5).is_err());
    }
}
