//! Plane models: curves as (degree, multiplicities), point clusters with
//! proximity, quadratic transformations and the arithmetic built on them.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub mod delpezzo;
pub mod homaloidal;
pub mod multiplicity;
pub mod ruled;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CremonaError {
    #[error("base points {0:?} are not admissible: {1}")]
    Inadmissible([usize; 3], String),
    #[error("base points must be three distinct indices, got {0:?}")]
    BadBase([usize; 3]),
    #[error("curve has {got} multiplicities, cluster has {expected} points")]
    Arity { expected: usize, got: usize },
    #[error("unknown point {0}")]
    UnknownPoint(String),
    #[error("unknown row {0}")]
    UnknownRow(String),
    #[error("proximity graph has a cycle through {0}")]
    Cyclic(String),
    #[error("table parse error: {0}")]
    Parse(String),
    #[error("no sequence of moves connects {0} and {1}")]
    Unreachable(String, String),
    #[error("degree budget is only defined for k = 6, 7 (got {0})")]
    Budget(i64),
}

/// dH − Σ m_i E_i on a plane blown up at `mults.len()` points.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct PlaneCurve {
    pub degree: i64,
    pub mults: Vec<i64>,
}

impl PlaneCurve {
    pub fn new(degree: i64, mults: Vec<i64>) -> Self {
        PlaneCurve { degree, mults }
    }

    /// A curve is virtual when it has degree 0: it is then a combination of
    /// exceptional classes and plane genus/proximity tests do not apply.
    pub fn is_virtual(&self) -> bool {
        self.degree == 0
    }

    pub fn dot(&self, other: &PlaneCurve) -> i64 {
        let s: i64 = self.mults.iter().zip(&other.mults).map(|(a, b)| a * b).sum();
        self.degree * other.degree - s
    }

    pub fn self_intersection(&self) -> i64 {
        self.dot(self)
    }

    /// Intersection with −K = 3H − ΣE.
    pub fn anticanonical_degree(&self) -> i64 {
        3 * self.degree - self.mults.iter().sum::<i64>()
    }

    /// (d−1)(d−2)/2 − Σ m(m−1)/2.
    pub fn plane_genus(&self) -> i64 {
        let d = self.degree;
        (d - 1) * (d - 2) / 2 - self.mults.iter().map(|m| m * (m - 1) / 2).sum::<i64>()
    }

    /// Counts s_j = #{points of multiplicity j}, j ≥ 1.
    pub fn mult_counts(&self) -> BTreeMap<i64, i64> {
        let mut out = BTreeMap::new();
        for &m in &self.mults {
            if m > 0 {
                *out.entry(m).or_insert(0) += 1;
            }
        }
        out
    }

    pub fn sorted(&self) -> PlaneCurve {
        let mut m = self.mults.clone();
        m.sort_unstable_by(|a, b| b.cmp(a));
        PlaneCurve { degree: self.degree, mults: m }
    }

    /// Quadratic transform of this curve alone.
    pub fn transform(&self, base: [usize; 3]) -> PlaneCurve {
        let [i, j, k] = base;
        let (mi, mj, mk) = (self.mults[i], self.mults[j], self.mults[k]);
        let d = self.degree;
        let mut m = self.mults.clone();
        m[i] = d - mj - mk;
        m[j] = d - mi - mk;
        m[k] = d - mi - mj;
        PlaneCurve { degree: 2 * d - mi - mj - mk, mults: m }
    }
}

/// Points with their proximity relation; `(q, p)` means q is proximate to p.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct PointCluster {
    pub points: Vec<String>,
    pub proximity: BTreeSet<(usize, usize)>,
    pub planar: BTreeSet<usize>,
}

impl PointCluster {
    pub fn new(n: usize) -> Self {
        PointCluster { points: (1..=n).map(|i| format!("P{i}")).collect(), ..Default::default() }
    }

    pub fn index(&self, name: &str) -> Result<usize, CremonaError> {
        self.points.iter().position(|p| p == name).ok_or_else(|| CremonaError::UnknownPoint(name.into()))
    }

    pub fn proximate_to(&self, p: usize) -> Vec<usize> {
        self.proximity.iter().filter(|(_, t)| *t == p).map(|(q, _)| *q).collect()
    }

    /// Acyclic proximity and no outgoing edge from a planar point.
    pub fn check(&self) -> Result<(), String> {
        for &(q, _) in &self.proximity {
            if self.planar.contains(&q) {
                return Err(format!("{} is planar but proximate to another point", self.points[q]));
            }
        }
        let n = self.points.len();
        // 0 = unseen, 1 = on stack, 2 = done
        let mut state = vec![0u8; n];
        fn visit(v: usize, c: &PointCluster, state: &mut [u8]) -> Result<(), usize> {
            state[v] = 1;
            for &(q, p) in &c.proximity {
                if q == v {
                    if state[p] == 1 {
                        return Err(p);
                    }
                    if state[p] == 0 {
                        visit(p, c, state)?;
                    }
                }
            }
            state[v] = 2;
            Ok(())
        }
        for v in 0..n {
            if state[v] == 0 {
                visit(v, self, &mut state).map_err(|p| format!("proximity cycle through {}", self.points[p]))?;
            }
        }
        Ok(())
    }

    /// m_P ≥ Σ_{Q proximate to P} m_Q for a non-virtual curve.
    pub fn proximity_violations(&self, c: &PlaneCurve) -> Vec<String> {
        if c.is_virtual() {
            return vec![];
        }
        let mut out = Vec::new();
        for p in 0..self.points.len() {
            let qs = self.proximate_to(p);
            if qs.is_empty() {
                continue;
            }
            let s: i64 = qs.iter().map(|&q| c.mults[q]).sum();
            if c.mults[p] < s {
                out.push(format!("m_{} = {} < {}", self.points[p], c.mults[p], s));
            }
        }
        out
    }
}

/// Checks that a quadratic transformation at `base` is defined for the
/// tracked curves, using only numerical conditions.
///
/// Non-collinearity needs a witness: a tracked curve of degree ≥ 2 with
/// m_i + m_j + m_k > d (Bézout against the line), or a tracked line through
/// exactly two of the three points. A tracked line through all three, or a
/// pair with m_i + m_j > d, rejects the triple.
pub fn admissible(cluster: &PointCluster, curves: &[PlaneCurve], base: [usize; 3]) -> Result<(), String> {
    let [i, j, k] = base;
    let mut witness = false;
    for c in curves.iter().filter(|c| !c.is_virtual()) {
        let (mi, mj, mk) = (c.mults[i], c.mults[j], c.mults[k]);
        if c.degree == 1 {
            let on = [mi, mj, mk].iter().filter(|m| **m > 0).count();
            if on == 3 {
                return Err("a tracked line passes through all three base points".into());
            }
            witness |= on == 2;
            continue;
        }
        for (a, b) in [(mi, mj), (mi, mk), (mj, mk)] {
            if a + b > c.degree {
                return Err(format!("two base points of multiplicity {a}, {b} on a degree {} curve", c.degree));
            }
        }
        witness |= mi + mj + mk > c.degree;
    }
    if !witness {
        return Err("no tracked curve rules out a line through the base points".into());
    }
    for &p in &base {
        let near: Vec<usize> = base.iter().copied().filter(|&q| q != p && cluster.proximity.contains(&(q, p))).collect();
        if near.len() == 2 {
            return Err(format!("both other base points are proximate to {}", cluster.points[p]));
        }
    }
    for c in curves {
        let v = cluster.proximity_violations(c);
        if !v.is_empty() {
            return Err(format!("input violates proximity: {}", v.join("; ")));
        }
    }
    Ok(())
}

/// The quadratic transformation based at three points, applied to every
/// tracked curve. Multiplicities at other points are unchanged; proximity
/// between points off the base is rechecked afterwards.
pub fn quadratic_transform(
    cluster: &PointCluster,
    curves: &[PlaneCurve],
    base: [usize; 3],
) -> Result<Vec<PlaneCurve>, CremonaError> {
    let [i, j, k] = base;
    if i == j || j == k || i == k {
        return Err(CremonaError::BadBase(base));
    }
    for c in curves {
        if c.mults.len() != cluster.points.len() {
            return Err(CremonaError::Arity { expected: cluster.points.len(), got: c.mults.len() });
        }
    }
    admissible(cluster, curves, base).map_err(|e| CremonaError::Inadmissible(base, e))?;
    let out: Vec<PlaneCurve> = curves.iter().map(|c| c.transform(base)).collect();
    let mut rest = cluster.clone();
    rest.proximity.retain(|(q, p)| !base.contains(q) && !base.contains(p));
    for c in &out {
        let v = rest.proximity_violations(c);
        if !v.is_empty() {
            return Err(CremonaError::Inadmissible(base, v.join("; ")));
        }
    }
    Ok(out)
}

/// Invariants a move must preserve: pairwise products, squares, genus,
/// anticanonical degrees.
pub fn move_invariants(curves: &[PlaneCurve]) -> Vec<i64> {
    let mut v = Vec::new();
    for (a, c) in curves.iter().enumerate() {
        v.push(c.self_intersection());
        v.push(c.anticanonical_degree());
        // arithmetic genus on the blow-up, defined for virtual rows too
        v.push(1 + (c.self_intersection() - c.anticanonical_degree()) / 2);
        for d in &curves[a + 1..] {
            v.push(c.dot(d));
        }
    }
    v
}

/// A multiplicity table as it appears in fixtures.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConfigTable {
    pub name: String,
    pub points: Vec<String>,
    pub rows: Vec<TableRow>,
    #[serde(default)]
    pub proximity: Vec<[String; 2]>,
    #[serde(default)]
    pub planar: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableRow {
    pub name: String,
    pub degree: i64,
    pub mults: Vec<i64>,
}

impl TableRow {
    pub fn curve(&self) -> PlaneCurve {
        PlaneCurve::new(self.degree, self.mults.clone())
    }
}

impl ConfigTable {
    pub fn from_json(s: &str) -> Result<Self, CremonaError> {
        let t: ConfigTable = serde_json::from_str(s).map_err(|e| CremonaError::Parse(e.to_string()))?;
        for r in &t.rows {
            if r.mults.len() != t.points.len() {
                return Err(CremonaError::Arity { expected: t.points.len(), got: r.mults.len() });
            }
        }
        Ok(t)
    }

    pub fn row(&self, name: &str) -> Result<&TableRow, CremonaError> {
        self.rows.iter().find(|r| r.name == name).ok_or_else(|| CremonaError::UnknownRow(name.into()))
    }

    pub fn curves(&self) -> Vec<PlaneCurve> {
        self.rows.iter().map(|r| r.curve()).collect()
    }

    /// Declared proximity plus the proximity each contracted row implies:
    /// a row of degree 0 with a single −1 at P and +1 at Q_1..Q_r is the
    /// strict transform E_P − ΣE_Q, so every Q_i is proximate to P.
    pub fn cluster(&self) -> Result<PointCluster, CremonaError> {
        let mut c = PointCluster { points: self.points.clone(), ..Default::default() };
        for [q, p] in &self.proximity {
            c.proximity.insert((c.index(q)?, c.index(p)?));
        }
        for (q, p) in self.implied_proximity() {
            c.proximity.insert((q, p));
        }
        for p in &self.planar {
            c.planar.insert(c.index(p)?);
        }
        Ok(c)
    }

    pub fn implied_proximity(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for r in self.rows.iter().filter(|r| r.degree == 0) {
            let neg: Vec<usize> = (0..r.mults.len()).filter(|&i| r.mults[i] < 0).collect();
            if neg.len() != 1 || r.mults[neg[0]] != -1 {
                continue;
            }
            for q in (0..r.mults.len()).filter(|&i| r.mults[i] > 0) {
                out.push((q, neg[0]));
            }
        }
        out
    }

    /// Applies a quadratic transformation to every row.
    pub fn transform(&self, base: [&str; 3]) -> Result<ConfigTable, CremonaError> {
        let cluster = self.cluster()?;
        let idx = [cluster.index(base[0])?, cluster.index(base[1])?, cluster.index(base[2])?];
        let curves = quadratic_transform(&cluster, &self.curves(), idx)?;
        let mut t = self.clone();
        for (r, c) in t.rows.iter_mut().zip(curves) {
            r.degree = c.degree;
            r.mults = c.mults;
        }
        t.name = format!("{}@{}{}{}", self.name, base[0], base[1], base[2]);
        t.proximity.clear();
        t.planar.clear();
        Ok(t)
    }

    /// Equal after some relabeling from `relabelings`: each entry is a
    /// (row swaps, point permutation) pair. Rows are matched by name after
    /// the swaps; point i of `self` becomes point perm[i].
    pub fn equivalent(&self, other: &ConfigTable, relabelings: &[Relabel]) -> bool {
        if self.points.len() != other.points.len() || self.rows.len() != other.rows.len() {
            return false;
        }
        let id = Relabel::identity(self.points.len());
        let all: Vec<&Relabel> = if relabelings.is_empty() { vec![&id] } else { relabelings.iter().collect() };
        all.into_iter().any(|rl| {
            self.rows.iter().all(|r| {
                let name = rl.row_name(&r.name);
                let Ok(o) = other.row(name) else { return false };
                if o.degree != r.degree {
                    return false;
                }
                (0..self.points.len()).all(|i| o.mults[rl.points[i]] == r.mults[i])
            })
        })
    }
}

/// A renaming of rows (by swapping pairs) together with a point permutation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Relabel {
    pub row_swaps: Vec<(String, String)>,
    pub points: Vec<usize>,
}

impl Relabel {
    pub fn identity(n: usize) -> Self {
        Relabel { row_swaps: vec![], points: (0..n).collect() }
    }

    fn row_name<'a>(&'a self, n: &'a str) -> &'a str {
        for (a, b) in &self.row_swaps {
            if n == a {
                return b;
            }
            if n == b {
                return a;
            }
        }
        n
    }

    /// Every combination of the given row swaps (each on or off) with every
    /// permutation of each point group and every subset of the point swaps.
    pub fn generate(n: usize, row_swaps: &[(&str, &str)], groups: &[&[usize]], point_swaps: &[&[(usize, usize)]]) -> Vec<Relabel> {
        let mut perms: Vec<Vec<usize>> = vec![(0..n).collect()];
        for g in groups {
            let mut next = Vec::new();
            for p in &perms {
                for q in permutations(g) {
                    let mut p2 = p.clone();
                    for (from, to) in g.iter().zip(&q) {
                        p2[*from] = p[*to];
                    }
                    next.push(p2);
                }
            }
            perms = next;
        }
        for sw in point_swaps {
            let mut next = perms.clone();
            for p in &perms {
                let mut p2 = p.clone();
                for &(a, b) in sw.iter() {
                    p2.swap(a, b);
                }
                next.push(p2);
            }
            perms = next;
        }
        let mut out = Vec::new();
        for mask in 0..(1usize << row_swaps.len()) {
            let rs: Vec<(String, String)> = row_swaps
                .iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .map(|(_, (a, b))| (a.to_string(), b.to_string()))
                .collect();
            for p in &perms {
                out.push(Relabel { row_swaps: rs.clone(), points: p.clone() });
            }
        }
        out
    }
}

fn permutations(v: &[usize]) -> Vec<Vec<usize>> {
    if v.len() <= 1 {
        return vec![v.to_vec()];
    }
    let mut out = Vec::new();
    for i in 0..v.len() {
        let mut rest = v.to_vec();
        let x = rest.remove(i);
        for mut p in permutations(&rest) {
            p.insert(0, x);
            out.push(p);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn nonic_to_octic() {
        let c = PlaneCurve::new(9, vec![4, 3, 3, 3, 3, 3, 3, 3]);
        let cl = PointCluster::new(8);
        let out = quadratic_transform(&cl, &[c.clone()], [0, 1, 2]).unwrap();
        assert_eq!(out[0].degree, 8);
        assert_eq!(out[0].mult_counts(), [(2, 2), (3, 6)].into_iter().collect());
        assert_eq!(move_invariants(&[c]), move_invariants(&out));
    }

    #[test]
    fn collinear_base_rejected() {
        let c = PlaneCurve::new(8, vec![3, 3, 3, 3, 3, 3, 2, 2]);
        let cl = PointCluster::new(8);
        // 3 + 2 + 2 = 7 does not exclude a line through P1, P7, P8
        assert!(quadratic_transform(&cl, &[c.clone()], [0, 6, 7]).is_err());
        let line = PlaneCurve::new(1, vec![1, 0, 0, 0, 0, 0, 1, 1]);
        assert!(quadratic_transform(&cl, &[c.clone(), line], [0, 6, 7]).is_err());
        let line = PlaneCurve::new(1, vec![1, 0, 0, 0, 0, 0, 1, 0]);
        assert!(quadratic_transform(&cl, &[c.clone(), line], [0, 6, 7]).is_ok());
        // 3 + 3 + 3 > 8
        assert!(quadratic_transform(&cl, &[c], [0, 1, 2]).is_ok());
        let bad = PlaneCurve::new(4, vec![3, 2, 1, 0, 0, 0, 0, 0]);
        assert!(quadratic_transform(&cl, &[bad], [0, 1, 2]).is_err());
    }

    #[test]
    fn proximity_blocks_move() {
        let mut cl = PointCluster::new(4);
        cl.proximity.insert((1, 0));
        cl.proximity.insert((2, 0));
        let c = PlaneCurve::new(3, vec![2, 1, 1, 0]);
        assert!(quadratic_transform(&cl, &[c.clone()], [0, 1, 2]).is_err());
        assert!(quadratic_transform(&PointCluster::new(4), &[c], [0, 1, 2]).is_ok());
    }

    #[test]
    fn cluster_checks() {
        let mut cl = PointCluster::new(3);
        cl.proximity.insert((1, 0));
        cl.proximity.insert((0, 1));
        assert!(cl.check().is_err());
        let mut cl = PointCluster::new(3);
        cl.proximity.insert((1, 0));
        cl.planar.insert(1);
        assert!(cl.check().is_err());
        cl.planar.clear();
        cl.planar.insert(0);
        assert!(cl.check().is_ok());
        let c = PlaneCurve::new(4, vec![1, 2, 0]);
        assert_eq!(cl.proximity_violations(&c).len(), 1);
    }

    fn curve(n: usize) -> impl Strategy<Value = PlaneCurve> {
        (0i64..12, proptest::collection::vec(-1i64..5, n)).prop_map(|(d, m)| PlaneCurve::new(d, m))
    }

    proptest! {
        #[test]
        fn transform_is_an_involution(cs in proptest::collection::vec(curve(6), 1..4), a in 0usize..6, b in 0usize..6, c in 0usize..6) {
            prop_assume!(a != b && b != c && a != c);
            let once: Vec<PlaneCurve> = cs.iter().map(|x| x.transform([a, b, c])).collect();
            let twice: Vec<PlaneCurve> = once.iter().map(|x| x.transform([a, b, c])).collect();
            prop_assert_eq!(&twice, &cs);
            prop_assert_eq!(move_invariants(&cs), move_invariants(&once));
        }
    }
}
