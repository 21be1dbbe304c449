//! Plane image of |A'| in the ruled n = 3ℓ, ℓ = 0 case.
//!
//! |N̄_3| becomes the lines through a point P, N̄ the curves of degree 10
//! with a quadruple point at P and nine triple points P_1..P_9. The image
//! of A' has degree d, multiplicity d − 6 at P and s_j points of
//! multiplicity j among P_1..P_9.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::PlaneCurve;
use crate::fibration::{Elimination, Relation};

/// The cases that reach this step.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum HomaloidalBranch {
    /// (0g), (1a), (1d), (1f): Ā'² = 1, p_a = 2.
    Pencil,
    /// A' = N: Ā'² = 3, p_a = 3.
    AEqualsN,
}

impl HomaloidalBranch {
    pub fn square(&self) -> i64 {
        match self {
            HomaloidalBranch::Pencil => 1,
            HomaloidalBranch::AEqualsN => 3,
        }
    }

    pub fn genus(&self) -> i64 {
        match self {
            HomaloidalBranch::Pencil => 2,
            HomaloidalBranch::AEqualsN => 3,
        }
    }

    pub fn id(&self) -> &'static str {
        match self {
            HomaloidalBranch::Pencil => "0g/1a/1d/1f",
            HomaloidalBranch::AEqualsN => "A'=N",
        }
    }
}

/// Integer polynomial in d, coefficients by ascending power.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Poly(pub Vec<i64>);

impl Poly {
    fn trim(mut self) -> Self {
        while self.0.len() > 1 && *self.0.last().unwrap() == 0 {
            self.0.pop();
        }
        self
    }

    pub fn sub(&self, o: &Poly) -> Poly {
        let n = self.0.len().max(o.0.len());
        Poly((0..n).map(|i| self.0.get(i).copied().unwrap_or(0) - o.0.get(i).copied().unwrap_or(0)).collect()).trim()
    }

    pub fn eval(&self, d: i64) -> i64 {
        self.0.iter().rev().fold(0, |acc, c| acc * d + c)
    }

    /// Some(r) when the polynomial is exactly (d − r)².
    pub fn as_square(&self) -> Option<i64> {
        if self.0.len() != 3 || self.0[2] != 1 || self.0[1] % 2 != 0 {
            return None;
        }
        let r = -self.0[1] / 2;
        (self.0[0] == r * r).then_some(r)
    }
}

impl std::fmt::Display for Poly {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let mut parts = Vec::new();
        for (i, c) in self.0.iter().enumerate().rev() {
            if *c == 0 {
                continue;
            }
            let k = match (i, c) {
                (0, _) => c.to_string(),
                (_, 1) => String::new(),
                (_, -1) => "-".into(),
                _ => c.to_string(),
            };
            let v = match i {
                0 => k,
                1 => format!("{k}d"),
                _ => format!("{k}d^{i}"),
            };
            parts.push(v);
        }
        f.write_str(&parts.join(" + ").replace("+ -", "- "))
    }
}

/// The three printed relations as polynomials in d:
/// Σ js_j, Σ j²s_j and Σ j(j−1)s_j.
pub fn printed_relations(b: HomaloidalBranch) -> [Poly; 3] {
    // A'N̄ = 10d − 4(d − 6) − 3Σjs = 3
    let lin = Poly(vec![7, 2]);
    // Ā'² = d² − Σj²s, without the point P
    let sq = Poly(vec![-b.square(), 0, 1]);
    // p_a = (d−1)(d−2)/2 − (d−6)(d−7)/2 − Σ j(j−1)s/2
    let diff = Poly(vec![-40 - 2 * b.genus(), 10]);
    [lin, sq, diff]
}

/// All (s_1..s_max) with Σ js_j = lin and Σ j²s_j = sq.
pub fn s_solutions(lin: i64, sq: i64) -> Vec<BTreeMap<i64, i64>> {
    let mut out = Vec::new();
    let jmax = (1..).take_while(|j| j * j <= sq.max(0)).last().unwrap_or(0);
    fn rec(j: i64, lin: i64, sq: i64, cur: &mut BTreeMap<i64, i64>, out: &mut Vec<BTreeMap<i64, i64>>) {
        if j == 0 {
            if lin == 0 && sq == 0 {
                out.push(cur.iter().filter(|(_, v)| **v > 0).map(|(k, v)| (*k, *v)).collect());
            }
            return;
        }
        let mut s = 0;
        while s * j <= lin && s * j * j <= sq {
            cur.insert(j, s);
            rec(j - 1, lin - s * j, sq - s * j * j, cur, out);
            s += 1;
        }
        cur.remove(&j);
    }
    rec(jmax, lin, sq, &mut BTreeMap::new(), &mut out);
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HomaloidalResult {
    pub branch: HomaloidalBranch,
    pub identity: Poly,
    pub forced_degree: Option<i64>,
    pub solutions_at_forced: Vec<BTreeMap<i64, i64>>,
    pub printed: Elimination,
    /// Classes dH − (d−6)E_P − Σ m_iE_i with the correct self-intersection.
    pub lattice_witnesses: Vec<PlaneCurve>,
    pub lattice: Elimination,
}

/// Runs the printed derivation and, separately, the same count on the
/// blow-up lattice where P is included in the self-intersection.
pub fn homaloidal_eliminate(b: HomaloidalBranch) -> HomaloidalResult {
    let [lin, sq, diff] = printed_relations(b);
    // Σj²s − Σjs = Σj(j−1)s
    let identity = sq.sub(&lin).sub(&diff);
    let forced = identity.as_square();
    let mut trace = vec![
        format!("sum j s_j = {lin}"),
        format!("sum j^2 s_j = {sq}"),
        format!("sum j(j-1) s_j = {diff}"),
        format!("subtracting: {identity} = 0"),
    ];
    let d = forced.unwrap_or(-1);
    let mut sols = Vec::new();
    let printed = match (b, forced) {
        (_, None) => Elimination::new("t.no0", b.id(), BTreeMap::new(), 1, 0, Relation::Equal, trace.clone()),
        (HomaloidalBranch::AEqualsN, Some(r)) => {
            trace.push(format!("(d-{r})^2 = 0 forces d = {r}"));
            trace.push("Abar = Nbar has degree 10".into());
            Elimination::new("t.no0", b.id(), [("d".to_string(), r)].into_iter().collect(), r, 10, Relation::Equal, trace.clone())
        }
        (HomaloidalBranch::Pencil, Some(r)) => {
            let (l, s) = (lin.eval(r), sq.eval(r));
            sols = s_solutions(l, s);
            let w: Vec<i64> = (2..=5).map(|j| j * j - j).collect();
            trace.push(format!("d = {r}: sum j s_j = {l}, sum j^2 s_j = {s}"));
            trace.push(format!("difference {} = {}s_2 + {}s_3 + {}s_4 + {}s_5", s - l, w[0], w[1], w[2], w[3]));
            let min_pts = sols.iter().map(|m| m.values().sum::<i64>()).min().unwrap_or(i64::MAX);
            for m in &sols {
                let g = |j| *m.get(&j).unwrap_or(&0);
                trace.push(format!(
                    "s = {:?}: s_1 + s_2 = {} = 11 + 2s_4 = {}, {} points",
                    m,
                    g(1) + g(2),
                    11 + 2 * g(4),
                    m.values().sum::<i64>()
                ));
            }
            Elimination::new(
                "t.no0",
                b.id(),
                [("d".to_string(), r)].into_iter().collect(),
                min_pts,
                9,
                Relation::AtMost,
                trace.clone(),
            )
        }
    };
    let witnesses = lattice_witnesses(b, 30);
    let mut ltrace = vec![
        "Abar = dH - (d-6)E_P - sum m_i E_i, Nbar = 10H - 4E_P - 3 sum E_i".to_string(),
        format!("Abar.Nbar = 3, Abar^2 = {}, Abar.K = {}", b.square(), 2 * b.genus() - 2 - b.square()),
    ];
    for w in &witnesses {
        ltrace.push(format!("witness d = {}: multiplicities {:?}", w.degree, w.mults));
    }
    let lattice = Elimination::new(
        "t.no0.lattice",
        b.id(),
        BTreeMap::new(),
        1,
        witnesses.len() as i64,
        Relation::AtMost,
        ltrace,
    )
    .reconstructed(true);
    let _ = d;
    HomaloidalResult { branch: b, identity, forced_degree: forced, solutions_at_forced: sols, printed, lattice_witnesses: witnesses, lattice }
}

/// Exhaustive search on P² blown up at P, P_1..P_9 (first entry is P).
pub fn lattice_witnesses(b: HomaloidalBranch, max_degree: i64) -> Vec<PlaneCurve> {
    let n = PlaneCurve::new(10, [vec![4], vec![3; 9]].concat());
    let mut out = Vec::new();
    for d in 6..=max_degree {
        let lin = 2 * d + 7;
        let sq = d * d - b.square() - (d - 6) * (d - 6);
        if sq < 0 {
            continue;
        }
        // nonincreasing multiplicities at nine points
        fn rec(k: usize, maxm: i64, lin: i64, sq: i64, cur: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
            if k == 9 {
                if lin == 0 && sq == 0 {
                    out.push(cur.clone());
                }
                return;
            }
            let left = (9 - k) as i64;
            for m in (0..=maxm).rev() {
                if m * left < lin || m * m > sq {
                    if m * left < lin {
                        break;
                    }
                    continue;
                }
                cur.push(m);
                rec(k + 1, m, lin - m, sq - m * m, cur, out);
                cur.pop();
            }
        }
        let mut found = Vec::new();
        rec(0, d, lin, sq, &mut Vec::new(), &mut found);
        for m in found {
            let c = PlaneCurve::new(d, [vec![d - 6], m].concat());
            let k_deg = -c.anticanonical_degree();
            if c.dot(&n) == 3 && c.self_intersection() == b.square() && k_deg == 2 * b.genus() - 2 - b.square() {
                out.push(c);
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_is_a_square() {
        for b in [HomaloidalBranch::Pencil, HomaloidalBranch::AEqualsN] {
            let r = homaloidal_eliminate(b);
            assert_eq!(r.identity, Poly(vec![36, -12, 1]));
            assert_eq!(r.forced_degree, Some(6));
            assert!(r.printed.is_contradiction());
        }
    }

    #[test]
    fn pencil_count() {
        let r = homaloidal_eliminate(HomaloidalBranch::Pencil);
        assert_eq!((r.printed.lhs, r.printed.rhs), (11, 9));
        assert!(!r.solutions_at_forced.is_empty());
        for m in &r.solutions_at_forced {
            let g = |j| *m.get(&j).unwrap_or(&0);
            assert_eq!(2 * g(2) + 6 * g(3) + 12 * g(4) + 20 * g(5), 16);
            assert_eq!(g(1) + g(2), 11 + 2 * g(4));
            assert!(m.values().sum::<i64>() > 9);
        }
        let n = homaloidal_eliminate(HomaloidalBranch::AEqualsN);
        assert_eq!((n.printed.lhs, n.printed.rhs), (6, 10));
    }

    #[test]
    fn lattice_route_has_witnesses() {
        let r = homaloidal_eliminate(HomaloidalBranch::Pencil);
        let degs: Vec<i64> = r.lattice_witnesses.iter().map(|c| c.degree).collect();
        assert_eq!(degs, vec![9, 10, 11]);
        assert!(!r.lattice.is_contradiction());
        for w in &r.lattice_witnesses {
            assert_eq!(w.mults.iter().filter(|m| **m > 0).count(), 10);
            assert_eq!(w.plane_genus(), 2);
        }
        let n = homaloidal_eliminate(HomaloidalBranch::AEqualsN);
        assert_eq!(n.lattice_witnesses, vec![PlaneCurve::new(10, [vec![4], vec![3; 9]].concat())]);
    }

    #[test]
    fn s_solution_oracle() {
        // brute force over a box
        let mut brute = 0;
        for s1 in 0..=19 {
            for s2 in 0..=9 {
                for s3 in 0..=6 {
                    for s4 in 0..=4 {
                        if s1 + 2 * s2 + 3 * s3 + 4 * s4 == 19 && s1 + 4 * s2 + 9 * s3 + 16 * s4 == 35 {
                            brute += 1;
                        }
                    }
                }
            }
        }
        assert_eq!(s_solutions(19, 35).len(), brute);
    }
}
