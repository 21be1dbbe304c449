//! The ruled endgame: W → F_a, with the N̄_i written in g*c, N̄_last and Δ.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::fibration::{Elimination, Relation};
use crate::picard::{DivisorClass, IntersectionLattice};

/// Which ladder the ruling comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum RuledBranch {
    /// n = 3ℓ, |N̄_3| is the ruling.
    ThreeEll,
    /// n = 3ℓ − 1, |N̄_2| is the ruling.
    ThreeEllMinus1,
}

impl RuledBranch {
    /// Number of adjoint steps from the ruling back to N̄.
    fn steps(&self) -> i64 {
        match self {
            RuledBranch::ThreeEll => 3,
            RuledBranch::ThreeEllMinus1 => 2,
        }
    }

    /// Σ (N·C)² over the cycles contracted on the way to W; N̄² = 3 + this.
    fn n_excess(&self) -> i64 {
        match self {
            RuledBranch::ThreeEll => 0,
            RuledBranch::ThreeEllMinus1 => 1,
        }
    }
}

/// F_a blown up at nine points, so that K_W² = −1.
#[derive(Debug, Clone)]
pub struct RuledModel {
    pub a: i64,
    pub branch: RuledBranch,
    pub lattice: Arc<IntersectionLattice>,
}

impl RuledModel {
    pub fn new(a: i64, branch: RuledBranch) -> Self {
        let mut lat = IntersectionLattice::hirzebruch(a);
        for _ in 0..9 {
            lat = lat.blow_up();
        }
        RuledModel { a, branch, lattice: lat.into_arc() }
    }

    pub fn c(&self) -> DivisorClass {
        DivisorClass::basis(&self.lattice, 0)
    }

    pub fn fiber(&self) -> DivisorClass {
        DivisorClass::basis(&self.lattice, 1)
    }

    pub fn delta(&self) -> DivisorClass {
        (2..self.lattice.rank()).fold(DivisorClass::zero(&self.lattice), |s, i| s + DivisorClass::basis(&self.lattice, i))
    }

    pub fn k(&self) -> DivisorClass {
        DivisorClass::canonical(&self.lattice)
    }

    /// N̄_last − iK_W for i = 0..=steps, i.e. the classes up to N̄.
    pub fn ladder(&self) -> Vec<DivisorClass> {
        (0..=self.branch.steps()).map(|i| self.fiber() - i * self.k()).collect()
    }

    /// The printed closed forms: the k-th class back is
    /// 2k·c + (k·a + 2k + 1)·N̄_last − kΔ.
    pub fn ladder_closed(&self) -> Vec<DivisorClass> {
        (0..=self.branch.steps())
            .map(|k| (2 * k) * self.c() + (k * self.a + 2 * k + 1) * self.fiber() - k * self.delta())
            .collect()
    }

    pub fn n_bar(&self) -> DivisorClass {
        self.ladder().pop().expect("non-empty ladder")
    }

    /// 2B̄_0 + Ē' = N̄ − 3K_W.
    pub fn branch_divisor(&self) -> DivisorClass {
        self.n_bar() - 3 * self.k()
    }

    pub fn checks(&self) -> Vec<(String, i64, i64)> {
        let n = self.n_bar();
        let k = self.k();
        let c = self.c();
        let a = self.a;
        let mut out = vec![
            ("K_W^2".to_string(), -1, k.square()),
            ("Nbar^2".to_string(), 3 + self.branch.n_excess(), n.square()),
            ("Nbar.K_W".to_string(), 1 - self.branch.n_excess(), n.dot(&k)),
        ];
        match self.branch {
            RuledBranch::ThreeEll => {
                out.push(("g*c.Nbar".into(), 7 - 3 * a, c.dot(&n)));
                out.push(("g*c.(2B0+E')".into(), 13 - 6 * a, c.dot(&self.branch_divisor())));
            }
            RuledBranch::ThreeEllMinus1 => {
                out.push(("g*c.Nbar".into(), 5 - 2 * a, c.dot(&n)));
            }
        }
        for (i, (x, y)) in self.ladder().iter().zip(self.ladder_closed()).enumerate() {
            let d = x - &y;
            out.push((format!("ladder row {i} closed form"), 0, if d.is_zero() { 0 } else { 1 }));
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RuledConstraints {
    pub a: i64,
    pub a_ok: bool,
    pub alpha: i64,
    pub beta_sum: i64,
    pub beta_min: i64,
}

/// Constraints on F_a for the n = 3ℓ, ℓ = 0 ruling, read off the lattice.
pub fn ruled_constraints(a: i64) -> RuledConstraints {
    let m = RuledModel::new(a, RuledBranch::ThreeEll);
    let n = m.n_bar();
    // Ē'_i = α c + β f + Σγ Δ; α = Ē'_i N̄_3 = 3
    let alpha = 3;
    // at ℓ = 0, 2B̄_0 + Ē' = Ē' and Σβ_i is its f-coordinate
    let bd = m.branch_divisor();
    RuledConstraints { a, a_ok: m.c().dot(&n) >= 0, alpha, beta_sum: bd.coeffs[1], beta_min: alpha * a }
}

/// Returns (Δ·Σγ_jΔ_j, Ē'·N̄_2) for Ē' = 3g*c + βN̄_3 + Σγ_jΔ_j.
pub fn delta_gamma(a: i64, beta: i64, gamma: &[i64]) -> (i64, i64) {
    let m = RuledModel::new(a, RuledBranch::ThreeEll);
    let mut g = DivisorClass::zero(&m.lattice);
    for (j, x) in gamma.iter().enumerate() {
        g = g + *x * DivisorClass::basis(&m.lattice, 2 + j);
    }
    let e = 3 * m.c() + beta * m.fiber() + g.clone();
    (m.delta().dot(&g), e.dot(&m.ladder()[1]))
}

/// Smallest number of singular fibers compatible with Δ·Σγ = 2β + 7 − 3a ≤ 6r.
pub fn singular_fiber_count_bound(a: i64, beta: i64) -> i64 {
    let need = 2 * beta + 7 - 3 * a;
    (need + 5).div_euclid(6)
}

/// p.no2: a = 2 with at most two singular fibers.
pub fn eliminate_a2() -> Elimination {
    let a = 2;
    let c = ruled_constraints(a);
    let need = 2 * c.beta_min + 7 - 3 * a;
    let r = singular_fiber_count_bound(a, c.beta_min);
    Elimination::new(
        "p.no2",
        "a=2, r<=2",
        [("a".to_string(), a), ("beta_min".to_string(), c.beta_min)].into_iter().collect::<BTreeMap<_, _>>(),
        need,
        6 * 2,
        Relation::AtMost,
        vec![
            format!("E'_iN_2 = 2 gives Delta.sum gamma = 2 beta + 7 - 3a, with beta >= 3a = {}", c.beta_min),
            format!("{need} <= 6r needs r >= {r}"),
            format!("{need} <= 6r with r <= 2 fails: {need} > 12"),
        ],
    )
}
