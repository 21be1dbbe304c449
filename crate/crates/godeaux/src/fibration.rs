//! Euler-number bookkeeping for pencils on Y and the eliminations built on it.
//!
//! A pencil with b base points and general member of arithmetic genus p gives
//! δ = e(Y) + b − 2(2 − 2p). Every irreducible curve C with C² < 0 sitting in
//! a singular fiber adds at least −C² to δ. The eliminations collect such
//! curves from intersection data and compare the total with δ.

use std::collections::BTreeMap;
use std::fmt;

use num_rational::Ratio;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::adjoint::{adjoint_table, classify_ladder, n_range, row_zero, AdjointOutcome, CycleCounts};
use crate::cover::{kx2_from_fixed, quotient_k2, CoverError, GodeauxContext, RamificationData};
use crate::pencil::{all_pencil_cases, PencilCase};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum FibrationError {
    #[error("negative delta {0}")]
    NegativeDelta(i64),
    #[error("component {0} has self-intersection {1} >= 0")]
    NonNegative(String, i64),
    #[error("fiber is disconnected")]
    Disconnected,
    #[error("component {0} has C.F = {1}, not 0")]
    NotInFiber(usize, i64),
    #[error("delta routes disagree: model {model}, closed form {closed}")]
    DeltaMismatch { model: i64, closed: Ratio<i64> },
    #[error("left side routes disagree: inventory {inventory}, printed {printed}")]
    LhsMismatch { inventory: i64, printed: Ratio<i64> },
    #[error("{0}")]
    Cover(#[from] CoverError),
    #[error("ell scan did not terminate below {0}")]
    Unbounded(i64),
}

/// A curve known to lie in a singular fiber, repeated `count` times.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TrappedComponent {
    pub name: String,
    pub self_int: i64,
    pub fiber_mult: i64,
    pub pa: i64,
    pub count: i64,
    pub why: String,
}

impl TrappedComponent {
    pub fn new(name: &str, self_int: i64, count: i64, why: impl Into<String>) -> Self {
        TrappedComponent { name: name.into(), self_int, fiber_mult: 1, pa: 0, count, why: why.into() }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FibrationModel {
    pub e_ambient: i64,
    pub fiber_pa: i64,
    pub base_points: i64,
    pub components: Vec<TrappedComponent>,
}

pub fn delta(m: &FibrationModel) -> Result<i64, FibrationError> {
    let d = m.e_ambient + m.base_points - 2 * (2 - 2 * m.fiber_pa);
    if d < 0 {
        return Err(FibrationError::NegativeDelta(d));
    }
    Ok(d)
}

pub fn min_contribution(c: &TrappedComponent) -> Result<i64, FibrationError> {
    if c.self_int >= 0 {
        return Err(FibrationError::NonNegative(c.name.clone(), c.self_int));
    }
    Ok(-c.self_int)
}

pub fn contribution_total(m: &FibrationModel) -> Result<i64, FibrationError> {
    let mut s = 0;
    for c in &m.components {
        if c.count > 0 {
            s += c.count * min_contribution(c)?;
        }
    }
    Ok(s)
}

/// A fiber Σ h_i C_i with its intersection matrix (diagonal = self-intersections).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Fiber {
    pub name: String,
    pub mults: Vec<i64>,
    pub pa: Vec<i64>,
    pub inter: Vec<Vec<i64>>,
}

impl Fiber {
    pub fn check(&self) -> Result<(), FibrationError> {
        let k = self.mults.len();
        for i in 0..k {
            let cf: i64 = (0..k).map(|j| self.mults[j] * self.inter[i][j]).sum();
            if k > 1 && cf != 0 {
                return Err(FibrationError::NotInFiber(i, cf));
            }
        }
        let mut seen = vec![false; k];
        let mut stack = vec![0];
        while let Some(i) = stack.pop() {
            if k == 0 || seen[i] {
                continue;
            }
            seen[i] = true;
            for j in 0..k {
                if i != j && self.inter[i][j] > 0 && !seen[j] {
                    stack.push(j);
                }
            }
        }
        if seen.iter().any(|s| !s) {
            return Err(FibrationError::Disconnected);
        }
        Ok(())
    }
}

/// Lower bound for the number of nodes a fiber counts as.
pub fn node_bound(f: &Fiber) -> Result<i64, FibrationError> {
    f.check()?;
    let k = f.mults.len();
    let mut s = 0;
    for i in 0..k {
        s += (f.mults[i] - 1) * (2 * f.pa[i] - 2);
        for j in (i + 1)..k {
            s += (f.mults[i] + f.mults[j] - 1) * f.inter[i][j];
        }
    }
    Ok(s)
}

/// Small catalog of consistent fibers used to test the bound.
pub fn fiber_catalog() -> Vec<Fiber> {
    let star = |name: &str, center: i64, h: i64, leaves: usize, leaf_self: i64, leaf_mult: i64| {
        let k = leaves + 1;
        let mut inter = vec![vec![0; k]; k];
        inter[0][0] = center;
        for i in 1..k {
            inter[i][i] = leaf_self;
            inter[0][i] = 1;
            inter[i][0] = 1;
        }
        let mut mults = vec![leaf_mult; k];
        mults[0] = h;
        Fiber { name: name.into(), mults, pa: vec![0; k], inter }
    };
    vec![
        Fiber { name: "smooth".into(), mults: vec![1], pa: vec![1], inter: vec![vec![0]] },
        Fiber { name: "two (-1)-curves".into(), mults: vec![1, 1], pa: vec![0, 0], inter: vec![vec![-1, 1], vec![1, -1]] },
        Fiber {
            name: "(-1),(-2),(-1) chain".into(),
            mults: vec![1, 1, 1],
            pa: vec![0, 0, 0],
            inter: vec![vec![-1, 1, 0], vec![1, -2, 1], vec![0, 1, -1]],
        },
        star("(-3) with three (-1)", -3, 1, 3, -1, 1),
        star("(-6) with six (-1)", -6, 1, 6, -1, 1),
        star("double (-1) with two (-2)", -1, 2, 2, -2, 1),
        star("double (-3) with six (-2)", -3, 2, 6, -2, 1),
        star("(-2) with two (-1)", -2, 1, 2, -1, 1),
    ]
}

/// Parameters of the closed formulas.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Param {
    Ell,
    GammaSq,
    H1,
    N,
}

impl Param {
    pub fn symbol(&self) -> &'static str {
        match self {
            Param::Ell => "ℓ",
            Param::GammaSq => "Γ²",
            Param::H1 => "h1",
            Param::N => "n",
        }
    }
}

/// c + Σ a_p·p with rational coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Affine {
    pub constant: Ratio<i64>,
    pub coeffs: BTreeMap<Param, Ratio<i64>>,
}

impl Affine {
    pub fn c(v: i64) -> Self {
        Affine { constant: Ratio::from_integer(v), coeffs: BTreeMap::new() }
    }

    pub fn plus(mut self, p: Param, num: i64, den: i64) -> Self {
        *self.coeffs.entry(p).or_insert_with(|| Ratio::from_integer(0)) += Ratio::new(num, den);
        self
    }

    pub fn plus_c(mut self, num: i64, den: i64) -> Self {
        self.constant += Ratio::new(num, den);
        self
    }

    pub fn eval(&self, env: &BTreeMap<Param, i64>) -> Ratio<i64> {
        let mut v = self.constant;
        for (p, a) in &self.coeffs {
            v += *a * Ratio::from_integer(*env.get(p).unwrap_or(&0));
        }
        v
    }
}

impl fmt::Display for Affine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut s = String::new();
        let show = |r: &Ratio<i64>| {
            if r.is_integer() {
                r.to_integer().abs().to_string()
            } else {
                format!("({}/{})", r.numer().abs(), r.denom())
            }
        };
        if self.constant != Ratio::from_integer(0) {
            s.push_str(&format!("{}{}", if self.constant < Ratio::from_integer(0) { "-" } else { "" }, show(&self.constant)));
        }
        for (p, a) in &self.coeffs {
            if *a == Ratio::from_integer(0) {
                continue;
            }
            let neg = *a < Ratio::from_integer(0);
            let sign = if neg { "-" } else if s.is_empty() { "" } else { "+" };
            let mag = if *a == Ratio::from_integer(1) || *a == Ratio::from_integer(-1) { String::new() } else { show(a) };
            s.push_str(&format!("{sign}{mag}{}", p.symbol()));
        }
        if s.is_empty() {
            s.push('0');
        }
        f.write_str(&s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Relation {
    /// Consistent iff lhs ≤ rhs.
    AtMost,
    /// Consistent iff lhs = rhs.
    Equal,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Contradiction,
    Survives,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Elimination {
    pub prop_id: String,
    pub branch: String,
    pub instance: BTreeMap<String, i64>,
    pub lhs: i64,
    pub rhs: i64,
    pub relation: Relation,
    pub verdict: Verdict,
    #[serde(skip_serializing_if = "std::ops::Not::not", default)]
    pub reconstructed: bool,
    pub trace: Vec<String>,
}

impl Elimination {
    pub fn new(
        prop_id: &str,
        branch: impl Into<String>,
        instance: BTreeMap<String, i64>,
        lhs: i64,
        rhs: i64,
        relation: Relation,
        trace: Vec<String>,
    ) -> Self {
        let ok = match relation {
            Relation::AtMost => lhs <= rhs,
            Relation::Equal => lhs == rhs,
        };
        Elimination {
            prop_id: prop_id.into(),
            branch: branch.into(),
            instance,
            lhs,
            rhs,
            relation,
            verdict: if ok { Verdict::Survives } else { Verdict::Contradiction },
            reconstructed: false,
            trace,
        }
    }

    pub fn reconstructed(mut self, r: bool) -> Self {
        self.reconstructed = r;
        self
    }

    pub fn is_contradiction(&self) -> bool {
        self.verdict == Verdict::Contradiction
    }
}

fn inst(pairs: &[(&str, i64)]) -> BTreeMap<String, i64> {
    pairs.iter().map(|&(k, v)| (k.to_string(), v)).collect()
}

/// Everything needed to run one δ comparison.
#[derive(Debug, Clone, PartialEq)]
pub struct DeltaInstance {
    pub prop_id: String,
    pub branch: String,
    pub instance: BTreeMap<String, i64>,
    pub env: BTreeMap<Param, i64>,
    pub model: FibrationModel,
    /// The closed form of δ in the case parameters.
    pub delta_closed: Affine,
    /// Printed left side, when there is one.
    pub lhs_printed: Option<Affine>,
    pub reconstructed: bool,
}

/// Sums minimal contributions and compares with δ. Both δ and, when present,
/// the printed left side are computed twice and must agree.
pub fn eliminate_by_delta(d: &DeltaInstance) -> Result<Elimination, FibrationError> {
    let rhs = delta(&d.model)?;
    let closed = d.delta_closed.eval(&d.env);
    if closed != Ratio::from_integer(rhs) {
        return Err(FibrationError::DeltaMismatch { model: rhs, closed });
    }
    let lhs = contribution_total(&d.model)?;
    if let Some(p) = &d.lhs_printed {
        let v = p.eval(&d.env);
        if v != Ratio::from_integer(lhs) {
            return Err(FibrationError::LhsMismatch { inventory: lhs, printed: v });
        }
    }
    let mut trace: Vec<String> = d
        .model
        .components
        .iter()
        .filter(|c| c.count > 0)
        .map(|c| format!("{} x {} ({}): +{} [{}]", c.count, c.name, c.self_int, c.count * -c.self_int, c.why))
        .collect();
    trace.push(format!(
        "delta = e(Y) + b - 2(2-2p) = {} + {} - {} = {} = {}",
        d.model.e_ambient,
        d.model.base_points,
        2 * (2 - 2 * d.model.fiber_pa),
        rhs,
        d.delta_closed
    ));
    if let Some(p) = &d.lhs_printed {
        trace.push(format!("contributions = {p} = {lhs}"));
    }
    Ok(Elimination::new(&d.prop_id, d.branch.clone(), d.instance.clone(), lhs, rhs, Relation::AtMost, trace)
        .reconstructed(d.reconstructed))
}

// ---------------------------------------------------------------- case (i)

/// A point of the case (i) domain.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CaseIPoint {
    pub gamma_sq: i64,
    pub ell: i64,
    pub h1: i64,
    pub ky2: i64,
}

/// Scans Γ² ≤ 1 and ℓ ≥ 0 and keeps the pairs with integral data, h_1 ≥ 1
/// and K_Y² ≥ K_X².
pub fn case_i_domain() -> Vec<CaseIPoint> {
    let g = GodeauxContext::new();
    let mut out = Vec::new();
    for gamma_sq in -40..=1 {
        for ell in 0..=40 {
            let Ok(r) = RamificationData::case_i(ell, gamma_sq) else { continue };
            let Ok(ky2) = quotient_k2(&g, &r) else { continue };
            if r.h1 >= 1 && ky2 >= kx2_from_fixed(&g, &r) {
                out.push(CaseIPoint { gamma_sq, ell, h1: r.h1, ky2 });
            }
        }
    }
    out.sort();
    out
}

fn env_i(p: &CaseIPoint, n: i64) -> BTreeMap<Param, i64> {
    [(Param::Ell, p.ell), (Param::GammaSq, p.gamma_sq), (Param::H1, p.h1), (Param::N, n)].into_iter().collect()
}

fn inst_i(p: &CaseIPoint, n1sq: i64, n: i64) -> BTreeMap<String, i64> {
    inst(&[("Gamma^2", p.gamma_sq), ("ell", p.ell), ("h1", p.h1), ("N1^2", n1sq), ("n", n)])
}

/// n from N_1² = 4 + K_Y² + n.
pub fn case_i_n(p: &CaseIPoint, n1sq: i64) -> i64 {
    let row = adjoint_table(1, p.ky2, 3, CycleCounts::new(0, 0, 0, 0))[0];
    n1sq - row.ni2
}

fn fh_curves(h2: i64) -> TrappedComponent {
    TrappedComponent::new("F'/H'", -3, 2 * h2, "F'N_1 = H'N_1 = 0")
}

fn model_i(p: &CaseIPoint, delta_sq: i64, pa: i64, comps: Vec<TrappedComponent>) -> FibrationModel {
    FibrationModel { e_ambient: 12 - p.ky2, fiber_pa: pa, base_points: delta_sq, components: comps }
}

/// δ = 12 + 3N_1² + n + Δ².
fn delta_closed_i(n1sq: i64, delta_sq: i64) -> Affine {
    Affine::c(12 + 3 * n1sq + delta_sq).plus(Param::N, 1, 1)
}

/// Lemma l.fib: the six curves F', H' against the largest possible δ.
pub fn case_i_fib() -> Vec<DeltaInstance> {
    let mut out = Vec::new();
    for p in case_i_domain() {
        for n1sq in 0..=1 {
            let n = case_i_n(&p, n1sq);
            if n < 0 {
                continue;
            }
            out.push(DeltaInstance {
                prop_id: "l.fib".into(),
                branch: format!("N1^2={n1sq}, Delta^2<={n1sq}"),
                instance: inst_i(&p, n1sq, n),
                env: env_i(&p, n),
                model: model_i(&p, n1sq, n1sq, vec![fh_curves(3)]),
                delta_closed: delta_closed_i(n1sq, n1sq),
                lhs_printed: Some(Affine::c(18)),
                reconstructed: false,
            });
        }
    }
    out
}

/// p.no0: N_1² = 0, Δ = N_1, with irreducible or reducible cycles.
pub fn case_i_no0(p: &CaseIPoint) -> Vec<DeltaInstance> {
    let n = case_i_n(p, 0);
    let base = |branch: &str, extra: TrappedComponent, printed: Affine| DeltaInstance {
        prop_id: "p.no0".into(),
        branch: branch.into(),
        instance: inst_i(p, 0, n),
        env: env_i(p, n),
        model: model_i(p, 0, 0, vec![fh_curves(3), extra]),
        delta_closed: delta_closed_i(0, 0),
        lhs_printed: Some(printed),
        reconstructed: false,
    };
    vec![
        base(
            "all cycles irreducible",
            TrappedComponent::new("Z", -1, n, "Z_iN_1 = 0"),
            Affine::c(18).plus(Param::N, 1, 1),
        ),
        base("a reducible cycle", TrappedComponent::new("E'", -3, 1, "E'_k inside a cycle"), Affine::c(21)),
    ]
}

/// Which divisor the pencil members are compared against.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CaseIBranch {
    /// N_1 ≡ Δ + Z with Z a reducible cycle; NΔ = 2.
    FixedCycle,
    /// N ≡ N_1 + Δ; NΔ = 1.
    FixedN,
    /// |N_1| without fixed part; Δ = N_1, NN_1 = 2.
    Free,
}

impl CaseIBranch {
    pub fn prop_id(&self) -> &'static str {
        match self {
            CaseIBranch::FixedCycle => "p.noZ",
            CaseIBranch::FixedN => "p.noN",
            CaseIBranch::Free => "p.noN1",
        }
    }

    /// (2B_0Δ + E'Δ, Δ², per-curve cap on E'_k·Δ).
    fn data(&self) -> (i64, i64, Option<i64>) {
        match self {
            CaseIBranch::FixedCycle => (2, 0, None),
            CaseIBranch::FixedN => (1, 0, None),
            CaseIBranch::Free => (5, 1, Some(1)),
        }
    }
}

/// Splits 2B_0Δ + E'Δ into (B_0Δ, E'Δ, Γ'Δ) and builds the
/// trapped inventory of each branch.
pub fn case_i_fixed_part(p: &CaseIPoint, which: CaseIBranch) -> Vec<DeltaInstance> {
    let (total, delta_sq, cap) = which.data();
    let n = case_i_n(p, 1);
    let mut out = Vec::new();
    for b in (0..=total / 2).rev() {
        let e = total - 2 * b;
        let e_cap = cap.map(|c| c * p.h1).unwrap_or(i64::MAX);
        if e > e_cap {
            continue;
        }
        for g in (0..=b).rev() {
            let rem = b - g;
            // the rest of B_0Δ needs components B_0k
            if rem > 0 && p.ell == 0 {
                continue;
            }
            // Γ'Δ = 0 needs Γ'² ≤ 0
            if g == 0 && p.gamma_sq > 0 {
                continue;
            }
            let mut comps = vec![fh_curves(3)];
            if g == 0 {
                comps.push(TrappedComponent::new("Gamma'", 3 * p.gamma_sq, 1, "Gamma' Delta = 0"));
            }
            let b0_free = (p.ell - rem).max(0);
            comps.push(TrappedComponent::new("B_0k", -6, b0_free, format!("at most {rem} components meet Delta")));
            let e_meet = match cap {
                Some(c) => e / c,
                None => e,
            };
            comps.push(TrappedComponent::new("E'", -3, (p.h1 - e_meet).max(0), format!("at most {e_meet} curves E'_k meet Delta")));
            let reconstructed = match which {
                CaseIBranch::FixedCycle => b == 0,
                CaseIBranch::Free => b == 1,
                CaseIBranch::FixedN => false,
            };
            let printed = printed_case_i(which, b, g, p.ell);
            out.push(DeltaInstance {
                prop_id: which.prop_id().into(),
                branch: format!("B0.D={b}, E'.D={e}, Gamma'.D={g}"),
                instance: inst_i(p, 1, n),
                env: env_i(p, n),
                model: model_i(p, delta_sq, 1, comps),
                delta_closed: delta_closed_i(1, delta_sq),
                lhs_printed: printed,
                reconstructed,
            });
        }
    }
    out
}

fn printed_case_i(which: CaseIBranch, b: i64, g: i64, ell: i64) -> Option<Affine> {
    use Param::*;
    let a = Affine::c(18);
    match (which, b, g) {
        (CaseIBranch::FixedCycle, 1, 1) => Some(a.plus(H1, 3, 1).plus(Ell, 6, 1)),
        (CaseIBranch::FixedCycle, 1, 0) => Some(a.plus(GammaSq, -3, 1).plus(Ell, 6, 1).plus_c(-6, 1).plus(H1, 3, 1)),
        (CaseIBranch::FixedN, 0, 0) => Some(a.plus(GammaSq, -3, 1).plus(Ell, 6, 1).plus(H1, 3, 1).plus_c(-3, 1)),
        (CaseIBranch::Free, 2, 2) => Some(a.plus(H1, 3, 1).plus_c(-3, 1).plus(Ell, 6, 1)),
        (CaseIBranch::Free, 2, 1) => Some(a.plus(H1, 3, 1).plus_c(-3, 1).plus(Ell, 6, 1).plus_c(-6, 1)),
        (CaseIBranch::Free, 2, 0) if ell >= 2 => {
            Some(a.plus(GammaSq, -3, 1).plus(Ell, 6, 1).plus_c(-12, 1).plus(H1, 3, 1).plus_c(-3, 1))
        }
        (CaseIBranch::Free, 2, 0) => Some(a.plus(GammaSq, -3, 1).plus(H1, 3, 1).plus_c(-3, 1)),
        _ => None,
    }
}

/// The closed δ of the fixed-part branches in ℓ and Γ² (after n is
/// eliminated): 16 + 3ℓ + (1 − 3Γ²)/2 or 17 + 3ℓ + (1 − 3Γ²)/2.
pub fn case_i_delta_printed(which: CaseIBranch) -> Affine {
    let c = if which == CaseIBranch::Free { 17 } else { 16 };
    Affine::c(c).plus(Param::Ell, 3, 1).plus_c(1, 2).plus(Param::GammaSq, -3, 2)
}

/// Rank refinement for a surviving free branch with ℓ = 0 and Γ' off the
/// fibers: the n orthogonal cycles involve at least n distinct fiber
/// components, of which at most h_1 − E'N_1 are curves E'_k already counted.
pub fn case_i_rank_node(d: &DeltaInstance) -> Option<DeltaInstance> {
    if d.prop_id != "p.noN1" || d.env.get(&Param::Ell) != Some(&0) {
        return None;
    }
    if d.model.components.iter().any(|c| c.name == "Gamma'") {
        return None;
    }
    let n = *d.env.get(&Param::N)?;
    let e_free = d.model.components.iter().find(|c| c.name == "E'").map(|c| c.count).unwrap_or(0);
    let mut m = d.model.clone();
    m.components.push(TrappedComponent::new(
        "cycle component",
        -1,
        (n - e_free).max(0),
        format!("{n} orthogonal cycles span rank {n}; {e_free} of their components may be E'_k"),
    ));
    Some(DeltaInstance {
        prop_id: "p.noN1.n9".into(),
        branch: d.branch.clone(),
        instance: d.instance.clone(),
        env: d.env.clone(),
        model: m,
        delta_closed: d.delta_closed.clone(),
        lhs_printed: None,
        reconstructed: true,
    })
}

/// p.no16 for a surviving free-branch instance with n = 6.
pub fn case_i_no16(d: &DeltaInstance) -> Result<Vec<Elimination>, FibrationError> {
    let n = d.env[&Param::N];
    let h1 = d.env[&Param::H1];
    // the l.fib inventory plus the n cycles, against the free-branch δ
    let mut m = d.model.clone();
    m.components = vec![fh_curves(3), TrappedComponent::new("Z", -1, n, "irreducible Z_i with Z_iN_1 = Z_iΔ = 0")];
    let irr = DeltaInstance {
        prop_id: "p.no16".into(),
        branch: "all cycles irreducible".into(),
        model: m,
        lhs_printed: Some(Affine::c(18).plus(Param::N, 1, 1)),
        reconstructed: false,
        ..d.clone()
    };
    let first = eliminate_by_delta(&irr)?;
    // a reducible cycle contains some E'_k, which then misses N_1
    let e_meet = h1 - d.model.components.iter().find(|c| c.name == "E'").map(|c| c.count).unwrap_or(0);
    let second = Elimination::new(
        "p.no16",
        "a reducible cycle",
        d.instance.clone(),
        e_meet,
        h1 - 1,
        Relation::AtMost,
        vec![
            format!("E'N_1 forces {e_meet} of the {h1} curves E'_k to meet N_1"),
            "a reducible cycle contains a curve E'_k with E'_kN_1 = 0".into(),
        ],
    );
    Ok(vec![first, second])
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CaseRun {
    pub eliminations: Vec<Elimination>,
    pub survivors: Vec<BTreeMap<String, i64>>,
}

/// Runs every case (i) elimination. An instance survives only if some
/// branch of every applicable step survives.
pub fn run_case_i() -> Result<CaseRun, FibrationError> {
    let mut elims = Vec::new();
    let mut survivors = Vec::new();
    for d in case_i_fib() {
        let e = eliminate_by_delta(&d)?;
        let dead = e.is_contradiction();
        elims.push(e);
        if dead {
            continue;
        }
        let p = CaseIPoint {
            gamma_sq: d.env[&Param::GammaSq],
            ell: d.env[&Param::Ell],
            h1: d.env[&Param::H1],
            ky2: 0,
        };
        let p = CaseIPoint { ky2: case_i_domain().into_iter().find(|q| q.gamma_sq == p.gamma_sq && q.ell == p.ell).map(|q| q.ky2).unwrap_or(0), ..p };
        let n1sq = d.instance["N1^2"];
        let mut alive = false;
        if n1sq == 0 {
            for b in case_i_no0(&p) {
                let e = eliminate_by_delta(&b)?;
                alive |= !e.is_contradiction();
                elims.push(e);
            }
        } else {
            for which in [CaseIBranch::FixedCycle, CaseIBranch::FixedN, CaseIBranch::Free] {
                for b in case_i_fixed_part(&p, which) {
                    let e = eliminate_by_delta(&b)?;
                    let dead = e.is_contradiction();
                    elims.push(e);
                    if dead {
                        continue;
                    }
                    // a free-branch survivor still has to pass the rank node and p.no16
                    let mut ok = true;
                    if let Some(r) = case_i_rank_node(&b) {
                        let e = eliminate_by_delta(&r)?;
                        ok &= !e.is_contradiction();
                        elims.push(e);
                    }
                    if b.env[&Param::N] == 6 {
                        let es = case_i_no16(&b)?;
                        ok &= es.iter().any(|e| !e.is_contradiction());
                        elims.extend(es);
                    }
                    alive |= ok;
                }
            }
        }
        if alive {
            survivors.push(d.instance.clone());
        }
    }
    Ok(CaseRun { eliminations: elims, survivors })
}

// --------------------------------------------------------------- case (ii)

/// t.ii: the elliptic pencil |M'| with δ = 15 + 3ℓ, ℓ ≥ 2.
pub fn case_ii_instance(ell: i64) -> Result<DeltaInstance, FibrationError> {
    let r = RamificationData::case_ii(ell)?;
    let ky2 = quotient_k2(&GodeauxContext::new(), &r)?;
    Ok(DeltaInstance {
        prop_id: "t.ii".into(),
        branch: "M' elliptic".into(),
        instance: inst(&[("ell", ell), ("h1", r.h1)]),
        env: [(Param::Ell, ell), (Param::H1, r.h1)].into_iter().collect(),
        model: FibrationModel {
            e_ambient: 12 - ky2,
            fiber_pa: 1,
            base_points: 0,
            components: vec![
                TrappedComponent::new("F'_j/H'_j, j=2..4", -3, 2 * (r.h2 - 1), "M passes through at most one q_j"),
                TrappedComponent::new("B_0k", -6, ell - 1, "MR_0 <= 1"),
            ],
        },
        delta_closed: Affine::c(15).plus(Param::Ell, 3, 1),
        lhs_printed: Some(Affine::c(12).plus(Param::Ell, 6, 1)),
        reconstructed: false,
    })
}

/// Scans ℓ upward from `start` until the left side exceeds the right and
/// the gap can only grow.
pub fn scan_ell<F>(start: i64, settled_from: i64, mut f: F) -> Result<Vec<Elimination>, FibrationError>
where
    F: FnMut(i64) -> Result<Option<Elimination>, FibrationError>,
{
    let mut out = Vec::new();
    for ell in start..=64 {
        let Some(e) = f(ell)? else { continue };
        let gap = e.lhs - e.rhs;
        out.push(e);
        if ell >= settled_from && gap > 0 {
            if let Some(next) = f(ell + 1)? {
                if next.lhs - next.rhs >= gap {
                    return Ok(out);
                }
            }
        }
    }
    Err(FibrationError::Unbounded(64))
}

pub fn run_case_ii() -> Result<CaseRun, FibrationError> {
    let elims = scan_ell(2, 2, |ell| Ok(Some(eliminate_by_delta(&case_ii_instance(ell)?)?)))?;
    let survivors = elims.iter().filter(|e| !e.is_contradiction()).map(|e| e.instance.clone()).collect();
    Ok(CaseRun { eliminations: elims, survivors })
}

// -------------------------------------------------------------- case (iii)

/// δ template for the pencil |A'| of a listed case.
pub fn case_iii_instance(c: &PencilCase, ell: i64) -> Result<Option<DeltaInstance>, FibrationError> {
    if c.ar0 > 0 && ell == 0 {
        return Ok(None);
    }
    let r = RamificationData::case_iii(ell)?;
    let ky2 = quotient_k2(&GodeauxContext::new(), &r)?;
    let met = c.a_e().iter().filter(|&&m| m > 0).count() as i64;
    let mut comps = vec![TrappedComponent::new("E'", -3, r.h1 - met, format!("{met} curves E'_k meet A'"))];
    if c.a_f() == 0 {
        comps.push(TrappedComponent::new("F'", -3, 1, "A'F' = 0"));
    }
    if c.a_h() == 0 {
        comps.push(TrappedComponent::new("H'", -3, 1, "A'H' = 0"));
    }
    comps.push(TrappedComponent::new("B_0k", -6, (ell - c.ar0).max(0), format!("A'B_0 = {}", c.ar0)));
    let pa = 1 + (c.aprime2 + c.apk) / 2;
    let prop = match c.aprime2 {
        0 => "p.0",
        1 => "p.1",
        _ => "p.3",
    };
    Ok(Some(DeltaInstance {
        prop_id: prop.into(),
        branch: c.label.clone(),
        instance: inst(&[("ell", ell), ("A'^2", c.aprime2), ("A'K", c.apk), ("AR0", c.ar0)]),
        env: [(Param::Ell, ell), (Param::H1, r.h1)].into_iter().collect(),
        model: FibrationModel { e_ambient: 12 - ky2, fiber_pa: pa, base_points: c.aprime2, components: comps },
        delta_closed: Affine::c(14 + 3 * c.aprime2 + 2 * c.apk).plus(Param::Ell, 3, 1),
        lhs_printed: printed_case_iii(&c.label, ell),
        reconstructed: false,
    }))
}

fn printed_case_iii(label: &str, ell: i64) -> Option<Affine> {
    match label {
        "0a" => Some(Affine::c(12).plus(Param::Ell, 9, 1)),
        "0b" if ell >= 1 => Some(Affine::c(9).plus(Param::Ell, 9, 1)),
        "0c" => Some(Affine::c(9).plus(Param::Ell, 9, 1)),
        _ => None,
    }
}

/// One listed case with the ℓ values its δ comparison leaves.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CaseIiiRange {
    pub label: String,
    pub ells: Vec<i64>,
    pub eliminations: Vec<Elimination>,
}

pub fn run_case_iii_delta() -> Result<Vec<CaseIiiRange>, FibrationError> {
    let mut out = Vec::new();
    for (_, cases) in all_pencil_cases() {
        for c in cases {
            let elims = scan_ell(0, c.ar0, |ell| match case_iii_instance(&c, ell)? {
                Some(d) => Ok(Some(eliminate_by_delta(&d)?)),
                None => Ok(None),
            })?;
            let ells = elims.iter().filter(|e| !e.is_contradiction()).map(|e| e.instance["ell"]).collect();
            out.push(CaseIiiRange { label: c.label.clone(), ells, eliminations: elims });
        }
    }
    Ok(out)
}

// ---------------------------------------------------- lattice eliminations

fn find_case(label: &str) -> Option<PencilCase> {
    all_pencil_cases().into_values().flatten().find(|c| c.label == label)
}

fn ky2_iii(ell: i64) -> Result<(i64, i64), FibrationError> {
    let r = RamificationData::case_iii(ell)?;
    Ok((quotient_k2(&GodeauxContext::new(), &r)?, r.h2))
}

/// p.l0: with n = n' = 0, the curves E'_i met by A' lie in Φ' and N_k nef
/// gives Σ E'_i N_k ≤ Φ'N_k. Tried for k = 1, 2.
pub fn lattice_l0(c: &PencilCase, ell: i64) -> Option<Elimination> {
    if c.aprime2 != 0 || c.apk != 0 || ell != 0 || c.a_e().is_empty() {
        return None;
    }
    let nk = row_zero(0).nik;
    let mut last = None;
    for k in 1..=2 {
        // N_k = N + k(K_Y − G'); E'N = 0, E'K = 1, E'G' = 0
        let e_nk = k;
        let a_nk = c.ak + k * (c.apk - c.a_g());
        let n_nk = 3 + k * (nk - 0);
        let phi_nk = n_nk - a_nk;
        let lhs = c.a_e().iter().filter(|&&m| m > 0).count() as i64 * e_nk;
        let e = Elimination::new(
            "p.l0",
            format!("{} via N_{k}", c.label),
            inst(&[("ell", ell)]),
            lhs,
            phi_nk,
            Relation::AtMost,
            vec![
                format!("E'_iPhi' = -m_i < 0 for the {} points, so they lie in Phi'", c.a_e().len()),
                format!("E'_kN_{k} = {e_nk}, A'N_{k} = {a_nk}, NN_{k} = {n_nk}, Phi'N_{k} = {phi_nk}"),
            ],
        );
        if e.is_contradiction() {
            return Some(e);
        }
        last = Some(e);
    }
    last
}

/// p.no0d: the adjoint A_1 = A' + K_Y − G' − ΣC_j of an elliptic pencil with
/// A'² = A'K_Y = 0 at ℓ = 1.
pub fn lattice_no0d(c: &PencilCase, ell: i64) -> Result<Option<Vec<Elimination>>, FibrationError> {
    if c.aprime2 != 0 || c.apk != 0 || ell != 1 {
        return Ok(None);
    }
    let (ky2, h2) = ky2_iii(ell)?;
    let g_dot = c.a_g();
    // A_1² = A'² + K² + 2A'K + h2 + m = 0
    let m = -(c.aprime2 + ky2 + 2 * c.apk + h2 - 2 * g_dot);
    let a1k = c.apk + ky2 + h2 + m;
    let mut out = Vec::new();
    let base = |s: &str| vec![format!("A_1^2 = 0 gives m = {m}; A_1K = {a1k}"), s.to_string()];
    // A_1N = A'N + KN − G'N − NΣC ∈ [0, A'N + KN]
    let top = c.ak + row_zero(0).nik;
    for s in 1..=top {
        // sA' ≡ 3A_1 and s = sA'B_0 = 3A_1B_0
        let sb = s * c.ar0;
        if sb % 3 != 0 {
            out.push(Elimination::new(
                "p.no0d",
                format!("A_1N={s}"),
                inst(&[("ell", ell), ("s", s)]),
                sb % 3,
                0,
                Relation::Equal,
                base("sA' = 3A_1 needs 3 | sA'B_0"),
            ));
        } else {
            out.push(Elimination::new(
                "p.no0d",
                format!("A_1N={s}"),
                inst(&[("ell", ell), ("s", s)]),
                s,
                0,
                Relation::Equal,
                base("s = 3 gives A' = A_1, so K_Y would be effective"),
            ));
        }
    }
    // A_1 ≡ 0: 0 = A'B_0 + KB_0 − G'B_0 − ΣC_jB_0
    let kb0 = 4 * ell;
    let sum_cb = c.ar0 + kb0;
    let need = (sum_cb + m - 1) / m;
    out.push(Elimination::new(
        "p.no0d",
        "A_1N=0",
        inst(&[("ell", ell), ("s", 0)]),
        need,
        c.ar0,
        Relation::AtMost,
        vec![
            format!("A_1 = 0 gives sum C_jB_0 = {sum_cb} over m = {m} cycles, so some C_1B_0 >= {need}"),
            format!("C_1 <= A' gives C_1B_0 <= A'B_0 = {}", c.ar0),
        ],
    ));
    Ok(Some(out))
}

/// t.no4: n = 3ℓ − 4, |N_1| = |2Θ| and A' elliptic.
pub fn lattice_no4(c: &PencilCase, ell: i64) -> Option<Elimination> {
    if c.aprime2 != 1 || c.g != 1 || 3 * ell - 4 < 0 {
        return None;
    }
    let a_n1_max = c.ak + c.apk - c.a_g();
    // 1 ≤ A'N_1 ≤ a_n1_max and A'N_1 = 2A'Θ
    let s = (1..=a_n1_max).filter(|s| s % 2 == 0).max()?;
    Some(Elimination::new(
        "t.no4",
        format!("{} n=3l-4", c.label),
        inst(&[("ell", ell), ("n", 3 * ell - 4)]),
        2,
        1,
        Relation::Equal,
        vec![
            format!("A'N_1 = {s} = 2A'Theta so A'Theta = {}", s / 2),
            "Theta has no base point on A', so h0(A', Theta) = 2".into(),
            "a degree-1 divisor on an elliptic curve has h0 = 1".into(),
        ],
    ))
}

/// p.1e: every n in the window, every value of s = A'N_1.
pub fn lattice_1e(c: &PencilCase, ell: i64) -> Result<Option<Vec<Elimination>>, FibrationError> {
    if c.aprime2 != 1 || c.g != 1 || ell < 1 {
        return Ok(None);
    }
    let (ky2, h2) = ky2_iii(ell)?;
    let (lo, hi) = n_range(ell).map_err(|_| FibrationError::Unbounded(ell))?;
    let mut out = Vec::new();
    let h0_n1 = row_zero(0).pa;
    for n in lo..=hi {
        if n == 3 * ell - 4 {
            out.extend(lattice_no4(c, ell));
            continue;
        }
        let t = adjoint_table(0, ky2, h2, CycleCounts::new(n, 0, 0, 0));
        let n1sq = t[0].ni2;
        let i = |extra: &[(&str, i64)]| {
            let mut m = inst(&[("ell", ell), ("n", n)]);
            for (k, v) in extra {
                m.insert(k.to_string(), *v);
            }
            m
        };
        let a_n1 = c.ak + c.apk - c.a_g();
        for s in 1..=a_n1 {
            if n1sq > s * s {
                out.push(Elimination::new("p.1e", "index", i(&[("s", s)]), n1sq, s * s, Relation::AtMost, vec![format!("(N_1 - sA')^2 = N_1^2 - s^2 <= 0")]));
                continue;
            }
            if n1sq == s * s {
                // N_1 ≡ sA'
                if s == 1 {
                    out.push(Elimination::new(
                        "p.1e",
                        "N_1 = A'",
                        i(&[("s", s)]),
                        h0_n1,
                        2,
                        Relation::Equal,
                        vec!["h0(N_1) = p_a(N) = 3 but |A'| is a pencil".into()],
                    ));
                } else {
                    out.push(Elimination::new(
                        "p.1e",
                        format!("N_1 = {s}A'"),
                        i(&[("s", s)]),
                        t[0].prev_dot,
                        s * c.ak,
                        Relation::Equal,
                        vec![format!("NN_1 = {} vs {s}NA' = {}", t[0].prev_dot, s * c.ak)],
                    ));
                }
                continue;
            }
            // s = A'N_1 = 2 − A'ΣZ; below the top value some Z meets A'
            if s != a_n1 {
                out.push(Elimination::new(
                    "p.1e",
                    "index",
                    i(&[("s", s)]),
                    n1sq,
                    s * s,
                    Relation::AtMost,
                    vec!["(N_1 - sA')^2 <= 0 with A'^2 = 1".into()],
                ));
                continue;
            }
            // A_1 = A' + K − G' − ΣZ − ΣC_j ≡ 0
            let m = -(c.aprime2 + ky2 + 2 * c.apk + h2 + n);
            let x = s + t[0].nik;
            if x < 0 {
                out.push(Elimination::new(
                    "p.1e",
                    "A_1N_1",
                    i(&[("s", s), ("m", m)]),
                    0,
                    x,
                    Relation::AtMost,
                    vec![format!("0 = A_1N_1 = {x} - N_1 sum C_j <= {x}")],
                ));
                continue;
            }
            let leaves = classify_ladder(ell, n).map_err(|_| FibrationError::Unbounded(ell))?;
            for leaf in leaves {
                let CycleCounts { n1, .. } = leaf.counts;
                let tag = format!("{:?}", leaf.outcome);
                if matches!(leaf.outcome, AdjointOutcome::KEffective { .. }) {
                    continue;
                }
                // the C_j orthogonal to N_1 are among the Z'_j
                if m - x > n1 {
                    out.push(Elimination::new(
                        "p.1e",
                        format!("n'={n1}"),
                        i(&[("s", s), ("m", m), ("n'", n1)]),
                        m - x,
                        n1,
                        Relation::AtMost,
                        vec![format!("{} of the m = {m} cycles C_j miss N_1, they must be among the n' = {n1} cycles Z'", m - x), tag],
                    ));
                    continue;
                }
                match leaf.outcome {
                    AdjointOutcome::Terminal { step: 2 } => {
                        // N_1 − A' = ΣZ' − ΣC ≥ 0
                        out.push(Elimination::new(
                            "p.1e",
                            "N_2 = 0",
                            i(&[("s", s), ("m", m), ("n'", n1)]),
                            c.a_f(),
                            0,
                            Relation::AtMost,
                            vec![
                                format!("N_1 = A' + {} Z'", n1 - m),
                                format!("F'N_1 >= F'A' = {} but F'N_1 = 0", c.a_f()),
                            ],
                        ));
                    }
                    _ => {
                        // A'N_2 and (A' − N_2)² decide A' ≡ N_2
                        let t2 = adjoint_table(0, ky2, h2, leaf.counts)[1];
                        let a_n2 = s + c.apk - c.a_g();
                        let sq = c.aprime2 + t2.ni2 - 2 * a_n2;
                        if sq == 0 {
                            let phi_n2 = c.ak - c.aprime2;
                            out.push(Elimination::new(
                                "p.1e",
                                format!("n'={n1}, A'=N_2"),
                                i(&[("s", s), ("m", m), ("n'", n1)]),
                                c.ar0,
                                phi_n2,
                                Relation::AtMost,
                                vec![
                                    format!("A'N_2 = {a_n2}, N_2^2 = {}, (A'-N_2)^2 = 0", t2.ni2),
                                    format!("B_0 <= Phi' so B_0A' = {} <= Phi'A' = {phi_n2}", c.ar0),
                                ],
                            ));
                        } else {
                            out.push(Elimination::new(
                                "p.1e",
                                format!("n'={n1}"),
                                i(&[("s", s), ("m", m), ("n'", n1)]),
                                0,
                                0,
                                Relation::AtMost,
                                vec![format!("no closing argument for (A'-N_2)^2 = {sq}"), tag],
                            ));
                        }
                    }
                }
            }
        }
    }
    Ok(Some(out))
}

/// A step passes when at least one of its branches survives.
fn survives(es: &[Elimination]) -> bool {
    let mut by_branch: BTreeMap<(String, String), bool> = BTreeMap::new();
    for e in es {
        let n = e.instance.get("n").map(|v| v.to_string()).unwrap_or_default();
        let key = (n, String::new());
        let v = by_branch.entry(key).or_insert(false);
        *v |= !e.is_contradiction();
    }
    by_branch.values().any(|v| *v)
}

/// Case (iii) after the δ comparisons and the lattice arguments: the
/// remaining (label, ℓ) pairs.
pub fn run_case_iii() -> Result<(Vec<CaseIiiRange>, Vec<Elimination>, Vec<(String, i64)>), FibrationError> {
    let ranges = run_case_iii_delta()?;
    let mut elims = Vec::new();
    let mut left = Vec::new();
    for r in &ranges {
        let c = find_case(&r.label).expect("listed case");
        for &ell in &r.ells {
            let mut dead = false;
            if let Some(e) = lattice_l0(&c, ell) {
                dead |= e.is_contradiction();
                elims.push(e);
            }
            if let Some(es) = lattice_no0d(&c, ell)? {
                dead |= !es.iter().any(|e| !e.is_contradiction());
                elims.extend(es);
            }
            if let Some(es) = lattice_1e(&c, ell)? {
                dead |= !survives(&es);
                elims.extend(es);
            }
            if !dead {
                left.push((r.label.clone(), ell));
            }
        }
    }
    Ok((ranges, elims, left))
}

// ----------------------------------------------------------- ruled pencils

/// t.no1rul: ℓ = 1, n = 3, n' = n'' = 0, pencil |N_3| of rational curves.
pub fn ruled_no1rul() -> Result<Vec<Elimination>, FibrationError> {
    let ell = 1;
    let (ky2, h2) = ky2_iii(ell)?;
    let counts = CycleCounts::new(3 * ell, 0, 0, 0);
    let t = adjoint_table(0, ky2, h2, counts);
    let n3sq = t[2].ni2;
    let pa = t[2].pa;
    // B_0N_3 = B_0N + 3B_0K − 3B_0ΣZ with B_0ΣZ = 2(B_0Z_1 + B_0Z_2) = 4
    let b0n3 = 3 * 4 * ell - 3 * 4;
    let base = |name: &str, comps: Vec<TrappedComponent>| DeltaInstance {
        prop_id: "t.no1rul".into(),
        branch: name.into(),
        instance: inst(&[("ell", ell), ("n", counts.n)]),
        env: [(Param::Ell, ell)].into_iter().collect(),
        model: FibrationModel { e_ambient: 12 - ky2, fiber_pa: pa, base_points: n3sq, components: comps },
        delta_closed: Affine::c(10).plus(Param::Ell, 3, 1),
        lhs_printed: Some(Affine::c(15)),
        reconstructed: false,
    };
    let mut comps_red = vec![
        TrappedComponent::new("F'/H'", -3, 2 * h2, "F'N_1 = H'N_1 = 0"),
        TrappedComponent::new("E'_k", -3, 1, "E'_k inside Z_3"),
    ];
    if b0n3 == 0 {
        comps_red.push(TrappedComponent::new("B_0", -6, ell, "B_0N_3 = 0"));
    }
    Ok(vec![
        eliminate_by_delta(&base(
            "cycles irreducible",
            vec![
                TrappedComponent::new("F'/H'", -3, 2 * h2, "F'N_1 = H'N_1 = 0"),
                TrappedComponent::new("E'_k", -3, counts.n, "each Z_i meets its own E'_k"),
            ],
        ))?,
        eliminate_by_delta(&base("Z_3 reducible", comps_red))?,
    ])
}

/// t.no1: ℓ = 1, n = 2, n' = 1, pencil |N_2|.
pub fn ruled_no1() -> Result<Elimination, FibrationError> {
    let ell = 1;
    let (ky2, h2) = ky2_iii(ell)?;
    let counts = CycleCounts::new(3 * ell - 1, 1, 0, 0);
    let t = adjoint_table(0, ky2, h2, counts);
    let d = DeltaInstance {
        prop_id: "t.no1".into(),
        branch: "n=2, n'=1".into(),
        instance: inst(&[("ell", ell), ("n", counts.n), ("n'", counts.n1)]),
        env: [(Param::Ell, ell)].into_iter().collect(),
        model: FibrationModel {
            e_ambient: 12 - ky2,
            fiber_pa: t[1].pa,
            base_points: t[1].ni2,
            components: vec![
                TrappedComponent::new("F'/H'", -3, 2 * h2, "F'N_2 = H'N_2 = 0"),
                TrappedComponent::new("E'_k", -3, counts.n, "met by Z_1, Z_2, so E'_kN_2 = 0"),
                TrappedComponent::new("Z_i", -1, counts.n, "Z_iN_2 = 0"),
            ],
        },
        delta_closed: Affine::c(10).plus(Param::Ell, 3, 1),
        lhs_printed: None,
        reconstructed: true,
    };
    eliminate_by_delta(&d)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn delta_examples() {
        let m = |e, pa, b| FibrationModel { e_ambient: e, fiber_pa: pa, base_points: b, components: vec![] };
        for ell in 0..4 {
            // case (iii) |A'| for every (A'², A'K)
            for (a2, ak) in [(0, 0), (0, 2), (1, 1), (1, -1), (3, 1)] {
                let pa = 1 + (a2 + ak) / 2;
                assert_eq!(delta(&m(14 + 3 * ell, pa, a2)).unwrap(), 14 + 3 * ell + 3 * a2 + 2 * ak);
            }
            assert_eq!(delta(&m(15 + 3 * ell, 1, 0)).unwrap(), 15 + 3 * ell);
        }
        assert_eq!(delta(&m(17, 0, 0)).unwrap(), 13);
        assert!(delta(&m(1, 0, 0)).is_err());
    }

    #[test]
    fn contributions() {
        assert_eq!(min_contribution(&TrappedComponent::new("F'", -3, 1, "")).unwrap(), 3);
        assert_eq!(min_contribution(&TrappedComponent::new("B", -6, 1, "")).unwrap(), 6);
        assert_eq!(min_contribution(&TrappedComponent::new("Z", -1, 1, "")).unwrap(), 1);
        assert!(min_contribution(&TrappedComponent::new("X", 0, 1, "")).is_err());
    }

    #[test]
    fn catalog_bounds() {
        for f in fiber_catalog() {
            let b = node_bound(&f).unwrap();
            if f.mults.len() == 1 {
                assert_eq!(b, 0);
                continue;
            }
            for i in 0..f.mults.len() {
                assert!(b >= -f.inter[i][i], "{}: {b}", f.name);
            }
        }
        let two = &fiber_catalog()[1];
        assert_eq!(node_bound(two).unwrap(), 1);
    }

    #[test]
    fn inconsistent_fiber() {
        let f = Fiber { name: "x".into(), mults: vec![1, 1], pa: vec![0, 0], inter: vec![vec![-1, 0], vec![0, -1]] };
        assert!(node_bound(&f).is_err());
    }

    #[test]
    fn affine_display() {
        assert_eq!(Affine::c(12).plus(Param::Ell, 9, 1).to_string(), "12+9ℓ");
        assert_eq!(case_i_delta_printed(CaseIBranch::FixedCycle).to_string(), "(33/2)+3ℓ-(3/2)Γ²");
    }

    #[test]
    fn case_i_domain_points() {
        let pts: Vec<(i64, i64)> = case_i_domain().iter().map(|p| (p.gamma_sq, p.ell)).collect();
        assert_eq!(
            pts,
            vec![(-5, 0), (-3, 0), (-3, 1), (-1, 0), (-1, 1), (-1, 2), (1, 0), (1, 1), (1, 2), (1, 3)]
        );
        for p in case_i_domain() {
            assert!((1..=4).contains(&p.h1));
            assert!(p.ky2 >= -12);
            assert_eq!(p.ky2, -4 - 3 * p.ell + (3 * p.gamma_sq - 1) / 2);
        }
    }

    #[test]
    fn case_i_delta_closed_forms_agree() {
        for p in case_i_domain() {
            for which in [CaseIBranch::FixedCycle, CaseIBranch::FixedN, CaseIBranch::Free] {
                for d in case_i_fixed_part(&p, which) {
                    let a = case_i_delta_printed(which).eval(&d.env);
                    assert_eq!(a, Ratio::from_integer(delta(&d.model).unwrap()));
                }
            }
        }
    }

    #[test]
    fn case_i_fully_eliminated() {
        let run = run_case_i().unwrap();
        assert!(run.survivors.is_empty(), "{:?}", run.survivors);
        // l.fib keeps only n = 8 when N_1² = 0
        for e in run.eliminations.iter().filter(|e| e.prop_id == "l.fib" && e.instance["N1^2"] == 0) {
            assert_eq!(!e.is_contradiction(), e.instance["n"] >= 6, "{:?}", e.instance);
        }
        let no0: Vec<_> = run.eliminations.iter().filter(|e| e.prop_id == "p.no0").collect();
        assert!(no0.iter().any(|e| (e.lhs, e.rhs) == (26, 20)));
        assert!(no0.iter().any(|e| (e.lhs, e.rhs) == (21, 20)));
    }

    #[test]
    fn no_n1_case_two_survivors() {
        let mut surv = Vec::new();
        for p in case_i_domain() {
            for d in case_i_fixed_part(&p, CaseIBranch::Free) {
                let e = eliminate_by_delta(&d).unwrap();
                if !e.is_contradiction() {
                    assert!(d.reconstructed);
                    surv.push((p.gamma_sq, p.ell, d.env[&Param::N], e.lhs, e.rhs));
                }
            }
        }
        surv.sort();
        assert_eq!(surv, vec![(-5, 0, 9, 21, 25), (-3, 0, 6, 18, 22), (-1, 1, 6, 21, 22)]);
    }

    #[test]
    fn case_ii_printed() {
        let run = run_case_ii().unwrap();
        assert!(run.survivors.is_empty());
        let e = &run.eliminations[0];
        assert_eq!((e.lhs, e.rhs), (24, 21));
    }

    #[test]
    fn case_iii_ranges() {
        let got: BTreeMap<String, Vec<i64>> =
            run_case_iii_delta().unwrap().into_iter().map(|r| (r.label, r.ells)).collect();
        let want: BTreeMap<String, Vec<i64>> = [
            ("0a", vec![0]),
            ("0b", vec![]),
            ("0c", vec![0]),
            ("0d", vec![1]),
            ("0e", vec![]),
            ("0f", vec![0]),
            ("0g", vec![0]),
            ("0h", vec![]),
            ("1a", vec![0]),
            ("1b", vec![]),
            ("1c", vec![]),
            ("1d", vec![0]),
            ("1e", vec![1, 2, 3]),
            ("1f", vec![0, 1]),
            ("N", vec![0, 1]),
        ]
        .into_iter()
        .map(|(k, v)| (k.to_string(), v))
        .collect();
        assert_eq!(got, want);
    }

    #[test]
    fn case_iii_after_lattice() {
        let (_, elims, left) = run_case_iii().unwrap();
        let want: Vec<(String, i64)> =
            [("0g", 0), ("1a", 0), ("1d", 0), ("1f", 0), ("1f", 1), ("N", 0), ("N", 1)].iter().map(|(a, b)| (a.to_string(), *b)).collect();
        let mut left = left;
        left.sort();
        assert_eq!(left, want);
        let l0a = elims.iter().find(|e| e.prop_id == "p.l0" && e.branch.starts_with("0a")).unwrap();
        assert_eq!((l0a.lhs, l0a.rhs), (4, 3));
        let d = elims.iter().find(|e| e.prop_id == "p.no0d" && e.branch == "A_1N=0").unwrap();
        assert_eq!((d.lhs, d.rhs), (2, 1));
        assert!(elims.iter().any(|e| e.prop_id == "t.no4"));
    }

    #[test]
    fn ruled_deltas() {
        let es = ruled_no1rul().unwrap();
        assert!(es.iter().all(|e| e.is_contradiction() && e.lhs == 15 && e.rhs == 13));
        let e = ruled_no1().unwrap();
        assert_eq!((e.lhs, e.rhs), (14, 13));
        assert!(e.reconstructed);
    }

    proptest::proptest! {
        // a center (−n, mult h) with n leaves (−1, mult h) is a fiber and
        // its node bound dominates every single contribution
        #[test]
        fn star_fibers(n in 1i64..9, h in 1i64..4) {
            let k = n as usize + 1;
            let mut inter = vec![vec![0; k]; k];
            inter[0][0] = -n;
            for i in 1..k {
                inter[i][i] = -1;
                inter[0][i] = 1;
                inter[i][0] = 1;
            }
            let f = Fiber { name: "star".into(), mults: vec![h; k], pa: vec![0; k], inter };
            let b = node_bound(&f).unwrap();
            proptest::prop_assert_eq!(b, n * (2 * h - 1) - 2 * (h - 1) * (n + 1));
            if h == 1 {
                proptest::prop_assert!(b >= n);
            }
        }
    }
}
