//! The adjoint ladder N → N_1 → N_2 → N_3 → N_4 on the quotient surface Y.
//!
//! N_{i+1} = N_i + K_Y − (every (−1)-cycle contracted up to step i+1). Step 1
//! contracts G' and the n cycles Z_i, step 2 the n' cycles Z'_j, step 3 the
//! n'' cycles Z'', step 4 the n''' cycles Z'''. All cycles are pairwise
//! orthogonal with square −1 and K_Y-degree −1, and a cycle contracted at step
//! k meets N in k − 1 points.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_rational::Ratio;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cover::{CoverError, RamificationData};
use crate::picard::{index_ok, DivisorClass, IntersectionLattice, PicardError};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum AdjointError {
    #[error("symbol {0} has no class in the model")]
    UnassignedSymbol(String),
    #[error("{0}")]
    Picard(#[from] PicardError),
    #[error("{0}")]
    Cover(#[from] CoverError),
    #[error("ell = {0} is outside the range of this branch")]
    EllRange(i64),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CycleCounts {
    pub n: i64,
    #[serde(rename = "n'")]
    pub n1: i64,
    #[serde(rename = "n''")]
    pub n2: i64,
    #[serde(rename = "n'''")]
    pub n3: i64,
}

impl CycleCounts {
    pub const fn new(n: i64, n1: i64, n2: i64, n3: i64) -> Self {
        CycleCounts { n, n1, n2, n3 }
    }

    /// Number of cycles first contracted at `step` (1..=4), G' excluded.
    pub fn at_step(&self, step: usize) -> i64 {
        match step {
            1 => self.n,
            2 => self.n1,
            3 => self.n2,
            4 => self.n3,
            _ => 0,
        }
    }

    fn with_step(mut self, step: usize, v: i64) -> Self {
        match step {
            1 => self.n = v,
            2 => self.n1 = v,
            3 => self.n2 = v,
            4 => self.n3 = v,
            _ => {}
        }
        self
    }

    /// Cycles (including the h2 curves G') contracted up to `step`.
    pub fn through(&self, step: usize, h2: i64) -> i64 {
        h2 + (1..=step).map(|s| self.at_step(s)).sum::<i64>()
    }
}

impl fmt::Display for CycleCounts {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "n={} n'={} n''={} n'''={}", self.n, self.n1, self.n2, self.n3)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct AdjointRow {
    pub index: usize,
    pub ni2: i64,
    pub nik: i64,
    pub pa: i64,
    pub prev_dot: i64,
}

/// The closed formulas for N_1, N_2, N_3.
pub fn adjoint_table(r0k: i64, ky2: i64, h2: i64, c: CycleCounts) -> Vec<AdjointRow> {
    let (n, n1, n2) = (c.n, c.n1, c.n2);
    vec![
        AdjointRow {
            index: 1,
            ni2: 5 - 4 * r0k + ky2 + n + h2,
            nik: 1 - 2 * r0k + ky2 + n + h2,
            pa: 4 - 3 * r0k + ky2 + n + h2,
            prev_dot: 4 - 2 * r0k,
        },
        AdjointRow {
            index: 2,
            ni2: 7 - 8 * r0k + 4 * ky2 + 4 * n + 4 * h2 + n1,
            nik: 1 - 2 * r0k + 2 * ky2 + 2 * n + 2 * h2 + n1,
            pa: 5 - 5 * r0k + 3 * ky2 + 3 * n + 3 * h2 + n1,
            prev_dot: 6 - 6 * r0k + 2 * ky2 + 2 * n + 2 * h2,
        },
        AdjointRow {
            index: 3,
            ni2: 9 - 12 * r0k + 9 * ky2 + 9 * h2 + 9 * n + 4 * n1 + n2,
            nik: 1 - 2 * r0k + 3 * ky2 + 3 * h2 + 3 * n + 2 * n1 + n2,
            pa: 6 - 7 * r0k + 6 * ky2 + 6 * h2 + 6 * n + 3 * n1 + n2,
            prev_dot: 8 - 10 * r0k + 6 * ky2 + 6 * h2 + 6 * n + 2 * n1,
        },
    ]
}

/// One adjunction step from the numbers of N_i; `step` is i + 1.
pub fn adjoint_step(prev: &AdjointRow, ky2: i64, h2: i64, c: CycleCounts) -> AdjointRow {
    let step = prev.index + 1;
    let m = c.through(step, h2);
    let ni2 = prev.ni2 + ky2 + 2 * prev.nik + m;
    let nik = prev.nik + ky2 + m;
    AdjointRow { index: step, ni2, nik, pa: 1 + (ni2 + nik) / 2, prev_dot: prev.ni2 + prev.nik }
}

/// N itself: N² = 3 and N·K_Y = 1 − 2R_0K_S.
pub fn row_zero(r0k: i64) -> AdjointRow {
    AdjointRow { index: 0, ni2: 3, nik: 1 - 2 * r0k, pa: 3 - r0k, prev_dot: 0 }
}

/// Rows 1..=`depth` by iterating `adjoint_step` from N.
pub fn adjoint_rows(r0k: i64, ky2: i64, h2: i64, c: CycleCounts, depth: usize) -> Vec<AdjointRow> {
    let mut rows = Vec::with_capacity(depth);
    let mut cur = row_zero(r0k);
    for _ in 0..depth {
        cur = adjoint_step(&cur, ky2, h2, c);
        rows.push(cur);
    }
    rows
}

/// Lower bound for the number n of (−1)-cycles orthogonal to N.
pub fn z_lower_bound(r0k: i64, r0sq: i64, h2: i64) -> Ratio<i64> {
    Ratio::new(35 * r0k, 6) - Ratio::new(3 * r0sq, 2) - Ratio::new(10 + 2 * h2, 3)
}

pub fn z_lower_bound_int(r0k: i64, r0sq: i64, h2: i64) -> i64 {
    z_lower_bound(r0k, r0sq, h2).ceil().to_integer().max(0)
}

/// h⁰(O_{N_1}(N)) = 1 + N·N_1 − p_a(N_1).
pub fn restriction_h0(r0k: i64, ky2: i64, h2: i64, n: i64) -> i64 {
    let row = adjoint_table(r0k, ky2, h2, CycleCounts::new(n, 0, 0, 0))[0];
    1 + row.prev_dot - row.pa
}

/// Range of n in case (iii): N_1² ≥ 0 and the restriction space has room
/// for the pencil |N|.
pub fn n_range(ell: i64) -> Result<(i64, i64), AdjointError> {
    let r = RamificationData::case_iii(ell)?;
    let ky2 = crate::cover::quotient_k2(&crate::cover::GodeauxContext::new(), &r)?;
    let ok = |n: i64| {
        let row = adjoint_table(r.r0k, ky2, r.h2, CycleCounts::new(n, 0, 0, 0))[0];
        row.ni2 >= 0 && restriction_h0(r.r0k, ky2, r.h2, n) >= 2
    };
    // both conditions are monotone in n, the window is [lo, hi]
    let hi_bound = 3 * ell + 10;
    let valid: Vec<i64> = (0..=hi_bound).filter(|&n| ok(n)).collect();
    match (valid.first(), valid.last()) {
        (Some(&lo), Some(&hi)) => Ok((lo, hi)),
        _ => Err(AdjointError::EllRange(ell)),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum AdjointOutcome {
    /// N_1² = 0, p_a = −1: |N_1| = |2Θ|.
    DoubledPencil,
    /// N_i² = 1, p_a = 0: birational onto the plane.
    Plane { step: usize },
    /// N_i² = 0, p_a = 0: a morphism onto some F_a.
    Ruled { step: usize },
    /// N_step ≡ 0, all counts solved.
    Terminal { step: usize },
    /// N_i ≡ N_{i+1}, so K_Y would be effective.
    KEffective { step: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LadderLeaf {
    pub counts: CycleCounts,
    pub outcome: AdjointOutcome,
    pub trace: Vec<String>,
}

/// Walks the adjoint ladder for case (iii) with fixed n, branching over the
/// later counts allowed by the index theorem.
pub fn classify_ladder(ell: i64, n: i64) -> Result<Vec<LadderLeaf>, AdjointError> {
    let r = RamificationData::case_iii(ell)?;
    let ky2 = crate::cover::quotient_k2(&crate::cover::GodeauxContext::new(), &r)?;
    let mut out = Vec::new();
    walk(ky2, r.h2, 1, CycleCounts::new(n, 0, 0, 0), Vec::new(), &mut out);
    Ok(out)
}

fn row_at(ky2: i64, h2: i64, c: CycleCounts, step: usize) -> AdjointRow {
    adjoint_rows(0, ky2, h2, c, step)[step - 1]
}

fn walk(ky2: i64, h2: i64, step: usize, c: CycleCounts, trace: Vec<String>, out: &mut Vec<LadderLeaf>) {
    let row = row_at(ky2, h2, c, step);
    let mut trace = trace;
    trace.push(format!("N_{step}^2={} p_a(N_{step})={}", row.ni2, row.pa));
    let leaf = |outcome, trace| LadderLeaf { counts: c, outcome, trace };
    match (row.ni2, row.pa) {
        (0, -1) => return out.push(leaf(AdjointOutcome::DoubledPencil, trace)),
        (1, 0) => return out.push(leaf(AdjointOutcome::Plane { step }, trace)),
        (0, 0) => return out.push(leaf(AdjointOutcome::Ruled { step }, trace)),
        _ => {}
    }
    if row.pa < 0 || row.ni2 < 0 || step >= 4 {
        return;
    }
    let next = step + 1;
    if row.pa == 1 {
        // N_i·N_{i+1} = 2p_a − 2 = 0 and N_i is big, so N_{i+1} ≡ 0.
        let at = |v: i64| row_at(ky2, h2, c.with_step(next, v), next).ni2;
        let slope = at(1) - at(0);
        if slope != 0 && at(0) % slope == 0 {
            let v = -at(0) / slope;
            if v >= 0 {
                let mut t = trace.clone();
                t.push(format!("N_{step}N_{next}=0 so N_{next}=0, N_{next}^2=0 gives count {v}"));
                out.push(LadderLeaf {
                    counts: c.with_step(next, v),
                    outcome: AdjointOutcome::Terminal { step: next },
                    trace: t,
                });
            }
        }
        return;
    }
    // index theorem bounds the next count; N_{i+1}^2 grows with it
    for v in 0..=64 {
        let cc = c.with_step(next, v);
        let nr = row_at(ky2, h2, cc, next);
        if nr.ni2 < 0 {
            continue;
        }
        if !index_ok(nr.ni2, nr.prev_dot, row.ni2).unwrap_or(false) {
            break;
        }
        let mut t = trace.clone();
        if nr.ni2 == row.ni2 && nr.prev_dot == row.ni2 {
            t.push(format!("(N_{step}-N_{next})^2=0 so N_{step}=N_{next}"));
            out.push(LadderLeaf { counts: cc, outcome: AdjointOutcome::KEffective { step }, trace: t });
            continue;
        }
        t.push(format!("index theorem allows count {v} at step {next}"));
        walk(ky2, h2, next, cc, t, out);
    }
}

/// A case-(iii) branch in which some N_k ≡ 0.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum LadderBranch {
    /// n = 3ℓ−2, N_2 ≡ 0.
    ThreeEllMinus2,
    /// n = 3ℓ−1, n' = 2, N_3 ≡ 0.
    ThreeEllMinus1,
    /// n = 3ℓ, n' = 0, n'' = 1, N_4 ≡ 0.
    ThreeEll,
}

/// Symbols of the ladder rows: G', ΣZ, ΣZ', ΣZ'', ΣZ''', K_Y.
pub const LADDER_SYMBOLS: [&str; 6] = ["G'", "Z", "Z'", "Z''", "Z'''", "K"];
const SYMBOL_STEP: [usize; 5] = [1, 1, 2, 3, 4];

pub type LadderCoeffs = [i64; 6];

impl LadderBranch {
    pub const ALL: [LadderBranch; 3] =
        [LadderBranch::ThreeEllMinus2, LadderBranch::ThreeEllMinus1, LadderBranch::ThreeEll];

    pub fn id(&self) -> &'static str {
        match self {
            LadderBranch::ThreeEllMinus2 => "3l-2",
            LadderBranch::ThreeEllMinus1 => "3l-1",
            LadderBranch::ThreeEll => "3l",
        }
    }

    pub fn counts(&self, ell: i64) -> CycleCounts {
        match self {
            LadderBranch::ThreeEllMinus2 => CycleCounts::new(3 * ell - 2, 5, 0, 0),
            LadderBranch::ThreeEllMinus1 => CycleCounts::new(3 * ell - 1, 2, 1, 0),
            LadderBranch::ThreeEll => CycleCounts::new(3 * ell, 0, 1, 1),
        }
    }

    /// Index k with N_k ≡ 0.
    pub fn terminal(&self) -> usize {
        match self {
            LadderBranch::ThreeEllMinus2 => 2,
            LadderBranch::ThreeEllMinus1 => 3,
            LadderBranch::ThreeEll => 4,
        }
    }

    pub fn ell_range(&self) -> (i64, i64) {
        match self {
            LadderBranch::ThreeEll => (0, 3),
            _ => (1, 3),
        }
    }

    /// The displayed rows, top row first, last row 2B_0+E'.
    pub fn printed_rows(&self) -> Vec<(&'static str, LadderCoeffs)> {
        match self {
            LadderBranch::ThreeEllMinus2 => vec![
                ("N_1", [1, 1, 1, 0, 0, -1]),
                ("N", [2, 2, 1, 0, 0, -2]),
                ("2B_0+E'", [5, 2, 1, 0, 0, -5]),
            ],
            LadderBranch::ThreeEllMinus1 => vec![
                ("N_2", [1, 1, 1, 1, 0, -1]),
                ("N_1", [2, 2, 2, 1, 0, -2]),
                ("N", [3, 3, 2, 1, 0, -3]),
                ("2B_0+E'", [6, 3, 2, 1, 0, -6]),
            ],
            LadderBranch::ThreeEll => vec![
                ("N_3", [1, 1, 0, 1, 1, -1]),
                ("N_2", [2, 2, 0, 2, 1, -2]),
                ("N_1", [3, 3, 0, 2, 1, -3]),
                ("N", [4, 4, 0, 2, 1, -4]),
                ("2B_0+E'", [7, 4, 0, 2, 1, -7]),
            ],
        }
    }

    /// Rows obtained by unrolling N_k ≡ 0 back to N and then
    /// 2B_0+E' = N − 3K_Y + 3G'. Symbols with no cycles get coefficient 0.
    pub fn derived_rows(&self, counts: CycleCounts) -> Vec<(String, LadderCoeffs)> {
        let mut cur: LadderCoeffs = [0; 6];
        let mut out = Vec::new();
        for i in (0..self.terminal()).rev() {
            cur[5] -= 1;
            for (s, &st) in SYMBOL_STEP.iter().enumerate() {
                if st <= i + 1 {
                    cur[s] += 1;
                }
            }
            let name = if i == 0 { "N".to_string() } else { format!("N_{i}") };
            out.push((name, mask(cur, counts)));
        }
        let mut b = cur;
        b[5] -= 3;
        b[0] += 3;
        out.push(("2B_0+E'".to_string(), mask(b, counts)));
        out
    }
}

fn mask(mut c: LadderCoeffs, counts: CycleCounts) -> LadderCoeffs {
    for s in 1..5 {
        if counts.at_step(SYMBOL_STEP[s]) == 0 {
            c[s] = 0;
        }
    }
    c
}

pub fn format_coeffs(c: &LadderCoeffs) -> String {
    let mut s = String::new();
    for (i, &v) in c.iter().enumerate() {
        if v == 0 {
            continue;
        }
        let sym = if (1..5).contains(&i) { format!("Σ{}", LADDER_SYMBOLS[i]) } else { LADDER_SYMBOLS[i].to_string() };
        let sign = if v < 0 { "-" } else if s.is_empty() { "" } else { "+" };
        let mag = if v.abs() == 1 { String::new() } else { v.abs().to_string() };
        s.push_str(&format!("{sign}{mag}{sym}"));
    }
    if s.is_empty() {
        "0".into()
    } else {
        s
    }
}

/// Classes for the ladder symbols on a concrete lattice.
#[derive(Debug, Clone)]
pub struct LadderModel {
    pub lattice: Arc<IntersectionLattice>,
    pub cycles: BTreeMap<String, Vec<DivisorClass>>,
    /// Class of 2B_0 + E', if known independently of the ladder.
    pub branch_divisor: Option<DivisorClass>,
}

impl LadderModel {
    /// P² blown up at 11 + 3ℓ points. The last exceptional class is G',
    /// before it the Z, then Z', Z'', Z'''; the first points are W.
    pub fn standard(branch: LadderBranch, ell: i64) -> Result<Self, AdjointError> {
        let (lo, hi) = branch.ell_range();
        if ell < lo || ell > hi {
            return Err(AdjointError::EllRange(ell));
        }
        let counts = branch.counts(ell);
        let total = (11 + 3 * ell) as usize;
        let lattice = IntersectionLattice::plane(total).into_arc();
        let mut next = total;
        let mut take = |k: i64| -> Vec<DivisorClass> {
            let mut v: Vec<DivisorClass> = (0..k)
                .map(|_| {
                    let c = DivisorClass::basis(&lattice, next);
                    next -= 1;
                    c
                })
                .collect();
            v.reverse();
            v
        };
        let mut cycles = BTreeMap::new();
        cycles.insert("G'".to_string(), take(1));
        cycles.insert("Z".to_string(), take(counts.n));
        cycles.insert("Z'".to_string(), take(counts.n1));
        cycles.insert("Z''".to_string(), take(counts.n2));
        cycles.insert("Z'''".to_string(), take(counts.n3));
        Ok(LadderModel { lattice, cycles, branch_divisor: None })
    }

    pub fn w_points(&self) -> usize {
        let contracted: usize = self.cycles.values().map(|v| v.len()).sum();
        self.lattice.rank() - 1 - contracted
    }

    fn sum(&self, sym: &str) -> Result<DivisorClass, AdjointError> {
        let v = self.cycles.get(sym).ok_or_else(|| AdjointError::UnassignedSymbol(sym.into()))?;
        Ok(v.iter().fold(DivisorClass::zero(&self.lattice), |a, b| a + b.clone()))
    }

    pub fn eval(&self, c: &LadderCoeffs) -> Result<DivisorClass, AdjointError> {
        let mut out = c[5] * DivisorClass::canonical(&self.lattice);
        for (s, sym) in LADDER_SYMBOLS.iter().enumerate().take(5) {
            if c[s] != 0 {
                out = out + c[s] * self.sum(sym)?;
            }
        }
        Ok(out)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LadderCheck {
    pub what: String,
    pub expected: i64,
    pub got: i64,
}

impl LadderCheck {
    pub fn holds(&self) -> bool {
        self.expected == self.got
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LadderReport {
    pub branch: LadderBranch,
    pub ell: i64,
    pub counts: CycleCounts,
    pub checks: Vec<LadderCheck>,
}

impl LadderReport {
    pub fn holds(&self) -> bool {
        !self.checks.is_empty() && self.checks.iter().all(LadderCheck::holds)
    }

    pub fn failures(&self) -> Vec<&LadderCheck> {
        self.checks.iter().filter(|c| !c.holds()).collect()
    }
}

fn check(checks: &mut Vec<LadderCheck>, what: impl Into<String>, expected: i64, got: i64) {
    checks.push(LadderCheck { what: what.into(), expected, got });
}

/// Checks the printed ladder of `branch` on `model`.
///
/// Each printed row must equal the row obtained by unrolling N_k ≡ 0. The
/// numbers of N, N_i on the model must match the adjoint table, and
/// 2B_0+E' must have the square and canonical degree forced by ℓ
/// components of B_0 (−6, K·=4) and h_1 components of E' (−3, K·=1).
pub fn verify_ladder_identity(
    branch: LadderBranch,
    ell: i64,
    model: &LadderModel,
) -> Result<LadderReport, AdjointError> {
    let counts = branch.counts(ell);
    let r = RamificationData::case_iii(ell)?;
    let ky2 = crate::cover::quotient_k2(&crate::cover::GodeauxContext::new(), &r)?;
    let mut checks = Vec::new();

    let k = DivisorClass::canonical(&model.lattice);
    check(&mut checks, "K_Y^2", ky2, k.square());

    let derived = branch.derived_rows(counts);
    let printed = branch.printed_rows();
    if derived.len() != printed.len() {
        check(&mut checks, "row count", printed.len() as i64, derived.len() as i64);
    }
    let mut classes: BTreeMap<String, DivisorClass> = BTreeMap::new();
    for ((pname, pc), (dname, dc)) in printed.iter().zip(derived.iter()) {
        let p = model.eval(&mask(*pc, counts))?;
        let d = model.eval(dc)?;
        let diff = &p - &d;
        let nonzero = diff.coeffs.iter().filter(|&&x| x != 0).count() as i64;
        check(&mut checks, format!("{pname} printed = {dname} derived ({} vs {})", format_coeffs(pc), format_coeffs(dc)), 0, nonzero);
        classes.insert(pname.to_string(), p);
    }

    let n = classes.get("N").cloned().ok_or_else(|| AdjointError::UnassignedSymbol("N".into()))?;
    let n0 = row_zero(0);
    check(&mut checks, "N^2", n0.ni2, n.square());
    check(&mut checks, "N.K", n0.nik, n.dot(&k));
    for (sym, want) in [("G'", 0), ("Z", 0), ("Z'", 1), ("Z''", 2), ("Z'''", 3)] {
        for (j, c) in model.cycles.get(sym).ok_or_else(|| AdjointError::UnassignedSymbol(sym.into()))?.iter().enumerate() {
            check(&mut checks, format!("N.{sym}{}", j + 1), want, n.dot(c));
            check(&mut checks, format!("{sym}{}^2", j + 1), -1, c.square());
            check(&mut checks, format!("K.{sym}{}", j + 1), -1, c.dot(&k));
        }
    }

    // iterate the adjoint definition on the model
    let rows = adjoint_rows(0, ky2, r.h2, counts, branch.terminal());
    let mut prev = n.clone();
    let mut contracted = DivisorClass::zero(&model.lattice);
    for step in 1..=branch.terminal() {
        for (s, sym) in LADDER_SYMBOLS.iter().enumerate().take(5) {
            if SYMBOL_STEP[s] == step {
                contracted = contracted + model.sum(sym)?;
            }
        }
        let cur = &(&prev + &k) - &contracted;
        let row = rows[step - 1];
        check(&mut checks, format!("N_{step}^2"), row.ni2, cur.square());
        check(&mut checks, format!("N_{step}.K"), row.nik, cur.dot(&k));
        check(&mut checks, format!("N_{}.N_{step}", step - 1), row.prev_dot, prev.dot(&cur));
        if step <= 3 {
            let t = adjoint_table(0, ky2, r.h2, counts)[step - 1];
            check(&mut checks, format!("table N_{step}^2"), t.ni2, cur.square());
        }
        if step == branch.terminal() {
            let nz = cur.coeffs.iter().filter(|&&x| x != 0).count() as i64;
            check(&mut checks, format!("N_{step} = 0"), 0, nz);
        }
        prev = cur;
    }

    let b = classes.get("2B_0+E'").cloned().ok_or_else(|| AdjointError::UnassignedSymbol("2B_0+E'".into()))?;
    check(&mut checks, "(2B_0+E')^2", 4 * (-6 * ell) - 3 * r.h1, b.square());
    check(&mut checks, "(2B_0+E').K", 2 * 4 * ell + r.h1, b.dot(&k));
    let g = model.sum("G'")?;
    let rebuilt = &(&(3 * k.clone()) + &b) - &(3 * g);
    check(&mut checks, "N = 3K+2B_0+E'-3G'", 0, (&rebuilt - &n).coeffs.iter().filter(|&&x| x != 0).count() as i64);
    if let Some(bd) = &model.branch_divisor {
        check(&mut checks, "independent 2B_0+E' agrees", 0, (bd - &b).coeffs.iter().filter(|&&x| x != 0).count() as i64);
    }

    Ok(LadderReport { branch, ell, counts, checks })
}

/// One component in a (−1)-cycle.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CyclePart {
    pub component: String,
    pub mult: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CycleSpec {
    pub cycle: Vec<CyclePart>,
}

impl CycleSpec {
    pub fn of(parts: &[(&str, i64)]) -> Self {
        CycleSpec {
            cycle: parts.iter().map(|&(c, m)| CyclePart { component: c.into(), mult: m }).collect(),
        }
    }

    fn is_irreducible(&self) -> bool {
        self.cycle.len() == 1 && self.cycle[0].mult == 1
    }
}

/// Kind of a named component, read from its prefix.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ComponentKind {
    /// Irreducible (−1)-curve Z.
    Minus1,
    /// E'_k: (−3), K·=1.
    EPrime,
    /// G'_j: (−1), K·=−1.
    GPrime,
    /// F'_j or H'_j: (−3), K·=1.
    FhPrime,
    /// Component of B_0: (−6), K·=4.
    B0,
    /// (−2)-curve C.
    Minus2,
}

impl ComponentKind {
    pub fn of(name: &str) -> Option<Self> {
        if name.starts_with("E'") {
            Some(ComponentKind::EPrime)
        } else if name.starts_with("G'") {
            Some(ComponentKind::GPrime)
        } else if name.starts_with("F'") || name.starts_with("H'") {
            Some(ComponentKind::FhPrime)
        } else if name.starts_with("B0") {
            Some(ComponentKind::B0)
        } else if name.starts_with('Z') {
            Some(ComponentKind::Minus1)
        } else if name.starts_with('C') {
            Some(ComponentKind::Minus2)
        } else {
            None
        }
    }

    pub fn self_int(&self) -> i64 {
        match self {
            ComponentKind::Minus1 | ComponentKind::GPrime => -1,
            ComponentKind::EPrime | ComponentKind::FhPrime => -3,
            ComponentKind::B0 => -6,
            ComponentKind::Minus2 => -2,
        }
    }

    pub fn k_degree(&self) -> i64 {
        match self {
            ComponentKind::Minus1 | ComponentKind::GPrime => -1,
            ComponentKind::EPrime | ComponentKind::FhPrime => 1,
            ComponentKind::B0 => 4,
            ComponentKind::Minus2 => 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error, Serialize, Deserialize)]
pub enum CycleViolation {
    #[error("unknown component {0}")]
    UnknownComponent(String),
    #[error("cycle {0} contains {1}, which cannot lie in a cycle")]
    ForbiddenComponent(usize, String),
    #[error("cycle {0} contains two curves E'")]
    TwoEPrime(usize),
    #[error("cycle {cycle} has {what} = {got}, expected -1")]
    Numerics { cycle: usize, what: String, got: i64 },
    #[error("irreducible cycle {cycle} has {what} = {got}, expected 1")]
    Intersection { cycle: usize, what: String, got: i64 },
    #[error("reducible cycle {0} has an unsupported shape")]
    Shape(usize),
}

/// Declared intersections between distinct named components; missing pairs
/// are 0.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntersectionTable {
    pub pairs: BTreeMap<(String, String), i64>,
}

impl IntersectionTable {
    pub fn set(&mut self, a: &str, b: &str, v: i64) {
        let key = if a <= b { (a.to_string(), b.to_string()) } else { (b.to_string(), a.to_string()) };
        self.pairs.insert(key, v);
    }

    pub fn get(&self, a: &str, b: &str) -> Option<i64> {
        if a == b {
            return ComponentKind::of(a).map(|k| k.self_int());
        }
        let key = if a <= b { (a.to_string(), b.to_string()) } else { (b.to_string(), a.to_string()) };
        Some(self.pairs.get(&key).copied().unwrap_or(0))
    }

    fn with_prefix(&self, a: &str, prefix: &str) -> i64 {
        let mut names: Vec<&String> = self
            .pairs
            .keys()
            .flat_map(|(x, y)| [x, y])
            .filter(|n| n.starts_with(prefix) && n.as_str() != a)
            .collect();
        names.sort();
        names.dedup();
        names.iter().map(|n| self.get(a, n).unwrap_or(0)).sum()
    }
}

fn cycle_dot(a: &CycleSpec, b: &CycleSpec, t: &IntersectionTable) -> Result<i64, CycleViolation> {
    let mut s = 0;
    for x in &a.cycle {
        for y in &b.cycle {
            let v = t.get(&x.component, &y.component).ok_or_else(|| CycleViolation::UnknownComponent(x.component.clone()))?;
            s += x.mult * y.mult * v;
        }
    }
    Ok(s)
}

fn multiset(c: &CycleSpec) -> BTreeMap<String, i64> {
    let mut m = BTreeMap::new();
    for p in &c.cycle {
        *m.entry(p.component.clone()).or_insert(0) += p.mult;
    }
    m
}

/// Accepts a configuration of (−1)-cycles or names the first violation.
pub fn cycle_structure_check(config: &[CycleSpec], table: &IntersectionTable) -> Result<(), CycleViolation> {
    for (i, c) in config.iter().enumerate() {
        let mut es = Vec::new();
        let mut kdeg = 0;
        for p in &c.cycle {
            let kind = ComponentKind::of(&p.component).ok_or_else(|| CycleViolation::UnknownComponent(p.component.clone()))?;
            if matches!(kind, ComponentKind::GPrime | ComponentKind::FhPrime) {
                return Err(CycleViolation::ForbiddenComponent(i, p.component.clone()));
            }
            if kind == ComponentKind::EPrime && !es.contains(&p.component) {
                es.push(p.component.clone());
            }
            kdeg += p.mult * kind.k_degree();
        }
        if es.len() >= 2 {
            return Err(CycleViolation::TwoEPrime(i));
        }
        let sq = cycle_dot(c, c, table)?;
        if sq != -1 {
            return Err(CycleViolation::Numerics { cycle: i, what: "square".into(), got: sq });
        }
        if kdeg != -1 {
            return Err(CycleViolation::Numerics { cycle: i, what: "K-degree".into(), got: kdeg });
        }
    }
    let irreducible: Vec<&str> =
        config.iter().filter(|c| c.is_irreducible()).map(|c| c.cycle[0].component.as_str()).collect();
    for (i, c) in config.iter().enumerate() {
        if c.is_irreducible() {
            let name = &c.cycle[0].component;
            if ComponentKind::of(name) != Some(ComponentKind::Minus1) {
                return Err(CycleViolation::Shape(i));
            }
            for (what, prefix) in [("C.B_0", "B0"), ("C.E'", "E'")] {
                let got = table.with_prefix(name, prefix);
                if got != 1 {
                    return Err(CycleViolation::Intersection { cycle: i, what: what.into(), got });
                }
            }
            continue;
        }
        if !reducible_shape_ok(c, &irreducible, table) {
            return Err(CycleViolation::Shape(i));
        }
    }
    Ok(())
}

fn reducible_shape_ok(c: &CycleSpec, irreducible: &[&str], t: &IntersectionTable) -> bool {
    let m = multiset(c);
    let kinds: Vec<(ComponentKind, &String, i64)> =
        m.iter().filter_map(|(n, &v)| ComponentKind::of(n).map(|k| (k, n, v))).collect();
    let zs: Vec<&(ComponentKind, &String, i64)> = kinds.iter().filter(|x| x.0 == ComponentKind::Minus1).collect();
    let es: Vec<&(ComponentKind, &String, i64)> = kinds.iter().filter(|x| x.0 == ComponentKind::EPrime).collect();
    let cs: Vec<&(ComponentKind, &String, i64)> = kinds.iter().filter(|x| x.0 == ComponentKind::Minus2).collect();
    if kinds.iter().any(|x| x.0 == ComponentKind::B0) {
        return false;
    }
    let is_irr = |n: &str| irreducible.contains(&n);
    let meets = |a: &str, b: &str| t.get(a, b) == Some(1);
    match (zs.len(), es.len(), cs.len()) {
        // Z_a + Z_b + E'_k
        (2, 1, 0) => {
            zs.iter().all(|z| z.2 == 1 && is_irr(z.1) && meets(z.1, es[0].1)) && es[0].2 == 1
        }
        // Z_1 + C
        (1, 0, 1) => zs[0].2 == 1 && cs[0].2 == 1 && is_irr(zs[0].1) && meets(zs[0].1, cs[0].1),
        // C + 2Z_1 + E'_k
        (1, 1, 1) => {
            zs[0].2 == 2
                && cs[0].2 == 1
                && es[0].2 == 1
                && is_irr(zs[0].1)
                && meets(zs[0].1, cs[0].1)
                && meets(zs[0].1, es[0].1)
        }
        _ => false,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ky2_iii(ell: i64) -> i64 {
        -2 - 3 * ell
    }

    /// Abstract lattice spanned by N, K and the cycles, with the numbers
    /// of the adjoint setting and no geometry.
    fn formal(r0k: i64, ky2: i64, h2: i64, c: CycleCounts) -> (Arc<IntersectionLattice>, Vec<Vec<usize>>) {
        let mut basis = vec!["N".to_string(), "K".to_string()];
        let mut steps = vec![Vec::new(); 5];
        for j in 0..h2 {
            steps[1].push(basis.len());
            basis.push(format!("G{j}"));
        }
        for s in 1..=4 {
            for j in 0..c.at_step(s) {
                steps[s].push(basis.len());
                basis.push(format!("C{s}_{j}"));
            }
        }
        let r = basis.len();
        let mut gram = vec![vec![0; r]; r];
        gram[0][0] = 3;
        gram[0][1] = 1 - 2 * r0k;
        gram[1][0] = 1 - 2 * r0k;
        gram[1][1] = ky2;
        for (s, idx) in steps.iter().enumerate() {
            for &i in idx {
                gram[i][i] = -1;
                gram[1][i] = -1;
                gram[i][1] = -1;
                gram[0][i] = s as i64 - 1;
                gram[i][0] = s as i64 - 1;
            }
        }
        let mut canonical = vec![0; r];
        canonical[1] = 1;
        (IntersectionLattice::new("formal", basis, gram, canonical).unwrap().into_arc(), steps)
    }

    fn formal_rows(r0k: i64, ky2: i64, h2: i64, c: CycleCounts, depth: usize) -> Vec<(i64, i64, i64)> {
        let (lat, steps) = formal(r0k, ky2, h2, c);
        let k = DivisorClass::basis(&lat, 1);
        let mut prev = DivisorClass::basis(&lat, 0);
        let mut contracted = DivisorClass::zero(&lat);
        let mut out = Vec::new();
        for s in 1..=depth {
            for &i in &steps[s] {
                contracted = contracted + DivisorClass::basis(&lat, i);
            }
            let cur = &(&prev + &k) - &contracted;
            out.push((cur.square(), cur.dot(&k), prev.dot(&cur)));
            prev = cur;
        }
        out
    }

    #[test]
    fn table_matches_formal_lattice() {
        for (r0k, h2) in [(0, 1), (0, 4), (1, 3)] {
            for ky2 in -14..=-2 {
                for n in 0..8 {
                    for n1 in 0..4 {
                        for n2 in 0..3 {
                            let c = CycleCounts::new(n, n1, n2, 0);
                            let t = adjoint_table(r0k, ky2, h2, c);
                            let f = formal_rows(r0k, ky2, h2, c, 3);
                            for i in 0..3 {
                                assert_eq!((t[i].ni2, t[i].nik, t[i].prev_dot), f[i], "{r0k} {h2} {ky2} {c} row {}", i + 1);
                                assert_eq!(t[i].pa, 1 + (t[i].ni2 + t[i].nik) / 2);
                                assert_eq!((t[i].ni2 + t[i].nik) % 2, 0);
                            }
                            let st = adjoint_rows(r0k, ky2, h2, c, 3);
                            assert_eq!(st, t);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn step_four_matches_formal_lattice() {
        let c = CycleCounts::new(3, 0, 1, 1);
        let f = formal_rows(0, -5, 1, c, 4);
        let r = adjoint_rows(0, -5, 1, c, 4);
        assert_eq!((r[3].ni2, r[3].nik, r[3].prev_dot), f[3]);
        assert_eq!(r[3].ni2, 0);
    }

    #[test]
    fn printed_examples() {
        let t = adjoint_table(0, -5, 1, CycleCounts::new(3, 0, 0, 0));
        assert_eq!(t[0].ni2, 4);
        let t = adjoint_table(0, -5, 1, CycleCounts::new(2, 0, 0, 0));
        assert_eq!(t[0].ni2, 3);
        assert_eq!(t[1].prev_dot, 2);
        for ky2 in -12..0 {
            for n in 0..6 {
                let t = adjoint_table(1, ky2, 3, CycleCounts::new(n, 0, 0, 0));
                assert_eq!(t[0].ni2, 4 + ky2 + n);
                assert_eq!(t[0].pa, 4 + ky2 + n);
            }
        }
    }

    #[test]
    fn z_bound_specialisations() {
        for ell in 0..5 {
            assert_eq!(z_lower_bound(0, -2 * ell, 1), Ratio::from_integer(3 * ell - 4));
            for g in [-5, -3, -1, 1] {
                assert_eq!(z_lower_bound(1, g - 2 * ell, 3), Ratio::new(1, 2) - Ratio::new(3 * g, 2) + Ratio::from_integer(3 * ell));
            }
        }
        assert_eq!(z_lower_bound_int(0, 0, 1), 0);
    }

    #[test]
    fn n_window() {
        assert_eq!(n_range(0).unwrap(), (0, 0));
        assert_eq!(n_range(1).unwrap(), (0, 3));
        assert_eq!(n_range(2).unwrap(), (2, 6));
        assert_eq!(n_range(3).unwrap(), (5, 9));
        assert_eq!(restriction_h0(0, ky2_iii(2), 1, 6), 2);
    }

    #[test]
    fn forced_counts() {
        for ell in 1..=3 {
            let leaves = classify_ladder(ell, 3 * ell - 2).unwrap();
            assert_eq!(leaves.len(), 1);
            assert_eq!(leaves[0].counts.n1, 5);
            assert_eq!(leaves[0].outcome, AdjointOutcome::Terminal { step: 2 });

            let leaves = classify_ladder(ell, 3 * ell - 1).unwrap();
            let got: Vec<_> = leaves.iter().map(|l| (l.counts, l.outcome.clone())).collect();
            assert_eq!(
                got,
                vec![
                    (CycleCounts::new(3 * ell - 1, 1, 0, 0), AdjointOutcome::Ruled { step: 2 }),
                    (CycleCounts::new(3 * ell - 1, 2, 1, 0), AdjointOutcome::Terminal { step: 3 }),
                ]
            );
            let leaves = classify_ladder(ell, 3 * ell - 3).unwrap();
            assert_eq!(leaves[0].outcome, AdjointOutcome::Plane { step: 1 });
        }
        for ell in 0..=3 {
            let leaves = classify_ladder(ell, 3 * ell).unwrap();
            let got: Vec<_> = leaves.iter().map(|l| (l.counts, l.outcome.clone())).collect();
            assert_eq!(
                got,
                vec![
                    (CycleCounts::new(3 * ell, 0, 0, 0), AdjointOutcome::Ruled { step: 3 }),
                    (CycleCounts::new(3 * ell, 0, 1, 1), AdjointOutcome::Terminal { step: 4 }),
                    (CycleCounts::new(3 * ell, 1, 0, 0), AdjointOutcome::KEffective { step: 1 }),
                ]
            );
        }
        let leaves = classify_ladder(2, 2).unwrap();
        assert_eq!(leaves[0].outcome, AdjointOutcome::DoubledPencil);
    }

    #[test]
    fn ladders_hold_on_standard_models() {
        for b in LadderBranch::ALL {
            let (lo, hi) = b.ell_range();
            for ell in lo..=hi {
                let m = LadderModel::standard(b, ell).unwrap();
                let rep = verify_ladder_identity(b, ell, &m).unwrap();
                assert!(rep.holds(), "{:?} ell={ell}: {:?}", b, rep.failures());
                let w = if b == LadderBranch::ThreeEllMinus2 { 7 } else { 8 };
                assert_eq!(m.w_points(), w);
            }
        }
    }

    #[test]
    fn degenerate_model_fails() {
        let mut m = LadderModel::standard(LadderBranch::ThreeEll, 1).unwrap();
        for v in m.cycles.values_mut() {
            for c in v.iter_mut() {
                *c = DivisorClass::zero(&m.lattice);
            }
        }
        let rep = verify_ladder_identity(LadderBranch::ThreeEll, 1, &m).unwrap();
        assert!(!rep.holds());
    }

    #[test]
    fn wrong_printed_row_is_caught() {
        let d = LadderBranch::ThreeEll.derived_rows(LadderBranch::ThreeEll.counts(1));
        let p = LadderBranch::ThreeEll.printed_rows();
        for ((_, a), (_, b)) in p.iter().zip(d.iter()) {
            assert_eq!(mask(*a, LadderBranch::ThreeEll.counts(1)), *b);
        }
        assert_eq!(format_coeffs(&d.last().unwrap().1), "7G'+4ΣZ+2ΣZ''+ΣZ'''-7K");
    }

    fn table_for(pairs: &[(&str, &str, i64)]) -> IntersectionTable {
        let mut t = IntersectionTable::default();
        for &(a, b, v) in pairs {
            t.set(a, b, v);
        }
        t
    }

    #[test]
    fn cycle_shapes() {
        let t = table_for(&[("Z1", "E'1", 1), ("Z2", "E'1", 1), ("Z1", "B01", 1), ("Z2", "B01", 1)]);
        let cfg = [CycleSpec::of(&[("Z1", 1)]), CycleSpec::of(&[("Z2", 1)]), CycleSpec::of(&[("Z1", 1), ("Z2", 1), ("E'1", 1)])];
        assert_eq!(cycle_structure_check(&cfg, &t), Ok(()));

        let t2 = table_for(&[("Z1", "E'1", 1), ("Z1", "B01", 1), ("Z1", "C1", 1)]);
        let cfg2 = [
            CycleSpec::of(&[("Z1", 1)]),
            CycleSpec::of(&[("Z1", 1), ("C1", 1)]),
            CycleSpec::of(&[("C1", 1), ("Z1", 2), ("E'1", 1)]),
        ];
        assert_eq!(cycle_structure_check(&cfg2, &t2), Ok(()));

        let t3 = table_for(&[("Z1", "G'1", 1), ("Z1", "E'1", 1), ("Z1", "B01", 1)]);
        let cfg3 = [CycleSpec::of(&[("Z1", 1)]), CycleSpec::of(&[("Z1", 1), ("G'1", 1)])];
        assert!(matches!(cycle_structure_check(&cfg3, &t3), Err(CycleViolation::ForbiddenComponent(1, _))));

        let cfg4 = [CycleSpec::of(&[("Z1", 1), ("E'1", 1), ("E'2", 1)])];
        assert_eq!(cycle_structure_check(&cfg4, &t), Err(CycleViolation::TwoEPrime(0)));

        let t5 = table_for(&[("Z1", "E'1", 1), ("Z1", "E'2", 1), ("Z1", "B01", 1)]);
        let cfg5 = [CycleSpec::of(&[("Z1", 1)])];
        assert!(matches!(cycle_structure_check(&cfg5, &t5), Err(CycleViolation::Intersection { .. })));
    }

    #[test]
    fn cycle_json_shape() {
        let s = serde_json::to_string(&CycleSpec::of(&[("Z1", 2)])).unwrap();
        assert_eq!(s, r#"{"cycle":[{"component":"Z1","mult":2}]}"#);
    }
}
