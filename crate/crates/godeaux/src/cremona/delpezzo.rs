//! The Del Pezzo endgame at ℓ = 1: the B̄_0 tables and what the index
//! theorem leaves of them, the printed multiplicity tables, F'/H' images,
//! and the mod 3 eigenvalue audit.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use super::multiplicity::degree_budget;
use super::{ConfigTable, CremonaError, PlaneCurve, PointCluster, Relabel};
use crate::adjoint::{LadderBranch, LadderModel};
use crate::fibration::{Elimination, Relation};
use crate::picard::DivisorClass;

pub const TABLES: &[(&str, &str)] = &[
    ("w8_820000", include_str!("../../data/tables/w8_820000.json")),
    ("w8_811000", include_str!("../../data/tables/w8_811000.json")),
    ("w8_810010", include_str!("../../data/tables/w8_810010.json")),
    ("y14_base", include_str!("../../data/tables/y14_base.json")),
    ("y14_lines", include_str!("../../data/tables/y14_lines.json")),
    ("y14_conic_contracted", include_str!("../../data/tables/y14_conic_contracted.json")),
    ("y14_line_contracted", include_str!("../../data/tables/y14_line_contracted.json")),
    ("y14_both_contracted", include_str!("../../data/tables/y14_both_contracted.json")),
    ("y14_p3l12", include_str!("../../data/tables/y14_p3l12.json")),
    ("y14_p3l13", include_str!("../../data/tables/y14_p3l13.json")),
];

const B0_ROWS_3L: &str = include_str!("../../data/tables/b0_rows_3l.json");
const B0_ROWS_3L1: &str = include_str!("../../data/tables/b0_rows_3l-1.json");

pub fn table(name: &str) -> Result<ConfigTable, CremonaError> {
    let (_, src) = TABLES.iter().find(|(n, _)| *n == name).ok_or_else(|| CremonaError::UnknownRow(name.into()))?;
    ConfigTable::from_json(src)
}

fn inst(pairs: &[(&str, i64)]) -> BTreeMap<String, i64> {
    pairs.iter().map(|&(k, v)| (k.to_string(), v)).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum DpBranch {
    /// n = 3ℓ: contracted Z_1, Z_2, Z_3, Z'', Z'''.
    ThreeEll,
    /// n = 3ℓ − 1: contracted Z_1, Z_2, Z'_1, Z'_2, Z''.
    ThreeEllMinus1,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum IndexCheck {
    /// B̄_0² > s²
    Excluded,
    /// B̄_0² = s², so B̄_0 ≡ sN̄
    Equality,
    Strict,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct B0Row {
    /// B_0 against the contracted cycles, then s = B̄_0N̄.
    pub values: Vec<i64>,
    pub s: i64,
    pub b0_square: i64,
    pub index: IndexCheck,
}

// B_0² = −6, B_0K = 4, B_0N = 0 and B_0Z_i = 1 on the irreducible cycles.
const B0_SQ: i64 = -6;
const B0_K: i64 = 4;
const B0_N: i64 = 0;

fn index_check(sq: i64, s: i64) -> IndexCheck {
    match sq.cmp(&(s * s)) {
        std::cmp::Ordering::Greater => IndexCheck::Excluded,
        std::cmp::Ordering::Equal => IndexCheck::Equality,
        std::cmp::Ordering::Less => IndexCheck::Strict,
    }
}

/// Every nonnegative solution of the vanishing of B_0 against the last,
/// numerically trivial, class of the ladder.
pub fn b0_rows(branch: DpBranch) -> Vec<B0Row> {
    let mut out = Vec::new();
    match branch {
        DpBranch::ThreeEll => {
            // 0 = B_0N_4 = B_0N + 4B_0K − 4ΣB_0Z_i − 2B_0Z'' − B_0Z'''
            let rhs = B0_N + 4 * B0_K - 4 * 3;
            for x in (0..=rhs / 2).rev() {
                let y = rhs - 2 * x;
                let s = B0_N + 3 * B0_K - 3 * 3 - x;
                let sq = B0_SQ + 3 + x * x + y * y;
                out.push(B0Row { values: vec![1, 1, 1, x, y, s], s, b0_square: sq, index: index_check(sq, s) });
            }
        }
        DpBranch::ThreeEllMinus1 => {
            // 0 = B_0N_3 = B_0N + 3B_0K − 3ΣB_0Z_i − 2ΣB_0Z'_i − B_0Z''
            let rhs = B0_N + 3 * B0_K - 3 * 2;
            for a in (0..=rhs / 2).rev() {
                for b in (0..=a.min(rhs / 2 - a)).rev() {
                    let c = rhs - 2 * (a + b);
                    let s = B0_N + 2 * B0_K - 2 * 2 - (a + b);
                    if s < 1 {
                        continue;
                    }
                    let sq = B0_SQ + 2 + a * a + b * b + c * c;
                    out.push(B0Row { values: vec![1, 1, a, b, c, s], s, b0_square: sq, index: index_check(sq, s) });
                }
            }
        }
    }
    out
}

#[derive(Debug, Clone, Deserialize)]
struct PrintedRows {
    rows: Vec<PrintedRow>,
}

#[derive(Debug, Clone, Deserialize)]
struct PrintedRow {
    label: String,
    values: Vec<i64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct B0TableCheck {
    pub printed: Vec<(String, Vec<i64>)>,
    pub derived: Vec<B0Row>,
    /// Derived rows absent from the printed table.
    pub unprinted: Vec<Vec<i64>>,
    /// Printed rows that are not solutions.
    pub spurious: Vec<String>,
}

pub fn b0_table_check(branch: DpBranch) -> Result<B0TableCheck, CremonaError> {
    let src = match branch {
        DpBranch::ThreeEll => B0_ROWS_3L,
        DpBranch::ThreeEllMinus1 => B0_ROWS_3L1,
    };
    let p: PrintedRows = serde_json::from_str(src).map_err(|e| CremonaError::Parse(e.to_string()))?;
    let derived = b0_rows(branch);
    let dv: BTreeSet<&Vec<i64>> = derived.iter().map(|r| &r.values).collect();
    let pv: BTreeSet<&Vec<i64>> = p.rows.iter().map(|r| &r.values).collect();
    Ok(B0TableCheck {
        printed: p.rows.iter().map(|r| (r.label.clone(), r.values.clone())).collect(),
        unprinted: derived.iter().filter(|r| !pv.contains(&r.values)).map(|r| r.values.clone()).collect(),
        spurious: p.rows.iter().filter(|r| !dv.contains(&r.values)).map(|r| r.label.clone()).collect(),
        derived,
    })
}

/// One E'_k: its products with the contracted cycles (None if contracted).
#[derive(Debug, Clone, PartialEq, Eq)]
struct EImage {
    z: Vec<i64>,
    n: i64,
}

impl EImage {
    fn square(&self) -> i64 {
        -3 + self.z.iter().map(|x| x * x).sum::<i64>()
    }

    fn dot(&self, o: &EImage) -> i64 {
        self.z.iter().zip(&o.z).map(|(a, b)| a * b).sum()
    }
}

/// Options for a non-contracted E'_k with 2x + y = t, where x is split over
/// `split` cycles. Returns (y, image) pairs; y < 0 means E'_k sits in the
/// last cycle and is contracted.
fn e_options(t: i64, split: usize, n_of_x: impl Fn(i64) -> i64) -> Vec<(i64, Option<EImage>)> {
    let mut out = Vec::new();
    for x in 0..=2 {
        let y = t - 2 * x;
        if y < -1 {
            continue;
        }
        let mut parts: Vec<Vec<i64>> = vec![vec![]];
        for _ in 0..split.saturating_sub(1) {
            parts = parts.into_iter().flat_map(|p| (0..=x).map(move |u| [p.clone(), vec![u]].concat())).collect();
        }
        for p in parts {
            let used: i64 = p.iter().sum();
            if used > x {
                continue;
            }
            let mut z = p.clone();
            if split > 0 {
                z.push(x - used);
            }
            if y < 0 {
                out.push((y, None));
                break;
            }
            z.push(y);
            out.push((y, Some(EImage { z, n: n_of_x(x) })));
        }
    }
    out
}

fn product<T: Clone>(opts: &[T], k: usize) -> Vec<Vec<T>> {
    let mut acc: Vec<Vec<T>> = vec![vec![]];
    for _ in 0..k {
        acc = acc.into_iter().flat_map(|p| opts.iter().map(move |o| [p.clone(), vec![o.clone()]].concat())).collect();
    }
    acc
}

/// Shared count for l.noa, l.nob and the unprinted row: combinations of
/// E'_k images with Σ y = `y_sum` where every image satisfies the index
/// bound Ē'² ≤ (Ē'N̄)², and optionally Ē'² equals `total`.
fn e_count(
    id: &str,
    branch: &str,
    k: usize,
    t: i64,
    split: usize,
    n_of_x: impl Fn(i64) -> i64,
    y_sum: i64,
    total: Option<i64>,
) -> Elimination {
    let opts = e_options(t, split, n_of_x);
    let mut trace = vec![format!("2x + y = {t} per curve, sum of y over {k} curves = {y_sum}")];
    let mut survivors = 0;
    let mut seen_sets = BTreeSet::new();
    for combo in product(&opts, k) {
        if combo.iter().map(|(y, _)| y).sum::<i64>() != y_sum {
            continue;
        }
        let imgs: Vec<&EImage> = combo.iter().filter_map(|(_, e)| e.as_ref()).collect();
        let bad = imgs.iter().find(|e| e.square() > e.n * e.n);
        let mut ys: Vec<i64> = combo.iter().map(|(y, _)| *y).collect();
        ys.sort_unstable();
        if let Some(e) = bad {
            if seen_sets.insert((ys.clone(), "index")) {
                trace.push(format!("y = {ys:?}: some E'_k has E'^2 = {} > ({})^2", e.square(), e.n));
            }
            continue;
        }
        if let Some(want) = total {
            let sq: i64 = imgs.iter().map(|e| e.square()).sum::<i64>()
                + 2 * (0..imgs.len()).flat_map(|i| (i + 1..imgs.len()).map(move |j| (i, j))).map(|(i, j)| imgs[i].dot(imgs[j])).sum::<i64>();
            if sq != want {
                if seen_sets.insert((ys.clone(), "total")) {
                    trace.push(format!("y = {ys:?}: E'^2 <= {sq} while E' = {want} is required"));
                }
                continue;
            }
        }
        survivors += 1;
        trace.push(format!("survivor y = {ys:?}"));
    }
    Elimination::new(id, branch, inst(&[("y_sum", y_sum)]), 1, survivors, Relation::AtMost, trace)
}

/// l.noa: n = 3ℓ, case a). E'_1, E'_2 with 2E'Z'' + E'Z''' = 4 and
/// (E'_1 + E'_2)Z''' = 6.
pub fn lemma_noa() -> Elimination {
    e_count("l.noa", "3l a)", 2, 4, 1, |x| 3 - x, 6, None)
}

/// l.nob: n = 3ℓ − 1, case b). E'_1..E'_3 with 2E'ΣZ' + E'Z'' = 3 and
/// Σ E'_kZ'' = 5.
pub fn lemma_nob() -> Elimination {
    e_count("l.nob", "3l-1 b)", 3, 3, 2, |x| 2 - x, 5, None)
}

/// The row (2,0,2) of the n = 3ℓ − 1 table: B̄_0 ≡ 2N̄_2 = −2K_W, hence
/// Ē' = −6K_W − 2B̄_0 = −2K_W and Ē'² = 4, while Σ E'_kZ'' = 5 − 2·2 = 1.
pub fn row_202() -> Elimination {
    e_count("b0.202", "3l-1 (2,0,2)", 3, 3, 2, |x| 2 - x, 5 - 2 * 2, Some(4)).reconstructed(true)
}

/// All plane classes (d; m_1..m_8) with given square, −K degree and
/// product with `b0`, for d ≤ dmax and m ≥ 0 (d ≥ 1).
pub fn plane_classes(square: i64, minus_k: i64, b0: &PlaneCurve, with_b0: i64, dmax: i64) -> Vec<PlaneCurve> {
    let n = b0.mults.len();
    let mut out = Vec::new();
    for d in 1..=dmax {
        let lin = 3 * d - minus_k;
        let sq = d * d - square;
        if lin < 0 || sq < 0 {
            continue;
        }
        let mut m = vec![0i64; n];
        fn rec(i: usize, m: &mut Vec<i64>, lin: i64, sq: i64, d: i64, out: &mut Vec<Vec<i64>>) {
            if i == m.len() {
                if lin == 0 && sq == 0 {
                    out.push(m.clone());
                }
                return;
            }
            for x in 0..=d.min(lin) {
                if x * x > sq {
                    break;
                }
                m[i] = x;
                rec(i + 1, m, lin - x, sq - x * x, d, out);
            }
            m[i] = 0;
        }
        let mut found = Vec::new();
        rec(0, &mut m, lin, sq, d, &mut found);
        for f in found {
            let c = PlaneCurve::new(d, f);
            if c.dot(b0) == with_b0 {
                out.push(c);
            }
        }
    }
    out
}

/// p.no3lirr: with d_0 = 9 the budget leaves Σ d_i = 3, but E'_1 and E'_2
/// each need degree 3.
pub fn prop_no3lirr() -> Result<Elimination, CremonaError> {
    let d0 = 9;
    let left = degree_budget(7)? - 2 * d0;
    let b0 = PlaneCurve::new(9, vec![3, 3, 3, 3, 3, 3, 3, 4]);
    let mut trace = vec![format!("Bbar_0 = (9; 3^7, 4), sum d_i = 21 - 2*9 = {left}")];
    let mut min_deg = Vec::new();
    // (E'Z'', E'Z''') with 2x + y = 4; B_0Z'' = 1, B_0Z''' = 2
    for (x, y) in [(2, 0), (1, 2), (0, 4)] {
        let sq = -3 + x * x + y * y;
        let mk = 3 - x;
        if sq > mk * mk {
            trace.push(format!("(E'Z'', E'Z''') = ({x},{y}): E'^2 = {sq} > {} by the index theorem", mk * mk));
            continue;
        }
        let b = x + 2 * y;
        let cs = plane_classes(sq, mk, &b0, b, 12);
        let degs: BTreeSet<i64> = cs.iter().map(|c| c.degree).collect();
        trace.push(format!("(E'Z'', E'Z''') = ({x},{y}): E'^2 = {sq}, -K.E' = {mk}, E'.B_0 = {b}, plane degrees {degs:?}"));
        if let Some(d) = degs.iter().next() {
            min_deg.push(*d);
        }
    }
    let need = 2 * min_deg.iter().min().copied().unwrap_or(0);
    trace.push(format!("E'_1, E'_2 not contracted: d_1 + d_2 >= {need} > {left}"));
    Ok(Elimination::new("p.no3lirr", "3l case I", inst(&[("d0", d0)]), need, left, Relation::AtMost, trace))
}

/// p.3lred: B_0Z_1 = B_0Z_2 = 1, B_0Z_3 = 2.
pub fn prop_3lred() -> Elimination {
    let bz = [1, 1, 2];
    let sum: i64 = bz.iter().sum();
    // 0 = B_0N_4 forces 2B_0Z'' + B_0Z''' = 0
    let rhs = B0_N + 4 * B0_K - 4 * sum;
    let (x, y) = (0, 0);
    assert_eq!(2 * x + y, rhs);
    let sq = B0_SQ + bz.iter().map(|b| b * b).sum::<i64>() + x * x + y * y;
    let bn3 = B0_N + 3 * B0_K - 3 * sum - x;
    Elimination::new(
        "p.3lred",
        "3l case II",
        inst(&[("B0Z3", 2)]),
        sq,
        -1,
        Relation::AtMost,
        vec![
            format!("2B_0Z'' + B_0Z''' = {rhs}, so B_0Z'' = B_0Z''' = 0"),
            format!("Bbar_0^2 = -6 + 1 + 1 + 4 = {sq}, Bbar_0.Nbar_3 = {bn3}"),
            "Nbar_3^2 = 1 > 0: a nonzero class orthogonal to it has negative square".into(),
        ],
    )
}

/// Which checks a table must satisfy.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableSpec {
    /// Weighted column sums of 2B_0 + E'.
    pub totals: Vec<i64>,
    pub budget: i64,
    pub checks: Vec<IntersectionCheck>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntersectionCheck {
    pub a: String,
    pub b: String,
    pub value: i64,
    pub at_least: bool,
}

fn eq(a: &str, b: &str, v: i64) -> IntersectionCheck {
    IntersectionCheck { a: a.into(), b: b.into(), value: v, at_least: false }
}

const E_ROWS: [&str; 5] = ["E'1", "E'2", "E'3", "E'4", "E'5"];

/// Checks on W: rows of a contracted E'_i are all zero and are skipped.
pub fn w8_spec(t: &ConfigTable) -> TableSpec {
    let live = |n: &str| t.row(n).map(|r| r.degree != 0 || r.mults.iter().any(|m| *m != 0)).unwrap_or(false);
    let mut checks = vec![eq("B0", "B0", 2), eq("B0", "K", 2)];
    for (i, e) in E_ROWS.iter().enumerate() {
        if !live(e) {
            continue;
        }
        let small = i < 3;
        checks.push(eq(e, e, if small { -1 } else { -2 }));
        checks.push(eq(e, "B0", if small { 3 } else { 1 }));
        checks.push(eq(e, "K", if small { 1 } else { 0 }));
        checks.push(eq(e, "m78", if small { 0 } else { 1 }));
        for f in &E_ROWS[i + 1..] {
            if !live(f) {
                continue;
            }
            let j = E_ROWS.iter().position(|x| x == f).unwrap_or(0);
            checks.push(if i >= 3 || j >= 3 {
                eq(e, f, 0)
            } else {
                IntersectionCheck { a: e.to_string(), b: f.to_string(), value: 1, at_least: true }
            });
        }
    }
    TableSpec { totals: vec![6; 8], budget: 18, checks }
}

/// Checks on Y: disjoint smooth rational branch curves.
pub fn y14_spec(t: &ConfigTable) -> TableSpec {
    let mut names = vec!["B0".to_string()];
    names.extend(E_ROWS.iter().map(|s| s.to_string()));
    for extra in ["F'", "H'"] {
        if t.row(extra).is_ok() {
            names.push(extra.into());
        }
    }
    let mut checks = Vec::new();
    for (i, a) in names.iter().enumerate() {
        let b0 = a == "B0";
        checks.push(eq(a, a, if b0 { -6 } else { -3 }));
        checks.push(eq(a, "K", if b0 { -4 } else { -1 }));
        for b in &names[i + 1..] {
            checks.push(eq(a, b, 0));
        }
    }
    let mut totals = vec![6; 8];
    totals.extend([5, 4, 4, 3, 3, 0]);
    TableSpec { totals, budget: 18, checks }
}

pub fn spec_for(t: &ConfigTable) -> TableSpec {
    if t.points.len() == 8 {
        w8_spec(t)
    } else {
        y14_spec(t)
    }
}

/// Returns the list of violated checks; empty means the table passes.
pub fn verify_config_table(t: &ConfigTable, spec: &TableSpec) -> Vec<String> {
    let mut bad = Vec::new();
    let weight = |name: &str| match name {
        "B0" => 2,
        n if E_ROWS.contains(&n) => 1,
        _ => 0,
    };
    for (j, want) in spec.totals.iter().enumerate() {
        let got: i64 = t.rows.iter().map(|r| weight(&r.name) * r.mults[j]).sum();
        if got != *want {
            bad.push(format!("2B0+E' at {}: {got} != {want}", t.points[j]));
        }
    }
    let deg: i64 = t.rows.iter().map(|r| weight(&r.name) * r.degree).sum();
    if deg != spec.budget {
        bad.push(format!("2d_0 + sum d_i = {deg} != {}", spec.budget));
    }
    for c in &spec.checks {
        let Ok(a) = t.row(&c.a) else {
            bad.push(format!("missing row {}", c.a));
            continue;
        };
        let a = a.curve();
        let got = match c.b.as_str() {
            "K" => a.anticanonical_degree(),
            "m78" => a.mults[6] + a.mults[7] - a.degree,
            b => match t.row(b) {
                Ok(r) => a.dot(&r.curve()),
                Err(_) => {
                    bad.push(format!("missing row {b}"));
                    continue;
                }
            },
        };
        let ok = if c.at_least { got >= c.value } else { got == c.value };
        if !ok {
            bad.push(format!("{}.{} = {got}, expected {}{}", c.a, c.b, if c.at_least { ">= " } else { "" }, c.value));
        }
    }
    bad
}

/// Moves every entry by ±1 and counts how many mutants some check catches.
pub fn perturbation_sweep(t: &ConfigTable) -> (usize, usize) {
    let spec = spec_for(t);
    let (mut total, mut caught) = (0, 0);
    for r in 0..t.rows.len() {
        for c in 0..=t.points.len() {
            for delta in [-1, 1] {
                let mut m = t.clone();
                if c == t.points.len() {
                    m.rows[r].degree += delta;
                } else {
                    m.rows[r].mults[c] += delta;
                }
                total += 1;
                if !verify_config_table(&m, &spec).is_empty() {
                    caught += 1;
                }
            }
        }
    }
    (total, caught)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SixtupleResult {
    pub kept: Vec<[i64; 6]>,
    pub excluded: Vec<([i64; 6], String)>,
}

/// (d_0, d_1..d_5) with d_0 = 8, Σ d_i = 18 − 16 = 2, up to reordering
/// inside {1,2,3} and {4,5}.
pub fn sixtuple_enumerate() -> Result<SixtupleResult, CremonaError> {
    let d0 = 8;
    let left = degree_budget(6)? - 2 * d0;
    let mut kept = Vec::new();
    let mut excluded = Vec::new();
    for d in product(&(0..=left).collect::<Vec<_>>(), 5) {
        if d.iter().sum::<i64>() != left || d[0] < d[1] || d[1] < d[2] || d[3] < d[4] {
            continue;
        }
        let t = [d0, d[0], d[1], d[2], d[3], d[4]];
        // i = 4, 5: d_i + 1 = m_7 + m_8 ≤ 2; i = 1..3: m_7 + m_8 = d_i ≤ 2
        if let Some(i) = (3..5).find(|&i| d[i] + 1 > 2) {
            excluded.push((t, format!("d_{} + 1 = m_7 + m_8 <= 2 fails", i + 1)));
            continue;
        }
        if d[3] == 1 && d[4] == 1 {
            let l = PlaneCurve::new(1, vec![0, 0, 0, 0, 0, 0, 1, 1]);
            excluded.push((t, format!("E'_4, E'_5 both lines through P7, P8: E'_4.E'_5 = {} != 0", l.dot(&l))));
            continue;
        }
        kept.push(t);
    }
    kept.sort_by(|a, b| b.cmp(a));
    Ok(SixtupleResult { kept, excluded })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ImageKind {
    Contracted,
    Line,
    Conic,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExceptionalSolutions {
    pub curves: Vec<PlaneCurve>,
    pub kinds: Vec<(ImageKind, ImageKind)>,
    pub rejected: Vec<(ImageKind, ImageKind, String)>,
}

fn kind(c: &PlaneCurve) -> ImageKind {
    match c.degree {
        0 => ImageKind::Contracted,
        1 => ImageKind::Line,
        _ => ImageKind::Conic,
    }
}

/// Plane images of F' and H' on the base 14-point table: (−3)-curves
/// through P_14, orthogonal to B_0 and every E'_i, missing P_9..P_13.
pub fn exceptional_curve_solutions() -> Result<ExceptionalSolutions, CremonaError> {
    let base = table("y14_base")?;
    let rows = base.curves();
    let mut curves = Vec::new();
    for d in 0..=3i64 {
        let lo = if d == 0 { -1 } else { 0 };
        for m in product(&(lo..=2).collect::<Vec<_>>(), 8) {
            let mut mults = m.clone();
            mults.extend([0, 0, 0, 0, 0, 1]);
            let c = PlaneCurve::new(d, mults);
            if c.self_intersection() == -3 && c.anticanonical_degree() == -1 && rows.iter().all(|r| r.dot(&c) == 0) {
                curves.push(c);
            }
        }
    }
    let mut kinds = BTreeSet::new();
    let mut rejected = BTreeMap::new();
    for (i, f) in curves.iter().enumerate() {
        for h in &curves[i..] {
            let mut k = [kind(f), kind(h)];
            k.sort();
            let p = f.dot(h);
            if p == 0 {
                kinds.insert((k[0], k[1]));
            } else {
                rejected.entry((k[0], k[1])).or_insert_with(|| format!("F'.H' = {p} != 0"));
            }
        }
    }
    let rejected: Vec<_> =
        rejected.into_iter().filter(|(k, _)| !kinds.contains(k)).map(|((a, b), why)| (a, b, why)).collect();
    Ok(ExceptionalSolutions { curves, kinds: kinds.into_iter().collect(), rejected })
}

/// Exponents of ω along branch components; B_0 is fixed at 1 and
/// exponent(H') = 2·exponent(F').
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct BranchAssignment {
    pub exponent: BTreeMap<String, i64>,
}

impl BranchAssignment {
    pub fn is_valid(&self) -> bool {
        let get = |k: &str| self.exponent.get(k).copied();
        self.exponent.values().all(|v| *v == 1 || *v == 2)
            && match (get("F'"), get("H'")) {
                (Some(f), Some(h)) => h == (2 * f) % 3,
                (None, None) => true,
                _ => false,
            }
    }

    pub fn all(rows: &[String]) -> Vec<BranchAssignment> {
        let free: Vec<&String> = rows.iter().filter(|r| *r != "B0" && *r != "H'").collect();
        product(&[1i64, 2], free.len())
            .into_iter()
            .map(|v| {
                let mut exponent: BTreeMap<String, i64> = free.iter().map(|s| s.to_string()).zip(v).collect();
                exponent.insert("B0".into(), 1);
                if let Some(f) = exponent.get("F'").copied() {
                    if rows.iter().any(|r| r == "H'") {
                        exponent.insert("H'".into(), (2 * f) % 3);
                    }
                }
                BranchAssignment { exponent }
            })
            .collect()
    }
}

/// c + Σ coeff·ν_row ≡ 0 mod 3.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Congruence {
    pub label: String,
    pub constant: i64,
    pub terms: Vec<(String, i64)>,
}

impl Congruence {
    pub fn holds(&self, a: &BranchAssignment) -> bool {
        let s: i64 = self.constant + self.terms.iter().map(|(r, c)| c * a.exponent.get(r).copied().unwrap_or(0)).sum::<i64>();
        s.rem_euclid(3) == 0
    }
}

impl std::fmt::Display for Congruence {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}: {}", self.label, self.constant)?;
        for (r, c) in &self.terms {
            write!(f, " {} {}nu({r})", if *c < 0 { "-" } else { "+" }, if c.abs() == 1 { String::new() } else { c.abs().to_string() })?;
        }
        write!(f, " = 0 mod 3")
    }
}

/// Degree congruence plus one congruence per planar point, with the
/// class coefficients as signs (B_0 has exponent 1).
pub fn branch_congruences(t: &ConfigTable, planar: &[usize]) -> Vec<Congruence> {
    let build = |label: String, f: &dyn Fn(&super::TableRow) -> i64| {
        let mut constant = 0;
        let mut terms = Vec::new();
        for r in &t.rows {
            let v = f(r);
            if v == 0 {
                continue;
            }
            if r.name == "B0" {
                constant += v;
            } else {
                terms.push((r.name.clone(), v));
            }
        }
        Congruence { label, constant, terms }
    };
    let mut out = vec![build("degree".into(), &|r| r.degree)];
    for &p in planar {
        out.push(build(format!("planar {}", t.points[p]), &|r| r.mults[p]));
    }
    out
}

pub fn solve_congruences(rows: &[String], cs: &[Congruence]) -> Vec<BranchAssignment> {
    BranchAssignment::all(rows).into_iter().filter(|a| a.is_valid() && cs.iter().all(|c| c.holds(a))).collect()
}

/// Every reason `q` cannot be proximate to `p` in this table; empty if it can.
pub fn proximity_obstructions(t: &ConfigTable, cluster: &PointCluster, q: usize, p: usize) -> Vec<String> {
    let mut c = cluster.clone();
    c.proximity.insert((q, p));
    c.planar.remove(&q);
    if let Err(e) = c.check() {
        return vec![e];
    }
    let mut out = Vec::new();
    for r in &t.rows {
        for x in c.proximity_violations(&r.curve()) {
            out.push(format!("{}: {x}", r.name));
        }
    }
    // E_p − Σ E_q must subtract exactly the points proximate to p
    let prox: BTreeSet<usize> = c.proximate_to(p).into_iter().collect();
    for r in t.rows.iter().filter(|r| r.degree == 0 && r.mults[p] == -1) {
        let minus: BTreeSet<usize> = (0..r.mults.len()).filter(|&i| r.mults[i] > 0).collect();
        if minus != prox {
            out.push(format!("{} = E_{} - ... omits {}", r.name, t.points[p], t.points[q]));
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AuditBranch {
    pub planar: Vec<String>,
    /// (point, parent) for audited points taken to be infinitely near.
    pub near: Vec<(String, String)>,
    pub congruences: Vec<String>,
    pub solutions: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Audit {
    pub table: String,
    pub branches: Vec<AuditBranch>,
    pub obstructions: Vec<String>,
    pub elimination: Elimination,
}

/// For each point in `points`, either it is planar and its congruence is
/// imposed, or it is proximate to another point, which must survive every
/// numerical proximity check. Contradiction iff no branch has a solution.
pub fn eigenvalue_audit(id: &str, t: &ConfigTable, points: &[&str]) -> Result<Audit, CremonaError> {
    let cluster = t.cluster()?;
    let idx: Vec<usize> = points.iter().map(|p| cluster.index(p)).collect::<Result<_, _>>()?;
    let rows: Vec<String> = t.rows.iter().map(|r| r.name.clone()).collect();
    let mut obstructions = Vec::new();
    let mut choices: Vec<Vec<Option<usize>>> = Vec::new();
    for &q in &idx {
        let mut opts = vec![None];
        for p in (0..t.points.len()).filter(|&p| p != q) {
            let why = proximity_obstructions(t, &cluster, q, p);
            if why.is_empty() {
                opts.push(Some(p));
            } else {
                obstructions.push(format!("{} near {}: {}", t.points[q], t.points[p], why.join("; ")));
            }
        }
        choices.push(opts);
    }
    let mut combos: Vec<Vec<Option<usize>>> = vec![vec![]];
    for opts in &choices {
        combos = combos.into_iter().flat_map(|c| opts.iter().map(move |o| [c.clone(), vec![*o]].concat())).collect();
    }
    let mut branches = Vec::new();
    let mut alive = 0;
    let mut trace = Vec::new();
    for combo in combos {
        let planar: Vec<usize> = idx.iter().zip(&combo).filter(|(_, o)| o.is_none()).map(|(q, _)| *q).collect();
        let cs = branch_congruences(t, &planar);
        let sols = solve_congruences(&rows, &cs);
        let b = AuditBranch {
            planar: planar.iter().map(|&p| t.points[p].clone()).collect(),
            near: idx
                .iter()
                .zip(&combo)
                .filter_map(|(q, o)| o.map(|p| (t.points[*q].clone(), t.points[p].clone())))
                .collect(),
            congruences: cs.iter().map(|c| c.to_string()).collect(),
            solutions: sols.len(),
        };
        trace.push(format!("planar {:?}, near {:?}: {} assignments", b.planar, b.near, b.solutions));
        trace.extend(b.congruences.iter().map(|c| format!("  {c}")));
        if !sols.is_empty() {
            alive += 1;
        }
        branches.push(b);
    }
    trace.extend(obstructions.iter().cloned());
    let elimination = Elimination::new(id, t.name.clone(), BTreeMap::new(), 1, alive, Relation::AtMost, trace);
    Ok(Audit { table: t.name.clone(), branches, obstructions, elimination })
}

/// The congruences exactly as printed in the three propositions, with every
/// multiplicity counted positively.
pub fn printed_congruences(id: &str) -> Option<(Vec<String>, Vec<Congruence>)> {
    let c = |label: &str, constant: i64, terms: &[(&str, i64)]| Congruence {
        label: label.into(),
        constant,
        terms: terms.iter().map(|(r, k)| (r.to_string(), *k)).collect(),
    };
    let rows: Vec<String> = ["B0", "E'1", "E'2", "E'3", "E'4", "E'5", "F'", "H'"].iter().map(|s| s.to_string()).collect();
    let cs = match id {
        "p.3l-1" => vec![
            c("degree", 8, &[("E'1", 2), ("F'", 1), ("H'", 1)]),
            c("planar P3", 3, &[("E'1", 1), ("E'5", 1), ("H'", 1)]),
            c("planar P2", 3, &[("E'1", 1), ("E'4", 1), ("F'", 1)]),
        ],
        "p.3l-12" | "p.3l-13" => vec![c("planar P6", 3, &[("H'", 1)])],
        _ => return None,
    };
    Some((rows, cs))
}

pub fn printed_audit(id: &str) -> Option<Elimination> {
    let (rows, cs) = printed_congruences(id)?;
    let sols = solve_congruences(&rows, &cs);
    let mut trace: Vec<String> = cs.iter().map(|c| c.to_string()).collect();
    trace.push(format!("{} assignments with exponents in {{1,2}}", sols.len()));
    Some(Elimination::new(id, "printed congruences", BTreeMap::new(), 1, sols.len() as i64, Relation::AtMost, trace))
}

/// (table, points to audit) for each eigenvalue proposition.
pub fn audit_targets() -> [(&'static str, &'static str, &'static [&'static str]); 3] {
    [("p.3l-1", "y14_lines", &["P2", "P3"]), ("p.3l-12", "y14_p3l12", &["P6"]), ("p.3l-13", "y14_p3l13", &["P6"])]
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Equivalence {
    pub name: String,
    pub from: String,
    pub base: [String; 3],
    pub to: String,
    pub holds: bool,
    pub detail: String,
}

/// The quadratic moves linking the printed tables.
pub fn table_equivalences() -> Result<Vec<Equivalence>, CremonaError> {
    // P2 ↔ P3 carries P7 ↔ P8, P12 ↔ P13 and E'4 ↔ E'5 with it
    let mirror: &[(usize, usize)] = &[(1, 2), (6, 7), (11, 12)];
    let cases: Vec<(&str, &str, [&str; 3], &str, Vec<Relabel>)> = vec![
        ("(8,1,1,0,0,0) -> (8,1,0,0,1,0)", "w8_811000", ["P1", "P2", "P8"], "w8_810010", vec![]),
        (
            "(8,1,1,0,0,0) -> (8,2,0,0,0,0)",
            "w8_811000",
            ["P2", "P3", "P8"],
            "w8_820000",
            Relabel::generate(8, &[], &[&[0, 1, 2]], &[]),
        ),
        (
            "two lines -> line + contracted",
            "y14_lines",
            ["P3", "P4", "P8"],
            "y14_line_contracted",
            Relabel::generate(14, &[("F'", "H'"), ("E'4", "E'5")], &[&[3, 4, 5]], &[mirror]),
        ),
        ("conic + contracted -> p.3l-12 table", "y14_conic_contracted", ["P1", "P2", "P3"], "y14_p3l12", vec![]),
        ("both contracted -> p.3l-13 table", "y14_both_contracted", ["P1", "P2", "P3"], "y14_p3l13", vec![]),
    ];
    let mut out = Vec::new();
    for (name, from, base, to, rl) in cases {
        let src = table(from)?;
        let target = table(to)?;
        let (holds, detail) = match src.transform(base) {
            Ok(moved) => {
                let degs: Vec<i64> = moved.rows.iter().map(|r| r.degree).collect();
                (moved.equivalent(&target, &rl), format!("degrees after the move {degs:?}"))
            }
            Err(e) => (false, e.to_string()),
        };
        out.push(Equivalence {
            name: name.into(),
            from: from.into(),
            base: base.map(String::from),
            to: to.into(),
            holds,
            detail,
        });
    }
    Ok(out)
}

/// The n = 3ℓ − 1, ℓ = 1 ladder model on the 14-point blow-up of `t`, with
/// 2B_0 + E' taken from the table rows instead of the ladder.
pub fn table_ladder_model(t: &ConfigTable) -> Result<LadderModel, CremonaError> {
    let mut m = LadderModel::standard(LadderBranch::ThreeEllMinus1, 1).map_err(|e| CremonaError::Parse(e.to_string()))?;
    let expected = m.lattice.rank() - 1;
    if t.points.len() != expected {
        return Err(CremonaError::Arity { expected, got: t.points.len() });
    }
    let class = |r: &super::TableRow| DivisorClass::plane_curve(&m.lattice, r.degree, &r.mults);
    let mut bd = 2 * class(t.row("B0")?);
    for r in t.rows.iter().filter(|r| r.name.starts_with("E'")) {
        bd = bd + class(r);
    }
    m.branch_divisor = Some(bd);
    Ok(m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::adjoint::verify_ladder_identity;

    #[test]
    fn tables_carry_the_ladder_branch_divisor() {
        for (name, _) in TABLES.iter().filter(|(n, _)| n.starts_with("y14")) {
            let m = table_ladder_model(&table(name).unwrap()).unwrap();
            let rep = verify_ladder_identity(LadderBranch::ThreeEllMinus1, 1, &m).unwrap();
            assert!(rep.holds(), "{name}: {:?}", rep.failures());
        }
        assert!(table_ladder_model(&table("w8_811000").unwrap()).is_err());
    }

    #[test]
    fn b0_tables() {
        let t = b0_table_check(DpBranch::ThreeEll).unwrap();
        assert!(t.unprinted.is_empty() && t.spurious.is_empty());
        let idx: Vec<IndexCheck> = t.derived.iter().map(|r| r.index).collect();
        assert_eq!(idx, vec![IndexCheck::Equality, IndexCheck::Strict, IndexCheck::Excluded]);
        assert_eq!(t.derived[1].b0_square, 2);
        assert_eq!(t.derived[2].b0_square, 13);

        let t = b0_table_check(DpBranch::ThreeEllMinus1).unwrap();
        assert!(t.spurious.is_empty());
        assert_eq!(t.unprinted, vec![vec![1, 1, 2, 0, 2, 2]]);
        let by: BTreeMap<Vec<i64>, (i64, IndexCheck)> =
            t.derived.iter().map(|r| (r.values.clone(), (r.b0_square, r.index))).collect();
        assert_eq!(by[&vec![1, 1, 2, 1, 0, 1]], (1, IndexCheck::Equality));
        assert_eq!(by[&vec![1, 1, 1, 1, 2, 2]], (2, IndexCheck::Strict));
        assert_eq!(by[&vec![1, 1, 2, 0, 2, 2]], (4, IndexCheck::Equality));
        for v in [vec![1, 1, 3, 0, 0, 1], vec![1, 1, 1, 0, 4, 3], vec![1, 1, 0, 0, 6, 4]] {
            assert_eq!(by[&v].1, IndexCheck::Excluded);
        }
    }

    #[test]
    fn e_prime_lemmas() {
        for e in [lemma_noa(), lemma_nob(), row_202()] {
            assert!(e.is_contradiction(), "{:?}", e.trace);
        }
        // without the total, the unprinted row leaves {1,1,-1}
        let loose = e_count("x", "x", 3, 3, 2, |x| 2 - x, 1, None);
        assert!(!loose.is_contradiction());
        assert!(loose.trace.iter().any(|l| l.contains("[-1, 1, 1]")));
    }

    #[test]
    fn no3lirr() {
        let e = prop_no3lirr().unwrap();
        assert!(e.is_contradiction());
        assert_eq!((e.lhs, e.rhs), (6, 3));
        let b0 = PlaneCurve::new(9, vec![3, 3, 3, 3, 3, 3, 3, 4]);
        assert_eq!(plane_classes(1, 1, &b0, 2, 12), vec![PlaneCurve::new(3, vec![1; 8])]);
        // degree 3 with s_1 = 7 is the lowest; quartics and up also fit
        let c = plane_classes(2, 2, &b0, 5, 12);
        assert_eq!(c.iter().map(|c| c.degree).min(), Some(3));
        assert!(c.iter().filter(|c| c.degree == 3).all(|c| c.mult_counts() == [(1, 7)].into_iter().collect()));
        assert_eq!(c.iter().map(|c| c.degree).max(), Some(6));
        assert!(prop_3lred().is_contradiction());
    }

    #[test]
    fn printed_tables_pass() {
        for (name, _) in TABLES {
            let t = table(name).unwrap();
            let v = verify_config_table(&t, &spec_for(&t));
            assert!(v.is_empty(), "{name}: {v:?}");
            assert!(t.cluster().unwrap().check().is_ok(), "{name}");
            let (n, caught) = perturbation_sweep(&t);
            assert_eq!(n, caught, "{name}");
        }
    }

    #[test]
    fn sixtuples() {
        let r = sixtuple_enumerate().unwrap();
        assert_eq!(r.kept, vec![[8, 2, 0, 0, 0, 0], [8, 1, 1, 0, 0, 0], [8, 1, 0, 0, 1, 0]]);
        assert!(r.excluded.iter().any(|(t, _)| *t == [8, 0, 0, 0, 1, 1]));
    }

    #[test]
    fn f_h_images() {
        let s = exceptional_curve_solutions().unwrap();
        for c in &s.curves {
            let m = &c.mults;
            assert_eq!((m[0], m[13]), (0, 1));
            assert_eq!(m[1] + m[2], c.degree);
            assert_eq!((m[6], m[7]), (m[1], m[2]));
            assert_eq!(m[3] + m[4] + m[5], c.degree);
            let mut t = [m[3], m[4], m[5]];
            t.sort();
            match c.degree {
                2 => assert_eq!((m[1], m[2], t), (1, 1, [0, 1, 1])),
                1 => assert_eq!(t, [0, 0, 1]),
                _ => assert_eq!(t, [-1, 0, 1]),
            }
        }
        assert_eq!(s.curves.iter().filter(|c| c.degree == 2).count(), 3);
        assert_eq!(s.curves.iter().filter(|c| c.degree == 1).count(), 6);
        assert_eq!(s.curves.iter().filter(|c| c.degree == 0).count(), 6);
        use ImageKind::*;
        assert_eq!(s.kinds, vec![(Contracted, Contracted), (Contracted, Line), (Contracted, Conic), (Line, Line)]);
        let rej: Vec<_> = s.rejected.iter().map(|(a, b, _)| (*a, *b)).collect();
        assert_eq!(rej, vec![(Line, Conic), (Conic, Conic)]);
        for name in ["y14_lines", "y14_conic_contracted", "y14_line_contracted", "y14_both_contracted"] {
            let t = table(name).unwrap();
            for r in ["F'", "H'"] {
                assert!(s.curves.contains(&t.row(r).unwrap().curve()), "{name} {r}");
            }
        }
    }

    #[test]
    fn audits() {
        for (id, name, pts) in audit_targets() {
            let a = eigenvalue_audit(id, &table(name).unwrap(), pts).unwrap();
            assert!(a.elimination.is_contradiction(), "{id}: {:?}", a.elimination.trace);
            assert!(printed_audit(id).unwrap().is_contradiction(), "{id}");
        }
        // planarity of P2, P3 and P6 is forced, so one branch each
        let a = eigenvalue_audit("p.3l-1", &table("y14_lines").unwrap(), &["P2", "P3"]).unwrap();
        assert_eq!(a.branches.len(), 1);
        let a = eigenvalue_audit("p.3l-12", &table("y14_p3l12").unwrap(), &["P6"]).unwrap();
        assert_eq!(a.branches.len(), 1);
        assert!(a.obstructions.iter().any(|o| o.contains("near P5") && o.contains("omits P6")));
    }

    #[test]
    fn audit_finds_solutions_when_they_exist() {
        // a planar point of the base table carries no contradiction
        let a = eigenvalue_audit("x", &table("y14_base").unwrap(), &["P4"]).unwrap();
        assert!(!a.elimination.is_contradiction());
        let sols = solve_congruences(&["B0".into(), "F'".into(), "H'".into()], &[]);
        assert_eq!(sols.len(), 2);
        assert!(sols.iter().all(|s| s.is_valid()));
    }

    #[test]
    fn equivalences() {
        for e in table_equivalences().unwrap() {
            assert!(e.holds, "{}: {}", e.name, e.detail);
        }
    }
}
