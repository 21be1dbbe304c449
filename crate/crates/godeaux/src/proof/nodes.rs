use std::collections::{BTreeMap, BTreeSet};
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use super::fixtures::Fixtures;
use crate::adjoint::{
    classify_ladder, format_coeffs, n_range, verify_ladder_identity, z_lower_bound, z_lower_bound_int, AdjointOutcome,
    LadderBranch, LadderModel,
};
use crate::cover::{
    eigenvalue_split, enumerate_main_cases, fixed_point_budget, h0_pair, kx2, kx2_from_fixed, quotient_k2,
    quotient_k2_routes, GodeauxContext, RamificationData,
};
use crate::cremona::delpezzo::{
    audit_targets, b0_table_check, eigenvalue_audit, exceptional_curve_solutions, lemma_noa, lemma_nob, perturbation_sweep,
    printed_audit, prop_3lred, prop_no3lirr, row_202, sixtuple_enumerate, spec_for, table, table_equivalences,
    table_ladder_model, verify_config_table, DpBranch, ImageKind, TABLES,
};
use crate::cremona::homaloidal::{homaloidal_eliminate, HomaloidalBranch};
use crate::cremona::multiplicity::{cremona_orbit_connect, solve_multiplicity_system, MultSolution};
use crate::cremona::ruled::{eliminate_a2, ruled_constraints, RuledBranch, RuledModel};
use crate::fibration::{
    case_i_domain, fiber_catalog, node_bound, run_case_i, run_case_ii, ruled_no1, ruled_no1rul, CaseIiiRange, CaseRun,
    Elimination, Relation,
};
use crate::pencil::{chain_dg, chain_drop, enumerate_pencil_cases_with, q_atoms, subsystem_split, PencilOptions};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum NodeKind {
    FormulaCheck,
    Enumeration,
    Elimination,
    Axiom,
}

/// What a node's own computation found; the scheduler turns it into a
/// status once the dependencies are known.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub ok: bool,
    pub summary: String,
    pub trace: Vec<String>,
}

impl Outcome {
    fn new(ok: bool, summary: impl Into<String>, trace: Vec<String>) -> Self {
        Outcome { ok, summary: summary.into(), trace }
    }
}

type Check = fn(&Ctx) -> Result<Outcome, String>;

#[derive(Clone)]
pub struct NodeSpec {
    pub id: &'static str,
    pub kind: NodeKind,
    pub title: &'static str,
    pub depends_on: &'static [&'static str],
    /// Axioms only.
    pub citation: Option<&'static str>,
    pub check: Check,
}

impl std::fmt::Debug for NodeSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("NodeSpec").field("id", &self.id).field("kind", &self.kind).field("depends_on", &self.depends_on).finish()
    }
}

type CaseIii = (Vec<CaseIiiRange>, Vec<Elimination>, Vec<(String, i64)>);

/// Shared inputs of a run. The case runs are computed once and shared by
/// the nodes that read them.
pub struct Ctx {
    pub fixtures: Fixtures,
    case_i: OnceLock<Result<CaseRun, String>>,
    case_iii: OnceLock<Result<CaseIii, String>>,
}

impl Ctx {
    pub fn new(fixtures: Fixtures) -> Self {
        Ctx { fixtures, case_i: OnceLock::new(), case_iii: OnceLock::new() }
    }

    fn case_i(&self) -> Result<&CaseRun, String> {
        self.case_i.get_or_init(|| run_case_i().map_err(|e| e.to_string())).as_ref().map_err(Clone::clone)
    }

    fn case_iii(&self) -> Result<&CaseIii, String> {
        self.case_iii.get_or_init(|| crate::fibration::run_case_iii().map_err(|e| e.to_string())).as_ref().map_err(Clone::clone)
    }
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

// ------------------------------------------------------------- helpers

fn describe(e: &Elimination) -> String {
    let op = match e.relation {
        Relation::AtMost => "<=",
        Relation::Equal => "=",
    };
    let inst: Vec<String> = e.instance.iter().map(|(k, v)| format!("{k}={v}")).collect();
    let at = if inst.is_empty() { String::new() } else { format!(" ({})", inst.join(", ")) };
    let verdict = if e.is_contradiction() { "fails, contradiction" } else { "holds, survives" };
    let rec = if e.reconstructed { " [reconstructed]" } else { "" };
    format!("{} {}{at}: {} {op} {} {verdict}{rec}", e.prop_id, e.branch, e.lhs, e.rhs)
}

fn push_elim(trace: &mut Vec<String>, e: &Elimination) {
    trace.push(describe(e));
    trace.extend(e.trace.iter().map(|t| format!("    {t}")));
}

/// Passes iff there is at least one elimination and every one of them is a
/// contradiction.
fn all_contradict(es: &[&Elimination]) -> Outcome {
    let mut trace = Vec::new();
    for e in es {
        push_elim(&mut trace, e);
    }
    let dead = es.iter().filter(|e| e.is_contradiction()).count();
    let ok = !es.is_empty() && dead == es.len();
    let summary = match es {
        [e] => format!("{} {} {} {}", e.lhs, if e.relation == Relation::AtMost { "<=" } else { "=" }, e.rhs, if ok { "fails" } else { "holds" }),
        _ => format!("{dead} of {} instances contradicted", es.len()),
    };
    Outcome::new(ok, summary, trace)
}

fn fixture(ctx: &Ctx, name: &str, computed: &impl Serialize, trace: &mut Vec<String>) -> Result<bool, String> {
    match ctx.fixtures.compare(name, computed).map_err(err)? {
        Ok(()) => {
            trace.push(format!("matches fixture {name}"));
            Ok(true)
        }
        Err(d) => {
            trace.push(format!("differs from fixture {d}"));
            Ok(false)
        }
    }
}

fn axiom(_: &Ctx) -> Result<Outcome, String> {
    Ok(Outcome::new(true, "assumed", vec![]))
}

/// Aggregate nodes: their status comes from their dependencies.
fn closed_by(_: &Ctx) -> Result<Outcome, String> {
    Ok(Outcome::new(true, "closed when every dependency closes", vec![]))
}

// ------------------------------------------------------- cover numerics

fn sample_ramifications() -> Result<Vec<(String, RamificationData)>, String> {
    let mut out = Vec::new();
    for p in case_i_domain() {
        out.push((format!("i (Gamma^2={}, ell={})", p.gamma_sq, p.ell), RamificationData::case_i(p.ell, p.gamma_sq).map_err(err)?));
    }
    for ell in 2..=4 {
        out.push((format!("ii (ell={ell})"), RamificationData::case_ii(ell).map_err(err)?));
    }
    for ell in 0..=3 {
        out.push((format!("iii (ell={ell})"), RamificationData::case_iii(ell).map_err(err)?));
    }
    Ok(out)
}

fn e_fixed(_: &Ctx) -> Result<Outcome, String> {
    let mut trace = Vec::new();
    let mut ok = true;
    for (name, r) in sample_ramifications()? {
        let b = fixed_point_budget(&r).map_err(err)?;
        let lhs = r.h1 + 2 * r.h2;
        ok &= lhs == b;
        trace.push(format!(
            "case {name}: h1 + 2h2 = {} + 2*{} = {lhs}; 6 + (3*R0K - R0^2)/2 = 6 + (3*{} - ({}))/2 = {b}",
            r.h1, r.h2, r.r0k, r.r0sq
        ));
    }
    Ok(Outcome::new(ok, format!("{} substitutions", trace.len()), trace))
}

fn e_ky(_: &Ctx) -> Result<Outcome, String> {
    let g = GodeauxContext::new();
    let mut trace = Vec::new();
    let mut ok = true;
    for (name, r) in sample_ramifications()? {
        let (a, b) = quotient_k2_routes(&g, &r);
        ok &= a == b && a.is_integer();
        trace.push(format!("case {name}: K_Y^2 = {a} (via h1 + 3h2) = {b} (via fixed-point budget)"));
    }
    Ok(Outcome::new(ok, "both routes agree and are integral", trace))
}

fn e_kx(_: &Ctx) -> Result<Outcome, String> {
    let g = GodeauxContext::new();
    let mut trace = Vec::new();
    let mut ok = true;
    for (name, r) in sample_ramifications()? {
        let ky2 = quotient_k2(&g, &r).map_err(err)?;
        let (a, b) = (kx2(&r, ky2), kx2_from_fixed(&g, &r));
        ok &= a == b;
        trace.push(format!("case {name}: 3K_Y^2 - 4R0^2 + 4R0K = {a}, K_S^2 - (h1 + 3h2) = {b}"));
    }
    Ok(Outcome::new(ok, "K_X^2 agrees on both sides", trace))
}

fn l_chili(_: &Ctx) -> Result<Outcome, String> {
    let mut trace = Vec::new();
    let mut accepted = Vec::new();
    for r0k in 0..=2 {
        for h2 in 0..=20 {
            match h0_pair(r0k, h2) {
                Ok((a, b)) => {
                    accepted.push((r0k, h2));
                    trace.push(format!("R0K={r0k}, h2={h2}: h0(N) = {a}, h0(2K_Y+B) = {b}"));
                }
                Err(e) if h2 == 0 => trace.push(format!("R0K={r0k}: {e}")),
                Err(_) => {}
            }
        }
    }
    let ok = !accepted.is_empty() && accepted.iter().all(|(r, _)| *r <= 1);
    Ok(Outcome::new(ok, format!("{} admissible (R0K, h2) pairs", accepted.len()), trace))
}

fn list(ctx: &Ctx) -> Result<Outcome, String> {
    let cases = enumerate_main_cases();
    let mut trace: Vec<String> =
        cases.iter().map(|c| format!("case {}: (R0K, h2) = ({}, {}), h0(N) = {}, h0(2K_Y+B) = {}", c.id, c.r0k, c.h2, c.h0_n, c.h0_2kyb)).collect();
    let ok = fixture(ctx, "main_cases.json", &cases, &mut trace)?;
    Ok(Outcome::new(ok, format!("{} cases", cases.len()), trace))
}

fn e_split(_: &Ctx) -> Result<Outcome, String> {
    let mut trace = Vec::new();
    for ell in 0..=3 {
        let s = eigenvalue_split(ell).map_err(err)?;
        trace.push(format!(
            "ell={ell}: h11 = {}, h12 = {} (congruent h11 values {:?}, rejected {:?})",
            s.h11,
            s.h12,
            s.congruent,
            s.rejected.iter().map(|(h, v)| format!("{h}: L1^2+L1K={v}")).collect::<Vec<_>>()
        ));
    }
    Ok(Outcome::new(true, "unique split for ell = 0..3", trace))
}

// ---------------------------------------------------------------- pencil

fn le_sub(_: &Ctx) -> Result<Outcome, String> {
    let mut trace = Vec::new();
    let mut ok = true;
    for b in subsystem_split() {
        ok &= b.ak >= 2 && b.ak + b.phik == 3;
        trace.push(format!("AK_S = {}, PhiK_S = {}: A^2 in {:?}, Phi {:?}", b.ak, b.phik, b.allowed_a2, b.phi_constraint));
    }
    Ok(Outcome::new(ok, format!("{} branches", trace.len()), trace))
}

fn l_dg(_: &Ctx) -> Result<Outcome, String> {
    let mut trace = Vec::new();
    let mut ok = true;
    for a in q_atoms() {
        let c: Vec<i64> = a.d_contribution.iter().map(|(_, m)| *m).collect();
        let (drop, dg) = (chain_drop(c[0], c[1], c[2]), chain_dg(c[0], c[1], c[2]));
        ok &= drop == a.self_int_drop && dg == a.dg;
        trace.push(format!("D = {}F+{}G+{}H: -D^2 = {drop}, DG = {dg} ({:?})", c[0], c[1], c[2], a.singularity_kind));
    }
    Ok(Outcome::new(ok, "chain atoms consistent", trace))
}

fn pencil_list(ctx: &Ctx, k: i64) -> Result<Outcome, String> {
    let (cases, counts) = enumerate_pencil_cases_with(k, &PencilOptions::default());
    let mut trace: Vec<String> = cases
        .iter()
        .map(|c| {
            let (a2, ar0, g, apk, d) = c.quintuple();
            format!("({}) A^2={a2} AR0={ar0} g={g} A'K={apk} D={d}", c.label)
        })
        .collect();
    trace.push(format!("filters: {counts:?}"));
    let json: Vec<_> = cases.iter().map(|c| c.to_json()).collect();
    let ok = fixture(ctx, &format!("pencil_list{k}.json"), &json, &mut trace)?;
    Ok(Outcome::new(ok, format!("{} cases with A'^2 = {k}", cases.len()), trace))
}

fn p_list0(ctx: &Ctx) -> Result<Outcome, String> {
    pencil_list(ctx, 0)
}
fn p_list1(ctx: &Ctx) -> Result<Outcome, String> {
    pencil_list(ctx, 1)
}
fn p_list2(ctx: &Ctx) -> Result<Outcome, String> {
    pencil_list(ctx, 2)
}
fn r_n(ctx: &Ctx) -> Result<Outcome, String> {
    pencil_list(ctx, 3)
}

// --------------------------------------------------------------- adjoint

fn p_1cycles(_: &Ctx) -> Result<Outcome, String> {
    let mut trace = Vec::new();
    let mut ok = true;
    for ell in 0..=3 {
        let r = RamificationData::case_iii(ell).map_err(err)?;
        let b = z_lower_bound(r.r0k, r.r0sq, r.h2);
        let n = z_lower_bound_int(r.r0k, r.r0sq, r.h2);
        ok &= n == (3 * ell - 4).max(0);
        trace.push(format!("ell={ell}: n >= 35R0K/6 - 3R0^2/2 - (10+2h2)/3 = {b}, so n >= {n}"));
    }
    Ok(Outcome::new(ok, "n >= 3ell - 4 in case (iii)", trace))
}

fn l_n(_: &Ctx) -> Result<Outcome, String> {
    let mut trace = Vec::new();
    let mut ok = true;
    for ell in 0..=3 {
        let r = RamificationData::case_iii(ell).map_err(err)?;
        let (lo, hi) = n_range(ell).map_err(err)?;
        let bound = z_lower_bound_int(r.r0k, r.r0sq, r.h2);
        ok &= lo == bound && hi == 3 * ell;
        trace.push(format!("ell={ell}: N_1^2 >= 0 and h0(O_N1(N)) >= 2 give {lo} <= n <= {hi}; cycle bound gives n >= {bound}"));
    }
    Ok(Outcome::new(ok, "window agrees with the cycle bound, n <= 3ell", trace))
}

fn c_n(_: &Ctx) -> Result<Outcome, String> {
    let mut trace = Vec::new();
    let mut ok = true;
    for ell in 0..=3 {
        let mut cases = vec![(3 * ell, 4usize, (0, 1, 1))];
        if ell >= 1 {
            cases.push((3 * ell - 2, 2, (5, 0, 0)));
            cases.push((3 * ell - 1, 3, (2, 1, 0)));
        }
        for (n, step, want) in cases {
            let leaves = classify_ladder(ell, n).map_err(err)?;
            let term: Vec<_> = leaves.iter().filter(|l| l.outcome == AdjointOutcome::Terminal { step }).collect();
            let got: Vec<_> = term.iter().map(|l| (l.counts.n1, l.counts.n2, l.counts.n3)).collect();
            ok &= got == vec![want];
            trace.push(format!("ell={ell}, n={n}: N_{step} = 0 forces (n', n'', n''') = {got:?}"));
        }
    }
    Ok(Outcome::new(ok, "n' = 5, (n', n'') = (2, 1), (n'', n''') = (1, 1)", trace))
}

type ExtraModels<'a> = &'a dyn Fn() -> Result<Vec<(String, LadderModel)>, String>;

fn ladder(branch: LadderBranch, extra: Option<ExtraModels>) -> Result<Outcome, String> {
    let mut trace = Vec::new();
    let mut ok = true;
    for (name, c) in branch.printed_rows() {
        trace.push(format!("{name} = {}", format_coeffs(&c)));
    }
    let (lo, hi) = branch.ell_range();
    let mut models = Vec::new();
    for ell in lo..=hi {
        models.push((ell, format!("standard model, ell={ell}"), LadderModel::standard(branch, ell).map_err(err)?));
    }
    if let Some(f) = extra {
        for (name, m) in f()? {
            models.push((1, name, m));
        }
    }
    for (ell, name, m) in models {
        let rep = verify_ladder_identity(branch, ell, &m).map_err(err)?;
        ok &= rep.holds();
        let fails: Vec<String> = rep.failures().iter().map(|c| format!("{}: want {}, got {}", c.what, c.expected, c.got)).collect();
        trace.push(format!("{name}: {} checks, {} failed {}", rep.checks.len(), fails.len(), fails.join("; ")));
    }
    Ok(Outcome::new(ok, format!("ladder {} holds exactly", branch.id()), trace))
}

fn s_3l2(_: &Ctx) -> Result<Outcome, String> {
    ladder(LadderBranch::ThreeEllMinus2, None)
}

fn s_3l1(_: &Ctx) -> Result<Outcome, String> {
    let tables = || -> Result<Vec<(String, LadderModel)>, String> {
        let mut out = Vec::new();
        for (name, _) in TABLES.iter().filter(|(n, _)| n.starts_with("y14")) {
            out.push((format!("2B0+E' from table {name}"), table_ladder_model(&table(name).map_err(err)?).map_err(err)?));
        }
        Ok(out)
    };
    ladder(LadderBranch::ThreeEllMinus1, Some(&tables))
}

fn s_3l(_: &Ctx) -> Result<Outcome, String> {
    ladder(LadderBranch::ThreeEll, None)
}

/// Which node closes a ladder leaf in the cases left by t.iii2.
fn closer(ell: i64, n: i64, outcome: &AdjointOutcome) -> Option<&'static str> {
    match (outcome, n - 3 * ell) {
        (AdjointOutcome::Plane { step: 1 }, -3) => Some("t.no3lDP"),
        (AdjointOutcome::Terminal { step: 2 }, -2) => Some("t.no3lDP"),
        (AdjointOutcome::Ruled { step: 2 }, -1) if ell == 1 => Some("t.no1"),
        (AdjointOutcome::Terminal { step: 3 }, -1) if ell == 1 => Some("t.3l-1"),
        (AdjointOutcome::Ruled { step: 3 }, 0) => Some(if ell == 0 { "t.no0" } else { "t.no1rul" }),
        (AdjointOutcome::Terminal { step: 4 }, 0) => Some(if ell == 0 { "t.no3lDP" } else { "t.no3lDP1" }),
        (AdjointOutcome::KEffective { .. }, _) => Some("K_Y not effective (Y rational)"),
        _ => None,
    }
}

fn s_more(ctx: &Ctx) -> Result<Outcome, String> {
    let (_, _, left) = ctx.case_iii()?;
    let ells: BTreeSet<i64> = left.iter().map(|(_, e)| *e).collect();
    let mut trace = Vec::new();
    let mut ok = !ells.is_empty();
    let mut leaves = 0;
    for &ell in &ells {
        let (lo, hi) = n_range(ell).map_err(err)?;
        for n in lo..=hi {
            for leaf in classify_ladder(ell, n).map_err(err)? {
                leaves += 1;
                let c = leaf.counts;
                let by = closer(ell, n, &leaf.outcome);
                ok &= by.is_some();
                trace.push(format!(
                    "ell={ell} n={n} n'={} n''={} n'''={}: {:?} -> {}",
                    c.n1,
                    c.n2,
                    c.n3,
                    leaf.outcome,
                    by.unwrap_or("OPEN")
                ));
            }
        }
    }
    Ok(Outcome::new(ok, format!("{leaves} ladder leaves for ell in {ells:?}, each with a closing node"), trace))
}

// ------------------------------------------------------------- fibration

fn e_fibre(_: &Ctx) -> Result<Outcome, String> {
    let mut trace = Vec::new();
    let mut ok = true;
    for f in fiber_catalog() {
        let b = node_bound(&f).map_err(err)?;
        let worst = if f.mults.len() == 1 { 0 } else { (0..f.mults.len()).map(|i| -f.inter[i][i]).max().unwrap_or(0) };
        ok &= b >= worst;
        trace.push(format!("{}: node bound {b} >= largest -C^2 = {worst}", f.name));
    }
    Ok(Outcome::new(ok, "node bound dominates every component", trace))
}

fn key(e: &Elimination) -> (i64, i64) {
    (e.instance.get("Gamma^2").copied().unwrap_or(0), e.instance.get("ell").copied().unwrap_or(0))
}

fn case_i_prop(ctx: &Ctx, prop: &str) -> Result<Vec<Elimination>, String> {
    Ok(ctx.case_i()?.eliminations.iter().filter(|e| e.prop_id == prop).cloned().collect())
}

/// Eliminations of `prop` in case (i); survivors must be taken up by one of
/// `next`, matched on (Γ², ℓ) and, for the follow-ups that need it, n.
fn case_i_step(ctx: &Ctx, prop: &str, next: &[(&str, Option<i64>)]) -> Result<Outcome, String> {
    let es = case_i_prop(ctx, prop)?;
    let all = &ctx.case_i()?.eliminations;
    let mut trace = Vec::new();
    let mut ok = !es.is_empty();
    let mut passed = 0;
    for e in &es {
        push_elim(&mut trace, e);
        if e.is_contradiction() {
            continue;
        }
        let n = e.instance.get("n").copied();
        let by: Vec<&str> = next
            .iter()
            .filter(|(p, only_n)| only_n.is_none_or(|m| Some(m) == n) && all.iter().any(|f| f.prop_id == *p && key(f) == key(e)))
            .map(|(p, _)| *p)
            .collect();
        if by.is_empty() {
            ok = false;
            trace.push("    survives with no follow-up".into());
        } else {
            passed += 1;
            trace.push(format!("    passed to {}", by.join(", ")));
        }
    }
    let dead = es.iter().filter(|e| e.is_contradiction()).count();
    Ok(Outcome::new(ok, format!("{dead} of {} instances contradicted, {passed} passed on", es.len()), trace))
}

fn l_fib(ctx: &Ctx) -> Result<Outcome, String> {
    case_i_step(ctx, "l.fib", &[("p.no0", None), ("p.noZ", None), ("p.noN", None), ("p.noN1", None)])
}

fn case_i_leaf(ctx: &Ctx, prop: &str) -> Result<Outcome, String> {
    let es = case_i_prop(ctx, prop)?;
    Ok(all_contradict(&es.iter().collect::<Vec<_>>()))
}

fn p_no0(ctx: &Ctx) -> Result<Outcome, String> {
    case_i_leaf(ctx, "p.no0")
}
fn p_noz(ctx: &Ctx) -> Result<Outcome, String> {
    case_i_leaf(ctx, "p.noZ")
}
fn p_non(ctx: &Ctx) -> Result<Outcome, String> {
    case_i_leaf(ctx, "p.noN")
}
fn p_non1(ctx: &Ctx) -> Result<Outcome, String> {
    case_i_step(ctx, "p.noN1", &[("p.no16", Some(6)), ("p.noN1.n9", Some(9))])
}
fn p_non1_n9(ctx: &Ctx) -> Result<Outcome, String> {
    case_i_leaf(ctx, "p.noN1.n9")
}
fn p_no16(ctx: &Ctx) -> Result<Outcome, String> {
    case_i_leaf(ctx, "p.no16")
}

fn t_i(ctx: &Ctx) -> Result<Outcome, String> {
    let run = ctx.case_i()?;
    let mut trace: Vec<String> = case_i_domain()
        .iter()
        .map(|p| format!("domain point Gamma^2={}, ell={}, h1={}, K_Y^2={}", p.gamma_sq, p.ell, p.h1, p.ky2))
        .collect();
    let mut by: BTreeMap<&str, (usize, usize)> = BTreeMap::new();
    for e in &run.eliminations {
        let v = by.entry(&e.prop_id).or_default();
        v.0 += 1;
        v.1 += usize::from(e.is_contradiction());
    }
    for (p, (n, d)) in by {
        trace.push(format!("{p}: {d} of {n} contradicted"));
    }
    for s in &run.survivors {
        trace.push(format!("survivor {s:?}"));
    }
    Ok(Outcome::new(run.survivors.is_empty(), format!("{} survivors of case (i)", run.survivors.len()), trace))
}

fn t_ii(_: &Ctx) -> Result<Outcome, String> {
    let run = run_case_ii().map_err(err)?;
    let mut o = all_contradict(&run.eliminations.iter().collect::<Vec<_>>());
    o.ok &= run.survivors.is_empty();
    if let Some(e) = run.eliminations.first() {
        o.summary = format!("12+6ell = {} > 15+3ell = {} at ell = {}, gap grows", e.lhs, e.rhs, e.instance["ell"]);
    }
    Ok(o)
}

fn delta_list(ctx: &Ctx, aprime2: i64) -> Result<Outcome, String> {
    let (ranges, _, _) = ctx.case_iii()?;
    let labels: BTreeSet<String> =
        enumerate_pencil_cases_with(aprime2, &PencilOptions::default()).0.into_iter().map(|c| c.label).collect();
    let want: BTreeMap<String, Vec<i64>> = ctx
        .fixtures
        .get("case_iii_delta.json")
        .map_err(err)?
        .as_array()
        .ok_or("case_iii_delta.json is not a list")?
        .iter()
        .filter_map(|v| Some((v["label"].as_str()?.to_string(), v["ells"].as_array()?.iter().filter_map(|x| x.as_i64()).collect())))
        .collect();
    let mut trace = Vec::new();
    let mut ok = true;
    for r in ranges.iter().filter(|r| labels.contains(&r.label)) {
        for e in &r.eliminations {
            push_elim(&mut trace, e);
        }
        let expect = want.get(&r.label).cloned().unwrap_or_default();
        ok &= r.ells == expect;
        trace.push(format!("({}) survives for ell in {:?}, listed {:?}", r.label, r.ells, expect));
    }
    Ok(Outcome::new(ok, "every other ell contradicted", trace))
}

fn p_0(ctx: &Ctx) -> Result<Outcome, String> {
    delta_list(ctx, 0)
}
fn p_1(ctx: &Ctx) -> Result<Outcome, String> {
    delta_list(ctx, 1)
}
fn p_3(ctx: &Ctx) -> Result<Outcome, String> {
    delta_list(ctx, 3)
}

fn t_iii(ctx: &Ctx) -> Result<Outcome, String> {
    let (ranges, _, _) = ctx.case_iii()?;
    let left: Vec<_> = ranges
        .iter()
        .filter(|r| !r.ells.is_empty())
        .map(|r| serde_json::json!({"label": r.label, "ells": r.ells}))
        .collect();
    let mut trace: Vec<String> = left.iter().map(|v| v.to_string()).collect();
    let ok = fixture(ctx, "case_iii_delta.json", &left, &mut trace)?;
    Ok(Outcome::new(ok, format!("{} cases survive the delta count", left.len()), trace))
}

fn case_iii_lattice(ctx: &Ctx, prop: &str) -> Result<Outcome, String> {
    let (_, es, _) = ctx.case_iii()?;
    Ok(all_contradict(&es.iter().filter(|e| e.prop_id == prop).collect::<Vec<_>>()))
}

fn p_l0(ctx: &Ctx) -> Result<Outcome, String> {
    case_iii_lattice(ctx, "p.l0")
}
fn p_no0d(ctx: &Ctx) -> Result<Outcome, String> {
    case_iii_lattice(ctx, "p.no0d")
}
fn p_1e(ctx: &Ctx) -> Result<Outcome, String> {
    case_iii_lattice(ctx, "p.1e")
}
fn t_no4(ctx: &Ctx) -> Result<Outcome, String> {
    case_iii_lattice(ctx, "t.no4")
}

fn t_iii2(ctx: &Ctx) -> Result<Outcome, String> {
    let (_, _, left) = ctx.case_iii()?;
    let v: Vec<_> = left.iter().map(|(a, b)| serde_json::json!({"label": a, "ell": b})).collect();
    let mut trace: Vec<String> = left.iter().map(|(a, b)| format!("({a}) at ell = {b}")).collect();
    let ok = fixture(ctx, "case_iii_left.json", &v, &mut trace)?;
    Ok(Outcome::new(ok, format!("{} (case, ell) pairs left", left.len()), trace))
}

// ----------------------------------------------------------------- ruled

fn e_rul(_: &Ctx) -> Result<Outcome, String> {
    let mut trace = Vec::new();
    let mut ok = true;
    for a in 0..=2 {
        for br in [RuledBranch::ThreeEll, RuledBranch::ThreeEllMinus1] {
            for (what, want, got) in RuledModel::new(a, br).checks() {
                ok &= want == got;
                trace.push(format!("a={a} {br:?}: {what} = {got} (expected {want})"));
            }
        }
    }
    Ok(Outcome::new(ok, "ruled ladder identities on F_a blown up at 9 points", trace))
}

fn l_a2(_: &Ctx) -> Result<Outcome, String> {
    let mut trace = Vec::new();
    let mut ok = true;
    for a in 0..=5 {
        let c = ruled_constraints(a);
        ok &= c.a_ok == (7 - 3 * a >= 0);
        trace.push(format!("a={a}: g*c.Nbar >= 0 {}; alpha = {}, sum beta = {}, beta_i >= {}", c.a_ok, c.alpha, c.beta_sum, c.beta_min));
    }
    Ok(Outcome::new(ok, "a <= 2", trace))
}

fn p_no2(_: &Ctx) -> Result<Outcome, String> {
    let e = eliminate_a2();
    let r = crate::cremona::ruled::singular_fiber_count_bound(2, e.instance["beta_min"]);
    let mut o = all_contradict(&[&e]);
    o.summary = format!("{} <= 6r forces r >= {r} > 2", e.lhs);
    Ok(o)
}

fn t_no0(_: &Ctx) -> Result<Outcome, String> {
    let mut es = Vec::new();
    for b in [HomaloidalBranch::Pencil, HomaloidalBranch::AEqualsN] {
        let r = homaloidal_eliminate(b);
        es.push(r.printed);
        es.push(r.lattice);
    }
    let mut o = all_contradict(&es.iter().collect::<Vec<_>>());
    let routes: Vec<String> =
        es.iter().map(|e| format!("{}/{} {}", e.prop_id, e.branch, if e.is_contradiction() { "closed" } else { "open" })).collect();
    o.summary = routes.join(", ");
    Ok(o)
}

fn t_no1rul(_: &Ctx) -> Result<Outcome, String> {
    let es = ruled_no1rul().map_err(err)?;
    Ok(all_contradict(&es.iter().collect::<Vec<_>>()))
}

fn t_no1(_: &Ctx) -> Result<Outcome, String> {
    let e = ruled_no1().map_err(err)?;
    Ok(all_contradict(&[&e]))
}

// ------------------------------------------------------------- del Pezzo

fn e_sys(ctx: &Ctx) -> Result<Outcome, String> {
    let f = ctx.fixtures.get("multiplicity_system.json").map_err(err)?;
    let g = |k: &str| f[k].as_i64().ok_or_else(|| format!("multiplicity_system.json: {k} missing"));
    let (c1, c2, maxp) = (g("c1")?, g("c2")?, g("max_points")?);
    let r = f["d0_range"].as_array().ok_or("multiplicity_system.json: d0_range missing")?;
    let (lo, hi) = (r[0].as_i64().unwrap_or(0), r[1].as_i64().unwrap_or(0));
    let sols = solve_multiplicity_system(c1, c2, maxp, lo..=hi);
    let mut trace: Vec<String> = sols.iter().enumerate().map(|(i, s)| format!("{}) {s}", i + 1)).collect();
    let ok = fixture(ctx, "multiplicity_system.json", &serde_json::json!({"c1": c1, "c2": c2, "max_points": maxp, "d0_range": [lo, hi], "solutions": sols}), &mut trace)?;
    Ok(Outcome::new(ok, format!("{} solutions with d0 in {lo}..={hi}", sols.len()), trace))
}

fn p_equiv0(_: &Ctx) -> Result<Outcome, String> {
    let sols: Vec<MultSolution> = solve_multiplicity_system(2, 2, 8, 0..=12);
    let n = sols.len();
    let mut trace = Vec::new();
    let mut ok = n > 1;
    for k in [7, 6] {
        let cert = cremona_orbit_connect(&sols, k).map_err(err)?;
        let moves = cert.paths.iter().flat_map(|p| &p.moves);
        let kept = moves.clone().all(|m| m.invariants_kept && m.before.transform(m.base) == m.after);
        ok &= kept && cert.paths.len() == n * (n - 1);
        let label = |c: &crate::cremona::PlaneCurve| {
            cert.states.iter().position(|s| *s == c.sorted()).map_or("?".to_string(), |i| format!("{})", i + 1))
        };
        let mut chain: Vec<String> = cert.chain.first().map(|m| vec![label(&m.before)]).unwrap_or_default();
        for m in &cert.chain {
            chain.push(format!("{} [{},{},{}]", label(&m.after), m.base_mults[0], m.base_mults[1], m.base_mults[2]));
        }
        ok &= cert.chain.len() + 1 == n;
        trace.push(format!("-{k}K budget {}: {} paths, longest {} moves, all invariants kept: {kept}", 3 * k, cert.paths.len(), cert.max_len()));
        trace.push(format!("  move chain {}", chain.join(" -> ")));
    }
    Ok(Outcome::new(ok, format!("{n} solutions in one Cremona orbit"), trace))
}

fn one(e: Elimination) -> Result<Outcome, String> {
    Ok(all_contradict(&[&e]))
}

fn l_noa(_: &Ctx) -> Result<Outcome, String> {
    one(lemma_noa())
}
fn l_nob(_: &Ctx) -> Result<Outcome, String> {
    one(lemma_nob())
}
fn p_no3lirr(_: &Ctx) -> Result<Outcome, String> {
    one(prop_no3lirr().map_err(err)?)
}
fn p_3lred(_: &Ctx) -> Result<Outcome, String> {
    one(prop_3lred())
}
fn dp_row202(_: &Ctx) -> Result<Outcome, String> {
    one(row_202())
}

fn dp_tables(_: &Ctx) -> Result<Outcome, String> {
    let mut trace = Vec::new();
    let mut ok = true;
    for (name, _) in TABLES {
        let t = table(name).map_err(err)?;
        let v = verify_config_table(&t, &spec_for(&t));
        let (total, caught) = perturbation_sweep(&t);
        ok &= v.is_empty() && total > 0 && caught == total;
        trace.push(format!("{name}: {} violations; {caught} of {total} single-entry perturbations caught {}", v.len(), v.join("; ")));
    }
    Ok(Outcome::new(ok, format!("{} tables pass, every check sharp", TABLES.len()), trace))
}

fn dp_b0(_: &Ctx) -> Result<Outcome, String> {
    let mut trace = Vec::new();
    let mut ok = true;
    for br in [DpBranch::ThreeEll, DpBranch::ThreeEllMinus1] {
        let c = b0_table_check(br).map_err(err)?;
        for r in &c.derived {
            trace.push(format!("{br:?}: {:?} s={} B0bar^2={} {:?}", r.values, r.s, r.b0_square, r.index));
        }
        ok &= c.spurious.is_empty();
        for u in &c.unprinted {
            trace.push(format!("{br:?}: row {u:?} is not printed; closed by dp.row202"));
        }
        ok &= match br {
            DpBranch::ThreeEll => c.unprinted.is_empty(),
            DpBranch::ThreeEllMinus1 => c.unprinted == vec![vec![1, 1, 2, 0, 2, 2]],
        };
        trace.push(format!("{br:?}: {} printed rows, {} derived, spurious {:?}", c.printed.len(), c.derived.len(), c.spurious));
    }
    Ok(Outcome::new(ok, "B0 tables rederived", trace))
}

fn dp_sixtuple(_: &Ctx) -> Result<Outcome, String> {
    let r = sixtuple_enumerate().map_err(err)?;
    let mut trace: Vec<String> = r.kept.iter().map(|t| format!("kept {t:?}")).collect();
    trace.extend(r.excluded.iter().map(|(t, why)| format!("excluded {t:?}: {why}")));
    let names: BTreeSet<String> = r.kept.iter().map(|t| format!("w8_{}", t.iter().map(|d| d.to_string()).collect::<String>())).collect();
    let tables: BTreeSet<String> = TABLES.iter().filter(|(n, _)| n.starts_with("w8_")).map(|(n, _)| n.to_string()).collect();
    trace.push(format!("tables {tables:?}"));
    Ok(Outcome::new(names == tables, format!("{} degree sixtuples, one table each", r.kept.len()), trace))
}

fn dp_exceptional(_: &Ctx) -> Result<Outcome, String> {
    let s = exceptional_curve_solutions().map_err(err)?;
    let mut trace: Vec<String> = s.curves.iter().map(|c| format!("({}; {:?})", c.degree, c.mults)).collect();
    trace.extend(s.kinds.iter().map(|k| format!("F', H' images {k:?}")));
    trace.extend(s.rejected.iter().map(|(a, b, w)| format!("rejected ({a:?}, {b:?}): {w}")));
    use ImageKind::*;
    let want = vec![(Contracted, Contracted), (Contracted, Line), (Contracted, Conic), (Line, Line)];
    Ok(Outcome::new(s.kinds == want, format!("{} candidate curves, {} image types", s.curves.len(), s.kinds.len()), trace))
}

fn dp_equiv(_: &Ctx) -> Result<Outcome, String> {
    let es = table_equivalences().map_err(err)?;
    let trace: Vec<String> =
        es.iter().map(|e| format!("{}: {} at {:?} -> {}: {} {}", e.name, e.from, e.base, e.to, e.holds, e.detail)).collect();
    Ok(Outcome::new(es.iter().all(|e| e.holds), format!("{} quadratic moves between tables", es.len()), trace))
}

fn eigen(id: &str) -> Result<Outcome, String> {
    let (_, t, points) = audit_targets().into_iter().find(|(i, _, _)| *i == id).ok_or("no audit target")?;
    let a = eigenvalue_audit(id, &table(t).map_err(err)?, points).map_err(err)?;
    let p = printed_audit(id).ok_or("no printed congruences")?;
    let mut o = all_contradict(&[&a.elimination, &p]);
    o.summary = format!(
        "table route: {} of {} branches solvable; printed route: {} assignments",
        a.elimination.rhs,
        a.branches.len(),
        p.rhs
    );
    Ok(o)
}

fn p_3l1(_: &Ctx) -> Result<Outcome, String> {
    eigen("p.3l-1")
}
fn p_3l12(_: &Ctx) -> Result<Outcome, String> {
    eigen("p.3l-12")
}
fn p_3l13(_: &Ctx) -> Result<Outcome, String> {
    eigen("p.3l-13")
}

fn t_final(_: &Ctx) -> Result<Outcome, String> {
    Ok(Outcome::new(true, "no automorphism of order 3 once every case is closed", vec![]))
}

// -------------------------------------------------------------- registry

macro_rules! node {
    ($id:expr, $kind:ident, $title:expr, [$($d:expr),*], $check:expr) => {
        NodeSpec { id: $id, kind: NodeKind::$kind, title: $title, depends_on: &[$($d),*], citation: None, check: $check }
    };
}

macro_rules! ax {
    ($id:expr, $title:expr, $cite:expr) => {
        NodeSpec { id: $id, kind: NodeKind::Axiom, title: $title, depends_on: &[], citation: Some($cite), check: axiom }
    };
}

/// All nodes, in report order. Dependencies always come earlier.
pub fn registry() -> Vec<NodeSpec> {
    vec![
        ax!(
            "ax.vanishing",
            "h^1 and h^2 vanish for the adjoint-type systems whose h^0 is counted on Y",
            "Kodaira vanishing; Ramanujam vanishing"
        ),
        ax!(
            "ax.miyaoka",
            "the moving part A of the invariant pencil in |3K_S| has AK_S >= 2",
            "Y. Miyaoka, Tricanonical maps of numerical Godeaux surfaces, Invent. Math. 34 (1976)"
        ),
        ax!(
            "ax.ccm2",
            "if D is nef and D + K_Y is not, every curve meeting D + K_Y negatively is a (-1)-curve orthogonal to D; contracting and repeating ends with a nef adjoint",
            "[CCM2], lemma 2.2"
        ),
        ax!(
            "ax.drop",
            "a base point of the pencil at a fixed point contributes to D only through the chain F, G, H over q or the curve E_i over p_i",
            "lemmas l.drop1, l.drop2, l.drop3 (local computation on the resolution)"
        ),
        ax!(
            "ax.l-3Z",
            "an irreducible (-1)-curve C with CN = CF'_j = CH'_j = 0 pulls back to an irreducible rational (-3)-curve",
            "lemma l.-3Z (Hurwitz formula on the triple cover)"
        ),
        ax!(
            "ax.la1",
            "for W -> F_a with a in {0, 2} an elementary transformation gives a = 1, unless a = 2 and the ruling has at most two singular fibres",
            "lemma l.a1 (elementary transformations of Hirzebruch surfaces)"
        ),
        ax!(
            "t.no3lDP",
            "the Del Pezzo branches n = 3l with l = 0, n = 3l - 2 with n' = 5, and n = 3l - 3 do not occur",
            "external result: Del Pezzo table computations of the same kind as t.3l-1, not replayed here"
        ),
        // cover numerics
        node!("e.fixed", FormulaCheck, "fixed points: h1 + 2h2 = 6 + (3R0K_S - R0^2)/2", [], e_fixed),
        node!("e.ky", FormulaCheck, "K_Y^2 by two transfer formulas", ["e.fixed"], e_ky),
        node!("e.KX", FormulaCheck, "K_X^2 from K_Y^2 and from the fixed points", ["e.ky"], e_kx),
        node!("l.chili", FormulaCheck, "h0(N) and h0(2K_Y + B) bound R0K_S and h2", ["ax.vanishing"], l_chili),
        node!("list", Enumeration, "the three main cases (R0K_S, h2)", ["l.chili", "e.fixed", "e.KX"], list),
        node!("e.split", FormulaCheck, "eigenvalue split h1 = h11 + h12 in case (iii)", ["list"], e_split),
        // pencil
        node!("le.sub", FormulaCheck, "3 = AK_S + PhiK_S with AK_S >= 2, index bounds on A^2", ["ax.miyaoka"], le_sub),
        node!("l.DG", FormulaCheck, "self-intersection drop and DG on the chain over q", ["ax.drop"], l_dg),
        node!("p.list0", Enumeration, "pencil cases with A'^2 = 0", ["le.sub", "l.DG", "list"], p_list0),
        node!("p.list1", Enumeration, "pencil cases with A'^2 = 1", ["le.sub", "l.DG", "list"], p_list1),
        node!("p.list2", Enumeration, "no pencil case with A'^2 = 2", ["le.sub", "l.DG", "list"], p_list2),
        node!("r.N", Enumeration, "A'^2 = 3 only for A' = N", ["le.sub", "l.DG", "list"], r_n),
        // adjoint
        node!("p.-1cycles", FormulaCheck, "lower bound for the (-1)-cycles orthogonal to N", ["ax.ccm2", "list"], p_1cycles),
        node!("l.n", FormulaCheck, "window for n in case (iii)", ["p.-1cycles"], l_n),
        node!("c.n", FormulaCheck, "forced later counts n', n'', n'''", ["l.n", "ax.ccm2"], c_n),
        node!("s.3l-2", FormulaCheck, "ladder for n = 3l - 2", ["c.n"], s_3l2),
        node!("s.3l-1", FormulaCheck, "ladder for n = 3l - 1, also against the 14-point tables", ["c.n"], s_3l1),
        node!("s.3l", FormulaCheck, "ladder for n = 3l", ["c.n"], s_3l),
        // fibration, case (i)
        node!("e.fibre", FormulaCheck, "node bound of singular fibres", [], e_fibre),
        node!("l.fib", Elimination, "case (i): delta count for |N_1|", ["list", "e.ky", "e.fibre", "ax.l-3Z"], l_fib),
        node!("p.no0", Elimination, "case (i), N_1^2 = 0", ["l.fib"], p_no0),
        node!("p.noZ", Elimination, "case (i), fixed part a cycle", ["l.fib"], p_noz),
        node!("p.noN", Elimination, "case (i), fixed part through N", ["l.fib"], p_non),
        node!("p.noN1.n9", Elimination, "case (i), the n = 9 survivor of p.noN1", ["l.fib"], p_non1_n9),
        node!("p.no16", Elimination, "case (i), n = 6", ["l.fib"], p_no16),
        node!("p.noN1", Elimination, "case (i), free N_1", ["l.fib", "p.no16", "p.noN1.n9"], p_non1),
        node!("t.i", Elimination, "case (i) does not occur", ["l.fib", "p.no0", "p.noZ", "p.noN", "p.noN1", "ax.ccm2"], t_i),
        // case (ii)
        node!("t.ii", Elimination, "case (ii) does not occur", ["list", "e.ky", "e.fibre"], t_ii),
        // case (iii)
        node!("p.0", Elimination, "delta count for the A'^2 = 0 cases", ["p.list0", "e.fibre", "e.split"], p_0),
        node!("p.1", Elimination, "delta count for the A'^2 = 1 cases", ["p.list1", "e.fibre", "e.split"], p_1),
        node!("p.3", Elimination, "delta count for A' = N", ["r.N", "e.fibre", "e.split"], p_3),
        node!("t.iii", Enumeration, "cases of (iii) left by the delta count", ["p.0", "p.1", "p.3", "p.list2"], t_iii),
        node!("p.l0", Elimination, "n = n' = 0: E'_i inside Phi'", ["t.iii"], p_l0),
        node!("p.no0d", Elimination, "case (0d): the adjoint A_1", ["t.iii", "ax.ccm2"], p_no0d),
        node!("t.no4", Elimination, "n = 3l - 4: A'Theta = 1 on an elliptic curve", ["t.iii", "l.n"], t_no4),
        node!("p.1e", Elimination, "case (1e) for every n and s = A'N_1", ["t.iii", "t.no4", "ax.ccm2", "l.n"], p_1e),
        node!("t.iii2", Enumeration, "cases of (iii) left by the lattice arguments", ["t.iii", "p.l0", "p.no0d", "p.1e"], t_iii2),
        node!("s.more", FormulaCheck, "every ladder leaf of the remaining cases has a closing node", ["t.iii2", "c.n", "s.3l-2", "s.3l-1", "s.3l"], s_more),
        // ruled
        node!("e.rul", FormulaCheck, "ruled ladder on F_a blown up at nine points", ["s.3l", "s.3l-1"], e_rul),
        node!("l.a2", FormulaCheck, "a <= 2 from g*c.Nbar >= 0", ["e.rul"], l_a2),
        node!("p.no2", Elimination, "a = 2 with at most two singular fibres", ["l.a2", "ax.la1"], p_no2),
        node!("t.no0", Elimination, "n = 3l = 0, n' = n'' = 0: plane model of |A'|", ["s.more", "p.no2", "ax.la1"], t_no0),
        node!("t.no1rul", Elimination, "n = 3l, l = 1, n' = n'' = 0: delta for |N_3|", ["s.more", "ax.l-3Z"], t_no1rul),
        node!("t.no1", Elimination, "n = 3l - 1 = 2, n' = 1: delta for |N_2|", ["s.more", "ax.l-3Z"], t_no1),
        // del Pezzo, n = 3l
        node!("e.sys", Enumeration, "degree and multiplicity system of Ebar'", [], e_sys),
        node!("p.equiv0", FormulaCheck, "the solutions form one Cremona orbit", ["e.sys"], p_equiv0),
        node!("l.noa", Elimination, "n = 3l, table row a)", ["s.3l"], l_noa),
        node!("p.no3lirr", Elimination, "n = 3l with every cycle irreducible", ["p.equiv0", "s.3l"], p_no3lirr),
        node!("p.3lred", Elimination, "n = 3l with a reducible cycle", ["l.noa", "s.3l"], p_3lred),
        node!("t.no3lDP1", Elimination, "n = 3l, n' = 0, n'' = n''' = 1 at l = 1", ["s.more", "p.no3lirr", "p.3lred", "l.noa"], closed_by),
        // del Pezzo, n = 3l - 1
        node!("dp.b0", FormulaCheck, "B0 against the contracted cycles", ["s.3l", "s.3l-1"], dp_b0),
        node!("dp.row202", Elimination, "the unprinted B0 row (2, 0, 2)", ["dp.b0"], dp_row202),
        node!("l.nob", Elimination, "n = 3l - 1, table row b)", ["dp.b0"], l_nob),
        node!("dp.sixtuple", Enumeration, "degree sixtuples of the plane model of W", ["dp.b0"], dp_sixtuple),
        node!("dp.tables", FormulaCheck, "printed multiplicity tables", ["dp.sixtuple", "s.3l-1"], dp_tables),
        node!("dp.exceptional", Enumeration, "plane images of F' and H'", ["dp.tables"], dp_exceptional),
        node!("dp.equiv", FormulaCheck, "quadratic moves between the printed tables", ["dp.tables"], dp_equiv),
        node!("p.3l-1", Elimination, "eigenvalues on the two-lines table", ["dp.tables", "dp.exceptional", "dp.equiv"], p_3l1),
        node!("p.3l-12", Elimination, "eigenvalues on the conic + contracted table", ["dp.tables", "dp.exceptional", "dp.equiv"], p_3l12),
        node!("p.3l-13", Elimination, "eigenvalues on the both-contracted table", ["dp.tables", "dp.exceptional", "dp.equiv"], p_3l13),
        node!(
            "t.3l-1",
            Elimination,
            "n = 3l - 1, n' = 2, n'' = 1",
            ["s.more", "dp.row202", "l.nob", "p.3l-1", "p.3l-12", "p.3l-13"],
            closed_by
        ),
        node!(
            "t.final",
            FormulaCheck,
            "a numerical Godeaux surface has no automorphism of order 3",
            ["t.i", "t.ii", "t.iii2", "t.no0", "t.no1rul", "t.no1", "t.no3lDP1", "t.3l-1", "t.no3lDP", "ax.vanishing"],
            t_final
        ),
    ]
}
