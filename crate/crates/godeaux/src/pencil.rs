//! Shapes of the invariant pencil inside |3K_S| and of its image |A'| on Y.
//!
//! The search is a filter over a finite catalog of local atoms: the pencil
//! may pass through the A_2-type fixed point q (blown up to the chain
//! F, G, H with F² = H² = −1, G² = −3) and through the isolated fixed points
//! p_i (blown up to E_i).

use std::cmp::Reverse;
use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::picard::index_ok;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SingularityKind {
    None,
    Simple,
    Node,
    Cusp,
    Double,
    OrdinaryTriple,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Site {
    IsolatedPointQ,
    IsolatedPointP,
}

/// Local contribution of a base point to D, where ε*A = Ã + D.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DropAtom {
    pub site: Site,
    pub mult: i64,
    pub d_contribution: Vec<(String, i64)>,
    pub self_int_drop: i64,
    pub dg: i64,
    pub de: i64,
    pub singularity_kind: SingularityKind,
}

/// −D² for D = fF + gG + hH on the chain over q.
pub fn chain_drop(f: i64, g: i64, h: i64) -> i64 {
    f * f + 3 * g * g + h * h - 2 * f * g - 2 * g * h
}

/// D·G for D = fF + gG + hH.
pub fn chain_dg(f: i64, g: i64, h: i64) -> i64 {
    f - 3 * g + h
}

fn q_atom(kind: SingularityKind, mult: i64, f: i64, g: i64, h: i64) -> DropAtom {
    DropAtom {
        site: Site::IsolatedPointQ,
        mult,
        d_contribution: vec![("F".into(), f), ("G".into(), g), ("H".into(), h)],
        self_int_drop: chain_drop(f, g, h),
        dg: chain_dg(f, g, h),
        de: 0,
        singularity_kind: kind,
    }
}

/// The q-site atoms. The simple atom is listed as 2F+G+H; its mirror
/// F+G+2H is the same case after swapping F and H.
pub fn q_atoms() -> Vec<DropAtom> {
    use SingularityKind::*;
    vec![
        q_atom(Simple, 1, 2, 1, 1),
        q_atom(Node, 2, 3, 2, 3),
        q_atom(Cusp, 2, 3, 2, 2),
        q_atom(Double, 2, 4, 2, 2),
        q_atom(OrdinaryTriple, 3, 3, 3, 3),
    ]
}

pub fn p_atom(index: usize, m: i64) -> DropAtom {
    DropAtom {
        site: Site::IsolatedPointP,
        mult: m,
        d_contribution: vec![(format!("E{index}"), m)],
        self_int_drop: m * m,
        dg: 0,
        de: -m,
        singularity_kind: if m == 1 { SingularityKind::None } else { SingularityKind::Simple },
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum PhiConstraint {
    GenusAtMost(i64),
    Zero,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SubsystemBranch {
    pub ak: i64,
    pub phik: i64,
    pub allowed_a2: Vec<i64>,
    pub phi_constraint: PhiConstraint,
    /// A² = 4 only for A ≡ 2K_S.
    pub a2_equality: Option<i64>,
}

/// Splits 3 = AK_S + ΦK_S with AK_S ≥ 2, then bounds A² and Φ by the index
/// theorem and genus parity against K_S² = 1.
pub fn subsystem_split() -> Vec<SubsystemBranch> {
    let mut out = Vec::new();
    for ak in 2..=3 {
        let phik = 3 - ak;
        let a2s: Vec<i64> = (0..=ak * ak)
            .filter(|a2| index_ok(*a2, ak, 1).unwrap() && (a2 + ak) % 2 == 0)
            .collect();
        // Φ² bound from (Φ − ΦK·K)² ≤ 0, with Φ² + ΦK even
        let phi_sq_max = if phik > 0 { phik * phik } else { -2 };
        let pa_max = 1 + (phi_sq_max + phik) / 2;
        // equality in the index theorem is A ≡ (AK)K
        let eq = ak * ak;
        if phik == 0 {
            let (zero, rest): (Vec<i64>, Vec<i64>) = a2s.into_iter().partition(|a| *a == eq);
            out.push(SubsystemBranch {
                ak,
                phik,
                allowed_a2: rest,
                phi_constraint: PhiConstraint::GenusAtMost(pa_max),
                a2_equality: None,
            });
            out.push(SubsystemBranch {
                ak,
                phik,
                allowed_a2: zero,
                phi_constraint: PhiConstraint::Zero,
                a2_equality: Some(eq),
            });
        } else {
            out.push(SubsystemBranch {
                ak,
                phik,
                allowed_a2: a2s,
                phi_constraint: PhiConstraint::GenusAtMost(pa_max),
                a2_equality: Some(eq),
            });
        }
    }
    out
}

/// AΦ = 9 − A² − 3ΦK_S bounds AR_0 from above.
pub fn ar0_upper(a2: i64, phik: i64) -> Option<i64> {
    let v = 9 - a2 - 3 * phik;
    (v >= 0).then_some(v)
}

/// g from AK_S − 2AR_0 − DG + DE = 6g − 6 − 3A'².
pub fn genus_from_case(ak: i64, ar0: i64, dg: i64, de: i64, aprime2: i64) -> num_rational::Ratio<i64> {
    num_rational::Ratio::new(ak - 2 * ar0 - dg + de + 6 + 3 * aprime2, 6)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PencilCase {
    pub label: String,
    pub ak: i64,
    pub a2: i64,
    pub ar0: i64,
    pub g: i64,
    pub apk: i64,
    pub aprime2: i64,
    pub phi_zero: bool,
    pub q_atom: Option<DropAtom>,
    /// Multiplicities at the points p_i, non-increasing.
    pub points: Vec<i64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DTerm {
    pub component: String,
    pub mult: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PencilCaseJson {
    pub label: String,
    pub a2: i64,
    pub ar0: i64,
    pub g: i64,
    pub apk: i64,
    pub aprime2: i64,
    pub d: Vec<DTerm>,
    pub phi_zero: bool,
}

impl PencilCase {
    fn chain(&self) -> (i64, i64, i64) {
        match &self.q_atom {
            None => (0, 0, 0),
            Some(a) => (a.d_contribution[0].1, a.d_contribution[1].1, a.d_contribution[2].1),
        }
    }

    pub fn d_terms(&self) -> Vec<DTerm> {
        let mut out: Vec<DTerm> = self
            .points
            .iter()
            .enumerate()
            .map(|(i, m)| DTerm { component: format!("E{}", i + 1), mult: *m })
            .collect();
        if let Some(a) = &self.q_atom {
            for (c, m) in &a.d_contribution {
                out.push(DTerm { component: c.clone(), mult: *m });
            }
        }
        out
    }

    /// D written as a sum, e.g. "E1+2F+G+H"; "0" when empty.
    pub fn d_string(&self) -> String {
        let terms = self.d_terms();
        if terms.is_empty() {
            return "0".into();
        }
        terms
            .iter()
            .map(|t| if t.mult == 1 { t.component.clone() } else { format!("{}{}", t.mult, t.component) })
            .collect::<Vec<_>>()
            .join("+")
    }

    pub fn drop(&self) -> i64 {
        let (f, g, h) = self.chain();
        chain_drop(f, g, h) + self.points.iter().map(|m| m * m).sum::<i64>()
    }

    pub fn dg(&self) -> i64 {
        let (f, g, h) = self.chain();
        chain_dg(f, g, h)
    }

    pub fn de(&self) -> i64 {
        -self.points.iter().sum::<i64>()
    }

    /// A'F' = −D·F.
    pub fn a_f(&self) -> i64 {
        let (f, g, _) = self.chain();
        f - g
    }

    /// A'H' = −D·H.
    pub fn a_h(&self) -> i64 {
        let (_, g, h) = self.chain();
        h - g
    }

    /// A'G' = −DG/3.
    pub fn a_g(&self) -> i64 {
        -self.dg() / 3
    }

    /// A'E'_i = m_i.
    pub fn a_e(&self) -> &[i64] {
        &self.points
    }

    pub fn to_json(&self) -> PencilCaseJson {
        PencilCaseJson {
            label: self.label.clone(),
            a2: self.a2,
            ar0: self.ar0,
            g: self.g,
            apk: self.apk,
            aprime2: self.aprime2,
            d: self.d_terms(),
            phi_zero: self.phi_zero,
        }
    }

    /// (A², AR_0, g, A'K_Y, D) as printed in case lists.
    pub fn quintuple(&self) -> (i64, i64, i64, i64, String) {
        (self.a2, self.ar0, self.g, self.apk, self.d_string())
    }
}

/// How the residual AΦ − AR_0 budget is treated when q is a base point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum QResidue {
    /// At least one unit of A·Φ sits at q; no congruence on the rest.
    Free,
    /// The residual is 1 mod 3.
    Exact,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PencilOptions {
    pub congruences: bool,
    pub q_residue: QResidue,
}

impl Default for PencilOptions {
    fn default() -> Self {
        PencilOptions { congruences: true, q_residue: QResidue::Free }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct FilterCounts {
    pub candidates: usize,
    pub by_drop: usize,
    pub by_dg: usize,
    pub by_phi_zero: usize,
    pub by_genus: usize,
    pub by_orbit: usize,
    pub kept: usize,
}

/// Multisets of positive integers with Σm² ≤ budget, non-increasing.
fn partitions(budget: i64, maxpart: i64, prefix: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
    out.push(prefix.clone());
    let mut a = maxpart;
    while a >= 1 {
        if a * a <= budget {
            prefix.push(a);
            partitions(budget - a * a, a, prefix, out);
            prefix.pop();
        }
        a -= 1;
    }
}

/// Least contribution of a point of multiplicity a on A to the cycle A·Φ,
/// so that A and Φ together vanish to order ≡ 0 mod 3 along E.
pub fn orbit_min_contribution(a: i64) -> i64 {
    let r = a.rem_euclid(3);
    if r == 0 {
        0
    } else {
        a * (3 - r)
    }
}

pub fn enumerate_pencil_cases(aprime2: i64) -> Vec<PencilCase> {
    enumerate_pencil_cases_with(aprime2, &PencilOptions::default()).0
}

pub fn enumerate_pencil_cases_with(aprime2: i64, opts: &PencilOptions) -> (Vec<PencilCase>, FilterCounts) {
    let mut counts = FilterCounts::default();
    let mut out = Vec::new();
    let mut qs: Vec<Option<DropAtom>> = vec![None];
    qs.extend(q_atoms().into_iter().map(Some));
    for br in subsystem_split() {
        let phi_zero = br.phi_constraint == PhiConstraint::Zero;
        for &a2 in &br.allowed_a2 {
            let Some(aphi) = ar0_upper(a2, br.phik) else { continue };
            let mut parts = Vec::new();
            partitions(a2, (a2 as f64).sqrt() as i64 + 1, &mut Vec::new(), &mut parts);
            for q in &qs {
                for ps in &parts {
                    counts.candidates += 1;
                    let case = PencilCase {
                        label: String::new(),
                        ak: br.ak,
                        a2,
                        ar0: 0,
                        g: 0,
                        apk: 0,
                        aprime2,
                        phi_zero,
                        q_atom: q.clone(),
                        points: ps.clone(),
                    };
                    if 3 * aprime2 != a2 - case.drop() {
                        counts.by_drop += 1;
                        continue;
                    }
                    if opts.congruences && case.dg().rem_euclid(3) != 0 {
                        counts.by_dg += 1;
                        continue;
                    }
                    if opts.congruences && phi_zero {
                        let (f, _, h) = case.chain();
                        let bad = f % 3 != 0 || h % 3 != 0 || ps.iter().any(|m| m % 3 != 0);
                        if bad || (q.is_some() && !ps.is_empty()) {
                            counts.by_phi_zero += 1;
                            continue;
                        }
                    }
                    for ar0 in 0..=aphi {
                        let g = genus_from_case(br.ak, ar0, case.dg(), case.de(), aprime2);
                        if !g.is_integer() || g.to_integer() < 0 {
                            counts.by_genus += 1;
                            continue;
                        }
                        if opts.congruences && !phi_zero {
                            let rem = aphi - ar0 - ps.iter().map(|m| orbit_min_contribution(*m)).sum::<i64>();
                            let ok = match (q.is_some(), opts.q_residue) {
                                (false, _) => rem >= 0 && rem % 3 == 0,
                                (true, QResidue::Free) => rem >= 1,
                                (true, QResidue::Exact) => rem >= 1 && (rem - 1) % 3 == 0,
                            };
                            if !ok {
                                counts.by_orbit += 1;
                                continue;
                            }
                        }
                        let g = g.to_integer();
                        out.push(PencilCase { ar0, g, apk: 2 * g - 2 - aprime2, ..case.clone() });
                    }
                }
            }
        }
    }
    out.sort_by(|a, b| {
        (a.a2, a.ar0, Reverse(a.g), a.d_string()).cmp(&(b.a2, b.ar0, Reverse(b.g), b.d_string()))
    });
    for (i, c) in out.iter_mut().enumerate() {
        c.label = if aprime2 == 3 && c.a2 == 9 && c.q_atom.is_none() && c.points.is_empty() {
            "N".into()
        } else {
            format!("{aprime2}{}", (b'a' + i as u8) as char)
        };
    }
    counts.kept = out.len();
    (out, counts)
}

/// All four lists keyed by A'².
pub fn all_pencil_cases() -> BTreeMap<i64, Vec<PencilCase>> {
    (0..=3).map(|k| (k, enumerate_pencil_cases(k))).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn split_matches_lemma() {
        let s = subsystem_split();
        assert_eq!(s.len(), 3);
        assert_eq!((s[0].ak, s[0].phik, s[0].allowed_a2.clone()), (2, 1, vec![0, 2, 4]));
        assert_eq!(s[0].phi_constraint, PhiConstraint::GenusAtMost(2));
        assert_eq!(s[0].a2_equality, Some(4));
        assert_eq!(s[1].allowed_a2, vec![1, 3, 5, 7]);
        assert_eq!(s[1].phi_constraint, PhiConstraint::GenusAtMost(0));
        assert_eq!(s[2].allowed_a2, vec![9]);
        assert_eq!(s[2].phi_constraint, PhiConstraint::Zero);
    }

    #[test]
    fn genus_examples() {
        use num_rational::Ratio;
        assert_eq!(genus_from_case(2, 1, 0, 0, 0), Ratio::from_integer(1));
        assert_eq!(genus_from_case(3, 0, -3, 0, 0), Ratio::from_integer(2));
        assert_eq!(genus_from_case(3, 0, 0, 0, 1), Ratio::from_integer(2));
    }

    #[test]
    fn ar0_bounds() {
        assert_eq!(ar0_upper(0, 1), Some(6));
        assert_eq!(ar0_upper(1, 0), Some(8));
        assert_eq!(ar0_upper(9, 0), Some(0));
        assert_eq!(ar0_upper(9, 1), None);
    }

    #[test]
    fn atom_numbers() {
        let q = q_atoms();
        assert_eq!(q[0].self_int_drop, 2);
        assert_eq!(q[1].self_int_drop, 6);
        assert_eq!(q[3].self_int_drop, 8);
        assert_eq!(q[4].dg, -3);
        // a cusp at q is impossible: DG is not a multiple of 3
        assert_eq!(q[2].dg, -1);
    }

    #[test]
    fn list_two_empty() {
        assert!(enumerate_pencil_cases(2).is_empty());
    }

    #[test]
    fn list_three_is_n() {
        let v = enumerate_pencil_cases(3);
        assert_eq!(v.len(), 1);
        assert_eq!(v[0].label, "N");
        assert_eq!((v[0].g, v[0].apk), (3, 1));
    }

    #[test]
    fn intersections_of_pencil_with_chain() {
        let v = enumerate_pencil_cases(0);
        let g = v.iter().find(|c| c.label == "0g").unwrap();
        assert_eq!((g.a_f(), g.a_g(), g.a_h()), (0, 1, 0));
        let b = v.iter().find(|c| c.label == "0b").unwrap();
        assert_eq!((b.a_f(), b.a_g(), b.a_h()), (1, 0, 0));
    }

    #[test]
    fn exact_residue_loses_cases() {
        let opts = PencilOptions { congruences: true, q_residue: QResidue::Exact };
        let (v, _) = enumerate_pencil_cases_with(0, &opts);
        assert_eq!(v.len(), 6);
    }
}
