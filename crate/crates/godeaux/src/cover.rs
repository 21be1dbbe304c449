//! Invariant bookkeeping for the quotient by an order-3 automorphism.

use num_rational::Ratio;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::picard::{DivisorClass, IntersectionLattice};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CoverError {
    #[error("R_0K_S = {0} outside [0, 1]")]
    R0kRange(i64),
    #[error("inconsistent ramification data: {0}")]
    Inconsistent(String),
    #[error("{what} = {value} is not an integer")]
    NotIntegral { what: &'static str, value: Ratio<i64> },
    #[error("K_Y^2 formulas disagree: {0} vs {1}")]
    FormulaMismatch(Ratio<i64>, Ratio<i64>),
    #[error("h0 pair out of range: {0}")]
    H0Range(String),
    #[error("no integral eigenvalue split for ell = {0}")]
    NoSplit(i64),
}

/// K_S² = 1, χ = 1, p_g = 0. Nothing else can be built.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct GodeauxContext {
    ks2: i64,
    chi: i64,
    pg: i64,
}

impl Default for GodeauxContext {
    fn default() -> Self {
        Self::new()
    }
}

impl GodeauxContext {
    pub const fn new() -> Self {
        GodeauxContext { ks2: 1, chi: 1, pg: 0 }
    }
    pub fn ks2(&self) -> i64 {
        self.ks2
    }
    pub fn chi(&self) -> i64 {
        self.chi
    }
    pub fn pg(&self) -> i64 {
        self.pg
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RamificationData {
    pub r0k: i64,
    pub r0sq: i64,
    pub ell: i64,
    pub gamma_sq: Option<i64>,
    pub h1: i64,
    pub h2: i64,
}

impl RamificationData {
    pub fn new(
        r0k: i64,
        r0sq: i64,
        ell: i64,
        gamma_sq: Option<i64>,
        h1: i64,
        h2: i64,
    ) -> Result<Self, CoverError> {
        let r = RamificationData { r0k, r0sq, ell, gamma_sq, h1, h2 };
        r.validate()?;
        Ok(r)
    }

    fn validate(&self) -> Result<(), CoverError> {
        if !(0..=1).contains(&self.r0k) {
            return Err(CoverError::R0kRange(self.r0k));
        }
        if self.ell < 0 || self.h1 < 0 || self.h2 < 0 {
            return Err(CoverError::Inconsistent("negative count".into()));
        }
        match (self.r0k, self.gamma_sq) {
            (0, None) if self.r0sq == -2 * self.ell => {}
            (1, Some(g)) if g <= 1 && self.r0sq == g - 2 * self.ell => {}
            _ => {
                return Err(CoverError::Inconsistent(format!(
                    "R_0^2 = {} does not match ell = {} and Gamma^2 = {:?}",
                    self.r0sq, self.ell, self.gamma_sq
                )))
            }
        }
        let budget = fixed_point_budget_raw(self.r0k, self.r0sq)?;
        if self.h1 + 2 * self.h2 != budget {
            return Err(CoverError::Inconsistent(format!(
                "h1 + 2h2 = {} but the fixed point formula gives {budget}",
                self.h1 + 2 * self.h2
            )));
        }
        Ok(())
    }

    /// R_0K_S = 0, h_2 = 1.
    pub fn case_iii(ell: i64) -> Result<Self, CoverError> {
        Self::solve_h1(0, -2 * ell, ell, None, 1)
    }

    /// R_0K_S = 0, h_2 = 4.
    pub fn case_ii(ell: i64) -> Result<Self, CoverError> {
        Self::solve_h1(0, -2 * ell, ell, None, 4)
    }

    /// R_0K_S = 1, h_2 = 3.
    pub fn case_i(ell: i64, gamma_sq: i64) -> Result<Self, CoverError> {
        Self::solve_h1(1, gamma_sq - 2 * ell, ell, Some(gamma_sq), 3)
    }

    fn solve_h1(
        r0k: i64,
        r0sq: i64,
        ell: i64,
        gamma_sq: Option<i64>,
        h2: i64,
    ) -> Result<Self, CoverError> {
        let h1 = fixed_point_budget_raw(r0k, r0sq)? - 2 * h2;
        Self::new(r0k, r0sq, ell, gamma_sq, h1, h2)
    }
}

fn integral(what: &'static str, v: Ratio<i64>) -> Result<i64, CoverError> {
    if v.is_integer() {
        Ok(v.to_integer())
    } else {
        Err(CoverError::NotIntegral { what, value: v })
    }
}

fn fixed_point_budget_raw(r0k: i64, r0sq: i64) -> Result<i64, CoverError> {
    let v = integral("h1 + 2h2", Ratio::from_integer(6) + Ratio::new(3 * r0k - r0sq, 2))?;
    if v < 0 {
        return Err(CoverError::Inconsistent(format!("negative fixed point count {v}")));
    }
    Ok(v)
}

/// h_1 + 2h_2 = 6 + (3R_0K_S − R_0²)/2.
pub fn fixed_point_budget(r: &RamificationData) -> Result<i64, CoverError> {
    fixed_point_budget_raw(r.r0k, r.r0sq)
}

/// K_Y² through both transfer formulas; they must agree.
pub fn quotient_k2(g: &GodeauxContext, r: &RamificationData) -> Result<i64, CoverError> {
    let (a, b) = quotient_k2_routes(g, r);
    if a != b {
        return Err(CoverError::FormulaMismatch(a, b));
    }
    integral("K_Y^2", a)
}

/// The two K_Y² values before comparison: through h_1 + 3h_2, and through
/// the fixed-point budget eliminated.
pub fn quotient_k2_routes(g: &GodeauxContext, r: &RamificationData) -> (Ratio<i64>, Ratio<i64>) {
    let ks2 = Ratio::from_integer(g.ks2());
    let r0sq = Ratio::from_integer(r.r0sq);
    let r0k = Ratio::from_integer(r.r0k);
    let three = Ratio::from_integer(3);
    let a = (ks2 - Ratio::from_integer(r.h1 + 3 * r.h2) + Ratio::from_integer(4) * r0sq
        - Ratio::from_integer(4) * r0k)
        / three;
    let b = (ks2 - Ratio::from_integer(6 + r.h2) + Ratio::new(9, 2) * r0sq - Ratio::new(11, 2) * r0k)
        / three;
    (a, b)
}

/// K_X² = 3K_Y² − 4R_0² + 4R_0K_S.
pub fn kx2(r: &RamificationData, ky2: i64) -> i64 {
    3 * ky2 - 4 * r.r0sq + 4 * r.r0k
}

/// K_X² read off the fixed points: K_S² − (h_1 + 3h_2).
pub fn kx2_from_fixed(g: &GodeauxContext, r: &RamificationData) -> i64 {
    g.ks2() - (r.h1 + 3 * r.h2)
}

/// (h⁰(N), h⁰(2K_Y + B)) = (2 + R_0K_S, (2h_2 − 2 − R_0K_S)/3).
pub fn h0_pair(r0k: i64, h2: i64) -> Result<(i64, i64), CoverError> {
    let first = 2 + r0k;
    if first > 3 {
        return Err(CoverError::H0Range(format!("h0(N) = {first} > 3")));
    }
    let second = integral("h0(2K_Y+B)", Ratio::new(2 * h2 - 2 - r0k, 3))?;
    if !(0..=2).contains(&second) {
        return Err(CoverError::H0Range(format!("h0(2K_Y+B) = {second} not in [0, 2]")));
    }
    Ok((first, second))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CaseRecord {
    pub id: String,
    pub r0k: i64,
    pub h2: i64,
    pub ell: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gamma_sq: Option<i64>,
    pub h1: Option<i64>,
    pub ky2: Option<i64>,
    #[serde(rename = "h0_N")]
    pub h0_n: i64,
    #[serde(rename = "h0_2KYB")]
    pub h0_2kyb: i64,
}

impl CaseRecord {
    /// Fills ell-dependent fields. `gamma_sq` is needed only for case (i).
    pub fn with_invariants(&self, ell: i64, gamma_sq: Option<i64>) -> Result<CaseRecord, CoverError> {
        let r = match (self.r0k, gamma_sq) {
            (1, Some(g)) => RamificationData::case_i(ell, g)?,
            (1, None) => return Err(CoverError::Inconsistent("case (i) needs Gamma^2".into())),
            (_, _) => RamificationData::solve_h1(0, -2 * ell, ell, None, self.h2)?,
        };
        if r.h2 != self.h2 {
            return Err(CoverError::Inconsistent("h2 changed".into()));
        }
        let ky2 = quotient_k2(&GodeauxContext::new(), &r)?;
        Ok(CaseRecord {
            ell: Some(ell),
            gamma_sq: r.gamma_sq,
            h1: Some(r.h1),
            ky2: Some(ky2),
            ..self.clone()
        })
    }
}

fn case_name(r0k: i64, h2: i64) -> String {
    match (r0k, h2) {
        (1, 3) => "i".into(),
        (0, 4) => "ii".into(),
        (0, 1) => "iii".into(),
        _ => format!("r{r0k}h{h2}"),
    }
}

pub const MAIN_CASE_H2_BOUND: i64 = 20;

pub fn enumerate_main_cases() -> Vec<CaseRecord> {
    enumerate_main_cases_up_to(MAIN_CASE_H2_BOUND)
}

/// The gate over R_0K_S ∈ {0, 1} and h_2 ≤ `h2_max`.
pub fn enumerate_main_cases_up_to(h2_max: i64) -> Vec<CaseRecord> {
    let mut out = Vec::new();
    for r0k in 0..=1 {
        for h2 in 0..=h2_max {
            if let Ok((h0n, h0b)) = h0_pair(r0k, h2) {
                out.push(CaseRecord {
                    id: case_name(r0k, h2),
                    r0k,
                    h2,
                    ell: None,
                    gamma_sq: None,
                    h1: None,
                    ky2: None,
                    h0_n: h0n,
                    h0_2kyb: h0b,
                });
            }
        }
    }
    out.sort_by_key(|c| (std::cmp::Reverse(c.r0k), std::cmp::Reverse(c.h2)));
    out
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EigenSplit {
    pub h11: i64,
    pub h12: i64,
    /// h11 values passing the mod-3 congruence on L_1K_Y.
    pub congruent: Vec<i64>,
    /// Congruent values that fail L_1² + L_1K_Y = −2, with the value obtained.
    pub rejected: Vec<(i64, Ratio<i64>)>,
}

/// Splits the h_1 = 4 + ℓ points of case (iii) by eigenvalue.
///
/// Uses 3L_1K = 4ℓ + h_11 + 2h_12 + 3 and 9L_1² = −6ℓ − 3h_11 − 12h_12 − 15,
/// with L_1² + L_1K = −2.
pub fn eigenvalue_split(ell: i64) -> Result<EigenSplit, CoverError> {
    let h1 = 4 + ell;
    let mut congruent = Vec::new();
    let mut rejected = Vec::new();
    let mut found = Vec::new();
    for h11 in 0..=h1 {
        let h12 = h1 - h11;
        let lk3 = 4 * ell + h11 + 2 * h12 + 3;
        if lk3 % 3 != 0 {
            continue;
        }
        congruent.push(h11);
        let l2 = Ratio::new(-6 * ell - 3 * h11 - 12 * h12 - 15, 9);
        let total = l2 + Ratio::new(lk3, 3);
        if total == Ratio::from_integer(-2) {
            found.push((h11, h12));
        } else {
            rejected.push((h11, total));
        }
    }
    match found.as_slice() {
        [(h11, h12)] => Ok(EigenSplit { h11: *h11, h12: *h12, congruent, rejected }),
        _ => Err(CoverError::NoSplit(ell)),
    }
}

/// Branch data of the triple cover on a formal lattice: each component with
/// its eigenvalue exponent (1 or 2).
#[derive(Debug, Clone)]
pub struct TripleCoverData {
    pub components: Vec<(String, DivisorClass, u8)>,
}

impl TripleCoverData {
    /// Σ exponent·C, the class of 3L_1.
    pub fn three_l1(&self) -> Option<DivisorClass> {
        let mut it = self.components.iter();
        let (_, c0, e0) = it.next()?;
        let mut acc = i64::from(*e0) * c0;
        for (_, c, e) in it {
            acc = acc + i64::from(*e) * c;
        }
        Some(acc)
    }

    /// (L_1², L_1K) as rationals.
    pub fn l1_numbers(&self) -> Option<(Ratio<i64>, Ratio<i64>)> {
        let t = self.three_l1()?;
        Some((Ratio::new(t.square(), 9), Ratio::new(t.dot_k(), 3)))
    }

    /// Formal model for case (iii): ℓ components of B_0 (square −6, K·B = 4),
    /// h_1 curves E' and F', H' (square −3, K· = 1), all disjoint, with
    /// `h11` of the E' on the first eigenvalue. K_Y is carried as an extra
    /// basis vector.
    pub fn case_iii_formal(ell: usize, h11: usize) -> TripleCoverData {
        let h1 = 4 + ell;
        let n = ell + h1 + 2;
        let mut labels = Vec::new();
        for i in 0..ell {
            labels.push(format!("B0_{}", i + 1));
        }
        for i in 0..h1 {
            labels.push(format!("E'{}", i + 1));
        }
        labels.push("F'".into());
        labels.push("H'".into());
        labels.push("K".into());
        // the last basis vector is K_Y itself, so K-degrees sit in its row
        let mut gram = vec![vec![0; n + 1]; n + 1];
        for i in 0..n {
            let (sq, k) = if i < ell { (-6, 4) } else { (-3, 1) };
            gram[i][i] = sq;
            gram[i][n] = k;
            gram[n][i] = k;
        }
        gram[n][n] = -2 - 3 * ell as i64;
        let mut canonical = vec![0; n + 1];
        canonical[n] = 1;
        let lat = IntersectionLattice::new("branch", labels.clone(), gram, canonical)
            .expect("symmetric lattice")
            .into_arc();
        let mut components = Vec::new();
        for (i, name) in labels.iter().take(n).enumerate() {
            let e = if i < ell {
                1
            } else if i < ell + h1 {
                if i - ell < h11 {
                    1
                } else {
                    2
                }
            } else if name == "F'" {
                1
            } else {
                2
            };
            components.push((name.clone(), DivisorClass::basis(&lat, i), e));
        }
        TripleCoverData { components }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn budgets() {
        let r = RamificationData::case_iii(3).unwrap();
        assert_eq!(r.h1, 7);
        let r = RamificationData::case_i(2, -3).unwrap();
        assert_eq!(r.h1, (3 + 3) / 2 + 2);
        assert!(RamificationData::case_ii(1).is_err());
        assert!(RamificationData::case_i(0, 0).is_err());
    }

    #[test]
    fn gamma_parity_rejected() {
        assert!(matches!(RamificationData::case_i(1, 0), Err(CoverError::NotIntegral { .. })));
    }

    #[test]
    fn ky2_values() {
        let g = GodeauxContext::new();
        for ell in 0..6 {
            let r = RamificationData::case_iii(ell).unwrap();
            assert_eq!(quotient_k2(&g, &r).unwrap(), -2 - 3 * ell);
        }
        for ell in 2..6 {
            let r = RamificationData::case_ii(ell).unwrap();
            assert_eq!(quotient_k2(&g, &r).unwrap(), -3 - 3 * ell);
        }
    }

    #[test]
    fn kx2_both_ways() {
        let g = GodeauxContext::new();
        let r = RamificationData::case_iii(0).unwrap();
        let ky2 = quotient_k2(&g, &r).unwrap();
        assert_eq!(kx2(&r, ky2), -6);
        assert_eq!(kx2_from_fixed(&g, &r), -6);
    }

    #[test]
    fn h0_values() {
        assert_eq!(h0_pair(1, 3), Ok((3, 1)));
        assert_eq!(h0_pair(0, 4), Ok((2, 2)));
        assert_eq!(h0_pair(0, 1), Ok((2, 0)));
        assert!(h0_pair(0, 7).is_err());
        assert!(h0_pair(1, 6).is_err());
        assert!(h0_pair(2, 4).is_err());
    }

    #[test]
    fn main_cases() {
        let v = enumerate_main_cases();
        let got: Vec<_> = v.iter().map(|c| (c.r0k, c.h2)).collect();
        assert_eq!(got, vec![(1, 3), (0, 4), (0, 1)]);
        assert_eq!(v[0].id, "i");
    }

    #[test]
    fn split_ell_one() {
        let s = eigenvalue_split(1).unwrap();
        assert_eq!((s.h11, s.h12), (2, 3));
        assert_eq!(s.congruent, vec![2, 5]);
        assert_eq!(s.rejected, vec![(5, Ratio::from_integer(0))]);
    }

    #[test]
    fn split_matches_formal_lattice() {
        for h11 in [2usize, 5] {
            let t = TripleCoverData::case_iii_formal(1, h11);
            let (l2, lk) = t.l1_numbers().unwrap();
            assert_eq!(l2, Ratio::from_integer(-9 + h11 as i64));
            assert_eq!(lk, Ratio::new(14 - h11 as i64, 3) + 1);
        }
    }

    #[test]
    fn with_invariants_fills() {
        let c = &enumerate_main_cases()[2];
        assert_eq!(c.ky2, None);
        let d = c.with_invariants(2, None).unwrap();
        assert_eq!((d.h1, d.ky2), (Some(6), Some(-8)));
    }
}
