//! Integer intersection theory on blow-ups of the plane and of Hirzebruch
//! surfaces.
//!
//! Exceptional classes have square −1 and coefficient +1 in the canonical
//! class. That sign convention is used everywhere in the crate.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PicardError {
    #[error("classes live on different lattices ({0} vs {1})")]
    LatticeMismatch(String, String),
    #[error("gram matrix is not symmetric at ({0}, {1})")]
    Asymmetric(usize, usize),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },
    #[error("D^2 + DK = {0} is odd, genus would be a half integer")]
    HalfIntegerGenus(i64),
    #[error("index filter needs N^2 > 0, got {0}")]
    NotBig(i64),
    #[error("unknown basis label {0}")]
    UnknownLabel(String),
}

/// Symmetric integer Gram matrix with a canonical class.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntersectionLattice {
    pub id: String,
    pub basis: Vec<String>,
    pub gram: Vec<Vec<i64>>,
    pub canonical: Vec<i64>,
}

impl IntersectionLattice {
    pub fn new(
        id: impl Into<String>,
        basis: Vec<String>,
        gram: Vec<Vec<i64>>,
        canonical: Vec<i64>,
    ) -> Result<Self, PicardError> {
        let n = basis.len();
        if gram.len() != n {
            return Err(PicardError::Dimension { expected: n, got: gram.len() });
        }
        for row in &gram {
            if row.len() != n {
                return Err(PicardError::Dimension { expected: n, got: row.len() });
            }
        }
        if canonical.len() != n {
            return Err(PicardError::Dimension { expected: n, got: canonical.len() });
        }
        for i in 0..n {
            for j in 0..i {
                if gram[i][j] != gram[j][i] {
                    return Err(PicardError::Asymmetric(i, j));
                }
            }
        }
        Ok(IntersectionLattice { id: id.into(), basis, gram, canonical })
    }

    /// P² blown up at `n` points: basis H, E1..En.
    pub fn plane(n: usize) -> Self {
        let mut lat = IntersectionLattice {
            id: "P2".into(),
            basis: vec!["H".into()],
            gram: vec![vec![1]],
            canonical: vec![-3],
        };
        for _ in 0..n {
            lat = lat.blow_up();
        }
        lat
    }

    /// Hirzebruch surface F_a with basis (c, f).
    pub fn hirzebruch(a: i64) -> Self {
        IntersectionLattice {
            id: format!("F{a}"),
            basis: vec!["c".into(), "f".into()],
            gram: vec![vec![-a, 1], vec![1, 0]],
            canonical: vec![-2, -(a + 2)],
        }
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    /// Adds one exceptional class orthogonal to everything before it.
    pub fn blow_up(&self) -> Self {
        let k = self.basis.iter().filter(|b| b.starts_with('E')).count() + 1;
        self.blow_up_named(format!("E{k}"))
    }

    pub fn blow_up_named(&self, label: impl Into<String>) -> Self {
        let n = self.rank();
        let mut gram: Vec<Vec<i64>> = self
            .gram
            .iter()
            .map(|r| {
                let mut r = r.clone();
                r.push(0);
                r
            })
            .collect();
        let mut last = vec![0; n + 1];
        last[n] = -1;
        gram.push(last);
        let mut basis = self.basis.clone();
        basis.push(label.into());
        let mut canonical = self.canonical.clone();
        canonical.push(1);
        let id = match self.id.split_once('+') {
            Some((head, tail)) => format!("{head}+{}", tail.parse::<usize>().unwrap_or(0) + 1),
            None => format!("{}+1", self.id),
        };
        IntersectionLattice { id, basis, gram, canonical }
    }

    pub fn into_arc(self) -> Arc<Self> {
        Arc::new(self)
    }

    pub fn form(&self, a: &[i64], b: &[i64]) -> i64 {
        let mut s = 0;
        for (i, ai) in a.iter().enumerate() {
            if *ai == 0 {
                continue;
            }
            for (j, bj) in b.iter().enumerate() {
                s += ai * self.gram[i][j] * bj;
            }
        }
        s
    }

    pub fn index_of(&self, label: &str) -> Result<usize, PicardError> {
        self.basis
            .iter()
            .position(|b| b == label)
            .ok_or_else(|| PicardError::UnknownLabel(label.to_string()))
    }
}

/// Integer combination of basis classes on a fixed lattice.
#[derive(Clone, PartialEq, Eq)]
pub struct DivisorClass {
    pub lattice: Arc<IntersectionLattice>,
    pub coeffs: Vec<i64>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct DivisorJson {
    pub lattice_id: String,
    pub coeffs: Vec<i64>,
}

impl DivisorClass {
    pub fn new(lattice: &Arc<IntersectionLattice>, coeffs: Vec<i64>) -> Result<Self, PicardError> {
        if coeffs.len() != lattice.rank() {
            return Err(PicardError::Dimension { expected: lattice.rank(), got: coeffs.len() });
        }
        Ok(DivisorClass { lattice: Arc::clone(lattice), coeffs })
    }

    pub fn zero(lattice: &Arc<IntersectionLattice>) -> Self {
        DivisorClass { lattice: Arc::clone(lattice), coeffs: vec![0; lattice.rank()] }
    }

    pub fn basis(lattice: &Arc<IntersectionLattice>, i: usize) -> Self {
        let mut d = Self::zero(lattice);
        d.coeffs[i] = 1;
        d
    }

    pub fn named(lattice: &Arc<IntersectionLattice>, label: &str) -> Result<Self, PicardError> {
        Ok(Self::basis(lattice, lattice.index_of(label)?))
    }

    pub fn canonical(lattice: &Arc<IntersectionLattice>) -> Self {
        DivisorClass { lattice: Arc::clone(lattice), coeffs: lattice.canonical.clone() }
    }

    /// Plane class dH − Σ m_i E_i.
    pub fn plane_curve(lattice: &Arc<IntersectionLattice>, d: i64, mults: &[i64]) -> Self {
        let mut c = Self::zero(lattice);
        c.coeffs[0] = d;
        for (i, m) in mults.iter().enumerate() {
            c.coeffs[i + 1] = -m;
        }
        c
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| *c == 0)
    }

    /// Intersection with another class on the same lattice.
    ///
    /// # Panics
    /// On a lattice mismatch; use [`intersect`] for the checked form.
    pub fn dot(&self, other: &DivisorClass) -> i64 {
        intersect(self, other).expect("lattice mismatch")
    }

    pub fn square(&self) -> i64 {
        self.dot(self)
    }

    pub fn dot_k(&self) -> i64 {
        self.lattice.form(&self.coeffs, &self.lattice.canonical)
    }

    pub fn to_json(&self) -> DivisorJson {
        DivisorJson { lattice_id: self.lattice.id.clone(), coeffs: self.coeffs.clone() }
    }

    fn zip(&self, other: &DivisorClass, f: impl Fn(i64, i64) -> i64) -> DivisorClass {
        assert!(same_lattice(self, other), "lattice mismatch");
        DivisorClass {
            lattice: Arc::clone(&self.lattice),
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| f(*a, *b)).collect(),
        }
    }
}

impl fmt::Debug for DivisorClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for DivisorClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (c, name) in self.coeffs.iter().zip(&self.lattice.basis) {
            if *c == 0 {
                continue;
            }
            let sign = if *c < 0 { "-" } else if first { "" } else { "+" };
            let mag = c.abs();
            if mag == 1 {
                write!(f, "{sign}{name}")?;
            } else {
                write!(f, "{sign}{mag}{name}")?;
            }
            first = false;
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

fn same_lattice(a: &DivisorClass, b: &DivisorClass) -> bool {
    Arc::ptr_eq(&a.lattice, &b.lattice) || a.lattice == b.lattice
}

impl Add for &DivisorClass {
    type Output = DivisorClass;
    fn add(self, rhs: &DivisorClass) -> DivisorClass {
        self.zip(rhs, |a, b| a + b)
    }
}

impl Sub for &DivisorClass {
    type Output = DivisorClass;
    fn sub(self, rhs: &DivisorClass) -> DivisorClass {
        self.zip(rhs, |a, b| a - b)
    }
}

impl Add for DivisorClass {
    type Output = DivisorClass;
    fn add(self, rhs: DivisorClass) -> DivisorClass {
        &self + &rhs
    }
}

impl Sub for DivisorClass {
    type Output = DivisorClass;
    fn sub(self, rhs: DivisorClass) -> DivisorClass {
        &self - &rhs
    }
}

impl Neg for &DivisorClass {
    type Output = DivisorClass;
    fn neg(self) -> DivisorClass {
        DivisorClass {
            lattice: Arc::clone(&self.lattice),
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl Mul<&DivisorClass> for i64 {
    type Output = DivisorClass;
    fn mul(self, rhs: &DivisorClass) -> DivisorClass {
        DivisorClass {
            lattice: Arc::clone(&rhs.lattice),
            coeffs: rhs.coeffs.iter().map(|c| self * c).collect(),
        }
    }
}

impl Mul<DivisorClass> for i64 {
    type Output = DivisorClass;
    fn mul(self, rhs: DivisorClass) -> DivisorClass {
        self * &rhs
    }
}

pub fn intersect(d1: &DivisorClass, d2: &DivisorClass) -> Result<i64, PicardError> {
    if !same_lattice(d1, d2) {
        return Err(PicardError::LatticeMismatch(d1.lattice.id.clone(), d2.lattice.id.clone()));
    }
    Ok(d1.lattice.form(&d1.coeffs, &d2.coeffs))
}

/// 1 + (D² + DK)/2, refusing half integers.
pub fn arithmetic_genus(d: &DivisorClass) -> Result<i64, PicardError> {
    genus_from_numbers(d.square(), d.dot_k())
}

pub fn genus_from_numbers(d2: i64, dk: i64) -> Result<i64, PicardError> {
    let num = d2 + dk;
    if num.rem_euclid(2) != 0 {
        return Err(PicardError::HalfIntegerGenus(num));
    }
    Ok(1 + num / 2)
}

/// Index theorem test: with a = DN and b = N², returns whether (bD − aN)² ≤ 0.
pub fn hodge_index_filter(d: &DivisorClass, n: &DivisorClass) -> Result<bool, PicardError> {
    let b = intersect(n, n)?;
    let a = intersect(d, n)?;
    let d2 = intersect(d, d)?;
    index_ok(d2, a, b)
}

/// Same test from the numbers D², DN, N² alone.
pub fn index_ok(d2: i64, dn: i64, n2: i64) -> Result<bool, PicardError> {
    if n2 <= 0 {
        return Err(PicardError::NotBig(n2));
    }
    // (bD − aN)² = b²D² − 2ab·a + a²b = b(bD² − a²)
    Ok(n2 * (n2 * d2 - dn * dn) <= 0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn plane_gram_and_canonical() {
        let p = IntersectionLattice::plane(3).into_arc();
        let h = DivisorClass::named(&p, "H").unwrap();
        let e1 = DivisorClass::named(&p, "E1").unwrap();
        assert_eq!(h.square(), 1);
        assert_eq!(e1.square(), -1);
        assert_eq!(h.dot(&e1), 0);
        assert_eq!(p.canonical, vec![-3, 1, 1, 1]);
    }

    #[test]
    fn fourteen_blowups() {
        let p = IntersectionLattice::plane(14).into_arc();
        assert_eq!(p.rank(), 15);
        assert_eq!(DivisorClass::canonical(&p).square(), 9 - 14);
    }

    #[test]
    fn blow_up_is_isometric() {
        let p = IntersectionLattice::plane(2);
        let q = p.blow_up();
        let a = [2, -1, 1];
        let b = [1, 1, -1];
        let a2 = [2, -1, 1, 0];
        let b2 = [1, 1, -1, 0];
        assert_eq!(p.form(&a, &b), q.form(&a2, &b2));
        assert_eq!(q.canonical, vec![-3, 1, 1, 1]);
    }

    #[test]
    fn hirzebruch_canonical() {
        let f = IntersectionLattice::hirzebruch(2).into_arc();
        let k = DivisorClass::canonical(&f);
        // K² = 8 on every Hirzebruch surface
        assert_eq!(k.square(), 8);
        let c = DivisorClass::named(&f, "c").unwrap();
        assert_eq!(arithmetic_genus(&c).unwrap(), 0);
    }

    #[test]
    fn genus_line_and_parity() {
        let p = IntersectionLattice::plane(1).into_arc();
        let line = DivisorClass::plane_curve(&p, 1, &[0]);
        assert_eq!(arithmetic_genus(&line).unwrap(), 0);
        assert_eq!(genus_from_numbers(1, 0), Err(PicardError::HalfIntegerGenus(1)));
    }

    #[test]
    fn index_filter_examples() {
        // D with DN = 2, D² = 2 against N² = 3
        assert!(!index_ok(2, 2, 3).unwrap());
        assert!(index_ok(3, 3, 3).unwrap());
        assert!(index_ok(0, 0, 1).is_ok());
        assert_eq!(index_ok(0, 0, 0), Err(PicardError::NotBig(0)));
    }

    #[test]
    fn mismatch_is_an_error() {
        let p = IntersectionLattice::plane(1).into_arc();
        let q = IntersectionLattice::plane(2).into_arc();
        let a = DivisorClass::zero(&p);
        let b = DivisorClass::zero(&q);
        assert!(matches!(intersect(&a, &b), Err(PicardError::LatticeMismatch(..))));
    }

    #[test]
    fn lattice_json_roundtrip() {
        let p = IntersectionLattice::plane(2);
        let s = serde_json::to_string(&p).unwrap();
        assert!(s.contains("\"gram\""));
        let back: IntersectionLattice = serde_json::from_str(&s).unwrap();
        assert_eq!(back, p);
    }
}
