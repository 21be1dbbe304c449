use godeaux::adjoint::{LadderBranch, LadderModel};
use godeaux::fibration::{min_contribution, node_bound, Fiber, TrappedComponent};
use godeaux::picard::{DivisorClass, IntersectionLattice};
use proptest::prelude::*;

fn coeffs(n: usize) -> impl Strategy<Value = Vec<i64>> {
    proptest::collection::vec(-30i64..30, n)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn form_is_bilinear_and_symmetric(a in coeffs(12), b in coeffs(12), c in coeffs(12), x in -6i64..6, y in -6i64..6) {
        let lat = IntersectionLattice::plane(11).into_arc();
        let d = |v: &Vec<i64>| DivisorClass::new(&lat, v.clone()).unwrap();
        let comb: Vec<i64> = a.iter().zip(&b).map(|(p, q)| x * p + y * q).collect();
        prop_assert_eq!(d(&comb).dot(&d(&c)), x * d(&a).dot(&d(&c)) + y * d(&b).dot(&d(&c)));
        prop_assert_eq!(d(&a).dot(&d(&b)), d(&b).dot(&d(&a)));
    }

    #[test]
    fn hirzebruch_form_is_symmetric(a in 0i64..5, u in coeffs(2), v in coeffs(2)) {
        let lat = IntersectionLattice::hirzebruch(a).into_arc();
        let (p, q) = (DivisorClass::new(&lat, u).unwrap(), DivisorClass::new(&lat, v).unwrap());
        prop_assert_eq!(p.dot(&q), q.dot(&p));
    }

    /// Adjunction: D² + DK = 2p_a − 2 is even for every class.
    #[test]
    fn adjunction_parity(v in coeffs(10)) {
        let lat = IntersectionLattice::plane(9).into_arc();
        let d = DivisorClass::new(&lat, v).unwrap();
        prop_assert_eq!((d.square() + d.dot_k()).rem_euclid(2), 0);
    }

    #[test]
    fn ladder_classes_have_even_adjunction(k in 0usize..3, c in proptest::array::uniform6(-4i64..5)) {
        let br = [LadderBranch::ThreeEllMinus2, LadderBranch::ThreeEllMinus1, LadderBranch::ThreeEll][k];
        let (lo, hi) = br.ell_range();
        for ell in lo..=hi {
            let m = LadderModel::standard(br, ell).unwrap();
            let d = m.eval(&c).unwrap();
            prop_assert_eq!((d.square() + d.dot_k()).rem_euclid(2), 0);
        }
    }

    /// A chain of (−2)-curves closed up by a multiplicity-1 (−1)-curve at
    /// each end: every component's −C² is below the node bound.
    #[test]
    fn chain_fibers_bound_components(len in 1usize..7) {
        let k = len + 2;
        let mut inter = vec![vec![0i64; k]; k];
        for i in 0..k {
            inter[i][i] = if i == 0 || i == k - 1 { -1 } else { -2 };
            if i + 1 < k {
                inter[i][i + 1] = 1;
                inter[i + 1][i] = 1;
            }
        }
        let f = Fiber { name: format!("chain {len}"), mults: vec![1; k], pa: vec![0; k], inter: inter.clone() };
        let b = node_bound(&f).unwrap();
        for (i, row) in inter.iter().enumerate() {
            let c = TrappedComponent::new("C", row[i], 1, "");
            prop_assert!(b >= min_contribution(&c).unwrap());
        }
    }
}
