use hpt_bv::ce_complex::CeComplex;
use hpt_bv::lie_algebra::builtin;
use hpt_bv::linalg::SparseVec;
use hpt_bv::multivector::{mv_wedge, MultiVector};
use hpt_bv::scalar;
use hpt_bv::sdr::{isotrope_sdr, parse_isotrope, verify_sdr};
use proptest::prelude::*;

fn form(dim: usize, coeffs: Vec<i64>) -> MultiVector {
    let v = SparseVec::from_pairs(coeffs.into_iter().enumerate().map(|(i, c)| (i, scalar::int(c))));
    MultiVector::from_coeffs(dim, v)
}

fn forms(dim: usize) -> impl Strategy<Value = MultiVector> {
    prop::collection::vec(-3i64..=3, 1 << dim).prop_map(move |c| form(dim, c))
}

proptest! {
    #[test]
    fn wedge_is_associative(a in forms(4), b in forms(4), c in forms(4)) {
        let left = mv_wedge(&mv_wedge(&a, &b).unwrap(), &c).unwrap();
        let right = mv_wedge(&a, &mv_wedge(&b, &c).unwrap()).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn d_is_a_derivation_squaring_to_zero(a in forms(3), b in forms(3)) {
        let ce = CeComplex::new(&builtin("su2").unwrap()).unwrap();
        let d = |m: &MultiVector| MultiVector::from_coeffs(3, ce.d.apply(&m.coeffs));
        prop_assert!(d(&d(&a)).is_zero());
        // d(a∧b) = da∧b + (−1)^k a∧db on homogeneous a
        for k in 0..=3 {
            let ak = a.homogeneous(k);
            let lhs = d(&mv_wedge(&ak, &b).unwrap());
            let sign = scalar::int(if k % 2 == 0 { 1 } else { -1 });
            let rhs = mv_wedge(&d(&ak), &b).unwrap().plus(&mv_wedge(&ak, &d(&b)).unwrap().scaled(&sign));
            prop_assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn isotrope_retracts_are_deformation_retracts(c in prop::collection::vec(-2i64..=2, 3)) {
        prop_assume!(c.iter().any(|&x| x != 0));
        let ce = CeComplex::new(&builtin("su2").unwrap()).unwrap();
        let spec = format!("{}e1 + {}e2 + {}e3", c[0], c[1], c[2]).replace("+ -", "- ");
        let s = isotrope_sdr(&ce, &parse_isotrope(&spec, 3).unwrap()).unwrap();
        prop_assert!(verify_sdr(&s).all_pass());
    }
}
