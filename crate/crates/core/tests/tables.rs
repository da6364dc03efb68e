mod common;

use common::*;
use polyknot_core::certify::certify_knot;
use polyknot_core::{
    embed_linear, extend_from_dim, project_linear, truncate_to_dim, CertifyOptions, CoefficientTable, Scalar,
};
use proptest::prelude::*;

proptest! {
    #[test]
    fn normalization_is_idempotent(k in any_knot()) {
        let once = CoefficientTable::from_entries(k.table().iter().map(|(i, v)| (*i, v.clone()))).unwrap();
        let twice = CoefficientTable::from_entries(once.iter().map(|(i, v)| (*i, v.clone()))).unwrap();
        prop_assert_eq!(&once, k.table());
        prop_assert_eq!(once, twice);
        prop_assert!(k.table().iter().all(|(_, v)| !v.is_exact_zero()));
    }

    #[test]
    fn projection_inverts_embedding(x in sequence_point()) {
        let g = embed_linear(&x);
        prop_assert_eq!(g.dimension(), x.max_index());
        prop_assert!(g.table().indices().all(|i| i.power == 1));
        prop_assert_eq!(project_linear(&g).unwrap(), x);
    }

    #[test]
    fn truncation_and_extension_are_inverse(x in sequence_point(), extra in 0u32..3) {
        let n = x.max_index() + extra;
        let y = truncate_to_dim(&x, n).unwrap();
        prop_assert_eq!(y.len(), n as usize);
        prop_assert_eq!(&extend_from_dim(&y).unwrap(), &x);
        prop_assert_eq!(truncate_to_dim(&extend_from_dim(&y).unwrap(), n).unwrap(), y);
    }

    #[test]
    fn certified_knots_have_a_linear_part(k in exact_knot(4)) {
        let (k, _) = certify_knot(k, &CertifyOptions::default());
        if k.is_certified() {
            let x = project_linear(&k).unwrap();
            prop_assert!(x.iter().any(|(_, v)| !v.contains_zero()));
        }
    }

    #[test]
    fn truncation_rejects_wide_support(x in sequence_point()) {
        let n = x.max_index() - 1;
        prop_assert!(truncate_to_dim(&x, n).is_err());
        let zeros = vec![Scalar::zero(); n as usize + 1];
        prop_assert!(extend_from_dim(&zeros).is_err());
    }
}
