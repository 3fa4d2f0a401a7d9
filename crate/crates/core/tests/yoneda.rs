mod common;

use kanbench_core::fincat::yoneda;
use kanbench_core::presheaf::{enumerate_nat_trans, validate_presheaf};
use kanbench_core::Workspace;
use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::SeedableRng;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn nat_from_representable_counts_elements(seed in any::<u64>()) {
        let ws = Workspace::new();
        let mut rng = StdRng::seed_from_u64(seed);
        for b in common::bases(&ws) {
            let x = b.sample(&ws, &mut rng);
            prop_assert!(validate_presheaf(&x).is_empty());
            for c in b.base.objects().iter() {
                let y = yoneda(&b.base, c).unwrap();
                let n = enumerate_nat_trans(&y, &x).unwrap().count();
                prop_assert_eq!(n, x.set(c).len(), "{} at {}", b.name, b.base.name(c));
            }
        }
    }

    /// Every natural transformation out of `y(c)` is determined by where it
    /// sends the identity of `c`, and each element is hit once.
    #[test]
    fn yoneda_bijection_via_identity(seed in any::<u64>()) {
        let ws = Workspace::new();
        let mut rng = StdRng::seed_from_u64(seed);
        for b in common::bases(&ws) {
            let x = b.sample(&ws, &mut rng);
            for c in b.base.objects().iter() {
                let y = yoneda(&b.base, c).unwrap();
                let one = b.base.identity(c);
                let mut images: Vec<_> = enumerate_nat_trans(&y, &x).unwrap().map(|t| t.apply(c, one)).collect();
                images.sort();
                prop_assert_eq!(images, x.set(c).as_slice().to_vec());
            }
        }
    }
}
