//! Property tests for structural invariants that should hold on any
//! poset, driven by the seeded random generator.

use ordex_core::bounds::{base_digits, extraction_lower_bound};
use ordex_core::dimension::{
    dimension, has_dim_at_most_2, realizer_search, verify_realizer, DEFAULT_NODE_BUDGET,
};
use ordex_core::extremal::{ex_star_max_dim, SolveOptions};
use ordex_core::format::{parse_poset, write_poset};
use ordex_core::invariants::{
    extract_low_dim_subposet, height, max_antichain, min_chain_cover, width, ExtractionKind,
};
use ordex_core::{Poset, Subset};
use proptest::prelude::*;

fn small_poset() -> impl Strategy<Value = Poset> {
    (0usize..=14, 0.0f64..=1.0, any::<u64>())
        .prop_map(|(n, density, seed)| Poset::random(n, density, seed).unwrap())
}

proptest! {
    #[test]
    fn random_posets_satisfy_order_axioms(p in small_poset()) {
        prop_assert_eq!(p.verify_invariants(), Ok(()));
    }

    #[test]
    fn cover_relations_rebuild_the_poset(p in small_poset()) {
        let rebuilt = Poset::from_cover_relations(p.n(), &p.cover_relations()).unwrap();
        prop_assert_eq!(p, rebuilt);
    }

    #[test]
    fn text_format_round_trips(p in small_poset()) {
        let q = parse_poset(&write_poset(&p)).unwrap();
        prop_assert_eq!(p, q);
    }

    #[test]
    fn lex_product_is_associative(
        (a, b, c) in (1usize..=3, 1usize..=3, 1usize..=3),
        seeds in (any::<u64>(), any::<u64>(), any::<u64>()),
    ) {
        let p = Poset::random(a + 1, 0.5, seeds.0).unwrap();
        let q = Poset::random(b + 1, 0.5, seeds.1).unwrap();
        let r = Poset::random(c + 1, 0.5, seeds.2).unwrap();
        let left = p.lex_product(&q).unwrap().lex_product(&r).unwrap();
        let right = p.lex_product(&q.lex_product(&r).unwrap()).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn width_times_height_covers_everything(p in small_poset()) {
        // a chain partition of size width and an antichain partition of
        // size height both exist, so their product is at least n
        prop_assert!(width(&p) * height(&p) >= p.n());
    }

    #[test]
    fn chain_cover_matches_width_and_partitions(p in small_poset()) {
        let w = width(&p);
        let antichain = max_antichain(&p);
        prop_assert_eq!(antichain.members.len(), w);
        for (i, &x) in antichain.members.members().iter().enumerate() {
            for &y in &antichain.members.members()[i + 1..] {
                prop_assert!(p.is_incomparable(x, y));
            }
        }
        let cover = min_chain_cover(&p);
        prop_assert_eq!(cover.chains.len(), w);
        let mut seen = vec![false; p.n()];
        for chain in &cover.chains {
            for window in chain.windows(2) {
                prop_assert!(p.is_lt(window[0], window[1]));
            }
            for &x in chain {
                prop_assert!(!seen[x]);
                seen[x] = true;
            }
        }
        prop_assert!(seen.into_iter().all(|s| s));
    }

    #[test]
    fn extraction_meets_the_integer_guarantee(p in small_poset(), d in 2usize..=3) {
        prop_assume!(p.n() >= 1);
        let r = extract_low_dim_subposet(&p, d).unwrap();
        let guarantee = extraction_lower_bound(p.n() as u64, d as u64)
            .unwrap()
            .integer_guarantee as usize;
        prop_assert_eq!(r.integer_guarantee, guarantee);
        if d <= p.n() {
            prop_assert!(r.subset.len() >= r.integer_guarantee);
        }
        match &r.kind {
            ExtractionKind::Antichain => {
                let m = r.subset.members();
                for (i, &x) in m.iter().enumerate() {
                    for &y in &m[i + 1..] {
                        prop_assert!(p.is_incomparable(x, y));
                    }
                }
            }
            ExtractionKind::ChainUnion { chains } => {
                prop_assert!(chains.len() <= d);
                for chain in chains {
                    for window in chain.windows(2) {
                        prop_assert!(p.is_lt(window[0], window[1]));
                    }
                }
            }
        }
        // either way the induced dimension stays within d
        let induced = p.induced(&r.subset).unwrap();
        prop_assert!(width(&induced) <= d || has_dim_at_most_2(&induced).is_some());
    }

    #[test]
    fn dimension_two_is_hereditary(p in small_poset(), keep in any::<u64>()) {
        if let Some(r) = has_dim_at_most_2(&p) {
            prop_assert_eq!(verify_realizer(&p, &r), Ok(true));
            let members: Vec<usize> = (0..p.n()).filter(|x| keep >> (x % 64) & 1 == 1).collect();
            let sub = p.induced(&Subset::new(members)).unwrap();
            prop_assert!(has_dim_at_most_2(&sub).is_some());
        }
    }

    #[test]
    fn reported_dimension_is_tight(p in small_poset()) {
        prop_assume!(p.n() >= 1 && p.n() <= 10);
        let (d, realizer) = dimension(&p, DEFAULT_NODE_BUDGET).unwrap();
        prop_assert_eq!(realizer.len(), d.max(1));
        prop_assert_eq!(verify_realizer(&p, &realizer), Ok(true));
        if d >= 2 {
            // no realizer with one fewer extension
            let smaller = realizer_search(&p, d - 1, DEFAULT_NODE_BUDGET).unwrap();
            prop_assert!(smaller.is_none());
        }
    }

    #[test]
    fn exact_values_are_sandwiched(p in small_poset()) {
        prop_assume!(p.n() >= 1);
        let r = ex_star_max_dim(&p, 2, &SolveOptions::default());
        prop_assert!(r.exact);
        prop_assert!(r.value >= width(&p).min(p.n()).min(5));
        prop_assert!(r.value <= p.n());
        let sub = p.induced(&r.witness).unwrap();
        prop_assert_eq!(verify_realizer(&sub, &r.certificate), Ok(true));
    }

    #[test]
    fn union_additivity_for_dim_two(
        (n1, s1) in (1usize..=7, any::<u64>()),
        (n2, s2) in (1usize..=7, any::<u64>()),
    ) {
        let p = Poset::random(n1, 0.4, s1).unwrap();
        let q = Poset::random(n2, 0.4, s2).unwrap();
        let joined = p.disjoint_union(&q).unwrap();
        let opts = SolveOptions::default();
        let whole = ex_star_max_dim(&joined, 2, &opts);
        let left = ex_star_max_dim(&p, 2, &opts);
        let right = ex_star_max_dim(&q, 2, &opts);
        prop_assert!(whole.exact && left.exact && right.exact);
        prop_assert_eq!(whole.value, left.value + right.value);
    }

    #[test]
    fn digit_reconstruction_identity(n in any::<u64>(), base in 2u64..=1000) {
        let digits = base_digits(n, base).unwrap();
        prop_assert_eq!(digits.reconstruct(), n);
        prop_assert!(digits.digits.iter().all(|&a| a < base));
        if n > 0 {
            prop_assert!(*digits.digits.last().unwrap() > 0);
        }
    }
}
