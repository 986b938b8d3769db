mod common;

use proptest::prelude::*;

use rfl_core::coloring::{random_coloring, Color, EdgeColoring};
use rfl_core::graph::VertexSet;
use rfl_core::packing::{
    greedy_triangle_packing, max_bowtie_packing, max_prefix_triangle_cover, max_triangle_packing,
    max_weighted_packing, PackingBudget, WeightVector,
};
use rfl_core::verifiers::lemmaik_check;

fn budget() -> PackingBudget {
    PackingBudget::default()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn triangle_and_bowtie_packings_match_oracle(n in 3usize..=11, seed in any::<u64>()) {
        let c = random_coloring(n, seed).unwrap();
        for color in Color::BOTH {
            let p = max_triangle_packing(&c, color, &budget()).unwrap();
            p.validate(&c).unwrap();
            let want = common::max_packing_size(n, &common::triangles(&c, color));
            prop_assert_eq!(p.size() as u64, want);
            let greedy = greedy_triangle_packing(&c, color);
            greedy.validate(&c).unwrap();
            prop_assert!(greedy.size() <= p.size());
        }
        let b = max_bowtie_packing(&c, &budget()).unwrap();
        b.validate(&c).unwrap();
        prop_assert_eq!(b.size() as u64, common::max_packing_size(n, &common::bowtie_sets(&c)));
    }

    #[test]
    fn prefix_cover_matches_oracle(n in 3usize..=12, k in 0usize..=12, seed in any::<u64>()) {
        let c = random_coloring(n, seed).unwrap();
        let prefix = if k >= 64 { u64::MAX } else { (1u64 << k) - 1 };
        for color in Color::BOTH {
            let got = max_prefix_triangle_cover(&c, color, k, &budget()).unwrap();
            got.validate(&c).unwrap();
            let want = common::max_disjoint(n, &common::triangles(&c, color), |m| (m & prefix).count_ones() as u64);
            prop_assert_eq!(got.total_weight, want);
            prop_assert_eq!((got.covered().bits() & prefix).count_ones() as u64, got.total_weight);
        }
    }

    #[test]
    fn weighted_packing_matches_oracle(
        n in 2usize..=12,
        raw in prop::collection::vec((any::<u64>(), 1u64..20), 0..40),
    ) {
        let full = (1u64 << n) - 1;
        let (masks, weights): (Vec<u64>, Vec<u64>) = raw
            .into_iter()
            .map(|(m, w)| (m & full, w))
            .filter(|(m, _)| *m != 0)
            .unzip();
        let cands: Vec<VertexSet> = masks.iter().map(|&m| VertexSet::from_bits(m)).collect();
        let sel = max_weighted_packing(&cands, &WeightVector(weights.clone()), &budget()).unwrap();
        let mut used = 0u64;
        let mut total = 0;
        for &i in &sel.chosen {
            prop_assert_eq!(used & masks[i], 0);
            used |= masks[i];
            total += weights[i];
        }
        prop_assert_eq!(total, sel.total_weight);
        let weight_of: std::collections::HashMap<u64, u64> = masks.iter().zip(&weights).fold(
            std::collections::HashMap::new(),
            |mut acc, (&m, &w)| {
                let e = acc.entry(m).or_insert(0);
                *e = (*e).max(w);
                acc
            },
        );
        let want = common::max_disjoint(n, &masks, |m| weight_of[&m]);
        prop_assert_eq!(sel.total_weight, want);
    }

    #[test]
    fn color_swap_exchanges_packings(n in 3usize..=10, seed in any::<u64>()) {
        let c = random_coloring(n, seed).unwrap();
        let s = c.swapped();
        prop_assert_eq!(
            max_triangle_packing(&c, Color::Red, &budget()).unwrap().size(),
            max_triangle_packing(&s, Color::Blue, &budget()).unwrap().size()
        );
        prop_assert_eq!(
            max_bowtie_packing(&c, &budget()).unwrap().size(),
            max_bowtie_packing(&s, &budget()).unwrap().size()
        );
    }

    #[test]
    fn bowtie_family_never_beats_triangle_family(n in 5usize..=12, seed in any::<u64>()) {
        let c = random_coloring(n, seed).unwrap();
        let r = lemmaik_check(&c, &budget()).unwrap();
        prop_assert!(r.bowties <= r.triangles);
    }
}

#[test]
fn budgets_are_enforced() {
    let tight = PackingBudget { triangle_vertices: 8, bowtie_vertices: 8, candidates: 10 };
    let c = random_coloring(9, 1).unwrap();
    assert!(max_triangle_packing(&c, Color::Red, &tight).is_err());
    assert!(max_bowtie_packing(&c, &tight).is_err());
    let red = EdgeColoring::monochromatic(8, Color::Red).unwrap();
    // 56 candidate triangles over the cap of 10
    assert!(max_triangle_packing(&red, Color::Red, &tight).is_err());
}
