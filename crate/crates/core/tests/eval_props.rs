mod common;

use codemix::{confusion, evaluate, report, Sentiment};
use proptest::prelude::*;

fn arb_labels(max: usize) -> impl Strategy<Value = (Vec<Sentiment>, Vec<Sentiment>)> {
    (1..=max).prop_flat_map(|n| {
        let one = prop::sample::select(Sentiment::ALL.to_vec());
        (prop::collection::vec(one.clone(), n), prop::collection::vec(one, n))
    })
}

proptest! {
    #[test]
    fn report_matches_tally((gold, pred) in arb_labels(300)) {
        let r = evaluate(&gold, &pred).unwrap();
        let (f1, macro_f1) = common::tally_f1(&gold, &pred);
        for c in Sentiment::ALL {
            prop_assert_eq!(r.per_class[c.index()].f1, f1[c.index()]);
        }
        prop_assert_eq!(r.macro_f1, macro_f1);
    }

    #[test]
    fn accuracy_is_trace_over_n((gold, pred) in arb_labels(300)) {
        let cm = confusion(&gold, &pred).unwrap();
        let r = report(&cm).unwrap();
        let hits = gold.iter().zip(&pred).filter(|(g, p)| g == p).count();
        prop_assert_eq!(cm.trace() as usize, hits);
        prop_assert_eq!(r.accuracy, hits as f64 / gold.len() as f64);
        prop_assert_eq!(cm.total() as usize, gold.len());
    }

    #[test]
    fn permuting_pairs_changes_nothing((gold, pred) in arb_labels(200), seed in any::<u64>()) {
        let mut idx: Vec<usize> = (0..gold.len()).collect();
        let mut s = seed;
        for i in (1..idx.len()).rev() {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            idx.swap(i, (s >> 33) as usize % (i + 1));
        }
        let g2: Vec<Sentiment> = idx.iter().map(|&i| gold[i]).collect();
        let p2: Vec<Sentiment> = idx.iter().map(|&i| pred[i]).collect();
        prop_assert_eq!(evaluate(&gold, &pred).unwrap(), evaluate(&g2, &p2).unwrap());
    }

    #[test]
    fn relabeling_classes_permutes_f1((gold, pred) in arb_labels(200), rot in 1usize..3) {
        let shift = |s: &Sentiment| Sentiment::from_index((s.index() + rot) % 3).unwrap();
        let g2: Vec<Sentiment> = gold.iter().map(shift).collect();
        let p2: Vec<Sentiment> = pred.iter().map(shift).collect();
        let a = evaluate(&gold, &pred).unwrap();
        let b = evaluate(&g2, &p2).unwrap();
        for k in 0..3 {
            prop_assert_eq!(a.per_class[k].f1, b.per_class[(k + rot) % 3].f1);
        }
        prop_assert!((a.macro_f1 - b.macro_f1).abs() < 1e-15);
    }

    #[test]
    fn scores_stay_in_unit_interval((gold, pred) in arb_labels(100)) {
        let r = evaluate(&gold, &pred).unwrap();
        for c in &r.per_class {
            prop_assert!((0.0..=1.0).contains(&c.precision));
            prop_assert!((0.0..=1.0).contains(&c.recall));
            prop_assert!((0.0..=1.0).contains(&c.f1));
        }
        prop_assert!((0.0..=1.0).contains(&r.weighted_f1));
    }
}
