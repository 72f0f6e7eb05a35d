use proptest::prelude::*;

use partition_base::cli::format::WitnessFile;
use partition_base::constructions::{construct_maincase, construct_r1, construct_small};
use partition_base::domain::{codeset_to_partitions, partitions_to_codeset, PointPerm, RegularPartition};
use partition_base::formulas::Group;
use partition_base::search::SearchConfig;
use partition_base::verifier::{check_main_lemma, decide, is_base};

const SHAPES: [(usize, usize); 10] = [(2, 3), (3, 2), (2, 4), (4, 2), (3, 3), (2, 5), (4, 3), (3, 4), (5, 3), (6, 2)];

fn partitions(a: usize, orders: &[Vec<usize>]) -> Vec<RegularPartition> {
    orders
        .iter()
        .map(|pts| RegularPartition::from_parts(pts.chunks(a).map(|c| c.to_vec()).collect()).unwrap())
        .collect()
}

prop_compose! {
    fn tuple()(shape in 0..SHAPES.len(), l in 1usize..=5)
        (orders in prop::collection::vec(Just((0..SHAPES[shape].0 * SHAPES[shape].1).collect::<Vec<usize>>()).prop_shuffle(), l),
         relabel in Just((0..SHAPES[shape].0 * SHAPES[shape].1).collect::<Vec<usize>>()).prop_shuffle(),
         shape in Just(shape))
        -> (usize, usize, Vec<RegularPartition>, Vec<usize>)
    {
        let (a, b) = SHAPES[shape];
        (a, b, partitions(a, &orders), relabel)
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 200, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn witness_files_round_trip((a, b, ps, _) in tuple(), alt in any::<bool>()) {
        let codeset = Some(partitions_to_codeset(&ps).unwrap());
        let file = WitnessFile {
            a,
            b,
            group: if alt { Group::Alt } else { Group::Sym },
            size: ps.len(),
            provenance: "test".into(),
            status: "unverified".into(),
            verifier: "test".into(),
            partitions: ps,
            codeset,
        };
        let text = file.serialize();
        let back = WitnessFile::parse(&text, 0).unwrap();
        prop_assert_eq!(&back, &file);
        prop_assert_eq!(back.serialize(), text);
    }

    #[test]
    fn codesets_round_trip((_a, _b, ps, _) in tuple()) {
        // Points and symbols come back renamed.
        let set = partitions_to_codeset(&ps).unwrap();
        let back = codeset_to_partitions(&set).unwrap();
        let again = partitions_to_codeset(&back).unwrap();
        prop_assert_eq!(again.fiber_profile(), set.fiber_profile());
        prop_assert_eq!(again.len(), set.len());
        for group in [Group::Sym, Group::Alt] {
            prop_assert_eq!(is_base(&ps, group).unwrap().is_base, is_base(&back, group).unwrap().is_base);
        }
    }

    #[test]
    fn verdicts_ignore_point_names((_a, _b, ps, relabel) in tuple()) {
        let g = PointPerm::new(relabel).unwrap();
        let moved: Vec<RegularPartition> = ps.iter().map(|p| p.relabel_points(&g).unwrap()).collect();
        for group in [Group::Sym, Group::Alt] {
            prop_assert_eq!(is_base(&ps, group).unwrap().is_base, is_base(&moved, group).unwrap().is_base);
        }
    }

    #[test]
    fn lemma_conditions_imply_base(b in 3usize..=6, l in 1usize..=2, pick in 0u8..3, x in 0usize..1000, y in 0usize..1000) {
        let bl = b.pow(l as u32);
        let (set, a, c) = match pick {
            0 => {
                let k = 1 + x % (b - 1);
                let r = if k == b - 1 || bl < 4 { 0 } else { [0, 2 + y % (bl - 3)][y % 2] };
                (construct_maincase(b, l, k, r).unwrap(), k * bl + r, bl - 1)
            }
            1 if bl > 4 && b >= 3 => {
                let k = 1 + x % (b - 2).max(1);
                prop_assume!(k <= b - 2);
                (construct_r1(b, l, k).unwrap(), k * bl + 1, bl - 2)
            }
            _ => {
                prop_assume!(bl >= 3);
                let a = 3 + x % (bl - 2);
                (construct_small(b, l, a).unwrap(), a, a - 1)
            }
        };
        let conds = check_main_lemma(&set, a, b, l, c).unwrap();
        prop_assert_eq!(conds, [true; 5]);
        prop_assert!(decide(&set, Group::Sym).unwrap().is_base);
    }
}

#[test]
fn search_is_reproducible_and_exhausts_impossible_sizes() {
    use partition_base::search::{search_witness, SearchMode, SearchOutcome};
    let mut cfg = SearchConfig::deterministic(3);
    let one = search_witness(7, 3, 4, Group::Sym, &cfg).unwrap();
    cfg.workers = 4;
    let four = search_witness(7, 3, 4, Group::Sym, &cfg).unwrap();
    match (one, four) {
        (SearchOutcome::Found { codeset: x, trial: s, .. }, SearchOutcome::Found { codeset: y, trial: t, .. }) => {
            assert_eq!((x, s), (y, t));
        }
        other => panic!("{other:?}"),
    }
    // No 4 partitions form a Sym base for (4,2).
    cfg.budget = 640;
    assert!(matches!(
        search_witness(4, 2, 4, Group::Sym, &cfg).unwrap(),
        SearchOutcome::Exhausted { candidates } if candidates > 0
    ));
    cfg.mode = SearchMode::Exhaustive;
    assert!(matches!(search_witness(4, 2, 4, Group::Sym, &cfg).unwrap(), SearchOutcome::Exhausted { .. }));
    assert!(matches!(search_witness(4, 2, 4, Group::Alt, &cfg).unwrap(), SearchOutcome::Found { .. }));
}
