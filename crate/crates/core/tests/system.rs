use std::fs::File;
use std::io::BufReader;
use std::path::PathBuf;
use std::sync::Arc;

use msyds::dynamics::load_thresholds;
use msyds::graph::{generate_multi_gnp, load_edge_list};
use msyds::learner::random_system;
use msyds::rng::seeded;
use msyds::{Configuration, MasterKind, MultilayerNetwork, ThresholdSystem};
use proptest::prelude::*;
use rand::Rng;

fn fixture(name: &str) -> BufReader<File> {
    let path: PathBuf = [env!("CARGO_MANIFEST_DIR"), "tests", "fixtures", name].iter().collect();
    BufReader::new(File::open(path).unwrap())
}

fn bits(s: &str) -> Configuration {
    s.parse().unwrap()
}

const LAYER0_TAU: [u32; 4] = [2, 3, 3, 2];
const LAYER1_TAU: [u32; 4] = [3, 3, 2, 1];

#[test]
fn golden_two_layer_example() {
    let net = Arc::new(load_edge_list(fixture("fig1_example.txt")).unwrap());
    let sys = load_thresholds(fixture("fig1_thresholds.txt"), net.clone(), MasterKind::Or).unwrap();
    assert_eq!((0..4).map(|v| sys.tau(v, 0)).collect::<Vec<_>>(), LAYER0_TAU);
    assert_eq!((0..4).map(|v| sys.tau(v, 1)).collect::<Vec<_>>(), LAYER1_TAU);
    assert_eq!(sys.successor(&bits("1110")), bits("1001"));
}

/// All 4-vertex, 2-layer edge sets on which the fixture thresholds are valid and
/// send 1110 to 1001.
fn consistent_edge_sets() -> Vec<MultilayerNetwork> {
    let slots: Vec<(usize, usize)> = (0..4).flat_map(|u| ((u + 1)..4).map(move |v| (u, v))).collect();
    let mut out = Vec::new();
    for m0 in 0u32..64 {
        for m1 in 0u32..64 {
            let edges = [(0, m0), (1, m1)].into_iter().flat_map(|(layer, m)| {
                let slots = &slots;
                (0..6).filter(move |b| m & (1 << b) != 0).map(move |b| (layer, slots[b].0, slots[b].1))
            });
            let net = Arc::new(MultilayerNetwork::from_edges(4, 2, edges).unwrap());
            let taus = [LAYER0_TAU, LAYER1_TAU];
            let Ok(sys) = ThresholdSystem::from_fn(net.clone(), MasterKind::Or, |v, i| taus[i][v]) else {
                continue;
            };
            if sys.successor(&bits("1110")) == bits("1001") {
                out.push((*net).clone());
            }
        }
    }
    out
}

#[test]
fn golden_example_is_the_smallest_consistent_edge_set() {
    let all = consistent_edge_sets();
    assert_eq!(all.len(), 154);
    let fewest = all.iter().map(|n| n.edge_count()).min().unwrap();
    let smallest: Vec<_> = all.iter().filter(|n| n.edge_count() == fewest).collect();
    assert_eq!(fewest, 4);
    let golden = load_edge_list(fixture("fig1_example.txt")).unwrap();
    assert!(smallest.contains(&&golden));
    // The golden choice is the first smallest one in edge-list order.
    let first = smallest.iter().min_by_key(|n| n.to_edge_list_string()).unwrap();
    assert_eq!(**first, golden);
}

#[test]
fn score_and_successor_examples() {
    let path = Arc::new(MultilayerNetwork::from_edges(3, 1, [(0, 0, 1), (0, 1, 2)]).unwrap());
    assert_eq!(msyds::dynamics::score(&path, &bits("101"), 1, 0), 2);
    let zero = ThresholdSystem::from_fn(path.clone(), MasterKind::Or, |_, _| 0).unwrap();
    assert_eq!(
        zero.trajectory(&bits("000"), 3),
        vec![bits("000"), bits("111"), bits("111"), bits("111")]
    );
    assert_eq!(zero.trajectory(&bits("010"), 0), vec![bits("010")]);
    let never = ThresholdSystem::from_fn(path.clone(), MasterKind::Or, |v, i| path.degree(v, i) as u32 + 2).unwrap();
    assert_eq!(never.successor(&bits("111")), bits("000"));
}

fn arb_system(max_n: usize, max_k: usize) -> impl Strategy<Value = (ThresholdSystem, Configuration)> {
    (any::<u64>(), 1..=max_n, 1..=max_k, 0.0f64..1.0, any::<bool>()).prop_map(|(seed, n, k, p, and)| {
        let mut rng = seeded(seed);
        let net = Arc::new(generate_multi_gnp(n, k, p, &mut rng).unwrap());
        let master = if and { MasterKind::And } else { MasterKind::Or };
        let sys = random_system(net, master, &mut rng);
        let c = Configuration::from_bits((0..n).map(|_| rng.gen_bool(0.5)));
        (sys, c)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn duality((sys, c) in arb_system(32, 3)) {
        let dual = sys.dual();
        prop_assert_eq!(dual.successor(&c.complement()), sys.successor(&c).complement());
        let back = dual.dual();
        prop_assert_eq!(back.table(), sys.table());
    }

    #[test]
    fn single_layer_matches_direct_rule((sys, c) in arb_system(20, 1)) {
        let net = sys.net();
        let direct = Configuration::from_bits((0..sys.n()).map(|v| {
            let on = c.get(v) as u32 + net.neighbors(v, 0).iter().filter(|&&u| c.get(u)).count() as u32;
            on >= sys.tau(v, 0)
        }));
        prop_assert_eq!(sys.successor(&c), direct);
    }

    #[test]
    fn lowering_a_threshold_never_switches_a_vertex_off(
        (sys, c) in arb_system(16, 3),
        pick in any::<prop::sample::Index>(),
    ) {
        let idx = pick.index(sys.table().len());
        prop_assume!(sys.table()[idx] > 0);
        let mut lowered = sys.table().to_vec();
        lowered[idx] -= 1;
        let low = ThresholdSystem::new(sys.net().clone(), sys.master(), lowered).unwrap();
        let (before, after) = (sys.successor(&c), low.successor(&c));
        for v in 0..sys.n() {
            prop_assert!(!before.get(v) || after.get(v));
        }
    }

    #[test]
    fn trajectories_compose((sys, c) in arb_system(16, 3)) {
        let t = sys.trajectory(&c, 2);
        prop_assert_eq!(t.len(), 3);
        prop_assert_eq!(&t[2], &sys.successor(&sys.successor(&c)));
    }

    #[test]
    fn edge_lists_round_trip((sys, _c) in arb_system(30, 4)) {
        let text = sys.net().to_edge_list_string();
        let back = load_edge_list(text.as_bytes()).unwrap();
        prop_assert_eq!(&back, sys.net().as_ref());
        prop_assert_eq!(back.to_edge_list_string(), text);

        let mut buf = Vec::new();
        sys.write_thresholds(&mut buf).unwrap();
        let again = load_thresholds(buf.as_slice(), sys.net().clone(), sys.master()).unwrap();
        prop_assert_eq!(again.table(), sys.table());
    }
}
