mod common;

use std::collections::HashSet;

use common::{brick_layout, member_doubled_area, oracle_boundary, ring_edges, same_up_to_rotation};
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rigo_atlas::fixture;
use rigo_atlas::topology::{build_topology, dissolve, dissolve_all, Side, TopologyFile};
use rigo_atlas::Execution;

fn names(n: usize) -> Vec<String> {
    (0..n).map(|i| format!("{i:05}")).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn brick_layouts_rebuild_exactly(seed in any::<u64>(), rows in 1usize..7, width in 2i64..14) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let counties = brick_layout(&mut rng, rows, width);
        let t = build_topology(&counties, 1.0).unwrap();
        prop_assert!(same_up_to_rotation(&t, &counties));

        // every undirected edge in exactly one arc, no repeated points
        let mut seen = HashSet::new();
        for arc in t.arcs() {
            prop_assert!(arc.len() >= 2);
            for w in arc.windows(2) {
                prop_assert_ne!(w[0], w[1]);
                let key = if w[0] < w[1] { (w[0], w[1]) } else { (w[1], w[0]) };
                prop_assert!(seen.insert(key));
            }
        }
        let input_edges: HashSet<_> = counties
            .iter()
            .flatten()
            .flat_map(|r| r.windows(2).map(|w| if w[0] < w[1] { (w[0], w[1]) } else { (w[1], w[0]) }))
            .collect();
        prop_assert_eq!(&seen, &input_edges);

        for s in t.adjacency() {
            prop_assert!(s.left != s.right);
            prop_assert!(s.left != Side::Exterior || s.right != Side::Exterior);
        }

        let file = TopologyFile::encode(&t, &names(counties.len()));
        prop_assert_eq!(file.decode(&names(counties.len())).unwrap(), t);
    }

    #[test]
    fn brick_dissolve_matches_oracle(seed in any::<u64>(), rows in 1usize..6, width in 2i64..12) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let counties = brick_layout(&mut rng, rows, width);
        let t = build_topology(&counties, 1.0).unwrap();
        let n = counties.len();
        let mut members: Vec<usize> = (0..n).filter(|_| rng.gen_bool(0.5)).collect();
        if members.is_empty() {
            members.push(rng.gen_range(0..n));
        }
        let shape = dissolve(&t, &members).unwrap();
        prop_assert_eq!(ring_edges(&shape.rings), oracle_boundary(&counties, &members));
        prop_assert_eq!(shape.doubled_area(), member_doubled_area(&counties, &members));
        prop_assert!(shape.rings.iter().all(|r| r.first() == r.last()));

        members.shuffle(&mut rng);
        prop_assert_eq!(dissolve(&t, &members).unwrap(), shape);
    }
}

#[test]
fn fixture_subsets_match_oracle() {
    let rings = fixture::grid_rings(4, 4);
    let t = build_topology(&rings, 1.0).unwrap();
    for mask in 1u32..(1 << 16) {
        if mask % 97 != 0 {
            continue;
        }
        let members: Vec<usize> = (0..16).filter(|i| mask & (1 << i) != 0).collect();
        let shape = dissolve(&t, &members).unwrap();
        assert_eq!(ring_edges(&shape.rings), oracle_boundary(&rings, &members), "mask {mask:#x}");
        assert_eq!(shape.doubled_area(), 2 * members.len() as i128);
    }
}

#[test]
fn checkerboard_pinches_split_rings() {
    // members touch only at corners; every degree-4 vertex must be resolved
    let rings = fixture::grid_rings(6, 6);
    let t = build_topology(&rings, 1.0).unwrap();
    let members: Vec<usize> = (0..36).filter(|i| (i / 6 + i % 6) % 2 == 0).collect();
    let shape = dissolve(&t, &members).unwrap();
    assert_eq!(shape.rings.len(), 18);
    assert!(shape.rings.iter().all(|r| r.len() == 5));
    assert_eq!(ring_edges(&shape.rings), oracle_boundary(&rings, &members));
}

#[test]
fn policies_give_identical_outlines() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let counties = brick_layout(&mut rng, 12, 30);
    let t = build_topology(&counties, 1.0).unwrap();
    let sets: Vec<Vec<usize>> = (0..40)
        .map(|_| (0..counties.len()).filter(|_| rng.gen_bool(0.3)).collect::<Vec<_>>())
        .filter(|s| !s.is_empty())
        .collect();
    assert_eq!(
        dissolve_all(&t, &sets, Execution::Sequential).unwrap(),
        dissolve_all(&t, &sets, Execution::Parallel).unwrap()
    );
}

#[test]
fn build_is_deterministic_under_input_shuffle_of_ring_start() {
    let counties = fixture::grid_rings(3, 5);
    let rotated: Vec<_> = counties
        .iter()
        .map(|rings| {
            rings
                .iter()
                .map(|r| {
                    let mut open = r[..r.len() - 1].to_vec();
                    open.rotate_left(2);
                    open.push(open[0]);
                    open
                })
                .collect::<Vec<_>>()
        })
        .collect();
    let a = build_topology(&counties, 1.0).unwrap();
    let b = build_topology(&rotated, 1.0).unwrap();
    assert_eq!(a.arcs(), b.arcs());
    assert_eq!(a.adjacency(), b.adjacency());
}
