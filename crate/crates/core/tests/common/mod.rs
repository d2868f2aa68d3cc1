#![allow(dead_code)]

use std::collections::BTreeMap;

use rand::Rng;
use rigo_atlas::topology::{doubled_area, QPoint, QRing, Topology};

/// Rows of rectangles with independent column breaks per row ("brick
/// layout"). Rectangle edges carry every vertex of the neighbouring rows so
/// shared borders match exactly, which produces T-junctions and multi-edge
/// arcs. Returns one ring per county, counter-clockwise.
pub fn brick_layout(rng: &mut impl Rng, rows: usize, width: i64) -> Vec<Vec<QRing>> {
    let mut ys = vec![0i64];
    for _ in 0..rows {
        let last = *ys.last().unwrap();
        ys.push(last + rng.gen_range(1..=3));
    }
    let breaks: Vec<Vec<i64>> = (0..rows)
        .map(|_| {
            let mut b: Vec<i64> = (1..width).filter(|_| rng.gen_bool(0.35)).collect();
            b.insert(0, 0);
            b.push(width);
            b
        })
        .collect();
    let between = |r: Option<&Vec<i64>>, lo: i64, hi: i64| -> Vec<i64> {
        r.map(|b| b.iter().copied().filter(|&x| lo < x && x < hi).collect()).unwrap_or_default()
    };
    let mut counties = Vec::new();
    for r in 0..rows {
        let (y0, y1) = (ys[r], ys[r + 1]);
        for w in breaks[r].windows(2) {
            let (x0, x1) = (w[0], w[1]);
            let below = if r > 0 { Some(&breaks[r - 1]) } else { None };
            let above = breaks.get(r + 1);
            let mut bottom = between(below, x0, x1);
            bottom.sort();
            let mut top = between(above, x0, x1);
            top.sort_by(|a, b| b.cmp(a));
            let mut ring = vec![QPoint::new(x0, y0)];
            ring.extend(bottom.into_iter().map(|x| QPoint::new(x, y0)));
            ring.push(QPoint::new(x1, y0));
            ring.push(QPoint::new(x1, y1));
            ring.extend(top.into_iter().map(|x| QPoint::new(x, y1)));
            ring.push(QPoint::new(x0, y1));
            ring.push(QPoint::new(x0, y0));
            counties.push(vec![ring]);
        }
    }
    counties
}

/// Directed boundary edges of a member set by brute force: every directed
/// edge of every member ring, minus those whose reverse is also a member
/// edge.
pub fn oracle_boundary(counties: &[Vec<QRing>], members: &[usize]) -> BTreeMap<(QPoint, QPoint), usize> {
    let mut all: BTreeMap<(QPoint, QPoint), usize> = BTreeMap::new();
    for &m in members {
        for ring in &counties[m] {
            for w in ring.windows(2) {
                *all.entry((w[0], w[1])).or_default() += 1;
            }
        }
    }
    all.iter()
        .filter(|((a, b), _)| !all.contains_key(&(*b, *a)))
        .map(|(&k, &n)| (k, n))
        .collect()
}

/// Directed edges of a set of closed rings, with multiplicity.
pub fn ring_edges(rings: &[QRing]) -> BTreeMap<(QPoint, QPoint), usize> {
    let mut out = BTreeMap::new();
    for ring in rings {
        for w in ring.windows(2) {
            *out.entry((w[0], w[1])).or_default() += 1;
        }
    }
    out
}

pub fn member_doubled_area(counties: &[Vec<QRing>], members: &[usize]) -> i128 {
    members.iter().flat_map(|&m| &counties[m]).map(|r| doubled_area(r)).sum()
}

pub fn same_up_to_rotation(topology: &Topology, counties: &[Vec<QRing>]) -> bool {
    counties.iter().enumerate().all(|(i, rings)| {
        let got = topology.expand_county(i);
        got.len() == rings.len()
            && got
                .iter()
                .zip(rings)
                .all(|(g, r)| rigo_atlas::topology::same_ring_up_to_rotation(g, r))
    })
}
