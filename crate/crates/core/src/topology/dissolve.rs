//! Merging member counties into region outlines.

use std::collections::BTreeMap;

use super::{doubled_area, ArcRef, QPoint, QRing, Topology};
use crate::error::{Error, Result};
use crate::exec::Execution;

#[derive(Debug, Clone, PartialEq)]
pub struct DissolvedShape {
    /// Outline rings as arc references; members lie to the left, so outer
    /// rings run counter-clockwise and holes clockwise.
    pub arc_rings: Vec<Vec<ArcRef>>,
    pub rings: Vec<QRing>,
    /// Grid units squared; holes subtract.
    pub area: f64,
}

impl DissolvedShape {
    pub fn doubled_area(&self) -> i128 {
        self.rings.iter().map(|r| doubled_area(r)).sum()
    }
}

/// Dissolves the given counties (topology indices) into their outer boundary.
///
/// Boundary arcs are those with a member on exactly one side. They are
/// stitched head to tail; where several boundary arcs leave the same vertex
/// the walk takes the leftmost turn, which keeps rings from crossing.
pub fn dissolve(topology: &Topology, members: &[usize]) -> Result<DissolvedShape> {
    let n = topology.county_count();
    let mut is_member = vec![false; n];
    for &m in members {
        is_member[m] = true;
    }
    let member = |s: super::Side| s.county().is_some_and(|c| is_member[c]);

    let mut boundary: Vec<ArcRef> = Vec::new();
    for (i, sides) in topology.adjacency.iter().enumerate() {
        match (member(sides.left), member(sides.right)) {
            (true, false) => boundary.push(ArcRef::forward(i)),
            (false, true) => boundary.push(ArcRef::backward(i)),
            _ => {}
        }
    }

    let start_of = |r: ArcRef| topology.arc_points(r).next().unwrap();
    let mut outgoing: BTreeMap<QPoint, Vec<usize>> = BTreeMap::new();
    for (k, &r) in boundary.iter().enumerate() {
        outgoing.entry(start_of(r)).or_default().push(k);
    }

    let mut used = vec![false; boundary.len()];
    let mut arc_rings = Vec::new();
    for first in 0..boundary.len() {
        if used[first] {
            continue;
        }
        used[first] = true;
        let ring_start = start_of(boundary[first]);
        let mut ring = vec![boundary[first]];
        let mut current = first;
        loop {
            let (prev, end) = last_segment(topology, boundary[current]);
            let incoming = (end.x - prev.x, end.y - prev.y);
            let mut candidates: Vec<usize> = outgoing
                .get(&end)
                .map(|v| v.iter().copied().filter(|&k| !used[k]).collect())
                .unwrap_or_default();
            if end == ring_start {
                candidates.push(first);
            }
            let next = candidates
                .into_iter()
                .max_by(|&a, &b| {
                    let ta = turn_angle(incoming, first_direction(topology, boundary[a]));
                    let tb = turn_angle(incoming, first_direction(topology, boundary[b]));
                    ta.total_cmp(&tb)
                })
                .ok_or(Error::OpenRing([end.x, end.y]))?;
            if next == first {
                break;
            }
            used[next] = true;
            ring.push(boundary[next]);
            current = next;
        }
        arc_rings.push(ring);
    }

    let rings: Vec<QRing> = arc_rings.iter().map(|r| topology.expand_ring(r)).collect();
    let doubled: i128 = rings.iter().map(|r| doubled_area(r)).sum();
    Ok(DissolvedShape {
        arc_rings,
        rings,
        area: doubled as f64 / 2.0,
    })
}

/// Dissolves many member sets against one shared topology.
pub fn dissolve_all(topology: &Topology, sets: &[Vec<usize>], exec: Execution) -> Result<Vec<DissolvedShape>> {
    exec.try_map(sets, |members| dissolve(topology, members))
}

fn last_segment(topology: &Topology, r: ArcRef) -> (QPoint, QPoint) {
    let arc = &topology.arcs[r.index as usize];
    let n = arc.len();
    if r.reversed {
        (arc[1], arc[0])
    } else {
        (arc[n - 2], arc[n - 1])
    }
}

fn first_direction(topology: &Topology, r: ArcRef) -> (i64, i64) {
    let mut pts = topology.arc_points(r);
    let a = pts.next().unwrap();
    let b = pts.next().unwrap();
    (b.x - a.x, b.y - a.y)
}

/// Signed turn from `d_in` to `d_out` in (-pi, pi]; larger is further left.
fn turn_angle(d_in: (i64, i64), d_out: (i64, i64)) -> f64 {
    let cross = d_in.0 as f64 * d_out.1 as f64 - d_in.1 as f64 * d_out.0 as f64;
    let dot = d_in.0 as f64 * d_out.0 as f64 + d_in.1 as f64 * d_out.1 as f64;
    cross.atan2(dot)
}
