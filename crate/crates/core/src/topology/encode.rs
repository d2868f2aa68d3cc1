//! Delta-encoded wire form of a [`Topology`].
//!
//! Arc points are stored relative to `translate` (the grid minimum); the first
//! point of each arc is absolute-from-translate and every following pair is a
//! delta from its predecessor. Ring entries use the signed arc-reference form
//! of [`ArcRef::encode`]. `rings` is keyed by county fips.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{ArcRef, QPoint, Topology};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TopologyFile {
    pub scale: f64,
    pub translate: [i64; 2],
    pub arcs: Vec<Vec<[i64; 2]>>,
    pub rings: BTreeMap<String, Vec<Vec<i64>>>,
}

impl TopologyFile {
    /// `fips[i]` names topology county `i`.
    pub fn encode(topology: &Topology, fips: &[String]) -> Self {
        let translate = topology
            .arcs
            .iter()
            .flatten()
            .fold(None, |acc: Option<[i64; 2]>, p| match acc {
                None => Some([p.x, p.y]),
                Some([x, y]) => Some([x.min(p.x), y.min(p.y)]),
            })
            .unwrap_or([0, 0]);
        let arcs = topology
            .arcs
            .iter()
            .map(|arc| {
                let mut prev = QPoint::new(translate[0], translate[1]);
                arc.iter()
                    .map(|&p| {
                        let d = [p.x - prev.x, p.y - prev.y];
                        prev = p;
                        d
                    })
                    .collect()
            })
            .collect();
        let rings = fips
            .iter()
            .zip(&topology.county_rings)
            .map(|(f, rings)| (f.clone(), rings.iter().map(|r| r.iter().map(|a| a.encode()).collect()).collect()))
            .collect();
        TopologyFile {
            scale: topology.scale,
            translate,
            arcs,
            rings,
        }
    }

    /// Rebuilds the topology with counties in `fips` order. Every listed
    /// county must have an entry in `rings`.
    pub fn decode(&self, fips: &[String]) -> Result<Topology> {
        if self.scale.is_nan() || self.scale <= 0.0 {
            return Err(Error::BadAtlas(format!("topology scale must be positive, got {}", self.scale)));
        }
        let arcs = self
            .arcs
            .iter()
            .map(|deltas| {
                let mut cur = QPoint::new(self.translate[0], self.translate[1]);
                deltas
                    .iter()
                    .map(|d| {
                        cur = QPoint::new(cur.x + d[0], cur.y + d[1]);
                        cur
                    })
                    .collect()
            })
            .collect();
        let rings = fips
            .iter()
            .map(|f| {
                let rings = self
                    .rings
                    .get(f)
                    .ok_or_else(|| Error::BadAtlas(format!("county {f} has no rings in the topology")))?;
                Ok(rings.iter().map(|r| r.iter().map(|&v| ArcRef::decode(v)).collect()).collect())
            })
            .collect::<Result<Vec<_>>>()?;
        Topology::from_parts(self.scale, arcs, rings)
    }
}

#[cfg(test)]
mod tests {
    use super::super::build_topology;
    use super::super::test_grid::grid;
    use super::*;

    #[test]
    fn round_trip_preserves_topology() {
        let mut counties = grid(3, 4);
        for rings in &mut counties {
            for p in rings.iter_mut().flatten() {
                p.x += 1000;
                p.y -= 50;
            }
        }
        let t = build_topology(&counties, 1.0).unwrap();
        let names = fips(counties.len());
        let file = TopologyFile::encode(&t, &names);
        assert_eq!(file.translate, [1000, -50]);
        let back = file.decode(&names).unwrap();
        assert_eq!(back, t);
        assert_eq!(TopologyFile::encode(&back, &names), file);
    }

    #[test]
    fn decode_rejects_dangling_arc_reference() {
        let t = build_topology(&grid(1, 2), 1.0).unwrap();
        let names = fips(2);
        let mut file = TopologyFile::encode(&t, &names);
        file.rings.get_mut("00000").unwrap()[0].push(99);
        assert_eq!(file.decode(&names).unwrap_err().code(), "E_BAD_ATLAS");
        let file = TopologyFile::encode(&t, &names);
        assert_eq!(file.decode(&fips(3)).unwrap_err().code(), "E_BAD_ATLAS");
    }

    fn fips(n: usize) -> Vec<String> {
        (0..n).map(|i| format!("{i:05}")).collect()
    }
}
