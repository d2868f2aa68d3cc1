//! Arc topology over the quantized county rings.
//!
//! Every undirected grid edge is owned by exactly one arc; an arc is a maximal
//! chain of edges separating the same pair of faces. County rings are stored
//! as sequences of [`ArcRef`]s, so every shared border is stored once and
//! region outlines can be built by cancelling interior arcs.

mod categorize;
mod dissolve;
mod encode;
pub mod project;
pub mod quantize;

use std::collections::{HashMap, HashSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use categorize::{categorize_arc, categorize_arcs, ArcCategory};
pub use dissolve::{dissolve, dissolve_all, DissolvedShape};
pub use encode::TopologyFile;
pub use project::{project, ProjectionParams};
pub use quantize::{quantize_county, quantize_ring, QuantizedCounty};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct QPoint {
    pub x: i64,
    pub y: i64,
}

impl QPoint {
    pub const fn new(x: i64, y: i64) -> Self {
        QPoint { x, y }
    }
}

impl fmt::Debug for ArcRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.reversed {
            write!(f, "~{}", self.index)
        } else {
            write!(f, "{}", self.index)
        }
    }
}

/// Closed ring: first point equals last point.
pub type QRing = Vec<QPoint>;

/// Twice the signed shoelace area; positive for counter-clockwise rings.
pub fn doubled_area(ring: &[QPoint]) -> i128 {
    ring.windows(2)
        .map(|w| w[0].x as i128 * w[1].y as i128 - w[1].x as i128 * w[0].y as i128)
        .sum()
}

/// One face of the planar subdivision next to an arc.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Side {
    County(u32),
    Exterior,
}

impl Side {
    pub fn county(self) -> Option<usize> {
        match self {
            Side::County(i) => Some(i as usize),
            Side::Exterior => None,
        }
    }
}

/// Faces to the left and right of an arc in its stored direction.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ArcSides {
    pub left: Side,
    pub right: Side,
}

/// Reference to an arc, optionally traversed end to start.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ArcRef {
    pub index: u32,
    pub reversed: bool,
}

impl ArcRef {
    pub fn forward(index: usize) -> Self {
        ArcRef { index: index as u32, reversed: false }
    }

    pub fn backward(index: usize) -> Self {
        ArcRef { index: index as u32, reversed: true }
    }

    /// Signed wire form: `i` forward, `!i` (that is `-i - 1`) reversed.
    pub fn encode(self) -> i64 {
        if self.reversed {
            !(self.index as i64)
        } else {
            self.index as i64
        }
    }

    pub fn decode(v: i64) -> Self {
        if v < 0 {
            ArcRef::backward(!v as usize)
        } else {
            ArcRef::forward(v as usize)
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Topology {
    pub(crate) scale: f64,
    pub(crate) arcs: Vec<Vec<QPoint>>,
    pub(crate) county_rings: Vec<Vec<Vec<ArcRef>>>,
    pub(crate) adjacency: Vec<ArcSides>,
}

#[derive(Clone, Copy)]
struct EdgeFaces {
    /// Face on the left when walking the edge from its smaller to its larger endpoint.
    left: Option<u32>,
    right: Option<u32>,
}

impl EdgeFaces {
    fn key(&self) -> (Side, Side) {
        let side = |o: Option<u32>| o.map_or(Side::Exterior, Side::County);
        let (a, b) = (side(self.left), side(self.right));
        if a <= b {
            (a, b)
        } else {
            (b, a)
        }
    }
}

type EdgeKey = (QPoint, QPoint);

fn edge_key(a: QPoint, b: QPoint) -> EdgeKey {
    if a < b {
        (a, b)
    } else {
        (b, a)
    }
}

impl Topology {
    pub fn scale(&self) -> f64 {
        self.scale
    }

    pub fn arcs(&self) -> &[Vec<QPoint>] {
        &self.arcs
    }

    pub fn arc_count(&self) -> usize {
        self.arcs.len()
    }

    pub fn county_count(&self) -> usize {
        self.county_rings.len()
    }

    pub fn county_rings(&self, county: usize) -> &[Vec<ArcRef>] {
        &self.county_rings[county]
    }

    pub fn adjacency(&self) -> &[ArcSides] {
        &self.adjacency
    }

    pub fn arc_points(&self, r: ArcRef) -> impl Iterator<Item = QPoint> + '_ {
        let arc = &self.arcs[r.index as usize];
        let n = arc.len();
        (0..n).map(move |i| if r.reversed { arc[n - 1 - i] } else { arc[i] })
    }

    /// Expands a ring of arc references into a closed point ring.
    pub fn expand_ring(&self, refs: &[ArcRef]) -> QRing {
        let mut out: QRing = Vec::new();
        for &r in refs {
            let skip = usize::from(!out.is_empty());
            out.extend(self.arc_points(r).skip(skip));
        }
        out
    }

    pub fn expand_county(&self, county: usize) -> Vec<QRing> {
        self.county_rings[county]
            .iter()
            .map(|refs| self.expand_ring(refs))
            .collect()
    }

    /// The topology restricted to some counties and arcs, both renumbered
    /// by their position in the given slices. Faces outside `counties`
    /// become exterior. Every arc of every kept county must be in `arcs`.
    pub fn subset(&self, counties: &[usize], arcs: &[usize]) -> Result<Topology> {
        let mut arc_map = vec![u32::MAX; self.arcs.len()];
        for (local, &a) in arcs.iter().enumerate() {
            arc_map[a] = local as u32;
        }
        let county_rings = counties
            .iter()
            .map(|&c| {
                self.county_rings[c]
                    .iter()
                    .map(|ring| {
                        ring.iter()
                            .map(|r| match arc_map[r.index as usize] {
                                u32::MAX => Err(Error::BadAtlas(format!("arc {} of county {c} not in subset", r.index))),
                                index => Ok(ArcRef { index, reversed: r.reversed }),
                            })
                            .collect()
                    })
                    .collect()
            })
            .collect::<Result<Vec<_>>>()?;
        Topology::from_parts(self.scale, arcs.iter().map(|&a| self.arcs[a].clone()).collect(), county_rings)
    }

    /// Recomputes left/right faces from how each county ring traverses its
    /// arcs. Used after decoding, where adjacency is not stored.
    pub(crate) fn from_parts(
        scale: f64,
        arcs: Vec<Vec<QPoint>>,
        county_rings: Vec<Vec<Vec<ArcRef>>>,
    ) -> Result<Self> {
        let mut adjacency = vec![
            ArcSides {
                left: Side::Exterior,
                right: Side::Exterior
            };
            arcs.len()
        ];
        let mut seen = vec![[false; 2]; arcs.len()];
        for (c, rings) in county_rings.iter().enumerate() {
            for r in rings.iter().flatten() {
                let i = r.index as usize;
                if i >= arcs.len() {
                    return Err(Error::BadAtlas(format!("county ring {c} references missing arc {i}")));
                }
                let slot = usize::from(r.reversed);
                if seen[i][slot] {
                    return Err(Error::BadAtlas(format!("arc {i} traversed twice in the same direction")));
                }
                seen[i][slot] = true;
                if r.reversed {
                    adjacency[i].right = Side::County(c as u32);
                } else {
                    adjacency[i].left = Side::County(c as u32);
                }
            }
        }
        for (i, arc) in arcs.iter().enumerate() {
            if arc.len() < 2 {
                return Err(Error::BadAtlas(format!("arc {i} has fewer than 2 points")));
            }
        }
        Ok(Topology {
            scale,
            arcs,
            county_rings,
            adjacency,
        })
    }
}

/// Builds the arc topology from per-county quantized rings.
///
/// Rings must be closed, outer rings counter-clockwise and holes clockwise,
/// so that every county lies to the left of its own edges. An edge claimed
/// by two faces on the same side, or by three or more faces, is rejected
/// with `E_NONPLANAR`.
pub fn build_topology(counties: &[Vec<QRing>], scale: f64) -> Result<Topology> {
    let mut edges: HashMap<EdgeKey, EdgeFaces> = HashMap::new();
    let mut counts: HashMap<EdgeKey, usize> = HashMap::new();
    for (c, rings) in counties.iter().enumerate() {
        for ring in rings {
            for w in ring.windows(2) {
                let (a, b) = (w[0], w[1]);
                let key = edge_key(a, b);
                let n = counts.entry(key).or_insert(0);
                *n += 1;
                let faces = edges.entry(key).or_insert(EdgeFaces { left: None, right: None });
                let slot = if a < b { &mut faces.left } else { &mut faces.right };
                if *n > 2 || slot.is_some() {
                    return Err(Error::NonPlanar {
                        a: [key.0.x, key.0.y],
                        b: [key.1.x, key.1.y],
                        count: (*n).max(2),
                    });
                }
                *slot = Some(c as u32);
            }
        }
    }

    let mut neighbours: HashMap<QPoint, Vec<QPoint>> = HashMap::new();
    for &(a, b) in edges.keys() {
        neighbours.entry(a).or_default().push(b);
        neighbours.entry(b).or_default().push(a);
    }
    let is_junction = |v: QPoint| -> bool {
        let ns = &neighbours[&v];
        ns.len() != 2 || edges[&edge_key(v, ns[0])].key() != edges[&edge_key(v, ns[1])].key()
    };

    let mut keys: Vec<EdgeKey> = edges.keys().copied().collect();
    keys.sort_unstable();
    let mut visited: HashSet<EdgeKey> = HashSet::with_capacity(keys.len());
    let mut arcs: Vec<Vec<QPoint>> = Vec::new();

    for &(a, b) in &keys {
        if visited.contains(&(a, b)) {
            continue;
        }
        visited.insert((a, b));
        // extend forward from b, then backward from a
        let mut fwd = vec![a, b];
        let mut closed = false;
        loop {
            let (prev, cur) = (fwd[fwd.len() - 2], fwd[fwd.len() - 1]);
            if is_junction(cur) {
                break;
            }
            let next = neighbours[&cur].iter().copied().find(|&n| n != prev).unwrap_or(prev);
            let k = edge_key(cur, next);
            if visited.contains(&k) {
                closed = true;
                break;
            }
            visited.insert(k);
            fwd.push(next);
        }
        if !closed {
            let mut back = vec![b, a];
            loop {
                let (prev, cur) = (back[back.len() - 2], back[back.len() - 1]);
                if is_junction(cur) {
                    break;
                }
                let next = neighbours[&cur].iter().copied().find(|&n| n != prev).unwrap_or(prev);
                let k = edge_key(cur, next);
                if visited.contains(&k) {
                    break;
                }
                visited.insert(k);
                back.push(next);
            }
            back.reverse();
            back.pop();
            back.pop();
            back.extend(fwd);
            fwd = back;
        }
        arcs.push(canonical_orientation(fwd, closed));
    }

    arcs.sort_unstable_by(|p, q| (p[0], p[1]).cmp(&(q[0], q[1])));

    let mut directed: HashMap<EdgeKey, (u32, u32)> = HashMap::with_capacity(keys.len());
    for (i, arc) in arcs.iter().enumerate() {
        for (j, w) in arc.windows(2).enumerate() {
            directed.insert((w[0], w[1]), (i as u32, j as u32));
        }
    }

    let mut county_rings = Vec::with_capacity(counties.len());
    for rings in counties {
        let mut out = Vec::with_capacity(rings.len());
        for ring in rings {
            out.push(ring_to_arcs(ring, &arcs, &directed));
        }
        county_rings.push(out);
    }

    let adjacency = arcs
        .iter()
        .map(|arc| {
            let (a, b) = (arc[0], arc[1]);
            let f = edges[&edge_key(a, b)];
            let side = |o: Option<u32>| o.map_or(Side::Exterior, Side::County);
            if a < b {
                ArcSides { left: side(f.left), right: side(f.right) }
            } else {
                ArcSides { left: side(f.right), right: side(f.left) }
            }
        })
        .collect();

    Ok(Topology {
        scale,
        arcs,
        county_rings,
        adjacency,
    })
}

/// Open chains start at their smaller endpoint; closed loops start at their
/// smallest vertex and head towards the smaller of its two neighbours.
fn canonical_orientation(mut pts: Vec<QPoint>, closed: bool) -> Vec<QPoint> {
    if closed {
        // pts is a->...->a with first == last
        pts.pop();
        let (start, _) = pts.iter().enumerate().min_by_key(|&(_, p)| *p).unwrap();
        pts.rotate_left(start);
        let n = pts.len();
        if pts[n - 1] < pts[1] {
            pts[1..].reverse();
        }
        pts.push(pts[0]);
        return pts;
    }
    let n = pts.len();
    let flip = match pts[0].cmp(&pts[n - 1]) {
        std::cmp::Ordering::Greater => true,
        std::cmp::Ordering::Less => false,
        std::cmp::Ordering::Equal => pts[n - 2] < pts[1],
    };
    if flip {
        pts.reverse();
    }
    pts
}

fn ring_to_arcs(ring: &[QPoint], arcs: &[Vec<QPoint>], directed: &HashMap<EdgeKey, (u32, u32)>) -> Vec<ArcRef> {
    let n = ring.len() - 1;
    // (arc, reversed, position of this edge in the traversal of that arc)
    let lookup = |i: usize| -> (u32, bool, usize) {
        let (a, b) = (ring[i], ring[i + 1]);
        if let Some(&(arc, j)) = directed.get(&(a, b)) {
            (arc, false, j as usize)
        } else {
            let &(arc, j) = directed.get(&(b, a)).expect("every ring edge belongs to an arc");
            let len = arcs[arc as usize].len() - 1;
            (arc, true, len - 1 - j as usize)
        }
    };
    let start = (0..n)
        .find(|&i| lookup(i).2 == 0)
        .expect("every ring contains the first edge of some arc");
    let mut refs = Vec::new();
    let mut i = 0;
    while i < n {
        let (arc, reversed, pos) = lookup((start + i) % n);
        debug_assert_eq!(pos, 0);
        refs.push(ArcRef { index: arc, reversed });
        i += arcs[arc as usize].len() - 1;
    }
    refs
}

/// True if `a` and `b` are the same closed ring up to the choice of start vertex.
pub fn same_ring_up_to_rotation(a: &[QPoint], b: &[QPoint]) -> bool {
    if a.len() != b.len() || a.is_empty() {
        return a.len() == b.len();
    }
    let (oa, ob) = (&a[..a.len() - 1], &b[..b.len() - 1]);
    if oa.is_empty() {
        return true;
    }
    let n = oa.len();
    (0..n).filter(|&s| ob[s] == oa[0]).any(|s| (0..n).all(|i| oa[i] == ob[(s + i) % n]))
}
