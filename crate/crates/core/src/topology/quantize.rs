//! Snapping planar rings onto the integer grid.

use std::collections::VecDeque;

use super::{doubled_area, QPoint, QRing};
use crate::error::{Error, Result};

/// Grid cells per projected unit for real data (projected units are km,
/// so one cell is 0.1 m).
pub const DEFAULT_SCALE: f64 = 1e4;
/// Fixtures are drawn on unit squares and keep integer coordinates.
pub const FIXTURE_SCALE: f64 = 1.0;

#[derive(Debug, Clone, PartialEq)]
pub struct QuantizedCounty {
    pub rings: Vec<QRing>,
    /// Rings discarded because they collapsed on the grid.
    pub dropped: usize,
}

pub fn quantize_point(p: [f64; 2], scale: f64) -> QPoint {
    QPoint::new((p[0] * scale).round() as i64, (p[1] * scale).round() as i64)
}

/// Quantizes one closed ring. Returns `None` if fewer than three distinct
/// vertices survive or the ring has zero area on the grid.
///
/// Consecutive duplicates and zero-width spikes (`a, b, a`) are removed. The
/// ring keeps the orientation sign of its input.
pub fn quantize_ring(ring: &[[f64; 2]], scale: f64) -> Option<QRing> {
    let mut open: VecDeque<QPoint> = VecDeque::with_capacity(ring.len());
    for &p in ring {
        let q = quantize_point(p, scale);
        open.push_back(q);
        loop {
            let n = open.len();
            if n >= 2 && open[n - 1] == open[n - 2] {
                open.pop_back();
            } else if n >= 3 && open[n - 1] == open[n - 3] {
                open.pop_back();
                open.pop_back();
            } else {
                break;
            }
        }
    }
    // wrap-around cleanup on the cyclic sequence
    loop {
        let n = open.len();
        if n < 3 {
            return None;
        }
        if open[n - 1] == open[0] {
            open.pop_back();
        } else if open[n - 2] == open[0] {
            open.pop_back();
            open.pop_back();
        } else if open[n - 1] == open[1] {
            open.pop_front();
            open.pop_front();
        } else {
            break;
        }
    }
    let mut closed: QRing = open.into_iter().collect();
    closed.push(closed[0]);
    let area = doubled_area(&closed);
    if area == 0 {
        return None;
    }
    let input_sign = float_signed_area(ring).signum();
    if (area > 0) != (input_sign >= 0.0) {
        closed.reverse();
    }
    Some(closed)
}

pub fn quantize_county(fips: &str, rings: &[Vec<[f64; 2]>], scale: f64) -> Result<QuantizedCounty> {
    let mut out = Vec::with_capacity(rings.len());
    for ring in rings {
        if let Some(q) = quantize_ring(ring, scale) {
            out.push(q);
        }
    }
    if out.is_empty() {
        return Err(Error::Empty(fips.to_string()));
    }
    Ok(QuantizedCounty {
        dropped: rings.len() - out.len(),
        rings: out,
    })
}

fn float_signed_area(ring: &[[f64; 2]]) -> f64 {
    let mut s = 0.0;
    for w in ring.windows(2) {
        s += w[0][0] * w[1][1] - w[1][0] * w[0][1];
    }
    if let (Some(first), Some(last)) = (ring.first(), ring.last()) {
        if first != last {
            s += last[0] * first[1] - first[0] * last[1];
        }
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    fn square(x: f64, y: f64, w: f64) -> Vec<[f64; 2]> {
        vec![[x, y], [x + w, y], [x + w, y + w], [x, y + w], [x, y]]
    }

    fn pts(v: &[(i64, i64)]) -> QRing {
        v.iter().map(|&(x, y)| QPoint::new(x, y)).collect()
    }

    #[test]
    fn unit_square_at_scale_100() {
        let q = quantize_ring(&square(0.0, 0.0, 1.0), 100.0).unwrap();
        assert_eq!(q, pts(&[(0, 0), (100, 0), (100, 100), (0, 100), (0, 0)]));
    }

    #[test]
    fn shared_edge_vertices_coincide() {
        let a = quantize_ring(&square(0.123456, 0.5, 0.3), 100.0).unwrap();
        let b = quantize_ring(&square(0.423456, 0.5, 0.3), 100.0).unwrap();
        assert_eq!(a[1], b[0]);
        assert_eq!(a[2], b[3]);
    }

    #[test]
    fn sliver_is_dropped_with_count() {
        let sliver = vec![[0.0, 0.0], [1.0, 0.0], [1.0, 1e-9], [0.0, 1e-9], [0.0, 0.0]];
        assert_eq!(quantize_ring(&sliver, 100.0), None);
        let q = quantize_county("00001", &[square(0.0, 0.0, 1.0), sliver.clone()], 100.0).unwrap();
        assert_eq!(q.rings.len(), 1);
        assert_eq!(q.dropped, 1);
        let err = quantize_county("00001", &[sliver], 100.0).unwrap_err();
        assert_eq!(err, Error::Empty("00001".into()));
    }

    #[test]
    fn spikes_and_duplicates_removed() {
        let ring = vec![
            [0.0, 0.0],
            [0.0, 0.0],
            [2.0, 0.0],
            [3.0, 0.0],
            [2.0, 0.0],
            [2.0, 2.0],
            [0.0, 2.0],
            [0.0, 0.0],
        ];
        let q = quantize_ring(&ring, 1.0).unwrap();
        assert_eq!(q, pts(&[(0, 0), (2, 0), (2, 2), (0, 2), (0, 0)]));
    }

    #[test]
    fn orientation_preserved() {
        let mut cw = square(0.0, 0.0, 1.0);
        cw.reverse();
        let q = quantize_ring(&cw, 10.0).unwrap();
        assert!(doubled_area(&q) < 0);
        let q = quantize_ring(&square(0.0, 0.0, 1.0), 10.0).unwrap();
        assert!(doubled_area(&q) > 0);
    }
}
