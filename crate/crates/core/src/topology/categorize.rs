use serde::{Deserialize, Serialize};

use super::{ArcSides, Side};
use crate::atlas::Atlas;
use crate::exec::Execution;
use crate::model::{County, Layer};

/// Line-weight class of an arc. Declaration order is painter's order:
/// the boldest category is drawn last.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum ArcCategory {
    CountyInterior,
    RegionBoundary,
    StateBoundary,
    NationalOutline,
}

impl ArcCategory {
    pub const PAINT_ORDER: [ArcCategory; 4] = [
        ArcCategory::CountyInterior,
        ArcCategory::RegionBoundary,
        ArcCategory::StateBoundary,
        ArcCategory::NationalOutline,
    ];

    pub fn css_class(self) -> &'static str {
        match self {
            ArcCategory::CountyInterior => "county-interior",
            ArcCategory::RegionBoundary => "region-boundary",
            ArcCategory::StateBoundary => "state-boundary",
            ArcCategory::NationalOutline => "national-outline",
        }
    }
}

/// Primary-affiliation key a county has under a layer.
fn layer_key(county: &County, layer: Layer) -> (Option<&str>, Option<&str>) {
    match layer {
        Layer::Rigo => (county.rigo.as_deref(), None),
        Layer::Msa => (None, county.msa.as_deref()),
        Layer::Both => (county.rigo.as_deref(), county.msa.as_deref()),
    }
}

/// Exterior beats state, state beats region; only primary codes are
/// compared, secondary RIGO membership never hides a boundary.
pub fn categorize_arc(sides: ArcSides, counties: &[County], layer: Layer) -> ArcCategory {
    let (a, b) = match (sides.left, sides.right) {
        (Side::County(a), Side::County(b)) => (&counties[a as usize], &counties[b as usize]),
        _ => return ArcCategory::NationalOutline,
    };
    if a.state != b.state {
        ArcCategory::StateBoundary
    } else if layer_key(a, layer) != layer_key(b, layer) {
        ArcCategory::RegionBoundary
    } else {
        ArcCategory::CountyInterior
    }
}

pub fn categorize_arcs(atlas: &Atlas, layer: Layer, exec: Execution) -> Vec<ArcCategory> {
    let counties = atlas.counties();
    exec.map(atlas.topology().adjacency(), |&s| categorize_arc(s, counties, layer))
}
