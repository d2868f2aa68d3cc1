//! SVG choropleth maps: fills, hatch texture, weighted boundary lines and a
//! legend for one view of an atlas.

mod legend;
mod style;
mod svg;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

pub use legend::{build_legend, Legend, LegendEntry, Swatch};
pub use style::{HatchStyle, RampId, Ramps, StrokeWidths, StyleConfig, NEUTRAL};
pub use svg::render_map;

use crate::atlas::Atlas;
use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::model::{Category, County, Layer, RegionKind};
use crate::topology::{categorize_arc, dissolve_all, ArcCategory, DissolvedShape, Side};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Fill {
    Ramp { ramp: RampId, step: usize },
    Neutral,
}

impl Fill {
    pub fn color(self, style: &StyleConfig) -> &str {
        match self {
            Fill::Ramp { ramp, step } => &style.ramp(ramp)[step],
            Fill::Neutral => NEUTRAL,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CountyStyle {
    pub fill: Fill,
    pub texture: bool,
}

/// Fill and texture of one county under a layer.
///
/// Counties take the bin of their primary region; on the combined layer a
/// county in both a RIGO and an MSA takes the mixed ramp at the mean of the
/// two bins, rounded down.
pub fn style_for(county: &County, atlas: &Atlas, layer: Layer, style: &StyleConfig) -> CountyStyle {
    let bins = atlas.bins();
    let rigo_bin = county.rigo.as_deref().and_then(|c| bins.get(RegionKind::Rigo, c));
    let msa_bin = county.msa.as_deref().and_then(|c| bins.get(RegionKind::Msa, c));
    let oc = atlas.categories().get(&county.fips).copied();
    let ramp = |ramp, step: usize| Fill::Ramp {
        ramp,
        step: step.min(style.ramp(ramp).len().saturating_sub(1)),
    };
    let fill = match layer {
        Layer::Rigo => rigo_bin.map_or(Fill::Neutral, |b| ramp(RampId::Rigo, b)),
        Layer::Msa => msa_bin.map_or(Fill::Neutral, |b| ramp(RampId::Msa, b)),
        Layer::Both => match (oc.map(|o| o.category), rigo_bin, msa_bin) {
            (Some(Category::Both), Some(r), Some(m)) => ramp(RampId::Both, (r + m) / 2),
            (Some(Category::Both | Category::RigoOnly), Some(r), _) => ramp(RampId::Rigo, r),
            (Some(Category::Both | Category::MsaOnly), _, Some(m)) => ramp(RampId::Msa, m),
            _ => Fill::Neutral,
        },
    };
    CountyStyle {
        fill,
        texture: layer.shows_texture() && oc.is_some_and(|o| o.dual_rigo),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum View {
    National,
    State(String),
}

impl FromStr for View {
    type Err = std::convert::Infallible;

    /// "national" (any case) or a state code.
    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        if s.eq_ignore_ascii_case("national") {
            Ok(View::National)
        } else {
            Ok(View::State(s.to_string()))
        }
    }
}

impl fmt::Display for View {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            View::National => f.write_str("national"),
            View::State(s) => f.write_str(s),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ViewSpec {
    pub view: View,
    pub layer: Layer,
    pub width: u32,
    pub height: u32,
    pub style: StyleConfig,
}

impl ViewSpec {
    pub fn new(view: View, layer: Layer) -> Self {
        ViewSpec {
            view,
            layer,
            width: 960,
            height: 600,
            style: StyleConfig::default(),
        }
    }
}

/// A dissolved region clipped to the counties of a view.
#[derive(Debug, Clone, PartialEq)]
pub struct Outline {
    pub kind: RegionKind,
    pub code: String,
    pub shape: DissolvedShape,
}

/// Everything a view draws, before it is turned into SVG or JSON.
#[derive(Debug, Clone, PartialEq)]
pub struct ViewModel {
    pub layer: Layer,
    /// Atlas county indices in view, in fips order.
    pub counties: Vec<usize>,
    /// Parallel to `counties`.
    pub styles: Vec<CountyStyle>,
    /// Arcs bounding at least one county in view, with their category,
    /// sorted by (category, arc index).
    pub arcs: Vec<(usize, ArcCategory)>,
    pub outlines: Vec<Outline>,
    pub legend: Legend,
}

impl ViewModel {
    pub fn textured(&self) -> bool {
        self.styles.iter().any(|s| s.texture)
    }
}

/// Resolves a view against an atlas: which counties, arcs and region outlines
/// it shows, and how each county is styled.
pub fn view_model(atlas: &Atlas, spec: &ViewSpec, exec: Execution) -> Result<ViewModel> {
    let all = atlas.counties();
    let mut counties: Vec<usize> = match &spec.view {
        View::National => (0..all.len()).collect(),
        View::State(code) => {
            if !atlas.states().iter().any(|s| s == code) {
                return Err(Error::UnknownState(code.clone()));
            }
            (0..all.len()).filter(|&i| &all[i].state == code).collect()
        }
    };
    if counties.is_empty() {
        return Err(Error::EmptyView(spec.view.to_string()));
    }
    counties.sort_by(|&a, &b| all[a].fips.cmp(&all[b].fips));

    let styles = exec.map(&counties, |&i| style_for(&all[i], atlas, spec.layer, &spec.style));

    let mut in_view = vec![false; all.len()];
    for &i in &counties {
        in_view[i] = true;
    }
    let visible = |s: Side| s.county().is_some_and(|c| in_view[c]);
    let adjacency = atlas.topology().adjacency();
    let categories = exec.map_range(adjacency.len(), |i| {
        let sides = adjacency[i];
        (visible(sides.left) || visible(sides.right)).then(|| (i, categorize_arc(sides, all, spec.layer)))
    });
    let mut arcs: Vec<(usize, ArcCategory)> = categories.into_iter().flatten().collect();
    arcs.sort_by_key(|&(i, c)| (c, i));

    let kinds: &[RegionKind] = match spec.layer {
        Layer::Rigo => &[RegionKind::Rigo],
        Layer::Msa => &[RegionKind::Msa],
        Layer::Both => &[RegionKind::Rigo, RegionKind::Msa],
    };
    let mut keys = Vec::new();
    let mut sets = Vec::new();
    for r in atlas.regions().iter().filter(|r| kinds.contains(&r.kind)) {
        let members: Vec<usize> = r
            .members
            .iter()
            .filter_map(|f| atlas.county_index(f))
            .filter(|&i| in_view[i])
            .collect();
        if !members.is_empty() {
            keys.push((r.kind, r.code.clone()));
            sets.push(members);
        }
    }
    let shapes = dissolve_all(atlas.topology(), &sets, exec)?;
    let outlines = keys
        .into_iter()
        .zip(shapes)
        .map(|((kind, code), shape)| Outline { kind, code, shape })
        .collect();

    Ok(ViewModel {
        layer: spec.layer,
        counties,
        styles,
        arcs,
        outlines,
        legend: build_legend(atlas, spec.layer, &spec.style),
    })
}
