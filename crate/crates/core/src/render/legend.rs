use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::style::{RampId, StyleConfig, NEUTRAL};
use crate::atlas::Atlas;
use crate::model::{Layer, RegionKind};
use crate::topology::ArcCategory;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Swatch {
    Fill { color: String, ramp: RampId, step: usize },
    Neutral { color: String },
    Hatch,
    Line { category: ArcCategory, width: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LegendEntry {
    pub swatch: Swatch,
    pub label: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Legend {
    pub title: String,
    pub entries: Vec<LegendEntry>,
}

/// "[min–max]" population of the regions of `kind` in each bin, or "(none)".
fn bin_labels(atlas: &Atlas, kind: RegionKind) -> Vec<String> {
    let k = atlas.bins().k;
    let mut ranges: BTreeMap<usize, (u64, u64)> = BTreeMap::new();
    for r in atlas.regions().iter().filter(|r| r.kind == kind) {
        if let Some(bin) = atlas.bins().get(kind, &r.code) {
            let e = ranges.entry(bin).or_insert((r.population, r.population));
            e.0 = e.0.min(r.population);
            e.1 = e.1.max(r.population);
        }
    }
    (0..k)
        .map(|b| match ranges.get(&b) {
            Some((lo, hi)) => format!("[{lo}\u{2013}{hi}]"),
            None => "(none)".to_string(),
        })
        .collect()
}

fn ramp_entries(style: &StyleConfig, ramp: RampId, labels: Vec<String>, prefix: &str) -> Vec<LegendEntry> {
    labels
        .into_iter()
        .enumerate()
        .map(|(step, label)| LegendEntry {
            swatch: Swatch::Fill {
                color: style.ramp(ramp)[step].clone(),
                ramp,
                step,
            },
            label: format!("{prefix}{label}"),
        })
        .collect()
}

/// Legend for a layer: one swatch per ramp step, the neutral entry, the
/// hatch entry where the layer shows texture, and the line-weight key.
///
/// On the combined layer the RIGO and MSA ramps keep their population
/// labels; the mixed ramp is labelled by step, since a mixed step blends two
/// independent ranks.
pub fn build_legend(atlas: &Atlas, layer: Layer, style: &StyleConfig) -> Legend {
    let mut entries = Vec::new();
    let title = match layer {
        Layer::Rigo => {
            entries.extend(ramp_entries(style, RampId::Rigo, bin_labels(atlas, RegionKind::Rigo), ""));
            "RIGO population"
        }
        Layer::Msa => {
            entries.extend(ramp_entries(style, RampId::Msa, bin_labels(atlas, RegionKind::Msa), ""));
            "MSA population"
        }
        Layer::Both => {
            entries.extend(ramp_entries(style, RampId::Rigo, bin_labels(atlas, RegionKind::Rigo), "RIGO only "));
            entries.extend(ramp_entries(style, RampId::Msa, bin_labels(atlas, RegionKind::Msa), "MSA only "));
            let steps = (1..=atlas.bins().k).map(|s| format!("step {s}")).collect();
            entries.extend(ramp_entries(style, RampId::Both, steps, "RIGO and MSA "));
            "RIGO and MSA affiliation"
        }
    };
    entries.push(LegendEntry {
        swatch: Swatch::Neutral { color: NEUTRAL.into() },
        label: "no affiliation".into(),
    });
    if layer.shows_texture() {
        entries.push(LegendEntry {
            swatch: Swatch::Hatch,
            label: "two RIGO affiliations".into(),
        });
    }
    let region_label = match layer {
        Layer::Rigo => "RIGO boundary",
        Layer::Msa => "MSA boundary",
        Layer::Both => "RIGO or MSA boundary",
    };
    for (category, width, label) in [
        (ArcCategory::RegionBoundary, style.strokes.region, region_label),
        (ArcCategory::StateBoundary, style.strokes.state, "state boundary"),
        (ArcCategory::NationalOutline, style.strokes.national, "national outline"),
    ] {
        entries.push(LegendEntry {
            swatch: Swatch::Line { category, width },
            label: label.into(),
        });
    }
    Legend {
        title: title.into(),
        entries,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixture;

    fn fills(l: &Legend) -> Vec<&LegendEntry> {
        l.entries.iter().filter(|e| matches!(e.swatch, Swatch::Fill { .. })).collect()
    }

    #[test]
    fn rigo_legend() {
        let atlas = fixture::atlas();
        let l = build_legend(&atlas, Layer::Rigo, &StyleConfig::default());
        let f = fills(&l);
        assert_eq!(f.len(), 5);
        assert_eq!(f[0].label, "[500\u{2013}500]");
        assert_eq!(f[1].label, "[1400\u{2013}1400]");
        assert_eq!(f[2].label, "(none)");
        assert_eq!(f[3].label, "[5400\u{2013}5400]");
        assert!(l.entries.iter().any(|e| e.swatch == Swatch::Hatch && e.label == "two RIGO affiliations"));
        assert!(l.entries.iter().any(|e| e.label == "no affiliation"));
        let lines = l.entries.iter().filter(|e| matches!(e.swatch, Swatch::Line { .. })).count();
        assert_eq!(lines, 3);
    }

    #[test]
    fn msa_legend_has_no_hatch() {
        let atlas = fixture::atlas();
        let l = build_legend(&atlas, Layer::Msa, &StyleConfig::default());
        assert!(!l.entries.iter().any(|e| e.swatch == Swatch::Hatch));
        // M2 = 1600 rank 0, M1 = 1800 rank 1 -> bins 0 and 2
        let f = fills(&l);
        assert_eq!(f[0].label, "[1600\u{2013}1600]");
        assert_eq!(f[1].label, "(none)");
        assert_eq!(f[2].label, "[1800\u{2013}1800]");
    }

    #[test]
    fn both_legend_has_three_ramps() {
        let atlas = fixture::atlas();
        let l = build_legend(&atlas, Layer::Both, &StyleConfig::default());
        assert_eq!(fills(&l).len(), 15);
        assert!(l.entries.iter().any(|e| e.swatch == Swatch::Hatch));
    }
}
