//! The built atlas and its JSON document form.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use serde::{Deserialize, Serialize};

use crate::classification::{categorize_counties, compute_bins, Bins, DEFAULT_BINS};
use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::ingest::PreAtlas;
use crate::model::{County, OverlapCategory, Region, RegionKind, SecondaryAffiliation};
use crate::render::StyleConfig;
use crate::stats::{compute_stats, DashboardStats};
use crate::topology::quantize::{quantize_county, DEFAULT_SCALE};
use crate::topology::{build_topology, ProjectionParams, Topology, TopologyFile};
use crate::validate::{validate_atlas, Finding, ValidationReport};

pub const ATLAS_VERSION: u32 = 1;

/// Serialized atlas. Field order and map types are fixed so the same atlas
/// always serializes to the same bytes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AtlasFile {
    pub version: u32,
    pub counties: Vec<County>,
    pub regions: Vec<Region>,
    pub secondary: Vec<SecondaryAffiliation>,
    pub topology: TopologyFile,
    pub categories: BTreeMap<String, OverlapCategory>,
    pub bins: Bins,
    pub stats: DashboardStats,
    pub style_defaults: StyleConfig,
}

#[derive(Debug, Clone)]
pub struct BuildOptions {
    pub projection: ProjectionParams,
    /// Grid cells per projected unit.
    pub scale: f64,
    pub bins: usize,
    pub exec: Execution,
}

impl Default for BuildOptions {
    fn default() -> Self {
        BuildOptions {
            projection: ProjectionParams::us_albers(),
            scale: DEFAULT_SCALE,
            bins: DEFAULT_BINS,
            exec: Execution::default(),
        }
    }
}

/// Immutable, validated atlas.
#[derive(Debug, Clone)]
pub struct Atlas {
    counties: Vec<County>,
    regions: Vec<Region>,
    secondary: Vec<SecondaryAffiliation>,
    topology: Topology,
    categories: BTreeMap<String, OverlapCategory>,
    bins: Bins,
    stats: DashboardStats,
    style: StyleConfig,
    index: HashMap<String, usize>,
    states: Vec<String>,
}

impl Atlas {
    /// Projects, quantizes and links the assembled inputs. Rings that
    /// collapse on the grid are dropped and reported as warnings.
    pub fn build(pre: PreAtlas, opts: &BuildOptions) -> Result<(Atlas, Vec<Finding>)> {
        if !(opts.scale > 0.0 && opts.scale.is_finite()) {
            return Err(Error::BadAtlas(format!("quantization scale must be positive, got {}", opts.scale)));
        }
        if opts.bins == 0 {
            return Err(Error::BadAtlas("bin count must be at least 1".into()));
        }
        let projector = opts.projection.projector();
        let quantized = opts.exec.map_range(pre.counties.len(), |i| {
            let planar = pre.rings[i]
                .iter()
                .map(|ring| {
                    ring.iter()
                        .map(|&[lon, lat]| projector.project(lon, lat).map(|(x, y)| [x, y]))
                        .collect::<Result<Vec<_>>>()
                })
                .collect::<Result<Vec<_>>>()?;
            quantize_county(&pre.counties[i].fips, &planar, opts.scale)
        });
        let mut rings = Vec::with_capacity(quantized.len());
        let mut errors = Vec::new();
        let mut warnings = Vec::new();
        for (county, q) in pre.counties.iter().zip(quantized) {
            match q {
                Ok(q) => {
                    if q.dropped > 0 {
                        warnings.push(Finding::warning(
                            "DEGENERATE_RING",
                            &county.fips,
                            format!("{} ring(s) collapsed on the grid and were removed", q.dropped),
                        ));
                    }
                    rings.push(q.rings);
                }
                Err(e) => errors.push(e),
            }
        }
        if let Some(e) = Error::collect(errors) {
            return Err(e);
        }
        let topology = build_topology(&rings, opts.scale)?;
        let categories = categorize_counties(&pre.counties, &pre.regions, &pre.secondary);
        let bins = compute_bins(&pre.regions, opts.bins);
        let stats = compute_stats(&pre.counties, &pre.regions, &categories);
        let mut style = StyleConfig::default();
        if opts.bins != DEFAULT_BINS {
            style = style.resampled(opts.bins);
        }
        let atlas = Atlas::from_parts(
            pre.counties,
            pre.regions,
            pre.secondary,
            topology,
            categories,
            bins,
            stats,
            style,
        );
        Ok((atlas, warnings))
    }

    #[allow(clippy::too_many_arguments)]
    fn from_parts(
        counties: Vec<County>,
        regions: Vec<Region>,
        secondary: Vec<SecondaryAffiliation>,
        topology: Topology,
        categories: BTreeMap<String, OverlapCategory>,
        bins: Bins,
        stats: DashboardStats,
        style: StyleConfig,
    ) -> Atlas {
        let index = counties.iter().enumerate().map(|(i, c)| (c.fips.clone(), i)).collect();
        let states: BTreeSet<String> = counties.iter().map(|c| c.state.clone()).collect();
        Atlas {
            counties,
            regions,
            secondary,
            topology,
            categories,
            bins,
            stats,
            style,
            index,
            states: states.into_iter().collect(),
        }
    }

    /// Accepts a document only if it validates without errors; the report
    /// is returned either way so warnings can be shown.
    pub fn from_file(file: AtlasFile) -> std::result::Result<(Atlas, ValidationReport), ValidationReport> {
        let report = validate_atlas(&file);
        if !report.is_ok() {
            return Err(report);
        }
        let fips: Vec<String> = file.counties.iter().map(|c| c.fips.clone()).collect();
        let topology = match file.topology.decode(&fips) {
            Ok(t) => t,
            Err(e) => {
                let mut report = report;
                report.findings.push(Finding::error("BAD_TOPOLOGY", "topology", e.to_string()));
                return Err(report);
            }
        };
        let atlas = Atlas::from_parts(
            file.counties,
            file.regions,
            file.secondary,
            topology,
            file.categories,
            file.bins,
            file.stats,
            file.style_defaults,
        );
        Ok((atlas, report))
    }

    /// Parses and validates an atlas document. Validation errors are
    /// folded into a single `E_BAD_ATLAS`.
    pub fn from_json(text: &str) -> Result<Atlas> {
        let file: AtlasFile = serde_json::from_str(text).map_err(|e| Error::BadAtlas(e.to_string()))?;
        match Atlas::from_file(file) {
            Ok((atlas, _)) => Ok(atlas),
            Err(report) => {
                let msgs: Vec<String> = report.errors().map(|f| f.to_string()).collect();
                Err(Error::BadAtlas(msgs.join("; ")))
            }
        }
    }

    pub fn to_file(&self) -> AtlasFile {
        let fips: Vec<String> = self.counties.iter().map(|c| c.fips.clone()).collect();
        AtlasFile {
            version: ATLAS_VERSION,
            counties: self.counties.clone(),
            regions: self.regions.clone(),
            secondary: self.secondary.clone(),
            topology: TopologyFile::encode(&self.topology, &fips),
            categories: self.categories.clone(),
            bins: self.bins.clone(),
            stats: self.stats.clone(),
            style_defaults: self.style.clone(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_file()).expect("atlas serializes")
    }

    pub fn validate(&self) -> ValidationReport {
        validate_atlas(&self.to_file())
    }

    /// In fips order.
    pub fn counties(&self) -> &[County] {
        &self.counties
    }

    /// In (kind, code) order.
    pub fn regions(&self) -> &[Region] {
        &self.regions
    }

    pub fn secondary(&self) -> &[SecondaryAffiliation] {
        &self.secondary
    }

    /// County `i` of the topology is `counties()[i]`.
    pub fn topology(&self) -> &Topology {
        &self.topology
    }

    pub fn categories(&self) -> &BTreeMap<String, OverlapCategory> {
        &self.categories
    }

    pub fn bins(&self) -> &Bins {
        &self.bins
    }

    pub fn stats(&self) -> &DashboardStats {
        &self.stats
    }

    pub fn style(&self) -> &StyleConfig {
        &self.style
    }

    /// Sorted state codes.
    pub fn states(&self) -> &[String] {
        &self.states
    }

    pub fn county_index(&self, fips: &str) -> Option<usize> {
        self.index.get(fips).copied()
    }

    pub fn county(&self, fips: &str) -> Option<&County> {
        self.county_index(fips).map(|i| &self.counties[i])
    }

    pub fn region(&self, kind: RegionKind, code: &str) -> Option<&Region> {
        self.regions.iter().find(|r| r.kind == kind && r.code == code)
    }

    /// Every RIGO the county belongs to, primary first.
    pub fn rigos_of(&self, fips: &str) -> Vec<&str> {
        let primary = self.county(fips).and_then(|c| c.rigo.as_deref());
        let mut out: Vec<&str> = primary.into_iter().collect();
        out.extend(
            self.secondary
                .iter()
                .filter(|s| s.fips == fips && Some(s.rigo_code.as_str()) != primary)
                .map(|s| s.rigo_code.as_str()),
        );
        out
    }
}
