//! The 16-county reference grid and synthetic grids for tests and benches.
//!
//! The reference grid is a 4×4 block of unit squares; county `(r, c)` covers
//! `[c, c+1] × [r, r+1]`, has fips `fips(r, c)`, lies in state `AA` for
//! columns 0–1 and `BB` for columns 2–3, and has population
//! `100 · (4r + c + 1)`. Its input files live in the repository's
//! `fixtures/` directory.

use serde_json::json;

use crate::atlas::{Atlas, BuildOptions};
use crate::exec::Execution;
use crate::ingest::{
    assemble, parse_affiliations, parse_geometry, parse_regions, parse_secondary, AffiliationRow, PreAtlas,
    RawGeometrySet, RegionRow,
};
use crate::model::SecondaryAffiliation;
use crate::topology::quantize::FIXTURE_SCALE;
use crate::topology::{ProjectionParams, QPoint, QRing};

pub const GEOMETRY: &str = include_str!("../../../fixtures/geometry.geojson");
pub const AFFILIATIONS: &str = include_str!("../../../fixtures/affiliations.csv");
pub const REGIONS: &str = include_str!("../../../fixtures/regions.csv");
pub const SECONDARY: &str = include_str!("../../../fixtures/secondary.csv");

/// Fips of the reference county in row `r`, column `c`.
pub fn fips(r: usize, c: usize) -> String {
    format!("{:05}", r * 4 + c)
}

pub fn geometry_geojson() -> String {
    GEOMETRY.to_string()
}

pub fn affiliations_csv() -> String {
    AFFILIATIONS.to_string()
}

pub fn regions_csv() -> String {
    REGIONS.to_string()
}

pub fn secondary_csv() -> String {
    SECONDARY.to_string()
}

/// The four input documents of an atlas, as text.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FixtureInputs {
    pub geometry: String,
    pub affiliations: String,
    pub regions: String,
    pub secondary: String,
}

impl FixtureInputs {
    pub fn reference() -> Self {
        FixtureInputs {
            geometry: geometry_geojson(),
            affiliations: affiliations_csv(),
            regions: regions_csv(),
            secondary: secondary_csv(),
        }
    }

    pub fn parse(&self) -> (RawGeometrySet, Vec<AffiliationRow>, Vec<RegionRow>, Vec<SecondaryAffiliation>) {
        (
            parse_geometry(&self.geometry).expect("fixture geometry parses"),
            parse_affiliations(&self.affiliations).expect("fixture affiliations parse"),
            parse_regions(&self.regions).expect("fixture regions parse"),
            parse_secondary(&self.secondary).expect("fixture secondary parses"),
        )
    }

    pub fn pre_atlas(&self) -> PreAtlas {
        let (g, a, r, s) = self.parse();
        assemble(&g, &a, &r, &s).expect("fixture assembles")
    }

    /// Builds with the identity projection at scale 1.
    pub fn build(&self, exec: Execution) -> Atlas {
        let opts = BuildOptions {
            projection: ProjectionParams::Identity,
            scale: FIXTURE_SCALE,
            exec,
            ..BuildOptions::default()
        };
        Atlas::build(self.pre_atlas(), &opts).expect("fixture builds").0
    }
}

pub fn parsed_inputs() -> (RawGeometrySet, Vec<AffiliationRow>, Vec<RegionRow>, Vec<SecondaryAffiliation>) {
    FixtureInputs::reference().parse()
}

pub fn pre_atlas() -> PreAtlas {
    FixtureInputs::reference().pre_atlas()
}

pub fn atlas() -> Atlas {
    FixtureInputs::reference().build(Execution::default())
}

pub fn atlas_built_with(exec: Execution) -> Atlas {
    FixtureInputs::reference().build(exec)
}

/// The reference atlas after editing its input text.
pub fn atlas_with(edit: impl FnOnce(&mut FixtureInputs)) -> Atlas {
    let mut inputs = FixtureInputs::reference();
    edit(&mut inputs);
    inputs.build(Execution::default())
}

/// The reference atlas with every county moved into state `AA`, so no
/// region crosses a state line.
pub fn single_state_atlas() -> Atlas {
    atlas_with(|inputs| inputs.geometry = inputs.geometry.replace("\"BB\"", "\"AA\""))
}

/// Unit square with lower-left corner `(x, y)` on a grid of spacing `s`,
/// counter-clockwise.
pub fn cell(x: i64, y: i64, s: i64) -> QRing {
    vec![
        QPoint::new(x * s, y * s),
        QPoint::new((x + 1) * s, y * s),
        QPoint::new((x + 1) * s, (y + 1) * s),
        QPoint::new(x * s, (y + 1) * s),
        QPoint::new(x * s, y * s),
    ]
}

/// Quantized rings of a `rows × cols` grid of unit cells, row-major.
pub fn grid_rings(rows: usize, cols: usize) -> Vec<Vec<QRing>> {
    (0..rows)
        .flat_map(|r| (0..cols).map(move |c| vec![cell(c as i64, r as i64, 1)]))
        .collect()
}

/// Inputs for a `rows × cols` grid of unit-square counties with block-shaped
/// regions.
///
/// States are bands of 8 columns. RIGOs are 5×5 blocks covering every
/// county; MSAs are 4×4 blocks on a checkerboard, so about half the counties
/// have one. A county on the top row of a RIGO block whose right neighbour
/// falls in the next block gets that block as a secondary RIGO.
pub fn synthetic_grid(rows: usize, cols: usize) -> FixtureInputs {
    assert!(rows * cols <= 100_000, "fips are 5 digits");
    let id = |r: usize, c: usize| r * cols + c;
    let state = |c: usize| {
        let band = c / 8;
        let letters = [b'A' + (band / 26) as u8, b'A' + (band % 26) as u8];
        String::from_utf8(letters.to_vec()).unwrap()
    };
    let rigo = |r: usize, c: usize| format!("R{}_{}", r / 5, c / 5);
    let msa = |r: usize, c: usize| (r / 4 + c / 4).is_multiple_of(2).then(|| format!("M{}_{}", r / 4, c / 4));

    let mut features = Vec::with_capacity(rows * cols);
    let mut affiliations = String::from("county_fips,rigo_code,msa_code\n");
    let mut secondary = String::from("county_fips,rigo_code\n");
    let mut rigos = std::collections::BTreeSet::new();
    let mut msas = std::collections::BTreeSet::new();
    for r in 0..rows {
        for c in 0..cols {
            let i = id(r, c);
            let (x, y) = (c as f64, r as f64);
            features.push(json!({
                "type": "Feature",
                "properties": {
                    "fips": format!("{i:05}"),
                    "name": format!("Synthetic {r}-{c}"),
                    "state": state(c),
                    "population": 1000 + (i as u64 * 7919) % 250_000,
                },
                "geometry": {
                    "type": "Polygon",
                    "coordinates": [[[x, y], [x + 1.0, y], [x + 1.0, y + 1.0], [x, y + 1.0], [x, y]]],
                },
            }));
            let m = msa(r, c);
            affiliations.push_str(&format!("{i:05},{},{}\n", rigo(r, c), m.clone().unwrap_or_default()));
            rigos.insert(rigo(r, c));
            msas.extend(m);
            if r % 5 == 0 && c + 1 < cols && (c + 1) % 5 == 0 {
                secondary.push_str(&format!("{i:05},{}\n", rigo(r, c + 1)));
            }
        }
    }
    let mut regions = String::from("code,kind,name,population\n");
    for code in &rigos {
        regions.push_str(&format!("{code},RIGO,Council {code},\n"));
    }
    for code in &msas {
        regions.push_str(&format!("{code},MSA,Metro {code},\n"));
    }
    FixtureInputs {
        geometry: json!({ "type": "FeatureCollection", "features": features }).to_string(),
        affiliations,
        regions,
        secondary,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::RegionKind;

    #[test]
    fn reference_files_match_description() {
        let pre = pre_atlas();
        for r in 0..4 {
            for c in 0..4 {
                let county = &pre.counties[r * 4 + c];
                assert_eq!(county.fips, fips(r, c));
                assert_eq!(county.state, if c < 2 { "AA" } else { "BB" });
                assert_eq!(county.population, 100 * (4 * r as u64 + c as u64 + 1));
                let ring = &pre.rings[r * 4 + c][0];
                let (x, y) = (c as f64, r as f64);
                assert_eq!(ring[0], [x, y]);
                assert_eq!(ring[2], [x + 1.0, y + 1.0]);
            }
        }
        assert_eq!(fips(1, 2), "00006");
        assert_eq!(fips(3, 3), "00015");
    }

    #[test]
    fn synthetic_grid_builds() {
        let inputs = synthetic_grid(12, 17);
        let atlas = inputs.build(Execution::default());
        assert_eq!(atlas.counties().len(), 12 * 17);
        assert!(atlas.validate().is_ok());
        assert_eq!(atlas.regions().iter().filter(|r| r.kind == RegionKind::Rigo).count(), 3 * 4);
        assert!(!atlas.secondary().is_empty());
        assert_eq!(atlas.states(), ["AA", "AB", "AC"]);
    }
}
