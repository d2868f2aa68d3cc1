//! Parsing of county geometry and the affiliation, region and secondary
//! tables, and assembly into a [`PreAtlas`].
//!
//! Tables are comma-separated UTF-8 with a mandatory header row; quoted
//! fields use double quotes, and both LF and CRLF line endings are accepted.
//! Cells are whitespace-trimmed and an empty cell means "absent". A file that
//! is entirely blank parses as zero rows.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use serde_json::Value;

use crate::error::{Error, Result};
use crate::model::{County, Region, RegionKind, SecondaryAffiliation};

pub const AFFILIATIONS_HEADER: [&str; 3] = ["county_fips", "rigo_code", "msa_code"];
pub const REGIONS_HEADER: [&str; 4] = ["code", "kind", "name", "population"];
pub const SECONDARY_HEADER: [&str; 2] = ["county_fips", "rigo_code"];

#[derive(Debug, Clone, PartialEq)]
pub struct RawFeature {
    pub fips: String,
    pub name: String,
    pub state: String,
    /// Optional `population` property; 0 when absent.
    pub population: u64,
    /// Closed rings in lon/lat degrees. Outer rings run counter-clockwise,
    /// holes clockwise; parts of a MultiPolygon are simply concatenated.
    pub rings: Vec<Vec<[f64; 2]>>,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct RawGeometrySet {
    pub features: Vec<RawFeature>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AffiliationRow {
    pub fips: String,
    pub rigo_code: Option<String>,
    pub msa_code: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RegionRow {
    pub code: String,
    pub kind: RegionKind,
    pub name: String,
    pub population: Option<u64>,
}

/// Counties and resolved regions, not yet projected or quantized.
#[derive(Debug, Clone, PartialEq)]
pub struct PreAtlas {
    /// Sorted by fips.
    pub counties: Vec<County>,
    /// Planar-input rings per county, aligned with `counties`.
    pub rings: Vec<Vec<Vec<[f64; 2]>>>,
    /// Sorted by (kind, code).
    pub regions: Vec<Region>,
    /// Sorted by fips.
    pub secondary: Vec<SecondaryAffiliation>,
}

// ---------------------------------------------------------------- geometry

pub fn parse_geometry(document: &str) -> Result<RawGeometrySet> {
    let root: Value = serde_json::from_str(document).map_err(|e| Error::BadJson(e.to_string()))?;
    if root.get("type").and_then(Value::as_str) != Some("FeatureCollection") {
        return Err(Error::BadJson("top-level object is not a FeatureCollection".into()));
    }
    let features = root
        .get("features")
        .and_then(Value::as_array)
        .ok_or_else(|| Error::BadJson("FeatureCollection has no features array".into()))?;

    let mut out = Vec::with_capacity(features.len());
    let mut seen: HashMap<String, usize> = HashMap::new();
    for (index, feature) in features.iter().enumerate() {
        let props = feature.get("properties").filter(|p| p.is_object());
        let prop = |name: &str| -> Result<String> {
            let v = props
                .and_then(|p| p.get(name))
                .filter(|v| !v.is_null())
                .ok_or_else(|| Error::MissingProp { index, prop: name.into() })?;
            Ok(match v {
                Value::String(s) => s.trim().to_string(),
                Value::Number(n) if name == "fips" => format!("{:05}", n.as_u64().unwrap_or_default()),
                other => other.to_string(),
            })
        };
        let fips = prop("fips")?;
        let name = prop("name")?;
        let state = prop("state")?;
        let population = match props.and_then(|p| p.get("population")) {
            None | Some(Value::Null) => 0,
            Some(v) => v.as_u64().ok_or_else(|| {
                Error::BadJson(format!("feature {index}: population must be a non-negative integer"))
            })?,
        };
        let geometry = feature.get("geometry").unwrap_or(&Value::Null);
        let rings = parse_polygonal(index, geometry)?;
        if let Some(first) = seen.insert(fips.clone(), index) {
            return Err(Error::DupFeature { fips, first, second: index });
        }
        out.push(RawFeature {
            fips,
            name,
            state,
            population,
            rings,
        });
    }
    Ok(RawGeometrySet { features: out })
}

fn parse_polygonal(index: usize, geometry: &Value) -> Result<Vec<Vec<[f64; 2]>>> {
    let kind = geometry.get("type").and_then(Value::as_str).unwrap_or("null");
    let coords = geometry.get("coordinates");
    let bad = |msg: &str| Error::BadJson(format!("feature {index}: {msg}"));
    let polygons: Vec<&Value> = match kind {
        "Polygon" => vec![coords.ok_or_else(|| bad("missing coordinates"))?],
        "MultiPolygon" => coords
            .and_then(Value::as_array)
            .ok_or_else(|| bad("MultiPolygon coordinates must be an array"))?
            .iter()
            .collect(),
        other => {
            return Err(Error::GeomType {
                index,
                kind: other.to_string(),
            })
        }
    };
    let mut rings = Vec::new();
    for polygon in polygons {
        let parts = polygon.as_array().ok_or_else(|| bad("polygon must be an array of rings"))?;
        for (k, ring) in parts.iter().enumerate() {
            let mut pts = ring
                .as_array()
                .ok_or_else(|| bad("ring must be an array of positions"))?
                .iter()
                .map(|pos| {
                    let xy = pos.as_array().filter(|a| a.len() >= 2);
                    match xy.map(|a| (a[0].as_f64(), a[1].as_f64())) {
                        Some((Some(x), Some(y))) => Ok([x, y]),
                        _ => Err(bad("position must be [lon, lat]")),
                    }
                })
                .collect::<Result<Vec<_>>>()?;
            if pts.is_empty() {
                continue;
            }
            if pts.first() != pts.last() {
                pts.push(pts[0]);
            }
            let ccw = signed_area(&pts) > 0.0;
            let outer = k == 0;
            if ccw != outer {
                pts.reverse();
            }
            rings.push(pts);
        }
    }
    Ok(rings)
}

fn signed_area(ring: &[[f64; 2]]) -> f64 {
    ring.windows(2).map(|w| w[0][0] * w[1][1] - w[1][0] * w[0][1]).sum()
}

// ---------------------------------------------------------------- tables

fn reader(text: &str) -> csv::Reader<&[u8]> {
    csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .flexible(false)
        .from_reader(text.as_bytes())
}

/// 1-based line of the record starting at a byte offset. With CRLF input the
/// reader reports records as starting on the `\n` of the previous line, so
/// leading line-break bytes are skipped first.
fn line_at(text: &str, byte: u64) -> u64 {
    let bytes = text.as_bytes();
    let mut end = (byte as usize).min(bytes.len());
    while end < bytes.len() && matches!(bytes[end], b'\r' | b'\n') {
        end += 1;
    }
    bytes[..end].iter().filter(|&&b| b == b'\n').count() as u64 + 1
}

fn csv_error(text: &str, e: csv::Error) -> Error {
    let line = e.position().map_or(0, |p| line_at(text, p.byte()));
    Error::BadRow {
        line,
        message: e.to_string(),
    }
}

/// Reads every record after checking the header. Yields (line, cells).
fn read_table(text: &str, expected: &[&str]) -> Result<Vec<(u64, Vec<String>)>> {
    if text.trim().is_empty() {
        return Ok(Vec::new());
    }
    let mut rdr = reader(text);
    let header = rdr.headers().map_err(|e| csv_error(text, e))?.clone();
    let found: Vec<&str> = header.iter().map(|h| h.trim_start_matches('\u{feff}')).collect();
    if found != expected {
        return Err(Error::BadHeader {
            expected: expected.join(","),
            found: found.join(","),
        });
    }
    let mut rows = Vec::new();
    for rec in rdr.records() {
        let rec = rec.map_err(|e| csv_error(text, e))?;
        let line = rec.position().map_or(0, |p| line_at(text, p.byte()));
        rows.push((line, rec.iter().map(str::to_string).collect()));
    }
    Ok(rows)
}

fn opt(cell: &str) -> Option<String> {
    (!cell.is_empty()).then(|| cell.to_string())
}

fn require_fips(line: u64, cell: &str) -> Result<String> {
    if crate::model::is_valid_fips(cell) {
        Ok(cell.to_string())
    } else {
        Err(Error::BadRow {
            line,
            message: format!("county_fips {cell:?} is not a 5-digit code"),
        })
    }
}

pub fn parse_affiliations(text: &str) -> Result<Vec<AffiliationRow>> {
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for (line, cells) in read_table(text, &AFFILIATIONS_HEADER)? {
        let fips = require_fips(line, &cells[0])?;
        if !seen.insert(fips.clone()) {
            return Err(Error::DupKey { line, key: fips });
        }
        out.push(AffiliationRow {
            fips,
            rigo_code: opt(&cells[1]),
            msa_code: opt(&cells[2]),
        });
    }
    Ok(out)
}

pub fn parse_regions(text: &str) -> Result<Vec<RegionRow>> {
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for (line, cells) in read_table(text, &REGIONS_HEADER)? {
        if cells[0].is_empty() {
            return Err(Error::BadRow {
                line,
                message: "empty region code".into(),
            });
        }
        let kind: RegionKind = cells[1].parse().map_err(|message| Error::BadRow { line, message })?;
        let population = match cells[3].as_str() {
            "" => None,
            p => Some(p.parse::<u64>().map_err(|_| Error::BadRow {
                line,
                message: format!("population {p:?} is not a non-negative integer"),
            })?),
        };
        if !seen.insert((cells[0].clone(), kind)) {
            return Err(Error::DupKey {
                line,
                key: format!("{},{}", cells[0], kind),
            });
        }
        out.push(RegionRow {
            code: cells[0].clone(),
            kind,
            name: cells[2].clone(),
            population,
        });
    }
    Ok(out)
}

pub fn parse_secondary(text: &str) -> Result<Vec<SecondaryAffiliation>> {
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for (line, cells) in read_table(text, &SECONDARY_HEADER)? {
        let fips = require_fips(line, &cells[0])?;
        if cells[1].is_empty() {
            return Err(Error::BadRow {
                line,
                message: "empty rigo_code".into(),
            });
        }
        if !seen.insert(fips.clone()) {
            return Err(Error::DupKey { line, key: fips });
        }
        out.push(SecondaryAffiliation {
            fips,
            rigo_code: cells[1].clone(),
        });
    }
    Ok(out)
}

fn write_table<I>(header: &[&str], rows: I) -> String
where
    I: IntoIterator<Item = Vec<String>>,
{
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
    w.write_record(header).expect("in-memory write");
    for r in rows {
        w.write_record(&r).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("csv output is utf-8")
}

pub fn write_affiliations(rows: &[AffiliationRow]) -> String {
    write_table(
        &AFFILIATIONS_HEADER,
        rows.iter().map(|r| {
            vec![
                r.fips.clone(),
                r.rigo_code.clone().unwrap_or_default(),
                r.msa_code.clone().unwrap_or_default(),
            ]
        }),
    )
}

pub fn write_regions(rows: &[RegionRow]) -> String {
    write_table(
        &REGIONS_HEADER,
        rows.iter().map(|r| {
            vec![
                r.code.clone(),
                r.kind.to_string(),
                r.name.clone(),
                r.population.map(|p| p.to_string()).unwrap_or_default(),
            ]
        }),
    )
}

pub fn write_secondary(rows: &[SecondaryAffiliation]) -> String {
    write_table(
        &SECONDARY_HEADER,
        rows.iter().map(|r| vec![r.fips.clone(), r.rigo_code.clone()]),
    )
}

// ---------------------------------------------------------------- assembly

/// Resolves member sets and checks referential integrity. Every problem is
/// collected before failing.
pub fn assemble(
    raw: &RawGeometrySet,
    affiliations: &[AffiliationRow],
    regions: &[RegionRow],
    secondary: &[SecondaryAffiliation],
) -> Result<PreAtlas> {
    let mut errors = Vec::new();

    let mut features: Vec<&RawFeature> = raw.features.iter().collect();
    features.sort_by(|a, b| a.fips.cmp(&b.fips));
    let known: BTreeSet<&str> = features.iter().map(|f| f.fips.as_str()).collect();
    let catalog: BTreeMap<(RegionKind, &str), &RegionRow> =
        regions.iter().map(|r| ((r.kind, r.code.as_str()), r)).collect();

    let mut members: BTreeMap<(RegionKind, String), BTreeSet<String>> = BTreeMap::new();
    let mut primary: BTreeMap<&str, (Option<String>, Option<String>)> = BTreeMap::new();

    let check_region = |code: &str, kind: RegionKind, errors: &mut Vec<Error>| -> bool {
        if catalog.contains_key(&(kind, code)) {
            true
        } else {
            errors.push(Error::UnknownRegion {
                code: code.to_string(),
                kind: kind.to_string(),
            });
            false
        }
    };

    for row in affiliations {
        if !known.contains(row.fips.as_str()) {
            errors.push(Error::UnknownFips(row.fips.clone()));
            continue;
        }
        let mut rigo = None;
        let mut msa = None;
        if let Some(code) = &row.rigo_code {
            if check_region(code, RegionKind::Rigo, &mut errors) {
                members.entry((RegionKind::Rigo, code.clone())).or_default().insert(row.fips.clone());
                rigo = Some(code.clone());
            }
        }
        if let Some(code) = &row.msa_code {
            if check_region(code, RegionKind::Msa, &mut errors) {
                members.entry((RegionKind::Msa, code.clone())).or_default().insert(row.fips.clone());
                msa = Some(code.clone());
            }
        }
        primary.insert(row.fips.as_str(), (rigo, msa));
    }

    let mut resolved_secondary = Vec::new();
    for row in secondary {
        if !known.contains(row.fips.as_str()) {
            errors.push(Error::UnknownFips(row.fips.clone()));
            continue;
        }
        if !check_region(&row.rigo_code, RegionKind::Rigo, &mut errors) {
            continue;
        }
        match primary.get(row.fips.as_str()).and_then(|p| p.0.as_deref()) {
            None => errors.push(Error::NoPrimary(row.fips.clone())),
            Some(p) if p == row.rigo_code => errors.push(Error::SelfSecondary {
                fips: row.fips.clone(),
                code: row.rigo_code.clone(),
            }),
            Some(_) => {
                members
                    .entry((RegionKind::Rigo, row.rigo_code.clone()))
                    .or_default()
                    .insert(row.fips.clone());
                resolved_secondary.push(row.clone());
            }
        }
    }
    resolved_secondary.sort();

    let population: HashMap<&str, u64> = features.iter().map(|f| (f.fips.as_str(), f.population)).collect();
    let mut out_regions = Vec::new();
    let mut sorted_catalog: Vec<&RegionRow> = regions.iter().collect();
    sorted_catalog.sort_by(|a, b| (a.kind, &a.code).cmp(&(b.kind, &b.code)));
    for row in sorted_catalog {
        let Some(set) = members.remove(&(row.kind, row.code.clone())) else {
            errors.push(Error::EmptyRegion {
                code: row.code.clone(),
                kind: row.kind.to_string(),
            });
            continue;
        };
        let member_sum: u64 = set.iter().map(|f| population[f.as_str()]).sum();
        out_regions.push(Region {
            code: row.code.clone(),
            kind: row.kind,
            name: row.name.clone(),
            population: row.population.unwrap_or(member_sum),
            declared_population: row.population,
            members: set,
        });
    }

    if let Some(err) = Error::collect(errors) {
        return Err(err);
    }

    let counties = features
        .iter()
        .map(|f| {
            let (rigo, msa) = primary.get(f.fips.as_str()).cloned().unwrap_or_default();
            County {
                fips: f.fips.clone(),
                name: f.name.clone(),
                state: f.state.clone(),
                population: f.population,
                rigo,
                msa,
            }
        })
        .collect();
    Ok(PreAtlas {
        counties,
        rings: features.iter().map(|f| f.rings.clone()).collect(),
        regions: out_regions,
        secondary: resolved_secondary,
    })
}
