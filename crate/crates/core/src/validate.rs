//! Whole-atlas invariant checks.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::atlas::AtlasFile;
use crate::classification::{categorize_counties, compute_bins};
use crate::model::{is_valid_fips, is_valid_state, County, RegionKind};
use crate::stats::compute_stats;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Severity {
    Error,
    Warning,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Finding {
    pub severity: Severity,
    pub code: String,
    pub message: String,
    pub subject: String,
    /// Numbers the message refers to, e.g. (declared, member sum).
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub values: Vec<u64>,
}

impl Finding {
    pub fn error(code: &str, subject: impl Into<String>, message: impl Into<String>) -> Self {
        Finding {
            severity: Severity::Error,
            code: code.into(),
            message: message.into(),
            subject: subject.into(),
            values: Vec::new(),
        }
    }

    pub fn warning(code: &str, subject: impl Into<String>, message: impl Into<String>) -> Self {
        Finding {
            severity: Severity::Warning,
            ..Finding::error(code, subject, message)
        }
    }
}

impl fmt::Display for Finding {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sev = match self.severity {
            Severity::Error => "error",
            Severity::Warning => "warning",
        };
        write!(f, "{sev} {} [{}]: {}", self.code, self.subject, self.message)
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub findings: Vec<Finding>,
}

impl ValidationReport {
    pub fn errors(&self) -> impl Iterator<Item = &Finding> {
        self.findings.iter().filter(|f| f.severity == Severity::Error)
    }

    pub fn warnings(&self) -> impl Iterator<Item = &Finding> {
        self.findings.iter().filter(|f| f.severity == Severity::Warning)
    }

    pub fn is_ok(&self) -> bool {
        self.errors().next().is_none()
    }

    fn push(&mut self, f: Finding) {
        self.findings.push(f);
    }
}

/// Checks every atlas invariant on a parsed (not necessarily consistent)
/// atlas document. Structural breakage is reported as error findings.
pub fn validate_atlas(file: &AtlasFile) -> ValidationReport {
    let mut report = ValidationReport::default();
    let r = &mut report;

    if file.version != crate::atlas::ATLAS_VERSION {
        r.push(Finding::error(
            "BAD_VERSION",
            file.version.to_string(),
            format!("unsupported atlas version {}", file.version),
        ));
    }

    // counties
    let mut fips_seen: BTreeSet<&str> = BTreeSet::new();
    for c in &file.counties {
        if !fips_seen.insert(c.fips.as_str()) {
            r.push(Finding::error("DUP_FIPS", &c.fips, format!("fips {} appears more than once", c.fips)));
        }
        if !is_valid_fips(&c.fips) {
            r.push(Finding::error("BAD_FIPS", &c.fips, "fips must be 5 digits"));
        }
        if !is_valid_state(&c.state) {
            r.push(Finding::error("BAD_STATE", &c.fips, format!("state {:?} is not a 2-letter uppercase code", c.state)));
        }
    }
    let population: HashMap<&str, u64> = file.counties.iter().map(|c| (c.fips.as_str(), c.population)).collect();
    // first occurrence of each fips; recomputations use these so a duplicate
    // is reported once, as DUP_FIPS
    let mut first_seen = BTreeSet::new();
    let distinct: Vec<County> = file
        .counties
        .iter()
        .filter(|c| first_seen.insert(c.fips.as_str()))
        .cloned()
        .collect();

    // geometry
    let unique: Vec<String> = fips_seen.iter().map(|s| s.to_string()).collect();
    for extra in file.topology.rings.keys().filter(|k| !fips_seen.contains(k.as_str())) {
        r.push(Finding::error("UNKNOWN_GEOMETRY", extra, "topology has rings for a county not in the atlas"));
    }
    match file.topology.decode(&unique) {
        Err(e) => r.push(Finding::error("BAD_TOPOLOGY", "topology", e.to_string())),
        Ok(topo) => {
            for (i, f) in unique.iter().enumerate() {
                let rings = topo.expand_county(i);
                if rings.is_empty() {
                    r.push(Finding::error("NO_RINGS", f, "county has no rings"));
                }
                for ring in rings {
                    if ring.len() < 4 {
                        r.push(Finding::error("RING_TOO_SHORT", f, format!("ring has {} vertices", ring.len())));
                    } else if ring.first() != ring.last() {
                        r.push(Finding::error("RING_NOT_CLOSED", f, "ring does not close"));
                    }
                }
            }
        }
    }

    // regions
    let mut region_seen = BTreeSet::new();
    let mut msa_of: BTreeMap<&str, Vec<&str>> = BTreeMap::new();
    for reg in &file.regions {
        let subject = format!("{}:{}", reg.kind, reg.code);
        if !region_seen.insert((reg.kind, reg.code.as_str())) {
            r.push(Finding::error("DUP_REGION", &subject, "(code, kind) appears more than once"));
        }
        if reg.members.is_empty() {
            r.push(Finding::error("EMPTY_MEMBERS", &subject, "region has no members"));
        }
        for m in &reg.members {
            if !population.contains_key(m.as_str()) {
                r.push(Finding::error("UNKNOWN_MEMBER", &subject, format!("member {m} is not a county")));
            }
            if reg.kind == RegionKind::Msa {
                msa_of.entry(m.as_str()).or_default().push(reg.code.as_str());
            }
        }
        let member_sum: u64 = reg.members.iter().filter_map(|m| population.get(m.as_str())).sum();
        let expected = reg.declared_population.unwrap_or(member_sum);
        if reg.population != expected {
            r.push(Finding::error(
                "POP_INCONSISTENT",
                &subject,
                format!("population {} should be {expected}", reg.population),
            ));
        }
        if let Some(declared) = reg.declared_population {
            if declared != member_sum {
                let mut w = Finding::warning(
                    "POP_MISMATCH",
                    &subject,
                    format!("declared population {declared} differs from member sum {member_sum}"),
                );
                w.values = vec![declared, member_sum];
                r.push(w);
            }
        }
    }
    for (fips, msas) in &msa_of {
        if msas.len() > 1 {
            r.push(Finding::error("MULTI_MSA", *fips, format!("county is in several MSAs: {}", msas.join(", "))));
        }
    }
    let region_members = |kind: RegionKind, code: &str| {
        file.regions.iter().find(|x| x.kind == kind && x.code == code).map(|x| &x.members)
    };

    // primary affiliations
    for c in &file.counties {
        for (kind, code) in [(RegionKind::Rigo, &c.rigo), (RegionKind::Msa, &c.msa)] {
            let Some(code) = code else { continue };
            match region_members(kind, code) {
                None => r.push(Finding::error("UNKNOWN_REGION", &c.fips, format!("primary {kind} {code} does not exist"))),
                Some(m) if !m.contains(&c.fips) => r.push(Finding::error(
                    "PRIMARY_NOT_MEMBER",
                    &c.fips,
                    format!("county is not a member of its primary {kind} {code}"),
                )),
                Some(_) => {}
            }
        }
    }

    // secondary affiliations
    let mut secondary_seen = BTreeSet::new();
    for s in &file.secondary {
        if !secondary_seen.insert(s.fips.as_str()) {
            r.push(Finding::error("DUP_SECONDARY", &s.fips, "more than one secondary RIGO"));
        }
        let county = file.counties.iter().find(|c| c.fips == s.fips);
        match county {
            None => r.push(Finding::error("UNKNOWN_FIPS", &s.fips, "secondary row for an unknown county")),
            Some(c) if c.rigo.as_deref() == Some(s.rigo_code.as_str()) => r.push(Finding::error(
                "SELF_SECONDARY",
                &s.fips,
                format!("secondary RIGO {} equals the primary", s.rigo_code),
            )),
            Some(c) if c.rigo.is_none() => r.push(Finding::error("NO_PRIMARY", &s.fips, "secondary RIGO without a primary")),
            Some(_) => {}
        }
        match region_members(RegionKind::Rigo, &s.rigo_code) {
            None => r.push(Finding::error(
                "SECONDARY_NOT_RIGO",
                &s.fips,
                format!("{} is not a RIGO in this atlas", s.rigo_code),
            )),
            Some(m) if !m.contains(&s.fips) => r.push(Finding::error(
                "SECONDARY_NOT_MEMBER",
                &s.fips,
                format!("county is missing from {}'s members", s.rigo_code),
            )),
            Some(_) => {}
        }
    }

    // categories
    let cat_keys: BTreeSet<&str> = file.categories.keys().map(String::as_str).collect();
    if cat_keys != fips_seen {
        for missing in fips_seen.difference(&cat_keys) {
            r.push(Finding::error("CATEGORY_COVERAGE", *missing, "county has no category"));
        }
        for extra in cat_keys.difference(&fips_seen) {
            r.push(Finding::error("CATEGORY_COVERAGE", *extra, "category for an unknown county"));
        }
    }
    for (fips, oc) in &file.categories {
        if oc.dual_rigo && !oc.category.has_rigo() {
            r.push(Finding::error("DUAL_NOT_RIGO", fips, format!("dual-RIGO county has category {}", oc.category)));
        }
    }
    let recomputed = categorize_counties(&distinct, &file.regions, &file.secondary);
    for (fips, oc) in &file.categories {
        if recomputed.get(fips).is_some_and(|want| want != oc) {
            r.push(Finding::error("CATEGORY_STALE", fips, "category disagrees with region membership"));
        }
    }

    // bins
    for kind in [RegionKind::Rigo, RegionKind::Msa] {
        let want: BTreeSet<&str> = file.regions.iter().filter(|x| x.kind == kind).map(|x| x.code.as_str()).collect();
        let have = file.bins.of_kind(kind);
        let got: BTreeSet<&str> = have.keys().map(String::as_str).collect();
        for code in want.symmetric_difference(&got) {
            r.push(Finding::error("BIN_COVERAGE", format!("{kind}:{code}"), "bin keys differ from region keys"));
        }
        for (code, &bin) in have {
            if bin >= file.bins.k {
                r.push(Finding::error("BIN_RANGE", format!("{kind}:{code}"), format!("bin {bin} outside [0, {})", file.bins.k)));
            }
        }
    }
    if file.bins.k == 0 {
        r.push(Finding::error("BIN_RANGE", "bins", "bin count must be at least 1"));
    } else if compute_bins(&file.regions, file.bins.k) != file.bins {
        r.push(Finding::error("BINS_STALE", "bins", "bins disagree with region populations"));
    }

    if compute_stats(&distinct, &file.regions, &file.categories) != file.stats {
        r.push(Finding::error("STATS_STALE", "stats", "stats disagree with atlas contents"));
    }
    if let Err(e) = file.style_defaults.check(file.bins.k) {
        r.push(Finding::error("BAD_STYLE", "style_defaults", e.to_string()));
    }

    report
}
