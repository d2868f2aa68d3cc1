//! Shared domain types.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum RegionKind {
    #[serde(rename = "RIGO")]
    Rigo,
    #[serde(rename = "MSA")]
    Msa,
}

impl RegionKind {
    pub fn as_str(self) -> &'static str {
        match self {
            RegionKind::Rigo => "RIGO",
            RegionKind::Msa => "MSA",
        }
    }
}

impl fmt::Display for RegionKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for RegionKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_uppercase().as_str() {
            "RIGO" => Ok(RegionKind::Rigo),
            "MSA" => Ok(RegionKind::Msa),
            other => Err(format!("unknown region kind {other:?} (expected RIGO or MSA)")),
        }
    }
}

/// Which affiliation layer a map or query is about.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Layer {
    #[serde(rename = "rigo")]
    Rigo,
    #[serde(rename = "msa")]
    Msa,
    #[serde(rename = "both")]
    Both,
}

impl Layer {
    pub const ALL: [Layer; 3] = [Layer::Rigo, Layer::Msa, Layer::Both];

    pub fn as_str(self) -> &'static str {
        match self {
            Layer::Rigo => "rigo",
            Layer::Msa => "msa",
            Layer::Both => "both",
        }
    }

    /// The dual-RIGO hatch is a RIGO-layer encoding.
    pub fn shows_texture(self) -> bool {
        matches!(self, Layer::Rigo | Layer::Both)
    }
}

impl FromStr for Layer {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "rigo" => Ok(Layer::Rigo),
            "msa" => Ok(Layer::Msa),
            "both" => Ok(Layer::Both),
            other => Err(format!("unknown layer {other:?} (expected rigo, msa or both)")),
        }
    }
}

impl fmt::Display for Layer {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A county as stored in an atlas. Geometry lives in the atlas topology;
/// `rigo` and `msa` are the primary affiliations from the affiliation table.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct County {
    pub fips: String,
    pub name: String,
    pub state: String,
    pub population: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rigo: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub msa: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Region {
    pub code: String,
    pub kind: RegionKind,
    pub name: String,
    pub members: BTreeSet<String>,
    pub population: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub declared_population: Option<u64>,
}

impl Region {
    pub fn key(&self) -> (RegionKind, &str) {
        (self.kind, self.code.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SecondaryAffiliation {
    pub fips: String,
    pub rigo_code: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Category {
    Both,
    RigoOnly,
    MsaOnly,
    Neither,
}

impl Category {
    pub const ALL: [Category; 4] = [
        Category::Both,
        Category::RigoOnly,
        Category::MsaOnly,
        Category::Neither,
    ];

    pub fn from_membership(in_rigo: bool, in_msa: bool) -> Self {
        match (in_rigo, in_msa) {
            (true, true) => Category::Both,
            (true, false) => Category::RigoOnly,
            (false, true) => Category::MsaOnly,
            (false, false) => Category::Neither,
        }
    }

    pub fn has_rigo(self) -> bool {
        matches!(self, Category::Both | Category::RigoOnly)
    }
}

impl fmt::Display for Category {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Category::Both => "Both",
            Category::RigoOnly => "RigoOnly",
            Category::MsaOnly => "MsaOnly",
            Category::Neither => "Neither",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct OverlapCategory {
    pub category: Category,
    pub dual_rigo: bool,
}

pub fn is_valid_fips(fips: &str) -> bool {
    fips.len() == 5 && fips.bytes().all(|b| b.is_ascii_digit())
}

pub fn is_valid_state(state: &str) -> bool {
    state.len() == 2 && state.bytes().all(|b| b.is_ascii_uppercase())
}
