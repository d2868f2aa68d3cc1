//! Dashboard statistics and the comparison queries built on them.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::atlas::Atlas;
use crate::model::{Category, County, OverlapCategory, Region, RegionKind};

/// Most codes an answer carries as evidence; the full lists are in
/// [`DashboardStats`].
pub const EVIDENCE_LIMIT: usize = 5;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CategoryCounts {
    #[serde(rename = "Both")]
    pub both: usize,
    #[serde(rename = "RigoOnly")]
    pub rigo_only: usize,
    #[serde(rename = "MsaOnly")]
    pub msa_only: usize,
    #[serde(rename = "Neither")]
    pub neither: usize,
}

impl CategoryCounts {
    pub fn get(&self, c: Category) -> usize {
        match c {
            Category::Both => self.both,
            Category::RigoOnly => self.rigo_only,
            Category::MsaOnly => self.msa_only,
            Category::Neither => self.neither,
        }
    }

    pub fn total(&self) -> usize {
        self.both + self.rigo_only + self.msa_only + self.neither
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DashboardStats {
    pub rigo_count: usize,
    pub msa_count: usize,
    pub category_counts: CategoryCounts,
    pub cross_state_rigos: Vec<String>,
    pub cross_state_msas: Vec<String>,
    pub dual_rigo_count: usize,
}

pub fn compute_stats(
    counties: &[County],
    regions: &[Region],
    categories: &BTreeMap<String, OverlapCategory>,
) -> DashboardStats {
    let state_of: HashMap<&str, &str> = counties.iter().map(|c| (c.fips.as_str(), c.state.as_str())).collect();
    let mut counts = CategoryCounts {
        both: 0,
        rigo_only: 0,
        msa_only: 0,
        neither: 0,
    };
    let mut dual = 0;
    for c in counties {
        let oc = categories.get(&c.fips).copied().unwrap_or(OverlapCategory {
            category: Category::Neither,
            dual_rigo: false,
        });
        match oc.category {
            Category::Both => counts.both += 1,
            Category::RigoOnly => counts.rigo_only += 1,
            Category::MsaOnly => counts.msa_only += 1,
            Category::Neither => counts.neither += 1,
        }
        dual += usize::from(oc.dual_rigo);
    }
    let cross_state = |kind| -> Vec<String> {
        let set: BTreeSet<&str> = regions
            .iter()
            .filter(|r| r.kind == kind)
            .filter(|r| {
                let states: BTreeSet<&str> = r.members.iter().filter_map(|f| state_of.get(f.as_str()).copied()).collect();
                states.len() >= 2
            })
            .map(|r| r.code.as_str())
            .collect();
        set.into_iter().map(str::to_string).collect()
    };
    DashboardStats {
        rigo_count: regions.iter().filter(|r| r.kind == RegionKind::Rigo).count(),
        msa_count: regions.iter().filter(|r| r.kind == RegionKind::Msa).count(),
        category_counts: counts,
        cross_state_rigos: cross_state(RegionKind::Rigo),
        cross_state_msas: cross_state(RegionKind::Msa),
        dual_rigo_count: dual,
    }
}

pub fn dashboard_stats(atlas: &Atlas) -> DashboardStats {
    compute_stats(atlas.counties(), atlas.regions(), atlas.categories())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Query {
    MoreRigosOrMsas,
    CrossStateRigoExists,
    CrossStateMsaExists,
}

impl FromStr for Query {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "more-rigos-or-msas" => Ok(Query::MoreRigosOrMsas),
            "cross-state-rigo" => Ok(Query::CrossStateRigoExists),
            "cross-state-msa" => Ok(Query::CrossStateMsaExists),
            other => Err(format!(
                "unknown query {other:?} (expected more-rigos-or-msas, cross-state-rigo or cross-state-msa)"
            )),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Majority {
    #[serde(rename = "RIGO")]
    Rigo,
    #[serde(rename = "MSA")]
    Msa,
    Tie,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Answer {
    Majority {
        answer: Majority,
        rigo_count: usize,
        msa_count: usize,
    },
    Exists {
        answer: bool,
        evidence: Vec<String>,
    },
}

impl fmt::Display for Answer {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&serde_json::to_string(self).map_err(|_| fmt::Error)?)
    }
}

pub fn answer_query(atlas: &Atlas, query: Query) -> Answer {
    answer_from_stats(atlas.stats(), query)
}

pub fn answer_from_stats(stats: &DashboardStats, query: Query) -> Answer {
    match query {
        Query::MoreRigosOrMsas => Answer::Majority {
            answer: match stats.rigo_count.cmp(&stats.msa_count) {
                std::cmp::Ordering::Greater => Majority::Rigo,
                std::cmp::Ordering::Less => Majority::Msa,
                std::cmp::Ordering::Equal => Majority::Tie,
            },
            rigo_count: stats.rigo_count,
            msa_count: stats.msa_count,
        },
        Query::CrossStateRigoExists | Query::CrossStateMsaExists => {
            let list = if query == Query::CrossStateRigoExists {
                &stats.cross_state_rigos
            } else {
                &stats.cross_state_msas
            };
            Answer::Exists {
                answer: !list.is_empty(),
                evidence: list.iter().take(EVIDENCE_LIMIT).cloned().collect(),
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixture;

    #[test]
    fn fixture_stats() {
        let s = dashboard_stats(&fixture::atlas());
        assert_eq!((s.rigo_count, s.msa_count), (3, 2));
        assert_eq!(
            s.category_counts,
            CategoryCounts { both: 3, rigo_only: 6, msa_only: 1, neither: 6 }
        );
        assert_eq!(s.dual_rigo_count, 1);
        assert_eq!(s.cross_state_rigos, vec!["R3"]);
        assert_eq!(s.cross_state_msas, vec!["M1"]);
    }

    #[test]
    fn no_regions() {
        let atlas = fixture::atlas();
        let s = compute_stats(atlas.counties(), &[], &BTreeMap::new());
        assert_eq!((s.rigo_count, s.msa_count, s.dual_rigo_count), (0, 0, 0));
        assert_eq!(s.category_counts.neither, 16);
        assert_eq!(s.category_counts.total(), 16);
        assert!(s.cross_state_rigos.is_empty());
    }

    #[test]
    fn queries_on_fixture() {
        let s = dashboard_stats(&fixture::atlas());
        assert_eq!(
            answer_from_stats(&s, Query::MoreRigosOrMsas).to_string(),
            r#"{"answer":"RIGO","rigo_count":3,"msa_count":2}"#
        );
        assert_eq!(
            answer_from_stats(&s, Query::CrossStateRigoExists),
            Answer::Exists { answer: true, evidence: vec!["R3".into()] }
        );
        assert_eq!(
            answer_from_stats(&s, Query::CrossStateMsaExists),
            Answer::Exists { answer: true, evidence: vec!["M1".into()] }
        );
    }

    #[test]
    fn evidence_capped() {
        let mut s = dashboard_stats(&fixture::atlas());
        s.cross_state_rigos = (0..9).map(|i| format!("R{i}")).collect();
        match answer_from_stats(&s, Query::CrossStateRigoExists) {
            Answer::Exists { answer, evidence } => {
                assert!(answer);
                assert_eq!(evidence.len(), EVIDENCE_LIMIT);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn tie_and_msa_majority() {
        let mut s = dashboard_stats(&fixture::atlas());
        s.msa_count = 3;
        assert!(matches!(answer_from_stats(&s, Query::MoreRigosOrMsas), Answer::Majority { answer: Majority::Tie, .. }));
        s.msa_count = 4;
        assert!(matches!(answer_from_stats(&s, Query::MoreRigosOrMsas), Answer::Majority { answer: Majority::Msa, .. }));
    }

    #[test]
    fn single_state_regions_answer_false() {
        let s = dashboard_stats(&fixture::single_state_atlas());
        assert_eq!(answer_from_stats(&s, Query::CrossStateRigoExists), Answer::Exists { answer: false, evidence: vec![] });
        assert_eq!(answer_from_stats(&s, Query::CrossStateMsaExists), Answer::Exists { answer: false, evidence: vec![] });
    }
}
