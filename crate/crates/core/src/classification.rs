//! Overlap categories, region populations and saturation bins.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use serde::{Deserialize, Serialize};

use crate::model::{Category, County, OverlapCategory, Region, RegionKind, SecondaryAffiliation};

pub const DEFAULT_BINS: usize = 5;

/// Saturation bin per region code, computed separately for each kind.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Bins {
    pub k: usize,
    pub rigo: BTreeMap<String, usize>,
    pub msa: BTreeMap<String, usize>,
}

impl Bins {
    pub fn of_kind(&self, kind: RegionKind) -> &BTreeMap<String, usize> {
        match kind {
            RegionKind::Rigo => &self.rigo,
            RegionKind::Msa => &self.msa,
        }
    }

    pub fn get(&self, kind: RegionKind, code: &str) -> Option<usize> {
        self.of_kind(kind).get(code).copied()
    }
}

/// Rank-based (quantile-style) binning.
///
/// Regions are ordered by (population, code); a region's rank is the index
/// of the first region with the same population, so ties share a rank. The
/// bin is `floor(rank * k / n)`, clamped to `k - 1`.
pub fn assign_bins(values: &BTreeMap<String, u64>, k: usize) -> BTreeMap<String, usize> {
    let k = k.max(1);
    let mut sorted: Vec<(&String, u64)> = values.iter().map(|(c, &p)| (c, p)).collect();
    sorted.sort_by(|a, b| (a.1, a.0).cmp(&(b.1, b.0)));
    let n = sorted.len();
    let mut out = BTreeMap::new();
    let mut rank = 0;
    for (i, &(code, pop)) in sorted.iter().enumerate() {
        if i == 0 || sorted[i - 1].1 != pop {
            rank = i;
        }
        out.insert(code.clone(), (rank * k / n).min(k - 1));
    }
    out
}

/// Declared population wins; otherwise the sum over members. Counties in two
/// RIGOs count fully toward both.
pub fn region_population(region: &Region, population_of: impl Fn(&str) -> Option<u64>) -> u64 {
    region
        .declared_population
        .unwrap_or_else(|| region.members.iter().filter_map(|f| population_of(f)).sum())
}

pub fn compute_bins(regions: &[Region], k: usize) -> Bins {
    let by_kind = |kind| {
        let values: BTreeMap<String, u64> = regions
            .iter()
            .filter(|r| r.kind == kind)
            .map(|r| (r.code.clone(), r.population))
            .collect();
        assign_bins(&values, k)
    };
    Bins {
        k,
        rigo: by_kind(RegionKind::Rigo),
        msa: by_kind(RegionKind::Msa),
    }
}

/// Per-county region memberships, secondary RIGO membership included.
#[derive(Debug, Default)]
pub struct MembershipIndex {
    rigos: HashMap<String, BTreeSet<String>>,
    msas: HashMap<String, BTreeSet<String>>,
    dual: BTreeSet<String>,
}

impl MembershipIndex {
    pub fn new(regions: &[Region], secondary: &[SecondaryAffiliation]) -> Self {
        let mut idx = MembershipIndex::default();
        for r in regions {
            let map = match r.kind {
                RegionKind::Rigo => &mut idx.rigos,
                RegionKind::Msa => &mut idx.msas,
            };
            for f in &r.members {
                map.entry(f.clone()).or_default().insert(r.code.clone());
            }
        }
        idx.dual = secondary.iter().map(|s| s.fips.clone()).collect();
        idx
    }

    pub fn rigos(&self, fips: &str) -> impl Iterator<Item = &str> {
        self.rigos.get(fips).into_iter().flatten().map(String::as_str)
    }

    pub fn msas(&self, fips: &str) -> impl Iterator<Item = &str> {
        self.msas.get(fips).into_iter().flatten().map(String::as_str)
    }

    pub fn overlap_category(&self, fips: &str) -> OverlapCategory {
        let in_rigo = self.rigos.get(fips).is_some_and(|s| !s.is_empty());
        let in_msa = self.msas.get(fips).is_some_and(|s| !s.is_empty());
        OverlapCategory {
            category: Category::from_membership(in_rigo, in_msa),
            dual_rigo: self.dual.contains(fips),
        }
    }
}

pub fn categorize_counties(
    counties: &[County],
    regions: &[Region],
    secondary: &[SecondaryAffiliation],
) -> BTreeMap<String, OverlapCategory> {
    let idx = MembershipIndex::new(regions, secondary);
    counties
        .iter()
        .map(|c| (c.fips.clone(), idx.overlap_category(&c.fips)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixture;
    use proptest::prelude::*;

    fn values(v: &[(&str, u64)]) -> BTreeMap<String, u64> {
        v.iter().map(|&(c, p)| (c.to_string(), p)).collect()
    }

    #[test]
    fn fixture_rigo_bins() {
        let bins = assign_bins(&values(&[("R3", 500), ("R1", 1400), ("R2", 5400)]), 5);
        assert_eq!(bins["R3"], 0);
        assert_eq!(bins["R1"], 1);
        assert_eq!(bins["R2"], 3);
    }

    #[test]
    fn equal_populations_share_bin_zero() {
        for k in 1..8 {
            let bins = assign_bins(&values(&[("a", 7), ("b", 7), ("c", 7), ("d", 7)]), k);
            assert!(bins.values().all(|&b| b == 0));
        }
    }

    #[test]
    fn single_region() {
        assert_eq!(assign_bins(&values(&[("only", 12)]), 5)["only"], 0);
    }

    #[test]
    fn ties_take_lowest_rank() {
        // ranks 0, 1, 1, 3 over n = 4, k = 4
        let bins = assign_bins(&values(&[("a", 1), ("b", 5), ("c", 5), ("d", 9)]), 4);
        assert_eq!((bins["a"], bins["b"], bins["c"], bins["d"]), (0, 1, 1, 3));
    }

    #[test]
    fn more_bins_than_regions() {
        let bins = assign_bins(&values(&[("a", 1), ("b", 2)]), 10);
        assert_eq!((bins["a"], bins["b"]), (0, 5));
    }

    #[test]
    fn fixture_populations() {
        let pre = fixture::pre_atlas();
        let pop = |f: &str| pre.counties.iter().find(|c| c.fips == f).map(|c| c.population);
        let region = |code: &str| pre.regions.iter().find(|r| r.code == code).unwrap();
        assert_eq!(region_population(region("R1"), pop), 1400);
        assert_eq!(region_population(region("M2"), pop), 1600);
        assert_eq!(region_population(region("R3"), pop), 500);
        let mut declared = region("R1").clone();
        declared.declared_population = Some(9999);
        assert_eq!(region_population(&declared, pop), 9999);
    }

    #[test]
    fn fixture_categories() {
        let pre = fixture::pre_atlas();
        let cats = categorize_counties(&pre.counties, &pre.regions, &pre.secondary);
        let c10 = cats[&fixture::fips(1, 0)];
        assert_eq!(c10, OverlapCategory { category: Category::Both, dual_rigo: false });
        assert_eq!(cats[&fixture::fips(1, 3)].category, Category::Neither);
        let c01 = cats[&fixture::fips(0, 1)];
        assert_eq!(c01, OverlapCategory { category: Category::RigoOnly, dual_rigo: true });
        let count = |c| cats.values().filter(|o| o.category == c).count();
        assert_eq!(
            (count(Category::Both), count(Category::RigoOnly), count(Category::MsaOnly), count(Category::Neither)),
            (3, 6, 1, 6)
        );
    }

    fn populations() -> impl Strategy<Value = Vec<u64>> {
        prop::collection::vec(prop_oneof![0u64..20, 0u64..10_000_000], 1..60)
    }

    fn named(pops: &[u64]) -> BTreeMap<String, u64> {
        pops.iter().enumerate().map(|(i, &p)| (format!("G{i:03}"), p)).collect()
    }

    proptest! {
        #[test]
        fn monotone_and_tie_equal(pops in populations(), k in 1usize..9) {
            let v = named(&pops);
            let bins = assign_bins(&v, k);
            for (a, pa) in &v {
                prop_assert!(bins[a] < k);
                for (b, pb) in &v {
                    if pa < pb { prop_assert!(bins[a] <= bins[b]); }
                    if pa == pb { prop_assert_eq!(bins[a], bins[b]); }
                }
            }
        }

        #[test]
        fn scaling_invariant(pops in populations(), k in 1usize..9, factor in 1u64..1000) {
            let v = named(&pops);
            let scaled: BTreeMap<String, u64> = v.iter().map(|(c, p)| (c.clone(), p * factor)).collect();
            prop_assert_eq!(assign_bins(&v, k), assign_bins(&scaled, k));
        }
    }
}
