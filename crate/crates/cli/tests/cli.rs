use std::path::{Path, PathBuf};

use rigo_atlas::fixture::{self, FixtureInputs};
use rigo_atlas_cli::run;

fn fixtures() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures")
}

fn call(args: &[&str]) -> (u8, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let mut argv = vec!["rigo-atlas"];
    argv.extend_from_slice(args);
    let code = run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn ingest_fixture(dir: &Path) -> PathBuf {
    let f = fixtures();
    let out = dir.join("atlas.json");
    let (code, _, err) = call(&[
        "ingest",
        "--geometry",
        f.join("geometry.geojson").to_str().unwrap(),
        "--affiliations",
        f.join("affiliations.csv").to_str().unwrap(),
        "--regions",
        f.join("regions.csv").to_str().unwrap(),
        "--secondary",
        f.join("secondary.csv").to_str().unwrap(),
        "--projection",
        "identity",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(code, 0, "{err}");
    out
}

#[test]
fn ingest_matches_library_build() {
    let dir = tempfile::tempdir().unwrap();
    let path = ingest_fixture(dir.path());
    let text = std::fs::read_to_string(path).unwrap();
    assert_eq!(text, fixture::atlas().to_json());
}

#[test]
fn query_output() {
    let dir = tempfile::tempdir().unwrap();
    let atlas = ingest_fixture(dir.path());
    let a = atlas.to_str().unwrap();
    let (code, out, _) = call(&["query", "--atlas", a, "--q", "more-rigos-or-msas"]);
    assert_eq!(code, 0);
    assert_eq!(out, "{\"answer\":\"RIGO\",\"rigo_count\":3,\"msa_count\":2}\n");
    let (_, out, _) = call(&["query", "--atlas", a, "--q", "cross-state-msa"]);
    assert_eq!(out, "{\"answer\":true,\"evidence\":[\"M1\"]}\n");
    let (code, _, err) = call(&["query", "--atlas", a, "--q", "which-is-bigger"]);
    assert_eq!(code, 2);
    assert!(err.contains("which-is-bigger"));
}

#[test]
fn render_errors_and_output() {
    let dir = tempfile::tempdir().unwrap();
    let atlas = ingest_fixture(dir.path());
    let a = atlas.to_str().unwrap();
    let (code, _, err) = call(&["render", "--atlas", a, "--view", "XX", "--layer", "rigo"]);
    assert_eq!(code, 1);
    assert!(err.contains("E_UNKNOWN_STATE"));
    let (code, _, _) = call(&["render", "--atlas", a, "--layer", "plaid"]);
    assert_eq!(code, 2);
    let (code, svg, _) = call(&["render", "--atlas", a, "--view", "AA", "--layer", "both"]);
    assert_eq!(code, 0);
    assert_eq!(svg.matches(r#"class="county""#).count(), 8);
}

#[test]
fn stats_formats() {
    let dir = tempfile::tempdir().unwrap();
    let atlas = ingest_fixture(dir.path());
    let a = atlas.to_str().unwrap();
    let (code, out, _) = call(&["stats", "--atlas", a]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["dual_rigo_count"], 1);
    let (_, table, _) = call(&["stats", "--atlas", a, "--format", "table"]);
    assert!(table.contains("cross-state RIGOs   R3"), "{table}");
}

#[test]
fn invalid_atlas_reports_findings() {
    let dir = tempfile::tempdir().unwrap();
    let mut file = fixture::atlas().to_file();
    file.counties.push(file.counties[0].clone());
    let path = dir.path().join("bad.json");
    std::fs::write(&path, serde_json::to_string(&file).unwrap()).unwrap();
    let (code, _, err) = call(&["stats", "--atlas", path.to_str().unwrap()]);
    assert_eq!(code, 1);
    assert!(err.contains("DUP_FIPS"), "{err}");
}

#[test]
fn ingest_reports_every_referential_error() {
    let dir = tempfile::tempdir().unwrap();
    let inputs = FixtureInputs::reference();
    let write = |name: &str, text: &str| {
        let p = dir.path().join(name);
        std::fs::write(&p, text).unwrap();
        p
    };
    let g = write("g.geojson", &inputs.geometry);
    let a = write("a.csv", &(inputs.affiliations.clone() + "00077,R9,\n"));
    let r = write("r.csv", &inputs.regions);
    let out = dir.path().join("atlas.json");
    let (code, _, err) = call(&[
        "ingest",
        "--geometry",
        g.to_str().unwrap(),
        "--affiliations",
        a.to_str().unwrap(),
        "--regions",
        r.to_str().unwrap(),
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(code, 1);
    assert!(err.contains("E_UNKNOWN_FIPS"), "{err}");
    assert!(!out.exists());
    let (code, _, err) = call(&["ingest", "--geometry", g.to_str().unwrap()]);
    assert_eq!(code, 2, "{err}");
}

#[test]
fn albers_ingest_keeps_statistics() {
    let dir = tempfile::tempdir().unwrap();
    let f = fixtures();
    let out = dir.path().join("albers.json");
    let (code, _, err) = call(&[
        "ingest",
        "--geometry",
        f.join("geometry.geojson").to_str().unwrap(),
        "--affiliations",
        f.join("affiliations.csv").to_str().unwrap(),
        "--regions",
        f.join("regions.csv").to_str().unwrap(),
        "--secondary",
        f.join("secondary.csv").to_str().unwrap(),
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(code, 0, "{err}");
    let atlas = rigo_atlas::Atlas::from_json(&std::fs::read_to_string(out).unwrap()).unwrap();
    assert_eq!(atlas.stats(), fixture::atlas().stats());
    assert_eq!(atlas.topology().scale(), 1e4);
}

#[test]
fn help_exits_zero() {
    let (code, out, _) = call(&["--help"]);
    assert_eq!(code, 0);
    assert!(out.contains("ingest"));
}
