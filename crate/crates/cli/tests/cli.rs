use std::path::PathBuf;
use std::process::Command;

use conelab_cli::{run, Output, EXIT_CHECK_FAILED, EXIT_OK, EXIT_USAGE};
use conelab_core::cones::RationalCone;
use conelab_core::configurations::NegativeConfiguration;
use serde_json::Value;

fn conelab(args: &[&str]) -> Output {
    run(std::iter::once("conelab").chain(args.iter().copied()))
}

fn json(args: &[&str]) -> Value {
    let mut v = vec!["--json"];
    v.extend_from_slice(args);
    let out = conelab(&v);
    serde_json::from_str(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}{}", out.stdout, out.stderr))
}

fn fixture(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(name)
        .display()
        .to_string()
}

fn lines(out: &Output) -> Vec<&str> {
    out.stdout.lines().map(str::trim).collect()
}

#[test]
fn enumerate_exceptional_k2() {
    let out = conelab(&["enumerate", "--surface", "rational:k=2", "--square=-1", "--genus=0"]);
    assert_eq!(out.code, EXIT_OK);
    let l = lines(&out);
    assert!(l[0].starts_with("3 classes"));
    let mut got: Vec<&str> = l[1..].to_vec();
    got.sort_unstable();
    assert_eq!(got, ["E1", "E2", "H-E1-E2"]);
    assert_eq!(json(&["enumerate", "--k", "3", "--square=-1"])["count"], 6);
}

#[test]
fn dual_of_cp2_2_cone() {
    let out = conelab(&["cone", "dual", "--rays", "E1,E2,H-E1-E2", "--k", "2"]);
    assert_eq!(out.code, EXIT_OK);
    let l = lines(&out);
    let end = l.iter().position(|s| *s == "dual facets:").unwrap();
    let mut rays = l[1..end].to_vec();
    rays.sort_unstable();
    assert_eq!(rays, ["H", "H-E1", "H-E2"]);
    let from_file = conelab(&["cone", "dual", "--rays-file", &fixture("cone.json")]);
    assert_eq!(from_file.stdout, out.stdout);
}

#[test]
fn cone_json_round_trips() {
    let v = json(&["cone", "dual", "--rays", "E1,E2,H-E1-E2", "--k", "2"]);
    let dual: RationalCone = serde_json::from_value(v["dual"].clone()).unwrap();
    assert_eq!(serde_json::to_value(&dual).unwrap(), v["dual"]);
}

#[test]
fn squares_counts() {
    for (total, count) in [(18, 3), (36, 5), (54, 7), (72, 14)] {
        assert_eq!(json(&["squares", "--total", &total.to_string()])["count"], count, "total {total}");
    }
}

#[test]
fn cremona_commands() {
    let out = conelab(&["cremona", "reduce", "--class", "2H-E1-E2-E3", "--k", "3"]);
    assert_eq!(out.code, EXIT_OK);
    assert_eq!(out.stdout, "reduced: H after 1 steps\n");
    let eq = json(&["cremona", "equiv", "E1", "H-E1-E2", "--k", "3"]);
    assert_eq!(eq["result"]["outcome"], "equivalent");
    let ne = json(&["cremona", "equiv", "E1", "H-E1", "--k", "3"]);
    assert_eq!(ne["result"]["outcome"], "distinct_by_invariant");
}

#[test]
fn sw_certificate_on_ruled_surface() {
    let v = json(&["sw", "cert", "--surface", "ruled:h=2", "--class", "2U+3T"]);
    assert_eq!(v["outcome"], "certified");
    assert_eq!(v["magnitude"], "9");
    let none = conelab(&["sw", "cert", "--k", "2", "--class", "-H"]);
    assert_eq!(none.code, EXIT_CHECK_FAILED);
}

#[test]
fn config_validate_and_blowdown() {
    let good = conelab(&["config", "validate", &fixture("cp2_3_case1.json")]);
    assert_eq!(good.code, EXIT_OK, "{}", good.stdout);
    let bad = conelab(&["config", "validate", &fixture("bad_cfg.json")]);
    assert_eq!(bad.code, EXIT_CHECK_FAILED);
    let bd = json(&["config", "blowdown", &fixture("cp2_3_case1.json"), "--at", "E3"]);
    assert_eq!(bd["identities_hold"], true);
    let down: NegativeConfiguration = serde_json::from_value(bd["config"].clone()).unwrap();
    let expected = NegativeConfiguration::from_literals(down.surface, &["E2", "H-E1-E2", "-H+2E1-E2"]).unwrap();
    assert!(down.same_curves(&expected));
}

#[test]
fn catalogs_match_committed_data() {
    let data = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data");
    for family in ["cp2+1", "cp2+2", "cp2+3"] {
        for n in 0..=2 {
            let out = conelab(&["--json", "config", "catalog", family, "--n", &n.to_string()]);
            assert_eq!(out.code, EXIT_OK);
            let path = data.join(format!("{family}_n{n}.json"));
            let committed = std::fs::read_to_string(&path).unwrap();
            assert_eq!(out.stdout, committed, "{} is stale; regenerate with `config catalog`", path.display());
        }
    }
}

#[test]
fn catalog_entries_validate() {
    let v = json(&["config", "catalog", "cp2+3", "--n", "1"]);
    let entries = v["entries"].as_array().unwrap();
    assert_eq!(entries.len(), 12);
    for e in entries {
        let cfg: NegativeConfiguration = serde_json::from_value(e["config"].clone()).unwrap();
        assert_eq!(serde_json::to_value(&cfg).unwrap(), e["config"]);
        assert!(conelab_core::configurations::validate_configuration(&cfg).passed);
    }
}

#[test]
fn inflate_all_rays() {
    let v = json(&["inflate", "--config", &fixture("cp2_3_case1.json")]);
    let rays = v["rays"].as_array().unwrap();
    assert_eq!(rays.len(), 5);
    assert!(rays.iter().all(|r| r["verified"] == true));
    let one = conelab(&["inflate", "--curves", "E3,E1-E2,H-E1-E2", "--start", "H", "--ray", "2H-E1-E2"]);
    assert_eq!(one.code, EXIT_OK, "{}{}", one.stdout, one.stderr);
    assert!(one.stdout.contains("reached target: true"));
}

#[test]
fn nef_threshold_from_literals() {
    let out = conelab(&["nef-threshold", "--omega", "3H-E1-E2", "--curves", "E1,E2,H-E1-E2"]);
    assert_eq!(out.code, EXIT_OK, "{}", out.stderr);
    assert!(out.stdout.starts_with("threshold "));
}

#[test]
fn ksymp_corners() {
    let v = json(&["cone", "ksymp", "--k", "3"]);
    assert_eq!(v["corners_ok"], true);
}

#[test]
fn member_exit_codes() {
    let inside = conelab(&["cone", "member", "--rays", "E1,E2,H-E1-E2", "--class", "H"]);
    assert_eq!(inside.code, EXIT_OK);
    let outside = conelab(&["cone", "member", "--rays", "E1,E2,H-E1-E2", "--class", "-H"]);
    assert_eq!(outside.code, EXIT_CHECK_FAILED);
}

#[test]
fn paper_signs_rendering() {
    let out = conelab(&["--paper-signs", "enumerate", "--k", "2", "--square=-1"]);
    assert!(lines(&out).contains(&"(1; 1, 1)"));
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(conelab(&["--bogus"]).code, EXIT_USAGE);
    assert_eq!(conelab(&["enumerate", "--k", "2"]).code, EXIT_USAGE);
    assert_eq!(conelab(&["cremona", "reduce", "--class", "2H+E9x", "--k", "3"]).code, EXIT_USAGE);
    assert_eq!(conelab(&["verify-paper", "--suite", "nope"]).code, EXIT_USAGE);
    assert_eq!(conelab(&["config", "validate", "/no/such/file.json"]).code, EXIT_USAGE);
    assert_eq!(conelab(&["config", "catalog", "cp2+9"]).code, EXIT_USAGE);
    assert_eq!(conelab(&["--help"]).code, EXIT_OK);
}

#[test]
fn verify_paper_suite() {
    let out = conelab(&["verify-paper", "--suite", "cp2+2"]);
    assert_eq!(out.code, EXIT_OK, "{}", out.stdout);
    let v = json(&["verify-paper", "--suite", "cp2+2"]);
    assert_eq!(v["summary"]["failed"], 0);
    assert_eq!(v["checks"].as_array().unwrap().len(), 2);
}

#[test]
fn output_is_deterministic() {
    for args in [
        &["--json", "enumerate", "--k", "4", "--square=-2"][..],
        &["config", "catalog", "cp2+3", "--n", "2"],
        &["--json", "verify-paper", "--suite", "cremona"],
    ] {
        assert_eq!(conelab(args), conelab(args));
    }
}

#[test]
fn binary_honours_step_budget() {
    let bin = env!("CARGO_BIN_EXE_conelab");
    let run_with = |budget: &str| {
        Command::new(bin)
            .args(["cremona", "reduce", "--class", "5H-2E1-2E2-2E3"])
            .env("CONELAB_MAX_STEPS", budget)
            .output()
            .unwrap()
    };
    let starved = run_with("0");
    assert_eq!(starved.status.code(), Some(EXIT_CHECK_FAILED));
    assert!(String::from_utf8_lossy(&starved.stdout).starts_with("budget exceeded"));
    assert_eq!(run_with("100").status.code(), Some(EXIT_OK));
    assert_eq!(run_with("lots").status.code(), Some(EXIT_USAGE));
}
