//! End-to-end runs of the `volut` binary: exit codes, file round trips and
//! the shipped ring presets.

use serde_json::Value;
use std::path::{Path, PathBuf};
use std::process::Command;
use std::sync::Arc;
use tempfile::TempDir;
use volut::SuiteReport;
use volut_core::fincat::FiniteCategory;
use volut_core::instances::finmod::{RingJson, StarRing};
use volut_linrel::{LinearRelation, RelationJson};
use volut_profmor::herm::{find_degenerate_composite, HermBimodule};
use volut_profmor::morita::{Bimodule, FinAlgebra};
use volut_profmor::prof::{hom_profunctor, Profunctor, ProfunctorJson};

struct Run {
    code: i32,
    stdout: String,
    stderr: String,
}

fn volut(args: &[&str]) -> Run {
    volut_env(args, &[])
}

fn volut_env(args: &[&str], env: &[(&str, &str)]) -> Run {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_volut"));
    cmd.args(args).env_remove("VOLUT_CAP");
    for (k, v) in env {
        cmd.env(k, v);
    }
    let out = cmd.output().expect("binary runs");
    Run {
        code: out.status.code().expect("exit code"),
        stdout: String::from_utf8_lossy(&out.stdout).into_owned(),
        stderr: String::from_utf8_lossy(&out.stderr).into_owned(),
    }
}

fn write_json<T: serde::Serialize>(dir: &TempDir, name: &str, x: &T) -> String {
    let p = dir.path().join(name);
    std::fs::write(&p, serde_json::to_string(x).unwrap()).unwrap();
    p.to_str().unwrap().to_string()
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn presets_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../presets")
}

fn report(r: &Run) -> SuiteReport {
    serde_json::from_str(&r.stdout).unwrap_or_else(|e| panic!("{e}: {}", r.stdout))
}

#[test]
fn build_then_check_strict_passes() {
    let dir = TempDir::new().unwrap();
    let v = dir.path().join("v.json");
    let b = volut(&["build", "fdvect", "--q", "2", "--max-dim", "2", "-o", path_str(&v)]);
    assert_eq!(b.code, 0, "{}", b.stderr);
    for s in ["volutive", "category", "zorro", "pairing", "dagger"] {
        let c = volut(&["check", path_str(&v), "--structure", s, "--kind", "strict"]);
        assert_eq!(c.code, 0, "{s}: {}", c.stdout);
    }
}

#[test]
fn corrupted_eta_exits_one_with_a_witness() {
    let dir = TempDir::new().unwrap();
    let v = dir.path().join("v.json");
    assert_eq!(volut(&["build", "fdvect", "--q", "2", "--max-dim", "2", "-o", path_str(&v)]).code, 0);
    let mut j: Value = serde_json::from_str(&std::fs::read_to_string(&v).unwrap()).unwrap();
    let morphisms = j["category"]["morphisms"].as_array().unwrap().clone();
    let by_id = |id: &Value| morphisms.iter().find(|m| &m["id"] == id).unwrap().clone();
    let eta = j["eta"].as_object_mut().unwrap();
    let (obj, other) = eta
        .iter()
        .find_map(|(a, e)| {
            let cur = by_id(e);
            let alt = morphisms.iter().find(|x| x["dom"] == cur["dom"] && x["cod"] == cur["cod"] && x["id"] != cur["id"])?;
            Some((a.clone(), alt["id"].clone()))
        })
        .expect("an η component with a nontrivial hom-set");
    eta.insert(obj, other);
    let bad = write_json(&dir, "bad.json", &j);
    let c = volut(&["check", &bad, "--structure", "volutive", "--kind", "strict", "--format", "json"]);
    assert_eq!(c.code, 1, "{}", c.stdout);
    let r = report(&c);
    let w = r.failures().next().unwrap().witness.as_ref().unwrap();
    assert!(w["law"].as_str().unwrap().starts_with("eta/"), "{w}");
}

#[test]
fn malformed_input_exits_two() {
    let dir = TempDir::new().unwrap();
    let p = dir.path().join("junk.json");
    std::fs::write(&p, "{ not json").unwrap();
    assert_eq!(volut(&["check", path_str(&p)]).code, 2);
    assert_eq!(volut(&["check", "/nonexistent/file.json"]).code, 2);
    assert_eq!(volut(&["suite", "no-such-suite"]).code, 2);
    assert_eq!(volut(&["build", "no-such-family"]).code, 2);
    assert_eq!(volut(&["--format", "yaml", "suite", "witnesses"]).code, 2);
}

#[test]
fn json_suite_reports_parse() {
    let r = volut(&["suite", "witnesses", "--format", "json", "--seed", "7"]);
    assert_eq!(r.code, 0, "{}", r.stdout);
    let rep = report(&r);
    assert_eq!((rep.suite.as_str(), rep.seed, rep.checks.len()), ("witnesses", 7, 3));
}

#[test]
fn linrel_suite_exits_one_only_for_the_witness() {
    let r = volut(&["rel", "check-lemmas", "--samples", "30", "--format", "json"]);
    assert_eq!(r.code, 1);
    let rep = report(&r);
    let failed: Vec<_> = rep.failures().map(|c| c.name.clone()).collect();
    assert_eq!(failed, ["strict-inclusion-witness"]);
}

#[test]
fn presets_match_builtin_rings() {
    for name in ["z4", "f2xy", "t2f2"] {
        let text = std::fs::read_to_string(presets_dir().join(format!("{name}.json"))).unwrap();
        let file: RingJson = serde_json::from_str(&text).unwrap();
        let builtin = StarRing::preset(name).unwrap();
        assert_eq!(serde_json::to_value(&file).unwrap(), serde_json::to_value(builtin.to_json()).unwrap(), "{name}");
        assert!(StarRing::from_json(&file).is_ok());
    }
}

#[test]
fn finmod_from_a_preset_file_is_strict() {
    let dir = TempDir::new().unwrap();
    let v = dir.path().join("m.json");
    let ring = presets_dir().join("f2xy.json");
    let b = volut(&["build", "finmod", "--ring", path_str(&ring), "-o", path_str(&v)]);
    assert_eq!(b.code, 0, "{}", b.stderr);
    assert_eq!(volut(&["check", path_str(&v), "--kind", "strict"]).code, 0);
}

#[test]
fn local_hom_category_is_lax() {
    let dir = TempDir::new().unwrap();
    let v = dir.path().join("l.json");
    let b = volut(&["build", "prof-local", "--name", "arrow", "--target", "terminal", "--max-size", "2", "-o", path_str(&v)]);
    assert_eq!(b.code, 0, "{}", b.stderr);
    assert_eq!(volut(&["check", path_str(&v), "--kind", "lax"]).code, 0);
}

#[test]
fn prof_compose_with_hom_is_hom() {
    let dir = TempDir::new().unwrap();
    let hom = hom_profunctor(&Arc::new(FiniteCategory::walking_arrow())).unwrap();
    let f = write_json(&dir, "hom.json", &hom.to_json());
    let r = volut(&["prof", "compose", &f, &f]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let j: ProfunctorJson = serde_json::from_str(&r.stdout).unwrap();
    let c = Profunctor::from_json(&j).unwrap();
    for d in 0..2 {
        for e in 0..2 {
            assert_eq!(c.size(d, e), hom.size(d, e));
        }
    }
    assert_eq!(volut(&["prof", "zorro", "arrow"]).code, 0);
    assert_eq!(volut(&["prof", "zorro", "chain3"]).code, 0);
}

#[test]
fn cap_from_env_and_flag_exits_two() {
    let dir = TempDir::new().unwrap();
    let hom = hom_profunctor(&Arc::new(FiniteCategory::walking_arrow())).unwrap();
    let f = write_json(&dir, "hom.json", &hom.to_json());
    assert_eq!(volut(&["prof", "ihom", &f, &f]).code, 0);
    assert_eq!(volut_env(&["prof", "ihom", &f, &f], &[("VOLUT_CAP", "1")]).code, 2);
    assert_eq!(volut(&["prof", "ihom", &f, &f, "--cap", "1"]).code, 2);
}

#[test]
fn morita_operations_on_regular_bimodules() {
    let dir = TempDir::new().unwrap();
    let f4 = FinAlgebra::by_name("F4").unwrap();
    let reg = write_json(&dir, "reg.json", &Bimodule::regular(&f4).to_json());
    let t = volut(&["morita", "tensor", &reg, &reg]);
    assert_eq!(t.code, 0, "{}", t.stderr);
    let j: Value = serde_json::from_str(&t.stdout).unwrap();
    assert_eq!(j["module"]["dim"], 2);
    let i = volut(&["morita", "ihom", &reg, &reg]);
    assert_eq!(i.code, 0, "{}", i.stderr);
    let f2 = FinAlgebra::by_name("F2").unwrap();
    let r2 = write_json(&dir, "r2.json", &Bimodule::regular(&f2).to_json());
    assert_eq!(volut(&["morita", "closedness", &r2, &r2, &r2]).code, 0);
}

#[test]
fn morita_herm_flags_the_degenerate_composite() {
    let dir = TempDir::new().unwrap();
    let f2 = FinAlgebra::by_name("F2").unwrap();
    let unit = write_json(&dir, "unit.json", &HermBimodule::unit(&f2).to_json());
    assert_eq!(volut(&["morita", "herm", &unit]).code, 0);
    let w = find_degenerate_composite(7, 2).unwrap().expect("a degenerate composite");
    let bad = write_json(&dir, "deg.json", &w.composite.to_json());
    let r = volut(&["morita", "herm", &bad, "--format", "json"]);
    assert_eq!(r.code, 1, "{}", r.stdout);
    let rep = report(&r);
    assert_eq!(rep.failures().map(|c| c.name.as_str()).collect::<Vec<_>>(), ["honest"]);
    assert_eq!(rep.find("radical-quotient-honest").unwrap().status, volut::Status::Pass);
}

#[test]
fn rel_adjoint_and_compose() {
    let dir = TempDir::new().unwrap();
    let diag = write_json(&dir, "diag.json", &LinearRelation::diagonal(2).to_json());
    let full = write_json(&dir, "full.json", &LinearRelation::full(2, 3).to_json());
    let a = volut(&["rel", "adjoint", &diag]);
    assert_eq!(a.code, 0, "{}", a.stderr);
    let j: RelationJson = serde_json::from_str(&a.stdout).unwrap();
    assert_eq!(LinearRelation::from_json(&j).unwrap(), LinearRelation::diagonal(2));
    let c = volut(&["rel", "compose", &diag, &full]);
    assert_eq!(c.code, 0, "{}", c.stderr);
    let j: RelationJson = serde_json::from_str(&c.stdout).unwrap();
    assert_eq!(LinearRelation::from_json(&j).unwrap(), LinearRelation::full(2, 3));
    assert_eq!(volut(&["rel", "compose", &full, &full]).code, 2);
}
