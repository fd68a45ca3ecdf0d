use std::path::Path;
use std::process::{Command, Output};

use polyforge::fixtures;
use polyforge::io::{digest, LogDocument, PolytopeDocument};

fn polyforge(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_polyforge")).args(args).current_dir(dir).output().unwrap()
}

fn write_doc(dir: &Path, name: &str, p: &polyforge::geometry::Polytope) {
    polyforge::io::write_json(&dir.join(name), &PolytopeDocument::from_polytope(p)).unwrap();
}

#[test]
fn normalize_standard_cube() {
    let dir = tempfile::tempdir().unwrap();
    write_doc(dir.path(), "cube3.json", &fixtures::standard_cube(3));
    let out = polyforge(&["normalize", "cube3.json"], dir.path());
    assert_eq!(out.status.code(), Some(0));
    let doc: LogDocument = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(doc.final_digest, digest(&fixtures::standard_cube(3)));
    assert!(doc.bound.achieved <= 14);
}

#[test]
fn normalize_log_replays_and_writes_snapshots() {
    let dir = tempfile::tempdir().unwrap();
    let q = fixtures::random_cube(3, 5).unwrap();
    write_doc(dir.path(), "q.json", &q);
    let out = polyforge(&["normalize", "q.json", "--log", "log.json", "--snapshots", "snaps"], dir.path());
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let doc: LogDocument = polyforge::io::read_json(&dir.path().join("log.json")).unwrap();
    let fin = doc.replay().unwrap();
    assert_eq!(digest(&fin), digest(&fixtures::standard_cube(3)));
    let snaps = std::fs::read_dir(dir.path().join("snaps")).unwrap().count();
    assert_eq!(snaps, doc.steps.len() + 1);
}

#[test]
fn relate_two_random_cubes() {
    let dir = tempfile::tempdir().unwrap();
    write_doc(dir.path(), "a.json", &fixtures::random_cube(3, 11).unwrap());
    write_doc(dir.path(), "b.json", &fixtures::random_cube(3, 12).unwrap());
    let out = polyforge(&["relate", "a.json", "b.json", "--out", "rel.json"], dir.path());
    assert_eq!(out.status.code(), Some(0));
    let doc: LogDocument = polyforge::io::read_json(&dir.path().join("rel.json")).unwrap();
    assert!(doc.steps.len() <= 23);
    assert_eq!(digest(&doc.replay().unwrap()), digest(&fixtures::random_cube(3, 12).unwrap()));
}

#[test]
fn tower_verifies_against_oracle() {
    let dir = tempfile::tempdir().unwrap();
    write_doc(dir.path(), "q.json", &fixtures::random_cube(2, 1).unwrap());
    write_doc(dir.path(), "q2.json", &fixtures::random_cube(2, 2).unwrap());
    let out = polyforge(&["tower", "q.json", "q2.json", "--dim", "3", "-o", "tower.json"], dir.path());
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let out = polyforge(&["verify", "tower.json", "--oracle"], dir.path());
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stdout).contains("oracle: incidence matches"));
    let doc: PolytopeDocument = polyforge::io::read_json(&dir.path().join("tower.json")).unwrap();
    assert!(doc.provenance.unwrap()["cubes"].as_u64().unwrap() <= 12);
}

#[test]
fn connect_reports_gc() {
    let dir = tempfile::tempdir().unwrap();
    write_doc(dir.path(), "c.json", &fixtures::standard_cube(3));
    let out = polyforge(&["connect", "c.json", "c.json", "--facet1", "0", "--facet2", "1", "-o", "cs.json"], dir.path());
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let out = polyforge(&["gc", "cs.json"], dir.path());
    assert!(String::from_utf8_lossy(&out.stdout).contains("gc  = (4, 52)"));
    let out = polyforge(&["fvector", "cs.json"], dir.path());
    assert_eq!(String::from_utf8_lossy(&out.stdout).trim(), "(60, 116, 58)");
}

#[test]
fn export_off_writes_counts() {
    let dir = tempfile::tempdir().unwrap();
    write_doc(dir.path(), "oct.json", &fixtures::octahedron());
    let out = polyforge(&["export-off", "oct.json", "oct.off", "--digits", "4"], dir.path());
    assert_eq!(out.status.code(), Some(0));
    let text = std::fs::read_to_string(dir.path().join("oct.off")).unwrap();
    assert_eq!(text.lines().nth(1), Some("6 8 12"));
}

#[test]
fn schedule_prints_report() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(
        dir.path().join("gen.json"),
        r#"[{"coordinate":1,"coefficient":"1","base":2,"poly_exponent":0},
            {"coordinate":2,"coefficient":"1","base":2,"poly_exponent":1}]"#,
    )
    .unwrap();
    let out = polyforge(&["schedule", "--target", "1,1", "--generators", "gen.json", "--steps", "4"], dir.path());
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["steps"].as_array().unwrap().len(), 4);
}

#[test]
fn random_cube_is_seeded() {
    let dir = tempfile::tempdir().unwrap();
    let a = polyforge(&["random-cube", "--dim", "3", "--seed", "9"], dir.path());
    let b = polyforge(&["random-cube", "--dim", "3", "--seed", "9"], dir.path());
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(a.status.code(), Some(0));
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("bad.json"), "{").unwrap();
    assert_eq!(polyforge(&["verify", "bad.json"], dir.path()).status.code(), Some(1));
    std::fs::write(dir.path().join("v2.json"), r#"{"schema-version":2,"dim":1,"vrep":[["0"],["1"]]}"#).unwrap();
    assert_eq!(polyforge(&["fvector", "v2.json"], dir.path()).status.code(), Some(1));
    write_doc(dir.path(), "oct.json", &fixtures::octahedron());
    assert_eq!(polyforge(&["normalize", "oct.json"], dir.path()).status.code(), Some(1));
    let mut doc = PolytopeDocument::from_polytope(&fixtures::standard_cube(3));
    assert_eq!(doc.pairing.as_ref().map(Vec::len), Some(3));
    polyforge::io::write_json(&dir.path().join("cube.json"), &doc).unwrap();
    assert_eq!(polyforge(&["verify", "cube.json"], dir.path()).status.code(), Some(0));
    doc.pairing = Some(vec![(0, 2), (1, 3), (4, 5)]);
    polyforge::io::write_json(&dir.path().join("wrong.json"), &doc).unwrap();
    let out = polyforge(&["verify", "wrong.json"], dir.path());
    assert_eq!(out.status.code(), Some(2), "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(polyforge(&["export-off", "missing.json", "x.off"], dir.path()).status.code(), Some(1));
}
