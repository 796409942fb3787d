//! End-to-end command-line behavior: exit codes, file formats, tamper
//! detection.

use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_eaqcc"))
}

fn tmp(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("eaqcc-cli-{}", std::process::id()));
    fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

fn write_tmp(name: &str, content: &str) -> PathBuf {
    let p = tmp(name);
    fs::write(&p, content).unwrap();
    p
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

const EXAMPLE_GF4: &str = "gf4 n=4: 1W10|1101\n";

#[test]
fn import_produces_golden_matrix_file() {
    let f = write_tmp("example.gf4", EXAMPLE_GF4);
    let out = run(&["import", f.to_str().unwrap()]);
    assert!(out.status.success());
    assert_eq!(
        stdout(&out),
        "checkmatrix n=4 rows=2\n\
         Z: 1+D,D,1,D ; X: 0,1,0,0\n\
         Z: 0,1,0,0 ; X: 1+D,1+D,1,D\n"
    );
}

#[test]
fn import_single_symbol() {
    let f = write_tmp("w.gf4", "gf4 n=1: w\n");
    let out = run(&["import", f.to_str().unwrap()]);
    assert!(out.status.success());
    assert_eq!(
        stdout(&out),
        "checkmatrix n=1 rows=2\nZ: 1 ; X: 1\nZ: 1 ; X: 0\n"
    );
}

#[test]
fn import_malformed_symbol_exits_2() {
    let f = write_tmp("bad.gf4", "gf4 n=2: 1q\n");
    let out = run(&["import", f.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("symbol"));
}

#[test]
fn usage_error_exits_1() {
    let out = run(&["frobnicate"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn construct_accepts_gf4_and_matrix_files() {
    let f = write_tmp("c1.gf4", EXAMPLE_GF4);
    let out = run(&["construct", f.to_str().unwrap()]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("params [[4,2;2]] s=2"));

    let imported = run(&["import", f.to_str().unwrap()]);
    let m = write_tmp("c1.matrix", &stdout(&imported));
    let out2 = run(&["construct", m.to_str().unwrap()]);
    assert_eq!(stdout(&out2), text);
}

#[test]
fn construct_is_deterministic() {
    let f = write_tmp("det.gf4", EXAMPLE_GF4);
    let a = run(&["construct", f.to_str().unwrap()]);
    let b = run(&["construct", f.to_str().unwrap()]);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn construct_rank_deficient_exits_3() {
    let m = write_tmp(
        "rankdef.matrix",
        "checkmatrix n=2 rows=2\nZ: 1,0 ; X: 0,0\nZ: 1,0 ; X: 0,0\n",
    );
    let out = run(&["construct", m.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn construct_parse_failure_exits_2() {
    let m = write_tmp(
        "garbled.matrix",
        "checkmatrix n=2 rows=1\nZ: 1,Q ; X: 0,0\n",
    );
    let out = run(&["construct", m.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn construct_structured_emits_json() {
    let f = write_tmp("json.gf4", EXAMPLE_GF4);
    let out = run(&["construct", f.to_str().unwrap(), "--format", "structured"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["params"], "[[4,2;2]]");
    assert_eq!(v["s"], 2);
}

#[test]
fn verify_chain_passes_and_detects_tampering() {
    let f = write_tmp("chain.gf4", EXAMPLE_GF4);
    let art = tmp("chain.artifact");
    let out = run(&[
        "construct",
        f.to_str().unwrap(),
        "--out",
        art.to_str().unwrap(),
    ]);
    assert!(out.status.success());

    let verify = run(&["verify", art.to_str().unwrap()]);
    assert!(
        verify.status.success(),
        "verify failed:\n{}",
        stdout(&verify)
    );
    let text = stdout(&verify);
    assert!(text.contains("check commuting PASS"));
    assert!(text.contains("check oracle-agreement PASS"));
    assert!(text.contains("result PASS"));

    // deleting a decode-relevant gate breaks the replay check
    let original = fs::read_to_string(&art).unwrap();
    let gate_line = original
        .lines()
        .find(|l| l.starts_with("CNOT"))
        .expect("artifact has CNOT gates")
        .to_string();
    let tampered = original.replacen(&format!("{gate_line}\n"), "", 1);
    let bad = write_tmp("chain-tampered.artifact", &tampered);
    let verify_bad = run(&["verify", bad.to_str().unwrap()]);
    assert_eq!(verify_bad.status.code(), Some(4));
    assert!(stdout(&verify_bad).contains("FAIL"));

    // swapping the Z and X halves of a stabilizer row breaks commutation
    let mut swapped = String::new();
    let mut in_full = false;
    let mut done = false;
    for line in original.lines() {
        if line == "[section stabilizer full]" {
            in_full = true;
        } else if line == "[end]" {
            in_full = false;
        }
        if in_full && !done && line.starts_with("Z:") && line.contains('D') {
            let body = line.strip_prefix("Z:").unwrap();
            let (z, x) = body.split_once(';').unwrap();
            let x = x.trim().strip_prefix("X:").unwrap();
            swapped.push_str(&format!("Z:{x} ; X:{z}\n"));
            done = true;
            continue;
        }
        swapped.push_str(line);
        swapped.push('\n');
    }
    assert!(done, "found a row to tamper with");
    let bad2 = write_tmp("chain-swapped.artifact", &swapped);
    let verify_bad2 = run(&["verify", bad2.to_str().unwrap()]);
    assert_eq!(verify_bad2.status.code(), Some(4));
}

#[test]
fn enhance_reports_both_parameter_strings() {
    let f = write_tmp("enh.gf4", EXAMPLE_GF4);
    let art = tmp("enh.artifact");
    assert!(run(&[
        "construct",
        f.to_str().unwrap(),
        "--out",
        art.to_str().unwrap()
    ])
    .status
    .success());
    let out = run(&["enhance", art.to_str().unwrap()]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("enhanced [[4,2:2;2]]"));
    assert!(text.contains("teleport [[4,3;3]]"));
    assert!(text.contains("Z: 0,0,D^-1,D^-2+1+D,0,0 ; X: 0,0,1,0,0,0"));
}

#[test]
fn enhance_without_extra_entanglement_exits_3() {
    let m = write_tmp("allz.matrix", "checkmatrix n=2 rows=1\nZ: 1,D ; X: 0,0\n");
    let art = tmp("allz.artifact");
    assert!(run(&[
        "construct",
        m.to_str().unwrap(),
        "--out",
        art.to_str().unwrap()
    ])
    .status
    .success());
    let out = run(&["enhance", art.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("no extra-entanglement"));
}

#[test]
fn window_flag_validated() {
    let f = write_tmp("win.gf4", EXAMPLE_GF4);
    let out = run(&["construct", f.to_str().unwrap(), "--window", "2"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn gamma_scaling_matches_original_and_skipping_gives_subcode() {
    // ancilla block with the non-unit invariant factor 1+D: the default
    // row premultiplication records a subcode tier that verify accepts
    let m = write_tmp(
        "subcode.matrix",
        "checkmatrix n=3 rows=2\n\
         Z: 0,0,0 ; X: 1,0,0\n\
         Z: 0,1+D,D+D^2 ; X: 0,0,0\n",
    );
    let art = tmp("subcode.artifact");
    assert!(run(&[
        "construct",
        m.to_str().unwrap(),
        "--out",
        art.to_str().unwrap()
    ])
    .status
    .success());
    let text = fs::read_to_string(&art).unwrap();
    assert!(text.contains("tier UNIMODULAR-EQUIVALENT"));
    let verify = run(&["verify", art.to_str().unwrap()]);
    assert!(verify.status.success(), "{}", stdout(&verify));
    assert!(stdout(&verify).contains("check syndrome-equivalence PASS"));

    // skipping the optional scaling records (and verifies at) the
    // subcode tier
    let art2 = tmp("subcode-off.artifact");
    assert!(run(&[
        "construct",
        m.to_str().unwrap(),
        "--no-subcode-rowops",
        "--out",
        art2.to_str().unwrap()
    ])
    .status
    .success());
    assert!(fs::read_to_string(&art2)
        .unwrap()
        .contains("tier SUBCODE-EQUIVALENT"));
}

#[test]
fn no_subcode_flag_changes_artifact() {
    let m = write_tmp(
        "nosc.matrix",
        "checkmatrix n=3 rows=2\n\
         Z: 0,0,0 ; X: 1,0,0\n\
         Z: 0,1+D,D+D^2 ; X: 0,0,0\n",
    );
    let with = run(&["construct", m.to_str().unwrap()]);
    let without = run(&["construct", m.to_str().unwrap(), "--no-subcode-rowops"]);
    assert!(with.status.success() && without.status.success());
    assert_ne!(with.stdout, without.stdout);
    assert!(stdout(&without).contains("subcode-rowops off"));
}

#[test]
fn rational_artifact_round_trips_through_verify_and_enhance() {
    // this input produces an infinite-depth division, so the artifact
    // report carries rational entries (num/den) that must survive the
    // parse -> verify -> enhance chain
    let m = write_tmp(
        "rational.matrix",
        "checkmatrix n=4 rows=3\n\
         Z: 0,0,0,0 ; X: 1,0,0,0\n\
         Z: 0,0,1,0 ; X: 0,1+D,0,0\n\
         Z: 0,0,0,1 ; X: 0,0,0,0\n",
    );
    let art = tmp("rational.artifact");
    assert!(run(&[
        "construct",
        m.to_str().unwrap(),
        "--out",
        art.to_str().unwrap()
    ])
    .status
    .success());
    let text = fs::read_to_string(&art).unwrap();
    assert!(text.contains("params [[4,1;2]] s=1"));
    assert!(text.contains('/'), "expected rational entries in the report");
    assert!(text.contains("INFD"));

    let verify = run(&["verify", art.to_str().unwrap()]);
    assert!(verify.status.success(), "{}", stdout(&verify));
    assert!(stdout(&verify).contains("result PASS"));

    let enhance = run(&["enhance", art.to_str().unwrap()]);
    assert!(enhance.status.success());
    assert!(stdout(&enhance).contains("enhanced [[4,1:1;2]]"));
    assert!(stdout(&enhance).contains("teleport none"));
}
