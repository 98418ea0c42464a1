mod common;

use common::{golden_dir, mismatches, run, CASES};

/// `UPDATE_GOLDEN=1 cargo test -p wsep-cli --test golden` rewrites the files.
#[test]
fn golden_files_regenerate_identically() {
    if std::env::var_os("UPDATE_GOLDEN").is_some() {
        for &(name, _, args) in CASES {
            std::fs::write(golden_dir().join(name), run(args, 1)).unwrap();
        }
    }
    let bad = mismatches(None);
    assert!(bad.is_empty(), "golden mismatches: {bad:?}");
}

#[test]
fn invalid_input_exits_with_two() {
    let status = |args: &[&str]| {
        std::process::Command::new(env!("CARGO_BIN_EXE_wsep")).args(args).output().unwrap().status.code()
    };
    assert_eq!(status(&["check", "--n", "6", "--a", "1,2,7", "--b", "3,5,6"]), Some(2));
    assert_eq!(status(&["frobnicate"]), Some(2));
    assert_eq!(status(&["octahedron", "--n", "6", "--a", "1,2,3"]), Some(2));
    assert_eq!(status(&["mutdist", "--n", "8", "--i", "1,2,5,6", "--j", "3,4,7,8"]), Some(2));
    assert_eq!(status(&["mutdist", "--n", "6", "--i", "1,2,4", "--j", "3,5,6", "--budget", "3"]), Some(3));
}

#[test]
fn formats() {
    let chains = run(&["chord", "--n", "5", "--u", "3", "--v", "2,3,4"], 1);
    assert!(chains.starts_with(b"[{\"chain\":[[3],"));
    let csv = String::from_utf8(run(&["octahedron", "--p", "2,2,2,2", "--format", "csv"], 1)).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("cuboid_formula,match,p,pq_interior,z_count,z_formula"));
    assert_eq!(lines.next(), Some("6,true,2 2 2 2,6,5,5"));
    let explore = String::from_utf8(run(&["explore", "--n", "5", "--k", "2", "--format", "jsonl"], 1)).unwrap();
    assert_eq!(explore.lines().count(), 5);
}
