use std::path::PathBuf;
use std::process::Command;

/// Golden file name, the criterion it backs, and the CLI arguments.
pub const CASES: &[(&str, u8, &[&str])] = &[
    ("check_124_356.json", 1, &["check", "--n", "6", "--a", "1,2,4", "--b", "3,5,6"]),
    ("check_13_2.json", 1, &["check", "--n", "3", "--a", "1,3", "--b", "2"]),
    ("domain_example.json", 4, &["domain", "--n", "10", "--i", "1,2,4,6,8", "--j", "3,5,7,9,10"]),
    ("purity_example.json", 4, &["purity", "--n", "10", "--i", "1,2,4,6,8", "--j", "3,5,7,9,10"]),
    (
        "cliques_example.jsonl",
        4,
        &["purity", "--n", "10", "--i", "1,2,4,6,8", "--j", "3,5,7,9,10", "--format", "jsonl"],
    ),
    ("distance_124_356.json", 5, &["distance", "--n", "6", "--i", "1,2,4", "--j", "3,5,6", "--method", "exact"]),
    ("distance_135_246.json", 5, &["distance", "--n", "6", "--i", "1,3,5", "--j", "2,4,6", "--method", "exact"]),
    ("necklace_48710.json", 9, &["necklace", "--perm", "4,8,7,10,9,3,2,1,6,5", "--k", "5"]),
    ("necklace_48710.csv", 9, &["necklace", "--perm", "4,8,7,10,9,3,2,1,6,5", "--k", "5", "--format", "csv"]),
    ("purity_124_356.json", 10, &["purity", "--n", "6", "--i", "1,2,4", "--j", "3,5,6"]),
    ("mutdist_124_356.json", 10, &["mutdist", "--n", "6", "--i", "1,2,4", "--j", "3,5,6"]),
    ("octahedron_124.json", 10, &["octahedron", "--n", "6", "--a", "1,2,4"]),
];

pub fn golden_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests").join("golden")
}

/// Runs the binary on `args` with the given worker count; returns stdout.
pub fn run(args: &[&str], threads: usize) -> Vec<u8> {
    let out = Command::new(env!("CARGO_BIN_EXE_wsep"))
        .args(args)
        .env("THREADS", threads.to_string())
        .output()
        .expect("binary runs");
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    out.stdout
}

/// Names of the cases whose output differs from the stored file.
pub fn mismatches(criterion: Option<u8>) -> Vec<String> {
    let mut bad = Vec::new();
    for &(name, c, args) in CASES {
        if criterion.is_some_and(|want| want != c) {
            continue;
        }
        let expected = std::fs::read(golden_dir().join(name)).unwrap_or_default();
        for threads in [1, 4] {
            if run(args, threads) != expected {
                bad.push(format!("{name} (threads={threads})"));
            }
        }
    }
    bad
}
