//! Runs `hvlab suite paper-acceptance` twice and prints one line per criterion.

use std::collections::BTreeMap;
use std::path::Path;
use std::process::Command;

fn read_tree(root: &Path) -> BTreeMap<String, Vec<u8>> {
    let mut out = BTreeMap::new();
    let mut stack = vec![root.to_path_buf()];
    while let Some(dir) = stack.pop() {
        for entry in std::fs::read_dir(&dir).unwrap() {
            let p = entry.unwrap().path();
            if p.is_dir() {
                stack.push(p);
            } else {
                out.insert(p.strip_prefix(root).unwrap().display().to_string(), std::fs::read(&p).unwrap());
            }
        }
    }
    out
}

fn main() {
    let base = std::env::temp_dir().join(format!("hvlab-acceptance-{}", std::process::id()));
    let mut trees = Vec::new();
    let mut summary = String::new();
    for run in ["a", "b"] {
        let dir = base.join(run);
        let out = Command::new(env!("CARGO_BIN_EXE_hvlab"))
            .args(["suite", "paper-acceptance", "--out", dir.to_str().unwrap()])
            .output()
            .expect("binary runs");
        let stdout = String::from_utf8_lossy(&out.stdout).into_owned();
        if run == "a" {
            summary = stdout.clone();
            eprint!("{}", String::from_utf8_lossy(&out.stderr));
        }
        assert!(out.status.code().is_some(), "suite was killed");
        trees.push(read_tree(&dir));
    }
    let identical = trees[0] == trees[1] && !trees[0].is_empty();
    for line in summary.lines() {
        println!("{line}");
    }
    println!("{}  binary run twice: {} output files byte-identical", if identical { "PASS" } else { "FAIL" }, trees[0].len());
    std::fs::remove_dir_all(&base).ok();
    let passed = summary.lines().filter(|l| l.starts_with("PASS")).count();
    if passed != 12 || !identical {
        eprintln!("acceptance failed: {passed}/12 criteria passed, outputs identical: {identical}");
        std::process::exit(1);
    }
}
