use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn opbar() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_opbar"));
    c.env_remove("OPBAR_CACHE_DIR");
    c
}

fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name)
}

fn run(args: &[&str]) -> Output {
    opbar().args(args).output().unwrap()
}

fn stdout(args: &[&str]) -> String {
    let out = run(args);
    assert_eq!(out.status.code(), Some(0), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn golden(name: &str, actual: &str) {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name);
    if std::env::var_os("OPBAR_BLESS").is_some() {
        std::fs::create_dir_all(path.parent().unwrap()).unwrap();
        std::fs::write(&path, actual).unwrap();
        return;
    }
    let expected = std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
    assert_eq!(expected, actual, "{name}");
}

#[test]
fn counts_trees() {
    let out = stdout(&["trees", "--n", "3", "--species", "standard", "--count", "--format", "csv"]);
    assert_eq!(out, "n,species,count\n3,standard,4\n");
    let out = stdout(&["trees", "--n", "3", "--species", "root", "--count", "--format", "csv"]);
    assert!(out.ends_with(",8\n"), "{out}");
}

#[test]
fn derivatives_find_jacobi() {
    let out = stdout(&["derivatives", "--max-arity", "3", "--format", "csv"]);
    assert!(out.contains("3,-2,2,\"found (1,1,1)\"\n"), "{out}");
}

#[test]
fn golden_outputs() {
    golden("trees_3.txt", &stdout(&["trees", "--n", "3"]));
    golden("bar_ass_4.csv", &stdout(&["bar", "--operad", "ass", "--max-arity", "4", "--format", "csv"]));
    golden("cobar_sphere_1.txt", &stdout(&["cobar", "--max-arity", "4", "--sphere", "1"]));
    golden("partition_4_character.json", &stdout(&["partition", "--n", "4", "--character", "--format", "json"]));
    golden("koszul_com_4.csv", &stdout(&["koszul", "--operad", "com", "--max-arity", "4", "--format", "csv"]));
    golden("module_mx_2.txt", &stdout(&["module-mx", "--sphere", "2", "--max-arity", "4"]));
    golden("compose_com_sphere.csv", &stdout(&["compose", "--outer", "com", "--inner", "sphere:2", "--arity", "4", "--format", "csv"]));
    let torus = data("torus.coalg");
    golden("module_mx_torus.csv", &stdout(&["module-mx", "--coalgebra", torus.to_str().unwrap(), "--max-arity", "3", "--format", "csv"]));
}

#[test]
fn verify_passes() {
    let out = run(&["verify", "--max-arity", "4", "--format", "csv"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(out.status.code(), Some(0), "{text}");
    let statuses: Vec<&str> = text.lines().skip(1).map(|l| l.split(',').nth(2).unwrap()).collect();
    assert_eq!(statuses, vec!["PASS"; 11]);
}

#[test]
fn usage_errors_exit_2() {
    for args in [
        vec!["bar", "--arity", "0"],
        vec!["bar", "--arity", "3", "--max-arity", "4"],
        vec!["partition", "--n", "12"],
        vec!["trees", "--n", "3", "--species", "bushy"],
        vec!["bar", "--operad", "no-such-file", "--arity", "2"],
        vec!["module-mx"],
        vec!["verify", "--criterion", "12"],
        vec!["frobnicate"],
    ] {
        assert_eq!(run(&args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn failed_computations_exit_1() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.coalg");
    // a ↦ a⊗b is not cocommutative
    std::fs::write(&bad, "generator 1 a\ngenerator 1 b\ngenerator 2 c\ncoproduct\nmatrix Z 9 3\n1 2 1\n").unwrap();
    let out = run(&["module-mx", "--coalgebra", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("cocommutativity"));
}

#[test]
fn cache_is_sound() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["bar", "--operad", "ass", "--max-arity", "4", "--format", "json"];
    let fresh = stdout(&args);
    let with_cache = |args: &[&str]| {
        let out = opbar().args(args).env("OPBAR_CACHE_DIR", dir.path()).output().unwrap();
        assert_eq!(out.status.code(), Some(0));
        String::from_utf8(out.stdout).unwrap()
    };
    let first = with_cache(&args);
    let entries: Vec<_> = std::fs::read_dir(dir.path()).unwrap().map(|e| e.unwrap().path()).collect();
    assert_eq!(entries.len(), 1);
    let stored = std::fs::read(&entries[0]).unwrap();
    let second = with_cache(&args);
    assert_eq!(fresh, first);
    assert_eq!(first, second);
    assert_eq!(std::fs::read(&entries[0]).unwrap(), stored, "entries are immutable");
    // another format of the same request is served from the same entry
    let csv = with_cache(&["bar", "--operad", "ass", "--max-arity", "4", "--format", "csv"]);
    assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 1);
    assert_eq!(csv, stdout(&["bar", "--operad", "ass", "--max-arity", "4", "--format", "csv"]));
    // --no-cache neither reads nor writes
    let other = ["partition", "--n", "3", "--no-cache"];
    opbar().args(other).env("OPBAR_CACHE_DIR", dir.path()).output().unwrap();
    assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 1);
}

#[test]
fn exports_complex() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bar.txt");
    stdout(&["bar", "--operad", "com", "--arity", "4", "--export", path.to_str().unwrap()]);
    let written = std::fs::read_to_string(&path).unwrap();
    let stored = Path::new(env!("CARGO_MANIFEST_DIR")).join("../core/tests/golden/bar_com_4.txt");
    assert_eq!(written, std::fs::read_to_string(stored).unwrap());
}

#[test]
fn outputs_are_deterministic() {
    let args = ["module-mx", "--sphere", "1", "--max-arity", "3", "--format", "json"];
    assert_eq!(stdout(&args), stdout(&args));
}

#[test]
fn operad_files_match_builtins() {
    let file = Path::new(env!("CARGO_MANIFEST_DIR")).join("../core/tests/golden/ass_4.operad");
    let from_file = stdout(&["bar", "--operad", file.to_str().unwrap(), "--max-arity", "4", "--format", "csv"]);
    assert_eq!(from_file, stdout(&["bar", "--operad", "ass", "--max-arity", "4", "--format", "csv"]));
    let out = run(&["cobar", "--cooperad", file.to_str().unwrap(), "--arity", "2"]);
    assert_eq!(out.status.code(), Some(2), "an operad file is not a cooperad");
}
