use std::fs;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_matwaring"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn constant_for_squares() {
    let o = run(&["constant", "-k", "2"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "100\n");
}

#[test]
fn scalar_without_solution_exits_2() {
    let o = run(&["solve-scalar", "--p", "7", "--k", "3", "--c", "3"]);
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(String::from_utf8_lossy(&o.stderr).lines().count(), 1);
}

#[test]
fn scalar_and_pair_solutions() {
    let o = run(&["solve-scalar", "--p", "7", "--k", "2", "--c", "5"]);
    assert_eq!(stdout(&o), "x=2\ny=1\nxk=4\nyk=1\n");
    let o = run(&["solve-pair", "--p", "13", "--k", "2", "--c", "1", "--lambda", "0"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("xk=4\nyk=10\n"));
    let o = run(&["solve-pair", "--p", "5", "--k", "4", "--c", "1", "--lambda", "0"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn zero_matrix_has_one_witness() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("zero.mat");
    fs::write(&path, "p=101\nm=1\nn=2\nA=[[0;0],[0;0]]\n").unwrap();
    let o = run(&["decompose", "--p", "101", "--k", "2", "--input", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.starts_with("k=2\nterms=1\n"), "{out}");
    assert!(out.ends_with("verified=true\n"));
}

#[test]
fn decompose_then_verify() {
    let dir = tempfile::tempdir().unwrap();
    let mat = dir.path().join("a.mat");
    let dec = dir.path().join("a.dec");
    fs::write(&mat, "# a Jordan block\np=101\nm=1\nn=2\nA=[[5;1],\n  [0;5]]\n").unwrap();
    let o = run(&[
        "decompose",
        "--k",
        "3",
        "--input",
        mat.to_str().unwrap(),
        "--out",
        dec.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let text = fs::read_to_string(&dec).unwrap();
    assert!(text.contains("case=jordan-block\n"));
    let o = run(&["verify", "--input", mat.to_str().unwrap(), "--witnesses", dec.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "verified=true\n");

    // same witnesses, wrong exponent
    let broken = text.replacen("k=3", "k=2", 1);
    fs::write(&dec, broken).unwrap();
    let o = run(&["verify", "--input", mat.to_str().unwrap(), "--witnesses", dec.to_str().unwrap()]);
    assert_eq!(stdout(&o), "verified=false\n");
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn seeded_runs_are_reproducible() {
    let args = ["decompose", "--p", "7", "--m", "2", "--k", "3", "--n", "4", "--seed", "11"];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let c = run(&["decompose", "--p", "7", "--m", "2", "--k", "3", "--n", "4", "--seed", "12"]);
    assert_ne!(a.stdout, c.stdout);

    // the random matrix is printed first, so the output verifies on its own
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("out.txt");
    fs::write(&path, &a.stdout).unwrap();
    let o = run(&["verify", "--input", path.to_str().unwrap()]);
    assert_eq!(stdout(&o), "verified=true\n");
}

#[test]
fn parse_errors_exit_1() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.mat");
    fs::write(&path, "p=7\nm=1\nn=1\nA=[[8]]\n").unwrap();
    let o = run(&["decompose", "--k", "2", "--input", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    let err = String::from_utf8_lossy(&o.stderr).to_string();
    assert!(err.contains("line 4"), "{err}");
    assert!(err.contains("field mismatch"), "{err}");

    let o = run(&["field-info", "--p", "9"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn extension_field_input() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("ext.mat");
    fs::write(&path, "p=7\nm=2\nmodulus=1,0,1\nn=1\nA=[[1,3]]\n").unwrap();
    let o = run(&["decompose", "--k", "2", "--input", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("modulus=1,0,1\n"));
}

#[test]
fn max_terms_override() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("j.mat");
    fs::write(&path, "p=101\nm=1\nn=2\nA=[[5;1],[0;5]]\n").unwrap();
    let o = run(&["decompose", "--k", "2", "--max-terms", "1", "--input", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn census_csv() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("c.csv");
    let o = run(&[
        "census",
        "--p-range",
        "3:7",
        "--k-range",
        "2:3",
        "--n",
        "1",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let csv = fs::read_to_string(&path).unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], "p,m,q,n,k,max_terms,classes_checked,elapsed_ms");
    assert_eq!(lines.len(), 7);
    assert!(lines[1].starts_with("3,1,3,1,2,2,3,"));
    assert!(lines[6].starts_with("7,1,7,1,3,3,7,"));
}

#[test]
fn weil_record() {
    let o = run(&["weil-check", "--p", "7", "--d", "2", "--f", "1,5,1"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("abs_irreducible=false\n"));
    let o = run(&["weil-check", "--p", "11", "--d", "1", "--f", "3,1,4"]);
    assert!(stdout(&o).contains("N=11\n"));
    assert!(stdout(&o).contains("bound_holds=true\n"));
}
