use std::process::{Command, Output};

fn frobscope(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_frobscope"))
        .args(args)
        .env_remove("FROBSCOPE_SEED")
        .output()
        .expect("spawn frobscope")
}

fn stdout(args: &[&str]) -> String {
    let out = frobscope(args);
    assert!(
        out.status.success(),
        "{args:?} exited {:?}: {}",
        out.status.code(),
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn json_lines(args: &[&str]) -> Vec<serde_json::Value> {
    let mut full = vec!["--format", "json"];
    full.extend_from_slice(args);
    stdout(&full)
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect()
}

#[test]
fn classify_single_prime() {
    let v = json_lines(&["classify", "--poly", "x^3-x-1", "--p", "59"]);
    assert_eq!(v.len(), 1);
    assert_eq!(v[0]["cycle_type"], "1^3");
    assert_eq!(v[0]["split"], true);
    assert_eq!(v[0]["s3"], "P1");

    let v = json_lines(&["classify", "--poly", "x^3-x-1", "--p", "2"]);
    assert_eq!(v[0]["s3"], "P3");
    assert_eq!(v[0]["cycle_type"], "3");
}

#[test]
fn classify_ramified_quadratic() {
    let v = json_lines(&["classify", "--poly", "x^2-x-1", "--p", "5"]);
    assert_eq!(v[0]["ramified"], true);
    assert_eq!(v[0]["quad"], "ramified");
    assert!(v[0]["cycle_type"].is_null());
}

#[test]
fn classify_range_only_split() {
    let v = json_lines(&[
        "classify", "--poly", "x^7-7x+3", "--range", "2..10000", "--only", "split",
    ]);
    let ps: Vec<u64> = v.iter().map(|r| r["p"].as_u64().unwrap()).collect();
    assert_eq!(ps, [1879, 5381, 5783, 8819, 8893]);
}

#[test]
fn classify_range_by_cycle_type() {
    let all = json_lines(&["classify", "--poly", "x^3-x-1", "--range", "2..500"]);
    let twos = json_lines(&[
        "classify", "--poly", "x^3-x-1", "--range", "2..500", "--only", "1 2",
    ]);
    let p2 = json_lines(&[
        "classify", "--poly", "x^3-x-1", "--range", "2..500", "--only", "P2",
    ]);
    assert_eq!(twos, p2);
    let expected: Vec<_> = all.into_iter().filter(|r| r["s3"] == "P2").collect();
    assert_eq!(twos, expected);
}

#[test]
fn classify_needs_prime_or_range() {
    let out = frobscope(&["classify", "--poly", "x^2+1"]);
    assert_eq!(out.status.code(), Some(2));
    let out = frobscope(&["classify", "--poly", "x^2+1", "--p", "15"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn factor_text_and_json() {
    assert_eq!(
        stdout(&["factor", "--poly", "x^2-x-1", "--p", "11"]).trim(),
        "(x + 3)(x + 7)  mod 11"
    );
    assert_eq!(
        stdout(&["factor", "--poly", "x^3-x-1", "--p", "2"]).trim(),
        "(x^3 + x + 1)  mod 2  irreducible"
    );

    let v = json_lines(&["--seed", "7", "factor", "--poly", "x^7-7x+3", "--p", "1879"]);
    let factors = v[0]["factors"].as_array().unwrap();
    assert_eq!(factors.len(), 7);
    let roots: Vec<u64> = factors
        .iter()
        .map(|f| {
            let c = f["factor"].as_array().unwrap();
            assert_eq!(c.len(), 2);
            assert_eq!(f["multiplicity"], 1);
            (1879 - c[0].as_str().unwrap().parse::<u64>().unwrap()) % 1879
        })
        .collect();
    for r in roots {
        let val = (0..7).fold(1u128, |acc, _| acc * r as u128 % 1879);
        assert_eq!(
            (val + 1879 * 1879 - 7 * r as u128 + 3) % 1879,
            0,
            "root {r}"
        );
    }
}

#[test]
fn factor_backends_agree() {
    let args = |b| {
        stdout(&[
            "--seed",
            "3",
            "--format",
            "csv",
            "factor",
            "--poly",
            "x^12+x^5+2x+9",
            "--p",
            "101",
            "--backend",
            b,
        ])
    };
    assert_eq!(args("berlekamp"), args("cz"));
    assert!(args("auto").starts_with("factor,degree,multiplicity\n"));
}

#[test]
fn factor_repeated_factor() {
    assert_eq!(
        stdout(&["factor", "--poly", "x^3+3x^2+3x+1", "--p", "7"]).trim(),
        "(x + 1)^3  mod 7"
    );
}

#[test]
fn deterministic_requires_seed() {
    let out = frobscope(&["--deterministic", "factor", "--poly", "x^2+1", "--p", "13"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("--seed"));
    stdout(&[
        "--deterministic",
        "--seed",
        "1",
        "factor",
        "--poly",
        "x^2+1",
        "--p",
        "13",
    ]);
}

#[test]
fn cyclo_tables() {
    let v = json_lines(&["cyclo", "--m", "12"]);
    assert_eq!(v[0]["poly"], serde_json::json!(["1", "0", "-1", "0", "1"]));
    let lucas: Vec<i64> = v[0]["lucas"]
        .as_array()
        .unwrap()
        .iter()
        .map(|x| x.as_i64().unwrap())
        .collect();
    assert_eq!(lucas, [4, 0, 2, 0, -2, 0, -4, 0, -2, 0, 2, 0]);
    let rules = v[0]["residue_rules"].as_object().unwrap();
    assert_eq!(rules.keys().collect::<Vec<_>>(), ["1", "11", "5", "7"]);
}

#[test]
fn lucas_terms() {
    let v = json_lines(&["lucas", "--poly", "x^3-x-1", "--count", "8"]);
    let terms: Vec<&str> = v.iter().map(|r| r["value"].as_str().unwrap()).collect();
    assert_eq!(terms, ["3", "0", "2", "3", "2", "5", "5", "7"]);

    let csv = stdout(&[
        "--format",
        "csv",
        "lucas",
        "--poly",
        "x^2-x-1",
        "--initials",
        "0,1",
        "--count",
        "6",
    ]);
    assert_eq!(csv, "n,value\n0,0\n1,1\n2,1\n3,2\n4,3\n5,5\n");

    let neg = json_lines(&[
        "lucas",
        "--poly",
        "x^2-x-1",
        "--initials",
        "-1,2",
        "--count",
        "3",
    ]);
    assert_eq!(neg[2]["value"], "1");
}

#[test]
fn lucas_step_cap() {
    let out = frobscope(&[
        "--step-cap",
        "5",
        "lucas",
        "--poly",
        "x^2-x-1",
        "--count",
        "10",
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn perrin_smallest_pseudoprime() {
    assert_eq!(stdout(&["perrin", "--limit", "300000"]), "n\n271441\n");
    assert_eq!(
        stdout(&["--format", "csv", "perrin", "--limit", "1000"]),
        "n\n"
    );
}

#[test]
fn tau_table_and_congruence() {
    let v = json_lines(&["tau", "--lmax", "7", "--pmax", "40"]);
    let l: Vec<u64> = v.iter().map(|r| r["l"].as_u64().unwrap()).collect();
    assert_eq!(l, [2, 3, 5, 7]);
    assert_eq!(v[0]["tau"], "-24");
    assert_eq!(v[0]["delta"], "-7616");
    assert_eq!(v[1]["delta"], "-645084");

    let out = frobscope(&["--series-cap", "5", "tau", "--lmax", "7"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn scan_tolerance_sets_exit_code() {
    let base = [
        "scan",
        "--poly",
        "x^3-x-1",
        "--pmax",
        "20000",
        "--group-order",
        "6",
        "--class",
        "1^3=1",
        "--class",
        "1 2=3",
        "--class",
        "3=2",
    ];
    let out = frobscope(&base);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );

    let mut tight = base.to_vec();
    tight.extend(["--tolerance", "0.0001"]);
    let out = frobscope(&tight);
    assert_eq!(out.status.code(), Some(1));
    assert!(!out.stdout.is_empty());
}

#[test]
fn scan_writes_report_file() {
    let dir = std::env::temp_dir().join(format!("frobscope-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("scan.json");
    let printed = stdout(&[
        "--format",
        "json",
        "--jobs",
        "2",
        "scan",
        "--poly",
        "x^2+1",
        "--pmax",
        "1000",
        "--output",
        path.to_str().unwrap(),
    ]);
    let written = std::fs::read_to_string(&path).unwrap();
    assert_eq!(printed, written);
    let v: serde_json::Value = serde_json::from_str(&written).unwrap();
    assert_eq!(v["ramified"], serde_json::json!([2]));
    std::fs::remove_dir_all(dir).unwrap();
}

#[test]
fn bad_input_exits_two() {
    for args in [
        &["classify", "--poly", "x^2+", "--p", "5"][..],
        &["factor", "--poly", "x^2+1", "--p", "12"],
        &["cyclo", "--m", "0"],
        &[
            "scan", "--poly", "x^3-x-1", "--pmax", "100", "--class", "1^3",
        ],
        &["no-such-command"],
    ] {
        let out = frobscope(args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
    }
}
