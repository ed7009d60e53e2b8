//! End-to-end runs of the `chernvan` binary.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use chernvan::cohomology::RingName;
use chernvan::report::Report;
use chernvan::vanish::DisplayName;

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_chernvan"));
    c.env_remove("CHERNVAN_OUT_DIR");
    c
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn golden(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests/golden")
        .join(name)
}

/// Compares with a checked-in file; `UPDATE_GOLDEN=1` rewrites it.
fn check_golden(name: &str, actual: &str) {
    let path = golden(name);
    if std::env::var_os("UPDATE_GOLDEN").is_some() {
        std::fs::write(&path, actual).unwrap();
        return;
    }
    let expected = std::fs::read_to_string(&path).unwrap();
    assert_eq!(actual, expected, "golden file {name}");
}

#[test]
fn verify_all_matches_golden() {
    let o = run(&["verify", "all", "--no-timing"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let text = stdout(&o);
    assert!(text.contains("stage c7: MATCH"));
    assert!(text.contains("computed: c7 = 0"));
    assert!(text.contains("computed: c = -3; c8 = 0"));
    check_golden("verify_all.txt", &text);
    let o = run(&["verify", "all", "--no-timing", "--format", "structured"]);
    assert_eq!(o.status.code(), Some(0));
    check_golden("verify_all.json", &stdout(&o));
}

#[test]
fn stability_commands_match_golden() {
    let cases: [(&str, &[&str]); 6] = [
        ("walls_3_4.txt", &["walls", "--rank", "3", "--chi", "4"]),
        (
            "destab_3_4_third.txt",
            &["destab", "--rank", "3", "--chi", "4", "--wall", "1/3"],
        ),
        ("dims_2.txt", &["dims", "--genus", "2"]),
        (
            "patterns_2_1.txt",
            &["patterns", "--n", "2", "--marked", "1"],
        ),
        ("catalog.txt", &["catalog"]),
        ("nf_u3.txt", &["nf", "--ring", "btilde", "u^3"]),
    ];
    for (file, args) in cases {
        let o = run(args);
        assert_eq!(o.status.code(), Some(0), "{args:?}: {}", stderr(&o));
        check_golden(file, &stdout(&o));
    }
}

#[test]
fn output_is_deterministic() {
    for args in [
        &["verify", "all", "--no-timing"][..],
        &["verify", "stages", "--no-timing", "--format", "structured"],
        &["catalog", "--format", "structured"],
    ] {
        let a = run(args);
        let b = run(args);
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
}

#[test]
fn text_and_structured_reports_agree() {
    for args in [
        &["verify", "all"][..],
        &["walls", "--rank", "2", "--chi", "5"],
        &["destab", "--rank", "3", "--chi", "4", "--wall", "2/3"],
        &[
            "transfer",
            "--rank",
            "3",
            "--bundle",
            "0 0 1 | 0 1 1 | 1 1 0",
        ],
        &["patterns", "--n", "3", "--marked", "1"],
        &["catalog"],
        &["dims", "--genus", "7"],
    ] {
        let mut t = args.to_vec();
        t.push("--no-timing");
        let text = Report::parse_text(&stdout(&run(&t))).unwrap();
        t.extend(["--format", "structured"]);
        let json = Report::from_json(&stdout(&run(&t))).unwrap();
        assert_eq!(text, json, "{args:?}");
        assert_eq!(Report::parse_text(&text.to_text()).unwrap(), text);
    }
}

#[test]
fn verify_c7_at_degree_14() {
    let o = run(&["verify", "c7", "--trunc", "14"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
}

#[test]
fn c8_fails_closed_below_degree_16() {
    let o = run(&["verify", "c8", "--trunc", "14"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("certificate failed: c8"));
}

#[test]
fn corrupted_relation_flags_normal_bundle() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("b.ring");
    let text = RingName::B
        .bundled_text()
        .replace("rel u^3 + a*u + b", "rel u^3 + 2*a*u + b");
    assert_ne!(text, RingName::B.bundled_text());
    std::fs::write(&path, text).unwrap();
    let arg = format!("b={}", path.display());
    let o = run(&["verify", "all", "--presentation", &arg]);
    assert_eq!(o.status.code(), Some(1));
    let out = stdout(&o);
    assert!(out.contains("stage normal_bundle: MISMATCH"), "{out}");
    assert!(out.contains("  diff: "), "{out}");
}

#[test]
fn corrupted_display_gives_term_diff() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("cf.txt");
    let text = format!("{} + 1/2*u*v", DisplayName::Cf.bundled_text().trim_end());
    std::fs::write(&path, text).unwrap();
    let arg = format!("cf={}", path.display());
    let o = run(&["verify", "stages", "--display", &arg]);
    assert_eq!(o.status.code(), Some(1));
    let out = stdout(&o);
    assert!(out.contains("stage cf: MISMATCH"));
    assert!(
        out.contains("diff: u*v | claimed 55/2 | computed 27"),
        "{out}"
    );
    assert!(stderr(&o).contains("certificate failed: cf"));
}

#[test]
fn input_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.txt");
    std::fs::write(&bad, "u^2 + * v").unwrap();
    let arg = format!("cf={}", bad.display());
    let o = run(&["verify", "stages", "--display", &arg]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("position"), "{}", stderr(&o));

    let missing = format!("b={}", dir.path().join("nope.ring").display());
    assert_eq!(
        run(&["verify", "all", "--presentation", &missing])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        run(&["verify", "all", "--presentation", "q=x"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(run(&["verify", "everything"]).status.code(), Some(2));
    assert_eq!(
        run(&["verify", "c7", "--trunc", "7"]).status.code(),
        Some(2)
    );
    assert_eq!(
        run(&["walls", "--rank", "3", "--chi", "6"]).status.code(),
        Some(2)
    );
    assert_eq!(
        run(&["transfer", "--rank", "3", "--bundle", "0 0 2"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        run(&["patterns", "--n", "5", "--marked", "1"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(run(&["dims", "--genus", "1"]).status.code(), Some(2));
    assert_eq!(run(&[]).status.code(), Some(2));
}

#[test]
fn nf_queries() {
    let o = run(&["nf", "--ring", "btilde", "0"]);
    assert!(stdout(&o).contains("computed: 0\n"));
    let ch8 = DisplayName::Ch8van
        .bundled_text()
        .lines()
        .filter(|l| !l.trim_start().starts_with('#'))
        .collect::<Vec<_>>()
        .join(" ")
        .replace("xi", "(u+v)");
    let o = run(&["nf", "--ring", "btilde", &ch8]);
    assert!(!stdout(&o).contains("computed: 0\n"));
    for factor in ["eta", "(u+v)"] {
        let o = run(&["nf", "--ring", "btilde", &format!("{factor}*({ch8})")]);
        assert_eq!(o.status.code(), Some(0));
        assert!(stdout(&o).contains("computed: 0\n"), "{factor}");
    }
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("p.ring");
    std::fs::write(
        &path,
        "var x deg 2\nvar y deg 2\nrel x^2 - y\nrel y^2 - x\n",
    )
    .unwrap();
    let o = run(&["nf", "--presentation", path.to_str().unwrap(), "x^4"]);
    assert!(stdout(&o).contains("computed: x\n"), "{}", stdout(&o));
}

#[test]
fn out_file_and_env_directory() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("r.json");
    let o = run(&[
        "dims",
        "--genus",
        "3",
        "--format",
        "structured",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    let r = Report::from_json(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(r.command, "dims --genus 3");

    let o = bin()
        .args(["walls", "--rank", "3", "--chi", "4"])
        .env("CHERNVAN_OUT_DIR", dir.path())
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0));
    let written = std::fs::read_to_string(dir.path().join("walls_rank_3_chi_4.txt")).unwrap();
    assert_eq!(written, stdout(&o));
}

#[test]
fn mu_override_breaks_the_c8_residual() {
    let mu = "xi^8 + 6*a*xi^6 + 9*a^2*xi^4 + 4*a^3*xi^2 + 27*b^2*xi^2";
    let o = run(&["verify", "c8", "--mu", mu]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let o = run(&["verify", "c8", "--mu", &mu.replace("27*b^2", "26*b^2")]);
    assert_eq!(o.status.code(), Some(1));
    let out = stdout(&o);
    assert!(
        out.contains("check: FAILED | 3*mu leaves the same residual"),
        "{out}"
    );
    assert!(out.contains("  diff: p:"), "{out}");
    assert_eq!(run(&["verify", "c8", "--mu", "eta"]).status.code(), Some(2));
}
