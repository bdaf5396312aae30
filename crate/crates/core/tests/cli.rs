use std::path::PathBuf;
use std::process::Command;

use gbs::cli::{run, EXIT_DECIDED, EXIT_INPUT, EXIT_UNDETERMINED};

fn data(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "data", name].iter().collect();
    p.to_string_lossy().into_owned()
}

fn gbs(args: &[&str]) -> (i32, String, String) {
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let argv = std::iter::once("gbs").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

#[test]
fn classify_spec_a_ends_with_the_summary() {
    let (code, out, _) = gbs(&["classify", &data("specA.gog")]);
    assert_eq!(code, EXIT_DECIDED);
    assert!(
        out.trim_end()
            .ends_with("Whyte case: 2c; Haagerup: yes; weakly amenable: yes; Λ_cb = 1"),
        "{out}"
    );
}

#[test]
fn compare_and_compression() {
    let (code, out, _) = gbs(&["compare", &data("specA.gog"), &data("specB.gog")]);
    assert_eq!((code, out.lines().next()), (EXIT_DECIDED, Some("quasi-isometric")));
    let (code, out, _) = gbs(&["compression", &data("specB.gog"), "--p", "2"]);
    assert_eq!((code, out.lines().next()), (EXIT_DECIDED, Some("α₂ = 0")));
    let (code, out, _) = gbs(&["compression", &data("specA.gog"), "--p", "1.5"]);
    assert_eq!((code, out.lines().next()), (EXIT_DECIDED, Some("α_{3/2} = 2/3")));
}

#[test]
fn undetermined_answers_exit_2() {
    let (code, out, _) = gbs(&["compression", &data("specB.gog"), "--p", "3"]);
    assert_eq!(code, EXIT_UNDETERMINED, "{out}");
    let (code, _, _) = gbs(&["compare", &data("bs12.gog"), &data("bs12.gog")]);
    assert_eq!(code, EXIT_DECIDED);
}

#[test]
fn input_errors_exit_1() {
    let (code, _, err) = gbs(&["frobnicate"]);
    assert_eq!(code, EXIT_INPUT);
    assert!(err.contains("Usage"), "{err}");
    let (code, _, err) = gbs(&["classify", "/nonexistent.gog"]);
    assert_eq!(code, EXIT_INPUT);
    assert!(err.starts_with("error: "));
    let (code, _, _) = gbs(&["compare", &data("specA.gog"), &data("bs12.gog")]);
    assert_eq!(code, EXIT_INPUT);
    let (code, _, _) = gbs(&["compression", &data("specA.gog"), "--p", "1/2"]);
    assert_eq!(code, EXIT_INPUT);
    let (code, _, _) = gbs(&["distortion", &data("specA.gog"), "--element", "h", "--max-power", "4"]);
    assert_eq!(code, EXIT_INPUT);
}

#[test]
fn parse_errors_report_positions() {
    let dir = std::env::temp_dir().join(format!("gbs-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let bad = dir.join("bad.gog");
    std::fs::write(&bad, "rank 2\nvertex X\nedge h X -> X\n").unwrap();
    let (code, _, err) = gbs(&["validate", bad.to_str().unwrap()]);
    assert_eq!(code, EXIT_INPUT);
    assert!(err.contains("bad.gog:3:8: expected `:`"), "{err}");
    let empty = dir.join("empty.gog");
    std::fs::write(&empty, "").unwrap();
    let (_, _, err) = gbs(&["validate", empty.to_str().unwrap()]);
    assert!(err.contains("missing rank declaration"), "{err}");
    let invalid = dir.join("invalid.gog");
    std::fs::write(&invalid, "rank 1\nvertex X\nedge t: X -> Y alpha [[1]] omega [[2]]\n").unwrap();
    let (code, out, _) = gbs(&["validate", invalid.to_str().unwrap()]);
    assert_eq!(code, EXIT_INPUT);
    assert!(out.contains('Y'), "{out}");
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn json_reports_are_deterministic_and_complete() {
    for args in [
        vec!["classify", "specB.gog"],
        vec!["holonomy", "specA.gog"],
        vec!["compare", "specA.gog", "specB.gog"],
    ] {
        let mut argv: Vec<String> = args
            .iter()
            .map(|a| if a.ends_with(".gog") { data(a) } else { a.to_string() })
            .collect();
        argv.extend(["--format".into(), "json".into()]);
        let argv: Vec<&str> = argv.iter().map(String::as_str).collect();
        let (c1, o1, _) = gbs(&argv);
        let (c2, o2, _) = gbs(&argv);
        assert_eq!((c1, &o1), (c2, &o2));
        serde_json::from_str::<serde_json::Value>(&o1).unwrap();
    }
    let (_, out, _) = gbs(&["classify", &data("specB.gog"), "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    let tits = v["cv"]["evidence"]
        .as_array()
        .unwrap()
        .iter()
        .find(|e| e["kind"] == "tits")
        .unwrap();
    let cert = &tits["decision"]["certificate"];
    assert_eq!(cert["kind"], "free_pair");
    for key in [
        "g",
        "h",
        "g_attracting",
        "g_repelling",
        "h_attracting",
        "h_repelling",
        "witness",
    ] {
        assert!(!cert[key].is_null(), "missing {key}");
    }
    assert_eq!(v["whyte"]["whyte_case"], "2c");
}

#[test]
fn binary_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_gbs");
    let status = |args: &[&str]| Command::new(bin).args(args).output().unwrap();
    let o = status(&["presentation", &data("specA.gog")]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(
        String::from_utf8_lossy(&o.stdout).trim(),
        "⟨a, b, h, p | ab = ba, a^h = a^2, (b^2)^h = b, a^p = a, b^p = ab⟩"
    );
    assert_eq!(
        status(&["compression", &data("specB.gog"), "--p", "3"]).status.code(),
        Some(2)
    );
    assert_eq!(status(&[]).status.code(), Some(1));
}

#[test]
fn distortion_command_lists_rescaled_words() {
    let (code, out, _) = gbs(&[
        "distortion",
        &data("specA.gog"),
        "--element",
        "a",
        "--max-power",
        "1024",
    ]);
    assert_eq!(code, EXIT_DECIDED);
    assert!(out.contains("a^1024: length ≤ 20 via h^-8 a^4 h^8"), "{out}");
    assert!(out.contains("a^64: length ≤ 12 via h^-4 a^4 h^4; exact 12"), "{out}");
}
