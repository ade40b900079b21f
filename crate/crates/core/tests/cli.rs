use std::process::{Command, Output};

fn kg(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_kg")).args(args).output().expect("kg runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf-8 output")
}

fn csv_rows(text: &str) -> Vec<Vec<String>> {
    text.lines().map(|l| l.split(',').map(str::to_owned).collect()).collect()
}

#[test]
fn spectrum_of_free_square_well() {
    let out = kg(&["spectrum", "--tau", "0"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(!text.contains('\r'));
    let rows = csv_rows(&text);
    assert_eq!(rows[0], ["index", "eigenvalue_re", "eigenvalue_im", "sign_type", "pencil_residual"]);
    let values: Vec<f64> = rows[1..].iter().map(|r| r[1].parse().unwrap()).collect();
    let s3 = 3f64.sqrt();
    for (got, want) in values.iter().zip([-s3, -1.0, 1.0, s3]) {
        assert!((got - want).abs() < 1e-12, "{got} vs {want}");
    }
    for r in &rows[1..] {
        assert!(r[4].parse::<f64>().unwrap() < 1e-10);
    }
    assert_eq!(rows[1][3], "negative");
    assert_eq!(rows[4][3], "positive");
}

#[test]
fn spectrum_beyond_critical_coupling_is_complex() {
    let out = kg(&["spectrum", "--tau", "2.2"]);
    assert!(out.status.success());
    let rows = csv_rows(&stdout(&out));
    let complex = rows[1..].iter().filter(|r| r[2].parse::<f64>().unwrap().abs() > 1e-3).count();
    assert_eq!(complex, 2);
}

#[test]
fn output_is_deterministic_and_can_go_to_a_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("verify.csv");
    let args = ["verify", "--tau", "1", "--eta", "0.1", "--out", path.to_str().unwrap()];
    assert!(kg(&args).status.success());
    let first = std::fs::read(&path).unwrap();
    assert!(kg(&args).status.success());
    assert_eq!(first, std::fs::read(&path).unwrap());
    let text = String::from_utf8(first).unwrap();
    assert!(text.starts_with("record,name,index,eigenvalue,"));
    let summary = text.lines().find(|l| l.starts_with("summary,")).unwrap();
    let value: f64 = summary.split(',').nth(6).unwrap().parse().unwrap();
    assert!((value - 1.3409e-1).abs() < 1e-5, "{value}");
}

#[test]
fn seeded_random_perturbations_are_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let model = dir.path().join("model.json");
    std::fs::write(
        &model,
        r#"{"u_squared": [[3, 1, 0], [1, 3, 1], [0, 1, 3]], "v": [[0.5, 0, 0], [0, -0.2, 0], [0, 0, 0.1]]}"#,
    )
    .unwrap();
    let m = model.to_str().unwrap();
    let a = kg(&["verify", "--model", m, "--eta", "0.05", "--seed", "7"]);
    let b = kg(&["verify", "--model", m, "--eta", "0.05", "--seed", "7"]);
    let c = kg(&["verify", "--model", m, "--eta", "0.05", "--seed", "8"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    assert_ne!(a.stdout, c.stdout);
}

#[test]
fn verify_with_optimized_shift_uses_the_natural_shift_for_the_square_well() {
    let natural = kg(&["verify", "--tau", "1.7", "--eta", "0.001"]);
    let optimized = kg(&["verify", "--tau", "1.7", "--eta", "0.001", "--optimize-shift"]);
    assert_eq!(natural.stdout, optimized.stdout);
}

#[test]
fn bounds_report_lists_every_constant() {
    let out = kg(&["bounds", "--tau", "1", "--eta", "0.1", "--format", "report"]);
    assert!(out.status.success());
    let text = stdout(&out);
    for name in ["kappa_general", "kappa_split", "kappa_block", "kappa_exact", "gap_alpha", "improved", "uniform"] {
        assert!(text.contains(name), "{name} missing");
    }
    assert!(text.contains("gap_alpha: 5.0000000000000000e-1"));
}

#[test]
fn zero_perturbation_keeps_the_gap() {
    let out = kg(&["bounds", "--tau", "1"]);
    let text = stdout(&out);
    let field = |name: &str| -> Vec<String> {
        text.lines()
            .find(|l| l.starts_with(&format!("{name},")))
            .unwrap()
            .split(',')
            .map(str::to_owned)
            .collect()
    };
    assert_eq!(field("kappa_general")[2].parse::<f64>().unwrap(), 0.0);
    let gap = field("central_gap");
    let predicted = field("predicted_general");
    assert_eq!(gap[1..3], predicted[1..3]);
}

#[test]
fn sweep_locates_the_critical_coupling() {
    let out = kg(&["sweep", "--tau", "1", "--sweep-range", "0:2", "--steps", "21"]);
    assert!(out.status.success());
    let text = stdout(&out);
    let critical = text.lines().find(|l| l.starts_with("critical,")).unwrap();
    let c: f64 = critical.split(',').nth(1).unwrap().parse().unwrap();
    assert!((c - 2.0).abs() < 1e-6, "{c}");
    assert_eq!(text.lines().filter(|l| l.starts_with("eigen,")).count(), 21 * 4);
}

#[test]
fn reproduce_example2_prints_the_tables() {
    let out = kg(&["reproduce", "example2", "--format", "report"]);
    assert!(out.status.success());
    let text = stdout(&out);
    for cell in ["5.0037e-04", "1.3409e-01", "1.4355e+00", "6.6667e-03", "2e+00"] {
        assert!(text.contains(cell), "{cell} missing");
    }
}

#[test]
fn exit_codes() {
    assert_eq!(kg(&["--help"]).status.code(), Some(0));
    assert_eq!(kg(&["--version"]).status.code(), Some(0));
    assert_eq!(kg(&["spectrum", "--no-such-flag"]).status.code(), Some(64));
    assert_eq!(kg(&["spectrum", "--shift", "1", "--paper-shift", "--tau", "1"]).status.code(), Some(64));
    assert_eq!(kg(&["spectrum"]).status.code(), Some(3));
    assert_eq!(kg(&["spectrum", "--tau", "1", "--alpha", "0.2"]).status.code(), Some(3));
    assert_eq!(kg(&["sweep", "--tau", "1"]).status.code(), Some(3));
    assert_eq!(kg(&["sweep", "--tau", "1", "--sweep-range", "0:1", "--steps", "1"]).status.code(), Some(3));
    assert_eq!(kg(&["bounds", "--tau", "2.4"]).status.code(), Some(4));
    assert_eq!(kg(&["spectrum", "--model", "/nonexistent/model.json"]).status.code(), Some(5));

    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{\n  \"u_squared\": [[1, 0], [0, 1]],\n  \"v\": [[0, 0] [0, 0]]\n}\n").unwrap();
    let out = kg(&["spectrum", "--model", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 3"));
    let indefinite = dir.path().join("indefinite.json");
    std::fs::write(&indefinite, r#"{"u_squared": [[1, 2], [2, 1]], "v": [[0, 0], [0, 0]]}"#).unwrap();
    assert_eq!(kg(&["spectrum", "--model", indefinite.to_str().unwrap()]).status.code(), Some(3));
}
