use finsurg::cli::run;

fn call(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("finsurg").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

#[test]
fn dedekind() {
    assert_eq!(call(&["dedekind", "1", "4"]), (0, "1/8\n".into(), String::new()));
    assert_eq!(call(&["dedekind", "-1", "4"]).1, "-1/8\n");
    let (code, _, err) = call(&["dedekind", "2", "4"]);
    assert_eq!(code, 1);
    assert!(err.contains("not coprime"), "{err}");
}

#[test]
fn realize_lens() {
    let (code, out, _) = call(&["realize", "--lens", "5/4", "--slope", "5/1"]);
    assert_eq!(code, 0);
    assert!(out.starts_with("1 solution(s) for L(5,4) at slope 5\n  t - 1 + t^-1 "), "{out}");

    let (code, out, _) = call(&["--json", "realize", "--lens", "5/4", "--slope", "5"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    let sols = v["solutions"].as_array().unwrap();
    assert_eq!(sols.len(), 1);
    assert_eq!(sols[0]["alexander"], "t - 1 + t^-1");
    assert_eq!(sols[0]["torsion"], serde_json::json!([1]));
}

#[test]
fn realize_filling() {
    let (code, out, _) = call(&["realize", "--filling", "-T(17/2)", "--slope", "17"]);
    assert_eq!(code, 0);
    assert!(out.contains("(g=5, det=1, d2=24)"), "{out}");
    let (code, _, err) = call(&["realize", "--filling", "T(17/2)", "--slope", "19"]);
    assert_eq!(code, 2);
    assert!(err.contains("differs"), "{err}");
}

#[test]
fn correction_terms() {
    assert_eq!(call(&["d-lens", "2/1"]).1, "[1/4, -1/4]\n");
    let (code, out, _) = call(&["--json", "d-lens", "5/4"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["d"].as_array().unwrap().len(), 5);
    let (code, out, _) = call(&["d-surgery", "--knot", "T(3,2)", "--slope", "5"]);
    assert_eq!(code, 0);
    assert_eq!(out, call(&["d-surgery", "--alexander", "-1,1", "--slope", "5/1"]).1);
    assert_eq!(out, call(&["d-filling", "T(5)"]).1);
    let neg = call(&["d-filling", "-T(5)"]).1;
    assert_ne!(neg, out);
}

#[test]
fn slope_below_bound_warns() {
    let (code, _, err) = call(&["d-surgery", "--knot", "T(5,2)", "--slope", "2"]);
    assert_eq!(code, 0);
    assert!(err.contains("warning"), "{err}");
}

#[test]
fn casson_walker() {
    assert_eq!(call(&["lambda-surgery", "--ddelta", "2", "--slope", "4"]).1, "3/8\n");
    assert_eq!(call(&["lambda-surgery", "--knot", "T(3,2)", "--slope", "-4"]).1, "-3/8\n");
    assert_eq!(call(&["lambda-prism", "3", "1"]).1, "-3/8\n");
    assert_eq!(call(&["lambda-prism", "3", "-1"]).1, "3/8\n");
    assert_eq!(call(&["lambda-prism", "6", "4"]).0, 1);
}

#[test]
fn usage_errors() {
    assert_eq!(call(&["frobnicate"]).0, 2);
    assert_eq!(call(&["d-lens", "5/x"]).0, 2);
    assert_eq!(call(&["realize", "--slope", "5"]).0, 2);
    assert_eq!(call(&["d-surgery", "--knot", "K_3", "--slope", "5"]).0, 2);
    let (code, out, _) = call(&["realize", "--help"]);
    assert_eq!(code, 0);
    assert!(out.contains("p/q") && out.contains("-T(a/b)"), "{out}");
}

#[test]
fn tables_validate() {
    let (code, out, _) = call(&["--threads", "2", "tables-validate", "--table", "O"]);
    assert_eq!(code, 0, "{out}");
    assert!(out.ends_with("19 row(s), 0 failed\n"), "{out}");
}

#[test]
fn tables_from_directory() {
    let dir = std::env::temp_dir().join(format!("finsurg-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    std::fs::write(
        dir.join("bad.csv"),
        "table,slope,filling,knot,genus,det,ddelta\nT,27,T(27/4),[13 2;3 2],8,13,52\n",
    )
    .unwrap();
    let (code, out, _) = call(&["--tables", dir.to_str().unwrap(), "tables-validate"]);
    assert_eq!(code, 1);
    assert!(out.contains("FAIL T 27"), "{out}");
    std::fs::write(dir.join("bad.csv"), "table,slope\nT,27\n").unwrap();
    let (code, _, err) = call(&["--tables", dir.to_str().unwrap(), "tables-validate"]);
    assert_eq!(code, 1);
    assert!(err.contains("line 1"), "{err}");
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn campaign_output_is_reproducible() {
    let args = ["--json", "--threads", "1", "campaign", "consecutive-lens", "--pmax", "31"];
    let (code, out, _) = call(&args);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    let ps: Vec<i64> = v["hits"].as_array().unwrap().iter().map(|h| h["p"].as_i64().unwrap()).collect();
    assert_eq!(ps, [18, 30, 31]);

    let text = ["--threads", "1", "campaign", "dtype-neighbors"];
    assert_eq!(call(&text).1, call(&["--threads", "4", "campaign", "dtype-neighbors"]).1);
    assert_eq!(call(&["campaign", "prism-det-bound", "--mmax", "0"]).0, 2);
}
