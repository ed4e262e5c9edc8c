use std::path::PathBuf;
use std::process::Command;

fn fixture(rel: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(rel).display().to_string()
}

fn run(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_teamlogic")).args(args).output().unwrap();
    (
        out.status.code().unwrap(),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

const CASE: &str = "lax-vs-strict-disjunction";

fn case_args<'a>(model: &'a str, team: &'a str) -> Vec<&'a str> {
    vec!["--model", model, "--team", team]
}

#[test]
fn check_lax_and_strict() {
    let (model, team, formula) =
        (fixture(&format!("{CASE}/model.json")), fixture(&format!("{CASE}/team.json")), fixture(&format!("{CASE}/formula.txt")));
    let at = format!("@{formula}");
    let mut args = vec!["check"];
    args.extend(case_args(&model, &team));
    args.push(&at);
    assert_eq!(run(&args), (0, "sat (lax)\n".into(), String::new()));
    args.extend(["--mode", "strict"]);
    let (code, out, _) = run(&args);
    assert_eq!((code, out.as_str()), (1, "unsat (strict)\n"));
}

#[test]
fn check_json_report() {
    let (model, team) = (fixture(&format!("{CASE}/model.json")), fixture(&format!("{CASE}/team.json")));
    let mut args = vec!["--json", "check"];
    args.extend(case_args(&model, &team));
    args.push("incl(x ; y) \\/ incl(y ; z)");
    let (code, out, _) = run(&args);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["verdict"], "sat");
    assert_eq!(v["rows"], 3);
}

#[test]
fn check_sentences_and_usage_errors() {
    let model = fixture(&format!("{CASE}/model.json"));
    assert_eq!(run(&["check", "--model", &model, "exists x . forall y . incl(y ; x)"]).0, 0);
    assert_eq!(run(&["check", "--model", &model, "exists x . forall y . x = y"]).0, 1);
    // A free variable with no team to supply it.
    let (code, _, err) = run(&["check", "--model", &model, "incl(x ; y)"]);
    assert_eq!(code, 2);
    assert!(err.contains("free variable"), "{err}");
    assert_eq!(run(&["check", "--model", "/nonexistent.json", "x = x"]).0, 2);
    assert_eq!(run(&["check", "--model", &model, "incl(x ;"]).0, 2);
    assert_eq!(run(&["frobnicate"]).0, 2);
}

#[test]
fn game_strategies() {
    let (model, team) = (fixture(&format!("{CASE}/model.json")), fixture(&format!("{CASE}/team.json")));
    let f = "incl(x ; y) \\/ incl(y ; z)";
    let mut args = vec!["game"];
    args.extend(case_args(&model, &team));
    args.push(f);
    let (code, out, _) = run(&args);
    assert_eq!(code, 0);
    assert!(out.starts_with("strategy (nondeterministic"), "{out}");
    // The middle row must be sent both ways.
    assert!(out.lines().any(|l| l.contains(" ; ")), "{out}");
    args.insert(1, "--deterministic");
    assert_eq!(run(&args), (1, "none\n".into(), String::new()));
}

#[test]
fn game_needs_compile_for_dependence() {
    let (model, team) = (fixture(&format!("{CASE}/model.json")), fixture(&format!("{CASE}/team.json")));
    let mut args = vec!["game"];
    args.extend(case_args(&model, &team));
    args.push("dep(x, y)");
    let (code, _, err) = run(&args);
    assert_eq!(code, 2);
    assert!(err.contains("--compile"), "{err}");
    args.insert(1, "--compile");
    assert_eq!(run(&args).0, 0);
    args.extend(["--arena-cap", "5"]);
    assert_eq!(run(&args).0, 3);
}

#[test]
fn translate_rules() {
    let t = |rule: &str, input: &str| run(&["translate", "--rule", rule, input]);
    assert_eq!(t("dep2exc", "dep(x, y)"), (0, "forall _v0 . (_v0 = y \\/ excl(x, _v0 ; x, y))\n".into(), String::new()));
    assert_eq!(t("equi2inc", "equi(x ; y)"), (0, "incl(x ; y) /\\ incl(y ; x)\n".into(), String::new()));
    // The long names work too.
    assert_eq!(t("equi-to-inc", "equi(x ; y)").0, 0);
    // Not applicable, unknown rule.
    assert_eq!(t("dep2exc", "incl(x ; y)").0, 2);
    assert_eq!(t("nope", "x = y").0, 2);
    let (code, out, _) = run(&["translate", "--rule", "compile", "--target", "incl,excl", "dep(x, y) /\\ equi(x ; y)"]);
    assert_eq!(code, 0);
    assert!(!out.contains("dep(") && !out.contains("equi("), "{out}");
    assert_eq!(run(&["translate", "--rule", "compile", "x = y"]).0, 2);
}

#[test]
fn translate_sentences_and_normal_forms() {
    let (code, out, _) =
        run(&["translate", "--rule", "tc", "--xs", "x", "--ys", "y", "--from", "a", "--to", "b", "E(x, y)"]);
    assert_eq!(code, 0);
    assert!(out.contains("incl(a ; ") && out.contains("~E("), "{out}");
    assert_eq!(run(&["translate", "--rule", "tc", "--xs", "x", "E(x, y)"]).0, 2);
    let (code, out, _) = run(&["translate", "--rule", "ie2eso", "--vars", "x,y", "incl(x ; y)"]);
    assert_eq!(code, 0);
    assert!(!out.trim().is_empty());
    let snf = format!("@{}", fixture("skolem/equal-values.snf"));
    let (code, out, _) = run(&["translate", "--rule", "snf2ie", "--vars", "v", &snf]);
    assert_eq!(code, 0);
    assert!(out.contains("incl(_v0 ; v)"), "{out}");
    let (code, out, _) = run(&["translate", "--rule", "snf2eso", &snf]);
    assert_eq!(code, 0);
    assert!(out.contains("f1(x) = f2(x)"), "{out}");
    let (code, out, _) = run(&["translate", "--rule", "const-nf", "dep(x) /\\ x = y"]);
    assert_eq!(code, 0, "{out}");
}

#[test]
fn equivalence() {
    let (code, out, _) = run(&["equiv", "incl(x ; y)", "incl(y ; x)"]);
    assert_eq!(code, 1);
    assert!(out.contains(r#"team: {"vars":["x","y"],"rows":[["0","0"],["0","1"]]}"#), "{out}");
    let (code, out, _) = run(&["equiv", "--max-rows", "4", "equi(x ; y)", "incl(x ; y) /\\ incl(y ; x)"]);
    assert_eq!(code, 0);
    assert!(out.starts_with("equivalent"), "{out}");
    let a = run(&["--json", "equiv", "--max-rows", "4", "dep(x, y)", "incl(x ; y)"]);
    let b = run(&["--json", "--threads", "4", "equiv", "--max-rows", "4", "dep(x, y)", "incl(x ; y)"]);
    assert_eq!(a, b);
    assert_eq!(run(&["equiv", "--domains", "1..2", "x = x", "x = x"]).0, 2);
    assert_eq!(run(&["--allow-unit-domain", "equiv", "--domains", "1..2", "x = x", "x = x"]).0, 0);
    assert_eq!(run(&["--budget", "3", "equiv", "forall z . exists w . (incl(z ; w) \\/ x = y)", "x = x"]).0, 3);
}

#[test]
fn derivations() {
    let (code, out, _) = run(&["derive", "--premise", "incl(x ; y)", "--premise", "incl(y ; z)", "incl(x ; z)"]);
    assert_eq!(code, 0);
    assert_eq!(out, "incl(x ; z)  [I3]\n  incl(x ; y)  [premise]\n  incl(y ; z)  [premise]\n");
    let (code, out, _) = run(&["derive", "-p", "incl(x ; y)", "incl(y ; x)"]);
    assert_eq!(code, 1);
    assert!(out.starts_with("not derivable") && out.contains("counterexample: x,y"), "{out}");
    let (code, _, err) = run(&["derive", "-p", "fd(x -> y)", "incl(y ; x)"]);
    assert_eq!(code, 2);
    assert!(err.contains("undecidable"), "{err}");
    let (code, _, _) = run(&["derive", "--system", "inc", "-p", "excl(x ; y)", "excl(y ; x)"]);
    assert_eq!(code, 2);
    let (code, out, _) = run(&["--json", "derive", "-p", "excl(x ; y)", "excl(y ; x)"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["verdict"], "derived");
}

#[test]
fn database_checks() {
    let csv = fixture("dbdeps/fd-violation.csv");
    let (code, out, _) = run(&["dbcheck", "--relation", &csv, "fd(A -> B)"]);
    assert_eq!((code, out.as_str()), (1, "violated: fd(A -> B)\n  0,1\n  0,2\n"));
    assert_eq!(run(&["dbcheck", "--relation", &csv, "incl(A ; A)", "fd(A, B -> A)"]).0, 0);
    assert_eq!(run(&["dbcheck", "--relation", &csv, "fd(C -> A)"]).0, 2);
    let family = fixture("dbdeps/family.csv");
    let (code, out, _) = run(&[
        "dbcheck",
        "--relation",
        &family,
        "fd(Person -> Date_of_birth)",
        "incl(Father ; Person)",
        "excl(Father ; Mother)",
    ]);
    assert_eq!(code, 0, "{out}");
    assert_eq!(out.lines().filter(|l| l.starts_with("holds")).count(), 3);
}
