//! End-to-end behaviour of the `agt` commands.

use serde_json::Value;

use super::{main_with_args, Outcome, EXIT_MISMATCH, EXIT_OK, EXIT_USER};

fn agt(args: &[&str]) -> Outcome {
    main_with_args(std::iter::once("agt").chain(args.iter().copied()))
}

fn agt_json(args: &[&str]) -> Value {
    let mut all = vec!["--json"];
    all.extend_from_slice(args);
    let out = agt(&all);
    assert!(out.stderr.is_empty(), "{}", out.stderr);
    serde_json::from_str(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", out.stdout))
}

#[test]
fn card_reports_the_profinite_weight() {
    let out = agt(&[
        "card",
        "Z(2)^(aleph0)",
        "--topology",
        "gamma",
        "--invariant",
        "w",
    ]);
    assert_eq!((out.stdout.as_str(), out.code), ("2^aleph0\n", EXIT_OK));
}

#[test]
fn card_json_has_the_documented_fields() {
    let v = agt_json(&["card", "Z(8)^(c)", "--topology", "bohr", "--invariant", "d"]);
    let keys: Vec<&str> = v.as_object().unwrap().keys().map(String::as_str).collect();
    assert_eq!(
        keys,
        ["basis", "group", "invariant", "mode", "topology", "value"]
    );
    assert_eq!(v["value"], "2^aleph0");
    assert_eq!(v["mode"], "zfc");
    assert_eq!(v["topology"], "bohr");
}

#[test]
fn gch_mode_is_echoed() {
    let v = agt_json(&[
        "--mode",
        "gch",
        "card",
        "Z",
        "--topology",
        "nu_p:3",
        "--invariant",
        "chi",
    ]);
    assert_eq!(v["mode"], "gch");
    assert_eq!(v["value"], "aleph0");
}

#[test]
fn equalizer_verdicts() {
    assert_eq!(agt(&["equalizer", "gamma", "bohr", "Z"]).stdout, "false\n");
    assert_eq!(
        agt(&["equalizer", "gamma", "bohr", "Z(4)^(c)"]).stdout,
        "true\n"
    );
    let open = agt(&["equalizer", "gbound", "rho", "Z"]);
    assert_eq!(open.code, EXIT_OK);
    assert!(open.stdout.starts_with("unknown"));
    let v = agt_json(&["equalizer", "gbound", "rho", "Z"]);
    assert_eq!(v["verdict"], "unknown");
}

#[test]
fn invariants_json() {
    let v = agt_json(&["invariants", "Z + Z(6) + Q"]);
    assert_eq!(v["group"], "Z + Z(2) + Z(3) + Q");
    assert_eq!(v["rank0"], "2");
    assert_eq!(v["ulm"], "Q");
    assert_eq!(v["exponent"], Value::Null);
    assert_eq!(v["quotients"]["2"], "Z(2)^2");
    assert_eq!(v["csize"], "aleph0");
}

#[test]
fn classify_single_and_full() {
    assert_eq!(
        agt(&["classify", "Z(3^inf)", "--class", "narrow"]).stdout,
        "true\n"
    );
    assert_eq!(
        agt(&["classify", "T(2)", "--class", "countable"]).stdout,
        "false\n"
    );
    let v = agt_json(&["classify", "J(3)"]);
    assert_eq!(v["classes"]["p_divisible:3"], "false");
    assert_eq!(v["classes"]["residually_finite"], "true");
    assert_eq!(v["hausdorff"]["gamma_p:3"], "true");
}

#[test]
fn user_errors_exit_one() {
    for args in [
        &["invariants", "Z(4^2)"][..],
        &["classify", "Z", "--class", "shiny"],
        &["card", "Z", "--topology", "sorgenfrey", "--invariant", "w"],
        &["card", "Z", "--topology", "discrete", "--invariant", "w"],
        &["card", "Z", "--topology", "gamma", "--invariant", "size"],
        &["finite", "subgroups", "100,200"],
        &["fg", "enclose", "Z^2", "[[1,0],[0,1]]"],
        &["fg", "enclose", "Q", "[[1]]"],
        &["verify", "nonsense"],
        &["no-such-command"],
    ] {
        let out = agt(args);
        assert_eq!(out.code, EXIT_USER, "{args:?}");
        assert!(out.stdout.is_empty(), "{args:?}");
        assert!(!out.stderr.is_empty(), "{args:?}");
    }
    let v = agt_json(&["invariants", "Z("]);
    assert_eq!(v["kind"], "user");
}

#[test]
fn finite_subgroups_lists_the_lattice() {
    let v = agt_json(&["finite", "subgroups", "2,2"]);
    assert_eq!(v["count"], 5);
    assert_eq!(v["subgroups"][0]["elements"], serde_json::json!([[0, 0]]));
    let v = agt_json(&["finite", "subgroups", "2", "4", "8"]);
    assert_eq!(v["count"], 81);
    assert!(v["subgroups"][0].get("elements").is_none());
}

#[test]
fn finite_verify_passes() {
    let out = agt(&["finite", "verify", "[2, 4, 3]"]);
    assert_eq!(out.code, EXIT_OK, "{}", out.stdout);
    assert!(!out.stdout.contains("FAIL"));
}

#[test]
fn fg_commands() {
    assert_eq!(agt(&["fg", "count", "2", "6"]).stdout, "12\n");
    let v = agt_json(&["fg", "count", "3", "2", "--list"]);
    assert_eq!(v["count"], 7);
    assert_eq!(v["subgroups"].as_array().unwrap().len(), 7);
    let v = agt_json(&["fg", "enclose", "Z^2", "[[2,0],[0,3]]"]);
    assert_eq!(v["index"], "6");
    assert_eq!(v["closed"], true);
    assert_eq!(v["enclosing_index"], "2");
    let v = agt_json(&["fg", "enclose", "Z + Z(4)", "[[0,2]]"]);
    assert_eq!(v["index"], "infinite");
    assert_eq!(v["enclosing_index"], "4");
    assert!(agt(&["fg", "count", "4", "720", "--budget", "10"]).code == EXIT_USER);
}

#[test]
fn verify_suites_pass_and_are_deterministic() {
    let out = agt(&["verify", "finite-lattice", "--cap", "60"]);
    assert_eq!(out.code, EXIT_OK, "{}", out.stdout);
    for suite in ["cardinal", "fg-closure", "classify", "dichotomy"] {
        let a = agt(&["--seed", "9", "--cap", "200", "verify", suite]);
        let b = agt(&["--seed", "9", "--cap", "200", "verify", suite]);
        assert_eq!(a.code, EXIT_OK, "{}", a.stdout);
        assert_eq!(a, b);
    }
    for suite in ["fg-zeta", "formulas"] {
        let out = agt(&["verify", suite]);
        assert_eq!(out.code, EXIT_OK, "{}", out.stdout);
    }
    let v = agt_json(&["verify", "cardinal", "--cap", "50"]);
    assert_eq!(v["suites"][0]["cases"], 50);
    assert_eq!(v["suites"][0]["passed"], true);
}

#[test]
fn help_exits_zero() {
    let out = agt(&["--help"]);
    assert_eq!(out.code, EXIT_OK);
    assert!(out.stdout.contains("verify"));
}

#[test]
fn mismatch_exit_code_is_distinct() {
    assert_ne!(EXIT_MISMATCH, EXIT_USER);
    assert_ne!(EXIT_MISMATCH, EXIT_OK);
}
