use std::process::Command;

use proptest::prelude::*;
use serde_json::Value;
use sicfield::{constant, Constant};
use sicfield_cli::{eval_str, parse_expr, run_command, Ast, BinOp};

const CORPUS: [&str; 50] = [
    "u",
    "r",
    "x",
    "i",
    "tau",
    "sqrt2",
    "sqrt5",
    "isqrt_sqrt5p1",
    "u1",
    "u5",
    "u + 1/u",
    "u - 1/u",
    "(u - 1/u)^2",
    "3 - (u + 1/u)^2",
    "-1/2 * (u + 1/u) * (u - 1/u)^2",
    "1/(u - u)",
    "u^-1",
    "u^8 - 2*u^6 - 2*u^4 - 2*u^2 + 1",
    "-u",
    "--u",
    "-(u + r)",
    "-u^2",
    "(-u)^2",
    "1/2",
    "1/2^3",
    "3/4 * u",
    "u / 2",
    "u / 2 / 3",
    "u * 2 / 3",
    "2 * 3 * 4",
    "8 - 3 - 2",
    "8 - (3 - 2)",
    "(((u)))",
    "r * (1/r)",
    "tau^8",
    "i^2 + 1",
    "sqrt2 * sqrt2",
    "sqrt5^2 - 5",
    "(1 + sqrt5)/2",
    "(u + r) * (u - r)",
    "u1 * u2 - u3 / u4 + u5",
    "12345678901234567890 / 3",
    "0",
    "0/5",
    "x^4 - 6*x^2 + 4",
    "tau * tau^-1",
    "  u   +   r  ",
    "-(1/2)",
    "-1/2",
    "(u^2)^3",
];

fn binary() -> Command {
    Command::new(env!("CARGO_BIN_EXE_sicfield"))
}

#[test]
fn corpus_round_trips() {
    for src in CORPUS {
        let ast = parse_expr(src).unwrap_or_else(|e| panic!("{src}: {e}"));
        let printed = ast.to_string();
        assert_eq!(parse_expr(&printed).unwrap(), ast, "{src} -> {printed}");
    }
}

#[test]
fn corpus_values() {
    assert_eq!(eval_str("u + 1/u").unwrap(), constant("x").unwrap());
    assert_eq!(eval_str("3 - (u + 1/u)^2").unwrap(), constant("sqrt5").unwrap());
    assert_eq!(eval_str("-1/2 * (u + 1/u) * (u - 1/u)^2").unwrap(), constant("sqrt2").unwrap());
    assert_eq!(eval_str("u^8 - 2*u^6 - 2*u^4 - 2*u^2 + 1").unwrap(), eval_str("0").unwrap());
    assert!(eval_str("1/(u - u)").is_err());
    assert_eq!(eval_str("tau^8").unwrap(), eval_str("1").unwrap());
}

#[test]
fn minpoly_output() {
    let out = run_command(["minpoly", "u + 1/u"]);
    assert_eq!(out.code, 0);
    assert!(out.stdout.contains("t^4 - 6t^2 + 4"));
    let out = run_command(["minpoly", "-u"]);
    assert_eq!(out.code, 0);
    assert!(out.stdout.contains("t^8 - 2t^6 - 2t^4 - 2t^2 + 1"));
}

#[test]
fn discriminant_output() {
    let out = run_command(["discriminant", "--dim", "4"]);
    assert_eq!(out.code, 0);
    assert!(out.stdout.contains("D=5"));
}

fn reports(stdout: &str) -> Vec<Value> {
    let v: Value = serde_json::from_str(stdout).expect("single JSON document");
    v.as_array().expect("top-level array").clone()
}

#[test]
fn json_reports_have_required_fields() {
    for args in [vec!["verify-d4", "--json"], vec!["galois", "--json"], vec!["--json", "minpoly", "r"]] {
        let out = run_command(args.clone());
        assert_eq!(out.code, 0, "{args:?}");
        for r in reports(&out.stdout) {
            for key in ["check", "status", "details", "summary"] {
                assert!(r.get(key).is_some(), "{args:?}: missing {key}");
            }
            assert_eq!(r["status"], "pass");
        }
    }
}

#[test]
fn verify_d4_json_passes() {
    let out = run_command(["verify-d4", "--json"]);
    let rs = reports(&out.stdout);
    assert!(rs.len() >= 20);
    let overlap = rs.iter().find(|r| r["check"] == "overlap(1,1)").unwrap();
    assert_eq!(overlap["details"]["value"]["coords"][0], "1/5");
    assert_eq!(overlap["details"]["value"]["approx"]["re"].as_f64(), Some(0.2));
}

#[test]
fn exit_code_matrix() {
    let cases: [(&[&str], i32); 13] = [
        (&["verify-d4"], 0),
        (&["verify-d4", "--corrupt-phase", "1,2"], 1),
        (&["verify-d4", "--corrupt-phase", "0,0"], 2),
        (&["minpoly", "u ^"], 1),
        (&["minpoly", "1/(u - u)"], 1),
        (&["minpoly", "w"], 1),
        (&["discriminant", "--dim", "7"], 0),
        (&["discriminant", "--dim", "2"], 1),
        (&["discriminant"], 2),
        (&["frobnicate"], 2),
        (&["galois", "--bogus"], 2),
        (&["--precision", "quad", "units"], 2),
        (&["search", "--dim", "3", "--tol", "0"], 2),
    ];
    for (args, code) in cases {
        assert_eq!(run_command(args.iter().copied()).code, code, "{args:?}");
    }
}

#[test]
fn binary_exit_codes() {
    let ok = binary().args(["verify-d4", "--json"]).output().unwrap();
    assert_eq!(ok.status.code(), Some(0));
    let bad = binary().args(["verify-d4", "--corrupt-phase", "2,3"]).output().unwrap();
    assert_eq!(bad.status.code(), Some(1));
    let usage = binary().arg("nonsense").output().unwrap();
    assert_eq!(usage.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&usage.stderr).contains("Usage"));
}

#[test]
fn corrupted_phase_names_failing_overlaps() {
    let out = run_command(["verify-d4", "--json", "--corrupt-phase", "1,2"]);
    assert_eq!(out.code, 1);
    let rs = reports(&out.stdout);
    let sic = rs.iter().find(|r| r["check"] == "sic").unwrap();
    let failing = sic["details"]["failing_overlaps"].as_array().unwrap();
    assert!(failing.iter().any(|v| v == "(1,2)"));
    assert!(rs.iter().any(|r| r["check"] == "overlap(1,2)" && r["status"] == "fail"));
}

#[test]
fn config_file_supplies_defaults() {
    let path = std::env::temp_dir().join(format!("sicfield-config-{}.json", std::process::id()));
    std::fs::write(&path, r#"{"json": true, "dim": 2, "restarts": 4, "seed": 9, "precision": "extended"}"#).unwrap();
    let p = path.to_str().unwrap();
    let out = run_command(["--config", p, "search"]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    let rs = reports(&out.stdout);
    assert_eq!(rs[0]["details"]["dim"], 2);
    assert_eq!(rs[0]["details"]["restarts"], 4);
    let flag_wins = run_command(["--config", p, "discriminant", "--dim", "5"]);
    assert!(flag_wins.stdout.contains("\"squarefree\": 3"));

    std::fs::write(&path, r#"{"colour": "red"}"#).unwrap();
    assert_eq!(run_command(["--config", p, "galois"]).code, 2);
    std::fs::remove_file(&path).unwrap();
    assert_eq!(run_command(["--config", p, "galois"]).code, 2);
}

#[test]
fn warm_start_search_matches_exact_phases() {
    let out = run_command(["search", "--dim", "4", "--warm-start", "--json"]);
    assert_eq!(out.code, 0);
    let rs = reports(&out.stdout);
    assert!(rs.iter().any(|r| r["check"] == "search.phase_match" && r["status"] == "pass"));
    assert!(rs[0]["details"]["iterations"].as_u64().unwrap() <= 5);
}

#[test]
fn search_reports_are_deterministic() {
    let a = run_command(["search", "--dim", "3", "--restarts", "4", "--seed", "11", "--json"]);
    let b = run_command(["search", "--dim", "3", "--restarts", "4", "--seed", "11", "--json"]);
    assert_eq!(a, b);
}

fn arb_ast() -> impl Strategy<Value = Ast> {
    let names: Vec<Constant> = Constant::ALL.to_vec();
    let leaf = prop_oneof![
        (0u32..50, prop::option::of(1u32..9))
            .prop_map(|(n, d)| Ast::Literal { numer: n.into(), denom: d.map(Into::into) }),
        prop::sample::select(names).prop_map(Ast::Name),
    ];
    leaf.prop_recursive(4, 24, 2, |inner| {
        let op = prop::sample::select(vec![BinOp::Add, BinOp::Sub, BinOp::Mul, BinOp::Div]);
        prop_oneof![
            inner.clone().prop_map(|a| Ast::Neg(Box::new(a))),
            inner.clone().prop_map(|a| Ast::Paren(Box::new(a))),
            (inner.clone(), -3i64..4).prop_map(|(a, e)| Ast::Pow(Box::new(a), e)),
            (op, inner.clone(), inner).prop_map(|(o, a, b)| Ast::Binary(o, Box::new(a), Box::new(b))),
        ]
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    /// Printing is a fixed point after one parse, and never changes the value.
    #[test]
    fn printer_is_stable(ast in arb_ast()) {
        let printed = ast.to_string();
        let reparsed = parse_expr(&printed).unwrap();
        prop_assert_eq!(reparsed.to_string(), printed.clone());
        prop_assert_eq!(parse_expr(&reparsed.to_string()).unwrap(), reparsed);
    }
}
