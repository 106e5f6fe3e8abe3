//! End-to-end tests of the command surface: verdicts, witnesses, exit codes,
//! batch mode and schema validity of every emitted record.

mod common;

use common::{run_one_validated, run_validated};
use serde_json::json;
use std::io::Write;

#[test]
fn stable_verdicts_and_exit_codes() {
    let (rec, code) = run_one_validated(&["stable", "exp(x^2)"]);
    assert_eq!(code, 0);
    assert_eq!(rec["verdict"], "not_stable");

    let (rec, code) = run_one_validated(&["stable", "x^3*exp(2*x)"]);
    assert_eq!(code, 0);
    assert_eq!(rec["verdict"], "stable");

    let (rec, code) = run_one_validated(&["stable", "log(x)/(x-1)"]);
    assert_eq!(code, 0);
    assert_eq!(rec["verdict"], "not_stable");

    // nested logs never enter the fragment: exit 1
    let (rec, code) = run_one_validated(&["stable", "log(log(x))"]);
    assert_eq!(code, 1);
    assert_eq!(rec["status"], "error");
    assert_eq!(rec["error"]["kind"], "out_of_fragment");

    // syntax errors: exit 2 with a position
    let (rec, code) = run_one_validated(&["stable", "x + "]);
    assert_eq!(code, 2);
    assert_eq!(rec["error"]["kind"], "syntax");

    // Eulerian derivation
    let (rec, code) = run_one_validated(&["stable", "--derivation", "euler", "x + 1/x"]);
    assert_eq!(code, 0);
    assert_eq!(rec["verdict"], "stable");
    let (rec, _) = run_one_validated(&["stable", "--derivation", "euler", "1 + x"]);
    assert_eq!(rec["verdict"], "not_stable");
    assert_eq!(rec["obstruction"]["kind"], "constant_term");

    // undecided corner of the fragment: high log powers need monomial
    // coefficients, and mixed log*exp is never decided
    let (rec, code) = run_one_validated(&["stable", "(x+1)*log(x)^2"]);
    assert_eq!(code, 1);
    assert_eq!(rec["verdict"], "out_of_fragment");
    let (rec, code) = run_one_validated(&["stable", "log(x)*exp(x)"]);
    assert_eq!(code, 1);
    assert_eq!(rec["verdict"], "out_of_fragment");
}

#[test]
fn witness_chains_are_emitted_and_verified() {
    let (rec, code) = run_one_validated(&["witness", "--depth", "4", "x*log(x)"]);
    assert_eq!(code, 0);
    assert_eq!(rec["verdict"], "stable");
    assert_eq!(rec["chain_verified"], true);
    assert_eq!(rec["witness_chain"].as_array().unwrap().len(), 4);

    // stable but with no exact chain: the record says so explicitly
    let (rec, code) = run_one_validated(&["witness", "1/(x-1)"]);
    assert_eq!(code, 0);
    assert_eq!(rec["verdict"], "stable");
    assert!(rec["witness_chain_unavailable"].is_string());

    let (rec, _) = run_one_validated(&[
        "witness",
        "--derivation",
        "euler",
        "--depth",
        "3",
        "x + 1/x",
    ]);
    assert_eq!(rec["chain_verified"], true);
}

#[test]
fn integrability_commands() {
    let (rec, _) = run_one_validated(&["integrable", "1/x^2"]);
    assert_eq!(rec["status"], "integrable");
    assert_eq!(rec["witness"], "-1/x");

    let (rec, _) = run_one_validated(&["integrable", "1/x"]);
    assert_eq!(rec["status"], "not_integrable");

    let (rec, _) = run_one_validated(&["lh", "1/x"]);
    assert_eq!(rec["status"], "of_form");
    assert_eq!(rec["c"], "1");

    let (rec, _) = run_one_validated(&["lh", "1/(x-1)"]);
    assert_eq!(rec["status"], "not_of_form");

    let (rec, _) = run_one_validated(&["dred", "(2*x)/(x^2+1)"]);
    assert_eq!(rec["status"], "not_reduced");
    let (rec, _) = run_one_validated(&["dred", "x/(x^2+1)"]);
    assert_eq!(rec["status"], "reduced");

    let (rec, _) = run_one_validated(&["moments", "-N", "5", "1/x^2"]);
    assert_eq!(rec["first_failing_index"], 1);
    let (rec, _) = run_one_validated(&["moments", "-N", "5", "x^3 + 2"]);
    assert!(rec["first_failing_index"].is_null());
}

#[test]
fn risch_and_skolem() {
    let (rec, code) = run_one_validated(&["risch", "--p", "x", "--a", "2*x", "--b", "1"]);
    assert_eq!(code, 0);
    assert_eq!(rec["status"], "solution");
    assert_eq!(rec["q"], "1/2");
    assert_eq!(rec["identity_checked"], true);

    let (rec, _) = run_one_validated(&["risch", "--p", "1", "--a", "2*x", "--b", "1"]);
    assert_eq!(rec["status"], "no_solution");

    // 1/x is not a rational derivative: precondition, exit 2
    let (rec, code) = run_one_validated(&["risch", "--p", "1", "--a", "1", "--b", "x"]);
    assert_eq!(code, 2);
    assert_eq!(rec["error"]["kind"], "precondition");

    let (rec, _) = run_one_validated(&["skolem", "--max", "6", "exp(x^2)"]);
    assert_eq!(rec["integrable_indices"], json!([1, 3, 5]));

    let (rec, _) = run_one_validated(&["skolem", "--max", "3", "exp(x)"]);
    assert_eq!(rec["integrable_indices"], json!([0, 1, 2, 3]));
}

#[test]
fn ore_calculator() {
    let (rec, _) = run_one_validated(&["ore", "mul", "D", "x"]);
    assert_eq!(rec["result"], "x*D + 1");

    let (rec, _) = run_one_validated(&["ore", "divmod", "D + x", "D"]);
    assert_eq!(rec["quotient"], "1");
    assert_eq!(rec["remainder"], "x");

    let (rec, _) = run_one_validated(&["ore", "gcrd", "D^2 - D", "D - 1"]);
    assert_eq!(rec["result"], "D - 1");

    let (rec, _) = run_one_validated(&["ore", "lclm", "D", "D - 1"]);
    assert_eq!(rec["result"], "D^2 - D");

    let (rec, _) = run_one_validated(&["ore", "apply", "x*D", "--to", "x^3"]);
    assert_eq!(rec["result"], "3*x^3");

    let (rec, _) = run_one_validated(&["ore", "mul", "S", "n"]);
    assert_eq!(rec["result"], "(n + 1)*S");

    let (_, code) = run_one_validated(&["ore", "mul", "D", "S"]);
    assert_eq!(code, 2);
}

#[test]
fn dfinite_commands() {
    let (rec, _) = run_one_validated(&["dfinite", "guess", "exp"]);
    assert_eq!(rec["status"], "found");
    assert_eq!(rec["annihilator"], "D - 1");

    let (rec, _) = run_one_validated(&["dfinite", "convert", "d2s", "D - 1"]);
    assert_eq!(rec["result"], "(n + 1)*S - 1");

    let (rec, _) = run_one_validated(&[
        "dfinite",
        "convert",
        "s2d",
        "(n+1)*S - 1",
        "--series",
        "exp",
    ]);
    assert_eq!(rec["result"], "D - 1");

    let (rec, _) = run_one_validated(&["dfinite", "certify", "exp"]);
    assert_eq!(rec["status"], "certified");
    assert_eq!(rec["m"], 1);
    assert_eq!(rec["stable_order"], 2);

    // explicit coefficients need --rec
    let (rec, code) = run_one_validated(&["dfinite", "certify", "1,1,1"]);
    assert_eq!(code, 2);
    assert_eq!(rec["error"]["kind"], "usage");

    let (rec, _) = run_one_validated(&[
        "dfinite",
        "guess",
        "--max-ord",
        "2",
        "--max-deg",
        "2",
        "poly:x^2",
    ]);
    assert_eq!(rec["annihilator"], "x*D - 2");
}

#[test]
fn dynsys_commands() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("sys.json");
    let mut f = std::fs::File::create(&path).unwrap();
    write!(
        f,
        "{}",
        json!({
            "elements": ["a", "b", "c"],
            "map": { "a": "b", "b": "a", "c": "a" }
        })
    )
    .unwrap();
    let path = path.to_str().unwrap();

    let (rec, code) = run_one_validated(&["dynsys", "analyze", path]);
    assert_eq!(code, 0);
    assert_eq!(rec["fix"], json!([]));
    assert_eq!(rec["per"], json!(["a", "b"]));
    assert_eq!(rec["stab"], json!(["a", "b"]));
    assert_eq!(rec["attrac"], json!(["a", "b"]));

    let (rec, _) = run_one_validated(&["dynsys", "check", path]);
    assert_eq!(rec["passes"], true);
    assert_eq!(rec["surjective"], false);

    let (rec, _) = run_one_validated(&["dynsys", "godelle", "-n", "3", "-m", "3"]);
    assert_eq!(rec["elements"], 10);
    assert_eq!(rec["attrac"], json!(["(-3,0)"]));
    assert_eq!(rec["stab"], rec["attrac"]);

    let (rec, code) = run_one_validated(&["dynsys", "analyze", "/nonexistent.json"]);
    assert_eq!(code, 2);
    assert_eq!(rec["error"]["kind"], "io");
}

#[test]
fn batch_runs_per_line_in_order() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("exprs.txt");
    std::fs::write(&path, "x^2\nexp(2*x)\nlog(x)/x\n").unwrap();
    let r = run_validated(&["batch", path.to_str().unwrap()]);
    assert_eq!(r.code, 0);
    assert_eq!(r.records.len(), 3);
    assert_eq!(r.records[0]["input"], "x^2");
    assert_eq!(r.records[2]["input"], "log(x)/x");
    for rec in &r.records {
        assert_eq!(rec["verdict"], "stable");
    }

    // one broken line still yields a record for it; process exit stays 0
    std::fs::write(&path, "x^2\nx +\nexp(x^2)\n").unwrap();
    let r = run_validated(&["batch", path.to_str().unwrap()]);
    assert_eq!(r.code, 0);
    assert_eq!(r.records.len(), 3);
    assert_eq!(r.records[1]["status"], "error");
    assert_eq!(r.records[2]["verdict"], "not_stable");

    // empty file: no records
    std::fs::write(&path, "").unwrap();
    let r = run_validated(&["batch", path.to_str().unwrap()]);
    assert_eq!(r.code, 0);
    assert!(r.records.is_empty());
}
