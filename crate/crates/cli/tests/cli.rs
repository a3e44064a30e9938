use qdc_cli::{run_command, EXIT_FAILED, EXIT_OK, EXIT_USAGE};
use serde_json::Value;

fn run(args: &[&str]) -> (i32, String) {
    run_command(args)
}

#[test]
fn normalize_quantum_plane() {
    assert_eq!(run(&["normalize", "--algebra", "plane-pq-d2", "y*x"]), (EXIT_OK, "(1/q)*x*y\n".to_string()));
}

#[test]
fn normalize_rightmost_agrees() {
    let a = run(&["normalize", "--algebra", "plane-pq-d2", "y*x*dx"]);
    let b = run(&["normalize", "--algebra", "plane-pq-d2", "--strategy", "rightmost", "y*x*dx"]);
    assert_eq!(a, b);
    assert_eq!(a.1, "(1/(q^3*p))*dx*x*y + ((-q*p + 1)/(q^2*p^2))*dy*x*x\n");
}

#[test]
fn normalize_json() {
    let (code, out) = run(&["normalize", "--algebra", "plane-pq-d2", "--json", "y*x"]);
    assert_eq!(code, EXIT_OK);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["normal_form"]["text"], "(1/q)*x*y");
    assert_eq!(v["normal_form"]["terms"]["terms"][0]["coeff"], "1/q");
}

#[test]
fn confluence_at_pq_j2() {
    let (code, out) = run(&["check", "confluence", "--algebra", "plane-pq-d3", "--subst", "p=j^2*q^-1"]);
    assert_eq!(code, EXIT_OK);
    assert!(out.starts_with("0 obstructions"), "{out}");
}

#[test]
fn generic_d3_plane_is_not_confluent() {
    let (code, out) = run(&["check", "confluence", "--algebra", "plane-pq-d3"]);
    assert_eq!(code, EXIT_FAILED);
    assert!(out.contains("x*dx*dy:"), "{out}");
}

#[test]
fn nilpotency_of_d2_superplane() {
    let (code, out) = run(&["check", "nilpotency", "--algebra", "splane-q-d2", "--max-len", "4", "--samples", "50"]);
    assert_eq!(code, EXIT_OK, "{out}");
}

#[test]
fn nilpotency_of_d3_superplane_at_q_j() {
    let (code, out) = run(&["check", "nilpotency", "--algebra", "splane-q-d3", "--subst", "q=j", "--max-len", "4"]);
    assert_eq!(code, EXIT_OK, "{out}");
}

#[test]
fn diff_twice() {
    let (code, out) = run(&["diff", "--algebra", "plane-pq-d3", "--times", "2", "x"]);
    assert_eq!((code, out.as_str()), (EXIT_OK, "d2x\n"));
    let (_, out) = run(&["diff", "--algebra", "plane-pq-d3", "--times", "3", "x"]);
    assert_eq!(out, "0\n");
}

#[test]
fn diff_leibniz() {
    let (_, out) = run(&["diff", "--algebra", "plane-pq-d2", "x*y"]);
    assert_eq!(out, "dx*y + (1/p)*dy*x\n");
}

#[test]
fn usage_errors() {
    assert_eq!(run(&["normalize", "--algebra", "plane-pq-d2", "x*w"]).0, EXIT_USAGE);
    assert_eq!(run(&["normalize", "--algebra", "bogus", "x"]).0, EXIT_USAGE);
    assert_eq!(run(&["normalize", "--algebra", "plane-pq-d2", "x*(y"]).0, EXIT_USAGE);
    assert_eq!(run(&["frobnicate"]).0, EXIT_USAGE);
    assert_eq!(run(&["diff", "--algebra", "gl-pq-2", "a"]).0, EXIT_USAGE);
    assert_eq!(run(&["limit", "--algebra", "gl-pq-2"]).0, EXIT_USAGE);
}

#[test]
fn pole_in_substitution_names_rule() {
    let (code, out) = run(&["normalize", "--algebra", "plane-pq-d3", "--subst", "p=-1/q", "x"]);
    assert_eq!(code, EXIT_USAGE);
    assert!(out.contains("x*dy"), "{out}");
}

#[test]
fn relations_and_covariance_pass() {
    for id in ["plane-pq-d2", "splane-pq-d2", "gl-q-11"] {
        let (code, out) = run(&["check", "relations", "--algebra", id]);
        assert_eq!(code, EXIT_OK, "{id}: {out}");
    }
    let (code, out) = run(&["check", "covariance", "--algebra", "splane-q-d3"]);
    assert_eq!(code, EXIT_OK, "{out}");
}

#[test]
fn limits() {
    for id in ["plane-pq-d2", "splane-pq-d2", "splane-pq-d3"] {
        let (code, out) = run(&["limit", "--algebra", id]);
        assert_eq!(code, EXIT_OK, "{out}");
        assert!(out.contains("equal"));
    }
}

#[test]
fn solve_reports_both_roots() {
    let (code, out) = run(&["solve", "--json"]);
    assert_eq!(code, EXIT_OK);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["generic"]["rank"], 15);
    assert_eq!(v["constrained"]["coefficients"]["C7"], "(q*p*C1 - 1)/(q*p + 1)");
    let roots = v["associativity"]["roots"].as_array().unwrap();
    assert_eq!(roots.len(), 2);
    assert!(roots.iter().any(|r| r["matches_displayed"] == true && r["value"] == "1/(q*p)"));
}

#[test]
fn presets_listing() {
    let (code, out) = run(&["presets", "--json"]);
    assert_eq!(code, EXIT_OK);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v.as_array().unwrap().len(), 10);
}

#[test]
fn help_is_not_an_error() {
    let (code, out) = run(&["--help"]);
    assert_eq!(code, EXIT_OK);
    assert!(out.contains("normalize"));
}
