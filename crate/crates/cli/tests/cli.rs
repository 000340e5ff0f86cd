use std::path::PathBuf;
use std::process::{Command, Output};

use idrt_core::checker::SourceReport;
use idrt_core::reduction::{parse_dump, GraphDump};
use idrt_oracle::{Property, SuiteReport};

fn example(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("examples").join(name).display().to_string()
}

fn idrt(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_idrt")).args(args).env_remove("IDRT_FUEL").output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn scratch(name: &str, text: &str) -> String {
    let dir = std::env::temp_dir().join(format!("idrt-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.display().to_string()
}

#[test]
fn nat_vect_checks_and_prints_kinds() {
    let o = idrt(&["check", &example("nat_vect.idrt")]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let out = stdout(&o);
    assert!(out.contains("accepted : RType[n,v]"), "{out}");
    assert!(out.contains("accepted : El(Vect([p].n))"), "{out}");
    assert!(!out.contains("rejected"));
}

#[test]
fn dup_label_is_rejected_citing_side_condition() {
    let o = idrt(&["check", &example("dup_label.idrt")]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("l ∉ L"));
    assert!(stderr(&o).contains("l ∉ L"));
}

#[test]
fn output_is_byte_identical_across_runs() {
    for args in [
        vec!["check", "--trace"],
        vec!["check", "--json"],
    ] {
        let mut a = args.clone();
        let file = example("nat_vect.idrt");
        a.push(&file);
        assert_eq!(idrt(&a).stdout, idrt(&a).stdout);
    }
}

#[test]
fn check_json_round_trips() {
    let o = idrt(&["check", "--json", &example("nat_vect.idrt")]);
    let text = stdout(&o);
    let report: SourceReport = serde_json::from_str(&text).unwrap();
    assert!(report.accepted());
    assert_eq!(report.outcomes.len(), 13);
    assert_eq!(serde_json::to_string_pretty(&report).unwrap() + "\n", text);

    let o = idrt(&["check", "--json", "--trace", &example("dup_label.idrt")]);
    let report: SourceReport = serde_json::from_str(&stdout(&o)).unwrap();
    assert!(!report.accepted());
    assert!(!report.outcomes[0].report.traces.is_empty());
}

#[test]
fn trace_names_evaluator_rules() {
    let o = idrt(&["whnf", "--trace", "--context", "T:Type, c:El(T)", "([x:El(T)]x)(c)"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.starts_with("c\n  : El(T)\n"), "{out}");
    assert!(out.contains("[BETA]"), "{out}");
}

#[test]
fn graph_dumps_agree() {
    let term = "([x:El(T)]x)(([y:El(T)]y)(c))";
    let text = stdout(&idrt(&["graph", term]));
    let json: GraphDump = serde_json::from_str(&stdout(&idrt(&["graph", "--json", term]))).unwrap();
    assert_eq!(parse_dump(&text).unwrap(), json);
    assert_eq!(json.nodes.len(), 3);
    assert!(!json.truncated);
}

#[test]
fn omega_graph_never_closes_and_omega_is_rejected() {
    let omega = "([x:El(T)]x(x))([x:El(T)]x(x))";
    let o = idrt(&["graph", "--json", "--fuel", "16", omega]);
    let dump: GraphDump = serde_json::from_str(&stdout(&o)).unwrap();
    assert!(dump.truncated || dump.edges.iter().any(|(i, _, j)| i == j));
    assert_eq!(idrt(&["normalize", "--context", "T:Type", omega]).status.code(), Some(1));
}

#[test]
fn fuel_comes_from_the_environment() {
    let o = Command::new(env!("CARGO_BIN_EXE_idrt"))
        .args(["check", &example("nat_vect.idrt")])
        .env("IDRT_FUEL", "3")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("fuel"));
    // The flag wins over the environment.
    let o = Command::new(env!("CARGO_BIN_EXE_idrt"))
        .args(["check", "--fuel", "100000", &example("nat_vect.idrt")])
        .env("IDRT_FUEL", "3")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn derive_checks_scripts_under_both_variants() {
    for variant in ["full", "minus"] {
        let o = idrt(&["derive", "--variant", variant, &example("const.deriv")]);
        assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    }
    let o = idrt(&["derive", "--json", &example("const.deriv")]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["valid"], true);
    assert_eq!(v["conclusion"], "T:Type, c:El(T) |- c : El(T)");

    let forged = std::fs::read_to_string(example("const.deriv")).unwrap().replace("c : El(T)\"\n", "c : Type\"\n");
    let o = idrt(&["derive", &scratch("forged.deriv", &forged)]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("invalid derivation"));
}

#[test]
fn parse_and_usage_errors_exit_two() {
    let bad = scratch("bad.idrt", "T : Type;\ncheck <l : T : RType;\n");
    let o = idrt(&["check", &bad]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("bad.idrt:2:"), "{}", stderr(&o));
    assert_eq!(idrt(&["check", "--no-such-flag", &bad]).status.code(), Some(2));
    assert_eq!(idrt(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(idrt(&["props", "NoSuchProperty"]).status.code(), Some(2));
    assert_eq!(idrt(&["whnf", "(("]).status.code(), Some(2));
    assert_eq!(idrt(&["check", "/no/such/file.idrt"]).status.code(), Some(2));
}

#[test]
fn props_json_round_trips() {
    let o = idrt(&["props", "Determinacy", "StrongNormalization", "--size", "4", "--json"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let report: SuiteReport = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(report.config.max_term_size, 4);
    let names: Vec<Property> = report.reports.iter().map(|r| r.property).collect();
    assert_eq!(names, [Property::Determinacy, Property::StrongNormalization]);
    assert!(report.reports.iter().all(|r| r.instances_checked > 0));
}
