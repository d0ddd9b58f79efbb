//! End-to-end tests of the `tropgrass` binary: exit codes, report
//! contents, golden values, and file round-trips.

use std::fs;
use std::path::{Path, PathBuf};

use assert_cmd::Command;
use predicates::prelude::*;
use serde_json::Value;

use tropgrass_core::exact::rat;
use tropgrass_core::fixtures::example_5tree;
use tropgrass_core::metrics::DissimilarityMatrix;
use tropgrass_core::trees::{enumerate_shapes, parse_newick, realize_shape, EquidistantTree};
use tropgrass_core::verify::generic_heights;

fn bin() -> Command {
    Command::cargo_bin("tropgrass").expect("binary builds")
}

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("fixtures")
        .join(name)
}

fn tmp(name: &str) -> PathBuf {
    Path::new(env!("CARGO_TARGET_TMPDIR")).join(name)
}

fn stdout_json(output: &std::process::Output) -> Value {
    serde_json::from_slice(&output.stdout).expect("stdout is one JSON report")
}

#[test]
fn gen_tree_is_deterministic_and_round_trips() {
    let out = tmp("gen_round_trip.nwk");
    let run = |seed: &str, path: &Path| {
        let output = bin()
            .args(["gen-tree", "--n", "6", "--seed", seed, "--output"])
            .arg(path)
            .output()
            .unwrap();
        assert!(output.status.success());
        stdout_json(&output)
    };

    let first = run("1", &out);
    let again = run("1", &out);
    assert_eq!(first["newick"], again["newick"]);
    assert_eq!(first["config"]["seed"], 1);

    let parsed = parse_newick(&fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(parsed.n_leaves(), 6);
    assert_eq!(Value::from(parsed.digest()), first["digest"]);

    let other = run("2", &out);
    assert_ne!(first["digest"], other["digest"]);
}

#[test]
fn gen_tree_equidistant_output_is_equidistant() {
    let out = tmp("gen_equidistant.nwk");
    bin()
        .args(["gen-tree", "--n", "7", "--seed", "5", "--equidistant", "--output"])
        .arg(&out)
        .assert()
        .success();
    let tree = parse_newick(&fs::read_to_string(&out).unwrap()).unwrap();
    EquidistantTree::from_weighted(tree).expect("generated tree is equidistant");
}

#[test]
fn gen_tree_rejects_too_few_leaves() {
    bin()
        .args(["gen-tree", "--n", "2", "--seed", "1", "--output"])
        .arg(tmp("gen_small.nwk"))
        .assert()
        .code(2)
        .stderr(predicate::str::contains("3"));
}

#[test]
fn phi_worked_example_goldens() {
    let output = bin()
        .args(["phi", "--tree"])
        .arg(fixture("example5.nwk"))
        .args(["-m", "5"])
        .output()
        .unwrap();
    assert!(output.status.success());
    let report = stdout_json(&output);
    assert_eq!(report["values"]["{1,2,3,4,5}"], "37");

    let output = bin()
        .args(["phi", "--tree"])
        .arg(fixture("example5.nwk"))
        .args(["-m", "4"])
        .output()
        .unwrap();
    let report = stdout_json(&output);
    assert_eq!(report["values"]["{1,2,3,4}"], "31");
}

#[test]
fn phi_m2_matches_the_distance_matrix() {
    let tree_file = tmp("phi_m2.nwk");
    bin()
        .args(["gen-tree", "--n", "5", "--seed", "11", "--output"])
        .arg(&tree_file)
        .assert()
        .success();
    let output = bin()
        .args(["phi", "--tree"])
        .arg(&tree_file)
        .args(["-m", "2"])
        .output()
        .unwrap();
    let report = stdout_json(&output);

    let tree = parse_newick(&fs::read_to_string(&tree_file).unwrap()).unwrap();
    let d = DissimilarityMatrix::from_tree(&tree).unwrap();
    for i in 1..=5usize {
        for j in (i + 1)..=5 {
            let key = format!("{{{i},{j}}}");
            assert_eq!(report["values"][&key], d.get(i, j).to_string());
        }
    }
}

#[test]
fn phi_rejects_out_of_range_m() {
    for m in ["1", "6"] {
        bin()
            .args(["phi", "--tree"])
            .arg(fixture("example5.nwk"))
            .args(["-m", m])
            .assert()
            .code(2)
            .stderr(predicate::str::contains("2 <= m <= n"));
    }
}

#[test]
fn phi_parse_error_reports_line_and_column() {
    let bad = tmp("phi_bad.nwk");
    fs::write(&bad, "[&R]((1:1,\n2:x):2,3:3);\n").unwrap();
    bin()
        .args(["phi", "--tree"])
        .arg(&bad)
        .args(["-m", "2"])
        .assert()
        .code(2)
        .stderr(predicate::str::contains(":2:3:"));
}

#[test]
fn check_four_point_passes_on_a_tree_matrix() {
    let csv = tmp("check_tree.csv");
    let d = DissimilarityMatrix::from_tree(example_5tree().tree()).unwrap();
    fs::write(&csv, d.to_csv()).unwrap();
    bin()
        .args(["check", "--matrix"])
        .arg(&csv)
        .arg("--four-point")
        .assert()
        .success()
        .stdout(predicate::str::contains("\"pass\": true"));
}

#[test]
fn check_four_point_reports_a_witness_on_violation() {
    let csv = tmp("check_perturbed.csv");
    let d = DissimilarityMatrix::from_tree(example_5tree().tree()).unwrap();
    let delta = d.max_anchor_distance() + rat(1);
    let perturbed = d.with_entry(1, 2, d.get(1, 2) + delta);
    fs::write(&csv, perturbed.to_csv()).unwrap();

    let output = bin()
        .args(["check", "--matrix"])
        .arg(&csv)
        .arg("--four-point")
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(1));
    let report = stdout_json(&output);
    assert_eq!(report["pass"], false);
    let witness = &report["four_point"];
    assert_eq!(witness["quadruple"].as_array().unwrap().len(), 4);
    assert_eq!(witness["sums"].as_array().unwrap().len(), 3);
}

#[test]
fn check_rejects_malformed_input() {
    let ragged = tmp("check_ragged.csv");
    fs::write(&ragged, "0,1,2\n1,0\n2,1,0\n").unwrap();
    bin()
        .args(["check", "--matrix"])
        .arg(&ragged)
        .arg("--four-point")
        .assert()
        .code(2);

    let asymmetric = tmp("check_asym.csv");
    fs::write(&asymmetric, "0,1,2\n3,0,1\n2,1,0\n").unwrap();
    bin()
        .args(["check", "--matrix"])
        .arg(&asymmetric)
        .arg("--four-point")
        .assert()
        .code(2);
}

#[test]
fn check_requires_exactly_one_mode() {
    bin()
        .args(["check", "--matrix"])
        .arg(fixture("example5.nwk"))
        .assert()
        .code(2);
}

#[test]
fn check_ultrametric_distinguishes_equidistant_matrices() {
    let good = tmp("ultra_good.csv");
    let d = DissimilarityMatrix::from_tree(example_5tree().tree()).unwrap();
    fs::write(&good, d.to_csv()).unwrap();
    bin()
        .args(["check", "--matrix"])
        .arg(&good)
        .arg("--ultrametric")
        .assert()
        .success();

    let bad = tmp("ultra_bad.csv");
    fs::write(&bad, "0,2,8\n2,0,4\n8,4,0\n").unwrap();
    let output = bin()
        .args(["check", "--matrix"])
        .arg(&bad)
        .arg("--ultrametric")
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(1));
    let report = stdout_json(&output);
    assert_eq!(report["ultrametric"]["triple"].as_array().unwrap().len(), 3);
}

#[test]
fn check_pluecker_reads_back_phi_output() {
    let tree_file = tmp("pluecker_tree.nwk");
    let vector_file = tmp("pluecker_v4.json");
    bin()
        .args(["gen-tree", "--n", "6", "--seed", "21", "--output"])
        .arg(&tree_file)
        .assert()
        .success();
    bin()
        .args(["phi", "--tree"])
        .arg(&tree_file)
        .args(["-m", "4", "--output"])
        .arg(&vector_file)
        .assert()
        .success();

    // The written vector is taken as-is for the matching m...
    bin()
        .args(["check", "--matrix"])
        .arg(&vector_file)
        .args(["--pluecker", "4"])
        .assert()
        .success();

    // ...and a mismatched m (other than pairwise input) is an input error.
    bin()
        .args(["check", "--matrix"])
        .arg(&vector_file)
        .args(["--pluecker", "5"])
        .assert()
        .code(2);
}

#[test]
fn check_pluecker_lifts_pairwise_input() {
    let csv = tmp("pluecker_lift.csv");
    let d = DissimilarityMatrix::from_tree(example_5tree().tree()).unwrap();
    fs::write(&csv, d.to_csv()).unwrap();
    for m in ["2", "3", "4"] {
        bin()
            .args(["check", "--matrix"])
            .arg(&csv)
            .args(["--pluecker", m])
            .assert()
            .success();
    }
}

#[test]
fn verify_example_m5_prints_the_golden_pair() {
    let output = bin().args(["verify", "--example-m5"]).output().unwrap();
    assert!(output.status.success());
    let report = stdout_json(&output);
    assert_eq!(report["degree"], "37");
    assert_eq!(report["leading"], "3344");
    assert_eq!(report["pass"], true);
}

#[test]
fn verify_remark_n_confirms_the_gap() {
    let output = bin().args(["verify", "--remark-n"]).output().unwrap();
    assert!(output.status.success());
    let report = stdout_json(&output);
    assert_eq!(report["record"]["degree_without_ones"], "21");
    assert_eq!(report["record"]["degree_with_ones"], "18");
    assert_eq!(report["record"]["steiner_weight"], "18");
    assert_eq!(report["record"]["counterexample_confirmed"], true);
}

#[test]
fn verify_conj3_5_symbolic_prints_term_counts() {
    let output = bin()
        .args(["verify", "--conj3", "5", "--symbolic"])
        .output()
        .unwrap();
    assert!(output.status.success());
    let report = stdout_json(&output);
    assert_eq!(report["term_counts"], serde_json::json!([272, 144, 144]));
    assert_eq!(report["shape_count"], 3);
    assert_eq!(report["all_pass"], true);
    for entry in report["shapes"].as_array().unwrap() {
        assert_eq!(entry["run"]["homogeneous_degree"], 5);
        assert_eq!(entry["heights_agree"], true);
    }
}

#[test]
fn verify_conj3_4_modes_both_certify() {
    let output = bin()
        .args(["verify", "--conj3", "4", "--symbolic"])
        .output()
        .unwrap();
    assert!(output.status.success());
    assert_eq!(stdout_json(&output)["shape_count"], 2);

    let output = bin()
        .args(["verify", "--conj3", "4", "--seed", "9", "--draws", "3"])
        .output()
        .unwrap();
    assert!(output.status.success());
    let report = stdout_json(&output);
    assert_eq!(report["runs"].as_array().unwrap().len(), 6);
    assert_eq!(report["config"]["seed"], 9);
}

#[test]
fn verify_thm5_certifies_the_example_fixture() {
    let output = bin()
        .args(["verify", "--thm5"])
        .arg(fixture("example5.nwk"))
        .args(["--seed", "7"])
        .output()
        .unwrap();
    assert!(output.status.success());
    let report = stdout_json(&output);
    assert_eq!(report["config"]["seed"], 7);
    assert_eq!(report["report"]["pass"], true);
    for stage in ["shifted", "rescaled", "valuation"] {
        assert_eq!(
            report["report"][stage]["minors"].as_array().unwrap().len(),
            5
        );
    }
}

#[test]
fn verify_formulas_reports_the_matched_readings() {
    let output = bin().args(["verify", "--formulas"]).output().unwrap();
    assert!(output.status.success());
    let report = stdout_json(&output);
    let checks = report["checks"].as_array().unwrap();
    assert_eq!(checks.len(), 3);
    assert!(checks.iter().all(|c| c["formula_matches"] == true));
    let type_i = checks
        .iter()
        .find(|c| c["subtree_type"] == "I")
        .expect("type I check present");
    assert!(type_i["reading"]
        .as_str()
        .unwrap()
        .contains("b(e'_u)"));
}

#[test]
fn verify_requires_exactly_one_pipeline() {
    bin().arg("verify").assert().code(2);
    bin()
        .args(["verify", "--symbolic"])
        .assert()
        .code(2);
}

#[test]
fn fixtures_match_their_canonical_trees() {
    let example = parse_newick(&fs::read_to_string(fixture("example5.nwk")).unwrap()).unwrap();
    assert_eq!(example.digest(), example_5tree().tree().digest());

    let shapes = enumerate_shapes(5).unwrap();
    let heights = generic_heights(4, 2);
    for (shape, name) in shapes
        .iter()
        .zip(["m5_caterpillar.nwk", "m5_balanced.nwk", "m5_mixed.nwk"])
    {
        let expected = realize_shape(shape, &heights).unwrap();
        let parsed = parse_newick(&fs::read_to_string(fixture(name)).unwrap()).unwrap();
        assert_eq!(
            parsed.digest(),
            expected.tree().digest(),
            "fixture {name} must realize shape {}",
            shape.encode()
        );
    }
}

#[test]
fn help_documents_the_thread_count_variable() {
    bin()
        .args(["--help"])
        .assert()
        .success()
        .stdout(predicate::str::contains("RAYON_NUM_THREADS"));
}
