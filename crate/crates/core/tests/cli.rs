use std::process::Command;

fn hoptree(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_hoptree")).args(args).output().unwrap();
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8_lossy(&out.stdout).into_owned(),
        String::from_utf8_lossy(&out.stderr).into_owned(),
    )
}

#[test]
fn predict_prints_sequence() {
    let (code, out, _) = hoptree(&["predict", "--n", "1000", "--k", "2"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["integer_levels"], serde_json::json!([1, 100, 899]));
    assert!((v["f_cost"].as_f64().unwrap() - 15.0).abs() < 1e-9);
}

#[test]
fn greedy_and_mst_write_tree_files() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("t.txt");
    let p = path.to_str().unwrap();
    let (code, out, _) = hoptree(&["greedy", "--n", "300", "--diam", "5", "--seed", "4", "--out", p]);
    assert_eq!(code, 0, "{out}");
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text.starts_with("root-edge "));
    let t = hoptree::RootedTree::from_text(&text).unwrap();
    assert!(t.diameter() <= 5);
    let (code, _, _) = hoptree(&["mst", "--n", "50", "--out", p]);
    assert_eq!(code, 0);
    assert!(std::fs::read_to_string(&path).unwrap().starts_with("root 0"));
}

#[test]
fn exact_and_lowerbound_on_instance_file() {
    let dir = tempfile::tempdir().unwrap();
    let inst = dir.path().join("i.txt");
    std::fs::write(&inst, "4 4\n0 1 2 3\n0.1 0.5 0.9\n0.2 0.8\n0.3\n").unwrap();
    let tree = dir.path().join("t.txt");
    let (code, out, err) = hoptree(&[
        "exact", "--instance", inst.to_str().unwrap(), "--depth", "2", "--out", tree.to_str().unwrap(),
    ]);
    assert_eq!(code, 0, "{err}");
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert!((v["weight"].as_f64().unwrap() - 0.9).abs() < 1e-12);
    let (code, out, _) = hoptree(&[
        "lowerbound", "--instance", inst.to_str().unwrap(), "--tree", tree.to_str().unwrap(),
    ]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert!(v["bound"].as_f64().unwrap() <= 0.9 + 1e-12);
}

#[test]
fn experiment_csv_is_reproducible() {
    let args = ["experiment", "--mode", "greedy-depth", "--n", "500", "--k", "2", "--trials", "3", "--seed", "9"];
    let (c1, a, _) = hoptree(&args);
    let (c2, b, _) = hoptree(&args);
    assert_eq!((c1, c2), (0, 0));
    assert_eq!(a, b);
    assert!(a.starts_with("trial,seed,mode,n,m,k,weight,predicted,ratio,depth,diameter,heavy_edges,elapsed_s"));
    assert_eq!(hoptree::experiments::from_csv(&a).unwrap().len(), 3);
}

#[test]
fn experiment_json_echoes_config() {
    let (code, out, _) = hoptree(&[
        "experiment", "--mode", "slice-splice", "--n", "400", "--k", "7", "--delta-levels", "4",
        "--epsilon", "0.3", "--trials", "2", "--format", "json",
    ]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["config"]["epsilon"], serde_json::json!(0.3));
    assert_eq!(v["records"].as_array().unwrap().len(), 2);
    assert!(v["records"][0]["extras"]["splice_weight"].is_number());
}

#[test]
fn wbp_and_splice_run() {
    let (code, out, _) = hoptree(&["wbp", "--b", "2", "--p", "3"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert!((v["exact_mean"].as_f64().unwrap() - 7.0 / 6.0).abs() < 1e-15);
    let (code, _, _) = hoptree(&["splice", "--n", "500", "--delta-levels", "4"]);
    assert_eq!(code, 0);
}

#[test]
fn config_errors_exit_one() {
    let (code, _, err) = hoptree(&["experiment", "--mode", "greedy-depth", "--n", "10", "--m", "20", "--k", "2"]);
    assert_eq!(code, 1);
    assert!(err.contains("m = 20 exceeds n = 10"));
    assert_eq!(hoptree(&["experiment", "--mode", "nope", "--n", "10"]).0, 1);
    assert_eq!(hoptree(&["greedy", "--n", "10"]).0, 1);
    assert_eq!(hoptree(&["frobnicate"]).0, 1);
}

#[test]
fn failing_acceptance_exits_two() {
    let (code, out, _) = hoptree(&["accept", "10"]);
    assert_eq!(code, 2);
    assert!(out.contains("[FAIL] criterion 10"));
    let (code, out, _) = hoptree(&["accept", "7"]);
    assert_eq!(code, 0);
    assert!(out.contains("[PASS] criterion  7"));
}
