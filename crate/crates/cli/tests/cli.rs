//! End-to-end tests of the `fbct` binary: output formats, path selection,
//! exit codes, determinism across thread counts.

use std::process::{Command, Output};

fn fbct(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fbct"))
        .args(args)
        .env_remove("SBOX_DEFAULT_THREADS")
        .output()
        .expect("binary runs")
}

fn stdout_json(out: &Output) -> serde_json::Value {
    assert!(out.status.success(), "stderr: {}", text(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn text(bytes: &[u8]) -> String {
    String::from_utf8_lossy(bytes).into_owned()
}

fn exit_code(out: &Output) -> i32 {
    out.status.code().expect("process exits normally")
}

#[test]
fn spectrum_n7_has_the_three_expected_values() {
    let out = fbct(&["spectrum", "--n", "7", "--function", "paper"]);
    let doc = stdout_json(&out);
    assert_eq!(doc["n"], 7);
    assert_eq!(doc["modulus"], "0x83");
    assert_eq!(doc["function"]["power"], 31);
    assert_eq!(doc["path"], "ratio-reduced");
    assert_eq!(
        doc["spectrum"],
        serde_json::json!([[0, 10668], [4, 5334], [128, 382]])
    );
}

#[test]
fn spectrum_n9_contains_eight_with_frequency_3066() {
    let out = fbct(&["spectrum", "--n", "9", "--function", "paper"]);
    let doc = stdout_json(&out);
    let spectrum = doc["spectrum"].as_array().unwrap();
    assert!(spectrum.contains(&serde_json::json!([8, 3066])));
}

#[test]
fn spectrum_of_apn_cube_has_all_nontrivial_mass_at_zero() {
    let out = fbct(&["spectrum", "--n", "5", "--function", "3"]);
    let doc = stdout_json(&out);
    assert_eq!(doc["spectrum"], serde_json::json!([[0, 930], [32, 94]]));
}

#[test]
fn spectrum_csv_format() {
    let out = fbct(&["spectrum", "--n", "7", "--function", "paper", "--output", "csv"]);
    assert_eq!(exit_code(&out), 0);
    assert_eq!(
        text(&out.stdout),
        "value,frequency\n0,10668\n4,5334\n128,382\n"
    );
}

#[test]
fn spectrum_is_byte_identical_across_thread_counts() {
    let reference = fbct(&["spectrum", "--n", "9", "--function", "paper", "--threads", "1"]);
    assert_eq!(exit_code(&reference), 0);
    for threads in ["4", "8"] {
        for format in ["json", "csv"] {
            let run = fbct(&[
                "spectrum", "--n", "9", "--function", "paper", "--threads", threads,
                "--output", format,
            ]);
            let base = fbct(&[
                "spectrum", "--n", "9", "--function", "paper", "--threads", "1",
                "--output", format,
            ]);
            assert_eq!(run.stdout, base.stdout, "threads={threads} format={format}");
        }
    }
}

#[test]
fn env_var_sets_the_default_thread_count() {
    let out = Command::new(env!("CARGO_BIN_EXE_fbct"))
        .args(["spectrum", "--n", "8", "--function", "paper"])
        .env("SBOX_DEFAULT_THREADS", "3")
        .output()
        .unwrap();
    let reference = fbct(&["spectrum", "--n", "8", "--function", "paper", "--threads", "1"]);
    assert_eq!(out.stdout, reference.stdout);

    let bad = Command::new(env!("CARGO_BIN_EXE_fbct"))
        .args(["spectrum", "--n", "8", "--function", "paper"])
        .env("SBOX_DEFAULT_THREADS", "zero")
        .output()
        .unwrap();
    assert_eq!(exit_code(&bad), 2);
}

#[test]
fn lookup_table_file_goes_through_the_brute_force_path() {
    // x^3 over GF(2^4), written as a lookup table file.
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("cube.tbl");
    let spec = fbct_core::FieldSpec::with_default_modulus(4).unwrap();
    let lines: Vec<String> = spec
        .elements()
        .map(|x| format!("0x{:X}", x.pow(3).bits()))
        .collect();
    std::fs::write(&path, lines.join("\n")).unwrap();

    let arg = format!("@{}", path.display());
    let from_file = fbct(&["spectrum", "--n", "4", "--function", &arg]);
    let doc = stdout_json(&from_file);
    assert_eq!(doc["path"], "brute-force");
    assert_eq!(doc["function"]["table"], 16);

    let from_power = stdout_json(&fbct(&["spectrum", "--n", "4", "--function", "3"]));
    assert_eq!(doc["spectrum"], from_power["spectrum"]);
}

#[test]
fn lookup_table_with_wrong_length_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("short.tbl");
    std::fs::write(&path, "0x0\n0x1\n0x2\n").unwrap();
    let arg = format!("@{}", path.display());
    let out = fbct(&["spectrum", "--n", "4", "--function", &arg]);
    assert_eq!(exit_code(&out), 2);
    assert!(text(&out.stderr).contains("16 entries"));
}

#[test]
fn table_function_above_brute_force_cap_is_a_capacity_refusal() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("id.tbl");
    let lines: Vec<String> = (0u32..1024).map(|x| format!("{x:X}")).collect();
    std::fs::write(&path, lines.join("\n")).unwrap();
    let arg = format!("@{}", path.display());
    let out = fbct(&["spectrum", "--n", "10", "--function", &arg]);
    assert_eq!(exit_code(&out), 3);
    assert!(text(&out.stderr).contains("ratio-reduced"));
}

#[test]
fn verify_passes_at_n7_and_n9() {
    let out7 = fbct(&["verify", "--n", "7"]);
    assert_eq!(exit_code(&out7), 0);
    let doc7 = stdout_json(&out7);
    assert_eq!(doc7["uniformity"], 4);
    assert_eq!(doc7["pass"], true);

    let out9 = fbct(&["verify", "--n", "9"]);
    assert_eq!(exit_code(&out9), 0);
    let doc9 = stdout_json(&out9);
    assert_eq!(doc9["uniformity"], 8);
    assert_eq!(doc9["kloosterman"], -4);
}

#[test]
fn verify_below_hypothesis_is_tagged_and_informative() {
    let out = fbct(&["verify", "--n", "4"]);
    let code = exit_code(&out);
    assert!(code == 0 || code == 1, "informative run, got {code}");
    let doc: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(doc["outside_hypothesis"], true);
}

#[test]
fn verify_rejects_other_functions_and_csv() {
    let out = fbct(&["verify", "--n", "7", "--function", "3"]);
    assert_eq!(exit_code(&out), 2);
    let out = fbct(&["verify", "--n", "7", "--output", "csv"]);
    assert_eq!(exit_code(&out), 2);
    let out = fbct(&["verify", "--n", "2"]);
    assert_eq!(exit_code(&out), 2);
}

#[test]
fn kloosterman_small_and_carlitz_only() {
    let doc = stdout_json(&fbct(&["kloosterman", "--n", "3"]));
    assert_eq!(doc["direct"], -4);
    assert_eq!(doc["carlitz"], -4);
    assert_eq!(doc["agree"], true);

    let doc = stdout_json(&fbct(&["kloosterman", "--n", "2"]));
    assert_eq!(doc["direct"], 4);
    assert_eq!(doc["carlitz"], 4);
    assert_eq!(doc["agree"], true);

    let doc = stdout_json(&fbct(&["kloosterman", "--n", "40"]));
    assert_eq!(doc["direct"], serde_json::Value::Null);
    assert_eq!(doc["multiple_of_4"], true);
    assert_eq!(doc["in_weil_range"], true);

    let out = fbct(&["kloosterman", "--n", "65"]);
    assert_eq!(exit_code(&out), 2);
}

#[test]
#[allow(clippy::needless_range_loop)]
fn tables_fbct_row_zero_is_all_order_and_matrix_is_symmetric() {
    let out = fbct(&["tables", "--n", "3", "--function", "paper", "--table", "fbct"]);
    let doc = stdout_json(&out);
    assert_eq!(doc["table"], "fbct");
    let rows = doc["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 8);
    for cell in rows[0].as_array().unwrap() {
        assert_eq!(cell, 8);
    }
    for a in 0..8 {
        for b in 0..8 {
            assert_eq!(rows[a][b], rows[b][a]);
        }
    }
}

#[test]
fn tables_ddt_row_zero_and_csv() {
    let out = fbct(&["tables", "--n", "3", "--function", "6", "--table", "ddt", "--output", "csv"]);
    assert_eq!(exit_code(&out), 0);
    let body = text(&out.stdout);
    let first = body.lines().next().unwrap();
    assert_eq!(first, "8,0,0,0,0,0,0,0");
    assert_eq!(body.lines().count(), 8);
}

#[test]
fn tables_above_cap_is_a_capacity_refusal() {
    let out = fbct(&["tables", "--n", "9", "--function", "3", "--table", "ddt"]);
    assert_eq!(exit_code(&out), 3);
}

#[test]
fn bad_modulus_is_a_usage_error_with_a_reason() {
    let out = fbct(&["spectrum", "--n", "3", "--function", "3", "--modulus", "0x9"]);
    assert_eq!(exit_code(&out), 2);
    assert!(text(&out.stderr).contains("reducible"));
    let out = fbct(&["spectrum", "--n", "3", "--function", "3", "--modulus", "0xZZ"]);
    assert_eq!(exit_code(&out), 2);
}

#[test]
fn paper_keyword_requires_n_at_least_3() {
    let out = fbct(&["spectrum", "--n", "2", "--function", "paper"]);
    assert_eq!(exit_code(&out), 2);
    assert!(text(&out.stderr).contains("n >= 3"));
}

#[test]
fn unknown_flags_and_bad_functions_exit_2() {
    let out = fbct(&["spectrum", "--n", "4"]);
    assert_eq!(exit_code(&out), 2, "--function is required");
    let out = fbct(&["spectrum", "--n", "4", "--function", "x^3"]);
    assert_eq!(exit_code(&out), 2);
    let out = fbct(&["spectrum", "--n", "4", "--function", "3", "--bogus"]);
    assert_eq!(exit_code(&out), 2);
}

#[test]
fn out_flag_writes_the_same_bytes_to_a_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("spec.json");
    let to_stdout = fbct(&["spectrum", "--n", "6", "--function", "paper"]);
    let to_file = fbct(&[
        "spectrum", "--n", "6", "--function", "paper",
        "--out", path.to_str().unwrap(),
    ]);
    assert_eq!(exit_code(&to_file), 0);
    assert!(to_file.stdout.is_empty());
    assert_eq!(std::fs::read(&path).unwrap(), to_stdout.stdout);
}
