use std::process::Command;

fn winter(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_winter"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &std::process::Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

#[test]
fn spectrum_example_lists_thirty_levels() {
    let out = winter(&["spectrum", "--M", "10", "--g", "0.1", "--kmax", "3"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("# schema_version=1 table=spectrum"));
    assert_eq!(
        lines.next(),
        Some("s,n,l,kind,g,k,dk_dg,A,delta,scheme,status")
    );
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 30);
    assert_eq!(
        rows.iter().filter(|r| r.contains(",exceptional,")).count(),
        3
    );
    // momenta ascend
    let k: Vec<f64> = rows
        .iter()
        .map(|r| r.split(',').nth(5).unwrap().parse().unwrap())
        .collect();
    assert!(k.windows(2).all(|w| w[1] >= w[0]));
}

#[test]
fn exit_codes() {
    assert_eq!(winter(&["--help"]).status.code(), Some(0));
    assert_eq!(winter(&["--version"]).status.code(), Some(0));
    // configuration errors
    assert_eq!(
        winter(&["spectrum", "--g", "0.1", "--kmax", "1"])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(
        winter(&["spectrum", "--N", "3", "--M", "4", "--g", "1"])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(
        winter(&["spectrum", "--N", "9", "--g=-1", "--kmax", "1"])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(winter(&["figure", "pnothing"]).status.code(), Some(1));
    assert_eq!(winter(&["nonsense"]).status.code(), Some(1));
    // a coupling grid too coarse for the second derivative step
    let out = winter(&[
        "scan",
        "--N",
        "9",
        "--s",
        "3",
        "--gmin",
        "1e-9",
        "--gmax",
        "1e-8",
        "--gpoints",
        "3",
    ]);
    assert_eq!(out.status.code(), Some(2));
    let text = stdout(&out);
    assert!(text.contains("step_underflow"), "{text}");
}

#[test]
fn repeated_runs_are_byte_identical() {
    let args = ["figure", "pordresum"];
    let a = winter(&args);
    let b = winter(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn json_document_replays_to_the_same_run() {
    let dir = tempfile::tempdir().unwrap();
    let first = dir.path().join("first.json");
    let second = dir.path().join("second.json");
    let first_s = first.to_str().unwrap();
    let out = winter(&[
        "figure",
        "presum",
        "--n",
        "2",
        "--gpoints",
        "50",
        "--format",
        "json",
        "--out",
        first_s,
    ]);
    assert_eq!(out.status.code(), Some(0));
    let doc: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&first).unwrap()).unwrap();
    assert_eq!(doc["schema_version"], "1");
    assert_eq!(doc["table"], "perturbation");
    assert_eq!(doc["config"]["preset"], "presum");
    assert!(doc["rows"].as_array().unwrap().len() > 50);

    let out = winter(&["replay", first_s, "--out", second.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let a = std::fs::read_to_string(&first).unwrap();
    let b = std::fs::read_to_string(&second).unwrap();
    // the echoed output path differs; everything else is identical
    assert_eq!(
        a.replace(first_s, ""),
        b.replace(second.to_str().unwrap(), "")
    );
}

#[test]
fn doublets_command() {
    let out = winter(&[
        "doublets",
        "--N",
        "199",
        "--n",
        "1",
        "--jmax",
        "3",
        "--gmin",
        "2e-3",
        "--gmax",
        "0.025",
        "--gpoints",
        "600",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert_eq!(
        text.lines().nth(1),
        Some("j,s_lower,s_upper,g_min,spacing_min,g_pred,relative_offset,status")
    );
    assert_eq!(text.lines().count(), 2 + 4);
}

#[test]
fn kernel_table_and_eigenfunctions() {
    let out = winter(&[
        "observables",
        "--M",
        "10",
        "--kmin",
        "0.5",
        "--kmax",
        "1.5",
        "--kpoints",
        "11",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.starts_with("# schema_version=1 table=kernel\n"));
    assert_eq!(text.lines().count(), 2 + 11);

    let out = winter(&[
        "eigenfunction",
        "--N",
        "9",
        "--g",
        "0.1",
        "--s",
        "8",
        "--xpoints",
        "5",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert_eq!(text.lines().count(), 2 + 5);
    // ψ vanishes at both walls
    for line in [text.lines().nth(2).unwrap(), text.lines().last().unwrap()] {
        let psi: f64 = line.split(',').nth(7).unwrap().parse().unwrap();
        assert!(psi.abs() < 1e-12, "{line}");
    }
}
