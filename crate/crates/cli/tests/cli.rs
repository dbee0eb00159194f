use std::path::Path;
use std::process::{Command, Output};

use proptest::prelude::*;
use stochseir::formats::{read_path, write_path};
use stochseir::ExitClass;
use stochseir_core::{Path as SeirPath, StateVec};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_stochseir"))
}

fn run(dir: &Path, args: &[&str]) -> Output {
    bin().current_dir(dir).args(args).output().unwrap()
}

fn ok(out: &Output) {
    assert!(
        out.status.success(),
        "status {:?}, stderr: {}",
        out.status,
        String::from_utf8_lossy(&out.stderr)
    );
}

fn code(out: &Output) -> i32 {
    out.status.code().unwrap()
}

fn write_counts(dir: &Path, counts: &[i64]) {
    let mut text = String::from("date,count\n");
    for (k, c) in counts.iter().enumerate() {
        text.push_str(&format!("day{k:02},{c}\n"));
    }
    std::fs::write(dir.join("inc.csv"), text).unwrap();
}

#[test]
fn r0_prints_six_significant_digits() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(dir.path(), &["r0"]);
    ok(&out);
    assert_eq!(String::from_utf8_lossy(&out.stdout).trim(), "1.63210");
}

#[test]
fn simulate_then_estimate_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    ok(&run(dir.path(), &["simulate", "--seed", "4", "--out", "o"]));
    ok(&run(
        dir.path(),
        &["estimate", "--path", "o/path.csv", "--out", "o"],
    ));
    let report: serde_json::Value =
        serde_json::from_slice(&std::fs::read(dir.path().join("o/report.json")).unwrap()).unwrap();
    let mut keys: Vec<&str> = report
        .as_object()
        .unwrap()
        .keys()
        .map(String::as_str)
        .collect();
    keys.sort_unstable();
    assert_eq!(
        keys,
        [
            "beta_a",
            "beta_s",
            "ci",
            "condition_number",
            "j_functionals",
            "p",
            "sigma",
            "window"
        ]
    );
    for k in ["beta_s", "beta_a", "p", "sigma", "condition_number"] {
        assert!(report[k].as_f64().unwrap().is_finite(), "{k}");
    }
    for k in ["j_s", "j_a", "j_sa", "j_2"] {
        assert!(report["j_functionals"][k].as_f64().unwrap() > 0.0);
    }
    let meta: serde_json::Value =
        serde_json::from_slice(&std::fs::read(dir.path().join("o/path.meta.json")).unwrap())
            .unwrap();
    assert!(meta["generator"].as_str().unwrap().contains("chacha20"));
    assert_eq!(meta["seed"], 4);
}

#[test]
fn artifacts_are_bit_identical_across_runs() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    write_counts(d, &[74, 80, 90, 101, 113, 127, 142]);
    std::fs::write(
        d.join("cfg.json"),
        r#"{"reconstruct": {"positivity": "reflect0", "n_rep": 3},
            "mcmc": {"iterations": 400, "burn_in": 100},
            "mc_study": {"n_rep": 5, "horizons": [0.01, 0.02]}}"#,
    )
    .unwrap();
    for out in ["a", "b"] {
        let common = ["--config", "cfg.json", "--seed", "9", "--out", out];
        for cmd in [
            vec!["simulate"],
            vec!["reconstruct", "--input", "inc.csv"],
            vec!["mcmc", "--input", "inc.csv"],
            vec!["mc-study"],
        ] {
            let args: Vec<&str> = cmd.iter().chain(common.iter()).copied().collect();
            ok(&run(d, &args));
        }
        ok(&run(
            d,
            &[
                "validate",
                "--path",
                &format!("{out}/path.csv"),
                "--out",
                out,
            ],
        ));
    }
    let mut files: Vec<_> = std::fs::read_dir(d.join("a"))
        .unwrap()
        .map(|e| e.unwrap().file_name())
        .collect();
    files.sort();
    assert!(files.len() >= 12, "{files:?}");
    for f in files {
        let a = std::fs::read(d.join("a").join(&f)).unwrap();
        let b = std::fs::read(d.join("b").join(&f)).unwrap();
        assert_eq!(a, b, "{f:?} differs");
    }
}

#[test]
fn different_seeds_give_different_paths() {
    let dir = tempfile::tempdir().unwrap();
    ok(&run(dir.path(), &["simulate", "--seed", "1", "--out", "a"]));
    ok(&run(dir.path(), &["simulate", "--seed", "2", "--out", "b"]));
    let a = std::fs::read(dir.path().join("a/path.csv")).unwrap();
    let b = std::fs::read(dir.path().join("b/path.csv")).unwrap();
    assert_ne!(a, b);
}

#[test]
fn zero_symptomatic_row_exits_with_domain_code() {
    let dir = tempfile::tempdir().unwrap();
    let mut text = String::from("t,S,E,Ia,Is,R\n");
    for k in 0..6 {
        let is = if k == 3 { 0.0 } else { 1e-5 };
        let (e, ia, r) = (2e-5, 1e-5, 1e-6);
        let s = 1.0 - e - ia - is - r;
        text.push_str(&format!("{},{s},{e},{ia},{is},{r}\n", k as f64 * 1e-3));
    }
    std::fs::write(dir.path().join("p.csv"), text).unwrap();
    let out = run(dir.path(), &["estimate", "--path", "p.csv"]);
    assert_eq!(code(&out), ExitClass::Domain as i32);
    let msg = String::from_utf8_lossy(&out.stderr);
    assert!(msg.contains("row 3"), "{msg}");
    assert_eq!(msg.trim().lines().count(), 1);
}

#[test]
fn missing_seed_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    for cmd in [
        &["simulate"][..],
        &["mc-study"],
        &["mcmc", "--input", "x.csv"],
    ] {
        let out = run(dir.path(), cmd);
        assert_eq!(code(&out), ExitClass::Usage as i32, "{cmd:?}");
    }
}

#[test]
fn bad_inputs_map_to_distinct_codes() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let missing = run(d, &["validate", "--path", "nope.csv"]);
    assert_eq!(code(&missing), ExitClass::Io as i32);

    std::fs::write(d.join("bad.csv"), "date,count\nd0,74\nd1,x\n").unwrap();
    let parse = run(d, &["reconstruct", "--input", "bad.csv", "--seed", "1"]);
    assert_eq!(code(&parse), ExitClass::Parse as i32);
    assert!(String::from_utf8_lossy(&parse.stderr).contains("line 3"));

    std::fs::write(d.join("cfg.json"), r#"{"p": 2.0}"#).unwrap();
    let config = run(d, &["r0", "--config", "cfg.json"]);
    assert_eq!(code(&config), ExitClass::InvalidConfig as i32);

    // the reference R(0) = 0 start under the default Reject policy
    write_counts(d, &[74, 80, 90, 101, 113]);
    let pos = run(d, &["reconstruct", "--input", "inc.csv", "--seed", "3"]);
    assert_eq!(code(&pos), ExitClass::Positivity as i32);

    let codes = [
        ExitClass::Usage,
        ExitClass::Io,
        ExitClass::Parse,
        ExitClass::InvalidConfig,
        ExitClass::Domain,
        ExitClass::Positivity,
        ExitClass::Singular,
        ExitClass::Window,
        ExitClass::Replication,
    ]
    .map(|c| c as u8);
    let mut unique = codes.to_vec();
    unique.sort_unstable();
    unique.dedup();
    assert_eq!(unique.len(), codes.len());
    assert!(!codes.contains(&0) && !codes.contains(&1));
}

#[test]
fn reconstruct_writes_manifest_and_replicates() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    write_counts(d, &[74, 80, 90, 101, 113]);
    std::fs::write(
        d.join("cfg.json"),
        r#"{"reconstruct": {"positivity": "reflect0"}}"#,
    )
    .unwrap();
    ok(&run(
        d,
        &[
            "reconstruct",
            "--config",
            "cfg.json",
            "--input",
            "inc.csv",
            "--seed",
            "3",
            "--replicates",
            "4",
            "--out",
            "r",
        ],
    ));
    let manifest: serde_json::Value =
        serde_json::from_slice(&std::fs::read(d.join("r/manifest.json")).unwrap()).unwrap();
    assert_eq!(manifest["n_rep"], 4);
    let files = manifest["files"].as_array().unwrap();
    assert_eq!(files.len(), 4);
    for f in files {
        let p = read_path(&d.join("r").join(f.as_str().unwrap())).unwrap();
        assert_eq!(p.len(), 5);
        assert_eq!(p.states()[0].i_s(), 74.0 / 26_446_435.0);
    }
}

#[test]
fn replicated_estimate_reports_intervals() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    write_counts(d, &[74, 80, 90, 101, 113, 127, 142, 159]);
    std::fs::write(
        d.join("cfg.json"),
        r#"{"reconstruct": {"positivity": "reflect0"}}"#,
    )
    .unwrap();
    ok(&run(
        d,
        &[
            "estimate",
            "--config",
            "cfg.json",
            "--incidence",
            "inc.csv",
            "--replicates",
            "20",
            "--seed",
            "5",
        ],
    ));
    let report: serde_json::Value =
        serde_json::from_slice(&std::fs::read(d.join("report.json")).unwrap()).unwrap();
    for k in ["beta_s", "beta_a", "p", "sigma"] {
        let ci = &report["ci"][k];
        let (lo, hi) = (ci["lo"].as_f64().unwrap(), ci["hi"].as_f64().unwrap());
        assert!(lo <= hi, "{k}");
        assert_eq!(ci["mean"], report[k]);
    }
}

fn arb_path() -> impl Strategy<Value = SeirPath> {
    let row = (1e-9..0.3f64, 1e-9..0.2f64, 1e-9..0.2f64, 1e-9..0.2f64)
        .prop_map(|(e, ia, is, r)| StateVec::from_infected(e, ia, is, r).unwrap());
    (
        prop::collection::vec(row, 2..40),
        prop::sample::select(vec![1e-3, 0.5, 1.0, 0.1]),
        any::<bool>(),
        prop::collection::vec(-1.0..1.0f64, 40),
    )
        .prop_map(|(states, dt, with_w, w)| {
            let n = states.len();
            let wiener = with_w.then(|| w[..n - 1].to_vec());
            SeirPath::new(0.0, dt, states, wiener).unwrap()
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn path_csv_round_trip_is_exact(path in arb_path()) {
        let dir = tempfile::tempdir().unwrap();
        let f = dir.path().join("p.csv");
        write_path(&f, &path).unwrap();
        prop_assert_eq!(read_path(&f).unwrap(), path);
    }
}
