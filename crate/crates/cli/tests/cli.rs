use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use acs_core::measures::{EvalMode, LocalStatistic, Measure};
use acs_core::simbench::{run_rmse_experiment, RmseConfig};
use tempfile::TempDir;

fn acs(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_acs"))
        .args(args)
        .env_remove("ACS_THREADS")
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

/// `x1` increases with `y`; `x2` and `x3` do not.
fn tiny_csv(dir: &Path) -> PathBuf {
    let path = dir.join("tiny.csv");
    fs::write(
        &path,
        "y,x1,x2,x3\n1,10,3,0.5\n2,20,1,0.1\n3,30,2,0.9\n4,40,6,0.3\n5,50,4,0.7\n6,60,5,0.2\n",
    )
    .unwrap();
    path
}

fn read(dir: &Path, name: &str) -> String {
    fs::read_to_string(dir.join(name)).unwrap()
}

#[test]
fn screen_ranks_the_monotone_column_first() {
    let tmp = TempDir::new().unwrap();
    let input = tiny_csv(tmp.path());
    let out = tmp.path().join("out");
    let res = acs(&[
        "screen", "--input", path_str(&input), "--response", "y", "--measure", "kendall",
        "--m", "2", "--top-k", "1", "--output", path_str(&out),
    ]);
    assert_eq!(code(&res), 0, "{}", String::from_utf8_lossy(&res.stderr));
    let retained = read(&out, "retained.csv");
    let rows: Vec<&str> = retained.lines().collect();
    assert_eq!(rows[0], "feature,name,estimate");
    assert_eq!(rows.len(), 2);
    assert!(rows[1].starts_with("0,x1,"), "{retained}");
    let estimates = read(&out, "estimates.csv");
    assert!(estimates.starts_with("feature,name,estimate,method,m,degenerate\n"));
    assert_eq!(estimates.lines().count(), 4);
    let manifest: serde_json::Value = serde_json::from_str(&read(&out, "manifest.json")).unwrap();
    assert_eq!(manifest["command"], "screen");
    assert_eq!(manifest["seed"], 1);
    assert_eq!(manifest["input"]["sha256"].as_str().unwrap().len(), 64);
    assert!(manifest["timings"].is_object());
}

#[test]
fn zero_segments_is_a_usage_error() {
    let tmp = TempDir::new().unwrap();
    let input = tiny_csv(tmp.path());
    let res = acs(&[
        "screen", "--input", path_str(&input), "--response", "y", "--measure", "kendall",
        "--m", "0", "--top-k", "1", "--output", path_str(&tmp.path().join("o")),
    ]);
    assert_eq!(code(&res), 1);
}

#[test]
fn segment_count_above_rows_is_a_usage_error() {
    let tmp = TempDir::new().unwrap();
    let input = tiny_csv(tmp.path());
    let res = acs(&[
        "screen", "--input", path_str(&input), "--response", "y", "--measure", "dc",
        "--m", "3", "--gamma", "0.1", "--output", path_str(&tmp.path().join("o")),
    ]);
    // 6 rows in 3 segments leaves pairs, below the degree-3 kernels
    assert_eq!(code(&res), 1);
    let stderr = String::from_utf8_lossy(&res.stderr);
    assert_eq!(stderr.lines().count(), 1, "{stderr}");
}

#[test]
fn rule_flags_are_exclusive_and_required() {
    let tmp = TempDir::new().unwrap();
    let input = tiny_csv(tmp.path());
    let out = tmp.path().join("o");
    let base = [
        "screen", "--input", path_str(&input), "--response", "y", "--measure", "kendall",
        "--m", "2", "--output", path_str(&out),
    ];
    assert_eq!(code(&acs(&base)), 1);
    let mut both = base.to_vec();
    both.extend(["--gamma", "0.1", "--top-k", "1"]);
    assert_eq!(code(&acs(&both)), 1);
}

#[test]
fn data_errors_exit_with_two() {
    let tmp = TempDir::new().unwrap();
    let input = tiny_csv(tmp.path());
    let out = path_str(&tmp.path().join("o")).to_owned();
    let missing = acs(&[
        "screen", "--input", path_str(&input), "--response", "nope", "--measure", "kendall",
        "--m", "2", "--top-k", "1", "--output", &out,
    ]);
    assert_eq!(code(&missing), 2);
    assert!(String::from_utf8_lossy(&missing.stderr).contains("response column not found"));

    let bad = tmp.path().join("bad.csv");
    fs::write(&bad, "y,x\n1,2\n2,abc\n").unwrap();
    let res = acs(&[
        "screen", "--input", path_str(&bad), "--response", "y", "--measure", "kendall",
        "--m", "1", "--top-k", "1", "--output", &out,
    ]);
    assert_eq!(code(&res), 2);
    assert!(String::from_utf8_lossy(&res.stderr).contains("abc"));

    let absent = acs(&[
        "screen", "--input", "/nonexistent/file.csv", "--response", "y", "--measure", "kendall",
        "--m", "1", "--top-k", "1", "--output", &out,
    ]);
    assert_eq!(code(&absent), 2);
}

#[test]
fn constant_response_is_fatal() {
    let tmp = TempDir::new().unwrap();
    let input = tmp.path().join("flat.csv");
    fs::write(&input, "y,x1,x2\n1,1,5\n1,2,3\n1,3,1\n1,4,2\n").unwrap();
    let res = acs(&[
        "screen", "--input", path_str(&input), "--response", "y", "--measure", "pearson",
        "--m", "2", "--gamma", "0.1", "--output", path_str(&tmp.path().join("o")),
    ]);
    assert_eq!(code(&res), 3);
}

fn dir_bytes(dir: &Path) -> Vec<(String, Vec<u8>)> {
    let mut files: Vec<_> = fs::read_dir(dir)
        .unwrap()
        .map(|e| {
            let e = e.unwrap();
            (e.file_name().into_string().unwrap(), fs::read(e.path()).unwrap())
        })
        .collect();
    files.sort();
    files
}

#[test]
fn reruns_are_byte_identical_across_thread_counts() {
    let tmp = TempDir::new().unwrap();
    let input = tmp.path().join("data.csv");
    let mut csv = String::from("target,a,b,c,d\n");
    for i in 0..40 {
        let t = i as f64 * 0.37;
        csv.push_str(&format!(
            "{},{},{},{},{}\n",
            t.sin() + 0.1 * t,
            (t * 1.7).cos(),
            t.sin(),
            (i % 7) as f64,
            (t * 0.3).exp()
        ));
    }
    fs::write(&input, csv).unwrap();
    for method in ["acs", "sas", "racs"] {
        for measure in ["pearson", "kendall", "sirs", "dc"] {
            let out = tmp.path().join(format!("{method}-{measure}"));
            let run = |threads: &str| {
                let _ = fs::remove_dir_all(&out);
                let res = acs(&[
                    "screen", "--input", path_str(&input), "--response", "target", "--measure",
                    measure, "--m", "4", "--gamma", "0.01", "--method", method, "--seed", "9",
                    "--threads", threads, "--no-timing", "--dump-components", "--output",
                    path_str(&out),
                ]);
                assert_eq!(code(&res), 0, "{}", String::from_utf8_lossy(&res.stderr));
                dir_bytes(&out)
            };
            let a = run("1");
            let b = run("1");
            let c = run("3");
            assert_eq!(a, b, "{method} {measure} rerun");
            // the manifest records the thread count; everything else must match
            let strip = |files: Vec<(String, Vec<u8>)>| {
                files.into_iter().filter(|(n, _)| n != "manifest.json").collect::<Vec<_>>()
            };
            assert_eq!(strip(a), strip(c), "{method} {measure} thread count");
        }
    }
}

#[test]
fn benchmark_reruns_are_byte_identical() {
    let tmp = TempDir::new().unwrap();
    let out = tmp.path().join("sim");
    let sim = || {
        let _ = fs::remove_dir_all(&out);
        let res = acs(&[
            "simulate", "--model", "b", "--N", "240", "--p", "30", "--m", "4", "--measure", "dc",
            "--T", "3", "--seed", "4", "--no-timing", "--output", path_str(&out),
        ]);
        assert_eq!(code(&res), 0, "{}", String::from_utf8_lossy(&res.stderr));
        dir_bytes(&out)
    };
    assert_eq!(sim(), sim());
    let bench = || {
        let _ = fs::remove_dir_all(&out);
        let res = acs(&[
            "rmse-bench", "--N", "120", "--m-list", "2,4", "--T", "3", "--no-timing",
            "--output", path_str(&out),
        ]);
        assert_eq!(code(&res), 0, "{}", String::from_utf8_lossy(&res.stderr));
        dir_bytes(&out)
    };
    assert_eq!(bench(), bench());
}

#[test]
fn simulate_writes_the_metrics_schema() {
    let tmp = TempDir::new().unwrap();
    let out = tmp.path().join("sim");
    let res = acs(&[
        "simulate", "--model", "a", "--N", "200", "--p", "40", "--m", "4", "--measure",
        "pearson", "--T", "3", "--output", path_str(&out),
    ]);
    assert_eq!(code(&res), 0, "{}", String::from_utf8_lossy(&res.stderr));
    let csv = read(&out, "metrics.csv");
    let mut lines = csv.lines();
    assert_eq!(
        lines.next().unwrap(),
        "m,correlation,method,SSR,MS,Std(MS),PSR,FDR,Time^n,Time^N"
    );
    let methods: Vec<&str> = lines.map(|l| l.split(',').nth(2).unwrap()).collect();
    assert_eq!(methods, ["sas", "acs", "racs"]);
    let json: serde_json::Value = serde_json::from_str(&read(&out, "metrics.json")).unwrap();
    assert_eq!(json["methods"].as_array().unwrap().len(), 3);
    assert!(json["time_centralized"].is_number());
}

#[test]
fn simulate_rejects_narrow_designs() {
    let tmp = TempDir::new().unwrap();
    let res = acs(&[
        "simulate", "--model", "b", "--N", "100", "--p", "5", "--m", "2", "--measure",
        "kendall", "--T", "2", "--output", path_str(&tmp.path().join("o")),
    ]);
    assert_eq!(code(&res), 1);
    assert!(String::from_utf8_lossy(&res.stderr).contains("p >= 10"));
}

#[test]
fn single_repetition_rmse_is_the_absolute_estimate() {
    let tmp = TempDir::new().unwrap();
    let out = tmp.path().join("r");
    let res = acs(&[
        "rmse-bench", "--N", "90", "--m-list", "3", "--T", "1", "--measures", "kendall,dc",
        "--seed", "12", "--output", path_str(&out),
    ]);
    assert_eq!(code(&res), 0, "{}", String::from_utf8_lossy(&res.stderr));
    let expected = run_rmse_experiment(&RmseConfig {
        n: 90,
        m_list: vec![3],
        t: 1,
        measures: vec![Measure::Kendall, Measure::Dc],
        r: 3,
        seed: 12,
        mode: EvalMode::Fast,
        sas_local: LocalStatistic::Unbiased,
    })
    .unwrap();
    let csv = read(&out, "rmse.csv");
    let rows: Vec<Vec<&str>> = csv.lines().skip(1).map(|l| l.split(',').collect()).collect();
    assert_eq!(rows.len(), expected.len());
    for (row, exp) in rows.iter().zip(&expected) {
        let rmse: f64 = row[3].parse().unwrap();
        assert_eq!(rmse, exp.estimates[0].abs());
        assert_eq!(row[4], "0");
    }
}

#[test]
fn unknown_measure_is_a_usage_error() {
    let tmp = TempDir::new().unwrap();
    let res = acs(&[
        "rmse-bench", "--measures", "kendall,spearman", "--output",
        path_str(&tmp.path().join("o")),
    ]);
    assert_eq!(code(&res), 1);
    assert!(String::from_utf8_lossy(&res.stderr).contains("spearman"));
}

#[test]
fn naive_mode_matches_fast_mode() {
    let tmp = TempDir::new().unwrap();
    let input = tiny_csv(tmp.path());
    for measure in ["pearson", "kendall", "sirs", "dc"] {
        let run = |naive: bool| {
            let out = tmp.path().join(format!("{measure}-{naive}"));
            let mut args = vec![
                "screen", "--input", path_str(&input), "--response", "y", "--measure", measure,
                "--m", "2", "--top-k", "2", "--output", path_str(&out),
            ];
            if naive {
                args.push("--naive");
            }
            let res = acs(&args);
            assert_eq!(code(&res), 0, "{}", String::from_utf8_lossy(&res.stderr));
            read(&out, "estimates.csv")
                .lines()
                .skip(1)
                .map(|l| l.split(',').nth(2).unwrap().parse::<f64>().unwrap())
                .collect::<Vec<_>>()
        };
        for (f, n) in run(false).iter().zip(run(true)) {
            assert!((f - n).abs() <= 1e-10 * n.abs().max(1.0), "{measure}: {f} vs {n}");
        }
    }
}

#[test]
fn help_and_version_exit_zero() {
    assert_eq!(code(&acs(&["--help"])), 0);
    assert_eq!(code(&acs(&["--version"])), 0);
    assert_eq!(code(&acs(&["screen", "--help"])), 0);
    assert_eq!(code(&acs(&[])), 1);
}

#[test]
fn thread_count_comes_from_the_environment() {
    let tmp = TempDir::new().unwrap();
    let input = tiny_csv(tmp.path());
    let out = tmp.path().join("env");
    let res = Command::new(env!("CARGO_BIN_EXE_acs"))
        .args([
            "screen", "--input", path_str(&input), "--response", "y", "--measure", "kendall",
            "--m", "2", "--top-k", "1", "--output", path_str(&out),
        ])
        .env("ACS_THREADS", "2")
        .output()
        .unwrap();
    assert_eq!(code(&res), 0);
    let manifest: serde_json::Value = serde_json::from_str(&read(&out, "manifest.json")).unwrap();
    assert_eq!(manifest["threads"], 2);
}
