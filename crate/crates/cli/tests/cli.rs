use std::f64::consts::PI;
use std::path::Path;
use std::process::{Command, Output};

fn npms(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_npms"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(args: &[&str]) -> String {
    let out = npms(args);
    assert!(
        out.status.success(),
        "{args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn rows(csv_text: &str) -> Vec<Vec<String>> {
    let mut r = csv::Reader::from_reader(csv_text.as_bytes());
    r.records()
        .map(|rec| rec.unwrap().iter().map(str::to_string).collect())
        .collect()
}

fn num(s: &str) -> f64 {
    s.parse().unwrap_or_else(|_| panic!("not a number: {s}"))
}

#[test]
fn cusps_follow_the_convergence_regime() {
    let none = rows(&stdout(&["lens-cusps", "--m", "-1", "--kappa", "0", "--gamma", "0.5"]));
    assert!(none.is_empty());
    let four = rows(&stdout(&["lens-cusps", "--m", "-1", "--kappa", "2", "--gamma", "0.5"]));
    assert_eq!(four.len(), 4);
    let labels: Vec<(f64, &str)> = four.iter().map(|r| (num(&r[0]), r[1].as_str())).collect();
    assert_eq!(labels[0], (0.0, "phi1"));
    assert_eq!(labels[2].1, "phi2");
    assert!((labels[2].0 - PI).abs() < 1e-15);
}

#[test]
fn light_curve_example() {
    let t = rows(&stdout(&[
        "lens-lightcurve",
        "--m",
        "-1",
        "--d",
        "3",
        "--t0",
        "-5",
        "--t1",
        "5",
        "--n",
        "101",
    ]));
    assert_eq!(t.len(), 101);
    let mid = &t[50];
    assert_eq!(num(&mid[0]), 0.0);
    assert!((num(&mid[1]) - 7.0 / (3.0 * 5f64.sqrt())).abs() < 1e-12);
    assert!((num(&mid[1]) - 1.04350).abs() < 5e-6);
}

#[test]
fn occulted_samples_are_na() {
    let t = rows(&stdout(&[
        "lens-lightcurve",
        "--m",
        "-1",
        "--d",
        "1",
        "--t0",
        "-3",
        "--t1",
        "3",
        "--n",
        "7",
    ]));
    assert_eq!(t[3][1], "NA");
    assert_ne!(t[0][1], "NA");
}

#[test]
fn flat_flow_example() {
    let t = rows(&stdout(&[
        "imcf-flow",
        "--profile",
        "flat",
        "--r0",
        "1",
        "--t-end",
        "2",
    ]));
    let last = t.last().unwrap();
    assert_eq!(num(&last[0]), 2.0);
    let want = 4.0 * PI * 2f64.exp();
    assert!((num(&last[2]) / want - 1.0).abs() < 1e-6);
}

#[test]
fn csv_round_trips() {
    let cases: [&[&str]; 6] = [
        &["lens-images", "--m", "-1", "--gamma", "1.5", "--y", "-3.9,0"],
        &["lens-lightcurve", "--d", "1.5"],
        &["lens-caustics", "--gamma", "1", "--samples", "16"],
        &["spherical-report", "--profile", "neg-schwarzschild", "--samples", "5"],
        &["imcf-flow", "--profile", "power-law", "--p", "0.5"],
        &["weyl-zv", "--m", "1.3", "--samples", "4"],
    ];
    for args in cases {
        let text = stdout(args);
        assert!(!text.contains('\r'));
        let table = rows(&text);
        assert!(!table.is_empty(), "{args:?}");
        let width = table[0].len();
        for row in &table {
            assert_eq!(row.len(), width);
            for cell in row {
                if cell.contains('e') && cell != "NA" && !cell.starts_with("phi") {
                    let v = num(cell);
                    assert!(v.is_finite());
                    assert_eq!(&format!("{v:.16e}"), cell);
                }
            }
        }
    }
}

#[test]
fn output_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let run = |tag: &str| {
        let csv = dir.path().join(format!("{tag}.csv"));
        let svg = dir.path().join(format!("{tag}.svg"));
        let out = npms(&[
            "lens-critical",
            "--gamma",
            "0.9",
            "--out",
            csv.to_str().unwrap(),
            "--svg",
            svg.to_str().unwrap(),
        ]);
        assert!(out.status.success());
        (std::fs::read(csv).unwrap(), std::fs::read(svg).unwrap())
    };
    assert_eq!(run("a"), run("b"));
}

#[test]
fn critical_curve_panel_writes_nine_svgs() {
    let dir = tempfile::tempdir().unwrap();
    for kappa in [0.5, 1.0, 1.5] {
        for gamma_star in [0.5, 0.9, 1.5] {
            let s: f64 = (1.0f64 - kappa).abs();
            let gamma = if s == 0.0 { gamma_star } else { gamma_star * s };
            let path = dir.path().join(format!("critical_k{kappa}_g{gamma_star}.svg"));
            let out = npms(&[
                "lens-critical",
                "--m",
                "-1",
                "--kappa",
                &kappa.to_string(),
                "--gamma",
                &gamma.to_string(),
                "--out",
                dir.path().join("c.csv").to_str().unwrap(),
                "--svg",
                path.to_str().unwrap(),
            ]);
            assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
        }
    }
    let svgs: Vec<_> = std::fs::read_dir(dir.path())
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|e| e == "svg"))
        .collect();
    assert_eq!(svgs.len(), 9);
    for p in &svgs {
        let body = std::fs::read_to_string(p).unwrap();
        assert!(body.starts_with("<svg") && body.trim_end().ends_with("</svg>"));
        assert!(
            body.contains("<polyline") || body.contains("<circle"),
            "{}",
            p.display()
        );
        assert!(!body.contains("<script"));
    }
}

#[test]
fn light_curve_peaks_fall_with_impact_parameter() {
    let mut peaks = Vec::new();
    for d in [2.2, 2.6, 3.0, 3.4, 3.8, 4.0] {
        let t = rows(&stdout(&[
            "lens-lightcurve",
            "--m",
            "-1",
            "--d",
            &d.to_string(),
            "--n",
            "201",
        ]));
        let peak = t
            .iter()
            .filter(|r| r[1] != "NA")
            .map(|r| num(&r[1]))
            .fold(f64::MIN, f64::max);
        peaks.push(peak);
    }
    assert!(peaks.windows(2).all(|w| w[1] < w[0]), "{peaks:?}");
}

#[test]
fn empty_plot_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let svg = dir.path().join("empty.svg");
    let out = npms(&[
        "lens-lightcurve",
        "--d",
        "0",
        "--t0",
        "-1",
        "--t1",
        "1",
        "--n",
        "5",
        "--svg",
        svg.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(!svg.exists());
}

#[test]
fn config_sits_under_flags() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.conf");
    std::fs::write(&cfg, "# light curve\nm = -2\nd = 4\nn = 11\n").unwrap();
    let cfg = cfg.to_str().unwrap();
    let from_config = stdout(&["lens-lightcurve", "--config", cfg]);
    assert_eq!(
        from_config,
        stdout(&["lens-lightcurve", "--m", "-2", "--d", "4", "--n", "11"])
    );
    let overridden = stdout(&["lens-lightcurve", "--config", cfg, "--d", "5"]);
    assert_eq!(
        overridden,
        stdout(&["lens-lightcurve", "--m", "-2", "--d", "5", "--n", "11"])
    );
}

fn code(args: &[&str]) -> (Option<i32>, String) {
    let out = npms(args);
    (out.status.code(), String::from_utf8_lossy(&out.stderr).into_owned())
}

#[test]
fn validation_errors_exit_2() {
    let (c, err) = code(&["lens-images", "--m", "abc"]);
    assert_eq!(c, Some(2));
    assert!(err.contains("--m"));
    let (c, err) = code(&["lens-images", "--y", "3"]);
    assert_eq!(c, Some(2));
    assert!(err.contains("--y"));
    assert_eq!(code(&["no-such-command"]).0, Some(2));
    assert_eq!(code(&["weyl-zv", "--a", "0"]).0, Some(2));
    assert_eq!(
        code(&["spherical-report", "--profile", "neg-schwarzschild", "--mass", "1"]).0,
        Some(2)
    );
    let (c, err) = code(&["spherical-report", "--profile", "tabulated"]);
    assert_eq!(c, Some(2));
    assert!(err.contains("--file"));

    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.conf");
    std::fs::write(&cfg, "gamma = 0.5\nbogus = 1\n").unwrap();
    let (c, err) = code(&["lens-images", "--config", cfg.to_str().unwrap()]);
    assert_eq!(c, Some(2));
    assert!(err.contains("bogus"));
    let table = dir.path().join("bad.csv");
    std::fs::write(&table, "r,A\n1,2\n").unwrap();
    let (c, _) = code(&[
        "spherical-report",
        "--profile",
        "tabulated",
        "--file",
        table.to_str().unwrap(),
    ]);
    assert_eq!(c, Some(2));
}

#[test]
fn unwritable_paths_exit_3() {
    let missing = Path::new("/nonexistent-dir/out.csv");
    assert_eq!(
        code(&["lens-lightcurve", "--out", missing.to_str().unwrap()]).0,
        Some(3)
    );
    assert_eq!(
        code(&["lens-lightcurve", "--svg", "/nonexistent-dir/plot.svg"]).0,
        Some(3)
    );
}

#[test]
fn numerical_failure_exits_3() {
    // a source on the axis of a pure point lens with kappa > 1 images onto a ring
    assert_eq!(
        code(&["lens-images", "--m", "-1", "--kappa", "2", "--y", "0,0"]).0,
        Some(3)
    );
}

#[test]
fn help_succeeds() {
    let out = npms(&["--help"]);
    assert!(out.status.success());
    assert!(String::from_utf8_lossy(&out.stdout).contains("weyl-zv"));
}
