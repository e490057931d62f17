use std::collections::HashMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use pqtrain::designs::parse_train;
use pqtrain::waveforms::{check_complementary, GolayPair, ParaunitaryMatrix};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_pqtrain"))
}

fn workdir(name: &str) -> PathBuf {
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join(name);
    let _ = fs::remove_dir_all(&dir);
    fs::create_dir_all(&dir).unwrap();
    dir
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

/// `key=value` fields of one report line.
fn fields(line: &str) -> HashMap<String, String> {
    line.split_whitespace()
        .filter_map(|t| t.split_once('='))
        .map(|(k, v)| (k.to_string(), v.to_string()))
        .collect()
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn gen_golay_writes_a_complementary_pair() {
    let dir = workdir("gen_golay");
    let out = dir.join("pair.csv");
    let o = run(&["gen", "golay", "--length", "64", "--out", path(&out)]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(fields(&stdout(&o))["residual"], "0");
    let pair = GolayPair::parse_csv(&fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(pair.len(), 64);
    assert_eq!(
        check_complementary(&[pair.x().clone(), pair.y().clone()]).unwrap(),
        0.0
    );
}

#[test]
fn gen_golay_to_stdout_keeps_the_report_on_stderr() {
    let o = run(&["gen", "golay", "--length", "8"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(GolayPair::parse_csv(&stdout(&o)).is_ok());
    assert!(String::from_utf8_lossy(&o.stderr).contains("residual=0"));
}

#[test]
fn gen_paraunitary_writes_a_4x4_matrix() {
    let dir = workdir("gen_para");
    let out = dir.join("s4.txt");
    let o = run(&[
        "gen",
        "paraunitary",
        "--order",
        "2",
        "--chip-length",
        "2",
        "--out",
        path(&out),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let s = ParaunitaryMatrix::parse_csv(&fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!((s.size(), s.chip_len()), (4, 2));
    assert_eq!(s.residual(), 0.0);
}

#[test]
fn bad_sizes_are_usage_errors() {
    assert_eq!(
        run(&["gen", "golay", "--length", "3"]).status.code(),
        Some(2)
    );
    assert_eq!(run(&["design", "ptm", "--n", "12"]).status.code(), Some(2));
    assert_eq!(
        run(&["design", "maxsnr", "--n", "8", "--m", "7"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(run(&["gen", "golay"]).status.code(), Some(2));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn design_reports_null_order_and_gain() {
    let o = run(&["design", "ptm", "--n", "16"]);
    assert!(String::from_utf8_lossy(&o.stderr).contains("null_order=3 snr_gain=16.00"));
    let o = run(&["design", "binomial", "--n", "16"]);
    assert!(String::from_utf8_lossy(&o.stderr).contains("null_order=14 snr_gain=6.92"));
}

#[test]
fn maxsnr_design_matches_the_published_weights() {
    let expected = [
        0.0069, 0.0429, 0.0948, 0.0623, 0.0656, 0.0770, 0.0713, 0.0792, 0.0792, 0.0713, 0.0770,
        0.0656, 0.0623, 0.0948, 0.0429, 0.0069,
    ];
    let o = run(&["design", "maxsnr", "--n", "16", "--m", "8"]);
    assert_eq!(o.status.code(), Some(0));
    let (train, m) = parse_train::<f64>(&stdout(&o)).unwrap();
    assert_eq!(m, 8);
    let total: f64 = train.q().iter().sum();
    for (q, e) in train.q().iter().zip(expected) {
        assert!((q / total - e).abs() <= 1e-4, "{q} vs {e}");
    }
}

#[test]
fn solver_non_convergence_exits_3() {
    let o = run(&[
        "design",
        "maxsnr",
        "--n",
        "12",
        "--m",
        "4",
        "--kkt-tolerance",
        "1e-40",
    ]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn verify_accepts_ptm_and_rejects_a_negated_weight() {
    let dir = workdir("verify_ptm");
    let file = dir.join("ptm.txt");
    assert!(run(&["design", "ptm", "--n", "16", "--out", path(&file)])
        .status
        .success());
    let o = run(&["verify", "--design", path(&file)]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(fields(&stdout(&o))["status"], "ok");

    let text = fs::read_to_string(&file).unwrap();
    let mut lines: Vec<String> = text.lines().map(str::to_string).collect();
    lines[2] = lines[2].replacen('1', "-1", 1);
    fs::write(&file, lines.join("\n")).unwrap();
    let o = run(&["verify", "--design", path(&file)]);
    assert_eq!(o.status.code(), Some(1));
    let report = stdout(&o);
    assert_eq!(fields(&report)["status"], "fail");
    assert!(report.contains("nonnegative"));
}

#[test]
fn verify_rejects_an_overstated_order() {
    let dir = workdir("verify_order");
    let file = dir.join("ptm.txt");
    assert!(run(&["design", "ptm", "--n", "8", "--out", path(&file)])
        .status
        .success());
    let text = fs::read_to_string(&file)
        .unwrap()
        .replacen("2 8 2", "2 8 3", 1);
    fs::write(&file, text).unwrap();
    assert_eq!(
        run(&["verify", "--design", path(&file)]).status.code(),
        Some(1)
    );
}

#[test]
fn verify_reports_quad_channel_orders() {
    let dir = workdir("verify_quad");
    let (f, quad, s4) = (dir.join("f.txt"), dir.join("quad.txt"), dir.join("s4.txt"));
    assert!(run(&["design", "binomial", "--n", "4", "--out", path(&f)])
        .status
        .success());
    let o = run(&[
        "design",
        "compose",
        "--factor",
        path(&f),
        "--factor",
        path(&f),
        "--out",
        path(&quad),
    ]);
    assert!(o.status.success());
    let text = fs::read_to_string(&quad).unwrap();
    assert!(text.contains("0 1 0 1 2 3 2 3 0 1 0 1 2 3 2 3"));
    assert!(text.contains("1 3 3 1 3 9 9 3 3 9 9 3 1 3 3 1"));
    assert!(run(&[
        "gen",
        "paraunitary",
        "--order",
        "2",
        "--chip-length",
        "8",
        "--out",
        path(&s4)
    ])
    .status
    .success());
    let o = run(&["verify", "--design", path(&quad), "--waveform", path(&s4)]);
    assert_eq!(o.status.code(), Some(0));
    let f = fields(&stdout(&o));
    assert_eq!(f["channel_orders"], "2,2,2");
    assert_eq!(f["waveform_residual"], "0");
}

#[test]
fn verify_optimal_separates_maxsnr_from_binomial() {
    let dir = workdir("verify_optimal");
    let (a, b) = (dir.join("a.txt"), dir.join("b.txt"));
    assert!(run(&[
        "design",
        "maxsnr",
        "--n",
        "10",
        "--m",
        "8",
        "--out",
        path(&a)
    ])
    .status
    .success());
    assert!(run(&[
        "design",
        "maxsnr",
        "--n",
        "10",
        "--m",
        "3",
        "--out",
        path(&b)
    ])
    .status
    .success());
    assert_eq!(
        run(&["verify", "--design", path(&a), "--optimal"])
            .status
            .code(),
        Some(0)
    );
    assert_eq!(
        run(&["verify", "--design", path(&b), "--optimal"])
            .status
            .code(),
        Some(0)
    );
    let c = dir.join("c.txt");
    assert!(run(&["design", "binomial", "--n", "10", "--out", path(&c)])
        .status
        .success());
    let text = fs::read_to_string(&c)
        .unwrap()
        .replacen("2 10 8", "2 10 3", 1);
    fs::write(&c, text).unwrap();
    assert_eq!(
        run(&["verify", "--design", path(&c), "--optimal"])
            .status
            .code(),
        Some(1)
    );
}

#[test]
fn table1_has_four_rows() {
    let o = run(&["table1", "--n", "16"]);
    assert_eq!(o.status.code(), Some(0));
    let rows: Vec<_> = stdout(&o).lines().map(fields).collect();
    let got: Vec<(&str, &str, &str)> = rows
        .iter()
        .map(|r| {
            (
                r["kind"].as_str(),
                r["null_order"].as_str(),
                r["snr_gain"].as_str(),
            )
        })
        .collect();
    assert_eq!(
        got,
        [
            ("conventional", "0", "16.00"),
            ("ptm", "3", "16.00"),
            ("maxsnr", "8", "13.76"),
            ("binomial", "14", "6.92"),
        ]
    );
}

#[test]
fn ambiguity_csv_clears_the_ptm_band() {
    let dir = workdir("ambiguity");
    let csv = dir.join("ptm.csv");
    let o = run(&[
        "ambiguity",
        "--design",
        "ptm16",
        "--golay",
        "64",
        "--grid",
        "-0.1:0.1:1024",
        "--csv",
        path(&csv),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let text = fs::read_to_string(&csv).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap().split(',').count(), 1025);
    let mut worst = f64::NEG_INFINITY;
    let mut rows = 0;
    for line in lines {
        rows += 1;
        let mut cells = line.split(',');
        let k: i64 = cells.next().unwrap().parse().unwrap();
        if k != 0 {
            for c in cells {
                worst = worst.max(c.parse::<f64>().unwrap());
            }
        }
    }
    assert_eq!(rows, 127);
    assert!(worst < -80.0, "{worst}");
    assert!(
        fields(&stdout(&o))["max_sidelobe_db"]
            .parse::<f64>()
            .unwrap()
            < -80.0
    );
}

#[test]
fn ambiguity_is_byte_identical_across_thread_counts() {
    let dir = workdir("threads");
    let outputs: Vec<Vec<u8>> = ["1", "4"]
        .iter()
        .map(|t| {
            let csv = dir.join(format!("t{t}.csv"));
            let pgm = dir.join(format!("t{t}.pgm"));
            let o = run(&[
                "--threads",
                t,
                "ambiguity",
                "--design",
                "binomial16",
                "--grid",
                "-1:1:200",
                "--csv",
                path(&csv),
                "--pgm",
                path(&pgm),
            ]);
            assert!(o.status.success());
            [fs::read(&csv).unwrap(), fs::read(&pgm).unwrap()].concat()
        })
        .collect();
    assert_eq!(outputs[0], outputs[1]);
}

#[test]
fn mimo_ambiguity_writes_one_file_per_entry() {
    let dir = workdir("mimo");
    let csv = dir.join("m.csv");
    let o = run(&[
        "ambiguity",
        "--design",
        "ptm16",
        "--mimo",
        "--grid",
        "-0.1:0.1:51",
        "--csv",
        path(&csv),
    ]);
    assert_eq!(o.status.code(), Some(0));
    for (i, j) in [(0, 0), (0, 1), (1, 0), (1, 1)] {
        assert!(dir.join(format!("m_{i}_{j}.csv")).is_file());
    }
    let f = fields(&stdout(&o));
    assert!(f["max_diagonal_sidelobe_db"].parse::<f64>().unwrap() < -80.0);
}

#[test]
fn scene_writes_pgm_and_visibility_report() {
    let dir = workdir("scene");
    let pgm = dir.join("scene.pgm");
    let demo = concat!(env!("CARGO_MANIFEST_DIR"), "/../../demo.scene");
    let o = run(&[
        "scene",
        "--file",
        demo,
        "--design",
        "binomial16",
        "--pgm",
        path(&pgm),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let bytes = fs::read(&pgm).unwrap();
    assert!(bytes.starts_with(b"P5\n501 127\n255\n"));
    let report = stdout(&o);
    let targets: Vec<_> = report.lines().skip(1).map(fields).collect();
    assert_eq!(targets.len(), 5);
    for t in &targets {
        assert_eq!(t["visible"], "true");
    }
    let weak = &targets[3];
    assert_eq!(weak["delay_bin"], "8");
    assert_eq!(weak["peak_db"], "-30.00");
}

#[test]
fn scene_rejects_targets_off_the_grid() {
    let dir = workdir("scene_bad");
    let file = dir.join("bad.scene");
    fs::write(&file, "0 0 0\n5 0.9 -10\n").unwrap();
    let o = run(&[
        "scene",
        "--file",
        path(&file),
        "--design",
        "ptm16",
        "--pgm",
        path(&dir.join("x.pgm")),
    ]);
    assert_eq!(o.status.code(), Some(2));
}
