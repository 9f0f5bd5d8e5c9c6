use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn fracwave(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fracwave"))
        .args(args)
        .current_dir(dir)
        .env_remove("FRACWAVE_THREADS")
        .output()
        .expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

const SMALL: &str =
    "variant = fnls\nalpha = 1.5\nmax_mode = 8\ndt = 1e-3\nt_final = 0.5\nsample_every = 1\nnorms = 1\n";

#[test]
fn phi_prints_supremum() {
    let dir = tempfile::tempdir().unwrap();
    let o = fracwave(&["verify", "phi", "--alpha", "1.5"], dir.path());
    assert_eq!(code(&o), 0);
    let text = String::from_utf8(o.stdout).unwrap();
    let row: Vec<&str> = text.lines().nth(1).unwrap().split(',').collect();
    let sup: f64 = row[1].parse().unwrap();
    assert!((sup - 2.0).abs() < 1e-6, "{sup}");
}

#[test]
fn usage_errors_exit_one() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(code(&fracwave(&["run", "--config", "missing.cfg"], dir.path())), 1);
    assert_eq!(
        code(&fracwave(&["run", "--config", "x", "--frobnicate"], dir.path())),
        1
    );
    assert_eq!(code(&fracwave(&["verify", "nonsense"], dir.path())), 1);
    assert_eq!(code(&fracwave(&[], dir.path())), 1);
    fs::write(dir.path().join("bad.cfg"), "variant = fnls\nmax_mode = 2\n").unwrap();
    assert_eq!(code(&fracwave(&["run", "--config", "bad.cfg"], dir.path())), 1);
    assert_eq!(code(&fracwave(&["--help"], dir.path())), 0);
    assert_eq!(code(&fracwave(&["--version"], dir.path())), 0);
}

#[test]
fn blowup_exits_two_with_partial_csv() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = "variant = halfwave\nmax_mode = 4\ndt = 0.1\nt_final = 1\ninit = explicit\ncoeffs = 2:1e200\noutput = blow.csv\n";
    fs::write(dir.path().join("blow.cfg"), cfg).unwrap();
    let o = fracwave(&["run", "--config", "blow.cfg"], dir.path());
    assert_eq!(code(&o), 2);
    let csv = fs::read_to_string(dir.path().join("blow.csv")).unwrap();
    assert!(csv.lines().last().unwrap().starts_with("# truncated at t = "));
}

#[test]
fn runs_are_byte_identical_and_fit() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("a.cfg"), SMALL).unwrap();
    for out in ["one.csv", "two.csv"] {
        assert_eq!(
            code(&fracwave(
                &["run", "--config", "a.cfg", "--out", out, "--seed", "5"],
                dir.path()
            )),
            0
        );
    }
    let one = fs::read(dir.path().join("one.csv")).unwrap();
    assert_eq!(one, fs::read(dir.path().join("two.csv")).unwrap());
    let stdout = fracwave(&["run", "--config", "a.cfg", "--seed", "5"], dir.path()).stdout;
    assert_eq!(stdout, one);

    let o = fracwave(&["fit", "one.csv", "--model", "power", "--s", "1"], dir.path());
    assert_eq!(code(&o), 0);
    let text = String::from_utf8(o.stdout).unwrap();
    assert!(text.starts_with("column,model,exponent"));
    assert!(text.lines().nth(1).unwrap().starts_with("hs_1,power,"));
    assert_eq!(code(&fracwave(&["fit", "one.csv", "--model", "cubic"], dir.path())), 1);
}

#[test]
fn parallel_sweep_matches_serial() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(
        dir.path().join("base.cfg"),
        SMALL.replace("t_final = 0.5", "t_final = 0.05"),
    )
    .unwrap();
    let sweep = |threads: &str, out: &str| {
        let args = [
            "sweep",
            "--alpha",
            "0.7:0.1:1.9",
            "--seeds",
            "0..8",
            "--config",
            "base.cfg",
            "--out",
            out,
            "--threads",
            threads,
        ];
        assert_eq!(code(&fracwave(&args, dir.path())), 0);
    };
    sweep("1", "serial");
    sweep("4", "parallel");
    let mut names: Vec<_> = fs::read_dir(dir.path().join("serial"))
        .unwrap()
        .map(|e| e.unwrap().file_name())
        .collect();
    names.sort();
    assert_eq!(names.len(), 13 * 8);
    assert!(names.iter().any(|n| n == "alpha_0.8_seed_7.csv"));
    for name in names {
        let a = fs::read(dir.path().join("serial").join(&name)).unwrap();
        let b = fs::read(dir.path().join("parallel").join(&name)).unwrap();
        assert_eq!(a, b, "{name:?}");
    }
}

#[test]
fn threads_default_from_environment() {
    let dir = tempfile::tempdir().unwrap();
    let o = Command::new(env!("CARGO_BIN_EXE_fracwave"))
        .args(["verify", "l1", "--members", "4"])
        .env("FRACWAVE_THREADS", "many")
        .current_dir(dir.path())
        .output()
        .unwrap();
    assert_eq!(code(&o), 1);
    let o = Command::new(env!("CARGO_BIN_EXE_fracwave"))
        .args(["verify", "hankel", "--members", "20"])
        .env("FRACWAVE_THREADS", "2")
        .current_dir(dir.path())
        .output()
        .unwrap();
    assert_eq!(code(&o), 0);
    assert_eq!(String::from_utf8(o.stdout).unwrap().lines().count(), 21);
}
