use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use dqsync::bench::{align, evaluate};
use dqsync_cli::format::{parse_problem, print_problem};

fn dqsync(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dqsync")).args(args).env_remove("DQSYNC_THREADS").output().unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

fn p(dir: &Path, name: &str) -> String {
    dir.join(name).to_str().unwrap().to_string()
}

fn generate(dir: &Path, name: &str, extra: &[&str]) -> String {
    let out = p(dir, name);
    let mut args = vec!["generate", "--out", &out];
    args.extend_from_slice(extra);
    let o = dqsync(&args);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    out
}

fn count(text: &str, tag: &str) -> usize {
    text.lines().filter(|l| l.split_whitespace().next() == Some(tag)).count()
}

#[test]
fn generate_two_nodes() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["--n", "2", "--p", "1", "--q", "1", "--sigma-r", "0", "--sigma-t", "0", "--seed", "7"];
    let a = fs::read_to_string(generate(dir.path(), "a.txt", &args)).unwrap();
    assert!(a.starts_with("dqsync-problem v1 n=2\n"));
    assert_eq!((count(&a, "E"), count(&a, "G")), (1, 2));
    let b = fs::read_to_string(generate(dir.path(), "b.txt", &args)).unwrap();
    assert_eq!(a, b);
    let c = fs::read_to_string(generate(dir.path(), "c.txt", &["--n", "6", "--p", "0"])).unwrap();
    assert_eq!((count(&c, "E"), count(&c, "G")), (0, 6));
}

#[test]
fn problem_files_round_trip_exactly() {
    let dir = tempfile::tempdir().unwrap();
    for seed in 0..20 {
        let s = seed.to_string();
        let path = generate(dir.path(), "r.txt", &["--n", "7", "--p", "0.6", "--q", "0.8", "--sigma-r", "5", "--sigma-t", "0.1", "--seed", &s]);
        let text = fs::read_to_string(path).unwrap();
        let prob = parse_problem(&text).unwrap();
        assert_eq!(print_problem(&prob), text);
        assert_eq!(parse_problem(&print_problem(&prob)).unwrap(), prob);
    }
}

fn solve(dir: &Path, input: &str, method: &str, name: &str) -> (i32, PathBuf) {
    let out = p(dir, name);
    let o = dqsync(&["solve", "--in", input, "--method", method, "--out", &out]);
    (code(&o), PathBuf::from(out))
}

#[test]
fn noiseless_solve_and_evaluate() {
    let dir = tempfile::tempdir().unwrap();
    let prob = generate(dir.path(), "p.txt", &["--n", "12", "--p", "0.5", "--seed", "3"]);
    let truth = parse_problem(&fs::read_to_string(&prob).unwrap()).unwrap();
    let truth = truth.ground_truth().unwrap();
    let mut ests = Vec::new();
    for m in ["dq", "mat"] {
        let (c, est) = solve(dir.path(), &prob, m, &format!("{m}.txt"));
        assert_eq!(c, 0);
        let o = dqsync(&["evaluate", "--problem", &prob, "--estimate", est.to_str().unwrap()]);
        assert_eq!(code(&o), 0);
        let mut rdr = csv::Reader::from_reader(&o.stdout[..]);
        let row: Vec<f64> = rdr.records().next().unwrap().unwrap().iter().map(|f| f.parse().unwrap()).collect();
        assert_eq!(row.len(), 6);
        assert!(row.iter().all(|&e| e < 1e-6), "{m}: {row:?}");
        let e = parse_problem(&fs::read_to_string(est).unwrap()).unwrap();
        assert_eq!(e.n(), 12);
        assert!(e.edges().is_empty());
        ests.push(e.ground_truth().unwrap().to_vec());
        let (_, aligned) = align(truth, ests.last().unwrap()).unwrap();
        assert!(evaluate(truth, &aligned).unwrap().rot_max < 1e-6);
    }
    let (_, aligned) = align(&ests[0], &ests[1]).unwrap();
    let r = evaluate(&ests[0], &aligned).unwrap();
    assert!(r.rot_max < 1e-6 && r.trans_max < 1e-6);
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    // 2: disconnected, no output file
    let disc = generate(d, "disc.txt", &["--n", "5", "--p", "0"]);
    for m in ["dq", "mat"] {
        let (c, out) = solve(d, &disc, m, "never.txt");
        assert_eq!(c, 2);
        assert!(!out.exists());
    }
    // 3: iteration cap hit; the estimate is still written
    let noisy = generate(d, "noisy.txt", &["--n", "20", "--sigma-r", "10", "--seed", "2"]);
    let out = p(d, "capped.txt");
    let o = dqsync(&["solve", "--in", &noisy, "--out", &out, "--max-iters", "1"]);
    assert_eq!(code(&o), 3);
    assert!(Path::new(&out).exists());
    // 1: usage
    for args in [
        vec!["bogus"],
        vec!["generate", "--n", "3"],
        vec!["generate", "--n", "3", "--p", "1.5", "--out", "x.txt"],
        vec!["solve", "--in", &noisy, "--method", "svd", "--out", "x.txt"],
        vec!["experiment", "--n", "5", "--sweep", "sigma-r=1:2", "--out", "x.csv"],
        vec!["experiment", "--n", "5", "--sweep", "sigma-r=1:2:1", "--sigma-r", "3", "--out", "x.csv"],
        vec!["experiment", "--n", "5", "--sweep", "sigma-r=1:2:1", "--sweep", "q=0.5:1:0.1", "--out", "x.csv"],
    ] {
        assert_eq!(code(&dqsync(&args)), 1, "{args:?}");
    }
    // 1: malformed input names the line
    let bad = p(d, "bad.txt");
    fs::write(&bad, "dqsync-problem v1 n=2\n# comment\nE 1 2 1 0 0 0 nope 0 0\n").unwrap();
    let o = dqsync(&["solve", "--in", &bad, "--out", &p(d, "x.txt")]);
    assert_eq!(code(&o), 1);
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 3"));
    assert_eq!(code(&dqsync(&["--help"])), 0);
}

fn experiment(d: &Path, name: &str, args: &[&str], threads: Option<&str>) -> (String, String) {
    let out = p(d, name);
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_dqsync"));
    cmd.arg("experiment").args(args).args(["--out", &out]).env_remove("DQSYNC_THREADS");
    if let Some(t) = threads {
        cmd.env("DQSYNC_THREADS", t);
    }
    let o = cmd.output().unwrap();
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let summary = dqsync_cli::summary_path(Path::new(&out));
    (fs::read_to_string(&out).unwrap(), fs::read_to_string(summary).unwrap())
}

#[test]
fn noiseless_experiment_rows() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["--n", "10", "--repeats", "2", "--seed", "1", "--method", "both", "--p", "1", "--q", "1", "--sigma-r", "0", "--sigma-t", "0"];
    let (rows, summary) = experiment(dir.path(), "e.csv", &args, None);
    let mut rdr = csv::Reader::from_reader(rows.as_bytes());
    let recs: Vec<csv::StringRecord> = rdr.records().map(Result::unwrap).collect();
    assert_eq!(recs.len(), 4);
    for r in &recs {
        assert_eq!(&r[17], "ok");
        for k in 8..14 {
            assert!(r[k].parse::<f64>().unwrap() < 1e-6);
        }
    }
    assert_eq!(summary.lines().count(), 3);
}

#[test]
fn golden_header_and_seeded_run() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["--n", "6", "--repeats", "2", "--seed", "2024", "--sweep", "sigma-r=1:2:1", "--sigma-t", "0.05"];
    let (rows, summary) = experiment(dir.path(), "g.csv", &args, None);
    let golden = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden");
    assert_eq!(rows, fs::read_to_string(golden.join("seeded_2x2.csv")).unwrap());
    assert_eq!(summary, fs::read_to_string(golden.join("seeded_2x2-summary.csv")).unwrap());
    assert_eq!(
        rows.lines().next().unwrap(),
        "method,n,p,q,sigma_r_deg,sigma_t,repeat,seed,rot_err_mean,rot_err_min,rot_err_max,\
         trans_err_mean,trans_err_min,trans_err_max,iterations,residual,runtime_s,status"
    );
}

#[test]
fn experiment_is_byte_identical_across_threads() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let base = ["--n", "12", "--repeats", "3", "--seed", "5", "--p", "0.2,0.6", "--q", "0.9", "--sweep", "sigma-r=0:4:2", "--sigma-t", "0.02"];
    let one = experiment(d, "a.csv", &base, Some("1"));
    let env4 = experiment(d, "b.csv", &base, Some("4"));
    let mut flag = base.to_vec();
    flag.extend(["--threads", "3"]);
    let flag3 = experiment(d, "c.csv", &flag, None);
    let again = experiment(d, "d.csv", &base, Some("1"));
    assert_eq!(one, env4);
    assert_eq!(one, flag3);
    assert_eq!(one, again);
    assert_eq!(one.0.lines().count(), 1 + 2 * 3 * 3 * 2);
}

#[test]
fn two_p_by_twenty_sigma_sweep_row_count() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["--n", "8", "--repeats", "2", "--p", "0.05,0.3", "--q", "1", "--sweep", "sigma-r=1:20:1", "--sigma-t", "0"];
    let (rows, summary) = experiment(dir.path(), "f.csv", &args, None);
    for m in ["dq", "mat"] {
        assert_eq!(rows.lines().filter(|l| l.starts_with(&format!("{m},"))).count(), 2 * 20 * 2);
        assert_eq!(summary.lines().filter(|l| l.starts_with(&format!("{m},"))).count(), 2 * 20);
    }
}
