use std::fs;
use std::process::Command;

use genericity::cli::{run_with_io, CacheEntry, RunSpec};

fn run(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("genericity").chain(args.iter().copied());
    let code = run_with_io(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

/// Per-class counts of `{ad - bc = 1, |a|+|b|+|c|+|d| <= r}` by scanning
/// entries and classifying through the trace.
fn scan_counts(r: i64) -> (u64, u64, u64) {
    let (mut total, mut periodic, mut reducible) = (0, 0, 0);
    for a in -r..=r {
        for b in -r..=r {
            for c in -r..=r {
                for d in -r..=r {
                    if a.abs() + b.abs() + c.abs() + d.abs() > r || a * d - b * c != 1 {
                        continue;
                    }
                    total += 1;
                    let t = (a + d).abs();
                    if b == 0 && c == 0 || t < 2 {
                        periodic += 1;
                    } else if t == 2 {
                        reducible += 1;
                    }
                }
            }
        }
    }
    (total, periodic, reducible)
}

#[test]
fn torus_density_csv_matches_entry_scan() {
    let (code, out, _) = run(&["density", "--model", "torus", "--grid", "6,12,20", "--format", "csv"]);
    assert_eq!(code, 0);
    let mut lines = out.lines();
    assert_eq!(lines.next(), Some("L,total,nonpa,periodic,reducible,fraction"));
    for (line, l) in lines.zip([6, 12, 20]) {
        let (total, periodic, reducible) = scan_counts(l);
        let nonpa = periodic + reducible;
        let expected = format!("{l},{total},{nonpa},{periodic},{reducible},{}", nonpa as f64 / total as f64);
        assert_eq!(line, expected);
    }
}

#[test]
fn json_mirrors_csv() {
    let (_, csv, _) = run(&["density", "--grid", "5:20:x2"]);
    let (_, json, _) = run(&["density", "--grid", "5:20:x2", "--format", "json"]);
    let rows: Vec<serde_json::Map<String, serde_json::Value>> = serde_json::from_str(&json).unwrap();
    let mut lines = csv.lines();
    let header: Vec<&str> = lines.next().unwrap().split(',').collect();
    for (row, line) in rows.iter().zip(lines) {
        let keys: Vec<&str> = row.keys().map(String::as_str).collect();
        let mut sorted_header = header.clone();
        sorted_header.sort_unstable();
        let mut sorted_keys = keys.clone();
        sorted_keys.sort_unstable();
        assert_eq!(sorted_keys, sorted_header);
        for (h, v) in header.iter().zip(line.split(',')) {
            assert_eq!(row[*h].to_string(), v, "{h}");
        }
    }
    assert_eq!(rows.len(), 3);
}

#[test]
fn classify_labels_and_exit_codes() {
    assert_eq!(run(&["classify", "--matrix", "1,99,0,1"]), (0, "reducible\n".into(), String::new()));
    assert_eq!(run(&["classify", "--matrix", "2,1,1,1"]).1, "pseudo-anosov\n");
    assert_eq!(run(&["classify", "--matrix", "0,-1,1,0"]).1, "periodic\n");
    let (code, out, err) = run(&["classify", "--matrix", "1,0,0,2"]);
    assert_eq!((code, out.as_str()), (2, ""));
    assert!(err.contains("determinant"));
    assert_eq!(run(&["classify", "--matrix", "1,2,3"]).0, 2);
    assert_eq!(run(&["classify"]).0, 2);
    assert_eq!(run(&["no-such-command"]).0, 2);
    assert_eq!(run(&["density", "--grid", "10,5"]).0, 2);
    assert_eq!(run(&["--help"]).0, 0);
    let (_, csv, _) = run(&["classify", "--matrix", "2,1,1,1", "--format", "csv"]);
    assert!(csv.starts_with("kind,order,dilatation\npseudo-anosov,,2.618033988749"));
}

#[test]
fn engine_words_classify_like_matrices() {
    assert_eq!(run(&["classify", "--surface", "1,1", "--word", "aB"]).1, "pseudo-anosov\n");
    assert_eq!(run(&["classify", "--surface", "1,1", "--word", "a"]).1, "reducible\n");
    assert_eq!(run(&["classify", "--surface", "1,1", "--word", "ab"]).1, "periodic\n");
    assert_eq!(run(&["classify", "--surface", "1,1", "--word", "q"]).0, 2);
    assert_eq!(run(&["classify", "--word", "a"]).0, 2);
}

#[test]
fn budget_exhaustion_flags_partial_output() {
    let (code, out, err) = run(&[
        "density", "--model", "engine", "--surface", "1,2", "--grid", "9,18", "--max-nodes", "50",
    ]);
    assert_eq!(code, 3);
    assert!(err.contains("budget"));
    let last = out.lines().last().unwrap();
    assert!(last.ends_with(",false"), "{out}");
    assert_eq!(run(&["isolation", "--k", "9", "--radius", "5"]).0, 3);
}

#[test]
fn cache_hits_are_byte_identical_and_corruption_recomputes() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().to_str().unwrap();
    let args = ["density", "--grid", "10:40:x2", "--cache", cache];
    let (code, first, _) = run(&args);
    assert_eq!(code, 0);
    let files: Vec<_> = fs::read_dir(dir.path()).unwrap().map(|e| e.unwrap().path()).collect();
    assert_eq!(files.len(), 1);
    let stored = fs::read_to_string(&files[0]).unwrap();
    assert!(stored.starts_with("genericity-cache 1\nlibrary "));
    assert_eq!(run(&args).1, first);

    // A tampered payload fails its checksum and is recomputed.
    fs::write(&files[0], stored.replace("10,", "11,")).unwrap();
    assert_eq!(run(&args).1, first);
    assert_eq!(fs::read_to_string(&files[0]).unwrap(), stored);

    // The cache is keyed by content, not by output paths or threads.
    let out_path = dir.path().join("o.csv");
    let (code, stdout, _) = run(&[&args[..], &["--threads", "2", "--out", out_path.to_str().unwrap()]].concat());
    assert_eq!((code, stdout.as_str()), (0, ""));
    assert_eq!(fs::read_to_string(out_path).unwrap(), first);
    assert_eq!(fs::read_dir(dir.path()).unwrap().count(), 2);
}

#[test]
fn stored_entry_matches_the_hash_of_the_spec() {
    let dir = tempfile::tempdir().unwrap();
    run(&["multicurves", "--grid", "1:5:+1", "--cache", dir.path().to_str().unwrap()]);
    let path = fs::read_dir(dir.path()).unwrap().next().unwrap().unwrap().path();
    let hash = path.file_stem().unwrap().to_str().unwrap().to_string();
    let entry = CacheEntry::read(dir.path(), &hash).unwrap();
    assert_eq!(entry.payload[0], "L,count");
    assert_eq!(entry.payload[1..], ["1,2", "2,6", "3,12", "4,20", "5,30"]);
}

#[test]
fn plot_data_files() {
    let dir = tempfile::tempdir().unwrap();
    let (code, _, _) = run(&["density", "--grid", "8,16", "--plot-dir", dir.path().to_str().unwrap()]);
    assert_eq!(code, 0);
    let fr = fs::read_to_string(dir.path().join("fraction_vs_L.csv")).unwrap();
    let ll = fs::read_to_string(dir.path().join("loglog_counts.csv")).unwrap();
    assert_eq!(fr.lines().count(), 3);
    assert!(fr.starts_with("L,fraction\n8,"));
    let (total, ..) = scan_counts(16);
    let last: Vec<f64> = ll.lines().last().unwrap().split(',').map(|x| x.parse().unwrap()).collect();
    assert!((last[0] - 16f64.ln()).abs() < 1e-12);
    assert!((last[1] - (total as f64).ln()).abs() < 1e-12);
}

#[test]
fn thread_count_does_not_change_output() {
    let one = run(&["density", "--grid", "20:80:x2", "--threads", "1"]).1;
    let four = run(&["density", "--grid", "20:80:x2", "--threads", "4"]).1;
    assert_eq!(one, four);
    let one = run(&["ball", "--model", "engine", "--surface", "0,4", "--radius", "16", "--threads", "1"]).1;
    let four = run(&["ball", "--model", "engine", "--surface", "0,4", "--radius", "16", "--threads", "4"]).1;
    assert_eq!(one, four);
    assert_eq!(run(&["density", "--threads", "0"]).0, 2);
}

#[test]
fn exponents_of_ball_and_multicurve_counts() {
    for counts in ["ball", "multicurves"] {
        let (code, out, _) = run(&["exponent", "--counts", counts]);
        assert_eq!(code, 0);
        let row = out.lines().nth(1).unwrap();
        let slope: f64 = row.split(',').next().unwrap().parse().unwrap();
        assert!((slope - 2.0).abs() < 0.01, "{counts}: {out}");
    }
}

#[test]
fn torus_ball_listing_matches_scan() {
    let (code, out, _) = run(&["ball", "--radius", "7"]);
    assert_eq!(code, 0);
    let (total, periodic, reducible) = scan_counts(7);
    let rows: Vec<&str> = out.lines().skip(1).collect();
    assert_eq!(rows.len() as u64, total);
    assert_eq!(rows.iter().filter(|r| r.ends_with(",periodic")).count() as u64, periodic);
    assert_eq!(rows.iter().filter(|r| r.ends_with(",reducible")).count() as u64, reducible);
}

#[test]
fn rho_norm_with_standard_pair_is_l1() {
    let l1 = run(&["density", "--grid", "5:40:x2"]).1;
    let rho = run(&["density", "--grid", "5:40:x2", "--norm", "rho"]).1;
    assert_eq!(l1, rho);
    assert_eq!(run(&["density", "--sigma", "1,0"]).0, 2);
    assert_eq!(run(&["density", "--norm", "rho", "--sigma", "1,0"]).0, 2);
}

#[test]
fn run_spec_json_is_stable() {
    let spec = RunSpec::from_json(
        r#"{"command":{"command":"density","model":{"model":"torus","norm":{"norm":"l1"}},"grid":[5,10]},
            "format":"csv","out":null,"plot_dir":null,"cache":null,"threads":null}"#,
    )
    .unwrap();
    let text = spec.to_json();
    assert_eq!(RunSpec::from_json(&text).unwrap().to_json(), text);
}

#[test]
fn binary_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_genericity");
    let ok = Command::new(bin).args(["classify", "--matrix", "1,99,0,1"]).output().unwrap();
    assert_eq!(ok.status.code(), Some(0));
    assert_eq!(String::from_utf8_lossy(&ok.stdout), "reducible\n");
    let bad = Command::new(bin).args(["classify", "--matrix", "2,0,0,1"]).output().unwrap();
    assert_eq!(bad.status.code(), Some(2));
    let env_cache = tempfile::tempdir().unwrap();
    let run = Command::new(bin)
        .args(["multicurves", "--grid", "3"])
        .env("GENERICITY_CACHE", env_cache.path())
        .output()
        .unwrap();
    assert_eq!(run.status.code(), Some(0));
    assert_eq!(fs::read_dir(env_cache.path()).unwrap().count(), 1);
}
