//! End-to-end checks of the binary: reproducibility, exit codes, dry runs.

use std::fs;
use std::io::Write;
use std::path::Path;
use std::process::{Command, Output};

fn cupsim(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cupsim"))
        .args(args)
        .output()
        .expect("binary should run")
}

fn exit_code(out: &Output) -> i32 {
    out.status.code().expect("process should not be signalled")
}

/// Sorted (file name, bytes) pairs of a directory.
fn dir_bytes(dir: &Path) -> Vec<(String, Vec<u8>)> {
    let mut names: Vec<_> = fs::read_dir(dir)
        .unwrap()
        .map(|e| e.unwrap().file_name().into_string().unwrap())
        .collect();
    names.sort();
    names
        .into_iter()
        .map(|name| {
            let bytes = fs::read(dir.join(&name)).unwrap();
            (name, bytes)
        })
        .collect()
}

#[test]
fn batch_reruns_are_byte_identical() {
    let tmp = tempfile::tempdir().unwrap();
    let (a, b) = (tmp.path().join("a"), tmp.path().join("b"));
    for out_dir in [&a, &b] {
        let out = cupsim(&[
            "batch",
            "--format",
            "group-of-3",
            "--runs",
            "100",
            "--seed",
            "7",
            "--out",
            out_dir.to_str().unwrap(),
        ]);
        assert_eq!(exit_code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    }
    assert_eq!(dir_bytes(&a), dir_bytes(&b));
}

#[test]
fn serial_batches_write_the_same_files_as_parallel() {
    let tmp = tempfile::tempdir().unwrap();
    let (par, ser) = (tmp.path().join("par"), tmp.path().join("ser"));
    let base = [
        "batch",
        "--format",
        "double-elim-48",
        "--runs",
        "60",
        "--seed",
        "21",
        "--out",
    ];
    let mut parallel: Vec<&str> = base.to_vec();
    parallel.push(par.to_str().unwrap());
    let mut serial: Vec<&str> = base.to_vec();
    serial.push(ser.to_str().unwrap());
    serial.push("--serial");
    assert_eq!(exit_code(&cupsim(&parallel)), 0);
    assert_eq!(exit_code(&cupsim(&serial)), 0);
    assert_eq!(dir_bytes(&par), dir_bytes(&ser));
}

#[test]
fn simulate_reruns_match_on_stdout_and_files() {
    let tmp = tempfile::tempdir().unwrap();
    let (a, b) = (tmp.path().join("a"), tmp.path().join("b"));
    let run = |dir: &Path| {
        cupsim(&[
            "simulate",
            "--format",
            "double-elim-48",
            "--seed",
            "4242",
            "--run-index",
            "3",
            "--out",
            dir.to_str().unwrap(),
        ])
    };
    let (first, second) = (run(&a), run(&b));
    assert_eq!(exit_code(&first), 0);
    // File paths differ across runs, so compare only the simulation lines.
    let sim_lines = |out: &Output| {
        String::from_utf8_lossy(&out.stdout)
            .lines()
            .filter(|l| !l.starts_with("wrote "))
            .map(str::to_owned)
            .collect::<Vec<_>>()
    };
    assert_eq!(sim_lines(&first), sim_lines(&second));
    assert_eq!(dir_bytes(&a), dir_bytes(&b));
}

#[test]
fn unknown_format_is_a_usage_error() {
    let out = cupsim(&["plan", "--format", "quintuple-elim"]);
    assert_eq!(exit_code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("possible values"));
}

#[test]
fn missing_seed_is_a_usage_error() {
    let out = cupsim(&["batch", "--format", "group-of-3", "--runs", "5"]);
    assert_eq!(exit_code(&out), 2);
}

#[test]
fn bad_start_date_is_a_usage_error() {
    let out = cupsim(&[
        "schedule",
        "--format",
        "group-of-3",
        "--start-date",
        "June 15th",
    ]);
    assert_eq!(exit_code(&out), 2);
}

#[test]
fn missing_roster_is_an_io_error() {
    let tmp = tempfile::tempdir().unwrap();
    let out = cupsim(&[
        "simulate",
        "--format",
        "group-of-3",
        "--seed",
        "1",
        "--roster",
        tmp.path().join("absent.csv").to_str().unwrap(),
    ]);
    assert_eq!(exit_code(&out), 3);
}

#[test]
fn unwritable_output_directory_is_an_io_error() {
    let tmp = tempfile::tempdir().unwrap();
    let blocker = tmp.path().join("blocker");
    fs::write(&blocker, b"plain file").unwrap();
    let out = cupsim(&[
        "plan",
        "--format",
        "group-of-4",
        "--out",
        blocker.join("nested").to_str().unwrap(),
    ]);
    assert_eq!(exit_code(&out), 3);
}

#[test]
fn dry_run_lists_outputs_without_writing() {
    let tmp = tempfile::tempdir().unwrap();
    let dir = tmp.path().join("never-created");
    let out = cupsim(&[
        "batch",
        "--format",
        "group-of-3",
        "--runs",
        "5",
        "--seed",
        "3",
        "--dry-run",
        "--out",
        dir.to_str().unwrap(),
    ]);
    assert_eq!(exit_code(&out), 0);
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.contains("would write"));
    assert!(stdout.contains("summary.json"));
    assert!(!dir.exists());
}

#[test]
fn schedule_prints_a_duration_and_writes_a_calendar() {
    let tmp = tempfile::tempdir().unwrap();
    let out = cupsim(&[
        "schedule",
        "--format",
        "double-elim-48",
        "--max-per-day",
        "5",
        "--repechage-rest",
        "3",
        "--start-date",
        "2026-06-11",
        "--out",
        tmp.path().to_str().unwrap(),
    ]);
    assert_eq!(exit_code(&out), 0);
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.contains("96 fixtures over"), "{stdout}");
    let calendar = fs::read_to_string(tmp.path().join("calendar_double-elim-48.csv")).unwrap();
    assert!(calendar.starts_with("date,fixture_id,round_tag,bracket\n"));
    assert_eq!(calendar.lines().count(), 97);
    assert!(calendar.lines().nth(1).unwrap().starts_with("2026-06-11,"));
}

#[test]
fn capacity_sweep_writes_a_nonincreasing_duration_curve() {
    let tmp = tempfile::tempdir().unwrap();
    let out = cupsim(&[
        "schedule",
        "--format",
        "group-of-3",
        "--capacity-sweep",
        "2..8",
        "--out",
        tmp.path().to_str().unwrap(),
    ]);
    assert_eq!(exit_code(&out), 0);
    let curve = fs::read_to_string(tmp.path().join("fig6_duration_curve.csv")).unwrap();
    let durations: Vec<u32> = curve
        .lines()
        .skip(1)
        .map(|l| l.split(',').nth(1).unwrap().parse().unwrap())
        .collect();
    assert_eq!(durations.len(), 7);
    assert!(durations.windows(2).all(|w| w[1] <= w[0]), "{durations:?}");
}

#[test]
fn roster_files_are_accepted() {
    let tmp = tempfile::tempdir().unwrap();
    let roster = tmp.path().join("roster.csv");
    let mut file = fs::File::create(&roster).unwrap();
    writeln!(file, "id,name,fifa_rank").unwrap();
    for rank in 1..=48 {
        writeln!(file, "N{rank:02},Nation {rank},{rank}").unwrap();
    }
    drop(file);
    let out = cupsim(&[
        "simulate",
        "--format",
        "group-of-4",
        "--seed",
        "5",
        "--roster",
        roster.to_str().unwrap(),
        "--out",
        tmp.path().join("out").to_str().unwrap(),
    ]);
    assert_eq!(exit_code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.contains("N0"), "roster ids should appear in the log: {stdout}");
}

#[test]
fn plan_json_reports_the_right_fixture_count() {
    let tmp = tempfile::tempdir().unwrap();
    for (format, count) in [("group-of-3", 80), ("double-elim-48", 96), ("group-of-4", 104)] {
        let out = cupsim(&[
            "plan",
            "--format",
            format,
            "--out",
            tmp.path().to_str().unwrap(),
        ]);
        assert_eq!(exit_code(&out), 0);
        let json = fs::read_to_string(tmp.path().join(format!("plan_{format}.json"))).unwrap();
        assert!(json.contains(&format!("\"fixture_count\": {count}")), "{format}");
    }
}

#[cfg(unix)]
#[test]
fn a_closed_stdout_pipe_kills_the_process_quietly() {
    use std::io::Read;
    use std::os::unix::process::ExitStatusExt;
    use std::process::Stdio;

    let mut child = Command::new(env!("CARGO_BIN_EXE_cupsim"))
        .args(["batch", "--format", "group-of-3", "--runs", "2000", "--seed", "3", "--dry-run"])
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    // Closing the read end before the batch finishes makes the first print
    // raise SIGPIPE; the process must die on it rather than panic.
    drop(child.stdout.take());
    let status = child.wait().unwrap();
    let mut stderr = String::new();
    child.stderr.take().unwrap().read_to_string(&mut stderr).unwrap();
    assert!(!stderr.contains("panicked"), "broken pipe must not panic: {stderr}");
    assert_eq!(status.signal(), Some(libc::SIGPIPE), "{status:?}");
}
