use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

fn satnr(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_satnr"))
        .args(args)
        .output()
        .expect("spawn satnr")
}

fn stdout(args: &[&str]) -> String {
    let out = satnr(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn scratch(name: &str) -> PathBuf {
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("cli");
    fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

fn csv_rows(text: &str) -> Vec<Vec<String>> {
    text.lines()
        .map(|l| l.split(',').map(str::to_string).collect())
        .collect()
}

#[test]
fn csv_output_is_byte_stable() {
    for args in [
        &["numerology", "--format", "csv"][..],
        &["impairments", "--format", "csv"],
        &["doppler-surface", "--format", "csv", "--elevation-step-deg", "5", "--error-step-m", "10000"],
        &["harq-sim", "--format", "csv", "--success", "0.4,0.8", "--seed", "3", "--duration-s", "2"],
        &["sweep", "--jobs", "4", "--vary", "processes=8,24", "--vary", "seed=1,2", "--", "harq-sim", "--success", "0.5", "--duration-s", "1"],
    ] {
        assert_eq!(stdout(args), stdout(args), "{args:?}");
    }
}

#[test]
fn numerology_columns() {
    let text = stdout(&["numerology", "--format", "csv"]);
    let rows = csv_rows(&text);
    assert_eq!(rows[0], ["scs_khz", "max_doppler_khz", "max_position_error_km"]);
    assert_eq!(rows.len(), 5);
    assert_eq!(rows[1][0], "15");
    assert_eq!(rows[1][1], "0.945");
}

#[test]
fn zero_altitude_gives_zero_round_trip() {
    let text = stdout(&["impairments", "--format", "csv", "--altitude-m", "0"]);
    let rows = csv_rows(&text);
    let rtt = rows[0].iter().position(|c| c == "round_trip_s").unwrap();
    assert!(rows[1..].iter().all(|r| r[rtt] == "0"));
}

#[test]
fn scenario_file_is_honoured() {
    let path = scratch("low.scenario");
    fs::write(&path, "# lower orbit\naltitude_m = 600e3\n").unwrap();
    let text = stdout(&["impairments", "--format", "csv", "--scenario", path.to_str().unwrap()]);
    let rows = csv_rows(&text);
    assert_eq!(rows[1][0], "600000");
    assert_eq!(rows[1][1], "0.00800554");
}

#[test]
fn exit_codes_separate_usage_config_and_findings() {
    assert_eq!(satnr(&["no-such-command"]).status.code(), Some(2));
    assert_eq!(satnr(&["numerology", "--max-index", "x"]).status.code(), Some(2));

    let bad = scratch("bad.scenario");
    fs::write(&bad, "altitude_m = -5\n").unwrap();
    assert_eq!(satnr(&["numerology", "--scenario", bad.to_str().unwrap()]).status.code(), Some(3));
    fs::write(&bad, "altitude = 5\n").unwrap();
    let out = satnr(&["numerology", "--scenario", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 1"));

    // multibit with one feedback bit is a configuration error
    let out = satnr(&["harq-sim", "--strategy", "multibit", "--feedback-bits", "1"]);
    assert_eq!(out.status.code(), Some(3));

    // infeasible verdicts are findings, not failures
    let text = stdout(&["ra-check", "--format", "csv"]);
    assert!(text.contains("rn_attach,false,"));
    assert_eq!(satnr(&["--help"]).status.code(), Some(0));
}

#[test]
fn satellite_flag_policy_clears_rar_window() {
    let rows = csv_rows(&stdout(&["ra-check", "--format", "csv", "--rar-policy", "satellite-flag"]));
    assert_eq!(rows[2][0], "rn_attach");
    assert_eq!(rows[2][2], "timing_advance");
    let rows = csv_rows(&stdout(&[
        "ra-check",
        "--format",
        "csv",
        "--rar-policy",
        "satellite-flag",
        "--satellite-link",
        "false",
    ]));
    assert_eq!(rows[2][2], "rar_window;timing_advance");
}

#[test]
fn gnss_ta_row_is_feasible_for_small_errors() {
    let rows = csv_rows(&stdout(&[
        "ra-check",
        "--format",
        "csv",
        "--rar-policy",
        "fixed-worst-case",
        "--gnss-position-error-m",
        "5000",
    ]));
    assert_eq!(rows[3][0], "rn_attach_gnss_ta");
    assert_eq!(rows[3][1], "true");
}

#[test]
fn event_log_format() {
    let path = scratch("events.csv");
    stdout(&[
        "harq-sim",
        "--processes",
        "2",
        "--success",
        "0.5",
        "--seed",
        "4",
        "--duration-s",
        "0.5",
        "--event-log",
        path.to_str().unwrap(),
    ]);
    let text = fs::read_to_string(&path).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("time_s,process_id,event,attempt,outcome"));
    assert_eq!(lines.next(), Some("0.000000000,0,tx,1,new"));
    for l in lines {
        let f: Vec<&str> = l.split(',').collect();
        assert_eq!(f.len(), 5, "{l}");
        assert!(["tx", "rx", "decode", "feedback"].contains(&f[2]), "{l}");
        assert!(f[1] == "0" || f[1] == "1", "{l}");
    }
}

#[test]
fn sweep_rows_sorted_by_inputs() {
    let text = stdout(&[
        "sweep",
        "--vary",
        "altitude_m=1.2e6,6e5",
        "--vary",
        "rar_window_s=0.02,0.01",
        "--",
        "ra-check",
    ]);
    let rows = csv_rows(&text);
    assert_eq!(rows[0][..3], ["altitude_m", "rar_window_s", "stage"]);
    let keys: Vec<(f64, f64)> = rows[1..]
        .iter()
        .map(|r| (r[0].parse().unwrap(), r[1].parse().unwrap()))
        .collect();
    assert_eq!(keys.len(), 8);
    assert!(keys.windows(2).all(|w| w[0] <= w[1]));
}

#[test]
fn sweep_range_syntax() {
    let text = stdout(&["sweep", "--vary", "min_elevation_rad=0.5:0.7:0.1", "--", "harq-dim", "--propagation-from-scenario"]);
    let rows = csv_rows(&text);
    assert_eq!(rows.len(), 4);
    assert_eq!(rows[0][0], "min_elevation_rad");
}

#[test]
fn harq_dim_text_names_process_count() {
    let text = stdout(&["harq-dim"]);
    assert!(text.contains("N_min = 24"), "{text}");
    let text = stdout(&["harq-dim", "--propagation-from-scenario"]);
    assert!(text.contains("N_min = 25"), "{text}");
}

#[test]
fn report_covers_every_analysis() {
    let text = stdout(&["report"]);
    for title in ["delay budget", "numerology", "random access", "HARQ dimensioning", "HARQ simulation"] {
        assert!(text.contains(&format!("== {title}")), "{title}");
    }
    assert!(text.contains("-- constants:"));
}
