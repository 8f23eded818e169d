//! Acceptance criteria 1–12, one pass/fail line each, plus the command-line
//! examples. Numerical tolerances are pinned in `invosc::validation`.

use std::process::{Command, Output};
use std::time::{Duration, Instant};

use invosc::validation::{run_criterion, Check};

/// Wall-clock budgets for the timed criteria.
const RUNTIME_LIMITS: [(u8, Duration); 3] = [
    (1, Duration::from_secs(5)),
    (2, Duration::from_secs(30)),
    (8, Duration::from_secs(60)),
];

fn invosc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_invosc"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(args: &[&str]) -> String {
    let out = invosc(args);
    assert!(
        out.status.success(),
        "{args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).expect("utf-8 output")
}

/// Data rows as numbers, skipping the metadata and header lines.
fn table(csv: &str) -> (Vec<String>, Vec<Vec<f64>>) {
    let mut lines = csv.lines();
    assert!(lines.next().expect("metadata line").starts_with('#'));
    let header = lines
        .next()
        .expect("header")
        .split(',')
        .map(str::to_string)
        .collect();
    let rows = lines
        .map(|l| l.split(',').map(|v| v.parse().expect("number")).collect())
        .collect();
    (header, rows)
}

fn column(header: &[String], name: &str) -> usize {
    header
        .iter()
        .position(|h| h == name)
        .unwrap_or_else(|| panic!("no column {name}"))
}

fn describe(c: &Check) -> String {
    format!(
        "{}={:.6e} (expected {:.6e}, tol {:.1e}){}",
        c.name,
        c.observed,
        c.expected,
        c.tolerance,
        if c.passed() { "" } else { " FAILED" }
    )
}

/// Commands whose output must not change between runs.
const DETERMINISM_RUNS: [&[&str]; 7] = [
    &["validate"],
    &[
        "simulate",
        "--profile",
        "power",
        "--n",
        "2",
        "--G",
        "50",
        "--initial",
        "fock:0",
        "--t0",
        "-1",
        "--t1",
        "2",
        "--steps",
        "600",
        "--oracle",
    ],
    &[
        "simulate",
        "--profile",
        "jump",
        "--rho",
        "2",
        "--initial",
        "gaussian:0.8,0.9,0.3,0.2,0.1",
        "--t0",
        "-0.5",
        "--t1",
        "2",
        "--steps",
        "500",
    ],
    &[
        "distribution",
        "--n",
        "0,4,8",
        "--rho",
        "1",
        "--emin",
        "0",
        "--emax",
        "12",
        "--points",
        "600",
    ],
    &[
        "distribution",
        "--n",
        "8",
        "--rho",
        "0.5,1,2",
        "--emin",
        "-12",
        "--emax",
        "12",
        "--points",
        "960",
    ],
    &["ratio", "--G", "1,10,50,100", "--t", "0.5"],
    &["fluctuations", "--fock", "0,1,2"],
];

fn determinism() -> (bool, String) {
    let mut mismatched = Vec::new();
    for args in DETERMINISM_RUNS {
        let a = invosc(args);
        let b = invosc(args);
        if a.stdout != b.stdout || a.status.code() != b.status.code() {
            mismatched.push(args[0]);
        }
    }
    let detail = if mismatched.is_empty() {
        format!("{} commands byte-identical", DETERMINISM_RUNS.len())
    } else {
        format!("differing: {mismatched:?}")
    };
    (mismatched.is_empty(), detail)
}

#[test]
fn acceptance_criteria() {
    let mut failed = Vec::new();
    let mut report = Vec::new();
    for criterion in 1..=11u8 {
        let start = Instant::now();
        let checks = run_criterion(criterion);
        let elapsed = start.elapsed();
        let (ok, detail) = match &checks {
            Ok(v) => (
                !v.is_empty() && v.iter().all(Check::passed),
                v.iter().map(describe).collect::<Vec<_>>().join("; "),
            ),
            Err(e) => (false, format!("error: {e}")),
        };
        let limit = RUNTIME_LIMITS
            .iter()
            .find(|(c, _)| *c == criterion)
            .map(|(_, d)| *d);
        let in_time = limit.is_none_or(|d| elapsed <= d);
        let budget = limit.map_or(String::new(), |d| format!(" / {d:?}"));
        let pass = ok && in_time;
        if !pass {
            failed.push(criterion);
        }
        report.push(format!(
            "criterion {criterion:2}: {} [{elapsed:.2?}{budget}] {detail}",
            if pass { "PASS" } else { "FAIL" }
        ));
    }
    let (ok, detail) = determinism();
    if !ok {
        failed.push(12);
    }
    report.push(format!(
        "criterion 12: {} {detail}",
        if ok { "PASS" } else { "FAIL" }
    ));
    for line in &report {
        println!("{line}");
    }
    assert!(failed.is_empty(), "failing criteria: {failed:?}");
}

#[test]
fn simulate_power_starts_at_unit_ratio() {
    let csv = stdout(&[
        "simulate",
        "--profile",
        "power",
        "--n",
        "2",
        "--G",
        "50",
        "--initial",
        "fock:0",
        "--t0",
        "-1",
        "--t1",
        "2",
        "--steps",
        "600",
    ]);
    assert_eq!(csv.lines().count(), 2 + 600);
    assert!(!csv.contains('\r'));
    let (header, rows) = table(&csv);
    assert_eq!(
        header[..11].join(","),
        "t,eps_re,eps_im,epsdot_re,epsdot_im,x2,p2,xp,energy,ratio,wronskian_abs_err"
    );
    let ratio = column(&header, "ratio");
    assert!((rows[0][ratio] - 1.0).abs() < 1e-12);
    assert!(rows.iter().flatten().all(|v| v.is_finite()));
}

#[test]
fn simulate_jump_to_unit_rate_has_zero_energy() {
    let args = [
        "simulate",
        "--profile",
        "jump",
        "--rho",
        "1",
        "--initial",
        "fock:0",
        "--t0",
        "-0.5",
        "--t1",
        "2",
        "--steps",
        "500",
        "--oracle",
    ];
    let (header, rows) = table(&stdout(&args));
    let (t, energy, dev) = (
        column(&header, "t"),
        column(&header, "energy"),
        column(&header, "oracle_dev"),
    );
    for r in rows.iter().filter(|r| r[t] >= 0.0) {
        assert!(r[energy].abs() < 1e-12, "E = {} at t = {}", r[energy], r[t]);
    }
    let worst = rows.iter().map(|r| r[dev]).fold(0.0, f64::max);
    assert!(worst <= 1e-6, "oracle deviation {worst}");
}

#[test]
fn physical_units_rescale_output() {
    let internal = table(&stdout(&["simulate", "--G", "50", "--steps", "5"])).1;
    let physical = table(&stdout(&[
        "simulate", "--omega0", "25", "--tau", "2", "--steps", "5",
    ]))
    .1;
    for (a, b) in internal.iter().zip(&physical) {
        assert_eq!(b[0], 2.0 * a[0]);
        assert!((b[5] - 2.0 * a[5]).abs() <= 1e-15 * b[5].abs());
        assert!((b[9] - a[9]).abs() <= 1e-15 * a[9].abs().max(1.0));
    }
}

#[test]
fn distribution_figures() {
    let (header, rows) = table(&stdout(&[
        "distribution",
        "--n",
        "0,4,8",
        "--rho",
        "1",
        "--emin",
        "0",
        "--emax",
        "12",
        "--points",
        "600",
    ]));
    assert_eq!(header, ["e_tilde", "P_n0_rho1", "P_n4_rho1", "P_n8_rho1"]);
    assert_eq!(rows.len(), 600);
    // P₀ decreases monotonically on Ẽ ≥ 0
    assert!(rows.windows(2).all(|w| w[1][1] < w[0][1]));
    // interior near-zero dips: one for P₄, two for P₈
    for (col, dips) in [(2, 1), (3, 2)] {
        let peak = rows.iter().map(|r| r[col]).fold(0.0, f64::max);
        let count = rows
            .windows(3)
            .filter(|w| w[1][col] < w[0][col] && w[1][col] <= w[2][col] && w[1][col] < 1e-3 * peak)
            .count();
        assert_eq!(count, dips, "column {}", header[col]);
    }

    let (_, rows) = table(&stdout(&[
        "distribution",
        "--n",
        "8",
        "--rho",
        "0.5,1,2",
        "--emin",
        "-12",
        "--emax",
        "12",
        "--points",
        "960",
    ]));
    let first_moment = |col: usize| {
        let mass: f64 = rows.iter().map(|r| r[col]).sum();
        rows.iter().map(|r| r[0] * r[col]).sum::<f64>() / mass
    };
    // the window cuts the tails, so only the sign and the mirror symmetry are sharp
    assert!(first_moment(3) < -2.0, "ρ = 2 mass sits at negative Ẽ");
    assert!((first_moment(1) + first_moment(3)).abs() < 1e-9);
    assert!(first_moment(2).abs() < 1e-9);

    let (_, rows) = table(&stdout(&[
        "distribution",
        "--n",
        "2",
        "--rho",
        "1",
        "--emin",
        "-1",
        "--emax",
        "1",
        "--points",
        "3",
    ]));
    assert_eq!(rows[1], [0.0, 0.0]);
}

#[test]
fn ratio_lists_applicable_laws() {
    let csv = stdout(&["ratio", "--G", "50", "--t", "0"]);
    let lines: Vec<&str> = csv.lines().skip(2).collect();
    let get = |q: &str| -> f64 {
        let l = lines
            .iter()
            .find(|l| l.split(',').nth(2) == Some(q))
            .unwrap_or_else(|| panic!("no {q} row"));
        l.split(',').nth(3).unwrap().parse().unwrap()
    };
    assert!((get("exact") / get("kfunction") - 1.0).abs() < 1e-8);
    assert!((get("exact") / get("adiabatic_crossing") - 1.0).abs() < 0.02);

    let csv = stdout(&["ratio", "--profile", "revival", "--G", "100", "--t", "1.5"]);
    assert!(csv.contains(",adiabatic_revival,"));
    assert!(!csv.contains(",kfunction,"));
}

#[test]
fn validate_reports_required_checks() {
    let out = invosc(&["validate"]);
    let text = String::from_utf8(out.stdout).unwrap();
    let (header, _) = {
        let mut l = text.lines();
        l.next();
        (l.next().unwrap().to_string(), ())
    };
    assert!(header.starts_with("name,expected,observed,tolerance,status"));
    let row = |name: &str| -> Vec<String> {
        text.lines()
            .find(|l| l.starts_with(&format!("{name},")))
            .unwrap_or_else(|| panic!("no check {name}"))
            .split(',')
            .map(str::to_string)
            .collect()
    };
    let revival = row("revival_ratio_n2");
    assert_eq!(revival[1].parse::<f64>().unwrap(), 3.0);
    assert_eq!(revival[3].parse::<f64>().unwrap(), 0.02);
    assert_eq!(row("sigma_ratio_n2_N0")[1].parse::<f64>().unwrap(), 16.0);
    let norm = row("p0_norm_rho1");
    assert_eq!(norm[1].parse::<f64>().unwrap(), 1.0);
    assert_eq!(norm[3].parse::<f64>().unwrap(), 1e-8);
    // exit status agrees with the report
    let all_pass = text.lines().skip(2).all(|l| l.contains(",pass,"));
    assert_eq!(out.status.code(), Some(if all_pass { 0 } else { 1 }));
}

#[test]
fn exit_codes() {
    assert_eq!(invosc(&["simulate", "--bogus"]).status.code(), Some(2));
    assert_eq!(invosc(&[]).status.code(), Some(2));
    assert_eq!(
        invosc(&["simulate", "--profile", "power"]).status.code(),
        Some(2)
    );
    assert_eq!(
        invosc(&[
            "simulate",
            "--G",
            "5",
            "--initial",
            "gaussian:0.1,0.1,0,0,0"
        ])
        .status
        .code(),
        Some(2)
    );
    assert_eq!(
        invosc(&["simulate", "--G", "5", "--oracle", "--tol", "1e-17"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        invosc(&["distribution", "--n", "500"]).status.code(),
        Some(2)
    );
    assert_eq!(
        invosc(&["simulate", "--G", "1e200", "--t1", "1", "--steps", "3"])
            .status
            .code(),
        Some(3)
    );
    assert_eq!(invosc(&["--help"]).status.code(), Some(0));
}
