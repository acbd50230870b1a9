use std::path::PathBuf;
use std::process::{Command as Process, Output};

use sumlab_cli::{
    build_report, default_n_grid, execute, exit_code, run_with_registry, Command, Family, Format,
    ModulusRange, RunConfig, EXIT_FAIL, EXIT_NUMERIC, EXIT_PASS, EXIT_USAGE,
};
use sumlab_core::identities::{NChoice, Registry};

fn sumlab(args: &[&str]) -> Output {
    Process::new(env!("CARGO_BIN_EXE_sumlab"))
        .args(args)
        .env_remove("SUMLAB_WORKERS")
        .output()
        .unwrap()
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn config(command: Command, format: Format) -> RunConfig {
    RunConfig {
        command,
        format,
        output: None,
        workers: 2,
    }
}

fn temp_path(name: &str) -> PathBuf {
    std::env::temp_dir().join(format!("sumlab-{}-{name}", std::process::id()))
}

#[test]
fn golden_corollary_json() {
    let out = sumlab(&[
        "verify",
        "--identity",
        "corollary1",
        "--pmin",
        "3",
        "--pmax",
        "7",
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(
        stdout(&out),
        concat!(
            r#"{"schema_version":"1","command":"verify","#,
            r#""config_echo":{"identity":"corollary1","min":3,"max":7,"n":["1","next-unit","-1"]},"#,
            r#""rows":[{"identity":"corollary1","p":3,"lhs":2,"rhs":2,"residual":0.0,"pass":true},"#,
            r#"{"identity":"corollary1","p":5,"lhs":2,"rhs":2,"residual":0.0,"pass":true},"#,
            r#"{"identity":"corollary1","p":7,"lhs":2,"rhs":2,"residual":0.0,"pass":true}],"#,
            r#""summary":{"pass":3,"fail":0,"skip":0,"max_residual":0.0}}"#,
            "\n"
        )
    );
}

#[test]
fn corollary_sweep_has_45_pass_rows() {
    let out = sumlab(&[
        "verify",
        "--identity",
        "corollary1",
        "--pmin",
        "3",
        "--pmax",
        "199",
        "--format",
        "csv",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(
        lines.next(),
        Some("identity,modulus,n,lhs,rhs,residual,pass")
    );
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 45);
    assert!(rows
        .iter()
        .all(|r| r.starts_with("corollary1,") && r.ends_with(",2,2,0.0,true")));
}

#[test]
fn golden_csv_headers() {
    let first = |args: &[&str]| stdout(&sumlab(args)).lines().next().unwrap().to_string();
    assert_eq!(
        first(&[
            "search",
            "--max-degree",
            "1",
            "--coeff-bound",
            "1",
            "--format",
            "csv"
        ]),
        "c,f,g,primes_checked,twisted"
    );
    assert_eq!(
        first(&[
            "conjecture",
            "--k",
            "2",
            "--pmin",
            "5",
            "--pmax",
            "13",
            "--format",
            "csv"
        ]),
        "p,k,value,catalan,main_term,normalized_residual"
    );
    assert_eq!(
        first(&[
            "verify-all",
            "--pmin",
            "5",
            "--pmax",
            "5",
            "--format",
            "csv"
        ]),
        "identity,modulus,n,lhs,rhs,residual,pass"
    );
}

#[test]
fn conjecture_json_key_order() {
    let out = sumlab(&["conjecture", "--k", "2", "--pmin", "7", "--pmax", "7"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let row = concat!(
        r#"{"p":7,"k":2,"value":343,"catalan":2,"main_term":686,"normalized_residual":-2.64575131106,"#,
        r#""residual":"#
    );
    assert!(text.contains(row), "{text}");
    assert!(
        text.contains(r#""closed_form":343,"closed_form_match":true}"#),
        "{text}"
    );
    assert!(text.contains(r#""summary":{"pass":1,"fail":0,"skip":0,"max_residual":"#));
}

#[test]
fn search_json_reports_histograms() {
    let out = sumlab(&["search", "--max-degree", "1", "--coeff-bound", "1"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(
        text.contains(r#"{"c":1,"f":"x","g":"x + 1","primes_checked":45,"twisted":false,"#),
        "{text}"
    );
    assert!(
        text.contains(r#""histogram":{"1":1},"twisted_histogram":{"-1":1,"0":2}"#),
        "{text}"
    );
}

#[test]
fn kloosterman_sum_text() {
    let out = sumlab(&[
        "sum",
        "--family",
        "kloosterman",
        "--m",
        "1",
        "--n",
        "1",
        "--q",
        "5",
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out), "0.3819660 + 0.0000000i\n");
}

#[test]
fn even_modulus_is_skipped_not_failed() {
    let out = sumlab(&[
        "verify",
        "--identity",
        "zhang_composite_4th",
        "--q",
        "4",
        "--format",
        "text",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("skipped: inapplicable (even q)"), "{text}");
    assert!(
        text.ends_with("summary: pass=0 fail=0 skip=2 max_residual=0.0\n"),
        "{text}"
    );
}

#[test]
fn logs_stay_off_stdout() {
    let out = sumlab(&[
        "verify",
        "--identity",
        "salie_4th",
        "--pmin",
        "3",
        "--pmax",
        "11",
        "--format",
        "csv",
    ]);
    assert!(String::from_utf8_lossy(&out.stderr).contains("sumlab verify"));
    assert!(!stdout(&out).contains("sumlab"));
}

#[test]
fn usage_errors_exit_2() {
    for args in [
        &["verify"][..],
        &["verify", "--identity", "no_such_identity"],
        &[
            "verify",
            "--identity",
            "salie_4th",
            "--pmin",
            "50",
            "--pmax",
            "10",
        ],
        &["conjecture", "--k", "9"],
        &["sum", "--family", "twisted", "--q", "9"],
        &["search", "--pmax", "13"],
        &["verify-all", "--workers", "0"],
        &["bogus"],
    ] {
        assert_eq!(sumlab(args).status.code(), Some(EXIT_USAGE), "{args:?}");
    }
}

#[test]
fn failing_identity_exits_1() {
    let out = sumlab(&[
        "verify",
        "--identity",
        "zh_cubic_6th_over_a",
        "--pmin",
        "5",
        "--pmax",
        "5",
    ]);
    assert_eq!(out.status.code(), Some(EXIT_FAIL));
}

#[test]
fn corrupted_rhs_flips_exit_code() {
    let command = Command::Verify {
        identity: "salie_4th".into(),
        range: ModulusRange::new(3, 30),
        n: vec![],
    };
    let mut cfg = config(command, Format::Json);
    cfg.output = Some(temp_path("corrupt.json"));
    assert_eq!(run_with_registry(&cfg, &Registry::standard()), EXIT_PASS);
    let corrupted = Registry::standard()
        .with_rhs("salie_4th", |_, _| Ok(1))
        .unwrap();
    assert_eq!(run_with_registry(&cfg, &corrupted), EXIT_FAIL);
    let written = std::fs::read_to_string(cfg.output.as_ref().unwrap()).unwrap();
    assert!(written.contains(r#""rhs":1,"residual""#));
    std::fs::remove_file(cfg.output.unwrap()).unwrap();
}

#[test]
fn numeric_failures_take_precedence() {
    let cmd = Command::Verify {
        identity: "salie_4th".into(),
        range: ModulusRange::new(3, 13),
        n: vec![],
    };
    let mut report = build_report(&cmd, &Registry::standard()).unwrap();
    assert_eq!(exit_code(&report), EXIT_PASS);
    report.summary.fail = 1;
    assert_eq!(exit_code(&report), EXIT_FAIL);
    report.summary.numeric_failures = 1;
    assert_eq!(exit_code(&report), EXIT_NUMERIC);
}

#[test]
fn output_is_independent_of_worker_count() {
    for format in [Format::Json, Format::Csv] {
        let cmd = Command::VerifyAll {
            range: ModulusRange::new(3, 60),
            n: default_n_grid(),
        };
        let outputs: Vec<Vec<u8>> = [1, 3, 8]
            .into_iter()
            .map(|w| {
                let mut c = config(cmd.clone(), format);
                c.workers = w;
                execute(&c, &Registry::standard()).unwrap().0
            })
            .collect();
        assert!(outputs.windows(2).all(|w| w[0] == w[1]));
    }
    let a = sumlab(&[
        "search",
        "--max-degree",
        "2",
        "--coeff-bound",
        "2",
        "--workers",
        "1",
    ]);
    let b = Process::new(env!("CARGO_BIN_EXE_sumlab"))
        .args(["search", "--max-degree", "2", "--coeff-bound", "2"])
        .env("SUMLAB_WORKERS", "4")
        .output()
        .unwrap();
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn output_file_receives_report() {
    let path = temp_path("sum.csv");
    let out = sumlab(&[
        "sum",
        "--family",
        "two-term",
        "--m",
        "1",
        "--n",
        "0",
        "--k",
        "2",
        "--q",
        "5",
        "--format",
        "csv",
        "--output",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    std::fs::remove_file(&path).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("family,q,m,n,k,re,im,abs"));
    let row = lines.next().unwrap();
    assert!(row.starts_with("two-term,5,1,0,2,"), "{row}");
    assert!(row.ends_with(",2.2360679775"), "{row}");
}

#[test]
fn sum_families() {
    let run = |family, m, n, k, q| {
        let c = config(Command::Sum { family, m, n, k, q }, Format::Text);
        String::from_utf8(execute(&c, &Registry::standard()).unwrap().0).unwrap()
    };
    // Kloosterman sums are real
    assert!(run(Family::Kloosterman, 1, NChoice::Value(1), 1, 7).ends_with(" + 0.0000000i\n"));
    // Σ_a e(a^2/5) = √5
    assert_eq!(
        run(Family::TwoTerm, 1, NChoice::Value(0), 2, 5),
        "2.2360680 + 0.0000000i\n"
    );
    // Σ_{a=1}^{p-1} e(ā/p) = -1
    assert_eq!(
        run(Family::Twisted, 0, NChoice::Value(1), 1, 11),
        "-1.0000000 + 0.0000000i\n"
    );
}
