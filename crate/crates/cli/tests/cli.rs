use std::io::{BufRead, BufReader};
use std::net::TcpListener;
use std::path::Path;
use std::process::{Child, Command, Output, Stdio};

use foasc::sim::read_database;

fn foasc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_foasc"))
        .args(args)
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

struct Server {
    child: Child,
    endpoint: String,
}

impl Drop for Server {
    fn drop(&mut self) {
        let _ = self.child.kill();
        let _ = self.child.wait();
    }
}

fn serve(db: &Path, id: usize) -> Server {
    let mut child = Command::new(env!("CARGO_BIN_EXE_foasc"))
        .args([
            "serve",
            "--protocol",
            "cgks",
            "--n",
            "8",
            "--port",
            "0",
            "--id",
        ])
        .arg(id.to_string())
        .arg("--db")
        .arg(db)
        .stdout(Stdio::piped())
        .stderr(Stdio::null())
        .spawn()
        .unwrap();
    let mut line = String::new();
    BufReader::new(child.stdout.take().unwrap())
        .read_line(&mut line)
        .unwrap();
    let endpoint = line.trim().rsplit(' ').next().unwrap().to_string();
    Server { child, endpoint }
}

#[test]
fn params_reports_cgks_cost() {
    let o = foasc(&["params", "cgks", "--n", "8"]);
    assert_eq!(code(&o), 0);
    let s = stdout(&o);
    assert!(s.contains("raw bits    26.000"), "{s}");
    assert!(s.lines().any(|l| l == "k           2"), "{s}");
    assert!(s.lines().any(|l| l == "t           1"), "{s}");
}

#[test]
fn params_efremenko_uses_four_servers() {
    let s = stdout(&foasc(&[
        "params",
        "efremenko",
        "--m",
        "6",
        "--p",
        "7",
        "--n",
        "4",
    ]));
    assert!(s.lines().any(|l| l == "k           4"), "{s}");
}

#[test]
fn params_kr() {
    let o = foasc(&["params", "kr", "--r", "3"]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o), "k_3 = 8\n");
}

#[test]
fn params_writes_key_value_file() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("cgks.kv");
    let o = foasc(&["params", "cgks", "--out", out.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    let kv = std::fs::read_to_string(out).unwrap();
    assert!(kv.contains("raw_bits = 26.000000"), "{kv}");
}

#[test]
fn verify_passes_and_fails_with_exit_codes() {
    let o = foasc(&[
        "verify", "lagrange", "--t", "1", "--k", "3", "--p", "5", "--n", "3", "--suite", "all",
    ]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    assert!(stdout(&o).ends_with("verdict: PASS\n"));

    let o = foasc(&["verify", "cgks", "--n", "1"]);
    assert_eq!(code(&o), 0);

    let o = foasc(&["verify", "broken-demo"]);
    assert_eq!(code(&o), 1);
    let s = stdout(&o);
    assert!(s.contains("counterexample"), "{s}");
    assert!(s.contains("first failure"), "{s}");
    assert!(s.ends_with("verdict: FAIL\n"));
}

#[test]
fn verify_falls_back_to_basis_past_budget() {
    let o = foasc(&["verify", "cgks", "--n", "27", "--suite", "correctness"]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    let o = foasc(&[
        "verify",
        "cgks",
        "--n",
        "27",
        "--suite",
        "correctness",
        "--mode",
        "exhaustive",
    ]);
    assert_eq!(code(&o), 2);
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(code(&foasc(&["params", "no-such-protocol"])), 2);
    assert_eq!(code(&foasc(&["params", "example", "--n", "4"])), 2);
    assert_eq!(
        code(&foasc(&["verify", "lagrange", "--t", "3", "--k", "3"])),
        2
    );
    assert_eq!(code(&foasc(&["frobnicate"])), 2);
}

#[test]
fn outputs_are_deterministic() {
    for args in [
        &["params", "gks"][..],
        &["verify", "efremenko"][..],
        &[
            "bench",
            "--protocol",
            "cgks",
            "--n",
            "8,64,512",
            "--seed",
            "4",
        ][..],
    ] {
        assert_eq!(stdout(&foasc(args)), stdout(&foasc(args)), "{args:?}");
    }
}

#[test]
fn bench_has_prediction_column() {
    let s = stdout(&foasc(&["bench", "--protocol", "cgks", "--n", "8,64,512"]));
    let mut lines = s.lines();
    assert!(lines.next().unwrap().contains("predicted_bits"));
    let predicted: Vec<&str> = lines.map(|l| l.split('\t').nth(5).unwrap()).collect();
    assert_eq!(predicted, vec!["26.000", "50.000", "98.000"]);
}

#[test]
fn config_file_supplies_defaults_and_flags_win() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.conf");
    std::fs::write(
        &cfg,
        "# lagrange recipe\nprotocol = lagrange\nt = 1\nk = 3\np = 5\nn = 3\n",
    )
    .unwrap();
    let cfg = cfg.to_str().unwrap();
    let s = stdout(&foasc(&["--config", cfg, "params"]));
    assert!(s.lines().any(|l| l == "n           3"), "{s}");
    let s = stdout(&foasc(&["--config", cfg, "params", "--n", "2"]));
    assert!(s.lines().any(|l| l == "n           2"), "{s}");

    let bad = dir.path().join("bad.conf");
    std::fs::write(&bad, "colour = blue\n").unwrap();
    assert_eq!(
        code(&foasc(&[
            "--config",
            bad.to_str().unwrap(),
            "params",
            "cgks"
        ])),
        2
    );
}

#[test]
fn serve_and_get_over_tcp() {
    let dir = tempfile::tempdir().unwrap();
    let db = dir.path().join("db.bin");
    let o = foasc(&[
        "gendb",
        "--n",
        "8",
        "--seed",
        "3",
        "--out",
        db.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 0);
    let x = read_database(&db).unwrap();
    let a = serve(&db, 1);
    let b = serve(&db, 2);
    let servers = format!("{},{}", a.endpoint, b.endpoint);
    for i in 0..8 {
        let o = foasc(&[
            "get",
            "--index",
            &i.to_string(),
            "--servers",
            &servers,
            "--seed",
            "9",
        ]);
        assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
        let s = stdout(&o);
        assert!(
            s.starts_with(&format!("x[{i}] = {}\n", x.get(i) as u8)),
            "{s}"
        );
        assert!(s.contains("payload_bytes = 20"), "{s}");
    }

    let o = foasc(&[
        "get",
        "--index",
        "3",
        "--servers",
        &a.endpoint,
        "--protocol",
        "cgks",
    ]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("expected 2 endpoints"));

    let dead = TcpListener::bind("127.0.0.1:0")
        .unwrap()
        .local_addr()
        .unwrap()
        .to_string();
    let o = foasc(&[
        "get",
        "--index",
        "3",
        "--servers",
        &format!("{},{dead}", a.endpoint),
        "--timeout-ms",
        "500",
    ]);
    assert_eq!(code(&o), 3);
    assert!(String::from_utf8_lossy(&o.stderr).contains("server 1"));

    let o = foasc(&["get", "--index", "3", "--servers", &servers, "--n", "27"]);
    assert_eq!(code(&o), 3);
}

#[test]
fn serve_rejects_size_mismatch() {
    let dir = tempfile::tempdir().unwrap();
    let db = dir.path().join("db.bin");
    foasc(&["gendb", "--n", "5", "--out", db.to_str().unwrap()]);
    let o = foasc(&[
        "serve",
        "--protocol",
        "cgks",
        "--n",
        "8",
        "--id",
        "1",
        "--port",
        "0",
        "--db",
        db.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 2);
}
