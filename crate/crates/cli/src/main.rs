use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::io::Write as _;
use std::net::TcpListener;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::str::FromStr;
use std::sync::atomic::AtomicBool;
use std::sync::Arc;
use std::time::Duration;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use foasc::foasc::{Database, FoascInstance};
use foasc::mv::k_r_table;
use foasc::protocols::{build, param_report, Params, PROTOCOLS};
use foasc::sim::{
    bench, client_retrieve, fetch_config, parse_endpoint, read_database, serve, write_database,
    ClientOptions, ServerNode, SimError,
};
use foasc::verify::{
    basis_correctness, exhaustive_correctness, exhaustive_privacy, CorrectnessConfig, VerifyError,
    DEFAULT_CORRECTNESS_BUDGET,
};

#[derive(Parser, Debug)]
#[command(name = "foasc", version, about = "Multi-server IT-PIR laboratory")]
struct Cli {
    /// `key = value` file supplying defaults for any flag.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Default, Clone)]
struct ParamArgs {
    #[arg(long)]
    t: Option<usize>,
    #[arg(long)]
    k: Option<usize>,
    #[arg(long)]
    p: Option<u64>,
    #[arg(long)]
    m: Option<u64>,
    #[arg(long)]
    h: Option<usize>,
    /// Node budget for matching-family searches.
    #[arg(long)]
    search_budget: Option<u64>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Parameter and cost report; `params kr --r R` prints k_r.
    Params {
        protocol: Option<String>,
        #[arg(long)]
        n: Option<usize>,
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long)]
        r: Option<u32>,
        /// Also write the key-value report here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Exhaustive verification suites; `broken-demo` runs the negative controls.
    Verify {
        protocol: Option<String>,
        #[arg(long)]
        n: Option<usize>,
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long, value_enum)]
        suite: Option<Suite>,
        #[arg(long, value_enum)]
        mode: Option<Mode>,
        /// Round budget for exhaustive correctness.
        #[arg(long)]
        budget: Option<u128>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Serves one database copy over TCP until killed.
    Serve {
        #[arg(long)]
        protocol: Option<String>,
        #[arg(long)]
        n: Option<usize>,
        #[command(flatten)]
        params: ParamArgs,
        /// Server position, 1-based.
        #[arg(long)]
        id: Option<usize>,
        #[arg(long)]
        db: Option<PathBuf>,
        #[arg(long)]
        port: Option<u16>,
        #[arg(long)]
        bind: Option<String>,
    },
    /// Retrieves one bit from k servers.
    Get {
        /// Learned from the first server when omitted.
        #[arg(long)]
        protocol: Option<String>,
        #[arg(long)]
        n: Option<usize>,
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long)]
        index: Option<usize>,
        /// Comma-separated endpoints in server order; `:port` means loopback.
        #[arg(long)]
        servers: Option<String>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        timeout_ms: Option<u64>,
    },
    /// Communication table over a list of database sizes.
    Bench {
        #[arg(long)]
        protocol: Option<String>,
        /// Comma-separated database sizes.
        #[arg(long)]
        n: Option<String>,
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long)]
        trials: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
        /// Adds answer and client time columns.
        #[arg(long)]
        timing: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Writes a random database file.
    Gendb {
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
enum Suite {
    Correctness,
    Privacy,
    Span,
    All,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
enum Mode {
    /// Exhaustive, falling back to the basis certificate past the budget.
    Auto,
    Exhaustive,
    Basis,
}

/// Values from `--config`; flags take precedence.
#[derive(Debug, Default)]
struct FileConfig(BTreeMap<String, String>);

const CONFIG_KEYS: &[&str] = &[
    "protocol",
    "n",
    "t",
    "k",
    "p",
    "m",
    "h",
    "search_budget",
    "r",
    "suite",
    "mode",
    "budget",
    "out",
    "id",
    "db",
    "port",
    "bind",
    "index",
    "servers",
    "seed",
    "timeout_ms",
    "trials",
];

impl FileConfig {
    fn load(path: &Path) -> Result<Self> {
        let text =
            fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        let mut map = BTreeMap::new();
        for (no, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| anyhow!("{}:{}: expected key = value", path.display(), no + 1))?;
            let k = k.trim().replace('-', "_");
            if !CONFIG_KEYS.contains(&k.as_str()) {
                bail!("{}:{}: unknown key {k:?}", path.display(), no + 1);
            }
            map.insert(k, v.trim().to_string());
        }
        Ok(Self(map))
    }

    fn get<T: FromStr>(&self, key: &str) -> Result<Option<T>>
    where
        T::Err: std::fmt::Display,
    {
        self.0
            .get(key)
            .map(|v| {
                v.parse::<T>()
                    .map_err(|e| anyhow!("config {key} = {v:?}: {e}"))
            })
            .transpose()
    }

    fn or<T: FromStr>(&self, flag: Option<T>, key: &str) -> Result<Option<T>>
    where
        T::Err: std::fmt::Display,
    {
        match flag {
            Some(v) => Ok(Some(v)),
            None => self.get(key),
        }
    }

    fn enum_or<T: ValueEnum>(&self, flag: Option<T>, key: &str) -> Result<Option<T>> {
        match (flag, self.0.get(key)) {
            (Some(v), _) => Ok(Some(v)),
            (None, Some(v)) => T::from_str(v, true)
                .map(Some)
                .map_err(|e| anyhow!("config {key}: {e}")),
            (None, None) => Ok(None),
        }
    }

    fn params(&self, n: Option<usize>, a: &ParamArgs) -> Result<Params> {
        Ok(Params {
            n: self.or(n, "n")?,
            t: self.or(a.t, "t")?,
            k: self.or(a.k, "k")?,
            p: self.or(a.p, "p")?,
            m: self.or(a.m, "m")?,
            h: self.or(a.h, "h")?,
            search_budget: self.or(a.search_budget, "search_budget")?,
        })
    }
}

fn protocol_name(cfg: &FileConfig, flag: Option<String>) -> Result<String> {
    cfg.or(flag, "protocol")?
        .ok_or_else(|| anyhow!("no protocol given; choose one of {}", PROTOCOLS.join(", ")))
}

fn emit(out: &Option<PathBuf>, text: &str) -> Result<()> {
    if let Some(path) = out {
        fs::write(path, text).with_context(|| format!("writing {}", path.display()))?;
    }
    Ok(())
}

fn cmd_params(
    cfg: &FileConfig,
    protocol: Option<String>,
    n: Option<usize>,
    a: &ParamArgs,
    r: Option<u32>,
    out: Option<PathBuf>,
) -> Result<()> {
    let name = protocol_name(cfg, protocol)?;
    let out = cfg.or(out, "out")?;
    if name == "kr" {
        let r = cfg
            .or(r, "r")?
            .ok_or_else(|| anyhow!("params kr needs --r"))?;
        let kr = k_r_table(r)?;
        println!("k_{r} = {kr}");
        return emit(&out, &format!("r = {r}\nk_r = {kr}\n"));
    }
    let inst = build(&name, &cfg.params(n, a)?)?;
    let report = param_report(&inst);
    print!("{report}");
    emit(&out, &report.to_kv())
}

fn span_suite(inst: &FoascInstance, budget: u128) -> Result<(bool, String)> {
    let rows = inst.row_count().unwrap_or(u128::MAX);
    let total = rows.saturating_mul(inst.n() as u128);
    if total > budget {
        return Err(VerifyError::BudgetExceeded {
            what: "span sweep",
            size: total,
            budget,
        }
        .into());
    }
    let codec = inst.randomness();
    for i in 0..inst.n() {
        for idx in 0..rows {
            let ell = codec.from_index(idx);
            let v = inst.span_check(i, &ell);
            if !v.is_pass() {
                let line = format!(
                    "span {} [FAIL]: {total} checks\n  first failure: i={i} ell={ell:?}: {v:?}",
                    inst.protocol()
                );
                return Ok((false, line));
            }
        }
    }
    Ok((
        true,
        format!("span {} [PASS]: {total} checks", inst.protocol()),
    ))
}

struct SuiteRun {
    pass: bool,
    text: String,
    kv: String,
}

fn run_suites(inst: &FoascInstance, suite: Suite, mode: Mode, budget: u128) -> Result<SuiteRun> {
    let mut run = SuiteRun {
        pass: true,
        text: String::new(),
        kv: String::new(),
    };
    if matches!(suite, Suite::Correctness | Suite::All) {
        let config = CorrectnessConfig {
            budget,
            fault: None,
        };
        let report = match mode {
            Mode::Exhaustive => exhaustive_correctness(inst, &config)?,
            Mode::Basis => basis_correctness(inst, &config)?,
            Mode::Auto => match exhaustive_correctness(inst, &config) {
                Err(VerifyError::BudgetExceeded { .. }) => basis_correctness(inst, &config)?,
                other => other?,
            },
        };
        run.pass &= report.pass();
        let _ = writeln!(run.text, "{report}");
        run.kv.push_str(&report.to_kv());
    }
    if matches!(suite, Suite::Privacy | Suite::All) {
        let report = exhaustive_privacy(inst, inst.t(), None)?;
        run.pass &= report.pass();
        let _ = writeln!(run.text, "{report}");
        run.kv.push_str(&report.to_kv());
    }
    if matches!(suite, Suite::Span | Suite::All) {
        let (pass, line) = span_suite(inst, budget)?;
        run.pass &= pass;
        let _ = writeln!(run.text, "{line}");
        let _ = writeln!(
            run.kv,
            "span.protocol = {}\nspan.pass = {pass}",
            inst.protocol()
        );
    }
    Ok(run)
}

#[allow(clippy::too_many_arguments)]
fn cmd_verify(
    cfg: &FileConfig,
    protocol: Option<String>,
    n: Option<usize>,
    a: &ParamArgs,
    suite: Option<Suite>,
    mode: Option<Mode>,
    budget: Option<u128>,
    out: Option<PathBuf>,
) -> Result<bool> {
    let name = protocol_name(cfg, protocol)?;
    let suite = cfg.enum_or(suite, "suite")?.unwrap_or(Suite::All);
    let mode = cfg.enum_or(mode, "mode")?.unwrap_or(Mode::Auto);
    let budget = cfg
        .or(budget, "budget")?
        .unwrap_or(DEFAULT_CORRECTNESS_BUDGET);
    let out = cfg.or(out, "out")?;
    let targets: Vec<(FoascInstance, Suite)> = if name == "broken-demo" {
        vec![
            (build("broken-privacy", &Params::default())?, Suite::Privacy),
            (
                build("broken-span", &Params::default())?,
                Suite::Correctness,
            ),
            (build("broken-span", &Params::default())?, Suite::Span),
        ]
    } else {
        vec![(build(&name, &cfg.params(n, a)?)?, suite)]
    };
    let mut pass = true;
    let mut kv = String::new();
    for (inst, suite) in &targets {
        let run = run_suites(inst, *suite, mode, budget)?;
        pass &= run.pass;
        print!("{}", run.text);
        kv.push_str(&run.kv);
    }
    let verdict = if pass { "PASS" } else { "FAIL" };
    println!("verdict: {verdict}");
    let _ = writeln!(kv, "verdict = {verdict}");
    emit(&out, &kv)?;
    Ok(pass)
}

#[allow(clippy::too_many_arguments)]
fn cmd_serve(
    cfg: &FileConfig,
    protocol: Option<String>,
    n: Option<usize>,
    a: &ParamArgs,
    id: Option<usize>,
    db: Option<PathBuf>,
    port: Option<u16>,
    bind: Option<String>,
) -> Result<()> {
    let name = protocol_name(cfg, protocol)?;
    let db_path: PathBuf = cfg
        .or(db, "db")?
        .ok_or_else(|| anyhow!("serve needs --db"))?;
    let id: usize = cfg
        .or(id, "id")?
        .ok_or_else(|| anyhow!("serve needs --id"))?;
    let port: u16 = cfg
        .or(port, "port")?
        .ok_or_else(|| anyhow!("serve needs --port"))?;
    let bind: String = cfg.or(bind, "bind")?.unwrap_or_else(|| "127.0.0.1".into());
    let database = read_database(&db_path)?;
    let mut params = cfg.params(n, a)?;
    params.n = params.n.or(Some(database.len()));
    let inst = build(&name, &params)?;
    if database.len() != inst.n() {
        bail!(
            "database has {} bits, {name} instance has n = {}",
            database.len(),
            inst.n()
        );
    }
    if !(1..=inst.k()).contains(&id) {
        bail!("--id must be in 1..={}", inst.k());
    }
    let listener = TcpListener::bind((bind.as_str(), port)).map_err(SimError::Io)?;
    let addr = listener.local_addr().map_err(SimError::Io)?;
    let node = ServerNode::new(id - 1, inst, Arc::new(database));
    println!(
        "serving {name} as server {id} of {} on {addr}",
        node.instance.k()
    );
    std::io::stdout().flush()?;
    serve(Arc::new(node), listener, Arc::new(AtomicBool::new(false))).map_err(SimError::Io)?;
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn cmd_get(
    cfg: &FileConfig,
    protocol: Option<String>,
    n: Option<usize>,
    a: &ParamArgs,
    index: Option<usize>,
    servers: Option<String>,
    seed: Option<u64>,
    timeout_ms: Option<u64>,
) -> Result<()> {
    let index: usize = cfg
        .or(index, "index")?
        .ok_or_else(|| anyhow!("get needs --index"))?;
    let servers: String = cfg
        .or(servers, "servers")?
        .ok_or_else(|| anyhow!("get needs --servers"))?;
    let seed = cfg.or(seed, "seed")?.unwrap_or(0);
    let timeout = Duration::from_millis(cfg.or(timeout_ms, "timeout_ms")?.unwrap_or(5000));
    let options = ClientOptions { timeout };
    let endpoints = servers
        .split(',')
        .filter(|s| !s.trim().is_empty())
        .map(parse_endpoint)
        .collect::<Result<Vec<_>, _>>()?;
    if endpoints.is_empty() {
        bail!("--servers lists no endpoints");
    }
    let name = match cfg.or(protocol, "protocol")? {
        Some(name) => name,
        None => fetch_config(0, &endpoints[0], &options)?.protocol,
    };
    let inst = build(&name, &cfg.params(n, a)?)?;
    let (bit, t) = client_retrieve(&endpoints, &inst, index, seed, &options)?;
    println!("x[{index}] = {}", bit as u8);
    println!("protocol = {name}");
    for e in &t.exchanges {
        println!(
            "{}: query {} bytes, answer {} bytes, framing {} bytes",
            endpoints[e.server],
            e.query_payload,
            e.answer_payload,
            e.framing + e.handshake
        );
    }
    println!("payload_bytes = {}", t.payload_bytes());
    println!("framing_bytes = {}", t.framing_bytes());
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn cmd_bench(
    cfg: &FileConfig,
    protocol: Option<String>,
    n: Option<String>,
    a: &ParamArgs,
    trials: Option<usize>,
    seed: Option<u64>,
    timing: bool,
    out: Option<PathBuf>,
) -> Result<()> {
    let name = protocol_name(cfg, protocol)?;
    let n_list: String = cfg.or(n, "n")?.ok_or_else(|| anyhow!("bench needs --n"))?;
    let n_values = n_list
        .split(',')
        .map(|s| {
            s.trim()
                .parse::<usize>()
                .map_err(|e| anyhow!("--n {s:?}: {e}"))
        })
        .collect::<Result<Vec<_>>>()?;
    let trials = cfg.or(trials, "trials")?.unwrap_or(5);
    let seed = cfg.or(seed, "seed")?.unwrap_or(0);
    let out = cfg.or(out, "out")?;
    let params = cfg.params(None, a)?;
    let table = bench(&name, &params, &n_values, trials, seed)?;
    let text = table.render(timing);
    print!("{text}");
    emit(&out, &text)
}

fn cmd_gendb(
    cfg: &FileConfig,
    n: Option<usize>,
    seed: Option<u64>,
    out: Option<PathBuf>,
) -> Result<()> {
    let n: usize = cfg.or(n, "n")?.ok_or_else(|| anyhow!("gendb needs --n"))?;
    let seed = cfg.or(seed, "seed")?.unwrap_or(0);
    let out: PathBuf = cfg
        .or(out, "out")?
        .ok_or_else(|| anyhow!("gendb needs --out"))?;
    let x = Database::random(n, seed)?;
    write_database(&out, &x)?;
    let ones = x.bits().iter().filter(|&&b| b).count();
    println!("wrote {n} bits ({ones} ones) to {}", out.display());
    Ok(())
}

fn run(cli: Cli) -> Result<bool> {
    let cfg = match &cli.config {
        Some(path) => FileConfig::load(path)?,
        None => FileConfig::default(),
    };
    match cli.command {
        Command::Params {
            protocol,
            n,
            params,
            r,
            out,
        } => cmd_params(&cfg, protocol, n, &params, r, out)?,
        Command::Verify {
            protocol,
            n,
            params,
            suite,
            mode,
            budget,
            out,
        } => return cmd_verify(&cfg, protocol, n, &params, suite, mode, budget, out),
        Command::Serve {
            protocol,
            n,
            params,
            id,
            db,
            port,
            bind,
        } => cmd_serve(&cfg, protocol, n, &params, id, db, port, bind)?,
        Command::Get {
            protocol,
            n,
            params,
            index,
            servers,
            seed,
            timeout_ms,
        } => cmd_get(&cfg, protocol, n, &params, index, servers, seed, timeout_ms)?,
        Command::Bench {
            protocol,
            n,
            params,
            trials,
            seed,
            timing,
            out,
        } => cmd_bench(&cfg, protocol, n, &params, trials, seed, timing, out)?,
        Command::Gendb { n, seed, out } => cmd_gendb(&cfg, n, seed, out)?,
    }
    Ok(true)
}

/// 3 for transport trouble, 2 for usage and parameter errors.
fn exit_code(err: &anyhow::Error) -> u8 {
    for cause in err.chain() {
        if let Some(e) = cause.downcast_ref::<SimError>() {
            return match e {
                SimError::Io(_)
                | SimError::Frame(_)
                | SimError::Timeout { .. }
                | SimError::Unreachable { .. }
                | SimError::ParamDigestMismatch { .. }
                | SimError::Remote { .. }
                | SimError::Unexpected(_)
                | SimError::WrongBit { .. } => 3,
                _ => 2,
            };
        }
    }
    2
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(exit_code(&err))
        }
    }
}
