use std::fmt;

use rayon::prelude::*;

use super::{kv_line, VerifyError};
use crate::foasc::{FoascInstance, RingVec};

/// `2^8 * 8 * 10^5` round trips.
pub const DEFAULT_CORRECTNESS_BUDGET: u128 = 256 * 8 * 100_000;

/// Number of failures kept verbatim in a report.
const KEEP_FAILURES: usize = 16;

/// Adds one to digit `digit` of the answer from `server` before reconstruction.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Fault {
    pub server: usize,
    pub digit: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CorrectnessConfig {
    pub budget: u128,
    pub fault: Option<Fault>,
}

impl Default for CorrectnessConfig {
    fn default() -> Self {
        Self {
            budget: DEFAULT_CORRECTNESS_BUDGET,
            fault: None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CorrectnessMode {
    /// Every database in `{0,1}^n`.
    Exhaustive,
    /// The zero database and the `n` unit databases.
    Basis,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CorrectnessFailure {
    pub database: Vec<bool>,
    pub index: usize,
    pub ell: Vec<u64>,
    pub outcome: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CorrectnessReport {
    pub protocol: String,
    pub mode: CorrectnessMode,
    pub fault: Option<Fault>,
    pub databases: u128,
    pub pairs: u128,
    pub rounds: u128,
    pub failure_count: u128,
    pub failures: Vec<CorrectnessFailure>,
}

impl CorrectnessReport {
    pub fn pass(&self) -> bool {
        self.failure_count == 0
    }

    pub fn to_kv(&self) -> String {
        let mut out = String::new();
        kv_line(&mut out, "suite", "correctness");
        kv_line(&mut out, "protocol", &self.protocol);
        kv_line(&mut out, "mode", format!("{:?}", self.mode).to_lowercase());
        kv_line(&mut out, "databases", self.databases);
        kv_line(&mut out, "pairs", self.pairs);
        kv_line(&mut out, "rounds", self.rounds);
        kv_line(&mut out, "failures", self.failure_count);
        kv_line(
            &mut out,
            "verdict",
            if self.pass() { "pass" } else { "fail" },
        );
        out
    }
}

impl fmt::Display for CorrectnessReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let verdict = if self.pass() { "PASS" } else { "FAIL" };
        write!(
            f,
            "correctness {} [{}]: {} databases x {} (i, ell) pairs = {} rounds, {} failures",
            self.protocol, verdict, self.databases, self.pairs, self.rounds, self.failure_count
        )?;
        if let Some(fault) = self.fault {
            write!(
                f,
                " (fault on server {} digit {})",
                fault.server, fault.digit
            )?;
        }
        if let Some(first) = self.failures.first() {
            let bits: String = first
                .database
                .iter()
                .map(|&b| if b { '1' } else { '0' })
                .collect();
            write!(
                f,
                "\n  first failure: x={bits} i={} ell={:?}: {}",
                first.index, first.ell, first.outcome
            )?;
        }
        Ok(())
    }
}

struct Tally {
    rounds: u128,
    count: u128,
    kept: Vec<CorrectnessFailure>,
}

impl Tally {
    fn new() -> Self {
        Self {
            rounds: 0,
            count: 0,
            kept: Vec::new(),
        }
    }

    fn merge(mut self, other: Tally) -> Tally {
        self.rounds += other.rounds;
        self.count += other.count;
        for f in other.kept {
            if self.kept.len() < KEEP_FAILURES {
                self.kept.push(f);
            }
        }
        self
    }
}

fn negate(inst: &FoascInstance, v: &RingVec) -> RingVec {
    let r = inst.ring().base.digit_radix();
    RingVec(v.0.iter().map(|&d| (r - d) % r).collect())
}

fn pairs(
    inst: &FoascInstance,
    budget: u128,
    per_pair: u128,
    what: &'static str,
) -> Result<u128, VerifyError> {
    let rows = inst.row_count().ok_or(VerifyError::BudgetExceeded {
        what,
        size: u128::MAX,
        budget,
    })?;
    let pairs = rows * inst.n() as u128;
    let size = pairs.saturating_mul(per_pair);
    if size > budget {
        return Err(VerifyError::BudgetExceeded { what, size, budget });
    }
    Ok(pairs)
}

/// Runs one `(i, ell)` over the given database masks (bit `tau` is `x_tau`),
/// visiting them in Gray-code order so each step adds or removes one
/// `alpha` per answer.
fn run_pair(
    inst: &FoascInstance,
    i: usize,
    ell: Vec<u64>,
    masks: &mut dyn Iterator<Item = u128>,
    fault: Option<Fault>,
) -> Result<Tally, VerifyError> {
    let n = inst.n();
    let ring = inst.ring();
    let (qs, aux) = inst.queries_for(i, ell)?;
    let table: Vec<Vec<RingVec>> = qs
        .iter()
        .map(|q| (0..n).map(|tau| inst.alpha(tau, q)).collect())
        .collect();
    let mut answers = vec![ring.zero(); qs.len()];
    let mut current: u128 = 0;
    let mut tally = Tally::new();
    for mask in masks {
        let diff = current ^ mask;
        for tau in (0..n).filter(|&tau| diff >> tau & 1 == 1) {
            let adding = mask >> tau & 1 == 1;
            for (acc, col) in answers.iter_mut().zip(&table) {
                let term = if adding {
                    col[tau].clone()
                } else {
                    negate(inst, &col[tau])
                };
                ring.add_assign(acc, &term);
            }
        }
        current = mask;
        let mut sent = answers.clone();
        if let Some(fault) = fault {
            let r = ring.base.digit_radix();
            let digit = &mut sent[fault.server].0[fault.digit];
            *digit = (*digit + 1) % r;
        }
        let want = mask >> i & 1 == 1;
        tally.rounds += 1;
        let outcome = match inst.reconstruct(&aux, &sent) {
            Ok(bit) if bit == want => None,
            Ok(bit) => Some(format!("returned {} for x_i = {}", bit as u8, want as u8)),
            Err(e) => Some(e.to_string()),
        };
        if let Some(outcome) = outcome {
            tally.count += 1;
            if tally.kept.len() < KEEP_FAILURES {
                tally.kept.push(CorrectnessFailure {
                    database: (0..n).map(|tau| mask >> tau & 1 == 1).collect(),
                    index: i,
                    ell: aux.ell.clone(),
                    outcome,
                });
            }
        }
    }
    Ok(tally)
}

fn run_all(
    inst: &FoascInstance,
    pairs: u128,
    masks: &(dyn Fn() -> Box<dyn Iterator<Item = u128>> + Sync),
    fault: Option<Fault>,
) -> Result<Tally, VerifyError> {
    let n = inst.n() as u128;
    let codec = inst.randomness();
    let tallies: Vec<Tally> = (0..pairs as u64)
        .into_par_iter()
        .map(|p| {
            let p = p as u128;
            let i = (p % n) as usize;
            let ell = codec.from_index(p / n);
            run_pair(inst, i, ell, &mut *masks(), fault)
        })
        .collect::<Result<_, _>>()?;
    Ok(tallies.into_iter().fold(Tally::new(), Tally::merge))
}

fn check_fault(inst: &FoascInstance, fault: Option<Fault>) -> Result<(), VerifyError> {
    if let Some(f) = fault {
        let width = inst.ring_codec().len();
        if f.server >= inst.k() || f.digit >= width {
            return Err(VerifyError::Param(format!(
                "fault at server {} digit {} outside k = {}, {width} digits",
                f.server,
                f.digit,
                inst.k()
            )));
        }
    }
    Ok(())
}

/// The full query/answer/reconstruct round trip for every database, every
/// index and every `ell`.
pub fn exhaustive_correctness(
    inst: &FoascInstance,
    config: &CorrectnessConfig,
) -> Result<CorrectnessReport, VerifyError> {
    check_fault(inst, config.fault)?;
    let n = inst.n();
    if n >= 64 {
        return Err(VerifyError::BudgetExceeded {
            what: "exhaustive correctness",
            size: u128::MAX,
            budget: config.budget,
        });
    }
    let databases = 1u128 << n;
    let pairs = pairs(inst, config.budget, databases, "exhaustive correctness")?;
    let gray = move || -> Box<dyn Iterator<Item = u128>> {
        Box::new((0..databases).map(|g| g ^ (g >> 1)))
    };
    let tally = run_all(inst, pairs, &gray, config.fault)?;
    Ok(report(
        inst,
        CorrectnessMode::Exhaustive,
        config.fault,
        databases,
        pairs,
        tally,
    ))
}

/// The round trip on the zero database and every unit database, for every
/// index and every `ell`.
///
/// Answers are sums of `alpha` values, so `y` is additive in `x`; once
/// `y(0) = 0` and `y(e_tau) = [tau = i] omega` hold, every database
/// reconstructs correctly.
pub fn basis_correctness(
    inst: &FoascInstance,
    config: &CorrectnessConfig,
) -> Result<CorrectnessReport, VerifyError> {
    check_fault(inst, config.fault)?;
    let n = inst.n();
    if n > 127 {
        return Err(VerifyError::Param(format!("n = {n} exceeds 127")));
    }
    let databases = n as u128 + 1;
    let pairs = pairs(inst, config.budget, databases, "basis correctness")?;
    let basis = move || -> Box<dyn Iterator<Item = u128>> {
        Box::new(std::iter::once(0).chain((0..n).map(|tau| 1u128 << tau)))
    };
    let tally = run_all(inst, pairs, &basis, config.fault)?;
    Ok(report(
        inst,
        CorrectnessMode::Basis,
        config.fault,
        databases,
        pairs,
        tally,
    ))
}

fn report(
    inst: &FoascInstance,
    mode: CorrectnessMode,
    fault: Option<Fault>,
    databases: u128,
    pairs: u128,
    tally: Tally,
) -> CorrectnessReport {
    CorrectnessReport {
        protocol: inst.protocol().to_string(),
        mode,
        fault,
        databases,
        pairs,
        rounds: tally.rounds,
        failure_count: tally.count,
        failures: tally.kept,
    }
}
