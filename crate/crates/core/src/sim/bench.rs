use std::fmt::Write;
use std::time::Duration;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{run_inprocess_with, RunOptions, SimError};
use crate::foasc::Database;
use crate::protocols::{build, Params};

#[derive(Debug, Clone, PartialEq)]
pub struct BenchRow {
    pub n: usize,
    pub k: usize,
    pub raw_bits: f64,
    pub packed_bits: u64,
    /// Payload bytes measured on the in-process transport, identical in
    /// every trial.
    pub payload_bytes: usize,
    pub predicted_bits: Option<f64>,
    pub lower_bound_bits: f64,
    pub answer_time: Duration,
    pub client_time: Duration,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchTable {
    pub protocol: String,
    pub trials: usize,
    pub rows: Vec<BenchRow>,
}

/// `k^2 / (k - 1) * log2 n`, the reference curve without its constant; `n`
/// for a single server.
pub fn lower_bound_bits(n: usize, k: usize) -> f64 {
    if k < 2 {
        return n as f64;
    }
    let k = k as f64;
    k * k / (k - 1.0) * (n as f64).log2()
}

/// Communication and timing of `protocol` for each `n`, averaged over
/// `trials` random databases and indices.
pub fn bench(
    protocol: &str,
    params: &Params,
    n_values: &[usize],
    trials: usize,
    seed: u64,
) -> Result<BenchTable, SimError> {
    let mut rows = Vec::with_capacity(n_values.len());
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for &n in n_values {
        let p = Params {
            n: Some(n),
            ..params.clone()
        };
        let inst = build(protocol, &p)?;
        let cost = inst.comm_cost();
        let mut payload = None;
        let mut answer_time = Duration::ZERO;
        let mut client_time = Duration::ZERO;
        for _ in 0..trials.max(1) {
            let bits = (0..inst.n()).map(|_| rng.gen_bool(0.5)).collect();
            let x = Database::new(bits)?;
            let i = rng.gen_range(0..inst.n());
            let run = run_inprocess_with(
                &inst,
                &x,
                i,
                rng.gen(),
                &RunOptions {
                    assert_bit: true,
                    answer_order: None,
                },
            )?;
            run.outcome?;
            let bytes = run.transcript.payload_bytes();
            if *payload.get_or_insert(bytes) != bytes {
                return Err(SimError::PayloadVaries(n));
            }
            answer_time += run.server_time;
            client_time += run.transcript.client_time;
        }
        let t = trials.max(1) as u32;
        rows.push(BenchRow {
            n: inst.n(),
            k: inst.k(),
            raw_bits: cost.raw_bits,
            packed_bits: cost.packed_bits,
            payload_bytes: payload.unwrap_or(0),
            predicted_bits: inst.construction().predicted_bits(),
            lower_bound_bits: lower_bound_bits(inst.n(), inst.k()),
            answer_time: answer_time / t,
            client_time: client_time / t,
        });
    }
    Ok(BenchTable {
        protocol: protocol.to_string(),
        trials: trials.max(1),
        rows,
    })
}

impl BenchTable {
    /// Tab-separated table with a header row; timing columns only on request.
    pub fn render(&self, timing: bool) -> String {
        let mut out = String::new();
        out.push_str("n\tk\traw_bits\tpacked_bits\tpayload_bytes\tpredicted_bits\tlower_bound");
        if timing {
            out.push_str("\tanswer_us\tclient_us");
        }
        out.push('\n');
        for r in &self.rows {
            let predicted = r
                .predicted_bits
                .map_or("-".to_string(), |b| format!("{b:.3}"));
            let _ = write!(
                out,
                "{}\t{}\t{:.3}\t{}\t{}\t{}\t{:.3}",
                r.n, r.k, r.raw_bits, r.packed_bits, r.payload_bytes, predicted, r.lower_bound_bits
            );
            if timing {
                let _ = write!(
                    out,
                    "\t{:.1}\t{:.1}",
                    r.answer_time.as_secs_f64() * 1e6,
                    r.client_time.as_secs_f64() * 1e6
                );
            }
            out.push('\n');
        }
        out
    }
}
