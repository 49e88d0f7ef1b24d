use std::fmt;

use super::{kv_line, VerifyError};
use crate::foasc::FoascInstance;
use crate::sim::Transcript;

#[derive(Debug, Clone, PartialEq)]
pub struct CommAudit {
    pub protocol: String,
    pub raw_bits: f64,
    pub packed_bits: u64,
    pub payload_bytes: usize,
    pub framing_bytes: usize,
}

impl CommAudit {
    pub fn to_kv(&self) -> String {
        let mut out = String::new();
        kv_line(&mut out, "suite", "comm");
        kv_line(&mut out, "protocol", &self.protocol);
        kv_line(&mut out, "raw_bits", format!("{:.6}", self.raw_bits));
        kv_line(&mut out, "packed_bits", self.packed_bits);
        kv_line(&mut out, "payload_bytes", self.payload_bytes);
        kv_line(&mut out, "framing_bytes", self.framing_bytes);
        kv_line(&mut out, "verdict", "pass");
        out
    }
}

impl fmt::Display for CommAudit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "comm {} [PASS]: {:.3} raw bits, {} packed bits, {} payload bytes, {} framing bytes",
            self.protocol, self.raw_bits, self.packed_bits, self.payload_bytes, self.framing_bytes
        )
    }
}

/// Checks every measured payload against the codec widths of `inst`.
pub fn comm_audit(inst: &FoascInstance, transcript: &Transcript) -> Result<CommAudit, VerifyError> {
    let cost = inst.comm_cost();
    if transcript.exchanges.len() != cost.k {
        return Err(VerifyError::Param(format!(
            "transcript has {} exchanges, instance has k = {}",
            transcript.exchanges.len(),
            cost.k
        )));
    }
    for e in &transcript.exchanges {
        if e.query_payload != cost.level_bytes {
            return Err(VerifyError::Mismatch {
                direction: "query",
                server: e.server,
                expected: cost.level_bytes,
                got: e.query_payload,
            });
        }
        if e.answer_payload != cost.ring_bytes {
            return Err(VerifyError::Mismatch {
                direction: "answer",
                server: e.server,
                expected: cost.ring_bytes,
                got: e.answer_payload,
            });
        }
    }
    Ok(CommAudit {
        protocol: inst.protocol().to_string(),
        raw_bits: cost.raw_bits,
        packed_bits: cost.packed_bits,
        payload_bytes: transcript.payload_bytes(),
        framing_bytes: transcript.framing_bytes(),
    })
}
