use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sha2::{Digest, Sha256};

use super::{Aux, Database, FoascError, FoascInstance, LevelPoint, RingVec};

/// Outcome of checking the span identity at one `(i, ell)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SpanVerdict {
    Pass,
    ZeroOmega,
    Failure {
        tau: usize,
        expected: Vec<u64>,
        got: Vec<u64>,
    },
}

impl SpanVerdict {
    pub fn is_pass(&self) -> bool {
        matches!(self, SpanVerdict::Pass)
    }
}

/// Per-retrieval communication of an instance.
#[derive(Debug, Clone, PartialEq)]
pub struct CommCost {
    pub k: usize,
    /// `log2 |S|`.
    pub level_bits: f64,
    /// `log2 |R|`.
    pub ring_bits: f64,
    /// `k (log2 |S| + log2 |R|)`.
    pub raw_bits: f64,
    /// `k` times the per-digit `bitlen(radix - 1)` widths of both codecs.
    pub packed_bits: u64,
    pub level_bytes: usize,
    pub ring_bytes: usize,
    /// Payload bytes on the wire, all servers, both directions.
    pub wire_bytes: usize,
}

impl FoascInstance {
    fn check_index(&self, i: usize) -> Result<(), FoascError> {
        if i >= self.n() {
            return Err(FoascError::IndexOutOfRange {
                index: i,
                n: self.n(),
            });
        }
        Ok(())
    }

    /// Draws `ell` uniformly from the randomness space.
    ///
    /// Each digit is sampled with `gen_range`, which rejects to avoid modulo
    /// bias; the output is a pure function of `seed`.
    pub fn sample_ell(&self, seed: u64) -> Vec<u64> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        self.sample_ell_with(&mut rng)
    }

    pub fn sample_ell_with<R: Rng + ?Sized>(&self, rng: &mut R) -> Vec<u64> {
        self.randomness()
            .radices()
            .map(|r| rng.gen_range(0..r))
            .collect()
    }

    /// `Q(k, n, i)`: returns the `k` queries and the client state.
    pub fn query_gen(&self, i: usize, seed: u64) -> Result<(Vec<LevelPoint>, Aux), FoascError> {
        self.check_index(i)?;
        let ell = self.sample_ell(seed);
        self.queries_for(i, ell)
    }

    /// Query generation with `ell` forced; used by the exhaustive suites.
    pub fn queries_for(
        &self,
        i: usize,
        ell: Vec<u64>,
    ) -> Result<(Vec<LevelPoint>, Aux), FoascError> {
        self.check_index(i)?;
        self.randomness().validate(&ell)?;
        let q = self.row(i, &ell);
        Ok((q, Aux { index: i, ell }))
    }

    /// `A(k, j, x, q)`: `sum_{tau : x_tau = 1} alpha_tau(q)`.
    pub fn answer(&self, x: &Database, q: &LevelPoint) -> Result<RingVec, FoascError> {
        if x.len() != self.n() {
            return Err(FoascError::DatabaseMismatch {
                expected: self.n(),
                got: x.len(),
            });
        }
        self.level_codec()
            .validate(&q.0)
            .map_err(|e| FoascError::MalformedQuery(e.to_string()))?;
        let ring = self.ring();
        let mut acc = ring.zero();
        for (tau, _) in x.bits().iter().enumerate().filter(|(_, b)| **b) {
            ring.add_assign(&mut acc, &self.alpha(tau, q));
        }
        Ok(acc)
    }

    /// Wire form of [`FoascInstance::answer`]: decode, answer, encode.
    pub fn answer_bytes(&self, x: &Database, query: &[u8]) -> Result<Vec<u8>, FoascError> {
        let digits = self
            .level_codec()
            .decode(query)
            .map_err(|e| FoascError::MalformedQuery(e.to_string()))?;
        let a = self.answer(x, &LevelPoint(digits))?;
        self.ring_codec().to_bytes(&a.0)
    }

    /// `y = sum_j <lambda_j, a_j>` for the row in `aux`.
    pub fn combine(
        &self,
        aux: &Aux,
        answers: &[RingVec],
    ) -> Result<(Vec<u64>, Vec<u64>), FoascError> {
        if answers.len() != self.k() {
            return Err(FoascError::WrongAnswerCount {
                expected: self.k(),
                got: answers.len(),
            });
        }
        let coeff = self.recon(aux.index, &aux.ell);
        let ring = self.ring();
        let mut y = ring.base.zero();
        for (lambda, a) in coeff.lambda.iter().zip(answers) {
            let term = ring.pair(lambda, a);
            ring.base.add_assign(&mut y, &term);
        }
        Ok((y, coeff.omega))
    }

    /// `C(k, n, a_1..a_k, aux)`: `1` iff `y = omega`.
    ///
    /// Correctness relies on `y in {0, omega}`; any other value is reported
    /// as [`FoascError::InconsistentAnswer`].
    pub fn reconstruct(&self, aux: &Aux, answers: &[RingVec]) -> Result<bool, FoascError> {
        let (y, omega) = self.combine(aux, answers)?;
        if omega.iter().all(|&d| d == 0) {
            return Err(FoascError::ZeroOmega);
        }
        if y == omega {
            Ok(true)
        } else if y.iter().all(|&d| d == 0) {
            Ok(false)
        } else {
            Err(FoascError::InconsistentAnswer)
        }
    }

    /// Checks `alpha(Q_ell^(i)) . lambda = omega e_i` row by row.
    pub fn span_check(&self, i: usize, ell: &[u64]) -> SpanVerdict {
        let coeff = self.recon(i, ell);
        self.span_check_with(i, ell, &coeff)
    }

    /// [`FoascInstance::span_check`] with caller-supplied coefficients.
    pub fn span_check_with(&self, i: usize, ell: &[u64], coeff: &super::ReconCoeff) -> SpanVerdict {
        let ring = self.ring();
        if coeff.omega.iter().all(|&d| d == 0) {
            return SpanVerdict::ZeroOmega;
        }
        let q = self.row(i, ell);
        let zero = ring.base.zero();
        for tau in 0..self.n() {
            let mut acc = ring.base.zero();
            for (lambda, qj) in coeff.lambda.iter().zip(&q) {
                let term = ring.pair(lambda, &self.alpha(tau, qj));
                ring.base.add_assign(&mut acc, &term);
            }
            let expected = if tau == i { &coeff.omega } else { &zero };
            if &acc != expected {
                return SpanVerdict::Failure {
                    tau,
                    expected: expected.clone(),
                    got: acc,
                };
            }
        }
        SpanVerdict::Pass
    }

    pub fn comm_cost(&self) -> CommCost {
        let level = self.level_codec();
        let ring = self.ring_codec();
        let k = self.k();
        let level_bits = level.log2_size();
        let ring_bits = ring.log2_size();
        CommCost {
            k,
            level_bits,
            ring_bits,
            raw_bits: k as f64 * (level_bits + ring_bits),
            packed_bits: k as u64 * (level.packed_bits() + ring.packed_bits()),
            level_bytes: level.byte_len(),
            ring_bytes: ring.byte_len(),
            wire_bytes: k * (level.byte_len() + ring.byte_len()),
        }
    }

    /// SHA-256 over the protocol id, public parameters and codec layouts.
    pub fn digest(&self) -> [u8; 32] {
        let mut h = Sha256::new();
        h.update(self.protocol().as_bytes());
        h.update(b"\n");
        for (key, value) in self.construction().public_params() {
            h.update(key.as_bytes());
            h.update(b"=");
            h.update(value.as_bytes());
            h.update(b"\n");
        }
        h.update(self.level_codec().describe().as_bytes());
        h.update(b"\n");
        h.update(self.ring_codec().describe().as_bytes());
        h.update(b"\n");
        h.update(self.randomness().describe().as_bytes());
        h.finalize().into()
    }
}
