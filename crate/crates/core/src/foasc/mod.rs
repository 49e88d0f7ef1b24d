//! The FOASC abstraction and the generic query / answer / reconstruct engine.
//!
//! A [`Construction`] supplies the `n` orthogonal arrays implicitly through
//! `row(i, ell)`, the encoding maps `alpha_tau`, and per-row reconstruction
//! coefficients. [`FoascInstance`] wraps one and runs the three-algorithm
//! protocol over it, plus the span and cost checks.

mod codec;
mod engine;
mod oa;
mod ring;

pub use codec::Codec;
pub use engine::{CommCost, SpanVerdict};
pub use oa::{materialize_oa, oa_strength_check, OaMatrix, OaVerdict, DEFAULT_OA_CAP};
pub use ring::{Base, RingSpec, RingVec};

use std::fmt;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FoascError {
    #[error("malformed value: {0}")]
    MalformedValue(String),
    #[error("malformed query: {0}")]
    MalformedQuery(String),
    #[error("index {index} out of range for n = {n}")]
    IndexOutOfRange { index: usize, n: usize },
    #[error("database has {got} entries, instance expects {expected}")]
    DatabaseMismatch { expected: usize, got: usize },
    #[error("expected {expected} answers, got {got}")]
    WrongAnswerCount { expected: usize, got: usize },
    #[error("reconstructed value is neither 0 nor omega")]
    InconsistentAnswer,
    #[error("reconstruction scalar omega is zero")]
    ZeroOmega,
    #[error("empty database")]
    EmptyDatabase,
    #[error("{what} of size {size} exceeds cap {cap}")]
    CapExceeded {
        what: &'static str,
        size: u128,
        cap: u128,
    },
}

/// A query point in the level set, as codec digits.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LevelPoint(pub Vec<u64>);

/// Reconstruction coefficients for one `(i, ell)`: `k` ring vectors and a
/// nonzero base scalar with `alpha(Q_ell^(i)) . lambda = omega e_i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReconCoeff {
    pub lambda: Vec<RingVec>,
    pub omega: Vec<u64>,
}

/// Client-side reconstruction state: the retrieval index and the row drawn.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Aux {
    pub index: usize,
    pub ell: Vec<u64>,
}

/// The database `x in {0,1}^n`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Database {
    bits: Vec<bool>,
}

impl Database {
    pub fn new(bits: Vec<bool>) -> Result<Self, FoascError> {
        if bits.is_empty() {
            return Err(FoascError::EmptyDatabase);
        }
        Ok(Self { bits })
    }

    /// Bit `tau` of `mask` becomes entry `tau`.
    pub fn from_mask(n: usize, mask: u64) -> Self {
        assert!((1..=64).contains(&n));
        Self {
            bits: (0..n).map(|tau| mask >> tau & 1 == 1).collect(),
        }
    }

    /// Uniform bits from a ChaCha8 stream seeded with `seed`.
    pub fn random(n: usize, seed: u64) -> Result<Self, FoascError> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        Self::new((0..n).map(|_| rng.gen_bool(0.5)).collect())
    }

    pub fn zeros(n: usize) -> Self {
        Self {
            bits: vec![false; n.max(1)],
        }
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn get(&self, tau: usize) -> bool {
        self.bits[tau]
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }
}

/// A family of orthogonal arrays with span capability, given by callbacks.
///
/// Indices `i`, `tau` are 0-based. `ell` is a digit vector under
/// [`Construction::randomness`]; every digit vector is a valid row.
pub trait Construction: Send + Sync + fmt::Debug {
    /// Short protocol identifier, e.g. `cgks`.
    fn protocol(&self) -> &'static str;
    fn n(&self) -> usize;
    fn k(&self) -> usize;
    fn t(&self) -> usize;
    fn level_codec(&self) -> &Codec;
    fn ring(&self) -> &RingSpec;
    fn randomness(&self) -> &Codec;
    fn row(&self, i: usize, ell: &[u64]) -> Vec<LevelPoint>;
    fn alpha(&self, tau: usize, z: &LevelPoint) -> RingVec;
    fn recon(&self, i: usize, ell: &[u64]) -> ReconCoeff;
    /// Canonical public parameters; feeds the deployment digest and reports.
    fn public_params(&self) -> Vec<(String, String)>;
    /// Closed-form communication in bits as the construction is usually
    /// stated, when one exists.
    fn predicted_bits(&self) -> Option<f64> {
        None
    }
    /// Free-form remarks for parameter reports.
    fn notes(&self) -> Vec<String> {
        Vec::new()
    }
}

/// Shareable handle to a construction with the engine operations attached.
#[derive(Debug, Clone)]
pub struct FoascInstance {
    inner: Arc<dyn Construction>,
}

impl FoascInstance {
    pub fn new<C: Construction + 'static>(c: C) -> Self {
        Self { inner: Arc::new(c) }
    }

    pub fn construction(&self) -> &dyn Construction {
        self.inner.as_ref()
    }

    pub fn protocol(&self) -> &'static str {
        self.inner.protocol()
    }
    pub fn n(&self) -> usize {
        self.inner.n()
    }
    pub fn k(&self) -> usize {
        self.inner.k()
    }
    pub fn t(&self) -> usize {
        self.inner.t()
    }
    pub fn level_codec(&self) -> &Codec {
        self.inner.level_codec()
    }
    pub fn ring(&self) -> &RingSpec {
        self.inner.ring()
    }
    pub fn ring_codec(&self) -> Codec {
        self.inner.ring().codec()
    }
    pub fn randomness(&self) -> &Codec {
        self.inner.randomness()
    }
    /// Row count `N`, `None` when it overflows `u128`.
    pub fn row_count(&self) -> Option<u128> {
        self.inner.randomness().size()
    }
    pub fn row(&self, i: usize, ell: &[u64]) -> Vec<LevelPoint> {
        self.inner.row(i, ell)
    }
    pub fn alpha(&self, tau: usize, z: &LevelPoint) -> RingVec {
        self.inner.alpha(tau, z)
    }
    pub fn recon(&self, i: usize, ell: &[u64]) -> ReconCoeff {
        self.inner.recon(i, ell)
    }
}
