//! Matching-vector ingredients: canonical sets, matching families, decoding
//! polynomials, algebraically nice sets, 0-interpolation weights and the
//! `k_r` server-count table.

mod decoding;
mod interp;
mod matching;
mod nice;

pub use decoding::{
    sparse_decoding_poly_search, trivial_decoding_poly, DecodingPoly, SparseSearch,
};
pub use interp::{lifted_support, zero_interpolation_weights, InterpolationWeights};
pub use matching::{check_matching_family, search_matching_family, FamilySearch, MatchingFamily};
pub use nice::{yekhanin_nice_sets, NiceSets};

use num_bigint::BigUint;
use thiserror::Error;

use crate::algebra::{factor, AlgebraError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MvError {
    #[error("invalid parameter: {0}")]
    Param(String),
    #[error("search exhausted: {0}")]
    Exhausted(String),
    #[error("{what} of size {size} exceeds cap {cap}")]
    CapExceeded {
        what: &'static str,
        size: u128,
        cap: u128,
    },
    #[error("matching family invalid: {0}")]
    InvalidFamily(String),
    #[error("decoding polynomial invalid: {0}")]
    InvalidDecodingPoly(String),
    #[error("no nonempty S0 exists for p = {0}")]
    NoNiceS0(u64),
    #[error("interpolation set invalid: {0}")]
    InterpolationSetInvalid(String),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

/// Distinct prime factors of a squarefree `m`.
pub fn squarefree_primes(m: u64) -> Result<Vec<u64>, MvError> {
    if m < 2 {
        return Err(MvError::Param(format!("modulus {m} must be at least 2")));
    }
    let f = factor(m);
    if f.iter().any(|&(_, e)| e > 1) {
        return Err(AlgebraError::NotSquarefree(m).into());
    }
    Ok(f.into_iter().map(|(q, _)| q).collect())
}

/// `S_m`: the nonzero `delta in Z_m` with `delta mod q in {0, 1}` for every
/// prime `q | m`, in increasing order.
pub fn canonical_set(m: u64) -> Result<Vec<u64>, MvError> {
    let primes = squarefree_primes(m)?;
    Ok((1..m)
        .filter(|d| primes.iter().all(|q| d % q <= 1))
        .collect())
}

/// Server count `k_r` of the good-modulus construction.
pub fn k_r_table(r: u32) -> Result<BigUint, MvError> {
    if r < 2 {
        return Err(MvError::Param(format!("r = {r} must be at least 2")));
    }
    let three = BigUint::from(3u32);
    Ok(if r <= 103 {
        if r.is_multiple_of(2) {
            three.pow(r / 2)
        } else {
            BigUint::from(8u32) * three.pow((r - 3) / 2)
        }
    } else {
        // (3/4)^51 * 2^r = 3^51 * 2^(r - 102)
        three.pow(51) << (r - 102) as usize
    })
}
