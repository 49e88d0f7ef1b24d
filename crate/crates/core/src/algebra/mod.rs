//! Exact arithmetic for the structures the protocols run over: prime fields,
//! small extension fields, squarefree integer rings, the cyclic group ring
//! `Z_m[g]/(g^m - 1)`, sparse univariate polynomials, Hasse derivatives of
//! monomials and Gaussian elimination.
//!
//! Every structure is an immutable descriptor; elements are plain values and
//! all operations are pure.

mod ext;
mod group_ring;
mod hasse;
mod int_ring;
mod linalg;
mod poly;
mod prime;

pub use ext::ExtField;
pub use group_ring::GroupRing;
pub use hasse::{binomial_mod, hasse_of_monomial, multi_indices_below, MultiIndex};
pub use int_ring::{factor, IntRing};
pub use linalg::{determinant, nullspace, rank, solve, solve_mod, Matrix};
pub use poly::UniPoly;
pub use prime::{find_order_element, is_prime, PrimeField};

use std::fmt::Debug;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("modulus {0} is not squarefree")]
    NotSquarefree(u64),
    #[error("modulus {0} is out of range")]
    InvalidModulus(u64),
    #[error("element is not a unit")]
    NonUnit,
    #[error("no element of order {m} in F_{p}")]
    NoSuchElement { p: u64, m: u64 },
    #[error("linear system has no solution")]
    NoSolution,
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("modulus polynomial is reducible over F_{0}")]
    Reducible(u64),
}

/// A commutative ring with identity whose elements are plain values.
pub trait Ring {
    type Elem: Clone + PartialEq + Eq + Debug;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    /// Multiplicative inverse; `NonUnit` for zero and zero divisors.
    fn inv(&self, a: &Self::Elem) -> Result<Self::Elem, AlgebraError>;
    /// Image of the integer `v` under the canonical map `Z -> R`.
    fn from_int(&self, v: u64) -> Self::Elem;

    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        self.add(a, &self.neg(b))
    }

    fn is_zero(&self, a: &Self::Elem) -> bool {
        *a == self.zero()
    }

    fn pow(&self, a: &Self::Elem, mut e: u64) -> Self::Elem {
        let mut base = a.clone();
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            e >>= 1;
            if e > 0 {
                base = self.mul(&base, &base);
            }
        }
        acc
    }
}

/// Number of bits needed to write `v` in binary (`bitlen(0) = 0`).
pub fn bitlen(v: u64) -> u32 {
    64 - v.leading_zeros()
}

pub(crate) fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let r = a % b;
        a = b;
        b = r;
    }
    a
}

/// Inverse of `a` modulo `m` by the extended Euclidean algorithm.
pub(crate) fn inv_mod(a: u64, m: u64) -> Option<u64> {
    if m == 1 {
        return Some(0);
    }
    let (mut old_r, mut r) = (a as i128 % m as i128, m as i128);
    let (mut old_s, mut s) = (1i128, 0i128);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
    }
    if old_r != 1 {
        return None;
    }
    Some(old_s.rem_euclid(m as i128) as u64)
}
