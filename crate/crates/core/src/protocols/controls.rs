//! Deliberately defective instances. Each verifier must reject one of them.

use super::example::ExampleTwo;
use crate::algebra::PrimeField;
use crate::foasc::{
    Base, Codec, Construction, FoascInstance, LevelPoint, ReconCoeff, RingSpec, RingVec,
};

/// The two-entry example with `row` ignoring `ell`: every query reveals `i`.
#[derive(Debug, Clone)]
struct FixedRow(ExampleTwo);

impl Construction for FixedRow {
    fn protocol(&self) -> &'static str {
        "broken-privacy"
    }
    fn n(&self) -> usize {
        self.0.n()
    }
    fn k(&self) -> usize {
        self.0.k()
    }
    fn t(&self) -> usize {
        self.0.t()
    }
    fn level_codec(&self) -> &Codec {
        self.0.level_codec()
    }
    fn ring(&self) -> &RingSpec {
        self.0.ring()
    }
    fn randomness(&self) -> &Codec {
        self.0.randomness()
    }
    fn row(&self, i: usize, _ell: &[u64]) -> Vec<LevelPoint> {
        self.0.row(i, &[0])
    }
    fn alpha(&self, tau: usize, z: &LevelPoint) -> RingVec {
        self.0.alpha(tau, z)
    }
    fn recon(&self, i: usize, ell: &[u64]) -> ReconCoeff {
        self.0.recon(i, ell)
    }
    fn public_params(&self) -> Vec<(String, String)> {
        vec![("defect".into(), "row ignores ell".into())]
    }
}

pub fn broken_privacy() -> FoascInstance {
    FoascInstance::new(FixedRow(ExampleTwo::with_lambda([2, 2])))
}

/// The two-entry example reconstructing with `lambda = (1, 1)`.
#[derive(Debug, Clone)]
struct WrongLambda(ExampleTwo);

impl Construction for WrongLambda {
    fn protocol(&self) -> &'static str {
        "broken-span"
    }
    fn n(&self) -> usize {
        self.0.n()
    }
    fn k(&self) -> usize {
        self.0.k()
    }
    fn t(&self) -> usize {
        self.0.t()
    }
    fn level_codec(&self) -> &Codec {
        self.0.level_codec()
    }
    fn ring(&self) -> &RingSpec {
        self.0.ring()
    }
    fn randomness(&self) -> &Codec {
        self.0.randomness()
    }
    fn row(&self, i: usize, ell: &[u64]) -> Vec<LevelPoint> {
        self.0.row(i, ell)
    }
    fn alpha(&self, tau: usize, z: &LevelPoint) -> RingVec {
        self.0.alpha(tau, z)
    }
    fn recon(&self, i: usize, ell: &[u64]) -> ReconCoeff {
        self.0.recon(i, ell)
    }
    fn public_params(&self) -> Vec<(String, String)> {
        vec![("lambda".into(), format!("{:?}", self.0.lambda))]
    }
}

pub fn broken_span() -> FoascInstance {
    FoascInstance::new(WrongLambda(ExampleTwo::with_lambda([1, 1])))
}

/// `n = 1`, `k = 1`, `t = 0`: a single server answering `x_1` to the only
/// possible query.
#[derive(Debug, Clone)]
struct Trivial {
    level: Codec,
    ring: RingSpec,
    randomness: Codec,
}

pub fn trivial_instance() -> FoascInstance {
    FoascInstance::new(Trivial {
        level: Codec::uniform(1, 1),
        ring: RingSpec::new(Base::Prime(PrimeField::new(2).expect("2 is prime")), 1),
        randomness: Codec::empty(),
    })
}

impl Construction for Trivial {
    fn protocol(&self) -> &'static str {
        "trivial"
    }
    fn n(&self) -> usize {
        1
    }
    fn k(&self) -> usize {
        1
    }
    fn t(&self) -> usize {
        0
    }
    fn level_codec(&self) -> &Codec {
        &self.level
    }
    fn ring(&self) -> &RingSpec {
        &self.ring
    }
    fn randomness(&self) -> &Codec {
        &self.randomness
    }
    fn row(&self, _i: usize, _ell: &[u64]) -> Vec<LevelPoint> {
        vec![LevelPoint(vec![0])]
    }
    fn alpha(&self, _tau: usize, _z: &LevelPoint) -> RingVec {
        RingVec(vec![1])
    }
    fn recon(&self, _i: usize, _ell: &[u64]) -> ReconCoeff {
        ReconCoeff {
            lambda: vec![RingVec(vec![1])],
            omega: vec![1],
        }
    }
    fn public_params(&self) -> Vec<(String, String)> {
        Vec::new()
    }
    fn predicted_bits(&self) -> Option<f64> {
        Some(1.0)
    }
}
