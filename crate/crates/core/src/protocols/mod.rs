//! Concrete FOASC instantiations and the negative-control instances used to
//! exercise the verifiers.

mod cgks;
mod controls;
mod curve;
mod dvir_gopi;
mod efremenko;
mod example;
mod gks;
mod registry;
mod yekhanin;

pub use cgks::{build_cgks, Cgks};
pub use controls::{broken_privacy, broken_span, trivial_instance};
pub use curve::{
    build_lagrange, build_wy_hermite, colex_weight_vectors, hermite_matrix, Curve, CurveKind,
};
pub use dvir_gopi::{build_dvir_gopi, solve_mu_nu, DvirGopi, MuNu};
pub use efremenko::{build_efremenko, Efremenko};
pub use example::{build_example, example_tables, ExampleTwo};
pub use gks::{build_gks, Gks};
pub use registry::{build, desk_instances, param_report, ParamReport, Params, PROTOCOLS};
pub use yekhanin::{build_raghavendra, build_yekhanin, Raghavendra, Yekhanin};

use thiserror::Error;

use crate::algebra::AlgebraError;
use crate::mv::MvError;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ProtocolError {
    #[error("invalid parameter: {0}")]
    Param(String),
    #[error("unknown protocol {0:?}")]
    UnknownProtocol(String),
    #[error("Hermite matrix is singular over F_{0}")]
    SingularM(u64),
    #[error("no (mu, nu) with nu nonzero modulo every prime of {0}")]
    NoMuNu(u64),
    #[error(transparent)]
    Mv(#[from] MvError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

/// Inner product in `Z_m`.
pub(crate) fn dot_mod(a: &[u64], b: &[u64], m: u64) -> u64 {
    a.iter()
        .zip(b)
        .fold(0, |acc, (x, y)| (acc + x % m * (y % m)) % m)
}

/// `w + d v` componentwise in `Z_m`.
pub(crate) fn shifted(w: &[u64], d: u64, v: &[u64], m: u64) -> Vec<u64> {
    w.iter()
        .zip(v)
        .map(|(a, b)| (a + d % m * (b % m)) % m)
        .collect()
}
