use super::MvError;
use crate::algebra::{gcd, solve, AlgebraError, PrimeField, Ring};

/// Weights recovering the constant term of a polynomial supported on
/// `support` from its values (and, for `e = 2`, first derivatives) at
/// `points`.
///
/// For `e = 1` exponents live in `Z_m`; for `e = 2` they live in
/// `Z_{m p}` and `mu` is interleaved as `(value, derivative)` per point.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InterpolationWeights {
    pub p: u64,
    pub m: u64,
    pub e: u32,
    pub points: Vec<u64>,
    pub support: Vec<u64>,
    pub mu: Vec<u64>,
}

impl InterpolationWeights {
    pub fn exponent_modulus(&self) -> u64 {
        if self.e == 1 {
            self.m
        } else {
            self.m * self.p
        }
    }

    /// `sum_j mu_j * obs_j` where `obs` holds `e` observations per point.
    pub fn recover(&self, obs: &[u64]) -> u64 {
        let f = PrimeField::new(self.p).expect("validated at construction");
        obs.iter()
            .zip(&self.mu)
            .fold(0, |acc, (o, w)| f.add(&acc, &f.mul(o, w)))
    }
}

/// Observation row of the monomial `theta^delta` at `b`: its value, and for
/// `e = 2` also its first derivative `(delta mod p) b^(delta - 1)`.
pub(crate) fn monomial_observations(
    f: &PrimeField,
    m: u64,
    e: u32,
    b: u64,
    delta: u64,
) -> Vec<u64> {
    let value = f.pow(&b, delta % m);
    if e == 1 {
        return vec![value];
    }
    let scalar = delta % f.modulus();
    let deriv = f.mul(&scalar, &f.pow(&b, (delta % m + m - 1) % m));
    vec![value, deriv]
}

/// `phi(S x {0, .., e-1})` in `Z_{m p}` via the CRT, sorted.
pub fn lifted_support(m: u64, p: u64, base: &[u64], e: u32) -> Result<Vec<u64>, MvError> {
    if gcd(m, p) != 1 {
        return Err(MvError::Param(format!("gcd({m}, {p}) != 1")));
    }
    let mp = m * p;
    let mut out: Vec<u64> = base
        .iter()
        .flat_map(|&s| (0..e as u64).map(move |c| (s, c)))
        .map(|(s, c)| (0..mp).find(|x| x % m == s % m && x % p == c).expect("CRT"))
        .collect();
    out.sort_unstable();
    out.dedup();
    Ok(out)
}

/// Solves for 0-interpolation weights; `points` are elements of `H_m`.
pub fn zero_interpolation_weights(
    p: u64,
    m: u64,
    points: &[u64],
    support: &[u64],
    e: u32,
) -> Result<InterpolationWeights, MvError> {
    let f = PrimeField::new(p)?;
    if !(1..=2).contains(&e) {
        return Err(MvError::Param(format!("multiplicity {e} not supported")));
    }
    if !(p - 1).is_multiple_of(m) {
        return Err(MvError::Param(format!("{m} does not divide {p} - 1")));
    }
    for &b in points {
        if b == 0 || f.pow(&b, m) != 1 {
            return Err(MvError::Param(format!(
                "{b} is not an m-th root of unity in F_{p}"
            )));
        }
    }
    if !support.contains(&0) {
        return Err(MvError::Param("support must contain 0".into()));
    }
    let a: Vec<Vec<u64>> = support
        .iter()
        .map(|&delta| {
            points
                .iter()
                .flat_map(|&b| monomial_observations(&f, m, e, b, delta))
                .collect()
        })
        .collect();
    let rhs: Vec<u64> = support.iter().map(|&d| (d == 0) as u64).collect();
    let mu = solve(&f, &a, &rhs).map_err(|err| match err {
        AlgebraError::NoSolution => MvError::InterpolationSetInvalid(format!(
            "{points:?} cannot recover the constant term over support {support:?}"
        )),
        other => other.into(),
    })?;
    Ok(InterpolationWeights {
        p,
        m,
        e,
        points: points.to_vec(),
        support: support.to_vec(),
        mu,
    })
}
