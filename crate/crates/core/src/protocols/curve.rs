use super::ProtocolError;
use crate::algebra::{solve, AlgebraError, Matrix, PrimeField, Ring};
use crate::foasc::{
    Base, Codec, Construction, FoascInstance, LevelPoint, ReconCoeff, RingSpec, RingVec,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CurveKind {
    Lagrange,
    Hermite,
}

/// Curve-hiding protocols: `q_j = u_i + R (j, j^2, .., j^t)` over `F_p^h`
/// with weight-`d` binary exponent vectors `u_i`.
#[derive(Debug, Clone)]
pub struct Curve {
    kind: CurveKind,
    field: PrimeField,
    n: usize,
    k: usize,
    t: usize,
    d: usize,
    h: usize,
    /// Support of each `u_tau` (the `d` coordinates equal to 1).
    supports: Vec<Vec<usize>>,
    level: Codec,
    ring: RingSpec,
    randomness: Codec,
    /// Per-server scalar weights: Lagrange coefficients, or the Hermite
    /// solution interleaved as `(value, derivative)` per point.
    weights: Vec<u64>,
}

/// The first `n` `d`-subsets of `0..h` in colexicographic order.
pub fn colex_weight_vectors(h: usize, d: usize, n: usize) -> Vec<Vec<usize>> {
    let mut all = Vec::new();
    if d > h {
        return all;
    }
    let mut cur: Vec<usize> = (0..d).collect();
    while all.len() < n {
        all.push(cur.clone());
        let limit = |pos: usize, cur: &[usize]| if pos + 1 == d { h } else { cur[pos + 1] };
        let Some(pos) = (0..d).find(|&pos| cur[pos] + 1 < limit(pos, &cur)) else {
            break;
        };
        cur[pos] += 1;
        for (q, slot) in cur.iter_mut().enumerate().take(pos) {
            *slot = q;
        }
    }
    all
}

fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}

/// `M` with `M[c][2j] = theta_j^c` and `M[c][2j+1] = c theta_j^(c-1)` for
/// `theta_j = j + 1`, `c < 2k`.
pub fn hermite_matrix(field: &PrimeField, k: usize) -> Matrix {
    let mut m = vec![vec![0u64; 2 * k]; 2 * k];
    for (c, row) in m.iter_mut().enumerate() {
        for j in 0..k {
            let theta = field.from_int(j as u64 + 1);
            row[2 * j] = field.pow(&theta, c as u64);
            row[2 * j + 1] = if c == 0 {
                0
            } else {
                field.mul(&field.from_int(c as u64), &field.pow(&theta, c as u64 - 1))
            };
        }
    }
    m
}

fn lagrange_at_zero(field: &PrimeField, k: usize) -> Result<Vec<u64>, AlgebraError> {
    (1..=k as u64)
        .map(|j| {
            let mut acc = 1;
            for jp in (1..=k as u64).filter(|&jp| jp != j) {
                let den = field.sub(&field.from_int(jp), &field.from_int(j));
                acc = field.mul(&acc, &field.mul(&field.from_int(jp), &field.inv(&den)?));
            }
            Ok(acc)
        })
        .collect()
}

fn common(
    n: usize,
    t: usize,
    k: usize,
    p: u64,
    d: usize,
) -> Result<(PrimeField, usize), ProtocolError> {
    if n == 0 {
        return Err(ProtocolError::Param("n must be at least 1".into()));
    }
    if t == 0 || t >= k {
        return Err(ProtocolError::Param(format!(
            "need 1 <= t < k, got t = {t}, k = {k}"
        )));
    }
    let field = PrimeField::new(p)?;
    if d == 0 {
        return Err(ProtocolError::Param(
            "degree bound d must be at least 1".into(),
        ));
    }
    let h = (d..)
        .take_while(|&h| h <= 64)
        .find(|&h| binomial(h, d) >= n as u128)
        .ok_or_else(|| ProtocolError::Param(format!("no h <= 64 with C(h, {d}) >= {n}")))?;
    Ok((field, h))
}

fn assemble(
    kind: CurveKind,
    field: PrimeField,
    n: usize,
    k: usize,
    t: usize,
    d: usize,
    h: usize,
    weights: Vec<u64>,
) -> FoascInstance {
    let p = field.modulus();
    let dim = match kind {
        CurveKind::Lagrange => 1,
        CurveKind::Hermite => h + 1,
    };
    FoascInstance::new(Curve {
        kind,
        n,
        k,
        t,
        d,
        h,
        supports: colex_weight_vectors(h, d, n),
        level: Codec::uniform(p, h),
        ring: RingSpec::new(Base::Prime(field), dim),
        randomness: Codec::uniform(p, h * t),
        field,
        weights,
    })
}

pub fn build_lagrange(
    n: usize,
    t: usize,
    k: usize,
    p: u64,
) -> Result<FoascInstance, ProtocolError> {
    let d = (k - 1).checked_div(t).unwrap_or(0);
    let (field, h) = common(n, t, k, p, d)?;
    if p <= k as u64 {
        return Err(ProtocolError::Param(format!(
            "need p > k, got p = {p}, k = {k}"
        )));
    }
    let weights = lagrange_at_zero(&field, k)?;
    Ok(assemble(CurveKind::Lagrange, field, n, k, t, d, h, weights))
}

pub fn build_wy_hermite(
    n: usize,
    t: usize,
    k: usize,
    p: u64,
) -> Result<FoascInstance, ProtocolError> {
    let d = (2 * k - 1).checked_div(t).unwrap_or(0);
    let (field, h) = common(n, t, k, p, d)?;
    if p < 2 * k as u64 {
        return Err(ProtocolError::Param(format!(
            "need p > 2k - 1, got p = {p}, k = {k}"
        )));
    }
    let m = hermite_matrix(&field, k);
    let mut e1 = vec![0u64; 2 * k];
    e1[0] = 1;
    let weights = solve(&field, &m, &e1).map_err(|_| ProtocolError::SingularM(p))?;
    Ok(assemble(CurveKind::Hermite, field, n, k, t, d, h, weights))
}

impl Curve {
    pub fn kind(&self) -> CurveKind {
        self.kind
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn h(&self) -> usize {
        self.h
    }

    /// `u_tau` as a 0/1 vector.
    pub fn exponent_vector(&self, tau: usize) -> Vec<u64> {
        let mut u = vec![0; self.h];
        for &c in &self.supports[tau] {
            u[c] = 1;
        }
        u
    }

    /// Server weights; for Hermite, interleaved value and derivative.
    pub fn weights(&self) -> &[u64] {
        &self.weights
    }

    fn r(&self, ell: &[u64], a: usize, b: usize) -> u64 {
        ell[a * self.t + b]
    }

    /// `q(theta)` for the row `ell` hiding `i`.
    pub fn curve_point(&self, i: usize, ell: &[u64], theta: u64) -> Vec<u64> {
        let f = &self.field;
        let mut q = self.exponent_vector(i);
        for (a, qa) in q.iter_mut().enumerate() {
            let mut pw = 1;
            for b in 0..self.t {
                pw = f.mul(&pw, &theta);
                *qa = f.add(qa, &f.mul(&self.r(ell, a, b), &pw));
            }
        }
        q
    }

    /// `q'(theta) = R (1, 2 theta, .., t theta^(t-1))`.
    fn tangent(&self, ell: &[u64], theta: u64) -> Vec<u64> {
        let f = &self.field;
        (0..self.h)
            .map(|a| {
                (0..self.t).fold(0, |acc, b| {
                    let c = f.mul(&f.from_int(b as u64 + 1), &f.pow(&theta, b as u64));
                    f.add(&acc, &f.mul(&c, &self.r(ell, a, b)))
                })
            })
            .collect()
    }

    fn monomial(&self, support: &[usize], z: &[u64], skip: Option<usize>) -> u64 {
        support
            .iter()
            .filter(|&&c| Some(c) != skip)
            .fold(1, |acc, &c| self.field.mul(&acc, &z[c]))
    }
}

impl Construction for Curve {
    fn protocol(&self) -> &'static str {
        match self.kind {
            CurveKind::Lagrange => "lagrange",
            CurveKind::Hermite => "wy",
        }
    }
    fn n(&self) -> usize {
        self.n
    }
    fn k(&self) -> usize {
        self.k
    }
    fn t(&self) -> usize {
        self.t
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
    fn row(&self, i: usize, ell: &[u64]) -> Vec<LevelPoint> {
        (1..=self.k as u64)
            .map(|j| LevelPoint(self.curve_point(i, ell, j)))
            .collect()
    }
    fn alpha(&self, tau: usize, z: &LevelPoint) -> RingVec {
        let support = &self.supports[tau];
        let value = self.monomial(support, &z.0, None);
        match self.kind {
            CurveKind::Lagrange => RingVec(vec![value]),
            CurveKind::Hermite => {
                let mut out = Vec::with_capacity(self.h + 1);
                out.push(value);
                for c in 0..self.h {
                    out.push(if support.contains(&c) {
                        self.monomial(support, &z.0, Some(c))
                    } else {
                        0
                    });
                }
                RingVec(out)
            }
        }
    }
    fn recon(&self, _i: usize, ell: &[u64]) -> ReconCoeff {
        let f = &self.field;
        let lambda = match self.kind {
            CurveKind::Lagrange => self.weights.iter().map(|&w| RingVec(vec![w])).collect(),
            CurveKind::Hermite => (0..self.k)
                .map(|j| {
                    let tangent = self.tangent(ell, j as u64 + 1);
                    let mut block = Vec::with_capacity(self.h + 1);
                    block.push(self.weights[2 * j]);
                    block.extend(tangent.iter().map(|x| f.mul(x, &self.weights[2 * j + 1])));
                    RingVec(block)
                })
                .collect(),
        };
        ReconCoeff {
            lambda,
            omega: vec![1],
        }
    }
    fn public_params(&self) -> Vec<(String, String)> {
        vec![
            ("n".into(), self.n.to_string()),
            ("t".into(), self.t.to_string()),
            ("k".into(), self.k.to_string()),
            ("p".into(), self.field.modulus().to_string()),
            ("d".into(), self.d.to_string()),
            ("h".into(), self.h.to_string()),
        ]
    }
    fn predicted_bits(&self) -> Option<f64> {
        let lp = (self.field.modulus() as f64).log2();
        let h = self.h as f64;
        Some(match self.kind {
            CurveKind::Lagrange => self.k as f64 * (h * lp + lp),
            CurveKind::Hermite => self.k as f64 * (h * lp + (h + 1.0) * lp),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn colex_order_small() {
        assert_eq!(
            colex_weight_vectors(4, 2, 6),
            vec![
                vec![0, 1],
                vec![0, 2],
                vec![1, 2],
                vec![0, 3],
                vec![1, 3],
                vec![2, 3]
            ]
        );
        assert_eq!(
            colex_weight_vectors(3, 1, 5),
            vec![vec![0], vec![1], vec![2]]
        );
        assert_eq!(colex_weight_vectors(4, 3, 4).len(), 4);
    }

    #[test]
    fn lagrange_weights_f5() {
        let f = PrimeField::new(5).unwrap();
        assert_eq!(lagrange_at_zero(&f, 3).unwrap(), vec![3, 2, 1]);
    }

    #[test]
    fn hermite_matrix_nonsingular() {
        for k in [2usize, 3] {
            for p in [7u64, 11, 13] {
                let f = PrimeField::new(p).unwrap();
                let det = crate::algebra::determinant(&f, &hermite_matrix(&f, k)).unwrap();
                assert_ne!(det, 0, "k={k} p={p}");
            }
        }
    }

    #[test]
    fn hermite_k1_is_taylor() {
        let f = PrimeField::new(7).unwrap();
        let mu = solve(&f, &hermite_matrix(&f, 1), &[1, 0]).unwrap();
        assert_eq!(mu, vec![1, f.neg(&1)]);
    }

    #[test]
    fn curve_at_zero_selects_index() {
        let inst = build_lagrange(3, 1, 3, 5).unwrap();
        for i in 0..3 {
            for tau in 0..3 {
                // q(0) = u_i, so alpha_tau(q(0)) = u_i^{u_tau}
                let mut z = vec![0; 3];
                for c in colex_weight_vectors(3, 2, 3)[i].iter() {
                    z[*c] = 1;
                }
                let a = inst.alpha(tau, &LevelPoint(z));
                assert_eq!(a.0, vec![(tau == i) as u64]);
            }
        }
    }

    #[test]
    fn parameter_checks() {
        assert!(build_lagrange(3, 1, 3, 3).is_err());
        assert!(build_lagrange(3, 3, 3, 5).is_err());
        assert!(build_wy_hermite(4, 1, 2, 3).is_err());
        assert!(build_wy_hermite(4, 1, 2, 7).is_ok());
    }
}
