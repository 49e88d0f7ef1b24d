use super::{dot_mod, shifted, ProtocolError};
use crate::algebra::{ExtField, PrimeField, Ring};
use crate::foasc::{
    Base, Codec, Construction, FoascInstance, LevelPoint, ReconCoeff, RingSpec, RingVec,
};
use crate::mv::{check_matching_family, MatchingFamily, MvError, NiceSets};

/// Shared row structure `q_j = w + d_j v_i` over `F_p^h`, `d = (0, 1, gamma)`.
#[derive(Debug, Clone)]
struct MersenneRows {
    nice: NiceSets,
    family: MatchingFamily,
    /// `<u_tau, 1_h>` for each entry.
    weights: Vec<u64>,
    level: Codec,
}

impl MersenneRows {
    fn new(family: MatchingFamily, nice: NiceSets) -> Result<Self, ProtocolError> {
        let p = nice.p;
        if family.modulus != p {
            return Err(ProtocolError::Param(format!(
                "family lives in Z_{}, expected F_{p}",
                family.modulus
            )));
        }
        let mut target = family.target.clone();
        target.sort_unstable();
        if target != nice.subgroup() {
            return Err(ProtocolError::Param(
                "family target set must be the subgroup <2>".into(),
            ));
        }
        check_matching_family(&family, true)?;
        if !nice.parity_holds() || nice.s0.is_empty() {
            return Err(MvError::NoNiceS0(p).into());
        }
        let weights = family.u.iter().map(|u| u.iter().sum::<u64>() % p).collect();
        Ok(Self {
            level: Codec::uniform(p, family.h),
            nice,
            family,
            weights,
        })
    }

    fn p(&self) -> u64 {
        self.nice.p
    }

    fn shifts(&self) -> [u64; 3] {
        [0, 1, self.nice.gamma]
    }

    fn row(&self, i: usize, ell: &[u64]) -> Vec<LevelPoint> {
        let p = self.p();
        self.shifts()
            .iter()
            .map(|&d| LevelPoint(shifted(ell, d, &self.family.v[i], p)))
            .collect()
    }

    fn params(&self) -> Vec<(String, String)> {
        vec![
            ("p".into(), self.p().to_string()),
            ("h".into(), self.family.h.to_string()),
            ("n".into(), self.family.len().to_string()),
            ("gamma".into(), self.nice.gamma.to_string()),
            ("S0".into(), format!("{:?}", self.nice.s0)),
            ("u".into(), format!("{:?}", self.family.u)),
            ("v".into(), format!("{:?}", self.family.v)),
        ]
    }
}

/// Three servers, answers in `F_2^p` built from the nice set `S_0`.
#[derive(Debug, Clone)]
pub struct Yekhanin {
    rows: MersenneRows,
    ring: RingSpec,
}

pub fn build_yekhanin(
    family: MatchingFamily,
    nice: NiceSets,
) -> Result<FoascInstance, ProtocolError> {
    let rows = MersenneRows::new(family, nice)?;
    let ring = RingSpec::new(Base::Prime(PrimeField::new(2)?), rows.p() as usize);
    Ok(FoascInstance::new(Yekhanin { rows, ring }))
}

impl Yekhanin {
    /// Smallest `rho` with `<u_i, w + rho 1_h> in S_0`.
    pub fn rho(&self, i: usize, ell: &[u64]) -> u64 {
        let p = self.rows.p();
        let base = dot_mod(&self.rows.family.u[i], ell, p);
        let s = self.rows.weights[i];
        (0..p)
            .find(|rho| self.rows.nice.s0.contains(&((base + rho * s) % p)))
            .expect("<u_i, 1> != 0 makes rho -> base + rho s a bijection")
    }
}

impl Construction for Yekhanin {
    fn protocol(&self) -> &'static str {
        "yekhanin"
    }
    fn n(&self) -> usize {
        self.rows.family.len()
    }
    fn k(&self) -> usize {
        3
    }
    fn t(&self) -> usize {
        1
    }
    fn level_codec(&self) -> &Codec {
        &self.rows.level
    }
    fn ring(&self) -> &RingSpec {
        &self.ring
    }
    fn randomness(&self) -> &Codec {
        &self.rows.level
    }
    fn row(&self, i: usize, ell: &[u64]) -> Vec<LevelPoint> {
        self.rows.row(i, ell)
    }
    fn alpha(&self, tau: usize, z: &LevelPoint) -> RingVec {
        let p = self.rows.p();
        let base = dot_mod(&self.rows.family.u[tau], &z.0, p);
        let s = self.rows.weights[tau];
        RingVec(
            (0..p)
                .map(|rho| self.rows.nice.s0.contains(&((base + rho * s) % p)) as u64)
                .collect(),
        )
    }
    fn recon(&self, i: usize, ell: &[u64]) -> ReconCoeff {
        let rho = self.rho(i, ell) as usize;
        let mut sel = vec![0u64; self.rows.p() as usize];
        sel[rho] = 1;
        ReconCoeff {
            lambda: vec![RingVec(sel); 3],
            omega: vec![1],
        }
    }
    fn public_params(&self) -> Vec<(String, String)> {
        self.rows.params()
    }
    fn predicted_bits(&self) -> Option<f64> {
        let p = self.rows.p() as f64;
        Some(3.0 * (self.rows.family.h as f64 * p.log2() + p))
    }
}

/// Three servers answering `g^<u_tau, z>` in `F_{2^r}`.
#[derive(Debug, Clone)]
pub struct Raghavendra {
    rows: MersenneRows,
    field: ExtField,
    /// `g^e` for `e in 0..p`.
    powers: Vec<Vec<u64>>,
    ring: RingSpec,
}

pub fn build_raghavendra(
    family: MatchingFamily,
    nice: NiceSets,
) -> Result<FoascInstance, ProtocolError> {
    let rows = MersenneRows::new(family, nice)?;
    let field = rows.nice.field.clone();
    let g = rows.nice.g.clone();
    let p = rows.p();
    let powers: Vec<Vec<u64>> = (0..p).map(|e| field.pow(&g, e)).collect();
    // P(theta) = 1 + theta + theta^gamma
    let eval = |e: u64| {
        let theta = field.pow(&g, e);
        let s = field.add(&field.one(), &theta);
        field.add(&s, &field.pow(&theta, rows.nice.gamma))
    };
    if eval(0) != field.one() {
        return Err(ProtocolError::Param("P(1) != 1".into()));
    }
    for delta in rows.nice.subgroup() {
        if eval(delta) != field.zero() {
            return Err(ProtocolError::Param(format!("P(g^{delta}) != 0")));
        }
    }
    let ring = RingSpec::new(Base::Ext(field.clone()), 1);
    Ok(FoascInstance::new(Raghavendra {
        rows,
        field,
        powers,
        ring,
    }))
}

impl Construction for Raghavendra {
    fn protocol(&self) -> &'static str {
        "raghavendra"
    }
    fn n(&self) -> usize {
        self.rows.family.len()
    }
    fn k(&self) -> usize {
        3
    }
    fn t(&self) -> usize {
        1
    }
    fn level_codec(&self) -> &Codec {
        &self.rows.level
    }
    fn ring(&self) -> &RingSpec {
        &self.ring
    }
    fn randomness(&self) -> &Codec {
        &self.rows.level
    }
    fn row(&self, i: usize, ell: &[u64]) -> Vec<LevelPoint> {
        self.rows.row(i, ell)
    }
    fn alpha(&self, tau: usize, z: &LevelPoint) -> RingVec {
        let e = dot_mod(&self.rows.family.u[tau], &z.0, self.rows.p());
        RingVec(self.powers[e as usize].clone())
    }
    fn recon(&self, i: usize, ell: &[u64]) -> ReconCoeff {
        let p = self.rows.p();
        let e = dot_mod(&self.rows.family.u[i], ell, p);
        let coeff = self.powers[((p - e) % p) as usize].clone();
        ReconCoeff {
            lambda: vec![RingVec(coeff); 3],
            omega: self.field.one(),
        }
    }
    fn public_params(&self) -> Vec<(String, String)> {
        let mut v = self.rows.params();
        v.push(("field".into(), format!("{:?}", self.field.modulus_poly())));
        v
    }
    fn predicted_bits(&self) -> Option<f64> {
        let p = self.rows.p() as f64;
        Some(3.0 * (self.rows.family.h as f64 * p.log2() + self.rows.nice.r as f64))
    }
}
