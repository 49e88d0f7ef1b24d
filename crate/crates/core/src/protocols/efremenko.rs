use super::{dot_mod, shifted, ProtocolError};
use crate::algebra::{PrimeField, Ring};
use crate::foasc::{
    Base, Codec, Construction, FoascInstance, LevelPoint, ReconCoeff, RingSpec, RingVec,
};
use crate::mv::{canonical_set, check_matching_family, DecodingPoly, MatchingFamily};

/// `k` servers, one per monomial of the decoding polynomial; answers
/// `g^<u_tau, z>` in `F_p`.
#[derive(Debug, Clone)]
pub struct Efremenko {
    family: MatchingFamily,
    poly: DecodingPoly,
    field: PrimeField,
    powers: Vec<u64>,
    level: Codec,
    ring: RingSpec,
}

pub fn build_efremenko(
    family: MatchingFamily,
    poly: DecodingPoly,
) -> Result<FoascInstance, ProtocolError> {
    let m = poly.m;
    if family.modulus != m {
        return Err(ProtocolError::Param(format!(
            "family lives in Z_{}, decoding polynomial in Z_{m}",
            family.modulus
        )));
    }
    let mut target = family.target.clone();
    target.sort_unstable();
    if target != canonical_set(m)? {
        return Err(ProtocolError::Param(
            "family target must be the canonical set".into(),
        ));
    }
    check_matching_family(&family, false)?;
    poly.validate()?;
    let field = PrimeField::new(poly.p)?;
    let powers = (0..m).map(|e| field.pow(&poly.g, e)).collect();
    Ok(FoascInstance::new(Efremenko {
        level: Codec::uniform(m, family.h),
        ring: RingSpec::new(Base::Prime(field), 1),
        family,
        poly,
        field,
        powers,
    }))
}

impl Efremenko {
    fn m(&self) -> u64 {
        self.poly.m
    }
}

impl Construction for Efremenko {
    fn protocol(&self) -> &'static str {
        "efremenko"
    }
    fn n(&self) -> usize {
        self.family.len()
    }
    fn k(&self) -> usize {
        self.poly.k()
    }
    fn t(&self) -> usize {
        1
    }
    fn level_codec(&self) -> &Codec {
        &self.level
    }
    fn ring(&self) -> &RingSpec {
        &self.ring
    }
    fn randomness(&self) -> &Codec {
        &self.level
    }
    fn row(&self, i: usize, ell: &[u64]) -> Vec<LevelPoint> {
        self.poly
            .exponents()
            .iter()
            .map(|&d| LevelPoint(shifted(ell, d, &self.family.v[i], self.m())))
            .collect()
    }
    fn alpha(&self, tau: usize, z: &LevelPoint) -> RingVec {
        RingVec(vec![
            self.powers[dot_mod(&self.family.u[tau], &z.0, self.m()) as usize],
        ])
    }
    fn recon(&self, i: usize, ell: &[u64]) -> ReconCoeff {
        let m = self.m();
        let e = dot_mod(&self.family.u[i], ell, m);
        let scale = self.powers[((m - e) % m) as usize];
        ReconCoeff {
            lambda: self
                .poly
                .coefficients()
                .iter()
                .map(|c| RingVec(vec![self.field.mul(c, &scale)]))
                .collect(),
            omega: vec![1],
        }
    }
    fn public_params(&self) -> Vec<(String, String)> {
        vec![
            ("m".into(), self.m().to_string()),
            ("p".into(), self.poly.p.to_string()),
            ("g".into(), self.poly.g.to_string()),
            ("h".into(), self.family.h.to_string()),
            ("n".into(), self.family.len().to_string()),
            ("P".into(), self.poly.describe()),
            ("u".into(), format!("{:?}", self.family.u)),
            ("v".into(), format!("{:?}", self.family.v)),
        ]
    }
    fn predicted_bits(&self) -> Option<f64> {
        let k = self.poly.k() as f64;
        Some(k * (self.family.h as f64 * (self.m() as f64).log2() + (self.poly.p as f64).log2()))
    }
}
