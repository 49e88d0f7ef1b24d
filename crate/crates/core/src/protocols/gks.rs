use super::{dot_mod, ProtocolError};
use crate::algebra::{
    find_order_element, hasse_of_monomial, multi_indices_below, MultiIndex, PrimeField, Ring,
};
use crate::foasc::{
    Base, Codec, Construction, FoascInstance, LevelPoint, ReconCoeff, RingSpec, RingVec,
};
use crate::mv::{
    canonical_set, check_matching_family, lifted_support, zero_interpolation_weights,
    InterpolationWeights, MatchingFamily, MvError,
};

/// Matching vectors over `Z_{m p}` evaluated as monomials on `H_m^h` in
/// `F_p`, answering the value and all first Hasse derivatives.
///
/// Level points are exponent vectors `z` standing for `(g^z_1, .., g^z_h)`;
/// server `j` evaluates along the curve `theta -> g^ell theta^(v_i)` at
/// `theta = b_j`.
#[derive(Debug, Clone)]
pub struct Gks {
    family: MatchingFamily,
    field: PrimeField,
    m: u64,
    g: u64,
    /// `g^e` for `e in 0..m`.
    powers: Vec<u64>,
    points: Vec<u64>,
    /// Discrete logs of `points` to base `g`.
    point_logs: Vec<u64>,
    weights: InterpolationWeights,
    indices: Vec<MultiIndex>,
    level: Codec,
    ring: RingSpec,
}

pub fn build_gks(
    family: MatchingFamily,
    m: u64,
    p: u64,
    points: Vec<u64>,
) -> Result<FoascInstance, ProtocolError> {
    let field = PrimeField::new(p)?;
    let mp = m * p;
    if family.modulus != mp {
        return Err(ProtocolError::Param(format!(
            "family lives in Z_{}, expected Z_{mp}",
            family.modulus
        )));
    }
    let mut target = family.target.clone();
    target.sort_unstable();
    if target != canonical_set(mp)? {
        return Err(ProtocolError::Param(
            "family target must be the canonical set".into(),
        ));
    }
    check_matching_family(&family, false)?;
    let g = find_order_element(&field, m)?;
    let powers: Vec<u64> = (0..m).map(|e| field.pow(&g, e)).collect();
    let point_logs = points
        .iter()
        .map(|b| {
            powers
                .iter()
                .position(|x| x == b)
                .map(|e| e as u64)
                .ok_or_else(|| ProtocolError::Param(format!("{b} is not in H_{m}")))
        })
        .collect::<Result<Vec<_>, _>>()?;

    let with_zero = |mut s: Vec<u64>| {
        s.insert(0, 0);
        s
    };
    let base = with_zero(canonical_set(m)?);
    let lifted = with_zero(canonical_set(mp)?);
    if lifted_support(m, p, &base, 2)? != lifted {
        return Err(MvError::InterpolationSetInvalid(format!(
            "the lift of S_{m} does not match S_{mp}"
        ))
        .into());
    }
    zero_interpolation_weights(p, m, &points, &base, 1)?;
    let weights = zero_interpolation_weights(p, m, &points, &lifted, 2)?;

    let h = family.h;
    Ok(FoascInstance::new(Gks {
        level: Codec::uniform(m, h),
        ring: RingSpec::new(Base::Prime(field), h + 1),
        indices: multi_indices_below(h, 2),
        family,
        field,
        m,
        g,
        powers,
        points,
        point_logs,
        weights,
    }))
}

impl Gks {
    fn point(&self, z: &[u64]) -> Vec<u64> {
        z.iter()
            .map(|&e| self.powers[(e % self.m) as usize])
            .collect()
    }
}

impl Construction for Gks {
    fn protocol(&self) -> &'static str {
        "gks"
    }
    fn n(&self) -> usize {
        self.family.len()
    }
    fn k(&self) -> usize {
        self.points.len()
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
        let v = &self.family.v[i];
        self.point_logs
            .iter()
            .map(|&e| {
                LevelPoint(
                    ell.iter()
                        .zip(v)
                        .map(|(l, c)| (l + e * (c % self.m)) % self.m)
                        .collect(),
                )
            })
            .collect()
    }
    fn alpha(&self, tau: usize, z: &LevelPoint) -> RingVec {
        let u = &self.family.u[tau];
        let pt = self.point(&z.0);
        RingVec(
            self.indices
                .iter()
                .map(|idx| hasse_of_monomial(&self.field, u, idx, &pt).expect("index length is h"))
                .collect(),
        )
    }
    fn recon(&self, i: usize, ell: &[u64]) -> ReconCoeff {
        let f = &self.field;
        let v = &self.family.v[i];
        let e = dot_mod(ell, &self.family.u[i], self.m);
        let scale = self.powers[((self.m - e) % self.m) as usize];
        let rows = self.row(i, ell);
        let lambda = self
            .points
            .iter()
            .enumerate()
            .map(|(j, b)| {
                let mu_v = self.weights.mu[2 * j];
                let mu_d = self.weights.mu[2 * j + 1];
                let b_inv = f.inv(b).expect("points are units");
                let q = self.point(&rows[j].0);
                let mut out = Vec::with_capacity(v.len() + 1);
                out.push(f.mul(&scale, &mu_v));
                for (c, &vc) in v.iter().enumerate() {
                    let coef = f.mul(&f.mul(&mu_d, &f.reduce(vc)), &f.mul(&q[c], &b_inv));
                    out.push(f.mul(&scale, &coef));
                }
                RingVec(out)
            })
            .collect();
        ReconCoeff {
            lambda,
            omega: vec![1],
        }
    }
    fn public_params(&self) -> Vec<(String, String)> {
        vec![
            ("m".into(), self.m.to_string()),
            ("p".into(), self.field.modulus().to_string()),
            ("g".into(), self.g.to_string()),
            ("h".into(), self.family.h.to_string()),
            ("n".into(), self.family.len().to_string()),
            ("B".into(), format!("{:?}", self.points)),
            ("mu".into(), format!("{:?}", self.weights.mu)),
            ("u".into(), format!("{:?}", self.family.u)),
            ("v".into(), format!("{:?}", self.family.v)),
        ]
    }
    fn predicted_bits(&self) -> Option<f64> {
        let k = self.points.len() as f64;
        let h = self.family.h as f64;
        Some(k * (h * (self.m as f64).log2() + (h + 1.0) * (self.field.modulus() as f64).log2()))
    }
    fn notes(&self) -> Vec<String> {
        let k = self.points.len() as f64;
        let h = self.family.h as f64;
        let formula = k * (h * (self.m as f64).log2() + (self.field.modulus() as f64).log2());
        vec![format!(
            "measured answers carry h+1 field elements; the single-element formula gives {formula:.3} bits"
        )]
    }
}
