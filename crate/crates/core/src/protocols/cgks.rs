use super::ProtocolError;
use crate::algebra::PrimeField;
use crate::foasc::{
    Base, Codec, Construction, FoascInstance, LevelPoint, ReconCoeff, RingSpec, RingVec,
};

/// Largest supported cube side; masks must fit comfortably in a digit.
const MAX_H: usize = 20;

/// Two-server cube protocol. Entry `i` sits at `(i_1, i_2, i_3)`, the
/// `i`-th triple of `[h]^3` in lexicographic order; subsets of `[h]` are
/// `h`-bit masks.
#[derive(Debug, Clone)]
pub struct Cgks {
    n: usize,
    h: usize,
    level: Codec,
    ring: RingSpec,
}

impl Cgks {
    pub fn h(&self) -> usize {
        self.h
    }

    pub fn coords(&self, i: usize) -> [usize; 3] {
        let h = self.h;
        [i / (h * h), (i / h) % h, i % h]
    }

    fn bit(mask: u64, c: usize) -> bool {
        mask >> c & 1 == 1
    }
}

pub fn build_cgks(n: usize) -> Result<FoascInstance, ProtocolError> {
    if n == 0 {
        return Err(ProtocolError::Param("n must be at least 1".into()));
    }
    let h = (1..)
        .find(|h: &usize| h.pow(3) >= n)
        .expect("some cube covers n");
    if h > MAX_H {
        return Err(ProtocolError::Param(format!(
            "cube side {h} exceeds {MAX_H}"
        )));
    }
    let f2 = PrimeField::new(2)?;
    Ok(FoascInstance::new(Cgks {
        n,
        h,
        level: Codec::uniform(1 << h, 3),
        ring: RingSpec::new(Base::Prime(f2), 3 * h + 1),
    }))
}

impl Construction for Cgks {
    fn protocol(&self) -> &'static str {
        "cgks"
    }
    fn n(&self) -> usize {
        self.n
    }
    fn k(&self) -> usize {
        2
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
        let c = self.coords(i);
        let flipped = (0..3).map(|a| ell[a] ^ (1 << c[a])).collect();
        vec![LevelPoint(ell.to_vec()), LevelPoint(flipped)]
    }
    fn alpha(&self, tau: usize, z: &LevelPoint) -> RingVec {
        let t = self.coords(tau);
        let member: [bool; 3] = std::array::from_fn(|a| Self::bit(z.0[a], t[a]));
        let mut out = Vec::with_capacity(3 * self.h + 1);
        out.push(member.iter().all(|&b| b) as u64);
        for axis in 0..3 {
            let others = (0..3).filter(|&a| a != axis).all(|a| member[a]);
            for c in 0..self.h {
                let flipped = member[axis] ^ (c == t[axis]);
                out.push((others && flipped) as u64);
            }
        }
        RingVec(out)
    }
    fn recon(&self, i: usize, _ell: &[u64]) -> ReconCoeff {
        let c = self.coords(i);
        let mut block = vec![0u64; 3 * self.h + 1];
        block[0] = 1;
        for axis in 0..3 {
            block[1 + axis * self.h + c[axis]] = 1;
        }
        ReconCoeff {
            lambda: vec![RingVec(block.clone()), RingVec(block)],
            omega: vec![1],
        }
    }
    fn public_params(&self) -> Vec<(String, String)> {
        vec![
            ("n".into(), self.n.to_string()),
            ("h".into(), self.h.to_string()),
        ]
    }
    fn predicted_bits(&self) -> Option<f64> {
        Some((12 * self.h + 2) as f64)
    }
}
