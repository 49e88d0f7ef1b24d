use super::{dot_mod, shifted, ProtocolError};
use crate::algebra::{nullspace, GroupRing, IntRing, Matrix, PrimeField, Ring};
use crate::foasc::{
    Base, Codec, Construction, FoascInstance, LevelPoint, ReconCoeff, RingSpec, RingVec,
};
use crate::mv::{canonical_set, check_matching_family, squarefree_primes, MatchingFamily, MvError};

/// Group-ring weights with
/// `sum_j (mu_v[j] + delta mu_d[j]) g^(d_j delta) = [delta = 0] nu`
/// for every `delta` in `{0} cup S_m`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MuNu {
    pub mu_v: Vec<Vec<u64>>,
    pub mu_d: Vec<Vec<u64>>,
    pub nu: Vec<u64>,
}

/// Solves for `(mu, nu)` one prime factor of `m` at a time by writing each
/// group-ring product as an `m x m` cyclic shift block over `F_q`, then
/// recombines coefficients with the CRT.
pub fn solve_mu_nu(m: u64, shifts: &[u64]) -> Result<MuNu, ProtocolError> {
    let ring = IntRing::new(m)?;
    let k = shifts.len();
    let mm = m as usize;
    let mut deltas = vec![0];
    deltas.extend(canonical_set(m)?);
    // unknowns: mu_v[j], mu_d[j] for each j, then nu; m coefficients each
    let cols = (2 * k + 1) * mm;
    let mut per_prime: Vec<Vec<u64>> = Vec::new();
    for &q in ring.primes() {
        let f = PrimeField::new(q)?;
        let mut a: Matrix = Vec::with_capacity(deltas.len() * mm);
        for &delta in &deltas {
            let mut block = vec![vec![0u64; cols]; mm];
            for (j, &d) in shifts.iter().enumerate() {
                let a_shift = (d % m) * (delta % m) % m;
                let scalar = delta % q;
                for i in 0..mm {
                    // (g^a x)[i] = x[(i - a) mod m]
                    let src = (i + mm - a_shift as usize) % mm;
                    block[i][2 * j * mm + src] = f.add(&block[i][2 * j * mm + src], &1);
                    let dcol = (2 * j + 1) * mm + src;
                    block[i][dcol] = f.add(&block[i][dcol], &scalar);
                }
            }
            if delta == 0 {
                for (i, row) in block.iter_mut().enumerate() {
                    row[2 * k * mm + i] = f.neg(&1);
                }
            }
            a.extend(block);
        }
        let basis = nullspace(&f, &a)?;
        let sol = basis
            .into_iter()
            .find(|v| v[2 * k * mm..].iter().any(|&c| c != 0))
            .ok_or(ProtocolError::NoMuNu(m))?;
        per_prime.push(sol);
    }
    let combined: Vec<u64> = (0..cols)
        .map(|c| {
            let residues: Vec<u64> = per_prime.iter().map(|s| s[c]).collect();
            ring.crt_combine(&residues)
        })
        .collect::<Result<_, _>>()?;
    let chunk = |idx: usize| combined[idx * mm..(idx + 1) * mm].to_vec();
    Ok(MuNu {
        mu_v: (0..k).map(|j| chunk(2 * j)).collect(),
        mu_d: (0..k).map(|j| chunk(2 * j + 1)).collect(),
        nu: chunk(2 * k),
    })
}

/// `k = 2^(r-1)` servers over `Z_m`, `m` a product of `r` primes, answering
/// `(1, u_tau) g^<u_tau, z>` in `(Z_m[g]/(g^m - 1))^(h+1)`.
#[derive(Debug, Clone)]
pub struct DvirGopi {
    family: MatchingFamily,
    group: GroupRing,
    shifts: Vec<u64>,
    weights: MuNu,
    level: Codec,
    ring: RingSpec,
}

pub fn build_dvir_gopi(family: MatchingFamily) -> Result<FoascInstance, ProtocolError> {
    let m = family.modulus;
    let primes = squarefree_primes(m)?;
    let r = primes.len() as u32;
    if r < 2 {
        return Err(ProtocolError::Param(format!(
            "{m} has fewer than two prime factors"
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
    let k = 1usize << (r - 1);
    if k as u64 > m {
        return Err(MvError::Param(format!("{k} servers exceed modulus {m}")).into());
    }
    let shifts: Vec<u64> = (0..k as u64).collect();
    let weights = solve_mu_nu(m, &shifts)?;
    let group = GroupRing::new(m)?;
    Ok(FoascInstance::new(DvirGopi {
        level: Codec::uniform(m, family.h),
        ring: RingSpec::new(Base::Group(group.clone()), family.h + 1),
        family,
        group,
        shifts,
        weights,
    }))
}

impl DvirGopi {
    fn m(&self) -> u64 {
        self.family.modulus
    }

    pub fn weights(&self) -> &MuNu {
        &self.weights
    }
}

impl Construction for DvirGopi {
    fn protocol(&self) -> &'static str {
        "dvir-gopi"
    }
    fn n(&self) -> usize {
        self.family.len()
    }
    fn k(&self) -> usize {
        self.shifts.len()
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
        self.shifts
            .iter()
            .map(|&d| LevelPoint(shifted(ell, d, &self.family.v[i], self.m())))
            .collect()
    }
    fn alpha(&self, tau: usize, z: &LevelPoint) -> RingVec {
        let u = &self.family.u[tau];
        let mono = self.group.monomial(dot_mod(u, &z.0, self.m()));
        let elems =
            std::iter::once(mono.clone()).chain(u.iter().map(|&c| self.group.scale(c, &mono)));
        self.ring.from_elements(elems)
    }
    fn recon(&self, i: usize, ell: &[u64]) -> ReconCoeff {
        let v = &self.family.v[i];
        let lambda = (0..self.shifts.len())
            .map(|j| {
                let mu_d = &self.weights.mu_d[j];
                let elems = std::iter::once(self.weights.mu_v[j].clone())
                    .chain(v.iter().map(|&c| self.group.scale(c, mu_d)));
                self.ring.from_elements(elems)
            })
            .collect();
        let a = dot_mod(&self.family.u[i], ell, self.m());
        ReconCoeff {
            lambda,
            omega: self.group.shift(a, &self.weights.nu),
        }
    }
    fn public_params(&self) -> Vec<(String, String)> {
        vec![
            ("m".into(), self.m().to_string()),
            ("h".into(), self.family.h.to_string()),
            ("n".into(), self.family.len().to_string()),
            ("u".into(), format!("{:?}", self.family.u)),
            ("v".into(), format!("{:?}", self.family.v)),
            ("nu".into(), format!("{:?}", self.weights.nu)),
        ]
    }
    fn predicted_bits(&self) -> Option<f64> {
        let k = self.shifts.len() as f64;
        let h = self.family.h as f64;
        let lm = (self.m() as f64).log2();
        Some(k * (h * lm + (h + 1.0) * self.m() as f64 * lm))
    }
}
