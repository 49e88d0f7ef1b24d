use super::MvError;
use crate::algebra::{is_prime, nullspace, ExtField, PrimeField, Ring};

/// A 3-algebraically nice pair `(S_0, S_1)` for `S = <2>` in `F_p`,
/// `p = 2^r - 1`, together with the field `F_{2^r}` and generator `g = x`
/// it was derived from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NiceSets {
    pub p: u64,
    pub r: u32,
    pub field: ExtField,
    pub g: Vec<u64>,
    pub gamma: u64,
    pub s0: Vec<u64>,
    pub s1: [u64; 3],
}

impl NiceSets {
    /// `<2> = {1, 2, ..., 2^(r-1)}`.
    pub fn subgroup(&self) -> Vec<u64> {
        (0..self.r).map(|e| 1u64 << e).collect()
    }

    /// `|S_0 cap (sigma + delta S_1)|`.
    pub fn intersection(&self, sigma: u64, delta: u64) -> usize {
        let p = self.p;
        self.s1
            .iter()
            .map(|&s| (sigma + delta * s) % p)
            .filter(|x| self.s0.contains(x))
            .count()
    }

    /// The defining parity condition over every `(sigma, delta)`.
    pub fn parity_holds(&self) -> bool {
        self.subgroup().iter().all(|&delta| {
            (0..self.p).all(|sigma| self.intersection(sigma, delta).is_multiple_of(2))
        })
    }
}

/// Computes `gamma`, `S_1 = {0, 1, gamma}` and `S_0` for `p = 2^r - 1`.
///
/// `F_{2^r}` is the lexicographically first irreducible modulus and `g = x`,
/// which generates `F_{2^r}^*` because its order `p` is prime. `S_0` is the
/// support of the first basis vector of `L^perp`.
pub fn yekhanin_nice_sets(p: u64) -> Result<NiceSets, MvError> {
    if p < 3 || !(p + 1).is_power_of_two() || !is_prime(p) {
        return Err(MvError::Param(format!("{p} is not a Mersenne prime")));
    }
    if p > 8191 {
        return Err(MvError::CapExceeded {
            what: "p",
            size: p as u128,
            cap: 8191,
        });
    }
    let r = (p + 1).trailing_zeros();
    let field = ExtField::find(2, r as usize)?;
    let g = field.x();
    let one_plus_g = field.add(&field.one(), &g);
    let gamma = (0..p)
        .find(|&e| field.add(&one_plus_g, &field.pow(&g, e)) == field.zero())
        .ok_or_else(|| MvError::Param(format!("no gamma with 1 + g + g^gamma = 0 in F_2^{r}")))?;
    let s1 = [0, 1, gamma];
    let mut rows = Vec::new();
    for e in 0..r {
        let delta = 1u64 << e;
        for sigma in 0..p {
            let mut row = vec![0u64; p as usize];
            for s in s1 {
                row[((sigma + delta * s) % p) as usize] ^= 1;
            }
            rows.push(row);
        }
    }
    let f2 = PrimeField::new(2)?;
    let dual = nullspace(&f2, &rows)?;
    let first = dual
        .into_iter()
        .find(|v| v.iter().any(|&c| c != 0))
        .ok_or(MvError::NoNiceS0(p))?;
    let s0 = (0..p).filter(|&x| first[x as usize] == 1).collect();
    Ok(NiceSets {
        p,
        r,
        field,
        g,
        gamma,
        s0,
        s1,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn p7_gamma_and_parity() {
        let n = yekhanin_nice_sets(7).unwrap();
        assert_eq!(n.gamma, 3);
        assert_eq!(n.s1, [0, 1, 3]);
        assert_eq!(n.subgroup(), vec![1, 2, 4]);
        assert!(!n.s0.is_empty());
        assert!(n.parity_holds());
    }

    #[test]
    fn p31_parity() {
        let n = yekhanin_nice_sets(31).unwrap();
        assert!(!n.s0.is_empty());
        assert!(n.parity_holds());
    }

    #[test]
    fn rejects_non_mersenne() {
        assert!(yekhanin_nice_sets(5).is_err());
        assert!(yekhanin_nice_sets(15).is_err());
    }
}
