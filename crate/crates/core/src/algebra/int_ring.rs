use super::{inv_mod, AlgebraError, Ring};

/// Prime factorization by trial division, as `(prime, exponent)` pairs in
/// increasing order.
pub fn factor(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d.saturating_mul(d) <= n {
        if n.is_multiple_of(d) {
            let mut e = 0;
            while n.is_multiple_of(d) {
                n /= d;
                e += 1;
            }
            out.push((d, e));
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// `Z_m` for squarefree `m >= 2`, with its prime factorization cached for CRT.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct IntRing {
    m: u64,
    primes: Vec<u64>,
}

impl IntRing {
    pub fn new(m: u64) -> Result<Self, AlgebraError> {
        if m < 2 || m > u32::MAX as u64 {
            return Err(AlgebraError::InvalidModulus(m));
        }
        let f = factor(m);
        if f.iter().any(|&(_, e)| e > 1) {
            return Err(AlgebraError::NotSquarefree(m));
        }
        Ok(Self {
            m,
            primes: f.into_iter().map(|(q, _)| q).collect(),
        })
    }

    pub fn modulus(&self) -> u64 {
        self.m
    }

    pub fn primes(&self) -> &[u64] {
        &self.primes
    }

    pub fn reduce(&self, v: u64) -> u64 {
        v % self.m
    }

    /// `x -> (x mod p_1, ..., x mod p_r)`.
    pub fn crt_split(&self, x: u64) -> Vec<u64> {
        self.primes.iter().map(|&q| x % q).collect()
    }

    /// Inverse of [`IntRing::crt_split`].
    pub fn crt_combine(&self, residues: &[u64]) -> Result<u64, AlgebraError> {
        if residues.len() != self.primes.len() {
            return Err(AlgebraError::DimensionMismatch {
                expected: self.primes.len(),
                got: residues.len(),
            });
        }
        let mut acc = 0u128;
        for (&q, &r) in self.primes.iter().zip(residues) {
            let cofactor = self.m / q;
            let inv = inv_mod(cofactor % q, q).expect("distinct primes are coprime");
            let term = (r % q) as u128 * inv as u128 % q as u128 * cofactor as u128;
            acc = (acc + term) % self.m as u128;
        }
        Ok(acc as u64)
    }
}

impl Ring for IntRing {
    type Elem = u64;

    fn zero(&self) -> u64 {
        0
    }
    fn one(&self) -> u64 {
        1
    }
    fn add(&self, a: &u64, b: &u64) -> u64 {
        (a + b) % self.m
    }
    fn neg(&self, a: &u64) -> u64 {
        (self.m - a % self.m) % self.m
    }
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        (*a as u128 * *b as u128 % self.m as u128) as u64
    }
    fn inv(&self, a: &u64) -> Result<u64, AlgebraError> {
        inv_mod(*a % self.m, self.m).ok_or(AlgebraError::NonUnit)
    }
    fn from_int(&self, v: u64) -> u64 {
        v % self.m
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn z6_inverse_of_five() {
        let z6 = IntRing::new(6).unwrap();
        assert_eq!(z6.inv(&5).unwrap(), 5);
        assert_eq!(z6.inv(&2), Err(AlgebraError::NonUnit));
        assert_eq!(z6.inv(&0), Err(AlgebraError::NonUnit));
    }

    #[test]
    fn rejects_non_squarefree() {
        assert_eq!(IntRing::new(12), Err(AlgebraError::NotSquarefree(12)));
        assert!(IntRing::new(1).is_err());
    }

    #[test]
    fn crt_examples() {
        let z6 = IntRing::new(6).unwrap();
        assert_eq!(z6.crt_split(4), vec![0, 1]);
        assert_eq!(z6.crt_split(0), vec![0, 0]);
        assert_eq!(z6.crt_combine(&[1, 1]).unwrap(), 1);
    }

    #[test]
    fn crt_round_trip_exhaustive() {
        for m in [6u64, 15, 42] {
            let r = IntRing::new(m).unwrap();
            for x in 0..m {
                assert_eq!(r.crt_combine(&r.crt_split(x)).unwrap(), x, "m={m} x={x}");
            }
        }
    }

    #[test]
    fn factor_511() {
        assert_eq!(factor(511), vec![(7, 1), (73, 1)]);
        assert_eq!(factor(1), vec![]);
        assert_eq!(factor(12), vec![(2, 2), (3, 1)]);
    }
}
