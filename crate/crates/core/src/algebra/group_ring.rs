use super::{linalg, AlgebraError, IntRing, Ring};

/// The group ring `Z_m[g]/(g^m - 1)`.
///
/// An element is the length-`m` coefficient vector of `g^0, ..., g^(m-1)`;
/// multiplication is cyclic convolution with coefficients reduced mod `m`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GroupRing {
    base: IntRing,
}

impl GroupRing {
    pub fn new(m: u64) -> Result<Self, AlgebraError> {
        let base = IntRing::new(m)?;
        if m > 4096 {
            return Err(AlgebraError::InvalidModulus(m));
        }
        Ok(Self { base })
    }

    pub fn base(&self) -> &IntRing {
        &self.base
    }

    pub fn modulus(&self) -> u64 {
        self.base.modulus()
    }

    fn len(&self) -> usize {
        self.base.modulus() as usize
    }

    /// `g^a`.
    pub fn monomial(&self, a: u64) -> Vec<u64> {
        let mut v = vec![0; self.len()];
        v[(a % self.modulus()) as usize] = 1;
        v
    }

    /// `c * x` for an integer scalar `c`.
    pub fn scale(&self, c: u64, x: &[u64]) -> Vec<u64> {
        x.iter()
            .map(|v| self.base.mul(&(c % self.modulus()), v))
            .collect()
    }

    /// `g^a * x`, a cyclic shift of the coefficients.
    pub fn shift(&self, a: u64, x: &[u64]) -> Vec<u64> {
        let m = self.len();
        let a = (a % self.modulus()) as usize;
        let mut out = vec![0; m];
        for (i, &c) in x.iter().enumerate() {
            out[(i + a) % m] = c;
        }
        out
    }

    /// Reduction of `x` into `F_q[g]/(g^m - 1)` for a prime factor `q`.
    pub fn component(&self, x: &[u64], q: u64) -> Vec<u64> {
        x.iter().map(|c| c % q).collect()
    }

    /// The `m x m` matrix over `Z` of multiplication by `x` (column `b` is
    /// `x * g^b`).
    pub fn multiplication_matrix(&self, x: &[u64]) -> Vec<Vec<u64>> {
        let m = self.len();
        let mut mat = vec![vec![0; m]; m];
        for b in 0..m {
            for (a, &c) in x.iter().enumerate() {
                mat[(a + b) % m][b] = c;
            }
        }
        mat
    }
}

impl Ring for GroupRing {
    type Elem = Vec<u64>;

    fn zero(&self) -> Vec<u64> {
        vec![0; self.len()]
    }
    fn one(&self) -> Vec<u64> {
        self.monomial(0)
    }
    fn add(&self, a: &Vec<u64>, b: &Vec<u64>) -> Vec<u64> {
        a.iter().zip(b).map(|(x, y)| self.base.add(x, y)).collect()
    }
    fn neg(&self, a: &Vec<u64>) -> Vec<u64> {
        a.iter().map(|x| self.base.neg(x)).collect()
    }
    fn mul(&self, a: &Vec<u64>, b: &Vec<u64>) -> Vec<u64> {
        let m = self.len();
        let md = self.modulus() as u128;
        let mut acc = vec![0u128; m];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                let k = (i + j) % m;
                acc[k] = (acc[k] + x as u128 * y as u128) % md;
            }
        }
        acc.into_iter().map(|v| v as u64).collect()
    }
    /// Solves `a * y = 1` as a circulant system per prime component.
    fn inv(&self, a: &Vec<u64>) -> Result<Vec<u64>, AlgebraError> {
        let mat = self.multiplication_matrix(a);
        linalg::solve_mod(&self.base, &mat, &self.one()).map_err(|_| AlgebraError::NonUnit)
    }
    fn from_int(&self, v: u64) -> Vec<u64> {
        let mut z = self.zero();
        z[0] = v % self.modulus();
        z
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn monomials_multiply_exhaustively_m6() {
        let r = GroupRing::new(6).unwrap();
        for a in 0..6 {
            for b in 0..6 {
                assert_eq!(
                    r.mul(&r.monomial(a), &r.monomial(b)),
                    r.monomial((a + b) % 6)
                );
            }
        }
    }

    #[test]
    fn g_to_the_m_is_one() {
        let r = GroupRing::new(6).unwrap();
        assert_eq!(r.pow(&r.monomial(1), 6), r.one());
    }

    #[test]
    fn commutative_on_samples() {
        let r = GroupRing::new(6).unwrap();
        let a = vec![1, 2, 0, 5, 3, 4];
        let b = vec![0, 0, 3, 1, 1, 2];
        assert_eq!(r.mul(&a, &b), r.mul(&b, &a));
        assert_eq!(r.shift(2, &a), r.mul(&r.monomial(2), &a));
    }

    #[test]
    fn inverse_of_monomial_and_non_unit() {
        let r = GroupRing::new(6).unwrap();
        assert_eq!(r.inv(&r.monomial(2)).unwrap(), r.monomial(4));
        // 1 + g is a zero divisor mod 2: (1+g)(1+g+...+g^5) = 2(1+...+g^5) ≡ 0 mod 2
        assert_eq!(r.inv(&vec![1, 1, 0, 0, 0, 0]), Err(AlgebraError::NonUnit));
        let u = vec![5, 0, 0, 0, 0, 0];
        assert_eq!(r.mul(&u, &r.inv(&u).unwrap()), r.one());
    }
}
