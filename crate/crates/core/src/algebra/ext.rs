use super::{AlgebraError, PrimeField, Ring};

/// `F_{p^e} = F_p[x]/(f)` for a monic irreducible `f` of degree `e`.
///
/// Elements are coefficient vectors of length `e`, lowest degree first.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ExtField {
    base: PrimeField,
    /// Monic modulus, lowest degree first, length `e + 1`.
    modulus: Vec<u64>,
}

impl ExtField {
    pub fn new(p: u64, modulus: Vec<u64>) -> Result<Self, AlgebraError> {
        let base = PrimeField::new(p)?;
        if modulus.len() < 2 || *modulus.last().unwrap() != 1 || modulus.iter().any(|&c| c >= p) {
            return Err(AlgebraError::InvalidModulus(p));
        }
        if !is_irreducible(&base, &modulus) {
            return Err(AlgebraError::Reducible(p));
        }
        Ok(Self { base, modulus })
    }

    /// `F_4 = F_2[x]/(x^2 + x + 1)`.
    pub fn f4() -> Self {
        Self::new(2, vec![1, 1, 1]).expect("x^2+x+1 is irreducible over F_2")
    }

    /// `F_8 = F_2[x]/(x^3 + x + 1)`.
    pub fn f8() -> Self {
        Self::new(2, vec![1, 1, 0, 1]).expect("x^3+x+1 is irreducible over F_2")
    }

    /// Smallest monic irreducible of degree `e` in lexicographic order of
    /// its coefficient vector (read from the constant term upward).
    pub fn find(p: u64, e: usize) -> Result<Self, AlgebraError> {
        if e == 0 {
            return Err(AlgebraError::InvalidModulus(p));
        }
        let base = PrimeField::new(p)?;
        let total = (p as u128)
            .checked_pow(e as u32)
            .ok_or(AlgebraError::InvalidModulus(p))?;
        for idx in 0..total {
            let mut modulus = digits(idx, p, e);
            modulus.push(1);
            if is_irreducible(&base, &modulus) {
                return Ok(Self { base, modulus });
            }
        }
        Err(AlgebraError::Reducible(p))
    }

    pub fn characteristic(&self) -> u64 {
        self.base.modulus()
    }

    pub fn degree(&self) -> usize {
        self.modulus.len() - 1
    }

    pub fn modulus_poly(&self) -> &[u64] {
        &self.modulus
    }

    pub fn base(&self) -> &PrimeField {
        &self.base
    }

    /// `p^e`.
    pub fn size(&self) -> u128 {
        (self.characteristic() as u128).pow(self.degree() as u32)
    }

    /// The class of `x`.
    pub fn x(&self) -> Vec<u64> {
        let mut v = vec![0; self.degree()];
        if self.degree() == 1 {
            v[0] = self.base.neg(&self.modulus[0]);
        } else {
            v[1] = 1;
        }
        v
    }

    pub fn is_valid(&self, a: &[u64]) -> bool {
        a.len() == self.degree() && a.iter().all(|&c| c < self.characteristic())
    }
}

fn digits(mut idx: u128, p: u64, len: usize) -> Vec<u64> {
    let mut out = Vec::with_capacity(len);
    for _ in 0..len {
        out.push((idx % p as u128) as u64);
        idx /= p as u128;
    }
    out
}

/// Remainder of `a` modulo the monic polynomial `m` (both lowest degree first).
fn poly_rem(f: &PrimeField, a: &[u64], m: &[u64]) -> Vec<u64> {
    let dm = m.len() - 1;
    let mut r = a.to_vec();
    while r.len() > dm {
        let lead = r.pop().unwrap();
        if lead != 0 {
            let shift = r.len() - dm;
            for (k, &mk) in m[..dm].iter().enumerate() {
                let t = f.mul(&lead, &mk);
                r[shift + k] = f.sub(&r[shift + k], &t);
            }
        }
    }
    r.resize(dm, 0);
    r
}

/// Exhaustive check that no monic polynomial of degree `1..=deg/2` divides `m`.
fn is_irreducible(f: &PrimeField, m: &[u64]) -> bool {
    let e = m.len() - 1;
    let p = f.modulus();
    for d in 1..=e / 2 {
        let count = (p as u128).pow(d as u32);
        for idx in 0..count {
            let mut cand = digits(idx, p, d);
            cand.push(1);
            if poly_rem(f, m, &cand).iter().all(|&c| c == 0) {
                return false;
            }
        }
    }
    true
}

impl Ring for ExtField {
    type Elem = Vec<u64>;

    fn zero(&self) -> Vec<u64> {
        vec![0; self.degree()]
    }
    fn one(&self) -> Vec<u64> {
        let mut v = self.zero();
        v[0] = 1;
        v
    }
    fn add(&self, a: &Vec<u64>, b: &Vec<u64>) -> Vec<u64> {
        a.iter().zip(b).map(|(x, y)| self.base.add(x, y)).collect()
    }
    fn neg(&self, a: &Vec<u64>) -> Vec<u64> {
        a.iter().map(|x| self.base.neg(x)).collect()
    }
    fn mul(&self, a: &Vec<u64>, b: &Vec<u64>) -> Vec<u64> {
        let e = self.degree();
        let mut prod = vec![0u64; 2 * e - 1];
        for (i, x) in a.iter().enumerate() {
            if *x == 0 {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                let t = self.base.mul(x, y);
                prod[i + j] = self.base.add(&prod[i + j], &t);
            }
        }
        poly_rem(&self.base, &prod, &self.modulus)
    }
    fn inv(&self, a: &Vec<u64>) -> Result<Vec<u64>, AlgebraError> {
        if self.is_zero(a) {
            return Err(AlgebraError::NonUnit);
        }
        // a^(q-2) in the multiplicative group of order q-1.
        let q = self.size();
        Ok(self.pow(a, (q - 2) as u64))
    }
    fn from_int(&self, v: u64) -> Vec<u64> {
        let mut z = self.zero();
        z[0] = v % self.characteristic();
        z
    }
}
