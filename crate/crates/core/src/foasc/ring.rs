use crate::algebra::{ExtField, GroupRing, PrimeField, Ring};

use super::Codec;

/// Scalar structure underlying an answer space `base^D`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Base {
    Prime(PrimeField),
    Ext(ExtField),
    Group(GroupRing),
}

impl Base {
    /// Digits per base element.
    pub fn width(&self) -> usize {
        match self {
            Base::Prime(_) => 1,
            Base::Ext(f) => f.degree(),
            Base::Group(r) => r.modulus() as usize,
        }
    }

    pub fn digit_radix(&self) -> u64 {
        match self {
            Base::Prime(f) => f.modulus(),
            Base::Ext(f) => f.characteristic(),
            Base::Group(r) => r.modulus(),
        }
    }

    pub fn zero(&self) -> Vec<u64> {
        vec![0; self.width()]
    }

    pub fn one(&self) -> Vec<u64> {
        let mut v = self.zero();
        v[0] = 1;
        v
    }

    pub fn add_assign(&self, acc: &mut [u64], x: &[u64]) {
        let r = self.digit_radix();
        for (a, b) in acc.iter_mut().zip(x) {
            *a = (*a + b) % r;
        }
    }

    pub fn mul(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        match self {
            Base::Prime(f) => vec![f.mul(&a[0], &b[0])],
            Base::Ext(f) => f.mul(&a.to_vec(), &b.to_vec()),
            Base::Group(r) => r.mul(&a.to_vec(), &b.to_vec()),
        }
    }

    pub fn describe(&self) -> String {
        match self {
            Base::Prime(f) => format!("F_{}", f.modulus()),
            Base::Ext(f) => format!("F_{}^{}", f.characteristic(), f.degree()),
            Base::Group(r) => format!("Z_{0}[g]/(g^{0}-1)", r.modulus()),
        }
    }

    /// `log2` of the number of base elements.
    pub fn log2_size(&self) -> f64 {
        self.width() as f64 * (self.digit_radix() as f64).log2()
    }
}

/// The answer ring `base^D` with dot-product pairing.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RingSpec {
    pub base: Base,
    pub dim: usize,
}

/// An element of `base^D`, stored as `D * width` flat digits.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RingVec(pub Vec<u64>);

impl RingSpec {
    pub fn new(base: Base, dim: usize) -> Self {
        Self { base, dim }
    }

    pub fn codec(&self) -> Codec {
        Codec::uniform(self.base.digit_radix(), self.dim * self.base.width())
    }

    pub fn zero(&self) -> RingVec {
        RingVec(vec![0; self.dim * self.base.width()])
    }

    pub fn add_assign(&self, acc: &mut RingVec, x: &RingVec) {
        self.base.add_assign(&mut acc.0, &x.0);
    }

    /// `sum_d lambda[d] * a[d]` in the base structure.
    pub fn pair(&self, lambda: &RingVec, a: &RingVec) -> Vec<u64> {
        let w = self.base.width();
        let mut acc = self.base.zero();
        for (l, x) in lambda.0.chunks(w).zip(a.0.chunks(w)) {
            if l.iter().all(|&d| d == 0) {
                continue;
            }
            let prod = self.base.mul(l, x);
            self.base.add_assign(&mut acc, &prod);
        }
        acc
    }

    /// Builds a ring vector from `D` base elements.
    pub fn from_elements<I, E>(&self, elems: I) -> RingVec
    where
        I: IntoIterator<Item = E>,
        E: AsRef<[u64]>,
    {
        let mut v = Vec::with_capacity(self.dim * self.base.width());
        for e in elems {
            debug_assert_eq!(e.as_ref().len(), self.base.width());
            v.extend_from_slice(e.as_ref());
        }
        debug_assert_eq!(v.len(), self.dim * self.base.width());
        RingVec(v)
    }

    pub fn describe(&self) -> String {
        if self.dim == 1 {
            self.base.describe()
        } else {
            format!("({})^{}", self.base.describe(), self.dim)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pairing_is_dot_product() {
        let spec = RingSpec::new(Base::Prime(PrimeField::new(7).unwrap()), 3);
        let l = RingVec(vec![1, 2, 3]);
        let a = RingVec(vec![4, 5, 6]);
        assert_eq!(spec.pair(&l, &a), vec![(4 + 10 + 18) % 7]);
    }

    #[test]
    fn group_ring_pairing_multiplies() {
        let r = GroupRing::new(6).unwrap();
        let spec = RingSpec::new(Base::Group(r.clone()), 2);
        let l = spec.from_elements([r.monomial(1), r.zero()]);
        let a = spec.from_elements([r.monomial(5), r.monomial(3)]);
        assert_eq!(spec.pair(&l, &a), r.one());
    }
}
