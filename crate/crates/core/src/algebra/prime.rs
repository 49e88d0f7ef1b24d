use super::{int_ring::factor, inv_mod, AlgebraError, Ring};

/// Deterministic Miller-Rabin for the full `u64` range.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    const SMALL: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for &q in &SMALL {
        if n.is_multiple_of(q) {
            return n == q;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    'witness: for &a in &SMALL {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut a: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    a %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, a, m);
        }
        a = mul_mod(a, a, m);
        e >>= 1;
    }
    acc
}

/// The prime field `F_p`; elements are canonical residues in `[0, p)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PrimeField {
    p: u64,
}

impl PrimeField {
    pub fn new(p: u64) -> Result<Self, AlgebraError> {
        if !is_prime(p) {
            return Err(AlgebraError::NotPrime(p));
        }
        Ok(Self { p })
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    pub fn reduce(&self, v: u64) -> u64 {
        v % self.p
    }

    /// Image of a signed integer.
    pub fn from_signed(&self, v: i64) -> u64 {
        v.rem_euclid(self.p as i64) as u64
    }

    /// Multiplicative order of a nonzero element.
    pub fn order(&self, a: u64) -> Option<u64> {
        let a = a % self.p;
        if a == 0 {
            return None;
        }
        let mut order = self.p - 1;
        for (q, _) in factor(self.p - 1) {
            while order.is_multiple_of(q) && self.pow(&a, order / q) == 1 {
                order /= q;
            }
        }
        Some(order)
    }
}

impl Ring for PrimeField {
    type Elem = u64;

    fn zero(&self) -> u64 {
        0
    }
    fn one(&self) -> u64 {
        1 % self.p
    }
    fn add(&self, a: &u64, b: &u64) -> u64 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }
    fn neg(&self, a: &u64) -> u64 {
        if *a == 0 {
            0
        } else {
            self.p - a
        }
    }
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        mul_mod(*a, *b, self.p)
    }
    fn inv(&self, a: &u64) -> Result<u64, AlgebraError> {
        inv_mod(*a % self.p, self.p).ok_or(AlgebraError::NonUnit)
    }
    fn from_int(&self, v: u64) -> u64 {
        v % self.p
    }
    fn pow(&self, a: &u64, e: u64) -> u64 {
        pow_mod(*a, e, self.p)
    }
}

/// Finds an element of multiplicative order exactly `m` in `F_p`.
///
/// Candidates are `h^((p-1)/m)` for `h = 2, 3, ...`; a candidate is accepted
/// when `c^(m/q) != 1` for every prime `q | m`.
pub fn find_order_element(field: &PrimeField, m: u64) -> Result<u64, AlgebraError> {
    let p = field.modulus();
    if m == 0 || !(p - 1).is_multiple_of(m) {
        return Err(AlgebraError::NoSuchElement { p, m });
    }
    if m == 1 {
        return Ok(1);
    }
    let primes: Vec<u64> = factor(m).into_iter().map(|(q, _)| q).collect();
    let cofactor = (p - 1) / m;
    for h in 2..p {
        let c = field.pow(&h, cofactor);
        if primes.iter().all(|&q| field.pow(&c, m / q) != 1) {
            return Ok(c);
        }
    }
    Err(AlgebraError::NoSuchElement { p, m })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn trial_division(n: u64) -> bool {
        n >= 2
            && (2..)
                .take_while(|d| d * d <= n)
                .all(|d| !n.is_multiple_of(d))
    }

    #[test]
    fn miller_rabin_agrees_with_trial_division() {
        for n in 0..5000 {
            assert_eq!(is_prime(n), trial_division(n), "n={n}");
        }
        assert!(is_prime(3067));
        assert!(is_prime(18_446_744_073_709_551_557));
        assert!(!is_prime(3_215_031_751));
    }

    #[test]
    fn f7_inverse_of_three_is_five() {
        let f = PrimeField::new(7).unwrap();
        assert_eq!(f.inv(&3).unwrap(), 5);
        assert_eq!(f.inv(&0), Err(AlgebraError::NonUnit));
    }

    #[test]
    fn rejects_composite_modulus() {
        assert_eq!(PrimeField::new(15), Err(AlgebraError::NotPrime(15)));
    }

    #[test]
    fn field_axioms_exhaustive_small_primes() {
        for p in [2u64, 3, 5, 7, 11, 13] {
            let f = PrimeField::new(p).unwrap();
            for a in 0..p {
                for b in 0..p {
                    for c in 0..p {
                        assert_eq!(f.mul(&f.mul(&a, &b), &c), f.mul(&a, &f.mul(&b, &c)));
                        assert_eq!(f.add(&f.add(&a, &b), &c), f.add(&a, &f.add(&b, &c)));
                        assert_eq!(
                            f.mul(&a, &f.add(&b, &c)),
                            f.add(&f.mul(&a, &b), &f.mul(&a, &c))
                        );
                    }
                }
                if a != 0 {
                    assert_eq!(f.mul(&a, &f.inv(&a).unwrap()), 1);
                }
                assert_eq!(f.add(&a, &f.neg(&a)), 0);
            }
        }
    }

    #[test]
    fn inverse_holds_for_all_primes_below_97() {
        for p in (2..=97).filter(|&p| is_prime(p)) {
            let f = PrimeField::new(p).unwrap();
            for a in 1..p {
                assert_eq!(f.mul(&a, &f.inv(&a).unwrap()), 1, "p={p} a={a}");
            }
        }
    }

    #[test]
    fn order_element_examples() {
        let f7 = PrimeField::new(7).unwrap();
        assert_eq!(find_order_element(&f7, 6).unwrap(), 3);
        assert_eq!(find_order_element(&f7, 1).unwrap(), 1);
        assert!(matches!(
            find_order_element(&f7, 4),
            Err(AlgebraError::NoSuchElement { .. })
        ));

        let f = PrimeField::new(3067).unwrap();
        let g = find_order_element(&f, 511).unwrap();
        assert_eq!(f.pow(&g, 511), 1);
        assert_ne!(f.pow(&g, 511 / 7), 1);
        assert_ne!(f.pow(&g, 511 / 73), 1);
        assert_eq!(f.order(g), Some(511));
    }

    #[test]
    fn powers_of_three_cycle_mod_seven() {
        let f = PrimeField::new(7).unwrap();
        let cycle: Vec<u64> = (1..=6).map(|e| f.pow(&3, e)).collect();
        assert_eq!(cycle, vec![3, 2, 6, 4, 5, 1]);
    }
}
