use super::{AlgebraError, PrimeField, Ring};

/// Multi-index `i = (i_1, ..., i_h)` of a Hasse derivative.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MultiIndex(pub Vec<u64>);

impl MultiIndex {
    pub fn zero(h: usize) -> Self {
        Self(vec![0; h])
    }

    pub fn unit(h: usize, c: usize) -> Self {
        let mut v = vec![0; h];
        v[c] = 1;
        Self(v)
    }

    pub fn weight(&self) -> u64 {
        self.0.iter().sum()
    }
}

/// All multi-indices of length `h` with weight `< e`, ordered by weight and,
/// within a weight, with earlier coordinates first (so for `e = 2`: the zero
/// index, then `e_1, ..., e_h`).
pub fn multi_indices_below(h: usize, e: u64) -> Vec<MultiIndex> {
    fn rec(h: usize, budget: u64, prefix: &mut Vec<u64>, out: &mut Vec<MultiIndex>) {
        if prefix.len() == h {
            out.push(MultiIndex(prefix.clone()));
            return;
        }
        for v in 0..=budget {
            prefix.push(v);
            rec(h, budget - v, prefix, out);
            prefix.pop();
        }
    }
    if e == 0 {
        return Vec::new();
    }
    let mut all = Vec::new();
    rec(h, e - 1, &mut Vec::new(), &mut all);
    all.sort_by(|a, b| a.weight().cmp(&b.weight()).then_with(|| b.0.cmp(&a.0)));
    all
}

/// `C(n, k) mod p`, computed exactly as an integer when it fits in `u128`
/// and via a Pascal row mod `p` otherwise.
pub fn binomial_mod(n: u64, k: u64, p: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for j in 0..k {
        match acc.checked_mul((n - j) as u128) {
            Some(v) => acc = v / (j as u128 + 1),
            None => return pascal_mod(n, k, p),
        }
    }
    (acc % p as u128) as u64
}

fn pascal_mod(n: u64, k: u64, p: u64) -> u64 {
    let mut row = vec![0u64; k as usize + 1];
    row[0] = 1 % p;
    for i in 1..=n {
        for j in (1..=k.min(i) as usize).rev() {
            row[j] = (row[j] + row[j - 1]) % p;
        }
    }
    row[k as usize]
}

/// The `i`-th Hasse derivative of `z -> z^u` evaluated at `z`:
/// `prod_j C(u_j, i_j) * z_j^(u_j - i_j)`, zero if some `i_j > u_j`.
pub fn hasse_of_monomial(
    field: &PrimeField,
    u: &[u64],
    i: &MultiIndex,
    z: &[u64],
) -> Result<u64, AlgebraError> {
    if i.0.len() != u.len() {
        return Err(AlgebraError::DimensionMismatch {
            expected: u.len(),
            got: i.0.len(),
        });
    }
    if z.len() != u.len() {
        return Err(AlgebraError::DimensionMismatch {
            expected: u.len(),
            got: z.len(),
        });
    }
    let p = field.modulus();
    let mut acc = 1 % p;
    for ((&uj, &ij), &zj) in u.iter().zip(&i.0).zip(z) {
        if ij > uj {
            return Ok(0);
        }
        let c = binomial_mod(uj, ij, p);
        acc = field.mul(&acc, &field.mul(&c, &field.pow(&(zj % p), uj - ij)));
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Coefficients of `(z + y)^u` as a polynomial in `y`, expanded by
    /// repeated multiplication of dense polynomials (no binomial formula).
    fn expand(
        field: &PrimeField,
        u: &[u64],
        z: &[u64],
    ) -> std::collections::HashMap<Vec<u64>, u64> {
        let mut poly: std::collections::HashMap<Vec<u64>, u64> = std::collections::HashMap::new();
        poly.insert(vec![0; u.len()], 1);
        for (c, (&uc, &zc)) in u.iter().zip(z).enumerate() {
            for _ in 0..uc {
                let mut next = std::collections::HashMap::new();
                for (mono, coef) in &poly {
                    // times z_c
                    let e = next.entry(mono.clone()).or_insert(0);
                    *e = field.add(e, &field.mul(coef, &zc));
                    // times y_c
                    let mut m2 = mono.clone();
                    m2[c] += 1;
                    let e = next.entry(m2).or_insert(0);
                    *e = field.add(e, coef);
                }
                poly = next;
            }
        }
        poly
    }

    #[test]
    fn hasse_matches_symbolic_expansion_over_f3() {
        let f = PrimeField::new(3).unwrap();
        for h in 1..=3usize {
            let count = 3usize.pow(h as u32);
            for u_idx in 0..count {
                let u: Vec<u64> = (0..h)
                    .map(|c| (u_idx / 3usize.pow(c as u32) % 3) as u64)
                    .collect();
                for z_idx in 0..count {
                    let z: Vec<u64> = (0..h)
                        .map(|c| (z_idx / 3usize.pow(c as u32) % 3) as u64)
                        .collect();
                    let expansion = expand(&f, &u, &z);
                    for i in multi_indices_below(h, 3) {
                        let expected = expansion.get(&i.0).copied().unwrap_or(0);
                        assert_eq!(
                            hasse_of_monomial(&f, &u, &i, &z).unwrap(),
                            expected,
                            "u={u:?} z={z:?} i={i:?}"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn examples() {
        let f = PrimeField::new(3).unwrap();
        // coefficient of y_1 in (z_1 + y_1)^2 is 2 z_1
        for z1 in 0..3 {
            assert_eq!(
                hasse_of_monomial(&f, &[2, 0], &MultiIndex(vec![1, 0]), &[z1, 1]).unwrap(),
                f.mul(&2, &z1)
            );
        }
        assert_eq!(
            hasse_of_monomial(&f, &[2, 1], &MultiIndex::zero(2), &[2, 2]).unwrap(),
            f.mul(&f.pow(&2, 2), &2)
        );
        assert_eq!(
            hasse_of_monomial(&f, &[1, 1], &MultiIndex(vec![2, 0]), &[1, 1]).unwrap(),
            0
        );
        assert!(matches!(
            hasse_of_monomial(&f, &[1, 1], &MultiIndex(vec![0]), &[1, 1]),
            Err(AlgebraError::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn multi_index_order_for_multiplicity_two() {
        let idx = multi_indices_below(3, 2);
        assert_eq!(
            idx,
            vec![
                MultiIndex::zero(3),
                MultiIndex::unit(3, 0),
                MultiIndex::unit(3, 1),
                MultiIndex::unit(3, 2)
            ]
        );
    }

    #[test]
    fn binomial_large_falls_back() {
        assert_eq!(binomial_mod(10, 3, 7), 120 % 7);
        assert_eq!(binomial_mod(200, 100, 13), pascal_mod(200, 100, 13));
        assert_eq!(binomial_mod(3, 5, 7), 0);
    }
}
