//! Gaussian elimination over prime fields, and over squarefree `Z_m` by
//! solving per prime factor and recombining with the CRT.

use super::{AlgebraError, IntRing, PrimeField, Ring};

/// Dense row-major matrix of canonical residues.
pub type Matrix = Vec<Vec<u64>>;

/// Reduced row echelon form in place; returns the pivot columns.
fn rref(f: &PrimeField, a: &mut Matrix, cols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..cols {
        if row == a.len() {
            break;
        }
        let Some(sel) = (row..a.len()).find(|&r| a[r][col] != 0) else {
            continue;
        };
        a.swap(row, sel);
        let inv = f.inv(&a[row][col]).expect("pivot is nonzero");
        for v in a[row].iter_mut() {
            *v = f.mul(v, &inv);
        }
        for r in 0..a.len() {
            if r != row && a[r][col] != 0 {
                let factor = a[r][col];
                for c in 0..a[r].len() {
                    let t = f.mul(&factor, &a[row][c]);
                    a[r][c] = f.sub(&a[r][c], &t);
                }
            }
        }
        pivots.push(col);
        row += 1;
    }
    pivots
}

fn check_shape(a: &Matrix) -> Result<usize, AlgebraError> {
    let cols = a.first().map_or(0, Vec::len);
    if let Some(bad) = a.iter().find(|r| r.len() != cols) {
        return Err(AlgebraError::DimensionMismatch {
            expected: cols,
            got: bad.len(),
        });
    }
    Ok(cols)
}

/// Some `x` with `A x = b` over `F_p` (free variables set to zero).
pub fn solve(f: &PrimeField, a: &Matrix, b: &[u64]) -> Result<Vec<u64>, AlgebraError> {
    let cols = check_shape(a)?;
    if b.len() != a.len() {
        return Err(AlgebraError::DimensionMismatch {
            expected: a.len(),
            got: b.len(),
        });
    }
    let mut aug: Matrix = a
        .iter()
        .zip(b)
        .map(|(row, &bi)| {
            let mut r: Vec<u64> = row.iter().map(|v| f.reduce(*v)).collect();
            r.push(f.reduce(bi));
            r
        })
        .collect();
    let pivots = rref(f, &mut aug, cols);
    if aug.iter().skip(pivots.len()).any(|r| r[cols] != 0) {
        return Err(AlgebraError::NoSolution);
    }
    let mut x = vec![0; cols];
    for (r, &c) in pivots.iter().enumerate() {
        x[c] = aug[r][cols];
    }
    Ok(x)
}

/// Basis of the right null space `{x : A x = 0}` over `F_p`, one vector per
/// free column in increasing column order.
pub fn nullspace(f: &PrimeField, a: &Matrix) -> Result<Vec<Vec<u64>>, AlgebraError> {
    let cols = check_shape(a)?;
    let mut m: Matrix = a
        .iter()
        .map(|r| r.iter().map(|v| f.reduce(*v)).collect())
        .collect();
    let pivots = rref(f, &mut m, cols);
    let mut basis = Vec::new();
    for free in (0..cols).filter(|c| !pivots.contains(c)) {
        let mut v = vec![0; cols];
        v[free] = 1;
        for (r, &pc) in pivots.iter().enumerate() {
            v[pc] = f.neg(&m[r][free]);
        }
        basis.push(v);
    }
    Ok(basis)
}

pub fn rank(f: &PrimeField, a: &Matrix) -> Result<usize, AlgebraError> {
    let cols = check_shape(a)?;
    let mut m: Matrix = a
        .iter()
        .map(|r| r.iter().map(|v| f.reduce(*v)).collect())
        .collect();
    Ok(rref(f, &mut m, cols).len())
}

/// Determinant of a square matrix over `F_p` by elimination.
pub fn determinant(f: &PrimeField, a: &Matrix) -> Result<u64, AlgebraError> {
    let n = a.len();
    let cols = check_shape(a)?;
    if cols != n {
        return Err(AlgebraError::DimensionMismatch {
            expected: n,
            got: cols,
        });
    }
    let mut m: Matrix = a
        .iter()
        .map(|r| r.iter().map(|v| f.reduce(*v)).collect())
        .collect();
    let mut det = 1u64;
    for col in 0..n {
        let Some(sel) = (col..n).find(|&r| m[r][col] != 0) else {
            return Ok(0);
        };
        if sel != col {
            m.swap(sel, col);
            det = f.neg(&det);
        }
        det = f.mul(&det, &m[col][col]);
        let inv = f.inv(&m[col][col])?;
        for r in col + 1..n {
            if m[r][col] != 0 {
                let factor = f.mul(&m[r][col], &inv);
                for c in col..n {
                    let t = f.mul(&factor, &m[col][c]);
                    m[r][c] = f.sub(&m[r][c], &t);
                }
            }
        }
    }
    Ok(det)
}

/// Some `x` with `A x = b` over squarefree `Z_m`: solved independently in
/// each `F_{p_j}` and recombined coordinate-wise.
pub fn solve_mod(ring: &IntRing, a: &Matrix, b: &[u64]) -> Result<Vec<u64>, AlgebraError> {
    let cols = check_shape(a)?;
    let mut per_prime = Vec::with_capacity(ring.primes().len());
    for &q in ring.primes() {
        let f = PrimeField::new(q)?;
        per_prime.push(solve(&f, a, b)?);
    }
    (0..cols)
        .map(|c| {
            let residues: Vec<u64> = per_prime.iter().map(|x| x[c]).collect();
            ring.crt_combine(&residues)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mat_vec(ring: &impl Ring<Elem = u64>, a: &Matrix, x: &[u64]) -> Vec<u64> {
        a.iter()
            .map(|row| {
                row.iter()
                    .zip(x)
                    .fold(ring.zero(), |acc, (r, v)| ring.add(&acc, &ring.mul(r, v)))
            })
            .collect()
    }

    #[test]
    fn identity_returns_rhs() {
        let f = PrimeField::new(11).unwrap();
        let id: Matrix = (0..4)
            .map(|i| (0..4).map(|j| (i == j) as u64).collect())
            .collect();
        let b = vec![3, 1, 4, 10];
        assert_eq!(solve(&f, &id, &b).unwrap(), b);
    }

    #[test]
    fn f5_two_by_two() {
        let f = PrimeField::new(5).unwrap();
        let a = vec![vec![1, 1], vec![1, 2]];
        assert_eq!(solve(&f, &a, &[0, 1]).unwrap(), vec![4, 1]);
    }

    #[test]
    fn inconsistent_system() {
        let f = PrimeField::new(7).unwrap();
        let a = vec![vec![1, 1], vec![2, 2]];
        assert_eq!(solve(&f, &a, &[1, 3]), Err(AlgebraError::NoSolution));
    }

    #[test]
    fn z6_solvable_mod_2_not_mod_3() {
        // 3x = 1 has the solution x = 1 mod 2 but no solution mod 3.
        let z6 = IntRing::new(6).unwrap();
        assert_eq!(
            solve_mod(&z6, &vec![vec![3]], &[1]),
            Err(AlgebraError::NoSolution)
        );
        // 5x = 1 -> x = 5
        assert_eq!(solve_mod(&z6, &vec![vec![5]], &[1]).unwrap(), vec![5]);
    }

    #[test]
    fn z_m_solution_satisfies_system() {
        let z = IntRing::new(42).unwrap();
        let a = vec![vec![5, 1, 0], vec![1, 11, 4], vec![0, 2, 13]];
        let b = vec![7, 3, 40];
        let x = solve_mod(&z, &a, &b).unwrap();
        assert_eq!(mat_vec(&z, &a, &x), b);
    }

    #[test]
    fn nullspace_vectors_are_annihilated() {
        let f = PrimeField::new(3).unwrap();
        let a = vec![vec![1, 2, 0, 1], vec![2, 1, 0, 2]];
        let ns = nullspace(&f, &a).unwrap();
        assert_eq!(ns.len(), 4 - rank(&f, &a).unwrap());
        for v in ns {
            assert!(mat_vec(&f, &a, &v).iter().all(|&c| c == 0));
        }
    }

    #[test]
    fn determinant_small() {
        let f = PrimeField::new(7).unwrap();
        assert_eq!(
            determinant(&f, &vec![vec![1, 2], vec![3, 4]]).unwrap(),
            f.from_signed(-2)
        );
        assert_eq!(determinant(&f, &vec![vec![1, 2], vec![2, 4]]).unwrap(), 0);
    }
}
