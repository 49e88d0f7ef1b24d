use std::sync::atomic::{AtomicU64, Ordering};

use rayon::prelude::*;

use super::{canonical_set, squarefree_primes, MvError};
use crate::algebra::{find_order_element, solve, AlgebraError, PrimeField, Ring, UniPoly};

/// `P(theta) = sum rho_j theta^(d_j)` over `F_p` with `P(g^delta) = 0` for
/// every `delta in S_m` and `P(1) = 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DecodingPoly {
    pub m: u64,
    pub p: u64,
    pub g: u64,
    /// `(d_j, rho_j)` with increasing exponents and nonzero coefficients.
    pub monomials: Vec<(u64, u64)>,
}

impl DecodingPoly {
    /// Normalizes the terms and checks the root and normalization identities.
    pub fn new(m: u64, p: u64, g: u64, terms: Vec<(u64, u64)>) -> Result<Self, MvError> {
        let field = PrimeField::new(p)?;
        let poly = UniPoly::new(&field, terms);
        let out = Self {
            m,
            p,
            g,
            monomials: poly.terms().to_vec(),
        };
        out.validate()?;
        Ok(out)
    }

    pub fn k(&self) -> usize {
        self.monomials.len()
    }

    pub fn exponents(&self) -> Vec<u64> {
        self.monomials.iter().map(|&(d, _)| d).collect()
    }

    pub fn coefficients(&self) -> Vec<u64> {
        self.monomials.iter().map(|&(_, c)| c).collect()
    }

    pub fn eval(&self, theta: u64) -> u64 {
        let f = PrimeField::new(self.p).expect("validated at construction");
        UniPoly::new(&f, self.monomials.clone()).eval(&f, &theta)
    }

    pub fn validate(&self) -> Result<(), MvError> {
        let f = PrimeField::new(self.p)?;
        if f.order(self.g) != Some(self.m) {
            return Err(MvError::InvalidDecodingPoly(format!(
                "g = {} does not have order {} in F_{}",
                self.g, self.m, self.p
            )));
        }
        if self.eval(1) != 1 {
            return Err(MvError::InvalidDecodingPoly("P(1) != 1".into()));
        }
        for delta in canonical_set(self.m)? {
            if self.eval(f.pow(&self.g, delta)) != 0 {
                return Err(MvError::InvalidDecodingPoly(format!("P(g^{delta}) != 0")));
            }
        }
        Ok(())
    }

    pub fn describe(&self) -> String {
        self.monomials
            .iter()
            .map(|(d, c)| format!("{c}*t^{d}"))
            .collect::<Vec<_>>()
            .join(" + ")
    }
}

fn field_and_generator(m: u64, p: u64, g: Option<u64>) -> Result<(PrimeField, u64), MvError> {
    squarefree_primes(m)?;
    let f = PrimeField::new(p)?;
    if !(p - 1).is_multiple_of(m) {
        return Err(MvError::Param(format!("{m} does not divide {p} - 1")));
    }
    let g = match g {
        Some(g) => g,
        None => find_order_element(&f, m)?,
    };
    if f.order(g) != Some(m) {
        return Err(MvError::Param(format!(
            "{g} does not have order {m} in F_{p}"
        )));
    }
    Ok((f, g))
}

/// `prod (theta - g^delta) / prod (1 - g^delta)` over `delta in S_m`.
///
/// `g = None` picks the element from [`find_order_element`].
pub fn trivial_decoding_poly(m: u64, p: u64, g: Option<u64>) -> Result<DecodingPoly, MvError> {
    let (f, g) = field_and_generator(m, p, g)?;
    let roots: Vec<u64> = canonical_set(m)?.iter().map(|&d| f.pow(&g, d)).collect();
    let num = UniPoly::from_roots(&f, &roots);
    let at_one = num.eval(&f, &1);
    let scale = f.inv(&at_one)?;
    DecodingPoly::new(m, p, g, num.scale(&f, &scale).terms().to_vec())
}

/// Parameters of the sparse decoding-polynomial search.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SparseSearch {
    pub m: u64,
    pub p: u64,
    pub g: Option<u64>,
    pub k_target: usize,
    /// Fix the smallest exponent to 0. Multiplying `P` by `theta^c` keeps
    /// its roots and `P(1)`, so every exponent set is a translate of one
    /// containing 0.
    pub symmetry: bool,
    /// Cap on exponent sets examined.
    pub budget: u64,
}

impl SparseSearch {
    pub fn new(m: u64, p: u64, k_target: usize) -> Self {
        Self {
            m,
            p,
            g: None,
            k_target,
            symmetry: false,
            budget: u64::MAX,
        }
    }
}

struct Ctx {
    f: PrimeField,
    m: u64,
    k: usize,
    powers: Vec<u64>,
    deltas: Vec<u64>,
    examined: AtomicU64,
    budget: u64,
}

impl Ctx {
    fn try_set(&self, exps: &[u64]) -> Option<Vec<u64>> {
        let mut a: Vec<Vec<u64>> = self
            .deltas
            .iter()
            .map(|&delta| {
                exps.iter()
                    .map(|&d| self.powers[((delta * d) % self.m) as usize])
                    .collect()
            })
            .collect();
        a.push(vec![1; exps.len()]);
        let mut b = vec![0; self.deltas.len()];
        b.push(1);
        match solve(&self.f, &a, &b) {
            Ok(x) => Some(x),
            Err(AlgebraError::NoSolution) => None,
            Err(e) => panic!("shape error in decoding search: {e}"),
        }
    }

    /// Lexicographic enumeration of the remaining exponents.
    fn extend(&self, exps: &mut Vec<u64>) -> Result<Option<Vec<(u64, u64)>>, ()> {
        if exps.len() == self.k {
            if self.examined.fetch_add(1, Ordering::Relaxed) >= self.budget {
                return Err(());
            }
            return Ok(self
                .try_set(exps)
                .map(|x| exps.iter().copied().zip(x).collect()));
        }
        let start = exps.last().map_or(0, |&d| d + 1);
        let remaining = (self.k - exps.len()) as u64;
        for d in start..=self.m - remaining {
            exps.push(d);
            let r = self.extend(exps);
            exps.pop();
            if let Ok(None) = r {
                continue;
            }
            return r;
        }
        Ok(None)
    }
}

/// Finds an `S_m`-decoding polynomial with at most `k_target` monomials.
///
/// Exponent sets are enumerated in lexicographic order; the first set whose
/// `|S_m| + 1` linear constraints are solvable is returned, independent of
/// thread scheduling.
pub fn sparse_decoding_poly_search(params: &SparseSearch) -> Result<DecodingPoly, MvError> {
    let (f, g) = field_and_generator(params.m, params.p, params.g)?;
    let r = squarefree_primes(params.m)?.len();
    if params.k_target == 0 || params.k_target >= 1 << r {
        return Err(MvError::Param(format!(
            "k_target = {} must lie in 1..{}",
            params.k_target,
            1u64 << r
        )));
    }
    if params.k_target as u64 > params.m {
        return Err(MvError::Param("more monomials than exponents".into()));
    }
    let m = params.m;
    let ctx = Ctx {
        powers: (0..m).map(|e| f.pow(&g, e)).collect(),
        deltas: canonical_set(m)?,
        f,
        m,
        k: params.k_target,
        examined: AtomicU64::new(0),
        budget: params.budget,
    };
    let firsts: Vec<u64> = if params.symmetry {
        vec![0]
    } else {
        (0..=m - params.k_target as u64).collect()
    };
    let found = firsts.into_iter().find_map(|d1| {
        if ctx.k == 1 {
            return Some(ctx.extend(&mut vec![d1]));
        }
        let seconds: Vec<u64> = (d1 + 1..=m - ctx.k as u64 + 1).collect();
        seconds
            .into_par_iter()
            .map(|d2| ctx.extend(&mut vec![d1, d2]))
            .find_first(|r| !matches!(r, Ok(None)))
    });
    match found {
        Some(Ok(Some(terms))) => DecodingPoly::new(m, params.p, g, terms),
        Some(Err(())) => Err(MvError::Exhausted(format!(
            "budget of {} exponent sets reached",
            params.budget
        ))),
        _ => Err(MvError::Exhausted(format!(
            "no S_{m}-decoding polynomial with {} monomials over F_{}",
            params.k_target, params.p
        ))),
    }
}
