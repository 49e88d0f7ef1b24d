use super::Ring;

/// Sparse univariate polynomial: `(exponent, coefficient)` terms with
/// strictly increasing exponents and no zero coefficients.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UniPoly<E> {
    terms: Vec<(u64, E)>,
}

impl<E: Clone + PartialEq + Eq + std::fmt::Debug> UniPoly<E> {
    /// Normalizes arbitrary terms: sorts, merges equal exponents, drops zeros.
    pub fn new<R: Ring<Elem = E>>(ring: &R, mut terms: Vec<(u64, E)>) -> Self {
        terms.sort_by_key(|(e, _)| *e);
        let mut out: Vec<(u64, E)> = Vec::with_capacity(terms.len());
        for (e, c) in terms {
            match out.last_mut() {
                Some((le, lc)) if *le == e => *lc = ring.add(lc, &c),
                _ => out.push((e, c)),
            }
        }
        out.retain(|(_, c)| !ring.is_zero(c));
        Self { terms: out }
    }

    pub fn terms(&self) -> &[(u64, E)] {
        &self.terms
    }

    pub fn monomial_count(&self) -> usize {
        self.terms.len()
    }

    pub fn degree(&self) -> Option<u64> {
        self.terms.last().map(|(e, _)| *e)
    }

    /// `sum c * theta^e`, each power by square-and-multiply.
    pub fn eval<R: Ring<Elem = E>>(&self, ring: &R, theta: &E) -> E {
        self.terms.iter().fold(ring.zero(), |acc, (e, c)| {
            ring.add(&acc, &ring.mul(c, &ring.pow(theta, *e)))
        })
    }

    /// Dense product of `(theta - root)` over the given roots.
    pub fn from_roots<R: Ring<Elem = E>>(ring: &R, roots: &[E]) -> Self {
        let mut dense = vec![ring.one()];
        for root in roots {
            let neg = ring.neg(root);
            let mut next = vec![ring.zero(); dense.len() + 1];
            for (i, c) in dense.iter().enumerate() {
                next[i + 1] = ring.add(&next[i + 1], c);
                next[i] = ring.add(&next[i], &ring.mul(c, &neg));
            }
            dense = next;
        }
        let terms = dense
            .into_iter()
            .enumerate()
            .map(|(e, c)| (e as u64, c))
            .collect();
        Self::new(ring, terms)
    }

    pub fn scale<R: Ring<Elem = E>>(&self, ring: &R, c: &E) -> Self {
        let terms = self
            .terms
            .iter()
            .map(|(e, x)| (*e, ring.mul(x, c)))
            .collect();
        Self::new(ring, terms)
    }
}
