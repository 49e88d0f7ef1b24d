use std::fmt;

use rayon::prelude::*;

use super::{kv_line, VerifyError};
use crate::foasc::{FoascError, FoascInstance, DEFAULT_OA_CAP};

/// Verdict for one coalition `T`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubsetVerdict {
    pub subset: Vec<usize>,
    /// Projected multisets agree for every pair of indices.
    pub equal: bool,
    /// Each projected multiset is uniform over `S^t`.
    pub uniform: bool,
}

/// A projected row occurring more often for `i1` than for `i2`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrivacyCounterexample {
    pub subset: Vec<usize>,
    pub i1: usize,
    pub i2: usize,
    pub row: Vec<Vec<u64>>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrivacyReport {
    pub protocol: String,
    pub t: usize,
    pub k: usize,
    pub n: usize,
    pub rows: u128,
    pub subsets: Vec<SubsetVerdict>,
    pub counterexample: Option<PrivacyCounterexample>,
}

impl PrivacyReport {
    pub fn pass(&self) -> bool {
        self.subsets.iter().all(|s| s.equal)
    }

    pub fn uniform(&self) -> bool {
        self.subsets.iter().all(|s| s.uniform)
    }

    pub fn to_kv(&self) -> String {
        let mut out = String::new();
        kv_line(&mut out, "suite", "privacy");
        kv_line(&mut out, "protocol", &self.protocol);
        kv_line(&mut out, "t", self.t);
        kv_line(&mut out, "rows", self.rows);
        kv_line(&mut out, "subsets", self.subsets.len());
        kv_line(&mut out, "uniform", self.uniform());
        kv_line(
            &mut out,
            "verdict",
            if self.pass() { "pass" } else { "fail" },
        );
        out
    }
}

impl fmt::Display for PrivacyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let verdict = if self.pass() { "PASS" } else { "FAIL" };
        write!(
            f,
            "privacy {} [{}]: t={} over {} coalitions, {} indices, {} rows each; uniform={}",
            self.protocol,
            verdict,
            self.t,
            self.subsets.len(),
            self.n,
            self.rows,
            self.uniform()
        )?;
        if let Some(c) = &self.counterexample {
            write!(
                f,
                "\n  counterexample: T={:?} i1={} i2={} row={:?}",
                c.subset, c.i1, c.i2, c.row
            )?;
        }
        Ok(())
    }
}

fn subsets(k: usize, t: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, k: usize, t: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == t {
            out.push(cur.clone());
            return;
        }
        for j in start..k {
            cur.push(j);
            rec(j + 1, k, t, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, k, t, &mut Vec::new(), &mut out);
    out
}

type Projected = Vec<Vec<u64>>;

/// Sorted multiset of `T`-projected rows of `Q^(i)` over every `ell`.
fn projected(inst: &FoascInstance, subset: &[usize], i: usize, rows: u128) -> Vec<Projected> {
    let codec = inst.randomness();
    let mut out: Vec<Projected> = (0..rows)
        .map(|idx| {
            let row = inst.row(i, &codec.from_index(idx));
            subset.iter().map(|&j| row[j].0.clone()).collect()
        })
        .collect();
    out.sort_unstable();
    out
}

fn is_uniform(rows: &[Projected], level_size: u128, t: usize) -> bool {
    let Some(cells) = level_size.checked_pow(t as u32) else {
        return false;
    };
    let total = rows.len() as u128;
    if cells == 0 || !total.is_multiple_of(cells) {
        return false;
    }
    let mult = (total / cells) as usize;
    let mut runs = 0u128;
    for chunk in rows.chunk_by(|a, b| a == b) {
        if chunk.len() != mult {
            return false;
        }
        runs += 1;
    }
    runs == cells
}

/// The smaller of the first differing pair: it occurs more often in its own
/// list.
fn first_difference(a: &[Projected], b: &[Projected]) -> Option<(bool, Projected)> {
    a.iter().zip(b).find(|(x, y)| x != y).map(|(x, y)| {
        if x < y {
            (true, x.clone())
        } else {
            (false, y.clone())
        }
    })
}

/// Exact `t`-privacy: for every coalition of `t` servers and every pair of
/// indices, the multisets of projected query rows over all `ell` coincide.
pub fn exhaustive_privacy(
    inst: &FoascInstance,
    t: usize,
    cap: Option<u128>,
) -> Result<PrivacyReport, VerifyError> {
    let k = inst.k();
    if t >= k {
        return Err(VerifyError::Param(format!(
            "privacy threshold t = {t} must be below k = {k}"
        )));
    }
    let cap = cap.unwrap_or(DEFAULT_OA_CAP);
    let rows = match inst.row_count() {
        Some(r) if r <= cap => r,
        other => {
            return Err(FoascError::CapExceeded {
                what: "randomness space",
                size: other.unwrap_or(u128::MAX),
                cap,
            }
            .into())
        }
    };
    let level_size = inst.level_codec().size().unwrap_or(u128::MAX);
    let n = inst.n();
    let results: Vec<(SubsetVerdict, Option<PrivacyCounterexample>)> = subsets(k, t)
        .into_par_iter()
        .map(|subset| {
            let reference = projected(inst, &subset, 0, rows);
            let mut uniform = is_uniform(&reference, level_size, t);
            let mut counter = None;
            for i in 1..n {
                let other = projected(inst, &subset, i, rows);
                uniform &= is_uniform(&other, level_size, t);
                if counter.is_none() {
                    if let Some((in_ref, row)) = first_difference(&reference, &other) {
                        let (i1, i2) = if in_ref { (0, i) } else { (i, 0) };
                        counter = Some(PrivacyCounterexample {
                            subset: subset.clone(),
                            i1,
                            i2,
                            row,
                        });
                    }
                }
            }
            let verdict = SubsetVerdict {
                subset,
                equal: counter.is_none(),
                uniform,
            };
            (verdict, counter)
        })
        .collect();
    let counterexample = results.iter().find_map(|(_, c)| c.clone());
    Ok(PrivacyReport {
        protocol: inst.protocol().to_string(),
        t,
        k,
        n,
        rows,
        subsets: results.into_iter().map(|(v, _)| v).collect(),
        counterexample,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::protocols::{broken_privacy, build_cgks, build_example, trivial_instance};

    #[test]
    fn example_protocol_is_uniformly_private() {
        let r = exhaustive_privacy(&build_example(), 1, None).unwrap();
        assert!(r.pass() && r.uniform(), "{r}");
        assert_eq!(r.subsets.len(), 2);
    }

    #[test]
    fn fixed_row_leaks() {
        let r = exhaustive_privacy(&broken_privacy(), 1, None).unwrap();
        assert!(!r.pass());
        let c = r.counterexample.unwrap();
        assert_ne!(c.i1, c.i2);
    }

    #[test]
    fn t_at_least_k_is_rejected() {
        assert!(matches!(
            exhaustive_privacy(&build_example(), 2, None),
            Err(VerifyError::Param(_))
        ));
    }

    #[test]
    fn t_zero_is_vacuous() {
        let r = exhaustive_privacy(&trivial_instance(), 0, None).unwrap();
        assert!(r.pass());
        assert_eq!(r.subsets.len(), 1);
    }

    #[test]
    fn cap_is_enforced() {
        assert!(exhaustive_privacy(&build_cgks(8).unwrap(), 1, Some(10)).is_err());
    }

    #[test]
    fn cgks_marginals_match() {
        let r = exhaustive_privacy(&build_cgks(8).unwrap(), 1, None).unwrap();
        assert!(r.pass() && r.uniform(), "{r}");
    }

    #[test]
    fn subsets_are_combinations() {
        assert_eq!(subsets(4, 2).len(), 6);
        assert_eq!(subsets(3, 0), vec![Vec::<usize>::new()]);
    }
}
