//! Orthogonal-array strength checking.

use std::collections::HashMap;

use super::{FoascError, FoascInstance};

/// Default cap on materialized rows.
pub const DEFAULT_OA_CAP: u128 = 1_000_000;

/// `N x k` array over level indices `0..s`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OaMatrix {
    rows: Vec<Vec<u64>>,
    k: usize,
}

impl OaMatrix {
    pub fn new(rows: Vec<Vec<u64>>) -> Result<Self, FoascError> {
        let k = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != k) {
            return Err(FoascError::MalformedValue("ragged array".into()));
        }
        Ok(Self { rows, k })
    }

    pub fn rows(&self) -> &[Vec<u64>] {
        &self.rows
    }

    pub fn n_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn k(&self) -> usize {
        self.k
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OaVerdict {
    /// Every `t`-column subarray contains each `t`-tuple exactly `index` times.
    Pass { index: u64 },
    /// An entry is outside `0..s`.
    OutOfRange { row: usize, col: usize, value: u64 },
    /// The named tuple appears `count` times in the named columns instead of
    /// `expected` (`expected` is `None` when `s^t` does not divide `N`).
    Failure {
        columns: Vec<usize>,
        tuple: Vec<u64>,
        count: u64,
        expected: Option<u64>,
    },
}

impl OaVerdict {
    pub fn index(&self) -> Option<u64> {
        match self {
            OaVerdict::Pass { index } => Some(*index),
            _ => None,
        }
    }
}

fn combinations(k: usize, t: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, k: usize, t: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == t {
            out.push(cur.clone());
            return;
        }
        for c in start..k {
            cur.push(c);
            rec(c + 1, k, t, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, k, t, &mut Vec::new(), &mut out);
    out
}

/// Checks that `a` is an `OA(N, k, s, t)` and returns its index `N / s^t`.
pub fn oa_strength_check(
    a: &OaMatrix,
    s: u64,
    t: usize,
    cap: u128,
) -> Result<OaVerdict, FoascError> {
    let n_rows = a.n_rows() as u128;
    if n_rows > cap {
        return Err(FoascError::CapExceeded {
            what: "array rows",
            size: n_rows,
            cap,
        });
    }
    if t == 0 || t > a.k() {
        return Err(FoascError::MalformedValue(format!(
            "strength {t} invalid for {} columns",
            a.k()
        )));
    }
    for (r, row) in a.rows().iter().enumerate() {
        if let Some((c, &v)) = row.iter().enumerate().find(|(_, &v)| v >= s) {
            return Ok(OaVerdict::OutOfRange {
                row: r,
                col: c,
                value: v,
            });
        }
    }
    let tuples = (s as u128).checked_pow(t as u32);
    let expected = tuples
        .filter(|&st| n_rows.is_multiple_of(st))
        .map(|st| (n_rows / st) as u64);
    for cols in combinations(a.k(), t) {
        let mut counts: HashMap<Vec<u64>, u64> = HashMap::new();
        for row in a.rows() {
            *counts
                .entry(cols.iter().map(|&c| row[c]).collect())
                .or_default() += 1;
        }
        let mut keys: Vec<_> = counts.iter().collect();
        keys.sort();
        if let Some(want) = expected {
            if let Some((tuple, &count)) = keys.iter().find(|(_, &c)| c != want) {
                return Ok(OaVerdict::Failure {
                    columns: cols,
                    tuple: (*tuple).clone(),
                    count,
                    expected,
                });
            }
            if (counts.len() as u128) < tuples.unwrap() {
                let missing = first_missing(&counts, s, t);
                return Ok(OaVerdict::Failure {
                    columns: cols,
                    tuple: missing,
                    count: 0,
                    expected,
                });
            }
        } else {
            let missing = first_missing(&counts, s, t);
            return Ok(OaVerdict::Failure {
                columns: cols,
                tuple: missing,
                count: 0,
                expected: None,
            });
        }
    }
    Ok(OaVerdict::Pass {
        index: expected.unwrap_or(0),
    })
}

/// Lexicographically first tuple in `0..s` of length `t` absent from `counts`.
fn first_missing(counts: &HashMap<Vec<u64>, u64>, s: u64, t: usize) -> Vec<u64> {
    let mut tuple = vec![0u64; t];
    loop {
        if !counts.contains_key(&tuple) {
            return tuple;
        }
        let mut pos = t;
        loop {
            if pos == 0 {
                return tuple;
            }
            pos -= 1;
            tuple[pos] += 1;
            if tuple[pos] < s {
                break;
            }
            tuple[pos] = 0;
        }
    }
}

/// Materializes `Q^(i)` as level indices, refusing when `N` exceeds `cap`.
pub fn materialize_oa(inst: &FoascInstance, i: usize, cap: u128) -> Result<OaMatrix, FoascError> {
    let n_rows = inst.row_count().unwrap_or(u128::MAX);
    if n_rows > cap {
        return Err(FoascError::CapExceeded {
            what: "row count N",
            size: n_rows,
            cap,
        });
    }
    let level = inst.level_codec();
    let rows = (0..n_rows)
        .map(|idx| {
            let ell = inst.randomness().from_index(idx);
            inst.row(i, &ell)
                .iter()
                .map(|q| level.index_of(&q.0) as u64)
                .collect()
        })
        .collect();
    OaMatrix::new(rows)
}
