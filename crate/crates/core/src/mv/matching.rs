use super::MvError;

/// Vectors `u_1..u_n`, `v_1..v_n` in `Z_m^h` with `<u_i, v_i> = 0` and
/// `<u_i, v_j>` in `target` for `i != j`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MatchingFamily {
    pub modulus: u64,
    pub h: usize,
    pub u: Vec<Vec<u64>>,
    pub v: Vec<Vec<u64>>,
    pub target: Vec<u64>,
}

impl MatchingFamily {
    pub fn len(&self) -> usize {
        self.u.len()
    }

    pub fn is_empty(&self) -> bool {
        self.u.is_empty()
    }

    /// `<u_a, v_b> mod m`.
    pub fn inner(&self, a: usize, b: usize) -> u64 {
        dot(&self.u[a], &self.v[b], self.modulus)
    }

    /// The first `n` pairs.
    pub fn truncate(&self, n: usize) -> Self {
        Self {
            modulus: self.modulus,
            h: self.h,
            u: self.u[..n].to_vec(),
            v: self.v[..n].to_vec(),
            target: self.target.clone(),
        }
    }
}

fn dot(a: &[u64], b: &[u64], m: u64) -> u64 {
    a.iter()
        .zip(b)
        .fold(0u64, |acc, (x, y)| (acc + x * y % m) % m)
}

/// Direct verification over all ordered pairs, plus the optional
/// `<u_i, 1_h> != 0` side condition.
pub fn check_matching_family(f: &MatchingFamily, side_constraint: bool) -> Result<(), MvError> {
    let m = f.modulus;
    if f.u.len() != f.v.len() {
        return Err(MvError::InvalidFamily("u and v lengths differ".into()));
    }
    for (name, vs) in [("u", &f.u), ("v", &f.v)] {
        for (idx, x) in vs.iter().enumerate() {
            if x.len() != f.h || x.iter().any(|&c| c >= m) {
                return Err(MvError::InvalidFamily(format!(
                    "{name}_{idx} is not in Z_{m}^{}",
                    f.h
                )));
            }
        }
    }
    for i in 0..f.u.len() {
        let mut s = 0u128;
        for c in 0..f.h {
            s += f.u[i][c] as u128 * f.v[i][c] as u128;
        }
        if !s.is_multiple_of(m as u128) {
            return Err(MvError::InvalidFamily(format!("<u_{i}, v_{i}> != 0")));
        }
        if side_constraint && f.u[i].iter().map(|&c| c as u128).sum::<u128>() % m as u128 == 0 {
            return Err(MvError::InvalidFamily(format!("<u_{i}, 1> = 0")));
        }
        for j in 0..f.u.len() {
            if i == j {
                continue;
            }
            let mut s = 0u128;
            for c in 0..f.h {
                s += f.u[i][c] as u128 * f.v[j][c] as u128;
            }
            let r = (s % m as u128) as u64;
            if !f.target.contains(&r) {
                return Err(MvError::InvalidFamily(format!(
                    "<u_{i}, v_{j}> = {r} not in target set"
                )));
            }
        }
    }
    Ok(())
}

/// Parameters of the backtracking family search.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FamilySearch {
    pub modulus: u64,
    pub h: usize,
    pub target: Vec<u64>,
    pub n_target: usize,
    pub side_constraint: bool,
    /// Cap on `m^h`.
    pub vector_cap: u128,
    /// Cap on partial families visited.
    pub node_budget: u64,
}

impl FamilySearch {
    pub fn new(modulus: u64, h: usize, target: Vec<u64>, n_target: usize) -> Self {
        Self {
            modulus,
            h,
            target,
            n_target,
            side_constraint: false,
            vector_cap: 1_000_000,
            node_budget: 10_000_000,
        }
    }

    pub fn with_side_constraint(mut self, on: bool) -> Self {
        self.side_constraint = on;
        self
    }
}

struct Dfs<'a> {
    params: &'a FamilySearch,
    vectors: Vec<Vec<u64>>,
    in_target: Vec<bool>,
    u_idx: Vec<usize>,
    v_idx: Vec<usize>,
    nodes: u64,
}

impl Dfs<'_> {
    fn ip(&self, a: usize, b: usize) -> u64 {
        dot(&self.vectors[a], &self.vectors[b], self.params.modulus)
    }

    fn u_ok(&self, u: usize) -> bool {
        let m = self.params.modulus;
        if u == 0 {
            return false;
        }
        !self.params.side_constraint || self.vectors[u].iter().sum::<u64>() % m != 0
    }

    /// `true` when the family is complete, `false` on dead end.
    fn extend(&mut self, start_u: usize) -> Result<bool, MvError> {
        if self.u_idx.len() == self.params.n_target {
            return Ok(true);
        }
        let total = self.vectors.len();
        for u in start_u..total {
            if !self.u_ok(u) {
                continue;
            }
            if self
                .v_idx
                .iter()
                .any(|&vj| !self.in_target[self.ip(u, vj) as usize])
            {
                continue;
            }
            for v in 0..total {
                if v == 0 && self.params.n_target > 1 {
                    continue;
                }
                if self.ip(u, v) != 0 {
                    continue;
                }
                if self
                    .u_idx
                    .iter()
                    .any(|&ui| !self.in_target[self.ip(ui, v) as usize])
                {
                    continue;
                }
                self.nodes += 1;
                if self.nodes > self.params.node_budget {
                    return Err(MvError::Exhausted(format!(
                        "node budget {} reached with {} of {} pairs",
                        self.params.node_budget,
                        self.u_idx.len(),
                        self.params.n_target
                    )));
                }
                self.u_idx.push(u);
                self.v_idx.push(v);
                if self.extend(u + 1)? {
                    return Ok(true);
                }
                self.u_idx.pop();
                self.v_idx.pop();
            }
        }
        Ok(false)
    }
}

/// Depth-first search over pairs with `u` strictly increasing in
/// lexicographic order and `v` in lexicographic order; the first complete
/// family found is returned.
pub fn search_matching_family(params: &FamilySearch) -> Result<MatchingFamily, MvError> {
    let m = params.modulus;
    if m < 2 || params.h == 0 {
        return Err(MvError::Param("modulus must be >= 2 and h >= 1".into()));
    }
    if params.n_target == 0 {
        return Err(MvError::Param("n_target must be positive".into()));
    }
    if params.target.iter().any(|&s| s == 0 || s >= m) {
        return Err(MvError::Param("target set must lie in Z_m \\ {0}".into()));
    }
    let size = (m as u128)
        .checked_pow(params.h as u32)
        .filter(|&s| s <= params.vector_cap)
        .ok_or(MvError::CapExceeded {
            what: "m^h",
            size: (m as f64).powi(params.h as i32) as u128,
            cap: params.vector_cap,
        })?;
    let vectors: Vec<Vec<u64>> = (0..size as u64)
        .map(|mut idx| {
            let mut v = vec![0; params.h];
            for slot in v.iter_mut().rev() {
                *slot = idx % m;
                idx /= m;
            }
            v
        })
        .collect();
    let mut in_target = vec![false; m as usize];
    for &s in &params.target {
        in_target[s as usize] = true;
    }
    let mut dfs = Dfs {
        params,
        vectors,
        in_target,
        u_idx: Vec::new(),
        v_idx: Vec::new(),
        nodes: 0,
    };
    if !dfs.extend(0)? {
        return Err(MvError::Exhausted(format!(
            "no family of size {} in Z_{m}^{}",
            params.n_target, params.h
        )));
    }
    Ok(MatchingFamily {
        modulus: m,
        h: params.h,
        u: dfs.u_idx.iter().map(|&i| dfs.vectors[i].clone()).collect(),
        v: dfs.v_idx.iter().map(|&i| dfs.vectors[i].clone()).collect(),
        target: params.target.clone(),
    })
}
