use std::fmt;

use super::{
    broken_privacy, broken_span, build_cgks, build_dvir_gopi, build_efremenko, build_example,
    build_gks, build_lagrange, build_raghavendra, build_wy_hermite, build_yekhanin,
    trivial_instance, ProtocolError,
};
use crate::algebra::{find_order_element, PrimeField, Ring};
use crate::foasc::{CommCost, FoascInstance};
use crate::mv::{
    canonical_set, search_matching_family, sparse_decoding_poly_search, trivial_decoding_poly,
    yekhanin_nice_sets, FamilySearch, MatchingFamily, SparseSearch,
};

/// Every name accepted by [`build`].
pub const PROTOCOLS: &[&str] = &[
    "example",
    "cgks",
    "lagrange",
    "wy",
    "yekhanin",
    "raghavendra",
    "efremenko",
    "dvir-gopi",
    "gks",
    "trivial",
    "broken-privacy",
    "broken-span",
];

/// Numeric parameters; anything left unset takes the protocol's desk default.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Params {
    pub n: Option<usize>,
    pub t: Option<usize>,
    pub k: Option<usize>,
    pub p: Option<u64>,
    pub m: Option<u64>,
    pub h: Option<usize>,
    /// Node budget for matching-family search.
    pub search_budget: Option<u64>,
}

fn family(
    params: &Params,
    modulus: u64,
    target: Vec<u64>,
    side: bool,
) -> Result<MatchingFamily, ProtocolError> {
    let mut search = FamilySearch::new(
        modulus,
        params.h.unwrap_or(3),
        target,
        params.n.unwrap_or(3),
    )
    .with_side_constraint(side);
    if let Some(b) = params.search_budget {
        search.node_budget = b;
    }
    Ok(search_matching_family(&search)?)
}

fn reject_set(name: &str, fields: &[(&str, bool)]) -> Result<(), ProtocolError> {
    match fields.iter().find(|(_, set)| *set) {
        Some((field, _)) => Err(ProtocolError::Param(format!(
            "{name} does not take --{field}"
        ))),
        None => Ok(()),
    }
}

/// Builds a protocol instance by name.
pub fn build(name: &str, params: &Params) -> Result<FoascInstance, ProtocolError> {
    let p = params;
    match name {
        "example" | "trivial" | "broken-privacy" | "broken-span" => {
            reject_set(
                name,
                &[
                    ("n", p.n.is_some()),
                    ("t", p.t.is_some()),
                    ("k", p.k.is_some()),
                    ("p", p.p.is_some()),
                    ("m", p.m.is_some()),
                    ("h", p.h.is_some()),
                ],
            )?;
            Ok(match name {
                "example" => build_example(),
                "trivial" => trivial_instance(),
                "broken-privacy" => broken_privacy(),
                _ => broken_span(),
            })
        }
        "cgks" => build_cgks(p.n.unwrap_or(8)),
        "lagrange" => build_lagrange(
            p.n.unwrap_or(3),
            p.t.unwrap_or(1),
            p.k.unwrap_or(3),
            p.p.unwrap_or(5),
        ),
        "wy" => build_wy_hermite(
            p.n.unwrap_or(4),
            p.t.unwrap_or(1),
            p.k.unwrap_or(2),
            p.p.unwrap_or(7),
        ),
        "yekhanin" | "raghavendra" => {
            let prime = p.p.unwrap_or(7);
            let nice = yekhanin_nice_sets(prime)?;
            let fam = family(p, prime, nice.subgroup(), true)?;
            if name == "yekhanin" {
                build_yekhanin(fam, nice)
            } else {
                build_raghavendra(fam, nice)
            }
        }
        "efremenko" => {
            let m = p.m.unwrap_or(6);
            let prime = p.p.unwrap_or(7);
            let poly = match p.k {
                None => trivial_decoding_poly(m, prime, None)?,
                Some(k) => {
                    let mut search = SparseSearch::new(m, prime, k);
                    search.symmetry = true;
                    sparse_decoding_poly_search(&search)?
                }
            };
            let fam = family(p, m, canonical_set(m)?, false)?;
            build_efremenko(fam, poly)
        }
        "dvir-gopi" => {
            let m = p.m.unwrap_or(6);
            build_dvir_gopi(family(p, m, canonical_set(m)?, false)?)
        }
        "gks" => {
            let m = p.m.unwrap_or(2);
            let prime = p.p.unwrap_or(3);
            let field = PrimeField::new(prime)?;
            let g = find_order_element(&field, m)?;
            let points: Vec<u64> = (0..m).map(|e| field.pow(&g, e)).collect();
            let fam = family(p, m * prime, canonical_set(m * prime)?, false)?;
            build_gks(fam, m, prime, points)
        }
        other => Err(ProtocolError::UnknownProtocol(other.to_string())),
    }
}

/// The seven protocols plus the worked example and the single-server
/// instance, all at desk defaults.
pub fn desk_instances() -> Result<Vec<FoascInstance>, ProtocolError> {
    PROTOCOLS
        .iter()
        .filter(|name| !name.starts_with("broken"))
        .map(|name| build(name, &Params::default()))
        .collect()
}

/// Human-readable and key-value summary of an instance.
#[derive(Debug, Clone, PartialEq)]
pub struct ParamReport {
    pub protocol: String,
    pub n: usize,
    pub k: usize,
    pub t: usize,
    pub level: String,
    pub ring: String,
    pub randomness: String,
    pub rows: Option<u128>,
    pub cost: CommCost,
    pub predicted_bits: Option<f64>,
    pub digest: String,
    pub public: Vec<(String, String)>,
    pub notes: Vec<String>,
}

pub fn param_report(inst: &FoascInstance) -> ParamReport {
    ParamReport {
        protocol: inst.protocol().to_string(),
        n: inst.n(),
        k: inst.k(),
        t: inst.t(),
        level: inst.level_codec().describe(),
        ring: inst.ring().describe(),
        randomness: inst.randomness().describe(),
        rows: inst.row_count(),
        cost: inst.comm_cost(),
        predicted_bits: inst.construction().predicted_bits(),
        digest: inst.digest().iter().map(|b| format!("{b:02x}")).collect(),
        public: inst.construction().public_params(),
        notes: inst.construction().notes(),
    }
}

impl ParamReport {
    /// One `key = value` per line.
    pub fn to_kv(&self) -> String {
        let mut out = String::new();
        let mut kv = |k: &str, v: String| {
            out.push_str(k);
            out.push_str(" = ");
            out.push_str(&v);
            out.push('\n');
        };
        kv("protocol", self.protocol.clone());
        kv("n", self.n.to_string());
        kv("k", self.k.to_string());
        kv("t", self.t.to_string());
        kv("level", self.level.clone());
        kv("ring", self.ring.clone());
        kv("randomness", self.randomness.clone());
        kv(
            "rows",
            self.rows.map_or("overflow".into(), |r| r.to_string()),
        );
        kv("raw_bits", format!("{:.6}", self.cost.raw_bits));
        kv("packed_bits", self.cost.packed_bits.to_string());
        kv("wire_bytes", self.cost.wire_bytes.to_string());
        if let Some(b) = self.predicted_bits {
            kv("predicted_bits", format!("{b:.6}"));
        }
        kv("digest", self.digest.clone());
        for (k, v) in &self.public {
            kv(&format!("param.{k}"), v.clone());
        }
        for (idx, note) in self.notes.iter().enumerate() {
            kv(&format!("note.{idx}"), note.clone());
        }
        out
    }
}

impl fmt::Display for ParamReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "protocol    {}", self.protocol)?;
        writeln!(f, "n           {}", self.n)?;
        writeln!(f, "k           {}", self.k)?;
        writeln!(f, "t           {}", self.t)?;
        writeln!(f, "queries     {}", self.level)?;
        writeln!(f, "answers     {}", self.ring)?;
        writeln!(f, "randomness  {}", self.randomness)?;
        match self.rows {
            Some(r) => writeln!(f, "rows        {r}")?,
            None => writeln!(f, "rows        overflow")?,
        }
        writeln!(f, "raw bits    {:.3}", self.cost.raw_bits)?;
        writeln!(f, "packed bits {}", self.cost.packed_bits)?;
        writeln!(f, "wire bytes  {}", self.cost.wire_bytes)?;
        if let Some(b) = self.predicted_bits {
            writeln!(f, "predicted   {b:.3}")?;
        }
        writeln!(f, "digest      {}", self.digest)?;
        for (k, v) in &self.public {
            writeln!(f, "  {k} = {v}")?;
        }
        for note in &self.notes {
            writeln!(f, "note: {note}")?;
        }
        Ok(())
    }
}
