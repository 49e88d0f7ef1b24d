//! Acceptance suite: one line per criterion, nonzero exit on any failure.

use std::panic::{self, AssertUnwindSafe};
use std::sync::Arc;
use std::time::{Duration, Instant};

use foasc::algebra::{determinant, PrimeField};
use foasc::foasc::{
    oa_strength_check, Database, FoascInstance, OaMatrix, OaVerdict, DEFAULT_OA_CAP,
};
use foasc::mv::{
    canonical_set, lifted_support, sparse_decoding_poly_search, trivial_decoding_poly,
    yekhanin_nice_sets, zero_interpolation_weights, SparseSearch,
};
use foasc::protocols::{
    broken_privacy, broken_span, build, build_cgks, build_example, desk_instances, hermite_matrix,
    solve_mu_nu, Params,
};
use foasc::sim::{client_retrieve, run_inprocess, spawn_server, ClientOptions, ServerNode};
use foasc::verify::{
    basis_correctness, comm_audit, exhaustive_correctness, exhaustive_privacy, CorrectnessConfig,
    Fault, VerifyError,
};

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn param(inst: &FoascInstance, key: &str) -> String {
    inst.construction()
        .public_params()
        .into_iter()
        .find(|(k, _)| k == key)
        .map(|(_, v)| v)
        .unwrap_or_default()
}

fn span_everywhere(inst: &FoascInstance) -> Result<u128, String> {
    let rows = inst.row_count().ok_or("row count overflows")?;
    let codec = inst.randomness();
    for i in 0..inst.n() {
        for idx in 0..rows {
            let ell = codec.from_index(idx);
            let v = inst.span_check(i, &ell);
            ensure(
                v.is_pass(),
                format!("{} span fails at i={i} ell={ell:?}: {v:?}", inst.protocol()),
            )?;
        }
    }
    Ok(rows * inst.n() as u128)
}

/// Exhaustive correctness and exact 1-privacy.
fn suites(inst: &FoascInstance) -> Result<String, String> {
    let c =
        exhaustive_correctness(inst, &CorrectnessConfig::default()).map_err(|e| e.to_string())?;
    ensure(c.pass(), c.to_string())?;
    let p = exhaustive_privacy(inst, 1, None).map_err(|e| e.to_string())?;
    ensure(p.pass(), p.to_string())?;
    Ok(format!(
        "{}: {} rounds, 1-private over {} rows (uniform={})",
        inst.protocol(),
        c.rounds,
        p.rows,
        p.uniform()
    ))
}

fn close(a: f64, b: f64) -> bool {
    (a - b).abs() < 1e-9
}

fn c01_binary_oa() -> Outcome {
    let a = OaMatrix::new(vec![
        vec![0, 0, 0, 0],
        vec![0, 0, 1, 1],
        vec![0, 1, 0, 1],
        vec![0, 1, 1, 0],
        vec![1, 0, 0, 1],
        vec![1, 0, 1, 0],
        vec![1, 1, 0, 0],
        vec![1, 1, 1, 1],
    ])
    .map_err(|e| e.to_string())?;
    let t3 = oa_strength_check(&a, 2, 3, DEFAULT_OA_CAP).map_err(|e| e.to_string())?;
    ensure(t3 == OaVerdict::Pass { index: 1 }, format!("t=3: {t3:?}"))?;
    let t4 = oa_strength_check(&a, 2, 4, DEFAULT_OA_CAP).map_err(|e| e.to_string())?;
    ensure(
        matches!(t4, OaVerdict::Failure { .. }),
        format!("t=4: {t4:?}"),
    )?;
    Ok("OA(8,4,2,3) index 1 accepted, strength 4 rejected".into())
}

fn c02_example_protocol() -> Outcome {
    let inst = build_example();
    let spans = span_everywhere(&inst)?;
    ensure(spans == 18, format!("{spans} span checks"))?;
    let c =
        exhaustive_correctness(&inst, &CorrectnessConfig::default()).map_err(|e| e.to_string())?;
    ensure(c.pass() && c.databases == 4 && c.pairs == 18, c.to_string())?;
    let p = exhaustive_privacy(&inst, 1, None).map_err(|e| e.to_string())?;
    ensure(p.pass() && p.uniform(), p.to_string())?;
    Ok(format!(
        "18 span checks, {} rounds, uniform 1-privacy",
        c.rounds
    ))
}

fn c03_cgks() -> Outcome {
    let mut parts = Vec::new();
    for n in [1usize, 8, 27] {
        let inst = build_cgks(n).map_err(|e| e.to_string())?;
        let h: f64 = param(&inst, "h").parse().map_err(|_| "missing h")?;
        ensure(
            (h * h * h) as usize >= n && ((h - 1.0).powi(3) as usize) < n,
            format!("h={h} for n={n}"),
        )?;
        let bits = inst.comm_cost().raw_bits;
        ensure(
            close(bits, 12.0 * h + 2.0),
            format!("n={n}: {bits} raw bits, expected {}", 12.0 * h + 2.0),
        )?;
        let config = CorrectnessConfig::default();
        let c = if n <= 8 {
            exhaustive_correctness(&inst, &config)
        } else {
            basis_correctness(&inst, &config)
        }
        .map_err(|e| e.to_string())?;
        ensure(c.pass(), c.to_string())?;
        let p = exhaustive_privacy(&inst, 1, None).map_err(|e| e.to_string())?;
        ensure(p.pass(), p.to_string())?;
        parts.push(format!(
            "n={n} h={h} bits={bits} rounds={} ({:?})",
            c.rounds, c.mode
        ));
    }
    Ok(parts.join("; "))
}

fn c04_lagrange() -> Outcome {
    let inst = build(
        "lagrange",
        &Params {
            n: Some(3),
            t: Some(1),
            k: Some(3),
            p: Some(5),
            ..Default::default()
        },
    )
    .map_err(|e| e.to_string())?;
    ensure(
        param(&inst, "h") == "3",
        format!("h = {}", param(&inst, "h")),
    )?;
    ensure(inst.row_count() == Some(125), "N != 125")?;
    let c =
        exhaustive_correctness(&inst, &CorrectnessConfig::default()).map_err(|e| e.to_string())?;
    ensure(
        c.pass() && c.databases == 8 && c.pairs == 375,
        c.to_string(),
    )?;
    let p = exhaustive_privacy(&inst, 1, None).map_err(|e| e.to_string())?;
    ensure(p.pass(), p.to_string())?;
    let bits = inst.comm_cost().raw_bits;
    let want = 3.0 * 4.0 * 5f64.log2();
    ensure(
        close(bits, want),
        format!("{bits} raw bits, expected {want}"),
    )?;
    Ok(format!(
        "{} rounds, 1-private, {bits:.4} raw bits",
        c.rounds
    ))
}

fn c05_wy() -> Outcome {
    let f7 = PrimeField::new(7).map_err(|e| e.to_string())?;
    let det = determinant(&f7, &hermite_matrix(&f7, 2)).map_err(|e| e.to_string())?;
    ensure(det != 0, "M singular over F_7")?;
    let inst = build(
        "wy",
        &Params {
            n: Some(4),
            t: Some(1),
            k: Some(2),
            p: Some(7),
            ..Default::default()
        },
    )
    .map_err(|e| e.to_string())?;
    ensure(
        param(&inst, "d") == "3" && param(&inst, "h") == "4",
        "expected d=3, h=4",
    )?;
    ensure(inst.row_count() == Some(2401), "N != 7^4")?;
    let c =
        exhaustive_correctness(&inst, &CorrectnessConfig::default()).map_err(|e| e.to_string())?;
    ensure(
        c.pass() && c.databases == 16 && c.pairs == 4 * 2401,
        c.to_string(),
    )?;
    let p = exhaustive_privacy(&inst, 1, None).map_err(|e| e.to_string())?;
    ensure(p.pass(), p.to_string())?;
    Ok(format!("det M = {det}, {} rounds, 1-private", c.rounds))
}

/// `F_8 = F_2[x]/(x^3 + x + 1)` by shift-and-reduce.
fn gf8_mul(mut a: u8, mut b: u8) -> u8 {
    let mut r = 0;
    while b != 0 {
        if b & 1 == 1 {
            r ^= a;
        }
        b >>= 1;
        a <<= 1;
        if a & 0b1000 != 0 {
            a ^= 0b1011;
        }
    }
    r
}

fn gf8_pow(a: u8, e: u64) -> u8 {
    (0..e).fold(1, |acc, _| gf8_mul(acc, a))
}

fn c06_mersenne() -> Outcome {
    let nice = yekhanin_nice_sets(7).map_err(|e| e.to_string())?;
    ensure(nice.gamma == 3, format!("gamma = {}", nice.gamma))?;
    let x = 0b010u8;
    let p = |theta: u8| 1 ^ theta ^ gf8_pow(theta, 3);
    ensure(p(1) == 1, "P(1) != 1")?;
    for d in [1, 2, 4] {
        ensure(p(gf8_pow(x, d)) == 0, format!("P(g^{d}) != 0"))?;
    }
    ensure(!nice.s0.is_empty(), "S0 empty")?;
    let s1 = [0u64, 1, nice.gamma];
    let mut pairs = 0;
    for sigma in 0..7u64 {
        for delta in [1u64, 2, 4] {
            let hits = s1
                .iter()
                .filter(|&&s| nice.s0.contains(&((sigma + delta * s) % 7)))
                .count();
            ensure(
                hits % 2 == 0,
                format!("odd intersection at sigma={sigma} delta={delta}"),
            )?;
            pairs += 1;
        }
    }
    let mut parts = vec![format!("gamma=3, S0={:?}, {pairs} parity pairs", nice.s0)];
    for name in ["yekhanin", "raghavendra"] {
        let inst = build(
            name,
            &Params {
                p: Some(7),
                h: Some(3),
                n: Some(3),
                ..Default::default()
            },
        )
        .map_err(|e| e.to_string())?;
        ensure(
            inst.n() >= 3 && inst.row_count() == Some(343),
            "expected n >= 3, N = 343",
        )?;
        parts.push(suites(&inst)?);
    }
    Ok(parts.join("; "))
}

fn c07_efremenko() -> Outcome {
    ensure(
        canonical_set(6).map_err(|e| e.to_string())? == vec![1, 3, 4],
        "S_6 != {1,3,4}",
    )?;
    let poly = trivial_decoding_poly(6, 7, None).map_err(|e| e.to_string())?;
    ensure(poly.k() <= 4, format!("{} monomials", poly.k()))?;
    let eval = |theta: u64| {
        poly.monomials.iter().fold(0u64, |acc, &(d, c)| {
            (acc + c * (0..d).fold(1, |a, _| a * theta % 7)) % 7
        })
    };
    ensure(eval(1) == 1, "P(1) != 1")?;
    for d in [1u64, 3, 4] {
        let root = (0..d).fold(1, |a, _| a * poly.g % 7);
        ensure(eval(root) == 0, format!("P(g^{d}) != 0"))?;
    }
    let inst = build(
        "efremenko",
        &Params {
            m: Some(6),
            p: Some(7),
            h: Some(3),
            n: Some(3),
            ..Default::default()
        },
    )
    .map_err(|e| e.to_string())?;
    ensure(
        inst.k() == poly.k() && inst.row_count() == Some(216),
        "expected k = monomials, N = 216",
    )?;
    Ok(format!("k={}, {}", poly.k(), suites(&inst)?))
}

fn c08_sparse() -> Outcome {
    let p = 3067u64;
    ensure(
        p % 511 == 1
            && (2..p)
                .take_while(|d| d * d <= p)
                .all(|d| !p.is_multiple_of(d)),
        "3067 not a suitable prime",
    )?;
    let mut search = SparseSearch::new(511, p, 3);
    search.symmetry = true;
    let poly = sparse_decoding_poly_search(&search).map_err(|e| e.to_string())?;
    ensure(poly.k() == 3, format!("{} monomials", poly.k()))?;
    let pw = |b: u64, e: u64| (0..e).fold(1u64, |a, _| a * b % p);
    let eval = |theta: u64| {
        poly.monomials
            .iter()
            .fold(0u64, |acc, &(d, c)| (acc + c * pw(theta, d)) % p)
    };
    ensure(
        pw(poly.g, 511) == 1 && pw(poly.g, 73) != 1 && pw(poly.g, 7) != 1,
        "g lacks order 511",
    )?;
    ensure(eval(1) == 1, "P(1) != 1")?;
    let s = canonical_set(511).map_err(|e| e.to_string())?;
    ensure(s.len() == 3, "|S_511| != 3")?;
    for &d in &s {
        ensure(eval(pw(poly.g, d)) == 0, format!("P(g^{d}) != 0"))?;
    }
    Ok(format!("p={p}, g={}, P={}", poly.g, poly.describe()))
}

/// Cyclic convolution over `Z_m`.
fn conv(a: &[u64], b: &[u64], m: u64) -> Vec<u64> {
    let n = a.len();
    let mut out = vec![0; n];
    for i in 0..n {
        for j in 0..n {
            out[(i + j) % n] = (out[(i + j) % n] + a[i] * b[j]) % m;
        }
    }
    out
}

fn c09_dvir_gopi() -> Outcome {
    let w = solve_mu_nu(6, &[0, 1]).map_err(|e| e.to_string())?;
    let mono = |a: u64| {
        let mut v = vec![0; 6];
        v[(a % 6) as usize] = 1;
        v
    };
    let mut deltas = vec![0u64];
    deltas.extend([1, 3, 4]);
    for &delta in &deltas {
        let mut acc = vec![0; 6];
        for (j, d) in [0u64, 1].iter().enumerate() {
            let coeff: Vec<u64> = (0..6)
                .map(|c| (w.mu_v[j][c] + delta * w.mu_d[j][c]) % 6)
                .collect();
            let term = conv(&coeff, &mono(d * delta), 6);
            acc = acc.iter().zip(&term).map(|(a, b)| (a + b) % 6).collect();
        }
        let want = if delta == 0 { w.nu.clone() } else { vec![0; 6] };
        ensure(acc == want, format!("identity fails at delta={delta}"))?;
    }
    for q in [2, 3] {
        ensure(w.nu.iter().any(|c| c % q != 0), format!("nu = 0 mod {q}"))?;
    }
    let inst = build(
        "dvir-gopi",
        &Params {
            m: Some(6),
            h: Some(3),
            n: Some(3),
            ..Default::default()
        },
    )
    .map_err(|e| e.to_string())?;
    ensure(inst.k() == 2, "expected two servers")?;
    let one = inst.ring().base.one();
    let codec = inst.randomness();
    let mut non_unit = 0;
    for i in 0..inst.n() {
        for idx in 0..inst.row_count().unwrap() {
            let omega = inst.recon(i, &codec.from_index(idx)).omega;
            ensure(omega.iter().any(|&c| c != 0), "omega = 0")?;
            non_unit += (omega != one) as usize;
        }
    }
    ensure(non_unit > 0, "omega never differs from 1")?;
    Ok(format!(
        "nu={:?}, {non_unit} rows with omega != 1, {}",
        w.nu,
        suites(&inst)?
    ))
}

fn c10_gks() -> Outcome {
    let lifted = lifted_support(2, 3, &[0, 1], 2).map_err(|e| e.to_string())?;
    ensure(lifted == vec![0, 1, 3, 4], format!("lift = {lifted:?}"))?;
    let mut s6 = vec![0];
    s6.extend(canonical_set(6).map_err(|e| e.to_string())?);
    ensure(lifted == s6, "lift differs from S6 bar")?;
    let plain = zero_interpolation_weights(3, 2, &[1, 2], &[0, 1], 1).map_err(|e| e.to_string())?;
    let mult = zero_interpolation_weights(3, 2, &[1, 2], &s6, 2).map_err(|e| e.to_string())?;
    let pw = |b: u64, e: u64| (0..e).fold(1u64, |a, _| a * b % 3);
    for c0 in 0..3 {
        for c1 in 0..3 {
            let obs: Vec<u64> = [1u64, 2].iter().map(|&b| (c0 + c1 * b) % 3).collect();
            let got = obs
                .iter()
                .zip(&plain.mu)
                .fold(0, |a, (o, m)| (a + o * m) % 3);
            ensure(got == c0, format!("plain recovery fails for ({c0}, {c1})"))?;
        }
    }
    let mut polys = 0;
    for code in 0..81u64 {
        let c: Vec<u64> = (0..4).map(|j| code / 3u64.pow(j) % 3).collect();
        let mut obs = Vec::new();
        for b in [1u64, 2] {
            let value = s6
                .iter()
                .zip(&c)
                .fold(0, |a, (&d, &cd)| (a + cd * pw(b, d)) % 3);
            let deriv = s6
                .iter()
                .zip(&c)
                .filter(|(&d, _)| d > 0)
                .fold(0, |a, (&d, &cd)| (a + cd * (d % 3) * pw(b, d - 1)) % 3);
            obs.push(value);
            obs.push(deriv);
        }
        let got = obs
            .iter()
            .zip(&mult.mu)
            .fold(0, |a, (o, m)| (a + o * m) % 3);
        ensure(
            got == c[0],
            format!("multiplicity-2 recovery fails for {c:?}"),
        )?;
        polys += 1;
    }
    let inst = build(
        "gks",
        &Params {
            m: Some(2),
            p: Some(3),
            h: Some(3),
            n: Some(3),
            ..Default::default()
        },
    )
    .map_err(|e| e.to_string())?;
    ensure(
        inst.k() == 2 && param(&inst, "h") == "3",
        "expected k=2, h=3",
    )?;
    Ok(format!(
        "9 + {polys} interpolation checks, {}",
        suites(&inst)?
    ))
}

fn c11_framework() -> Outcome {
    let mut checks = 0u128;
    let insts = desk_instances().map_err(|e| e.to_string())?;
    for inst in &insts {
        checks += span_everywhere(inst)?;
    }
    let inst = build_cgks(8).map_err(|e| e.to_string())?;
    let x = Database::from_mask(8, 0b1010_0110);
    let db = Arc::new(x.clone());
    let servers: Vec<_> = (0..2)
        .map(|j| {
            spawn_server(
                ServerNode::new(j, inst.clone(), Arc::clone(&db)),
                "127.0.0.1:0",
            )
        })
        .collect::<Result<_, _>>()
        .map_err(|e| e.to_string())?;
    let endpoints: Vec<String> = servers.iter().map(|s| s.endpoint()).collect();
    for i in 0..8 {
        let seed = 100 + i as u64;
        let (bit, tcp) = client_retrieve(&endpoints, &inst, i, seed, &ClientOptions::default())
            .map_err(|e| e.to_string())?;
        let (local_bit, local) = run_inprocess(&inst, &x, i, seed).map_err(|e| e.to_string())?;
        ensure(
            bit == x.get(i) && local_bit == bit,
            format!("wrong bit at i={i}"),
        )?;
        ensure(
            tcp.payload_profile() == local.payload_profile(),
            format!(
                "payload differs: {:?} vs {:?}",
                tcp.payload_profile(),
                local.payload_profile()
            ),
        )?;
        comm_audit(&inst, &tcp).map_err(|e| e.to_string())?;
    }
    Ok(format!(
        "{} instances, {checks} span checks; TCP payload matches in-process",
        insts.len()
    ))
}

fn c12_negative_controls() -> Outcome {
    let p = exhaustive_privacy(&broken_privacy(), 1, None).map_err(|e| e.to_string())?;
    ensure(
        !p.pass() && p.counterexample.is_some(),
        "privacy suite passed a fixed-row instance",
    )?;
    let c = exhaustive_correctness(&broken_span(), &CorrectnessConfig::default())
        .map_err(|e| e.to_string())?;
    ensure(
        !c.pass(),
        "correctness suite passed a wrong-lambda instance",
    )?;
    let bs = broken_span();
    ensure(
        (0..2).any(|i| {
            (0..9).any(|idx| !bs.span_check(i, &bs.randomness().from_index(idx)).is_pass())
        }),
        "span check passed a wrong-lambda instance",
    )?;
    let inst = build_cgks(8).map_err(|e| e.to_string())?;
    let (_, mut t) = run_inprocess(&inst, &Database::zeros(8), 0, 1).map_err(|e| e.to_string())?;
    t.exchanges[1].answer_payload += 1;
    ensure(
        matches!(comm_audit(&inst, &t), Err(VerifyError::Mismatch { .. })),
        "comm audit accepted a padded answer",
    )?;
    let mut faulted = 0;
    for inst in desk_instances().map_err(|e| e.to_string())? {
        let config = CorrectnessConfig {
            fault: Some(Fault {
                server: 0,
                digit: 0,
            }),
            ..Default::default()
        };
        let r = if inst.n() <= 8 {
            exhaustive_correctness(&inst, &config)
        } else {
            basis_correctness(&inst, &config)
        }
        .map_err(|e| e.to_string())?;
        ensure(
            !r.pass(),
            format!("fault on {} went unnoticed", inst.protocol()),
        )?;
        faulted += 1;
    }
    Ok(format!("privacy, correctness, span and audit controls rejected; {faulted} faulted instances caught"))
}

type Criterion = (u32, &'static str, fn() -> Outcome, Duration);

fn main() {
    let criteria: [Criterion; 12] = [
        (
            1,
            "binary orthogonal array of strength 3",
            c01_binary_oa,
            Duration::from_secs(1),
        ),
        (
            2,
            "two-server example protocol",
            c02_example_protocol,
            Duration::from_secs(1),
        ),
        (3, "cgks", c03_cgks, Duration::from_secs(120)),
        (4, "lagrange", c04_lagrange, Duration::from_secs(60)),
        (5, "wy hermite", c05_wy, Duration::from_secs(300)),
        (
            6,
            "yekhanin and raghavendra",
            c06_mersenne,
            Duration::from_secs(300),
        ),
        (7, "efremenko", c07_efremenko, Duration::from_secs(120)),
        (
            8,
            "sparse decoding polynomial m=511",
            c08_sparse,
            Duration::from_secs(1800),
        ),
        (9, "dvir-gopi", c09_dvir_gopi, Duration::from_secs(300)),
        (10, "gks", c10_gks, Duration::from_secs(300)),
        (
            11,
            "framework span and transport",
            c11_framework,
            Duration::from_secs(300),
        ),
        (
            12,
            "negative controls",
            c12_negative_controls,
            Duration::from_secs(300),
        ),
    ];
    panic::set_hook(Box::new(|_| {}));
    let mut failed = 0;
    for (id, name, run, limit) in criteria {
        let start = Instant::now();
        let outcome = panic::catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|p| {
            Err(p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panicked".into()))
        });
        let elapsed = start.elapsed();
        let outcome = match outcome {
            Ok(_) if elapsed > limit => Err(format!("took {elapsed:.2?}, limit {limit:?}")),
            other => other,
        };
        match outcome {
            Ok(detail) => println!("criterion {id:>2} PASS {name} ({elapsed:.2?}): {detail}"),
            Err(why) => {
                failed += 1;
                println!("criterion {id:>2} FAIL {name} ({elapsed:.2?}): {why}");
            }
        }
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
    println!("all 12 criteria passed");
}
