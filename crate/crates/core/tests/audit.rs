use foasc::foasc::Database;
use foasc::protocols::{build, build_cgks, param_report, Params};
use foasc::sim::run_inprocess;
use foasc::verify::{comm_audit, VerifyError};

#[test]
fn cgks_cost_for_h_two() {
    let inst = build_cgks(8).unwrap();
    let cost = inst.comm_cost();
    assert_eq!(cost.raw_bits, 26.0);
    assert_eq!(inst.construction().predicted_bits(), Some(26.0));
    let (_, t) = run_inprocess(&inst, &Database::zeros(8), 5, 3).unwrap();
    let audit = comm_audit(&inst, &t).unwrap();
    assert_eq!(audit.raw_bits, 26.0);
    // per server: three mask digits of radix 4 and seven F_2 digits, a byte each
    assert_eq!(audit.payload_bytes, 20);
}

#[test]
fn efremenko_cost_matches_closed_form() {
    let inst = build("efremenko", &Params::default()).unwrap();
    let k = inst.k() as f64;
    let want = k * (3.0 * 6f64.log2() + 7f64.log2());
    assert!((inst.comm_cost().raw_bits - want).abs() < 1e-9);
    let predicted = inst.construction().predicted_bits().unwrap();
    assert!((predicted - want).abs() < 1e-9);
}

#[test]
fn audit_rejects_short_query() {
    let inst = build_cgks(27).unwrap();
    let (_, mut t) = run_inprocess(&inst, &Database::zeros(27), 0, 0).unwrap();
    t.exchanges[0].query_payload -= 1;
    assert!(matches!(
        comm_audit(&inst, &t),
        Err(VerifyError::Mismatch { server: 0, .. })
    ));
}

#[test]
fn param_report_lists_costs() {
    let inst = build("lagrange", &Params::default()).unwrap();
    let kv = param_report(&inst).to_kv();
    assert!(kv.contains("protocol = lagrange"), "{kv}");
    assert!(kv.contains("raw_bits"), "{kv}");
}
