use std::fs;
use std::path::Path;

use super::SimError;
use crate::foasc::Database;

/// 8-byte little-endian `n`, then the bits packed little-endian within each byte.
pub fn write_database(path: &Path, x: &Database) -> Result<(), SimError> {
    let n = x.len();
    let mut out = (n as u64).to_le_bytes().to_vec();
    let mut packed = vec![0u8; n.div_ceil(8)];
    for (tau, &b) in x.bits().iter().enumerate() {
        if b {
            packed[tau / 8] |= 1 << (tau % 8);
        }
    }
    out.extend_from_slice(&packed);
    fs::write(path, out)?;
    Ok(())
}

pub fn read_database(path: &Path) -> Result<Database, SimError> {
    let bytes = fs::read(path)?;
    if bytes.len() < 8 {
        return Err(SimError::DbFormat("missing length header".into()));
    }
    let n = u64::from_le_bytes(bytes[..8].try_into().expect("eight bytes"));
    let body = &bytes[8..];
    let n = usize::try_from(n).map_err(|_| SimError::DbFormat(format!("length {n} too large")))?;
    if body.len() != n.div_ceil(8) {
        return Err(SimError::DbFormat(format!(
            "header says {n} bits, body has {} bytes",
            body.len()
        )));
    }
    if n % 8 != 0 && body[n / 8] >> (n % 8) != 0 {
        return Err(SimError::DbFormat("padding bits are set".into()));
    }
    let bits = (0..n)
        .map(|tau| body[tau / 8] >> (tau % 8) & 1 == 1)
        .collect();
    Ok(Database::new(bits)?)
}
