//! CSV tables, the Gibbs-state binary layout and file checksums.

use std::fmt::Write as _;

use num_complex::Complex64;
use sha2::{Digest, Sha256};

/// Comma-separated table preceded by `#` metadata lines.
#[derive(Debug, Clone)]
pub struct Csv {
    text: String,
    width: usize,
}

impl Csv {
    pub fn new(meta: &[(String, String)], columns: &[&str]) -> Self {
        let mut text = String::new();
        for (k, v) in meta {
            let _ = writeln!(text, "# {k} = {v}");
        }
        let _ = writeln!(text, "{}", columns.join(","));
        Self { text, width: columns.len() }
    }

    /// Appends a row; floats use shortest round-trip formatting.
    pub fn row(&mut self, fields: &[String]) {
        debug_assert_eq!(fields.len(), self.width, "row width");
        let _ = writeln!(self.text, "{}", fields.join(","));
    }

    pub fn into_bytes(self) -> Vec<u8> {
        self.text.into_bytes()
    }
}

/// Shortest representation that parses back to the same value, in exponent
/// form outside `[1e-4, 1e15)`.
pub fn num(x: f64) -> String {
    let a = x.abs();
    if a == 0.0 || (1e-4..1e15).contains(&a) || !a.is_finite() {
        format!("{x}")
    } else {
        format!("{x:e}")
    }
}

pub const GIBBS_MAGIC: &[u8; 8] = b"QLGIBBS\0";

/// 16-byte header (magic, `n_qubits` as little-endian u64) followed by the
/// matrix in row-major order as little-endian `(re, im)` doubles.
pub fn gibbs_dump(n_qubits: usize, rows: usize, entry: impl Fn(usize, usize) -> Complex64) -> Vec<u8> {
    let mut out = Vec::with_capacity(16 + rows * rows * 16);
    out.extend_from_slice(GIBBS_MAGIC);
    out.extend_from_slice(&(n_qubits as u64).to_le_bytes());
    for r in 0..rows {
        for c in 0..rows {
            let v = entry(r, c);
            out.extend_from_slice(&v.re.to_le_bytes());
            out.extend_from_slice(&v.im.to_le_bytes());
        }
    }
    out
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}
