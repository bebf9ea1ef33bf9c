//! VVLB binary field dumps. All integers and doubles are little-endian.
//!
//! | offset | size | content |
//! |---|---|---|
//! | 0 | 4 | magic `b"VVLB"` |
//! | 4 | 4 | `u32` format version, currently 1 |
//! | 8 | 4 | `u32` N_x, samples per row |
//! | 12 | 4 | `u32` N_y, number of rows |
//! | 16 | 8 | `f64` eps (0 for eps-independent fields) |
//! | 24 | 4 | `u32` L, name length in bytes |
//! | 28 | L | name, UTF-8 |
//! | 28 + L | 8 N_x N_y | `f64` samples, row `k` (y-node) then column `i` (x-node) |

use std::path::Path;

use spectral_strip::{Samples, StripField};

use crate::error::{CliError, Result};

pub const MAGIC: [u8; 4] = *b"VVLB";
pub const VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq)]
pub struct FieldDump {
    pub name: String,
    pub eps: f64,
    pub samples: Samples,
}

impl FieldDump {
    pub fn from_field(name: impl Into<String>, eps: f64, f: &StripField) -> Self {
        Self { name: name.into(), eps, samples: f.samples() }
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        let s = &self.samples;
        let name = self.name.as_bytes();
        let mut out = Vec::with_capacity(28 + name.len() + 8 * s.data.len());
        out.extend_from_slice(&MAGIC);
        out.extend_from_slice(&VERSION.to_le_bytes());
        out.extend_from_slice(&(s.nx as u32).to_le_bytes());
        out.extend_from_slice(&(s.ns as u32).to_le_bytes());
        out.extend_from_slice(&self.eps.to_le_bytes());
        out.extend_from_slice(&(name.len() as u32).to_le_bytes());
        out.extend_from_slice(name);
        for v in &s.data {
            out.extend_from_slice(&v.to_le_bytes());
        }
        out
    }

    pub fn from_bytes(b: &[u8]) -> Result<Self> {
        let bad = |m: &str| CliError::Dump(m.to_string());
        let u32_at = |o: usize| -> Result<u32> {
            b.get(o..o + 4).map(|s| u32::from_le_bytes(s.try_into().unwrap())).ok_or_else(|| bad("truncated header"))
        };
        if b.get(..4) != Some(&MAGIC[..]) {
            return Err(bad("missing VVLB magic"));
        }
        let version = u32_at(4)?;
        if version != VERSION {
            return Err(CliError::Dump(format!("unsupported version {version}")));
        }
        let nx = u32_at(8)? as usize;
        let ny = u32_at(12)? as usize;
        let eps = f64::from_le_bytes(b.get(16..24).ok_or_else(|| bad("truncated header"))?.try_into().unwrap());
        let len = u32_at(24)? as usize;
        let name = b.get(28..28 + len).ok_or_else(|| bad("truncated name"))?;
        let name = String::from_utf8(name.to_vec()).map_err(|_| bad("name is not UTF-8"))?;
        let body = &b[28 + len..];
        if body.len() != 8 * nx * ny {
            return Err(CliError::Dump(format!("payload holds {} bytes, header asks for {}", body.len(), 8 * nx * ny)));
        }
        let data = body.chunks_exact(8).map(|c| f64::from_le_bytes(c.try_into().unwrap())).collect();
        Ok(Self { name, eps, samples: Samples { nx, ns: ny, data } })
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_bytes()).map_err(|source| CliError::Write { path: path.to_owned(), source })
    }

    pub fn read(path: &Path) -> Result<Self> {
        let b = std::fs::read(path).map_err(|source| CliError::Read { path: path.to_owned(), source })?;
        Self::from_bytes(&b)
    }
}
