//! Binary field snapshots.
//!
//! Layout, all little-endian:
//!
//! ```text
//! offset  size  field
//!      0     4  magic "BO2D"
//!      4     2  format version (currently 1)
//!      6     2  flags; bit 0 set when the physical field is real
//!      8     4  nx
//!     12     4  ny
//!     16     8  Lx
//!     24     8  Ly
//!     32     8  t
//!     40     8  s (working regularity of the run that wrote the file)
//!     48     -  payload: nx*ny coefficients, row-major in FFT storage
//!               order (idx = ix*ny + iy), each an (re, im) f64 pair
//! ```
//!
//! The header is exactly 48 bytes; version and flags are 16-bit so the
//! fixed header length holds with nx, ny at 32 bits. The payload stores
//! the raw f64 bits, so a write/read cycle is byte-identical.

use std::fs;
use std::path::Path;

use num_complex::Complex64;
use thiserror::Error;

use crate::field::{FieldError, SpectralField};
use crate::grid::{Grid2, GridError};

pub const SNAPSHOT_MAGIC: [u8; 4] = *b"BO2D";
pub const SNAPSHOT_VERSION: u16 = 1;
pub const SNAPSHOT_HEADER_LEN: usize = 48;

/// Flag bit recording that the physical-space field is real-valued.
pub const FLAG_REAL: u16 = 1;

#[derive(Debug, Error)]
pub enum SnapshotError {
    #[error("i/o failure: {0}")]
    Io(#[from] std::io::Error),
    #[error("bad magic {0:?}, expected \"BO2D\"")]
    BadMagic([u8; 4]),
    #[error("unsupported snapshot version {0}")]
    UnsupportedVersion(u16),
    #[error("truncated snapshot: need {want} bytes, got {got}")]
    Truncated { want: usize, got: usize },
    #[error("snapshot has {extra} trailing bytes past the declared payload")]
    Trailing { extra: usize },
    #[error("snapshot declares an invalid grid: {0}")]
    Grid(#[from] GridError),
    #[error("snapshot payload is not a valid field: {0}")]
    Field(#[from] FieldError),
}

/// Serialize a field (plus the run's regularity index `s`) to bytes.
pub fn encode_snapshot(field: &SpectralField, s: f64) -> Vec<u8> {
    let grid = field.grid();
    let mut out = Vec::with_capacity(SNAPSHOT_HEADER_LEN + 16 * grid.len());
    out.extend_from_slice(&SNAPSHOT_MAGIC);
    out.extend_from_slice(&SNAPSHOT_VERSION.to_le_bytes());
    let flags: u16 = if field.is_real() { FLAG_REAL } else { 0 };
    out.extend_from_slice(&flags.to_le_bytes());
    out.extend_from_slice(&(grid.nx() as u32).to_le_bytes());
    out.extend_from_slice(&(grid.ny() as u32).to_le_bytes());
    out.extend_from_slice(&grid.lx().to_le_bytes());
    out.extend_from_slice(&grid.ly().to_le_bytes());
    out.extend_from_slice(&field.time().to_le_bytes());
    out.extend_from_slice(&s.to_le_bytes());
    for z in field.coeffs() {
        out.extend_from_slice(&z.re.to_le_bytes());
        out.extend_from_slice(&z.im.to_le_bytes());
    }
    out
}

fn le_u16(bytes: &[u8], at: usize) -> u16 {
    u16::from_le_bytes(bytes[at..at + 2].try_into().unwrap())
}

fn le_u32(bytes: &[u8], at: usize) -> u32 {
    u32::from_le_bytes(bytes[at..at + 4].try_into().unwrap())
}

fn le_f64(bytes: &[u8], at: usize) -> f64 {
    f64::from_le_bytes(bytes[at..at + 8].try_into().unwrap())
}

/// Parse bytes produced by [`encode_snapshot`]; returns the field and the
/// stored regularity index.
pub fn decode_snapshot(bytes: &[u8]) -> Result<(SpectralField, f64), SnapshotError> {
    if bytes.len() < SNAPSHOT_HEADER_LEN {
        return Err(SnapshotError::Truncated {
            want: SNAPSHOT_HEADER_LEN,
            got: bytes.len(),
        });
    }
    let magic: [u8; 4] = bytes[0..4].try_into().unwrap();
    if magic != SNAPSHOT_MAGIC {
        return Err(SnapshotError::BadMagic(magic));
    }
    let version = le_u16(bytes, 4);
    if version != SNAPSHOT_VERSION {
        return Err(SnapshotError::UnsupportedVersion(version));
    }
    let flags = le_u16(bytes, 6);
    let nx = le_u32(bytes, 8) as usize;
    let ny = le_u32(bytes, 12) as usize;
    let lx = le_f64(bytes, 16);
    let ly = le_f64(bytes, 24);
    let t = le_f64(bytes, 32);
    let s = le_f64(bytes, 40);
    let grid = Grid2::new(nx, ny, lx, ly)?;
    let want = SNAPSHOT_HEADER_LEN + 16 * grid.len();
    if bytes.len() < want {
        return Err(SnapshotError::Truncated {
            want,
            got: bytes.len(),
        });
    }
    if bytes.len() > want {
        return Err(SnapshotError::Trailing {
            extra: bytes.len() - want,
        });
    }
    let mut coeffs = Vec::with_capacity(grid.len());
    for k in 0..grid.len() {
        let at = SNAPSHOT_HEADER_LEN + 16 * k;
        coeffs.push(Complex64::new(le_f64(bytes, at), le_f64(bytes, at + 8)));
    }
    let field = SpectralField::from_coeffs(grid, coeffs, t, flags & FLAG_REAL != 0)?;
    Ok((field, s))
}

pub fn write_snapshot(
    path: impl AsRef<Path>,
    field: &SpectralField,
    s: f64,
) -> Result<(), SnapshotError> {
    fs::write(path, encode_snapshot(field, s))?;
    Ok(())
}

pub fn read_snapshot(path: impl AsRef<Path>) -> Result<(SpectralField, f64), SnapshotError> {
    decode_snapshot(&fs::read(path)?)
}
