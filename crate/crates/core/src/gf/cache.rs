//! On-disk cache for the dense `F_{q^6}` logarithm table.
//!
//! One little-endian `u32` per field element in coordinate-code order, with
//! `u32::MAX` standing in for the zero element.

use std::fs;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use super::tower::FieldTower;
use crate::error::{Error, Result};

fn join(coeffs: &[u64]) -> String {
    coeffs
        .iter()
        .map(|c| c.to_string())
        .collect::<Vec<_>>()
        .join("_")
}

/// File name keyed by the characteristic, the degree, and the defining data
/// of the tower (cubic modulus plus the minimal polynomial of `gamma`).
pub fn cache_file_name(tower: &FieldTower) -> String {
    format!(
        "gf-p{}-f{}-r{}-g{}.log32",
        tower.p(),
        tower.f(),
        join(tower.cubic().modulus()),
        join(&tower.gamma_minimal_polynomial()),
    )
}

/// Installs the logarithm table from `dir` when a valid file is present,
/// otherwise builds it and writes the file. Returns the cache path.
pub fn load_or_build_log_table(tower: &FieldTower, dir: &Path) -> Result<PathBuf> {
    let path = dir.join(cache_file_name(tower));
    let io = |e: std::io::Error| Error::Cache(format!("{}: {e}", path.display()));
    if tower.log_table_built() {
        if !path.exists() {
            write_table(&path, tower.log_table()).map_err(io)?;
        }
        return Ok(path);
    }
    if let Ok(bytes) = fs::read(&path) {
        if bytes.len() as u64 == 4 * tower.size() {
            let log: Vec<u32> = bytes
                .chunks_exact(4)
                .map(|c| u32::from_le_bytes([c[0], c[1], c[2], c[3]]))
                .collect();
            if spot_check(tower, &log) {
                tower.install_log_table(log)?;
                return Ok(path);
            }
        }
    }
    fs::create_dir_all(dir).map_err(io)?;
    write_table(&path, tower.log_table()).map_err(io)?;
    Ok(path)
}

fn spot_check(tower: &FieldTower, log: &[u32]) -> bool {
    if log[0] != u32::MAX {
        return false;
    }
    let n = tower.group_order();
    [0u64, 1, 2, n / 3, n / 2, n - 1].iter().all(|&k| {
        let x = tower.exp(k);
        log[tower.code(x) as usize] as u64 == k
    })
}

fn write_table(path: &Path, log: &[u32]) -> std::io::Result<()> {
    let mut w = BufWriter::new(fs::File::create(path)?);
    for &v in log {
        w.write_all(&v.to_le_bytes())?;
    }
    w.flush()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::{build_tower, SexticElem, DEFAULT_SIZE_LIMIT};

    #[test]
    fn cache_roundtrip() {
        let dir = std::env::temp_dir().join(format!("cyclarc-cache-{}", std::process::id()));
        let a = build_tower(3, 1, DEFAULT_SIZE_LIMIT).unwrap();
        let path = load_or_build_log_table(&a, &dir).unwrap();
        assert_eq!(fs::metadata(&path).unwrap().len(), 4 * 729);
        let b = build_tower(3, 1, DEFAULT_SIZE_LIMIT).unwrap();
        load_or_build_log_table(&b, &dir).unwrap();
        assert!(b.log_table_built());
        assert_eq!(a.log_table(), b.log_table());
        let x = b.exp(500);
        assert_eq!(b.dlog(x).unwrap(), 500);
        assert_ne!(x, SexticElem::ZERO);
        fs::remove_dir_all(&dir).ok();
    }
}
