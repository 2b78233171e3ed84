//! On-disk cache of per-degree elimination rows.
//!
//! One file per (type, rank, algebra kind, degree). The file name is the
//! lowercase hex SHA-256 digest of those fields; the content is a versioned
//! header line followed by the echelon rows, one per line, as
//! `monomial-index:numerator/denominator` pairs with monomials indexed by
//! the canonical degree-lex order. Writes go through a temp file and an
//! atomic rename so concurrent invocations sharing a directory cannot
//! corrupt entries.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::linalg::{fmt_rational, parse_rational, SparseVec};

const FORMAT_TAG: &str = "weylform-rows";
const FORMAT_VERSION: &str = "v1";

#[derive(Debug, Error)]
pub enum CacheError {
    #[error("cache io error at {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("corrupt cache entry: {reason}")]
    Corrupt { reason: String },
}

fn io_err(path: &Path, source: std::io::Error) -> CacheError {
    CacheError::Io {
        path: path.display().to_string(),
        source,
    }
}

/// Parsed header of a cache file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CacheHeader {
    pub system: String,
    pub rank: usize,
    pub kind: String,
    pub degree: usize,
    pub gens: usize,
    pub cols: usize,
    pub rows: usize,
    pub qdim: usize,
}

#[derive(Debug, Clone)]
pub struct CacheEntry {
    pub header: CacheHeader,
    pub rows: Vec<SparseVec>,
}

/// Summary line for `cache list`.
#[derive(Debug, Clone)]
pub struct CacheFileInfo {
    pub file: String,
    pub bytes: u64,
    pub header: Option<CacheHeader>,
}

/// Cache handle bound to one (type, rank) pair and a directory.
#[derive(Debug, Clone)]
pub struct DegreeCache {
    dir: PathBuf,
    system: String,
    rank: usize,
}

impl DegreeCache {
    pub fn new(dir: impl Into<PathBuf>, system: &str, rank: usize) -> Self {
        DegreeCache {
            dir: dir.into(),
            system: system.to_string(),
            rank,
        }
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    fn key(&self, kind: &str, degree: usize) -> String {
        format!(
            "type={} rank={} kind={} degree={}",
            self.system, self.rank, kind, degree
        )
    }

    fn file_path(&self, kind: &str, degree: usize) -> PathBuf {
        let digest = Sha256::digest(self.key(kind, degree).as_bytes());
        let hex: String = digest.iter().map(|b| format!("{:02x}", b)).collect();
        self.dir.join(hex)
    }

    /// Load the rows for one degree if present.
    pub fn load_rows(&self, kind: &str, degree: usize) -> Result<Option<CacheEntry>, CacheError> {
        let path = self.file_path(kind, degree);
        let text = match fs::read_to_string(&path) {
            Ok(t) => t,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(None),
            Err(e) => return Err(io_err(&path, e)),
        };
        let mut lines = text.lines();
        let header_line = lines.next().ok_or_else(|| CacheError::Corrupt {
            reason: format!("{}: empty file", path.display()),
        })?;
        let header = parse_header(header_line).ok_or_else(|| CacheError::Corrupt {
            reason: format!("{}: bad header `{}`", path.display(), header_line),
        })?;
        if header.system != self.system
            || header.rank != self.rank
            || header.kind != kind
            || header.degree != degree
        {
            return Err(CacheError::Corrupt {
                reason: format!("{}: header does not match its key", path.display()),
            });
        }
        let mut rows = Vec::with_capacity(header.rows);
        for line in lines {
            if line.is_empty() {
                continue;
            }
            let mut row: SparseVec = Vec::new();
            for pair in line.split(' ') {
                let (idx, val) = pair.split_once(':').ok_or_else(|| CacheError::Corrupt {
                    reason: format!("{}: bad pair `{}`", path.display(), pair),
                })?;
                let idx: usize = idx.parse().map_err(|_| CacheError::Corrupt {
                    reason: format!("{}: bad index `{}`", path.display(), idx),
                })?;
                if idx >= header.cols {
                    return Err(CacheError::Corrupt {
                        reason: format!("{}: index {} out of range", path.display(), idx),
                    });
                }
                let val = parse_rational(val).ok_or_else(|| CacheError::Corrupt {
                    reason: format!("{}: bad rational `{}`", path.display(), val),
                })?;
                row.push((idx, val));
            }
            rows.push(row);
        }
        if rows.len() != header.rows {
            return Err(CacheError::Corrupt {
                reason: format!(
                    "{}: expected {} rows, found {}",
                    path.display(),
                    header.rows,
                    rows.len()
                ),
            });
        }
        Ok(Some(CacheEntry { header, rows }))
    }

    /// Write the rows for one degree (atomic: temp file + rename).
    pub fn store_rows(
        &self,
        kind: &str,
        degree: usize,
        gens: usize,
        cols: usize,
        qdim: usize,
        rows: &[SparseVec],
    ) -> Result<(), CacheError> {
        fs::create_dir_all(&self.dir).map_err(|e| io_err(&self.dir, e))?;
        let path = self.file_path(kind, degree);
        let tmp = path.with_extension("tmp");
        let mut out = String::new();
        out.push_str(&format!(
            "{} {} type={} rank={} kind={} degree={} gens={} cols={} rows={} qdim={}\n",
            FORMAT_TAG,
            FORMAT_VERSION,
            self.system,
            self.rank,
            kind,
            degree,
            gens,
            cols,
            rows.len(),
            qdim
        ));
        for row in rows {
            let mut first = true;
            for (idx, val) in row {
                if !first {
                    out.push(' ');
                }
                first = false;
                out.push_str(&format!("{}:{}", idx, fmt_rational(val)));
            }
            out.push('\n');
        }
        let mut f = fs::File::create(&tmp).map_err(|e| io_err(&tmp, e))?;
        f.write_all(out.as_bytes()).map_err(|e| io_err(&tmp, e))?;
        f.sync_all().map_err(|e| io_err(&tmp, e))?;
        fs::rename(&tmp, &path).map_err(|e| io_err(&path, e))?;
        Ok(())
    }
}

fn parse_header(line: &str) -> Option<CacheHeader> {
    let mut parts = line.split(' ');
    if parts.next() != Some(FORMAT_TAG) || parts.next() != Some(FORMAT_VERSION) {
        return None;
    }
    let mut system = None;
    let mut rank = None;
    let mut kind = None;
    let mut degree = None;
    let mut gens = None;
    let mut cols = None;
    let mut rows = None;
    let mut qdim = None;
    for part in parts {
        let (k, v) = part.split_once('=')?;
        match k {
            "type" => system = Some(v.to_string()),
            "rank" => rank = v.parse().ok(),
            "kind" => kind = Some(v.to_string()),
            "degree" => degree = v.parse().ok(),
            "gens" => gens = v.parse().ok(),
            "cols" => cols = v.parse().ok(),
            "rows" => rows = v.parse().ok(),
            "qdim" => qdim = v.parse().ok(),
            _ => return None,
        }
    }
    Some(CacheHeader {
        system: system?,
        rank: rank?,
        kind: kind?,
        degree: degree?,
        gens: gens?,
        cols: cols?,
        rows: rows?,
        qdim: qdim?,
    })
}

/// List every cache file in a directory with its parsed header.
pub fn list_dir(dir: &Path) -> Result<Vec<CacheFileInfo>, CacheError> {
    let mut out = Vec::new();
    let entries = match fs::read_dir(dir) {
        Ok(e) => e,
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(out),
        Err(e) => return Err(io_err(dir, e)),
    };
    for entry in entries {
        let entry = entry.map_err(|e| io_err(dir, e))?;
        let path = entry.path();
        if !path.is_file() {
            continue;
        }
        let meta = entry.metadata().map_err(|e| io_err(&path, e))?;
        let header = fs::read_to_string(&path)
            .ok()
            .and_then(|t| t.lines().next().and_then(parse_header));
        out.push(CacheFileInfo {
            file: entry.file_name().to_string_lossy().into_owned(),
            bytes: meta.len(),
            header,
        });
    }
    out.sort_by(|a, b| a.file.cmp(&b.file));
    Ok(out)
}

/// Remove every cache file in a directory; returns how many were deleted.
pub fn clear_dir(dir: &Path) -> Result<usize, CacheError> {
    let mut n = 0;
    for info in list_dir(dir)? {
        let path = dir.join(&info.file);
        fs::remove_file(&path).map_err(|e| io_err(&path, e))?;
        n += 1;
    }
    Ok(n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{rat, ratio};

    #[test]
    fn roundtrip_rows() {
        let dir = std::env::temp_dir().join(format!("weylform-cache-test-{}", std::process::id()));
        let _ = fs::remove_dir_all(&dir);
        let cache = DegreeCache::new(&dir, "B", 2);
        let rows: Vec<SparseVec> = vec![
            vec![(0, rat(1)), (3, ratio(-1, 2))],
            vec![(1, rat(1)), (2, rat(4))],
        ];
        cache.store_rows("quad", 2, 4, 16, 8, &rows).unwrap();
        let entry = cache.load_rows("quad", 2).unwrap().unwrap();
        assert_eq!(entry.rows, rows);
        assert_eq!(entry.header.qdim, 8);
        assert!(cache.load_rows("quad", 3).unwrap().is_none());
        assert_eq!(list_dir(&dir).unwrap().len(), 1);
        assert_eq!(clear_dir(&dir).unwrap(), 1);
        assert!(list_dir(&dir).unwrap().is_empty());
        let _ = fs::remove_dir_all(&dir);
    }
}
