//! On-disk catalog cache keyed by `(genus, vertices, sorted q)`.
//!
//! Files are written to a temporary file in the cache directory and renamed
//! into place, so readers never see a partial catalog. Every load re-decodes
//! and re-validates; a stale or corrupt file counts as a miss.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use thiserror::Error;

use super::schema::{catalog_from_json, catalog_to_json, SchemaError, CONVENTION_VERSION};
use crate::pairing::enumerate::{
    check_feasible, enumerate_triangulations, relabel_catalog, sorting_permutation, Catalog, EnumError, EnumOptions,
};

pub const CACHE_ENV: &str = "DT_REGGE_CACHE_DIR";

#[derive(Debug, Error)]
pub enum CacheError {
    #[error("cache I/O error at {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error(transparent)]
    Enumeration(#[from] EnumError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CacheStatus {
    Hit,
    Miss,
    /// A file existed but failed to decode or validate and was replaced.
    Rebuilt,
}

#[derive(Debug, Clone)]
pub struct CacheListing {
    pub path: PathBuf,
    pub status: Result<(u32, usize, Vec<u32>, usize), String>,
}

#[derive(Debug, Clone)]
pub struct CatalogCache {
    dir: PathBuf,
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> CacheError + '_ {
    move |source| CacheError::Io {
        path: path.to_path_buf(),
        source,
    }
}

impl CatalogCache {
    pub fn new(dir: impl Into<PathBuf>) -> Self {
        CatalogCache { dir: dir.into() }
    }

    /// Uses `$DT_REGGE_CACHE_DIR` when set.
    pub fn from_env() -> Option<Self> {
        std::env::var_os(CACHE_ENV).filter(|v| !v.is_empty()).map(CatalogCache::new)
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    /// File name carries the key and a digest of [`CONVENTION_VERSION`].
    pub fn path_for(&self, genus: u32, vertices: usize, sorted_q: &[u32]) -> PathBuf {
        let q: Vec<String> = sorted_q.iter().map(u32::to_string).collect();
        self.dir.join(format!("g{genus}_n{vertices}_q{}.c{}.json", q.join("-"), convention_stamp()))
    }

    /// Reads a sorted-q catalog. Missing, stale or invalid files give `Ok(None)`.
    pub fn load(&self, genus: u32, vertices: usize, sorted_q: &[u32]) -> Result<Option<Catalog>, CacheError> {
        let path = self.path_for(genus, vertices, sorted_q);
        let text = match fs::read_to_string(&path) {
            Ok(t) => t,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(None),
            Err(e) => return Err(io_err(&path)(e)),
        };
        Ok(decode_keyed(&text, genus, vertices, sorted_q).ok())
    }

    pub fn store(&self, catalog: &Catalog) -> Result<PathBuf, CacheError> {
        let mut sorted = catalog.q.clone();
        sorted.sort_unstable();
        let path = self.path_for(catalog.genus, catalog.vertices, &sorted);
        fs::create_dir_all(&self.dir).map_err(io_err(&self.dir))?;
        let mut tmp = tempfile::NamedTempFile::new_in(&self.dir).map_err(io_err(&self.dir))?;
        tmp.write_all(catalog_to_json(catalog).as_bytes()).map_err(io_err(tmp.path()))?;
        tmp.as_file().sync_all().map_err(io_err(&path))?;
        tmp.persist(&path).map_err(|e| io_err(&path)(e.error))?;
        Ok(path)
    }

    /// Cached catalog for `q` in the caller's labelling, enumerating on a miss.
    pub fn get_or_enumerate(
        &self,
        genus: u32,
        vertices: usize,
        q: &[u32],
        opts: EnumOptions,
    ) -> Result<(Catalog, CacheStatus), CacheError> {
        check_feasible(genus, vertices, q)?;
        let sorted: Vec<u32> = sorting_permutation(q).into_iter().map(|i| q[i]).collect();
        let existed = self.path_for(genus, vertices, &sorted).exists();
        if let Some(cat) = self.load(genus, vertices, &sorted)? {
            return Ok((relabel_catalog(&cat, q), CacheStatus::Hit));
        }
        let cat = enumerate_triangulations(genus, vertices, &sorted, opts)?;
        self.store(&cat)?;
        let status = if existed { CacheStatus::Rebuilt } else { CacheStatus::Miss };
        Ok((relabel_catalog(&cat, q), status))
    }

    /// Every `*.json` file in the cache directory, decoded and validated.
    pub fn list(&self) -> Result<Vec<CacheListing>, CacheError> {
        let rd = match fs::read_dir(&self.dir) {
            Ok(rd) => rd,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(Vec::new()),
            Err(e) => return Err(io_err(&self.dir)(e)),
        };
        let mut out = Vec::new();
        for entry in rd {
            let path = entry.map_err(io_err(&self.dir))?.path();
            if path.extension().and_then(|e| e.to_str()) != Some("json") {
                continue;
            }
            let status = fs::read_to_string(&path)
                .map_err(|e| e.to_string())
                .and_then(|t| catalog_from_json(&t).map_err(|e| e.to_string()))
                .and_then(|c| {
                    let mut sorted = c.q.clone();
                    sorted.sort_unstable();
                    if self.path_for(c.genus, c.vertices, &sorted) != path {
                        Err("file name does not match catalog key".to_string())
                    } else {
                        Ok((c.genus, c.vertices, c.q.clone(), c.entries.len()))
                    }
                });
            out.push(CacheListing { path, status });
        }
        out.sort_by(|a, b| a.path.cmp(&b.path));
        Ok(out)
    }
}

/// 32-bit FNV-1a of the convention string, as hex.
pub fn convention_stamp() -> String {
    let h = CONVENTION_VERSION
        .bytes()
        .fold(0x811c_9dc5u32, |h, b| (h ^ b as u32).wrapping_mul(0x0100_0193));
    format!("{h:08x}")
}

fn decode_keyed(text: &str, genus: u32, vertices: usize, sorted_q: &[u32]) -> Result<Catalog, SchemaError> {
    let cat = catalog_from_json(text)?;
    if cat.genus != genus || cat.vertices != vertices || cat.q != sorted_q {
        return Err(SchemaError::Invalid("catalog key mismatch".into()));
    }
    Ok(cat)
}
