//! Gram and Weingarten matrices of pairing families, with a persistent cache.
//!
//! For a family at `k` points and dimension `N`, the Gram matrix over the
//! canonical pairing basis has entries `N^{|π∨σ|}` (number of blocks of the
//! join); the Weingarten matrix is its exact inverse. Both are computed over
//! arbitrary-precision rationals. The same matrices serve the twisted and
//! untwisted integration formulas, so the cache key carries no twist flag.
//!
//! The Gram matrix is not always invertible — at small `N` the fixed vectors
//! `ξ_π` become linearly dependent (for example the classical family at
//! `k = 4, N = 1` has rank 1 of 3). Singularity is detected exactly and
//! reported as an error carrying the rank; no pseudo-inverse is ever
//! substituted here. Callers that can work in the image of the Gram matrix
//! (see the moments module) solve the linear system directly instead.
//!
//! Cache layout: one JSON file per key at `<dir>/<family>/k<k>_N<N>.json`,
//! rationals as decimal strings (`{"num": "...", "den": "..."}`), the basis
//! as partition text. Writes go through a temp file and an atomic rename, so
//! concurrent readers never observe a torn file.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::{Arc, Mutex};

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::par;
use crate::partitions::{enumerate_pairings, PairingFamily, Partition};
use crate::ratmat::{PivotStrategy, RationalMatrix};

/// Default bound on `k` (the classical family already has 945 pairings at
/// `k = 10`; inverting much larger Gram matrices exactly needs a deliberate
/// decision, not an accident).
pub const DEFAULT_K_BOUND: usize = 10;

/// Everything known about one (family, k, N) cell: the basis, the Gram
/// matrix, its exact rank, and the Weingarten matrix when it exists.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GramData {
    pub family: PairingFamily,
    pub k: usize,
    pub n: u32,
    pub basis: Vec<Partition>,
    pub gram: RationalMatrix,
    pub rank: usize,
    /// `None` exactly when the Gram matrix is singular.
    pub weingarten: Option<RationalMatrix>,
}

impl GramData {
    /// The Weingarten matrix, or the singularity error with exact rank.
    pub fn weingarten(&self) -> Result<&RationalMatrix> {
        self.weingarten.as_ref().ok_or(Error::GramSingular {
            family: self.family,
            k: self.k,
            n: self.n,
            rank: self.rank,
            order: self.basis.len(),
        })
    }
}

fn validate(k: usize, n: u32, k_bound: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::Invalid("dimension N must be at least 1".into()));
    }
    if k % 2 == 1 {
        return Err(Error::Invalid(format!(
            "Gram matrices are defined for even k, got {k}"
        )));
    }
    if k > k_bound {
        return Err(Error::KBound { k, bound: k_bound });
    }
    Ok(())
}

/// Computes one cell from scratch (no cache involved).
pub fn compute_entry(family: PairingFamily, k: usize, n: u32) -> Result<GramData> {
    validate(k, n, usize::MAX)?;
    let basis = enumerate_pairings(k, family);
    let order = basis.len();
    let join_blocks: Vec<Vec<u32>> = par::map_items(&basis, |p| {
        basis
            .iter()
            .map(|q| p.join(q).expect("same shape").1 as u32)
            .collect()
    });
    let gram = RationalMatrix::from_fn(order, order, |r, c| {
        BigRational::from_integer(BigInt::from(n).pow(join_blocks[r][c]))
    });
    let weingarten = gram.inverse(PivotStrategy::MaxMagnitude)?;
    let rank = match &weingarten {
        Some(_) => order,
        None => gram.rank(),
    };
    Ok(GramData {
        family,
        k,
        n,
        basis,
        gram,
        rank,
        weingarten,
    })
}

/// How many cache lookups were served from memory, loaded from disk, or
/// computed from scratch. Counters depend only on the request sequence and
/// the initial cache state, so they are as reproducible as the results.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Default)]
pub struct CacheCounters {
    pub memory_hits: u64,
    pub disk_hits: u64,
    pub computed: u64,
}

/// Process-wide cache: an in-memory map backed by an optional directory of
/// JSON files. Matrix computation is pure, so concurrent computes of the
/// same key are wasteful but harmless; the atomic rename on write keeps
/// concurrent readers safe.
pub struct Cache {
    dir: Option<PathBuf>,
    k_bound: usize,
    mem: Mutex<BTreeMap<(PairingFamily, usize, u32), Arc<GramData>>>,
    memory_hits: AtomicU64,
    disk_hits: AtomicU64,
    computed: AtomicU64,
}

impl Cache {
    /// Cache using the given directory, or memory-only when `None`.
    pub fn new(dir: Option<PathBuf>) -> Cache {
        Cache {
            dir,
            k_bound: DEFAULT_K_BOUND,
            mem: Mutex::new(BTreeMap::new()),
            memory_hits: AtomicU64::new(0),
            disk_hits: AtomicU64::new(0),
            computed: AtomicU64::new(0),
        }
    }

    /// Memory-only cache (nothing touches the filesystem).
    pub fn in_memory() -> Cache {
        Cache::new(None)
    }

    /// Raises (or lowers) the bound on `k`.
    pub fn with_k_bound(mut self, k_bound: usize) -> Cache {
        self.k_bound = k_bound;
        self
    }

    pub fn directory(&self) -> Option<&Path> {
        self.dir.as_deref()
    }

    /// Lookup statistics since this cache was created.
    pub fn counters(&self) -> CacheCounters {
        CacheCounters {
            memory_hits: self.memory_hits.load(Ordering::Relaxed),
            disk_hits: self.disk_hits.load(Ordering::Relaxed),
            computed: self.computed.load(Ordering::Relaxed),
        }
    }

    fn path_for(&self, family: PairingFamily, k: usize, n: u32) -> Option<PathBuf> {
        self.dir
            .as_ref()
            .map(|d| d.join(family.name()).join(format!("k{k}_N{n}.json")))
    }

    /// The cell for (family, k, N): from memory, else from disk, else
    /// computed (and then persisted). A corrupt cache file is reported via
    /// `log::warn!`, recomputed, and overwritten.
    pub fn entry(&self, family: PairingFamily, k: usize, n: u32) -> Result<Arc<GramData>> {
        validate(k, n, self.k_bound)?;
        let key = (family, k, n);
        if let Some(hit) = self.mem.lock().expect("cache lock").get(&key) {
            self.memory_hits.fetch_add(1, Ordering::Relaxed);
            return Ok(Arc::clone(hit));
        }
        if let Some(path) = self.path_for(family, k, n) {
            if path.exists() {
                match load_entry(&path, family, k, n) {
                    Ok(data) => {
                        let data = Arc::new(data);
                        self.mem
                            .lock()
                            .expect("cache lock")
                            .insert(key, Arc::clone(&data));
                        self.disk_hits.fetch_add(1, Ordering::Relaxed);
                        return Ok(data);
                    }
                    Err(err) => {
                        log::warn!(
                            "cache file {} is unreadable ({err}); recomputing",
                            path.display()
                        );
                    }
                }
            }
        }
        let data = Arc::new(compute_entry(family, k, n)?);
        self.computed.fetch_add(1, Ordering::Relaxed);
        if let Some(path) = self.path_for(family, k, n) {
            if let Err(err) = store_entry(&path, &data) {
                log::warn!("could not persist cache file {}: {err}", path.display());
            }
        }
        self.mem
            .lock()
            .expect("cache lock")
            .insert(key, Arc::clone(&data));
        Ok(data)
    }

    /// The Gram matrix for (family, k, N).
    pub fn gram_matrix(&self, family: PairingFamily, k: usize, n: u32) -> Result<RationalMatrix> {
        Ok(self.entry(family, k, n)?.gram.clone())
    }

    /// The Weingarten matrix for (family, k, N); errors when singular.
    pub fn weingarten_matrix(
        &self,
        family: PairingFamily,
        k: usize,
        n: u32,
    ) -> Result<RationalMatrix> {
        Ok(self.entry(family, k, n)?.weingarten()?.clone())
    }
}

/// Resolves the cache directory: explicit choice first, then the
/// `WG_CACHE_DIR` environment variable, then a per-user data directory
/// (`$XDG_DATA_HOME/wgcalc` or `$HOME/.local/share/wgcalc`), falling back to
/// `./.wgcalc-cache`.
pub fn resolve_cache_dir(explicit: Option<PathBuf>) -> PathBuf {
    if let Some(dir) = explicit {
        return dir;
    }
    if let Some(dir) = std::env::var_os("WG_CACHE_DIR") {
        return PathBuf::from(dir);
    }
    if let Some(xdg) = std::env::var_os("XDG_DATA_HOME") {
        return PathBuf::from(xdg).join("wgcalc");
    }
    if let Some(home) = std::env::var_os("HOME") {
        return PathBuf::from(home)
            .join(".local")
            .join("share")
            .join("wgcalc");
    }
    PathBuf::from(".wgcalc-cache")
}

// ----- disk format ----------------------------------------------------------

#[derive(Serialize, Deserialize)]
struct RationalJson {
    num: String,
    den: String,
}

#[derive(Serialize, Deserialize)]
struct CacheFileJson {
    family: String,
    k: usize,
    n: u32,
    basis: Vec<String>,
    rank: usize,
    gram: Vec<Vec<RationalJson>>,
    weingarten: Option<Vec<Vec<RationalJson>>>,
}

fn rational_to_json(v: &BigRational) -> RationalJson {
    RationalJson {
        num: v.numer().to_string(),
        den: v.denom().to_string(),
    }
}

fn rational_from_json(v: &RationalJson) -> Result<BigRational> {
    let num = BigInt::from_str(&v.num)
        .map_err(|_| Error::CacheFormat(format!("bad numerator `{}`", v.num)))?;
    let den = BigInt::from_str(&v.den)
        .map_err(|_| Error::CacheFormat(format!("bad denominator `{}`", v.den)))?;
    if den == BigInt::from(0) {
        return Err(Error::CacheFormat("zero denominator".into()));
    }
    Ok(BigRational::new(num, den))
}

fn matrix_to_json(m: &RationalMatrix) -> Vec<Vec<RationalJson>> {
    (0..m.rows())
        .map(|r| (0..m.cols()).map(|c| rational_to_json(m.get(r, c))).collect())
        .collect()
}

fn matrix_from_json(rows: &[Vec<RationalJson>], order: usize) -> Result<RationalMatrix> {
    if rows.len() != order || rows.iter().any(|r| r.len() != order) {
        return Err(Error::CacheFormat(format!(
            "matrix is not {order}x{order}"
        )));
    }
    let mut m = RationalMatrix::zero(order, order);
    for (r, row) in rows.iter().enumerate() {
        for (c, v) in row.iter().enumerate() {
            m.set(r, c, rational_from_json(v)?);
        }
    }
    Ok(m)
}

fn load_entry(path: &Path, family: PairingFamily, k: usize, n: u32) -> Result<GramData> {
    let text = std::fs::read_to_string(path)?;
    let json: CacheFileJson =
        serde_json::from_str(&text).map_err(|e| Error::CacheFormat(e.to_string()))?;
    if json.family != family.name() || json.k != k || json.n != n {
        return Err(Error::CacheFormat(format!(
            "file is for ({}, k={}, N={}), expected ({}, k={k}, N={n})",
            json.family, json.k, json.n, family
        )));
    }
    let basis: Vec<Partition> = json
        .basis
        .iter()
        .map(|s| {
            s.parse::<Partition>()
                .map_err(|e| Error::CacheFormat(format!("bad basis entry `{s}`: {e}")))
        })
        .collect::<Result<_>>()?;
    if basis != enumerate_pairings(k, family) {
        return Err(Error::CacheFormat(
            "basis does not match the canonical enumeration".into(),
        ));
    }
    let order = basis.len();
    let gram = matrix_from_json(&json.gram, order)?;
    let weingarten = match &json.weingarten {
        Some(rows) => Some(matrix_from_json(rows, order)?),
        None => None,
    };
    if json.rank > order || (weingarten.is_some() && json.rank != order) {
        return Err(Error::CacheFormat(format!("implausible rank {}", json.rank)));
    }
    Ok(GramData {
        family,
        k,
        n,
        basis,
        gram,
        rank: json.rank,
        weingarten,
    })
}

fn store_entry(path: &Path, data: &GramData) -> Result<()> {
    let json = CacheFileJson {
        family: data.family.name().to_string(),
        k: data.k,
        n: data.n,
        basis: data.basis.iter().map(|p| p.to_string()).collect(),
        rank: data.rank,
        gram: matrix_to_json(&data.gram),
        weingarten: data.weingarten.as_ref().map(matrix_to_json),
    };
    let parent = path
        .parent()
        .ok_or_else(|| Error::Invalid(format!("cache path {} has no parent", path.display())))?;
    std::fs::create_dir_all(parent)?;
    let tmp = parent.join(format!(
        ".{}.tmp-{}",
        path.file_name().and_then(|f| f.to_str()).unwrap_or("entry"),
        std::process::id()
    ));
    let text = serde_json::to_string_pretty(&json)
        .map_err(|e| Error::CacheFormat(e.to_string()))?;
    std::fs::write(&tmp, text)?;
    std::fs::rename(&tmp, path)?;
    Ok(())
}
