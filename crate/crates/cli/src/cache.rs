//! On-disk cache of lattices and derived results.
//!
//! Entries live in `DIR/<bucket>/entry-<k>.json`, where the bucket name comes from the group
//! signature. A bucket may hold several entries; a hit requires the stored element table and
//! generator list to equal the group's exactly.

use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use latspec_core::graph::GraphDump;
use latspec_core::lattice::LatticeDump;
use latspec_core::{DegreeReport, FiniteGroup};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

pub const TOOL_VERSION: &str =
    concat!(env!("CARGO_PKG_NAME"), "-", env!("CARGO_PKG_VERSION"), "/1");

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Signature {
    pub order: usize,
    pub histogram: Vec<(u64, usize)>,
    /// SHA-256 of the canonical element table.
    pub table_hash: String,
}

impl Signature {
    pub fn of(g: &FiniteGroup) -> Self {
        let mut h = Sha256::new();
        h.update((g.degree() as u64).to_le_bytes());
        for e in g.elements() {
            for &x in e.images() {
                h.update(x.to_le_bytes());
            }
        }
        Signature {
            order: g.order(),
            histogram: g.order_histogram(),
            table_hash: hex::encode(h.finalize()),
        }
    }

    pub fn bucket(&self) -> String {
        format!("{}-{}", self.order, &self.table_hash[..16])
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Spectra {
    pub adjacency: Vec<String>,
    pub laplacian: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CacheEntry {
    pub version: String,
    pub signature: Signature,
    /// Carries the full element table, compared on every lookup.
    pub lattice: LatticeDump,
    pub graph: GraphDump,
    pub spectra: Spectra,
    pub report: Option<DegreeReport>,
}

impl CacheEntry {
    fn matches(&self, g: &FiniteGroup) -> bool {
        self.lattice.degree == g.degree()
            && self.lattice.generators == g.generators()
            && self.lattice.elements == g.elements()
    }
}

#[derive(Clone, Debug)]
pub struct Cache {
    dir: PathBuf,
    version: String,
}

impl Cache {
    pub fn new(dir: impl Into<PathBuf>) -> Self {
        Cache::with_version(dir, TOOL_VERSION)
    }

    pub fn with_version(dir: impl Into<PathBuf>, version: &str) -> Self {
        Cache {
            dir: dir.into(),
            version: version.to_string(),
        }
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    fn entries(&self, bucket: &str) -> Vec<PathBuf> {
        let mut out: Vec<PathBuf> = fs::read_dir(self.dir.join(bucket))
            .map(|rd| {
                rd.filter_map(|e| e.ok().map(|e| e.path()))
                    .filter(|p| {
                        p.file_name()
                            .and_then(|n| n.to_str())
                            .is_some_and(|n| n.starts_with("entry-") && n.ends_with(".json"))
                    })
                    .collect()
            })
            .unwrap_or_default();
        out.sort();
        out
    }

    fn read(path: &Path) -> Option<CacheEntry> {
        let text = fs::read_to_string(path).ok()?;
        match serde_json::from_str(&text) {
            Ok(e) => Some(e),
            Err(e) => {
                log::warn!("ignoring corrupt cache entry {}: {e}", path.display());
                None
            }
        }
    }

    pub fn lookup(&self, g: &FiniteGroup) -> Option<CacheEntry> {
        self.lookup_in(&Signature::of(g).bucket(), g)
    }

    /// Looks in an explicit bucket.
    pub fn lookup_in(&self, bucket: &str, g: &FiniteGroup) -> Option<CacheEntry> {
        for path in self.entries(bucket) {
            let Some(entry) = Self::read(&path) else {
                continue;
            };
            if entry.version != self.version {
                log::info!(
                    "cache entry {} has version {}",
                    path.display(),
                    entry.version
                );
                continue;
            }
            if entry.matches(g) {
                log::debug!("cache hit {}", path.display());
                return Some(entry);
            }
        }
        None
    }

    pub fn store(&self, g: &FiniteGroup, entry: &CacheEntry) -> std::io::Result<PathBuf> {
        self.store_in(&Signature::of(g).bucket(), g, entry)
    }

    /// Writes `entry` into `bucket`, replacing an entry for the same element table or a corrupt
    /// one. The file appears atomically.
    pub fn store_in(
        &self,
        bucket: &str,
        g: &FiniteGroup,
        entry: &CacheEntry,
    ) -> std::io::Result<PathBuf> {
        let dir = self.dir.join(bucket);
        fs::create_dir_all(&dir)?;
        let existing = self.entries(bucket);
        let slot = existing
            .iter()
            .find(|p| Self::read(p).is_none_or(|e| e.matches(g)))
            .cloned();
        let path = slot.unwrap_or_else(|| {
            (0..)
                .map(|k| dir.join(format!("entry-{k}.json")))
                .find(|p| !existing.contains(p))
                .expect("unbounded range")
        });
        let mut body = serde_json::to_string_pretty(entry)?;
        body.push('\n');
        let tmp = dir.join(format!(".tmp-{}-{}", std::process::id(), unique()));
        {
            let mut f = fs::File::create(&tmp)?;
            f.write_all(body.as_bytes())?;
            f.sync_all()?;
        }
        fs::rename(&tmp, &path)?;
        Ok(path)
    }

    pub fn version(&self) -> &str {
        &self.version
    }
}

fn unique() -> u64 {
    use std::sync::atomic::{AtomicU64, Ordering};
    static NEXT: AtomicU64 = AtomicU64::new(0);
    NEXT.fetch_add(1, Ordering::Relaxed)
}

#[cfg(test)]
mod tests {
    use super::*;
    use latspec_core::{build_graph, enumerate_subgroups, generate_group, parse_generators};

    fn entry_for(g: &FiniteGroup, version: &str) -> CacheEntry {
        let l = enumerate_subgroups(g.clone()).unwrap();
        CacheEntry {
            version: version.into(),
            signature: Signature::of(g),
            lattice: l.to_dump(),
            graph: build_graph(&l).to_dump(),
            spectra: Spectra {
                adjacency: vec![],
                laplacian: vec![],
            },
            report: None,
        }
    }

    fn group(deg: usize, gens: &str) -> FiniteGroup {
        generate_group(deg, &parse_generators(deg, gens).unwrap()).unwrap()
    }

    #[test]
    fn round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let cache = Cache::new(dir.path());
        let g = group(4, "(1,2,3);(2,3,4)");
        let e = entry_for(&g, TOOL_VERSION);
        assert!(cache.lookup(&g).is_none());
        cache.store(&g, &e).unwrap();
        let back = cache.lookup(&g).unwrap();
        assert_eq!(
            serde_json::to_string(&back).unwrap(),
            serde_json::to_string(&e).unwrap()
        );
        // storing again overwrites in place
        cache.store(&g, &e).unwrap();
        assert_eq!(cache.entries(&Signature::of(&g).bucket()).len(), 1);
    }

    #[test]
    fn version_bump_misses() {
        let dir = tempfile::tempdir().unwrap();
        let g = group(3, "(1,2,3)");
        Cache::with_version(dir.path(), "old")
            .store(&g, &entry_for(&g, "old"))
            .unwrap();
        assert!(Cache::with_version(dir.path(), "old").lookup(&g).is_some());
        assert!(Cache::with_version(dir.path(), "new").lookup(&g).is_none());
    }

    #[test]
    fn shared_bucket_needs_full_table_match() {
        let dir = tempfile::tempdir().unwrap();
        let cache = Cache::new(dir.path());
        // same order and histogram, different element tables
        let a = group(4, "(1,2)(3,4);(1,3)(2,4)");
        let b = group(4, "(1,2);(3,4)");
        assert_eq!(Signature::of(&a).histogram, Signature::of(&b).histogram);
        cache
            .store_in("collide", &a, &entry_for(&a, TOOL_VERSION))
            .unwrap();
        assert!(cache.lookup_in("collide", &b).is_none());
        cache
            .store_in("collide", &b, &entry_for(&b, TOOL_VERSION))
            .unwrap();
        assert_eq!(cache.entries("collide").len(), 2);
        assert_eq!(
            cache.lookup_in("collide", &a).unwrap().lattice.elements,
            a.elements()
        );
        assert_eq!(
            cache.lookup_in("collide", &b).unwrap().lattice.elements,
            b.elements()
        );
    }

    #[test]
    fn same_table_other_generators_gets_own_entry() {
        let dir = tempfile::tempdir().unwrap();
        let cache = Cache::new(dir.path());
        let a = group(3, "(1,2);(1,2,3)");
        let b = group(3, "(1,2,3);(2,3)");
        assert_eq!(a.elements(), b.elements());
        assert_eq!(Signature::of(&a), Signature::of(&b));
        cache.store(&a, &entry_for(&a, TOOL_VERSION)).unwrap();
        assert!(cache.lookup(&b).is_none());
        cache.store(&b, &entry_for(&b, TOOL_VERSION)).unwrap();
        assert_eq!(cache.lookup(&b).unwrap().lattice.generators, b.generators());
        assert_eq!(cache.lookup(&a).unwrap().lattice.generators, a.generators());
    }

    #[test]
    fn corrupt_entry_is_ignored_then_replaced() {
        let dir = tempfile::tempdir().unwrap();
        let cache = Cache::new(dir.path());
        let g = group(3, "(1,2)");
        let bucket = dir.path().join(Signature::of(&g).bucket());
        fs::create_dir_all(&bucket).unwrap();
        fs::write(bucket.join("entry-0.json"), "{ not json").unwrap();
        assert!(cache.lookup(&g).is_none());
        let path = cache.store(&g, &entry_for(&g, TOOL_VERSION)).unwrap();
        assert_eq!(path, bucket.join("entry-0.json"));
        assert!(cache.lookup(&g).is_some());
    }
}
