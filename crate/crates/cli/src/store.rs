//! The on-disk memo cache shared by CLI invocations.

use std::path::{Path, PathBuf};

use anyhow::Context;

use psiehrhart::cache::{self, CacheLock, CacheTable};
use psiehrhart::{IntersectionEngine, LPolyEngine};

use crate::GlobalOpts;

pub struct Store {
    path: Option<PathBuf>,
    pub psi: IntersectionEngine,
    pub lpoly: LPolyEngine,
    loaded: usize,
}

fn default_path() -> Option<PathBuf> {
    let base = match std::env::var_os("XDG_CACHE_HOME").filter(|v| !v.is_empty()) {
        Some(dir) => PathBuf::from(dir),
        None => PathBuf::from(std::env::var_os("HOME").filter(|v| !v.is_empty())?).join(".cache"),
    };
    Some(base.join("psiehrhart").join("memo.txt"))
}

fn read(path: &Path) -> anyhow::Result<CacheTable> {
    if !path.exists() {
        return Ok(CacheTable::default());
    }
    cache::load(path).with_context(|| {
        format!(
            "cannot use cache {} (delete it or pass --no-cache)",
            path.display()
        )
    })
}

impl Store {
    pub fn open(opts: &GlobalOpts) -> anyhow::Result<Self> {
        let path = if opts.no_cache {
            None
        } else {
            opts.cache.clone().or_else(default_path)
        };
        let store = Store {
            path,
            psi: IntersectionEngine::new(),
            lpoly: LPolyEngine::new(),
            loaded: 0,
        };
        let Some(path) = &store.path else {
            return Ok(store);
        };
        let table = read(path)?;
        table.seed(&store.psi, &store.lpoly);
        Ok(Store {
            loaded: table.len(),
            ..store
        })
    }

    /// Writes back new memo entries, merged with whatever another process
    /// saved in the meantime. Holds the advisory lock for the whole
    /// read-merge-write.
    pub fn persist(&self) -> anyhow::Result<()> {
        let Some(path) = &self.path else {
            return Ok(());
        };
        let ours = CacheTable::capture(&self.psi, &self.lpoly);
        if ours.len() == self.loaded {
            return Ok(());
        }
        let _lock = CacheLock::wait(path)?;
        let mut merged = read(path)?;
        merged.psi.extend(ours.psi);
        merged.lpoly.extend(ours.lpoly);
        cache::save(&merged, path)?;
        Ok(())
    }
}
