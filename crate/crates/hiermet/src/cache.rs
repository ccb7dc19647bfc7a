//! Content-addressed context cache: one directory per key holding the
//! verbatim raw provider responses, the canonical context, and metadata.
//! Replay consumes these directly, and they double as human-inspectable
//! fixtures.
//!
//! Writes are atomic (write into a temp directory, then rename); reads
//! are safe concurrently with a writer.

use std::path::{Path, PathBuf};

use chrono::{DateTime, Utc};
use serde::{Deserialize, Serialize};

use hiermet_core::canonical::canonical_bytes;
use hiermet_core::model::ForecastContext;

use crate::error::PipelineError;
use crate::ingest::RawResponse;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CacheMeta {
    pub key: String,
    #[serde(with = "hiermet_core::model::ts_iso")]
    pub created_at: DateTime<Utc>,
    pub sources: Vec<String>,
    pub raw_files: Vec<String>,
}

#[derive(Debug, Clone)]
pub struct CacheEntry {
    pub key: String,
    pub context: ForecastContext,
    pub raw_responses: Vec<RawResponse>,
    pub meta: CacheMeta,
}

pub struct CacheStore {
    root: PathBuf,
}

impl CacheStore {
    pub fn new(root: impl Into<PathBuf>) -> Self {
        Self { root: root.into() }
    }

    pub fn root(&self) -> &Path {
        &self.root
    }

    fn key_dir(&self, key: &str) -> PathBuf {
        self.root.join(key)
    }

    /// Stores an entry. Idempotent: a key that already exists is left
    /// untouched (same key means same canonical content).
    pub fn put(
        &self,
        key: &str,
        context: &ForecastContext,
        raw_responses: &[RawResponse],
        sources: &[String],
        created_at: DateTime<Utc>,
    ) -> Result<(), PipelineError> {
        let target = self.key_dir(key);
        if target.exists() {
            return Ok(());
        }
        std::fs::create_dir_all(&self.root)?;

        let tmp = self.root.join(format!(
            ".tmp-{key}-{}-{}",
            std::process::id(),
            Utc::now().timestamp_nanos_opt().unwrap_or(0)
        ));
        std::fs::create_dir_all(tmp.join("raw"))?;

        let context_bytes = canonical_bytes(context)?;
        std::fs::write(tmp.join("context.json"), &context_bytes)?;

        let mut raw_files = Vec::new();
        for (name, body) in raw_responses {
            let safe: String = name
                .chars()
                .map(|c| if c.is_ascii_alphanumeric() || c == '.' || c == '_' { c } else { '_' })
                .collect();
            std::fs::write(tmp.join("raw").join(&safe), body)?;
            raw_files.push(safe);
        }

        let meta = CacheMeta {
            key: key.to_string(),
            created_at,
            sources: sources.to_vec(),
            raw_files,
        };
        std::fs::write(tmp.join("meta.json"), serde_json::to_vec_pretty(&meta)?)?;

        match std::fs::rename(&tmp, &target) {
            Ok(()) => Ok(()),
            Err(_) if target.exists() => {
                // lost the race to another writer of the same key
                let _ = std::fs::remove_dir_all(&tmp);
                Ok(())
            }
            Err(e) => {
                let _ = std::fs::remove_dir_all(&tmp);
                Err(e.into())
            }
        }
    }

    /// Fetches an entry; a miss is `Ok(None)`, not an error.
    pub fn get(&self, key: &str) -> Result<Option<CacheEntry>, PipelineError> {
        let dir = self.key_dir(key);
        if !dir.exists() {
            return Ok(None);
        }
        let context_bytes = std::fs::read(dir.join("context.json"))?;
        let context: ForecastContext = serde_json::from_slice(&context_bytes)?;
        let meta: CacheMeta = serde_json::from_slice(&std::fs::read(dir.join("meta.json"))?)?;
        let mut raw_responses = Vec::new();
        for name in &meta.raw_files {
            let body = std::fs::read(dir.join("raw").join(name))?;
            raw_responses.push((name.clone(), body));
        }
        Ok(Some(CacheEntry { key: key.to_string(), context, raw_responses, meta }))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use hiermet_core::context::RequestedMode;
    use hiermet_core::fixtures::cork;

    #[test]
    fn put_get_round_trips_canonical_bytes() {
        let dir = tempfile::tempdir().unwrap();
        let store = CacheStore::new(dir.path());
        let ctx = cork().context(RequestedMode::Auto);
        let key = "a".repeat(64);
        store
            .put(
                &key,
                &ctx,
                &[("openweather.json".into(), b"{\"raw\":1}".to_vec())],
                &["openweather:3.0".into()],
                ctx.issued_at_utc,
            )
            .unwrap();

        let entry = store.get(&key).unwrap().expect("hit");
        assert_eq!(
            canonical_bytes(&entry.context).unwrap(),
            canonical_bytes(&ctx).unwrap()
        );
        assert_eq!(entry.raw_responses.len(), 1);
        assert_eq!(entry.raw_responses[0].1, b"{\"raw\":1}");

        // idempotent second put
        store.put(&key, &ctx, &[], &[], ctx.issued_at_utc).unwrap();
        assert_eq!(store.get(&key).unwrap().unwrap().raw_responses.len(), 1);
    }

    #[test]
    fn miss_is_none() {
        let dir = tempfile::tempdir().unwrap();
        let store = CacheStore::new(dir.path());
        assert!(store.get(&"b".repeat(64)).unwrap().is_none());
    }
}
