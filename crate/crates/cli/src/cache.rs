//! Content-addressed store of command results.
//!
//! One JSON file per key under the cache directory. Writes go to a temp file
//! in the same directory and are renamed into place, so readers never see a
//! partial entry and concurrent writers of one key race harmlessly.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use serde_json::{json, Value};
use sha2::{Digest, Sha256};

pub struct Cache {
    dir: PathBuf,
}

/// `--cache-dir`, else `OMEGA_CACHE_DIR`, else the user cache directory.
pub fn resolve_dir(flag: Option<&Path>) -> PathBuf {
    resolve_with(flag, |name| std::env::var_os(name))
}

fn resolve_with(flag: Option<&Path>, var: impl Fn(&str) -> Option<OsString>) -> PathBuf {
    if let Some(dir) = flag {
        return dir.to_path_buf();
    }
    let set = |name| var(name).filter(|v| !v.is_empty());
    if let Some(dir) = set("OMEGA_CACHE_DIR") {
        return PathBuf::from(dir);
    }
    let base = set("XDG_CACHE_HOME")
        .map(PathBuf::from)
        .or_else(|| var("HOME").map(|h| PathBuf::from(h).join(".cache")))
        .unwrap_or_else(std::env::temp_dir);
    base.join("omega")
}

/// Hash of the canonical (sorted-key) JSON of the request.
pub fn key(request: &Value) -> String {
    let text = serde_json::to_string(request).expect("request serializes");
    hex::encode(Sha256::digest(text.as_bytes()))
}

impl Cache {
    pub fn new(dir: PathBuf) -> Self {
        Cache { dir }
    }

    fn path(&self, key: &str) -> PathBuf {
        self.dir.join(&key[..2]).join(format!("{key}.json"))
    }

    /// The stored value, if present and readable. Corrupt entries count as misses.
    pub fn get(&self, key: &str) -> Option<Value> {
        let text = fs::read_to_string(self.path(key)).ok()?;
        let mut entry: Value = serde_json::from_str(&text).ok()?;
        (entry.get("key")?.as_str()? == key).then(|| entry["value"].take())
    }

    pub fn put(&self, key: &str, value: &Value) -> std::io::Result<()> {
        let path = self.path(key);
        let dir = path.parent().expect("entry path has a parent");
        fs::create_dir_all(dir)?;
        let created_at = SystemTime::now().duration_since(UNIX_EPOCH).map_or(0, |d| d.as_secs());
        let entry = json!({"key": key, "created_at": created_at, "value": value});
        let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
        tmp.write_all(serde_json::to_string(&entry)?.as_bytes())?;
        tmp.as_file().sync_all()?;
        tmp.persist(&path).map_err(|e| e.error)?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn roundtrip_and_corruption() {
        let dir = tempfile::tempdir().unwrap();
        let cache = Cache::new(dir.path().to_path_buf());
        let k = key(&json!({"command": "euler", "d": 6}));
        assert!(cache.get(&k).is_none());
        cache.put(&k, &json!({"chi": 4})).unwrap();
        assert_eq!(cache.get(&k), Some(json!({"chi": 4})));
        fs::write(cache.path(&k), "{not json").unwrap();
        assert!(cache.get(&k).is_none());
    }

    #[test]
    fn key_ignores_insertion_order() {
        assert_eq!(key(&json!({"a": 1, "b": 2})), key(&json!({"b": 2, "a": 1})));
        assert_ne!(key(&json!({"a": 1})), key(&json!({"a": 2})));
    }

    #[test]
    fn directory_precedence() {
        let env = |pairs: &'static [(&'static str, &'static str)]| {
            move |name: &str| pairs.iter().find(|(k, _)| *k == name).map(|(_, v)| OsString::from(v))
        };
        let all: &[(&str, &str)] = &[("OMEGA_CACHE_DIR", "/a"), ("XDG_CACHE_HOME", "/x"), ("HOME", "/h")];
        assert_eq!(resolve_with(Some(Path::new("/f")), env(all)), PathBuf::from("/f"));
        assert_eq!(resolve_with(None, env(all)), PathBuf::from("/a"));
        assert_eq!(resolve_with(None, env(&[("OMEGA_CACHE_DIR", ""), ("XDG_CACHE_HOME", "/x")])), PathBuf::from("/x/omega"));
        assert_eq!(resolve_with(None, env(&[("HOME", "/h")])), PathBuf::from("/h/.cache/omega"));
    }
}
