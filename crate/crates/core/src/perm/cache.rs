//! On-disk cache for chains and class indexes, keyed by the generator file.

use std::fs;
use std::io::Read;
use std::path::{Path, PathBuf};

use serde::de::DeserializeOwned;
use serde::Serialize;
use sha2::{Digest, Sha256};

use super::PermError;

const MAGIC: &[u8; 8] = b"BOUCPERM";
const VERSION: u32 = 1;

/// SHA-256 of a file, as lowercase hex.
pub fn file_digest(path: &Path) -> Result<String, PermError> {
    let mut f = fs::File::open(path)?;
    let mut hasher = Sha256::new();
    let mut buf = [0u8; 1 << 16];
    loop {
        let n = f.read(&mut buf)?;
        if n == 0 {
            break;
        }
        hasher.update(&buf[..n]);
    }
    Ok(hex::encode(hasher.finalize()))
}

/// A directory of versioned bincode blobs. Entries live under a
/// subdirectory named by the generator digest, so editing the generator
/// file invalidates them.
#[derive(Clone, Debug)]
pub struct CacheDir {
    root: PathBuf,
}

impl CacheDir {
    pub fn new(root: impl Into<PathBuf>) -> Self {
        CacheDir { root: root.into() }
    }

    fn path(&self, digest: &str, name: &str) -> PathBuf {
        self.root.join(digest).join(format!("{name}.bin"))
    }

    /// Returns `None` on a miss. Corrupt or stale entries are deleted and
    /// reported as misses.
    pub fn load<T: DeserializeOwned>(&self, digest: &str, name: &str) -> Option<T> {
        let path = self.path(digest, name);
        let bytes = fs::read(&path).ok()?;
        match decode(&bytes) {
            Ok(v) => Some(v),
            Err(_) => {
                let _ = fs::remove_file(&path);
                None
            }
        }
    }

    pub fn store<T: Serialize>(&self, digest: &str, name: &str, value: &T) -> Result<(), PermError> {
        let path = self.path(digest, name);
        if let Some(dir) = path.parent() {
            fs::create_dir_all(dir)?;
        }
        let mut bytes = MAGIC.to_vec();
        bytes.extend_from_slice(&VERSION.to_le_bytes());
        bytes.extend(bincode::serialize(value).map_err(|e| PermError::Cache(e.to_string()))?);
        let tmp = path.with_extension("tmp");
        fs::write(&tmp, bytes)?;
        fs::rename(tmp, path)?;
        Ok(())
    }
}

fn decode<T: DeserializeOwned>(bytes: &[u8]) -> Result<T, PermError> {
    if bytes.len() < 12 || &bytes[..8] != MAGIC {
        return Err(PermError::Cache("bad magic".into()));
    }
    let version = u32::from_le_bytes(bytes[8..12].try_into().expect("four bytes"));
    if version != VERSION {
        return Err(PermError::Cache(format!("version {version}, expected {VERSION}")));
    }
    bincode::deserialize(&bytes[12..]).map_err(|e| PermError::Cache(e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_and_corruption() {
        let dir = tempfile::tempdir().unwrap();
        let cache = CacheDir::new(dir.path());
        cache.store("abc", "numbers", &vec![1u32, 2, 3]).unwrap();
        assert_eq!(cache.load::<Vec<u32>>("abc", "numbers"), Some(vec![1, 2, 3]));
        assert_eq!(cache.load::<Vec<u32>>("other", "numbers"), None);
        let path = dir.path().join("abc").join("numbers.bin");
        fs::write(&path, b"garbage").unwrap();
        assert_eq!(cache.load::<Vec<u32>>("abc", "numbers"), None);
        assert!(!path.exists());
    }

    #[test]
    fn digest_changes_with_content() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("g.txt");
        fs::write(&p, "perm 2\n2 1\n").unwrap();
        let a = file_digest(&p).unwrap();
        fs::write(&p, "perm 2\n1 2\n").unwrap();
        assert_ne!(a, file_digest(&p).unwrap());
    }
}
