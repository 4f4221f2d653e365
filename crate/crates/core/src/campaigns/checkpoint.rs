//! Plain-JSON checkpoints for resumable campaign runs.

use crate::error::Result;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use std::fs;
use std::path::PathBuf;

pub struct Checkpointer {
    path: PathBuf,
}

impl Checkpointer {
    pub fn new(path: PathBuf) -> Self {
        Checkpointer { path }
    }

    pub fn load<T: DeserializeOwned>(&self) -> Result<Option<T>> {
        match fs::read(&self.path) {
            Ok(bytes) => Ok(Some(serde_json::from_slice(&bytes)?)),
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => Ok(None),
            Err(e) => Err(e.into()),
        }
    }

    /// Writes to a sibling temp file and renames it into place.
    pub fn save<T: Serialize>(&self, state: &T) -> Result<()> {
        let mut tmp = self.path.clone().into_os_string();
        tmp.push(".tmp");
        fs::write(&tmp, serde_json::to_vec(state)?)?;
        fs::rename(&tmp, &self.path)?;
        Ok(())
    }
}

/// Run-length encoding of a word vector: `(word, repeat)` pairs.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunLength(pub Vec<(u64, u64)>);

impl RunLength {
    pub fn encode(words: &[u64]) -> Self {
        let mut runs: Vec<(u64, u64)> = Vec::new();
        for &w in words {
            match runs.last_mut() {
                Some((v, n)) if *v == w => *n += 1,
                _ => runs.push((w, 1)),
            }
        }
        RunLength(runs)
    }

    pub fn decode(&self) -> Vec<u64> {
        self.0.iter().flat_map(|&(w, n)| std::iter::repeat_n(w, n as usize)).collect()
    }
}
