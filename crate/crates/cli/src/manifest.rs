//! Run manifests written next to every command's outputs.

use std::collections::BTreeMap;
use std::path::Path;
use std::time::Instant;

use anyhow::{Context, Result};
use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::Cli;

/// Named wall-clock durations in seconds; a no-op when disabled.
#[derive(Debug, Serialize)]
#[serde(transparent)]
pub struct Timings {
    #[serde(skip)]
    enabled: bool,
    seconds: BTreeMap<String, f64>,
}

impl Timings {
    pub fn new(enabled: bool) -> Self {
        Self {
            enabled,
            seconds: BTreeMap::new(),
        }
    }

    pub fn record(&mut self, name: &str, since: Instant) {
        if self.enabled {
            self.seconds.insert(name.to_owned(), since.elapsed().as_secs_f64());
        }
    }

    fn is_disabled(&self) -> bool {
        !self.enabled
    }
}

#[derive(Debug, Serialize)]
pub struct InputDigest {
    path: String,
    sha256: String,
}

#[derive(Debug, Serialize)]
pub struct Manifest<'a, A: Serialize> {
    command: &'static str,
    version: &'static str,
    seed: u64,
    threads: Option<u16>,
    flags: &'a A,
    #[serde(skip_serializing_if = "Option::is_none")]
    input: Option<InputDigest>,
    outputs: Vec<String>,
    #[serde(skip_serializing_if = "Timings::is_disabled")]
    timings: Timings,
}

impl<'a, A: Serialize> Manifest<'a, A> {
    pub fn new(
        command: &'static str,
        cli: &Cli,
        flags: &'a A,
        seed: u64,
        outputs: &[&str],
        timings: Timings,
    ) -> Self {
        Self {
            command,
            version: env!("CARGO_PKG_VERSION"),
            seed,
            threads: cli.threads,
            flags,
            input: None,
            outputs: outputs.iter().map(|s| (*s).to_owned()).collect(),
            timings,
        }
    }

    pub fn with_input(mut self, path: &Path, bytes: &[u8]) -> Self {
        self.input = Some(InputDigest {
            path: path.display().to_string(),
            sha256: hex::encode(Sha256::digest(bytes)),
        });
        self
    }

    pub fn write(&self, dir: &Path) -> Result<()> {
        let path = dir.join("manifest.json");
        std::fs::write(&path, to_json_bytes(self)?)
            .with_context(|| format!("writing {}", path.display()))
    }
}

/// Pretty JSON with a trailing newline.
pub fn to_json_bytes<T: Serialize + ?Sized>(value: &T) -> Result<Vec<u8>> {
    let mut bytes = serde_json::to_vec_pretty(value)?;
    bytes.push(b'\n');
    Ok(bytes)
}

/// Removes every object key starting with `time_`, recursively.
pub fn strip_timing_keys(value: &mut serde_json::Value) {
    match value {
        serde_json::Value::Object(map) => {
            map.retain(|k, _| !k.starts_with("time_"));
            map.values_mut().for_each(strip_timing_keys);
        }
        serde_json::Value::Array(items) => items.iter_mut().for_each(strip_timing_keys),
        _ => {}
    }
}
