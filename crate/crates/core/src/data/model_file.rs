//! JSON model files.
//!
//! Layout: `{"format_version": 1, "checksum": "<sha256 hex>", "model": {...}}`.
//! The checksum covers the canonical serialization of `model`, so a file
//! that was truncated or edited is rejected before any model is built.

use std::io::{Read, Write};
use std::path::Path;

use serde_json::Value as Json;
use sha2::{Digest, Sha256};

use crate::classifiers::TrainedModel;
use crate::error::{Error, Result};

pub const MODEL_FORMAT_VERSION: u64 = 1;

fn checksum(model: &Json) -> Result<String> {
    let canonical = serde_json::to_string(model)?;
    Ok(hex::encode(Sha256::digest(canonical.as_bytes())))
}

pub fn write_model(model: &TrainedModel, out: impl Write) -> Result<()> {
    let body = serde_json::to_value(model)?;
    let doc = serde_json::json!({
        "format_version": MODEL_FORMAT_VERSION,
        "checksum": checksum(&body)?,
        "model": body,
    });
    serde_json::to_writer(out, &doc)?;
    Ok(())
}

pub fn read_model(mut reader: impl Read) -> Result<TrainedModel> {
    let mut text = String::new();
    reader
        .read_to_string(&mut text)
        .map_err(|e| Error::Integrity(e.to_string()))?;
    let doc: Json = serde_json::from_str(&text)
        .map_err(|e| Error::Integrity(format!("unreadable JSON: {e}")))?;
    let version = doc
        .get("format_version")
        .and_then(Json::as_u64)
        .ok_or_else(|| Error::Integrity("missing format_version".into()))?;
    if version != MODEL_FORMAT_VERSION {
        return Err(Error::IncompatibleVersion {
            found: version,
            expected: MODEL_FORMAT_VERSION,
        });
    }
    let stored = doc
        .get("checksum")
        .and_then(Json::as_str)
        .ok_or_else(|| Error::Integrity("missing checksum".into()))?;
    let body = doc
        .get("model")
        .ok_or_else(|| Error::Integrity("missing model body".into()))?;
    if checksum(body)? != stored {
        return Err(Error::Integrity("checksum mismatch".into()));
    }
    serde_json::from_value(body.clone()).map_err(|e| Error::Integrity(e.to_string()))
}

pub fn save_model(model: &TrainedModel, path: impl AsRef<Path>) -> Result<()> {
    let mut buf = Vec::new();
    write_model(model, &mut buf)?;
    crate::io::write_atomic(path.as_ref(), &buf)
}

pub fn load_model(path: impl AsRef<Path>) -> Result<TrainedModel> {
    let path = path.as_ref();
    let file = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
    read_model(std::io::BufReader::new(file))
}
