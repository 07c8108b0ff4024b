use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use super::{Instance, InstanceError};

pub const FORMAT_NAME: &str = "paperplan-instance";
pub const FORMAT_VERSION: u64 = 1;

#[derive(Serialize)]
struct EnvelopeOut<'a> {
    format: &'a str,
    version: u64,
    instance: &'a Instance,
}

#[derive(Deserialize)]
struct EnvelopeIn {
    format: String,
    version: u64,
    instance: Value,
}

/// Serializes to the versioned JSON document.
pub fn to_string(instance: &Instance) -> String {
    let env = EnvelopeOut {
        format: FORMAT_NAME,
        version: FORMAT_VERSION,
        instance,
    };
    let mut text = serde_json::to_string_pretty(&env).expect("instance serializes");
    text.push('\n');
    text
}

pub fn from_str(text: &str) -> Result<Instance, InstanceError> {
    let env: EnvelopeIn =
        serde_json::from_str(text).map_err(|e| InstanceError::Parse(e.to_string()))?;
    if env.format != FORMAT_NAME {
        return Err(InstanceError::Parse(format!("unexpected format tag {:?}", env.format)));
    }
    if env.version != FORMAT_VERSION {
        return Err(InstanceError::Version {
            found: env.version,
            expected: FORMAT_VERSION,
        });
    }
    serde_json::from_value(env.instance).map_err(|e| InstanceError::Parse(e.to_string()))
}

pub fn save(instance: &Instance, path: &Path) -> Result<(), InstanceError> {
    fs::write(path, to_string(instance)).map_err(|source| InstanceError::Io {
        path: path.display().to_string(),
        source,
    })
}

pub fn load(path: &Path) -> Result<Instance, InstanceError> {
    let text = fs::read_to_string(path).map_err(|source| InstanceError::Io {
        path: path.display().to_string(),
        source,
    })?;
    from_str(&text)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instances::generate_tiny_instance;

    #[test]
    fn round_trip_text() {
        let inst = generate_tiny_instance(3, true);
        assert_eq!(from_str(&to_string(&inst)).unwrap(), inst);
    }

    #[test]
    fn truncated_is_parse_error() {
        let text = to_string(&generate_tiny_instance(3, true));
        let cut = &text[..text.len() / 2];
        assert!(matches!(from_str(cut), Err(InstanceError::Parse(_))));
    }

    #[test]
    fn unknown_version() {
        let text = to_string(&generate_tiny_instance(3, true))
            .replacen("\"version\": 1", "\"version\": 7", 1);
        assert!(matches!(
            from_str(&text),
            Err(InstanceError::Version { found: 7, expected: 1 })
        ));
    }
}
