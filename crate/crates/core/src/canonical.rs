//! Canonical JSON: lexicographically sorted object keys, UTF-8, no
//! insignificant whitespace, timestamps as ISO-8601 UTC with `Z`.
//!
//! Cache keys and the byte-identical context-echo contract both depend on
//! there being exactly one serialized form per value, so the writer here
//! sorts keys itself instead of trusting map iteration order.

use alloc::string::String;
use alloc::vec::Vec;

use serde::Serialize;
use serde_json::Value;
use sha2::{Digest, Sha256};

/// Serializes any value to its canonical JSON bytes.
pub fn canonical_bytes<T: Serialize>(value: &T) -> Result<Vec<u8>, serde_json::Error> {
    let tree = serde_json::to_value(value)?;
    let mut out = Vec::new();
    write_value(&tree, &mut out)?;
    Ok(out)
}

/// Canonical JSON as a string.
pub fn canonical_string<T: Serialize>(value: &T) -> Result<String, serde_json::Error> {
    canonical_bytes(value).map(|b| String::from_utf8(b).expect("serde_json emits UTF-8"))
}

/// Hex-encoded SHA-256 of the canonical serialization. Used as the
/// content-addressed cache key.
pub fn content_hash<T: Serialize>(value: &T) -> Result<String, serde_json::Error> {
    let bytes = canonical_bytes(value)?;
    let digest = Sha256::digest(&bytes);
    let mut hex = String::with_capacity(64);
    for byte in digest {
        use core::fmt::Write;
        write!(hex, "{byte:02x}").expect("writing to String cannot fail");
    }
    Ok(hex)
}

fn write_value(v: &Value, out: &mut Vec<u8>) -> Result<(), serde_json::Error> {
    match v {
        Value::Null => out.extend_from_slice(b"null"),
        Value::Bool(true) => out.extend_from_slice(b"true"),
        Value::Bool(false) => out.extend_from_slice(b"false"),
        // Scalars reuse serde_json's own formatting (ryu shortest form for
        // floats), which round-trips exactly.
        Value::Number(n) => out.extend_from_slice(serde_json::to_string(n)?.as_bytes()),
        Value::String(s) => out.extend_from_slice(serde_json::to_string(s)?.as_bytes()),
        Value::Array(items) => {
            out.push(b'[');
            for (i, item) in items.iter().enumerate() {
                if i > 0 {
                    out.push(b',');
                }
                write_value(item, out)?;
            }
            out.push(b']');
        }
        Value::Object(map) => {
            let mut keys: Vec<&String> = map.keys().collect();
            keys.sort_unstable();
            out.push(b'{');
            for (i, key) in keys.iter().enumerate() {
                if i > 0 {
                    out.push(b',');
                }
                out.extend_from_slice(serde_json::to_string(key)?.as_bytes());
                out.push(b':');
                write_value(&map[key.as_str()], out)?;
            }
            out.push(b'}');
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn keys_are_sorted_and_whitespace_free() {
        let v = json!({"zebra": 1, "alpha": {"c": [1, 2.5], "b": "x"}});
        let s = canonical_string(&v).unwrap();
        assert_eq!(s, r#"{"alpha":{"b":"x","c":[1,2.5]},"zebra":1}"#);
    }

    #[test]
    fn hash_is_stable_under_key_order() {
        let a = json!({"a": 1, "b": 2});
        let b = json!({"b": 2, "a": 1});
        assert_eq!(content_hash(&a).unwrap(), content_hash(&b).unwrap());
    }

    #[test]
    fn floats_round_trip() {
        let v = json!({"t": 15.0, "p": 0.1, "w": 4.633333333333334});
        let s = canonical_string(&v).unwrap();
        let back: serde_json::Value = serde_json::from_str(&s).unwrap();
        assert_eq!(v, back);
    }
}
