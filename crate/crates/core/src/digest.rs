use serde::Serialize;
use sha2::{Digest, Sha256};

/// Short stable identifier of a serializable input: first 16 hex digits of the
/// SHA-256 of its JSON encoding.
pub fn digest<T: Serialize + ?Sized>(value: &T) -> String {
    let bytes = serde_json::to_vec(value).unwrap_or_default();
    let hash = Sha256::digest(&bytes);
    hash.iter().take(8).map(|b| format!("{b:02x}")).collect()
}
