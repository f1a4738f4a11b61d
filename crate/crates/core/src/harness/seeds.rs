// Copyright 2026 dds-iswap Contributors
// SPDX-License-Identifier: Apache-2.0

use sha2::{Digest, Sha256};

/// `SHA-256(master_le ‖ stage ‖ 0x00 ‖ index_le)`, first 8 bytes little-endian.
pub fn sub_seed(master: u64, stage: &str, index: u64) -> u64 {
    let mut h = Sha256::new();
    h.update(master.to_le_bytes());
    h.update(stage.as_bytes());
    h.update([0u8]);
    h.update(index.to_le_bytes());
    let d = h.finalize();
    u64::from_le_bytes(d[..8].try_into().unwrap())
}

/// Hex SHA-256 of a byte string.
pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seeds_are_stable_and_distinct() {
        assert_eq!(sub_seed(7, "rb", 3), sub_seed(7, "rb", 3));
        assert_ne!(sub_seed(7, "rb", 3), sub_seed(7, "rb", 4));
        assert_ne!(sub_seed(7, "rb", 3), sub_seed(7, "rbx", 3));
        assert_ne!(sub_seed(7, "rb", 3), sub_seed(8, "rb", 3));
        // the separator keeps ("a", 1) and ("a\x01", ..) apart
        assert_ne!(sub_seed(0, "a", 0), sub_seed(0, "a\u{0}", 0));
    }

    #[test]
    fn sha256_known_vector() {
        assert_eq!(
            sha256_hex(b"abc"),
            "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad"
        );
    }
}
