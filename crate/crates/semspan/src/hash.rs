//! Content fingerprints used for provenance and cache keys.

use sha2::{Digest, Sha256};

use semspan_core::text::{DocTermMatrix, TokenizerConfig, Vocabulary};

pub fn sha256_hex(bytes: &[u8]) -> String {
    let digest = Sha256::digest(bytes);
    digest.iter().map(|b| format!("{b:02x}")).collect()
}

/// Hashes the terms in index order.
pub fn vocabulary_hash(vocab: &Vocabulary) -> String {
    let mut h = Sha256::new();
    for t in vocab.terms() {
        h.update(t.as_bytes());
        h.update(b"\n");
    }
    h.finalize().iter().map(|b| format!("{b:02x}")).collect()
}

pub fn tokenizer_hash(config: &TokenizerConfig) -> String {
    sha256_hex(&serde_json::to_vec(config).expect("tokenizer config serializes"))
}

/// Hashes row labels and every stored count.
pub fn counts_hash(counts: &DocTermMatrix) -> String {
    let mut h = Sha256::new();
    h.update(format!("{}x{}\n", counts.n_docs(), counts.n_terms()));
    for (d, row) in counts.rows.iter().enumerate() {
        h.update(format!("{}\t{}\n", row.id, row.community));
        for (j, c) in counts.counts.row_iter(d) {
            h.update(format!("{j}:{c} "));
        }
        h.update(b"\n");
    }
    h.finalize().iter().map(|b| format!("{b:02x}")).collect()
}
