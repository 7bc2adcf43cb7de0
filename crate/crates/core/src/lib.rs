#![no_std]

//! # `semspan-core`
//!
//! Models community-partitioned text corpora in a latent topic space and
//! compares communities by the regions of that space they cover.
//!
//! The crate is `no_std` (it needs `alloc`) and performs no IO. Everything
//! here is a pure function of its inputs and, where sampling is involved, an
//! explicit seed. File formats, the pipeline and the command line live in the
//! `semspan` crate.
//!
//! Layers, bottom up:
//!
//! * [`corpus`]: submissions, communities, per-community summaries and a
//!   planted-topic synthetic generator.
//! * [`text`]: tokenizer, vocabulary, count vectors, TFIDF and top terms.
//! * [`topics`]: LDA by collapsed Gibbs sampling, NMF by multiplicative updates.
//! * [`semspace`]: cosine similarity, centroids, k-means spans and
//!   cluster-count selection.
//! * [`simgraph`]: thresholded similarity graphs and their components.

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod corpus;
pub mod matrix;
pub mod semspace;
pub mod simgraph;
pub mod text;
pub mod topics;

mod rng;

pub use matrix::{CsrMatrix, DenseMatrix};
