use std::path::Path;

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use semspan::core::corpus::generate_synthetic;
use semspan::core::semspace::{Centroid, NodeLabel};
use semspan::core::simgraph::{build_graph, connected_components, SubGraphKind};
use semspan::core::text::{build_vocabulary, tokenize_corpus, vectorize_counts, RowLabel, TokenizerConfig, VocabParams};
use semspan::core::topics::{fit_lda, LdaConfig};
use semspan::core::CsrMatrix;
use semspan::formats::graph::{graph_dot, graph_json, parse_graph_json, read_graph_json};
use semspan::formats::model::{read_model, write_model};
use semspan::formats::sparse::{read_sparse, rows_sidecar, write_sparse};
use semspan::formats::vocab::{read_vocabulary, write_vocabulary};
use semspan::hash::{tokenizer_hash, vocabulary_hash};
use semspan::pipeline::example_spec;
use semspan::{write_string, Error};

fn centroid(community: &str, vector: Vec<f64>) -> Centroid {
    Centroid {
        vector,
        label: NodeLabel::community(community),
        support: 1,
    }
}

#[test]
fn vocabulary_and_counts_round_trip() {
    let (corpus, _) = generate_synthetic(&example_spec(1)).unwrap();
    let tok = TokenizerConfig::default();
    let docs = tokenize_corpus(&corpus, &tok);
    let vocab = build_vocabulary(&docs, VocabParams::default()).unwrap();
    let counts = vectorize_counts(&docs, &vocab).unwrap();
    let dir = tempfile::tempdir().unwrap();

    let vpath = dir.path().join("vocab.json");
    write_vocabulary(&vocab, &vpath).unwrap();
    assert_eq!(read_vocabulary(&vpath).unwrap(), vocab);

    let mpath = dir.path().join("counts.mtx");
    write_sparse(&counts.counts, &counts.rows, &tokenizer_hash(&tok), &mpath).unwrap();
    assert!(rows_sidecar(&mpath).exists());
    let back = read_sparse::<u32>(&mpath).unwrap();
    assert_eq!(back.matrix, counts.counts);
    assert_eq!(back.rows, counts.rows);
    assert_eq!(back.tokenizer_hash, tokenizer_hash(&tok));
}

#[test]
fn sparse_reader_rejects_bad_input() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("m.mtx");
    let rows = "a\tx\nb\tx\n";
    std::fs::write(rows_sidecar(&path), rows).unwrap();
    for body in [
        "%semspan-sparse 1\n%rows 2 cols 2 tokenizer h\n0 5 1\n",
        "%semspan-sparse 1\n%rows 2 cols 2 tokenizer h\n0 one 1\n",
        "%semspan-sparse 1\n%rows 3 cols 2 tokenizer h\n",
        "not a matrix\n",
    ] {
        std::fs::write(&path, body).unwrap();
        assert!(read_sparse::<u32>(&path).is_err(), "accepted {body:?}");
    }
}

#[test]
fn model_file_is_bound_to_its_vocabulary() {
    let (corpus, _) = generate_synthetic(&example_spec(2)).unwrap();
    let docs = tokenize_corpus(&corpus, &TokenizerConfig::default());
    let vocab = build_vocabulary(&docs, VocabParams::default()).unwrap();
    let counts = vectorize_counts(&docs, &vocab).unwrap();
    let mut config = LdaConfig::new(4);
    config.iterations = 20;
    let model = fit_lda(&counts, &config).unwrap();

    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("lda.json");
    let hash = vocabulary_hash(&vocab);
    write_model(&model, &hash, &path).unwrap();
    let back = read_model(&path, &hash).unwrap();
    assert_eq!(back, model);
    assert!(back.phi.as_slice().iter().zip(model.phi.as_slice()).all(|(a, b)| a.to_bits() == b.to_bits()));

    let other = vocabulary_hash(&build_vocabulary(&docs[..3], VocabParams { min_df: 1, max_df_ratio: 1.0 }).unwrap());
    assert_ne!(other, hash);
    assert!(matches!(read_model(&path, &other), Err(Error::VocabularyMismatch { .. })));
}

#[test]
fn triangle_exports_three_edges() {
    let cs = vec![
        centroid("A", vec![1.0, 0.1]),
        centroid("B", vec![1.0, 0.12]),
        centroid("C", vec![1.0, 0.08]),
    ];
    let g = build_graph(&cs, 0.9).unwrap();
    let subs = connected_components(&g);
    assert_eq!(subs.len(), 1);
    assert_eq!(subs[0].kind, SubGraphKind::Clique);
    let dot = graph_dot(&g, &subs);
    assert!(dot.starts_with("graph similarity {"));
    assert!(dot.trim_end().ends_with('}'));
    assert_eq!(dot.matches(" -- ").count(), 3);
    assert_eq!(dot.matches("subgraph cluster_").count(), 1);
}

#[test]
fn empty_graph_is_still_valid_dot() {
    let g = build_graph(&[], 0.5).unwrap();
    let dot = graph_dot(&g, &connected_components(&g));
    assert!(dot.starts_with("graph similarity {"));
    assert_eq!(dot.matches(" -- ").count(), 0);
    let json = graph_json(&g, &[]);
    let (back, subs) = parse_graph_json(&json, Path::new("g.json")).unwrap();
    assert!(back.is_empty() && subs.is_empty());
}

#[test]
fn graph_json_round_trips_and_rejects_tampering() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let cs: Vec<Centroid> = (0..9)
        .map(|i| Centroid {
            vector: (0..4).map(|_| rng.random::<f64>()).collect(),
            label: NodeLabel::cluster(format!("c{}", i % 3), i / 3),
            support: 1,
        })
        .collect();
    let g = build_graph(&cs, 0.85).unwrap();
    let subs = connected_components(&g);
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("g.json");
    write_string(&path, &graph_json(&g, &subs)).unwrap();
    let (back, back_subs) = read_graph_json(&path).unwrap();
    assert_eq!(back, g);
    assert_eq!(back_subs, subs);

    let mut value: serde_json::Value = serde_json::from_str(&graph_json(&g, &subs)).unwrap();
    value["tau"] = serde_json::json!(0.1);
    assert!(parse_graph_json(&value.to_string(), &path).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn float_matrices_round_trip_bit_exactly(
        rows in 0usize..6,
        cols in 1usize..6,
        seed in any::<u64>(),
    ) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut m = CsrMatrix::new(cols);
        for _ in 0..rows {
            let mut entries = Vec::new();
            for j in 0..cols {
                if rng.random_bool(0.5) {
                    let scale = 10f64.powi(rng.random_range(-20..20));
                    entries.push((j, rng.random::<f64>() * scale));
                }
            }
            m.push_row(entries);
        }
        let labels: Vec<RowLabel> = (0..rows).map(|i| RowLabel { id: format!("r{i}"), community: "x y".into() }).collect();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("m.mtx");
        write_sparse(&m, &labels, "h", &path).unwrap();
        let back = read_sparse::<f64>(&path).unwrap();
        prop_assert_eq!(back.matrix, m);
        prop_assert_eq!(back.rows, labels);
    }
}
