use std::path::{Path, PathBuf};

use proptest::prelude::*;

use semspan::core::corpus::{generate_synthetic, summarize, Corpus, Submission};
use semspan::core::text::TokenizerConfig;
use semspan::formats::summary::summary_table;
use semspan::jsonl::{corpus_fingerprint, load_jsonl, to_jsonl, write_jsonl};
use semspan::pipeline::example_spec;
use semspan::Error;

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

#[test]
fn reference_submission_shape_validates_strictly() {
    let loaded = load_jsonl(&fixture("tab2.jsonl"), true).unwrap();
    assert_eq!(loaded.corpus.len(), 2);
    assert_eq!(loaded.skip_count(), 0);
    let s = &loaded.corpus.submissions()[0];
    assert_eq!(s.title, "looking for any help to manage pain");
    assert_eq!((s.score, s.num_comments, s.year), (3, 4, Some(2014)));
    assert_eq!(s.community, "migraine");
    assert!(s.url.is_some());
}

#[test]
fn lenient_load_skips_and_counts_bad_lines() {
    let loaded = load_jsonl(&fixture("mixed.jsonl"), false).unwrap();
    assert_eq!(loaded.corpus.len(), 3);
    assert_eq!(loaded.skip_count(), 1);
    assert_eq!(loaded.skipped[0].line, 2);
    assert!(loaded.skipped[0].reason.contains("body"));
}

#[test]
fn strict_load_reports_the_line() {
    match load_jsonl(&fixture("mixed.jsonl"), true) {
        Err(Error::Parse { line, .. }) => assert_eq!(line, 2),
        other => panic!("expected a parse error, got {other:?}"),
    }
}

#[test]
fn empty_file_gives_empty_corpus() {
    let loaded = load_jsonl(&fixture("empty.jsonl"), true).unwrap();
    assert!(loaded.corpus.is_empty());
    assert_eq!(loaded.skip_count(), 0);
}

#[test]
fn year_conflict_is_an_error_only_when_strict() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("c.jsonl");
    let line = r#"{"id": "x", "subreddit": "s", "body": "text", "created_utc": 1402833600, "year": 2015}"#;
    std::fs::write(&path, format!("{line}\n")).unwrap();
    assert!(load_jsonl(&path, true).is_err());
    let lenient = load_jsonl(&path, false).unwrap();
    assert_eq!(lenient.year_conflicts, 1);
    assert_eq!(lenient.corpus.submissions()[0].year, Some(2015));
}

#[test]
fn duplicate_ids_are_skipped_when_lenient() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("c.jsonl");
    let line = r#"{"id": "x", "subreddit": "s", "body": "text"}"#;
    std::fs::write(&path, format!("{line}\n{line}\n")).unwrap();
    assert_eq!(load_jsonl(&path, false).unwrap().skip_count(), 1);
    assert!(load_jsonl(&path, true).is_err());
}

#[test]
fn synthetic_corpus_survives_a_file_round_trip() {
    let (corpus, _) = generate_synthetic(&example_spec(3)).unwrap();
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("synth.jsonl");
    write_jsonl(&corpus, &path).unwrap();
    let back = load_jsonl(&path, true).unwrap().corpus;
    assert_eq!(back, corpus);
    assert_eq!(corpus_fingerprint(&back), corpus_fingerprint(&corpus));
}

#[test]
fn summary_columns_follow_the_reference_table() {
    let corpus = load_jsonl(&fixture("tab2.jsonl"), true).unwrap().corpus;
    let rows = summarize(&corpus, &TokenizerConfig::default()).unwrap();
    let table = summary_table(&rows);
    let header: Vec<&str> = table.lines().next().unwrap().split('|').map(str::trim).collect();
    assert_eq!(
        header,
        [
            "Community",
            "Mean posts per year (std)",
            "Total number of posts",
            "Mean tokens per post (std)",
            "Total tokens"
        ]
    );
    assert_eq!(table.lines().count(), 2 + rows.len());
}

fn submission() -> impl Strategy<Value = Submission> {
    (
        "[a-z0-9]{1,8}",
        "[ -~]{0,20}",
        "[ -~\u{e9}\u{2019}\n\"\\\\]{1,40}",
        any::<i64>(),
        any::<u32>(),
        prop::option::of(0i64..2_000_000_000),
        "[A-Za-z]{1,6}",
        prop::option::of("https?://[a-z]{1,5}\\.org"),
    )
        .prop_map(|(id, title, body, score, comments, created, community, url)| Submission {
            id,
            title,
            body,
            score,
            num_comments: u64::from(comments),
            created_utc: created,
            community,
            year: created.map(semspan::core::corpus::year_from_unix),
            url,
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn canonical_jsonl_round_trips(subs in prop::collection::vec(submission(), 0..12)) {
        let mut seen = std::collections::BTreeSet::new();
        let subs: Vec<Submission> = subs
            .into_iter()
            .filter(|s| !s.body.trim().is_empty() && seen.insert(s.id.clone()))
            .collect();
        let corpus = Corpus::from_submissions(subs).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("c.jsonl");
        std::fs::write(&path, to_jsonl(&corpus)).unwrap();
        let back = load_jsonl(&path, true).unwrap();
        prop_assert_eq!(back.corpus, corpus);
    }
}
