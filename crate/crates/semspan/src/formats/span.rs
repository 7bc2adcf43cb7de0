//! Semantic span exports: one JSON file per community plus a CSV of the
//! cluster-count selection table.
//!
//! Calinski-Harabasz can be infinite; JSON stores it as the string `"inf"`
//! and the CSV writes `inf`.

use serde_json::{json, Value};

use semspan_core::semspace::SemanticSpan;
use semspan_core::text::RowLabel;

use super::{csv_number, json_number, to_json_string};

pub fn span_json(span: &SemanticSpan, rows: &[RowLabel]) -> String {
    let clusters: Vec<Value> = (0..span.c())
        .map(|c| {
            let docs: Vec<&str> = span.cluster_documents(c).iter().map(|&d| rows[d].id.as_str()).collect();
            json!({ "ordinal": c, "size": docs.len(), "documents": docs })
        })
        .collect();
    let candidates: Vec<Value> = span
        .selection
        .candidates
        .iter()
        .map(|m| {
            json!({
                "c": m.c,
                "inertia": json_number(m.inertia),
                "calinski": json_number(m.calinski),
                "silhouette": json_number(m.silhouette),
            })
        })
        .collect();
    let value = json!({
        "community": span.community,
        "c": span.c(),
        "centroids": span.centroids.iter_rows().map(<[f64]>::to_vec).collect::<Vec<_>>(),
        "clusters": clusters,
        "selection": {
            "c_min": span.selection.c_min,
            "c_max": span.selection.c_max,
            "chosen": span.selection.chosen,
            "rule": span.selection.rule,
            "candidates": candidates,
        },
    });
    to_json_string(&value)
}

pub fn metrics_csv(span: &SemanticSpan) -> String {
    let mut out = String::from("c,inertia,calinski,silhouette,chosen\n");
    for m in &span.selection.candidates {
        out.push_str(&format!(
            "{},{},{},{},{}\n",
            m.c,
            csv_number(m.inertia),
            csv_number(m.calinski),
            csv_number(m.silhouette),
            u8::from(m.c == span.selection.chosen)
        ));
    }
    out
}

/// A community name made safe for use as a file stem.
pub fn file_stem(community: &str) -> String {
    community
        .chars()
        .map(|c| if c.is_ascii_alphanumeric() || c == '-' || c == '_' { c } else { '_' })
        .collect()
}
