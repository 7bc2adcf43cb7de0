//! Community summary tables.

use semspan_core::corpus::CommunitySummary;

use super::to_json_string;

/// `1234567.891` with one decimal becomes `1,234,567.9`.
pub fn thousands(x: f64, decimals: usize) -> String {
    let s = format!("{:.*}", decimals, x.abs());
    let (int, frac) = match s.split_once('.') {
        Some((i, f)) => (i, Some(f)),
        None => (s.as_str(), None),
    };
    let mut grouped = String::new();
    for (i, ch) in int.chars().enumerate() {
        if i > 0 && (int.len() - i) % 3 == 0 {
            grouped.push(',');
        }
        grouped.push(ch);
    }
    let negative = x < 0.0 && s.chars().any(|c| c.is_ascii_digit() && c != '0');
    let mut out = String::new();
    if negative {
        out.push('-');
    }
    out.push_str(&grouped);
    if let Some(f) = frac {
        out.push('.');
        out.push_str(f);
    }
    out
}

const HEADERS: [&str; 5] = [
    "Community",
    "Mean posts per year (std)",
    "Total number of posts",
    "Mean tokens per post (std)",
    "Total tokens",
];

/// Plain-text table, one row per community in the given order.
pub fn summary_table(rows: &[CommunitySummary]) -> String {
    let cells: Vec<[String; 5]> = rows
        .iter()
        .map(|r| {
            [
                r.community.clone(),
                format!("{} ({})", thousands(r.posts_per_year_mean, 1), thousands(r.posts_per_year_std, 1)),
                thousands(r.total_posts as f64, 0),
                format!("{} ({})", thousands(r.tokens_per_post_mean, 1), thousands(r.tokens_per_post_std, 1)),
                thousands(r.total_tokens as f64, 0),
            ]
        })
        .collect();
    let mut width = HEADERS.map(str::len);
    for row in &cells {
        for (w, c) in width.iter_mut().zip(row) {
            *w = (*w).max(c.chars().count());
        }
    }
    let line = |row: &[String]| {
        let parts: Vec<String> = row
            .iter()
            .enumerate()
            .map(|(i, c)| if i == 0 { format!("{c:<w$}", w = width[i]) } else { format!("{c:>w$}", w = width[i]) })
            .collect();
        let mut s = parts.join(" | ");
        s.truncate(s.trim_end().len());
        s.push('\n');
        s
    };
    let mut out = line(&HEADERS.map(String::from));
    out.push_str(&width.iter().map(|&w| "-".repeat(w)).collect::<Vec<_>>().join("-+-"));
    out.push('\n');
    for row in &cells {
        out.push_str(&line(row));
    }
    out
}

pub fn summary_json(rows: &[CommunitySummary]) -> String {
    to_json_string(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn groups_thousands() {
        assert_eq!(thousands(3864.44, 1), "3,864.4");
        assert_eq!(thousands(2107.5, 1), "2,107.5");
        assert_eq!(thousands(999.0, 0), "999");
        assert_eq!(thousands(1_000_000.0, 0), "1,000,000");
        assert_eq!(thousands(-1234.5, 1), "-1,234.5");
        assert_eq!(thousands(-0.01, 1), "0.0");
        assert_eq!(thousands(0.0, 1), "0.0");
    }

    #[test]
    fn table_has_one_line_per_community() {
        let row = CommunitySummary {
            community: "migraine".into(),
            posts_per_year_mean: 3864.4,
            posts_per_year_std: 2107.5,
            total_posts: 30915,
            tokens_per_post_mean: 61.3,
            tokens_per_post_std: 58.9,
            total_tokens: 1_895_473,
        };
        let t = summary_table(&[row]);
        let lines: Vec<&str> = t.lines().collect();
        assert_eq!(lines.len(), 3);
        assert!(lines[0].starts_with("Community"));
        assert!(lines[2].contains("3,864.4 (2,107.5)"));
        assert!(lines[2].contains("30,915"));
        assert!(lines[2].ends_with("1,895,473"));
    }
}
