//! Edge-list files and the results table.
//!
//! Edge lists are whitespace-separated pairs of labels, one edge per
//! line. Lines starting with `%` or `#` and blank lines are comments;
//! columns past the second are ignored. Labels are arbitrary strings,
//! mapped to dense node ids in order of first appearance. Self-loops and
//! repeated edges are dropped (and counted), a line with fewer than two
//! labels is an error, and a file with no surviving edges is an error.
//!
//! Result tables are CSV with the fixed header
//! `network,target,k,algorithm,t,seed,coverage_ordered,coverage_unordered,baseline,ratio_to_exact,wall_ms`.
//! Ratios are printed with six decimals; optional fields are blank.
//! Writing is byte-deterministic for equal rows.

use crate::graph::Graph;
use std::collections::{HashMap, HashSet};
use std::path::Path;
use thiserror::Error;

/// Errors from file parsing and writing.
#[derive(Debug, Error)]
pub enum IoError {
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error("line {line}: expected at least two labels, found {found}")]
    MalformedLine { line: usize, found: usize },
    #[error("edge list contained no usable edges")]
    EmptyGraph,
    #[error("unexpected results header: {found}")]
    BadHeader { found: String },
    #[error("line {line}: {msg}")]
    BadField { line: usize, msg: String },
}

/// What [`read_edge_list`] saw while parsing.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseStats {
    /// Original label of each node id, in first-appearance order.
    pub labels: Vec<String>,
    /// Self-loop lines dropped.
    pub loops_dropped: usize,
    /// Repeated-edge lines dropped.
    pub dupes_dropped: usize,
}

/// Reads an edge list, remapping labels to dense ids.
pub fn read_edge_list(path: &Path, directed: bool) -> Result<(Graph, ParseStats), IoError> {
    let text = std::fs::read_to_string(path)?;
    let mut ids: HashMap<String, usize> = HashMap::new();
    let mut labels: Vec<String> = Vec::new();
    let mut seen: HashSet<(usize, usize)> = HashSet::new();
    let mut kept: Vec<(usize, usize)> = Vec::new();
    let mut loops_dropped = 0usize;
    let mut dupes_dropped = 0usize;
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('%') || line.starts_with('#') {
            continue;
        }
        // Two endpoints, optionally followed by a weight column (ignored).
        let tokens: Vec<&str> = line.split_whitespace().collect();
        let (a, b) = match tokens[..] {
            [a, b] | [a, b, _] => (a, b),
            _ => {
                return Err(IoError::MalformedLine { line: idx + 1, found: tokens.len() });
            }
        };
        let mut intern = |tok: &str| -> usize {
            if let Some(&id) = ids.get(tok) {
                return id;
            }
            let id = labels.len();
            ids.insert(tok.to_string(), id);
            labels.push(tok.to_string());
            id
        };
        let u = intern(a);
        let w = intern(b);
        if u == w {
            loops_dropped += 1;
            continue;
        }
        let key = if directed { (u, w) } else { (u.min(w), u.max(w)) };
        if !seen.insert(key) {
            dupes_dropped += 1;
            continue;
        }
        kept.push(key);
    }
    if kept.is_empty() {
        return Err(IoError::EmptyGraph);
    }
    let n = labels.len();
    let g = if directed {
        Graph::directed(n, &kept)
    } else {
        Graph::undirected(n, &kept)
    }
    .expect("loops and duplicates were filtered");
    Ok((g, ParseStats { labels, loops_dropped, dupes_dropped }))
}

/// Writes a graph as a plain edge list over node ids, one edge per line,
/// with a comment header naming the size.
pub fn write_edge_list(path: &Path, g: &Graph) -> Result<(), IoError> {
    let out = std::io::BufWriter::new(std::fs::File::create(path)?);
    write_edge_list_writer(out, g)
}

/// [`write_edge_list`] to any writer.
pub fn write_edge_list_writer<W: std::io::Write>(mut out: W, g: &Graph) -> Result<(), IoError> {
    writeln!(
        out,
        "% {} nodes={} edges={}",
        if g.is_directed() { "directed" } else { "undirected" },
        g.node_count(),
        g.edge_count()
    )?;
    for (u, w) in g.edges() {
        writeln!(out, "{u} {w}")?;
    }
    out.flush()?;
    Ok(())
}

/// Exact column set of the results table.
pub const RESULTS_HEADER: [&str; 11] = [
    "network",
    "target",
    "k",
    "algorithm",
    "t",
    "seed",
    "coverage_ordered",
    "coverage_unordered",
    "baseline",
    "ratio_to_exact",
    "wall_ms",
];

/// One solved experiment cell.
#[derive(Debug, Clone, PartialEq)]
pub struct ResultRow {
    /// Network name: a file stem or a generator spec.
    pub network: String,
    /// Target node id.
    pub target: usize,
    /// Edge budget.
    pub k: usize,
    /// Algorithm label, e.g. `greedy1`.
    pub algorithm: String,
    /// Batch size, for batch algorithms only.
    pub t: Option<usize>,
    /// Seed consumed by the algorithm, for seeded algorithms only.
    pub seed: Option<u64>,
    /// Patched coverage of the target, ordered pairs.
    pub coverage_ordered: u64,
    /// Same in unordered pairs (half the ordered count).
    pub coverage_unordered: u64,
    /// Coverage before any edges were added, ordered pairs.
    pub baseline: u64,
    /// Achieved gain over the exhaustive optimum's gain, if the optimum
    /// was feasible to compute. A no-gain optimum counts as matched.
    pub ratio_to_exact: Option<f64>,
    /// Wall-clock solve time. Zero when timing is suppressed for
    /// reproducible output.
    pub wall_ms: u64,
}

/// Writes rows to `path`, header first. Equal inputs produce identical
/// bytes.
pub fn write_results_csv(path: &Path, rows: &[ResultRow]) -> Result<(), IoError> {
    write_results_csv_writer(std::fs::File::create(path)?, rows)
}

/// [`write_results_csv`] to any writer.
pub fn write_results_csv_writer<W: std::io::Write>(
    out: W,
    rows: &[ResultRow],
) -> Result<(), IoError> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(RESULTS_HEADER)?;
    for r in rows {
        w.write_record([
            r.network.as_str(),
            &r.target.to_string(),
            &r.k.to_string(),
            r.algorithm.as_str(),
            &r.t.map_or(String::new(), |t| t.to_string()),
            &r.seed.map_or(String::new(), |s| s.to_string()),
            &r.coverage_ordered.to_string(),
            &r.coverage_unordered.to_string(),
            &r.baseline.to_string(),
            &r.ratio_to_exact.map_or(String::new(), |x| format!("{x:.6}")),
            &r.wall_ms.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// Reads a results table written by [`write_results_csv`].
pub fn read_results_csv(path: &Path) -> Result<Vec<ResultRow>, IoError> {
    let mut reader = csv::Reader::from_path(path)?;
    let header: Vec<String> = reader
        .headers()?
        .iter()
        .map(|s| s.to_string())
        .collect();
    if header != RESULTS_HEADER {
        return Err(IoError::BadHeader { found: header.join(",") });
    }
    let mut rows = Vec::new();
    for (idx, record) in reader.records().enumerate() {
        let record = record?;
        let line = idx + 2;
        let field = |i: usize| -> &str { record.get(i).unwrap_or("") };
        let parse_u64 = |i: usize| -> Result<u64, IoError> {
            field(i).parse().map_err(|e| IoError::BadField {
                line,
                msg: format!("{}: {e}", RESULTS_HEADER[i]),
            })
        };
        let parse_usize = |i: usize| -> Result<usize, IoError> {
            field(i).parse().map_err(|e| IoError::BadField {
                line,
                msg: format!("{}: {e}", RESULTS_HEADER[i]),
            })
        };
        let opt = |i: usize| -> Option<&str> {
            let s = field(i);
            if s.is_empty() {
                None
            } else {
                Some(s)
            }
        };
        rows.push(ResultRow {
            network: field(0).to_string(),
            target: parse_usize(1)?,
            k: parse_usize(2)?,
            algorithm: field(3).to_string(),
            t: opt(4)
                .map(|s| {
                    s.parse().map_err(|e| IoError::BadField {
                        line,
                        msg: format!("t: {e}"),
                    })
                })
                .transpose()?,
            seed: opt(5)
                .map(|s| {
                    s.parse().map_err(|e| IoError::BadField {
                        line,
                        msg: format!("seed: {e}"),
                    })
                })
                .transpose()?,
            coverage_ordered: parse_u64(6)?,
            coverage_unordered: parse_u64(7)?,
            baseline: parse_u64(8)?,
            ratio_to_exact: opt(9)
                .map(|s| {
                    s.parse().map_err(|e| IoError::BadField {
                        line,
                        msg: format!("ratio_to_exact: {e}"),
                    })
                })
                .transpose()?,
            wall_ms: parse_u64(10)?,
        });
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Write;

    fn write_temp(content: &str) -> tempfile::NamedTempFile {
        let mut f = tempfile::NamedTempFile::new().unwrap();
        f.write_all(content.as_bytes()).unwrap();
        f
    }

    #[test]
    fn parses_labels_in_first_appearance_order() {
        let f = write_temp("alice bob\nbob carol\ncarol alice\n");
        let (g, stats) = read_edge_list(f.path(), false).unwrap();
        assert_eq!(stats.labels, vec!["alice", "bob", "carol"]);
        assert_eq!(g.node_count(), 3);
        assert_eq!(g.edge_count(), 3);
    }

    #[test]
    fn skips_comments_and_weight_columns() {
        let f = write_temp("% header\n# note\n\n1 2 0.75\n2 3\n");
        let (g, stats) = read_edge_list(f.path(), false).unwrap();
        assert_eq!(g.edge_count(), 2);
        assert_eq!(stats.labels, vec!["1", "2", "3"]);
        assert_eq!(stats.loops_dropped + stats.dupes_dropped, 0);
    }

    #[test]
    fn rejects_lines_with_too_many_tokens() {
        let f = write_temp("1 2\n1 2 0.5 extra\n");
        let err = read_edge_list(f.path(), false).unwrap_err();
        assert!(matches!(err, IoError::MalformedLine { line: 2, found: 4 }));
    }

    #[test]
    fn counts_dropped_loops_and_duplicates() {
        let f = write_temp("1 1\n1 2\n2 1\n1 2\n2 3\n");
        let (g, stats) = read_edge_list(f.path(), false).unwrap();
        assert_eq!(stats.loops_dropped, 1);
        assert_eq!(stats.dupes_dropped, 2, "2 1 repeats 1 2 when undirected");
        assert_eq!(g.edge_count(), 2);

        let f2 = write_temp("1 1\n1 2\n2 1\n1 2\n2 3\n");
        let (g2, stats2) = read_edge_list(f2.path(), true).unwrap();
        assert_eq!(stats2.dupes_dropped, 1, "2 1 is a distinct arc");
        assert_eq!(g2.edge_count(), 3);
    }

    #[test]
    fn rejects_malformed_and_empty_inputs() {
        let f = write_temp("1 2\nlonely\n");
        match read_edge_list(f.path(), false).unwrap_err() {
            IoError::MalformedLine { line, found } => {
                assert_eq!(line, 2);
                assert_eq!(found, 1);
            }
            other => panic!("wrong error: {other}"),
        }
        let f2 = write_temp("% only comments\n\n");
        assert!(matches!(
            read_edge_list(f2.path(), false).unwrap_err(),
            IoError::EmptyGraph
        ));
        let f3 = write_temp("1 1\n2 2\n");
        assert!(matches!(
            read_edge_list(f3.path(), false).unwrap_err(),
            IoError::EmptyGraph
        ));
    }

    #[test]
    fn edge_list_round_trip() {
        let g = Graph::undirected(5, &[(0, 1), (1, 2), (2, 3), (3, 4), (0, 4)]).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("ring.txt");
        write_edge_list(&path, &g).unwrap();
        let (back, stats) = read_edge_list(&path, false).unwrap();
        assert_eq!(back.edge_count(), g.edge_count());
        assert_eq!(back.node_count(), g.node_count());
        assert_eq!(stats.loops_dropped + stats.dupes_dropped, 0);
    }

    fn sample_rows() -> Vec<ResultRow> {
        vec![
            ResultRow {
                network: "ba:n=50,m=2,seed=7".into(),
                target: 3,
                k: 2,
                algorithm: "greedy1".into(),
                t: Some(2),
                seed: None,
                coverage_ordered: 120,
                coverage_unordered: 60,
                baseline: 14,
                ratio_to_exact: Some(0.95),
                wall_ms: 0,
            },
            ResultRow {
                network: "karate".into(),
                target: 11,
                k: 4,
                algorithm: "random".into(),
                t: None,
                seed: Some(99),
                coverage_ordered: 40,
                coverage_unordered: 20,
                baseline: 40,
                ratio_to_exact: None,
                wall_ms: 3,
            },
        ]
    }

    #[test]
    fn results_csv_round_trip_and_header() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("results.csv");
        let rows = sample_rows();
        write_results_csv(&path, &rows).unwrap();
        let text = std::fs::read_to_string(&path).unwrap();
        let first = text.lines().next().unwrap();
        assert_eq!(
            first,
            "network,target,k,algorithm,t,seed,coverage_ordered,coverage_unordered,baseline,ratio_to_exact,wall_ms"
        );
        assert!(
            text.lines().nth(1).unwrap().starts_with("\"ba:n=50,m=2,seed=7\","),
            "generator specs with commas must be quoted"
        );
        assert!(text.contains("0.950000"), "ratios print with six decimals");
        let back = read_results_csv(&path).unwrap();
        assert_eq!(back, rows);
    }

    #[test]
    fn results_csv_is_byte_deterministic() {
        let dir = tempfile::tempdir().unwrap();
        let a = dir.path().join("a.csv");
        let b = dir.path().join("b.csv");
        write_results_csv(&a, &sample_rows()).unwrap();
        write_results_csv(&b, &sample_rows()).unwrap();
        assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    }

    #[test]
    fn results_csv_rejects_foreign_headers() {
        let f = write_temp("a,b,c\n1,2,3\n");
        assert!(matches!(
            read_results_csv(f.path()).unwrap_err(),
            IoError::BadHeader { .. }
        ));
    }

    #[test]
    fn bundled_karate_club_network_parses() {
        let path = std::path::Path::new(env!("CARGO_MANIFEST_DIR"))
            .join("../../data/karate.txt");
        let (g, stats) = read_edge_list(&path, false).unwrap();
        assert_eq!(g.node_count(), 34);
        assert_eq!(g.edge_count(), 78);
        assert_eq!(stats.loops_dropped + stats.dupes_dropped, 0);
        let degree_of = |label: &str| {
            let id = stats.labels.iter().position(|l| l == label).unwrap();
            g.neighbors(id).len()
        };
        assert_eq!(degree_of("34"), 17, "instructor hub");
        assert_eq!(degree_of("1"), 16, "president hub");
        assert_eq!(degree_of("12"), 1, "the lone pendant");
    }
}
