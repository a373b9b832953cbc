//! Text formats for observation graphs, community labels and templates.
//!
//! All formats are UTF-8, one record per line, whitespace separated, with
//! `#` starting a comment line:
//!
//! * edge list: `u v` or `u v w` (non-negative integer vertex ids)
//! * labels: `u c`
//! * template: `k` rows of `k` reals

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::partition::GroundTruth;
use crate::template::TemplateModel;

/// A graph read from disk together with the original id of each vertex.
/// Vertices are numbered by ascending original id.
#[derive(Debug, Clone)]
pub struct LoadedGraph {
    pub graph: Graph,
    pub vertex_ids: Vec<u64>,
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::io(path, e))
}

fn records(text: &str) -> impl Iterator<Item = (usize, Vec<&str>)> {
    text.lines().enumerate().filter_map(|(i, line)| {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            None
        } else {
            Some((i + 1, line.split_whitespace().collect()))
        }
    })
}

fn parse_field<T: std::str::FromStr>(path: &Path, line: usize, field: &str, what: &str) -> Result<T> {
    field.parse().map_err(|_| Error::Parse {
        path: path.to_path_buf(),
        line,
        msg: format!("cannot parse {what} from `{field}`"),
    })
}

/// Reads an edge list into a simple undirected graph.
///
/// Self-loops are dropped (their vertex is still kept). Each unordered pair
/// becomes a single edge. With `directed_input` the edge has unit weight if it
/// appears in either direction; otherwise the optional weight column is used,
/// taking the largest weight listed for the pair.
pub fn load_edge_list(path: impl AsRef<Path>, directed_input: bool) -> Result<LoadedGraph> {
    let path = path.as_ref();
    parse_edge_list(&read(path)?, path, directed_input)
}

pub(crate) fn parse_edge_list(text: &str, path: &Path, directed_input: bool) -> Result<LoadedGraph> {
    let mut ids = BTreeSet::new();
    let mut pairs: BTreeMap<(u64, u64), f64> = BTreeMap::new();
    for (line, fields) in records(text) {
        if fields.len() < 2 || fields.len() > 3 {
            return Err(Error::Parse {
                path: path.to_path_buf(),
                line,
                msg: format!("expected `u v` or `u v w`, found {} fields", fields.len()),
            });
        }
        let u: u64 = parse_field(path, line, fields[0], "vertex id")?;
        let v: u64 = parse_field(path, line, fields[1], "vertex id")?;
        let w: f64 = match fields.get(2) {
            Some(f) => parse_field(path, line, f, "edge weight")?,
            None => 1.0,
        };
        if !w.is_finite() {
            return Err(Error::Parse {
                path: path.to_path_buf(),
                line,
                msg: format!("edge weight `{w}` is not finite"),
            });
        }
        ids.insert(u);
        ids.insert(v);
        if u == v || w == 0.0 {
            continue;
        }
        let w = if directed_input { 1.0 } else { w };
        let entry = pairs.entry((u.min(v), u.max(v))).or_insert(w);
        *entry = entry.max(w);
    }
    if ids.is_empty() {
        return Err(Error::input(format!("{} contains no edges", path.display())));
    }
    let vertex_ids: Vec<u64> = ids.into_iter().collect();
    let index: BTreeMap<u64, usize> = vertex_ids.iter().enumerate().map(|(i, &id)| (id, i)).collect();
    let n = vertex_ids.len();
    let mut a = DMatrix::zeros(n, n);
    for ((u, v), w) in pairs {
        let (i, j) = (index[&u], index[&v]);
        a[(i, j)] = w;
        a[(j, i)] = w;
    }
    Ok(LoadedGraph {
        graph: Graph::from_adjacency(a)?,
        vertex_ids,
    })
}

/// Reads `vertex community` lines for vertices `0..n`.
pub fn load_labels(path: impl AsRef<Path>, n: usize) -> Result<GroundTruth> {
    let ids: Vec<u64> = (0..n as u64).collect();
    load_labels_for(path, &ids)
}

/// Reads `vertex community` lines where vertex ids are the original ids of a
/// [`LoadedGraph`]. Communities are renumbered `0..k` by ascending original id.
pub fn load_labels_for(path: impl AsRef<Path>, vertex_ids: &[u64]) -> Result<GroundTruth> {
    let path = path.as_ref();
    parse_labels(&read(path)?, path, vertex_ids)
}

pub(crate) fn parse_labels(text: &str, path: &Path, vertex_ids: &[u64]) -> Result<GroundTruth> {
    let index: BTreeMap<u64, usize> = vertex_ids.iter().enumerate().map(|(i, &id)| (id, i)).collect();
    let mut raw: Vec<Option<i64>> = vec![None; vertex_ids.len()];
    for (line, fields) in records(text) {
        if fields.len() != 2 {
            return Err(Error::Parse {
                path: path.to_path_buf(),
                line,
                msg: format!("expected `vertex community`, found {} fields", fields.len()),
            });
        }
        let u: u64 = parse_field(path, line, fields[0], "vertex id")?;
        let c: i64 = parse_field(path, line, fields[1], "community id")?;
        let Some(&i) = index.get(&u) else {
            return Err(Error::Parse {
                path: path.to_path_buf(),
                line,
                msg: format!("vertex {u} is not in the graph"),
            });
        };
        if raw[i].replace(c).is_some() {
            return Err(Error::Parse {
                path: path.to_path_buf(),
                line,
                msg: format!("vertex {u} is labelled more than once"),
            });
        }
    }
    let missing: Vec<String> = raw
        .iter()
        .zip(vertex_ids)
        .filter(|(l, _)| l.is_none())
        .map(|(_, id)| id.to_string())
        .collect();
    if !missing.is_empty() {
        return Err(Error::input(format!("vertices without a label: {}", missing.join(", "))));
    }
    let communities: BTreeSet<i64> = raw.iter().flatten().copied().collect();
    let remap: BTreeMap<i64, usize> = communities.iter().enumerate().map(|(j, &c)| (c, j)).collect();
    let labels = raw.into_iter().map(|c| remap[&c.expect("checked above")]).collect();
    GroundTruth::new(labels, remap.len())
}

/// Block sums of the adjacency, `A_M = Bᵀ A_O B` for the indicator `B` of `gt`.
///
/// The diagonal counts intra-community edges twice (once per direction) and
/// each off-diagonal entry is the total weight between the two communities.
pub fn model_from_ground_truth(g: &Graph, gt: &GroundTruth) -> Result<TemplateModel> {
    if gt.n() != g.n() {
        return Err(Error::input(format!(
            "ground truth covers {} vertices but the graph has {}",
            gt.n(),
            g.n()
        )));
    }
    let k = gt.k();
    let labels = gt.labels();
    let a = g.adjacency();
    let mut m = DMatrix::zeros(k, k);
    for j in 0..g.n() {
        for i in 0..g.n() {
            let w = a[(i, j)];
            if w != 0.0 {
                m[(labels[i], labels[j])] += w;
            }
        }
    }
    TemplateModel::new(m)
}

/// Canonical form of a graph: sorted `u v w` lines with `u <= v`, LF terminated.
pub fn canonical_edge_list(g: &Graph) -> String {
    let mut out = String::new();
    for (u, v, w) in g.edges() {
        writeln!(out, "{u} {v} {w}").expect("writing to a String cannot fail");
    }
    out
}

pub fn write_edge_list(g: &Graph, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    fs::write(path, canonical_edge_list(g)).map_err(|e| Error::io(path, e))
}

/// Reads a `k × k` template written as `k` whitespace-separated rows.
pub fn load_template(path: impl AsRef<Path>) -> Result<TemplateModel> {
    let path = path.as_ref();
    let text = read(path)?;
    let mut rows: Vec<Vec<f64>> = Vec::new();
    for (line, fields) in records(&text) {
        let row = fields
            .iter()
            .map(|f| parse_field(path, line, f, "template weight"))
            .collect::<Result<Vec<f64>>>()?;
        if let Some(first) = rows.first() {
            if first.len() != row.len() {
                return Err(Error::Parse {
                    path: path.to_path_buf(),
                    line,
                    msg: format!("expected {} weights, found {}", first.len(), row.len()),
                });
            }
        }
        rows.push(row);
    }
    let k = rows.len();
    if k == 0 || rows[0].len() != k {
        return Err(Error::input(format!("{} does not hold a square template", path.display())));
    }
    TemplateModel::new(DMatrix::from_fn(k, k, |i, j| rows[i][j]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::build_graph;
    use crate::metrics::indicator_matrix;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn parse(text: &str, directed: bool) -> Result<LoadedGraph> {
        parse_edge_list(text, Path::new("test.txt"), directed)
    }

    #[test]
    fn directed_pair_collapses() {
        let g = parse("0 1\n1 0\n", true).unwrap();
        assert_eq!(g.graph.n(), 2);
        assert_eq!(g.graph.edges(), vec![(0, 1, 1.0)]);
    }

    #[test]
    fn self_loop_dropped_vertex_kept() {
        let g = parse("0 0\n0 1\n", false).unwrap();
        assert_eq!(g.graph.edges(), vec![(0, 1, 1.0)]);
        let g = parse("# comment\n5 5\n3 9\n", false).unwrap();
        assert_eq!(g.vertex_ids, vec![3, 5, 9]);
        assert_eq!(g.graph.edges(), vec![(0, 2, 1.0)]);
    }

    #[test]
    fn weights_and_directed_unit_edges() {
        let g = parse("0 1 2.5\n1 0 0.5\n", false).unwrap();
        assert_eq!(g.graph.edges(), vec![(0, 1, 2.5)]);
        let g = parse("0 1 2.5\n", true).unwrap();
        assert_eq!(g.graph.edges(), vec![(0, 1, 1.0)]);
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        match parse("0 1\n\n1 x\n", false) {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 3),
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(parse("0 1 2 3\n", false), Err(Error::Parse { line: 1, .. })));
        assert!(matches!(parse("# nothing\n", false), Err(Error::Input(_))));
        assert!(matches!(parse("", false), Err(Error::Input(_))));
    }

    #[test]
    fn line_order_does_not_matter() {
        let a = parse("0 1\n2 3\n1 2\n3 0\n", true).unwrap();
        let b = parse("3 0\n1 2\n0 1\n2 3\n", true).unwrap();
        assert_eq!(a.graph, b.graph);
        assert_eq!(canonical_edge_list(&a.graph), "0 1 1\n0 3 1\n1 2 1\n2 3 1\n");
    }

    #[test]
    fn labels() {
        let gt = parse_labels("0 0\n1 1", Path::new("l"), &[0, 1]).unwrap();
        assert_eq!(gt.labels(), &[0, 1]);
        let gt = parse_labels("9 7\n3 -2\n5 7\n", Path::new("l"), &[3, 5, 9]).unwrap();
        assert_eq!(gt.labels(), &[0, 1, 1]);
        assert_eq!(gt.k(), 2);
        match parse_labels("0 0\n", Path::new("l"), &[0, 1, 2]) {
            Err(Error::Input(msg)) => assert!(msg.contains("1, 2")),
            other => panic!("unexpected {other:?}"),
        }
        assert!(parse_labels("0 0\n0 1\n", Path::new("l"), &[0]).is_err());
        assert!(parse_labels("4 0\n", Path::new("l"), &[0]).is_err());
    }

    #[test]
    fn model_from_truth_examples() {
        let tri = build_graph(6, &[(0, 1, 1.0), (1, 2, 1.0), (0, 2, 1.0), (3, 4, 1.0), (4, 5, 1.0), (3, 5, 1.0)]).unwrap();
        let gt = GroundTruth::from_sizes(&[3, 3]).unwrap();
        assert_eq!(model_from_ground_truth(&tri, &gt).unwrap().weights(), &DMatrix::from_row_slice(2, 2, &[6.0, 0.0, 0.0, 6.0]));
        let cross = build_graph(2, &[(0, 1, 1.0)]).unwrap();
        let gt = GroundTruth::from_sizes(&[1, 1]).unwrap();
        assert_eq!(model_from_ground_truth(&cross, &gt).unwrap().weights(), &DMatrix::from_row_slice(2, 2, &[0.0, 1.0, 1.0, 0.0]));
        let empty = build_graph(4, &[]).unwrap();
        let gt = GroundTruth::from_sizes(&[2, 2]).unwrap();
        assert_eq!(model_from_ground_truth(&empty, &gt).unwrap().weights(), &DMatrix::zeros(2, 2));
    }

    #[test]
    fn model_from_truth_equals_indicator_contraction() {
        let mut r = ChaCha8Rng::seed_from_u64(8);
        for _ in 0..20 {
            let n = r.random_range(5..20);
            let k = r.random_range(1..5).min(n);
            let mut edges = Vec::new();
            for i in 0..n {
                for j in i + 1..n {
                    if r.random::<f64>() < 0.3 {
                        edges.push((i, j, 1.0));
                    }
                }
            }
            let g = build_graph(n, &edges).unwrap();
            let mut labels: Vec<usize> = (0..n).map(|_| r.random_range(0..k)).collect();
            for (j, l) in labels.iter_mut().take(k).enumerate() {
                *l = j;
            }
            let gt = GroundTruth::new(labels.clone(), k).unwrap();
            let b = indicator_matrix(&labels, k).unwrap();
            let oracle = b.transpose() * g.adjacency() * &b;
            assert_eq!(model_from_ground_truth(&g, &gt).unwrap().weights(), &oracle);
        }
    }

    #[test]
    fn template_files() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("m.txt");
        fs::write(&p, "# model\n6 0\n0 6\n").unwrap();
        assert_eq!(load_template(&p).unwrap().weights(), &DMatrix::from_row_slice(2, 2, &[6.0, 0.0, 0.0, 6.0]));
        fs::write(&p, "1 2\n3\n").unwrap();
        assert!(matches!(load_template(&p), Err(Error::Parse { line: 2, .. })));
        fs::write(&p, "1 2\n").unwrap();
        assert!(load_template(&p).is_err());
    }

    #[test]
    fn missing_file_is_io_error() {
        let err = load_edge_list("/nonexistent/edges.txt", false).unwrap_err();
        assert!(matches!(err, Error::Io { .. }));
        assert_eq!(err.exit_code(), 1);
    }
}
