use std::collections::HashMap;
use std::fs::File;
use std::io::{BufRead, BufReader, Read};
use std::path::Path;

use flate2::read::GzDecoder;

use crate::error::{Error, Result};
use crate::objectives::WeightedGraph;

fn open_maybe_gz(path: &Path) -> Result<Box<dyn Read>> {
    let file = File::open(path)?;
    if path.extension().is_some_and(|e| e == "gz") {
        Ok(Box::new(GzDecoder::new(file)))
    } else {
        Ok(Box::new(file))
    }
}

fn parse_err(path: &Path, line: usize, what: impl Into<String>) -> Error {
    Error::Parse {
        path: path.display().to_string(),
        line,
        what: what.into(),
    }
}

/// Load an edge list of `u,v[,w]` lines (weight defaults to 1.0). Lines
/// starting with '#' are comments. Vertex ids are remapped densely in order
/// of first appearance; duplicate edges have their weights summed.
pub fn load_graph_csv(path: impl AsRef<Path>) -> Result<WeightedGraph> {
    let path = path.as_ref();
    let reader = BufReader::new(open_maybe_gz(path)?);
    let mut remap: HashMap<u64, usize> = HashMap::new();
    let mut order: Vec<u64> = Vec::new();
    let mut weights: HashMap<(usize, usize), f64> = HashMap::new();
    for (ln, line) in reader.lines().enumerate() {
        let ln = ln + 1;
        let line = line?;
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut parts = line.split(',').map(str::trim);
        let mut field = |name: &str| {
            parts
                .next()
                .filter(|s| !s.is_empty())
                .ok_or_else(|| parse_err(path, ln, format!("missing {name}")))
        };
        let u: u64 = field("source id")?
            .parse()
            .map_err(|e| parse_err(path, ln, format!("source id: {e}")))?;
        let v: u64 = field("target id")?
            .parse()
            .map_err(|e| parse_err(path, ln, format!("target id: {e}")))?;
        let w: f64 = match parts.next().filter(|s| !s.is_empty()) {
            Some(s) => s
                .parse()
                .map_err(|e| parse_err(path, ln, format!("weight: {e}")))?,
            None => 1.0,
        };
        if u == v {
            return Err(parse_err(path, ln, format!("self-loop at vertex {u}")));
        }
        if !w.is_finite() || w < 0.0 {
            return Err(parse_err(path, ln, format!("weight {w} out of range")));
        }
        let mut id = |raw: u64| {
            *remap.entry(raw).or_insert_with(|| {
                order.push(raw);
                order.len() - 1
            })
        };
        let (a, b) = (id(u), id(v));
        *weights.entry((a.min(b), a.max(b))).or_insert(0.0) += w;
    }
    let mut edges: Vec<(usize, usize, f64)> =
        weights.into_iter().map(|((u, v), w)| (u, v, w)).collect();
    edges.sort_unstable_by(|a, b| (a.0, a.1).cmp(&(b.0, b.1)));
    WeightedGraph::new(order.len(), edges)
}

/// Tag matrix loaded from `movie_id,tag_id,score` rows. Both id spaces are
/// taken as dense (sized by the largest id seen); missing entries are 0.
/// Scores outside [0,1] are clamped, with the number of clamps reported back.
#[derive(Debug)]
pub struct TagMatrix {
    pub tags: Vec<Vec<f64>>,
    pub clamped: u64,
}

pub fn load_tag_matrix(path: impl AsRef<Path>) -> Result<TagMatrix> {
    let path = path.as_ref();
    let reader = BufReader::new(open_maybe_gz(path)?);
    let mut rows: Vec<(usize, usize, f64)> = Vec::new();
    let mut movies = 0usize;
    let mut tags = 0usize;
    for (ln, line) in reader.lines().enumerate() {
        let ln = ln + 1;
        let line = line?;
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut parts = line.split(',').map(str::trim);
        let mut field = |name: &str| {
            parts
                .next()
                .filter(|s| !s.is_empty())
                .ok_or_else(|| parse_err(path, ln, format!("missing {name}")))
        };
        let movie: usize = field("movie id")?
            .parse()
            .map_err(|e| parse_err(path, ln, format!("movie id: {e}")))?;
        let tag: usize = field("tag id")?
            .parse()
            .map_err(|e| parse_err(path, ln, format!("tag id: {e}")))?;
        let score: f64 = field("score")?
            .parse()
            .map_err(|e| parse_err(path, ln, format!("score: {e}")))?;
        if !score.is_finite() {
            return Err(parse_err(path, ln, "score must be finite"));
        }
        movies = movies.max(movie + 1);
        tags = tags.max(tag + 1);
        rows.push((movie, tag, score));
    }
    if rows.is_empty() {
        return Err(Error::EmptyInstance {
            what: format!("{} holds no tag rows", path.display()),
        });
    }
    let mut matrix = vec![vec![0.0; tags]; movies];
    let mut clamped = 0u64;
    for (movie, tag, score) in rows {
        let s = score.clamp(0.0, 1.0);
        if s != score {
            clamped += 1;
        }
        matrix[movie][tag] = s;
    }
    Ok(TagMatrix {
        tags: matrix,
        clamped,
    })
}
