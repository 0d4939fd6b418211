//! Graph file format.
//!
//! ```json
//! {"metric":{"type":"euclidean","points":[[0.0,0.0],[1.0,0.0]]},"edges":[[0,1]]}
//! {"metric":{"type":"matrix","d":[[0.0,1.0],[1.0,0.0]]},"edges":[[0,1]]}
//! ```
//!
//! Writers emit canonical form: edges as `u < v` pairs in lexicographic
//! order, compact JSON, trailing newline. Readers accept edges in any order
//! but reject structural problems, duplicate edges and metric violations
//! (asymmetry, negative or zero distances, non-finite entries).

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::metric::{MetricError, MetricGraph, MetricSpace};

#[derive(Debug, Error)]
pub enum IoError {
    #[error(transparent)]
    Metric(#[from] MetricError),
    #[error("failed to read or write {path}: {source}")]
    File {
        path: String,
        source: std::io::Error,
    },
    #[error("malformed graph JSON: {0}")]
    Json(#[from] serde_json::Error),
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
enum MetricJson {
    Euclidean { points: Vec<Vec<f64>> },
    Matrix { d: Vec<Vec<f64>> },
}

#[derive(Serialize, Deserialize)]
struct GraphJson {
    metric: MetricJson,
    edges: Vec<(usize, usize)>,
}

/// Parse and validate a graph from its JSON representation.
pub fn graph_from_json(text: &str) -> Result<MetricGraph, IoError> {
    let parsed: GraphJson = serde_json::from_str(text)?;
    let space = match parsed.metric {
        MetricJson::Euclidean { points } => MetricSpace::euclidean(points)?,
        MetricJson::Matrix { d } => MetricSpace::matrix(d)?,
    };
    let violations = space.validate(false);
    if !violations.is_empty() {
        let listed: Vec<String> = violations.iter().map(|v| v.to_string()).collect();
        return Err(MetricError::InvalidMetric(listed.join("; ")).into());
    }
    Ok(MetricGraph::new(space, parsed.edges)?)
}

/// Canonical JSON form of a graph (no trailing newline).
pub fn graph_to_json(graph: &MetricGraph) -> String {
    let metric = match graph.space() {
        MetricSpace::Euclidean { points } => MetricJson::Euclidean {
            points: points.clone(),
        },
        MetricSpace::Matrix { d } => MetricJson::Matrix { d: d.clone() },
    };
    let file = GraphJson {
        metric,
        edges: graph.edges().collect(),
    };
    serde_json::to_string(&file).expect("graph serialisation cannot fail")
}

pub fn load_graph(path: &Path) -> Result<MetricGraph, IoError> {
    let text = fs::read_to_string(path).map_err(|source| IoError::File {
        path: path.display().to_string(),
        source,
    })?;
    graph_from_json(&text)
}

pub fn save_graph(graph: &MetricGraph, path: &Path) -> Result<(), IoError> {
    let mut text = graph_to_json(graph);
    text.push('\n');
    fs::write(path, text).map_err(|source| IoError::File {
        path: path.display().to_string(),
        source,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn euclidean_round_trip_is_canonical() {
        let text = r#"{"metric":{"type":"euclidean","points":[[0.0,0.0],[1.0,0.0],[2.0,0.5]]},"edges":[[2,0],[1,2]]}"#;
        let graph = graph_from_json(text).unwrap();
        let canonical = graph_to_json(&graph);
        assert_eq!(
            canonical,
            r#"{"metric":{"type":"euclidean","points":[[0.0,0.0],[1.0,0.0],[2.0,0.5]]},"edges":[[0,2],[1,2]]}"#
        );
        // Reloading the canonical form reproduces it byte for byte.
        let again = graph_to_json(&graph_from_json(&canonical).unwrap());
        assert_eq!(again, canonical);
    }

    #[test]
    fn matrix_variant_parses() {
        let text = r#"{"metric":{"type":"matrix","d":[[0,2],[2,0]]},"edges":[]}"#;
        let graph = graph_from_json(text).unwrap();
        assert_eq!(graph.n(), 2);
        assert_eq!(graph.edge_len(0, 1), 2.0);
    }

    #[test]
    fn rejects_asymmetric_matrix() {
        let text = r#"{"metric":{"type":"matrix","d":[[0,1],[2,0]]},"edges":[]}"#;
        let err = graph_from_json(text).unwrap_err();
        assert!(err.to_string().contains("asymmetric"));
    }

    #[test]
    fn rejects_duplicate_points() {
        let text = r#"{"metric":{"type":"euclidean","points":[[1.0],[1.0]]},"edges":[]}"#;
        let err = graph_from_json(text).unwrap_err();
        assert!(err.to_string().contains("zero distance"));
    }

    #[test]
    fn rejects_duplicate_edges_after_canonicalisation() {
        let text =
            r#"{"metric":{"type":"euclidean","points":[[0.0],[1.0]]},"edges":[[0,1],[1,0]]}"#;
        assert!(graph_from_json(text).is_err());
    }

    #[test]
    fn float_precision_survives_round_trip() {
        let text = format!(
            r#"{{"metric":{{"type":"euclidean","points":[[0.1],[{}]]}},"edges":[]}}"#,
            std::f64::consts::PI
        );
        let graph = graph_from_json(&text).unwrap();
        let reparsed = graph_from_json(&graph_to_json(&graph)).unwrap();
        assert_eq!(reparsed.edge_len(0, 1), graph.edge_len(0, 1));
        assert_eq!(graph.edge_len(0, 1), std::f64::consts::PI - 0.1);
    }
}
