//! Text formats: the graph format (`p graph <n> <m>` header, `e <u> <v>`
//! lines, 0-based ids), DIMACS CNF, and the JSON instance document used by
//! the CLI. Parsing rejects malformed input with the offending line number;
//! serialization is canonical so round trips are bit-exact.

use serde::{Deserialize, Serialize};

use crate::error::{CoreError, Result};
use crate::graph::{Graph, VertexSet};
use crate::reductions::CnfFormula;

pub fn parse_graph(text: &str) -> Result<Graph> {
    let mut graph: Option<Graph> = None;
    let mut seen_edges = 0usize;
    let mut declared_edges = 0usize;
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('c') {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        match fields[0] {
            "p" => {
                if graph.is_some() {
                    return Err(CoreError::Parse {
                        line: line_no,
                        reason: "duplicate header".into(),
                    });
                }
                if fields.len() != 4 || fields[1] != "graph" {
                    return Err(CoreError::Parse {
                        line: line_no,
                        reason: "expected `p graph <n> <m>`".into(),
                    });
                }
                let n = fields[2].parse::<usize>().map_err(|_| CoreError::Parse {
                    line: line_no,
                    reason: "bad vertex count".into(),
                })?;
                declared_edges = fields[3].parse::<usize>().map_err(|_| CoreError::Parse {
                    line: line_no,
                    reason: "bad edge count".into(),
                })?;
                graph = Some(Graph::new(n));
            }
            "e" => {
                let g = graph.as_mut().ok_or(CoreError::Parse {
                    line: line_no,
                    reason: "edge before header".into(),
                })?;
                if fields.len() != 3 {
                    return Err(CoreError::Parse {
                        line: line_no,
                        reason: "expected `e <u> <v>`".into(),
                    });
                }
                let u = fields[1].parse::<usize>().map_err(|_| CoreError::Parse {
                    line: line_no,
                    reason: "bad endpoint".into(),
                })?;
                let v = fields[2].parse::<usize>().map_err(|_| CoreError::Parse {
                    line: line_no,
                    reason: "bad endpoint".into(),
                })?;
                g.add_edge(u, v).map_err(|e| CoreError::Parse {
                    line: line_no,
                    reason: e.to_string(),
                })?;
                seen_edges += 1;
            }
            other => {
                return Err(CoreError::Parse {
                    line: line_no,
                    reason: format!("unknown record `{other}`"),
                });
            }
        }
    }
    let g = graph.ok_or(CoreError::Parse {
        line: 0,
        reason: "missing header".into(),
    })?;
    if seen_edges != declared_edges {
        return Err(CoreError::Parse {
            line: 0,
            reason: format!("header declares {declared_edges} edges, found {seen_edges}"),
        });
    }
    Ok(g)
}

pub fn serialize_graph(g: &Graph) -> String {
    let mut out = format!("p graph {} {}\n", g.n(), g.m());
    for (u, v) in g.edges() {
        out.push_str(&format!("e {u} {v}\n"));
    }
    out
}

/// Parses DIMACS CNF: `p cnf <n> <m>`, clause lines of literals terminated
/// by `0` (possibly spanning lines). Empty clauses are rejected.
pub fn parse_cnf(text: &str) -> Result<CnfFormula> {
    let mut header: Option<(usize, usize)> = None;
    let mut clauses: Vec<Vec<i64>> = Vec::new();
    let mut current: Vec<i64> = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('c') {
            continue;
        }
        if line.starts_with('p') {
            let fields: Vec<&str> = line.split_whitespace().collect();
            if header.is_some() || fields.len() != 4 || fields[1] != "cnf" {
                return Err(CoreError::Parse {
                    line: line_no,
                    reason: "expected a single `p cnf <n> <m>` header".into(),
                });
            }
            let n = fields[2].parse().map_err(|_| CoreError::Parse {
                line: line_no,
                reason: "bad variable count".into(),
            })?;
            let m = fields[3].parse().map_err(|_| CoreError::Parse {
                line: line_no,
                reason: "bad clause count".into(),
            })?;
            header = Some((n, m));
            continue;
        }
        if header.is_none() {
            return Err(CoreError::Parse {
                line: line_no,
                reason: "clause before header".into(),
            });
        }
        for tok in line.split_whitespace() {
            let lit: i64 = tok.parse().map_err(|_| CoreError::Parse {
                line: line_no,
                reason: format!("bad literal `{tok}`"),
            })?;
            if lit == 0 {
                if current.is_empty() {
                    return Err(CoreError::Parse {
                        line: line_no,
                        reason: "empty clause".into(),
                    });
                }
                clauses.push(std::mem::take(&mut current));
            } else {
                current.push(lit);
            }
        }
    }
    let (n, m) = header.ok_or(CoreError::Parse {
        line: 0,
        reason: "missing header".into(),
    })?;
    if !current.is_empty() {
        return Err(CoreError::Parse {
            line: 0,
            reason: "unterminated clause".into(),
        });
    }
    if clauses.len() != m {
        return Err(CoreError::Parse {
            line: 0,
            reason: format!("header declares {m} clauses, found {}", clauses.len()),
        });
    }
    CnfFormula::new(n, clauses).map_err(|e| CoreError::Parse {
        line: 0,
        reason: e.to_string(),
    })
}

pub fn serialize_cnf(phi: &CnfFormula) -> String {
    let mut out = format!("p cnf {} {}\n", phi.num_vars, phi.num_clauses());
    for clause in &phi.clauses {
        for lit in clause {
            out.push_str(&format!("{lit} "));
        }
        out.push_str("0\n");
    }
    out
}

/// JSON-serializable instance bundle: the graph is embedded in its text
/// format so the document round-trips bit-exactly.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InstanceDocument {
    pub graph: String,
    pub x: Vec<usize>,
    pub k: usize,
    pub t: usize,
    pub lambda: usize,
    #[serde(default, skip_serializing_if = "serde_json::Map::is_empty")]
    pub metadata: serde_json::Map<String, serde_json::Value>,
}

impl InstanceDocument {
    pub fn new(
        graph: &Graph,
        x: &VertexSet,
        k: usize,
        t: usize,
        lambda: usize,
    ) -> InstanceDocument {
        InstanceDocument {
            graph: serialize_graph(graph),
            x: x.iter().collect(),
            k,
            t,
            lambda,
            metadata: serde_json::Map::new(),
        }
    }

    pub fn parse_graph(&self) -> Result<Graph> {
        let g = parse_graph(&self.graph)?;
        for &v in &self.x {
            if v >= g.n() {
                return Err(CoreError::Parse {
                    line: 0,
                    reason: format!("modulator vertex {v} out of range"),
                });
            }
        }
        Ok(g)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("document serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| CoreError::Parse {
            line: 0,
            reason: e.to_string(),
        })
    }
}
