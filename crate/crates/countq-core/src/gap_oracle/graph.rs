use std::collections::BTreeSet;
use std::fmt;

use itertools::Itertools;

use crate::error::{Error, Result};

/// A simple undirected graph: vertex count plus a set of unordered edges,
/// no self-loops.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    v: usize,
    edges: BTreeSet<(usize, usize)>,
}

impl Graph {
    pub fn new(v: usize) -> Result<Self> {
        if v == 0 {
            return Err(Error::Invalid("graph needs at least one vertex".into()));
        }
        Ok(Graph {
            v,
            edges: BTreeSet::new(),
        })
    }

    pub fn with_edges(v: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut g = Graph::new(v)?;
        for &(a, b) in edges {
            g.add_edge(a, b)?;
        }
        Ok(g)
    }

    pub fn add_edge(&mut self, a: usize, b: usize) -> Result<()> {
        if a == b {
            return Err(Error::Invalid(format!("self-loop at vertex {a}")));
        }
        if a >= self.v || b >= self.v {
            return Err(Error::Invalid(format!(
                "edge ({a},{b}) references a vertex >= {}",
                self.v
            )));
        }
        let e = (a.min(b), a.max(b));
        if !self.edges.insert(e) {
            return Err(Error::Invalid(format!("duplicate edge ({},{})", e.0, e.1)));
        }
        Ok(())
    }

    pub fn vertex_count(&self) -> usize {
        self.v
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.edges.iter().copied()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        self.edges.contains(&(a.min(b), a.max(b)))
    }

    /// The graph with vertices renamed by `perm` (vertex `i` becomes
    /// `perm[i]`).
    pub fn relabel(&self, perm: &[usize]) -> Result<Graph> {
        if perm.len() != self.v {
            return Err(Error::Invalid("permutation length mismatch".into()));
        }
        let mut g = Graph::new(self.v)?;
        for (a, b) in self.edges() {
            g.add_edge(perm[a], perm[b])?;
        }
        Ok(g)
    }
}

impl fmt::Display for Graph {
    /// File form: vertex count, then one `u v` line per edge.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}", self.v)?;
        for (a, b) in &self.edges {
            writeln!(f, "{a} {b}")?;
        }
        Ok(())
    }
}

/// Parses the graph file format: first line vertex count, then one `u v`
/// edge per line. `#` comments and blank lines are allowed.
pub fn parse_graph(text: &str) -> Result<Graph> {
    let mut graph: Option<Graph> = None;
    for (lineno, raw) in text.lines().enumerate() {
        let lineno = lineno + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        match &mut graph {
            None => {
                let v: usize = line
                    .parse()
                    .map_err(|_| Error::parse(lineno, "expected a vertex count"))?;
                graph = Some(Graph::new(v).map_err(|e| Error::parse(lineno, e.to_string()))?);
            }
            Some(g) => {
                let mut tok = line.split_whitespace();
                let a: usize = tok
                    .next()
                    .and_then(|t| t.parse().ok())
                    .ok_or_else(|| Error::parse(lineno, "expected `u v`"))?;
                let b: usize = tok
                    .next()
                    .and_then(|t| t.parse().ok())
                    .ok_or_else(|| Error::parse(lineno, "expected `u v`"))?;
                if tok.next().is_some() {
                    return Err(Error::parse(lineno, "trailing tokens after edge"));
                }
                g.add_edge(a, b)
                    .map_err(|e| Error::parse(lineno, e.to_string()))?;
            }
        }
    }
    graph.ok_or_else(|| Error::parse(0, "empty graph file"))
}

/// Whether `perm` maps `g1` exactly onto `g2` (same vertex count assumed).
fn maps_onto(g1: &Graph, g2: &Graph, perm: &[usize]) -> bool {
    if g1.edge_count() != g2.edge_count() {
        return false;
    }
    g1.edges()
        .all(|(a, b)| g2.has_edge(perm[a], perm[b]))
}

/// Number of isomorphisms g1 -> g2 by exhaustive permutation search.
pub fn count_isomorphisms(g1: &Graph, g2: &Graph) -> u64 {
    if g1.vertex_count() != g2.vertex_count() {
        return 0;
    }
    (0..g1.vertex_count())
        .permutations(g1.vertex_count())
        .filter(|perm| maps_onto(g1, g2, perm))
        .count() as u64
}

/// Number of automorphisms of `g`.
pub fn count_automorphisms(g: &Graph) -> u64 {
    count_isomorphisms(g, g)
}

pub fn isomorphic(g1: &Graph, g2: &Graph) -> bool {
    g1.vertex_count() == g2.vertex_count() && count_isomorphisms(g1, g2) > 0
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path3() -> Graph {
        Graph::with_edges(3, &[(0, 1), (1, 2)]).unwrap()
    }

    fn triangle() -> Graph {
        Graph::with_edges(3, &[(0, 1), (1, 2), (0, 2)]).unwrap()
    }

    #[test]
    fn parse_and_print() {
        let g = parse_graph("3\n0 1\n1 2\n").unwrap();
        assert_eq!(g, path3());
        assert_eq!(parse_graph(&g.to_string()).unwrap(), g);
    }

    #[test]
    fn rejects_bad_edges() {
        assert!(parse_graph("3\n0 0\n").is_err());
        assert!(parse_graph("3\n0 5\n").is_err());
        assert!(parse_graph("3\n0 1\n1 0\n").is_err());
    }

    #[test]
    fn triangle_has_six_automorphisms() {
        assert_eq!(count_automorphisms(&triangle()), 6);
        assert_eq!(count_automorphisms(&path3()), 2);
        assert_eq!(count_isomorphisms(&triangle(), &path3()), 0);
    }

    #[test]
    fn relabeled_paths_are_isomorphic() {
        let other = Graph::with_edges(3, &[(0, 2), (1, 2)]).unwrap();
        assert_eq!(count_isomorphisms(&path3(), &other), 2);
        assert!(isomorphic(&path3(), &other));
    }
}
