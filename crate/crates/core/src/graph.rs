//! Finite multigraphs with loops, plus the small-graph utilities the rest of
//! the pipeline needs: parsing, subdivision/dissolution, components, and
//! exhaustive isomorphism testing.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::budget::CapError;

/// Error while reading the edge-list format.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub line: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}: {}", self.line, self.message)
    }
}

/// A finite multigraph. Vertices are indices into a name table; parallel
/// edges and loops are permitted. Edge ids are positions in `edges`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    names: Vec<String>,
    edges: Vec<(u32, u32)>,
}

impl Graph {
    pub fn new() -> Self {
        Graph { names: Vec::new(), edges: Vec::new() }
    }

    /// Build from explicit vertex names and edges given as name pairs.
    pub fn from_edges(vertices: &[&str], edges: &[(&str, &str)]) -> Self {
        let mut g = Graph::new();
        for v in vertices {
            g.ensure_vertex(v);
        }
        for (u, v) in edges {
            let u = g.ensure_vertex(u);
            let v = g.ensure_vertex(v);
            g.edges.push((u, v));
        }
        g
    }

    fn ensure_vertex(&mut self, name: &str) -> u32 {
        if let Some(i) = self.names.iter().position(|n| n == name) {
            return i as u32;
        }
        self.names.push(name.to_string());
        (self.names.len() - 1) as u32
    }

    pub fn add_vertex(&mut self, name: &str) -> u32 {
        self.ensure_vertex(name)
    }

    pub fn add_edge(&mut self, u: u32, v: u32) -> u32 {
        assert!((u as usize) < self.names.len() && (v as usize) < self.names.len());
        self.edges.push((u, v));
        (self.edges.len() - 1) as u32
    }

    pub fn n_vertices(&self) -> usize {
        self.names.len()
    }

    pub fn n_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn vertex_name(&self, v: u32) -> &str {
        &self.names[v as usize]
    }

    pub fn edge(&self, e: u32) -> (u32, u32) {
        self.edges[e as usize]
    }

    pub fn edges(&self) -> &[(u32, u32)] {
        &self.edges
    }

    pub fn is_loop(&self, e: u32) -> bool {
        let (u, v) = self.edge(e);
        u == v
    }

    /// Degree with loops counted twice.
    pub fn degree(&self, v: u32) -> usize {
        self.edges
            .iter()
            .map(|&(a, b)| (a == v) as usize + (b == v) as usize)
            .sum()
    }

    pub fn incident_edges(&self, v: u32) -> Vec<u32> {
        (0..self.edges.len() as u32)
            .filter(|&e| {
                let (a, b) = self.edge(e);
                a == v || b == v
            })
            .collect()
    }

    pub fn is_isolated(&self, v: u32) -> bool {
        self.degree(v) == 0
    }

    /// Parse the edge-list format: `u v` per line declares an edge,
    /// `node u` an isolated vertex, `#` starts a comment. Duplicate `u v`
    /// lines create parallel edges. Vertex order is deterministic: sorted by
    /// name; edges keep declaration order.
    pub fn parse(text: &str) -> Result<Graph, ParseError> {
        let mut vertices: BTreeSet<String> = BTreeSet::new();
        let mut edge_names: Vec<(String, String)> = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let content = match raw.find('#') {
                Some(p) => &raw[..p],
                None => raw,
            };
            let tokens: Vec<&str> = content.split_whitespace().collect();
            if tokens.is_empty() {
                continue;
            }
            let ok_token = |t: &str| !t.is_empty() && t.chars().all(|c| c.is_ascii_alphanumeric());
            match tokens.as_slice() {
                ["node", u] => {
                    if !ok_token(u) {
                        return Err(ParseError { line, message: format!("bad vertex token {u:?}") });
                    }
                    vertices.insert((*u).to_string());
                }
                [u, v] => {
                    if !ok_token(u) || !ok_token(v) {
                        return Err(ParseError {
                            line,
                            message: format!("bad vertex token in edge {u:?} {v:?}"),
                        });
                    }
                    vertices.insert((*u).to_string());
                    vertices.insert((*v).to_string());
                    edge_names.push(((*u).to_string(), (*v).to_string()));
                }
                _ => {
                    return Err(ParseError {
                        line,
                        message: format!("expected `u v` or `node u`, got {:?}", content.trim()),
                    });
                }
            }
        }
        let names: Vec<String> = vertices.into_iter().collect();
        let index: BTreeMap<&str, u32> =
            names.iter().enumerate().map(|(i, n)| (n.as_str(), i as u32)).collect();
        let edges = edge_names.iter().map(|(u, v)| (index[u.as_str()], index[v.as_str()])).collect();
        Ok(Graph { names, edges })
    }

    /// Serialize back to the edge-list format (inverse of `parse` up to
    /// comment/whitespace normalization).
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for v in 0..self.n_vertices() as u32 {
            if self.is_isolated(v) {
                out.push_str("node ");
                out.push_str(self.vertex_name(v));
                out.push('\n');
            }
        }
        for &(u, v) in &self.edges {
            out.push_str(self.vertex_name(u));
            out.push(' ');
            out.push_str(self.vertex_name(v));
            out.push('\n');
        }
        out
    }

    /// Connected components as sorted vertex sets (isolated vertices are
    /// their own components).
    pub fn components(&self) -> Vec<Vec<u32>> {
        let n = self.n_vertices();
        let mut comp = vec![usize::MAX; n];
        let mut adj: Vec<Vec<u32>> = vec![Vec::new(); n];
        for &(u, v) in &self.edges {
            adj[u as usize].push(v);
            adj[v as usize].push(u);
        }
        let mut out: Vec<Vec<u32>> = Vec::new();
        for start in 0..n {
            if comp[start] != usize::MAX {
                continue;
            }
            let id = out.len();
            let mut stack = vec![start as u32];
            let mut members = Vec::new();
            comp[start] = id;
            while let Some(v) = stack.pop() {
                members.push(v);
                for &w in &adj[v as usize] {
                    if comp[w as usize] == usize::MAX {
                        comp[w as usize] = id;
                        stack.push(w);
                    }
                }
            }
            members.sort_unstable();
            out.push(members);
        }
        out
    }

    /// The subgraph induced by an edge subset, keeping only incident
    /// vertices. Returns the new graph plus maps old-vertex -> new and the
    /// new edge list in the order of `edge_ids`.
    pub fn edge_subgraph(&self, edge_ids: &[u32]) -> (Graph, BTreeMap<u32, u32>) {
        let mut used: BTreeSet<u32> = BTreeSet::new();
        for &e in edge_ids {
            let (u, v) = self.edge(e);
            used.insert(u);
            used.insert(v);
        }
        let mut map = BTreeMap::new();
        let mut g = Graph::new();
        for &v in &used {
            let nv = g.ensure_vertex(self.vertex_name(v));
            map.insert(v, nv);
        }
        for &e in edge_ids {
            let (u, v) = self.edge(e);
            g.edges.push((map[&u], map[&v]));
        }
        (g, map)
    }

    /// Insert `times` fresh degree-2 vertices on every edge. Fresh names use
    /// a `.` separator so they cannot collide with parsed (alphanumeric)
    /// names.
    pub fn subdivide_edges(&self, times: usize) -> Graph {
        let mut g = Graph { names: self.names.clone(), edges: Vec::new() };
        for (ei, &(u, v)) in self.edges.iter().enumerate() {
            if times == 0 {
                g.edges.push((u, v));
                continue;
            }
            let mut prev = u;
            for k in 0..times {
                g.names.push(format!("s{ei}.{k}"));
                let mid = (g.names.len() - 1) as u32;
                g.edges.push((prev, mid));
                prev = mid;
            }
            g.edges.push((prev, v));
        }
        g
    }

    /// Iteratively remove degree-2 vertices, replacing their two incident
    /// edges with one. A cycle component never collapses past a single loop:
    /// the last vertex of a cycle is kept, carrying a loop.
    pub fn dissolve_degree_two(&self) -> Graph {
        let mut names = self.names.clone();
        let mut edges = self.edges.clone();
        loop {
            let n = names.len() as u32;
            let mut target = None;
            'scan: for v in 0..n {
                let inc: Vec<usize> = edges
                    .iter()
                    .enumerate()
                    .filter(|(_, &(a, b))| a == v || b == v)
                    .map(|(i, _)| i)
                    .collect();
                if inc.len() != 2 {
                    continue;
                }
                // A loop at v occupies both slots; keep it (cycle guard).
                if edges[inc[0]].0 == edges[inc[0]].1 {
                    continue;
                }
                target = Some((v, inc[0], inc[1]));
                break 'scan;
            }
            let Some((v, i, j)) = target else { break };
            let other = |(a, b): (u32, u32)| if a == v { b } else { a };
            let w1 = other(edges[i]);
            let w2 = other(edges[j]);
            // Remove higher index first.
            let (hi, lo) = if i > j { (i, j) } else { (j, i) };
            edges.remove(hi);
            edges.remove(lo);
            edges.push((w1, w2));
            // Drop vertex v, remapping indices above it.
            names.remove(v as usize);
            for e in edges.iter_mut() {
                if e.0 > v {
                    e.0 -= 1;
                }
                if e.1 > v {
                    e.1 -= 1;
                }
            }
        }
        Graph { names, edges }
    }

    /// Multigraph-aware isomorphism by backtracking over degree-refined
    /// vertex classes. Intended for small graphs; errs above `max_edges`.
    pub fn isomorphic(&self, other: &Graph, max_edges: usize) -> Result<bool, CapError> {
        if self.n_edges() > max_edges || other.n_edges() > max_edges {
            return Err(CapError { stage: "graph_isomorphic", limit: max_edges as u64 });
        }
        if self.n_vertices() != other.n_vertices() || self.n_edges() != other.n_edges() {
            return Ok(false);
        }
        let n = self.n_vertices();
        if n == 0 {
            return Ok(true);
        }
        // Invariants: (degree, loop count) per vertex must match as multisets.
        let sig = |g: &Graph, v: u32| {
            let loops = g.edges.iter().filter(|&&(a, b)| a == v && b == v).count();
            (g.degree(v), loops)
        };
        let mut s1: Vec<_> = (0..n as u32).map(|v| sig(self, v)).collect();
        let mut s2: Vec<_> = (0..n as u32).map(|v| sig(other, v)).collect();
        s1.sort_unstable();
        s2.sort_unstable();
        if s1 != s2 {
            return Ok(false);
        }
        // Multiplicity matrices.
        let mult = |g: &Graph, u: u32, v: u32| {
            g.edges
                .iter()
                .filter(|&&(a, b)| (a == u && b == v) || (a == v && b == u))
                .count()
        };
        let mut assign: Vec<Option<u32>> = vec![None; n];
        let mut used = vec![false; n];
        fn rec(
            g1: &Graph,
            g2: &Graph,
            mult: &dyn Fn(&Graph, u32, u32) -> usize,
            sig: &dyn Fn(&Graph, u32) -> (usize, usize),
            assign: &mut Vec<Option<u32>>,
            used: &mut Vec<bool>,
            v: usize,
        ) -> bool {
            let n = assign.len();
            if v == n {
                return true;
            }
            for w in 0..n {
                if used[w] {
                    continue;
                }
                if sig(g1, v as u32) != sig(g2, w as u32) {
                    continue;
                }
                let ok = (0..v).all(|p| {
                    let pw = assign[p].unwrap();
                    mult(g1, v as u32, p as u32) == mult(g2, w as u32, pw)
                });
                if !ok {
                    continue;
                }
                assign[v] = Some(w as u32);
                used[w] = true;
                if rec(g1, g2, mult, sig, assign, used, v + 1) {
                    return true;
                }
                assign[v] = None;
                used[w] = false;
            }
            false
        }
        Ok(rec(self, other, &mult, &sig, &mut assign, &mut used, 0))
    }

    /// True when the component (given as a vertex set) is homeomorphic to a
    /// segment: a path with at least one edge and no branching or cycle.
    pub fn component_is_segment(&self, members: &[u32]) -> bool {
        let set: BTreeSet<u32> = members.iter().copied().collect();
        let mut edge_count = 0;
        for &(u, v) in &self.edges {
            if set.contains(&u) || set.contains(&v) {
                if u == v {
                    return false;
                }
                edge_count += 1;
            }
        }
        if edge_count == 0 {
            return false;
        }
        let degs: Vec<usize> = members.iter().map(|&v| self.degree(v)).collect();
        if degs.iter().any(|&d| d > 2) {
            return false;
        }
        let ones = degs.iter().filter(|&&d| d == 1).count();
        // A path has exactly two degree-1 endpoints; a cycle has none.
        ones == 2 && edge_count == members.len() - 1
    }
}

impl Default for Graph {
    fn default() -> Self {
        Graph::new()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_basic() {
        let g = Graph::parse("a b\nb c").unwrap();
        assert_eq!(g.n_vertices(), 3);
        assert_eq!(g.n_edges(), 2);
    }

    #[test]
    fn parse_loop_and_parallel() {
        let g = Graph::parse("a a").unwrap();
        assert_eq!((g.n_vertices(), g.n_edges()), (1, 1));
        assert!(g.is_loop(0));
        let g = Graph::parse("a b\na b").unwrap();
        assert_eq!((g.n_vertices(), g.n_edges()), (2, 2));
    }

    #[test]
    fn parse_comments_nodes_errors() {
        let g = Graph::parse("# header\nnode x\na b # trailing\n").unwrap();
        assert_eq!(g.n_vertices(), 3);
        assert_eq!(g.n_edges(), 1);
        let e = Graph::parse("a b c").unwrap_err();
        assert_eq!(e.line, 1);
        let e = Graph::parse("a b\nnode !!").unwrap_err();
        assert_eq!(e.line, 2);
    }

    #[test]
    fn subdivide_then_dissolve_roundtrip() {
        let k4 = Graph::parse("a b\na c\na d\nb c\nb d\nc d").unwrap();
        let s = k4.subdivide_edges(2);
        assert_eq!(s.n_edges(), 18);
        let d = s.dissolve_degree_two();
        assert!(d.isomorphic(&k4, 30).unwrap());
    }

    #[test]
    fn dissolve_path_and_triangle() {
        let p = Graph::parse("a b\nb c\nc d").unwrap();
        let d = p.dissolve_degree_two();
        assert_eq!((d.n_vertices(), d.n_edges()), (2, 1));
        let tri = Graph::parse("a b\nb c\nc a").unwrap();
        let d = tri.dissolve_degree_two();
        // Cycle guard: one vertex with a loop remains.
        assert_eq!((d.n_vertices(), d.n_edges()), (1, 1));
        assert!(d.is_loop(0));
    }

    #[test]
    fn iso_positive_negative() {
        let k4 = Graph::parse("a b\na c\na d\nb c\nb d\nc d").unwrap();
        let k4r = Graph::parse("w x\nw y\nw z\nx y\nx z\ny z").unwrap();
        assert!(k4.isomorphic(&k4r, 30).unwrap());
        let tri = Graph::parse("a b\nb c\nc a").unwrap();
        let path = Graph::parse("a b\nb c\nc d").unwrap();
        assert!(!tri.isomorphic(&path, 30).unwrap());
        // loop+edge vs two parallel edges, same counts.
        let le = Graph::parse("a a\na b").unwrap();
        let pp = Graph::parse("a b\na b").unwrap();
        assert!(!le.isomorphic(&pp, 30).unwrap());
    }

    #[test]
    fn segment_components() {
        let g = Graph::parse("a b\nb c\nx y\nz z\nnode q").unwrap();
        let comps = g.components();
        let seg_count = comps.iter().filter(|c| g.component_is_segment(c)).count();
        assert_eq!(seg_count, 2); // a-b-c and x-y; the loop and the node are not
    }

    #[test]
    fn text_roundtrip() {
        let g = Graph::parse("node q\na b\na b\nc c").unwrap();
        let t = g.to_text();
        let g2 = Graph::parse(&t).unwrap();
        assert_eq!(g, g2);
        assert_eq!(t, g2.to_text());
    }
}
