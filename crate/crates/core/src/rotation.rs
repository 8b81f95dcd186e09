//! Rotation systems with edge signs, and face tracing.
//!
//! A dart is `2*e` (from `edge(e).0`) or `2*e + 1` (from `edge(e).1`). Faces
//! are traced on doubled states `(dart, direction)`; every facial walk is
//! traced once in each direction, so the number of faces is half the number
//! of orbits. This works uniformly for orientable and non-orientable
//! embedding schemes.

use alloc::collections::BTreeSet;
use alloc::vec;
use alloc::vec::Vec;

use crate::graph::Graph;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RotationSystem {
    /// Cyclic dart order per vertex (darts whose tail is the vertex).
    pub orders: Vec<Vec<u32>>,
    /// Sign per edge; `true` means the edge carries a twist.
    pub flipped: Vec<bool>,
}

pub fn dart_tail(g: &Graph, d: u32) -> u32 {
    let (u, v) = g.edge(d / 2);
    if d % 2 == 0 {
        u
    } else {
        v
    }
}

pub fn dart_head(g: &Graph, d: u32) -> u32 {
    dart_tail(g, d ^ 1)
}

impl RotationSystem {
    /// All-positive system with the given orders.
    pub fn new(orders: Vec<Vec<u32>>, n_edges: usize) -> Self {
        RotationSystem { orders, flipped: vec![false; n_edges] }
    }

    pub fn validate(&self, g: &Graph) -> bool {
        if self.orders.len() != g.n_vertices() || self.flipped.len() != g.n_edges() {
            return false;
        }
        let mut seen = BTreeSet::new();
        for (v, order) in self.orders.iter().enumerate() {
            for &d in order {
                if d as usize >= 2 * g.n_edges() || dart_tail(g, d) != v as u32 {
                    return false;
                }
                if !seen.insert(d) {
                    return false;
                }
            }
        }
        seen.len() == 2 * g.n_edges()
    }

    fn succ(&self, g: &Graph, d: u32) -> u32 {
        let v = dart_tail(g, d) as usize;
        let order = &self.orders[v];
        let i = order.iter().position(|&x| x == d).expect("dart in rotation");
        order[(i + 1) % order.len()]
    }

    fn pred(&self, g: &Graph, d: u32) -> u32 {
        let v = dart_tail(g, d) as usize;
        let order = &self.orders[v];
        let i = order.iter().position(|&x| x == d).expect("dart in rotation");
        order[(i + order.len() - 1) % order.len()]
    }

    /// Next doubled state along a facial walk. States are `dart * 2 + dir`
    /// with `dir` 0 for positive traversal.
    pub fn next_state(&self, g: &Graph, state: u32) -> u32 {
        let d = state / 2;
        let dir = state % 2;
        let e = d / 2;
        let dir2 = dir ^ (self.flipped[e as usize] as u32);
        let t = d ^ 1;
        let nd = if dir2 == 0 { self.succ(g, t) } else { self.pred(g, t) };
        nd * 2 + dir2
    }

    /// Facial orbits of the doubled state machine. Each geometric face is
    /// covered by exactly two orbits (its two traversal directions).
    pub fn face_orbits(&self, g: &Graph) -> Vec<Vec<u32>> {
        let total = 4 * g.n_edges() as u32;
        let mut seen = vec![false; total as usize];
        let mut orbits = Vec::new();
        for s in 0..total {
            if seen[s as usize] {
                continue;
            }
            let mut orbit = Vec::new();
            let mut cur = s;
            loop {
                seen[cur as usize] = true;
                orbit.push(cur);
                cur = self.next_state(g, cur);
                if cur == s {
                    break;
                }
            }
            orbits.push(orbit);
        }
        orbits
    }

    /// Per connected component of `g`: (vertex count, edge count, face
    /// count, orientable). An edgeless component counts one face. Face
    /// counts come from halving the doubled orbits restricted to the
    /// component.
    pub fn component_stats(&self, g: &Graph) -> Vec<ComponentStats> {
        let comps = g.components();
        let mut comp_of = vec![0usize; g.n_vertices()];
        for (i, c) in comps.iter().enumerate() {
            for &v in c {
                comp_of[v as usize] = i;
            }
        }
        let mut stats: Vec<ComponentStats> = comps
            .iter()
            .map(|c| ComponentStats {
                vertices: c.len(),
                edges: 0,
                faces: 0,
                orientable: true,
            })
            .collect();
        for e in 0..g.n_edges() as u32 {
            stats[comp_of[g.edge(e).0 as usize]].edges += 1;
        }
        let mut orbit_count = vec![0usize; comps.len()];
        for orbit in self.face_orbits(g) {
            let d = orbit[0] / 2;
            orbit_count[comp_of[dart_tail(g, d) as usize]] += 1;
        }
        for (i, s) in stats.iter_mut().enumerate() {
            s.faces = if s.edges == 0 { 1 } else { orbit_count[i] / 2 };
            s.orientable = self.component_orientable(g, &comps[i]);
        }
        stats
    }

    /// Gauge check: a component is orientable iff vertex flips can make all
    /// its edge signs positive.
    fn component_orientable(&self, g: &Graph, members: &[u32]) -> bool {
        let set: BTreeSet<u32> = members.iter().copied().collect();
        let mut flip: alloc::collections::BTreeMap<u32, bool> = alloc::collections::BTreeMap::new();
        let Some(&start) = members.first() else { return true };
        flip.insert(start, false);
        let mut queue = vec![start];
        let mut edges_in: Vec<u32> = Vec::new();
        for e in 0..g.n_edges() as u32 {
            if set.contains(&g.edge(e).0) {
                edges_in.push(e);
            }
        }
        while let Some(v) = queue.pop() {
            for &e in &edges_in {
                let (a, b) = g.edge(e);
                if a == b {
                    continue;
                }
                let w = if a == v {
                    b
                } else if b == v {
                    a
                } else {
                    continue;
                };
                let want = flip[&v] ^ self.flipped[e as usize];
                match flip.get(&w) {
                    None => {
                        flip.insert(w, want);
                        queue.push(w);
                    }
                    Some(&f) => {
                        if f != want {
                            return false;
                        }
                    }
                }
            }
        }
        // Loops: a flipped loop is a one-sided curve regardless of gauge.
        for &e in &edges_in {
            let (a, b) = g.edge(e);
            if a == b && self.flipped[e as usize] {
                return false;
            }
        }
        true
    }

    /// Euler genus per component: `2 - (v - e + f)`.
    pub fn component_genera(&self, g: &Graph) -> Vec<(usize, bool)> {
        self.component_stats(g)
            .into_iter()
            .map(|s| {
                let chi = s.vertices as i64 - s.edges as i64 + s.faces as i64;
                ((2 - chi) as usize, s.orientable)
            })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComponentStats {
    pub vertices: usize,
    pub edges: usize,
    pub faces: usize,
    pub orientable: bool,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn loop_positive_is_sphere() {
        let g = Graph::parse("a a").unwrap();
        let rs = RotationSystem::new(vec![vec![0, 1]], 1);
        assert!(rs.validate(&g));
        let stats = &rs.component_stats(&g)[0];
        assert_eq!(stats.faces, 2);
        assert!(stats.orientable);
        assert_eq!(rs.component_genera(&g)[0], (0, true));
    }

    #[test]
    fn loop_flipped_is_projective_plane() {
        let g = Graph::parse("a a").unwrap();
        let rs = RotationSystem { orders: vec![vec![0, 1]], flipped: vec![true] };
        let stats = &rs.component_stats(&g)[0];
        assert_eq!(stats.faces, 1);
        assert!(!stats.orientable);
        assert_eq!(rs.component_genera(&g)[0], (1, false));
    }

    #[test]
    fn interleaved_loops_are_torus() {
        let g = Graph::parse("a a\na a").unwrap();
        // rotation a: d0, d2, d1, d3 (interleaved)
        let rs = RotationSystem::new(vec![vec![0, 2, 1, 3]], 2);
        assert_eq!(rs.component_genera(&g)[0], (2, true));
        // nested: d0, d1, d2, d3 gives a sphere
        let rs = RotationSystem::new(vec![vec![0, 1, 2, 3]], 2);
        assert_eq!(rs.component_genera(&g)[0], (0, true));
    }

    #[test]
    fn isolated_vertex_counts_one_face() {
        let g = Graph::parse("node x").unwrap();
        let rs = RotationSystem::new(vec![vec![]], 0);
        let stats = &rs.component_stats(&g)[0];
        assert_eq!((stats.vertices, stats.edges, stats.faces), (1, 0, 1));
        assert_eq!(rs.component_genera(&g)[0], (0, true));
    }
}
