//! Facial walk tracing on doubled states, ribbon pieces, gauge
//! normalization, and the orientation bookkeeping all higher layers share.
//!
//! A state is `4*edge + 2*side + dir`; walking state `(d, dir)` traverses
//! dart `d` and continues at the head by taking the rotation successor
//! (dir 0) or predecessor (dir 1) of the reversed dart, after twisting the
//! direction by the edge sign. Every facial walk appears as two mirror
//! orbits, one per traversal direction.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use super::CombMap;

pub fn state_dart(s: u32) -> u32 {
    s / 2
}

pub fn state_dir(s: u32) -> u32 {
    s % 2
}

pub fn state_of(dart: u32, dir: u32) -> u32 {
    dart * 2 + dir
}

impl CombMap {
    pub fn n_states(&self) -> u32 {
        4 * self.edges.len() as u32
    }

    fn rot_succ(&self, d: u32) -> u32 {
        let v = self.dart_tail(d) as usize;
        let order = &self.rotations[v];
        let i = order.iter().position(|&x| x == d).expect("dart in rotation");
        order[(i + 1) % order.len()]
    }

    fn rot_pred(&self, d: u32) -> u32 {
        let v = self.dart_tail(d) as usize;
        let order = &self.rotations[v];
        let i = order.iter().position(|&x| x == d).expect("dart in rotation");
        order[(i + order.len() - 1) % order.len()]
    }

    pub fn next_state(&self, s: u32) -> u32 {
        let d = state_dart(s);
        let dir = state_dir(s);
        let flip = self.edges[(d / 2) as usize].flipped as u32;
        let dir2 = dir ^ flip;
        let t = d ^ 1;
        let nd = if dir2 == 0 { self.rot_succ(t) } else { self.rot_pred(t) };
        state_of(nd, dir2)
    }

    /// Orbit id per state plus the orbits themselves, in first-state order.
    pub fn orbits(&self) -> (Vec<u32>, Vec<Vec<u32>>) {
        let n = self.n_states();
        let mut orbit_of = vec![u32::MAX; n as usize];
        let mut orbits = Vec::new();
        for s in 0..n {
            if orbit_of[s as usize] != u32::MAX {
                continue;
            }
            let id = orbits.len() as u32;
            let mut orbit = Vec::new();
            let mut cur = s;
            loop {
                orbit_of[cur as usize] = id;
                orbit.push(cur);
                cur = self.next_state(cur);
                if cur == s {
                    break;
                }
            }
            orbits.push(orbit);
        }
        (orbit_of, orbits)
    }
}

/// The mirror of a state: the same edge side traversed the other way.
pub fn mirror_state(m: &CombMap, s: u32) -> u32 {
    let d = state_dart(s);
    let dir = state_dir(s);
    let flip = m.edges[(d / 2) as usize].flipped as u32;
    state_of(d ^ 1, dir ^ 1 ^ flip)
}

/// The co-oriented other side of the same edge band: gluing two faces along
/// the band is orientation-compatible when their walk states at the band
/// are related by this map.
pub fn co_state(m: &CombMap, s: u32) -> u32 {
    let d = state_dart(s);
    let dir = state_dir(s);
    let flip = m.edges[(d / 2) as usize].flipped as u32;
    state_of(d ^ 1, dir ^ flip)
}

/// Connected ribbon pieces of the surface graph (nodes with darts).
/// Returns piece id per node (u32::MAX for nodes without darts).
pub fn ribbon_pieces(m: &CombMap) -> (Vec<u32>, u32) {
    let mut piece = vec![u32::MAX; m.nodes.len()];
    let mut next = 0u32;
    for start in 0..m.nodes.len() {
        if piece[start] != u32::MAX || m.rotations[start].is_empty() {
            continue;
        }
        let id = next;
        next += 1;
        let mut stack = vec![start as u32];
        piece[start] = id;
        while let Some(v) = stack.pop() {
            for &d in &m.rotations[v as usize] {
                let w = m.dart_head(d);
                if piece[w as usize] == u32::MAX {
                    piece[w as usize] = id;
                    stack.push(w);
                }
            }
        }
    }
    (piece, next)
}

/// Gauge flips making every sign positive within each ribbon piece, if the
/// piece is orientable; `None` for non-orientable pieces.
pub fn ribbon_gauges(m: &CombMap, piece: &[u32], n_pieces: u32) -> Vec<Option<BTreeMap<u32, bool>>> {
    let mut out: Vec<Option<BTreeMap<u32, bool>>> = vec![Some(BTreeMap::new()); n_pieces as usize];
    let mut seen = vec![false; m.nodes.len()];
    for start in 0..m.nodes.len() as u32 {
        if seen[start as usize] || m.rotations[start as usize].is_empty() {
            continue;
        }
        let p = piece[start as usize] as usize;
        let mut flips: BTreeMap<u32, bool> = BTreeMap::new();
        flips.insert(start, false);
        seen[start as usize] = true;
        let mut queue = vec![start];
        let mut orientable = true;
        while let Some(v) = queue.pop() {
            for &d in &m.rotations[v as usize] {
                let e = (d / 2) as usize;
                let w = m.dart_head(d);
                if v == w {
                    // A flipped loop is one-sided regardless of gauge.
                    if m.edges[e].flipped {
                        orientable = false;
                    }
                    continue;
                }
                let want = flips[&v] ^ m.edges[e].flipped;
                match flips.get(&w) {
                    None => {
                        flips.insert(w, want);
                        seen[w as usize] = true;
                        queue.push(w);
                    }
                    Some(&f) => {
                        if f != want {
                            orientable = false;
                        }
                    }
                }
            }
        }
        out[p] = if orientable { Some(flips) } else { None };
    }
    out
}

/// Reference sign of a state in its (orientable) ribbon's all-positive
/// gauge: constant along orbits, `true` meaning the reference direction.
pub fn ref_sign(m: &CombMap, flips: &BTreeMap<u32, bool>, s: u32) -> bool {
    let d = state_dart(s);
    let v = m.dart_tail(d);
    (state_dir(s) == 0) ^ flips[&v]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::map::{EdgeKind, Placement, SurfEdge};
    use crate::surface::TopoComplex;

    /// A bare structure for tracing tests: one node, loop edge.
    fn loop_map(flipped: bool, complex: TopoComplex) -> CombMap {
        let mut m = CombMap::empty_on(&complex);
        let n = m.push_node(Placement::Interior(0), None);
        m.edges.push(SurfEdge { ends: [n, n], flipped, kind: EdgeKind::Real(0) });
        m.n_graph_edges = 1;
        m.tags.push(None);
        m.rotations[n as usize] = alloc::vec![0, 1];
        m.faces.clear();
        m
    }

    #[test]
    fn orbit_structure_of_plain_loop() {
        let m = loop_map(false, TopoComplex::sphere());
        let (_, orbits) = m.orbits();
        // Four singleton orbits: two faces, each traced both ways.
        assert_eq!(orbits.len(), 4);
        assert!(orbits.iter().all(|o| o.len() == 1));
        // Mirror pairing groups them into two faces.
        let (orbit_of, _) = m.orbits();
        let mut pairs: alloc::collections::BTreeSet<(u32, u32)> = Default::default();
        for s in 0..m.n_states() {
            let a = orbit_of[s as usize];
            let b = orbit_of[mirror_state(&m, s) as usize];
            pairs.insert((a.min(b), a.max(b)));
        }
        assert_eq!(pairs.len(), 2);
    }

    #[test]
    fn orbit_structure_of_flipped_loop() {
        let m = loop_map(true, TopoComplex::projective_plane());
        let (_, orbits) = m.orbits();
        // One face traced both ways: two orbits of length two.
        assert_eq!(orbits.len(), 2);
        assert!(orbits.iter().all(|o| o.len() == 2));
        let (piece, n) = ribbon_pieces(&m);
        assert_eq!(n, 1);
        let gauges = ribbon_gauges(&m, &piece, n);
        assert!(gauges[0].is_none(), "flipped loop ribbon is non-orientable");
    }

    #[test]
    fn mirror_is_an_involution_reversing_orbits() {
        for flipped in [false, true] {
            let m = loop_map(
                flipped,
                if flipped { TopoComplex::projective_plane() } else { TopoComplex::sphere() },
            );
            for s in 0..m.n_states() {
                assert_eq!(mirror_state(&m, mirror_state(&m, s)), s);
                // mirror(next(s)) steps backwards: next(mirror(next(s))) == mirror(s)
                let fwd = m.next_state(s);
                assert_eq!(m.next_state(mirror_state(&m, fwd)), mirror_state(&m, s));
            }
        }
    }
}
