//! Canonical forms for labelled combinatorial maps.
//!
//! A map is encoded as a typed colored digraph whose nodes are doubled
//! states, map nodes, faces, and the complex's structural elements. The
//! encoding is invariant under gauge re-presentation of the rotation data
//! and under renaming of every internal id. Reflection freedoms that are
//! not plain relabelings (component mirrors, orientation flips of
//! multi-walk orientable faces) are enumerated explicitly; the canonical
//! form is the least canonical graph encoding over those presentations.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use crate::budget::{Budget, CapError};

use super::trace::{co_state, mirror_state, state_dart};
use super::{CombMap, Conn, EdgeKind, Placement};

// Edge types of the encoding.
const TY_NEXT: u8 = 0; // state -> next state
const TY_CO: u8 = 1; // state -> co-oriented other side
const TY_MIRROR: u8 = 2; // state -> mirror
const TY_TAIL: u8 = 3; // state -> tail map node
const TY_ANCHOR: u8 = 4; // face -> each state of an anchored orbit
const TY_FACE_ISOLATED: u8 = 5; // face -> isolated node
const TY_FACE_CIRCLE: u8 = 6; // face -> contained circle
const TY_FACE_COMP: u8 = 7; // face -> component
const TY_NODE_COMP: u8 = 8; // map node -> component
const TY_NODE_SING: u8 = 9; // pinned map node -> singular point
const TY_CHAIN_NEXT: u8 = 10; // circle position -> successor position
const TY_CHAIN_CIRCLE: u8 = 11; // circle position -> circle
const TY_CHAIN_SING: u8 = 12; // circle position -> singular point
const TY_CHAIN_NODE: u8 = 13; // circle position -> covering map node
const TY_CIRCLE_COMP: u8 = 14; // circle -> component
const TY_MARK_COMP: u8 = 15; // interior mark -> component
const TY_MARK_SING: u8 = 16; // interior mark -> singular point
const TY_MARK_NODE: u8 = 17; // interior mark -> covering map node
const TY_SEG_CONN: u8 = 18; // segment -> conn slot
const TY_CONN_SITE: u8 = 19; // conn slot <-> adjacent site node (both ways)
const TY_CONN_END_SING: u8 = 20; // extremal conn -> uncovered end singular
const TY_STATE_CIRCLE: u8 = 21; // arc-edge state -> its circle

/// A typed colored digraph ready for canonization.
pub struct ColorGraph {
    /// Initial color key per node (compared by value across graphs).
    pub colors: Vec<Vec<u8>>,
    pub adj: Vec<Vec<(u8, u32)>>,
}

impl ColorGraph {
    fn new() -> Self {
        ColorGraph { colors: Vec::new(), adj: Vec::new() }
    }

    fn add(&mut self, color: Vec<u8>) -> u32 {
        self.colors.push(color);
        self.adj.push(Vec::new());
        (self.colors.len() - 1) as u32
    }

    fn edge(&mut self, from: u32, ty: u8, to: u32) {
        self.adj[from as usize].push((ty, to));
    }
}

fn key(tag: u8, parts: &[u32]) -> Vec<u8> {
    let mut out = vec![tag];
    for p in parts {
        out.extend(p.to_be_bytes());
    }
    out
}

/// Build the canonical graph of one presentation.
pub fn color_graph(m: &CombMap) -> ColorGraph {
    let mut g = ColorGraph::new();
    // Singular points.
    let sing: Vec<u32> = (0..m.complex.n_singular).map(|_| g.add(key(1, &[]))).collect();
    // Components.
    let comps: Vec<u32> = m
        .complex
        .components
        .iter()
        .map(|c| g.add(key(2, &[c.orientable as u32, c.genus])))
        .collect();
    // Circles and their position chains.
    let mut circle_ids: BTreeMap<(u32, u32), u32> = BTreeMap::new();
    let mut chain_pos_ids: BTreeMap<(u32, u32, u32), u32> = BTreeMap::new();
    for (ci, c) in m.complex.components.iter().enumerate() {
        for (bi, cy) in c.boundaries.iter().enumerate() {
            let circ = g.add(key(3, &[]));
            circle_ids.insert((ci as u32, bi as u32), circ);
            g.edge(circ, TY_CIRCLE_COMP, comps[ci]);
            let n = cy.len();
            let pos_ids: Vec<u32> = (0..n).map(|_| g.add(key(4, &[]))).collect();
            for (pi, &s) in cy.iter().enumerate() {
                let p = pos_ids[pi];
                chain_pos_ids.insert((ci as u32, bi as u32, pi as u32), p);
                g.edge(p, TY_CHAIN_CIRCLE, circ);
                g.edge(p, TY_CHAIN_SING, sing[s as usize]);
                if n > 1 {
                    let np = pos_ids[(pi + 1) % n];
                    g.edge(p, TY_CHAIN_NEXT, np);
                    if !c.orientable {
                        // Individual reversal allowed: free the direction.
                        g.edge(np, TY_CHAIN_NEXT, p);
                    }
                }
            }
        }
    }
    // Interior marks.
    let mut mark_ids: BTreeMap<(u32, u32), u32> = BTreeMap::new();
    for (ci, c) in m.complex.components.iter().enumerate() {
        for (ii, &s) in c.interior_marks.iter().enumerate() {
            let mk = g.add(key(5, &[]));
            mark_ids.insert((ci as u32, ii as u32), mk);
            g.edge(mk, TY_MARK_COMP, comps[ci]);
            g.edge(mk, TY_MARK_SING, sing[s as usize]);
        }
    }
    // Map nodes: colored by label only.
    let nodes: Vec<u32> = m
        .nodes
        .iter()
        .map(|n| match n.label {
            Some(l) => g.add(key(6, &[1, l])),
            None => g.add(key(6, &[0, 0])),
        })
        .collect();
    for (ni, n) in m.nodes.iter().enumerate() {
        if let Some(c) = n.place.component() {
            g.edge(nodes[ni], TY_NODE_COMP, comps[c as usize]);
        }
        if let Some(s) = n.place.singular(&m.complex) {
            g.edge(nodes[ni], TY_NODE_SING, sing[s as usize]);
        }
        match n.place {
            Placement::InteriorMark(c, i) => {
                g.edge(mark_ids[&(c, i)], TY_MARK_NODE, nodes[ni]);
            }
            Placement::BoundaryMark(c, b, p) => {
                g.edge(chain_pos_ids[&(c, b, p)], TY_CHAIN_NODE, nodes[ni]);
            }
            _ => {}
        }
    }
    // States: colored by edge kind (arc vs real-with-tag).
    let n_states = m.n_states();
    let states: Vec<u32> = (0..n_states)
        .map(|s| {
            let e = &m.edges[(state_dart(s) / 2) as usize];
            match e.kind {
                EdgeKind::Arc(..) => g.add(key(7, &[2, 0])),
                EdgeKind::Real(id) => match m.tags.get(id as usize).copied().flatten() {
                    Some(t) => g.add(key(7, &[1, t])),
                    None => g.add(key(7, &[0, 0])),
                },
            }
        })
        .collect();
    for s in 0..n_states {
        g.edge(states[s as usize], TY_NEXT, states[m.next_state(s) as usize]);
        g.edge(states[s as usize], TY_CO, states[co_state(m, s) as usize]);
        g.edge(states[s as usize], TY_MIRROR, states[mirror_state(m, s) as usize]);
        let tail = m.dart_tail(state_dart(s));
        g.edge(states[s as usize], TY_TAIL, nodes[tail as usize]);
        if let EdgeKind::Arc(c, b, _) = m.edges[(state_dart(s) / 2) as usize].kind {
            g.edge(states[s as usize], TY_STATE_CIRCLE, circle_ids[&(c, b)]);
        }
    }
    // Faces.
    let (orbit_of, orbits) = m.orbits();
    for f in &m.faces {
        let fcolor = key(
            8,
            &[
                f.genus,
                f.orientable as u32,
                f.label.map(|l| l as u32 + 1).unwrap_or(0),
                f.is_hole.is_some() as u32,
            ],
        );
        let fid = g.add(fcolor);
        g.edge(fid, TY_FACE_COMP, comps[f.comp as usize]);
        // Anchor directions only matter relative to each other on
        // orientable faces with several walks; everywhere else a walk can
        // be glued either way, so the encoding points at both directions.
        let directed = f.orientable && f.anchors.len() >= 2;
        for &a in &f.anchors {
            let o = orbit_of[a as usize];
            for &s in &orbits[o as usize] {
                g.edge(fid, TY_ANCHOR, states[s as usize]);
            }
            if !directed {
                let om = orbit_of[mirror_state(m, a) as usize];
                for &s in &orbits[om as usize] {
                    g.edge(fid, TY_ANCHOR, states[s as usize]);
                }
            }
        }
        for &n in &f.isolated {
            g.edge(fid, TY_FACE_ISOLATED, nodes[n as usize]);
        }
        for &b in &f.circles {
            g.edge(fid, TY_FACE_CIRCLE, circle_ids[&(f.comp, b)]);
        }
    }
    // Segments: undirected conn-site chains (reversal is free).
    for (si, t) in m.traces.iter().enumerate() {
        let seg = g.add(key(9, &[]));
        let conns: Vec<u32> = t
            .conns
            .iter()
            .map(|c| match c {
                Conn::Edge(id) => {
                    let tag = m.tags.get(*id as usize).copied().flatten();
                    g.add(key(10, &[1, tag.map(|t| t + 1).unwrap_or(0)]))
                }
                Conn::Gap(l) => g.add(key(10, &[0, l.map(|x| x as u32 + 1).unwrap_or(0)])),
            })
            .collect();
        for &c in &conns {
            g.edge(seg, TY_SEG_CONN, c);
        }
        for (i, &c) in conns.iter().enumerate() {
            let (l, r) = t.conn_neighbors(i);
            for site in [l, r].into_iter().flatten() {
                g.edge(c, TY_CONN_SITE, nodes[site as usize]);
                g.edge(nodes[site as usize], TY_CONN_SITE, c);
            }
        }
        // Uncovered ends: tie the extremal conns to the end's singular point.
        let (s0, s1) = m.complex.segments[si];
        if t.end_nodes[0].is_none() {
            g.edge(conns[0], TY_CONN_END_SING, sing[s0 as usize]);
        }
        if t.end_nodes[1].is_none() {
            g.edge(*conns.last().unwrap(), TY_CONN_END_SING, sing[s1 as usize]);
        }
    }
    for a in g.adj.iter_mut() {
        a.sort_unstable();
    }
    g
}

/// Mirror one surface component's presentation: reverse rotations of its
/// nodes, flip the anchors of its faces, and reverse its boundary chains
/// (renaming arc darts so the arc convention is preserved).
pub fn mirror_component(m: &CombMap, comp: u32) -> CombMap {
    let mut new = m.clone();
    for (ni, node) in m.nodes.iter().enumerate() {
        if node.place.component() == Some(comp) {
            new.rotations[ni].reverse();
        }
    }
    // Anchors of faces on this component flip direction.
    for f in &mut new.faces {
        if f.comp == comp {
            for a in &mut f.anchors {
                *a = mirror_state(m, *a);
            }
        }
    }
    // Reverse each boundary cycle; position p of k maps to k-1-p.
    let cc = &mut new.complex.components[comp as usize];
    for cy in &mut cc.boundaries {
        cy.reverse();
    }
    let remap_pos = |b: u32, p: u32| {
        let k = m.complex.components[comp as usize].boundaries[b as usize].len() as u32;
        k - 1 - p
    };
    for node in &mut new.nodes {
        if let Placement::BoundaryMark(c, b, p) = node.place {
            if c == comp {
                node.place = Placement::BoundaryMark(c, b, remap_pos(b, p));
            }
        }
    }
    // Arc edges run between consecutive covered positions; after the
    // reversal each arc runs the other way. Swap the endpoints AND the two
    // dart names everywhere (rotations and anchors), keeping tails
    // consistent, then renumber the stretch index.
    let arc_edges: alloc::vec::Vec<u32> = new
        .edges
        .iter()
        .enumerate()
        .filter(|(_, e)| matches!(e.kind, EdgeKind::Arc(c, _, _) if c == comp))
        .map(|(i, _)| i as u32)
        .collect();
    for &ei in &arc_edges {
        new.edges[ei as usize].ends.swap(0, 1);
    }
    let swap_dart = |d: u32| {
        if arc_edges.contains(&(d / 2)) {
            d ^ 1
        } else {
            d
        }
    };
    for rot in &mut new.rotations {
        for d in rot.iter_mut() {
            *d = swap_dart(*d);
        }
    }
    for f in &mut new.faces {
        for a in &mut f.anchors {
            let d = *a / 2;
            let dir = *a % 2;
            *a = swap_dart(d) * 2 + dir;
        }
    }
    let coverage = super::validate::circle_coverage(&new);
    for e in &mut new.edges {
        if let EdgeKind::Arc(c, b, _) = e.kind {
            if c != comp {
                continue;
            }
            let pos = &coverage[&(c, b)];
            let j = pos
                .iter()
                .position(|&(_, n)| n == e.ends[0])
                .expect("arc endpoint covers a position") as u32;
            e.kind = EdgeKind::Arc(c, b, j);
        }
    }
    new.refresh_idents();
    new
}

/// Flip the orientation presentation of face `fi` (all anchors mirrored).
fn flip_face(m: &CombMap, fi: usize) -> CombMap {
    let mut new = m.clone();
    for a in &mut new.faces[fi].anchors {
        *a = mirror_state(m, *a);
    }
    new
}

/// All reflection presentations of a map: component mirror subsets times
/// orientation flips of multi-walk orientable faces.
pub fn presentations(m: &CombMap) -> Vec<CombMap> {
    let n_comps = m.complex.components.len();
    let mut base = Vec::new();
    for mask in 0u32..(1 << n_comps) {
        let mut v = m.clone();
        for c in 0..n_comps {
            if mask & (1 << c) != 0 {
                v = mirror_component(&v, c as u32);
            }
        }
        base.push(v);
    }
    // Orientable faces with >= 2 anchors can flip independently.
    let flippable: Vec<usize> = m
        .faces
        .iter()
        .enumerate()
        .filter(|(_, f)| f.orientable && f.anchors.len() >= 2)
        .map(|(i, _)| i)
        .collect();
    let mut out = Vec::new();
    for b in base {
        for mask in 0u32..(1 << flippable.len()) {
            let mut v = b.clone();
            for (bit, &fi) in flippable.iter().enumerate() {
                if mask & (1 << bit) != 0 {
                    v = flip_face(&v, fi);
                }
            }
            out.push(v);
        }
    }
    out
}

/// Canonical byte string: equal iff the maps are isomorphic.
pub fn canonical_form(m: &CombMap) -> Vec<u8> {
    canonical_form_capped(m, &Budget::unlimited()).expect("unlimited budget")
}

pub fn canonical_form_capped(m: &CombMap, budget: &Budget) -> Result<Vec<u8>, CapError> {
    let mut best: Option<Vec<u8>> = None;
    for p in presentations(m) {
        let g = color_graph(&p);
        let enc = canonize(&g, budget)?;
        if best.as_ref().map_or(true, |b| &enc < b) {
            best = Some(enc);
        }
    }
    Ok(best.expect("at least one presentation"))
}

// ---- generic colored-digraph canonization ----

/// Stable refinement classes: returns class id per node, classes ordered by
/// their canonical class key.
fn refine(g: &ColorGraph, seed: &[u32]) -> Vec<u32> {
    let n = g.colors.len();
    let mut class: Vec<u32> = seed.to_vec();
    loop {
        // Signature: (class, sorted outgoing (ty, class), sorted incoming
        // (ty, class)).
        let mut incoming: Vec<Vec<(u8, u32)>> = vec![Vec::new(); n];
        for (v, adj) in g.adj.iter().enumerate() {
            for &(ty, w) in adj {
                incoming[w as usize].push((ty, class[v]));
            }
        }
        let mut sigs: Vec<(u32, Vec<(u8, u32)>, Vec<(u8, u32)>)> = Vec::with_capacity(n);
        for v in 0..n {
            let mut out: Vec<(u8, u32)> =
                g.adj[v].iter().map(|&(ty, w)| (ty, class[w as usize])).collect();
            out.sort_unstable();
            let mut inc = core::mem::take(&mut incoming[v]);
            inc.sort_unstable();
            sigs.push((class[v], out, inc));
        }
        let mut sorted: Vec<&(u32, Vec<(u8, u32)>, Vec<(u8, u32)>)> = sigs.iter().collect();
        sorted.sort();
        sorted.dedup();
        let index: BTreeMap<&(u32, Vec<(u8, u32)>, Vec<(u8, u32)>), u32> =
            sorted.iter().enumerate().map(|(i, s)| (*s, i as u32)).collect();
        let new_class: Vec<u32> = (0..n).map(|v| index[&sigs[v]]).collect();
        if new_class == class {
            return class;
        }
        class = new_class;
    }
}

/// Initial classes from the color keys, ordered by key value.
fn seed_classes(g: &ColorGraph) -> Vec<u32> {
    let mut keys: Vec<&Vec<u8>> = g.colors.iter().collect();
    keys.sort();
    keys.dedup();
    let index: BTreeMap<&Vec<u8>, u32> =
        keys.iter().enumerate().map(|(i, k)| (*k, i as u32)).collect();
    g.colors.iter().map(|k| index[k]).collect()
}

/// Canonical encoding by refinement + individualization, minimizing the
/// serialized form over discrete labelings.
pub fn canonize(g: &ColorGraph, budget: &Budget) -> Result<Vec<u8>, CapError> {
    let seed = seed_classes(g);
    let class = refine(g, &seed);
    let mut best: Option<Vec<u8>> = None;
    individualize(g, &class, budget, &mut best)?;
    Ok(best.expect("labeling exists"))
}

fn individualize(
    g: &ColorGraph,
    class: &[u32],
    budget: &Budget,
    best: &mut Option<Vec<u8>>,
) -> Result<(), CapError> {
    budget.charge("canonical_form", 1)?;
    let n = g.colors.len();
    // Find the smallest non-singleton class (by class id).
    let mut buckets: BTreeMap<u32, Vec<u32>> = BTreeMap::new();
    for v in 0..n {
        buckets.entry(class[v]).or_default().push(v as u32);
    }
    let target = buckets.iter().find(|(_, vs)| vs.len() > 1);
    match target {
        None => {
            let enc = encode_discrete(g, class);
            if best.as_ref().map_or(true, |b| &enc < b) {
                *best = Some(enc);
            }
            Ok(())
        }
        Some((&cid, members)) => {
            for &v in members {
                // Split v into a fresh class just below its current class.
                let mut seeded: Vec<u32> = class.iter().map(|&c| c * 2 + 1).collect();
                seeded[v as usize] = cid * 2;
                let refined = refine(g, &seeded);
                individualize(g, &refined, budget, best)?;
            }
            Ok(())
        }
    }
}

fn encode_discrete(g: &ColorGraph, class: &[u32]) -> Vec<u8> {
    let n = g.colors.len();
    let mut order: Vec<u32> = (0..n as u32).collect();
    order.sort_by_key(|&v| class[v as usize]);
    let pos: BTreeMap<u32, u32> =
        order.iter().enumerate().map(|(i, &v)| (v, i as u32)).collect();
    let mut out = Vec::new();
    out.extend((n as u32).to_be_bytes());
    for &v in &order {
        let k = &g.colors[v as usize];
        out.extend((k.len() as u32).to_be_bytes());
        out.extend(k.iter());
        let mut adj: Vec<(u8, u32)> =
            g.adj[v as usize].iter().map(|&(ty, w)| (ty, pos[&w])).collect();
        adj.sort_unstable();
        out.extend((adj.len() as u32).to_be_bytes());
        for (ty, w) in adj {
            out.push(ty);
            out.extend(w.to_be_bytes());
        }
    }
    out
}
