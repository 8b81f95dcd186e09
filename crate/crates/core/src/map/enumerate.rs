//! Exhaustive enumeration of proper embeddings of small graphs on a
//! 2-complex, up to map isomorphism.
//!
//! Stage 1 enumerates signed rotation systems per surface component (with
//! boundary-arc structure forced by the covered circles), stage 2 completes
//! the traced walks into faces in every topologically consistent way within
//! the component's genus, stage 3 enumerates segment traces, and the result
//! is deduplicated by canonical form and emitted in canonical order.
//!
//! A fixed-graph cellular mode enumerates the cellular proper embeddings of
//! one given graph; the decision pipeline uses it to seed witnesses.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec;
use alloc::vec::Vec;

use crate::budget::{Budget, CapError};
use crate::graph::Graph;
use crate::surface::TopoComplex;

use super::canon::canonical_form_capped;
use super::trace::{mirror_state, state_of};
use super::{CombMap, Conn, EdgeKind, FaceRec, Placement, SegmentTrace, SurfEdge};

#[derive(Debug, Clone)]
pub struct EnumOptions {
    pub max_vertices: u32,
    pub max_edges: u32,
    pub cellular_only: bool,
}

/// All isomorphism classes of proper embeddings of graphs with at most `k`
/// vertices and `k` edges on `t`, in canonical order.
pub fn enumerate_proper_embeddings(
    t: &TopoComplex,
    k: u32,
    budget: &Budget,
) -> Result<Vec<CombMap>, CapError> {
    let opts = EnumOptions { max_vertices: k, max_edges: k, cellular_only: false };
    enumerate_proper(t, &opts, budget)
}

pub fn enumerate_proper(
    t: &TopoComplex,
    opts: &EnumOptions,
    budget: &Budget,
) -> Result<Vec<CombMap>, CapError> {
    if t.n_singular > opts.max_vertices {
        // Properness forces one vertex class per singular point.
        return Ok(Vec::new());
    }
    let base = pinned_skeleton(t);
    let free_v = opts.max_vertices - t.n_singular;
    let mut sink = Sink::new(budget);
    surface_phase(&base, t, 0, free_v, opts.max_edges, opts, budget, &mut sink)?;
    Ok(sink.finish())
}

/// Cellular proper embeddings of exactly the graph `g` on `t` (segment-free
/// complexes only; complexes with segments yield nothing here).
pub fn enumerate_embeddings_of_graph(
    g: &Graph,
    t: &TopoComplex,
    budget: &Budget,
    max_results: usize,
) -> Result<Vec<CombMap>, CapError> {
    if !t.segments.is_empty() {
        return Ok(Vec::new());
    }
    let mut sink = Sink::new(budget);
    sink.cap_results = Some(max_results);
    fixed_graph_phase(g, t, budget, &mut sink)?;
    Ok(sink.finish())
}

// ---- shared plumbing ----

struct Sink<'a> {
    budget: &'a Budget,
    seen: BTreeSet<Vec<u8>>,
    out: BTreeMap<Vec<u8>, CombMap>,
    cap_results: Option<usize>,
    full: bool,
}

impl<'a> Sink<'a> {
    fn new(budget: &'a Budget) -> Self {
        Sink { budget, seen: BTreeSet::new(), out: BTreeMap::new(), cap_results: None, full: false }
    }

    fn emit(&mut self, m: CombMap) -> Result<(), CapError> {
        if self.full {
            return Ok(());
        }
        debug_assert!(m.validate().is_empty(), "enumerated map invalid: {:?}", m.validate());
        let key = canonical_form_capped(&m, self.budget)?;
        if self.seen.insert(key.clone()) {
            self.out.insert(key, m);
            if let Some(cap) = self.cap_results {
                if self.out.len() >= cap {
                    self.full = true;
                }
            }
        }
        Ok(())
    }

    fn finish(self) -> Vec<CombMap> {
        self.out.into_values().collect()
    }
}

/// Nodes pinned at every singular occurrence, arcs on every circle, no
/// graph yet.
fn pinned_skeleton(t: &TopoComplex) -> CombMap {
    let mut m = CombMap::empty_on(t);
    m.faces.clear();
    // One node per occurrence.
    for (ci, c) in t.components.iter().enumerate() {
        for ii in 0..c.interior_marks.len() as u32 {
            m.push_node(Placement::InteriorMark(ci as u32, ii), None);
        }
        for (bi, cy) in c.boundaries.iter().enumerate() {
            for pi in 0..cy.len() as u32 {
                m.push_node(Placement::BoundaryMark(ci as u32, bi as u32, pi), None);
            }
        }
    }
    for (si, _) in t.segments.iter().enumerate() {
        let a = m.push_node(Placement::SegmentEnd(si as u32, 0), None);
        let b = m.push_node(Placement::SegmentEnd(si as u32, 1), None);
        m.traces[si] = SegmentTrace {
            end_nodes: [Some(a), Some(b)],
            interior_nodes: Vec::new(),
            conns: vec![Conn::Gap(None)],
        };
    }
    // Arc edges per circle; rotations get [arc_out, arc_in] per node (real
    // darts are inserted between them later).
    for (ci, c) in t.components.iter().enumerate() {
        for (bi, cy) in c.boundaries.iter().enumerate() {
            let k = cy.len() as u32;
            if k == 0 {
                continue;
            }
            let node_at = |p: u32| {
                m.nodes
                    .iter()
                    .position(|n| n.place == Placement::BoundaryMark(ci as u32, bi as u32, p))
                    .unwrap() as u32
            };
            let first_arc = m.edges.len() as u32;
            for j in 0..k {
                let a = node_at(j);
                let b = node_at((j + 1) % k);
                m.edges.push(SurfEdge {
                    ends: [a, b],
                    flipped: false,
                    kind: EdgeKind::Arc(ci as u32, bi as u32, j),
                });
            }
            for j in 0..k {
                let n = node_at(j);
                let out_dart = 2 * (first_arc + j);
                let in_dart = 2 * (first_arc + (j + k - 1) % k) + 1;
                m.rotations[n as usize] = vec![out_dart, in_dart];
            }
        }
    }
    m.refresh_idents();
    m
}

/// Identify the hole orbit of each covered circle by convention: the orbit
/// through `(first arc dart, dir 0)` walks the cap-side corners.
fn hole_orbits(m: &CombMap) -> BTreeMap<(u32, u32), u32> {
    let (orbit_of, _) = m.orbits();
    let mut out = BTreeMap::new();
    for (ei, e) in m.edges.iter().enumerate() {
        if let EdgeKind::Arc(c, b, 0) = e.kind {
            out.insert((c, b), orbit_of[state_of(2 * ei as u32, 0) as usize]);
        }
    }
    out
}

#[allow(clippy::too_many_arguments)]
fn surface_phase(
    base: &CombMap,
    t: &TopoComplex,
    comp: usize,
    free_v: u32,
    free_e: u32,
    opts: &EnumOptions,
    budget: &Budget,
    sink: &mut Sink,
) -> Result<(), CapError> {
    if sink.full {
        return Ok(());
    }
    if comp == t.components.len() {
        return trace_phase(base, t, 0, free_v, free_e, opts, budget, sink);
    }
    // Free interior nodes then edge multisets on this component's nodes.
    for f in 0..=free_v {
        let mut with_nodes = base.clone();
        for _ in 0..f {
            with_nodes.push_node(Placement::Interior(comp as u32), None);
        }
        let comp_nodes: Vec<u32> = (0..with_nodes.nodes.len() as u32)
            .filter(|&n| with_nodes.node_component(n) == Some(comp as u32))
            .collect();
        // Edge multisets: nondecreasing sequences of node pairs (empty
        // components visit only the empty multiset).
        enumerate_edge_multisets(&comp_nodes, free_e, &mut |pairs| {
            budget.charge("enumerate_proper_embeddings", 1)?;
            let mut with_edges = with_nodes.clone();
            let first_edge = with_edges.edges.len() as u32;
            for &(a, b) in pairs {
                let id = with_edges.n_graph_edges;
                with_edges.n_graph_edges += 1;
                with_edges.tags.push(None);
                with_edges.edges.push(SurfEdge {
                    ends: [a, b],
                    flipped: false,
                    kind: EdgeKind::Real(id),
                });
            }
            // Free nodes with degree 0 stay isolated; fine.
            rotations_phase(
                &with_edges,
                t,
                comp,
                first_edge,
                free_v - f,
                free_e - pairs.len() as u32,
                opts,
                budget,
                sink,
            )
        })?;
    }
    Ok(())
}

fn enumerate_edge_multisets(
    nodes: &[u32],
    max_edges: u32,
    visit: &mut dyn FnMut(&[(u32, u32)]) -> Result<(), CapError>,
) -> Result<(), CapError> {
    let mut pairs: Vec<(u32, u32)> = Vec::new();
    for (i, &a) in nodes.iter().enumerate() {
        for &b in &nodes[i..] {
            pairs.push((a, b));
        }
    }
    fn rec(
        pairs: &[(u32, u32)],
        from: usize,
        left: u32,
        acc: &mut Vec<(u32, u32)>,
        visit: &mut dyn FnMut(&[(u32, u32)]) -> Result<(), CapError>,
    ) -> Result<(), CapError> {
        visit(acc)?;
        if left == 0 {
            return Ok(());
        }
        for i in from..pairs.len() {
            acc.push(pairs[i]);
            rec(pairs, i, left - 1, acc, visit)?;
            acc.pop();
        }
        Ok(())
    }
    rec(&pairs, 0, max_edges, &mut Vec::new(), visit)
}

/// Enumerate rotations (and signs) for the real darts of `comp`, then hand
/// over to face completion and the next component.
#[allow(clippy::too_many_arguments)]
fn rotations_phase(
    m: &CombMap,
    t: &TopoComplex,
    comp: usize,
    first_real_edge: u32,
    free_v: u32,
    free_e: u32,
    opts: &EnumOptions,
    budget: &Budget,
    sink: &mut Sink,
) -> Result<(), CapError> {
    if sink.full {
        return Ok(());
    }
    // Darts per node on this component (real edges added this phase).
    let mut darts: BTreeMap<u32, Vec<u32>> = BTreeMap::new();
    for ei in first_real_edge..m.edges.len() as u32 {
        let e = &m.edges[ei as usize];
        darts.entry(e.ends[0]).or_default().push(2 * ei);
        darts.entry(e.ends[1]).or_default().push(2 * ei + 1);
    }
    let nodes: Vec<u32> = darts.keys().copied().collect();
    // For each node, the list of orderings of its real darts.
    let per_node: Vec<Vec<Vec<u32>>> = nodes
        .iter()
        .map(|&n| {
            let ds = &darts[&n];
            let boundary = matches!(m.nodes[n as usize].place, Placement::BoundaryMark(..));
            if boundary {
                permutations(ds)
            } else {
                cyclic_orders(ds)
            }
        })
        .collect();
    let mut chosen: Vec<usize> = vec![0; nodes.len()];
    rotations_rec(
        m,
        t,
        comp,
        first_real_edge,
        free_v,
        free_e,
        opts,
        budget,
        sink,
        &nodes,
        &per_node,
        &mut chosen,
        0,
    )
}

#[allow(clippy::too_many_arguments)]
fn rotations_rec(
    m: &CombMap,
    t: &TopoComplex,
    comp: usize,
    first_real_edge: u32,
    free_v: u32,
    free_e: u32,
    opts: &EnumOptions,
    budget: &Budget,
    sink: &mut Sink,
    nodes: &[u32],
    per_node: &[Vec<Vec<u32>>],
    chosen: &mut [usize],
    at: usize,
) -> Result<(), CapError> {
    if sink.full {
        return Ok(());
    }
    if at == nodes.len() {
        let mut with_rot = m.clone();
        for (i, &n) in nodes.iter().enumerate() {
            let reals = &per_node[i][chosen[i]];
            let node = &with_rot.nodes[n as usize];
            if matches!(node.place, Placement::BoundaryMark(..)) {
                // [arc_out, reals.., arc_in]
                let old = with_rot.rotations[n as usize].clone();
                debug_assert_eq!(old.len(), 2);
                let mut rot = vec![old[0]];
                rot.extend(reals.iter().copied());
                rot.push(old[1]);
                with_rot.rotations[n as usize] = rot;
            } else {
                with_rot.rotations[n as usize] = reals.clone();
            }
        }
        return signs_phase(&with_rot, t, comp, first_real_edge, free_v, free_e, opts, budget, sink);
    }
    budget.charge("enumerate_proper_embeddings", 1)?;
    for c in 0..per_node[at].len() {
        chosen[at] = c;
        rotations_rec(
            m,
            t,
            comp,
            first_real_edge,
            free_v,
            free_e,
            opts,
            budget,
            sink,
            nodes,
            per_node,
            chosen,
            at + 1,
        )?;
    }
    Ok(())
}

fn permutations(items: &[u32]) -> Vec<Vec<u32>> {
    if items.is_empty() {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    let mut items = items.to_vec();
    items.sort_unstable();
    permute_rec(&mut items, 0, &mut out);
    out
}

fn permute_rec(items: &mut Vec<u32>, at: usize, out: &mut Vec<Vec<u32>>) {
    if at == items.len() {
        out.push(items.clone());
        return;
    }
    for i in at..items.len() {
        items.swap(at, i);
        permute_rec(items, at + 1, out);
        items.swap(at, i);
    }
}

/// Cyclic orders: fix the least dart first.
fn cyclic_orders(items: &[u32]) -> Vec<Vec<u32>> {
    if items.is_empty() {
        return vec![Vec::new()];
    }
    let mut items = items.to_vec();
    items.sort_unstable();
    let first = items[0];
    let rest = &items[1..];
    permutations(rest)
        .into_iter()
        .map(|mut p| {
            let mut v = vec![first];
            v.append(&mut p);
            v
        })
        .collect()
}

/// Sign classes: gauge-normalize by a spanning forest of the component's
/// structure; enumerate flips of the cotree real edges (orientable target
/// components admit only the all-positive class).
#[allow(clippy::too_many_arguments)]
fn signs_phase(
    m: &CombMap,
    t: &TopoComplex,
    comp: usize,
    first_real_edge: u32,
    free_v: u32,
    free_e: u32,
    opts: &EnumOptions,
    budget: &Budget,
    sink: &mut Sink,
) -> Result<(), CapError> {
    let orientable = t.components[comp].orientable;
    let cotree: Vec<u32> = if orientable {
        Vec::new()
    } else {
        // Forest over component nodes using all edges; cotree real edges
        // (self-loops always cotree).
        let mut parent: BTreeMap<u32, u32> = BTreeMap::new();
        fn find(p: &mut BTreeMap<u32, u32>, x: u32) -> u32 {
            let px = *p.get(&x).unwrap_or(&x);
            if px == x {
                return x;
            }
            let r = find(p, px);
            p.insert(x, r);
            r
        }
        let mut cotree = Vec::new();
        for (ei, e) in m.edges.iter().enumerate() {
            if m.node_component(e.ends[0]) != Some(comp as u32) {
                continue;
            }
            let (a, b) = (find(&mut parent, e.ends[0]), find(&mut parent, e.ends[1]));
            if a == b {
                if (ei as u32) >= first_real_edge {
                    cotree.push(ei as u32);
                }
            } else {
                parent.insert(a, b);
            }
        }
        cotree
    };
    for mask in 0u64..(1u64 << cotree.len()) {
        if sink.full {
            return Ok(());
        }
        budget.charge("enumerate_proper_embeddings", 1)?;
        let mut with_signs = m.clone();
        for (bit, &ei) in cotree.iter().enumerate() {
            if mask & (1 << bit) != 0 {
                with_signs.edges[ei as usize].flipped = true;
            }
        }
        completion_phase(&with_signs, t, comp, free_v, free_e, opts, budget, sink)?;
    }
    Ok(())
}

/// Complete the traced walks of `comp` into faces, then move to the next
/// component.
#[allow(clippy::too_many_arguments)]
fn completion_phase(
    m: &CombMap,
    t: &TopoComplex,
    comp: usize,
    free_v: u32,
    free_e: u32,
    opts: &EnumOptions,
    budget: &Budget,
    sink: &mut Sink,
) -> Result<(), CapError> {
    let completions = component_completions(m, comp as u32, opts.cellular_only, budget)?;
    for faces in completions {
        if sink.full {
            return Ok(());
        }
        let mut with_faces = m.clone();
        with_faces.faces.extend(faces);
        surface_phase(&with_faces, t, comp + 1, free_v, free_e, opts, budget, sink)?;
    }
    Ok(())
}

/// All consistent face-record sets for one component: group walks, assign
/// isolated nodes and uncovered circles, distribute genus and
/// orientability, and pick anchor directions; validated against the
/// component's topology afterwards by the caller's `validate`.
pub fn component_completions(
    m: &CombMap,
    comp: u32,
    cellular_only: bool,
    budget: &Budget,
) -> Result<Vec<Vec<FaceRec>>, CapError> {
    let (orbit_of, orbits) = m.orbits();
    let holes = hole_orbits(m);
    // Walk pairs on this component, excluding hole walks.
    let mut pairs: Vec<(u32, u32)> = Vec::new(); // (orbit, mirror orbit)
    let mut claimed: BTreeSet<u32> = BTreeSet::new();
    let c = &m.complex.components[comp as usize];
    let mut hole_faces: Vec<FaceRec> = Vec::new();
    for (oi, orbit) in orbits.iter().enumerate() {
        let oi = oi as u32;
        if claimed.contains(&oi) {
            continue;
        }
        let s0 = orbit[0];
        let d = super::trace::state_dart(s0);
        if m.node_component(m.dart_tail(d)) != Some(comp) {
            continue;
        }
        let om = orbit_of[mirror_state(m, s0) as usize];
        claimed.insert(oi);
        claimed.insert(om);
        // Hole walk?
        let mut is_hole = None;
        for (&(hc, hb), &ho) in &holes {
            if hc == comp && (ho == oi || ho == om) {
                is_hole = Some((hb, ho));
            }
        }
        if let Some((hb, ho)) = is_hole {
            // The cap must be a pure-arc disk; reject rotations where real
            // darts invade the cap corners.
            let pure = orbits[ho as usize].iter().all(|&s| {
                matches!(
                    m.edges[(super::trace::state_dart(s) / 2) as usize].kind,
                    EdgeKind::Arc(cc, bb, _) if cc == comp && bb == hb
                )
            });
            let arc_count = m
                .edges
                .iter()
                .filter(|e| matches!(e.kind, EdgeKind::Arc(cc, bb, _) if cc == comp && bb == hb))
                .count();
            if !pure || orbits[ho as usize].len() != arc_count {
                return Ok(Vec::new());
            }
            hole_faces.push(FaceRec {
                comp,
                anchors: vec![orbits[ho as usize][0]],
                isolated: Vec::new(),
                circles: Vec::new(),
                genus: 0,
                orientable: true,
                label: None,
                is_hole: Some(hb),
            });
        } else {
            pairs.push((oi, om));
        }
    }
    let isolated: Vec<u32> = (0..m.nodes.len() as u32)
        .filter(|&n| m.node_component(n) == Some(comp) && m.rotations[n as usize].is_empty())
        .collect();
    let covered: BTreeSet<u32> = super::validate::circle_coverage(m)
        .iter()
        .filter(|(&(cc, _), pos)| cc == comp && !pos.is_empty())
        .map(|(&(_, b), _)| b)
        .collect();
    let uncovered: Vec<u32> =
        (0..c.boundaries.len() as u32).filter(|b| !covered.contains(b)).collect();

    // Required total of (genus + extra-walk merges) from the Euler
    // characteristic: V - E + sum(2 - g_f - ends_f) + |uncovered| = 2 - g.
    let v = m.nodes.iter().filter(|n| n.place.component() == Some(comp)).count() as i64;
    let e = m
        .edges
        .iter()
        .filter(|e| m.node_component(e.ends[0]) == Some(comp))
        .count() as i64;
    let target_contrib = (2 - c.genus as i64) - v + e
        - uncovered.len() as i64
        - hole_faces.len() as i64; // each hole face contributes 1
    // sum over non-hole faces of (2 - g_f - ends_f) must equal
    // target_contrib ... holes contribute (2-0-1)=1 each, subtracted above.

    // Enumerate: partition of `pairs` into groups; assignment of isolated
    // nodes and uncovered circles to groups (or to fresh empty groups);
    // genus/orientability per group.
    let mut results: Vec<Vec<FaceRec>> = Vec::new();
    let ends_total = pairs.len() + isolated.len() + uncovered.len();
    if ends_total == 0 {
        // At most one face: the whole component (contrib = 2 - g_f).
        let genus = 2 - target_contrib;
        if genus >= 0 && !(cellular_only && genus != 0) {
            // orientability must match the component when there is no graph
            for orientable in orientability_options(genus as u32, c.orientable) {
                let mut fs = hole_faces.clone();
                fs.push(FaceRec {
                    comp,
                    anchors: Vec::new(),
                    isolated: Vec::new(),
                    circles: Vec::new(),
                    genus: genus as u32,
                    orientable,
                    label: None,
                    is_hole: None,
                });
                results.push(fs);
            }
        }
        // A component with no walks at all and no face is impossible.
        return Ok(results);
    }

    // Group assignment: each of the `ends_total` items gets a group id
    // (restricted growth strings give set partitions).
    let items: Vec<EndItem> = pairs
        .iter()
        .map(|&(o, om)| EndItem::Walk(o, om))
        .chain(isolated.iter().map(|&n| EndItem::Isolated(n)))
        .chain(uncovered.iter().map(|&b| EndItem::Circle(b)))
        .collect();
    let mut assignment = vec![0u32; items.len()];
    partition_rec(
        m,
        comp,
        &items,
        &mut assignment,
        0,
        0,
        target_contrib,
        cellular_only,
        &hole_faces,
        &orbits,
        budget,
        &mut results,
    )?;
    Ok(results)
}

#[derive(Clone, Copy)]
enum EndItem {
    Walk(u32, u32),
    Isolated(u32),
    Circle(u32),
}

fn orientability_options(genus: u32, comp_orientable: bool) -> Vec<bool> {
    let mut out = Vec::new();
    if genus % 2 == 0 {
        out.push(true);
    }
    if genus >= 1 && !comp_orientable {
        // Non-orientable faces can only occur on non-orientable components.
        out.push(false);
    }
    out
}

#[allow(clippy::too_many_arguments)]
fn partition_rec(
    m: &CombMap,
    comp: u32,
    items: &[EndItem],
    assignment: &mut Vec<u32>,
    at: usize,
    n_groups: u32,
    target_contrib: i64,
    cellular_only: bool,
    hole_faces: &[FaceRec],
    orbits: &[Vec<u32>],
    budget: &Budget,
    results: &mut Vec<Vec<FaceRec>>,
) -> Result<(), CapError> {
    if at == items.len() {
        return genus_phase(
            m,
            comp,
            items,
            assignment,
            n_groups,
            target_contrib,
            cellular_only,
            hole_faces,
            orbits,
            budget,
            results,
        );
    }
    budget.charge("enumerate_proper_embeddings", 1)?;
    if cellular_only {
        // Every item becomes its own disk face.
        assignment[at] = n_groups;
        return partition_rec(
            m,
            comp,
            items,
            assignment,
            at + 1,
            n_groups + 1,
            target_contrib,
            cellular_only,
            hole_faces,
            orbits,
            budget,
            results,
        );
    }
    for g in 0..=n_groups {
        assignment[at] = g;
        let ng = n_groups.max(g + 1);
        partition_rec(
            m,
            comp,
            items,
            assignment,
            at + 1,
            ng,
            target_contrib,
            cellular_only,
            hole_faces,
            orbits,
            budget,
            results,
        )?;
    }
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn genus_phase(
    m: &CombMap,
    comp: u32,
    items: &[EndItem],
    assignment: &[u32],
    n_groups: u32,
    target_contrib: i64,
    cellular_only: bool,
    hole_faces: &[FaceRec],
    orbits: &[Vec<u32>],
    budget: &Budget,
    results: &mut Vec<Vec<FaceRec>>,
) -> Result<(), CapError> {
    budget.charge("enumerate_proper_embeddings", 1)?;
    let n_groups = n_groups as usize;
    if n_groups == 0 {
        return Ok(());
    }
    // ends per group
    let mut ends = vec![0i64; n_groups];
    for (i, _) in items.iter().enumerate() {
        ends[assignment[i] as usize] += 1;
    }
    // sum over groups of (2 - g_f - ends_f) == target_contrib
    // => sum g_f = 2*n_groups - sum ends - target_contrib
    let total_genus: i64 = 2 * n_groups as i64 - ends.iter().sum::<i64>() - target_contrib;
    if total_genus < 0 || (cellular_only && total_genus != 0) {
        return Ok(());
    }
    // Distribute total_genus over groups; orientability options per group.
    let comp_orientable = m.complex.components[comp as usize].orientable;
    let mut genera = vec![0u32; n_groups];
    distribute_genus(
        &mut genera,
        0,
        total_genus as u32,
        &mut |genera| -> Result<(), CapError> {
            // Orientability flags per group.
            let opts_per: Vec<Vec<bool>> =
                genera.iter().map(|&g| orientability_options(g, comp_orientable)).collect();
            if opts_per.iter().any(|o| o.is_empty()) {
                return Ok(());
            }
            let mut flags = vec![true; n_groups];
            orient_rec(
                m,
                comp,
                items,
                assignment,
                genera,
                &opts_per,
                &mut flags,
                0,
                hole_faces,
                orbits,
                budget,
                results,
            )
        },
    )?;
    Ok(())
}

fn distribute_genus(
    genera: &mut Vec<u32>,
    at: usize,
    left: u32,
    visit: &mut dyn FnMut(&Vec<u32>) -> Result<(), CapError>,
) -> Result<(), CapError> {
    if at + 1 == genera.len() {
        genera[at] = left;
        return visit(genera);
    }
    for g in 0..=left {
        genera[at] = g;
        distribute_genus(genera, at + 1, left - g, visit)?;
    }
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn orient_rec(
    m: &CombMap,
    comp: u32,
    items: &[EndItem],
    assignment: &[u32],
    genera: &[u32],
    opts_per: &[Vec<bool>],
    flags: &mut Vec<bool>,
    at: usize,
    hole_faces: &[FaceRec],
    orbits: &[Vec<u32>],
    budget: &Budget,
    results: &mut Vec<Vec<FaceRec>>,
) -> Result<(), CapError> {
    if at == genera.len() {
        return anchor_phase(
            m, comp, items, assignment, genera, flags, hole_faces, orbits, budget, results,
        );
    }
    for &o in &opts_per[at] {
        flags[at] = o;
        orient_rec(
            m, comp, items, assignment, genera, opts_per, flags, at + 1, hole_faces, orbits,
            budget, results,
        )?;
    }
    Ok(())
}

/// Pick anchor directions: orientable faces with several walks get all
/// relative direction combinations (up to a global flip); everything else
/// takes the deterministic representative.
#[allow(clippy::too_many_arguments)]
fn anchor_phase(
    _m: &CombMap,
    comp: u32,
    items: &[EndItem],
    assignment: &[u32],
    genera: &[u32],
    flags: &[bool],
    hole_faces: &[FaceRec],
    orbits: &[Vec<u32>],
    budget: &Budget,
    results: &mut Vec<Vec<FaceRec>>,
) -> Result<(), CapError> {
    budget.charge("enumerate_proper_embeddings", 1)?;
    let n_groups = genera.len();
    let mut walks: Vec<Vec<(u32, u32)>> = vec![Vec::new(); n_groups];
    let mut isolated: Vec<Vec<u32>> = vec![Vec::new(); n_groups];
    let mut circles: Vec<Vec<u32>> = vec![Vec::new(); n_groups];
    for (i, item) in items.iter().enumerate() {
        let g = assignment[i] as usize;
        match *item {
            EndItem::Walk(o, om) => walks[g].push((o, om)),
            EndItem::Isolated(n) => isolated[g].push(n),
            EndItem::Circle(b) => circles[g].push(b),
        }
    }
    // Direction choices per group: for orientable groups with w >= 2 walks,
    // 2^(w-1) sign patterns; otherwise one canonical choice.
    let mut choices: Vec<Vec<Vec<u32>>> = Vec::new(); // per group: list of anchor lists
    for g in 0..n_groups {
        let w = walks[g].len();
        let rep = |o: u32| orbits[o as usize][0];
        if w == 0 {
            choices.push(vec![Vec::new()]);
        } else if !flags[g] || w == 1 {
            choices.push(vec![walks[g].iter().map(|&(o, _)| rep(o)).collect()]);
        } else {
            let mut list = Vec::new();
            for mask in 0u32..(1 << (w - 1)) {
                let mut anchors = vec![rep(walks[g][0].0)];
                for (bit, &(o, om)) in walks[g][1..].iter().enumerate() {
                    let pick = if mask & (1 << bit) != 0 { om } else { o };
                    anchors.push(rep(pick));
                }
                list.push(anchors);
            }
            choices.push(list);
        }
    }
    let mut pick = vec![0usize; n_groups];
    loop {
        let mut faces = hole_faces.to_vec();
        for g in 0..n_groups {
            faces.push(FaceRec {
                comp,
                anchors: choices[g][pick[g]].clone(),
                isolated: isolated[g].clone(),
                circles: circles[g].clone(),
                genus: genera[g],
                orientable: flags[g],
                label: None,
                is_hole: None,
            });
        }
        results.push(faces);
        // Next combination.
        let mut i = 0;
        loop {
            if i == n_groups {
                return Ok(());
            }
            pick[i] += 1;
            if pick[i] < choices[i].len() {
                break;
            }
            pick[i] = 0;
            i += 1;
        }
    }
}

/// Segment trace enumeration, then final emission.
#[allow(clippy::too_many_arguments)]
fn trace_phase(
    m: &CombMap,
    t: &TopoComplex,
    seg: usize,
    free_v: u32,
    free_e: u32,
    opts: &EnumOptions,
    budget: &Budget,
    sink: &mut Sink,
) -> Result<(), CapError> {
    if sink.full {
        return Ok(());
    }
    if seg == t.segments.len() {
        let mut finished = m.clone();
        finished.refresh_idents();
        // Reject inconsistent completions cheaply before emitting.
        if !finished.validate().is_empty() {
            return Ok(());
        }
        if opts.cellular_only && !finished.is_cellular() {
            return Ok(());
        }
        return sink.emit(finished);
    }
    // Interior nodes: 0..free_v; conns: Edge/Gap combinations.
    for j in 0..=free_v {
        budget.charge("enumerate_proper_embeddings", 1)?;
        let mut with_nodes = m.clone();
        let mut interior = Vec::new();
        for _ in 0..j {
            interior.push(with_nodes.push_node(Placement::SegmentInterior(seg as u32), None));
        }
        let n_conns = j + 1; // both ends always covered for proper maps
        for mask in 0u64..(1u64 << n_conns) {
            let n_edge_conns = mask.count_ones();
            if n_edge_conns > free_e {
                continue;
            }
            if opts.cellular_only && n_edge_conns != n_conns {
                continue;
            }
            let mut with_trace = with_nodes.clone();
            let mut conns = Vec::new();
            for i in 0..n_conns {
                if mask & (1 << i) != 0 {
                    let id = with_trace.n_graph_edges;
                    with_trace.n_graph_edges += 1;
                    with_trace.tags.push(None);
                    conns.push(Conn::Edge(id));
                } else {
                    conns.push(Conn::Gap(None));
                }
            }
            let trace = &mut with_trace.traces[seg];
            trace.interior_nodes = interior.clone();
            trace.conns = conns;
            with_trace.refresh_idents();
            trace_phase(
                &with_trace,
                t,
                seg + 1,
                free_v - j,
                free_e - n_edge_conns,
                opts,
                budget,
                sink,
            )?;
        }
    }
    Ok(())
}

// ---- fixed-graph cellular mode ----

/// Enumerate cellular proper embeddings of the exact graph `g` on a
/// segment-free complex: assign vertices covering singular points,
/// distribute components, pick rotations and signs, and keep schemes whose
/// unique disk completion matches every component.
fn fixed_graph_phase(
    g: &Graph,
    t: &TopoComplex,
    budget: &Budget,
    sink: &mut Sink,
) -> Result<(), CapError> {
    let n_sing = t.n_singular as usize;
    if g.n_vertices() < n_sing {
        return Ok(());
    }
    // Choose the covering vertices: injective singular -> graph vertex.
    let mut assign: Vec<Option<u32>> = vec![None; n_sing];
    let mut used = vec![false; g.n_vertices()];
    assign_singulars(g, t, &mut assign, &mut used, 0, budget, sink)
}

#[allow(clippy::too_many_arguments)]
fn assign_singulars(
    g: &Graph,
    t: &TopoComplex,
    assign: &mut Vec<Option<u32>>,
    used: &mut Vec<bool>,
    at: usize,
    budget: &Budget,
    sink: &mut Sink,
) -> Result<(), CapError> {
    if sink.full {
        return Ok(());
    }
    if at == assign.len() {
        return place_graph(g, t, assign, budget, sink);
    }
    budget.charge("witness_search", 1)?;
    for v in 0..g.n_vertices() as u32 {
        if used[v as usize] {
            continue;
        }
        assign[at] = Some(v);
        used[v as usize] = true;
        assign_singulars(g, t, assign, used, at + 1, budget, sink)?;
        assign[at] = None;
        used[v as usize] = false;
    }
    Ok(())
}

/// With covering vertices fixed: place each connected component of `g` on a
/// complex component (forced when it contains covering vertices), then
/// distribute each covering vertex's edges among its occurrence copies and
/// enumerate rotations and signs.
fn place_graph(
    g: &Graph,
    t: &TopoComplex,
    assign: &[Option<u32>],
    budget: &Budget,
    sink: &mut Sink,
) -> Result<(), CapError> {
    let comps = g.components();
    // Forced placements: a graph component containing sigma(s) must sit on
    // every complex component where s occurs -- impossible unless all those
    // occurrences are on one complex component or the vertex is the only
    // link. Occurrences of s may span complex components; the copies split
    // accordingly, so the FORCING is per-edge, not per-component. We instead
    // place each graph component either on one complex component or "at a
    // singular point spread": edges of covering vertices can go anywhere
    // their occurrences live. To keep the search tractable we place each
    // graph EDGE on a complex component, constrained so that non-covering
    // vertices keep all their edges together.
    let sing_of_vertex: BTreeMap<u32, u32> = assign
        .iter()
        .enumerate()
        .map(|(s, v)| (v.unwrap(), s as u32))
        .collect();
    // Occurrence components per singular point.
    let occ_comps: Vec<Vec<u32>> = (0..t.n_singular)
        .map(|s| {
            t.occurrences(s)
                .into_iter()
                .filter_map(|o| match o {
                    crate::surface::Occurrence::Interior { comp, .. } => Some(comp),
                    crate::surface::Occurrence::Boundary { comp, .. } => Some(comp),
                    _ => None,
                })
                .collect()
        })
        .collect();
    // Where can a vertex live? Covering vertices: nowhere (their copies are
    // pinned). Free vertices: any complex component.
    let n_comps = t.components.len() as u32;
    // Component choice per graph component that has no covering vertex;
    // graph components WITH covering vertices have their free vertices tied
    // to components reachable through edges -- handled by per-edge
    // assignment with consistency.
    // Enumerate per-edge component assignment directly with consistency for
    // free vertices (all edges at a free vertex share its component).
    let mut edge_comp = vec![0u32; g.n_edges()];
    let _ = comps;
    edge_assign_rec(
        g,
        t,
        assign,
        &sing_of_vertex,
        &occ_comps,
        n_comps,
        &mut edge_comp,
        0,
        budget,
        sink,
    )
}

#[allow(clippy::too_many_arguments)]
fn edge_assign_rec(
    g: &Graph,
    t: &TopoComplex,
    assign: &[Option<u32>],
    sing_of_vertex: &BTreeMap<u32, u32>,
    occ_comps: &[Vec<u32>],
    n_comps: u32,
    edge_comp: &mut Vec<u32>,
    at: usize,
    budget: &Budget,
    sink: &mut Sink,
) -> Result<(), CapError> {
    if sink.full {
        return Ok(());
    }
    if at == g.n_edges() {
        return copies_phase(g, t, assign, sing_of_vertex, occ_comps, edge_comp, budget, sink);
    }
    budget.charge("witness_search", 1)?;
    let (u, v) = g.edge(at as u32);
    'comp: for c in 0..n_comps {
        // Endpoint compatibility: a covering vertex must have an occurrence
        // on c; a free vertex's other assigned edges must agree.
        for x in [u, v] {
            match sing_of_vertex.get(&x) {
                Some(&s) => {
                    if !occ_comps[s as usize].contains(&c) {
                        continue 'comp;
                    }
                }
                None => {
                    for e2 in 0..at {
                        let (a, b) = g.edge(e2 as u32);
                        if (a == x || b == x) && edge_comp[e2] != c {
                            continue 'comp;
                        }
                    }
                }
            }
        }
        edge_comp[at] = c;
        edge_assign_rec(
            g,
            t,
            assign,
            sing_of_vertex,
            occ_comps,
            n_comps,
            edge_comp,
            at + 1,
            budget,
            sink,
        )?;
    }
    Ok(())
}

/// Build the pinned skeleton, distribute each covering vertex's edges among
/// its occurrence copies on the right component, place free vertices, then
/// enumerate rotations/signs and keep valid cellular completions.
#[allow(clippy::too_many_arguments)]
fn copies_phase(
    g: &Graph,
    t: &TopoComplex,
    assign: &[Option<u32>],
    sing_of_vertex: &BTreeMap<u32, u32>,
    _occ_comps: &[Vec<u32>],
    edge_comp: &[u32],
    budget: &Budget,
    sink: &mut Sink,
) -> Result<(), CapError> {
    let mut m = pinned_skeleton(t);
    // Label every node copy with the graph vertex it realizes.
    for node in &mut m.nodes {
        if let Some(s) = node.place.singular(&m.complex) {
            node.label = assign[s as usize];
        }
    }
    // Free vertices -> fresh interior nodes on their component.
    let mut node_of_free: BTreeMap<u32, u32> = BTreeMap::new();
    for v in 0..g.n_vertices() as u32 {
        if sing_of_vertex.contains_key(&v) {
            continue;
        }
        let inc = g.incident_edges(v);
        let comp = if let Some(&e0) = inc.first() {
            edge_comp[e0 as usize]
        } else {
            0 // isolated free vertex: cannot be cellular unless sphere; try comp 0
        };
        node_of_free.insert(v, m.push_node(Placement::Interior(comp), Some(v)));
    }
    // Dart ends: for each edge and each endpoint, the candidate copies.
    // Covering endpoints choose among occurrence copies on edge_comp[e].
    let copy_nodes: Vec<Vec<u32>> = (0..g.n_edges())
        .flat_map(|e| {
            let (u, v) = g.edge(e as u32);
            [(e, u, 0u8), (e, v, 1u8)].into_iter().map(|(e, x, _)| {
                match sing_of_vertex.get(&x) {
                    Some(&s) => (0..m.nodes.len() as u32)
                        .filter(|&n| {
                            m.nodes[n as usize].place.singular(&m.complex) == Some(s)
                                && m.node_component(n) == Some(edge_comp[e])
                        })
                        .collect::<Vec<u32>>(),
                    None => vec![node_of_free[&x]],
                }
            })
        })
        .collect::<Vec<Vec<u32>>>();
    let mut pick = vec![0usize; copy_nodes.len()];
    copies_rec(g, t, &m, &copy_nodes, &mut pick, 0, sing_of_vertex, assign, budget, sink)
}

#[allow(clippy::too_many_arguments)]
fn copies_rec(
    g: &Graph,
    t: &TopoComplex,
    m: &CombMap,
    copy_nodes: &[Vec<u32>],
    pick: &mut Vec<usize>,
    at: usize,
    sing_of_vertex: &BTreeMap<u32, u32>,
    assign: &[Option<u32>],
    budget: &Budget,
    sink: &mut Sink,
) -> Result<(), CapError> {
    if sink.full {
        return Ok(());
    }
    if at == copy_nodes.len() {
        // Materialize edges with chosen copies.
        let mut with_edges = m.clone();
        for e in 0..g.n_edges() {
            let a = copy_nodes[2 * e][pick[2 * e]];
            let b = copy_nodes[2 * e + 1][pick[2 * e + 1]];
            with_edges.edges.push(SurfEdge {
                ends: [a, b],
                flipped: false,
                kind: EdgeKind::Real(e as u32),
            });
        }
        with_edges.n_graph_edges = g.n_edges() as u32;
        with_edges.tags = vec![None; g.n_edges()];
        let _ = (sing_of_vertex, assign);
        return fixed_rotations(t, &with_edges, budget, sink);
    }
    if copy_nodes[at].is_empty() {
        return Ok(());
    }
    budget.charge("witness_search", 1)?;
    for i in 0..copy_nodes[at].len() {
        pick[at] = i;
        copies_rec(g, t, m, copy_nodes, pick, at + 1, sing_of_vertex, assign, budget, sink)?;
    }
    Ok(())
}

fn fixed_rotations(
    t: &TopoComplex,
    m: &CombMap,
    budget: &Budget,
    sink: &mut Sink,
) -> Result<(), CapError> {
    // Reuse the generic per-component rotation/sign machinery with a
    // cellular-only completion, component by component, over the full edge
    // set at once (all edges are already present).
    let opts = EnumOptions { max_vertices: 0, max_edges: 0, cellular_only: true };
    // Rotations for all components at once: collect real darts per node.
    let mut darts: BTreeMap<u32, Vec<u32>> = BTreeMap::new();
    for (ei, e) in m.edges.iter().enumerate() {
        if matches!(e.kind, EdgeKind::Real(_)) {
            darts.entry(e.ends[0]).or_default().push(2 * ei as u32);
            darts.entry(e.ends[1]).or_default().push(2 * ei as u32 + 1);
        }
    }
    let nodes: Vec<u32> = darts.keys().copied().collect();
    let per_node: Vec<Vec<Vec<u32>>> = nodes
        .iter()
        .map(|&n| {
            let ds = &darts[&n];
            if matches!(m.nodes[n as usize].place, Placement::BoundaryMark(..)) {
                permutations(ds)
            } else {
                cyclic_orders(ds)
            }
        })
        .collect();
    let mut chosen = vec![0usize; nodes.len()];
    fixed_rot_rec(t, m, &nodes, &per_node, &mut chosen, 0, &opts, budget, sink)
}

#[allow(clippy::too_many_arguments)]
fn fixed_rot_rec(
    t: &TopoComplex,
    m: &CombMap,
    nodes: &[u32],
    per_node: &[Vec<Vec<u32>>],
    chosen: &mut Vec<usize>,
    at: usize,
    opts: &EnumOptions,
    budget: &Budget,
    sink: &mut Sink,
) -> Result<(), CapError> {
    if sink.full {
        return Ok(());
    }
    if at == nodes.len() {
        let mut with_rot = m.clone();
        for (i, &n) in nodes.iter().enumerate() {
            let reals = &per_node[i][chosen[i]];
            if matches!(with_rot.nodes[n as usize].place, Placement::BoundaryMark(..)) {
                let old = with_rot.rotations[n as usize].clone();
                let mut rot = vec![old[0]];
                rot.extend(reals.iter().copied());
                rot.push(old[1]);
                with_rot.rotations[n as usize] = rot;
            } else {
                with_rot.rotations[n as usize] = reals.clone();
            }
        }
        return fixed_signs(t, &with_rot, opts, budget, sink);
    }
    budget.charge("witness_search", 1)?;
    for c in 0..per_node[at].len() {
        chosen[at] = c;
        fixed_rot_rec(t, m, nodes, per_node, chosen, at + 1, opts, budget, sink)?;
    }
    Ok(())
}

fn fixed_signs(
    t: &TopoComplex,
    m: &CombMap,
    opts: &EnumOptions,
    budget: &Budget,
    sink: &mut Sink,
) -> Result<(), CapError> {
    // Cotree real edges per non-orientable component.
    let mut cotree: Vec<u32> = Vec::new();
    {
        let mut parent: BTreeMap<u32, u32> = BTreeMap::new();
        fn find(p: &mut BTreeMap<u32, u32>, x: u32) -> u32 {
            let px = *p.get(&x).unwrap_or(&x);
            if px == x {
                return x;
            }
            let r = find(p, px);
            p.insert(x, r);
            r
        }
        for (ei, e) in m.edges.iter().enumerate() {
            let comp = m.node_component(e.ends[0]).unwrap();
            let orientable = t.components[comp as usize].orientable;
            let (a, b) = (find(&mut parent, e.ends[0]), find(&mut parent, e.ends[1]));
            if a == b {
                if !orientable && matches!(e.kind, EdgeKind::Real(_)) {
                    cotree.push(ei as u32);
                }
            } else {
                parent.insert(a, b);
            }
        }
    }
    for mask in 0u64..(1u64 << cotree.len()) {
        if sink.full {
            return Ok(());
        }
        budget.charge("witness_search", 1)?;
        let mut with_signs = m.clone();
        for (bit, &ei) in cotree.iter().enumerate() {
            if mask & (1 << bit) != 0 {
                with_signs.edges[ei as usize].flipped = true;
            }
        }
        // Disk completion per component; reject on mismatch.
        let mut ok = true;
        let mut faces = Vec::new();
        for ci in 0..t.components.len() as u32 {
            match component_completions(&with_signs, ci, true, budget)? {
                cs if cs.is_empty() => {
                    ok = false;
                    break;
                }
                mut cs => {
                    debug_assert_eq!(cs.len(), 1, "cellular completion is unique");
                    faces.append(&mut cs.remove(0));
                }
            }
        }
        if !ok {
            continue;
        }
        let mut finished = with_signs.clone();
        finished.faces = faces;
        finished.refresh_idents();
        if !finished.validate().is_empty() {
            continue;
        }
        if opts.cellular_only && !finished.is_cellular() {
            continue;
        }
        sink.emit(finished)?;
    }
    Ok(())
}



