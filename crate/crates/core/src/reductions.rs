//! Instance preprocessing, surface cutting operations, essential-cut
//! closure, and the reduction of embeddability to proper cellular
//! embeddability on a stream of candidate complexes.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec;
use alloc::vec::Vec;

use crate::budget::{Budget, CapError};
use crate::graph::Graph;
use crate::planar::planar;
use crate::simplicial::SimplicialComplex2;
use crate::surface::{Occurrence, SurfaceComponent, TopoComplex};

/// Outcome of the linear-time preprocessing.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PreprocessOutcome {
    /// The complex contains a 3-book; every graph embeds.
    Embeddable,
    Reduced(Graph, SimplicialComplex2),
}

/// The preprocessing of the instance: 3-book short-circuit, removal of
/// isolated vertices on both sides, isolated vertices of the graph become
/// isolated edges, and all segment-homeomorphic components collapse to one
/// edge.
pub fn preprocess_instance(g: &Graph, c: &SimplicialComplex2) -> PreprocessOutcome {
    if c.detect_3book() {
        return PreprocessOutcome::Embeddable;
    }
    let mut c2 = SimplicialComplex2::new();
    let isolated: BTreeSet<u32> = c.isolated_vertices().into_iter().collect();
    for v in 0..c.n_vertices() as u32 {
        if isolated.contains(&v) {
            continue;
        }
        c2.vertex(c.vertex_name(v));
    }
    for (a, b) in c.edges() {
        c2.edge(c.vertex_name(a), c.vertex_name(b));
    }
    for (a, b, t) in c.triangles() {
        c2.triangle(c.vertex_name(a), c.vertex_name(b), c.vertex_name(t));
    }
    // Remove the same number of isolated vertices from g, to the extent
    // possible.
    let mut g2 = Graph::new();
    let g_isolated: Vec<u32> =
        (0..g.n_vertices() as u32).filter(|&v| g.is_isolated(v)).collect();
    let drop: BTreeSet<u32> = g_isolated.iter().copied().take(isolated.len()).collect();
    let mut vmap: BTreeMap<u32, u32> = BTreeMap::new();
    for v in 0..g.n_vertices() as u32 {
        if drop.contains(&v) {
            continue;
        }
        vmap.insert(v, g2.add_vertex(g.vertex_name(v)));
    }
    for &(u, v) in g.edges() {
        let (u, v) = (vmap[&u], vmap[&v]);
        g2.add_edge(u, v);
    }
    let g2 = normalize_graph(&g2);
    PreprocessOutcome::Reduced(g2, c2)
}

/// The graph-side bullets of the preprocessing: isolated vertices become
/// isolated edges; at most one component homeomorphic to a segment remains.
pub fn normalize_graph(g: &Graph) -> Graph {
    let mut out = Graph::new();
    let mut vmap: BTreeMap<u32, u32> = BTreeMap::new();
    for v in 0..g.n_vertices() as u32 {
        vmap.insert(v, out.add_vertex(g.vertex_name(v)));
    }
    for &(u, v) in g.edges() {
        out.add_edge(vmap[&u], vmap[&v]);
    }
    for v in 0..g.n_vertices() as u32 {
        if g.is_isolated(v) {
            let w = out.add_vertex(&alloc::format!("{}tip", g.vertex_name(v)));
            out.add_edge(vmap[&v], w);
        }
    }
    let comps = out.components();
    let segs: Vec<&Vec<u32>> = comps.iter().filter(|m| out.component_is_segment(m)).collect();
    if segs.len() >= 2 {
        let doomed: BTreeSet<u32> = segs.iter().flat_map(|m| m.iter().copied()).collect();
        let mut g3 = Graph::new();
        let mut vmap2: BTreeMap<u32, u32> = BTreeMap::new();
        for v in 0..out.n_vertices() as u32 {
            if doomed.contains(&v) {
                continue;
            }
            vmap2.insert(v, g3.add_vertex(out.vertex_name(v)));
        }
        for &(u, v) in out.edges() {
            if doomed.contains(&u) {
                continue;
            }
            g3.add_edge(vmap2[&u], vmap2[&v]);
        }
        let a = g3.add_vertex("sega");
        let b = g3.add_vertex("segb");
        g3.add_edge(a, b);
        return g3;
    }
    out
}

/// One cutting operation's outcome: the pieces, and whether the defining
/// curve was non-contractible.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct CutResult {
    pub pieces: Vec<SurfaceComponent>,
    pub essential: bool,
}

/// Every way of cutting one component along a simple closed curve and
/// capping, up to homeomorphism, including all distributions of boundary
/// circles and marks between the sides of a separating cut.
pub fn cut_results(s: &SurfaceComponent) -> Vec<CutResult> {
    let mut out: BTreeSet<CutResult> = BTreeSet::new();
    let g = s.genus;
    let items: Vec<DistItem> = s
        .boundaries
        .iter()
        .map(|cy| DistItem::Circle(cy.clone()))
        .chain(s.interior_marks.iter().map(|&m| DistItem::Mark(m)))
        .collect();
    // Separating: g = g1 + g2; a non-orientable surface needs at least one
    // non-orientable side; all boundary/mark distributions.
    for g1 in 0..=g {
        let g2 = g - g1;
        for o1 in orientability_cases(g1) {
            for o2 in orientability_cases(g2) {
                if s.orientable && !(o1 && o2) {
                    continue;
                }
                if !s.orientable && o1 && o2 {
                    continue;
                }
                for mask in 0u64..(1u64 << items.len()) {
                    let mut p1 = SurfaceComponent {
                        orientable: o1,
                        genus: g1,
                        interior_marks: Vec::new(),
                        boundaries: Vec::new(),
                    };
                    let mut p2 = SurfaceComponent {
                        orientable: o2,
                        genus: g2,
                        interior_marks: Vec::new(),
                        boundaries: Vec::new(),
                    };
                    for (i, item) in items.iter().enumerate() {
                        let target = if mask & (1 << i) != 0 { &mut p2 } else { &mut p1 };
                        match item {
                            DistItem::Circle(cy) => target.boundaries.push(cy.clone()),
                            DistItem::Mark(m) => target.interior_marks.push(*m),
                        }
                    }
                    let bare_sphere = |p: &SurfaceComponent| {
                        p.orientable
                            && p.genus == 0
                            && p.boundaries.is_empty()
                            && p.interior_marks.is_empty()
                    };
                    let essential = !(bare_sphere(&p1) || bare_sphere(&p2));
                    let mut pieces = vec![normalize(p1), normalize(p2)];
                    pieces.sort();
                    out.insert(CutResult { pieces, essential });
                }
            }
        }
    }
    // Non-separating two-sided: genus drops by two.
    if g >= 2 {
        let g2 = g - 2;
        let options: Vec<bool> =
            if s.orientable { vec![true] } else { orientability_cases(g2) };
        for o in options {
            let piece = SurfaceComponent {
                orientable: o,
                genus: g2,
                interior_marks: s.interior_marks.clone(),
                boundaries: s.boundaries.clone(),
            };
            out.insert(CutResult { pieces: vec![normalize(piece)], essential: true });
        }
    }
    // One-sided: non-orientable only, genus drops by one.
    if !s.orientable && g >= 1 {
        let g2 = g - 1;
        for o in orientability_cases(g2) {
            let piece = SurfaceComponent {
                orientable: o,
                genus: g2,
                interior_marks: s.interior_marks.clone(),
                boundaries: s.boundaries.clone(),
            };
            out.insert(CutResult { pieces: vec![normalize(piece)], essential: true });
        }
    }
    out.into_iter().collect()
}

enum DistItem {
    Circle(Vec<u32>),
    Mark(u32),
}

fn orientability_cases(genus: u32) -> Vec<bool> {
    let mut v = Vec::new();
    if genus % 2 == 0 {
        v.push(true);
    }
    if genus >= 1 {
        v.push(false);
    }
    v
}

fn normalize(c: SurfaceComponent) -> SurfaceComponent {
    let mut t = TopoComplex { components: vec![c], segments: Vec::new(), n_singular: 0 };
    crate::simplicial::normalize_boundary_cycles(&mut t);
    t.components.pop().unwrap()
}

fn state_key(state: &[SurfaceComponent]) -> Vec<SurfaceComponent> {
    let mut v: Vec<SurfaceComponent> = state.iter().cloned().map(normalize).collect();
    v.sort();
    v
}

/// The termination potential: twice the total genus minus the number of
/// components. Strictly decreases along every essential cutting operation.
pub fn potential(state: &[SurfaceComponent]) -> i64 {
    let genus: i64 = state.iter().map(|c| c.genus as i64).sum();
    2 * genus - state.len() as i64
}

/// Closure of a possibly disconnected surface under essential cutting
/// operations (including zero cuts), up to homeomorphism with labelled
/// marks.
pub fn enumerate_essential_cuts(
    start: &[SurfaceComponent],
    budget: &Budget,
) -> Result<Vec<Vec<SurfaceComponent>>, CapError> {
    let mut seen: BTreeSet<Vec<SurfaceComponent>> = BTreeSet::new();
    let start_key = state_key(start);
    let mut queue = vec![start_key.clone()];
    seen.insert(start_key);
    while let Some(state) = queue.pop() {
        budget.charge("essential_cuts", 1)?;
        for (ci, comp) in state.iter().enumerate() {
            for cr in cut_results(comp) {
                if !cr.essential {
                    continue;
                }
                let mut next: Vec<SurfaceComponent> = state.clone();
                next.remove(ci);
                next.extend(cr.pieces.iter().cloned());
                debug_assert!(
                    potential(&next) < potential(&state),
                    "potential must strictly decrease"
                );
                let key = state_key(&next);
                if seen.insert(key.clone()) {
                    queue.push(key);
                }
            }
        }
    }
    Ok(seen.into_iter().collect())
}

/// The output of the reduction to proper cellular embeddings.
#[derive(Debug, Clone)]
pub struct Cellularized {
    /// The graph became empty after removing planar components.
    pub short_circuit: bool,
    /// Dissolved core (before subdivision).
    pub core: Graph,
    /// The working graph: core subdivided `subdivisions` times per edge.
    pub g_prime: Graph,
    pub subdivisions: usize,
    /// Candidate complexes, deduplicated up to homeomorphism.
    pub candidates: Vec<TopoComplex>,
}

/// Interior marks are temporarily regarded as small boundary circles; the
/// flag bit marks the converted ones so they can be restored afterwards.
const INTERIOR_FLAG: u32 = 1 << 31;

/// The reduction: remove planar components (when the detached surface is
/// non-empty), split segments in five and take subsets, dissolve and
/// subdivide the graph, split singular points along link-component
/// partitions, close under essential cuts with component removal, and
/// deduplicate.
pub fn cellularize_candidates(
    g: &Graph,
    t: &TopoComplex,
    budget: &Budget,
) -> Result<Cellularized, CapError> {
    let c_size = t.size().max(1);
    // Planar component removal (only meaningful with a detached surface).
    let g1 = if !t.components.is_empty() {
        let comps = g.components();
        let mut keep_edges: Vec<u32> = Vec::new();
        for members in &comps {
            let edge_ids: Vec<u32> = (0..g.n_edges() as u32)
                .filter(|&e| members.contains(&g.edge(e).0))
                .collect();
            if edge_ids.is_empty() {
                continue;
            }
            let (sub, _) = g.edge_subgraph(&edge_ids);
            if !planar(&sub) {
                keep_edges.extend(edge_ids);
            }
        }
        keep_edges.sort_unstable();
        g.edge_subgraph(&keep_edges).0
    } else {
        g.clone()
    };
    if g1.n_edges() == 0 && !t.components.is_empty() {
        return Ok(Cellularized {
            short_circuit: true,
            core: Graph::new(),
            g_prime: Graph::new(),
            subdivisions: 5 * c_size,
            candidates: Vec::new(),
        });
    }
    let core = g1.dissolve_degree_two();
    let g_prime = core.subdivide_edges(5 * c_size);
    let n = g.n_vertices() + g.n_edges();
    assert!(g_prime.n_vertices() <= 5 * c_size * n.max(1), "|V(G')| exceeds 5cn");

    // Segment splitting into five, then removal of sub-segment subsets.
    let base = split_segments(t);
    let n_subsegs = base.segments.len();
    if n_subsegs > 16 {
        return Err(CapError { stage: "cellularize_segments", limit: 16 });
    }
    let mut after_segments: Vec<TopoComplex> = Vec::new();
    for mask in 0u64..(1u64 << n_subsegs) {
        budget.charge("cellularize", 1)?;
        let mut v = base.clone();
        v.segments = v
            .segments
            .iter()
            .enumerate()
            .filter(|(i, _)| mask & (1 << i) == 0)
            .map(|(_, s)| *s)
            .collect();
        drop_vacuous_marks(&mut v);
        after_segments.push(v);
    }

    // Link-component partitions at every singular point.
    let mut after_partitions: Vec<TopoComplex> = Vec::new();
    for variant in &after_segments {
        partition_singulars(variant, budget, &mut after_partitions)?;
    }

    // Interior marks as small labelled circles; essential-cut closure;
    // component subsets; marks restored.
    let mut raw_candidates: Vec<TopoComplex> = Vec::new();
    for variant in &after_partitions {
        let mut converted = variant.clone();
        for comp in &mut converted.components {
            let marks = core::mem::take(&mut comp.interior_marks);
            for m in marks {
                comp.boundaries.push(vec![m | INTERIOR_FLAG]);
            }
        }
        let closure = enumerate_essential_cuts(&converted.components, budget)?;
        for state in closure {
            let k = state.len();
            if k > 12 {
                return Err(CapError { stage: "cellularize_components", limit: 12 });
            }
            for mask in 0u64..(1u64 << k) {
                budget.charge("cellularize", 1)?;
                let comps: Vec<SurfaceComponent> = state
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| mask & (1 << i) == 0)
                    .map(|(_, c)| c.clone())
                    .collect();
                let mut cand = TopoComplex {
                    components: comps,
                    segments: converted.segments.clone(),
                    n_singular: converted.n_singular,
                };
                for comp in &mut cand.components {
                    let circles = core::mem::take(&mut comp.boundaries);
                    for cy in circles {
                        if cy.len() == 1 && cy[0] & INTERIOR_FLAG != 0 {
                            comp.interior_marks.push(cy[0] & !INTERIOR_FLAG);
                        } else {
                            comp.boundaries.push(cy);
                        }
                    }
                    comp.interior_marks.sort_unstable();
                }
                drop_vacuous_marks(&mut cand);
                cand.compact_singulars();
                crate::simplicial::normalize_boundary_cycles(&mut cand);
                if cand.validate().is_err() {
                    continue;
                }
                raw_candidates.push(cand);
            }
        }
    }

    let mut candidates: Vec<TopoComplex> = Vec::new();
    for cand in raw_candidates {
        budget.charge("cellularize_dedup", 1)?;
        if !candidates.iter().any(|c| crate::homeo::are_homeomorphic(c, &cand)) {
            candidates.push(cand);
        }
    }
    candidates.sort();
    Ok(Cellularized {
        short_circuit: false,
        core,
        g_prime,
        subdivisions: 5 * c_size,
        candidates,
    })
}

/// Replace each isolated segment with a chain of five sub-segments joined
/// at fresh singular points.
fn split_segments(t: &TopoComplex) -> TopoComplex {
    let mut out = t.clone();
    let mut next = t.n_singular;
    let mut segments = Vec::new();
    for &(a, b) in &t.segments {
        let joints: Vec<u32> = (0..4).map(|k| next + k).collect();
        next += 4;
        let chain = [a, joints[0], joints[1], joints[2], joints[3], b];
        for w in chain.windows(2) {
            segments.push((w[0], w[1]));
        }
    }
    out.segments = segments;
    out.n_singular = next;
    out
}

/// Remove surface marks of points that are no longer genuinely singular
/// (single occurrence, no segment end), then drop orphaned ids.
fn drop_vacuous_marks(t: &mut TopoComplex) {
    loop {
        let mut changed = false;
        for s in 0..t.n_singular {
            let occ = t.occurrences(s);
            let has_seg = occ.iter().any(|o| matches!(o, Occurrence::SegmentEnd { .. }));
            if occ.len() == 1 && !has_seg {
                match occ[0] {
                    Occurrence::Interior { comp, idx } => {
                        t.components[comp as usize].interior_marks.remove(idx as usize);
                    }
                    Occurrence::Boundary { comp, circle, pos } => {
                        t.components[comp as usize].boundaries[circle as usize]
                            .remove(pos as usize);
                    }
                    Occurrence::SegmentEnd { .. } => unreachable!(),
                }
                changed = true;
                break;
            }
        }
        if !changed {
            break;
        }
    }
    t.compact_singulars();
}

/// For each singular point, enumerate the partitions of its occurrences
/// (link components) and split the point accordingly.
fn partition_singulars(
    t: &TopoComplex,
    budget: &Budget,
    out: &mut Vec<TopoComplex>,
) -> Result<(), CapError> {
    fn rec(
        t: &TopoComplex,
        s: u32,
        budget: &Budget,
        out: &mut Vec<TopoComplex>,
    ) -> Result<(), CapError> {
        if s >= t.n_singular {
            let mut v = t.clone();
            drop_vacuous_marks(&mut v);
            v.compact_singulars();
            out.push(v);
            return Ok(());
        }
        let occ = t.occurrences(s);
        if occ.len() <= 1 {
            return rec(t, s + 1, budget, out);
        }
        for partition in set_partitions(occ.len()) {
            budget.charge("cellularize_partitions", 1)?;
            let n_parts = partition.iter().max().map(|&p| p + 1).unwrap_or(1);
            let mut v = t.clone();
            let fresh_base = v.n_singular;
            v.n_singular += n_parts as u32 - 1;
            for (oi, &part) in partition.iter().enumerate() {
                if part == 0 {
                    continue;
                }
                let new_id = fresh_base + part as u32 - 1;
                match occ[oi] {
                    Occurrence::Interior { comp, idx } => {
                        v.components[comp as usize].interior_marks[idx as usize] = new_id;
                    }
                    Occurrence::Boundary { comp, circle, pos } => {
                        v.components[comp as usize].boundaries[circle as usize][pos as usize] =
                            new_id;
                    }
                    Occurrence::SegmentEnd { seg, end } => {
                        let sref = &mut v.segments[seg as usize];
                        if end == 0 {
                            sref.0 = new_id;
                        } else {
                            sref.1 = new_id;
                        }
                    }
                }
            }
            rec(&v, s + 1, budget, out)?;
        }
        Ok(())
    }
    rec(t, 0, budget, out)
}

/// Set partitions of n items as restricted growth strings.
fn set_partitions(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    let mut cur = vec![0usize; n];
    fn rec(cur: &mut Vec<usize>, at: usize, maxp: usize, out: &mut Vec<Vec<usize>>) {
        if at == cur.len() {
            out.push(cur.clone());
            return;
        }
        for p in 0..=maxp + 1 {
            cur[at] = p;
            rec(cur, at + 1, maxp.max(p), out);
        }
    }
    rec(&mut cur, 1, 0, &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn preprocess_three_book_short_circuit() {
        let c = crate::simplicial::fixtures::three_book();
        let g = Graph::parse("a b\na c\na d\na e\nb c\nb d\nb e\nc d\nc e\nd e").unwrap();
        assert_eq!(preprocess_instance(&g, &c), PreprocessOutcome::Embeddable);
    }

    #[test]
    fn preprocess_isolated_vertices() {
        let mut c = SimplicialComplex2::new();
        c.triangle("a", "b", "c");
        c.vertex("i1");
        c.vertex("i2");
        let g = Graph::parse("node x\nnode y\nnode z\nu v").unwrap();
        let PreprocessOutcome::Reduced(g2, c2) = preprocess_instance(&g, &c) else {
            panic!("no 3-book here");
        };
        assert!(c2.isolated_vertices().is_empty());
        assert!((0..g2.n_vertices() as u32).all(|v| !g2.is_isolated(v)));
        // One isolated graph vertex survived and became an edge; then the
        // two segment components (u-v and the new edge) collapse into one.
        let comps = g2.components();
        let segs = comps.iter().filter(|m| g2.component_is_segment(m)).count();
        assert_eq!(segs, 1);
        assert_eq!(g2.n_edges(), 1);
    }

    #[test]
    fn preprocess_collapses_segment_components() {
        let g = Graph::parse("a b\nc d\ne f\nx y\ny z\nz x").unwrap();
        let g2 = normalize_graph(&g);
        let comps = g2.components();
        let segs = comps.iter().filter(|m| g2.component_is_segment(m)).count();
        assert_eq!(segs, 1);
        assert_eq!(g2.n_edges(), 3 + 1);
    }

    #[test]
    fn cut_results_tables() {
        let sphere = SurfaceComponent::sphere();
        let cuts = cut_results(&sphere);
        assert_eq!(cuts.len(), 1);
        assert!(!cuts[0].essential);
        assert_eq!(
            cuts[0].pieces,
            vec![SurfaceComponent::sphere(), SurfaceComponent::sphere()]
        );
        let cuts = cut_results(&SurfaceComponent::torus());
        assert_eq!(cuts.len(), 2);
        let cuts = cut_results(&SurfaceComponent::klein_bottle());
        assert_eq!(cuts.len(), 4);
    }

    #[test]
    fn cut_count_bound_g_plus_3() {
        for genus in 0..=6u32 {
            for orientable in [true, false] {
                if orientable && genus % 2 != 0 || !orientable && genus == 0 {
                    let s = SurfaceComponent::closed(orientable, genus);
                    let _ = s;
                }
                if (orientable && genus % 2 != 0) || (!orientable && genus == 0) {
                    continue;
                }
                let s = SurfaceComponent::closed(orientable, genus);
                let cuts = cut_results(&s);
                assert!(
                    cuts.len() <= genus as usize + 3,
                    "{orientable} genus {genus}: {} > {}",
                    cuts.len(),
                    genus + 3
                );
            }
        }
    }

    #[test]
    fn essential_closures() {
        let b = Budget::new(100_000);
        let cl = enumerate_essential_cuts(&[SurfaceComponent::torus()], &b).unwrap();
        assert_eq!(cl.len(), 2);
        let cl = enumerate_essential_cuts(&[SurfaceComponent::klein_bottle()], &b).unwrap();
        assert_eq!(cl.len(), 6);
        let cl = enumerate_essential_cuts(&[SurfaceComponent::sphere()], &b).unwrap();
        assert_eq!(cl.len(), 1);
    }

    #[test]
    fn cellularize_torus_k5() {
        let k5 = Graph::parse("a b\na c\na d\na e\nb c\nb d\nb e\nc d\nc e\nd e").unwrap();
        let t = TopoComplex::torus();
        let out = cellularize_candidates(&k5, &t, &Budget::new(1_000_000)).unwrap();
        assert!(!out.short_circuit);
        assert_eq!(out.subdivisions, 5 * t.size());
        assert_eq!(out.g_prime.n_edges(), 10 * (out.subdivisions + 1));
        assert!(out.candidates.iter().any(|c| crate::homeo::are_homeomorphic(c, &t)));
        assert!(out
            .candidates
            .iter()
            .any(|c| crate::homeo::are_homeomorphic(c, &TopoComplex::sphere())));
        assert!(out
            .candidates
            .iter()
            .any(|c| c.components.is_empty() && c.segments.is_empty()));
        assert_eq!(out.candidates.len(), 3);
        for c in &out.candidates {
            assert!(c.size() <= 10 * t.size(), "candidate size blowup");
        }
    }

    #[test]
    fn cellularize_sphere_c4_short_circuit() {
        let c4 = Graph::parse("a b\nb c\nc d\nd a").unwrap();
        let out =
            cellularize_candidates(&c4, &TopoComplex::sphere(), &Budget::new(1_000_000)).unwrap();
        assert!(out.short_circuit);
    }

    #[test]
    fn cellularize_lone_segment_subsets() {
        let star = Graph::parse("c x\nc y\nc z").unwrap();
        let t = TopoComplex::lone_segment();
        let out = cellularize_candidates(&star, &t, &Budget::new(10_000_000)).unwrap();
        assert!(!out.short_circuit);
        // Retained sub-segment runs dissolve to plain segments, and the
        // singular-partition step can split any joint, so the classes are
        // exactly the possible final segment counts 0..=5.
        assert_eq!(out.candidates.len(), 6);
        for c in &out.candidates {
            assert!(c.components.is_empty());
            assert!(c.segments.len() <= 5);
        }
    }

    #[test]
    fn cellularize_branchwidth_witness() {
        let k4 = Graph::parse("a b\na c\na d\nb c\nb d\nc d").unwrap();
        let t = TopoComplex::lone_segment();
        let out = cellularize_candidates(&k4, &t, &Budget::new(10_000_000)).unwrap();
        let core_bd = crate::branchdecomp::exact_branch_decomposition(&out.core, 9).unwrap();
        let w = core_bd.width(&out.core);
        let ext = crate::branchdecomp::extend_for_subdivision(&core_bd, out.subdivisions);
        ext.validate(&out.g_prime).unwrap();
        assert_eq!(w, 3);
        assert!(ext.width(&out.g_prime) <= w);
    }
}
