//! Surgical edits on maps: edge deletion with face-record regrouping, edge
//! subdivision, and the cleanup passes the partitioning-graph calculus
//! needs.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use super::assemble::ParityUf;
use super::trace::{co_state, mirror_state, state_dart};
use super::{CombMap, Conn, EdgeKind, FaceRec, Placement, SegmentTrace};

/// Delete a set of surface edges (given by edge indices into `m.edges`),
/// merging the face records across the removed bands. Arc edges cannot be
/// deleted. Isolated nodes produced by the deletion stay (callers decide
/// what to remove). Graph edge ids are compacted.
pub fn delete_surface_edges(m: &CombMap, doomed: &BTreeSet<u32>) -> Result<CombMap, String> {
    for &ei in doomed {
        if matches!(m.edges[ei as usize].kind, EdgeKind::Arc(..)) {
            return Err(format!("cannot delete boundary arc {ei}"));
        }
    }
    let (orbit_of, _) = m.orbits();
    // Face of each orbit (every orbit is anchored by exactly one face
    // directly or through its mirror).
    let mut face_of_orbit: BTreeMap<u32, usize> = BTreeMap::new();
    for (fi, f) in m.faces.iter().enumerate() {
        for &a in &f.anchors {
            face_of_orbit.insert(orbit_of[a as usize], fi);
            face_of_orbit.insert(orbit_of[mirror_state(m, a) as usize], fi);
        }
    }
    let face_of_state = |s: u32| -> usize { face_of_orbit[&orbit_of[s as usize]] };

    // Group faces across deleted bands; track per-group band count and the
    // orientation constraints of the band gluings.
    let mut uf = ParityUf::new(m.faces.len());
    let mut oriented = vec![true; m.faces.len()];
    for (fi, f) in m.faces.iter().enumerate() {
        if !f.orientable {
            oriented[fi] = false;
        }
    }
    let mut band_count: BTreeMap<usize, i64> = BTreeMap::new();
    let mut twisted: BTreeSet<usize> = BTreeSet::new();
    for &ei in doomed {
        // Side 1: states (4ei, 4ei+1) are dart 2ei dir 0/1; pick per side
        // the state aligned with its face's anchor orientation.
        let s_a = aligned_side_state(m, &orbit_of, &face_of_orbit, 4 * ei);
        let s_b = aligned_side_state(m, &orbit_of, &face_of_orbit, 4 * ei + 2);
        let fa = face_of_state(s_a);
        let fb = face_of_state(s_b);
        // Oriented gluing when the aligned states are co-oriented.
        let rel = co_state(m, s_a) != s_b;
        let ra = uf.find(fa).0;
        let rb = uf.find(fb).0;
        let merged_root;
        if !uf.union(fa, fb, rel) {
            // Parity contradiction: the group becomes non-orientable.
            merged_root = uf.find(fa).0;
            twisted.insert(merged_root);
        } else {
            merged_root = uf.find(fa).0;
        }
        // Accumulate band counts on the new root.
        let mut bands = 0;
        for r in [ra, rb] {
            if r != merged_root {
                bands += band_count.remove(&r).unwrap_or(0);
                if twisted.remove(&r) {
                    twisted.insert(merged_root);
                }
                if !oriented[r] {
                    oriented[merged_root] = false;
                }
            }
        }
        *band_count.entry(merged_root).or_insert(0) += bands + 1;
    }

    // Build the new map skeleton.
    let mut new = m.clone();
    // Remap edges.
    let mut edge_map: BTreeMap<u32, u32> = BTreeMap::new();
    let mut new_edges = Vec::new();
    for (ei, e) in m.edges.iter().enumerate() {
        if doomed.contains(&(ei as u32)) {
            continue;
        }
        edge_map.insert(ei as u32, new_edges.len() as u32);
        new_edges.push(e.clone());
    }
    new.edges = new_edges;
    for (v, order) in m.rotations.iter().enumerate() {
        new.rotations[v] = order
            .iter()
            .filter(|&&d| !doomed.contains(&(d / 2)))
            .map(|&d| edge_map[&(d / 2)] * 2 + d % 2)
            .collect();
    }
    // Compact graph edge ids (deleted ids vanish).
    compact_graph_edge_ids(&mut new);

    // Retrace and rebuild faces.
    let (new_orbit_of, new_orbits) = new.orbits();
    // Old face -> group root.
    let group_of_face: Vec<usize> = (0..m.faces.len()).map(|fi| uf.find(fi).0).collect();
    // Assign new orbits to groups via any surviving state.
    let old_state_of_new = |s: u32| -> u32 {
        // Map a new state back to the old state id (edge indices shifted).
        let d = state_dart(s);
        let (new_e, side) = (d / 2, d % 2);
        let old_e = *edge_map
            .iter()
            .find(|(_, &v)| v == new_e)
            .map(|(k, _)| k)
            .expect("edge mapped");
        (old_e * 2 + side) * 2 + super::trace::state_dir(s)
    };
    let mut group_faces: BTreeMap<usize, Vec<u32>> = BTreeMap::new(); // group -> new orbit reps
    let mut claimed_pairs: BTreeSet<u32> = BTreeSet::new();
    for (oi, orbit) in new_orbits.iter().enumerate() {
        let pair = {
            let s = orbit[0];
            let a = oi as u32;
            let b = new_orbit_of[mirror_state(&new, s) as usize];
            a.min(b)
        };
        if !claimed_pairs.insert(pair) {
            continue;
        }
        let old_state = old_state_of_new(orbit[0]);
        let g = group_of_face[face_of_state(old_state)];
        group_faces.entry(g).or_default().push(orbit[0]);
    }
    // Isolated nodes: previously isolated keep their face's group; newly
    // isolated (all darts deleted) pick the group of any old incident face.
    let mut group_isolated: BTreeMap<usize, Vec<u32>> = BTreeMap::new();
    let mut group_circles: BTreeMap<usize, Vec<(u32, u32)>> = BTreeMap::new();
    for (fi, f) in m.faces.iter().enumerate() {
        let g = group_of_face[fi];
        for &n in &f.isolated {
            group_isolated.entry(g).or_default().push(n);
        }
        for &b in &f.circles {
            group_circles.entry(g).or_default().push((f.comp, b));
        }
    }
    for (ni, order) in m.rotations.iter().enumerate() {
        if order.is_empty() || !new.rotations[ni].is_empty() {
            continue;
        }
        // Newly isolated: group of the face on either side of a deleted dart.
        let d = order[0];
        let g = group_of_face[face_of_state(d * 2)];
        group_isolated.entry(g).or_default().push(ni as u32);
    }

    // Per-group topology via Euler characteristic accounting:
    //   contrib(new face) = sum contrib(old faces) - #bands
    let mut new_faces: Vec<FaceRec> = Vec::new();
    let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for fi in 0..m.faces.len() {
        groups.entry(group_of_face[fi]).or_default().push(fi);
    }
    for (g, olds) in groups {
        let comp = m.faces[olds[0]].comp;
        let anchors_raw = group_faces.remove(&g).unwrap_or_default();
        let isolated = group_isolated.remove(&g).unwrap_or_default();
        let circles: Vec<u32> = group_circles
            .remove(&g)
            .unwrap_or_default()
            .into_iter()
            .map(|(c, b)| {
                debug_assert_eq!(c, comp);
                b
            })
            .collect();
        let bands = band_count.get(&g).copied().unwrap_or(0);
        let contrib: i64 =
            olds.iter().map(|&fi| 2 - m.faces[fi].genus as i64 - m.faces[fi].ends() as i64).sum();
        let new_contrib = contrib - bands;
        let ends = anchors_raw.len() as i64 + isolated.len() as i64 + circles.len() as i64;
        let genus = 2 - ends - new_contrib;
        if genus < 0 {
            return Err(format!("deletion produced negative face genus in group {g}"));
        }
        // Orientability: all constituents orientable, no parity conflict,
        // no twisted band.
        let orientable = olds.iter().all(|&fi| oriented[uf.find(fi).0] && m.faces[fi].orientable)
            && !twisted.contains(&g)
            && genus % 2 == 0;
        let is_hole = if olds.len() == 1 { m.faces[olds[0]].is_hole } else { None };
        // Merged groups absorb dissolved 0-labelled regions into the
        // surrounding class; the surviving label is the largest present.
        let label = olds.iter().filter_map(|&fi| m.faces[fi].label).max();
        // Anchor directions: for orientable merged faces, choose each new
        // orbit so that its states' old faces induce it positively.
        let mut anchors = Vec::new();
        for rep in anchors_raw {
            let a = if orientable {
                orient_new_anchor(m, &new, rep, &orbit_of, &face_of_orbit, &mut uf, &group_of_face, &old_state_of_new)
            } else {
                canonical_anchor(&new, &new_orbit_of, rep)
            };
            anchors.push(a);
        }
        anchors.sort_unstable();
        new_faces.push(FaceRec {
            comp,
            anchors,
            isolated: {
                let mut v = isolated;
                v.sort_unstable();
                v.dedup();
                v
            },
            circles: {
                let mut v = circles;
                v.sort_unstable();
                v
            },
            genus: genus as u32,
            orientable,
            label,
            is_hole,
        });
    }
    new.faces = new_faces;
    new.refresh_idents();
    Ok(new)
}

/// The state on side-pair base `sbase` (sbase = 4*edge or 4*edge+2... here
/// we pass the lowest state of the side) that lies on its face's anchored
/// orbit direction.
fn aligned_side_state(
    m: &CombMap,
    orbit_of: &[u32],
    face_of_orbit: &BTreeMap<u32, usize>,
    side_state: u32,
) -> u32 {
    // Side states are s and mirror(s).
    let s = side_state;
    let sm = mirror_state(m, s);
    let f = face_of_orbit[&orbit_of[s as usize]];
    let anchored: BTreeSet<u32> =
        m.faces[f].anchors.iter().map(|&a| orbit_of[a as usize]).collect();
    if anchored.contains(&orbit_of[s as usize]) {
        s
    } else {
        debug_assert!(anchored.contains(&orbit_of[sm as usize]));
        sm
    }
}

/// For an orientable merged face, pick the direction of the new orbit that
/// the solved orientation induces: the one whose states sat on anchored
/// orbits of old faces with even parity (relative to the group root).
fn orient_new_anchor(
    m: &CombMap,
    new: &CombMap,
    rep: u32,
    old_orbit_of: &[u32],
    face_of_orbit: &BTreeMap<u32, usize>,
    uf: &mut ParityUf,
    _group_of_face: &[usize],
    old_state_of_new: &dyn Fn(u32) -> u32,
) -> u32 {
    let old = old_state_of_new(rep);
    let fi = face_of_orbit[&old_orbit_of[old as usize]];
    let anchored: BTreeSet<u32> =
        m.faces[fi].anchors.iter().map(|&a| old_orbit_of[a as usize]).collect();
    let on_anchor = anchored.contains(&old_orbit_of[old as usize]);
    let (_, parity) = uf.find(fi);
    // parity false: face keeps its orientation; anchored direction stays.
    let keep = on_anchor ^ parity;
    if keep {
        rep
    } else {
        mirror_state(new, rep)
    }
}

fn canonical_anchor(m: &CombMap, orbit_of: &[u32], rep: u32) -> u32 {
    // Deterministic: the least state among the orbit and its mirror.
    let a = orbit_of[rep as usize];
    let b = orbit_of[mirror_state(m, rep) as usize];
    let (_, orbits) = m.orbits();
    let min_a = *orbits[a as usize].iter().min().unwrap();
    let min_b = *orbits[b as usize].iter().min().unwrap();
    min_a.min(min_b)
}

/// Renumber graph edge ids to 0..k preserving order of appearance (surface
/// edges by index, then trace edges).
pub fn compact_graph_edge_ids(m: &mut CombMap) {
    let mut map: BTreeMap<u32, u32> = BTreeMap::new();
    let mut next = 0u32;
    let mut old_tags = core::mem::take(&mut m.tags);
    if old_tags.len() < m.n_graph_edges as usize {
        old_tags.resize(m.n_graph_edges as usize, None);
    }
    let mut new_tags: Vec<Option<u32>> = Vec::new();
    for e in &mut m.edges {
        if let EdgeKind::Real(id) = &mut e.kind {
            let ni = *map.entry(*id).or_insert_with(|| {
                let v = next;
                next += 1;
                new_tags.push(old_tags.get(*id as usize).copied().flatten());
                v
            });
            *id = ni;
        }
    }
    for t in &mut m.traces {
        for c in &mut t.conns {
            if let Conn::Edge(id) = c {
                let ni = *map.entry(*id).or_insert_with(|| {
                    let v = next;
                    next += 1;
                    new_tags.push(old_tags.get(*id as usize).copied().flatten());
                    v
                });
                *id = ni;
            }
        }
    }
    m.n_graph_edges = next;
    m.tags = new_tags;
}

/// Remove isolated surface nodes that are not pinned to singular points.
pub fn remove_free_isolated_nodes(m: &CombMap) -> CombMap {
    let doomed: BTreeSet<u32> = (0..m.nodes.len() as u32)
        .filter(|&n| {
            m.rotations[n as usize].is_empty()
                && m.nodes[n as usize].place.component().is_some()
                && m.nodes[n as usize].place.singular(&m.complex).is_none()
        })
        .collect();
    remove_nodes(m, &doomed)
}

/// Remove a set of (dart-free, trace-free) nodes, renumbering the rest.
pub fn remove_nodes(m: &CombMap, doomed: &BTreeSet<u32>) -> CombMap {
    let mut new = m.clone();
    let mut map: BTreeMap<u32, u32> = BTreeMap::new();
    let mut nodes = Vec::new();
    let mut rotations = Vec::new();
    for (ni, node) in m.nodes.iter().enumerate() {
        if doomed.contains(&(ni as u32)) {
            continue;
        }
        map.insert(ni as u32, nodes.len() as u32);
        nodes.push(node.clone());
        rotations.push(m.rotations[ni].clone());
    }
    new.nodes = nodes;
    new.rotations = rotations;
    for e in &mut new.edges {
        e.ends = [map[&e.ends[0]], map[&e.ends[1]]];
    }
    for f in &mut new.faces {
        f.isolated = f.isolated.iter().filter(|n| !doomed.contains(n)).map(|n| map[n]).collect();
    }
    for t in &mut new.traces {
        for en in t.end_nodes.iter_mut() {
            if let Some(n) = en {
                *en = Some(map[n]);
            }
        }
        t.interior_nodes = t.interior_nodes.iter().map(|n| map[n]).collect();
    }
    new.refresh_idents();
    new
}

/// Dissolve interior trace nodes whose two neighbouring gaps carry equal
/// labels, merging the gaps. Interior node `k` always sits between conns
/// `k` and `k + 1`, whatever the end coverage.
pub fn merge_equal_gaps(m: &CombMap) -> CombMap {
    let mut new = m.clone();
    loop {
        let mut target: Option<(usize, usize)> = None;
        'outer: for (si, t) in new.traces.iter().enumerate() {
            for k in 0..t.interior_nodes.len() {
                let (Conn::Gap(a), Conn::Gap(b)) = (t.conns[k], t.conns[k + 1]) else {
                    continue;
                };
                if a == b {
                    target = Some((si, k));
                    break 'outer;
                }
            }
        }
        let Some((si, k)) = target else { break };
        let node = new.traces[si].interior_nodes[k];
        new.traces[si].interior_nodes.remove(k);
        new.traces[si].conns.remove(k + 1);
        let doomed: BTreeSet<u32> = [node].into_iter().collect();
        new = remove_nodes(&new, &doomed);
    }
    new
}

/// Subdivide graph edge `id` once: a fresh interior node splits it into two
/// graph edges (ids id and n_graph_edges). Works for surface and segment
/// edges; the new edge inherits the tag.
pub fn subdivide_graph_edge(m: &CombMap, id: u32) -> CombMap {
    let mut new = m.clone();
    let new_id = new.n_graph_edges;
    new.n_graph_edges += 1;
    let tag = new.tags.get(id as usize).copied().flatten();
    new.tags.push(tag);
    // Surface edge?
    if let Some(ei) = m
        .edges
        .iter()
        .position(|e| matches!(e.kind, EdgeKind::Real(x) if x == id))
    {
        let e = m.edges[ei].clone();
        let comp = m.node_component(e.ends[0]).expect("surface edge");
        let w = new.push_node(Placement::Interior(comp), None);
        // Replace e = (a -- b) by e1 = (a -- w) reusing index ei, plus
        // e2 = (w -- b) at the end. The sign stays on the first half.
        let b = e.ends[1];
        new.edges[ei].ends[1] = w;
        let e2_idx = new.edges.len() as u32;
        new.edges.push(super::SurfEdge { ends: [w, b], flipped: false, kind: EdgeKind::Real(new_id) });
        // w's rotation: [dart of e1 at w, dart of e2 at w].
        new.rotations[w as usize] = vec![2 * ei as u32 + 1, 2 * e2_idx];
        // b's rotation: replace old dart 2ei+1 by dart of e2 at b.
        let slot = new.rotations[b as usize]
            .iter()
            .position(|&d| d == 2 * ei as u32 + 1)
            .expect("old dart at b");
        new.rotations[b as usize][slot] = 2 * e2_idx + 1;
        // Faces: walks lengthen but nothing else changes; anchors survive
        // unless they referenced the replaced dart's states. Re-anchor by
        // walking: states on dart 2ei+1 moved to the new edge; patch them.
        for f in &mut new.faces {
            for a in &mut f.anchors {
                let d = state_dart(*a);
                if d == 2 * ei as u32 + 1 {
                    *a = (2 * e2_idx + 1) * 2 + super::trace::state_dir(*a);
                }
            }
        }
        new.refresh_idents();
        return new;
    }
    // Trace edge.
    for si in 0..new.traces.len() {
        let pos = new.traces[si]
            .conns
            .iter()
            .position(|c| matches!(c, Conn::Edge(x) if *x == id));
        let Some(pos) = pos else { continue };
        let w = new.push_node(Placement::SegmentInterior(si as u32), None);
        let t = &mut new.traces[si];
        // Node insertion index within interior_nodes: count interior sites
        // before conn `pos`.
        let before_interior = if t.end_nodes[0].is_some() { pos.saturating_sub(1) } else { pos };
        // The new node splits conn pos into Edge(id), node, Edge(new_id).
        t.conns[pos] = Conn::Edge(id);
        t.conns.insert(pos + 1, Conn::Edge(new_id));
        let idx = before_interior.min(t.interior_nodes.len());
        t.interior_nodes.insert(idx, w);
        new.refresh_idents();
        return new;
    }
    panic!("graph edge {id} not found");
}

/// Insert a parallel replacement edge inside a face while deleting a run of
/// boundary edges of a 0-labelled disk; used by the merge calculus. `run`
/// lists the dart of each run edge as traversed by the face walk (so the
/// replacement goes from the tail of the first to the head of the last).
pub fn splice_run(m: &CombMap, run: &[u32], label_inside: Option<u8>) -> Result<CombMap, String> {
    let _ = label_inside;
    let first = run[0];
    let last = *run.last().unwrap();
    let src = m.dart_tail(first);
    let dst = m.dart_head(last);
    // Insert the new edge with the rotation slots of the removed run ends:
    // at src where `first` sat, at dst where `last ^ 1` sat.
    let mut new = m.clone();
    let new_edge_idx = new.edges.len() as u32;
    let id = new.n_graph_edges;
    new.n_graph_edges += 1;
    new.tags.push(None);
    // Sign: product of run signs, so that the strip between run and
    // replacement is a clean band.
    let mut sign = false;
    for &d in run {
        sign ^= new.edges[(d / 2) as usize].flipped;
    }
    new.edges.push(super::SurfEdge { ends: [src, dst], flipped: sign, kind: EdgeKind::Real(id) });
    let slot_src = new.rotations[src as usize]
        .iter()
        .position(|&d| d == first)
        .ok_or("run start not at source")?;
    new.rotations[src as usize].insert(slot_src, 2 * new_edge_idx);
    let slot_dst = new.rotations[dst as usize]
        .iter()
        .position(|&d| d == (last ^ 1))
        .ok_or("run end not at target")?;
    new.rotations[dst as usize].insert(slot_dst, 2 * new_edge_idx + 1);
    Ok(new)
}

/// After ad-hoc rotation surgery, rebuild face records from scratch given a
/// function assigning each new walk (by one of its states) to a face group
/// and the group's topology. Used by `partition`.
pub struct FaceSpec {
    pub comp: u32,
    pub genus: u32,
    pub orientable: bool,
    pub label: Option<u8>,
    pub is_hole: Option<u32>,
    pub isolated: Vec<u32>,
    pub circles: Vec<u32>,
}

pub fn rebuild_faces(
    m: &mut CombMap,
    walk_group: &dyn Fn(&CombMap, u32) -> usize,
    specs: BTreeMap<usize, FaceSpec>,
) -> Result<(), String> {
    let (orbit_of, orbits) = m.orbits();
    let mut claimed: BTreeSet<u32> = BTreeSet::new();
    let mut group_anchors: BTreeMap<usize, Vec<u32>> = BTreeMap::new();
    for (oi, orbit) in orbits.iter().enumerate() {
        let rep = orbit[0];
        let pair_other = orbit_of[mirror_state(m, rep) as usize];
        let pair = (oi as u32).min(pair_other);
        if !claimed.insert(pair) {
            continue;
        }
        let g = walk_group(m, rep);
        group_anchors.entry(g).or_default().push(rep);
    }
    let mut faces = Vec::new();
    for (g, spec) in specs {
        let anchors = group_anchors.remove(&g).unwrap_or_default();
        faces.push(FaceRec {
            comp: spec.comp,
            anchors,
            isolated: spec.isolated,
            circles: spec.circles,
            genus: spec.genus,
            orientable: spec.orientable,
            label: spec.label,
            is_hole: spec.is_hole,
        });
    }
    if !group_anchors.is_empty() {
        return Err("walks assigned to unknown face groups".into());
    }
    m.faces = faces;
    Ok(())
}

/// Replace a trace wholesale (convenience for constructions).
pub fn set_trace(m: &mut CombMap, seg: u32, trace: SegmentTrace) {
    m.traces[seg as usize] = trace;
    m.refresh_idents();
}
