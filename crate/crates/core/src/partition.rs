//! The partitioning-graph calculus: building the labelled graph that
//! separates the classes of an edge partition along the faces of a proper
//! cellular embedding, and the face-merging operations the dynamic program
//! uses to project a three-part partitioning graph onto its bipartitions.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::map::{
    co_state, delete_surface_edges, edit_compact, edit_remove_nodes, merge_equal_gaps,
    mirror_state, remove_free_isolated_nodes, state_dart, CombMap, Conn, EdgeKind, FaceRec,
    SurfEdge,
};

/// The middle set of the tagged partition: labels of vertex classes whose
/// edges carry at least two distinct tags.
pub fn middle_labels(gamma: &CombMap) -> BTreeSet<u32> {
    let ends = gamma.graph_edge_ends();
    let labels = gamma.class_labels();
    let mut tags_of: BTreeMap<u32, BTreeSet<u32>> = BTreeMap::new();
    for e in 0..gamma.n_graph_edges {
        let tag = gamma.tags[e as usize].expect("partition tag on every edge");
        let (a, b) = ends[e as usize];
        tags_of.entry(a).or_default().insert(tag);
        tags_of.entry(b).or_default().insert(tag);
    }
    tags_of
        .into_iter()
        .filter(|(_, tags)| tags.len() >= 2)
        .map(|(class, _)| labels[class as usize].expect("vertex classes are labelled"))
        .collect()
}

/// Build the partitioning graph of a proper cellular embedding whose edge
/// tags give the (ordered) partition classes, numbered from 1. Boundary
/// arcs count toward class 1. The result is a proper labelled map: faces
/// labelled by the class they carry (0 for the junction polygons), vertex
/// labels exactly the middle set.
pub fn partitioning_graph(gamma: &CombMap) -> Result<CombMap, String> {
    let violations = gamma.validate();
    if !violations.is_empty() {
        return Err(format!("input map invalid: {}", violations[0]));
    }
    if !gamma.is_proper() || !gamma.is_cellular() {
        return Err("partitioning graphs need a proper cellular embedding".into());
    }
    if gamma.tags.iter().any(|t| t.is_none()) {
        return Err("every edge needs a partition tag".into());
    }
    let mid = middle_labels(gamma);

    // ---- overlay: insert one junction edge per run along each face ----
    let mut m = gamma.clone();
    let (orbit_of, orbits) = gamma.orbits();
    let class_of_dart = |g: &CombMap, dart: u32| -> u32 {
        let e = &g.edges[(dart / 2) as usize];
        match e.kind {
            EdgeKind::Arc(..) => 1,
            EdgeKind::Real(id) => g.tags[id as usize].expect("tagged"),
        }
    };
    struct CornerInsert {
        node: u32,
        next_dart: u32,
        forward: bool,
        darts: [u32; 2],
    }
    let mut inserts: Vec<CornerInsert> = Vec::new();
    let mut pi_edges: Vec<SurfEdge> = Vec::new();
    let mut touched: BTreeSet<usize> = BTreeSet::new();
    let mut face_class: BTreeMap<usize, u32> = BTreeMap::new();
    let base = gamma.edges.len() as u32;
    for (fi, f) in gamma.faces.iter().enumerate() {
        if f.is_hole.is_some() {
            continue;
        }
        if f.anchors.len() != 1 {
            face_class.insert(fi, 0); // vertex-only or empty-component face
            continue;
        }
        let walk = &orbits[orbit_of[f.anchors[0] as usize] as usize];
        let classes: Vec<u32> =
            walk.iter().map(|&s| class_of_dart(gamma, state_dart(s))).collect();
        if classes.iter().all(|&c| c == classes[0]) {
            face_class.insert(fi, classes[0]);
            continue;
        }
        touched.insert(fi);
        let n = walk.len();
        let mut start = 0;
        while classes[start % n] == classes[(start + n - 1) % n] {
            start += 1;
        }
        let mut runs: Vec<(usize, usize)> = Vec::new();
        let mut i = start;
        loop {
            let c = classes[i % n];
            let mut len = 1;
            while classes[(i + len) % n] == c {
                len += 1;
            }
            runs.push((i % n, len));
            i += len;
            if i - start >= n {
                break;
            }
        }
        let mut run_pi: Vec<u32> = Vec::new();
        for &(first, len) in &runs {
            let s_a = walk[first];
            let s_b = walk[(first + len - 1) % n];
            let s_next = walk[(first + len) % n];
            let src = gamma.dart_tail(state_dart(s_a));
            let dst = gamma.dart_head(state_dart(s_b));
            let flipped = (s_a % 2) != (s_next % 2);
            let idx = base + pi_edges.len() as u32;
            let id = gamma.n_graph_edges + pi_edges.len() as u32;
            pi_edges.push(SurfEdge { ends: [src, dst], flipped, kind: EdgeKind::Real(id) });
            run_pi.push(idx);
        }
        for (ri, &(first, _)) in runs.iter().enumerate() {
            let prev = (ri + runs.len() - 1) % runs.len();
            let s_a = walk[first];
            let s_prev = walk[(first + n - 1) % n];
            let node = gamma.dart_tail(state_dart(s_a));
            let enter_dir = {
                let d = state_dart(s_prev);
                let flip = gamma.edges[(d / 2) as usize].flipped as u32;
                (s_prev % 2) ^ flip
            };
            inserts.push(CornerInsert {
                node,
                next_dart: state_dart(s_a),
                forward: enter_dir == 0,
                darts: [2 * run_pi[prev] + 1, 2 * run_pi[ri]],
            });
        }
    }
    m.edges.extend(pi_edges.iter().cloned());
    m.n_graph_edges += pi_edges.len() as u32;
    m.tags.extend(core::iter::repeat(None).take(pi_edges.len()));
    for ins in &inserts {
        let rot = &mut m.rotations[ins.node as usize];
        let pos = rot.iter().position(|&d| d == ins.next_dart).expect("corner dart");
        if ins.forward {
            // rotation reads [.., twin(prev), prev_end, this_start, next ..]
            rot.insert(pos, ins.darts[1]);
            rot.insert(pos, ins.darts[0]);
        } else {
            // reversed rotation: [.., next, this_start, prev_end, twin(prev) ..]
            rot.insert(pos + 1, ins.darts[0]);
            rot.insert(pos + 1, ins.darts[1]);
        }
    }

    // ---- rebuild overlay faces with provenance ----
    let is_pi = |d: u32| d / 2 >= base;
    let (new_orbit_of, new_orbits) = m.orbits();
    let mut new_faces: Vec<FaceRec> = Vec::new();
    for (fi, f) in gamma.faces.iter().enumerate() {
        if touched.contains(&fi) {
            continue;
        }
        let mut rec = f.clone();
        rec.label = if f.is_hole.is_some() { None } else { Some(face_class[&fi] as u8) };
        new_faces.push(rec);
    }
    let mut claimed: BTreeSet<u32> = BTreeSet::new();
    for (oi, orbit) in new_orbits.iter().enumerate() {
        let oi = oi as u32;
        if claimed.contains(&oi) {
            continue;
        }
        let with_pi = orbit.iter().any(|&s| is_pi(state_dart(s)));
        if !with_pi {
            continue;
        }
        let om = new_orbit_of[mirror_state(&m, orbit[0]) as usize];
        claimed.insert(oi);
        claimed.insert(om);
        let all_pi = orbit.iter().all(|&s| is_pi(state_dart(s)));
        let comp = m.node_component(m.dart_tail(state_dart(orbit[0]))).expect("surface walk");
        let label = if all_pi {
            0u8
        } else {
            let s_old = orbit.iter().find(|&&s| !is_pi(state_dart(s))).unwrap();
            class_of_dart(gamma, state_dart(*s_old)) as u8
        };
        new_faces.push(FaceRec {
            comp,
            anchors: vec![orbit[0]],
            isolated: Vec::new(),
            circles: Vec::new(),
            genus: 0,
            orientable: true,
            label: Some(label),
            is_hole: None,
        });
    }
    m.faces = new_faces;
    m.refresh_idents();
    debug_assert!(m.validate().is_empty(), "overlay invalid: {:?}", m.validate());

    // ---- delete the original surface edges ----
    let doomed: BTreeSet<u32> = (0..base)
        .filter(|&ei| matches!(m.edges[ei as usize].kind, EdgeKind::Real(_)))
        .collect();
    let mut pi = delete_surface_edges(&m, &doomed)?;

    // ---- traces: graph edges become labelled gaps ----
    for t in &mut pi.traces {
        for c in &mut t.conns {
            if let Conn::Edge(id) = *c {
                // Trace ids survive the surface deletion unchanged in the
                // tag table, which still carries gamma's classes.
                let tag = pi.tags[id as usize].expect("tagged trace edge");
                *c = Conn::Gap(Some(tag as u8));
            }
        }
    }
    edit_compact(&mut pi);
    for n in &mut pi.nodes {
        if let Some(l) = n.label {
            if !mid.contains(&l) {
                n.label = None;
            }
        }
    }
    let pi = dissolve_unlabelled_trace_nodes(&pi);
    let pi = merge_equal_gaps(&pi);
    let mut pi = remove_free_isolated_nodes(&pi);
    pi.refresh_idents();
    let violations = pi.validate();
    if !violations.is_empty() {
        return Err(format!("partitioning graph invalid: {}", violations[0]));
    }
    Ok(pi)
}

/// Remove interior trace nodes without labels; their flanking gaps carry
/// equal classes by construction and merge.
fn dissolve_unlabelled_trace_nodes(m: &CombMap) -> CombMap {
    let mut new = m.clone();
    loop {
        let mut target: Option<(usize, usize)> = None;
        'outer: for (si, t) in new.traces.iter().enumerate() {
            for (k, &n) in t.interior_nodes.iter().enumerate() {
                if new.nodes[n as usize].label.is_none() {
                    target = Some((si, k));
                    break 'outer;
                }
            }
        }
        let Some((si, k)) = target else { break };
        let node = new.traces[si].interior_nodes[k];
        let t = &mut new.traces[si];
        if let (Conn::Gap(a), Conn::Gap(b)) = (t.conns[k], t.conns[k + 1]) {
            debug_assert_eq!(a, b, "classes agree across a non-middle vertex");
        }
        t.interior_nodes.remove(k);
        t.conns.remove(k + 1);
        let doomed: BTreeSet<u32> = [node].into_iter().collect();
        new = edit_remove_nodes(&new, &doomed);
    }
    new
}

/// Relabel face label 3 to 2 everywhere (faces and gaps).
pub fn minus(p: &CombMap) -> CombMap {
    let mut m = p.clone();
    for f in &mut m.faces {
        if f.label == Some(3) {
            f.label = Some(2);
        }
    }
    for t in &mut m.traces {
        for c in &mut t.conns {
            if let Conn::Gap(Some(3)) = c {
                *c = Conn::Gap(Some(2));
            }
        }
    }
    m
}

/// The face-merging operation: replace labels `j` by `i`, then dissolve
/// each 0-labelled disk along its label-`i` stretches -- removing its
/// boundary entirely when every edge borders `i`, otherwise splicing each
/// maximal `i`-run into a single parallel edge -- and clean up isolated
/// non-singular vertices and equal-labelled gaps.
pub fn merge_faces(p: &CombMap, i: u8, j: u8) -> Result<CombMap, String> {
    assert!((1..=3).contains(&i) && (1..=3).contains(&j) && i != j);
    let mut m = p.clone();
    for f in &mut m.faces {
        if f.label == Some(j) {
            f.label = Some(i);
        }
    }
    for t in &mut m.traces {
        for c in &mut t.conns {
            if let Conn::Gap(Some(l)) = c {
                if *l == j {
                    *c = Conn::Gap(Some(i));
                }
            }
        }
    }
    let zero_disks: Vec<usize> = m
        .faces
        .iter()
        .enumerate()
        .filter(|(_, f)| {
            f.label == Some(0)
                && f.is_hole.is_none()
                && f.genus == 0
                && f.orientable
                && f.anchors.len() == 1
                && f.circles.is_empty()
        })
        .map(|(fi, _)| fi)
        .collect();
    let (orbit_of, orbits) = m.orbits();
    let face_of_orbit: BTreeMap<u32, usize> = {
        let mut map = BTreeMap::new();
        for (fi, f) in m.faces.iter().enumerate() {
            for &a in &f.anchors {
                map.insert(orbit_of[a as usize], fi);
                map.insert(orbit_of[mirror_state(&m, a) as usize], fi);
            }
        }
        map
    };
    let mut doomed_old: BTreeSet<u32> = BTreeSet::new();
    let mut splices: Vec<Vec<u32>> = Vec::new();
    for fi in zero_disks {
        let f = &m.faces[fi];
        let walk = &orbits[orbit_of[f.anchors[0] as usize] as usize];
        if walk
            .iter()
            .any(|&s| matches!(m.edges[(state_dart(s) / 2) as usize].kind, EdgeKind::Arc(..)))
        {
            continue;
        }
        let temp: Vec<Option<u8>> = walk
            .iter()
            .map(|&s| {
                let other = orbit_of[co_state(&m, s) as usize];
                let of = face_of_orbit[&other];
                if of == fi {
                    Some(0)
                } else {
                    m.faces[of].label
                }
            })
            .collect();
        if temp.iter().all(|&l| l == Some(i)) {
            for &s in walk {
                doomed_old.insert(state_dart(s) / 2);
            }
            continue;
        }
        if !temp.iter().any(|&l| l == Some(i)) {
            continue;
        }
        let n = walk.len();
        let mut start = 0;
        while temp[start % n] == Some(i) && temp[(start + n - 1) % n] == Some(i) {
            start += 1;
        }
        let mut idx = start;
        let mut steps = 0;
        while steps < n {
            if temp[idx % n] != Some(i) {
                idx += 1;
                steps += 1;
                continue;
            }
            let mut run = Vec::new();
            while steps < n && temp[idx % n] == Some(i) {
                run.push(walk[idx % n]);
                idx += 1;
                steps += 1;
            }
            for &s in &run {
                doomed_old.insert(state_dart(s) / 2);
            }
            splices.push(run);
        }
    }
    // Insert replacement edges first (edge indices only grow, so the doomed
    // set and recorded run states stay valid), then delete in one pass.
    for run in &splices {
        m = insert_parallel(&m, run)?;
    }
    let merged = delete_surface_edges(&m, &doomed_old)?;
    let merged = merge_equal_gaps(&merged);
    let mut merged = remove_free_isolated_nodes(&merged);
    edit_compact(&mut merged);
    merged.refresh_idents();
    let violations = merged.validate();
    if !violations.is_empty() {
        return Err(format!("merge result invalid: {}", violations[0]));
    }
    Ok(merged)
}

/// Insert one edge parallel to the run of walk states `run` (consecutive on
/// one face walk), from the tail corner of the first to the head corner of
/// the last, splitting the face record into core and strip.
fn insert_parallel(m: &CombMap, run: &[u32]) -> Result<CombMap, String> {
    let first = run[0];
    let last = *run.last().unwrap();
    let mut new = m.clone();
    let (orbit_of, _) = m.orbits();
    let fi = m
        .faces
        .iter()
        .position(|f| {
            f.anchors.iter().any(|&a| {
                orbit_of[a as usize] == orbit_of[first as usize]
                    || orbit_of[mirror_state(m, a) as usize] == orbit_of[first as usize]
            })
        })
        .ok_or("run not on a face")?;
    let src = m.dart_tail(state_dart(first));
    let dst = m.dart_head(state_dart(last));
    let id = new.n_graph_edges;
    new.n_graph_edges += 1;
    new.tags.push(None);
    let next_after = m.next_state(last);
    let flipped = (first % 2) != (next_after % 2);
    let new_edge_idx = new.edges.len() as u32;
    new.edges.push(SurfEdge { ends: [src, dst], flipped, kind: EdgeKind::Real(id) });
    {
        let d_first = state_dart(first);
        let enter_dir = {
            let prev = walk_prev(m, first);
            let d = state_dart(prev);
            let flip = m.edges[(d / 2) as usize].flipped as u32;
            (prev % 2) ^ flip
        };
        let rot = &mut new.rotations[src as usize];
        let pos = rot.iter().position(|&d| d == d_first).expect("dart at src");
        if enter_dir == 0 {
            rot.insert(pos, 2 * new_edge_idx);
        } else {
            rot.insert(pos + 1, 2 * new_edge_idx);
        }
    }
    {
        let d_last_tw = state_dart(last) ^ 1;
        let leave_dir = {
            let d = state_dart(last);
            let flip = new.edges[(d / 2) as usize].flipped as u32;
            (last % 2) ^ flip
        };
        let rot = &mut new.rotations[dst as usize];
        let pos = rot.iter().position(|&d| d == d_last_tw).expect("dart at dst");
        if leave_dir == 0 {
            rot.insert(pos + 1, 2 * new_edge_idx + 1);
        } else {
            rot.insert(pos, 2 * new_edge_idx + 1);
        }
    }
    // Split the face record: core keeps the old label, the strip takes the
    // label across the run (they merge during the deletion that follows).
    let strip_label = {
        let other = orbit_of[co_state(m, first) as usize];
        m.faces
            .iter()
            .find(|f| {
                f.anchors.iter().any(|&a| {
                    orbit_of[a as usize] == other
                        || orbit_of[mirror_state(m, a) as usize] == other
                })
            })
            .and_then(|f| f.label)
    };
    let old_face = new.faces[fi].clone();
    let (new_orbit_of, _) = new.orbits();
    let s0 = 2 * (2 * new_edge_idx);
    let s1 = s0 + 1;
    let on_first = |s: u32| {
        new_orbit_of[s as usize] == new_orbit_of[first as usize]
            || new_orbit_of[mirror_state(&new, s) as usize] == new_orbit_of[first as usize]
    };
    let strip_state = if on_first(s0) { s0 } else { s1 };
    let core_state = strip_state ^ 1;
    if on_first(core_state) {
        return Err("replacement edge failed to separate core from strip".into());
    }
    new.faces[fi] = FaceRec {
        comp: old_face.comp,
        anchors: vec![core_state],
        isolated: old_face.isolated.clone(),
        circles: old_face.circles.clone(),
        genus: 0,
        orientable: true,
        label: old_face.label,
        is_hole: None,
    };
    new.faces.push(FaceRec {
        comp: old_face.comp,
        anchors: vec![strip_state],
        isolated: Vec::new(),
        circles: Vec::new(),
        genus: 0,
        orientable: true,
        label: strip_label,
        is_hole: None,
    });
    Ok(new)
}

fn walk_prev(m: &CombMap, s: u32) -> u32 {
    let mut cur = s;
    loop {
        let next = m.next_state(cur);
        if next == s {
            return cur;
        }
        cur = next;
    }
}
