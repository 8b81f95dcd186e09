//! Map validation: structural well-formedness, the boundary-arc discipline,
//! identification consistency, and per-component Euler-characteristic and
//! orientability agreement with the complex. Violations are returned as
//! data, never panicking on bad maps.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use super::trace::mirror_state;
use super::{CombMap, Conn, EdgeKind, Placement};

pub fn validate(m: &CombMap) -> Vec<String> {
    let mut out = Vec::new();
    structural(m, &mut out);
    if !out.is_empty() {
        // Deeper checks assume the basics; avoid cascading panics.
        return out;
    }
    placements(m, &mut out);
    arcs(m, &mut out);
    traces(m, &mut out);
    faces(m, &mut out);
    if out.is_empty() {
        components(m, &mut out);
    }
    out
}

fn structural(m: &CombMap, out: &mut Vec<String>) {
    if m.rotations.len() != m.nodes.len() {
        out.push("rotation table size mismatch".into());
        return;
    }
    if m.tags.len() != m.n_graph_edges as usize {
        out.push("tag table size mismatch".into());
    }
    let n_darts = 2 * m.edges.len() as u32;
    let mut seen = BTreeSet::new();
    for (v, order) in m.rotations.iter().enumerate() {
        let node = &m.nodes[v];
        if !matches!(
            node.place,
            Placement::Interior(_) | Placement::InteriorMark(_, _) | Placement::BoundaryMark(_, _, _)
        ) && !order.is_empty()
        {
            out.push(format!("segment node {v} carries darts"));
        }
        for &d in order {
            if d >= n_darts {
                out.push(format!("dart {d} out of range at node {v}"));
                return;
            }
            if m.dart_tail(d) != v as u32 {
                out.push(format!("dart {d} listed at node {v} but tails elsewhere"));
            }
            if !seen.insert(d) {
                out.push(format!("dart {d} appears twice"));
            }
        }
    }
    for (ei, e) in m.edges.iter().enumerate() {
        for &n in &e.ends {
            if n as usize >= m.nodes.len() {
                out.push(format!("edge {ei} endpoint out of range"));
                return;
            }
        }
        let c0 = m.node_component(e.ends[0]);
        let c1 = m.node_component(e.ends[1]);
        if c0.is_none() || c0 != c1 {
            out.push(format!("edge {ei} endpoints not on one surface component"));
        }
    }
    if seen.len() != n_darts as usize {
        out.push(format!("{} darts missing from rotations", n_darts as usize - seen.len()));
    }
    for (ni, node) in m.nodes.iter().enumerate() {
        let ok = match node.place {
            Placement::Interior(c) => (c as usize) < m.complex.components.len(),
            Placement::InteriorMark(c, i) => m
                .complex
                .components
                .get(c as usize)
                .map_or(false, |cc| (i as usize) < cc.interior_marks.len()),
            Placement::BoundaryMark(c, b, p) => m
                .complex
                .components
                .get(c as usize)
                .and_then(|cc| cc.boundaries.get(b as usize))
                .map_or(false, |cy| (p as usize) < cy.len()),
            Placement::SegmentInterior(s) | Placement::SegmentEnd(s, _) => {
                (s as usize) < m.complex.segments.len()
            }
        };
        if !ok {
            out.push(format!("node {ni} placement out of range"));
        }
    }
}

fn placements(m: &CombMap, out: &mut Vec<String>) {
    // At most one node per occurrence.
    let mut occ_nodes: BTreeMap<Placement, u32> = BTreeMap::new();
    for (ni, node) in m.nodes.iter().enumerate() {
        match node.place {
            Placement::Interior(_) | Placement::SegmentInterior(_) => {}
            p => {
                if occ_nodes.insert(p, ni as u32).is_some() {
                    out.push(format!("occurrence {p:?} carries two nodes"));
                }
            }
        }
    }
    // All-or-nothing coverage per singular point.
    for s in 0..m.complex.n_singular {
        let occ = m.complex.occurrences(s);
        let covered: Vec<bool> = occ
            .iter()
            .map(|o| {
                let p = match *o {
                    crate::surface::Occurrence::Interior { comp, idx } => {
                        Placement::InteriorMark(comp, idx)
                    }
                    crate::surface::Occurrence::Boundary { comp, circle, pos } => {
                        Placement::BoundaryMark(comp, circle, pos)
                    }
                    crate::surface::Occurrence::SegmentEnd { seg, end } => {
                        Placement::SegmentEnd(seg, end)
                    }
                };
                occ_nodes.contains_key(&p)
            })
            .collect();
        if covered.iter().any(|&c| c) && !covered.iter().all(|&c| c) {
            out.push(format!("singular point {s} is partially covered"));
        }
    }
    // Explicit identifications match the derived ones.
    let derived = m.derived_idents();
    let norm = |v: &[(u32, Vec<u32>)]| -> Vec<(u32, Vec<u32>)> {
        let mut v: Vec<(u32, Vec<u32>)> = v
            .iter()
            .map(|(s, ns)| {
                let mut ns = ns.clone();
                ns.sort_unstable();
                (*s, ns)
            })
            .collect();
        v.sort();
        v
    };
    if norm(&m.idents) != norm(&derived) {
        out.push("identifications do not match node placements at singular points".into());
    }
    for (s, members) in &m.idents {
        for &n in members {
            let at = m.nodes.get(n as usize).and_then(|nd| nd.place.singular(&m.complex));
            if at != Some(*s) {
                out.push(format!("identification of {s} merges a non-singular node {n}"));
            }
        }
    }
    // Labels: consistent per class, injective across classes.
    let (class, n_classes) = m.node_classes();
    let mut class_label: Vec<Option<u32>> = alloc::vec![None; n_classes as usize];
    let mut label_owner: BTreeMap<u32, u32> = BTreeMap::new();
    for (ni, node) in m.nodes.iter().enumerate() {
        if let Some(l) = node.label {
            let c = class[ni];
            match class_label[c as usize] {
                None => {
                    class_label[c as usize] = Some(l);
                    if let Some(prev) = label_owner.insert(l, c) {
                        if prev != c {
                            out.push(format!("label {l} appears on two vertices"));
                        }
                    }
                }
                Some(x) if x == l => {}
                Some(x) => out.push(format!("class of node {ni} carries labels {x} and {l}")),
            }
        }
    }
}

/// Covered positions of each circle, in cyclic position order.
pub fn circle_coverage(m: &CombMap) -> BTreeMap<(u32, u32), Vec<(u32, u32)>> {
    let mut covered: BTreeMap<(u32, u32), Vec<(u32, u32)>> = BTreeMap::new();
    for (ci, c) in m.complex.components.iter().enumerate() {
        for bi in 0..c.boundaries.len() as u32 {
            covered.insert((ci as u32, bi), Vec::new());
        }
    }
    for (ni, node) in m.nodes.iter().enumerate() {
        if let Placement::BoundaryMark(c, b, p) = node.place {
            covered.get_mut(&(c, b)).expect("circle").push((p, ni as u32));
        }
    }
    for v in covered.values_mut() {
        v.sort_unstable();
    }
    covered
}

fn arcs(m: &CombMap, out: &mut Vec<String>) {
    let covered = circle_coverage(m);
    // Expected arcs: between consecutive covered positions.
    let mut expected: BTreeMap<(u32, u32, u32), (u32, u32)> = BTreeMap::new();
    for (&(c, b), pos) in &covered {
        let k = pos.len();
        for (j, &(_, n)) in pos.iter().enumerate() {
            if k == 0 {
                break;
            }
            let (_, n2) = pos[(j + 1) % k];
            expected.insert((c, b, j as u32), (n, n2));
        }
    }
    let mut found: BTreeSet<(u32, u32, u32)> = BTreeSet::new();
    for (ei, e) in m.edges.iter().enumerate() {
        if let EdgeKind::Arc(c, b, j) = e.kind {
            if e.flipped {
                out.push(format!("arc edge {ei} is flipped"));
            }
            match expected.get(&(c, b, j)) {
                None => out.push(format!("arc edge {ei} does not match a covered stretch")),
                Some(&(n, n2)) => {
                    if e.ends != [n, n2] {
                        out.push(format!("arc edge {ei} has wrong endpoints"));
                    }
                }
            }
            if !found.insert((c, b, j)) {
                out.push(format!("duplicate arc ({c},{b},{j})"));
            }
        }
    }
    for key in expected.keys() {
        if !found.contains(key) {
            out.push(format!("missing arc {key:?}"));
        }
    }
}

fn traces(m: &CombMap, out: &mut Vec<String>) {
    if m.traces.len() != m.complex.segments.len() {
        out.push("trace count mismatch".into());
        return;
    }
    let mut edge_ids: BTreeSet<u32> = BTreeSet::new();
    for e in &m.edges {
        if let EdgeKind::Real(id) = e.kind {
            if id >= m.n_graph_edges || !edge_ids.insert(id) {
                out.push(format!("bad or duplicate graph edge id {id}"));
            }
        }
    }
    for (si, t) in m.traces.iter().enumerate() {
        let si = si as u32;
        if t.conns.len() != t.expected_conns() {
            out.push(format!("trace {si}: {} conns, expected {}", t.conns.len(), t.expected_conns()));
            continue;
        }
        for (end, n) in t.end_nodes.iter().enumerate() {
            if let Some(n) = n {
                if m.nodes.get(*n as usize).map(|nd| nd.place)
                    != Some(Placement::SegmentEnd(si, end as u8))
                {
                    out.push(format!("trace {si}: end node {n} misplaced"));
                }
            }
        }
        for &n in &t.interior_nodes {
            if m.nodes.get(n as usize).map(|nd| nd.place) != Some(Placement::SegmentInterior(si)) {
                out.push(format!("trace {si}: interior node {n} misplaced"));
            }
        }
        for (i, conn) in t.conns.iter().enumerate() {
            match conn {
                Conn::Edge(id) => {
                    if *id >= m.n_graph_edges || !edge_ids.insert(*id) {
                        out.push(format!("trace {si}: bad or duplicate graph edge id {id}"));
                    }
                    let (l, r) = t.conn_neighbors(i);
                    if l.is_none() || r.is_none() {
                        out.push(format!("trace {si}: edge conn {i} next to an uncovered end"));
                    }
                }
                Conn::Gap(Some(l)) if *l > 3 => {
                    out.push(format!("trace {si}: gap label {l} out of range"));
                }
                _ => {}
            }
        }
    }
    if edge_ids.len() != m.n_graph_edges as usize {
        out.push(format!(
            "{} graph edge ids unused",
            m.n_graph_edges as usize - edge_ids.len()
        ));
    }
    // Segment nodes must appear in exactly one trace slot.
    let mut placed: BTreeSet<u32> = BTreeSet::new();
    for t in &m.traces {
        for n in t.sites() {
            if !placed.insert(n) {
                out.push(format!("segment node {n} appears twice in traces"));
            }
        }
    }
    for (ni, node) in m.nodes.iter().enumerate() {
        if matches!(node.place, Placement::SegmentInterior(_) | Placement::SegmentEnd(_, _))
            && !placed.contains(&(ni as u32))
        {
            out.push(format!("segment node {ni} not listed in any trace"));
        }
    }
}

fn faces(m: &CombMap, out: &mut Vec<String>) {
    let (orbit_of, orbits) = m.orbits();
    // A face anchors exactly one orbit per mirror pair, across all faces.
    let mut claimed: BTreeMap<u32, u32> = BTreeMap::new(); // orbit -> face
    for (fi, f) in m.faces.iter().enumerate() {
        if f.comp as usize >= m.complex.components.len() {
            out.push(format!("face {fi} on unknown component"));
            continue;
        }
        if f.orientable && f.genus % 2 != 0 {
            out.push(format!("face {fi}: orientable with odd genus"));
        }
        if !f.orientable && f.genus == 0 {
            out.push(format!("face {fi}: non-orientable with genus 0"));
        }
        for &a in &f.anchors {
            if a >= m.n_states() {
                out.push(format!("face {fi}: anchor out of range"));
                continue;
            }
            let o = orbit_of[a as usize];
            let om = orbit_of[mirror_state(m, a) as usize];
            if claimed.insert(o, fi as u32).is_some() || claimed.insert(om, fi as u32).is_some() {
                out.push(format!("face {fi}: walk anchored twice"));
            }
            let d = super::trace::state_dart(a);
            if m.node_component(m.dart_tail(d)) != Some(f.comp) {
                out.push(format!("face {fi}: anchor on wrong component"));
            }
        }
    }
    if claimed.len() != orbits.len() {
        out.push(format!(
            "{} facial walks unanchored",
            orbits.len().saturating_sub(claimed.len()) / 2
        ));
    }
    // Isolated nodes and uncovered circles partition into faces.
    let mut iso_seen: BTreeSet<u32> = BTreeSet::new();
    let mut circ_seen: BTreeSet<(u32, u32)> = BTreeSet::new();
    for (fi, f) in m.faces.iter().enumerate() {
        for &n in &f.isolated {
            if !m.rotations.get(n as usize).map_or(false, |r| r.is_empty())
                || m.node_component(n) != Some(f.comp)
            {
                out.push(format!("face {fi}: bad isolated node {n}"));
            }
            if !iso_seen.insert(n) {
                out.push(format!("isolated node {n} in two faces"));
            }
        }
        for &b in &f.circles {
            if !circ_seen.insert((f.comp, b)) {
                out.push(format!("circle ({}, {b}) in two faces", f.comp));
            }
        }
    }
    for (ni, node) in m.nodes.iter().enumerate() {
        let on_surface = node.place.component().is_some();
        if on_surface && m.rotations[ni].is_empty() && !iso_seen.contains(&(ni as u32)) {
            out.push(format!("isolated node {ni} not assigned to a face"));
        }
    }
    let covered = circle_coverage(m);
    for (&(c, b), pos) in &covered {
        let is_covered = !pos.is_empty();
        if is_covered {
            if circ_seen.contains(&(c, b)) {
                out.push(format!("covered circle ({c},{b}) listed as contained"));
            }
        } else if !circ_seen.contains(&(c, b)) {
            out.push(format!("uncovered circle ({c},{b}) not assigned to a face"));
        }
    }
    // Hole faces: one per covered circle, disk-shaped, walk of arcs only.
    let mut holes: BTreeMap<(u32, u32), u32> = BTreeMap::new();
    for (fi, f) in m.faces.iter().enumerate() {
        if let Some(b) = f.is_hole {
            if f.genus != 0
                || !f.orientable
                || f.anchors.len() != 1
                || !f.isolated.is_empty()
                || !f.circles.is_empty()
                || f.label.is_some()
            {
                out.push(format!("hole face {fi} is not a bare disk"));
                continue;
            }
            if holes.insert((f.comp, b), fi as u32).is_some() {
                out.push(format!("two hole faces for circle ({}, {b})", f.comp));
            }
            // Its single walk must consist of that circle's arcs.
            let o = orbit_of[f.anchors[0] as usize];
            for &s in &orbits[o as usize] {
                let e = &m.edges[(super::trace::state_dart(s) / 2) as usize];
                match e.kind {
                    EdgeKind::Arc(c2, b2, _) if c2 == f.comp && b2 == b => {}
                    _ => {
                        out.push(format!("hole face {fi} walk leaves its circle"));
                        break;
                    }
                }
            }
        }
        if let Some(l) = f.label {
            if l > 3 {
                out.push(format!("face {fi}: label {l} out of range"));
            }
        }
    }
    for (&(c, b), pos) in &covered {
        if !pos.is_empty() && !holes.contains_key(&(c, b)) {
            out.push(format!("covered circle ({c},{b}) has no hole face"));
        }
    }
}

fn components(m: &CombMap, out: &mut Vec<String>) {
    for ci in 0..m.complex.components.len() as u32 {
        if let Err(e) = super::assemble::component_check(m, ci) {
            out.push(e);
        }
    }
}
