//! Simplicial 2-complexes: parsing, the 3-book test, link components around
//! a vertex, and conversion to the topological data structure by detaching
//! singular points.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use crate::surface::{SurfaceComponent, TopoComplex};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimplicialComplex2 {
    names: Vec<String>,
    edges: BTreeSet<(u32, u32)>,
    triangles: BTreeSet<(u32, u32, u32)>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StructureError(pub String);

impl core::fmt::Display for StructureError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LinkKind {
    Cone,
    Corner,
    IsolatedSegment,
}

/// A link component at a vertex: a fan of triangles (cyclic for cones,
/// linear for corners) or one triangle-free edge.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinkComponent {
    pub kind: LinkKind,
    pub triangles: Vec<(u32, u32, u32)>,
    pub segment: Option<(u32, u32)>,
}

impl SimplicialComplex2 {
    pub fn new() -> Self {
        SimplicialComplex2 { names: Vec::new(), edges: BTreeSet::new(), triangles: BTreeSet::new() }
    }

    pub fn vertex(&mut self, name: &str) -> u32 {
        if let Some(i) = self.names.iter().position(|n| n == name) {
            return i as u32;
        }
        self.names.push(name.to_string());
        (self.names.len() - 1) as u32
    }

    pub fn vertex_name(&self, v: u32) -> &str {
        &self.names[v as usize]
    }

    pub fn n_vertices(&self) -> usize {
        self.names.len()
    }

    pub fn edge(&mut self, a: &str, b: &str) {
        let a = self.vertex(a);
        let b = self.vertex(b);
        assert_ne!(a, b, "simplices have distinct vertices");
        self.edges.insert((a.min(b), a.max(b)));
    }

    /// Insert a triangle along with its edges (simplicial closure).
    pub fn triangle(&mut self, a: &str, b: &str, c: &str) {
        let a = self.vertex(a);
        let b = self.vertex(b);
        let c = self.vertex(c);
        assert!(a != b && b != c && a != c, "simplices have distinct vertices");
        let mut t = [a, b, c];
        t.sort_unstable();
        self.triangles.insert((t[0], t[1], t[2]));
        self.edges.insert((t[0], t[1]));
        self.edges.insert((t[0], t[2]));
        self.edges.insert((t[1], t[2]));
    }

    pub fn edges(&self) -> impl Iterator<Item = (u32, u32)> + '_ {
        self.edges.iter().copied()
    }

    pub fn triangles(&self) -> impl Iterator<Item = (u32, u32, u32)> + '_ {
        self.triangles.iter().copied()
    }

    pub fn n_simplices(&self) -> usize {
        self.names.len() + self.edges.len() + self.triangles.len()
    }

    /// Lines `v a`, `e a b`, `t a b c`; `#` comments. Triangles imply their
    /// edges.
    pub fn parse(text: &str) -> Result<SimplicialComplex2, StructureError> {
        let mut c = SimplicialComplex2::new();
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
            let ok = |t: &str| !t.is_empty() && t.chars().all(|ch| ch.is_ascii_alphanumeric());
            match tokens.as_slice() {
                ["v", a] if ok(a) => {
                    c.vertex(a);
                }
                ["e", a, b] if ok(a) && ok(b) && a != b => c.edge(a, b),
                ["t", a, b, c2] if ok(a) && ok(b) && ok(c2) && a != b && b != c2 && a != c2 => {
                    c.triangle(a, b, c2)
                }
                _ => {
                    return Err(StructureError(format!(
                        "line {line}: expected `v a`, `e a b`, or `t a b c`"
                    )))
                }
            }
        }
        Ok(c)
    }

    /// Stable under reparsing: lines are sorted by vertex names, not ids.
    pub fn to_text(&self) -> String {
        let triangle_edges: BTreeSet<(u32, u32)> = self
            .triangles
            .iter()
            .flat_map(|&(a, b, c)| [(a, b), (a, c), (b, c)])
            .collect();
        let covered: BTreeSet<u32> = self.edges.iter().flat_map(|&(a, b)| [a, b]).collect();
        let mut vs: Vec<String> = (0..self.names.len() as u32)
            .filter(|v| !covered.contains(v))
            .map(|v| format!("v {}\n", self.vertex_name(v)))
            .collect();
        vs.sort();
        let mut es: Vec<String> = self
            .edges
            .iter()
            .filter(|e| !triangle_edges.contains(e))
            .map(|&(a, b)| {
                let (a, b) = sort2(self.vertex_name(a), self.vertex_name(b));
                format!("e {a} {b}\n")
            })
            .collect();
        es.sort();
        let mut ts: Vec<String> = self
            .triangles
            .iter()
            .map(|&(a, b, c)| {
                let mut n = [self.vertex_name(a), self.vertex_name(b), self.vertex_name(c)];
                n.sort_unstable();
                format!("t {} {} {}\n", n[0], n[1], n[2])
            })
            .collect();
        ts.sort();
        let mut out = String::new();
        for l in vs.into_iter().chain(es).chain(ts) {
            out.push_str(&l);
        }
        out
    }

    fn triangles_of_edge(&self, e: (u32, u32)) -> Vec<(u32, u32, u32)> {
        self.triangles
            .iter()
            .copied()
            .filter(|&(a, b, c)| [(a, b), (a, c), (b, c)].contains(&e))
            .collect()
    }

    /// True iff some edge lies in three or more triangles.
    pub fn detect_3book(&self) -> bool {
        self.edges.iter().any(|&e| self.triangles_of_edge(e).len() >= 3)
    }

    pub fn isolated_vertices(&self) -> Vec<u32> {
        let covered: BTreeSet<u32> = self.edges.iter().flat_map(|&(a, b)| [a, b]).collect();
        (0..self.names.len() as u32).filter(|v| !covered.contains(v)).collect()
    }

    /// The unique partition of the edges and triangles incident to `p` into
    /// cones, corners, and isolated segments, plus whether `p` is regular.
    pub fn link_components(&self, p: u32) -> Result<(Vec<LinkComponent>, bool), StructureError> {
        if self.detect_3book() {
            return Err(StructureError("complex contains a 3-book".into()));
        }
        let inc_tris: Vec<(u32, u32, u32)> = self
            .triangles
            .iter()
            .copied()
            .filter(|&(a, b, c)| a == p || b == p || c == p)
            .collect();
        if inc_tris.is_empty() && !self.edges.iter().any(|&(a, b)| a == p || b == p) {
            return Err(StructureError(format!(
                "vertex {} has no incident edge",
                self.vertex_name(p)
            )));
        }
        let p_edges = |t: (u32, u32, u32)| -> [(u32, u32); 2] {
            let others: Vec<u32> = [t.0, t.1, t.2].into_iter().filter(|&x| x != p).collect();
            [(p.min(others[0]), p.max(others[0])), (p.min(others[1]), p.max(others[1]))]
        };
        let mut comp: Vec<usize> = (0..inc_tris.len()).collect();
        fn find(c: &mut Vec<usize>, x: usize) -> usize {
            if c[x] != x {
                let r = find(c, c[x]);
                c[x] = r;
            }
            c[x]
        }
        for i in 0..inc_tris.len() {
            for j in 0..i {
                let pi = p_edges(inc_tris[i]);
                let pj = p_edges(inc_tris[j]);
                if pi.iter().any(|e| pj.contains(e)) {
                    let (ri, rj) = (find(&mut comp, i), find(&mut comp, j));
                    if ri != rj {
                        comp[ri] = rj;
                    }
                }
            }
        }
        let mut groups: BTreeMap<usize, Vec<(u32, u32, u32)>> = BTreeMap::new();
        for i in 0..inc_tris.len() {
            let r = find(&mut comp, i);
            groups.entry(r).or_default().push(inc_tris[i]);
        }
        let mut out = Vec::new();
        for tris in groups.into_values() {
            let mut edge_count: BTreeMap<(u32, u32), usize> = BTreeMap::new();
            for &t in &tris {
                for e in p_edges(t) {
                    *edge_count.entry(e).or_default() += 1;
                }
            }
            let extremes: Vec<(u32, u32)> =
                edge_count.iter().filter(|&(_, &c)| c == 1).map(|(&e, _)| e).collect();
            let kind = if extremes.is_empty() { LinkKind::Cone } else { LinkKind::Corner };
            let ordered = order_fan(p, &tris, extremes.first().copied());
            out.push(LinkComponent { kind, triangles: ordered, segment: None });
        }
        for &(a, b) in &self.edges {
            if a != p && b != p {
                continue;
            }
            if self.triangles_of_edge((a, b)).is_empty() {
                out.push(LinkComponent {
                    kind: LinkKind::IsolatedSegment,
                    triangles: Vec::new(),
                    segment: Some((a, b)),
                });
            }
        }
        let regular = out.len() == 1 && out[0].kind != LinkKind::IsolatedSegment;
        Ok((out, regular))
    }

    /// Barycentric subdivision (one round): a vertex per edge and triangle,
    /// six small triangles per triangle, two edges per segment edge.
    pub fn barycentric_subdivision(&self) -> SimplicialComplex2 {
        let mut out = SimplicialComplex2::new();
        let vname = |v: u32| format!("p{v}");
        let ename = |e: (u32, u32)| format!("e{}x{}", e.0, e.1);
        let tname = |t: (u32, u32, u32)| format!("t{}x{}x{}", t.0, t.1, t.2);
        let tri_edges: BTreeSet<(u32, u32)> = self
            .triangles
            .iter()
            .flat_map(|&(a, b, c)| [(a, b), (a, c), (b, c)])
            .collect();
        for &e in &self.edges {
            if !tri_edges.contains(&e) {
                out.edge(&vname(e.0), &ename(e));
                out.edge(&ename(e), &vname(e.1));
            }
        }
        for &t in &self.triangles {
            let (a, b, c) = t;
            for (x, y) in [(a, b), (a, c), (b, c)] {
                out.triangle(&vname(x), &ename((x, y)), &tname(t));
                out.triangle(&vname(y), &ename((x, y)), &tname(t));
            }
        }
        for v in self.isolated_vertices() {
            out.vertex(&vname(v));
        }
        out
    }

    /// Detach all singular points and classify the surface components.
    /// Fails on 3-books and isolated vertices (preprocessing removes both).
    pub fn to_topological(&self) -> Result<TopoComplex, StructureError> {
        if self.detect_3book() {
            return Err(StructureError("complex contains a 3-book".into()));
        }
        if !self.isolated_vertices().is_empty() {
            return Err(StructureError("complex contains an isolated vertex".into()));
        }
        let mut links: BTreeMap<u32, Vec<LinkComponent>> = BTreeMap::new();
        let mut singular: BTreeMap<u32, u32> = BTreeMap::new();
        for v in 0..self.names.len() as u32 {
            if self.edges.iter().all(|&(a, b)| a != v && b != v) {
                continue;
            }
            let (comps, regular) = self.link_components(v)?;
            if !regular {
                let id = singular.len() as u32;
                singular.insert(v, id);
            }
            links.insert(v, comps);
        }

        // Patches: components of triangles glued along shared edges.
        let tris: Vec<(u32, u32, u32)> = self.triangles.iter().copied().collect();
        let tri_idx: BTreeMap<(u32, u32, u32), usize> =
            tris.iter().enumerate().map(|(i, &t)| (t, i)).collect();
        let mut comp: Vec<usize> = (0..tris.len()).collect();
        fn find(c: &mut Vec<usize>, x: usize) -> usize {
            if c[x] != x {
                let r = find(c, c[x]);
                c[x] = r;
            }
            c[x]
        }
        let mut edge_tris: BTreeMap<(u32, u32), Vec<usize>> = BTreeMap::new();
        for (i, &(a, b, c)) in tris.iter().enumerate() {
            for e in [(a, b), (a, c), (b, c)] {
                edge_tris.entry(e).or_default().push(i);
            }
        }
        for ts in edge_tris.values() {
            for w in ts.windows(2) {
                let (r0, r1) = (find(&mut comp, w[0]), find(&mut comp, w[1]));
                if r0 != r1 {
                    comp[r0] = r1;
                }
            }
        }
        let mut patch_of: BTreeMap<usize, usize> = BTreeMap::new();
        let mut patches: Vec<Vec<usize>> = Vec::new();
        for i in 0..tris.len() {
            let r = find(&mut comp, i);
            let id = *patch_of.entry(r).or_insert_with(|| {
                patches.push(Vec::new());
                patches.len() - 1
            });
            patches[id].push(i);
        }

        // Orient triangles per patch; detect orientability. `true` means the
        // cyclic order (a, b, c) of the sorted triple.
        let mut orient: Vec<Option<bool>> = vec![None; tris.len()];
        let mut patch_orientable = vec![true; patches.len()];
        for (pi, members) in patches.iter().enumerate() {
            let mut queue = vec![members[0]];
            orient[members[0]] = Some(true);
            while let Some(i) = queue.pop() {
                let (a, b, c) = tris[i];
                for e in [(a, b), (a, c), (b, c)] {
                    for &j in &edge_tris[&e] {
                        if j == i {
                            continue;
                        }
                        // A consistent orientation traverses a shared edge
                        // in opposite directions in the two triangles.
                        let want = orient[i].unwrap() ^ same_edge_direction(tris[i], tris[j], e);
                        match orient[j] {
                            None => {
                                orient[j] = Some(want);
                                queue.push(j);
                            }
                            Some(o) => {
                                if o != want {
                                    patch_orientable[pi] = false;
                                }
                            }
                        }
                    }
                }
            }
        }

        let mut components: Vec<SurfaceComponent> = Vec::new();
        for (pi, members) in patches.iter().enumerate() {
            let member_set: BTreeSet<usize> = members.iter().copied().collect();
            let mut verts: BTreeSet<u32> = BTreeSet::new();
            let mut edges: BTreeSet<(u32, u32)> = BTreeSet::new();
            for &i in members {
                let (a, b, c) = tris[i];
                verts.extend([a, b, c]);
                edges.extend([(a, b), (a, c), (b, c)]);
            }
            let mut v_copies = 0usize;
            let mut interior_marks: Vec<u32> = Vec::new();
            let mut corner_copies: Vec<(u32, Vec<(u32, u32, u32)>)> = Vec::new();
            for &v in &verts {
                for lc in &links[&v] {
                    match lc.kind {
                        LinkKind::IsolatedSegment => {}
                        LinkKind::Cone | LinkKind::Corner => {
                            let inside = tri_idx[&lc.triangles[0]];
                            if !member_set.contains(&inside) {
                                continue;
                            }
                            v_copies += 1;
                            if lc.kind == LinkKind::Cone {
                                if let Some(&s) = singular.get(&v) {
                                    interior_marks.push(s);
                                }
                            } else {
                                corner_copies.push((v, lc.triangles.clone()));
                            }
                        }
                    }
                }
            }
            let chi = v_copies as i64 - edges.len() as i64 + members.len() as i64;
            // Boundary walk: corner copies linked through boundary edges.
            let mut slot_of_edge: BTreeMap<((u32, u32), u32), usize> = BTreeMap::new();
            for (ci, (v, fan)) in corner_copies.iter().enumerate() {
                for e in corner_extreme_edges(*v, fan) {
                    slot_of_edge.insert((e, *v), ci);
                }
            }
            let boundary_edges: Vec<(u32, u32)> =
                edges.iter().copied().filter(|&e| edge_tris[&e].len() == 1).collect();
            let mut used: BTreeSet<(u32, u32)> = BTreeSet::new();
            let mut boundaries: Vec<Vec<u32>> = Vec::new();
            for &start in &boundary_edges {
                if used.contains(&start) {
                    continue;
                }
                let mut cycle_marks: Vec<u32> = Vec::new();
                let mut cur = start;
                let mut from = directed_boundary_tail(&tris, &edge_tris, &orient, start);
                loop {
                    used.insert(cur);
                    let to = if cur.0 == from { cur.1 } else { cur.0 };
                    if let Some(&s) = singular.get(&to) {
                        cycle_marks.push(s);
                    }
                    let ci = slot_of_edge[&(cur, to)];
                    let (v, fan) = &corner_copies[ci];
                    let ext = corner_extreme_edges(*v, fan);
                    let next = if ext[0] == cur { ext[1] } else { ext[0] };
                    from = to;
                    cur = next;
                    if cur == start {
                        break;
                    }
                }
                boundaries.push(cycle_marks);
            }
            let b = boundaries.len() as i64;
            let genus = 2 - b - chi;
            assert!(genus >= 0, "negative genus in patch classification");
            interior_marks.sort_unstable();
            components.push(SurfaceComponent {
                orientable: patch_orientable[pi],
                genus: genus as u32,
                interior_marks,
                boundaries,
            });
        }

        let mut segments: Vec<(u32, u32)> = Vec::new();
        for &(a, b) in &self.edges {
            if self.triangles_of_edge((a, b)).is_empty() {
                segments.push((singular[&a], singular[&b]));
            }
        }

        let mut t =
            TopoComplex { components, segments, n_singular: singular.len() as u32 };
        normalize_boundary_cycles(&mut t);
        t.validate().map_err(StructureError)?;
        Ok(t)
    }
}

impl Default for SimplicialComplex2 {
    fn default() -> Self {
        SimplicialComplex2::new()
    }
}

/// Canonical boundary-cycle presentation: rotate each cycle to its least
/// form; reflect per-cycle for non-orientable components, globally for
/// orientable ones; sort cycle lists.
pub fn normalize_boundary_cycles(t: &mut TopoComplex) {
    for c in &mut t.components {
        if c.orientable {
            let mut a: Vec<Vec<u32>> = c.boundaries.iter().map(|b| least_rotation(b)).collect();
            a.sort();
            let mut b: Vec<Vec<u32>> = c
                .boundaries
                .iter()
                .map(|cy| {
                    let r: Vec<u32> = cy.iter().rev().copied().collect();
                    least_rotation(&r)
                })
                .collect();
            b.sort();
            c.boundaries = if a <= b { a } else { b };
        } else {
            let mut v: Vec<Vec<u32>> = c
                .boundaries
                .iter()
                .map(|cy| {
                    let fwd = least_rotation(cy);
                    let rev: Vec<u32> = cy.iter().rev().copied().collect();
                    fwd.min(least_rotation(&rev))
                })
                .collect();
            v.sort();
            c.boundaries = v;
        }
        c.interior_marks.sort_unstable();
    }
}

pub fn least_rotation(cycle: &[u32]) -> Vec<u32> {
    if cycle.is_empty() {
        return Vec::new();
    }
    let n = cycle.len();
    let mut best: Option<Vec<u32>> = None;
    for s in 0..n {
        let cand: Vec<u32> = (0..n).map(|i| cycle[(s + i) % n]).collect();
        if best.as_ref().map_or(true, |b| &cand < b) {
            best = Some(cand);
        }
    }
    best.unwrap()
}

/// Order a triangle fan around `p`. For corners, start from `start_edge`
/// (an extreme edge); for cones, start anywhere deterministic.
fn order_fan(
    p: u32,
    tris: &[(u32, u32, u32)],
    start_edge: Option<(u32, u32)>,
) -> Vec<(u32, u32, u32)> {
    let p_edges = |t: (u32, u32, u32)| -> [(u32, u32); 2] {
        let others: Vec<u32> = [t.0, t.1, t.2].into_iter().filter(|&x| x != p).collect();
        [(p.min(others[0]), p.max(others[0])), (p.min(others[1]), p.max(others[1]))]
    };
    let mut remaining: Vec<(u32, u32, u32)> = tris.to_vec();
    remaining.sort_unstable();
    let mut ordered = Vec::new();
    // Pick the first triangle: one containing start_edge, else least.
    let first_pos = match start_edge {
        Some(e) => remaining.iter().position(|&t| p_edges(t).contains(&e)).unwrap_or(0),
        None => 0,
    };
    let first = remaining.remove(first_pos);
    let mut boundary_edge = match start_edge {
        Some(e) => {
            let pe = p_edges(first);
            if pe[0] == e {
                pe[1]
            } else {
                pe[0]
            }
        }
        None => p_edges(first)[1],
    };
    ordered.push(first);
    while !remaining.is_empty() {
        let pos = remaining.iter().position(|&t| p_edges(t).contains(&boundary_edge));
        let Some(pos) = pos else { break };
        let t = remaining.remove(pos);
        let pe = p_edges(t);
        boundary_edge = if pe[0] == boundary_edge { pe[1] } else { pe[0] };
        ordered.push(t);
    }
    ordered.extend(remaining);
    ordered
}

fn sort2<'a>(a: &'a str, b: &'a str) -> (&'a str, &'a str) {
    if a <= b {
        (a, b)
    } else {
        (b, a)
    }
}

fn same_edge_direction(t1: (u32, u32, u32), t2: (u32, u32, u32), e: (u32, u32)) -> bool {
    let dir = |t: (u32, u32, u32)| [(t.0, t.1), (t.1, t.2), (t.2, t.0)].contains(&e);
    dir(t1) == dir(t2)
}

fn corner_extreme_edges(v: u32, fan: &[(u32, u32, u32)]) -> [(u32, u32); 2] {
    let p_edges = |t: (u32, u32, u32)| -> Vec<(u32, u32)> {
        [t.0, t.1, t.2]
            .into_iter()
            .filter(|&x| x != v)
            .map(|x| (v.min(x), v.max(x)))
            .collect()
    };
    let mut count: BTreeMap<(u32, u32), usize> = BTreeMap::new();
    for &t in fan {
        for e in p_edges(t) {
            *count.entry(e).or_default() += 1;
        }
    }
    let ext: Vec<(u32, u32)> =
        count.into_iter().filter(|&(_, c)| c == 1).map(|(e, _)| e).collect();
    assert_eq!(ext.len(), 2, "corner fan has two extreme edges");
    [ext[0], ext[1]]
}

/// Tail vertex for walking boundary edge `e` in the direction induced by
/// its unique triangle's orientation.
fn directed_boundary_tail(
    tris: &[(u32, u32, u32)],
    edge_tris: &BTreeMap<(u32, u32), Vec<usize>>,
    orient: &[Option<bool>],
    e: (u32, u32),
) -> u32 {
    let i = edge_tris[&e][0];
    let t = tris[i];
    let forward = orient[i].unwrap_or(true);
    let cyc = if forward {
        [(t.0, t.1), (t.1, t.2), (t.2, t.0)]
    } else {
        [(t.1, t.0), (t.2, t.1), (t.0, t.2)]
    };
    for (x, y) in cyc {
        if (x.min(y), x.max(y)) == e {
            return x;
        }
    }
    unreachable!("edge not on triangle");
}

#[cfg(test)]
pub mod fixtures {
    use super::SimplicialComplex2;
    use alloc::vec::Vec;

    pub fn tetrahedron() -> SimplicialComplex2 {
        let mut c = SimplicialComplex2::new();
        c.triangle("a", "b", "c");
        c.triangle("a", "b", "d");
        c.triangle("a", "c", "d");
        c.triangle("b", "c", "d");
        c
    }

    pub fn octahedron() -> SimplicialComplex2 {
        let mut c = SimplicialComplex2::new();
        let eq = ["e1", "e2", "e3", "e4"];
        for i in 0..4 {
            let j = (i + 1) % 4;
            c.triangle("n", eq[i], eq[j]);
            c.triangle("s", eq[i], eq[j]);
        }
        c
    }

    pub fn moebius() -> SimplicialComplex2 {
        let mut c = SimplicialComplex2::new();
        let v = ["m0", "m1", "m2", "m3", "m4"];
        for i in 0..5 {
            c.triangle(v[i], v[(i + 1) % 5], v[(i + 2) % 5]);
        }
        c
    }

    pub fn three_book() -> SimplicialComplex2 {
        let mut c = SimplicialComplex2::new();
        c.triangle("a", "b", "c");
        c.triangle("a", "b", "d");
        c.triangle("a", "b", "e");
        c
    }

    pub fn corpus() -> Vec<(SimplicialComplex2, &'static str)> {
        let mut out = Vec::new();
        out.push((tetrahedron(), "tetra"));
        out.push((octahedron(), "octa"));
        let mut tri = SimplicialComplex2::new();
        tri.triangle("a", "b", "c");
        out.push((tri, "disk"));
        let mut seg = SimplicialComplex2::new();
        seg.edge("a", "b");
        out.push((seg, "segment"));
        let mut pinch = SimplicialComplex2::new();
        pinch.triangle("p", "a", "b");
        pinch.triangle("p", "x", "y");
        out.push((pinch, "two corners"));
        out.push((moebius(), "moebius"));
        out
    }
}

#[cfg(test)]
mod tests {
    use super::fixtures::*;
    use super::*;

    #[test]
    fn three_book_detection() {
        assert!(three_book().detect_3book());
        let mut one = SimplicialComplex2::new();
        one.triangle("a", "b", "c");
        assert!(!one.detect_3book());
        assert!(!octahedron().detect_3book());
    }

    #[test]
    fn link_classification() {
        // Interior vertex of a full wheel: one cone, regular.
        let mut c = SimplicialComplex2::new();
        let rim = ["r1", "r2", "r3", "r4"];
        for i in 0..4 {
            c.triangle("p", rim[i], rim[(i + 1) % 4]);
        }
        let p = c.vertex("p");
        let (comps, regular) = c.link_components(p).unwrap();
        assert_eq!(comps.len(), 1);
        assert_eq!(comps[0].kind, LinkKind::Cone);
        assert!(regular);
        // Apex of two triangles sharing only that vertex: two corners,
        // singular.
        let mut c = SimplicialComplex2::new();
        c.triangle("p", "a", "b");
        c.triangle("p", "x", "y");
        let p = c.vertex("p");
        let (comps, regular) = c.link_components(p).unwrap();
        assert_eq!(comps.len(), 2);
        assert!(comps.iter().all(|l| l.kind == LinkKind::Corner));
        assert!(!regular);
        // Endpoint of a lone edge: one isolated segment, singular.
        let mut c = SimplicialComplex2::new();
        c.edge("p", "q");
        let p = c.vertex("p");
        let (comps, regular) = c.link_components(p).unwrap();
        assert_eq!(comps.len(), 1);
        assert_eq!(comps[0].kind, LinkKind::IsolatedSegment);
        assert!(!regular);
    }

    #[test]
    fn tetrahedron_is_a_sphere() {
        let t = tetrahedron().to_topological().unwrap();
        assert_eq!(t.components.len(), 1);
        let c = &t.components[0];
        assert!(c.orientable);
        assert_eq!(c.genus, 0);
        assert!(c.boundaries.is_empty());
        assert!(c.interior_marks.is_empty());
        assert!(t.segments.is_empty());
    }

    #[test]
    fn octahedron_is_a_sphere() {
        let t = octahedron().to_topological().unwrap();
        assert_eq!(t.components.len(), 1);
        assert_eq!(t.components[0].genus, 0);
        assert!(t.components[0].orientable);
    }

    #[test]
    fn two_triangles_sharing_a_vertex() {
        let mut c = SimplicialComplex2::new();
        c.triangle("p", "a", "b");
        c.triangle("p", "x", "y");
        let t = c.to_topological().unwrap();
        assert_eq!(t.components.len(), 2);
        assert_eq!(t.n_singular, 1);
        for comp in &t.components {
            assert!(comp.orientable);
            assert_eq!(comp.genus, 0);
            assert_eq!(comp.boundaries.len(), 1);
            assert_eq!(comp.boundaries[0], alloc::vec![0]);
        }
    }

    #[test]
    fn single_triangle_is_a_disk() {
        let mut c = SimplicialComplex2::new();
        c.triangle("a", "b", "c");
        let t = c.to_topological().unwrap();
        assert_eq!(t.components.len(), 1);
        let comp = &t.components[0];
        assert!(comp.orientable);
        assert_eq!(comp.genus, 0);
        assert_eq!(comp.boundaries.len(), 1);
        assert!(comp.boundaries[0].is_empty());
    }

    #[test]
    fn moebius_strip_classification() {
        let t = moebius().to_topological().unwrap();
        assert_eq!(t.components.len(), 1);
        let comp = &t.components[0];
        assert!(!comp.orientable);
        assert_eq!(comp.genus, 1);
        assert_eq!(comp.boundaries.len(), 1);
    }

    #[test]
    fn figure_one_style_complex() {
        // Crafted so the output has 5 singular points and 2 isolated
        // segments.
        let mut c = SimplicialComplex2::new();
        c.triangle("s1", "a1", "a2");
        c.triangle("s1", "a1", "a3");
        c.triangle("s1", "a2", "a3");
        c.triangle("a1", "a2", "a3");
        c.triangle("s2", "b1", "b2");
        c.triangle("s2", "b1", "b3");
        c.triangle("s2", "b2", "b3");
        c.triangle("b1", "b2", "b3");
        c.edge("s1", "s2");
        c.triangle("s3", "c1", "c2");
        c.triangle("s3", "d1", "d2");
        c.edge("s3", "s4");
        c.triangle("s5", "e1", "e2");
        c.triangle("s5", "e1", "e3");
        c.triangle("s5", "e2", "e3");
        c.triangle("e1", "e2", "e3");
        c.triangle("s5", "f1", "f2");
        c.triangle("s5", "f1", "f3");
        c.triangle("s5", "f2", "f3");
        c.triangle("f1", "f2", "f3");
        let t = c.to_topological().unwrap();
        assert_eq!(t.n_singular, 5);
        assert_eq!(t.segments.len(), 2);
        t.validate().unwrap();
    }

    #[test]
    fn to_topological_rejects_bad_input() {
        assert!(three_book().to_topological().is_err());
        let mut c = SimplicialComplex2::new();
        c.triangle("a", "b", "c");
        c.vertex("lonely");
        assert!(c.to_topological().is_err());
    }

    #[test]
    fn sizes_are_linear_in_simplices() {
        for (c, name) in corpus() {
            let t = c.to_topological().unwrap();
            assert!(t.size() <= 10 * c.n_simplices(), "size blowup for {name}");
        }
    }

    #[test]
    fn smc_text_roundtrip() {
        for (c, _) in corpus() {
            let text = c.to_text();
            let c2 = SimplicialComplex2::parse(&text).unwrap();
            assert_eq!(text, c2.to_text());
        }
    }
}
