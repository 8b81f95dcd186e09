//! Reconstruction of the underlying surface components from map data:
//! Euler characteristic bookkeeping plus orientability propagation over the
//! ribbon-and-face assembly graph.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use super::trace::{mirror_state, ref_sign, ribbon_gauges, ribbon_pieces, state_dart};
use super::CombMap;
use crate::surface::TopoComplex;

/// Union-find with parity (relative orientation flips).
pub struct ParityUf {
    parent: Vec<usize>,
    // Parity of the edge to the parent.
    parity: Vec<bool>,
}

impl ParityUf {
    pub fn new(n: usize) -> Self {
        ParityUf { parent: (0..n).collect(), parity: vec![false; n] }
    }

    pub fn find(&mut self, x: usize) -> (usize, bool) {
        if self.parent[x] == x {
            return (x, false);
        }
        let (r, p) = self.find(self.parent[x]);
        let total = p ^ self.parity[x];
        self.parent[x] = r;
        self.parity[x] = total;
        (r, total)
    }

    /// Join with the constraint parity(a) ^ parity(b) == rel. Returns false
    /// on contradiction.
    pub fn union(&mut self, a: usize, b: usize, rel: bool) -> bool {
        let (ra, pa) = self.find(a);
        let (rb, pb) = self.find(b);
        if ra == rb {
            return (pa ^ pb) == rel;
        }
        self.parent[rb] = ra;
        self.parity[rb] = pa ^ pb ^ rel;
        true
    }
}

pub struct ComponentTopology {
    pub orientable: bool,
    pub genus: i64,
}

/// Recompute the topology of one complex component from the embedded data.
pub fn component_topology(m: &CombMap, comp: u32) -> Result<ComponentTopology, String> {
    let (piece, n_pieces) = ribbon_pieces(m);
    let gauges = ribbon_gauges(m, &piece, n_pieces);

    // Counts restricted to this component.
    let mut v = 0i64;
    for (ni, node) in m.nodes.iter().enumerate() {
        let _ = ni;
        if node.place.component() == Some(comp) {
            v += 1;
        }
    }
    let mut e = 0i64;
    for edge in &m.edges {
        if m.node_component(edge.ends[0]) == Some(comp) {
            e += 1;
        }
    }
    let faces: Vec<(usize, &super::FaceRec)> =
        m.faces.iter().enumerate().filter(|(_, f)| f.comp == comp).collect();
    let uncovered: i64 = faces.iter().map(|(_, f)| f.circles.len() as i64).sum();
    let contrib: i64 = faces.iter().map(|(_, f)| 2 - f.genus as i64 - f.ends() as i64).sum();
    let chi = v - e + contrib + uncovered;
    let genus = 2 - chi;

    // Orientability via parity propagation: pieces are ribbons and faces.
    let mut orientable = true;
    let ribbons_here: Vec<u32> = {
        let mut set = alloc::collections::BTreeSet::new();
        for (ni, node) in m.nodes.iter().enumerate() {
            if node.place.component() == Some(comp) && piece[ni] != u32::MAX {
                set.insert(piece[ni]);
            }
        }
        set.into_iter().collect()
    };
    for &r in &ribbons_here {
        if gauges[r as usize].is_none() {
            orientable = false;
        }
    }
    for (_, f) in &faces {
        if !f.orientable {
            orientable = false;
        }
    }
    let mut uf = ParityUf::new(n_pieces as usize + m.faces.len());
    let face_node = |fi: usize| n_pieces as usize + fi;
    if orientable {
        'outer: for (fi, f) in &faces {
            for &a in &f.anchors {
                let d = state_dart(a);
                let tail = m.dart_tail(d);
                let r = piece[tail as usize];
                let Some(flips) = &gauges[r as usize] else {
                    orientable = false;
                    break 'outer;
                };
                // Convention fixed by the plane: a face anchored on the
                // reference direction has the same orientation sign as the
                // ribbon.
                let rel = !ref_sign(m, flips, a);
                if !uf.union(face_node(*fi), r as usize, rel) {
                    orientable = false;
                    break 'outer;
                }
            }
        }
    }

    // Connectivity: every face and ribbon of the component in one group.
    let mut cc = ParityUf::new(n_pieces as usize + m.faces.len());
    for (fi, f) in &faces {
        for &a in &f.anchors {
            let r = piece[m.dart_tail(state_dart(a)) as usize];
            cc.union(face_node(*fi), r as usize, false);
        }
    }
    let mut roots = alloc::collections::BTreeSet::new();
    for (fi, _) in &faces {
        roots.insert(cc.find(face_node(*fi)).0);
    }
    for &r in &ribbons_here {
        roots.insert(cc.find(r as usize).0);
    }
    if roots.len() > 1 {
        return Err(format!("component {comp}: embedded data is not connected"));
    }
    if faces.is_empty() {
        return Err(format!("component {comp}: no face"));
    }

    Ok(ComponentTopology { orientable, genus })
}

/// Check one component's recomputed topology against the complex.
pub fn component_check(m: &CombMap, comp: u32) -> Result<(), String> {
    let got = component_topology(m, comp)?;
    let want = &m.complex.components[comp as usize];
    if got.genus != want.genus as i64 {
        return Err(format!(
            "component {comp}: Euler accounting gives genus {}, complex says {}",
            got.genus, want.genus
        ));
    }
    if got.orientable != want.orientable {
        return Err(format!(
            "component {comp}: orientability mismatch (computed {}, complex {})",
            got.orientable, want.orientable
        ));
    }
    Ok(())
}

/// The complex the map lives on, recomputed from the embedded data (the
/// graph is forgotten; the singular structure is retained). For a valid map
/// this is homeomorphic to `m.complex`.
pub fn underlying_complex(m: &CombMap) -> Result<TopoComplex, String> {
    let mut components = Vec::new();
    for (ci, c) in m.complex.components.iter().enumerate() {
        let topo = component_topology(m, ci as u32)?;
        if topo.genus < 0 {
            return Err(format!("component {ci}: negative genus"));
        }
        components.push(crate::surface::SurfaceComponent {
            orientable: topo.orientable,
            genus: topo.genus as u32,
            interior_marks: c.interior_marks.clone(),
            boundaries: c.boundaries.clone(),
        });
    }
    let mut t = TopoComplex {
        components,
        segments: m.complex.segments.clone(),
        n_singular: m.complex.n_singular,
    };
    crate::simplicial::normalize_boundary_cycles(&mut t);
    Ok(t)
}

/// Orientation class for re-anchoring after edits: for every state of an
/// orientable assembly, whether it lies on the positively-induced side.
/// Used internally by the edit machinery.
pub struct FaceOrientations {
    /// For each face (by index), whether its anchors agree with the solved
    /// global orientation (only meaningful when the component assembly is
    /// orientable).
    pub face_sign: BTreeMap<usize, bool>,
}

/// Mirror-pair id for a state's orbit: the smaller of the two orbit ids.
pub fn walk_pair(m: &CombMap, orbit_of: &[u32], s: u32) -> u32 {
    let a = orbit_of[s as usize];
    let b = orbit_of[mirror_state(m, s) as usize];
    a.min(b)
}
