//! Combinatorial maps: graphs properly embedded on a 2-complex.
//!
//! The surface part is a signed rotation system over map nodes, augmented
//! with one boundary-arc edge per stretch of a covered boundary circle. Face
//! records carry the topology of possibly non-cellular faces: one anchor
//! state per boundary walk (fixing the direction the face induces on it),
//! isolated nodes and whole uncovered circles inside the face, genus and
//! orientability. Segments carry traces alternating nodes with edge-or-gap
//! connections. Identifications group node copies at occurrences of one
//! singular point.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::graph::Graph;
use crate::surface::TopoComplex;

mod assemble;
#[cfg(test)]
mod kernel_tests;
mod canon;
mod edit;
mod enumerate;
mod iso;
mod trace;
mod validate;

pub use assemble::underlying_complex;
pub use canon::{canonical_form, canonical_form_capped, mirror_component};
pub use edit::{
    compact_graph_edge_ids as edit_compact, delete_surface_edges, merge_equal_gaps,
    remove_free_isolated_nodes, remove_nodes as edit_remove_nodes, subdivide_graph_edge,
};
pub use enumerate::{
    component_completions, enumerate_embeddings_of_graph, enumerate_proper, enumerate_proper_embeddings,
    EnumOptions,
};
pub use iso::{map_isomorphic, map_isomorphic_capped};
pub use trace::{co_state, mirror_state, state_dart, state_dir};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Placement {
    Interior(u32),
    InteriorMark(u32, u32),
    BoundaryMark(u32, u32, u32),
    SegmentInterior(u32),
    SegmentEnd(u32, u8),
}

impl Placement {
    pub fn component(&self) -> Option<u32> {
        match *self {
            Placement::Interior(c)
            | Placement::InteriorMark(c, _)
            | Placement::BoundaryMark(c, _, _) => Some(c),
            _ => None,
        }
    }

    /// The singular point this placement pins, if any.
    pub fn singular(&self, t: &TopoComplex) -> Option<u32> {
        match *self {
            Placement::InteriorMark(c, i) => {
                Some(t.components[c as usize].interior_marks[i as usize])
            }
            Placement::BoundaryMark(c, b, p) => {
                Some(t.components[c as usize].boundaries[b as usize][p as usize])
            }
            Placement::SegmentEnd(s, e) => {
                let seg = t.segments[s as usize];
                Some(if e == 0 { seg.0 } else { seg.1 })
            }
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Node {
    pub place: Placement,
    pub label: Option<u32>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EdgeKind {
    /// A graph edge (id into the map's abstract edge space).
    Real(u32),
    /// A stretch of a covered boundary circle: (component, circle, arc pos).
    Arc(u32, u32, u32),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SurfEdge {
    /// Tail nodes of darts 2i and 2i+1.
    pub ends: [u32; 2],
    pub flipped: bool,
    pub kind: EdgeKind,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FaceRec {
    pub comp: u32,
    /// One state per boundary walk; the state's orbit is the direction the
    /// face induces on the walk.
    pub anchors: Vec<u32>,
    pub isolated: Vec<u32>,
    /// Uncovered boundary circles of the component lying inside this face.
    pub circles: Vec<u32>,
    pub genus: u32,
    pub orientable: bool,
    pub label: Option<u8>,
    /// Set when the face is the cap of a covered boundary circle.
    pub is_hole: Option<u32>,
}

impl FaceRec {
    pub fn ends(&self) -> usize {
        self.anchors.len() + self.isolated.len() + self.circles.len()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Conn {
    Edge(u32),
    Gap(Option<u8>),
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SegmentTrace {
    pub end_nodes: [Option<u32>; 2],
    /// Interior nodes in order from end 0 to end 1.
    pub interior_nodes: Vec<u32>,
    /// Connections between consecutive sites, including the stretches next
    /// to uncovered endpoints. Length = #sites + 1 - #covered ends.
    pub conns: Vec<Conn>,
}

impl SegmentTrace {
    pub fn empty() -> Self {
        SegmentTrace {
            end_nodes: [None, None],
            interior_nodes: Vec::new(),
            conns: vec![Conn::Gap(None)],
        }
    }

    /// Sites in order along the segment (covered ends included).
    pub fn sites(&self) -> Vec<u32> {
        let mut out = Vec::new();
        if let Some(n) = self.end_nodes[0] {
            out.push(n);
        }
        out.extend(self.interior_nodes.iter().copied());
        if let Some(n) = self.end_nodes[1] {
            out.push(n);
        }
        out
    }

    pub fn expected_conns(&self) -> usize {
        let covered = self.end_nodes.iter().flatten().count();
        self.sites().len() + 1 - covered
    }

    /// For conn index `i`, the adjacent site nodes (left, right); the
    /// stretches next to uncovered ends have one side missing.
    pub fn conn_neighbors(&self, i: usize) -> (Option<u32>, Option<u32>) {
        let sites = self.sites();
        let lead = self.end_nodes[0].is_none();
        let left = if lead {
            if i == 0 {
                None
            } else {
                sites.get(i - 1).copied()
            }
        } else {
            sites.get(i).copied()
        };
        let right_idx = if lead { i } else { i + 1 };
        let right = sites.get(right_idx).copied();
        (left, right)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CombMap {
    pub complex: TopoComplex,
    pub nodes: Vec<Node>,
    /// Cyclic dart order per node; empty for segment nodes and isolated
    /// surface nodes.
    pub rotations: Vec<Vec<u32>>,
    pub edges: Vec<SurfEdge>,
    pub faces: Vec<FaceRec>,
    pub traces: Vec<SegmentTrace>,
    /// Explicit identification classes: (singular id, node copies).
    pub idents: Vec<(u32, Vec<u32>)>,
    pub n_graph_edges: u32,
    /// Optional per-graph-edge tags (used for edge partitions).
    pub tags: Vec<Option<u32>>,
}

impl CombMap {
    /// The map with no graph at all: one face per component containing all
    /// its circles, all-gap traces.
    pub fn empty_on(complex: &TopoComplex) -> CombMap {
        let faces = complex
            .components
            .iter()
            .enumerate()
            .map(|(ci, c)| FaceRec {
                comp: ci as u32,
                anchors: Vec::new(),
                isolated: Vec::new(),
                circles: (0..c.boundaries.len() as u32).collect(),
                genus: c.genus,
                orientable: c.orientable,
                label: None,
                is_hole: None,
            })
            .collect();
        CombMap {
            complex: complex.clone(),
            nodes: Vec::new(),
            rotations: Vec::new(),
            edges: Vec::new(),
            faces,
            traces: complex.segments.iter().map(|_| SegmentTrace::empty()).collect(),
            idents: Vec::new(),
            n_graph_edges: 0,
            tags: Vec::new(),
        }
    }

    pub fn dart_tail(&self, d: u32) -> u32 {
        self.edges[(d / 2) as usize].ends[(d % 2) as usize]
    }

    pub fn dart_head(&self, d: u32) -> u32 {
        self.dart_tail(d ^ 1)
    }

    pub fn node_component(&self, n: u32) -> Option<u32> {
        self.nodes[n as usize].place.component()
    }

    /// Derived identification classes: for every covered singular point,
    /// the nodes at its occurrences.
    pub fn derived_idents(&self) -> Vec<(u32, Vec<u32>)> {
        let mut by_sing: BTreeMap<u32, Vec<u32>> = BTreeMap::new();
        for (ni, node) in self.nodes.iter().enumerate() {
            if let Some(s) = node.place.singular(&self.complex) {
                by_sing.entry(s).or_default().push(ni as u32);
            }
        }
        by_sing.into_iter().collect()
    }

    /// Abstract vertex classes: nodes of one identification class collapse
    /// to one vertex. Returns (class id per node, #classes).
    pub fn node_classes(&self) -> (Vec<u32>, u32) {
        let mut class = vec![u32::MAX; self.nodes.len()];
        let mut next = 0u32;
        for (_, members) in self.derived_idents() {
            for &n in &members {
                class[n as usize] = next;
            }
            next += 1;
        }
        for c in class.iter_mut() {
            if *c == u32::MAX {
                *c = next;
                next += 1;
            }
        }
        (class, next)
    }

    /// Endpoint classes of each graph edge.
    pub fn graph_edge_ends(&self) -> Vec<(u32, u32)> {
        let (class, _) = self.node_classes();
        let mut out = vec![(u32::MAX, u32::MAX); self.n_graph_edges as usize];
        for e in &self.edges {
            if let EdgeKind::Real(id) = e.kind {
                out[id as usize] = (class[e.ends[0] as usize], class[e.ends[1] as usize]);
            }
        }
        for trace in &self.traces {
            for (i, conn) in trace.conns.iter().enumerate() {
                if let Conn::Edge(id) = conn {
                    let (l, r) = trace.conn_neighbors(i);
                    let l = l.expect("edge conn has a left site");
                    let r = r.expect("edge conn has a right site");
                    out[*id as usize] = (class[l as usize], class[r as usize]);
                }
            }
        }
        out
    }

    /// The abstract multigraph of the embedded graph, with vertices named
    /// by class id.
    pub fn abstract_graph(&self) -> Graph {
        let (_, n_classes) = self.node_classes();
        let mut g = Graph::new();
        for c in 0..n_classes {
            g.add_vertex(&alloc::format!("v{c}"));
        }
        for (a, b) in self.graph_edge_ends() {
            g.add_edge(a, b);
        }
        g
    }

    /// Number of abstract graph vertices (identification classes).
    pub fn n_graph_vertices(&self) -> u32 {
        self.node_classes().1
    }

    /// Vertex labels per class; `None` entries for unlabeled classes.
    pub fn class_labels(&self) -> Vec<Option<u32>> {
        let (class, n) = self.node_classes();
        let mut out = vec![None; n as usize];
        for (ni, node) in self.nodes.iter().enumerate() {
            if let Some(l) = node.label {
                out[class[ni] as usize] = Some(l);
            }
        }
        out
    }

    pub fn label_set(&self) -> BTreeSet<u32> {
        self.class_labels().into_iter().flatten().collect()
    }

    /// Whether all singular points of the complex are covered by nodes.
    /// Together with the encoding's boundary discipline this is properness.
    /// Assumes `validate` is clean.
    pub fn is_proper(&self) -> bool {
        let covered: BTreeSet<u32> = self.derived_idents().iter().map(|(s, _)| *s).collect();
        (0..self.complex.n_singular).all(|s| covered.contains(&s))
    }

    /// Cellularity: every non-hole face is an open disk plus possibly parts
    /// of the complex boundary (orientable, genus 0, exactly one end), and
    /// no segment gaps remain.
    pub fn is_cellular(&self) -> bool {
        for f in &self.faces {
            if f.is_hole.is_some() {
                continue;
            }
            if !f.orientable || f.genus != 0 || f.ends() != 1 {
                return false;
            }
        }
        for t in &self.traces {
            if t.conns.iter().any(|c| matches!(c, Conn::Gap(_))) {
                return false;
            }
        }
        true
    }

    /// Count of graph edges placed on surfaces (excluding arcs).
    pub fn n_surface_graph_edges(&self) -> usize {
        self.edges.iter().filter(|e| matches!(e.kind, EdgeKind::Real(_))).count()
    }

    /// Fresh node helper for constructions.
    pub fn push_node(&mut self, place: Placement, label: Option<u32>) -> u32 {
        self.nodes.push(Node { place, label });
        self.rotations.push(Vec::new());
        (self.nodes.len() - 1) as u32
    }

    /// Rebuild the explicit identification classes from placements.
    pub fn refresh_idents(&mut self) {
        self.idents = self.derived_idents();
    }

    /// Clear all face and gap labels.
    pub fn strip_face_labels(&mut self) {
        for f in &mut self.faces {
            f.label = None;
        }
        for t in &mut self.traces {
            for c in &mut t.conns {
                if let Conn::Gap(l) = c {
                    *l = None;
                }
            }
        }
    }

    /// Remove vertex labels not in `keep`.
    pub fn restrict_labels(&mut self, keep: &BTreeSet<u32>) {
        for n in &mut self.nodes {
            if let Some(l) = n.label {
                if !keep.contains(&l) {
                    n.label = None;
                }
            }
        }
    }

    pub fn validate(&self) -> Vec<String> {
        validate::validate(self)
    }
}
