//! Kernel tests for the map data structure: hand-built maps with known
//! topology, validation failure modes, enumeration counts derived by hand,
//! and canonical form / isomorphism agreement.

use alloc::collections::BTreeSet;
use alloc::vec;
use alloc::vec::Vec;

use crate::budget::Budget;
use crate::surface::TopoComplex;

use super::canon::{canonical_form, mirror_component};
use super::iso::map_isomorphic;
use super::{
    underlying_complex, CombMap, Conn, EdgeKind, FaceRec, Placement, SegmentTrace, SurfEdge,
};

/// One node with a loop on the given complex; faces supplied by caller.
fn loop_skeleton(complex: TopoComplex, flipped: bool) -> CombMap {
    let mut m = CombMap::empty_on(&complex);
    m.faces.clear();
    let n = m.push_node(Placement::Interior(0), None);
    m.edges.push(SurfEdge { ends: [n, n], flipped, kind: EdgeKind::Real(0) });
    m.n_graph_edges = 1;
    m.tags = vec![None];
    m.rotations[n as usize] = vec![0, 1];
    m.refresh_idents();
    m
}

fn disk_face(comp: u32, anchor: u32) -> FaceRec {
    FaceRec {
        comp,
        anchors: vec![anchor],
        isolated: Vec::new(),
        circles: Vec::new(),
        genus: 0,
        orientable: true,
        label: None,
        is_hole: None,
    }
}

#[test]
fn loop_on_sphere_two_disks() {
    let mut m = loop_skeleton(TopoComplex::sphere(), false);
    m.faces = vec![disk_face(0, 0), disk_face(0, 2)];
    assert!(m.validate().is_empty(), "{:?}", m.validate());
    assert!(m.is_proper());
    assert!(m.is_cellular());
    let u = underlying_complex(&m).unwrap();
    assert!(crate::homeo::are_homeomorphic(&u, &TopoComplex::sphere()));
}

#[test]
fn euler_violation_is_reported() {
    let mut m = loop_skeleton(TopoComplex::sphere(), false);
    m.faces = vec![disk_face(0, 0), disk_face(0, 2)];
    m.faces[1].genus = 2;
    m.faces[1].orientable = true;
    let v = m.validate();
    assert!(v.iter().any(|e| e.contains("Euler") || e.contains("genus")), "{v:?}");
}

#[test]
fn empty_sphere_map_is_proper_not_cellular() {
    let m = CombMap::empty_on(&TopoComplex::sphere());
    assert!(m.validate().is_empty(), "{:?}", m.validate());
    assert!(m.is_proper());
    assert!(!m.is_cellular());
}

#[test]
fn torus_loop_annulus_and_klein_twist() {
    // Non-contractible loop on the torus: one annulus face anchored
    // consistently.
    let mut m = loop_skeleton(TopoComplex::torus(), false);
    m.faces = vec![FaceRec {
        comp: 0,
        anchors: vec![0, 2], // (d0,+) and (d1,+)
        isolated: Vec::new(),
        circles: Vec::new(),
        genus: 0,
        orientable: true,
        label: None,
        is_hole: None,
    }];
    assert!(m.validate().is_empty(), "{:?}", m.validate());
    assert!(!m.is_cellular()); // annulus face has two ends
    let u = underlying_complex(&m).unwrap();
    assert!(crate::homeo::are_homeomorphic(&u, &TopoComplex::torus()));

    // The same rotation data with twisted anchors lives on the Klein
    // bottle instead.
    let mut k = loop_skeleton(TopoComplex::klein_bottle(), false);
    k.faces = vec![FaceRec {
        comp: 0,
        anchors: vec![0, 1], // (d0,+) and (d0,-): opposite induced directions
        isolated: Vec::new(),
        circles: Vec::new(),
        genus: 0,
        orientable: true,
        label: None,
        is_hole: None,
    }];
    assert!(k.validate().is_empty(), "{:?}", k.validate());
    let u = underlying_complex(&k).unwrap();
    assert!(crate::homeo::are_homeomorphic(&u, &TopoComplex::klein_bottle()));
    // And the twisted variant must NOT validate on the torus.
    let mut wrong = k.clone();
    wrong.complex = TopoComplex::torus();
    for f in &mut wrong.faces {
        let _ = f;
    }
    assert!(!wrong.validate().is_empty());
}

#[test]
fn projective_plane_loop() {
    let mut m = loop_skeleton(TopoComplex::projective_plane(), true);
    // One face traced both ways: orbits {0,1} and {2,3}; a single disk.
    m.faces = vec![disk_face(0, 0)];
    assert!(m.validate().is_empty(), "{:?}", m.validate());
    assert!(m.is_cellular());
    let u = underlying_complex(&m).unwrap();
    assert!(crate::homeo::are_homeomorphic(&u, &TopoComplex::projective_plane()));
}

#[test]
fn identification_merging_non_singular_is_a_violation() {
    let t = TopoComplex::sphere_with_segment();
    let mut m = CombMap::empty_on(&t);
    m.faces.clear();
    let a = m.push_node(Placement::InteriorMark(0, 0), None);
    let b = m.push_node(Placement::InteriorMark(0, 1), None);
    let c = m.push_node(Placement::Interior(0), None);
    let s0 = m.push_node(Placement::SegmentEnd(0, 0), None);
    let s1 = m.push_node(Placement::SegmentEnd(0, 1), None);
    m.traces[0] = SegmentTrace {
        end_nodes: [Some(s0), Some(s1)],
        interior_nodes: Vec::new(),
        conns: vec![Conn::Gap(None)],
    };
    m.faces = vec![FaceRec {
        comp: 0,
        anchors: Vec::new(),
        isolated: vec![a, b, c],
        circles: Vec::new(),
        genus: 0,
        orientable: true,
        label: None,
        is_hole: None,
    }];
    m.refresh_idents();
    assert!(m.validate().is_empty(), "{:?}", m.validate());
    assert!(m.is_proper());
    // Corrupt the identifications: merge the free node into a class.
    m.idents[0].1.push(c);
    let v = m.validate();
    assert!(v.iter().any(|e| e.contains("identification")), "{v:?}");
}

#[test]
fn enumerate_sphere_k1_three_classes() {
    let t = TopoComplex::sphere();
    let maps = super::enumerate_proper_embeddings(&t, 1, &Budget::new(1_000_000)).unwrap();
    assert_eq!(maps.len(), 3, "expected empty, isolated vertex, loop");
    let cellular: Vec<bool> = maps.iter().map(|m| m.is_cellular()).collect();
    // The loop (two disks) and the single vertex (disk) are cellular; the
    // empty map's face is the whole sphere.
    assert_eq!(cellular.iter().filter(|&&c| c).count(), 2);
}

#[test]
fn enumerate_lone_segment_k1_is_empty() {
    // One vertex cannot cover two singular endpoints.
    let t = TopoComplex::lone_segment();
    let maps = super::enumerate_proper_embeddings(&t, 1, &Budget::new(1_000_000)).unwrap();
    assert!(maps.is_empty());
}

#[test]
fn enumerate_lone_segment_k2() {
    let t = TopoComplex::lone_segment();
    let maps = super::enumerate_proper_embeddings(&t, 2, &Budget::new(1_000_000)).unwrap();
    // Two pinned endpoint vertices; the middle stretch is a gap or an edge.
    assert_eq!(maps.len(), 2);
    assert_eq!(maps.iter().filter(|m| m.is_cellular()).count(), 1);
    for m in &maps {
        assert!(m.is_proper());
        let u = underlying_complex(m).unwrap();
        assert!(crate::homeo::are_homeomorphic(&u, &t));
    }
}

#[test]
fn enumerate_torus_k1_no_cellular_classes() {
    let t = TopoComplex::torus();
    let maps = super::enumerate_proper_embeddings(&t, 1, &Budget::new(1_000_000)).unwrap();
    assert!(maps.iter().all(|m| !m.is_cellular()));
    assert!(!maps.is_empty());
    // Expected classes: empty, isolated vertex, contractible loop,
    // non-contractible loop.
    assert_eq!(maps.len(), 4);
}

#[test]
fn canonical_form_invariances() {
    let t = TopoComplex::torus();
    let maps = super::enumerate_proper_embeddings(&t, 1, &Budget::new(1_000_000)).unwrap();
    for m in &maps {
        // Gauge re-presentation: flip every vertex (reverse all rotations)
        // leaves the canonical form unchanged.
        let mut g = m.clone();
        for r in &mut g.rotations {
            r.reverse();
        }
        for f in &mut g.faces {
            for a in &mut f.anchors {
                *a = super::trace::mirror_state(m, *a);
            }
        }
        // Full mirror of the lone component: same map up to reflection.
        let mir = mirror_component(m, 0);
        assert_eq!(canonical_form(m), canonical_form(&mir));
        assert!(map_isomorphic(m, &mir));
        assert_eq!(canonical_form(&g), canonical_form(m));
        assert!(map_isomorphic(&g, m));
    }
    // Distinct classes stay distinct.
    let keys: BTreeSet<Vec<u8>> = maps.iter().map(canonical_form).collect();
    assert_eq!(keys.len(), maps.len());
    for (i, a) in maps.iter().enumerate() {
        for (j, b) in maps.iter().enumerate() {
            assert_eq!(map_isomorphic(a, b), i == j, "iso mismatch {i} {j}");
        }
    }
}

#[test]
fn loop_vs_edge_on_sphere_differ() {
    let t = TopoComplex::sphere();
    let maps = super::enumerate_proper_embeddings(&t, 2, &Budget::new(10_000_000)).unwrap();
    // Find a loop map and a two-vertex edge map; canonical forms differ.
    let loop_map = maps
        .iter()
        .find(|m| m.n_graph_edges == 1 && m.n_graph_vertices() == 1 && m.n_surface_graph_edges() == 1)
        .expect("loop class");
    let edge_map = maps
        .iter()
        .find(|m| m.n_graph_edges == 1 && m.n_graph_vertices() == 2)
        .expect("edge class");
    assert_ne!(canonical_form(loop_map), canonical_form(edge_map));
    assert!(!map_isomorphic(loop_map, edge_map));
}

#[test]
fn two_pinched_spheres_enumeration_covers_singular() {
    let t = TopoComplex::two_pinched_spheres();
    let maps = super::enumerate_proper_embeddings(&t, 1, &Budget::new(1_000_000)).unwrap();
    // The single vertex class must cover the pinch (both copies).
    assert!(!maps.is_empty());
    for m in &maps {
        assert!(m.is_proper());
        assert_eq!(m.idents.len(), 1);
        assert_eq!(m.idents[0].1.len(), 2);
        let u = underlying_complex(m).unwrap();
        assert!(crate::homeo::are_homeomorphic(&u, &t));
    }
}

#[test]
fn subdivision_preserves_validity() {
    let mut m = loop_skeleton(TopoComplex::sphere(), false);
    m.faces = vec![disk_face(0, 0), disk_face(0, 2)];
    let s = super::subdivide_graph_edge(&m, 0);
    assert!(s.validate().is_empty(), "{:?}", s.validate());
    assert_eq!(s.n_graph_edges, 2);
    assert_eq!(s.n_graph_vertices(), 2);
    let u = underlying_complex(&s).unwrap();
    assert!(crate::homeo::are_homeomorphic(&u, &TopoComplex::sphere()));
    // Subdividing again through the trace path keeps everything valid.
    let s2 = super::subdivide_graph_edge(&s, 1);
    assert!(s2.validate().is_empty(), "{:?}", s2.validate());
}

#[test]
fn deletion_of_loop_restores_empty_map() {
    let mut m = loop_skeleton(TopoComplex::torus(), false);
    m.faces = vec![FaceRec {
        comp: 0,
        anchors: vec![0, 2],
        isolated: Vec::new(),
        circles: Vec::new(),
        genus: 0,
        orientable: true,
        label: None,
        is_hole: None,
    }];
    assert!(m.validate().is_empty());
    let doomed: BTreeSet<u32> = [0u32].into_iter().collect();
    let d = super::delete_surface_edges(&m, &doomed).unwrap();
    assert!(d.validate().is_empty(), "{:?}", d.validate());
    assert_eq!(d.n_graph_edges, 0);
    // One face: the whole torus, with the leftover isolated node.
    assert_eq!(d.faces.len(), 1);
    assert_eq!(d.faces[0].genus, 2);
    let cleaned = super::remove_free_isolated_nodes(&d);
    assert!(cleaned.validate().is_empty(), "{:?}", cleaned.validate());
    assert!(map_isomorphic(&cleaned, &CombMap::empty_on(&TopoComplex::torus())));
}

#[test]
fn deletion_merges_disks_across_band() {
    // Loop on sphere, delete it: two disks merge into the whole sphere.
    let mut m = loop_skeleton(TopoComplex::sphere(), false);
    m.faces = vec![disk_face(0, 0), disk_face(0, 2)];
    let doomed: BTreeSet<u32> = [0u32].into_iter().collect();
    let d = super::delete_surface_edges(&m, &doomed).unwrap();
    assert!(d.validate().is_empty(), "{:?}", d.validate());
    assert_eq!(d.faces.len(), 1);
    assert_eq!(d.faces[0].genus, 0);
    assert!(d.faces[0].orientable);
}

#[test]
fn fixed_graph_mode_finds_k4_on_sphere() {
    let k4 = crate::graph::Graph::parse("a b\na c\na d\nb c\nb d\nc d").unwrap();
    let t = TopoComplex::sphere();
    let maps =
        super::enumerate_embeddings_of_graph(&k4, &t, &Budget::new(10_000_000), 5).unwrap();
    assert!(!maps.is_empty());
    for m in &maps {
        assert!(m.is_cellular());
        assert!(m.is_proper());
        assert!(m.abstract_graph().isomorphic(&k4, 30).unwrap());
    }
    // K5 has no sphere embedding.
    let k5 = crate::graph::Graph::parse("a b\na c\na d\na e\nb c\nb d\nb e\nc d\nc e\nd e")
        .unwrap();
    let none = super::enumerate_embeddings_of_graph(&k5, &t, &Budget::new(50_000_000), 1).unwrap();
    assert!(none.is_empty());
}
