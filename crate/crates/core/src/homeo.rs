//! Homeomorphism testing between topological 2-complexes.
//!
//! After dissolving singular points that merely join two segments, two
//! complexes are homeomorphic iff their data structures are isomorphic:
//! a correspondence of segments, surface components, and boundary circles
//! preserving genus, orientability, incidences, and cyclic orders — with a
//! global reversal allowed per orientable component and individual circle
//! reversals on non-orientable components.


use alloc::vec::Vec;

use crate::budget::{Budget, CapError};
use crate::simplicial::least_rotation;
use crate::surface::{Occurrence, TopoComplex};

/// Dissolve every singular point incident to exactly two isolated segments
/// and nothing else. A segment forming a closed loop on its own survives
/// (some vertex must remain to anchor the circle).
pub fn dissolve_degree_two_segment_points(t: &TopoComplex) -> TopoComplex {
    let mut t = t.clone();
    loop {
        let mut target = None;
        for s in 0..t.n_singular {
            let occ = t.occurrences(s);
            if occ.len() != 2 {
                continue;
            }
            let segs: Vec<(u32, u8)> = occ
                .iter()
                .filter_map(|o| match *o {
                    Occurrence::SegmentEnd { seg, end } => Some((seg, end)),
                    _ => None,
                })
                .collect();
            if segs.len() != 2 || segs[0].0 == segs[1].0 {
                continue;
            }
            target = Some((s, segs[0], segs[1]));
            break;
        }
        let Some((_, (s1, e1), (s2, e2))) = target else { break };
        let far1 = if e1 == 0 { t.segments[s1 as usize].1 } else { t.segments[s1 as usize].0 };
        let far2 = if e2 == 0 { t.segments[s2 as usize].1 } else { t.segments[s2 as usize].0 };
        let (hi, lo) = (s1.max(s2) as usize, s1.min(s2) as usize);
        t.segments.remove(hi);
        t.segments.remove(lo);
        t.segments.push((far1, far2));
        t.compact_singulars();
    }
    t
}

/// Decide homeomorphism by searching for a structure isomorphism.
pub fn are_homeomorphic(a: &TopoComplex, b: &TopoComplex) -> bool {
    are_homeomorphic_capped(a, b, &Budget::unlimited()).expect("unlimited budget")
}

pub fn are_homeomorphic_capped(
    a: &TopoComplex,
    b: &TopoComplex,
    budget: &Budget,
) -> Result<bool, CapError> {
    let a = dissolve_degree_two_segment_points(a);
    let b = dissolve_degree_two_segment_points(b);
    if a.components.len() != b.components.len()
        || a.segments.len() != b.segments.len()
        || a.n_singular != b.n_singular
    {
        return Ok(false);
    }
    // Invariant pre-partition: multiset of component frames and per-singular
    // occurrence profiles must agree.
    let mut fa: Vec<_> = a.components.iter().map(frame).collect();
    let mut fb: Vec<_> = b.components.iter().map(frame).collect();
    fa.sort();
    fb.sort();
    if fa != fb {
        return Ok(false);
    }
    let prof = |t: &TopoComplex, s: u32| {
        let mut interior = 0usize;
        let mut boundary = 0usize;
        let mut seg = 0usize;
        for o in t.occurrences(s) {
            match o {
                Occurrence::Interior { .. } => interior += 1,
                Occurrence::Boundary { .. } => boundary += 1,
                Occurrence::SegmentEnd { .. } => seg += 1,
            }
        }
        (interior, boundary, seg)
    };
    let mut pa: Vec<_> = (0..a.n_singular).map(|s| prof(&a, s)).collect();
    let mut pb: Vec<_> = (0..b.n_singular).map(|s| prof(&b, s)).collect();
    pa.sort();
    pb.sort();
    if pa != pb {
        return Ok(false);
    }
    // Backtrack over singular bijections (a -> b), then verify everything.
    let n = a.n_singular as usize;
    let mut phi: Vec<Option<u32>> = alloc::vec![None; n];
    let mut used = alloc::vec![false; n];
    search(&a, &b, &mut phi, &mut used, 0, budget)
}

fn frame(c: &crate::surface::SurfaceComponent) -> (bool, u32, usize, usize, Vec<usize>) {
    let mut sizes: Vec<usize> = c.boundaries.iter().map(|b| b.len()).collect();
    sizes.sort_unstable();
    (c.orientable, c.genus, c.interior_marks.len(), c.boundaries.len(), sizes)
}

fn search(
    a: &TopoComplex,
    b: &TopoComplex,
    phi: &mut Vec<Option<u32>>,
    used: &mut Vec<bool>,
    next: usize,
    budget: &Budget,
) -> Result<bool, CapError> {
    if next == phi.len() {
        return Ok(consistent(a, b, phi));
    }
    budget.charge("are_homeomorphic", 1)?;
    for cand in 0..phi.len() {
        if used[cand] {
            continue;
        }
        phi[next] = Some(cand as u32);
        used[cand] = true;
        if search(a, b, phi, used, next + 1, budget)? {
            return Ok(true);
        }
        phi[next] = None;
        used[cand] = false;
    }
    Ok(false)
}

/// With a full singular bijection fixed, components, segments, and circles
/// must match as multisets under the Lemma's reversal rules.
fn consistent(a: &TopoComplex, b: &TopoComplex, phi: &[Option<u32>]) -> bool {
    let map = |s: u32| phi[s as usize].unwrap();
    let mut seg_a: Vec<(u32, u32)> = a
        .segments
        .iter()
        .map(|&(x, y)| {
            let (x, y) = (map(x), map(y));
            (x.min(y), x.max(y))
        })
        .collect();
    let mut seg_b: Vec<(u32, u32)> =
        b.segments.iter().map(|&(x, y)| (x.min(y), x.max(y))).collect();
    seg_a.sort_unstable();
    seg_b.sort_unstable();
    if seg_a != seg_b {
        return false;
    }
    let mut comp_a: Vec<Vec<u8>> =
        a.components.iter().map(|c| component_key(c, &|s| map(s))).collect();
    let mut comp_b: Vec<Vec<u8>> = b.components.iter().map(|c| component_key(c, &|s| s)).collect();
    comp_a.sort();
    comp_b.sort();
    comp_a == comp_b
}

/// Canonical byte key of a component under a singular relabeling, modulo
/// the allowed reversals.
fn component_key(c: &crate::surface::SurfaceComponent, map: &dyn Fn(u32) -> u32) -> Vec<u8> {
    let mapped: Vec<Vec<u32>> =
        c.boundaries.iter().map(|cy| cy.iter().map(|&s| map(s)).collect()).collect();
    let boundaries = if c.orientable {
        // Global reversal: all circles reversed together.
        let mut fwd: Vec<Vec<u32>> = mapped.iter().map(|cy| least_rotation(cy)).collect();
        fwd.sort();
        let mut rev: Vec<Vec<u32>> = mapped
            .iter()
            .map(|cy| {
                let r: Vec<u32> = cy.iter().rev().copied().collect();
                least_rotation(&r)
            })
            .collect();
        rev.sort();
        fwd.min(rev)
    } else {
        // Individual reversals allowed.
        let mut v: Vec<Vec<u32>> = mapped
            .iter()
            .map(|cy| {
                let fwd = least_rotation(cy);
                let r: Vec<u32> = cy.iter().rev().copied().collect();
                fwd.min(least_rotation(&r))
            })
            .collect();
        v.sort();
        v
    };
    let mut marks: Vec<u32> = c.interior_marks.iter().map(|&s| map(s)).collect();
    marks.sort_unstable();
    let mut out = Vec::new();
    out.push(c.orientable as u8);
    out.extend(c.genus.to_be_bytes());
    out.extend((marks.len() as u32).to_be_bytes());
    for m in marks {
        out.extend(m.to_be_bytes());
    }
    out.extend((boundaries.len() as u32).to_be_bytes());
    for cy in boundaries {
        out.extend((cy.len() as u32).to_be_bytes());
        for m in cy {
            out.extend(m.to_be_bytes());
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::surface::SurfaceComponent;
    use alloc::vec;

    #[test]
    fn spheres_and_tori() {
        assert!(are_homeomorphic(&TopoComplex::sphere(), &TopoComplex::sphere()));
        assert!(!are_homeomorphic(&TopoComplex::sphere(), &TopoComplex::torus()));
        assert!(!are_homeomorphic(&TopoComplex::torus(), &TopoComplex::klein_bottle()));
    }

    #[test]
    fn segment_path_dissolves() {
        // Two segments joined at a degree-2 singular point == one segment.
        let path = TopoComplex {
            components: vec![],
            segments: vec![(0, 1), (1, 2)],
            n_singular: 3,
        };
        assert!(are_homeomorphic(&path, &TopoComplex::lone_segment()));
        // A closed chain of two segments is a circle, not a segment.
        let circle = TopoComplex {
            components: vec![],
            segments: vec![(0, 1), (1, 0)],
            n_singular: 2,
        };
        assert!(!are_homeomorphic(&circle, &TopoComplex::lone_segment()));
        let loop_seg = TopoComplex { components: vec![], segments: vec![(0, 0)], n_singular: 1 };
        assert!(are_homeomorphic(&circle, &loop_seg));
    }

    #[test]
    fn renaming_invariance() {
        let a = TopoComplex {
            components: vec![SurfaceComponent {
                orientable: true,
                genus: 0,
                interior_marks: vec![0, 1],
                boundaries: vec![],
            }],
            segments: vec![(0, 1)],
            n_singular: 2,
        };
        let b = TopoComplex {
            components: vec![SurfaceComponent {
                orientable: true,
                genus: 0,
                interior_marks: vec![1, 0],
                boundaries: vec![],
            }],
            segments: vec![(1, 0)],
            n_singular: 2,
        };
        assert!(are_homeomorphic(&a, &b));
    }

    #[test]
    fn boundary_cycle_reversal_rules() {
        let comp = |orientable: bool, genus: u32, cycles: Vec<Vec<u32>>| TopoComplex {
            components: vec![SurfaceComponent {
                orientable,
                genus,
                interior_marks: vec![],
                boundaries: cycles,
            }],
            segments: vec![(0, 1), (1, 2), (2, 0)],
            n_singular: 3,
        };
        // Non-orientable: any individual reversal is allowed.
        let m1 = comp(false, 1, vec![vec![0, 1, 2]]);
        let m2 = comp(false, 1, vec![vec![0, 2, 1]]);
        assert!(are_homeomorphic(&m1, &m2));
        // Orientable with two marked circles: reversing only one is not a
        // homeomorphism when the pair of cyclic orders distinguishes it.
        let o1 = comp(true, 0, vec![vec![0, 1, 2], vec![0, 1, 2]]);
        let o2 = comp(true, 0, vec![vec![0, 1, 2], vec![0, 2, 1]]);
        let o3 = comp(true, 0, vec![vec![0, 2, 1], vec![0, 2, 1]]);
        assert!(are_homeomorphic(&o1, &o3)); // global reversal
        assert!(!are_homeomorphic(&o1, &o2)); // single reversal
    }

    #[test]
    fn barycentric_subdivision_invariance() {
        for (c, name) in crate::simplicial::fixtures::corpus() {
            let t1 = c.to_topological().unwrap();
            let t2 = c.barycentric_subdivision().to_topological().unwrap();
            assert!(are_homeomorphic(&t1, &t2), "barycentric changed {name}");
        }
        // Tetrahedron and octahedron boundaries are homeomorphic.
        let tet = crate::simplicial::fixtures::tetrahedron().to_topological().unwrap();
        let oct = crate::simplicial::fixtures::octahedron().to_topological().unwrap();
        assert!(are_homeomorphic(&tet, &oct));
    }

    #[test]
    fn equivalence_axioms_on_fixtures() {
        let fixtures = [
            TopoComplex::sphere(),
            TopoComplex::torus(),
            TopoComplex::projective_plane(),
            TopoComplex::klein_bottle(),
            TopoComplex::disk(),
            TopoComplex::moebius(),
            TopoComplex::lone_segment(),
            TopoComplex::sphere_with_segment(),
            TopoComplex::two_pinched_spheres(),
        ];
        for (i, a) in fixtures.iter().enumerate() {
            assert!(are_homeomorphic(a, a), "reflexivity {i}");
            for (j, b) in fixtures.iter().enumerate() {
                assert_eq!(are_homeomorphic(a, b), are_homeomorphic(b, a), "symmetry {i} {j}");
                if i != j {
                    assert!(!are_homeomorphic(a, b), "fixtures {i} and {j} should differ");
                }
            }
        }
    }
}
