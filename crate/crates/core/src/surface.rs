//! Homeomorphism-level representation of 2-complexes: the detached surface,
//! isolated segments, and singular points.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

/// One connected component of the detached surface. Genus is always Euler
/// genus (orientable genus counted doubly). Boundary circles carry cyclic
/// sequences of singular ids; an empty sequence is an unmarked circle.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct SurfaceComponent {
    pub orientable: bool,
    pub genus: u32,
    pub interior_marks: Vec<u32>,
    pub boundaries: Vec<Vec<u32>>,
}

impl SurfaceComponent {
    pub fn closed(orientable: bool, genus: u32) -> Self {
        SurfaceComponent { orientable, genus, interior_marks: Vec::new(), boundaries: Vec::new() }
    }

    pub fn sphere() -> Self {
        Self::closed(true, 0)
    }

    pub fn torus() -> Self {
        Self::closed(true, 2)
    }

    pub fn projective_plane() -> Self {
        Self::closed(false, 1)
    }

    pub fn klein_bottle() -> Self {
        Self::closed(false, 2)
    }

    /// Euler characteristic 2 - genus - #boundaries.
    pub fn euler_characteristic(&self) -> i64 {
        2 - self.genus as i64 - self.boundaries.len() as i64
    }

    pub fn mark_occurrences(&self) -> usize {
        self.interior_marks.len() + self.boundaries.iter().map(|b| b.len()).sum::<usize>()
    }
}

/// Where a singular point occurs in the structure.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Occurrence {
    Interior { comp: u32, idx: u32 },
    Boundary { comp: u32, circle: u32, pos: u32 },
    SegmentEnd { seg: u32, end: u8 },
}

/// A 2-complex up to homeomorphism: detached surface components, isolated
/// segments between singular points, and the implied identifications.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct TopoComplex {
    pub components: Vec<SurfaceComponent>,
    pub segments: Vec<(u32, u32)>,
    pub n_singular: u32,
}

impl TopoComplex {
    pub fn empty() -> Self {
        TopoComplex { components: Vec::new(), segments: Vec::new(), n_singular: 0 }
    }

    pub fn closed_surface(orientable: bool, genus: u32) -> Self {
        TopoComplex {
            components: vec![SurfaceComponent::closed(orientable, genus)],
            segments: Vec::new(),
            n_singular: 0,
        }
    }

    pub fn sphere() -> Self {
        Self::closed_surface(true, 0)
    }

    pub fn torus() -> Self {
        Self::closed_surface(true, 2)
    }

    pub fn projective_plane() -> Self {
        Self::closed_surface(false, 1)
    }

    pub fn klein_bottle() -> Self {
        Self::closed_surface(false, 2)
    }

    /// Disk: genus 0, one unmarked boundary circle.
    pub fn disk() -> Self {
        TopoComplex {
            components: vec![SurfaceComponent {
                orientable: true,
                genus: 0,
                interior_marks: Vec::new(),
                boundaries: vec![Vec::new()],
            }],
            segments: Vec::new(),
            n_singular: 0,
        }
    }

    /// Möbius band: non-orientable genus 1, one unmarked boundary circle.
    pub fn moebius() -> Self {
        TopoComplex {
            components: vec![SurfaceComponent {
                orientable: false,
                genus: 1,
                interior_marks: Vec::new(),
                boundaries: vec![Vec::new()],
            }],
            segments: Vec::new(),
            n_singular: 0,
        }
    }

    /// A single isolated segment with two singular endpoints.
    pub fn lone_segment() -> Self {
        TopoComplex { components: Vec::new(), segments: vec![(0, 1)], n_singular: 2 }
    }

    /// Sphere with an isolated segment attached at two interior points.
    pub fn sphere_with_segment() -> Self {
        TopoComplex {
            components: vec![SurfaceComponent {
                orientable: true,
                genus: 0,
                interior_marks: vec![0, 1],
                boundaries: Vec::new(),
            }],
            segments: vec![(0, 1)],
            n_singular: 2,
        }
    }

    /// Two spheres identified at one point.
    pub fn two_pinched_spheres() -> Self {
        TopoComplex {
            components: vec![
                SurfaceComponent {
                    orientable: true,
                    genus: 0,
                    interior_marks: vec![0],
                    boundaries: Vec::new(),
                },
                SurfaceComponent {
                    orientable: true,
                    genus: 0,
                    interior_marks: vec![0],
                    boundaries: Vec::new(),
                },
            ],
            segments: Vec::new(),
            n_singular: 1,
        }
    }

    pub fn occurrences(&self, sing: u32) -> Vec<Occurrence> {
        let mut out = Vec::new();
        for (ci, c) in self.components.iter().enumerate() {
            for (ii, &m) in c.interior_marks.iter().enumerate() {
                if m == sing {
                    out.push(Occurrence::Interior { comp: ci as u32, idx: ii as u32 });
                }
            }
            for (bi, cyc) in c.boundaries.iter().enumerate() {
                for (pi, &m) in cyc.iter().enumerate() {
                    if m == sing {
                        out.push(Occurrence::Boundary {
                            comp: ci as u32,
                            circle: bi as u32,
                            pos: pi as u32,
                        });
                    }
                }
            }
        }
        for (si, &(a, b)) in self.segments.iter().enumerate() {
            if a == sing {
                out.push(Occurrence::SegmentEnd { seg: si as u32, end: 0 });
            }
            if b == sing {
                out.push(Occurrence::SegmentEnd { seg: si as u32, end: 1 });
            }
        }
        out
    }

    /// Size per the topological data structure: segments + components +
    /// total genus + total boundary circles + all occurrences of singular
    /// points (surface marks and segment endpoints).
    pub fn size(&self) -> usize {
        let comp_terms: usize = self
            .components
            .iter()
            .map(|c| 1 + c.genus as usize + c.boundaries.len() + c.mark_occurrences())
            .sum();
        comp_terms + self.segments.len() + 2 * self.segments.len()
    }

    pub fn total_genus(&self) -> u32 {
        self.components.iter().map(|c| c.genus).sum()
    }

    pub fn validate(&self) -> Result<(), String> {
        let mut seen: BTreeSet<u32> = BTreeSet::new();
        for (ci, c) in self.components.iter().enumerate() {
            if c.orientable && c.genus % 2 != 0 {
                return Err(format!("component {ci}: orientable with odd genus"));
            }
            if !c.orientable && c.genus == 0 {
                return Err(format!("component {ci}: non-orientable with genus 0"));
            }
            for &m in c.interior_marks.iter().chain(c.boundaries.iter().flatten()) {
                if m >= self.n_singular {
                    return Err(format!("component {ci}: singular id {m} out of range"));
                }
                seen.insert(m);
            }
        }
        for (si, &(a, b)) in self.segments.iter().enumerate() {
            for m in [a, b] {
                if m >= self.n_singular {
                    return Err(format!("segment {si}: singular id {m} out of range"));
                }
                seen.insert(m);
            }
        }
        for s in 0..self.n_singular {
            if !seen.contains(&s) {
                return Err(format!("singular id {s} never occurs"));
            }
            let occ = self.occurrences(s);
            let has_seg = occ.iter().any(|o| matches!(o, Occurrence::SegmentEnd { .. }));
            if occ.len() < 2 && !has_seg {
                return Err(format!("singular id {s} has a single non-segment occurrence"));
            }
        }
        Ok(())
    }

    /// Renumber singular ids to 0..k in order of first occurrence, dropping
    /// unused ids. Also sorts interior mark lists.
    pub fn compact_singulars(&mut self) {
        let mut map: alloc::collections::BTreeMap<u32, u32> = alloc::collections::BTreeMap::new();
        let mut next = 0u32;
        {
            let mut remap = |m: &mut u32| {
                let id = *map.entry(*m).or_insert_with(|| {
                    let v = next;
                    next += 1;
                    v
                });
                *m = id;
            };
            for c in &mut self.components {
                for m in &mut c.interior_marks {
                    remap(m);
                }
                for cyc in &mut c.boundaries {
                    for m in cyc.iter_mut() {
                        remap(m);
                    }
                }
            }
            for s in &mut self.segments {
                remap(&mut s.0);
                remap(&mut s.1);
            }
        }
        self.n_singular = next;
        for c in &mut self.components {
            c.interior_marks.sort_unstable();
        }
    }
}

/// The over-surface of a complex: replace segments with cylinders and each
/// singular point with a sphere carrying one boundary circle per link
/// component. Only the homeomorphism classes of the result matter; marks
/// are discarded. Any graph embeddable on the complex embeds on a component
/// of the result, so its total genus is a rejection bound.
pub fn oversurface(t: &TopoComplex) -> Vec<SurfaceComponent> {
    #[derive(Clone, Copy)]
    struct Piece {
        chi: i64,
        circles: i64,
        orientable: bool,
    }
    let nc = t.components.len();
    let ns = t.segments.len();
    let mut pieces: Vec<Piece> = Vec::new();
    for c in &t.components {
        pieces.push(Piece {
            chi: c.euler_characteristic(),
            circles: c.boundaries.len() as i64,
            orientable: c.orientable,
        });
    }
    for _ in 0..ns {
        pieces.push(Piece { chi: 0, circles: 2, orientable: true });
    }
    for s in 0..t.n_singular {
        let k = t.occurrences(s).len() as i64;
        pieces.push(Piece { chi: 2 - k, circles: k, orientable: true });
    }
    let seg_piece = |si: u32| nc + si as usize;
    let sing_piece = |s: u32| nc + ns + s as usize;

    fn find(parent: &mut Vec<usize>, x: usize) -> usize {
        if parent[x] != x {
            let r = find(parent, parent[x]);
            parent[x] = r;
        }
        parent[x]
    }
    let mut parent: Vec<usize> = (0..pieces.len()).collect();
    let mut chi_delta = vec![0i64; pieces.len()];
    let mut circle_delta = vec![0i64; pieces.len()];
    let glue = |parent: &mut Vec<usize>,
                    chi_delta: &mut Vec<i64>,
                    circle_delta: &mut Vec<i64>,
                    a: usize,
                    b: usize,
                    dchi: i64,
                    dcirc: i64| {
        let ra = find(parent, a);
        let rb = find(parent, b);
        if ra != rb {
            parent[rb] = ra;
            chi_delta[ra] += chi_delta[rb];
            circle_delta[ra] += circle_delta[rb];
        }
        let r = find(parent, a);
        chi_delta[r] += dchi;
        circle_delta[r] += dcirc;
    };
    for s in 0..t.n_singular {
        for occ in t.occurrences(s) {
            match occ {
                // Puncture the component (chi -1, +1 circle) and glue the
                // fresh circle to a sphere circle (circles -2).
                Occurrence::Interior { comp, .. } => glue(
                    &mut parent,
                    &mut chi_delta,
                    &mut circle_delta,
                    comp as usize,
                    sing_piece(s),
                    -1,
                    -1,
                ),
                // Arc gluing: chi -1, two circles merge into one.
                Occurrence::Boundary { comp, .. } => glue(
                    &mut parent,
                    &mut chi_delta,
                    &mut circle_delta,
                    comp as usize,
                    sing_piece(s),
                    -1,
                    -1,
                ),
                // Full circle gluing: chi unchanged, two circles vanish.
                Occurrence::SegmentEnd { seg, .. } => glue(
                    &mut parent,
                    &mut chi_delta,
                    &mut circle_delta,
                    seg_piece(seg),
                    sing_piece(s),
                    0,
                    -2,
                ),
            }
        }
    }
    let mut groups: alloc::collections::BTreeMap<usize, Vec<usize>> =
        alloc::collections::BTreeMap::new();
    for i in 0..pieces.len() {
        let r = find(&mut parent, i);
        groups.entry(r).or_default().push(i);
    }
    let mut out = Vec::new();
    for (root, members) in groups {
        let chi: i64 = members.iter().map(|&i| pieces[i].chi).sum::<i64>() + chi_delta[root];
        let circles: i64 =
            members.iter().map(|&i| pieces[i].circles).sum::<i64>() + circle_delta[root];
        let orientable = members.iter().all(|&i| pieces[i].orientable);
        let genus = 2 - circles - chi;
        assert!(genus >= 0 && circles >= 0, "oversurface accounting went negative");
        assert!(!orientable || genus % 2 == 0, "orientable oversurface with odd genus");
        out.push(SurfaceComponent {
            orientable,
            genus: genus as u32,
            interior_marks: Vec::new(),
            boundaries: vec![Vec::new(); circles as usize],
        });
    }
    out.sort();
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sizes() {
        assert_eq!(TopoComplex::sphere().size(), 1);
        assert_eq!(TopoComplex::torus().size(), 3);
        assert_eq!(TopoComplex::lone_segment().size(), 3);
        assert_eq!(TopoComplex::disk().size(), 2);
        assert_eq!(TopoComplex::two_pinched_spheres().size(), 4);
    }

    #[test]
    fn validate_catches_bad_data() {
        let mut t = TopoComplex::sphere();
        t.components[0].genus = 1;
        assert!(t.validate().is_err());
        let mut t = TopoComplex::sphere_with_segment();
        t.segments.clear();
        // marks 0 and 1 now occur once each with no segment
        assert!(t.validate().is_err());
        assert!(TopoComplex::lone_segment().validate().is_ok());
        assert!(TopoComplex::two_pinched_spheres().validate().is_ok());
    }

    #[test]
    fn oversurface_examples() {
        let o = oversurface(&TopoComplex::torus());
        assert_eq!(o, vec![SurfaceComponent::torus()]);
        let o = oversurface(&TopoComplex::lone_segment());
        assert_eq!(o, vec![SurfaceComponent::sphere()]);
        let o = oversurface(&TopoComplex::two_pinched_spheres());
        assert_eq!(o, vec![SurfaceComponent::sphere()]);
        // A cylinder attached to a sphere at two points adds one handle.
        let t = TopoComplex::sphere_with_segment();
        let o = oversurface(&t);
        assert_eq!(o.len(), 1);
        assert_eq!(o[0].genus, 2);
        assert!(o[0].orientable);
    }

    #[test]
    fn oversurface_genus_bound_on_corpus() {
        for t in [
            TopoComplex::sphere(),
            TopoComplex::torus(),
            TopoComplex::projective_plane(),
            TopoComplex::klein_bottle(),
            TopoComplex::disk(),
            TopoComplex::moebius(),
            TopoComplex::lone_segment(),
            TopoComplex::sphere_with_segment(),
            TopoComplex::two_pinched_spheres(),
        ] {
            let total: usize = oversurface(&t).iter().map(|c| c.genus as usize).sum();
            assert!(total <= 10 * t.size(), "bound failed for {t:?}");
        }
    }
}
