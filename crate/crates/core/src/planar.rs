//! Planarity testing with an embedding witness.
//!
//! Uses the incremental face-splitting algorithm of Demoucron, Malgrange and
//! Pertuiset on each biconnected block, after subdividing loops and parallel
//! edges away. Quadratic, which is plenty at the scales this crate handles;
//! the witness is a rotation system whose traced Euler characteristic is 2
//! on every connected component.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec;
use alloc::vec::Vec;

use crate::graph::Graph;
use crate::rotation::{dart_head, dart_tail, RotationSystem};

/// Decide planarity; on success return a witness rotation system for `g`.
pub fn is_planar(g: &Graph) -> Option<RotationSystem> {
    // Subdivide so the working graph is simple: loops get two fresh
    // vertices, parallel edges one each. Work on that, then contract the
    // witness back to darts of `g`.
    let simple = g.subdivide_edges(2);
    let rot_simple = planar_simple(&simple)?;
    // Chain of edge e in `simple`: ids 3e, 3e+1, 3e+2; endpoints of 3e
    // start at g.edge(e).0 and 3e+2 ends at g.edge(e).1.
    let mut orders: Vec<Vec<u32>> = vec![Vec::new(); g.n_vertices()];
    for v in 0..g.n_vertices() as u32 {
        for &d in &rot_simple.orders[v as usize] {
            let se = d / 2;
            let orig = se / 3;
            let pos = se % 3;
            // At an original vertex only chain-end darts appear.
            let nd = if pos == 0 { 2 * orig } else { 2 * orig + 1 };
            debug_assert!(pos == 0 || pos == 2);
            debug_assert_eq!(dart_tail(g, nd), v);
            orders[v as usize].push(nd);
        }
    }
    let rs = RotationSystem::new(orders, g.n_edges());
    debug_assert!(rs.validate(g));
    debug_assert!(rs.component_genera(g).iter().all(|&(gen, orient)| gen == 0 && orient));
    Some(rs)
}

/// Convenience: planarity as a bare boolean.
pub fn planar(g: &Graph) -> bool {
    is_planar(g).is_some()
}

fn planar_simple(g: &Graph) -> Option<RotationSystem> {
    let mut orders: Vec<Vec<u32>> = vec![Vec::new(); g.n_vertices()];
    for block in biconnected_blocks(g) {
        let rot = embed_block(g, &block)?;
        for (v, mut ds) in rot {
            orders[v as usize].append(&mut ds);
        }
    }
    let rs = RotationSystem::new(orders, g.n_edges());
    debug_assert!(rs.validate(g));
    Some(rs)
}

/// Edge sets of the biconnected blocks (bridges are singleton blocks).
fn biconnected_blocks(g: &Graph) -> Vec<Vec<u32>> {
    let n = g.n_vertices();
    let mut incident: Vec<Vec<u32>> = vec![Vec::new(); n];
    for e in 0..g.n_edges() as u32 {
        let (u, v) = g.edge(e);
        incident[u as usize].push(e);
        if u != v {
            incident[v as usize].push(e);
        }
    }
    let mut disc = vec![0usize; n];
    let mut low = vec![0usize; n];
    let mut visited = vec![false; n];
    let mut timer = 1usize;
    let mut stack: Vec<u32> = Vec::new(); // edge stack
    let mut blocks = Vec::new();
    // Iterative DFS.
    for start in 0..n as u32 {
        if visited[start as usize] {
            continue;
        }
        let mut call: Vec<(u32, Option<u32>, usize)> = vec![(start, None, 0)];
        visited[start as usize] = true;
        disc[start as usize] = timer;
        low[start as usize] = timer;
        timer += 1;
        while let Some(&mut (v, via, ref mut idx)) = call.last_mut() {
            if *idx < incident[v as usize].len() {
                let e = incident[v as usize][*idx];
                *idx += 1;
                let (a, b) = g.edge(e);
                if a == b {
                    continue; // loops are subdivided away before this runs
                }
                let w = if a == v { b } else { a };
                if Some(e) == via {
                    continue;
                }
                if !visited[w as usize] {
                    stack.push(e);
                    visited[w as usize] = true;
                    disc[w as usize] = timer;
                    low[w as usize] = timer;
                    timer += 1;
                    call.push((w, Some(e), 0));
                } else if disc[w as usize] < disc[v as usize] {
                    stack.push(e);
                    low[v as usize] = low[v as usize].min(disc[w as usize]);
                }
            } else {
                call.pop();
                if let Some(&mut (p, _, _)) = call.last_mut() {
                    low[p as usize] = low[p as usize].min(low[v as usize]);
                    if low[v as usize] >= disc[p as usize] {
                        // Pop a block ending with the tree edge p-v.
                        let mut block = Vec::new();
                        while let Some(&top) = stack.last() {
                            let (a, b) = g.edge(top);
                            let below = disc[a as usize].max(disc[b as usize]);
                            if below >= disc[v as usize] {
                                block.push(top);
                                stack.pop();
                            } else {
                                break;
                            }
                        }
                        if !block.is_empty() {
                            block.sort_unstable();
                            blocks.push(block);
                        }
                    }
                }
            }
        }
    }
    blocks
}

/// DMP face-splitting on one biconnected block. Returns rotations for the
/// block's darts only.
fn embed_block(g: &Graph, block: &[u32]) -> Option<BTreeMap<u32, Vec<u32>>> {
    if block.len() == 1 {
        let e = block[0];
        let (u, v) = g.edge(e);
        let mut rot = BTreeMap::new();
        rot.insert(u, vec![2 * e]);
        rot.entry(v).or_insert_with(Vec::new).push(2 * e + 1);
        return Some(rot);
    }
    let edge_set: BTreeSet<u32> = block.iter().copied().collect();
    // Quick Euler bound: simple biconnected planar block has e <= 3v - 6
    // for v >= 3.
    let verts: BTreeSet<u32> = block
        .iter()
        .flat_map(|&e| {
            let (u, v) = g.edge(e);
            [u, v]
        })
        .collect();
    if verts.len() >= 3 && block.len() > 3 * verts.len() - 6 {
        return None;
    }

    // Find a cycle through block edges.
    let cycle = find_cycle(g, &edge_set)?;
    let mut emb_edges: BTreeSet<u32> = BTreeSet::new();
    let mut emb_verts: BTreeSet<u32> = BTreeSet::new();
    let mut rot: BTreeMap<u32, Vec<u32>> = BTreeMap::new();
    // cycle: list of darts d0, d1, ... forming a closed walk.
    for &d in &cycle {
        emb_edges.insert(d / 2);
        emb_verts.insert(dart_tail(g, d));
        rot.entry(dart_tail(g, d)).or_default().push(d);
    }
    for &d in &cycle {
        rot.get_mut(&dart_head(g, d)).unwrap().push(d ^ 1);
    }
    // Two faces: the walk and its reverse.
    let mut faces: Vec<Vec<u32>> = Vec::new();
    faces.push(cycle.clone());
    faces.push(cycle.iter().rev().map(|&d| d ^ 1).collect());

    loop {
        if emb_edges.len() == block.len() {
            break;
        }
        // Bridges: single unembedded edges between embedded vertices, and
        // components of block-minus-embedded-vertices with their attachment
        // edges.
        let bridges = compute_bridges(g, &edge_set, &emb_edges, &emb_verts);
        debug_assert!(!bridges.is_empty());
        // Admissible faces per bridge.
        let mut chosen: Option<(usize, Vec<usize>)> = None;
        for (bi, br) in bridges.iter().enumerate() {
            let adm: Vec<usize> = faces
                .iter()
                .enumerate()
                .filter(|(_, f)| {
                    let fv: BTreeSet<u32> = f.iter().map(|&d| dart_tail(g, d)).collect();
                    br.attachments.iter().all(|a| fv.contains(a))
                })
                .map(|(i, _)| i)
                .collect();
            if adm.is_empty() {
                return None;
            }
            let better = match &chosen {
                None => true,
                Some((_, best)) => adm.len() < best.len(),
            };
            if better {
                chosen = Some((bi, adm));
            }
        }
        let (bi, adm) = chosen.unwrap();
        let br = &bridges[bi];
        let face_idx = adm[0];
        // Path between two attachments through the bridge.
        let path = bridge_path(g, br)?;
        split_face(
            g,
            &mut faces,
            face_idx,
            &path,
            &mut rot,
            &mut emb_edges,
            &mut emb_verts,
        );
    }
    Some(rot)
}

struct Bridge {
    attachments: Vec<u32>,
    /// Edges of the bridge (unembedded).
    edges: Vec<u32>,
}

fn compute_bridges(
    g: &Graph,
    block: &BTreeSet<u32>,
    emb_edges: &BTreeSet<u32>,
    emb_verts: &BTreeSet<u32>,
) -> Vec<Bridge> {
    let mut bridges = Vec::new();
    let mut assigned: BTreeSet<u32> = BTreeSet::new();
    for &e in block {
        if emb_edges.contains(&e) || assigned.contains(&e) {
            continue;
        }
        let (u, v) = g.edge(e);
        if emb_verts.contains(&u) && emb_verts.contains(&v) {
            assigned.insert(e);
            bridges.push(Bridge { attachments: vec![u.min(v), u.max(v)], edges: vec![e] });
        }
    }
    // Components of the non-embedded vertices.
    let mut comp: BTreeMap<u32, usize> = BTreeMap::new();
    let mut comps: Vec<(BTreeSet<u32>, BTreeSet<u32>)> = Vec::new(); // (verts, edges)
    for &e in block {
        if emb_edges.contains(&e) || assigned.contains(&e) {
            continue;
        }
        let (u, v) = g.edge(e);
        for x in [u, v] {
            if emb_verts.contains(&x) || comp.contains_key(&x) {
                continue;
            }
            // Flood from x across unembedded vertices.
            let id = comps.len();
            comps.push((BTreeSet::new(), BTreeSet::new()));
            let mut stack = vec![x];
            comp.insert(x, id);
            while let Some(y) = stack.pop() {
                comps[id].0.insert(y);
                for &f in block {
                    if emb_edges.contains(&f) {
                        continue;
                    }
                    let (a, b) = g.edge(f);
                    let other = if a == y {
                        b
                    } else if b == y {
                        a
                    } else {
                        continue;
                    };
                    comps[id].1.insert(f);
                    if !emb_verts.contains(&other) && !comp.contains_key(&other) {
                        comp.insert(other, id);
                        stack.push(other);
                    }
                }
            }
        }
    }
    for (verts, edges) in comps {
        let mut attachments: BTreeSet<u32> = BTreeSet::new();
        for &f in &edges {
            let (a, b) = g.edge(f);
            for x in [a, b] {
                if emb_verts.contains(&x) {
                    attachments.insert(x);
                }
            }
        }
        let _ = verts;
        bridges.push(Bridge {
            attachments: attachments.into_iter().collect(),
            edges: edges.into_iter().collect(),
        });
    }
    bridges
}

/// A path of darts through the bridge between its two smallest attachments.
fn bridge_path(g: &Graph, br: &Bridge) -> Option<Vec<u32>> {
    debug_assert!(br.attachments.len() >= 2, "bridge in a 2-connected block");
    let a = br.attachments[0];
    let b = br.attachments[1];
    if br.edges.len() == 1 {
        let e = br.edges[0];
        let (u, _) = g.edge(e);
        return Some(vec![if u == a { 2 * e } else { 2 * e + 1 }]);
    }
    // BFS from a to b over bridge edges, not passing through other
    // attachments except at the endpoints.
    let mut prev: BTreeMap<u32, u32> = BTreeMap::new(); // vertex -> dart arriving
    let mut queue = vec![a];
    let mut qi = 0;
    while qi < queue.len() {
        let v = queue[qi];
        qi += 1;
        if v == b {
            break;
        }
        if v != a && br.attachments.contains(&v) {
            continue;
        }
        for &e in &br.edges {
            let (x, y) = g.edge(e);
            let (d, w) = if x == v {
                (2 * e, y)
            } else if y == v {
                (2 * e + 1, x)
            } else {
                continue;
            };
            if w == a || prev.contains_key(&w) {
                continue;
            }
            prev.insert(w, d);
            queue.push(w);
        }
    }
    let mut path = Vec::new();
    let mut cur = b;
    while cur != a {
        let d = *prev.get(&cur)?;
        path.push(d);
        cur = dart_tail(g, d);
    }
    path.reverse();
    Some(path)
}

fn split_face(
    g: &Graph,
    faces: &mut Vec<Vec<u32>>,
    face_idx: usize,
    path: &[u32],
    rot: &mut BTreeMap<u32, Vec<u32>>,
    emb_edges: &mut BTreeSet<u32>,
    emb_verts: &mut BTreeSet<u32>,
) {
    let walk = faces[face_idx].clone();
    let a = dart_tail(g, path[0]);
    let b = dart_head(g, *path.last().unwrap());
    let i = walk.iter().position(|&d| dart_head(g, d) == a).expect("a on face");
    let j = walk.iter().position(|&d| dart_head(g, d) == b).expect("b on face");
    debug_assert_ne!(a, b);
    let m = walk.len();
    // Rotation updates.
    let p_first = path[0];
    let p_last_rev = *path.last().unwrap() ^ 1;
    insert_after(rot.entry(a).or_default(), walk[i] ^ 1, p_first);
    insert_after(rot.entry(b).or_default(), walk[j] ^ 1, p_last_rev);
    for w in 0..path.len() - 1 {
        let x = dart_head(g, path[w]);
        rot.insert(x, vec![path[w + 1], path[w] ^ 1]);
        emb_verts.insert(x);
    }
    for &d in path {
        emb_edges.insert(d / 2);
    }
    emb_verts.insert(a);
    emb_verts.insert(b);
    // New facial walks.
    let mut fa: Vec<u32> = Vec::new(); // a -> b along old face, back along path
    let mut k = (i + 1) % m;
    loop {
        fa.push(walk[k]);
        if k == j {
            break;
        }
        k = (k + 1) % m;
    }
    let pb: Vec<u32> = path.iter().rev().map(|&d| d ^ 1).collect();
    fa.extend(pb);
    let mut fb: Vec<u32> = Vec::new(); // b -> a along old face, forward along path
    k = (j + 1) % m;
    loop {
        fb.push(walk[k]);
        if k == i {
            break;
        }
        k = (k + 1) % m;
    }
    fb.extend(path.iter().copied());
    faces[face_idx] = fa;
    faces.push(fb);
}

fn insert_after(order: &mut Vec<u32>, after: u32, dart: u32) {
    let i = order.iter().position(|&x| x == after).expect("anchor dart present");
    order.insert(i + 1, dart);
}

fn find_cycle(g: &Graph, edges: &BTreeSet<u32>) -> Option<Vec<u32>> {
    // DFS keeping the current dart path; a back edge to a path vertex
    // closes a cycle.
    fn dfs(
        g: &Graph,
        edges: &BTreeSet<u32>,
        v: u32,
        came_by: Option<u32>,
        path_verts: &mut Vec<u32>,
        path_darts: &mut Vec<u32>,
        visited: &mut BTreeSet<u32>,
    ) -> Option<Vec<u32>> {
        for &e in edges {
            let (x, y) = g.edge(e);
            let (d, w) = if x == v {
                (2 * e, y)
            } else if y == v {
                (2 * e + 1, x)
            } else {
                continue;
            };
            if Some(d ^ 1) == came_by {
                continue;
            }
            if let Some(pos) = path_verts.iter().position(|&p| p == w) {
                let mut walk: Vec<u32> = path_darts[pos..].to_vec();
                walk.push(d);
                return Some(walk);
            }
            if visited.insert(w) {
                path_verts.push(w);
                path_darts.push(d);
                if let Some(c) = dfs(g, edges, w, Some(d), path_verts, path_darts, visited) {
                    return Some(c);
                }
                path_verts.pop();
                path_darts.pop();
            }
        }
        None
    }
    let start = g.edge(*edges.iter().next()?).0;
    let mut visited = BTreeSet::new();
    visited.insert(start);
    dfs(g, edges, start, None, &mut vec![start], &mut Vec::new(), &mut visited)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn k5() -> Graph {
        Graph::parse("a b\na c\na d\na e\nb c\nb d\nb e\nc d\nc e\nd e").unwrap()
    }

    fn k33() -> Graph {
        Graph::parse("a x\na y\na z\nb x\nb y\nb z\nc x\nc y\nc z").unwrap()
    }

    #[test]
    fn cycles_and_trees_are_planar() {
        let c4 = Graph::parse("a b\nb c\nc d\nd a").unwrap();
        assert!(planar(&c4));
        let tree = Graph::parse("a b\nb c\nb d\nd e").unwrap();
        assert!(planar(&tree));
    }

    #[test]
    fn k4_planar_with_witness() {
        let g = Graph::parse("a b\na c\na d\nb c\nb d\nc d").unwrap();
        let rs = is_planar(&g).expect("K4 is planar");
        for (genus, orient) in rs.component_genera(&g) {
            assert_eq!(genus, 0);
            assert!(orient);
        }
    }

    #[test]
    fn k5_and_k33_are_not_planar() {
        assert!(!planar(&k5()));
        assert!(!planar(&k33()));
    }

    #[test]
    fn loops_and_multi_edges() {
        let g = Graph::parse("a a\na b\na b\nb b").unwrap();
        let rs = is_planar(&g).expect("planar multigraph");
        assert!(rs.validate(&g));
        assert_eq!(rs.component_genera(&g)[0], (0, true));
    }

    #[test]
    fn disconnected_and_subdivided() {
        let mut text = alloc::string::String::new();
        text.push_str("a b\nb c\nc a\n");
        text.push_str("x y\ny z\nz x\n");
        let g = Graph::parse(&text).unwrap();
        assert!(planar(&g));
        let k5s = k5().subdivide_edges(1);
        assert!(!planar(&k5s));
        let petersen = Graph::parse(
            "o0 o1\no1 o2\no2 o3\no3 o4\no4 o0\no0 i0\no1 i1\no2 i2\no3 i3\no4 i4\ni0 i2\ni2 i4\ni4 i1\ni1 i3\ni3 i0",
        )
        .unwrap();
        assert!(!planar(&petersen));
    }
}
