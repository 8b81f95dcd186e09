//! Map isomorphism by explicit backtracking search, independent of the
//! canonical-form minimization. Both operate on the same typed-graph
//! encoding, so they decide the same equivalence; the algorithms share no
//! search logic, which keeps the cross-check in the test suite meaningful.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use crate::budget::{Budget, CapError};

use super::canon::{color_graph, presentations, ColorGraph};
use super::CombMap;

pub fn map_isomorphic(a: &CombMap, b: &CombMap) -> bool {
    map_isomorphic_capped(a, b, &Budget::unlimited()).expect("unlimited budget")
}

pub fn map_isomorphic_capped(a: &CombMap, b: &CombMap, budget: &Budget) -> Result<bool, CapError> {
    let ga = color_graph(a);
    for p in presentations(b) {
        let gb = color_graph(&p);
        if graph_isomorphic(&ga, &gb, budget)? {
            return Ok(true);
        }
    }
    Ok(false)
}

/// Typed colored digraph isomorphism via joint refinement + backtracking.
fn graph_isomorphic(a: &ColorGraph, b: &ColorGraph, budget: &Budget) -> Result<bool, CapError> {
    let na = a.colors.len();
    let nb = b.colors.len();
    if na != nb {
        return Ok(false);
    }
    // Joint refinement over the disjoint union.
    let mut union = ColorGraph { colors: Vec::new(), adj: Vec::new() };
    union.colors.extend(a.colors.iter().cloned());
    union.colors.extend(b.colors.iter().cloned());
    union.adj.extend(a.adj.iter().cloned());
    union
        .adj
        .extend(b.adj.iter().map(|adj| adj.iter().map(|&(t, w)| (t, w + na as u32)).collect::<Vec<_>>()));
    let class = joint_refine(&union);
    // Class populations must agree on both sides.
    let mut pop_a: BTreeMap<u32, Vec<u32>> = BTreeMap::new();
    let mut pop_b: BTreeMap<u32, Vec<u32>> = BTreeMap::new();
    for v in 0..na {
        pop_a.entry(class[v]).or_default().push(v as u32);
    }
    for v in 0..nb {
        pop_b.entry(class[na + v]).or_default().push(v as u32);
    }
    if pop_a.len() != pop_b.len()
        || pop_a.iter().any(|(c, vs)| pop_b.get(c).map(|w| w.len()) != Some(vs.len()))
    {
        return Ok(false);
    }
    // Backtracking: match a-nodes in order of ascending class size.
    let mut order: Vec<u32> = (0..na as u32).collect();
    order.sort_by_key(|&v| (pop_a[&class[v as usize]].len(), class[v as usize], v));
    let mut assign: Vec<Option<u32>> = vec![None; na];
    let mut used = vec![false; nb];
    backtrack(a, b, &class, na, &order, 0, &mut assign, &mut used, budget)
}

fn joint_refine(g: &ColorGraph) -> Vec<u32> {
    // Same refinement loop as the canonizer, seeded by color keys.
    let mut keys: Vec<&Vec<u8>> = g.colors.iter().collect();
    keys.sort();
    keys.dedup();
    let index: BTreeMap<&Vec<u8>, u32> =
        keys.iter().enumerate().map(|(i, k)| (*k, i as u32)).collect();
    let mut class: Vec<u32> = g.colors.iter().map(|k| index[k]).collect();
    let n = g.colors.len();
    loop {
        let mut incoming: Vec<Vec<(u8, u32)>> = vec![Vec::new(); n];
        for (v, adj) in g.adj.iter().enumerate() {
            for &(ty, w) in adj {
                incoming[w as usize].push((ty, class[v]));
            }
        }
        let mut sigs: Vec<(u32, Vec<(u8, u32)>, Vec<(u8, u32)>)> = Vec::with_capacity(n);
        for v in 0..n {
            let mut out: Vec<(u8, u32)> =
                g.adj[v].iter().map(|&(ty, w)| (ty, class[w as usize])).collect();
            out.sort_unstable();
            let mut inc = core::mem::take(&mut incoming[v]);
            inc.sort_unstable();
            sigs.push((class[v], out, inc));
        }
        let mut sorted: Vec<&(u32, Vec<(u8, u32)>, Vec<(u8, u32)>)> = sigs.iter().collect();
        sorted.sort();
        sorted.dedup();
        let idx: BTreeMap<&(u32, Vec<(u8, u32)>, Vec<(u8, u32)>), u32> =
            sorted.iter().enumerate().map(|(i, s)| (*s, i as u32)).collect();
        let new_class: Vec<u32> = (0..n).map(|v| idx[&sigs[v]]).collect();
        if new_class == class {
            return class;
        }
        class = new_class;
    }
}

#[allow(clippy::too_many_arguments)]
fn backtrack(
    a: &ColorGraph,
    b: &ColorGraph,
    class: &[u32],
    na: usize,
    order: &[u32],
    at: usize,
    assign: &mut Vec<Option<u32>>,
    used: &mut Vec<bool>,
    budget: &Budget,
) -> Result<bool, CapError> {
    if at == order.len() {
        return Ok(true);
    }
    budget.charge("map_isomorphic", 1)?;
    let v = order[at] as usize;
    for w in 0..b.colors.len() {
        if used[w] || class[v] != class[na + w] {
            continue;
        }
        // Check adjacency against already-assigned nodes, both directions.
        let ok = {
            let mut ok = a.adj[v].len() == b.adj[w].len();
            if ok {
                for &(ty, x) in &a.adj[v] {
                    if let Some(y) = assign[x as usize] {
                        if !b.adj[w].contains(&(ty, y)) {
                            ok = false;
                            break;
                        }
                    }
                }
            }
            if ok {
                for u in 0..na {
                    if let Some(y) = assign[u] {
                        for &(ty, x) in &a.adj[u] {
                            if x as usize == v && !b.adj[y as usize].contains(&(ty, w as u32)) {
                                ok = false;
                                break;
                            }
                        }
                    }
                    if !ok {
                        break;
                    }
                }
            }
            ok
        };
        if !ok {
            continue;
        }
        assign[v] = Some(w as u32);
        used[w] = true;
        if backtrack(a, b, class, na, order, at + 1, assign, used, budget)? {
            return Ok(true);
        }
        assign[v] = None;
        used[w] = false;
    }
    Ok(false)
}
