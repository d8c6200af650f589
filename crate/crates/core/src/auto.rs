//! Search-based isomorphism and automorphism computation for small
//! digraphs: colour refinement (1-dimensional Weisfeiler–Leman) plus
//! individualization and backtracking. This is the oracle that the
//! arithmetic decision procedure is checked against.

use std::collections::hash_map::DefaultHasher;
use std::collections::HashMap;
use std::hash::{Hash, Hasher};

use crate::haar::{canonical_c, canonical_d, translation, CayleyDigraph, Digraph, HaarGraph};
use crate::perm::{Perm, PermGroup};

/// A refined vertex colouring. Colours are dense ranks `0..k`.
#[derive(Clone, Debug)]
struct Coloring {
    color: Vec<u32>,
    cells: u32,
}

impl Coloring {
    fn from_labels(labels: &[u32]) -> Coloring {
        let mut distinct: Vec<u32> = labels.to_vec();
        distinct.sort_unstable();
        distinct.dedup();
        let color = labels
            .iter()
            .map(|l| distinct.binary_search(l).unwrap() as u32)
            .collect();
        Coloring {
            color,
            cells: distinct.len() as u32,
        }
    }

    fn is_discrete(&self) -> bool {
        self.cells as usize == self.color.len()
    }

    fn individualize(&self, v: u32) -> Coloring {
        let mut color = self.color.clone();
        color[v as usize] = self.cells;
        Coloring {
            color,
            cells: self.cells + 1,
        }
    }

    /// Smallest non-singleton cell, lowest colour on ties.
    fn target_cell(&self) -> Option<u32> {
        let mut sizes = vec![0usize; self.cells as usize];
        for &c in &self.color {
            sizes[c as usize] += 1;
        }
        sizes
            .iter()
            .enumerate()
            .filter(|&(_, &s)| s > 1)
            .min_by_key(|&(c, &s)| (s, c))
            .map(|(c, _)| c as u32)
    }

    fn members(&self, cell: u32) -> Vec<u32> {
        (0..self.color.len() as u32)
            .filter(|&v| self.color[v as usize] == cell)
            .collect()
    }
}

/// Refines to the coarsest equitable colouring. Returns a hash trace of
/// every round; isomorphic inputs produce equal traces.
fn refine(g: &Digraph, start: &Coloring) -> (Coloring, u64) {
    let mut cur = start.clone();
    let mut trace = DefaultHasher::new();
    cur.cells.hash(&mut trace);
    let n = g.order();
    loop {
        let mut sigs: Vec<(Vec<u32>, u32)> = (0..n as u32)
            .map(|v| {
                let mut sig = Vec::with_capacity(2 + 2 * g.out_neighbors(v).len());
                sig.push(cur.color[v as usize]);
                let mut outs: Vec<u32> = g.out_neighbors(v).iter().map(|&w| cur.color[w as usize]).collect();
                outs.sort_unstable();
                sig.push(outs.len() as u32);
                sig.extend(outs);
                if !g.is_symmetric() {
                    let mut ins: Vec<u32> = g.in_neighbors(v).iter().map(|&w| cur.color[w as usize]).collect();
                    ins.sort_unstable();
                    sig.push(ins.len() as u32);
                    sig.extend(ins);
                }
                (sig, v)
            })
            .collect();
        sigs.sort_unstable();
        let mut color = vec![0u32; n];
        let mut rank = 0u32;
        for i in 0..sigs.len() {
            if i > 0 && sigs[i].0 != sigs[i - 1].0 {
                rank += 1;
                sigs[i - 1].0.hash(&mut trace);
                (i as u32).hash(&mut trace);
            }
            color[sigs[i].1 as usize] = rank;
        }
        if let Some(last) = sigs.last() {
            last.0.hash(&mut trace);
        }
        let cells = if n == 0 { 0 } else { rank + 1 };
        let done = cells == cur.cells;
        cur = Coloring { color, cells };
        if done {
            return (cur, trace.finish());
        }
    }
}

/// Vertices with identical out- and in-neighbourhoods; swapping two of
/// them is an automorphism.
fn twin_classes(g: &Digraph) -> Vec<u32> {
    let mut ids: HashMap<(&[u32], &[u32]), u32> = HashMap::new();
    (0..g.order() as u32)
        .map(|v| {
            let next = ids.len() as u32;
            *ids.entry((g.out_neighbors(v), g.in_neighbors(v))).or_insert(next)
        })
        .collect()
}

struct Search<'a> {
    g1: &'a Digraph,
    g2: &'a Digraph,
    twins2: Vec<u32>,
    nodes: u64,
}

impl Search<'_> {
    fn run(&mut self, c1: &Coloring, c2: &Coloring) -> Option<Perm> {
        self.nodes += 1;
        if c1.is_discrete() {
            let mut inv2 = vec![0u32; c2.color.len()];
            for (w, &c) in c2.color.iter().enumerate() {
                inv2[c as usize] = w as u32;
            }
            let f = Perm::from_images_unchecked(c1.color.iter().map(|&c| inv2[c as usize]).collect());
            return self.g1.maps_onto(&f, self.g2).then_some(f);
        }
        let cell = c1.target_cell().expect("non-discrete colouring has a target cell");
        let v = c1.members(cell)[0];
        let left = refine(self.g1, &c1.individualize(v));
        let mut tried: Vec<u32> = Vec::new();
        for w in c2.members(cell) {
            let twin = self.twins2[w as usize];
            if tried.contains(&twin) {
                continue;
            }
            tried.push(twin);
            let right = refine(self.g2, &c2.individualize(w));
            if right.1 != left.1 {
                continue;
            }
            if let Some(f) = self.run(&left.0, &right.0) {
                return Some(f);
            }
        }
        None
    }
}

/// Prepares both sides: equal label multisets, refined, with the given
/// pairs individualized in order.
fn aligned_start(
    g1: &Digraph,
    labels1: &[u32],
    g2: &Digraph,
    labels2: &[u32],
    fixed: &[(u32, u32)],
) -> Option<(Coloring, Coloring)> {
    if g1.order() != g2.order() || g1.arc_count() != g2.arc_count() {
        return None;
    }
    let mut s1 = labels1.to_vec();
    let mut s2 = labels2.to_vec();
    s1.sort_unstable();
    s2.sort_unstable();
    if s1 != s2 {
        return None;
    }
    let (mut c1, t1) = refine(g1, &Coloring::from_labels(labels1));
    let (mut c2, t2) = refine(g2, &Coloring::from_labels(labels2));
    if t1 != t2 {
        return None;
    }
    for &(a, b) in fixed {
        if c1.color[a as usize] != c2.color[b as usize] {
            return None;
        }
        let (n1, t1) = refine(g1, &c1.individualize(a));
        let (n2, t2) = refine(g2, &c2.individualize(b));
        if t1 != t2 {
            return None;
        }
        c1 = n1;
        c2 = n2;
    }
    Some((c1, c2))
}

/// An isomorphism `g1 → g2` respecting vertex labels and mapping each
/// `fixed.0` to `fixed.1`, or `None` after the search is exhausted.
pub fn find_isomorphism_labeled(
    g1: &Digraph,
    labels1: &[u32],
    g2: &Digraph,
    labels2: &[u32],
    fixed: &[(u32, u32)],
) -> Option<Perm> {
    let (c1, c2) = aligned_start(g1, labels1, g2, labels2, fixed)?;
    let mut search = Search {
        g1,
        g2,
        twins2: twin_classes(g2),
        nodes: 0,
    };
    let f = search.run(&c1, &c2)?;
    debug_assert!(g1.maps_onto(&f, g2));
    Some(f)
}

pub fn find_digraph_isomorphism(g1: &Digraph, g2: &Digraph) -> Option<Perm> {
    let l1 = vec![0; g1.order()];
    let l2 = vec![0; g2.order()];
    find_isomorphism_labeled(g1, &l1, g2, &l2, &[])
}

/// Haar graphs are vertex-transitive (`⟨c, d⟩` is regular), so the search
/// may send `0⁺` to `0⁺`.
pub fn find_isomorphism(g1: &HaarGraph, g2: &HaarGraph) -> Option<Perm> {
    if g1.vertex_count() != g2.vertex_count() {
        return None;
    }
    let l = vec![0; g1.vertex_count()];
    find_isomorphism_labeled(g1.graph(), &l, g2.graph(), &l, &[(0, 0)])
}

/// Cayley digraphs on `Z_n` are vertex-transitive through translations.
pub fn find_cayley_isomorphism(g1: &CayleyDigraph, g2: &CayleyDigraph) -> Option<Perm> {
    if g1.modulus() != g2.modulus() {
        return None;
    }
    let l = vec![0; g1.modulus() as usize];
    find_isomorphism_labeled(g1.graph(), &l, g2.graph(), &l, &[(0, 0)])
}

/// Generators of the label-preserving automorphism group. `known` are
/// automorphisms supplied by the caller (checked); if they are
/// transitive on the first target cell that level needs no search.
pub fn automorphism_generators(g: &Digraph, labels: &[u32], known: &[Perm]) -> Vec<Perm> {
    let n = g.order();
    for k in known {
        assert!(
            g.is_automorphism(k) && (0..n).all(|p| labels[p] == labels[k.apply(p as u32) as usize]),
            "supplied permutation is not an automorphism"
        );
    }
    // First path down the search tree.
    let (mut cur, _) = refine(g, &Coloring::from_labels(labels));
    let mut path: Vec<(Coloring, u32, Vec<u32>)> = Vec::new();
    while let Some(cell) = cur.target_cell() {
        let members = cur.members(cell);
        let v = members[0];
        let next = refine(g, &cur.individualize(v)).0;
        path.push((cur, v, members));
        cur = next;
    }

    let twins = twin_classes(g);
    let mut gens: Vec<(usize, Perm)> = known.iter().map(|k| (0usize, k.clone())).collect();
    for level in (0..path.len()).rev() {
        let (ref colors, v, ref members) = path[level];
        let mut uf = crate::perm::UnionFind::new(n);
        for (_, f) in gens.iter().filter(|(l, _)| *l >= level) {
            for p in 0..n as u32 {
                uf.union(p, f.apply(p));
            }
        }
        for &w in members {
            if uf.find(w) == uf.find(v) {
                continue;
            }
            let f = if twins[w as usize] == twins[v as usize] {
                Some(Perm::from_images_unchecked(
                    (0..n as u32)
                        .map(|p| {
                            if p == v {
                                w
                            } else if p == w {
                                v
                            } else {
                                p
                            }
                        })
                        .collect(),
                ))
            } else {
                let left = refine(g, &colors.individualize(v));
                let right = refine(g, &colors.individualize(w));
                if left.1 != right.1 {
                    None
                } else {
                    let mut search = Search {
                        g1: g,
                        g2: g,
                        twins2: twins.clone(),
                        nodes: 0,
                    };
                    search.run(&left.0, &right.0)
                }
            };
            if let Some(f) = f {
                debug_assert!(g.is_automorphism(&f));
                for p in 0..n as u32 {
                    uf.union(p, f.apply(p));
                }
                gens.push((level, f));
            }
        }
    }
    gens.into_iter().map(|(_, f)| f).collect()
}

/// `Aut(H(Z_n, S))`, colour-swapping automorphisms included.
pub fn automorphism_group(g: &HaarGraph) -> PermGroup {
    let n = g.modulus();
    let known = [canonical_c(n), canonical_d(n)];
    let labels = vec![0; g.vertex_count()];
    let gens = automorphism_generators(g.graph(), &labels, &known);
    let group = PermGroup::new(g.vertex_count(), gens);
    assert!(group.contains(&known[0]) && group.contains(&known[1]));
    group
}

pub fn cayley_automorphism_group(g: &CayleyDigraph) -> PermGroup {
    let n = g.modulus();
    let labels = vec![0; n as usize];
    let gens = automorphism_generators(g.graph(), &labels, &[translation(n)]);
    PermGroup::with_base_order(n as usize, gens, (0..n).collect())
}

/// One orbit on edges under the automorphism group.
pub fn is_edge_transitive(g: &HaarGraph) -> bool {
    is_edge_transitive_under(g, &automorphism_group(g))
}

pub fn is_edge_transitive_under(g: &HaarGraph, group: &PermGroup) -> bool {
    let edges = g.edges();
    if edges.is_empty() {
        return true;
    }
    let index: HashMap<(u32, u32), usize> = edges.iter().enumerate().map(|(i, &e)| (e, i)).collect();
    let key = |a: u32, b: u32| if a < b { (a, b) } else { (b, a) };
    let mut seen = vec![false; edges.len()];
    seen[0] = true;
    let mut stack = vec![0usize];
    let mut count = 1;
    while let Some(i) = stack.pop() {
        let (a, b) = edges[i];
        for f in group.generators() {
            let j = index[&key(f.apply(a), f.apply(b))];
            if !seen[j] {
                seen[j] = true;
                count += 1;
                stack.push(j);
            }
        }
    }
    count == edges.len()
}
