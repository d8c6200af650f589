//! Haar graphs `H(Z_n, S)` and Cayley digraphs `Cay(Z_n, S)`, plus the
//! permutations `c`, `d`, `φ_{r,s,t}`, `ψ_{r,s,t}` of the 2n points.
//!
//! Point encoding: `x⁺ = x` for `x ∈ [0, n)`, `x⁻ = n + x`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::perm::Perm;
use crate::zn::{self, ZnSet};

pub const ENCODING: &str = "plus=0..n-1,minus=n..2n-1";

#[inline]
pub fn plus(x: u32) -> u32 {
    x
}

#[inline]
pub fn minus(x: u32, n: u32) -> u32 {
    n + x
}

/// Splits a point into `(x, is_minus)`.
#[inline]
pub fn decode(p: u32, n: u32) -> (u32, bool) {
    if p < n {
        (p, false)
    } else {
        (p - n, true)
    }
}

/// Plain adjacency lists; undirected graphs store each edge in both lists.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Digraph {
    out: Vec<Vec<u32>>,
    inn: Vec<Vec<u32>>,
    symmetric: bool,
}

impl Digraph {
    pub fn from_arcs(order: usize, arcs: impl IntoIterator<Item = (u32, u32)>) -> Digraph {
        let mut out = vec![Vec::new(); order];
        let mut inn = vec![Vec::new(); order];
        for (a, b) in arcs {
            out[a as usize].push(b);
            inn[b as usize].push(a);
        }
        for l in out.iter_mut().chain(inn.iter_mut()) {
            l.sort_unstable();
            l.dedup();
        }
        let symmetric = out == inn;
        Digraph { out, inn, symmetric }
    }

    pub fn order(&self) -> usize {
        self.out.len()
    }

    pub fn out_neighbors(&self, v: u32) -> &[u32] {
        &self.out[v as usize]
    }

    pub fn in_neighbors(&self, v: u32) -> &[u32] {
        &self.inn[v as usize]
    }

    pub fn is_symmetric(&self) -> bool {
        self.symmetric
    }

    pub fn has_arc(&self, a: u32, b: u32) -> bool {
        self.out[a as usize].binary_search(&b).is_ok()
    }

    pub fn arc_count(&self) -> usize {
        self.out.iter().map(Vec::len).sum()
    }

    /// Whether `f` maps the arcs of `self` onto the arcs of `other`.
    pub fn maps_onto(&self, f: &Perm, other: &Digraph) -> bool {
        f.degree() == self.order()
            && self.order() == other.order()
            && self.arc_count() == other.arc_count()
            && (0..self.order() as u32).all(|a| {
                self.out[a as usize]
                    .iter()
                    .all(|&b| other.has_arc(f.apply(a), f.apply(b)))
            })
    }

    pub fn is_automorphism(&self, f: &Perm) -> bool {
        self.maps_onto(f, self)
    }

    /// Connectivity of the underlying undirected graph.
    pub fn is_weakly_connected(&self) -> bool {
        let n = self.order();
        if n == 0 {
            return true;
        }
        let mut seen = vec![false; n];
        let mut stack = vec![0u32];
        seen[0] = true;
        let mut count = 1;
        while let Some(v) = stack.pop() {
            for &w in self.out[v as usize].iter().chain(&self.inn[v as usize]) {
                if !seen[w as usize] {
                    seen[w as usize] = true;
                    count += 1;
                    stack.push(w);
                }
            }
        }
        count == n
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HaarGraph {
    connection: ZnSet,
    graph: Digraph,
}

pub fn build_haar(s: &ZnSet) -> Result<HaarGraph> {
    if s.is_empty() {
        return Err(Error::EmptySet);
    }
    let n = s.modulus();
    if n < 2 {
        return Err(Error::InvalidModulus(n));
    }
    let arcs = (0..n).flat_map(|x| {
        s.elems().iter().flat_map(move |&e| {
            let y = minus(zn::add_mod(x, e, n), n);
            [(x, y), (y, x)]
        })
    });
    Ok(HaarGraph {
        connection: s.clone(),
        graph: Digraph::from_arcs(2 * n as usize, arcs),
    })
}

impl HaarGraph {
    pub fn modulus(&self) -> u32 {
        self.connection.modulus()
    }

    pub fn connection(&self) -> &ZnSet {
        &self.connection
    }

    pub fn graph(&self) -> &Digraph {
        &self.graph
    }

    pub fn vertex_count(&self) -> usize {
        self.graph.order()
    }

    pub fn edge_count(&self) -> usize {
        self.graph.arc_count() / 2
    }

    pub fn neighbors(&self, p: u32) -> &[u32] {
        self.graph.out_neighbors(p)
    }

    pub fn has_edge(&self, p: u32, q: u32) -> bool {
        self.graph.has_arc(p, q)
    }

    /// Edges `(x⁺, y⁻)` sorted lexicographically as point pairs.
    pub fn edges(&self) -> Vec<(u32, u32)> {
        let n = self.modulus();
        (0..n)
            .flat_map(|x| self.neighbors(x).iter().map(move |&y| (x, y)))
            .collect()
    }

    pub fn is_connected(&self) -> bool {
        self.graph.is_weakly_connected()
    }

    pub fn is_automorphism(&self, f: &Perm) -> bool {
        self.graph.is_automorphism(f)
    }

    pub fn maps_onto(&self, f: &Perm, other: &HaarGraph) -> bool {
        self.graph.maps_onto(f, &other.graph)
    }

    /// The image graph under `f` is again `H(Z_n, T)` for some `T`: that is,
    /// `c` is an automorphism of the image and the color classes are kept
    /// or swapped. Returns `T`.
    pub fn image_connection(&self, f: &Perm) -> Option<ZnSet> {
        let n = self.modulus();
        let image = Digraph::from_arcs(
            self.vertex_count(),
            (0..self.vertex_count() as u32)
                .flat_map(|a| self.neighbors(a).iter().map(move |&b| (a, b)))
                .map(|(a, b)| (f.apply(a), f.apply(b))),
        );
        if !image.is_automorphism(&canonical_c(n)) {
            return None;
        }
        if (0..n).any(|x| image.out_neighbors(x).iter().any(|&y| y < n)) {
            return None;
        }
        let t = image.out_neighbors(0).iter().map(|&y| y - n);
        ZnSet::new(n, t).ok()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CayleyDigraph {
    connection: ZnSet,
    graph: Digraph,
}

pub fn build_cayley(s: &ZnSet) -> CayleyDigraph {
    let n = s.modulus();
    let arcs = (0..n).flat_map(|x| s.elems().iter().map(move |&e| (x, zn::add_mod(x, e, n))));
    CayleyDigraph {
        connection: s.clone(),
        graph: Digraph::from_arcs(n as usize, arcs),
    }
}

impl CayleyDigraph {
    pub fn modulus(&self) -> u32 {
        self.connection.modulus()
    }

    pub fn connection(&self) -> &ZnSet {
        &self.connection
    }

    pub fn graph(&self) -> &Digraph {
        &self.graph
    }

    pub fn arc_count(&self) -> usize {
        self.graph.arc_count()
    }

    pub fn out_neighbors(&self, x: u32) -> &[u32] {
        self.graph.out_neighbors(x)
    }

    pub fn is_connected(&self) -> bool {
        self.graph.is_weakly_connected()
    }
}

/// `x ↦ x + 1` on `Z_n`.
pub fn translation(n: u32) -> Perm {
    Perm::from_images_unchecked((0..n).map(|x| (x + 1) % n).collect())
}

/// `c: x^ε ↦ (x+1)^ε`.
pub fn canonical_c(n: u32) -> Perm {
    Perm::from_images_unchecked(
        (0..2 * n)
            .map(|p| {
                let (x, neg) = decode(p, n);
                (x + 1) % n + if neg { n } else { 0 }
            })
            .collect(),
    )
}

/// `d: x⁺ ↦ (n−x)⁻, x⁻ ↦ (n−x)⁺`.
pub fn canonical_d(n: u32) -> Perm {
    Perm::from_images_unchecked(
        (0..2 * n)
            .map(|p| {
                let (x, neg) = decode(p, n);
                let y = (n - x) % n;
                if neg {
                    y
                } else {
                    y + n
                }
            })
            .collect(),
    )
}

fn affine_perm(n: u32, r: u32, s: u32, t: u32, swap: bool) -> Result<Perm> {
    zn::check_modulus(n)?;
    if !zn::is_unit(r % n, n) {
        return Err(Error::NotAUnit { a: r, n });
    }
    let (r, s, t) = (r % n, s % n, t % n);
    Ok(Perm::from_images_unchecked(
        (0..2 * n)
            .map(|p| {
                let (x, neg) = decode(p, n);
                let shift = if neg { t } else { s };
                let y = zn::add_mod(zn::mul_mod(r, x, n), shift, n);
                if neg != swap {
                    y + n
                } else {
                    y
                }
            })
            .collect(),
    ))
}

/// `φ_{r,s,t}: x⁺ ↦ (rx+s)⁺, x⁻ ↦ (rx+t)⁻`.
pub fn phi(n: u32, r: u32, s: u32, t: u32) -> Result<Perm> {
    affine_perm(n, r, s, t, false)
}

/// `ψ_{r,s,t}: x⁺ ↦ (rx+s)⁻, x⁻ ↦ (rx+t)⁺`.
pub fn psi(n: u32, r: u32, s: u32, t: u32) -> Result<Perm> {
    affine_perm(n, r, s, t, true)
}

/// The isomorphism `H(Z_n, S) → H(Z_n, aS + b)` given by `φ_{a,0,b}`.
pub fn affine_isomorphism(n: u32, w: zn::AffineWitness) -> Result<Perm> {
    phi(n, w.a, 0, w.b)
}

#[derive(Clone, Debug, Serialize)]
pub struct GraphJson {
    pub kind: &'static str,
    pub modulus: u32,
    pub set: Vec<u32>,
    pub encoding: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub edges: Option<Vec<(u32, u32)>>,
}

impl HaarGraph {
    pub fn to_json(&self, emit_adjacency: bool) -> GraphJson {
        GraphJson {
            kind: "haar",
            modulus: self.modulus(),
            set: self.connection.elems().to_vec(),
            encoding: ENCODING,
            edges: emit_adjacency.then(|| self.edges()),
        }
    }
}

impl CayleyDigraph {
    pub fn to_json(&self, emit_adjacency: bool) -> GraphJson {
        let arcs = || {
            (0..self.modulus())
                .flat_map(|x| self.out_neighbors(x).iter().map(move |&y| (x, y)))
                .collect()
        };
        GraphJson {
            kind: "cayley",
            modulus: self.modulus(),
            set: self.connection.elems().to_vec(),
            encoding: "vertices=0..n-1",
            edges: emit_adjacency.then(arcs),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::zn::AffineWitness;

    fn set(n: u32, e: &[u32]) -> ZnSet {
        ZnSet::new(n, e.iter().copied()).unwrap()
    }

    #[test]
    fn small_haar_graphs() {
        let c4 = build_haar(&set(2, &[0, 1])).unwrap();
        assert_eq!(c4.vertex_count(), 4);
        assert_eq!(c4.edge_count(), 4);
        assert!(c4.is_connected());
        // 0+ - 0- - 1+ - 1- - 0+
        assert!(c4.has_edge(0, 2) && c4.has_edge(2, 1) && c4.has_edge(1, 3) && c4.has_edge(3, 0));

        let g = build_haar(&set(10, &[0, 1, 3, 4])).unwrap();
        assert_eq!((g.vertex_count(), g.edge_count()), (20, 40));
        assert!(g.is_connected());

        let k44 = build_haar(&set(4, &[0, 1, 2, 3])).unwrap();
        assert!((0..4).all(|x| (4..8).all(|y| k44.has_edge(x, y))));
        assert!(!build_haar(&set(4, &[0, 2])).unwrap().is_connected());
        assert!(build_haar(&set(8, &[0, 1, 2, 5])).unwrap().is_connected());
        assert_eq!(build_haar(&set(5, &[])), Err(Error::EmptySet));
    }

    #[test]
    fn edge_rule() {
        let g = build_haar(&set(10, &[0, 1, 3, 4])).unwrap();
        for x in 0..10 {
            for y in 0..10 {
                let diff = (y + 10 - x) % 10;
                assert_eq!(g.has_edge(x, minus(y, 10)), [0, 1, 3, 4].contains(&diff));
                assert!(!g.has_edge(x, y));
            }
        }
    }

    #[test]
    fn cayley_digraphs() {
        let cyc = build_cayley(&set(5, &[1]));
        assert_eq!(cyc.arc_count(), 5);
        assert!((0..5).all(|x| cyc.out_neighbors(x) == [(x + 1) % 5]));
        let und = build_cayley(&set(5, &[1, 4]));
        assert!(und.graph().is_symmetric());
        let two = build_cayley(&set(6, &[2, 3]));
        assert!((0..6).all(|x| two.out_neighbors(x).len() == 2));
        let looped = build_cayley(&set(3, &[0, 1]));
        assert!(looped.graph().has_arc(2, 2));
    }

    #[test]
    fn canonical_permutations() {
        assert_eq!(canonical_c(3).images(), &[1, 2, 0, 4, 5, 3]);
        assert_eq!(canonical_d(3).images(), &[3, 5, 4, 0, 2, 1]);
        assert_eq!(canonical_c(12).then(&canonical_d(12)).order(), 2);
        assert_eq!(canonical_c(12).order(), 12);
        assert_eq!(phi(4, 1, 1, 1).unwrap(), canonical_c(4));
        assert_eq!(psi(4, 3, 0, 0).unwrap(), canonical_d(4));
        let f = phi(8, 5, 0, 0).unwrap();
        assert_eq!(canonical_c(8).conjugate_by(&f), canonical_c(8).pow(5));
        assert!(phi(8, 2, 0, 0).is_err());
    }

    #[test]
    fn c_and_d_are_automorphisms() {
        for n in 2..14u32 {
            for mask in 1u32..(1 << n.min(6)) {
                let s = ZnSet::new(n, (0..n.min(6)).filter(|i| mask >> i & 1 == 1)).unwrap();
                let g = build_haar(&s).unwrap();
                assert!(g.is_automorphism(&canonical_c(n)));
                assert!(g.is_automorphism(&canonical_d(n)));
            }
        }
    }

    #[test]
    fn affine_witness_maps_edges() {
        let s = set(12, &[0, 3, 1, 7]);
        let g = build_haar(&s).unwrap();
        for a in zn::units(12).unwrap() {
            for b in 0..12 {
                let w = AffineWitness { a, b };
                let t = build_haar(&zn::apply_affine(&s, w).unwrap()).unwrap();
                let f = affine_isomorphism(12, w).unwrap();
                assert!(g.maps_onto(&f, &t));
                assert_eq!(g.image_connection(&f), Some(t.connection().clone()));
            }
        }
    }

    #[test]
    fn graph_json() {
        let g = build_haar(&set(2, &[0, 1])).unwrap();
        let j = serde_json::to_value(g.to_json(false)).unwrap();
        assert_eq!(
            j,
            serde_json::json!({"kind":"haar","modulus":2,"set":[0,1],"encoding":ENCODING})
        );
        let j = serde_json::to_value(g.to_json(true)).unwrap();
        assert_eq!(j["edges"], serde_json::json!([[0, 2], [0, 3], [1, 2], [1, 3]]));
    }
}
