//! Bicyclic subgroups of `Aut(H(Z_n, S))`, bicyclic bases, and BCI / CI
//! tests, both by definition (isomorphism sweeps) and through conjugacy
//! of bicyclic subgroups.

use std::collections::{BTreeSet, HashMap};
use std::ops::ControlFlow;

use rayon::prelude::*;
use serde::Serialize;

use crate::auto::{self, automorphism_group, find_cayley_isomorphism, find_isomorphism};
use crate::error::{Error, Result};
use crate::haar::{build_cayley, build_haar, canonical_c, HaarGraph};
use crate::perm::{Perm, PermGroup, UnionFind};
use crate::zn::{self, ZnSet};

/// All bicyclic subgroups of a Haar graph, grouped into conjugacy classes.
#[derive(Clone, Debug)]
pub struct BicyclicCatalog {
    modulus: u32,
    /// Canonical generator of each subgroup: its lexicographically least
    /// generating element.
    generators: Vec<Perm>,
    /// Subgroup indices per class; the class of `C = ⟨c⟩` comes first.
    classes: Vec<Vec<usize>>,
}

impl BicyclicCatalog {
    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    pub fn generators(&self) -> &[Perm] {
        &self.generators
    }

    pub fn group(&self, i: usize) -> PermGroup {
        PermGroup::new(2 * self.modulus as usize, vec![self.generators[i].clone()])
    }

    pub fn classes(&self) -> &[Vec<usize>] {
        &self.classes
    }

    pub fn class_count(&self) -> usize {
        self.classes.len()
    }
}

/// Whether `g` preserves the colour classes and has exactly two cycles,
/// `Z_n⁺` and `Z_n⁻`.
pub fn is_bicyclic_element(g: &Perm, n: u32) -> bool {
    g.apply(0) < n && g.cycle_len_at(0) == n as usize && g.cycle_len_at(n) == n as usize
}

/// Least generator of `⟨g⟩` together with all generators.
fn cyclic_generators(g: &Perm, n: u32) -> (Perm, Vec<Perm>) {
    let gens: Vec<Perm> = (1..=n)
        .filter(|&k| zn::gcd(k as u64, n as u64) == 1)
        .map(|k| g.pow(k as u64))
        .collect();
    let least = gens.iter().min().cloned().expect("k = 1 generates");
    (least, gens)
}

fn require_connected(g: &HaarGraph) -> Result<()> {
    if g.is_connected() {
        Ok(())
    } else {
        Err(Error::Disconnected {
            n: g.modulus(),
            set: g.connection().to_string(),
        })
    }
}

/// Bicyclic subgroups of `group`, which must consist of automorphisms of
/// a Haar graph on `2n` points and contain `c`.
pub fn bicyclic_subgroups_in(group: &PermGroup, n: u32, cap: u128) -> Result<BicyclicCatalog> {
    let mut owner: HashMap<Perm, usize> = HashMap::new();
    let mut keys: Vec<Perm> = Vec::new();
    let _ = group.try_for_each_element(cap, |g| {
        if !owner.contains_key(g) && is_bicyclic_element(g, n) {
            let (least, all) = cyclic_generators(g, n);
            let idx = keys.len();
            keys.push(least);
            for h in all {
                owner.insert(h, idx);
            }
        }
        ControlFlow::Continue(())
    })?;
    // deterministic numbering: by canonical generator
    let mut order: Vec<usize> = (0..keys.len()).collect();
    order.sort_by(|&a, &b| keys[a].cmp(&keys[b]));
    let mut renumber = vec![0; keys.len()];
    for (new, &old) in order.iter().enumerate() {
        renumber[old] = new;
    }
    let generators: Vec<Perm> = order.iter().map(|&i| keys[i].clone()).collect();
    let index_of = |p: &Perm| renumber[owner[p]];

    let mut uf = UnionFind::new(generators.len());
    for x in group.generators() {
        for (i, g) in generators.iter().enumerate() {
            uf.union(i as u32, index_of(&g.conjugate_by(x)) as u32);
        }
    }
    let c_class = uf.find(index_of(&canonical_c(n)) as u32);
    let mut by_root: Vec<(bool, u32, Vec<usize>)> = Vec::new();
    let labels = uf.labels();
    for (i, &root) in labels.iter().enumerate() {
        match by_root.iter_mut().find(|(_, r, _)| *r == root) {
            Some(entry) => entry.2.push(i),
            None => by_root.push((root != c_class, root, vec![i])),
        }
    }
    by_root.sort_by_key(|(not_c, _, members)| (*not_c, members[0]));
    Ok(BicyclicCatalog {
        modulus: n,
        generators,
        classes: by_root.into_iter().map(|(_, _, m)| m).collect(),
    })
}

pub fn bicyclic_subgroups(g: &HaarGraph, cap: u128) -> Result<BicyclicCatalog> {
    require_connected(g)?;
    bicyclic_subgroups_in(&automorphism_group(g), g.modulus(), cap)
}

/// The `ξ` with `ξ(h^k(0^ε)) = k^ε`, so that `ξ h ξ⁻¹ = c` and `ξ` fixes
/// `0⁺` and `0⁻`.
pub fn align_to_c(h: &Perm, n: u32) -> Perm {
    let mut images = vec![0u32; 2 * n as usize];
    for start in [0, n] {
        let mut p = start;
        for k in 0..n {
            images[p as usize] = start + k;
            p = h.apply(p);
        }
    }
    Perm::from_images_unchecked(images)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BaseEntry {
    pub xi: Perm,
    pub connection: ZnSet,
}

/// One `ξ` per conjugacy class, the identity first, with the image graph
/// `ξ(Γ) = H(Z_n, T)`.
pub fn bicyclic_base(g: &HaarGraph, cap: u128) -> Result<Vec<BaseEntry>> {
    let catalog = bicyclic_subgroups(g, cap)?;
    Ok(base_from_catalog(g, &catalog))
}

pub fn base_from_catalog(g: &HaarGraph, catalog: &BicyclicCatalog) -> Vec<BaseEntry> {
    let n = g.modulus();
    catalog
        .classes()
        .iter()
        .enumerate()
        .map(|(i, class)| {
            let xi = if i == 0 {
                Perm::identity(2 * n as usize)
            } else {
                align_to_c(&catalog.generators()[class[0]], n)
            };
            let connection = g
                .image_connection(&xi)
                .expect("aligned image of a bicyclic group is a Haar graph");
            BaseEntry { xi, connection }
        })
        .collect()
}

pub fn is_bci_structural(s: &ZnSet, cap: u128) -> Result<bool> {
    let g = build_haar(s)?;
    Ok(bicyclic_subgroups(&g, cap)?.class_count() == 1)
}

/// Canonical affine forms of every `T` with `H(Z_n, T) ≅ H(Z_n, S)`.
pub fn isomorphic_affine_classes(s: &ZnSet) -> Result<Vec<ZnSet>> {
    let g = build_haar(s)?;
    let classes = zn::affine_classes(s.modulus(), s.len());
    let hits: Vec<ZnSet> = classes
        .into_par_iter()
        .filter(|t| {
            let h = build_haar(t).expect("non-empty");
            find_isomorphism(&g, &h).is_some()
        })
        .collect();
    Ok(hits)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BciVerdict {
    pub bci: bool,
    /// Least canonical `T` isomorphic to `S` but not affinely equivalent.
    pub partner: Option<ZnSet>,
}

pub fn bci_definitional(s: &ZnSet) -> Result<BciVerdict> {
    let own = zn::canonical_affine_form(s).0;
    let partner = isomorphic_affine_classes(s)?.into_iter().find(|t| *t != own);
    Ok(BciVerdict {
        bci: partner.is_none(),
        partner,
    })
}

pub fn is_bci_definitional(s: &ZnSet) -> Result<bool> {
    Ok(bci_definitional(s)?.bci)
}

/// `Cay(Z_n, S) ≅ Cay(Z_n, T)` forces `T = aS`, checked over all `T`.
pub fn ci_subset_definitional(s: &ZnSet) -> bool {
    let g = build_cayley(s);
    let own = zn::canonical_multiplicative_form(s).0;
    zn::multiplicative_classes(s.modulus(), s.len())
        .into_par_iter()
        .filter(|t| *t != own)
        .all(|t| find_cayley_isomorphism(&g, &build_cayley(&t)).is_none())
}

/// Regular cyclic subgroups of `Aut(Cay(Z_n, S))` fall into one conjugacy
/// class.
pub fn ci_subset_structural(s: &ZnSet, cap: u128) -> Result<bool> {
    let n = s.modulus();
    let group = auto::cayley_automorphism_group(&build_cayley(s));
    let mut owner: HashMap<Perm, usize> = HashMap::new();
    let mut keys: Vec<Perm> = Vec::new();
    let _ = group.try_for_each_element(cap, |g| {
        if !owner.contains_key(g) && g.cycle_len_at(0) == n as usize {
            let (least, all) = cyclic_generators(g, n);
            for h in all {
                owner.insert(h, keys.len());
            }
            keys.push(least);
        }
        ControlFlow::Continue(())
    })?;
    let mut uf = UnionFind::new(keys.len());
    for x in group.generators() {
        for (i, g) in keys.iter().enumerate() {
            uf.union(i as u32, owner[&g.conjugate_by(x)] as u32);
        }
    }
    let roots: BTreeSet<u32> = uf.labels().into_iter().collect();
    Ok(roots.len() == 1)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Reduction {
    pub a: u32,
    pub bci: bool,
    pub ci_of_shift: bool,
}

impl Reduction {
    pub fn agrees(&self) -> bool {
        self.bci == self.ci_of_shift
    }
}

/// Least `a` whose `a⁻` is fixed by the whole stabilizer of `0⁺`.
pub fn stabilizer_partner(g: &HaarGraph) -> Result<Option<u32>> {
    require_connected(g)?;
    let n = g.modulus();
    let stab = automorphism_group(g).point_stabilizer(0);
    // |A_{0+}| = |A_{a-}| by vertex-transitivity, so containment suffices.
    Ok((0..n).find(|&a| stab.generators().iter().all(|f| f.apply(n + a) == n + a)))
}

/// When `A_{0⁺} = A_{a⁻}` for the least such `a`, compares BCI of `S` with
/// CI of `S − a`.
pub fn bci_to_ci_reduction(s: &ZnSet) -> Result<Option<Reduction>> {
    let g = build_haar(s)?;
    let Some(a) = stabilizer_partner(&g)? else {
        return Ok(None);
    };
    reduction_with(s, a)
}

/// Same comparison at a prescribed `a`; `None` unless `A_{0⁺}` fixes `a⁻`.
pub fn reduction_at(s: &ZnSet, a: u32) -> Result<Option<Reduction>> {
    let g = build_haar(s)?;
    require_connected(&g)?;
    let n = g.modulus();
    let stab = automorphism_group(&g).point_stabilizer(0);
    if !stab.generators().iter().all(|f| f.apply(n + a % n) == n + a % n) {
        return Ok(None);
    }
    reduction_with(s, a % n)
}

fn reduction_with(s: &ZnSet, a: u32) -> Result<Option<Reduction>> {
    Ok(Some(Reduction {
        a,
        bci: is_bci_definitional(s)?,
        ci_of_shift: ci_subset_definitional(&s.shifted(a)),
    }))
}

/// Regular subgroups of `group` isomorphic to the dihedral group of order
/// `2n` on `2n` points, each as its sorted element list.
pub fn regular_dihedral_subgroups(group: &PermGroup, n: u32, cap: u128) -> Result<Vec<Vec<Perm>>> {
    let elems = group.closure_elements(cap)?;
    let degree = 2 * n as usize;
    let rotations: Vec<&Perm> = elems
        .iter()
        .filter(|g| g.cycle_lengths().iter().all(|&l| l == n as usize))
        .collect();
    let flips: Vec<&Perm> = elems
        .iter()
        .filter(|g| g.cycle_lengths().iter().all(|&l| l == 2))
        .collect();
    let mut found: BTreeSet<Vec<Perm>> = BTreeSet::new();
    for x in &rotations {
        let xinv = x.inverse();
        for y in &flips {
            if x.conjugate_by(y) != xinv {
                continue;
            }
            let h = PermGroup::new(degree, vec![(*x).clone(), (*y).clone()]);
            if h.order() == 2 * n as u128 && h.orbit(0).len() == degree {
                let mut list = h.closure_elements(cap)?;
                list.sort();
                found.insert(list);
            }
        }
    }
    Ok(found.into_iter().collect())
}

/// Whether `g H g⁻¹ = K` for some `g ∈ group`.
pub fn subgroups_conjugate(group: &PermGroup, h: &[Perm], k: &[Perm], cap: u128) -> Result<bool> {
    let target: std::collections::HashSet<&Perm> = k.iter().collect();
    let mut hit = false;
    let _ = group.try_for_each_element(cap, |g| {
        if h.iter().all(|x| target.contains(&x.conjugate_by(g))) {
            hit = true;
            ControlFlow::Break(())
        } else {
            ControlFlow::Continue(())
        }
    })?;
    Ok(hit && h.len() == k.len())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::perm::DEFAULT_CAP;

    fn set(n: u32, e: &[u32]) -> ZnSet {
        ZnSet::new(n, e.iter().copied()).unwrap()
    }

    #[test]
    fn catalog_examples() {
        let one = bicyclic_subgroups(&build_haar(&set(12, &[0, 2, 1, 7])).unwrap(), DEFAULT_CAP).unwrap();
        assert_eq!(one.len(), 1);
        let two = bicyclic_subgroups(&build_haar(&set(8, &[0, 1, 2, 5])).unwrap(), DEFAULT_CAP).unwrap();
        assert_eq!((two.len(), two.class_count()), (2, 2));
        let ex = bicyclic_subgroups(&build_haar(&set(10, &[0, 1, 3, 4])).unwrap(), DEFAULT_CAP).unwrap();
        assert_eq!(ex.class_count(), 1);
    }

    #[test]
    fn base_examples() {
        let g = build_haar(&set(10, &[0, 1, 3, 4])).unwrap();
        let base = bicyclic_base(&g, DEFAULT_CAP).unwrap();
        assert_eq!(
            base,
            vec![BaseEntry {
                xi: Perm::identity(20),
                connection: set(10, &[0, 1, 3, 4])
            }]
        );

        let g = build_haar(&set(8, &[0, 1, 2, 5])).unwrap();
        let base = bicyclic_base(&g, DEFAULT_CAP).unwrap();
        assert_eq!(base.len(), 2);
        let t = &base[1].connection;
        assert!(zn::affinely_equivalent(t, &set(8, &[0, 6, 1, 5])).unwrap().is_some());
        assert!(g.maps_onto(&base[1].xi, &build_haar(t).unwrap()));
        assert_eq!((base[1].xi.apply(0), base[1].xi.apply(8)), (0, 8));
    }

    #[test]
    fn bci_examples() {
        assert!(is_bci_definitional(&set(10, &[0, 1, 3, 4])).unwrap());
        assert!(is_bci_structural(&set(10, &[0, 1, 3, 4]), DEFAULT_CAP).unwrap());
        let v = bci_definitional(&set(8, &[0, 1, 2, 5])).unwrap();
        assert!(!v.bci);
        let partner = v.partner.unwrap();
        assert!(find_isomorphism(
            &build_haar(&partner).unwrap(),
            &build_haar(&set(8, &[0, 1, 5, 6])).unwrap()
        )
        .is_some());
        assert!(!is_bci_structural(&set(8, &[0, 1, 2, 5]), DEFAULT_CAP).unwrap());
        assert!(!is_bci_structural(&set(16, &[0, 1, 2, 9]), DEFAULT_CAP).unwrap());
        assert!(is_bci_definitional(&set(7, &[0, 1, 3])).unwrap());
    }

    #[test]
    fn ci_examples() {
        assert!(ci_subset_definitional(&set(9, &[1, 3, 8])));
        assert!(ci_subset_definitional(&set(5, &[1])));
        assert!(ci_subset_structural(&set(9, &[1, 3, 8]), DEFAULT_CAP).unwrap());
    }

    #[test]
    fn four_cycle_has_no_partner() {
        // the stabilizer of 0+ is the reflection swapping 0- and 1-
        let g = build_haar(&set(2, &[0, 1])).unwrap();
        let stab = automorphism_group(&g).point_stabilizer(0);
        assert_eq!(stab.order(), 2);
        assert_eq!(stab.generators()[0].images(), &[0, 1, 3, 2]);
        assert_eq!(bci_to_ci_reduction(&set(2, &[0, 1])).unwrap(), None);
    }
}
