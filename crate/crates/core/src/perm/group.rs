use std::collections::{HashMap, HashSet, VecDeque};
use std::ops::ControlFlow;
use std::sync::OnceLock;

use super::{Partition, Perm};
use crate::error::{Error, Result};

/// Default element-enumeration cap.
pub const DEFAULT_CAP: u128 = 2_000_000;

#[derive(Clone, Debug)]
struct Level {
    point: u32,
    gens: Vec<Perm>,
    orbit: Vec<u32>,
    /// `trans[b]` maps the base point to `b`.
    trans: Vec<Option<Perm>>,
    trans_inv: Vec<Option<Perm>>,
}

impl Level {
    fn new(point: u32, degree: usize) -> Level {
        Level {
            point,
            gens: Vec::new(),
            orbit: Vec::new(),
            trans: vec![None; degree],
            trans_inv: vec![None; degree],
        }
    }

    fn rebuild(&mut self, degree: usize) {
        self.trans = vec![None; degree];
        self.trans_inv = vec![None; degree];
        self.orbit.clear();
        let id = Perm::identity(degree);
        self.trans[self.point as usize] = Some(id.clone());
        self.trans_inv[self.point as usize] = Some(id);
        self.orbit.push(self.point);
        let mut i = 0;
        while i < self.orbit.len() {
            let b = self.orbit[i];
            for s in &self.gens {
                let c = s.apply(b);
                if self.trans[c as usize].is_none() {
                    let t = self.trans[b as usize].as_ref().unwrap().then(s);
                    self.trans_inv[c as usize] = Some(t.inverse());
                    self.trans[c as usize] = Some(t);
                    self.orbit.push(c);
                }
            }
            i += 1;
        }
    }
}

/// Base and strong generating set with transversals.
#[derive(Clone, Debug)]
pub struct StabChain {
    degree: usize,
    levels: Vec<Level>,
}

impl StabChain {
    /// Deterministic Schreier–Sims. New base points are taken in the
    /// order given by `base_order` (points missing from it come last).
    pub fn new(degree: usize, gens: &[Perm], base_order: &[u32]) -> StabChain {
        let mut order: Vec<u32> = base_order.to_vec();
        let mut listed = vec![false; degree];
        for &p in &order {
            listed[p as usize] = true;
        }
        order.extend((0..degree as u32).filter(|&p| !listed[p as usize]));

        let mut chain = StabChain {
            degree,
            levels: Vec::new(),
        };
        let gens: Vec<Perm> = dedup(gens.iter().filter(|g| !g.is_identity()).cloned());
        if gens.is_empty() {
            return chain;
        }
        for g in &gens {
            if chain.levels.iter().all(|l| g.apply(l.point) == l.point) {
                let p = first_moved(g, &order);
                chain.levels.push(Level::new(p, degree));
            }
        }
        for (i, level) in chain.levels.iter_mut().enumerate() {
            let _ = i;
            level.gens.clear();
        }
        for g in &gens {
            for lvl in 0..chain.levels.len() {
                let fixes_prefix = chain.levels[..lvl].iter().all(|l| g.apply(l.point) == l.point);
                if fixes_prefix {
                    chain.levels[lvl].gens.push(g.clone());
                }
            }
        }
        for level in &mut chain.levels {
            level.rebuild(degree);
        }

        let mut i = chain.levels.len() as isize - 1;
        while i >= 0 {
            let lvl = i as usize;
            let mut jump: Option<usize> = None;
            'scan: for oi in 0..chain.levels[lvl].orbit.len() {
                let b = chain.levels[lvl].orbit[oi];
                for si in 0..chain.levels[lvl].gens.len() {
                    let level = &chain.levels[lvl];
                    let s = &level.gens[si];
                    let c = s.apply(b);
                    let h = level.trans[b as usize]
                        .as_ref()
                        .unwrap()
                        .then(s)
                        .then(level.trans_inv[c as usize].as_ref().unwrap());
                    if h.is_identity() {
                        continue;
                    }
                    let (res, j) = chain.sift_from(h, lvl + 1);
                    if !res.is_identity() {
                        if j == chain.levels.len() {
                            let p = first_moved(&res, &order);
                            chain.levels.push(Level::new(p, degree));
                        }
                        for l in lvl + 1..=j {
                            chain.levels[l].gens.push(res.clone());
                            chain.levels[l].rebuild(degree);
                        }
                        jump = Some(j);
                        break 'scan;
                    }
                }
            }
            match jump {
                Some(j) => i = j as isize,
                None => i -= 1,
            }
        }
        chain
    }

    fn sift_from(&self, mut h: Perm, start: usize) -> (Perm, usize) {
        for (l, level) in self.levels.iter().enumerate().skip(start) {
            let b = h.apply(level.point);
            match &level.trans_inv[b as usize] {
                Some(ui) => h = h.then(ui),
                None => return (h, l),
            }
        }
        (h, self.levels.len())
    }

    pub fn contains(&self, g: &Perm) -> bool {
        g.degree() == self.degree && self.sift_from(g.clone(), 0).0.is_identity()
    }

    pub fn order(&self) -> u128 {
        self.levels
            .iter()
            .map(|l| l.orbit.len() as u128)
            .fold(1u128, |acc, x| acc.saturating_mul(x))
    }

    pub fn base(&self) -> Vec<u32> {
        self.levels.iter().map(|l| l.point).collect()
    }

    pub fn strong_generators(&self) -> Vec<Perm> {
        self.levels.first().map(|l| l.gens.clone()).unwrap_or_default()
    }

    /// Generators of the stabilizer of the first `k` base points.
    pub fn stabilizer_generators(&self, k: usize) -> Vec<Perm> {
        self.levels.get(k).map(|l| l.gens.clone()).unwrap_or_default()
    }

    pub fn basic_orbit(&self, k: usize) -> &[u32] {
        self.levels.get(k).map(|l| l.orbit.as_slice()).unwrap_or(&[])
    }

    /// Visits every group element exactly once, identity first.
    pub fn for_each_element<F>(&self, mut f: F) -> ControlFlow<()>
    where
        F: FnMut(&Perm) -> ControlFlow<()>,
    {
        let id = Perm::identity(self.degree);
        if self.levels.is_empty() {
            return f(&id);
        }
        // g = u_{k-1} · … · u_0, built from the deepest level outwards.
        self.visit(self.levels.len() - 1, &id, &mut f)
    }

    fn visit<F>(&self, lvl: usize, acc: &Perm, f: &mut F) -> ControlFlow<()>
    where
        F: FnMut(&Perm) -> ControlFlow<()>,
    {
        let level = &self.levels[lvl];
        for &b in &level.orbit {
            let u = level.trans[b as usize].as_ref().unwrap();
            let next = acc.then(u);
            if lvl == 0 {
                f(&next)?;
            } else {
                self.visit(lvl - 1, &next, f)?;
            }
        }
        ControlFlow::Continue(())
    }
}

fn first_moved(g: &Perm, order: &[u32]) -> u32 {
    *order
        .iter()
        .find(|&&p| g.apply(p) != p)
        .expect("non-identity permutation moves a point")
}

fn dedup(it: impl Iterator<Item = Perm>) -> Vec<Perm> {
    let mut seen = HashSet::new();
    it.filter(|g| seen.insert(g.clone())).collect()
}

/// A permutation group given by generators; the stabilizer chain is built
/// on first use.
#[derive(Debug)]
pub struct PermGroup {
    degree: usize,
    generators: Vec<Perm>,
    base_order: Vec<u32>,
    chain: OnceLock<StabChain>,
}

impl Clone for PermGroup {
    fn clone(&self) -> Self {
        let chain = OnceLock::new();
        if let Some(c) = self.chain.get() {
            let _ = chain.set(c.clone());
        }
        PermGroup {
            degree: self.degree,
            generators: self.generators.clone(),
            base_order: self.base_order.clone(),
            chain,
        }
    }
}

/// `[0, h, 1, h+1, …]` for even degree `2h`, natural order otherwise.
pub fn default_base_order(degree: usize) -> Vec<u32> {
    if degree.is_multiple_of(2) {
        let h = (degree / 2) as u32;
        (0..h).flat_map(|x| [x, x + h]).collect()
    } else {
        (0..degree as u32).collect()
    }
}

impl PermGroup {
    pub fn new(degree: usize, generators: Vec<Perm>) -> PermGroup {
        Self::with_base_order(degree, generators, default_base_order(degree))
    }

    pub fn with_base_order(degree: usize, generators: Vec<Perm>, base_order: Vec<u32>) -> PermGroup {
        assert!(generators.iter().all(|g| g.degree() == degree));
        PermGroup {
            degree,
            generators,
            base_order,
            chain: OnceLock::new(),
        }
    }

    pub fn trivial(degree: usize) -> PermGroup {
        PermGroup::new(degree, Vec::new())
    }

    /// Builds a group from candidate elements, keeping only those not
    /// already generated by the earlier ones.
    pub fn from_generators_reduced(degree: usize, candidates: impl IntoIterator<Item = Perm>) -> PermGroup {
        let order = default_base_order(degree);
        let mut gens: Vec<Perm> = Vec::new();
        let mut chain = StabChain::new(degree, &gens, &order);
        for g in candidates {
            if !chain.contains(&g) {
                gens.push(g);
                chain = StabChain::new(degree, &gens, &order);
            }
        }
        let group = PermGroup::new(degree, gens);
        let _ = group.chain.set(chain);
        group
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn generators(&self) -> &[Perm] {
        &self.generators
    }

    pub fn chain(&self) -> &StabChain {
        self.chain
            .get_or_init(|| StabChain::new(self.degree, &self.generators, &self.base_order))
    }

    pub fn order(&self) -> u128 {
        self.chain().order()
    }

    pub fn contains(&self, g: &Perm) -> bool {
        self.chain().contains(g)
    }

    fn check_cap(&self, cap: u128) -> Result<()> {
        let order = self.order();
        if order > cap {
            return Err(Error::ResourceExceeded { estimate: order, cap });
        }
        Ok(())
    }

    /// All elements, by breadth-first products of the generators.
    pub fn closure_elements(&self, cap: u128) -> Result<Vec<Perm>> {
        self.check_cap(cap)?;
        let id = Perm::identity(self.degree);
        let mut seen: HashSet<Perm> = HashSet::new();
        seen.insert(id.clone());
        let mut out = vec![id];
        let mut i = 0;
        while i < out.len() {
            for g in &self.generators {
                let h = out[i].then(g);
                if seen.insert(h.clone()) {
                    out.push(h);
                }
            }
            i += 1;
        }
        Ok(out)
    }

    /// Streams the elements through the stabilizer chain (no storage),
    /// failing up front if the order exceeds `cap`.
    pub fn try_for_each_element<F>(&self, cap: u128, f: F) -> Result<ControlFlow<()>>
    where
        F: FnMut(&Perm) -> ControlFlow<()>,
    {
        self.check_cap(cap)?;
        Ok(self.chain().for_each_element(f))
    }

    pub fn orbits(&self) -> Partition {
        Partition::orbits(self.degree, &self.generators)
    }

    pub fn orbit(&self, p: u32) -> Vec<u32> {
        let mut seen = vec![false; self.degree];
        seen[p as usize] = true;
        let mut out = vec![p];
        let mut i = 0;
        while i < out.len() {
            for g in &self.generators {
                let q = g.apply(out[i]);
                if !seen[q as usize] {
                    seen[q as usize] = true;
                    out.push(q);
                }
            }
            i += 1;
        }
        out.sort_unstable();
        out
    }

    pub fn point_stabilizer(&self, p: u32) -> PermGroup {
        let mut order = vec![p];
        order.extend(self.base_order.iter().copied().filter(|&q| q != p));
        let chain = StabChain::new(self.degree, &self.generators, &order);
        let gens = if chain.base().first() == Some(&p) {
            chain.stabilizer_generators(1)
        } else {
            // every generator fixes p
            chain.strong_generators()
        };
        let gens = dedup(gens.into_iter());
        let stab = PermGroup::with_base_order(self.degree, gens, self.base_order.clone());
        debug_assert_eq!(
            stab.order() * self.orbit(p).len() as u128,
            chain.order(),
            "orbit-stabilizer"
        );
        stab
    }

    /// Subgroup mapping `set` onto itself. Uses the orbit of `set` under the
    /// group and Schreier generators; `cap` bounds the orbit length.
    pub fn setwise_stabilizer(&self, set: &[u32], cap: u128) -> Result<PermGroup> {
        let mut start = set.to_vec();
        start.sort_unstable();
        start.dedup();
        let mut index: HashMap<Vec<u32>, usize> = HashMap::new();
        let mut reps: Vec<Perm> = vec![Perm::identity(self.degree)];
        let mut sets: Vec<Vec<u32>> = vec![start.clone()];
        index.insert(start, 0);
        let mut schreier: Vec<Perm> = Vec::new();
        let mut i = 0;
        while i < sets.len() {
            for g in &self.generators {
                let mut img: Vec<u32> = sets[i].iter().map(|&p| g.apply(p)).collect();
                img.sort_unstable();
                let t = reps[i].then(g);
                match index.get(&img) {
                    Some(&j) => {
                        let s = t.then(&reps[j].inverse());
                        if !s.is_identity() {
                            schreier.push(s);
                        }
                    }
                    None => {
                        if sets.len() as u128 >= cap {
                            return Err(Error::ResourceExceeded {
                                estimate: sets.len() as u128,
                                cap,
                            });
                        }
                        index.insert(img.clone(), sets.len());
                        sets.push(img);
                        reps.push(t);
                    }
                }
            }
            i += 1;
        }
        let stab = PermGroup::from_generators_reduced(self.degree, schreier);
        debug_assert_eq!(stab.order() * sets.len() as u128, self.order());
        Ok(stab)
    }

    /// Finest invariant partition with all of `seed` in one cell.
    pub fn minimal_block_system(&self, seed: &[u32]) -> Result<Partition> {
        let orbits = self.orbits();
        if let Some(&s0) = seed.first() {
            let cell = orbits.cell_of(s0);
            if seed.iter().any(|&p| orbits.cell_of(p) != cell) {
                return Err(Error::NotTransitive);
            }
        }
        let mut uf = UnionFind::new(self.degree);
        let mut queue = VecDeque::new();
        for w in seed.windows(2) {
            if uf.union(w[0], w[1]) {
                queue.push_back((w[0], w[1]));
            }
        }
        while let Some((a, b)) = queue.pop_front() {
            for g in &self.generators {
                let (x, y) = (uf.find(g.apply(a)), uf.find(g.apply(b)));
                if x != y {
                    uf.union(x, y);
                    queue.push_back((x, y));
                }
            }
        }
        Ok(Partition::from_labels(&uf.labels()))
    }

    /// `{ g ∈ G : g H g⁻¹ = H }` for a cyclic (or any small) subgroup `H`,
    /// by filtering the elements of `G`.
    pub fn normalizer_of(&self, h: &PermGroup, cap: u128) -> Result<PermGroup> {
        let h_elems: HashSet<Perm> = h.closure_elements(cap)?.into_iter().collect();
        let mut keep = Vec::new();
        let _ = self.try_for_each_element(cap, |g| {
            if h.generators().iter().all(|x| h_elems.contains(&x.conjugate_by(g))) {
                keep.push(g.clone());
            }
            ControlFlow::Continue(())
        })?;
        let norm = PermGroup::from_generators_reduced(self.degree, keep);
        for g in norm.generators() {
            debug_assert!(h.generators().iter().all(|x| h_elems.contains(&x.conjugate_by(g))));
        }
        Ok(norm)
    }

    /// Some `g` with `g H1 g⁻¹ = H2`, first in chain enumeration order.
    pub fn conjugating_element(&self, h1: &PermGroup, h2: &PermGroup, cap: u128) -> Result<Option<Perm>> {
        if h1.order() != h2.order() {
            return Ok(None);
        }
        let mut found = None;
        let _ = self.try_for_each_element(cap, |g| {
            if h1.generators().iter().all(|x| h2.contains(&x.conjugate_by(g))) {
                found = Some(g.clone());
                ControlFlow::Break(())
            } else {
                ControlFlow::Continue(())
            }
        })?;
        Ok(found)
    }
}

pub(crate) struct UnionFind {
    parent: Vec<u32>,
}

impl UnionFind {
    pub(crate) fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n as u32).collect(),
        }
    }

    pub(crate) fn find(&mut self, mut x: u32) -> u32 {
        while self.parent[x as usize] != x {
            let p = self.parent[x as usize];
            self.parent[x as usize] = self.parent[p as usize];
            x = p;
        }
        x
    }

    /// Merges the classes of `a` and `b`; the smaller root survives.
    pub(crate) fn union(&mut self, a: u32, b: u32) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
        self.parent[hi as usize] = lo;
        true
    }

    pub(crate) fn labels(&mut self) -> Vec<u32> {
        (0..self.parent.len() as u32).map(|x| self.find(x)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cyc(n: usize) -> Perm {
        Perm::from_fn(n, |x| (x + 1) % n as u32).unwrap()
    }

    fn transposition(n: usize, a: u32, b: u32) -> Perm {
        Perm::from_fn(n, |x| {
            if x == a {
                b
            } else if x == b {
                a
            } else {
                x
            }
        })
        .unwrap()
    }

    #[test]
    fn symmetric_group_orders() {
        for n in 2..8usize {
            let g = PermGroup::new(n, vec![cyc(n), transposition(n, 0, 1)]);
            let fact: u128 = (1..=n as u128).product();
            assert_eq!(g.order(), fact);
        }
    }

    #[test]
    fn chain_enumeration_is_exact() {
        let g = PermGroup::new(6, vec![cyc(6), transposition(6, 0, 2)]);
        let mut all = HashSet::new();
        let mut first = None;
        let _ = g.try_for_each_element(DEFAULT_CAP, |x| {
            if first.is_none() {
                first = Some(x.clone());
            }
            all.insert(x.clone());
            ControlFlow::Continue(())
        });
        assert!(first.unwrap().is_identity());
        assert_eq!(all.len() as u128, g.order());
        let closure: HashSet<Perm> = g.closure_elements(DEFAULT_CAP).unwrap().into_iter().collect();
        assert_eq!(closure, all);
    }

    #[test]
    fn cap_is_enforced() {
        let g = PermGroup::new(8, vec![cyc(8), transposition(8, 0, 1)]);
        assert!(matches!(
            g.closure_elements(1000),
            Err(Error::ResourceExceeded {
                estimate: 40320,
                cap: 1000
            })
        ));
    }

    #[test]
    fn union_find_blocks() {
        // cyclic group of order 6 acting on 6 points, seed {0,3}
        let g = PermGroup::new(6, vec![cyc(6)]);
        let p = g.minimal_block_system(&[0, 3]).unwrap();
        assert_eq!(p.cells(), &[vec![0, 3], vec![1, 4], vec![2, 5]]);
        let two = PermGroup::new(4, vec![transposition(4, 0, 1)]);
        assert!(matches!(two.minimal_block_system(&[0, 2]), Err(Error::NotTransitive)));
    }
}
