use crate::bicyclic::align_to_c;
use crate::error::{Error, Result};
use crate::haar::{build_haar, canonical_c};
use crate::perm::{Partition, Perm};

use super::quad::{condition2_holds, Quadruple};

/// The involutions `e_i` adding `m` on the block
/// `V_i = {(iv + ju)^± : j}` and fixing everything else.
#[derive(Clone, Debug)]
pub struct EGroup {
    q: Quadruple,
    members: Vec<Perm>,
    blocks: Vec<Vec<u32>>,
}

impl EGroup {
    pub fn quadruple(&self) -> Quadruple {
        self.q
    }

    pub fn members(&self) -> &[Perm] {
        &self.members
    }

    /// `V_0, …, V_{u−1}` as point sets (both colours).
    pub fn blocks(&self) -> &[Vec<u32>] {
        &self.blocks
    }

    pub fn partition(&self) -> Partition {
        let mut labels = vec![0u32; 2 * self.q.n as usize];
        for (i, b) in self.blocks.iter().enumerate() {
            for &p in b {
                labels[p as usize] = i as u32;
            }
        }
        Partition::from_labels(&labels)
    }

    /// `e_I = ∏_{i ∈ I} e_i`.
    pub fn product(&self, indices: &[usize]) -> Perm {
        indices.iter().fold(Perm::identity(2 * self.q.n as usize), |acc, &i| {
            acc.then(&self.members[i])
        })
    }

    /// Block index of `x ∈ Z_n` (either colour).
    pub fn block_of(&self, x: u32) -> usize {
        self.blocks
            .iter()
            .position(|b| b.contains(&x))
            .expect("blocks cover Z_n")
    }
}

/// Requires `u | m` and `1 < u < m`; checks that every `e_i` is an
/// automorphism of `H(Z_n, {0,u,v,v+m})`.
pub fn build_e_group(q: &Quadruple) -> Result<EGroup> {
    let Quadruple { n, m, u, v } = *q;
    if !q.divisibility_holds() {
        return Err(Error::Precondition(format!(
            "u = {u} must satisfy 1 < u < m = {m} and u | m"
        )));
    }
    let mut owner = vec![usize::MAX; n as usize];
    let mut blocks = Vec::with_capacity(u as usize);
    for i in 0..u {
        let mut block = Vec::new();
        for j in 0..n / u {
            let x = ((i as u64 * v as u64 + j as u64 * u as u64) % n as u64) as u32;
            if owner[x as usize] != usize::MAX {
                return Err(Error::Precondition(format!("blocks V_i overlap at {x}")));
            }
            owner[x as usize] = i as usize;
            block.push(x);
            block.push(x + n);
        }
        block.sort_unstable();
        blocks.push(block);
    }
    let g = build_haar(&q.set())?;
    let members: Vec<Perm> = (0..u as usize)
        .map(|i| {
            Perm::from_images_unchecked(
                (0..2 * n)
                    .map(|p| {
                        let (x, base) = if p < n { (p, 0) } else { (p - n, n) };
                        if owner[x as usize] == i {
                            (x + m) % n + base
                        } else {
                            p
                        }
                    })
                    .collect(),
            )
        })
        .collect();
    for (i, e) in members.iter().enumerate() {
        if !g.is_automorphism(e) {
            return Err(Error::Precondition(format!("e_{i} is not an automorphism")));
        }
    }
    Ok(EGroup { q: *q, members, blocks })
}

/// The `ξ` fixing `0⁺` and `0⁻` with `ξ ∘ h = c ∘ ξ` for `h = c` followed by
/// `e_1`. Checked to map `H(Z_n, {0,u,v,v+m})` onto
/// `H(Z_n, {0,u+m,v,v+m})`.
pub fn xi_witness(q: &Quadruple) -> Result<Perm> {
    if !condition2_holds(q) {
        return Err(Error::Precondition(format!(
            "{q} does not satisfy the exceptional condition"
        )));
    }
    let e = build_e_group(q)?;
    let h = canonical_c(q.n).then(&e.members()[1]);
    if h.cycle_len_at(0) != q.n as usize || h.cycle_len_at(q.n) != q.n as usize {
        return Err(Error::Precondition("c e_1 is not bicyclic".into()));
    }
    let xi = align_to_c(&h, q.n);
    let from = build_haar(&q.set())?;
    let to = build_haar(&q.partner_set())?;
    if !from.maps_onto(&xi, &to) {
        return Err(Error::Precondition(format!("xi fails the edge check at {q}")));
    }
    Ok(xi)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::haar::minus;

    #[test]
    fn e_group_n8() {
        let q = Quadruple::new(8, 2, 1).unwrap();
        let e = build_e_group(&q).unwrap();
        assert_eq!(e.blocks()[0], vec![0, 2, 4, 6, 8, 10, 12, 14]);
        let e0 = &e.members()[0];
        assert_eq!(e0.apply(0), 4);
        assert_eq!(e0.apply(10), 14);
        assert_eq!(e0.apply(1), 1);
        assert!(e0.then(e0).is_identity());
        assert_eq!(e.product(&[0, 1]), canonical_c(8).pow(4));
        assert_eq!(
            e.members()[0].then(&e.members()[1]),
            e.members()[1].then(&e.members()[0])
        );
    }

    #[test]
    fn xi_n8() {
        let q = Quadruple::new(8, 2, 1).unwrap();
        let xi = xi_witness(&q).unwrap();
        assert_eq!((xi.apply(0), xi.apply(8)), (0, 8));
        assert_eq!(xi.apply(minus(2, 8)), minus(6, 8));
        let pair = [minus(1, 8), minus(5, 8)];
        assert!(xi.maps_set_onto(&pair));
        assert!(xi_witness(&Quadruple::new(16, 2, 3).unwrap()).is_err());
    }
}
