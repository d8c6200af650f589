//! Permutations of a finite point set and permutation groups given by
//! generators, with stabilizer chains built by deterministic Schreier–Sims.

mod group;
mod partition;

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub(crate) use group::UnionFind;
pub use group::{default_base_order, PermGroup, StabChain, DEFAULT_CAP};
pub use partition::Partition;

/// A bijection of `[0, degree)`, stored as its image vector.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "RawPerm")]
pub struct Perm {
    images: Vec<u32>,
}

#[derive(Deserialize)]
struct RawPerm {
    images: Vec<u32>,
}

impl TryFrom<RawPerm> for Perm {
    type Error = Error;

    fn try_from(raw: RawPerm) -> Result<Perm> {
        Perm::from_images(raw.images)
    }
}

impl fmt::Debug for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Perm{:?}", self.images)
    }
}

impl Perm {
    pub fn identity(degree: usize) -> Perm {
        Perm {
            images: (0..degree as u32).collect(),
        }
    }

    pub fn from_images(images: Vec<u32>) -> Result<Perm> {
        let mut seen = vec![false; images.len()];
        for &x in &images {
            let slot = seen
                .get_mut(x as usize)
                .ok_or_else(|| Error::InvalidPerm(format!("image {x} out of range")))?;
            if *slot {
                return Err(Error::InvalidPerm(format!("image {x} repeated")));
            }
            *slot = true;
        }
        Ok(Perm { images })
    }

    pub(crate) fn from_images_unchecked(images: Vec<u32>) -> Perm {
        debug_assert!(Perm::from_images(images.clone()).is_ok());
        Perm { images }
    }

    /// Builds a permutation from a point map.
    pub fn from_fn(degree: usize, f: impl Fn(u32) -> u32) -> Result<Perm> {
        Perm::from_images((0..degree as u32).map(f).collect())
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    pub fn images(&self) -> &[u32] {
        &self.images
    }

    #[inline]
    pub fn apply(&self, p: u32) -> u32 {
        self.images[p as usize]
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &x)| i as u32 == x)
    }

    /// `self` first, then `other`.
    pub fn then(&self, other: &Perm) -> Perm {
        debug_assert_eq!(self.degree(), other.degree());
        Perm {
            images: self.images.iter().map(|&x| other.images[x as usize]).collect(),
        }
    }

    pub fn inverse(&self) -> Perm {
        let mut inv = vec![0u32; self.images.len()];
        for (i, &x) in self.images.iter().enumerate() {
            inv[x as usize] = i as u32;
        }
        Perm { images: inv }
    }

    /// `g ∘ self ∘ g⁻¹`.
    pub fn conjugate_by(&self, g: &Perm) -> Perm {
        let mut out = vec![0u32; self.images.len()];
        for (p, &x) in self.images.iter().enumerate() {
            out[g.images[p] as usize] = g.images[x as usize];
        }
        Perm { images: out }
    }

    pub fn pow(&self, mut e: u64) -> Perm {
        let mut base = self.clone();
        let mut acc = Perm::identity(self.degree());
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.then(&base);
            }
            base = base.then(&base);
            e >>= 1;
        }
        acc
    }

    /// Cycle lengths, one entry per cycle, in order of least point.
    pub fn cycle_lengths(&self) -> Vec<usize> {
        let mut seen = vec![false; self.degree()];
        let mut out = Vec::new();
        for start in 0..self.degree() {
            if seen[start] {
                continue;
            }
            let mut len = 0;
            let mut p = start;
            while !seen[p] {
                seen[p] = true;
                p = self.images[p] as usize;
                len += 1;
            }
            out.push(len);
        }
        out
    }

    pub fn order(&self) -> u128 {
        self.cycle_lengths().into_iter().fold(1u128, |acc, l| {
            let l = l as u128;
            acc / gcd128(acc, l) * l
        })
    }

    /// Length of the cycle through `p`.
    pub fn cycle_len_at(&self, p: u32) -> usize {
        let mut q = self.apply(p);
        let mut len = 1;
        while q != p {
            q = self.apply(q);
            len += 1;
        }
        len
    }

    pub fn maps_set_onto(&self, set: &[u32]) -> bool {
        let mut img: Vec<u32> = set.iter().map(|&p| self.apply(p)).collect();
        img.sort_unstable();
        let mut s = set.to_vec();
        s.sort_unstable();
        img == s
    }
}

fn gcd128(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}
