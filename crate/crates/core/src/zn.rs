//! Exact arithmetic in `Z_n`: subsets, the affine action of `Z_n^* ⋉ Z_n`,
//! canonical affine forms and reduction maps `Z_n -> Z_l`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest modulus accepted anywhere in the crate.
pub const MAX_MODULUS: u32 = 1 << 20;

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// Inverse of `a` modulo `n`, if `a` is a unit.
pub fn inverse_mod(a: u32, n: u32) -> Option<u32> {
    if n == 1 {
        return Some(0);
    }
    let (mut old_r, mut r) = (i64::from(a % n), i64::from(n));
    let (mut old_s, mut s) = (1i64, 0i64);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
    }
    if old_r != 1 {
        return None;
    }
    Some(old_s.rem_euclid(i64::from(n)) as u32)
}

pub fn check_modulus(n: u32) -> Result<()> {
    if n == 0 || n > MAX_MODULUS {
        return Err(Error::InvalidModulus(n));
    }
    Ok(())
}

/// The units of `Z_n` in ascending order. `n = 0` and `n = 1` are rejected.
pub fn units(n: u32) -> Result<Vec<u32>> {
    check_modulus(n)?;
    if n == 1 {
        return Err(Error::InvalidModulus(n));
    }
    Ok((1..n).filter(|&a| gcd(a as u64, n as u64) == 1).collect())
}

pub fn is_unit(a: u32, n: u32) -> bool {
    n > 1 && gcd(a as u64, n as u64) == 1
}

/// Additive order of `x` in `Z_n`.
pub fn additive_order(x: u32, n: u32) -> u32 {
    n / gcd(x as u64, n as u64) as u32
}

#[inline]
pub fn add_mod(a: u32, b: u32, n: u32) -> u32 {
    ((a as u64 + b as u64) % n as u64) as u32
}

#[inline]
pub fn sub_mod(a: u32, b: u32, n: u32) -> u32 {
    ((a as u64 + n as u64 - (b % n) as u64) % n as u64) as u32
}

#[inline]
pub fn mul_mod(a: u32, b: u32, n: u32) -> u32 {
    ((a as u64 * b as u64) % n as u64) as u32
}

/// A subset of `Z_n`, stored sorted and reduced.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "RawZnSet", into = "RawZnSet")]
pub struct ZnSet {
    modulus: u32,
    elems: Vec<u32>,
}

#[derive(Serialize, Deserialize)]
struct RawZnSet {
    modulus: u32,
    elems: Vec<u32>,
}

impl TryFrom<RawZnSet> for ZnSet {
    type Error = Error;

    fn try_from(raw: RawZnSet) -> Result<Self> {
        ZnSet::new(raw.modulus, raw.elems)
    }
}

impl From<ZnSet> for RawZnSet {
    fn from(s: ZnSet) -> Self {
        RawZnSet {
            modulus: s.modulus,
            elems: s.elems,
        }
    }
}

impl ZnSet {
    /// Builds a set from arbitrary integers; they are reduced mod `n`, and a
    /// repeated residue is an error.
    pub fn new(n: u32, elems: impl IntoIterator<Item = u32>) -> Result<Self> {
        check_modulus(n)?;
        let mut v: Vec<u32> = elems.into_iter().map(|e| e % n).collect();
        v.sort_unstable();
        if let Some(w) = v.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::DuplicateElement(w[0]));
        }
        Ok(ZnSet { modulus: n, elems: v })
    }

    /// Same as [`ZnSet::new`] but collapses duplicates instead of rejecting them.
    pub fn from_residues(n: u32, elems: impl IntoIterator<Item = u32>) -> Result<Self> {
        check_modulus(n)?;
        let mut v: Vec<u32> = elems.into_iter().map(|e| e % n).collect();
        v.sort_unstable();
        v.dedup();
        Ok(ZnSet { modulus: n, elems: v })
    }

    pub(crate) fn from_sorted_unchecked(n: u32, elems: Vec<u32>) -> Self {
        debug_assert!(elems.windows(2).all(|w| w[0] < w[1]));
        debug_assert!(elems.iter().all(|&e| e < n));
        ZnSet { modulus: n, elems }
    }

    pub fn modulus(&self) -> u32 {
        self.modulus
    }

    pub fn elems(&self) -> &[u32] {
        &self.elems
    }

    pub fn len(&self) -> usize {
        self.elems.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elems.is_empty()
    }

    pub fn contains(&self, x: u32) -> bool {
        self.elems.binary_search(&(x % self.modulus)).is_ok()
    }

    /// `S - a = { s - a : s ∈ S }`.
    pub fn shifted(&self, a: u32) -> ZnSet {
        let n = self.modulus;
        let neg = sub_mod(0, a, n);
        apply_affine(self, AffineWitness { a: 1, b: neg }).expect("1 is a unit")
    }

    /// The difference set `S - S`.
    pub fn differences(&self) -> Vec<u32> {
        let n = self.modulus;
        let mut out: Vec<u32> = self
            .elems
            .iter()
            .flat_map(|&x| self.elems.iter().map(move |&y| sub_mod(x, y, n)))
            .collect();
        out.sort_unstable();
        out.dedup();
        out
    }
}

impl fmt::Display for ZnSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:", self.modulus)?;
        for (i, e) in self.elems.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{e}")?;
        }
        Ok(())
    }
}

impl FromStr for ZnSet {
    type Err = Error;

    /// Parses the textual form `n:e1,e2,...`.
    fn from_str(s: &str) -> Result<Self> {
        let (n, rest) = s
            .split_once(':')
            .ok_or_else(|| Error::Parse(format!("expected `n:e1,e2,...`, got `{s}`")))?;
        let n: u32 = n
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("bad modulus `{n}`")))?;
        ZnSet::new(n, parse_elements(rest)?)
    }
}

/// Parses a comma separated list of non-negative integers (may be empty).
pub fn parse_elements(s: &str) -> Result<Vec<u32>> {
    let s = s.trim();
    if s.is_empty() {
        return Ok(Vec::new());
    }
    s.split(',')
        .map(|t| {
            t.trim()
                .parse::<u32>()
                .map_err(|_| Error::Parse(format!("bad element `{t}`")))
        })
        .collect()
}

/// The affine map `x ↦ a·x + b`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct AffineWitness {
    pub a: u32,
    pub b: u32,
}

impl AffineWitness {
    pub const IDENTITY: AffineWitness = AffineWitness { a: 1, b: 0 };

    pub fn apply(&self, x: u32, n: u32) -> u32 {
        add_mod(mul_mod(self.a, x, n), self.b, n)
    }

    /// The inverse map `(a⁻¹, -a⁻¹·b)`.
    pub fn inverse(&self, n: u32) -> Result<AffineWitness> {
        let ai = inverse_mod(self.a, n).ok_or(Error::NotAUnit { a: self.a, n })?;
        Ok(AffineWitness {
            a: ai,
            b: sub_mod(0, mul_mod(ai, self.b, n), n),
        })
    }

    /// `self` followed by `next`.
    pub fn then(&self, next: &AffineWitness, n: u32) -> AffineWitness {
        AffineWitness {
            a: mul_mod(next.a, self.a, n),
            b: next.apply(self.b, n),
        }
    }
}

pub fn apply_affine(s: &ZnSet, w: AffineWitness) -> Result<ZnSet> {
    let n = s.modulus;
    if !is_unit(w.a, n) && !(n == 1 && w.a == 0) {
        return Err(Error::NotAUnit { a: w.a, n });
    }
    Ok(affine_image(s, w))
}

fn affine_image(s: &ZnSet, w: AffineWitness) -> ZnSet {
    let n = s.modulus;
    let mut v: Vec<u32> = s.elems.iter().map(|&x| w.apply(x, n)).collect();
    v.sort_unstable();
    ZnSet::from_sorted_unchecked(n, v)
}

fn unit_list(n: u32) -> Vec<u32> {
    if n == 1 {
        vec![0]
    } else {
        (1..n).filter(|&a| gcd(a as u64, n as u64) == 1).collect()
    }
}

/// Lexicographically least `(a, b)` with `a·S + b = T`, if any.
pub fn affinely_equivalent(s: &ZnSet, t: &ZnSet) -> Result<Option<AffineWitness>> {
    if s.modulus != t.modulus {
        return Err(Error::ModulusMismatch(s.modulus, t.modulus));
    }
    if s.len() != t.len() {
        return Ok(None);
    }
    let n = s.modulus;
    let Some(&s0) = s.elems.first() else {
        return Ok(Some(AffineWitness::IDENTITY));
    };
    for a in unit_list(n) {
        // b must send s0 into T; try the candidates in increasing order.
        let mut bs: Vec<u32> = t.elems.iter().map(|&y| sub_mod(y, mul_mod(a, s0, n), n)).collect();
        bs.sort_unstable();
        for b in bs {
            let w = AffineWitness { a, b };
            if s.elems.iter().all(|&x| t.contains(w.apply(x, n))) {
                return Ok(Some(w));
            }
        }
    }
    Ok(None)
}

/// Least sorted image of `S` under the affine group, with the least `(a, b)`
/// attaining it.
pub fn canonical_affine_form(s: &ZnSet) -> (ZnSet, AffineWitness) {
    let n = s.modulus;
    if s.is_empty() {
        return (s.clone(), AffineWitness::IDENTITY);
    }
    // The minimum always contains 0, so b ranges over -a·s for s ∈ S.
    let mut best: Option<(Vec<u32>, AffineWitness)> = None;
    let mut buf = Vec::with_capacity(s.len());
    for a in unit_list(n) {
        let mut bs: Vec<u32> = s.elems.iter().map(|&x| sub_mod(0, mul_mod(a, x, n), n)).collect();
        bs.sort_unstable();
        for b in bs {
            let w = AffineWitness { a, b };
            buf.clear();
            buf.extend(s.elems.iter().map(|&x| w.apply(x, n)));
            buf.sort_unstable();
            let better = match &best {
                None => true,
                Some((cur, _)) => buf.as_slice() < cur.as_slice(),
            };
            if better {
                best = Some((buf.clone(), w));
            }
        }
    }
    let (elems, w) = best.expect("non-empty set");
    (ZnSet::from_sorted_unchecked(n, elems), w)
}

/// Least sorted image of `S` under multiplication by units only.
pub fn canonical_multiplicative_form(s: &ZnSet) -> (ZnSet, u32) {
    let n = s.modulus;
    let mut best: Option<(Vec<u32>, u32)> = None;
    for a in unit_list(n) {
        let mut v: Vec<u32> = s.elems.iter().map(|&x| mul_mod(a, x, n)).collect();
        v.sort_unstable();
        if best.as_ref().is_none_or(|(cur, _)| v < *cur) {
            best = Some((v, a));
        }
    }
    let (elems, a) = best.expect("unit list is never empty");
    (ZnSet::from_sorted_unchecked(n, elems), a)
}

/// The image of `S` under reduction `Z_n -> Z_l`.
pub fn project(s: &ZnSet, l: u32) -> Result<ZnSet> {
    let n = s.modulus;
    if l == 0 || !n.is_multiple_of(l) {
        return Err(Error::NotADivisor { l, n });
    }
    ZnSet::from_residues(l, s.elems.iter().map(|&x| x % l))
}

/// Order of the subgroup of `Z_n` generated by `gens`.
pub fn subgroup_index(n: u32, gens: &[u32]) -> u32 {
    let g = gens.iter().fold(n as u64, |acc, &x| gcd(acc, (x % n) as u64));
    n / g as u32
}

/// Calls `f` on every `k`-subset of `[lo, n)` in lexicographic order.
pub fn for_each_subset(lo: u32, n: u32, k: usize, mut f: impl FnMut(&[u32])) {
    fn rec(start: u32, n: u32, k: usize, cur: &mut Vec<u32>, f: &mut dyn FnMut(&[u32])) {
        if cur.len() == k {
            f(cur);
            return;
        }
        let need = (k - cur.len()) as u32;
        for x in start..n {
            if n - x < need {
                break;
            }
            cur.push(x);
            rec(x + 1, n, k, cur, f);
            cur.pop();
        }
    }
    rec(lo, n, k, &mut Vec::with_capacity(k), &mut f);
}

/// Canonical affine forms of all `k`-subsets of `Z_n`, ascending.
pub fn affine_classes(n: u32, k: usize) -> Vec<ZnSet> {
    let mut out = std::collections::BTreeSet::new();
    if k == 0 {
        return vec![ZnSet::from_sorted_unchecked(n, Vec::new())];
    }
    for_each_subset(1, n, k - 1, |rest| {
        let mut elems = vec![0];
        elems.extend_from_slice(rest);
        out.insert(canonical_affine_form(&ZnSet::from_sorted_unchecked(n, elems)).0);
    });
    out.into_iter().collect()
}

/// Canonical multiplicative forms of all `k`-subsets of `Z_n`, ascending.
pub fn multiplicative_classes(n: u32, k: usize) -> Vec<ZnSet> {
    let mut out = std::collections::BTreeSet::new();
    for_each_subset(0, n, k, |elems| {
        out.insert(canonical_multiplicative_form(&ZnSet::from_sorted_unchecked(n, elems.to_vec())).0);
    });
    out.into_iter().collect()
}
