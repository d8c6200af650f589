use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::zn::{self, AffineWitness, ZnSet};

/// The normal form `{0, u, v, v+m}` over `Z_n`, `n = 2m`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Quadruple {
    pub n: u32,
    pub m: u32,
    pub u: u32,
    pub v: u32,
}

impl Quadruple {
    /// Checks that `n` is even, the four elements are distinct and
    /// `⟨u, v⟩ = Z_n`. `u` and `v` are reduced into `[0, n)`.
    pub fn new(n: u32, u: u32, v: u32) -> Result<Quadruple> {
        zn::check_modulus(n)?;
        if n % 2 == 1 {
            return Err(Error::OddModulus(n));
        }
        let m = n / 2;
        let (u, v) = (u % n, v % n);
        let q = Quadruple { n, m, u, v };
        let elems = q.elems();
        for (i, a) in elems.iter().enumerate() {
            if elems[..i].contains(a) {
                return Err(Error::DuplicateElement(*a));
            }
        }
        if zn::subgroup_index(n, &[u, v]) != n {
            return Err(Error::Precondition(format!("<{u}, {v}> is a proper subgroup of Z_{n}")));
        }
        Ok(q)
    }

    fn elems(&self) -> [u32; 4] {
        [0, self.u, self.v, (self.v + self.m) % self.n]
    }

    pub fn set(&self) -> ZnSet {
        ZnSet::from_residues(self.n, self.elems()).expect("valid modulus")
    }

    /// `{0, u+m, v, v+m}`.
    pub fn partner_set(&self) -> ZnSet {
        let Quadruple { n, m, u, v } = *self;
        ZnSet::from_residues(n, [0, (u + m) % n, v, (v + m) % n]).expect("valid modulus")
    }

    /// `1 < u < m` and `u | m`.
    pub fn divisibility_holds(&self) -> bool {
        1 < self.u && self.u < self.m && self.m.is_multiple_of(self.u)
    }
}

impl fmt::Display for Quadruple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(n={}, u={}, v={})", self.n, self.u, self.v)
    }
}

/// `2 | u`, `2u | m` and `u/2 ≢ v + m/(2u) (mod m/u)`.
pub fn condition2_holds(q: &Quadruple) -> bool {
    let Quadruple { m, u, v, .. } = *q;
    if u == 0 || u % 2 != 0 || m % (2 * u) != 0 {
        return false;
    }
    let modulus = (m / u) as i64;
    let diff = (u / 2) as i64 - v as i64 - (m / (2 * u)) as i64;
    diff.rem_euclid(modulus) != 0
}

/// Every `(q, (a, b))` with `aS + b = {0, u, v, v+m}` and `⟨u, v⟩ = Z_n`,
/// ordered by `(a, b, u, v)`. Every decomposition of every image is
/// listed; `v` is the smaller element of its pair.
pub fn normalize_quadruple(s: &ZnSet) -> Result<Vec<(Quadruple, AffineWitness)>> {
    let n = s.modulus();
    if s.len() != 4 {
        return Err(Error::BadValency(s.len()));
    }
    if n % 2 == 1 {
        return Err(Error::OddModulus(n));
    }
    if zn::subgroup_index(n, &s.differences()) != n {
        return Err(Error::Disconnected { n, set: s.to_string() });
    }
    let m = n / 2;
    let mut out = Vec::new();
    for a in zn::units(n)? {
        let mut bs: Vec<u32> = s
            .elems()
            .iter()
            .map(|&x| zn::sub_mod(0, zn::mul_mod(a, x, n), n))
            .collect();
        bs.sort_unstable();
        for b in bs {
            let w = AffineWitness { a, b };
            let image = zn::apply_affine(s, w)?;
            let rest: Vec<u32> = image.elems().iter().copied().filter(|&x| x != 0).collect();
            for &v in rest.iter().filter(|&&x| x < m) {
                if !rest.contains(&(v + m)) {
                    continue;
                }
                let Some(&u) = rest.iter().find(|&&x| x != v && x != v + m) else {
                    continue;
                };
                if let Ok(q) = Quadruple::new(n, u, v) {
                    out.push((q, w));
                }
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: u32, u: u32, v: u32) -> Quadruple {
        Quadruple::new(n, u, v).unwrap()
    }

    #[test]
    fn condition2_examples() {
        assert!(condition2_holds(&q(8, 2, 1)));
        assert!(!condition2_holds(&q(16, 2, 3)));
        assert!(!condition2_holds(&q(12, 2, 1)));
    }

    #[test]
    fn condition2_against_rational_reading() {
        // u/2 - v - m/(2u) as an exact fraction, divisibility tested after scaling
        for n in (4..=64u32).step_by(2) {
            let m = n / 2;
            for u in 1..n {
                for v in 1..n {
                    let Ok(qq) = Quadruple::new(n, u, v) else { continue };
                    let expected = u % 2 == 0 && m % (2 * u) == 0 && {
                        let num = (u * u) as i64 - 2 * (u * v) as i64 - m as i64; // 2u·(u/2 - v - m/(2u))
                        num.rem_euclid(2 * m as i64) != 0 // modulo 2u·(m/u)
                    };
                    assert_eq!(condition2_holds(&qq), expected, "{qq}");
                }
            }
        }
    }

    #[test]
    fn normalization_examples() {
        let s = ZnSet::new(8, [0, 1, 2, 5]).unwrap();
        let all = normalize_quadruple(&s).unwrap();
        assert!(all.contains(&(q(8, 2, 1), AffineWitness::IDENTITY)));
        let t = ZnSet::new(8, [0, 1, 5, 6]).unwrap();
        let all = normalize_quadruple(&t).unwrap();
        assert!(all.contains(&(q(8, 6, 1), AffineWitness::IDENTITY)));
        assert!(all.iter().any(|(_, w)| *w != AffineWitness::IDENTITY));
        for (qq, w) in &all {
            assert_eq!(zn::apply_affine(&t, *w).unwrap(), qq.set());
        }
        // no two elements of any affine image differ by m = 5
        let none = ZnSet::new(10, [0, 1, 2, 4]).unwrap();
        assert!(normalize_quadruple(&none).unwrap().is_empty());
        assert!(matches!(
            normalize_quadruple(&ZnSet::new(9, [0, 1, 2, 4]).unwrap()),
            Err(Error::OddModulus(9))
        ));
        assert!(matches!(
            normalize_quadruple(&ZnSet::new(8, [0, 2, 4, 6]).unwrap()),
            Err(Error::Disconnected { .. })
        ));
    }

    #[test]
    fn pair_through_zero() {
        // {0, 4, 1, 5} mod 8: at the identity only {1, 5} can play {v, v+m}
        let s = ZnSet::new(8, [0, 1, 4, 5]).unwrap();
        let all = normalize_quadruple(&s).unwrap();
        let ids: Vec<Quadruple> = all
            .iter()
            .filter(|(_, w)| *w == AffineWitness::IDENTITY)
            .map(|(q, _)| *q)
            .collect();
        assert_eq!(ids, vec![q(8, 4, 1)]);
        // translating by -1 gives {0, 3, 4, 7}: v = 3, u = 4
        assert!(all.contains(&(q(8, 4, 3), AffineWitness { a: 1, b: 7 })));
    }
}
