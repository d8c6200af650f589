use serde::Serialize;

use crate::error::{Error, Result};
use crate::haar::{affine_isomorphism, build_haar, HaarGraph};
use crate::perm::Perm;
use crate::zn::{self, AffineWitness, ZnSet};

use super::egroup::xi_witness;
use super::quad::{condition2_holds, normalize_quadruple, Quadruple};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Route {
    Affine,
    Exceptional,
    None,
}

/// Data of an exceptional isomorphism: `a1·X + b1 = {0,u,v,v+m}` and
/// `a2·Y + b2 = {0,u+m,v,v+m}` where `(X, Y)` is `(S, T)` for orientation
/// 0 and `(T, S)` for orientation 1.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct ExceptionalWitness {
    pub a1: u32,
    pub b1: u32,
    pub a2: u32,
    pub b2: u32,
    pub orientation: u8,
    pub quadruple: Quadruple,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IsoDecision {
    pub isomorphic: bool,
    pub route: Route,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub affine: Option<AffineWitness>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub exceptional: Option<ExceptionalWitness>,
    /// Explicit isomorphism `H(Z_n, S) → H(Z_n, T)`, edge-checked.
    pub isomorphism: Option<Perm>,
}

fn check_input(s: &ZnSet, t: &ZnSet) -> Result<(HaarGraph, HaarGraph)> {
    if s.modulus() != t.modulus() {
        return Err(Error::ModulusMismatch(s.modulus(), t.modulus()));
    }
    for x in [s, t] {
        if x.len() != 4 {
            return Err(Error::BadValency(x.len()));
        }
    }
    let gs = build_haar(s)?;
    let gt = build_haar(t)?;
    for (x, g) in [(s, &gs), (t, &gt)] {
        if !g.is_connected() {
            return Err(Error::Disconnected {
                n: x.modulus(),
                set: x.to_string(),
            });
        }
    }
    Ok((gs, gt))
}

/// Least exceptional witness for the ordered pair `(x, y)`.
fn exceptional_for(x: &ZnSet, y: &ZnSet, orientation: u8) -> Result<Option<ExceptionalWitness>> {
    let mut best: Option<ExceptionalWitness> = None;
    for (q, w1) in normalize_quadruple(x)? {
        if !condition2_holds(&q) {
            continue;
        }
        if let Some(w2) = zn::affinely_equivalent(y, &q.partner_set())? {
            let cand = ExceptionalWitness {
                a1: w1.a,
                b1: w1.b,
                a2: w2.a,
                b2: w2.b,
                orientation,
                quadruple: q,
            };
            if best.is_none_or(|b| cand < b) {
                best = Some(cand);
            }
        }
    }
    Ok(best)
}

/// The isomorphism `H(S) → H(T)` built from an exceptional witness:
/// the affine map onto the normal form, then `ξ`, then back from the
/// partner form.
pub fn exceptional_isomorphism(w: &ExceptionalWitness) -> Result<Perm> {
    let n = w.quadruple.n;
    let first = affine_isomorphism(n, AffineWitness { a: w.a1, b: w.b1 })?;
    let last = affine_isomorphism(n, AffineWitness { a: w.a2, b: w.b2 })?.inverse();
    let f = first.then(&xi_witness(&w.quadruple)?).then(&last);
    Ok(if w.orientation == 0 { f } else { f.inverse() })
}

/// Decides `H(Z_n, S) ≅ H(Z_n, T)` for connected 4-valent Haar graphs.
pub fn decide_iso_valency4(s: &ZnSet, t: &ZnSet) -> Result<IsoDecision> {
    let (gs, gt) = check_input(s, t)?;
    let n = s.modulus();
    if let Some(w) = zn::affinely_equivalent(s, t)? {
        let f = affine_isomorphism(n, w)?;
        assert!(gs.maps_onto(&f, &gt), "affine witness fails the edge check");
        return Ok(IsoDecision {
            isomorphic: true,
            route: Route::Affine,
            affine: Some(w),
            exceptional: None,
            isomorphism: Some(f),
        });
    }
    let not_iso = IsoDecision {
        isomorphic: false,
        route: Route::None,
        affine: None,
        exceptional: None,
        isomorphism: None,
    };
    if n % 2 == 1 {
        return Ok(not_iso);
    }
    let best = [exceptional_for(s, t, 0)?, exceptional_for(t, s, 1)?]
        .into_iter()
        .flatten()
        .min_by_key(|w| (w.a1, w.b1, w.a2, w.b2, w.orientation));
    let Some(w) = best else {
        return Ok(not_iso);
    };
    let f = exceptional_isomorphism(&w)?;
    assert!(gs.maps_onto(&f, &gt), "exceptional witness fails the edge check");
    Ok(IsoDecision {
        isomorphic: true,
        route: Route::Exceptional,
        affine: None,
        exceptional: Some(w),
        isomorphism: Some(f),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(n: u32, e: &[u32]) -> ZnSet {
        ZnSet::new(n, e.iter().copied()).unwrap()
    }

    #[test]
    fn worked_examples() {
        let d = decide_iso_valency4(&set(8, &[0, 1, 2, 5]), &set(8, &[0, 1, 5, 6])).unwrap();
        assert!(d.isomorphic);
        assert_eq!(d.route, Route::Exceptional);
        let w = d.exceptional.unwrap();
        assert_eq!((w.quadruple.u, w.quadruple.v), (2, 1));

        let d = decide_iso_valency4(&set(10, &[0, 1, 3, 4]), &set(10, &[0, 1, 3, 4])).unwrap();
        assert_eq!(d.route, Route::Affine);
        assert_eq!(d.affine, Some(AffineWitness::IDENTITY));

        let d = decide_iso_valency4(&set(10, &[0, 1, 3, 4]), &set(10, &[0, 1, 2, 4])).unwrap();
        assert!(!d.isomorphic);
        assert_eq!(d.route, Route::None);
    }

    #[test]
    fn precondition_errors() {
        assert_eq!(
            decide_iso_valency4(&set(8, &[0, 1, 2]), &set(8, &[0, 1, 2, 5])),
            Err(Error::BadValency(3))
        );
        assert!(matches!(
            decide_iso_valency4(&set(8, &[0, 2, 4, 6]), &set(8, &[0, 1, 2, 5])),
            Err(Error::Disconnected { .. })
        ));
        assert_eq!(
            decide_iso_valency4(&set(8, &[0, 1, 2, 5]), &set(10, &[0, 1, 2, 5])),
            Err(Error::ModulusMismatch(8, 10))
        );
    }

    #[test]
    fn decision_is_symmetric() {
        let s = set(16, &[0, 1, 2, 9]);
        for t in zn::affine_classes(16, 4) {
            if !build_haar(&t).unwrap().is_connected() {
                continue;
            }
            let ab = decide_iso_valency4(&s, &t).unwrap();
            let ba = decide_iso_valency4(&t, &s).unwrap();
            assert_eq!(ab.isomorphic, ba.isomorphic, "{t}");
        }
    }
}
