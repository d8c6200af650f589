use serde::Serialize;

use crate::auto::automorphism_group;
use crate::bicyclic::{bicyclic_subgroups_in, is_bicyclic_element};
use crate::error::{Error, Result};
use crate::haar::{build_haar, canonical_c, canonical_d, phi};
use crate::perm::{Perm, PermGroup};
use crate::zn::{self, AffineWitness, ZnSet};

use super::egroup::{build_e_group, xi_witness};
use super::quad::{condition2_holds, normalize_quadruple, Quadruple};

fn rem(a: i64, m: u32) -> i64 {
    a.rem_euclid(m as i64)
}

fn require_regime(q: &Quadruple) -> Result<()> {
    if 2 * q.u == q.m {
        return Err(Error::Precondition(format!(
            "2u = m at {q}: use the n = 4u classification"
        )));
    }
    if !q.divisibility_holds() {
        return Err(Error::Precondition(format!("{q} needs 1 < u < m and u | m")));
    }
    Ok(())
}

/// Number of bicyclic subgroups: `2^{u−2}` if `u` is even and `m/u` odd,
/// `2^{u−1}` otherwise.
pub fn count_bicyclic_expected(q: &Quadruple) -> Result<u128> {
    require_regime(q)?;
    let (u, k) = (q.u, q.m / q.u);
    Ok(if u % 2 == 0 && k % 2 == 1 {
        1 << (u - 2)
    } else {
        1 << (u - 1)
    })
}

/// `|A : N_A(C)|`.
pub fn normalizer_index_expected(q: &Quadruple) -> Result<u128> {
    require_regime(q)?;
    let (u, v, k) = (q.u, q.v, q.m / q.u);
    let branch = u % 2 == 0 && (rem(u as i64 - 2 * v as i64, k) != 0 || rem((u / 2) as i64 - v as i64, k) == 0);
    Ok(if branch { 1 << (u - 2) } else { 1 << (u - 1) })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct StabilizerCase {
    pub case: u8,
    pub order: u128,
}

/// Case 1 (`u ≢ 2v mod m/u`): `|A_{0⁺}| = 2^{u−1}`; case 2: `2^u`.
pub fn stabilizer_structure_expected(q: &Quadruple) -> Result<StabilizerCase> {
    require_regime(q)?;
    let (u, v, k) = (q.u, q.v, q.m / q.u);
    Ok(if rem(u as i64 - 2 * v as i64, k) != 0 {
        StabilizerCase {
            case: 1,
            order: 1 << (u - 1),
        }
    } else {
        StabilizerCase { case: 2, order: 1 << u }
    })
}

/// The three structural hypotheses on `{0, u, v, v+m}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Hypotheses {
    /// `⟨u, v⟩ = Z_n`
    pub generates: bool,
    /// `1 < u < m`, `u | m`
    pub divides: bool,
    /// `A_{0⁺}` fixes `{0⁻, u⁻}` setwise
    pub stabilizer_fixes_pair: bool,
}

impl Hypotheses {
    pub fn all(&self) -> bool {
        self.generates && self.divides && self.stabilizer_fixes_pair
    }
}

pub fn hypotheses(q: &Quadruple, group: &PermGroup) -> Hypotheses {
    let n = q.n;
    let stab = group.point_stabilizer(0);
    let pair = [n, n + q.u];
    Hypotheses {
        generates: zn::subgroup_index(n, &[q.u, q.v]) == n,
        divides: q.divisibility_holds(),
        stabilizer_fixes_pair: stab.generators().iter().all(|g| g.maps_set_onto(&pair)),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FormulaReport {
    pub quadruple: Quadruple,
    pub group_order: u128,
    pub bicyclic: (u128, u128),
    pub normalizer_index: (u128, u128),
    pub stabilizer: (u128, u128),
    pub case: u8,
}

impl FormulaReport {
    pub fn holds(&self) -> bool {
        self.bicyclic.0 == self.bicyclic.1
            && self.normalizer_index.0 == self.normalizer_index.1
            && self.stabilizer.0 == self.stabilizer.1
    }
}

/// Computed versus predicted counts, pairs ordered `(computed, expected)`.
/// `None` when the instance is outside the formulas' hypotheses.
pub fn formula_report(q: &Quadruple, cap: u128) -> Result<Option<FormulaReport>> {
    if require_regime(q).is_err() {
        return Ok(None);
    }
    let g = build_haar(&q.set())?;
    let group = automorphism_group(&g);
    if !hypotheses(q, &group).all() {
        return Ok(None);
    }
    let c = PermGroup::new(2 * q.n as usize, vec![canonical_c(q.n)]);
    let normalizer = group.normalizer_of(&c, cap)?;
    let catalog = bicyclic_subgroups_in(&group, q.n, cap)?;
    let expected_case = stabilizer_structure_expected(q)?;
    Ok(Some(FormulaReport {
        quadruple: *q,
        group_order: group.order(),
        bicyclic: (catalog.len() as u128, count_bicyclic_expected(q)?),
        normalizer_index: (group.order() / normalizer.order(), normalizer_index_expected(q)?),
        stabilizer: (group.point_stabilizer(0).order(), expected_case.order),
        case: expected_case.case,
    }))
}

/// All quadruples over `Z_n` with `1 < u < m`, `u | m`, `2u ≠ m`, one per
/// set (`v < m`).
pub fn regime_quadruples(n: u32) -> Vec<Quadruple> {
    if n % 2 == 1 || n < 4 {
        return Vec::new();
    }
    let m = n / 2;
    let mut out = Vec::new();
    for u in 2..m {
        if !m.is_multiple_of(u) || 2 * u == m {
            continue;
        }
        for v in 1..m {
            if let Ok(q) = Quadruple::new(n, u, v) {
                out.push(q);
            }
        }
    }
    out
}

/// `S_1(d) = {0, u, d, d+2u}` over `Z_{4u}`.
pub fn s1(u: u32, d: u32) -> Result<ZnSet> {
    ZnSet::new(4 * u, [0, u, d, d + 2 * u])
}

/// `S_2(d) = {0, 3u, d, d+2u}` over `Z_{4u}`.
pub fn s2(u: u32, d: u32) -> Result<ZnSet> {
    ZnSet::new(4 * u, [0, 3 * u, d, d + 2 * u])
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct QuarterClass {
    pub d: u32,
    pub family: u8,
}

/// For `S` normalizing to `{0, u, v, v+m}` with `n = 4u`: which `S_i(d)`
/// it is affinely equivalent to, found by scaling `v` down to `d = gcd(n, v)`.
pub fn classify_quarter_form(s: &ZnSet) -> Result<QuarterClass> {
    let n = s.modulus();
    if !n.is_multiple_of(4) {
        return Err(Error::Precondition(format!("{n} is not of the form 4u")));
    }
    let u = n / 4;
    let Some((q, _)) = normalize_quadruple(s)?
        .into_iter()
        .find(|(q, _)| q.u == u || q.u == 3 * u)
    else {
        return Err(Error::Precondition(format!("{s} has no normal form with 2u = m")));
    };
    let d = zn::gcd(n as u64, q.v as u64) as u32;
    if ![1, 2, 4].contains(&d) {
        return Err(Error::Precondition(format!("gcd(n, v) = {d}")));
    }
    let v1 = zn::units(n)?
        .into_iter()
        .find(|&a| zn::mul_mod(a, d, n) == q.v)
        .expect("v / d lifts to a unit");
    let scaled = zn::mul_mod(zn::inverse_mod(v1, n).expect("unit"), q.u, n);
    let class = QuarterClass {
        d,
        family: if scaled == u { 1 } else { 2 },
    };
    let target = if class.family == 1 { s1(u, d)? } else { s2(u, d)? };
    if zn::affinely_equivalent(s, &target)?.is_none() {
        return Err(Error::Precondition(format!(
            "{s} is not affinely equivalent to {target}"
        )));
    }
    Ok(class)
}

/// Fixes `x^ε` for `x ∈ [0,u) ∪ [2u,3u)` and adds `2u` otherwise; maps
/// `H(Z_{4u}, S_1(1))` onto `H(Z_{4u}, S_2(1))`.
pub fn quarter_swap_isomorphism(u: u32) -> Result<Perm> {
    if u < 2 {
        return Err(Error::Precondition("u must be at least 2".into()));
    }
    let n = 4 * u;
    let f = Perm::from_fn(2 * n as usize, |p| {
        let (x, base) = if p < n { (p, 0) } else { (p - n, n) };
        let fixed = x < u || (2 * u..3 * u).contains(&x);
        if fixed {
            p
        } else {
            (x + 2 * u) % n + base
        }
    })?;
    let from = build_haar(&s1(u, 1)?)?;
    let to = build_haar(&s2(u, 1)?)?;
    if !from.maps_onto(&f, &to) {
        return Err(Error::Precondition(format!("f fails the edge check at u = {u}")));
    }
    Ok(f)
}

/// `r_d` with `r_d·S_1(1) + u = S_1(d)`, `u` odd, `d ∈ {2, 4}`.
pub fn quarter_scaling_constant(u: u32, d: u32) -> Result<u32> {
    if u.is_multiple_of(2) {
        return Err(Error::Precondition(format!("u = {u} must be odd")));
    }
    let n = 4 * u;
    let r = match (d, u % 4) {
        (2, 1) => 2 + u,
        (2, _) => 2 + 3 * u,
        (4, 3) => 4 + u,
        (4, _) => 4 + 3 * u,
        _ => return Err(Error::Precondition(format!("d = {d} must be 2 or 4"))),
    } % n;
    let image = zn::apply_affine(&s1(u, 1)?, AffineWitness { a: r, b: u })?;
    if image != s1(u, d)? {
        return Err(Error::Precondition(format!("r_{d} = {r} fails at u = {u}")));
    }
    Ok(r)
}

/// The affine relations between the `n = 4u` families: `(2u+1)·S_1(d) =
/// S_2(d)` for odd `u`, `(u+1)·S_1(1) + 3u = S_2(1)` for `4 | u`, and no
/// affine map from `S_1(1)` to `S_2(1)` for `u ≡ 2 (mod 4)`.
pub fn quarter_family_identities(u: u32) -> Result<bool> {
    if u < 2 {
        return Err(Error::Precondition("u must be at least 2".into()));
    }
    let n = 4 * u;
    Ok(match u % 4 {
        1 | 3 => {
            let a = 2 * u + 1;
            let mut ok = true;
            for d in [1, 2, 4] {
                ok &= zn::apply_affine(&s1(u, d)?, AffineWitness { a, b: 0 })? == s2(u, d)?;
            }
            ok
        }
        0 => {
            zn::apply_affine(
                &s1(u, 1)?,
                AffineWitness {
                    a: (u + 1) % n,
                    b: 3 * u,
                },
            )? == s2(u, 1)?
        }
        _ => zn::affinely_equivalent(&s1(u, 1)?, &s2(u, 1)?)?.is_none(),
    })
}

/// For `u ≡ 2v (mod m/u)`: the involution
/// `(vi+uj)⁺ ↦ (vi−(i+j)u)⁺`, `(vi+uj)⁻ ↦ (vi−(i+j−1)u)⁻`,
/// checked to be an automorphism fixing `0⁺` and swapping `0⁻`, `u⁻`.
pub fn pair_swapping_automorphism(q: &Quadruple) -> Result<Perm> {
    require_regime(q)?;
    let Quadruple { n, m, u, v } = *q;
    if rem(u as i64 - 2 * v as i64, m / u) != 0 {
        return Err(Error::Precondition(format!("{q}: u is not 2v mod m/u")));
    }
    let nn = n as i64;
    let mut images = vec![u32::MAX; 2 * n as usize];
    for i in 0..u as i64 {
        for j in 0..(n / u) as i64 {
            let x = (v as i64 * i + u as i64 * j).rem_euclid(nn) as usize;
            let plus = (v as i64 * i - (i + j) * u as i64).rem_euclid(nn) as u32;
            let minus = (v as i64 * i - (i + j - 1) * u as i64).rem_euclid(nn) as u32;
            images[x] = plus;
            images[x + n as usize] = minus + n;
        }
    }
    let g = Perm::from_images(images)?;
    let graph = build_haar(&q.set())?;
    let ok = graph.is_automorphism(&g) && g.apply(0) == 0 && g.apply(n) == n + u && g.apply(n + u) == n;
    if !ok {
        return Err(Error::Precondition(format!("case-2 generator fails at {q}")));
    }
    Ok(g)
}

/// `φ_{r,s,0}` is an involution other than the identity.
pub fn is_nontrivial_involution(n: u32, r: u32, s: u32) -> bool {
    zn::is_unit(r, n) && r % n != 1 && zn::mul_mod(r, r, n) == 1 % n && zn::mul_mod((r + 1) % n, s % n, n) == 0
}

/// `8 | n`, `r = n/2 + 1`, `s ∈ {0, n/2}`.
pub fn extra_bicyclic_predicted(n: u32, r: u32, s: u32) -> bool {
    n.is_multiple_of(8) && r % n == n / 2 + 1 && (s.is_multiple_of(n) || s % n == n / 2)
}

/// Whether `⟨c, d, φ_{r,s,0}⟩` has a bicyclic subgroup other than `⟨c⟩`.
pub fn has_extra_bicyclic(n: u32, r: u32, s: u32, cap: u128) -> Result<bool> {
    if !is_nontrivial_involution(n, r, s) {
        return Err(Error::Precondition(format!(
            "phi_({r},{s},0) is not a non-trivial involution mod {n}"
        )));
    }
    let group = PermGroup::new(2 * n as usize, vec![canonical_c(n), canonical_d(n), phi(n, r, s, 0)?]);
    Ok(bicyclic_subgroups_in(&group, n, cap)?.len() > 1)
}

/// All `(r, s)` to which the lemma applies at modulus `n`.
pub fn nontrivial_involutions(n: u32) -> Vec<(u32, u32)> {
    let Ok(units) = zn::units(n) else {
        return Vec::new();
    };
    units
        .into_iter()
        .flat_map(|r| (0..n).map(move |s| (r, s)))
        .filter(|&(r, s)| is_nontrivial_involution(n, r, s))
        .collect()
}

/// The group induced on the pairs `{x^ε, (x+m)^ε}`, written on
/// `H(Z_m, η(S))` points; `None` if the pairs are not blocks.
pub fn quotient_on_pairs(group: &PermGroup, n: u32) -> Option<PermGroup> {
    let m = n / 2;
    let to_block = |p: u32| if p < n { p % m } else { (p - n) % m + m };
    let mut gens = Vec::new();
    for g in group.generators() {
        let mut images = vec![0u32; 2 * m as usize];
        for p in 0..2 * n {
            let partner = if p < n { (p + m) % n } else { (p - n + m) % n + n };
            if to_block(g.apply(p)) != to_block(g.apply(partner)) {
                return None;
            }
            images[to_block(p) as usize] = to_block(g.apply(p));
        }
        gens.push(Perm::from_images(images).ok()?);
    }
    Some(PermGroup::new(2 * m as usize, gens))
}

/// In case 2, the induced group on pairs has order `4m` and contains an
/// element fixing `0⁺` with `0⁻ ↦ (u mod m)⁻`, i.e. `φ_{r, 0, u mod m}` for
/// a unit `r` of `Z_m`.
pub fn quotient_structure_holds(q: &Quadruple, group: &PermGroup) -> Result<bool> {
    let Some(quotient) = quotient_on_pairs(group, q.n) else {
        return Ok(false);
    };
    let m = q.m;
    if quotient.order() != 4 * m as u128 {
        return Ok(false);
    }
    for r in zn::units(m)? {
        if quotient.contains(&phi(m, r, 0, q.u % m)?) {
            return Ok(true);
        }
    }
    Ok(false)
}

/// `(c^i e_I)^u = c^{u(i + (m/u)|I|)}` and `⟨c^i e_I⟩` bicyclic iff
/// `gcd(i + (m/u)|I|, 2m/u) = 1`, for all `i` prime to `m` and
/// `I ⊆ {1, …, u−1}`. Returns the number of failures.
pub fn egroup_identities(q: &Quadruple) -> Result<usize> {
    let e = build_e_group(q)?;
    let Quadruple { n, m, u, .. } = *q;
    let c = canonical_c(n);
    let mut failures = 0;
    for i in 1..n {
        if zn::gcd(i as u64, m as u64) != 1 {
            continue;
        }
        let ci = c.pow(i as u64);
        for mask in 0u32..1 << (u - 1) {
            let subset: Vec<usize> = (1..u as usize).filter(|k| mask >> (k - 1) & 1 == 1).collect();
            let x = ci.then(&e.product(&subset));
            let weight = (i + (m / u) * subset.len() as u32) as u64;
            let power_ok = x.pow(u as u64) == c.pow(u as u64 * weight);
            let criterion = zn::gcd(weight, (2 * m / u) as u64) == 1;
            if !power_ok || criterion != is_bicyclic_element(&x, n) {
                failures += 1;
            }
        }
    }
    Ok(failures)
}

#[derive(Clone, Debug, Serialize)]
pub struct LemmaCheck {
    pub name: &'static str,
    pub instances: usize,
    pub failures: Vec<String>,
}

impl LemmaCheck {
    fn new(name: &'static str) -> Self {
        LemmaCheck {
            name,
            instances: 0,
            failures: Vec::new(),
        }
    }

    fn record(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.instances += 1;
        if !ok {
            self.failures.push(what());
        }
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Runs every verifier on all applicable instances with `n ≤ n_max`.
pub fn verify_all(n_max: u32, cap: u128) -> Result<Vec<LemmaCheck>> {
    let mut formulas = LemmaCheck::new("bicyclic count, normalizer index, stabilizer order");
    let mut case2 = LemmaCheck::new("case-2 stabilizer generator");
    let mut quotient = LemmaCheck::new("case-2 quotient on pairs");
    let mut egroup = LemmaCheck::new("E-group power identity and gcd criterion");
    let mut xi = LemmaCheck::new("xi witness");
    let mut fig = LemmaCheck::new("n = 4u isomorphism f");
    let mut rd = LemmaCheck::new("constants r_d");
    let mut ident = LemmaCheck::new("n = 4u affine identities");
    let mut classify = LemmaCheck::new("n = 4u classification into S_1(d), S_2(d)");
    let mut involutions = LemmaCheck::new("involutions phi_(r,s,0)");

    for n in (4..=n_max).step_by(2) {
        for q in regime_quadruples(n) {
            egroup.record(egroup_identities(&q)? == 0, || q.to_string());
            if let Some(rep) = formula_report(&q, cap)? {
                formulas.record(rep.holds(), || format!("{q}: {rep:?}"));
                if rep.case == 2 {
                    case2.record(pair_swapping_automorphism(&q).is_ok(), || q.to_string());
                    let group = automorphism_group(&build_haar(&q.set())?);
                    quotient.record(quotient_structure_holds(&q, &group)?, || q.to_string());
                }
            }
        }
        let m = n / 2;
        for u in 1..n {
            for v in 1..m {
                if let Ok(q) = Quadruple::new(n, u, v) {
                    if condition2_holds(&q) {
                        xi.record(xi_witness(&q).is_ok(), || q.to_string());
                    }
                }
            }
        }
        if n % 4 == 0 && n >= 8 {
            let u = n / 4;
            fig.record(quarter_swap_isomorphism(u).is_ok(), || format!("u = {u}"));
            ident.record(quarter_family_identities(u)?, || format!("u = {u}"));
            for set in zn::affine_classes(n, 4) {
                if zn::subgroup_index(n, &set.differences()) != n {
                    continue;
                }
                let in_regime = normalize_quadruple(&set)?.iter().any(|(q, _)| 2 * q.u % n == q.m);
                if in_regime {
                    classify.record(classify_quarter_form(&set).is_ok(), || set.to_string());
                }
            }
            if u % 2 == 1 {
                for d in [2, 4] {
                    rd.record(quarter_scaling_constant(u, d).is_ok(), || format!("u = {u}, d = {d}"));
                }
            }
        }
    }
    for n in 2..=n_max {
        for (r, s) in nontrivial_involutions(n) {
            let verified = has_extra_bicyclic(n, r, s, cap)?;
            involutions.record(verified == extra_bicyclic_predicted(n, r, s), || {
                format!("n = {n}, r = {r}, s = {s}")
            });
        }
    }
    Ok(vec![
        formulas,
        case2,
        quotient,
        egroup,
        xi,
        fig,
        rd,
        ident,
        classify,
        involutions,
    ])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::perm::DEFAULT_CAP;

    fn q(n: u32, u: u32, v: u32) -> Quadruple {
        Quadruple::new(n, u, v).unwrap()
    }

    #[test]
    fn formula_values() {
        assert_eq!(count_bicyclic_expected(&q(12, 2, 1)).unwrap(), 1);
        assert_eq!(count_bicyclic_expected(&q(16, 2, 1)).unwrap(), 2);
        assert_eq!(count_bicyclic_expected(&q(24, 2, 1)).unwrap(), 2);
        assert_eq!(normalizer_index_expected(&q(12, 2, 1)).unwrap(), 1);
        assert_eq!(
            stabilizer_structure_expected(&q(16, 2, 1)).unwrap(),
            StabilizerCase { case: 2, order: 4 }
        );
        assert_eq!(
            stabilizer_structure_expected(&q(12, 2, 5)).unwrap(),
            StabilizerCase { case: 1, order: 2 }
        );
        assert!(count_bicyclic_expected(&q(12, 3, 1)).is_err());
    }

    #[test]
    fn computed_values_match_at_small_instances() {
        for (n, u, v) in [(12, 2, 1), (16, 2, 1), (20, 2, 1), (24, 2, 1)] {
            let rep = formula_report(&q(n, u, v), DEFAULT_CAP).unwrap().unwrap();
            assert!(rep.holds(), "{rep:?}");
        }
        // stabilizer moves {0-, 2-} off itself
        assert_eq!(formula_report(&q(12, 2, 5), DEFAULT_CAP).unwrap(), None);
        // normalizer index at n = 16, u = 2, v = 1 is 2^{u-2} = 1
        let rep = formula_report(&q(16, 2, 1), DEFAULT_CAP).unwrap().unwrap();
        assert_eq!(rep.normalizer_index, (1, 1));
    }

    #[test]
    fn quarter_form_examples() {
        let set = |e: &[u32]| ZnSet::new(12, e.iter().copied()).unwrap();
        assert_eq!(
            classify_quarter_form(&set(&[0, 3, 1, 7])).unwrap(),
            QuarterClass { d: 1, family: 1 }
        );
        assert_eq!(
            classify_quarter_form(&set(&[0, 9, 1, 7])).unwrap(),
            QuarterClass { d: 1, family: 2 }
        );
        assert_eq!(
            classify_quarter_form(&set(&[0, 3, 2, 8])).unwrap(),
            QuarterClass { d: 2, family: 1 }
        );
        assert_eq!(quarter_scaling_constant(3, 2).unwrap(), 11);
        assert_eq!(quarter_scaling_constant(3, 4).unwrap(), 7);
        assert_eq!(quarter_scaling_constant(5, 2).unwrap(), 7);
        assert!(quarter_scaling_constant(4, 2).is_err());
        let f = quarter_swap_isomorphism(2).unwrap();
        assert_eq!(f.cycle_lengths().len(), 8 + 4);
        for u in 2..=8 {
            let f = quarter_swap_isomorphism(u).unwrap();
            assert!(f.then(&f).is_identity());
        }
    }

    #[test]
    fn involution_examples() {
        assert!(extra_bicyclic_predicted(16, 9, 0));
        assert!(has_extra_bicyclic(16, 9, 0, DEFAULT_CAP).unwrap());
        assert!(is_nontrivial_involution(16, 9, 4) || !extra_bicyclic_predicted(16, 9, 4));
        assert!(!extra_bicyclic_predicted(12, 7, 0));
        assert!(!has_extra_bicyclic(12, 7, 0, DEFAULT_CAP).unwrap());
    }

    #[test]
    fn case2_generator_n16() {
        let g = pair_swapping_automorphism(&q(16, 2, 1)).unwrap();
        assert!(g.then(&g).is_identity());
    }

    #[test]
    fn two_classes_when_the_base_is_larger() {
        // 2^{u-1} bicyclic subgroups, half of them conjugate to C
        for n in (8..=32).step_by(8) {
            for q in regime_quadruples(n).into_iter().filter(condition2_holds) {
                let group = automorphism_group(&build_haar(&q.set()).unwrap());
                let catalog = bicyclic_subgroups_in(&group, n, DEFAULT_CAP).unwrap();
                assert_eq!(catalog.len(), 1 << (q.u - 1), "{q}");
                let sizes: Vec<usize> = catalog.classes().iter().map(Vec::len).collect();
                assert_eq!(sizes, vec![1 << (q.u - 2); 2], "{q}");
            }
        }
    }
}
