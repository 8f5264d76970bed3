//! Explicit families of sum sets and partial sum sets.
//!
//! Every generator recomputes a [`Certificate`] for its output and fails with
//! [`Error::Verification`] if the recomputed parameters differ from the claim.

use std::collections::BTreeMap;
use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Serialize, Serializer};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::group::{
    cyclic, direct_product, dihedral, dstar, elementary_abelian, frobenius_subgroup, generalized_dihedral,
    FieldTable, FiniteGroup, Subset,
};
use crate::regularity::{maximal_skew_test, type_classify, Certificate, PssParams, SetType};

#[derive(Debug, Clone)]
pub struct ConstructionResult {
    pub group: Arc<FiniteGroup>,
    pub set: Subset,
    pub claimed_params: PssParams,
    pub certificate: Certificate,
    pub theorem_tag: String,
    /// Every free choice made, keyed by name.
    pub choices: BTreeMap<String, Value>,
}

impl Serialize for ConstructionResult {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        json!({
            "theorem_tag": self.theorem_tag,
            "group_spec": self.group.spec(),
            "set": self.group.set_labels(&self.set),
            "claimed_params": self.claimed_params,
            "choices": self.choices,
            "certificate": self.certificate,
        })
        .serialize(serializer)
    }
}

/// A partial sum set together with its two one-element completions.
#[derive(Debug, Clone, Serialize)]
pub struct Completion {
    pub partial: ConstructionResult,
    pub completions: [ConstructionResult; 2],
}

fn finish(
    group: &Arc<FiniteGroup>,
    set: Subset,
    claimed: PssParams,
    tag: &str,
    choices: BTreeMap<String, Value>,
) -> Result<ConstructionResult> {
    let certificate = Certificate::issue(group, &set)?;
    if certificate.params != Some(claimed) {
        let got = certificate.params.map_or("no parameters".to_string(), |p| p.to_string());
        return Err(Error::Verification(format!("{tag}: claimed {claimed}, certificate shows {got}")));
    }
    Ok(ConstructionResult {
        group: Arc::clone(group),
        set,
        claimed_params: claimed,
        certificate,
        theorem_tag: tag.to_string(),
        choices,
    })
}

fn expect_type(r: &ConstructionResult, n: &Subset, want: SetType) -> Result<()> {
    let got = type_classify(&r.group, &r.set, n)?;
    if got != want {
        return Err(Error::Verification(format!("{}: expected {want:?}, found {got:?}", r.theorem_tag)));
    }
    Ok(())
}

fn labels_value(g: &FiniteGroup, s: &Subset) -> Value {
    json!(g.set_labels(s))
}

fn choices(pairs: impl IntoIterator<Item = (&'static str, Value)>) -> BTreeMap<String, Value> {
    pairs.into_iter().map(|(k, v)| (k.to_string(), v)).collect()
}

/// `P ⊂ K` a `(v, k, β−1, β)` partial sum set with `1 ∉ P` and
/// `|P ∩ P⁻¹| = β`, lifted to `P ∪ Pz` in `K × C₂` and completed by `1` or `z`.
pub fn lift2(k: &Arc<FiniteGroup>, p: &Subset, beta: u64) -> Result<Completion> {
    k.check_subset(p)?;
    if beta == 0 {
        return Err(Error::Precondition("β must be positive".into()));
    }
    let cert = Certificate::issue(k, p)?;
    let want = PssParams::new(k.order() as u64, p.len() as u64, beta - 1, beta);
    if cert.params != Some(want) {
        return Err(Error::Precondition(format!("P is not a {want} partial sum set")));
    }
    if p.contains(0) {
        return Err(Error::Precondition("P contains the identity".into()));
    }
    let s_inv = cert.classification.s_inv;
    if s_inv != beta {
        return Err(Error::Precondition(format!("|P ∩ P⁻¹| = {s_inv}, not β = {beta}")));
    }
    let c2 = cyclic(2)?;
    let g = Arc::new(direct_product(k, &c2)?);
    let z = 1;
    let s = Subset::from_indices(&g, p.iter().flat_map(|x| [2 * x, 2 * x + 1]))?;
    let (v, kk) = (k.order() as u64, p.len() as u64);
    let base = choices([("input_group", json!(k.spec())), ("input_set", labels_value(k, p)), ("beta", json!(beta))]);
    let partial = finish(&g, s.clone(), PssParams::new(2 * v, 2 * kk, 2 * beta - 2, 2 * beta), "2-lift", base.clone())?;
    let n = Subset::from_indices(&g, [0, z])?;
    let complete = |extra: usize| -> Result<ConstructionResult> {
        let mut ch = base.clone();
        ch.insert("adjoined".into(), json!(g.label(extra)));
        let r = finish(&g, s.with(extra), PssParams::sum_set(2 * v, 2 * kk + 1, 2 * beta), "2-lift", ch)?;
        expect_type(&r, &n, SetType::Type2)?;
        Ok(r)
    };
    Ok(Completion { completions: [complete(0)?, complete(z)?], partial })
}

/// `(S ∖ N)/N` for a type 2 `(2v, 2k+1, 2β)` sum set `S`.
pub fn project2(g: &FiniteGroup, s: &Subset, n: &Subset) -> Result<ConstructionResult> {
    if type_classify(g, s, n)? != SetType::Type2 {
        return Err(Error::Precondition(format!("{} is not type 2", g.format_set(s))));
    }
    let cert = Certificate::issue(g, s)?;
    let p = match cert.params {
        Some(p) if p.is_sum_set() && p.mu % 2 == 0 && p.mu > 0 => p,
        _ => return Err(Error::Precondition("input is not a sum set with positive even μ".into())),
    };
    let q = g.quotient(n)?;
    let h = Arc::new(q.group);
    let image = Subset::from_indices(&h, s.iter().filter(|&x| !n.contains(x)).map(|x| q.projection[x]))?;
    let beta = p.mu / 2;
    let claimed = PssParams::new(p.v / 2, (p.k - 1) / 2, beta - 1, beta);
    let ch = choices([("input_group", json!(g.spec())), ("input_set", labels_value(g, s))]);
    finish(&h, image, claimed, "2-project", ch)
}

/// `{x, …, x^{n/2−1}}` as exponents: the greedy maximal skew set in `C_n`
/// meeting each nontrivial coset of `⟨x^{n/2}⟩` once.
pub fn maximal_skew_with_coset_property(n: usize) -> Result<Vec<usize>> {
    if n < 4 || n % 2 == 1 {
        return Err(Error::InvalidParameter(format!("n = {n} must be even and at least 4")));
    }
    let half = n / 2;
    let mut chosen = vec![false; n];
    let mut hit = vec![false; half];
    let mut out = Vec::new();
    for y in 1..n {
        if y == half || chosen[(n - y) % n] || hit[y % half] {
            continue;
        }
        chosen[y] = true;
        hit[y % half] = true;
        out.push(y);
    }
    Ok(out)
}

/// `M ∪ Mt ∪ {t}` and `M ∪ Mt ∪ {x^{n/2}t}` in `D_n`.
pub fn dihedral_type1(n: usize, m: Option<&[usize]>) -> Result<[ConstructionResult; 2]> {
    let canonical = maximal_skew_with_coset_property(n)?;
    let m = m.unwrap_or(&canonical);
    let cn = cyclic(n)?;
    let ms = Subset::from_indices(&cn, m.iter().copied())?;
    let half = n / 2;
    if !maximal_skew_test(&cn, &ms).unwrap_or(false) {
        return Err(Error::Precondition(format!("{} is not a maximal skew set", cn.format_set(&ms))));
    }
    let mut per_coset = vec![0; half];
    ms.iter().for_each(|y| per_coset[y % half] += 1);
    if per_coset[0] != 0 || per_coset[1..].iter().any(|&c| c != 1) {
        return Err(Error::Precondition("M must meet each nontrivial coset of ⟨x^{n/2}⟩ exactly once".into()));
    }
    let g = Arc::new(dihedral(n)?);
    let s = Subset::from_indices(&g, ms.iter().flat_map(|y| [y, y + n]))?;
    let center = g.center();
    let claimed = PssParams::sum_set(2 * n as u64, n as u64 - 1, (n as u64 - 2) / 2);
    let build = |extra: usize| -> Result<ConstructionResult> {
        let ch = choices([("skew_set", labels_value(&cn, &ms)), ("adjoined", json!(g.label(extra)))]);
        let r = finish(&g, s.with(extra), claimed, "dihedral type 1", ch)?;
        expect_type(&r, &center, SetType::Type1)?;
        Ok(r)
    };
    Ok([build(n)?, build(half + n)?])
}

/// One element from each inverse pair, the smaller index first.
pub fn canonical_maximal_skew(a: &FiniteGroup) -> Subset {
    let mut s = Subset::empty(a);
    for y in 0..a.order() {
        if a.element_order(y) > 2 && !s.contains(a.inv(y)) {
            s.insert(y);
        }
    }
    s
}

/// `M ∪ Mt` in `Dih A` for `A` abelian of odd order `m`, an
/// `(2m, m−1, (m−3)/2, (m−1)/2)` partial sum set.
pub fn generalized_dihedral_pss(a: &FiniteGroup, m: Option<&Subset>) -> Result<ConstructionResult> {
    let order = a.order();
    if order % 2 == 0 || order < 3 {
        return Err(Error::InvalidParameter(format!("A must have odd order at least 3, got {order}")));
    }
    let ms = match m {
        Some(m) => {
            a.check_subset(m)?;
            m.clone()
        }
        None => canonical_maximal_skew(a),
    };
    if !maximal_skew_test(a, &ms).unwrap_or(false) {
        return Err(Error::Precondition(format!("{} is not a maximal skew set", a.format_set(&ms))));
    }
    let g = Arc::new(generalized_dihedral(a)?);
    let s = Subset::from_indices(&g, ms.iter().flat_map(|y| [y, y + order]))?;
    let mm = order as u64;
    let claimed = PssParams::new(2 * mm, mm - 1, (mm - 3) / 2, (mm - 1) / 2);
    let ch = choices([("base_group", json!(a.spec())), ("skew_set", labels_value(a, &ms))]);
    let r = finish(&g, s, claimed, "generalized dihedral partial sum set", ch)?;
    if r.set.contains(0) || r.certificate.classification.s_inv != (mm - 1) / 2 {
        return Err(Error::Verification("output is not eligible for lifting".into()));
    }
    Ok(r)
}

/// Type 2 `(4m, 2m−1, m−1)` sum sets in `D_m × C₂`, `m` odd.
pub fn dihedral_type2(m: usize) -> Result<Completion> {
    if m % 2 == 0 || m < 3 {
        return Err(Error::InvalidParameter(format!("m = {m} must be odd and at least 3")));
    }
    let base = generalized_dihedral_pss(&cyclic(m)?, None)?;
    let mut out = lift2(&base.group, &base.set, (m as u64 - 1) / 2)?;
    for r in std::iter::once(&mut out.partial).chain(out.completions.iter_mut()) {
        r.theorem_tag = "dihedral type 2".into();
        r.choices.insert("skew_set".into(), base.choices["skew_set"].clone());
        r.choices.insert("dihedral_degree_mod_4".into(), json!((2 * m) % 4));
    }
    Ok(out)
}

/// `S* ∪ {1}` and `S* ∪ {t²}` in `D*_n`, where `S*` is the preimage of the
/// generalized dihedral partial sum set under `D*_n → D_n`.
pub fn dstar_sum_set(n: usize) -> Result<Completion> {
    if n % 2 == 0 || n < 3 {
        return Err(Error::InvalidParameter(format!("n = {n} must be odd and at least 3")));
    }
    let base = generalized_dihedral_pss(&cyclic(n)?, None)?;
    let g = Arc::new(dstar(n)?);
    // x^a t^e ↦ x^a t^e Z for e < 2
    let s = Subset::from_indices(&g, base.set.iter().flat_map(|y| [y, y + 2 * n]))?;
    let nn = n as u64;
    let ch = choices([("skew_set", base.choices["skew_set"].clone()), ("quotient_set", labels_value(&base.group, &base.set))]);
    let partial = finish(&g, s.clone(), PssParams::new(4 * nn, 2 * nn - 2, nn - 3, nn - 1), "dstar", ch.clone())?;
    let center = g.center();
    let complete = |extra: usize| -> Result<ConstructionResult> {
        let mut c = ch.clone();
        c.insert("adjoined".into(), json!(g.label(extra)));
        let r = finish(&g, s.with(extra), PssParams::sum_set(4 * nn, 2 * nn - 1, nn - 1), "dstar", c)?;
        expect_type(&r, &center, SetType::Type2)?;
        Ok(r)
    };
    Ok(Completion { completions: [complete(0)?, complete(2 * n)?], partial })
}

fn frobenius_parts(g: &FiniteGroup) -> Result<(Subset, Subset)> {
    let f = g
        .metadata()
        .frobenius
        .as_ref()
        .ok_or_else(|| Error::Precondition(format!("{} has no recorded Frobenius kernel", g.spec())))?;
    Ok((f.kernel.clone(), f.complement.clone()))
}

/// `t` distinct nonidentity kernel elements chosen uniformly.
pub fn random_kernel_picks(g: &FiniteGroup, t: usize, rng: &mut impl Rng) -> Result<Vec<usize>> {
    let (kernel, _) = frobenius_parts(g)?;
    let pool: Vec<usize> = kernel.iter().filter(|&k| k != 0).collect();
    if t > pool.len() {
        return Err(Error::InvalidParameter(format!("cannot pick {t} of {} kernel elements", pool.len())));
    }
    let mut picks: Vec<usize> = pool.choose_multiple(rng, t).copied().collect();
    picks.sort_unstable();
    Ok(picks)
}

/// [`random_kernel_picks`] driven by a ChaCha8 stream seeded with `seed`.
pub fn seeded_kernel_picks(g: &FiniteGroup, t: usize, seed: u64) -> Result<Vec<usize>> {
    random_kernel_picks(g, t, &mut ChaCha8Rng::seed_from_u64(seed))
}

fn left_cosets(g: &FiniteGroup, reps: &[usize], h: &Subset) -> Result<Subset> {
    Subset::from_indices(g, reps.iter().flat_map(|&k| h.iter().map(move |x| g.mul(k, x))))
}

/// The union of `t` nontrivial left cosets of the complement, optionally
/// together with the complement itself.
pub fn frobenius_coset_pss(
    g: &Arc<FiniteGroup>,
    t: usize,
    include_h: bool,
    picks: Option<&[usize]>,
) -> Result<ConstructionResult> {
    let (kernel, h) = frobenius_parts(g)?;
    if h.len() + 1 != kernel.len() {
        return Err(Error::Precondition("the complement does not act regularly on the kernel".into()));
    }
    if t == 0 || t >= kernel.len() {
        return Err(Error::InvalidParameter(format!("t = {t} must lie in [1, {}]", kernel.len() - 1)));
    }
    let picks: Vec<usize> = match picks {
        Some(p) => p.to_vec(),
        None => kernel.iter().filter(|&k| k != 0).take(t).collect(),
    };
    let mut distinct = picks.clone();
    distinct.sort_unstable();
    distinct.dedup();
    if picks.len() != t || distinct.len() != t || picks.iter().any(|&k| k == 0 || !kernel.contains(k)) {
        return Err(Error::InvalidParameter(format!("picks must be {t} distinct nonidentity kernel elements")));
    }
    let mut s = left_cosets(g, &picks, &h)?;
    let (v, oh, t) = (g.order() as u64, h.len() as u64, t as u64);
    let claimed = if include_h {
        s = s.union(&h)?;
        PssParams::new(v, (t + 1) * oh, t * t + oh, t * t + t)
    } else {
        PssParams::new(v, t * oh, t * t - t, t * t)
    };
    let picked: Vec<&str> = picks.iter().map(|&k| g.label(k)).collect();
    let ch = choices([("coset_representatives", json!(picked)), ("include_complement", json!(include_h))]);
    finish(g, s, claimed, "Frobenius cosets", ch)
}

/// `(2q(q−1), 2q−1, 2)` sum sets in `Aff(q) × C₂` from one lifted coset.
pub fn aff_times_c2_sum_set(q: usize) -> Result<Completion> {
    let g = Arc::new(crate::group::affine(q)?);
    let p = frobenius_coset_pss(&g, 1, false, None)?;
    let mut out = lift2(&g, &p.set, 1)?;
    for r in std::iter::once(&mut out.partial).chain(out.completions.iter_mut()) {
        r.theorem_tag = "affine times C2".into();
        r.choices.insert("coset_representatives".into(), p.choices["coset_representatives"].clone());
    }
    Ok(out)
}

/// Orbits of the complement acting by conjugation on the nonidentity kernel
/// elements, each sorted, ordered by smallest member.
pub fn kernel_orbits(g: &FiniteGroup) -> Result<Vec<Vec<usize>>> {
    let (kernel, h) = frobenius_parts(g)?;
    let mut seen = vec![false; g.order()];
    let mut out = Vec::new();
    for k in kernel.iter().filter(|&k| k != 0) {
        if seen[k] {
            continue;
        }
        let mut orbit: Vec<usize> = h.iter().map(|x| g.conjugate(k, x)).collect();
        orbit.sort_unstable();
        orbit.dedup();
        orbit.iter().for_each(|&y| seen[y] = true);
        out.push(orbit);
    }
    Ok(out)
}

/// `c` kernel elements from every orbit, their `C_d`-cosets unioned:
/// a `(qd, c(q−1), c(t−1), ct)` partial sum set with `t = c(q−1)/d`.
pub fn frobenius_orbit_pss(q: usize, d: usize, c: usize, picks: Option<&[usize]>) -> Result<ConstructionResult> {
    let g = Arc::new(frobenius_subgroup(q, d)?);
    let (_, h) = frobenius_parts(&g)?;
    let orbits = kernel_orbits(&g)?;
    if c == 0 || c > d {
        return Err(Error::InvalidParameter(format!("c = {c} must lie in [1, {d}]")));
    }
    let picks: Vec<usize> = match picks {
        Some(p) => p.to_vec(),
        None => orbits.iter().flat_map(|o| o.iter().take(c).copied()).collect(),
    };
    for orbit in &orbits {
        let hits = picks.iter().filter(|k| orbit.contains(k)).count();
        if hits != c {
            return Err(Error::InvalidParameter(format!("picks must contain exactly {c} elements of every orbit")));
        }
    }
    let mut distinct = picks.clone();
    distinct.sort_unstable();
    distinct.dedup();
    if distinct.len() != picks.len() || picks.contains(&0) {
        return Err(Error::InvalidParameter("picks must be distinct nonidentity kernel elements".into()));
    }
    let s = left_cosets(&g, &picks, &h)?;
    let (qq, cc) = (q as u64, c as u64);
    let t = cc * (qq - 1) / d as u64;
    let picked: Vec<&str> = picks.iter().map(|&k| g.label(k)).collect();
    let ch = choices([("orbit_picks", json!(picked)), ("per_orbit", json!(c))]);
    finish(&g, s, PssParams::new(g.order() as u64, cc * (qq - 1), cc * (t - 1), cc * t), "Frobenius orbits", ch)
}

/// `(qd, 2q−1, 4(q−1)/d)` sum sets in `EA(q) ⋊ C_d`: two kernel elements
/// per orbit, their cosets, and the identity.
pub fn frobenius_subgroup_sum_set(q: usize, d: usize, picks: Option<&[usize]>) -> Result<ConstructionResult> {
    let pss = frobenius_orbit_pss(q, d, 2, picks)?;
    let (qq, dd) = (q as u64, d as u64);
    let mut ch = pss.choices.clone();
    ch.remove("per_orbit");
    if d == 2 {
        ch.insert("trivial".into(), json!(true));
    }
    finish(&pss.group, pss.set.with(0), PssParams::sum_set(qq * dd, 2 * qq - 1, 4 * (qq - 1) / dd), "Frobenius subgroup", ch)
}

/// Nonzero squares of `GF(q)` in `EA(q)`, `q ≡ 3 (mod 4)`.
pub fn paley_skew_pss(q: usize) -> Result<ConstructionResult> {
    if q % 4 != 3 {
        return Err(Error::InvalidParameter(format!("q = {q} is not 3 mod 4")));
    }
    let field = FieldTable::new(q)?;
    let g = Arc::new(elementary_abelian(q)?);
    let s = Subset::from_indices(&g, field.nonzero_squares())?;
    let qq = q as u64;
    let r = finish(&g, s, PssParams::new(qq, (qq - 1) / 2, (qq - 3) / 4, (qq + 1) / 4), "Paley", BTreeMap::new())?;
    if !r.certificate.classification.is_skew {
        return Err(Error::Verification("squares are not skew".into()));
    }
    Ok(r)
}
