//! Representation counts and classification of subsets.
//!
//! "Ways" are ordered pairs: `g` is represented by `(x, y) ∈ S × S` with
//! `xy = g`, `x = y` allowed. With that convention the product counts sum to
//! `|S|²` and coincide with the coefficients of `S²` in the group ring.

use std::fmt;

use serde::{Deserialize, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::group::{FiniteGroup, Subset};

/// `(v, k, λ, μ)`; a sum set when `λ = μ`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Deserialize)]
pub struct PssParams {
    pub v: u64,
    pub k: u64,
    pub lambda: u64,
    pub mu: u64,
}

impl PssParams {
    pub fn new(v: u64, k: u64, lambda: u64, mu: u64) -> Self {
        PssParams { v, k, lambda, mu }
    }

    pub fn sum_set(v: u64, k: u64, mu: u64) -> Self {
        PssParams { v, k, lambda: mu, mu }
    }

    pub fn is_sum_set(&self) -> bool {
        self.lambda == self.mu
    }

    /// `n = k² − μv`; may be negative.
    pub fn n(&self) -> i64 {
        (self.k * self.k) as i64 - (self.mu * self.v) as i64
    }

    /// `|S ∩ S^{-1}|` forced by `k² = μ(v − 1) + |S ∩ S^{-1}|` (sum sets only).
    pub fn implied_s_inv(&self) -> i64 {
        (self.k * self.k) as i64 - (self.mu * (self.v - 1)) as i64
    }
}

impl fmt::Display for PssParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_sum_set() {
            write!(f, "({},{},{})", self.v, self.k, self.mu)
        } else {
            write!(f, "({},{},{},{})", self.v, self.k, self.lambda, self.mu)
        }
    }
}

impl Serialize for PssParams {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Repr {
            v: u64,
            k: u64,
            lambda: u64,
            mu: u64,
            n: i64,
            sum_set: bool,
        }
        Repr { v: self.v, k: self.k, lambda: self.lambda, mu: self.mu, n: self.n(), sum_set: self.is_sum_set() }
            .serialize(serializer)
    }
}

/// Ordered-pair product and quotient counts of a subset.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RegularityProfile {
    pub set: Subset,
    /// Entry `g`: `|{(x, y) ∈ S × S : xy = g}|`.
    pub product_counts: Vec<u32>,
    /// Entry `a`: `|{(x, y) ∈ S × S : xy^{-1} = a}|`.
    pub quotient_counts: Vec<u32>,
}

pub fn profile(g: &FiniteGroup, s: &Subset) -> Result<RegularityProfile> {
    g.check_subset(s)?;
    let v = g.order();
    let mut product_counts = vec![0u32; v];
    let mut quotient_counts = vec![0u32; v];
    let elems = s.indices();
    for &x in &elems {
        let row = g.row(x);
        for &y in &elems {
            product_counts[row[y] as usize] += 1;
            quotient_counts[row[g.inv(y)] as usize] += 1;
        }
    }
    Ok(RegularityProfile { set: s.clone(), product_counts, quotient_counts })
}

/// The special subsets `A`, `B`, `C` of `S` with respect to `a`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpecialSubsets {
    /// `{x ∈ S : a = xy^{-1} for some y ∈ S}`
    pub a: Subset,
    /// `{y ∈ S : a = xy^{-1} for some x ∈ S}`
    pub b: Subset,
    /// `{x ∈ S : a = xy for some y ∈ S}`
    pub c: Subset,
}

pub fn special_subsets(g: &FiniteGroup, s: &Subset, a: usize) -> Result<SpecialSubsets> {
    g.check_subset(s)?;
    g.check_element(a)?;
    let ainv = g.inv(a);
    let pick = |f: &dyn Fn(usize) -> usize| {
        Subset::from_indices(g, s.iter().filter(|&x| s.contains(f(x)))).expect("elements of S")
    };
    Ok(SpecialSubsets {
        a: pick(&|x| g.mul(ainv, x)),
        b: pick(&|y| g.mul(a, y)),
        c: pick(&|x| g.mul(g.inv(x), a)),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SetType {
    Type1,
    Type2,
    Neither,
}

/// How a set meets the cosets of `{1, z}` for a central involution `z`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TypeEntry {
    pub involution: String,
    pub kind: SetType,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Classification {
    pub v: u64,
    pub k: u64,
    pub is_sum_set: bool,
    pub is_partial_sum_set: bool,
    pub is_difference_set: bool,
    pub is_skew: bool,
    pub is_reversible: bool,
    pub is_maximal_skew: bool,
    pub is_trivial: bool,
    /// Present whenever the set is a partial sum set (sum sets have `λ = μ`).
    pub params: Option<PssParams>,
    /// `λ` of the difference-set condition, when it holds.
    pub difference_lambda: Option<u64>,
    pub s_inv: u64,
    /// `k² = μ(v − 1) + |S ∩ S^{-1}|`, checked for sum sets.
    pub eq1_holds: Option<bool>,
    pub type_wrt: Vec<TypeEntry>,
}

/// Common value of `counts` over `elems`, `Ok(None)` when `elems` is empty,
/// `Err(())` when not constant.
fn constant_over(counts: &[u32], elems: impl Iterator<Item = usize>) -> std::result::Result<Option<u32>, ()> {
    let mut value = None;
    for g in elems {
        match value {
            None => value = Some(counts[g]),
            Some(c) if c != counts[g] => return Err(()),
            _ => {}
        }
    }
    Ok(value)
}

pub fn is_trivial_shape(g: &FiniteGroup, s: &Subset) -> bool {
    let (v, k) = (g.order(), s.len());
    let small = |x: usize| g.element_order(x) <= 2;
    k == 0
        || k == v
        || (k == 1 && s.iter().all(small))
        || (k == v - 1 && s.complement().iter().all(small))
}

pub fn classify(g: &FiniteGroup, s: &Subset) -> Result<Classification> {
    let prof = profile(g, s)?;
    Ok(classify_profile(g, &prof))
}

pub fn classify_profile(g: &FiniteGroup, prof: &RegularityProfile) -> Classification {
    let s = &prof.set;
    let v = g.order();
    let k = s.len();
    let inv = g.inverse_set(s);
    let s_inv = s.intersection(&inv).expect("same group").len();

    let nonid = || 1..v;
    let inside = constant_over(&prof.product_counts, nonid().filter(|&x| s.contains(x)));
    let outside = constant_over(&prof.product_counts, nonid().filter(|&x| !s.contains(x)));
    let params = match (inside, outside) {
        (Ok(l), Ok(m)) => {
            let (l, m) = match (l, m) {
                (Some(l), Some(m)) => (l, m),
                (Some(l), None) => (l, l),
                (None, Some(m)) => (m, m),
                (None, None) => (0, 0),
            };
            Some(PssParams::new(v as u64, k as u64, l as u64, m as u64))
        }
        _ => None,
    };
    let is_sum_set = params.is_some_and(|p| p.is_sum_set());
    let difference_lambda = constant_over(&prof.quotient_counts, nonid()).ok().map(|c| c.unwrap_or(0) as u64);
    let is_skew = s_inv == 0;
    let is_maximal_skew = is_skew && (0..v).all(|x| g.element_order(x) <= 2 || s.contains(x) || inv.contains(x));
    let eq1_holds = params
        .filter(|p| p.is_sum_set())
        .map(|p| p.implied_s_inv() == s_inv as i64);
    let type_wrt = central_involutions(g)
        .into_iter()
        .map(|z| {
            let n = Subset::from_indices(g, [0, z]).expect("in range");
            TypeEntry { involution: g.label(z).to_string(), kind: set_type(g, s, &n) }
        })
        .collect();

    Classification {
        v: v as u64,
        k: k as u64,
        is_sum_set,
        is_partial_sum_set: params.is_some(),
        is_difference_set: difference_lambda.is_some(),
        is_skew,
        is_reversible: s_inv == k,
        is_maximal_skew,
        is_trivial: is_trivial_shape(g, s),
        params,
        difference_lambda,
        s_inv: s_inv as u64,
        eq1_holds,
        type_wrt,
    }
}

/// Central elements of order 2, in index order.
pub fn central_involutions(g: &FiniteGroup) -> Vec<usize> {
    g.center().iter().filter(|&z| g.element_order(z) == 2).collect()
}

/// `(v, k, μ) ↦ (v, v − k, v − 2k + μ)`.
pub fn complement_params(p: &PssParams) -> Result<PssParams> {
    if !p.is_sum_set() {
        return Err(Error::InvalidParameter(format!("{p} are not sum-set parameters")));
    }
    let mu = (p.v + p.mu)
        .checked_sub(2 * p.k)
        .ok_or_else(|| Error::InvalidParameter(format!("{p}: v - 2k + mu is negative")))?;
    Ok(PssParams::sum_set(p.v, p.v - p.k, mu))
}

fn set_type(g: &FiniteGroup, s: &Subset, n: &Subset) -> SetType {
    let z = n.iter().find(|&x| x != 0).expect("order-2 subgroup");
    let in_n = n.iter().filter(|&x| s.contains(x)).count();
    let coset_hits = (1..g.order())
        .filter(|&x| x != z && x < g.mul(x, z))
        .map(|x| s.contains(x) as usize + s.contains(g.mul(x, z)) as usize);
    let hits: Vec<usize> = coset_hits.collect();
    if in_n == 0 && hits.iter().all(|&h| h <= 1) {
        SetType::Type1
    } else if in_n == 1 && hits.iter().all(|&h| h == 0 || h == 2) {
        SetType::Type2
    } else {
        SetType::Neither
    }
}

/// Type 1 / type 2 relative to a normal subgroup of order 2.
pub fn type_classify(g: &FiniteGroup, s: &Subset, n: &Subset) -> Result<SetType> {
    g.check_subset(s)?;
    g.check_subset(n)?;
    if n.len() != 2 || !g.is_subgroup(n) {
        return Err(Error::InvalidParameter(format!("{} is not a subgroup of order 2", g.format_set(n))));
    }
    if !g.is_normal(n) {
        return Err(Error::NotNormal(g.format_set(n)));
    }
    Ok(set_type(g, s, n))
}

/// `Sz` for a central element `z` with `o(z) ≤ 2`.
pub fn central_translate(g: &FiniteGroup, s: &Subset, z: usize) -> Result<Subset> {
    g.check_subset(s)?;
    g.check_element(z)?;
    if g.element_order(z) > 2 {
        return Err(Error::Precondition(format!("{} is not an involution", g.label(z))));
    }
    if !g.center().contains(z) {
        return Err(Error::Precondition(format!("{} is not central", g.label(z))));
    }
    Ok(g.right_translate(s, z))
}

/// A skew set is maximal iff every element of order > 2 lies in `S ∪ S^{-1}`.
pub fn maximal_skew_test(g: &FiniteGroup, s: &Subset) -> Result<bool> {
    g.check_subset(s)?;
    let inv = g.inverse_set(s);
    if !s.intersection(&inv)?.is_empty() {
        return Err(Error::Precondition(format!("{} is not skew", g.format_set(s))));
    }
    Ok((0..g.order()).all(|x| g.element_order(x) <= 2 || s.contains(x) || inv.contains(x)))
}

/// Self-contained proof object for a classification claim.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Certificate {
    pub group_spec: String,
    pub set: Vec<String>,
    pub product_counts: Vec<u32>,
    pub quotient_counts: Vec<u32>,
    pub classification: Classification,
    pub params: Option<PssParams>,
}

impl Certificate {
    /// Computes the profile and cross-checks it against the special-subset
    /// sizes `|C_{a,S}|` and `|A_{a,S}|` for every `a`.
    pub fn issue(g: &FiniteGroup, s: &Subset) -> Result<Self> {
        let prof = profile(g, s)?;
        for a in 0..g.order() {
            let sp = special_subsets(g, s, a)?;
            if sp.c.len() as u32 != prof.product_counts[a] || sp.a.len() as u32 != prof.quotient_counts[a] {
                return Err(Error::Verification(format!(
                    "special-subset sizes disagree with pair counts at {}",
                    g.label(a)
                )));
            }
        }
        let classification = classify_profile(g, &prof);
        if classification.eq1_holds == Some(false) {
            return Err(Error::Verification("parameter identity fails for a sum set".into()));
        }
        Ok(Certificate {
            group_spec: g.spec().to_string(),
            set: g.set_labels(s),
            product_counts: prof.product_counts,
            quotient_counts: prof.quotient_counts,
            params: classification.params,
            classification,
        })
    }

    /// Recounts ordered pairs directly from the group table and compares.
    pub fn verify(&self, g: &FiniteGroup) -> Result<()> {
        if self.group_spec != g.spec() {
            return Err(Error::Verification(format!("certificate is for {}, not {}", self.group_spec, g.spec())));
        }
        let s = Subset::from_labels(g, &self.set)?;
        let v = g.order();
        let mut prod = vec![0u32; v];
        let mut quot = vec![0u32; v];
        for x in 0..v {
            for y in 0..v {
                if s.contains(x) && s.contains(y) {
                    prod[g.mul(x, y)] += 1;
                    quot[g.mul(x, g.inv(y))] += 1;
                }
            }
        }
        if prod != self.product_counts || quot != self.quotient_counts {
            return Err(Error::Verification("recounted profile differs".into()));
        }
        let fresh = classify(g, &s)?;
        if fresh != self.classification || fresh.params != self.params {
            return Err(Error::Verification("recomputed classification differs".into()));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{cyclic, dihedral, direct_product, elementary_abelian};

    fn set(g: &FiniteGroup, labels: &[&str]) -> Subset {
        Subset::from_labels(g, labels).unwrap()
    }

    #[test]
    fn profile_of_831_set() {
        let g = dihedral(4).unwrap();
        let p = profile(&g, &set(&g, &["x", "xt", "t"])).unwrap();
        assert_eq!(p.product_counts, vec![2, 1, 1, 1, 1, 1, 1, 1]);
        assert_eq!(p.quotient_counts[0], 3);
        assert_eq!(p.product_counts.iter().sum::<u32>(), 9);
        assert_eq!(p.quotient_counts.iter().sum::<u32>(), 9);
        let e = profile(&g, &Subset::empty(&g)).unwrap();
        assert!(e.product_counts.iter().all(|&c| c == 0));
    }

    #[test]
    fn classify_831() {
        let g = dihedral(4).unwrap();
        let c = classify(&g, &set(&g, &["x", "xt", "t"])).unwrap();
        assert!(c.is_sum_set && c.is_partial_sum_set && !c.is_trivial);
        let p = c.params.unwrap();
        assert_eq!(p, PssParams::sum_set(8, 3, 1));
        assert_eq!((p.n(), c.s_inv), (1, 2));
        assert_eq!(c.eq1_holds, Some(true));
        assert_eq!(c.type_wrt, vec![TypeEntry { involution: "x2".into(), kind: SetType::Type1 }]);
    }

    #[test]
    fn quadratic_residues_mod_7() {
        let g = elementary_abelian(7).unwrap();
        let c = classify(&g, &set(&g, &["1", "2", "4"])).unwrap();
        assert_eq!(c.params, Some(PssParams::new(7, 3, 1, 2)));
        assert!(c.is_skew && c.is_difference_set && !c.is_sum_set);
        assert_eq!(c.difference_lambda, Some(1));
    }

    #[test]
    fn trivial_shapes() {
        let g = cyclic(4).unwrap();
        for (labels, trivial) in [
            (vec![], true),
            (vec!["x2"], true),
            (vec!["1"], true),
            (vec!["x"], false),
            (vec!["1", "x", "x3"], true),
            (vec!["1", "x2", "x3"], false),
        ] {
            let s = set(&g, &labels);
            assert_eq!(classify(&g, &s).unwrap().is_trivial, trivial, "{labels:?}");
        }
    }

    #[test]
    fn special_subset_lemma_on_c7() {
        let g = cyclic(7).unwrap();
        let m = set(&g, &["x", "x2", "x4"]);
        assert!(maximal_skew_test(&g, &m).unwrap());
        for a in 0..7 {
            let sp = special_subsets(&g, &m, a).unwrap();
            assert_eq!(sp.a.intersection(&sp.c).unwrap().len(), 0);
            let total = sp.a.len() + sp.c.len();
            if a == 0 {
                continue;
            }
            assert_eq!(total, if m.contains(a) { 2 } else { 3 }, "a = {a}");
        }
    }

    #[test]
    fn reversible_sets_have_equal_a_and_c() {
        let g = dihedral(4).unwrap();
        let s = set(&g, &["x", "x3", "t", "x2"]);
        for a in 0..8 {
            let sp = special_subsets(&g, &s, a).unwrap();
            assert_eq!(sp.a, sp.c);
        }
        assert!(special_subsets(&g, &s, 8).is_err());
    }

    #[test]
    fn complement_params_examples() {
        let p = PssParams::sum_set(8, 3, 1);
        assert_eq!(complement_params(&p).unwrap(), PssParams::sum_set(8, 5, 3));
        assert_eq!(complement_params(&complement_params(&p).unwrap()).unwrap(), p);
        let half = PssParams::sum_set(16, 8, 4);
        assert_eq!(complement_params(&half).unwrap(), half);
    }

    #[test]
    fn type_and_translate() {
        let g = dihedral(4).unwrap();
        let z = g.element("x2").unwrap();
        let n = Subset::from_indices(&g, [0, z]).unwrap();
        let s = set(&g, &["x", "xt", "t"]);
        assert_eq!(type_classify(&g, &s, &n).unwrap(), SetType::Type1);
        let sz = central_translate(&g, &s, z).unwrap();
        assert_eq!(sz.intersection(&s).unwrap().len(), 0);
        assert_eq!(type_classify(&g, &sz, &n).unwrap(), SetType::Type1);
        assert_eq!(classify(&g, &sz).unwrap().params, classify(&g, &s).unwrap().params);
        assert_eq!(central_translate(&g, &s, 0).unwrap(), s);
        assert_eq!(type_classify(&g, &set(&g, &["1", "x2"]), &n).unwrap(), SetType::Neither);
        assert!(central_translate(&g, &s, g.element("x").unwrap()).is_err());
        assert!(central_translate(&g, &s, g.element("t").unwrap()).is_err());
        let bad = Subset::from_indices(&g, [0, g.element("t").unwrap()]).unwrap();
        assert!(type_classify(&g, &s, &bad).is_err());
    }

    #[test]
    fn maximal_skew_examples() {
        let c4 = cyclic(4).unwrap();
        assert!(maximal_skew_test(&c4, &set(&c4, &["x"])).unwrap());
        let c2 = cyclic(2).unwrap();
        assert!(maximal_skew_test(&c2, &Subset::empty(&c2)).unwrap());
        let c7 = cyclic(7).unwrap();
        assert!(!maximal_skew_test(&c7, &set(&c7, &["x"])).unwrap());
        assert!(maximal_skew_test(&c7, &set(&c7, &["x", "x6"])).is_err());
    }

    #[test]
    fn certificates_recheck() {
        let g = direct_product(&dihedral(3).unwrap(), &cyclic(2).unwrap()).unwrap();
        let s = Subset::from_indices(&g, [1, 4, 7, 9]).unwrap();
        let cert = Certificate::issue(&g, &s).unwrap();
        cert.verify(&g).unwrap();
        let mut forged = cert.clone();
        forged.product_counts[1] += 1;
        assert!(forged.verify(&g).is_err());
        let json = serde_json::to_value(&cert).unwrap();
        assert_eq!(json["group_spec"], "prod:dihedral:3,cyclic:2");
    }
}
