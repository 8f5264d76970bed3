//! Exact arithmetic in the integral group ring `ℤG`.
//!
//! Coefficients are checked `i64`; every overflow is reported as
//! [`Error::Overflow`] rather than wrapped. Multiplication is the naive
//! convolution `(Σ a_g g)(Σ b_h h) = Σ a_g b_h (gh)` over the supports.

use serde_json::{Map, Value};

use crate::error::{Error, Result};
use crate::group::{FiniteGroup, GroupId, Subset};
use crate::numbers::is_prime;
use crate::regularity::PssParams;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupRingElement {
    group: GroupId,
    coeffs: Vec<i64>,
}

impl GroupRingElement {
    pub fn zero(g: &FiniteGroup) -> Self {
        GroupRingElement { group: g.id(), coeffs: vec![0; g.order()] }
    }

    /// The ring identity `1·e`.
    pub fn one(g: &FiniteGroup) -> Self {
        Self::scalar(g, 1)
    }

    /// `c·e`, the image of an integer.
    pub fn scalar(g: &FiniteGroup, c: i64) -> Self {
        let mut x = Self::zero(g);
        x.coeffs[0] = c;
        x
    }

    /// The element `G = Σ_{g ∈ G} g`.
    pub fn group_sum(g: &FiniteGroup) -> Self {
        GroupRingElement { group: g.id(), coeffs: vec![1; g.order()] }
    }

    pub fn from_subset(g: &FiniteGroup, s: &Subset) -> Result<Self> {
        g.check_subset(s)?;
        let coeffs = s.mask().iter().map(|&b| b as i64).collect();
        Ok(GroupRingElement { group: g.id(), coeffs })
    }

    pub fn from_coeffs(g: &FiniteGroup, coeffs: Vec<i64>) -> Result<Self> {
        if coeffs.len() != g.order() {
            return Err(Error::GroupMismatch);
        }
        Ok(GroupRingElement { group: g.id(), coeffs })
    }

    pub fn group_id(&self) -> GroupId {
        self.group
    }

    pub fn coeffs(&self) -> &[i64] {
        &self.coeffs
    }

    pub fn coeff(&self, g: usize) -> i64 {
        self.coeffs[g]
    }

    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.coeffs.iter().enumerate().filter_map(|(g, &c)| (c != 0).then_some(g))
    }

    /// Support as a subset; the inverse of [`from_subset`](Self::from_subset)
    /// on 0/1 elements.
    pub fn support_subset(&self, g: &FiniteGroup) -> Result<Subset> {
        self.check(g)?;
        Subset::from_indices(g, self.support())
    }

    /// Sum of all coefficients (the augmentation).
    pub fn augmentation(&self) -> Result<i64> {
        self.coeffs
            .iter()
            .try_fold(0i64, |acc, &c| acc.checked_add(c))
            .ok_or(Error::Overflow("augmentation"))
    }

    fn check(&self, g: &FiniteGroup) -> Result<()> {
        if self.group == g.id() {
            Ok(())
        } else {
            Err(Error::GroupMismatch)
        }
    }

    fn same_group(&self, other: &Self) -> Result<()> {
        if self.group == other.group {
            Ok(())
        } else {
            Err(Error::GroupMismatch)
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.same_group(other)?;
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a.checked_add(*b).ok_or(Error::Overflow("add")))
            .collect::<Result<_>>()?;
        Ok(GroupRingElement { group: self.group, coeffs })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scalar_mul(-1)?)
    }

    pub fn scalar_mul(&self, c: i64) -> Result<Self> {
        let coeffs = self
            .coeffs
            .iter()
            .map(|a| a.checked_mul(c).ok_or(Error::Overflow("scalar multiplication")))
            .collect::<Result<_>>()?;
        Ok(GroupRingElement { group: self.group, coeffs })
    }

    pub fn multiply(&self, other: &Self, g: &FiniteGroup) -> Result<Self> {
        self.same_group(other)?;
        self.check(g)?;
        let mut out = vec![0i64; g.order()];
        let rhs: Vec<(usize, i64)> = other.support().map(|h| (h, other.coeffs[h])).collect();
        for a in self.support() {
            let ca = self.coeffs[a];
            let row = g.row(a);
            for &(b, cb) in &rhs {
                let slot = &mut out[row[b] as usize];
                let term = ca.checked_mul(cb).ok_or(Error::Overflow("multiply"))?;
                *slot = slot.checked_add(term).ok_or(Error::Overflow("multiply"))?;
            }
        }
        Ok(GroupRingElement { group: self.group, coeffs: out })
    }

    /// `X^t` by repeated squaring; `X^0 = 1`.
    pub fn power(&self, t: u32, g: &FiniteGroup) -> Result<Self> {
        self.check(g)?;
        let mut result = Self::one(g);
        let mut base = self.clone();
        let mut e = t;
        while e > 0 {
            if e & 1 == 1 {
                result = result.multiply(&base, g)?;
            }
            e >>= 1;
            if e > 0 {
                base = base.multiply(&base, g)?;
            }
        }
        Ok(result)
    }

    /// `X^{(t)} = Σ a_g g^t`, accumulating coefficients of colliding powers.
    pub fn t_power_map(&self, t: i64, g: &FiniteGroup) -> Result<Self> {
        self.check(g)?;
        let mut out = vec![0i64; g.order()];
        for a in self.support() {
            let slot = &mut out[g.pow(a, t)];
            *slot = slot.checked_add(self.coeffs[a]).ok_or(Error::Overflow("t-power map"))?;
        }
        Ok(GroupRingElement { group: self.group, coeffs: out })
    }

    /// `{"group": spec, "coeffs": {label: c}}` over the nonzero coefficients.
    pub fn to_json(&self, g: &FiniteGroup) -> Result<Value> {
        self.check(g)?;
        let mut coeffs = Map::new();
        for a in self.support() {
            coeffs.insert(g.label(a).to_string(), Value::from(self.coeffs[a]));
        }
        let mut obj = Map::new();
        obj.insert("group".into(), Value::from(g.spec()));
        obj.insert("coeffs".into(), Value::Object(coeffs));
        Ok(Value::Object(obj))
    }
}

fn to_i64(x: i128, what: &'static str) -> Result<i64> {
    i64::try_from(x).map_err(|_| Error::Overflow(what))
}

fn ipow(base: i128, e: u32, what: &'static str) -> Result<i128> {
    base.checked_pow(e).ok_or(Error::Overflow(what))
}

/// `(k^{2m} − n^m) / v` and `n^m`, with the divisibility check.
fn power_terms(g: &FiniteGroup, params: &PssParams, m: u32) -> Result<(i128, i128)> {
    if m == 0 {
        return Err(Error::InvalidParameter("closed forms need m >= 1".into()));
    }
    if !params.is_sum_set() {
        return Err(Error::InvalidParameter(format!("{params} are not sum-set parameters")));
    }
    if params.v as usize != g.order() {
        return Err(Error::GroupMismatch);
    }
    let what = "closed-form power";
    let k2m = ipow(params.k as i128, 2 * m, what)?;
    let nm = ipow(params.n() as i128, m, what)?;
    let diff = k2m.checked_sub(nm).ok_or(Error::Overflow(what))?;
    let v = params.v as i128;
    if diff % v != 0 {
        return Err(Error::NotDivisible(format!(
            "k^(2m) - n^m = {diff} is not divisible by v = {v}; {params} cannot belong to a sum set"
        )));
    }
    Ok((diff / v, nm))
}

/// `S^{2m} = ((k^{2m} − n^m)/v)·G + n^m` for a `(v, k, μ)` sum set.
pub fn sum_set_even_power_closed_form(g: &FiniteGroup, params: &PssParams, m: u32) -> Result<GroupRingElement> {
    let (c, nm) = power_terms(g, params, m)?;
    let what = "even closed form";
    let c = to_i64(c, what)?;
    let mut x = GroupRingElement::group_sum(g).scalar_mul(c)?;
    x.coeffs[0] = x.coeffs[0].checked_add(to_i64(nm, what)?).ok_or(Error::Overflow(what))?;
    Ok(x)
}

/// `S^{2m+1} = (k(k^{2m} − n^m)/v)·G + n^m·S`.
pub fn sum_set_odd_power_closed_form(
    g: &FiniteGroup,
    params: &PssParams,
    m: u32,
    s: &Subset,
) -> Result<GroupRingElement> {
    let (c, nm) = power_terms(g, params, m)?;
    let what = "odd closed form";
    let c = to_i64(c.checked_mul(params.k as i128).ok_or(Error::Overflow(what))?, what)?;
    let tail = GroupRingElement::from_subset(g, s)?.scalar_mul(to_i64(nm, what)?)?;
    GroupRingElement::group_sum(g).scalar_mul(c)?.add(&tail)
}

/// First coefficient where `S^p` and `S^{(p)}` disagree modulo `p`.
#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
pub struct CongruenceWitness {
    pub element: usize,
    pub power_coeff: i64,
    pub power_map_coeff: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
pub struct CongruenceReport {
    pub prime: u64,
    pub holds: bool,
    pub witness: Option<CongruenceWitness>,
}

/// Checks `X^p ≡ X^{(p)} (mod p)` in `ℤG` for abelian `G`.
pub fn frobenius_congruence_check(g: &FiniteGroup, x: &GroupRingElement, p: u64) -> Result<CongruenceReport> {
    if !is_prime(p) {
        return Err(Error::InvalidParameter(format!("{p} is not prime")));
    }
    if !g.is_abelian() {
        return Err(Error::NotAbelian(format!("{} (the congruence needs commuting factors)", g.spec())));
    }
    let lhs = x.power(p as u32, g)?;
    let rhs = x.t_power_map(p as i64, g)?;
    let p_i = p as i64;
    let witness = (0..g.order())
        .find(|&e| (lhs.coeffs[e] - rhs.coeffs[e]).rem_euclid(p_i) != 0)
        .map(|e| CongruenceWitness { element: e, power_coeff: lhs.coeffs[e], power_map_coeff: rhs.coeffs[e] });
    Ok(CongruenceReport { prime: p, holds: witness.is_none(), witness })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{cyclic, dihedral};
    use crate::regularity::profile;

    fn subset_elem(g: &FiniteGroup, labels: &[&str]) -> (Subset, GroupRingElement) {
        let s = Subset::from_labels(g, labels).unwrap();
        let x = GroupRingElement::from_subset(g, &s).unwrap();
        (s, x)
    }

    #[test]
    fn from_subset_edges() {
        let g = dihedral(3).unwrap();
        assert_eq!(GroupRingElement::from_subset(&g, &Subset::empty(&g)).unwrap(), GroupRingElement::zero(&g));
        assert_eq!(GroupRingElement::from_subset(&g, &Subset::full(&g)).unwrap(), GroupRingElement::group_sum(&g));
        let (s, x) = subset_elem(&g, &["x", "t"]);
        assert_eq!(x.coeffs().iter().filter(|&&c| c == 1).count(), 2);
        assert_eq!(x.support_subset(&g).unwrap(), s);
    }

    #[test]
    fn square_coefficients_are_product_counts() {
        let g = dihedral(4).unwrap();
        let (s, x) = subset_elem(&g, &["x", "xt", "t", "x2t"]);
        let sq = x.power(2, &g).unwrap();
        let prof = profile(&g, &s).unwrap();
        for e in 0..g.order() {
            assert_eq!(sq.coeff(e), prof.product_counts[e] as i64);
        }
    }

    #[test]
    fn group_sum_absorbs_subsets() {
        let g = dihedral(5).unwrap();
        let big = GroupRingElement::group_sum(&g);
        let (s, x) = subset_elem(&g, &["x", "x3t", "t", "x4"]);
        let expected = big.scalar_mul(s.len() as i64).unwrap();
        assert_eq!(big.multiply(&x, &g).unwrap(), expected);
        assert_eq!(x.multiply(&big, &g).unwrap(), expected);
    }

    #[test]
    fn power_zero_is_one() {
        let g = cyclic(6).unwrap();
        let (_, x) = subset_elem(&g, &["x", "x4"]);
        assert_eq!(x.power(0, &g).unwrap(), GroupRingElement::one(&g));
    }

    #[test]
    fn t_power_map_examples() {
        let g = dihedral(5).unwrap();
        let (s, x) = subset_elem(&g, &["x", "x2t", "x3"]);
        assert_eq!(x.t_power_map(1, &g).unwrap(), x);
        let inv = GroupRingElement::from_subset(&g, &g.inverse_set(&s)).unwrap();
        assert_eq!(x.t_power_map(-1, &g).unwrap(), inv);

        let c4 = cyclic(4).unwrap();
        let all = GroupRingElement::group_sum(&c4);
        assert_eq!(all.t_power_map(2, &c4).unwrap().coeffs(), &[2, 0, 2, 0]);
    }

    #[test]
    fn overflow_is_reported() {
        let g = cyclic(2).unwrap();
        let x = GroupRingElement::scalar(&g, i64::MAX / 2 + 1);
        assert_eq!(x.add(&x).unwrap_err(), Error::Overflow("add"));
        assert!(matches!(x.multiply(&x, &g), Err(Error::Overflow(_))));
        let h = cyclic(2).unwrap();
        assert_eq!(x.add(&GroupRingElement::zero(&h)).unwrap_err(), Error::GroupMismatch);
    }

    #[test]
    fn closed_forms_for_831() {
        let g = dihedral(4).unwrap();
        let (s, x) = subset_elem(&g, &["x", "xt", "t"]);
        let p = PssParams::sum_set(8, 3, 1);
        let two = sum_set_even_power_closed_form(&g, &p, 1).unwrap();
        let mut expected = vec![1i64; 8];
        expected[0] = 2;
        assert_eq!(two.coeffs(), &expected[..]);
        assert_eq!(x.power(2, &g).unwrap(), two);

        let four = sum_set_even_power_closed_form(&g, &p, 2).unwrap();
        let mut expected = vec![10i64; 8];
        expected[0] = 11;
        assert_eq!(four.coeffs(), &expected[..]);
        assert_eq!(x.power(4, &g).unwrap(), four);

        let three = sum_set_odd_power_closed_form(&g, &p, 1, &s).unwrap();
        let expected = GroupRingElement::group_sum(&g).scalar_mul(3).unwrap().add(&x).unwrap();
        assert_eq!(three, expected);
        assert_eq!(x.power(3, &g).unwrap(), three);
    }

    #[test]
    fn closed_form_with_n_zero() {
        // (v, k, μ) = (16, 4, 1) has n = 0: S^{2m} = (k^{2m}/v)·G
        let g = cyclic(16).unwrap();
        let p = PssParams::sum_set(16, 4, 1);
        assert_eq!(p.n(), 0);
        let e = sum_set_even_power_closed_form(&g, &p, 2).unwrap();
        assert!(e.coeffs().iter().all(|&c| c == 16));
        let s = Subset::from_indices(&g, [1, 2, 3, 4]).unwrap();
        let o = sum_set_odd_power_closed_form(&g, &p, 1, &s).unwrap();
        assert!(o.coeffs().iter().all(|&c| c == 4));
    }

    #[test]
    fn closed_form_terms_always_divide() {
        // k^{2m} - n^m is a multiple of k^2 - n = μv, so the check never fires
        // for parameters built from (v, k, μ) alone.
        for v in 2..40u64 {
            let g = cyclic(v as usize).unwrap();
            for k in 1..v {
                for mu in 0..k {
                    let p = PssParams::sum_set(v, k, mu);
                    for m in 1..=3 {
                        assert!(sum_set_even_power_closed_form(&g, &p, m).is_ok(), "{p} m={m}");
                    }
                }
            }
        }
    }

    #[test]
    fn closed_form_rejects_pss_params() {
        let g = cyclic(7).unwrap();
        let p = PssParams::new(7, 3, 1, 2);
        assert!(sum_set_even_power_closed_form(&g, &p, 1).is_err());
        let wrong_v = PssParams::sum_set(8, 3, 1);
        assert_eq!(sum_set_even_power_closed_form(&g, &wrong_v, 1).unwrap_err(), Error::GroupMismatch);
    }

    #[test]
    fn congruence_examples() {
        let c6 = cyclic(6).unwrap();
        for mask in 0u32..64 {
            let s = Subset::from_predicate(&c6, |g| mask >> g & 1 == 1);
            let x = GroupRingElement::from_subset(&c6, &s).unwrap();
            assert!(frobenius_congruence_check(&c6, &x, 5).unwrap().holds);
        }
        let c5 = cyclic(5).unwrap();
        let (_, x) = subset_elem(&c5, &["x", "x2"]);
        let rep = frobenius_congruence_check(&c5, &x, 3).unwrap();
        assert!(rep.holds);
        let cube = x.power(3, &c5).unwrap();
        // (x + x^2)^3 = x^3 + 3x^4 + 3x^5 + x^6 = 3·1 + x + x^3 + 3x^4
        assert_eq!(cube.coeffs(), &[3, 1, 0, 1, 3]);
        assert_eq!(x.t_power_map(3, &c5).unwrap().coeffs(), &[0, 1, 0, 1, 0]);

        let single = GroupRingElement::from_subset(&c5, &Subset::from_indices(&c5, [2]).unwrap()).unwrap();
        for p in [2, 3, 5, 7] {
            assert!(frobenius_congruence_check(&c5, &single, p).unwrap().holds);
        }
        let d3 = dihedral(3).unwrap();
        assert!(matches!(
            frobenius_congruence_check(&d3, &GroupRingElement::one(&d3), 2),
            Err(Error::NotAbelian(_))
        ));
        assert!(frobenius_congruence_check(&c5, &single, 4).is_err());
    }
}
