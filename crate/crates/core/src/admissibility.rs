//! Parameter filters and coset-partition analysis of sum sets.
//!
//! For a normal subgroup `N` with cosets `N_α`, `α ∈ H = G/N`, a `(v, k, μ)`
//! sum set `S` satisfies
//!
//! ```text
//! Σ_α X_α X_{α⁻¹β} = μ·o(N)       (β ≠ 1)
//!                  = μ·o(N) + n   (β = 1),      X_α = |S ∩ N_α|.
//! ```

use serde::Serialize;

use crate::error::{Error, Result};
use crate::group::{FiniteGroup, Quotient, Subset};
use crate::numbers::exact_sqrt;
use crate::regularity::{classify, profile, PssParams};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Rejection {
    pub rule: String,
    pub citation: String,
    pub detail: String,
}

impl Rejection {
    fn new(rule: &str, citation: &str, detail: String) -> Self {
        Rejection { rule: rule.into(), citation: citation.into(), detail }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AdmissibilityVerdict {
    pub v: u64,
    pub k: u64,
    pub mu: u64,
    pub admissible: bool,
    pub n: i64,
    pub s_inv: i64,
    pub rejections: Vec<Rejection>,
    pub warnings: Vec<Rejection>,
}

/// Checks `0 ≤ k² − μ(v − 1) ≤ k` and the size normalization `k ≤ v/2`.
pub fn check_admissible(v: u64, k: u64, mu: u64) -> Result<AdmissibilityVerdict> {
    if !(v > k && k > mu) {
        return Err(Error::InvalidParameter(format!("need v > k > mu, got ({v},{k},{mu})")));
    }
    let p = PssParams::sum_set(v, k, mu);
    let s_inv = p.implied_s_inv();
    let n = p.n();
    let mut rejections = Vec::new();
    if s_inv < 0 || s_inv > k as i64 {
        rejections.push(Rejection::new(
            "eq1-range",
            "k² = μ(v−1) + |S ∩ S⁻¹| with 0 ≤ |S ∩ S⁻¹| ≤ k",
            format!("implied |S ∩ S⁻¹| = {s_inv} is outside [0, {k}]"),
        ));
    }
    if 2 * k > v {
        rejections.push(Rejection::new(
            "size-normalization",
            "sum sets are taken with k ≤ v/2; larger ones are complements",
            format!("k = {k} > v/2"),
        ));
    }
    let mut warnings = Vec::new();
    if rejections.is_empty() && exact_sqrt(n).is_none() {
        warnings.push(Rejection::new(
            "n-square",
            "n = k² − μv is known to be a perfect square for every sum set",
            format!("n = {n} is not a square"),
        ));
    }
    Ok(AdmissibilityVerdict { v, k, mu, admissible: rejections.is_empty(), n, s_inv, rejections, warnings })
}

/// Rejections that apply when the target group is abelian of order `v`.
pub fn abelian_filters(v: u64, k: u64, mu: u64) -> Vec<Rejection> {
    let p = PssParams::sum_set(v, k, mu);
    let n = p.n();
    let mut out = Vec::new();
    if v % 2 == 1 {
        out.push(Rejection::new(
            "abelian-odd-order",
            "abelian groups of odd order admit no sum sets",
            format!("v = {v} is odd"),
        ));
    }
    if mu % 2 == 1 {
        out.push(Rejection::new(
            "abelian-mu-even",
            "a nontrivial sum set in an abelian group has even μ",
            format!("μ = {mu} is odd"),
        ));
    }
    if n == 0 {
        out.push(Rejection::new(
            "abelian-n-nonzero",
            "abelian sum sets are reversible, forcing n = k − μ > 0",
            "n = 0".into(),
        ));
    } else if exact_sqrt(n).is_none() {
        out.push(Rejection::new(
            "abelian-n-square",
            "the Frobenius congruence forces n to be a square in abelian groups",
            format!("n = {n} is not a square"),
        ));
    }
    out
}

/// Intersection sizes of a subset with the cosets of a normal subgroup.
#[derive(Debug, Clone)]
pub struct CosetProfile {
    pub normal_subgroup: Subset,
    pub quotient: Quotient,
    /// Indexed by coset (quotient element); coset 0 is `N` itself.
    pub x: Vec<u64>,
}

impl CosetProfile {
    pub fn distinct_values(&self) -> Vec<u64> {
        let mut vals = self.x.clone();
        vals.sort_unstable();
        vals.dedup();
        vals
    }

    /// `Σ_α X_α X_{α⁻¹β}` for every `β`.
    pub fn convolution(&self) -> Vec<u64> {
        let h = &self.quotient.group;
        let mut out = vec![0; h.order()];
        for a in 0..h.order() {
            for b in 0..h.order() {
                out[h.mul(a, b)] += self.x[a] * self.x[b];
            }
        }
        out
    }
}

pub fn coset_profile(g: &FiniteGroup, s: &Subset, n: &Subset) -> Result<CosetProfile> {
    g.check_subset(s)?;
    let quotient = g.quotient(n)?;
    let mut x = vec![0u64; quotient.group.order()];
    for e in s.iter() {
        x[quotient.projection[e]] += 1;
    }
    Ok(CosetProfile { normal_subgroup: n.clone(), quotient, x })
}

fn sum_set_params(g: &FiniteGroup, s: &Subset) -> Result<PssParams> {
    match classify(g, s)?.params {
        Some(p) if p.is_sum_set() => Ok(p),
        _ => Err(Error::Precondition(format!("{} is not a sum set", g.format_set(s)))),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CosetRow {
    pub beta: String,
    pub lhs: i64,
    pub rhs: i64,
    pub ok: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CosetEquationReport {
    pub params: PssParams,
    pub normal_subgroup: Vec<String>,
    pub rows: Vec<CosetRow>,
    /// `Σ_β rhs = μ(v − 1) + |S ∩ S⁻¹|`
    pub totals_match: bool,
    pub holds: bool,
}

pub fn verify_coset_equation(g: &FiniteGroup, s: &Subset, n: &Subset) -> Result<CosetEquationReport> {
    let p = sum_set_params(g, s)?;
    let cp = coset_profile(g, s, n)?;
    let on = n.len() as i64;
    let mu = p.mu as i64;
    let rows: Vec<CosetRow> = cp
        .convolution()
        .into_iter()
        .enumerate()
        .map(|(beta, lhs)| {
            let rhs = mu * on + if beta == 0 { p.n() } else { 0 };
            CosetRow { beta: cp.quotient.group.label(beta).to_string(), lhs: lhs as i64, rhs, ok: lhs as i64 == rhs }
        })
        .collect();
    let s_inv = s.intersection(&g.inverse_set(s))?.len() as i64;
    let total: i64 = rows.iter().map(|r| r.rhs).sum();
    let totals_match = total == mu * (g.order() as i64 - 1) + s_inv;
    let holds = totals_match && rows.iter().all(|r| r.ok);
    Ok(CosetEquationReport { params: p, normal_subgroup: g.set_labels(n), rows, totals_match, holds })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SquareRootBranch {
    pub sign: char,
    pub l: Option<i64>,
}

/// Evaluation of the two-value clauses. `M` is the value class of the
/// trivial coset, with value `m`; every other coset carries `l`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TwoValueReport {
    pub quotient_order: usize,
    pub m_set: Vec<String>,
    pub m: u64,
    pub l: u64,
    /// Common `|C_{β,M}|` over `β ≠ 1`, when constant.
    pub omega: Option<u64>,
    pub c_one: u64,
    /// (i) `M` is a sum set in `H`.
    pub clause_i: bool,
    /// (ii) `n = (|C_{1,M}| − ω)(m − l)²`.
    pub clause_ii: bool,
    /// (iii) for `M = {1}`: `l = (k ± √n)/o(H)` with integer `√n`.
    pub clause_iii: Option<bool>,
    pub branches: Vec<SquareRootBranch>,
    /// The complement satisfies (iii) with the other sign.
    pub complement_opposite_sign: Option<bool>,
    /// (iv) for `M = H` with `o(H) > 1`: `n = 0` and `km = μ·o(N)`.
    pub clause_iv: Option<bool>,
    pub holds: bool,
}

fn sqrt_branches(k: i64, n: i64, oh: i64, target: i64) -> Vec<SquareRootBranch> {
    let root = exact_sqrt(n);
    ['+', '-']
        .into_iter()
        .map(|sign| {
            let l = root.and_then(|r| {
                let num = if sign == '+' { k + r } else { k - r };
                (num % oh == 0).then_some(num / oh)
            });
            SquareRootBranch { sign, l: l.filter(|&l| l == target) }
        })
        .collect()
}

pub fn two_value_analysis(g: &FiniteGroup, s: &Subset, n: &Subset) -> Result<TwoValueReport> {
    let p = sum_set_params(g, s)?;
    let cp = coset_profile(g, s, n)?;
    let values = cp.distinct_values();
    if values.len() > 2 {
        return Err(Error::Precondition(format!("coset profile takes {} distinct values", values.len())));
    }
    let h = &cp.quotient.group;
    let oh = h.order();
    let m = cp.x[0];
    let l = values.iter().copied().find(|&v| v != m).unwrap_or(m);
    let m_set = Subset::from_predicate(h, |a| cp.x[a] == m);
    let counts = profile(h, &m_set)?.product_counts;
    let omega = {
        let mut vals = counts[1..].to_vec();
        vals.dedup();
        match vals.as_slice() {
            [w] => Some(*w as u64),
            _ => None,
        }
    };
    let clause_i = oh == 1 || omega.is_some();
    let c_one = counts[0] as u64;
    let diff = m as i64 - l as i64;
    let n_val = p.n();
    let clause_ii = match omega {
        Some(w) => n_val == (c_one as i64 - w as i64) * diff * diff,
        None => oh == 1,
    };
    let (k, kc) = (p.k as i64, (p.v - p.k) as i64);
    let singleton = m_set.len() == 1 && oh > 1;
    let (clause_iii, branches, complement_opposite_sign) = if singleton {
        let branches = sqrt_branches(k, n_val, oh as i64, l as i64);
        let ok = exact_sqrt(n_val).is_some() && branches.iter().any(|b| b.l.is_some());
        let lc = n.len() as i64 - l as i64;
        let comp = sqrt_branches(kc, n_val, oh as i64, lc);
        let opposite = branches.iter().zip(comp.iter().rev()).any(|(b, c)| b.l.is_some() && c.l.is_some());
        (Some(ok), branches, Some(opposite))
    } else {
        (None, Vec::new(), None)
    };
    let clause_iv = (m_set.len() == oh && oh > 1).then(|| n_val == 0 && k * m as i64 == (p.mu * n.len() as u64) as i64);
    let holds = clause_i
        && clause_ii
        && clause_iii.unwrap_or(true)
        && complement_opposite_sign.unwrap_or(true)
        && clause_iv.unwrap_or(true);
    Ok(TwoValueReport {
        quotient_order: oh,
        m_set: h.set_labels(&m_set),
        m,
        l,
        omega,
        c_one,
        clause_i,
        clause_ii,
        clause_iii,
        branches,
        complement_opposite_sign,
        clause_iv,
        holds,
    })
}

fn require_index(g: &FiniteGroup, n: &Subset, want: usize) -> Result<()> {
    let idx = g.index(n)?;
    if idx != want {
        return Err(Error::Precondition(format!("{} has index {idx}, not {want}", g.format_set(n))));
    }
    if !g.is_normal(n) {
        return Err(Error::NotNormal(g.format_set(n)));
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Index2Verdict {
    pub n: i64,
    pub k: u64,
    pub n_is_square: bool,
    pub nonzero_when_k_odd: bool,
    pub holds: bool,
}

/// For a normal subgroup of index 2, `n` is a square, nonzero when `k` is odd.
pub fn index2_check(g: &FiniteGroup, s: &Subset, n: &Subset) -> Result<Index2Verdict> {
    require_index(g, n, 2)?;
    let p = sum_set_params(g, s)?;
    let nv = p.n();
    let n_is_square = exact_sqrt(nv).is_some();
    let nonzero_when_k_odd = p.k % 2 == 0 || nv != 0;
    Ok(Index2Verdict { n: nv, k: p.k, n_is_square, nonzero_when_k_odd, holds: n_is_square && nonzero_when_k_odd })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "case", rename_all = "snake_case")]
pub enum Index3Verdict {
    TwoValued(TwoValueReport),
    ThreeValued {
        x: i64,
        k_divisible_by_3: bool,
        trivial_coset_is_third: bool,
        n_is_minus_three_x_squared: bool,
        holds: bool,
    },
}

impl Index3Verdict {
    pub fn holds(&self) -> bool {
        match self {
            Index3Verdict::TwoValued(r) => r.holds,
            Index3Verdict::ThreeValued { holds, .. } => *holds,
        }
    }
}

/// Index-3 normal subgroups: three distinct intersection sizes force
/// `3 | k`, `|S ∩ N| = k/3` and `n = −3x²`, `x ≠ 0`.
pub fn index3_check(g: &FiniteGroup, s: &Subset, n: &Subset) -> Result<Index3Verdict> {
    require_index(g, n, 3)?;
    let p = sum_set_params(g, s)?;
    let cp = coset_profile(g, s, n)?;
    if cp.distinct_values().len() < 3 {
        return two_value_analysis(g, s, n).map(Index3Verdict::TwoValued);
    }
    let k = p.k as i64;
    let h = &cp.quotient.group;
    let gen = if h.element_order(1) == 3 { 1 } else { 2 };
    let xh = cp.x[gen] as i64;
    let k_divisible_by_3 = k % 3 == 0;
    let trivial_coset_is_third = 3 * cp.x[0] as i64 == k;
    let x = xh - k / 3;
    let n_is_minus_three_x_squared = x != 0 && p.n() == -3 * x * x;
    Ok(Index3Verdict::ThreeValued {
        x,
        k_divisible_by_3,
        trivial_coset_is_third,
        n_is_minus_three_x_squared,
        holds: k_divisible_by_3 && trivial_coset_is_third && n_is_minus_three_x_squared,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MuONVerdict {
    /// Central elements of `G/N` that are not squares.
    pub central_non_squares: Vec<String>,
    pub active: bool,
    pub mu_times_order_n: u64,
    pub holds: bool,
}

/// If `Z(G/N)` contains a non-square then `μ·o(N)` is even.
pub fn muon_check(g: &FiniteGroup, n: &Subset, mu: u64) -> Result<MuONVerdict> {
    let q = g.quotient(n)?;
    let h = &q.group;
    let squares = Subset::from_indices(h, (0..h.order()).map(|a| h.mul(a, a)))?;
    let central_non_squares: Vec<String> =
        h.center().iter().filter(|&z| !squares.contains(z)).map(|z| h.label(z).to_string()).collect();
    let active = !central_non_squares.is_empty();
    let mu_times_order_n = mu * n.len() as u64;
    Ok(MuONVerdict { central_non_squares, active, mu_times_order_n, holds: !active || mu_times_order_n % 2 == 0 })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{cyclic, dihedral, Subset};

    fn d4_set() -> (FiniteGroup, Subset) {
        let g = dihedral(4).unwrap();
        let s = Subset::from_labels(&g, &["x", "xt", "t"]).unwrap();
        (g, s)
    }

    #[test]
    fn admissible_examples() {
        let a = check_admissible(8, 3, 1).unwrap();
        assert!(a.admissible);
        assert_eq!((a.s_inv, a.n), (2, 1));
        let b = check_admissible(12, 5, 2).unwrap();
        assert!(b.admissible);
        assert_eq!((b.s_inv, b.n), (3, 1));
        let c = check_admissible(10, 4, 1).unwrap();
        assert!(!c.admissible);
        assert_eq!(c.s_inv, 7);
        assert_eq!(c.rejections[0].rule, "eq1-range");
        assert!(check_admissible(5, 2, 3).is_err());
        assert!(check_admissible(4, 4, 1).is_err());
    }

    #[test]
    fn complement_admissibility_maps_s_inv() {
        for v in 2..40u64 {
            for k in 1..=v / 2 {
                for mu in 0..k {
                    let a = check_admissible(v, k, mu).unwrap();
                    if !a.admissible {
                        continue;
                    }
                    let c = crate::regularity::complement_params(&PssParams::sum_set(v, k, mu)).unwrap();
                    let b = check_admissible(c.v, c.k, c.mu).unwrap();
                    assert!(b.rejections.iter().all(|r| r.rule == "size-normalization"));
                    assert_eq!(b.s_inv, a.s_inv + v as i64 - 2 * k as i64);
                    assert_eq!(b.n, a.n);
                }
            }
        }
    }

    #[test]
    fn abelian_rejections() {
        assert!(abelian_filters(15, 7, 2).iter().any(|r| r.rule == "abelian-odd-order"));
        assert!(abelian_filters(8, 3, 1).iter().any(|r| r.rule == "abelian-mu-even"));
        assert!(abelian_filters(18, 6, 2).iter().any(|r| r.rule == "abelian-n-nonzero"));
        // n = 36 − 34 = 2
        assert!(abelian_filters(17, 6, 2).iter().any(|r| r.rule == "abelian-n-square"));
        assert!(abelian_filters(16, 6, 2).is_empty());
    }

    #[test]
    fn coset_equation_in_d4() {
        let (g, s) = d4_set();
        let cp = coset_profile(&g, &s, &g.center()).unwrap();
        assert_eq!(cp.x, vec![0, 1, 1, 1]);
        let rep = verify_coset_equation(&g, &s, &g.center()).unwrap();
        assert!(rep.holds);
        let lhs: Vec<i64> = rep.rows.iter().map(|r| r.lhs).collect();
        assert_eq!(lhs, vec![3, 2, 2, 2]);

        let trivial = Subset::from_indices(&g, [0]).unwrap();
        assert!(verify_coset_equation(&g, &s, &trivial).unwrap().holds);
        let whole = verify_coset_equation(&g, &s, &Subset::full(&g)).unwrap();
        assert_eq!(whole.rows.len(), 1);
        assert_eq!(whole.rows[0].lhs, 9);

        let not_sum = Subset::from_labels(&g, &["x"]).unwrap();
        assert!(verify_coset_equation(&g, &not_sum, &trivial).is_err());
    }

    #[test]
    fn two_values_in_d4() {
        let (g, s) = d4_set();
        let r = two_value_analysis(&g, &s, &g.center()).unwrap();
        assert_eq!((r.m, r.l), (0, 1));
        assert_eq!(r.m_set, vec!["1"]);
        assert_eq!(r.clause_iii, Some(true));
        let plus = r.branches.iter().find(|b| b.sign == '+').unwrap();
        assert_eq!(plus.l, Some(1));
        assert_eq!(r.complement_opposite_sign, Some(true));
        assert!(r.holds);

        let comp = two_value_analysis(&g, &s.complement(), &g.center()).unwrap();
        assert_eq!((comp.m, comp.l), (2, 1));
        assert!(comp.branches.iter().any(|b| b.sign == '-' && b.l == Some(1)));
        assert!(comp.holds);
    }

    #[test]
    fn index_checks_in_d4() {
        let (g, s) = d4_set();
        let rot = g.generated(&[g.element("x").unwrap()]);
        let v = index2_check(&g, &s, &rot).unwrap();
        assert!(v.holds && v.n_is_square);
        assert!(index2_check(&g, &s, &g.center()).is_err());
        assert!(index3_check(&g, &s, &rot).is_err());
    }

    #[test]
    fn muon_examples() {
        let c4 = cyclic(4).unwrap();
        let triv = Subset::from_indices(&c4, [0]).unwrap();
        let m = muon_check(&c4, &triv, 1).unwrap();
        assert!(m.active && !m.holds);
        assert_eq!(m.central_non_squares, vec!["[x]", "[x3]"]);
        let c3 = cyclic(3).unwrap();
        let m3 = muon_check(&c3, &Subset::from_indices(&c3, [0]).unwrap(), 1).unwrap();
        assert!(!m3.active && m3.holds);
        let full = muon_check(&c4, &Subset::full(&c4), 3).unwrap();
        assert!(!full.active);
    }
}
