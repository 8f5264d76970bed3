//! Brute-force recomputation used as an oracle by the integration tests.
//! Everything here works from raw multiplication and never calls the
//! library's counting or classification code.

#![allow(dead_code)]

use sumset_core::FiniteGroup;

pub fn inverse(g: &FiniteGroup, x: usize) -> usize {
    let e = g.identity();
    (0..g.order()).find(|&y| g.mul(x, y) == e).expect("every element has an inverse")
}

/// Ordered-pair counts `(#{xy = g}, #{xy⁻¹ = g})` for the elements of `s`.
pub fn pair_counts(g: &FiniteGroup, s: &[usize]) -> (Vec<u32>, Vec<u32>) {
    let v = g.order();
    let inv: Vec<usize> = (0..v).map(|x| inverse(g, x)).collect();
    let mut prod = vec![0; v];
    let mut quot = vec![0; v];
    for &x in s {
        for &y in s {
            prod[g.mul(x, y)] += 1;
            quot[g.mul(x, inv[y])] += 1;
        }
    }
    (prod, quot)
}

/// The common value of `counts` over the elements selected by `keep`,
/// `Some(None)` when nothing is selected, `None` when the values differ.
fn constant_on(counts: &[u32], keep: impl Fn(usize) -> bool) -> Option<Option<u64>> {
    let mut seen = None;
    for (_, &c) in counts.iter().enumerate().filter(|(x, _)| keep(*x)) {
        match seen {
            None => seen = Some(c),
            Some(d) if d != c => return None,
            _ => {}
        }
    }
    Some(seen.map(u64::from))
}

/// `μ` when `s` is a sum set.
pub fn sum_set_mu(g: &FiniteGroup, s: &[usize]) -> Option<u64> {
    let (prod, _) = pair_counts(g, s);
    let e = g.identity();
    constant_on(&prod, |x| x != e).flatten()
}

/// `λ` when `s` is a difference set.
pub fn difference_lambda(g: &FiniteGroup, s: &[usize]) -> Option<u64> {
    let (_, quot) = pair_counts(g, s);
    let e = g.identity();
    constant_on(&quot, |x| x != e).flatten()
}

pub fn is_reversible(g: &FiniteGroup, s: &[usize]) -> bool {
    s.iter().all(|&x| s.contains(&inverse(g, x)))
}

/// Checks that `s` is a `(v, k, λ, μ)` partial sum set, element by element.
pub fn check_pss(g: &FiniteGroup, s: &[usize], want: (u64, u64, u64, u64)) -> Result<(), String> {
    let (v, k, lambda, mu) = want;
    if g.order() as u64 != v || s.len() as u64 != k {
        return Err(format!("size ({}, {}) instead of ({v}, {k})", g.order(), s.len()));
    }
    let (prod, _) = pair_counts(g, s);
    for (x, &c) in prod.iter().enumerate() {
        if x == g.identity() {
            continue;
        }
        let expected = if s.contains(&x) { lambda } else { mu };
        if u64::from(c) != expected {
            return Err(format!("{} has {c} representations, expected {expected}", g.label(x)));
        }
    }
    Ok(())
}

pub fn check_sum_set(g: &FiniteGroup, s: &[usize], want: (u64, u64, u64)) -> Result<(), String> {
    check_pss(g, s, (want.0, want.1, want.2, want.2))
}

pub fn is_central_involution(g: &FiniteGroup, z: usize) -> bool {
    z != g.identity() && g.mul(z, z) == g.identity() && (0..g.order()).all(|x| g.mul(x, z) == g.mul(z, x))
}

/// Type 1: misses `{1, z}` and meets every other coset at most once.
pub fn is_type1(g: &FiniteGroup, s: &[usize], z: usize) -> bool {
    !s.contains(&g.identity()) && !s.contains(&z) && s.iter().all(|&x| !s.contains(&g.mul(x, z)))
}

/// Type 2: meets `{1, z}` once and every other coset in 0 or 2 elements.
pub fn is_type2(g: &FiniteGroup, s: &[usize], z: usize) -> bool {
    let e = g.identity();
    (s.contains(&e) != s.contains(&z))
        && s.iter().filter(|&&x| x != e && x != z).all(|&x| s.contains(&g.mul(x, z)))
}

/// Checks the multiplication of a dihedral group of order `2n` whose
/// element `x^a t^e` has index `a + n·e`.
pub fn dihedral_table_matches(g: &FiniteGroup, n: usize) -> bool {
    let elem = |i: usize| (i % n, i / n);
    let index = |a: usize, e: usize| a % n + n * (e % 2);
    g.order() == 2 * n
        && (0..2 * n).all(|i| {
            (0..2 * n).all(|j| {
                let ((a, e), (b, f)) = (elem(i), elem(j));
                let rot = if e == 0 { a + b } else { a + n - b };
                g.mul(i, j) == index(rot, e + f)
            })
        })
}

/// Integer group-ring product by direct convolution.
pub fn convolve(g: &FiniteGroup, x: &[i64], y: &[i64]) -> Vec<i64> {
    let mut out = vec![0; g.order()];
    for (a, &ca) in x.iter().enumerate().filter(|(_, c)| **c != 0) {
        for (b, &cb) in y.iter().enumerate().filter(|(_, c)| **c != 0) {
            out[g.mul(a, b)] += ca * cb;
        }
    }
    out
}

pub fn indicator(g: &FiniteGroup, s: &[usize]) -> Vec<i64> {
    let mut out = vec![0; g.order()];
    for &x in s {
        out[x] = 1;
    }
    out
}

/// The left coset of `n` containing each element, keyed by its smallest member.
pub fn coset_keys(g: &FiniteGroup, n: &[usize]) -> Vec<usize> {
    (0..g.order()).map(|x| n.iter().map(|&h| g.mul(x, h)).min().expect("nonempty")).collect()
}

pub fn is_normal_subgroup(g: &FiniteGroup, n: &[usize]) -> bool {
    n.contains(&g.identity())
        && n.iter().all(|&a| n.iter().all(|&b| n.contains(&g.mul(a, inverse(g, b)))))
        && (0..g.order()).all(|x| n.iter().all(|&h| n.contains(&g.mul(g.mul(x, h), inverse(g, x)))))
}
