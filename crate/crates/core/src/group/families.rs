//! Constructors for the group families used by the constructions.
//!
//! Element enumerations (identity always 0):
//! - `cyclic(n)`: `x^i` at index `i`, labels `1, x, x2, ...`.
//! - `dihedral(n)`: `x^a t^e` at `a + n·e`, labels `x2t` etc.
//! - `dstar(n)`: `x^a t^e` (`e < 4`) at `a + n·e`, labels `x2t3` etc.
//! - `generalized_dihedral(A)`: `(a, ε)` at `a + |A|·ε`.
//! - `affine`/`frobenius_subgroup`: the map `x ↦ ax + b` at `j·q + b`, where `a`
//!   is the `j`-th allowed multiplier in field-index order.
//! - `direct_product(G, H)`: `(g, h)` at `g·|H| + h`, labels `g|h`.

use super::{FieldTable, FiniteGroup, FrobeniusData, GroupMetadata, Subset, MAX_ORDER};
use crate::error::{Error, Result};

fn power_label(letter: &str, i: usize) -> String {
    match i {
        0 => String::new(),
        1 => letter.to_string(),
        _ => format!("{letter}{i}"),
    }
}

fn or_one(s: String) -> String {
    if s.is_empty() {
        "1".to_string()
    } else {
        s
    }
}

/// Wraps compound labels so concatenated labels stay unambiguous.
fn atom(label: &str) -> String {
    if label.contains('|') {
        format!("({label})")
    } else {
        label.to_string()
    }
}

pub fn cyclic(n: usize) -> Result<FiniteGroup> {
    if n == 0 {
        return Err(Error::InvalidParameter("cyclic group order must be positive".into()));
    }
    if n > MAX_ORDER {
        return Err(Error::OrderTooLarge { order: n, cap: MAX_ORDER });
    }
    let labels = (0..n).map(|i| or_one(power_label("x", i))).collect();
    let mut g = FiniteGroup::from_fn(format!("cyclic:{n}"), labels, |i, j| (i + j) % n)?;
    let meta = GroupMetadata {
        center: Some(Subset::full(&g)),
        generators: vec!["x".into()],
        ..Default::default()
    };
    g.set_metadata(meta)?;
    Ok(g)
}

/// `D_n = ⟨x, t | x^n = t^2 = 1, txt = x^{-1}⟩` of order `2n`.
pub fn dihedral(n: usize) -> Result<FiniteGroup> {
    if n < 3 {
        return Err(Error::InvalidParameter(format!("dihedral:{n} needs n >= 3")));
    }
    if 2 * n > MAX_ORDER {
        return Err(Error::OrderTooLarge { order: 2 * n, cap: MAX_ORDER });
    }
    let labels = (0..2 * n)
        .map(|i| or_one(power_label("x", i % n) + &power_label("t", i / n)))
        .collect();
    let mul = |g: usize, h: usize| {
        let (a, e) = (g % n, g / n);
        let (b, f) = (h % n, h / n);
        let b = if e == 1 { (n - b) % n } else { b };
        (a + b) % n + n * ((e + f) % 2)
    };
    let mut g = FiniteGroup::from_fn(format!("dihedral:{n}"), labels, mul)?;
    let center = if n % 2 == 0 {
        Subset::from_indices(&g, [0, n / 2])?
    } else {
        Subset::from_indices(&g, [0])?
    };
    let rotations = Subset::from_indices(&g, 0..n)?;
    let meta = GroupMetadata {
        normal_subgroups: vec![center.clone(), rotations],
        center: Some(center),
        generators: vec!["x".into(), "t".into()],
        ..Default::default()
    };
    g.set_metadata(meta)?;
    Ok(g)
}

/// `D*_n = ⟨x, t | x^n = t^4 = 1, x^t = x^{-1}⟩` of order `4n`, `n` odd.
pub fn dstar(n: usize) -> Result<FiniteGroup> {
    if n < 3 || n % 2 == 0 {
        return Err(Error::InvalidParameter(format!("dstar:{n} needs odd n >= 3")));
    }
    if 4 * n > MAX_ORDER {
        return Err(Error::OrderTooLarge { order: 4 * n, cap: MAX_ORDER });
    }
    let labels = (0..4 * n)
        .map(|i| or_one(power_label("x", i % n) + &power_label("t", i / n)))
        .collect();
    let mul = |g: usize, h: usize| {
        let (a, e) = (g % n, g / n);
        let (b, f) = (h % n, h / n);
        let b = if e % 2 == 1 { (n - b) % n } else { b };
        (a + b) % n + n * ((e + f) % 4)
    };
    let mut g = FiniteGroup::from_fn(format!("dstar:{n}"), labels, mul)?;
    let center = Subset::from_indices(&g, [0, 2 * n])?;
    let meta = GroupMetadata {
        normal_subgroups: vec![center.clone()],
        center: Some(center),
        generators: vec!["x".into(), "t".into()],
        central_quotient: Some(format!("dihedral:{n}")),
        ..Default::default()
    };
    g.set_metadata(meta)?;
    Ok(g)
}

/// `Dih A = A ⋊ {1, t}` with `t` acting by inversion on the abelian group `A`.
pub fn generalized_dihedral(a: &FiniteGroup) -> Result<FiniteGroup> {
    if !a.is_abelian() {
        return Err(Error::NotAbelian(format!("dihof:{} needs an abelian base", a.spec())));
    }
    let m = a.order();
    if 2 * m > MAX_ORDER {
        return Err(Error::OrderTooLarge { order: 2 * m, cap: MAX_ORDER });
    }
    let labels = (0..2 * m)
        .map(|i| {
            let (x, e) = (i % m, i / m);
            match (x, e) {
                (_, 0) => a.label(x).to_string(),
                (0, _) => "t".to_string(),
                _ => format!("{}t", atom(a.label(x))),
            }
        })
        .collect();
    let mul = |g: usize, h: usize| {
        let (x, e) = (g % m, g / m);
        let (y, f) = (h % m, h / m);
        let y = if e == 1 { a.inv(y) } else { y };
        a.mul(x, y) + m * ((e + f) % 2)
    };
    let mut g = FiniteGroup::from_fn(format!("dihof:{}", a.spec()), labels, mul)?;
    let base = Subset::from_indices(&g, 0..m)?;
    let meta = GroupMetadata {
        normal_subgroups: vec![base],
        generators: vec![format!("{} generators", a.spec()), "t".into()],
        ..Default::default()
    };
    g.set_metadata(meta)?;
    Ok(g)
}

/// The additive group `EA(q)` of `GF(q)`; labels are field element indices.
pub fn elementary_abelian(q: usize) -> Result<FiniteGroup> {
    let f = FieldTable::new(q)?;
    let labels = (0..q).map(|i| i.to_string()).collect();
    let mut g = FiniteGroup::from_fn(format!("ea:{q}"), labels, |a, b| f.add(a, b))?;
    let meta = GroupMetadata {
        center: Some(Subset::full(&g)),
        field_order: Some(q),
        ..Default::default()
    };
    g.set_metadata(meta)?;
    Ok(g)
}

fn affine_label(a: usize, b: usize) -> String {
    match (a, b) {
        (1, 0) => "1".to_string(),
        (1, _) => format!("x+{b}"),
        (_, 0) => format!("{a}x"),
        _ => format!("{a}x+{b}"),
    }
}

fn affine_like(q: usize, spec: String, field: &FieldTable, mults: &[usize]) -> Result<FiniteGroup> {
    let order = q * mults.len();
    if order > MAX_ORDER {
        return Err(Error::OrderTooLarge { order, cap: MAX_ORDER });
    }
    let mut slot = vec![usize::MAX; q];
    for (j, &a) in mults.iter().enumerate() {
        slot[a] = j;
    }
    let coords: Vec<(usize, usize)> = (0..order).map(|i| (mults[i / q], i % q)).collect();
    let labels = coords.iter().map(|&(a, b)| affine_label(a, b)).collect();
    // (a,b)(c,d) = (x ↦ a(cx + d) + b) = (ac, ad + b)
    let mul = |g: usize, h: usize| {
        let (a, b) = coords[g];
        let (c, d) = coords[h];
        slot[field.mul(a, c)] * q + field.add(field.mul(a, d), b)
    };
    let mut g = FiniteGroup::from_fn(spec, labels, mul)?;
    let kernel = Subset::from_indices(&g, 0..q)?;
    let complement = Subset::from_predicate(&g, |i| coords[i].1 == 0);
    let meta = GroupMetadata {
        normal_subgroups: vec![kernel.clone()],
        frobenius: Some(FrobeniusData { kernel, complement }),
        generators: vec!["x+1".into(), "multipliers".into()],
        affine_coords: Some(coords),
        field_order: Some(q),
        ..Default::default()
    };
    g.set_metadata(meta)?;
    Ok(g)
}

/// `Aff(q)`: invertible maps `x ↦ ax + b` over `GF(q)`, kernel `{(1,b)}`,
/// complement `{(a,0)}`.
pub fn affine(q: usize) -> Result<FiniteGroup> {
    if q < 3 {
        return Err(Error::InvalidParameter(format!("aff:{q} needs q >= 3")));
    }
    let field = FieldTable::new(q)?;
    let mults: Vec<usize> = (1..q).collect();
    affine_like(q, format!("aff:{q}"), &field, &mults)
}

/// `EA(q) ⋊ C_d`, the subgroup of `Aff(q)` whose multipliers form the order-`d`
/// subgroup of `GF(q)^*`.
pub fn frobenius_subgroup(q: usize, d: usize) -> Result<FiniteGroup> {
    let field = FieldTable::new(q)?;
    if d < 2 {
        return Err(Error::InvalidParameter(format!(
            "frob:{q}:{d}: complement must be nontrivial (d >= 2)"
        )));
    }
    if (q - 1) % d != 0 {
        return Err(Error::InvalidParameter(format!("frob:{q}:{d}: {d} does not divide {}", q - 1)));
    }
    let mults = field.multiplicative_subgroup(d)?;
    affine_like(q, format!("frob:{q}:{d}"), &field, &mults)
}

pub fn direct_product(g: &FiniteGroup, h: &FiniteGroup) -> Result<FiniteGroup> {
    let (vg, vh) = (g.order(), h.order());
    let order = vg.saturating_mul(vh);
    if order > MAX_ORDER {
        return Err(Error::OrderTooLarge { order, cap: MAX_ORDER });
    }
    let labels = (0..order)
        .map(|i| format!("{}|{}", atom(g.label(i / vh)), atom(h.label(i % vh))))
        .collect();
    let mul = |a: usize, b: usize| g.mul(a / vh, b / vh) * vh + h.mul(a % vh, b % vh);
    let mut p = FiniteGroup::from_fn(format!("prod:{},{}", g.spec(), h.spec()), labels, mul)?;

    let product = |p: &FiniteGroup, a: &Subset, b: &Subset| {
        Subset::from_predicate(p, |i| a.contains(i / vh) && b.contains(i % vh))
    };
    let (gc, hc) = (g.center(), h.center());
    let (g1, h1) = (Subset::from_indices(g, [0])?, Subset::from_indices(h, [0])?);
    let mut gn = g.metadata().normal_subgroups.clone();
    gn.push(Subset::full(g));
    let mut hn = h.metadata().normal_subgroups.clone();
    hn.push(Subset::full(h));
    let mut normals = Vec::new();
    for a in gn.iter().chain([&g1]) {
        for b in hn.iter().chain([&h1]) {
            let n = product(&p, a, b);
            if n.len() > 1 && n.len() < order && !normals.contains(&n) {
                normals.push(n);
            }
        }
    }
    let meta = GroupMetadata {
        center: Some(product(&p, &gc, &hc)),
        normal_subgroups: normals,
        generators: vec![format!("{} × {}", g.spec(), h.spec())],
        ..Default::default()
    };
    p.set_metadata(meta)?;
    Ok(p)
}
