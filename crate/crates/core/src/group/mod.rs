//! Finite groups stored as Cayley tables.
//!
//! Every group has its identity at index 0 and a fixed, documented element
//! enumeration (see the constructors in [`families`]). Tables are validated
//! when built: identity and inverse laws, the Latin-square property, and
//! associativity (exhaustive up to order 256, 10⁵ random triples above).

mod families;
mod field;
mod quotient;
mod spec;
mod subgroups;
mod subset;

pub use families::{
    affine, cyclic, dihedral, direct_product, dstar, elementary_abelian, frobenius_subgroup,
    generalized_dihedral,
};
pub use field::FieldTable;
pub use quotient::Quotient;
pub use spec::parse_group;
pub use subgroups::EXHAUSTIVE_SUBGROUP_CAP;
pub use subset::Subset;

use std::collections::HashMap;
use std::sync::atomic::{AtomicU64, Ordering};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

/// Largest group order backed by a full table (16 MiB of 2-byte indices).
pub const MAX_ORDER: usize = 4096;

const EXHAUSTIVE_ASSOCIATIVITY_CAP: usize = 256;
const RANDOM_ASSOCIATIVITY_TRIPLES: usize = 100_000;

static NEXT_GROUP_ID: AtomicU64 = AtomicU64::new(1);

/// Identity of a constructed group; subsets carry it so they cannot be
/// paired with a different table.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct GroupId(u64);

impl GroupId {
    fn fresh() -> Self {
        GroupId(NEXT_GROUP_ID.fetch_add(1, Ordering::Relaxed))
    }
}

/// Frobenius kernel and complement recorded by the affine constructors.
#[derive(Debug, Clone)]
pub struct FrobeniusData {
    pub kernel: Subset,
    pub complement: Subset,
}

/// Structural facts known from the construction.
#[derive(Debug, Clone, Default)]
pub struct GroupMetadata {
    pub center: Option<Subset>,
    pub normal_subgroups: Vec<Subset>,
    pub frobenius: Option<FrobeniusData>,
    pub generators: Vec<String>,
    /// Spec of the group the quotient by the center is isomorphic to, when known.
    pub central_quotient: Option<String>,
    /// `(a, b)` field indices of each element for subgroups of `Aff(q)`.
    pub affine_coords: Option<Vec<(usize, usize)>>,
    pub field_order: Option<usize>,
}

#[derive(Debug, Clone)]
pub struct FiniteGroup {
    id: GroupId,
    order: usize,
    table: Vec<u16>,
    inverses: Vec<u16>,
    labels: Vec<String>,
    label_index: HashMap<String, usize>,
    spec: String,
    meta: GroupMetadata,
}

impl FiniteGroup {
    /// Builds a group from a multiplication rule and validates every group law.
    pub fn from_fn(
        spec: impl Into<String>,
        labels: Vec<String>,
        mul: impl Fn(usize, usize) -> usize,
    ) -> Result<Self> {
        let order = labels.len();
        if order > MAX_ORDER {
            return Err(Error::OrderTooLarge { order, cap: MAX_ORDER });
        }
        let mut table = Vec::with_capacity(order * order);
        for g in 0..order {
            for h in 0..order {
                let p = mul(g, h);
                if p >= order {
                    return Err(Error::NotAGroup(format!("product {g}*{h} = {p} out of range")));
                }
                table.push(p as u16);
            }
        }
        Self::from_table(spec, labels, table)
    }

    /// Builds a group from a row-major table, validating it.
    pub fn from_table(spec: impl Into<String>, labels: Vec<String>, table: Vec<u16>) -> Result<Self> {
        let order = labels.len();
        if order == 0 {
            return Err(Error::NotAGroup("empty table".into()));
        }
        if order > MAX_ORDER {
            return Err(Error::OrderTooLarge { order, cap: MAX_ORDER });
        }
        if table.len() != order * order {
            return Err(Error::NotAGroup(format!(
                "table has {} entries, expected {}",
                table.len(),
                order * order
            )));
        }
        let mut label_index = HashMap::with_capacity(order);
        for (i, l) in labels.iter().enumerate() {
            if label_index.insert(l.clone(), i).is_some() {
                return Err(Error::NotAGroup(format!("duplicate label `{l}`")));
            }
        }
        let mut group = FiniteGroup {
            id: GroupId::fresh(),
            order,
            table,
            inverses: Vec::new(),
            labels,
            label_index,
            spec: spec.into(),
            meta: GroupMetadata::default(),
        };
        group.validate()?;
        Ok(group)
    }

    fn validate(&mut self) -> Result<()> {
        let v = self.order;
        for g in 0..v {
            if self.mul(0, g) != g || self.mul(g, 0) != g {
                return Err(Error::NotAGroup(format!("index 0 is not an identity at {g}")));
            }
        }
        let mut seen = vec![0usize; v];
        for r in 0..v {
            for c in 0..v {
                let x = self.table[r * v + c] as usize;
                if x >= v || seen[x] == r * 2 + 1 {
                    return Err(Error::NotAGroup(format!("row {r} is not a permutation")));
                }
                seen[x] = r * 2 + 1;
            }
        }
        seen.iter_mut().for_each(|s| *s = 0);
        for c in 0..v {
            for r in 0..v {
                let x = self.table[r * v + c] as usize;
                if seen[x] == c * 2 + 2 {
                    return Err(Error::NotAGroup(format!("column {c} is not a permutation")));
                }
                seen[x] = c * 2 + 2;
            }
        }
        let mut inverses = vec![0u16; v];
        for g in 0..v {
            let h = (0..v)
                .find(|&h| self.mul(g, h) == 0)
                .ok_or_else(|| Error::NotAGroup(format!("{g} has no inverse")))?;
            if self.mul(h, g) != 0 {
                return Err(Error::NotAGroup(format!("{g} has no two-sided inverse")));
            }
            inverses[g] = h as u16;
        }
        self.inverses = inverses;

        if v <= EXHAUSTIVE_ASSOCIATIVITY_CAP {
            for a in 0..v {
                for b in 0..v {
                    let ab = self.mul(a, b);
                    for c in 0..v {
                        if self.mul(ab, c) != self.mul(a, self.mul(b, c)) {
                            return Err(Error::NotAGroup(format!("({a}*{b})*{c} != {a}*({b}*{c})")));
                        }
                    }
                }
            }
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(0);
            for _ in 0..RANDOM_ASSOCIATIVITY_TRIPLES {
                let (a, b, c) = (rng.gen_range(0..v), rng.gen_range(0..v), rng.gen_range(0..v));
                if self.mul(self.mul(a, b), c) != self.mul(a, self.mul(b, c)) {
                    return Err(Error::NotAGroup(format!("({a}*{b})*{c} != {a}*({b}*{c})")));
                }
            }
        }
        Ok(())
    }

    /// Installs metadata after checking that every recorded subgroup is closed
    /// (and normal where declared so).
    pub fn set_metadata(&mut self, meta: GroupMetadata) -> Result<()> {
        let mut closed: Vec<&Subset> = meta.normal_subgroups.iter().collect();
        closed.extend(meta.center.iter());
        for n in &closed {
            self.check_subset(n)?;
            if !self.is_subgroup(n) {
                return Err(Error::NotASubgroup(format!("metadata subgroup {}", self.format_set(n))));
            }
            if !self.is_normal(n) {
                return Err(Error::NotNormal(format!("metadata subgroup {}", self.format_set(n))));
            }
        }
        if let Some(f) = &meta.frobenius {
            self.check_subset(&f.kernel)?;
            self.check_subset(&f.complement)?;
            if !self.is_subgroup(&f.kernel) || !self.is_normal(&f.kernel) {
                return Err(Error::NotNormal("Frobenius kernel".into()));
            }
            if !self.is_subgroup(&f.complement) {
                return Err(Error::NotASubgroup("Frobenius complement".into()));
            }
        }
        if let Some(coords) = &meta.affine_coords {
            if coords.len() != self.order {
                return Err(Error::InvalidParameter("affine coordinate table length".into()));
            }
        }
        self.meta = meta;
        Ok(())
    }

    pub fn id(&self) -> GroupId {
        self.id
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn spec(&self) -> &str {
        &self.spec
    }

    pub fn metadata(&self) -> &GroupMetadata {
        &self.meta
    }

    pub fn identity(&self) -> usize {
        0
    }

    #[inline]
    pub fn mul(&self, g: usize, h: usize) -> usize {
        self.table[g * self.order + h] as usize
    }

    #[inline]
    pub fn inv(&self, g: usize) -> usize {
        self.inverses[g] as usize
    }

    /// Row of the Cayley table for left multiplication by `g`.
    #[inline]
    pub fn row(&self, g: usize) -> &[u16] {
        &self.table[g * self.order..(g + 1) * self.order]
    }

    pub fn table(&self) -> &[u16] {
        &self.table
    }

    pub fn inverse_table(&self) -> Vec<usize> {
        self.inverses.iter().map(|&i| i as usize).collect()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, g: usize) -> &str {
        &self.labels[g]
    }

    pub fn element(&self, label: &str) -> Result<usize> {
        self.label_index
            .get(label)
            .copied()
            .ok_or_else(|| Error::UnknownLabel(label.to_string()))
    }

    pub fn check_element(&self, g: usize) -> Result<()> {
        if g < self.order {
            Ok(())
        } else {
            Err(Error::ElementOutOfRange { index: g, order: self.order })
        }
    }

    pub fn check_subset(&self, s: &Subset) -> Result<()> {
        if s.group_id() == self.id && s.universe() == self.order {
            Ok(())
        } else {
            Err(Error::GroupMismatch)
        }
    }

    /// `g^t` for any integer `t`; negative exponents go through the inverse.
    pub fn pow(&self, g: usize, t: i64) -> usize {
        let o = self.element_order(g) as i64;
        let e = t.rem_euclid(o);
        let mut acc = 0;
        for _ in 0..e {
            acc = self.mul(acc, g);
        }
        acc
    }

    pub fn element_order(&self, g: usize) -> usize {
        let mut x = g;
        let mut o = 1;
        while x != 0 {
            x = self.mul(x, g);
            o += 1;
        }
        o
    }

    pub fn is_abelian(&self) -> bool {
        (0..self.order).all(|g| (g + 1..self.order).all(|h| self.mul(g, h) == self.mul(h, g)))
    }

    /// The center, from metadata when recorded, otherwise by commutation scan.
    pub fn center(&self) -> Subset {
        if let Some(c) = &self.meta.center {
            return c.clone();
        }
        Subset::from_predicate(self, |g| (0..self.order).all(|h| self.mul(g, h) == self.mul(h, g)))
    }

    /// `x^{-1} g x`.
    pub fn conjugate(&self, g: usize, x: usize) -> usize {
        self.mul(self.mul(self.inv(x), g), x)
    }

    /// `g^{-1} S g`.
    pub fn conjugate_subset(&self, s: &Subset, g: usize) -> Result<Subset> {
        self.check_subset(s)?;
        self.check_element(g)?;
        Subset::from_indices(self, s.iter().map(|x| self.conjugate(x, g)))
    }

    pub fn is_subgroup(&self, s: &Subset) -> bool {
        if s.group_id() != self.id || !s.contains(0) {
            return false;
        }
        let elems: Vec<usize> = s.iter().collect();
        elems.iter().all(|&a| elems.iter().all(|&b| s.contains(self.mul(a, b))))
    }

    /// Closed under conjugation by every element (does not check closure).
    pub fn is_normal(&self, s: &Subset) -> bool {
        s.group_id() == self.id
            && (0..self.order).all(|g| s.iter().all(|n| s.contains(self.conjugate(n, g))))
    }

    /// Index `[G : N]` of a subgroup.
    pub fn index(&self, n: &Subset) -> Result<usize> {
        self.check_subset(n)?;
        if !self.is_subgroup(n) {
            return Err(Error::NotASubgroup(self.format_set(n)));
        }
        Ok(self.order / n.len())
    }

    /// `{s^{-1} : s ∈ S}`.
    pub fn inverse_set(&self, s: &Subset) -> Subset {
        Subset::from_indices(self, s.iter().map(|x| self.inv(x))).expect("indices in range")
    }

    /// Right translate `Sg`.
    pub fn right_translate(&self, s: &Subset, g: usize) -> Subset {
        Subset::from_indices(self, s.iter().map(|x| self.mul(x, g))).expect("indices in range")
    }

    /// Subgroup generated by the given elements.
    pub fn generated(&self, gens: &[usize]) -> Subset {
        let mut mask = vec![false; self.order];
        mask[0] = true;
        let mut frontier = vec![0usize];
        while let Some(x) = frontier.pop() {
            for &g in gens {
                let y = self.mul(x, g);
                if !mask[y] {
                    mask[y] = true;
                    frontier.push(y);
                }
            }
        }
        Subset::from_mask(self, mask).expect("mask has group order")
    }

    /// Parses a comma-separated element list: all labels, or all `#index` forms.
    pub fn parse_set(&self, text: &str) -> Result<Subset> {
        let items: Vec<&str> = text.split(',').map(str::trim).filter(|s| !s.is_empty()).collect();
        let indexed = items.iter().filter(|s| s.starts_with('#')).count();
        if indexed != 0 && indexed != items.len() {
            return Err(Error::InvalidParameter(
                "element list mixes labels and #indices".into(),
            ));
        }
        let mut out = Vec::with_capacity(items.len());
        for item in items {
            let g = if let Some(num) = item.strip_prefix('#') {
                let g: usize = num
                    .parse()
                    .map_err(|_| Error::InvalidParameter(format!("bad element index `{item}`")))?;
                self.check_element(g)?;
                g
            } else {
                self.element(item)?
            };
            out.push(g);
        }
        Subset::from_indices(self, out)
    }

    pub fn set_labels(&self, s: &Subset) -> Vec<String> {
        s.iter().map(|g| self.labels[g].clone()).collect()
    }

    pub fn format_set(&self, s: &Subset) -> String {
        format!("{{{}}}", self.set_labels(s).join(","))
    }
}

impl PartialEq for FiniteGroup {
    /// Tables and labels equal; ids are ignored.
    fn eq(&self, other: &Self) -> bool {
        self.table == other.table && self.labels == other.labels
    }
}

#[derive(Serialize)]
struct GroupJson<'a> {
    spec: &'a str,
    order: usize,
    labels: &'a [String],
    mul_table: &'a [u16],
    metadata: MetadataJson,
}

#[derive(Serialize)]
struct MetadataJson {
    center: Vec<String>,
    normal_subgroups: Vec<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    frobenius_kernel: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    frobenius_complement: Option<Vec<String>>,
    generators: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    central_quotient: Option<String>,
}

impl Serialize for FiniteGroup {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let m = &self.meta;
        GroupJson {
            spec: &self.spec,
            order: self.order,
            labels: &self.labels,
            mul_table: &self.table,
            metadata: MetadataJson {
                center: self.set_labels(&self.center()),
                normal_subgroups: m.normal_subgroups.iter().map(|n| self.set_labels(n)).collect(),
                frobenius_kernel: m.frobenius.as_ref().map(|f| self.set_labels(&f.kernel)),
                frobenius_complement: m.frobenius.as_ref().map(|f| self.set_labels(&f.complement)),
                generators: m.generators.clone(),
                central_quotient: m.central_quotient.clone(),
            },
        }
        .serialize(serializer)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_non_group_tables() {
        let labels = vec!["1".to_string(), "a".to_string()];
        // a*a = a breaks the Latin-square property
        let err = FiniteGroup::from_table("bad", labels.clone(), vec![0, 1, 1, 1]).unwrap_err();
        assert!(matches!(err, Error::NotAGroup(_)));
        let err = FiniteGroup::from_table("bad", labels, vec![0, 1, 1]).unwrap_err();
        assert!(matches!(err, Error::NotAGroup(_)));
    }

    #[test]
    fn rejects_nonassociative_loop() {
        // Latin square of order 5 with identity 0 that is not a group.
        let t: [[u16; 5]; 5] = [
            [0, 1, 2, 3, 4],
            [1, 0, 3, 4, 2],
            [2, 4, 0, 1, 3],
            [3, 2, 4, 0, 1],
            [4, 3, 1, 2, 0],
        ];
        let labels = (0..5).map(|i| i.to_string()).collect();
        let err = FiniteGroup::from_table("loop", labels, t.concat()).unwrap_err();
        assert!(matches!(err, Error::NotAGroup(_)), "{err}");
    }

    #[test]
    fn rejects_oversized_groups() {
        let err = cyclic(MAX_ORDER + 1).unwrap_err();
        assert!(matches!(err, Error::OrderTooLarge { .. }));
    }

    #[test]
    fn pow_and_order() {
        let c12 = cyclic(12).unwrap();
        let x2 = c12.element("x2").unwrap();
        assert_eq!(c12.element_order(x2), 6);
        assert_eq!(c12.pow(1, -1), 11);
        assert_eq!(c12.pow(1, 25), 1);
        let c4 = cyclic(4).unwrap();
        assert_eq!(c4.element_order(2), 2);
    }

    #[test]
    fn parse_set_forms() {
        let d4 = dihedral(4).unwrap();
        let s = d4.parse_set("x,xt,t").unwrap();
        assert_eq!(s.len(), 3);
        let s2 = d4.parse_set("#1,#5,#4").unwrap();
        assert_eq!(s, s2);
        assert!(d4.parse_set("x,#4").is_err());
        assert!(d4.parse_set("#99").is_err());
        assert!(d4.parse_set("y").is_err());
    }

    #[test]
    fn conjugates_of_affine_complement_meet_trivially() {
        let g = affine(3).unwrap();
        let h = g.metadata().frobenius.as_ref().unwrap().complement.clone();
        let conjugates: Vec<Subset> = (0..g.order()).map(|x| g.conjugate_subset(&h, x).unwrap()).collect();
        let mut distinct = 0;
        for a in &conjugates {
            for b in &conjugates {
                if a != b {
                    distinct += 1;
                    assert_eq!(a.intersection(b).unwrap().len(), 1);
                }
            }
        }
        assert!(distinct > 0);
    }

    #[test]
    fn json_shape() {
        let c3 = cyclic(3).unwrap();
        let v = serde_json::to_value(&c3).unwrap();
        assert_eq!(v["order"], 3);
        assert_eq!(v["mul_table"].as_array().unwrap().len(), 9);
        assert_eq!(v["labels"][2], "x2");
    }
}
