use super::{FiniteGroup, GroupId};
use crate::error::{Error, Result};

/// A set of elements of one parent group, stored as a membership mask.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Subset {
    group: GroupId,
    mask: Vec<bool>,
    len: usize,
}

impl Subset {
    pub fn empty(g: &FiniteGroup) -> Self {
        Subset { group: g.id(), mask: vec![false; g.order()], len: 0 }
    }

    pub fn full(g: &FiniteGroup) -> Self {
        Subset { group: g.id(), mask: vec![true; g.order()], len: g.order() }
    }

    pub fn from_mask(g: &FiniteGroup, mask: Vec<bool>) -> Result<Self> {
        if mask.len() != g.order() {
            return Err(Error::GroupMismatch);
        }
        let len = mask.iter().filter(|&&b| b).count();
        Ok(Subset { group: g.id(), mask, len })
    }

    /// Duplicates are ignored.
    pub fn from_indices(g: &FiniteGroup, indices: impl IntoIterator<Item = usize>) -> Result<Self> {
        let mut s = Self::empty(g);
        for i in indices {
            g.check_element(i)?;
            s.insert(i);
        }
        Ok(s)
    }

    pub fn from_labels<S: AsRef<str>>(g: &FiniteGroup, labels: &[S]) -> Result<Self> {
        let idx = labels.iter().map(|l| g.element(l.as_ref())).collect::<Result<Vec<_>>>()?;
        Self::from_indices(g, idx)
    }

    pub fn from_predicate(g: &FiniteGroup, pred: impl Fn(usize) -> bool) -> Self {
        let mask: Vec<bool> = (0..g.order()).map(pred).collect();
        Self::from_mask(g, mask).expect("mask built from group order")
    }

    pub fn group_id(&self) -> GroupId {
        self.group
    }

    /// Order of the parent group.
    pub fn universe(&self) -> usize {
        self.mask.len()
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn contains(&self, g: usize) -> bool {
        self.mask.get(g).copied().unwrap_or(false)
    }

    pub fn mask(&self) -> &[bool] {
        &self.mask
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.mask.iter().enumerate().filter_map(|(i, &b)| b.then_some(i))
    }

    pub fn indices(&self) -> Vec<usize> {
        self.iter().collect()
    }

    /// Returns whether the element was newly added.
    pub fn insert(&mut self, g: usize) -> bool {
        let fresh = !self.mask[g];
        if fresh {
            self.mask[g] = true;
            self.len += 1;
        }
        fresh
    }

    pub fn remove(&mut self, g: usize) -> bool {
        let had = self.mask[g];
        if had {
            self.mask[g] = false;
            self.len -= 1;
        }
        had
    }

    pub fn with(&self, g: usize) -> Self {
        let mut s = self.clone();
        s.insert(g);
        s
    }

    pub fn complement(&self) -> Self {
        let mask: Vec<bool> = self.mask.iter().map(|b| !b).collect();
        Subset { group: self.group, len: mask.len() - self.len, mask }
    }

    fn zip(&self, other: &Subset, f: impl Fn(bool, bool) -> bool) -> Result<Subset> {
        if self.group != other.group {
            return Err(Error::GroupMismatch);
        }
        let mask: Vec<bool> = self.mask.iter().zip(&other.mask).map(|(&a, &b)| f(a, b)).collect();
        let len = mask.iter().filter(|&&b| b).count();
        Ok(Subset { group: self.group, mask, len })
    }

    pub fn union(&self, other: &Subset) -> Result<Subset> {
        self.zip(other, |a, b| a || b)
    }

    pub fn intersection(&self, other: &Subset) -> Result<Subset> {
        self.zip(other, |a, b| a && b)
    }

    pub fn difference(&self, other: &Subset) -> Result<Subset> {
        self.zip(other, |a, b| a && !b)
    }

    pub fn is_subset_of(&self, other: &Subset) -> bool {
        self.group == other.group && self.mask.iter().zip(&other.mask).all(|(&a, &b)| !a || b)
    }
}
