use super::{FiniteGroup, Subset};
use crate::error::{Error, Result};

/// `G/N` together with the canonical projection.
///
/// Cosets are numbered by their smallest element index, so the trivial coset
/// `N` is coset 0 and its label is the identity's.
#[derive(Debug, Clone)]
pub struct Quotient {
    pub group: FiniteGroup,
    /// Element index of `G` → coset index.
    pub projection: Vec<usize>,
    /// Smallest element of each coset.
    pub representatives: Vec<usize>,
}

impl Quotient {
    pub fn coset(&self, alpha: usize) -> impl Iterator<Item = usize> + '_ {
        self.projection.iter().enumerate().filter_map(move |(g, &c)| (c == alpha).then_some(g))
    }
}

impl FiniteGroup {
    pub fn quotient(&self, n: &Subset) -> Result<Quotient> {
        self.check_subset(n)?;
        if !self.is_subgroup(n) {
            return Err(Error::NotASubgroup(self.format_set(n)));
        }
        if !self.is_normal(n) {
            return Err(Error::NotNormal(self.format_set(n)));
        }
        let mut projection = vec![usize::MAX; self.order()];
        let mut representatives = Vec::new();
        for g in 0..self.order() {
            if projection[g] != usize::MAX {
                continue;
            }
            let c = representatives.len();
            representatives.push(g);
            for m in n.iter() {
                projection[self.mul(g, m)] = c;
            }
        }
        let labels = representatives
            .iter()
            .enumerate()
            .map(|(c, &r)| if c == 0 { "1".to_string() } else { format!("[{}]", self.label(r)) })
            .collect();
        let reps = &representatives;
        let proj = &projection;
        let group = FiniteGroup::from_fn(
            format!("{}/{}", self.spec(), self.format_set(n)),
            labels,
            |a, b| proj[self.mul(reps[a], reps[b])],
        )?;
        Ok(Quotient { group, projection, representatives })
    }
}
