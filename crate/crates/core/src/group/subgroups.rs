use std::collections::HashSet;

use super::{FiniteGroup, Subset};
use crate::error::{Error, Result};

/// Largest order for which the full subgroup lattice is enumerated.
pub const EXHAUSTIVE_SUBGROUP_CAP: usize = 64;

fn bits(s: &Subset) -> u64 {
    s.iter().fold(0u64, |acc, g| acc | (1 << g))
}

impl FiniteGroup {
    /// All subgroups (or all normal subgroups), sorted by order then by mask.
    ///
    /// Layered closure: start from the cyclic subgroups, then repeatedly join
    /// every known subgroup with every cyclic subgroup until nothing new appears.
    /// Above [`EXHAUSTIVE_SUBGROUP_CAP`] only the trivial group, the whole group,
    /// the center and metadata subgroups are returned.
    pub fn subgroups(&self, normal_only: bool) -> Result<Vec<Subset>> {
        let v = self.order();
        if v > EXHAUSTIVE_SUBGROUP_CAP {
            return self.known_subgroups(normal_only);
        }
        let cyclic: Vec<(usize, Subset)> = {
            let mut seen = HashSet::new();
            let mut out = Vec::new();
            for g in 0..v {
                let c = self.generated(&[g]);
                if seen.insert(bits(&c)) {
                    out.push((g, c));
                }
            }
            out
        };
        let mut found: HashSet<u64> = cyclic.iter().map(|(_, c)| bits(c)).collect();
        let mut all: Vec<(Vec<usize>, Subset)> = cyclic.iter().map(|(g, c)| (vec![*g], c.clone())).collect();
        let mut layer: Vec<usize> = (0..all.len()).collect();
        while !layer.is_empty() {
            let mut next = Vec::new();
            for &i in &layer {
                for (g, _) in &cyclic {
                    if all[i].1.contains(*g) {
                        continue;
                    }
                    let mut gens = all[i].0.clone();
                    gens.push(*g);
                    let joined = self.generated(&gens);
                    if found.insert(bits(&joined)) {
                        all.push((gens, joined));
                        next.push(all.len() - 1);
                    }
                }
            }
            layer = next;
        }
        let mut out: Vec<Subset> = all
            .into_iter()
            .map(|(_, s)| s)
            .filter(|s| !normal_only || self.is_normal(s))
            .collect();
        out.sort_by_key(|s| (s.len(), bits(s)));
        Ok(out)
    }

    fn known_subgroups(&self, normal_only: bool) -> Result<Vec<Subset>> {
        let meta = self.metadata();
        if !normal_only && meta.frobenius.is_none() && meta.normal_subgroups.is_empty() {
            return Err(Error::InvalidParameter(format!(
                "order {} is above the enumeration cap of {EXHAUSTIVE_SUBGROUP_CAP} and no subgroup metadata is recorded",
                self.order()
            )));
        }
        let mut out = vec![Subset::from_indices(self, [0])?, Subset::full(self), self.center()];
        out.extend(meta.normal_subgroups.iter().cloned());
        if let Some(f) = &meta.frobenius {
            out.push(f.kernel.clone());
            if !normal_only {
                out.push(f.complement.clone());
            }
        }
        let mut dedup: Vec<Subset> = Vec::new();
        for s in out {
            if !dedup.contains(&s) {
                dedup.push(s);
            }
        }
        dedup.sort_by_key(|s| (s.len(), s.indices()));
        Ok(dedup)
    }
}
