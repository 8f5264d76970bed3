//! Exhaustive enumeration of sum sets, partial sum sets and maximal skew sets
//! in small groups, plus the empirical property suites built on it.

use std::collections::BTreeMap;
use std::sync::atomic::{AtomicBool, Ordering};
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::admissibility::{index2_check, index3_check, muon_check, two_value_analysis, verify_coset_equation};
use crate::constructions::paley_skew_pss;
use crate::error::{Error, Result};
use crate::group::{parse_group, FiniteGroup, Subset};
use crate::regularity::{classify, is_trivial_shape, Certificate, Classification, PssParams};
use crate::ring::{sum_set_even_power_closed_form, sum_set_odd_power_closed_form, GroupRingElement};

/// Largest group order accepted for exhaustive enumeration.
pub const MAX_SEARCH_ORDER: usize = 24;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SearchMode {
    SumSet,
    Pss,
    MaximalSkew,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Dedup {
    pub complement: bool,
    pub central_translate: bool,
    pub inversion: bool,
}

impl Dedup {
    pub fn all() -> Self {
        Dedup { complement: true, central_translate: true, inversion: true }
    }

    fn any(&self) -> bool {
        self.complement || self.central_translate || self.inversion
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchQuery {
    pub group_spec: String,
    /// Inclusive; defaults to `[1, v/2]`.
    pub k_range: Option<(usize, usize)>,
    pub mode: SearchMode,
    pub dedup: Dedup,
    pub include_trivial: bool,
    pub max_results: Option<usize>,
    #[serde(skip)]
    pub budget: Option<Duration>,
}

impl SearchQuery {
    pub fn sum_sets(group_spec: impl Into<String>) -> Self {
        SearchQuery {
            group_spec: group_spec.into(),
            k_range: None,
            mode: SearchMode::SumSet,
            dedup: Dedup::default(),
            include_trivial: false,
            max_results: None,
            budget: None,
        }
    }

    pub fn with_k(mut self, lo: usize, hi: usize) -> Self {
        self.k_range = Some((lo, hi));
        self
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SearchHit {
    pub set: Vec<String>,
    #[serde(skip)]
    pub subset: Subset,
    pub params: Option<PssParams>,
    pub certificate: Certificate,
}

#[derive(Debug, Clone, Serialize)]
pub struct SearchReport {
    pub query: SearchQuery,
    pub order: usize,
    pub results: Vec<SearchHit>,
    /// Nontrivial hits per parameter tuple, before deduplication.
    pub counts: BTreeMap<String, usize>,
    pub trivial_count: usize,
    pub truncated: bool,
    pub exhaustive: bool,
    #[serde(skip)]
    pub elapsed: Duration,
}

struct Scan<'a> {
    g: &'a FiniteGroup,
    k: usize,
    mode: SearchMode,
    /// Upper bound on any nonidentity product count.
    cap: u32,
    deadline: Option<Instant>,
    stop: &'a AtomicBool,
}

impl Scan<'_> {
    fn add(&self, counts: &mut [u32], members: &[usize], e: usize) -> bool {
        let mut ok = true;
        let mut bump = |g: usize, counts: &mut [u32]| {
            counts[g] += 1;
            if g != 0 && counts[g] > self.cap {
                ok = false;
            }
        };
        for &m in members {
            bump(self.g.mul(m, e), counts);
            bump(self.g.mul(e, m), counts);
        }
        bump(self.g.mul(e, e), counts);
        ok
    }

    fn remove(&self, counts: &mut [u32], members: &[usize], e: usize) {
        for &m in members {
            counts[self.g.mul(m, e)] -= 1;
            counts[self.g.mul(e, m)] -= 1;
        }
        counts[self.g.mul(e, e)] -= 1;
    }

    fn accept(&self, counts: &[u32], members: &[usize]) -> bool {
        match self.mode {
            SearchMode::SumSet => counts[1..].iter().all(|&c| c == counts[1]),
            _ => {
                let mut inside = vec![false; self.g.order()];
                members.iter().for_each(|&m| inside[m] = true);
                let (mut l, mut u) = (None, None);
                for x in 1..self.g.order() {
                    let slot = if inside[x] { &mut l } else { &mut u };
                    match *slot {
                        None => *slot = Some(counts[x]),
                        Some(c) if c != counts[x] => return false,
                        _ => {}
                    }
                }
                true
            }
        }
    }

    fn dfs(&self, counts: &mut Vec<u32>, members: &mut Vec<usize>, next: usize, out: &mut Vec<Vec<usize>>, nodes: &mut u64) {
        *nodes += 1;
        if *nodes % 4096 == 0 {
            if let Some(d) = self.deadline {
                if Instant::now() > d {
                    self.stop.store(true, Ordering::Relaxed);
                }
            }
        }
        if self.stop.load(Ordering::Relaxed) {
            return;
        }
        if members.len() == self.k {
            if self.accept(counts, members) {
                out.push(members.clone());
            }
            return;
        }
        let v = self.g.order();
        let need = self.k - members.len();
        for e in next..=v - need {
            let ok = self.add(counts, members, e);
            if ok {
                members.push(e);
                self.dfs(counts, members, e + 1, out, nodes);
                members.pop();
            }
            self.remove(counts, members, e);
        }
    }

    /// All accepted `k`-subsets whose two smallest members are `first`, `second`.
    fn subtree(&self, first: usize, second: Option<usize>) -> Vec<Vec<usize>> {
        let mut counts = vec![0u32; self.g.order()];
        let mut members = Vec::with_capacity(self.k);
        let mut out = Vec::new();
        let mut nodes = 0;
        if !self.add(&mut counts, &members, first) {
            return out;
        }
        members.push(first);
        let next = match second {
            Some(s) => {
                if !self.add(&mut counts, &members, s) {
                    return out;
                }
                members.push(s);
                s + 1
            }
            None => first + 1,
        };
        self.dfs(&mut counts, &mut members, next, &mut out, &mut nodes);
        out
    }
}

/// Encoding used to order results: size first, then sorted indices.
fn key(s: &Subset) -> (usize, Vec<usize>) {
    (s.len(), s.indices())
}

fn canonical_key(g: &FiniteGroup, s: &Subset, dedup: Dedup, translators: &[usize]) -> (usize, Vec<usize>) {
    let mut orbit = vec![s.clone()];
    if dedup.inversion {
        orbit.push(g.inverse_set(s));
    }
    if dedup.central_translate {
        let base = orbit.clone();
        for z in translators {
            orbit.extend(base.iter().map(|t| g.right_translate(t, *z)));
        }
    }
    if dedup.complement {
        let base = orbit.clone();
        orbit.extend(base.iter().map(|t| t.complement()));
    }
    orbit.iter().map(key).min().expect("nonempty orbit")
}

fn scan_k(g: &FiniteGroup, k: usize, mode: SearchMode, deadline: Option<Instant>, stop: &AtomicBool) -> Vec<Vec<usize>> {
    let v = g.order();
    let cap = match mode {
        SearchMode::SumSet => ((k * k) / (v - 1).max(1)) as u32,
        _ => k as u32,
    };
    let scan = Scan { g, k, mode, cap, deadline, stop };
    if k == 1 {
        return (0..v).into_par_iter().flat_map_iter(|a| scan.subtree(a, None)).collect();
    }
    let roots: Vec<(usize, usize)> = (0..v).flat_map(|a| (a + 1..v).map(move |b| (a, b))).filter(|&(_, b)| b + k - 2 < v).collect();
    let mut hits: Vec<Vec<usize>> = roots.into_par_iter().flat_map_iter(|(a, b)| scan.subtree(a, Some(b))).collect();
    hits.sort();
    hits
}

/// Exhaustive enumeration over every `k`-subset in the query's range.
pub fn exhaustive_search(q: &SearchQuery) -> Result<SearchReport> {
    let start = Instant::now();
    let g = parse_group(&q.group_spec)?;
    let v = g.order();
    if v > MAX_SEARCH_ORDER {
        return Err(Error::Budget(format!("order {v} exceeds the search cap of {MAX_SEARCH_ORDER}")));
    }
    if q.mode == SearchMode::MaximalSkew {
        return maximal_skew_report(q, &g, start);
    }
    let (lo, hi) = q.k_range.unwrap_or((1, v / 2));
    if lo == 0 || hi > v || lo > hi {
        return Err(Error::InvalidParameter(format!("k range [{lo}, {hi}] is invalid for order {v}")));
    }
    let deadline = q.budget.map(|b| start + b);
    let stop = AtomicBool::new(false);
    let mut raw = Vec::new();
    for k in lo..=hi {
        raw.extend(scan_k(&g, k, q.mode, deadline, &stop));
        if stop.load(Ordering::Relaxed) {
            break;
        }
    }
    let exhaustive = !stop.load(Ordering::Relaxed);

    let mut counts = BTreeMap::new();
    let mut trivial_count = 0;
    let mut hits = Vec::new();
    for members in raw {
        let s = Subset::from_indices(&g, members)?;
        let trivial = is_trivial_shape(&g, &s);
        if trivial {
            trivial_count += 1;
            if !q.include_trivial {
                continue;
            }
        }
        let certificate = Certificate::issue(&g, &s)?;
        if !trivial {
            let label = certificate.params.map_or("-".into(), |p| p.to_string());
            *counts.entry(label).or_insert(0) += 1;
        }
        hits.push(SearchHit { set: g.set_labels(&s), subset: s, params: certificate.params, certificate });
    }
    hits.sort_by_key(|h| key(&h.subset));
    if q.dedup.any() {
        let translators: Vec<usize> = g.center().iter().filter(|&z| z != 0 && g.element_order(z) == 2).collect();
        let mut seen = std::collections::HashSet::new();
        hits.retain(|h| seen.insert(canonical_key(&g, &h.subset, q.dedup, &translators)));
    }
    let truncated = q.max_results.is_some_and(|m| hits.len() > m);
    if let Some(m) = q.max_results {
        hits.truncate(m);
    }
    Ok(SearchReport {
        query: q.clone(),
        order: v,
        results: hits,
        counts,
        trivial_count,
        truncated,
        exhaustive,
        elapsed: start.elapsed(),
    })
}

/// Every maximal skew set: one element from each inverse pair.
pub fn enumerate_maximal_skew(g: &FiniteGroup) -> Result<Vec<Subset>> {
    if g.order() > MAX_SEARCH_ORDER {
        return Err(Error::Budget(format!("order {} exceeds the search cap of {MAX_SEARCH_ORDER}", g.order())));
    }
    let pairs: Vec<(usize, usize)> =
        (0..g.order()).filter(|&y| g.element_order(y) > 2 && y < g.inv(y)).map(|y| (y, g.inv(y))).collect();
    let mut out: Vec<Subset> = (0u64..1 << pairs.len())
        .map(|mask| {
            let picks = pairs.iter().enumerate().map(|(i, &(a, b))| if mask >> i & 1 == 0 { a } else { b });
            Subset::from_indices(g, picks).expect("in range")
        })
        .collect();
    out.sort_by_key(key);
    Ok(out)
}

fn maximal_skew_report(q: &SearchQuery, g: &FiniteGroup, start: Instant) -> Result<SearchReport> {
    let mut results = Vec::new();
    for s in enumerate_maximal_skew(g)? {
        let certificate = Certificate::issue(g, &s)?;
        results.push(SearchHit { set: g.set_labels(&s), subset: s, params: certificate.params, certificate });
    }
    let mut counts = BTreeMap::new();
    counts.insert(format!("maximal skew, size {}", results.first().map_or(0, |h| h.subset.len())), results.len());
    let truncated = q.max_results.is_some_and(|m| results.len() > m);
    if let Some(m) = q.max_results {
        results.truncate(m);
    }
    Ok(SearchReport {
        query: q.clone(),
        order: g.order(),
        results,
        counts,
        trivial_count: 0,
        truncated,
        exhaustive: true,
        elapsed: start.elapsed(),
    })
}

pub const SUITES: [&str; 7] =
    ["abelian-reversible", "abelian-is-ds", "no-cyclic", "higher-order", "rdsss", "coset-eq", "shds-pss"];

#[derive(Debug, Clone, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub scope: Vec<String>,
    /// Number of individual checks performed.
    pub checked: usize,
    pub failures: Vec<Value>,
    pub passed: bool,
}

/// All nontrivial sum sets with `k ≤ v/2` together with their complements.
pub fn sum_sets_with_complements(g: &FiniteGroup) -> Result<Vec<Subset>> {
    let report = exhaustive_search(&SearchQuery::sum_sets(g.spec()))?;
    let mut out: Vec<Subset> = Vec::new();
    for h in report.results {
        let s = Subset::from_indices(g, h.subset.indices())?;
        out.push(s.complement());
        out.push(s);
    }
    out.sort_by_key(key);
    out.dedup();
    Ok(out)
}

fn witness(g: &FiniteGroup, s: &Subset, reason: impl Into<String>) -> Value {
    json!({"group": g.spec(), "set": g.set_labels(s), "reason": reason.into()})
}

/// Runs a named property suite over the groups in `scope`.
pub fn property_suite(name: &str, scope: &[String]) -> Result<SuiteReport> {
    if !SUITES.contains(&name) {
        return Err(Error::UnknownSuite(name.to_string()));
    }
    let mut checked = 0;
    let mut failures = Vec::new();
    for spec in scope {
        let g = parse_group(spec)?;
        match name {
            "abelian-reversible" | "abelian-is-ds" | "no-cyclic" => {
                if !g.is_abelian() {
                    return Err(Error::NotAbelian(spec.clone()));
                }
                for s in sum_sets_with_complements(&g)? {
                    checked += 1;
                    let c = classify(&g, &s)?;
                    let ok = match name {
                        "abelian-reversible" => c.is_reversible,
                        "abelian-is-ds" => c.is_reversible && c.is_difference_set,
                        _ => !spec.starts_with("cyclic:"),
                    };
                    if !ok {
                        failures.push(witness(&g, &s, format!("{name} violated")));
                    }
                }
                if name == "no-cyclic" {
                    checked += 1;
                }
            }
            "higher-order" => {
                for s in sum_sets_with_complements(&g)? {
                    let p = classify(&g, &s)?.params.expect("sum set");
                    let x = GroupRingElement::from_subset(&g, &s)?;
                    for m in 1..=2u32 {
                        checked += 1;
                        let even = x.power(2 * m, &g)? == sum_set_even_power_closed_form(&g, &p, m)?;
                        let odd = x.power(2 * m + 1, &g)?
                            == sum_set_odd_power_closed_form(&g, &p, m, &s)?;
                        if !(even && odd) {
                            failures.push(witness(&g, &s, format!("closed form differs at m = {m}")));
                        }
                    }
                }
            }
            "rdsss" => {
                if g.order() > 16 {
                    return Err(Error::Budget(format!("{spec}: subset sweeps are limited to order 16")));
                }
                for mask in 0u32..1 << g.order() {
                    let s = Subset::from_indices(&g, (0..g.order()).filter(|i| mask >> i & 1 == 1))?;
                    checked += 1;
                    if let Some(reason) = triangle_violation(&classify(&g, &s)?) {
                        failures.push(witness(&g, &s, reason));
                    }
                }
            }
            "coset-eq" => {
                let normals = g.subgroups(true)?;
                for s in sum_sets_with_complements(&g)? {
                    for n in &normals {
                        checked += 1;
                        if let Some(reason) = coset_violation(&g, &s, n)? {
                            failures.push(witness(&g, &s, format!("N = {}: {reason}", g.format_set(n))));
                        }
                    }
                }
            }
            "shds-pss" => {
                let q = spec
                    .strip_prefix("ea:")
                    .and_then(|q| q.parse::<usize>().ok())
                    .ok_or_else(|| Error::InvalidParameter(format!("shds-pss expects ea:q, got {spec}")))?;
                checked += 1;
                let r = paley_skew_pss(q)?;
                let c = &r.certificate.classification;
                let ok = c.is_skew
                    && c.difference_lambda.is_some_and(|l| {
                        c.params.is_some_and(|p| p.lambda == l && p.mu == l + 1) && 2 * c.k + 1 == c.v
                    });
                if !ok {
                    failures.push(witness(&r.group, &r.set, "not a (v,k,λ,λ+1) partial sum set"));
                }
            }
            _ => unreachable!(),
        }
    }
    Ok(SuiteReport { suite: name.into(), scope: scope.to_vec(), checked, passed: failures.is_empty(), failures })
}

/// Any two of {difference set, sum set, reversible} imply the third.
pub fn triangle_violation(c: &Classification) -> Option<String> {
    let (ds, ss, rev) = (c.is_difference_set, c.is_sum_set, c.is_reversible);
    let held = [ds, ss, rev].iter().filter(|&&b| b).count();
    if held == 2 {
        return Some(format!("difference set {ds}, sum set {ss}, reversible {rev}"));
    }
    if held == 3 && c.params.map(|p| p.mu) != c.difference_lambda {
        return Some("λ and μ differ".into());
    }
    None
}

/// Every coset-level necessary condition for the sum set `s` and normal `n`.
pub fn coset_violation(g: &FiniteGroup, s: &Subset, n: &Subset) -> Result<Option<String>> {
    let eq = verify_coset_equation(g, s, n)?;
    if !eq.holds {
        return Ok(Some("coset equation fails".into()));
    }
    let mu = eq.params.mu;
    if !muon_check(g, n, mu)?.holds {
        return Ok(Some("μ·o(N) parity fails".into()));
    }
    let index = g.index(n)?;
    if index == 2 && !index2_check(g, s, n)?.holds {
        return Ok(Some("index-2 square condition fails".into()));
    }
    if index == 3 && !index3_check(g, s, n)?.holds() {
        return Ok(Some("index-3 condition fails".into()));
    }
    let cp = crate::admissibility::coset_profile(g, s, n)?;
    if cp.distinct_values().len() <= 2 && !two_value_analysis(g, s, n)?.holds {
        return Ok(Some("two-value clauses fail".into()));
    }
    Ok(None)
}

/// Runs `f` on a dedicated pool when `threads` is given.
pub fn with_threads<T: Send>(threads: Option<usize>, f: impl FnOnce() -> T + Send) -> Result<T> {
    match threads {
        None => Ok(f()),
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|e| Error::InvalidParameter(format!("thread pool: {e}")))?;
            Ok(pool.install(f))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::cyclic;

    #[test]
    fn odd_cyclic_has_none() {
        let r = exhaustive_search(&SearchQuery::sum_sets("cyclic:5")).unwrap();
        assert!(r.results.is_empty() && r.exhaustive);
    }

    #[test]
    fn d4_contains_the_831_set() {
        let r = exhaustive_search(&SearchQuery::sum_sets("dihedral:4").with_k(3, 3)).unwrap();
        assert!(r.results.iter().any(|h| h.set == ["x", "t", "xt"]));
        assert!(r.results.iter().all(|h| h.params == Some(PssParams::sum_set(8, 3, 1))));
        let mut q = SearchQuery::sum_sets("dihedral:4").with_k(3, 3);
        q.dedup = Dedup::all();
        let d = exhaustive_search(&q).unwrap();
        assert!(d.results.len() < r.results.len());
        assert_eq!(d.counts, r.counts);
    }

    #[test]
    fn c4_sum_sets_are_reversible() {
        let r = exhaustive_search(&SearchQuery::sum_sets("cyclic:4").with_k(1, 2)).unwrap();
        assert!(r.results.iter().all(|h| h.certificate.classification.is_reversible));
        assert!(r.trivial_count > 0);
    }

    #[test]
    fn maximal_skew_counts() {
        let c7 = enumerate_maximal_skew(&cyclic(7).unwrap()).unwrap();
        assert_eq!(c7.len(), 8);
        assert!(c7.iter().all(|s| s.len() == 3));
        let c4 = cyclic(4).unwrap();
        let sets: Vec<String> = enumerate_maximal_skew(&c4).unwrap().iter().map(|s| c4.format_set(s)).collect();
        assert_eq!(sets, ["{x}", "{x3}"]);
        let c2 = enumerate_maximal_skew(&cyclic(2).unwrap()).unwrap();
        assert_eq!(c2.len(), 1);
        assert!(c2[0].is_empty());
    }

    #[test]
    fn thread_count_does_not_change_results() {
        let q = SearchQuery::sum_sets("dihedral:6").with_k(5, 5);
        let one = with_threads(Some(1), || exhaustive_search(&q)).unwrap().unwrap();
        let four = with_threads(Some(4), || exhaustive_search(&q)).unwrap().unwrap();
        assert_eq!(one.results.iter().map(|h| &h.set).collect::<Vec<_>>(), four.results.iter().map(|h| &h.set).collect::<Vec<_>>());
    }

    #[test]
    fn pss_mode_finds_paley_set() {
        let mut q = SearchQuery::sum_sets("ea:7").with_k(3, 3);
        q.mode = SearchMode::Pss;
        let r = exhaustive_search(&q).unwrap();
        assert!(r.results.iter().any(|h| h.set == ["1", "2", "4"]));
    }

    #[test]
    fn budget_marks_partial() {
        let mut q = SearchQuery::sum_sets("dihedral:12").with_k(1, 12);
        q.budget = Some(Duration::from_millis(1));
        let r = exhaustive_search(&q).unwrap();
        assert!(!r.exhaustive);
        assert!(exhaustive_search(&SearchQuery::sum_sets("cyclic:30")).is_err());
    }

    #[test]
    fn suites_run() {
        let scope = vec!["dihedral:4".to_string()];
        for suite in ["higher-order", "rdsss", "coset-eq"] {
            let r = property_suite(suite, &scope).unwrap();
            assert!(r.passed, "{suite}: {:?}", r.failures);
            assert!(r.checked > 0);
        }
        assert!(property_suite("nope", &scope).is_err());
        assert!(property_suite("no-cyclic", &scope).is_err());
        assert!(property_suite("shds-pss", &["ea:7".to_string()]).unwrap().passed);
    }
}
