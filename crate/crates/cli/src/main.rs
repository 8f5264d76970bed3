use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::process::ExitCode;
use std::sync::Arc;
use std::time::Duration;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use sumset_core::admissibility::{abelian_filters, check_admissible, AdmissibilityVerdict};
use sumset_core::constructions::{
    aff_times_c2_sum_set, dihedral_type1, dihedral_type2, dstar_sum_set, frobenius_coset_pss,
    frobenius_subgroup_sum_set, lift2, paley_skew_pss, project2, seeded_kernel_picks, Completion, ConstructionResult,
};
use sumset_core::group::{affine, parse_group};
use sumset_core::regularity::Certificate;
use sumset_core::search::{exhaustive_search, property_suite, with_threads, Dedup, SearchMode, SearchQuery, SearchReport};
use sumset_core::{Error, FiniteGroup, PssParams};

#[derive(Parser)]
#[command(name = "sumset", version, about = "Sum sets and partial sum sets in finite groups")]
struct Cli {
    #[arg(long, value_enum, default_value_t = Format::Human, global = true)]
    format: Format,
    /// Seed for randomized choices.
    #[arg(long, default_value_t = 0, global = true)]
    seed: u64,
    /// Worker threads for search.
    #[arg(long, env = "SUMSET_THREADS", global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Human,
    Json,
    Jsonl,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    SumSet,
    Pss,
    MaximalSkew,
}

#[derive(Clone, Copy, ValueEnum)]
enum Tag {
    Lift2,
    Project2,
    DihedralT1,
    DihedralT2,
    Dstar,
    FrobCosets,
    AffXC2,
    FrobSubgroup,
    Paley,
}

#[derive(Subcommand)]
enum Command {
    /// Build a group and print its table and structure.
    Group { spec: String },
    /// Certify a subset and report its classification.
    Verify {
        #[arg(long)]
        group: String,
        /// Comma-separated labels, or `#i` indices.
        #[arg(long)]
        set: String,
        /// Accept partial sum sets as a positive verdict.
        #[arg(long)]
        pss: bool,
        /// Expected parameters `v,k,mu` or `v,k,lambda,mu`.
        #[arg(long)]
        claim: Option<String>,
    },
    /// Run one of the explicit constructions.
    Construct {
        #[arg(value_enum)]
        tag: Tag,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        m: Option<usize>,
        #[arg(long)]
        q: Option<usize>,
        #[arg(long)]
        d: Option<usize>,
        #[arg(long)]
        t: Option<usize>,
        /// Include the Frobenius complement.
        #[arg(long)]
        include_h: bool,
        /// Kernel elements (labels) for coset or orbit picks.
        #[arg(long)]
        picks: Option<String>,
        /// Draw coset picks at random from `--seed`.
        #[arg(long)]
        random: bool,
        #[arg(long)]
        group: Option<String>,
        #[arg(long)]
        set: Option<String>,
        #[arg(long)]
        beta: Option<u64>,
        /// Normal subgroup for `project2`.
        #[arg(long)]
        normal: Option<String>,
    },
    /// List parameter triples that pass the counting filters.
    Admissible {
        #[arg(long)]
        v: u64,
        #[arg(long)]
        k: Option<u64>,
        #[arg(long)]
        mu: Option<u64>,
        /// Also apply the abelian-group filters.
        #[arg(long)]
        abelian: bool,
        /// List every triple, not only those satisfying the counting identity.
        #[arg(long)]
        all: bool,
    },
    /// Exhaustive search in a small group.
    Search {
        #[arg(long)]
        group: String,
        /// `k` or `lo..hi` (inclusive).
        #[arg(long)]
        k: Option<String>,
        #[arg(long, value_enum, default_value_t = Mode::SumSet)]
        mode: Mode,
        /// Comma-separated subset of `complement,central,inversion`, or `all`.
        #[arg(long)]
        dedup: Option<String>,
        #[arg(long)]
        budget_seconds: Option<f64>,
        #[arg(long)]
        max_results: Option<usize>,
        #[arg(long)]
        include_trivial: bool,
        /// Also write one JSON line per result to this file.
        #[arg(long)]
        jsonl: Option<String>,
    },
    /// Run a named property suite over group specs.
    Suite {
        name: String,
        #[arg(required = true)]
        scope: Vec<String>,
    },
}

enum Failure {
    Closed,
    Negative,
    Usage(String),
    Budget(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Budget(_) | Error::OrderTooLarge { .. } => Failure::Budget(e.to_string()),
            Error::Verification(_) => {
                eprintln!("error: {e}");
                Failure::Negative
            }
            _ => Failure::Usage(e.to_string()),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        if e.kind() == io::ErrorKind::BrokenPipe {
            Failure::Closed
        } else {
            Failure::Usage(e.to_string())
        }
    }
}

type Outcome = std::result::Result<(), Failure>;

fn emit<T: Serialize>(format: Format, value: &T, human: impl FnOnce() -> String) -> Outcome {
    let mut out = io::stdout().lock();
    match format {
        Format::Human => writeln!(out, "{}", human())?,
        Format::Json => writeln!(out, "{}", serde_json::to_string_pretty(value).expect("serializable"))?,
        Format::Jsonl => writeln!(out, "{}", serde_json::to_string(value).expect("serializable"))?,
    }
    Ok(())
}

fn counts_table(g: &FiniteGroup, cert: &Certificate) -> String {
    let width = g.labels().iter().map(|l| l.chars().count()).max().unwrap_or(1).max(7);
    let mut s = format!("{:<width$}  {:>8}  {:>9}\n", "element", "products", "quotients");
    for (i, label) in g.labels().iter().enumerate() {
        s.push_str(&format!("{label:<width$}  {:>8}  {:>9}\n", cert.product_counts[i], cert.quotient_counts[i]));
    }
    s
}

fn flags_line(cert: &Certificate) -> String {
    let c = &cert.classification;
    let flags = [
        ("sum set", c.is_sum_set),
        ("partial sum set", c.is_partial_sum_set),
        ("difference set", c.is_difference_set),
        ("skew", c.is_skew),
        ("reversible", c.is_reversible),
        ("maximal skew", c.is_maximal_skew),
        ("trivial", c.is_trivial),
    ];
    let on: Vec<&str> = flags.iter().filter(|f| f.1).map(|f| f.0).collect();
    if on.is_empty() {
        "none".into()
    } else {
        on.join(", ")
    }
}

fn describe_certificate(g: &FiniteGroup, cert: &Certificate) -> String {
    let params = cert.params.map_or("none".to_string(), |p| format!("{p}, n = {}", p.n()));
    let mut s = format!(
        "group      {}\nset        {{{}}}\nparameters {params}\n|S ∩ S⁻¹|  {}\nproperties {}\n",
        g.spec(),
        cert.set.join(","),
        cert.classification.s_inv,
        flags_line(cert)
    );
    for t in &cert.classification.type_wrt {
        s.push_str(&format!("type       {:?} with respect to {{1,{}}}\n", t.kind, t.involution));
    }
    s.push('\n');
    s.push_str(&counts_table(g, cert));
    s
}

fn parse_claim(text: &str) -> std::result::Result<PssParams, Failure> {
    let nums: Vec<u64> = text
        .split(',')
        .map(|x| x.trim().parse())
        .collect::<std::result::Result<_, _>>()
        .map_err(|_| Failure::Usage(format!("cannot parse claim `{text}`")))?;
    match nums.as_slice() {
        [v, k, mu] => Ok(PssParams::sum_set(*v, *k, *mu)),
        [v, k, l, mu] => Ok(PssParams::new(*v, *k, *l, *mu)),
        _ => Err(Failure::Usage("claim must have 3 or 4 entries".into())),
    }
}

fn cmd_group(format: Format, spec: &str) -> Outcome {
    let g = parse_group(spec)?;
    emit(format, &g, || {
        let center = g.center();
        let orders: Vec<String> = (0..g.order()).map(|x| format!("{}:{}", g.label(x), g.element_order(x))).collect();
        format!(
            "group    {}\norder    {}\nabelian  {}\ncenter   {}\norders   {}",
            g.spec(),
            g.order(),
            g.is_abelian(),
            g.format_set(&center),
            orders.join(" ")
        )
    })
}

fn cmd_verify(format: Format, group: &str, set: &str, pss: bool, claim: Option<&str>) -> Outcome {
    let g = parse_group(group)?;
    let s = g.parse_set(set)?;
    let cert = Certificate::issue(&g, &s)?;
    let claim = claim.map(parse_claim).transpose()?;
    let c = &cert.classification;
    let positive = match claim {
        Some(p) => cert.params == Some(p),
        None => c.is_sum_set || (pss && c.is_partial_sum_set),
    };
    let report = json!({"verdict": positive, "certificate": cert});
    emit(format, &report, || {
        let verdict = if positive { "PASS" } else { "FAIL" };
        format!("{}verdict    {verdict}", describe_certificate(&g, &cert))
    })?;
    if positive {
        Ok(())
    } else {
        Err(Failure::Negative)
    }
}

fn need<T>(value: Option<T>, flag: &str) -> std::result::Result<T, Failure> {
    value.ok_or_else(|| Failure::Usage(format!("this construction needs --{flag}")))
}

fn parse_picks(g: &FiniteGroup, text: &str) -> std::result::Result<Vec<usize>, Failure> {
    Ok(g.parse_set(text)?.indices())
}

fn summarize(r: &ConstructionResult) -> String {
    format!(
        "[{}] {} in {}\n  set {}\n  verified {}\n",
        r.theorem_tag,
        r.claimed_params,
        r.group.spec(),
        r.group.format_set(&r.set),
        flags_line(&r.certificate)
    )
}

#[derive(Serialize)]
#[serde(untagged)]
enum Built {
    One(ConstructionResult),
    Pair([ConstructionResult; 2]),
    Completion(Completion),
}

impl Built {
    fn render(&self) -> String {
        match self {
            Built::One(r) => summarize(r),
            Built::Pair(rs) => rs.iter().map(summarize).collect(),
            Built::Completion(c) => {
                let mut s = format!("partial:\n{}", summarize(&c.partial));
                s.push_str("completions:\n");
                c.completions.iter().for_each(|r| s.push_str(&summarize(r)));
                s
            }
        }
    }
}

#[allow(clippy::too_many_arguments)]
fn cmd_construct(
    format: Format,
    seed: u64,
    tag: Tag,
    n: Option<usize>,
    m: Option<usize>,
    q: Option<usize>,
    d: Option<usize>,
    t: Option<usize>,
    include_h: bool,
    picks: Option<String>,
    random: bool,
    group: Option<String>,
    set: Option<String>,
    beta: Option<u64>,
    normal: Option<String>,
) -> Outcome {
    let built = match tag {
        Tag::Lift2 => {
            let g = Arc::new(parse_group(&need(group, "group")?)?);
            let p = g.parse_set(&need(set, "set")?)?;
            Built::Completion(lift2(&g, &p, need(beta, "beta")?)?)
        }
        Tag::Project2 => {
            let g = parse_group(&need(group, "group")?)?;
            let s = g.parse_set(&need(set, "set")?)?;
            let nsub = match normal {
                Some(text) => g.parse_set(&text)?,
                None => g.center(),
            };
            Built::One(project2(&g, &s, &nsub)?)
        }
        Tag::DihedralT1 => Built::Pair(dihedral_type1(need(n, "n")?, None)?),
        Tag::DihedralT2 => Built::Completion(dihedral_type2(need(m, "m")?)?),
        Tag::Dstar => Built::Completion(dstar_sum_set(need(n, "n")?)?),
        Tag::FrobCosets => {
            let g = Arc::new(affine(need(q, "q")?)?);
            let t = need(t, "t")?;
            let chosen = match (picks, random) {
                (Some(text), _) => Some(parse_picks(&g, &text)?),
                (None, true) => Some(seeded_kernel_picks(&g, t, seed)?),
                (None, false) => None,
            };
            Built::One(frobenius_coset_pss(&g, t, include_h, chosen.as_deref())?)
        }
        Tag::AffXC2 => Built::Completion(aff_times_c2_sum_set(need(q, "q")?)?),
        Tag::FrobSubgroup => {
            let (q, d) = (need(q, "q")?, need(d, "d")?);
            let chosen = match picks {
                Some(text) => Some(parse_picks(&sumset_core::group::frobenius_subgroup(q, d)?, &text)?),
                None => None,
            };
            Built::One(frobenius_subgroup_sum_set(q, d, chosen.as_deref())?)
        }
        Tag::Paley => Built::One(paley_skew_pss(need(q, "q")?)?),
    };
    emit(format, &built, || built.render().trim_end().to_string())
}

fn verdict_with_filters(v: u64, k: u64, mu: u64, abelian: bool) -> Result<AdmissibilityVerdict, Error> {
    let mut verdict = check_admissible(v, k, mu)?;
    if abelian {
        verdict.rejections.extend(abelian_filters(v, k, mu));
        verdict.admissible = verdict.rejections.is_empty();
    }
    Ok(verdict)
}

fn render_verdict(a: &AdmissibilityVerdict) -> String {
    let mut s = format!(
        "({},{},{})  n = {}  |S ∩ S⁻¹| = {}  {}",
        a.v,
        a.k,
        a.mu,
        a.n,
        a.s_inv,
        if a.admissible { "admissible" } else { "rejected" }
    );
    for r in &a.rejections {
        s.push_str(&format!("\n    {}: {} ({})", r.rule, r.detail, r.citation));
    }
    for w in &a.warnings {
        s.push_str(&format!("\n    warning {}: {}", w.rule, w.detail));
    }
    s
}

fn cmd_admissible(format: Format, v: u64, k: Option<u64>, mu: Option<u64>, abelian: bool, all: bool) -> Outcome {
    if let (Some(k), Some(mu)) = (k, mu) {
        let verdict = verdict_with_filters(v, k, mu, abelian)?;
        emit(format, &verdict, || render_verdict(&verdict))?;
        return if verdict.admissible { Ok(()) } else { Err(Failure::Negative) };
    }
    let mut verdicts = Vec::new();
    for kk in 1..=v / 2 {
        if k.is_some_and(|k| k != kk) {
            continue;
        }
        for m in 0..kk {
            if mu.is_some_and(|mu| mu != m) {
                continue;
            }
            let verdict = verdict_with_filters(v, kk, m, abelian)?;
            if all || !verdict.rejections.iter().any(|r| r.rule == "eq1-range") {
                verdicts.push(verdict);
            }
        }
    }
    match format {
        Format::Json => emit(format, &verdicts, String::new),
        _ => {
            for verdict in &verdicts {
                emit(format, verdict, || render_verdict(verdict))?;
            }
            Ok(())
        }
    }
}

fn parse_k(text: &str) -> std::result::Result<(usize, usize), Failure> {
    let bad = || Failure::Usage(format!("cannot parse k range `{text}`"));
    match text.split_once("..") {
        Some((a, b)) => Ok((a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?)),
        None => {
            let k = text.trim().parse().map_err(|_| bad())?;
            Ok((k, k))
        }
    }
}

fn parse_dedup(text: &str) -> std::result::Result<Dedup, Failure> {
    let mut d = Dedup::default();
    for part in text.split(',').map(str::trim) {
        match part {
            "all" => d = Dedup::all(),
            "none" | "" => {}
            "complement" => d.complement = true,
            "central" | "central-translate" => d.central_translate = true,
            "inversion" => d.inversion = true,
            other => return Err(Failure::Usage(format!("unknown dedup option `{other}`"))),
        }
    }
    Ok(d)
}

fn render_search(r: &SearchReport) -> String {
    let mut s = format!(
        "group {} (order {}), {} result(s), {} trivial, exhaustive: {}\n",
        r.query.group_spec,
        r.order,
        r.results.len(),
        r.trivial_count,
        r.exhaustive
    );
    for (params, count) in &r.counts {
        s.push_str(&format!("  {params}: {count}\n"));
    }
    for h in &r.results {
        let params = h.params.map_or("-".into(), |p| p.to_string());
        s.push_str(&format!("{params}  {{{}}}\n", h.set.join(",")));
    }
    s.trim_end().to_string()
}

#[allow(clippy::too_many_arguments)]
fn cmd_search(
    format: Format,
    threads: Option<usize>,
    group: String,
    k: Option<String>,
    mode: Mode,
    dedup: Option<String>,
    budget_seconds: Option<f64>,
    max_results: Option<usize>,
    include_trivial: bool,
    jsonl: Option<String>,
) -> Outcome {
    let mut query = SearchQuery::sum_sets(group);
    query.mode = match mode {
        Mode::SumSet => SearchMode::SumSet,
        Mode::Pss => SearchMode::Pss,
        Mode::MaximalSkew => SearchMode::MaximalSkew,
    };
    query.k_range = k.as_deref().map(parse_k).transpose()?;
    query.dedup = dedup.as_deref().map(parse_dedup).transpose()?.unwrap_or_default();
    query.budget = budget_seconds.map(Duration::from_secs_f64);
    query.max_results = max_results;
    query.include_trivial = include_trivial;
    let report = with_threads(threads, || exhaustive_search(&query))??;
    eprintln!("elapsed: {:.3}s", report.elapsed.as_secs_f64());
    if let Some(path) = jsonl {
        let mut w = BufWriter::new(File::create(path)?);
        for h in &report.results {
            writeln!(w, "{}", serde_json::to_string(h).expect("serializable"))?;
        }
        w.flush()?;
    }
    match format {
        Format::Jsonl => {
            let mut summary = serde_json::to_value(&report).expect("serializable");
            summary.as_object_mut().expect("object").remove("results");
            emit(format, &summary, String::new)?;
            for h in &report.results {
                emit(format, h, String::new)?;
            }
        }
        _ => emit(format, &report, || render_search(&report))?,
    }
    if report.exhaustive {
        Ok(())
    } else {
        Err(Failure::Budget("time budget exhausted before the search space was covered".into()))
    }
}

fn cmd_suite(format: Format, threads: Option<usize>, name: &str, scope: Vec<String>) -> Outcome {
    let report = with_threads(threads, || property_suite(name, &scope))??;
    emit(format, &report, || {
        let mut s = format!(
            "suite {}: {} ({} checks over {})",
            report.suite,
            if report.passed { "PASS" } else { "FAIL" },
            report.checked,
            report.scope.join(" ")
        );
        for f in &report.failures {
            s.push_str(&format!("\n  {f}"));
        }
        s
    })?;
    if report.passed {
        Ok(())
    } else {
        Err(Failure::Negative)
    }
}

fn run(cli: Cli) -> Outcome {
    let format = cli.format;
    match cli.command {
        Command::Group { spec } => cmd_group(format, &spec),
        Command::Verify { group, set, pss, claim } => cmd_verify(format, &group, &set, pss, claim.as_deref()),
        Command::Construct { tag, n, m, q, d, t, include_h, picks, random, group, set, beta, normal } => {
            cmd_construct(format, cli.seed, tag, n, m, q, d, t, include_h, picks, random, group, set, beta, normal)
        }
        Command::Admissible { v, k, mu, abelian, all } => cmd_admissible(format, v, k, mu, abelian, all),
        Command::Search { group, k, mode, dedup, budget_seconds, max_results, include_trivial, jsonl } => cmd_search(
            format,
            cli.threads,
            group,
            k,
            mode,
            dedup,
            budget_seconds,
            max_results,
            include_trivial,
            jsonl,
        ),
        Command::Suite { name, scope } => cmd_suite(format, cli.threads, &name, scope),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) | Err(Failure::Closed) => ExitCode::SUCCESS,
        Err(Failure::Negative) => ExitCode::from(1),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Budget(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(3)
        }
    }
}

