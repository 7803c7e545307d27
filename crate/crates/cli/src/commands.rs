use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use clap::Args;
use serde::Serialize;

use r3k_core::analysis::{
    adversarial_sets, classify_sets, concentration_report, count_triangles, edges_are_open_plus,
    independence_exact, independence_greedy, random_k_set, ConcentrationReport, IndependenceResult,
    SetContext,
};
use r3k_core::construction::{build, Instance};
use r3k_core::graph::Graph;
use r3k_core::hypergraph::{
    build_hyper, compact_link, link_edge_lists, s4_free_brute_force, verify_s4_free, HyperInstance,
    TripleSystem,
};
use r3k_core::io::{
    hyper_instance_from_parts, instance_from_parts, parse_edge_list, parse_triple_list, read_file,
    save_graph, save_graph_document, save_hyper, sidecar_path, Construction, GraphDocument,
    GraphSidecar, HyperSidecar, VERSION_TAG,
};
use r3k_core::params::Params;
use r3k_core::rng::{stream, Stream};

use crate::config::{Format, ParamArgs, DEFAULT_BUDGET};

/// Largest order for which the exact solver runs by default.
pub const DEFAULT_EXACT_MAX_N: usize = 300;
/// Largest order for which hypergraphs are also checked over all 4-subsets.
pub const BRUTE_FORCE_MAX_N: usize = 64;

/// Result of a command that completed: either all hard invariants hold or
/// some were violated.
#[derive(Debug, Default)]
pub struct Status {
    pub violations: Vec<String>,
}

impl Status {
    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        if !ok {
            self.violations.push(what());
        }
    }

    fn merge(&mut self, other: Status) {
        self.violations.extend(other.violations);
    }
}

#[derive(Args, Clone, Debug)]
pub struct AlphaArgs {
    /// Greedy restarts
    #[arg(long, default_value_t = 4)]
    pub restarts: usize,
    /// Node budget of the exact solver
    #[arg(long, default_value_t = DEFAULT_BUDGET)]
    pub budget: u64,
    /// Run the exact solver only up to this many vertices
    #[arg(long, default_value_t = DEFAULT_EXACT_MAX_N)]
    pub exact_max_n: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct AlphaSummary {
    pub max_degree: usize,
    pub greedy: IndependenceResult,
    pub exact: Option<IndependenceResult>,
    /// `alpha_greedy / sqrt(n ln n)`
    pub ratio: f64,
}

fn scale(n: usize) -> f64 {
    let nf = n as f64;
    (nf * nf.ln()).sqrt()
}

pub fn alpha_summary(g: &Graph, seed: u64, a: &AlphaArgs, status: &mut Status) -> AlphaSummary {
    let greedy = independence_greedy(g, a.restarts, seed);
    let exact = (g.order() <= a.exact_max_n).then(|| independence_exact(g, a.budget));
    status.check(g.is_independent(&greedy.certificate), || {
        "greedy certificate is not independent".into()
    });
    if let Some(e) = &exact {
        status.check(g.is_independent(&e.certificate), || {
            "exact certificate is not independent".into()
        });
        status.check(greedy.value <= e.value || !e.optimal, || {
            format!("greedy {} exceeds the optimum {}", greedy.value, e.value)
        });
    }
    let ratio = greedy.value as f64 / scale(g.order());
    AlphaSummary {
        max_degree: g.max_degree(),
        greedy,
        exact,
        ratio,
    }
}

fn stem(dir: &Path, kind: &str, n: usize, seed: u64) -> PathBuf {
    dir.join(format!("{kind}_n{n}_s{seed}"))
}

pub fn cmd_build(args: &ParamArgs, hyper: bool) -> Result<Status> {
    if hyper {
        return cmd_hyper(args);
    }
    let args = args.resolve()?;
    let params = args.params()?;
    let dir = args.out_dir()?.unwrap_or_else(|| PathBuf::from("."));
    let mut status = Status::default();
    for seed in args.seed_range() {
        let inst = build(&params, seed)?;
        let g = inst.graph();
        let tri = count_triangles(g);
        status.check(tri == 0, || format!("seed {seed}: {tri} triangles"));
        let sidecar = GraphSidecar::for_instance(&inst);
        let base = stem(&dir, "overlay", params.n, seed);
        let written = match args.format() {
            Format::Edgelist => {
                let (list, side) = save_graph(&base, g, &sidecar)?;
                format!("{} {}", list.display(), side.display())
            }
            Format::Json => save_graph_document(&base, &GraphDocument::new(g, sidecar))?
                .display()
                .to_string(),
        };
        println!(
            "n={} N={} seed={} edges={} max_degree={} triangles={} -> {}",
            params.n,
            params.side,
            seed,
            g.edge_count(),
            g.max_degree(),
            tri,
            written
        );
    }
    Ok(status)
}

pub enum Loaded {
    Overlay(Box<Instance>),
    Plain {
        graph: Graph,
        seed: u64,
        construction: Option<Construction>,
    },
}

impl Loaded {
    pub fn graph(&self) -> &Graph {
        match self {
            Loaded::Overlay(i) => i.graph(),
            Loaded::Plain { graph, .. } => graph,
        }
    }

    pub fn seed(&self) -> u64 {
        match self {
            Loaded::Overlay(i) => i.seed(),
            Loaded::Plain { seed, .. } => *seed,
        }
    }

    fn construction(&self) -> Option<Construction> {
        match self {
            Loaded::Overlay(_) => Some(Construction::Overlay),
            Loaded::Plain { construction, .. } => *construction,
        }
    }
}

/// Loads `<stem>.edges` (with `<stem>.json` if present) or `<stem>.graph.json`.
/// Overlay instances are rebuilt from the sidecar; a mismatch is a violation.
pub fn load_graph(path: &Path, status: &mut Status) -> Result<Loaded> {
    let (text, sidecar) = if path.extension().is_some_and(|e| e == "json") {
        let doc = GraphDocument::from_json(&read_file(path)?)
            .with_context(|| path.display().to_string())?;
        (doc.edge_list, Some(doc.sidecar))
    } else {
        let text = read_file(path)?;
        let side = sidecar_path(path);
        let sidecar = if side.is_file() {
            Some(
                GraphSidecar::from_json(&read_file(&side)?)
                    .with_context(|| side.display().to_string())?,
            )
        } else {
            None
        };
        (text, sidecar)
    };
    let (graph, seed) = parse_edge_list(&text).with_context(|| path.display().to_string())?;
    if let Some(sc) = &sidecar {
        if sc.construction == Construction::Overlay && sc.params.is_some() {
            match instance_from_parts(&text, sc) {
                Ok(inst) => return Ok(Loaded::Overlay(Box::new(inst))),
                Err(e) => status
                    .violations
                    .push(format!("sidecar does not reproduce the graph: {e}")),
            }
        }
        status.check(
            sc.n == graph.order() && sc.edges == graph.edge_count(),
            || "sidecar order/size disagree with the edge list".into(),
        );
    }
    Ok(Loaded::Plain {
        graph,
        seed,
        construction: sidecar.map(|s| s.construction),
    })
}

#[derive(Args, Clone, Debug)]
pub struct VerifyArgs {
    /// `.edges`, `.graph.json` or `.triples` file
    pub path: PathBuf,
    #[command(flatten)]
    pub alpha: AlphaArgs,
    /// Random plus adversarial k-sets to classify (overlay instances)
    #[arg(long, default_value_t = 5)]
    pub sets: usize,
    #[arg(long, value_enum, default_value_t = Format::Edgelist)]
    pub format: Format,
}

#[derive(Serialize)]
struct GraphReport {
    version: &'static str,
    path: PathBuf,
    construction: Option<Construction>,
    params: Option<Params>,
    seed: u64,
    n: usize,
    edges: usize,
    triangles: u64,
    alpha: AlphaSummary,
    open_plus_sets_checked: usize,
    concentration: Option<ConcentrationReport>,
    violations: Vec<String>,
}

pub fn cmd_verify(a: &VerifyArgs) -> Result<Status> {
    if a.path.extension().is_some_and(|e| e == "triples") {
        return verify_hyper_file(a);
    }
    let mut status = Status::default();
    let loaded = load_graph(&a.path, &mut status)?;
    let g = loaded.graph();
    let triangles = count_triangles(g);
    status.check(triangles == 0, || format!("{triangles} triangles"));
    let alpha = alpha_summary(g, loaded.seed(), &a.alpha, &mut status);
    if triangles == 0 {
        status.check(alpha.greedy.value >= alpha.max_degree, || {
            "greedy below the max degree".into()
        });
    }
    let (mut params, mut checked, mut concentration) = (None, 0, None);
    if let Loaded::Overlay(inst) = &loaded {
        params = Some(inst.params().clone());
        let (c, s) = check_sets(inst, a.sets);
        checked = c;
        status.merge(s);
        concentration = Some(concentration_report(
            &inst.red,
            &inst.blue,
            inst.placement(),
            inst.params(),
        ));
    }
    let report = GraphReport {
        version: VERSION_TAG,
        path: a.path.clone(),
        construction: loaded.construction(),
        params,
        seed: loaded.seed(),
        n: g.order(),
        edges: g.edge_count(),
        triangles,
        alpha,
        open_plus_sets_checked: checked,
        concentration,
        violations: status.violations.clone(),
    };
    match a.format {
        Format::Json => println!("{}", serde_json::to_string_pretty(&report)?),
        Format::Edgelist => print_graph_report(&report),
    }
    Ok(status)
}

/// Classifies random and adversarial k-sets; counting identities and the
/// open⁺ property must hold for every one.
fn check_sets(inst: &Instance, count: usize) -> (usize, Status) {
    let mut status = Status::default();
    let params = inst.params();
    if params.k > params.n {
        return (0, status);
    }
    let ctx = SetContext::from_instance(inst);
    let mut rng = stream(inst.seed(), Stream::Sets);
    let mut sets: Vec<Vec<usize>> = (0..count)
        .map(|_| random_k_set(params.n, params.k, &mut rng))
        .collect();
    sets.extend(adversarial_sets(&ctx, count, &mut rng));
    for (i, set) in sets.iter().enumerate() {
        match classify_sets(set, &ctx) {
            Ok(c) => status.check(c.identities_hold(), || {
                format!("set {i}: counting identities fail")
            }),
            Err(e) => status.violations.push(format!("set {i}: {e}")),
        }
        status.check(edges_are_open_plus(&ctx, set).unwrap_or(false), || {
            format!("set {i}: an edge of G lies in a closed⁺ pair")
        });
    }
    (sets.len(), status)
}

fn print_graph_report(r: &GraphReport) {
    println!("{} {}", r.version, r.path.display());
    if let Some(c) = r.construction {
        println!(
            "construction       {}",
            serde_json::to_string(&c)
                .unwrap_or_default()
                .trim_matches('"')
        );
    }
    if let Some(p) = &r.params {
        println!(
            "params             n={} N={} p={:.6} k={} eps={}",
            p.n, p.side, p.p, p.k, p.epsilon
        );
    }
    println!("seed               {}", r.seed);
    println!("order / edges      {} / {}", r.n, r.edges);
    println!("triangles          {}", r.triangles);
    print_alpha(&r.alpha);
    if r.open_plus_sets_checked > 0 {
        println!("open+ sets checked {}", r.open_plus_sets_checked);
    }
    if let Some(c) = &r.concentration {
        print_concentration(c);
    }
    print_violations(&r.violations);
}

fn print_alpha(a: &AlphaSummary) {
    println!("max degree         {}", a.max_degree);
    println!(
        "alpha greedy       {} ({:?}, ratio {:.4})",
        a.greedy.value, a.greedy.method, a.ratio
    );
    if let Some(e) = &a.exact {
        let tag = if e.optimal {
            "optimal"
        } else {
            "budget exhausted"
        };
        println!(
            "alpha exact        {} ({tag}, {} nodes)",
            e.value, e.budget_used
        );
    }
}

pub fn print_concentration(c: &ConcentrationReport) {
    println!(
        "{:<3} {:<32} {:>12} {:>12} {:>14} {:>5}",
        "#", "bound", "limit", "worst", "violations", "ok"
    );
    for b in &c.bounds {
        let limit = match b.center {
            Some(x) => format!("{x:.1}±{:.2}", b.bound),
            None => format!("{:.2}", b.bound),
        };
        println!(
            "{:<3} {:<32} {:>12} {:>12.2} {:>14} {:>5}",
            b.index,
            b.name,
            limit,
            b.worst,
            format!("{}/{}", b.violations, b.checked),
            if b.pass { "yes" } else { "no" }
        );
    }
}

fn print_violations(v: &[String]) {
    if v.is_empty() {
        println!("status             ok");
    } else {
        for x in v {
            println!("VIOLATION          {x}");
        }
    }
}

pub fn cmd_alpha(a: &VerifyArgs) -> Result<Status> {
    let mut status = Status::default();
    let loaded = load_graph(&a.path, &mut status)?;
    let g = loaded.graph();
    let summary = alpha_summary(g, loaded.seed(), &a.alpha, &mut status);
    match a.format {
        Format::Json => println!("{}", serde_json::to_string_pretty(&summary)?),
        Format::Edgelist => {
            print_alpha(&summary);
            let best = summary
                .exact
                .as_ref()
                .filter(|e| e.value >= summary.greedy.value)
                .unwrap_or(&summary.greedy);
            let cert: Vec<String> = best
                .certificate
                .iter()
                .map(|v| (v + 1).to_string())
                .collect();
            println!("certificate        {}", cert.join(" "));
            print_violations(&status.violations);
        }
    }
    Ok(status)
}

#[derive(Args, Clone, Debug)]
pub struct DiagnoseArgs {
    #[command(flatten)]
    pub params: ParamArgs,
    /// Random and adversarial k-sets per instance
    #[arg(long, default_value_t = 5)]
    pub sets: usize,
}

#[derive(Serialize)]
struct SetRow {
    kind: &'static str,
    class_counts: [usize; 4],
    union_sizes: [u64; 4],
    closed: u64,
    closed_plus: u64,
    open: u64,
    open_plus: u64,
    identities: bool,
    edges_open_plus: bool,
}

#[derive(Serialize)]
struct Diagnosis {
    version: &'static str,
    params: Params,
    seed: u64,
    stats: r3k_core::construction::BuildStats,
    triangles: u64,
    concentration: ConcentrationReport,
    eps1_k2: f64,
    sets: Vec<SetRow>,
}

pub fn cmd_diagnose(a: &DiagnoseArgs) -> Result<Status> {
    let args = a.params.resolve()?;
    let params = args.params()?;
    let mut status = Status::default();
    let mut docs = Vec::new();
    for seed in args.seed_range() {
        let inst = build(&params, seed)?;
        let triangles = count_triangles(inst.graph());
        status.check(triangles == 0, || {
            format!("seed {seed}: {triangles} triangles")
        });
        let ctx = SetContext::from_instance(&inst);
        let mut rng = stream(seed, Stream::Sets);
        let mut sets: Vec<(&'static str, Vec<usize>)> = (0..a.sets)
            .map(|_| ("random", random_k_set(params.n, params.k, &mut rng)))
            .collect();
        sets.extend(
            adversarial_sets(&ctx, a.sets, &mut rng)
                .into_iter()
                .map(|s| ("adversarial", s)),
        );
        let mut rows = Vec::new();
        for (kind, set) in &sets {
            let c = classify_sets(set, &ctx)?;
            let open_plus = edges_are_open_plus(&ctx, set)?;
            status.check(c.identities_hold() && open_plus, || {
                format!("seed {seed}: {kind} set fails")
            });
            rows.push(SetRow {
                kind,
                class_counts: c.class_counts,
                union_sizes: c.union_sizes,
                closed: c.closed,
                closed_plus: c.closed_plus,
                open: c.open,
                open_plus: c.open_plus,
                identities: c.identities_hold(),
                edges_open_plus: open_plus,
            });
        }
        let d = Diagnosis {
            version: VERSION_TAG,
            params: params.clone(),
            seed,
            stats: inst.provenance().stats.clone(),
            triangles,
            concentration: concentration_report(&inst.red, &inst.blue, inst.placement(), &params),
            eps1_k2: params.eps1 * (params.k * params.k) as f64,
            sets: rows,
        };
        match args.format() {
            Format::Json => docs.push(d),
            Format::Edgelist => print_diagnosis(&d),
        }
    }
    match args.format() {
        // one array covering every seed
        Format::Json => println!("{}", serde_json::to_string_pretty(&docs)?),
        Format::Edgelist => print_violations(&status.violations),
    }
    Ok(status)
}

fn print_diagnosis(d: &Diagnosis) {
    let p = &d.params;
    println!(
        "{} n={} N={} p={:.6} k={} seed={}",
        d.version, p.n, p.side, p.p, p.k, d.seed
    );
    let s = &d.stats;
    println!(
        "G1 edges {}  G2 edges {}  deleted {}  demoted {}  final {}  triangles {}",
        s.g1.edges, s.g2.edges, s.edges_deleted, s.edges_demoted, s.final_edges, d.triangles
    );
    print_concentration(&d.concentration);
    println!(
        "cutoffs t1={:.2} t2={:.2} t3={:.2}  eps1 k^2={:.2}",
        p.t1, p.t2, p.t3, d.eps1_k2
    );
    println!(
        "{:<12} {:>16} {:>24} {:>8} {:>8} {:>8} {:>8}",
        "set", "H/L/M/S", "unions H/L/M/S", "C", "C+", "O", "O+"
    );
    for r in &d.sets {
        let cc = r.class_counts;
        let u = r.union_sizes;
        println!(
            "{:<12} {:>16} {:>24} {:>8} {:>8} {:>8} {:>8}",
            r.kind,
            format!("{}/{}/{}/{}", cc[0], cc[1], cc[2], cc[3]),
            format!("{}/{}/{}/{}", u[0], u[1], u[2], u[3]),
            r.closed,
            r.closed_plus,
            r.open,
            r.open_plus
        );
    }
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct LinkSummary {
    pub max_link_edges: usize,
    pub max_link_degree: usize,
    pub triangle_free_links: bool,
    /// Largest greedy independent set over all links.
    pub max_link_alpha_greedy: usize,
}

pub fn link_summary(h: &TripleSystem, seed: u64) -> LinkSummary {
    let mut s = LinkSummary {
        triangle_free_links: true,
        ..Default::default()
    };
    for edges in link_edge_lists(h) {
        let l = compact_link(&edges);
        s.max_link_edges = s.max_link_edges.max(l.edge_count());
        s.max_link_degree = s.max_link_degree.max(l.max_degree());
        s.triangle_free_links &= count_triangles(&l) == 0;
        s.max_link_alpha_greedy = s
            .max_link_alpha_greedy
            .max(independence_greedy(&l, 1, seed).value);
    }
    s
}

fn check_hyper(h: &TripleSystem, status: &mut Status, label: &str) -> bool {
    let free = verify_s4_free(h);
    status.check(free, || format!("{label}: a 4-set spans three triples"));
    if h.order() <= BRUTE_FORCE_MAX_N {
        let brute = s4_free_brute_force(h);
        status.check(brute == free, || {
            format!("{label}: link check and 4-subset scan disagree")
        });
    }
    free
}

pub fn cmd_hyper(args: &ParamArgs) -> Result<Status> {
    let args = args.resolve()?;
    let params = args.params()?;
    let dir = args.out_dir()?;
    let mut status = Status::default();
    for seed in args.seed_range() {
        let inst = build_hyper(&params, seed)?;
        let h = &inst.reduced.system;
        let free = check_hyper(h, &mut status, &format!("seed {seed}"));
        let links = link_summary(h, seed);
        let written = match &dir {
            Some(d) => {
                let (list, side) = save_hyper(&stem(d, "hyper", params.n, seed), &inst)?;
                format!(" -> {} {}", list.display(), side.display())
            }
            None => String::new(),
        };
        print_hyper(&inst, free, &links, args.format(), &written)?;
    }
    Ok(status)
}

#[derive(Serialize)]
struct HyperReport<'a> {
    version: &'static str,
    params: &'a Params,
    seed: u64,
    h2_edges: usize,
    reduction: r3k_core::hypergraph::ReductionStats,
    s4_free: bool,
    links: &'a LinkSummary,
}

fn print_hyper(
    inst: &HyperInstance,
    free: bool,
    links: &LinkSummary,
    format: Format,
    written: &str,
) -> Result<()> {
    let r = HyperReport {
        version: VERSION_TAG,
        params: &inst.params,
        seed: inst.seed,
        h2_edges: inst.placed.system.edge_count(),
        reduction: inst.reduced.stats,
        s4_free: free,
        links,
    };
    match format {
        Format::Json => println!("{}", serde_json::to_string_pretty(&r)?),
        Format::Edgelist => {
            let s = &r.reduction;
            println!(
                "n={} N={} p={} seed={} H2={} rejected R/B={}/{} removed R/B={}/{} H={} s4_free={} max_link_edges={} max_link_alpha={}{}",
                r.params.n,
                r.params.side,
                r.params.p,
                r.seed,
                r.h2_edges,
                s.red_rejected,
                s.blue_rejected,
                s.red_removed,
                s.blue_removed,
                s.output_edges,
                free,
                links.max_link_edges,
                links.max_link_alpha_greedy,
                written
            );
        }
    }
    Ok(())
}

fn verify_hyper_file(a: &VerifyArgs) -> Result<Status> {
    let mut status = Status::default();
    let text = read_file(&a.path)?;
    let side = sidecar_path(&a.path);
    let (h, seed) = if side.is_file() {
        let sc = HyperSidecar::from_json(&read_file(&side)?)
            .with_context(|| side.display().to_string())?;
        let parsed = parse_triple_list(&text, Some(&sc.colors))
            .with_context(|| a.path.display().to_string())?;
        if let Err(e) = hyper_instance_from_parts(&text, &sc) {
            status
                .violations
                .push(format!("sidecar does not reproduce the system: {e}"));
        }
        parsed
    } else {
        parse_triple_list(&text, None).with_context(|| a.path.display().to_string())?
    };
    let free = check_hyper(&h, &mut status, "system");
    let links = link_summary(&h, seed);
    let report = serde_json::json!({
        "version": VERSION_TAG,
        "path": a.path,
        "seed": seed,
        "n": h.order(),
        "edges": h.edge_count(),
        "s4_free": free,
        "links": links,
        "violations": status.violations,
    });
    match a.format {
        Format::Json => println!("{}", serde_json::to_string_pretty(&report)?),
        Format::Edgelist => {
            println!("{} {}", VERSION_TAG, a.path.display());
            println!("order / triples    {} / {}", h.order(), h.edge_count());
            println!("s4-free            {free}");
            println!("max link edges     {}", links.max_link_edges);
            println!("max link alpha     {}", links.max_link_alpha_greedy);
            print_violations(&status.violations);
        }
    }
    Ok(status)
}
