//! Parameter sweeps: one CSV row per (construction, n, seed).

use std::io::Write;
use std::path::PathBuf;

use anyhow::{Context, Result};
use clap::{Args, ValueEnum};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use r3k_core::analysis::{count_triangles, independence_exact, independence_greedy};
use r3k_core::baselines::{
    edge_deletion_baseline, triangle_free_process, DEFAULT_DELETION_CONSTANT,
};
use r3k_core::construction::build;
use r3k_core::graph::Graph;
use r3k_core::io::VERSION_TAG;
use r3k_core::params::derive_params;

use crate::config::{read_config, DEFAULT_BETA, DEFAULT_BUDGET, DEFAULT_EPS};

/// Bumped whenever the columns change.
pub const CSV_SCHEMA: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Kind {
    Overlay,
    EdgeDeletion,
    Process,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(untagged)]
enum OneOrMany {
    One(usize),
    Many(Vec<usize>),
}

#[derive(Args, Clone, Debug, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SweepArgs {
    /// Config file (TOML, flat `key = value`; keys as the long flags)
    #[arg(long)]
    #[serde(skip)]
    pub config: Option<PathBuf>,
    /// Orders to sweep, comma separated
    #[arg(long = "n", value_delimiter = ',')]
    #[serde(skip)]
    pub n: Vec<usize>,
    #[arg(skip)]
    #[serde(rename = "n")]
    n_config: Option<OneOrMany>,
    /// Epsilon [default: 0.1]
    #[arg(long)]
    pub eps: Option<f64>,
    /// [default: 0.5]
    #[arg(long)]
    pub beta: Option<f64>,
    /// [default: 1 + eps]
    #[arg(long)]
    pub kappa: Option<f64>,
    /// First seed [default: 0]
    #[arg(long)]
    pub seed: Option<u64>,
    /// Seeds per (construction, n) [default: 1]
    #[arg(long)]
    pub seeds: Option<usize>,
    /// Node budget of the exact solver
    #[arg(long)]
    pub budget: Option<u64>,
    /// CSV file to write (stdout when absent)
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Constructions, comma separated [default: overlay,edge-deletion]
    #[arg(long, value_delimiter = ',', value_enum)]
    #[serde(skip)]
    pub constructions: Vec<Kind>,
    #[arg(skip)]
    #[serde(rename = "constructions")]
    constructions_config: Option<Vec<Kind>>,
    /// Run the exact solver up to this order [default: 0, never]
    #[arg(long)]
    pub exact_max_n: Option<usize>,
    /// Greedy restarts [default: 2]
    #[arg(long)]
    pub restarts: Option<usize>,
    /// Edge-deletion density, p = c / sqrt(n) [default: 0.5]
    #[arg(long)]
    pub deletion_c: Option<f64>,
}

/// A fully resolved sweep.
#[derive(Clone, Debug, PartialEq)]
pub struct SweepPlan {
    pub n: Vec<usize>,
    pub eps: f64,
    pub beta: f64,
    pub kappa: f64,
    pub seeds: std::ops::Range<u64>,
    pub budget: u64,
    pub constructions: Vec<Kind>,
    pub exact_max_n: usize,
    pub restarts: usize,
    pub deletion_c: f64,
}

impl SweepArgs {
    pub fn plan(&self) -> Result<(SweepPlan, Option<PathBuf>)> {
        let file: SweepArgs = match &self.config {
            Some(path) => read_config(path)?,
            None => SweepArgs::default(),
        };
        let n = if !self.n.is_empty() {
            self.n.clone()
        } else {
            match &file.n_config {
                Some(OneOrMany::One(x)) => vec![*x],
                Some(OneOrMany::Many(v)) => v.clone(),
                None => anyhow::bail!("--n is required (directly or via --config)"),
            }
        };
        let constructions = if !self.constructions.is_empty() {
            self.constructions.clone()
        } else {
            file.constructions_config
                .clone()
                .unwrap_or(vec![Kind::Overlay, Kind::EdgeDeletion])
        };
        let eps = self.eps.or(file.eps).unwrap_or(DEFAULT_EPS);
        let start = self.seed.or(file.seed).unwrap_or(0);
        let plan = SweepPlan {
            n,
            eps,
            beta: self.beta.or(file.beta).unwrap_or(DEFAULT_BETA),
            kappa: self.kappa.or(file.kappa).unwrap_or(1.0 + eps),
            seeds: start..start + self.seeds.or(file.seeds).unwrap_or(1) as u64,
            budget: self.budget.or(file.budget).unwrap_or(DEFAULT_BUDGET),
            constructions,
            exact_max_n: self.exact_max_n.or(file.exact_max_n).unwrap_or(0),
            restarts: self.restarts.or(file.restarts).unwrap_or(2),
            deletion_c: self
                .deletion_c
                .or(file.deletion_c)
                .unwrap_or(DEFAULT_DELETION_CONSTANT),
        };
        for &n in &plan.n {
            derive_params(n, plan.eps, plan.beta, plan.kappa)
                .with_context(|| format!("n = {n}"))?;
        }
        Ok((plan, self.out.clone().or(file.out)))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Row {
    pub construction: Kind,
    pub n: usize,
    pub seed: u64,
    /// Edge probability of the construction (base graphs or `G(n, p)`).
    pub p: Option<f64>,
    pub edges: usize,
    /// `edges / C(n, 2)`
    pub density: f64,
    pub max_degree: usize,
    pub alpha_greedy: usize,
    pub alpha_exact: Option<usize>,
    /// `alpha_greedy / sqrt(n ln n)`
    pub alpha_ratio: f64,
    /// `max_degree / sqrt(n ln n)`
    pub delta_ratio: f64,
    pub triangles: u64,
    /// Overlay: product edges lost to deletion; edge deletion: sampled edges lost.
    pub loss: Option<f64>,
    /// Triangle-free process: edges added.
    pub steps: Option<usize>,
}

pub fn run_cell(plan: &SweepPlan, kind: Kind, n: usize, seed: u64) -> Result<Row> {
    let (graph, p, loss, steps): (Graph, Option<f64>, Option<f64>, Option<usize>) = match kind {
        Kind::Overlay => {
            let params = derive_params(n, plan.eps, plan.beta, plan.kappa)?;
            let inst = build(&params, seed)?;
            let s = &inst.provenance().stats;
            let loss = if s.g1.edges == 0 {
                0.0
            } else {
                s.edges_deleted as f64 / s.g1.edges as f64
            };
            (inst.placed.graph, Some(params.p), Some(loss), None)
        }
        Kind::EdgeDeletion => {
            let p = (plan.deletion_c / (n as f64).sqrt()).min(1.0);
            let r = edge_deletion_baseline(n, p, seed);
            let loss = r.loss();
            (r.graph, Some(p), Some(loss), None)
        }
        Kind::Process => {
            let r = triangle_free_process(n, seed, None);
            (r.graph, None, None, Some(r.summary.steps))
        }
    };
    let greedy = independence_greedy(&graph, plan.restarts, seed);
    let alpha_exact =
        (n <= plan.exact_max_n).then(|| independence_exact(&graph, plan.budget).value);
    let nf = n as f64;
    let scale = (nf * nf.ln()).sqrt();
    let pairs = nf * (nf - 1.0) / 2.0;
    Ok(Row {
        construction: kind,
        n,
        seed,
        p,
        edges: graph.edge_count(),
        density: graph.edge_count() as f64 / pairs,
        max_degree: graph.max_degree(),
        alpha_greedy: greedy.value,
        alpha_exact,
        alpha_ratio: greedy.value as f64 / scale,
        delta_ratio: graph.max_degree() as f64 / scale,
        triangles: count_triangles(&graph),
        loss,
        steps,
    })
}

/// All cells, computed in parallel, in (construction, n, seed) order.
pub fn run_sweep(plan: &SweepPlan) -> Result<Vec<Row>> {
    let cells: Vec<(Kind, usize, u64)> = plan
        .constructions
        .iter()
        .flat_map(|&k| {
            plan.n
                .iter()
                .flat_map(move |&n| plan.seeds.clone().map(move |s| (k, n, s)))
        })
        .collect();
    cells
        .par_iter()
        .map(|&(k, n, s)| run_cell(plan, k, n, s))
        .collect()
}

pub fn header_comment() -> String {
    format!("# r3k sweep schema v{CSV_SCHEMA} ({VERSION_TAG})")
}

pub fn write_csv<W: Write>(mut w: W, rows: &[Row]) -> Result<()> {
    writeln!(w, "{}", header_comment())?;
    let mut csv = csv::Writer::from_writer(w);
    for r in rows {
        csv.serialize(r)?;
    }
    csv.flush()?;
    Ok(())
}

/// Parses a CSV written by [`write_csv`], checking the schema line.
#[cfg(test)]
fn read_csv(text: &str) -> Result<Vec<Row>> {
    let (first, rest) = text.split_once('\n').context("empty CSV")?;
    anyhow::ensure!(
        first.starts_with(&format!("# r3k sweep schema v{CSV_SCHEMA} ")),
        "unexpected schema line {first:?}"
    );
    let mut rd = csv::Reader::from_reader(rest.as_bytes());
    Ok(rd.deserialize().collect::<Result<Vec<Row>, _>>()?)
}

pub fn cmd_sweep(a: &SweepArgs) -> Result<crate::commands::Status> {
    let (plan, out) = a.plan()?;
    let rows = run_sweep(&plan)?;
    let mut status = crate::commands::Status::default();
    for r in &rows {
        if r.triangles != 0 {
            status.violations.push(format!(
                "{:?} n={} seed={}: {} triangles",
                r.construction, r.n, r.seed, r.triangles
            ));
        }
    }
    match out {
        Some(path) => {
            let f = std::fs::File::create(&path)
                .with_context(|| format!("creating {}", path.display()))?;
            write_csv(std::io::BufWriter::new(f), &rows)?;
            eprintln!("{} rows -> {}", rows.len(), path.display());
        }
        None => write_csv(std::io::stdout().lock(), &rows)?,
    }
    Ok(status)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn plan() -> SweepPlan {
        SweepPlan {
            n: vec![100, 130],
            eps: DEFAULT_EPS,
            beta: DEFAULT_BETA,
            kappa: 1.0 + DEFAULT_EPS,
            seeds: 3..5,
            budget: DEFAULT_BUDGET,
            constructions: vec![Kind::Overlay, Kind::EdgeDeletion, Kind::Process],
            exact_max_n: 100,
            restarts: 1,
            deletion_c: DEFAULT_DELETION_CONSTANT,
        }
    }

    #[test]
    fn csv_round_trip() {
        let rows = run_sweep(&plan()).unwrap();
        assert_eq!(rows.len(), 12);
        let mut buf = Vec::new();
        write_csv(&mut buf, &rows).unwrap();
        let back = read_csv(std::str::from_utf8(&buf).unwrap()).unwrap();
        assert_eq!(back, rows);
    }

    #[test]
    fn rows_are_ordered_and_triangle_free() {
        let rows = run_sweep(&plan()).unwrap();
        let keys: Vec<_> = rows.iter().map(|r| (r.construction, r.n, r.seed)).collect();
        let mut sorted = keys.clone();
        sorted.sort();
        assert_eq!(keys, sorted);
        for r in &rows {
            assert_eq!(r.triangles, 0);
            assert_eq!(r.alpha_exact.is_some(), r.n <= 100);
            if let Some(e) = r.alpha_exact {
                assert!(r.alpha_greedy <= e);
            }
        }
    }
}
