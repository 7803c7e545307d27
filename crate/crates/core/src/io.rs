//! Text edge/triple lists plus JSON sidecars.
//!
//! Edge list: a header `n m seed`, then `m` lines `u v` with 1-based vertices,
//! `u < v`, in lexicographic order. Triple lists use `u v w` lines the same
//! way. The sidecar carries everything needed to rebuild the instance and is
//! checked against the list on load.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::baselines::ProcessSummary;
use crate::color::Colors;
use crate::construction::{
    apply_deletion_rule, conormal_product, induce_final_graph, BaseGraph, BuildStats, Cell,
    Instance, Placement, Provenance, Side,
};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::hypergraph::{
    induce_product_on, s4_reduction_with_order, HyperInstance, ReductionStats, TripleSystem,
};
use crate::params::{Params, ROUNDING_CONVENTION};

/// Embedded in every sidecar and report.
pub const VERSION_TAG: &str = concat!(env!("CARGO_PKG_NAME"), "-", env!("CARGO_PKG_VERSION"));

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Construction {
    Overlay,
    EdgeDeletion,
    Process,
    Hypergraph,
}

fn parse_err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        line,
        msg: msg.into(),
    }
}

fn write_list<const K: usize>(n: usize, seed: u64, items: &[[usize; K]]) -> String {
    let mut s = String::with_capacity(16 + items.len() * 12);
    writeln!(s, "{n} {} {seed}", items.len()).unwrap();
    for it in items {
        let line: Vec<String> = it.iter().map(|v| (v + 1).to_string()).collect();
        writeln!(s, "{}", line.join(" ")).unwrap();
    }
    s
}

fn parse_list<const K: usize>(text: &str) -> Result<(usize, u64, Vec<[usize; K]>)> {
    let mut lines = text
        .lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty());
    let (hl, header) = lines.next().ok_or_else(|| parse_err(1, "missing header"))?;
    let nums = |line: usize, l: &str| -> Result<Vec<u64>> {
        l.split_whitespace()
            .map(|t| {
                t.parse::<u64>()
                    .map_err(|e| parse_err(line, format!("{t:?}: {e}")))
            })
            .collect()
    };
    let h = nums(hl + 1, header)?;
    if h.len() != 3 {
        return Err(parse_err(hl + 1, "header must be `n m seed`"));
    }
    let (n, m, seed) = (h[0] as usize, h[1] as usize, h[2]);
    let mut items = Vec::with_capacity(m);
    for (i, l) in lines {
        let v = nums(i + 1, l)?;
        if v.len() != K {
            return Err(parse_err(i + 1, format!("expected {K} vertices")));
        }
        let mut it = [0usize; K];
        for (slot, &x) in it.iter_mut().zip(&v) {
            if x == 0 || x as usize > n {
                return Err(parse_err(i + 1, format!("vertex {x} outside 1..={n}")));
            }
            *slot = x as usize - 1;
        }
        if it.windows(2).any(|w| w[0] >= w[1]) {
            return Err(parse_err(i + 1, "vertices must be strictly increasing"));
        }
        items.push(it);
    }
    if items.len() != m {
        return Err(parse_err(
            0,
            format!("header announces {m} lines, found {}", items.len()),
        ));
    }
    Ok((n, seed, items))
}

pub fn edge_list_string(g: &Graph, seed: u64) -> String {
    let edges: Vec<[usize; 2]> = g.edges().map(|(u, v)| [u, v]).collect();
    write_list(g.order(), seed, &edges)
}

pub fn parse_edge_list(text: &str) -> Result<(Graph, u64)> {
    let (n, seed, edges) = parse_list::<2>(text)?;
    let g = Graph::from_edges(n, edges.iter().map(|e| (e[0], e[1])))?;
    if g.edge_count() != edges.len() {
        return Err(parse_err(0, "duplicate edge"));
    }
    Ok((g, seed))
}

/// Triples in lexicographic order; colours go to the sidecar in the same order.
pub fn triple_list_string(h: &TripleSystem, seed: u64) -> String {
    let triples: Vec<[usize; 3]> = h.iter().map(|(t, _)| t).collect();
    write_list(h.order(), seed, &triples)
}

/// Parses a triple list; `colors` (one per line, in order) defaults to red.
pub fn parse_triple_list(text: &str, colors: Option<&[Colors]>) -> Result<(TripleSystem, u64)> {
    let (n, seed, triples) = parse_list::<3>(text)?;
    if let Some(c) = colors {
        if c.len() != triples.len() {
            return Err(parse_err(
                0,
                format!("{} colours for {} triples", c.len(), triples.len()),
            ));
        }
    }
    let mut h = TripleSystem::new(n);
    for (i, &t) in triples.iter().enumerate() {
        let c = colors.map_or(Colors::RED, |c| c[i]);
        if c.is_empty() || h.contains(t) {
            return Err(parse_err(i + 2, "empty colour or duplicate triple"));
        }
        h.insert(t, c)?;
    }
    Ok((h, seed))
}

/// JSON sidecar of a graph edge list.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GraphSidecar {
    pub version: String,
    pub construction: Construction,
    pub rounding_convention: String,
    pub n: usize,
    pub edges: usize,
    pub seed: u64,
    pub params: Option<Params>,
    pub stats: Option<BuildStats>,
    pub placement: Option<Vec<Cell>>,
    pub red_base_edges: Option<Vec<[usize; 2]>>,
    pub blue_base_edges: Option<Vec<[usize; 2]>>,
    /// Baseline density parameter (edge deletion).
    pub p: Option<f64>,
    pub deleted_edges: Option<usize>,
    pub process: Option<ProcessSummary>,
}

impl GraphSidecar {
    /// Sidecar for a graph without construction data.
    pub fn bare(construction: Construction, g: &Graph, seed: u64) -> Self {
        GraphSidecar {
            version: VERSION_TAG.to_string(),
            construction,
            rounding_convention: ROUNDING_CONVENTION.to_string(),
            n: g.order(),
            edges: g.edge_count(),
            seed,
            params: None,
            stats: None,
            placement: None,
            red_base_edges: None,
            blue_base_edges: None,
            p: None,
            deleted_edges: None,
            process: None,
        }
    }

    pub fn for_instance(inst: &Instance) -> Self {
        let base =
            |b: &BaseGraph| -> Vec<[usize; 2]> { b.graph().edges().map(|(u, v)| [u, v]).collect() };
        let prov = inst.provenance();
        GraphSidecar {
            params: Some(prov.params.clone()),
            stats: Some(prov.stats.clone()),
            placement: Some(inst.placement().cells().to_vec()),
            red_base_edges: Some(base(&inst.red)),
            blue_base_edges: Some(base(&inst.blue)),
            ..GraphSidecar::bare(Construction::Overlay, inst.graph(), prov.seed)
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("sidecar serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }
}

/// Single-file form of a graph: the sidecar with the edge list embedded verbatim.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GraphDocument {
    pub sidecar: GraphSidecar,
    pub edge_list: String,
}

impl GraphDocument {
    pub fn new(g: &Graph, sidecar: GraphSidecar) -> Self {
        let edge_list = edge_list_string(g, sidecar.seed);
        GraphDocument { sidecar, edge_list }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("document serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }
}

fn base_from(side: Side, order: usize, edges: &[[usize; 2]]) -> Result<BaseGraph> {
    Ok(BaseGraph::new(
        side,
        Graph::from_edges(order, edges.iter().map(|e| (e[0], e[1])))?,
    ))
}

/// Rebuilds an overlay instance from its sidecar and checks that it induces
/// exactly the graph of the edge list.
pub fn instance_from_parts(edge_list: &str, sidecar: &GraphSidecar) -> Result<Instance> {
    let (graph, seed) = parse_edge_list(edge_list)?;
    let missing = |what: &str| parse_err(0, format!("sidecar lacks {what}"));
    let params = sidecar.params.clone().ok_or_else(|| missing("params"))?;
    params.validate()?;
    let stats = sidecar.stats.clone().ok_or_else(|| missing("stats"))?;
    let cells = sidecar
        .placement
        .clone()
        .ok_or_else(|| missing("placement"))?;
    let red = base_from(
        Side::Red,
        params.side,
        sidecar
            .red_base_edges
            .as_deref()
            .ok_or_else(|| missing("red base"))?,
    )?;
    let blue = base_from(
        Side::Blue,
        params.side,
        sidecar
            .blue_base_edges
            .as_deref()
            .ok_or_else(|| missing("blue base"))?,
    )?;
    if seed != sidecar.seed {
        return Err(parse_err(
            1,
            format!("seed {seed} disagrees with sidecar seed {}", sidecar.seed),
        ));
    }
    let placement = Placement::new(params.side, cells)?;
    let g1 = conormal_product(&red, &blue)?;
    let g2 = apply_deletion_rule(&g1, &red, &blue)?;
    let mut placed = induce_final_graph(&g2, &placement)?;
    if placed.graph != graph {
        return Err(parse_err(
            0,
            "edge list disagrees with the graph rebuilt from the sidecar",
        ));
    }
    placed.provenance = Some(Provenance {
        params,
        seed,
        stats,
    });
    Ok(Instance {
        red,
        blue,
        g2,
        placed,
    })
}

/// JSON sidecar of a reduced hypergraph triple list.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HyperSidecar {
    pub version: String,
    pub construction: Construction,
    pub rounding_convention: String,
    pub n: usize,
    pub edges: usize,
    pub seed: u64,
    pub params: Params,
    pub placement: Vec<Cell>,
    pub red_base_triples: Vec<[usize; 3]>,
    pub blue_base_triples: Vec<[usize; 3]>,
    /// Flags of the listed triples, in list order.
    pub colors: Vec<Colors>,
    pub reduction: ReductionStats,
}

impl HyperSidecar {
    pub fn for_instance(inst: &HyperInstance) -> Self {
        let h = &inst.reduced.system;
        HyperSidecar {
            version: VERSION_TAG.to_string(),
            construction: Construction::Hypergraph,
            rounding_convention: ROUNDING_CONVENTION.to_string(),
            n: h.order(),
            edges: h.edge_count(),
            seed: inst.seed,
            params: inst.params.clone(),
            placement: inst.placed.placement.cells().to_vec(),
            red_base_triples: inst.red.iter().map(|(t, _)| t).collect(),
            blue_base_triples: inst.blue.iter().map(|(t, _)| t).collect(),
            colors: h.iter().map(|(_, c)| c).collect(),
            reduction: inst.reduced.stats,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("sidecar serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }
}

pub fn hyper_instance_from_parts(
    triple_list: &str,
    sidecar: &HyperSidecar,
) -> Result<HyperInstance> {
    let (h, seed) = parse_triple_list(triple_list, Some(&sidecar.colors))?;
    if seed != sidecar.seed {
        return Err(parse_err(
            1,
            format!("seed {seed} disagrees with sidecar seed {}", sidecar.seed),
        ));
    }
    let params = sidecar.params.clone();
    params.validate()?;
    let base = |ts: &[[usize; 3]], c: Colors| -> Result<TripleSystem> {
        let mut s = TripleSystem::new(params.side);
        ts.iter().try_for_each(|&t| s.insert(t, c))?;
        Ok(s)
    };
    let red = base(&sidecar.red_base_triples, Colors::RED)?;
    let blue = base(&sidecar.blue_base_triples, Colors::BLUE)?;
    let placement = Placement::new(params.side, sidecar.placement.clone())?;
    let placed = induce_product_on(&red, &blue, &placement)?;
    let reduced = s4_reduction_with_order(&placed.system, Some(&placed.cell_ranks()));
    if reduced.system != h {
        return Err(parse_err(
            0,
            "triple list disagrees with the system rebuilt from the sidecar",
        ));
    }
    Ok(HyperInstance {
        params,
        seed,
        red,
        blue,
        placed,
        reduced,
    })
}

/// `<stem>.edges` / `<stem>.triples` and `<stem>.json` next to each other.
pub fn sidecar_path(list_path: &Path) -> PathBuf {
    list_path.with_extension("json")
}

fn write_file(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|e| {
        Error::Io(std::io::Error::new(
            e.kind(),
            format!("{}: {e}", path.display()),
        ))
    })
}

pub fn read_file(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| {
        Error::Io(std::io::Error::new(
            e.kind(),
            format!("{}: {e}", path.display()),
        ))
    })
}

/// Writes `<stem>.edges` and `<stem>.json`; returns both paths.
pub fn save_graph(stem: &Path, g: &Graph, sidecar: &GraphSidecar) -> Result<(PathBuf, PathBuf)> {
    let list = stem.with_extension("edges");
    let side = sidecar_path(&list);
    write_file(&list, &edge_list_string(g, sidecar.seed))?;
    write_file(&side, &sidecar.to_json())?;
    Ok((list, side))
}

/// Writes `<stem>.graph.json` holding sidecar and edge list together.
pub fn save_graph_document(stem: &Path, doc: &GraphDocument) -> Result<PathBuf> {
    let path = stem.with_extension("graph.json");
    write_file(&path, &doc.to_json())?;
    Ok(path)
}

pub fn save_hyper(stem: &Path, inst: &HyperInstance) -> Result<(PathBuf, PathBuf)> {
    let list = stem.with_extension("triples");
    let side = sidecar_path(&list);
    write_file(&list, &triple_list_string(&inst.reduced.system, inst.seed))?;
    write_file(&side, &HyperSidecar::for_instance(inst).to_json())?;
    Ok((list, side))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construction::build;
    use crate::hypergraph::build_hyper;
    use crate::params::{derive_default, explicit_simple};

    #[test]
    fn edge_list_format() {
        let g = Graph::from_edges(4, [(2, 0), (1, 3)]).unwrap();
        let s = edge_list_string(&g, 42);
        assert_eq!(s, "4 2 42\n1 3\n2 4\n");
        let (back, seed) = parse_edge_list(&s).unwrap();
        assert_eq!((back, seed), (g, 42));
    }

    #[test]
    fn edge_list_rejections() {
        assert!(parse_edge_list("").is_err());
        assert!(parse_edge_list("3 1 0\n1 4\n").is_err());
        assert!(parse_edge_list("3 1 0\n2 1\n").is_err());
        assert!(parse_edge_list("3 2 0\n1 2\n").is_err());
        assert!(parse_edge_list("3 2 0\n1 2\n1 2\n").is_err());
        assert!(parse_edge_list("3 1 0\n1 x\n").is_err());
        match parse_edge_list("3 1 0\n0 2\n") {
            Err(Error::Parse { line: 2, .. }) => {}
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn triple_list_round_trip() {
        let mut h = TripleSystem::new(6);
        h.insert([0, 1, 2], Colors::RED).unwrap();
        h.insert([1, 4, 5], Colors::BOTH).unwrap();
        let s = triple_list_string(&h, 3);
        assert_eq!(s, "6 2 3\n1 2 3\n2 5 6\n");
        let colors: Vec<Colors> = h.iter().map(|(_, c)| c).collect();
        assert_eq!(parse_triple_list(&s, Some(&colors)).unwrap(), (h, 3));
        assert!(parse_triple_list(&s, Some(&colors[..1])).is_err());
    }

    #[test]
    fn overlay_round_trip() {
        for (p, seed) in [
            (explicit_simple(30, 7, 0.4, 6).unwrap(), 3),
            (derive_default(500, 0.1).unwrap(), 8),
        ] {
            let inst = build(&p, seed).unwrap();
            let text = edge_list_string(inst.graph(), seed);
            let side =
                GraphSidecar::from_json(&GraphSidecar::for_instance(&inst).to_json()).unwrap();
            let back = instance_from_parts(&text, &side).unwrap();
            assert_eq!(back, inst);
        }
    }

    #[test]
    fn tampered_edge_list_is_rejected() {
        let p = explicit_simple(30, 7, 0.4, 6).unwrap();
        let inst = build(&p, 3).unwrap();
        let side = GraphSidecar::for_instance(&inst);
        let mut g = inst.graph().clone();
        let (u, v) = g.edges().next().unwrap();
        g.remove_edge(u, v);
        assert!(instance_from_parts(&edge_list_string(&g, 3), &side).is_err());
        assert!(instance_from_parts(&edge_list_string(inst.graph(), 4), &side).is_err());
    }

    #[test]
    fn hyper_round_trip() {
        let p = explicit_simple(30, 6, 0.5, 6).unwrap();
        let inst = build_hyper(&p, 2).unwrap();
        let text = triple_list_string(&inst.reduced.system, 2);
        let side = HyperSidecar::from_json(&HyperSidecar::for_instance(&inst).to_json()).unwrap();
        let back = hyper_instance_from_parts(&text, &side).unwrap();
        assert_eq!(back.reduced.system, inst.reduced.system);
        assert_eq!(back.placed, inst.placed);
        assert_eq!(back.red, inst.red);
    }

    #[test]
    fn sidecar_carries_version_and_params() {
        let p = derive_default(200, 0.1).unwrap();
        let inst = build(&p, 1).unwrap();
        let json = GraphSidecar::for_instance(&inst).to_json();
        assert!(json.contains(VERSION_TAG));
        assert!(json.contains("\"construction\": \"overlay\""));
        assert!(json.contains("\"N\": "));
    }
}
