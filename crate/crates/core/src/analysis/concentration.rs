//! Fibre, degree and codegree statistics of a built instance, compared with the
//! seven concentration bounds (fibre size, base degree, base codegree,
//! `|N_3(v)|`, `|N_3(v) ∩ N_3(w)|`, and the two projected codegrees).
//!
//! The bounds are asymptotic whp statements, so the report records the worst
//! observed value and the number of violations instead of failing.

use serde::{Deserialize, Serialize};

use crate::bits::BitSet;
use crate::construction::{BaseGraph, Placement};
use crate::params::Params;

/// Tolerances used by the report. Defaults come from the instance parameters.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    pub eps2: f64,
    pub c: f64,
}

impl Tolerances {
    pub fn from_params(p: &Params) -> Self {
        Tolerances {
            eps2: p.eps2,
            c: p.c,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundCheck {
    /// 1..=7 in the order listed in the module docs.
    pub index: u8,
    pub name: String,
    /// Centre of a two-sided window; `None` for one-sided upper bounds.
    pub center: Option<f64>,
    /// Allowed deviation (two-sided) or upper bound (one-sided).
    pub bound: f64,
    /// Largest deviation (two-sided) or largest value (one-sided) observed.
    pub worst: f64,
    /// Vertex ids of the worst case. Base vertices are numbered red `0..N`, blue `N..2N`.
    pub worst_at: Vec<usize>,
    pub violations: u64,
    pub checked: u64,
    pub pass: bool,
}

impl BoundCheck {
    fn new(index: u8, name: &str, center: Option<f64>, bound: f64) -> Self {
        BoundCheck {
            index,
            name: name.to_string(),
            center,
            bound,
            worst: 0.0,
            worst_at: Vec::new(),
            violations: 0,
            checked: 0,
            pass: true,
        }
    }

    fn observe(&mut self, value: f64, at: &[usize]) {
        let dev = match self.center {
            Some(c) => (value - c).abs(),
            None => value,
        };
        self.checked += 1;
        if self.checked == 1 || dev > self.worst {
            self.worst = dev;
            self.worst_at = at.to_vec();
        }
        if dev > self.bound {
            self.violations += 1;
            self.pass = false;
        }
    }

    pub fn violation_fraction(&self) -> f64 {
        if self.checked == 0 {
            0.0
        } else {
            self.violations as f64 / self.checked as f64
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConcentrationReport {
    pub tolerances: Tolerances,
    /// `|F(v)|` for red `0..N` then blue `0..N`.
    pub fiber_sizes: Vec<usize>,
    pub degrees: Vec<usize>,
    pub n3_sizes: Vec<usize>,
    pub max_codegree: usize,
    pub max_n3_codegree: usize,
    pub max_projected_codegree_red: usize,
    pub max_projected_codegree_blue: usize,
    pub bounds: Vec<BoundCheck>,
}

impl ConcentrationReport {
    pub fn bound(&self, index: u8) -> &BoundCheck {
        &self.bounds[index as usize - 1]
    }

    pub fn all_pass(&self) -> bool {
        self.bounds.iter().all(|b| b.pass)
    }
}

pub fn concentration_report(
    gr: &BaseGraph,
    gb: &BaseGraph,
    placement: &Placement,
    params: &Params,
) -> ConcentrationReport {
    concentration_report_with(gr, gb, placement, params, Tolerances::from_params(params))
}

pub fn concentration_report_with(
    gr: &BaseGraph,
    gb: &BaseGraph,
    placement: &Placement,
    params: &Params,
    tol: Tolerances,
) -> ConcentrationReport {
    let side = placement.side();
    let ln = params.ln_n();
    let ln2 = ln * ln;
    let ln3 = ln2 * ln;
    let pn_base = params.p * side as f64;
    let pn = params.pn();

    // occupancy: occ_row[r] = columns occupied in row r; occ_col[b] = rows occupied in column b
    let mut occ_row = vec![BitSet::new(side); side];
    let mut occ_col = vec![BitSet::new(side); side];
    for c in placement.cells() {
        occ_row[c.row].insert(c.col);
        occ_col[c.col].insert(c.row);
    }
    let fiber: Vec<usize> = occ_row.iter().chain(&occ_col).map(BitSet::count).collect();
    let bases = [gr, gb];
    let nbr_sets: Vec<BitSet> = bases
        .iter()
        .flat_map(|b| (0..side).map(move |v| b.graph().neighbor_set(v)))
        .collect();
    let degrees: Vec<usize> = nbr_sets.iter().map(BitSet::count).collect();
    let n3: Vec<usize> = (0..2 * side)
        .map(|v| {
            let off = if v < side { 0 } else { side };
            nbr_sets[v].iter().map(|u| fiber[off + u]).sum()
        })
        .collect();
    // pi_B(N_3(r)) for red r, pi_R(N_3(b)) for blue b
    let proj: Vec<BitSet> = (0..2 * side)
        .map(|v| {
            let occ = if v < side { &occ_row } else { &occ_col };
            let mut s = BitSet::new(side);
            for u in nbr_sets[v].iter() {
                s.union_with(&occ[u]);
            }
            s
        })
        .collect();

    let mut b1 = BoundCheck::new(1, "fiber size", Some(ln2), tol.eps2 * ln2);
    let mut b2 = BoundCheck::new(2, "base degree", Some(pn_base), tol.eps2 * pn_base);
    let mut b3 = BoundCheck::new(3, "base codegree", None, tol.c * ln);
    let mut b4 = BoundCheck::new(4, "|N3(v)|", Some(pn), tol.eps2 * pn);
    let mut b5 = BoundCheck::new(5, "|N3(v) & N3(w)|", None, tol.c * ln3);
    let mut b6 = BoundCheck::new(6, "projected codegree, red pairs", None, tol.c * ln3);
    let mut b7 = BoundCheck::new(7, "projected codegree, blue pairs", None, tol.c * ln3);

    for v in 0..2 * side {
        b1.observe(fiber[v] as f64, &[v]);
        b2.observe(degrees[v] as f64, &[v]);
        b4.observe(n3[v] as f64, &[v]);
    }

    let (mut max_co, mut max_n3co, mut max_pr, mut max_pb) = (0, 0, 0, 0);
    for v in 0..2 * side {
        for w in v + 1..2 * side {
            let same_side = (v < side) == (w < side);
            let n3co = if same_side {
                // disjoint fibres on one side: sum the fibres of common neighbours
                let off = if v < side { 0 } else { side };
                let mut common = nbr_sets[v].clone();
                common.intersect_with(&nbr_sets[w]);
                let co = common.count();
                max_co = max_co.max(co);
                b3.observe(co as f64, &[v, w]);
                common.iter().map(|u| fiber[off + u]).sum::<usize>()
            } else {
                // occupied cells of the box N(r) x N(b)
                let (r, b) = if v < side { (v, w) } else { (w, v) };
                nbr_sets[r]
                    .iter()
                    .map(|row| occ_row[row].intersection_count(&nbr_sets[b]))
                    .sum()
            };
            max_n3co = max_n3co.max(n3co);
            b5.observe(n3co as f64, &[v, w]);
            if same_side {
                let pc = proj[v].intersection_count(&proj[w]);
                if v < side {
                    max_pr = max_pr.max(pc);
                    b6.observe(pc as f64, &[v, w]);
                } else {
                    max_pb = max_pb.max(pc);
                    b7.observe(pc as f64, &[v, w]);
                }
            }
        }
    }

    ConcentrationReport {
        tolerances: tol,
        fiber_sizes: fiber,
        degrees,
        n3_sizes: n3,
        max_codegree: max_co,
        max_n3_codegree: max_n3co,
        max_projected_codegree_red: max_pr,
        max_projected_codegree_blue: max_pb,
        bounds: vec![b1, b2, b3, b4, b5, b6, b7],
    }
}
