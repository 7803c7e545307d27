//! Closed and open pairs of a `k`-set, the size classes of `|X_v(I)|`, and the
//! sums that the large/medium/small/huge class lemmas bound.

use rand::seq::{index, SliceRandom};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::bits::{BitMatrix, BitSet};
use crate::construction::{BaseGraph, Instance, Placement};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::params::Params;

/// `x (x - 1) / 2` for `x >= 1`, and `0` below; agrees with `C(x, 2)` on integers.
pub fn binom2(x: f64) -> f64 {
    if x < 1.0 {
        0.0
    } else {
        x * (x - 1.0) / 2.0
    }
}

fn choose2(x: usize) -> u64 {
    let x = x as u64;
    x * x.saturating_sub(1) / 2
}

/// `min{C(k - l, 2), C(pn, 2) + C(k - l - pn, 2)}`, both branches returned.
pub fn min_term_branches(l: f64, k: f64, pn: f64) -> (f64, f64) {
    (binom2(k - l), binom2(pn) + binom2(k - l - pn))
}

/// Lower bound on the open pairs inside `π_R(I) ∪ π_B(I)` given the projection
/// sizes `lr = |π_R(I)|`, `lb = |π_B(I)|`.
pub fn f_function(lr: usize, lb: usize, params: &Params) -> f64 {
    let (k, pn) = (params.k as f64, params.pn());
    let (lr, lb) = (lr as f64, lb as f64);
    let (ar, br) = min_term_branches(lr, k, pn);
    let (ab, bb) = min_term_branches(lb, k, pn);
    // grouped so that swapping the arguments is exact in floating point
    (binom2(lr) + binom2(lb)) - (ar.min(br) + ab.min(bb))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SizeClass {
    Huge,
    Large,
    Medium,
    Small,
}

impl SizeClass {
    /// `x > t1` huge, `t2 < x <= t1` large, `t3 < x <= t2` medium, `x <= t3` small.
    pub fn of(x: usize, params: &Params) -> SizeClass {
        let x = x as f64;
        if x > params.t1 {
            SizeClass::Huge
        } else if x > params.t2 {
            SizeClass::Large
        } else if x > params.t3 {
            SizeClass::Medium
        } else {
            SizeClass::Small
        }
    }

    fn slot(self) -> usize {
        self as usize
    }
}

pub const CLASSES: [SizeClass; 4] = [
    SizeClass::Huge,
    SizeClass::Large,
    SizeClass::Medium,
    SizeClass::Small,
];

/// The projected sums over huge base vertices and their bounds.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HugeSums {
    /// `Σ_{v ∈ H ∩ V_R} C(|π_R(X_v(I))|, 2)`
    pub red_own: u64,
    /// `Σ_{v ∈ H ∩ V_B} C(|π_B(X_v(I))|, 2)`
    pub blue_own: u64,
    /// `Σ_{v ∈ H ∩ V_R} C(|π_B(X_v(I))|, 2)`
    pub red_cross: u64,
    /// `Σ_{v ∈ H ∩ V_B} C(|π_R(X_v(I))|, 2)`
    pub blue_cross: u64,
    pub proj_red: usize,
    pub proj_blue: usize,
    /// Both branches of the min-term for `red_cross` and `blue_cross`.
    pub red_cross_branches: (f64, f64),
    pub blue_cross_branches: (f64, f64),
    pub red_cross_bound: f64,
    pub blue_cross_bound: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SetClassification {
    pub k: usize,
    /// `|X_v(I)|` for red `0..N` then blue `0..N`.
    pub x_sizes: Vec<usize>,
    pub classes: Vec<SizeClass>,
    /// Members per class, indexed huge/large/medium/small.
    pub class_counts: [usize; 4],
    /// `Σ C(|X_v(I)|, 2)` per class.
    pub pair_sums: [u64; 4],
    /// `|∪ C(X_v(I), 2)|` per class.
    pub union_sizes: [u64; 4],
    /// `eps1 k^2`, the bound on the large/medium/small unions.
    pub eps1_k2: f64,
    pub huge: HugeSums,
    pub closed: u64,
    pub closed_plus: u64,
    pub open: u64,
    pub open_plus: u64,
    /// `C(k, 2)`
    pub total_pairs: u64,
}

impl SetClassification {
    pub fn identities_hold(&self) -> bool {
        self.closed + self.open == self.total_pairs
            && self.closed_plus + self.open_plus == self.total_pairs
            && self.closed_plus <= self.closed
    }

    pub fn class_of(&self, v: usize) -> SizeClass {
        self.classes[v]
    }
}

/// Read-only view of an instance with the box-membership matrices precomputed.
pub struct SetContext<'a> {
    pub red: &'a BaseGraph,
    pub blue: &'a BaseGraph,
    pub placement: &'a Placement,
    pub graph: &'a Graph,
    pub params: &'a Params,
    r_common: BitMatrix,
    r_lower: BitMatrix,
    b_common: BitMatrix,
    b_lower: BitMatrix,
}

impl<'a> SetContext<'a> {
    pub fn new(
        red: &'a BaseGraph,
        blue: &'a BaseGraph,
        placement: &'a Placement,
        graph: &'a Graph,
        params: &'a Params,
    ) -> Self {
        SetContext {
            red,
            blue,
            placement,
            graph,
            params,
            r_common: red.common_neighbor_matrix(),
            r_lower: red.common_lower_neighbor_matrix(),
            b_common: blue.common_neighbor_matrix(),
            b_lower: blue.common_lower_neighbor_matrix(),
        }
    }

    pub fn from_instance(inst: &'a Instance) -> Self {
        SetContext::new(
            &inst.red,
            &inst.blue,
            inst.placement(),
            inst.graph(),
            inst.params(),
        )
    }

    fn side(&self) -> usize {
        self.placement.side()
    }

    /// Is `{u, v}` inside some `X_w(I)` box?
    pub fn is_closed(&self, u: usize, v: usize) -> bool {
        let (a, b) = (self.placement.cell(u), self.placement.cell(v));
        self.r_common.get(a.row, b.row) || self.b_common.get(a.col, b.col)
    }

    /// Is `{u, v}` inside some `X⁺_w(I)` box?
    pub fn is_closed_plus(&self, u: usize, v: usize) -> bool {
        let (a, b) = (self.placement.cell(u), self.placement.cell(v));
        self.r_lower.get(a.row, b.row) || self.b_lower.get(a.col, b.col)
    }

    fn check_set(&self, set: &[usize]) -> Result<()> {
        if set.len() != self.params.k {
            return Err(Error::WrongSetSize {
                got: set.len(),
                expected: self.params.k,
            });
        }
        let n = self.placement.len();
        let mut seen = BitSet::new(n);
        for &v in set {
            if v >= n {
                return Err(Error::VertexOutOfRange {
                    vertex: v,
                    order: n,
                });
            }
            if seen.contains(v) {
                return Err(Error::WrongSetSize {
                    got: set.len() - 1,
                    expected: self.params.k,
                });
            }
            seen.insert(v);
        }
        Ok(())
    }

    /// Positions (into `set`) of the members of `X_v(I)`, per base vertex.
    fn x_members(&self, set: &[usize]) -> Vec<Vec<usize>> {
        let side = self.side();
        let mut out = vec![Vec::new(); 2 * side];
        for (pos, &x) in set.iter().enumerate() {
            let c = self.placement.cell(x);
            for m in self.red.neighbors(c.row) {
                out[m].push(pos);
            }
            for m in self.blue.neighbors(c.col) {
                out[side + m].push(pos);
            }
        }
        out
    }
}

fn pair_index(i: usize, j: usize, k: usize) -> usize {
    let (i, j) = if i < j { (i, j) } else { (j, i) };
    i * k - i * (i + 1) / 2 + (j - i - 1)
}

pub fn classify_sets(set: &[usize], ctx: &SetContext<'_>) -> Result<SetClassification> {
    ctx.check_set(set)?;
    let params = ctx.params;
    let side = ctx.side();
    let k = set.len();
    let total_pairs = choose2(k);

    let members = ctx.x_members(set);
    let x_sizes: Vec<usize> = members.iter().map(Vec::len).collect();
    let classes: Vec<SizeClass> = x_sizes.iter().map(|&x| SizeClass::of(x, params)).collect();

    let mut class_counts = [0usize; 4];
    let mut pair_sums = [0u64; 4];
    let mut unions: Vec<BitSet> = (0..4).map(|_| BitSet::new(total_pairs as usize)).collect();
    for (v, mem) in members.iter().enumerate() {
        let slot = classes[v].slot();
        class_counts[slot] += 1;
        pair_sums[slot] += choose2(mem.len());
        for (a, &i) in mem.iter().enumerate() {
            for &j in &mem[a + 1..] {
                unions[slot].insert(pair_index(i, j, k));
            }
        }
    }
    let union_sizes = [0, 1, 2, 3].map(|s| unions[s].count() as u64);

    let mut closed = 0u64;
    let mut closed_plus = 0u64;
    for i in 0..k {
        for j in i + 1..k {
            if ctx.is_closed(set[i], set[j]) {
                closed += 1;
            }
            if ctx.is_closed_plus(set[i], set[j]) {
                closed_plus += 1;
            }
        }
    }

    let huge = huge_sums(set, ctx, &members, &classes);
    let kf = k as f64;
    Ok(SetClassification {
        k,
        x_sizes,
        classes,
        class_counts,
        pair_sums,
        union_sizes,
        eps1_k2: params.eps1 * kf * kf,
        huge,
        closed,
        closed_plus,
        open: total_pairs - closed,
        open_plus: total_pairs - closed_plus,
        total_pairs,
    })
    .inspect(|c| debug_assert_eq!(c.x_sizes.len(), 2 * side))
}

fn huge_sums(
    set: &[usize],
    ctx: &SetContext<'_>,
    members: &[Vec<usize>],
    classes: &[SizeClass],
) -> HugeSums {
    let side = ctx.side();
    let params = ctx.params;
    let rows_of = |pos: &[usize]| -> BitSet {
        let mut s = BitSet::new(side);
        pos.iter()
            .for_each(|&i| s.insert(ctx.placement.cell(set[i]).row));
        s
    };
    let cols_of = |pos: &[usize]| -> BitSet {
        let mut s = BitSet::new(side);
        pos.iter()
            .for_each(|&i| s.insert(ctx.placement.cell(set[i]).col));
        s
    };
    let all: Vec<usize> = (0..set.len()).collect();
    let proj_red = rows_of(&all).count();
    let proj_blue = cols_of(&all).count();

    let (mut red_own, mut blue_own, mut red_cross, mut blue_cross) = (0, 0, 0, 0);
    for v in 0..2 * side {
        if classes[v] != SizeClass::Huge {
            continue;
        }
        let (r, b) = (rows_of(&members[v]).count(), cols_of(&members[v]).count());
        if v < side {
            red_own += choose2(r);
            red_cross += choose2(b);
        } else {
            blue_own += choose2(b);
            blue_cross += choose2(r);
        }
    }
    let (k, pn) = (params.k as f64, params.pn());
    let red_cross_branches = min_term_branches(proj_red as f64, k, pn);
    let blue_cross_branches = min_term_branches(proj_blue as f64, k, pn);
    let scale = 1.0 + params.eps1;
    HugeSums {
        red_own,
        blue_own,
        red_cross,
        blue_cross,
        proj_red,
        proj_blue,
        red_cross_branches,
        blue_cross_branches,
        red_cross_bound: scale * red_cross_branches.0.min(red_cross_branches.1),
        blue_cross_bound: scale * blue_cross_branches.0.min(blue_cross_branches.1),
    }
}

/// True iff every edge of `G` inside `set` is an open⁺ pair.
pub fn edges_are_open_plus(ctx: &SetContext<'_>, set: &[usize]) -> Result<bool> {
    ctx.check_set(set)?;
    for (i, &u) in set.iter().enumerate() {
        for &v in &set[i + 1..] {
            if ctx.graph.has_edge(u, v) && ctx.is_closed_plus(u, v) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Uniform random `k`-subset of the vertices.
pub fn random_k_set<R: Rng + ?Sized>(n: usize, k: usize, rng: &mut R) -> Vec<usize> {
    let mut s = index::sample(rng, n, k).into_vec();
    s.sort_unstable();
    s
}

/// Structured `k`-sets: preimages of whole rows or columns (fibre-heavy),
/// preimages of `N(v) x V_B` boxes (one `X_v` as large as possible), and
/// neighbourhoods in `G`. Each is truncated or padded at random to size `k`.
pub fn adversarial_sets<R: Rng + ?Sized>(
    ctx: &SetContext<'_>,
    count: usize,
    rng: &mut R,
) -> Vec<Vec<usize>> {
    let n = ctx.placement.len();
    let k = ctx.params.k;
    let side = ctx.side();
    let rows = ctx.placement.row_fibers();
    let cols = ctx.placement.col_fibers();

    let mut by_row: Vec<usize> = (0..side).collect();
    by_row.sort_by_key(|&r| std::cmp::Reverse(rows[r].len()));
    let mut by_col: Vec<usize> = (0..side).collect();
    by_col.sort_by_key(|&c| std::cmp::Reverse(cols[c].len()));
    let mut by_red_deg: Vec<usize> = (0..side).collect();
    by_red_deg.sort_by_key(|&r| std::cmp::Reverse(ctx.red.graph().degree(r)));
    let mut by_blue_deg: Vec<usize> = (0..side).collect();
    by_blue_deg.sort_by_key(|&c| std::cmp::Reverse(ctx.blue.graph().degree(c)));
    let mut by_deg: Vec<usize> = (0..n).collect();
    by_deg.sort_by_key(|&v| std::cmp::Reverse(ctx.graph.degree(v)));

    let mut out = Vec::with_capacity(count);
    for i in 0..count {
        let round = i / 5;
        let base: Vec<usize> = match i % 5 {
            0 => by_row
                .iter()
                .cycle()
                .skip(round)
                .take(side)
                .flat_map(|&r| rows[r].clone())
                .collect(),
            1 => by_col
                .iter()
                .cycle()
                .skip(round)
                .take(side)
                .flat_map(|&c| cols[c].clone())
                .collect(),
            2 => {
                let m = by_red_deg[round % side];
                ctx.red.neighbors(m).flat_map(|r| rows[r].clone()).collect()
            }
            3 => {
                let m = by_blue_deg[round % side];
                ctx.blue
                    .neighbors(m)
                    .flat_map(|c| cols[c].clone())
                    .collect()
            }
            _ => ctx.graph.neighbors(by_deg[round % n.max(1)]).collect(),
        };
        out.push(fit_to_size(base, n, k, rng));
    }
    out
}

fn fit_to_size<R: Rng + ?Sized>(
    mut base: Vec<usize>,
    n: usize,
    k: usize,
    rng: &mut R,
) -> Vec<usize> {
    // dedup in place, keeping the listed order: fibre-heavy sets list the heaviest rows first
    let mut present = BitSet::new(n);
    base.retain(|&v| {
        let fresh = !present.contains(v);
        present.insert(v);
        fresh
    });
    if base.len() > k {
        base.truncate(k);
    } else {
        let mut rest: Vec<usize> = (0..n).filter(|&v| !present.contains(v)).collect();
        rest.shuffle(rng);
        base.extend(rest.into_iter().take(k - base.len()));
    }
    base.sort_unstable();
    base
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construction::{build, conormal_product, induce_final_graph, Cell};
    use crate::params::explicit_simple;
    use crate::rng::{stream, Stream};

    #[test]
    fn binom2_extension() {
        assert_eq!(binom2(0.0), 0.0);
        assert_eq!(binom2(1.0), 0.0);
        assert_eq!(binom2(-3.5), 0.0);
        assert_eq!(binom2(5.0), 10.0);
        assert_eq!(binom2(2.5), 1.875);
    }

    #[test]
    fn f_at_k_k() {
        let p = crate::params::derive_default(10_000, 0.1).unwrap();
        assert_eq!(p.k, 334);
        assert!((p.pn() - 151.742_712_938_514_65).abs() < 1e-9);
        assert_eq!(f_function(334, 334, &p), 111_222.0);
    }

    #[test]
    fn f_is_exactly_symmetric() {
        let p = crate::params::derive_default(10_000, 0.1).unwrap();
        for a in (0..=p.k).step_by(7) {
            for b in (0..=p.k).step_by(11) {
                assert_eq!(f_function(a, b, &p), f_function(b, a, &p), "({a}, {b})");
            }
        }
    }

    #[test]
    fn pair_index_is_bijective() {
        let k = 7;
        let mut seen = vec![false; 21];
        for i in 0..k {
            for j in i + 1..k {
                let idx = pair_index(i, j, k);
                assert!(!seen[idx]);
                seen[idx] = true;
                assert_eq!(idx, pair_index(j, i, k));
            }
        }
        assert!(seen.into_iter().all(|s| s));
    }

    #[test]
    fn empty_base_graphs_everything_small_and_open() {
        let p = explicit_simple(16, 4, 0.0, 4).unwrap();
        let inst = build(&p, 2).unwrap();
        let ctx = SetContext::from_instance(&inst);
        let c = classify_sets(&[0, 3, 7, 9], &ctx).unwrap();
        assert!(c.x_sizes.iter().all(|&x| x == 0));
        assert_eq!(c.class_counts, [0, 0, 0, 8]);
        assert_eq!(c.closed, 0);
        assert_eq!(c.open, 6);
        assert!(edges_are_open_plus(&ctx, &[0, 3, 7, 9]).unwrap());
    }

    #[test]
    fn full_row_set_on_complete_bases() {
        // p = 1, full occupancy, I = row 0: X_{r_i}(I) = I for every i != 0
        let p = explicit_simple(16, 4, 1.0, 4).unwrap();
        let inst = build(&p, 5).unwrap();
        let ctx = SetContext::from_instance(&inst);
        let row0: Vec<usize> = (0..4)
            .map(|c| inst.placement().vertex_at(Cell::new(0, c)).unwrap())
            .collect();
        let mut set = row0.clone();
        set.sort_unstable();
        let c = classify_sets(&set, &ctx).unwrap();
        assert_eq!(c.x_sizes[0], 0);
        for r in 1..4 {
            assert_eq!(c.x_sizes[r], 4);
        }
        // blue b_j: each column neighbour of b_j holds one cell of the row
        for b in 0..4 {
            assert_eq!(c.x_sizes[4 + b], 3);
        }
        assert_eq!(c.closed, 6);
        assert!(c.identities_hold());
    }

    #[test]
    fn wrong_size_rejected() {
        let p = explicit_simple(16, 4, 0.5, 4).unwrap();
        let inst = build(&p, 2).unwrap();
        let ctx = SetContext::from_instance(&inst);
        assert!(matches!(
            classify_sets(&[0, 1, 2], &ctx),
            Err(Error::WrongSetSize { .. })
        ));
        assert!(matches!(
            classify_sets(&[0, 1, 1, 2], &ctx),
            Err(Error::WrongSetSize { .. })
        ));
        assert!(edges_are_open_plus(&ctx, &[0, 1]).is_err());
    }

    #[test]
    fn undeleted_product_fails_open_plus() {
        // G built from G1 without the deletion rule: a red triangle r0 r1 r2 leaves
        // the red edge between rows 1 and 2 inside X⁺_{r0}
        let p = explicit_simple(9, 3, 1.0, 3).unwrap();
        let inst = build(&p, 0).unwrap();
        let g1 = conormal_product(&inst.red, &inst.blue).unwrap();
        let raw = induce_final_graph(&g1, inst.placement()).unwrap();
        let ctx = SetContext::new(&inst.red, &inst.blue, inst.placement(), &raw.graph, &p);
        let pl = inst.placement();
        let set: Vec<usize> = [Cell::new(1, 0), Cell::new(2, 1), Cell::new(0, 2)]
            .iter()
            .map(|&c| pl.vertex_at(c).unwrap())
            .collect();
        assert!(!edges_are_open_plus(&ctx, &set).unwrap());
        let good = SetContext::from_instance(&inst);
        assert!(edges_are_open_plus(&good, &set).unwrap());
    }

    #[test]
    fn adversarial_sets_have_size_k() {
        let p = explicit_simple(100, 12, 0.3, 15).unwrap();
        let inst = build(&p, 6).unwrap();
        let ctx = SetContext::from_instance(&inst);
        let sets = adversarial_sets(&ctx, 10, &mut stream(1, Stream::Sets));
        assert_eq!(sets.len(), 10);
        for s in sets {
            assert_eq!(s.len(), 15);
            assert!(s.windows(2).all(|w| w[0] < w[1]));
        }
    }
}
