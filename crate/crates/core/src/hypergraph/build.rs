use std::collections::BTreeMap;

use rand::Rng;

use super::reduce::{s4_reduction_with_order, S4Reduction};
use super::triples::{normalize, Triple, TripleSystem};
use crate::color::Colors;
use crate::construction::{sample_injection_with, Cell, Placement};
use crate::error::{Error, Result};
use crate::params::Params;
use crate::rng::{bernoulli_hits, stream, Stream};

/// Index of triple `(a, b, c)`, `a < b < c`, in lexicographic order over `0..n`.
pub fn triple_from_index(n: usize, mut idx: u64) -> Triple {
    let mut a = 0usize;
    loop {
        let rest = (n - a - 1) as u64;
        let block = rest * rest.saturating_sub(1) / 2;
        if idx < block {
            let (b, c) = crate::rng::pair_from_index(n - a - 1, idx);
            return [a, a + 1 + b, a + 1 + c];
        }
        idx -= block;
        a += 1;
    }
}

/// Binomial random 3-graph `H(n, p)`, every triple flagged `colors`.
pub fn random_3graph<R: Rng + ?Sized>(
    n: usize,
    p: f64,
    colors: Colors,
    rng: &mut R,
) -> TripleSystem {
    let n64 = n as u64;
    let total = if n < 3 {
        0
    } else {
        n64 * (n64 - 1) * (n64 - 2) / 6
    };
    let mut edges = BTreeMap::new();
    bernoulli_hits(total, p, rng, |idx| {
        edges.insert(triple_from_index(n, idx), colors);
    });
    TripleSystem::from_map(n, edges)
}

/// Independent red and blue `H(N, p)` on their own streams of `seed`.
pub fn sample_base_3graphs(params: &Params, seed: u64) -> Result<(TripleSystem, TripleSystem)> {
    let side = params.side;
    if side < 3 {
        return Err(Error::HyperOrder(side));
    }
    let hr = random_3graph(
        side,
        params.p,
        Colors::RED,
        &mut stream(seed, Stream::HyperRed),
    );
    let hb = random_3graph(
        side,
        params.p,
        Colors::BLUE,
        &mut stream(seed, Stream::HyperBlue),
    );
    Ok((hr, hb))
}

/// The product on the `N^2` cells (row-major indices). A cell triple is an edge
/// only when its three rows are distinct and its three columns are distinct;
/// it is red iff its rows form a red edge and blue iff its columns form a blue edge.
pub fn hyper_product(hr: &TripleSystem, hb: &TripleSystem) -> Result<TripleSystem> {
    if hr.order() != hb.order() {
        return Err(Error::OrderMismatch {
            red: hr.order(),
            blue: hb.order(),
        });
    }
    let side = hr.order();
    let mut edges: BTreeMap<Triple, Colors> = BTreeMap::new();
    let mut add = |cells: [Cell; 3], c: Colors| {
        let t = normalize(cells.map(|x| x.index(side))).expect("distinct cells");
        *edges.entry(t).or_default() |= c;
    };
    let distinct_triples = |f: &mut dyn FnMut([usize; 3])| {
        for x in 0..side {
            for y in (0..side).filter(|&y| y != x) {
                for z in (0..side).filter(|&z| z != x && z != y) {
                    f([x, y, z]);
                }
            }
        }
    };
    for ([r0, r1, r2], f) in hr.iter() {
        if f.red() {
            distinct_triples(&mut |[c0, c1, c2]| {
                add(
                    [Cell::new(r0, c0), Cell::new(r1, c1), Cell::new(r2, c2)],
                    Colors::RED,
                )
            });
        }
    }
    for ([c0, c1, c2], f) in hb.iter() {
        if f.blue() {
            distinct_triples(&mut |[r0, r1, r2]| {
                add(
                    [Cell::new(r0, c0), Cell::new(r1, c1), Cell::new(r2, c2)],
                    Colors::BLUE,
                )
            });
        }
    }
    Ok(TripleSystem::from_map(side * side, edges))
}

/// The `n`-vertex system induced on a placement.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PlacedTriples {
    pub placement: Placement,
    pub system: TripleSystem,
}

impl PlacedTriples {
    /// Row-major cell rank of every vertex; the order used by the reduction.
    pub fn cell_ranks(&self) -> Vec<usize> {
        let side = self.placement.side();
        self.placement
            .cells()
            .iter()
            .map(|c| c.index(side))
            .collect()
    }
}

pub fn induce_hyper(h1: &TripleSystem, placement: &Placement) -> Result<PlacedTriples> {
    let side = placement.side();
    if h1.order() != side * side {
        return Err(Error::OrderMismatch {
            red: h1.order(),
            blue: side * side,
        });
    }
    let mut edges = BTreeMap::new();
    for (t, f) in h1.iter() {
        let v = t.map(|i| placement.vertex_at(Cell::from_index(i, side)));
        if let [Some(a), Some(b), Some(c)] = v {
            edges.insert(normalize([a, b, c]).expect("injective placement"), f);
        }
    }
    Ok(PlacedTriples {
        placement: placement.clone(),
        system: TripleSystem::from_map(placement.len(), edges),
    })
}

/// Uniform injection of `n` vertices into the cells of `h1` and the induced system.
pub fn inject_hyper(h1: &TripleSystem, params: &Params, seed: u64) -> Result<PlacedTriples> {
    let placement = sample_injection_with(
        params.n,
        params.side,
        &mut stream(seed, Stream::HyperPlacement),
    )?;
    induce_hyper(h1, &placement)
}

/// Everything [`build_hyper`] produces.
#[derive(Clone, Debug)]
pub struct HyperInstance {
    pub params: Params,
    pub seed: u64,
    pub red: TripleSystem,
    pub blue: TripleSystem,
    /// `H_2`: the product induced on the placed cells.
    pub placed: PlacedTriples,
    /// `H`: the reduction of `H_2` in cell order.
    pub reduced: S4Reduction,
}

/// Samples the base 3-graphs and the placement from `seed`, induces the
/// product on the placed cells and reduces it.
///
/// The product is never materialised on all `N^2` cells: red triples are read
/// off the row fibres of each red base triple and blue ones off the column
/// fibres, which gives the same system as [`hyper_product`] followed by
/// [`induce_hyper`].
pub fn build_hyper(params: &Params, seed: u64) -> Result<HyperInstance> {
    let (red, blue) = sample_base_3graphs(params, seed)?;
    let placement = sample_injection_with(
        params.n,
        params.side,
        &mut stream(seed, Stream::HyperPlacement),
    )?;
    let placed = induce_product_on(&red, &blue, &placement)?;
    let reduced = s4_reduction_with_order(&placed.system, Some(&placed.cell_ranks()));
    Ok(HyperInstance {
        params: params.clone(),
        seed,
        red,
        blue,
        placed,
        reduced,
    })
}

/// `induce_hyper(hyper_product(hr, hb), placement)` computed through the fibres.
pub fn induce_product_on(
    hr: &TripleSystem,
    hb: &TripleSystem,
    placement: &Placement,
) -> Result<PlacedTriples> {
    let side = placement.side();
    if hr.order() != side || hb.order() != side {
        return Err(Error::OrderMismatch {
            red: hr.order(),
            blue: hb.order(),
        });
    }
    let rows = placement.row_fibers();
    let cols = placement.col_fibers();
    let mut edges: BTreeMap<Triple, Colors> = BTreeMap::new();
    let mut scan = |fibers: &[Vec<usize>], t: Triple, other: fn(Cell) -> usize, c: Colors| {
        for &x in &fibers[t[0]] {
            let ox = other(placement.cell(x));
            for &y in &fibers[t[1]] {
                let oy = other(placement.cell(y));
                if oy == ox {
                    continue;
                }
                for &z in &fibers[t[2]] {
                    let oz = other(placement.cell(z));
                    if oz != ox && oz != oy {
                        *edges
                            .entry(normalize([x, y, z]).expect("distinct vertices"))
                            .or_default() |= c;
                    }
                }
            }
        }
    };
    for (t, f) in hr.iter() {
        if f.red() {
            scan(&rows, t, |c| c.col, Colors::RED);
        }
    }
    for (t, f) in hb.iter() {
        if f.blue() {
            scan(&cols, t, |c| c.row, Colors::BLUE);
        }
    }
    Ok(PlacedTriples {
        placement: placement.clone(),
        system: TripleSystem::from_map(placement.len(), edges),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::explicit_simple;

    #[test]
    fn triple_unranking_is_lexicographic() {
        let n = 7;
        let mut idx = 0;
        for a in 0..n {
            for b in a + 1..n {
                for c in b + 1..n {
                    assert_eq!(triple_from_index(n, idx), [a, b, c]);
                    idx += 1;
                }
            }
        }
    }

    #[test]
    fn saturated_and_empty_bases() {
        let p = explicit_simple(16, 5, 1.0, 4).unwrap();
        let (hr, hb) = sample_base_3graphs(&p, 1).unwrap();
        assert_eq!(hr.edge_count(), 10);
        assert_eq!(hb.edge_count(), 10);
        assert!(hr.iter().all(|(_, f)| f == Colors::RED));
        let p0 = explicit_simple(16, 5, 0.0, 4).unwrap();
        let (hr, hb) = sample_base_3graphs(&p0, 1).unwrap();
        assert!(hr.is_empty() && hb.is_empty());
        let small = explicit_simple(4, 2, 0.5, 2).unwrap();
        assert!(matches!(
            sample_base_3graphs(&small, 0),
            Err(Error::HyperOrder(2))
        ));
    }

    #[test]
    fn single_red_edge_product() {
        let mut hr = TripleSystem::new(3);
        hr.insert([0, 1, 2], Colors::RED).unwrap();
        let hb = TripleSystem::new(3);
        let h1 = hyper_product(&hr, &hb).unwrap();
        // brute force over all cell triples with distinct rows and columns
        let mut expected = 0;
        for t in
            (0..9).flat_map(|a| (a + 1..9).flat_map(move |b| (b + 1..9).map(move |c| [a, b, c])))
        {
            let cells = t.map(|i| Cell::from_index(i, 3));
            let rows_ok = normalize(cells.map(|c| c.row)).is_some();
            let cols_ok = normalize(cells.map(|c| c.col)).is_some();
            let is_edge = rows_ok && cols_ok;
            assert_eq!(h1.contains(t), is_edge, "{t:?}");
            expected += is_edge as usize;
        }
        assert_eq!(expected, 6);
        assert_eq!(h1.edge_count(), 6);
        assert!(h1.iter().all(|(_, f)| f == Colors::RED));
        assert!(hyper_product(&TripleSystem::new(3), &TripleSystem::new(3))
            .unwrap()
            .is_empty());
    }

    #[test]
    fn repeated_column_never_an_edge() {
        let hr = TripleSystem::complete(4, Colors::RED);
        let hb = TripleSystem::complete(4, Colors::BLUE);
        let h1 = hyper_product(&hr, &hb).unwrap();
        for (t, f) in h1.iter() {
            let cells = t.map(|i| Cell::from_index(i, 4));
            assert!(normalize(cells.map(|c| c.col)).is_some());
            assert!(normalize(cells.map(|c| c.row)).is_some());
            assert_eq!(f, Colors::BOTH);
        }
        // C(4,3) row sets x 4! column assignments
        assert_eq!(h1.edge_count(), 4 * 24);
    }

    #[test]
    fn full_occupancy_is_isomorphic() {
        let p = explicit_simple(16, 4, 0.6, 4).unwrap();
        let (hr, hb) = sample_base_3graphs(&p, 9).unwrap();
        let h1 = hyper_product(&hr, &hb).unwrap();
        let placed = inject_hyper(&h1, &p, 9).unwrap();
        assert_eq!(placed.system.edge_count(), h1.edge_count());
        let ranks = placed.cell_ranks();
        for (t, f) in placed.system.iter() {
            assert_eq!(h1.colors(t.map(|v| ranks[v])), f);
        }
        assert_eq!(inject_hyper(&h1, &p, 9).unwrap(), placed);
    }

    #[test]
    fn fibre_induction_matches_product() {
        for seed in 0..6 {
            let p = explicit_simple(20, 6, 0.4, 5).unwrap();
            let (hr, hb) = sample_base_3graphs(&p, seed).unwrap();
            let via_product = inject_hyper(&hyper_product(&hr, &hb).unwrap(), &p, seed).unwrap();
            let direct = induce_product_on(&hr, &hb, &via_product.placement).unwrap();
            assert_eq!(direct, via_product);
            let inst = build_hyper(&p, seed).unwrap();
            assert_eq!(inst.placed, via_product);
        }
    }

    #[test]
    fn single_vertex_has_no_triples() {
        let p = explicit_simple(1, 3, 1.0, 1).unwrap();
        let (hr, hb) = sample_base_3graphs(&p, 0).unwrap();
        let placed = inject_hyper(&hyper_product(&hr, &hb).unwrap(), &p, 0).unwrap();
        assert_eq!(placed.placement.len(), 1);
        assert!(placed.system.is_empty());
    }
}
