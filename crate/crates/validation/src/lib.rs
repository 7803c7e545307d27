//! Straight-from-the-definition reference implementations, written without
//! the bitset shortcuts of `r3k-core`, for cross-checking it.

use std::collections::{BTreeMap, HashSet};

use r3k_core::color::Colors;
use r3k_core::graph::Graph;

fn neighbors(g: &Graph, v: usize) -> Vec<usize> {
    (0..g.order()).filter(|&u| g.has_edge(u, v)).collect()
}

/// Neighbours with a larger label.
fn upper_neighbors(g: &Graph, v: usize) -> Vec<usize> {
    (v + 1..g.order()).filter(|&u| g.has_edge(u, v)).collect()
}

fn add_pairs(out: &mut HashSet<(usize, usize)>, members: &[usize]) {
    for (i, &a) in members.iter().enumerate() {
        for &b in &members[i + 1..] {
            out.insert((a.min(b), a.max(b)));
        }
    }
}

/// The deleted product: every cell pair `(a, b)`, `a < b` in row-major
/// labels, with the flags it keeps.
///
/// Builds the co-normal product pair by pair, collects the four box unions
/// `∪ C(X_{r_i}, 2)`, `∪ C(X⁺_{r_i}, 2)`, `∪ C(X_{b_i}, 2)`, `∪ C(X⁺_{b_i}, 2)`
/// as explicit pair sets, and strips flags accordingly.
pub fn deleted_product(red: &Graph, blue: &Graph) -> BTreeMap<(usize, usize), Colors> {
    let side = red.order();
    assert_eq!(side, blue.order());
    let cells = side * side;
    let cells_where = |pred: &dyn Fn(usize, usize) -> bool| -> Vec<usize> {
        (0..cells).filter(|&c| pred(c / side, c % side)).collect()
    };

    let mut red_gone = HashSet::new();
    let mut blue_gone = HashSet::new();
    for i in 0..side {
        let (nr, nr_up) = (neighbors(red, i), upper_neighbors(red, i));
        let (nb, nb_up) = (neighbors(blue, i), upper_neighbors(blue, i));
        add_pairs(&mut blue_gone, &cells_where(&|r, _| nr.contains(&r)));
        add_pairs(&mut red_gone, &cells_where(&|r, _| nr_up.contains(&r)));
        add_pairs(&mut red_gone, &cells_where(&|_, c| nb.contains(&c)));
        add_pairs(&mut blue_gone, &cells_where(&|_, c| nb_up.contains(&c)));
    }

    let mut out = BTreeMap::new();
    for a in 0..cells {
        for b in a + 1..cells {
            let (ra, ca, rb, cb) = (a / side, a % side, b / side, b % side);
            let is_red = red.has_edge(ra, rb) && !red_gone.contains(&(a, b));
            let is_blue = blue.has_edge(ca, cb) && !blue_gone.contains(&(a, b));
            if is_red || is_blue {
                out.insert((a, b), Colors::new(is_red, is_blue));
            }
        }
    }
    out
}

/// `(|C(I)|, |C⁺(I)|)` for a set of placed vertices, given the cell
/// `(row, col)` of each member, by building every box `X_v(I)` explicitly.
pub fn closed_pair_counts(cells: &[(usize, usize)], red: &Graph, blue: &Graph) -> (usize, usize) {
    let mut closed = HashSet::new();
    let mut closed_plus = HashSet::new();
    let members = |pred: &dyn Fn(usize, usize) -> bool| -> Vec<usize> {
        (0..cells.len())
            .filter(|&i| pred(cells[i].0, cells[i].1))
            .collect()
    };
    for m in 0..red.order() {
        let (nr, nr_up) = (neighbors(red, m), upper_neighbors(red, m));
        add_pairs(&mut closed, &members(&|r, _| nr.contains(&r)));
        add_pairs(&mut closed_plus, &members(&|r, _| nr_up.contains(&r)));
    }
    for m in 0..blue.order() {
        let (nb, nb_up) = (neighbors(blue, m), upper_neighbors(blue, m));
        add_pairs(&mut closed, &members(&|_, c| nb.contains(&c)));
        add_pairs(&mut closed_plus, &members(&|_, c| nb_up.contains(&c)));
    }
    (closed.len(), closed_plus.len())
}

/// Largest independent set by enumerating all `2^n` vertex subsets.
pub fn alpha_by_subsets(g: &Graph) -> usize {
    let n = g.order();
    assert!(n <= 24, "subset enumeration is for small graphs");
    let adj: Vec<u32> = (0..n)
        .map(|v| {
            (0..n)
                .filter(|&u| g.has_edge(u, v))
                .fold(0, |m, u| m | 1 << u)
        })
        .collect();
    (0u32..1 << n)
        .filter(|&s| (0..n).all(|v| s >> v & 1 == 0 || adj[v] & s == 0))
        .map(|s| s.count_ones() as usize)
        .max()
        .unwrap_or(0)
}

/// `f(lR, lB)` written out case by case.
pub fn f_reference(lr: usize, lb: usize, k: usize, pn: f64) -> f64 {
    fn pairs(x: f64) -> f64 {
        if x >= 1.0 {
            (x * x - x) * 0.5
        } else {
            0.0
        }
    }
    let min_term = |l: usize| {
        let rest = k as f64 - l as f64;
        let whole = pairs(rest);
        let split = pairs(pn) + pairs(rest - pn);
        if whole <= split {
            whole
        } else {
            split
        }
    };
    pairs(lr as f64) + pairs(lb as f64) - min_term(lr) - min_term(lb)
}

/// Does some 4-set span at least three triples? Checked over all 4-sets.
pub fn has_three_edge_four_set(order: usize, triples: &[[usize; 3]]) -> bool {
    let present: HashSet<[usize; 3]> = triples.iter().copied().collect();
    for a in 0..order {
        for b in a + 1..order {
            for c in b + 1..order {
                for d in c + 1..order {
                    let spanned = [[a, b, c], [a, b, d], [a, c, d], [b, c, d]]
                        .iter()
                        .filter(|t| present.contains(*t))
                        .count();
                    if spanned >= 3 {
                        return true;
                    }
                }
            }
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn triangle_red_base_deletes_upper_pairs() {
        // red triangle 0-1-2, blue empty: rows 1 and 2 share the lower neighbour 0
        let red = Graph::complete(3);
        let blue = Graph::empty(3);
        let g = deleted_product(&red, &blue);
        assert!(g.keys().all(|&(a, b)| {
            let (ra, rb) = (a / 3, b / 3);
            (ra.min(rb), ra.max(rb)) != (1, 2)
        }));
        assert_eq!(g.len(), 2 * 9);
    }

    #[test]
    fn alpha_of_cycles() {
        assert_eq!(alpha_by_subsets(&Graph::cycle(5)), 2);
        assert_eq!(alpha_by_subsets(&Graph::cycle(8)), 4);
        assert_eq!(alpha_by_subsets(&Graph::empty(6)), 6);
    }

    #[test]
    fn three_edge_four_set() {
        assert!(!has_three_edge_four_set(4, &[[0, 1, 2], [0, 1, 3]]));
        assert!(has_three_edge_four_set(
            4,
            &[[0, 1, 2], [0, 1, 3], [1, 2, 3]]
        ));
    }
}
