use rand::seq::{index, SliceRandom};
use rand::Rng;

use crate::error::{Error, Result};
use crate::params::Params;
use crate::rng::{stream, Stream};

use super::product::Cell;

/// Injection `{0..n} -> N x N`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Placement {
    side: usize,
    cells: Vec<Cell>,
    /// `vertex_at[cell index]`, `usize::MAX` when unoccupied.
    vertex_at: Vec<usize>,
}

impl Placement {
    pub fn new(side: usize, cells: Vec<Cell>) -> Result<Self> {
        let mut vertex_at = vec![usize::MAX; side * side];
        for (v, c) in cells.iter().enumerate() {
            if c.row >= side || c.col >= side {
                return Err(Error::CellOutOfRange {
                    row: c.row,
                    col: c.col,
                    side,
                });
            }
            let slot = &mut vertex_at[c.index(side)];
            if *slot != usize::MAX {
                return Err(Error::NotInjective {
                    row: c.row,
                    col: c.col,
                });
            }
            *slot = v;
        }
        Ok(Placement {
            side,
            cells,
            vertex_at,
        })
    }

    /// Every cell in row-major order.
    pub fn identity(side: usize) -> Self {
        let cells = (0..side * side)
            .map(|i| Cell::from_index(i, side))
            .collect();
        Placement::new(side, cells).expect("identity placement is injective")
    }

    pub fn side(&self) -> usize {
        self.side
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn cell(&self, v: usize) -> Cell {
        self.cells[v]
    }

    pub fn cells(&self) -> &[Cell] {
        &self.cells
    }

    pub fn vertex_at(&self, c: Cell) -> Option<usize> {
        let v = self.vertex_at[c.index(self.side)];
        (v != usize::MAX).then_some(v)
    }

    /// Placed vertices in each row (the red fibres), ascending.
    pub fn row_fibers(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.side];
        for (v, c) in self.cells.iter().enumerate() {
            out[c.row].push(v);
        }
        out
    }

    /// Placed vertices in each column (the blue fibres), ascending.
    pub fn col_fibers(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.side];
        for (v, c) in self.cells.iter().enumerate() {
            out[c.col].push(v);
        }
        out
    }
}

/// Uniform injection on its own stream of `seed`.
pub fn sample_injection(params: &Params, seed: u64) -> Result<Placement> {
    sample_injection_with(params.n, params.side, &mut stream(seed, Stream::Placement))
}

/// Uniform `n`-subset of the cells, uniformly assigned to the vertices.
pub fn sample_injection_with<R: Rng + ?Sized>(
    n: usize,
    side: usize,
    rng: &mut R,
) -> Result<Placement> {
    let cells = side * side;
    if cells < n {
        return Err(Error::GridTooSmall { cells, n });
    }
    let mut chosen = index::sample(rng, cells, n).into_vec();
    chosen.shuffle(rng);
    Placement::new(
        side,
        chosen
            .into_iter()
            .map(|i| Cell::from_index(i, side))
            .collect(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::explicit_simple;

    #[test]
    fn full_occupancy_is_a_permutation() {
        let p = explicit_simple(16, 4, 0.5, 4).unwrap();
        let pl = sample_injection(&p, 3).unwrap();
        let mut idx: Vec<usize> = pl.cells().iter().map(|c| c.index(4)).collect();
        idx.sort_unstable();
        assert_eq!(idx, (0..16).collect::<Vec<_>>());
    }

    #[test]
    fn repeatable() {
        let p = explicit_simple(30, 7, 0.5, 5).unwrap();
        assert_eq!(
            sample_injection(&p, 9).unwrap(),
            sample_injection(&p, 9).unwrap()
        );
        assert_ne!(
            sample_injection(&p, 9).unwrap(),
            sample_injection(&p, 10).unwrap()
        );
    }

    #[test]
    fn single_vertex_is_uniform() {
        // each of 9 cells should be hit with frequency 1/9 +- 3 sigma over 10^4 draws
        let trials = 10_000u64;
        let mut hits = [0usize; 9];
        for s in 0..trials {
            let pl = sample_injection_with(1, 3, &mut stream(s, Stream::Placement)).unwrap();
            hits[pl.cell(0).index(3)] += 1;
        }
        let q = 1.0 / 9.0;
        let sigma = (trials as f64 * q * (1.0 - q)).sqrt();
        for h in hits {
            assert!(
                (h as f64 - trials as f64 * q).abs() < 3.0 * sigma,
                "{hits:?}"
            );
        }
    }

    #[test]
    fn rejects_bad_placements() {
        assert!(matches!(
            sample_injection_with(10, 3, &mut stream(0, Stream::Placement)),
            Err(Error::GridTooSmall { .. })
        ));
        assert!(matches!(
            Placement::new(2, vec![Cell::new(0, 1), Cell::new(0, 1)]),
            Err(Error::NotInjective { row: 0, col: 1 })
        ));
        assert!(matches!(
            Placement::new(2, vec![Cell::new(2, 0)]),
            Err(Error::CellOutOfRange { .. })
        ));
    }
}
