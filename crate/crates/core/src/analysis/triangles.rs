use crate::graph::Graph;

/// Exact triangle count by bitset intersection over edges `u < v`, counting
/// only third vertices `w > v`.
pub fn count_triangles(g: &Graph) -> u64 {
    let mut total = 0u64;
    for u in 0..g.order() {
        let nu = g.neighbor_words(u);
        for v in g.neighbors(u).filter(|&v| v > u) {
            total += count_above(nu, g.neighbor_words(v), v) as u64;
        }
    }
    total
}

fn count_above(a: &[u64], b: &[u64], v: usize) -> usize {
    let start = (v + 1) / 64;
    if start >= a.len() {
        return 0;
    }
    let shift = (v + 1) % 64;
    let first = (a[start] & b[start]) & (!0u64 << shift);
    let mut c = first.count_ones() as usize;
    for i in start + 1..a.len() {
        c += (a[i] & b[i]).count_ones() as usize;
    }
    c
}

/// Cubic enumeration of all vertex triples; the independent check for small graphs.
pub fn count_triangles_exhaustive(g: &Graph) -> u64 {
    let n = g.order();
    let mut total = 0;
    for a in 0..n {
        for b in a + 1..n {
            if !g.has_edge(a, b) {
                continue;
            }
            for c in b + 1..n {
                if g.has_edge(a, c) && g.has_edge(b, c) {
                    total += 1;
                }
            }
        }
    }
    total
}

/// Some triangle `(a, b, c)` with `a < b < c`, if any.
pub fn find_triangle(g: &Graph) -> Option<(usize, usize, usize)> {
    for u in 0..g.order() {
        for v in g.neighbors(u).filter(|&v| v > u) {
            if let Some(w) = g.neighbors(u).find(|&w| w > v && g.has_edge(v, w)) {
                return Some((u, v, w));
            }
        }
    }
    None
}
