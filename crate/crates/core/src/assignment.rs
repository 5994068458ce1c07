//! Exact maximum-weight bipartite matching over a sparse list of positive
//! weights.
//!
//! Weights here are cluster overlap counts, so the instance is typically
//! huge but nearly diagonal. Three stages keep it cheap:
//!
//! 1. A pair `(r, c)` whose weight is at least the best other weight in its
//!    row plus the best other weight in its column belongs to some optimal
//!    matching (swapping it in never loses weight), so it is fixed up front.
//!    Removing fixed rows and columns only lowers the remaining maxima, so
//!    the rule is applied repeatedly until nothing changes.
//! 2. What remains splits into connected components of the bipartite
//!    support graph, solved independently.
//! 3. Each component is solved with the Hungarian method on a dense
//!    `rows x cols` matrix (`rows <= cols`).

use crate::graph::DisjointSet;

/// A positive-weight candidate pair `(row, col, weight)`.
pub type WeightedPair = (u32, u32, u64);

/// Returns the maximum total weight and the matched `(row, col)` pairs,
/// sorted by row. Pairs of zero weight are never reported.
pub fn max_weight_matching(rows: usize, cols: usize, entries: &[WeightedPair]) -> (u64, Vec<(u32, u32)>) {
    let mut row_free = vec![true; rows];
    let mut col_free = vec![true; cols];
    let mut matched: Vec<(u32, u32)> = Vec::new();
    let mut live: Vec<WeightedPair> = entries.iter().copied().filter(|e| e.2 > 0).collect();

    loop {
        let fixed = fix_dominant_pairs(rows, cols, &live, &mut row_free, &mut col_free);
        if fixed.is_empty() {
            break;
        }
        matched.extend(fixed);
        live.retain(|&(r, c, _)| row_free[r as usize] && col_free[c as usize]);
    }

    if !live.is_empty() {
        for component in split_components(rows, cols, &live) {
            matched.extend(solve_component(&component));
        }
    }

    matched.sort_unstable();
    let mut weight_of = std::collections::HashMap::with_capacity(matched.len());
    for &(r, c, w) in entries {
        weight_of.insert((r, c), w);
    }
    let total = matched.iter().map(|k| weight_of[k]).sum();
    (total, matched)
}

#[derive(Clone, Copy, Default)]
struct TopTwo {
    best: u64,
    best_at: u32,
    second: u64,
}

impl TopTwo {
    fn push(&mut self, w: u64, at: u32) {
        if w > self.best {
            self.second = self.best;
            self.best = w;
            self.best_at = at;
        } else if w > self.second {
            self.second = w;
        }
    }

    /// Largest weight in the line other than the one at `at`.
    fn other_than(&self, at: u32) -> u64 {
        if self.best_at == at {
            self.second
        } else {
            self.best
        }
    }
}

fn fix_dominant_pairs(
    rows: usize,
    cols: usize,
    live: &[WeightedPair],
    row_free: &mut [bool],
    col_free: &mut [bool],
) -> Vec<(u32, u32)> {
    let mut row_top = vec![
        TopTwo {
            best_at: u32::MAX,
            ..Default::default()
        };
        rows
    ];
    let mut col_top = vec![
        TopTwo {
            best_at: u32::MAX,
            ..Default::default()
        };
        cols
    ];
    for &(r, c, w) in live {
        row_top[r as usize].push(w, c);
        col_top[c as usize].push(w, r);
    }
    let mut fixed = Vec::new();
    for &(r, c, w) in live {
        if !row_free[r as usize] || !col_free[c as usize] {
            continue;
        }
        let rival = row_top[r as usize].other_than(c) + col_top[c as usize].other_than(r);
        if w >= rival {
            row_free[r as usize] = false;
            col_free[c as usize] = false;
            fixed.push((r, c));
        }
    }
    fixed
}

fn split_components(rows: usize, cols: usize, live: &[WeightedPair]) -> Vec<Vec<WeightedPair>> {
    let mut ds = DisjointSet::new(rows + cols);
    for &(r, c, _) in live {
        ds.union(r, rows as u32 + c);
    }
    let mut slot = vec![u32::MAX; rows + cols];
    let mut groups: Vec<Vec<WeightedPair>> = Vec::new();
    for &e in live {
        let root = ds.find(e.0) as usize;
        if slot[root] == u32::MAX {
            slot[root] = groups.len() as u32;
            groups.push(Vec::new());
        }
        groups[slot[root] as usize].push(e);
    }
    groups
}

fn solve_component(pairs: &[WeightedPair]) -> Vec<(u32, u32)> {
    if pairs.len() == 1 {
        return vec![(pairs[0].0, pairs[0].1)];
    }
    let mut row_ids: Vec<u32> = pairs.iter().map(|e| e.0).collect();
    let mut col_ids: Vec<u32> = pairs.iter().map(|e| e.1).collect();
    row_ids.sort_unstable();
    row_ids.dedup();
    col_ids.sort_unstable();
    col_ids.dedup();
    let transpose = row_ids.len() > col_ids.len();
    let (short, long) = if transpose {
        (&col_ids, &row_ids)
    } else {
        (&row_ids, &col_ids)
    };
    let mut weights = vec![0i64; short.len() * long.len()];
    for &(r, c, w) in pairs {
        let (a, b) = if transpose { (c, r) } else { (r, c) };
        let i = short.binary_search(&a).expect("row present");
        let j = long.binary_search(&b).expect("col present");
        weights[i * long.len() + j] = w as i64;
    }
    hungarian_max(short.len(), long.len(), &weights)
        .into_iter()
        .filter(|&(i, j)| weights[i * long.len() + j] > 0)
        .map(|(i, j)| {
            if transpose {
                (long[j], short[i])
            } else {
                (short[i], long[j])
            }
        })
        .collect()
}

/// Maximum-weight assignment of every row of a dense `rows x cols` matrix
/// (`rows <= cols`) to distinct columns. Returns `(row, col)` pairs.
pub fn hungarian_max(rows: usize, cols: usize, weights: &[i64]) -> Vec<(usize, usize)> {
    assert!(rows <= cols, "hungarian_max needs rows <= cols");
    assert_eq!(weights.len(), rows * cols);
    if rows == 0 {
        return Vec::new();
    }
    // Potentials-based shortest augmenting path on costs -w, 1-indexed with
    // column 0 as the virtual source.
    let cost = |i: usize, j: usize| -weights[(i - 1) * cols + (j - 1)];
    let mut u = vec![0i64; rows + 1];
    let mut v = vec![0i64; cols + 1];
    let mut owner = vec![0usize; cols + 1];
    let mut way = vec![0usize; cols + 1];
    for i in 1..=rows {
        owner[0] = i;
        let mut j0 = 0usize;
        let mut minv = vec![i64::MAX; cols + 1];
        let mut used = vec![false; cols + 1];
        loop {
            used[j0] = true;
            let i0 = owner[j0];
            let mut delta = i64::MAX;
            let mut j1 = 0usize;
            for j in 1..=cols {
                if used[j] {
                    continue;
                }
                let cur = cost(i0, j) - u[i0] - v[j];
                if cur < minv[j] {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if minv[j] < delta {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for j in 0..=cols {
                if used[j] {
                    u[owner[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
            if owner[j0] == 0 {
                break;
            }
        }
        loop {
            let j1 = way[j0];
            owner[j0] = owner[j1];
            j0 = j1;
            if j0 == 0 {
                break;
            }
        }
    }
    let mut out: Vec<(usize, usize)> = (1..=cols)
        .filter(|&j| owner[j] != 0)
        .map(|j| (owner[j] - 1, j - 1))
        .collect();
    out.sort_unstable();
    out
}
