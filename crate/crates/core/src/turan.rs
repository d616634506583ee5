//! Exact small-instance Turán numbers `ex(n, F)` and bipartite Zarankiewicz
//! numbers `z(m, n, F)` with witness graphs, by pruned exhaustive search.
//!
//! The search branches over edge slots in fixed lexicographic order, "add"
//! before "skip". Forbidden-pattern checks are incremental: a pattern
//! created by adding edge `uv` must contain `uv`, and pattern presence is
//! monotone under edge addition, so a slot that has become individually
//! infeasible stays infeasible along the branch. The upper bound at a node
//! is the current edge count plus the number of still-feasible undecided
//! slots. Symmetry pruning is limited to forcing vertex 0's degree to be
//! maximal (within its own part, for the bipartite search).
//!
//! The search is sequential and deterministic: for a fixed instance the
//! value, the witness, and the node count never depend on thread
//! configuration. Ties among maximum witnesses resolve to the first one in
//! visit order, which is the lexicographically least edge set among the
//! canonical (vertex-0-dominant) maxima.

use crate::detect::{self, ForbiddenFamily};
use crate::graph::Graph;
use crate::{Error, Result};

/// Default node budget for the exhaustive searches.
pub const DEFAULT_BUDGET: u64 = 100_000_000;

/// Result of an extremal search. `exhaustive = false` means the node budget
/// ran out and `value` is only the best found so far.
#[derive(Clone, Debug)]
pub struct SearchResult {
    pub value: usize,
    pub witness: Graph,
    pub nodes_explored: u64,
    pub exhaustive: bool,
}

/// Maximum edges in an `F`-free graph on `n` vertices.
pub fn ex_exact(n: usize, fam: &ForbiddenFamily, budget: u64) -> Result<SearchResult> {
    if n < 1 {
        return Err(Error::Domain("ex(n, F) needs n >= 1".into()));
    }
    let mut slots = Vec::new();
    for u in 0..n {
        for v in (u + 1)..n {
            slots.push((u, v));
        }
    }
    let sym: Vec<usize> = (0..n).collect();
    run_search(n, slots, sym, None, fam, budget)
}

/// Maximum edges in an `m` by `n` bipartite `F`-free graph. The witness is
/// on vertices `0..m+n` with the left part `0..m`.
pub fn z_exact(m: usize, n: usize, fam: &ForbiddenFamily, budget: u64) -> Result<SearchResult> {
    if m < 1 || n < 1 {
        return Err(Error::Domain("z(m, n, F) needs m, n >= 1".into()));
    }
    let mut slots = Vec::new();
    for u in 0..m {
        for v in m..(m + n) {
            slots.push((u, v));
        }
    }
    let sym: Vec<usize> = (0..m).collect();
    run_search(m + n, slots, sym, Some(m), fam, budget)
}

/// A sound codegree-capacity budget derived from the family: forbidding
/// `K_{2,t}` (or `C_4`, which is `K_{2,2}`) caps every pair of vertices at
/// `tau = t - 1` common neighbors, hence `sum_w C(d(w), 2) <= tau * C(c, 2)`
/// where the pairs range over a class of size `c`. The searches use it as an
/// admissible upper bound on how many edges a branch can still add; it never
/// prunes a branch that could strictly beat the incumbent.
#[derive(Clone, Copy, Debug)]
enum CodegreeCap {
    /// All pairs capped (general search).
    Ex { tau: usize },
    /// Pairs within each side capped (bipartite search; `m` = left size).
    Bipartite { tau: usize, m: usize },
}

fn codegree_cap(fam: &ForbiddenFamily) -> Option<usize> {
    fam.patterns()
        .iter()
        .filter_map(|p| match *p {
            crate::detect::Pattern::CompleteBipartite(2, t) => Some(t - 1),
            crate::detect::Pattern::Cycle(4) => Some(1),
            _ => None,
        })
        .min()
}

struct Searcher<'a> {
    g: Graph,
    slots: Vec<(usize, usize)>,
    /// mask over slots incident to vertex 0
    at_zero: u128,
    /// per-vertex masks over incident slots
    at_vertex: Vec<u128>,
    /// vertices whose degree vertex 0 must dominate
    sym_class: Vec<usize>,
    cap: Option<CodegreeCap>,
    fam: &'a ForbiddenFamily,
    deg: Vec<usize>,
    added: Vec<(usize, usize)>,
    best: usize,
    best_edges: Vec<(usize, usize)>,
    nodes: u64,
    budget: u64,
    exhausted: bool,
}

fn run_search(
    nv: usize,
    slots: Vec<(usize, usize)>,
    sym_class: Vec<usize>,
    bipartite_m: Option<usize>,
    fam: &ForbiddenFamily,
    budget: u64,
) -> Result<SearchResult> {
    for p in fam.patterns() {
        p.validate()?;
    }
    if slots.len() > 128 {
        return Err(Error::Domain(format!(
            "instance has {} edge slots; exhaustive mode supports at most 128",
            slots.len()
        )));
    }
    let mut at_zero = 0u128;
    let mut at_vertex = vec![0u128; nv];
    for (i, &(u, v)) in slots.iter().enumerate() {
        if u == 0 || v == 0 {
            at_zero |= 1 << i;
        }
        at_vertex[u] |= 1 << i;
        at_vertex[v] |= 1 << i;
    }
    let cap = codegree_cap(fam).map(|tau| match bipartite_m {
        Some(m) => CodegreeCap::Bipartite { tau, m },
        None => CodegreeCap::Ex { tau },
    });
    let mut s = Searcher {
        g: Graph::empty(nv),
        slots,
        at_zero,
        at_vertex,
        sym_class,
        cap,
        fam,
        deg: vec![0; nv],
        added: Vec::new(),
        best: 0,
        best_edges: Vec::new(),
        nodes: 0,
        budget,
        exhausted: false,
    };
    // a single edge can itself be forbidden (K_{1,1}); filter the root mask
    let mut feasible = 0u128;
    for i in 0..s.slots.len() {
        if s.addable(i) {
            feasible |= 1 << i;
        }
    }
    s.dfs(feasible);
    let witness = Graph::from_edge_list(nv, &s.best_edges)?;
    let check = detect::is_family_free(&witness, fam)?;
    if !check.free || witness.edge_count() != s.best {
        return Err(Error::Internal(
            "search witness failed family-freeness re-verification".into(),
        ));
    }
    Ok(SearchResult {
        value: s.best,
        witness,
        nodes_explored: s.nodes,
        exhaustive: !s.exhausted,
    })
}

impl Searcher<'_> {
    /// Whether slot `i` can be added to the current graph without creating
    /// a forbidden pattern.
    fn addable(&mut self, i: usize) -> bool {
        let (u, v) = self.slots[i];
        self.g.set_edge_unchecked(u, v);
        let hit = detect::family_through_edge(&self.g, self.fam, u, v);
        self.g.clear_edge_unchecked(u, v);
        !hit
    }

    fn symmetry_violated(&self, feasible: u128) -> bool {
        let possible0 = self.deg[0] + (feasible & self.at_zero).count_ones() as usize;
        self.sym_class.iter().any(|&v| self.deg[v] > possible0)
    }

    /// Largest `r` whose `r` cheapest cost entries fit in `budget`. `costs`
    /// is a bucket count by cost value.
    fn greedy_fit(costs: &[usize], budget: usize) -> usize {
        let mut left = budget;
        let mut r = 0usize;
        for (cost, &cnt) in costs.iter().enumerate() {
            if cnt == 0 {
                continue;
            }
            if cost == 0 {
                r += cnt;
                continue;
            }
            let take = cnt.min(left / cost);
            r += take;
            left -= take * cost;
            if take < cnt {
                break;
            }
        }
        r
    }

    /// Admissible cap on how many feasible slots this branch can still add,
    /// from the codegree budget. Degrees only grow, so costing every future
    /// edge at today's degrees can only overestimate.
    fn codegree_room(&self, feasible: u128) -> usize {
        let Some(cap) = self.cap else {
            return usize::MAX;
        };
        match cap {
            CodegreeCap::Ex { tau } => {
                let n = self.g.n();
                let spent: usize = self.deg.iter().map(|&d| d * d.saturating_sub(1) / 2).sum();
                let total = tau * n * (n - 1) / 2;
                if spent > total {
                    return 0;
                }
                let mut buckets = vec![0usize; 2 * n + 1];
                let mut scan = feasible;
                while scan != 0 {
                    let i = scan.trailing_zeros() as usize;
                    scan &= scan - 1;
                    let (u, v) = self.slots[i];
                    buckets[self.deg[u] + self.deg[v]] += 1;
                }
                Self::greedy_fit(&buckets, total - spent)
            }
            CodegreeCap::Bipartite { tau, m } => {
                // pairs within U are capped, paid for by right-vertex
                // degrees, and symmetrically
                let n = self.g.n() - m;
                let mut room = usize::MAX;
                for (pairs_side_size, first, len) in [(m, m, n), (n, 0, m)] {
                    let total = tau * pairs_side_size * pairs_side_size.saturating_sub(1) / 2;
                    let spent: usize = (first..first + len)
                        .map(|v| self.deg[v] * self.deg[v].saturating_sub(1) / 2)
                        .sum();
                    if spent > total {
                        return 0;
                    }
                    let mut buckets = vec![0usize; self.g.n() + 130];
                    for v in first..first + len {
                        let cnt = (feasible & self.at_vertex[v]).count_ones() as usize;
                        // j-th extra edge at v costs at least deg(v) + j - 1
                        for j in 0..cnt {
                            buckets[self.deg[v] + j] += 1;
                        }
                    }
                    room = room.min(Self::greedy_fit(&buckets, total - spent));
                }
                room
            }
        }
    }

    fn dfs(&mut self, feasible: u128) {
        if self.exhausted {
            return;
        }
        self.nodes += 1;
        if self.nodes > self.budget {
            self.exhausted = true;
            return;
        }
        let cur = self.added.len();
        if cur + feasible.count_ones() as usize <= self.best {
            return;
        }
        if self.cap.is_some() && cur + self.codegree_room(feasible) <= self.best {
            return;
        }
        if self.symmetry_violated(feasible) {
            return;
        }
        if feasible == 0 {
            // cur > best is guaranteed by the bound check above
            self.best = cur;
            self.best_edges = self.added.clone();
            return;
        }
        let j = feasible.trailing_zeros() as usize;
        let rest = feasible & !(1u128 << j);

        // add branch
        let (u, v) = self.slots[j];
        self.g.set_edge_unchecked(u, v);
        self.deg[u] += 1;
        self.deg[v] += 1;
        self.added.push((u, v));
        if self.added.len() > self.best {
            self.best = self.added.len();
            self.best_edges = self.added.clone();
        }
        let mut next = rest;
        let mut scan = rest;
        while scan != 0 {
            let k = scan.trailing_zeros() as usize;
            scan &= scan - 1;
            if !self.addable(k) {
                next &= !(1u128 << k);
            }
        }
        self.dfs(next);
        self.added.pop();
        self.deg[u] -= 1;
        self.deg[v] -= 1;
        self.g.clear_edge_unchecked(u, v);

        // skip branch
        self.dfs(rest);
    }
}

/// One row of the cycle-vs-bipartite comparison table.
#[derive(Clone, Debug, serde::Serialize)]
pub struct RatioRow {
    pub n: usize,
    pub ex_value: usize,
    pub ex_exhaustive: bool,
    pub z_m: usize,
    pub z_n: usize,
    pub z_value: usize,
    pub z_exhaustive: bool,
    /// `ex / z`; absent when z = 0.
    pub ratio: Option<f64>,
}

/// For each `n`, compares `ex(n, fam_with_cycle)` against
/// `z(ceil(n/2), floor(n/2), fam_bipartite)`.
pub fn ratio_table(
    ns: &[usize],
    fam_with_cycle: &ForbiddenFamily,
    fam_bipartite: &ForbiddenFamily,
    budget: u64,
) -> Result<Vec<RatioRow>> {
    let mut rows = Vec::new();
    for &n in ns {
        let ex = ex_exact(n, fam_with_cycle, budget)?;
        let (m_half, n_half) = (n.div_ceil(2), n / 2);
        let (z_value, z_exhaustive) = if n_half == 0 {
            (0, true)
        } else {
            let z = z_exact(m_half, n_half, fam_bipartite, budget)?;
            (z.value, z.exhaustive)
        };
        let ratio = if z_value > 0 {
            Some(ex.value as f64 / z_value as f64)
        } else {
            None
        };
        rows.push(RatioRow {
            n,
            ex_value: ex.value,
            ex_exhaustive: ex.exhaustive,
            z_m: m_half,
            z_n: n_half,
            z_value,
            z_exhaustive,
            ratio,
        });
    }
    Ok(rows)
}

pub fn ratio_table_csv(rows: &[RatioRow]) -> String {
    let mut s = String::from("n,ex,ex_exhaustive,z_m,z_n,z,z_exhaustive,ratio\n");
    for r in rows {
        let ratio = r.ratio.map_or(String::from("NA"), |x| format!("{x:.6}"));
        s.push_str(&format!(
            "{},{},{},{},{},{},{},{}\n",
            r.n, r.ex_value, r.ex_exhaustive, r.z_m, r.z_n, r.z_value, r.z_exhaustive, ratio
        ));
    }
    s
}
