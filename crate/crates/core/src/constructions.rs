//! Algebraic constructions over prime fields: the tripartite triangle-free
//! `K_{2,3}`-free graph `G_q`, its `(t+2)`-partite generalization `G_{q,t}`
//! driven by a multiplier table, and the projective-plane incidence
//! baseline.
//!
//! Vertex indexing is fixed so fixtures are reproducible: a part-`i` vertex
//! with field coordinates `(x1, x2)` gets index `i*q^2 + x1*q + x2`.

use crate::gf::{CharacterValue, PrimeField};
use crate::graph::{BipartiteGraph, GraphBuilder, PartLabeledGraph};
use crate::{Error, Result};
use serde::{Deserialize, Serialize};

/// Multiplier table `m_{i,j}` for `G_{q,t}`, stored upper-triangular over
/// 1-based part indices `1 <= i < j <= t+2`. Reads of a transposed entry
/// apply the sign convention `m_{j,i} = -m_{i,j}`; that negation lives in
/// exactly one accessor ([`MultiplierSet::get`]).
///
/// Validity (checked by [`MultiplierSet::validate`]):
/// * every entry is nonzero;
/// * triangle condition: for all distinct `i,j,k` the value
///   `m_{i,j,k} = -m_{i,j} m_{j,k} m_{k,i} (m_{i,j} + m_{j,k} + m_{k,i})`
///   is a quadratic non-residue;
/// * pair condition: `m_{j,k} != -m_{k,i}` for all distinct `i,j,k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultiplierSet {
    q: u64,
    t: usize,
    /// slot (i, j), i < j (1-based), in lexicographic order
    upper: Vec<u64>,
}

#[derive(Serialize, Deserialize)]
struct MultiplierEntry {
    i: usize,
    j: usize,
    m: u64,
}

#[derive(Serialize, Deserialize)]
struct MultiplierSetJson {
    q: u64,
    t: usize,
    entries: Vec<MultiplierEntry>,
}

fn table_len(t: usize) -> usize {
    (t + 2) * (t + 1) / 2
}

impl MultiplierSet {
    /// Builds and validates a multiplier set from the upper-triangular
    /// entries in lexicographic `(i, j)` order.
    pub fn new(q: u64, t: usize, upper: Vec<u64>) -> Result<Self> {
        if t < 1 {
            return Err(Error::Domain(format!(
                "multiplier table needs t >= 1, got {t}"
            )));
        }
        if upper.len() != table_len(t) {
            return Err(Error::Domain(format!(
                "multiplier table for t = {t} needs {} entries, got {}",
                table_len(t),
                upper.len()
            )));
        }
        let field = PrimeField::new(q)?;
        let ms = MultiplierSet { q, t, upper };
        ms.validate(&field)?;
        Ok(ms)
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn t(&self) -> usize {
        self.t
    }

    pub fn parts(&self) -> usize {
        self.t + 2
    }

    fn slot(&self, i: usize, j: usize) -> usize {
        debug_assert!(1 <= i && i < j && j <= self.parts());
        // row i starts after rows 1..i, each row i' has (parts - i') entries
        let before: usize = (1..i).map(|r| self.parts() - r).sum();
        before + (j - i - 1)
    }

    /// `m_{i,j}` for any distinct 1-based `i, j`, applying the sign
    /// convention on transposed reads.
    pub fn get(&self, i: usize, j: usize) -> u64 {
        if i < j {
            self.upper[self.slot(i, j)]
        } else {
            let m = self.upper[self.slot(j, i)];
            (self.q - m) % self.q
        }
    }

    /// Re-checks all invariants against the field.
    pub fn validate(&self, field: &PrimeField) -> Result<()> {
        if field.q() != self.q {
            return Err(Error::Domain(
                "multiplier set validated against wrong field".into(),
            ));
        }
        if self.upper.iter().any(|&m| m == 0 || m >= self.q) {
            return Err(Error::Domain(
                "multiplier entries must be nonzero residue classes".into(),
            ));
        }
        let r = self.parts();
        // triangle condition over unordered triples (the value is
        // order-independent)
        for i in 1..=r {
            for j in (i + 1)..=r {
                for k in (j + 1)..=r {
                    let a = self.get(i, j);
                    let b = self.get(j, k);
                    let c = self.get(k, i);
                    let sum = field.add(field.add(a, b), c);
                    let prod = field.mul(field.mul(a, b), c);
                    let m_ijk = field.neg(field.mul(prod, sum));
                    if field.quadratic_character(m_ijk) != CharacterValue::MinusOne {
                        return Err(Error::Domain(format!(
                            "triangle condition fails on parts ({i},{j},{k}): m_ijk = {m_ijk} is not a non-residue"
                        )));
                    }
                }
            }
        }
        // pair condition over ordered distinct triples
        for i in 1..=r {
            for j in 1..=r {
                for k in 1..=r {
                    if i == j || j == k || i == k {
                        continue;
                    }
                    if self.get(j, k) == field.neg(self.get(k, i)) {
                        return Err(Error::Domain(format!(
                            "pair condition fails: m_{{{j},{k}}} = -m_{{{k},{i}}}"
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn to_json(&self) -> String {
        let mut entries = Vec::new();
        for i in 1..=self.parts() {
            for j in (i + 1)..=self.parts() {
                entries.push(MultiplierEntry {
                    i,
                    j,
                    m: self.get(i, j),
                });
            }
        }
        serde_json::to_string_pretty(&MultiplierSetJson {
            q: self.q,
            t: self.t,
            entries,
        })
        .expect("multiplier serialization cannot fail")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let raw: MultiplierSetJson = serde_json::from_str(text)
            .map_err(|e| Error::Parse(format!("multiplier JSON: {e}")))?;
        let mut upper = vec![0u64; table_len(raw.t)];
        let parts = raw.t + 2;
        let mut seen = vec![false; upper.len()];
        for e in &raw.entries {
            if !(1 <= e.i && e.i < e.j && e.j <= parts) {
                return Err(Error::Parse(format!(
                    "multiplier entry ({}, {}) out of range",
                    e.i, e.j
                )));
            }
            let before: usize = (1..e.i).map(|r| parts - r).sum();
            let idx = before + (e.j - e.i - 1);
            if seen[idx] {
                return Err(Error::Parse(format!(
                    "duplicate multiplier entry ({}, {})",
                    e.i, e.j
                )));
            }
            seen[idx] = true;
            upper[idx] = e.m;
        }
        if !seen.iter().all(|&s| s) {
            return Err(Error::Parse("multiplier JSON is missing entries".into()));
        }
        MultiplierSet::new(raw.q, raw.t, upper)
    }
}

fn check_gq_modulus(q: u64) -> Result<PrimeField> {
    // the triangle-freeness algebra divides by 2 and uses quadratic
    // residues, so odd q >= 5 is required even though "prime, 2 mod 3"
    // literally admits q = 2
    if q < 5 {
        return Err(Error::Domain(format!(
            "q = {q} too small; need an odd prime >= 5"
        )));
    }
    let field = PrimeField::new(q)?;
    if q % 3 != 2 {
        return Err(Error::Domain(format!(
            "q = {q} is 1 mod 3; need q = 2 mod 3"
        )));
    }
    Ok(field)
}

/// The tripartite graph on three copies of `F_q x F_q`: part-`i` vertex `x`
/// is joined to part-`(i+1)` vertex `y` (indices mod 3) when
/// `x - y = (a, a^2)` for some nonzero `a`. Requires prime `q = 2 mod 3`,
/// `q >= 5`; the result has `3q^2` vertices, `3q^2(q-1)` edges, and every
/// vertex of degree `2(q-1)`.
pub fn build_gq(q: u64) -> Result<PartLabeledGraph> {
    let field = check_gq_modulus(q)?;
    let qs = q as usize;
    let n = 3 * qs * qs;
    let mut b = GraphBuilder::new(n);
    let index = |part: usize, x1: u64, x2: u64| part * qs * qs + (x1 as usize) * qs + x2 as usize;
    for part in 0..3 {
        let next = (part + 1) % 3;
        for x1 in 0..q {
            for x2 in 0..q {
                for a in 1..q {
                    let y1 = field.sub(x1, a);
                    let y2 = field.sub(x2, field.mul(a, a));
                    b.add_edge(index(part, x1, x2), index(next, y1, y2))?;
                }
            }
        }
    }
    let g = b.finish();
    let expect = 3 * qs * qs * (qs - 1);
    if g.edge_count() != expect {
        return Err(Error::Internal(format!(
            "G_q edge count {} differs from 3q^2(q-1) = {expect}",
            g.edge_count()
        )));
    }
    let parts = (0..3)
        .map(|p| (p * qs * qs..(p + 1) * qs * qs).collect())
        .collect();
    PartLabeledGraph::new(g, parts)
}

/// The `(t+2)`-partite generalization: for `i < j`, part-`i` vertex `x` is
/// joined to part-`j` vertex `y` when `x - y = m_{i,j} (c, c^2)` for some
/// nonzero `c`. The multiplier set is re-validated before use.
pub fn build_gqt(q: u64, multipliers: &MultiplierSet) -> Result<PartLabeledGraph> {
    if multipliers.q() != q {
        return Err(Error::Domain(format!(
            "multiplier set is for q = {}, not q = {q}",
            multipliers.q()
        )));
    }
    let field = PrimeField::new(q)?;
    multipliers.validate(&field)?;
    let qs = q as usize;
    let r = multipliers.parts();
    let n = r * qs * qs;
    let mut b = GraphBuilder::new(n);
    let index = |part: usize, x1: u64, x2: u64| part * qs * qs + (x1 as usize) * qs + x2 as usize;
    for i in 1..=r {
        for j in (i + 1)..=r {
            let m = multipliers.get(i, j);
            for x1 in 0..q {
                for x2 in 0..q {
                    for c in 1..q {
                        let y1 = field.sub(x1, field.mul(m, c));
                        let y2 = field.sub(x2, field.mul(m, field.mul(c, c)));
                        b.add_edge(index(i - 1, x1, x2), index(j - 1, y1, y2))?;
                    }
                }
            }
        }
    }
    let g = b.finish();
    let expect = r * (r - 1) / 2 * qs * qs * (qs - 1);
    if g.edge_count() != expect {
        return Err(Error::Internal(format!(
            "G_{{q,t}} edge count {} differs from C(t+2,2) q^2 (q-1) = {expect}",
            g.edge_count()
        )));
    }
    let parts = (0..r)
        .map(|p| (p * qs * qs..(p + 1) * qs * qs).collect())
        .collect();
    PartLabeledGraph::new(g, parts)
}

/// How to look for a valid multiplier table.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MultiplierStrategy {
    /// Depth-first assignment of the exact triangle + pair conditions.
    /// Feasible at small `q`.
    Backtracking,
    /// The residue-greedy scheme: all relabeled values are residues,
    /// pairwise distinct and non-opposite, and `-(m_i + m_j + m_k)` is a
    /// non-residue for all distinct triples, extending by `m_{r+1} = x^2`
    /// over ascending `x`. Sufficient only for astronomically large `q`;
    /// the result is re-validated and rejected if the exact conditions
    /// fail.
    PaperGreedy,
}

/// Outcome of a multiplier search. `found = None` with `exhaustive = true`
/// means the space was searched completely and admits no valid table.
#[derive(Clone, Debug)]
pub struct MultiplierSearch {
    pub found: Option<MultiplierSet>,
    pub nodes: u64,
    pub exhaustive: bool,
}

/// Searches for a multiplier table valid for `(q, t)`. Any returned set has
/// been re-validated against the exact conditions.
pub fn find_multipliers(
    q: u64,
    t: usize,
    strategy: MultiplierStrategy,
    budget: u64,
) -> Result<MultiplierSearch> {
    if q < 5 {
        return Err(Error::Domain(format!(
            "q = {q} too small; need an odd prime >= 5"
        )));
    }
    let field = PrimeField::new(q)?;
    if t < 1 {
        return Err(Error::Domain(format!("t must be >= 1, got {t}")));
    }
    match strategy {
        MultiplierStrategy::Backtracking => backtrack_multipliers(&field, t, budget),
        MultiplierStrategy::PaperGreedy => greedy_multipliers(&field, t, budget),
    }
}

fn backtrack_multipliers(field: &PrimeField, t: usize, budget: u64) -> Result<MultiplierSearch> {
    let q = field.q();
    let parts = t + 2;
    let len = table_len(t);
    // slot order is lexicographic (i, j); precompute which conditions close
    // at each slot
    let mut slots = Vec::with_capacity(len);
    for i in 1..=parts {
        for j in (i + 1)..=parts {
            slots.push((i, j));
        }
    }
    let slot_index = |i: usize, j: usize| -> usize {
        let before: usize = (1..i).map(|r| parts - r).sum();
        before + (j - i - 1)
    };

    struct State<'a> {
        field: &'a PrimeField,
        parts: usize,
        slots: Vec<(usize, usize)>,
        assign: Vec<u64>,
        nodes: u64,
        budget: u64,
        exhausted: bool,
    }

    impl State<'_> {
        fn get(
            &self,
            i: usize,
            j: usize,
            upto: usize,
            slot_index: &dyn Fn(usize, usize) -> usize,
        ) -> Option<u64> {
            let (a, b, flip) = if i < j { (i, j, false) } else { (j, i, true) };
            let idx = slot_index(a, b);
            if idx >= upto {
                return None;
            }
            let m = self.assign[idx];
            Some(if flip { self.field.neg(m) } else { m })
        }

        /// Checks every condition that becomes fully determined once slots
        /// `0..=last` are assigned and involves the slot `last`.
        fn consistent(&self, last: usize, slot_index: &dyn Fn(usize, usize) -> usize) -> bool {
            let upto = last + 1;
            let (si, sj) = self.slots[last];
            // triangle condition for each triple containing the pair (si, sj)
            for k in 1..=self.parts {
                if k == si || k == sj {
                    continue;
                }
                let (Some(a), Some(b), Some(c)) = (
                    self.get(si, sj, upto, slot_index),
                    self.get(sj, k, upto, slot_index),
                    self.get(k, si, upto, slot_index),
                ) else {
                    continue;
                };
                let sum = self.field.add(self.field.add(a, b), c);
                let prod = self.field.mul(self.field.mul(a, b), c);
                let m_ijk = self.field.neg(self.field.mul(prod, sum));
                if self.field.quadratic_character(m_ijk) != CharacterValue::MinusOne {
                    return false;
                }
            }
            // pair condition instances touching (si, sj): ordered triples
            // (i, j, k) with {j,k} or {k,i} equal to {si, sj}
            for i in 1..=self.parts {
                for j in 1..=self.parts {
                    for k in 1..=self.parts {
                        if i == j || j == k || i == k {
                            continue;
                        }
                        let touches = (j == si && k == sj)
                            || (j == sj && k == si)
                            || (k == si && i == sj)
                            || (k == sj && i == si);
                        if !touches {
                            continue;
                        }
                        let (Some(mjk), Some(mki)) = (
                            self.get(j, k, upto, slot_index),
                            self.get(k, i, upto, slot_index),
                        ) else {
                            continue;
                        };
                        if mjk == self.field.neg(mki) {
                            return false;
                        }
                    }
                }
            }
            true
        }

        fn dfs(&mut self, pos: usize, slot_index: &dyn Fn(usize, usize) -> usize) -> bool {
            if pos == self.slots.len() {
                return true;
            }
            let q = self.field.q();
            for m in 1..q {
                self.nodes += 1;
                if self.nodes > self.budget {
                    self.exhausted = true;
                    return false;
                }
                self.assign[pos] = m;
                if self.consistent(pos, slot_index) && self.dfs(pos + 1, slot_index) {
                    return true;
                }
                if self.exhausted {
                    return false;
                }
            }
            false
        }
    }

    let mut st = State {
        field,
        parts,
        slots: slots.clone(),
        assign: vec![0; len],
        nodes: 0,
        budget,
        exhausted: false,
    };
    let idx_fn = |i: usize, j: usize| slot_index(i, j);
    let found = st.dfs(0, &idx_fn);
    if found {
        let ms = MultiplierSet::new(q, t, st.assign.clone())?;
        Ok(MultiplierSearch {
            found: Some(ms),
            nodes: st.nodes,
            exhaustive: true,
        })
    } else {
        Ok(MultiplierSearch {
            found: None,
            nodes: st.nodes,
            exhaustive: !st.exhausted,
        })
    }
}

fn greedy_multipliers(field: &PrimeField, t: usize, budget: u64) -> Result<MultiplierSearch> {
    let q = field.q();
    let total = table_len(t);
    let mut chosen: Vec<u64> = Vec::with_capacity(total);
    let mut nodes = 0u64;
    let conflicts = |chosen: &[u64], cand: u64| -> bool {
        chosen.iter().any(|&m| m == cand || m == field.neg(cand))
    };
    // first two: ascending residues, pairwise distinct and non-opposite
    'outer: for x in 1..q {
        nodes += 1;
        if nodes > budget {
            return Ok(MultiplierSearch {
                found: None,
                nodes,
                exhaustive: false,
            });
        }
        let cand = field.mul(x, x);
        if chosen.len() < 2 {
            if !conflicts(&chosen, cand) && !chosen.contains(&cand) {
                chosen.push(cand);
            }
            if chosen.len() == 2 {
                break 'outer;
            }
        }
    }
    if chosen.len() < 2 {
        return Ok(MultiplierSearch {
            found: None,
            nodes,
            exhaustive: true,
        });
    }
    while chosen.len() < total {
        // I = {-m_i - m_j}; the next value x^2 must make m - x^2 a
        // non-residue for every m in I
        let mut targets = Vec::new();
        for (i, &mi) in chosen.iter().enumerate() {
            for &mj in &chosen[i + 1..] {
                targets.push(field.neg(field.add(mi, mj)));
            }
        }
        let mut picked = None;
        for x in 1..q {
            nodes += 1;
            if nodes > budget {
                return Ok(MultiplierSearch {
                    found: None,
                    nodes,
                    exhaustive: false,
                });
            }
            let cand = field.mul(x, x);
            if conflicts(&chosen, cand) {
                continue;
            }
            if targets
                .iter()
                .all(|&m| field.quadratic_character(field.sub(m, cand)) == CharacterValue::MinusOne)
            {
                picked = Some(cand);
                break;
            }
        }
        match picked {
            Some(c) => chosen.push(c),
            None => {
                return Ok(MultiplierSearch {
                    found: None,
                    nodes,
                    exhaustive: true,
                })
            }
        }
    }
    // map the relabeled values onto slots in lexicographic order, then hold
    // the result to the exact conditions
    match MultiplierSet::new(q, t, chosen) {
        Ok(ms) => Ok(MultiplierSearch {
            found: Some(ms),
            nodes,
            exhaustive: true,
        }),
        Err(_) => Ok(MultiplierSearch {
            found: None,
            nodes,
            exhaustive: true,
        }),
    }
}

/// Bipartite incidence graph of the projective plane over `F_q` (prime
/// `q`): `q^2 + q + 1` points vs as many lines, adjacency by orthogonality
/// of homogeneous coordinates. Every vertex has degree `q + 1`; the girth
/// is 6.
pub fn projective_plane_incidence(q: u64) -> Result<BipartiteGraph> {
    let reps = projective_points(q)?;
    let count = reps.len();
    let expect = (q * q + q + 1) as usize;
    if count != expect {
        return Err(Error::Internal(format!(
            "projective point count {count} differs from q^2+q+1 = {expect}"
        )));
    }
    let mut b = GraphBuilder::new(2 * count);
    for (pi, p) in reps.iter().enumerate() {
        for (li, l) in reps.iter().enumerate() {
            let dot = (p[0] as u128 * l[0] as u128
                + p[1] as u128 * l[1] as u128
                + p[2] as u128 * l[2] as u128)
                % q as u128;
            if dot == 0 {
                b.add_edge(pi, count + li)?;
            }
        }
    }
    let g = b.finish();
    let expect_edges = expect * (q as usize + 1);
    if g.edge_count() != expect_edges {
        return Err(Error::Internal(format!(
            "incidence count {} differs from (q^2+q+1)(q+1) = {expect_edges}",
            g.edge_count()
        )));
    }
    BipartiteGraph::from_contiguous(g, count)
}

/// Canonical representatives of the projective classes of `F_q^3 \ {0}`:
/// first nonzero coordinate normalized to 1.
fn projective_points(q: u64) -> Result<Vec<[u64; 3]>> {
    if q < 2 {
        return Err(Error::Domain(format!("plane order {q} too small")));
    }
    // primality check that also admits q = 2 (odd-prime fields go through
    // PrimeField elsewhere)
    let prime = q == 2 || (q % 2 == 1 && PrimeField::new(q).is_ok());
    if !prime {
        return Err(Error::Domain(format!(
            "plane order {q} must be prime (prime powers are out of scope)"
        )));
    }
    let mut reps = Vec::new();
    reps.push([0, 0, 1]);
    for a in 0..q {
        reps.push([0, 1, a]);
    }
    for a in 0..q {
        for b in 0..q {
            reps.push([1, a, b]);
        }
    }
    Ok(reps)
}

/// The density ratio `(t+1) / sqrt(t(t+2))`, always > 1 and decreasing
/// toward 1.
pub fn density_ratio(t: u64) -> Result<f64> {
    if t < 1 {
        return Err(Error::Domain(format!("t must be >= 1, got {t}")));
    }
    let t = t as f64;
    Ok((t + 1.0) / (t * (t + 2.0)).sqrt())
}

/// Convenience: a valid multiplier table reproducing [`build_gq`] at `t = 1`
/// (`m_{1,2} = m_{2,3} = 1`, `m_{1,3} = -1`).
pub fn gq_multipliers(q: u64) -> Result<MultiplierSet> {
    check_gq_modulus(q)?;
    MultiplierSet::new(q, 1, vec![1, q - 1, 1])
}
