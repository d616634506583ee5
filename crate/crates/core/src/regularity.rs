//! Sparse regularity machinery: relative densities, the energy functions,
//! budgeted irregularity witnesses, witness-driven partition refinement,
//! and cluster-graph extraction.
//!
//! Summation convention, fixed here and used consistently: both energy
//! functions sum over *ordered pairs of distinct non-exceptional parts*;
//! self-pairs and the exceptional set are excluded (pair density is only
//! defined for disjoint sets). All monotonicity statements in the tests use
//! this convention.
//!
//! Exact regularity testing is co-NP-hard, so [`witness_irregular`] is a
//! budgeted semi-decision procedure: "regular" verdicts always mean
//! *regular-up-to-budget*, and every irregular verdict carries a witness
//! that re-validates against the graph.

#![allow(clippy::needless_range_loop)] // upper-triangular matrix sweeps

use crate::graph::Graph;
use crate::{Error, Result};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

/// Equitable vertex partition with an exceptional set: all regular parts
/// share one size, and `|V0| <= eps * n`.
#[derive(Clone, Debug, Serialize)]
pub struct Partition {
    pub exceptional: Vec<usize>,
    pub parts: Vec<Vec<usize>>,
    pub epsilon: f64,
    /// density scale in (0, 1]
    pub p: f64,
}

impl Partition {
    pub fn new(
        g: &Graph,
        exceptional: Vec<usize>,
        parts: Vec<Vec<usize>>,
        epsilon: f64,
        p: f64,
    ) -> Result<Self> {
        let part = Partition {
            exceptional,
            parts,
            epsilon,
            p,
        };
        part.validate(g)?;
        Ok(part)
    }

    pub fn validate(&self, g: &Graph) -> Result<()> {
        if !(self.p > 0.0 && self.p <= 1.0) {
            return Err(Error::Domain(format!(
                "scale p = {} outside (0, 1]",
                self.p
            )));
        }
        if !(self.epsilon > 0.0 && self.epsilon < 1.0) {
            return Err(Error::Domain(format!(
                "epsilon = {} outside (0, 1)",
                self.epsilon
            )));
        }
        let mut seen = vec![false; g.n()];
        let mut mark = |v: usize| -> Result<()> {
            if v >= g.n() || seen[v] {
                return Err(Error::Domain(
                    "partition parts overlap or leave range".into(),
                ));
            }
            seen[v] = true;
            Ok(())
        };
        for &v in &self.exceptional {
            mark(v)?;
        }
        for part in &self.parts {
            if part.is_empty() {
                return Err(Error::Domain("empty partition part".into()));
            }
            for &v in part {
                mark(v)?;
            }
        }
        if !seen.iter().all(|&s| s) {
            return Err(Error::Domain(
                "partition does not cover the vertex set".into(),
            ));
        }
        let size = self.parts.first().map_or(0, Vec::len);
        if self.parts.iter().any(|p| p.len() != size) {
            return Err(Error::Domain(
                "partition parts are not all the same size".into(),
            ));
        }
        if self.exceptional.len() as f64 > self.epsilon * g.n() as f64 {
            return Err(Error::Domain(format!(
                "exceptional set of size {} exceeds eps * n = {}",
                self.exceptional.len(),
                self.epsilon * g.n() as f64
            )));
        }
        Ok(())
    }

    /// Contiguous equitable partition into `k` parts; the remainder of
    /// `n / k` becomes the exceptional set.
    pub fn equitable(g: &Graph, k: usize, epsilon: f64, p: f64) -> Result<Self> {
        if k == 0 || g.n() < k {
            return Err(Error::Domain(format!(
                "cannot cut {} vertices into {k} parts",
                g.n()
            )));
        }
        let m = g.n() / k;
        let parts: Vec<Vec<usize>> = (0..k).map(|i| (i * m..(i + 1) * m).collect()).collect();
        let exceptional: Vec<usize> = (k * m..g.n()).collect();
        Partition::new(g, exceptional, parts, epsilon, p)
    }

    pub fn part_size(&self) -> usize {
        self.parts.first().map_or(0, Vec::len)
    }

    pub fn k(&self) -> usize {
        self.parts.len()
    }
}

/// Pair-by-pair edge counts for a partition.
fn pair_edge_counts(g: &Graph, p: &Partition) -> Vec<Vec<usize>> {
    let masks: Vec<Vec<u64>> = p
        .parts
        .iter()
        .map(|part| g.mask_of(part).expect("validated partition"))
        .collect();
    let k = p.k();
    let mut e = vec![vec![0usize; k]; k];
    for i in 0..k {
        for j in (i + 1)..k {
            let val = g.edges_between_masks(&masks[i], &masks[j]);
            e[i][j] = val;
            e[j][i] = val;
        }
    }
    e
}

/// Energy `sum_{X != Y} (|X||Y| / n^2) d(X, Y)^2` over ordered pairs of
/// distinct non-exceptional parts.
pub fn energy(g: &Graph, p: &Partition) -> Result<f64> {
    p.validate(g)?;
    let e = pair_edge_counts(g, p);
    let n2 = (g.n() * g.n()) as f64;
    let m = p.part_size() as f64;
    let mut total = 0.0;
    for i in 0..p.k() {
        for j in (i + 1)..p.k() {
            let d = e[i][j] as f64 / (m * m);
            total += 2.0 * (m * m / n2) * d * d;
        }
    }
    Ok(total)
}

/// Exact-rational energy under the same convention.
pub fn energy_rational(g: &Graph, p: &Partition) -> Result<BigRational> {
    p.validate(g)?;
    let e = pair_edge_counts(g, p);
    let n = BigInt::from(g.n());
    let m = BigInt::from(p.part_size());
    let mut total = BigRational::zero();
    for i in 0..p.k() {
        for j in (i + 1)..p.k() {
            let eij = BigInt::from(e[i][j]);
            // 2 * e^2 / (m^2 n^2)
            total += BigRational::new(2 * &eij * &eij, &m * &m * &n * &n);
        }
    }
    Ok(total)
}

/// Energy with `d` replaced by the relative density `d_p = d / p`; equals
/// `energy / p^2`.
pub fn energy_p(g: &Graph, p: &Partition) -> Result<f64> {
    if p.p <= 0.0 {
        return Err(Error::Domain("scale p must be positive".into()));
    }
    Ok(energy(g, p)? / (p.p * p.p))
}

/// Exact-rational relative energy; the caller supplies `p^2` as an exact
/// rational (e.g. `1/n` for the scale `p = n^{-1/2}`).
pub fn energy_p_rational(g: &Graph, p: &Partition, p_squared: &BigRational) -> Result<BigRational> {
    if !p_squared.is_positive() {
        return Err(Error::Domain("p^2 must be positive".into()));
    }
    Ok(energy_rational(g, p)? / p_squared)
}

/// The capped square: `x^2` for `x <= 2L`, then the tangent continuation
/// `4L(x - L)`. Continuous at `2L` (both branches give `4L^2`), monotone,
/// convex, and dominated by both `x^2` and `4Lx`.
pub fn phi_cap(x: f64, cap: f64) -> f64 {
    if x <= 2.0 * cap {
        x * x
    } else {
        4.0 * cap * (x - cap)
    }
}

/// The literal pointwise `min(x^2, 4L(x - L))` reading of the cap, emitted
/// alongside the piecewise form in diagnostics. A convex function dominates
/// its tangents, so this equals `4L(x - L)` everywhere and goes negative
/// for `x < L`; it is reported, never used in the engine.
pub fn phi_cap_literal_min(x: f64, cap: f64) -> f64 {
    (x * x).min(4.0 * cap * (x - cap))
}

/// Capped relative energy: eq. energy with `d_p^2` replaced by
/// `phi_cap(d_p)`. Requires `L >= 1`.
///
/// Since `phi_cap(x) <= x^2` and `phi_cap(x) <= 4 L x`, the result is
/// dominated by both `energy_p` and `8 L e(G) / (p n^2)`; both bounds are
/// verified on every call and a violation is an internal error.
pub fn capped_energy(g: &Graph, p: &Partition, cap: f64) -> Result<f64> {
    let value = capped_energy_with(g, p, cap, phi_cap)?;
    let ep = energy_p(g, p)?;
    let linear = 8.0 * cap * g.edge_count() as f64 / (p.p * (g.n() * g.n()) as f64);
    let slack = 1e-12 * (1.0 + ep.abs() + linear.abs());
    if value > ep + slack || value > linear + slack {
        return Err(Error::Internal(format!(
            "capped energy {value} escaped its bounds (energy_p = {ep}, linear = {linear})"
        )));
    }
    Ok(value)
}

/// Diagnostic variant using the literal `min` cap.
pub fn capped_energy_literal_min(g: &Graph, p: &Partition, cap: f64) -> Result<f64> {
    capped_energy_with(g, p, cap, phi_cap_literal_min)
}

fn capped_energy_with(g: &Graph, p: &Partition, cap: f64, phi: fn(f64, f64) -> f64) -> Result<f64> {
    if cap < 1.0 {
        return Err(Error::Domain(format!("cap L = {cap} must be >= 1")));
    }
    if p.p <= 0.0 {
        return Err(Error::Domain("scale p must be positive".into()));
    }
    p.validate(g)?;
    let e = pair_edge_counts(g, p);
    let n2 = (g.n() * g.n()) as f64;
    let m = p.part_size() as f64;
    let mut total = 0.0;
    for i in 0..p.k() {
        for j in (i + 1)..p.k() {
            let dp = e[i][j] as f64 / (m * m * p.p);
            total += 2.0 * (m * m / n2) * phi(dp, cap);
        }
    }
    Ok(total)
}

/// Verdict for one part pair.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub enum PairStatus {
    /// No witness found within budget ("regular-up-to-budget").
    Regular,
    /// Verified witness subsets with relative-density deviation > eps.
    Irregular {
        x_witness: Vec<usize>,
        y_witness: Vec<usize>,
    },
    Unknown,
}

#[derive(Clone, Debug, Serialize)]
pub struct PairInfo {
    pub d_p: f64,
    pub status: PairStatus,
}

/// Classification of every unordered part pair of a partition.
#[derive(Clone, Debug, Serialize)]
pub struct PairClassification {
    k: usize,
    entries: Vec<PairInfo>,
}

impl PairClassification {
    fn index(&self, i: usize, j: usize) -> usize {
        let (a, b) = if i < j { (i, j) } else { (j, i) };
        a * self.k - a * (a + 1) / 2 + (b - a - 1)
    }

    pub fn get(&self, i: usize, j: usize) -> &PairInfo {
        &self.entries[self.index(i, j)]
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn irregular_pair_count(&self) -> usize {
        self.entries
            .iter()
            .filter(|e| matches!(e.status, PairStatus::Irregular { .. }))
            .count()
    }

    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize, &PairInfo)> {
        let k = self.k;
        (0..k)
            .flat_map(move |i| ((i + 1)..k).map(move |j| (i, j)))
            .zip(self.entries.iter())
            .map(|((i, j), e)| (i, j, e))
    }
}

fn dp_of(g: &Graph, x: &[usize], y: &[usize], p: f64) -> f64 {
    let e = g.edges_between(x, y).expect("disjoint sets");
    e as f64 / (x.len() as f64 * y.len() as f64 * p)
}

/// Budgeted irregularity search for one pair. Tries deterministic
/// degree-split candidates (the `ceil(eps |X|)` vertices with the largest
/// and smallest degree into the other side) and then seeded random subsets
/// of the minimum admissible size. The first verified witness wins.
pub fn witness_irregular(
    g: &Graph,
    x: &[usize],
    y: &[usize],
    eps: f64,
    p: f64,
    budget: u32,
    seed: u64,
) -> Result<PairInfo> {
    if x.is_empty() || y.is_empty() {
        return Err(Error::Domain("witness_irregular: empty side".into()));
    }
    if p.is_nan() || p <= 0.0 {
        return Err(Error::Domain(
            "witness_irregular: p must be positive".into(),
        ));
    }
    let base_dp = dp_of(g, x, y, p);
    let sx = ((eps * x.len() as f64).ceil() as usize).clamp(1, x.len());
    let sy = ((eps * y.len() as f64).ceil() as usize).clamp(1, y.len());

    let verdict = |xs: &[usize], ys: &[usize]| -> Option<(Vec<usize>, Vec<usize>)> {
        let dp = dp_of(g, xs, ys, p);
        if (dp - base_dp).abs() > eps {
            let mut xs = xs.to_vec();
            let mut ys = ys.to_vec();
            xs.sort_unstable();
            ys.sort_unstable();
            Some((xs, ys))
        } else {
            None
        }
    };

    // deterministic candidates: extremes of the degree distribution
    let by_degree = |side: &[usize], other: &[usize]| -> Vec<usize> {
        let omask = g.mask_of(other).expect("in range");
        let mut order: Vec<(usize, usize)> = side
            .iter()
            .map(|&v| {
                let d: usize = g
                    .row(v)
                    .iter()
                    .zip(&omask)
                    .map(|(a, b)| (a & b).count_ones() as usize)
                    .sum();
                (d, v)
            })
            .collect();
        order.sort_unstable();
        order.into_iter().map(|(_, v)| v).collect()
    };
    let xord = by_degree(x, y);
    let yord = by_degree(y, x);
    let x_lo: Vec<usize> = xord[..sx].to_vec();
    let x_hi: Vec<usize> = xord[xord.len() - sx..].to_vec();
    let y_lo: Vec<usize> = yord[..sy].to_vec();
    let y_hi: Vec<usize> = yord[yord.len() - sy..].to_vec();
    let candidates: [(&[usize], &[usize]); 8] = [
        (&x_hi, y),
        (&x_lo, y),
        (x, &y_hi),
        (x, &y_lo),
        (&x_hi, &y_hi),
        (&x_lo, &y_lo),
        (&x_hi, &y_lo),
        (&x_lo, &y_hi),
    ];
    for (xs, ys) in candidates {
        if let Some((xw, yw)) = verdict(xs, ys) {
            return Ok(PairInfo {
                d_p: base_dp,
                status: PairStatus::Irregular {
                    x_witness: xw,
                    y_witness: yw,
                },
            });
        }
    }

    // seeded random subsets of minimum admissible size
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..budget {
        let xs = rand::seq::index::sample(&mut rng, x.len(), sx)
            .iter()
            .map(|i| x[i])
            .collect::<Vec<_>>();
        let ys = rand::seq::index::sample(&mut rng, y.len(), sy)
            .iter()
            .map(|i| y[i])
            .collect::<Vec<_>>();
        if let Some((xw, yw)) = verdict(&xs, &ys) {
            return Ok(PairInfo {
                d_p: base_dp,
                status: PairStatus::Irregular {
                    x_witness: xw,
                    y_witness: yw,
                },
            });
        }
    }
    Ok(PairInfo {
        d_p: base_dp,
        status: PairStatus::Regular,
    })
}

/// Re-validates a stored irregularity witness: admissible sizes and
/// relative-density deviation strictly above eps.
pub fn witness_revalidates(
    g: &Graph,
    x: &[usize],
    y: &[usize],
    info: &PairInfo,
    eps: f64,
    p: f64,
) -> bool {
    match &info.status {
        PairStatus::Irregular {
            x_witness,
            y_witness,
        } => {
            let sizes_ok = (x_witness.len() as f64) >= eps * x.len() as f64
                && (y_witness.len() as f64) >= eps * y.len() as f64
                && x_witness.iter().all(|v| x.contains(v))
                && y_witness.iter().all(|v| y.contains(v));
            if !sizes_ok {
                return false;
            }
            let dev = (dp_of(g, x_witness, y_witness, p) - dp_of(g, x, y, p)).abs();
            dev > eps
        }
        _ => true,
    }
}

/// Splits every part by the Venn diagram of its incident irregularity
/// witness sets, then re-chops the atoms into equal pieces; remainders move
/// to the exceptional set (which must stay within `eps * n`). With no
/// irregular pairs the partition is returned unchanged.
///
/// Piece-size selection: among the sizes keeping the part count within
/// `2^k_prev * ceil(1/eps)`, take the one whose resulting partition has
/// the largest capped energy at cap `cap` (ties resolve to the largest
/// size). Pure splitting never loses capped energy, only spill can, so
/// this keeps the per-round trace non-decreasing; if every feasible
/// re-chop would lose energy the input partition is returned unchanged and
/// the caller sees no progress.
pub fn refine(
    g: &Graph,
    part: &Partition,
    cls: &PairClassification,
    cap: f64,
) -> Result<Partition> {
    part.validate(g)?;
    if cls.k() != part.k() {
        return Err(Error::Domain(
            "classification does not match partition".into(),
        ));
    }
    let k = part.k();
    // witness sets per part, in deterministic (pair, side) order
    let mut witness_sets: Vec<Vec<Vec<usize>>> = vec![Vec::new(); k];
    let mut any = false;
    for (i, j, info) in cls.pairs() {
        if let PairStatus::Irregular {
            x_witness,
            y_witness,
        } = &info.status
        {
            witness_sets[i].push(x_witness.clone());
            witness_sets[j].push(y_witness.clone());
            any = true;
        }
    }
    if !any {
        return Ok(part.clone());
    }
    // atoms: vertices of a part grouped by their witness-membership key
    let mut atoms: Vec<Vec<usize>> = Vec::new();
    for (i, partv) in part.parts.iter().enumerate() {
        let sets = &witness_sets[i];
        let mut keyed: Vec<(u64, usize)> = partv
            .iter()
            .map(|&v| {
                let mut key = 0u64;
                for (b, set) in sets.iter().enumerate().take(63) {
                    if set.binary_search(&v).is_ok() {
                        key |= 1 << b;
                    }
                }
                (key, v)
            })
            .collect();
        keyed.sort_unstable();
        let mut cur_key = None;
        for (key, v) in keyed {
            if cur_key != Some(key) {
                atoms.push(Vec::new());
                cur_key = Some(key);
            }
            atoms.last_mut().unwrap().push(v);
        }
    }
    let part_cap = (1usize << part.k().min(20)) * (1.0 / part.epsilon).ceil() as usize;
    let spill_cap = (part.epsilon * g.n() as f64).floor() as usize;
    let old_exceptional = part.exceptional.len();
    let chop = |size: usize| -> (Vec<Vec<usize>>, Vec<usize>) {
        let mut new_parts = Vec::new();
        let mut exceptional = part.exceptional.clone();
        for atom in &atoms {
            let whole = atom.len() / size * size;
            for chunk in atom[..whole].chunks(size) {
                new_parts.push(chunk.to_vec());
            }
            exceptional.extend_from_slice(&atom[whole..]);
        }
        exceptional.sort_unstable();
        (new_parts, exceptional)
    };
    let current = capped_energy(g, part, cap)?;
    let mut feasible_any = false;
    let mut best: Option<(f64, usize)> = None;
    for size in 1..=part.part_size() {
        let count: usize = atoms.iter().map(|a| a.len() / size).sum();
        if count == 0 || count > part_cap {
            continue;
        }
        let spill: usize = atoms.iter().map(|a| a.len() % size).sum();
        if old_exceptional + spill > spill_cap {
            continue;
        }
        feasible_any = true;
        let (new_parts, exceptional) = chop(size);
        let candidate = Partition::new(g, exceptional, new_parts, part.epsilon, part.p)?;
        let value = capped_energy(g, &candidate, cap)?;
        let better = match best {
            None => true,
            Some((bv, bsize)) => value > bv || (value == bv && size > bsize),
        };
        if better {
            best = Some((value, size));
        }
    }
    if !feasible_any {
        return Err(Error::Domain(format!(
            "refinement overflowed the exceptional set (eps n = {}); eps or witness budget is misconfigured",
            part.epsilon * g.n() as f64
        )));
    }
    match best {
        Some((value, size)) if value >= current => {
            let (new_parts, exceptional) = chop(size);
            Partition::new(g, exceptional, new_parts, part.epsilon, part.p)
        }
        // every feasible re-chop loses capped energy: refuse to regress
        _ => Ok(part.clone()),
    }
}

/// Per-round measurements recorded by the partition engine.
#[derive(Clone, Debug, Serialize)]
pub struct RoundTrace {
    pub round: usize,
    pub parts: usize,
    pub part_size: usize,
    pub exceptional: usize,
    pub irregular_pairs: usize,
    pub energy_p: f64,
    pub capped_energy: f64,
    /// the literal-min reading of the cap, for comparison
    pub capped_energy_literal_min: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct RegularityRun {
    pub partition: Partition,
    pub classification: PairClassification,
    pub trace: Vec<RoundTrace>,
    pub converged: bool,
}

/// Witness-driven sparse regular partition: starts from a contiguous
/// equitable partition into `ceil(1/eps)` parts and alternates
/// classify-all-pairs with refinement until at most `eps k^2` (ordered)
/// pairs are irregular or `max_rounds` is hit.
#[allow(clippy::too_many_arguments)]
pub fn sparse_regular_partition(
    g: &Graph,
    eps: f64,
    p: f64,
    cap: f64,
    max_rounds: usize,
    witness_budget: u32,
    seed: u64,
) -> Result<RegularityRun> {
    if !(eps > 0.0 && eps < 0.5) {
        return Err(Error::Domain(format!("eps = {eps} outside (0, 1/2)")));
    }
    if !(p > 0.0 && p <= 1.0) {
        return Err(Error::Domain(format!("p = {p} outside (0, 1]")));
    }
    let k0 = (1.0 / eps).ceil() as usize;
    if g.n() < k0 {
        return Err(Error::Domain(format!(
            "graph has {} vertices, below 1/eps = {k0}",
            g.n()
        )));
    }
    let mut partition = Partition::equitable(g, k0, eps, p)?;
    let mut trace = Vec::new();
    let mut converged = false;
    let mut round = 0;
    loop {
        round += 1;
        let cls = classify_all_pairs(g, &partition, witness_budget, seed, round as u64)?;
        let irregular = cls.irregular_pair_count();
        trace.push(RoundTrace {
            round,
            parts: partition.k(),
            part_size: partition.part_size(),
            exceptional: partition.exceptional.len(),
            irregular_pairs: irregular,
            energy_p: energy_p(g, &partition)?,
            capped_energy: capped_energy(g, &partition, cap)?,
            capped_energy_literal_min: capped_energy_literal_min(g, &partition, cap)?,
        });
        let k = partition.k() as f64;
        // classification is per unordered pair; the eps k^2 allowance is
        // over ordered pairs
        if 2.0 * irregular as f64 <= eps * k * k {
            converged = true;
            return Ok(RegularityRun {
                partition,
                classification: cls,
                trace,
                converged,
            });
        }
        if round >= max_rounds {
            return Ok(RegularityRun {
                partition,
                classification: cls,
                trace,
                converged,
            });
        }
        let refined = refine(g, &partition, &cls, cap)?;
        if refined.parts == partition.parts && refined.exceptional == partition.exceptional {
            // refinement refused to lose capped energy: no further progress
            return Ok(RegularityRun {
                partition,
                classification: cls,
                trace,
                converged,
            });
        }
        partition = refined;
    }
}

fn mix_seed(seed: u64, round: u64, i: u64, j: u64) -> u64 {
    // splitmix-style mixing; per-pair streams keep the classification
    // deterministic under any parallel schedule
    let mut z = seed
        ^ round.wrapping_mul(0x9e3779b97f4a7c15)
        ^ i.wrapping_mul(0xbf58476d1ce4e5b9)
        ^ j.wrapping_mul(0x94d049bb133111eb);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
    z ^ (z >> 31)
}

/// Classifies every unordered part pair with per-pair RNG streams.
pub fn classify_all_pairs(
    g: &Graph,
    part: &Partition,
    witness_budget: u32,
    seed: u64,
    round: u64,
) -> Result<PairClassification> {
    use rayon::prelude::*;
    let k = part.k();
    let pairs: Vec<(usize, usize)> = (0..k)
        .flat_map(|i| ((i + 1)..k).map(move |j| (i, j)))
        .collect();
    let entries: Vec<PairInfo> = pairs
        .par_iter()
        .map(|&(i, j)| {
            witness_irregular(
                g,
                &part.parts[i],
                &part.parts[j],
                part.epsilon,
                part.p,
                witness_budget,
                mix_seed(seed, round, i as u64, j as u64),
            )
        })
        .collect::<Result<_>>()?;
    Ok(PairClassification { k, entries })
}

/// Cluster graph on the partition classes: an edge wherever the pair was
/// classified regular with relative density at least `d`.
#[derive(Clone, Debug, Serialize)]
pub struct ClusterGraph {
    pub k: usize,
    pub edges: Vec<(usize, usize)>,
    pub epsilon: f64,
    pub d: f64,
    pub p: f64,
}

impl ClusterGraph {
    pub fn degrees(&self) -> Vec<usize> {
        let mut deg = vec![0usize; self.k];
        for &(i, j) in &self.edges {
            deg[i] += 1;
            deg[j] += 1;
        }
        deg
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn to_graph(&self) -> Graph {
        Graph::from_edge_list(self.k, &self.edges).expect("cluster edges are in range")
    }
}

pub fn cluster_graph(part: &Partition, cls: &PairClassification, d: f64) -> Result<ClusterGraph> {
    if cls.k() != part.k() {
        return Err(Error::Domain(
            "classification does not match partition".into(),
        ));
    }
    let mut edges = Vec::new();
    for (i, j, info) in cls.pairs() {
        if info.status == PairStatus::Regular && info.d_p >= d {
            edges.push((i, j));
        }
    }
    Ok(ClusterGraph {
        k: part.k(),
        edges,
        epsilon: part.epsilon,
        d,
        p: part.p,
    })
}

/// Regularity parameters `(eps, density lower bound)` of a pair.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct PairParams {
    pub epsilon: f64,
    pub density_lb: f64,
}

/// Parameter algebra for the union of two regular pairs sharing a side:
/// `(A, B)` and `(A, C)` regular with density >= d give `(A, B u C)`
/// regular with the same parameters. Differing inputs combine
/// conservatively (max eps, min density).
pub fn pair_union_params(a: PairParams, b: PairParams) -> PairParams {
    PairParams {
        epsilon: a.epsilon.max(b.epsilon),
        density_lb: a.density_lb.min(b.density_lb),
    }
}

/// Restriction to a subset of at least a `gamma` fraction of one side:
/// `(eps + eps/gamma, d - eps)`. Requires `gamma > eps`.
pub fn pair_restrict_params(params: PairParams, gamma: f64) -> Result<PairParams> {
    if gamma <= params.epsilon {
        return Err(Error::Domain(format!(
            "restriction fraction gamma = {gamma} must exceed eps = {}",
            params.epsilon
        )));
    }
    Ok(PairParams {
        epsilon: params.epsilon + params.epsilon / gamma,
        density_lb: params.density_lb - params.epsilon,
    })
}

/// Empirical spot check of the union rule on actual sets.
#[derive(Clone, Debug, Serialize)]
pub struct UnionCheck {
    pub dp_ab: f64,
    pub dp_ac: f64,
    pub dp_union: f64,
    /// union density is a weighted average, so it is at least the minimum
    pub holds: bool,
}

pub fn pair_union_check(
    g: &Graph,
    p: f64,
    a: &[usize],
    b: &[usize],
    c: &[usize],
) -> Result<UnionCheck> {
    let mut bc: Vec<usize> = b.iter().chain(c).copied().collect();
    bc.sort_unstable();
    let len_before = bc.len();
    bc.dedup();
    if bc.len() != len_before {
        return Err(Error::Domain("union spot check: B and C overlap".into()));
    }
    let dp_ab = dp_of(g, a, b, p);
    let dp_ac = dp_of(g, a, c, p);
    let dp_union = dp_of(g, a, &bc, p);
    Ok(UnionCheck {
        dp_ab,
        dp_ac,
        dp_union,
        holds: dp_union >= dp_ab.min(dp_ac) - 1e-12,
    })
}

/// Empirical spot check of the restriction rule: reports the densities;
/// `holds` compares against the derived lower bound.
#[derive(Clone, Debug, Serialize)]
pub struct RestrictCheck {
    pub dp_ab: f64,
    pub dp_restricted: f64,
    pub derived_lb: f64,
    pub holds: bool,
}

pub fn pair_restrict_check(
    g: &Graph,
    p: f64,
    eps: f64,
    a: &[usize],
    b: &[usize],
    x: &[usize],
) -> Result<RestrictCheck> {
    if x.is_empty() || !x.iter().all(|v| b.contains(v)) {
        return Err(Error::Domain(
            "restriction spot check: X must be a nonempty subset of B".into(),
        ));
    }
    let gamma = x.len() as f64 / b.len() as f64;
    if gamma <= eps {
        return Err(Error::Domain(format!(
            "restriction fraction gamma = {gamma} must exceed eps = {eps}"
        )));
    }
    let dp_ab = dp_of(g, a, b, p);
    let dp_restricted = dp_of(g, a, x, p);
    let derived_lb = dp_ab - eps;
    Ok(RestrictCheck {
        dp_ab,
        dp_restricted,
        derived_lb,
        holds: dp_restricted >= derived_lb - 1e-12,
    })
}

/// Outcome of the `K_{s,t}`-free relative-energy bound check: with
/// `p = n^{-1/s}` and no part smaller than `2 s n^{1/s}`, the relative
/// energy of a `K_{s,t}`-free graph is at most `2^s t + 1`.
#[derive(Clone, Debug, Serialize)]
pub struct EnergyBoundReport {
    pub s: usize,
    pub t: usize,
    pub energy_p: f64,
    pub bound: f64,
    pub passed: bool,
    /// true when the comparison was done in exact rational arithmetic
    pub exact: bool,
}

pub fn energy_bound_check(
    g: &Graph,
    part: &Partition,
    s: usize,
    t: usize,
) -> Result<EnergyBoundReport> {
    if s < 1 || s > t {
        return Err(Error::Domain(format!(
            "energy bound needs 1 <= s <= t, got ({s}, {t})"
        )));
    }
    if s > 3 {
        return Err(Error::Domain("energy bound check limited to s <= 3".into()));
    }
    part.validate(g)?;
    if let Some(w) = crate::detect::has_kst(g, s, t)? {
        return Err(Error::Domain(format!(
            "graph is not K_{{{s},{t}}}-free (witness {:?}); check skipped",
            w.vertices
        )));
    }
    // every part must have size at least 2 s n^{1/s}: compare size^s >= (2s)^s n
    let n = g.n() as u128;
    let msize = part.part_size() as u128;
    let lhs = msize
        .checked_pow(s as u32)
        .ok_or_else(|| Error::Internal("overflow".into()))?;
    let rhs = (2 * s as u128).pow(s as u32) * n;
    if lhs < rhs {
        return Err(Error::Domain(format!(
            "part size {msize} is below 2 s n^(1/s); check skipped"
        )));
    }
    let bound = (1 << s) as f64 * t as f64 + 1.0;
    if s == 2 {
        // p^2 = 1/n exactly
        let p_sq = BigRational::new(BigInt::from(1), BigInt::from(g.n()));
        let ep = energy_p_rational(g, part, &p_sq)?;
        let bound_rat = BigRational::from_integer(BigInt::from((1u64 << s) * t as u64 + 1));
        Ok(EnergyBoundReport {
            s,
            t,
            energy_p: ep.to_f64().unwrap_or(f64::NAN),
            bound,
            passed: ep <= bound_rat,
            exact: true,
        })
    } else {
        // recompute at the mandated scale p = n^{-1/s}
        let mut scaled = part.clone();
        scaled.p = (g.n() as f64).powf(-1.0 / s as f64);
        let ep = energy_p(g, &scaled)?;
        Ok(EnergyBoundReport {
            s,
            t,
            energy_p: ep,
            bound,
            passed: ep <= bound + 1e-12,
            exact: false,
        })
    }
}
