//! Closed-form bound calculators and constructive procedures: smoothness
//! parameters and expansion bounds, odd-cycle embedding thresholds, the
//! 4-cycle supersaturation bound, the triangle-rich-or-near-bipartite
//! stability dichotomy, the local max-cut move, and the layered odd-cycle
//! finder.
//!
//! Threshold arithmetic that can land exactly on a boundary (the embedding
//! depth, the growth exponents) is done in exact rationals; no floating
//! logarithms anywhere near a floor.

use crate::detect;
use crate::graph::Graph;
use crate::regularity::{ClusterGraph, PairClassification, PairStatus, Partition};
use crate::{Error, Result};
use num_bigint::BigInt;
use num_rational::{BigRational, Rational64};
use num_traits::{FromPrimitive, One, ToPrimitive};
use serde::Serialize;

/// Parameters of an `(alpha, beta)`-smooth bipartite family:
/// `z(m, n, F) = rho * m * n^(alpha-1) + O(n^beta)` with
/// `1 <= beta < alpha < 2`. The constant `C` scales the error term in the
/// expansion bound and is supplied by the caller, not derived.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct SmoothnessParams {
    pub alpha: Rational64,
    pub beta: Rational64,
    pub rho: f64,
    pub c: f64,
}

impl SmoothnessParams {
    pub fn new(alpha: Rational64, beta: Rational64, rho: f64, c: f64) -> Result<Self> {
        let one = Rational64::one();
        let two = Rational64::from_integer(2);
        if !(beta >= one && beta < alpha && alpha < two) {
            return Err(Error::Domain(format!(
                "smoothness needs 1 <= beta < alpha < 2, got alpha = {alpha}, beta = {beta}"
            )));
        }
        if rho < 0.0 {
            return Err(Error::Domain("relative density rho must be >= 0".into()));
        }
        if c < 1.0 {
            return Err(Error::Domain("expansion constant C must be >= 1".into()));
        }
        Ok(SmoothnessParams {
            alpha,
            beta,
            rho,
            c,
        })
    }

    pub fn alpha_f64(&self) -> f64 {
        self.alpha.to_f64().unwrap()
    }

    pub fn beta_f64(&self) -> f64 {
        self.beta.to_f64().unwrap()
    }
}

/// Families with known smoothness parameters.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FamilyTag {
    /// `K_{2,t}`, `t >= 2`
    K2t { t: u64 },
    /// `K_{3,3}`
    K33,
    /// `{K_{2,t}, B_t}`, `t >= 2`
    K2tBook { t: u64 },
}

/// Known `(alpha, beta)` pairs with the relative density normalized so that
/// `z(n, F) ~ rho (n/2)^alpha`, i.e. `rho = (t - s + 1)^(1/s)`. The
/// expansion constant `C` is a configured input.
pub fn smoothness_registry(tag: FamilyTag, c: f64) -> Result<SmoothnessParams> {
    match tag {
        FamilyTag::K2t { t } => {
            if t < 2 {
                return Err(Error::Domain("K_{2,t} smoothness needs t >= 2".into()));
            }
            SmoothnessParams::new(
                Rational64::new(3, 2),
                Rational64::new(4, 3),
                ((t - 1) as f64).sqrt(),
                c,
            )
        }
        FamilyTag::K33 => {
            SmoothnessParams::new(Rational64::new(5, 3), Rational64::new(4, 3), 1.0, c)
        }
        FamilyTag::K2tBook { t } => {
            if t < 2 {
                return Err(Error::Domain(
                    "{K_{2,t}, B_t} smoothness needs t >= 2".into(),
                ));
            }
            SmoothnessParams::new(Rational64::new(3, 2), Rational64::one(), 1.0, c)
        }
    }
}

/// The `K_{s,t}` bipartite upper bound
/// `(t-s+1)^(1/s) m n^(1-1/s) + s m + s n^(2-2/s)` for `m <= n`.
pub fn furedi_kst_bound(m: u64, n: u64, s: u64, t: u64) -> Result<f64> {
    if s < 2 || s > t {
        return Err(Error::Domain(format!("need 2 <= s <= t, got ({s}, {t})")));
    }
    if m > n {
        return Err(Error::Domain(format!("need m <= n, got ({m}, {n})")));
    }
    let (m, n, s, t) = (m as f64, n as f64, s as f64, t as f64);
    Ok((t - s + 1.0).powf(1.0 / s) * m * n.powf(1.0 - 1.0 / s) + s * m + s * n.powf(2.0 - 2.0 / s))
}

/// The `{K_{2,t}, B_t}` bipartite upper bound `m sqrt(n) + 4 t^2 n` for
/// `m <= n`, `t >= 2`.
pub fn book_family_bound(m: u64, n: u64, t: u64) -> Result<f64> {
    if m > n {
        return Err(Error::Domain(format!("need m <= n, got ({m}, {n})")));
    }
    if t < 2 {
        return Err(Error::Domain("book family bound needs t >= 2".into()));
    }
    let (m, n, t) = (m as f64, n as f64, t as f64);
    Ok(m * n.sqrt() + 4.0 * t * t * n)
}

/// Expansion-depth and odd-cycle-length thresholds derived from the
/// smoothness exponents: the layer depth
/// `floor(log_beta((2 beta - beta^2)(alpha - 1) / (alpha - beta)))` for
/// `beta > 1` (or `floor(1 / (alpha - 1))` at `beta = 1`), and the least
/// embeddable odd cycle length `2 * depth + 5`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ExpansionThresholds {
    pub depth: u64,
    pub min_odd_cycle: u64,
}

/// Shorter odd cycles (length >= 5) are reachable for `K_{s,t}` families
/// through the common-neighborhood expansion route; this threshold is kept
/// separate from the generic one and never merged with it.
pub const KST_MIN_ODD_CYCLE: u64 = 5;

pub fn expansion_thresholds(params: &SmoothnessParams) -> Result<ExpansionThresholds> {
    let alpha = big_rational(params.alpha);
    let beta = big_rational(params.beta);
    let one = BigRational::one();
    let depth: u64 = if beta == one {
        // floor(1 / (alpha - 1))
        let inv = one / (&alpha - BigRational::one());
        inv.floor()
            .to_integer()
            .to_u64()
            .ok_or_else(|| Error::Domain("1/(alpha-1) out of range".into()))?
    } else {
        // largest j with beta^j <= (2 beta - beta^2)(alpha - 1)/(alpha - beta),
        // by exact comparison of rational powers
        let arg = (BigRational::from_integer(2.into()) * &beta - &beta * &beta)
            * (&alpha - BigRational::one())
            / (&alpha - &beta);
        if arg < one {
            return Err(Error::Internal(
                "expansion-depth argument below 1; unreachable for 1 <= beta < alpha < 2".into(),
            ));
        }
        let mut j = 0u64;
        let mut power = beta.clone();
        while power <= arg {
            j += 1;
            power *= &beta;
            if j > 10_000 {
                return Err(Error::Domain(
                    "expansion depth diverges; beta too close to alpha".into(),
                ));
            }
        }
        j
    };
    Ok(ExpansionThresholds {
        depth,
        min_odd_cycle: 2 * depth + 5,
    })
}

fn big_rational(r: Rational64) -> BigRational {
    BigRational::new(BigInt::from(*r.numer()), BigInt::from(*r.denom()))
}

/// The neighborhood growth exponent `f(i, beta) = 1/(beta-1) +
/// (beta^2 - 2 beta) / ((beta-1) beta^i)`, with the limit value `i` at
/// `beta = 1`. Satisfies `f(1, beta) = 1` and `f(i+1) = (f(i) + 1)/beta`.
pub fn growth_exponent(i: u64, beta: Rational64) -> Result<BigRational> {
    if i < 1 {
        return Err(Error::Domain("growth exponent needs i >= 1".into()));
    }
    if beta < Rational64::one() {
        return Err(Error::Domain("growth exponent needs beta >= 1".into()));
    }
    let b = big_rational(beta);
    let one = BigRational::one();
    if b == one {
        return Ok(BigRational::from_integer(i.into()));
    }
    let mut b_pow_i = BigRational::one();
    for _ in 0..i {
        b_pow_i *= &b;
    }
    let num = &b * &b - BigRational::from_integer(2.into()) * &b;
    Ok(&one / (&b - &one) + num / ((&b - &one) * b_pow_i))
}

/// Which side of the bipartite pair is smaller.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExpansionCase {
    USmaller,
    ULarger,
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct ExpansionBound {
    /// lower bound on the size of the neighborhood side, when applicable
    pub value: f64,
    pub applicable: bool,
    /// the threshold `(2C/delta)^(1/(alpha-beta))` that `n` must reach
    pub n_threshold: f64,
}

/// Minimum-degree expansion in an `F`-free bipartite pair: with every
/// vertex of `U` having degree at least `delta n^(alpha-1)` and
/// `gamma = delta / 2C`,
/// `|V| >= min(gamma^(1/beta) |U|^(1/beta) n^((alpha-1)/beta), gamma^(1/(alpha-1)) n)`
/// when `|U| < |V|`, and
/// `|V| >= max(gamma n^(alpha-1) |U|^(2-alpha), gamma^(1/(alpha-1)) n)`
/// otherwise. Reported as inapplicable when `n` is below threshold.
pub fn smooth_expansion_bound(
    params: &SmoothnessParams,
    delta: f64,
    size_u: u64,
    n: u64,
    case: ExpansionCase,
) -> Result<ExpansionBound> {
    if delta <= 0.0 {
        return Err(Error::Domain("delta must be positive".into()));
    }
    let alpha = params.alpha_f64();
    let beta = params.beta_f64();
    let gamma = delta / (2.0 * params.c);
    let n_threshold = (1.0 / gamma).powf(1.0 / (alpha - beta));
    let nf = n as f64;
    let uf = size_u as f64;
    if nf < n_threshold {
        return Ok(ExpansionBound {
            value: f64::NAN,
            applicable: false,
            n_threshold,
        });
    }
    let linear = gamma.powf(1.0 / (alpha - 1.0)) * nf;
    let value = match case {
        ExpansionCase::USmaller => {
            (gamma.powf(1.0 / beta) * uf.powf(1.0 / beta) * nf.powf((alpha - 1.0) / beta))
                .min(linear)
        }
        ExpansionCase::ULarger => (gamma * nf.powf(alpha - 1.0) * uf.powf(2.0 - alpha)).max(linear),
    };
    Ok(ExpansionBound {
        value,
        applicable: true,
        n_threshold,
    })
}

/// Common-neighborhood expansion bound for `K_{s,t}`-free graphs:
/// `(rho_x / (t-1))^(1/(s-1)) * (rho_y |Y| - s n^(1/s))`.
pub fn kst_expansion_bound(
    rho_x: f64,
    rho_y: f64,
    size_y: u64,
    n: u64,
    s: u64,
    t: u64,
) -> Result<f64> {
    if s < 2 || s > t {
        return Err(Error::Domain(format!("need 2 <= s <= t, got ({s}, {t})")));
    }
    if t < 2 {
        return Err(Error::Domain("t must be >= 2".into()));
    }
    let nf = n as f64;
    Ok((rho_x / (t - 1) as f64).powf(1.0 / (s - 1) as f64)
        * (rho_y * size_y as f64 - s as f64 * nf.powf(1.0 / s as f64)))
}

#[derive(Clone, Debug, Serialize)]
pub struct KstExpansionReport {
    pub rho_x: f64,
    pub rho_y: f64,
    pub neighborhood_size: u64,
    pub bound: f64,
    /// bound <= 0 makes the check vacuous
    pub vacuous: bool,
    pub holds: bool,
    pub hypothesis_failures: Vec<String>,
}

/// Instantiates the expansion bound on a concrete graph: `X` inside the
/// neighborhood of `v`, `Y` disjoint from `X + v`, with the density
/// hypotheses checked explicitly. Violated hypotheses are reported by
/// name; the bound is then not asserted.
#[allow(clippy::too_many_arguments)]
pub fn kst_expansion_check(
    g: &Graph,
    v: usize,
    x: &[usize],
    y: &[usize],
    rho_x: f64,
    rho_y: f64,
    s: u64,
    t: u64,
) -> Result<KstExpansionReport> {
    if detect::has_kst(g, s as usize, t as usize)?.is_some() {
        return Err(Error::Domain(format!(
            "graph contains K_{{{s},{t}}}; check is void"
        )));
    }
    let mut failures = Vec::new();
    let n = g.n() as f64;
    if x.iter().any(|&u| !g.has_edge(v, u)) {
        failures.push("X is not contained in N(v)".to_string());
    }
    if x.contains(&v) || y.contains(&v) || y.iter().any(|u| x.contains(u)) {
        failures.push("Y must be disjoint from X and v".to_string());
    }
    if (x.len() as f64) < rho_x * n.powf(1.0 - 1.0 / s as f64) {
        failures.push(format!(
            "|X| = {} below rho_x n^(1-1/s) = {}",
            x.len(),
            rho_x * n.powf(1.0 - 1.0 / s as f64)
        ));
    }
    let ymask = g.mask_of(y)?;
    let need = rho_y * y.len() as f64 * n.powf(-1.0 / s as f64);
    for &u in x {
        let dy: usize = g
            .row(u)
            .iter()
            .zip(&ymask)
            .map(|(a, b)| (a & b).count_ones() as usize)
            .sum();
        if (dy as f64) < need {
            failures.push(format!("vertex {u} has {dy} neighbors in Y, below {need}"));
            break;
        }
    }
    // |N(X) ∩ Y|
    let mut acc = vec![0u64; ymask.len()];
    for &u in x {
        for (a, r) in acc.iter_mut().zip(g.row(u)) {
            *a |= r;
        }
    }
    let nxy: u64 = acc
        .iter()
        .zip(&ymask)
        .map(|(a, b)| (a & b).count_ones() as u64)
        .sum();
    let bound = kst_expansion_bound(rho_x, rho_y, y.len() as u64, g.n() as u64, s, t)?;
    let vacuous = bound <= 0.0;
    let holds = failures.is_empty() && (vacuous || nxy as f64 >= bound - 1e-9);
    Ok(KstExpansionReport {
        rho_x,
        rho_y,
        neighborhood_size: nxy,
        bound,
        vacuous,
        holds,
        hypothesis_failures: failures,
    })
}

/// The 4-cycle supersaturation lower bound for a bipartite graph with
/// parts of sizes `m`, `n` and `e` edges:
/// `(e^2 (e-n)^2 - e (e-n) n m (m-1)) / (4 n^2 m (m-1))`, valid when
/// `e (e - n) >= n m (m-1) / 2`. Returns `None` when the precondition
/// fails. Exact rational arithmetic throughout.
pub fn c4_lower_bound(m: u64, n: u64, e: u64) -> Result<Option<BigRational>> {
    if m < 2 || n < 1 {
        return Err(Error::Domain("c4 lower bound needs m >= 2, n >= 1".into()));
    }
    let (m, n, e) = (BigInt::from(m), BigInt::from(n), BigInt::from(e));
    let ee = &e * (&e - &n); // may be negative
    let mm = &m * (&m - BigInt::one());
    // precondition e(e-n) >= n m (m-1) / 2, compared without division
    if BigInt::from(2) * &ee < &n * &mm {
        return Ok(None);
    }
    let num = &ee * &ee - &ee * &n * &mm;
    let den = BigInt::from(4) * &n * &n * &mm;
    Ok(Some(BigRational::new(num, den)))
}

/// Outcome of the stability dichotomy: a vertex in many triangles, or a
/// near-bipartition.
#[derive(Clone, Debug, Serialize)]
pub enum StabilityOutcome {
    TriangleRich {
        vertex: usize,
        /// triangles through the vertex, re-verified to be >= gamma n^2
        triangles: u64,
    },
    Bipartition {
        side_x: Vec<usize>,
        side_y: Vec<usize>,
        /// non-crossing edges, re-verified to be <= 9 gamma^(1/4) n^2
        non_crossing: u64,
    },
}

/// Constructive stability dichotomy for graphs with
/// `e >= (1/4 - gamma) n^2`, `0 < gamma < 1/8`: either some vertex lies in
/// at least `gamma n^2` triangles, or deleting at most `9 gamma^(1/4) n^2`
/// edges leaves a bipartite graph.
///
/// The procedure follows the construction exactly: `u` of maximum degree,
/// `X = N(u)`; if `e(X)` is large, `u` is triangle-rich; else if `e(Y)` is
/// small, `(X, Y)` is the bipartition; else the vertex of `X` with the
/// most neighbors in `Y` is triangle-rich. The leftover branch contradicts
/// the edge hypothesis, so reaching it is a hard internal error with a
/// state dump, never a silent fallback.
pub fn tri_stab(g: &Graph, gamma: f64) -> Result<StabilityOutcome> {
    if !(gamma > 0.0 && gamma < 0.125) {
        return Err(Error::Domain(format!("gamma = {gamma} outside (0, 1/8)")));
    }
    let n = g.n();
    let gamma_rat =
        BigRational::from_f64(gamma).ok_or_else(|| Error::Domain("gamma is not finite".into()))?;
    let n2 = BigInt::from(n) * BigInt::from(n);
    let gamma_n2 = &gamma_rat * BigRational::from_integer(n2.clone());
    let e_total = BigRational::from_integer(BigInt::from(g.edge_count()));
    let quarter = BigRational::new(BigInt::one(), BigInt::from(4));
    if e_total < (&quarter - &gamma_rat) * BigRational::from_integer(n2.clone()) {
        return Err(Error::Domain(format!(
            "edge count {} below (1/4 - gamma) n^2 = {}",
            g.edge_count(),
            (quarter - gamma_rat) * BigRational::from_integer(n2)
        )));
    }

    let u = (0..n)
        .max_by_key(|&v| (g.degree(v), std::cmp::Reverse(v)))
        .unwrap();
    let x: Vec<usize> = g.neighbors(u).collect();
    let y: Vec<usize> = (0..n)
        .filter(|&v| !g.has_edge(u, v) && v != u)
        .chain([u])
        .collect();
    let mut y = y;
    y.sort_unstable();

    let e_x = g.edges_within(&x)? as u64;
    if BigRational::from_integer(BigInt::from(e_x)) >= gamma_n2 {
        let triangles = detect::triangles_through(g, u);
        if BigRational::from_integer(BigInt::from(triangles)) < gamma_n2 {
            return Err(Error::Internal(
                "triangle-rich outcome failed re-verification".into(),
            ));
        }
        return Ok(StabilityOutcome::TriangleRich {
            vertex: u,
            triangles,
        });
    }

    let e_y = g.edges_within(&y)? as u64;
    // e(Y) <= (9 gamma^(1/4) - gamma) n^2, compared via fourth powers:
    // (e_Y + gamma n^2)^4 <= 9^4 gamma n^8
    let lhs = BigRational::from_integer(BigInt::from(e_y)) + &gamma_n2;
    let n8 = BigRational::from_integer(BigInt::from(n).pow(8));
    let rhs4 = BigRational::from_integer(BigInt::from(9u32).pow(4)) * &gamma_rat * n8;
    let lhs4 = &lhs * &lhs * &lhs * &lhs;
    if lhs4 <= rhs4 {
        let non_crossing = e_x + e_y;
        // re-verify: non_crossing <= 9 gamma^(1/4) n^2
        let nc = BigRational::from_integer(BigInt::from(non_crossing));
        let nc4 = &nc * &nc * &nc * &nc;
        let cap4 = BigRational::from_integer(BigInt::from(9u32).pow(4))
            * &gamma_rat
            * BigRational::from_integer(BigInt::from(n).pow(8));
        if nc4 > cap4 {
            return Err(Error::Internal(
                "bipartition outcome failed re-verification".into(),
            ));
        }
        return Ok(StabilityOutcome::Bipartition {
            side_x: x,
            side_y: y,
            non_crossing,
        });
    }

    let ymask = g.mask_of(&y)?;
    let v_star = x
        .iter()
        .copied()
        .max_by_key(|&w| {
            let dy: usize = g
                .row(w)
                .iter()
                .zip(&ymask)
                .map(|(a, b)| (a & b).count_ones() as usize)
                .sum();
            (dy, std::cmp::Reverse(w))
        })
        .ok_or_else(|| Error::Internal("max-degree vertex has empty neighborhood".into()))?;
    let z: Vec<usize> = g
        .neighbors(v_star)
        .filter(|&w| y.binary_search(&w).is_ok())
        .collect();
    let e_z = g.edges_within(&z)? as u64;
    if BigRational::from_integer(BigInt::from(e_z)) >= gamma_n2 {
        let triangles = detect::triangles_through(g, v_star);
        if BigRational::from_integer(BigInt::from(triangles)) < gamma_n2 {
            return Err(Error::Internal(
                "triangle-rich outcome failed re-verification".into(),
            ));
        }
        return Ok(StabilityOutcome::TriangleRich {
            vertex: v_star,
            triangles,
        });
    }

    Err(Error::Internal(format!(
        "stability dichotomy reached its impossible branch: n = {n}, e = {}, |X| = {}, e(X) = {e_x}, e(Y) = {e_y}, |Z| = {}, e(Z) = {e_z}, gamma = {gamma}",
        g.edge_count(),
        x.len(),
        z.len()
    )))
}

#[derive(Clone, Debug, Serialize)]
pub struct MaxCutResult {
    /// side assignment per vertex
    pub sides: Vec<bool>,
    pub cut: u64,
    pub moves: u64,
}

/// Local max-cut improvement: repeatedly moves any vertex with strictly
/// more neighbors on its own side to the other side (ascending vertex
/// scan). The cut grows by at least 1 per move, so this terminates within
/// `e(G)` moves; afterwards every vertex has at least half its neighbors
/// across the cut.
pub fn local_max_cut(g: &Graph, initial: &[bool]) -> Result<MaxCutResult> {
    if initial.len() != g.n() {
        return Err(Error::Domain("initial bipartition has wrong length".into()));
    }
    let mut sides = initial.to_vec();
    let mut moves = 0u64;
    loop {
        let mut changed = false;
        for v in 0..g.n() {
            let mut same = 0usize;
            let mut cross = 0usize;
            for w in g.neighbors(v) {
                if sides[w] == sides[v] {
                    same += 1;
                } else {
                    cross += 1;
                }
            }
            if same > cross {
                sides[v] = !sides[v];
                moves += 1;
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    let cut = g.edges().filter(|&(u, v)| sides[u] != sides[v]).count() as u64;
    Ok(MaxCutResult { sides, cut, moves })
}

pub fn cut_size(g: &Graph, sides: &[bool]) -> u64 {
    g.edges().filter(|&(u, v)| sides[u] != sides[v]).count() as u64
}

/// One pyramid level: reached vertices paired with their parents.
type PyramidLevel = Vec<(usize, usize)>;

/// Grows a neighborhood pyramid from `v` through the layers and returns,
/// per layer, the reached set with parent pointers; finally the reached
/// subset of `target`.
fn grow_pyramid(
    g: &Graph,
    v: usize,
    layers: &[Vec<usize>],
    target: &[usize],
    dead: &[bool],
) -> Option<(Vec<PyramidLevel>, PyramidLevel)> {
    // each level is a list of (vertex, parent); level 0 parent is v
    let mut levels: Vec<Vec<(usize, usize)>> = Vec::with_capacity(layers.len());
    let mut frontier: Vec<usize> = vec![v];
    for layer in layers {
        let mut next = Vec::new();
        let mut seen = vec![false; g.n()];
        for &w in layer {
            if dead[w] || seen[w] {
                continue;
            }
            for &f in &frontier {
                if g.has_edge(f, w) {
                    seen[w] = true;
                    next.push((w, f));
                    break;
                }
            }
        }
        if next.is_empty() {
            return None;
        }
        frontier = next.iter().map(|&(w, _)| w).collect();
        levels.push(next);
    }
    let mut last = Vec::new();
    let mut seen = vec![false; g.n()];
    for &w in target {
        if dead[w] || seen[w] {
            continue;
        }
        for &f in &frontier {
            if g.has_edge(f, w) {
                seen[w] = true;
                last.push((w, f));
                break;
            }
        }
    }
    if last.is_empty() {
        return None;
    }
    Some((levels, last))
}

fn trace_arm(levels: &[PyramidLevel], end: (usize, usize), v: usize) -> Vec<usize> {
    // returns [v, d_1, ..., d_l, end.0]
    let mut arm = vec![end.0];
    let mut parent = end.1;
    for level in levels.iter().rev() {
        if parent == v {
            break;
        }
        let &(w, p) = level
            .iter()
            .find(|&&(w, _)| w == parent)
            .expect("parent recorded");
        arm.push(w);
        parent = p;
    }
    arm.push(v);
    arm.reverse();
    arm
}

/// Looks for a verified odd cycle of length `k` through `v`: two
/// neighborhood pyramids grown through `layers` into `b` and `b_prime`,
/// joined by a path of length `k - 2 len(layers) - 2` inside the bipartite
/// graph between `b` and `b_prime`. The second pyramid is grown only after
/// the first arm's interior vertices are removed, which settles the
/// arm-disjointness question by construction. Returns the cycle's vertex
/// list in order, or `None`.
pub fn find_odd_cycle_via_expansion(
    g: &Graph,
    v: usize,
    layers: &[Vec<usize>],
    b: &[usize],
    b_prime: &[usize],
    k: usize,
) -> Result<Option<Vec<usize>>> {
    let ell = layers.len();
    if k.is_multiple_of(2) || k < 2 * ell + 3 {
        return Err(Error::Domain(format!(
            "cycle length {k} must be odd and at least 2 * {ell} + 3"
        )));
    }
    // layers, b, b_prime must be pairwise disjoint and exclude v
    let mut seen = vec![false; g.n()];
    seen[v] = true;
    for set in layers.iter().chain([&b.to_vec(), &b_prime.to_vec()]) {
        for &w in set.iter() {
            if w >= g.n() || seen[w] {
                return Err(Error::Domain(
                    "layer sets must be pairwise disjoint and exclude the start vertex".into(),
                ));
            }
            seen[w] = true;
        }
    }
    let path_len = k - 2 * ell - 2;
    let dead = vec![false; g.n()];
    let Some((levels1, reach_b)) = grow_pyramid(g, v, layers, b, &dead) else {
        return Ok(None);
    };
    let in_b: Vec<bool> = {
        let mut m = vec![false; g.n()];
        for &w in b {
            m[w] = true;
        }
        m
    };
    let in_bp: Vec<bool> = {
        let mut m = vec![false; g.n()];
        for &w in b_prime {
            m[w] = true;
        }
        m
    };
    for &(b1, p1) in &reach_b {
        let arm1 = trace_arm(&levels1, (b1, p1), v);
        // remove the first arm's interior before growing the second pyramid
        let mut dead2 = vec![false; g.n()];
        for &w in &arm1[1..arm1.len() - 1] {
            dead2[w] = true;
        }
        let Some((levels2, reach_bp)) = grow_pyramid(g, v, layers, b_prime, &dead2) else {
            continue;
        };
        let targets: Vec<bool> = {
            let mut m = vec![false; g.n()];
            for &(w, _) in &reach_bp {
                m[w] = true;
            }
            m
        };
        // path of exactly `path_len` edges from b1, alternating b'/b,
        // ending on a reached b' vertex
        let mut path = vec![b1];
        let mut used = vec![false; g.n()];
        used[b1] = true;
        if let Some(end) = path_search(g, &mut path, &mut used, path_len, &in_b, &in_bp, &targets) {
            let arm2 = trace_arm(
                &levels2,
                *reach_bp.iter().find(|&&(w, _)| w == end).unwrap(),
                v,
            );
            // cycle: v, arm1 interior, b1, path interior, b2, arm2 interior reversed
            let mut cycle = arm1.clone();
            cycle.extend(path[1..].iter().copied());
            let mut tail: Vec<usize> = arm2[1..arm2.len() - 1].to_vec();
            tail.reverse();
            cycle.extend(tail);
            let ok = cycle.len() == k && {
                let mut s = cycle.clone();
                s.sort_unstable();
                s.windows(2).all(|w| w[0] != w[1])
                    && (0..k).all(|i| g.has_edge(cycle[i], cycle[(i + 1) % k]))
                    && cycle.contains(&v)
            };
            if !ok {
                return Err(Error::Internal(
                    "expansion cycle failed verification".into(),
                ));
            }
            return Ok(Some(cycle));
        }
    }
    Ok(None)
}

fn path_search(
    g: &Graph,
    path: &mut Vec<usize>,
    used: &mut Vec<bool>,
    remaining: usize,
    in_b: &[bool],
    in_bp: &[bool],
    targets: &[bool],
) -> Option<usize> {
    let cur = *path.last().unwrap();
    if remaining == 0 {
        return if targets[cur] { Some(cur) } else { None };
    }
    // odd steps land in b', even steps back in b
    let want_bp = remaining % 2 == 1;
    for w in g.neighbors(cur) {
        if used[w] {
            continue;
        }
        let ok_side = if want_bp { in_bp[w] } else { in_b[w] };
        if !ok_side {
            continue;
        }
        if remaining == 1 && !targets[w] {
            continue;
        }
        path.push(w);
        used[w] = true;
        if let Some(end) = path_search(g, path, used, remaining - 1, in_b, in_bp, targets) {
            return Some(end);
        }
        used[w] = false;
        path.pop();
    }
    None
}

/// Density-transfer diagnostic: solves
/// `e(G) = (mu^(alpha-1) + gamma) rho p n^2 / 2` for `mu` and reports the
/// cluster-graph edge count against `(mu - gamma) t^2 / 2`, plus the
/// per-cluster degree comparison. Purely diagnostic: the underlying
/// statement is asymptotic, so nothing here is asserted.
#[derive(Clone, Debug, Serialize)]
pub struct TransferReport {
    pub mu: Option<f64>,
    pub vacuous: bool,
    pub cluster_edges: usize,
    pub cluster_edge_threshold: Option<f64>,
    pub part1_holds: Option<bool>,
    pub per_cluster: Vec<ClusterTransferRow>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ClusterTransferRow {
    pub cluster: usize,
    pub incident_edges: u64,
    pub mu_i: Option<f64>,
    pub degree: usize,
    pub degree_threshold: Option<f64>,
    pub irregular_pairs: usize,
    pub irregular_allowance: f64,
}

pub fn transfer_report(
    g: &Graph,
    partition: &Partition,
    cls: &PairClassification,
    cluster: &ClusterGraph,
    params: &SmoothnessParams,
    gamma: f64,
) -> Result<TransferReport> {
    if params.rho <= 0.0 {
        return Err(Error::Domain("transfer diagnostic needs rho > 0".into()));
    }
    let n = g.n() as f64;
    let p = partition.p;
    let t = cluster.k as f64;
    let alpha = params.alpha_f64();
    let e = g.edge_count() as f64;
    let base = 2.0 * e / (params.rho * p * n * n) - gamma;
    let (mu, vacuous) = if base > 0.0 {
        (Some(base.powf(1.0 / (alpha - 1.0))), false)
    } else {
        (None, true)
    };
    let threshold = mu.map(|m| (m - gamma) * t * t / 2.0);
    let part1_holds = threshold.map(|th| cluster.edge_count() as f64 >= th);
    let degrees = cluster.degrees();
    let mut per_cluster = Vec::new();
    for (i, part) in partition.parts.iter().enumerate() {
        let within = g.edges_within(part)? as u64;
        let degsum: usize = part.iter().map(|&v| g.degree(v)).sum();
        let incident = degsum as u64 - within;
        let base_i =
            incident as f64 / (params.rho * n.powf(alpha - 1.0) * part.len() as f64) - gamma;
        let mu_i = if base_i > 0.0 {
            Some(base_i.powf(1.0 / (alpha - 1.0)))
        } else {
            None
        };
        let irregular = (0..partition.k())
            .filter(|&j| j != i && matches!(cls.get(i, j).status, PairStatus::Irregular { .. }))
            .count();
        per_cluster.push(ClusterTransferRow {
            cluster: i,
            incident_edges: incident,
            mu_i,
            degree: degrees[i],
            degree_threshold: mu_i.map(|m| (m - gamma) * t),
            irregular_pairs: irregular,
            irregular_allowance: gamma * t,
        });
    }
    Ok(TransferReport {
        mu,
        vacuous,
        cluster_edges: cluster.edge_count(),
        cluster_edge_threshold: threshold,
        part1_holds,
        per_cluster,
    })
}
