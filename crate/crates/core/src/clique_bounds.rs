//! The clique linear program on the Grassmann scheme, its closed-form
//! optimum under the single-variable choice `ξ_k = ξ δ_{k,1}`, and an exact
//! maximum-clique search that tests the bound.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

use crate::error::{param, Error, Result};
use crate::exact_q::{rat_string, FieldOrder};
use crate::scheme::SchemeInstance;
use crate::spectra::EigenData;

type Rat = BigRational;

fn rat(x: impl Into<BigInt>) -> Rat {
    Rat::from_integer(x.into())
}

/// Finitely supported weights on the points of a scheme.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct WeightVector {
    pub alpha: BTreeMap<usize, Rat>,
}

impl WeightVector {
    /// Indicator of a set of point indices.
    pub fn indicator(points: impl IntoIterator<Item = usize>) -> Self {
        WeightVector {
            alpha: points.into_iter().map(|p| (p, Rat::one())).collect(),
        }
    }

    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.alpha.iter().filter(|(_, w)| !w.is_zero()).map(|(&p, _)| p)
    }

    fn is_nonnegative(&self) -> bool {
        self.alpha.values().all(|w| !w.is_negative())
    }

    fn is_zero(&self) -> bool {
        self.alpha.values().all(Zero::is_zero)
    }
}

/// Degree of class `i`, read from the first point.
fn degree(scheme: &SchemeInstance, i: usize) -> usize {
    (0..scheme.len()).filter(|&y| scheme.class(0, y) == i).count()
}

/// `C_i(α) = v_i^{-1} αᵀ A_i α`.
pub fn c_coeff(alpha: &WeightVector, scheme: &SchemeInstance, i: usize) -> Result<Rat> {
    if i > scheme.d() {
        return param(format!("class {i} exceeds d = {}", scheme.d()));
    }
    let mut form = Rat::zero();
    for (&x, wx) in &alpha.alpha {
        for (&y, wy) in &alpha.alpha {
            if x >= scheme.len() || y >= scheme.len() {
                return param(format!("point index {} out of range", x.max(y)));
            }
            if scheme.class(x, y) == i {
                form += wx * wy;
            }
        }
    }
    let v = degree(scheme, i);
    if v == 0 {
        if form.is_zero() {
            return Ok(form);
        }
        return Err(Error::Degenerate(format!("class {i} is empty but αᵀA_iα = {}", rat_string(&form))));
    }
    Ok(form / rat(v))
}

/// Whether a nonnegative, nonzero `α` is an `M`-clique: `C_j(α) = 0` for
/// every `j ∉ M` and `C_i(α) >= 0` for every `i`.
pub fn is_m_clique(alpha: &WeightVector, scheme: &SchemeInstance, m: &BTreeSet<usize>) -> Result<bool> {
    if !m.contains(&0) {
        return param("M must contain 0");
    }
    if !alpha.is_nonnegative() || alpha.is_zero() {
        return param("weights must be nonnegative and not all zero");
    }
    for i in 0..=scheme.d() {
        let c = c_coeff(alpha, scheme, i)?;
        if c.is_negative() || (!m.contains(&i) && !c.is_zero()) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Whether `α` vanishes outside the `R_s`-neighbourhood of `center`.
pub fn is_unicoloured(alpha: &WeightVector, scheme: &SchemeInstance, center: usize, s: usize) -> bool {
    alpha.support().all(|x| scheme.class(x, center) == s)
}

/// `ĉ_0(α) = ⟨α, 1⟩² / ⟨α, α⟩`.
pub fn c_hat_0(alpha: &WeightVector) -> Result<Rat> {
    let sum: Rat = alpha.alpha.values().sum();
    let sq: Rat = alpha.alpha.values().map(|w| w * w).sum();
    if sq.is_zero() {
        return param("ĉ_0 of the zero vector");
    }
    Ok(&sum * &sum / sq)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    #[default]
    Max,
    Min,
}

/// `f' = 1 + Σ_{k∈K} (1 − b_k) ξ_k` subject to `ξ >= 0` and
/// `Σ_k (P_i(k) − b_k v_i) ξ_k <= v_i` for `i ∈ M \ {0}`, with
/// `b_k = (P_s(k) / v_s)²` and `K = {k : m_k > 1}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LpProblem {
    pub k_set: Vec<usize>,
    /// `b_k` for every class `k`.
    pub b: Vec<Rat>,
    pub objective: Vec<Rat>,
    /// `(i, row, v_i)`.
    pub constraints: Vec<(usize, Vec<Rat>, Rat)>,
}

pub fn build_lp(eigen: &EigenData, m: &BTreeSet<usize>, s: usize) -> Result<LpProblem> {
    let e = eigen.classes();
    if s > e {
        return param(format!("colour s = {s} exceeds the number of classes {e}"));
    }
    if !m.contains(&0) || m.iter().any(|&i| i > e) {
        return param(format!("M must contain 0 and lie in 0..={e}"));
    }
    let vs = rat(eigen.v[s].clone());
    let b: Vec<Rat> = (0..=e)
        .map(|k| {
            let x = rat(eigen.p[s][k].clone()) / &vs;
            &x * &x
        })
        .collect();
    let k_set: Vec<usize> = (0..=e).filter(|&k| eigen.m[k] > BigInt::one()).collect();
    let objective = k_set.iter().map(|&k| Rat::one() - &b[k]).collect();
    let constraints = m
        .iter()
        .filter(|&&i| i != 0)
        .map(|&i| {
            let vi = rat(eigen.v[i].clone());
            let row = k_set.iter().map(|&k| rat(eigen.p[i][k].clone()) - &b[k] * &vi).collect();
            (i, row, vi)
        })
        .collect();
    Ok(LpProblem { k_set, b, objective, constraints })
}

impl LpProblem {
    /// The problem in the single variable `ξ_k`, all others fixed at 0.
    pub fn restrict_to(&self, k: usize) -> Result<LpProblem> {
        let Some(pos) = self.k_set.iter().position(|&x| x == k) else {
            return param(format!("class {k} is not in K = {:?}", self.k_set));
        };
        Ok(LpProblem {
            k_set: vec![k],
            b: self.b.clone(),
            objective: vec![self.objective[pos].clone()],
            constraints: self
                .constraints
                .iter()
                .map(|(i, row, rhs)| (*i, vec![row[pos].clone()], rhs.clone()))
                .collect(),
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum LpStatus {
    Optimal,
    Unbounded,
    Infeasible,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LpSolution {
    pub status: LpStatus,
    /// `f'` at the optimum; `None` unless optimal.
    pub value: Option<Rat>,
    pub xi: BTreeMap<usize, Rat>,
    /// Improving recession direction when unbounded.
    pub ray: Option<BTreeMap<usize, Rat>>,
}

impl LpSolution {
    pub fn to_json(&self) -> Value {
        let m = |x: &BTreeMap<usize, Rat>| x.iter().map(|(k, v)| (k.to_string(), json!(rat_string(v)))).collect::<serde_json::Map<_, _>>();
        json!({
            "status": self.status,
            "value": self.value.as_ref().map(rat_string),
            "xi": m(&self.xi),
            "ray": self.ray.as_ref().map(m),
        })
    }
}

/// Solve `G x = h` for square `G` by exact elimination; `None` if singular.
fn solve_square(mut g: Vec<Vec<Rat>>, mut h: Vec<Rat>) -> Option<Vec<Rat>> {
    let n = h.len();
    for c in 0..n {
        let p = (c..n).find(|&r| !g[r][c].is_zero())?;
        g.swap(c, p);
        h.swap(c, p);
        let inv = Rat::one() / &g[c][c];
        for r in 0..n {
            if r != c && !g[r][c].is_zero() {
                let f = &g[r][c] * &inv;
                for j in c..n {
                    let t = &f * &g[c][j];
                    g[r][j] -= t;
                }
                let t = &f * &h[c];
                h[r] -= t;
            }
        }
    }
    Some((0..n).map(|i| &h[i] / &g[i][i]).collect())
}

/// Null vector of a `(n−1) × n` matrix of rank `n − 1`.
fn null_vector(rows: &[Vec<Rat>], n: usize) -> Option<Vec<Rat>> {
    // Try fixing each coordinate to 1 and solving for the rest.
    for fixed in 0..n {
        let g: Vec<Vec<Rat>> = rows
            .iter()
            .map(|r| (0..n).filter(|&j| j != fixed).map(|j| r[j].clone()).collect())
            .collect();
        let h: Vec<Rat> = rows.iter().map(|r| -r[fixed].clone()).collect();
        if let Some(x) = solve_square(g, h) {
            let mut out = Vec::with_capacity(n);
            let mut it = x.into_iter();
            for j in 0..n {
                out.push(if j == fixed { Rat::one() } else { it.next().unwrap() });
            }
            return Some(out);
        }
    }
    None
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    go(0, n, k, &mut cur, &mut out);
    out
}

fn dot(a: &[Rat], b: &[Rat]) -> Rat {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Exact optimum by enumerating the vertices and extreme rays of
/// `{ξ >= 0, Aξ <= b}`. The region is pointed (it lies in the nonnegative
/// orthant), so an optimum exists iff no extreme ray improves the objective.
pub fn solve_lp(problem: &LpProblem, direction: Direction) -> LpSolution {
    let n = problem.k_set.len();
    let better = |a: &Rat, b: &Rat| match direction {
        Direction::Max => a > b,
        Direction::Min => a < b,
    };
    // All inequalities as g·x <= h: the constraints, then -x_k <= 0.
    let mut g: Vec<Vec<Rat>> = problem.constraints.iter().map(|(_, r, _)| r.clone()).collect();
    let mut h: Vec<Rat> = problem.constraints.iter().map(|(_, _, v)| v.clone()).collect();
    for k in 0..n {
        g.push((0..n).map(|j| if j == k { -Rat::one() } else { Rat::zero() }).collect());
        h.push(Rat::zero());
    }
    let feasible = |x: &[Rat]| g.iter().zip(&h).all(|(row, hi)| dot(row, x) <= *hi);
    let to_map = |x: &[Rat]| problem.k_set.iter().copied().zip(x.iter().cloned()).collect::<BTreeMap<_, _>>();
    let zero = Rat::zero();

    if n == 0 {
        return LpSolution { status: LpStatus::Optimal, value: Some(Rat::one()), xi: BTreeMap::new(), ray: None };
    }
    if n > 1 {
        for rows in subsets(g.len(), n - 1) {
            let sub: Vec<Vec<Rat>> = rows.iter().map(|&r| g[r].clone()).collect();
            let Some(dir) = null_vector(&sub, n) else { continue };
            for sign in [Rat::one(), -Rat::one()] {
                let ray: Vec<Rat> = dir.iter().map(|x| x * &sign).collect();
                if g.iter().all(|row| dot(row, &ray) <= zero) && better(&dot(&problem.objective, &ray), &zero) {
                    return LpSolution { status: LpStatus::Unbounded, value: None, xi: BTreeMap::new(), ray: Some(to_map(&ray)) };
                }
            }
        }
    } else {
        let ray = vec![Rat::one()];
        if g.iter().all(|row| dot(row, &ray) <= zero) && better(&dot(&problem.objective, &ray), &zero) {
            return LpSolution { status: LpStatus::Unbounded, value: None, xi: BTreeMap::new(), ray: Some(to_map(&ray)) };
        }
    }
    let mut best: Option<(Rat, Vec<Rat>)> = None;
    for rows in subsets(g.len(), n) {
        let sub: Vec<Vec<Rat>> = rows.iter().map(|&r| g[r].clone()).collect();
        let rhs: Vec<Rat> = rows.iter().map(|&r| h[r].clone()).collect();
        let Some(x) = solve_square(sub, rhs) else { continue };
        if !feasible(&x) {
            continue;
        }
        let val = Rat::one() + dot(&problem.objective, &x);
        if best.as_ref().is_none_or(|(b, _)| better(&val, b)) {
            best = Some((val, x));
        }
    }
    match best {
        Some((val, x)) => LpSolution { status: LpStatus::Optimal, value: Some(val), xi: to_map(&x), ray: None },
        None => LpSolution { status: LpStatus::Infeasible, value: None, xi: BTreeMap::new(), ray: None },
    }
}

/// `v_1 = q(q^{n−d} − 1)(q^d − 1)/(q − 1)²`.
pub fn v1_closed(n: i64, d: i64, q: u64) -> Result<Rat> {
    let qq = FieldOrder::new(q)?;
    let q1 = rat(q - 1);
    Ok(rat(BigInt::from(q) * (qq.pow(n - d)? - 1) * (qq.pow(d)? - 1)) / (&q1 * &q1))
}

/// `P_1(1) = −(q^d − 1)/(q − 1) + q(q^{d−1} − 1)(q^{n−d} − 1)/(q − 1)²`.
pub fn p11_closed(n: i64, d: i64, q: u64) -> Result<Rat> {
    let qq = FieldOrder::new(q)?;
    let q1 = rat(q - 1);
    Ok(-rat(qq.pow(d)? - 1) / &q1 + rat(BigInt::from(q) * (qq.pow(d - 1)? - 1) * (qq.pow(n - d)? - 1)) / (&q1 * &q1))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClosedFormBound {
    pub numerator: BigInt,
    pub denominator: BigInt,
    /// `numerator / denominator`, reduced.
    pub value: Rat,
    /// `1 + (v_1 + P_1(1)) / P_1(1)` from the closed forms of `v_1`, `P_1(1)`.
    pub intermediate: Rat,
}

impl ClosedFormBound {
    pub fn to_json(&self) -> Value {
        json!({
            "value": rat_string(&self.value),
            "numerator": self.numerator.to_string(),
            "denominator": self.denominator.to_string(),
            "intermediate": rat_string(&self.intermediate),
        })
    }
}

/// `(q^{d+1+n} − 3q^{2d+1} + 5q^{d+1} − 2q^d + 2q^{n+d} − 3q^{n+1}) /
/// (q^{n+d} − q^{2d+1} + 2q^{d+1} − q^d − q^{n+1})`, checked against
/// `1 + (v_1 + P_1(1)) / P_1(1)`.
pub fn closed_form_bound(n: i64, d: i64, q: u64) -> Result<ClosedFormBound> {
    if d < 1 || d > n {
        return param(format!("need 1 <= d <= n, got n = {n}, d = {d}"));
    }
    let qq = FieldOrder::new(q)?;
    let p = |e: i64| qq.pow(e);
    let numerator: BigInt = p(d + 1 + n)? - 3 * p(2 * d + 1)? + 5 * p(d + 1)? - 2 * p(d)? + 2 * p(n + d)? - 3 * p(n + 1)?;
    let denominator: BigInt = p(n + d)? - p(2 * d + 1)? + 2 * p(d + 1)? - p(d)? - p(n + 1)?;
    if denominator.is_zero() {
        return Err(Error::Degenerate(format!("denominator vanishes at (n, d, q) = ({n}, {d}, {q})")));
    }
    let p11 = p11_closed(n, d, q)?;
    if p11.is_zero() {
        return Err(Error::Degenerate(format!("P_1(1) vanishes at (n, d, q) = ({n}, {d}, {q})")));
    }
    let intermediate = Rat::one() + (v1_closed(n, d, q)? + &p11) / &p11;
    let value = Rat::new(numerator.clone(), denominator.clone());
    if value != intermediate {
        return Err(Error::Inconsistency(format!(
            "closed form {} differs from 1 + (v_1 + P_1(1))/P_1(1) = {}",
            rat_string(&value),
            rat_string(&intermediate)
        )));
    }
    Ok(ClosedFormBound { numerator, denominator, value, intermediate })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CliqueSearch {
    pub center: usize,
    pub size: usize,
    /// Point indices of one maximum clique.
    pub witness: Vec<usize>,
    pub neighbourhood: usize,
    /// Maximum found from a second center.
    pub second_center: Option<(usize, usize)>,
}

/// Maximum clique of an adjacency-bitset graph, by branch and bound with
/// greedy colouring bounds.
fn max_clique(adj: &[Vec<bool>]) -> Vec<usize> {
    fn expand(adj: &[Vec<bool>], cur: &mut Vec<usize>, cand: Vec<usize>, best: &mut Vec<usize>) {
        // Greedy colouring of the candidates, in order.
        let mut order: Vec<(usize, usize)> = Vec::with_capacity(cand.len());
        let mut classes: Vec<Vec<usize>> = Vec::new();
        for &v in &cand {
            let c = classes
                .iter()
                .position(|cl| cl.iter().all(|&u| !adj[u][v]))
                .unwrap_or_else(|| {
                    classes.push(Vec::new());
                    classes.len() - 1
                });
            classes[c].push(v);
        }
        for (c, cl) in classes.iter().enumerate() {
            for &v in cl {
                order.push((v, c + 1));
            }
        }
        let mut remaining: Vec<usize> = order.iter().map(|&(v, _)| v).collect();
        while let Some((v, colour)) = order.pop() {
            if cur.len() + colour <= best.len() {
                return;
            }
            remaining.pop();
            cur.push(v);
            let next: Vec<usize> = remaining.iter().copied().filter(|&u| adj[v][u]).collect();
            if next.is_empty() {
                if cur.len() > best.len() {
                    *best = cur.clone();
                }
            } else {
                expand(adj, cur, next, best);
            }
            cur.pop();
        }
    }
    let mut best = Vec::new();
    expand(adj, &mut Vec::new(), (0..adj.len()).collect(), &mut best);
    best.sort_unstable();
    best
}

fn neighbourhood_clique(scheme: &SchemeInstance, m: &BTreeSet<usize>, s: usize, center: usize) -> (usize, Vec<usize>) {
    let nbhd: Vec<usize> = (0..scheme.len()).filter(|&x| scheme.class(x, center) == s).collect();
    let adj: Vec<Vec<bool>> = nbhd
        .iter()
        .map(|&x| nbhd.iter().map(|&y| x != y && m.contains(&scheme.class(x, y))).collect())
        .collect();
    let clique = max_clique(&adj);
    (nbhd.len(), clique.into_iter().map(|i| nbhd[i]).collect())
}

/// Largest 0/1 unicoloured `M`-clique of colour `s` around point 0, i.e. a
/// maximum clique of the graph on `{x : (x, x0) ∈ R_s}` with edges for
/// relations in `M`. The search is repeated from the last point.
pub fn brute_force_unicoloured_max(scheme: &SchemeInstance, m: &BTreeSet<usize>, s: usize, cap: u64) -> Result<CliqueSearch> {
    if !m.contains(&0) {
        return param("M must contain 0");
    }
    if s > scheme.d() {
        return param(format!("colour s = {s} exceeds d = {}", scheme.d()));
    }
    let size = (0..scheme.len()).filter(|&x| scheme.class(x, 0) == s).count();
    if size as u64 > cap {
        return Err(Error::ResourceCap { predicted: size.into(), cap });
    }
    let (neighbourhood, witness) = neighbourhood_clique(scheme, m, s, 0);
    let last = scheme.len() - 1;
    let second_center = (last != 0).then(|| (last, neighbourhood_clique(scheme, m, s, last).1.len()));
    Ok(CliqueSearch { center: 0, size: witness.len(), witness, neighbourhood, second_center })
}

/// Random nonnegative unicoloured `M`-cliques of colour `s` around point 0:
/// a random maximal clique of the neighbourhood graph, thinned at random,
/// with weights drawn from `1..=8` over `1..=4`.
pub fn random_unicoloured_cliques(
    scheme: &SchemeInstance,
    m: &BTreeSet<usize>,
    s: usize,
    count: usize,
    seed: u64,
) -> Vec<WeightVector> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let nbhd: Vec<usize> = (0..scheme.len()).filter(|&x| scheme.class(x, 0) == s).collect();
    let mut out = Vec::with_capacity(count);
    if nbhd.is_empty() {
        return out;
    }
    for _ in 0..count {
        let mut order = nbhd.clone();
        order.shuffle(&mut rng);
        let mut clique: Vec<usize> = Vec::new();
        for x in order {
            if clique.iter().all(|&y| m.contains(&scheme.class(x, y))) {
                clique.push(x);
            }
        }
        let keep = rng.gen_range(1..=clique.len());
        clique.truncate(keep);
        let alpha = clique
            .into_iter()
            .map(|x| (x, Rat::new(rng.gen_range(1..=8).into(), rng.gen_range(1..=4).into())))
            .collect();
        out.push(WeightVector { alpha });
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::enumeration::DEFAULT_CAP;
    use crate::gf_space::Ambient;
    use crate::scheme::build_scheme;

    fn j242() -> SchemeInstance {
        build_scheme(Ambient::new(4, 0, 2).unwrap(), 2, 0, DEFAULT_CAP).unwrap()
    }

    fn set(v: &[usize]) -> BTreeSet<usize> {
        v.iter().copied().collect()
    }

    fn r(n: i64, d: i64) -> Rat {
        Rat::new(n.into(), d.into())
    }

    #[test]
    fn coefficients_and_c_hat() {
        let s = j242();
        let one = WeightVector::indicator([0]);
        assert_eq!(c_coeff(&one, &s, 0).unwrap(), r(1, 1));
        assert_eq!(c_coeff(&one, &s, 1).unwrap(), r(0, 1));
        let all = WeightVector::indicator(0..35);
        for i in 0..=2 {
            assert_eq!(c_coeff(&all, &s, i).unwrap(), r(35, 1));
        }
        let y = (1..35).find(|&y| s.class(0, y) == 1).unwrap();
        let pair = WeightVector::indicator([0, y]);
        assert_eq!(c_coeff(&pair, &s, 1).unwrap(), r(2, 18));
        assert!(is_m_clique(&pair, &s, &set(&[0, 1])).unwrap());
        let z = (1..35).find(|&z| s.class(0, z) == 2).unwrap();
        assert!(!is_m_clique(&WeightVector::indicator([0, z]), &s, &set(&[0, 1])).unwrap());
        let w = WeightVector { alpha: [(0, r(1, 1)), (1, r(1, 1)), (2, r(2, 1))].into_iter().collect() };
        assert_eq!(c_hat_0(&w).unwrap(), r(8, 3));
        assert_eq!(c_hat_0(&WeightVector::indicator(0..5)).unwrap(), r(5, 1));
        assert!(c_hat_0(&WeightVector::default()).is_err());
    }

    #[test]
    fn lp_at_4_2_2() {
        let e = EigenData::new(4, 2, 2).unwrap();
        let lp = build_lp(&e, &set(&[0, 1]), 1).unwrap();
        assert_eq!(lp.k_set, vec![1, 2]);
        assert_eq!(lp.b[1], r(1, 36));
        assert_eq!(lp.b[2], r(1, 36));
        let min = solve_lp(&lp, Direction::Min);
        assert_eq!(min.value, Some(r(1, 1)));
        let max = solve_lp(&lp, Direction::Max);
        assert_eq!(max.status, LpStatus::Unbounded);
        let one = solve_lp(&lp.restrict_to(1).unwrap(), Direction::Max);
        assert_eq!(one.value, Some(r(8, 1)));
        assert_eq!(one.xi[&1], r(36, 5));
        // Constraints are indexed by M \ {0}.
        assert!(build_lp(&e, &set(&[0]), 1).unwrap().constraints.is_empty());
        assert_eq!(build_lp(&e, &set(&[0, 1, 2]), 1).unwrap().constraints.len(), 2);
    }

    #[test]
    fn closed_form() {
        let b = closed_form_bound(4, 2, 2).unwrap();
        assert_eq!(b.value, r(8, 1));
        assert_eq!((b.numerator.clone(), b.denominator.clone()), (96.into(), 12.into()));
        assert_eq!(b.intermediate, r(8, 1));
        for q in 2..=5 {
            for n in 1..=8 {
                for d in 1..=n {
                    closed_form_bound(n, d, q).unwrap();
                }
            }
        }
        assert!(closed_form_bound(2, 0, 2).is_err());
    }

    #[test]
    fn closed_forms_match_spectra() {
        for q in 2..=5u64 {
            for n in 2..=7 {
                for d in 1..n {
                    if d > n - d {
                        continue;
                    }
                    let e = EigenData::new(n, d, q).unwrap();
                    assert_eq!(v1_closed(n, d, q).unwrap(), rat(e.v[1].clone()));
                    assert_eq!(p11_closed(n, d, q).unwrap(), rat(e.p[1][1].clone()));
                }
            }
        }
    }

    #[test]
    fn clique_search() {
        let s = j242();
        let single = brute_force_unicoloured_max(&s, &set(&[0]), 1, DEFAULT_CAP).unwrap();
        assert_eq!(single.size, 1);
        let all = brute_force_unicoloured_max(&s, &set(&[0, 1, 2]), 1, DEFAULT_CAP).unwrap();
        assert_eq!(all.size, 18);
        let res = brute_force_unicoloured_max(&s, &set(&[0, 1]), 1, DEFAULT_CAP).unwrap();
        assert!(res.size <= 8);
        assert_eq!(res.second_center.unwrap().1, res.size);
        let w = WeightVector::indicator(res.witness.iter().copied());
        assert!(is_m_clique(&w, &s, &set(&[0, 1])).unwrap());
        assert!(is_unicoloured(&w, &s, 0, 1));
    }

    #[test]
    fn max_clique_small_graphs() {
        // 5-cycle: clique number 2.
        let adj: Vec<Vec<bool>> = (0..5).map(|i| (0..5).map(|j| (i + 5 - j) % 5 == 1 || (j + 5 - i) % 5 == 1).collect()).collect();
        assert_eq!(max_clique(&adj).len(), 2);
        let k4: Vec<Vec<bool>> = (0..4).map(|i| (0..4).map(|j| i != j).collect()).collect();
        assert_eq!(max_clique(&k4), vec![0, 1, 2, 3]);
    }

    #[test]
    fn random_cliques_respect_the_bound() {
        let s = j242();
        let m = set(&[0, 1]);
        let vecs = random_unicoloured_cliques(&s, &m, 1, 200, 7);
        assert_eq!(vecs.len(), 200);
        for w in &vecs {
            assert!(is_m_clique(w, &s, &m).unwrap());
            assert!(is_unicoloured(w, &s, 0, 1));
            assert!(c_hat_0(w).unwrap() <= r(8, 1));
        }
        assert_eq!(vecs, random_unicoloured_cliques(&s, &m, 1, 200, 7));
    }
}
