//! Exhaustive generation of subspaces by type, the strata `X_t^{t1}`, and an
//! indexed lattice with precomputed meets and joins. This is the brute-force
//! side of every formula check.

use std::collections::{BTreeMap, HashMap};
use std::fs;
use std::path::{Path, PathBuf};

use num_bigint::BigInt;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::counting::Geometry;
use crate::error::{param, Error, Result};
use crate::gf_space::{ty, Ambient, Subspace, SubspaceType};
use crate::report::CheckResult;

/// Default per-stratum resource cap.
pub const DEFAULT_CAP: u64 = 200_000;

/// Version tag written into stratum cache files.
pub const CACHE_FORMAT_VERSION: u32 = 1;

fn geometry(ambient: Ambient) -> Geometry {
    Geometry::new(ambient.n() as i64, ambient.l() as i64, ambient.q() as u64)
        .expect("prime q is at least 2")
}

/// Predicted size of `X_t^{t1}`.
pub fn predicted_count(ambient: Ambient, ty_: SubspaceType) -> BigInt {
    geometry(ambient)
        .count_n(ty(0, 0), ty_)
        .expect("N'(0,0;..) has non-negative exponents")
}

fn check_cap(ambient: Ambient, ty_: SubspaceType, cap: u64) -> Result<()> {
    let predicted = predicted_count(ambient, ty_);
    if predicted > BigInt::from(cap) {
        return Err(Error::ResourceCap { predicted, cap });
    }
    Ok(())
}

fn combinations(items: &[usize], k: usize, out: &mut Vec<Vec<usize>>) {
    fn go(items: &[usize], k: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..items.len() {
            if items.len() - i < k - cur.len() {
                break;
            }
            cur.push(items[i]);
            go(items, k, i + 1, cur, out);
            cur.pop();
        }
    }
    go(items, k, 0, &mut Vec::new(), out);
}

/// Every subspace of type `(t, t1)`, each once, sorted by canonical entries.
///
/// RREF matrices are generated directly: `t - t1` pivots among the first `n`
/// columns, `t1` among the last `l`, and every free entry right of a pivot
/// and outside the pivot columns ranges over `F_q`. The number of pivots in
/// the last `l` columns of an RREF basis is exactly `dim(P ∩ E)`.
pub fn enumerate_type(ambient: Ambient, ty_: SubspaceType, cap: u64) -> Result<Vec<Subspace>> {
    if !ambient.admits(ty_) {
        return Ok(Vec::new());
    }
    check_cap(ambient, ty_, cap)?;
    let (n, dim, q) = (ambient.n(), ambient.dim(), ambient.q());
    let t = ty_.t as usize;
    let t1 = ty_.t1 as usize;
    let mut ordinary = Vec::new();
    let mut singular = Vec::new();
    combinations(&(0..n).collect::<Vec<_>>(), t - t1, &mut ordinary);
    combinations(&(n..dim).collect::<Vec<_>>(), t1, &mut singular);

    let mut out = Vec::new();
    for a in &ordinary {
        for b in &singular {
            let pivots: Vec<usize> = a.iter().chain(b).copied().collect();
            let free: Vec<usize> = pivots
                .iter()
                .enumerate()
                .flat_map(|(row, &p)| {
                    let pivots = &pivots;
                    (p + 1..dim)
                        .filter(move |c| !pivots.contains(c))
                        .map(move |c| row * dim + c)
                })
                .collect();
            let mut base = vec![0u32; t * dim];
            for (row, &p) in pivots.iter().enumerate() {
                base[row * dim + p] = 1;
            }
            let mut digits = vec![0u32; free.len()];
            loop {
                let mut rows = base.clone();
                for (&pos, &d) in free.iter().zip(&digits) {
                    rows[pos] = d;
                }
                out.push(Subspace::from_canonical(ambient, rows, &pivots));
                // odometer
                let mut i = 0;
                while i < digits.len() {
                    digits[i] += 1;
                    if digits[i] < q {
                        break;
                    }
                    digits[i] = 0;
                    i += 1;
                }
                if i == digits.len() {
                    break;
                }
            }
        }
    }
    out.sort();
    Ok(out)
}

/// Every subspace of type `(t, t1)` containing `p`.
pub fn enumerate_containing(p: &Subspace, ty_: SubspaceType, cap: u64) -> Result<Vec<Subspace>> {
    let ambient = p.ambient();
    let inner = p.type_of();
    let nonempty = inner.t1 <= ty_.t1 && inner.ordinary() <= ty_.ordinary() && ambient.admits(ty_);
    if !nonempty {
        return Ok(Vec::new());
    }
    let mut out = Vec::new();
    for s in enumerate_type(ambient, ty_, cap)? {
        if s.contains(p)? {
            out.push(s);
        }
    }
    Ok(out)
}

/// All strata `X_t^{t1}` with `t <= m`.
#[derive(Clone, Debug)]
pub struct Stratification {
    pub ambient: Ambient,
    pub m: usize,
    pub strata: BTreeMap<SubspaceType, Vec<Subspace>>,
}

impl Stratification {
    /// Strata of every admissible type with `t <= max_dim`, without the
    /// rank-cap precondition of [`build_stratification`].
    pub fn up_to_dim(ambient: Ambient, max_dim: usize, cap: u64, cache_dir: Option<&Path>) -> Result<Self> {
        let types = ambient.types_up_to(max_dim);
        let lists: Vec<Result<Vec<Subspace>>> = types
            .par_iter()
            .map(|&t| load_or_enumerate(ambient, t, cap, cache_dir))
            .collect();
        let mut strata = BTreeMap::new();
        for (t, list) in types.into_iter().zip(lists) {
            strata.insert(t, list?);
        }
        Ok(Stratification {
            ambient,
            m: max_dim.min(ambient.dim()),
            strata,
        })
    }

    pub fn stratum(&self, ty_: SubspaceType) -> &[Subspace] {
        self.strata.get(&ty_).map_or(&[], Vec::as_slice)
    }

    pub fn sizes(&self) -> BTreeMap<SubspaceType, usize> {
        self.strata.iter().map(|(k, v)| (*k, v.len())).collect()
    }

    pub fn len(&self) -> usize {
        self.strata.values().map(Vec::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Every stratum has the predicted size `N'(0,0; t,t1; n+l,n)` and no
/// duplicates.
pub fn check_stratum_counts(strat: &Stratification) -> CheckResult {
    let mut check = CheckResult::new("stratum sizes");
    for (&t, list) in &strat.strata {
        let predicted = predicted_count(strat.ambient, t);
        let distinct = list.iter().collect::<std::collections::BTreeSet<_>>().len() == list.len();
        check.record(distinct && BigInt::from(list.len()) == predicted, || {
            serde_json::json!({"type": t.to_string(), "enumerated": list.len().to_string(), "predicted": predicted.to_string(), "distinct": distinct})
        });
    }
    check
}

/// The semilattice `L^m`: all strata with `t <= m`.
///
/// Requires `m <= min(n, l)`, or `m <= n` when `l = 0`.
pub fn build_stratification(ambient: Ambient, m: usize, cap: u64, cache_dir: Option<&Path>) -> Result<Stratification> {
    let ok = if ambient.l() == 0 {
        m <= ambient.n()
    } else {
        m <= ambient.n().min(ambient.l())
    };
    if !ok {
        return param(format!(
            "rank cap m = {m} exceeds min(n, l) = {}",
            ambient.n().min(ambient.l())
        ));
    }
    Stratification::up_to_dim(ambient, m, cap, cache_dir)
}

#[derive(Serialize, Deserialize)]
struct StratumFile {
    format_version: u32,
    n: usize,
    l: usize,
    q: u32,
    t: i64,
    t1: i64,
    subspaces: Vec<Subspace>,
}

pub fn cache_file_name(ambient: Ambient, ty_: SubspaceType) -> String {
    format!(
        "stratum_q{}_n{}_l{}_t{}_t1{}.json",
        ambient.q(),
        ambient.n(),
        ambient.l(),
        ty_.t,
        ty_.t1
    )
}

fn cache_path(dir: &Path, ambient: Ambient, ty_: SubspaceType) -> PathBuf {
    dir.join(cache_file_name(ambient, ty_))
}

/// Read one stratum from the cache directory, if present and valid.
pub fn read_cached(dir: &Path, ambient: Ambient, ty_: SubspaceType) -> Result<Option<Vec<Subspace>>> {
    let path = cache_path(dir, ambient, ty_);
    if !path.exists() {
        return Ok(None);
    }
    let file: StratumFile = serde_json::from_str(&fs::read_to_string(&path)?)?;
    if file.format_version != CACHE_FORMAT_VERSION {
        return Ok(None);
    }
    if (file.n, file.l, file.q, file.t, file.t1) != (ambient.n(), ambient.l(), ambient.q(), ty_.t, ty_.t1) {
        return Err(Error::Cache(format!("{} does not match its parameters", path.display())));
    }
    if file.subspaces.iter().any(|s| s.type_of() != ty_) {
        return Err(Error::Cache(format!("{} holds a subspace of the wrong type", path.display())));
    }
    Ok(Some(file.subspaces))
}

pub fn write_cached(dir: &Path, ambient: Ambient, ty_: SubspaceType, list: &[Subspace]) -> Result<()> {
    fs::create_dir_all(dir)?;
    let file = StratumFile {
        format_version: CACHE_FORMAT_VERSION,
        n: ambient.n(),
        l: ambient.l(),
        q: ambient.q(),
        t: ty_.t,
        t1: ty_.t1,
        subspaces: list.to_vec(),
    };
    fs::write(cache_path(dir, ambient, ty_), serde_json::to_string(&file)?)?;
    Ok(())
}

fn load_or_enumerate(ambient: Ambient, ty_: SubspaceType, cap: u64, cache_dir: Option<&Path>) -> Result<Vec<Subspace>> {
    if let Some(dir) = cache_dir {
        if let Some(list) = read_cached(dir, ambient, ty_)? {
            return Ok(list);
        }
        let list = enumerate_type(ambient, ty_, cap)?;
        write_cached(dir, ambient, ty_, &list)?;
        return Ok(list);
    }
    enumerate_type(ambient, ty_, cap)
}

const NONE: u32 = u32::MAX;

/// All elements of a stratification with dense meet/join tables and
/// containment lists, indexed by position.
pub struct SubspaceLattice {
    ambient: Ambient,
    max_dim: usize,
    elems: Vec<Subspace>,
    types: Vec<SubspaceType>,
    index: HashMap<Subspace, u32>,
    meet: Vec<u32>,
    join: Vec<u32>,
    down: Vec<Vec<u32>>,
    up: Vec<Vec<u32>>,
    by_type: BTreeMap<SubspaceType, Vec<u32>>,
    meet_failures: Vec<(u32, u32)>,
}

impl SubspaceLattice {
    pub fn new(strat: &Stratification) -> Result<Self> {
        let elems: Vec<Subspace> = strat.strata.values().flatten().cloned().collect();
        let len = elems.len();
        if len >= NONE as usize {
            return param("lattice too large to index");
        }
        let index: HashMap<Subspace, u32> = elems.iter().enumerate().map(|(i, s)| (s.clone(), i as u32)).collect();
        let types: Vec<SubspaceType> = elems.iter().map(Subspace::type_of).collect();
        let rows: Vec<Result<(Vec<u32>, Vec<u32>)>> = (0..len)
            .into_par_iter()
            .map(|i| {
                let mut m = Vec::with_capacity(len);
                let mut j_row = Vec::with_capacity(len);
                for j in 0..len {
                    let x = elems[i].meet(&elems[j])?;
                    m.push(index.get(&x).copied().unwrap_or(NONE));
                    let y = elems[i].join(&elems[j])?;
                    j_row.push(index.get(&y).copied().unwrap_or(NONE));
                }
                Ok((m, j_row))
            })
            .collect();
        let mut meet = Vec::with_capacity(len * len);
        let mut join = Vec::with_capacity(len * len);
        for r in rows {
            let (m, j) = r?;
            meet.extend(m);
            join.extend(j);
        }
        let mut meet_failures = Vec::new();
        let mut down = vec![Vec::new(); len];
        let mut up = vec![Vec::new(); len];
        for i in 0..len {
            for j in 0..len {
                let m = meet[i * len + j];
                if m == NONE {
                    meet_failures.push((i as u32, j as u32));
                } else if m == j as u32 {
                    down[i].push(j as u32);
                    up[j].push(i as u32);
                }
            }
        }
        let mut by_type: BTreeMap<SubspaceType, Vec<u32>> = BTreeMap::new();
        for (i, t) in types.iter().enumerate() {
            by_type.entry(*t).or_default().push(i as u32);
        }
        Ok(SubspaceLattice {
            ambient: strat.ambient,
            max_dim: strat.m,
            elems,
            types,
            index,
            meet,
            join,
            down,
            up,
            by_type,
            meet_failures,
        })
    }

    /// Every subspace of the ambient space.
    pub fn full(ambient: Ambient, cap: u64) -> Result<Self> {
        Self::new(&Stratification::up_to_dim(ambient, ambient.dim(), cap, None)?)
    }

    pub fn ambient(&self) -> Ambient {
        self.ambient
    }

    pub fn max_dim(&self) -> usize {
        self.max_dim
    }

    pub fn len(&self) -> usize {
        self.elems.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elems.is_empty()
    }

    pub fn elem(&self, i: u32) -> &Subspace {
        &self.elems[i as usize]
    }

    pub fn ty(&self, i: u32) -> SubspaceType {
        self.types[i as usize]
    }

    pub fn id_of(&self, s: &Subspace) -> Option<u32> {
        self.index.get(s).copied()
    }

    pub fn meet(&self, i: u32, j: u32) -> u32 {
        self.meet[i as usize * self.elems.len() + j as usize]
    }

    /// `None` when the join leaves the lattice (dimension above the cap).
    pub fn join(&self, i: u32, j: u32) -> Option<u32> {
        let v = self.join[i as usize * self.elems.len() + j as usize];
        (v != NONE).then_some(v)
    }

    pub fn leq(&self, i: u32, j: u32) -> bool {
        self.meet(i, j) == i
    }

    /// Elements below `i` (inclusive), in index order.
    pub fn down(&self, i: u32) -> &[u32] {
        &self.down[i as usize]
    }

    /// Elements above `i` (inclusive), in index order.
    pub fn up(&self, i: u32) -> &[u32] {
        &self.up[i as usize]
    }

    pub fn types(&self) -> impl Iterator<Item = SubspaceType> + '_ {
        self.by_type.keys().copied()
    }

    pub fn of_type(&self, t: SubspaceType) -> &[u32] {
        self.by_type.get(&t).map_or(&[], Vec::as_slice)
    }

    pub fn ids(&self) -> std::ops::Range<u32> {
        0..self.elems.len() as u32
    }

    pub fn zero_id(&self) -> u32 {
        self.id_of(&self.ambient.zero()).expect("zero subspace is always present")
    }

    /// Every pairwise meet lies in the lattice.
    pub fn check_meet_closure(&self) -> CheckResult {
        let mut check = CheckResult::new("meet-closure");
        let len = self.elems.len() as u64;
        check.configurations_tested = len * len - self.meet_failures.len() as u64;
        for &(i, j) in &self.meet_failures {
            let a = self.elem(i);
            let b = self.elem(j);
            check.fail(json!({"a": a, "b": b, "meet": a.meet(b).ok()}));
        }
        check
    }

    /// `r(0) = 0` and `r(b) = r(a) + 1` on every covering pair `a ⋖ b`, with
    /// `r = dim`.
    pub fn check_rank_function(&self) -> CheckResult {
        let mut check = CheckResult::new("rank-function");
        let zero = self.zero_id();
        check.record(self.elem(zero).dim() == 0 && self.down(zero).len() == 1, || {
            json!({"reason": "zero subspace is not the unique minimum of rank 0"})
        });
        let words = self.elems.len().div_ceil(64);
        let bits = |list: &[u32]| {
            let mut b = vec![0u64; words];
            for &x in list {
                b[x as usize / 64] |= 1 << (x % 64);
            }
            b
        };
        let up_bits: Vec<Vec<u64>> = self.up.iter().map(|u| bits(u)).collect();
        for b in self.ids() {
            let below = bits(self.down(b));
            for &a in self.down(b) {
                if a == b {
                    continue;
                }
                // elements strictly between a and b
                let between = up_bits[a as usize]
                    .iter()
                    .zip(&below)
                    .map(|(x, y)| (x & y).count_ones())
                    .sum::<u32>()
                    - 2;
                if between == 0 {
                    let (ra, rb) = (self.elem(a).dim(), self.elem(b).dim());
                    check.record(rb == ra + 1, || {
                        json!({"a": self.elem(a), "b": self.elem(b), "rank_a": ra, "rank_b": rb})
                    });
                }
            }
        }
        check
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn amb(n: usize, l: usize, q: u32) -> Ambient {
        Ambient::new(n, l, q).unwrap()
    }

    #[test]
    fn stratum_sizes() {
        let a = amb(2, 1, 2);
        assert_eq!(enumerate_type(a, ty(1, 0), DEFAULT_CAP).unwrap().len(), 6);
        assert_eq!(enumerate_type(a, ty(1, 1), DEFAULT_CAP).unwrap(), vec![a.e_space()]);
        assert_eq!(enumerate_type(amb(3, 2, 2), ty(2, 1), DEFAULT_CAP).unwrap().len(), 42);
        assert!(enumerate_type(a, ty(2, 2), DEFAULT_CAP).unwrap().is_empty());
    }

    #[test]
    fn resource_cap() {
        let err = enumerate_type(amb(3, 2, 2), ty(2, 1), 10).unwrap_err();
        match err {
            Error::ResourceCap { predicted, cap } => {
                assert_eq!(predicted, BigInt::from(42));
                assert_eq!(cap, 10);
            }
            e => panic!("unexpected {e}"),
        }
    }

    #[test]
    fn containing() {
        let a = amb(2, 1, 2);
        let e1 = Subspace::from_rows(a, &[vec![1, 0, 0]]).unwrap();
        let got = enumerate_containing(&e1, ty(2, 1), DEFAULT_CAP).unwrap();
        assert_eq!(got, vec![Subspace::from_rows(a, &[vec![1, 0, 0], vec![0, 0, 1]]).unwrap()]);
        assert!(enumerate_containing(&a.e_space(), ty(1, 0), DEFAULT_CAP).unwrap().is_empty());
        assert_eq!(
            enumerate_containing(&a.zero(), ty(1, 0), DEFAULT_CAP).unwrap(),
            enumerate_type(a, ty(1, 0), DEFAULT_CAP).unwrap()
        );
    }

    #[test]
    fn stratifications() {
        let s = build_stratification(amb(2, 2, 2), 1, DEFAULT_CAP, None).unwrap();
        let sizes: Vec<_> = s.sizes().into_iter().collect();
        assert_eq!(sizes, vec![(ty(0, 0), 1), (ty(1, 0), 12), (ty(1, 1), 3)]);
        let s = build_stratification(amb(1, 1, 2), 1, DEFAULT_CAP, None).unwrap();
        assert_eq!(s.stratum(ty(1, 0)).len(), 2);
        assert_eq!(s.stratum(ty(1, 1)).len(), 1);
        let s = build_stratification(amb(2, 2, 2), 0, DEFAULT_CAP, None).unwrap();
        assert_eq!(s.len(), 1);
        assert!(build_stratification(amb(3, 1, 2), 2, DEFAULT_CAP, None).is_err());
        assert!(build_stratification(amb(3, 0, 2), 2, DEFAULT_CAP, None).is_ok());
    }

    #[test]
    fn lattice_checks() {
        let s = build_stratification(amb(2, 2, 2), 2, DEFAULT_CAP, None).unwrap();
        let lat = SubspaceLattice::new(&s).unwrap();
        assert!(lat.check_meet_closure().passed);
        let rank = lat.check_rank_function();
        assert!(rank.passed, "{rank:?}");
        assert!(rank.configurations_tested > 1);
    }

    #[test]
    fn cache_roundtrip() {
        let dir = tempfile::tempdir().unwrap();
        let a = amb(2, 1, 3);
        let list = enumerate_type(a, ty(1, 0), DEFAULT_CAP).unwrap();
        write_cached(dir.path(), a, ty(1, 0), &list).unwrap();
        assert!(dir.path().join("stratum_q3_n2_l1_t1_t10.json").exists());
        assert_eq!(read_cached(dir.path(), a, ty(1, 0)).unwrap().unwrap(), list);
        assert_eq!(read_cached(dir.path(), a, ty(1, 1)).unwrap(), None);
        let s = Stratification::up_to_dim(a, 1, DEFAULT_CAP, Some(dir.path())).unwrap();
        assert_eq!(s.stratum(ty(1, 0)), list.as_slice());
    }
}
