//! Linear algebra over prime fields and canonical subspaces of the singular
//! linear space `F_q^{n+l}`.
//!
//! The last `l` coordinates span the distinguished subspace `E`. A subspace
//! is stored as its unique reduced row echelon basis, so equality, ordering
//! and hashing of [`Subspace`] values are equality, ordering and hashing of
//! subspaces.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{param, Error, Result};

/// The space `F_q^{n+l}` for a prime `q`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Ambient {
    n: usize,
    l: usize,
    q: u32,
}

impl Ambient {
    pub fn new(n: usize, l: usize, q: u32) -> Result<Self> {
        if n + l == 0 {
            return param("ambient dimension n + l must be at least 1");
        }
        if !is_prime(q) {
            return param(format!("enumeration needs a prime field order, got q = {q}"));
        }
        if q > u16::MAX as u32 {
            return param(format!("field order {q} is too large for enumeration"));
        }
        Ok(Ambient { n, l, q })
    }

    /// Ordinary coordinates.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Singular coordinates (the dimension of `E`).
    pub fn l(&self) -> usize {
        self.l
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn dim(&self) -> usize {
        self.n + self.l
    }

    /// Whether a type `(t, t1)` can occur in this ambient space.
    pub fn admits(&self, ty: SubspaceType) -> bool {
        ty.t1 >= 0
            && ty.t1 <= ty.t
            && ty.t1 <= self.l as i64
            && ty.t - ty.t1 <= self.n as i64
    }

    /// All admissible types with `t <= max_dim`, ordered by `(t, t1)`.
    pub fn types_up_to(&self, max_dim: usize) -> Vec<SubspaceType> {
        let mut out = Vec::new();
        for t in 0..=max_dim.min(self.dim()) as i64 {
            for t1 in 0..=t {
                let ty = SubspaceType::new_unchecked(t, t1);
                if self.admits(ty) {
                    out.push(ty);
                }
            }
        }
        out
    }

    pub fn zero(&self) -> Subspace {
        Subspace {
            ambient: *self,
            dim: 0,
            e_dim: 0,
            rows: Vec::new(),
        }
    }

    pub fn full(&self) -> Subspace {
        let rows: Vec<Vec<u32>> = (0..self.dim()).map(|i| self.unit(i)).collect();
        Subspace::from_rows(*self, &rows).expect("identity rows are valid")
    }

    /// The distinguished subspace `E = <e_{n+1}, ..., e_{n+l}>`.
    pub fn e_space(&self) -> Subspace {
        let rows: Vec<Vec<u32>> = (self.n..self.dim()).map(|i| self.unit(i)).collect();
        Subspace::from_rows(*self, &rows).expect("unit rows are valid")
    }

    /// The unit vector `e_{i+1}` (0-based index).
    pub fn unit(&self, i: usize) -> Vec<u32> {
        let mut v = vec![0; self.dim()];
        v[i] = 1;
        v
    }
}

fn is_prime(q: u32) -> bool {
    if q < 2 {
        return false;
    }
    let mut d = 2u32;
    while d * d <= q {
        if q % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// A subspace type `(t, t1)`: dimension `t` and `dim(P ∩ E) = t1`.
///
/// The fields are plain integers because the formula layer evaluates types
/// with arbitrary (possibly out of range) indices and lets the Gaussian
/// binomials vanish.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SubspaceType {
    pub t: i64,
    pub t1: i64,
}

impl SubspaceType {
    pub fn new(t: i64, t1: i64) -> Result<Self> {
        if t1 < 0 || t1 > t {
            return param(format!("invalid subspace type ({t}, {t1})"));
        }
        Ok(SubspaceType { t, t1 })
    }

    pub const fn new_unchecked(t: i64, t1: i64) -> Self {
        SubspaceType { t, t1 }
    }

    /// `t - t1`, the dimension of the projection onto the first `n`
    /// coordinates.
    pub fn ordinary(&self) -> i64 {
        self.t - self.t1
    }
}

impl fmt::Display for SubspaceType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}({})", self.t, self.t1)
    }
}

/// Shorthand for [`SubspaceType::new_unchecked`].
pub const fn ty(t: i64, t1: i64) -> SubspaceType {
    SubspaceType::new_unchecked(t, t1)
}

#[inline]
fn inv_mod(a: u32, p: u32) -> u32 {
    // Fermat; p is prime and small.
    let (mut base, mut e, mut acc) = (a as u64 % p as u64, p as u64 - 2, 1u64);
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % p as u64;
        }
        base = base * base % p as u64;
        e >>= 1;
    }
    acc as u32
}

/// Row-reduce a flat `rows x cols` buffer in place. Returns the pivot columns;
/// the first `pivots.len()` rows hold the canonical basis afterwards.
fn rref_flat(buf: &mut [u32], rows: usize, cols: usize, p: u32) -> Vec<usize> {
    let p64 = p as u64;
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(found) = (r..rows).find(|&i| buf[i * cols + c] != 0) else {
            continue;
        };
        if found != r {
            for j in 0..cols {
                buf.swap(found * cols + j, r * cols + j);
            }
        }
        let inv = inv_mod(buf[r * cols + c], p) as u64;
        for j in c..cols {
            buf[r * cols + j] = (buf[r * cols + j] as u64 * inv % p64) as u32;
        }
        for i in 0..rows {
            if i == r {
                continue;
            }
            let f = buf[i * cols + c] as u64;
            if f == 0 {
                continue;
            }
            for j in c..cols {
                let sub = f * buf[r * cols + j] as u64 % p64;
                buf[i * cols + j] = ((buf[i * cols + j] as u64 + p64 - sub) % p64) as u32;
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

/// Reduced row echelon form of a matrix over `F_q` with zero rows removed,
/// together with its rank.
///
/// ```
/// use singscheme::gf_space::rref;
/// let (m, rank) = rref(&[vec![1, 1, 0], vec![0, 1, 1]], 2).unwrap();
/// assert_eq!(m, vec![vec![1, 0, 1], vec![0, 1, 1]]);
/// assert_eq!(rank, 2);
/// ```
pub fn rref(rows: &[Vec<u32>], q: u32) -> Result<(Vec<Vec<u32>>, usize)> {
    if !is_prime(q) {
        return param(format!("rref needs a prime field order, got {q}"));
    }
    let cols = rows.first().map_or(0, Vec::len);
    if rows.iter().any(|r| r.len() != cols) {
        return param("rows have unequal lengths");
    }
    if rows.iter().flatten().any(|&x| x >= q) {
        return param(format!("matrix entry out of range [0, {q})"));
    }
    let mut buf: Vec<u32> = rows.iter().flatten().copied().collect();
    let rank = rref_flat(&mut buf, rows.len(), cols, q).len();
    let out = buf
        .chunks(cols.max(1))
        .take(rank)
        .map(<[u32]>::to_vec)
        .collect();
    Ok((out, rank))
}

/// A subspace of `F_q^{n+l}` in canonical form.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Subspace {
    ambient: Ambient,
    dim: usize,
    e_dim: usize,
    /// `dim x (n+l)` canonical basis, row-major.
    rows: Vec<u32>,
}

impl Subspace {
    /// The row space of `rows`, canonicalized.
    pub fn from_rows(ambient: Ambient, rows: &[Vec<u32>]) -> Result<Self> {
        let cols = ambient.dim();
        if rows.iter().any(|r| r.len() != cols) {
            return param(format!("row length differs from ambient dimension {cols}"));
        }
        if rows.iter().flatten().any(|&x| x >= ambient.q) {
            return param(format!("vector entry out of range [0, {})", ambient.q));
        }
        let buf: Vec<u32> = rows.iter().flatten().copied().collect();
        Ok(Self::from_flat(ambient, buf, rows.len()))
    }

    fn from_flat(ambient: Ambient, mut buf: Vec<u32>, nrows: usize) -> Self {
        let cols = ambient.dim();
        let pivots = rref_flat(&mut buf, nrows, cols, ambient.q);
        buf.truncate(pivots.len() * cols);
        let e_dim = pivots.iter().filter(|&&c| c >= ambient.n).count();
        Subspace {
            ambient,
            dim: pivots.len(),
            e_dim,
            rows: buf,
        }
    }

    /// Build from rows already known to be in reduced row echelon form.
    pub(crate) fn from_canonical(ambient: Ambient, rows: Vec<u32>, pivots: &[usize]) -> Self {
        debug_assert_eq!(rows.len(), pivots.len() * ambient.dim());
        let e_dim = pivots.iter().filter(|&&c| c >= ambient.n).count();
        Subspace {
            ambient,
            dim: pivots.len(),
            e_dim,
            rows,
        }
    }

    pub fn ambient(&self) -> Ambient {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// `dim(P ∩ E)`.
    pub fn e_dim(&self) -> usize {
        self.e_dim
    }

    pub fn type_of(&self) -> SubspaceType {
        ty(self.dim as i64, self.e_dim as i64)
    }

    pub fn rows(&self) -> impl Iterator<Item = &[u32]> {
        self.rows.chunks(self.ambient.dim())
    }

    pub fn rows_vec(&self) -> Vec<Vec<u32>> {
        self.rows().map(<[u32]>::to_vec).collect()
    }

    fn check_same(&self, other: &Subspace) -> Result<()> {
        if self.ambient != other.ambient {
            return Err(Error::AmbientMismatch);
        }
        Ok(())
    }

    /// Reduce `v` modulo this subspace; zero iff `v` lies in it.
    fn reduce(&self, v: &mut [u32]) {
        let p = self.ambient.q as u64;
        for row in self.rows() {
            let c = row.iter().position(|&x| x != 0).expect("rows are nonzero");
            let f = v[c] as u64;
            if f == 0 {
                continue;
            }
            for (x, &r) in v.iter_mut().zip(row).skip(c) {
                *x = ((*x as u64 + p - f * r as u64 % p) % p) as u32;
            }
        }
    }

    pub fn contains_vector(&self, v: &[u32]) -> bool {
        let mut w = v.to_vec();
        self.reduce(&mut w);
        w.iter().all(|&x| x == 0)
    }

    /// `true` iff `other ⊆ self`.
    pub fn contains(&self, other: &Subspace) -> Result<bool> {
        self.check_same(other)?;
        Ok(other.dim <= self.dim && other.rows().all(|r| self.contains_vector(r)))
    }

    /// The subspace sum `self + other`.
    pub fn join(&self, other: &Subspace) -> Result<Subspace> {
        self.check_same(other)?;
        let mut buf = self.rows.clone();
        buf.extend_from_slice(&other.rows);
        Ok(Self::from_flat(self.ambient, buf, self.dim + other.dim))
    }

    /// The intersection `self ∩ other` (Zassenhaus).
    pub fn meet(&self, other: &Subspace) -> Result<Subspace> {
        self.check_same(other)?;
        let n = self.ambient.dim();
        if self.dim == 0 || other.dim == 0 {
            return Ok(self.ambient.zero());
        }
        let w = 2 * n;
        let nrows = self.dim + other.dim;
        let mut buf = Vec::with_capacity(nrows * w);
        for r in self.rows() {
            buf.extend_from_slice(r);
            buf.extend_from_slice(r);
        }
        for r in other.rows() {
            buf.extend_from_slice(r);
            buf.extend(std::iter::repeat(0).take(n));
        }
        let pivots = rref_flat(&mut buf, nrows, w, self.ambient.q);
        let mut inter = Vec::new();
        let mut count = 0;
        for (i, &c) in pivots.iter().enumerate() {
            if c >= n {
                inter.extend_from_slice(&buf[i * w + n..(i + 1) * w]);
                count += 1;
            }
        }
        Ok(Self::from_flat(self.ambient, inter, count))
    }
}

impl fmt::Debug for Subspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Subspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<")?;
        for (i, r) in self.rows().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            let (a, b) = r.split_at(self.ambient.n);
            let s = |v: &[u32]| v.iter().map(u32::to_string).collect::<Vec<_>>().join("");
            write!(f, "{}|{}", s(a), s(b))?;
        }
        write!(f, ">")
    }
}

/// JSON form `{n, l, q, rows}`.
#[derive(Serialize, Deserialize)]
struct SubspaceRepr {
    n: usize,
    l: usize,
    q: u32,
    rows: Vec<Vec<u32>>,
}

impl Serialize for Subspace {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        SubspaceRepr {
            n: self.ambient.n,
            l: self.ambient.l,
            q: self.ambient.q,
            rows: self.rows_vec(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Subspace {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let repr = SubspaceRepr::deserialize(d)?;
        let ambient = Ambient::new(repr.n, repr.l, repr.q).map_err(serde::de::Error::custom)?;
        Subspace::from_rows(ambient, &repr.rows).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn amb(n: usize, l: usize, q: u32) -> Ambient {
        Ambient::new(n, l, q).unwrap()
    }

    fn span(a: Ambient, rows: &[&[u32]]) -> Subspace {
        let rows: Vec<Vec<u32>> = rows.iter().map(|r| r.to_vec()).collect();
        Subspace::from_rows(a, &rows).unwrap()
    }

    #[test]
    fn rref_examples() {
        let id = vec![vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]];
        assert_eq!(rref(&id, 3).unwrap(), (id.clone(), 3));
        let zero = vec![vec![0, 0, 0], vec![0, 0, 0]];
        assert_eq!(rref(&zero, 2).unwrap(), (vec![], 0));
        assert!(rref(&[vec![0, 2]], 2).is_err());
        assert!(rref(&[vec![0, 1]], 4).is_err());
    }

    #[test]
    fn ambient_validation() {
        assert!(Ambient::new(0, 0, 2).is_err());
        assert!(Ambient::new(2, 1, 4).is_err());
        assert!(Ambient::new(2, 1, 5).is_ok());
    }

    #[test]
    fn meet_example() {
        let a = amb(2, 1, 2);
        let x = span(a, &[&[1, 0, 0], &[0, 1, 0]]);
        let y = span(a, &[&[0, 1, 0], &[0, 0, 1]]);
        assert_eq!(x.meet(&y).unwrap(), span(a, &[&[0, 1, 0]]));
        assert_eq!(x.meet(&x).unwrap(), x);
        assert_eq!(x.meet(&a.zero()).unwrap(), a.zero());
    }

    #[test]
    fn join_and_contains() {
        let a = amb(2, 1, 2);
        let e1 = span(a, &[&[1, 0, 0]]);
        let e2 = span(a, &[&[0, 1, 0]]);
        assert_eq!(e1.join(&e2).unwrap(), span(a, &[&[1, 0, 0], &[0, 1, 0]]));
        assert_eq!(e1.join(&a.zero()).unwrap(), e1);
        assert_eq!(e1.join(&e1).unwrap(), e1);
        assert!(e1.contains(&e1).unwrap());
        assert!(a.full().contains(&e2).unwrap());
        assert!(!e1.contains(&e2).unwrap());
    }

    #[test]
    fn types() {
        let a = amb(2, 2, 2);
        assert_eq!(a.e_space().type_of(), ty(2, 2));
        assert_eq!(span(a, &[&[1, 0, 0, 0]]).type_of(), ty(1, 0));
        // <e1 + e3, e4>
        assert_eq!(span(a, &[&[1, 0, 1, 0], &[0, 0, 0, 1]]).type_of(), ty(2, 1));
    }

    #[test]
    fn ambient_mismatch() {
        let a = amb(2, 1, 2);
        let b = amb(1, 2, 2);
        assert!(matches!(
            a.zero().meet(&b.zero()),
            Err(Error::AmbientMismatch)
        ));
        assert!(a.zero().contains(&b.zero()).is_err());
    }

    #[test]
    fn json_shape() {
        let a = amb(2, 1, 3);
        let s = span(a, &[&[1, 2, 0]]);
        let j = serde_json::to_value(&s).unwrap();
        assert_eq!(j, serde_json::json!({"n": 2, "l": 1, "q": 3, "rows": [[1, 2, 0]]}));
        let back: Subspace = serde_json::from_value(j).unwrap();
        assert_eq!(back, s);
    }
}
