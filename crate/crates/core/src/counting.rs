//! Closed-form subspace counts in the singular linear space.
//!
//! Every function returns 0 on geometrically impossible arguments rather
//! than an error, since the counts appear as vanishing terms inside sums. A
//! term is only expanded once all of its Gaussian binomials are nonzero, so a
//! negative q-exponent surfaces as [`Error::NegativeExponent`] only when the
//! formula itself is at fault.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::exact_q::FieldOrder;
use crate::gf_space::{ty, SubspaceType};

/// `q^e · Π binoms`, or 0 when any binomial vanishes.
fn term(q: FieldOrder, exponent: i64, binoms: &[(i64, i64)]) -> Result<BigInt> {
    let mut acc = BigInt::one();
    for &(n, k) in binoms {
        let b = q.binom(n, k);
        if b.is_zero() {
            return Ok(b);
        }
        acc *= b;
    }
    Ok(acc * q.pow(exponent)?)
}

/// Parameters of `F_q^{n+l}` for the formula layer. `q` may be any integer
/// at least 2.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Geometry {
    pub n: i64,
    pub l: i64,
    pub q: FieldOrder,
}

/// Range of the inner index `i1` in the π sum.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum PiRange {
    /// `0 <= i1 <= min(i, j1)`.
    #[default]
    Clipped,
    /// `0 <= i1 <= i`; may hit negative exponents.
    Full,
}

impl Geometry {
    pub fn new(n: i64, l: i64, q: u64) -> Result<Self> {
        Ok(Geometry {
            n,
            l,
            q: FieldOrder::new(q)?,
        })
    }

    /// Number of subspaces of type `outer` containing a fixed subspace of
    /// type `inner`.
    pub fn count_n(&self, inner: SubspaceType, outer: SubspaceType) -> Result<BigInt> {
        let (m1, k1, m, k) = (inner.t, inner.t1, outer.t, outer.t1);
        let nonempty = 0 <= k1 && k1 <= k && k <= self.l && 0 <= m1 - k1 && m1 - k1 <= m - k && m - k <= self.n;
        if !nonempty {
            return Ok(BigInt::zero());
        }
        term(
            self.q,
            (self.l - k) * (m - k - m1 + k1),
            &[(self.n - (m1 - k1), (m - k) - (m1 - k1)), (self.l - k1, k - k1)],
        )
    }

    /// Number of pairs `(C, D)` of types `c` and `d` with `C <= D`,
    /// `C <= B`, `A <= D`, for fixed `A` of type `a` and `B` of type `b`
    /// whose meet has type `meet`.
    ///
    /// The binomials counting `C` inside `B` use `b`; the count of `D` above
    /// `A + C` uses `d`. With `b == d` this is the classical
    /// `π(j(j1), r(r1), s(s1); m1)`.
    pub fn pi(
        &self,
        meet: SubspaceType,
        a: SubspaceType,
        c: SubspaceType,
        b: SubspaceType,
        d: SubspaceType,
    ) -> Result<BigInt> {
        self.pi_with_range(meet, a, c, b, d, PiRange::Clipped)
    }

    pub fn pi_with_range(
        &self,
        meet: SubspaceType,
        a: SubspaceType,
        c: SubspaceType,
        b: SubspaceType,
        d: SubspaceType,
        range: PiRange,
    ) -> Result<BigInt> {
        let (j, j1) = (meet.t, meet.t1);
        let (r, r1) = (a.t, a.t1);
        let (s, s1) = (c.t, c.t1);
        let (m, mb) = (b.t, b.t1);
        let mut total = BigInt::zero();
        for i in 0..=j {
            let i1_max = match range {
                PiRange::Clipped => i.min(j1),
                PiRange::Full => i,
            };
            for i1 in 0..=i1_max {
                let inner = term(
                    self.q,
                    (s - s1 - i + i1) * (j - j1 - i + i1 + mb - s1) + (s1 - i1) * (j1 - i1),
                    &[((m - mb) - (j - j1), (s - s1) - (i - i1)), (mb - j1, s1 - i1)],
                )?;
                if inner.is_zero() {
                    continue;
                }
                total += inner * self.count_n(ty(r + s - i, r1 + s1 - i1), d)?;
            }
        }
        Ok(total)
    }
}

/// Number of `U3` of type `u3` with `U3 <= U` and `U3 ∩ U2 = U1`, for a
/// fixed chain `U1 <= U2 <= U` of types `u1`, `u2`, `u`.
pub fn count_exact_meet(
    u1: SubspaceType,
    u2: SubspaceType,
    u3: SubspaceType,
    u: SubspaceType,
    q: FieldOrder,
) -> Result<BigInt> {
    let (d1, d2, d3, d) = (u1.ordinary(), u2.ordinary(), u3.ordinary(), u.ordinary());
    let (k1, k2, k3, k) = (u1.t1, u2.t1, u3.t1, u.t1);
    let chain = 0 <= k1 && k1 <= k2 && k2 <= k && 0 <= d1 && d1 <= d2 && d2 <= d;
    if !chain {
        return Ok(BigInt::zero());
    }
    term(
        q,
        (d3 - d1) * (d2 - d1 + k - k3) + (k3 - k1) * (k2 - k1),
        &[(d - d2, d3 - d1), (k - k2, k3 - k1)],
    )
}

/// Number of `B` of type `middle` with `A <= B <= C`, for fixed `A <= C` of
/// types `lower` and `upper`.
pub fn mu(
    lower: SubspaceType,
    middle: SubspaceType,
    upper: SubspaceType,
    q: FieldOrder,
) -> Result<BigInt> {
    let (r, r1, s, s1, m, m1) = (lower.t, lower.t1, middle.t, middle.t1, upper.t, upper.t1);
    term(
        q,
        (s - s1 - r + r1) * (m1 - s1),
        &[(m - r + r1 - m1, s - s1 - r + r1), (m1 - r1, s1 - r1)],
    )
}

/// Number of subspaces of type `lower` inside a fixed subspace of type
/// `upper`.
pub fn nu(lower: SubspaceType, upper: SubspaceType, q: FieldOrder) -> Result<BigInt> {
    let (r, r1, s, s1) = (lower.t, lower.t1, upper.t, upper.t1);
    term(q, (r - r1) * (s1 - r1), &[(s - s1, r - r1), (s1, r1)])
}

/// Solution of the counting system that determines ψ: for fixed types of
/// `D` (`counted`), `B` (`fixed`) and `A` (`ambient`) with `B <= A`, the
/// number of `D <= A` of type `counted` whose meet with `B` has each type
/// `(j, j1)`, `0 <= j <= min(r, s)`, `0 <= j1 <= j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PsiSolution {
    pub values: BTreeMap<SubspaceType, BigInt>,
}

/// Index pairs `(k, k1)` with `0 <= k <= h`, `0 <= k1 <= k`.
fn psi_indices(h: i64) -> Vec<SubspaceType> {
    (0..=h).flat_map(|k| (0..=k).map(move |k1| ty(k, k1))).collect()
}

/// Solve `Σ_{(j,j1)} ν(k(k1), j(j1)) ψ(j(j1)) = ν(k(k1), s(s1)) μ(k(k1), r(r1); a)`
/// over all `(k, k1)`.
///
/// The coefficient matrix is unit upper triangular once the unknowns are
/// ordered by decreasing `j`: `ν(k(k1), j(j1))` vanishes unless `k <= j`,
/// `k1 <= j1` and `k - k1 <= j - j1`. Both facts are checked; a violation is
/// an [`Error::Inconsistency`].
pub fn psi_system(
    counted: SubspaceType,
    fixed: SubspaceType,
    ambient: SubspaceType,
    q: FieldOrder,
) -> Result<PsiSolution> {
    let h = counted.t.min(fixed.t);
    let mut values = BTreeMap::new();
    if h < 0 {
        return Ok(PsiSolution { values });
    }
    let idx = psi_indices(h);
    // Decreasing j, so every off-diagonal unknown in row (j, j1) is solved.
    let mut order = idx.clone();
    order.sort_by(|x, y| y.cmp(x));
    for &row in &order {
        let diag = nu(row, row, q)?;
        if !diag.is_one() {
            return Err(Error::Inconsistency(format!(
                "ψ system diagonal ν({row}, {row}) = {diag}, expected 1"
            )));
        }
        let mut rhs = nu(row, fixed, q)? * mu(row, counted, ambient, q)?;
        for &col in &idx {
            if col == row {
                continue;
            }
            let coef = nu(row, col, q)?;
            if coef.is_zero() {
                continue;
            }
            match values.get(&col) {
                Some(v) => rhs -= coef * v,
                None => {
                    return Err(Error::Inconsistency(format!(
                        "ψ system is not triangular: ν({row}, {col}) = {coef}"
                    )))
                }
            }
        }
        if rhs.is_negative() {
            return Err(Error::Inconsistency(format!(
                "ψ({row}; {counted}, {fixed}; {ambient}) solved to {rhs} < 0"
            )));
        }
        values.insert(row, rhs);
    }
    Ok(PsiSolution { values })
}

/// ψ(meet, counted, fixed; ambient): the number of `D` of type `counted` with
/// `D <= A` and `B ∧ D` of type `meet`, for fixed `B <= A` of types `fixed`
/// and `ambient`. Zero for meet types outside the system's index range.
pub fn psi(
    meet: SubspaceType,
    counted: SubspaceType,
    fixed: SubspaceType,
    ambient: SubspaceType,
    q: FieldOrder,
) -> Result<BigInt> {
    let sol = psi_system(counted, fixed, ambient, q)?;
    Ok(sol.values.get(&meet).cloned().unwrap_or_default())
}

/// Check that ν restricted to the ψ index set is triangular with unit
/// diagonal. Returns the offending pair on failure.
pub fn nu_matrix_triangular(h: i64, q: FieldOrder) -> Result<Option<(SubspaceType, SubspaceType)>> {
    let idx = psi_indices(h);
    for &k in &idx {
        for &j in &idx {
            let v = nu(k, j, q)?;
            if k == j && !v.is_one() {
                return Ok(Some((k, j)));
            }
            let compatible = k.t <= j.t && k.t1 <= j.t1 && k.ordinary() <= j.ordinary();
            if k != j && !compatible && !v.is_zero() {
                return Ok(Some((k, j)));
            }
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q2() -> FieldOrder {
        FieldOrder::new(2).unwrap()
    }

    #[test]
    fn count_n_examples() {
        let g = Geometry::new(2, 1, 2).unwrap();
        assert_eq!(g.count_n(ty(0, 0), ty(1, 0)).unwrap(), 6.into());
        assert_eq!(g.count_n(ty(1, 1), ty(1, 1)).unwrap(), 1.into());
        assert_eq!(g.count_n(ty(1, 1), ty(1, 0)).unwrap(), 0.into());
        let g = Geometry::new(3, 2, 2).unwrap();
        assert_eq!(g.count_n(ty(0, 0), ty(2, 1)).unwrap(), 42.into());
        assert_eq!(g.count_n(ty(2, 1), ty(2, 1)).unwrap(), 1.into());
    }

    #[test]
    fn exact_meet_trivial_cases() {
        let q = q2();
        // U3 = U1 forced.
        assert_eq!(count_exact_meet(ty(1, 0), ty(2, 1), ty(1, 0), ty(3, 1), q).unwrap(), 1.into());
        // k - k2 < k3 - k1.
        assert!(count_exact_meet(ty(0, 0), ty(1, 1), ty(1, 1), ty(2, 1), q).unwrap().is_zero());
    }

    #[test]
    fn mu_examples() {
        let q = q2();
        assert_eq!(mu(ty(1, 0), ty(1, 0), ty(3, 1), q).unwrap(), 1.into());
        assert_eq!(mu(ty(1, 0), ty(3, 1), ty(3, 1), q).unwrap(), 1.into());
        assert_eq!(mu(ty(1, 0), ty(2, 1), ty(3, 1), q).unwrap(), 1.into());
        assert!(mu(ty(2, 0), ty(1, 0), ty(3, 1), q).unwrap().is_zero());
    }

    #[test]
    fn nu_examples() {
        let q = q2();
        assert_eq!(nu(ty(0, 0), ty(2, 1), q).unwrap(), 1.into());
        assert_eq!(nu(ty(2, 1), ty(2, 1), q).unwrap(), 1.into());
        assert_eq!(nu(ty(1, 0), ty(2, 1), q).unwrap(), 2.into());
        assert!(nu(ty(2, 0), ty(1, 0), q).unwrap().is_zero());
    }

    #[test]
    fn pi_with_trivial_c_reduces_to_count_n() {
        let g = Geometry::new(2, 2, 2).unwrap();
        for a in [ty(0, 0), ty(1, 0), ty(1, 1), ty(2, 1)] {
            for d in [ty(2, 0), ty(2, 1), ty(2, 2)] {
                for meet in [ty(0, 0)] {
                    let p = g.pi(meet, a, ty(0, 0), ty(2, 1), d).unwrap();
                    assert_eq!(p, g.count_n(a, d).unwrap(), "a={a} d={d}");
                }
            }
        }
    }

    #[test]
    fn pi_full_range_hits_negative_exponent() {
        let g = Geometry::new(2, 2, 2).unwrap();
        // i = 1, i1 = 1 > j1 = 0 with s = s1 = 2, m = 2, mB = 1: exponent -1.
        let args = (ty(1, 0), ty(1, 0), ty(2, 2), ty(2, 1), ty(2, 2));
        let full = g.pi_with_range(args.0, args.1, args.2, args.3, args.4, PiRange::Full);
        assert!(matches!(full, Err(Error::NegativeExponent(-1))));
        assert!(g.pi(args.0, args.1, args.2, args.3, args.4).is_ok());
    }

    #[test]
    fn psi_zero_case() {
        let q = q2();
        assert_eq!(psi(ty(0, 0), ty(0, 0), ty(0, 0), ty(2, 1), q).unwrap(), 1.into());
    }

    #[test]
    fn psi_total_row() {
        // Summing ψ over all meet types counts every D of the given type in A.
        let q = q2();
        for (r, s, a) in [
            (ty(1, 0), ty(1, 0), ty(2, 1)),
            (ty(1, 1), ty(2, 1), ty(2, 1)),
            (ty(2, 1), ty(1, 0), ty(3, 1)),
        ] {
            let sol = psi_system(r, s, a, q).unwrap();
            let total: BigInt = sol.values.values().sum();
            assert_eq!(total, mu(ty(0, 0), r, a, q).unwrap());
        }
    }

    #[test]
    fn nu_triangularity() {
        for q in [2, 3, 5] {
            let q = FieldOrder::new(q).unwrap();
            for h in 0..5 {
                assert_eq!(nu_matrix_triangular(h, q).unwrap(), None);
            }
        }
    }
}
