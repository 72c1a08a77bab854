//! Eigenvalues, degrees and multiplicities of the Grassmann scheme
//! `J_q(n, d)`, checked against a concretely built scheme by exact rank
//! computations.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::enumeration::DEFAULT_CAP;
use crate::error::{param, Error, Result};
use crate::exact_q::{choose2, rat_string, FieldOrder};
use crate::gf_space::Ambient;
use crate::matrix::{rank_bareiss, IntMatrix};
use crate::report::{all_passed, CheckResult};
use crate::scheme::{build_scheme, intersection_numbers, SchemeInstance};

fn check_range(n: i64, d: i64, q: u64) -> Result<FieldOrder> {
    if d < 0 || d > n {
        return param(format!("need 0 <= d <= n, got n = {n}, d = {d}"));
    }
    FieldOrder::new(q)
}

/// `P_i(r) = Σ_{j<=i} (−1)^{i−j} [d−j; i−j] [d−r; j] [n−d+j−r; j] q^{rj + C(i−j, 2)}`.
pub fn eigen_p(n: i64, d: i64, q: u64, i: i64, r: i64) -> Result<BigInt> {
    let qq = check_range(n, d, q)?;
    if !(0..=d).contains(&i) || !(0..=d).contains(&r) {
        return param(format!("need 0 <= i, r <= d, got i = {i}, r = {r}"));
    }
    let mut total = BigInt::zero();
    for j in 0..=i {
        let b = qq.binom(d - j, i - j) * qq.binom(d - r, j) * qq.binom(n - d + j - r, j);
        if b.is_zero() {
            continue;
        }
        let term = b * qq.pow(r * j + choose2(i - j))?;
        if (i - j) % 2 == 0 {
            total += term;
        } else {
            total -= term;
        }
    }
    Ok(total)
}

/// `v_i = q^{i²} [n−d; i] [d; i]`.
pub fn degree_v(n: i64, d: i64, q: u64, i: i64) -> Result<BigInt> {
    let qq = check_range(n, d, q)?;
    if !(0..=d).contains(&i) {
        return param(format!("need 0 <= i <= d, got i = {i}"));
    }
    Ok(qq.pow(i * i)? * qq.binom(n - d, i) * qq.binom(d, i))
}

/// Eigenmatrix `P[i][r] = P_i(r)`, degrees and multiplicities. Classes
/// beyond `min(d, n − d)` are empty, so all indices run over
/// `0..=min(d, n − d)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EigenData {
    pub n: i64,
    pub d: i64,
    pub q: u64,
    pub p: Vec<Vec<BigInt>>,
    pub v: Vec<BigInt>,
    pub m: Vec<BigInt>,
}

impl EigenData {
    pub fn new(n: i64, d: i64, q: u64) -> Result<Self> {
        let qq = check_range(n, d, q)?;
        let e = d.min(n - d);
        let p = (0..=e)
            .map(|i| (0..=e).map(|r| eigen_p(n, d, q, i, r)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        let v = (0..=e).map(|i| degree_v(n, d, q, i)).collect::<Result<Vec<_>>>()?;
        let points = qq.binom(n, d);
        let m = multiplicities(&p, &v, &points)?;
        Ok(EigenData { n, d, q, p, v, m })
    }

    /// Number of classes minus one.
    pub fn classes(&self) -> usize {
        self.v.len() - 1
    }

    pub fn points(&self) -> BigInt {
        self.v.iter().sum()
    }

    pub fn to_json(&self) -> Value {
        let strs = |row: &[BigInt]| row.iter().map(BigInt::to_string).collect::<Vec<_>>();
        json!({
            "P": self.p.iter().map(|row| strs(row)).collect::<Vec<_>>(),
            "v": strs(&self.v),
            "m": strs(&self.m),
        })
    }
}

/// `m_r = |X| / Σ_i P_i(r)² / v_i`, required to be a positive integer.
pub fn multiplicities(p: &[Vec<BigInt>], v: &[BigInt], points: &BigInt) -> Result<Vec<BigInt>> {
    let e = v.len();
    let mut out = Vec::with_capacity(e);
    for r in 0..e {
        let mut s = BigRational::zero();
        for i in 0..e {
            if v[i].is_zero() {
                return Err(Error::Degenerate(format!("degree v_{i} is zero")));
            }
            s += BigRational::new(&p[i][r] * &p[i][r], v[i].clone());
        }
        if s.is_zero() {
            return Err(Error::Inconsistency(format!("column {r} of P is zero")));
        }
        let m = BigRational::from_integer(points.clone()) / s;
        if !m.is_integer() || !m.is_positive() {
            return Err(Error::Inconsistency(format!(
                "multiplicity m_{r} = {} is not a positive integer",
                rat_string(&m)
            )));
        }
        out.push(m.to_integer());
    }
    Ok(out)
}

/// `Σ_i P_i(r) P_i(r') / v_i = δ_{rr'} |X| / m_r`.
pub fn check_orthogonality(eigen: &EigenData) -> CheckResult {
    let mut check = CheckResult::new("eigenmatrix orthogonality");
    let e = eigen.v.len();
    let points = BigRational::from_integer(eigen.points());
    for r in 0..e {
        for r2 in 0..e {
            let mut s = BigRational::zero();
            for i in 0..e {
                s += BigRational::new(&eigen.p[i][r] * &eigen.p[i][r2], eigen.v[i].clone());
            }
            let want = if r == r2 {
                &points / BigRational::from_integer(eigen.m[r].clone())
            } else {
                BigRational::zero()
            };
            check.record(s == want, || json!({"r": r, "r2": r2, "sum": rat_string(&s), "expected": rat_string(&want)}));
        }
    }
    check
}

#[derive(Clone, Debug, Serialize)]
pub struct SpectraReport {
    pub eigen: Value,
    pub points: String,
    pub checks: Vec<CheckResult>,
    pub verified: bool,
}

/// Rank of `A − θ I` over `Q`.
fn rank_shifted(a: &IntMatrix, theta: &BigInt) -> usize {
    let rows: Vec<Vec<BigInt>> = (0..a.rows())
        .map(|i| {
            (0..a.cols())
                .map(|j| {
                    let x = BigInt::from(a.get(i, j));
                    if i == j {
                        x - theta
                    } else {
                        x
                    }
                })
                .collect()
        })
        .collect();
    rank_bareiss(rows, a.cols())
}

/// Check the closed forms against `J_q(n, d)` built with `cap`.
pub fn verify_spectra_with_cap(n: i64, d: i64, q: u64, cap: u64) -> Result<SpectraReport> {
    let eigen = EigenData::new(n, d, q)?;
    if q > u32::MAX as u64 {
        return param("q too large");
    }
    let ambient = Ambient::new(n as usize, 0, q as u32)?;
    let scheme = build_scheme(ambient, d as usize, 0, cap)?;
    verify_spectra_on(&eigen, &scheme)
}

/// [`verify_spectra_with_cap`] with the default cap.
pub fn verify_spectra(n: i64, d: i64, q: u64) -> Result<SpectraReport> {
    verify_spectra_with_cap(n, d, q, DEFAULT_CAP)
}

/// Check `eigen` against an already built Grassmann scheme.
pub fn verify_spectra_on(eigen: &EigenData, scheme: &SchemeInstance) -> Result<SpectraReport> {
    let e = eigen.v.len();
    let mut checks = Vec::new();

    let mut basic = CheckResult::new("eigenmatrix shape, degrees and multiplicities");
    for r in 0..e {
        basic.record(eigen.p[0][r].is_one(), || json!({"kind": "P_0(r) != 1", "r": r}));
    }
    for i in 0..e {
        basic.record(eigen.p[i][0] == eigen.v[i], || json!({"kind": "P_i(0) != v_i", "i": i}));
    }
    let total: BigInt = eigen.m.iter().sum();
    basic.record(BigInt::from(scheme.len()) == total, || {
        json!({"kind": "multiplicities do not sum to the point count", "sum": total.to_string(), "points": scheme.len().to_string()})
    });
    basic.record(eigen.m.iter().all(|m| m.is_positive()), || json!({"kind": "non-positive multiplicity"}));
    checks.push(basic);
    checks.push(check_orthogonality(eigen));

    let (table, constancy) = intersection_numbers(scheme);
    checks.push(constancy);
    let mut degrees = CheckResult::new("degrees match the built scheme");
    for k in 0..=scheme.d() {
        let formula = eigen.v.get(k).cloned().unwrap_or_default();
        let built = BigInt::from(table.v[k]);
        degrees.record(formula == built, || json!({"i": k, "formula": formula.to_string(), "built": built.to_string()}));
    }
    checks.push(degrees);

    let mut chars = CheckResult::new("character-table identity");
    for i in 0..e {
        for j in 0..e {
            for r in 0..e {
                let lhs = &eigen.p[i][r] * &eigen.p[j][r];
                let rhs: BigInt = (0..e).map(|k| BigInt::from(table.get(k, i, j)) * &eigen.p[k][r]).sum();
                chars.record(lhs == rhs, || json!({"i": i, "j": j, "r": r, "product": lhs.to_string(), "expansion": rhs.to_string()}));
            }
        }
    }
    checks.push(chars);

    if e > 1 {
        let mut eig = CheckResult::new("eigenvalues of A_1");
        let a1 = scheme.adjacency(1);
        let len = scheme.len();
        let mut distinct: Vec<(BigInt, BigInt)> = Vec::new();
        for r in 0..e {
            match distinct.iter_mut().find(|(theta, _)| *theta == eigen.p[1][r]) {
                Some((_, m)) => *m += &eigen.m[r],
                None => distinct.push((eigen.p[1][r].clone(), eigen.m[r].clone())),
            }
        }
        let nullities: Vec<usize> = distinct.par_iter().map(|(theta, _)| len - rank_shifted(&a1, theta)).collect();
        for ((theta, m), nullity) in distinct.iter().zip(&nullities) {
            eig.record(BigInt::from(*nullity) == *m, || {
                json!({"eigenvalue": theta.to_string(), "multiplicity": m.to_string(), "nullity": nullity.to_string()})
            });
        }
        let covered: usize = nullities.iter().sum();
        eig.record(covered == len, || json!({"kind": "eigenspaces do not span", "dimension": covered.to_string()}));
        eig.note("eigenvalues", json!(distinct.iter().map(|(t, _)| t.to_string()).collect::<Vec<_>>()));
        checks.push(eig);
    }

    Ok(SpectraReport {
        eigen: eigen.to_json(),
        points: scheme.len().to_string(),
        verified: all_passed(&checks),
        checks,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn j_2_4_2_values() {
        let e = EigenData::new(4, 2, 2).unwrap();
        assert_eq!(e.p, vec![ints(&[1, 1, 1]), ints(&[18, 3, -3]), ints(&[16, -4, 2])]);
        assert_eq!(e.v, ints(&[1, 18, 16]));
        assert_eq!(e.m, ints(&[1, 14, 20]));
        assert!(check_orthogonality(&e).passed);
    }

    #[test]
    fn small_cases() {
        let e = EigenData::new(3, 1, 2).unwrap();
        assert_eq!(e.p, vec![ints(&[1, 1]), ints(&[6, -1])]);
        assert_eq!(e.m, ints(&[1, 6]));
        // n < 2d: J_2(3, 2) has one non-trivial class.
        let e = EigenData::new(3, 2, 2).unwrap();
        assert_eq!(e.v, ints(&[1, 6]));
        let e = EigenData::new(2, 2, 3).unwrap();
        assert_eq!(e.v, ints(&[1]));
        assert!(eigen_p(4, 2, 2, 3, 0).is_err());
        assert!(degree_v(2, 3, 2, 0).is_err());
    }

    #[test]
    fn verified_against_built_schemes() {
        for (n, d, q) in [(4, 2, 2), (3, 1, 2), (3, 2, 2), (5, 2, 2), (4, 2, 3), (3, 1, 3)] {
            let r = verify_spectra(n, d, q).unwrap();
            for c in &r.checks {
                assert!(c.passed, "({n},{d},{q}) {}: {:?}", c.property, c.failures.first());
            }
        }
    }
}
