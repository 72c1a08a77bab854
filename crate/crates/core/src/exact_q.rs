//! Exact integer and rational arithmetic plus the q-analog functions that
//! every closed-form count is built from.
//!
//! Gaussian binomials are memoized in a process-wide table keyed by
//! `(n, k, q)`. The table is behind an `RwLock`, so lookups from parallel
//! sweeps are safe.

use std::collections::HashMap;
use std::fmt;
use std::sync::{OnceLock, RwLock};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;
use serde_json::json;

use crate::error::{param, Error, Result};
use crate::report::CheckResult;

/// Arbitrary-precision signed integer.
pub type ExactInt = BigInt;

/// Arbitrary-precision rational, always in lowest terms with a positive
/// denominator.
pub type ExactRat = BigRational;

/// The order `q >= 2` used by the formula layer. It need not be prime; only
/// the enumeration layer requires a prime field.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct FieldOrder(u64);

impl FieldOrder {
    pub fn new(q: u64) -> Result<Self> {
        if q < 2 {
            return param(format!("q must be at least 2, got {q}"));
        }
        Ok(FieldOrder(q))
    }

    pub fn get(self) -> u64 {
        self.0
    }

    /// `q^e`. Negative exponents are rejected instead of producing a
    /// rational.
    pub fn pow(self, e: i64) -> Result<BigInt> {
        if e < 0 {
            return Err(Error::NegativeExponent(e));
        }
        Ok(num_traits::pow(BigInt::from(self.0), e as usize))
    }

    /// Gaussian binomial `[n; k]_q`, zero outside `0 <= k <= n`.
    pub fn binom(self, n: i64, k: i64) -> BigInt {
        if n < 0 || k < 0 || k > n {
            return BigInt::zero();
        }
        let k = k.min(n - k);
        if k == 0 {
            return BigInt::one();
        }
        let key = (n, k, self.0);
        if let Some(v) = memo().read().expect("memo poisoned").get(&key) {
            return v.clone();
        }
        let q = BigInt::from(self.0);
        let mut num = BigInt::one();
        let mut den = BigInt::one();
        for i in 0..k {
            num *= num_traits::pow(q.clone(), (n - i) as usize) - 1;
            den *= num_traits::pow(q.clone(), (i + 1) as usize) - 1;
        }
        debug_assert!((&num % &den).is_zero());
        let value = num / den;
        memo()
            .write()
            .expect("memo poisoned")
            .insert(key, value.clone());
        value
    }
}

impl fmt::Display for FieldOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

type MemoTable = RwLock<HashMap<(i64, i64, u64), BigInt>>;

fn memo() -> &'static MemoTable {
    static MEMO: OnceLock<MemoTable> = OnceLock::new();
    MEMO.get_or_init(|| RwLock::new(HashMap::new()))
}

/// Gaussian binomial coefficient `[n; k]_q`.
///
/// Returns 0 when `k < 0`, `n < 0` or `k > n`, and 1 when `k = 0 <= n`.
///
/// ```
/// use singscheme::exact_q::gauss_binom;
/// assert_eq!(gauss_binom(4, 2, 2).unwrap(), 35.into());
/// assert_eq!(gauss_binom(3, 5, 2).unwrap(), 0.into());
/// ```
pub fn gauss_binom(n: i64, k: i64, q: u64) -> Result<BigInt> {
    Ok(FieldOrder::new(q)?.binom(n, k))
}

/// `q^e` exactly; negative exponents are an error.
pub fn q_power(q: u64, e: i64) -> Result<BigInt> {
    FieldOrder::new(q)?.pow(e)
}

/// Ordinary binomial `C(x, 2)` for `x >= 0`, zero below.
pub fn choose2(x: i64) -> i64 {
    if x < 2 {
        0
    } else {
        x * (x - 1) / 2
    }
}

/// Exact rational from an integer pair. Panics on a zero denominator, which
/// callers rule out beforehand.
pub fn ratio(num: impl Into<BigInt>, den: impl Into<BigInt>) -> BigRational {
    BigRational::new(num.into(), den.into())
}

/// Decimal rendering used in every JSON report: integers as `"123"`,
/// rationals as `"p/q"` or `"p"` when integral.
pub fn rat_string(x: &BigRational) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// Symmetry `[n; k] = [n; n−k]` and both q-Pascal recurrences
/// `[n; k] = [n−1; k−1] + q^k [n−1; k] = q^{n−k} [n−1; k−1] + [n−1; k]`
/// for `0 <= k <= n <= max_n`.
pub fn check_q_identities(max_n: i64, qs: &[u64]) -> Result<CheckResult> {
    let mut check = CheckResult::new("Gaussian binomial identities");
    for &q in qs {
        let f = FieldOrder::new(q)?;
        for n in 0..=max_n {
            for k in 0..=n {
                let b = f.binom(n, k);
                check.record(b == f.binom(n, n - k), || json!({"identity": "symmetry", "q": q, "n": n, "k": k}));
                if n >= 1 {
                    let p1 = f.binom(n - 1, k - 1) + f.pow(k)? * f.binom(n - 1, k);
                    let p2 = f.pow(n - k)? * f.binom(n - 1, k - 1) + f.binom(n - 1, k);
                    check.record(b == p1, || json!({"identity": "pascal", "q": q, "n": n, "k": k}));
                    check.record(b == p2, || json!({"identity": "dual pascal", "q": q, "n": n, "k": k}));
                }
            }
        }
    }
    Ok(check)
}
