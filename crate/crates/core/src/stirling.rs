//! Signless Stirling numbers of the first kind.
//!
//! Two independent routes are provided. [`ExactStirlingTable`] builds the
//! triangle `c(i, j) = c(i-1, j-1) + (i-1) c(i-1, j)` in big integers and is
//! used as the oracle. [`stirling_mod_pr`] evaluates `c(n, k) mod p^r`,
//! `r = v_p(n)`, through closed forms in binomial coefficients without ever
//! forming `c(n, k)`.

use std::fmt;
use std::sync::{OnceLock, RwLock};

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};

use crate::binomial::binom_mod_prime_power;
use crate::error::{Error, Result};
use crate::modring::{crt, factorize, vp, Modulus, PrimePower, Residue};

pub const DEFAULT_ORACLE_BOUND: u64 = 512;

/// Environment variable overriding [`DEFAULT_ORACLE_BOUND`].
pub const ORACLE_BOUND_ENV: &str = "STIRLING_ORACLE_MAX";

/// Largest `n` for which [`stirling_exact`] will build rows. Read once.
pub fn oracle_bound() -> u64 {
    static BOUND: OnceLock<u64> = OnceLock::new();
    *BOUND.get_or_init(|| {
        std::env::var(ORACLE_BOUND_ENV)
            .ok()
            .and_then(|s| s.trim().parse().ok())
            .unwrap_or(DEFAULT_ORACLE_BOUND)
    })
}

/// Rows `0..=n_max` of the signless Stirling triangle.
#[derive(Debug, Clone)]
pub struct ExactStirlingTable {
    rows: Vec<Vec<BigUint>>,
}

impl ExactStirlingTable {
    pub fn new(n_max: u64) -> Self {
        let mut t = ExactStirlingTable {
            rows: vec![vec![BigUint::one()]],
        };
        t.extend_to(n_max);
        t
    }

    pub fn n_max(&self) -> u64 {
        self.rows.len() as u64 - 1
    }

    pub fn extend_to(&mut self, n_max: u64) {
        while self.n_max() < n_max {
            let i = self.rows.len();
            let prev = &self.rows[i - 1];
            let factor = BigUint::from(i as u64 - 1);
            let mut row = Vec::with_capacity(i + 1);
            row.push(BigUint::zero());
            for j in 1..=i {
                let mut v = prev[j - 1].clone();
                if let Some(c) = prev.get(j) {
                    v += c * &factor;
                }
                row.push(v);
            }
            self.rows.push(row);
        }
    }

    /// `c(n, k)`, zero outside the triangle; `None` past `n_max`.
    pub fn get(&self, n: u64, k: i64) -> Option<BigUint> {
        let row = self.rows.get(n as usize)?;
        if k < 0 {
            return Some(BigUint::zero());
        }
        Some(row.get(k as usize).cloned().unwrap_or_default())
    }

    pub fn row(&self, n: u64) -> Option<&[BigUint]> {
        self.rows.get(n as usize).map(Vec::as_slice)
    }
}

fn shared_table() -> &'static RwLock<ExactStirlingTable> {
    static TABLE: OnceLock<RwLock<ExactStirlingTable>> = OnceLock::new();
    TABLE.get_or_init(|| RwLock::new(ExactStirlingTable::new(0)))
}

/// Exact `c(n, k)` from the shared oracle table, grown on demand up to
/// [`oracle_bound`].
pub fn stirling_exact(n: u64, k: i64) -> Result<BigUint> {
    let bound = oracle_bound();
    if n > bound {
        return Err(Error::OracleBoundExceeded { n, bound });
    }
    {
        let table = shared_table().read().expect("oracle lock poisoned");
        if let Some(v) = table.get(n, k) {
            return Ok(v);
        }
    }
    let mut table = shared_table().write().expect("oracle lock poisoned");
    table.extend_to(n);
    Ok(table.get(n, k).expect("row just built"))
}

/// `v_p(x)`, or `None` for zero.
pub fn big_valuation(x: &BigUint, p: u64) -> Option<u32> {
    if x.is_zero() {
        return None;
    }
    let p_big = BigUint::from(p);
    let mut x = x.clone();
    let mut e = 0;
    while (&x % &p_big).is_zero() {
        x /= &p_big;
        e += 1;
    }
    Some(e)
}

/// `x mod N` for a big integer.
pub fn big_mod(x: &BigUint, modulus: Modulus) -> Residue {
    let r = (x % BigUint::from(modulus.get()))
        .to_u64()
        .expect("remainder fits u64");
    modulus.residue(r)
}

/// Which closed form produced a residue.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Branch {
    /// odd `p`, `p - 1` does not divide `n - k`
    OddZero,
    /// odd `p`, `n - k = l(p - 1)`
    OddBinomial,
    /// `p = 2`, `r = 1`
    EvenR1,
    /// `p = 2`, `r = 2`, `n - k = 2l`
    EvenR2Even,
    /// `p = 2`, `r = 2`, `n - k = 2l + 1`
    EvenR2Odd,
    /// `p = 2`, `r >= 3`, `n - k = 2l + 1`
    EvenBigOdd,
    /// `p = 2`, `r >= 3`, `n - k = 2l`
    EvenBigEven,
    /// `k < 0` or `k > n`
    OutOfRange,
}

impl Branch {
    pub const ALL: [Branch; 8] = [
        Branch::OddZero,
        Branch::OddBinomial,
        Branch::EvenR1,
        Branch::EvenR2Even,
        Branch::EvenR2Odd,
        Branch::EvenBigOdd,
        Branch::EvenBigEven,
        Branch::OutOfRange,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Branch::OddZero => "OddZero",
            Branch::OddBinomial => "OddBinomial",
            Branch::EvenR1 => "EvenR1",
            Branch::EvenR2Even => "EvenR2Even",
            Branch::EvenR2Odd => "EvenR2Odd",
            Branch::EvenBigOdd => "EvenBigOdd",
            Branch::EvenBigEven => "EvenBigEven",
            Branch::OutOfRange => "OutOfRange",
        }
    }
}

impl fmt::Display for Branch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StirlingResult {
    pub n: u64,
    pub k: i64,
    pub modulus: PrimePower,
    pub value: Residue,
    pub branch: Branch,
}

// Extra sign flip in the odd binomial branch, only under the test feature.
const ODD_SIGN_SHIFT: u64 = if cfg!(feature = "corrupt-branch") {
    1
} else {
    0
};

fn signed(x: Residue, l: u64) -> Residue {
    if l % 2 == 1 {
        -x
    } else {
        x
    }
}

/// `c(n, k) mod p^r` with `r = v_p(n)`, by the closed forms:
///
/// * odd `p`: zero unless `n - k = l(p-1)`, then `(-1)^l C(n/p, l)`;
/// * `p = 2, r = 1`: `C(n/2, n-k)`;
/// * `p = 2, r = 2`: `(-1)^l C(n/4, l)` for `n - k = 2l`, times `n/2` for
///   `n - k = 2l + 1`;
/// * `p = 2, r >= 3`: `(-1)^l C(n/4, l) n/2` for `n - k = 2l + 1` and
///   `(-1)^l [C(n/4, l) - (n/2) C(n/4, l-1)]` for `n - k = 2l`.
pub fn stirling_mod_pr(n: u64, k: i64, p: u64) -> Result<StirlingResult> {
    if n == 0 {
        return Err(Error::OutOfRange("n must be positive".into()));
    }
    let r = vp(n, p)?;
    if r == 0 {
        return Err(Error::NotDivisor { p, n });
    }
    let pp = PrimePower::new(p, r)?;
    let m = pp.modulus();
    let result = |value: Residue, branch| StirlingResult {
        n,
        k,
        modulus: pp,
        value,
        branch,
    };

    if k < 0 || k as u64 > n {
        return Ok(result(m.zero(), Branch::OutOfRange));
    }
    let d = n - k as u64;
    let binom = |top: u64, l: i64| binom_mod_prime_power(top, l, pp);

    if p != 2 {
        if !d.is_multiple_of(p - 1) {
            return Ok(result(m.zero(), Branch::OddZero));
        }
        let l = d / (p - 1);
        let v = signed(binom(n / p, l as i64), l + ODD_SIGN_SHIFT);
        return Ok(result(v, Branch::OddBinomial));
    }

    let half = m.residue(n / 2);
    let l = d / 2;
    let odd = d % 2 == 1;
    let (value, branch) = match (r, odd) {
        (1, _) => (binom(n / 2, d as i64), Branch::EvenR1),
        (2, false) => (signed(binom(n / 4, l as i64), l), Branch::EvenR2Even),
        (2, true) => (signed(binom(n / 4, l as i64) * half, l), Branch::EvenR2Odd),
        (_, true) => (signed(binom(n / 4, l as i64) * half, l), Branch::EvenBigOdd),
        (_, false) => {
            let inner = binom(n / 4, l as i64) - half * binom(n / 4, l as i64 - 1);
            (signed(inner, l), Branch::EvenBigEven)
        }
    };
    Ok(result(value, branch))
}

/// `c(n, k) mod n`, assembled by CRT from every prime power dividing `n`.
pub fn stirling_mod_n(n: u64, k: i64) -> Result<Residue> {
    let modulus = Modulus::new(n)?;
    let parts = factorize(n)
        .into_iter()
        .map(|(p, _)| stirling_mod_pr(n, k, p).map(|s| s.value))
        .collect::<Result<Vec<_>>>()?;
    Ok(modulus.residue(crt(&parts)?.value()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ValuationKind {
    /// `v_p >= value`
    AtLeastR,
    /// `v_p == value`
    Exact,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StirlingValuation {
    pub kind: ValuationKind,
    pub value: u32,
}

impl fmt::Display for StirlingValuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            ValuationKind::AtLeastR => write!(f, ">= {}", self.value),
            ValuationKind::Exact => write!(f, "= {}", self.value),
        }
    }
}

/// `v_p(c(p^r, k))` for `1 <= k <= p^r` from the closed forms. For `p = 2`
/// only `r >= 3` is covered.
///
/// With `p^r - k = l(p-1)` (odd `p`) the valuation is `r - 1 - v_p(l)` only
/// while `l <= p^(r-1)`; past that the binomial vanishes and `c(p^r, k)` is
/// divisible by `p^r`. The even case has the analogous cutoff at
/// `l = 2^(r-2) + 1`.
pub fn stirling_valuation(pp: PrimePower, k: i64) -> Result<StirlingValuation> {
    let (p, r, n) = (pp.p(), pp.r(), pp.value());
    if k < 1 || k as u64 > n {
        return Err(Error::OutOfRange(format!("k = {k} not in 1..={n}")));
    }
    let d = n - k as u64;
    let exact = |value| StirlingValuation {
        kind: ValuationKind::Exact,
        value,
    };
    let at_least_r = StirlingValuation {
        kind: ValuationKind::AtLeastR,
        value: r,
    };

    if d == 0 {
        return Ok(exact(0));
    }
    if p != 2 {
        if !d.is_multiple_of(p - 1) {
            return Ok(at_least_r);
        }
        let l = d / (p - 1);
        // C(p^(r-1), l) vanishes once l passes p^(r-1)
        if l > n / p {
            return Ok(at_least_r);
        }
        return Ok(exact(r - 1 - vp(l, p)?));
    }
    if r < 3 {
        return Err(Error::Unsupported(format!(
            "valuation formula for p = 2 needs r >= 3, got r = {r}"
        )));
    }
    let l = d / 2;
    if d % 2 == 1 {
        if l == 0 || l == 1 << (r - 2) {
            Ok(exact(r - 1))
        } else {
            Ok(at_least_r)
        }
    } else {
        let quarter = n / 4;
        if l <= quarter {
            Ok(exact(r - 2 - vp(l, 2)?))
        } else if l == quarter + 1 {
            // only the (n/2) C(n/4, l-1) term survives
            Ok(exact(r - 1))
        } else {
            Ok(at_least_r)
        }
    }
}
