//! Chern classes of permutation representations of cyclic groups.
//!
//! For `G = C_n` the integral cohomology is `Z[t]/(n t)` with `t = c_1(ρ)`,
//! so a total Chern class is a polynomial `1 + a_1 t + a_2 t^2 + ...` whose
//! positive-degree coefficients live in `Z/nZ`. A transitive `G`-set is
//! `G/H` for the unique subgroup `H` of order `d`; its permutation
//! representation is the regular representation of `G/H` pulled back along
//! `t' -> d t`, giving total class `P_{n/d}(d t)`.

use std::fmt;

use crate::error::{Error, Result};
use crate::modring::{vp, Modulus, PrimePower};
use crate::polyring::{pochhammer_poly, DensePoly};
use crate::stirling::stirling_mod_n;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct CyclicGroup {
    order: u64,
}

impl CyclicGroup {
    pub fn new(order: u64) -> Result<Self> {
        if order == 0 {
            return Err(Error::OutOfRange("group order must be positive".into()));
        }
        Ok(CyclicGroup { order })
    }

    pub fn order(self) -> u64 {
        self.order
    }

    fn modulus(self) -> Option<Modulus> {
        Modulus::new(self.order).ok()
    }
}

/// A finite `C_n`-set, recorded as the stabilizer order of each orbit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PermutationGSet {
    group: CyclicGroup,
    orbits: Vec<u64>,
}

impl PermutationGSet {
    pub fn new(group: CyclicGroup, orbits: Vec<u64>) -> Result<Self> {
        let n = group.order();
        if let Some(&d) = orbits.iter().find(|&&d| d == 0 || !n.is_multiple_of(d)) {
            return Err(Error::NotADivisorOfOrder { d, n });
        }
        Ok(PermutationGSet { group, orbits })
    }

    /// The regular representation: one free orbit.
    pub fn regular(group: CyclicGroup) -> Self {
        PermutationGSet {
            group,
            orbits: vec![1],
        }
    }

    pub fn group(&self) -> CyclicGroup {
        self.group
    }

    pub fn orbits(&self) -> &[u64] {
        &self.orbits
    }

    /// Number of points, i.e. the dimension of `C[X]`.
    pub fn dimension(&self) -> u64 {
        self.orbits.iter().map(|d| self.group.order() / d).sum()
    }
}

/// Coefficients `a_k` of `c_k = a_k t^k` for `k = 0..=dim`. `a_0` is always
/// 1; the rest are reduced mod `n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChernVector {
    group: CyclicGroup,
    coefficients: Vec<u64>,
}

impl ChernVector {
    fn from_poly(group: CyclicGroup, poly: Option<&DensePoly>, dimension: u64) -> Self {
        let mut coefficients = vec![0u64; dimension as usize + 1];
        coefficients[0] = 1;
        if let Some(poly) = poly {
            for (k, slot) in coefficients.iter_mut().enumerate().skip(1) {
                *slot = poly.coeff(k);
            }
        }
        ChernVector {
            group,
            coefficients,
        }
    }

    pub fn group(&self) -> CyclicGroup {
        self.group
    }

    pub fn coefficients(&self) -> &[u64] {
        &self.coefficients
    }

    pub fn coefficient(&self, k: usize) -> u64 {
        self.coefficients.get(k).copied().unwrap_or(0)
    }

    pub fn dimension(&self) -> u64 {
        self.coefficients.len() as u64 - 1
    }

    /// True when every `c_k` with `k >= 1` is zero.
    pub fn higher_classes_vanish(&self) -> bool {
        self.coefficients[1..].iter().all(|&a| a == 0)
    }

    /// `(k, a_k)` for every nonzero class with `k >= 1`.
    pub fn nonzero_classes(&self) -> impl Iterator<Item = (usize, u64)> + '_ {
        self.coefficients
            .iter()
            .enumerate()
            .skip(1)
            .filter(|(_, &a)| a != 0)
            .map(|(k, &a)| (k, a))
    }
}

/// One line per nonzero class: `c_0 = 1`, then `c_k = a_k t^k`.
impl fmt::Display for ChernVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "c_0 = 1")?;
        for (k, a) in self.nonzero_classes() {
            write!(f, "\nc_{k} = {a} t^{k}")?;
        }
        Ok(())
    }
}

/// Chern classes of the regular representation of `C_n`:
/// `a_k = c(n, n - k) mod n`.
pub fn chern_regular(n: u64) -> Result<ChernVector> {
    let group = CyclicGroup::new(n)?;
    let mut coefficients = vec![0u64; n as usize + 1];
    coefficients[0] = 1;
    if n >= 2 {
        for (k, slot) in coefficients.iter_mut().enumerate().skip(1) {
            *slot = stirling_mod_n(n, (n - k as u64) as i64)?.value();
        }
    }
    Ok(ChernVector {
        group,
        coefficients,
    })
}

fn orbit_poly(modulus: Modulus, n: u64, d: u64) -> DensePoly {
    pochhammer_poly(n / d, modulus).substitute_scaled(d)
}

/// Chern classes of `C[G/H]` with `|H| = d`: the coefficients of
/// `P_{n/d}(d t) mod n`.
pub fn chern_orbit(n: u64, d: u64) -> Result<ChernVector> {
    let group = CyclicGroup::new(n)?;
    if d == 0 || !n.is_multiple_of(d) {
        return Err(Error::NotADivisorOfOrder { d, n });
    }
    let poly = group.modulus().map(|m| orbit_poly(m, n, d));
    Ok(ChernVector::from_poly(group, poly.as_ref(), n / d))
}

/// Whitney product of the orbit classes.
pub fn chern_permutation(gset: &PermutationGSet) -> ChernVector {
    let group = gset.group();
    let n = group.order();
    let poly = group.modulus().map(|m| {
        gset.orbits()
            .iter()
            .map(|&d| orbit_poly(m, n, d))
            .fold(DensePoly::one(m), |acc, f| {
                acc.mul(&f).expect("orbit classes share the modulus")
            })
    });
    ChernVector::from_poly(group, poly.as_ref(), gset.dimension())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChernVanishingReport {
    pub prime_power: PrimePower,
    /// `k` in `1..=p^r` where "`c_k != 0` iff `p - 1 | k`" fails for the
    /// regular representation.
    pub regular_failures: Vec<u64>,
    /// Stabilizer orders `d > 1` whose orbit has a nonzero higher class.
    pub orbit_failures: Vec<u64>,
    /// Multiples of `p - 1` above `p^r - p^(r-1)`, the degree of
    /// `(1 - t^(p-1))^(p^(r-1))`. These classes vanish although `p - 1 | k`.
    pub beyond_degree: Vec<u64>,
}

impl ChernVanishingReport {
    pub fn regular_pattern_holds(&self) -> bool {
        self.regular_failures.is_empty()
    }

    pub fn orbits_vanish(&self) -> bool {
        self.orbit_failures.is_empty()
    }

    pub fn passed(&self) -> bool {
        self.regular_pattern_holds() && self.orbits_vanish()
    }

    /// Whether every failure of the regular pattern is one of the
    /// `beyond_degree` classes, and vice versa.
    pub fn failures_explained_by_degree(&self) -> bool {
        self.regular_failures == self.beyond_degree
    }
}

/// Checks, for `G = C_(p^r)` with `p` odd:
///
/// (a) regular representation: `c_k != 0` iff `p - 1 | k`, for `1 <= k <= p^r`;
/// (b) every orbit `G/H` with `|H| > 1` has all higher classes zero.
pub fn verify_chern_vanishing(pp: PrimePower) -> Result<ChernVanishingReport> {
    let p = pp.p();
    if p == 2 {
        return Err(Error::RequiresOddPrime(2));
    }
    let n = pp.value();
    let regular = chern_regular(n)?;
    let regular_failures = (1..=n)
        .filter(|&k| (regular.coefficient(k as usize) != 0) != (k % (p - 1) == 0))
        .collect();
    let top = n - n / p;
    let beyond_degree = (top + 1..=n).filter(|k| k % (p - 1) == 0).collect();

    let mut orbit_failures = Vec::new();
    for e in 1..=pp.r() {
        let d = p.pow(e);
        if !chern_orbit(n, d)?.higher_classes_vanish() {
            orbit_failures.push(d);
        }
    }
    Ok(ChernVanishingReport {
        prime_power: pp,
        regular_failures,
        orbit_failures,
        beyond_degree,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ChernValuation {
    pub zero: bool,
    pub valuation: Option<u32>,
}

/// Whether `c_k` of the regular representation of `C_(p^r)` vanishes, and
/// otherwise the exponent `e` in `c_k = p^e m t^k` with `m` prime to `p`.
///
/// With `k = l(p - 1)` the exponent is `e = r - 1 - v_p(l)`. The class is
/// zero when `p - 1` does not divide `k`, and also when `l > p^(r-1)`,
/// where the defining binomial `C(p^(r-1), l)` vanishes.
pub fn chern_valuation_regular(pp: PrimePower, k: u64) -> Result<ChernValuation> {
    let (p, r, n) = (pp.p(), pp.r(), pp.value());
    if p == 2 {
        return Err(Error::RequiresOddPrime(2));
    }
    if k == 0 || k > n {
        return Err(Error::OutOfRange(format!("k = {k} not in 1..={n}")));
    }
    let zero = ChernValuation {
        zero: true,
        valuation: None,
    };
    if !k.is_multiple_of(p - 1) {
        return Ok(zero);
    }
    let l = k / (p - 1);
    if l > n / p {
        return Ok(zero);
    }
    Ok(ChernValuation {
        zero: false,
        valuation: Some(r - 1 - vp(l, p)?),
    })
}
