//! Dense polynomials over `Z/NZ`, the rising-product polynomial
//! `P_n(t) = (1)(1 + t)(1 + 2t)...(1 + (n-1)t)`, its closed forms modulo
//! prime powers, and executable checks of the identities relating them.

use std::fmt;

use crate::binomial::binom_mod_prime_power;
use crate::error::{Error, Result};
use crate::modring::{factorize, vp, Modulus, PrimePower, Residue};
use crate::stirling::{big_valuation, stirling_exact};

/// Factor lists shorter than this are multiplied left to right.
pub const PRODUCT_TREE_THRESHOLD: usize = 32;

/// Polynomial over `Z/NZ` with coefficients in ascending degree.
///
/// Trailing zeros are always trimmed, so two polynomials are equal exactly
/// when their coefficient vectors are. The zero polynomial has no
/// coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DensePoly {
    modulus: Modulus,
    coeffs: Vec<u64>,
}

impl DensePoly {
    pub fn new(modulus: Modulus, mut coeffs: Vec<u64>) -> Self {
        let n = modulus.get();
        for c in coeffs.iter_mut() {
            *c %= n;
        }
        let mut p = DensePoly { modulus, coeffs };
        p.trim();
        p
    }

    pub fn from_signed(modulus: Modulus, coeffs: &[i64]) -> Self {
        let coeffs = coeffs
            .iter()
            .map(|&c| modulus.residue_signed(c as i128).value())
            .collect();
        DensePoly::new(modulus, coeffs)
    }

    pub fn zero(modulus: Modulus) -> Self {
        DensePoly {
            modulus,
            coeffs: Vec::new(),
        }
    }

    pub fn one(modulus: Modulus) -> Self {
        DensePoly::new(modulus, vec![1])
    }

    /// `1 + c t`.
    pub fn linear(modulus: Modulus, c: u64) -> Self {
        DensePoly::new(modulus, vec![1, c])
    }

    fn trim(&mut self) {
        while self.coeffs.last() == Some(&0) {
            self.coeffs.pop();
        }
    }

    pub fn modulus(&self) -> Modulus {
        self.modulus
    }

    pub fn coefficients(&self) -> &[u64] {
        &self.coeffs
    }

    /// Coefficient of `t^k`, zero past the degree.
    pub fn coeff(&self, k: usize) -> u64 {
        self.coeffs.get(k).copied().unwrap_or(0)
    }

    pub fn residue(&self, k: usize) -> Residue {
        self.modulus.residue(self.coeff(k))
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs == [1]
    }

    fn same_ring(&self, other: &DensePoly) -> Result<()> {
        if self.modulus != other.modulus {
            return Err(Error::ModulusMismatch(
                self.modulus.get(),
                other.modulus.get(),
            ));
        }
        Ok(())
    }

    pub fn add(&self, other: &DensePoly) -> Result<DensePoly> {
        self.same_ring(other)?;
        let len = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..len)
            .map(|k| self.modulus.add(self.coeff(k), other.coeff(k)))
            .collect();
        Ok(DensePoly::new(self.modulus, coeffs))
    }

    pub fn sub(&self, other: &DensePoly) -> Result<DensePoly> {
        self.same_ring(other)?;
        let len = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..len)
            .map(|k| self.modulus.sub(self.coeff(k), other.coeff(k)))
            .collect();
        Ok(DensePoly::new(self.modulus, coeffs))
    }

    pub fn mul(&self, other: &DensePoly) -> Result<DensePoly> {
        self.same_ring(other)?;
        Ok(schoolbook(self, other))
    }

    pub fn scale(&self, c: u64) -> DensePoly {
        let m = self.modulus;
        let coeffs = self.coeffs.iter().map(|&a| m.mul(a, c % m.get())).collect();
        DensePoly::new(m, coeffs)
    }

    /// Substitute `t -> c t`: the coefficient of `t^k` is multiplied by `c^k`.
    pub fn substitute_scaled(&self, c: u64) -> DensePoly {
        let m = self.modulus;
        let c = c % m.get();
        let mut power = 1u64;
        let coeffs = self
            .coeffs
            .iter()
            .map(|&a| {
                let v = m.mul(a, power);
                power = m.mul(power, c);
                v
            })
            .collect();
        DensePoly::new(m, coeffs)
    }

    /// Substitute `t -> -t`.
    pub fn negate_var(&self) -> DensePoly {
        let m = self.modulus;
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(k, &a)| if k % 2 == 1 { m.neg(a) } else { a })
            .collect();
        DensePoly::new(m, coeffs)
    }

    /// Reduce into `Z/MZ`; meaningful when `M` divides the current modulus.
    pub fn reduce(&self, modulus: Modulus) -> DensePoly {
        DensePoly::new(modulus, self.coeffs.clone())
    }
}

/// Renders as `c0 + c1*t + c2*t^2 + ...`, ascending, zero terms omitted.
impl fmt::Display for DensePoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, &c) in self.coeffs.iter().enumerate() {
            if c == 0 {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match (k, c) {
                (0, _) => write!(f, "{c}")?,
                (1, 1) => write!(f, "t")?,
                (1, _) => write!(f, "{c}*t")?,
                (_, 1) => write!(f, "t^{k}")?,
                _ => write!(f, "{c}*t^{k}")?,
            }
        }
        Ok(())
    }
}

fn schoolbook(a: &DensePoly, b: &DensePoly) -> DensePoly {
    let m = a.modulus;
    if a.is_zero() || b.is_zero() {
        return DensePoly::zero(m);
    }
    let n = m.get() as u128;
    let mut acc = vec![0u128; a.coeffs.len() + b.coeffs.len() - 1];
    if n <= u32::MAX as u128 {
        // products fit in 64 bits, so a u128 holds any realistic row sum
        for (i, &x) in a.coeffs.iter().enumerate() {
            for (j, &y) in b.coeffs.iter().enumerate() {
                acc[i + j] += x as u128 * y as u128;
            }
        }
    } else {
        for (i, &x) in a.coeffs.iter().enumerate() {
            for (j, &y) in b.coeffs.iter().enumerate() {
                acc[i + j] = (acc[i + j] + x as u128 * y as u128 % n) % n;
            }
        }
    }
    DensePoly::new(m, acc.into_iter().map(|v| (v % n) as u64).collect())
}

pub fn poly_mul(a: &DensePoly, b: &DensePoly) -> Result<DensePoly> {
    a.mul(b)
}

/// Left-to-right product. `modulus` is used for the empty product.
pub fn sequential_product(modulus: Modulus, factors: &[DensePoly]) -> Result<DensePoly> {
    factors
        .iter()
        .try_fold(DensePoly::one(modulus), |acc, f| acc.mul(f))
}

/// Balanced product tree over the factors.
pub fn product_tree(modulus: Modulus, factors: &[DensePoly]) -> Result<DensePoly> {
    if factors.len() < PRODUCT_TREE_THRESHOLD {
        return sequential_product(modulus, factors);
    }
    let (left, right) = factors.split_at(factors.len() / 2);
    product_tree(modulus, left)?.mul(&product_tree(modulus, right)?)
}

/// `P_n(t) = ∏_{k=0}^{n-1} (1 + k t)` reduced mod `N`.
pub fn pochhammer_poly(n: u64, modulus: Modulus) -> DensePoly {
    let factors: Vec<DensePoly> = (0..n).map(|k| DensePoly::linear(modulus, k)).collect();
    product_tree(modulus, &factors).expect("all factors share the modulus")
}

/// `(1 - t^step)^exponent` mod `p^r`, expanded one binomial at a time.
fn one_minus_power(step: usize, exponent: u64, pp: PrimePower) -> DensePoly {
    let m = pp.modulus();
    let mut coeffs = vec![0u64; step * exponent as usize + 1];
    for l in 0..=exponent {
        let c = binom_mod_prime_power(exponent, l as i64, pp);
        let c = if l % 2 == 1 { -c } else { c };
        coeffs[step * l as usize] = c.value();
    }
    DensePoly::new(m, coeffs)
}

/// `(1 - t^(p-1))^(p^(r-1) m)` modulo `p^r`, for odd `p` not dividing `m`.
pub fn closed_form_odd(pp: PrimePower, m: u64) -> Result<DensePoly> {
    let p = pp.p();
    if p == 2 {
        return Err(Error::RequiresOddPrime(2));
    }
    if m == 0 || m.is_multiple_of(p) {
        return Err(Error::NotCoprime { m, p });
    }
    let exponent = p.pow(pp.r() - 1) * m;
    Ok(one_minus_power((p - 1) as usize, exponent, pp))
}

/// Closed form of `P_n(t)` modulo `2^r`, `r = v_2(n)`:
///
/// * `r = 1`: `(1 + t)^(n/2)`
/// * `r = 2`: `(1 + (n/2) t)(1 - t^2)^(n/4)`
/// * `r >= 3`: `(1 - t^2)^(n/4) (1 + (n/2) t (t + 1))`
pub fn closed_form_even(n: u64) -> Result<DensePoly> {
    if n == 0 || n % 2 == 1 {
        return Err(Error::NotEven(n));
    }
    let r = vp(n, 2)?;
    let pp = PrimePower::new(2, r)?;
    let m = pp.modulus();
    let half = n / 2;
    match r {
        1 => {
            let coeffs = (0..=half)
                .map(|j| binom_mod_prime_power(half, j as i64, pp).value())
                .collect();
            Ok(DensePoly::new(m, coeffs))
        }
        2 => {
            let base = one_minus_power(2, n / 4, pp);
            base.mul(&DensePoly::linear(m, half))
        }
        _ => {
            let base = one_minus_power(2, n / 4, pp);
            let h = half % m.get();
            base.mul(&DensePoly::new(m, vec![1, h, h]))
        }
    }
}

/// The additive closed form of `P_{2^r}(t)` modulo `2^r` for `r >= 3`:
/// `(1 - t^2)^(2^(r-2)) + 2^(r-1) (t + t^2 + t^(2^(r-1)+1) + t^(2^(r-1)+2))`.
pub fn closed_form_even_additive(r: u32) -> Result<DensePoly> {
    if r < 3 {
        return Err(Error::OutOfRange(format!(
            "additive form needs r >= 3, got {r}"
        )));
    }
    let pp = PrimePower::new(2, r)?;
    let m = pp.modulus();
    let base = one_minus_power(2, 1 << (r - 2), pp);
    let half = 1usize << (r - 1);
    let mut corr = vec![0u64; half + 3];
    for k in [1, 2, half + 1, half + 2] {
        corr[k] = 1;
    }
    base.add(&DensePoly::new(m, corr).scale(1 << (r - 1)))
}

/// Position and values of the first coefficient where two polynomials differ.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CoeffMismatch {
    pub degree: usize,
    pub actual: u64,
    pub expected: u64,
}

pub fn first_mismatch(actual: &DensePoly, expected: &DensePoly) -> Option<CoeffMismatch> {
    let len = actual.coeffs.len().max(expected.coeffs.len());
    (0..len)
        .find(|&k| actual.coeff(k) != expected.coeff(k))
        .map(|k| CoeffMismatch {
            degree: k,
            actual: actual.coeff(k),
            expected: expected.coeff(k),
        })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrimeCongruence {
    pub p: u64,
    pub r: u32,
    pub holds: bool,
    pub first_mismatch: Option<CoeffMismatch>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CongruenceReport {
    pub n: u64,
    pub primes: Vec<PrimeCongruence>,
}

impl CongruenceReport {
    pub fn all_hold(&self) -> bool {
        self.primes.iter().all(|c| c.holds)
    }
}

/// Compare `P_n(t) mod p^r` with its closed form for every prime `p | n`.
pub fn verify_congruence(n: u64) -> Result<CongruenceReport> {
    if n < 2 {
        return Err(Error::OutOfRange(format!("n must be at least 2, got {n}")));
    }
    let mut primes = Vec::new();
    for (p, r) in factorize(n) {
        let pp = PrimePower::new(p, r)?;
        let actual = pochhammer_poly(n, pp.modulus());
        let expected = if p == 2 {
            closed_form_even(n)?
        } else {
            closed_form_odd(pp, n / pp.value())?
        };
        let mismatch = first_mismatch(&actual, &expected);
        primes.push(PrimeCongruence {
            p,
            r,
            holds: mismatch.is_none(),
            first_mismatch: mismatch,
        });
    }
    Ok(CongruenceReport { n, primes })
}

/// `P_{p^r}(p t) ≡ 1 (mod p^(r+1))`. Stated for odd `p`; for `p = 2` the
/// check simply reports what it finds.
pub fn verify_pt_lemma(pp: PrimePower) -> Result<bool> {
    let wide = pp.next()?;
    let poly = pochhammer_poly(pp.value(), wide.modulus()).substitute_scaled(pp.p());
    Ok(poly.is_one())
}

/// `P_{2^r}(t) ≡ P_{2^(r-1)}(t) P_{2^(r-1)}(-t) (1 - 2^(r-1) t) (mod 2^r)`.
pub fn verify_shift_identity(r: u32) -> Result<bool> {
    if r < 2 {
        return Err(Error::OutOfRange(format!(
            "shift identity needs r >= 2, got {r}"
        )));
    }
    let pp = PrimePower::new(2, r)?;
    let m = pp.modulus();
    let half = 1u64 << (r - 1);
    let lhs = pochhammer_poly(pp.value(), m);
    let p_half = pochhammer_poly(half, m);
    let rhs = p_half
        .mul(&p_half.negate_var())?
        .mul(&DensePoly::linear(m, m.neg(half)))?;
    Ok(lhs == rhs)
}

/// `P_{2^r}(t) ≡ (1 - t^2)^(2^(r-2)) (mod 2^(r-1))`.
pub fn verify_weak_even_lemma(r: u32) -> Result<bool> {
    if r < 2 {
        return Err(Error::OutOfRange(format!(
            "weak even congruence needs r >= 2, got {r}"
        )));
    }
    let pp = PrimePower::new(2, r - 1)?;
    let lhs = pochhammer_poly(1 << r, pp.modulus());
    let rhs = one_minus_power(2, 1 << (r - 2), pp);
    Ok(lhs == rhs)
}

/// `Q_{p^r}(X, pY) ≡ X^(p^r) (mod p^(r+1))` where
/// `Q_n(X, Y) = ∏_{i<n} (X + iY)`.
///
/// The coefficient of `X^(n-j) Y^j` in `Q_n(X, pY)` is `c(n, n-j) p^j`, so
/// this checks `v_p(c(p^r, p^r - j)) + j >= r + 1` for `1 <= j <= p^r`
/// against exact Stirling numbers.
pub fn verify_q_homogenization(pp: PrimePower) -> Result<bool> {
    let n = pp.value();
    let need = pp.r() as u64 + 1;
    for j in 1..=n {
        let c = stirling_exact(n, (n - j) as i64)?;
        if let Some(v) = big_valuation(&c, pp.p()) {
            if v as u64 + j < need {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(n: u64) -> Modulus {
        Modulus::new(n).unwrap()
    }

    fn pp(p: u64, r: u32) -> PrimePower {
        PrimePower::new(p, r).unwrap()
    }

    #[test]
    fn mul_examples() {
        let a = DensePoly::new(m(9), vec![1, 1]);
        let b = DensePoly::new(m(9), vec![1, 2]);
        assert_eq!(a.mul(&b).unwrap().coefficients(), &[1, 3, 2]);
        assert!(a.mul(&DensePoly::zero(m(9))).unwrap().is_zero());
        let c = DensePoly::new(m(8), vec![1, 4]);
        assert!(c.mul(&c).unwrap().is_one());
        assert_eq!(
            a.mul(&DensePoly::one(m(7))),
            Err(Error::ModulusMismatch(9, 7))
        );
    }

    #[test]
    fn wide_modulus_mul() {
        let big = m((1 << 62) + 1);
        let a = DensePoly::new(big, vec![1 << 61, 3]);
        let sq = a.mul(&a).unwrap();
        let n = big.get() as u128;
        let x = (1u128 << 61) % n;
        assert_eq!(sq.coeff(0) as u128, x * x % n);
        assert_eq!(sq.coeff(1) as u128, 2 * x * 3 % n);
        assert_eq!(sq.coeff(2), 9);
    }

    #[test]
    fn pochhammer_examples() {
        assert!(pochhammer_poly(1, m(5)).is_one());
        assert_eq!(pochhammer_poly(2, m(4)).coefficients(), &[1, 1]);
        assert_eq!(
            pochhammer_poly(8, m(10_000_007)).coefficients(),
            &[1, 28, 322, 1960, 6769, 13132, 13068, 5040]
        );
        // leading coefficient 2 vanishes mod 2
        assert_eq!(pochhammer_poly(3, m(2)).coefficients(), &[1, 1]);
    }

    #[test]
    fn rendering() {
        assert_eq!(pochhammer_poly(2, m(4)).to_string(), "1 + t");
        assert_eq!(
            pochhammer_poly(4, m(4)).to_string(),
            "1 + 2*t + 3*t^2 + 2*t^3"
        );
        assert_eq!(pochhammer_poly(1, m(7)).to_string(), "1");
        assert_eq!(DensePoly::zero(m(7)).to_string(), "0");
        assert_eq!(DensePoly::new(m(7), vec![0, 0, 1]).to_string(), "t^2");
    }

    #[test]
    fn odd_closed_forms() {
        assert_eq!(
            closed_form_odd(pp(3, 1), 1).unwrap().coefficients(),
            &[1, 0, 2]
        );
        assert_eq!(
            closed_form_odd(pp(3, 2), 1).unwrap().coefficients(),
            &[1, 0, 6, 0, 3, 0, 8]
        );
        assert_eq!(
            closed_form_odd(pp(5, 1), 1).unwrap().coefficients(),
            &[1, 0, 0, 0, 4]
        );
        assert_eq!(
            closed_form_odd(pp(2, 3), 1),
            Err(Error::RequiresOddPrime(2))
        );
        assert_eq!(
            closed_form_odd(pp(3, 1), 6),
            Err(Error::NotCoprime { m: 6, p: 3 })
        );
    }

    #[test]
    fn even_closed_forms() {
        assert_eq!(closed_form_even(2).unwrap().coefficients(), &[1, 1]);
        assert_eq!(closed_form_even(4).unwrap().coefficients(), &[1, 2, 3, 2]);
        assert_eq!(
            closed_form_even(8).unwrap().coefficients(),
            &[1, 4, 2, 0, 1, 4, 4]
        );
        assert_eq!(closed_form_even(7), Err(Error::NotEven(7)));
        assert_eq!(
            closed_form_even_additive(3).unwrap(),
            closed_form_even(8).unwrap()
        );
    }

    #[test]
    fn p8_mod_8_matches_listed_reduction() {
        // 4t^6 + 4t^5 + t^4 + 2t^2 + 4t + 1
        assert_eq!(
            pochhammer_poly(8, m(8)).coefficients(),
            &[1, 4, 2, 0, 1, 4, 4]
        );
    }

    #[test]
    fn congruence_reports() {
        let r9 = verify_congruence(9).unwrap();
        assert!(r9.all_hold());
        assert_eq!(r9.primes.len(), 1);
        let r12 = verify_congruence(12).unwrap();
        assert!(r12.all_hold());
        assert_eq!(
            r12.primes.iter().map(|c| (c.p, c.r)).collect::<Vec<_>>(),
            vec![(2, 2), (3, 1)]
        );
        assert!(verify_congruence(2).unwrap().all_hold());
        assert!(verify_congruence(1).is_err());
    }

    #[test]
    fn first_mismatch_reports_lowest_degree() {
        let a = DensePoly::new(m(9), vec![1, 2, 3]);
        let b = DensePoly::new(m(9), vec![1, 2, 4, 5]);
        assert_eq!(
            first_mismatch(&a, &b),
            Some(CoeffMismatch {
                degree: 2,
                actual: 3,
                expected: 4
            })
        );
        assert_eq!(first_mismatch(&a, &a), None);
    }

    #[test]
    fn scaled_product_examples() {
        assert!(verify_pt_lemma(pp(3, 1)).unwrap());
        assert!(verify_pt_lemma(pp(3, 2)).unwrap());
        assert!(verify_pt_lemma(pp(5, 1)).unwrap());
        // 1 + 2t mod 4
        assert!(!verify_pt_lemma(pp(2, 1)).unwrap());
    }

    #[test]
    fn even_congruences() {
        for r in 2..=5 {
            assert!(verify_shift_identity(r).unwrap(), "shift r={r}");
            assert!(verify_weak_even_lemma(r).unwrap(), "weak r={r}");
        }
        assert!(verify_shift_identity(1).is_err());
        assert!(verify_weak_even_lemma(1).is_err());
    }

    #[test]
    fn q_homogenization_examples() {
        assert!(verify_q_homogenization(pp(3, 1)).unwrap());
        assert!(verify_q_homogenization(pp(3, 2)).unwrap());
        assert!(verify_q_homogenization(pp(5, 1)).unwrap());
    }

    #[test]
    fn substitution() {
        let p = DensePoly::new(m(27), vec![1, 1, 1]);
        assert_eq!(p.substitute_scaled(3).coefficients(), &[1, 3, 9]);
        assert_eq!(p.negate_var().coefficients(), &[1, 26, 1]);
        assert_eq!(p.substitute_scaled(9).coefficients(), &[1, 9]);
    }
}
