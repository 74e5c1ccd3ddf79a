//! Residue arithmetic in `Z/NZ`, multiplicative orders, cyclotomic
//! polynomials over the integers, and checks of the factorization
//! `a^n - b^n = (a - b)(a - ωb)...(a - ω^(n-1) b)` in these rings.
//!
//! Moduli are machine words capped at `2^63`; all products widen to `u128`.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::polyring::DensePoly;

/// Largest modulus we accept.
pub const MAX_MODULUS: u64 = 1 << 63;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Modulus(u64);

impl Modulus {
    pub fn new(n: u64) -> Result<Self> {
        if !(2..=MAX_MODULUS).contains(&n) {
            return Err(Error::InvalidModulus(n));
        }
        Ok(Modulus(n))
    }

    #[inline]
    pub fn get(self) -> u64 {
        self.0
    }

    pub fn residue(self, value: u64) -> Residue {
        Residue::new(value, self)
    }

    /// Reduce a signed value into the canonical range `[0, N)`.
    pub fn residue_signed(self, value: i128) -> Residue {
        let v = value.rem_euclid(self.0 as i128) as u64;
        Residue {
            value: v,
            modulus: self,
        }
    }

    pub fn zero(self) -> Residue {
        Residue {
            value: 0,
            modulus: self,
        }
    }

    pub fn one(self) -> Residue {
        Residue {
            value: 1,
            modulus: self,
        }
    }

    #[inline]
    pub(crate) fn mul(self, a: u64, b: u64) -> u64 {
        mul_mod(a, b, self.0)
    }

    #[inline]
    pub(crate) fn add(self, a: u64, b: u64) -> u64 {
        let s = a as u128 + b as u128;
        (s % self.0 as u128) as u64
    }

    #[inline]
    pub(crate) fn sub(self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            self.0 - (b - a)
        }
    }

    #[inline]
    pub(crate) fn neg(self, a: u64) -> u64 {
        if a == 0 {
            0
        } else {
            self.0 - a
        }
    }
}

impl fmt::Display for Modulus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// An element of `Z/NZ`, always held by its canonical representative.
///
/// Binary operators panic if the operands carry different moduli; mixing
/// rings is a programming error, not a runtime condition.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Residue {
    value: u64,
    modulus: Modulus,
}

impl Residue {
    pub fn new(value: u64, modulus: Modulus) -> Self {
        Residue {
            value: value % modulus.get(),
            modulus,
        }
    }

    #[inline]
    pub fn value(self) -> u64 {
        self.value
    }

    #[inline]
    pub fn modulus(self) -> Modulus {
        self.modulus
    }

    pub fn is_zero(self) -> bool {
        self.value == 0
    }

    pub fn is_unit(self) -> bool {
        gcd(self.value, self.modulus.get()) == 1
    }

    pub fn pow(self, exp: u64) -> Self {
        Residue {
            value: pow_mod(self.value, exp, self.modulus.get()),
            modulus: self.modulus,
        }
    }

    pub fn inverse(self) -> Result<Self> {
        inv_mod(self.value, self.modulus.get())
            .map(|v| Residue {
                value: v,
                modulus: self.modulus,
            })
            .ok_or(Error::NotInvertible {
                value: self.value,
                modulus: self.modulus.get(),
            })
    }

    fn check(self, other: Residue) {
        assert_eq!(
            self.modulus, other.modulus,
            "residue arithmetic across different moduli"
        );
    }
}

impl fmt::Display for Residue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (mod {})", self.value, self.modulus)
    }
}

impl Add for Residue {
    type Output = Residue;
    fn add(self, rhs: Residue) -> Residue {
        self.check(rhs);
        Residue {
            value: self.modulus.add(self.value, rhs.value),
            modulus: self.modulus,
        }
    }
}

impl Sub for Residue {
    type Output = Residue;
    fn sub(self, rhs: Residue) -> Residue {
        self.check(rhs);
        Residue {
            value: self.modulus.sub(self.value, rhs.value),
            modulus: self.modulus,
        }
    }
}

impl Mul for Residue {
    type Output = Residue;
    fn mul(self, rhs: Residue) -> Residue {
        self.check(rhs);
        Residue {
            value: self.modulus.mul(self.value, rhs.value),
            modulus: self.modulus,
        }
    }
}

impl Neg for Residue {
    type Output = Residue;
    fn neg(self) -> Residue {
        Residue {
            value: self.modulus.neg(self.value),
            modulus: self.modulus,
        }
    }
}

/// A prime power `p^r` with `r >= 1` that fits the modulus budget.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PrimePower {
    p: u64,
    r: u32,
    value: u64,
}

impl PrimePower {
    pub fn new(p: u64, r: u32) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if r == 0 {
            return Err(Error::ZeroExponent);
        }
        match p.checked_pow(r) {
            Some(v) if v <= MAX_MODULUS => Ok(PrimePower { p, r, value: v }),
            _ => Err(Error::ModulusOverflow { p, r }),
        }
    }

    pub fn p(self) -> u64 {
        self.p
    }

    pub fn r(self) -> u32 {
        self.r
    }

    /// `p^r` as an integer.
    pub fn value(self) -> u64 {
        self.value
    }

    pub fn modulus(self) -> Modulus {
        Modulus(self.value)
    }

    /// The same prime with exponent `r + 1`.
    pub fn next(self) -> Result<Self> {
        PrimePower::new(self.p, self.r + 1)
    }
}

impl fmt::Display for PrimePower {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}^{}", self.p, self.r)
    }
}

#[inline]
pub fn mul_mod(a: u64, b: u64, n: u64) -> u64 {
    ((a as u128 * b as u128) % n as u128) as u64
}

pub fn pow_mod(mut base: u64, mut exp: u64, n: u64) -> u64 {
    if n == 1 {
        return 0;
    }
    let mut acc = 1u64;
    base %= n;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, n);
        }
        base = mul_mod(base, base, n);
        exp >>= 1;
    }
    acc
}

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// Modular inverse by the extended Euclidean algorithm.
pub fn inv_mod(a: u64, n: u64) -> Option<u64> {
    let (mut old_r, mut r) = (a as i128 % n as i128, n as i128);
    let (mut old_s, mut s) = (1i128, 0i128);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
    }
    if old_r != 1 {
        return None;
    }
    Some(old_s.rem_euclid(n as i128) as u64)
}

/// Deterministic trial division.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n < 4 {
        return true;
    }
    if n.is_multiple_of(2) || n.is_multiple_of(3) {
        return false;
    }
    let mut d = 5u64;
    while d.saturating_mul(d) <= n {
        if n.is_multiple_of(d) || n.is_multiple_of(d + 2) {
            return false;
        }
        d += 6;
    }
    true
}

/// Prime factorization as ascending `(prime, exponent)` pairs. `1` has none.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d.saturating_mul(d) <= n {
        if n.is_multiple_of(d) {
            let mut e = 0;
            while n.is_multiple_of(d) {
                n /= d;
                e += 1;
            }
            out.push((d, e));
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

pub fn euler_phi(n: u64) -> u64 {
    factorize(n)
        .into_iter()
        .fold(n, |acc, (p, _)| acc / p * (p - 1))
}

pub fn divisors(n: u64) -> Vec<u64> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            small.push(d);
            if d != n / d {
                large.push(n / d);
            }
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

/// Largest `e` with `p^e | n`.
pub fn vp(n: impl Into<i128>, p: u64) -> Result<u32> {
    let n: i128 = n.into();
    if n == 0 {
        return Err(Error::ValuationOfZero);
    }
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    let mut m = n.unsigned_abs();
    let p = p as u128;
    let mut e = 0;
    while m.is_multiple_of(p) {
        m /= p;
        e += 1;
    }
    Ok(e)
}

/// Smallest `d >= 1` with `x^d = 1`.
pub fn mult_order(x: Residue) -> Result<u64> {
    if !x.is_unit() {
        return Err(Error::NotInvertible {
            value: x.value(),
            modulus: x.modulus().get(),
        });
    }
    let n = x.modulus().get();
    let mut order = euler_phi(n);
    for (q, _) in factorize(order) {
        while order.is_multiple_of(q) && pow_mod(x.value(), order / q, n) == 1 {
            order /= q;
        }
    }
    Ok(order)
}

/// Smallest primitive root modulo an odd prime `p`.
pub fn smallest_primitive_root(p: u64) -> Result<u64> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if p == 2 {
        return Ok(1);
    }
    let qs: Vec<u64> = factorize(p - 1).into_iter().map(|(q, _)| q).collect();
    (2..p)
        .find(|&g| qs.iter().all(|&q| pow_mod(g, (p - 1) / q, p) != 1))
        .ok_or(Error::NotPrime(p))
}

/// The element `g^(p^(r-1))` of `Z/p^rZ`, where `g` is the smallest
/// primitive root mod `p`. It has multiplicative order exactly `p - 1`.
pub fn element_of_order_p_minus_1(pp: PrimePower) -> Result<Residue> {
    if pp.p() == 2 {
        return Err(Error::RequiresOddPrime(2));
    }
    let g = smallest_primitive_root(pp.p())?;
    let lift = pp.p().pow(pp.r() - 1);
    Ok(pp.modulus().residue(g).pow(lift))
}

/// Polynomial with integer coefficients, ascending degree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntPoly {
    coeffs: Vec<BigInt>,
}

impl IntPoly {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        IntPoly { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        IntPoly::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    /// `X^n - 1`.
    pub fn x_pow_minus_one(n: usize) -> Self {
        let mut c = vec![BigInt::zero(); n + 1];
        c[0] = BigInt::from(-1);
        c[n] = BigInt::one();
        IntPoly::new(c)
    }

    pub fn coefficients(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_monic(&self) -> bool {
        self.coeffs.last().is_some_and(One::is_one)
    }

    pub fn mul(&self, other: &IntPoly) -> IntPoly {
        if self.coeffs.is_empty() || other.coeffs.is_empty() {
            return IntPoly::new(Vec::new());
        }
        let mut out = vec![BigInt::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        IntPoly::new(out)
    }

    /// Exact division by a monic polynomial; `None` if there is a remainder.
    pub fn div_exact(&self, divisor: &IntPoly) -> Option<IntPoly> {
        let dd = divisor.degree()?;
        if !divisor.is_monic() {
            return None;
        }
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return rem
                .iter()
                .all(Zero::is_zero)
                .then(|| IntPoly::new(Vec::new()));
        }
        let mut quot = vec![BigInt::zero(); rem.len() - dd];
        for i in (0..quot.len()).rev() {
            let lead = rem[i + dd].clone();
            if lead.is_zero() {
                continue;
            }
            for (j, c) in divisor.coeffs.iter().enumerate() {
                rem[i + j] -= &lead * c;
            }
            quot[i] = lead;
        }
        rem.iter().all(Zero::is_zero).then(|| IntPoly::new(quot))
    }

    /// Evaluate at a residue, reducing coefficients into its ring.
    pub fn eval_mod(&self, x: Residue) -> Residue {
        let m = x.modulus();
        let big_m = BigInt::from(m.get());
        self.coeffs.iter().rev().fold(m.zero(), |acc, c| {
            let mut r = c % &big_m;
            if r.is_negative() {
                r += &big_m;
            }
            acc * x + m.residue(r.to_u64().expect("reduced coefficient fits u64"))
        })
    }
}

impl fmt::Display for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let mag = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            first = false;
            match (k, mag.is_one()) {
                (0, _) => write!(f, "{mag}")?,
                (1, true) => write!(f, "X")?,
                (1, false) => write!(f, "{mag}*X")?,
                (_, true) => write!(f, "X^{k}")?,
                (_, false) => write!(f, "{mag}*X^{k}")?,
            }
        }
        Ok(())
    }
}

/// The `n`-th cyclotomic polynomial.
pub fn cyclotomic(n: u64) -> Result<IntPoly> {
    if n == 0 {
        return Err(Error::OutOfRange(
            "cyclotomic index must be positive".into(),
        ));
    }
    let mut memo = BTreeMap::new();
    Ok(cyclotomic_memo(n, &mut memo))
}

fn cyclotomic_memo(n: u64, memo: &mut BTreeMap<u64, IntPoly>) -> IntPoly {
    if let Some(p) = memo.get(&n) {
        return p.clone();
    }
    let mut acc = IntPoly::x_pow_minus_one(n as usize);
    for d in divisors(n).into_iter().filter(|&d| d < n) {
        let phi_d = cyclotomic_memo(d, memo);
        acc = acc
            .div_exact(&phi_d)
            .expect("X^n - 1 is divisible by every lower cyclotomic factor");
    }
    memo.insert(n, acc.clone());
    acc
}

/// Whether `Φ_n(ω) = 0` in the ring of `ω`.
pub fn check_cyclotomic_vanishing(omega: Residue, n: u64) -> bool {
    match cyclotomic(n) {
        Ok(phi) => phi.eval_mod(omega).is_zero(),
        Err(_) => false,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RootFactorization {
    pub holds: bool,
    pub lhs: Residue,
    pub rhs: Residue,
}

/// Evaluate both sides of `a^n - b^n = ∏_{i<n} (a - ω^i b)`.
pub fn check_root_factorization(
    a: Residue,
    b: Residue,
    omega: Residue,
    n: u64,
) -> Result<RootFactorization> {
    for other in [b, omega] {
        if other.modulus() != a.modulus() {
            return Err(Error::ModulusMismatch(
                a.modulus().get(),
                other.modulus().get(),
            ));
        }
    }
    let found = mult_order(omega)?;
    if found != n {
        return Err(Error::WrongOrder { expected: n, found });
    }
    let lhs = a.pow(n) - b.pow(n);
    let mut rhs = a.modulus().one();
    let mut w = a.modulus().one();
    for _ in 0..n {
        rhs = rhs * (a - w * b);
        w = w * omega;
    }
    Ok(RootFactorization {
        holds: lhs == rhs,
        lhs,
        rhs,
    })
}

/// Checks `1 - k^(p-1) t^(p-1) = ∏_{i=0}^{p-2} (1 - ω^i k t)` in
/// `Z/p^rZ[t]` for every unit `k`.
pub fn check_poly_root_factorization(omega: Residue, pp: PrimePower) -> bool {
    let m = pp.modulus();
    if omega.modulus() != m || pp.p() == 2 {
        return false;
    }
    let e = (pp.p() - 1) as usize;
    (1..pp.value()).filter(|k| k % pp.p() != 0).all(|k| {
        let k = m.residue(k);
        let mut lhs = vec![0u64; e + 1];
        lhs[0] = 1;
        lhs[e] = (-k.pow(e as u64)).value();
        let lhs = DensePoly::new(m, lhs);

        let mut w = m.one();
        let mut rhs = DensePoly::one(m);
        for _ in 0..e {
            let factor = DensePoly::new(m, vec![1, (-(w * k)).value()]);
            rhs = rhs.mul(&factor).expect("same modulus");
            w = w * omega;
        }
        lhs == rhs
    })
}

/// Combine residues modulo pairwise coprime moduli into one residue modulo
/// their product.
pub fn crt(parts: &[Residue]) -> Result<Residue> {
    let mut iter = parts.iter();
    let first = iter
        .next()
        .ok_or_else(|| Error::OutOfRange("CRT needs at least one residue".into()))?;
    let (mut x, mut m) = (first.value() as u128, first.modulus().get() as u128);
    for part in iter {
        let (y, n) = (part.value() as u128, part.modulus().get() as u128);
        let m_mod_n = (m % n) as u64;
        let inv = inv_mod(m_mod_n, n as u64).ok_or(Error::NotInvertible {
            value: m_mod_n,
            modulus: n as u64,
        })? as u128;
        // x' = x + m * ((y - x) * m^-1 mod n)
        let diff = (y + n - x % n) % n;
        let t = diff * inv % n;
        let new_m = m
            .checked_mul(n)
            .filter(|&v| v <= MAX_MODULUS as u128)
            .ok_or_else(|| Error::OutOfRange("CRT product exceeds modulus budget".into()))?;
        x = (x + m * t) % new_m;
        m = new_m;
    }
    Ok(Modulus(m as u64).residue(x as u64))
}
