//! Binomial coefficients modulo prime powers, tracking the `p`-adic
//! valuation separately from the unit part so that no division by `p` is
//! ever attempted in `Z/p^rZ`.

use crate::error::{Error, Result};
use crate::modring::{crt, factorize, inv_mod, is_prime, Modulus, PrimePower, Residue};

/// `v_p(C(m, k))` by counting the carries in the base-`p` sum `k + (m - k)`.
pub fn kummer_valuation(m: u64, k: i64, p: u64) -> Result<u32> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if k < 0 || k as u64 > m {
        return Err(Error::OutOfRange(format!("k = {k} not in 0..={m}")));
    }
    let (mut a, mut b) = (k as u64, m - k as u64);
    let mut carry = 0u64;
    let mut carries = 0u32;
    while a > 0 || b > 0 {
        let s = a % p + b % p + carry;
        carry = u64::from(s >= p);
        carries += carry as u32;
        a /= p;
        b /= p;
    }
    Ok(carries)
}

fn strip(mut x: u64, p: u64) -> (u64, i64) {
    let mut e = 0;
    while x.is_multiple_of(p) {
        x /= p;
        e += 1;
    }
    (x, e)
}

/// `C(m, k) mod p^r`, with `C(m, k) = 0` outside `0 <= k <= m`.
pub fn binom_mod_prime_power(m: u64, k: i64, pp: PrimePower) -> Residue {
    let modulus = pp.modulus();
    if k < 0 || k as u64 > m {
        return modulus.zero();
    }
    let k = (k as u64).min(m - k as u64);
    let (p, q) = (pp.p(), pp.value());

    let mut num = 1u64;
    let mut den = 1u64;
    let mut valuation: i64 = 0;
    for i in 1..=k {
        let (nu, ne) = strip(m - k + i, p);
        let (du, de) = strip(i, p);
        num = modulus.mul(num, nu % q);
        den = modulus.mul(den, du % q);
        valuation += ne - de;
    }
    assert!(valuation >= 0, "negative valuation for C({m}, {k})");
    if valuation >= pp.r() as i64 {
        return modulus.zero();
    }
    let den_inv = inv_mod(den, q).expect("p-free part is a unit");
    let unit = modulus.mul(num, den_inv);
    modulus.residue(unit) * modulus.residue(p).pow(valuation as u64)
}

/// `C(m, k) mod n` by CRT over the prime-power factors of `n`.
pub fn binom_mod(m: u64, k: i64, n: Modulus) -> Residue {
    let parts: Vec<Residue> = factorize(n.get())
        .into_iter()
        .map(|(p, r)| {
            let pp = PrimePower::new(p, r).expect("factor of a valid modulus");
            binom_mod_prime_power(m, k, pp)
        })
        .collect();
    let combined = crt(&parts).expect("prime-power factors are coprime");
    n.residue(combined.value())
}
