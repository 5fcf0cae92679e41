//! p-adic integers held to an explicit finite precision.

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::util::{is_prime, pow_mod};

/// An element of Z_p known modulo p^prec.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PadicInt {
    p: u64,
    prec: u32,
    value: BigUint,
}

fn check_prime(p: u64) -> Result<()> {
    if p % 2 == 1 && is_prime(p) {
        Ok(())
    } else {
        Err(Error::InvalidInput(format!("{p} is not an odd prime")))
    }
}

pub fn p_pow(p: u64, n: u32) -> BigUint {
    BigUint::from(p).pow(n)
}

impl PadicInt {
    pub fn new(value: &BigInt, p: u64, prec: u32) -> Result<Self> {
        check_prime(p)?;
        if prec == 0 {
            return Err(Error::PrecisionTooLow { have: 0, need: 1 });
        }
        let m = BigInt::from(p_pow(p, prec));
        let v = value.mod_floor(&m).to_biguint().expect("reduced value is nonnegative");
        Ok(PadicInt { p, prec, value: v })
    }

    pub fn from_i64(value: i64, p: u64, prec: u32) -> Result<Self> {
        Self::new(&BigInt::from(value), p, prec)
    }

    /// `num / den` with `den` a p-adic unit.
    pub fn from_ratio(num: &BigInt, den: &BigInt, p: u64, prec: u32) -> Result<Self> {
        let d = Self::new(den, p, prec)?.inv()?;
        Self::new(num, p, prec)?.try_mul(&d)
    }

    fn raw(p: u64, prec: u32, value: BigUint) -> Self {
        let m = p_pow(p, prec);
        PadicInt { p, prec, value: value % m }
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn prec(&self) -> u32 {
        self.prec
    }

    pub fn value(&self) -> &BigUint {
        &self.value
    }

    pub fn modulus(&self) -> BigUint {
        p_pow(self.p, self.prec)
    }

    pub fn is_zero(&self) -> bool {
        self.value.is_zero()
    }

    pub fn is_unit(&self) -> bool {
        !(&self.value % self.p).is_zero()
    }

    /// Valuation of the residue, or `None` when it is zero at this precision.
    pub fn valuation(&self) -> Option<u32> {
        if self.value.is_zero() {
            return None;
        }
        let mut v = 0;
        let mut x = self.value.clone();
        while (&x % self.p).is_zero() {
            x /= self.p;
            v += 1;
        }
        Some(v)
    }

    /// Reduce to a lower precision.
    pub fn truncate(&self, prec: u32) -> Self {
        Self::raw(self.p, prec.min(self.prec), self.value.clone())
    }

    /// Congruence modulo p^k (k ≤ both precisions).
    pub fn congruent_mod(&self, other: &PadicInt, k: u32) -> bool {
        let m = p_pow(self.p, k);
        &self.value % &m == &other.value % &m
    }

    fn binary(&self, other: &PadicInt, f: impl Fn(&BigInt, &BigInt) -> BigInt) -> Result<Self> {
        if self.p != other.p {
            return Err(Error::PrimeMismatch(self.p, other.p));
        }
        let prec = self.prec.min(other.prec);
        let r = f(&BigInt::from(self.value.clone()), &BigInt::from(other.value.clone()));
        Self::new(&r, self.p, prec)
    }

    pub fn try_add(&self, other: &PadicInt) -> Result<Self> {
        self.binary(other, |a, b| a + b)
    }

    pub fn try_sub(&self, other: &PadicInt) -> Result<Self> {
        self.binary(other, |a, b| a - b)
    }

    pub fn try_mul(&self, other: &PadicInt) -> Result<Self> {
        self.binary(other, |a, b| a * b)
    }

    pub fn neg(&self) -> Self {
        let m = self.modulus();
        Self::raw(self.p, self.prec, (&m - &self.value) % &m)
    }

    pub fn pow(&self, e: u64) -> Self {
        let m = self.modulus();
        PadicInt { p: self.p, prec: self.prec, value: self.value.modpow(&BigUint::from(e), &m) }
    }

    pub fn inv(&self) -> Result<Self> {
        if !self.is_unit() {
            return Err(Error::NotAUnit { p: self.p });
        }
        let m = BigInt::from(self.modulus());
        let a = BigInt::from(self.value.clone());
        let g = a.extended_gcd(&m);
        Self::new(&g.x, self.p, self.prec)
    }
}

impl fmt::Display for PadicInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} mod {}^{}", self.value, self.p, self.prec)
    }
}

/// Serialized as decimal strings: `{"value": "...", "p": "...", "prec": "..."}`.
#[derive(Serialize, Deserialize)]
struct PadicRepr {
    value: String,
    p: String,
    prec: String,
}

impl Serialize for PadicInt {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        PadicRepr {
            value: self.value.to_string(),
            p: self.p.to_string(),
            prec: self.prec.to_string(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for PadicInt {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let r = PadicRepr::deserialize(d)?;
        let value: BigInt = r.value.parse().map_err(D::Error::custom)?;
        let p: u64 = r.p.parse().map_err(D::Error::custom)?;
        let prec: u32 = r.prec.parse().map_err(D::Error::custom)?;
        PadicInt::new(&value, p, prec).map_err(D::Error::custom)
    }
}

/// Square root of `d` mod p by Tonelli–Shanks; `None` for non-residues.
pub fn sqrt_mod_p(d: i64, p: u64) -> Option<u64> {
    let a = d.rem_euclid(p as i64) as u64;
    if a == 0 {
        return Some(0);
    }
    if pow_mod(a, (p - 1) / 2, p) != 1 {
        return None;
    }
    let (mut q, mut s) = (p - 1, 0u32);
    while q % 2 == 0 {
        q /= 2;
        s += 1;
    }
    let z = (2..p).find(|&z| pow_mod(z, (p - 1) / 2, p) == p - 1)?;
    let mulm = |x: u64, y: u64| ((x as u128 * y as u128) % p as u128) as u64;
    let (mut m, mut c, mut t, mut r) = (s, pow_mod(z, q, p), pow_mod(a, q, p), pow_mod(a, q.div_ceil(2), p));
    while t != 1 {
        let mut i = 0;
        let mut tt = t;
        while tt != 1 {
            tt = mulm(tt, tt);
            i += 1;
        }
        let b = pow_mod(c, 1 << (m - i - 1), p);
        m = i;
        c = mulm(b, b);
        t = mulm(t, c);
        r = mulm(r, b);
    }
    Some(r.min(p - r))
}

/// The square root of `d` modulo p^prec congruent to the smallest positive
/// square root of `d` mod p. The companion root is its negative.
pub fn hensel_sqrt(d: &BigInt, p: u64, prec: u32) -> Result<PadicInt> {
    check_prime(p)?;
    let not_residue = || Error::NotAResidue { d: d.clone(), p };
    let d_mod_p = d.mod_floor(&BigInt::from(p)).to_i64().expect("fits");
    if d_mod_p == 0 {
        return Err(not_residue());
    }
    let r = sqrt_mod_p(d_mod_p, p).ok_or_else(not_residue)?;
    let m = BigInt::from(p_pow(p, prec));
    let mut t = BigInt::from(r);
    // Newton iteration doubles the number of correct digits each round.
    let mut correct = 1u32;
    while correct < prec {
        let f = (&t * &t - d).mod_floor(&m);
        let two_t = PadicInt::new(&(&t * 2), p, prec)?.inv()?;
        t = (&t - f * BigInt::from(two_t.value)).mod_floor(&m);
        correct *= 2;
    }
    PadicInt::new(&t, p, prec)
}

fn vp(mut k: u64, p: u64) -> u32 {
    let mut v = 0;
    while k.is_multiple_of(p) {
        k /= p;
        v += 1;
    }
    v
}

/// Series log(1 + z) for v_p(z) ≥ 1, exact modulo p^prec.
///
/// Term k has valuation at least k − v_p(k), so terms with k − v_p(k) ≥ prec
/// are dropped. Each kept term is computed modulo p^(prec + v_p(k)) before the
/// exact division by p^v_p(k).
fn log_principal(z: &BigUint, p: u64, prec: u32) -> BigUint {
    // v_p(k) ≤ k/2 for k ≥ 8, so nothing beyond 2·prec + 8 survives.
    let kmax = 2 * prec as u64 + 8;
    let terms: Vec<u64> = (1..=kmax).filter(|&k| k - (vp(k, p) as u64) < prec as u64).collect();
    let vmax = terms.iter().map(|&k| vp(k, p)).max().unwrap_or(0);
    let big_m = p_pow(p, prec + vmax);
    let m = p_pow(p, prec);
    let mi = BigInt::from(m.clone());
    let mut acc = BigInt::zero();
    let mut zk = BigUint::one();
    let mut k_done = 0u64;
    for &k in &terms {
        while k_done < k {
            zk = zk * z % &big_m;
            k_done += 1;
        }
        let v = vp(k, p);
        let pv = p_pow(p, v);
        let t = (&zk % p_pow(p, prec + v)) / &pv;
        let unit = k / p.pow(v);
        let inv = BigInt::from(unit).extended_gcd(&mi).x.mod_floor(&mi);
        let term = BigInt::from(t) * inv;
        if k % 2 == 1 {
            acc += term;
        } else {
            acc -= term;
        }
    }
    acc.mod_floor(&mi).to_biguint().expect("nonnegative")
}

/// Logarithm of a principal unit u ≡ 1 mod p by the alternating series.
pub fn series_log(u: &PadicInt) -> Result<PadicInt> {
    if !(&u.value % u.p).is_one() {
        return Err(Error::InvalidInput("series log needs a principal unit".into()));
    }
    let m = u.modulus();
    let z = (&u.value + &m - 1u32) % &m;
    Ok(PadicInt::raw(u.p, u.prec, log_principal(&z, u.p, u.prec)))
}

/// log_p(u) := log(u^(p−1)) / (p−1) on all units.
///
/// The value is determined modulo p^prec by u modulo p^prec, so the result
/// carries the input precision.
pub fn padic_log(u: &PadicInt) -> Result<PadicInt> {
    if !u.is_unit() {
        return Err(Error::NotAUnit { p: u.p });
    }
    let w = u.pow(u.p - 1);
    let l = series_log(&w)?;
    let inv = PadicInt::from_i64(u.p as i64 - 1, u.p, u.prec)?.inv()?;
    l.try_mul(&inv)
}

/// The Teichmüller lift: the (p−1)-st root of unity congruent to `a` mod p.
pub fn teichmuller(a: &PadicInt) -> Result<PadicInt> {
    if !a.is_unit() {
        return Err(Error::NotAUnit { p: a.p });
    }
    let mut x = a.clone();
    loop {
        let y = x.pow(a.p);
        if y == x {
            return Ok(x);
        }
        x = y;
    }
}

/// Both local criteria for χ ∪ α = 0: (log_p α ≡ 0 mod p², α^(p−1) ≡ 1 mod p²).
pub fn gold_local_criteria(alpha: &PadicInt) -> Result<(bool, bool)> {
    if alpha.prec < 3 {
        return Err(Error::PrecisionTooLow { have: alpha.prec, need: 3 });
    }
    if !alpha.is_unit() {
        return Err(Error::NotAUnit { p: alpha.p });
    }
    let p2 = p_pow(alpha.p, 2);
    let log_zero = (padic_log(alpha)?.value % &p2).is_zero();
    let pow_one = (alpha.pow(alpha.p - 1).value % &p2).is_one();
    Ok((log_zero, pow_one))
}

/// True iff log_p(α) ≡ 0 mod p². Both local criteria are evaluated and must agree.
pub fn gold_local_test(alpha: &PadicInt) -> Result<bool> {
    let (a, b) = gold_local_criteria(alpha)?;
    if a != b {
        return Err(Error::InternalInconsistency(format!(
            "log criterion {a} disagrees with power criterion {b} at {alpha}"
        )));
    }
    Ok(a)
}
