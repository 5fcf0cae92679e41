//! Imaginary quadratic fields: elements, ideals, splitting of primes and the
//! Gold criterion for λ ≥ 2.

mod forms;
mod gold;

pub use forms::{class_number_dirichlet, reduced_forms, QuadForm};
pub use gold::{
    cornacchia_generator, embed, gold_test, ideal_pow_generator, nonsplit_lambda2_test,
    principal_generator, tilde_root, GeneratorMethod, GoldReport, Root, DEFAULT_BUDGET,
};

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::padic::{hensel_sqrt, p_pow};
use crate::util::{is_squarefree, kronecker};

/// D < 0 is a fundamental discriminant.
pub fn is_fundamental(d: i64) -> bool {
    if d >= 0 {
        return false;
    }
    let n = d.unsigned_abs();
    match d.rem_euclid(4) {
        1 => is_squarefree(n),
        0 => {
            let m = d / 4;
            matches!(m.rem_euclid(4), 2 | 3) && is_squarefree(m.unsigned_abs())
        }
        _ => false,
    }
}

pub fn roots_of_unity(d: i64) -> u32 {
    match d {
        -3 => 6,
        -4 => 4,
        _ => 2,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct QuadField {
    disc: i64,
    w: u32,
}

impl QuadField {
    pub fn new(disc: i64) -> Result<Self> {
        if !is_fundamental(disc) {
            return Err(Error::NotFundamental(disc));
        }
        Ok(QuadField { disc, w: roots_of_unity(disc) })
    }

    pub fn disc(&self) -> i64 {
        self.disc
    }

    pub fn w(&self) -> u32 {
        self.w
    }

    pub fn class_number(&self) -> u64 {
        reduced_forms(self.disc).expect("fundamental").len() as u64
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SplitType {
    Split,
    Inert,
    Ramified,
}

impl fmt::Display for SplitType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SplitType::Split => "split",
            SplitType::Inert => "inert",
            SplitType::Ramified => "ramified",
        })
    }
}

pub fn split_type(d: i64, p: u64) -> SplitType {
    match kronecker(d, p) {
        1 => SplitType::Split,
        -1 => SplitType::Inert,
        _ => SplitType::Ramified,
    }
}

/// An integral element (a + b√D)/2 of the maximal order.
///
/// The external form is (x, y, den) meaning (x + y√D)/den with den ∈ {1, 2},
/// den = 1 whenever both halves are integers.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct QuadElement {
    disc: i64,
    a: BigInt,
    b: BigInt,
}

fn integral(disc: i64, a: &BigInt, b: &BigInt) -> bool {
    let n: BigInt = a * a - BigInt::from(disc) * b * b;
    (n % 4u32).is_zero()
}

impl QuadElement {
    /// (a + b√D)/2 from its doubled coordinates.
    pub fn from_halves(disc: i64, a: BigInt, b: BigInt) -> Result<Self> {
        if !integral(disc, &a, &b) {
            return Err(Error::InvalidInput(format!("({a} + {b}√{disc})/2 is not integral")));
        }
        Ok(QuadElement { disc, a, b })
    }

    /// (x + y√D)/den.
    pub fn new(disc: i64, x: BigInt, y: BigInt, den: u8) -> Result<Self> {
        match den {
            1 => Self::from_halves(disc, x * 2u32, y * 2u32),
            2 => Self::from_halves(disc, x, y),
            _ => Err(Error::InvalidInput(format!("denominator {den} not in {{1, 2}}"))),
        }
    }

    pub fn from_int(disc: i64, n: impl Into<BigInt>) -> Self {
        QuadElement { disc, a: n.into() * 2u32, b: BigInt::zero() }
    }

    pub fn sqrt_d(disc: i64) -> Self {
        QuadElement { disc, a: BigInt::zero(), b: BigInt::from(2) }
    }

    pub fn one(disc: i64) -> Self {
        Self::from_int(disc, 1)
    }

    pub fn zero(disc: i64) -> Self {
        Self::from_int(disc, 0)
    }

    pub fn disc(&self) -> i64 {
        self.disc
    }

    /// Doubled rational part.
    pub fn a(&self) -> &BigInt {
        &self.a
    }

    /// Doubled √D coefficient.
    pub fn b(&self) -> &BigInt {
        &self.b
    }

    /// Canonical (x, y, den).
    pub fn to_xyden(&self) -> (BigInt, BigInt, u8) {
        if self.a.is_even() && self.b.is_even() {
            (&self.a / 2, &self.b / 2, 1)
        } else {
            (self.a.clone(), self.b.clone(), 2)
        }
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.b.is_zero() && self.a == BigInt::from(2)
    }

    /// Rational integer value when the √D part vanishes.
    pub fn as_integer(&self) -> Option<BigInt> {
        (self.b.is_zero()).then(|| &self.a / 2)
    }

    fn check(&self, other: &Self) {
        assert_eq!(self.disc, other.disc, "elements of different fields");
    }

    pub fn add(&self, other: &Self) -> Self {
        self.check(other);
        QuadElement { disc: self.disc, a: &self.a + &other.a, b: &self.b + &other.b }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.check(other);
        QuadElement { disc: self.disc, a: &self.a - &other.a, b: &self.b - &other.b }
    }

    pub fn neg(&self) -> Self {
        QuadElement { disc: self.disc, a: -&self.a, b: -&self.b }
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.check(other);
        let d = BigInt::from(self.disc);
        let a = &self.a * &other.a + d * &self.b * &other.b;
        let b = &self.a * &other.b + &other.a * &self.b;
        debug_assert!(a.is_even() && b.is_even());
        QuadElement { disc: self.disc, a: a / 2, b: b / 2 }
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        QuadElement { disc: self.disc, a: &self.a * k, b: &self.b * k }
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut r = Self::one(self.disc);
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                r = r.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        r
    }

    pub fn conj(&self) -> Self {
        QuadElement { disc: self.disc, a: self.a.clone(), b: -&self.b }
    }

    pub fn norm(&self) -> BigInt {
        (&self.a * &self.a - BigInt::from(self.disc) * &self.b * &self.b) / 4
    }

    pub fn trace(&self) -> BigInt {
        self.a.clone()
    }

    /// Exact division by a rational integer, if the quotient is integral.
    pub fn div_int(&self, q: &BigInt) -> Option<Self> {
        if q.is_zero() || !(&self.a % q).is_zero() || !(&self.b % q).is_zero() {
            return None;
        }
        let (a, b) = (&self.a / q, &self.b / q);
        integral(self.disc, &a, &b).then_some(QuadElement { disc: self.disc, a, b })
    }

    /// Reduce the doubled coordinates modulo `m`.
    pub fn halves_mod(&self, m: &BigInt) -> (BigInt, BigInt) {
        (self.a.mod_floor(m), self.b.mod_floor(m))
    }
}

impl fmt::Display for QuadElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (x, y, den) = self.to_xyden();
        if den == 1 {
            write!(f, "{x} + {y}√{}", self.disc)
        } else {
            write!(f, "({x} + {y}√{})/2", self.disc)
        }
    }
}

/// JSON form: `[x, y, den]` as decimal strings.
pub fn element_to_json(e: &QuadElement) -> [String; 3] {
    let (x, y, den) = e.to_xyden();
    [x.to_string(), y.to_string(), den.to_string()]
}

pub fn element_from_json(disc: i64, v: &[String]) -> Result<QuadElement> {
    let bad = |m: &str| Error::MalformedCertificate(m.to_string());
    if v.len() != 3 {
        return Err(bad("element must be [x, y, den]"));
    }
    let x: BigInt = v[0].trim().parse().map_err(|_| bad("x is not an integer"))?;
    let y: BigInt = v[1].trim().parse().map_err(|_| bad("y is not an integer"))?;
    let den: u8 = v[2].trim().parse().map_err(|_| bad("den is not 1 or 2"))?;
    QuadElement::new(disc, x, y, den).map_err(|e| bad(&e.to_string()))
}

/// The ideal [a, (b + √D)/2] with b² ≡ D mod 4a.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct QuadIdeal {
    disc: i64,
    a: BigInt,
    b: BigInt,
}

impl QuadIdeal {
    pub fn new(disc: i64, a: BigInt, b: BigInt) -> Result<Self> {
        if !a.is_positive() {
            return Err(Error::InvalidInput("ideal norm must be positive".into()));
        }
        let four_a = &a * 4u32;
        if !((&b * &b - BigInt::from(disc)).mod_floor(&four_a)).is_zero() {
            return Err(Error::InvalidInput(format!("{b}² ≢ {disc} mod 4·{a}")));
        }
        let b = b.mod_floor(&(&a * 2u32));
        Ok(QuadIdeal { disc, a, b })
    }

    pub fn disc(&self) -> i64 {
        self.disc
    }

    pub fn norm(&self) -> &BigInt {
        &self.a
    }

    pub fn b(&self) -> &BigInt {
        &self.b
    }

    /// Membership via the Z-basis {a, (b + √D)/2}.
    pub fn contains(&self, e: &QuadElement) -> bool {
        assert_eq!(e.disc, self.disc);
        // e = u·a + v·(b + √D)/2 forces v = e.b (halved), then 2a | e.a − v·b.
        let r: BigInt = (&e.a - &e.b * &self.b) % (&self.a * 2u32);
        r.is_zero()
    }

    pub fn to_form(&self) -> Option<QuadForm> {
        let a = self.a.to_i64()?;
        let b = self.b.to_i64()?;
        let c = (b as i128 * b as i128 - self.disc as i128) / (4 * a as i128);
        Some(QuadForm::new(a, b, i64::try_from(c).ok()?))
    }
}

impl fmt::Display for QuadIdeal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, ({} + √{})/2]", self.a, self.b, self.disc)
    }
}

/// Smallest b ≥ 0 with b² ≡ D mod 4p.
fn smallest_root_4p(d: i64, p: u64) -> Option<u64> {
    let m = 4 * p as i128;
    (0..2 * p).find(|&b| ((b as i128) * (b as i128) - d as i128).rem_euclid(m) == 0)
}

/// (𝔓₀, 𝔓̃₀) = ([p, (b+√D)/2], [p, (−b+√D)/2]) for the smallest b ≥ 0 with b² ≡ D mod 4p.
pub fn prime_above(d: i64, p: u64) -> Result<(QuadIdeal, QuadIdeal)> {
    QuadField::new(d)?;
    if split_type(d, p) != SplitType::Split {
        return Err(Error::NotSplit { disc: d, p });
    }
    let b = smallest_root_4p(d, p).expect("split primes have a root");
    let pp = BigInt::from(p);
    Ok((
        QuadIdeal::new(d, pp.clone(), BigInt::from(b))?,
        QuadIdeal::new(d, pp, -BigInt::from(b))?,
    ))
}

/// [q^k, (b_k + √D)/2] for the ideal [q, (b + √D)/2] of prime norm q ∤ 2D.
pub fn prime_ideal_power(ideal: &QuadIdeal, k: u32) -> Result<QuadIdeal> {
    let q = ideal.a.to_u64().ok_or_else(|| Error::InvalidInput("norm too large".into()))?;
    let d = ideal.disc;
    if k == 0 {
        return QuadIdeal::new(d, BigInt::one(), BigInt::from(d.rem_euclid(2)));
    }
    let qk = BigInt::from(p_pow(q, k));
    let t = hensel_sqrt(&BigInt::from(d), q, k)?;
    let mut r = BigInt::from(t.value().clone());
    // Pick the lift compatible with b mod q, then fix the parity to D mod 2.
    if !((&r - &ideal.b) % BigInt::from(q)).is_zero() {
        r = &qk - r;
    }
    if (&r - BigInt::from(d)).is_odd() {
        r += &qk;
    }
    QuadIdeal::new(d, qk, r)
}
