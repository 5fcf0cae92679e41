use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::{
    element_from_json, element_to_json, prime_above, prime_ideal_power, reduced_forms,
    split_type, QuadElement, QuadField, QuadForm, QuadIdeal, SplitType,
};
use crate::error::{Error, Result};
use crate::padic::{gold_local_test, hensel_sqrt, p_pow, padic_log, PadicInt};
use crate::util::is_prime;

/// Largest ideal norm searched by direct enumeration.
pub const DEFAULT_BUDGET: u64 = 1_000_000_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GeneratorMethod {
    Enumeration,
    Cornacchia,
}

/// Which square root of D the embedding uses: the Hensel root t or p^N − t.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Root {
    Hensel,
    Companion,
}

impl Root {
    pub fn other(self) -> Root {
        match self {
            Root::Hensel => Root::Companion,
            Root::Companion => Root::Hensel,
        }
    }
}

fn units(d: i64) -> Vec<QuadElement> {
    let one = QuadElement::one(d);
    let mut u = vec![one.clone(), one.neg()];
    let extra = match d {
        -4 => Some(QuadElement::from_halves(d, 0.into(), 1.into()).expect("i")),
        -3 => Some(QuadElement::from_halves(d, 1.into(), 1.into()).expect("ζ6")),
        _ => None,
    };
    if let Some(z) = extra {
        let mut x = z.clone();
        while !x.is_one() {
            if !u.contains(&x) {
                u.push(x.clone());
            }
            x = x.mul(&z);
        }
    }
    u
}

/// Canonical choice among associates: y ≥ 0, then x > 0, then smallest (y, x).
fn normalize(cands: Vec<QuadElement>) -> Option<QuadElement> {
    let nonneg: Vec<_> = cands.into_iter().filter(|e| !e.b().is_negative()).collect();
    let pos: Vec<_> = nonneg.iter().filter(|e| e.a().is_positive()).cloned().collect();
    let pool = if pos.is_empty() { nonneg } else { pos };
    pool.into_iter().min_by(|u, v| (u.b(), u.a()).cmp(&(v.b(), v.a())))
}

fn generators_among(ideal: &QuadIdeal, cands: impl IntoIterator<Item = QuadElement>) -> Vec<QuadElement> {
    let n = ideal.norm();
    cands.into_iter().filter(|e| &e.norm() == n && ideal.contains(e)).collect()
}

/// Generator of a principal ideal by enumerating a² − D b² = 4·N(ideal).
fn enumerate_generator(ideal: &QuadIdeal) -> Result<QuadElement> {
    let d = ideal.disc();
    let four_n = ideal.norm() * 4u32;
    let absd = BigInt::from(-d);
    let bmax: BigInt = (&four_n / &absd).sqrt();
    let bmax = bmax.to_i64().ok_or_else(|| Error::BudgetExceeded("enumeration range".into()))?;
    let mut cands = Vec::new();
    for b in 0..=bmax {
        let bb = BigInt::from(b);
        let a2 = &four_n - &absd * &bb * &bb;
        let a = a2.sqrt();
        if &a * &a != a2 {
            continue;
        }
        for (sa, sb) in [(1, 1), (-1, 1), (1, -1), (-1, -1)] {
            let e = QuadElement::from_halves(d, &a * sa, &bb * sb)?;
            cands.push(e);
        }
    }
    normalize(generators_among(ideal, cands)).ok_or(Error::NotPrincipal)
}

/// Generator of a principal ideal [A, (B + √D)/2] by the modified Cornacchia
/// algorithm on x² + |D|y² = 4A with the root B.
pub fn cornacchia_generator(ideal: &QuadIdeal) -> Result<QuadElement> {
    let d = ideal.disc();
    let n = ideal.norm();
    let absd = BigInt::from(-d);
    let two_n: BigInt = n * 2u32;
    let four_n: BigInt = n * 4u32;
    let mut x0 = ideal.b().mod_floor(&two_n);
    if (&x0 - BigInt::from(d)).is_odd() {
        x0 = &two_n - x0;
    }
    let l = four_n.sqrt();
    let (mut a, mut b) = (two_n.clone(), x0);
    while b > l {
        let r = &a % &b;
        a = b;
        b = r;
    }
    let rest = &four_n - &b * &b;
    if rest.is_negative() || !(&rest % &absd).is_zero() {
        return Err(Error::NotPrincipal);
    }
    let c = &rest / &absd;
    let y = c.sqrt();
    if &y * &y != c {
        return Err(Error::NotPrincipal);
    }
    let base = QuadElement::from_halves(d, b, y)?;
    let mut cands = Vec::new();
    for u in units(d) {
        let e = base.mul(&u);
        cands.push(e.conj());
        cands.push(e);
    }
    normalize(generators_among(ideal, cands)).ok_or(Error::NotPrincipal)
}

/// Generator of `ideal`: enumeration up to `budget`, Cornacchia beyond.
pub fn principal_generator(ideal: &QuadIdeal, budget: u64) -> Result<(QuadElement, GeneratorMethod)> {
    if ideal.norm() <= &BigInt::from(budget) {
        Ok((enumerate_generator(ideal)?, GeneratorMethod::Enumeration))
    } else {
        Ok((cornacchia_generator(ideal)?, GeneratorMethod::Cornacchia))
    }
}

/// α with (α) = 𝔓₀^h, found by enumerating x² − D y² = den²·p^h.
pub fn ideal_pow_generator(d: i64, p0: &QuadIdeal, h: u32, budget: u64) -> Result<QuadElement> {
    if p0.disc() != d {
        return Err(Error::ParameterMismatch);
    }
    let p = p0.norm().to_u64().ok_or(Error::ParameterMismatch)?;
    let ph = BigInt::from(p_pow(p, h));
    if ph > BigInt::from(budget) {
        return Err(Error::BudgetExceeded(format!("{p}^{h} exceeds enumeration bound {budget}")));
    }
    enumerate_generator(&prime_ideal_power(p0, h)?)
}

/// Image of `elem` in Z/p^prec under √D ↦ the chosen Hensel root of D.
pub fn embed(elem: &QuadElement, d: i64, p: u64, prec: u32, which: Root) -> Result<PadicInt> {
    if elem.disc() != d {
        return Err(Error::ParameterMismatch);
    }
    let t = hensel_sqrt(&BigInt::from(d), p, prec)?;
    let root = match which {
        Root::Hensel => t,
        Root::Companion => t.neg(),
    };
    let r = BigInt::from(root.value().clone());
    PadicInt::from_ratio(&(elem.a() + elem.b() * r), &BigInt::from(2), p, prec)
}

/// The root realizing the completion at 𝔓̃₀, where √D ≡ b mod p.
pub fn tilde_root(d: i64, p: u64) -> Result<Root> {
    let (p0, _) = prime_above(d, p)?;
    let t = hensel_sqrt(&BigInt::from(d), p, 1)?;
    let b = p0.b().mod_floor(&BigInt::from(p));
    Ok(if BigInt::from(t.value().clone()) == b { Root::Hensel } else { Root::Companion })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GoldReport {
    pub disc: i64,
    pub p: u64,
    pub h_k: u64,
    pub split_type: SplitType,
    pub alpha: QuadElement,
    pub log_val: PadicInt,
    pub lambda_ge_2: bool,
    pub s_count: u32,
    pub method: GeneratorMethod,
    pub experimental: bool,
}

#[derive(Serialize, Deserialize)]
struct GoldReportRepr {
    disc: String,
    p: String,
    h_k: String,
    split_type: SplitType,
    alpha: [String; 3],
    log_val: PadicInt,
    lambda_ge_2: bool,
    s_count: String,
    method: GeneratorMethod,
    experimental: bool,
}

impl Serialize for GoldReport {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        GoldReportRepr {
            disc: self.disc.to_string(),
            p: self.p.to_string(),
            h_k: self.h_k.to_string(),
            split_type: self.split_type,
            alpha: element_to_json(&self.alpha),
            log_val: self.log_val.clone(),
            lambda_ge_2: self.lambda_ge_2,
            s_count: self.s_count.to_string(),
            method: self.method,
            experimental: self.experimental,
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for GoldReport {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let r = GoldReportRepr::deserialize(de)?;
        let disc: i64 = r.disc.parse().map_err(D::Error::custom)?;
        Ok(GoldReport {
            disc,
            p: r.p.parse().map_err(D::Error::custom)?,
            h_k: r.h_k.parse().map_err(D::Error::custom)?,
            split_type: r.split_type,
            alpha: element_from_json(disc, &r.alpha).map_err(D::Error::custom)?,
            log_val: r.log_val,
            lambda_ge_2: r.lambda_ge_2,
            s_count: r.s_count.parse().map_err(D::Error::custom)?,
            method: r.method,
            experimental: r.experimental,
        })
    }
}

fn check_prime(p: u64) -> Result<()> {
    if p % 2 == 1 && is_prime(p) {
        Ok(())
    } else {
        Err(Error::InvalidInput(format!("{p} is not an odd prime")))
    }
}

/// Class number from reduced forms, cross-checked against the analytic formula.
fn checked_class_number(d: i64) -> Result<u64> {
    let h = reduced_forms(d)?.len() as u64;
    let h2 = super::class_number_dirichlet(d)?;
    if h != h2 {
        return Err(Error::InternalInconsistency(format!("class numbers disagree for {d}: {h} vs {h2}")));
    }
    Ok(h)
}

/// Gold's criterion: for p split in K and p ∤ h_K, λ ≥ 2 iff log_p(α) ≡ 0 mod p²
/// where (α) = 𝔓₀^h and α is evaluated in the completion at 𝔓̃₀.
pub fn gold_test(d: i64, p: u64, prec: u32, budget: u64) -> Result<GoldReport> {
    check_prime(p)?;
    QuadField::new(d)?;
    let st = split_type(d, p);
    if st != SplitType::Split {
        return Err(Error::NotSplit { disc: d, p });
    }
    let h = checked_class_number(d)?;
    if h % p == 0 {
        return Err(Error::PDividesH { disc: d, p, h });
    }
    if prec < 3 {
        return Err(Error::PrecisionTooLow { have: prec, need: 3 });
    }
    let (p0, _) = prime_above(d, p)?;
    let ideal = prime_ideal_power(&p0, h as u32)?;
    let (alpha, method) = principal_generator(&ideal, budget)?;
    if &alpha.norm() != ideal.norm() {
        return Err(Error::InternalInconsistency("generator has the wrong norm".into()));
    }
    let root = tilde_root(d, p)?;
    let emb = embed(&alpha, d, p, prec, root)?;
    let log_val = padic_log(&emb)?;
    let verdict = gold_local_test(&emb)?;
    // Direct check: α^(p−1) computed in O_K, then reduced mod p².
    let power = embed(&alpha.pow(p - 1), d, p, 2, root)?;
    if power.value().is_one() != verdict {
        return Err(Error::InternalInconsistency("power congruence disagrees with log verdict".into()));
    }
    Ok(GoldReport {
        disc: d,
        p,
        h_k: h,
        split_type: st,
        alpha,
        log_val,
        lambda_ge_2: verdict,
        s_count: 2,
        method,
        experimental: false,
    })
}

/// Local criterion log_p(N(α)) ≡ 0 mod p² for p inert or ramified, with
/// (α) = I^p for a prime ideal I whose class has order p.
pub fn nonsplit_lambda2_test(d: i64, p: u64, prec: u32, budget: u64) -> Result<GoldReport> {
    check_prime(p)?;
    QuadField::new(d)?;
    let st = split_type(d, p);
    if st == SplitType::Split {
        return Err(Error::Split { disc: d, p });
    }
    if prec < 3 {
        return Err(Error::PrecisionTooLow { have: prec, need: 3 });
    }
    let forms = reduced_forms(d)?;
    let h = forms.len() as u64;
    let id = QuadForm::identity(d);
    let torsion = forms.iter().filter(|f| f.pow(p) == id).count() as u64;
    if torsion == 1 {
        return Err(Error::NoOrderPClass { p });
    }
    if torsion != p {
        return Err(Error::NotCyclic);
    }
    let ideal = order_p_prime_ideal(d, p)?;
    let ip = prime_ideal_power(&ideal, p as u32)?;
    let (alpha, method) = principal_generator(&ip, budget)?;
    let n = alpha.norm();
    let log_val = padic_log(&PadicInt::new(&n, p, prec)?)?;
    let p2 = p_pow(p, 2);
    let verdict = (log_val.value() % &p2).is_zero();
    Ok(GoldReport {
        disc: d,
        p,
        h_k: h,
        split_type: st,
        alpha,
        log_val,
        lambda_ge_2: verdict,
        s_count: 1,
        method,
        experimental: true,
    })
}

/// A prime ideal of odd prime norm q ∤ pD whose class has order exactly p.
fn order_p_prime_ideal(d: i64, p: u64) -> Result<QuadIdeal> {
    const SEARCH: u64 = 200_000;
    for q in 3..SEARCH {
        if q == p || !is_prime(q) || split_type(d, q) != SplitType::Split {
            continue;
        }
        let (iq, _) = prime_above(d, q)?;
        let form = iq.to_form().expect("small").reduce();
        if form.order() == p {
            return Ok(iq);
        }
    }
    Err(Error::BudgetExceeded(format!("no prime below {SEARCH} represents an order-{p} class")))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn el(d: i64, x: i64, y: i64, den: u8) -> QuadElement {
        QuadElement::new(d, x.into(), y.into(), den).unwrap()
    }

    #[test]
    fn generator_examples() {
        let (p0, _) = prime_above(-11, 3).unwrap();
        assert_eq!(ideal_pow_generator(-11, &p0, 1, DEFAULT_BUDGET).unwrap(), el(-11, 1, 1, 2));
        let (p0, _) = prime_above(-4, 5).unwrap();
        let g = ideal_pow_generator(-4, &p0, 1, DEFAULT_BUDGET).unwrap();
        assert_eq!(g.norm(), BigInt::from(5));
        assert!(matches!(ideal_pow_generator(-11, &p0, 1, 10), Err(Error::ParameterMismatch)));
        let (p0, _) = prime_above(-11, 3).unwrap();
        assert!(matches!(ideal_pow_generator(-11, &p0, 30, DEFAULT_BUDGET), Err(Error::BudgetExceeded(_))));
    }

    #[test]
    fn gaussian_generator_normalization() {
        let (p0, _) = prime_above(-4, 5).unwrap();
        let g = ideal_pow_generator(-4, &p0, 1, DEFAULT_BUDGET).unwrap();
        // 𝔓₀ = [5, (4 + √−4)/2] = (2 + i); among its associates only 2 + i has
        // y ≥ 0 and x > 0. With √−4 = 2i that is (4 + √−4)/2.
        assert_eq!(g.to_xyden(), (4.into(), 1.into(), 2));
        assert!(!p0.contains(&el(-4, 1, 1, 1)));
    }

    #[test]
    fn embed_examples() {
        let one = QuadElement::one(-11);
        assert_eq!(embed(&one, -11, 3, 4, Root::Hensel).unwrap().value().to_u64(), Some(1));
        let s = QuadElement::sqrt_d(-11);
        assert_eq!(embed(&s, -11, 3, 4, Root::Hensel).unwrap().value().to_u64(), Some(31));
        assert_eq!(embed(&s, -11, 3, 4, Root::Companion).unwrap().value().to_u64(), Some(50));
        let alpha = el(-11, 1, 1, 2);
        assert_eq!(embed(&alpha, -11, 3, 4, Root::Hensel).unwrap().value().to_u64(), Some(16));
        assert_eq!(tilde_root(-11, 3).unwrap(), Root::Hensel);
    }

    #[test]
    fn cornacchia_matches_enumeration() {
        for d in (-400i64..-2).filter(|&d| super::super::is_fundamental(d)) {
            let h = reduced_forms(d).unwrap().len() as u32;
            for p in [3u64, 5, 7, 11] {
                if split_type(d, p) != SplitType::Split || (h as u64).is_multiple_of(p) {
                    continue;
                }
                let (p0, _) = prime_above(d, p).unwrap();
                for k in [h, 2 * h] {
                    let ideal = prime_ideal_power(&p0, k).unwrap();
                    if ideal.norm() > &BigInt::from(10_000_000_000u64) {
                        continue;
                    }
                    let a = enumerate_generator(&ideal).unwrap();
                    let b = cornacchia_generator(&ideal).unwrap();
                    assert_eq!(a, b, "D={d} p={p} k={k}");
                }
            }
        }
    }

    #[test]
    fn non_principal_power_is_rejected() {
        // h(−23) = 3 and 𝔓 above 2 is not principal.
        let (p0, _) = prime_above(-23, 2).unwrap();
        assert!(matches!(enumerate_generator(&p0), Err(Error::NotPrincipal)));
        let (p0, _) = prime_above(-23, 3).unwrap();
        let i1 = prime_ideal_power(&p0, 1).unwrap();
        assert!(matches!(enumerate_generator(&i1), Err(Error::NotPrincipal)));
        assert!(matches!(cornacchia_generator(&i1), Err(Error::NotPrincipal)));
    }

    #[test]
    fn gold_preconditions() {
        assert!(matches!(gold_test(-23, 3, 6, DEFAULT_BUDGET), Err(Error::PDividesH { h: 3, .. })));
        assert!(matches!(gold_test(-7, 5, 6, DEFAULT_BUDGET), Err(Error::NotSplit { .. })));
        assert!(matches!(gold_test(-11, 3, 2, DEFAULT_BUDGET), Err(Error::PrecisionTooLow { .. })));
        assert!(matches!(gold_test(-12, 3, 6, DEFAULT_BUDGET), Err(Error::NotFundamental(-12))));
    }

    #[test]
    fn gold_minus_11() {
        let r = gold_test(-11, 3, 6, DEFAULT_BUDGET).unwrap();
        assert_eq!(r.h_k, 1);
        assert_eq!(r.alpha, el(-11, 1, 1, 2));
        // Independent: α ↦ (1 + 31)/2 = 16 mod 81 at 𝔓̃₀, and 16² = 256 ≡ 4 mod 9 ≠ 1.
        assert!(!r.lambda_ge_2);
        let s = serde_json::to_string(&r).unwrap();
        assert_eq!(serde_json::from_str::<GoldReport>(&s).unwrap(), r);
    }

    #[test]
    fn nonsplit_examples() {
        let r = nonsplit_lambda2_test(-31, 3, 6, DEFAULT_BUDGET).unwrap();
        assert!(r.experimental);
        assert_eq!(r.h_k, 3);
        assert_eq!(r.s_count, 1);
        assert!(r.lambda_ge_2);
        assert!(matches!(nonsplit_lambda2_test(-7, 5, 6, DEFAULT_BUDGET), Err(Error::NoOrderPClass { .. })));
        assert!(matches!(nonsplit_lambda2_test(-11, 3, 6, DEFAULT_BUDGET), Err(Error::Split { .. })));
    }
}
