use std::collections::BTreeMap;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::padic::{gold_local_test, padic_log, PadicInt};
use crate::quadfield::{element_from_json, element_to_json, embed, gold_test, is_fundamental, tilde_root, QuadElement};
use crate::util::prime_factors;

use super::anproduct::a_product;
use super::k1::{eta_element, K1Element};
use super::period::PeriodField;
use super::primes::{q_adic_order, valuations_above};

/// Norms with more bits than this are not factored.
pub const MAX_FACTOR_BITS: u64 = 256;

/// A claimed solution β of N_{K₁/K}(β) = α together with α₁ ∈ K.
/// `prime_hints` maps a rational prime to a generator of O_{Q₁}/q, used
/// when q divides the index of Z[η₀].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BetaCertificate {
    pub disc: i64,
    pub p: u64,
    pub beta: K1Element,
    pub alpha1: QuadElement,
    pub prime_hints: BTreeMap<BigInt, Vec<BigInt>>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CertJson {
    disc: String,
    p: String,
    beta: Vec<[String; 3]>,
    alpha1: [String; 3],
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    prime_data: Vec<PrimeHintJson>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct PrimeHintJson {
    q: String,
    theta: Vec<String>,
}

fn parse_int<T: std::str::FromStr>(s: &str, what: &str) -> Result<T> {
    s.trim().parse().map_err(|_| Error::MalformedCertificate(format!("{what} is not an integer")))
}

impl BetaCertificate {
    pub fn field(&self) -> &Arc<PeriodField> {
        self.beta.field()
    }

    pub fn to_json(&self) -> String {
        let repr = CertJson {
            disc: self.disc.to_string(),
            p: self.p.to_string(),
            beta: self.beta.coeffs().iter().map(element_to_json).collect(),
            alpha1: element_to_json(&self.alpha1),
            prime_data: self
                .prime_hints
                .iter()
                .map(|(q, t)| PrimeHintJson { q: q.to_string(), theta: t.iter().map(|c| c.to_string()).collect() })
                .collect(),
        };
        serde_json::to_string_pretty(&repr).expect("plain data serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let repr: CertJson = serde_json::from_str(text).map_err(|e| Error::MalformedCertificate(e.to_string()))?;
        let disc: i64 = parse_int(&repr.disc, "disc")?;
        let p: u64 = parse_int(&repr.p, "p")?;
        if !is_fundamental(disc) || disc >= 0 {
            return Err(Error::MalformedCertificate(format!("{disc} is not a negative fundamental discriminant")));
        }
        let field = PeriodField::get(p)?;
        if repr.beta.len() != field.degree() {
            return Err(Error::MalformedCertificate(format!("beta needs {p} coordinates")));
        }
        let coeffs = repr.beta.iter().map(|c| element_from_json(disc, c)).collect::<Result<Vec<_>>>()?;
        let beta = K1Element::new(&field, disc, coeffs)?;
        let alpha1 = element_from_json(disc, &repr.alpha1)?;
        let mut prime_hints = BTreeMap::new();
        for h in repr.prime_data {
            let q: BigInt = parse_int(&h.q, "prime_data.q")?;
            let theta = h.theta.iter().map(|c| parse_int(c, "prime_data.theta")).collect::<Result<Vec<BigInt>>>()?;
            if theta.len() != field.degree() {
                return Err(Error::MalformedCertificate(format!("generator hint for {q} needs {p} coordinates")));
            }
            prime_hints.insert(q, theta);
        }
        Ok(BetaCertificate { disc, p, beta, alpha1, prime_hints })
    }
}

/// Valuation of α₁·A₁′ at one prime of K₁.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValuationRecord {
    pub q: BigInt,
    pub k_index: usize,
    pub q1_index: usize,
    pub residue_degree: u32,
    pub valuation: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CertificateReport {
    pub disc: i64,
    pub p: u64,
    /// The α that N(β) was compared against.
    pub alpha: QuadElement,
    /// The root of unity u with N_{K₁/K}(β) = α·u.
    pub norm_unit: QuadElement,
    pub valuations: Vec<ValuationRecord>,
    pub log_alpha1: PadicInt,
    pub lambda_ge_3: bool,
    /// α was taken from the certificate's own β instead of Gold's generator.
    pub synthetic: bool,
}

#[derive(Serialize)]
struct ValuationJson {
    q: String,
    k_index: usize,
    q1_index: usize,
    residue_degree: u32,
    valuation: String,
}

#[derive(Serialize)]
struct ReportJson<'a> {
    disc: String,
    p: String,
    alpha: [String; 3],
    norm_unit: [String; 3],
    valuations: Vec<ValuationJson>,
    log_alpha1: &'a PadicInt,
    lambda_ge_3: bool,
    synthetic: bool,
}

impl Serialize for CertificateReport {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        ReportJson {
            disc: self.disc.to_string(),
            p: self.p.to_string(),
            alpha: element_to_json(&self.alpha),
            norm_unit: element_to_json(&self.norm_unit),
            valuations: self
                .valuations
                .iter()
                .map(|v| ValuationJson {
                    q: v.q.to_string(),
                    k_index: v.k_index,
                    q1_index: v.q1_index,
                    residue_degree: v.residue_degree,
                    valuation: v.valuation.to_string(),
                })
                .collect(),
            log_alpha1: &self.log_alpha1,
            lambda_ge_3: self.lambda_ge_3,
            synthetic: self.synthetic,
        }
        .serialize(s)
    }
}

/// u with n = α·u for a root of unity u, if one exists.
fn unit_quotient(n: &QuadElement, alpha: &QuadElement) -> Option<QuadElement> {
    let na = alpha.norm();
    if na.is_zero() {
        return None;
    }
    let u = n.mul(&alpha.conj()).div_int(&na)?;
    u.norm().is_one().then_some(u)
}

/// Check a certificate against Gold's α for (disc, p). Requires λ ≥ 2.
pub fn verify_certificate(cert: &BetaCertificate, prec: u32, budget: u64) -> Result<CertificateReport> {
    let gold = gold_test(cert.disc, cert.p, prec, budget)?;
    if !gold.lambda_ge_2 {
        return Err(Error::HypothesisFailed(format!(
            "λ ≥ 2 fails for D={} p={}, so no β certificate applies",
            cert.disc, cert.p
        )));
    }
    verify_inner(cert, &gold.alpha, prec, false)
}

/// Check a certificate against a caller-supplied α, bypassing Gold's test.
/// Meant for synthetic certificates where α is defined as N(β).
pub fn verify_certificate_against(cert: &BetaCertificate, alpha: &QuadElement, prec: u32) -> Result<CertificateReport> {
    if alpha.disc() != cert.disc {
        return Err(Error::ParameterMismatch);
    }
    verify_inner(cert, alpha, prec, true)
}

fn verify_inner(cert: &BetaCertificate, alpha: &QuadElement, prec: u32, synthetic: bool) -> Result<CertificateReport> {
    let (d, p) = (cert.disc, cert.p);
    if cert.beta.disc() != d || cert.alpha1.disc() != d || cert.beta.p() != p {
        return Err(Error::ParameterMismatch);
    }
    if cert.beta.is_zero() || cert.alpha1.is_zero() {
        return Err(Error::MalformedCertificate("beta and alpha1 must be nonzero".into()));
    }
    if prec < 3 {
        return Err(Error::PrecisionTooLow { have: prec, need: 3 });
    }

    // (i) N_{K₁/K}(β) = α up to a root of unity.
    let norm = cert.beta.relative_norm()?;
    let norm_unit = unit_quotient(&norm, alpha).ok_or(Error::NormMismatch)?;

    // (ii) A₁′ and γ = α₁·A₁′.
    let a1 = a_product(&cert.beta, 1)?;
    let gamma = a1.scale(&cert.alpha1);

    // (iii) v_𝔔(γ) ≡ 0 mod p at every 𝔔 ∤ p. Primes of A₁′ divide N(β).
    let n_beta = norm.norm();
    let n_alpha1 = cert.alpha1.norm();
    let product = &n_beta * &n_alpha1;
    if product.bits() > MAX_FACTOR_BITS {
        return Err(Error::BudgetExceeded(format!("norm of {} bits is too large to factor", product.bits())));
    }
    let pb = BigInt::from(p);
    let tri = p * (p - 1) / 2;
    let mut valuations = Vec::new();
    for q in prime_factors(&product).into_iter().filter(|q| *q != pb) {
        let norm_exp = p * q_adic_order(&n_alpha1, &q) + tri * q_adic_order(&n_beta, &q);
        let hint = cert.prime_hints.get(&q).map(|t| t.as_slice());
        for (pr, v) in valuations_above(&gamma, &q, hint, norm_exp)? {
            if v % p != 0 {
                return Err(Error::ValuationFail { q, valuation: v });
            }
            valuations.push(ValuationRecord {
                q: q.clone(),
                k_index: pr.k_index,
                q1_index: pr.q1_index,
                residue_degree: pr.residue_degree,
                valuation: v,
            });
        }
    }

    // (iv) λ ≥ 3 iff log_p(α₁) ≡ 0 mod p² in the completion at 𝔓̃₀.
    let emb = embed(&cert.alpha1, d, p, prec, tilde_root(d, p)?)?;
    let log_alpha1 = padic_log(&emb)?;
    let lambda_ge_3 = gold_local_test(&emb)?;

    Ok(CertificateReport { disc: d, p, alpha: alpha.clone(), norm_unit, valuations, log_alpha1, lambda_ge_3, synthetic })
}

/// β = c·Π_i σ^i(η₁)^{e_i} with α₁ = 1. Its norm is c^p·p^{Σe_i}, and A₁′ is
/// a unit away from p and the primes of c.
pub fn synthetic_certificate(disc: i64, p: u64, c: &QuadElement, exponents: &[u64]) -> Result<BetaCertificate> {
    let field = PeriodField::get(p)?;
    if exponents.len() > field.degree() {
        return Err(Error::InvalidInput(format!("at most {p} exponents")));
    }
    let eta = eta_element(&field, disc);
    let mut beta = K1Element::from_quad(&field, c.clone());
    let mut conj = eta;
    for &e in exponents {
        beta = beta.mul(&conj.pow(e));
        conj = conj.sigma();
    }
    Ok(BetaCertificate { disc, p, beta, alpha1: QuadElement::one(disc), prime_hints: BTreeMap::new() })
}

/// Add 1 to the constant coordinate of β.
pub fn tamper(cert: &BetaCertificate) -> BetaCertificate {
    let mut coeffs = cert.beta.coeffs().to_vec();
    coeffs[0] = coeffs[0].add(&QuadElement::one(cert.disc));
    let beta = K1Element::new(cert.field(), cert.disc, coeffs).expect("same shape");
    BetaCertificate { beta, ..cert.clone() }
}
