//! The first layer of the cyclotomic Z_p-extension: Q₁ ⊂ Q(μ_{p²}) through
//! Gaussian periods, K₁ = K·Q₁ with its Galois generator σ, relative norms,
//! the products A_n, and verification of β/α₁ certificates.

pub mod anproduct;
pub mod cert;
pub mod k1;
pub mod period;
pub mod primes;

pub use anproduct::{a_product, a_product_identity, group_ring_identity};
pub use cert::{synthetic_certificate, tamper, verify_certificate, verify_certificate_against, BetaCertificate, CertificateReport, ValuationRecord};
pub use k1::{eta_element, K1Element};
pub use period::PeriodField;
pub use primes::{primes_above, LocalPrime};
