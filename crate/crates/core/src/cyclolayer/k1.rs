use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use rand::Rng;

use crate::error::{Error, Result};
use crate::quadfield::QuadElement;

use super::period::PeriodField;

/// An element of O_K ⊗ O_{Q₁}: one integral K-coefficient per period basis
/// vector (1, η₁, …, η_{p−1}).
#[derive(Clone)]
pub struct K1Element {
    field: Arc<PeriodField>,
    disc: i64,
    coeffs: Vec<QuadElement>,
}

impl PartialEq for K1Element {
    fn eq(&self, other: &Self) -> bool {
        self.field.p() == other.field.p() && self.disc == other.disc && self.coeffs == other.coeffs
    }
}

impl Eq for K1Element {}

impl fmt::Debug for K1Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "K1Element(p={}, D={}, {self})", self.field.p(), self.disc)
    }
}

impl fmt::Display for K1Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coeffs.iter().map(|c| format!("[{c}]")).collect();
        write!(f, "{}", parts.join(", "))
    }
}

impl K1Element {
    pub fn new(field: &Arc<PeriodField>, disc: i64, coeffs: Vec<QuadElement>) -> Result<Self> {
        if coeffs.len() != field.degree() {
            return Err(Error::InvalidInput(format!("expected {} coefficients", field.degree())));
        }
        if coeffs.iter().any(|c| c.disc() != disc) {
            return Err(Error::ParameterMismatch);
        }
        Ok(K1Element { field: field.clone(), disc, coeffs })
    }

    /// The constant c ∈ K.
    pub fn from_quad(field: &Arc<PeriodField>, c: QuadElement) -> Self {
        let disc = c.disc();
        let mut coeffs = vec![QuadElement::zero(disc); field.degree()];
        coeffs[0] = c;
        K1Element { field: field.clone(), disc, coeffs }
    }

    /// An element of Q₁ with the given integer coordinates.
    pub fn from_ints(field: &Arc<PeriodField>, disc: i64, coords: &[BigInt]) -> Result<Self> {
        K1Element::new(field, disc, coords.iter().map(|c| QuadElement::from_int(disc, c.clone())).collect())
    }

    pub fn one(field: &Arc<PeriodField>, disc: i64) -> Self {
        Self::from_quad(field, QuadElement::one(disc))
    }

    pub fn zero(field: &Arc<PeriodField>, disc: i64) -> Self {
        Self::from_quad(field, QuadElement::zero(disc))
    }

    /// Coordinates drawn as (x + y√D)/den with |x|, |y| ≤ bound (den = 1).
    pub fn random<R: Rng>(field: &Arc<PeriodField>, disc: i64, bound: i64, rng: &mut R) -> Self {
        let coeffs = (0..field.degree())
            .map(|_| {
                let x = BigInt::from(rng.gen_range(-bound..=bound));
                let y = BigInt::from(rng.gen_range(-bound..=bound));
                QuadElement::new(disc, x, y, 1).expect("den 1 is integral")
            })
            .collect();
        K1Element { field: field.clone(), disc, coeffs }
    }

    pub fn field(&self) -> &Arc<PeriodField> {
        &self.field
    }

    pub fn p(&self) -> u64 {
        self.field.p()
    }

    pub fn disc(&self) -> i64 {
        self.disc
    }

    pub fn coeffs(&self) -> &[QuadElement] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn is_one(&self) -> bool {
        self.as_constant().is_some_and(|c| c.is_one())
    }

    /// The K-value when every non-constant coordinate vanishes.
    pub fn as_constant(&self) -> Option<&QuadElement> {
        self.coeffs[1..].iter().all(|c| c.is_zero()).then(|| &self.coeffs[0])
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.field.p() != other.field.p() || self.disc != other.disc {
            return Err(Error::ParameterMismatch);
        }
        Ok(())
    }

    fn with(&self, coeffs: Vec<QuadElement>) -> Self {
        K1Element { field: self.field.clone(), disc: self.disc, coeffs }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(self.with(self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a.add(b)).collect()))
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(self.with(self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a.sub(b)).collect()))
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(self.mul(other))
    }

    /// Product for operands already known to share (p, D).
    pub(crate) fn mul(&self, other: &Self) -> Self {
        let n = self.field.degree();
        let table = self.field.mult_table();
        let mut out = vec![QuadElement::zero(self.disc); n];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                let ab = a.mul(b);
                for (k, &c) in table[i][j].iter().enumerate() {
                    if c != 0 {
                        out[k] = out[k].add(&ab.scale(&BigInt::from(c)));
                    }
                }
            }
        }
        self.with(out)
    }

    pub fn neg(&self) -> Self {
        self.with(self.coeffs.iter().map(|c| c.neg()).collect())
    }

    /// Multiply by a constant of K.
    pub fn scale(&self, c: &QuadElement) -> Self {
        self.with(self.coeffs.iter().map(|x| x.mul(c)).collect())
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut result = Self::one(&self.field, self.disc);
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        result
    }

    /// σ permutes the periods and fixes K.
    pub fn sigma(&self) -> Self {
        self.with(self.field.sigma_coords(&self.coeffs, |x| x.neg(), |a, b| a.sub(b)))
    }

    pub fn sigma_pow(&self, k: u64) -> Self {
        (0..k % self.p()).fold(self.clone(), |acc, _| acc.sigma())
    }

    /// N_{K₁/K}(e) = Π_{i<p} σ^i(e).
    pub fn relative_norm(&self) -> Result<QuadElement> {
        let mut acc = self.clone();
        let mut conj = self.clone();
        for _ in 1..self.p() {
            conj = conj.sigma();
            acc = acc.mul(&conj);
        }
        acc.as_constant()
            .cloned()
            .ok_or_else(|| Error::InternalInconsistency("relative norm does not lie in K".into()))
    }

    /// N_{K₁/Q}(e) = N_{K/Q}(N_{K₁/K}(e)).
    pub fn absolute_norm(&self) -> Result<BigInt> {
        Ok(self.relative_norm()?.norm())
    }

    /// Reduce every doubled coordinate modulo 2m, which changes the element
    /// by a multiple of m and preserves integrality.
    pub(crate) fn reduce_mod(&self, m: &BigInt) -> Self {
        let two_m = m * 2;
        self.with(
            self.coeffs
                .iter()
                .map(|c| {
                    let (a, b) = c.halves_mod(&two_m);
                    QuadElement::from_halves(self.disc, a, b).expect("parity preserved")
                })
                .collect(),
        )
    }

    /// Exact division by a rational integer, if the quotient is integral.
    pub fn div_int(&self, q: &BigInt) -> Option<Self> {
        let coeffs = self.coeffs.iter().map(|c| c.div_int(q)).collect::<Option<Vec<_>>>()?;
        Some(self.with(coeffs))
    }

    /// True iff every coordinate lies in qO_K.
    pub fn divisible_by(&self, q: &BigInt) -> bool {
        self.coeffs.iter().all(|c| c.div_int(q).is_some())
    }
}

/// η₁ = N_{Q(μ_{p²})/Q₁}(1 − ζ_{p²}) as an element of K₁.
pub fn eta_element(field: &Arc<PeriodField>, disc: i64) -> K1Element {
    K1Element::from_ints(field, disc, &field.eta1_coords()).expect("degree matches")
}

/// Integer coordinates, when every coefficient is rational.
pub fn int_coords(e: &K1Element) -> Option<Vec<BigInt>> {
    e.coeffs.iter().map(|c| c.as_integer()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::{One, Zero};
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn field(p: u64) -> Arc<PeriodField> {
        PeriodField::get(p).unwrap()
    }

    #[test]
    fn eta0_norm_and_sigma_of_one() {
        let f = field(3);
        let eta0 = K1Element::from_ints(&f, -11, &[0, -1, -1].map(BigInt::from)).unwrap();
        assert_eq!(eta0.relative_norm().unwrap(), QuadElement::from_int(-11, -1));
        assert!(K1Element::one(&f, -11).sigma().is_one());
    }

    #[test]
    fn eta_norm_is_p() {
        for p in [3u64, 5, 7, 11, 13] {
            let f = field(p);
            let eta = eta_element(&f, -4);
            assert_eq!(eta.relative_norm().unwrap(), QuadElement::from_int(-4, p), "p={p}");
        }
        // Frozen from a floating-point solve over the p complex embeddings.
        assert_eq!(int_coords(&eta_element(&field(3), -4)).unwrap(), [2, 1, 1].map(BigInt::from).to_vec());
        assert_eq!(int_coords(&eta_element(&field(5), -4)).unwrap(), [4, 2, 2, 3, 2].map(BigInt::from).to_vec());
    }

    #[test]
    fn constants_norm_to_powers() {
        let f = field(5);
        let c = QuadElement::new(-19, BigInt::from(1), BigInt::from(1), 2).unwrap();
        assert_eq!(K1Element::from_quad(&f, c.clone()).relative_norm().unwrap(), c.pow(5));
    }

    #[test]
    fn sigma_fixes_exactly_the_constants() {
        for p in [3u64, 5, 7] {
            let f = field(p);
            for i in 0..p as usize {
                let mut coords = vec![BigInt::zero(); p as usize];
                coords[i] = BigInt::one();
                let b = K1Element::from_ints(&f, -7, &coords).unwrap();
                assert_eq!(b.sigma() == b, i == 0);
            }
        }
    }

    #[test]
    fn mismatched_fields_are_rejected() {
        let a = K1Element::one(&field(3), -11);
        let b = K1Element::one(&field(3), -8);
        assert_eq!(a.try_mul(&b).unwrap_err(), Error::ParameterMismatch);
        assert_eq!(a.try_add(&K1Element::one(&field(5), -11)).unwrap_err(), Error::ParameterMismatch);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(40))]
        #[test]
        fn ring_laws(seed in any::<u64>(), p in prop::sample::select(vec![3u64, 5, 7])) {
            let f = field(p);
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let d = -23;
            let (x, y, z) = (K1Element::random(&f, d, 3, &mut rng), K1Element::random(&f, d, 3, &mut rng), K1Element::random(&f, d, 3, &mut rng));
            prop_assert_eq!(x.mul(&y), y.mul(&x));
            prop_assert_eq!(x.mul(&y).mul(&z), x.mul(&y.mul(&z)));
            prop_assert_eq!(x.mul(&y.try_add(&z).unwrap()), x.mul(&y).try_add(&x.mul(&z)).unwrap());
            prop_assert_eq!(x.mul(&y).sigma(), x.sigma().mul(&y.sigma()));
            prop_assert_eq!(x.sigma_pow(p), x.clone());
            prop_assert_eq!(x.mul(&y).relative_norm().unwrap(), x.relative_norm().unwrap().mul(&y.relative_norm().unwrap()));
        }
    }
}
