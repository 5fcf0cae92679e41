use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::util::binom;

use super::k1::K1Element;

/// A_j = Π_{i<p} σ^i(β)^{C(i,j)} for 1 ≤ j < p.
pub fn a_product(beta: &K1Element, j: usize) -> Result<K1Element> {
    let p = beta.p();
    if j == 0 || j as u64 >= p {
        return Err(Error::OrderOutOfRange { n: j, p });
    }
    let mut acc = K1Element::one(beta.field(), beta.disc());
    let mut conj = beta.clone();
    for i in 0..p {
        if i > 0 {
            conj = conj.sigma();
        }
        let e = binom(i, j as u64).to_u64().expect("C(i, j) < 2^64 for i < 13");
        if e > 0 {
            acc = acc.mul(&conj.pow(e));
        }
    }
    Ok(acc)
}

/// Check σ(A_n)·σ(A_{n−1}) = β^{C(p,n)}·A_n, with A₀ read as N(β). For n = 1
/// this is σ(A₁)·N(β) = β^p·A₁. Both sides are integral, so no division.
pub fn a_product_identity(beta: &K1Element, n: usize) -> Result<bool> {
    let p = beta.p();
    let an = a_product(beta, n)?;
    let prev = if n == 1 {
        K1Element::from_quad(beta.field(), beta.relative_norm()?)
    } else {
        a_product(beta, n - 1)?.sigma()
    };
    let c = binom(p, n as u64).to_u64().expect("C(p, n) < 2^64 for p ≤ 13");
    Ok(an.sigma().mul(&prev) == beta.pow(c).mul(&an))
}

/// Σ_i coeffs[i]·σ^i in Z[σ]/(σ^p − 1).
fn cyclic_mul(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let p = a.len();
    let mut out = vec![BigInt::zero(); p];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[(i + j) % p] += x * y;
        }
    }
    out
}

/// (σ − 1)·Σ_i C(i,n)σ^i + σ·Σ_i C(i,n−1)σ^i = C(p,n) in Z[σ]/(σ^p − 1).
/// At n = 1 the second term is the norm element, which σ fixes.
pub fn group_ring_identity(p: u64, n: usize) -> Result<bool> {
    if n == 0 || n as u64 >= p {
        return Err(Error::OrderOutOfRange { n, p });
    }
    let pu = p as usize;
    let mut sigma = vec![BigInt::zero(); pu];
    sigma[1 % pu] = BigInt::from(1);
    let mut sigma_minus_one = sigma.clone();
    sigma_minus_one[0] -= 1;
    let pn: Vec<BigInt> = (0..p).map(|i| binom(i, n as u64)).collect();
    let pn1: Vec<BigInt> = (0..p).map(|i| binom(i, n as u64 - 1)).collect();
    let lhs: Vec<BigInt> = cyclic_mul(&sigma_minus_one, &pn)
        .into_iter()
        .zip(cyclic_mul(&sigma, &pn1))
        .map(|(a, b)| a + b)
        .collect();
    Ok(lhs[0] == binom(p, n as u64) && lhs[1..].iter().all(|c| c.is_zero()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cyclolayer::PeriodField;
    use crate::quadfield::QuadElement;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn constant_beta() {
        let f = PeriodField::get(5).unwrap();
        let c = QuadElement::new(-15, BigInt::from(1), BigInt::from(1), 2).unwrap();
        let a1 = a_product(&K1Element::from_quad(&f, c.clone()), 1).unwrap();
        assert_eq!(a1, K1Element::from_quad(&f, c.pow(10)));
    }

    #[test]
    fn order_range() {
        let f = PeriodField::get(3).unwrap();
        let one = K1Element::one(&f, -4);
        assert!(matches!(a_product(&one, 0), Err(Error::OrderOutOfRange { n: 0, p: 3 })));
        assert!(matches!(a_product(&one, 3), Err(Error::OrderOutOfRange { n: 3, p: 3 })));
        assert!(matches!(group_ring_identity(3, 3), Err(Error::OrderOutOfRange { .. })));
    }

    #[test]
    fn group_ring_identity_all_orders() {
        for p in [3u64, 5, 7, 11, 13] {
            for n in 1..p as usize {
                assert!(group_ring_identity(p, n).unwrap(), "p={p} n={n}");
            }
        }
    }

    #[test]
    fn group_ring_expansion_at_three() {
        // (σ − 1)(σ + 2σ²) = 2 − σ − σ², and adding 1 + σ + σ² leaves 3.
        let one = BigInt::from(1);
        let lhs = cyclic_mul(&[-one.clone(), one.clone(), BigInt::zero()], &[BigInt::zero(), one.clone(), BigInt::from(2)]);
        assert_eq!(lhs, [2, -1, -1].map(BigInt::from).to_vec());
    }

    #[test]
    fn lemma_identities_random_beta() {
        let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
        for (p, d) in [(3u64, -11), (5, -19)] {
            let f = PeriodField::get(p).unwrap();
            for _ in 0..50 {
                let beta = K1Element::random(&f, d, 2, &mut rng);
                if beta.is_zero() {
                    continue;
                }
                for n in 1..(p as usize).min(4) {
                    assert!(a_product_identity(&beta, n).unwrap(), "p={p} n={n} β={beta}");
                }
            }
        }
    }

    #[test]
    fn perturbed_a1_breaks_identity() {
        let f = PeriodField::get(3).unwrap();
        let beta = K1Element::from_ints(&f, -7, &[2, 1, 0].map(BigInt::from)).unwrap();
        let a1 = a_product(&beta, 1).unwrap();
        let b = K1Element::from_quad(&f, beta.relative_norm().unwrap());
        assert_eq!(a1.sigma().mul(&b), beta.pow(3).mul(&a1));
        let bad = a1.try_add(&K1Element::one(&f, -7)).unwrap();
        assert_ne!(bad.sigma().mul(&b), beta.pow(3).mul(&bad));
    }
}
