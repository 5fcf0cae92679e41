use crate::error::{Error, Result};
use crate::fp_linalg::{axpy, FpVector};
use crate::util::{inv_mod, is_prime, pow_mod};

use super::group::FiniteGroup;
use super::module::FpModule;

/// ε_ω = (1/#Δ) Σ_σ ω(σ) σ⁻¹ in (Z/p^N)[Δ]; coeffs[g] is the coefficient of g.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IdempotentEpsilon {
    pub delta: FiniteGroup,
    pub omega: Vec<u64>,
    pub modulus: u64,
    pub coeffs: Vec<u64>,
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    (a as u128 * b as u128 % m as u128) as u64
}

fn modulus(p: u64, n: u32) -> Result<u64> {
    if !is_prime(p) || n == 0 {
        return Err(Error::InvalidInput("need a prime p and N ≥ 1".into()));
    }
    p.checked_pow(n)
        .filter(|&m| m < 1 << 62)
        .ok_or_else(|| Error::InvalidInput(format!("{p}^{n} is too large")))
}

pub fn epsilon_idempotent(delta: &FiniteGroup, omega: &[u64], p: u64, n: u32) -> Result<IdempotentEpsilon> {
    let m = modulus(p, n)?;
    let order = delta.order() as u64;
    if order.is_multiple_of(p) {
        return Err(Error::PDividesDelta);
    }
    if omega.len() != delta.order() {
        return Err(Error::InvalidInput("ω needs one value per element".into()));
    }
    let omega: Vec<u64> = omega.iter().map(|&v| v % m).collect();
    if omega[delta.identity()] != 1 % m || omega.iter().any(|&v| v % p == 0) {
        return Err(Error::InvalidInput("ω is not unit-valued with ω(1) = 1".into()));
    }
    for a in 0..delta.order() {
        for b in 0..delta.order() {
            if omega[delta.mul(a, b)] != mul_mod(omega[a], omega[b], m) {
                return Err(Error::InvalidInput("ω is not a character".into()));
            }
        }
    }
    let inv = inv_mod(order as i64, m).expect("p ∤ #Δ");
    let mut coeffs = vec![0u64; delta.order()];
    for s in 0..delta.order() {
        coeffs[delta.inv(s)] = mul_mod(omega[s], inv, m);
    }
    Ok(IdempotentEpsilon { delta: delta.clone(), omega, modulus: m, coeffs })
}

/// Product in (Z/m)[Δ].
pub fn group_ring_mul(delta: &FiniteGroup, a: &[u64], b: &[u64], m: u64) -> Vec<u64> {
    let mut out = vec![0u64; delta.order()];
    for (x, &ax) in a.iter().enumerate() {
        if ax == 0 {
            continue;
        }
        for (y, &by) in b.iter().enumerate() {
            let z = delta.mul(x, y);
            out[z] = (out[z] + mul_mod(ax, by, m)) % m;
        }
    }
    out
}

/// All characters of a cyclic Δ = ⟨γ⟩ of order d | p − 1 into the
/// Teichmüller roots of unity mod p^N, in the order ω_j(γ^k) = ζ^{jk}.
pub fn cyclic_characters(delta: &FiniteGroup, p: u64, n: u32) -> Result<Vec<Vec<u64>>> {
    let m = modulus(p, n)?;
    let d = delta.order() as u64;
    if !(p - 1).is_multiple_of(d) {
        return Err(Error::InvalidInput(format!("#Δ = {d} does not divide p − 1")));
    }
    let gamma = (0..delta.order())
        .find(|&x| delta.element_order(x) as u64 == d)
        .ok_or_else(|| Error::InvalidInput("Δ is not cyclic".into()))?;
    let r = (2..p.max(3)).find(|&r| (1..p - 1).all(|k| pow_mod(r, k, p) != 1)).unwrap_or(1);
    // r^{p^{N−1}} is the Teichmüller lift of r.
    let teich = pow_mod(r, p.pow(n - 1), m);
    let zeta = pow_mod(teich, (p - 1) / d, m);
    let mut exponent = vec![0u64; delta.order()];
    let mut x = delta.identity();
    for k in 0..d {
        exponent[x] = k;
        x = delta.mul(x, gamma);
    }
    Ok((0..d)
        .map(|j| exponent.iter().map(|&k| pow_mod(zeta, j * k % d, m)).collect())
        .collect())
}

impl IdempotentEpsilon {
    /// ε acting on an F_p[Δ]-module (requires N such that p^N ≡ 0 mod the module's p).
    pub fn apply(&self, module: &FpModule, v: &[u32]) -> FpVector {
        let p = module.p();
        let mut out = vec![0u32; module.dim()];
        for (g, &c) in self.coeffs.iter().enumerate() {
            axpy(&mut out, (c % p as u64) as u32, &module.act(g, v), p);
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check_system(delta: &FiniteGroup, chars: &[Vec<u64>], p: u64, n: u32) {
        let eps: Vec<IdempotentEpsilon> = chars.iter().map(|w| epsilon_idempotent(delta, w, p, n).unwrap()).collect();
        let m = eps[0].modulus;
        let mut one = vec![0u64; delta.order()];
        one[delta.identity()] = 1;
        let mut total = vec![0u64; delta.order()];
        for (i, a) in eps.iter().enumerate() {
            assert_eq!(group_ring_mul(delta, &a.coeffs, &a.coeffs, m), a.coeffs);
            for (j, b) in eps.iter().enumerate() {
                if i != j {
                    assert!(group_ring_mul(delta, &a.coeffs, &b.coeffs, m).iter().all(|&x| x == 0));
                }
            }
            for (t, &c) in total.iter_mut().zip(&a.coeffs) {
                *t = (*t + c) % m;
            }
        }
        assert_eq!(total, one);
    }

    #[test]
    fn rank_one_examples() {
        let z2 = FiniteGroup::cyclic(2);
        let half = inv_mod(2, 125).unwrap();
        let triv = epsilon_idempotent(&z2, &[1, 1], 5, 3).unwrap();
        assert_eq!(triv.coeffs, vec![half, half]);
        let sign = epsilon_idempotent(&z2, &[1, 124], 5, 3).unwrap();
        assert_eq!(sign.coeffs, vec![half, 125 - half]);
        check_system(&z2, &[vec![1, 1], vec![1, 124]], 5, 3);
    }

    #[test]
    fn full_systems() {
        for (d, p, n) in [(2usize, 3u64, 4u32), (4, 5, 3), (6, 7, 2), (3, 7, 3), (10, 11, 2), (12, 13, 2)] {
            let delta = FiniteGroup::cyclic(d);
            let chars = cyclic_characters(&delta, p, n).unwrap();
            check_system(&delta, &chars, p, n);
        }
        // Δ = (Z/2)² at p = 3: characters are products of signs.
        let z2 = FiniteGroup::cyclic(2);
        let delta = FiniteGroup::direct_product(&z2, &z2);
        let m = 27u64;
        let sign = |e: usize| if e == 1 { m - 1 } else { 1 };
        let chars: Vec<Vec<u64>> = (0..4)
            .map(|c| (0..4).map(|x| {
                let a = if c & 2 != 0 { sign(x / 2) } else { 1 };
                let b = if c & 1 != 0 { sign(x % 2) } else { 1 };
                a * b % m
            }).collect())
            .collect();
        check_system(&delta, &chars, 3, 3);
    }

    #[test]
    fn preconditions_and_projection() {
        assert_eq!(epsilon_idempotent(&FiniteGroup::cyclic(3), &[1, 1, 1], 3, 2), Err(Error::PDividesDelta));
        assert!(epsilon_idempotent(&FiniteGroup::cyclic(2), &[1, 2], 5, 1).is_err());
        let z2 = FiniteGroup::cyclic(2);
        let sign_mod = FpModule::one_dim(&z2, 3, |x| if x == 1 { -1 } else { 1 }).unwrap();
        let e_sign = epsilon_idempotent(&z2, &[1, 8], 3, 2).unwrap();
        let e_triv = epsilon_idempotent(&z2, &[1, 1], 3, 2).unwrap();
        assert_eq!(e_sign.apply(&sign_mod, &[1]), vec![1]);
        assert_eq!(e_triv.apply(&sign_mod, &[1]), vec![0]);
    }
}
