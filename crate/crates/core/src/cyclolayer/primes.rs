use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::quadfield::{split_type, QuadElement, SplitType};

use super::k1::K1Element;
use super::period::{charpoly, mult_matrix, PeriodField};

/// Roots mod q are found by trial below this bound, by Cantor–Zassenhaus above.
const TRIAL_ROOT_BOUND: u64 = 1 << 12;

fn mulm(a: u64, b: u64, q: u64) -> u64 {
    ((a as u128 * b as u128) % q as u128) as u64
}

fn powm(mut b: u64, mut e: u64, q: u64) -> u64 {
    let mut r = 1 % q;
    b %= q;
    while e > 0 {
        if e & 1 == 1 {
            r = mulm(r, b, q);
        }
        b = mulm(b, b, q);
        e >>= 1;
    }
    r
}

fn invm(a: u64, q: u64) -> u64 {
    powm(a, q - 2, q)
}

fn big_mod(x: &BigInt, q: u64) -> u64 {
    x.mod_floor(&BigInt::from(q)).to_u64().expect("reduced below q")
}

/// Dense polynomials over F_q, ascending, without trailing zeros.
mod poly {
    use super::{invm, mulm};

    pub type Poly = Vec<u64>;

    pub fn trim(mut a: Poly) -> Poly {
        while a.last() == Some(&0) {
            a.pop();
        }
        a
    }

    pub fn deg(a: &[u64]) -> Option<usize> {
        a.len().checked_sub(1)
    }

    pub fn sub(a: &[u64], b: &[u64], q: u64) -> Poly {
        let mut out = vec![0; a.len().max(b.len())];
        for (i, o) in out.iter_mut().enumerate() {
            let x = a.get(i).copied().unwrap_or(0);
            let y = b.get(i).copied().unwrap_or(0);
            *o = (x + q - y) % q;
        }
        trim(out)
    }

    pub fn mul(a: &[u64], b: &[u64], q: u64) -> Poly {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut out = vec![0; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            for (j, &y) in b.iter().enumerate() {
                out[i + j] = (out[i + j] + mulm(x, y, q)) % q;
            }
        }
        trim(out)
    }

    pub fn divrem(a: &[u64], m: &[u64], q: u64) -> (Poly, Poly) {
        let dm = deg(m).expect("nonzero divisor");
        let lead_inv = invm(m[dm], q);
        let mut r = trim(a.to_vec());
        if r.len() <= dm {
            return (Vec::new(), r);
        }
        let mut quot = vec![0; r.len() - dm];
        while let Some(dr) = deg(&r).filter(|&d| d >= dm) {
            let c = mulm(r[dr], lead_inv, q);
            quot[dr - dm] = c;
            for (i, &mi) in m.iter().enumerate() {
                let k = dr - dm + i;
                r[k] = (r[k] + q - mulm(c, mi, q)) % q;
            }
            r = trim(r);
        }
        (trim(quot), r)
    }

    pub fn rem(a: &[u64], m: &[u64], q: u64) -> Poly {
        divrem(a, m, q).1
    }

    pub fn monic(a: Poly, q: u64) -> Poly {
        match a.last() {
            Some(&l) => {
                let li = invm(l, q);
                a.into_iter().map(|c| mulm(c, li, q)).collect()
            }
            None => a,
        }
    }

    pub fn gcd(a: &[u64], b: &[u64], q: u64) -> Poly {
        let (mut x, mut y) = (trim(a.to_vec()), trim(b.to_vec()));
        while !y.is_empty() {
            let r = rem(&x, &y, q);
            x = y;
            y = r;
        }
        monic(x, q)
    }

    pub fn powmod(base: &[u64], mut e: u64, m: &[u64], q: u64) -> Poly {
        let mut r = rem(&[1], m, q);
        let mut b = rem(base, m, q);
        while e > 0 {
            if e & 1 == 1 {
                r = rem(&mul(&r, &b, q), m, q);
            }
            b = rem(&mul(&b, &b, q), m, q);
            e >>= 1;
        }
        r
    }

    pub fn derivative(a: &[u64], q: u64) -> Poly {
        trim(a.iter().enumerate().skip(1).map(|(i, &c)| mulm(c, i as u64 % q, q)).collect())
    }

    pub fn eval(a: &[u64], x: u64, q: u64) -> u64 {
        a.iter().rev().fold(0, |acc, &c| (mulm(acc, x, q) + c) % q)
    }
}

use poly::Poly;

/// Split a monic squarefree product of distinct linear factors.
fn split_linear(f: &[u64], q: u64, rng: &mut ChaCha8Rng, out: &mut Vec<u64>) {
    match poly::deg(f) {
        None | Some(0) => {}
        Some(1) => out.push((q - f[0]) % q),
        Some(d) => loop {
            let a = rng.gen_range(0..q);
            let h = poly::powmod(&[a, 1], (q - 1) / 2, f, q);
            let g = poly::gcd(&poly::sub(&h, &[1], q), f, q);
            let dg = poly::deg(&g).unwrap_or(0);
            if dg > 0 && dg < d {
                let (other, _) = poly::divrem(f, &g, q);
                split_linear(&g, q, rng, out);
                split_linear(&poly::monic(other, q), q, rng, out);
                return;
            }
        },
    }
}

/// All roots in F_q of a polynomial, ascending.
fn roots_mod(f: &[u64], q: u64) -> Vec<u64> {
    let mut roots = if q <= TRIAL_ROOT_BOUND {
        (0..q).filter(|&x| poly::eval(f, x, q) == 0).collect()
    } else {
        let f = poly::monic(f.to_vec(), q);
        let xq = poly::powmod(&[0, 1], q, &f, q);
        let g = poly::gcd(&poly::sub(&xq, &[0, 1], q), &f, q);
        let mut rng = ChaCha8Rng::seed_from_u64(q);
        let mut out = Vec::new();
        split_linear(&g, q, &mut rng, &mut out);
        out
    };
    roots.sort_unstable();
    roots
}

/// A prime 𝔔 of K₁ above a rational prime q ≠ p, given by the pair of a
/// prime of K and a prime of Q₁ (their residue degrees are coprime, so the
/// pair determines 𝔔).
#[derive(Debug, Clone)]
pub struct LocalPrime {
    pub q: BigInt,
    pub k_index: usize,
    pub q1_index: usize,
    pub residue_degree: u32,
    pub ramification: u32,
    idempotent: K1Element,
    uniformizer: Option<K1Element>,
}

impl LocalPrime {
    /// Integral lift of the idempotent cutting out 𝔔 in O_{K₁}/q.
    pub fn idempotent(&self) -> &K1Element {
        &self.idempotent
    }

    /// v_𝔔(γ) for γ ≠ 0. `norm_exponent` must bound v_q(N_{K₁/Q}(γ)) from above.
    pub fn valuation(&self, gamma: &K1Element, norm_exponent: u64) -> Result<u64> {
        if gamma.is_zero() {
            return Err(Error::InvalidInput("valuation of zero".into()));
        }
        let modulus = num_traits::pow(self.q.clone(), norm_exponent as usize + 1);
        let mut g = gamma.reduce_mod(&modulus);
        let mut v = 0;
        loop {
            let ge = g.mul(&self.idempotent);
            let inside = match &self.uniformizer {
                None => ge.divisible_by(&self.q),
                Some(_) => ge.mul(&ge).divisible_by(&self.q),
            };
            if !inside {
                return Ok(v);
            }
            let lifted = match &self.uniformizer {
                None => ge,
                Some(pi) => ge.mul(pi),
            };
            g = lifted
                .div_int(&self.q)
                .ok_or_else(|| Error::InternalInconsistency(format!("step at a prime above {} left O_K1", self.q)))?
                .reduce_mod(&modulus);
            v += 1;
            if v > norm_exponent {
                return Err(Error::InternalInconsistency(format!("valuation above {} exceeds the norm bound", self.q)));
            }
        }
    }
}

/// v_q(n) for n ≠ 0.
pub fn q_adic_order(n: &BigInt, q: &BigInt) -> u64 {
    let mut n = n.clone();
    let mut v = 0;
    while !n.is_zero() && n.is_multiple_of(q) {
        n /= q;
        v += 1;
    }
    v
}

/// v_q(N_{K₁/Q}(γ)).
pub fn norm_exponent(gamma: &K1Element, q: &BigInt) -> Result<u64> {
    Ok(q_adic_order(&gamma.absolute_norm()?, q))
}

/// Coordinates of θ^k mod q for k < p.
fn theta_powers(field: &PeriodField, theta: &[BigInt], q: &BigInt) -> Vec<Vec<BigInt>> {
    let n = field.degree();
    let mut one = vec![BigInt::zero(); n];
    one[0] = BigInt::one();
    let mut pows = vec![one];
    for k in 1..n {
        let next: Vec<BigInt> = field.mul_int(&pows[k - 1], theta).iter().map(|c| c.mod_floor(q)).collect();
        pows.push(next);
    }
    pows
}

/// Lagrange idempotents of F_q[x]/Π(x − r_j), as coefficient vectors.
fn lagrange(roots: &[u64], q: u64) -> Vec<Poly> {
    roots
        .iter()
        .enumerate()
        .map(|(j, &rj)| {
            let mut num: Poly = vec![1];
            let mut den = 1u64;
            for (k, &rk) in roots.iter().enumerate() {
                if k != j {
                    num = poly::mul(&num, &[(q - rk) % q, 1], q);
                    den = mulm(den, (rj + q - rk) % q, q);
                }
            }
            let c = invm(den, q);
            num.into_iter().map(|x| mulm(x, c, q)).collect()
        })
        .collect()
}

/// Random generators tried when q divides the index of Z[η₀].
const THETA_SEARCH_TRIES: u64 = 256;

/// The characteristic polynomial of θ mod q, if it is squarefree. Then
/// q ∤ disc(θ) = [O_{Q₁} : Z[θ]]²·disc(O_{Q₁}), so O_{Q₁}/q = F_q[θ].
fn separable_charpoly(field: &PeriodField, theta: &[BigInt], q: u64) -> Option<Poly> {
    let f: Poly = poly::trim(charpoly(&mult_matrix(field, theta)).iter().map(|c| big_mod(c, q)).collect());
    (poly::deg(&poly::gcd(&f, &poly::derivative(&f, q), q)) == Some(0)).then_some(f)
}

/// The primes of K₁ above q ≠ p. O_{Q₁}/q is presented as F_q[θ]. A supplied
/// θ is used as given; otherwise θ = η₀, and when q divides the index of
/// Z[η₀] a seeded search over small integral θ takes its place. A θ whose
/// characteristic polynomial is not squarefree mod q, or a failed search
/// (as for a common index divisor), gives [`Error::IndexDivisor`].
pub fn primes_above(field: &PeriodField, disc: i64, q: &BigInt, theta: Option<&[BigInt]>) -> Result<Vec<LocalPrime>> {
    let p = field.p();
    if *q == BigInt::from(p) {
        return Err(Error::InvalidInput("primes above p are not handled here".into()));
    }
    let qu = q
        .to_u64()
        .filter(|&x| (2..(1 << 62)).contains(&x))
        .ok_or_else(|| Error::BudgetExceeded(format!("prime {q} is outside the machine-word range")))?;
    if !crate::util::is_prime(qu) {
        return Err(Error::InvalidInput(format!("{q} is not prime")));
    }
    let n = field.degree();
    let index_divisor = || Error::IndexDivisor { q: q.clone() };
    let (theta, f): (Vec<BigInt>, Poly) = match theta {
        Some(t) if t.len() != n => {
            return Err(Error::MalformedCertificate(format!("generator hint for {q} needs {n} coordinates")));
        }
        Some(t) => {
            let f = separable_charpoly(field, t, qu).ok_or_else(index_divisor)?;
            (t.to_vec(), f)
        }
        None => {
            let eta0: Vec<BigInt> = field.eta0().iter().map(|&c| BigInt::from(c)).collect();
            let mut rng = ChaCha8Rng::seed_from_u64(qu);
            std::iter::once(eta0)
                .chain((0..THETA_SEARCH_TRIES).map(|_| (0..n).map(|_| BigInt::from(rng.gen_range(-3i64..=3))).collect()))
                .find_map(|t| separable_charpoly(field, &t, qu).map(|f| (t, f)))
                .ok_or_else(index_divisor)?
        }
    };
    let theta = theta.as_slice();

    // Q₁ side: q splits completely or stays inert, since Q₁/Q is cyclic of prime degree.
    let roots = roots_mod(&f, qu);
    let pows = theta_powers(field, theta, q);
    let (q1_idems, f_q1): (Vec<Vec<BigInt>>, u32) = match roots.len() {
        0 => {
            let mut one = vec![BigInt::zero(); n];
            one[0] = BigInt::one();
            (vec![one], n as u32)
        }
        r if r == n => {
            let idems = lagrange(&roots, qu)
                .into_iter()
                .map(|l| {
                    let mut v = vec![BigInt::zero(); n];
                    for (i, c) in l.iter().enumerate() {
                        for (vk, pk) in v.iter_mut().zip(&pows[i]) {
                            *vk += pk * c;
                        }
                    }
                    v.into_iter().map(|x| x.mod_floor(q)).collect()
                })
                .collect();
            (idems, 1)
        }
        r => return Err(Error::InternalInconsistency(format!("{q} has {r} of {n} roots in Q₁"))),
    };

    // K side, with ω = (D + √D)/2 and m_K(x) = x² − Dx + (D² − D)/4.
    let omega_minus = |r: &BigInt| QuadElement::from_halves(disc, BigInt::from(disc) - 2 * r, BigInt::one());
    let st = split_type(disc, qu);
    let (k_idems, f_k, uniformizer): (Vec<QuadElement>, u32, Option<QuadElement>) = match st {
        SplitType::Split => {
            let d = BigInt::from(disc);
            let m_k: Poly = poly::trim(vec![
                big_mod(&((&d * &d - &d) / 4), qu),
                big_mod(&-&d, qu),
                1,
            ]);
            let r = roots_mod(&m_k, qu);
            if r.len() != 2 {
                return Err(Error::InternalInconsistency(format!("{q} splits in K but m_K has {} roots", r.len())));
            }
            let (r1, r2) = (r[0], r[1]);
            let c = BigInt::from(invm((r1 + qu - r2) % qu, qu));
            let e1 = omega_minus(&BigInt::from(r2))?.scale(&c);
            let e2 = omega_minus(&BigInt::from(r1))?.scale(&(q - &c));
            (vec![e1, e2], 1, None)
        }
        SplitType::Inert => (vec![QuadElement::one(disc)], 2, None),
        SplitType::Ramified => {
            let pi = (0..qu)
                .map(|a| omega_minus(&-BigInt::from(a)))
                .find(|e| e.as_ref().is_ok_and(|e| e.norm().is_multiple_of(q)))
                .ok_or_else(|| Error::InternalInconsistency(format!("no uniformizer above ramified {q}")))??;
            (vec![QuadElement::one(disc)], 1, Some(pi))
        }
    };
    let ramification = if uniformizer.is_some() { 2 } else { 1 };
    let field_arc = PeriodField::get(p)?;
    let pi = uniformizer.map(|u| K1Element::from_quad(&field_arc, u));

    let mut out = Vec::new();
    for (i, ek) in k_idems.iter().enumerate() {
        for (j, eq) in q1_idems.iter().enumerate() {
            let coeffs = eq.iter().map(|c| ek.scale(c)).collect();
            let idempotent = K1Element::new(&field_arc, disc, coeffs)?.reduce_mod(q);
            out.push(LocalPrime {
                q: q.clone(),
                k_index: i,
                q1_index: j,
                residue_degree: f_k * f_q1,
                ramification,
                idempotent,
                uniformizer: pi.clone(),
            });
        }
    }
    Ok(out)
}

/// v_𝔔(γ) at every prime 𝔔 of K₁ above q.
pub fn valuations_above(gamma: &K1Element, q: &BigInt, theta: Option<&[BigInt]>, norm_exp: u64) -> Result<Vec<(LocalPrime, u64)>> {
    primes_above(gamma.field(), gamma.disc(), q, theta)?
        .into_iter()
        .map(|pr| {
            let v = pr.valuation(gamma, norm_exp)?;
            Ok((pr, v))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::{any, prop, prop_assume, proptest, ProptestConfig};

    fn big(x: i64) -> BigInt {
        BigInt::from(x)
    }

    fn check_norm_formula(gamma: &K1Element, q: &BigInt, theta: Option<&[BigInt]>) {
        let ne = norm_exponent(gamma, q).unwrap();
        let vals = valuations_above(gamma, q, theta, ne).unwrap();
        let total: u64 = vals.iter().map(|(pr, v)| pr.residue_degree as u64 * v).sum();
        assert_eq!(total, ne, "q={q} γ={gamma}");
    }

    #[test]
    fn roots_small_and_large() {
        // (x − 1)(x − 2)(x − 5) over F_7 and over F_10007.
        for q in [7u64, 10007] {
            let f = poly::mul(&poly::mul(&[q - 1, 1], &[q - 2, 1], q), &[q - 5, 1], q);
            assert_eq!(roots_mod(&f, q), vec![1, 2, 5]);
        }
        // x² + 1 has no roots mod 10007 ≡ 3 mod 4.
        assert!(roots_mod(&[1, 0, 1], 10007).is_empty());
    }

    #[test]
    fn splitting_in_q1_matches_the_power_criterion() {
        for p in [3u64, 5, 7] {
            let f = PeriodField::get(p).unwrap();
            for q in [2u64, 3, 5, 11, 13, 17, 19, 23, 29, 37, 43, 10007] {
                if q == p || f.index().is_multiple_of(&big(q as i64)) {
                    continue;
                }
                let primes = primes_above(&f, -4, &big(q as i64), None).unwrap();
                let split = crate::util::pow_mod(q, p - 1, p * p) == 1;
                let q1_count = primes.iter().map(|pr| pr.q1_index).max().unwrap() + 1;
                assert_eq!(q1_count, if split { p as usize } else { 1 }, "p={p} q={q}");
            }
        }
    }

    #[test]
    fn rational_prime_has_unit_valuations() {
        let f = PeriodField::get(5).unwrap();
        for (d, q) in [(-4, 5u64), (-4, 13), (-7, 11), (-23, 23), (-20, 2)] {
            if q == 5 {
                continue;
            }
            let gamma = K1Element::from_quad(&f, QuadElement::from_int(d, q));
            let ne = norm_exponent(&gamma, &big(q as i64)).unwrap();
            for (pr, v) in valuations_above(&gamma, &big(q as i64), None, ne).unwrap() {
                assert_eq!(v, pr.ramification as u64, "D={d} q={q}");
            }
        }
    }

    #[test]
    fn eta_is_a_unit_away_from_p() {
        let f = PeriodField::get(3).unwrap();
        let eta = super::super::eta_element(&f, -4);
        for q in [2i64, 5, 7, 17] {
            let vals = valuations_above(&eta, &big(q), None, 0).unwrap();
            assert!(vals.iter().all(|(_, v)| *v == 0));
        }
    }

    #[test]
    fn index_divisors_are_reported_and_hints_resolve_them() {
        for (p, q) in [(5u64, 7i64), (7, 19), (7, 31)] {
            let f = PeriodField::get(p).unwrap();
            let eta0: Vec<BigInt> = f.eta0().iter().map(|&c| big(c)).collect();
            assert_eq!(primes_above(&f, -4, &big(q), Some(&eta0)).unwrap_err(), Error::IndexDivisor { q: big(q) });
            // Find a generator of O_{Q₁}/q among small vectors.
            let n = f.degree();
            let theta: Vec<BigInt> = (1..200)
                .map(|s| (0..n).map(|i| big(((s * (i as i64 + 3) * 7919) % 5) - 2)).collect::<Vec<_>>())
                .find(|t| primes_above(&f, -4, &big(q), Some(t)).is_ok())
                .expect("some small generator");
            assert!(primes_above(&f, -4, &big(q), None).is_ok());
            let mut rng = ChaCha8Rng::seed_from_u64(q as u64);
            for _ in 0..5 {
                let gamma = K1Element::random(&f, -4, 3, &mut rng);
                if !gamma.is_zero() {
                    check_norm_formula(&gamma, &big(q), Some(&theta));
                    check_norm_formula(&gamma, &big(q), None);
                }
            }
        }
    }

    #[test]
    fn common_index_divisor_has_no_generator() {
        // 3^10 ≡ 1 mod 121, so 3 splits completely in the degree-11 field,
        // and F_3 has too few elements for a generator of O/3.
        let f = PeriodField::get(11).unwrap();
        assert_eq!(primes_above(&f, -4, &big(3), None).unwrap_err(), Error::IndexDivisor { q: big(3) });
    }

    #[test]
    fn idempotents_are_idempotent_and_orthogonal() {
        let f = PeriodField::get(3).unwrap();
        let q = big(17);
        let primes = primes_above(&f, -4, &q, None).unwrap();
        for a in &primes {
            assert!(a.idempotent().mul(a.idempotent()).try_sub(a.idempotent()).unwrap().divisible_by(&q));
            for b in &primes {
                if a.k_index != b.k_index || a.q1_index != b.q1_index {
                    assert!(a.idempotent().mul(b.idempotent()).divisible_by(&q));
                }
            }
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]
        #[test]
        fn norm_formula(seed in any::<u64>(),
                        p in prop::sample::select(vec![3u64, 5, 7]),
                        d in prop::sample::select(vec![-4i64, -7, -15, -20, -23, -39]),
                        q in prop::sample::select(vec![2i64, 3, 5, 11, 13, 17, 19, 23, 10007])) {
            let f = PeriodField::get(p).unwrap();
            let qb = big(q);
            prop_assume!(q as u64 != p && !f.index().is_multiple_of(&qb));
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let primes = primes_above(&f, d, &qb, None).unwrap();
            // Push mass into one prime so the valuations are not all zero.
            let target = &primes[rng.gen_range(0..primes.len())];
            let base = K1Element::random(&f, d, 3, &mut rng);
            let q_const = K1Element::from_quad(&f, QuadElement::from_int(d, qb.clone()));
            let gamma = base.mul(&target.idempotent().try_add(&q_const).unwrap());
            prop_assume!(!gamma.is_zero());
            check_norm_formula(&gamma, &qb, None);
        }
    }
}
