use crate::error::{Error, Result};
use crate::fp_linalg::FpMatrix;

use super::bockstein::{bockstein_direct, Bockstein};
use super::cochain::{d1, Cochain1, Cochain2};
use super::cohomology::{Budget, Cohomology};
use super::group::FiniteGroup;
use super::module::FpModule;
use super::omega::OmegaModule;
use super::shapiro::CyclicQuotient;

/// A tower 𝒢 ⊇ G ⊇ N of normal subgroups with 𝒢/N abelian, G/N cyclic of
/// p-power order and p ∤ [𝒢:G], so that 𝒢/N ≅ Δ ⊕ G/N.
pub struct Tower<'a> {
    big: &'a FiniteGroup,
    g: FiniteGroup,
    /// g-index → 𝒢-index.
    g_emb: Vec<usize>,
    /// 𝒢-index → g-index, usize::MAX outside G.
    g_pos: Vec<usize>,
    quotient: CyclicQuotient,
    /// Elements of 𝒢 whose image in 𝒢/N has order prime to p.
    delta_lifts: Vec<usize>,
}

impl<'a> Tower<'a> {
    pub fn new(big: &'a FiniteGroup, g_elems: &[usize], n_elems: &[usize], p: u64) -> Result<Self> {
        let mismatch = |m: &str| Error::StructureMismatch(m.into());
        if !big.is_normal(g_elems) || !big.is_normal(n_elems) {
            return Err(mismatch("G and N must be normal in 𝒢"));
        }
        let mut in_n = vec![false; big.order()];
        for &x in n_elems {
            in_n[x] = true;
        }
        let mut g_pos = vec![usize::MAX; big.order()];
        let (g, g_emb) = big.subgroup(g_elems)?;
        for (i, &x) in g_emb.iter().enumerate() {
            g_pos[x] = i;
        }
        if n_elems.iter().any(|&x| g_pos[x] == usize::MAX) {
            return Err(mismatch("N is not contained in G"));
        }
        if !(0..big.order()).all(|a| (0..big.order()).all(|b| in_n[big.commutator(a, b)])) {
            return Err(mismatch("𝒢/N is not abelian"));
        }
        let index = big.order() / g.order();
        if (index as u64).is_multiple_of(p) {
            return Err(mismatch("p divides [𝒢:G]"));
        }
        let n_in_g: Vec<usize> = n_elems.iter().map(|&x| g_pos[x]).collect();
        let quotient = CyclicQuotient::new(&g, &n_in_g, p)?;
        let order_mod_n = |x: usize| {
            let mut y = x;
            let mut k = 1u64;
            while !in_n[y] {
                y = big.mul(y, x);
                k += 1;
            }
            k
        };
        let delta_lifts: Vec<usize> = (0..big.order()).filter(|&x| order_mod_n(x) % p != 0).collect();
        // The p'-part must map onto 𝒢/G.
        let (_, coset_of) = big.right_cosets(g_elems);
        let mut hit = vec![false; index];
        for &x in &delta_lifts {
            hit[coset_of[x]] = true;
        }
        if hit.iter().any(|&h| !h) {
            return Err(mismatch("the prime-to-p part of 𝒢/N does not cover 𝒢/G"));
        }
        Ok(Tower { big, g, g_emb, g_pos, quotient, delta_lifts })
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.g
    }

    pub fn delta_lifts(&self) -> &[usize] {
        &self.delta_lifts
    }

    /// τ⁻¹ g τ as an element of G.
    fn conj_in_g(&self, tau: usize, g: usize) -> usize {
        self.g_pos[self.big.conj(tau, self.g_emb[g])]
    }

    /// (τφ)(g) = τ·φ(τ⁻¹gτ), with τ acting on Ω/Iⁿ⊗T through T only.
    pub fn act_cochain1(&self, tau: usize, t_tau: &FpMatrix, blocks: usize, f: &Cochain1) -> Cochain1 {
        let d = t_tau.rows();
        Cochain1::from_fn(f.p, f.order, f.dim, |g| {
            let v = f.at(self.conj_in_g(tau, g));
            (0..blocks).flat_map(|i| t_tau.mul_vec(&v[i * d..(i + 1) * d])).collect()
        })
    }

    /// (τc)(g,h) = τ·c(τ⁻¹gτ, τ⁻¹hτ).
    pub fn act_cochain2(&self, tau: usize, t_tau: &FpMatrix, c: &Cochain2) -> Cochain2 {
        let n = self.g.order();
        let mut out = Cochain2::zero(c.p, n, c.dim);
        for a in 0..n {
            for b in 0..n {
                let v = t_tau.mul_vec(c.at(self.conj_in_g(tau, a), self.conj_in_g(tau, b)));
                out.at_mut(a, b).copy_from_slice(&v);
            }
        }
        out
    }
}

/// Ψ⁽ⁿ⁾(τφ) = τΨ⁽ⁿ⁾(φ) in H²(G, T) for every Δ-lift τ and every φ in a basis
/// of Z¹(G, Ω/Iⁿ⊗T). `t` is a 𝒢-module; χ is G → G/N.
pub fn equivariance_check(
    big: &FiniteGroup,
    g_elems: &[usize],
    n_elems: &[usize],
    t: &FpModule,
    n: usize,
    budget: Budget,
) -> Result<bool> {
    let tower = Tower::new(big, g_elems, n_elems, t.p() as u64)?;
    let g = tower.group();
    let tg = t.restrict(&tower.g_emb);
    let Some(chi) = &tower.quotient.chi else {
        return Err(Error::StructureMismatch("G/N is trivial".into()));
    };
    let b = Bockstein::new(g, &tg, chi, budget)?;
    let om = OmegaModule::new(g, &tg, chi, n)?;
    let h = Cohomology::new(g, om.module(), budget)?;
    for &tau in tower.delta_lifts() {
        let t_tau = t.matrix(tau);
        for phi in h.z1_basis()? {
            let moved = tower.act_cochain1(tau, t_tau, n, phi);
            if !d1(g, om.module(), &moved).is_zero() {
                return Ok(false);
            }
            let lhs = bockstein_direct(g, &om, &moved)?;
            let rhs = tower.act_cochain2(tau, t_tau, &bockstein_direct(g, &om, phi)?);
            if !b.target().same_class(&lhs, &rhs)? {
                return Ok(false);
            }
        }
    }
    Ok(true)
}
