use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::fp_linalg::{axpy, FpVector, SpanBasis};
use crate::par::Exec;
use crate::util::binom_mod_p;

use super::cochain::{accumulate, cup_scalar, d0, d1, Cochain1, Cochain2};
use super::cohomology::{Budget, Cohomology};
use super::group::FiniteGroup;
use super::module::{CharacterChi, FpModule};
use super::omega::OmegaModule;

/// The scalar cochain g ↦ C(χ(g), k) mod p.
pub fn binomial_chi(chi: &CharacterChi, k: u64) -> Cochain1 {
    let p = chi.p();
    Cochain1::scalar(p as u32, chi.values().iter().map(|&a| binom_mod_p(a, k, p)))
}

/// Ψ⁽ⁿ⁾(f) as the connecting map: zero-fill the xⁿ coordinate, apply d in
/// Ω/I^{n+1}⊗T, check everything below xⁿ vanishes and read off xⁿ.
pub fn bockstein_direct(g: &FiniteGroup, om: &OmegaModule, f: &Cochain1) -> Result<Cochain2> {
    let n = om.n();
    let t = om.base_dim();
    let up = OmegaModule::new(g, om.base(), om.chi(), n + 1)?;
    let lift = OmegaModule::map_cochain(f, (n + 1) * t, |v| {
        let mut w = v.to_vec();
        w.resize((n + 1) * t, 0);
        w
    });
    let df = d1(g, up.module(), &lift);
    let mut out = Cochain2::zero(df.p, g.order(), t);
    for a in 0..g.order() {
        for b in 0..g.order() {
            let v = df.at(a, b);
            if v[..n * t].iter().any(|&x| x != 0) {
                return Err(Error::NotACocycle);
            }
            out.at_mut(a, b).copy_from_slice(&v[n * t..]);
        }
    }
    Ok(out)
}

/// Σ_{i=1}^{n} C(χ, i) ∪ ψ_{n−i} for f = Σ ψ_i x^i with n = psis.len().
/// The empty list gives Ψ⁽⁰⁾ = 0.
pub fn bockstein_formula(g: &FiniteGroup, t: &FpModule, chi: &CharacterChi, psis: &[Cochain1]) -> Result<Cochain2> {
    let n = psis.len();
    let mut out = Cochain2::zero(t.p(), g.order(), t.dim());
    if n == 0 {
        return Ok(out);
    }
    let om = OmegaModule::new(g, t, chi, n)?;
    if !d1(g, om.module(), &om.assemble(psis)).is_zero() {
        return Err(Error::NotACocycle);
    }
    for i in 1..=n {
        accumulate(&mut out, &cup_scalar(g, &binomial_chi(chi, i as u64), t, &psis[n - i]));
    }
    Ok(out)
}

/// Shared state for Bockstein computations on one (G, T, χ).
pub struct Bockstein<'a> {
    g: &'a FiniteGroup,
    t: &'a FpModule,
    chi: &'a CharacterChi,
    budget: Budget,
    exec: Exec,
    target: Cohomology<'a>,
}

impl<'a> Bockstein<'a> {
    pub fn new(g: &'a FiniteGroup, t: &'a FpModule, chi: &'a CharacterChi, budget: Budget) -> Result<Self> {
        Self::with_exec(g, t, chi, budget, Exec::default())
    }

    pub fn with_exec(
        g: &'a FiniteGroup,
        t: &'a FpModule,
        chi: &'a CharacterChi,
        budget: Budget,
        exec: Exec,
    ) -> Result<Self> {
        let target = Cohomology::with_exec(g, t, budget, exec)?;
        Ok(Bockstein { g, t, chi, budget, exec, target })
    }

    pub fn omega(&self, n: usize) -> Result<OmegaModule> {
        OmegaModule::new(self.g, self.t, self.chi, n)
    }

    /// Cohomology of the target H²(G, T).
    pub fn target(&self) -> &Cohomology<'a> {
        &self.target
    }

    pub fn class_rep(&self, c: &Cochain2) -> Result<FpVector> {
        self.target.class_rep(c)
    }

    pub fn is_zero_class(&self, c: &Cochain2) -> Result<bool> {
        self.target.is_coboundary(c)
    }

    /// Ψ⁽ⁿ⁾ of a cocycle in Ω/Iⁿ⊗T, as a canonical class representative.
    pub fn psi_class(&self, om: &OmegaModule, f: &Cochain1) -> Result<FpVector> {
        self.class_rep(&bockstein_direct(self.g, om, f)?)
    }

    /// Does the class of f ∈ Z¹(Ω/Iⁿ⊗T) lift to H¹(Ω/I^{n+1}⊗T)? Decided as
    /// membership of f in trunc(Z¹(Ω/I^{n+1}⊗T)) + B¹(Ω/Iⁿ⊗T).
    pub fn lifts_one_level(&self, om: &OmegaModule, f: &Cochain1) -> Result<bool> {
        let n = om.n();
        let up = self.omega(n + 1)?;
        let hu = Cohomology::with_exec(self.g, up.module(), self.budget, self.exec)?;
        let len = self.g.order() * om.module().dim();
        let mut span = SpanBasis::new(self.t.p(), len, false);
        for z in hu.z1_basis()? {
            span.insert(OmegaModule::map_cochain(z, om.module().dim(), |v| up.truncate_vec(v, n)).values);
        }
        for j in 0..om.module().dim() {
            let mut e = vec![0u32; om.module().dim()];
            e[j] = 1;
            span.insert(d0(self.g, om.module(), &e).values);
        }
        Ok(span.contains(&f.values))
    }

    fn check_n_max(&self, n_max: usize) -> Result<()> {
        let max = self.chi.modulus() as usize;
        if n_max >= max {
            return Err(Error::TruncationRange { n: n_max, max: max - 1 });
        }
        Ok(())
    }

    /// Smallest n ≤ n_max with Ψ⁽ⁿ⁾ ≠ 0 on Z¹(Ω/Iⁿ⊗T). While every lower Ψ
    /// vanishes, Ψ⁽ⁿ⁾ only depends on the class of ψ₀, so the scan carries one
    /// lift per H¹(G,T) basis class and extends it a level at a time using a
    /// coboundary witness for the vanishing obstruction.
    pub fn min_nonvanishing_psi(&self, n_max: usize) -> Result<Option<usize>> {
        self.check_n_max(n_max)?;
        let p = self.t.p();
        let t = self.t.dim();
        let mut lifts = self.target.h1_basis()?;
        for n in 1..=n_max {
            let om = self.omega(n)?;
            let obstructions = self.exec.map(&lifts, |f| bockstein_direct(self.g, &om, f));
            let mut next = Vec::with_capacity(lifts.len());
            for (f, obs) in lifts.iter().zip(obstructions) {
                let obs = obs?;
                let Some(w) = self.target.coboundary_witness(&obs)? else {
                    return Ok(Some(n));
                };
                // f − w·xⁿ is a cocycle in Ω/I^{n+1}⊗T.
                next.push(Cochain1::from_fn(p, self.g.order(), (n + 1) * t, |x| {
                    let mut v = f.at(x).to_vec();
                    v.extend(w.at(x).iter().map(|&c| crate::fp_linalg::fp_neg(c, p)));
                    v
                }));
            }
            lifts = next;
        }
        Ok(None)
    }

    /// The same scan over a full basis of Z¹(Ω/Iⁿ⊗T) at every level.
    pub fn min_nonvanishing_psi_exhaustive(&self, n_max: usize) -> Result<Option<usize>> {
        self.check_n_max(n_max)?;
        for n in 1..=n_max {
            let om = self.omega(n)?;
            let h = Cohomology::with_exec(self.g, om.module(), self.budget, self.exec)?;
            let basis = h.z1_basis()?;
            let nonzero = self.exec.map(basis, |f| -> Result<bool> { Ok(!self.is_zero_class(&bockstein_direct(self.g, &om, f)?)?) });
            for r in nonzero {
                if r? {
                    return Ok(Some(n));
                }
            }
        }
        Ok(None)
    }

    /// Ψ⁽ⁿ⁾ vanishes on all of Z¹(Ω/Iⁿ⊗T)?
    pub fn psi_vanishes(&self, n: usize) -> Result<bool> {
        let om = self.omega(n)?;
        let h = Cohomology::with_exec(self.g, om.module(), self.budget, self.exec)?;
        for f in h.z1_basis()? {
            if !self.is_zero_class(&bockstein_direct(self.g, &om, f)?)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// For `trials` random pairs f, f' = f + d(m) + x·h of cocycles in
    /// Ω/Iⁿ⊗T sharing the class of ψ₀, compare Ψ⁽ⁿ⁾(f) and Ψ⁽ⁿ⁾(f').
    pub fn reduce_independence_check(&self, n: usize, trials: usize, seed: u64) -> Result<bool> {
        for i in 1..n {
            if !self.psi_vanishes(i)? {
                return Err(Error::HypothesisFailed(format!("Ψ⁽{i}⁾ is nonzero")));
            }
        }
        let p = self.t.p();
        let om = self.omega(n)?;
        let h = Cohomology::with_exec(self.g, om.module(), self.budget, self.exec)?;
        let below = if n > 1 { Some(self.omega(n - 1)?) } else { None };
        let hb = match &below {
            Some(b) => Some(Cohomology::with_exec(self.g, b.module(), self.budget, self.exec)?),
            None => None,
        };
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..trials {
            let f = h.random_cocycle1(&mut rng)?;
            let m: Vec<u32> = (0..om.module().dim()).map(|_| rng.gen_range(0..p)).collect();
            let mut f2 = f.add(&d0(self.g, om.module(), &m));
            if let Some(hb) = &hb {
                let hx = hb.random_cocycle1(&mut rng)?;
                let shifted = OmegaModule::map_cochain(&hx, om.module().dim(), |v| om.mul_x(v));
                axpy(&mut f2.values, 1, &shifted.values, p);
            }
            if self.psi_class(&om, &f)? != self.psi_class(&om, &f2)? {
                return Ok(false);
            }
        }
        Ok(true)
    }
}
