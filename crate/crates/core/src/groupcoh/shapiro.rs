use crate::error::{Error, Result};
use crate::fp_linalg::{fp_add, rank, FpMatrix, SpanBasis};

use super::cochain::{d0, Cochain1};
use super::cohomology::{Budget, Cohomology};
use super::group::FiniteGroup;
use super::module::{CharacterChi, FpModule};
use super::omega::OmegaModule;

/// A normal subgroup U ◁ G with G/U cyclic of order p^l, its right cosets
/// Uσ_i and U as a group in its own right.
pub struct CyclicQuotient {
    pub sub: Vec<usize>,
    pub reps: Vec<usize>,
    pub coset_of: Vec<usize>,
    pub u: FiniteGroup,
    /// χ: G → G/U ≅ Z/p^l with kernel U; absent when U = G.
    pub chi: Option<CharacterChi>,
}

impl CyclicQuotient {
    pub fn new(g: &FiniteGroup, sub: &[usize], p: u64) -> Result<Self> {
        if !g.is_normal(sub) {
            return Err(Error::StructureMismatch("U is not a normal subgroup".into()));
        }
        let (reps, coset_of) = g.right_cosets(sub);
        let index = reps.len();
        let mut l = 0;
        let mut q = 1usize;
        while q < index {
            q *= p as usize;
            l += 1;
        }
        if q != index {
            return Err(Error::StructureMismatch(format!("[G:U] = {index} is not a power of {p}")));
        }
        let (u, emb) = g.subgroup(sub)?;
        let chi = if index == 1 {
            None
        } else {
            // A coset generating G/U, then χ(g) = k for g ∈ Uσ^k.
            let sigma = (0..g.order()).find(|&s| {
                let mut x = s;
                let mut k = 1;
                while coset_of[x] != coset_of[g.identity()] {
                    x = g.mul(x, s);
                    k += 1;
                }
                k == index
            });
            let sigma = sigma.ok_or_else(|| Error::StructureMismatch("G/U is not cyclic".into()))?;
            let mut values = vec![0u64; g.order()];
            let mut x = g.identity();
            for k in 0..index as u64 {
                for &h in sub {
                    values[g.mul(h, x)] = k;
                }
                x = g.mul(x, sigma);
            }
            Some(CharacterChi::new(g, p, l, values)?)
        };
        Ok(CyclicQuotient { sub: emb, reps, coset_of, u, chi })
    }

    pub fn index(&self) -> usize {
        self.reps.len()
    }
}

/// F_p[G/U] ⊗ T with g(Σ σ̄_i ⊗ t_i) = Σ ḡσ̄_i ⊗ g t_i, basis (coset i, j) ↦ i·dim + j.
pub fn induced_module(g: &FiniteGroup, q: &CyclicQuotient, t: &FpModule) -> Result<FpModule> {
    let (p, d, k) = (t.p(), t.dim(), q.index());
    let action = (0..g.order())
        .map(|x| {
            let mut m = FpMatrix::zeros(p, k * d, k * d);
            for i in 0..k {
                let to = q.coset_of[g.mul(x, q.reps[i])];
                for r in 0..d {
                    for c in 0..d {
                        m.set(to * d + r, i * d + c, t.matrix(x).get(r, c));
                    }
                }
            }
            m
        })
        .collect();
    FpModule::from_elements(g, p, k * d, action)
}

/// Hom_{ZU}(ZG, T) with (gφ)(x) = φ(xg), on coordinates φ(σ_i).
pub fn coinduced_module(g: &FiniteGroup, q: &CyclicQuotient, t: &FpModule) -> Result<FpModule> {
    let (p, d, k) = (t.p(), t.dim(), q.index());
    let action = (0..g.order())
        .map(|x| {
            // (gφ)(σ_i) = φ(σ_i g) = h_i φ(σ_δ(i)) with σ_i g = h_i σ_δ(i).
            let mut m = FpMatrix::zeros(p, k * d, k * d);
            for i in 0..k {
                let y = g.mul(q.reps[i], x);
                let di = q.coset_of[y];
                let h = g.mul(y, g.inv(q.reps[di]));
                for r in 0..d {
                    for c in 0..d {
                        m.set(i * d + r, di * d + c, t.matrix(h).get(r, c));
                    }
                }
            }
            m
        })
        .collect();
    FpModule::from_elements(g, p, k * d, action)
}

/// The isomorphism φ ↦ Σ σ̄_i⁻¹ ⊗ σ_i⁻¹ φ(σ_i) as a matrix.
pub fn shapiro_alpha(g: &FiniteGroup, q: &CyclicQuotient, t: &FpModule) -> FpMatrix {
    let (p, d, k) = (t.p(), t.dim(), q.index());
    let mut m = FpMatrix::zeros(p, k * d, k * d);
    for i in 0..k {
        let si = g.inv(q.reps[i]);
        let to = q.coset_of[si];
        for r in 0..d {
            for c in 0..d {
                m.add_to(to * d + r, i * d + c, t.matrix(si).get(r, c));
            }
        }
    }
    m
}

/// dim H^r(U, T) = dim H^r(G, F_p[G/U] ⊗ T) for r = 1, 2, with the module
/// isomorphism to the coinduced module checked first.
pub fn shapiro_check(g: &FiniteGroup, sub: &[usize], t: &FpModule, budget: Budget) -> Result<bool> {
    let q = CyclicQuotient::new(g, sub, t.p() as u64)?;
    let ind = induced_module(g, &q, t)?;
    let coind = coinduced_module(g, &q, t)?;
    let alpha = shapiro_alpha(g, &q, t);
    if rank(&alpha) != ind.dim() {
        return Ok(false);
    }
    for x in 0..g.order() {
        if alpha.mul(coind.matrix(x)) != ind.matrix(x).mul(&alpha) {
            return Ok(false);
        }
    }
    let tu = t.restrict(&q.sub);
    let hu = Cohomology::new(&q.u, &tu, budget)?;
    let hg = Cohomology::new(g, &ind, budget)?;
    Ok(hu.h1_dim()? == hg.h1_dim()? && hu.h2_dim()? == hg.h2_dim()?)
}

/// Cor(c)(g) = Σ_i σ_i⁻¹ c(σ_i g σ_δ(i)⁻¹) over right cosets Uσ_i, where
/// σ_i g ∈ Uσ_δ(i). `c` is indexed by the elements of U as a group.
pub fn corestriction(g: &FiniteGroup, q: &CyclicQuotient, t: &FpModule, c: &Cochain1) -> Cochain1 {
    let (p, d) = (t.p(), t.dim());
    let mut pos = vec![usize::MAX; g.order()];
    for (i, &x) in q.sub.iter().enumerate() {
        pos[x] = i;
    }
    Cochain1::from_fn(p, g.order(), d, |x| {
        let mut acc = vec![0u32; d];
        for &s in &q.reps {
            let y = g.mul(s, x);
            let h = g.mul(y, g.inv(q.reps[q.coset_of[y]]));
            let v = t.act(g.inv(s), c.at(pos[h]));
            for (a, b) in acc.iter_mut().zip(v) {
                *a = fp_add(*a, b, p);
            }
        }
        acc
    })
}

/// Restriction of a G-cochain to U.
pub fn restriction(q: &CyclicQuotient, c: &Cochain1) -> Cochain1 {
    Cochain1::from_fn(c.p, q.sub.len(), c.dim, |i| c.at(q.sub[i]).to_vec())
}

/// Is [ψ] in Cor(H¹(U, T)) ⊂ H¹(G, T)? Solved as membership of ψ in
/// Cor(Z¹(U,T)) + B¹(G,T).
pub fn norm_image_check(g: &FiniteGroup, sub: &[usize], t: &FpModule, psi: &Cochain1, budget: Budget) -> Result<bool> {
    let q = CyclicQuotient::new(g, sub, t.p() as u64)?;
    let tu = t.restrict(&q.sub);
    let hu = Cohomology::new(&q.u, &tu, budget)?;
    let mut span = SpanBasis::new(t.p(), g.order() * t.dim(), false);
    for z in hu.z1_basis()? {
        span.insert(corestriction(g, &q, t, z).values);
    }
    insert_b1(&mut span, g, t);
    Ok(span.contains(&psi.values))
}

/// Does [ψ] lift along Ω ⊗ T → Ω/I ⊗ T with Ω = F_p[G/U]? Solved as
/// membership of ψ in proj₀(Z¹(G, Ω⊗T)) + B¹(G,T).
pub fn lifts_to_full_omega(g: &FiniteGroup, sub: &[usize], t: &FpModule, psi: &Cochain1, budget: Budget) -> Result<bool> {
    let q = CyclicQuotient::new(g, sub, t.p() as u64)?;
    let mut span = SpanBasis::new(t.p(), g.order() * t.dim(), false);
    if let Some(chi) = &q.chi {
        let om = OmegaModule::new(g, t, chi, q.index())?;
        let h = Cohomology::new(g, om.module(), budget)?;
        for z in h.z1_basis()? {
            span.insert(om.coefficient(z, 0).values);
        }
    } else {
        let h = Cohomology::new(g, t, budget)?;
        for z in h.z1_basis()? {
            span.insert(z.values.clone());
        }
    }
    insert_b1(&mut span, g, t);
    Ok(span.contains(&psi.values))
}

fn insert_b1(span: &mut SpanBasis, g: &FiniteGroup, t: &FpModule) {
    for j in 0..t.dim() {
        let mut e = vec![0u32; t.dim()];
        e[j] = 1;
        span.insert(d0(g, t, &e).values);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groupcoh::cochain::is_cocycle1;

    fn z3_squared() -> FiniteGroup {
        FiniteGroup::direct_product(&FiniteGroup::cyclic(3), &FiniteGroup::cyclic(3))
    }

    #[test]
    fn shapiro_dimensions() {
        let z9 = FiniteGroup::cyclic(9);
        let t = FpModule::trivial(&z9, 3, 1);
        assert!(shapiro_check(&z9, &[0, 3, 6], &t, Budget::default()).unwrap());
        assert!(shapiro_check(&z9, &(0..9).collect::<Vec<_>>(), &t, Budget::default()).unwrap());
        let q = CyclicQuotient::new(&z9, &[0, 3, 6], 3).unwrap();
        let ind = induced_module(&z9, &q, &t).unwrap();
        assert_eq!(Cohomology::new(&z9, &ind, Budget::default()).unwrap().h1_dim().unwrap(), 1);

        let g = z3_squared();
        let t = FpModule::trivial(&g, 3, 1);
        assert!(shapiro_check(&g, &[0, 1, 2], &t, Budget::default()).unwrap());

        let g = FiniteGroup::direct_product(&FiniteGroup::cyclic(2), &FiniteGroup::cyclic(9));
        let sign = FpModule::one_dim(&g, 3, |x| if x / 9 == 1 { -1 } else { 1 }).unwrap();
        let u: Vec<usize> = (0..18).filter(|x| x % 3 == 0).collect();
        assert!(shapiro_check(&g, &u, &sign, Budget::default()).unwrap());
    }

    #[test]
    fn rejects_bad_quotients() {
        let z9 = FiniteGroup::cyclic(9);
        assert!(matches!(CyclicQuotient::new(&z9, &[0, 1], 3), Err(Error::StructureMismatch(_))));
        let z6 = FiniteGroup::cyclic(6);
        assert!(matches!(CyclicQuotient::new(&z6, &[0, 2, 4], 3), Err(Error::StructureMismatch(_))));
        let g = z3_squared();
        assert!(matches!(CyclicQuotient::new(&g, &[0], 3), Err(Error::StructureMismatch(_))));
    }

    #[test]
    fn corestriction_images() {
        // On Z/9 with U = 3Z/9 the transfer is g ↦ 3g, so the generator of
        // H¹(G, F_3) is a corestriction.
        let z9 = FiniteGroup::cyclic(9);
        let t = FpModule::trivial(&z9, 3, 1);
        let u = [0, 3, 6];
        let chi = Cochain1::scalar(3, 0..9);
        assert!(norm_image_check(&z9, &u, &t, &chi, Budget::default()).unwrap());
        assert!(lifts_to_full_omega(&z9, &u, &t, &chi, Budget::default()).unwrap());

        // On (Z/3)² with U a factor the transfer is g ↦ g³ = 1: Cor vanishes.
        let g = z3_squared();
        let t = FpModule::trivial(&g, 3, 1);
        let u = [0, 1, 2];
        for psi in [Cochain1::scalar(3, (0..9).map(|x| x / 3)), Cochain1::scalar(3, (0..9).map(|x| x % 3))] {
            assert!(!norm_image_check(&g, &u, &t, &psi, Budget::default()).unwrap());
            assert!(!lifts_to_full_omega(&g, &u, &t, &psi, Budget::default()).unwrap());
        }
        let zero = Cochain1::zero(3, 9, 1);
        assert!(norm_image_check(&g, &u, &t, &zero, Budget::default()).unwrap());
    }

    #[test]
    fn cor_of_res_and_agreement_of_routes() {
        let g = FiniteGroup::direct_product(&FiniteGroup::cyclic(2), &FiniteGroup::cyclic(9));
        let u: Vec<usize> = (0..18).filter(|x| x % 3 == 0).collect();
        let triv = FpModule::trivial(&g, 3, 1);
        let sign = FpModule::one_dim(&g, 3, |x| if x / 9 == 1 { -1 } else { 1 }).unwrap();
        for t in [&triv, &sign] {
            let q = CyclicQuotient::new(&g, &u, 3).unwrap();
            let tu = t.restrict(&q.sub);
            let hu = Cohomology::new(&q.u, &tu, Budget::default()).unwrap();
            for z in hu.z1_basis().unwrap() {
                assert!(is_cocycle1(&g, t, &corestriction(&g, &q, t, z)));
            }
            let hg = Cohomology::new(&g, t, Budget::default()).unwrap();
            for psi in hg.z1_basis().unwrap() {
                let cr = corestriction(&g, &q, t, &restriction(&q, psi));
                assert!(norm_image_check(&g, &u, t, &cr, Budget::default()).unwrap());
                assert_eq!(
                    norm_image_check(&g, &u, t, psi, Budget::default()).unwrap(),
                    lifts_to_full_omega(&g, &u, t, psi, Budget::default()).unwrap()
                );
            }
        }
    }
}
