use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fp_linalg::{axpy, fp_mul, FpMatrix, FpVector};
use crate::groupcoh::{binomial_chi, Budget, CharacterChi, Cochain1, Cochain2, Cohomology, FiniteGroup, FpModule};
use crate::par::Exec;

use super::unipotent::UnipotentMatrix;

/// Largest number of corner candidates `lift_search` will enumerate.
pub const LIFT_SEARCH_CAP: u64 = 1 << 20;

/// A map ρ̄: G → Ū_N into upper unitriangular N×N matrices with the corner
/// (0, N−1) removed. Entries in the first N−1 columns are F_p-valued with
/// trivial action; the last column takes values in the module T. The twisted
/// law ρ̄(gh) = ρ̄(g)·gρ̄(h) holds entrywise away from the corner.
///
/// Indices are 0-based. Entry (i, j) exists for i < j except the corner.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DefiningSystem {
    size: usize,
    module: FpModule,
    order: usize,
    entries: Vec<Option<Cochain1>>,
    proper: Option<ProperData>,
}

/// The data a proper system was built from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProperData {
    pub chi: CharacterChi,
    pub psis: Vec<Cochain1>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MasseyResult {
    pub value: Cochain2,
    pub vanishes: bool,
    /// A corner cochain w with d(w) = −value, when one exists.
    pub witness: Option<Cochain1>,
}

/// A defining system completed by a corner entry into a twisted homomorphism.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Lift {
    pub system: DefiningSystem,
    pub corner: Cochain1,
}

impl DefiningSystem {
    /// Validate shapes and the twisted law. `entries` must hold exactly the
    /// positions (i, j), i < j < size, other than the corner.
    pub fn new(g: &FiniteGroup, module: &FpModule, size: usize, entries: BTreeMap<(usize, usize), Cochain1>) -> Result<Self> {
        if size < 3 {
            return Err(Error::InvalidInput("a defining system needs size at least 3".into()));
        }
        let p = module.p();
        let mut table = vec![None; size * size];
        for ((i, j), c) in entries {
            if !(i < j && j < size) || (i, j) == (0, size - 1) {
                return Err(Error::InvalidInput(format!("no entry ({i}, {j}) in a size {size} system")));
            }
            let want = if j == size - 1 { module.dim() } else { 1 };
            if c.p != p || c.order != g.order() || c.dim != want {
                return Err(Error::InvalidInput(format!("entry ({i}, {j}) has the wrong shape")));
            }
            table[i * size + j] = Some(c);
        }
        for i in 0..size {
            for j in i + 1..size {
                if (i, j) != (0, size - 1) && table[i * size + j].is_none() {
                    return Err(Error::InvalidInput(format!("entry ({i}, {j}) missing")));
                }
            }
        }
        let ds = DefiningSystem { size, module: module.clone(), order: g.order(), entries: table, proper: None };
        if !ds.satisfies_law(g, None) {
            return Err(Error::NotCocycleCompatible);
        }
        Ok(ds)
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn p(&self) -> u32 {
        self.module.p()
    }

    pub fn module(&self) -> &FpModule {
        &self.module
    }

    pub fn proper_data(&self) -> Option<&ProperData> {
        self.proper.as_ref()
    }

    /// Entry (i, j); `None` for the corner and positions outside the triangle.
    pub fn entry(&self, i: usize, j: usize) -> Option<&Cochain1> {
        if i < j && j < self.size {
            self.entries[i * self.size + j].as_ref()
        } else {
            None
        }
    }

    /// The superdiagonal characters ρ_{i,i+1} for i < size − 2.
    pub fn characters(&self) -> Vec<&Cochain1> {
        (0..self.size - 2).map(|i| self.entry(i, i + 1).expect("present")).collect()
    }

    fn entries_map(&self) -> BTreeMap<(usize, usize), Cochain1> {
        let mut out = BTreeMap::new();
        for i in 0..self.size {
            for j in i + 1..self.size {
                if let Some(c) = self.entry(i, j) {
                    out.insert((i, j), c.clone());
                }
            }
        }
        out
    }

    /// Twisted law on every present entry, and on the corner too when one is
    /// supplied.
    fn satisfies_law(&self, g: &FiniteGroup, corner: Option<&Cochain1>) -> bool {
        let (n, p, last) = (self.size, self.p(), self.size - 1);
        let get = |i: usize, j: usize| -> &Cochain1 {
            if (i, j) == (0, last) {
                corner.expect("corner requested")
            } else {
                self.entry(i, j).expect("present")
            }
        };
        Exec::default().all_range(g.order(), |a| {
            // a·ρ_{k,last}(b) for every k and b.
            let moved: Vec<Vec<FpVector>> = (0..last)
                .map(|k| {
                    if k == 0 && corner.is_none() {
                        return Vec::new();
                    }
                    (0..g.order()).map(|b| self.module.act(a, get(k, last).at(b))).collect()
                })
                .collect();
            for b in 0..g.order() {
                let ab = g.mul(a, b);
                for i in 0..n {
                    for j in i + 1..n {
                        if (i, j) == (0, last) && corner.is_none() {
                            continue;
                        }
                        if j < last {
                            let mut s = get(i, j).at(a)[0] + get(i, j).at(b)[0];
                            for k in i + 1..j {
                                s += fp_mul(get(i, k).at(a)[0], get(k, j).at(b)[0], p);
                            }
                            if s % p != get(i, j).at(ab)[0] {
                                return false;
                            }
                        } else {
                            let mut s = get(i, last).at(a).to_vec();
                            axpy(&mut s, 1, &moved[i][b], p);
                            for k in i + 1..last {
                                axpy(&mut s, get(i, k).at(a)[0], &moved[k][b], p);
                            }
                            if s != get(i, last).at(ab) {
                                return false;
                            }
                        }
                    }
                }
            }
            true
        })
    }

    /// value(g, h) = Σ_{0<j<N−1} ρ_{0,j}(g)·gρ_{j,N−1}(h): the corner of
    /// ρ̄(g)·gρ̄(h) minus its ρ_{0,N−1} terms.
    pub fn massey_cocycle(&self, g: &FiniteGroup) -> Cochain2 {
        let (p, last, dim) = (self.p(), self.size - 1, self.module.dim());
        let mut out = Cochain2::zero(p, g.order(), dim);
        for a in 0..g.order() {
            for b in 0..g.order() {
                let mut s = vec![0u32; dim];
                for j in 1..last {
                    let coeff = self.entry(0, j).expect("present").at(a)[0];
                    if coeff != 0 {
                        let v = self.module.act(a, self.entry(j, last).expect("present").at(b));
                        axpy(&mut s, coeff, &v, p);
                    }
                }
                out.at_mut(a, b).copy_from_slice(&s);
            }
        }
        out
    }

    pub fn to_json(&self) -> String {
        let json = SystemJson {
            p: self.p(),
            size: self.size,
            order: self.order,
            dim: self.module.dim(),
            action: (0..self.order).map(|g| self.module.matrix(g).data().to_vec()).collect(),
            entries: self
                .entries_map()
                .into_iter()
                .map(|((i, j), c)| EntryJson { i, j, values: c.values })
                .collect(),
        };
        serde_json::to_string(&json).expect("serializable")
    }

    /// Rebuild and revalidate a system written by [`DefiningSystem::to_json`].
    pub fn from_json(g: &FiniteGroup, json: &str) -> Result<Self> {
        let s: SystemJson =
            serde_json::from_str(json).map_err(|e| Error::InvalidInput(format!("defining system: {e}")))?;
        if s.order != g.order() || s.action.len() != g.order() {
            return Err(Error::InvalidInput("defining system is for a group of a different order".into()));
        }
        if s.action.iter().any(|m| m.len() != s.dim * s.dim) {
            return Err(Error::InvalidInput("action matrix has the wrong size".into()));
        }
        let action = s.action.into_iter().map(|m| FpMatrix::from_data(s.p, s.dim, s.dim, m)).collect();
        let module = FpModule::from_elements(g, s.p, s.dim, action)?;
        let entries = s
            .entries
            .into_iter()
            .map(|e| {
                let dim = if e.j + 1 == s.size { s.dim } else { 1 };
                if e.values.len() != s.order * dim || e.values.iter().any(|&v| v >= s.p) {
                    return Err(Error::InvalidInput(format!("entry ({}, {}) is malformed", e.i, e.j)));
                }
                Ok(((e.i, e.j), Cochain1 { p: s.p, order: s.order, dim, values: e.values }))
            })
            .collect::<Result<BTreeMap<_, _>>>()?;
        DefiningSystem::new(g, &module, s.size, entries)
    }
}

#[derive(Serialize, Deserialize)]
struct SystemJson {
    p: u32,
    size: usize,
    order: usize,
    dim: usize,
    action: Vec<Vec<u32>>,
    entries: Vec<EntryJson>,
}

#[derive(Serialize, Deserialize)]
struct EntryJson {
    i: usize,
    j: usize,
    values: Vec<u32>,
}

/// The proper system of (χ^{(n)}, ψ₀) with n = psis.len(): size n+2, entry
/// (i, j) = C(χ, j−i) in the first n+1 columns and ψ_{n−1}, …, ψ₀ down the
/// last column from row 1.
pub fn proper_system(g: &FiniteGroup, t: &FpModule, chi: &CharacterChi, psis: &[Cochain1]) -> Result<DefiningSystem> {
    let n = psis.len();
    if n == 0 {
        return Err(Error::InvalidInput("at least ψ₀ is required".into()));
    }
    if chi.p() != t.p() as u64 {
        return Err(Error::PrimeMismatch(chi.p(), t.p() as u64));
    }
    let size = n + 2;
    let binoms: Vec<Cochain1> = (0..=n as u64).map(|k| binomial_chi(chi, k)).collect();
    let mut entries = BTreeMap::new();
    for i in 0..size - 1 {
        for j in i + 1..size - 1 {
            entries.insert((i, j), binoms[j - i].clone());
        }
    }
    for i in 1..size - 1 {
        entries.insert((i, size - 1), psis[size - 2 - i].clone());
    }
    let mut ds = DefiningSystem::new(g, t, size, entries)?;
    ds.proper = Some(ProperData { chi: chi.clone(), psis: psis.to_vec() });
    Ok(ds)
}

/// The Massey cocycle of `ds`, with the coboundary test done by linear
/// algebra in the bar complex.
pub fn massey_value(g: &FiniteGroup, ds: &DefiningSystem, budget: Budget) -> Result<MasseyResult> {
    let value = ds.massey_cocycle(g);
    let h = Cohomology::new(g, ds.module(), budget)?;
    let witness = h.coboundary_witness(&value.neg())?;
    Ok(MasseyResult { vanishes: witness.is_some(), value, witness })
}

/// Search for a corner entry making ρ̄ a twisted homomorphism G → U_N, by
/// enumerating the corner on the generators, propagating along words with
/// the twisted law and checking every pair. Independent of the coboundary
/// solve in [`massey_value`].
pub fn lift_search(g: &FiniteGroup, ds: &DefiningSystem, exec: Exec) -> Result<Option<Lift>> {
    let (p, dim) = (ds.p(), ds.module().dim());
    let gens = g.generators();
    let slots = gens.len() * dim;
    let count = (p as u64).checked_pow(slots as u32).filter(|&c| c <= LIFT_SEARCH_CAP);
    let Some(count) = count else {
        return Err(Error::BudgetExceeded(format!("lift search over {p}^{slots} corner candidates")));
    };
    let value = ds.massey_cocycle(g);
    let words = g.words();
    let candidate = |idx: u64| -> Option<Cochain1> {
        let mut digits = Vec::with_capacity(slots);
        let mut x = idx;
        for _ in 0..slots {
            digits.push((x % p as u64) as u32);
            x /= p as u64;
        }
        // ρ_{0,N−1}(xs) = ρ_{0,N−1}(x) + x·ρ_{0,N−1}(s) + value(x, s).
        let mut w = Cochain1::zero(p, g.order(), dim);
        for (elem, word) in words.iter().enumerate() {
            let (mut x, mut acc) = (g.identity(), vec![0u32; dim]);
            for &k in word {
                let s = gens[k];
                axpy(&mut acc, 1, &ds.module().act(x, &digits[k * dim..(k + 1) * dim]), p);
                axpy(&mut acc, 1, value.at(x, s), p);
                x = g.mul(x, s);
            }
            w.values[elem * dim..(elem + 1) * dim].copy_from_slice(&acc);
        }
        ds.satisfies_law(g, Some(&w)).then_some(w)
    };
    let found = exec.map_range(count as usize, |idx| candidate(idx as u64)).into_iter().flatten().next();
    Ok(found.map(|corner| Lift { system: ds.clone(), corner }))
}

impl Lift {
    /// Re-check the twisted law on all pairs, corner included.
    pub fn is_homomorphism(&self, g: &FiniteGroup) -> bool {
        self.system.satisfies_law(g, Some(&self.corner))
    }

    /// The matrices ρ(g) when T is one-dimensional; with trivial action these
    /// form a homomorphism G → U_N(F_p).
    pub fn matrices(&self) -> Option<Vec<UnipotentMatrix>> {
        let ds = &self.system;
        if ds.module().dim() != 1 {
            return None;
        }
        let n = ds.size;
        let mats = (0..ds.order)
            .map(|x| {
                let mut m = UnipotentMatrix::identity(ds.p(), n);
                for i in 0..n {
                    for j in i + 1..n {
                        let c = if (i, j) == (0, n - 1) { &self.corner } else { ds.entry(i, j).expect("present") };
                        m.set(i, j, c.at(x)[0]);
                    }
                }
                m
            })
            .collect();
        Some(mats)
    }
}

/// Two systems agreeing on their first n columns (block A) and last
/// size − n rows (block D): add their up-right blocks B̄, corner excluded.
pub fn block_compose(g: &FiniteGroup, ds1: &DefiningSystem, ds2: &DefiningSystem, n: usize) -> Result<DefiningSystem> {
    let size = ds1.size;
    if ds2.size != size || ds1.module != ds2.module || ds1.order != ds2.order || n == 0 || n >= size {
        return Err(Error::BlockMismatch);
    }
    let mut entries = BTreeMap::new();
    for i in 0..size {
        for j in i + 1..size {
            let (Some(a), Some(b)) = (ds1.entry(i, j), ds2.entry(i, j)) else { continue };
            let in_b = i < n && j >= n;
            if in_b {
                entries.insert((i, j), a.add(b));
            } else if a != b {
                return Err(Error::BlockMismatch);
            } else {
                entries.insert((i, j), a.clone());
            }
        }
    }
    DefiningSystem::new(g, &ds1.module, size, entries)
}

/// The proper system of length n+m whose last column is ψ's shifted up
/// with m zeros below ψ₀, i.e. the one attached to xᵐ·Σψᵢxⁱ.
pub fn extend_proper(g: &FiniteGroup, ds: &DefiningSystem, m: usize) -> Result<DefiningSystem> {
    let Some(data) = ds.proper_data() else {
        return Err(Error::InvalidInput("extend_proper needs a proper defining system".into()));
    };
    if m == 0 {
        return Ok(ds.clone());
    }
    let zero = Cochain1::zero(ds.p(), ds.order, ds.module().dim());
    let psis: Vec<Cochain1> = std::iter::repeat_n(zero, m).chain(data.psis.iter().cloned()).collect();
    proper_system(g, ds.module(), &data.chi, &psis)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groupcoh::{bockstein_formula, cup_scalar, d1, d2, OmegaModule};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn z3sq() -> (FiniteGroup, FpModule) {
        let g = FiniteGroup::direct_product(&FiniteGroup::cyclic(3), &FiniteGroup::cyclic(3));
        let t = FpModule::trivial(&g, 3, 1);
        (g, t)
    }

    /// All cocycles Σψᵢxⁱ in Z¹(G, Ω/Iⁿ⊗T), split into their ψ's.
    fn all_psis(g: &FiniteGroup, t: &FpModule, chi: &CharacterChi, n: usize) -> Vec<Vec<Cochain1>> {
        let om = OmegaModule::new(g, t, chi, n).unwrap();
        let h = Cohomology::new(g, om.module(), Budget::default()).unwrap();
        let basis = h.z1_basis().unwrap().to_vec();
        let p = t.p();
        let total = (p as usize).pow(basis.len() as u32);
        (0..total)
            .map(|mut idx| {
                let mut f = Cochain1::zero(p, g.order(), om.module().dim());
                for b in &basis {
                    f = f.add(&b.scale((idx % p as usize) as u32));
                    idx /= p as usize;
                }
                (0..n).map(|i| om.coefficient(&f, i)).collect()
            })
            .collect()
    }

    #[test]
    fn binomial_staircase_entries() {
        let g = FiniteGroup::cyclic(9);
        let t = FpModule::trivial(&g, 3, 1);
        let chi = CharacterChi::new(&g, 3, 2, (0..9).collect()).unwrap();
        let psis = all_psis(&g, &t, &chi, 3).pop().unwrap();
        let ds = proper_system(&g, &t, &chi, &psis).unwrap();
        assert_eq!(ds.size(), 5);
        for x in 0..9u32 {
            let c2 = (x * (x.wrapping_sub(1)) / 2) % 3;
            assert_eq!(ds.entry(0, 2).unwrap().at(x as usize)[0], c2);
            assert_eq!(ds.entry(1, 3).unwrap().at(x as usize)[0], c2);
            assert_eq!(ds.entry(0, 1).unwrap().at(x as usize)[0], x % 3);
        }
        assert_eq!(ds.entry(3, 4).unwrap(), &psis[0]);
        assert_eq!(ds.entry(1, 4).unwrap(), &psis[2]);
        assert!(ds.entry(0, 4).is_none());
    }

    #[test]
    fn two_fold_is_the_cup_product() {
        let (g, t) = z3sq();
        let chi = CharacterChi::new(&g, 3, 1, (0..9).map(|x| x / 3).collect()).unwrap();
        let psi0 = Cochain1::scalar(3, (0..9).map(|x| x % 3));
        let ds = proper_system(&g, &t, &chi, std::slice::from_ref(&psi0)).unwrap();
        let r = massey_value(&g, &ds, Budget::default()).unwrap();
        assert_eq!(r.value, cup_scalar(&g, &binomial_chi(&chi, 1), &t, &psi0));
        assert!(!r.vanishes);
        assert!(lift_search(&g, &ds, Exec::Sequential).unwrap().is_none());
    }

    #[test]
    fn non_cocycle_staircase_is_rejected() {
        let (g, t) = z3sq();
        let chi = CharacterChi::new(&g, 3, 1, (0..9).map(|x| x / 3).collect()).unwrap();
        let bad = Cochain1::scalar(3, (0..9).map(|x| (x * x) % 3));
        assert_eq!(proper_system(&g, &t, &chi, &[bad]).unwrap_err(), Error::NotCocycleCompatible);
    }

    #[test]
    fn zero_psis_vanish() {
        let g = FiniteGroup::cyclic(9);
        let t = FpModule::trivial(&g, 3, 1);
        let chi = CharacterChi::new(&g, 3, 2, (0..9).collect()).unwrap();
        for n in 2..=3 {
            let zeros = vec![Cochain1::zero(3, 9, 1); n];
            let ds = proper_system(&g, &t, &chi, &zeros).unwrap();
            let r = massey_value(&g, &ds, Budget::default()).unwrap();
            assert!(r.value.is_zero() && r.vanishes);
        }
    }

    #[test]
    fn value_matches_bockstein_formula_and_witness() {
        let big = FiniteGroup::direct_product(&FiniteGroup::cyclic(2), &FiniteGroup::cyclic(9));
        let sign = FpModule::one_dim(&big, 3, |x| if x / 9 == 1 { -1 } else { 1 }).unwrap();
        let chi = CharacterChi::new(&big, 3, 2, (0..18).map(|x| (x % 9) as u64).collect()).unwrap();
        let z9 = FiniteGroup::cyclic(9);
        let triv = FpModule::trivial(&z9, 3, 1);
        let chi9 = CharacterChi::new(&z9, 3, 2, (0..9).collect()).unwrap();
        for (g, t, chi) in [(&big, &sign, &chi), (&z9, &triv, &chi9)] {
            for n in 1..=3 {
                for psis in all_psis(g, t, chi, n) {
                    let ds = proper_system(g, t, chi, &psis).unwrap();
                    let r = massey_value(g, &ds, Budget::default()).unwrap();
                    assert_eq!(r.value, bockstein_formula(g, t, chi, &psis).unwrap());
                    assert!(d2(g, t, &r.value).iter().all(|&x| x == 0));
                    if let Some(w) = &r.witness {
                        assert_eq!(d1(g, t, w), r.value.neg());
                    }
                }
            }
        }
    }

    #[test]
    fn vanishing_iff_lift_on_z9() {
        let g = FiniteGroup::cyclic(9);
        let t = FpModule::trivial(&g, 3, 1);
        for level in 1..=2 {
            let chi = CharacterChi::new(&g, 3, level, (0..9).collect()).unwrap();
            let mut seen = [0usize; 2];
            for psis in all_psis(&g, &t, &chi, 2) {
                let ds = proper_system(&g, &t, &chi, &psis).unwrap();
                let r = massey_value(&g, &ds, Budget::default()).unwrap();
                let lift = lift_search(&g, &ds, Exec::Sequential).unwrap();
                assert_eq!(r.vanishes, lift.is_some());
                seen[r.vanishes as usize] += 1;
                if let Some(l) = lift {
                    assert!(l.is_homomorphism(&g));
                    let mats = l.matrices().unwrap();
                    for a in 0..9 {
                        for b in 0..9 {
                            assert_eq!(mats[a].mul(&mats[b]), mats[g.mul(a, b)]);
                        }
                    }
                }
            }
            assert!(seen[1] > 0);
        }
    }

    #[test]
    fn extension_matches_shifted_column() {
        let g = FiniteGroup::cyclic(9);
        let t = FpModule::trivial(&g, 3, 1);
        let chi = CharacterChi::new(&g, 3, 2, (0..9).collect()).unwrap();
        let psis = all_psis(&g, &t, &chi, 2).pop().unwrap();
        let ds = proper_system(&g, &t, &chi, &psis).unwrap();
        assert_eq!(extend_proper(&g, &ds, 0).unwrap(), ds);
        let ext = extend_proper(&g, &ds, 1).unwrap();
        assert_eq!(ext.size(), 5);
        // Column 4 reads (absent, ψ₁, ψ₀, 0) from the top.
        assert_eq!(ext.entry(1, 4).unwrap(), &psis[1]);
        assert_eq!(ext.entry(2, 4).unwrap(), &psis[0]);
        assert!(ext.entry(3, 4).unwrap().is_zero());
        for i in 0..4 {
            for j in i + 1..4 {
                assert_eq!(ext.entry(i, j).unwrap(), &binomial_chi(&chi, (j - i) as u64));
            }
        }
    }

    #[test]
    fn compose_with_zero_block_and_merged_staircase() {
        let g = FiniteGroup::cyclic(9);
        let t = FpModule::trivial(&g, 3, 1);
        let chi = CharacterChi::new(&g, 3, 2, (0..9).collect()).unwrap();
        let all = all_psis(&g, &t, &chi, 3);
        let zero = proper_system(&g, &t, &chi, &vec![Cochain1::zero(3, 9, 1); 3]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        use rand::seq::SliceRandom;
        for _ in 0..10 {
            let a = all.choose(&mut rng).unwrap();
            let b = all.choose(&mut rng).unwrap();
            let ds = proper_system(&g, &t, &chi, a).unwrap();
            // B̄ = last column only.
            assert_eq!(block_compose(&g, &ds, &zero, 4).unwrap().entries_map(), ds.entries_map());
            // ρ_{1+2} extended by 2 steps, merged with a proper 3-step system.
            let short = proper_system(&g, &t, &chi, &a[..1]).unwrap();
            let ext = extend_proper(&g, &short, 2).unwrap();
            let other = proper_system(&g, &t, &chi, b).unwrap();
            let merged = block_compose(&g, &ext, &other, 4).unwrap();
            let sum: Vec<Cochain1> = (0..3).map(|i| if i == 2 { b[i].add(&a[0]) } else { b[i].clone() }).collect();
            assert_eq!(merged.entries_map(), proper_system(&g, &t, &chi, &sum).unwrap().entries_map());
        }
        let other_chi = CharacterChi::new(&g, 3, 2, (0..9).map(|x| 2 * x).collect()).unwrap();
        let mismatched = proper_system(&g, &t, &other_chi, &vec![Cochain1::zero(3, 9, 1); 3]).unwrap();
        assert_eq!(block_compose(&g, &zero, &mismatched, 4).unwrap_err(), Error::BlockMismatch);
    }

    #[test]
    fn lifted_image_has_the_order_of_mn() {
        use crate::massey::build_mn;
        for n in 1..=2 {
            let m = build_mn(3, n, Budget::default()).unwrap();
            let g = &m.group;
            let size = n + 2;
            let t = FpModule::trivial(g, 3, 1);
            let entry = |i: usize, j: usize| Cochain1::scalar(3, m.elements.iter().map(|x| x.get(i, j) as u64));
            let chi = CharacterChi::new(g, 3, 1, m.elements.iter().map(|x| x.get(0, 1) as u64).collect()).unwrap();
            let psis: Vec<Cochain1> = (0..n).map(|k| entry(size - 2 - k, size - 1)).collect();
            let ds = proper_system(g, &t, &chi, &psis).unwrap();
            assert!(massey_value(g, &ds, Budget::default()).unwrap().vanishes);
            let lift = lift_search(g, &ds, Exec::default()).unwrap().unwrap();
            let image: std::collections::HashSet<_> = lift.matrices().unwrap().into_iter().collect();
            assert_eq!(image.len(), 3usize.pow(n as u32 + 2));
        }
    }

    #[test]
    fn json_round_trip() {
        let big = FiniteGroup::direct_product(&FiniteGroup::cyclic(2), &FiniteGroup::cyclic(9));
        let sign = FpModule::one_dim(&big, 3, |x| if x / 9 == 1 { -1 } else { 1 }).unwrap();
        let chi = CharacterChi::new(&big, 3, 2, (0..18).map(|x| (x % 9) as u64).collect()).unwrap();
        let psis = all_psis(&big, &sign, &chi, 2).pop().unwrap();
        let ds = proper_system(&big, &sign, &chi, &psis).unwrap();
        let back = DefiningSystem::from_json(&big, &ds.to_json()).unwrap();
        assert_eq!(back.entries_map(), ds.entries_map());
        let broken = ds.to_json().replacen("\"values\":[0", "\"values\":[1", 1);
        assert!(DefiningSystem::from_json(&big, &broken).is_err());
    }
}
