use crate::error::{Error, Result};
use crate::groupcoh::{Budget, FiniteGroup};

use super::unipotent::UnipotentMatrix;

/// Largest matrix size accepted by [`build_mn`].
pub const MAX_MATRIX_SIZE: usize = 12;

/// M_n realized inside U_{n+2}(F_p), generated by s and t₀.
#[derive(Debug, Clone)]
pub struct MnGroup {
    pub p: u32,
    pub n: usize,
    pub group: FiniteGroup,
    pub elements: Vec<UnipotentMatrix>,
    /// Element index of s.
    pub s: usize,
    /// Element indices of t₀, …, t_n, with t_{k+1} = [s, t_k].
    pub t: Vec<usize>,
}

/// s = I + E_{0,1} + … + E_{n−1,n} (no entry in the last column) and
/// t₀ = I + E_{n,n+1}, 0-based in size n+2.
pub fn mn_generators(p: u32, n: usize) -> (UnipotentMatrix, UnipotentMatrix) {
    let size = n + 2;
    let s_entries: Vec<(usize, usize, i64)> = (0..size - 2).map(|i| (i, i + 1, 1)).collect();
    let s = UnipotentMatrix::from_entries(p, size, &s_entries);
    let t0 = UnipotentMatrix::from_entries(p, size, &[(size - 2, size - 1, 1)]);
    (s, t0)
}

/// Close ⟨s, t₀⟩ ⊂ U_{n+2}(F_p). The closure is capped at p times the
/// expected order p^{n+2}, so a larger group is reported rather than
/// enumerated without bound.
pub fn build_mn(p: u32, n: usize, budget: Budget) -> Result<MnGroup> {
    if n == 0 {
        return Err(Error::InvalidInput("M_n needs n ≥ 1".into()));
    }
    if n + 2 > MAX_MATRIX_SIZE {
        return Err(Error::BudgetExceeded(format!("matrix size {} exceeds {MAX_MATRIX_SIZE}", n + 2)));
    }
    let expected = (p as u64).checked_pow(n as u32 + 2).unwrap_or(u64::MAX);
    if expected > budget.max_order as u64 {
        return Err(Error::BudgetExceeded(format!("|M_{n}| = {p}^{} exceeds {}", n + 2, budget.max_order)));
    }
    let (s, t0) = mn_generators(p, n);
    let identity = UnipotentMatrix::identity(p, n + 2);
    let cap = (expected * p as u64) as usize;
    let (group, elements) = FiniteGroup::from_closure(identity, &[s.clone(), t0.clone()], |a, b| a.mul(b), cap)?;
    let index = |m: &UnipotentMatrix| elements.iter().position(|x| x == m).expect("in the closure");
    let mut t = vec![index(&t0)];
    let mut tk = t0;
    for _ in 0..n {
        tk = UnipotentMatrix::commutator(&s, &tk);
        t.push(index(&tk));
    }
    Ok(MnGroup { p, n, s: index(&s), t, group, elements })
}

impl MnGroup {
    pub fn order(&self) -> usize {
        self.group.order()
    }

    /// s·x·s⁻¹·x⁻¹ in the group table.
    fn bracket(&self, a: usize, b: usize) -> usize {
        let g = &self.group;
        g.mul(g.mul(g.mul(a, b), g.inv(a)), g.inv(b))
    }

    /// Every presentation relation with whether it holds: s^p = t_i^p = 1,
    /// [t_i, t_j] = 1, [s, t_k] = t_{k+1}, [s, t_n] = 1.
    pub fn relation_table(&self) -> Vec<(String, bool)> {
        let g = &self.group;
        let p = self.p as u64;
        let e = g.identity();
        let mut table = vec![("s^p = 1".to_string(), g.pow(self.s, p) == e)];
        for (i, &ti) in self.t.iter().enumerate() {
            table.push((format!("t_{i}^p = 1"), g.pow(ti, p) == e));
            for (j, &tj) in self.t.iter().enumerate().skip(i + 1) {
                table.push((format!("[t_{i}, t_{j}] = 1"), g.commutator(ti, tj) == e));
            }
            let (name, want) = if i < self.n {
                (format!("[s, t_{i}] = t_{}", i + 1), self.t[i + 1])
            } else {
                (format!("[s, t_{i}] = 1"), e)
            };
            table.push((name, self.bracket(self.s, ti) == want));
        }
        table
    }

    /// Names of the relations that fail; empty when all hold.
    pub fn failed_relations(&self) -> Vec<String> {
        self.relation_table().into_iter().filter(|(_, ok)| !ok).map(|(name, _)| name).collect()
    }

    /// t_n central, and M_n/⟨t_n⟩ ≅ M_{n−1} via the lower-right projection:
    /// its kernel on M_n is exactly ⟨t_n⟩ and its image is M_{n−1}.
    pub fn tower_check(&self, budget: Budget) -> Result<bool> {
        let g = &self.group;
        let tn = self.t[self.n];
        if !(0..g.order()).all(|x| g.mul(x, tn) == g.mul(tn, x)) {
            return Ok(false);
        }
        if self.n == 1 {
            // M_0 = (Z/p)² is not faithful in U_2 (s = I there), so compare
            // with the presentation: the quotient is elementary abelian of order p².
            let kernel = g.closure(&[tn]);
            let p = self.p as u64;
            let inside = |x: usize| kernel.binary_search(&x).is_ok();
            let abelian = (0..g.order()).all(|a| (0..g.order()).all(|b| inside(g.commutator(a, b))));
            let exponent_p = (0..g.order()).all(|a| inside(g.pow(a, p)));
            return Ok(kernel.len() as u64 == p && (self.order() / kernel.len()) as u64 == p * p && abelian && exponent_p);
        }
        let smaller = build_mn(self.p, self.n - 1, budget)?;
        let identity = UnipotentMatrix::identity(self.p, self.n + 1);
        let mut kernel: Vec<usize> = Vec::new();
        let mut image = std::collections::HashSet::new();
        for (i, m) in self.elements.iter().enumerate() {
            let r = m.lower_right();
            if r == identity {
                kernel.push(i);
            }
            image.insert(r);
        }
        kernel.sort_unstable();
        let same_image = image.len() == smaller.order() && smaller.elements.iter().all(|m| image.contains(m));
        Ok(same_image && kernel == g.closure(&[tn]))
    }
}
