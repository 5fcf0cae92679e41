use std::collections::{HashMap, VecDeque};
use std::hash::Hash;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

/// A finite group given by its full multiplication table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteGroup {
    order: usize,
    mult: Vec<u32>,
    inv: Vec<u32>,
    identity: usize,
    generators: Vec<usize>,
    labels: Vec<String>,
}

impl FiniteGroup {
    /// Validate a table: closure, identity, inverses, associativity (exhaustive
    /// up to order 100, 1000 random triples beyond) and generation.
    pub fn new(mult: Vec<Vec<usize>>, generators: Vec<usize>, labels: Option<Vec<String>>) -> Result<Self> {
        let n = mult.len();
        let bad = |m: &str| Error::InvalidInput(format!("group table: {m}"));
        if n == 0 {
            return Err(bad("empty"));
        }
        if mult.iter().any(|r| r.len() != n || r.iter().any(|&x| x >= n)) {
            return Err(bad("not an n×n table over 0..n"));
        }
        let flat: Vec<u32> = mult.iter().flatten().map(|&x| x as u32).collect();
        let at = |a: usize, b: usize| flat[a * n + b] as usize;
        let identity = (0..n)
            .find(|&e| (0..n).all(|x| at(e, x) == x && at(x, e) == x))
            .ok_or_else(|| bad("no identity"))?;
        let mut inv = vec![0u32; n];
        for a in 0..n {
            let b = (0..n).find(|&b| at(a, b) == identity).ok_or_else(|| bad("missing inverse"))?;
            if at(b, a) != identity {
                return Err(bad("one-sided inverse"));
            }
            inv[a] = b as u32;
        }
        let assoc = |a: usize, b: usize, c: usize| at(at(a, b), c) == at(a, at(b, c));
        if n <= 100 {
            for a in 0..n {
                for b in 0..n {
                    for c in 0..n {
                        if !assoc(a, b, c) {
                            return Err(bad("not associative"));
                        }
                    }
                }
            }
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
            for _ in 0..1000 {
                let (a, b, c) = (rng.gen_range(0..n), rng.gen_range(0..n), rng.gen_range(0..n));
                if !assoc(a, b, c) {
                    return Err(bad("not associative"));
                }
            }
        }
        if generators.iter().any(|&g| g >= n) {
            return Err(bad("generator out of range"));
        }
        let labels = labels.unwrap_or_else(|| (0..n).map(|i| i.to_string()).collect());
        if labels.len() != n {
            return Err(bad("label count"));
        }
        let g = FiniteGroup { order: n, mult: flat, inv, identity, generators, labels };
        if g.closure(&g.generators).len() != n {
            return Err(bad("generators do not generate"));
        }
        Ok(g)
    }

    /// The group generated by `gens` under `op`, elements indexed in BFS order
    /// (identity first). Returns the group and the element list.
    pub fn from_closure<T, F>(identity: T, gens: &[T], op: F, cap: usize) -> Result<(Self, Vec<T>)>
    where
        T: Clone + Eq + Hash,
        F: Fn(&T, &T) -> T,
    {
        let mut elems = vec![identity.clone()];
        let mut index: HashMap<T, usize> = HashMap::from([(identity, 0)]);
        let mut queue = VecDeque::from([0usize]);
        while let Some(i) = queue.pop_front() {
            for s in gens {
                let x = op(&elems[i], s);
                if !index.contains_key(&x) {
                    if elems.len() >= cap {
                        return Err(Error::BudgetExceeded(format!("closure exceeds {cap} elements")));
                    }
                    index.insert(x.clone(), elems.len());
                    queue.push_back(elems.len());
                    elems.push(x);
                }
            }
        }
        let n = elems.len();
        let mut mult = vec![vec![0usize; n]; n];
        for a in 0..n {
            for b in 0..n {
                mult[a][b] = index[&op(&elems[a], &elems[b])];
            }
        }
        let gen_idx = gens.iter().map(|s| index[s]).collect();
        Ok((FiniteGroup::new(mult, gen_idx, None)?, elems))
    }

    pub fn cyclic(n: usize) -> Self {
        let mult = (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect();
        let gens = if n > 1 { vec![1] } else { vec![0] };
        FiniteGroup::new(mult, gens, None).expect("cyclic group")
    }

    /// G × H with elements (g, h) ↦ g·|H| + h.
    pub fn direct_product(g: &FiniteGroup, h: &FiniteGroup) -> Self {
        let (m, k) = (g.order, h.order);
        let n = m * k;
        let mult = (0..n)
            .map(|x| {
                (0..n)
                    .map(|y| g.mul(x / k, y / k) * k + h.mul(x % k, y % k))
                    .collect()
            })
            .collect();
        let mut gens: Vec<usize> = g.generators.iter().map(|&a| a * k + h.identity).collect();
        gens.extend(h.generators.iter().map(|&b| g.identity * k + b));
        let labels = (0..n).map(|x| format!("({},{})", g.labels[x / k], h.labels[x % k])).collect();
        FiniteGroup::new(mult, gens, Some(labels)).expect("direct product")
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn generators(&self) -> &[usize] {
        &self.generators
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mult[a * self.order + b] as usize
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.inv[a] as usize
    }

    pub fn pow(&self, a: usize, k: u64) -> usize {
        (0..k).fold(self.identity, |acc, _| self.mul(acc, a))
    }

    pub fn element_order(&self, a: usize) -> usize {
        let mut x = a;
        let mut k = 1;
        while x != self.identity {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }

    /// a⁻¹ b⁻¹ a b.
    pub fn commutator(&self, a: usize, b: usize) -> usize {
        self.mul(self.mul(self.inv(a), self.inv(b)), self.mul(a, b))
    }

    /// Conjugate τ⁻¹ g τ.
    pub fn conj(&self, tau: usize, g: usize) -> usize {
        self.mul(self.mul(self.inv(tau), g), tau)
    }

    /// Subgroup generated by `gens`, sorted.
    pub fn closure(&self, gens: &[usize]) -> Vec<usize> {
        let mut seen = vec![false; self.order];
        seen[self.identity] = true;
        let mut out = vec![self.identity];
        let mut i = 0;
        while i < out.len() {
            let x = out[i];
            for &s in gens {
                let y = self.mul(x, s);
                if !seen[y] {
                    seen[y] = true;
                    out.push(y);
                }
            }
            i += 1;
        }
        out.sort_unstable();
        out
    }

    pub fn is_subgroup(&self, sub: &[usize]) -> bool {
        let mut inside = vec![false; self.order];
        for &x in sub {
            inside[x] = true;
        }
        inside[self.identity] && sub.iter().all(|&a| sub.iter().all(|&b| inside[self.mul(a, self.inv(b))]))
    }

    pub fn is_normal(&self, sub: &[usize]) -> bool {
        let mut inside = vec![false; self.order];
        for &x in sub {
            inside[x] = true;
        }
        self.is_subgroup(sub) && (0..self.order).all(|g| sub.iter().all(|&h| inside[self.conj(g, h)]))
    }

    pub fn is_abelian(&self) -> bool {
        (0..self.order).all(|a| (0..a).all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    /// Right cosets U·σ as a representative list and an element → coset map.
    pub fn right_cosets(&self, sub: &[usize]) -> (Vec<usize>, Vec<usize>) {
        let mut coset_of = vec![usize::MAX; self.order];
        let mut reps = Vec::new();
        for g in 0..self.order {
            if coset_of[g] != usize::MAX {
                continue;
            }
            let c = reps.len();
            reps.push(g);
            for &u in sub {
                coset_of[self.mul(u, g)] = c;
            }
        }
        (reps, coset_of)
    }

    /// The subgroup `sub` as a group in its own right, with the embedding.
    pub fn subgroup(&self, sub: &[usize]) -> Result<(FiniteGroup, Vec<usize>)> {
        if !self.is_subgroup(sub) {
            return Err(Error::InvalidInput("not a subgroup".into()));
        }
        let mut elems = sub.to_vec();
        elems.sort_unstable();
        elems.dedup();
        let mut pos = vec![usize::MAX; self.order];
        for (i, &x) in elems.iter().enumerate() {
            pos[x] = i;
        }
        let mult = elems
            .iter()
            .map(|&a| elems.iter().map(|&b| pos[self.mul(a, b)]).collect())
            .collect();
        let gens = minimal_generators(self, &elems).iter().map(|&x| pos[x]).collect();
        let labels = elems.iter().map(|&x| self.labels[x].clone()).collect();
        Ok((FiniteGroup::new(mult, gens, Some(labels))?, elems))
    }

    /// Commutator subgroup [G, G].
    pub fn derived_subgroup(&self) -> Vec<usize> {
        let comms: Vec<usize> =
            (0..self.order).flat_map(|a| (0..self.order).map(move |b| (a, b))).map(|(a, b)| self.commutator(a, b)).collect();
        self.closure(&comms)
    }

    /// For each element, a word in the generators (indices into `generators()`)
    /// whose left-to-right product is the element.
    pub fn words(&self) -> Vec<Vec<usize>> {
        let mut words: Vec<Option<Vec<usize>>> = vec![None; self.order];
        words[self.identity] = Some(Vec::new());
        let mut queue = VecDeque::from([self.identity]);
        while let Some(x) = queue.pop_front() {
            for (k, &s) in self.generators.iter().enumerate() {
                let y = self.mul(x, s);
                if words[y].is_none() {
                    let mut w = words[x].clone().expect("visited");
                    w.push(k);
                    words[y] = Some(w);
                    queue.push_back(y);
                }
            }
        }
        words.into_iter().map(|w| w.expect("generated")).collect()
    }
}

/// A small generating set of the subgroup `elems`, chosen greedily.
fn minimal_generators(g: &FiniteGroup, elems: &[usize]) -> Vec<usize> {
    let mut gens = Vec::new();
    let mut span = g.closure(&gens);
    for &x in elems {
        if span.binary_search(&x).is_err() {
            gens.push(x);
            span = g.closure(&gens);
        }
    }
    if gens.is_empty() {
        gens.push(g.identity());
    }
    gens
}
