//! Invariant suites behind `demo` and `selftest`.

use std::f64::consts::TAU;

use lambda_core::cyclolayer::{
    a_product_identity, eta_element, group_ring_identity, synthetic_certificate, tamper, verify_certificate_against,
    K1Element, PeriodField,
};
use lambda_core::groupcoh::{
    bockstein_direct, bockstein_formula, d1, equivariance_check, Bockstein, Budget, CharacterChi, Cochain1,
    Cohomology, FiniteGroup, FpModule,
};
use lambda_core::massey::{build_mn, lift_search, massey_value, proper_system};
use lambda_core::par::Exec;
use lambda_core::quadfield::QuadElement;
use lambda_core::{Error, Result};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::report::{Check, SuiteReport, SCHEMA};

/// A group with a coefficient module and a surjective χ onto Z/p^l.
struct Setting {
    name: String,
    g: FiniteGroup,
    t: FpModule,
    chi: CharacterChi,
}

fn settings(p: u32) -> Result<Vec<Setting>> {
    let pp = p as usize * p as usize;
    let cyc = FiniteGroup::cyclic(pp);
    let cyc_t = FpModule::trivial(&cyc, p, 1);
    let cyc_chi = CharacterChi::from_generators(&cyc, p as u64, 2, &[1])?;

    let sq = FiniteGroup::direct_product(&FiniteGroup::cyclic(p as usize), &FiniteGroup::cyclic(p as usize));
    let sq_t = FpModule::trivial(&sq, p, 1);
    let sq_chi = CharacterChi::new(&sq, p as u64, 1, (0..pp).map(|x| (x / p as usize) as u64).collect())?;

    let tw = FiniteGroup::direct_product(&FiniteGroup::cyclic(2), &cyc);
    let tw_t = FpModule::one_dim(&tw, p, |x| if x / pp == 1 { -1 } else { 1 })?;
    let tw_chi = CharacterChi::new(&tw, p as u64, 2, (0..2 * pp).map(|x| (x % pp) as u64).collect())?;

    Ok(vec![
        Setting { name: format!("Z/{pp}"), g: cyc, t: cyc_t, chi: cyc_chi },
        Setting { name: format!("(Z/{p})^2"), g: sq, t: sq_t, chi: sq_chi },
        Setting { name: format!("Z/2 x Z/{pp} (sign twist)"), g: tw, t: tw_t, chi: tw_chi },
    ])
}

/// A random cocycle f ∈ Z¹(Ω/Iⁿ⊗T) and its coefficients ψ₀, …, ψ_{n−1}.
fn random_levels(s: &Setting, n: usize, rng: &mut ChaCha8Rng) -> Result<(Cochain1, Vec<Cochain1>)> {
    let b = Bockstein::new(&s.g, &s.t, &s.chi, Budget::default())?;
    let om = b.omega(n)?;
    let h = Cohomology::new(&s.g, om.module(), Budget::default())?;
    let f = h.random_cocycle1(rng)?;
    let psis = (0..n).map(|i| om.coefficient(&f, i)).collect();
    Ok((f, psis))
}

fn max_level(s: &Setting) -> usize {
    3.min(s.chi.modulus() as usize - 1)
}

/// Ψ⁽ⁿ⁾ by the connecting map against Σ C(χ,i) ∪ ψ_{n−i}, and exactness at the target.
pub fn bockstein(p: u32, trials: usize, seed: u64) -> Result<SuiteReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let all = settings(p)?;
    let mut agree = Check::new("direct = formula (as cochains)");
    let mut exact = Check::new("Ψ(f) = 0 iff f lifts one level");
    for k in 0..trials {
        let s = &all[k % all.len()];
        let n = rng.gen_range(1..=max_level(s));
        let b = Bockstein::new(&s.g, &s.t, &s.chi, Budget::default())?;
        let om = b.omega(n)?;
        let (f, psis) = random_levels(s, n, &mut rng)?;
        let direct = bockstein_direct(&s.g, &om, &f)?;
        let ok = direct == bockstein_formula(&s.g, &s.t, &s.chi, &psis)?;
        agree.record(ok);
        agree.trace.push(format!("{} n={n}: {}", s.name, if ok { "agree" } else { "DIFFER" }));
        if k % 5 == 0 {
            let vanishes = b.is_zero_class(&direct)?;
            let lifts = b.lifts_one_level(&om, &f)?;
            exact.record(vanishes == lifts);
            exact.trace.push(format!("{} n={n}: vanishes={vanishes} lifts={lifts}", s.name));
        }
    }
    Ok(SuiteReport { schema: SCHEMA, topic: "bockstein".into(), checks: vec![agree, exact] })
}

/// Massey values of proper defining systems against the Bockstein formula,
/// and vanishing against an exhaustive lift search.
pub fn massey(p: u32, trials: usize, seed: u64) -> Result<SuiteReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let all = settings(p)?;
    let mut bridge = Check::new("massey value = Bockstein formula");
    let mut witness = Check::new("witness w has d(w) = -value");
    let mut lifting = Check::new("vanishes iff a lift exists");
    for k in 0..trials {
        let s = &all[k % all.len()];
        let n = rng.gen_range(1..=max_level(s));
        let (_, psis) = random_levels(s, n, &mut rng)?;
        let ds = proper_system(&s.g, &s.t, &s.chi, &psis)?;
        let r = massey_value(&s.g, &ds, Budget::default())?;
        bridge.record(r.value == bockstein_formula(&s.g, &s.t, &s.chi, &psis)?);
        if let Some(w) = &r.witness {
            witness.record(d1(&s.g, &s.t, w) == r.value.neg());
        }
        let lift = lift_search(&s.g, &ds, Exec::default())?;
        let ok = lift.as_ref().is_some_and(|l| l.is_homomorphism(&s.g)) == r.vanishes;
        lifting.record(ok);
        lifting.trace.push(format!("{} {}-fold: vanishes={} lift={}", s.name, n + 1, r.vanishes, lift.is_some()));
    }
    Ok(SuiteReport { schema: SCHEMA, topic: "massey".into(), checks: vec![bridge, witness, lifting] })
}

/// Order, presentation relations and the tower quotient of M_n ⊂ U_{n+2}(F_p).
pub fn mn(p: u32, n: usize) -> Result<SuiteReport> {
    let budget = Budget { max_order: 1 << 16, ..Budget::default() };
    let m = build_mn(p, n, budget)?;
    let expected = (p as u64).pow(n as u32 + 2);
    let mut order = Check::new(format!("|M_{n}| = {p}^{}", n + 2));
    order.record(m.order() as u64 == expected);
    order.trace.push(format!("order {} (expected {expected})", m.order()));
    let mut rels = Check::new("presentation relations");
    for (name, ok) in m.relation_table() {
        rels.record(ok);
        rels.trace.push(format!("{name:<18} {}", if ok { "holds" } else { "FAILS" }));
    }
    let mut tower = Check::new(format!("t_{n} central and M_{n}/<t_{n}> = M_{}", n - 1));
    let tower_ok = m.tower_check(budget)?;
    tower.record(tower_ok);
    Ok(SuiteReport { schema: SCHEMA, topic: "mn".into(), checks: vec![order, rels, tower] })
}

/// Ψ⁽ⁿ⁾ commutes with Δ = Z/2 on Z/2 × Z/p², for n ∈ {1, 2}.
pub fn equivariance(p: u32) -> Result<SuiteReport> {
    let pp = p as usize * p as usize;
    let big = FiniteGroup::direct_product(&FiniteGroup::cyclic(2), &FiniteGroup::cyclic(pp));
    let g: Vec<usize> = (0..pp).collect();
    let n_sub: Vec<usize> = (0..pp).filter(|x| x % p as usize == 0).collect();
    let sign = FpModule::one_dim(&big, p, |x| if x / pp == 1 { -1 } else { 1 })?;
    let triv = FpModule::trivial(&big, p, 1);
    let mut check = Check::new("Ψ(τf) = τΨ(f) for every Δ-lift τ");
    for (label, t) in [("sign", &sign), ("trivial", &triv)] {
        for level in 1..=2 {
            let ok = equivariance_check(&big, &g, &n_sub, t, level, Budget::default())?;
            check.record(ok);
            check.trace.push(format!("T = {label}, n = {level}: {}", if ok { "equivariant" } else { "NOT equivariant" }));
        }
    }
    Ok(SuiteReport { schema: SCHEMA, topic: "equivariance".into(), checks: vec![check] })
}

/// Period field Q₁: construction checks, the norm of η₁ and the A_n identities.
pub fn periods(p: u64, seed: u64) -> Result<SuiteReport> {
    let f = PeriodField::get(p)?;
    let d = small_split_disc(p);
    let mut build = Check::new("period field");
    build.trace.push(format!("g = {}, index of Z[η₀] = {}", f.primitive_root(), f.index()));
    build.trace.push(format!("min poly of η₀ (ascending): {:?}", f.min_poly().iter().map(|c| c.to_string()).collect::<Vec<_>>()));

    // σ^p = 1 on the basis.
    let n = f.degree();
    let mut sigma_ok = true;
    for i in 0..n {
        let mut coords = vec![0i64; n];
        coords[i] = 1;
        let b = K1Element::from_ints(&f, d, &coords.iter().map(|&c| c.into()).collect::<Vec<_>>())?;
        sigma_ok &= b.sigma_pow(p) == b;
    }
    build.record(sigma_ok);

    // The periods sum to 0 (floating point, independent of the exact tables).
    let m = p * p;
    let g = f.primitive_root();
    let gp = pow_mod(g, p, m);
    let sum: f64 = (0..p)
        .map(|k| (0..p - 1).map(|j| (TAU * (pow_mod(g, k, m) * pow_mod(gp, j, m) % m) as f64 / m as f64).cos()).sum::<f64>())
        .sum();
    build.record(sum.abs() < 1e-9);
    build.trace.push(format!("Σ η_i = {sum:.2e}"));

    let mut norm = Check::new("N(η₁) = p");
    let eta_norm = eta_element(&f, d).relative_norm()?;
    norm.record(eta_norm == QuadElement::from_int(d, p));
    norm.trace.push(format!("N_{{K₁/K}}(η₁) = {eta_norm}"));

    let mut ring = Check::new("group-ring identity, 1 ≤ n < p");
    for k in 1..p as usize {
        ring.record(group_ring_identity(p, k)?);
    }

    let mut lemma = Check::new("A_n identities on random β");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..10 {
        let beta = K1Element::random(&f, d, 2, &mut rng);
        if beta.is_zero() {
            continue;
        }
        for k in 1..(p as usize).min(4) {
            lemma.record(a_product_identity(&beta, k)?);
        }
    }
    Ok(SuiteReport { schema: SCHEMA, topic: "periods".into(), checks: vec![build, norm, ring, lemma] })
}

/// Synthetic certificates accept and tampered ones fail with a norm mismatch.
pub fn certificates(p: u64, trials: usize, seed: u64) -> Result<SuiteReport> {
    let d = small_split_disc(p);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut accept = Check::new("synthetic certificates accept");
    let mut reject = Check::new("tampered certificates give NORM_MISMATCH");
    for _ in 0..trials {
        let exps: Vec<u64> = (0..p).map(|_| rng.gen_range(0..3)).collect();
        let c = QuadElement::new(d, rng.gen_range(1..4).into(), rng.gen_range(-2..3).into(), 1)?;
        let cert = synthetic_certificate(d, p, &c, &exps)?;
        let alpha = cert.beta.relative_norm()?;
        accept.record(verify_certificate_against(&cert, &alpha, 6).is_ok_and(|r| r.norm_unit.is_one()));
        reject.record(verify_certificate_against(&tamper(&cert), &alpha, 6) == Err(Error::NormMismatch));
    }
    Ok(SuiteReport { schema: SCHEMA, topic: "certificates".into(), checks: vec![accept, reject] })
}

/// A discriminant in which p splits, for tests that only need some K.
pub fn small_split_disc(p: u64) -> i64 {
    (3..)
        .map(|k: i64| -k)
        .find(|&d| lambda_core::quadfield::is_fundamental(d) && lambda_core::quadfield::split_type(d, p) == lambda_core::quadfield::SplitType::Split)
        .expect("split discriminants exist")
}

fn pow_mod(b: u64, e: u64, m: u64) -> u64 {
    (0..e).fold(1 % m, |acc, _| acc * b % m)
}
