//! Heisenberg doubles, the parameter condition for the coideal subalgebras and
//! the independence check for the generators B̄_J.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::bicharacter::{Ctx, Weight};
use crate::double::{Algebra, AlgebraError, Double, Elem, Gen, Kind};
use crate::freealg::{homogeneous_degree, substitute, FreeElement, Mono, Side, SubstError, Word};
use crate::linalg::Echelon;
use crate::nichols::{NicholsError, PreNicholsPresentation, Quotient, QuotientMode};
use crate::scalars::{CycNum, Scalar};

pub fn heis(quot: Arc<Quotient>) -> Algebra {
    Algebra::new(Kind::Heis, quot)
}

pub fn heis_vee(quot: Arc<Quotient>) -> Algebra {
    Algebra::new(Kind::HeisVee, quot)
}

/// F_i + c_i Ẽ_{τi} K_{τi} K_i⁻¹, which is B_i∨ in Heis(χ)∨ and B̄_i in Heis(χ).
pub fn b_tilde(alg: &Algebra, i: usize) -> Elem {
    let ctx = alg.ctx();
    let t = ctx.tau[i];
    let k = &ctx.alpha(t) - &ctx.alpha(i);
    let e = Elem::single(Mono::new(Word::letter(t), k, Word::empty()), ctx.c[i].clone());
    alg.gen(&Gen::F(i)).expect("degree-one generator").plus(&e)
}

/// π∨₀,₀: the Cartan part of an element in Ẽ·K·F normal form.
pub fn pi00_vee(x: &Elem) -> BTreeMap<Weight, Scalar> {
    x.iter().filter(|(m, _)| m.is_cartan()).map(|(m, c)| (m.k.clone(), c.clone())).collect()
}

/// Degree of a Heis(χ)∨ monomial: Ẽ_i, F_i and K_i⁻¹ have degree −α_i, and K_λ has degree λ.
pub fn vee_degree(m: &Mono, n: usize) -> Weight {
    &(&m.k - &m.l.weight(n)) - &m.r.weight(n)
}

/// κ: U(χ)^poly → Heis(χ), for an element given in E·K·F normal form.
/// The result lives in the Heisenberg double over the same quotient.
pub fn kappa(double: &Double, x: &Elem) -> Result<Elem, AlgebraError> {
    let ctx = double.ctx();
    let upoly = Algebra::new(Kind::UPoly, double.alg.quotient().clone());
    let y = upoly.convert_from(&double.alg, x)?;
    if let Some((m, _)) = y.iter().find(|(m, _)| !ctx.in_poly_cone(&m.k)) {
        return Err(AlgebraError::Precondition(format!("K-exponent {:?} is outside U(χ)^poly", m.k)));
    }
    Ok(y.filter(|m| ctx.in_lattice_theta(&m.k)))
}

#[derive(Clone, Debug, Serialize)]
pub struct Constraint {
    pub relation: usize,
    pub degree: Weight,
    /// Coefficient of K_{−λ} in π₀,₀∘P_{−λ}(p(B)), a polynomial in the parameters.
    pub constraint: Scalar,
    /// Whether the vanishing was decided by the degree criterion alone.
    pub by_degree: bool,
}

#[derive(Debug, thiserror::Error)]
pub enum ConditionError {
    #[error("relation {0} is not homogeneous")]
    NotHomogeneous(usize),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error("relation uses letter {0} but the rank is {1}")]
    Arity(usize, usize),
}

impl From<SubstError<AlgebraError>> for ConditionError {
    fn from(e: SubstError<AlgebraError>) -> Self {
        match e {
            SubstError::Arity(a, b) => ConditionError::Arity(a, b),
            SubstError::Target(t) => ConditionError::Algebra(t),
        }
    }
}

fn free_quotient(ctx: &Arc<Ctx>, h: usize) -> Arc<Quotient> {
    let bound = h.max(ctx.degree_bound);
    Arc::new(Quotient::with_bound(ctx.clone(), QuotientMode::Free, bound))
}

/// π∨₀,₀(p(B∨)) in the negative Heisenberg double over the free algebras.
/// Partial products that cannot contribute to the Cartan part are dropped:
/// terms with F-letters on the right, and terms with more Ẽ_i than the F_i the
/// remaining prefix can supply.
pub fn constraint_vee(ctx: &Arc<Ctx>, p: &FreeElement, lam: &Weight) -> Result<Scalar, ConditionError> {
    let n = ctx.n;
    let h = lam.height() as usize;
    let alg = heis_vee(free_quotient(ctx, h));
    let bs: Vec<Elem> = (0..n).map(|i| b_tilde(&alg, i)).collect();
    let mut memo: HashMap<Vec<u8>, Elem> = HashMap::new();
    memo.insert(Vec::new(), alg.one());
    let mut acc = ctx.sc_zero();
    let target = -lam;
    for (w, c) in p.iter() {
        if w.letters().any(|l| l >= n) {
            return Err(ConditionError::Arity(w.letters().max().unwrap() + 1, n));
        }
        let letters = &w.0;
        let mut start = letters.len();
        while !memo.contains_key(&letters[start..]) {
            start -= 1;
        }
        while start > 0 {
            let suffix = &letters[start - 1..];
            let mut avail: Vec<i32> = lam.0.clone();
            for &l in suffix {
                avail[l as usize] -= 1;
            }
            let cur = &memo[&letters[start..]];
            let prod = alg.mul(&bs[letters[start - 1] as usize], cur)?;
            let pruned = prod.filter(|m| m.r.is_empty() && (0..n).all(|i| m.l.count(i) as i32 <= avail[i]));
            start -= 1;
            memo.insert(letters[start..].to_vec(), pruned);
        }
        if let Some(x) = memo[&letters[..]].get(&Mono::cartan(target.clone())) {
            acc += &(c * x);
        }
    }
    Ok(acc)
}

/// π₀,₀∘P_{−λ}(p(B)) computed in U(χ) over the free algebras, returning the coefficient of K_{−λ}.
pub fn constraint_uchi(ctx: &Arc<Ctx>, p: &FreeElement, lam: &Weight) -> Result<Scalar, ConditionError> {
    let h = lam.height() as usize;
    let d = Double::new(free_quotient(ctx, h));
    let bs: Vec<Elem> = (0..ctx.n).map(|i| d.b_gen(i)).collect();
    let y = substitute(&d.alg, p, &bs)?;
    let z = d.pi00(&d.project_p(&-lam, &y));
    Ok(z.get(&Mono::cartan(-lam)).cloned().unwrap_or_else(|| ctx.sc_zero()))
}

/// The parameter condition: one constraint per relation. It holds iff every constraint vanishes.
pub fn condition_c(ctx: &Arc<Ctx>, pres: &PreNicholsPresentation) -> Result<Vec<Constraint>, ConditionError> {
    pres.relations
        .par_iter()
        .enumerate()
        .map(|(j, p)| {
            let lam = homogeneous_degree(p, ctx.n).ok_or(ConditionError::NotHomogeneous(j))?;
            if !ctx.in_symmetric_cone(&lam) {
                return Ok(Constraint { relation: j, degree: lam, constraint: ctx.sc_zero(), by_degree: true });
            }
            let c = constraint_vee(ctx, p, &lam)?;
            Ok(Constraint { relation: j, degree: lam, constraint: c, by_degree: false })
        })
        .collect()
}

pub fn condition_holds(constraints: &[Constraint]) -> bool {
    constraints.iter().all(|c| c.constraint.is_zero())
}

/// Checks that the B̄_J for quotient-basis words J of length ≤ d are linearly
/// independent over H_θ in Heis(χ). The parameters of the quotient's context
/// must be numeric. Each B̄_J is written as Σ K_λ·(Ẽ_x F_y) with λ ∈ ℤⁿ_θ, and
/// the K_λ are specialized to random rational points of the torus; full rank at
/// one point implies independence over H_θ.
pub fn heis_independence_check(quot: &Arc<Quotient>, d: usize, seed: u64) -> Result<bool, AlgebraError> {
    let ctx = quot.ctx().clone();
    let n = ctx.n;
    let alg = heis(quot.clone());
    let bs: Vec<Elem> = (0..n).map(|i| b_tilde(&alg, i)).collect();
    let mut words = Vec::new();
    for h in 0..=d {
        words.extend(quot.basis_of_height(Side::F, h)?);
    }
    let mut memo: HashMap<Vec<u8>, Elem> = HashMap::new();
    memo.insert(Vec::new(), alg.one());
    let mut elems = Vec::new();
    for w in &words {
        let l = &w.0;
        let mut start = l.len();
        while !memo.contains_key(&l[start..]) {
            start -= 1;
        }
        while start > 0 {
            let v = alg.mul(&bs[l[start - 1] as usize], &memo[&l[start..]])?;
            start -= 1;
            memo.insert(l[start..].to_vec(), v);
        }
        elems.push(memo[&l[..]].clone());
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let basis = ctx.theta_basis();
    for _attempt in 0..3 {
        let t: Vec<CycNum> = basis.iter().map(|_| CycNum::from_int(ctx.ord, rng.gen_range(2..50))).collect();
        let mut cols: BTreeMap<(Word, Word), usize> = BTreeMap::new();
        let mut rows: Vec<BTreeMap<usize, CycNum>> = Vec::new();
        for e in &elems {
            let mut row: BTreeMap<usize, CycNum> = BTreeMap::new();
            for (m, c) in e.iter() {
                let coords = ctx.theta_coords(&m.k).ok_or_else(|| AlgebraError::Precondition("K-exponent outside ℤⁿ_θ".into()))?;
                let mut v = c.as_constant().ok_or(AlgebraError::SymbolicParams)?;
                // Ẽ_x K_λ = χ(λ, deg x)⁻¹ K_λ Ẽ_x
                v = &v * &ctx.chi(&-&m.k, &m.l.weight(n));
                for (tk, &e) in t.iter().zip(&coords) {
                    v = &v * &tk.pow(e as i64);
                }
                let next = cols.len();
                let col = *cols.entry((m.l.clone(), m.r.clone())).or_insert(next);
                let slot = row.entry(col).or_insert_with(|| CycNum::zero(ctx.ord));
                *slot = &*slot + &v;
            }
            rows.push(row);
        }
        let mut ech = Echelon::new();
        let width = cols.len();
        let mut full = true;
        for r in &rows {
            let mut dense = vec![CycNum::zero(ctx.ord); width];
            for (k, v) in r {
                dense[*k] = v.clone();
            }
            if !ech.insert(&dense) {
                full = false;
                break;
            }
        }
        if full {
            return Ok(true);
        }
    }
    Ok(false)
}

/// Quotient-basis count used by the independence check, for reporting.
pub fn heis_independence_size(quot: &Quotient, d: usize) -> Result<usize, NicholsError> {
    let mut k = 0;
    for h in 0..=d {
        k += quot.basis_of_height(Side::F, h)?.len();
    }
    Ok(k)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::examples;

    #[test]
    fn cross_relations() {
        let ctx = Arc::new(examples::sl3(5, 4));
        let q = Arc::new(Quotient::new(ctx.clone(), QuotientMode::Nichols));
        let q11 = ctx.scalar(ctx.q(0, 0).clone());
        for (alg, extra) in [(heis(q.clone()), None), (heis_vee(q.clone()), Some(Weight(vec![-2, 0])))] {
            let et = alg.gen(&Gen::Et(0)).unwrap();
            let f = alg.gen(&Gen::F(0)).unwrap();
            let etf = alg.mul(&et, &f).unwrap();
            let fet = alg.mul(&f, &et).unwrap();
            // heis: Ẽ₁F₁ = q₁₁F₁Ẽ₁ + q₁₁; heis∨: Ẽ₁F₁ = q₁₁F₁Ẽ₁ − q₁₁K₁⁻²
            let rhs = match &extra {
                None => fet.scale(&q11).plus(&alg.one().scale(&q11)),
                Some(k) => fet.scale(&q11).minus(&alg.k(k).scale(&q11)),
            };
            assert_eq!(etf, rhs);
            let et1 = alg.gen(&Gen::Et(0)).unwrap();
            let f2 = alg.gen(&Gen::F(1)).unwrap();
            let q12 = ctx.scalar(ctx.q(0, 1).clone());
            assert_eq!(alg.mul(&et1, &f2).unwrap(), alg.mul(&f2, &et1).unwrap().scale(&q12));
        }
    }

    #[test]
    fn vee_grading_respected() {
        let ctx = Arc::new(examples::sl3(5, 5));
        let q = Arc::new(Quotient::new(ctx.clone(), QuotientMode::Nichols));
        let alg = heis_vee(q);
        let b0 = b_tilde(&alg, 0);
        let b1 = b_tilde(&alg, 1);
        let x = alg.mul_all(&[&b0, &b1, &b1, &b0]).unwrap();
        for (m, _) in x.iter() {
            assert_eq!(vee_degree(m, 2), Weight(vec![-2, -2]));
        }
    }

    #[test]
    fn pi00_vee_examples() {
        let ctx = Arc::new(examples::super_sl21(6));
        let q = Arc::new(Quotient::new(ctx.clone(), QuotientMode::Free));
        let alg = heis_vee(q);
        let k = Weight(vec![-1, -1]);
        assert_eq!(pi00_vee(&alg.k(&k)).get(&k), Some(&ctx.sc_one()));
        let fe = alg.mul(&alg.gen(&Gen::F(0)).unwrap(), &alg.gen(&Gen::Et(0)).unwrap()).unwrap();
        // F₁Ẽ₁ = q₁₁⁻¹Ẽ₁F₁ + K₁⁻² has Cartan part K₁⁻², while Ẽ₁F₁ has none
        let ef = alg.mul(&alg.gen(&Gen::Et(0)).unwrap(), &alg.gen(&Gen::F(0)).unwrap()).unwrap();
        assert!(pi00_vee(&ef).is_empty());
        assert_eq!(pi00_vee(&fe).len(), 1);
        let b = b_tilde(&alg, 1);
        let sq = alg.mul(&b, &b).unwrap();
        let p = pi00_vee(&sq);
        assert_eq!(p.len(), 1);
        assert_eq!(p.get(&Weight(vec![0, -2])), Some(&ctx.c[1]));
    }

    #[test]
    fn condition_examples() {
        let ctx = Arc::new(examples::sl3(5, 4));
        let cs = condition_c(&ctx, &examples::serre_relations(&ctx)).unwrap();
        assert!(condition_holds(&cs));
        assert!(cs.iter().all(|c| c.by_degree));
        let ctx = Arc::new(examples::rank2_commuting(5));
        let cs = condition_c(&ctx, &examples::commuting_relations(&ctx)).unwrap();
        assert_eq!(cs[0].constraint, &ctx.c[1] - &ctx.c[0]);
        let ctx = Arc::new(examples::small_sl3(4));
        let rel = examples::x12_power(&ctx, 2);
        let c = constraint_vee(&ctx, &rel, &Weight(vec![2, 2])).unwrap();
        assert_eq!(c, &ctx.c[1].pow(2) - &ctx.c[0].pow(2));
    }

    #[test]
    fn both_routes_agree_on_small_relations() {
        let ctx = Arc::new(examples::small_sl3(4));
        let rel = examples::x12_power(&ctx, 2);
        let lam = Weight(vec![2, 2]);
        assert_eq!(constraint_vee(&ctx, &rel, &lam).unwrap(), constraint_uchi(&ctx, &rel, &lam).unwrap());
        let ctx = Arc::new(examples::rank2_commuting(5));
        let rel = &examples::commuting_relations(&ctx).relations[0];
        let lam = Weight(vec![1, 1]);
        assert_eq!(constraint_vee(&ctx, rel, &lam).unwrap(), constraint_uchi(&ctx, rel, &lam).unwrap());
    }

    #[test]
    fn kappa_examples() {
        let ctx = Arc::new(examples::sl3(5, 4));
        let q = Arc::new(Quotient::new(ctx.clone(), QuotientMode::Nichols));
        let d = Double::new(q.clone());
        let h = heis(q);
        assert!(kappa(&d, &d.ki(0, -1)).unwrap().is_zero());
        assert!(matches!(kappa(&d, &d.ki(0, 1)), Err(AlgebraError::Precondition(_))));
        // κ(q₁₁⁻¹Ẽ₁F₁ − F₁Ẽ₁) = 1
        let et = d.mul(&d.e(0), &d.ki(0, -1)).unwrap();
        let q11inv = ctx.scalar(ctx.q(0, 0).inverse().unwrap());
        let x = d.mul(&et, &d.f(0)).unwrap().scale(&q11inv).minus(&d.mul(&d.f(0), &et).unwrap());
        assert_eq!(kappa(&d, &x).unwrap(), h.one());
        // κ(B_i) = B̄_i
        assert_eq!(kappa(&d, &d.b_gen(0)).unwrap(), b_tilde(&h, 0));
    }

    #[test]
    fn heis_independence_small() {
        let ctx = examples::sl3(5, 4).with_numeric_params(&[CycNum::from_int(5, 3), CycNum::from_int(5, -2)]).unwrap();
        let q = Arc::new(Quotient::new(Arc::new(ctx), QuotientMode::Nichols));
        assert!(heis_independence_check(&q, 0, 1).unwrap());
        assert!(heis_independence_check(&q, 2, 1).unwrap());
        let r1 = Ctx::from_exponents(7, &[vec![2]], vec![0], 4).unwrap().with_numeric_params(&[CycNum::from_int(7, 5)]).unwrap();
        let q1 = Arc::new(Quotient::new(Arc::new(r1), QuotientMode::Nichols));
        assert!(heis_independence_check(&q1, 3, 7).unwrap());
        assert_eq!(heis_independence_size(&q1, 3).unwrap(), 4);
    }

    fn sym(ctx: &Ctx, i: usize, k: u32) -> Scalar {
        ctx.c[i].pow(k)
    }

    #[test]
    fn small_sl3_constraints() {
        for (n, plus) in [(3, false), (4, false), (5, false), (6, true)] {
            let ctx = Arc::new(examples::small_sl3(n));
            let m = examples::small_m(n);
            let cs = condition_c(&ctx, &examples::small_sl3_relations(&ctx)).unwrap();
            let x12 = &cs[2];
            let expect = if plus { &sym(&ctx, 1, m) + &sym(&ctx, 0, m) } else { &sym(&ctx, 1, m) - &sym(&ctx, 0, m) };
            assert!(x12.constraint.proportional_to(&expect).is_some(), "N = {}: {}", n, x12.constraint);
            for c in cs.iter().filter(|c| c.relation != 2) {
                assert!(c.constraint.is_zero());
            }
        }
    }

    #[test]
    fn super_sl21_forces_odd_parameter_to_vanish() {
        let ctx = Arc::new(examples::super_sl21(6));
        let cs = condition_c(&ctx, &examples::super_relations(&ctx)).unwrap();
        assert!(cs[0].constraint.is_zero());
        assert_eq!(cs[1].constraint, ctx.c[1]);
    }

    #[test]
    fn ufo8_constraint() {
        // z = ζ₂₄, ζ = z²: z⁻¹(z⁴ + z² + 1)(c₁² + c₂²) − 2(1 + z²)c₁c₂
        let ctx = Arc::new(examples::ufo8());
        let cs = condition_c(&ctx, &examples::ufo8_relations(&ctx)).unwrap();
        assert!(cs[0].constraint.is_zero() && cs[0].by_degree);
        assert!(cs[1].constraint.is_zero() && cs[1].by_degree);
        let z = |k: i64| ctx.root(k);
        let a = &(&(&z(4) + &z(2)) + &z(0)) * &z(-1);
        let b = (&z(0) + &z(2)).scale_int(-2);
        let expect = &(&(&sym(&ctx, 0, 2) + &sym(&ctx, 1, 2)).scale(&a) + &(&ctx.c[0] * &ctx.c[1]).scale(&b));
        let u = cs[2].constraint.proportional_to(expect).expect("proportional");
        assert!(!u.is_zero());
        // the two routes agree on the degree-(2,2) relation
        let lam = Weight(vec![2, 2]);
        let p = &examples::ufo8_relations(&ctx).relations[2];
        assert_eq!(constraint_vee(&ctx, p, &lam).unwrap(), constraint_uchi(&ctx, p, &lam).unwrap());
    }

    #[test]
    fn routes_agree_on_random_relations() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..8 {
            let ctx = Arc::new(examples::random_rank2(&mut rng, 4));
            let a = rng.gen_range(0..=2);
            let b = rng.gen_range(0..=(4 - a).min(2));
            let lam = Weight(vec![a, b]);
            let p = examples::random_homogeneous(&ctx, &lam, &mut rng);
            assert_eq!(constraint_vee(&ctx, &p, &lam).unwrap(), constraint_uchi(&ctx, &p, &lam).unwrap());
        }
    }
}
