//! Ready-made contexts and defining relations: quantum groups of type A2 at
//! generic and root-of-unity parameters, a commuting rank-two case, sl(2|1),
//! and the distinguished pre-Nichols algebra of type ufo(8).
//!
//! All contexts carry symbolic parameters c_1, …, c_n.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::bicharacter::{Ctx, Weight};
use crate::freealg::{free_mul, homogeneous_degree, FreeElement, Word};
use crate::nichols::PreNicholsPresentation;
use crate::scalars::CycNum;

/// [x, y]_c = xy − χ(deg x, deg y) yx for homogeneous x, y.
pub fn braided_commutator(ctx: &Ctx, x: &FreeElement, y: &FreeElement) -> FreeElement {
    let dx = homogeneous_degree(x, ctx.n).expect("homogeneous");
    let dy = homogeneous_degree(y, ctx.n).expect("homogeneous");
    let c = ctx.scalar(ctx.chi(&dx, &dy));
    free_mul(x, y).minus(&free_mul(y, x).scale(&c))
}

pub fn letter(ctx: &Ctx, i: usize) -> FreeElement {
    FreeElement::single(Word::letter(i), ctx.sc_one())
}

pub fn power(ctx: &Ctx, x: &FreeElement, k: usize) -> FreeElement {
    let mut acc = FreeElement::single(Word::empty(), ctx.sc_one());
    for _ in 0..k {
        acc = free_mul(&acc, x);
    }
    acc
}

fn flip() -> Vec<usize> {
    vec![1, 0]
}

/// Type A2 with q_ii = ζ², q_12 = ζ⁻¹ for ζ a primitive N-th root of unity, τ the flip.
pub fn sl3(ord: u32, d: usize) -> Ctx {
    Ctx::from_exponents(ord, &[vec![2, -1], vec![-1, 2]], flip(), d).expect("valid A2 data")
}

/// Type A1 × A1 (a_12 = 0) with q_ii = ζ², τ the flip.
pub fn rank2_commuting(ord: u32) -> Ctx {
    Ctx::from_exponents(ord, &[vec![2, 0], vec![0, 2]], flip(), 4).expect("valid data")
}

/// The small quantum group data: A2 at a primitive N-th root of unity, degree bound 2M.
pub fn small_sl3(n: u32) -> Ctx {
    let m = small_m(n);
    sl3(n, (2 * m as usize).max(4))
}

/// M = N / gcd(N, 2).
pub fn small_m(n: u32) -> u32 {
    if n.is_multiple_of(2) {
        n / 2
    } else {
        n
    }
}

/// Rank one, q = ζ², τ = id.
pub fn rank1(ord: u32, d: usize) -> Ctx {
    Ctx::from_exponents(ord, &[vec![2]], vec![0], d).expect("valid data")
}

/// sl(2|1) with vertex 1 even and vertex 2 odd: q_11 = ζ², q_12 = ζ⁻¹, q_22 = −1, τ = id.
/// The order must be even.
pub fn super_sl21(ord: u32) -> Ctx {
    assert!(ord.is_multiple_of(2), "−1 must be a power of ζ");
    let half = ord as i64 / 2;
    Ctx::from_exponents(ord, &[vec![2, -1], vec![-1, half]], vec![0, 1], 4).expect("valid data")
}

/// ufo(8): ζ₂₄ = ζ^{1/2}, q_11 = q_22 = −ζ², q_12 = ζ^{1/2}, τ the flip.
pub fn ufo8() -> Ctx {
    Ctx::from_exponents(24, &[vec![16, 1], vec![1, 16]], flip(), 4).expect("valid data")
}

/// The quantum Serre relations [x_i, [x_i, x_j]_c]_c for i ≠ j in rank two.
pub fn serre_relations(ctx: &Ctx) -> PreNicholsPresentation {
    let x1 = letter(ctx, 0);
    let x2 = letter(ctx, 1);
    let r12 = braided_commutator(ctx, &x1, &braided_commutator(ctx, &x1, &x2));
    let r21 = braided_commutator(ctx, &x2, &braided_commutator(ctx, &x2, &x1));
    PreNicholsPresentation::new(2, vec![r12, r21]).expect("homogeneous")
}

/// The relations [x_1, x_2]_c and [x_2, x_1]_c of the commuting case.
pub fn commuting_relations(ctx: &Ctx) -> PreNicholsPresentation {
    let x1 = letter(ctx, 0);
    let x2 = letter(ctx, 1);
    PreNicholsPresentation::new(2, vec![braided_commutator(ctx, &x1, &x2), braided_commutator(ctx, &x2, &x1)])
        .expect("homogeneous")
}

/// x_12^M with x_12 = x_1x_2 − q_12 x_2x_1.
pub fn x12_power(ctx: &Ctx, m: usize) -> FreeElement {
    let x12 = braided_commutator(ctx, &letter(ctx, 0), &letter(ctx, 1));
    power(ctx, &x12, m)
}

/// Defining relations of the A2 Nichols algebra at a primitive N-th root of unity.
pub fn small_sl3_relations(ctx: &Ctx) -> PreNicholsPresentation {
    let m = small_m(ctx.ord) as usize;
    let x1 = letter(ctx, 0);
    let x2 = letter(ctx, 1);
    let serre = serre_relations(ctx);
    let mut rels = vec![power(ctx, &x1, m), power(ctx, &x2, m), x12_power(ctx, m)];
    rels.extend(serre.relations);
    PreNicholsPresentation::new(2, rels).expect("homogeneous")
}

/// sl(2|1): [x_1, [x_1, x_2]_c]_c = 0 and x_2² = 0.
pub fn super_relations(ctx: &Ctx) -> PreNicholsPresentation {
    let x1 = letter(ctx, 0);
    let x2 = letter(ctx, 1);
    let r = braided_commutator(ctx, &x1, &braided_commutator(ctx, &x1, &x2));
    PreNicholsPresentation::new(2, vec![r, power(ctx, &x2, 2)]).expect("homogeneous")
}

/// ufo(8): x_1³, x_2³ and the expanded degree-(2,2) relation
/// (x1²x2² + x2²x1²) + a(x1x2x1x2 + x2x1x2x1) + b(x1x2²x1 + x2x1²x2)
/// with a = (1 + ζ⁻¹)ζ^{1/2}, b = −(1 + ζ⁻¹ + ζ⁻²)ζ.
pub fn ufo8_relations(ctx: &Ctx) -> PreNicholsPresentation {
    let x1 = letter(ctx, 0);
    let x2 = letter(ctx, 1);
    PreNicholsPresentation::new(2, vec![power(ctx, &x1, 3), power(ctx, &x2, 3), ufo8_p(ctx)]).expect("homogeneous")
}

pub fn ufo8_p(ctx: &Ctx) -> FreeElement {
    let z = |k: i64| ctx.root(k);
    let a = ctx.scalar(&(&z(0) + &z(-2)) * &z(1));
    let b = ctx.scalar(-(&(&(&z(0) + &z(-2)) + &z(-4)) * &z(2)));
    let w = |l: &[usize]| Word::from_letters(l);
    let mut p = FreeElement::zero();
    p.add_term(w(&[0, 0, 1, 1]), ctx.sc_one());
    p.add_term(w(&[1, 1, 0, 0]), ctx.sc_one());
    p.add_term(w(&[0, 1, 0, 1]), a.clone());
    p.add_term(w(&[1, 0, 1, 0]), a);
    p.add_term(w(&[0, 1, 1, 0]), b.clone());
    p.add_term(w(&[1, 0, 0, 1]), b);
    p
}

/// A rank-two context with random exponents, order among 5, 7, 8, 12, and τ either id or the flip.
pub fn random_rank2(rng: &mut impl Rng, d: usize) -> Ctx {
    let ord = *[5u32, 7, 8, 12].choose(rng).unwrap();
    let r = |rng: &mut dyn rand::RngCore| rng.gen_range(1..ord as i64);
    let flip_tau = rng.gen_bool(0.5);
    let a = r(rng);
    let b = r(rng);
    let c = if flip_tau { a } else { r(rng) };
    let tau = if flip_tau { flip() } else { vec![0, 1] };
    Ctx::from_exponents(ord, &[vec![a, b], vec![b, c]], tau, d).expect("valid data")
}

/// A random homogeneous element of degree λ: every word of that degree with a
/// small random integer coefficient (some of them zero).
pub fn random_homogeneous(ctx: &Ctx, lam: &Weight, rng: &mut impl Rng) -> FreeElement {
    let mut out = FreeElement::zero();
    let mut letters = Vec::new();
    for (i, &k) in lam.0.iter().enumerate() {
        letters.extend(std::iter::repeat_n(i, k as usize));
    }
    for w in distinct_permutations(&letters) {
        let v = rng.gen_range(-3i64..=3);
        out.add_term(Word::from_letters(&w), ctx.scalar(CycNum::from_int(ctx.ord, v)));
    }
    out
}

fn distinct_permutations(letters: &[usize]) -> Vec<Vec<usize>> {
    if letters.is_empty() {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    let mut seen = Vec::new();
    for (i, &l) in letters.iter().enumerate() {
        if seen.contains(&l) {
            continue;
        }
        seen.push(l);
        let mut rest = letters.to_vec();
        rest.remove(i);
        for mut tail in distinct_permutations(&rest) {
            tail.insert(0, l);
            out.push(tail);
        }
    }
    out
}

/// The named examples available from the command line.
pub fn named(name: &str) -> Option<(Ctx, PreNicholsPresentation)> {
    let (ctx, rels): (Ctx, fn(&Ctx) -> PreNicholsPresentation) = match name {
        "sl3" => (sl3(5, 4), serre_relations),
        "commuting" => (rank2_commuting(5), commuting_relations),
        "small-sl3-3" => (small_sl3(3), small_sl3_relations),
        "small-sl3-4" => (small_sl3(4), small_sl3_relations),
        "small-sl3-5" => (small_sl3(5), small_sl3_relations),
        "small-sl3-6" => (small_sl3(6), small_sl3_relations),
        "sl21" => (super_sl21(6), super_relations),
        "ufo8" => (ufo8(), ufo8_relations),
        _ => return None,
    };
    let r = rels(&ctx);
    Some((ctx, r))
}

pub const NAMES: &[&str] = &["sl3", "commuting", "small-sl3-3", "small-sl3-4", "small-sl3-5", "small-sl3-6", "sl21", "ufo8"];

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn serre_matches_binomial_form() {
        // x²y − (ζ + ζ⁻¹) xyx + yx²
        let ctx = sl3(5, 4);
        let r = &serre_relations(&ctx).relations[0];
        assert_eq!(r.len(), 3);
        let mid = r.get(&Word::from_letters(&[0, 1, 0])).unwrap();
        assert_eq!(*mid, -ctx.scalar(&ctx.root(1) + &ctx.root(-1)));
        assert!(r.get(&Word::from_letters(&[1, 0, 0])).unwrap().is_one());
    }

    #[test]
    fn ufo8_relation_is_the_commutator_form() {
        // [x1, x_{α1+2α2}]_c + (1 + ζ⁻¹ + ζ⁻²)ζ^{1/2} x12², with ζ = z², ζ^{1/2} = z
        let ctx = ufo8();
        let x1 = letter(&ctx, 0);
        let x2 = letter(&ctx, 1);
        let x12 = braided_commutator(&ctx, &x1, &x2);
        let x122 = braided_commutator(&ctx, &x12, &x2);
        let z = |k: i64| ctx.root(k);
        let coef = ctx.scalar(&(&(&z(0) + &z(-2)) + &z(-4)) * &z(1));
        let p = braided_commutator(&ctx, &x1, &x122).plus(&free_mul(&x12, &x12).scale(&coef));
        assert_eq!(p, ufo8_p(&ctx));
    }

    #[test]
    fn random_homogeneous_has_the_requested_degree() {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        let ctx = random_rank2(&mut rng, 4);
        let lam = Weight(vec![2, 1]);
        let p = random_homogeneous(&ctx, &lam, &mut rng);
        assert!(p.len() <= 3);
        assert!(p.is_zero() || homogeneous_degree(&p, 2) == Some(lam));
    }

    #[test]
    fn named_examples_exist() {
        for n in NAMES {
            assert!(named(n).is_some());
        }
        assert!(named("nope").is_none());
    }
}
