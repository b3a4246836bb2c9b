//! Words, linear combinations, the free ℤⁿ-graded algebra, skew derivations
//! and the skew-Hopf pairing between the negative and positive parts.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::Arc;

use parking_lot::RwLock;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bicharacter::{Ctx, Weight};
use crate::scalars::{CycNum, Scalar};

/// A word in the letters 0..n, ordered by length and then lexicographically.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Word(pub Vec<u8>);

impl Word {
    pub fn empty() -> Word {
        Word(Vec::new())
    }

    pub fn letter(i: usize) -> Word {
        Word(vec![i as u8])
    }

    pub fn from_letters(l: &[usize]) -> Word {
        Word(l.iter().map(|&x| x as u8).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn weight(&self, n: usize) -> Weight {
        let mut w = vec![0; n];
        for &l in &self.0 {
            w[l as usize] += 1;
        }
        Weight(w)
    }

    pub fn concat(&self, o: &Word) -> Word {
        let mut v = self.0.clone();
        v.extend_from_slice(&o.0);
        Word(v)
    }

    pub fn prepend(&self, i: usize) -> Word {
        let mut v = Vec::with_capacity(self.0.len() + 1);
        v.push(i as u8);
        v.extend_from_slice(&self.0);
        Word(v)
    }

    /// The word with the letter at position k removed.
    pub fn remove(&self, k: usize) -> Word {
        let mut v = self.0.clone();
        v.remove(k);
        Word(v)
    }

    pub fn reversed(&self) -> Word {
        Word(self.0.iter().rev().copied().collect())
    }

    pub fn count(&self, i: usize) -> usize {
        self.0.iter().filter(|&&l| l as usize == i).count()
    }

    pub fn letters(&self) -> impl DoubleEndedIterator<Item = usize> + ExactSizeIterator + '_ {
        self.0.iter().map(|&l| l as usize)
    }

    /// 1-based letter list, the external representation.
    pub fn to_external(&self) -> Vec<usize> {
        self.0.iter().map(|&l| l as usize + 1).collect()
    }
}

impl Ord for Word {
    fn cmp(&self, o: &Word) -> Ordering {
        self.0.len().cmp(&o.0.len()).then_with(|| self.0.cmp(&o.0))
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, o: &Word) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "∅");
        }
        for &l in &self.0 {
            write!(f, "{}", l + 1)?;
        }
        Ok(())
    }
}

/// A monomial L_x K_λ R_y of a triangular algebra: a left word, a Cartan
/// exponent and a right word. Which generators the words denote depends on the
/// algebra the monomial lives in.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Mono {
    pub l: Word,
    pub k: Weight,
    pub r: Word,
}

impl Mono {
    pub fn new(l: Word, k: Weight, r: Word) -> Mono {
        Mono { l, k, r }
    }

    pub fn one(n: usize) -> Mono {
        Mono { l: Word::empty(), k: Weight::zero(n), r: Word::empty() }
    }

    pub fn cartan(k: Weight) -> Mono {
        Mono { l: Word::empty(), k, r: Word::empty() }
    }

    pub fn left(l: Word, n: usize) -> Mono {
        Mono { l, k: Weight::zero(n), r: Word::empty() }
    }

    pub fn right(r: Word, n: usize) -> Mono {
        Mono { l: Word::empty(), k: Weight::zero(n), r }
    }

    pub fn is_cartan(&self) -> bool {
        self.l.is_empty() && self.r.is_empty()
    }
}

impl fmt::Debug for Mono {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({:?}|{:?}|{:?})", self.l, self.k, self.r)
    }
}

/// All words of ℕⁿ-degree μ, in canonical order.
pub fn words_of_degree(mu: &Weight) -> Vec<Word> {
    fn rec(rem: &mut Vec<i32>, cur: &mut Vec<u8>, out: &mut Vec<Word>, left: usize) {
        if left == 0 {
            out.push(Word(cur.clone()));
            return;
        }
        for i in 0..rem.len() {
            if rem[i] > 0 {
                rem[i] -= 1;
                cur.push(i as u8);
                rec(rem, cur, out, left - 1);
                cur.pop();
                rem[i] += 1;
            }
        }
    }
    assert!(mu.is_nonneg(), "word degrees are nonnegative");
    let mut out = Vec::new();
    let mut rem = mu.0.clone();
    rec(&mut rem, &mut Vec::new(), &mut out, mu.height() as usize);
    out
}

/// All degrees μ ∈ ℕⁿ with |μ| = h, in lexicographically descending order of coordinates.
pub fn degrees_of_height(n: usize, h: usize) -> Vec<Weight> {
    fn rec(n: usize, h: usize, cur: &mut Vec<i32>, out: &mut Vec<Weight>) {
        if cur.len() == n - 1 {
            cur.push(h as i32);
            out.push(Weight(cur.clone()));
            cur.pop();
            return;
        }
        for k in (0..=h).rev() {
            cur.push(k as i32);
            rec(n, h - k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, h, &mut Vec::new(), &mut out);
    out
}

/// Degrees μ ∈ ℕⁿ with μ ≤ ν componentwise.
pub fn degrees_below(nu: &Weight) -> Vec<Weight> {
    let mut out = vec![Weight(Vec::new())];
    for &k in &nu.0 {
        let mut next = Vec::new();
        for w in &out {
            for j in 0..=k.max(0) {
                let mut v = w.0.clone();
                v.push(j);
                next.push(Weight(v));
            }
        }
        out = next;
    }
    out
}

/// A finite linear combination of basis objects with `Scalar` coefficients.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Lin<T: Ord> {
    terms: BTreeMap<T, Scalar>,
}

impl<T: Ord> Default for Lin<T> {
    fn default() -> Self {
        Lin { terms: BTreeMap::new() }
    }
}

impl<T: Ord + Clone> Lin<T> {
    pub fn zero() -> Lin<T> {
        Lin { terms: BTreeMap::new() }
    }

    pub fn single(t: T, c: Scalar) -> Lin<T> {
        let mut l = Lin::zero();
        l.add_term(t, c);
        l
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&T, &Scalar)> {
        self.terms.iter()
    }

    pub fn into_iter_terms(self) -> impl Iterator<Item = (T, Scalar)> {
        self.terms.into_iter()
    }

    pub fn get(&self, t: &T) -> Option<&Scalar> {
        self.terms.get(t)
    }

    pub fn keys(&self) -> impl Iterator<Item = &T> {
        self.terms.keys()
    }

    pub fn add_term(&mut self, t: T, c: Scalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&t) {
            Some(v) => {
                let s = &*v + &c;
                if s.is_zero() {
                    self.terms.remove(&t);
                } else {
                    *v = s;
                }
            }
            None => {
                self.terms.insert(t, c);
            }
        }
    }

    pub fn add_scaled(&mut self, o: &Lin<T>, c: &Scalar) {
        if c.is_zero() {
            return;
        }
        let unit = c.is_one();
        for (t, v) in &o.terms {
            if unit {
                self.add_term(t.clone(), v.clone());
            } else {
                self.add_term(t.clone(), v * c);
            }
        }
    }

    pub fn add_lin(&mut self, o: &Lin<T>) {
        for (t, v) in &o.terms {
            self.add_term(t.clone(), v.clone());
        }
    }

    pub fn plus(&self, o: &Lin<T>) -> Lin<T> {
        let mut r = self.clone();
        r.add_lin(o);
        r
    }

    pub fn minus(&self, o: &Lin<T>) -> Lin<T> {
        let mut r = self.clone();
        for (t, v) in &o.terms {
            r.add_term(t.clone(), -v);
        }
        r
    }

    pub fn scale(&self, c: &Scalar) -> Lin<T> {
        let mut r = Lin::zero();
        r.add_scaled(self, c);
        r
    }

    pub fn neg(&self) -> Lin<T> {
        Lin { terms: self.terms.iter().map(|(t, v)| (t.clone(), -v)).collect() }
    }

    pub fn filter(&self, mut keep: impl FnMut(&T) -> bool) -> Lin<T> {
        Lin { terms: self.terms.iter().filter(|(t, _)| keep(t)).map(|(t, v)| (t.clone(), v.clone())).collect() }
    }

    /// Applies a linear map given on basis elements.
    pub fn map_linear<U: Ord + Clone>(&self, mut f: impl FnMut(&T) -> Lin<U>) -> Lin<U> {
        let mut r = Lin::zero();
        for (t, v) in &self.terms {
            r.add_scaled(&f(t), v);
        }
        r
    }

    pub fn try_map_linear<U: Ord + Clone, E>(&self, mut f: impl FnMut(&T) -> Result<Lin<U>, E>) -> Result<Lin<U>, E> {
        let mut r = Lin::zero();
        for (t, v) in &self.terms {
            r.add_scaled(&f(t)?, v);
        }
        Ok(r)
    }

    /// Largest basis element, with its coefficient.
    pub fn leading(&self) -> Option<(&T, &Scalar)> {
        self.terms.iter().next_back()
    }

    /// Applies a map to every coefficient, dropping zeros.
    pub fn map_coeffs(&self, mut f: impl FnMut(&Scalar) -> Scalar) -> Lin<T> {
        let mut r = Lin::zero();
        for (t, v) in &self.terms {
            r.add_term(t.clone(), f(v));
        }
        r
    }
}

impl<T: Ord + fmt::Debug> fmt::Debug for Lin<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (t, v)) in self.terms.iter().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            write!(f, "[{}]·{:?}", v, t)?;
        }
        Ok(())
    }
}

/// Element of the free algebra T(V): noncommutative polynomial in the letters.
pub type FreeElement = Lin<Word>;

/// Which generators a word denotes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Side {
    E,
    F,
}

/// Homogeneous degree of a free element, if it is homogeneous and nonzero.
pub fn homogeneous_degree(f: &FreeElement, n: usize) -> Option<Weight> {
    let mut it = f.keys();
    let d = it.next()?.weight(n);
    if it.all(|w| w.weight(n) == d) {
        Some(d)
    } else {
        None
    }
}

pub fn free_mul(a: &FreeElement, b: &FreeElement) -> FreeElement {
    let mut r = FreeElement::zero();
    for (u, x) in a.iter() {
        for (v, y) in b.iter() {
            r.add_term(u.concat(v), x * y);
        }
    }
    r
}

/// Left skew derivation ∂_i^L on a single word.
pub fn partial_left_word(ctx: &Ctx, i: usize, u: &Word) -> FreeElement {
    let mut r = FreeElement::zero();
    let ai = ctx.alpha(i);
    let mut prefix = ctx.zero_weight();
    for (k, l) in u.letters().enumerate() {
        if l == i {
            r.add_term(u.remove(k), ctx.scalar(ctx.chi(&prefix, &ai)));
        }
        prefix.0[l] += 1;
    }
    r
}

/// Right skew derivation ∂_i^R on a single word.
pub fn partial_right_word(ctx: &Ctx, i: usize, u: &Word) -> FreeElement {
    let mut r = FreeElement::zero();
    let ai = ctx.alpha(i);
    let mut suffix = ctx.zero_weight();
    for (k, l) in u.letters().enumerate().rev() {
        if l == i {
            r.add_term(u.remove(k), ctx.scalar(ctx.chi(&suffix, &ai)));
        }
        suffix.0[l] += 1;
    }
    r
}

pub fn partial_left(ctx: &Ctx, i: usize, f: &FreeElement) -> FreeElement {
    f.map_linear(|u| partial_left_word(ctx, i, u))
}

pub fn partial_right(ctx: &Ctx, i: usize, f: &FreeElement) -> FreeElement {
    f.map_linear(|u| partial_right_word(ctx, i, u))
}

/// The skew-Hopf pairing ⟨F_u, E_v⟩ on words of the free algebras, memoized.
pub struct Pairing {
    ctx: Arc<Ctx>,
    memo: RwLock<HashMap<(Word, Word), CycNum>>,
}

impl Pairing {
    pub fn new(ctx: Arc<Ctx>) -> Pairing {
        Pairing { ctx, memo: RwLock::new(HashMap::new()) }
    }

    pub fn ctx(&self) -> &Ctx {
        &self.ctx
    }

    /// ⟨F_u, E_v⟩ via ⟨f, E_i e⟩ = ⟨∂_i^L f, e⟩.
    pub fn pair_words(&self, u: &Word, v: &Word) -> CycNum {
        let ord = self.ctx.ord;
        if u.len() != v.len() {
            return CycNum::zero(ord);
        }
        if u.is_empty() {
            return CycNum::one(ord);
        }
        let n = self.ctx.n;
        if u.weight(n) != v.weight(n) {
            return CycNum::zero(ord);
        }
        let key = (u.clone(), v.clone());
        if let Some(x) = self.memo.read().get(&key) {
            return x.clone();
        }
        let i = v.0[0] as usize;
        let rest = Word(v.0[1..].to_vec());
        let ai = self.ctx.alpha(i);
        let mut prefix = self.ctx.zero_weight();
        let mut acc = CycNum::zero(ord);
        for (k, l) in u.letters().enumerate() {
            if l == i {
                let inner = self.pair_words(&u.remove(k), &rest);
                if !inner.is_zero() {
                    acc = &acc + &(&self.ctx.chi(&prefix, &ai) * &inner);
                }
            }
            prefix.0[l] += 1;
        }
        self.memo.write().insert(key, acc.clone());
        acc
    }

    /// ⟨F_u, E_v⟩ via ⟨f, e E_i⟩ = ⟨∂_i^R f, e⟩, an independent route.
    pub fn pair_words_right(&self, u: &Word, v: &Word) -> CycNum {
        let ord = self.ctx.ord;
        if u.len() != v.len() {
            return CycNum::zero(ord);
        }
        if u.is_empty() {
            return CycNum::one(ord);
        }
        let i = *v.0.last().unwrap() as usize;
        let rest = Word(v.0[..v.len() - 1].to_vec());
        let mut acc = CycNum::zero(ord);
        for (w, c) in partial_right_word(&self.ctx, i, u).iter() {
            let inner = self.pair_words_right(w, &rest);
            if !inner.is_zero() {
                acc = &acc + &(&c.as_constant().unwrap() * &inner);
            }
        }
        acc
    }

    /// Bilinear extension to free elements.
    pub fn pairing(&self, f: &FreeElement, e: &FreeElement) -> Scalar {
        let mut acc = self.ctx.sc_zero();
        for (u, a) in f.iter() {
            for (v, b) in e.iter() {
                let p = self.pair_words(u, v);
                if !p.is_zero() {
                    acc += &(a * b).scale(&p);
                }
            }
        }
        acc
    }
}

#[derive(Debug, Error)]
pub enum SubstError<E> {
    #[error("polynomial uses letter {0} but only {1} images were given")]
    Arity(usize, usize),
    #[error(transparent)]
    Target(E),
}

/// Anything noncommutative polynomials can be evaluated in.
pub trait Substitution {
    type Elem: Clone;
    type Error;
    fn one(&self) -> Self::Elem;
    fn zero(&self) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Result<Self::Elem, Self::Error>;
    fn add_scaled(&self, acc: &mut Self::Elem, c: &Scalar, x: &Self::Elem);
}

/// Evaluates p(x₁,…,x_n), sharing common suffixes between words.
pub fn substitute<A: Substitution>(alg: &A, p: &FreeElement, images: &[A::Elem]) -> Result<A::Elem, SubstError<A::Error>> {
    for w in p.keys() {
        if let Some(l) = w.letters().find(|&l| l >= images.len()) {
            return Err(SubstError::Arity(l + 1, images.len()));
        }
    }
    let mut memo: HashMap<Vec<u8>, A::Elem> = HashMap::new();
    memo.insert(Vec::new(), alg.one());
    let mut acc = alg.zero();
    for (w, c) in p.iter() {
        let letters = &w.0;
        let mut start = letters.len();
        while !memo.contains_key(&letters[start..]) {
            start -= 1;
        }
        while start > 0 {
            let cur = memo[&letters[start..]].clone();
            let v = alg.mul(&images[letters[start - 1] as usize], &cur).map_err(SubstError::Target)?;
            start -= 1;
            memo.insert(letters[start..].to_vec(), v);
        }
        alg.add_scaled(&mut acc, c, &memo[&letters[..]]);
    }
    Ok(acc)
}

/// The free algebra over a given coefficient context.
pub struct FreeAlgebraIn<'a>(pub &'a Ctx);

impl Substitution for FreeAlgebraIn<'_> {
    type Elem = FreeElement;
    type Error = std::convert::Infallible;
    fn one(&self) -> FreeElement {
        FreeElement::single(Word::empty(), self.0.sc_one())
    }
    fn zero(&self) -> FreeElement {
        FreeElement::zero()
    }
    fn mul(&self, a: &FreeElement, b: &FreeElement) -> Result<FreeElement, Self::Error> {
        Ok(free_mul(a, b))
    }
    fn add_scaled(&self, acc: &mut FreeElement, c: &Scalar, x: &FreeElement) {
        acc.add_scaled(x, c);
    }
}

/// One term of a polynomial in the external JSON format.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct TermJson {
    pub coef: String,
    pub word: Vec<usize>,
}

pub fn free_from_json(ctx: &Ctx, terms: &[TermJson]) -> Result<FreeElement, String> {
    let mut f = FreeElement::zero();
    for t in terms {
        if t.word.iter().any(|&l| l == 0 || l > ctx.n) {
            return Err(format!("letter out of range in {:?}", t.word));
        }
        let c = crate::scalars::CycNum::parse(ctx.ord, &t.coef).map_err(|e| e.to_string())?;
        f.add_term(Word(t.word.iter().map(|&l| (l - 1) as u8).collect()), ctx.scalar(c));
    }
    Ok(f)
}

pub fn free_to_json(f: &FreeElement) -> Vec<TermJson> {
    f.iter().map(|(w, c)| TermJson { coef: c.to_string(), word: w.to_external() }).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::make_root;
    use proptest::prelude::*;

    fn a2() -> Arc<Ctx> {
        Arc::new(Ctx::from_exponents(5, &[vec![2, -1], vec![-1, 2]], vec![1, 0], 6).unwrap())
    }

    fn w(l: &[usize]) -> Word {
        Word::from_letters(l)
    }

    #[test]
    fn canonical_order() {
        let mut v = vec![w(&[1, 0]), w(&[1]), w(&[0, 1]), w(&[]), w(&[0, 0, 0])];
        v.sort();
        assert_eq!(v, vec![w(&[]), w(&[1]), w(&[0, 1]), w(&[1, 0]), w(&[0, 0, 0])]);
        assert_eq!(words_of_degree(&Weight(vec![2, 1])), vec![w(&[0, 0, 1]), w(&[0, 1, 0]), w(&[1, 0, 0])]);
        assert_eq!(degrees_of_height(2, 2), vec![Weight(vec![2, 0]), Weight(vec![1, 1]), Weight(vec![0, 2])]);
        assert_eq!(degrees_below(&Weight(vec![1, 1])).len(), 4);
    }

    #[test]
    fn derivation_examples() {
        let ctx = a2();
        let f12 = w(&[0, 1]);
        assert_eq!(partial_left_word(&ctx, 0, &f12), FreeElement::single(w(&[1]), ctx.sc_one()));
        assert_eq!(partial_left_word(&ctx, 1, &f12), FreeElement::single(w(&[0]), ctx.scalar(ctx.chi(&ctx.alpha(0), &ctx.alpha(1)))));
        assert!(partial_left_word(&ctx, 0, &w(&[1])).is_zero());
        assert_eq!(partial_right_word(&ctx, 1, &f12), FreeElement::single(w(&[0]), ctx.sc_one()));
        assert_eq!(partial_right_word(&ctx, 0, &f12), FreeElement::single(w(&[1]), ctx.scalar(ctx.chi(&ctx.alpha(1), &ctx.alpha(0)))));
        assert!(partial_right_word(&ctx, 0, &Word::empty()).is_zero());
    }

    #[test]
    fn pairing_examples() {
        let ctx = a2();
        let p = Pairing::new(ctx.clone());
        assert!(p.pair_words(&w(&[0]), &w(&[0])).is_one());
        assert!(p.pair_words(&w(&[0]), &w(&[1])).is_zero());
        assert!(p.pair_words(&w(&[0, 1]), &w(&[0, 1])).is_one());
        assert_eq!(p.pair_words(&w(&[1, 0]), &w(&[0, 1])), make_root(5, -1));
        assert!(p.pair_words(&Word::empty(), &Word::empty()).is_one());
        // A2, degree α1+α2: Gram determinant 1 − q12 q21
        let g = |a: &[usize], b: &[usize]| p.pair_words(&w(a), &w(b));
        let det = &(&g(&[0, 1], &[0, 1]) * &g(&[1, 0], &[1, 0])) - &(&g(&[0, 1], &[1, 0]) * &g(&[1, 0], &[0, 1]));
        assert_eq!(det, &CycNum::one(5) - &make_root(5, -2));
    }

    #[test]
    fn left_and_right_pairing_routes_agree() {
        let ctx = Arc::new(Ctx::from_exponents(12, &[vec![4, -2], vec![-2, 3]], vec![0, 1], 6).unwrap());
        let p = Pairing::new(ctx.clone());
        for h in 0..=5 {
            for mu in degrees_of_height(2, h) {
                let ws = words_of_degree(&mu);
                for u in &ws {
                    for v in &ws {
                        assert_eq!(p.pair_words(u, v), p.pair_words_right(u, v), "{u:?} {v:?}");
                    }
                }
            }
        }
        assert!(p.pair_words(&w(&[0, 0]), &w(&[0, 1])).is_zero());
    }

    #[test]
    fn substitution_in_free_algebra() {
        let ctx = a2();
        let x = |i| FreeElement::single(Word::letter(i), ctx.sc_one());
        let mut p = FreeElement::zero();
        p.add_term(w(&[0, 1]), ctx.sc_int(2));
        p.add_term(w(&[1, 1]), ctx.sc_one());
        let r = substitute(&FreeAlgebraIn(&ctx), &p, &[x(0), x(1)]).unwrap();
        assert_eq!(r, p);
        assert!(matches!(substitute(&FreeAlgebraIn(&ctx), &p, &[x(0)]), Err(SubstError::Arity(2, 1))));
    }

    fn arb_word(n: usize, max: usize) -> impl Strategy<Value = Word> {
        prop::collection::vec(0..n as u8, 0..=max).prop_map(Word)
    }

    proptest! {
        #[test]
        fn left_and_right_derivations_commute(u in arb_word(3, 6), i in 0usize..3, j in 0usize..3) {
            let ctx = Ctx::from_exponents(7, &[vec![2, -1, 3], vec![-1, 2, 1], vec![3, 1, 5]], vec![0, 1, 2], 6).unwrap();
            let f = FreeElement::single(u, ctx.sc_one());
            let a = partial_left(&ctx, i, &partial_right(&ctx, j, &f));
            let b = partial_right(&ctx, j, &partial_left(&ctx, i, &f));
            prop_assert_eq!(a, b);
        }

        #[test]
        fn pairing_respects_grading(u in arb_word(2, 4), v in arb_word(2, 4)) {
            let ctx = a2();
            let p = Pairing::new(ctx.clone());
            if u.weight(2) != v.weight(2) {
                prop_assert!(p.pair_words(&u, &v).is_zero());
            }
        }

        #[test]
        fn left_leibniz_rule(u in arb_word(2, 4), v in arb_word(2, 4), i in 0usize..2) {
            let ctx = a2();
            let uv = FreeElement::single(u.concat(&v), ctx.sc_one());
            let fu = FreeElement::single(u.clone(), ctx.sc_one());
            let fv = FreeElement::single(v.clone(), ctx.sc_one());
            let mut rhs = free_mul(&partial_left(&ctx, i, &fu), &fv);
            rhs.add_scaled(&free_mul(&fu, &partial_left(&ctx, i, &fv)), &ctx.scalar(ctx.chi(&u.weight(2), &ctx.alpha(i))));
            prop_assert_eq!(partial_left(&ctx, i, &uv), rhs);
        }
    }
}
