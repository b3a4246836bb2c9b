//! Al-Salam–Carlitz I polynomials U_n^{(a)}(x;q), the polynomials p_n(x;t,q)
//! built with the q-derivative, and the identities linking them.
//!
//! Polynomials live in a Laurent ring over ℚ(ζ_N) in the variables x, a, q, t.
//! The q-variable stays an indeterminate until [`AscPoly::specialize_q`].

use std::collections::BTreeMap;
use std::fmt;

use crate::scalars::{make_root, CycNum};

pub const X: usize = 0;
pub const A: usize = 1;
pub const Q: usize = 2;
pub const T: usize = 3;
const NAMES: [&str; 4] = ["x", "a", "q", "t"];

type Exps = [i32; 4];

#[derive(Clone, PartialEq, Eq)]
pub struct AscPoly {
    ord: u32,
    terms: BTreeMap<Exps, CycNum>,
}

impl AscPoly {
    pub fn zero(ord: u32) -> AscPoly {
        AscPoly { ord, terms: BTreeMap::new() }
    }

    pub fn constant(c: CycNum) -> AscPoly {
        AscPoly::monomial(c, [0; 4])
    }

    pub fn int(ord: u32, v: i64) -> AscPoly {
        AscPoly::constant(CycNum::from_int(ord, v))
    }

    pub fn one(ord: u32) -> AscPoly {
        AscPoly::int(ord, 1)
    }

    pub fn monomial(c: CycNum, exps: Exps) -> AscPoly {
        let mut p = AscPoly::zero(c.ord());
        p.add_term(exps, c);
        p
    }

    /// The variable `v` raised to the power `e`, which may be negative.
    pub fn var(ord: u32, v: usize, e: i32) -> AscPoly {
        let mut exps = [0; 4];
        exps[v] = e;
        AscPoly::monomial(CycNum::one(ord), exps)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exps, &CycNum)> {
        self.terms.iter()
    }

    fn add_term(&mut self, e: Exps, c: CycNum) {
        if c.is_zero() {
            return;
        }
        let s = match self.terms.remove(&e) {
            Some(old) => &old + &c,
            None => c,
        };
        if !s.is_zero() {
            self.terms.insert(e, s);
        }
    }

    pub fn add(&self, o: &AscPoly) -> AscPoly {
        let mut out = self.clone();
        for (e, c) in &o.terms {
            out.add_term(*e, c.clone());
        }
        out
    }

    pub fn sub(&self, o: &AscPoly) -> AscPoly {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> AscPoly {
        self.scale(&CycNum::from_int(self.ord, -1))
    }

    pub fn scale(&self, c: &CycNum) -> AscPoly {
        let mut out = AscPoly::zero(self.ord);
        for (e, x) in &self.terms {
            out.add_term(*e, x * c);
        }
        out
    }

    pub fn mul(&self, o: &AscPoly) -> AscPoly {
        let mut out = AscPoly::zero(self.ord);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &o.terms {
                let e = [e1[0] + e2[0], e1[1] + e2[1], e1[2] + e2[2], e1[3] + e2[3]];
                out.add_term(e, c1 * c2);
            }
        }
        out
    }

    pub fn pow(&self, k: u32) -> AscPoly {
        let mut acc = AscPoly::one(self.ord);
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }

    fn as_monomial(&self) -> Option<(&Exps, &CycNum)> {
        if self.terms.len() == 1 {
            self.terms.iter().next()
        } else {
            None
        }
    }

    /// Replaces the variable `v` by `image`. Negative powers of `v` require a monomial image.
    pub fn substitute(&self, v: usize, image: &AscPoly) -> AscPoly {
        let inverse = image.as_monomial().map(|(e, c)| {
            let c = c.inverse().expect("nonzero monomial coefficient");
            AscPoly::monomial(c, [-e[0], -e[1], -e[2], -e[3]])
        });
        let mut out = AscPoly::zero(self.ord);
        for (e, c) in &self.terms {
            let k = e[v];
            let mut rest = *e;
            rest[v] = 0;
            let power = if k >= 0 {
                image.pow(k as u32)
            } else {
                inverse.as_ref().expect("negative power needs a monomial image").pow((-k) as u32)
            };
            out = out.add(&AscPoly::monomial(c.clone(), rest).mul(&power));
        }
        out
    }

    /// Sets q to a fixed element of ℚ(ζ_N).
    pub fn specialize_q(&self, q: &CycNum) -> AscPoly {
        let mut out = AscPoly::zero(q.ord());
        for (e, c) in &self.terms {
            let mut rest = *e;
            rest[Q] = 0;
            let c = CycNum::from_coeffs(q.ord(), &c.coeffs());
            out.add_term(rest, &c * &q.pow(e[Q] as i64));
        }
        out
    }

    /// Degree in `v`, or None for the zero polynomial.
    pub fn degree_in(&self, v: usize) -> Option<i32> {
        self.terms.keys().map(|e| e[v]).max()
    }

    /// 𝒟_q f(x) = (f(qx) − f(x))/((q−1)x), acting on x^m by [m]_q x^{m−1}.
    pub fn q_derivative(&self) -> AscPoly {
        let mut out = AscPoly::zero(self.ord);
        for (e, c) in &self.terms {
            let m = e[X];
            assert!(m >= 0, "the q-derivative is taken on polynomials in x");
            for j in 0..m {
                let mut f = *e;
                f[X] = m - 1;
                f[Q] += j;
                out.add_term(f, c.clone());
            }
        }
        out
    }
}

impl fmt::Display for AscPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(e, c)| {
                let mut s = format!("({})", c);
                for (v, &k) in e.iter().enumerate() {
                    match k {
                        0 => {}
                        1 => s.push_str(&format!("·{}", NAMES[v])),
                        _ => s.push_str(&format!("·{}^{}", NAMES[v], k)),
                    }
                }
                s
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl fmt::Debug for AscPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl serde::Serialize for AscPoly {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// Gaussian binomial (n choose k)_q as a polynomial in q.
pub fn q_binomial(ord: u32, n: u32, k: u32) -> AscPoly {
    if k > n {
        return AscPoly::zero(ord);
    }
    // Pascal rule (n k) = (n−1 k−1) + q^k (n−1 k)
    let mut row = vec![AscPoly::one(ord)];
    for m in 1..=n {
        let mut next = vec![AscPoly::one(ord); m as usize + 1];
        for j in 1..m as usize {
            next[j] = row[j - 1].add(&AscPoly::var(ord, Q, j as i32).mul(&row[j]));
        }
        row = next;
    }
    row[k as usize].clone()
}

/// U_n^{(a)}(x;q) = Σ_k (n k)_q (−a)^k q^{k(k−1)/2} (x−1)(x−q)⋯(x−q^{n−k−1}).
pub fn asc_polynomial(ord: u32, n: u32) -> AscPoly {
    let mut out = AscPoly::zero(ord);
    let minus_a = AscPoly::var(ord, A, 1).neg();
    for k in 0..=n {
        let mut term = q_binomial(ord, n, k).mul(&minus_a.pow(k)).mul(&AscPoly::var(ord, Q, (k * k.saturating_sub(1) / 2) as i32));
        for j in 0..(n - k) {
            term = term.mul(&AscPoly::var(ord, X, 1).sub(&AscPoly::var(ord, Q, j as i32)));
        }
        out = out.add(&term);
    }
    out
}

/// p_0 = 1, p_n = (x + t q^{−2n} 𝒟_q + q^{−n}) p_{n−1}.
pub fn p_polynomial(ord: u32, n: u32) -> AscPoly {
    let mut p = AscPoly::one(ord);
    for m in 1..=n as i32 {
        let x = AscPoly::var(ord, X, 1).mul(&p);
        let d = AscPoly::monomial(CycNum::one(ord), [0, 0, -2 * m, 1]).mul(&p.q_derivative());
        let c = AscPoly::var(ord, Q, -m).mul(&p);
        p = x.add(&d).add(&c);
    }
    p
}

/// −q^{−n+1} x U_n(x) = a U_{n−1}(x) − (x−1)(x−a) U_{n−1}(q⁻¹x), for n > 0.
pub fn backward_shift_holds(ord: u32, n: u32) -> bool {
    assert!(n > 0);
    let x = AscPoly::var(ord, X, 1);
    let a = AscPoly::var(ord, A, 1);
    let un = asc_polynomial(ord, n);
    let um = asc_polynomial(ord, n - 1);
    let lhs = AscPoly::var(ord, Q, 1 - n as i32).mul(&x).mul(&un).neg();
    let shifted = um.substitute(X, &AscPoly::monomial(CycNum::one(ord), [1, 0, -1, 0]));
    let one = AscPoly::one(ord);
    let rhs = a.mul(&um).sub(&x.sub(&one).mul(&x.sub(&a)).mul(&shifted));
    lhs == rhs
}

/// Under t = (q−1)t₁(t₁+1): p_n(x;t,q) = t₁ⁿ q^{−n²} U_n^{(−t₁⁻¹−1)}(qⁿ t₁⁻¹ x; q).
/// The variable `t` plays the role of t₁ on the right.
pub fn closed_form_holds(ord: u32, n: u32) -> bool {
    let t1 = AscPoly::var(ord, T, 1);
    let one = AscPoly::one(ord);
    let t_image = AscPoly::var(ord, Q, 1).sub(&one).mul(&t1).mul(&t1.add(&one));
    let lhs = p_polynomial(ord, n).substitute(T, &t_image);
    let u = asc_polynomial(ord, n)
        .substitute(X, &AscPoly::monomial(CycNum::one(ord), [1, 0, n as i32, -1]))
        .substitute(A, &AscPoly::var(ord, T, -1).add(&one).neg());
    let rhs = AscPoly::monomial(CycNum::one(ord), [0, 0, -((n * n) as i32), n as i32]).mul(&u);
    lhs == rhs
}

/// U_M^{(a)}(0; ζ²) for ζ = ζ_N.
pub fn asc_at_zero_root_of_unity(ord: u32, m: u32) -> AscPoly {
    let zeta2 = make_root(ord, 2);
    asc_polynomial(ord, m).substitute(X, &AscPoly::zero(ord)).specialize_q(&zeta2)
}

/// (−1)^M ζ^{M(M−1)} (1 + a^M).
pub fn asc_at_zero_expected(ord: u32, m: u32) -> AscPoly {
    let sign = if m.is_multiple_of(2) { 1 } else { -1 };
    let c = make_root(ord, (m * (m - 1)) as i64).scale_int(sign);
    AscPoly::one(ord).add(&AscPoly::var(ord, A, m as i32)).scale(&c)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x() -> AscPoly {
        AscPoly::var(1, X, 1)
    }

    #[test]
    fn small_cases() {
        assert_eq!(asc_polynomial(1, 0), AscPoly::one(1));
        let u1 = x().sub(&AscPoly::one(1)).sub(&AscPoly::var(1, A, 1));
        assert_eq!(asc_polynomial(1, 1), u1);
        assert_eq!(p_polynomial(1, 0), AscPoly::one(1));
        assert_eq!(p_polynomial(1, 1), x().add(&AscPoly::var(1, Q, -1)));
    }

    #[test]
    fn q_binomials() {
        // (4 2)_q = 1 + q + 2q² + q³ + q⁴
        let q = |k| AscPoly::var(1, Q, k);
        let expect = AscPoly::one(1).add(&q(1)).add(&q(2).scale(&CycNum::from_int(1, 2))).add(&q(3)).add(&q(4));
        assert_eq!(q_binomial(1, 4, 2), expect);
        assert_eq!(q_binomial(1, 5, 0), AscPoly::one(1));
        assert_eq!(q_binomial(1, 5, 5), AscPoly::one(1));
    }

    #[test]
    fn q_derivative_of_powers() {
        // 𝒟_q x³ = (1 + q + q²) x²
        let d = x().pow(3).q_derivative();
        let q = |k| AscPoly::var(1, Q, k);
        assert_eq!(d, AscPoly::one(1).add(&q(1)).add(&q(2)).mul(&x().pow(2)));
        assert!(AscPoly::one(1).q_derivative().is_zero());
    }

    #[test]
    fn degree_in_x() {
        for n in 0..=6 {
            assert_eq!(asc_polynomial(1, n).degree_in(X), Some(n as i32));
        }
    }

    #[test]
    fn backward_shift() {
        for n in 1..=8 {
            assert!(backward_shift_holds(1, n), "n = {}", n);
        }
    }

    #[test]
    fn closed_form() {
        for n in 0..=6 {
            assert!(closed_form_holds(1, n), "n = {}", n);
        }
    }

    #[test]
    fn value_at_zero() {
        for (ord, m) in [(4, 2), (3, 3), (6, 3), (5, 5), (10, 5)] {
            assert_eq!(asc_at_zero_root_of_unity(ord, m), asc_at_zero_expected(ord, m), "N = {}", ord);
        }
    }

    #[test]
    fn value_at_zero_fails_off_the_root_of_unity() {
        // ζ² of order 4 is not a primitive 3rd root
        assert_ne!(asc_at_zero_root_of_unity(8, 3), asc_at_zero_expected(8, 3));
    }
}
