//! The symmetric bicharacter χ on ℤⁿ, the diagram involution τ, the
//! automorphism θ = −τ and the fixed lattice ℤⁿ_θ.

use std::fmt;
use std::ops::{Add, Neg, Sub};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::scalars::{make_root, CycNum, Scalar, ScalarError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ContextError {
    #[error("rank must be positive")]
    EmptyRank,
    #[error("q must be an n×n matrix")]
    Shape,
    #[error("q is not symmetric at ({0},{1})")]
    NotSymmetric(usize, usize),
    #[error("q_{{{0}{1}}} is zero")]
    ZeroEntry(usize, usize),
    #[error("tau is not an involutive permutation of 1..n")]
    BadTau,
    #[error("q is not tau-invariant at ({0},{1})")]
    NotTauInvariant(usize, usize),
    #[error("expected {0} parameter values, got {1}")]
    ParamCount(usize, usize),
    #[error(transparent)]
    Scalar(#[from] ScalarError),
    #[error("malformed context: {0}")]
    Malformed(String),
}

/// An element of ℤⁿ in the basis α₁,…,α_n.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
pub struct Weight(pub Vec<i32>);

impl Weight {
    pub fn zero(n: usize) -> Weight {
        Weight(vec![0; n])
    }

    pub fn alpha(n: usize, i: usize) -> Weight {
        let mut w = vec![0; n];
        w[i] = 1;
        Weight(w)
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&x| x == 0)
    }

    /// Sum of the coordinates.
    pub fn height(&self) -> i64 {
        self.0.iter().map(|&x| x as i64).sum()
    }

    /// Componentwise λ ≥ 0.
    pub fn is_nonneg(&self) -> bool {
        self.0.iter().all(|&x| x >= 0)
    }

    pub fn scale(&self, k: i32) -> Weight {
        Weight(self.0.iter().map(|&x| x * k).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl fmt::Debug for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

impl Add for &Weight {
    type Output = Weight;
    fn add(self, o: &Weight) -> Weight {
        Weight(self.0.iter().zip(&o.0).map(|(a, b)| a + b).collect())
    }
}

impl Sub for &Weight {
    type Output = Weight;
    fn sub(self, o: &Weight) -> Weight {
        Weight(self.0.iter().zip(&o.0).map(|(a, b)| a - b).collect())
    }
}

impl Neg for &Weight {
    type Output = Weight;
    fn neg(self) -> Weight {
        Weight(self.0.iter().map(|a| -a).collect())
    }
}

impl Add for Weight {
    type Output = Weight;
    fn add(self, o: Weight) -> Weight {
        &self + &o
    }
}

impl Sub for Weight {
    type Output = Weight;
    fn sub(self, o: Weight) -> Weight {
        &self - &o
    }
}

impl Neg for Weight {
    type Output = Weight;
    fn neg(self) -> Weight {
        -&self
    }
}

/// Bicharacter data together with τ, the degree bound and the coideal parameters.
#[derive(Clone, Debug)]
pub struct Ctx {
    pub n: usize,
    pub ord: u32,
    pub q: Vec<Vec<CycNum>>,
    /// Zero-based involution.
    pub tau: Vec<usize>,
    pub degree_bound: usize,
    /// Coideal parameters c₁,…,c_n, symbolic or numeric.
    pub c: Vec<Scalar>,
    qexp: Option<Vec<Vec<i64>>>,
}

impl Ctx {
    /// Builds and validates a context with symbolic parameters.
    pub fn new(ord: u32, q: Vec<Vec<CycNum>>, tau: Vec<usize>, degree_bound: usize) -> Result<Ctx, ContextError> {
        let n = q.len();
        let c = (0..n).map(|i| Scalar::var(ord, n, i)).collect();
        let mut ctx = Ctx { n, ord, q, tau, degree_bound, c, qexp: None };
        ctx.validate()?;
        ctx.qexp = ctx.find_exponents();
        Ok(ctx)
    }

    /// Convenience constructor from exponents: q_ij = ζ_N^{k_ij}.
    pub fn from_exponents(ord: u32, k: &[Vec<i64>], tau: Vec<usize>, degree_bound: usize) -> Result<Ctx, ContextError> {
        let q = k.iter().map(|row| row.iter().map(|&e| make_root(ord, e)).collect()).collect();
        Ctx::new(ord, q, tau, degree_bound)
    }

    pub fn validate(&self) -> Result<(), ContextError> {
        let n = self.n;
        if n == 0 {
            return Err(ContextError::EmptyRank);
        }
        if self.q.len() != n || self.q.iter().any(|r| r.len() != n) || self.tau.len() != n {
            return Err(ContextError::Shape);
        }
        for i in 0..n {
            for j in 0..n {
                if self.q[i][j].ord() != self.ord {
                    return Err(ContextError::Scalar(ScalarError::OrderMismatch(self.q[i][j].ord(), self.ord)));
                }
                if self.q[i][j].is_zero() {
                    return Err(ContextError::ZeroEntry(i + 1, j + 1));
                }
                if self.q[i][j] != self.q[j][i] {
                    return Err(ContextError::NotSymmetric(i + 1, j + 1));
                }
            }
        }
        if self.tau.iter().any(|&t| t >= n) || (0..n).any(|i| self.tau[self.tau[i]] != i) {
            return Err(ContextError::BadTau);
        }
        for i in 0..n {
            for j in 0..n {
                if self.q[self.tau[i]][self.tau[j]] != self.q[i][j] {
                    return Err(ContextError::NotTauInvariant(i + 1, j + 1));
                }
            }
        }
        if self.c.len() != n {
            return Err(ContextError::ParamCount(n, self.c.len()));
        }
        Ok(())
    }

    fn find_exponents(&self) -> Option<Vec<Vec<i64>>> {
        let mut out = vec![vec![0i64; self.n]; self.n];
        for i in 0..self.n {
            for j in 0..self.n {
                out[i][j] = (0..self.ord as i64).find(|&k| make_root(self.ord, k) == self.q[i][j])?;
            }
        }
        Some(out)
    }

    /// Replaces the parameters by the given values (all of length n).
    pub fn with_params(&self, c: Vec<Scalar>) -> Result<Ctx, ContextError> {
        let mut ctx = self.clone();
        if c.len() != self.n {
            return Err(ContextError::ParamCount(self.n, c.len()));
        }
        ctx.c = c;
        Ok(ctx)
    }

    /// Replaces the parameters by numeric values.
    pub fn with_numeric_params(&self, c: &[CycNum]) -> Result<Ctx, ContextError> {
        self.with_params(c.iter().map(|v| Scalar::constant(v.clone(), self.n)).collect())
    }

    pub fn with_degree_bound(&self, d: usize) -> Ctx {
        let mut ctx = self.clone();
        ctx.degree_bound = d;
        ctx
    }

    pub fn params_numeric(&self) -> bool {
        self.c.iter().all(|s| s.as_constant().is_some())
    }

    pub fn scalar(&self, c: CycNum) -> Scalar {
        Scalar::constant(c, self.n)
    }

    pub fn sc_int(&self, v: i64) -> Scalar {
        Scalar::from_int(self.ord, self.n, v)
    }

    pub fn sc_zero(&self) -> Scalar {
        Scalar::zero(self.ord, self.n)
    }

    pub fn sc_one(&self) -> Scalar {
        Scalar::one(self.ord, self.n)
    }

    pub fn root(&self, k: i64) -> CycNum {
        make_root(self.ord, k)
    }

    pub fn zero_weight(&self) -> Weight {
        Weight::zero(self.n)
    }

    pub fn alpha(&self, i: usize) -> Weight {
        Weight::alpha(self.n, i)
    }

    /// χ(λ, μ) = Π q_ij^{λ_i μ_j}.
    pub fn chi(&self, lam: &Weight, mu: &Weight) -> CycNum {
        match &self.qexp {
            Some(k) => {
                let mut e = 0i64;
                for i in 0..self.n {
                    if lam.0[i] == 0 {
                        continue;
                    }
                    for j in 0..self.n {
                        e += k[i][j] * lam.0[i] as i64 * mu.0[j] as i64;
                    }
                }
                make_root(self.ord, e)
            }
            None => {
                let mut acc = CycNum::one(self.ord);
                for i in 0..self.n {
                    for j in 0..self.n {
                        let e = lam.0[i] as i64 * mu.0[j] as i64;
                        if e != 0 {
                            acc = &acc * &self.q[i][j].pow(e);
                        }
                    }
                }
                acc
            }
        }
    }

    /// χ(α_i, α_j).
    pub fn q(&self, i: usize, j: usize) -> &CycNum {
        &self.q[i][j]
    }

    pub fn tau_weight(&self, lam: &Weight) -> Weight {
        let mut out = vec![0; self.n];
        for i in 0..self.n {
            out[self.tau[i]] += lam.0[i];
        }
        Weight(out)
    }

    /// θ(λ) = −τ(λ).
    pub fn theta(&self, lam: &Weight) -> Weight {
        -self.tau_weight(lam)
    }

    pub fn in_lattice_theta(&self, lam: &Weight) -> bool {
        self.theta(lam) == *lam
    }

    /// Indices i with i < τ(i); the elements α_i − α_τ(i) form a basis of ℤⁿ_θ.
    pub fn theta_basis(&self) -> Vec<usize> {
        (0..self.n).filter(|&i| i < self.tau[i]).collect()
    }

    /// Coordinates of λ ∈ ℤⁿ_θ in the basis α_i − α_τ(i).
    pub fn theta_coords(&self, lam: &Weight) -> Option<Vec<i32>> {
        if !self.in_lattice_theta(lam) {
            return None;
        }
        Some(self.theta_basis().iter().map(|&i| lam.0[i]).collect())
    }

    /// λ ∈ −ℕⁿ + ℤⁿ_θ, the K-exponents allowed in the polynomial part.
    pub fn in_poly_cone(&self, lam: &Weight) -> bool {
        (0..self.n).all(|i| {
            let t = self.tau[i];
            if t == i {
                lam.0[i] <= 0
            } else {
                lam.0[i] + lam.0[t] <= 0
            }
        })
    }

    /// λ ∈ ⊕ ℕ(α_i + α_τ(i)).
    pub fn in_symmetric_cone(&self, lam: &Weight) -> bool {
        (0..self.n).all(|i| {
            let t = self.tau[i];
            if t == i {
                lam.0[i] >= 0 && lam.0[i] % 2 == 0
            } else {
                lam.0[i] >= 0 && lam.0[i] == lam.0[t]
            }
        })
    }
}

/// On-disk context description.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ContextFile {
    pub n: usize,
    #[serde(rename = "N")]
    pub ord: u32,
    pub q: Vec<Vec<serde_json::Value>>,
    pub tau: Vec<usize>,
    #[serde(rename = "D", default = "default_degree")]
    pub degree_bound: usize,
    #[serde(default)]
    pub c: Option<Vec<String>>,
}

fn default_degree() -> usize {
    6
}

impl ContextFile {
    pub fn into_ctx(self) -> Result<Ctx, ContextError> {
        let lit = |v: &serde_json::Value| -> Result<CycNum, ContextError> {
            match v {
                serde_json::Value::String(s) => Ok(CycNum::parse(self.ord, s)?),
                serde_json::Value::Number(x) => {
                    let k = x.as_i64().ok_or_else(|| ContextError::Malformed(format!("non-integer entry {x}")))?;
                    Ok(CycNum::from_int(self.ord, k))
                }
                other => Err(ContextError::Malformed(format!("unexpected entry {other}"))),
            }
        };
        if self.ord == 0 {
            return Err(ContextError::Malformed("N must be positive".into()));
        }
        let q = self.q.iter().map(|r| r.iter().map(lit).collect::<Result<Vec<_>, _>>()).collect::<Result<Vec<_>, _>>()?;
        if self.tau.contains(&0) {
            return Err(ContextError::BadTau);
        }
        let tau = self.tau.iter().map(|t| t - 1).collect();
        if q.len() != self.n {
            return Err(ContextError::Shape);
        }
        let ctx = Ctx::new(self.ord, q, tau, self.degree_bound)?;
        match &self.c {
            None => Ok(ctx),
            Some(list) => {
                if list.len() != self.n {
                    return Err(ContextError::ParamCount(self.n, list.len()));
                }
                let mut c = Vec::with_capacity(self.n);
                for (i, s) in list.iter().enumerate() {
                    if s.trim() == "sym" {
                        c.push(Scalar::var(self.ord, self.n, i));
                    } else {
                        c.push(Scalar::constant(CycNum::parse(self.ord, s)?, self.n));
                    }
                }
                ctx.with_params(c)
            }
        }
    }
}

pub fn parse_context(json: &str) -> Result<Ctx, ContextError> {
    let file: ContextFile = serde_json::from_str(json).map_err(|e| ContextError::Malformed(e.to_string()))?;
    file.into_ctx()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn a2(ord: u32) -> Ctx {
        Ctx::from_exponents(ord, &[vec![2, -1], vec![-1, 2]], vec![1, 0], 6).unwrap()
    }

    #[test]
    fn chi_examples() {
        let ctx = a2(5);
        let a1 = ctx.alpha(0);
        let a2w = ctx.alpha(1);
        assert_eq!(ctx.chi(&a1, &a2w), make_root(5, -1));
        assert!(ctx.chi(&ctx.zero_weight(), &a2w).is_one());
        let s = &a1 + &a2w;
        // direct product of the four factors
        let direct = &(&(&make_root(5, 2) * &make_root(5, -1)) * &make_root(5, -1)) * &make_root(5, 2);
        assert_eq!(ctx.chi(&s, &s), direct);
        assert_eq!(ctx.chi(&s, &s), make_root(5, 2));
    }

    #[test]
    fn chi_without_exponent_table_agrees() {
        let ctx = a2(7);
        let mut slow = ctx.clone();
        slow.qexp = None;
        for l in [[1, 0], [2, -3], [-1, 4]] {
            for m in [[0, 1], [3, 3], [-2, 1]] {
                let (l, m) = (Weight(l.to_vec()), Weight(m.to_vec()));
                assert_eq!(ctx.chi(&l, &m), slow.chi(&l, &m));
            }
        }
    }

    #[test]
    fn theta_and_lattice() {
        let ctx = a2(5);
        assert_eq!(ctx.theta(&ctx.alpha(0)), Weight(vec![0, -1]));
        assert!(ctx.theta(&ctx.zero_weight()).is_zero());
        assert!(ctx.in_lattice_theta(&Weight(vec![1, -1])));
        assert!(!ctx.in_lattice_theta(&ctx.alpha(0)));
        assert!(ctx.in_lattice_theta(&ctx.zero_weight()));
        let id = Ctx::from_exponents(5, &[vec![2, -1], vec![-1, 2]], vec![0, 1], 6).unwrap();
        assert_eq!(id.theta(&Weight(vec![2, 3])), Weight(vec![-2, -3]));
        assert!(id.theta_basis().is_empty());
        assert!(!id.in_lattice_theta(&Weight(vec![1, -1])));
    }

    #[test]
    fn validation_rejects_bad_contexts() {
        let bad_sym = Ctx::new(5, vec![vec![make_root(5, 2), make_root(5, 1)], vec![make_root(5, -1), make_root(5, 2)]], vec![0, 1], 6);
        assert_eq!(bad_sym.unwrap_err(), ContextError::NotSymmetric(1, 2));
        let bad_tau = Ctx::from_exponents(5, &[vec![2, -1], vec![-1, 2]], vec![1, 1], 6);
        assert_eq!(bad_tau.unwrap_err(), ContextError::BadTau);
        let not_inv = Ctx::from_exponents(5, &[vec![2, -1], vec![-1, 1]], vec![1, 0], 6);
        assert!(matches!(not_inv.unwrap_err(), ContextError::NotTauInvariant(_, _)));
    }

    #[test]
    fn context_json() {
        let ctx = parse_context(r#"{"n":2,"N":5,"q":[["z^2","z^4"],["z^-1","z^2"]],"tau":[2,1],"c":["sym","1+z"]}"#).unwrap();
        assert_eq!(ctx.degree_bound, 6);
        assert_eq!(ctx.tau, vec![1, 0]);
        assert!(ctx.c[0].as_constant().is_none());
        assert_eq!(ctx.c[1].as_constant().unwrap(), CycNum::parse(5, "1+z").unwrap());
        assert!(parse_context(r#"{"n":2,"N":5,"q":[["z"]],"tau":[1,2]}"#).is_err());
    }

    proptest! {
        #[test]
        fn chi_is_bimultiplicative(a in prop::collection::vec(-4i32..5, 3), b in prop::collection::vec(-4i32..5, 3), m in prop::collection::vec(-4i32..5, 3)) {
            let ctx = Ctx::from_exponents(12, &[vec![2, -1, 0], vec![-1, 2, -1], vec![0, -1, 2]], vec![2, 1, 0], 6).unwrap();
            let (a, b, m) = (Weight(a), Weight(b), Weight(m));
            prop_assert_eq!(ctx.chi(&(&a + &b), &m), &ctx.chi(&a, &m) * &ctx.chi(&b, &m));
            prop_assert_eq!(ctx.chi(&m, &(&a + &b)), &ctx.chi(&m, &a) * &ctx.chi(&m, &b));
        }

        #[test]
        fn theta_lattice_pairs_trivially_with_symmetrized(l in prop::collection::vec(-4i32..5, 3), m in prop::collection::vec(0i32..5, 3)) {
            let ctx = Ctx::from_exponents(12, &[vec![2, -1, 0], vec![-1, 2, -1], vec![0, -1, 2]], vec![2, 1, 0], 6).unwrap();
            let l = Weight(l);
            let lt = &l + &ctx.theta(&l);
            prop_assert!(ctx.in_lattice_theta(&lt));
            let m = Weight(m);
            let sym = &m + &ctx.tau_weight(&m);
            prop_assert!(ctx.chi(&lt, &sym).is_one());
        }
    }
}
