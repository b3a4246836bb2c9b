//! The quasi K-matrix Θ^θ = (ψ⁻¹ ⊗ id)(Θ) and the identities it satisfies:
//! the intertwiner property, the two coproduct formulas, and the weakly
//! quasitriangular structures on U(χ) and on B_c.
//!
//! Completed tensors are handled as truncated series indexed by the total
//! degree of the Θ-factors involved. Every check compares the components of a
//! leg-weight grading that are complete at the chosen truncation.

use std::collections::BTreeMap;
use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;

use crate::bicharacter::{Ctx, Weight};
use crate::coideal::Coideal;
use crate::double::{elem_terms, TermOut, expand_leg, map_leg, permute_legs, tensor_mul, tensor_of, AlgebraError, Elem, Tensor};
use crate::freealg::{degrees_of_height, Mono, Word};
use crate::heisenberg::condition_holds;
use crate::nichols::{PreNicholsPresentation, Quotient, QuotientMode};
use crate::scalars::{CycNum, Scalar};

#[derive(Debug, thiserror::Error)]
pub enum KMatrixError {
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error("the parameters violate the condition for a PBW-type coideal: {0}")]
    Condition(String),
}

/// A tensor-valued formal series truncated above a fixed index.
#[derive(Clone, Debug)]
pub struct Series {
    pub legs: usize,
    pub parts: Vec<Tensor>,
}

impl Series {
    fn finite(legs: usize, order: usize, t: Tensor) -> Series {
        let mut parts = vec![Tensor::zero(); order + 1];
        parts[0] = t;
        Series { legs, parts }
    }

    pub fn total(&self) -> Tensor {
        let mut out = Tensor::zero();
        for p in &self.parts {
            out.add_lin(p);
        }
        out
    }

    fn map(&self, legs: usize, mut f: impl FnMut(&Tensor) -> Result<Tensor, AlgebraError>) -> Result<Series, AlgebraError> {
        Ok(Series { legs, parts: self.parts.iter().map(&mut f).collect::<Result<_, _>>()? })
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct IdentityResult {
    pub name: String,
    pub passed: bool,
    /// Lowest grade at which the two sides differ.
    pub first_failing_grade: Option<i64>,
    pub mismatched_terms: usize,
}

/// One term Σ x·F_p ⊗ E_c of the canonical element in degree μ.
#[derive(Clone, Debug)]
struct DualTerm {
    mu: Weight,
    p: Word,
    c: Word,
    coef: Scalar,
}

#[derive(Clone, Debug, Serialize)]
pub struct QuasiKEntry {
    pub degree: Vec<i32>,
    pub f_word: Vec<usize>,
    pub e_word: Vec<usize>,
    pub coefficient: String,
    pub psi_inverse: Vec<TermOut>,
}

pub struct KMatrix {
    pub co: Coideal,
    /// Components of grade up to `degree` are compared.
    pub degree: usize,
    order: usize,
    terms: Vec<Vec<DualTerm>>,
    psi_inv: BTreeMap<Word, Elem>,
}

fn sign(h: usize) -> i64 {
    if h.is_multiple_of(2) {
        1
    } else {
        -1
    }
}

impl KMatrix {
    /// Builds Θ and Θ^θ up to one degree beyond `degree` over the Nichols quotient.
    pub fn new(ctx: Arc<Ctx>, degree: usize) -> Result<KMatrix, KMatrixError> {
        let order = degree + 1;
        let quot = Arc::new(Quotient::with_bound(ctx.clone(), QuotientMode::Nichols, degree + 3));
        let co = Coideal::new(quot.clone());
        let mut terms = Vec::new();
        let mut psi_inv = BTreeMap::new();
        for h in 0..=order {
            let mut level = Vec::new();
            for mu in degrees_of_height(ctx.n, h) {
                for (p, c, x) in quot.dual_pairs(&mu).map_err(AlgebraError::from)? {
                    level.push(DualTerm { mu: mu.clone(), p, c, coef: ctx.scalar(x.scale_int(sign(h))) });
                }
            }
            for t in &level {
                if !psi_inv.contains_key(&t.p) {
                    let f = co.double.alg.mono(&Word::empty(), &ctx.zero_weight(), &t.p)?;
                    psi_inv.insert(t.p.clone(), co.psi_inverse(&f)?);
                }
            }
            terms.push(level);
        }
        Ok(KMatrix { co, degree, order, terms, psi_inv })
    }

    /// As [`KMatrix::new`], after confirming the parameter condition for the given relations.
    pub fn checked(ctx: Arc<Ctx>, degree: usize, pres: &PreNicholsPresentation) -> Result<KMatrix, KMatrixError> {
        let cs = crate::heisenberg::condition_c(&ctx, pres).map_err(|e| KMatrixError::Condition(e.to_string()))?;
        if !condition_holds(&cs) {
            let shown: Vec<String> = cs.iter().map(|c| format!("{:?}", c)).collect();
            return Err(KMatrixError::Condition(shown.join("; ")));
        }
        KMatrix::new(ctx, degree)
    }

    pub fn ctx(&self) -> &Arc<Ctx> {
        self.co.ctx()
    }

    pub fn order(&self) -> usize {
        self.order
    }

    fn alg(&self) -> &crate::double::Algebra {
        &self.co.double.alg
    }

    fn one_mono(&self) -> Mono {
        Mono::one(self.ctx().n)
    }

    fn single(&self, m: &Mono) -> Elem {
        Elem::single(m.clone(), self.ctx().sc_one())
    }

    fn f_word(&self, p: &Word) -> Result<Elem, AlgebraError> {
        self.alg().mono(&Word::empty(), &self.ctx().zero_weight(), p)
    }

    fn e_word(&self, c: &Word) -> Result<Elem, AlgebraError> {
        self.alg().mono(c, &self.ctx().zero_weight(), &Word::empty())
    }

    /// Σ_μ over the stored dual terms of a product tensor built per term.
    fn series_of(
        &self,
        legs: usize,
        mut build: impl FnMut(&DualTerm) -> Result<Vec<Elem>, AlgebraError>,
    ) -> Result<Series, AlgebraError> {
        let mut parts = Vec::new();
        for level in &self.terms {
            let mut acc = Tensor::zero();
            for t in level {
                let legs_v = build(t)?;
                let refs: Vec<&Elem> = legs_v.iter().collect();
                acc.add_scaled(&tensor_of(&refs), &t.coef);
            }
            parts.push(acc);
        }
        Ok(Series { legs, parts })
    }

    /// Θ = Σ (−1)^{|μ|} F_μ ⊗ E_μ.
    pub fn theta(&self) -> Result<Series, AlgebraError> {
        self.series_of(2, |t| Ok(vec![self.f_word(&t.p)?, self.e_word(&t.c)?]))
    }

    /// Θ^θ = Σ (−1)^{|μ|} ψ⁻¹(F_μ) ⊗ E_μ.
    pub fn quasi_k(&self) -> Result<Series, AlgebraError> {
        self.series_of(2, |t| Ok(vec![self.psi_inv[&t.p].clone(), self.e_word(&t.c)?]))
    }

    pub fn quasi_k_entries(&self) -> Vec<QuasiKEntry> {
        let mut out = Vec::new();
        for level in &self.terms {
            for t in level {
                out.push(QuasiKEntry {
                    degree: t.mu.0.clone(),
                    f_word: t.p.to_external(),
                    e_word: t.c.to_external(),
                    coefficient: t.coef.to_string(),
                    psi_inverse: elem_terms(&self.psi_inv[&t.p]),
                });
            }
        }
        out
    }

    /// Applies ψ to the first leg of Θ^θ.
    pub fn psi_of_quasi_k(&self) -> Result<Series, AlgebraError> {
        let qk = self.quasi_k()?;
        qk.map(2, |t| map_leg(t, 0, |m| self.co.psi(&self.single(m))))
    }

    fn smul(&self, a: &Series, b: &Series) -> Result<Series, AlgebraError> {
        let legs = a.legs;
        let algs = vec![self.alg(); legs];
        let mut parts = vec![Tensor::zero(); self.order + 1];
        for (i, x) in a.parts.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.parts.iter().enumerate() {
                if i + j > self.order || y.is_zero() {
                    continue;
                }
                parts[i + j].add_lin(&tensor_mul(&algs, x, y)?);
            }
        }
        Ok(Series { legs, parts })
    }

    fn smul_all(&self, xs: &[&Series]) -> Result<Series, AlgebraError> {
        let mut acc = xs[0].clone();
        for x in &xs[1..] {
            acc = self.smul(&acc, x)?;
        }
        Ok(acc)
    }

    fn fin(&self, t: Tensor, legs: usize) -> Series {
        Series::finite(legs, self.order, t)
    }

    /// Puts the legs of a tensor at the given positions among `legs` legs, with 1 elsewhere.
    pub fn place(&self, t: &Tensor, pos: &[usize], legs: usize) -> Tensor {
        let mut out = Tensor::zero();
        for (v, c) in t.iter() {
            let mut w = vec![self.one_mono(); legs];
            for (j, &p) in pos.iter().enumerate() {
                w[p] = v[j].clone();
            }
            out.add_term(w, c.clone());
        }
        out
    }

    fn splace(&self, s: &Series, pos: &[usize], legs: usize) -> Series {
        Series { legs, parts: s.parts.iter().map(|t| self.place(t, pos, legs)).collect() }
    }

    fn weight(&self, m: &Mono) -> Weight {
        let n = self.ctx().n;
        &m.l.weight(n) - &m.r.weight(n)
    }

    fn kmul(&self, lam: &Weight, m: &Mono) -> (Mono, CycNum) {
        let x = self.alg().lmul_k(lam, &self.single(m));
        let (m2, c) = x.iter().next().expect("K times a monomial is a monomial");
        (m2.clone(), c.as_constant().expect("constant factor"))
    }

    /// A diagonal automorphism on legs (a, b): χ-factor and left K-multiplications
    /// determined by the leg weights (β, γ).
    fn diagonal(&self, t: &Tensor, a: usize, b: usize, f: impl Fn(&Weight, &Weight) -> (CycNum, Weight, Weight)) -> Tensor {
        let mut out = Tensor::zero();
        for (v, c) in t.iter() {
            let beta = self.weight(&v[a]);
            let gamma = self.weight(&v[b]);
            let (x, ka, kb) = f(&beta, &gamma);
            let (ma, xa) = self.kmul(&ka, &v[a]);
            let (mb, xb) = self.kmul(&kb, &v[b]);
            let mut w = v.clone();
            w[a] = ma;
            w[b] = mb;
            out.add_term(w, c.scale(&(&(&x * &xa) * &xb)));
        }
        out
    }

    /// ℛ⁽⁰⁾ on legs (a, b): χ(β,γ)(K_{−γ}·) ⊗ (K_{−β}·) on weights (β, γ).
    pub fn r0(&self, t: &Tensor, a: usize, b: usize) -> Tensor {
        let ctx = self.ctx().clone();
        self.diagonal(t, a, b, |beta, gamma| (ctx.chi(beta, gamma), -gamma, -beta))
    }

    /// 𝒦⁽⁰⁾,τ on legs (a, b): χ(β, γ−τγ)(K_{−γ+τγ}·) ⊗ (K_{−β+τβ}·).
    pub fn k0tau(&self, t: &Tensor, a: usize, b: usize) -> Tensor {
        let ctx = self.ctx().clone();
        self.diagonal(t, a, b, |beta, gamma| {
            let tg = ctx.tau_weight(gamma);
            let tb = ctx.tau_weight(beta);
            (ctx.chi(beta, &(gamma - &tg)), &tg - gamma, &tb - beta)
        })
    }

    pub fn sigma_leg(&self, t: &Tensor, leg: usize) -> Result<Tensor, AlgebraError> {
        map_leg(t, leg, |m| self.co.double.sigma_bar(&self.single(m)))
    }

    /// 𝒦⁽⁰⁾ = 𝒦⁽⁰⁾,τ ∘ (id ⊗ σ̄) on legs (a, b).
    pub fn k0(&self, t: &Tensor, a: usize, b: usize) -> Result<Tensor, AlgebraError> {
        Ok(self.k0tau(&self.sigma_leg(t, b)?, a, b))
    }

    pub fn delta_leg(&self, t: &Tensor, leg: usize) -> Result<Tensor, AlgebraError> {
        expand_leg(t, leg, |m| self.co.double.coproduct(&self.single(m)))
    }

    fn compare(&self, name: String, lhs: &Tensor, rhs: &Tensor, grade: impl Fn(&[Mono]) -> i64, cutoff: i64) -> IdentityResult {
        let diff = lhs.minus(rhs);
        let bad: Vec<i64> = diff.keys().map(|v| grade(v)).filter(|&g| g <= cutoff).collect();
        IdentityResult {
            name,
            passed: bad.is_empty(),
            first_failing_grade: bad.iter().min().copied(),
            mismatched_terms: bad.len(),
        }
    }

    fn ht(&self, m: &Mono) -> i64 {
        self.weight(m).height()
    }

    fn cut(&self) -> i64 {
        self.degree as i64
    }

    fn gens_u(&self) -> Vec<(String, Elem)> {
        let ctx = self.ctx().clone();
        let d = &self.co.double;
        let mut out = Vec::new();
        for i in 0..ctx.n {
            out.push((format!("E{}", i + 1), d.e(i)));
            out.push((format!("F{}", i + 1), d.f(i)));
            out.push((format!("K{}", i + 1), d.ki(i, 1)));
        }
        out
    }

    fn gens_b(&self) -> Vec<(String, Elem)> {
        let ctx = self.ctx().clone();
        let mut out: Vec<(String, Elem)> = (0..ctx.n).map(|i| (format!("B{}", i + 1), self.co.b(i))).collect();
        for i in ctx.theta_basis() {
            let lam = &ctx.alpha(i) - &ctx.alpha(ctx.tau[i]);
            out.push((format!("K{:?}", lam), self.alg().k(&lam)));
        }
        out
    }

    fn one(&self) -> Elem {
        self.alg().one()
    }

    // ----- quasi R-matrix -----

    /// (E_j⊗1 + K_j⊗E_j)Θ = Θ(E_j⊗1 + K_j⁻¹⊗E_j) and (F_j⊗K_j⁻¹ + 1⊗F_j)Θ = Θ(F_j⊗K_j + 1⊗F_j).
    pub fn check_theta_commutation(&self) -> Result<Vec<IdentityResult>, AlgebraError> {
        let d = &self.co.double;
        let theta = self.theta()?;
        let one = self.one();
        let mut out = Vec::new();
        for j in 0..self.ctx().n {
            let (e, f, k, ki) = (d.e(j), d.f(j), d.ki(j, 1), d.ki(j, -1));
            let l1 = tensor_of(&[&e, &one]).plus(&tensor_of(&[&k, &e]));
            let r1 = tensor_of(&[&e, &one]).plus(&tensor_of(&[&ki, &e]));
            let l2 = tensor_of(&[&f, &ki]).plus(&tensor_of(&[&one, &f]));
            let r2 = tensor_of(&[&f, &k]).plus(&tensor_of(&[&one, &f]));
            for (name, l, r) in [(format!("EF-Theta-1[{}]", j + 1), l1, r1), (format!("EF-Theta-2[{}]", j + 1), l2, r2)] {
                let lhs = self.smul(&self.fin(l, 2), &theta)?.total();
                let rhs = self.smul(&theta, &self.fin(r, 2))?.total();
                out.push(self.compare(name, &lhs, &rhs, |v| self.ht(&v[1]), self.cut()));
            }
        }
        Ok(out)
    }

    /// (Δ⊗id)Θ_μ = Σ_{λ+ν=μ} F_λ ⊗ F_νK_λ⁻¹ ⊗ E_νE_λ and (id⊗Δ)Θ_μ = Σ_{λ+ν=μ} F_λF_ν ⊗ E_λK_ν ⊗ E_ν,
    /// signs included, for every height up to the degree bound.
    pub fn check_theta_coproduct(&self) -> Result<Vec<IdentityResult>, AlgebraError> {
        let alg = self.alg();
        let theta = self.theta()?;
        let (mut ok1, mut ok2) = (true, true);
        for h in 0..=self.degree {
            let mut rhs1 = Tensor::zero();
            let mut rhs2 = Tensor::zero();
            for hl in 0..=h {
                for a in &self.terms[hl] {
                    for b in &self.terms[h - hl] {
                        let c = a.coef.clone() * b.coef.clone();
                        let (fa, fb) = (self.f_word(&a.p)?, self.f_word(&b.p)?);
                        let (ea, eb) = (self.e_word(&a.c)?, self.e_word(&b.c)?);
                        let fk = alg.mul(&fb, &alg.k(&-&a.mu))?;
                        let ee = alg.mul(&eb, &ea)?;
                        rhs1.add_scaled(&tensor_of(&[&fa, &fk, &ee]), &c);
                        let ff = alg.mul(&fa, &fb)?;
                        let ek = alg.mul(&ea, &alg.k(&b.mu))?;
                        rhs2.add_scaled(&tensor_of(&[&ff, &ek, &eb]), &c);
                    }
                }
            }
            ok1 &= self.delta_leg(&theta.parts[h], 0)? == rhs1;
            ok2 &= self.delta_leg(&theta.parts[h], 1)? == rhs2;
        }
        Ok(vec![exact("coproduct (Δ⊗id)Θ", ok1), exact("coproduct (id⊗Δ)Θ", ok2)])
    }

    /// Δ∘σ̄ = (σ̄⊗id)∘ℛ⁽⁰⁾₂₁∘(id⊗σ̄)∘Ad(Θ₂₁)∘ℛ⁽⁰⁾∘Δ on E_i, F_i, K_i, checked as
    /// Δ(σ̄x)·Φ(Θ₂₁) = Φ(Θ₂₁)·Φ(ℛ⁽⁰⁾Δx) with Φ = (σ̄⊗id)∘ℛ⁽⁰⁾₂₁∘(id⊗σ̄).
    pub fn check_sigma_coproduct(&self) -> Result<Vec<IdentityResult>, AlgebraError> {
        let d = &self.co.double;
        let phi = |t: &Tensor| -> Result<Tensor, AlgebraError> { self.sigma_leg(&self.r0(&self.sigma_leg(t, 1)?, 1, 0), 0) };
        let pt = self.r1()?.map(2, |t| phi(t))?;
        let mut out = Vec::new();
        for (name, x) in self.gens_u() {
            let lhs = self.smul(&self.fin(d.coproduct(&d.sigma_bar(&x)?)?, 2), &pt)?.total();
            let z = phi(&self.r0(&d.coproduct(&x)?, 0, 1))?;
            let rhs = self.smul(&pt, &self.fin(z, 2))?.total();
            out.push(self.compare(format!("sigma-coproduct[{}]", name), &lhs, &rhs, |v| self.ht(&v[1]), self.cut()));
        }
        Ok(out)
    }

    // ----- quasi K-matrix -----

    /// Δ(B_i)Θ^θ = Θ^θ(B_i⊗K_i + c_{τi}q_{iτi}K_{τi}⁻¹K_i⊗E_{τi}K_i + 1⊗F_i) and Δ(K_λ)Θ^θ = Θ^θΔ(K_λ).
    pub fn check_intertwiner(&self) -> Result<Vec<IdentityResult>, AlgebraError> {
        let ctx = self.ctx().clone();
        let d = &self.co.double;
        let qk = self.quasi_k()?;
        let one = self.one();
        let mut out = Vec::new();
        for i in 0..ctx.n {
            let t = ctx.tau[i];
            let b = self.co.b(i);
            let lhs = self.smul(&self.fin(d.coproduct(&b)?, 2), &qk)?.total();
            let kk = self.alg().k(&(&ctx.alpha(i) - &ctx.alpha(t)));
            let ek = self.alg().mul(&d.e(t), &d.ki(i, 1))?;
            let x = tensor_of(&[&b, &d.ki(i, 1)])
                .plus(&tensor_of(&[&kk, &ek]).scale(&ctx.c[t].scale(ctx.q(i, t))))
                .plus(&tensor_of(&[&one, &d.f(i)]));
            let rhs = self.smul(&qk, &self.fin(x, 2))?.total();
            out.push(self.compare(format!("intertwiner[B{}]", i + 1), &lhs, &rhs, |v| self.ht(&v[1]), self.cut()));
        }
        for (name, kl) in self.gens_b().into_iter().filter(|(n, _)| n.starts_with('K')) {
            let dk = self.fin(d.coproduct(&kl)?, 2);
            let lhs = self.smul(&dk, &qk)?.total();
            let rhs = self.smul(&qk, &dk)?.total();
            out.push(self.compare(format!("intertwiner[{}]", name), &lhs, &rhs, |v| self.ht(&v[1]), self.cut()));
        }
        Ok(out)
    }

    /// Θ^θ_{12}, Θ^{σ̄}_{K23}, Θ^θ_{1K3} and the remaining three-leg factors.
    fn three_leg_factors(&self) -> Result<BTreeMap<&'static str, Series>, AlgebraError> {
        let ctx = self.ctx().clone();
        let d = &self.co.double;
        let mut m = BTreeMap::new();
        let qk = self.quasi_k()?;
        m.insert("Th12", self.splace(&qk, &[0, 1], 3));
        m.insert("T23", self.splace(&self.theta()?, &[1, 2], 3));
        m.insert(
            "SigK23",
            self.series_of(3, |t| {
                let k = self.alg().k(&(&t.mu - &ctx.tau_weight(&t.mu)));
                Ok(vec![k, d.sigma_bar(&self.f_word(&t.p)?)?, self.e_word(&t.c)?])
            })?,
        );
        m.insert(
            "Th1K3",
            self.series_of(3, |t| Ok(vec![self.psi_inv[&t.p].clone(), self.alg().k(&t.mu), self.e_word(&t.c)?]))?,
        );
        m.insert(
            "Th1K3minus",
            self.series_of(3, |t| Ok(vec![self.psi_inv[&t.p].clone(), self.alg().k(&-&t.mu), self.e_word(&t.c)?]))?,
        );
        m.insert(
            "SigKK32",
            self.series_of(3, |t| {
                let k = self.alg().k(&(&t.mu - &ctx.tau_weight(&t.mu)));
                let ek = self.alg().mul(&self.e_word(&t.c)?, &self.alg().k(&-ctx.tau_weight(&t.mu)))?;
                let ks = self.alg().mul(&self.alg().k(&-&t.mu), &d.sigma_bar(&self.f_word(&t.p)?)?)?;
                Ok(vec![k, ek, ks])
            })?,
        );
        Ok(m)
    }

    /// (id⊗Δ)(Θ^θ) = Θ^θ_{12}Θ^{σ̄}_{K23}Θ^θ_{1K3} and (Δ⊗id)(Θ^θ) = Θ_{23}Θ^{θ−}_{1K3}Θ^{σ̄K}_{K32}.
    pub fn check_coproduct_identities(&self) -> Result<Vec<IdentityResult>, AlgebraError> {
        let f = self.three_leg_factors()?;
        let qk = self.quasi_k()?.total();
        let lhs1 = self.delta_leg(&qk, 1)?;
        let rhs1 = self.smul_all(&[&f["Th12"], &f["SigK23"], &f["Th1K3"]])?.total();
        let lhs2 = self.delta_leg(&qk, 0)?;
        let rhs2 = self.smul_all(&[&f["T23"], &f["Th1K3minus"], &f["SigKK32"]])?.total();
        Ok(vec![
            self.compare("coproduct (id⊗Δ)Θ^θ".into(), &lhs1, &rhs1, |v| self.ht(&v[1]) + self.ht(&v[2]), self.cut()),
            self.compare("coproduct (Δ⊗id)Θ^θ".into(), &lhs2, &rhs2, |v| self.ht(&v[2]), self.cut()),
        ])
    }

    // ----- weak quasitriangularity of U(χ) -----

    fn r1(&self) -> Result<Series, AlgebraError> {
        let th = self.theta()?;
        th.map(2, |t| Ok(permute_legs(t, &[1, 0])))
    }

    fn r1_at(&self, a: usize, b: usize) -> Result<Series, AlgebraError> {
        Ok(self.splace(&self.r1()?, &[a, b], 3))
    }

    fn k1_at(&self, a: usize, b: usize) -> Result<Series, AlgebraError> {
        Ok(self.splace(&self.quasi_k()?, &[a, b], 3))
    }

    /// Generator inputs x⊗1, 1⊗x (or the three-leg analogues).
    fn placed_gens(&self, gens: &[(String, Elem)], legs: usize, restrict_first: Option<&[(String, Elem)]>) -> Vec<(String, Tensor)> {
        let one = self.one();
        let mut out = Vec::new();
        for leg in 0..legs {
            let list = match (leg, restrict_first) {
                (0, Some(first)) => first,
                _ => gens,
            };
            for (name, g) in list {
                let mut legs_v: Vec<&Elem> = vec![&one; legs];
                legs_v[leg] = g;
                out.push((format!("{}@{}", name, leg + 1), tensor_of(&legs_v)));
            }
        }
        out
    }

    pub fn check_weak_quasitriangular_hopf(&self) -> Result<Vec<IdentityResult>, AlgebraError> {
        let d = &self.co.double;
        let r1 = self.r1()?;
        let mut out = Vec::new();
        let fin = |t: Tensor| Ok::<bool, AlgebraError>(t.is_zero());
        // RR1 on generators, as R⁽¹⁾·ℛ⁽⁰⁾(Δx) = Δ^op(x)·R⁽¹⁾
        for (name, x) in self.gens_u() {
            let dx = d.coproduct(&x)?;
            let lhs = self.smul(&r1, &self.fin(self.r0(&dx, 0, 1), 2))?.total();
            let rhs = self.smul(&self.fin(permute_legs(&dx, &[1, 0]), 2), &r1)?.total();
            out.push(self.compare(format!("RR1[{}]", name), &lhs, &rhs, |v| self.ht(&v[0]), self.cut()));
        }
        // RR2, RR3 on generators of U⊗U
        let mut rr2 = true;
        let mut rr3 = true;
        for (_, y) in self.placed_gens(&self.gens_u(), 2, None) {
            let l2 = self.delta_leg(&self.r0(&y, 0, 1), 0)?;
            let r2 = self.r0(&self.r0(&self.delta_leg(&y, 0)?, 1, 2), 0, 2);
            rr2 &= fin(l2.minus(&r2))?;
            let l3 = self.delta_leg(&self.r0(&y, 0, 1), 1)?;
            let r3 = self.r0(&self.r0(&self.delta_leg(&y, 1)?, 0, 1), 0, 2);
            rr3 &= fin(l3.minus(&r3))?;
        }
        out.push(exact("RR2", rr2));
        out.push(exact("RR3", rr3));
        // RR4, RR5
        let r1t = r1.total();
        let lhs4 = self.delta_leg(&r1t, 0)?;
        let r23 = self.r1_at(1, 2)?;
        let rhs4 = self.smul(&self.r1_at(0, 2)?, &r23.map(3, |t| Ok(self.r0(t, 0, 2)))?)?.total();
        out.push(self.compare("RR4".into(), &lhs4, &rhs4, |v| -self.ht(&v[2]), self.cut()));
        let lhs5 = self.delta_leg(&r1t, 1)?;
        let r12 = self.r1_at(0, 1)?;
        let rhs5 = self.smul(&self.r1_at(0, 2)?, &r12.map(3, |t| Ok(self.r0(t, 0, 2)))?)?.total();
        out.push(self.compare("RR5".into(), &lhs5, &rhs5, |v| self.ht(&v[0]), self.cut()));
        Ok(out)
    }

    /// Quantum Yang–Baxter equation for ℛ = Ad(R⁽¹⁾)∘ℛ⁽⁰⁾: the ℛ⁽⁰⁾-composites agree on
    /// generators and R⁽¹⁾₁₂ℛ⁽⁰⁾₁₂(R⁽¹⁾₁₃)ℛ⁽⁰⁾₁₂ℛ⁽⁰⁾₁₃(R⁽¹⁾₂₃) equals R⁽¹⁾₂₃ℛ⁽⁰⁾₂₃(R⁽¹⁾₁₃)ℛ⁽⁰⁾₂₃ℛ⁽⁰⁾₁₃(R⁽¹⁾₁₂).
    pub fn check_yang_baxter(&self) -> Result<Vec<IdentityResult>, AlgebraError> {
        let mut auto = true;
        for (_, y) in self.placed_gens(&self.gens_u(), 3, None) {
            let l = self.r0(&self.r0(&self.r0(&y, 1, 2), 0, 2), 0, 1);
            let r = self.r0(&self.r0(&self.r0(&y, 0, 1), 0, 2), 1, 2);
            auto &= l == r;
        }
        let (r12, r13, r23) = (self.r1_at(0, 1)?, self.r1_at(0, 2)?, self.r1_at(1, 2)?);
        let x = self.smul_all(&[
            &r12,
            &r13.map(3, |t| Ok(self.r0(t, 0, 1)))?,
            &r23.map(3, |t| Ok(self.r0(&self.r0(t, 0, 2), 0, 1)))?,
        ])?;
        let y = self.smul_all(&[
            &r23,
            &r13.map(3, |t| Ok(self.r0(t, 1, 2)))?,
            &r12.map(3, |t| Ok(self.r0(&self.r0(t, 0, 2), 1, 2)))?,
        ])?;
        Ok(vec![
            exact("Yang-Baxter (R0 part)", auto),
            self.compare("Yang-Baxter".into(), &x.total(), &y.total(), |v| self.ht(&v[0]) - self.ht(&v[2]), self.cut()),
        ])
    }

    // ----- weak quasitriangularity of B_c -----

    pub fn check_weak_quasitriangular_coideal(&self) -> Result<Vec<IdentityResult>, AlgebraError> {
        let d = &self.co.double;
        let qk = self.quasi_k()?;
        let mut out = Vec::new();
        // wqKK1 on generators of B_c: Θ^θ·𝒦⁽⁰⁾(Δb) = Δ(b)·Θ^θ
        for (name, b) in self.gens_b() {
            let db = d.coproduct(&b)?;
            let lhs = self.smul(&qk, &self.fin(self.k0(&db, 0, 1)?, 2))?.total();
            let rhs = self.smul(&self.fin(db, 2), &qk)?.total();
            out.push(self.compare(format!("wqKK1[{}]", name), &lhs, &rhs, |v| self.ht(&v[1]), self.cut()));
        }
        let inputs = self.placed_gens(&self.gens_u(), 2, Some(&self.gens_b()));
        // wqKK2 on generators of B⊗U
        let mut ok2 = true;
        for (_, y) in &inputs {
            let lhs = self.delta_leg(&self.k0(y, 0, 1)?, 0)?;
            let rhs = self.r0(&self.k0(&self.r0(&self.delta_leg(y, 0)?, 1, 2), 0, 2)?, 2, 1);
            ok2 &= lhs == rhs;
        }
        out.push(exact("wqKK2", ok2));
        // wqKK3: (id⊗Δ)𝒦⁽⁰⁾(y)·A(R⁽¹⁾₂₃) = A(R⁽¹⁾₂₃)·A(ℛ⁽⁰⁾₂₃(id⊗Δ)(y)), A = 𝒦⁽⁰⁾₁₂ℛ⁽⁰⁾₃₂𝒦⁽⁰⁾₁₃
        let a = |t: &Tensor| -> Result<Tensor, AlgebraError> { self.k0(&self.r0(&self.k0(t, 0, 2)?, 2, 1), 0, 1) };
        let ar23 = self.r1_at(1, 2)?.map(3, |t| a(t))?;
        for (name, y) in &inputs {
            let lhs = self.smul(&self.fin(self.delta_leg(&self.k0(y, 0, 1)?, 1)?, 3), &ar23)?.total();
            let z = a(&self.r0(&self.delta_leg(y, 1)?, 1, 2))?;
            let rhs = self.smul(&ar23, &self.fin(z, 3))?.total();
            out.push(self.compare(format!("wqKK3[{}]", name), &lhs, &rhs, |v| self.ht(&v[2]), self.cut()));
        }
        // wqKK4: (Δ_B⊗id)(K⁽¹⁾) = R⁽¹⁾₃₂·ℛ⁽⁰⁾₃₂(K⁽¹⁾₁₃)·ℛ⁽⁰⁾₃₂𝒦⁽⁰⁾₁₃(R⁽¹⁾₂₃)
        let qkt = qk.total();
        let lhs4 = self.delta_leg(&qkt, 0)?;
        let rhs4 = self.smul_all(&[
            &self.r1_at(2, 1)?,
            &self.k1_at(0, 2)?.map(3, |t| Ok(self.r0(t, 2, 1)))?,
            &self.r1_at(1, 2)?.map(3, |t| Ok(self.r0(&self.k0(t, 0, 2)?, 2, 1)))?,
        ])?;
        out.push(self.compare("wqKK4".into(), &lhs4, &rhs4.total(), |v| self.ht(&v[2]), self.cut()));
        // wqKK5: (id⊗Δ)(K⁽¹⁾) = K⁽¹⁾₁₂·𝒦⁽⁰⁾₁₂(R⁽¹⁾₃₂)·𝒦⁽⁰⁾₁₂ℛ⁽⁰⁾₃₂(K⁽¹⁾₁₃)
        let lhs5 = self.delta_leg(&qkt, 1)?;
        let rhs5 = self.smul_all(&[
            &self.k1_at(0, 1)?,
            &self.r1_at(2, 1)?.map(3, |t| self.k0(t, 0, 1))?,
            &self.k1_at(0, 2)?.map(3, |t| self.k0(&self.r0(t, 2, 1), 0, 1))?,
        ])?;
        out.push(self.compare("wqKK5".into(), &lhs5, &rhs5.total(), |v| self.ht(&v[1]) + self.ht(&v[2]), self.cut()));
        Ok(out)
    }

    /// Reflection equation for 𝒦 = Ad(K⁽¹⁾)∘𝒦⁽⁰⁾ and ℛ: the diagonal composites agree on
    /// generators of B⊗U⊗U, and the two conjugating elements coincide.
    pub fn check_reflection(&self) -> Result<Vec<IdentityResult>, AlgebraError> {
        let mut auto = true;
        let a_l = |t: &Tensor| -> Result<Tensor, AlgebraError> {
            self.k0(&self.r0(&self.k0(&self.r0(t, 1, 2), 0, 2)?, 2, 1), 0, 1)
        };
        let a_r = |t: &Tensor| -> Result<Tensor, AlgebraError> {
            Ok(self.r0(&self.k0(&self.r0(&self.k0(t, 0, 1)?, 1, 2), 0, 2)?, 2, 1))
        };
        for (_, y) in self.placed_gens(&self.gens_u(), 3, Some(&self.gens_b())) {
            auto &= a_l(&y)? == a_r(&y)?;
        }
        let (k12, k13) = (self.k1_at(0, 1)?, self.k1_at(0, 2)?);
        let (r32, r23) = (self.r1_at(2, 1)?, self.r1_at(1, 2)?);
        let zl = self.smul_all(&[
            &k12,
            &r32.map(3, |t| self.k0(t, 0, 1))?,
            &k13.map(3, |t| self.k0(&self.r0(t, 2, 1), 0, 1))?,
            &r23.map(3, |t| self.k0(&self.r0(&self.k0(t, 0, 2)?, 2, 1), 0, 1))?,
        ])?;
        let zr = self.smul_all(&[
            &r32,
            &k13.map(3, |t| Ok(self.r0(t, 2, 1)))?,
            &r23.map(3, |t| Ok(self.r0(&self.k0(t, 0, 2)?, 2, 1)))?,
            &k12.map(3, |t| Ok(self.r0(&self.k0(&self.r0(t, 1, 2), 0, 2)?, 2, 1)))?,
        ])?;
        Ok(vec![
            exact("reflection (diagonal part)", auto),
            self.compare("reflection".into(), &zl.total(), &zr.total(), |v| self.ht(&v[1]) + 2 * self.ht(&v[2]), self.cut()),
        ])
    }

    /// Every identity suite, run in parallel.
    pub fn verify_all(&self) -> Result<Vec<IdentityResult>, AlgebraError> {
        type Check<'a> = Box<dyn Fn() -> Result<Vec<IdentityResult>, AlgebraError> + Send + Sync + 'a>;
        let checks: Vec<Check> = vec![
            Box::new(|| self.check_theta_commutation()),
            Box::new(|| self.check_theta_coproduct()),
            Box::new(|| self.check_sigma_coproduct()),
            Box::new(|| self.check_intertwiner()),
            Box::new(|| self.check_coproduct_identities()),
            Box::new(|| self.check_weak_quasitriangular_hopf()),
            Box::new(|| self.check_yang_baxter()),
            Box::new(|| self.check_weak_quasitriangular_coideal()),
            Box::new(|| self.check_reflection()),
        ];
        let results: Vec<Result<Vec<IdentityResult>, AlgebraError>> = checks.par_iter().map(|c| c()).collect();
        let mut out = Vec::new();
        for r in results {
            out.extend(r?);
        }
        Ok(out)
    }
}

fn exact(name: &str, passed: bool) -> IdentityResult {
    IdentityResult { name: name.into(), passed, first_failing_grade: if passed { None } else { Some(0) }, mismatched_terms: usize::from(!passed) }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::examples;

    fn sl3(d: usize) -> KMatrix {
        let ctx = examples::sl3(5, 4).with_numeric_params(&[CycNum::from_int(5, 2), CycNum::from_int(5, 2)]).unwrap();
        KMatrix::new(Arc::new(ctx), d).unwrap()
    }

    fn rank1(d: usize) -> KMatrix {
        let ctx = examples::rank1(7, 4).with_numeric_params(&[CycNum::from_int(7, 3)]).unwrap();
        KMatrix::new(Arc::new(ctx), d).unwrap()
    }

    fn all_pass(rs: &[IdentityResult]) {
        for r in rs {
            assert!(r.passed, "{:?}", r);
        }
    }

    #[test]
    fn quasi_k_low_degrees() {
        let km = rank1(2);
        let ctx = km.ctx().clone();
        let qk = km.quasi_k().unwrap();
        let one = km.one();
        assert_eq!(qk.parts[0], tensor_of(&[&one, &one]));
        let e = km.co.double.e(0);
        assert_eq!(qk.parts[1], tensor_of(&[&km.co.b(0), &e]).neg());
        // height two: ψ⁻¹(F₁²) = B₁² − c₁q₁₁, dual to E₁²/(1 + q₁₁)
        let b2 = km.alg().mul(&km.co.b(0), &km.co.b(0)).unwrap();
        let q11 = ctx.q(0, 0).clone();
        let psi_inv = b2.minus(&km.alg().scalar(ctx.c[0].scale(&q11)));
        let e2 = km.alg().mul(&e, &e).unwrap();
        let inv = (&CycNum::one(7) + &q11).inverse().unwrap();
        assert_eq!(qk.parts[2], tensor_of(&[&psi_inv, &e2]).scale(&ctx.scalar(inv)));
    }

    #[test]
    fn psi_maps_quasi_k_to_theta() {
        let km = sl3(3);
        let a = km.psi_of_quasi_k().unwrap().total();
        assert_eq!(a, km.theta().unwrap().total());
    }

    #[test]
    fn r0_and_k0tau_examples() {
        let km = sl3(2);
        let d = &km.co.double;
        let one = km.one();
        for i in 0..2 {
            let e = d.e(i);
            assert_eq!(km.r0(&tensor_of(&[&e, &one]), 0, 1), tensor_of(&[&e, &d.ki(i, -1)]));
            let f = d.f(i);
            assert_eq!(km.r0(&tensor_of(&[&one, &f]), 0, 1), tensor_of(&[&d.ki(i, 1), &f]));
            let t = km.ctx().tau[i];
            let k = km.alg().k(&(&km.ctx().alpha(t) - &km.ctx().alpha(i)));
            assert_eq!(km.k0tau(&tensor_of(&[&one, &e]), 0, 1), tensor_of(&[&k, &e]));
        }
        let h = tensor_of(&[&km.alg().k(&Weight(vec![2, -1])), &km.alg().k(&Weight(vec![0, 3]))]);
        assert_eq!(km.r0(&h, 0, 1), h);
        assert_eq!(km.k0tau(&h, 0, 1), h);
    }

    #[test]
    fn diagonal_automorphisms_are_multiplicative() {
        let km = sl3(2);
        let d = &km.co.double;
        let algs = [km.alg(), km.alg()];
        let xs = [
            tensor_of(&[&d.e(0), &d.f(1)]),
            tensor_of(&[&km.alg().mul(&d.f(0), &d.e(1)).unwrap(), &d.ki(1, 1)]),
            tensor_of(&[&d.f(1), &km.alg().mul(&d.e(0), &d.e(1)).unwrap()]),
        ];
        for a in &xs {
            for b in &xs {
                let ab = tensor_mul(&algs, a, b).unwrap();
                let r = tensor_mul(&algs, &km.r0(a, 0, 1), &km.r0(b, 0, 1)).unwrap();
                assert_eq!(km.r0(&ab, 0, 1), r);
                let k = tensor_mul(&algs, &km.k0tau(a, 0, 1), &km.k0tau(b, 0, 1)).unwrap();
                assert_eq!(km.k0tau(&ab, 0, 1), k);
            }
        }
    }

    #[test]
    fn k0tau_coproduct_compatibility() {
        let km = sl3(2);
        for (_, y) in km.placed_gens(&km.gens_u(), 2, None) {
            let l1 = km.delta_leg(&km.k0tau(&y, 0, 1), 0).unwrap();
            let r1 = km.k0tau(&km.k0tau(&km.delta_leg(&y, 0).unwrap(), 0, 2), 1, 2);
            assert_eq!(l1, r1);
            let l2 = km.delta_leg(&km.k0tau(&y, 0, 1), 1).unwrap();
            let r2 = km.k0tau(&km.k0tau(&km.delta_leg(&y, 1).unwrap(), 0, 2), 0, 1);
            assert_eq!(l2, r2);
        }
    }

    #[test]
    fn rank1_suites() {
        let km = rank1(3);
        all_pass(&km.check_theta_commutation().unwrap());
        all_pass(&km.check_theta_coproduct().unwrap());
        all_pass(&km.check_sigma_coproduct().unwrap());
        all_pass(&km.check_intertwiner().unwrap());
        all_pass(&km.check_coproduct_identities().unwrap());
    }

    #[test]
    fn sl3_intertwiner_and_coproducts() {
        let km = sl3(3);
        all_pass(&km.check_theta_commutation().unwrap());
        all_pass(&km.check_theta_coproduct().unwrap());
        all_pass(&km.check_sigma_coproduct().unwrap());
        all_pass(&km.check_intertwiner().unwrap());
        all_pass(&km.check_coproduct_identities().unwrap());
    }

    #[test]
    fn sl3_weak_quasitriangularity() {
        let km = sl3(3);
        all_pass(&km.check_weak_quasitriangular_hopf().unwrap());
        all_pass(&km.check_weak_quasitriangular_coideal().unwrap());
        all_pass(&km.check_yang_baxter().unwrap());
        all_pass(&km.check_reflection().unwrap());
    }

    #[test]
    fn perturbed_quasi_k_breaks_intertwiner() {
        let mut km = sl3(2);
        let key = km.terms[2][0].p.clone();
        let x = km.psi_inv[&key].plus(&km.alg().k(&Weight(vec![-1, 1])));
        km.psi_inv.insert(key, x);
        assert!(km.check_intertwiner().unwrap().iter().any(|r| !r.passed));
    }
}
