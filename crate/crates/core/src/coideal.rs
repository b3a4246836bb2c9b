//! The coideal subalgebra B_c, the projection ψ onto the partial bosonization
//! H_θ⋉U⁻, the two star products on H_θ⋉U⁻ and the twisted coaction Δ⋆.
//!
//! Elements of H_θ⋉U⁻ are stored as [`Elem`]s in E·K·F order with empty
//! E-part, i.e. as combinations of K_λF_y with λ ∈ ℤⁿ_θ.

use std::collections::HashMap;
use std::sync::Arc;

use parking_lot::Mutex;

use crate::bicharacter::{Ctx, Weight};
use crate::double::{a_mu_word, tensor_of, Algebra, AlgebraError, Double, Elem, Kind, Tensor};
use crate::freealg::{partial_left_word, partial_right_word, FreeElement, Mono, Word};
use crate::heisenberg::{condition_c, condition_holds, ConditionError, Constraint};
use crate::nichols::{PreNicholsPresentation, Quotient, QuotientMode};
use crate::scalars::Scalar;

/// Generators of U⁺⋊H acting on H⋉U⁻ from either side.
#[derive(Clone, Debug)]
enum Act {
    E(usize),
    K(Weight),
}

pub struct Coideal {
    pub double: Double,
    rev: Algebra,
    b_words: Mutex<HashMap<Word, Elem>>,
}

impl Coideal {
    pub fn new(quot: Arc<Quotient>) -> Coideal {
        Coideal {
            rev: Algebra::new(Kind::UChiRev, quot.clone()),
            double: Double::new(quot),
            b_words: Mutex::new(HashMap::new()),
        }
    }

    pub fn ctx(&self) -> &Arc<Ctx> {
        self.double.ctx()
    }

    fn alg(&self) -> &Algebra {
        &self.double.alg
    }

    /// The constraints of the parameter condition for the given defining relations.
    pub fn constraints(&self, pres: &PreNicholsPresentation) -> Result<Vec<Constraint>, ConditionError> {
        condition_c(self.ctx(), pres)
    }

    pub fn condition_holds(&self, pres: &PreNicholsPresentation) -> Result<bool, ConditionError> {
        Ok(condition_holds(&self.constraints(pres)?))
    }

    pub fn b(&self, i: usize) -> Elem {
        self.double.b_gen(i)
    }

    /// B_w = B_{w_1}⋯B_{w_k}.
    pub fn b_word(&self, w: &Word) -> Result<Elem, AlgebraError> {
        if let Some(x) = self.b_words.lock().get(w) {
            return Ok(x.clone());
        }
        let x = if w.is_empty() {
            self.alg().one()
        } else {
            let rest = Word(w.0[1..].to_vec());
            let tail = self.b_word(&rest)?;
            self.alg().mul(&self.b(w.0[0] as usize), &tail)?
        };
        self.b_words.lock().insert(w.clone(), x.clone());
        Ok(x)
    }

    /// Evaluates a polynomial with left H_θ-coefficients at the B_i. The
    /// polynomial is stored like a star element: the term K_λF_w stands for K_λ x_w.
    pub fn eval_at_b(&self, r: &Elem) -> Result<Elem, AlgebraError> {
        let mut out = Elem::zero();
        for (m, c) in r.iter() {
            let x = self.alg().mul(&self.alg().k(&m.k), &self.b_word(&m.r)?)?;
            out.add_scaled(&x, c);
        }
        Ok(out)
    }

    /// K_λ F_w as an element, with F_w reduced in the quotient.
    pub fn kf(&self, k: &Weight, w: &Word) -> Result<Elem, AlgebraError> {
        self.alg().mono(&Word::empty(), k, w)
    }

    pub fn kf_free(&self, k: &Weight, f: &FreeElement) -> Result<Elem, AlgebraError> {
        let mut out = Elem::zero();
        for (w, c) in f.iter() {
            out.add_scaled(&self.kf(k, w)?, c);
        }
        Ok(out)
    }

    pub fn is_star_element(&self, x: &Elem) -> bool {
        let ctx = self.ctx();
        x.iter().all(|(m, _)| m.l.is_empty() && ctx.in_lattice_theta(&m.k))
    }

    /// ψ: U(χ)^poly → H_θ⋉U⁻, the projection along U(χ)^poly·span{Ẽ_i, K_i⁻¹}
    /// read off from the F·K·E normal form.
    pub fn psi(&self, x: &Elem) -> Result<Elem, AlgebraError> {
        let ctx = self.ctx().clone();
        let n = ctx.n;
        let y = self.rev.convert_from(self.alg(), x)?;
        let mut out = Elem::zero();
        for (m, c) in y.iter() {
            // F_y K_μ E_x = (scalar) F_y K_{μ+deg x} Ẽ_x
            let k_tilde = &m.k + &m.r.weight(n);
            if !ctx.in_poly_cone(&k_tilde) {
                return Err(AlgebraError::Precondition(format!("K-exponent {:?} is outside U(χ)^poly", k_tilde)));
            }
            if m.r.is_empty() && ctx.in_lattice_theta(&m.k) {
                let f = self.kf(&ctx.zero_weight(), &m.l)?;
                out.add_scaled(&self.alg().mul(&f, &self.alg().k(&m.k))?, c);
            }
        }
        Ok(out)
    }

    /// ψ⁻¹ by a descending triangular solve against ψ(K_λB_w) = K_λF_w + lower terms.
    /// Meaningful when the parameter condition holds.
    pub fn psi_inverse(&self, u: &Elem) -> Result<Elem, AlgebraError> {
        if !self.is_star_element(u) {
            return Err(AlgebraError::Precondition("argument is not in H_θ⋉U⁻".into()));
        }
        let mut rem = u.clone();
        let mut out = Elem::zero();
        while let Some(h) = rem.keys().map(|m| m.r.len()).max() {
            let top: Vec<(Mono, Scalar)> =
                rem.iter().filter(|(m, _)| m.r.len() == h).map(|(m, c)| (m.clone(), c.clone())).collect();
            for (m, c) in top {
                let x = self.alg().mul(&self.alg().k(&m.k), &self.b_word(&m.r)?)?;
                out.add_scaled(&x, &c);
                rem.add_scaled(&self.psi(&x)?, &-c);
            }
            if rem.keys().any(|m| m.r.len() >= h) {
                return Err(AlgebraError::Precondition("triangular system is singular".into()));
            }
        }
        Ok(out)
    }

    /// μ^L_{F_i}(K_μF_y) folded into F_i ⋆ (K_μF_y)
    /// = χ(α_i, μ) K_μ (F_iF_y + c_i q_{iτi} K_{τi}K_i⁻¹ ∂^L_{τi}(F_y)).
    pub fn fi_star(&self, i: usize, v: &Elem) -> Result<Elem, AlgebraError> {
        let ctx = self.ctx().clone();
        let t = ctx.tau[i];
        let ai = ctx.alpha(i);
        let shift = &ctx.alpha(t) - &ai;
        let coef = ctx.c[i].scale(ctx.q(i, t));
        let mut out = Elem::zero();
        for (m, c) in v.iter() {
            let lead = self.kf(&m.k, &m.r.prepend(i))?;
            let d = self.kf_free(&(&m.k + &shift), &partial_left_word(&ctx, t, &m.r))?;
            let term = lead.plus(&d.scale(&coef));
            out.add_scaled(&term, &c.scale(&ctx.chi(&ai, &m.k)));
        }
        Ok(out)
    }

    /// F_w ⋆ v through F_iF_{w'} = F_i ⋆ F_{w'} − μ^L_{F_i}(F_{w'}).
    fn word_star(&self, w: &Word, v: &Elem, memo: &mut HashMap<Word, Elem>) -> Result<Elem, AlgebraError> {
        if w.is_empty() {
            return Ok(v.clone());
        }
        if let Some(x) = memo.get(w) {
            return Ok(x.clone());
        }
        let ctx = self.ctx().clone();
        let i = w.0[0] as usize;
        let rest = self.kf(&ctx.zero_weight(), &Word(w.0[1..].to_vec()))?;
        // F_{w'} ⋆ v, with F_{w'} reduced in the quotient
        let mut rest_star = Elem::zero();
        for (m, c) in rest.iter() {
            rest_star.add_scaled(&self.word_star(&m.r, v, memo)?, c);
        }
        let mut out = self.fi_star(i, &rest_star)?;
        // subtract μ^L_{F_i}(F_{w'}) ⋆ v
        let mu = self.fi_star(i, &rest)?.minus(&self.alg().mul(&self.double.f(i), &rest)?);
        for (m, c) in mu.iter() {
            let inner = self.word_star(&m.r, v, memo)?;
            let x = self.alg().mul(&self.alg().k(&m.k), &inner)?;
            out.add_scaled(&x, &-c.clone());
        }
        memo.insert(w.clone(), out.clone());
        Ok(out)
    }

    /// The star product on H_θ⋉U⁻ determined by the μ^L maps.
    pub fn star_mul(&self, u: &Elem, v: &Elem) -> Result<Elem, AlgebraError> {
        let mut memo = HashMap::new();
        let mut out = Elem::zero();
        for (m, c) in u.iter() {
            let x = self.word_star(&m.r, v, &mut memo)?;
            out.add_scaled(&self.alg().mul(&self.alg().k(&m.k), &x)?, c);
        }
        Ok(out)
    }

    /// u₁ ⋆ u₂ ⋆ ⋯ evaluated from the right.
    pub fn star_all(&self, xs: &[&Elem]) -> Result<Elem, AlgebraError> {
        let mut acc = self.alg().one();
        for x in xs.iter().rev() {
            acc = self.star_mul(x, &acc)?;
        }
        Ok(acc)
    }

    fn act_left_one(&self, g: &Act, x: &Elem) -> Result<Elem, AlgebraError> {
        let ctx = self.ctx().clone();
        let mut out = Elem::zero();
        for (m, c) in x.iter() {
            match g {
                Act::K(l) => {
                    let f = ctx.chi(&m.k, l).inverse().expect("root of unity");
                    out.add_term(m.clone(), c.scale(&f));
                }
                Act::E(i) => {
                    let ai = ctx.alpha(*i);
                    let f = ctx.chi(&m.k, &ai).inverse().expect("root of unity");
                    let d = self.kf_free(&m.k, &partial_right_word(&ctx, *i, &m.r))?;
                    out.add_scaled(&self.alg().mul(&d, &self.alg().k(&-&ai))?, &c.scale(&f));
                }
            }
        }
        Ok(out)
    }

    fn act_right_one(&self, x: &Elem, g: &Act) -> Result<Elem, AlgebraError> {
        let ctx = self.ctx().clone();
        let mut out = Elem::zero();
        for (m, c) in x.iter() {
            match g {
                Act::K(l) => {
                    let f = ctx.chi(&m.r.weight(ctx.n), l) * ctx.chi(&m.k, l).inverse().expect("root of unity");
                    out.add_term(m.clone(), c.scale(&f));
                }
                Act::E(i) => {
                    let f = ctx.chi(&m.k, &ctx.alpha(*i)).inverse().expect("root of unity");
                    let d = self.kf_free(&m.k, &partial_left_word(&ctx, *i, &m.r))?;
                    out.add_scaled(&d, &c.scale(&f));
                }
            }
        }
        Ok(out)
    }

    /// (g₁⋯g_k) ▷ x.
    fn act_left(&self, gens: &[Act], x: &Elem) -> Result<Elem, AlgebraError> {
        let mut y = x.clone();
        for g in gens.iter().rev() {
            if y.is_zero() {
                break;
            }
            y = self.act_left_one(g, &y)?;
        }
        Ok(y)
    }

    /// x ◁ (g₁⋯g_k).
    fn act_right(&self, x: &Elem, gens: &[Act]) -> Result<Elem, AlgebraError> {
        let mut y = x.clone();
        for g in gens {
            if y.is_zero() {
                break;
            }
            y = self.act_right_one(&y, g)?;
        }
        Ok(y)
    }

    /// σ̄(F_p) ▷ x, using σ̄(F_p) = a_μ K_μ E_{τ(p)}.
    fn sigma_f_act(&self, p: &Word, x: &Elem) -> Result<Elem, AlgebraError> {
        let ctx = self.ctx();
        let mut gens = vec![Act::K(p.weight(ctx.n))];
        gens.extend(p.letters().map(|l| Act::E(ctx.tau[l])));
        Ok(self.act_left(&gens, x)?.scale(&a_mu_word(ctx, p)))
    }

    /// x ◁ (S⁻¹(E_c) K_μ), with S⁻¹(E_c) = ∏_{j=k..1} (−E_{c_j}K_{c_j}⁻¹).
    fn antipode_e_act(&self, x: &Elem, c: &Word, mu: &Weight) -> Result<Elem, AlgebraError> {
        let ctx = self.ctx();
        let mut gens = Vec::new();
        for l in c.letters().rev() {
            gens.push(Act::E(l));
            gens.push(Act::K(-ctx.alpha(l)));
        }
        gens.push(Act::K(mu.clone()));
        let y = self.act_right(x, &gens)?;
        Ok(if c.len() % 2 == 1 { y.neg() } else { y })
    }

    fn e_word_act(&self, x: &Elem, c: &Word) -> Result<Elem, AlgebraError> {
        let gens: Vec<Act> = c.letters().map(Act::E).collect();
        self.act_right(x, &gens)
    }

    /// Degrees ρ with 0 < |ρ| ≤ h, for sums over dual bases.
    fn degrees_upto(&self, h: usize) -> Vec<Weight> {
        (1..=h).flat_map(|k| crate::freealg::degrees_of_height(self.ctx().n, k)).collect()
    }

    /// f ⋆ g for f, g ∈ U⁻ via the quasi R-matrix:
    /// Σ_ρ (−1)^{|ρ|} (σ̄(F_ρ)▷f) K_ρ [g ◁ (S⁻¹(E_ρ)K_ρ)].
    fn theta_star_fg(&self, f: &Elem, g: &Elem) -> Result<Elem, AlgebraError> {
        let q = self.alg().quotient().clone();
        let hf = f.keys().map(|m| m.r.len()).max().unwrap_or(0);
        let hg = g.keys().map(|m| m.r.len()).max().unwrap_or(0);
        let mut out = self.alg().mul(f, g)?;
        for rho in self.degrees_upto(hf.min(hg)) {
            let sign = if rho.height() % 2 == 0 { 1 } else { -1 };
            for (p, c, x) in q.dual_pairs(&rho)? {
                let left = self.sigma_f_act(&p, f)?;
                if left.is_zero() {
                    continue;
                }
                let right = self.antipode_e_act(g, &c, &rho)?;
                if right.is_zero() {
                    continue;
                }
                let y = self.alg().mul_all(&[&left, &self.alg().k(&rho), &right])?;
                out.add_scaled(&y, &self.ctx().scalar(x.scale_int(sign)));
            }
        }
        Ok(out)
    }

    /// The twist product (K_λf) ⋆ (K_μg) = χ(α, μ) K_{λ+μ} (f ⋆ g), with f ⋆ g
    /// from the quasi R-matrix formula. Needs the Nichols quotient.
    pub fn star_mul_theta(&self, u: &Elem, v: &Elem) -> Result<Elem, AlgebraError> {
        let ctx = self.ctx().clone();
        let n = ctx.n;
        let mut out = Elem::zero();
        for (a, ca) in u.iter() {
            let f = self.kf(&ctx.zero_weight(), &a.r)?;
            for (b, cb) in v.iter() {
                let g = self.kf(&ctx.zero_weight(), &b.r)?;
                let fg = self.theta_star_fg(&f, &g)?;
                let k = self.alg().k(&(&a.k + &b.k));
                let coef = (ca * cb).scale(&ctx.chi(&a.r.weight(n), &b.k));
                out.add_scaled(&self.alg().mul(&k, &fg)?, &coef);
            }
        }
        Ok(out)
    }

    /// Σ_μ (−1)^{|μ|} ((σ̄(F_μ)▷f)K_μ) ⋆ [g ◁ E_μ], which recovers the undeformed product fg.
    pub fn undeformed_from_star(&self, f: &Elem, g: &Elem) -> Result<Elem, AlgebraError> {
        let q = self.alg().quotient().clone();
        let hf = f.keys().map(|m| m.r.len()).max().unwrap_or(0);
        let mut out = self.star_mul_theta(f, g)?;
        for mu in self.degrees_upto(hf) {
            let sign = if mu.height() % 2 == 0 { 1 } else { -1 };
            for (p, c, x) in q.dual_pairs(&mu)? {
                let left = self.sigma_f_act(&p, f)?;
                let right = self.e_word_act(g, &c)?;
                if left.is_zero() || right.is_zero() {
                    continue;
                }
                let lk = self.alg().mul(&left, &self.alg().k(&mu))?;
                out.add_scaled(&self.star_mul_theta(&lk, &right)?, &self.ctx().scalar(x.scale_int(sign)));
            }
        }
        Ok(out)
    }

    /// Δ⋆(K_νf) = Σ_{λ,μ} K_ν(σ̄(F_λ)▷f◁E_μ)K_λ ⊗ K_νF_μK_{μ−α}E_λ, for f of degree −α.
    pub fn delta_star(&self, u: &Elem) -> Result<Tensor, AlgebraError> {
        let ctx = self.ctx().clone();
        let n = ctx.n;
        let q = self.alg().quotient().clone();
        let mut out = Tensor::zero();
        for (m, cu) in u.iter() {
            let f = self.kf(&ctx.zero_weight(), &m.r)?;
            let alpha = m.r.weight(n);
            let h = m.r.len();
            let mut lam_pairs = vec![(Word::empty(), Word::empty(), crate::scalars::CycNum::one(ctx.ord))];
            let mut mu_pairs = lam_pairs.clone();
            for d in self.degrees_upto(h) {
                let pairs = q.dual_pairs(&d)?;
                lam_pairs.extend(pairs.iter().cloned());
                mu_pairs.extend(pairs);
            }
            let knu = self.alg().k(&m.k);
            for (pl, cl, xl) in &lam_pairs {
                let left = self.sigma_f_act(pl, &f)?;
                if left.is_zero() {
                    continue;
                }
                let lam = pl.weight(n);
                for (pm, cm, xm) in &mu_pairs {
                    if pl.len() + pm.len() > h {
                        continue;
                    }
                    let y = self.e_word_act(&left, cm)?;
                    if y.is_zero() {
                        continue;
                    }
                    let leg1 = self.alg().mul_all(&[&knu, &y, &self.alg().k(&lam)])?;
                    let mu = pm.weight(n);
                    let leg2 = self.alg().mul_all(&[
                        &knu,
                        &self.kf(&ctx.zero_weight(), pm)?,
                        &self.alg().k(&(&mu - &alpha)),
                        &self.alg().mono(cl, &ctx.zero_weight(), &Word::empty())?,
                    ])?;
                    let coef = cu.scale(&(xl * xm));
                    out.add_scaled(&tensor_of(&[&leg1, &leg2]), &coef);
                }
            }
        }
        Ok(out)
    }

    /// Product of two-leg tensors with ⋆ on the first leg and the product of U(χ) on the second.
    pub fn star_tensor_mul(&self, a: &Tensor, b: &Tensor) -> Result<Tensor, AlgebraError> {
        let one = self.ctx().sc_one();
        let mut out = Tensor::zero();
        for (ta, ca) in a.iter() {
            for (tb, cb) in b.iter() {
                let l0 = self.star_mul(&Elem::single(ta[0].clone(), one.clone()), &Elem::single(tb[0].clone(), one.clone()))?;
                let l1 = self.alg().mul_mono(&ta[1], &Elem::single(tb[1].clone(), one.clone()))?;
                out.add_scaled(&tensor_of(&[&l0, &l1]), &(ca * cb));
            }
        }
        Ok(out)
    }
}

/// A relation of B_c produced from a defining relation p of U⁺.
#[derive(Clone, Debug)]
pub struct GeneratedRelation {
    pub index: usize,
    /// Terms K_λ F_w standing for the monomials K_λ x_w.
    pub r: Elem,
}

impl GeneratedRelation {
    /// The top-degree part as a free polynomial.
    pub fn leading(&self) -> FreeElement {
        let h = self.r.keys().map(|m| m.r.len()).max().unwrap_or(0);
        let mut out = FreeElement::zero();
        for (m, c) in self.r.iter() {
            if m.r.len() == h && m.k.is_zero() {
                out.add_term(m.r.clone(), c.clone());
            }
        }
        out
    }
}

/// Rewrites each p_m(F) of the free partial bosonization as a polynomial
/// r_m(F ⊛ … ⊛ F) with left H_θ-coefficients, subtracting ⊛-monomials
/// degree by degree from the top.
pub fn generate_relations(ctx: &Arc<Ctx>, pres: &PreNicholsPresentation) -> Result<Vec<GeneratedRelation>, AlgebraError> {
    let h = pres.relations.iter().flat_map(|p| p.keys().map(|w| w.len())).max().unwrap_or(0);
    let bound = h.max(1);
    let quot = Arc::new(Quotient::with_bound(ctx.clone(), QuotientMode::Free, bound));
    let co = Coideal::new(quot);
    let mut out = Vec::new();
    for (j, p) in pres.relations.iter().enumerate() {
        let mut rem = co.kf_free(&ctx.zero_weight(), p)?;
        let mut r = Elem::zero();
        while let Some(top) = rem.keys().map(|m| m.r.len()).max() {
            let terms: Vec<(Mono, Scalar)> =
                rem.iter().filter(|(m, _)| m.r.len() == top).map(|(m, c)| (m.clone(), c.clone())).collect();
            for (m, c) in terms {
                let mut v = co.alg().one();
                for l in m.r.letters().rev() {
                    v = co.fi_star(l, &v)?;
                }
                let x = co.alg().mul(&co.alg().k(&m.k), &v)?;
                rem.add_scaled(&x, &-c.clone());
                r.add_term(m, c);
            }
        }
        out.push(GeneratedRelation { index: j, r });
    }
    Ok(out)
}
