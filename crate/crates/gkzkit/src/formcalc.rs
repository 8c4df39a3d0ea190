//! Exterior calculus on affine space with rational coefficients, and the
//! form-level GKZ identities of Fermat-type hypersurface families.
//!
//! Variables are split into `nz` coordinates carrying differentials followed
//! by parameters (the root parameters of the moduli), which are constants for
//! `d`. A component is keyed by the bitmask of its `dz` factors in increasing
//! order.

use std::collections::BTreeMap;
use std::fmt;

use itertools::Itertools;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::arith::{fmt_rat, rat, rat_from, rat_int, Int, Rat};
use crate::gkz::{ModuliChart, ThetaOperator};
use crate::poly::QPoly;
use crate::ratfunc::Frac;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FormError {
    #[error("substitution makes a denominator vanish")]
    ChartOnPole,
    #[error("variable mismatch: {0}")]
    VariableMismatch(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

fn sign(odd: bool) -> Rat {
    if odd {
        -Rat::one()
    } else {
        Rat::one()
    }
}

/// Sign of `dz_a ∧ dz_b` relative to the sorted monomial.
fn wedge_sign(a: u32, b: u32) -> Rat {
    let mut swaps = 0;
    for j in 0..32 {
        if b >> j & 1 == 1 {
            swaps += (a >> (j + 1)).count_ones();
        }
    }
    sign(swaps % 2 == 1)
}

fn indices(mask: u32) -> Vec<usize> {
    (0..32).filter(|i| mask >> i & 1 == 1).collect()
}

/// A vector field `Σ v_i ∂/∂z_i`.
#[derive(Clone, Debug)]
pub struct VectorField {
    comps: Vec<Frac>,
}

impl VectorField {
    pub fn new(comps: Vec<Frac>) -> Self {
        VectorField { comps }
    }

    /// `z_i ∂/∂z_i`.
    pub fn euler(nz: usize, nvars: usize, i: usize) -> Self {
        let mut comps = vec![Frac::zero(nvars); nz];
        comps[i] = Frac::from_poly(QPoly::var(nvars, i));
        VectorField { comps }
    }

    /// `∂/∂z_i`.
    pub fn partial(nz: usize, nvars: usize, i: usize) -> Self {
        let mut comps = vec![Frac::zero(nvars); nz];
        comps[i] = Frac::constant(nvars, Rat::one());
        VectorField { comps }
    }

    /// `c z^α ∂/∂z_i`.
    pub fn monomial(nz: usize, nvars: usize, c: Rat, alpha: &[i32], i: usize) -> Self {
        let mut m = vec![0; nvars];
        m[..alpha.len()].copy_from_slice(alpha);
        let mut comps = vec![Frac::zero(nvars); nz];
        comps[i] = Frac::from_poly(QPoly::monomial(m, c));
        VectorField { comps }
    }

    pub fn comps(&self) -> &[Frac] {
        &self.comps
    }

    pub fn add(&self, other: &VectorField) -> VectorField {
        VectorField { comps: self.comps.iter().zip(&other.comps).map(|(a, b)| a.add(b)).collect() }
    }

    /// Derivation on functions.
    pub fn apply(&self, f: &Frac) -> Frac {
        let mut out = Frac::zero(f.nvars());
        for (i, v) in self.comps.iter().enumerate() {
            if !v.is_zero() {
                out = out.add(&v.mul(&f.derivative(i)));
            }
        }
        out
    }
}

/// A differential form, possibly of mixed degree.
#[derive(Clone)]
pub struct Form {
    nz: usize,
    nvars: usize,
    comps: BTreeMap<u32, Frac>,
}

impl fmt::Debug for Form {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut m = f.debug_map();
        for (k, v) in &self.comps {
            m.entry(&indices(*k), v);
        }
        m.finish()
    }
}

impl Form {
    pub fn zero(nz: usize, nvars: usize) -> Self {
        assert!(nz <= nvars && nz < 32);
        Form { nz, nvars, comps: BTreeMap::new() }
    }

    pub fn function(nz: usize, f: Frac) -> Self {
        let mut out = Form::zero(nz, f.nvars());
        out.add_component(0, f);
        out
    }

    pub fn dz(nz: usize, nvars: usize, i: usize) -> Self {
        let mut out = Form::zero(nz, nvars);
        out.add_component(1 << i, Frac::constant(nvars, Rat::one()));
        out
    }

    /// `f dz_{i_1} ∧ … ∧ dz_{i_k}` for an arbitrary index order.
    pub fn monomial(nz: usize, f: Frac, idx: &[usize]) -> Self {
        let nvars = f.nvars();
        let mut out = Form::function(nz, f);
        for &i in idx {
            out = out.wedge(&Form::dz(nz, nvars, i));
        }
        out
    }

    pub fn nz(&self) -> usize {
        self.nz
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn components(&self) -> &BTreeMap<u32, Frac> {
        &self.comps
    }

    pub fn component(&self, idx: &[usize]) -> Frac {
        let mask = idx.iter().fold(0u32, |m, i| m | 1 << i);
        self.comps.get(&mask).cloned().unwrap_or_else(|| Frac::zero(self.nvars))
    }

    pub fn add_component(&mut self, mask: u32, f: Frac) {
        if f.is_zero() {
            return;
        }
        let next = match self.comps.get(&mask) {
            Some(g) => g.add(&f),
            None => f,
        };
        if next.is_zero() {
            self.comps.remove(&mask);
        } else {
            self.comps.insert(mask, next);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.comps.is_empty()
    }

    /// Degree if homogeneous and nonzero.
    pub fn degree(&self) -> Option<usize> {
        let degs: Vec<u32> = self.comps.keys().map(|k| k.count_ones()).dedup().collect();
        (degs.len() == 1).then(|| degs[0] as usize)
    }

    fn check(&self, other: &Form) {
        assert!(self.nz == other.nz && self.nvars == other.nvars, "forms on different spaces");
    }

    pub fn add(&self, other: &Form) -> Form {
        self.check(other);
        let mut out = self.clone();
        for (k, v) in &other.comps {
            out.add_component(*k, v.clone());
        }
        out
    }

    pub fn sub(&self, other: &Form) -> Form {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Form {
        self.map(|f| f.neg())
    }

    pub fn scale(&self, c: &Rat) -> Form {
        if c.is_zero() {
            return Form::zero(self.nz, self.nvars);
        }
        self.map(|f| f.scale(c))
    }

    pub fn mul_frac(&self, g: &Frac) -> Form {
        self.map(|f| f.mul(g))
    }

    /// Applies `op` to every coefficient.
    pub fn map(&self, op: impl Fn(&Frac) -> Frac) -> Form {
        let mut out = Form::zero(self.nz, self.nvars);
        for (k, v) in &self.comps {
            out.add_component(*k, op(v));
        }
        out
    }

    pub fn wedge(&self, other: &Form) -> Form {
        self.check(other);
        let mut out = Form::zero(self.nz, self.nvars);
        for (a, f) in &self.comps {
            for (b, g) in &other.comps {
                if a & b != 0 {
                    continue;
                }
                out.add_component(a | b, f.mul(g).scale(&wedge_sign(*a, *b)));
            }
        }
        out
    }

    /// Exterior derivative in the coordinates.
    pub fn d(&self) -> Form {
        let mut out = Form::zero(self.nz, self.nvars);
        for (k, f) in &self.comps {
            for i in 0..self.nz {
                if k >> i & 1 == 1 {
                    continue;
                }
                let df = f.derivative(i);
                if df.is_zero() {
                    continue;
                }
                let below = (k & ((1u32 << i) - 1)).count_ones();
                out.add_component(k | 1 << i, df.scale(&sign(below % 2 == 1)));
            }
        }
        out
    }

    /// Contraction `ι_v`.
    pub fn interior(&self, v: &VectorField) -> Form {
        let mut out = Form::zero(self.nz, self.nvars);
        for (k, f) in &self.comps {
            for (p, i) in indices(*k).into_iter().enumerate() {
                let vi = &v.comps[i];
                if vi.is_zero() {
                    continue;
                }
                out.add_component(k & !(1 << i), f.mul(vi).scale(&sign(p % 2 == 1)));
            }
        }
        out
    }

    /// Lie derivative by the Cartan formula `d ι_v + ι_v d`.
    pub fn lie(&self, v: &VectorField) -> Form {
        self.interior(v).d().add(&self.d().interior(v))
    }

    /// Lie derivative by transporting coefficients and differentials:
    /// `L_v(f dz_K) = v(f) dz_K + f Σ_j dz_{k_1} ∧ … ∧ d(v_{k_j}) ∧ … `.
    pub fn lie_direct(&self, v: &VectorField) -> Form {
        let mut out = Form::zero(self.nz, self.nvars);
        for (k, f) in &self.comps {
            out.add_component(*k, v.apply(f));
            let idx = indices(*k);
            for (j, &i) in idx.iter().enumerate() {
                let dv = Form::function(self.nz, v.comps[i].clone()).d();
                if dv.is_zero() {
                    continue;
                }
                let mut piece = Form::function(self.nz, f.clone());
                for &a in &idx[..j] {
                    piece = piece.wedge(&Form::dz(self.nz, self.nvars, a));
                }
                piece = piece.wedge(&dv);
                for &a in &idx[j + 1..] {
                    piece = piece.wedge(&Form::dz(self.nz, self.nvars, a));
                }
                out = out.add(&piece);
            }
        }
        out
    }

    /// `L_{z_i ∂_i}` using the diagonal action on monomials.
    pub fn lie_euler(&self, i: usize) -> Form {
        let mut out = Form::zero(self.nz, self.nvars);
        for (k, f) in &self.comps {
            let mut g = f.euler(i);
            if k >> i & 1 == 1 {
                g = g.add(f);
            }
            out.add_component(*k, g);
        }
        out
    }

    /// `c · p ∂/∂p` on the coefficients, for a parameter variable `p`.
    pub fn param_euler(&self, var: usize, c: &Rat) -> Form {
        assert!(var >= self.nz, "not a parameter");
        self.map(|f| f.euler(var).scale(c))
    }

    /// Pullback along `old_i = images[i]`, where the new space has `new_nz`
    /// coordinates followed by parameters.
    pub fn pullback(&self, images: &[QPoly], new_nz: usize) -> Result<Form, FormError> {
        if images.len() != self.nvars {
            return Err(FormError::VariableMismatch(format!("expected {} images, got {}", self.nvars, images.len())));
        }
        let new_nvars = images[0].nvars();
        let dimages: Vec<Form> = images[..self.nz]
            .iter()
            .map(|p| Form::function(new_nz, Frac::from_poly(p.clone())).d())
            .collect();
        let mut out = Form::zero(new_nz, new_nvars);
        for (k, f) in &self.comps {
            let g = f.substitute(images, new_nvars).ok_or(FormError::ChartOnPole)?;
            let mut piece = Form::function(new_nz, g);
            for i in indices(*k) {
                piece = piece.wedge(&dimages[i]);
                if piece.is_zero() {
                    break;
                }
            }
            out = out.add(&piece);
        }
        Ok(out)
    }

    pub fn cancel(&mut self) {
        for f in self.comps.values_mut() {
            f.cancel();
        }
    }

    /// Exact equality after clearing denominators.
    pub fn equals(&self, other: &Form) -> bool {
        self.sub(other).is_zero()
    }
}

/// Exact equality of forms.
pub fn verify_exact_identity(lhs: &Form, rhs: &Form) -> bool {
    lhs.equals(rhs)
}

/// A Fermat-type family in homogeneous coordinates `z_1..z_n` with root
/// parameters `p_k`, `x_k = p_k^{r_k}`.
#[derive(Clone, Debug)]
pub struct FermatFamily {
    weights: Vec<i64>,
    params: Vec<String>,
    roots: Vec<u32>,
    poly: QPoly,
}

impl FermatFamily {
    /// `poly` lives in `n + params.len()` variables, Laurent in the parameters.
    pub fn new(weights: Vec<i64>, params: Vec<String>, roots: Vec<u32>, poly: QPoly) -> Result<Self, FormError> {
        let n = weights.len();
        if params.len() != roots.len() || roots.contains(&0) {
            return Err(FormError::InvalidInput("one positive root exponent per parameter".into()));
        }
        if poly.nvars() != n + params.len() {
            return Err(FormError::VariableMismatch("polynomial does not match coordinates and parameters".into()));
        }
        if poly.terms().any(|(m, _)| m[..n].iter().any(|e| *e < 0)) {
            return Err(FormError::InvalidInput("negative power of a coordinate".into()));
        }
        let d: i64 = weights.iter().sum();
        for (m, _) in poly.terms() {
            let deg: i64 = m[..n].iter().zip(&weights).map(|(e, w)| *e as i64 * w).sum();
            if deg != d {
                return Err(FormError::InvalidInput("polynomial is not weighted homogeneous of the anticanonical degree".into()));
            }
        }
        Ok(FermatFamily { weights, params, roots, poly })
    }

    /// `∏ z_i − x^{1/5} Σ z_i^5` with `x = t^r`; `r` must be a multiple of 5.
    pub fn quintic(r: u32) -> Result<Self, FormError> {
        if r % 5 != 0 || r == 0 {
            return Err(FormError::InvalidInput("root exponent must be a positive multiple of 5".into()));
        }
        let nv = 6;
        let mut p = QPoly::monomial(vec![1, 1, 1, 1, 1, 0], Rat::one());
        for i in 0..5 {
            let mut m = vec![0; nv];
            m[i] = 5;
            m[5] = (r / 5) as i32;
            p.add_term(m, -Rat::one());
        }
        Self::new(vec![1; 5], vec!["t".into()], vec![r], p)
    }

    /// Degree-8 family in P(2,2,2,1,1) with `x_1 = s^4`, `x_2 = u^8`.
    pub fn p22211() -> Self {
        let nv = 7;
        let mono = |e: [i32; 7]| QPoly::monomial(e.to_vec(), Rat::one());
        let mut p = mono([1, 1, 1, 1, 1, 0, 0]);
        for e in [[4, 0, 0, 0, 0, 1, 1], [0, 4, 0, 0, 0, 1, 1], [0, 0, 4, 0, 0, 1, 1], [0, 0, 0, 8, 0, 1, 1], [0, 0, 0, 0, 8, 1, 1]] {
            p = &p + &mono(e);
        }
        p = &p + &mono([0, 0, 0, 4, 4, 1, -3]);
        debug_assert_eq!(p.nvars(), nv);
        Self::new(vec![2, 2, 2, 1, 1], vec!["s".into(), "u".into()], vec![4, 8], p).expect("valid family")
    }

    pub fn nz(&self) -> usize {
        self.weights.len()
    }

    pub fn nvars(&self) -> usize {
        self.weights.len() + self.params.len()
    }

    pub fn weights(&self) -> &[i64] {
        &self.weights
    }

    pub fn degree(&self) -> i64 {
        self.weights.iter().sum()
    }

    pub fn roots(&self) -> &[u32] {
        &self.roots
    }

    pub fn poly(&self) -> &QPoly {
        &self.poly
    }

    pub fn names(&self) -> Vec<String> {
        (1..=self.nz()).map(|i| format!("z{i}")).chain(self.params.iter().cloned()).collect()
    }

    /// `Σ_ρ (−1)^{ρ−1} w_ρ z_ρ dz_1 ∧ … ∧ \hat{dz_ρ} ∧ … ∧ dz_n`.
    pub fn omega0(&self) -> Form {
        let n = self.nz();
        let nv = self.nvars();
        let full = (1u32 << n) - 1;
        let mut out = Form::zero(n, nv);
        for (rho, w) in self.weights.iter().enumerate() {
            let f = Frac::from_poly(QPoly::var(nv, rho).scale(&rat_int(*w))).scale(&sign(rho % 2 == 1));
            out.add_component(full & !(1 << rho), f);
        }
        out
    }

    /// `Ω_0 / P`, with negative parameter powers cleared from `P`.
    pub fn pi_tilde(&self) -> Form {
        let n = self.nz();
        let nv = self.nvars();
        let mut shift = vec![0i32; nv];
        for (m, _) in self.poly.terms() {
            for k in n..nv {
                shift[k] = shift[k].max(-m[k]);
            }
        }
        let clear = QPoly::monomial(shift.clone(), Rat::one());
        let p = self.poly.mul_term(&shift, &Rat::one());
        let coeff = Frac::over(clear, &p, 1).expect("nonzero polynomial");
        self.omega0().mul_frac(&coeff)
    }

    /// `Θ_{x_k}` on coefficients.
    pub fn theta(&self, k: usize, f: &Form) -> Form {
        f.param_euler(self.nz() + k, &Rat::new(Int::one(), Int::from(self.roots[k])))
    }

    /// `x^δ` as a Laurent monomial in the parameters.
    pub fn x_monomial(&self, delta: &[i64]) -> QPoly {
        let mut m = vec![0i32; self.nvars()];
        for (k, d) in delta.iter().enumerate() {
            m[self.nz() + k] = (*d * self.roots[k] as i64) as i32;
        }
        QPoly::monomial(m, Rat::one())
    }

    pub fn euler_field(&self, i: usize) -> VectorField {
        VectorField::euler(self.nz(), self.nvars(), i)
    }

    /// `Σ (w_ρ/d) z_ρ ∂_ρ`.
    pub fn weighted_euler_field(&self) -> VectorField {
        let nv = self.nvars();
        let d = self.degree();
        let comps = (0..self.nz())
            .map(|i| Frac::from_poly(QPoly::var(nv, i).scale(&rat(self.weights[i], d))))
            .collect();
        VectorField::new(comps)
    }
}

/// Memoized `∏ L_{z_i ∂_i}^{b_i}` applied to a fixed form.
pub struct LieTower {
    cache: BTreeMap<Vec<u32>, Form>,
}

impl LieTower {
    pub fn new(base: Form) -> Self {
        let n = base.nz();
        let mut cache = BTreeMap::new();
        cache.insert(vec![0; n], base);
        LieTower { cache }
    }

    pub fn get(&mut self, b: &[u32]) -> Form {
        if let Some(f) = self.cache.get(b) {
            return f.clone();
        }
        let k = b.iter().rposition(|e| *e > 0).expect("base is cached");
        let mut prev = b.to_vec();
        prev[k] -= 1;
        let f = self.get(&prev).lie_euler(k);
        self.cache.insert(b.to_vec(), f.clone());
        f
    }
}

/// `Σ_δ x^δ p_δ(Θ, L)`: polynomial variables are the chart thetas followed by
/// one `L_i = L_{z_i ∂_i}` per homogeneous coordinate.
#[derive(Clone, PartialEq)]
pub struct ExactOperator {
    ntheta: usize,
    nz: usize,
    terms: BTreeMap<Vec<i64>, QPoly>,
}

impl fmt::Debug for ExactOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let xs: Vec<String> = (1..=self.ntheta).map(|k| format!("x{k}")).collect();
        f.write_str(&self.pretty(&xs))
    }
}

impl ExactOperator {
    pub fn zero(ntheta: usize, nz: usize) -> Self {
        ExactOperator { ntheta, nz, terms: BTreeMap::new() }
    }

    /// Embeds a theta operator (no Lie factors).
    pub fn from_theta(op: &ThetaOperator, nz: usize) -> Self {
        let r = op.nvars();
        let slots: Vec<usize> = (0..r).collect();
        let mut out = ExactOperator::zero(r, nz);
        for (d, p) in op.terms() {
            out.add_term(d.clone(), p.embed(&slots, r + nz));
        }
        out
    }

    pub fn terms(&self) -> &BTreeMap<Vec<i64>, QPoly> {
        &self.terms
    }

    pub fn add_term(&mut self, delta: Vec<i64>, p: QPoly) {
        let e = self.terms.entry(delta.clone()).or_insert_with(|| QPoly::zero(p.nvars()));
        e.add_assign_ref(&p);
        if e.is_zero() {
            self.terms.remove(&delta);
        }
    }

    fn split(&self, with_lie: bool) -> ExactOperator {
        let mut out = ExactOperator::zero(self.ntheta, self.nz);
        for (d, p) in &self.terms {
            let mut q = QPoly::zero(p.nvars());
            for (m, c) in p.terms() {
                if m[self.ntheta..].iter().any(|e| *e > 0) == with_lie {
                    q.add_term(m.clone(), c.clone());
                }
            }
            out.add_term(d.clone(), q);
        }
        out
    }

    /// Terms free of Lie derivatives.
    pub fn theta_part(&self) -> ExactOperator {
        self.split(false)
    }

    /// Terms containing at least one Lie derivative.
    pub fn lie_part(&self) -> ExactOperator {
        self.split(true)
    }

    pub fn sub(&self, other: &ExactOperator) -> ExactOperator {
        let mut out = self.clone();
        for (d, p) in &other.terms {
            out.add_term(d.clone(), -p);
        }
        out
    }

    /// Applies the operator to `Π̃` of the family.
    pub fn apply(&self, fam: &FermatFamily, tower: &mut LieTower) -> Form {
        let mut out = Form::zero(fam.nz(), fam.nvars());
        for (d, p) in &self.terms {
            let mut part = Form::zero(fam.nz(), fam.nvars());
            for (m, c) in p.terms() {
                let b: Vec<u32> = m[self.ntheta..].iter().map(|e| *e as u32).collect();
                let mut f = tower.get(&b);
                for (k, a) in m[..self.ntheta].iter().enumerate() {
                    for _ in 0..*a {
                        f = fam.theta(k, &f);
                    }
                }
                part = part.add(&f.scale(c));
            }
            out = out.add(&part.mul_frac(&Frac::from_poly(fam.x_monomial(d))));
        }
        out
    }

    pub fn pretty(&self, xnames: &[String]) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let mut vars: Vec<String> = xnames.iter().map(|x| format!("Θ{x}")).collect();
        vars.extend((1..=self.nz).map(|i| format!("L{i}")));
        self.terms
            .iter()
            .map(|(d, p)| {
                let mono: Vec<String> = d
                    .iter()
                    .enumerate()
                    .filter(|(_, e)| **e != 0)
                    .map(|(i, e)| if *e == 1 { xnames[i].clone() } else { format!("{}^{}", xnames[i], e) })
                    .collect();
                if mono.is_empty() {
                    format!("({})", p.display_with(&vars))
                } else {
                    format!("{}*({})", mono.join("*"), p.display_with(&vars))
                }
            })
            .join(" + ")
    }
}

/// The GKZ operator of `l` after conjugation by the torus action: each
/// `a_i ∂_{a_i}` with `1 ≤ i ≤ n` becomes `θ_{a_i} + (w_i/d) L_{z_i ∂_i}`.
pub fn exact_gkz_operator(l: &[Int], chart: &ModuliChart, weights: &[i64]) -> Result<ExactOperator, FormError> {
    let n = weights.len();
    let r = chart.rank();
    if chart.basis().iter().any(|b| b.len() != l.len()) || l.len() <= n {
        return Err(FormError::VariableMismatch("relation, chart and weights disagree".into()));
    }
    let delta = chart.coordinates(l).map_err(|e| FormError::InvalidInput(e.to_string()))?;
    let nv = r + n;
    let d: i64 = weights.iter().sum();
    let shifted = |i: usize, j: i64| -> QPoly {
        let mut p = QPoly::constant(nv, rat_int(-j));
        for (m, b) in chart.basis().iter().enumerate() {
            p.add_scaled(&QPoly::var(nv, m), &rat_from(&b[i]));
        }
        if (1..=n).contains(&i) {
            p.add_scaled(&QPoly::var(nv, r + i - 1), &rat(weights[i - 1], d));
        }
        p
    };
    let mut plus = QPoly::one(nv);
    let mut minus = QPoly::one(nv);
    for (i, li) in l.iter().enumerate() {
        let k = li.abs().to_i64().ok_or_else(|| FormError::InvalidInput("relation entry too large".into()))?;
        let target = if li.is_positive() { &mut plus } else { &mut minus };
        let range: Vec<i64> = if i == 0 { (1..=k).collect() } else { (0..k).collect() };
        for j in range {
            *target = target.mul_ref(&shifted(i, j));
        }
    }
    let flips = delta.iter().zip(chart.signs()).filter(|(dd, s)| **s == -1 && dd.rem_euclid(2) == 1).count();
    let mut out = ExactOperator::zero(r, n);
    out.add_term(vec![0; r], plus);
    out.add_term(delta, minus.scale(&-sign(flips % 2 == 1)));
    Ok(out)
}

/// `coeff · x^δ · Θ^a · ι_{z_k ∂_k} ∏ L_{z_i ∂_i}^{b_i} Π̃`.
#[derive(Clone, Debug, PartialEq)]
pub struct BetaTerm {
    pub coeff: Rat,
    pub x_shift: Vec<i64>,
    pub theta: Vec<u32>,
    pub iota: usize,
    pub lies: Vec<u32>,
}

/// A β-term as a list of contraction terms.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct Beta {
    pub terms: Vec<BetaTerm>,
}

impl Beta {
    /// The form `Σ_terms …` without the `x^δ Θ^a` prefactors, grouped by them.
    pub fn blocks(&self, fam: &FermatFamily, tower: &mut LieTower) -> BTreeMap<(Vec<i64>, Vec<u32>), Form> {
        let mut out: BTreeMap<(Vec<i64>, Vec<u32>), Form> = BTreeMap::new();
        for t in &self.terms {
            let f = tower.get(&t.lies).interior(&fam.euler_field(t.iota)).scale(&t.coeff);
            let key = (t.x_shift.clone(), t.theta.clone());
            let entry = out.entry(key).or_insert_with(|| Form::zero(fam.nz(), fam.nvars()));
            *entry = entry.add(&f);
        }
        out.retain(|_, f| !f.is_zero());
        out
    }

    pub fn evaluate(&self, fam: &FermatFamily, tower: &mut LieTower) -> Form {
        let mut out = Form::zero(fam.nz(), fam.nvars());
        for ((delta, a), f) in self.blocks(fam, tower) {
            let mut g = f;
            for (k, e) in a.iter().enumerate() {
                for _ in 0..*e {
                    g = fam.theta(k, &g);
                }
            }
            out = out.add(&g.mul_frac(&Frac::from_poly(fam.x_monomial(&delta))));
        }
        out
    }

    pub fn pretty(&self, xnames: &[String]) -> Vec<String> {
        self.terms
            .iter()
            .map(|t| {
                let mut s = fmt_rat(&t.coeff);
                for (k, d) in t.x_shift.iter().enumerate() {
                    if *d != 0 {
                        s += &format!(" {}^{}", xnames[k], d);
                    }
                }
                for (k, a) in t.theta.iter().enumerate() {
                    if *a != 0 {
                        s += &format!(" Θ{}^{}", xnames[k], a);
                    }
                }
                s += &format!(" ι(z{0}∂{0})", t.iota + 1);
                for (i, b) in t.lies.iter().enumerate() {
                    for _ in 0..*b {
                        s += &format!(" L{}", i + 1);
                    }
                }
                s + " Π̃"
            })
            .collect()
    }

    /// The β_x of the quintic used by the Abel–Jacobi computation, with one
    /// root parameter.
    pub fn quintic_choice() -> Beta {
        let mut terms = Vec::new();
        let mut push = |c: Rat, a: u32, iota: usize, lies: &[usize]| {
            let mut b = vec![0u32; 5];
            for &k in lies {
                b[k - 1] += 1;
            }
            terms.push(BetaTerm { coeff: c, x_shift: vec![0], theta: vec![a], iota: iota - 1, lies: b });
        };
        let c2 = rat(1, 25);
        push(c2.clone(), 3, 1, &[2]);
        push(c2.clone(), 3, 3, &[4]);
        for i in [3, 4] {
            for k in [1, 2] {
                push(c2.clone(), 3, i, &[k]);
            }
        }
        let c3 = rat(1, 125);
        push(c3.clone(), 2, 3, &[1, 2]);
        push(c3.clone(), 2, 4, &[1, 2]);
        push(c3.clone(), 2, 3, &[1, 4]);
        push(c3, 2, 3, &[2, 4]);
        push(rat(1, 625), 1, 3, &[1, 2, 4]);
        for size in 1..=4usize {
            for set in (1..=4usize).combinations(size) {
                push(rat(1, 5i64.pow(size as u32 + 1)), 4 - size as u32, 5, &set);
            }
        }
        Beta { terms }
    }
}

/// β-term of `l`: every Lie monomial `c x^δ Θ^a L^b` of the exact operator
/// becomes `c x^δ Θ^a ι_k L^{b − e_k} Π̃`, where `k` is the first index of
/// `peel` with `b_k > 0`. Then `D̃_l Π̃ = −dβ_l`.
pub fn beta_term(op: &ExactOperator, peel: &[usize]) -> Result<Beta, FormError> {
    let mut sorted = peel.to_vec();
    sorted.sort_unstable();
    if sorted != (0..op.nz).collect::<Vec<_>>() {
        return Err(FormError::InvalidInput("peel order must be a permutation of the coordinates".into()));
    }
    let mut terms = Vec::new();
    for (d, p) in &op.lie_part().terms {
        for (m, c) in p.terms() {
            let b: Vec<u32> = m[op.ntheta..].iter().map(|e| *e as u32).collect();
            let k = *peel.iter().find(|k| b[**k] > 0).expect("Lie monomial");
            let mut lies = b.clone();
            lies[k] -= 1;
            terms.push(BetaTerm {
                coeff: c.clone(),
                x_shift: d.clone(),
                theta: m[..op.ntheta].iter().map(|e| *e as u32).collect(),
                iota: k,
                lies,
            });
        }
    }
    Ok(Beta { terms })
}
