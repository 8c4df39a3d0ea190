//! Chart restriction, pole-order reduction and iterated residues, assembled
//! into the inhomogeneous term of the Abel–Jacobi map for a pair of curves.

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use thiserror::Error;

use crate::arith::{rat, rat_int, Rat};
use crate::formcalc::{Beta, FermatFamily, Form, FormError, LieTower};
#[cfg(test)]
use crate::formcalc::VectorField;
use crate::poly::QPoly;
use crate::ratfunc::{Frac, RootField, TFunc};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ResidueError {
    #[error("substitution makes a denominator vanish")]
    ChartOnPole,
    #[error("all partial derivatives vanish at the point")]
    SingularPoint,
    #[error("form is not meromorphic in the expected variables: {0}")]
    InvalidForm(String),
    #[error("assumption violated: {0}")]
    AssumptionViolated(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("internal invariant violated: {0}")]
    InvariantViolation(String),
}

impl From<FormError> for ResidueError {
    fn from(e: FormError) -> Self {
        match e {
            FormError::ChartOnPole => ResidueError::ChartOnPole,
            other => ResidueError::InvalidInput(other.to_string()),
        }
    }
}

/// Affine chart given by `old_i = images[i]`; the new space has `nz`
/// coordinates followed by the same parameters.
#[derive(Clone, Debug)]
pub struct AffineChart {
    images: Vec<QPoly>,
    nz: usize,
    names: Vec<String>,
}

impl AffineChart {
    pub fn new(images: Vec<QPoly>, nz: usize, names: Vec<String>) -> Result<Self, ResidueError> {
        if images.is_empty() || names.len() != nz {
            return Err(ResidueError::InvalidInput("chart needs images and one name per coordinate".into()));
        }
        let nv = images[0].nvars();
        if images.iter().any(|p| p.nvars() != nv) || nz > nv {
            return Err(ResidueError::InvalidInput("chart images live in different spaces".into()));
        }
        Ok(AffineChart { images, nz, names })
    }

    /// Chart from a table: `None` keeps a parameter, otherwise each old
    /// coordinate is an integer combination `c + Σ a_j y_j`.
    pub fn linear(old_nz: usize, nparams: usize, rows: &[(i64, Vec<i64>)], names: &[&str]) -> Result<Self, ResidueError> {
        let nz = names.len();
        if rows.len() != old_nz || rows.iter().any(|(_, a)| a.len() != nz) {
            return Err(ResidueError::InvalidInput("chart table has the wrong shape".into()));
        }
        let nv = nz + nparams;
        let mut images = Vec::new();
        for (c, a) in rows {
            let mut p = QPoly::constant(nv, rat_int(*c));
            for (j, aj) in a.iter().enumerate() {
                p.add_scaled(&QPoly::var(nv, j), &rat_int(*aj));
            }
            images.push(p);
        }
        for k in 0..nparams {
            images.push(QPoly::var(nv, nz + k));
        }
        Self::new(images, nz, names.iter().map(|s| s.to_string()).collect())
    }

    pub fn nz(&self) -> usize {
        self.nz
    }

    pub fn nvars(&self) -> usize {
        self.images[0].nvars()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn images(&self) -> &[QPoly] {
        &self.images
    }

    pub fn map_poly(&self, p: &QPoly) -> QPoly {
        p.substitute(&self.images, self.nvars())
    }

    pub fn pull(&self, f: &Form) -> Result<Form, ResidueError> {
        Ok(f.pullback(&self.images, self.nz)?)
    }

    /// `other ∘ self`: first this chart, then `other` on its coordinates.
    pub fn then(&self, other: &AffineChart) -> AffineChart {
        let images = self.images.iter().map(|p| other.map_poly(p)).collect();
        AffineChart { images, nz: other.nz, names: other.names.clone() }
    }
}

/// A top-degree form on a chart together with the hypersurface polynomial
/// along which it has poles.
#[derive(Clone, Debug)]
pub struct PoleForm {
    pub form: Form,
    pub hypersurface: QPoly,
}

impl PoleForm {
    /// Highest power of the hypersurface polynomial in any denominator.
    pub fn order(&self) -> u32 {
        self.form.components().values().map(|f| f.order_of(&self.hypersurface)).max().unwrap_or(0)
    }
}

/// Restricts a form and its hypersurface polynomial to a chart.
pub fn restrict(form: &Form, chart: &AffineChart, hypersurface: &QPoly) -> Result<PoleForm, ResidueError> {
    let mut f = chart.pull(form)?;
    f.cancel();
    let p = chart.map_poly(hypersurface);
    if p.is_zero() {
        return Err(ResidueError::ChartOnPole);
    }
    Ok(PoleForm { form: f, hypersurface: p })
}

/// Evaluates the coordinates of a polynomial at a point, leaving parameters.
fn eval_at(p: &QPoly, point: &[Rat]) -> QPoly {
    let mut q = p.clone();
    for (i, v) in point.iter().enumerate() {
        q = q.eval_var(i, v);
    }
    q
}

/// Reduces the pole order along `P` by `ζ dP / P^l = −d(ζ/((l−1)P^{l−1})) + dζ/((l−1)P^{l−1})`,
/// dividing by the first partial `∂_j P` that is nonzero at `avoid`.
/// Returns `(η, remainder)` with `input = dη + remainder` and the remainder of
/// pole order at most one.
pub fn reduce_pole_order(pf: &PoleForm, avoid: &[Rat]) -> Result<(Form, Form), ResidueError> {
    let (terms, remainder) = reduce_pole_order_terms(pf, avoid)?;
    let eta = terms.iter().fold(Form::zero(pf.form.nz(), pf.form.nvars()), |acc, (_, f)| acc.add(f));
    Ok((eta, remainder))
}

/// Same as [`reduce_pole_order`] but keeps the summands `ζ_k/P^k` of `η`
/// separate, tagged with `k`.
pub fn reduce_pole_order_terms(pf: &PoleForm, avoid: &[Rat]) -> Result<(Vec<(u32, Form)>, Form), ResidueError> {
    let form = &pf.form;
    let n = form.nz();
    let nv = form.nvars();
    let full = (1u32 << n) - 1;
    if form.components().keys().any(|k| *k != full) {
        return Err(ResidueError::InvalidForm("pole reduction needs a top-degree form".into()));
    }
    if avoid.len() != n {
        return Err(ResidueError::InvalidInput("point has the wrong number of coordinates".into()));
    }
    let p = &pf.hypersurface;
    let j = (0..n)
        .find(|&j| !eval_at(&p.derivative(j), avoid).is_zero())
        .ok_or(ResidueError::SingularPoint)?;
    let dp = p.derivative(j);
    let others: Vec<usize> = (0..n).filter(|&i| i != j).collect();
    let sigma = if j % 2 == 1 { -Rat::one() } else { Rat::one() };
    let mut eta = Form::zero(n, nv);
    let mut terms = Vec::new();
    let mut cur = form.clone();
    cur.cancel();
    loop {
        let coeff = cur.components().get(&full).cloned().unwrap_or_else(|| Frac::zero(nv));
        let (g, l) = coeff.strip_factor(p);
        if l <= 1 {
            break;
        }
        let zeta_coeff = Frac::over(g.num().clone(), &dp, 1)
            .and_then(|mut z| {
                for (f, e) in g.den() {
                    z.divide_by(f, *e)?;
                }
                Some(z)
            })
            .ok_or(ResidueError::SingularPoint)?
            .scale(&sigma);
        let zeta = Form::monomial(n, zeta_coeff, &others);
        let inv = Frac::over(QPoly::one(nv), p, l - 1).expect("nonzero").scale(&rat(1, (l - 1) as i64));
        let term = zeta.mul_frac(&inv).neg();
        eta = eta.add(&term);
        terms.push((l - 1, term));
        let mut next = zeta.d().mul_frac(&inv);
        next.cancel();
        cur = next;
    }
    let check = eta.d().add(&cur);
    if !check.equals(form) {
        return Err(ResidueError::InvariantViolation("dη + remainder differs from the input".into()));
    }
    Ok((terms, cur))
}

/// A 1-form `coeff · dv` on a curve with coordinate `v`.
#[derive(Clone, Debug)]
pub struct CurveForm {
    pub coeff: Frac,
    pub var: usize,
}

/// Residue of a 2-form on a surface chart along `g = 0`, where `g` is linear
/// with constant coefficient in some coordinate `u`. The result lives on the
/// curve with the other coordinate `v`.
pub fn residue_along_divisor(form: &Form, g: &QPoly) -> Result<CurveForm, ResidueError> {
    if form.nz() != 2 {
        return Err(ResidueError::InvalidForm("curve residues need a surface chart".into()));
    }
    let nv = form.nvars();
    let u = (0..2)
        .find(|&u| g.max_degree(u) == Some(1) && g.derivative(u).is_constant())
        .ok_or_else(|| ResidueError::InvalidInput("curve factor is not solvable for a coordinate".into()))?;
    let v = 1 - u;
    let c = g.derivative(u).constant_term();
    let psi = g - &QPoly::var(nv, u).scale(&c);
    // u = (G − ψ)/c with G stored in slot u.
    let mut images: Vec<QPoly> = (0..nv).map(|i| QPoly::var(nv, i)).collect();
    images[u] = (&QPoly::var(nv, u) - &psi).scale(&c.recip());
    let moved = form.pullback(&images, 2)?;
    let mut coeff = moved.component(&[0, 1]);
    if u == 1 {
        coeff = coeff.neg();
    }
    let (k, rest) = coeff.split_var(u);
    if k >= 0 {
        return Ok(CurveForm { coeff: Frac::zero(nv), var: v });
    }
    let mut h = rest;
    let mut fact = Rat::one();
    for i in 1..(-k) {
        h = h.derivative(u);
        fact *= rat_int(i);
    }
    let at_zero = h.substitute(&zero_var(nv, u), nv).ok_or(ResidueError::ChartOnPole)?;
    Ok(CurveForm { coeff: at_zero.scale(&fact.recip()), var: v })
}

fn zero_var(nv: usize, u: usize) -> Vec<QPoly> {
    (0..nv).map(|i| if i == u { QPoly::zero(nv) } else { QPoly::var(nv, i) }).collect()
}

/// Splits a polynomial in `v` and the parameter `t` into coefficients of `v^k`.
fn v_coefficients(p: &QPoly, v: usize, t: usize) -> Result<Vec<TFunc>, ResidueError> {
    let mut out: Vec<TFunc> = Vec::new();
    for (m, c) in p.terms() {
        if m.iter().enumerate().any(|(i, e)| i != v && i != t && *e != 0) {
            return Err(ResidueError::InvalidForm("coefficient depends on more than the curve coordinate".into()));
        }
        let k = m[v];
        if k < 0 {
            return Err(ResidueError::InvalidForm("negative power of the curve coordinate".into()));
        }
        let k = k as usize;
        if out.len() <= k {
            out.resize(k + 1, TFunc::zero());
        }
        out[k] = out[k].add(&TFunc::monomial(c.clone(), m[t] as i64));
    }
    Ok(out)
}

/// Residue at `v = 0` of `coeff · dv`, with the convention `Res(dv/v) = 1`.
/// `t` is the index of the root parameter.
pub fn residue_at_point(form: &CurveForm, t: usize) -> Result<TFunc, ResidueError> {
    let v = form.var;
    let (k, rest) = form.coeff.split_var(v);
    if form.coeff.is_zero() || k >= 0 {
        return Ok(TFunc::zero());
    }
    let need = (-k - 1) as usize;
    let num = v_coefficients(rest.num(), v, t)?;
    let mut den = vec![TFunc::constant(Rat::one())];
    for (f, e) in rest.den() {
        let fc = v_coefficients(f, v, t)?;
        for _ in 0..*e {
            den = series_mul(&den, &fc, need);
        }
    }
    let inv = series_inverse(&den, need)?;
    let prod = series_mul(&num, &inv, need);
    Ok(prod.get(need).cloned().unwrap_or_else(TFunc::zero))
}

fn series_mul(a: &[TFunc], b: &[TFunc], upto: usize) -> Vec<TFunc> {
    let mut out = vec![TFunc::zero(); upto + 1];
    for (i, x) in a.iter().enumerate().take(upto + 1) {
        for (j, y) in b.iter().enumerate() {
            if i + j > upto {
                break;
            }
            out[i + j] = out[i + j].add(&x.mul(y));
        }
    }
    out
}

fn series_inverse(a: &[TFunc], upto: usize) -> Result<Vec<TFunc>, ResidueError> {
    let a0 = a
        .first()
        .and_then(|c| c.inverse())
        .ok_or_else(|| ResidueError::InvalidForm("denominator vanishes at the point".into()))?;
    let mut out = vec![a0.clone()];
    for n in 1..=upto {
        let mut s = TFunc::zero();
        for k in 1..=n {
            if let Some(ak) = a.get(k) {
                s = s.add(&ak.mul(&out[n - k]));
            }
        }
        out.push(s.neg().mul(&a0));
    }
    Ok(out)
}

/// A special point with the transversal hypersurface used near it.
#[derive(Clone, Debug)]
pub struct SpecialPoint {
    pub name: String,
    /// Homogeneous coordinates.
    pub point: Vec<Rat>,
    /// Chart on the transversal hypersurface.
    pub surface: AffineChart,
    /// The point in the surface chart.
    pub local: Vec<Rat>,
    /// Chart on the intersection of both hypersurfaces, inside `surface`;
    /// the point sits at its origin.
    pub curve_chart: AffineChart,
}

/// Two hypersurfaces `Q_1, Q_2`, a pair of curve factors and the special
/// points of the configuration.
#[derive(Clone, Debug)]
pub struct CurveConfig {
    pub family: FermatFamily,
    pub q1: QPoly,
    pub q2: QPoly,
    pub curves: [QPoly; 2],
    pub points: Vec<SpecialPoint>,
}

impl CurveConfig {
    /// Quintic with `x = t^{10}`, `Q_1 = z_1 + z_2`, `Q_2 = z_3 + z_4` and
    /// curves `z_1 z_3 ± t z_5^2`.
    pub fn quintic() -> Self {
        let family = FermatFamily::quintic(10).expect("valid root exponent");
        let nv = 6;
        let z = |i: usize| QPoly::var(nv, i);
        let q1 = &z(0) + &z(1);
        let q2 = &z(2) + &z(3);
        let tz5 = QPoly::monomial(vec![0, 0, 0, 0, 2, 1], Rat::one());
        let z13 = z(0).mul_ref(&z(2));
        let curves = [&z13 + &tz5, &z13 - &tz5];
        let p1 = SpecialPoint {
            name: "p1".into(),
            point: [1, -1, 0, 0, 0].iter().map(|x| rat_int(*x)).collect(),
            surface: AffineChart::linear(
                5,
                1,
                &[(1, vec![0, 0, 0]), (0, vec![1, 0, 0]), (0, vec![0, 1, 0]), (0, vec![0, -1, 0]), (0, vec![0, 0, 1])],
                &["z2", "z3", "z5"],
            )
            .expect("chart"),
            local: vec![rat_int(-1), Rat::zero(), Rat::zero()],
            curve_chart: AffineChart::linear(3, 1, &[(-1, vec![0, 0]), (0, vec![1, 0]), (0, vec![0, 1])], &["z3", "z5"])
                .expect("chart"),
        };
        let p2 = SpecialPoint {
            name: "p2".into(),
            point: [0, 0, 1, -1, 0].iter().map(|x| rat_int(*x)).collect(),
            surface: AffineChart::linear(
                5,
                1,
                &[(0, vec![1, 0, 0]), (0, vec![-1, 0, 0]), (1, vec![0, 0, 0]), (0, vec![0, 1, 0]), (0, vec![0, 0, 1])],
                &["z1", "z4", "z5"],
            )
            .expect("chart"),
            local: vec![Rat::zero(), rat_int(-1), Rat::zero()],
            curve_chart: AffineChart::linear(3, 1, &[(0, vec![1, 0]), (-1, vec![0, 0]), (0, vec![0, 1])], &["z1", "z5"])
                .expect("chart"),
        };
        CurveConfig { family, q1, q2, curves, points: vec![p1, p2] }
    }

    /// Checks the point lies on everything, the chosen hypersurface meets
    /// `X` transversally there, and `P` restricted to `Y_1 ∩ Y_2` is divisible
    /// by both curve factors.
    pub fn validate(&self) -> Result<(), ResidueError> {
        let p = self.family.poly();
        let nz = self.family.nz();
        for sp in &self.points {
            let at = |f: &QPoly| eval_at(f, &sp.point);
            for (name, f) in [("P", p), ("Q1", &self.q1), ("Q2", &self.q2), ("C+", &self.curves[0]), ("C-", &self.curves[1])] {
                if !at(f).is_zero() {
                    return Err(ResidueError::AssumptionViolated(format!("{} does not vanish at {}", name, sp.name)));
                }
            }
            let grad = |f: &QPoly| -> Vec<QPoly> { (0..nz).map(|i| at(&f.derivative(i))).collect() };
            let gp = grad(p);
            let transversal = [&self.q1, &self.q2].iter().any(|q| {
                let gq = grad(q);
                (0..nz).any(|a| (a + 1..nz).any(|b| !(&gp[a].mul_ref(&gq[b]) - &gp[b].mul_ref(&gq[a])).is_zero()))
            });
            if !transversal {
                return Err(ResidueError::AssumptionViolated(format!("neither hypersurface is transversal to X at {}", sp.name)));
            }
            let both = sp.surface.then(&sp.curve_chart);
            let pr = both.map_poly(p);
            let gg = both.map_poly(&self.curves[0]).mul_ref(&both.map_poly(&self.curves[1]));
            if self.curves[0] != self.curves[1] && pr.try_div(&gg).is_none() {
                return Err(ResidueError::AssumptionViolated(format!("P does not factor through the curves near {}", sp.name)));
            }
        }
        Ok(())
    }

    pub fn root(&self) -> RootField {
        RootField::new(self.family.roots()[0])
    }
}

/// `Res_p Res_C` of a 2-form given on the ambient space, restricted to the
/// intersection chart of `sp`.
pub fn double_residue(form: &Form, sp: &SpecialPoint, curve: &QPoly) -> Result<TFunc, ResidueError> {
    let both = sp.surface.then(&sp.curve_chart);
    let restricted = both.pull(form)?;
    let g = both.map_poly(curve);
    let c = residue_along_divisor(&restricted, &g)?;
    residue_at_point(&c, 2)
}

/// Double residues of one block of β at one special point.
#[derive(Clone, Debug)]
pub struct PointResidues {
    pub point: String,
    pub plus: TFunc,
    pub minus: TFunc,
    pub pole_order: u32,
}

/// Outcome of the Abel–Jacobi computation.
#[derive(Clone, Debug)]
pub struct AjReport {
    /// Per Θ-power: the combined double residue before applying `Θ^a`.
    pub blocks: BTreeMap<u32, TFunc>,
    pub details: Vec<(u32, PointResidues)>,
    /// `Σ_a Θ^a(blocks[a])`.
    pub total: TFunc,
}

impl AjReport {
    /// Rational multiple of `π^{-2}` after rescaling the form by `−(5/2πi)^3`,
    /// valid when the result is `Θ_x` applied to a single block.
    pub fn walcher_multiplier(&self) -> Option<(Rat, TFunc)> {
        let nonzero: Vec<(&u32, &TFunc)> = self.blocks.iter().filter(|(_, f)| !f.is_zero()).collect();
        if nonzero.len() != 1 || *nonzero[0].0 != 1 {
            return None;
        }
        // −5^3 (2πi)^{-2} = (125/4) π^{-2}
        let scale = rat(125, 4);
        let f = nonzero[0].1.scale(&scale);
        let c = f.as_monomial().map(|(c, _)| c).unwrap_or_else(Rat::zero);
        Some((c, f))
    }
}

/// Assembles `−Σ_{p ∈ C+} Res_p Res_{C+} η + Σ_{p ∈ C−} Res_p Res_{C−} η`
/// with `η` obtained from β by pole-order reduction on the transversal
/// hypersurface near each point. Θ-prefactors are kept outside the residues.
pub fn abel_jacobi_inhomogeneous(config: &CurveConfig, beta: &Beta) -> Result<AjReport, ResidueError> {
    config.validate()?;
    let fam = &config.family;
    if fam.roots().len() != 1 {
        return Err(ResidueError::InvalidInput("one-parameter family expected".into()));
    }
    let root = config.root();
    let mut tower = LieTower::new(fam.pi_tilde());
    let mut blocks: BTreeMap<u32, TFunc> = BTreeMap::new();
    let mut details = Vec::new();
    for ((delta, a), form) in beta.blocks(fam, &mut tower) {
        let mut acc = TFunc::zero();
        for sp in &config.points {
            let pf = restrict(&form, &sp.surface, fam.poly())?;
            let order = pf.order();
            let (eta, _) = reduce_pole_order(&pf, &sp.local)?;
            let on_curve = sp.curve_chart.pull(&eta)?;
            let both = sp.surface.then(&sp.curve_chart);
            let mut res = Vec::new();
            for g in &config.curves {
                let c = residue_along_divisor(&on_curve, &both.map_poly(g))?;
                res.push(residue_at_point(&c, 2)?);
            }
            acc = acc.sub(&res[0]).add(&res[1]);
            details.push((a[0], PointResidues { point: sp.name.clone(), plus: res[0].clone(), minus: res[1].clone(), pole_order: order }));
        }
        let shifted = acc.mul(&root.x_power(delta[0]));
        let e = blocks.entry(a[0]).or_insert_with(TFunc::zero);
        *e = e.add(&shifted);
    }
    let mut total = TFunc::zero();
    for (a, f) in &blocks {
        let mut g = f.clone();
        for _ in 0..*a {
            g = root.theta(&g);
        }
        total = total.add(&g);
    }
    Ok(AjReport { blocks, details, total })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn restriction_of_the_quintic_near_p2() {
        let cfg = CurveConfig::quintic();
        let sp = &cfg.points[1];
        let p = sp.surface.map_poly(cfg.family.poly());
        // −z1² z4 z5 − t²(1 + z4⁵ + z5⁵)
        let nv = 4;
        let mut expected = QPoly::monomial(vec![2, 1, 1, 0], -Rat::one());
        for m in [[0, 0, 0, 2], [0, 5, 0, 2], [0, 0, 5, 2]] {
            expected.add_term(m.to_vec(), -Rat::one());
        }
        assert_eq!(expected.nvars(), nv);
        assert_eq!(p, expected);
    }

    #[test]
    fn log_form_has_unit_residue() {
        // dv/v on a curve, and a holomorphic form.
        let f = Frac::over(QPoly::one(2), &QPoly::var(2, 0), 1).unwrap();
        let r = residue_at_point(&CurveForm { coeff: f, var: 0 }, 1).unwrap();
        assert_eq!(r, TFunc::constant(Rat::one()));
        let h = Frac::from_poly(QPoly::var(2, 0));
        assert!(residue_at_point(&CurveForm { coeff: h, var: 0 }, 1).unwrap().is_zero());
    }

    #[test]
    fn residue_along_a_line() {
        // (dG/G) ∧ v dv on the chart (u, v, t) with G = u + v.
        let nv = 3;
        let g = &QPoly::var(nv, 0) + &QPoly::var(nv, 1);
        let coeff = Frac::over(QPoly::var(nv, 1), &g, 1).unwrap();
        let form = Form::monomial(2, coeff, &[0, 1]);
        let c = residue_along_divisor(&form, &g).unwrap();
        assert_eq!(c.var, 1);
        assert_eq!(c.coeff, Frac::from_poly(QPoly::var(nv, 1)));
        let none = Form::monomial(2, Frac::from_poly(QPoly::one(nv)), &[0, 1]);
        assert!(residue_along_divisor(&none, &g).unwrap().coeff.is_zero());
    }

    #[test]
    fn simple_pole_is_left_alone() {
        let cfg = CurveConfig::quintic();
        let sp = &cfg.points[0];
        let p = sp.surface.map_poly(cfg.family.poly());
        let form = Form::monomial(3, Frac::over(QPoly::one(4), &p, 1).unwrap(), &[0, 1, 2]);
        let pf = PoleForm { form: form.clone(), hypersurface: p };
        let (eta, rem) = reduce_pole_order(&pf, &sp.local).unwrap();
        assert!(eta.is_zero());
        assert!(rem.equals(&form));
    }

    #[test]
    fn configuration_is_valid() {
        assert!(CurveConfig::quintic().validate().is_ok());
    }

    #[test]
    fn direct_restriction_at_p1() {
        let cfg = CurveConfig::quintic();
        let fam = &cfg.family;
        let mut tower = LieTower::new(fam.pi_tilde());
        let form = tower.get(&[0, 1, 0, 1, 0]).interior(&fam.euler_field(2)).interior(&fam.euler_field(0));
        let sp = &cfg.points[0];
        let plus = double_residue(&form, sp, &cfg.curves[0]).unwrap();
        let minus = double_residue(&form, sp, &cfg.curves[1]).unwrap();
        assert_eq!(plus, TFunc::monomial(rat(-375, 8), 5));
        assert_eq!(minus, TFunc::monomial(rat(375, 8), 5));
    }

    #[test]
    fn pipeline_agrees_with_direct_restriction() {
        let cfg = CurveConfig::quintic();
        let report = abel_jacobi_inhomogeneous(&cfg, &Beta::quintic_choice()).unwrap();
        let (_, p1) = report.details.iter().find(|(a, d)| *a == 1 && d.point == "p1").unwrap();
        let scale = rat(1, 625);
        assert_eq!(p1.plus, TFunc::monomial(rat(-375, 8) * &scale, 5));
        assert_eq!(p1.minus, TFunc::monomial(rat(375, 8) * &scale, 5));
    }

    #[test]
    fn only_odd_powers_of_the_root_appear() {
        let cfg = CurveConfig::quintic();
        let report = abel_jacobi_inhomogeneous(&cfg, &Beta::quintic_choice()).unwrap();
        for (_, d) in &report.details {
            for f in [&d.plus, &d.minus] {
                if let Some((_, k)) = f.as_monomial() {
                    assert!(f.is_zero() || k % 2 != 0);
                } else {
                    panic!("residue is not a monomial: {}", f.display("t"));
                }
            }
        }
    }

    #[test]
    fn coincident_curves_cancel() {
        let mut cfg = CurveConfig::quintic();
        cfg.curves[1] = cfg.curves[0].clone();
        let report = abel_jacobi_inhomogeneous(&cfg, &Beta::quintic_choice()).unwrap();
        assert!(report.total.is_zero());
    }

    #[test]
    fn non_transversal_point_is_rejected() {
        let mut cfg = CurveConfig::quintic();
        // Singular hypersurfaces through both points.
        cfg.q1 = QPoly::var(6, 4).mul_ref(&QPoly::var(6, 4));
        cfg.q2 = cfg.q1.clone();
        assert!(matches!(cfg.validate(), Err(ResidueError::AssumptionViolated(_))));
    }

    fn quintic_blocks() -> (CurveConfig, BTreeMap<(Vec<i64>, Vec<u32>), Form>) {
        let cfg = CurveConfig::quintic();
        let mut tower = LieTower::new(cfg.family.pi_tilde());
        let blocks = Beta::quintic_choice().blocks(&cfg.family, &mut tower);
        (cfg, blocks)
    }

    fn eta_residue(cfg: &CurveConfig, eta: &Form, sp: &SpecialPoint, curve: &QPoly) -> TFunc {
        let on_curve = sp.curve_chart.pull(eta).unwrap();
        let g = sp.surface.then(&sp.curve_chart).map_poly(curve);
        let _ = cfg;
        residue_at_point(&residue_along_divisor(&on_curve, &g).unwrap(), 2).unwrap()
    }

    #[test]
    fn near_p2_everything_vanishes() {
        let (cfg, blocks) = quintic_blocks();
        let sp = &cfg.points[1];
        for form in blocks.values() {
            let pf = restrict(form, &sp.surface, cfg.family.poly()).unwrap();
            let (eta, _) = reduce_pole_order(&pf, &sp.local).unwrap();
            for g in &cfg.curves {
                assert!(eta_residue(&cfg, &eta, sp, g).is_zero());
            }
        }
    }

    #[test]
    fn simple_pole_terms_do_not_contribute() {
        let (cfg, blocks) = quintic_blocks();
        for sp in &cfg.points {
            for ((_, a), form) in &blocks {
                let pf = restrict(form, &sp.surface, cfg.family.poly()).unwrap();
                let (terms, _) = reduce_pole_order_terms(&pf, &sp.local).unwrap();
                let zero = Form::zero(3, 4);
                let all = terms.iter().fold(zero.clone(), |a, (_, f)| a.add(f));
                let higher = terms.iter().filter(|(k, _)| *k > 1).fold(zero, |a, (_, f)| a.add(f));
                let assembled = |eta: &Form| {
                    let plus = eta_residue(&cfg, eta, sp, &cfg.curves[0]);
                    let minus = eta_residue(&cfg, eta, sp, &cfg.curves[1]);
                    let mut f = minus.sub(&plus);
                    for _ in 0..a[0] {
                        f = cfg.root().theta(&f);
                    }
                    f
                };
                assert_eq!(assembled(&all), assembled(&higher));
            }
        }
    }

    #[test]
    fn second_term_vanishes_on_the_curve_chart_near_p1() {
        let cfg = CurveConfig::quintic();
        let fam = &cfg.family;
        let mut tower = LieTower::new(fam.pi_tilde());
        let base = tower.get(&[0, 0, 0, 1, 0]).interior(&VectorField::partial(5, 6, 2));
        let z3 = Frac::from_poly(QPoly::var(6, 2));
        let form = base.mul_frac(&z3);
        let form = form.interior(&fam.euler_field(0)).add(&form.interior(&fam.euler_field(1)));
        let sp = &cfg.points[0];
        let on = sp.surface.then(&sp.curve_chart).pull(&form).unwrap();
        assert!(on.is_zero());
    }

    #[test]
    fn quintic_factors_on_the_intersection() {
        let cfg = CurveConfig::quintic();
        let sp = &cfg.points[1];
        let both = sp.surface.then(&sp.curve_chart);
        let p = both.map_poly(cfg.family.poly());
        // Oracle: z5 (z1 − t z5²)(z1 + t z5²) on the chart (z1, z5, t).
        let nv = 3;
        let z1 = QPoly::var(nv, 0);
        let tz = QPoly::monomial(vec![0, 2, 1], Rat::one());
        let oracle = QPoly::var(nv, 1).mul_ref(&(&z1 - &tz)).mul_ref(&(&z1 + &tz));
        assert!(p == oracle || p == oracle.scale(&-Rat::one()));
    }
}
