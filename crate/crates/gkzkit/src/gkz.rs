//! GKZ operators, theta forms in moduli charts, the normalized deformed Gamma
//! series with coefficients in the divisor ring, and its scalar components.
//!
//! A [`ThetaOperator`] is a sum of terms `x^δ p_δ(θ)` with the monomial on the
//! left. Operators act on series from the left; in a composition the rightmost
//! factor acts first, and `θ_k ∘ x^δ = x^δ (θ_k + δ_k)`.

use std::collections::BTreeMap;
use std::fmt;

use itertools::Itertools;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::arith::{fmt_rat, rat_from, rat_int, Int, Rat};
use crate::intlat::{IntMatrix, IntVector, Polytope, RelationLattice};
use crate::linalg::{rank_int, rank_q, solve_combination, to_rat_rows};
use crate::nilring::{DivisorRing, NilringError, RingElement};
use crate::poly::QPoly;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GkzError {
    #[error("vector is not in the relation lattice")]
    NotARelation,
    #[error("relation has no integral coordinates in the chart")]
    ChartMismatch,
    #[error("basis change is not unimodular")]
    NotUnimodular,
    #[error("constant term is not a unit")]
    NotAUnit,
    #[error("internal invariant violated: {0}")]
    InvariantViolation(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error(transparent)]
    Ring(#[from] NilringError),
}

/// Box operator `∏_{l_i>0} ∂_i^{l_i} − ∏_{l_i<0} ∂_i^{−l_i}` of a relation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoxOperator {
    relation: IntVector,
}

impl BoxOperator {
    pub fn relation(&self) -> &[Int] {
        &self.relation
    }

    /// `(variable index, power)` pairs of the positive part.
    pub fn positive_part(&self) -> Vec<(usize, Int)> {
        self.relation.iter().enumerate().filter(|(_, l)| l.is_positive()).map(|(i, l)| (i, l.clone())).collect()
    }

    pub fn negative_part(&self) -> Vec<(usize, Int)> {
        self.relation.iter().enumerate().filter(|(_, l)| l.is_negative()).map(|(i, l)| (i, -l)).collect()
    }

    /// Text such as `∂a1 ∂a2 − ∂a0^2`, with `names[i]` for variable `i`.
    pub fn pretty(&self, names: &[String]) -> String {
        let side = |part: Vec<(usize, Int)>| -> String {
            if part.is_empty() {
                return "1".into();
            }
            part.iter()
                .map(|(i, p)| if p.is_one() { format!("∂{}", names[*i]) } else { format!("∂{}^{}", names[*i], p) })
                .join(" ")
        };
        format!("{} - {}", side(self.positive_part()), side(self.negative_part()))
    }
}

pub fn box_operator(l: &[Int], lattice: &RelationLattice) -> Result<BoxOperator, GkzError> {
    if !lattice.contains(l) {
        return Err(GkzError::NotARelation);
    }
    Ok(BoxOperator { relation: l.to_vec() })
}

/// `Σ_i c_i a_i ∂/∂a_i − β`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EulerOperator {
    pub index: usize,
    pub coeffs: IntVector,
    pub beta: Int,
}

impl EulerOperator {
    /// Eigenvalue of the homogeneous part on the monomial `a^l`.
    pub fn eigenvalue(&self, l: &[Int]) -> Int {
        self.coeffs.iter().zip(l).map(|(c, x)| c * x).sum()
    }
}

/// One operator per row of the lifted point matrix, with `β = (−1, 0, …, 0)`.
/// For an enhanced polytope the last two points play the roles of `b_0, b_1`.
pub fn euler_operators(points: &Polytope) -> Vec<EulerOperator> {
    let lifted = points.lifted();
    (0..=points.dim())
        .map(|k| EulerOperator {
            index: k,
            coeffs: lifted.iter().map(|p| p[k].clone()).collect(),
            beta: if k == 0 { -Int::one() } else { Int::zero() },
        })
        .collect()
}

/// Coordinates `x_k = s_k a^{l^{(k)}}` on the moduli space.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModuliChart {
    basis: Vec<IntVector>,
    signs: Vec<i64>,
    names: Vec<String>,
}

impl ModuliChart {
    pub fn new(basis: Vec<IntVector>, signs: Vec<i64>, names: Vec<String>) -> Result<Self, GkzError> {
        if basis.is_empty() || signs.len() != basis.len() || names.len() != basis.len() {
            return Err(GkzError::InvalidInput("chart basis, signs and names must have equal nonzero length".into()));
        }
        if signs.iter().any(|s| *s != 1 && *s != -1) {
            return Err(GkzError::InvalidInput("chart signs must be ±1".into()));
        }
        let n = basis[0].len();
        if basis.iter().any(|b| b.len() != n) || rank_int(&basis) != basis.len() {
            return Err(GkzError::InvalidInput("chart basis must be independent vectors of equal length".into()));
        }
        Ok(ModuliChart { basis, signs, names })
    }

    /// Signs `(−1)^{l_0^{(k)}}`.
    pub fn standard(basis: Vec<IntVector>, names: Vec<String>) -> Result<Self, GkzError> {
        let signs = basis.iter().map(|b| crate::arith::sign_pow(&b[0])).collect();
        Self::new(basis, signs, names)
    }

    pub fn basis(&self) -> &[IntVector] {
        &self.basis
    }

    pub fn signs(&self) -> &[i64] {
        &self.signs
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    /// Whether the basis generates the given lattice.
    pub fn spans(&self, lattice: &RelationLattice) -> bool {
        crate::intlat::lattice_equal(&self.basis, lattice.basis())
    }

    pub fn rational_coordinates(&self, l: &[Rat]) -> Option<Vec<Rat>> {
        solve_combination(&to_rat_rows(&self.basis), l)
    }

    pub fn coordinates(&self, l: &[Int]) -> Result<Vec<i64>, GkzError> {
        let t: Vec<Rat> = l.iter().map(rat_from).collect();
        let c = self.rational_coordinates(&t).ok_or(GkzError::ChartMismatch)?;
        c.iter()
            .map(|x| if x.is_integer() { x.to_integer().to_i64().ok_or(GkzError::ChartMismatch) } else { Err(GkzError::ChartMismatch) })
            .collect()
    }

    /// `M` and signs with `x_i = σ_i ∏_j y_j^{M_ij}` for `y` the target coordinates.
    pub fn transition_to(&self, target: &ModuliChart) -> Result<(IntMatrix, Vec<i64>), GkzError> {
        let mut rows = Vec::new();
        let mut sigma = Vec::new();
        for (b, s) in self.basis.iter().zip(&self.signs) {
            let c = target.coordinates(b)?;
            let mut sg = *s;
            for (cj, tj) in c.iter().zip(&target.signs) {
                if cj.rem_euclid(2) == 1 {
                    sg *= tj;
                }
            }
            sigma.push(sg);
            rows.push(c.iter().map(|x| Int::from(*x)).collect());
        }
        let m = IntMatrix::new(rows, target.rank()).map_err(|e| GkzError::InvalidInput(e.to_string()))?;
        Ok((m, sigma))
    }
}

/// `Σ_δ x^δ p_δ(θ)`.
#[derive(Clone, PartialEq)]
pub struct ThetaOperator {
    nvars: usize,
    terms: BTreeMap<Vec<i64>, QPoly>,
}

impl fmt::Debug for ThetaOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = (1..=self.nvars).map(|i| format!("x{i}")).collect();
        f.write_str(&self.pretty(&names))
    }
}

impl ThetaOperator {
    pub fn zero(nvars: usize) -> Self {
        ThetaOperator { nvars, terms: BTreeMap::new() }
    }

    /// The polynomial `θ_k` in `nvars` theta variables.
    pub fn theta(nvars: usize, k: usize) -> QPoly {
        QPoly::var(nvars, k)
    }

    /// Affine form `Σ c_k θ_k + c`.
    pub fn affine(coeffs: &[Rat], c: Rat) -> QPoly {
        let n = coeffs.len();
        let mut p = QPoly::constant(n, c);
        for (k, ck) in coeffs.iter().enumerate() {
            p.add_scaled(&QPoly::var(n, k), ck);
        }
        p
    }

    pub fn single(delta: Vec<i64>, p: QPoly) -> Self {
        let mut op = ThetaOperator::zero(p.nvars());
        op.add_term(delta, p);
        op
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn add_term(&mut self, delta: Vec<i64>, p: QPoly) {
        assert_eq!(delta.len(), self.nvars);
        let e = self.terms.entry(delta.clone()).or_insert_with(|| QPoly::zero(p.nvars()));
        e.add_assign_ref(&p);
        if e.is_zero() {
            self.terms.remove(&delta);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<i64>, &QPoly)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, other: &ThetaOperator) -> ThetaOperator {
        let mut out = self.clone();
        for (d, p) in &other.terms {
            out.add_term(d.clone(), p.clone());
        }
        out
    }

    pub fn sub(&self, other: &ThetaOperator) -> ThetaOperator {
        self.add(&other.scale(&-Rat::one()))
    }

    pub fn scale(&self, c: &Rat) -> ThetaOperator {
        let mut out = ThetaOperator::zero(self.nvars);
        for (d, p) in &self.terms {
            out.add_term(d.clone(), p.scale(c));
        }
        out
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &ThetaOperator) -> ThetaOperator {
        let n = self.nvars;
        let mut out = ThetaOperator::zero(n);
        for (a, p) in &self.terms {
            for (b, q) in &other.terms {
                let images: Vec<QPoly> = (0..n).map(|k| Self::affine(&unit(n, k), rat_int(b[k]))).collect();
                let shifted = p.substitute(&images, n);
                let delta: Vec<i64> = a.iter().zip(b).map(|(x, y)| x + y).collect();
                out.add_term(delta, shifted.mul_ref(q));
            }
        }
        out
    }

    /// Replaces `x_k` by `flips_k · x_k`.
    pub fn flip_signs(&self, flips: &[i64]) -> ThetaOperator {
        let mut out = ThetaOperator::zero(self.nvars);
        for (d, p) in &self.terms {
            let odd = d.iter().zip(flips).filter(|(e, f)| **f == -1 && e.rem_euclid(2) == 1).count();
            let s = if odd % 2 == 1 { -Rat::one() } else { Rat::one() };
            out.add_term(d.clone(), p.scale(&s));
        }
        out
    }

    pub fn pretty(&self, names: &[String]) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let thetas: Vec<String> = names.iter().map(|n| format!("θ{n}")).collect();
        self.terms
            .iter()
            .map(|(d, p)| {
                let mono: Vec<String> = d
                    .iter()
                    .enumerate()
                    .filter(|(_, e)| **e != 0)
                    .map(|(i, e)| if *e == 1 { names[i].clone() } else { format!("{}^{}", names[i], e) })
                    .collect();
                if mono.is_empty() {
                    format!("({})", p.display_with(&thetas))
                } else {
                    format!("{}*({})", mono.join("*"), p.display_with(&thetas))
                }
            })
            .join(" + ")
    }
}

fn unit(n: usize, k: usize) -> Vec<Rat> {
    (0..n).map(|i| if i == k { Rat::one() } else { Rat::zero() }).collect()
}

/// Rewrites the box operator as `P_+(θ) − s^δ x^δ P_−(θ)` in the chart, with
/// `a_i ∂_{a_i} ↦ Σ_m l^{(m)}_i θ_m` and the `a_0` factors shifted by one.
pub fn theta_form(op: &BoxOperator, chart: &ModuliChart) -> Result<ThetaOperator, GkzError> {
    let l = op.relation();
    if chart.basis.iter().any(|b| b.len() != l.len()) {
        return Err(GkzError::ChartMismatch);
    }
    let delta = chart.coordinates(l)?;
    let r = chart.rank();
    let theta_a = |i: usize| -> QPoly {
        let coeffs: Vec<Rat> = chart.basis.iter().map(|b| rat_from(&b[i])).collect();
        ThetaOperator::affine(&coeffs, Rat::zero())
    };
    let factor = |i: usize, shift: i64| -> QPoly { &theta_a(i) - &QPoly::constant(r, rat_int(shift)) };
    let mut plus = QPoly::one(r);
    let mut minus = QPoly::one(r);
    for (i, li) in l.iter().enumerate() {
        let n = li.abs().to_i64().ok_or_else(|| GkzError::InvalidInput("relation entry too large".into()))?;
        let (target, start) = if li.is_positive() { (&mut plus, 0) } else { (&mut minus, 0) };
        // a_0 carries the shift from β_0 = −1.
        let range: Vec<i64> = if i == 0 { (1..=n).collect() } else { (start..n).collect() };
        for j in range {
            *target = target.mul_ref(&factor(i, j));
        }
    }
    let sign = delta.iter().zip(&chart.signs).filter(|(d, s)| **s == -1 && d.rem_euclid(2) == 1).count();
    let s = if sign % 2 == 1 { -Rat::one() } else { Rat::one() };
    let mut out = ThetaOperator::zero(r);
    out.add_term(vec![0; r], plus);
    out.add_term(delta, minus.scale(&-s));
    Ok(out)
}

/// Change of coordinates `x_i = ∏_j y_j^{M_ij}`: `δ_new = Mᵀ δ` and
/// `θ_x = (Mᵀ)^{-1} θ_y`.
pub fn change_basis(op: &ThetaOperator, m: &IntMatrix) -> Result<ThetaOperator, GkzError> {
    let n = op.nvars;
    if m.nrows() != n || m.ncols() != n {
        return Err(GkzError::InvalidInput("basis change has wrong size".into()));
    }
    let inv = m.transpose().inverse_unimodular().ok_or(GkzError::NotUnimodular)?;
    let images: Vec<QPoly> = inv
        .rows()
        .iter()
        .map(|row| ThetaOperator::affine(&row.iter().map(rat_from).collect::<Vec<_>>(), Rat::zero()))
        .collect();
    let mt = m.transpose();
    let mut out = ThetaOperator::zero(n);
    for (d, p) in &op.terms {
        let dv: Vec<Int> = d.iter().map(|x| Int::from(*x)).collect();
        let nd: Vec<i64> = mt.mul_vec(&dv).iter().map(|x| x.to_i64().expect("small shift")).collect();
        out.add_term(nd, p.substitute(&images, n));
    }
    Ok(out)
}

/// Expresses an operator written in chart `from` in chart `to`.
pub fn to_chart(op: &ThetaOperator, from: &ModuliChart, to: &ModuliChart) -> Result<ThetaOperator, GkzError> {
    let (m, sigma) = from.transition_to(to)?;
    change_basis(&op.flip_signs(&sigma), &m)
}

/// Evaluates a theta polynomial at ring-valued arguments.
pub fn eval_theta(p: &QPoly, args: &[RingElement], ring: &DivisorRing) -> RingElement {
    let mut powers: Vec<Vec<RingElement>> = args.iter().map(|a| vec![ring.one(), a.clone()]).collect();
    let mut out = ring.zero();
    for (m, c) in p.terms() {
        let mut term = ring.scalar(c.clone());
        for (k, &e) in m.iter().enumerate() {
            let e = e as usize;
            while powers[k].len() <= e {
                let next = &powers[k][powers[k].len() - 1] * &args[k];
                powers[k].push(next);
            }
            if e > 0 {
                term = &term * &powers[k][e];
            }
        }
        out = &out + &term;
    }
    out
}

/// Multi-indices `m ≥ 0` with `|m| ≤ order`, graded then lexicographic.
pub fn multi_indices(nvars: usize, order: u32) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    for total in 0..=order {
        let mut cur = vec![0u32; nvars];
        fill(&mut out, &mut cur, 0, total);
    }
    out
}

fn fill(out: &mut Vec<Vec<u32>>, cur: &mut Vec<u32>, k: usize, left: u32) {
    if k + 1 == cur.len() {
        cur[k] = left;
        out.push(cur.clone());
        return;
    }
    for v in (0..=left).rev() {
        cur[k] = v;
        fill(out, cur, k + 1, left - v);
    }
}

/// Truncated series `Σ_m c_m x^{m+ε}` with ring coefficients.
#[derive(Clone, Debug)]
pub struct MultiSeries {
    ring: DivisorRing,
    chart: ModuliChart,
    coeffs: BTreeMap<Vec<u32>, RingElement>,
    order: u32,
    shifts: Vec<RingElement>,
}

impl MultiSeries {
    pub fn ring(&self) -> &DivisorRing {
        &self.ring
    }

    pub fn chart(&self) -> &ModuliChart {
        &self.chart
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    /// Nilpotent exponent shift `ε_k` of each chart coordinate.
    pub fn shifts(&self) -> &[RingElement] {
        &self.shifts
    }

    pub fn coeffs(&self) -> &BTreeMap<Vec<u32>, RingElement> {
        &self.coeffs
    }

    pub fn coefficient(&self, m: &[u32]) -> RingElement {
        self.coeffs.get(m).cloned().unwrap_or_else(|| self.ring.zero())
    }

    /// Multiplies every coefficient by a ring element.
    pub fn times(&self, u: &RingElement) -> MultiSeries {
        let mut out = self.clone();
        for c in out.coeffs.values_mut() {
            *c = u * c;
        }
        out
    }
}

/// Normalized deformed Gamma series `B_l / B_0` in the given chart, for all
/// `|m| ≤ order`.
pub fn gamma_series(points: &Polytope, chart: &ModuliChart, ring: &DivisorRing, order: u32) -> Result<MultiSeries, GkzError> {
    let np = points.len();
    if ring.num_vars() != np || chart.basis.iter().any(|b| b.len() != np) {
        return Err(GkzError::InvalidInput("ring, chart and points disagree on the number of points".into()));
    }
    let r = chart.rank();
    // ε_m from D = Σ_k E_k u^{(k)}.
    let mut shifts = vec![ring.zero(); r];
    for k in 0..ring.rank() {
        let u: Vec<Rat> = (0..np).map(|i| ring.reduction(i)[k].clone()).collect();
        let c = chart
            .rational_coordinates(&u)
            .ok_or_else(|| GkzError::InvariantViolation("divisor relation outside the chart span".into()))?;
        let ek = ring.free_var(k);
        for (m, cm) in c.iter().enumerate() {
            shifts[m] = &shifts[m] + &ek.scale(cm);
        }
    }
    let divisors: Vec<RingElement> = (0..np).map(|i| ring.divisor(i)).collect();
    let mut inv_rising: BTreeMap<(usize, i64), RingElement> = BTreeMap::new();
    let eps: Vec<i64> = chart.basis.iter().map(|b| crate::arith::sign_pow(&b[0])).collect();
    let mut coeffs = BTreeMap::new();
    for m in multi_indices(r, order) {
        let mut l = vec![Int::zero(); np];
        for (mk, b) in m.iter().zip(&chart.basis) {
            for (li, bi) in l.iter_mut().zip(b) {
                *li += Int::from(*mk) * bi;
            }
        }
        let mut c = ring.one();
        let l0 = l[0].to_i64().ok_or_else(|| GkzError::InvalidInput("relation too large".into()))?;
        if l0 > 0 {
            return Err(GkzError::InvariantViolation(format!("l_0 = {l0} > 0 at index {m:?}")));
        }
        for k in 1..=(-l0) {
            c = &c * &(-&divisors[0]).add_scalar(&rat_int(k));
        }
        for j in 1..np {
            let lj = l[j].to_i64().ok_or_else(|| GkzError::InvalidInput("relation too large".into()))?;
            if lj >= 0 {
                let inv = match inv_rising.get(&(j, lj)) {
                    Some(v) => v.clone(),
                    None => {
                        let mut prod = ring.one();
                        for k in 1..=lj {
                            prod = &prod * &divisors[j].add_scalar(&rat_int(k));
                        }
                        let v = prod.invert_unit()?;
                        inv_rising.insert((j, lj), v.clone());
                        v
                    }
                };
                c = &c * &inv;
            } else {
                for k in 0..(-lj) {
                    c = &c * &divisors[j].add_scalar(&rat_int(-k));
                }
            }
        }
        let negative = m
            .iter()
            .zip(eps.iter().zip(&chart.signs))
            .filter(|(mk, (e, s))| *e * *s == -1 && *mk % 2 == 1)
            .count();
        if negative % 2 == 1 {
            c = -&c;
        }
        if !c.is_zero() {
            coeffs.insert(m, c);
        }
    }
    Ok(MultiSeries { ring: ring.clone(), chart: chart.clone(), coeffs, order, shifts })
}

/// Outcome of a recurrence check.
#[derive(Clone, Debug)]
pub struct Report {
    pub passed: bool,
    pub checked: usize,
    pub failure: Option<(Vec<u32>, RingElement)>,
}

/// Checks `Σ_δ p_δ(m − δ + ε) c_{m−δ} = 0` for every `|m| ≤ order` whose
/// required coefficients lie inside the truncation.
pub fn verify_annihilation(s: &MultiSeries, op: &ThetaOperator, order: u32) -> Report {
    let ring = &s.ring;
    let r = s.chart.rank();
    let order = order.min(s.order);
    let mut checked = 0;
    for m in multi_indices(r, order) {
        let mut total = ring.zero();
        let mut inside = true;
        for (d, p) in op.terms() {
            let src: Vec<i64> = m.iter().zip(d).map(|(a, b)| *a as i64 - b).collect();
            if src.iter().any(|x| *x < 0) {
                continue;
            }
            if src.iter().sum::<i64>() > s.order as i64 {
                inside = false;
                break;
            }
            let key: Vec<u32> = src.iter().map(|x| *x as u32).collect();
            let Some(c) = s.coeffs.get(&key) else { continue };
            let args: Vec<RingElement> = (0..r).map(|k| s.shifts[k].add_scalar(&rat_int(src[k]))).collect();
            total = &total + &(&eval_theta(p, &args, ring) * c);
        }
        if !inside {
            continue;
        }
        checked += 1;
        if !total.is_zero() {
            return Report { passed: false, checked, failure: Some((m, total)) };
        }
    }
    Report { passed: true, checked, failure: None }
}

/// Scalar series in `x` and formal logarithms `log x_k`.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct LogSeries {
    nvars: usize,
    order: u32,
    /// `(x exponent, log exponent) → coefficient`.
    terms: BTreeMap<(Vec<u32>, Vec<u32>), Rat>,
}

impl fmt::Debug for LogSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = (1..=self.nvars).map(|i| format!("x{i}")).collect();
        f.write_str(&self.pretty(&names, 6))
    }
}

impl LogSeries {
    pub fn new(nvars: usize, order: u32) -> Self {
        LogSeries { nvars, order, terms: BTreeMap::new() }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn add_term(&mut self, m: Vec<u32>, logs: Vec<u32>, c: Rat) {
        if c.is_zero() || m.iter().sum::<u32>() > self.order {
            return;
        }
        let k = (m, logs);
        let v = self.terms.entry(k.clone()).or_insert_with(Rat::zero);
        *v += c;
        if v.is_zero() {
            self.terms.remove(&k);
        }
    }

    pub fn coeff(&self, m: &[u32], logs: &[u32]) -> Rat {
        self.terms.get(&(m.to_vec(), logs.to_vec())).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(Vec<u32>, Vec<u32>), &Rat)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Highest total power of logarithms.
    pub fn log_degree(&self) -> u32 {
        self.terms.keys().map(|(_, l)| l.iter().sum()).max().unwrap_or(0)
    }

    /// Terms carrying exactly the given log monomial, as a log-free series.
    pub fn log_part(&self, logs: &[u32]) -> LogSeries {
        let mut out = LogSeries::new(self.nvars, self.order);
        let zero = vec![0; self.nvars];
        for ((m, l), c) in &self.terms {
            if l.as_slice() == logs {
                out.add_term(m.clone(), zero.clone(), c.clone());
            }
        }
        out
    }

    pub fn sub(&self, other: &LogSeries) -> LogSeries {
        let mut out = self.clone();
        for ((m, l), c) in &other.terms {
            out.add_term(m.clone(), l.clone(), -c.clone());
        }
        out
    }

    /// Product truncated at the smaller order.
    pub fn mul(&self, other: &LogSeries) -> LogSeries {
        let order = self.order.min(other.order);
        let mut out = LogSeries::new(self.nvars, order);
        for ((m1, l1), c1) in &self.terms {
            for ((m2, l2), c2) in &other.terms {
                let m: Vec<u32> = m1.iter().zip(m2).map(|(a, b)| a + b).collect();
                let l: Vec<u32> = l1.iter().zip(l2).map(|(a, b)| a + b).collect();
                out.add_term(m, l, c1 * c2);
            }
        }
        out
    }

    /// Text with `log(name)` factors; only terms of total x-degree ≤ `max_degree`.
    pub fn pretty(&self, names: &[String], max_degree: u32) -> String {
        let mut parts = Vec::new();
        for ((m, l), c) in &self.terms {
            if m.iter().sum::<u32>() > max_degree {
                continue;
            }
            let mut factors = vec![fmt_rat(c)];
            for (i, e) in m.iter().enumerate() {
                match e {
                    0 => {}
                    1 => factors.push(names[i].clone()),
                    _ => factors.push(format!("{}^{}", names[i], e)),
                }
            }
            for (i, e) in l.iter().enumerate() {
                match e {
                    0 => {}
                    1 => factors.push(format!("log({})", names[i])),
                    _ => factors.push(format!("log({})^{}", names[i], e)),
                }
            }
            parts.push(factors.join("*"));
        }
        if parts.is_empty() {
            "0".into()
        } else {
            parts.join(" + ")
        }
    }
}

/// Expands `x^ε = exp(Σ ε_k log x_k)` and splits the series along the ring
/// basis: entry `i` is the scalar coefficient series of basis monomial `i`.
pub fn extract_components(s: &MultiSeries) -> Vec<LogSeries> {
    let ring = &s.ring;
    let r = s.chart.rank();
    // exp(Σ ε_k L_k) as log-monomial → ring element.
    let mut sum: BTreeMap<Vec<u32>, RingElement> = BTreeMap::new();
    for k in 0..r {
        let mut e = vec![0; r];
        e[k] = 1;
        sum.insert(e, s.shifts[k].clone());
    }
    let mut expo: BTreeMap<Vec<u32>, RingElement> = BTreeMap::new();
    expo.insert(vec![0; r], ring.one());
    let mut power: BTreeMap<Vec<u32>, RingElement> = expo.clone();
    let mut n = 0i64;
    loop {
        n += 1;
        let mut next: BTreeMap<Vec<u32>, RingElement> = BTreeMap::new();
        for (a, x) in &power {
            for (b, y) in &sum {
                let key: Vec<u32> = a.iter().zip(b).map(|(p, q)| p + q).collect();
                let prod = (x * y).scale(&Rat::new(Int::one(), Int::from(n)));
                let entry = next.entry(key).or_insert_with(|| ring.zero());
                *entry = &*entry + &prod;
            }
        }
        next.retain(|_, v| !v.is_zero());
        if next.is_empty() {
            break;
        }
        for (k, v) in &next {
            let entry = expo.entry(k.clone()).or_insert_with(|| ring.zero());
            *entry = &*entry + v;
        }
        power = next;
    }
    let mut comps = vec![LogSeries::new(r, s.order); ring.length()];
    for (m, c) in &s.coeffs {
        for (logs, e) in &expo {
            let prod = c * e;
            for (i, v) in prod.coeffs().iter().enumerate() {
                comps[i].add_term(m.clone(), logs.clone(), v.clone());
            }
        }
    }
    comps
}

/// Multiplies every coefficient by `c_1`, the sum of the ray divisors.
pub fn c1_filter(s: &MultiSeries) -> MultiSeries {
    s.times(&s.ring.c1())
}

/// Rank over Q of a family of truncated log-series.
pub fn family_rank(series: &[LogSeries]) -> usize {
    let keys: Vec<&(Vec<u32>, Vec<u32>)> = series.iter().flat_map(|s| s.terms.keys()).sorted().dedup().collect();
    let rows: Vec<Vec<Rat>> = series
        .iter()
        .map(|s| keys.iter().map(|k| s.terms.get(*k).cloned().unwrap_or_else(Rat::zero)).collect())
        .collect();
    if keys.is_empty() {
        return 0;
    }
    rank_q(&rows)
}

/// Exact quotient `num / den` up to total x-degree `order`. The constant term
/// of `den` must be a nonzero rational without logarithms.
pub fn mirror_map(num: &LogSeries, den: &LogSeries, order: u32) -> Result<LogSeries, GkzError> {
    let n = den.nvars;
    let zero = vec![0u32; n];
    let c0 = den.coeff(&zero, &zero);
    let const_terms = den.terms.keys().filter(|(m, _)| m == &zero).count();
    if c0.is_zero() || const_terms != 1 {
        return Err(GkzError::NotAUnit);
    }
    let order = order.min(num.order).min(den.order);
    // 1/den = c0^{-1} Σ (−h)^k with h = den/c0 − 1.
    let inv_c0 = c0.recip();
    let mut h = LogSeries::new(n, order);
    for ((m, l), c) in &den.terms {
        if m != &zero {
            h.add_term(m.clone(), l.clone(), -(c * &inv_c0));
        }
    }
    let mut inv = LogSeries::new(n, order);
    inv.add_term(zero.clone(), zero.clone(), Rat::one());
    let mut power = inv.clone();
    for _ in 0..order {
        power = power.mul(&h);
        if power.is_zero() {
            break;
        }
        for ((m, l), c) in &power.terms {
            inv.add_term(m.clone(), l.clone(), c.clone());
        }
    }
    let mut out = num.mul(&inv);
    out.order = order;
    out.terms.retain(|(m, _), _| m.iter().sum::<u32>() <= order);
    let scaled: BTreeMap<_, _> = out.terms.iter().map(|(k, c)| (k.clone(), c * &inv_c0)).collect();
    out.terms = scaled;
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{factorial, int};
    use crate::fixtures;
    use crate::intlat::ivec;

    fn names(v: &[&str]) -> Vec<String> {
        v.iter().map(|s| s.to_string()).collect()
    }

    fn quintic_chart() -> ModuliChart {
        ModuliChart::standard(fixtures::quintic_lattice(), names(&["x"])).unwrap()
    }

    fn quintic_pf() -> ThetaOperator {
        let t = ThetaOperator::theta(1, 0);
        let mut op = ThetaOperator::single(vec![0], t.pow(5));
        let mut prod = QPoly::one(1);
        for i in 1..=5 {
            prod = prod.mul_ref(&ThetaOperator::affine(&[rat_int(5)], rat_int(i)));
        }
        op.add_term(vec![1], prod.scale(&rat_int(-1)));
        op
    }

    #[test]
    fn quintic_theta_form() {
        let lat = fixtures::quintic_polytope().relation_lattice();
        let b = box_operator(&ivec(&[-5, 1, 1, 1, 1, 1]), &lat).unwrap();
        assert_eq!(theta_form(&b, &quintic_chart()).unwrap(), quintic_pf());
        assert_eq!(box_operator(&ivec(&[-4, 1, 1, 1, 1, 1]), &lat), Err(GkzError::NotARelation));
        let n = names(&["a0", "a1", "a2", "a3", "a4", "a5"]);
        assert_eq!(b.pretty(&n), "∂a1 ∂a2 ∂a3 ∂a4 ∂a5 - ∂a0^5");
    }

    #[test]
    fn theta_times_picard_fuchs_factor() {
        // Θ ∘ (Θ^4 − 5x(5Θ+1)…(5Θ+4)) = Θ^5 − x(5Θ+1)…(5Θ+5)
        let t = ThetaOperator::theta(1, 0);
        let mut l = ThetaOperator::single(vec![0], t.pow(4));
        let mut prod = QPoly::constant(1, rat_int(-5));
        for i in 1..=4 {
            prod = prod.mul_ref(&ThetaOperator::affine(&[rat_int(5)], rat_int(i)));
        }
        l.add_term(vec![1], prod);
        let theta = ThetaOperator::single(vec![0], t);
        assert_eq!(theta.compose(&l), quintic_pf());
    }

    #[test]
    fn euler_operators_kill_relations() {
        let p = fixtures::enhanced_quintic_polytope();
        let ops = euler_operators(&p);
        assert_eq!(ops[0].coeffs, ivec(&[1; 8]));
        assert_eq!(ops[0].beta, int(-1));
        for l in fixtures::enhanced_quintic_lattice() {
            for op in &ops {
                assert!(op.eigenvalue(&l).is_zero());
            }
        }
    }

    #[test]
    fn basis_change_round_trip() {
        let op = quintic_pf();
        assert_eq!(change_basis(&op, &IntMatrix::identity(1)).unwrap(), op);
        let m = IntMatrix::from_i64(&[&[1, 1], &[0, 1]], 2).unwrap();
        let mut two = ThetaOperator::single(vec![1, 0], ThetaOperator::theta(2, 1));
        two.add_term(vec![0, 2], ThetaOperator::theta(2, 0).pow(2));
        let there = change_basis(&two, &m).unwrap();
        let back = change_basis(&there, &m.inverse_unimodular().unwrap()).unwrap();
        assert_eq!(back, two);
        let bad = IntMatrix::from_i64(&[&[2, 0], &[0, 1]], 2).unwrap();
        assert_eq!(change_basis(&two, &bad), Err(GkzError::NotUnimodular));
    }

    #[test]
    fn quintic_series_matches_factorial_ratio() {
        let poly = fixtures::quintic_polytope();
        let ring = crate::nilring::build_quotient(&poly, &crate::fan::sr_ideal(&fixtures::quintic_fan())).unwrap();
        let s = gamma_series(&poly, &quintic_chart(), &ring, 6).unwrap();
        let comps = extract_components(&s);
        for m in 0..=6u64 {
            let expected = Rat::from_integer(factorial(5 * m) / factorial(m).pow(5));
            assert_eq!(comps[0].coeff(&[m as u32], &[0]), expected);
        }
        assert!(verify_annihilation(&s, &quintic_pf(), 6).passed);
    }

    #[test]
    fn constant_series_is_killed_by_theta() {
        let poly = fixtures::quintic_polytope();
        let ring = crate::nilring::build_quotient(&poly, &crate::fan::sr_ideal(&fixtures::quintic_fan())).unwrap();
        let mut s = gamma_series(&poly, &quintic_chart(), &ring, 0).unwrap();
        s.shifts = vec![ring.zero()];
        let theta = ThetaOperator::single(vec![0], ThetaOperator::theta(1, 0));
        assert!(verify_annihilation(&s, &theta, 0).passed);
    }

    #[test]
    fn mirror_map_of_series_by_itself() {
        let mut w = LogSeries::new(1, 4);
        w.add_term(vec![0], vec![0], rat_int(1));
        w.add_term(vec![1], vec![0], rat_int(120));
        w.add_term(vec![2], vec![0], rat_int(113400));
        let one = mirror_map(&w, &w, 4).unwrap();
        let mut expected = LogSeries::new(1, 4);
        expected.add_term(vec![0], vec![0], rat_int(1));
        assert_eq!(one, expected);
        let mut z = LogSeries::new(1, 4);
        z.add_term(vec![1], vec![0], rat_int(1));
        assert_eq!(mirror_map(&w, &z, 4), Err(GkzError::NotAUnit));
    }

    #[test]
    fn multi_index_enumeration() {
        let v = multi_indices(2, 2);
        assert_eq!(v.len(), 6);
        assert_eq!(v[0], vec![0, 0]);
        assert_eq!(multi_indices(3, 3).len(), 20);
    }
}
