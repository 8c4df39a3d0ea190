//! The Artinian quotient `Q[D_0..D_p] / J` of a simplicial fan: linear
//! elimination to free variables `E_1..E_r`, a Gröbner basis of the rewritten
//! Stanley-Reisner ideal, and dense arithmetic on the finite monomial basis.
//!
//! Monomials in the `E` variables are ordered graded-lexicographically with the
//! highest-index variable most significant.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_traits::{One, Zero};
use thiserror::Error;

use crate::arith::{fmt_rat, rat_from, Rat};
use crate::fan::MonomialIdeal;
use crate::intlat::Polytope;
use crate::linalg::{rank_q, rref_with_order, to_rat_rows};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum NilringError {
    #[error("quotient ring is not finite dimensional")]
    NonArtinian,
    #[error("element is not a unit")]
    NotAUnit,
    #[error("elements belong to different rings")]
    RingMismatch,
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

/// Exponent vector in the free variables.
pub type Exps = Vec<u32>;

fn grlex(a: &[u32], b: &[u32]) -> Ordering {
    let da: u32 = a.iter().sum();
    let db: u32 = b.iter().sum();
    da.cmp(&db).then_with(|| a.iter().rev().cmp(b.iter().rev()))
}

#[derive(Clone, PartialEq, Eq)]
struct Key(Exps);

impl Ord for Key {
    fn cmp(&self, other: &Self) -> Ordering {
        grlex(&self.0, &other.0)
    }
}

impl PartialOrd for Key {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Polynomial in the free variables, ordered for Gröbner reduction.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct EPoly {
    terms: BTreeMap<Key, Rat>,
}

impl EPoly {
    pub fn zero() -> Self {
        EPoly::default()
    }

    pub fn monomial(e: Exps, c: Rat) -> Self {
        let mut p = EPoly::zero();
        p.add_term(e, c);
        p
    }

    pub fn linear(coeffs: &[Rat]) -> Self {
        let r = coeffs.len();
        let mut p = EPoly::zero();
        for (i, c) in coeffs.iter().enumerate() {
            let mut e = vec![0; r];
            e[i] = 1;
            p.add_term(e, c.clone());
        }
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, e: Exps, c: Rat) {
        if c.is_zero() {
            return;
        }
        let k = Key(e);
        let v = self.terms.entry(k.clone()).or_insert_with(Rat::zero);
        *v += c;
        if v.is_zero() {
            self.terms.remove(&k);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exps, &Rat)> {
        self.terms.iter().map(|(k, c)| (&k.0, c))
    }

    pub fn leading(&self) -> Option<(&Exps, &Rat)> {
        self.terms.iter().next_back().map(|(k, c)| (&k.0, c))
    }

    pub fn mul(&self, other: &EPoly) -> EPoly {
        let mut out = EPoly::zero();
        for (a, ca) in &self.terms {
            for (b, cb) in &other.terms {
                out.add_term(a.0.iter().zip(&b.0).map(|(x, y)| x + y).collect(), ca * cb);
            }
        }
        out
    }

    fn mul_term(&self, e: &[u32], c: &Rat) -> EPoly {
        let mut out = EPoly::zero();
        for (a, ca) in &self.terms {
            out.add_term(a.0.iter().zip(e).map(|(x, y)| x + y).collect(), ca * c);
        }
        out
    }

    fn sub(&self, other: &EPoly) -> EPoly {
        let mut out = self.clone();
        for (k, c) in &other.terms {
            out.add_term(k.0.clone(), -c.clone());
        }
        out
    }

    fn monic(&self) -> EPoly {
        match self.leading() {
            None => self.clone(),
            Some((_, c)) => {
                let inv = c.recip();
                EPoly { terms: self.terms.iter().map(|(k, v)| (k.clone(), v * &inv)).collect() }
            }
        }
    }

    /// Full reduction modulo a list of polynomials with nonzero leading terms.
    pub fn reduce(&self, basis: &[EPoly]) -> EPoly {
        let mut p = self.clone();
        let mut rem = EPoly::zero();
        while let Some((lm, lc)) = p.leading().map(|(m, c)| (m.clone(), c.clone())) {
            let divisor = basis.iter().find(|g| {
                let (gm, _) = g.leading().expect("nonzero basis element");
                gm.iter().zip(&lm).all(|(a, b)| a <= b)
            });
            match divisor {
                Some(g) => {
                    let (gm, gc) = g.leading().unwrap();
                    let shift: Exps = lm.iter().zip(gm).map(|(a, b)| a - b).collect();
                    p = p.sub(&g.mul_term(&shift, &(&lc / gc)));
                }
                None => {
                    rem.add_term(lm.clone(), lc.clone());
                    p.terms.remove(&Key(lm));
                }
            }
        }
        rem
    }

    /// Human-readable form with variables `E1..Er`.
    pub fn display(&self) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let mut s = String::new();
        for (k, c) in self.terms.iter().rev() {
            let mono = mono_name(&k.0);
            let neg = c < &Rat::zero();
            let a = if neg { -c.clone() } else { c.clone() };
            if s.is_empty() {
                if neg {
                    s.push('-');
                }
            } else {
                s.push_str(if neg { " - " } else { " + " });
            }
            if mono.is_empty() {
                s.push_str(&fmt_rat(&a));
            } else if a.is_one() {
                s.push_str(&mono);
            } else {
                s.push_str(&format!("{}*{}", fmt_rat(&a), mono));
            }
        }
        s
    }
}

impl fmt::Debug for EPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display())
    }
}

/// `E1^2*E2`-style name; empty for the unit monomial.
pub fn mono_name(e: &[u32]) -> String {
    e.iter()
        .enumerate()
        .filter(|(_, x)| **x > 0)
        .map(|(i, x)| if *x == 1 { format!("E{}", i + 1) } else { format!("E{}^{}", i + 1, x) })
        .collect::<Vec<_>>()
        .join("*")
}

fn lcm(a: &[u32], b: &[u32]) -> Exps {
    a.iter().zip(b).map(|(x, y)| *x.max(y)).collect()
}

/// Reduced Gröbner basis by Buchberger's algorithm.
pub fn groebner(gens: &[EPoly]) -> Vec<EPoly> {
    let mut g: Vec<EPoly> = gens.iter().filter(|p| !p.is_zero()).map(|p| p.monic()).collect();
    let mut pairs: Vec<(usize, usize)> = (0..g.len()).flat_map(|i| (0..i).map(move |j| (j, i))).collect();
    while let Some((i, j)) = pairs.pop() {
        let (mi, _) = g[i].leading().unwrap();
        let (mj, _) = g[j].leading().unwrap();
        let l = lcm(mi, mj);
        if l.iter().zip(mi).zip(mj).all(|((l, a), b)| *l == a + b) {
            continue;
        }
        let si: Exps = l.iter().zip(mi).map(|(a, b)| a - b).collect();
        let sj: Exps = l.iter().zip(mj).map(|(a, b)| a - b).collect();
        let s = g[i].mul_term(&si, &Rat::one()).sub(&g[j].mul_term(&sj, &Rat::one()));
        let r = s.reduce(&g);
        if !r.is_zero() {
            let n = g.len();
            g.push(r.monic());
            pairs.extend((0..n).map(|k| (k, n)));
        }
    }
    // Minimize and inter-reduce.
    let mut minimal: Vec<EPoly> = Vec::new();
    for (i, p) in g.iter().enumerate() {
        let (m, _) = p.leading().unwrap();
        let redundant = g.iter().enumerate().any(|(j, q)| {
            let (n, _) = q.leading().unwrap();
            j != i && n.iter().zip(m).all(|(a, b)| a <= b) && (n != m || j < i)
        });
        if !redundant {
            minimal.push(p.clone());
        }
    }
    let mut reduced: Vec<EPoly> = Vec::new();
    for i in 0..minimal.len() {
        let others: Vec<EPoly> = minimal.iter().enumerate().filter(|(j, _)| *j != i).map(|(_, p)| p.clone()).collect();
        let (lm, _) = minimal[i].leading().map(|(m, c)| (m.clone(), c.clone())).unwrap();
        let tail = minimal[i].sub(&EPoly::monomial(lm.clone(), Rat::one()));
        let mut p = tail.reduce(&others);
        p.add_term(lm, Rat::one());
        reduced.push(p);
    }
    reduced.sort_by(|a, b| grlex(a.leading().unwrap().0, b.leading().unwrap().0));
    reduced
}

struct RingData {
    num_vars: usize,
    linear_relations: Vec<Vec<Rat>>,
    free_vars: Vec<usize>,
    reductions: Vec<Vec<Rat>>,
    sr: MonomialIdeal,
    sr_rewritten: Vec<EPoly>,
    groebner: Vec<EPoly>,
    basis: Vec<Exps>,
    /// `table[i][j]` is the normal form of `basis[i] * basis[j]`.
    table: Vec<Vec<Vec<Rat>>>,
}

/// `Q[D_0..D_p] / (SR + linear forms)`.
#[derive(Clone)]
pub struct DivisorRing {
    data: Arc<RingData>,
}

impl PartialEq for DivisorRing {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.data, &other.data)
    }
}

impl fmt::Debug for DivisorRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "DivisorRing(E{:?}, length {})", self.free_vars(), self.length())
    }
}

/// Builds the ring for a point configuration (index 0 the origin) and the
/// Stanley-Reisner ideal in variables `D_1..D_p`.
pub fn build_quotient(points: &Polytope, sr: &MonomialIdeal) -> Result<DivisorRing, NilringError> {
    let nv = points.len();
    if sr.generators().iter().flatten().any(|&i| i == 0 || i >= nv) {
        return Err(NilringError::InvalidInput("Stanley-Reisner index out of range".into()));
    }
    let lifted = points.lifted();
    let rows: Vec<Vec<Rat>> = to_rat_rows(&crate::linalg::transpose(&lifted, points.dim() + 1));
    if rank_q(&rows) != points.dim() + 1 {
        return Err(NilringError::InvalidInput("linear relations do not have full rank".into()));
    }
    // Eliminate D_0 first, then the highest indices.
    let order: Vec<usize> = std::iter::once(0).chain((1..nv).rev()).collect();
    let mut m = rows.clone();
    let pivots = rref_with_order(&mut m, Some(&order));
    let free_vars: Vec<usize> = (0..nv).filter(|i| !pivots.contains(i)).collect();
    let r = free_vars.len();
    let mut reductions = vec![vec![Rat::zero(); r]; nv];
    for (k, &f) in free_vars.iter().enumerate() {
        reductions[f][k] = Rat::one();
    }
    for (row, &p) in pivots.iter().enumerate() {
        for (k, &f) in free_vars.iter().enumerate() {
            reductions[p][k] = -m[row][f].clone();
        }
    }
    let sr_rewritten: Vec<EPoly> = sr
        .generators()
        .iter()
        .map(|g| g.iter().fold(EPoly::monomial(vec![0; r], Rat::one()), |acc, &i| acc.mul(&EPoly::linear(&reductions[i]))))
        .collect();
    let gb = groebner(&sr_rewritten);
    // Artinian iff every variable has a pure power among the leading terms.
    let mut bounds = vec![0u32; r];
    for (k, bound) in bounds.iter_mut().enumerate() {
        let pure = gb
            .iter()
            .filter_map(|g| {
                let (m, _) = g.leading().unwrap();
                m.iter().enumerate().all(|(j, e)| j == k || *e == 0).then_some(m[k])
            })
            .min();
        *bound = pure.ok_or(NilringError::NonArtinian)?;
    }
    let mut basis: Vec<Exps> = Vec::new();
    let mut e = vec![0u32; r];
    loop {
        let standard = gb.iter().all(|g| {
            let (m, _) = g.leading().unwrap();
            !m.iter().zip(&e).all(|(a, b)| a <= b)
        });
        if standard {
            basis.push(e.clone());
        }
        // Odometer over the box below the pure-power bounds.
        let mut k = 0;
        while k < r {
            e[k] += 1;
            if e[k] < bounds[k] {
                break;
            }
            e[k] = 0;
            k += 1;
        }
        if k == r {
            break;
        }
    }
    basis.sort_by(|a, b| grlex(a, b));
    let index: BTreeMap<Exps, usize> = basis.iter().cloned().enumerate().map(|(i, e)| (e, i)).collect();
    let to_dense = |p: &EPoly| -> Vec<Rat> {
        let mut v = vec![Rat::zero(); basis.len()];
        for (m, c) in p.terms() {
            v[index[m]] = c.clone();
        }
        v
    };
    let table = basis
        .iter()
        .map(|a| {
            basis
                .iter()
                .map(|b| {
                    let prod: Exps = a.iter().zip(b).map(|(x, y)| x + y).collect();
                    to_dense(&EPoly::monomial(prod, Rat::one()).reduce(&gb))
                })
                .collect()
        })
        .collect();
    Ok(DivisorRing {
        data: Arc::new(RingData {
            num_vars: nv,
            linear_relations: rows,
            free_vars,
            reductions,
            sr: sr.clone(),
            sr_rewritten,
            groebner: gb,
            basis,
            table,
        }),
    })
}

impl DivisorRing {
    pub fn num_vars(&self) -> usize {
        self.data.num_vars
    }

    /// Indices `i` of the divisors `D_i` chosen as `E_1..E_r`.
    pub fn free_vars(&self) -> &[usize] {
        &self.data.free_vars
    }

    pub fn rank(&self) -> usize {
        self.data.free_vars.len()
    }

    pub fn linear_relations(&self) -> &[Vec<Rat>] {
        &self.data.linear_relations
    }

    pub fn monomial_ideal(&self) -> &MonomialIdeal {
        &self.data.sr
    }

    /// Stanley-Reisner generators after substituting the linear reductions.
    pub fn rewritten_ideal(&self) -> &[EPoly] {
        &self.data.sr_rewritten
    }

    pub fn groebner_basis(&self) -> &[EPoly] {
        &self.data.groebner
    }

    pub fn basis(&self) -> &[Exps] {
        &self.data.basis
    }

    pub fn basis_names(&self) -> Vec<String> {
        self.data.basis.iter().map(|e| if e.iter().all(|x| *x == 0) { "1".into() } else { mono_name(e) }).collect()
    }

    pub fn length(&self) -> usize {
        self.data.basis.len()
    }

    /// Coefficients of `D_i` as a linear form in `E_1..E_r`.
    pub fn reduction(&self, i: usize) -> &[Rat] {
        &self.data.reductions[i]
    }

    pub fn zero(&self) -> RingElement {
        RingElement { ring: self.clone(), coeffs: vec![Rat::zero(); self.length()] }
    }

    pub fn one(&self) -> RingElement {
        self.scalar(Rat::one())
    }

    pub fn scalar(&self, c: Rat) -> RingElement {
        let mut x = self.zero();
        x.coeffs[0] = c;
        x
    }

    pub fn from_epoly(&self, p: &EPoly) -> RingElement {
        let red = p.reduce(&self.data.groebner);
        let mut x = self.zero();
        for (m, c) in red.terms() {
            let i = self.data.basis.iter().position(|b| b == m).expect("normal form is standard");
            x.coeffs[i] = c.clone();
        }
        x
    }

    /// Class of `E_k` (zero-based).
    pub fn free_var(&self, k: usize) -> RingElement {
        let mut e = vec![0; self.rank()];
        e[k] = 1;
        self.from_epoly(&EPoly::monomial(e, Rat::one()))
    }

    /// Class of the divisor `D_i`.
    pub fn divisor(&self, i: usize) -> RingElement {
        self.from_epoly(&EPoly::linear(&self.data.reductions[i]))
    }

    /// Sum of the ray divisors `D_1..D_p`.
    pub fn c1(&self) -> RingElement {
        let mut x = self.zero();
        for i in 1..self.num_vars() {
            x = &x + &self.divisor(i);
        }
        x
    }

    pub fn from_coeffs(&self, coeffs: Vec<Rat>) -> Result<RingElement, NilringError> {
        if coeffs.len() != self.length() {
            return Err(NilringError::InvalidInput("coefficient vector length".into()));
        }
        Ok(RingElement { ring: self.clone(), coeffs })
    }

    pub fn add(&self, x: &RingElement, y: &RingElement) -> Result<RingElement, NilringError> {
        self.check(x)?;
        self.check(y)?;
        Ok(x + y)
    }

    pub fn mul(&self, x: &RingElement, y: &RingElement) -> Result<RingElement, NilringError> {
        self.check(x)?;
        self.check(y)?;
        Ok(x * y)
    }

    /// Normal form of a polynomial in the free variables.
    pub fn normal_form(&self, p: &EPoly) -> RingElement {
        self.from_epoly(p)
    }

    fn check(&self, x: &RingElement) -> Result<(), NilringError> {
        if &x.ring == self {
            Ok(())
        } else {
            Err(NilringError::RingMismatch)
        }
    }

    /// Matrix of multiplication by `x` in the monomial basis (columns are images).
    pub fn mul_matrix(&self, x: &RingElement) -> Vec<Vec<Rat>> {
        let n = self.length();
        let images: Vec<Vec<Rat>> = (0..n)
            .map(|j| {
                let mut b = self.zero();
                b.coeffs[j] = Rat::one();
                (x * &b).coeffs
            })
            .collect();
        crate::linalg::transpose(&images, n)
    }
}

/// Element of a [`DivisorRing`], dense in the monomial basis.
#[derive(Clone, PartialEq)]
pub struct RingElement {
    ring: DivisorRing,
    coeffs: Vec<Rat>,
}

impl fmt::Debug for RingElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display())
    }
}

impl RingElement {
    pub fn ring(&self) -> &DivisorRing {
        &self.ring
    }

    pub fn coeffs(&self) -> &[Rat] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn constant_term(&self) -> &Rat {
        &self.coeffs[0]
    }

    pub fn scale(&self, s: &Rat) -> RingElement {
        RingElement { ring: self.ring.clone(), coeffs: self.coeffs.iter().map(|c| c * s).collect() }
    }

    pub fn add_scalar(&self, s: &Rat) -> RingElement {
        let mut x = self.clone();
        x.coeffs[0] += s;
        x
    }

    pub fn pow(&self, e: u32) -> RingElement {
        let mut out = self.ring.one();
        for _ in 0..e {
            out = &out * self;
        }
        out
    }

    /// Inverse via the geometric series in the nilpotent part.
    pub fn invert_unit(&self) -> Result<RingElement, NilringError> {
        let c = self.constant_term().clone();
        if c.is_zero() {
            return Err(NilringError::NotAUnit);
        }
        let cinv = c.recip();
        // x = c (1 + n) with n nilpotent.
        let n = self.scale(&cinv).add_scalar(&-Rat::one());
        let neg_n = -&n;
        let mut term = self.ring.one();
        let mut sum = self.ring.one();
        loop {
            term = &term * &neg_n;
            if term.is_zero() {
                break;
            }
            sum = &sum + &term;
        }
        Ok(sum.scale(&cinv))
    }

    /// Polynomial in the free variables with the same class.
    pub fn to_epoly(&self) -> EPoly {
        let mut p = EPoly::zero();
        for (b, c) in self.ring.basis().iter().zip(&self.coeffs) {
            p.add_term(b.clone(), c.clone());
        }
        p
    }

    pub fn display(&self) -> String {
        self.to_epoly().display()
    }

    /// Basis-name to coefficient map of the nonzero entries.
    pub fn named_coeffs(&self) -> Vec<(String, Rat)> {
        self.ring
            .basis_names()
            .into_iter()
            .zip(&self.coeffs)
            .filter(|(_, c)| !c.is_zero())
            .map(|(n, c)| (n, c.clone()))
            .collect()
    }
}

impl<'a> Add<&'a RingElement> for &'a RingElement {
    type Output = RingElement;
    fn add(self, rhs: &'a RingElement) -> RingElement {
        assert!(self.ring == rhs.ring, "ring mismatch");
        RingElement { ring: self.ring.clone(), coeffs: self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| a + b).collect() }
    }
}

impl<'a> Sub<&'a RingElement> for &'a RingElement {
    type Output = RingElement;
    fn sub(self, rhs: &'a RingElement) -> RingElement {
        assert!(self.ring == rhs.ring, "ring mismatch");
        RingElement { ring: self.ring.clone(), coeffs: self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| a - b).collect() }
    }
}

impl Neg for &RingElement {
    type Output = RingElement;
    fn neg(self) -> RingElement {
        RingElement { ring: self.ring.clone(), coeffs: self.coeffs.iter().map(|a| -a).collect() }
    }
}

impl<'a> Mul<&'a RingElement> for &'a RingElement {
    type Output = RingElement;
    fn mul(self, rhs: &'a RingElement) -> RingElement {
        assert!(self.ring == rhs.ring, "ring mismatch");
        let n = self.coeffs.len();
        let mut out = vec![Rat::zero(); n];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                let ab = a * b;
                for (o, t) in out.iter_mut().zip(&self.ring.data.table[i][j]) {
                    if !t.is_zero() {
                        *o += &ab * t;
                    }
                }
            }
        }
        RingElement { ring: self.ring.clone(), coeffs: out }
    }
}

/// Rank over Q of a family of rational vectors.
pub fn rank_of(vectors: &[Vec<Rat>]) -> usize {
    rank_q(vectors)
}

/// Rational vector of an integer slice.
pub fn rat_vec(v: &[crate::arith::Int]) -> Vec<Rat> {
    v.iter().map(rat_from).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat_int;
    use crate::fan::sr_ideal;
    use crate::fixtures;

    fn p4_ring() -> DivisorRing {
        build_quotient(&fixtures::quintic_polytope(), &sr_ideal(&fixtures::quintic_fan())).unwrap()
    }

    #[test]
    fn p4_ring_is_truncated_polynomial_ring() {
        let r = p4_ring();
        assert_eq!(r.length(), 5);
        assert_eq!(r.free_vars(), &[1]);
        for i in 1..=5 {
            assert_eq!(r.divisor(i), r.free_var(0));
        }
        assert!(r.free_var(0).pow(5).is_zero());
        assert!(!r.free_var(0).pow(4).is_zero());
    }

    #[test]
    fn geometric_series_inverse() {
        let r = p4_ring();
        let e = r.free_var(0);
        let x = &r.one() + &e;
        let inv = x.invert_unit().unwrap();
        let expected = [1, -1, 1, -1, 1]
            .iter()
            .enumerate()
            .fold(r.zero(), |acc, (k, c)| &acc + &e.pow(k as u32).scale(&rat_int(*c)));
        assert_eq!(inv, expected);
        assert_eq!(e.invert_unit(), Err(NilringError::NotAUnit));
    }

    #[test]
    fn one_is_neutral() {
        let r = p4_ring();
        let x = &r.free_var(0).scale(&rat_int(3)) + &r.scalar(rat_int(2));
        assert_eq!(&r.one() * &x, x);
    }

    #[test]
    fn non_artinian_detected() {
        // A single cone in the plane leaves the quotient infinite.
        let poly = Polytope::from_i64(&[&[0, 0], &[1, 0], &[0, 1], &[-1, -1]]).unwrap();
        let sr = MonomialIdeal::new(vec![]);
        assert_eq!(build_quotient(&poly, &sr).err(), Some(NilringError::NonArtinian));
    }

    #[test]
    fn buchberger_on_small_ideal() {
        // (x^2 - y, x y - 1) in grlex with y > x.
        let p = |t: &[(u32, u32, i64)]| {
            let mut e = EPoly::zero();
            for (a, b, c) in t {
                e.add_term(vec![*a, *b], rat_int(*c));
            }
            e
        };
        let g = groebner(&[p(&[(2, 0, 1), (0, 1, -1)]), p(&[(1, 1, 1), (0, 0, -1)])]);
        // Every generator reduces to zero modulo the basis.
        assert!(p(&[(2, 0, 1), (0, 1, -1)]).reduce(&g).is_zero());
        assert!(p(&[(1, 1, 1), (0, 0, -1)]).reduce(&g).is_zero());
        assert!(p(&[(3, 0, 1), (0, 0, -1)]).reduce(&g).is_zero());
    }
}
