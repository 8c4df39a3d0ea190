//! Sparse multivariate Laurent polynomials over an exact coefficient ring.
//!
//! Exponents are signed so that formal root parameters may appear with
//! negative powers. Terms are kept in a `BTreeMap`, which gives every
//! polynomial a canonical, deterministic iteration order.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use crate::arith::Rat;

/// Exact coefficient ring used by [`Poly`].
pub trait Coeff:
    Clone
    + PartialEq
    + fmt::Debug
    + Zero
    + One
    + Neg<Output = Self>
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
{
    fn from_i64(v: i64) -> Self;
    /// Multiplicative inverse, `None` for non-units.
    fn inverse(&self) -> Option<Self>;
}

impl Coeff for Rat {
    fn from_i64(v: i64) -> Self {
        crate::arith::rat_int(v)
    }
    fn inverse(&self) -> Option<Self> {
        if self.is_zero() {
            None
        } else {
            Some(self.recip())
        }
    }
}

pub type Mono = Vec<i32>;

#[derive(Clone, PartialEq)]
pub struct Poly<C> {
    nvars: usize,
    terms: BTreeMap<Mono, C>,
}

pub type QPoly = Poly<Rat>;

impl<C: Coeff> fmt::Debug for Poly<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({:?})", c)?;
            for (i, e) in m.iter().enumerate() {
                if *e != 0 {
                    write!(f, "*x{}^{}", i, e)?;
                }
            }
        }
        Ok(())
    }
}

impl<C: Coeff> Poly<C> {
    pub fn zero(nvars: usize) -> Self {
        Poly { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: C) -> Self {
        let mut p = Poly::zero(nvars);
        p.add_term(vec![0; nvars], c);
        p
    }

    pub fn one(nvars: usize) -> Self {
        Poly::constant(nvars, C::one())
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut m = vec![0; nvars];
        m[i] = 1;
        Poly::monomial(m, C::one())
    }

    pub fn monomial(m: Mono, c: C) -> Self {
        let mut p = Poly::zero(m.len());
        p.add_term(m, c);
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
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

    pub fn terms(&self) -> impl Iterator<Item = (&Mono, &C)> {
        self.terms.iter()
    }

    pub fn into_terms(self) -> impl Iterator<Item = (Mono, C)> {
        self.terms.into_iter()
    }

    pub fn coeff(&self, m: &[i32]) -> C {
        self.terms.get(m).cloned().unwrap_or_else(C::zero)
    }

    /// Term with the largest monomial.
    pub fn leading(&self) -> Option<(&Mono, &C)> {
        self.terms.iter().next_back()
    }

    pub fn constant_term(&self) -> C {
        self.coeff(&vec![0; self.nvars])
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|m| m.iter().all(|e| *e == 0))
    }

    pub fn add_term(&mut self, m: Mono, c: C) {
        debug_assert_eq!(m.len(), self.nvars);
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = o.get().clone() + c;
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    pub fn add_assign_ref(&mut self, other: &Poly<C>) {
        for (m, c) in &other.terms {
            self.add_term(m.clone(), c.clone());
        }
    }

    pub fn add_scaled(&mut self, other: &Poly<C>, s: &C) {
        if s.is_zero() {
            return;
        }
        for (m, c) in &other.terms {
            self.add_term(m.clone(), c.clone() * s.clone());
        }
    }

    pub fn scale(&self, s: &C) -> Self {
        if s.is_zero() {
            return Poly::zero(self.nvars);
        }
        Poly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), c.clone() * s.clone())).collect(),
        }
    }

    /// Multiplies by `c * x^shift`.
    pub fn mul_term(&self, shift: &[i32], c: &C) -> Self {
        let mut out = Poly::zero(self.nvars);
        if c.is_zero() {
            return out;
        }
        for (m, a) in &self.terms {
            let nm: Mono = m.iter().zip(shift).map(|(x, y)| x + y).collect();
            out.terms.insert(nm, a.clone() * c.clone());
        }
        out
    }

    pub fn mul_ref(&self, other: &Poly<C>) -> Self {
        let mut out = Poly::zero(self.nvars);
        if self.is_zero() || other.is_zero() {
            return out;
        }
        let (small, big) = if self.len() <= other.len() { (self, other) } else { (other, self) };
        for (m, c) in &small.terms {
            for (n, d) in &big.terms {
                let nm: Mono = m.iter().zip(n).map(|(x, y)| x + y).collect();
                out.add_term(nm, c.clone() * d.clone());
            }
        }
        out
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Poly::one(self.nvars);
        for _ in 0..e {
            acc = acc.mul_ref(self);
        }
        acc
    }

    /// Partial derivative with respect to variable `i`.
    pub fn derivative(&self, i: usize) -> Self {
        let mut out = Poly::zero(self.nvars);
        for (m, c) in &self.terms {
            if m[i] == 0 {
                continue;
            }
            let mut nm = m.clone();
            nm[i] -= 1;
            out.add_term(nm, c.clone() * C::from_i64(m[i] as i64));
        }
        out
    }

    /// Euler operator `x_i d/dx_i`, i.e. multiplication of each term by its exponent.
    pub fn euler(&self, i: usize) -> Self {
        let mut out = Poly::zero(self.nvars);
        for (m, c) in &self.terms {
            if m[i] != 0 {
                out.terms.insert(m.clone(), c.clone() * C::from_i64(m[i] as i64));
            }
        }
        out
    }

    pub fn map_coeffs<D: Coeff>(&self, f: impl Fn(&C) -> D) -> Poly<D> {
        let mut out = Poly::zero(self.nvars);
        for (m, c) in &self.terms {
            out.add_term(m.clone(), f(c));
        }
        out
    }

    pub fn max_degree(&self, i: usize) -> Option<i32> {
        self.terms.keys().map(|m| m[i]).max()
    }

    pub fn min_degree(&self, i: usize) -> Option<i32> {
        self.terms.keys().map(|m| m[i]).min()
    }

    pub fn total_degree(&self) -> Option<i32> {
        self.terms.keys().map(|m| m.iter().sum()).max()
    }

    /// Composition. Variable `i` of `self` is replaced by `images[i]`, a polynomial
    /// in `new_nvars` variables. Negative exponents require monomial images with
    /// unit coefficient.
    pub fn substitute(&self, images: &[Poly<C>], new_nvars: usize) -> Self {
        assert_eq!(images.len(), self.nvars);
        let mut cache: Vec<BTreeMap<i32, Poly<C>>> = vec![BTreeMap::new(); self.nvars];
        let mut out = Poly::zero(new_nvars);
        for (m, c) in &self.terms {
            let mut term = Poly::constant(new_nvars, c.clone());
            for (i, &e) in m.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let factor = cache[i]
                    .entry(e)
                    .or_insert_with(|| power_of(&images[i], e, new_nvars))
                    .clone();
                term = term.mul_ref(&factor);
            }
            out.add_assign_ref(&term);
        }
        out
    }

    /// Sets variable `i` to the constant `v` (non-negative exponents only).
    pub fn eval_var(&self, i: usize, v: &C) -> Self {
        let mut out = Poly::zero(self.nvars);
        for (m, c) in &self.terms {
            assert!(m[i] >= 0, "eval_var on negative exponent");
            let mut nm = m.clone();
            nm[i] = 0;
            let mut f = c.clone();
            for _ in 0..m[i] {
                f = f * v.clone();
            }
            out.add_term(nm, f);
        }
        out
    }

    /// Reorders and drops variables: output variable `j` is input variable `keep[j]`.
    /// Dropped variables must not occur.
    pub fn reindex(&self, keep: &[usize]) -> Self {
        let mut out = Poly::zero(keep.len());
        for (m, c) in &self.terms {
            debug_assert!(m
                .iter()
                .enumerate()
                .all(|(i, e)| *e == 0 || keep.contains(&i)));
            let nm: Mono = keep.iter().map(|&k| m[k]).collect();
            out.add_term(nm, c.clone());
        }
        out
    }

    /// Embeds into a larger variable set: input variable `i` becomes `slots[i]`.
    pub fn embed(&self, slots: &[usize], new_nvars: usize) -> Self {
        let mut out = Poly::zero(new_nvars);
        for (m, c) in &self.terms {
            let mut nm = vec![0; new_nvars];
            for (i, e) in m.iter().enumerate() {
                nm[slots[i]] += e;
            }
            out.add_term(nm, c.clone());
        }
        out
    }

    /// Splits off the largest monomial factor `x^g` (componentwise minimum exponent).
    pub fn monomial_content(&self) -> Mono {
        let mut g: Option<Mono> = None;
        for m in self.terms.keys() {
            g = Some(match g {
                None => m.clone(),
                Some(g) => g.iter().zip(m).map(|(a, b)| *a.min(b)).collect(),
            });
        }
        g.unwrap_or_else(|| vec![0; self.nvars])
    }

    /// Exact division. Returns `None` when `d` does not divide `self`.
    pub fn try_div(&self, d: &Poly<C>) -> Option<Self> {
        if d.is_zero() {
            return None;
        }
        let mut rem = self.clone();
        let mut quo = Poly::zero(self.nvars);
        let (dm, dc) = d.terms.iter().next_back().map(|(m, c)| (m.clone(), c.clone()))?;
        let dinv = dc.inverse()?;
        let lower: Mono = {
            let a = self.monomial_content();
            let b = d.monomial_content();
            a.iter().zip(&b).map(|(x, y)| x - y).collect()
        };
        let upper: Mono = (0..self.nvars)
            .map(|i| self.max_degree(i).unwrap_or(0) - d.max_degree(i).unwrap_or(0))
            .collect();
        while let Some((m, c)) = rem.terms.iter().next_back().map(|(m, c)| (m.clone(), c.clone())) {
            let qm: Mono = m.iter().zip(&dm).map(|(x, y)| x - y).collect();
            if qm.iter().zip(&lower).any(|(q, l)| q < l) || qm.iter().zip(&upper).any(|(q, u)| q > u) {
                return None;
            }
            let qc = c * dinv.clone();
            let step = d.mul_term(&qm, &qc);
            rem = &rem - &step;
            quo.add_term(qm, qc);
        }
        Some(quo)
    }
}

impl Poly<Rat> {
    /// Readable form such as `5*t^2 - 3/2*t + 1`, highest terms first.
    pub fn display_with(&self, names: &[String]) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let mut s = String::new();
        for (m, c) in self.terms.iter().rev() {
            let mono: Vec<String> = m
                .iter()
                .enumerate()
                .filter(|(_, e)| **e != 0)
                .map(|(i, e)| if *e == 1 { names[i].clone() } else { format!("{}^{}", names[i], e) })
                .collect();
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
                s.push_str(&crate::arith::fmt_rat(&a));
            } else if a.is_one() {
                s.push_str(&mono.join("*"));
            } else {
                s.push_str(&format!("{}*{}", crate::arith::fmt_rat(&a), mono.join("*")));
            }
        }
        s
    }
}

fn power_of<C: Coeff>(p: &Poly<C>, e: i32, nvars: usize) -> Poly<C> {
    if e >= 0 {
        return p.pow(e as u32);
    }
    assert_eq!(p.len(), 1, "negative power of a non-monomial");
    let (m, c) = p.terms().next().unwrap();
    let ci = c.inverse().expect("negative power of a non-unit");
    let mut cc = C::one();
    for _ in 0..(-e) {
        cc = cc * ci.clone();
    }
    let nm: Mono = m.iter().map(|x| x * e).collect();
    let _ = nvars;
    Poly::monomial(nm, cc)
}

impl<'a, C: Coeff> Add<&'a Poly<C>> for &'a Poly<C> {
    type Output = Poly<C>;
    fn add(self, rhs: &'a Poly<C>) -> Poly<C> {
        let mut out = self.clone();
        out.add_assign_ref(rhs);
        out
    }
}

impl<'a, C: Coeff> Sub<&'a Poly<C>> for &'a Poly<C> {
    type Output = Poly<C>;
    fn sub(self, rhs: &'a Poly<C>) -> Poly<C> {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), -c.clone());
        }
        out
    }
}

impl<'a, C: Coeff> Mul<&'a Poly<C>> for &'a Poly<C> {
    type Output = Poly<C>;
    fn mul(self, rhs: &'a Poly<C>) -> Poly<C> {
        self.mul_ref(rhs)
    }
}

impl<C: Coeff> Neg for &Poly<C> {
    type Output = Poly<C>;
    fn neg(self) -> Poly<C> {
        self.scale(&(-C::one()))
    }
}
