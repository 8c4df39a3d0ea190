//! Rational functions: multivariate with factored denominators, and
//! univariate over Q for a root parameter `t` with `x = t^r`.

use std::fmt;

use num_traits::{One, Zero};

use crate::arith::{fmt_rat, rat_int, Rat};
use crate::poly::QPoly;

/// `num / ∏ f_k^{e_k}` with each `f_k` non-constant and normalized so that its
/// largest monomial has coefficient 1. No gcd is taken; equality is decided by
/// cross multiplication.
#[derive(Clone)]
pub struct Frac {
    num: QPoly,
    den: Vec<(QPoly, u32)>,
}

impl fmt::Debug for Frac {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({:?})", self.num)?;
        for (p, e) in &self.den {
            write!(f, " / ({:?})^{}", p, e)?;
        }
        Ok(())
    }
}

impl PartialEq for Frac {
    fn eq(&self, other: &Self) -> bool {
        self.sub(other).is_zero()
    }
}

fn normalize(f: &QPoly) -> (QPoly, Rat) {
    let lead = f.leading().map(|(_, c)| c.clone()).expect("nonzero factor");
    (f.scale(&lead.recip()), lead)
}

impl Frac {
    pub fn zero(nvars: usize) -> Self {
        Frac { num: QPoly::zero(nvars), den: Vec::new() }
    }

    pub fn from_poly(p: QPoly) -> Self {
        Frac { num: p, den: Vec::new() }
    }

    pub fn constant(nvars: usize, c: Rat) -> Self {
        Frac::from_poly(QPoly::constant(nvars, c))
    }

    /// `num / f^e`. Returns `None` if `f` is zero.
    pub fn over(num: QPoly, f: &QPoly, e: u32) -> Option<Self> {
        let mut out = Frac::from_poly(num);
        out.divide_by(f, e)?;
        Some(out)
    }

    pub fn nvars(&self) -> usize {
        self.num.nvars()
    }

    pub fn num(&self) -> &QPoly {
        &self.num
    }

    pub fn den(&self) -> &[(QPoly, u32)] {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// Divides by `f^e` in place, folding constants into the numerator.
    pub fn divide_by(&mut self, f: &QPoly, e: u32) -> Option<()> {
        if f.is_zero() {
            return None;
        }
        if e == 0 {
            return Some(());
        }
        if f.is_constant() {
            let c = f.constant_term().recip();
            let mut s = Rat::one();
            for _ in 0..e {
                s *= &c;
            }
            self.num = self.num.scale(&s);
            return Some(());
        }
        let (g, lead) = normalize(f);
        let mut s = Rat::one();
        for _ in 0..e {
            s /= &lead;
        }
        self.num = self.num.scale(&s);
        match self.den.iter_mut().find(|(h, _)| *h == g) {
            Some(entry) => entry.1 += e,
            None => self.den.push((g, e)),
        }
        Some(())
    }

    /// Exponent of the normalized factor `f` in the denominator.
    pub fn order_of(&self, f: &QPoly) -> u32 {
        if f.is_constant() || f.is_zero() {
            return 0;
        }
        let (g, _) = normalize(f);
        self.den.iter().find(|(h, _)| *h == g).map(|(_, e)| *e).unwrap_or(0)
    }

    fn den_product(&self, skip: &[u32]) -> QPoly {
        let mut p = QPoly::one(self.nvars());
        for ((f, e), s) in self.den.iter().zip(skip) {
            if *e > *s {
                p = p.mul_ref(&f.pow(e - s));
            }
        }
        p
    }

    /// Numerators over the joint denominator.
    fn align(&self, other: &Frac) -> (QPoly, QPoly, Vec<(QPoly, u32)>) {
        let mut den: Vec<(QPoly, u32)> = self.den.clone();
        for (f, e) in &other.den {
            match den.iter_mut().find(|(h, _)| h == f) {
                Some(entry) => entry.1 = entry.1.max(*e),
                None => den.push((f.clone(), *e)),
            }
        }
        let lift = |x: &Frac| -> QPoly {
            let mut p = x.num.clone();
            for (f, e) in &den {
                let have = x.den.iter().find(|(h, _)| h == f).map(|(_, k)| *k).unwrap_or(0);
                if *e > have {
                    p = p.mul_ref(&f.pow(e - have));
                }
            }
            p
        };
        (lift(self), lift(other), den)
    }

    pub fn add(&self, other: &Frac) -> Frac {
        if other.is_zero() {
            return self.clone();
        }
        if self.is_zero() {
            return other.clone();
        }
        let (a, b, den) = self.align(other);
        let num = &a + &b;
        if num.is_zero() {
            return Frac::zero(self.nvars());
        }
        Frac { num, den }
    }

    pub fn sub(&self, other: &Frac) -> Frac {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Frac {
        Frac { num: -&self.num, den: self.den.clone() }
    }

    pub fn scale(&self, c: &Rat) -> Frac {
        if c.is_zero() {
            return Frac::zero(self.nvars());
        }
        Frac { num: self.num.scale(c), den: self.den.clone() }
    }

    pub fn mul_poly(&self, p: &QPoly) -> Frac {
        let num = self.num.mul_ref(p);
        if num.is_zero() {
            return Frac::zero(self.nvars());
        }
        Frac { num, den: self.den.clone() }
    }

    pub fn mul(&self, other: &Frac) -> Frac {
        let mut out = self.mul_poly(&other.num);
        if out.is_zero() {
            return out;
        }
        for (f, e) in &other.den {
            match out.den.iter_mut().find(|(h, _)| h == f) {
                Some(entry) => entry.1 += e,
                None => out.den.push((f.clone(), *e)),
            }
        }
        out
    }

    /// Partial derivative in variable `i`.
    pub fn derivative(&self, i: usize) -> Frac {
        let n = self.nvars();
        if self.is_zero() {
            return Frac::zero(n);
        }
        let moving: Vec<(usize, QPoly)> =
            self.den.iter().enumerate().map(|(k, (f, _))| (k, f.derivative(i))).filter(|(_, d)| !d.is_zero()).collect();
        if moving.is_empty() {
            let num = self.num.derivative(i);
            if num.is_zero() {
                return Frac::zero(n);
            }
            return Frac { num, den: self.den.clone() };
        }
        let mut all = QPoly::one(n);
        for (k, _) in &moving {
            all = all.mul_ref(&self.den[*k].0);
        }
        let mut num = self.num.derivative(i).mul_ref(&all);
        for (k, df) in &moving {
            let mut rest = QPoly::one(n);
            for (m, _) in &moving {
                if m != k {
                    rest = rest.mul_ref(&self.den[*m].0);
                }
            }
            let term = self.num.mul_ref(df).mul_ref(&rest).scale(&rat_int(self.den[*k].1 as i64));
            num = &num - &term;
        }
        let mut den = self.den.clone();
        for (k, _) in &moving {
            den[*k].1 += 1;
        }
        Frac { num, den }
    }

    /// `x_i ∂/∂x_i`.
    pub fn euler(&self, i: usize) -> Frac {
        self.derivative(i).mul_poly(&QPoly::var(self.nvars(), i))
    }

    /// Substitutes polynomials for the variables. `None` if a denominator
    /// factor becomes zero.
    pub fn substitute(&self, images: &[QPoly], new_nvars: usize) -> Option<Frac> {
        let mut out = Frac::from_poly(self.num.substitute(images, new_nvars));
        if out.is_zero() {
            return Some(Frac::zero(new_nvars));
        }
        for (f, e) in &self.den {
            out.divide_by(&f.substitute(images, new_nvars), *e)?;
        }
        Some(out)
    }

    /// Cancels denominator factors that divide the numerator.
    pub fn cancel(&mut self) {
        if self.num.is_zero() {
            self.den.clear();
            return;
        }
        for k in 0..self.den.len() {
            while self.den[k].1 > 0 {
                match self.num.try_div(&self.den[k].0) {
                    Some(q) => {
                        self.num = q;
                        self.den[k].1 -= 1;
                    }
                    None => break,
                }
            }
        }
        self.den.retain(|(_, e)| *e > 0);
    }

    /// Removes the factor `f` from the denominator entirely, returning its
    /// former exponent.
    pub fn strip_factor(&self, f: &QPoly) -> (Frac, u32) {
        let e = self.order_of(f);
        if e == 0 {
            return (self.clone(), 0);
        }
        let (g, lead) = normalize(f);
        let den = self.den.iter().filter(|(h, _)| *h != g).cloned().collect();
        let mut s = Rat::one();
        for _ in 0..e {
            s *= &lead;
        }
        (Frac { num: self.num.scale(&s), den }, e)
    }

    /// Writes `self = x_i^k · rest` with neither the numerator nor any
    /// denominator factor of `rest` divisible by `x_i`.
    pub fn split_var(&self, i: usize) -> (i64, Frac) {
        let n = self.nvars();
        if self.is_zero() {
            return (0, self.clone());
        }
        let mut k = self.num.monomial_content()[i] as i64;
        let mut shift = vec![0i32; n];
        shift[i] = -(k as i32);
        let mut out = Frac::from_poly(self.num.mul_term(&shift, &Rat::one()));
        for (f, e) in &self.den {
            let a = f.monomial_content()[i];
            let mut sh = vec![0i32; n];
            sh[i] = -a;
            k -= (a as i64) * (*e as i64);
            out.divide_by(&f.mul_term(&sh, &Rat::one()), *e).expect("nonzero factor");
        }
        (k, out)
    }

    /// Product of the denominator factors as one polynomial.
    pub fn den_poly(&self) -> QPoly {
        self.den_product(&vec![0; self.den.len()])
    }
}

/// Dense univariate polynomial over Q, lowest degree first.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct UPoly {
    coeffs: Vec<Rat>,
}

impl UPoly {
    pub fn new(mut coeffs: Vec<Rat>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        UPoly { coeffs }
    }

    pub fn zero() -> Self {
        UPoly { coeffs: Vec::new() }
    }

    pub fn constant(c: Rat) -> Self {
        UPoly::new(vec![c])
    }

    /// `c t^k`.
    pub fn monomial(c: Rat, k: usize) -> Self {
        let mut v = vec![Rat::zero(); k + 1];
        v[k] = c;
        UPoly::new(v)
    }

    pub fn coeffs(&self) -> &[Rat] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn lead(&self) -> Rat {
        self.coeffs.last().cloned().unwrap_or_else(Rat::zero)
    }

    pub fn coeff(&self, k: usize) -> Rat {
        self.coeffs.get(k).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn add(&self, o: &UPoly) -> UPoly {
        let n = self.coeffs.len().max(o.coeffs.len());
        UPoly::new((0..n).map(|k| self.coeff(k) + o.coeff(k)).collect())
    }

    pub fn neg(&self) -> UPoly {
        UPoly::new(self.coeffs.iter().map(|c| -c).collect())
    }

    pub fn sub(&self, o: &UPoly) -> UPoly {
        self.add(&o.neg())
    }

    pub fn scale(&self, s: &Rat) -> UPoly {
        UPoly::new(self.coeffs.iter().map(|c| c * s).collect())
    }

    pub fn mul(&self, o: &UPoly) -> UPoly {
        if self.is_zero() || o.is_zero() {
            return UPoly::zero();
        }
        let mut v = vec![Rat::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in o.coeffs.iter().enumerate() {
                v[i + j] += a * b;
            }
        }
        UPoly::new(v)
    }

    pub fn divrem(&self, d: &UPoly) -> (UPoly, UPoly) {
        let dd = d.degree().expect("division by zero polynomial");
        let lead = d.lead().recip();
        let mut rem = self.coeffs.clone();
        let mut q = vec![Rat::zero(); rem.len().saturating_sub(dd)];
        while rem.len() > dd && !rem.is_empty() {
            let k = rem.len() - 1 - dd;
            let c = rem.last().cloned().expect("nonempty") * &lead;
            for (j, dj) in d.coeffs.iter().enumerate() {
                rem[k + j] -= &c * dj;
            }
            q[k] = c;
            rem.pop();
            while rem.last().is_some_and(|c| c.is_zero()) {
                rem.pop();
            }
        }
        (UPoly::new(q), UPoly::new(rem))
    }

    pub fn monic(&self) -> UPoly {
        if self.is_zero() {
            return self.clone();
        }
        self.scale(&self.lead().recip())
    }

    pub fn gcd(&self, o: &UPoly) -> UPoly {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let r = a.divrem(&b).1;
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn derivative(&self) -> UPoly {
        UPoly::new(self.coeffs.iter().enumerate().skip(1).map(|(k, c)| c * rat_int(k as i64)).collect())
    }

    pub fn eval(&self, x: &Rat) -> Rat {
        self.coeffs.iter().rev().fold(Rat::zero(), |acc, c| acc * x + c)
    }

    pub fn display(&self, var: &str) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut parts = Vec::new();
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let m = match k {
                0 => String::new(),
                1 => var.to_string(),
                _ => format!("{var}^{k}"),
            };
            parts.push(match (k, c.is_one()) {
                (0, _) => fmt_rat(c),
                (_, true) => m,
                _ if *c == -Rat::one() => format!("-{m}"),
                _ => format!("{}*{m}", paren(c)),
            });
        }
        parts.join(" + ").replace("+ -", "- ")
    }
}

fn paren(c: &Rat) -> String {
    let s = fmt_rat(c);
    if s.contains('/') {
        format!("({s})")
    } else {
        s
    }
}

/// Element of Q(t), kept reduced with a monic denominator.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct TFunc {
    num: UPoly,
    den: UPoly,
}

impl TFunc {
    pub fn new(num: UPoly, den: UPoly) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        if num.is_zero() {
            return TFunc::zero();
        }
        let g = num.gcd(&den);
        let num = num.divrem(&g).0;
        let den = den.divrem(&g).0;
        let l = den.lead().recip();
        TFunc { num: num.scale(&l), den: den.scale(&l) }
    }

    pub fn zero() -> Self {
        TFunc { num: UPoly::zero(), den: UPoly::constant(Rat::one()) }
    }

    pub fn constant(c: Rat) -> Self {
        TFunc::new(UPoly::constant(c), UPoly::constant(Rat::one()))
    }

    /// `c t^k` for any integer `k`.
    pub fn monomial(c: Rat, k: i64) -> Self {
        if k >= 0 {
            TFunc::new(UPoly::monomial(c, k as usize), UPoly::constant(Rat::one()))
        } else {
            TFunc::new(UPoly::constant(c), UPoly::monomial(Rat::one(), (-k) as usize))
        }
    }

    /// From a (Laurent) polynomial in one variable.
    pub fn from_qpoly(p: &QPoly, var: usize) -> Self {
        let mut out = TFunc::zero();
        for (m, c) in p.terms() {
            debug_assert!(m.iter().enumerate().all(|(i, e)| i == var || *e == 0));
            out = out.add(&TFunc::monomial(c.clone(), m[var] as i64));
        }
        out
    }

    pub fn num(&self) -> &UPoly {
        &self.num
    }

    pub fn den(&self) -> &UPoly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn add(&self, o: &TFunc) -> TFunc {
        TFunc::new(self.num.mul(&o.den).add(&o.num.mul(&self.den)), self.den.mul(&o.den))
    }

    pub fn sub(&self, o: &TFunc) -> TFunc {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> TFunc {
        TFunc { num: self.num.neg(), den: self.den.clone() }
    }

    pub fn mul(&self, o: &TFunc) -> TFunc {
        TFunc::new(self.num.mul(&o.num), self.den.mul(&o.den))
    }

    pub fn scale(&self, c: &Rat) -> TFunc {
        TFunc::new(self.num.scale(c), self.den.clone())
    }

    pub fn inverse(&self) -> Option<TFunc> {
        if self.is_zero() {
            None
        } else {
            Some(TFunc::new(self.den.clone(), self.num.clone()))
        }
    }

    pub fn derivative(&self) -> TFunc {
        let n = self.num.derivative().mul(&self.den).sub(&self.num.mul(&self.den.derivative()));
        TFunc::new(n, self.den.mul(&self.den))
    }

    /// `(c, k)` if the function is `c t^k`.
    pub fn as_monomial(&self) -> Option<(Rat, i64)> {
        if self.is_zero() {
            return Some((Rat::zero(), 0));
        }
        let single = |p: &UPoly| -> Option<(Rat, i64)> {
            let nz: Vec<(usize, &Rat)> = p.coeffs().iter().enumerate().filter(|(_, c)| !c.is_zero()).collect();
            (nz.len() == 1).then(|| (nz[0].1.clone(), nz[0].0 as i64))
        };
        let (a, i) = single(&self.num)?;
        let (b, j) = single(&self.den)?;
        Some((a / b, i - j))
    }

    pub fn display(&self, var: &str) -> String {
        if self.den.degree() == Some(0) {
            return self.num.display(var);
        }
        format!("({})/({})", self.num.display(var), self.den.display(var))
    }
}

/// The formal root `t` with `x = t^r`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RootField {
    pub r: u32,
}

impl RootField {
    pub fn new(r: u32) -> Self {
        assert!(r > 0, "root exponent must be positive");
        RootField { r }
    }

    /// `Θ_x = (t/r) d/dt`.
    pub fn theta(&self, f: &TFunc) -> TFunc {
        f.derivative().mul(&TFunc::monomial(Rat::new(1.into(), (self.r as i64).into()), 1))
    }

    /// `x^k` as a function of `t`.
    pub fn x_power(&self, k: i64) -> TFunc {
        TFunc::monomial(Rat::one(), k * self.r as i64)
    }

    /// A monomial in `t` rewritten as `c*x^(p/q)`.
    pub fn in_x(&self, f: &TFunc) -> Option<String> {
        let (c, k) = f.as_monomial()?;
        if c.is_zero() || k == 0 {
            return None;
        }
        let g = num_integer::Integer::gcd(&k, &(self.r as i64));
        let (p, q) = (k / g, self.r as i64 / g);
        let xs = if q == 1 { format!("x^{p}") } else { format!("x^({p}/{q})") };
        Some(format!("{}*{xs}", paren(&c)))
    }

    /// Text like `(3/40)*t^5`, also written through `x` when it is a monomial.
    pub fn describe(&self, f: &TFunc) -> String {
        let base = f.display("t");
        match self.in_x(f) {
            Some(x) => format!("{base} = {x}"),
            None => base,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;

    fn v(n: usize, i: usize) -> QPoly {
        QPoly::var(n, i)
    }

    #[test]
    fn frac_arithmetic_and_cancellation() {
        let x = v(2, 0);
        let y = v(2, 1);
        let f = &x + &y;
        let a = Frac::over(QPoly::one(2), &f, 1).unwrap();
        let b = Frac::over(x.clone(), &f.scale(&rat_int(3)), 2).unwrap();
        let s = a.add(&b);
        let expected = Frac::over(&f + &x.scale(&rat(1, 9)), &f, 2).unwrap();
        assert_eq!(s, expected);
        let mut c = Frac::over(f.mul_ref(&x), &f, 3).unwrap();
        c.cancel();
        assert_eq!(c.order_of(&f), 2);
        assert!(Frac::over(x, &QPoly::zero(2), 1).is_none());
    }

    #[test]
    fn quotient_rule() {
        // d/dx (x / (x+y)^2) = (y - x)/(x+y)^3
        let x = v(2, 0);
        let y = v(2, 1);
        let f = &x + &y;
        let d = Frac::over(x.clone(), &f, 2).unwrap().derivative(0);
        assert_eq!(d, Frac::over(&y - &x, &f, 3).unwrap());
    }

    #[test]
    fn univariate_gcd_and_reduction() {
        let p = UPoly::new(vec![rat_int(-1), rat_int(0), rat_int(1)]);
        let q = UPoly::new(vec![rat_int(1), rat_int(1)]);
        assert_eq!(p.gcd(&q), q);
        let f = TFunc::new(p, q.clone());
        assert_eq!(f, TFunc::new(UPoly::new(vec![rat_int(-1), rat_int(1)]), UPoly::constant(rat_int(1))));
        assert_eq!(f.inverse().unwrap().mul(&f), TFunc::constant(rat_int(1)));
    }

    #[test]
    fn theta_on_monomials() {
        let k = RootField::new(10);
        let f = TFunc::monomial(rat(3, 20), 5);
        assert_eq!(k.theta(&f), TFunc::monomial(rat(3, 40), 5));
        assert_eq!(k.describe(&f), "(3/20)*t^5 = (3/20)*x^(1/2)");
        assert_eq!(k.x_power(1), TFunc::monomial(rat_int(1), 10));
    }
}
