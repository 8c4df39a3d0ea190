//! Helpers shared by the integration tests.

#![allow(dead_code)]

use std::collections::BTreeSet;

use gkzkit::arith::{rat, rat_int, Rat};
use gkzkit::fan::Fan;
use gkzkit::formcalc::Form;
use gkzkit::intlat::{ivec, IntVector, Polytope};
use gkzkit::poly::QPoly;
use gkzkit::ratfunc::Frac;
use proptest::prelude::*;

/// Complete unimodular fan of P^n refined by a few star subdivisions at
/// sums of two rays of a common cone.
pub fn random_fan(n: usize, picks: &[(usize, usize, usize)]) -> Fan {
    let mut rays: Vec<IntVector> = (0..n).map(|i| ivec(&(0..n).map(|j| if i == j { 1 } else { 0 }).collect::<Vec<_>>())).collect();
    rays.push(ivec(&vec![-1; n]));
    let mut fan = Fan::simplex_fan(rays).unwrap();
    for &(c, a, b) in picks {
        let cone = fan.max_cones()[c % fan.max_cones().len()].clone();
        let (i, j) = (cone[a % cone.len()], cone[b % cone.len()]);
        if i == j {
            continue;
        }
        let r: IntVector = fan.rays()[i].iter().zip(&fan.rays()[j]).map(|(x, y)| x + y).collect();
        if let Ok(f) = fan.star_subdivide(r) {
            fan = f;
        }
    }
    fan
}

pub fn fan_polytope(fan: &Fan) -> Polytope {
    let mut pts = vec![ivec(&vec![0; fan.dim()])];
    pts.extend(fan.rays().iter().cloned());
    Polytope::reflexive_style(pts).unwrap()
}

/// Minimal subsets of rays lying in no maximal cone, by exhaustive scan.
pub fn brute_force_non_faces(fan: &Fan) -> BTreeSet<Vec<usize>> {
    let n = fan.rays().len();
    let in_cone = |s: &[usize]| fan.max_cones().iter().any(|c| s.iter().all(|i| c.contains(i)));
    let mut out = BTreeSet::new();
    for mask in 1u32..(1 << n) {
        let s: Vec<usize> = (0..n).filter(|i| mask & (1 << i) != 0).collect();
        if in_cone(&s) {
            continue;
        }
        let minimal = (0..s.len()).all(|k| {
            let sub: Vec<usize> = s.iter().enumerate().filter(|(j, _)| *j != k).map(|(_, x)| *x).collect();
            in_cone(&sub)
        });
        if minimal {
            out.insert(s.iter().map(|i| i + 1).collect());
        }
    }
    out
}

pub fn poly_strategy(nvars: usize, max_terms: usize, max_deg: i32) -> impl Strategy<Value = QPoly> {
    prop::collection::vec((prop::collection::vec(0..=max_deg, nvars), -4i64..=4), 1..=max_terms).prop_map(move |terms| {
        let mut p = QPoly::zero(nvars);
        for (m, c) in terms {
            p.add_term(m, rat_int(c));
        }
        p
    })
}

/// `num / (1 + den)^e`, never singular at the origin.
pub fn frac_strategy(nvars: usize) -> impl Strategy<Value = Frac> {
    (poly_strategy(nvars, 3, 2), poly_strategy(nvars, 2, 1), 0u32..=2).prop_map(move |(num, den, e)| {
        let d = &QPoly::one(nvars) + &den;
        Frac::over(num.clone(), &d, e).unwrap_or_else(|| Frac::from_poly(num))
    })
}

/// Random form of mixed degree on three coordinates.
pub fn form_strategy() -> impl Strategy<Value = Form> {
    prop::collection::vec((0u32..8, frac_strategy(3)), 1..=3).prop_map(|parts| {
        let mut f = Form::zero(3, 3);
        for (mask, c) in parts {
            let idx: Vec<usize> = (0..3).filter(|i| mask & (1 << i) != 0).collect();
            f = f.add(&Form::monomial(3, c, &idx));
        }
        f
    })
}

pub fn ring_elements(len: usize) -> impl Strategy<Value = Vec<Rat>> {
    prop::collection::vec((-5i64..=5, 1i64..=3), len).prop_map(|v| v.into_iter().map(|(n, d)| rat(n, d)).collect())
}
