//! Simplicial fans, canonical triangulations, star subdivision, primitive
//! collections and Stanley-Reisner ideals.
//!
//! Ray `i` of a fan built over a polytope is the point with index `i + 1`
//! (index 0 is the origin), so the divisor variable of ray `i` is `D_{i+1}`.

use std::collections::BTreeSet;
use std::fmt;

use itertools::Itertools;
use num_traits::{Signed, Zero};
use thiserror::Error;

use crate::arith::{primitive_integer, rat_from, Int, Rat};
use crate::intlat::{
    is_strongly_convex, normalized_simplex_volume, BraneData, Cone, IntVector, Polytope, RelationLattice,
};
use crate::linalg::{rank_int, solve_combination, to_rat_rows};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FanError {
    #[error("invalid fan: {0}")]
    InvalidFan(String),
    #[error("inconsistent input: {0}")]
    InconsistentInput(String),
    #[error("w0 is not in the support of the lifted fan")]
    BraneOutsideSupport,
}

#[derive(Clone, PartialEq, Eq)]
pub struct Fan {
    rays: Vec<IntVector>,
    max_cones: Vec<Vec<usize>>,
    complete: bool,
}

impl fmt::Debug for Fan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Fan")
            .field("rays", &self.rays.iter().map(|r| r.iter().map(|x| x.to_string()).join(",")).collect::<Vec<_>>())
            .field("max_cones", &self.max_cones)
            .finish()
    }
}

impl Fan {
    /// Validates simplicity and the face-intersection property. Cone index lists
    /// are sorted; the cone list keeps its input order.
    pub fn new(rays: Vec<IntVector>, max_cones: Vec<Vec<usize>>, complete: bool) -> Result<Self, FanError> {
        let dim = rays.first().map(|r| r.len()).unwrap_or(0);
        if rays.iter().any(|r| r.len() != dim) {
            return Err(FanError::InvalidFan("rays of unequal dimension".into()));
        }
        let mut cones = Vec::with_capacity(max_cones.len());
        for c in max_cones {
            let mut c = c;
            c.sort_unstable();
            if c.windows(2).any(|w| w[0] == w[1]) {
                return Err(FanError::InvalidFan(format!("repeated ray in cone {c:?}")));
            }
            if let Some(&i) = c.iter().find(|&&i| i >= rays.len()) {
                return Err(FanError::InvalidFan(format!("ray index {i} out of range")));
            }
            let gens: Vec<IntVector> = c.iter().map(|&i| rays[i].clone()).collect();
            if rank_int(&gens) != gens.len() {
                return Err(FanError::InvalidFan(format!("cone {c:?} is not simplicial")));
            }
            cones.push(c);
        }
        let fan = Fan { rays, max_cones: cones, complete };
        for (a, b) in (0..fan.max_cones.len()).tuple_combinations() {
            if !fan.meet_in_common_face(a, b) {
                return Err(FanError::InvalidFan(format!(
                    "cones {:?} and {:?} do not meet in a common face",
                    fan.max_cones[a], fan.max_cones[b]
                )));
            }
        }
        Ok(fan)
    }

    pub fn rays(&self) -> &[IntVector] {
        &self.rays
    }

    pub fn max_cones(&self) -> &[Vec<usize>] {
        &self.max_cones
    }

    pub fn is_complete(&self) -> bool {
        self.complete
    }

    pub fn dim(&self) -> usize {
        self.rays.first().map(|r| r.len()).unwrap_or(0)
    }

    /// Non-negative coefficients of `v` in simplicial cone `c`, if `v` lies in it.
    pub fn cone_coefficients(&self, c: usize, v: &[Int]) -> Option<Vec<Rat>> {
        let gens = to_rat_rows(&self.max_cones[c].iter().map(|&i| self.rays[i].clone()).collect::<Vec<_>>());
        let t: Vec<Rat> = v.iter().map(rat_from).collect();
        let sol = solve_combination(&gens, &t)?;
        sol.iter().all(|x| !x.is_negative()).then_some(sol)
    }

    /// Whether the ray subset is contained in some maximal cone.
    pub fn is_face(&self, subset: &[usize]) -> bool {
        self.max_cones.iter().any(|c| subset.iter().all(|i| c.contains(i)))
    }

    /// Cones `a` and `b` intersect in the cone on their common rays. The
    /// non-negative solutions of `Σ α_i σ_i = Σ β_j τ_j` form a pointed cone
    /// whose extreme rays must all pair a shared ray with itself.
    fn meet_in_common_face(&self, a: usize, b: usize) -> bool {
        let ca = &self.max_cones[a];
        let cb = &self.max_cones[b];
        let small = |v: &IntVector| -> Vec<i128> { v.iter().map(|x| crate::arith::to_i64(x).expect("small ray") as i128).collect() };
        let mut cols: Vec<Vec<i128>> = ca.iter().map(|&i| small(&self.rays[i])).collect();
        cols.extend(cb.iter().map(|&j| small(&self.rays[j]).into_iter().map(|x| -x).collect::<Vec<_>>()));
        let n = cols.len();
        let dim = self.dim();
        for size in 2..=n.min(dim + 1) {
            for support in (0..n).combinations(size) {
                // Supports inside one cone are independent.
                if support[0] >= ca.len() || support[size - 1] < ca.len() {
                    continue;
                }
                let sub: Vec<Vec<i128>> = support.iter().map(|&s| cols[s].clone()).collect();
                let Some(v) = one_dim_kernel(&sub, dim) else { continue };
                let positive = v.iter().all(|x| *x > 0) || v.iter().all(|x| *x < 0);
                if !positive {
                    continue;
                }
                let trivial = size == 2 && ca[support[0]] == cb[support[1] - ca.len()];
                if !trivial {
                    return false;
                }
            }
        }
        true
    }

    /// Stellar subdivision at a new ray, appended as the last ray.
    pub fn star_subdivide(&self, ray: IntVector) -> Result<Fan, FanError> {
        if ray.len() != self.dim() {
            return Err(FanError::InconsistentInput("subdivision ray has wrong dimension".into()));
        }
        let new_idx = self.rays.len();
        let mut cones = Vec::new();
        let mut hit = false;
        for (ci, c) in self.max_cones.iter().enumerate() {
            match self.cone_coefficients(ci, &ray) {
                Some(coef) => {
                    hit = true;
                    for (k, _) in coef.iter().enumerate().filter(|(_, x)| x.is_positive()) {
                        let mut nc: Vec<usize> = c.iter().enumerate().filter(|(j, _)| *j != k).map(|(_, &r)| r).collect();
                        nc.push(new_idx);
                        cones.push(nc);
                    }
                }
                None => cones.push(c.clone()),
            }
        }
        if !hit {
            return Err(FanError::InconsistentInput("subdivision ray outside the support".into()));
        }
        let mut rays = self.rays.clone();
        rays.push(ray);
        Fan::new(rays, cones, self.complete)
    }

    /// Complete fan whose maximal cones are all `n`-subsets of `n+1` rays.
    pub fn simplex_fan(rays: Vec<IntVector>) -> Result<Fan, FanError> {
        let n = rays.len();
        let cones = (0..n).rev().map(|skip| (0..n).filter(|&i| i != skip).collect()).collect();
        Fan::new(rays, cones, true)
    }

    /// Minimal ray subsets that are not faces, by exhaustive scan.
    pub fn primitive_collections(&self) -> Vec<Vec<usize>> {
        let n = self.rays.len();
        let mut out = Vec::new();
        for size in 1..=n {
            for s in (0..n).combinations(size) {
                if self.is_face(&s) {
                    continue;
                }
                let minimal = (0..s.len()).all(|k| {
                    let sub: Vec<usize> = s.iter().enumerate().filter(|(j, _)| *j != k).map(|(_, &x)| x).collect();
                    self.is_face(&sub)
                });
                if minimal {
                    out.push(s);
                }
            }
        }
        out
    }

    fn ray_point_indices(&self, polytope: &Polytope) -> Result<Vec<usize>, FanError> {
        self.rays
            .iter()
            .map(|r| {
                polytope
                    .index_of(r)
                    .ok_or_else(|| FanError::InconsistentInput(format!("ray {:?} is not a point of the polytope", r.iter().map(|x| x.to_string()).collect::<Vec<_>>())))
            })
            .collect()
    }
}

/// Rank of a small integer matrix given by rows, by fraction-free elimination.
fn small_rank(rows: &[Vec<i128>]) -> usize {
    let mut m: Vec<Vec<i128>> = rows.to_vec();
    let ncols = m.first().map(|r| r.len()).unwrap_or(0);
    let mut r = 0;
    for c in 0..ncols {
        let Some(p) = (r..m.len()).find(|&i| m[i][c] != 0) else { continue };
        m.swap(r, p);
        for i in r + 1..m.len() {
            if m[i][c] != 0 {
                let (f, g) = (m[i][c], m[r][c]);
                for k in 0..ncols {
                    m[i][k] = m[i][k] * g - m[r][k] * f;
                }
                let d = m[i].iter().fold(0i128, |d, x| gcd128(d, *x));
                if d > 1 {
                    m[i].iter_mut().for_each(|x| *x /= d);
                }
            }
        }
        r += 1;
    }
    r
}

fn gcd128(a: i128, b: i128) -> i128 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

fn det128(m: &[Vec<i128>]) -> i128 {
    let n = m.len();
    if n == 0 {
        return 1;
    }
    let mut a = m.to_vec();
    let mut sign = 1;
    let mut prev = 1i128;
    for k in 0..n {
        if a[k][k] == 0 {
            let Some(p) = (k + 1..n).find(|&i| a[i][k] != 0) else { return 0 };
            a.swap(k, p);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
            }
        }
        prev = a[k][k];
    }
    sign * a[n - 1][n - 1]
}

/// Generator of the kernel of the map with the given columns, when it is one-dimensional.
fn one_dim_kernel(cols: &[Vec<i128>], dim: usize) -> Option<Vec<i128>> {
    let k = cols.len();
    if small_rank(cols) != k - 1 {
        return None;
    }
    // k-1 independent coordinate rows, then signed maximal minors.
    let rows: Vec<Vec<i128>> = (0..dim).map(|i| cols.iter().map(|c| c[i]).collect()).collect();
    let mut chosen: Vec<Vec<i128>> = Vec::new();
    for r in rows {
        chosen.push(r);
        if small_rank(&chosen) < chosen.len() {
            chosen.pop();
        }
        if chosen.len() == k - 1 {
            break;
        }
    }
    let v: Vec<i128> = (0..k)
        .map(|j| {
            let minor: Vec<Vec<i128>> = chosen.iter().map(|r| r.iter().enumerate().filter(|(c, _)| *c != j).map(|(_, x)| *x).collect()).collect();
            let d = det128(&minor);
            if j % 2 == 0 { d } else { -d }
        })
        .collect();
    Some(v)
}

/// Lattice simplices, each containing the origin (point 0).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Triangulation {
    simplices: Vec<Vec<usize>>,
}

impl Triangulation {
    pub fn simplices(&self) -> &[Vec<usize>] {
        &self.simplices
    }

    pub fn len(&self) -> usize {
        self.simplices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.simplices.is_empty()
    }

    pub fn volumes(&self, polytope: &Polytope) -> Vec<Int> {
        self.simplices
            .iter()
            .map(|s| normalized_simplex_volume(&s.iter().map(|&i| polytope.points()[i].clone()).collect::<Vec<_>>()))
            .collect()
    }

    pub fn total_volume(&self, polytope: &Polytope) -> Int {
        self.volumes(polytope).into_iter().sum()
    }
}

/// One simplex `{0} ∪ σ(1)` per maximal cone, as point indices.
pub fn canonical_triangulation(fan: &Fan, polytope: &Polytope) -> Result<Triangulation, FanError> {
    if !polytope.has_origin_first() {
        return Err(FanError::InconsistentInput("polytope must start with the origin".into()));
    }
    let idx = fan.ray_point_indices(polytope)?;
    let simplices = fan
        .max_cones
        .iter()
        .map(|c| {
            let mut s: Vec<usize> = std::iter::once(0).chain(c.iter().map(|&r| idx[r])).collect();
            s.sort_unstable();
            s
        })
        .collect();
    Ok(Triangulation { simplices })
}

/// Lifts every cone of the base fan with `w1` and star-subdivides at `w0`.
/// Rays of the result are the enhanced polytope points after the origin.
pub fn enhanced_fan(base: &Fan, delta: &Polytope, brane: &BraneData) -> Result<Fan, FanError> {
    let enhanced = crate::intlat::enhance_polytope(delta, brane).map_err(|e| FanError::InconsistentInput(e.to_string()))?;
    let rays: Vec<IntVector> = enhanced.points()[1..].to_vec();
    let p = delta.len() - 1;
    let w0 = p;
    let w1 = p + 1;
    let base_idx = base.ray_point_indices(delta)?;
    let lifted: Vec<Vec<usize>> = base
        .max_cones
        .iter()
        .map(|c| {
            let mut nc: Vec<usize> = c.iter().map(|&r| base_idx[r] - 1).collect();
            nc.push(w1);
            nc
        })
        .collect();
    // Cones use every ray except w0, which the subdivision inserts.
    let lifted_fan = Fan { rays: rays.clone(), max_cones: lifted, complete: false };
    let target = &rays[w0];
    let mut cones = Vec::new();
    let mut hit = false;
    for (ci, c) in lifted_fan.max_cones.iter().enumerate() {
        match lifted_fan.cone_coefficients(ci, target) {
            Some(coef) => {
                hit = true;
                for (k, _) in coef.iter().enumerate().filter(|(_, x)| x.is_positive()) {
                    let mut nc: Vec<usize> = c.iter().enumerate().filter(|(j, _)| *j != k).map(|(_, &r)| r).collect();
                    nc.push(w0);
                    cones.push(nc);
                }
            }
            None => cones.push(c.clone()),
        }
    }
    if !hit {
        return Err(FanError::BraneOutsideSupport);
    }
    Fan::new(rays, cones, false)
}

/// Primitive collection with its relation over the polytope points.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrimitiveRelation {
    /// Ray indices of the collection.
    pub collection: Vec<usize>,
    /// `None` when the generator sum leaves the support of the fan.
    pub relation: Option<IntVector>,
}

impl PrimitiveRelation {
    /// Collection as divisor indices `D_{i+1}`.
    pub fn divisor_indices(&self) -> Vec<usize> {
        self.collection.iter().map(|i| i + 1).collect()
    }

    pub fn l0(&self) -> Option<&Int> {
        self.relation.as_ref().map(|l| &l[0])
    }
}

pub fn primitive_relations(fan: &Fan, polytope: &Polytope) -> Result<Vec<PrimitiveRelation>, FanError> {
    if !polytope.has_origin_first() {
        return Err(FanError::InconsistentInput("polytope must start with the origin".into()));
    }
    let idx = fan.ray_point_indices(polytope)?;
    let mut out = Vec::new();
    for coll in fan.primitive_collections() {
        let mut sum = vec![Int::zero(); fan.dim()];
        for &r in &coll {
            for (s, x) in sum.iter_mut().zip(&fan.rays[r]) {
                *s += x;
            }
        }
        let coef = (0..fan.max_cones.len()).find_map(|c| fan.cone_coefficients(c, &sum).map(|k| (c, k)));
        let relation = coef.map(|(c, k)| {
            let mut l = vec![Rat::zero(); polytope.len()];
            for &r in &coll {
                l[idx[r]] += Rat::from_integer(1.into());
            }
            let mut total = Rat::zero();
            for (j, &r) in fan.max_cones[c].iter().enumerate() {
                l[idx[r]] -= &k[j];
                total += &k[j];
            }
            l[0] = total - Rat::from_integer(coll.len().into());
            primitive_integer(&l)
        });
        out.push(PrimitiveRelation { collection: coll, relation });
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Certificate {
    pub passed: bool,
    pub witness: Option<PrimitiveRelation>,
    pub warnings: Vec<String>,
}

/// Passes iff every defined primitive relation has `l_0 ≤ 0`.
pub fn check_semipositive(rels: &[PrimitiveRelation]) -> Certificate {
    let mut warnings = Vec::new();
    for r in rels {
        match r.l0() {
            None => warnings.push(format!(
                "primitive collection {:?} has no relation (sum leaves the support); excluded",
                r.divisor_indices()
            )),
            Some(l0) if l0.is_positive() => {
                return Certificate { passed: false, witness: Some(r.clone()), warnings };
            }
            Some(_) => {}
        }
    }
    Certificate { passed: true, witness: None, warnings }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RegularityCertificate {
    pub passed: bool,
    /// Minimal generators of `C(T)^∨` as vectors over the points.
    pub generators: Vec<IntVector>,
    pub warnings: Vec<String>,
}

/// Builds `C(T)^∨` from the primitive relations of the triangulation's fan and
/// tests strong convexity in lattice coordinates.
pub fn check_regular(rels: &[PrimitiveRelation], lattice: &RelationLattice) -> RegularityCertificate {
    let mut warnings = Vec::new();
    let mut coords: Vec<IntVector> = Vec::new();
    for r in rels {
        let Some(l) = &r.relation else {
            warnings.push(format!("collection {:?} excluded (no relation)", r.divisor_indices()));
            continue;
        };
        match lattice.coordinates(l) {
            Some(c) => coords.push(c),
            None => {
                warnings.push(format!("relation of {:?} is not in the lattice", r.divisor_indices()));
                return RegularityCertificate { passed: false, generators: vec![], warnings };
            }
        }
    }
    if lattice.rank() == 0 {
        return RegularityCertificate { passed: true, generators: vec![], warnings };
    }
    let cone = Cone::new(coords, lattice.rank()).expect("coordinates have lattice rank");
    let passed = is_strongly_convex(&cone);
    let gens = if passed { minimal_generators(&cone) } else { cone.generators().to_vec() };
    let generators = gens.iter().map(|c| lattice.combine(c)).collect();
    RegularityCertificate { passed, generators, warnings }
}

/// Drops generators lying in the cone of the remaining ones (strongly convex cones).
pub fn minimal_generators(cone: &Cone) -> Vec<IntVector> {
    let mut gens = cone.generators().to_vec();
    let mut i = 0;
    while i < gens.len() {
        let others: Vec<IntVector> = gens.iter().enumerate().filter(|(j, _)| *j != i).map(|(_, g)| g.clone()).collect();
        let rest = Cone::new(others, cone.dim()).expect("same dimension");
        if !rest.generators().is_empty() && rest.contains(&gens[i]) {
            gens.remove(i);
        } else {
            i += 1;
        }
    }
    gens
}

/// Square-free monomial ideal; each generator is a set of variable indices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonomialIdeal {
    generators: Vec<Vec<usize>>,
}

impl MonomialIdeal {
    /// Removes non-minimal and duplicate generators.
    pub fn new(generators: Vec<Vec<usize>>) -> Self {
        let sets: Vec<BTreeSet<usize>> = generators.into_iter().map(|g| g.into_iter().collect()).collect();
        let mut kept: Vec<Vec<usize>> = Vec::new();
        for (i, g) in sets.iter().enumerate() {
            let dominated = sets.iter().enumerate().any(|(j, h)| {
                (h.is_subset(g) && h != g) || (h == g && j < i)
            });
            if !dominated {
                kept.push(g.iter().copied().collect());
            }
        }
        MonomialIdeal { generators: kept }
    }

    pub fn generators(&self) -> &[Vec<usize>] {
        &self.generators
    }

    pub fn display(&self) -> Vec<String> {
        self.generators.iter().map(|g| g.iter().map(|i| format!("D{i}")).join("")).collect()
    }
}

/// Stanley-Reisner ideal in the divisor variables `D_{i+1}` of ray `i`.
pub fn sr_ideal(fan: &Fan) -> MonomialIdeal {
    MonomialIdeal::new(
        fan.primitive_collections().into_iter().map(|c| c.into_iter().map(|i| i + 1).collect()).collect(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::intlat::{fermat_dual_polytope, ivec};

    fn p2() -> (Fan, Polytope) {
        let rays = vec![ivec(&[1, 0]), ivec(&[0, 1]), ivec(&[-1, -1])];
        let poly = Polytope::from_i64(&[&[0, 0], &[1, 0], &[0, 1], &[-1, -1]]).unwrap();
        (Fan::simplex_fan(rays).unwrap(), poly)
    }

    #[test]
    fn p1_triangulation() {
        let fan = Fan::new(vec![ivec(&[1]), ivec(&[-1])], vec![vec![0], vec![1]], true).unwrap();
        let poly = Polytope::from_i64(&[&[0], &[1], &[-1]]).unwrap();
        let t = canonical_triangulation(&fan, &poly).unwrap();
        assert_eq!(t.simplices(), &[vec![0, 1], vec![0, 2]]);
    }

    #[test]
    fn p2_relation_and_certificate() {
        let (fan, poly) = p2();
        let rels = primitive_relations(&fan, &poly).unwrap();
        assert_eq!(rels.len(), 1);
        assert_eq!(rels[0].relation, Some(ivec(&[-3, 1, 1, 1])));
        assert!(check_semipositive(&rels).passed);
    }

    #[test]
    fn p4_sr_ideal() {
        let p = fermat_dual_polytope(&[1, 1, 1, 1, 1]).unwrap();
        let fan = Fan::simplex_fan(p.points()[1..].to_vec()).unwrap();
        assert_eq!(sr_ideal(&fan).generators(), &[vec![1, 2, 3, 4, 5]]);
    }

    #[test]
    fn overlapping_cones_rejected() {
        let rays = vec![ivec(&[1, 0]), ivec(&[0, 1]), ivec(&[1, 1])];
        assert!(Fan::new(rays, vec![vec![0, 1], vec![0, 2]], false).is_err());
        let rays = vec![ivec(&[1, 0]), ivec(&[1, 1]), ivec(&[1, 2])];
        assert!(Fan::new(rays.clone(), vec![vec![0, 1], vec![1, 2]], false).is_ok());
        assert!(Fan::new(rays, vec![vec![0, 2], vec![1]], false).is_err());
    }

    #[test]
    fn non_simplicial_cone_rejected() {
        let rays = vec![ivec(&[1, 0]), ivec(&[2, 0])];
        assert!(Fan::new(rays, vec![vec![0, 1]], false).is_err());
    }

    #[test]
    fn monomial_ideal_minimality() {
        let m = MonomialIdeal::new(vec![vec![1, 2, 3], vec![2, 1], vec![1, 2], vec![4]]);
        assert_eq!(m.generators(), &[vec![1, 2], vec![4]]);
    }

    #[test]
    fn regularity_negative_control() {
        let lat = RelationLattice::from_basis(vec![ivec(&[-3, 1, 1, 1])], 4).unwrap();
        let r = |l: &[i64]| PrimitiveRelation { collection: vec![0], relation: Some(ivec(l)) };
        assert!(check_regular(&[r(&[-3, 1, 1, 1])], &lat).passed);
        assert!(!check_regular(&[r(&[-3, 1, 1, 1]), r(&[3, -1, -1, -1])], &lat).passed);
    }
}
