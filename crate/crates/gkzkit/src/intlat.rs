//! Integer lattices, point configurations and polyhedral cones.

use std::fmt;

use itertools::Itertools;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::arith::{int, rat_from, Int};
use crate::linalg::{det_int, dot, gcd_vec, nullspace_q, primitive_normal, rank_int, solve_combination, to_rat_rows, transpose};

pub type IntVector = Vec<Int>;

/// Builds an `IntVector` from machine integers.
pub fn ivec(v: &[i64]) -> IntVector {
    v.iter().map(|x| int(*x)).collect()
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum IntLatError {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("weights {0:?} are not of Fermat type")]
    UnsupportedWeights(Vec<i64>),
    #[error("brane vector gives w1 = w0")]
    DegenerateBrane,
}

/// Dense integer matrix stored by rows.
#[derive(Clone, PartialEq, Eq)]
pub struct IntMatrix {
    rows: Vec<IntVector>,
    ncols: usize,
}

impl IntMatrix {
    pub fn new(rows: Vec<IntVector>, ncols: usize) -> Result<Self, IntLatError> {
        if let Some(r) = rows.iter().find(|r| r.len() != ncols) {
            return Err(IntLatError::InvalidInput(format!(
                "row of length {} in matrix with {} columns",
                r.len(),
                ncols
            )));
        }
        Ok(IntMatrix { rows, ncols })
    }

    pub fn from_i64(rows: &[&[i64]], ncols: usize) -> Result<Self, IntLatError> {
        Self::new(rows.iter().map(|r| ivec(r)).collect(), ncols)
    }

    pub fn identity(n: usize) -> Self {
        let rows = (0..n)
            .map(|i| (0..n).map(|j| if i == j { Int::one() } else { Int::zero() }).collect())
            .collect();
        IntMatrix { rows, ncols: n }
    }

    pub fn rows(&self) -> &[IntVector] {
        &self.rows
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn transpose(&self) -> IntMatrix {
        IntMatrix { rows: transpose(&self.rows, self.ncols), ncols: self.rows.len() }
    }

    pub fn mul_vec(&self, v: &[Int]) -> IntVector {
        self.rows.iter().map(|r| dot(r, v)).collect()
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        let t = other.transpose();
        let rows = self.rows.iter().map(|r| t.rows.iter().map(|c| dot(r, c)).collect()).collect();
        IntMatrix { rows, ncols: other.ncols }
    }

    pub fn det(&self) -> Int {
        assert_eq!(self.nrows(), self.ncols, "determinant of a non-square matrix");
        det_int(&self.rows)
    }

    /// Inverse over Z; `None` unless the determinant is ±1.
    pub fn inverse_unimodular(&self) -> Option<IntMatrix> {
        if self.nrows() != self.ncols || !self.det().abs().is_one() {
            return None;
        }
        let n = self.ncols;
        let aug: Vec<IntVector> = self
            .rows
            .iter()
            .enumerate()
            .map(|(i, r)| {
                let mut row = r.clone();
                row.extend((0..n).map(|j| if i == j { Int::one() } else { Int::zero() }));
                row
            })
            .collect();
        let (red, _) = echelon(aug, n);
        // Unimodular: the echelon form is the identity, the right block the inverse.
        let rows = hnf_reduce_above(red, n).into_iter().map(|r| r[n..].to_vec()).collect();
        Some(IntMatrix { rows, ncols: n })
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.rows.iter().map(|r| r.iter().map(|x| x.to_string()).join(","))).finish()
    }
}

/// Integer row echelon form on the first `width` columns, carrying the remaining
/// columns along. Pivots are made positive. Returns the rows and the pivot columns.
fn echelon(mut rows: Vec<IntVector>, width: usize) -> (Vec<IntVector>, Vec<usize>) {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..width {
        if r == rows.len() {
            break;
        }
        loop {
            // Row with the smallest nonzero |entry| in column c at or below r.
            let best = (r..rows.len()).filter(|&i| !rows[i][c].is_zero()).min_by(|&a, &b| rows[a][c].abs().cmp(&rows[b][c].abs()));
            let Some(p) = best else { break };
            rows.swap(r, p);
            let mut done = true;
            for i in r + 1..rows.len() {
                if rows[i][c].is_zero() {
                    continue;
                }
                let q = rows[i][c].div_floor(&rows[r][c]);
                let pr = rows[r].clone();
                for (x, y) in rows[i].iter_mut().zip(&pr) {
                    *x -= &q * y;
                }
                if !rows[i][c].is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if r < rows.len() && !rows[r][c].is_zero() {
            if rows[r][c].is_negative() {
                for x in rows[r].iter_mut() {
                    *x = -&*x;
                }
            }
            pivots.push(c);
            r += 1;
        }
    }
    (rows, pivots)
}

/// Reduces the entries above every pivot into `[0, pivot)`.
fn hnf_reduce_above(mut rows: Vec<IntVector>, width: usize) -> Vec<IntVector> {
    for r in 0..rows.len() {
        let Some(c) = (0..width).find(|&c| !rows[r][c].is_zero()) else { continue };
        let piv = rows[r][c].clone();
        let pr = rows[r].clone();
        for row in rows.iter_mut().take(r) {
            let q = row[c].div_floor(&piv);
            if !q.is_zero() {
                for (x, y) in row.iter_mut().zip(&pr) {
                    *x -= &q * y;
                }
            }
        }
    }
    rows
}

/// Row Hermite normal form with zero rows removed.
pub fn hnf(rows: &[IntVector]) -> Vec<IntVector> {
    let Some(w) = rows.first().map(|r| r.len()) else { return vec![] };
    let (red, pivots) = echelon(rows.to_vec(), w);
    let mut out = hnf_reduce_above(red, w);
    out.truncate(pivots.len());
    out
}

/// Integer kernel `{x in Z^n : A x = 0}` for `A` given by rows with `ncols` columns.
pub fn integer_kernel(a_rows: &[IntVector], ncols: usize) -> Vec<IntVector> {
    let m = a_rows.len();
    // Rows of [A^T | I]; the zero rows of the left block after echelon give the kernel.
    let aug: Vec<IntVector> = (0..ncols)
        .map(|j| {
            let mut row: IntVector = a_rows.iter().map(|r| r[j].clone()).collect();
            row.extend((0..ncols).map(|k| if k == j { Int::one() } else { Int::zero() }));
            row
        })
        .collect();
    let (red, pivots) = echelon(aug, m);
    let ker: Vec<IntVector> = red.into_iter().skip(pivots.len()).map(|r| r[m..].to_vec()).collect();
    hnf(&ker)
}

/// True iff the rows generate `span_Q(rows) ∩ Z^n`.
pub fn is_saturated(rows: &[IntVector]) -> bool {
    let h = hnf(rows);
    let k = h.len();
    if k == 0 {
        return true;
    }
    let n = h[0].len();
    let g = (0..n).combinations(k).fold(Int::zero(), |g, cols| {
        let minor: Vec<IntVector> = h.iter().map(|r| cols.iter().map(|&c| r[c].clone()).collect()).collect();
        g.gcd(&det_int(&minor))
    });
    g.is_one()
}

/// Whether `v` lies in the lattice generated by `rows`.
pub fn lattice_contains(rows: &[IntVector], v: &[Int]) -> bool {
    let mut ext = rows.to_vec();
    ext.push(v.to_vec());
    hnf(&ext) == hnf(rows)
}

/// Lattice equality via Hermite normal forms.
pub fn lattice_equal(a: &[IntVector], b: &[IntVector]) -> bool {
    hnf(a) == hnf(b)
}

/// Saturated lattice `span_Q(gens) ∩ Z^n`, as an HNF basis.
pub fn saturation(gens: &[IntVector], n: usize) -> Vec<IntVector> {
    let nonzero: Vec<IntVector> = gens.iter().filter(|g| g.iter().any(|x| !x.is_zero())).cloned().collect();
    if nonzero.is_empty() {
        return vec![];
    }
    let perp = integer_kernel(&nonzero, n);
    if perp.is_empty() {
        return IntMatrix::identity(n).rows;
    }
    integer_kernel(&perp, n)
}

/// Integer kernel lattice of a point configuration.
#[derive(Clone, PartialEq, Eq)]
pub struct RelationLattice {
    basis: Vec<IntVector>,
    ambient: usize,
    canonical: bool,
}

impl fmt::Debug for RelationLattice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RelationLattice(rank {}, ", self.rank())?;
        f.debug_list().entries(self.basis.iter().map(|r| r.iter().map(|x| x.to_string()).join(","))).finish()?;
        write!(f, ")")
    }
}

impl RelationLattice {
    /// Wraps a given basis without canonicalizing it. Rows must be independent.
    pub fn from_basis(basis: Vec<IntVector>, ambient: usize) -> Result<Self, IntLatError> {
        if basis.iter().any(|r| r.len() != ambient) {
            return Err(IntLatError::InvalidInput("basis row length mismatch".into()));
        }
        if rank_int(&basis) != basis.len() {
            return Err(IntLatError::InvalidInput("basis rows are dependent".into()));
        }
        Ok(RelationLattice { basis, ambient, canonical: false })
    }

    pub fn basis(&self) -> &[IntVector] {
        &self.basis
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn is_canonical(&self) -> bool {
        self.canonical
    }

    pub fn canonicalize(&self) -> RelationLattice {
        RelationLattice { basis: hnf(&self.basis), ambient: self.ambient, canonical: true }
    }

    pub fn contains(&self, v: &[Int]) -> bool {
        v.len() == self.ambient && lattice_contains(&self.basis, v)
    }

    pub fn lattice_eq(&self, other: &RelationLattice) -> bool {
        self.ambient == other.ambient && lattice_equal(&self.basis, &other.basis)
    }

    pub fn is_saturated(&self) -> bool {
        is_saturated(&self.basis)
    }

    /// Integer coordinates of `v` in this basis, if `v` is in the lattice.
    pub fn coordinates(&self, v: &[Int]) -> Option<IntVector> {
        let basis = to_rat_rows(&self.basis);
        let target: Vec<_> = v.iter().map(rat_from).collect();
        let sol = solve_combination(&basis, &target)?;
        sol.iter().map(|c| if c.is_integer() { Some(c.to_integer()) } else { None }).collect()
    }

    /// Vector with the given coordinates in this basis.
    pub fn combine(&self, coords: &[Int]) -> IntVector {
        let mut out = vec![Int::zero(); self.ambient];
        for (c, b) in coords.iter().zip(&self.basis) {
            for (o, x) in out.iter_mut().zip(b) {
                *o += c * x;
            }
        }
        out
    }
}

/// Saturated integer kernel of the map `l ↦ Σ l_i columns[i]`, in row HNF.
pub fn kernel_basis(columns: &[IntVector]) -> Result<RelationLattice, IntLatError> {
    let Some(first) = columns.first() else {
        return Err(IntLatError::InvalidInput("empty column list".into()));
    };
    let m = first.len();
    if columns.iter().any(|c| c.len() != m) {
        return Err(IntLatError::InvalidInput("columns of unequal dimension".into()));
    }
    let n = columns.len();
    let a_rows: Vec<IntVector> = (0..m).map(|k| columns.iter().map(|c| c[k].clone()).collect()).collect();
    let basis = if m == 0 { IntMatrix::identity(n).rows } else { integer_kernel(&a_rows, n) };
    Ok(RelationLattice { basis, ambient: n, canonical: true })
}

/// Ordered list of distinct integral points.
#[derive(Clone, PartialEq, Eq)]
pub struct Polytope {
    points: Vec<IntVector>,
    dim: usize,
}

impl fmt::Debug for Polytope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.points.iter().map(|r| r.iter().map(|x| x.to_string()).join(","))).finish()
    }
}

impl Polytope {
    pub fn new(points: Vec<IntVector>) -> Result<Self, IntLatError> {
        let Some(dim) = points.first().map(|p| p.len()) else {
            return Err(IntLatError::InvalidInput("polytope without points".into()));
        };
        if points.iter().any(|p| p.len() != dim) {
            return Err(IntLatError::InvalidInput("points of unequal dimension".into()));
        }
        for (i, j) in (0..points.len()).tuple_combinations() {
            if points[i] == points[j] {
                return Err(IntLatError::InvalidInput(format!("duplicate points at indices {i} and {j}")));
            }
        }
        Ok(Polytope { points, dim })
    }

    /// Like [`Polytope::new`] but also requires point 0 to be the origin.
    pub fn reflexive_style(points: Vec<IntVector>) -> Result<Self, IntLatError> {
        let p = Self::new(points)?;
        if !p.has_origin_first() {
            return Err(IntLatError::InvalidInput("point 0 must be the origin".into()));
        }
        Ok(p)
    }

    pub fn from_i64(points: &[&[i64]]) -> Result<Self, IntLatError> {
        Self::new(points.iter().map(|p| ivec(p)).collect())
    }

    pub fn points(&self) -> &[IntVector] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn has_origin_first(&self) -> bool {
        self.points[0].iter().all(|x| x.is_zero())
    }

    pub fn index_of(&self, v: &[Int]) -> Option<usize> {
        self.points.iter().position(|p| p.as_slice() == v)
    }

    /// Points with a leading 1 prepended.
    pub fn lifted(&self) -> Vec<IntVector> {
        self.points
            .iter()
            .map(|p| {
                let mut v = vec![Int::one()];
                v.extend(p.iter().cloned());
                v
            })
            .collect()
    }

    pub fn relation_lattice(&self) -> RelationLattice {
        kernel_basis(&self.lifted()).expect("nonempty polytope")
    }

    /// Facet inequalities `⟨a, x⟩ ≥ b` of the convex hull, assumed full-dimensional.
    /// Brute force over point subsets.
    pub fn facets(&self) -> Vec<(IntVector, Int)> {
        let lifted = self.lifted();
        let d = self.dim;
        let mut out: Vec<(IntVector, Int)> = Vec::new();
        for subset in (0..lifted.len()).combinations(d) {
            let rows: Vec<IntVector> = subset.iter().map(|&i| lifted[i].clone()).collect();
            let Some(n) = primitive_normal(&rows, d + 1) else { continue };
            let vals: Vec<Int> = lifted.iter().map(|p| dot(p, &n)).collect();
            let sign = if vals.iter().all(|v| !v.is_negative()) {
                Int::one()
            } else if vals.iter().all(|v| !v.is_positive()) {
                -Int::one()
            } else {
                continue;
            };
            // ⟨n, (1,x)⟩ ≥ 0  <=>  ⟨n', x⟩ ≥ -n_0
            let a: IntVector = n[1..].iter().map(|x| x * &sign).collect();
            let b = -(&n[0] * &sign);
            if !out.iter().any(|(a2, b2)| *a2 == a && *b2 == b) {
                out.push((a, b));
            }
        }
        out.sort();
        out
    }

    /// Whether `x` lies in the convex hull, given its facets.
    pub fn hull_contains(facets: &[(IntVector, Int)], x: &[Int]) -> bool {
        facets.iter().all(|(a, b)| dot(a, x) >= *b)
    }

    /// Lattice points of the hull by box scan. Only for `dim ≤ 3`.
    pub fn box_scan(&self) -> Result<Vec<IntVector>, IntLatError> {
        if self.dim > 3 {
            return Err(IntLatError::InvalidInput("box scan is limited to dimension 3".into()));
        }
        let facets = self.facets();
        let lo: Vec<i64> = (0..self.dim).map(|k| self.points.iter().map(|p| i64_of(&p[k])).min().unwrap()).collect();
        let hi: Vec<i64> = (0..self.dim).map(|k| self.points.iter().map(|p| i64_of(&p[k])).max().unwrap()).collect();
        let mut out = Vec::new();
        for x in (0..self.dim).map(|k| lo[k]..=hi[k]).multi_cartesian_product() {
            let v = ivec(&x);
            if Self::hull_contains(&facets, &v) {
                out.push(v);
            }
        }
        Ok(out)
    }
}

fn i64_of(x: &Int) -> i64 {
    crate::arith::to_i64(x).expect("coordinate fits in i64")
}

/// Normalized volume `|det|` of the simplex on the lifted vertices.
pub fn normalized_simplex_volume(vertices: &[IntVector]) -> Int {
    let lifted: Vec<IntVector> = vertices
        .iter()
        .map(|p| {
            let mut v = vec![Int::one()];
            v.extend(p.iter().cloned());
            v
        })
        .collect();
    det_int(&lifted).abs()
}

/// Builds the vertex list of the dual of a Fermat-type weighted projective space.
pub fn fermat_dual_polytope(weights: &[i64]) -> Result<Polytope, IntLatError> {
    let bad = || IntLatError::UnsupportedWeights(weights.to_vec());
    if weights.len() != 5 || weights[4] != 1 || weights.iter().any(|w| *w <= 0) {
        return Err(bad());
    }
    let d: i64 = weights.iter().sum();
    if weights.iter().any(|w| d % w != 0) {
        return Err(bad());
    }
    let mut points = vec![ivec(&[0, 0, 0, 0])];
    for i in 0..4 {
        let mut e = vec![0; 4];
        e[i] = 1;
        points.push(ivec(&e));
    }
    points.push(weights[..4].iter().map(|w| int(-w)).collect());
    Polytope::reflexive_style(points)
}

/// Brane vector `q` with `Σ q_i = 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BraneData {
    q: IntVector,
}

impl BraneData {
    pub fn new(q: IntVector) -> Result<Self, IntLatError> {
        if q.iter().sum::<Int>() != Int::zero() {
            return Err(IntLatError::InvalidInput("brane vector entries must sum to zero".into()));
        }
        Ok(BraneData { q })
    }

    pub fn from_i64(q: &[i64]) -> Result<Self, IntLatError> {
        Self::new(ivec(q))
    }

    pub fn q(&self) -> &[Int] {
        &self.q
    }

    pub fn w0(&self, delta: &Polytope) -> IntVector {
        let mut v = vec![Int::zero(); delta.dim()];
        v.push(Int::one());
        v
    }

    pub fn w1(&self, delta: &Polytope) -> IntVector {
        let mut v = vec![Int::zero(); delta.dim()];
        for (qi, p) in self.q.iter().zip(delta.points()) {
            for (o, x) in v.iter_mut().zip(p) {
                *o += qi * x;
            }
        }
        v.push(Int::one());
        v
    }
}

/// Points `(v_i; 0)` in order, followed by `w0` and `w1`.
pub fn enhance_polytope(delta: &Polytope, brane: &BraneData) -> Result<Polytope, IntLatError> {
    if brane.q.len() != delta.len() {
        return Err(IntLatError::InvalidInput(format!(
            "brane vector has length {}, polytope has {} points",
            brane.q.len(),
            delta.len()
        )));
    }
    let w0 = brane.w0(delta);
    let w1 = brane.w1(delta);
    if w0 == w1 {
        return Err(IntLatError::DegenerateBrane);
    }
    let mut points: Vec<IntVector> = delta
        .points()
        .iter()
        .map(|p| {
            let mut v = p.clone();
            v.push(Int::zero());
            v
        })
        .collect();
    points.push(w0);
    points.push(w1);
    Polytope::new(points)
}

/// Polyhedral cone generated by primitive integer vectors.
#[derive(Clone, PartialEq, Eq)]
pub struct Cone {
    generators: Vec<IntVector>,
    dim: usize,
    full_space: bool,
}

impl fmt::Debug for Cone {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.full_space {
            return write!(f, "Cone(full space R^{})", self.dim);
        }
        f.debug_list().entries(self.generators.iter().map(|r| r.iter().map(|x| x.to_string()).join(","))).finish()
    }
}

impl Cone {
    /// Zero generators are dropped, the rest scaled to be primitive.
    pub fn new(generators: Vec<IntVector>, dim: usize) -> Result<Self, IntLatError> {
        if generators.iter().any(|g| g.len() != dim) {
            return Err(IntLatError::InvalidInput("generator dimension mismatch".into()));
        }
        let mut gens: Vec<IntVector> = Vec::new();
        for g in generators {
            let d = gcd_vec(&g);
            if d.is_zero() {
                continue;
            }
            let p: IntVector = g.iter().map(|x| x / &d).collect();
            if !gens.contains(&p) {
                gens.push(p);
            }
        }
        Ok(Cone { generators: gens, dim, full_space: false })
    }

    pub fn from_i64(generators: &[&[i64]], dim: usize) -> Result<Self, IntLatError> {
        Self::new(generators.iter().map(|g| ivec(g)).collect(), dim)
    }

    pub fn generators(&self) -> &[IntVector] {
        &self.generators
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// True when the cone is all of its ambient space (the dual of the zero cone).
    pub fn is_full_space(&self) -> bool {
        self.full_space
    }

    pub fn span_rank(&self) -> usize {
        rank_int(&self.generators)
    }

    /// Coordinates of the generators in the saturated lattice of their span.
    fn in_span(&self) -> (Vec<IntVector>, Vec<IntVector>) {
        let sat = saturation(&self.generators, self.dim);
        let basis = to_rat_rows(&sat);
        let coords = self
            .generators
            .iter()
            .map(|g| {
                let t: Vec<_> = g.iter().map(rat_from).collect();
                solve_combination(&basis, &t)
                    .expect("generator lies in its own span")
                    .iter()
                    .map(|c| c.to_integer())
                    .collect()
            })
            .collect();
        (sat, coords)
    }

    /// Membership test for a vector of the ambient space.
    pub fn contains(&self, v: &[Int]) -> bool {
        if self.full_space {
            return true;
        }
        if v.iter().all(|x| x.is_zero()) {
            return true;
        }
        let (sat, _) = self.in_span();
        let t: Vec<_> = v.iter().map(rat_from).collect();
        let Some(c) = solve_combination(&to_rat_rows(&sat), &t) else { return false };
        let c = crate::arith::primitive_integer(&c);
        dual_cone(self).generators.iter().all(|d| !dot(d, &c).is_negative())
    }
}

/// Dual cone inside the span of `c`, expressed in coordinates of the saturated
/// span lattice (so the result lives in `Z^k`, `k` the span dimension).
pub fn dual_cone(c: &Cone) -> Cone {
    if c.generators.is_empty() {
        return Cone { generators: vec![], dim: 0, full_space: true };
    }
    let (sat, coords) = c.in_span();
    let k = sat.len();
    let mut rays: Vec<IntVector> = Vec::new();
    for subset in (0..coords.len()).combinations(k - 1) {
        let rows: Vec<IntVector> = subset.iter().map(|&i| coords[i].clone()).collect();
        let ns = nullspace_q(&to_rat_rows(&rows), k);
        if ns.len() != 1 {
            continue;
        }
        let n = crate::arith::primitive_integer(&ns[0]);
        for cand in [n.clone(), n.iter().map(|x| -x).collect::<IntVector>()] {
            if coords.iter().all(|g| !dot(g, &cand).is_negative()) && !rays.contains(&cand) {
                rays.push(cand);
            }
        }
    }
    rays.sort();
    Cone { generators: rays, dim: k, full_space: false }
}

/// `c ∩ −c = {0}`.
pub fn is_strongly_convex(c: &Cone) -> bool {
    if c.generators.is_empty() {
        return true;
    }
    let d = dual_cone(c);
    d.generators.len() >= d.dim && rank_int(&d.generators) == d.dim
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quintic_relation_lattice() {
        let p = fermat_dual_polytope(&[1, 1, 1, 1, 1]).unwrap();
        let l = p.relation_lattice();
        assert!(l.is_canonical());
        assert!(l.lattice_eq(&RelationLattice::from_basis(vec![ivec(&[-5, 1, 1, 1, 1, 1])], 6).unwrap()));
        for row in l.basis() {
            assert!(p.lifted().iter().zip(row).fold(vec![int(0); 5], |acc, (v, c)| acc.iter().zip(v).map(|(a, x)| a + c * x).collect()).iter().all(|x| x.is_zero()));
        }
        assert!(l.is_saturated());
    }

    #[test]
    fn identity_columns_have_trivial_kernel() {
        let cols = IntMatrix::identity(4).rows().to_vec();
        assert_eq!(kernel_basis(&cols).unwrap().rank(), 0);
        assert!(matches!(kernel_basis(&[]), Err(IntLatError::InvalidInput(_))));
    }

    #[test]
    fn fermat_vertices() {
        let p = fermat_dual_polytope(&[7, 2, 2, 2, 1]).unwrap();
        assert_eq!(p.points()[5], ivec(&[-7, -2, -2, -2]));
        assert!(fermat_dual_polytope(&[3, 1, 1, 1, 1]).is_err());
        assert!(fermat_dual_polytope(&[1, 1, 1, 1, 2]).is_err());
    }

    #[test]
    fn enhanced_quintic_points() {
        let p = fermat_dual_polytope(&[1, 1, 1, 1, 1]).unwrap();
        let b = BraneData::from_i64(&[-1, 0, 0, 0, 0, 1]).unwrap();
        let e = enhance_polytope(&p, &b).unwrap();
        assert_eq!(e.len(), 8);
        assert_eq!(e.points()[7], ivec(&[-1, -1, -1, -1, 1]));
        let zero = BraneData::from_i64(&[0; 6]).unwrap();
        assert_eq!(enhance_polytope(&p, &zero), Err(IntLatError::DegenerateBrane));
    }

    #[test]
    fn duplicates_and_origin_are_validated() {
        assert!(Polytope::from_i64(&[&[0, 0], &[1, 0], &[1, 0]]).is_err());
        assert!(Polytope::reflexive_style(vec![ivec(&[1, 0]), ivec(&[0, 0])]).is_err());
    }

    #[test]
    fn hnf_is_canonical() {
        let a = vec![ivec(&[2, 4, 4]), ivec(&[-6, 6, 12]), ivec(&[10, -4, -16])];
        let h = hnf(&a);
        assert_eq!(hnf(&h), h);
        for r in &a {
            assert!(lattice_contains(&h, r));
        }
        for r in &h {
            assert!(lattice_contains(&a, r));
        }
    }

    #[test]
    fn saturation_detects_index() {
        assert!(!is_saturated(&[ivec(&[2, 0])]));
        assert!(is_saturated(&[ivec(&[2, 3])]));
        assert!(!is_saturated(&[ivec(&[1, 1, 0]), ivec(&[1, -1, 0])]));
    }

    #[test]
    fn unimodular_inverse() {
        let m = IntMatrix::from_i64(&[&[1, 1], &[0, 1]], 2).unwrap();
        let inv = m.inverse_unimodular().unwrap();
        assert_eq!(m.mul(&inv), IntMatrix::identity(2));
        assert!(IntMatrix::from_i64(&[&[2, 0], &[0, 1]], 2).unwrap().inverse_unimodular().is_none());
    }

    #[test]
    fn dual_of_planar_cone_matches_box_scan() {
        let c = Cone::from_i64(&[&[1, 0], &[1, 5]], 2).unwrap();
        let d = dual_cone(&c);
        assert_eq!(d.generators(), &[ivec(&[0, 1]), ivec(&[5, -1])]);
        // Oracle: every dual lattice point in a box is a non-negative combination.
        for a in -6i64..=6 {
            for b in -6i64..=6 {
                let y = ivec(&[a, b]);
                let in_dual = c.generators().iter().all(|g| !dot(g, &y).is_negative());
                assert_eq!(in_dual, d.contains(&y), "{a},{b}");
            }
        }
    }

    #[test]
    fn strong_convexity() {
        assert!(!is_strongly_convex(&Cone::from_i64(&[&[1, 2], &[-1, -2]], 2).unwrap()));
        assert!(is_strongly_convex(&Cone::from_i64(&[&[1, 2]], 2).unwrap()));
        assert!(dual_cone(&Cone::new(vec![], 3).unwrap()).is_full_space());
    }

    #[test]
    fn box_scan_of_triangle() {
        let p = Polytope::from_i64(&[&[0, 0], &[2, 0], &[0, 2]]).unwrap();
        assert_eq!(p.box_scan().unwrap().len(), 6);
        assert_eq!(normalized_simplex_volume(p.points()), int(4));
    }
}
