//! Small dense exact linear algebra over Z and Q.

use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::arith::{primitive_integer, rat_from, Int, Rat};

pub fn to_rat_rows(rows: &[Vec<Int>]) -> Vec<Vec<Rat>> {
    rows.iter().map(|r| r.iter().map(rat_from).collect()).collect()
}

pub fn transpose<T: Clone>(rows: &[Vec<T>], ncols: usize) -> Vec<Vec<T>> {
    (0..ncols).map(|j| rows.iter().map(|r| r[j].clone()).collect()).collect()
}

/// Reduced row echelon form in place; returns pivot columns.
pub fn rref(m: &mut [Vec<Rat>]) -> Vec<usize> {
    rref_with_order(m, None)
}

/// Reduced row echelon form with a prescribed column scanning order.
pub fn rref_with_order(m: &mut [Vec<Rat>], order: Option<&[usize]>) -> Vec<usize> {
    let nrows = m.len();
    if nrows == 0 {
        return vec![];
    }
    let ncols = m[0].len();
    let cols: Vec<usize> = match order {
        Some(o) => o.to_vec(),
        None => (0..ncols).collect(),
    };
    let mut pivots = Vec::new();
    let mut r = 0;
    for &c in &cols {
        if r == nrows {
            break;
        }
        let Some(p) = (r..nrows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][c].recip();
        for x in m[r].iter_mut() {
            *x = &*x * &inv;
        }
        for i in 0..nrows {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                let (head, tail) = if i < r { m.split_at_mut(r) } else { m.split_at_mut(i) };
                let (src, dst) = if i < r { (&tail[0], &mut head[i]) } else { (&head[r], &mut tail[0]) };
                for (d, s) in dst.iter_mut().zip(src.iter()) {
                    *d = &*d - &(&f * s);
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank_q(rows: &[Vec<Rat>]) -> usize {
    let mut m = rows.to_vec();
    rref(&mut m).len()
}

pub fn rank_int(rows: &[Vec<Int>]) -> usize {
    rank_q(&to_rat_rows(rows))
}

/// Basis of `{x : A x = 0}` over Q for `A` given by rows with `ncols` columns.
pub fn nullspace_q(rows: &[Vec<Rat>], ncols: usize) -> Vec<Vec<Rat>> {
    let mut m = rows.to_vec();
    let pivots = rref(&mut m);
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![Rat::zero(); ncols];
            v[f] = Rat::one();
            for (i, &p) in pivots.iter().enumerate() {
                v[p] = -m[i][f].clone();
            }
            v
        })
        .collect()
}

/// Solves `sum_i c_i basis[i] = target` over Q. `None` if inconsistent.
/// The basis must be linearly independent for the solution to be unique.
pub fn solve_combination(basis: &[Vec<Rat>], target: &[Rat]) -> Option<Vec<Rat>> {
    let k = basis.len();
    let n = target.len();
    // Augmented system: rows are coordinates, columns the basis vectors plus target.
    let mut m: Vec<Vec<Rat>> = (0..n)
        .map(|j| {
            let mut row: Vec<Rat> = basis.iter().map(|b| b[j].clone()).collect();
            row.push(target[j].clone());
            row
        })
        .collect();
    let pivots = rref(&mut m);
    if pivots.contains(&k) {
        return None;
    }
    let mut sol = vec![Rat::zero(); k];
    for (i, &p) in pivots.iter().enumerate() {
        sol[p] = m[i][k].clone();
    }
    Some(sol)
}

/// Determinant via fraction-free Bareiss elimination.
pub fn det_int(m: &[Vec<Int>]) -> Int {
    let n = m.len();
    if n == 0 {
        return Int::one();
    }
    let mut a = m.to_vec();
    let mut sign = Int::one();
    let mut prev = Int::one();
    for k in 0..n {
        if a[k][k].is_zero() {
            let Some(p) = (k + 1..n).find(|&i| !a[i][k].is_zero()) else {
                return Int::zero();
            };
            a.swap(k, p);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = v / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    sign * a[n - 1][n - 1].clone()
}

/// Primitive integer vector spanning the one-dimensional null space, if it is one-dimensional.
pub fn primitive_normal(rows: &[Vec<Int>], ncols: usize) -> Option<Vec<Int>> {
    let ns = nullspace_q(&to_rat_rows(rows), ncols);
    if ns.len() != 1 {
        return None;
    }
    Some(primitive_integer(&ns[0]))
}

pub fn dot(a: &[Int], b: &[Int]) -> Int {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn gcd_vec(v: &[Int]) -> Int {
    v.iter().fold(Int::zero(), |g, x| g.gcd(x)).abs()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{int, rat, rat_int};

    fn iv(v: &[i64]) -> Vec<Int> {
        v.iter().map(|x| int(*x)).collect()
    }

    #[test]
    fn bareiss_matches_cofactor() {
        let m = vec![iv(&[2, -1, 0]), iv(&[1, 3, 4]), iv(&[0, 5, -2])];
        // 2*(3*-2-4*5) - (-1)*(1*-2-0) + 0 = -52 - 2
        assert_eq!(det_int(&m), int(-54));
        assert_eq!(det_int(&[iv(&[0, 1]), iv(&[1, 0])]), int(-1));
    }

    #[test]
    fn nullspace_and_solve() {
        let a = vec![vec![rat_int(1), rat_int(2), rat_int(3)]];
        let ns = nullspace_q(&a, 3);
        assert_eq!(ns.len(), 2);
        for v in &ns {
            let s: Rat = v.iter().zip(&a[0]).map(|(x, y)| x * y).sum();
            assert!(s.is_zero());
        }
        let basis = vec![vec![rat_int(1), rat_int(1)], vec![rat_int(1), rat_int(-1)]];
        let sol = solve_combination(&basis, &[rat_int(3), rat_int(1)]).unwrap();
        assert_eq!(sol, vec![rat_int(2), rat_int(1)]);
        assert!(solve_combination(&[vec![rat_int(1), rat_int(0)]], &[rat_int(0), rat(1, 2)]).is_none());
    }
}
