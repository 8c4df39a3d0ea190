//! Built-in toric data for the three weighted projective examples.

use crate::fan::{enhanced_fan, Fan};
use crate::intlat::{enhance_polytope, fermat_dual_polytope, ivec, BraneData, IntVector, Polytope};

/// Quintic: points of the dual polytope, origin first.
pub fn quintic_polytope() -> Polytope {
    fermat_dual_polytope(&[1, 1, 1, 1, 1]).expect("Fermat weights")
}

pub fn quintic_brane() -> BraneData {
    BraneData::from_i64(&[-1, 0, 0, 0, 0, 1]).expect("balanced brane")
}

/// Complete fan of P^4 on the five vertices.
pub fn quintic_fan() -> Fan {
    Fan::simplex_fan(quintic_polytope().points()[1..].to_vec()).expect("valid fan")
}

pub fn quintic_lattice() -> Vec<IntVector> {
    vec![ivec(&[-5, 1, 1, 1, 1, 1])]
}

pub fn enhanced_quintic_polytope() -> Polytope {
    enhance_polytope(&quintic_polytope(), &quintic_brane()).expect("non-degenerate brane")
}

pub fn enhanced_quintic_fan() -> Fan {
    enhanced_fan(&quintic_fan(), &quintic_polytope(), &quintic_brane()).expect("w0 in support")
}

/// `l0`, `l1` of the enhanced quintic lattice.
pub fn enhanced_quintic_lattice() -> Vec<IntVector> {
    vec![ivec(&[-1, 0, 0, 0, 0, 1, 1, -1]), ivec(&[-5, 1, 1, 1, 1, 1, 0, 0])]
}

/// The nine maximal cones of the enhanced fan, as divisor index sets.
pub fn enhanced_quintic_cones() -> Vec<Vec<usize>> {
    vec![
        vec![1, 2, 3, 4, 6],
        vec![1, 2, 3, 5, 7],
        vec![1, 2, 4, 5, 7],
        vec![1, 3, 4, 5, 7],
        vec![2, 3, 4, 5, 7],
        vec![1, 2, 3, 6, 7],
        vec![1, 2, 4, 6, 7],
        vec![1, 3, 4, 6, 7],
        vec![2, 3, 4, 6, 7],
    ]
}

pub fn p22211_polytope() -> Polytope {
    let mut pts = fermat_dual_polytope(&[2, 2, 2, 1, 1]).expect("Fermat weights").points().to_vec();
    pts.push(ivec(&[-1, -1, -1, 0]));
    Polytope::reflexive_style(pts).expect("distinct points")
}

/// Fan of P(2,2,2,1,1) refined at the extra point `(-1,-1,-1,0)`.
pub fn p22211_fan() -> Fan {
    let pts = p22211_polytope().points().to_vec();
    Fan::simplex_fan(pts[1..6].to_vec())
        .and_then(|f| f.star_subdivide(pts[6].clone()))
        .expect("valid subdivision")
}

pub fn p22211_lattice() -> Vec<IntVector> {
    vec![ivec(&[-4, 1, 1, 1, 0, 0, 1]), ivec(&[0, 0, 0, 0, 1, 1, -2])]
}

pub fn p72221_polytope() -> Polytope {
    let mut pts = fermat_dual_polytope(&[7, 2, 2, 2, 1]).expect("Fermat weights").points().to_vec();
    pts.push(ivec(&[-3, -1, -1, -1]));
    pts.push(ivec(&[-4, -1, -1, -1]));
    pts.push(ivec(&[-1, 0, 0, 0]));
    Polytope::reflexive_style(pts).expect("distinct points")
}

/// Fan of P(7,2,2,2,1) refined at the three extra points.
pub fn p72221_fan() -> Fan {
    let pts = p72221_polytope().points().to_vec();
    let mut fan = Fan::simplex_fan(pts[1..6].to_vec()).expect("valid fan");
    for p in &pts[6..] {
        fan = fan.star_subdivide(p.clone()).expect("valid subdivision");
    }
    fan
}

pub fn p72221_lattice() -> Vec<IntVector> {
    vec![
        ivec(&[-1, 0, 0, 0, 0, -1, 1, 1, 0]),
        ivec(&[0, 1, 0, 0, 0, 1, -2, 0, 0]),
        ivec(&[0, 0, 1, 1, 1, 0, 0, 1, -4]),
        ivec(&[0, 0, 0, 0, 0, 1, 0, -2, 1]),
    ]
}
