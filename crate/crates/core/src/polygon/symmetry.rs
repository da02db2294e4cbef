use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use super::{cross, LatticePolygon};
use crate::lattice::{det, IntMat, IntVec};

/// Lattice automorphisms of a polygon, sorted.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SymmetryGroup {
    pub elements: Vec<IntMat>,
}

impl SymmetryGroup {
    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn contains(&self, g: &IntMat) -> bool {
        self.elements.binary_search(g).is_ok()
    }

    /// `{I, -I}`
    pub fn is_plus_minus_identity(&self) -> bool {
        let id = IntMat::identity(2);
        let neg = IntMat::from_i64_rows(&[&[-1, 0], &[0, -1]]);
        self.order() == 2 && self.contains(&id) && self.contains(&neg)
    }
}

/// The unique linear map sending `u0 -> w0`, `u1 -> w1`, if it is integral.
fn map_pair(u0: &IntVec, u1: &IntVec, w0: &IntVec, w1: &IntVec) -> Option<IntMat> {
    let d = cross(u0, u1);
    if d.is_zero() {
        return None;
    }
    // g = W adj(U) / det U with U = [u0 u1] as columns
    let adj = [
        [u1[1].clone(), -&u1[0]],
        [-&u0[1], u0[0].clone()],
    ];
    let mut rows = Vec::with_capacity(2);
    for i in 0..2 {
        let mut row = Vec::with_capacity(2);
        for j in 0..2 {
            let num: BigInt = &w0[i] * &adj[0][j] + &w1[i] * &adj[1][j];
            let (q, r) = num.div_mod_floor(&d);
            if !r.is_zero() {
                return None;
            }
            row.push(q);
        }
        rows.push(IntVec::new(row));
    }
    IntMat::from_rows(&rows).ok()
}

/// All `g` in `GL2(Z)` with `g P = P`.
///
/// A symmetry is fixed by where it sends the flag (vertex 0, vertex 1), and it
/// must send it to some other flag `(v_j, v_{j +- 1})`; each candidate is
/// checked against the whole vertex set.
pub fn lattice_symmetries(p: &LatticePolygon) -> SymmetryGroup {
    let vs = p.vertices();
    let n = vs.len();
    let mut elements = Vec::new();
    for j in 0..n {
        for next in [(j + 1) % n, (j + n - 1) % n] {
            let Some(g) = map_pair(&vs[0], &vs[1], &vs[j], &vs[next]) else {
                continue;
            };
            if !det(&g).abs().is_one() {
                continue;
            }
            if p.transform(&g).ok().as_ref() == Some(p) {
                elements.push(g);
            }
        }
    }
    elements.sort();
    elements.dedup();
    SymmetryGroup { elements }
}
