use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::{IntMat, IntVec, LatticeError, Rat, RatVec};

/// Row Hermite normal form `h = u * m`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Hnf {
    pub h: IntMat,
    pub u: IntMat,
    /// Column index of each pivot, one per nonzero row of `h`.
    pub pivots: Vec<usize>,
}

/// Smith normal form `s = u * m * v`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Snf {
    pub s: IntMat,
    pub u: IntMat,
    pub v: IntMat,
}

impl Snf {
    /// Diagonal entries `d_1 | d_2 | ...`, including trailing zeros up to
    /// `min(rows, cols)`.
    pub fn diagonal(&self) -> Vec<BigInt> {
        (0..self.s.nrows().min(self.s.ncols()))
            .map(|i| self.s[(i, i)].clone())
            .collect()
    }

    pub fn rank(&self) -> usize {
        self.diagonal().iter().filter(|d| !d.is_zero()).count()
    }
}

/// Determinant of a square integer matrix (fraction-free Bareiss elimination).
pub fn det(m: &IntMat) -> BigInt {
    let n = m.nrows();
    assert_eq!(n, m.ncols(), "determinant of a non-square matrix");
    if n == 0 {
        return BigInt::one();
    }
    let mut a = m.clone();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[(k, k)].is_zero() {
            let Some(p) = (k + 1..n).find(|&i| !a[(i, k)].is_zero()) else {
                return BigInt::zero();
            };
            a.swap_rows(k, p);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (&a[(i, j)] * &a[(k, k)] - &a[(i, k)] * &a[(k, j)]) / &prev;
                a[(i, j)] = v;
            }
        }
        prev = a[(k, k)].clone();
    }
    sign * &a[(n - 1, n - 1)]
}

/// Rank over the rationals.
pub fn rank(m: &IntMat) -> usize {
    hnf(m).pivots.len()
}

/// Row-style Hermite normal form: echelon, positive pivots, entries above
/// each pivot reduced into `[0, pivot)`.
pub fn hnf(m: &IntMat) -> Hnf {
    let rows = m.nrows();
    let cols = m.ncols();
    let mut h = m.clone();
    let mut u = IntMat::identity(rows);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        loop {
            // smallest nonzero entry at or below r in column c
            let best = (r..rows)
                .filter(|&i| !h[(i, c)].is_zero())
                .min_by_key(|&i| h[(i, c)].abs());
            let Some(best) = best else { break };
            h.swap_rows(r, best);
            u.swap_rows(r, best);
            let mut done = true;
            for i in r + 1..rows {
                if h[(i, c)].is_zero() {
                    continue;
                }
                let q = h[(i, c)].div_floor(&h[(r, c)]);
                h.add_row_multiple(i, r, &-&q);
                u.add_row_multiple(i, r, &-&q);
                if !h[(i, c)].is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if h[(r, c)].is_zero() {
            continue;
        }
        if h[(r, c)].is_negative() {
            h.negate_row(r);
            u.negate_row(r);
        }
        let p = h[(r, c)].clone();
        for i in 0..r {
            let q = h[(i, c)].div_floor(&p);
            h.add_row_multiple(i, r, &-&q);
            u.add_row_multiple(i, r, &-&q);
        }
        pivots.push(c);
        r += 1;
    }
    Hnf { h, u, pivots }
}

/// Smith normal form with unimodular transforms.
pub fn snf(m: &IntMat) -> Snf {
    let rows = m.nrows();
    let cols = m.ncols();
    let mut s = m.clone();
    let mut u = IntMat::identity(rows);
    let mut v = IntMat::identity(cols);

    let mut t = 0;
    while t < rows.min(cols) {
        // pivot: smallest nonzero absolute value in the trailing block
        let mut best: Option<(usize, usize)> = None;
        for i in t..rows {
            for j in t..cols {
                if s[(i, j)].is_zero() {
                    continue;
                }
                if best.is_none_or(|(bi, bj)| s[(i, j)].abs() < s[(bi, bj)].abs()) {
                    best = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = best else { break };
        s.swap_rows(t, pi);
        u.swap_rows(t, pi);
        s.swap_cols(t, pj);
        v.swap_cols(t, pj);

        loop {
            let mut changed = false;
            for i in t + 1..rows {
                if s[(i, t)].is_zero() {
                    continue;
                }
                let q = s[(i, t)].div_floor(&s[(t, t)]);
                s.add_row_multiple(i, t, &-&q);
                u.add_row_multiple(i, t, &-&q);
                if !s[(i, t)].is_zero() {
                    s.swap_rows(t, i);
                    u.swap_rows(t, i);
                    changed = true;
                }
            }
            for j in t + 1..cols {
                if s[(t, j)].is_zero() {
                    continue;
                }
                let q = s[(t, j)].div_floor(&s[(t, t)]);
                s.add_col_multiple(j, t, &-&q);
                v.add_col_multiple(j, t, &-&q);
                if !s[(t, j)].is_zero() {
                    s.swap_cols(t, j);
                    v.swap_cols(t, j);
                    changed = true;
                }
            }
            if changed {
                continue;
            }
            // divisibility: fold an offending row into the pivot row
            let offending = (t + 1..rows).find(|&i| {
                (t + 1..cols).any(|j| !s[(i, j)].is_multiple_of(&s[(t, t)]))
            });
            match offending {
                Some(i) => {
                    s.add_row_multiple(t, i, &BigInt::one());
                    u.add_row_multiple(t, i, &BigInt::one());
                }
                None => break,
            }
        }
        if s[(t, t)].is_negative() {
            s.negate_row(t);
            u.negate_row(t);
        }
        t += 1;
    }
    Snf { s, u, v }
}

/// Lattice basis of `{x in Z^n : m x = 0}`, as rows.
pub fn integer_kernel(m: &IntMat) -> Vec<IntVec> {
    let n = m.ncols();
    let t = hnf(&m.transpose());
    let r = t.pivots.len();
    (r..n).map(|i| t.u.row(i)).collect()
}

/// Solves `a x = b` over the rationals for square nonsingular `a`.
pub fn solve_rational(a: &IntMat, b: &[Rat]) -> Result<RatVec, LatticeError> {
    let n = a.nrows();
    if a.ncols() != n {
        return Err(LatticeError::DimensionMismatch {
            expected: n,
            found: a.ncols(),
        });
    }
    if b.len() != n {
        return Err(LatticeError::DimensionMismatch {
            expected: n,
            found: b.len(),
        });
    }
    let mut m: Vec<Vec<Rat>> = (0..n)
        .map(|i| {
            let mut row: Vec<Rat> = (0..n).map(|j| Rat::from_integer(a[(i, j)].clone())).collect();
            row.push(b[i].clone());
            row
        })
        .collect();
    for k in 0..n {
        let p = (k..n)
            .find(|&i| !m[i][k].is_zero())
            .ok_or(LatticeError::Singular)?;
        m.swap(k, p);
        let piv = m[k][k].clone();
        for x in m[k].iter_mut() {
            *x /= &piv;
        }
        for i in 0..n {
            if i == k || m[i][k].is_zero() {
                continue;
            }
            let f = m[i][k].clone();
            for j in k..=n {
                let d = &f * &m[k][j];
                m[i][j] -= d;
            }
        }
    }
    Ok(m.into_iter().map(|row| row[n].clone()).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ivec;
    use proptest::prelude::*;

    fn mat(rows: &[&[i64]]) -> IntMat {
        IntMat::from_i64_rows(rows)
    }

    fn is_row_hnf(h: &IntMat, pivots: &[usize]) -> bool {
        for (r, &c) in pivots.iter().enumerate() {
            if !h[(r, c)].is_positive() {
                return false;
            }
            for i in 0..r {
                if h[(i, c)].is_negative() || h[(i, c)] >= h[(r, c)] {
                    return false;
                }
            }
            for i in r + 1..h.nrows() {
                if !h[(i, c)].is_zero() {
                    return false;
                }
            }
            for j in 0..c {
                if !h[(r, j)].is_zero() {
                    return false;
                }
            }
        }
        (pivots.len()..h.nrows()).all(|i| h.row(i).is_zero())
    }

    fn check_snf(m: &IntMat, out: &Snf) {
        assert_eq!(out.u.mul(m).mul(&out.v), out.s);
        assert!(det(&out.u).abs().is_one());
        assert!(det(&out.v).abs().is_one());
        for i in 0..out.s.nrows() {
            for j in 0..out.s.ncols() {
                if i != j {
                    assert!(out.s[(i, j)].is_zero());
                }
            }
        }
        let d = out.diagonal();
        for w in d.windows(2) {
            assert!(!w[0].is_negative());
            if w[0].is_zero() {
                assert!(w[1].is_zero());
            } else {
                assert!(w[1].is_multiple_of(&w[0]));
            }
        }
    }

    #[test]
    fn determinant() {
        assert_eq!(det(&mat(&[&[2, 0], &[0, 3]])), BigInt::from(6));
        assert_eq!(det(&mat(&[&[0, 1], &[1, 0]])), BigInt::from(-1));
        assert_eq!(
            det(&mat(&[&[-1, 1, 0], &[-1, 0, 1], &[2, 0, 0]])),
            BigInt::from(2)
        );
        assert_eq!(det(&mat(&[&[1, 2], &[2, 4]])), BigInt::zero());
    }

    #[test]
    fn hnf_identity_and_diagonal() {
        let id = IntMat::identity(3);
        let out = hnf(&id);
        assert_eq!(out.h, id);
        assert_eq!(out.u, id);

        let d = mat(&[&[2, 0], &[0, 3]]);
        let out = hnf(&d);
        assert_eq!(out.h, d);
        assert_eq!(out.u, IntMat::identity(2));
    }

    /// Independent row reduction: enumerate the row lattice's echelon form by
    /// computing successive gcd-minimal pivots through 2x2 Bezout steps.
    fn hnf_oracle(m: &IntMat) -> IntMat {
        // Build H column by column: the pivot of column c in the row lattice
        // restricted to vectors vanishing on columns < c is the gcd of the
        // c-th entries of that sublattice. We reduce with plain Euclid on
        // i128 copies.
        let mut rows: Vec<Vec<i128>> = m
            .row_vecs()
            .iter()
            .map(|r| r.to_i64s().into_iter().map(i128::from).collect())
            .collect();
        let ncols = m.ncols();
        let mut out: Vec<Vec<i128>> = Vec::new();
        for c in 0..ncols {
            loop {
                let nz: Vec<usize> = (0..rows.len()).filter(|&i| rows[i][c] != 0).collect();
                if nz.len() <= 1 {
                    break;
                }
                let (a, b) = (nz[0], nz[1]);
                let (big, small) = if rows[a][c].abs() >= rows[b][c].abs() { (a, b) } else { (b, a) };
                let q = rows[big][c] / rows[small][c];
                let sub: Vec<i128> = rows[small].iter().map(|x| x * q).collect();
                for (x, s) in rows[big].iter_mut().zip(sub) {
                    *x -= s;
                }
            }
            if let Some(i) = (0..rows.len()).find(|&i| rows[i][c] != 0) {
                let mut p = rows.remove(i);
                if p[c] < 0 {
                    p.iter_mut().for_each(|x| *x = -*x);
                }
                out.push(p);
            }
        }
        // reduce above pivots
        for r in 0..out.len() {
            let c = (0..ncols).find(|&j| out[r][j] != 0).unwrap();
            for i in 0..r {
                let q = out[i][c].div_euclid(out[r][c]);
                let sub: Vec<i128> = out[r].iter().map(|x| x * q).collect();
                for (x, s) in out[i].iter_mut().zip(sub) {
                    *x -= s;
                }
            }
        }
        while out.len() < m.nrows() {
            out.push(vec![0; ncols]);
        }
        let rows: Vec<IntVec> = out
            .into_iter()
            .map(|r| IntVec::new(r.into_iter().map(BigInt::from).collect()))
            .collect();
        IntMat::from_rows(&rows).unwrap()
    }

    #[test]
    fn hnf_of_weight_table_matches_oracle() {
        let w = mat(&[
            &[0, 0, 1, 1, 1, 1],
            &[0, 1, 3, 1, 0, 6],
            &[1, 0, 1, 3, 6, 0],
        ]);
        let out = hnf(&w);
        assert_eq!(out.h, hnf_oracle(&w));
        assert_eq!(out.u.mul(&w), out.h);
        assert!(det(&out.u).abs().is_one());
        assert_eq!(
            out.h,
            mat(&[
                &[1, 0, 0, 2, 5, -1],
                &[0, 1, 0, -2, -3, 3],
                &[0, 0, 1, 1, 1, 1],
            ])
        );
    }

    #[test]
    fn snf_examples() {
        let d = mat(&[&[2, 0], &[0, 3]]);
        let out = snf(&d);
        check_snf(&d, &out);
        assert_eq!(out.diagonal(), vec![BigInt::from(1), BigInt::from(6)]);

        // columns (-1,-1,2), (1,0,0), (0,1,0)
        let cone = IntMat::from_columns(&[ivec![-1, -1, 2], ivec![1, 0, 0], ivec![0, 1, 0]]).unwrap();
        let out = snf(&cone);
        check_snf(&cone, &out);
        assert_eq!(
            out.diagonal(),
            vec![BigInt::from(1), BigInt::from(1), BigInt::from(2)]
        );
    }

    #[test]
    fn snf_of_rectangular() {
        let m = mat(&[&[2, 4, 4], &[-6, 6, 12], &[10, -4, -16], &[1, 0, 3]]);
        let out = snf(&m);
        check_snf(&m, &out);
    }

    #[test]
    fn kernel_of_theta_transpose() {
        // columns of theta: (1,-1,0), (0,0,1)
        let tt = mat(&[&[1, -1, 0], &[0, 0, 1]]);
        let k = integer_kernel(&tt);
        assert_eq!(k.len(), 1);
        let h = &k[0];
        assert!(tt.mul_vec(h).is_zero());
        assert!(h == &ivec![1, 1, 0] || h == &ivec![-1, -1, 0]);
    }

    #[test]
    fn solve() {
        let a = mat(&[&[2, 1], &[1, 3]]);
        let x = solve_rational(&a, &[Rat::from_integer(3.into()), Rat::from_integer(4.into())]).unwrap();
        assert_eq!(x, vec![crate::lattice::rat(1, 1), crate::lattice::rat(1, 1)]);
        let s = mat(&[&[1, 2], &[2, 4]]);
        assert_eq!(
            solve_rational(&s, &[Rat::zero(), Rat::zero()]),
            Err(LatticeError::Singular)
        );
    }

    fn arb_matrix() -> impl Strategy<Value = IntMat> {
        (1usize..=5, 1usize..=5).prop_flat_map(|(r, c)| {
            proptest::collection::vec(-9i64..=9, r * c).prop_map(move |v| {
                let rows: Vec<IntVec> = v.chunks(c).map(IntVec::from_i64s).collect();
                IntMat::from_rows(&rows).unwrap()
            })
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(200))]

        #[test]
        fn snf_is_unimodular_and_divisible(m in arb_matrix()) {
            let out = snf(&m);
            check_snf(&m, &out);
        }

        #[test]
        fn hnf_is_unimodular_and_idempotent(m in arb_matrix()) {
            let out = hnf(&m);
            prop_assert_eq!(out.u.mul(&m), out.h.clone());
            prop_assert!(det(&out.u).abs().is_one());
            prop_assert!(is_row_hnf(&out.h, &out.pivots));
            prop_assert_eq!(hnf(&out.h).h, out.h.clone());
            prop_assert_eq!(out.h, hnf_oracle(&m));
        }
    }
}
