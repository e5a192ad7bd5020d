use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::IntMatrix;

type Col = Vec<BigInt>;

fn unit(n: usize, j: usize) -> Col {
    let mut v = vec![BigInt::zero(); n];
    v[j] = BigInt::one();
    v
}

/// `dst -= q * src` on whole columns.
fn sub_mul(cols: &mut [Col], dst: usize, src: usize, q: &BigInt) {
    if q.is_zero() {
        return;
    }
    let (d, s) = if dst < src {
        let (a, b) = cols.split_at_mut(src);
        (&mut a[dst], &b[0])
    } else {
        let (a, b) = cols.split_at_mut(dst);
        (&mut b[0], &a[src])
    };
    for (x, y) in d.iter_mut().zip(s) {
        if !y.is_zero() {
            *x -= q * y;
        }
    }
}

fn negate(c: &mut Col) {
    for x in c.iter_mut() {
        *x = -std::mem::take(x);
    }
}

/// Column-style Hermite normal form.
///
/// Returns `(H, U)` with `H = M * U`, `U` unimodular. The nonzero columns of
/// `H` come first, have strictly increasing pivot rows and positive pivots, and
/// every entry left of a pivot lies in `[0, pivot)`.
pub fn hermite_normal_form(m: &IntMatrix) -> (IntMatrix, IntMatrix) {
    let (rows, cols) = m.shape();
    let mut h: Vec<Col> = m.columns();
    let mut u: Vec<Col> = (0..cols).map(|j| unit(cols, j)).collect();
    let mut k = 0;
    for i in 0..rows {
        if k == cols {
            break;
        }
        loop {
            let pivot = (k..cols).filter(|&j| !h[j][i].is_zero()).min_by_key(|&j| h[j][i].abs());
            let Some(j0) = pivot else { break };
            h.swap(k, j0);
            u.swap(k, j0);
            let mut clean = true;
            for j in k + 1..cols {
                if h[j][i].is_zero() {
                    continue;
                }
                let q = h[j][i].div_floor(&h[k][i]);
                sub_mul(&mut h, j, k, &q);
                sub_mul(&mut u, j, k, &q);
                clean &= h[j][i].is_zero();
            }
            if clean {
                break;
            }
        }
        if h[k][i].is_zero() {
            continue;
        }
        if h[k][i].is_negative() {
            negate(&mut h[k]);
            negate(&mut u[k]);
        }
        for j in 0..k {
            let q = h[j][i].div_floor(&h[k][i]);
            sub_mul(&mut h, j, k, &q);
            sub_mul(&mut u, j, k, &q);
        }
        k += 1;
    }
    (IntMatrix::from_columns(rows, &h), IntMatrix::from_columns(cols, &u))
}

/// Nonzero columns of the Hermite form: the canonical basis of the column lattice.
pub fn hnf_basis(m: &IntMatrix) -> IntMatrix {
    let (h, _) = hermite_normal_form(m);
    let keep: Vec<usize> = (0..h.cols()).filter(|&j| h.column(j).iter().any(|x| !x.is_zero())).collect();
    h.select_columns(&keep)
}

/// Result of a Smith decomposition `S = U * M * V`.
#[derive(Clone, Debug)]
pub struct Smith {
    pub s: IntMatrix,
    pub u: IntMatrix,
    pub v: IntMatrix,
}

impl Smith {
    /// Nonzero diagonal entries, in order.
    pub fn diagonal(&self) -> Vec<BigInt> {
        let n = self.s.rows().min(self.s.cols());
        (0..n).map(|i| self.s.get(i, i).clone()).take_while(|d| !d.is_zero()).collect()
    }

    pub fn rank(&self) -> usize {
        self.diagonal().len()
    }
}

/// Smith normal form with transforms. The diagonal is nonnegative and each
/// entry divides the next.
pub fn smith_normal_form(m: &IntMatrix) -> Smith {
    let (r, c) = m.shape();
    let mut a: Vec<Vec<BigInt>> = m.row_vectors();
    let mut u: Vec<Vec<BigInt>> = (0..r).map(|i| unit(r, i)).collect();
    // Column operations act on the columns of V; keep V as a list of columns.
    let mut v: Vec<Col> = (0..c).map(|j| unit(c, j)).collect();

    let col_sub = |a: &mut Vec<Vec<BigInt>>, v: &mut Vec<Col>, dst: usize, src: usize, q: &BigInt| {
        for row in a.iter_mut() {
            if !row[src].is_zero() {
                let t = q * &row[src];
                row[dst] -= t;
            }
        }
        sub_mul(v, dst, src, q);
    };

    for t in 0..r.min(c) {
        loop {
            let mut best: Option<(usize, usize)> = None;
            for i in t..r {
                for j in t..c {
                    if a[i][j].is_zero() {
                        continue;
                    }
                    if best.is_none_or(|(bi, bj)| a[i][j].abs() < a[bi][bj].abs()) {
                        best = Some((i, j));
                    }
                }
            }
            let Some((bi, bj)) = best else {
                return finish(a, u, v, r, c);
            };
            a.swap(t, bi);
            u.swap(t, bi);
            if bj != t {
                for row in a.iter_mut() {
                    row.swap(t, bj);
                }
                v.swap(t, bj);
            }
            let mut clean = true;
            for i in t + 1..r {
                if a[i][t].is_zero() {
                    continue;
                }
                let q = a[i][t].div_floor(&a[t][t]);
                sub_mul(&mut a, i, t, &q);
                sub_mul(&mut u, i, t, &q);
                clean &= a[i][t].is_zero();
            }
            for j in t + 1..c {
                if a[t][j].is_zero() {
                    continue;
                }
                let q = a[t][j].div_floor(&a[t][t]);
                col_sub(&mut a, &mut v, j, t, &q);
                clean &= a[t][j].is_zero();
            }
            if !clean {
                continue;
            }
            let bad = (t + 1..r).find(|&i| (t + 1..c).any(|j| !a[i][j].is_multiple_of(&a[t][t])));
            match bad {
                Some(i) => {
                    sub_mul(&mut a, t, i, &BigInt::from(-1));
                    sub_mul(&mut u, t, i, &BigInt::from(-1));
                }
                None => break,
            }
        }
        if a[t][t].is_negative() {
            negate(&mut a[t]);
            negate(&mut u[t]);
        }
    }
    finish(a, u, v, r, c)
}

fn finish(a: Vec<Vec<BigInt>>, u: Vec<Vec<BigInt>>, v: Vec<Col>, r: usize, c: usize) -> Smith {
    let s = if r == 0 { IntMatrix::zeros(0, c) } else { IntMatrix::from_columns(c, &a).transpose() };
    let u = if r == 0 { IntMatrix::zeros(0, 0) } else { IntMatrix::from_columns(r, &u).transpose() };
    Smith { s, u, v: IntMatrix::from_columns(c, &v) }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn is_hnf(h: &IntMatrix) -> bool {
        let mut last_pivot: Option<usize> = None;
        let mut seen_zero = false;
        for j in 0..h.cols() {
            let col = h.column(j);
            match col.iter().position(|x| !x.is_zero()) {
                None => seen_zero = true,
                Some(p) => {
                    if seen_zero || last_pivot.is_some_and(|lp| p <= lp) || !col[p].is_positive() {
                        return false;
                    }
                    for k in 0..j {
                        let x = h.get(p, k);
                        if x.is_negative() || x >= &col[p] {
                            return false;
                        }
                    }
                    last_pivot = Some(p);
                }
            }
        }
        true
    }

    #[test]
    fn hnf_of_identity_and_permutation() {
        let id = IntMatrix::identity(3);
        let (h, u) = hermite_normal_form(&id);
        assert_eq!(h, id);
        assert_eq!(u, id);
        let p = IntMatrix::from_rows(&[[0, 1, 0], [0, 0, 1], [1, 0, 0]]);
        let (h, u) = hermite_normal_form(&p);
        assert_eq!(h, id);
        assert_eq!(&p * &u, h);
    }

    #[test]
    fn hnf_reduced_input_is_fixed() {
        let m = IntMatrix::from_i64_columns(3, &[[1, 0, 2], [0, 1, -2]]);
        let (h, u) = hermite_normal_form(&m);
        assert_eq!(h, m);
        assert_eq!(u, IntMatrix::identity(2));
    }

    #[test]
    fn hnf_reconstruction_and_shape() {
        let m = IntMatrix::from_rows(&[[4, 6, 2], [2, -8, 10], [0, 3, -3]]);
        let (h, u) = hermite_normal_form(&m);
        assert_eq!(&m * &u, h);
        assert!(is_hnf(&h));
        assert_eq!(u.det().abs(), BigInt::one());
    }

    #[test]
    fn snf_examples() {
        let s = smith_normal_form(&IntMatrix::from_rows(&[[2, 0], [0, 3]]));
        assert_eq!(s.s, IntMatrix::from_rows(&[[1, 0], [0, 6]]));
        let m = IntMatrix::from_rows(&[[2, 4], [6, 8]]);
        let s = smith_normal_form(&m);
        assert_eq!(s.s, IntMatrix::from_rows(&[[2, 0], [0, 4]]));
        assert_eq!(&(&s.u * &m) * &s.v, s.s);
        let z = smith_normal_form(&IntMatrix::zeros(2, 3));
        assert!(z.s.is_zero());
        assert_eq!(z.rank(), 0);
    }

    #[test]
    fn snf_degenerate_shapes() {
        for (r, c) in [(0, 3), (3, 0), (0, 0)] {
            let s = smith_normal_form(&IntMatrix::zeros(r, c));
            assert_eq!(s.s.shape(), (r, c));
            assert_eq!(s.u.shape(), (r, r));
            assert_eq!(s.v.shape(), (c, c));
        }
    }

    fn small_matrix() -> impl proptest::strategy::Strategy<Value = IntMatrix> {
        use proptest::prelude::*;
        (0usize..5, 0usize..5).prop_flat_map(|(r, c)| {
            proptest::collection::vec(-6i64..=6, r * c).prop_map(move |v| {
                let rows: Vec<Vec<i64>> = (0..r).map(|i| v[i * c..(i + 1) * c].to_vec()).collect();
                if r == 0 {
                    IntMatrix::zeros(0, c)
                } else {
                    IntMatrix::from_rows(&rows)
                }
            })
        })
    }

    proptest::proptest! {
        #[test]
        fn hnf_identities(m in small_matrix()) {
            let (h, u) = hermite_normal_form(&m);
            proptest::prop_assert_eq!(&m * &u, h.clone());
            proptest::prop_assert!(is_hnf(&h));
            proptest::prop_assert!(u.det().abs().is_one());
        }

        #[test]
        fn snf_identities(m in small_matrix()) {
            let s = smith_normal_form(&m);
            proptest::prop_assert_eq!(&(&s.u * &m) * &s.v, s.s.clone());
            proptest::prop_assert!(s.u.det().abs().is_one());
            proptest::prop_assert!(s.v.det().abs().is_one());
            for i in 0..s.s.rows() {
                for j in 0..s.s.cols() {
                    if i != j {
                        proptest::prop_assert!(s.s.get(i, j).is_zero());
                    }
                }
            }
            let n = s.s.rows().min(s.s.cols());
            let diag: Vec<BigInt> = (0..n).map(|i| s.s.get(i, i).clone()).collect();
            for w in diag.windows(2) {
                proptest::prop_assert!(!w[0].is_negative());
                let divides = if w[0].is_zero() { w[1].is_zero() } else { (&w[1] % &w[0]).is_zero() };
                proptest::prop_assert!(divides);
            }
        }
    }
}
