//! Dense exact linear algebra over any [`FieldScalar`].

use super::{FieldScalar, Scalar};

pub type Mat<T> = Vec<Vec<T>>;

pub fn mat_mul<T: Scalar>(a: &Mat<T>, b: &Mat<T>) -> Mat<T> {
    let n = a.len();
    let m = b[0].len();
    let k = b.len();
    let z = b[0][0].zero_like();
    (0..n)
        .map(|i| {
            (0..m)
                .map(|j| {
                    let mut acc = z.clone();
                    for t in 0..k {
                        if !a[i][t].is_zero_elem() && !b[t][j].is_zero_elem() {
                            acc = acc.plus(&a[i][t].times(&b[t][j]));
                        }
                    }
                    acc
                })
                .collect()
        })
        .collect()
}

pub fn mat_vec<T: Scalar>(a: &Mat<T>, v: &[T]) -> Vec<T> {
    a.iter()
        .map(|row| {
            let mut acc = v[0].zero_like();
            for (x, y) in row.iter().zip(v) {
                if !x.is_zero_elem() && !y.is_zero_elem() {
                    acc = acc.plus(&x.times(y));
                }
            }
            acc
        })
        .collect()
}

pub fn transpose<T: Clone>(a: &Mat<T>) -> Mat<T> {
    if a.is_empty() {
        return vec![];
    }
    (0..a[0].len()).map(|j| a.iter().map(|r| r[j].clone()).collect()).collect()
}

pub fn identity<T: Scalar>(n: usize, proto: &T) -> Mat<T> {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { proto.one_like() } else { proto.zero_like() }).collect())
        .collect()
}

/// Reduced row echelon form; returns pivot columns.
pub fn rref<T: FieldScalar>(a: &mut Mat<T>) -> Vec<usize> {
    let rows = a.len();
    if rows == 0 {
        return vec![];
    }
    let cols = a[0].len();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(pr) = (r..rows).find(|&i| !a[i][c].is_zero_elem()) else {
            continue;
        };
        a.swap(r, pr);
        let inv = a[r][c].inverse().expect("nonzero pivot");
        for j in c..cols {
            a[r][j] = a[r][j].times(&inv);
        }
        for i in 0..rows {
            if i != r && !a[i][c].is_zero_elem() {
                let f = a[i][c].clone();
                for j in c..cols {
                    let d = f.times(&a[r][j]);
                    a[i][j] = a[i][j].minus(&d);
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank<T: FieldScalar>(a: &Mat<T>) -> usize {
    let mut b = a.clone();
    rref(&mut b).len()
}

/// Basis of the right kernel `{x : a x = 0}`.
pub fn kernel<T: FieldScalar>(a: &Mat<T>, proto: &T) -> Vec<Vec<T>> {
    let cols = if a.is_empty() { 0 } else { a[0].len() };
    let mut b = a.clone();
    let piv = rref(&mut b);
    let free: Vec<usize> = (0..cols).filter(|c| !piv.contains(c)).collect();
    free.iter()
        .map(|&fc| {
            let mut v = vec![proto.zero_like(); cols];
            v[fc] = proto.one_like();
            for (i, &pc) in piv.iter().enumerate() {
                v[pc] = b[i][fc].negate();
            }
            v
        })
        .collect()
}

/// Basis of the left kernel `{x : x a = 0}` (row vectors).
pub fn left_kernel<T: FieldScalar>(a: &Mat<T>, proto: &T) -> Vec<Vec<T>> {
    kernel(&transpose(a), proto)
}

/// Intersection of the column spans of two bases given as lists of vectors.
pub fn span_intersection<T: FieldScalar>(u: &[Vec<T>], w: &[Vec<T>], proto: &T) -> Vec<Vec<T>> {
    if u.is_empty() || w.is_empty() {
        return vec![];
    }
    let dim = u[0].len();
    // Solve Σ a_i u_i − Σ b_j w_j = 0.
    let m: Mat<T> = (0..dim)
        .map(|r| {
            u.iter()
                .map(|x| x[r].clone())
                .chain(w.iter().map(|x| x[r].negate()))
                .collect()
        })
        .collect();
    let ker = kernel(&m, proto);
    ker.iter()
        .map(|c| {
            let mut v = vec![proto.zero_like(); dim];
            for (i, x) in u.iter().enumerate() {
                for r in 0..dim {
                    v[r] = v[r].plus(&c[i].times(&x[r]));
                }
            }
            v
        })
        .collect()
}

pub fn det<T: FieldScalar>(a: &Mat<T>) -> T {
    let n = a.len();
    let mut b = a.clone();
    let mut d = a[0][0].one_like();
    for c in 0..n {
        let Some(pr) = (c..n).find(|&i| !b[i][c].is_zero_elem()) else {
            return d.zero_like();
        };
        if pr != c {
            b.swap(pr, c);
            d = d.negate();
        }
        d = d.times(&b[c][c]);
        let inv = b[c][c].inverse().unwrap();
        for i in c + 1..n {
            if b[i][c].is_zero_elem() {
                continue;
            }
            let f = b[i][c].times(&inv);
            for j in c..n {
                let t = f.times(&b[c][j]);
                b[i][j] = b[i][j].minus(&t);
            }
        }
    }
    d
}

pub fn inverse<T: FieldScalar>(a: &Mat<T>) -> Option<Mat<T>> {
    let n = a.len();
    let proto = a[0][0].clone();
    let mut aug: Mat<T> = a
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let mut row = r.clone();
            row.extend((0..n).map(|j| if i == j { proto.one_like() } else { proto.zero_like() }));
            row
        })
        .collect();
    let piv = rref(&mut aug);
    if piv.len() < n || piv[n - 1] != n - 1 {
        return None;
    }
    Some(aug.into_iter().map(|r| r[n..].to_vec()).collect())
}

/// Solve `a x = b` for one solution, if any.
pub fn solve<T: FieldScalar>(a: &Mat<T>, b: &[T]) -> Option<Vec<T>> {
    let cols = a[0].len();
    let mut aug: Mat<T> = a
        .iter()
        .zip(b)
        .map(|(r, x)| {
            let mut row = r.clone();
            row.push(x.clone());
            row
        })
        .collect();
    let piv = rref(&mut aug);
    if piv.contains(&cols) {
        return None;
    }
    let mut x = vec![b[0].zero_like(); cols];
    for (i, &pc) in piv.iter().enumerate() {
        x[pc] = aug[i][cols].clone();
    }
    Some(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{rat, Rational};

    fn m(rows: &[&[i64]]) -> Mat<Rational> {
        rows.iter().map(|r| r.iter().map(|&x| rat(x)).collect()).collect()
    }

    #[test]
    fn kernel_and_det() {
        let a = m(&[&[1, 2, 3], &[2, 4, 6], &[1, 0, 1]]);
        let k = kernel(&a, &rat(0));
        assert_eq!(k.len(), 1);
        assert!(mat_vec(&a, &k[0]).iter().all(|x| *x == rat(0)));
        assert_eq!(det(&a), rat(0));
        let b = m(&[&[2, 1], &[1, 1]]);
        assert_eq!(det(&b), rat(1));
        let bi = inverse(&b).unwrap();
        assert_eq!(mat_mul(&b, &bi), identity(2, &rat(0)));
    }
}
