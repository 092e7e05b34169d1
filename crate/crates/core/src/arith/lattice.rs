//! Exact integer lattices in `Q^d`: Hermite normal form, sums, intersections,
//! congruence sublattices, LLL on a Gram matrix and Fincke–Pohst enumeration.

use super::Rational;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Row-style Hermite normal form of an integer matrix; zero rows dropped.
/// Pivots are positive and entries above a pivot lie in `[0, pivot)`.
pub fn hnf(rows: &[Vec<BigInt>]) -> Vec<Vec<BigInt>> {
    let mut a: Vec<Vec<BigInt>> = rows.iter().filter(|r| r.iter().any(|x| !x.is_zero())).cloned().collect();
    if a.is_empty() {
        return a;
    }
    let d = a[0].len();
    let mut r = 0;
    for c in 0..d {
        if r == a.len() {
            break;
        }
        loop {
            // Move the smallest nonzero |entry| in column c (rows r..) to row r.
            let mut best: Option<usize> = None;
            for i in r..a.len() {
                if !a[i][c].is_zero() && best.map_or(true, |b| a[i][c].abs() < a[b][c].abs()) {
                    best = Some(i);
                }
            }
            let Some(b) = best else { break };
            a.swap(r, b);
            let mut done = true;
            for i in r + 1..a.len() {
                if a[i][c].is_zero() {
                    continue;
                }
                let q = a[i][c].div_floor(&a[r][c]);
                if !q.is_zero() {
                    let pr = a[r].clone();
                    for (x, y) in a[i].iter_mut().zip(&pr) {
                        *x -= &q * y;
                    }
                }
                if !a[i][c].is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if r < a.len() && !a[r][c].is_zero() {
            if a[r][c].is_negative() {
                for x in a[r].iter_mut() {
                    *x = -x.clone();
                }
            }
            let pr = a[r].clone();
            for i in 0..r {
                let q = a[i][c].div_floor(&pr[c]);
                if !q.is_zero() {
                    for (x, y) in a[i].iter_mut().zip(&pr) {
                        *x -= &q * y;
                    }
                }
            }
            r += 1;
        }
    }
    a.truncate(r);
    a.retain(|row| row.iter().any(|x| !x.is_zero()));
    a
}

/// A lattice `(1/den) · span_Z(rows)` with `rows` in Hermite normal form and
/// `den` minimal.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ZLattice {
    pub den: BigInt,
    pub rows: Vec<Vec<BigInt>>,
    pub dim: usize,
}

impl ZLattice {
    pub fn from_int_rows(den: BigInt, rows: Vec<Vec<BigInt>>, dim: usize) -> Self {
        let h = hnf(&rows);
        let mut g = den.clone();
        for r in &h {
            for x in r {
                g = g.gcd(x);
            }
        }
        let (den, rows) = if g.is_one() || g.is_zero() {
            (den, h)
        } else {
            (&den / &g, h.into_iter().map(|r| r.into_iter().map(|x| x / &g).collect()).collect())
        };
        ZLattice { den, rows, dim }
    }

    pub fn from_rat_rows(rows: &[Vec<Rational>], dim: usize) -> Self {
        let mut den = BigInt::one();
        for r in rows {
            for x in r {
                den = den.lcm(x.denom());
            }
        }
        let ints = rows
            .iter()
            .map(|r| r.iter().map(|x| (x * Rational::from_integer(den.clone())).to_integer()).collect())
            .collect();
        Self::from_int_rows(den, ints, dim)
    }

    pub fn standard(dim: usize) -> Self {
        let rows = (0..dim)
            .map(|i| (0..dim).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect())
            .collect();
        ZLattice { den: BigInt::one(), rows, dim }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn basis(&self) -> Vec<Vec<Rational>> {
        self.rows
            .iter()
            .map(|r| r.iter().map(|x| Rational::new(x.clone(), self.den.clone())).collect())
            .collect()
    }

    /// Covolume of a full-rank lattice (absolute determinant of the basis).
    pub fn covolume(&self) -> Rational {
        assert_eq!(self.rank(), self.dim, "covolume needs full rank");
        let mut p = BigInt::one();
        for (i, r) in self.rows.iter().enumerate() {
            p *= &r[i];
        }
        Rational::new(p, self.den.pow(self.dim as u32))
    }

    fn pivots(&self) -> Vec<usize> {
        self.rows.iter().map(|r| r.iter().position(|x| !x.is_zero()).unwrap()).collect()
    }

    /// Integer coordinates of `v` in the stored basis, if `v` lies in the lattice.
    pub fn coords(&self, v: &[Rational]) -> Option<Vec<BigInt>> {
        let mut w: Vec<Rational> = v.iter().map(|x| x * Rational::from_integer(self.den.clone())).collect();
        let mut out = Vec::with_capacity(self.rank());
        for (r, pc) in self.rows.iter().zip(self.pivots()) {
            if w[..pc].iter().any(|x| !x.is_zero()) {
                return None;
            }
            let c = &w[pc] / Rational::from_integer(r[pc].clone());
            if !c.is_integer() {
                return None;
            }
            let c = c.to_integer();
            for (x, y) in w.iter_mut().zip(r) {
                *x -= Rational::from_integer(&c * y);
            }
            out.push(c);
        }
        if w.iter().all(|x| x.is_zero()) {
            Some(out)
        } else {
            None
        }
    }

    pub fn contains(&self, v: &[Rational]) -> bool {
        self.coords(v).is_some()
    }

    pub fn contains_lattice(&self, o: &ZLattice) -> bool {
        o.basis().iter().all(|b| self.contains(b))
    }

    pub fn sum(&self, o: &ZLattice) -> ZLattice {
        let mut rows = self.basis();
        rows.extend(o.basis());
        ZLattice::from_rat_rows(&rows, self.dim)
    }

    pub fn scale(&self, r: &Rational) -> ZLattice {
        let rows: Vec<Vec<Rational>> = self.basis().into_iter().map(|b| b.into_iter().map(|x| x * r).collect()).collect();
        ZLattice::from_rat_rows(&rows, self.dim)
    }

    /// `self ∩ o`.
    pub fn intersect(&self, o: &ZLattice) -> ZLattice {
        let den = self.den.lcm(&o.den);
        let d = self.dim;
        let s1 = &den / &self.den;
        let s2 = &den / &o.den;
        let mut rows = Vec::new();
        for r in &self.rows {
            let v: Vec<BigInt> = r.iter().map(|x| x * &s1).collect();
            let mut row = v.clone();
            row.extend(v);
            rows.push(row);
        }
        for r in &o.rows {
            let mut row: Vec<BigInt> = r.iter().map(|x| x * &s2).collect();
            row.extend(std::iter::repeat(BigInt::zero()).take(d));
            rows.push(row);
        }
        let h = hnf(&rows);
        let out: Vec<Vec<BigInt>> =
            h.into_iter().filter(|r| r[..d].iter().all(|x| x.is_zero())).map(|r| r[d..].to_vec()).collect();
        ZLattice::from_int_rows(den, out, d)
    }

    /// Sublattice `{Σ c_i b_i : Σ c_i f_j(b_i) ≡ 0 mod m_j for all j}` where
    /// `values[j][i] = f_j(b_i)` and `moduli[j] = m_j`.
    pub fn congruence_sublattice(&self, values: &[Vec<BigInt>], moduli: &[BigInt]) -> ZLattice {
        let r = self.rank();
        let j = values.len();
        let mut rows = Vec::with_capacity(r + j);
        for i in 0..r {
            let mut row: Vec<BigInt> = (0..j).map(|t| values[t][i].mod_floor(&moduli[t])).collect();
            row.extend((0..r).map(|k| if k == i { BigInt::one() } else { BigInt::zero() }));
            rows.push(row);
        }
        for t in 0..j {
            let mut row = vec![BigInt::zero(); j + r];
            row[t] = moduli[t].clone();
            rows.push(row);
        }
        let h = hnf(&rows);
        let kernel: Vec<Vec<BigInt>> =
            h.into_iter().filter(|row| row[..j].iter().all(|x| x.is_zero())).map(|row| row[j..].to_vec()).collect();
        let new_rows: Vec<Vec<BigInt>> = kernel
            .iter()
            .map(|c| {
                let mut v = vec![BigInt::zero(); self.dim];
                for (ci, b) in c.iter().zip(&self.rows) {
                    for (x, y) in v.iter_mut().zip(b) {
                        *x += ci * y;
                    }
                }
                v
            })
            .collect();
        ZLattice::from_int_rows(self.den.clone(), new_rows, self.dim)
    }

    /// Index `[self : sub]` for full-rank lattices.
    pub fn index_of(&self, sub: &ZLattice) -> Rational {
        sub.covolume() / self.covolume()
    }
}

pub fn to_i128(x: &BigInt) -> i128 {
    x.to_i128().expect("value exceeds i128")
}

/// LLL reduction of the positive definite integer Gram matrix `g`; returns the
/// unimodular transform `u` (rows are new basis vectors in old coordinates)
/// and the reduced Gram matrix `u g uᵀ`.
pub fn lll_gram(g: &[Vec<i128>]) -> (Vec<Vec<i128>>, Vec<Vec<i128>>) {
    let n = g.len();
    let mut u: Vec<Vec<i128>> = (0..n).map(|i| (0..n).map(|j| (i == j) as i128).collect()).collect();
    let mut gm: Vec<Vec<i128>> = g.to_vec();
    let gso = |gm: &Vec<Vec<i128>>| -> (Vec<Vec<f64>>, Vec<f64>) {
        let mut mu = vec![vec![0.0; n]; n];
        let mut bstar = vec![0.0; n];
        for i in 0..n {
            for j in 0..i {
                let mut s = gm[i][j] as f64;
                for k in 0..j {
                    s -= mu[j][k] * mu[i][k] * bstar[k];
                }
                mu[i][j] = s / bstar[j];
            }
            let mut s = gm[i][i] as f64;
            for k in 0..i {
                s -= mu[i][k] * mu[i][k] * bstar[k];
            }
            bstar[i] = s;
        }
        (mu, bstar)
    };
    // Row operation b_i -= q b_j applied to u and to the Gram matrix.
    let sub = |u: &mut Vec<Vec<i128>>, gm: &mut Vec<Vec<i128>>, i: usize, j: usize, q: i128| {
        for k in 0..n {
            u[i][k] -= q * u[j][k];
        }
        for k in 0..n {
            gm[i][k] -= q * gm[j][k];
        }
        for k in 0..n {
            gm[k][i] -= q * gm[k][j];
        }
    };
    let mut k = 1;
    let mut guard = 0;
    while k < n {
        guard += 1;
        assert!(guard < 100_000, "LLL did not terminate");
        for j in (0..k).rev() {
            let (mu, _) = gso(&gm);
            let q = mu[k][j].round() as i128;
            if q != 0 {
                sub(&mut u, &mut gm, k, j, q);
            }
        }
        let (mu, bs) = gso(&gm);
        if bs[k] >= (0.99 - mu[k][k - 1] * mu[k][k - 1]) * bs[k - 1] {
            k += 1;
        } else {
            u.swap(k, k - 1);
            gm.swap(k, k - 1);
            for row in gm.iter_mut() {
                row.swap(k, k - 1);
            }
            k = if k > 1 { k - 1 } else { 1 };
        }
    }
    (u, gm)
}

/// Calls `visit(x, Q(x))` for every nonzero integer vector `x` with
/// `Q(x) = xᵀ g x <= bound`, where `g` is a positive definite integer Gram
/// matrix. Vectors are reported in the original coordinates.
pub fn enumerate_short(g: &[Vec<i128>], bound: i128, mut visit: impl FnMut(&[i64], i128)) {
    let n = g.len();
    let (u, gr) = lll_gram(g);
    // Cholesky-style decomposition Q(y) = Σ q_ii (y_i + Σ_{j>i} q_ij y_j)^2.
    let mut q = vec![vec![0.0f64; n]; n];
    for i in 0..n {
        for j in 0..n {
            q[i][j] = gr[i][j] as f64;
        }
    }
    for i in 0..n {
        for j in i + 1..n {
            q[j][i] = q[i][j];
            q[i][j] /= q[i][i];
        }
        for k in i + 1..n {
            for l in k..n {
                q[k][l] -= q[k][i] * q[i][l];
            }
        }
    }
    let eps = 1e-6 * (1.0 + bound as f64);
    let mut y = vec![0i64; n];
    let mut x = vec![0i64; n];
    fn rec(
        i: usize,
        rem: f64,
        n: usize,
        q: &Vec<Vec<f64>>,
        y: &mut Vec<i64>,
        eps: f64,
        leaf: &mut dyn FnMut(&[i64]),
    ) {
        let mut c = 0.0;
        for j in i + 1..n {
            c += q[i][j] * y[j] as f64;
        }
        let r = ((rem + eps) / q[i][i]).max(0.0).sqrt();
        let lo = (-c - r).ceil() as i64;
        let hi = (-c + r).floor() as i64;
        for v in lo..=hi {
            y[i] = v;
            let t = v as f64 + c;
            let nrem = rem - q[i][i] * t * t;
            if nrem < -eps {
                continue;
            }
            if i == 0 {
                leaf(y);
            } else {
                rec(i - 1, nrem, n, q, y, eps, leaf);
            }
        }
        y[i] = 0;
    }
    let mut leaf = |y: &[i64]| {
        if y.iter().all(|&t| t == 0) {
            return;
        }
        let mut val: i128 = 0;
        for i in 0..n {
            for j in 0..n {
                val += gr[i][j] * y[i] as i128 * y[j] as i128;
            }
        }
        if val > bound {
            return;
        }
        for k in 0..n {
            let mut s: i128 = 0;
            for i in 0..n {
                s += y[i] as i128 * u[i][k];
            }
            x[k] = s as i64;
        }
        visit(&x, val);
    };
    rec(n - 1, bound as f64, n, &q, &mut y, eps, &mut leaf);
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;

    fn bi(rows: &[&[i64]]) -> Vec<Vec<BigInt>> {
        rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect()
    }

    #[test]
    fn hnf_canonical() {
        let a = hnf(&bi(&[&[2, 4], &[3, 5]]));
        assert_eq!(a, bi(&[&[1, 1], &[0, 2]]));
        let b = hnf(&bi(&[&[3, 5], &[2, 4], &[1, 1]]));
        assert_eq!(a, b);
    }

    #[test]
    fn intersect_and_congruence() {
        let l1 = ZLattice::from_rat_rows(&[vec![rat(2), rat(0)], vec![rat(0), rat(1)]], 2);
        let l2 = ZLattice::from_rat_rows(&[vec![rat(1), rat(0)], vec![rat(0), rat(3)]], 2);
        let i = l1.intersect(&l2);
        assert_eq!(i.covolume(), rat(6));
        let z = ZLattice::standard(2);
        let s = z.congruence_sublattice(&[vec![BigInt::from(1), BigInt::from(1)]], &[BigInt::from(5)]);
        assert_eq!(s.covolume(), rat(5));
        assert!(s.contains(&[rat(1), rat(4)]));
    }

    #[test]
    fn short_vectors_of_z2() {
        let g = vec![vec![1, 0], vec![0, 1]];
        let mut c = 0;
        enumerate_short(&g, 2, |_, _| c += 1);
        assert_eq!(c, 8);
        let g2 = vec![vec![2, 1], vec![1, 2]];
        let mut c2 = 0;
        enumerate_short(&g2, 2, |_, v| {
            assert_eq!(v, 2);
            c2 += 1
        });
        assert_eq!(c2, 6);
    }
}
