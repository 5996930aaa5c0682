//! Small dense linear algebra, generic over jet scalars.

use crate::jet::Real;

pub type Mat<S> = Vec<Vec<S>>;

pub fn zeros<S: Real>(r: usize, c: usize) -> Mat<S> {
    vec![vec![S::cst(0.0); c]; r]
}

pub fn identity<S: Real>(n: usize) -> Mat<S> {
    let mut m = zeros(n, n);
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = S::cst(1.0);
    }
    m
}

pub fn transpose<S: Real>(a: &Mat<S>) -> Mat<S> {
    if a.is_empty() {
        return Vec::new();
    }
    (0..a[0].len()).map(|j| a.iter().map(|r| r[j]).collect()).collect()
}

pub fn matmul<S: Real>(a: &Mat<S>, b: &Mat<S>) -> Mat<S> {
    let k = b.len();
    let c = if k == 0 { 0 } else { b[0].len() };
    a.iter()
        .map(|row| {
            (0..c)
                .map(|j| {
                    let mut s = S::cst(0.0);
                    for l in 0..k {
                        s = s + row[l] * b[l][j];
                    }
                    s
                })
                .collect()
        })
        .collect()
}

pub fn matvec<S: Real>(a: &Mat<S>, v: &[S]) -> Vec<S> {
    a.iter().map(|row| dot(row, v)).collect()
}

pub fn dot<S: Real>(a: &[S], b: &[S]) -> S {
    let mut s = S::cst(0.0);
    for (x, y) in a.iter().zip(b) {
        s = s + *x * *y;
    }
    s
}

/// `aᵀ G b`.
pub fn bilinear<S: Real>(g: &Mat<S>, a: &[S], b: &[S]) -> S {
    dot(a, &matvec(g, b))
}

pub fn add<S: Real>(a: &[S], b: &[S]) -> Vec<S> {
    a.iter().zip(b).map(|(x, y)| *x + *y).collect()
}

pub fn sub<S: Real>(a: &[S], b: &[S]) -> Vec<S> {
    a.iter().zip(b).map(|(x, y)| *x - *y).collect()
}

pub fn scale<S: Real>(c: S, a: &[S]) -> Vec<S> {
    a.iter().map(|x| c * *x).collect()
}

/// Inverse by Gauss–Jordan elimination with partial pivoting on the real
/// value. Returns `None` for a numerically singular matrix.
pub fn inverse<S: Real>(a: &Mat<S>) -> Option<Mat<S>> {
    let n = a.len();
    let mut m = a.clone();
    let mut inv = identity::<S>(n);
    let scale_ref = a.iter().flatten().map(|x| x.val().abs()).fold(0.0, f64::max).max(1e-300);
    for col in 0..n {
        let piv = (col..n)
            .max_by(|&i, &j| m[i][col].val().abs().total_cmp(&m[j][col].val().abs()))?;
        if m[piv][col].val().abs() <= 1e-14 * scale_ref {
            return None;
        }
        m.swap(col, piv);
        inv.swap(col, piv);
        let d = m[col][col];
        for j in 0..n {
            m[col][j] = m[col][j] / d;
            inv[col][j] = inv[col][j] / d;
        }
        for i in 0..n {
            if i == col {
                continue;
            }
            let f = m[i][col];
            for j in 0..n {
                m[i][j] = m[i][j] - f * m[col][j];
                inv[i][j] = inv[i][j] - f * inv[col][j];
            }
        }
    }
    Some(inv)
}

/// Cholesky factor test: true when `a` is symmetric positive definite.
pub fn is_positive_definite(a: &Mat<f64>) -> bool {
    let n = a.len();
    let mut l = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in 0..=i {
            let mut s = a[i][j];
            for k in 0..j {
                s -= l[i][k] * l[j][k];
            }
            if i == j {
                if s <= 0.0 || !s.is_finite() {
                    return false;
                }
                l[i][i] = s.sqrt();
            } else {
                l[i][j] = s / l[j][j];
            }
        }
    }
    true
}

/// Euclidean null-space basis of an `r × c` matrix of full row rank.
///
/// Modified Gram–Schmidt runs over the rows and then the coordinate vectors
/// in fixed order; the survivors after the row space form the basis. No
/// pivoting, so the result is reproducible.
pub fn null_space(a: &Mat<f64>, c: usize) -> Option<Vec<Vec<f64>>> {
    let mut basis: Vec<Vec<f64>> = Vec::new();
    let mut rank_rows = 0;
    let candidates = a.iter().cloned().chain((0..c).map(|i| {
        let mut e = vec![0.0; c];
        e[i] = 1.0;
        e
    }));
    for (k, mut v) in candidates.enumerate() {
        let n0 = dot(&v, &v).sqrt();
        for _ in 0..2 {
            for b in &basis {
                let p = dot(&v, b);
                for (x, y) in v.iter_mut().zip(b) {
                    *x -= p * y;
                }
            }
        }
        let n = dot(&v, &v).sqrt();
        if n > 1e-10 * n0.max(1.0) {
            basis.push(v.iter().map(|x| x / n).collect());
            if k < a.len() {
                rank_rows += 1;
            }
        } else if k < a.len() {
            return None;
        }
        if basis.len() == c {
            break;
        }
    }
    (rank_rows == a.len() && basis.len() == c).then(|| basis.split_off(rank_rows))
}
