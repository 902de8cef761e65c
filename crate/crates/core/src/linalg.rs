//! Dense complex linear algebra at desk scale: matrix exponential,
//! Hermitian eigenvalues, LU solves and least squares.

use ndarray::{Array1, Array2};
use num_complex::Complex64;

pub type CMat = Array2<Complex64>;
pub type CVec = Array1<Complex64>;

pub fn adjoint(a: &CMat) -> CMat {
    let (r, c) = a.dim();
    Array2::from_shape_fn((c, r), |(i, j)| a[(j, i)].conj())
}

pub fn identity(n: usize) -> CMat {
    Array2::from_shape_fn((n, n), |(i, j)| {
        if i == j {
            Complex64::new(1.0, 0.0)
        } else {
            Complex64::new(0.0, 0.0)
        }
    })
}

pub fn commutator(a: &CMat, b: &CMat) -> CMat {
    a.dot(b) - b.dot(a)
}

pub fn anticommutator(a: &CMat, b: &CMat) -> CMat {
    a.dot(b) + b.dot(a)
}

pub fn max_abs(a: &CMat) -> f64 {
    a.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

pub fn frobenius(a: &CMat) -> f64 {
    a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

fn one_norm(a: &CMat) -> f64 {
    let (r, c) = a.dim();
    (0..c)
        .map(|j| (0..r).map(|i| a[(i, j)].norm()).sum::<f64>())
        .fold(0.0, f64::max)
}

/// Matrix exponential by scaling and squaring with a Padé(13) kernel.
pub fn expm(a: &CMat) -> CMat {
    let n = a.nrows();
    assert_eq!(n, a.ncols());
    let norm = one_norm(a);
    let theta13 = 5.371920351148152;
    let s = if norm > theta13 {
        (norm / theta13).log2().ceil() as i32
    } else {
        0
    };
    let scale = Complex64::new(0.5f64.powi(s), 0.0);
    let a_s = a.mapv(|z| z * scale);

    // Padé 13/13 coefficients
    let b: [f64; 14] = [
        64764752532480000.0,
        32382376266240000.0,
        7771770303897600.0,
        1187353796428800.0,
        129060195264000.0,
        10559470521600.0,
        670442572800.0,
        33522128640.0,
        1323241920.0,
        40840800.0,
        960960.0,
        16380.0,
        182.0,
        1.0,
    ];
    let a2 = a_s.dot(&a_s);
    let a4 = a2.dot(&a2);
    let a6 = a4.dot(&a2);
    let id = identity(n);
    let u_inner = a6.mapv(|z| z * b[13])
        + a4.mapv(|z| z * b[11])
        + a2.mapv(|z| z * b[9]);
    let u = a_s.dot(
        &(a6.dot(&u_inner)
            + a6.mapv(|z| z * b[7])
            + a4.mapv(|z| z * b[5])
            + a2.mapv(|z| z * b[3])
            + id.mapv(|z| z * b[1])),
    );
    let v_inner = a6.mapv(|z| z * b[12]) + a4.mapv(|z| z * b[10]) + a2.mapv(|z| z * b[8]);
    let v = a6.dot(&v_inner)
        + a6.mapv(|z| z * b[6])
        + a4.mapv(|z| z * b[4])
        + a2.mapv(|z| z * b[2])
        + id.mapv(|z| z * b[0]);

    let p = &v + &u;
    let q = &v - &u;
    let mut r = solve_multi(&q, &p).expect("Padé denominator must be invertible");
    for _ in 0..s {
        r = r.dot(&r);
    }
    r
}

/// LU solve with partial pivoting for multiple right-hand sides: `A X = B`.
pub fn solve_multi(a: &CMat, b: &CMat) -> Option<CMat> {
    let n = a.nrows();
    assert_eq!(n, a.ncols());
    assert_eq!(n, b.nrows());
    let m = b.ncols();
    let mut lu = a.clone();
    let mut x = b.clone();
    for k in 0..n {
        let mut p = k;
        let mut pmax = lu[(k, k)].norm();
        for i in k + 1..n {
            let v = lu[(i, k)].norm();
            if v > pmax {
                pmax = v;
                p = i;
            }
        }
        if pmax == 0.0 {
            return None;
        }
        if p != k {
            for j in 0..n {
                let tmp = lu[(k, j)];
                lu[(k, j)] = lu[(p, j)];
                lu[(p, j)] = tmp;
            }
            for j in 0..m {
                let tmp = x[(k, j)];
                x[(k, j)] = x[(p, j)];
                x[(p, j)] = tmp;
            }
        }
        let piv = lu[(k, k)];
        for i in k + 1..n {
            let f = lu[(i, k)] / piv;
            if f.norm() == 0.0 {
                continue;
            }
            lu[(i, k)] = f;
            for j in k + 1..n {
                let s = lu[(k, j)];
                lu[(i, j)] -= f * s;
            }
            for j in 0..m {
                let s = x[(k, j)];
                x[(i, j)] -= f * s;
            }
        }
    }
    for j in 0..m {
        for i in (0..n).rev() {
            let mut acc = x[(i, j)];
            for k in i + 1..n {
                acc -= lu[(i, k)] * x[(k, j)];
            }
            x[(i, j)] = acc / lu[(i, i)];
        }
    }
    Some(x)
}

pub fn solve_vec(a: &CMat, b: &CVec) -> Option<CVec> {
    let n = b.len();
    let bm = Array2::from_shape_fn((n, 1), |(i, _)| b[i]);
    solve_multi(a, &bm).map(|x| Array1::from_shape_fn(n, |i| x[(i, 0)]))
}

/// Least-squares solution of `A x = b` via normal equations.
pub fn least_squares(a: &CMat, b: &CVec) -> Option<CVec> {
    let at = adjoint(a);
    let ata = at.dot(a);
    let atb = at.dot(b);
    solve_vec(&ata, &atb)
}

/// Eigenvalues of a Hermitian matrix by complex Jacobi rotations, ascending.
pub fn hermitian_eigenvalues(a: &CMat) -> Vec<f64> {
    let n = a.nrows();
    assert_eq!(n, a.ncols());
    if n == 0 {
        return Vec::new();
    }
    let mut m = a.clone();
    for _sweep in 0..100 {
        let mut off = 0.0;
        for i in 0..n {
            for j in i + 1..n {
                off += m[(i, j)].norm_sqr();
            }
        }
        let scale = frobenius(&m).max(1e-300);
        if off.sqrt() <= 1e-14 * scale {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = m[(p, q)];
                if apq.norm() <= 1e-300 {
                    continue;
                }
                // phase to make the pivot real, then a real Jacobi rotation
                let phase = apq / apq.norm();
                let app = m[(p, p)].re;
                let aqq = m[(q, q)].re;
                let g = apq.norm();
                let theta = 0.5 * (2.0 * g).atan2(aqq - app);
                let (c, s) = (theta.cos(), theta.sin());
                // columns
                for i in 0..n {
                    let mip = m[(i, p)];
                    let miq = m[(i, q)];
                    m[(i, p)] = mip * c - miq * phase.conj() * s;
                    m[(i, q)] = mip * phase * s + miq * c;
                }
                // rows
                for j in 0..n {
                    let mpj = m[(p, j)];
                    let mqj = m[(q, j)];
                    m[(p, j)] = mpj * c - mqj * phase * s;
                    m[(q, j)] = mpj * phase.conj() * s + mqj * c;
                }
            }
        }
    }
    let mut eigs: Vec<f64> = (0..n).map(|i| m[(i, i)].re).collect();
    eigs.sort_by(|a, b| a.partial_cmp(b).unwrap());
    eigs
}

pub fn min_eigenvalue(a: &CMat) -> f64 {
    hermitian_eigenvalues(a).first().copied().unwrap_or(0.0)
}

/// Kronecker product.
pub fn kron(a: &CMat, b: &CMat) -> CMat {
    let (ar, ac) = a.dim();
    let (br, bc) = b.dim();
    Array2::from_shape_fn((ar * br, ac * bc), |(i, j)| {
        a[(i / br, j / bc)] * b[(i % br, j % bc)]
    })
}

/// Column-stacking vectorization.
pub fn vec_mat(x: &CMat) -> CVec {
    let (r, c) = x.dim();
    Array1::from_shape_fn(r * c, |k| x[(k % r, k / r)])
}

pub fn unvec_mat(v: &CVec, rows: usize) -> CMat {
    let cols = v.len() / rows;
    Array2::from_shape_fn((rows, cols), |(i, j)| v[j * rows + i])
}
