//! Reference computations for the integration tests, written without the
//! library's series and algebra code.
#![allow(dead_code)]

use nalgebra::DMatrix;
use num_bigint::BigInt;
use num_traits::ToPrimitive;

use qdilog::qseries::QSeries;
use qdilog::quiver::Dir;
use qdilog::strata::Representation;

/// Partitions of `d` into parts of size at most `k`, by plain recursion.
pub fn partitions_bounded(d: usize, k: usize) -> u64 {
    if d == 0 {
        return 1;
    }
    if k == 0 {
        return 0;
    }
    (0..=d / k).map(|c| partitions_bounded(d - c * k, k - 1)).sum()
}

/// Coefficients of `q^0..=q^deg` in `P_j`.
pub fn poincare_dense(j: usize, deg: usize) -> Vec<i64> {
    (0..=deg).map(|d| partitions_bounded(d, j) as i64).collect()
}

pub fn mul_dense(a: &[i64], b: &[i64]) -> Vec<i64> {
    let deg = a.len().min(b.len());
    (0..deg).map(|d| (0..=d).map(|i| a[i] * b[d - i]).sum()).collect()
}

/// `q^shift * prod_m P_m`, coefficients of `q^0..=q^deg`.
pub fn shifted_product(shift: usize, ms: &[usize], deg: usize) -> Vec<i64> {
    let mut acc = vec![0i64; deg + 1];
    acc[0] = 1;
    for &m in ms {
        acc = mul_dense(&acc, &poincare_dense(m, deg));
    }
    let mut out = vec![0i64; deg + 1];
    if shift <= deg {
        out[shift..].copy_from_slice(&acc[..=deg - shift]);
    }
    out
}

/// Coefficients of `q^0..=q^deg` of a series with no odd `t`-powers there.
pub fn q_coeffs(s: &QSeries, deg: usize) -> Vec<i64> {
    assert!(s.hi() >= 2 * deg as i64, "series known only up to t^{}", s.hi());
    for k in 0..=2 * deg as i64 {
        if k % 2 == 1 {
            assert_eq!(s.coeff(k).unwrap(), BigInt::from(0), "odd power t^{k}");
        }
    }
    (0..=deg).map(|d| s.coeff(2 * d as i64).unwrap().to_i64().unwrap()).collect()
}

/// Arrow directions as `(tail, head)` pairs, 0-based.
pub fn line_arrows(dirs: &[Dir]) -> Vec<(usize, usize)> {
    dirs.iter()
        .enumerate()
        .map(|(e, d)| match d {
            Dir::Right => (e, e + 1),
            Dir::Left => (e + 1, e),
        })
        .collect()
}

/// Dimension of the orbit of `rep` under `prod GL(d_v)`: the rank of the
/// tangent map `(g_v) -> (g_h M_a - M_a g_t)_a`.
pub fn orbit_dimension(arrows: &[(usize, usize)], rep: &Representation) -> usize {
    let d = &rep.dims;
    let mut offsets = vec![0usize];
    for v in 0..d.len() {
        offsets.push(offsets[v] + d[v] * d[v]);
    }
    let cols = offsets[d.len()];
    let rows: usize = arrows.iter().map(|&(t, h)| d[h] * d[t]).sum();
    if rows == 0 || cols == 0 {
        return 0;
    }
    let mut m = DMatrix::<f64>::zeros(rows, cols);
    let mut r0 = 0;
    for (a, &(t, h)) in arrows.iter().enumerate() {
        let ma = &rep.maps[a];
        for r in 0..d[h] {
            for c in 0..d[t] {
                let row = r0 + r * d[t] + c;
                // (g_h M_a)[r][c] = sum_k g_h[r][k] M_a[k][c]
                for k in 0..d[h] {
                    m[(row, offsets[h] + r * d[h] + k)] += ma[k][c] as f64;
                }
                // (M_a g_t)[r][c] = sum_k M_a[r][k] g_t[k][c]
                for k in 0..d[t] {
                    m[(row, offsets[t] + k * d[t] + c)] -= ma[r][k] as f64;
                }
            }
        }
        r0 += d[h] * d[t];
    }
    m.rank(1e-9)
}

/// Counts of positive and negative eigenvalues, and those within `tol` of
/// zero, of the `p x p` matrix with `1/2` on both off-diagonals.
pub fn tridiagonal_eigen_signs(p: usize, tol: f64) -> (usize, usize, usize) {
    let m = DMatrix::<f64>::from_fn(p, p, |i, j| if i.abs_diff(j) == 1 { 0.5 } else { 0.0 });
    let eig = m.symmetric_eigen();
    let mut out = (0, 0, 0);
    for &e in eig.eigenvalues.iter() {
        if e.abs() <= tol {
            out.2 += 1;
        } else if e > 0.0 {
            out.0 += 1;
        } else {
            out.1 += 1;
        }
    }
    out
}

/// Every vector with entries in `0..=max` of length `len`, first entry
/// varying fastest.
pub fn all_vectors(len: usize, max: u32) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    let mut g = vec![0u32; len];
    loop {
        out.push(g.clone());
        let mut i = 0;
        while i < len && g[i] == max {
            g[i] = 0;
            i += 1;
        }
        if i == len {
            return out;
        }
        g[i] += 1;
    }
}
