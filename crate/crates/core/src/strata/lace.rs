use serde::Serialize;

use crate::linalg;
use crate::quiver::{Dir, LineQuiver, Quiver};
use crate::roots::Interval;

use super::kostant::KostantPartition;

/// A dense 0/1 (or general integer) matrix stored by rows.
pub type Matrix = Vec<Vec<i64>>;

/// A representation of a quiver: a space per vertex and a matrix per arrow
/// (`dim head × dim tail`), arrows in the quiver's order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Representation {
    pub dims: Vec<usize>,
    pub maps: Vec<Matrix>,
}

/// The normal form of a type-A orbit: per-edge matrices built from the
/// canonical lace diagram.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NormalForm {
    pub orientation: LineQuiver,
    pub dims: Vec<usize>,
    /// One matrix per edge `(p, p+1)`, sized `dim head × dim tail`.
    pub matrices: Vec<Matrix>,
}

impl NormalForm {
    pub fn representation(&self) -> Representation {
        Representation { dims: self.dims.clone(), maps: self.matrices.clone() }
    }
}

/// Non-simple roots in lexicographic order, then the simple roots.
pub fn lace_order(n: usize) -> Vec<Interval> {
    let all = Interval::all(n);
    let (simple, long): (Vec<_>, Vec<_>) = all.into_iter().partition(Interval::is_simple);
    long.into_iter().chain(simple).collect()
}

/// Draws the canonical lace diagram, strands taking the highest unused dot
/// in each column, and reads off the per-arrow matrices.
pub fn normal_form(kp: &KostantPartition) -> NormalForm {
    let orientation = kp.orientation().clone();
    let n = orientation.len();
    let dims: Vec<usize> = kp.dim_vector().0.iter().map(|&d| d as usize).collect();
    let mut matrices: Vec<Matrix> = orientation
        .dirs()
        .iter()
        .enumerate()
        .map(|(e, d)| {
            let (t, h) = match d {
                Dir::Right => (e, e + 1),
                Dir::Left => (e + 1, e),
            };
            vec![vec![0; dims[t]]; dims[h]]
        })
        .collect();
    let mut next = vec![0usize; n];
    for iv in lace_order(n) {
        for _ in 0..kp.mult_of(&iv) {
            let dots: Vec<usize> = (iv.k..=iv.l)
                .map(|p| {
                    let d = next[p - 1];
                    next[p - 1] += 1;
                    d
                })
                .collect();
            for p in iv.k..iv.l {
                let e = p - 1;
                let (left, right) = (dots[p - iv.k], dots[p + 1 - iv.k]);
                match orientation.dirs()[e] {
                    Dir::Right => matrices[e][right][left] = 1,
                    Dir::Left => matrices[e][left][right] = 1,
                }
            }
        }
    }
    NormalForm { orientation, dims, matrices }
}

/// The indecomposable module of an interval root.
pub fn interval_module(orientation: &LineQuiver, iv: Interval) -> Representation {
    let kp = KostantPartition::from_pairs(orientation.clone(), &[(iv, 1)]).expect("interval in range");
    normal_form(&kp).representation()
}

/// `(dim Hom(M, N), dim Ext^1(M, N))` as kernel and cokernel of
/// `(f_v) -> (f_h(a) M_a - N_a f_t(a))_a`.
pub fn hom_ext(quiver: &Quiver, m: &Representation, n: &Representation) -> (usize, usize) {
    let nv = quiver.vertex_count();
    let mut offset = vec![0usize; nv + 1];
    for v in 0..nv {
        offset[v + 1] = offset[v] + n.dims[v] * m.dims[v];
    }
    let unknowns = offset[nv];
    // f_v is dims_N[v] × dims_M[v], entry (r, c) at offset[v] + r * dims_M[v] + c
    let var = |v: usize, r: usize, c: usize| offset[v] + r * m.dims[v] + c;
    let mut rows: Vec<Vec<i64>> = Vec::new();
    let mut codomain = 0;
    for (a, &(t, h)) in quiver.arrows().iter().enumerate() {
        let (ma, na) = (&m.maps[a], &n.maps[a]);
        // (f_h M_a - N_a f_t) is dims_N[h] × dims_M[t]
        for r in 0..n.dims[h] {
            for c in 0..m.dims[t] {
                let mut row = vec![0i64; unknowns];
                for k in 0..m.dims[h] {
                    row[var(h, r, k)] += ma[k][c];
                }
                for k in 0..n.dims[t] {
                    row[var(t, k, c)] -= na[r][k];
                }
                rows.push(row);
                codomain += 1;
            }
        }
    }
    let rank = linalg::rank(&rows);
    (unknowns - rank, codomain - rank)
}

/// `dim Hom(M_a, M_b)` for interval modules on a line quiver.
pub fn dhom(orientation: &LineQuiver, a: Interval, b: Interval) -> usize {
    hom_ext(&orientation.quiver(), &interval_module(orientation, a), &interval_module(orientation, b)).0
}

/// `dim Ext^1(M_a, M_b)` for interval modules on a line quiver.
pub fn dext(orientation: &LineQuiver, a: Interval, b: Interval) -> usize {
    hom_ext(&orientation.quiver(), &interval_module(orientation, a), &interval_module(orientation, b)).1
}

/// Codimension of the orbit of a Kostant partition in its representation
/// space: `sum m_a m_b dhom(a, b) - chi(gamma, gamma)`.
pub fn codim_orbit(kp: &KostantPartition) -> u64 {
    let orientation = kp.orientation();
    let parts = kp.parts();
    let mut end: i64 = 0;
    for &(a, ma) in &parts {
        for &(b, mb) in &parts {
            end += (ma * mb) as i64 * dhom(orientation, a, b) as i64;
        }
    }
    let g = kp.dim_vector();
    let chi = orientation.quiver().euler_form(&g, &g).expect("line dimension vector");
    let codim = end - chi;
    debug_assert!(codim >= 0);
    codim as u64
}
