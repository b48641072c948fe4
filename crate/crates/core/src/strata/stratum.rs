use std::collections::HashMap;
use std::fmt;

use rayon::prelude::*;
use serde::Serialize;

use crate::qseries::QSeries;
use crate::quiver::{Axis, DimVector, GridQuiver};
use crate::roots::{r_floor_interval, sc, GridRoot};

use super::kostant::{enumerate_kostant, KostantPartition};
use super::lace::codim_orbit;

/// A horizontal or vertical stratum: one Kostant partition per line.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Stratum {
    pub axis: Axis,
    pub parts: Vec<KostantPartition>,
}

impl Stratum {
    /// Identifier such as `H(0,2,0;0,1,0)`: per-line multiplicities in
    /// lexicographic root order.
    pub fn id(&self) -> String {
        let lines: Vec<String> = self.parts.iter().map(ToString::to_string).collect();
        format!("{}({})", self.axis.letter(), lines.join(";"))
    }

    /// Hexagon label for two lines of length two: `k11 k10 k01 l10 l01 l11`
    /// where `k10 = m[1,1]`, `k01 = m[2,2]`, `k11 = m[1,2]`.
    pub fn hexagon(&self) -> Option<String> {
        if self.parts.len() != 2 || self.parts.iter().any(|p| p.len() != 2) {
            return None;
        }
        let (a, b) = (self.parts[0].mult(), self.parts[1].mult());
        Some(format!("{}{}{}{}{}{}", a[1], a[0], a[2], b[0], b[2], b[1]))
    }

    /// The multiplicities `m_beta` over all roots, zeros dropped.
    pub fn multiplicities(&self) -> Vec<u32> {
        self.parts.iter().flat_map(|p| p.mult().iter().copied()).filter(|&m| m > 0).collect()
    }

    /// Roots with their multiplicities, line by line.
    pub fn roots(&self) -> Vec<(GridRoot, u32)> {
        self.parts
            .iter()
            .enumerate()
            .flat_map(|(i, p)| {
                let axis = self.axis;
                p.parts().into_iter().map(move |(interval, m)| (GridRoot { axis, line: i + 1, interval }, m))
            })
            .collect()
    }

    /// `sum m_beta * beta` as a grid dimension vector.
    pub fn dim_vector(&self, gq: &GridQuiver) -> DimVector {
        let mut d = DimVector::zeros(gq.vertex_count());
        for (r, m) in self.roots() {
            for p in r.interval.k..=r.interval.l {
                d.0[gq.line_vertex(self.axis, r.line, p)] += m;
            }
        }
        d
    }
}

impl fmt::Display for Stratum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.id())
    }
}

/// All strata of `gamma` along an axis: the product of the per-line
/// Kostant partitions, the first line varying slowest.
pub fn enumerate_strata(gq: &GridQuiver, gamma: &DimVector, axis: Axis) -> Vec<Stratum> {
    let per_line: Vec<Vec<KostantPartition>> = (1..=gq.line_count(axis))
        .map(|line| enumerate_kostant(&gq.line_quiver(axis, line), &gq.restrict(gamma, axis, line)))
        .collect();
    let mut out = vec![Vec::new()];
    for options in &per_line {
        out = out
            .into_iter()
            .flat_map(|prefix: Vec<KostantPartition>| {
                options.iter().map(move |kp| {
                    let mut next = prefix.clone();
                    next.push(kp.clone());
                    next
                })
            })
            .collect();
    }
    out.into_iter().map(|parts| Stratum { axis, parts }).collect()
}

/// Codimension of a stratum: the sum of its line orbit codimensions.
pub fn codim_stratum(s: &Stratum) -> u64 {
    s.parts.iter().map(codim_orbit).sum()
}

/// `prod_beta P_(m_beta)` truncated at `t^hi`.
pub fn poincare_stratum(s: &Stratum, hi: i64) -> QSeries {
    s.multiplicities().into_iter().fold(QSeries::one(hi), |acc, m| acc.mul_poincare(m))
}

/// Factorization like `P_2^2*P_1` (or `1` when trivial).
pub fn poincare_label(s: &Stratum) -> String {
    let mut counts: HashMap<u32, u32> = HashMap::new();
    for m in s.multiplicities() {
        *counts.entry(m).or_default() += 1;
    }
    let mut keys: Vec<u32> = counts.keys().copied().filter(|&m| m > 0).collect();
    keys.sort_unstable_by(|a, b| b.cmp(a));
    let parts: Vec<String> = keys
        .into_iter()
        .map(|m| match counts[&m] {
            1 => format!("P_{m}"),
            e => format!("P_{m}^{e}"),
        })
        .collect();
    if parts.is_empty() {
        "1".into()
    } else {
        parts.join("*")
    }
}

/// Superpotential shift: `sum sc(a, b) m_a m_b` over roots on adjacent lines.
pub fn w_shift(gq: &GridQuiver, s: &Stratum) -> u64 {
    let mut w = 0u64;
    for i in 0..s.parts.len().saturating_sub(1) {
        for (a, ma) in line_roots(s, i) {
            for (b, mb) in line_roots(s, i + 1) {
                w += sc(gq, &a, &b).expect("adjacent lines on one axis") as u64 * (ma * mb) as u64;
            }
        }
    }
    w
}

/// `c_eta = sum r(a, b) m_a m_b` over roots on adjacent lines.
pub fn c_eta(s: &Stratum) -> u64 {
    let mut c = 0u64;
    for i in 0..s.parts.len().saturating_sub(1) {
        for (a, ma) in line_roots(s, i) {
            for (b, mb) in line_roots(s, i + 1) {
                c += r_floor_interval(&a.interval, &b.interval) as u64 * (ma * mb) as u64;
            }
        }
    }
    c
}

fn line_roots(s: &Stratum, idx: usize) -> Vec<(GridRoot, u32)> {
    s.parts[idx]
        .parts()
        .into_iter()
        .map(|(interval, m)| (GridRoot { axis: s.axis, line: idx + 1, interval }, m))
        .collect()
}

/// Everything the tables report about one stratum.
#[derive(Clone, Debug, Serialize)]
pub struct StratumInfo {
    pub id: String,
    pub stratum: Stratum,
    pub codim: u64,
    pub w: u64,
    pub poincare: String,
    /// Position in enumeration order.
    pub index: usize,
}

impl StratumInfo {
    /// Exponent of `t` in `q^(w + codim)`.
    pub fn shift(&self) -> i64 {
        2 * (self.w + self.codim) as i64
    }
}

/// All strata of an axis with their data, in table order: by codimension,
/// then by decreasing `w`, then by enumeration order.
pub fn stratum_table(gq: &GridQuiver, gamma: &DimVector, axis: Axis) -> Vec<StratumInfo> {
    let strata = enumerate_strata(gq, gamma, axis);
    let mut codims: HashMap<KostantPartition, u64> = HashMap::new();
    let mut rows: Vec<StratumInfo> = strata
        .into_iter()
        .enumerate()
        .map(|(index, s)| {
            let codim = s.parts.iter().map(|p| *codims.entry(p.clone()).or_insert_with(|| codim_orbit(p))).sum();
            StratumInfo { id: s.id(), codim, w: w_shift(gq, &s), poincare: poincare_label(&s), stratum: s, index }
        })
        .collect();
    rows.sort_by_key(|r| (r.codim, std::cmp::Reverse(r.w), r.index));
    rows
}

/// `sum_strata q^(w + codim) P_stratum`, truncated at `t^hi`.
pub fn geometric_sum(gq: &GridQuiver, gamma: &DimVector, axis: Axis, hi: i64) -> QSeries {
    let rows = stratum_table(gq, gamma, axis);
    let terms: Vec<QSeries> = rows
        .par_iter()
        .map(|r| {
            let shift = r.shift();
            poincare_stratum(&r.stratum, hi - shift).shift(shift)
        })
        .collect();
    terms.iter().fold(QSeries::zero(hi), |acc, t| acc.add(t))
}
