use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::quiver::{DimVector, LineQuiver};
use crate::roots::Interval;

/// A Kostant partition of a dimension vector on a type-A line quiver:
/// a multiplicity `m_beta` for every interval root `beta`.
///
/// Multiplicities are indexed by `Interval::all(N)`, i.e. lexicographic in
/// `(k, l)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct KostantPartition {
    orientation: LineQuiver,
    mult: Vec<u32>,
}

impl KostantPartition {
    pub fn new(orientation: LineQuiver, mult: Vec<u32>) -> Result<Self> {
        let n = orientation.len();
        if mult.len() != n * (n + 1) / 2 {
            return Err(Error::InvalidArgument(format!(
                "expected {} multiplicities, got {}",
                n * (n + 1) / 2,
                mult.len()
            )));
        }
        Ok(Self { orientation, mult })
    }

    /// Builds a partition from `(interval, multiplicity)` pairs; unlisted
    /// roots get multiplicity 0.
    pub fn from_pairs(orientation: LineQuiver, pairs: &[(Interval, u32)]) -> Result<Self> {
        let roots = Interval::all(orientation.len());
        let mut mult = vec![0; roots.len()];
        for (iv, m) in pairs {
            let idx = roots
                .iter()
                .position(|r| r == iv)
                .ok_or_else(|| Error::InvalidArgument(format!("interval {iv} out of range")))?;
            mult[idx] += m;
        }
        Self::new(orientation, mult)
    }

    /// Parses either a full multiplicity list in lexicographic root order
    /// (`0,2,0`) or root terms like `1-4:2,3-3:1` (`14:2` is accepted for
    /// single-digit endpoints); a term without `:m` has multiplicity 1.
    pub fn parse(orientation: LineQuiver, s: &str) -> Result<Self> {
        let bad = || Error::InvalidArgument(format!("cannot parse Kostant partition {s:?}"));
        let tokens: Vec<&str> = s.split(',').map(str::trim).filter(|t| !t.is_empty()).collect();
        let n = orientation.len();
        if tokens.len() == n * (n + 1) / 2 && tokens.iter().all(|t| !t.contains([':', '-'])) {
            let mult = tokens.iter().map(|t| t.parse().map_err(|_| bad())).collect::<Result<Vec<u32>>>()?;
            return Self::new(orientation, mult);
        }
        let mut pairs = Vec::new();
        for t in tokens {
            let (root, m) = match t.split_once(':') {
                Some((r, m)) => (r, m.parse().map_err(|_| bad())?),
                None => (t, 1),
            };
            let (k, l) = match root.split_once('-') {
                Some((k, l)) => (k.parse().map_err(|_| bad())?, l.parse().map_err(|_| bad())?),
                None if root.len() == 2 && root.chars().all(|c| c.is_ascii_digit()) => {
                    let d: Vec<usize> = root.chars().map(|c| c as usize - '0' as usize).collect();
                    (d[0], d[1])
                }
                None => return Err(bad()),
            };
            pairs.push((Interval::new(k, l)?, m));
        }
        Self::from_pairs(orientation, &pairs)
    }

    pub fn orientation(&self) -> &LineQuiver {
        &self.orientation
    }

    /// Number of vertices of the line.
    pub fn len(&self) -> usize {
        self.orientation.len()
    }

    pub fn is_empty(&self) -> bool {
        self.mult.iter().all(|&m| m == 0)
    }

    pub fn roots(&self) -> Vec<Interval> {
        Interval::all(self.len())
    }

    /// Multiplicities in lexicographic root order.
    pub fn mult(&self) -> &[u32] {
        &self.mult
    }

    pub fn mult_of(&self, iv: &Interval) -> u32 {
        self.roots().iter().position(|r| r == iv).map_or(0, |i| self.mult[i])
    }

    /// Roots with nonzero multiplicity, lexicographic.
    pub fn parts(&self) -> Vec<(Interval, u32)> {
        self.roots().into_iter().zip(self.mult.iter().copied()).filter(|&(_, m)| m > 0).collect()
    }

    /// `sum m_beta * beta`.
    pub fn dim_vector(&self) -> DimVector {
        let mut d = DimVector::zeros(self.len());
        for (iv, m) in self.parts() {
            for p in iv.k..=iv.l {
                d.0[p - 1] += m;
            }
        }
        d
    }
}

impl fmt::Display for KostantPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.mult.iter().map(u32::to_string).collect();
        write!(f, "{}", parts.join(","))
    }
}

/// All Kostant partitions of `g`, in ascending lexicographic order of their
/// multiplicity vectors.
pub fn enumerate_kostant(orientation: &LineQuiver, g: &DimVector) -> Vec<KostantPartition> {
    let n = orientation.len();
    assert_eq!(g.len(), n, "dimension vector length must match the line");
    let roots = Interval::all(n);
    let mut out = Vec::new();
    let mut mult = vec![0u32; roots.len()];
    let mut residual = g.0.clone();
    fill(&roots, 0, &mut residual, &mut mult, &mut |m| {
        out.push(KostantPartition { orientation: orientation.clone(), mult: m.to_vec() })
    });
    out
}

fn fill(roots: &[Interval], idx: usize, residual: &mut [u32], mult: &mut [u32], emit: &mut dyn FnMut(&[u32])) {
    if idx == roots.len() {
        emit(mult);
        return;
    }
    let iv = roots[idx];
    let cap = (iv.k..=iv.l).map(|p| residual[p - 1]).min().unwrap();
    let closes_vertex = iv.l == residual.len();
    for m in 0..=cap {
        // Roots starting at k are listed consecutively and end with [k, N];
        // after that one the residual at k must be used up.
        if closes_vertex && residual[iv.k - 1] != m {
            continue;
        }
        for p in iv.k..=iv.l {
            residual[p - 1] -= m;
        }
        mult[idx] = m;
        fill(roots, idx + 1, residual, mult, emit);
        for p in iv.k..=iv.l {
            residual[p - 1] += m;
        }
    }
    mult[idx] = 0;
}
