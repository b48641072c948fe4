//! Interval roots on the rows and columns of a grid quiver, their overlap
//! calculus, and admissible orderings of them.

use std::fmt;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quiver::{Axis, DimVector, GridQuiver};

/// The interval `[k, l]`, 1-based and inclusive.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Interval {
    pub k: usize,
    pub l: usize,
}

impl Interval {
    pub fn new(k: usize, l: usize) -> Result<Self> {
        if k == 0 || k > l {
            return Err(Error::InvalidArgument(format!("bad interval [{k},{l}]")));
        }
        Ok(Self { k, l })
    }

    /// Number of vertices covered.
    pub fn len(&self) -> usize {
        self.l - self.k + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn is_simple(&self) -> bool {
        self.k == self.l
    }

    pub fn contains(&self, p: usize) -> bool {
        self.k <= p && p <= self.l
    }

    pub fn intersect(&self, other: &Self) -> Option<Self> {
        let (s, t) = (self.k.max(other.k), self.l.min(other.l));
        (s <= t).then_some(Self { k: s, l: t })
    }

    /// All intervals in `[1, n]`, lexicographic in `(k, l)`.
    pub fn all(n: usize) -> Vec<Self> {
        (1..=n).flat_map(|k| (k..=n).map(move |l| Self { k, l })).collect()
    }

    /// Indicator vector of length `n`.
    pub fn dim_vector(&self, n: usize) -> DimVector {
        DimVector((1..=n).map(|p| self.contains(p) as u32).collect())
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{},{}]", self.k, self.l)
    }
}

/// `delta = t - s` for the overlap `[s, t]`, or 0 when empty.
pub fn delta(a: &Interval, b: &Interval) -> u32 {
    a.intersect(b).map_or(0, |i| (i.l - i.k) as u32)
}

/// Half the number of overlapping vertices, rounded down.
pub fn r_floor_interval(a: &Interval, b: &Interval) -> u32 {
    a.intersect(b).map_or(0, |i| i.len() as u32 / 2)
}

/// A positive root supported on one row (horizontal) or column (vertical).
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct GridRoot {
    pub axis: Axis,
    pub line: usize,
    #[serde(flatten)]
    pub interval: Interval,
}

impl GridRoot {
    pub fn new(axis: Axis, line: usize, k: usize, l: usize) -> Result<Self> {
        Ok(Self { axis, line, interval: Interval::new(k, l)? })
    }

    pub fn horizontal(line: usize, k: usize, l: usize) -> Self {
        Self { axis: Axis::Horizontal, line, interval: Interval { k, l } }
    }

    pub fn vertical(line: usize, k: usize, l: usize) -> Self {
        Self { axis: Axis::Vertical, line, interval: Interval { k, l } }
    }

    pub fn dim_vector(&self, gq: &GridQuiver) -> DimVector {
        let mut d = DimVector::zeros(gq.vertex_count());
        for p in self.interval.k..=self.interval.l {
            d.0[gq.line_vertex(self.axis, self.line, p)] = 1;
        }
        d
    }
}

impl fmt::Display for GridRoot {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}{}", self.axis.letter(), self.line, self.interval)
    }
}

/// All roots of one axis, ordered by line and then by `(k, l)`.
pub fn all_roots(gq: &GridQuiver, axis: Axis) -> Vec<GridRoot> {
    let len = gq.line_len(axis);
    (1..=gq.line_count(axis))
        .flat_map(|line| Interval::all(len).into_iter().map(move |interval| GridRoot { axis, line, interval }))
        .collect()
}

/// Overlap of two roots on the same axis and `delta = t - s` (0 if empty).
pub fn intersect(r1: &GridRoot, r2: &GridRoot) -> Result<(Option<Interval>, u32)> {
    if r1.axis != r2.axis {
        return Err(Error::AxisMismatch);
    }
    Ok((r1.interval.intersect(&r2.interval), delta(&r1.interval, &r2.interval)))
}

/// `floor(p / 2)` where `p` is the number of vertices in the overlap.
pub fn r_floor(r1: &GridRoot, r2: &GridRoot) -> Result<u32> {
    if r1.axis != r2.axis {
        return Err(Error::AxisMismatch);
    }
    Ok(r_floor_interval(&r1.interval, &r2.interval))
}

pub fn root_lambda(gq: &GridQuiver, r1: &GridRoot, r2: &GridRoot) -> i64 {
    gq.lambda(&r1.dim_vector(gq), &r2.dim_vector(gq))
}

/// Whether lines of this axis with index `line` are arranged like odd rows,
/// i.e. `1 <- 2 -> 3 <- ...`. Columns follow the opposite parity.
fn odd_pattern(axis: Axis, line: usize) -> bool {
    match axis {
        Axis::Horizontal => line % 2 == 1,
        Axis::Vertical => line.is_multiple_of(2),
    }
}

/// Root placed at 1-based entry `(i, j)` of an order matrix for lines of
/// length `len`.
fn matrix_entry(odd: bool, len: usize, i: usize, j: usize) -> Option<Interval> {
    let filled = if odd { (i + j) % 2 == 1 } else { (i + j).is_multiple_of(2) };
    if !filled {
        return None;
    }
    let u = if j >= i { j - i + 1 } else { i - j };
    let v = if i + j <= len + 1 { i + j - 1 } else { 2 * len + 2 - i - j };
    Some(Interval { k: u, l: v })
}

/// The `(len+1) × len` order matrix of one line. Rows use the arrangement
/// prescribed for rows of the grid; for columns the parity is swapped and
/// `n` takes the place of `n'`.
pub fn order_matrix_axis(gq: &GridQuiver, axis: Axis, line: usize) -> Vec<Vec<Option<GridRoot>>> {
    let len = gq.line_len(axis);
    let odd = odd_pattern(axis, line);
    (1..=len + 1)
        .map(|i| {
            (1..=len).map(|j| matrix_entry(odd, len, i, j).map(|interval| GridRoot { axis, line, interval })).collect()
        })
        .collect()
}

/// Order matrix `M^(k)` of row `k`.
pub fn order_matrix(gq: &GridQuiver, k: usize) -> Vec<Vec<Option<GridRoot>>> {
    order_matrix_axis(gq, Axis::Horizontal, k)
}

/// Row index of a root in its order matrix.
pub fn rho(gq: &GridQuiver, root: &GridRoot) -> usize {
    let len = gq.line_len(root.axis);
    let odd = odd_pattern(root.axis, root.line);
    (1..=len + 1)
        .find(|&i| (1..=len).any(|j| matrix_entry(odd, len, i, j) == Some(root.interval)))
        .expect("every interval appears in its order matrix")
}

/// A sequence of all roots of one axis.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RootOrder {
    pub axis: Axis,
    pub sequence: Vec<GridRoot>,
}

/// First pair of positions breaking the ordering rules.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OrderViolation {
    pub first: usize,
    pub second: usize,
    pub lambda: i64,
}

/// Roots sorted by `rho`, ties broken by `(line, k, l)`.
pub fn canonical_order(gq: &GridQuiver, axis: Axis) -> RootOrder {
    let mut seq = all_roots(gq, axis);
    seq.sort_by_key(|r| (rho(gq, r), r.line, r.interval));
    RootOrder { axis, sequence: seq }
}

/// Whether `a` may precede `b` given `lambda(a, b)`.
fn allowed(a: &GridRoot, b: &GridRoot, lambda: i64) -> bool {
    if a.line == b.line {
        lambda >= 0
    } else {
        lambda <= 0
    }
}

fn check_permutation(gq: &GridQuiver, ord: &RootOrder) -> Result<()> {
    let mut expected = all_roots(gq, ord.axis);
    let mut got = ord.sequence.clone();
    if got.iter().any(|r| r.axis != ord.axis) {
        return Err(Error::IncompleteOrder("root from the other axis".into()));
    }
    expected.sort();
    got.sort();
    if expected != got {
        return Err(Error::IncompleteOrder(format!(
            "expected {} distinct roots, got {} entries",
            expected.len(),
            ord.sequence.len()
        )));
    }
    Ok(())
}

/// Checks the ordering rules: within a line `lambda >= 0` for earlier
/// roots, across lines `lambda <= 0`. Returns the first violating pair.
pub fn validate_order(gq: &GridQuiver, ord: &RootOrder) -> Result<Option<OrderViolation>> {
    check_permutation(gq, ord)?;
    let dims: Vec<DimVector> = ord.sequence.iter().map(|r| r.dim_vector(gq)).collect();
    for a in 0..dims.len() {
        for b in a + 1..dims.len() {
            let lambda = gq.lambda(&dims[a], &dims[b]);
            if !allowed(&ord.sequence[a], &ord.sequence[b], lambda) {
                return Ok(Some(OrderViolation { first: a, second: b, lambda }));
            }
        }
    }
    Ok(None)
}

/// A uniformly chosen linear extension step by step: at each position one of
/// the roots with no unplaced predecessor is picked at random.
pub fn random_order<R: Rng + ?Sized>(gq: &GridQuiver, axis: Axis, rng: &mut R) -> RootOrder {
    let roots = all_roots(gq, axis);
    let dims: Vec<DimVector> = roots.iter().map(|r| r.dim_vector(gq)).collect();
    let n = roots.len();
    let mut succ = vec![Vec::new(); n];
    let mut indeg = vec![0usize; n];
    for a in 0..n {
        for b in a + 1..n {
            let lambda = gq.lambda(&dims[a], &dims[b]);
            let (ab, ba) = (allowed(&roots[a], &roots[b], lambda), allowed(&roots[b], &roots[a], -lambda));
            match (ab, ba) {
                (true, false) => {
                    succ[a].push(b);
                    indeg[b] += 1;
                }
                (false, true) => {
                    succ[b].push(a);
                    indeg[a] += 1;
                }
                _ => {}
            }
        }
    }
    let mut ready: Vec<usize> = (0..n).filter(|&v| indeg[v] == 0).collect();
    let mut seq = Vec::with_capacity(n);
    while !ready.is_empty() {
        let v = ready.swap_remove(rng.gen_range(0..ready.len()));
        seq.push(roots[v]);
        for &w in &succ[v] {
            indeg[w] -= 1;
            if indeg[w] == 0 {
                ready.push(w);
            }
        }
    }
    assert_eq!(seq.len(), n, "ordering constraints are acyclic");
    RootOrder { axis, sequence: seq }
}

/// Arrows between adjacent lines over the overlap of two roots, split by
/// direction: `(up, down)` for rows, `(left, right)` for columns. The second
/// count is arrows pointing from `r1`'s line to `r2`'s line.
pub fn up_down_counts(gq: &GridQuiver, r1: &GridRoot, r2: &GridRoot) -> Result<(u32, u32)> {
    if r1.axis != r2.axis {
        return Err(Error::AxisMismatch);
    }
    if r1.line >= r2.line {
        return Err(Error::LineOrder { first: r1.line, second: r2.line });
    }
    let Some(ov) = r1.interval.intersect(&r2.interval) else {
        return Ok((0, 0));
    };
    if r2.line - r1.line != 1 {
        return Ok((0, 0));
    }
    let (mut back, mut fwd) = (0, 0);
    for p in ov.k..=ov.l {
        let (t, h) = match r1.axis {
            Axis::Horizontal => (gq.vertex(r1.line, p), gq.vertex(r2.line, p)),
            Axis::Vertical => (gq.vertex(p, r1.line), gq.vertex(p, r2.line)),
        };
        if gq.base().arrows().contains(&(t, h)) {
            fwd += 1;
        } else {
            back += 1;
        }
    }
    Ok((back, fwd))
}

/// Superpotential contribution of a pair of roots on lines `i' < i''`.
pub fn sc(gq: &GridQuiver, r1: &GridRoot, r2: &GridRoot) -> Result<u32> {
    let (back, fwd) = up_down_counts(gq, r1, r2)?;
    let lambda = fwd as i64 - back as i64;
    Ok(if lambda <= 0 { fwd } else { back })
}

/// The same contribution written as `up + lambda` when `lambda <= 0`.
pub fn sc_restated(gq: &GridQuiver, r1: &GridRoot, r2: &GridRoot) -> Result<u32> {
    let (back, _) = up_down_counts(gq, r1, r2)?;
    let lambda = root_lambda(gq, r1, r2);
    let v = if lambda <= 0 { back as i64 + lambda } else { back as i64 };
    Ok(v as u32)
}

/// Signature `(positive, negative, zero)` of the `p × p` symmetric
/// tridiagonal matrix with `1/2` on the off-diagonals. Its eigenvalues are
/// `cos(a pi / (p+1))` for `a = 1..=p`.
pub fn tridiagonal_signature(p: usize) -> (usize, usize, usize) {
    let (mut pos, mut neg, mut zero) = (0, 0, 0);
    for a in 1..=p {
        match (2 * a).cmp(&(p + 1)) {
            std::cmp::Ordering::Less => pos += 1,
            std::cmp::Ordering::Equal => zero += 1,
            std::cmp::Ordering::Greater => neg += 1,
        }
    }
    (pos, neg, zero)
}
