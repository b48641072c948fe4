//! Quivers, their Euler/antisymmetrized forms, and the square product
//! `A_n □ A_n'` on an `n × n'` grid.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::{Error, Result};

/// A vector of natural numbers indexed by the vertices of a quiver.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct DimVector(pub Vec<u32>);

impl DimVector {
    pub fn zeros(len: usize) -> Self {
        Self(vec![0; len])
    }

    pub fn unit(len: usize, v: usize) -> Self {
        let mut d = Self::zeros(len);
        d.0[v] = 1;
        d
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&x| x == 0)
    }

    pub fn total(&self) -> u64 {
        self.0.iter().map(|&x| x as u64).sum()
    }

    pub fn sum_of_squares(&self) -> i64 {
        self.0.iter().map(|&x| (x as i64) * (x as i64)).sum()
    }

    pub fn add(&self, other: &Self) -> Self {
        Self(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn checked_sub(&self, other: &Self) -> Option<Self> {
        self.0.iter().zip(&other.0).map(|(a, b)| a.checked_sub(*b)).collect::<Option<_>>().map(Self)
    }

    pub fn scale(&self, k: u32) -> Self {
        Self(self.0.iter().map(|a| a * k).collect())
    }

    /// Componentwise `self <= other`.
    pub fn le(&self, other: &Self) -> bool {
        self.0.len() == other.0.len() && self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }
}

impl std::ops::Index<usize> for DimVector {
    type Output = u32;
    fn index(&self, i: usize) -> &u32 {
        &self.0[i]
    }
}

impl fmt::Display for DimVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(u32::to_string).collect();
        write!(f, "{}", parts.join(","))
    }
}

impl FromStr for DimVector {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() {
            return Ok(Self::default());
        }
        s.split([',', ';'])
            .map(|p| p.trim().parse::<u32>().map_err(|_| Error::InvalidArgument(format!("bad dimension entry {p:?}"))))
            .collect::<Result<Vec<_>>>()
            .map(Self)
    }
}

/// A finite quiver given by its arrow list.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Quiver {
    vertex_count: usize,
    arrows: Vec<(usize, usize)>,
}

impl Quiver {
    pub fn new(vertex_count: usize, arrows: Vec<(usize, usize)>) -> Result<Self> {
        if let Some(&(t, h)) = arrows.iter().find(|&&(t, h)| t >= vertex_count || h >= vertex_count) {
            return Err(Error::InvalidArgument(format!("arrow {t}->{h} out of range for {vertex_count} vertices")));
        }
        Ok(Self { vertex_count, arrows })
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    /// Arrows as `(tail, head)` pairs.
    pub fn arrows(&self) -> &[(usize, usize)] {
        &self.arrows
    }

    fn check(&self, g: &DimVector) -> Result<()> {
        if g.len() != self.vertex_count {
            return Err(Error::DimensionMismatch { expected: self.vertex_count, found: g.len() });
        }
        Ok(())
    }

    /// `chi(g1, g2) = sum_v g1(v) g2(v) - sum_a g1(t(a)) g2(h(a))`.
    pub fn euler_form(&self, g1: &DimVector, g2: &DimVector) -> Result<i64> {
        self.check(g1)?;
        self.check(g2)?;
        let diag: i64 = g1.0.iter().zip(&g2.0).map(|(&a, &b)| a as i64 * b as i64).sum();
        let off: i64 = self.arrows.iter().map(|&(t, h)| g1[t] as i64 * g2[h] as i64).sum();
        Ok(diag - off)
    }

    /// `lambda(g1, g2) = chi(g2, g1) - chi(g1, g2)`.
    pub fn lambda_form(&self, g1: &DimVector, g2: &DimVector) -> Result<i64> {
        Ok(self.euler_form(g2, g1)? - self.euler_form(g1, g2)?)
    }

    pub fn tits_form(&self, g: &DimVector) -> Result<i64> {
        self.euler_form(g, g)
    }

    pub fn is_root(&self, g: &DimVector) -> Result<bool> {
        Ok(!g.is_zero() && self.tits_form(g)? == 1)
    }

    /// The antisymmetric matrix `L[u][v] = #(u -> v) - #(v -> u)`, so that
    /// `lambda(g1, g2) = sum_{u,v} g1(u) L[u][v] g2(v)`.
    pub fn lambda_matrix(&self) -> Vec<Vec<i64>> {
        let n = self.vertex_count;
        let mut l = vec![vec![0i64; n]; n];
        for &(t, h) in &self.arrows {
            l[t][h] += 1;
            l[h][t] -= 1;
        }
        l
    }
}

/// Orientation of one edge of a line quiver `1 - 2 - ... - N`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Dir {
    /// `k -> k+1`
    Right,
    /// `k <- k+1`
    Left,
}

/// A type-A quiver with vertices `1..=N` and a chosen orientation per edge.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LineQuiver {
    dirs: Vec<Dir>,
}

impl LineQuiver {
    pub fn new(dirs: Vec<Dir>) -> Self {
        Self { dirs }
    }

    /// Parses a pattern such as `"rrl"` for `1 -> 2 -> 3 <- 4`.
    pub fn from_pattern(pattern: &str) -> Result<Self> {
        pattern
            .chars()
            .map(|c| match c {
                'r' | 'R' | '>' => Ok(Dir::Right),
                'l' | 'L' | '<' => Ok(Dir::Left),
                _ => Err(Error::InvalidArgument(format!("bad orientation character {c:?}"))),
            })
            .collect::<Result<Vec<_>>>()
            .map(Self::new)
    }

    /// A single vertex and no edges.
    pub fn point() -> Self {
        Self::new(Vec::new())
    }

    pub fn len(&self) -> usize {
        self.dirs.len() + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn dirs(&self) -> &[Dir] {
        &self.dirs
    }

    pub fn pattern(&self) -> String {
        self.dirs.iter().map(|d| if *d == Dir::Right { 'r' } else { 'l' }).collect()
    }

    /// Arrows as 0-based `(tail, head)`, one per edge in edge order.
    pub fn arrows(&self) -> Vec<(usize, usize)> {
        self.dirs
            .iter()
            .enumerate()
            .map(|(e, d)| match d {
                Dir::Right => (e, e + 1),
                Dir::Left => (e + 1, e),
            })
            .collect()
    }

    pub fn quiver(&self) -> Quiver {
        Quiver { vertex_count: self.len(), arrows: self.arrows() }
    }

    /// Every orientation of `A_n`.
    pub fn all_orientations(n: usize) -> Vec<Self> {
        let edges = n.saturating_sub(1);
        (0..1u64 << edges)
            .map(|mask| {
                Self::new((0..edges).map(|e| if mask >> e & 1 == 1 { Dir::Left } else { Dir::Right }).collect())
            })
            .collect()
    }
}

/// Class of a grid vertex with respect to its row subquiver. Heads of the
/// row quiver are tails of the column quiver and vice versa.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum VertexClass {
    /// Sink of its row (`HorH`, equal to `VerT`).
    HorH,
    /// Source of its row (`HorT`, equal to `VerH`).
    HorT,
}

/// Horizontal (row) or vertical (column) direction in the grid.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Axis {
    Horizontal,
    Vertical,
}

impl Axis {
    pub fn letter(self) -> char {
        match self {
            Axis::Horizontal => 'H',
            Axis::Vertical => 'V',
        }
    }
}

impl FromStr for Axis {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "h" | "hor" | "horizontal" | "row" | "rows" => Ok(Axis::Horizontal),
            "v" | "ver" | "vertical" | "col" | "column" | "columns" => Ok(Axis::Vertical),
            _ => Err(Error::InvalidArgument(format!("unknown axis {s:?}"))),
        }
    }
}

impl fmt::Display for Axis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Axis::Horizontal => "horizontal",
            Axis::Vertical => "vertical",
        })
    }
}

/// The quadratic forms of a dimension vector on a grid quiver.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct QuadForms {
    pub up: i64,
    pub down: i64,
    pub left: i64,
    pub right: i64,
    pub hip: i64,
    pub vip: i64,
}

/// The square product `A_n □ A_n'`.
///
/// Vertex `(i, j)` (1-based) has id `(i-1) * n' + (j-1)`. In odd rows the
/// arrows point from even columns to odd columns, in even rows the other way;
/// in odd columns they point from odd rows to even rows, in even columns the
/// other way.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GridQuiver {
    n: usize,
    nprime: usize,
    base: Quiver,
    lambda: Vec<Vec<i64>>,
}

impl GridQuiver {
    pub fn square_product(n: usize, nprime: usize) -> Result<Self> {
        if n == 0 || nprime == 0 {
            return Err(Error::InvalidArgument("grid dimensions must be positive".into()));
        }
        let id = |i: usize, j: usize| (i - 1) * nprime + (j - 1);
        let mut arrows = Vec::with_capacity(n * (nprime - 1) + nprime * (n - 1));
        for i in 1..=n {
            for j in 1..nprime {
                arrows.push(match Self::row_dir(i, j) {
                    Dir::Right => (id(i, j), id(i, j + 1)),
                    Dir::Left => (id(i, j + 1), id(i, j)),
                });
            }
        }
        for i in 1..n {
            for j in 1..=nprime {
                arrows.push(match Self::col_dir(i, j) {
                    Dir::Right => (id(i, j), id(i + 1, j)),
                    Dir::Left => (id(i + 1, j), id(i, j)),
                });
            }
        }
        let base = Quiver::new(n * nprime, arrows)?;
        let lambda = base.lambda_matrix();
        Ok(Self { n, nprime, base, lambda })
    }

    /// Orientation of the row edge between `(i, j)` and `(i, j+1)`.
    fn row_dir(i: usize, j: usize) -> Dir {
        if (i + j).is_multiple_of(2) {
            Dir::Left
        } else {
            Dir::Right
        }
    }

    /// Orientation of the column edge between `(i, j)` and `(i+1, j)`.
    fn col_dir(i: usize, j: usize) -> Dir {
        if (i + j).is_multiple_of(2) {
            Dir::Right
        } else {
            Dir::Left
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn nprime(&self) -> usize {
        self.nprime
    }

    pub fn base(&self) -> &Quiver {
        &self.base
    }

    pub fn vertex_count(&self) -> usize {
        self.n * self.nprime
    }

    pub fn lambda_matrix(&self) -> &[Vec<i64>] {
        &self.lambda
    }

    /// Vertex id of `(i, j)`, both 1-based.
    pub fn vertex(&self, i: usize, j: usize) -> usize {
        debug_assert!((1..=self.n).contains(&i) && (1..=self.nprime).contains(&j));
        (i - 1) * self.nprime + (j - 1)
    }

    pub fn coord(&self, v: usize) -> (usize, usize) {
        (v / self.nprime + 1, v % self.nprime + 1)
    }

    pub fn class(&self, v: usize) -> VertexClass {
        let (i, j) = self.coord(v);
        if (i + j) % 2 == 0 {
            VertexClass::HorH
        } else {
            VertexClass::HorT
        }
    }

    pub fn vertices_of(&self, class: VertexClass) -> Vec<usize> {
        (0..self.vertex_count()).filter(|&v| self.class(v) == class).collect()
    }

    pub fn hor_heads(&self) -> Vec<usize> {
        self.vertices_of(VertexClass::HorH)
    }

    pub fn hor_tails(&self) -> Vec<usize> {
        self.vertices_of(VertexClass::HorT)
    }

    pub fn ver_heads(&self) -> Vec<usize> {
        self.vertices_of(VertexClass::HorT)
    }

    pub fn ver_tails(&self) -> Vec<usize> {
        self.vertices_of(VertexClass::HorH)
    }

    /// The row subquiver `Q(i, •)`.
    pub fn row_quiver(&self, i: usize) -> LineQuiver {
        LineQuiver::new((1..self.nprime).map(|j| Self::row_dir(i, j)).collect())
    }

    /// The column subquiver `Q(•, j)`.
    pub fn col_quiver(&self, j: usize) -> LineQuiver {
        LineQuiver::new((1..self.n).map(|i| Self::col_dir(i, j)).collect())
    }

    /// Line subquiver for an axis: row `line` or column `line`.
    pub fn line_quiver(&self, axis: Axis, line: usize) -> LineQuiver {
        match axis {
            Axis::Horizontal => self.row_quiver(line),
            Axis::Vertical => self.col_quiver(line),
        }
    }

    /// Number of lines along an axis (rows for horizontal).
    pub fn line_count(&self, axis: Axis) -> usize {
        match axis {
            Axis::Horizontal => self.n,
            Axis::Vertical => self.nprime,
        }
    }

    /// Length of each line along an axis (`n'` for rows).
    pub fn line_len(&self, axis: Axis) -> usize {
        match axis {
            Axis::Horizontal => self.nprime,
            Axis::Vertical => self.n,
        }
    }

    /// Vertex at position `pos` of line `line` (both 1-based).
    pub fn line_vertex(&self, axis: Axis, line: usize, pos: usize) -> usize {
        match axis {
            Axis::Horizontal => self.vertex(line, pos),
            Axis::Vertical => self.vertex(pos, line),
        }
    }

    /// Restriction of a grid dimension vector to one line.
    pub fn restrict(&self, g: &DimVector, axis: Axis, line: usize) -> DimVector {
        DimVector((1..=self.line_len(axis)).map(|p| g[self.line_vertex(axis, line, p)]).collect())
    }

    pub fn lambda(&self, g1: &DimVector, g2: &DimVector) -> i64 {
        let mut acc = 0;
        for &(t, h) in self.base.arrows() {
            acc += g1[t] as i64 * g2[h] as i64 - g1[h] as i64 * g2[t] as i64;
        }
        acc
    }

    pub fn euler(&self, g1: &DimVector, g2: &DimVector) -> i64 {
        self.base.euler_form(g1, g2).expect("grid dimension vectors")
    }

    pub fn quadratic_forms(&self, g: &DimVector) -> Result<QuadForms> {
        if g.len() != self.vertex_count() {
            return Err(Error::DimensionMismatch { expected: self.vertex_count(), found: g.len() });
        }
        let mut f = QuadForms::default();
        for &(t, h) in self.base.arrows() {
            let w = g[t] as i64 * g[h] as i64;
            let ((ti, tj), (hi, hj)) = (self.coord(t), self.coord(h));
            if hi < ti {
                f.up -= w;
            } else if hi > ti {
                f.down -= w;
            } else if hj < tj {
                f.left -= w;
            } else {
                f.right -= w;
            }
        }
        f.hip = -f.up - f.down;
        f.vip = -f.left - f.right;
        Ok(f)
    }

    /// Arrows as pairs of 1-based grid coordinates.
    pub fn coord_arrows(&self) -> Vec<((usize, usize), (usize, usize))> {
        self.base.arrows().iter().map(|&(t, h)| (self.coord(t), self.coord(h))).collect()
    }

    pub fn to_json(&self) -> Value {
        let arrows: Vec<Value> =
            self.coord_arrows().into_iter().map(|((ti, tj), (hi, hj))| json!([[ti, tj], [hi, hj]])).collect();
        let coords = |vs: Vec<usize>| -> Vec<Value> {
            vs.into_iter()
                .map(|v| {
                    let (i, j) = self.coord(v);
                    json!([i, j])
                })
                .collect()
        };
        json!({
            "n": self.n,
            "nprime": self.nprime,
            "arrows": arrows,
            "classes": {
                "HorH": coords(self.hor_heads()),
                "HorT": coords(self.hor_tails()),
                "VerH": coords(self.ver_heads()),
                "VerT": coords(self.ver_tails()),
            }
        })
    }
}
