//! The quantum algebra of a quiver, truncated to a box of dimension vectors.
//!
//! Basis elements `y_g` multiply by `y_a y_b = -q^(lambda(a,b)/2) y_(a+b)`
//! for nonzero `a, b`; `y_0` is the unit.

use std::fmt;

use num_bigint::BigInt;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{Map, Value};

use crate::error::{Error, Result};
use crate::qseries::{QSeries, SeriesDifference};
use crate::quiver::{DimVector, GridQuiver, Quiver};
use crate::roots::{validate_order, RootOrder};
use crate::strata::{codim_orbit, KostantPartition};

/// `sign * t^tpow * y_gamma`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Monomial {
    pub gamma: DimVector,
    pub sign: i8,
    pub tpow: i64,
}

impl Monomial {
    pub fn unit(len: usize) -> Self {
        Self { gamma: DimVector::zeros(len), sign: 1, tpow: 0 }
    }

    pub fn y(gamma: DimVector) -> Self {
        Self { gamma, sign: 1, tpow: 0 }
    }

    /// Product of two monomials in the quantum algebra of `q`.
    pub fn mul(&self, other: &Self, q: &Quiver) -> Result<Self> {
        let scalar = Self {
            gamma: DimVector::zeros(self.gamma.len()),
            sign: self.sign * other.sign,
            tpow: self.tpow + other.tpow,
        };
        if self.gamma.is_zero() {
            return Ok(Self { gamma: other.gamma.clone(), ..scalar });
        }
        if other.gamma.is_zero() {
            return Ok(Self { gamma: self.gamma.clone(), ..scalar });
        }
        let b = basis_product(q, &self.gamma, &other.gamma)?;
        Ok(Self { gamma: b.gamma, sign: scalar.sign * b.sign, tpow: scalar.tpow + b.tpow })
    }

    /// The same monomial with its scalar multiplied by `sign * t^tpow`.
    pub fn scaled(&self, sign: i8, tpow: i64) -> Self {
        Self { gamma: self.gamma.clone(), sign: self.sign * sign, tpow: self.tpow + tpow }
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sign = if self.sign < 0 { "-" } else { "" };
        write!(f, "{sign}q^({}/2)*y[{}]", self.tpow, self.gamma)
    }
}

/// `y_g1 y_g2 = -t^lambda(g1, g2) y_(g1+g2)` for nonzero `g1, g2`.
pub fn basis_product(q: &Quiver, g1: &DimVector, g2: &DimVector) -> Result<Monomial> {
    if g1.is_zero() || g2.is_zero() {
        return Err(Error::ZeroVectorOperand);
    }
    let lambda = q.lambda_form(g1, g2)?;
    Ok(Monomial { gamma: g1.add(g2), sign: -1, tpow: lambda })
}

/// The single monomial equal to `prod y_(g_i)^(e_i)` in sequence order.
pub fn monomial_product_scalar(q: &Quiver, seq: &[(DimVector, u32)]) -> Result<Monomial> {
    let mut acc = Monomial::unit(q.vertex_count());
    for (g, e) in seq {
        if g.len() != q.vertex_count() {
            return Err(Error::DimensionMismatch { expected: q.vertex_count(), found: g.len() });
        }
        for _ in 0..*e {
            acc = acc.mul(&Monomial::y(g.clone()), q)?;
        }
    }
    Ok(acc)
}

/// The set of dimension vectors `g <= bound`, laid out in mixed radix with
/// the first vertex varying fastest.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruncationBox {
    bound: DimVector,
    strides: Vec<usize>,
    cells: usize,
}

impl TruncationBox {
    pub fn new(bound: DimVector) -> Self {
        let mut strides = Vec::with_capacity(bound.len());
        let mut cells = 1usize;
        for &b in &bound.0 {
            strides.push(cells);
            cells *= b as usize + 1;
        }
        Self { bound, strides, cells }
    }

    pub fn bound(&self) -> &DimVector {
        &self.bound
    }

    pub fn cells(&self) -> usize {
        self.cells
    }

    pub fn contains(&self, g: &DimVector) -> bool {
        g.le(&self.bound)
    }

    pub fn index(&self, g: &DimVector) -> usize {
        g.0.iter().zip(&self.strides).map(|(&x, &s)| x as usize * s).sum()
    }

    pub fn gamma(&self, mut idx: usize) -> DimVector {
        DimVector(
            self.bound
                .0
                .iter()
                .map(|&b| {
                    let r = b as usize + 1;
                    let x = idx % r;
                    idx /= r;
                    x as u32
                })
                .collect(),
        )
    }

    /// Every dimension vector in the box, in index order.
    pub fn iter(&self) -> impl Iterator<Item = DimVector> + '_ {
        (0..self.cells).map(|i| self.gamma(i))
    }
}

/// An element of the completed quantum algebra, truncated to a box: one
/// series per dimension vector in the box.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlgebraElement {
    bound: DimVector,
    terms: Vec<QSeries>,
}

/// First dimension vector and exponent where two elements disagree.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ElementDifference {
    pub gamma: DimVector,
    #[serde(flatten)]
    pub diff: SeriesDifference,
}

impl AlgebraElement {
    pub fn bound(&self) -> &DimVector {
        &self.bound
    }

    pub fn terms(&self) -> &[QSeries] {
        &self.terms
    }

    /// Smallest truncation order over all coefficients.
    pub fn certified_window(&self) -> i64 {
        self.terms.iter().map(QSeries::hi).min().unwrap_or(i64::MAX)
    }

    /// Compares coefficientwise on common windows, in box index order.
    pub fn first_difference(&self, other: &Self) -> Result<Option<ElementDifference>> {
        if self.bound != other.bound {
            return Err(Error::BoxMismatch);
        }
        let bx = TruncationBox::new(self.bound.clone());
        Ok(self
            .terms
            .iter()
            .zip(&other.terms)
            .enumerate()
            .find_map(|(i, (a, b))| a.first_difference(b).map(|diff| ElementDifference { gamma: bx.gamma(i), diff })))
    }

    /// Lowers every coefficient's truncation order to at most `hi`.
    pub fn truncate(&self, hi: i64) -> Self {
        Self { bound: self.bound.clone(), terms: self.terms.iter().map(|s| s.truncate(hi)).collect() }
    }

    /// JSON object mapping `"g1,g2,..."` to series, nonzero coefficients only.
    pub fn to_json(&self) -> Value {
        let bx = TruncationBox::new(self.bound.clone());
        let mut terms = Map::new();
        for (i, s) in self.terms.iter().enumerate() {
            if !s.is_zero() {
                terms.insert(bx.gamma(i).to_string(), s.to_json());
            }
        }
        serde_json::json!({
            "box": self.bound.to_string(),
            "certified_window": self.certified_window(),
            "terms": Value::Object(terms),
        })
    }
}

/// The quantum algebra of a quiver restricted to a truncation box.
#[derive(Clone, Debug)]
pub struct QuantumAlgebra {
    quiver: Quiver,
    lambda: Vec<Vec<i64>>,
    bx: TruncationBox,
}

impl QuantumAlgebra {
    pub fn new(quiver: Quiver, bound: DimVector) -> Result<Self> {
        if bound.len() != quiver.vertex_count() {
            return Err(Error::DimensionMismatch { expected: quiver.vertex_count(), found: bound.len() });
        }
        let lambda = quiver.lambda_matrix();
        Ok(Self { quiver, lambda, bx: TruncationBox::new(bound) })
    }

    pub fn quiver(&self) -> &Quiver {
        &self.quiver
    }

    pub fn truncation_box(&self) -> &TruncationBox {
        &self.bx
    }

    pub fn lambda(&self, g1: &DimVector, g2: &DimVector) -> i64 {
        let mut acc = 0;
        for (u, row) in self.lambda.iter().enumerate() {
            if g1[u] == 0 {
                continue;
            }
            let s: i64 = row.iter().zip(&g2.0).map(|(&l, &x)| l * x as i64).sum();
            acc += g1[u] as i64 * s;
        }
        acc
    }

    fn element(&self, terms: Vec<QSeries>) -> AlgebraElement {
        AlgebraElement { bound: self.bx.bound().clone(), terms }
    }

    pub fn zero(&self, hi: i64) -> AlgebraElement {
        self.element(vec![QSeries::zero(hi); self.bx.cells()])
    }

    pub fn unit(&self, hi: i64) -> AlgebraElement {
        let mut e = self.zero(hi);
        e.terms[0] = QSeries::one(hi);
        e
    }

    /// A monomial as an element; zero if it lies outside the box.
    pub fn from_monomial(&self, m: &Monomial, hi: i64) -> AlgebraElement {
        let mut e = self.zero(hi);
        if self.bx.contains(&m.gamma) {
            e.terms[self.bx.index(&m.gamma)] = QSeries::monomial(m.sign as i64, m.tpow, hi);
        }
        e
    }

    /// `sum_g c_g y_g` from explicit coefficients.
    pub fn from_terms(&self, terms: &[(DimVector, QSeries)], hi: i64) -> AlgebraElement {
        let mut e = self.zero(hi);
        for (g, s) in terms {
            if self.bx.contains(g) {
                let i = self.bx.index(g);
                e.terms[i] = e.terms[i].add(s);
            }
        }
        e
    }

    pub fn coeff<'a>(&self, e: &'a AlgebraElement, g: &DimVector) -> Option<&'a QSeries> {
        self.bx.contains(g).then(|| &e.terms[self.bx.index(g)])
    }

    fn check(&self, e: &AlgebraElement) -> Result<()> {
        if e.bound != *self.bx.bound() {
            return Err(Error::BoxMismatch);
        }
        Ok(())
    }

    /// The twisted convolution product, dropping terms outside the box.
    pub fn mul(&self, a: &AlgebraElement, b: &AlgebraElement) -> Result<AlgebraElement> {
        self.check(a)?;
        self.check(b)?;
        let terms = (0..self.bx.cells())
            .into_par_iter()
            .map(|i| {
                let g = self.bx.gamma(i);
                let sub = TruncationBox::new(g.clone());
                let mut acc: Option<QSeries> = None;
                for g1 in sub.iter() {
                    let g2 = g.checked_sub(&g1).expect("g1 <= g");
                    let (x, y) = (&a.terms[self.bx.index(&g1)], &b.terms[self.bx.index(&g2)]);
                    let mut p = x.mul(y);
                    if !g1.is_zero() && !g2.is_zero() {
                        p = p.neg().shift(self.lambda(&g1, &g2));
                    }
                    acc = Some(match acc {
                        None => p,
                        Some(s) => s.add(&p),
                    });
                }
                acc.expect("box cell has at least one splitting")
            })
            .collect();
        Ok(self.element(terms))
    }

    /// `y_beta^j` by repeated multiplication.
    pub fn power(&self, beta: &DimVector, j: u32, hi: i64) -> Result<AlgebraElement> {
        if beta.is_zero() {
            return Err(Error::ZeroVectorOperand);
        }
        let y = self.from_monomial(&Monomial::y(beta.clone()), hi);
        let mut acc = self.unit(hi);
        for _ in 0..j {
            acc = self.mul(&acc, &y)?;
        }
        Ok(acc)
    }

    /// `E(y_beta) = sum_j (-1)^j q^(j^2/2) P_j y_beta^j`, as a sum of
    /// basis elements: the coefficient of `y_(j beta)` is `-q^(j^2/2) P_j`
    /// for `j >= 1`.
    pub fn dilog(&self, beta: &DimVector, hi: i64) -> Result<AlgebraElement> {
        if beta.is_zero() {
            return Err(Error::ZeroVectorOperand);
        }
        let mut e = self.unit(hi);
        let mut j = 1u32;
        loop {
            let g = beta.scale(j);
            if !self.bx.contains(&g) {
                break;
            }
            let j2 = (j * j) as i64;
            e.terms[self.bx.index(&g)] = QSeries::monomial(-1, j2, hi).mul_poincare(j);
            j += 1;
        }
        Ok(e)
    }

    /// Right multiplication by `E(y_beta)` without forming the dilogarithm:
    /// `out[g] = a[g] + sum_j q^((j^2 + j lambda(g, beta))/2) P_j a[g - j beta]`,
    /// with `-q^(j^2/2) P_j a[0]` for the `g = j beta` term.
    pub fn mul_dilog(&self, a: &AlgebraElement, beta: &DimVector) -> Result<AlgebraElement> {
        self.check(a)?;
        if beta.is_zero() {
            return Err(Error::ZeroVectorOperand);
        }
        let w = self.twist_vector(beta);
        let step = self.bx.index(beta);
        let terms = (0..self.bx.cells())
            .into_par_iter()
            .map(|i| {
                let g = self.bx.gamma(i);
                let lam: i64 = g.0.iter().zip(&w).map(|(&x, &y)| x as i64 * y).sum();
                let mut out = a.terms[i].clone();
                let mut rest = g.clone();
                let mut j = 0u32;
                while let Some(r) = rest.checked_sub(beta) {
                    j += 1;
                    rest = r;
                    let src = &a.terms[i - j as usize * step];
                    let ji = j as i64;
                    let (shift, negate) = if rest.is_zero() { (ji * ji, true) } else { (ji * ji + ji * lam, false) };
                    let hi = out.hi().min(src.hi() + shift);
                    if src.is_zero() || src.lo() + shift > hi {
                        out = out.truncate(hi);
                        continue;
                    }
                    let mut term = src.truncate(hi - shift).shift(shift).mul_poincare(j);
                    if negate {
                        term = term.neg();
                    }
                    out += &term;
                }
                out
            })
            .collect();
        Ok(self.element(terms))
    }

    /// `w[u] = lambda(e_u, beta)`, so that `lambda(g, beta) = g . w`.
    fn twist_vector(&self, beta: &DimVector) -> Vec<i64> {
        self.lambda.iter().map(|row| row.iter().zip(&beta.0).map(|(&l, &b)| l * b as i64).sum()).collect()
    }

    /// Truncation orders that `ordered_dilog_product(factors, hi)` would
    /// produce, computed without touching coefficients.
    pub fn window_profile(&self, factors: &[DimVector], hi: i64) -> Vec<i64> {
        let mut his = vec![hi; self.bx.cells()];
        for beta in factors {
            let w = self.twist_vector(beta);
            let step = self.bx.index(beta);
            his = (0..self.bx.cells())
                .map(|i| {
                    let g = self.bx.gamma(i);
                    let lam: i64 = g.0.iter().zip(&w).map(|(&x, &y)| x as i64 * y).sum();
                    let mut out = his[i];
                    let mut rest = g;
                    let mut j = 0i64;
                    while let Some(r) = rest.checked_sub(beta) {
                        j += 1;
                        rest = r;
                        let shift = if rest.is_zero() { j * j } else { j * j + j * lam };
                        out = out.min(his[i - j as usize * step] + shift);
                    }
                    out
                })
                .collect();
        }
        his
    }

    /// `E(y_(b_1)) ... E(y_(b_k))` in the given order.
    pub fn ordered_dilog_product(&self, factors: &[DimVector], hi: i64) -> Result<AlgebraElement> {
        let mut acc = self.unit(hi);
        for beta in factors {
            acc = self.mul_dilog(&acc, beta)?;
        }
        Ok(acc)
    }

    /// Same product computed with the general convolution `mul`.
    pub fn ordered_dilog_product_naive(&self, factors: &[DimVector], hi: i64) -> Result<AlgebraElement> {
        let mut acc = self.unit(hi);
        for beta in factors {
            acc = self.mul(&acc, &self.dilog(beta, hi)?)?;
        }
        Ok(acc)
    }
}

/// `E(y_phi_1) ... E(y_phi_a)` for a validated order of grid roots.
pub fn grid_dilog_product(alg: &QuantumAlgebra, gq: &GridQuiver, ord: &RootOrder, hi: i64) -> Result<AlgebraElement> {
    if let Some(v) = validate_order(gq, ord)? {
        return Err(Error::InvalidOrder { first: v.first, second: v.second });
    }
    let factors: Vec<DimVector> = ord.sequence.iter().map(|r| r.dim_vector(gq)).collect();
    alg.ordered_dilog_product(&factors, hi)
}

/// `y_V^g` as a sequence: `(e_v, g(v))` for each `v` in `vertices`.
pub fn vertex_powers(len: usize, g: &DimVector, vertices: &[usize]) -> Vec<(DimVector, u32)> {
    vertices.iter().map(|&v| (DimVector::unit(len, v), g[v])).collect()
}

/// `(s_i, 2 p_i)` for a Kostant partition of one line: the sign exponent
/// `sum m_beta (|beta| - 1)` and the doubled `q`-exponent
/// `2 codim + sum_j g(j)^2 - sum_beta m_beta^2`.
pub fn predict_si_pi(kp: &KostantPartition) -> (u64, i64) {
    let parts = kp.parts();
    let s = parts.iter().map(|(iv, m)| *m as u64 * (iv.len() as u64 - 1)).sum();
    let g = kp.dim_vector();
    let m2: i64 = parts.iter().map(|(_, m)| (*m as i64).pow(2)).sum();
    let p2 = 2 * codim_orbit(kp) as i64 + g.sum_of_squares() - m2;
    (s, p2)
}

/// `(-1)^j q^(j^2/2) P_j`, the coefficient of `z^j` in `E(z)`.
pub fn dilog_coefficient(j: u32, hi: i64) -> QSeries {
    let sign = if j.is_multiple_of(2) { 1 } else { -1 };
    QSeries::monomial(BigInt::from(sign), (j * j) as i64, hi).mul_poincare(j)
}
