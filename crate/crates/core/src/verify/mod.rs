//! End-to-end identity checks with certified truncation windows.

mod betti;
mod props;

pub use betti::{betti_table, BettiColumn, BettiTable};
pub use props::{
    check_full_hhs_times_hts, check_rr_qalg_codim, check_switch_hh_ht, check_w_qalg, line_heads_tails, MonomialCheck,
};

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::qalgebra::{monomial_product_scalar, vertex_powers, AlgebraElement, QuantumAlgebra};
use crate::qseries::{ser_bigint, QSeries};
use crate::quiver::{Axis, DimVector, GridQuiver, Quiver};
use crate::roots::{canonical_order, random_order, validate_order, RootOrder};
use crate::strata::geometric_sum;

/// First coefficient at which the two sides of an identity differ.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Mismatch {
    pub gamma: String,
    /// Exponent of `t = q^(1/2)`.
    pub exponent: i64,
    #[serde(serialize_with = "ser_bigint")]
    pub lhs: BigInt,
    #[serde(serialize_with = "ser_bigint")]
    pub rhs: BigInt,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub context: Option<String>,
}

/// Outcome of an identity check, valid for the recorded box and window.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Verdict {
    pub identity: String,
    pub params: Value,
    pub passed: bool,
    pub mismatch: Option<Mismatch>,
    /// Every compared coefficient is exact up to `t^certified_window`.
    pub certified_window: i64,
}

impl Verdict {
    fn pass(identity: &str, params: Value, certified_window: i64) -> Self {
        Self { identity: identity.into(), params, passed: true, mismatch: None, certified_window }
    }

    fn fail(identity: &str, params: Value, mismatch: Mismatch, certified_window: i64) -> Self {
        Self { identity: identity.into(), params, passed: false, mismatch: Some(mismatch), certified_window }
    }

    pub fn to_json(&self) -> Value {
        serde_json::to_value(self).expect("verdicts serialize")
    }

    /// 0 on pass, 1 on mismatch.
    pub fn exit_code(&self) -> i32 {
        if self.passed {
            0
        } else {
            1
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = if self.passed { "PASS" } else { "FAIL" };
        write!(f, "{status} {} {} certified to t^{}", self.identity, self.params, self.certified_window)?;
        if let Some(m) = &self.mismatch {
            write!(f, "\n  first difference at y[{}] t^{}: lhs {} rhs {}", m.gamma, m.exponent, m.lhs, m.rhs)?;
            if let Some(c) = &m.context {
                write!(f, " ({c})")?;
            }
        }
        Ok(())
    }
}

fn element_mismatch(lhs: &AlgebraElement, rhs: &AlgebraElement, context: Option<String>) -> Result<Option<Mismatch>> {
    Ok(lhs.first_difference(rhs)?.map(|d| Mismatch {
        gamma: d.gamma.to_string(),
        exponent: d.diff.exponent,
        lhs: d.diff.left,
        rhs: d.diff.right,
        context,
    }))
}

fn series_mismatch(gamma: String, lhs: &QSeries, rhs: &QSeries, context: Option<String>) -> Option<Mismatch> {
    lhs.first_difference(rhs).map(|d| Mismatch { gamma, exponent: d.exponent, lhs: d.left, rhs: d.right, context })
}

/// Ordered product of dilogarithms with working precision raised so that
/// every coefficient in the box is exact up to at least `t^hi`.
pub fn certified_product(alg: &QuantumAlgebra, factors: &[DimVector], hi: i64) -> Result<AlgebraElement> {
    let low = alg.window_profile(factors, hi).into_iter().min().unwrap_or(hi);
    alg.ordered_dilog_product(factors, hi + (hi - low).max(0))
}

fn order_factors(gq: &GridQuiver, ord: &RootOrder) -> Result<Vec<DimVector>> {
    if let Some(v) = validate_order(gq, ord)? {
        return Err(Error::InvalidOrder { first: v.first, second: v.second });
    }
    Ok(ord.sequence.iter().map(|r| r.dim_vector(gq)).collect())
}

/// Which root orders a theorem check uses.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Orders {
    Canonical,
    /// The canonical orders plus `count` random valid orders per side.
    Random {
        count: usize,
        seed: u64,
    },
}

impl FromStr for Orders {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidArgument(format!("orders must be `canonical` or `random:R[:SEED]`, got {s:?}"));
        if s == "canonical" {
            return Ok(Orders::Canonical);
        }
        let mut parts = s.split(':');
        if parts.next() != Some("random") {
            return Err(bad());
        }
        let count = parts.next().and_then(|c| c.parse().ok()).ok_or_else(bad)?;
        let seed = match parts.next() {
            Some(x) => x.parse().map_err(|_| bad())?,
            None => 0,
        };
        if parts.next().is_some() {
            return Err(bad());
        }
        Ok(Orders::Random { count, seed })
    }
}

impl fmt::Display for Orders {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Orders::Canonical => f.write_str("canonical"),
            Orders::Random { count, seed } => write!(f, "random:{count}:{seed}"),
        }
    }
}

fn grid_algebra(n: usize, nprime: usize, bound: &DimVector) -> Result<(GridQuiver, QuantumAlgebra)> {
    let gq = GridQuiver::square_product(n, nprime)?;
    let alg = QuantumAlgebra::new(gq.base().clone(), bound.clone())?;
    Ok((gq, alg))
}

/// Horizontal and vertical ordered products of `A_n □ A_n'` agree on the box
/// up to `t^hi`, using the canonical orders.
pub fn check_theorem_mt(n: usize, nprime: usize, bound: &DimVector, hi: i64) -> Result<Verdict> {
    check_theorem_mt_with(n, nprime, bound, hi, Orders::Canonical)
}

/// Like [`check_theorem_mt`], additionally comparing the products of random
/// valid orders on both sides against the canonical horizontal product.
pub fn check_theorem_mt_with(n: usize, nprime: usize, bound: &DimVector, hi: i64, orders: Orders) -> Result<Verdict> {
    let (gq, alg) = grid_algebra(n, nprime, bound)?;
    let params = json!({
        "n": n, "nprime": nprime, "box": bound.to_string(), "window": hi, "orders": orders.to_string(),
    });
    let lhs = certified_product(&alg, &order_factors(&gq, &canonical_order(&gq, Axis::Horizontal))?, hi)?;
    let rhs = certified_product(&alg, &order_factors(&gq, &canonical_order(&gq, Axis::Vertical))?, hi)?;
    let mut window = lhs.certified_window().min(rhs.certified_window());
    if let Some(m) = element_mismatch(&lhs, &rhs, None)? {
        return Ok(Verdict::fail("theorem-mt", params, m, window));
    }
    if let Orders::Random { count, seed } = orders {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for r in 0..count {
            for axis in [Axis::Horizontal, Axis::Vertical] {
                let ord = random_order(&gq, axis, &mut rng);
                let other = certified_product(&alg, &order_factors(&gq, &ord)?, hi)?;
                window = window.min(other.certified_window());
                let context = Some(format!("random {axis} order {r}"));
                if let Some(m) = element_mismatch(&lhs, &other, context)? {
                    return Ok(Verdict::fail("theorem-mt", params, m, window));
                }
            }
        }
    }
    Ok(Verdict::pass("theorem-mt", params, window))
}

/// The common value of both sides of the main identity, computed from the
/// horizontal side after checking it against the vertical side.
pub fn dt_invariant(n: usize, nprime: usize, bound: &DimVector, hi: i64) -> Result<AlgebraElement> {
    let (gq, alg) = grid_algebra(n, nprime, bound)?;
    let lhs = certified_product(&alg, &order_factors(&gq, &canonical_order(&gq, Axis::Horizontal))?, hi)?;
    let rhs = certified_product(&alg, &order_factors(&gq, &canonical_order(&gq, Axis::Vertical))?, hi)?;
    if lhs.first_difference(&rhs)?.is_some() {
        return Err(Error::IdentityMismatch(format!("theorem-mt for n={n}, n'={nprime}, box {bound}")));
    }
    Ok(lhs)
}

/// Two ordered dilogarithm products over an arbitrary quiver, compared on the
/// box up to `t^hi`.
pub fn check_product_identity(
    quiver: &Quiver,
    bound: &DimVector,
    lhs: &[DimVector],
    rhs: &[DimVector],
    hi: i64,
) -> Result<Verdict> {
    let list = |fs: &[DimVector]| fs.iter().map(ToString::to_string).collect::<Vec<_>>().join("/");
    let params = json!({
        "vertices": quiver.vertex_count(),
        "arrows": quiver.arrows().iter().map(|(t, h)| format!("{}>{}", t + 1, h + 1)).collect::<Vec<_>>().join(","),
        "box": bound.to_string(),
        "lhs": list(lhs),
        "rhs": list(rhs),
        "window": hi,
    });
    if let Some(z) = lhs.iter().chain(rhs).find(|f| f.is_zero()) {
        return Err(Error::InvalidArgument(format!("factor {z} is zero")));
    }
    let alg = QuantumAlgebra::new(quiver.clone(), bound.clone())?;
    let l = certified_product(&alg, lhs, hi)?;
    let r = certified_product(&alg, rhs, hi)?;
    let window = l.certified_window().min(r.certified_window());
    Ok(match element_mismatch(&l, &r, None)? {
        Some(m) => Verdict::fail("product-identity", params, m, window),
        None => Verdict::pass("product-identity", params, window),
    })
}

/// `A_2` with its arrow `2 -> 1`, the orientation for which
/// `E(y_1)E(y_2) = E(y_2)E(y_12)E(y_1)`.
pub fn pentagon_quiver() -> Quiver {
    Quiver::new(2, vec![(1, 0)]).expect("valid quiver")
}

/// All `(m10, m01, m11)` with `m10 + m11 = g1` and `m01 + m11 = g2`.
pub fn triples(g1: u32, g2: u32) -> impl Iterator<Item = (u32, u32, u32)> {
    (0..=g1.min(g2)).map(move |m11| (g1 - m11, g2 - m11, m11))
}

/// Right side of the pentagon coefficient identity:
/// `sum q^(m10 m01) P_m10 P_m01 P_m11`.
pub fn pentagon_sum(g1: u32, g2: u32, hi: i64) -> QSeries {
    triples(g1, g2).fold(QSeries::zero(hi), |acc, (a, b, c)| {
        let shift = 2 * (a * b) as i64;
        acc.add(&QSeries::monomial(1, shift, hi).mul_poincare(a).mul_poincare(b).mul_poincare(c))
    })
}

/// The pentagon identity in the `A_2` algebra on the box, and its
/// coefficient form `P_g1 P_g2 = sum q^(m10 m01) P_m10 P_m01 P_m11` for all
/// `(g1, g2)` in the box.
pub fn check_pentagon(bound: &DimVector, hi: i64) -> Result<Verdict> {
    if bound.len() != 2 {
        return Err(Error::DimensionMismatch { expected: 2, found: bound.len() });
    }
    let params = json!({ "box": bound.to_string(), "window": hi });
    let alg = QuantumAlgebra::new(pentagon_quiver(), bound.clone())?;
    let (y1, y2, y12) = (DimVector(vec![1, 0]), DimVector(vec![0, 1]), DimVector(vec![1, 1]));
    let mut work = hi;
    let (lhs, rhs) = loop {
        let e = |b: &DimVector| alg.dilog(b, work);
        let lhs = alg.mul(&e(&y1)?, &e(&y2)?)?;
        let rhs = alg.mul(&alg.mul(&e(&y2)?, &e(&y12)?)?, &e(&y1)?)?;
        let low = lhs.certified_window().min(rhs.certified_window());
        if low >= hi || work - hi > 4 * hi.abs() + 64 {
            break (lhs, rhs);
        }
        work += hi - low;
    };
    let mut window = lhs.certified_window().min(rhs.certified_window());
    if let Some(m) = element_mismatch(&lhs, &rhs, Some("algebra form".into()))? {
        return Ok(Verdict::fail("pentagon", params, m, window));
    }
    for g1 in 0..=bound[0] {
        for g2 in 0..=bound[1] {
            let left = QSeries::one(hi).mul_poincare(g1).mul_poincare(g2);
            let right = pentagon_sum(g1, g2, hi);
            window = window.min(left.hi()).min(right.hi());
            if let Some(m) = series_mismatch(format!("{g1},{g2}"), &left, &right, Some("q-series form".into())) {
                return Ok(Verdict::fail("pentagon", params, m, window));
            }
        }
    }
    Ok(Verdict::pass("pentagon", params, window))
}

/// One side of the 55-term identities: a sum over pairs of triples
/// `(m) ⊢ a`, `(n) ⊢ b` of `q^(m10 m01 + n10 n01 [+ m11 n11])` times six
/// Poincaré series; the bracketed term is present when `keller` is set.
pub fn fifty_five_side(a: (u32, u32), b: (u32, u32), keller: bool, hi: i64) -> QSeries {
    let mut acc = QSeries::zero(hi);
    for (m10, m01, m11) in triples(a.0, a.1) {
        for (n10, n01, n11) in triples(b.0, b.1) {
            let mut e = m10 * m01 + n10 * n01;
            if keller {
                e += m11 * n11;
            }
            let term = [m10, m01, m11, n10, n01, n11]
                .into_iter()
                .fold(QSeries::monomial(1, 2 * e as i64, hi), QSeries::mul_poincare);
            acc += &term;
        }
    }
    acc
}

/// Both sides of the Keller 55-term identity for `(g1, g2, g3, g4)`, each also
/// compared with the stratum sum of the corresponding axis of `A_2 □ A_2`.
pub fn check_55_keller(g: [u32; 4], hi: i64) -> Result<Verdict> {
    let params = json!({ "gamma": format!("{},{},{},{}", g[0], g[1], g[2], g[3]), "window": hi });
    let gamma = DimVector(g.to_vec());
    let label = gamma.to_string();
    let lhs = fifty_five_side((g[0], g[1]), (g[2], g[3]), true, hi);
    let rhs = fifty_five_side((g[0], g[2]), (g[1], g[3]), true, hi);
    let mut window = lhs.hi().min(rhs.hi());
    if let Some(m) = series_mismatch(label.clone(), &lhs, &rhs, None) {
        return Ok(Verdict::fail("keller55", params, m, window));
    }
    let s = GridQuiver::square_product(2, 2)?;
    for (axis, side) in [(Axis::Horizontal, &lhs), (Axis::Vertical, &rhs)] {
        let geo = geometric_sum(&s, &gamma, axis, hi);
        window = window.min(geo.hi());
        if let Some(m) = series_mismatch(label.clone(), side, &geo, Some(format!("{axis} stratum sum"))) {
            return Ok(Verdict::fail("keller55", params, m, window));
        }
    }
    Ok(Verdict::pass("keller55", params, window))
}

/// `(-1)^s t^(-2 hip + sum g^2) * (y_HorH^g y_HorT^g)` as a sign and a
/// `t`-exponent, `s = sum g`.
pub fn coefficient_prefactor(gq: &GridQuiver, gamma: &DimVector) -> Result<(i8, i64)> {
    let forms = gq.quadratic_forms(gamma)?;
    let len = gq.vertex_count();
    let mut seq = vertex_powers(len, gamma, &gq.hor_heads());
    seq.extend(vertex_powers(len, gamma, &gq.hor_tails()));
    let m = monomial_product_scalar(gq.base(), &seq)?;
    let sign = if gamma.total().is_multiple_of(2) { m.sign } else { -m.sign };
    Ok((sign, -2 * forms.hip + gamma.sum_of_squares() + m.tpow))
}

/// The coefficient of `y_gamma` in the canonical ordered product of `axis`
/// against the prefactor times the stratum sum of that axis.
pub fn coefficient_crosscheck(
    gq: &GridQuiver,
    gamma: &DimVector,
    axis: Axis,
    bound: &DimVector,
    hi: i64,
) -> Result<Verdict> {
    if !gamma.le(bound) {
        return Err(Error::InvalidArgument(format!("gamma {gamma} is outside the box {bound}")));
    }
    let params = json!({
        "n": gq.n(), "nprime": gq.nprime(), "gamma": gamma.to_string(), "axis": axis.to_string(),
        "box": bound.to_string(), "window": hi,
    });
    let alg = QuantumAlgebra::new(gq.base().clone(), bound.clone())?;
    let product = certified_product(&alg, &order_factors(gq, &canonical_order(gq, axis))?, hi)?;
    let coeff = alg.coeff(&product, gamma).expect("gamma in box").clone();
    let (sign, shift) = coefficient_prefactor(gq, gamma)?;
    let mut predicted = geometric_sum(gq, gamma, axis, hi - shift).shift(shift);
    if sign < 0 {
        predicted = predicted.neg();
    }
    let window = coeff.hi().min(predicted.hi());
    Ok(match series_mismatch(gamma.to_string(), &coeff, &predicted, None) {
        Some(m) => Verdict::fail("coefficient-crosscheck", params, m, window),
        None => Verdict::pass("coefficient-crosscheck", params, window),
    })
}
