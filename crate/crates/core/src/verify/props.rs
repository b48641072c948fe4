//! Normal-ordering identities in the quantum algebra, each evaluated as an
//! equality of two monomials.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::qalgebra::{monomial_product_scalar, predict_si_pi, vertex_powers, Monomial};
use crate::quiver::{Axis, DimVector, GridQuiver, VertexClass};
use crate::roots::{validate_order, GridRoot, RootOrder};
use crate::strata::{w_shift, KostantPartition, Stratum};

/// Both sides of a monomial identity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonomialCheck {
    pub lhs: Monomial,
    pub rhs: Monomial,
}

impl MonomialCheck {
    pub fn holds(&self) -> bool {
        self.lhs == self.rhs
    }
}

fn head_class(axis: Axis) -> VertexClass {
    match axis {
        Axis::Horizontal => VertexClass::HorH,
        Axis::Vertical => VertexClass::HorT,
    }
}

/// Heads and tails (sinks and sources) of one line, as grid vertices.
pub fn line_heads_tails(gq: &GridQuiver, axis: Axis, line: usize) -> (Vec<usize>, Vec<usize>) {
    let vs: Vec<usize> = (1..=gq.line_len(axis)).map(|p| gq.line_vertex(axis, line, p)).collect();
    let head = head_class(axis);
    vs.into_iter().partition(|&v| gq.class(v) == head)
}

/// `y_Heads^g y_Tails^g` over a set of heads and tails.
fn heads_tails_seq(gq: &GridQuiver, g: &DimVector, heads: &[usize], tails: &[usize]) -> Vec<(DimVector, u32)> {
    let len = gq.vertex_count();
    let mut seq = vertex_powers(len, g, heads);
    seq.extend(vertex_powers(len, g, tails));
    seq
}

fn check_axis_order(gq: &GridQuiver, ord: &RootOrder, axis: Axis) -> Result<()> {
    if ord.axis != axis {
        return Err(Error::AxisMismatch);
    }
    if let Some(v) = validate_order(gq, ord)? {
        return Err(Error::InvalidOrder { first: v.first, second: v.second });
    }
    Ok(())
}

/// Powers of the roots of a line in the order induced by `ord`, against
/// `(-1)^s q^p y_Heads(line)^g y_Tails(line)^g` with `(s, 2p)` from
/// [`predict_si_pi`].
pub fn check_rr_qalg_codim(
    gq: &GridQuiver,
    ord: &RootOrder,
    line: usize,
    kp: &KostantPartition,
) -> Result<MonomialCheck> {
    let axis = ord.axis;
    check_axis_order(gq, ord, axis)?;
    if *kp.orientation() != gq.line_quiver(axis, line) {
        return Err(Error::InvalidArgument(format!("partition is not on {axis} line {line}")));
    }
    let seq: Vec<(DimVector, u32)> =
        ord.sequence.iter().filter(|r| r.line == line).map(|r| (r.dim_vector(gq), kp.mult_of(&r.interval))).collect();
    let lhs = monomial_product_scalar(gq.base(), &seq)?;
    let g: DimVector = seq.iter().fold(DimVector::zeros(gq.vertex_count()), |acc, (b, m)| acc.add(&b.scale(*m)));
    let (heads, tails) = line_heads_tails(gq, axis, line);
    let (s, p2) = predict_si_pi(kp);
    let sign = if s % 2 == 0 { 1 } else { -1 };
    let rhs = monomial_product_scalar(gq.base(), &heads_tails_seq(gq, &g, &heads, &tails))?.scaled(sign, p2);
    Ok(MonomialCheck { lhs, rhs })
}

/// `q^up y_HorH^g y_HorT^g` against the line-by-line product
/// `y_HorH(1)^g y_HorT(1)^g ... y_HorH(n)^g y_HorT(n)^g`; for the vertical
/// axis `left`, `VerH` and `VerT` take their places.
pub fn check_full_hhs_times_hts(gq: &GridQuiver, g: &DimVector, axis: Axis) -> Result<MonomialCheck> {
    let forms = gq.quadratic_forms(g)?;
    let (heads, tails, shift) = match axis {
        Axis::Horizontal => (gq.hor_heads(), gq.hor_tails(), forms.up),
        Axis::Vertical => (gq.ver_heads(), gq.ver_tails(), forms.left),
    };
    let lhs = monomial_product_scalar(gq.base(), &heads_tails_seq(gq, g, &heads, &tails))?.scaled(1, 2 * shift);
    let mut seq = Vec::new();
    for line in 1..=gq.line_count(axis) {
        let (h, t) = line_heads_tails(gq, axis, line);
        seq.extend(heads_tails_seq(gq, g, &h, &t));
    }
    let rhs = monomial_product_scalar(gq.base(), &seq)?;
    Ok(MonomialCheck { lhs, rhs })
}

/// `prod y_beta^(m_beta)` in the order `ord` against
/// `q^(down + w)` (rows) or `q^(right + w)` (columns) times the product of
/// the line-wise products, each in its induced order.
pub fn check_w_qalg(gq: &GridQuiver, s: &Stratum, ord: &RootOrder) -> Result<MonomialCheck> {
    check_axis_order(gq, ord, s.axis)?;
    let mult: HashMap<GridRoot, u32> = s.roots().into_iter().collect();
    let power = |r: &GridRoot| (r.dim_vector(gq), mult.get(r).copied().unwrap_or(0));
    let lhs = monomial_product_scalar(gq.base(), &ord.sequence.iter().map(power).collect::<Vec<_>>())?;
    let mut by_line: Vec<&GridRoot> = ord.sequence.iter().collect();
    by_line.sort_by_key(|r| r.line);
    let rhs = monomial_product_scalar(gq.base(), &by_line.into_iter().map(power).collect::<Vec<_>>())?;
    let forms = gq.quadratic_forms(&s.dim_vector(gq))?;
    let base = match s.axis {
        Axis::Horizontal => forms.down,
        Axis::Vertical => forms.right,
    };
    let rhs = rhs.scaled(1, 2 * (base + w_shift(gq, s) as i64));
    Ok(MonomialCheck { lhs, rhs })
}

/// `y_VerH^g y_VerT^g` against `q^(vip - hip) y_HorH^g y_HorT^g`.
pub fn check_switch_hh_ht(gq: &GridQuiver, g: &DimVector) -> Result<MonomialCheck> {
    let forms = gq.quadratic_forms(g)?;
    let lhs = monomial_product_scalar(gq.base(), &heads_tails_seq(gq, g, &gq.ver_heads(), &gq.ver_tails()))?;
    let rhs = monomial_product_scalar(gq.base(), &heads_tails_seq(gq, g, &gq.hor_heads(), &gq.hor_tails()))?
        .scaled(1, 2 * (forms.vip - forms.hip));
    Ok(MonomialCheck { lhs, rhs })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::roots::canonical_order;
    use crate::strata::enumerate_strata;

    #[test]
    fn square_identities() {
        let s = GridQuiver::square_product(2, 2).unwrap();
        let g = DimVector(vec![2, 2, 1, 1]);
        assert!(check_switch_hh_ht(&s, &g).unwrap().holds());
        for axis in [Axis::Horizontal, Axis::Vertical] {
            assert!(check_full_hhs_times_hts(&s, &g, axis).unwrap().holds());
            let ord = canonical_order(&s, axis);
            for st in enumerate_strata(&s, &g, axis) {
                assert!(check_w_qalg(&s, &st, &ord).unwrap().holds(), "{st}");
                for (i, kp) in st.parts.iter().enumerate() {
                    assert!(check_rr_qalg_codim(&s, &ord, i + 1, kp).unwrap().holds(), "{st} line {}", i + 1);
                }
            }
        }
    }
}
