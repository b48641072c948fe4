use std::fmt::Write as _;

use num_bigint::BigInt;
use num_traits::Zero;
use serde::Serialize;
use serde_json::{json, Value};

use crate::qseries::bigint_value;
use crate::quiver::{Axis, DimVector, GridQuiver};
use crate::strata::{poincare_stratum, stratum_table};

/// One stratum's column: coefficients of `q^(w + codim) P_stratum` by
/// `q`-degree.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BettiColumn {
    pub axis: Axis,
    pub id: String,
    pub label: String,
    pub codim: u64,
    pub w: u64,
    pub poincare: String,
    #[serde(skip)]
    pub entries: Vec<BigInt>,
}

/// Per-stratum Betti columns of both stratifications, rows indexed by
/// `q`-degree `0..=max_degree`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BettiTable {
    pub gamma: DimVector,
    pub max_degree: usize,
    pub columns: Vec<BettiColumn>,
    pub horizontal_total: Vec<BigInt>,
    pub vertical_total: Vec<BigInt>,
}

/// Betti table of `gamma` on `gq` with rows up to `q^(hi/2)`; columns are
/// horizontal strata then vertical strata, each in table order.
pub fn betti_table(gq: &GridQuiver, gamma: &DimVector, hi: i64) -> BettiTable {
    let max_degree = (hi.max(0) / 2) as usize;
    let mut columns = Vec::new();
    let mut totals = [vec![BigInt::zero(); max_degree + 1], vec![BigInt::zero(); max_degree + 1]];
    for (a, axis) in [Axis::Horizontal, Axis::Vertical].into_iter().enumerate() {
        for info in stratum_table(gq, gamma, axis) {
            let shift = info.shift();
            let series = poincare_stratum(&info.stratum, hi - shift).shift(shift);
            let entries: Vec<BigInt> =
                (0..=max_degree).map(|d| series.coeff(2 * d as i64).unwrap_or_default()).collect();
            for (t, e) in totals[a].iter_mut().zip(&entries) {
                *t += e;
            }
            columns.push(BettiColumn {
                axis,
                label: info.stratum.hexagon().unwrap_or_else(|| info.id.clone()),
                id: info.id,
                codim: info.codim,
                w: info.w,
                poincare: info.poincare,
                entries,
            });
        }
    }
    let [horizontal_total, vertical_total] = totals;
    BettiTable { gamma: gamma.clone(), max_degree, columns, horizontal_total, vertical_total }
}

impl BettiTable {
    /// Whether both stratifications give the same row sums.
    pub fn totals_agree(&self) -> bool {
        self.horizontal_total == self.vertical_total
    }

    pub fn column(&self, axis: Axis, label: &str) -> Option<&BettiColumn> {
        self.columns.iter().find(|c| c.axis == axis && (c.label == label || c.id == label))
    }

    /// Header `degree,<stratum ids...>,total`; one row per `q`-degree.
    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        let mut header = vec!["degree".to_string()];
        header.extend(self.columns.iter().map(|c| c.id.clone()));
        header.push("total".into());
        w.write_record(&header).expect("write to memory");
        for d in 0..=self.max_degree {
            let mut row = vec![d.to_string()];
            row.extend(self.columns.iter().map(|c| c.entries[d].to_string()));
            row.push(self.horizontal_total[d].to_string());
            w.write_record(&row).expect("write to memory");
        }
        String::from_utf8(w.into_inner().expect("flush to memory")).expect("ascii")
    }

    /// Rows from the highest degree down, horizontal columns on the left,
    /// the total in the middle and vertical columns on the right.
    pub fn to_pretty(&self) -> String {
        let hor: Vec<&BettiColumn> = self.columns.iter().filter(|c| c.axis == Axis::Horizontal).collect();
        let ver: Vec<&BettiColumn> = self.columns.iter().filter(|c| c.axis == Axis::Vertical).collect();
        let width = self
            .columns
            .iter()
            .map(|c| c.label.len())
            .chain(self.horizontal_total.iter().map(|t| t.to_string().len()))
            .max()
            .unwrap_or(1)
            .max(5);
        let cell = |s: &str| format!("{s:>width$}");
        let mut out = String::new();
        let mut header = vec![cell("q^")];
        header.extend(hor.iter().map(|c| cell(&c.label)));
        header.push(cell("total"));
        header.extend(ver.iter().map(|c| cell(&c.label)));
        writeln!(out, "{}", header.join(" ")).unwrap();
        for d in (0..=self.max_degree).rev() {
            let show = |e: &BigInt| if e.is_zero() { cell(".") } else { cell(&e.to_string()) };
            let mut row = vec![cell(&d.to_string())];
            row.extend(hor.iter().map(|c| show(&c.entries[d])));
            row.push(cell(&self.horizontal_total[d].to_string()));
            row.extend(ver.iter().map(|c| show(&c.entries[d])));
            writeln!(out, "{}", row.join(" ")).unwrap();
        }
        out
    }

    pub fn to_json(&self) -> Value {
        let ints = |v: &[BigInt]| Value::Array(v.iter().map(bigint_value).collect());
        let columns: Vec<Value> = self
            .columns
            .iter()
            .map(|c| {
                let mut v = serde_json::to_value(c).expect("columns serialize");
                v["entries"] = ints(&c.entries);
                v
            })
            .collect();
        json!({
            "gamma": self.gamma.to_string(),
            "max_degree": self.max_degree,
            "columns": columns,
            "total": ints(&self.horizontal_total),
            "vertical_total": ints(&self.vertical_total),
            "totals_agree": self.totals_agree(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn square_totals() {
        let s = GridQuiver::square_product(2, 2).unwrap();
        let t = betti_table(&s, &DimVector(vec![2, 2, 1, 1]), 12);
        let want: Vec<BigInt> = [0, 1, 6, 18, 43, 87, 160].into_iter().map(BigInt::from).collect();
        assert_eq!(t.horizontal_total, want);
        assert!(t.totals_agree());
        assert_eq!(t.columns.len(), 10);
        let csv = t.to_csv();
        assert_eq!(csv.lines().count(), 8);
        assert!(csv.lines().last().unwrap().ends_with(",160"));
    }
}
