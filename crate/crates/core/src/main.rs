use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use qdilog::quiver::{Axis, DimVector, GridQuiver, LineQuiver, Quiver};
use qdilog::roots::{canonical_order, order_matrix_axis, rho};
use qdilog::strata::{normal_form, stratum_table, KostantPartition};
use qdilog::verify::{
    betti_table, check_55_keller, check_pentagon, check_product_identity, check_theorem_mt_with,
    coefficient_crosscheck, dt_invariant, Orders, Verdict,
};
use qdilog::Error;

/// `print!` that exits quietly once stdout is closed, e.g. by `head`.
macro_rules! out {
    ($($arg:tt)*) => {{
        use std::io::Write;
        if write!(std::io::stdout(), $($arg)*).is_err() {
            std::process::exit(0);
        }
    }};
}

macro_rules! outln {
    ($($arg:tt)*) => {{
        use std::io::Write;
        if writeln!(std::io::stdout(), $($arg)*).is_err() {
            std::process::exit(0);
        }
    }};
}

#[derive(Parser)]
#[command(
    name = "qdilog",
    version,
    about = "Exact checks of quantum dilogarithm identities for square products of type A quivers"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Pretty,
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Compare the horizontal and vertical dilogarithm products of A_n □ A_n'.
    VerifyMt {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        nprime: usize,
        /// Truncation box, one entry per vertex in row-major order.
        #[arg(long = "box")]
        bound: String,
        /// Compare coefficients up to t^K, t = q^(1/2).
        #[arg(long)]
        window: i64,
        /// `canonical` or `random:R[:SEED]`.
        #[arg(long, default_value = "canonical")]
        orders: String,
        #[arg(long, value_enum, default_value = "pretty")]
        format: Format,
    },
    /// The pentagon identity in the A_2 algebra and as q-series identities.
    Pentagon {
        #[arg(long = "box", default_value = "8,8")]
        bound: String,
        #[arg(long, default_value_t = 40)]
        window: i64,
        #[arg(long, value_enum, default_value = "pretty")]
        format: Format,
    },
    /// Two ordered dilogarithm products over any quiver.
    Compare {
        #[arg(long)]
        vertices: usize,
        /// Arrows as `tail>head`, 1-based, e.g. `2>1,2>3`.
        #[arg(long, default_value = "")]
        arrows: String,
        #[arg(long = "box")]
        bound: String,
        /// Factors of the left side in order, separated by `/`, e.g. `1,0/0,1`.
        #[arg(long)]
        lhs: String,
        #[arg(long)]
        rhs: String,
        #[arg(long, default_value_t = 20)]
        window: i64,
        #[arg(long, value_enum, default_value = "pretty")]
        format: Format,
    },
    /// Both sides of the Keller 55-term identity for one dimension vector.
    Keller55 {
        #[arg(long)]
        gamma: String,
        #[arg(long, default_value_t = 30)]
        window: i64,
        #[arg(long, value_enum, default_value = "pretty")]
        format: Format,
    },
    /// Coefficient of y_gamma against the stratum sum with its prefactor.
    Crosscheck {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        nprime: usize,
        #[arg(long)]
        gamma: String,
        #[arg(long, default_value = "horizontal")]
        axis: String,
        #[arg(long, default_value_t = 30)]
        window: i64,
        #[arg(long, value_enum, default_value = "pretty")]
        format: Format,
    },
    /// Betti table of the horizontal and vertical strata.
    Betti {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        nprime: usize,
        #[arg(long)]
        gamma: String,
        #[arg(long, default_value_t = 12)]
        window: i64,
        #[arg(long, value_enum, default_value = "pretty")]
        format: Format,
    },
    /// The common value of both products as JSON.
    Dt {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        nprime: usize,
        #[arg(long = "box")]
        bound: String,
        #[arg(long)]
        window: i64,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Strata of a dimension vector with codimension, w and Poincaré series.
    Strata {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        nprime: usize,
        #[arg(long)]
        gamma: String,
        /// Restrict to one axis; both by default.
        #[arg(long)]
        axis: Option<String>,
        #[arg(long, value_enum, default_value = "pretty")]
        format: Format,
    },
    /// Canonical root order and the order matrix of every line.
    Roots {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        nprime: usize,
        #[arg(long, default_value = "horizontal")]
        axis: String,
        #[arg(long, value_enum, default_value = "pretty")]
        format: Format,
    },
    /// Normal-form matrices of a type-A orbit.
    NormalForm {
        /// Arrow directions like `rrl` for 1 -> 2 -> 3 <- 4.
        #[arg(long)]
        orientation: String,
        /// Expected dimension vector, checked against the partition.
        #[arg(long)]
        gamma: Option<String>,
        /// `1-4:2,1-2:1,...` or a full multiplicity list in lexicographic order.
        #[arg(long)]
        kostant: String,
        #[arg(long, value_enum, default_value = "pretty")]
        format: Format,
    },
    /// The square-product quiver as JSON.
    Quiver {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        nprime: usize,
    },
}

enum Outcome {
    Done,
    Mismatch,
}

fn dim(s: &str) -> anyhow::Result<DimVector> {
    s.parse::<DimVector>().with_context(|| format!("bad dimension vector {s:?}"))
}

fn arrow_list(vertices: usize, s: &str) -> anyhow::Result<Quiver> {
    let mut arrows = Vec::new();
    for a in s.split(',').map(str::trim).filter(|a| !a.is_empty()) {
        let (t, h) = a.split_once('>').with_context(|| format!("arrow {a:?} is not `tail>head`"))?;
        let (t, h): (usize, usize) = (t.trim().parse()?, h.trim().parse()?);
        if !(1..=vertices).contains(&t) || !(1..=vertices).contains(&h) {
            bail!("arrow {a:?} needs vertices in 1..={vertices}");
        }
        arrows.push((t - 1, h - 1));
    }
    Ok(Quiver::new(vertices, arrows)?)
}

fn factor_list(s: &str) -> anyhow::Result<Vec<DimVector>> {
    s.split('/').map(dim).collect()
}

fn verdict_out(v: &Verdict, format: Format) -> Outcome {
    match format {
        Format::Json => outln!("{}", serde_json::to_string_pretty(&v.to_json()).unwrap()),
        _ => outln!("{v}"),
    }
    if v.passed {
        Outcome::Done
    } else {
        Outcome::Mismatch
    }
}

fn run(cmd: Command) -> anyhow::Result<Outcome> {
    match cmd {
        Command::VerifyMt { n, nprime, bound, window, orders, format } => {
            let orders: Orders = orders.parse()?;
            let v = check_theorem_mt_with(n, nprime, &dim(&bound)?, window, orders)?;
            Ok(verdict_out(&v, format))
        }
        Command::Pentagon { bound, window, format } => Ok(verdict_out(&check_pentagon(&dim(&bound)?, window)?, format)),
        Command::Compare { vertices, arrows, bound, lhs, rhs, window, format } => {
            let q = arrow_list(vertices, &arrows)?;
            let (bound, lhs, rhs) = (dim(&bound)?, factor_list(&lhs)?, factor_list(&rhs)?);
            if let Some(f) = std::iter::once(&bound).chain(&lhs).chain(&rhs).find(|f| f.len() != vertices) {
                return Err(Error::DimensionMismatch { expected: vertices, found: f.len() }.into());
            }
            Ok(verdict_out(&check_product_identity(&q, &bound, &lhs, &rhs, window)?, format))
        }
        Command::Keller55 { gamma, window, format } => {
            let g = dim(&gamma)?;
            let Ok(g) = <[u32; 4]>::try_from(g.0.as_slice()) else {
                bail!("keller55 needs four entries, got {gamma:?}");
            };
            Ok(verdict_out(&check_55_keller(g, window)?, format))
        }
        Command::Crosscheck { n, nprime, gamma, axis, window, format } => {
            let gq = GridQuiver::square_product(n, nprime)?;
            let g = dim(&gamma)?;
            let axis: Axis = axis.parse()?;
            Ok(verdict_out(&coefficient_crosscheck(&gq, &g, axis, &g, window)?, format))
        }
        Command::Betti { n, nprime, gamma, window, format } => {
            let gq = GridQuiver::square_product(n, nprime)?;
            let g = dim(&gamma)?;
            if g.len() != gq.vertex_count() {
                return Err(Error::DimensionMismatch { expected: gq.vertex_count(), found: g.len() }.into());
            }
            let table = betti_table(&gq, &g, window);
            match format {
                Format::Csv => out!("{}", table.to_csv()),
                Format::Json => outln!("{}", serde_json::to_string_pretty(&table.to_json()).unwrap()),
                Format::Pretty => out!("{}", table.to_pretty()),
            }
            Ok(if table.totals_agree() { Outcome::Done } else { Outcome::Mismatch })
        }
        Command::Dt { n, nprime, bound, window, format } => {
            if format != Format::Json {
                bail!("dt only supports --format json");
            }
            match dt_invariant(n, nprime, &dim(&bound)?, window) {
                Ok(e) => {
                    outln!("{}", serde_json::to_string_pretty(&e.to_json()).unwrap());
                    Ok(Outcome::Done)
                }
                Err(e @ Error::IdentityMismatch(_)) => {
                    eprintln!("{e}");
                    Ok(Outcome::Mismatch)
                }
                Err(e) => Err(e.into()),
            }
        }
        Command::Strata { n, nprime, gamma, axis, format } => {
            let gq = GridQuiver::square_product(n, nprime)?;
            let g = dim(&gamma)?;
            if g.len() != gq.vertex_count() {
                return Err(Error::DimensionMismatch { expected: gq.vertex_count(), found: g.len() }.into());
            }
            let axes = match axis {
                Some(a) => vec![a.parse::<Axis>()?],
                None => vec![Axis::Horizontal, Axis::Vertical],
            };
            print_strata(&gq, &g, &axes, format);
            Ok(Outcome::Done)
        }
        Command::Roots { n, nprime, axis, format } => {
            let gq = GridQuiver::square_product(n, nprime)?;
            print_roots(&gq, axis.parse()?, format);
            Ok(Outcome::Done)
        }
        Command::NormalForm { orientation, gamma, kostant, format } => {
            let o = LineQuiver::from_pattern(&orientation)?;
            let kp = KostantPartition::parse(o, &kostant)?;
            if let Some(g) = gamma {
                let g = dim(&g)?;
                if g != kp.dim_vector() {
                    bail!("partition has dimension vector {}, not {g}", kp.dim_vector());
                }
            }
            let nf = normal_form(&kp);
            match format {
                Format::Json => outln!("{}", serde_json::to_string_pretty(&nf).unwrap()),
                _ => {
                    for (e, m) in nf.matrices.iter().enumerate() {
                        let arrow = match o_dir(&nf.orientation, e) {
                            'r' => format!("{} -> {}", e + 1, e + 2),
                            _ => format!("{} <- {}", e + 1, e + 2),
                        };
                        outln!("{arrow}");
                        for row in m {
                            let cells: Vec<String> = row.iter().map(i64::to_string).collect();
                            outln!("  {}", cells.join(" "));
                        }
                    }
                }
            }
            Ok(Outcome::Done)
        }
        Command::Quiver { n, nprime } => {
            let gq = GridQuiver::square_product(n, nprime)?;
            outln!("{}", serde_json::to_string_pretty(&gq.to_json()).unwrap());
            Ok(Outcome::Done)
        }
    }
}

fn o_dir(o: &LineQuiver, e: usize) -> char {
    o.pattern().chars().nth(e).unwrap_or('r')
}

fn print_strata(gq: &GridQuiver, g: &DimVector, axes: &[Axis], format: Format) {
    let tables: Vec<_> = axes.iter().map(|&a| (a, stratum_table(gq, g, a))).collect();
    match format {
        Format::Json => {
            let v: Vec<_> = tables
                .iter()
                .flat_map(|(_, rows)| rows.iter())
                .map(|r| {
                    json!({
                        "id": r.id,
                        "axis": r.stratum.axis,
                        "lines": r.stratum.parts.iter().map(|p| p.mult().to_vec()).collect::<Vec<_>>(),
                        "hexagon": r.stratum.hexagon(),
                        "codim": r.codim,
                        "w": r.w,
                        "poincare": r.poincare,
                    })
                })
                .collect();
            outln!("{}", serde_json::to_string_pretty(&v).unwrap());
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(["axis", "id", "codim", "w", "poincare"]).expect("write to memory");
            for (a, rows) in &tables {
                for r in rows {
                    let row = [a.to_string(), r.id.clone(), r.codim.to_string(), r.w.to_string(), r.poincare.clone()];
                    w.write_record(&row).expect("write to memory");
                }
            }
            out!("{}", String::from_utf8_lossy(&w.into_inner().expect("flush to memory")));
        }
        Format::Pretty => {
            for (a, rows) in &tables {
                outln!("{a} strata of {g}");
                outln!("  {:<28} {:>5} {:>3}  poincare", "stratum", "codim", "w");
                for r in rows {
                    let label = match r.stratum.hexagon() {
                        Some(h) => format!("{h} {}", r.id),
                        None => r.id.clone(),
                    };
                    outln!("  {label:<28} {:>5} {:>3}  {}", r.codim, r.w, r.poincare);
                }
            }
        }
    }
}

fn print_roots(gq: &GridQuiver, axis: Axis, format: Format) {
    let ord = canonical_order(gq, axis);
    match format {
        Format::Json => {
            let v = json!({ "axis": axis, "order": ord.sequence });
            outln!("{}", serde_json::to_string_pretty(&v).unwrap());
        }
        _ => {
            let seq: Vec<String> = ord.sequence.iter().map(|r| format!("{r}(rho={})", rho(gq, r))).collect();
            outln!("canonical {axis} order:");
            outln!("  {}", seq.join(" < "));
            for line in 1..=gq.line_count(axis) {
                outln!("order matrix of {axis} line {line}:");
                for row in order_matrix_axis(gq, axis, line) {
                    let cells: Vec<String> = row
                        .iter()
                        .map(|e| e.map_or("  .  ".to_string(), |r| format!("{:^5}", r.interval.to_string())))
                        .collect();
                    outln!("  {}", cells.join(" "));
                }
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = std::env::var("QDILOG_THREADS").ok().and_then(|s| s.parse::<usize>().ok()) {
        if n > 0 {
            rayon::ThreadPoolBuilder::new().num_threads(n).build_global().ok();
        }
    }
    match run(cli.command) {
        Ok(Outcome::Done) => ExitCode::SUCCESS,
        Ok(Outcome::Mismatch) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
