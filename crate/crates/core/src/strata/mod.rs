//! Kostant partitions, lace diagrams and normal forms, orbit codimensions,
//! and the horizontal/vertical strata of square-product representation
//! spaces.

mod kostant;
mod lace;
mod stratum;

pub use kostant::{enumerate_kostant, KostantPartition};
pub use lace::{
    codim_orbit, dext, dhom, hom_ext, interval_module, lace_order, normal_form, Matrix, NormalForm, Representation,
};
pub use stratum::{
    c_eta, codim_stratum, enumerate_strata, geometric_sum, poincare_label, poincare_stratum, stratum_table, w_shift,
    Stratum, StratumInfo,
};
