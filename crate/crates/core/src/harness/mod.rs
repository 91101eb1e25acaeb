//! Desk-scale measurement of conjugacy length functions.

mod clf;
mod families;
mod fit;
mod table;

pub use clf::{conjugacy_partition, empirical_clf, ClfOptions, Partition};
pub use families::{empirical_rclf_bs, empirical_tclf, l1_ball, RclfTable};
pub use fit::{fit_bound, FitModel, FitResult};
pub use table::{write_atomic, ClfRow, ClfTable, TableKind};
