//! Scenario files, parameter sweeps and table reproduction for the CLI.

mod reproduce;
mod scenario;
mod sweep;
mod table;

pub use reproduce::{reproduce, table1, table2, table3, Table3Cell, Target};
pub use scenario::Scenario;
pub use sweep::{sweep, SweepMode, SweepParam, SweepSpec, SweepStep};
pub use table::{Cell, Format, Table};
