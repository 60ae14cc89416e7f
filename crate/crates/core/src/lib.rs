//! Demand-uncertainty analytics and subscription pricing for e-grocery SKUs.
//!
//! The crate is organised bottom-up:
//!
//! * [`normal`] and [`demand`] model binomial customer demand through its
//!   normal approximation and derive service-level order quantities.
//! * [`profit`] holds the closed-form newsvendor profit decomposition, the
//!   value of advanced demand information, subscription profit and its
//!   marginal effects; [`thresholds`] finds the break-even parameters.
//! * [`pricing`] models customer acceptance of subscription offers and
//!   searches for the profit-maximising discount.
//! * [`sim`] is a seed-reproducible Monte Carlo engine for the same setting.
//! * [`estimate`] turns order logs into buying-probability estimates.
//! * [`report`] contains scenario files, parameter sweeps and table
//!   reproduction used by the command-line front end.

pub mod demand;
pub mod error;
pub mod estimate;
pub mod normal;
pub mod pricing;
pub mod profit;
pub mod quadrature;
pub mod report;
pub mod sim;
pub mod thresholds;

pub use demand::{order_quantity, MarketParams, NormalApprox};
pub use error::{Error, Result};
pub use pricing::{DiscountSolution, SubscriptionTerms};
pub use profit::{AdiShare, GammaCoefficient, ProfitDecomposition};
pub use sim::{Execution, OrderRounding, SimulationConfig, SimulationReport};
