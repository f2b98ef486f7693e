pub mod budget;
pub mod error;
pub mod herglotz;
pub mod mordell_tornheim;
pub mod numeric;
pub mod real;
pub mod verifier;

pub use budget::{AccuracyBudget, Context, EvalOutcome};
pub use error::{Error, Result};
pub use real::{Precision, Real};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");
