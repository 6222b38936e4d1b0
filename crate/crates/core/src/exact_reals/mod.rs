//! Upper semicontinuous and continuous reals as rational-query objects.

mod continuous;
mod lemma;
mod upper;

pub use continuous::ContinuousReal;
pub use lemma::{lemma1_refine, RefinementCertificate, RefinementStep};
pub use upper::{agree_within, certify_le, SupFamily, UpperReal, MAX_QUERY_BITS};

use thiserror::Error;

use crate::rational::Q;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RealError {
    #[error("sign contract violated")]
    SignContract,
    #[error("empty family has no supremum")]
    EmptyFamily,
    #[error("declared bound {0} is not an upper bound")]
    BoundNotAbove(Q),
    #[error("declared floor {0} is not a lower bound")]
    FloorNotBelow(Q),
    #[error("contract x^2 <= q*x fails at test point {0}")]
    SquareContract(Q),
    #[error("contract x <= q + e fails at test point {0}")]
    StartContract(Q),
    #[error("precision must be positive")]
    NonPositivePrecision,
}
