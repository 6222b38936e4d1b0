use std::fmt;
use std::sync::Arc;

use num_traits::Signed;

use crate::rational::Q;

use super::{RealError, UpperReal};

type Approx = Arc<dyn Fn(&Q) -> (Q, Q) + Send + Sync>;

/// A located real given by interval approximations: `approx(eps)` returns
/// `(l, u)` with `l <= x <= u` and `u - l <= eps`.
#[derive(Clone)]
pub struct ContinuousReal {
    approx: Approx,
}

impl fmt::Debug for ContinuousReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (l, u) = self.approx(&crate::rational::pow2_neg(16));
        write!(f, "ContinuousReal({l}..{u})")
    }
}

impl ContinuousReal {
    /// Wraps an approximation function; the caller guarantees `u - l <= eps`
    /// and that successive approximations are nested.
    pub fn new(approx: impl Fn(&Q) -> (Q, Q) + Send + Sync + 'static) -> Self {
        Self {
            approx: Arc::new(approx),
        }
    }

    pub fn rational(v: Q) -> Self {
        Self::new(move |_| (v.clone(), v.clone()))
    }

    pub fn approx(&self, eps: &Q) -> (Q, Q) {
        assert!(eps.is_positive(), "precision must be positive");
        (self.approx)(eps)
    }

    pub fn try_approx(&self, eps: &Q) -> Result<(Q, Q), RealError> {
        if !eps.is_positive() {
            return Err(RealError::NonPositivePrecision);
        }
        Ok((self.approx)(eps))
    }

    /// The upper cut. `lt(q)` refines until `u < q` or `l >= q`; a query at
    /// the exact value answers false after the maximum refinement depth.
    pub fn to_upper(&self) -> UpperReal {
        UpperReal::from_continuous(self.clone())
    }
}
