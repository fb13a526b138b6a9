use crate::Error;

/// Numerical slack used by the body oracles.
///
/// `membership_slack` is relative: a membership query may answer `true` for
/// points of `(1 + membership_slack)·K`. `bisection_tol` is the relative
/// accuracy requested from iterative gauge and support evaluations.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct OracleTolerance {
    pub membership_slack: f64,
    pub bisection_tol: f64,
}

impl OracleTolerance {
    pub fn new(membership_slack: f64, bisection_tol: f64) -> Result<Self, Error> {
        if !(membership_slack.is_finite() && membership_slack > 0.0) {
            return Err(Error::InvalidParameter {
                name: "membership_slack",
                reason: "must be finite and positive",
            });
        }
        if !(bisection_tol.is_finite() && bisection_tol > 0.0) {
            return Err(Error::InvalidParameter {
                name: "bisection_tol",
                reason: "must be finite and positive",
            });
        }
        if bisection_tol > membership_slack {
            return Err(Error::InvalidParameter {
                name: "bisection_tol",
                reason: "must not exceed membership_slack",
            });
        }
        Ok(Self {
            membership_slack,
            bisection_tol,
        })
    }
}

impl Default for OracleTolerance {
    fn default() -> Self {
        Self {
            membership_slack: 1e-9,
            bisection_tol: 1e-10,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_inverted_tolerances() {
        assert!(OracleTolerance::new(1e-9, 1e-10).is_ok());
        assert!(OracleTolerance::new(1e-10, 1e-9).is_err());
        assert!(OracleTolerance::new(0.0, 0.0).is_err());
        assert!(OracleTolerance::new(f64::NAN, 1e-12).is_err());
    }
}
