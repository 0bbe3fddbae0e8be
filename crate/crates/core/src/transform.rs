//! Yeo-Johnson and isoelastic transform families.
//!
//! The same family plays two roles: with parameter `gamma` it is the
//! ergodicity transform of the wealth dynamics, with parameter `eta` it is an
//! agent's utility function. Every evaluation goes through the log
//! coordinates `ln(1 + x)` (for `x >= 0`) and `ln(1 - x)` (for `x < 0`), which
//! keeps the power branches accurate near zero and lets the logarithmic
//! members fall out as limits.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Exponent distance below which a power branch is replaced by its log limit.
const LOG_BRANCH_EPS: f64 = 1e-12;

/// Parameter selecting one member of the Yeo-Johnson family.
///
/// Restricted to `[-1, 1]`, where the transform is a bijection of the reals.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct TransformParam(f64);

impl TransformParam {
    /// Identity transform (additive dynamics, risk-neutral utility).
    pub const ADDITIVE: TransformParam = TransformParam(0.0);
    /// `ln(1 + x)` on the positive half-line (asymptotically multiplicative).
    pub const MULTIPLICATIVE: TransformParam = TransformParam(1.0);

    pub fn new(value: f64) -> Result<Self> {
        if (-1.0..=1.0).contains(&value) {
            Ok(TransformParam(value))
        } else {
            Err(Error::domain("transform parameter", value, "[-1, 1]"))
        }
    }

    /// Like [`TransformParam::new`] but also rejects negative values, the range
    /// used by every experiment here.
    pub fn unit(value: f64) -> Result<Self> {
        if (0.0..=1.0).contains(&value) {
            Ok(TransformParam(value))
        } else {
            Err(Error::domain("transform parameter", value, "[0, 1]"))
        }
    }

    #[inline]
    pub fn value(self) -> f64 {
        self.0
    }
}

impl TryFrom<f64> for TransformParam {
    type Error = Error;

    fn try_from(value: f64) -> Result<Self> {
        TransformParam::new(value)
    }
}

impl From<TransformParam> for f64 {
    fn from(p: TransformParam) -> f64 {
        p.0
    }
}

impl std::fmt::Display for TransformParam {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        self.0.fmt(f)
    }
}

// Positive branch in the coordinate l = ln(1 + x): ((1+x)^(1-p) - 1) / (1-p).
#[inline]
fn pos_from_log(l: f64, p: f64) -> f64 {
    let k = 1.0 - p;
    if k.abs() < LOG_BRANCH_EPS {
        l
    } else {
        (k * l).exp_m1() / k
    }
}

// Inverse of `pos_from_log`: returns ln(1 + x) for y >= 0.
#[inline]
fn pos_to_log(y: f64, p: f64) -> f64 {
    let k = 1.0 - p;
    if k.abs() < LOG_BRANCH_EPS {
        y
    } else {
        (k * y).ln_1p() / k
    }
}

// Negative branch in the coordinate m = ln(1 - x), returned with its sign
// flipped: ((1-x)^(1+p) - 1) / (1+p) = -Psi_p(x).
#[inline]
fn neg_from_log(m: f64, p: f64) -> f64 {
    let k = 1.0 + p;
    if k.abs() < LOG_BRANCH_EPS {
        m
    } else {
        (k * m).exp_m1() / k
    }
}

// Inverse of `neg_from_log`: returns ln(1 - x) for y < 0.
#[inline]
fn neg_to_log(y: f64, p: f64) -> f64 {
    let k = 1.0 + p;
    if k.abs() < LOG_BRANCH_EPS {
        -y
    } else {
        (-k * y).ln_1p() / k
    }
}

/// The Yeo-Johnson transform `Psi_p(x)`.
#[inline]
pub fn yj_forward(x: f64, p: TransformParam) -> f64 {
    if p.0 == 0.0 {
        x
    } else if x >= 0.0 {
        pos_from_log(x.ln_1p(), p.0)
    } else {
        -neg_from_log((-x).ln_1p(), p.0)
    }
}

/// Inverse transform `Psi_p^{-1}(y)`. Defined on all reals for `p` in `[-1, 1]`.
#[inline]
pub fn yj_inverse(y: f64, p: TransformParam) -> f64 {
    if p.0 == 0.0 {
        y
    } else if y >= 0.0 {
        pos_to_log(y, p.0).exp_m1()
    } else {
        -neg_to_log(y, p.0).exp_m1()
    }
}

/// First derivative: `(1+x)^(-p)` for `x >= 0`, `(1-x)^p` for `x < 0`.
#[inline]
pub fn yj_derivative(x: f64, p: TransformParam) -> f64 {
    if x >= 0.0 {
        (-p.0 * x.ln_1p()).exp()
    } else {
        (p.0 * (-x).ln_1p()).exp()
    }
}

/// Second derivative: `-p (1+x)^(-p-1)` for `x >= 0`, `-p (1-x)^(p-1)` for `x < 0`.
#[inline]
pub fn yj_second_derivative(x: f64, p: TransformParam) -> f64 {
    if x >= 0.0 {
        -p.0 * ((-p.0 - 1.0) * x.ln_1p()).exp()
    } else {
        -p.0 * ((p.0 - 1.0) * (-x).ln_1p()).exp()
    }
}

/// Maps a transformed value from one member of the family to another:
/// `Psi_to(Psi_from^{-1}(s))`.
///
/// This is the utility (under `to`) of the wealth whose ergodicity-transformed
/// value (under `from`) is `s`. Both transforms share their branch split at
/// zero, so the composition never leaves log coordinates.
#[inline]
pub fn reexpress(s: f64, from: TransformParam, to: TransformParam) -> f64 {
    if from == to {
        s
    } else if from.0 == 0.0 {
        yj_forward(s, to)
    } else if to.0 == 0.0 {
        yj_inverse(s, from)
    } else if s >= 0.0 {
        pos_from_log(pos_to_log(s, from.0), to.0)
    } else {
        -neg_from_log(neg_to_log(s, from.0), to.0)
    }
}

/// Isoelastic (CRRA) utility `(x^(1-p) - 1) / (1-p)`, or `ln x` at `p = 1`.
///
/// Only defined for strictly positive wealth.
pub fn isoelastic(x: f64, p: TransformParam) -> Result<f64> {
    if !(x > 0.0) {
        return Err(Error::domain("isoelastic wealth", x, "(0, inf)"));
    }
    let k = 1.0 - p.0;
    Ok(if k.abs() < LOG_BRANCH_EPS {
        x.ln()
    } else {
        (k * x.ln()).exp_m1() / k
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn tp(v: f64) -> TransformParam {
        TransformParam::new(v).unwrap()
    }

    #[test]
    fn forward_examples() {
        assert_eq!(yj_forward(0.0, tp(0.7)), 0.0);
        assert_eq!(yj_forward(3.0, tp(0.0)), 3.0);
        assert_relative_eq!(
            yj_forward(1.0, tp(0.5)),
            2.0 * (2f64.sqrt() - 1.0),
            max_relative = 1e-14
        );
        assert_relative_eq!(yj_forward(-3.0, tp(1.0)), -7.5, max_relative = 1e-14);
    }

    #[test]
    fn inverse_examples() {
        for p in [-1.0, -0.3, 0.0, 0.5, 1.0] {
            assert_eq!(yj_inverse(0.0, tp(p)), 0.0);
        }
        assert_relative_eq!(
            yj_inverse(2.0 * (2f64.sqrt() - 1.0), tp(0.5)),
            1.0,
            max_relative = 1e-14
        );
        assert_relative_eq!(yj_inverse(-7.5, tp(1.0)), -3.0, max_relative = 1e-14);
    }

    #[test]
    fn derivative_examples() {
        for p in [-1.0, 0.0, 0.4, 1.0] {
            assert_eq!(yj_derivative(0.0, tp(p)), 1.0);
        }
        assert_relative_eq!(
            yj_derivative(1.0, tp(0.5)),
            0.5f64.sqrt(),
            max_relative = 1e-14
        );
        assert_relative_eq!(
            yj_derivative(-1.0, tp(0.5)),
            2f64.sqrt(),
            max_relative = 1e-14
        );
    }

    #[test]
    fn derivative_matches_central_differences() {
        let h = 1e-5;
        for p in [-1.0, -0.5, 0.0, 0.25, 0.75, 1.0] {
            for x in [-20.0, -1.5, -0.1, 0.1, 2.0, 40.0] {
                let fd = (yj_forward(x + h, tp(p)) - yj_forward(x - h, tp(p))) / (2.0 * h);
                assert!((fd - yj_derivative(x, tp(p))).abs() < 1e-6, "p={p} x={x}");
                let fd2 = (yj_derivative(x + h, tp(p)) - yj_derivative(x - h, tp(p))) / (2.0 * h);
                assert!(
                    (fd2 - yj_second_derivative(x, tp(p))).abs() < 1e-6,
                    "p={p} x={x}"
                );
            }
        }
    }

    #[test]
    fn isoelastic_examples() {
        for p in [0.0, 0.5, 1.0] {
            assert_eq!(isoelastic(1.0, tp(p)).unwrap(), 0.0);
        }
        assert_relative_eq!(isoelastic(1e-300, tp(0.5)).unwrap(), -2.0, max_relative = 1e-12);
        assert_relative_eq!(
            isoelastic(std::f64::consts::E, tp(1.0)).unwrap(),
            1.0,
            max_relative = 1e-15
        );
        assert!(isoelastic(0.0, tp(0.5)).is_err());
        assert!(isoelastic(-2.0, tp(0.5)).is_err());
    }

    #[test]
    fn parameter_domain() {
        assert!(TransformParam::new(1.5).is_err());
        assert!(TransformParam::new(-1.0000001).is_err());
        assert!(TransformParam::new(f64::NAN).is_err());
        assert!(TransformParam::unit(-0.5).is_err());
        assert!(TransformParam::unit(1.0).is_ok());
    }

    #[test]
    fn special_members() {
        for x in [-10.0, -0.5, 0.0, 0.5, 10.0] {
            assert_eq!(yj_forward(x, TransformParam::ADDITIVE), x);
        }
        for x in [0.0, 0.5, 10.0, 1e6] {
            assert_relative_eq!(
                yj_forward(x, TransformParam::MULTIPLICATIVE),
                (x + 1.0).ln(),
                max_relative = 1e-15
            );
        }
    }

    #[test]
    fn smooth_second_order_junction() {
        // one-sided second differences at the branch point both tend to -p
        let h = 1e-5;
        for p in [-1.0, -0.5, 0.0, 0.3, 1.0] {
            let f = |x| yj_forward(x, tp(p));
            let right = (f(2.0 * h) - 2.0 * f(h) + f(0.0)) / (h * h);
            let left = (f(0.0) - 2.0 * f(-h) + f(-2.0 * h)) / (h * h);
            assert!((right + p).abs() < 1e-4, "p={p} right={right}");
            assert!((left + p).abs() < 1e-4, "p={p} left={left}");
        }
    }

    #[test]
    fn reexpress_matches_composition() {
        for g in [0.0, 0.25, 0.5, 1.0] {
            for e in [0.0, 0.5, 0.75, 1.0] {
                for s in [-30.0, -2.0, -1e-3, 0.0, 1e-3, 0.7, 25.0] {
                    let direct = yj_forward(yj_inverse(s, tp(g)), tp(e));
                    let fused = reexpress(s, tp(g), tp(e));
                    assert!((direct - fused).abs() <= 1e-12 * (1.0 + direct.abs()));
                }
            }
        }
    }

    fn grid() -> impl Iterator<Item = f64> {
        (0..=400).map(|i| -100.0 + 0.5 * i as f64)
    }

    #[test]
    fn strictly_increasing_on_grid() {
        for p in [-1.0, -0.5, 0.0, 0.25, 0.5, 0.75, 1.0] {
            let values: Vec<f64> = grid().map(|x| yj_forward(x, tp(p))).collect();
            assert!(values.windows(2).all(|w| w[0] < w[1]), "p={p}");
        }
    }

    #[test]
    fn roundtrip_on_grid() {
        for p in [-1.0, -0.5, 0.0, 0.25, 0.5, 0.75, 1.0] {
            for x in grid() {
                let back = yj_inverse(yj_forward(x, tp(p)), tp(p));
                assert!((back - x).abs() <= 1e-12 * x.abs().max(1e-300), "p={p} x={x}");
            }
        }
    }

    proptest! {
        #[test]
        fn roundtrip(x in -1e4f64..1e4, p in -1.0f64..=1.0) {
            let p = tp(p);
            let back = yj_inverse(yj_forward(x, p), p);
            prop_assert!((back - x).abs() <= 1e-12 * x.abs().max(1e-300));
            let y = yj_forward(x, p);
            prop_assert!((yj_forward(yj_inverse(y, p), p) - y).abs() <= 1e-12 * y.abs().max(1e-300));
        }

        #[test]
        fn antisymmetric_under_negation(x in -1e3f64..1e3, p in -1.0f64..=1.0) {
            prop_assert_eq!(yj_forward(-x, tp(-p)), -yj_forward(x, tp(p)));
        }

        #[test]
        fn monotone(a in -1e3f64..1e3, b in -1e3f64..1e3, p in -1.0f64..=1.0) {
            prop_assume!(a < b);
            prop_assert!(yj_forward(a, tp(p)) < yj_forward(b, tp(p)));
        }
    }
}
