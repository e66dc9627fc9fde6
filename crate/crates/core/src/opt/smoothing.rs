use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Differentiable surrogate for the inner max/min.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SmoothingSpec {
    /// Exact max; the gradient is that of the attaining entry.
    None,
    /// `(sum (x_i + 1)^p)^(1/p) - 1`. The sign of `p` is chosen by the
    /// direction: positive for max, negative for min.
    LpShift { p: f64 },
    /// Average of the entries weighted by `exp(x_i / epsilon)`.
    Softmax { epsilon: f64 },
}

impl Default for SmoothingSpec {
    fn default() -> Self {
        SmoothingSpec::Softmax { epsilon: 1e-4 }
    }
}

impl SmoothingSpec {
    pub fn validate(&self) -> Result<()> {
        match *self {
            SmoothingSpec::None => Ok(()),
            SmoothingSpec::LpShift { p } if p != 0.0 && p.is_finite() => Ok(()),
            SmoothingSpec::LpShift { p } => Err(Error::OutOfRange { name: "p", value: p }),
            SmoothingSpec::Softmax { epsilon } if epsilon > 0.0 && epsilon.is_finite() => Ok(()),
            SmoothingSpec::Softmax { epsilon } => Err(Error::OutOfRange {
                name: "epsilon",
                value: epsilon,
            }),
        }
    }

    /// The softmax temperature, if any.
    pub fn epsilon(&self) -> Option<f64> {
        match *self {
            SmoothingSpec::Softmax { epsilon } => Some(epsilon),
            _ => None,
        }
    }
}

impl FromStr for SmoothingSpec {
    type Err = Error;

    /// Parses `none`, `lp:P` or `softmax:EPS`.
    fn from_str(s: &str) -> Result<Self> {
        let (kind, arg) = match s.split_once(':') {
            Some((k, a)) => (k, Some(a)),
            None => (s, None),
        };
        let num = |a: Option<&str>| -> Result<f64> {
            a.ok_or_else(|| Error::invalid(format!("{s:?} needs a parameter")))?
                .trim()
                .parse::<f64>()
                .map_err(|e| Error::invalid(format!("bad smoothing parameter in {s:?}: {e}")))
        };
        let spec = match kind.trim().to_ascii_lowercase().as_str() {
            "none" => SmoothingSpec::None,
            "lp" | "lp_shift" => SmoothingSpec::LpShift { p: num(arg)? },
            "softmax" => SmoothingSpec::Softmax { epsilon: num(arg)? },
            other => return Err(Error::invalid(format!("unknown smoothing {other:?}"))),
        };
        spec.validate()?;
        Ok(spec)
    }
}

impl fmt::Display for SmoothingSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SmoothingSpec::None => write!(f, "none"),
            SmoothingSpec::LpShift { p } => write!(f, "lp:{p}"),
            SmoothingSpec::Softmax { epsilon } => write!(f, "softmax:{epsilon}"),
        }
    }
}

/// Smoothed maximum of `x`.
pub fn smooth_max(x: &[f64], spec: SmoothingSpec) -> f64 {
    eval(x, spec, 1.0, None)
}

/// Smoothed minimum of `x`.
pub fn smooth_min(x: &[f64], spec: SmoothingSpec) -> f64 {
    eval(x, spec, -1.0, None)
}

/// Smoothed maximum; writes `d/dx_k` into `grad`.
pub fn smooth_max_grad(x: &[f64], spec: SmoothingSpec, grad: &mut [f64]) -> f64 {
    eval(x, spec, 1.0, Some(grad))
}

/// Smoothed minimum; writes `d/dx_k` into `grad`.
pub fn smooth_min_grad(x: &[f64], spec: SmoothingSpec, grad: &mut [f64]) -> f64 {
    eval(x, spec, -1.0, Some(grad))
}

fn eval(x: &[f64], spec: SmoothingSpec, dir: f64, grad: Option<&mut [f64]>) -> f64 {
    assert!(!x.is_empty(), "smoothing an empty vector");
    match spec {
        SmoothingSpec::None => {
            let mut best = 0;
            for (i, &v) in x.iter().enumerate().skip(1) {
                if dir * v > dir * x[best] {
                    best = i;
                }
            }
            if let Some(g) = grad {
                g.iter_mut().for_each(|v| *v = 0.0);
                g[best] = 1.0;
            }
            x[best]
        }
        SmoothingSpec::Softmax { epsilon } => {
            let anchor = x.iter().fold(f64::NEG_INFINITY, |m, &v| m.max(dir * v));
            let mut total = 0.0;
            let mut weighted = 0.0;
            for &v in x {
                let w = ((dir * v - anchor) / epsilon).exp();
                total += w;
                weighted += w * v;
            }
            let f = weighted / total;
            if let Some(g) = grad {
                for (gk, &v) in g.iter_mut().zip(x) {
                    let w = ((dir * v - anchor) / epsilon).exp() / total;
                    *gk = w * (1.0 + dir * (v - f) / epsilon);
                }
            }
            f
        }
        SmoothingSpec::LpShift { p } => {
            let q = dir * p.abs();
            if x.iter().any(|&v| v + 1.0 <= 0.0) {
                if let Some(g) = grad {
                    g.iter_mut().for_each(|v| *v = f64::NAN);
                }
                return f64::NAN;
            }
            // factor out the dominant base so the powers stay in [0, 1]
            let anchor = x.iter().fold(f64::NEG_INFINITY, |m, &v| m.max(dir * (v + 1.0))) * dir;
            let s: f64 = x.iter().map(|&v| ((v + 1.0) / anchor).powf(q)).sum();
            let r = anchor * s.powf(1.0 / q);
            if let Some(g) = grad {
                for (gk, &v) in g.iter_mut().zip(x) {
                    *gk = ((v + 1.0) / r).powf(q - 1.0);
                }
            }
            r - 1.0
        }
    }
}

/// Affine map of payoffs in `[lo, hi]` onto `[0, 1]`, so the shifted
/// `lp` surrogate always sees bases in `[1, 2]`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub(crate) struct UnitMap {
    lo: f64,
    scale: f64,
}

impl UnitMap {
    pub(crate) fn new(lo: f64, hi: f64) -> Self {
        let scale = if hi > lo { hi - lo } else { 1.0 };
        Self { lo, scale }
    }

    #[cfg(test)]
    pub(crate) fn identity() -> Self {
        Self { lo: 0.0, scale: 1.0 }
    }

    /// Applies a surrogate in unit coordinates. Gradients are unchanged by
    /// the affine map, values are mapped back.
    pub(crate) fn apply(
        &self,
        x: &[f64],
        buf: &mut Vec<f64>,
        spec: SmoothingSpec,
        max: bool,
        grad: Option<&mut [f64]>,
    ) -> f64 {
        let run = |v: &[f64], g: Option<&mut [f64]>| match (max, g) {
            (true, Some(g)) => smooth_max_grad(v, spec, g),
            (true, None) => smooth_max(v, spec),
            (false, Some(g)) => smooth_min_grad(v, spec, g),
            (false, None) => smooth_min(v, spec),
        };
        if !matches!(spec, SmoothingSpec::LpShift { .. }) {
            return run(x, grad);
        }
        buf.clear();
        buf.extend(x.iter().map(|v| (v - self.lo) / self.scale));
        self.lo + self.scale * run(buf, grad)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn equal_entries() {
        let x = [0.3, 0.3];
        assert_eq!(smooth_max(&x, SmoothingSpec::Softmax { epsilon: 1e-3 }), 0.3);
        assert_eq!(smooth_max(&x, SmoothingSpec::None), 0.3);
        let lp = smooth_max(&x, SmoothingSpec::LpShift { p: 100.0 });
        assert!(lp >= 0.3 && lp <= 1.3 * 2f64.powf(0.01) - 1.0 + 1e-15);
    }

    #[test]
    fn softmax_tight() {
        let v = smooth_max(&[0.0, 1.0], SmoothingSpec::Softmax { epsilon: 1e-6 });
        assert_abs_diff_eq!(v, 1.0, epsilon = 1e-6);
        let v = smooth_min(&[0.0, 1.0], SmoothingSpec::Softmax { epsilon: 1e-6 });
        assert_abs_diff_eq!(v, 0.0, epsilon = 1e-6);
    }

    #[test]
    fn lp_bounds() {
        let v = smooth_max(&[0.0, 1.0], SmoothingSpec::LpShift { p: 100.0 });
        assert!(v >= 1.0 && v <= 2.0 * 2f64.powf(0.01) - 1.0 + 1e-12, "{v}");
        let m = smooth_min(&[0.0, 1.0], SmoothingSpec::LpShift { p: 100.0 });
        assert!(m <= 0.0 && m > -0.01, "{m}");
        assert!(smooth_max(&[-2.0, 1.0], SmoothingSpec::LpShift { p: 4.0 }).is_nan());
    }

    #[test]
    fn large_entries_do_not_overflow() {
        let x = [1e3, 999.0, -1e3];
        let v = smooth_max(&x, SmoothingSpec::Softmax { epsilon: 1e-4 });
        assert_abs_diff_eq!(v, 1e3, epsilon = 1e-9);
        let v = smooth_max(&[1e3, 2e3], SmoothingSpec::LpShift { p: 200.0 });
        assert!(v.is_finite() && v >= 2e3);
    }

    #[test]
    fn exact_subgradient_takes_first_maximizer() {
        let mut g = [9.0; 3];
        assert_eq!(smooth_max_grad(&[1.0, 2.0, 2.0], SmoothingSpec::None, &mut g), 2.0);
        assert_eq!(g, [0.0, 1.0, 0.0]);
        assert_eq!(smooth_min_grad(&[1.0, 0.0, 0.0], SmoothingSpec::None, &mut g), 0.0);
        assert_eq!(g, [0.0, 1.0, 0.0]);
    }

    #[test]
    fn gradients_match_differences() {
        let x = [0.1, 0.35, 0.3, -0.2];
        let specs = [
            SmoothingSpec::Softmax { epsilon: 0.05 },
            SmoothingSpec::LpShift { p: 8.0 },
            SmoothingSpec::LpShift { p: -8.0 },
        ];
        for spec in specs {
            for max in [true, false] {
                let mut g = [0.0; 4];
                if max {
                    smooth_max_grad(&x, spec, &mut g);
                } else {
                    smooth_min_grad(&x, spec, &mut g);
                }
                for k in 0..4 {
                    let h = 1e-6;
                    let mut a = x;
                    let mut b = x;
                    a[k] += h;
                    b[k] -= h;
                    let f = |v: &[f64]| if max { smooth_max(v, spec) } else { smooth_min(v, spec) };
                    assert_abs_diff_eq!(g[k], (f(&a) - f(&b)) / (2.0 * h), epsilon = 1e-6);
                }
            }
        }
    }

    #[test]
    fn parse_and_display() {
        assert_eq!("none".parse::<SmoothingSpec>().unwrap(), SmoothingSpec::None);
        assert_eq!(
            "lp:100".parse::<SmoothingSpec>().unwrap(),
            SmoothingSpec::LpShift { p: 100.0 }
        );
        let s: SmoothingSpec = "softmax:1e-4".parse().unwrap();
        assert_eq!(s, SmoothingSpec::Softmax { epsilon: 1e-4 });
        assert_eq!(s.to_string().parse::<SmoothingSpec>().unwrap(), s);
        assert!("softmax:0".parse::<SmoothingSpec>().is_err());
        assert!("lp:0".parse::<SmoothingSpec>().is_err());
        assert!("lp".parse::<SmoothingSpec>().is_err());
        assert!("cubic:2".parse::<SmoothingSpec>().is_err());
    }

    #[test]
    fn serde_shape() {
        let s = serde_json::to_string(&SmoothingSpec::Softmax { epsilon: 0.5 }).unwrap();
        assert_eq!(s, r#"{"kind":"softmax","epsilon":0.5}"#);
        let back: SmoothingSpec = serde_json::from_str(r#"{"kind":"lp_shift","p":2.0}"#).unwrap();
        assert_eq!(back, SmoothingSpec::LpShift { p: 2.0 });
    }

    #[test]
    fn unit_map_roundtrip() {
        let m = UnitMap::new(-2.0, 2.0);
        let mut buf = Vec::new();
        let x = [-2.0, 0.0, 1.5];
        let v = m.apply(&x, &mut buf, SmoothingSpec::LpShift { p: 400.0 }, true, None);
        assert!((1.5..1.5 + 0.02).contains(&v), "{v}");
        let v = m.apply(&x, &mut buf, SmoothingSpec::LpShift { p: 400.0 }, false, None);
        assert!(v <= -2.0 && v > -2.02, "{v}");
        assert_eq!(
            UnitMap::identity().apply(&x, &mut buf, SmoothingSpec::None, true, None),
            1.5
        );
    }
}
