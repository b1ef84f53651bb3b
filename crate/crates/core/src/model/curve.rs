use crate::error::{Error, Result};

/// Default number of sample points used when discretizing a smooth concave function.
pub const DEFAULT_SAMPLES: usize = 64;

/// Piecewise-linear concave function on `[0, T]`.
///
/// Values are stored with `φ(0)` subtracted so the curve passes through the origin; the
/// removed constant is kept as [`ConcaveCurve::offset`].
#[derive(Debug, Clone, PartialEq)]
pub struct ConcaveCurve {
    t: Vec<f64>,
    v: Vec<f64>,
    offset: f64,
}

impl ConcaveCurve {
    /// Breakpoints `(t_i, φ(t_i))` with `t_0 = 0`, strictly increasing `t`, and nonincreasing slopes.
    pub fn new(points: &[(f64, f64)]) -> Result<Self> {
        let Some(&(t0, v0)) = points.first() else {
            return Err(Error::InvalidCurve("curve needs at least one point".into()));
        };
        if points.iter().any(|&(t, v)| !t.is_finite() || !v.is_finite()) {
            return Err(Error::InvalidCurve("non-finite breakpoint".into()));
        }
        if t0 != 0.0 {
            return Err(Error::InvalidCurve(format!("first breakpoint at {t0}, expected 0")));
        }
        for (i, p) in points.windows(2).enumerate() {
            if p[1].0 <= p[0].0 {
                return Err(Error::InvalidCurve(format!(
                    "breakpoints not strictly increasing at index {}",
                    i + 1
                )));
            }
        }
        let t: Vec<f64> = points.iter().map(|p| p.0).collect();
        let v: Vec<f64> = points.iter().map(|p| p.1 - v0).collect();
        let curve = ConcaveCurve { t, v, offset: v0 };
        let slopes = curve.slopes();
        let scale = slopes.iter().fold(1.0_f64, |m, s| m.max(s.abs()));
        for (i, s) in slopes.windows(2).enumerate() {
            if s[1] > s[0] + 1e-9 * scale {
                return Err(Error::NotConcave(format!(
                    "slope increases from {} to {} at breakpoint {}",
                    s[0],
                    s[1],
                    i + 1
                )));
            }
        }
        Ok(curve)
    }

    /// Samples `phi` at `count` uniformly spaced points of `[0, end]`.
    pub fn sample(phi: impl Fn(f64) -> f64, end: f64, count: usize) -> Result<Self> {
        if !(end > 0.0) || count < 2 {
            return Err(Error::Parameter(
                "sampling needs end > 0 and at least two points".into(),
            ));
        }
        let last = count - 1;
        let points: Vec<(f64, f64)> = (0..count)
            .map(|i| {
                let t = if i == last {
                    end
                } else {
                    end * i as f64 / last as f64
                };
                (t, phi(t))
            })
            .collect();
        ConcaveCurve::new(&points)
    }

    /// Samples `phi` at `end · (i/(count−1))^power`, clustering points near `0`.
    ///
    /// Suited to curves with unbounded slope at the origin such as `√s`, where a uniform grid
    /// leaves an `O(√h)` chord error on the first cell.
    pub fn sample_graded(
        phi: impl Fn(f64) -> f64,
        end: f64,
        count: usize,
        power: f64,
    ) -> Result<Self> {
        if !(end > 0.0) || count < 2 || !(power >= 1.0) {
            return Err(Error::Parameter(
                "graded sampling needs end > 0, at least two points and power >= 1".into(),
            ));
        }
        let last = count - 1;
        let points: Vec<(f64, f64)> = (0..count)
            .map(|i| {
                let t = if i == last {
                    end
                } else {
                    end * (i as f64 / last as f64).powf(power)
                };
                (t, phi(t))
            })
            .collect();
        ConcaveCurve::new(&points)
    }

    /// `min(s, y)` on `[0, end]`, a single kink at `y`.
    pub fn threshold(y: f64, end: f64) -> Result<Self> {
        if y <= 0.0 || y >= end {
            ConcaveCurve::new(&[(0.0, 0.0), (end, if y <= 0.0 { 0.0 } else { end })])
        } else {
            ConcaveCurve::new(&[(0.0, 0.0), (y, y), (end, y)])
        }
    }

    pub fn end(&self) -> f64 {
        *self.t.last().unwrap()
    }

    pub fn offset(&self) -> f64 {
        self.offset
    }

    pub fn breakpoints(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.t.iter().copied().zip(self.v.iter().copied())
    }

    /// Breakpoints with the offset added back, as originally supplied.
    pub fn raw_points(&self) -> Vec<(f64, f64)> {
        self.breakpoints().map(|(t, v)| (t, v + self.offset)).collect()
    }

    pub fn slopes(&self) -> Vec<f64> {
        self.t
            .windows(2)
            .zip(self.v.windows(2))
            .map(|(t, v)| (v[1] - v[0]) / (t[1] - t[0]))
            .collect()
    }

    pub fn initial_slope(&self) -> f64 {
        self.slopes().first().copied().unwrap_or(0.0)
    }

    pub fn final_slope(&self) -> f64 {
        self.slopes().last().copied().unwrap_or(0.0)
    }

    /// Interior kinks `(position, slope drop)` with a strictly positive drop.
    pub fn kinks(&self) -> Vec<(f64, f64)> {
        let slopes = self.slopes();
        slopes
            .windows(2)
            .enumerate()
            .filter_map(|(i, s)| {
                let drop = s[0] - s[1];
                (drop > 0.0).then_some((self.t[i + 1], drop))
            })
            .collect()
    }

    fn piece(&self, s: f64) -> usize {
        let pieces = self.t.len() - 1;
        self.t[1..]
            .partition_point(|&b| b < s)
            .min(pieces.saturating_sub(1))
    }

    /// Normalized value `φ(s) − φ(0)`; `s` is clamped into the domain.
    pub fn eval(&self, s: f64) -> f64 {
        if self.t.len() == 1 {
            return 0.0;
        }
        let s = s.clamp(0.0, self.end());
        let i = self.piece(s);
        let (t0, t1, v0, v1) = (self.t[i], self.t[i + 1], self.v[i], self.v[i + 1]);
        if s == t1 {
            return v1;
        }
        v0 + (v1 - v0) * (s - t0) / (t1 - t0)
    }

    pub fn eval_raw(&self, s: f64) -> f64 {
        self.eval(s) + self.offset
    }

    /// Slope of the piece containing the midpoint of `[a, b]`.
    pub fn slope_on(&self, a: f64, b: f64) -> f64 {
        if self.t.len() == 1 {
            return 0.0;
        }
        let i = self.piece(0.5 * (a + b));
        (self.v[i + 1] - self.v[i]) / (self.t[i + 1] - self.t[i])
    }

    /// Returns the curve `s ↦ factor · φ(scale · s)` on `[0, end / scale]`, offset included.
    pub fn rescaled(&self, scale: f64, factor: f64) -> Result<Self> {
        let points: Vec<(f64, f64)> = self
            .raw_points()
            .into_iter()
            .map(|(t, v)| (t / scale, factor * v))
            .collect();
        ConcaveCurve::new(&points)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn normalizes_offset() {
        let c = ConcaveCurve::new(&[(0.0, 3.0), (1.0, 5.0), (2.0, 6.0)]).unwrap();
        assert_eq!(c.offset(), 3.0);
        assert_eq!(c.eval(0.0), 0.0);
        assert_eq!(c.eval(1.5), 2.5);
        assert_eq!(c.eval_raw(2.0), 6.0);
        assert_eq!(c.eval(10.0), 3.0);
    }

    #[test]
    fn rejects_convex() {
        let err = ConcaveCurve::new(&[(0.0, 0.0), (1.0, 0.0), (2.0, 1.0)]).unwrap_err();
        assert!(matches!(err, Error::NotConcave(_)));
        assert!(ConcaveCurve::new(&[(0.0, 0.0), (1.0, 1.0), (1.0, 2.0)]).is_err());
        assert!(ConcaveCurve::new(&[(0.5, 0.0), (1.0, 1.0)]).is_err());
    }

    #[test]
    fn kinks_and_slopes() {
        let c = ConcaveCurve::new(&[(0.0, 0.0), (1.0, 2.0), (2.0, 3.0), (3.0, 3.0), (4.0, 3.0)])
            .unwrap();
        assert_eq!(c.slopes(), vec![2.0, 1.0, 0.0, 0.0]);
        assert_eq!(c.kinks(), vec![(1.0, 1.0), (2.0, 1.0)]);
        assert_eq!(c.final_slope(), 0.0);
        assert_eq!(c.slope_on(0.2, 0.4), 2.0);
    }

    #[test]
    fn sampler_hits_endpoints() {
        let c = ConcaveCurve::sample(f64::sqrt, 4.0, DEFAULT_SAMPLES).unwrap();
        assert_eq!(c.breakpoints().count(), 64);
        assert_eq!(c.end(), 4.0);
        assert!((c.eval(4.0) - 2.0).abs() < 1e-15);
    }

    #[test]
    fn single_point_curve() {
        let c = ConcaveCurve::new(&[(0.0, 0.0)]).unwrap();
        assert_eq!(c.end(), 0.0);
        assert_eq!(c.eval(0.0), 0.0);
        assert!(c.kinks().is_empty());
    }
}
