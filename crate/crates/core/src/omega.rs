//! Rectangular matrix multiplication exponents and the shortcut parameter
//! choice derived from them.

use thiserror::Error;

/// Largest `σ` with `ω(σ) = 2`.
pub const ALPHA: f64 = 0.321334;
/// Square matrix multiplication exponent.
pub const OMEGA: f64 = 2.371552;

/// Upper bounds on `ω(σ)` at the tabulated `σ` values.
const STANDARD_POINTS: [(f64, f64); 18] = [
    (0.321334, 2.0),
    (0.33, 2.000100),
    (0.34, 2.000600),
    (0.35, 2.001363),
    (0.40, 2.009541),
    (0.45, 2.023788),
    (0.50, 2.042994),
    (0.527661, 2.055322),
    (0.55, 2.066134),
    (0.60, 2.092631),
    (0.65, 2.121734),
    (0.70, 2.153048),
    (0.75, 2.186210),
    (0.80, 2.220929),
    (0.85, 2.256984),
    (0.90, 2.294209),
    (0.95, 2.332440),
    (1.00, 2.371552),
];

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PlanError {
    #[error("sigma must lie in [0, 1], got {0}")]
    SigmaOutOfRange(f64),
    #[error("mu must lie in [0, 2], got {0}")]
    MuOutOfRange(f64),
    #[error("table points must have increasing sigma and non-decreasing omega")]
    BadTable,
}

/// Piecewise-linear `ω(σ)`; constant 2 below the first point.
#[derive(Debug, Clone, PartialEq)]
pub struct OmegaTable {
    points: Vec<(f64, f64)>,
}

impl Default for OmegaTable {
    fn default() -> Self {
        Self {
            points: STANDARD_POINTS.to_vec(),
        }
    }
}

impl OmegaTable {
    pub fn new(points: Vec<(f64, f64)>) -> Result<Self, PlanError> {
        let ordered = points
            .windows(2)
            .all(|w| w[0].0 < w[1].0 && w[0].1 <= w[1].1);
        if points.is_empty() || !ordered {
            return Err(PlanError::BadTable);
        }
        Ok(Self { points })
    }

    pub fn points(&self) -> &[(f64, f64)] {
        &self.points
    }

    /// Whether slopes between consecutive points never decrease, counting the
    /// flat segment below the first point.
    pub fn is_convex(&self) -> bool {
        let mut slopes = vec![0.0];
        slopes.extend(
            self.points
                .windows(2)
                .map(|w| (w[1].1 - w[0].1) / (w[1].0 - w[0].0)),
        );
        slopes.windows(2).all(|s| s[0] <= s[1] + 1e-12)
    }

    pub fn omega(&self, sigma: f64) -> Result<f64, PlanError> {
        if !(0.0..=1.0).contains(&sigma) {
            return Err(PlanError::SigmaOutOfRange(sigma));
        }
        let (x0, y0) = self.points[0];
        if sigma <= x0 {
            return Ok(y0);
        }
        for w in self.points.windows(2) {
            let ((xa, ya), (xb, yb)) = (w[0], w[1]);
            if sigma <= xb {
                return Ok(ya + (yb - ya) * (sigma - xa) / (xb - xa));
            }
        }
        Ok(self.points.last().expect("non-empty").1)
    }
}

/// `ω(σ)` from the standard table.
pub fn omega_sigma(sigma: f64) -> Result<f64, PlanError> {
    OmegaTable::default().omega(sigma)
}

/// Shortcut exponent and predicted running-time exponent for `|S| = n^σ`
/// sources and `m = n^μ` edges.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QueryPlan {
    pub sigma: f64,
    pub mu: f64,
    /// Shortcut hop target is `n^δ`; clamped to `[0, 1/2]`.
    pub delta: f64,
    /// `(1 + μ + 2 ω(σ)) / 3`.
    pub g: f64,
}

pub fn choose_delta(sigma: f64, mu: f64) -> Result<QueryPlan, PlanError> {
    choose_delta_with(&OmegaTable::default(), sigma, mu)
}

pub fn choose_delta_with(table: &OmegaTable, sigma: f64, mu: f64) -> Result<QueryPlan, PlanError> {
    if !(0.0..=2.0).contains(&mu) {
        return Err(PlanError::MuOutOfRange(mu));
    }
    let w = table.omega(sigma)?;
    Ok(QueryPlan {
        sigma,
        mu,
        delta: ((1.0 + mu - w) / 3.0).clamp(0.0, 0.5),
        g: (1.0 + mu + 2.0 * w) / 3.0,
    })
}

impl QueryPlan {
    /// Plan for a graph with `n` vertices, `m` edges and `sources` sources.
    pub fn for_graph(n: usize, m: usize, sources: usize) -> Self {
        let log = |x: usize, hi: f64| {
            if n < 2 || x == 0 {
                0.0
            } else {
                ((x as f64).ln() / (n as f64).ln()).clamp(0.0, hi)
            }
        };
        choose_delta(log(sources, 1.0), log(m, 2.0)).expect("exponents clamped into range")
    }

    /// `⌈n^δ⌉`, at most `⌈√n⌉` and at least 1.
    pub fn hop_target(&self, n: usize) -> usize {
        let nf = n as f64;
        let d = nf.powf(self.delta).ceil().min(nf.sqrt().ceil());
        (d as usize).max(1)
    }
}

/// Root of `g(σ) - (2 + σ)` at `μ = 2` on `(α, 1)` by bisection: below it
/// the sampled-shortcut scheme beats `n^{2+σ}`.
pub fn threshold_sigma() -> f64 {
    let f = |s: f64| choose_delta(s, 2.0).expect("in range").g - (2.0 + s);
    let (mut lo, mut hi) = (ALPHA, 1.0);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if f(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn table_lookups() {
        assert_eq!(omega_sigma(0.5).unwrap(), 2.042994);
        assert_eq!(omega_sigma(0.3).unwrap(), 2.0);
        assert!((omega_sigma(0.475).unwrap() - 2.033391).abs() < 1e-9);
        assert_eq!(omega_sigma(1.0).unwrap(), OMEGA);
        assert!(omega_sigma(1.5).is_err());
    }

    #[test]
    fn standard_table_is_convex() {
        assert!(OmegaTable::default().is_convex());
        assert!(OmegaTable::new(vec![(0.5, 2.1), (0.4, 2.2)]).is_err());
    }

    #[test]
    fn delta_at_half() {
        let p = choose_delta(0.5, 2.0).unwrap();
        assert!((p.delta - (1.0 - 2.042994 / 3.0)).abs() < 1e-12);
        assert!((p.g - (1.0 + 2.0 * 2.042994 / 3.0)).abs() < 1e-12);
        // the tabulated 2.3621996 differs from the formula in the fourth decimal
        assert!((p.g - 2.3621996).abs() < 5e-4);
    }

    #[test]
    fn dense_case_matches_square_formula() {
        for s in [0.0, 0.33, 0.6, 0.9] {
            let p = choose_delta(s, 2.0).unwrap();
            let w = omega_sigma(s).unwrap();
            assert!((p.delta - (1.0 - w / 3.0).clamp(0.0, 0.5)).abs() < 1e-12);
        }
    }

    #[test]
    fn hop_target_clamps() {
        let p = QueryPlan::for_graph(100, 10_000, 10);
        assert_eq!(p.hop_target(100), 5);
        let sparse = QueryPlan::for_graph(100, 100, 10);
        assert!(sparse.delta == 0.0);
        assert_eq!(sparse.hop_target(100), 1);
        assert_eq!(QueryPlan::for_graph(1, 0, 1).hop_target(1), 1);
    }

    #[test]
    fn threshold_bracket() {
        let t = threshold_sigma();
        assert!(t > 1.0 / 3.0 && t < 0.3336, "{t}");
    }
}
