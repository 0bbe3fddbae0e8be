use crate::error::{Error, Result};

/// `#{s_i <= q} / n` for ascending `sorted` samples.
pub fn empirical_cdf(sorted: &[f64], q: f64) -> Result<f64> {
    Ok(EmpiricalCdf::from_sorted(sorted)?.eval(q))
}

/// Empirical distribution over a borrowed, ascending sample.
#[derive(Debug, Clone, Copy)]
pub struct EmpiricalCdf<'a> {
    sorted: &'a [f64],
}

impl<'a> EmpiricalCdf<'a> {
    pub fn from_sorted(sorted: &'a [f64]) -> Result<Self> {
        if sorted.is_empty() {
            return Err(Error::Empty("samples"));
        }
        debug_assert!(sorted.windows(2).all(|w| w[0] <= w[1]));
        Ok(EmpiricalCdf { sorted })
    }

    pub fn len(&self) -> usize {
        self.sorted.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sorted.is_empty()
    }

    pub fn samples(&self) -> &'a [f64] {
        self.sorted
    }

    pub fn eval(&self, q: f64) -> f64 {
        self.sorted.partition_point(|&s| s <= q) as f64 / self.sorted.len() as f64
    }

    /// Smallest sample `s` with `F(s) >= p`, for `p` in `(0, 1]`.
    pub fn quantile(&self, p: f64) -> Result<f64> {
        if !(p > 0.0 && p <= 1.0) {
            return Err(Error::domain("p", p, "(0, 1]"));
        }
        let n = self.sorted.len();
        let rank = ((p * n as f64).ceil() as usize).clamp(1, n);
        Ok(self.sorted[rank - 1])
    }

    /// Dvoretzky-Kiefer-Wolfowitz band half-width at confidence `1 - alpha`.
    pub fn dkw_epsilon(&self, alpha: f64) -> f64 {
        ((2.0 / alpha).ln() / (2.0 * self.sorted.len() as f64)).sqrt()
    }
}

/// The 1st to 99th percentiles of several samples pooled together.
pub fn pooled_percentiles(samples: &[&[f64]]) -> Result<Vec<f64>> {
    let mut pooled: Vec<f64> = samples.iter().flat_map(|s| s.iter().copied()).collect();
    if pooled.is_empty() {
        return Err(Error::Empty("samples"));
    }
    pooled.sort_by(f64::total_cmp);
    let cdf = EmpiricalCdf::from_sorted(&pooled)?;
    (1..100).map(|k| cdf.quantile(k as f64 / 100.0)).collect()
}

/// Whether each CDF lies above the other by more than `eps` somewhere on `grid`.
pub fn cdfs_cross(a: &EmpiricalCdf<'_>, b: &EmpiricalCdf<'_>, grid: &[f64], eps: f64) -> bool {
    let (mut above, mut below) = (false, false);
    for &q in grid {
        let d = a.eval(q) - b.eval(q);
        above |= d > eps;
        below |= d < -eps;
    }
    above && below
}

/// Number of pairs among `cdfs` that cross on their pooled percentiles, with
/// `eps` the DKW band half-width of the smallest sample at level `alpha`.
pub fn count_crossing_pairs(cdfs: &[EmpiricalCdf<'_>], alpha: f64) -> Result<usize> {
    let samples: Vec<&[f64]> = cdfs.iter().map(|c| c.samples()).collect();
    let grid = pooled_percentiles(&samples)?;
    let eps = cdfs
        .iter()
        .map(|c| c.dkw_epsilon(alpha))
        .fold(0.0, f64::max);
    let mut count = 0;
    for i in 0..cdfs.len() {
        for j in i + 1..cdfs.len() {
            if cdfs_cross(&cdfs[i], &cdfs[j], &grid, eps) {
                count += 1;
            }
        }
    }
    Ok(count)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn step_function_values() {
        let s = [1.0, 2.0, 2.0, 5.0];
        assert_eq!(empirical_cdf(&s, 0.5).unwrap(), 0.0);
        assert_eq!(empirical_cdf(&s, 1.0).unwrap(), 0.25);
        assert_eq!(empirical_cdf(&s, 2.0).unwrap(), 0.75);
        assert_eq!(empirical_cdf(&s, 4.9).unwrap(), 0.75);
        assert_eq!(empirical_cdf(&s, 5.0).unwrap(), 1.0);
        assert!(empirical_cdf(&[], 0.0).is_err());
    }

    #[test]
    fn quantile_inverts_the_cdf() {
        let s: Vec<f64> = (1..=100).map(f64::from).collect();
        let cdf = EmpiricalCdf::from_sorted(&s).unwrap();
        assert_eq!(cdf.quantile(0.05).unwrap(), 5.0);
        assert_eq!(cdf.quantile(0.051).unwrap(), 6.0);
        assert_eq!(cdf.quantile(1.0).unwrap(), 100.0);
        assert!(cdf.quantile(0.0).is_err());
        for p in [0.01, 0.37, 0.5, 0.99] {
            let q = cdf.quantile(p).unwrap();
            assert!(cdf.eval(q) >= p);
        }
    }

    #[test]
    fn crossing_detection() {
        let a: Vec<f64> = (0..1000).map(|i| i as f64).collect();
        let shifted: Vec<f64> = (0..1000).map(|i| i as f64 + 300.0).collect();
        // same median, wider spread: crosses a
        let wide: Vec<f64> = (0..1000).map(|i| 2.0 * i as f64 - 500.0).collect();
        let ca = EmpiricalCdf::from_sorted(&a).unwrap();
        let cs = EmpiricalCdf::from_sorted(&shifted).unwrap();
        let cw = EmpiricalCdf::from_sorted(&wide).unwrap();
        let grid = pooled_percentiles(&[&a, &shifted, &wide]).unwrap();
        assert_eq!(grid.len(), 99);
        assert!(!cdfs_cross(&ca, &cs, &grid, 0.01));
        assert!(cdfs_cross(&ca, &cw, &grid, 0.01));
        assert!(!cdfs_cross(&ca, &ca, &grid, 0.0));
        assert_eq!(count_crossing_pairs(&[ca, cs, cw], 0.05).unwrap(), 2);
    }

    #[test]
    fn dkw_band() {
        let s = vec![0.0; 10_000];
        let cdf = EmpiricalCdf::from_sorted(&s).unwrap();
        assert!((cdf.dkw_epsilon(0.05) - 0.013581).abs() < 1e-6);
    }
}
