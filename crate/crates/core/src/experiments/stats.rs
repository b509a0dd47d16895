use super::ExperimentError;

/// Standard normal CDF by the Abramowitz–Stegun rational approximation
/// 26.2.17 (Hastings), absolute error below 7.5·10⁻⁸.
pub fn normal_cdf(x: f64) -> f64 {
    const P: f64 = 0.231_641_9;
    const B: [f64; 5] = [
        0.319_381_530,
        -0.356_563_782,
        1.781_477_937,
        -1.821_255_978,
        1.330_274_429,
    ];
    if x.is_nan() {
        return f64::NAN;
    }
    let z = x.abs();
    let t = 1.0 / (1.0 + P * z);
    let poly = t * (B[0] + t * (B[1] + t * (B[2] + t * (B[3] + t * B[4]))));
    let density = (-0.5 * z * z).exp() / (2.0 * std::f64::consts::PI).sqrt();
    let upper = density * poly;
    if x >= 0.0 {
        1.0 - upper
    } else {
        upper
    }
}

/// One-sample Kolmogorov–Smirnov distance to the standard normal:
/// maxᵢ max(i/n − Φ(x₍ᵢ₎), Φ(x₍ᵢ₎) − (i−1)/n) over the sorted sample.
pub fn ks_statistic(sample: &[f64]) -> Result<f64, ExperimentError> {
    if sample.is_empty() {
        return Err(ExperimentError::InvalidArgument(
            "KS statistic of an empty sample".into(),
        ));
    }
    if sample.iter().any(|x| x.is_nan()) {
        return Err(ExperimentError::InvalidArgument("sample contains NaN".into()));
    }
    let mut sorted = sample.to_vec();
    sorted.sort_by(f64::total_cmp);
    let n = sorted.len() as f64;
    let mut d: f64 = 0.0;
    for (i, &x) in sorted.iter().enumerate() {
        let cdf = normal_cdf(x);
        let above = (i + 1) as f64 / n - cdf;
        let below = cdf - i as f64 / n;
        d = d.max(above).max(below);
    }
    Ok(d.clamp(0.0, 1.0))
}

/// Sample mean and unbiased variance. The variance of a single value is 0.
pub fn mean_variance(sample: &[f64]) -> (f64, f64) {
    let n = sample.len();
    if n == 0 {
        return (f64::NAN, f64::NAN);
    }
    let mean = sample.iter().sum::<f64>() / n as f64;
    if n == 1 {
        return (mean, 0.0);
    }
    let ss: f64 = sample.iter().map(|x| (x - mean) * (x - mean)).sum();
    (mean, ss / (n - 1) as f64)
}

/// Least-squares slope of y against x.
pub fn least_squares_slope(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len().min(y.len()) as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = x.iter().map(|a| (a - mx) * (a - mx)).sum();
    sxy / sxx
}
