//! Independent numerical-integration oracles for conjugate posteriors.
//!
//! Each oracle integrates prior × likelihood directly and never calls the
//! closed-form posterior recursions it is used to check.

#![allow(dead_code)]

/// Trapezoid moments (mean, variance) of an unnormalized 1-d log density on [lo, hi].
fn moments_1d(log_density: &dyn Fn(f64) -> f64, lo: f64, hi: f64, points: usize) -> (f64, f64) {
    let h = (hi - lo) / (points - 1) as f64;
    let xs: Vec<f64> = (0..points).map(|i| lo + h * i as f64).collect();
    let logs: Vec<f64> = xs.iter().map(|&x| log_density(x)).collect();
    let peak = logs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let (mut z, mut m1, mut m2) = (0.0, 0.0, 0.0);
    for (i, (&x, &l)) in xs.iter().zip(&logs).enumerate() {
        let w = if i == 0 || i + 1 == points { 0.5 } else { 1.0 };
        let p = w * (l - peak).exp();
        z += p;
        m1 += p * x;
        m2 += p * x * x;
    }
    let mean = m1 / z;
    (mean, m2 / z - mean * mean)
}

/// Moments of a density on the real line, with the window re-centred on the
/// running estimate until it stabilizes.
pub fn real_line_moments(log_density: &dyn Fn(f64) -> f64, guess_mean: f64, guess_sd: f64) -> (f64, f64) {
    let (mut mean, mut sd) = (guess_mean, guess_sd);
    let mut var = sd * sd;
    for _ in 0..4 {
        let (m, v) = moments_1d(log_density, mean - 14.0 * sd, mean + 14.0 * sd, 4001);
        mean = m;
        var = v;
        sd = v.sqrt();
    }
    (mean, var)
}

/// Posterior (mean, variance) of a Gaussian arm mean from prior N(μ0, σ0²)
/// and rewards observed with N(·, σ²) noise.
pub fn gaussian_posterior(mu0: f64, sigma0: f64, sigma: f64, rewards: &[f64]) -> (f64, f64) {
    let log_density = |x: f64| {
        let mut l = -0.5 * ((x - mu0) / sigma0).powi(2);
        for y in rewards {
            l -= 0.5 * ((y - x) / sigma).powi(2);
        }
        l
    };
    real_line_moments(&log_density, mu0, sigma0)
}

fn softplus(u: f64) -> f64 {
    if u > 0.0 {
        u + (-u).exp().ln_1p()
    } else {
        u.exp().ln_1p()
    }
}

/// Tanh-sinh moments (mean, variance) of x^(a-1) (1-x)^(b-1) on (0, 1).
/// Handles integrable endpoint singularities.
pub fn unit_interval_moments(a: f64, b: f64) -> (f64, f64) {
    let h = 1.0 / 128.0;
    let steps = (5.0 / h) as i64;
    let mut nodes = Vec::new();
    for i in -steps..=steps {
        let t = i as f64 * h;
        let u = std::f64::consts::PI * t.sinh();
        let log_x = -softplus(-u);
        let log_1mx = -softplus(u);
        // dx/dt = x (1 - x) π cosh t
        let log_w = log_x + log_1mx + (std::f64::consts::PI * t.cosh()).ln();
        let log_f = (a - 1.0) * log_x + (b - 1.0) * log_1mx + log_w;
        nodes.push((log_x.exp(), log_f));
    }
    let peak = nodes.iter().map(|n| n.1).fold(f64::NEG_INFINITY, f64::max);
    let (mut z, mut m1, mut m2) = (0.0, 0.0, 0.0);
    for (x, l) in nodes {
        let p = (l - peak).exp();
        z += p;
        m1 += p * x;
        m2 += p * x * x;
    }
    let mean = m1 / z;
    (mean, m2 / z - mean * mean)
}

/// Posterior (mean, variance) of a Bernoulli mean under Beta(α, β) after binary rewards.
pub fn beta_posterior(alpha: f64, beta: f64, rewards: &[f64]) -> (f64, f64) {
    let successes: f64 = rewards.iter().sum();
    let failures = rewards.len() as f64 - successes;
    unit_interval_moments(alpha + successes, beta + failures)
}

/// Posterior mean and covariance of θ ∈ R² under prior N(θ0, Σ0) and
/// observations y = aᵀθ + N(0, σ²), by tensor trapezoid integration.
pub fn linear_posterior_2d(
    theta0: [f64; 2],
    cov0: [[f64; 2]; 2],
    sigma: f64,
    actions: &[[f64; 2]],
    rewards: &[f64],
) -> ([f64; 2], [[f64; 2]; 2]) {
    let det = cov0[0][0] * cov0[1][1] - cov0[0][1] * cov0[1][0];
    let inv = [
        [cov0[1][1] / det, -cov0[0][1] / det],
        [-cov0[1][0] / det, cov0[0][0] / det],
    ];
    let log_density = |x: f64, y: f64| {
        let dx = x - theta0[0];
        let dy = y - theta0[1];
        let mut l = -0.5 * (dx * (inv[0][0] * dx + inv[0][1] * dy) + dy * (inv[1][0] * dx + inv[1][1] * dy));
        for (a, r) in actions.iter().zip(rewards) {
            l -= 0.5 * ((r - a[0] * x - a[1] * y) / sigma).powi(2);
        }
        l
    };
    let mut mean = theta0;
    let mut sd = [cov0[0][0].sqrt(), cov0[1][1].sqrt()];
    let mut cov = cov0;
    let points = 401;
    for _ in 0..4 {
        let lo = [mean[0] - 12.0 * sd[0], mean[1] - 12.0 * sd[1]];
        let step = [24.0 * sd[0] / (points - 1) as f64, 24.0 * sd[1] / (points - 1) as f64];
        let mut grid = Vec::with_capacity(points * points);
        for i in 0..points {
            for j in 0..points {
                let x = lo[0] + step[0] * i as f64;
                let y = lo[1] + step[1] * j as f64;
                let w = if i == 0 || i + 1 == points { 0.5 } else { 1.0 }
                    * if j == 0 || j + 1 == points { 0.5 } else { 1.0 };
                grid.push((x, y, w, log_density(x, y)));
            }
        }
        let peak = grid.iter().map(|g| g.3).fold(f64::NEG_INFINITY, f64::max);
        let (mut z, mut sx, mut sy, mut sxx, mut syy, mut sxy) = (0.0, 0.0, 0.0, 0.0, 0.0, 0.0);
        for (x, y, w, l) in grid {
            let p = w * (l - peak).exp();
            z += p;
            sx += p * x;
            sy += p * y;
            sxx += p * x * x;
            syy += p * y * y;
            sxy += p * x * y;
        }
        mean = [sx / z, sy / z];
        cov = [
            [sxx / z - mean[0] * mean[0], sxy / z - mean[0] * mean[1]],
            [sxy / z - mean[0] * mean[1], syy / z - mean[1] * mean[1]],
        ];
        sd = [cov[0][0].sqrt(), cov[1][1].sqrt()];
    }
    (mean, cov)
}

/// |value - reference| within `rel` of max(|reference|, scale).
pub fn close(value: f64, reference: f64, scale: f64, rel: f64) -> bool {
    (value - reference).abs() <= rel * reference.abs().max(scale)
}
