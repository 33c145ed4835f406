//! Gauss–Legendre rules and geometrically graded composite panels.

use std::f64::consts::PI;

/// Nodes and weights of the n-point Gauss–Legendre rule on [−1, 1].
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1);
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        // Tricomi initial guess, then Newton on P_n.
        let mut z = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, z);
            dp = d;
            let dz = p / d;
            z -= dz;
            if dz.abs() < 1e-16 {
                let (_, d) = legendre_with_derivative(n, z);
                dp = d;
                break;
            }
        }
        x[i] = -z;
        x[n - 1 - i] = z;
        let wi = 2.0 / ((1.0 - z * z) * dp * dp);
        w[i] = wi;
        w[n - 1 - i] = wi;
    }
    if n % 2 == 1 {
        x[n / 2] = 0.0;
    }
    (x, w)
}

fn legendre_with_derivative(n: usize, z: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = z;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * z * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (z * p1 - p0) / (z * z - 1.0);
    (p1, d)
}

/// Composite rule on [a, b] built from panels whose width starts at `h0`
/// at `a` and grows by `ratio` up to `h_max`.
#[derive(Debug, Clone)]
pub struct GradedRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GradedRule {
    pub fn new(a: f64, b: f64, h0: f64, ratio: f64, h_max: f64, order: usize) -> Self {
        assert!(b > a && h0 > 0.0 && ratio >= 1.0 && h_max >= h0);
        let (gx, gw) = gauss_legendre(order);
        let mut nodes = Vec::new();
        let mut weights = Vec::new();
        let mut left = a;
        let mut h = h0;
        while left < b {
            let mut right = (left + h).min(b);
            // avoid a sliver panel at the end
            if b - right < 0.25 * h {
                right = b;
            }
            let half = 0.5 * (right - left);
            let mid = 0.5 * (right + left);
            for (x, w) in gx.iter().zip(&gw) {
                nodes.push(mid + half * x);
                weights.push(half * w);
            }
            left = right;
            h = (h * ratio).min(h_max);
        }
        GradedRule { nodes, weights }
    }

    pub fn integrate<F: Fn(f64) -> f64>(&self, f: F) -> f64 {
        pairwise_sum(self.nodes.iter().zip(&self.weights).map(|(&x, &w)| w * f(x)))
    }
}

/// Sum with a fixed pairwise tree, independent of how the terms were produced.
pub fn pairwise_sum<I: IntoIterator<Item = f64>>(terms: I) -> f64 {
    let v: Vec<f64> = terms.into_iter().collect();
    pairwise_slice(&v)
}

pub fn pairwise_slice(v: &[f64]) -> f64 {
    if v.len() <= 16 {
        return v.iter().sum();
    }
    let mid = v.len() / 2;
    pairwise_slice(&v[..mid]) + pairwise_slice(&v[mid..])
}
