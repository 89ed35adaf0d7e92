//! Independent numerical oracles for the integration tests: Gauss-Legendre
//! quadrature for the overlap integrals and the Jacobi triple product for
//! theta_3. Nothing here touches the closed forms under test.

use std::f64::consts::PI;

/// Gauss-Legendre nodes and weights on `[-1, 1]` by Newton iteration on
/// the Legendre recurrence.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 2);
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut z = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        for _ in 0..100 {
            let (p, dp) = legendre_with_derivative(n, z);
            let dz = p / dp;
            z -= dz;
            if dz.abs() < 1e-15 {
                break;
            }
        }
        let (_, dp) = legendre_with_derivative(n, z);
        let w = 2.0 / ((1.0 - z * z) * dp * dp);
        nodes[i] = -z;
        nodes[n - 1 - i] = z;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p_prev = 1.0;
    let mut p = x;
    for k in 2..=n {
        let pk = (((2 * k - 1) as f64) * x * p - ((k - 1) as f64) * p_prev) / (k as f64);
        p_prev = p;
        p = pk;
    }
    let dp = (n as f64) * (x * p - p_prev) / (x * x - 1.0);
    (p, dp)
}

/// Quadrature value of `<psi_m | phi_n>` over the half trap `(-L/2, 0)`,
/// with node count scaled to the oscillation of the integrand.
pub fn overlap_by_quadrature(m: usize, n: usize, length: f64) -> f64 {
    let nodes_needed = (10 * m.max(n)).max(40);
    let (xs, ws) = gauss_legendre(nodes_needed);
    let a = -0.5 * length;
    let b = 0.0;
    let mid = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let psi = |x: f64| (2.0 / length).sqrt() * ((m as f64) * PI * (x + 0.5 * length) / length).sin();
    let phi = |x: f64| (4.0 / length).sqrt() * (2.0 * PI * (n as f64) * x / length).sin();
    xs.iter()
        .zip(&ws)
        .map(|(&t, &w)| {
            let x = mid + half * t;
            w * half * psi(x) * phi(x)
        })
        .sum()
}

/// `theta_3(0, x)` by the Jacobi triple product
/// `prod_{k>=1} (1 - x^{2k}) (1 + x^{2k-1})^2`, independent of the
/// partition-function series.
pub fn theta3_by_product(x: f64) -> f64 {
    assert!((0.0..1.0).contains(&x));
    let mut result = 1.0;
    let mut k = 1u32;
    loop {
        let even = x.powi(2 * k as i32);
        let odd = x.powi(2 * k as i32 - 1);
        let factor = (1.0 - even) * (1.0 + odd) * (1.0 + odd);
        result *= factor;
        if odd < 1e-18 {
            break;
        }
        k += 1;
    }
    result
}
