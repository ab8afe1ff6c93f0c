//! Fourth-order central finite differences.

pub(crate) const STEP: f64 = 1e-3;

pub(crate) fn first<F: Fn(f64) -> f64>(f: F, x: f64, h: f64) -> f64 {
    (f(x - 2.0 * h) - 8.0 * f(x - h) + 8.0 * f(x + h) - f(x + 2.0 * h)) / (12.0 * h)
}

pub(crate) fn second<F: Fn(f64) -> f64>(f: F, x: f64, h: f64) -> f64 {
    (-f(x - 2.0 * h) + 16.0 * f(x - h) - 30.0 * f(x) + 16.0 * f(x + h) - f(x + 2.0 * h))
        / (12.0 * h * h)
}

/// `∂²f/∂x∂y` at `(x, y)`.
pub(crate) fn mixed<F: Fn(f64, f64) -> f64>(f: F, x: f64, y: f64, h: f64) -> f64 {
    first(|xx| first(|yy| f(xx, yy), y, h), x, h)
}

/// `Δf` at `point`, any dimension.
pub(crate) fn laplacian<F: Fn(&[f64]) -> f64>(f: F, point: &[f64], h: f64) -> f64 {
    (0..point.len())
        .map(|a| {
            let along = |t: f64| {
                let mut p = point.to_vec();
                p[a] = t;
                f(&p)
            };
            second(along, point[a], h)
        })
        .sum()
}
