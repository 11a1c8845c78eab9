//! Fixed-step quadrature on uniform grids.

use std::ops::{Add, Mul};

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Returns the spacing of `grid` after checking it is strictly increasing and
/// uniform to `1e-9` relative.
pub fn uniform_spacing<T: Real>(grid: &[T]) -> Result<T> {
    if grid.len() < 2 {
        return Err(Error::contract("grid needs at least two points"));
    }
    let n = grid.len();
    let h = (grid[n - 1] - grid[0]) / T::from_count(n - 1);
    if !(h > T::zero()) || !h.is_finite() {
        return Err(Error::contract("grid must be strictly increasing"));
    }
    let tol = T::lit(1e-9) * h;
    for (i, &z) in grid.iter().enumerate() {
        if (z - (grid[0] + T::from_count(i) * h)).abs() > tol {
            return Err(Error::contract(format!("non-uniform grid near index {i}")));
        }
    }
    Ok(h)
}

/// Composite Simpson rule for samples spaced by `h`.
///
/// An odd number of intervals closes with Simpson's 3/8 rule on the last three;
/// a single interval falls back to the trapezoid.
pub fn simpson<T, V>(h: T, values: &[V]) -> V
where
    T: Real,
    V: Copy + Zero + Add<Output = V> + Mul<T, Output = V>,
{
    let n = values.len();
    match n {
        0 | 1 => return V::zero(),
        2 => return (values[0] + values[1]) * (h * T::lit(0.5)),
        _ => {}
    }
    let intervals = n - 1;
    let (main_end, tail) = if intervals.is_multiple_of(2) {
        (n - 1, false)
    } else {
        (n - 4, true)
    };
    let mut acc = V::zero();
    if main_end > 0 {
        let mut odd = V::zero();
        let mut even = V::zero();
        for (i, &v) in values[1..main_end].iter().enumerate() {
            if i % 2 == 0 {
                odd = odd + v;
            } else {
                even = even + v;
            }
        }
        acc = (values[0] + values[main_end] + odd * T::lit(4.0) + even * T::lit(2.0))
            * (h / T::lit(3.0));
    }
    if tail {
        let t = &values[main_end..];
        acc = acc + (t[0] + t[1] * T::lit(3.0) + t[2] * T::lit(3.0) + t[3]) * (h * T::lit(0.375));
    }
    acc
}

/// Composite trapezoid rule for samples spaced by `h`.
pub fn trapezoid<T, V>(h: T, values: &[V]) -> V
where
    T: Real,
    V: Copy + Zero + Add<Output = V> + Mul<T, Output = V>,
{
    match values.len() {
        0 | 1 => V::zero(),
        n => {
            let interior = values[1..n - 1].iter().fold(V::zero(), |a, &v| a + v);
            (interior + (values[0] + values[n - 1]) * T::lit(0.5)) * h
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    #[test]
    fn simpson_is_exact_for_cubics() {
        for n in [3usize, 4, 5, 8, 11] {
            let h = 2.0 / (n - 1) as f64;
            let v: Vec<f64> = (0..n).map(|i| {
                let x = -1.0 + i as f64 * h;
                x * x * x + 2.0 * x * x - x + 1.0
            }).collect();
            let exact = 4.0 / 3.0 + 2.0;
            assert!((simpson(h, &v) - exact).abs() < 1e-13, "n = {n}");
        }
    }

    #[test]
    fn complex_values_integrate() {
        let n = 2001;
        let h = std::f64::consts::PI / (n - 1) as f64;
        let v: Vec<Complex64> = (0..n).map(|i| Complex64::from_polar(1.0, i as f64 * h)).collect();
        let got = simpson(h, &v);
        assert!((got - Complex64::new(0.0, 2.0)).norm() < 1e-12);
    }

    #[test]
    fn rejects_nonuniform_grid() {
        assert!(uniform_spacing(&[0.0, 1.0, 2.5]).is_err());
        assert!(uniform_spacing(&[0.0]).is_err());
        assert!(uniform_spacing(&[1.0, 0.0]).is_err());
        let h = uniform_spacing(&[0.0, 0.5, 1.0, 1.5]).unwrap();
        assert_eq!(h, 0.5);
    }

    #[test]
    fn trapezoid_counts_single_cell_once() {
        let mut v = vec![0.0; 11];
        v[4] = 10.0;
        assert!((trapezoid(0.1f64, &v) - 1.0f64).abs() < 1e-15);
    }
}
