//! Deterministic direction sets on the unit sphere of a tangent space,
//! in orthonormal frame coordinates.

use alloc::vec::Vec;

/// `n` points of the Fibonacci lattice.
pub fn fibonacci(n: usize) -> Vec<[f64; 3]> {
    let golden = core::f64::consts::PI * (3.0 - libm::sqrt(5.0));
    (0..n)
        .map(|i| {
            let z = 1.0 - (2.0 * i as f64 + 1.0) / n as f64;
            let r = libm::sqrt((1.0 - z * z).max(0.0));
            let phi = golden * i as f64;
            [r * libm::cos(phi), r * libm::sin(phi), z]
        })
        .collect()
}

/// The 3 axes, 6 face diagonals and 4 body diagonals, normalized.
pub fn special_directions() -> [[f64; 3]; 13] {
    let s2 = core::f64::consts::FRAC_1_SQRT_2;
    let s3 = 1.0 / crate::scalar::SQRT_3;
    [
        [1.0, 0.0, 0.0],
        [0.0, 1.0, 0.0],
        [0.0, 0.0, 1.0],
        [s2, s2, 0.0],
        [s2, -s2, 0.0],
        [s2, 0.0, s2],
        [s2, 0.0, -s2],
        [0.0, s2, s2],
        [0.0, s2, -s2],
        [s3, s3, s3],
        [s3, s3, -s3],
        [s3, -s3, s3],
        [-s3, s3, s3],
    ]
}

/// Fibonacci lattice of size `n` followed by the special directions.
pub fn sample_directions(n: usize) -> Vec<[f64; 3]> {
    let mut v = fibonacci(n);
    v.extend_from_slice(&special_directions());
    v
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn directions_are_unit() {
        for v in sample_directions(100) {
            let n = v[0] * v[0] + v[1] * v[1] + v[2] * v[2];
            assert!((n - 1.0).abs() < 1e-14);
        }
        assert_eq!(sample_directions(512).len(), 525);
    }
}
