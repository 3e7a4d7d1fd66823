//! The torsion integrand `φ`, its conjugate `φ*`, and the ε-regularized
//! derivative of `φ*` that replaces the jump of `∂φ*` across the unit
//! circle by an affine ramp of width `ε`.

/// `|z|` inside the unit disk, `(|z|² + 1)/2` outside.
pub fn phi(z: [f64; 2]) -> f64 {
    let r = z[0].hypot(z[1]);
    if r <= 1.0 {
        r
    } else {
        0.5 * (r * r + 1.0)
    }
}

/// `½(|p|² − 1)₊`
pub fn phi_star(p: [f64; 2]) -> f64 {
    let r2 = p[0] * p[0] + p[1] * p[1];
    (0.5 * (r2 - 1.0)).max(0.0)
}

/// Lipschitz constant `(2 + ε)/(2ε)` of [`dphi_star_eps`].
pub fn regularized_lipschitz(epsilon: f64) -> f64 {
    (2.0 + epsilon) / (2.0 * epsilon)
}

/// Regularized derivative of `φ*`: zero for `|p| < 1 − ε/2`, `p` for
/// `|p| > 1 + ε/2`, and `((2+ε)/(2ε))(|p| + ε/2 − 1) p/|p|` in between.
/// Returns zero at `p = 0`.
pub fn dphi_star_eps(p: [f64; 2], epsilon: f64) -> [f64; 2] {
    let r = p[0].hypot(p[1]);
    let scale = radial_scale(r, epsilon);
    [scale * p[0], scale * p[1]]
}

/// Factor `s(r)` with `∂φ*_ε(p) = s(|p|) p`.
#[inline]
pub(crate) fn radial_scale(r: f64, epsilon: f64) -> f64 {
    let half = 0.5 * epsilon;
    if r > 1.0 + half {
        1.0
    } else if r < 1.0 - half || r == 0.0 {
        0.0
    } else {
        regularized_lipschitz(epsilon) * (r + half - 1.0) / r
    }
}

/// Primitive of [`dphi_star_eps`] vanishing on the flat region.
pub fn phi_star_eps(p: [f64; 2], epsilon: f64) -> f64 {
    let r = p[0].hypot(p[1]);
    let half = 0.5 * epsilon;
    let lg = regularized_lipschitz(epsilon);
    let lo = (1.0 - half).max(0.0);
    let ramp = |s: f64| {
        // ∫_lo^s lg (t + ε/2 − 1) dt
        let a = s + half - 1.0;
        let b = lo + half - 1.0;
        0.5 * lg * (a * a - b * b)
    };
    if r <= lo {
        0.0
    } else if r <= 1.0 + half {
        ramp(r)
    } else {
        ramp(1.0 + half) + 0.5 * (r * r - (1.0 + half) * (1.0 + half))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn phi_values() {
        assert_eq!(phi([0.0, 0.0]), 0.0);
        assert_eq!(phi([3.0, 4.0]), 13.0);
        assert_eq!(phi([0.6, 0.8]), 1.0);
        let just_out = phi([1.0 + 1e-12, 0.0]);
        assert!((just_out - 1.0).abs() < 1e-11);
    }

    #[test]
    fn phi_star_values() {
        assert_eq!(phi_star([0.0, 0.0]), 0.0);
        assert_eq!(phi_star([1.0, 0.0]), 0.0);
        assert_eq!(phi_star([0.0, 2.0]), 1.5);
    }

    #[test]
    fn regularized_derivative_examples() {
        assert_eq!(dphi_star_eps([0.3, 0.4], 0.1), [0.0, 0.0]);
        let d = dphi_star_eps([1.0, 0.0], 0.1);
        assert!((d[0] - 0.525).abs() < 1e-12 && d[1] == 0.0);
        let eps = 0.1;
        let r = 1.0 + eps / 2.0;
        let d = dphi_star_eps([0.0, r], eps);
        assert!((d[1] - (2.0 + eps) / 2.0).abs() < 1e-12);
        assert_eq!(dphi_star_eps([0.0, 0.0], 3.0), [0.0, 0.0]);
    }

    #[test]
    fn primitive_matches_derivative() {
        let eps = 0.2;
        for &r in &[0.5, 0.95, 1.0, 1.07, 1.5, 2.5] {
            let dr = 1e-6;
            let fd = (phi_star_eps([r + dr, 0.0], eps) - phi_star_eps([r - dr, 0.0], eps)) / (2.0 * dr);
            assert!((fd - dphi_star_eps([r, 0.0], eps)[0]).abs() < 1e-6, "r={r}");
        }
    }
}
