use num_complex::Complex64;
use num_traits::ToPrimitive;

use super::{Rational, UniPoly};

pub fn rational_to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

fn horner(cs: &[Complex64], z: Complex64) -> (Complex64, Complex64) {
    let mut p = Complex64::new(0.0, 0.0);
    let mut dp = Complex64::new(0.0, 0.0);
    for c in cs.iter().rev() {
        dp = dp * z + p;
        p = p * z + c;
    }
    (p, dp)
}

/// Approximate complex roots of a nonconstant polynomial (Aberth–Ehrlich iteration).
///
/// Used only to seed exact or certified computations; callers never decide
/// equality from these values.
pub fn poly_roots_f64(f: &UniPoly) -> Vec<Complex64> {
    let n = match f.degree() {
        Some(n) if n >= 1 => n,
        _ => return Vec::new(),
    };
    let lc = rational_to_f64(&f.lc());
    let cs: Vec<Complex64> = f
        .coeffs()
        .iter()
        .map(|c| Complex64::new(rational_to_f64(c) / lc, 0.0))
        .collect();
    if n == 1 {
        return vec![-cs[0]];
    }
    // Cauchy bound for the initial circle.
    let bound = 1.0 + cs[..n].iter().map(|c| c.norm()).fold(0.0, f64::max);
    let radius = bound.min(1e6).max(1e-3) * 0.5 + 0.1;
    let mut zs: Vec<Complex64> = (0..n)
        .map(|k| {
            let theta = 2.0 * std::f64::consts::PI * (k as f64 + 0.25) / n as f64 + 0.4;
            Complex64::from_polar(radius, theta)
        })
        .collect();
    for _ in 0..2000 {
        let mut moved = 0.0f64;
        for i in 0..n {
            let (p, dp) = horner(&cs, zs[i]);
            if p.norm() == 0.0 {
                continue;
            }
            let ratio = p / dp;
            let mut s = Complex64::new(0.0, 0.0);
            for j in 0..n {
                if j != i {
                    let d = zs[i] - zs[j];
                    if d.norm() > 0.0 {
                        s += d.inv();
                    }
                }
            }
            let w = ratio / (Complex64::new(1.0, 0.0) - ratio * s);
            if w.is_finite() {
                zs[i] -= w;
                moved = moved.max(w.norm() / (1.0 + zs[i].norm()));
            }
        }
        if moved < 1e-15 {
            break;
        }
    }
    // Final Newton polish.
    for z in zs.iter_mut() {
        for _ in 0..3 {
            let (p, dp) = horner(&cs, *z);
            if dp.norm() > 0.0 {
                let step = p / dp;
                if step.is_finite() {
                    *z -= step;
                }
            }
        }
    }
    zs
}

/// Inverse of a small dense matrix by Gauss-Jordan with partial pivoting.
pub fn invert_f64(m: &[Vec<f64>]) -> Option<Vec<Vec<f64>>> {
    let n = m.len();
    let mut a: Vec<Vec<f64>> = m
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let mut r = r.clone();
            r.extend((0..n).map(|j| if i == j { 1.0 } else { 0.0 }));
            r
        })
        .collect();
    for c in 0..n {
        let p = (c..n).max_by(|&x, &y| a[x][c].abs().total_cmp(&a[y][c].abs()))?;
        if a[p][c].abs() < 1e-12 {
            return None;
        }
        a.swap(c, p);
        let d = a[c][c];
        for v in a[c].iter_mut() {
            *v /= d;
        }
        for r in 0..n {
            if r != c {
                let f = a[r][c];
                for k in 0..2 * n {
                    a[r][k] -= f * a[c][k];
                }
            }
        }
    }
    Some(a.into_iter().map(|r| r[n..].to_vec()).collect())
}
