//! Recursion kernels.
//!
//! `F_{2k-1}(t) = int_0^inf x^{2k-1} H(x, t) dx` is an even polynomial of
//! degree `2k` whose `t^{2k-2i}` coefficient is a rational multiple of
//! `p^i`. The two integral transforms that the recursion applies to child
//! volumes reduce to these polynomials, so the recursion itself never
//! integrates anything numerically.

use std::sync::{Arc, RwLock};

use num_bigint::BigInt;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::exact::{self, ratio, BigRational};
use crate::poly::{Monomial, VolumePolynomial};

/// `F_{2k-1}(t)` stored as `coeffs[i]`, the rational multiplying `p^i t^{2k-2i}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KernelPolynomial {
    k: u32,
    coeffs: Vec<BigRational>,
}

impl KernelPolynomial {
    pub fn k(&self) -> u32 {
        self.k
    }

    /// `F_{2k-1}` has degree `2k` in `t`.
    pub fn degree(&self) -> u32 {
        2 * self.k
    }

    /// Rational multiplying `p^i t^{2k-2i}`, for `i = 0..=k`.
    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    /// Coefficient of `t^{t_exp}` as `(rational, p exponent)`. Odd or
    /// out-of-range exponents give zero.
    pub fn coefficient(&self, t_exp: u32) -> (BigRational, u32) {
        if t_exp % 2 == 1 || t_exp > 2 * self.k {
            return (BigRational::zero(), 0);
        }
        let i = self.k - t_exp / 2;
        (self.coeffs[i as usize].clone(), i)
    }

    pub fn eval(&self, t: f64) -> f64 {
        let p = std::f64::consts::PI * std::f64::consts::PI;
        let x = t * t;
        self.coeffs
            .iter()
            .enumerate()
            .map(|(i, c)| exact::to_f64(c) * p.powi(i as i32) * x.powi(self.k as i32 - i as i32))
            .sum()
    }

    /// The kernel as a polynomial in `x_1 = t^2` and `p`.
    pub fn as_x_poly(&self) -> VolumePolynomial {
        let mut out = VolumePolynomial::zero(0, 1);
        for (i, c) in self.coeffs.iter().enumerate() {
            out.add_term(Monomial::new(i as u32, vec![self.k - i as u32]), c.clone());
        }
        out
    }
}

static KERNELS: RwLock<Vec<Arc<KernelPolynomial>>> = RwLock::new(Vec::new());

/// `F_{2k-1}(t) = (2k-1)! sum_{i=0}^{k} zeta(2i) (2^{2i+1} - 4) / (2k-2i)! t^{2k-2i}`,
/// memoized. Panics if `k == 0`.
pub fn kernel_f(k: u32) -> Arc<KernelPolynomial> {
    assert!(k >= 1, "kernel F_(2k-1) needs k >= 1");
    let idx = k as usize - 1;
    if let Some(f) = KERNELS.read().expect("kernel table poisoned").get(idx) {
        return Arc::clone(f);
    }
    let mut table = KERNELS.write().expect("kernel table poisoned");
    while table.len() <= idx {
        let kk = table.len() as u32 + 1;
        table.push(Arc::new(build_kernel(kk)));
    }
    Arc::clone(&table[idx])
}

fn build_kernel(k: u32) -> KernelPolynomial {
    let lead = exact::factorial(2 * k - 1);
    let coeffs = (0..=k)
        .map(|i| {
            let weight = (BigInt::from(1) << (2 * i + 1) as usize) - 4;
            let q = exact::zeta_even_coeff(i as usize);
            q * BigRational::new(&lead * weight, exact::factorial(2 * k - 2 * i))
        })
        .collect();
    KernelPolynomial { k, coeffs }
}

/// Coefficient `(2a+1)! (2b+1)! / (2a+2b+3)!` picked up by a child monomial
/// `x^{2a} y^{2b}` under `int int x y H(x+y, t) dx dy`.
pub fn double_factor(a: u32, b: u32) -> BigRational {
    BigRational::new(
        exact::factorial(2 * a + 1) * exact::factorial(2 * b + 1),
        exact::factorial(2 * a + 2 * b + 3),
    )
}

/// `int int x^{2a+1} y^{2b+1} H(x+y, L_1) dx dy` as a polynomial in `x_1`:
/// `(2a+1)!(2b+1)!/(2a+2b+3)! F_{2a+2b+3}(L_1)`.
pub fn transform_double(a: u32, b: u32) -> VolumePolynomial {
    kernel_f(a + b + 2).as_x_poly().scale(&double_factor(a, b))
}

/// `F_{2a+1}(L_1 + L_k) + F_{2a+1}(L_1 - L_k)` as a polynomial in
/// `(x_1, x_k)`, the image of a child monomial `x^{2a}` under
/// `int x [H(x, L_1 + L_k) + H(x, L_1 - L_k)] dx`.
pub fn transform_boundary(a: u32) -> VolumePolynomial {
    let f = kernel_f(a + 1);
    let mut out = VolumePolynomial::zero(0, 2);
    for (i, c) in f.coeffs().iter().enumerate() {
        let j = f.k() - i as u32;
        // (s+d)^{2j} + (s-d)^{2j} = 2 sum_l C(2j, 2l) s^{2j-2l} d^{2l}
        for l in 0..=j {
            let w = BigRational::from_integer(exact::binomial(2 * j, 2 * l) * 2);
            out.add_term(Monomial::new(i as u32, vec![j - l, l]), c * w);
        }
    }
    out
}

/// `1 / (1 + e^z)` without overflow.
fn logistic_neg(z: f64) -> f64 {
    if z > 0.0 {
        let e = (-z).exp();
        e / (1.0 + e)
    } else {
        1.0 / (1.0 + z.exp())
    }
}

/// `H(x, y) = 1/(1 + e^{(x+y)/2}) + 1/(1 + e^{(x-y)/2})`.
pub fn eval_h(x: f64, y: f64) -> f64 {
    logistic_neg((x + y) / 2.0) + logistic_neg((x - y) / 2.0)
}

/// `D(x, y, z) = 2 log((e^{x/2} + e^{(y+z)/2}) / (e^{-x/2} + e^{(y+z)/2}))`.
pub fn eval_d(x: f64, y: f64, z: f64) -> f64 {
    let s = (y + z) / 2.0;
    let log_sum = |a: f64, b: f64| a.max(b) + (-(a - b).abs()).exp().ln_1p();
    2.0 * (log_sum(x / 2.0, s) - log_sum(-x / 2.0, s))
}

/// `R(x, y, z) = x - log((cosh(y/2) + cosh((x+z)/2)) / (cosh(y/2) + cosh((x-z)/2)))`.
pub fn eval_r(x: f64, y: f64, z: f64) -> f64 {
    let c = (y / 2.0).cosh();
    x - ((c + ((x + z) / 2.0).cosh()) / (c + ((x - z) / 2.0).cosh())).ln()
}

/// Published coefficients of `F_1, F_3, F_5, F_7` (`k = 1..=4`), in the
/// layout of [`KernelPolynomial::coeffs`].
pub fn published_kernel(k: u32) -> Option<Vec<BigRational>> {
    let c: &[(i64, i64)] = match k {
        1 => &[(1, 2), (2, 3)],
        2 => &[(1, 4), (2, 1), (28, 15)],
        3 => &[(1, 6), (10, 3), (56, 3), (992, 63)],
        4 => &[(1, 8), (14, 3), (196, 3), (992, 3), (4064, 15)],
        _ => return None,
    };
    Some(c.iter().map(|&(a, b)| ratio(a, b)).collect())
}

#[derive(Clone, Debug, PartialEq)]
pub struct QuadratureReport {
    pub k: u32,
    pub t: f64,
    pub upper_limit: f64,
    pub numeric: f64,
    pub exact: f64,
    pub relative_error: f64,
    pub tolerance: f64,
}

impl QuadratureReport {
    pub fn passed(&self) -> bool {
        self.relative_error <= self.tolerance
    }
}

/// Upper bound on `int_T^inf x^m * 2 e^{(|t| - x)/2} dx`, using
/// `int_T^inf x^m e^{-x/2} dx = 2^{m+1} m! e^{-T/2} sum_{j<=m} (T/2)^j / j!`.
fn tail_bound(m: u32, t: f64, upper: f64) -> f64 {
    let half = upper / 2.0;
    let mut term = 1.0;
    let mut sum = 1.0;
    for j in 1..=m {
        term *= half / j as f64;
        sum += term;
    }
    let fact: f64 = (1..=m).map(|j| j as f64).product();
    2.0 * (t.abs() / 2.0).exp() * 2f64.powi(m as i32 + 1) * fact * (-half).exp() * sum
}

/// Numerically integrates `x^{2k-1} H(x, t)` over `[0, inf)` and compares with
/// the exact `F_{2k-1}(t)`.
///
/// The range is cut at the first `T >= 2 ln(10/tol) + |t|` where the tail
/// bound drops below `tol/10` of `|F(t)|`; the remaining interval is handled
/// by adaptive Simpson quadrature on a fixed partition.
pub fn quad_check_f(k: u32, t: f64, tol: f64) -> Result<QuadratureReport> {
    if k == 0 || k > 6 {
        return Err(Error::InvalidArgument(format!("quadrature check supports 1 <= k <= 6, got {k}")));
    }
    if tol.is_nan() || tol <= 0.0 {
        return Err(Error::InvalidArgument(format!("tolerance must be positive, got {tol}")));
    }
    let exact_value = kernel_f(k).eval(t);
    let m = 2 * k - 1;
    let mut upper = 2.0 * (10.0 / tol).ln() + t.abs();
    while tail_bound(m, t, upper) > tol / 10.0 * exact_value.abs() {
        upper += 4.0;
    }
    let f = |x: f64| x.powi(m as i32) * eval_h(x, t);
    let pieces = 64;
    let width = upper / pieces as f64;
    let eps = tol / 100.0 * exact_value.abs() / pieces as f64;
    let mut total = 0.0;
    let mut achieved = 0.0;
    for i in 0..pieces {
        let a = i as f64 * width;
        let (v, err) = adaptive_simpson(&f, a, a + width, eps, 40);
        total += v;
        achieved += err;
    }
    if achieved > tol / 10.0 * exact_value.abs() {
        return Err(Error::Quadrature { achieved });
    }
    let relative_error = ((total - exact_value) / exact_value).abs();
    Ok(QuadratureReport {
        k,
        t,
        upper_limit: upper,
        numeric: total,
        exact: exact_value,
        relative_error,
        tolerance: tol,
    })
}

/// Returns `(integral, estimated error)`.
fn adaptive_simpson<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, eps: f64, depth: u32) -> (f64, f64) {
    let fa = f(a);
    let fb = f(b);
    let m = (a + b) / 2.0;
    let fm = f(m);
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    simpson_step(f, a, b, fa, fm, fb, whole, eps, depth)
}

#[allow(clippy::too_many_arguments)]
fn simpson_step<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    eps: f64,
    depth: u32,
) -> (f64, f64) {
    let m = (a + b) / 2.0;
    let lm = (a + m) / 2.0;
    let rm = (m + b) / 2.0;
    let flm = f(lm);
    let frm = f(rm);
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let delta = left + right - whole;
    if depth == 0 || delta.abs() <= 15.0 * eps {
        return (left + right + delta / 15.0, delta.abs() / 15.0);
    }
    let (l, el) = simpson_step(f, a, m, fa, flm, fm, left, eps / 2.0, depth - 1);
    let (r, er) = simpson_step(f, m, b, fm, frm, fb, right, eps / 2.0, depth - 1);
    (l + r, el + er)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{int, ratio};

    #[test]
    fn listed_kernels() {
        for k in 1..=4 {
            assert_eq!(kernel_f(k).coeffs(), &published_kernel(k).unwrap()[..], "F_{}", 2 * k - 1);
        }
        assert!(published_kernel(5).is_none());
    }

    #[test]
    fn kernel_structure() {
        for k in 1..=8 {
            let f = kernel_f(k);
            assert_eq!(f.degree(), 2 * k);
            assert_eq!(f.coeffs()[0], ratio(1, 2 * k as i64));
            assert_eq!(f.coefficient(2 * k), (ratio(1, 2 * k as i64), 0));
            assert_eq!(f.coefficient(1).0, BigRational::zero());
        }
    }

    #[test]
    fn double_transform() {
        let t = transform_double(0, 0);
        assert_eq!(t, kernel_f(2).as_x_poly().scale(&ratio(1, 6)));
        assert_eq!(t.coeff_of(2, &[0]), ratio(28, 90));
        assert_eq!(transform_double(1, 0), kernel_f(3).as_x_poly().scale(&ratio(1, 20)));
    }

    #[test]
    fn boundary_transform() {
        let t = transform_boundary(0);
        let expect = VolumePolynomial::from_terms(
            0,
            2,
            [(0, vec![1, 0], int(1)), (0, vec![0, 1], int(1)), (1, vec![0, 0], ratio(4, 3))],
        )
        .unwrap();
        assert_eq!(t, expect);

        let t = transform_boundary(1);
        assert_eq!(t.coeff_of(0, &[1, 1]), int(3));
        // L_k = 0 collapses both arguments onto L_1.
        let mut at_zero = VolumePolynomial::zero(0, 1);
        for (m, c) in t.terms() {
            if m.x_exps()[1] == 0 {
                at_zero.add_term(Monomial::new(m.p_exp(), vec![m.x_exps()[0]]), c.clone());
            }
        }
        assert_eq!(at_zero, kernel_f(2).as_x_poly().scale(&int(2)));
    }

    #[test]
    fn h_d_r_special_values() {
        for &(y, z) in &[(0.0, 0.0), (1.0, 2.5), (7.0, 0.3)] {
            assert!(eval_d(0.0, y, z).abs() < 1e-12);
        }
        for &(x, y) in &[(0.5, 0.0), (3.0, 2.0), (10.0, 4.0)] {
            assert!((eval_r(x, y, 0.0) - x).abs() < 1e-12);
            assert!((eval_h(x, 0.0) - 2.0 / (1.0 + (x / 2.0).exp())).abs() < 1e-15);
        }
        assert!(eval_h(2000.0, 0.0).is_finite());
    }

    #[test]
    fn kernel_derivatives_match() {
        // dD/dx (x, y, z) = H(y + z, x); checked by central differences.
        let h = 1e-5;
        for &(x, y, z) in &[(1.0, 2.0, 0.5), (0.3, 0.4, 3.0)] {
            let dd = (eval_d(x + h, y, z) - eval_d(x - h, y, z)) / (2.0 * h);
            assert!((dd - eval_h(y + z, x)).abs() < 1e-8);
        }
    }

    #[test]
    fn quadrature_examples() {
        let r = quad_check_f(1, 0.0, 1e-6).unwrap();
        assert!(r.passed(), "{r:?}");
        let pi2 = std::f64::consts::PI.powi(2);
        assert!((r.exact - 2.0 * pi2 / 3.0).abs() < 1e-12);

        let r = quad_check_f(2, 1.0, 1e-6).unwrap();
        assert!((r.exact - (0.25 + 2.0 * pi2 + 28.0 * pi2 * pi2 / 15.0)).abs() < 1e-9);
        assert!(r.passed(), "{r:?}");

        let r = quad_check_f(1, 2.0, 1e-6).unwrap();
        assert!((r.exact - (2.0 + 2.0 * pi2 / 3.0)).abs() < 1e-12);
        assert!(r.passed(), "{r:?}");

        assert!(quad_check_f(7, 0.0, 1e-6).is_err());
        assert!(quad_check_f(1, 0.0, 0.0).is_err());
    }
}
