//! Complex systems `z' + A z + B conj(z) = 0` and their fundamental pair.

use num_complex::Complex64;

use crate::numcore::{inverse, rk4_integrate, CMatrix, RMatrix};
use crate::random::{uniform_cmatrix, Rng};

use super::element::{from_rho, ginv, gmul, rho, rho_vec, unrho_vec, GradedElement};
use super::{ConjError, ConjResult};

/// `z' + A z + B conj(z) = 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexSystem {
    pub a: CMatrix,
    pub b: CMatrix,
}

impl ComplexSystem {
    pub fn new(a: CMatrix, b: CMatrix) -> ConjResult<Self> {
        GradedElement::new(a.clone(), b.clone())?;
        Ok(Self { a, b })
    }

    pub fn random(rng: &mut Rng, n: usize) -> Self {
        let a = uniform_cmatrix(rng, n, n);
        let b = uniform_cmatrix(rng, n, n);
        Self { a, b }
    }

    pub fn dim(&self) -> usize {
        self.a.rows()
    }

    /// The generator `A + B C`, so that `z' = -(A + B C) z`.
    pub fn generator(&self) -> GradedElement {
        GradedElement {
            a0: self.a.clone(),
            a1: self.b.clone(),
        }
    }

    /// `z' + A z + B conj(z)` for given `z`, `z'`.
    pub fn residual(&self, z: &[Complex64], dz: &[Complex64]) -> Vec<Complex64> {
        let gz = self.generator().apply(z);
        dz.iter().zip(gz).map(|(d, g)| d + g).collect()
    }
}

/// Rewrites `bigB z' + bigA z = 0` as `z' + A z + B conj(z) = 0` with
/// `A + B C = bigB^-1 bigA`.
pub fn reduce_to_canonical(
    big_a: &GradedElement,
    big_b: &GradedElement,
) -> ConjResult<ComplexSystem> {
    let reduced = gmul(&ginv(big_b)?, big_a)?;
    Ok(ComplexSystem {
        a: reduced.a0,
        b: reduced.a1,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct PairSample {
    pub t: f64,
    pub x0: CMatrix,
    pub x1: CMatrix,
}

/// Samples of `X0`, `X1` with `z(t) = X0(t) z0 + X1(t) conj(z0)`, on a
/// uniform grid of step `h` starting at `t = 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct FundamentalPair {
    pub h: f64,
    pub samples: Vec<PairSample>,
}

impl FundamentalPair {
    /// `z(t_k)` for every sample.
    pub fn apply(&self, z0: &[Complex64]) -> Vec<Vec<Complex64>> {
        self.samples
            .iter()
            .map(|s| {
                let el = GradedElement {
                    a0: s.x0.clone(),
                    a1: s.x1.clone(),
                };
                el.apply(z0)
            })
            .collect()
    }
}

fn flatten(x0: &CMatrix, x1: &CMatrix) -> Vec<f64> {
    let mut v = Vec::with_capacity(4 * x0.data().len());
    for m in [x0, x1] {
        v.extend(m.data().iter().map(|z| z.re));
        v.extend(m.data().iter().map(|z| z.im));
    }
    v
}

fn unflatten(v: &[f64], n: usize) -> (CMatrix, CMatrix) {
    let nn = n * n;
    let part = |k: usize| RMatrix::from_vec(n, n, v[k * nn..(k + 1) * nn].to_vec()).expect("n x n");
    (
        CMatrix::from_parts(&part(0), &part(1)),
        CMatrix::from_parts(&part(2), &part(3)),
    )
}

/// Integrates `X0' = -A X0 - B conj(X1)`, `X1' = -A X1 - B conj(X0)` from
/// `X0(0) = I`, `X1(0) = 0` with RK4 on the real `4n^2` flattening.
pub fn solve_fundamental_pair(sys: &ComplexSystem, t1: f64, h: f64) -> ConjResult<FundamentalPair> {
    let n = sys.dim();
    let (a, b) = (sys.a.clone(), sys.b.clone());
    let field = move |_t: f64, v: &[f64]| {
        let (x0, x1) = unflatten(v, n);
        let dx0 = -&(&(&a * &x0) + &(&b * &x1.conj()));
        let dx1 = -&(&(&a * &x1) + &(&b * &x0.conj()));
        flatten(&dx0, &dx1)
    };
    let y0 = flatten(&CMatrix::identity(n), &CMatrix::zeros(n, n));
    let traj = rk4_integrate(field, &y0, 0.0, t1, h)?;
    Ok(FundamentalPair {
        h,
        samples: traj
            .into_iter()
            .map(|s| {
                let (x0, x1) = unflatten(&s.y, n);
                PairSample { t: s.t, x0, x1 }
            })
            .collect(),
    })
}

/// Same pair recovered from the real `2n x 2n` system `W' = -rho(A + B C) W`,
/// `W(0) = I`, split back into graded components.
pub fn rho_fundamental(sys: &ComplexSystem, t1: f64, h: f64) -> ConjResult<FundamentalPair> {
    let r = rho(&sys.generator());
    let m = r.rows();
    let field = move |_t: f64, v: &[f64]| {
        let w = RMatrix::from_vec(m, m, v.to_vec()).expect("square state");
        (-&(&r * &w)).into_vec()
    };
    let traj = rk4_integrate(field, RMatrix::identity(m).data(), 0.0, t1, h)?;
    Ok(FundamentalPair {
        h,
        samples: traj
            .into_iter()
            .map(|s| {
                let el = from_rho(&RMatrix::from_vec(m, m, s.y).expect("square state"));
                PairSample {
                    t: s.t,
                    x0: el.a0,
                    x1: el.a1,
                }
            })
            .collect(),
    })
}

/// Trajectory of a single solution through the real form
/// `w' = -rho(A + B C) w`, `w = [Re z; Im z]`.
pub fn solve_rho_trajectory(
    sys: &ComplexSystem,
    z0: &[Complex64],
    t1: f64,
    h: f64,
) -> ConjResult<Vec<Vec<Complex64>>> {
    let r = rho(&sys.generator());
    let m = r.rows();
    let field = move |_t: f64, w: &[f64]| {
        let col = RMatrix::from_vec(m, 1, w.to_vec()).expect("column");
        (-&(&r * &col)).into_vec()
    };
    let traj = rk4_integrate(field, &rho_vec(z0), 0.0, t1, h)?;
    Ok(traj.into_iter().map(|s| unrho_vec(&s.y)).collect())
}

/// Largest `|z' + A z + B conj(z)|` over interior samples of the pair applied
/// to `z0`, with `z'` from central differences spanning `stride` samples.
pub fn fundamental_pair_residual(
    sys: &ComplexSystem,
    pair: &FundamentalPair,
    z0: &[Complex64],
    stride: usize,
) -> f64 {
    let zs = pair.apply(z0);
    let delta = 2.0 * stride as f64 * pair.h;
    let mut worst: f64 = 0.0;
    for k in stride..zs.len().saturating_sub(stride) {
        let dz: Vec<Complex64> = zs[k + stride]
            .iter()
            .zip(&zs[k - stride])
            .map(|(p, m)| (p - m) / delta)
            .collect();
        for r in sys.residual(&zs[k], &dz) {
            worst = worst.max(r.norm());
        }
    }
    worst
}

/// Coefficients of `X'' + F X' + G X = 0` satisfied by both `X0` and `X1`:
/// `F = A + B conj(A) B^-1`, `G = B conj(A) B^-1 A - B conj(B)`.
pub fn second_order_coeffs(sys: &ComplexSystem) -> ConjResult<(CMatrix, CMatrix)> {
    let b_inv = inverse(&sys.b).map_err(|_| ConjError::SingularB)?;
    let twisted = &(&sys.b * &sys.a.conj()) * &b_inv;
    let f = &sys.a + &twisted;
    let g = &(&twisted * &sys.a) - &(&sys.b * &sys.b.conj());
    Ok((f, g))
}

/// Largest entry of `X'' + F X' + G X` over interior samples, for `X0` and
/// `X1`, using central differences spanning `stride` samples.
pub fn second_order_residual(
    sys: &ComplexSystem,
    pair: &FundamentalPair,
    stride: usize,
) -> ConjResult<f64> {
    let (f, g) = second_order_coeffs(sys)?;
    let delta = stride as f64 * pair.h;
    let s = &pair.samples;
    let mut worst: f64 = 0.0;
    for k in stride..s.len().saturating_sub(stride) {
        for pick in [|p: &PairSample| p.x0.clone(), |p: &PairSample| p.x1.clone()] {
            let (xm, x, xp) = (pick(&s[k - stride]), pick(&s[k]), pick(&s[k + stride]));
            let d1 = (&xp - &xm).scale_re(0.5 / delta);
            let d2 = (&(&xp - &x.scale_re(2.0)) + &xm).scale_re(1.0 / (delta * delta));
            let r = &(&d2 + &(&f * &d1)) + &(&g * &x);
            worst = worst.max(r.max_abs());
        }
    }
    Ok(worst)
}

/// Coefficients of `X = alpha e^{(Gamma + Omega) t} + beta e^{(Gamma - Omega) t}`
/// matching `X(0) = x0`, `X'(0) = xp0`:
/// `alpha = (xp0 - x0 (Gamma - Omega)) Omega^-1 / 2`,
/// `beta = -(xp0 - x0 (Gamma + Omega)) Omega^-1 / 2`.
pub fn ansatz_coeffs(
    x0: &CMatrix,
    xp0: &CMatrix,
    gamma: &CMatrix,
    omega: &CMatrix,
) -> ConjResult<(CMatrix, CMatrix)> {
    let omega_inv = inverse(omega).map_err(|_| ConjError::SingularOmega)?;
    let plus = gamma.try_add(omega)?;
    let minus = gamma.try_sub(omega)?;
    let alpha = &(&(xp0 - &x0.try_mul(&minus)?) * &omega_inv).scale_re(0.5);
    let beta = &(&(xp0 - &x0.try_mul(&plus)?) * &omega_inv).scale_re(-0.5);
    Ok((alpha.clone(), beta.clone()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numcore::expm_via_series;
    use crate::random::seeded;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn reduction_special_cases() {
        let mut rng = seeded(31);
        let big_a = GradedElement::random(&mut rng, 2);
        let sys = reduce_to_canonical(&big_a, &GradedElement::identity(2)).unwrap();
        assert!(sys.a.max_abs_diff(&big_a.a0) < 1e-15 && sys.b.max_abs_diff(&big_a.a1) < 1e-15);
        let two = GradedElement::even(CMatrix::identity(2).scale(c(2.0, 0.0)));
        let sys = reduce_to_canonical(&big_a, &two).unwrap();
        assert!(sys.a.max_abs_diff(&big_a.a0.scale_re(0.5)) < 1e-15);
        assert!(sys.b.max_abs_diff(&big_a.a1.scale_re(0.5)) < 1e-15);
    }

    #[test]
    fn pair_starts_at_identity() {
        let mut rng = seeded(32);
        let sys = ComplexSystem::random(&mut rng, 2);
        let pair = solve_fundamental_pair(&sys, 0.0, 1e-3).unwrap();
        assert_eq!(pair.samples.len(), 1);
        assert_eq!(pair.samples[0].x0, CMatrix::identity(2));
        assert_eq!(pair.samples[0].x1, CMatrix::zeros(2, 2));
    }

    #[test]
    fn decoupled_system_is_matrix_exponential() {
        let mut rng = seeded(33);
        let a = uniform_cmatrix(&mut rng, 3, 3);
        let sys = ComplexSystem::new(a.clone(), CMatrix::zeros(3, 3)).unwrap();
        let pair = solve_fundamental_pair(&sys, 1.0, 1e-3).unwrap();
        let last = pair.samples.last().unwrap();
        assert!(last.x1.is_zero());
        let expected = expm_via_series(&(-&a), 1.0).unwrap();
        assert!(last.x0.max_abs_diff(&expected) < 1e-10);
    }

    #[test]
    fn pair_solves_the_system_and_matches_rho() {
        let mut rng = seeded(34);
        let sys = ComplexSystem::random(&mut rng, 2);
        let pair = solve_fundamental_pair(&sys, 1.0, 1e-4).unwrap();
        let z0 = vec![c(0.3, -0.8), c(-1.0, 0.5)];
        assert!(fundamental_pair_residual(&sys, &pair, &z0, 2) < 1e-6);
        let real = solve_rho_trajectory(&sys, &z0, 1.0, 1e-4).unwrap();
        let zs = pair.apply(&z0);
        for (a, b) in zs.iter().zip(&real).step_by(500) {
            for (x, y) in a.iter().zip(b) {
                assert!((x - y).norm() < 1e-6);
            }
        }
        let via_rho = rho_fundamental(&sys, 1.0, 1e-4).unwrap();
        let (p, q) = (
            pair.samples.last().unwrap(),
            via_rho.samples.last().unwrap(),
        );
        assert!(p.x0.max_abs_diff(&q.x0) < 1e-6 && p.x1.max_abs_diff(&q.x1) < 1e-6);
    }

    #[test]
    fn second_order_coefficient_cases() {
        let mut rng = seeded(35);
        let b = uniform_cmatrix(&mut rng, 2, 2);
        let sys = ComplexSystem::new(CMatrix::zeros(2, 2), b.clone()).unwrap();
        let (f, g) = second_order_coeffs(&sys).unwrap();
        assert!(f.is_zero());
        assert!(g.max_abs_diff(&(-&(&b * &b.conj()))) < 1e-15);

        let a = uniform_cmatrix(&mut rng, 2, 2);
        let sys = ComplexSystem::new(a.clone(), CMatrix::identity(2)).unwrap();
        let (f, g) = second_order_coeffs(&sys).unwrap();
        assert!(f.max_abs_diff(&(&a + &a.conj())) < 1e-15);
        let expected = &(&a.conj() * &a) - &CMatrix::identity(2);
        assert!(g.max_abs_diff(&expected) < 1e-15);

        let singular = ComplexSystem::new(a, CMatrix::zeros(2, 2)).unwrap();
        assert_eq!(second_order_coeffs(&singular), Err(ConjError::SingularB));
    }

    #[test]
    fn pair_satisfies_second_order_equation() {
        let mut rng = seeded(36);
        let sys = ComplexSystem::random(&mut rng, 3);
        let pair = solve_fundamental_pair(&sys, 1.0, 1e-4).unwrap();
        assert!(second_order_residual(&sys, &pair, 2).unwrap() < 1e-6);
    }

    #[test]
    fn ansatz_round_trip() {
        let i = CMatrix::identity(2);
        let z = CMatrix::zeros(2, 2);
        let (alpha, beta) = ansatz_coeffs(&i, &z, &z, &i).unwrap();
        assert_eq!(alpha, i.scale_re(0.5));
        assert_eq!(beta, i.scale_re(0.5));

        let mut rng = seeded(37);
        let x0 = uniform_cmatrix(&mut rng, 3, 3);
        let gamma = uniform_cmatrix(&mut rng, 3, 3);
        let omega = uniform_cmatrix(&mut rng, 3, 3);
        let xp0 = &x0 * &(&gamma + &omega);
        let (_, beta) = ansatz_coeffs(&x0, &xp0, &gamma, &omega).unwrap();
        assert!(beta.max_abs() < 1e-14);

        let xp0 = uniform_cmatrix(&mut rng, 3, 3);
        let (alpha, beta) = ansatz_coeffs(&x0, &xp0, &gamma, &omega).unwrap();
        assert!((&alpha + &beta).max_abs_diff(&x0) < 1e-10);
        let d = &(&alpha * &(&gamma + &omega)) + &(&beta * &(&gamma - &omega));
        assert!(d.max_abs_diff(&xp0) < 1e-10);
        assert_eq!(
            ansatz_coeffs(&x0, &xp0, &gamma, &z),
            Err(ConjError::SingularOmega)
        );
    }
}
