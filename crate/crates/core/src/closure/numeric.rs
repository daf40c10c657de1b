use crate::numcore::{try_central_diff, try_second_diff5, RMatrix};
use crate::reflection::{fundamental_derivative_from_ops, fundamental_from_ops, ReflectionSystem};

use super::explore::ClosureReport;
use super::rewrite::first_derivative;
use super::symbols::{CanonicalSignature, Expansion};
use super::{ClosureError, ClosureResult};

/// Values of `sig` along the fundamental matrix of `sys`.
pub fn state_value(sys: &ReflectionSystem, sig: &CanonicalSignature, t: f64) -> ClosureResult<f64> {
    let ops = sys.operators()?;
    let x = fundamental_from_ops(&ops, t)?;
    let dx = fundamental_derivative_from_ops(&ops, t)?;
    Ok(sig.evaluate(&x, &dx, &ops.e)?)
}

fn expansion_value(
    sys: &ReflectionSystem,
    exp: &Expansion,
    e: &RMatrix,
    t: f64,
) -> ClosureResult<f64> {
    let mut acc = 0.0;
    for (sig, poly) in exp {
        acc += poly.evaluate(e)? * state_value(sys, sig, t)?;
    }
    Ok(acc)
}

fn check_dim(n: usize, sys: &ReflectionSystem) -> ClosureResult<()> {
    if sys.dim() != n {
        return Err(ClosureError::DimensionMismatch {
            report: n,
            system: sys.dim(),
        });
    }
    Ok(())
}

/// Largest `|s_i''(t) - sum_j T_ij s_j(t)|` over states and grid points, with
/// `s_i''` from the five-point second difference of step `h`.
pub fn numeric_verify(
    report: &ClosureReport,
    sys: &ReflectionSystem,
    t_grid: &[f64],
    h: f64,
) -> ClosureResult<f64> {
    if !report.closed {
        return Err(ClosureError::NotClosed { n: report.n });
    }
    check_dim(report.n, sys)?;
    let e = sys.operators()?.e;
    let mut worst: f64 = 0.0;
    for &t in t_grid {
        for (sig, exp) in report.states.iter().zip(&report.second_derivatives) {
            let fd = try_second_diff5(|s| state_value(sys, sig, s), t, h)?;
            worst = worst.max((fd - expansion_value(sys, exp, &e, t)?).abs());
        }
    }
    Ok(worst)
}

/// `|d/dt sig - first_derivative(sig)|` at `t`, the derivative by central
/// difference of step `h`.
pub fn first_derivative_defect(
    sys: &ReflectionSystem,
    sig: &CanonicalSignature,
    t: f64,
    h: f64,
) -> ClosureResult<f64> {
    check_dim(sig.n, sys)?;
    let e = sys.operators()?.e;
    let fd = try_central_diff(|s| state_value(sys, sig, s), t, h)?;
    Ok((fd - expansion_value(sys, &first_derivative(sig), &e, t)?).abs())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::closure::explore;
    use crate::random::seeded;
    use crate::reflection::{ajl_integrate, AjlMode};

    fn grid(start: f64, stop: f64, step: f64) -> Vec<f64> {
        let k = ((stop - start) / step).round() as usize;
        (0..=k).map(|i| start + i as f64 * step).collect()
    }

    #[test]
    fn unit_system_exact_trajectory() {
        let sys = ReflectionSystem::plain(RMatrix::identity(2)).unwrap();
        let report = explore(2, 6);
        // X(t) = e^{-t} I, so det X = det X' = e^{-2t}
        for sig in &report.states {
            let v = state_value(&sys, sig, 0.5).unwrap();
            assert!((v - (-1.0f64).exp()).abs() < 1e-13);
        }
        let r = numeric_verify(&report, &sys, &grid(0.0, 1.0, 0.1), 5e-3).unwrap();
        assert!(r < 1e-8, "{r}");
    }

    #[test]
    fn random_systems_follow_transition() {
        let mut rng = seeded(71);
        let report = explore(2, 6);
        for _ in 0..5 {
            let sys = ReflectionSystem::random(&mut rng, 2, Some(4.0));
            let r = numeric_verify(&report, &sys, &grid(-1.0, 1.0, 0.1), 5e-3).unwrap();
            assert!(r < 1e-5, "{r}");
        }
    }

    #[test]
    fn matches_determinant_ode() {
        let mut rng = seeded(72);
        let sys = ReflectionSystem::random(&mut rng, 2, Some(4.0));
        let report = explore(2, 6);
        let samples = ajl_integrate(&sys, 1.0, 1e-3, AjlMode::Section45).unwrap();
        for s in samples.iter().step_by(100) {
            let x = state_value(&sys, &report.states[0], s.t).unwrap();
            let y = state_value(&sys, &report.states[1], s.t).unwrap();
            assert!((x - s.state.x).abs() < 1e-6 && (y - s.state.y).abs() < 1e-6);
        }
    }

    #[test]
    fn first_derivatives_consistent() {
        let mut rng = seeded(73);
        for n in 2..=3 {
            let sys = ReflectionSystem::random(&mut rng, n, Some(4.0));
            let report = explore(n, 3);
            for sig in &report.states {
                let d = first_derivative_defect(&sys, sig, 0.3, 1e-4).unwrap();
                assert!(d < 1e-5, "{sig}: {d}");
            }
        }
    }

    #[test]
    fn preconditions() {
        let sys = ReflectionSystem::plain(RMatrix::identity(3)).unwrap();
        assert_eq!(
            numeric_verify(&explore(3, 2), &sys, &[0.0], 1e-3),
            Err(ClosureError::NotClosed { n: 3 })
        );
        assert_eq!(
            numeric_verify(&explore(2, 2), &sys, &[0.0], 1e-3),
            Err(ClosureError::DimensionMismatch {
                report: 2,
                system: 3
            })
        );
    }
}
