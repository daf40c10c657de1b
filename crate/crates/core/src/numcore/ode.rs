use super::error::{NumError, NumResult};

/// One sample of an integrated trajectory.
#[derive(Debug, Clone, PartialEq)]
pub struct Sample {
    pub t: f64,
    pub y: Vec<f64>,
}

/// Classical fixed-step fourth-order Runge-Kutta from `t0` to `t1`.
///
/// Step `k` starts at `t0 + k h`; the last step is shortened to land exactly
/// on `t1`. `t1 == t0` returns the initial sample only.
pub fn rk4_integrate<F>(field: F, y0: &[f64], t0: f64, t1: f64, h: f64) -> NumResult<Vec<Sample>>
where
    F: Fn(f64, &[f64]) -> Vec<f64>,
{
    if !h.is_finite() || h <= 0.0 {
        return Err(NumError::InvalidArgument(format!(
            "step h = {h} must be positive"
        )));
    }
    if t0.is_nan() || t1.is_nan() || t1 < t0 {
        return Err(NumError::InvalidArgument(format!(
            "end time {t1} precedes start time {t0}"
        )));
    }
    if y0.iter().any(|v| !v.is_finite()) {
        return Err(NumError::NonFiniteState { t: t0 });
    }
    let span = t1 - t0;
    let mut full_steps = (span / h).floor() as usize;
    let mut partial = span - full_steps as f64 * h;
    // absorb representation error of span / h
    if partial > h * (1.0 - 1e-9) {
        full_steps += 1;
        partial = 0.0;
    } else if partial < h * 1e-9 {
        partial = 0.0;
    }
    let mut out = Vec::with_capacity(full_steps + 2);
    out.push(Sample {
        t: t0,
        y: y0.to_vec(),
    });
    let mut y = y0.to_vec();
    let steps = (0..full_steps)
        .map(|k| (t0 + k as f64 * h, h))
        .chain((partial > 0.0).then_some((t0 + full_steps as f64 * h, partial)));
    for (t, step) in steps {
        y = rk4_step(&field, t, &y, step);
        let t_next = t + step;
        if y.iter().any(|v| !v.is_finite()) {
            return Err(NumError::NonFiniteState { t: t_next });
        }
        out.push(Sample {
            t: t_next,
            y: y.clone(),
        });
    }
    if let Some(last) = out.last_mut() {
        last.t = t1;
    }
    Ok(out)
}

fn rk4_step<F>(field: &F, t: f64, y: &[f64], h: f64) -> Vec<f64>
where
    F: Fn(f64, &[f64]) -> Vec<f64>,
{
    let axpy = |a: &[f64], s: f64, b: &[f64]| -> Vec<f64> {
        a.iter().zip(b).map(|(x, d)| x + s * d).collect()
    };
    let k1 = field(t, y);
    let k2 = field(t + 0.5 * h, &axpy(y, 0.5 * h, &k1));
    let k3 = field(t + 0.5 * h, &axpy(y, 0.5 * h, &k2));
    let k4 = field(t + h, &axpy(y, h, &k3));
    y.iter()
        .enumerate()
        .map(|(i, yi)| yi + h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exponential() {
        let traj = rk4_integrate(|_, y| vec![y[0]], &[1.0], 0.0, 1.0, 1e-3).unwrap();
        let last = traj.last().unwrap();
        assert_eq!(last.t, 1.0);
        assert!((last.y[0] - 1f64.exp()).abs() < 1e-11);
        assert_eq!(traj.len(), 1001);
    }

    #[test]
    fn rotation_period() {
        let two_pi = 2.0 * std::f64::consts::PI;
        let traj = rk4_integrate(|_, y| vec![y[1], -y[0]], &[1.0, 0.0], 0.0, two_pi, 1e-3).unwrap();
        let last = traj.last().unwrap();
        assert_eq!(last.t, two_pi);
        assert!((last.y[0] - 1.0).abs() < 1e-9 && last.y[1].abs() < 1e-9);
    }

    #[test]
    fn partial_last_step() {
        let traj = rk4_integrate(|_, _| vec![1.0], &[0.0], 0.0, 1.05, 0.1).unwrap();
        assert_eq!(traj.len(), 12);
        assert_eq!(traj.last().unwrap().t, 1.05);
        assert!((traj.last().unwrap().y[0] - 1.05).abs() < 1e-14);
    }

    #[test]
    fn degenerate_and_bad_input() {
        let traj = rk4_integrate(|_, y| vec![y[0]], &[2.0], 0.0, 0.0, 0.1).unwrap();
        assert_eq!(
            traj,
            vec![Sample {
                t: 0.0,
                y: vec![2.0]
            }]
        );
        assert!(rk4_integrate(|_, y| vec![y[0]], &[1.0], 0.0, 1.0, 0.0).is_err());
        assert!(rk4_integrate(|_, y| vec![y[0]], &[1.0], 1.0, 0.0, 0.1).is_err());
        let blowup = rk4_integrate(|_, y| vec![y[0] * y[0]], &[1e200], 0.0, 1.0, 0.1);
        assert!(matches!(blowup, Err(NumError::NonFiniteState { .. })));
    }
}
