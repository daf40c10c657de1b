//! Second-order linear system for `(det X, det X')` when `n = 2`.

use crate::numcore::{adjugate, determinant, rk4_integrate};

use super::{ReflectionError, ReflectionResult, ReflectionSystem};

/// Which sign convention to integrate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AjlMode {
    /// `x'' = tr(E) x - 2y`, `y'' = -2 det(E) x + tr(E) y` with
    /// `y(0) = det M+`, `y'(0) = tr(adj(M+) E)`, as published with the
    /// original identity. Disagrees with the closed form for `E = M+ = I`.
    PaperTheorem2,
    /// `x'' = tr(E) x + 2y`, `y'' = 2 det(E) x + tr(E) y` with
    /// `y(0) = det X'(0)`, `y'(0) = -tr(adj(M+) E)`; obtained by
    /// differentiating `det X` and `det X'` directly.
    Section45,
}

impl AjlMode {
    pub fn name(self) -> &'static str {
        match self {
            AjlMode::PaperTheorem2 => "paper-theorem2",
            AjlMode::Section45 => "section45",
        }
    }
}

impl std::str::FromStr for AjlMode {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "paper-theorem2" => Ok(AjlMode::PaperTheorem2),
            "section45" => Ok(AjlMode::Section45),
            other => Err(format!(
                "unknown mode '{other}', expected paper-theorem2 or section45"
            )),
        }
    }
}

/// `x ~ det X`, `y ~ det X'` and their first derivatives.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AjlState {
    pub x: f64,
    pub y: f64,
    pub dx: f64,
    pub dy: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AjlSample {
    pub t: f64,
    pub state: AjlState,
}

impl AjlMode {
    fn coupling_sign(self) -> f64 {
        match self {
            AjlMode::PaperTheorem2 => -1.0,
            AjlMode::Section45 => 1.0,
        }
    }
}

/// Initial state and coefficients `(tr E, det E)` for `mode`.
pub fn ajl_initial(
    sys: &ReflectionSystem,
    mode: AjlMode,
) -> ReflectionResult<(AjlState, f64, f64)> {
    if sys.dim() != 2 {
        return Err(ReflectionError::DimensionMismatch(format!(
            "determinant system needs n = 2, got n = {}",
            sys.dim()
        )));
    }
    let ops = sys.operators()?;
    let tr_e = ops.e.trace();
    let det_e = determinant(&ops.e)?;
    let adj_e = (&adjugate(&ops.m_plus)? * &ops.e).trace();
    let det_m = determinant(&ops.m_plus)?;
    let state = match mode {
        AjlMode::PaperTheorem2 => AjlState {
            x: 1.0,
            y: det_m,
            dx: -ops.m_plus.trace(),
            dy: adj_e,
        },
        AjlMode::Section45 => AjlState {
            x: 1.0,
            // det(-M+) = det(M+) for n = 2
            y: determinant(&(-&ops.m_plus))?,
            dx: -ops.m_plus.trace(),
            dy: -adj_e,
        },
    };
    Ok((state, tr_e, det_e))
}

/// Integrates the determinant system on `[0, t1]` with RK4 step `h`.
pub fn ajl_integrate(
    sys: &ReflectionSystem,
    t1: f64,
    h: f64,
    mode: AjlMode,
) -> ReflectionResult<Vec<AjlSample>> {
    let (init, tr_e, det_e) = ajl_initial(sys, mode)?;
    let sign = mode.coupling_sign();
    let field = move |_t: f64, s: &[f64]| {
        let (x, y) = (s[0], s[1]);
        vec![
            s[2],
            s[3],
            tr_e * x + sign * 2.0 * y,
            sign * 2.0 * det_e * x + tr_e * y,
        ]
    };
    let traj = rk4_integrate(field, &[init.x, init.y, init.dx, init.dy], 0.0, t1, h)?;
    Ok(traj
        .into_iter()
        .map(|s| AjlSample {
            t: s.t,
            state: AjlState {
                x: s.y[0],
                y: s.y[1],
                dx: s.y[2],
                dy: s.y[3],
            },
        })
        .collect())
}
