//! Verification suites behind `refinv verify`.

use num_complex::Complex64;

use crate::closure::{explore, first_derivative_defect, numeric_verify, state_value};
use crate::conjalg::{
    ansatz_coeffs, fundamental_pair_residual, ginv, gmul, gpow, neumann_identity_check, rho,
    rho_spectral_radius, second_order_residual, solve_fundamental_pair, solve_rho_trajectory,
    ComplexSystem, GradedElement,
};
use crate::invariants::{
    closed_form, collapse_repeated, derivative_expand, derivative_expand_n, det_factorization,
    duality_pair, liouville_residual, richardson_ratio, signature_value, z3_unit_cube_coefficient,
    z_value, z_value_interpolated, z_via_cofactor, z_via_tracelog, DerivSignature,
};
use crate::numcore::{
    condition_inf, even_series, odd_series, try_central_diff, try_second_diff5, CMatrix, PolyPath,
    RMatrix,
};
use crate::random::{seeded, uniform_cmatrix, uniform_matrix, Rng};
use crate::reflection::{
    ajl_integrate, fundamental_matrix, fundamental_matrix_derivative, fundamental_residual,
    riccati_residual, riccati_truncation_estimate, trace_truncation_estimate, y_closed_form,
    y_direct, y_trace_identity, AjlMode, ReflectionSystem,
};

use super::args::Suite;
use super::report::{Check, Worst};

/// Bound on `||E||_F` for random reflection systems.
const E_BOUND: f64 = 4.0;

const OPPOSITE_SIGN_NOTE: &str =
    "known discrepancy: the paper-theorem2 mode uses the opposite coupling signs";

pub struct SuiteConfig {
    pub seed: u64,
    pub trials: u32,
    pub mode: AjlMode,
}

impl SuiteConfig {
    /// Independent stream per suite so that a suite gives the same numbers
    /// alone or inside `all`.
    fn rng(&self, suite: Suite) -> Rng {
        seeded(
            self.seed
                .wrapping_mul(0x9E37_79B9_7F4A_7C15)
                .wrapping_add(suite as u64),
        )
    }

    fn trials(&self) -> usize {
        self.trials as usize
    }
}

pub fn run_suite(suite: Suite, cfg: &SuiteConfig) -> Vec<Check> {
    match suite {
        Suite::Reflection => reflection_suite(cfg),
        Suite::Ajl => ajl_suite(cfg),
        Suite::Riccati => riccati_suite(cfg),
        Suite::Graded => graded_suite(cfg),
        Suite::Invariants => invariants_suite(cfg),
        Suite::Derivatives => derivatives_suite(cfg),
        Suite::Closure => closure_suite(cfg),
        Suite::All => Suite::All
            .expand()
            .into_iter()
            .flat_map(|s| run_suite(s, cfg))
            .collect(),
    }
}

fn grid(start: f64, stop: f64, step: f64) -> Vec<f64> {
    let k = ((stop - start) / step).round() as usize;
    (0..=k).map(|i| start + i as f64 * step).collect()
}

fn reflection_suite(cfg: &SuiteConfig) -> Vec<Check> {
    let mut rng = cfg.rng(Suite::Reflection);
    let mut residual = Worst::new();
    let mut initial = Worst::new();
    let mut second = Worst::new();
    for n in 1..=4 {
        for _ in 0..cfg.trials() {
            let sys = ReflectionSystem::random(&mut rng, n, Some(E_BOUND));
            let scale = 1.0 + sys.norm();
            for t in grid(-1.0, 1.0, 0.1) {
                residual.record(fundamental_residual(&sys, t).map(|r| r.frobenius() / scale));
            }
            initial.record(
                fundamental_matrix(&sys, 0.0).map(|x| x.max_abs_diff(&RMatrix::identity(n))),
            );
            second.record(sys.operators().map_err(|_| ()).and_then(|ops| {
                let xe = &fundamental_matrix(&sys, 0.4).map_err(|_| ())? * &ops.e;
                let d2 =
                    try_second_diff5(|s| fundamental_matrix(&sys, s), 0.4, 5e-3).map_err(|_| ())?;
                Ok((&d2 - &xe).max_abs() / (1.0 + xe.max_abs()))
            }));
        }
    }
    let mut hyper = Worst::new();
    for _ in 0..cfg.trials() {
        let e = uniform_matrix(&mut rng, 3, 3);
        let e = e.scale(E_BOUND / e.frobenius());
        for t in grid(-2.0, 2.0, 0.25) {
            hyper.record(
                even_series(&e, t)
                    .and_then(|c| Ok((c, odd_series(&e, t)?)))
                    .map(|(c, s)| {
                        (&(&(&c * &c) - &(&e * &(&s * &s))) - &RMatrix::identity(3)).frobenius()
                    }),
            );
        }
    }
    vec![
        Check::new(
            "fundamental matrix solves the reflection system",
            "F X'(t) + G X'(-t) + A X(t) + B X(-t) = 0, residual / (1 + ||sys||)",
            residual.value(),
            1e-8,
        ),
        Check::new(
            "fundamental matrix initial value",
            "X(0) = I",
            initial.value(),
            1e-13,
        ),
        Check::new(
            "fundamental matrix second derivative",
            "X'' = X E",
            second.value(),
            1e-7,
        ),
        Check::new(
            "hyperbolic identity",
            "C(t)^2 - E S(t)^2 = I",
            hyper.value(),
            1e-10,
        ),
    ]
}

fn ajl_tracking(sys: &ReflectionSystem, mode: AjlMode, t1: f64) -> Result<f64, ()> {
    let samples = ajl_integrate(sys, t1, 1e-3, mode).map_err(|_| ())?;
    let mut worst: f64 = 0.0;
    for s in samples.iter().step_by(10) {
        let det_x = crate::numcore::determinant(&fundamental_matrix(sys, s.t).map_err(|_| ())?)
            .map_err(|_| ())?;
        let det_dx =
            crate::numcore::determinant(&fundamental_matrix_derivative(sys, s.t).map_err(|_| ())?)
                .map_err(|_| ())?;
        worst = worst
            .max((det_x - s.state.x).abs())
            .max((det_dx - s.state.y).abs());
    }
    Ok(worst)
}

fn ajl_unit_example(mode: AjlMode) -> Result<f64, ()> {
    let sys = ReflectionSystem::plain(RMatrix::identity(2)).map_err(|_| ())?;
    let samples = ajl_integrate(&sys, 2.0, 1e-3, mode).map_err(|_| ())?;
    Ok(samples
        .iter()
        .map(|s| {
            let want = (-2.0 * s.t).exp();
            (s.state.x - want).abs().max((s.state.y - want).abs())
        })
        .fold(0.0, f64::max))
}

fn ajl_suite(cfg: &SuiteConfig) -> Vec<Check> {
    let mut rng = cfg.rng(Suite::Ajl);
    let mut tracking = Worst::new();
    for _ in 0..cfg.trials() {
        let sys = ReflectionSystem::random(&mut rng, 2, Some(E_BOUND));
        tracking.record(ajl_tracking(&sys, cfg.mode, 2.0));
    }
    let identity = format!(
        "x = det X, y = det X' solve the n = 2 determinant system ({})",
        cfg.mode.name()
    );
    let mut checks = vec![
        Check::new(
            "determinant system tracks det X and det X'",
            &identity,
            tracking.value(),
            1e-6,
        ),
        Check::new(
            "determinant system on E = I, M+ = I",
            "det X(t) = det X'(t) = exp(-2t)",
            ajl_unit_example(cfg.mode).ok(),
            1e-8,
        ),
    ];
    match cfg.mode {
        AjlMode::PaperTheorem2 => {
            for c in &mut checks {
                *c = c.clone().with_note(OPPOSITE_SIGN_NOTE);
            }
        }
        AjlMode::Section45 => checks.push(
            Check::new(
                "paper-theorem2 determinant system on E = I, M+ = I",
                "det X(t) = exp(-2t) under the opposite coupling signs",
                ajl_unit_example(AjlMode::PaperTheorem2).ok(),
                1e-8,
            )
            .informational()
            .with_note(OPPOSITE_SIGN_NOTE),
        ),
    }
    checks
}

fn riccati_suite(cfg: &SuiteConfig) -> Vec<Check> {
    const H: f64 = 1e-4;
    const RICCATI_TOL: f64 = 1e-6;
    const TRACE_TOL: f64 = 1e-5;
    let mut rng = cfg.rng(Suite::Riccati);
    let mut riccati = Worst::new();
    let mut forms = Worst::new();
    let mut trace = Worst::new();
    let mut opposite = Worst::new();
    let (mut total, mut riccati_used, mut trace_used) = (0usize, 0usize, 0usize);
    for _ in 0..cfg.trials() {
        let sys = ReflectionSystem::random(&mut rng, 3, Some(E_BOUND));
        for t in grid(-1.0, 1.0, 0.1) {
            total += 1;
            let Ok(y) = y_direct(&sys, t) else {
                continue;
            };
            forms.record(y_closed_form(&sys, t).map(|c| c.max_abs_diff(&y) / (1.0 + y.max_abs())));
            // only points where the fixed step resolves Y
            if riccati_truncation_estimate(&sys, t, H).is_ok_and(|e| e <= 0.1 * RICCATI_TOL) {
                riccati_used += 1;
                riccati.record(riccati_residual(&sys, t, H).map(|r| r.max_abs()));
            }
            if trace_truncation_estimate(&sys, t, H).is_ok_and(|e| e <= 0.1 * TRACE_TOL) {
                trace_used += 1;
                match y_trace_identity(&sys, t, H) {
                    Ok(ti) => {
                        trace.record::<()>(Ok(ti.defect()));
                        opposite.record::<()>(Ok(ti.defect_opposite_sign()));
                    }
                    Err(_) => trace.record(Err(())),
                }
            }
        }
    }
    let resolved = |used: usize| {
        format!("{used} of {total} grid points resolved by h = 1e-4 (estimated truncation <= tolerance / 10)")
    };
    vec![
        Check::new(
            "Riccati equation",
            "Y' = E - Y^2 for Y = X^-1 X', central difference h = 1e-4",
            riccati.value(),
            RICCATI_TOL,
        )
        .with_note(&resolved(riccati_used)),
        Check::new(
            "Riccati closed form",
            "X^-1 X' = (-C M+ + E S)(-S M+ + C)^-1, difference / (1 + |Y|)",
            forms.value(),
            1e-8,
        ),
        Check::new(
            "trace identity",
            "Tr(Y^-1 E) = Tr(Y) + (log|det Y|)'",
            trace.value(),
            TRACE_TOL,
        )
        .with_note(&resolved(trace_used)),
        Check::new(
            "trace identity, opposite sign",
            "Tr(Y^-1 E) = Tr(Y) - (log|det Y|)'",
            opposite.value(),
            TRACE_TOL,
        )
        .informational()
        .with_note("known discrepancy: Y' = E - Y^2 gives (log|det Y|)' = Tr(Y^-1 E) - Tr(Y)"),
    ]
}

fn random_element(rng: &mut Rng, n: usize) -> GradedElement {
    loop {
        let a = GradedElement::random(rng, n);
        if condition_inf(&rho(&a)) < 1e3 {
            return a;
        }
    }
}

fn rel(diff: f64, size: f64) -> f64 {
    diff / size.max(1.0)
}

fn graded_suite(cfg: &SuiteConfig) -> Vec<Check> {
    let mut rng = cfg.rng(Suite::Graded);
    let (mut hom, mut inv, mut pow, mut assoc, mut neumann) = (
        Worst::new(),
        Worst::new(),
        Worst::new(),
        Worst::new(),
        Worst::new(),
    );
    for n in 1..=3 {
        for _ in 0..cfg.trials() {
            let a = random_element(&mut rng, n);
            let b = random_element(&mut rng, n);
            let c = random_element(&mut rng, n);
            hom.record(gmul(&a, &b).map(|ab| {
                let want = &rho(&a) * &rho(&b);
                rel(rho(&ab).max_abs_diff(&want), want.max_abs())
            }));
            inv.record(ginv(&a).and_then(|ai| {
                let id = GradedElement::identity(n);
                Ok(gmul(&a, &ai)?
                    .max_abs_diff(&id)
                    .max(gmul(&ai, &a)?.max_abs_diff(&id)))
            }));
            let want = rho(&a).pow(5).expect("square");
            pow.record::<()>(Ok(rel(
                rho(&gpow(&a, 5)).max_abs_diff(&want),
                want.max_abs(),
            )));
            assoc.record(
                gmul(&a, &b)
                    .and_then(|ab| gmul(&ab, &c))
                    .and_then(|l| Ok((gmul(&a, &gmul(&b, &c)?)?, l)))
                    .map(|(r, l)| rel(l.max_abs_diff(&r), l.max_abs())),
            );
            let s = 0.5 / rho_spectral_radius(&a);
            neumann.record(neumann_identity_check(&a.scale(s), 1.0, 40));
        }
    }

    let (mut pair, mut agree, mut second) = (Worst::new(), Worst::new(), Worst::new());
    for _ in 0..cfg.trials().min(5) {
        let sys = ComplexSystem::random(&mut rng, 2);
        let Ok(fp) = solve_fundamental_pair(&sys, 1.0, 1e-4) else {
            pair.record(Err(()));
            continue;
        };
        second.record(second_order_residual(&sys, &fp, 1));
        for _ in 0..10 {
            let z0: Vec<Complex64> = uniform_cmatrix(&mut rng, 2, 1).into_vec();
            pair.record::<()>(Ok(fundamental_pair_residual(&sys, &fp, &z0, 1)));
            agree.record(solve_rho_trajectory(&sys, &z0, 1.0, 1e-4).map(|real| {
                fp.apply(&z0)
                    .iter()
                    .zip(&real)
                    .step_by(100)
                    .flat_map(|(p, q)| p.iter().zip(q).map(|(x, y)| (x - y).norm()))
                    .fold(0.0, f64::max)
            }));
        }
    }
    let mut ansatz = Worst::new();
    for _ in 0..cfg.trials() {
        let m: Vec<CMatrix> = (0..4).map(|_| uniform_cmatrix(&mut rng, 3, 3)).collect();
        ansatz.record(
            ansatz_coeffs(&m[0], &m[1], &m[2], &m[3]).map(|(alpha, beta)| {
                let plus = &m[2] + &m[3];
                let minus = &m[2] - &m[3];
                let d = &(&alpha * &plus) + &(&beta * &minus);
                let size = m[0].max_abs().max(m[1].max_abs());
                rel(
                    (&alpha + &beta)
                        .max_abs_diff(&m[0])
                        .max(d.max_abs_diff(&m[1])),
                    size,
                )
            }),
        );
    }

    vec![
        Check::new(
            "rho is a homomorphism",
            "rho(a b) = rho(a) rho(b)",
            hom.value(),
            1e-10,
        ),
        Check::new(
            "graded inverse",
            "a ginv(a) = ginv(a) a = I",
            inv.value(),
            1e-10,
        ),
        Check::new("graded power", "rho(a^5) = rho(a)^5", pow.value(), 1e-10),
        Check::new("associativity", "(a b) c = a (b c)", assoc.value(), 1e-10),
        Check::new(
            "Neumann series",
            "(I - a)^-1 = sum_{k<=40} a^k, spectral radius 0.5",
            neumann.value(),
            1e-10,
        ),
        Check::new(
            "fundamental pair solves the complex system",
            "z' + A z + B conj(z) = 0 for z = X0 z0 + X1 conj(z0)",
            pair.value(),
            1e-6,
        ),
        Check::new(
            "fundamental pair matches the real form",
            "w' = -rho(A + B C) w",
            agree.value(),
            1e-6,
        ),
        Check::new(
            "second-order equation",
            "X'' + F X' + G X = 0, F = A + B conj(A) B^-1, G = B conj(A) B^-1 A - B conj(B)",
            second.value(),
            1e-6,
        ),
        Check::new(
            "ansatz coefficients",
            "alpha + beta = X(0), alpha (Gamma + Omega) + beta (Gamma - Omega) = X'(0)",
            ansatz.value(),
            1e-10,
        ),
    ]
}

/// All index vectors of length `len` with entries `>= 0` and sum `<= max`.
fn index_vectors(len: usize, max: i64) -> Vec<Vec<i64>> {
    if len == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for first in 0..=max {
        for mut rest in index_vectors(len - 1, max - first) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

fn invariants_suite(cfg: &SuiteConfig) -> Vec<Check> {
    let mut rng = cfg.rng(Suite::Invariants);
    let mut three_way = Worst::new();
    let mut exact_zero = true;
    let mut computed_zero = Worst::new();
    let mut zero_index = Worst::new();
    let mut permutation = Worst::new();
    for _ in 0..cfg.trials().min(10) {
        for n in 1..=4usize {
            for count in 1..=3usize {
                let xs: Vec<RMatrix> = (0..count).map(|_| uniform_matrix(&mut rng, n, n)).collect();
                for ms in index_vectors(count, n as i64) {
                    three_way.record(z_value(&ms, &xs).and_then(|z| {
                        let t = z_via_tracelog(&ms, &xs)?;
                        let c = z_via_cofactor(&ms, &xs)?;
                        Ok((z - t).abs().max((z - c).abs()))
                    }));
                    let mut rev_ms = ms.clone();
                    rev_ms.reverse();
                    let mut rev_xs = xs.clone();
                    rev_xs.reverse();
                    permutation.record(
                        z_value(&ms, &xs).and_then(|a| Ok((a - z_value(&rev_ms, &rev_xs)?).abs())),
                    );
                    let mut padded_ms = ms.clone();
                    padded_ms.push(0);
                    let mut padded_xs = xs.clone();
                    padded_xs.push(uniform_matrix(&mut rng, n, n));
                    zero_index.record(
                        z_value(&ms, &xs)
                            .and_then(|a| Ok((a - z_value(&padded_ms, &padded_xs)?).abs())),
                    );
                }
                for ms in index_vectors(count, n as i64 + 2) {
                    if ms.iter().sum::<i64>() > n as i64 && ms.iter().all(|&m| m <= n as i64) {
                        exact_zero &= z_value(&ms, &xs) == Ok(0.0);
                        computed_zero.record(z_value_interpolated(&ms, &xs).map(f64::abs));
                    }
                }
                let mut neg = vec![0; count];
                neg[0] = -1;
                exact_zero &= z_value(&neg, &xs) == Ok(0.0);
            }
        }
    }

    let mut closed = Worst::new();
    let mut unit_cube_z3 = Worst::new();
    for _ in 0..cfg.trials() {
        let x = uniform_matrix(&mut rng, 4, 4);
        let y = uniform_matrix(&mut rng, 4, 4);
        for ms in [vec![1], vec![2], vec![3], vec![4]] {
            let one = std::slice::from_ref(&x);
            closed.record(closed_form(&ms, one).and_then(|c| Ok((c - z_value(&ms, one)?).abs())));
        }
        let pair = [x.clone(), y];
        closed.record(
            closed_form(&[1, 1], &pair).and_then(|c| Ok((c - z_value(&[1, 1], &pair)?).abs())),
        );
        unit_cube_z3.record(
            z3_unit_cube_coefficient(&x)
                .and_then(|p| Ok((p - z_value(&[3], std::slice::from_ref(&x))?).abs())),
        );
    }

    let mut duality = Worst::new();
    let mut factorization = Worst::new();
    let mut collapse = Worst::new();
    let mut ratio = Worst::new();
    let n = 3i64;
    for _ in 0..cfg.trials() {
        let a = uniform_matrix(&mut rng, 3, 3);
        let bs: Vec<RMatrix> = (0..2).map(|_| uniform_matrix(&mut rng, 3, 3)).collect();
        let relative = |(l, r): (f64, f64)| (l - r).abs() / l.abs().max(1.0);
        for count in 0..=2usize {
            for ms in index_vectors(count, n) {
                let rest = n - ms.iter().sum::<i64>();
                for l in 0..=rest {
                    duality.record(duality_pair(l, &ms, &a, &bs[..count]).map(relative));
                }
                factorization.record(det_factorization(&ms, &a, &bs[..count]).map(relative));
            }
        }
        for p in 0..=4u32 {
            for q in 0..=4 - p {
                collapse.record(collapse_repeated(p, q, &a).map(|(l, r)| (l - r).abs()));
            }
        }
        for (l, ms) in [(2, vec![]), (3, vec![]), (2, vec![1])] {
            let r = richardson_ratio(l, &ms, &a, &bs[0], &bs[1..1 + ms.len()]);
            ratio.record(match r {
                Ok(Some(v)) => Ok((v - 4.0).abs()),
                _ => Err(()),
            });
        }
    }

    vec![
        Check::new(
            "three evaluation routes agree",
            "coefficient of det(I + sum a_i X_i) = exp(Tr log(I + M)) = cofactor expansion",
            three_way.value(),
            1e-9,
        ),
        Check::exact("vanishing rules, short-circuit", "Z = 0 for a negative index or order > n", exact_zero),
        Check::new(
            "vanishing rule, computed",
            "Z_ms = 0 for order > n by interpolation",
            computed_zero.value(),
            1e-9,
        ),
        Check::new("zero-index reduction", "Z_{ms,0}(xs, Y) = Z_ms(xs)", zero_index.value(), 1e-10),
        Check::new("permutation equivariance", "Z is symmetric in (m_i, X_i) pairs", permutation.value(), 1e-10),
        Check::new(
            "closed trace forms",
            "Z_1 = Tr X, Z_2 = (Tr^2 X - Tr X^2)/2, Z_3 = (Tr^3 X - 3 Tr X^2 Tr X + 2 Tr X^3)/6, Z_{1,1} = Tr X Tr Y - Tr XY, Z_n = det X",
            closed.value(),
            1e-9,
        ),
        Check::new(
            "cubic trace form, unit Tr(X^3) coefficient",
            "Z_3 = (Tr^3 X - 3 Tr X^2 Tr X + Tr X^3)/6",
            unit_cube_z3.value(),
            1e-9,
        )
        .informational()
        .with_note("known discrepancy: the coefficient of Tr X^3 must be 2 (Newton identity)"),
        Check::new(
            "duality",
            "Z_{l,ms}(A, B) = det(A) Z_{n-l-|ms|,ms}(A^-1, A^-1 B), relative",
            duality.value(),
            1e-8,
        ),
        Check::new(
            "determinant factorization",
            "Z_{n-|ms|,ms}(X, X Y) = det(X) Z_ms(Y), relative",
            factorization.value(),
            1e-8,
        ),
        Check::new(
            "repeated-argument collapse",
            "Z_{a,b}(W, W) = C(a+b, a) Z_{a+b}(W)",
            collapse.value(),
            1e-10,
        ),
        Check::new(
            "small-eps expansion",
            "Z_{l,ms}(A1 + eps A2) - Z_{l,ms}(A1) - eps Z_{l-1,1,ms}(A1, A2) = O(eps^2): |Richardson ratio - 4|",
            ratio.value(),
            0.5,
        ),
    ]
}

fn sig(v: &[u32]) -> DerivSignature {
    DerivSignature::new(v.to_vec())
}

fn derivatives_suite(cfg: &SuiteConfig) -> Vec<Check> {
    let mut rng = cfg.rng(Suite::Derivatives);
    let mut formulas = true;
    for m in 3..=8u32 {
        formulas &= derivative_expand(&sig(&[m])) == vec![(1, sig(&[m - 1, 1]))];
        formulas &= derivative_expand_n(&sig(&[m]), 2)
            == vec![(2, sig(&[m - 2, 2])), (1, sig(&[m - 1, 0, 1]))];
        formulas &= derivative_expand_n(&sig(&[m]), 3)
            == vec![
                (6, sig(&[m - 3, 3])),
                (3, sig(&[m - 2, 1, 1])),
                (1, sig(&[m - 1, 0, 0, 1])),
            ];
    }
    let signatures: Vec<DerivSignature> = index_vectors(3, 3)
        .into_iter()
        .map(|v| sig(&v.iter().map(|&m| m as u32).collect::<Vec<_>>()))
        .collect();
    let mut order_kept = true;
    for s in &signatures {
        for k in 1..=3 {
            order_kept &= derivative_expand_n(s, k)
                .iter()
                .all(|(_, d)| d.order() == s.order());
        }
    }

    let mut fd = Worst::new();
    let mut liouville = Worst::new();
    for _ in 0..cfg.trials() {
        let path = PolyPath::new((0..3).map(|_| uniform_matrix(&mut rng, 3, 3)).collect())
            .expect("square coefficients");
        for t in [-0.5, 0.0, 0.5] {
            for s in &signatures {
                fd.record(
                    try_central_diff(|u| signature_value(s, &path, u), t, 1e-5).and_then(|d| {
                        let mut expanded = 0.0;
                        for (c, e) in derivative_expand(s) {
                            expanded += c as f64 * signature_value(&e, &path, t)?;
                        }
                        Ok((d - expanded).abs())
                    }),
                );
            }
            if condition_inf(&path.eval(t)) < 1e6 {
                liouville.record(liouville_residual(&path, t));
            }
        }
    }
    vec![
        Check::exact(
            "low-order derivative formulas",
            "Z_m' = Z^(m-1,1); Z_m'' = 2 Z^(m-2,2) + Z^(m-1,0,1); Z_m''' = 6 Z^(m-3,3) + 3 Z^(m-2,1,1) + Z^(m-1,0,0,1)",
            formulas,
        ),
        Check::exact("differentiation preserves order", "sum of indices is invariant", order_kept),
        Check::new(
            "derivative rule against finite differences",
            "(Z^(m0,m1,..))' = sum_i (m_i + 1) Z^(.., m_{i-1} - 1, m_i + 1, ..)",
            fd.value(),
            1e-6,
        ),
        Check::new(
            "Liouville formula",
            "det(X)' = Z_{n-1,1}(X, X') = det(X) Tr(X^-1 X')",
            liouville.value(),
            1e-8,
        ),
    ]
}

fn closure_suite(cfg: &SuiteConfig) -> Vec<Check> {
    let mut rng = cfg.rng(Suite::Closure);
    let report = explore(2, 6);
    let text: Option<Vec<Vec<String>>> = report.transition().map(|t| {
        t.iter()
            .map(|r| r.iter().map(|p| p.to_string()).collect())
            .collect()
    });
    let expected = vec![
        vec!["tr(E)".to_string(), "2".to_string()],
        vec!["2*det(E)".to_string(), "tr(E)".to_string()],
    ];
    let two_closes = report.closed && report.states.len() == 2 && text == Some(expected);
    let early = explore(2, 2).closed;

    let unit = ReflectionSystem::plain(RMatrix::identity(2))
        .map_err(|_| ())
        .and_then(|sys| numeric_verify(&report, &sys, &grid(0.0, 1.0, 0.1), 5e-3).map_err(|_| ()));
    let mut random = Worst::new();
    let mut versus_ajl = Worst::new();
    for _ in 0..cfg.trials() {
        let sys = ReflectionSystem::random(&mut rng, 2, Some(E_BOUND));
        random.record(numeric_verify(&report, &sys, &grid(-1.0, 1.0, 0.1), 5e-3));
        versus_ajl.record(
            ajl_integrate(&sys, 1.0, 1e-3, AjlMode::Section45)
                .map_err(|_| ())
                .and_then(|samples| {
                    let mut worst: f64 = 0.0;
                    for s in samples.iter().step_by(50) {
                        for (sig, v) in report.states.iter().zip([s.state.x, s.state.y]) {
                            worst =
                                worst.max((state_value(&sys, sig, s.t).map_err(|_| ())? - v).abs());
                        }
                    }
                    Ok(worst)
                }),
        );
    }

    let mut grows = true;
    let mut chain = true;
    for n in 3..=5 {
        let r = explore(n, 6);
        grows &= !r.closed && r.state_counts().windows(2).all(|w| w[1] > w[0]);
        let orders = r.chain_orders();
        chain &= (2..=6).all(|k| orders.contains(&k));
    }
    let mut consistency = Worst::new();
    for n in 2..=3 {
        let r = explore(n, 3);
        for _ in 0..cfg.trials().min(5) {
            let sys = ReflectionSystem::random(&mut rng, n, Some(E_BOUND));
            for sig in &r.states {
                consistency.record(first_derivative_defect(&sys, sig, 0.3, 1e-4));
            }
        }
    }

    vec![
        Check::exact(
            "n = 2 closes with two states",
            "det(X)'' = tr(E) det X + 2 det X'; det(X')'' = 2 det(E) det X + tr(E) det X'",
            two_closes,
        ),
        Check::exact(
            "n = 2 closes at depth 2",
            "closure after one new state",
            early,
        ),
        Check::new(
            "n = 2 transition on E = I, M+ = I",
            "second differences of det X, det X' follow the transition",
            unit.ok(),
            1e-8,
        ),
        Check::new(
            "n = 2 transition on random systems",
            "second differences of det X, det X' follow the transition",
            random.value(),
            1e-5,
        ),
        Check::new(
            "closure states match the determinant system",
            "det X, det X' agree with the integrated n = 2 system",
            versus_ajl.value(),
            1e-6,
        ),
        Check::exact(
            "no closure for n = 3, 4, 5",
            "state counts strictly grow up to depth 6",
            grows,
        ),
        Check::exact(
            "unresolved chain",
            "Z^(n-2,1,0,..,0,1) = Z_{n-2,1,1}(X, X', X^(k)) appears for k = 2..6",
            chain,
        ),
        Check::new(
            "symbolic first derivatives match numerics",
            "d/dt of each state equals its rewritten first derivative",
            consistency.value(),
            1e-5,
        ),
    ]
}
