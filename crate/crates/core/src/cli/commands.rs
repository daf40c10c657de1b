use std::fmt::Write as _;

use serde_json::json;

use crate::closure::{explore, numeric_verify};
use crate::conjalg::{solve_fundamental_pair, ComplexSystem};
use crate::invariants::{z_value, z_via_tracelog};
use crate::reflection::{
    fundamental_matrix, fundamental_matrix_derivative, fundamental_residual, ReflectionSystem,
};

use super::args::{ClosureArgs, ComplexSolveArgs, FundamentalArgs, InvariantArgs, VerifyArgs};
use super::io::{load_matrices, InputFile};
use super::report::{Check, Report};
use super::suites::{run_suite, SuiteConfig};
use super::{CliError, Outcome};

fn load_reflection_system(args_path: &std::path::Path) -> Result<ReflectionSystem, CliError> {
    let file = InputFile::load(args_path)?;
    let root = file.root();
    let mut ms = Vec::with_capacity(4);
    for key in ["F", "G", "A", "B"] {
        ms.push(file.real_matrix(file.field(root, "", key)?, key)?);
    }
    let [f, g, a, b]: [_; 4] = ms.try_into().expect("four matrices");
    let sys =
        ReflectionSystem::new(f, g, a, b).map_err(|e| file.error("F,G,A,B", e.to_string()))?;
    sys.operators()
        .map_err(|e| file.error("F,G,A,B", e.to_string()))?;
    Ok(sys)
}

fn load_complex_system(path: &std::path::Path) -> Result<ComplexSystem, CliError> {
    let file = InputFile::load(path)?;
    let root = file.root();
    let a = file.complex_matrix(file.field(root, "", "A")?, "A")?;
    let b = file.complex_matrix(file.field(root, "", "B")?, "B")?;
    ComplexSystem::new(a, b).map_err(|e| file.error("A,B", e.to_string()))
}

fn header_entries(out: &mut String, name: &str, n: usize, parts: &[&str]) {
    for i in 0..n {
        for j in 0..n {
            for p in parts {
                write!(out, ",{name}[{i}][{j}]{p}").expect("string write");
            }
        }
    }
}

pub fn fundamental(args: &FundamentalArgs) -> Result<Outcome, CliError> {
    let sys = load_reflection_system(&args.system)?;
    let n = sys.dim();
    let scale = 1.0 + sys.norm();
    let mut out = String::from("t");
    header_entries(&mut out, "X", n, &[""]);
    header_entries(&mut out, "dX", n, &[""]);
    out.push_str(",residual\n");
    let mut worst: f64 = 0.0;
    for t in args.t_grid.points() {
        let compute = || -> Result<_, crate::reflection::ReflectionError> {
            Ok((
                fundamental_matrix(&sys, t)?,
                fundamental_matrix_derivative(&sys, t)?,
                fundamental_residual(&sys, t)?.frobenius() / scale,
            ))
        };
        let (x, dx, r) = compute().map_err(|e| CliError::Compute(format!("t = {t}: {e}")))?;
        worst = worst.max(r);
        write!(out, "{t}").expect("string write");
        for v in x.data().iter().chain(dx.data()) {
            write!(out, ",{v}").expect("string write");
        }
        writeln!(out, ",{r:e}").expect("string write");
    }
    Ok(Outcome {
        text: out,
        pass: worst <= args.tol,
    })
}

pub fn invariant(args: &InvariantArgs) -> Result<Outcome, CliError> {
    let xs = load_matrices(&args.matrices)?;
    let ms = &args.index;
    if ms.len() != xs.len() {
        return Err(CliError::Usage(format!(
            "--index has {} entries but {} holds {} matrices",
            ms.len(),
            args.matrices.display(),
            xs.len()
        )));
    }
    let input_error = |e: crate::invariants::InvariantError| CliError::Input {
        file: args.matrices.display().to_string(),
        field: "matrices".into(),
        message: e.to_string(),
    };
    let value = z_value(ms, &xs).map_err(input_error)?;
    let tracelog = z_via_tracelog(ms, &xs).map_err(input_error)?;
    let check = Check::new(
        "interpolation vs trace-log",
        "coefficient of det(I + sum a_i X_i) = coefficient of exp(Tr log(I + sum a_i X_i))",
        Some((value - tracelog).abs()),
        args.tol,
    );
    let pass = check.pass;
    let doc = json!({
        "index": ms.0,
        "n": xs.first().map_or(0, |x| x.rows()),
        "value": value,
        "tracelog": tracelog,
        "checks": [check],
    });
    Ok(Outcome {
        text: pretty(&doc),
        pass,
    })
}

pub fn closure(args: &ClosureArgs) -> Result<Outcome, CliError> {
    if args.n < 2 || args.max_depth < 2 {
        return Err(CliError::Usage(
            "closure needs --n >= 2 and --max-depth >= 2".into(),
        ));
    }
    let report = explore(args.n, args.max_depth);
    let mut doc = report.to_json();
    let mut pass = true;
    if let Some(path) = &args.system {
        let sys = load_reflection_system(path)?;
        if sys.dim() != args.n {
            return Err(CliError::Input {
                file: path.display().to_string(),
                field: "F".into(),
                message: format!("system has n = {}, --n is {}", sys.dim(), args.n),
            });
        }
        let residual = if report.closed {
            numeric_verify(&report, &sys, &args.t_grid.points(), args.h).ok()
        } else {
            None
        };
        let check = Check::new(
            "transition against the fundamental matrix",
            "second differences of the states follow the transition",
            residual,
            args.tol,
        );
        pass = check.pass || !report.closed;
        doc["checks"] = json!([check]);
    }
    Ok(Outcome {
        text: pretty(&doc),
        pass,
    })
}

pub fn complex_solve(args: &ComplexSolveArgs) -> Result<Outcome, CliError> {
    let sys = load_complex_system(&args.system)?;
    if args.h <= 0.0 || !args.h.is_finite() {
        return Err(CliError::Usage("--h must be positive".into()));
    }
    if args.t_grid.start < 0.0 {
        return Err(CliError::Usage(
            "complex-solve integrates forward from t = 0".into(),
        ));
    }
    let points = args.t_grid.points();
    let mut steps = Vec::with_capacity(points.len());
    for &t in &points {
        let k = (t / args.h).round();
        if (k * args.h - t).abs() > 1e-9 * args.h.max(t) {
            return Err(CliError::Usage(format!(
                "t-grid point {t} is not a multiple of --h"
            )));
        }
        steps.push(k as usize);
    }
    let t1 = *points.last().expect("grid is non-empty");
    let pair =
        solve_fundamental_pair(&sys, t1, args.h).map_err(|e| CliError::Compute(e.to_string()))?;
    let n = sys.dim();
    let mut out = String::from("t");
    header_entries(&mut out, "X0", n, &[".re", ".im"]);
    header_entries(&mut out, "X1", n, &[".re", ".im"]);
    out.push('\n');
    for (&t, &k) in points.iter().zip(&steps) {
        let s = &pair.samples[k.min(pair.samples.len() - 1)];
        write!(out, "{t}").expect("string write");
        for z in s.x0.data().iter().chain(s.x1.data()) {
            write!(out, ",{},{}", z.re, z.im).expect("string write");
        }
        out.push('\n');
    }
    let finite = pair
        .samples
        .iter()
        .all(|s| s.x0.data().iter().all(|z| z.is_finite()));
    Ok(Outcome {
        text: out,
        pass: finite,
    })
}

pub fn verify(args: &VerifyArgs) -> Result<Outcome, CliError> {
    if let Some(tol) = args.tol {
        if !(tol.is_finite() && tol >= 0.0) {
            return Err(CliError::Usage(
                "--tol must be a non-negative number".into(),
            ));
        }
    }
    let cfg = SuiteConfig {
        seed: args.seed,
        trials: args.trials,
        mode: args.mode.into(),
    };
    let suites = args.suite.expand();
    let mut checks = Vec::new();
    for &suite in &suites {
        for mut c in run_suite(suite, &cfg) {
            c.name = format!("{}: {}", suite.name(), c.name);
            if let Some(tol) = args.tol {
                c = Check {
                    tolerance: tol,
                    pass: c.residual.is_some_and(|r| r <= tol),
                    ..c
                };
            }
            checks.push(c);
        }
    }
    let report = Report::new(
        suites.iter().map(|s| s.name().to_string()).collect(),
        args.seed,
        args.trials,
        cfg.mode.name(),
        checks,
    );
    Ok(Outcome {
        pass: report.passed,
        text: report.to_json(),
    })
}

fn pretty(v: &serde_json::Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json value serializes");
    s.push('\n');
    s
}
