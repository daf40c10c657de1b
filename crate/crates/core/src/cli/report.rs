use serde::Serialize;

/// One verified identity.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    /// The identity being checked, as a formula.
    pub paper_ref: String,
    /// Worst residual seen; `None` when the computation itself failed.
    pub residual: Option<f64>,
    pub tolerance: f64,
    pub pass: bool,
    /// Informational checks are reported but do not affect the exit code.
    #[serde(skip_serializing_if = "std::ops::Not::not")]
    pub informational: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl Check {
    pub fn new(name: &str, identity: &str, residual: Option<f64>, tolerance: f64) -> Self {
        let pass = residual.is_some_and(|r| r.is_finite() && r <= tolerance);
        Self {
            name: name.to_string(),
            paper_ref: identity.to_string(),
            residual: residual.filter(|r| r.is_finite()),
            tolerance,
            pass,
            informational: false,
            note: None,
        }
    }

    /// Exact yes/no check, reported with residual 0 or 1.
    pub fn exact(name: &str, identity: &str, holds: bool) -> Self {
        Self::new(name, identity, Some(if holds { 0.0 } else { 1.0 }), 0.0)
    }

    pub fn informational(mut self) -> Self {
        self.informational = true;
        self
    }

    pub fn with_note(mut self, note: &str) -> Self {
        self.note = Some(note.to_string());
        self
    }

    pub fn counts(&self) -> bool {
        !self.informational
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub suites: Vec<String>,
    pub seed: u64,
    pub trials: u32,
    pub mode: String,
    pub passed: bool,
    pub checks: Vec<Check>,
}

impl Report {
    pub fn new(
        suites: Vec<String>,
        seed: u64,
        trials: u32,
        mode: &str,
        checks: Vec<Check>,
    ) -> Self {
        let passed = checks.iter().filter(|c| c.counts()).all(|c| c.pass);
        Self {
            suites,
            seed,
            trials,
            mode: mode.to_string(),
            passed,
            checks,
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }
}

/// Running maximum that turns any failure into a failed check.
#[derive(Debug, Clone, Copy, Default)]
pub struct Worst(Option<f64>, bool);

impl Worst {
    pub fn new() -> Self {
        Self(Some(0.0), false)
    }

    pub fn record<E>(&mut self, r: Result<f64, E>) {
        match r {
            Ok(v) if v.is_finite() && !self.1 => {
                self.0 = Some(self.0.unwrap_or(0.0).max(v));
            }
            _ => {
                self.1 = true;
                self.0 = None;
            }
        }
    }

    pub fn value(self) -> Option<f64> {
        self.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pass_logic() {
        assert!(Check::new("a", "x = x", Some(1e-12), 1e-10).pass);
        assert!(!Check::new("a", "x = x", Some(1e-9), 1e-10).pass);
        assert!(!Check::new("a", "x = x", None, 1e-10).pass);
        assert!(!Check::new("a", "x = x", Some(f64::NAN), 1e-10).pass);
        let checks = vec![
            Check::exact("a", "", true),
            Check::exact("b", "", false).informational(),
        ];
        assert!(Report::new(vec![], 1, 1, "m", checks).passed);
    }

    #[test]
    fn worst_tracks_failures() {
        let mut w = Worst::new();
        w.record::<()>(Ok(1e-3));
        w.record::<()>(Ok(1e-5));
        assert_eq!(w.value(), Some(1e-3));
        w.record(Err(()));
        w.record::<()>(Ok(1.0));
        assert_eq!(w.value(), None);
    }

    #[test]
    fn json_omits_defaults() {
        let r = Report::new(
            vec!["s".into()],
            42,
            3,
            "section45",
            vec![Check::exact("a", "b", true)],
        );
        let text = r.to_json();
        assert!(text.contains("\"checks\""));
        assert!(!text.contains("informational"));
        assert!(!text.contains("note"));
    }
}
