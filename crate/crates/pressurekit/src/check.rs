use std::fmt;

/// One verified property: a measured residual against its tolerance.
#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: String,
    pub residual: f64,
    pub tolerance: f64,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    /// Passes when `residual <= tolerance`.
    pub fn within(name: impl Into<String>, residual: f64, tolerance: f64, detail: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            residual,
            tolerance,
            passed: residual <= tolerance,
            detail: detail.into(),
        }
    }

    /// Combine sub-checks: the worst residual ratio decides.
    pub fn all(name: impl Into<String>, parts: Vec<Check>) -> Self {
        let passed = parts.iter().all(|c| c.passed);
        // a failing part always has the largest ratio
        let worst = parts.iter().max_by(|a, b| ratio(a).total_cmp(&ratio(b)));
        let detail: Vec<String> = parts
            .iter()
            .map(|c| format!("{}{}: {:.3e} vs {:.1e}", if c.passed { "" } else { "FAILED " }, c.name, c.residual, c.tolerance))
            .collect();
        let (residual, tolerance) = worst.map_or((0.0, 0.0), |w| (w.residual, w.tolerance));
        Self {
            name: name.into(),
            residual,
            tolerance,
            passed,
            detail: detail.join("; "),
        }
    }

    pub fn error(name: impl Into<String>, err: impl fmt::Display) -> Self {
        Self {
            name: name.into(),
            residual: f64::INFINITY,
            tolerance: 0.0,
            passed: false,
            detail: format!("error: {err}"),
        }
    }
}

fn ratio(c: &Check) -> f64 {
    if c.tolerance > 0.0 {
        c.residual / c.tolerance
    } else if c.residual > 0.0 {
        f64::INFINITY
    } else {
        0.0
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} {} residual={:.3e} tol={:.1e}",
            if self.passed { "PASS" } else { "FAIL" },
            self.name,
            self.residual,
            self.tolerance
        )?;
        if !self.detail.is_empty() {
            write!(f, " [{}]", self.detail)?;
        }
        Ok(())
    }
}

/// Turn a fallible check body into a `Check`, mapping errors to failures.
pub fn guarded<E: fmt::Display>(name: &str, f: impl FnOnce() -> Result<Check, E>) -> Check {
    match f() {
        Ok(mut c) => {
            c.name = name.to_string();
            c
        }
        Err(e) => Check::error(name, e),
    }
}
