use serde::Serialize;
use std::fmt;

/// One verified identity: a name, the two sides as printable values, and
/// whether they agreed.
#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    pub lhs: String,
    pub rhs: String,
}

impl Check {
    pub fn new(
        name: impl Into<String>,
        pass: bool,
        lhs: impl fmt::Display,
        rhs: impl fmt::Display,
    ) -> Self {
        Check {
            name: name.into(),
            pass,
            lhs: lhs.to_string(),
            rhs: rhs.to_string(),
        }
    }

    /// Check asserting display equality of both sides.
    pub fn eq(name: impl Into<String>, lhs: impl fmt::Display, rhs: impl fmt::Display) -> Self {
        let l = lhs.to_string();
        let r = rhs.to_string();
        Check {
            name: name.into(),
            pass: l == r,
            lhs: l,
            rhs: r,
        }
    }
}

/// A named batch of checks.
#[derive(Clone, Debug, Default, Serialize)]
pub struct Report {
    pub name: String,
    pub checks: Vec<Check>,
}

impl Report {
    pub fn new(name: impl Into<String>) -> Self {
        Report {
            name: name.into(),
            checks: Vec::new(),
        }
    }

    pub fn push(&mut self, check: Check) {
        self.checks.push(check);
    }

    pub fn merge(&mut self, other: Report) {
        self.checks.extend(other.checks);
    }

    pub fn pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.pass)
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "[{}] {}",
            if self.pass() { "pass" } else { "FAIL" },
            self.name
        )?;
        for c in &self.checks {
            writeln!(
                f,
                "  [{}] {}: {} vs {}",
                if c.pass { "ok" } else { "FAIL" },
                c.name,
                c.lhs,
                c.rhs
            )?;
        }
        Ok(())
    }
}
