//! Task reports: verdicts, checks, certificates and counters.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::time::Duration;

use germlift::groebner::GbStats;
use serde::Serialize;

use crate::certificate::Certificate;

pub const REPORT_SCHEMA: &str = "germlift-report/1";

/// Ordered by severity, so the verdict of a task is the maximum over its
/// checks.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Verdict {
    #[serde(rename = "PASS")]
    Pass,
    /// Polynomial non-membership on an instance that is not graded, where
    /// it does not settle the question for germs.
    #[serde(rename = "UNDECIDED_LOCAL")]
    UndecidedLocal,
    #[serde(rename = "TIMEOUT")]
    Timeout,
    #[serde(rename = "FAIL")]
    Fail,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Pass => "PASS",
            Verdict::UndecidedLocal => "UNDECIDED_LOCAL",
            Verdict::Timeout => "TIMEOUT",
            Verdict::Fail => "FAIL",
        }
    }

    pub fn exit_code(self) -> i32 {
        match self {
            Verdict::Pass => 0,
            Verdict::Fail | Verdict::UndecidedLocal => 2,
            Verdict::Timeout => 3,
        }
    }

    pub fn of(ok: bool) -> Self {
        if ok {
            Verdict::Pass
        } else {
            Verdict::Fail
        }
    }
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub verdict: Verdict,
    #[serde(skip_serializing_if = "String::is_empty")]
    pub detail: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub schema: &'static str,
    pub task: String,
    pub op: String,
    pub verdict: Verdict,
    pub summary: String,
    pub checks: Vec<Check>,
    #[serde(skip_serializing_if = "BTreeMap::is_empty")]
    pub outputs: BTreeMap<String, Vec<Vec<String>>>,
    pub certificates: Vec<Certificate>,
    pub counters: GbStats,
    /// Wall-clock time; serialized only on request so that reports stay
    /// byte-identical across runs by default.
    #[serde(rename = "timing_ms", skip_serializing_if = "Option::is_none")]
    pub timing: Option<u128>,
    #[serde(skip)]
    pub elapsed: Duration,
}

impl Report {
    /// Every positive certificate re-verifies.
    pub fn reverify(&self) -> Result<(), String> {
        for c in self.certificates.iter().filter(|c| c.is_positive()) {
            c.verify()?;
        }
        Ok(())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// Human-readable rendering.
    pub fn render(&self, show_witness: bool) -> String {
        let mut s = String::new();
        let _ = writeln!(
            s,
            "{} [{}] {}: {} ({:.2} s, {} s-pairs, {} reductions)",
            self.verdict,
            self.op,
            self.task,
            self.summary,
            self.elapsed.as_secs_f64(),
            self.counters.s_pairs,
            self.counters.reductions
        );
        for c in &self.checks {
            if c.verdict != Verdict::Pass || show_witness {
                let _ = write!(s, "  {} {}", c.verdict, c.name);
                if !c.detail.is_empty() {
                    let _ = write!(s, ": {}", c.detail);
                }
                s.push('\n');
            }
        }
        for (name, gens) in &self.outputs {
            let _ = writeln!(s, "  {name}:");
            for g in gens {
                let _ = writeln!(s, "    [{}]", g.join(", "));
            }
        }
        if show_witness {
            for c in &self.certificates {
                let _ = writeln!(s, "  {}", render_certificate(c));
            }
        }
        s
    }
}

fn render_certificate(c: &Certificate) -> String {
    match c {
        Certificate::Witness { label, eta, xi, .. } => {
            format!("witness {label}: eta = [{}], xi = [{}]", eta.join(", "), xi.join(", "))
        }
        Certificate::Quotient { label, alpha, .. } => format!("quotient {label}: alpha = {alpha}"),
        Certificate::Membership { label, coefficients, .. } => {
            format!("membership {label}: coefficients = [{}]", coefficients.join(", "))
        }
        Certificate::Scalar { label, scalar, .. } => format!("scalar {label}: {scalar}"),
        Certificate::Identity { label, .. } => format!("identity {label}"),
        Certificate::NormalForm { label, normal_form } => {
            format!("normal form {label}: [{}]", normal_form.join(", "))
        }
    }
}
