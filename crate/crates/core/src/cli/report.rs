use std::fmt::{self, Display, Write as _};
use std::time::Duration;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CheckOutcome {
    Pass,
    /// Failing check with a short description, usually the first bad index.
    Fail(String),
}

/// `KEY=VALUE` lines: `COMMAND`, `PARAM.*`, `CHECK.*`, `VALUE.*`, `TIME.*`
/// and a closing `RESULT`. Only the `TIME.*` lines vary between runs.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct RunReport {
    pub command: String,
    params: Vec<(String, String)>,
    checks: Vec<(String, CheckOutcome)>,
    values: Vec<(String, String)>,
    timings: Vec<(String, Duration)>,
}

impl RunReport {
    pub fn new(command: &str) -> Self {
        RunReport { command: command.to_string(), ..Default::default() }
    }

    pub fn param(&mut self, key: &str, value: impl Display) {
        self.params.push((key.to_string(), value.to_string()));
    }

    pub fn value(&mut self, key: &str, value: impl Display) {
        self.values.push((key.to_string(), value.to_string()));
    }

    pub fn check(&mut self, key: &str, outcome: CheckOutcome) {
        self.checks.push((key.to_string(), outcome));
    }

    pub fn check_bool(&mut self, key: &str, ok: bool, detail: impl FnOnce() -> String) {
        let outcome = if ok { CheckOutcome::Pass } else { CheckOutcome::Fail(detail()) };
        self.check(key, outcome);
    }

    pub fn timing(&mut self, key: &str, elapsed: Duration) {
        self.timings.push((key.to_string(), elapsed));
    }

    pub fn checks(&self) -> &[(String, CheckOutcome)] {
        &self.checks
    }

    pub fn get_param(&self, key: &str) -> Option<&str> {
        self.params.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }

    pub fn get_value(&self, key: &str) -> Option<&str> {
        self.values.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }

    pub fn get_check(&self, key: &str) -> Option<&CheckOutcome> {
        self.checks.iter().find(|(k, _)| k == key).map(|(_, v)| v)
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|(_, c)| *c == CheckOutcome::Pass)
    }

    pub fn exit_code(&self) -> i32 {
        if self.passed() {
            0
        } else {
            1
        }
    }

    /// The report without `TIME.*` lines.
    pub fn render_stable(&self) -> String {
        self.render_inner(false)
    }

    fn render_inner(&self, timings: bool) -> String {
        let mut out = String::new();
        let mut line = |k: &str, v: &dyn Display| writeln!(out, "{k}={v}").expect("write to string");
        line("COMMAND", &self.command);
        for (k, v) in &self.params {
            line(&format!("PARAM.{k}"), v);
        }
        for (k, c) in &self.checks {
            match c {
                CheckOutcome::Pass => line(&format!("CHECK.{k}"), &"PASS"),
                CheckOutcome::Fail(why) => line(&format!("CHECK.{k}"), &format!("FAIL {why}")),
            }
        }
        for (k, v) in &self.values {
            line(&format!("VALUE.{k}"), v);
        }
        if timings {
            for (k, d) in &self.timings {
                line(&format!("TIME.{k}"), &format!("{:.3}s", d.as_secs_f64()));
            }
        }
        line("RESULT", &if self.passed() { "PASS" } else { "FAIL" });
        out
    }
}

impl fmt::Display for RunReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render_inner(true))
    }
}
