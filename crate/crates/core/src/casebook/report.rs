//! Certificate steps and case reports.

use serde_json::{json, Value};

use crate::error::Result;

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum StepKind {
    MachineChecked,
    External,
}

#[derive(Clone, Debug)]
pub struct CertificateStep {
    pub kind: StepKind,
    pub op: String,
    pub description: String,
    pub inputs: Value,
    pub outputs: Value,
    pub citation: Option<String>,
    pub ok: bool,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Verdict {
    Contradiction,
    ReducedTo,
    Open,
}

impl Verdict {
    pub fn as_str(&self) -> &'static str {
        match self {
            Verdict::Contradiction => "CONTRADICTION",
            Verdict::ReducedTo => "REDUCED_TO",
            Verdict::Open => "OPEN",
        }
    }
}

#[derive(Clone, Debug)]
pub struct CaseReport {
    pub case: String,
    pub seed: u64,
    pub verdict: Verdict,
    /// Free-form target description for REDUCED_TO verdicts.
    pub target: Option<String>,
    pub steps: Vec<CertificateStep>,
    /// Named SVG renderings collected along the pipeline.
    pub svgs: Vec<(String, String)>,
}

impl CaseReport {
    /// True iff every machine-checked step passed.
    pub fn all_checks_pass(&self) -> bool {
        self.steps
            .iter()
            .filter(|s| s.kind == StepKind::MachineChecked)
            .all(|s| s.ok)
    }

    /// A CONTRADICTION verdict requires at least one machine-checked
    /// contradiction step; enforced at construction time by the runners.
    pub fn to_json(&self) -> Value {
        json!({
            "case": self.case,
            "seed": self.seed,
            "verdict": self.verdict.as_str(),
            "target": self.target,
            "ok": self.all_checks_pass(),
            "steps": self.steps.iter().map(|s| {
                let mut v = json!({
                    "kind": match s.kind {
                        StepKind::MachineChecked => "MACHINE_CHECKED",
                        StepKind::External => "EXTERNAL",
                    },
                    "op": s.op,
                    "description": s.description,
                    "inputs": s.inputs,
                    "outputs": s.outputs,
                    "ok": s.ok,
                });
                if let Some(c) = &s.citation {
                    v["citation"] = json!(c);
                }
                v
            }).collect::<Vec<_>>(),
        })
    }

    pub fn render_text(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!(
            "case {} (seed {})  ->  {}{}\n",
            self.case,
            self.seed,
            self.verdict.as_str(),
            self.target
                .as_ref()
                .map(|t| format!(" [{t}]"))
                .unwrap_or_default()
        ));
        for (k, s) in self.steps.iter().enumerate() {
            let tag = match s.kind {
                StepKind::MachineChecked => {
                    if s.ok {
                        "MACHINE ok  "
                    } else {
                        "MACHINE FAIL"
                    }
                }
                StepKind::External => "EXTERNAL    ",
            };
            out.push_str(&format!("  {:>2}. [{tag}] {}: {}\n", k + 1, s.op, s.description));
            if let Some(c) = &s.citation {
                out.push_str(&format!("      cited: {c}\n"));
            }
            if !s.ok {
                out.push_str(&format!("      failure: {}\n", s.outputs));
            }
        }
        out
    }
}

/// Step accumulator used by the case runners.
#[derive(Default)]
pub struct Cert {
    pub steps: Vec<CertificateStep>,
    pub svgs: Vec<(String, String)>,
}

impl Cert {
    pub fn new() -> Self {
        Cert::default()
    }

    /// Run a machine check; on failure the error is recorded and propagated.
    pub fn machine<F>(&mut self, op: &str, description: &str, f: F) -> Result<()>
    where
        F: FnOnce() -> Result<(Value, Value)>,
    {
        match f() {
            Ok((inputs, outputs)) => {
                self.steps.push(CertificateStep {
                    kind: StepKind::MachineChecked,
                    op: op.to_string(),
                    description: description.to_string(),
                    inputs,
                    outputs,
                    citation: None,
                    ok: true,
                });
                Ok(())
            }
            Err(e) => {
                self.steps.push(CertificateStep {
                    kind: StepKind::MachineChecked,
                    op: op.to_string(),
                    description: description.to_string(),
                    inputs: Value::Null,
                    outputs: json!(e.to_string()),
                    citation: None,
                    ok: false,
                });
                Err(e)
            }
        }
    }

    pub fn external(&mut self, citation: &str, description: &str) {
        self.steps.push(CertificateStep {
            kind: StepKind::External,
            op: "cite".to_string(),
            description: description.to_string(),
            inputs: Value::Null,
            outputs: Value::Null,
            citation: Some(citation.to_string()),
            ok: true,
        });
    }

    pub fn svg(&mut self, name: &str, svg: String) {
        self.svgs.push((name.to_string(), svg));
    }

    pub fn into_report(
        self,
        case: &str,
        seed: u64,
        verdict: Verdict,
        target: Option<String>,
    ) -> CaseReport {
        CaseReport {
            case: case.to_string(),
            seed,
            verdict,
            target,
            steps: self.steps,
            svgs: self.svgs,
        }
    }
}
