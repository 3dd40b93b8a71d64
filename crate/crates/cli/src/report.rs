//! Serializable analysis reports.

use std::time::Instant;

use serde::{Deserialize, Serialize};

use qfsplit::config::AnalysisConfig;
use qfsplit::criteria::{self, Flag, Verdict};
use qfsplit::localcoh::{self, DoubleCover, DoubleCoverAnalysis, ImageCertificate};
use qfsplit::poly::Poly;

use crate::catalog::{CatalogEntry, Kind};

/// Bumped on any incompatible change to the report layout.
pub const SCHEMA_VERSION: u32 = 1;

pub fn tool_version() -> String {
    format!("qfsplit {}", env!("CARGO_PKG_VERSION"))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerdictReport {
    pub f_split: bool,
    /// `null` when the height-two test did not run.
    pub quasi2: Option<bool>,
    /// `1` or `2`; `null` means above two or undecided.
    pub height_le: Option<u32>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CarryReport {
    pub split: String,
    pub x_part: String,
    pub y_part: String,
    pub carry_polynomial: String,
    pub class: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MembershipReport {
    pub member: bool,
    pub bound: u64,
    pub escalations: u32,
    /// `"preimage"` or `"separating"`.
    pub certificate: String,
    /// The preimage class, or the separating functional written in the
    /// dual basis.
    pub certificate_class: String,
    /// Value of the separating functional on the carry class.
    pub value: Option<u64>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Intermediates {
    pub clause1_residue: Option<String>,
    pub clause2_residue: Option<String>,
    pub frobenius_socle: Option<String>,
    pub carry: Option<CarryReport>,
    pub membership: Option<MembershipReport>,
    pub isolated: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub schema_version: u32,
    pub tool_version: String,
    pub entry: CatalogEntry,
    pub verdict: Option<VerdictReport>,
    pub summary: String,
    pub flags: Vec<String>,
    pub error: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub intermediates: Option<Intermediates>,
    /// Wall-clock time, recorded only on request so that reports stay
    /// reproducible.
    pub timing_ms: Option<u64>,
}

impl Report {
    pub fn is_error(&self) -> bool {
        self.error.is_some()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("reports serialize")
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct ReportOptions {
    pub explain: bool,
    pub timing: bool,
}

enum Outcome {
    Hypersurface(Verdict),
    Doublecover(Box<DoubleCoverAnalysis>),
}

fn run(entry: &CatalogEntry, config: &AnalysisConfig) -> Result<Outcome, String> {
    match entry.kind {
        Kind::Hypersurface => {
            let f = Poly::parse_infer(&entry.poly, entry.p).map_err(|e| e.to_string())?;
            criteria::height_search(&f, 2)
                .map(Outcome::Hypersurface)
                .map_err(|e| e.to_string())
        }
        Kind::Doublecover => {
            let cover = DoubleCover::parse(entry.p, &entry.poly).map_err(|e| e.to_string())?;
            localcoh::quasi2_doublecover(&cover, config)
                .map(|a| Outcome::Doublecover(Box::new(a)))
                .map_err(|e| e.to_string())
        }
    }
}

fn verdict_report(v: &Verdict) -> VerdictReport {
    VerdictReport {
        f_split: v.f_split,
        quasi2: v.quasi2,
        height_le: v.height_le.as_number(),
    }
}

fn intermediates(outcome: &Outcome) -> Intermediates {
    match outcome {
        Outcome::Hypersurface(v) => {
            let w = v.witnesses.as_ref();
            Intermediates {
                clause1_residue: w.map(|w| w.clause1.to_string()),
                clause2_residue: w.and_then(|w| w.clause2.as_ref()).map(ToString::to_string),
                ..Intermediates::default()
            }
        }
        Outcome::Doublecover(a) => Intermediates {
            frobenius_socle: Some(a.frobenius_socle.to_string()),
            carry: a.carry.as_ref().map(|c| CarryReport {
                split: serde_json::to_value(c.strategy)
                    .ok()
                    .and_then(|v| v.as_str().map(str::to_string))
                    .unwrap_or_default(),
                x_part: c.x_part.to_string(),
                y_part: c.y_part.to_string(),
                carry_polynomial: c.carry.to_string(),
                class: c.class.to_string(),
            }),
            membership: a.membership.as_ref().map(|m| {
                let (kind, class, value) = match &m.certificate {
                    ImageCertificate::Preimage(c) => ("preimage", c.to_string(), None),
                    ImageCertificate::Separating { functional, value } => {
                        ("separating", functional.to_string(), Some(*value))
                    }
                };
                MembershipReport {
                    member: m.member,
                    bound: m.bound,
                    escalations: m.escalations,
                    certificate: kind.to_string(),
                    certificate_class: class,
                    value,
                }
            }),
            isolated: Some(a.isolated),
            ..Intermediates::default()
        },
    }
}

/// Analyzes one entry. Failures are recorded in the report, never raised.
pub fn analyze(entry: &CatalogEntry, config: &AnalysisConfig, options: ReportOptions) -> Report {
    let start = Instant::now();
    let outcome = run(entry, config);
    let timing_ms = options.timing.then(|| start.elapsed().as_millis() as u64);
    let mut report = Report {
        schema_version: SCHEMA_VERSION,
        tool_version: tool_version(),
        entry: entry.clone(),
        verdict: None,
        summary: String::new(),
        flags: Vec::new(),
        error: None,
        intermediates: None,
        timing_ms,
    };
    match outcome {
        Ok(outcome) => {
            let verdict = match &outcome {
                Outcome::Hypersurface(v) => v,
                Outcome::Doublecover(a) => &a.verdict,
            };
            report.verdict = Some(verdict_report(verdict));
            report.summary = verdict.summary();
            report.flags = verdict.flags.iter().map(|f| f.label().to_string()).collect();
            if options.explain {
                report.intermediates = Some(intermediates(&outcome));
            }
        }
        Err(message) => {
            report.summary = message.clone();
            report.flags = vec![Flag::Error.label().to_string()];
            report.error = Some(message);
        }
    }
    report
}

/// Multi-line human-readable rendering; the first line is the verdict.
pub fn render_text(report: &Report) -> String {
    let mut out = report.summary.clone();
    if let Some(i) = &report.intermediates {
        let mut line = |label: &str, value: &str| {
            out.push_str(&format!("\n  {label}: {value}"));
        };
        if let Some(r) = &i.clause1_residue {
            line("f^(p-1) mod (x^p)", r);
        }
        if let Some(r) = &i.clause2_residue {
            line("f^(p^2-p-1) Δ(f) mod (x^(p^2))", r);
        }
        if let Some(s) = &i.frobenius_socle {
            line("F(socle)", s);
        }
        if let Some(c) = &i.carry {
            line("split", &format!("{} + {} ({})", c.x_part, c.y_part, c.split));
            line("carry polynomial", &c.carry_polynomial);
            line("carry class", &c.class);
        }
        if let Some(m) = &i.membership {
            line("in image of Frobenius", &m.member.to_string());
            line(&format!("{} certificate", m.certificate), &m.certificate_class);
        }
        if let Some(iso) = i.isolated {
            line("isolated singularity", &iso.to_string());
        }
        if !report.flags.is_empty() {
            line("flags", &report.flags.join(", "));
        }
    }
    out
}
