use std::fmt;
use std::io::Write;
use std::path::Path;
use std::sync::Arc;

use rayon::prelude::*;

use qfsplit::config::AnalysisConfig;
use qfsplit::poly::{identifiers, Poly, PolyRing};
use qfsplit::witt::{delta_carry, WittVec};

use crate::catalog::{parse_catalog, CatalogEntry, Kind};
use crate::report::{analyze, Report, ReportOptions};
use crate::CliError;

/// Analyzes a single polynomial. Analysis failures are input errors here.
pub fn cmd_check(
    p: u64,
    kind: Kind,
    poly: &str,
    options: ReportOptions,
    config: &AnalysisConfig,
) -> Result<Report, CliError> {
    let entry = CatalogEntry {
        name: "check".to_string(),
        p,
        kind,
        poly: poly.to_string(),
        tags: Vec::new(),
    };
    let report = analyze(&entry, config, options);
    match &report.error {
        Some(message) => Err(CliError::Input(message.clone())),
        None => Ok(report),
    }
}

/// Counts per verdict class.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct BatchSummary {
    pub entries: usize,
    pub height1: usize,
    pub height2: usize,
    pub unknown: usize,
    pub errors: usize,
}

impl fmt::Display for BatchSummary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.entries == 0 {
            return f.write_str("0 entries");
        }
        write!(
            f,
            "{} entries: {} height 1, {} height 2, {} unknown, {} errors",
            self.entries, self.height1, self.height2, self.unknown, self.errors
        )
    }
}

/// Analyzes every entry, using up to `jobs` threads, and returns the reports
/// in catalog order.
pub fn run_batch(
    entries: &[CatalogEntry],
    jobs: usize,
    options: ReportOptions,
    config: &AnalysisConfig,
) -> Result<Vec<Report>, CliError> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()
        .map_err(|e| CliError::Io(e.to_string()))?;
    Ok(pool.install(|| entries.par_iter().map(|e| analyze(e, config, options)).collect()))
}

pub fn summarize(reports: &[Report]) -> BatchSummary {
    let mut s = BatchSummary {
        entries: reports.len(),
        ..BatchSummary::default()
    };
    for r in reports {
        match r.verdict.as_ref().map(|v| v.height_le) {
            None => s.errors += 1,
            Some(Some(1)) => s.height1 += 1,
            Some(Some(2)) => s.height2 += 1,
            Some(_) => s.unknown += 1,
        }
    }
    s
}

/// Reads a JSON Lines catalog and writes one report per line to `output`.
pub fn cmd_batch(
    catalog: &Path,
    output: &mut dyn Write,
    jobs: usize,
    options: ReportOptions,
    config: &AnalysisConfig,
) -> Result<BatchSummary, CliError> {
    let text =
        std::fs::read_to_string(catalog).map_err(|e| CliError::Io(format!("{}: {e}", catalog.display())))?;
    let entries = parse_catalog(&text)?;
    let reports = run_batch(&entries, jobs, options, config)?;
    for r in &reports {
        writeln!(output, "{}", r.to_json()).map_err(|e| CliError::Io(e.to_string()))?;
    }
    Ok(summarize(&reports))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WittOp {
    Add,
    Mul,
    Teich,
    Delta,
    Identity,
}

/// Result of a `witt` subcommand: the rendering and, for `identity`, whether
/// it held.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WittOutput {
    pub text: String,
    pub ok: bool,
}

fn operand_ring(p: u64, operands: &[&str]) -> Result<Arc<PolyRing>, CliError> {
    let mut names = Vec::new();
    for op in operands {
        let stripped: String = op
            .chars()
            .map(|c| if matches!(c, '[' | ']' | ';') { ' ' } else { c })
            .collect();
        names.extend(identifiers(&stripped).map_err(|e| CliError::Input(e.to_string()))?);
    }
    let joined = names.join(" ");
    let names = identifiers(&joined).map_err(|e| CliError::Input(e.to_string()))?;
    PolyRing::new(p, &names).map_err(|e| CliError::Input(e.to_string()))
}

fn input<T, E: fmt::Display>(r: Result<T, E>) -> Result<T, CliError> {
    r.map_err(|e| CliError::Input(e.to_string()))
}

/// `f([x_1], ..., [x_n])`: each monomial `c x^a` becomes `[c] Π [x_i]^(a_i)`
/// in `W_n`.
pub fn evaluate_at_teichmuller(f: &Poly, n: usize) -> Result<WittVec, CliError> {
    let ring = f.ring();
    let mut total = WittVec::zero(ring, n);
    for (m, c) in f.terms() {
        let mut term = WittVec::teichmuller(&Poly::constant(ring, c as i64), n);
        for (i, &e) in m.exps().iter().enumerate() {
            let xi = WittVec::teichmuller(&Poly::var(ring, i), n);
            for _ in 0..e {
                term = input(term.mul(&xi))?;
            }
        }
        total = input(total.add(&term))?;
    }
    Ok(total)
}

pub fn cmd_witt(op: WittOp, p: u64, n: usize, operands: &[&str], cap: usize) -> Result<WittOutput, CliError> {
    if n == 0 || n > cap {
        return Err(CliError::Input(format!("Witt length must be between 1 and {cap}, got {n}")));
    }
    let ring = operand_ring(p, operands)?;
    let witt = |i: usize| input(WittVec::parse(operands[i], &ring, n));
    let poly = |i: usize| input(Poly::parse(operands[i], &ring));
    let done = |text: String| Ok(WittOutput { text, ok: true });
    match op {
        WittOp::Add => done(input(witt(0)?.add(&witt(1)?))?.to_string()),
        WittOp::Mul => done(input(witt(0)?.mul(&witt(1)?))?.to_string()),
        WittOp::Teich => done(WittVec::teichmuller(&poly(0)?, n).to_string()),
        WittOp::Delta => done(delta_carry(&poly(0)?).to_string()),
        WittOp::Identity => {
            let f = poly(0)?;
            let lhs = WittVec::teichmuller(&f, 2);
            let correction = WittVec::teichmuller(&delta_carry(&f), 1).verschiebung();
            let rhs = input(evaluate_at_teichmuller(&f, 2)?.add(&correction))?;
            let ok = lhs == rhs;
            let text = format!(
                "{}\n  [f] = {lhs}\n  f([x]) + VΔ(f) = {rhs}",
                if ok { "PASS" } else { "FAIL" }
            );
            Ok(WittOutput { text, ok })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn witt(op: WittOp, p: u64, operands: &[&str]) -> WittOutput {
        cmd_witt(op, p, 2, operands, 8).unwrap()
    }

    #[test]
    fn witt_commands() {
        assert_eq!(witt(WittOp::Add, 2, &["[1]", "[1]"]).text, "(0; 1)");
        assert_eq!(witt(WittOp::Delta, 3, &["x^3 + y^4"]).text, "x^6*y^4 + x^3*y^8");
        let id = witt(WittOp::Identity, 2, &["x + y"]);
        assert!(id.ok);
        assert!(id.text.starts_with("PASS"));
        assert!(matches!(cmd_witt(WittOp::Teich, 3, 9, &["x"], 8), Err(CliError::Input(_))));
        assert!(matches!(cmd_witt(WittOp::Add, 3, 2, &["[x", "[y]"], 8), Err(CliError::Input(_))));
    }

    #[test]
    fn check_messages() {
        let cfg = AnalysisConfig::default();
        let opts = ReportOptions::default();
        let r = cmd_check(3, Kind::Doublecover, "x^3 + y^4", opts, &cfg).unwrap();
        assert_eq!(r.summary, "not F-split; 2-quasi-F-split (height 2)");
        let r = cmd_check(7, Kind::Hypersurface, "x^3+y^3+z^3", opts, &cfg).unwrap();
        assert_eq!(r.summary, "F-split (height 1)");
        match cmd_check(3, Kind::Hypersurface, "0", opts, &cfg) {
            Err(CliError::Input(m)) => assert_eq!(m, "zero polynomial"),
            other => panic!("expected input error, got {other:?}"),
        }
    }

    #[test]
    fn summary_counts() {
        assert_eq!(summarize(&[]).to_string(), "0 entries");
    }
}
