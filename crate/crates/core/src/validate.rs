//! Semantic validation: every keyword must be backed by table-derived
//! evidence and a linked proof entry, and the warning set must match
//! what the data and climatology demand.
//!
//! Verdict grading: a keyword that is decidably unsupported fails; one
//! that cannot be decided from the tables (contextual tokens, missing
//! hourly rows or climatology, borderline anomalies) only warns, because
//! the paper's thresholds are explicitly tunable and coastal/seasonal
//! framing is not table-derivable.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use chrono::{Datelike, Duration};
use serde::{Deserialize, Serialize};

use crate::error::CoreError;
use crate::evidence::{expected_warnings, keyword_signature, ContextView, PredicateConfig};
use crate::model::{AnalysisResult, ForecastContext, SignalVariable, WarningKind};
use crate::vocab::{Keyword, PredicateStrength};

/// Per-keyword evidence verdict.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EvidenceVerdict {
    /// Decidably supported by the tables.
    Pass,
    /// Decidably unsupported.
    Fail,
    /// Not decidable from the tables (contextual token, missing data,
    /// or a borderline anomaly); warns, never fails.
    Contextual,
}

/// Findings for one keyword of the analysis.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KeywordFinding {
    pub keyword: Keyword,
    pub evidence: EvidenceVerdict,
    pub proof_linked: bool,
    pub details: String,
}

/// Missing and unjustified warnings relative to the expected set.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct WarningsVerdict {
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub missing: Vec<WarningKind>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub unjustified: Vec<WarningKind>,
    /// True when climatology was absent and the check did not run.
    #[serde(default, skip_serializing_if = "core::ops::Not::not")]
    pub skipped: bool,
}

impl WarningsVerdict {
    pub fn is_clean(&self) -> bool {
        self.missing.is_empty() && self.unjustified.is_empty()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OverallVerdict {
    Pass,
    Warn,
    Fail,
}

/// Full validation outcome for one analysis against one context.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub keywords: Vec<KeywordFinding>,
    pub warnings_verdict: WarningsVerdict,
    /// Proof signals that cannot be checked against the tables (for
    /// example pressure tendencies when the source carried no pressure).
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub unverifiable: Vec<String>,
    pub overall: OverallVerdict,
}

/// Structural proof linkage: a keyword is linked iff some proof entry
/// carries a signal whose (variable, pattern) pair is in the keyword's
/// signature. Prose is ignored; signals are the stable substrate.
pub fn check_proof_linkage(analysis: &AnalysisResult) -> Vec<(Keyword, bool)> {
    analysis
        .keywords
        .iter()
        .map(|kw| {
            let sig = keyword_signature(*kw);
            let linked = analysis.proof.iter().any(|entry| {
                entry.signals.iter().any(|s| sig.contains(&(s.variable, s.pattern)))
            });
            (*kw, linked)
        })
        .collect()
}

/// Evaluates warning adequacy. Returns a skipped verdict when the
/// context carries no climatology.
pub fn check_warning_adequacy(
    analysis: &AnalysisResult,
    ctx: &ForecastContext,
    cfg: &PredicateConfig,
) -> Result<WarningsVerdict, CoreError> {
    let view = ContextView::new(ctx)?;
    Ok(warning_adequacy(analysis, &view, cfg))
}

fn warning_adequacy(
    analysis: &AnalysisResult,
    view: &ContextView<'_>,
    cfg: &PredicateConfig,
) -> WarningsVerdict {
    let Some(expected) = expected_warnings(view, cfg) else {
        return WarningsVerdict { missing: Vec::new(), unjustified: Vec::new(), skipped: true };
    };
    let expected_kinds: Vec<WarningKind> = expected.iter().map(|w| w.kind).collect();
    let present_kinds: Vec<WarningKind> = analysis.warnings.iter().map(|w| w.kind).collect();
    let missing = expected_kinds
        .iter()
        .filter(|k| !present_kinds.contains(k))
        .copied()
        .collect();
    let mut unjustified: Vec<WarningKind> = Vec::new();
    for kind in present_kinds {
        if !expected_kinds.contains(&kind) && !unjustified.contains(&kind) {
            unjustified.push(kind);
        }
    }
    WarningsVerdict { missing, unjustified, skipped: false }
}

/// Runs the full semantic check: per-keyword evidence, proof linkage,
/// and warning adequacy, combined into one overall verdict.
pub fn check_keyword_alignment(
    analysis: &AnalysisResult,
    ctx: &ForecastContext,
    cfg: &PredicateConfig,
) -> Result<ValidationReport, CoreError> {
    let view = ContextView::new(ctx)?;
    let linkage = check_proof_linkage(analysis);

    let mut findings = Vec::with_capacity(analysis.keywords.len());
    for (kw, linked) in linkage {
        let evidence = view.evidence(kw, cfg);
        let verdict = match kw.strength() {
            PredicateStrength::Contextual => EvidenceVerdict::Contextual,
            PredicateStrength::Hard if evidence.fired => EvidenceVerdict::Pass,
            PredicateStrength::Hard => undecidable_grade(kw, ctx, &view, cfg),
        };
        findings.push(KeywordFinding {
            keyword: kw,
            evidence: verdict,
            proof_linked: linked,
            details: evidence.detail,
        });
    }

    let warnings_verdict = warning_adequacy(analysis, &view, cfg);
    let unverifiable = unverifiable_signals(analysis, ctx);

    let horizon_end = ctx.issued_at_utc + Duration::hours(ctx.horizon_h as i64);
    let mut out_of_horizon = false;
    for entry in &analysis.proof {
        for s in &entry.signals {
            if s.window_ref.start_utc >= horizon_end
                || s.window_ref.start_utc + Duration::hours(s.window_ref.window_len_h as i64)
                    <= ctx.issued_at_utc - Duration::hours(24)
            {
                out_of_horizon = true;
            }
        }
    }

    let hard_failure = findings.iter().any(|f| {
        f.keyword.strength() == PredicateStrength::Hard
            && (f.evidence == EvidenceVerdict::Fail || !f.proof_linked)
    });
    let warn_grade = findings.iter().any(|f| {
        (f.keyword.strength() == PredicateStrength::Hard
            && f.evidence == EvidenceVerdict::Contextual)
            || (f.keyword.strength() == PredicateStrength::Contextual
                && !(view.evidence(f.keyword, cfg).fired && f.proof_linked))
    }) || warnings_verdict.skipped
        || !unverifiable.is_empty()
        || out_of_horizon;

    let overall = if hard_failure || !warnings_verdict.is_clean() {
        OverallVerdict::Fail
    } else if warn_grade {
        OverallVerdict::Warn
    } else {
        OverallVerdict::Pass
    };

    Ok(ValidationReport { keywords: findings, warnings_verdict, unverifiable, overall })
}

/// Grades an unfired hard keyword: decidably wrong fails, undecidable or
/// borderline only warns.
fn undecidable_grade(
    kw: Keyword,
    ctx: &ForecastContext,
    view: &ContextView<'_>,
    cfg: &PredicateConfig,
) -> EvidenceVerdict {
    match kw {
        // Category-share and event keywords need hourly rows.
        Keyword::Overcast
        | Keyword::ClearSky
        | Keyword::Snow
        | Keyword::ThunderstormRisk
            if ctx.hourly.is_none() =>
        {
            EvidenceVerdict::Contextual
        }
        // Anomalies need climatology, and a claim inside the neutral band
        // is threshold-sensitive rather than wrong.
        Keyword::WarmAnomaly | Keyword::ColdAnomaly => {
            let Some(clim) = &ctx.climatology else {
                return EvidenceVerdict::Contextual;
            };
            let mut deltas = Vec::new();
            for w in &view.daily {
                let month = (w.window_start_utc
                    + Duration::seconds(ctx.location.utc_offset_s as i64))
                .date_naive()
                .month() as u8;
                match clim.month(month).map(|n| w.t_max_c - n.t_max_c) {
                    Some(d) => deltas.push(d),
                    None => return EvidenceVerdict::Contextual,
                }
            }
            let mean = deltas.iter().sum::<f64>() / deltas.len() as f64;
            let neutral = mean > cfg.cold_anomaly_c && mean < cfg.warm_anomaly_c;
            if neutral {
                EvidenceVerdict::Contextual
            } else {
                EvidenceVerdict::Fail
            }
        }
        _ => EvidenceVerdict::Fail,
    }
}

fn unverifiable_signals(analysis: &AnalysisResult, ctx: &ForecastContext) -> Vec<String> {
    let pressure_available = ctx
        .hourly
        .as_ref()
        .is_some_and(|h| h.iter().any(|r| r.pressure_hpa.is_some()));
    let mut notes = Vec::new();
    if pressure_available {
        return notes;
    }
    for (i, entry) in analysis.proof.iter().enumerate() {
        for s in &entry.signals {
            if s.variable == SignalVariable::Pressure {
                notes.push(format!(
                    "proof[{i}]: pressure signal cannot be checked, source carried no pressure"
                ));
            }
        }
    }
    notes
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{ProofEntry, Signal, SignalPattern, WindowRef};
    use chrono::{TimeZone, Utc};

    fn proof_with(variable: SignalVariable, pattern: SignalPattern) -> ProofEntry {
        ProofEntry {
            claim: String::from("pattern observed"),
            signals: alloc::vec![Signal {
                variable,
                window_ref: WindowRef {
                    start_utc: Utc.with_ymd_and_hms(2025, 10, 21, 0, 0, 0).unwrap(),
                    window_len_h: 24,
                },
                pattern,
            }],
        }
    }

    fn analysis(keywords: Vec<Keyword>, proof: Vec<ProofEntry>) -> AnalysisResult {
        AnalysisResult { summary: String::from("s"), proof, keywords, warnings: Vec::new() }
    }

    #[test]
    fn direct_mapping_hit_links() {
        let a = analysis(
            alloc::vec![Keyword::HeavyRain],
            alloc::vec![proof_with(SignalVariable::P, SignalPattern::Exceedance)],
        );
        let link = check_proof_linkage(&a);
        assert_eq!(link, alloc::vec![(Keyword::HeavyRain, true)]);
    }

    #[test]
    fn mapping_miss_does_not_link() {
        let a = analysis(
            alloc::vec![Keyword::StrongWind],
            alloc::vec![proof_with(SignalVariable::T, SignalPattern::TrendDown)],
        );
        let link = check_proof_linkage(&a);
        assert_eq!(link, alloc::vec![(Keyword::StrongWind, false)]);
    }

    #[test]
    fn empty_proof_unlinks_everything() {
        let a = analysis(
            alloc::vec![Keyword::HeavyRain, Keyword::CoolingTrend],
            Vec::new(),
        );
        assert!(check_proof_linkage(&a).iter().all(|(_, linked)| !linked));
    }
}
