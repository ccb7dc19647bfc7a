//! The template Writer: wraps an analysis into the final report shape
//! without altering its factual content, and the fact-preservation check
//! used to police any other writer.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use chrono::Duration;
use serde::{Deserialize, Serialize};

use crate::model::{AnalysisResult, ForecastContext, Report, ReportHeader, Signal};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Tone {
    #[default]
    Neutral,
    Technical,
    Public,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Length {
    Brief,
    #[default]
    Standard,
    Detailed,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Domain {
    #[default]
    General,
    Energy,
    UrbanPlanning,
    Agronomy,
    Risk,
}

/// User preferences forwarded to the Writer stage.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(default)]
pub struct StylePreferences {
    pub tone: Tone,
    pub length: Length,
    pub domain: Domain,
}

impl Domain {
    fn framing(self) -> &'static str {
        match self {
            Domain::General => "general use",
            Domain::Energy => "energy-sector planning",
            Domain::UrbanPlanning => "urban planning",
            Domain::Agronomy => "agronomy",
            Domain::Risk => "risk analysis",
        }
    }
}

impl Tone {
    fn label(self) -> &'static str {
        match self {
            Tone::Neutral => "neutral",
            Tone::Technical => "technical",
            Tone::Public => "public-facing",
        }
    }
}

impl Length {
    fn label(self) -> &'static str {
        match self {
            Length::Brief => "brief",
            Length::Standard => "standard",
            Length::Detailed => "detailed",
        }
    }
}

/// Builds the report by wrapping the analysis verbatim: the safe path
/// used by the rule-based writer and as the fallback whenever a remote
/// writer drifts from the analyst's facts.
pub fn template_report(
    analysis: &AnalysisResult,
    ctx: &ForecastContext,
    style: &StylePreferences,
) -> Report {
    let loc = &ctx.location;
    let offset = Duration::seconds(loc.utc_offset_s as i64);
    let start = (ctx.issued_at_utc + offset).date_naive();
    let end = (ctx.issued_at_utc + offset + Duration::hours(ctx.horizon_h as i64 - 1)).date_naive();

    let place = if loc.city.is_empty() {
        format!("{:.2} deg N, {:.2} deg E", loc.latitude, loc.longitude)
    } else if loc.country.is_empty() {
        loc.city.clone()
    } else {
        format!("{}, {}", loc.city, loc.country)
    };

    let title = format!("Weather report: {place} ({start} to {end})");

    let mut information = String::new();
    if let Some(desc) = &loc.description {
        information.push_str(desc);
        if !desc.ends_with('.') {
            information.push('.');
        }
        information.push(' ');
    }
    information.push_str(&format!(
        "Prepared for {} in a {} tone at {} length.",
        style.domain.framing(),
        style.tone.label(),
        style.length.label()
    ));

    Report {
        header: ReportHeader { title, information },
        analysis: analysis.clone(),
        context: ctx.clone(),
    }
}

/// True when the candidate preserves the original facts: keyword set
/// equality, warning set equality, and the same multiset of per-entry
/// signal sets (claim prose may be rephrased).
pub fn preserves_facts(original: &AnalysisResult, candidate: &AnalysisResult) -> bool {
    let mut kw_a = original.keywords.clone();
    let mut kw_b = candidate.keywords.clone();
    kw_a.sort_unstable();
    kw_b.sort_unstable();
    if kw_a != kw_b {
        return false;
    }

    let mut warn_a = original.warnings.clone();
    let mut warn_b = candidate.warnings.clone();
    warn_a.sort();
    warn_b.sort();
    if warn_a != warn_b {
        return false;
    }

    signal_multiset(original) == signal_multiset(candidate)
}

fn signal_multiset(a: &AnalysisResult) -> Vec<Vec<Signal>> {
    let mut entries: Vec<Vec<Signal>> = a
        .proof
        .iter()
        .map(|e| {
            let mut s = e.signals.clone();
            s.sort();
            s
        })
        .collect();
    entries.sort();
    entries
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{ProofEntry, SignalPattern, SignalVariable, WindowRef};
    use chrono::{TimeZone, Utc};

    fn sample_analysis() -> AnalysisResult {
        AnalysisResult {
            summary: String::from("calm weather"),
            proof: alloc::vec![ProofEntry {
                claim: String::from("steady winds"),
                signals: alloc::vec![Signal {
                    variable: SignalVariable::U,
                    window_ref: WindowRef {
                        start_utc: Utc.with_ymd_and_hms(2025, 10, 20, 0, 0, 0).unwrap(),
                        window_len_h: 6,
                    },
                    pattern: SignalPattern::Persistence,
                }],
            }],
            keywords: alloc::vec![
                crate::Keyword::StableConditions,
                crate::Keyword::CalmWind,
                crate::Keyword::ClearSky,
            ],
            warnings: Vec::new(),
        }
    }

    #[test]
    fn rephrased_claims_still_preserve_facts() {
        let a = sample_analysis();
        let mut b = a.clone();
        b.summary = String::from("conditions remain settled");
        b.proof[0].claim = String::from("wind speeds hold steady");
        assert!(preserves_facts(&a, &b));
    }

    #[test]
    fn dropped_keyword_is_drift() {
        let a = sample_analysis();
        let mut b = a.clone();
        b.keywords.pop();
        assert!(!preserves_facts(&a, &b));
    }

    #[test]
    fn dropped_signal_is_drift() {
        let a = sample_analysis();
        let mut b = a.clone();
        b.proof[0].signals.clear();
        assert!(!preserves_facts(&a, &b));
    }
}
