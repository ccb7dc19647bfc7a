//! The deterministic, rule-based analyst: the offline counterpart of the
//! remote Meteorologist agent.
//!
//! Keywords are the top 3-5 vocabulary tokens whose evidence predicates
//! fire, in the fixed severity order; proof entries come straight from
//! the firing predicates' signals, and warnings from the same rules the
//! validator checks. Sharing the predicate table is what guarantees that
//! rule-based output never fails validation. When fewer than three hard
//! predicates fire, the remaining slots are filled with the
//! contextual-strength tokens, which validate as warnings, never as
//! failures.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use chrono::{Datelike, Duration};

use crate::error::CoreError;
use crate::evidence::{expected_warnings, ContextView, Evidence, PredicateConfig};
use crate::model::{
    AnalysisResult, ForecastContext, ProofEntry, Signal, SignalPattern, SignalVariable, Warning,
    WarningKind, WindowRef,
};
use crate::vocab::Keyword;

/// Cap on signals per proof entry; event predicates can otherwise
/// produce one signal per hour.
const MAX_SIGNALS_PER_ENTRY: usize = 6;

/// Runs the rule-based analysis over a context. Baseline contexts get
/// their aggregate tables derived on the fly.
pub fn deterministic_analysis(
    ctx: &ForecastContext,
    cfg: &PredicateConfig,
) -> Result<AnalysisResult, CoreError> {
    let view = ContextView::new(ctx)?;
    let evaluations = view.evaluate_all(cfg);

    let mut selected: Vec<&Evidence> = evaluations.iter().filter(|e| e.fired).collect();
    selected.truncate(5);

    // Fewer than three fired predicates: complete with the contextual
    // tokens. They are explicitly warn-grade, mirroring how seasonal and
    // coastal framing appears in reports without table evidence.
    let mut padded: Vec<Evidence> = Vec::new();
    if selected.len() < 3 {
        for kw in [Keyword::AutumnTransition, Keyword::MarineInfluence] {
            if selected.len() + padded.len() >= 3 {
                break;
            }
            if selected.iter().any(|e| e.keyword == kw) {
                continue;
            }
            padded.push(contextual_filler(kw, &view));
        }
    }

    let mut chosen: Vec<&Evidence> = selected;
    chosen.extend(padded.iter());
    chosen.sort_by_key(|e| e.keyword.severity_rank());

    let keywords: Vec<Keyword> = chosen.iter().map(|e| e.keyword).collect();
    let proof: Vec<ProofEntry> = chosen.iter().map(|e| proof_entry(e)).collect();
    let warnings = build_warnings(&view, cfg);
    let summary = build_summary(&view, &chosen, &warnings);

    Ok(AnalysisResult { summary, proof, keywords, warnings })
}

/// An unfired contextual token used to complete the keyword set; its
/// proof entry says so openly.
fn contextual_filler(kw: Keyword, view: &ContextView<'_>) -> Evidence {
    let first_six = &view.six_hour[0];
    let last_daily = view.daily.last().expect("non-empty daily table");
    let (signals, claim) = match kw {
        Keyword::MarineInfluence => (
            alloc::vec![Signal {
                variable: SignalVariable::Rh,
                window_ref: WindowRef {
                    start_utc: first_six.window_start_utc,
                    window_len_h: first_six.window_len_h,
                },
                pattern: SignalPattern::Persistence,
            }],
            String::from("contextual framing: regional setting considered alongside the tables"),
        ),
        _ => (
            alloc::vec![Signal {
                variable: SignalVariable::T,
                window_ref: WindowRef {
                    start_utc: last_daily.window_start_utc,
                    window_len_h: last_daily.window_len_h,
                },
                pattern: SignalPattern::TrendDown,
            }],
            String::from("contextual framing: seasonal timing considered alongside the tables"),
        ),
    };
    Evidence {
        keyword: kw,
        fired: false,
        strength: kw.strength(),
        signals,
        detail: claim,
    }
}

fn proof_entry(evidence: &Evidence) -> ProofEntry {
    let mut signals = evidence.signals.clone();
    signals.truncate(MAX_SIGNALS_PER_ENTRY);
    ProofEntry {
        claim: format!("{}: {}", evidence.keyword.token(), evidence.detail),
        signals,
    }
}

fn build_warnings(view: &ContextView<'_>, cfg: &PredicateConfig) -> Vec<Warning> {
    let Some(expected) = expected_warnings(view, cfg) else {
        // Climatology absent: warnings are disabled rather than guessed.
        return Vec::new();
    };
    expected
        .into_iter()
        .map(|w| {
            let text = match w.kind {
                WarningKind::HeavyRain => format!(
                    "Heavy rainfall expected: {}. Risk of localized flooding.",
                    w.detail
                ),
                WarningKind::StrongWind => {
                    format!("Strong wind expected: {}.", w.detail)
                }
            };
            Warning { kind: w.kind, text, evidence_ref: Some(w.window) }
        })
        .collect()
}

fn build_summary(
    view: &ContextView<'_>,
    chosen: &[&Evidence],
    warnings: &[Warning],
) -> String {
    let ctx = view.ctx;
    let loc = &ctx.location;
    let offset = Duration::seconds(loc.utc_offset_s as i64);
    let days = view.daily.len();

    let place = if loc.city.is_empty() {
        format!("{:.2} deg, {:.2} deg", loc.latitude, loc.longitude)
    } else {
        format!("{}, {}", loc.city, loc.country)
    };

    let mut out = String::new();
    out.push_str(&format!(
        "Forecast for {place} over {days} day(s) from {}, {} h horizon.",
        (ctx.issued_at_utc + offset).date_naive(),
        ctx.horizon_h
    ));

    out.push_str("\n\n");
    for w in &view.daily {
        let local_date = (w.window_start_utc + offset).date_naive();
        out.push_str(&format!(
            "{} {}: max {:.1} C, min {:.1} C, mean RH {:.0} %, wind mean {:.1} m/s, precipitation {:.1} mm.\n",
            local_date,
            month_day_tag(local_date.month()),
            w.t_max_c,
            w.t_min_c,
            w.rh_mean_pct,
            w.wind_mean_ms,
            w.precip_sum_mm
        ));
    }

    out.push('\n');
    for e in chosen {
        out.push_str(&format!("{}: {}. ", e.keyword.token(), e.detail));
    }
    if !warnings.is_empty() {
        out.push('\n');
        for w in warnings {
            out.push_str(&format!("WARNING - {}\n", w.text));
        }
    }
    out
}

fn month_day_tag(month: u32) -> &'static str {
    match month {
        1 => "(Jan)",
        2 => "(Feb)",
        3 => "(Mar)",
        4 => "(Apr)",
        5 => "(May)",
        6 => "(Jun)",
        7 => "(Jul)",
        8 => "(Aug)",
        9 => "(Sep)",
        10 => "(Oct)",
        11 => "(Nov)",
        12 => "(Dec)",
        _ => "",
    }
}
