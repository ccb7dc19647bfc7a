//! The four city scenarios driven end to end through the deterministic
//! analyst and the semantic validator: keyword recovery, warning
//! behavior, and provider/validator coherence.

use hiermet_core::analysis::deterministic_analysis;
use hiermet_core::context::RequestedMode;
use hiermet_core::evidence::{ContextView, PredicateConfig};
use hiermet_core::fixtures::{all_scenarios, chennai, cork, da_nang, manila, random_context};
use hiermet_core::model::{validate_analysis, validate_context, WarningKind};
use hiermet_core::validate::{check_keyword_alignment, check_warning_adequacy, OverallVerdict};
use hiermet_core::Keyword;

fn keywords_of(ctx: &hiermet_core::ForecastContext) -> Vec<Keyword> {
    deterministic_analysis(ctx, &PredicateConfig::default())
        .unwrap()
        .keywords
}

#[test]
fn scenario_tables_hit_their_planned_envelopes() {
    let cfg = PredicateConfig::default();

    // Cork: declining maxima 15.5 -> 10.5, winds spanning 2..7.8 m/s,
    // max daily precipitation 5.4 mm.
    let ctx = cork().context(RequestedMode::Auto);
    assert!(validate_context(&ctx).is_empty());
    let view = ContextView::new(&ctx).unwrap();
    let maxima: Vec<f64> = view.daily.iter().map(|w| w.t_max_c).collect();
    assert_eq!(maxima, vec![15.5, 14.4, 13.0, 11.7, 10.5]);
    let table = cork().hourly_table();
    let wind_min = table.iter().map(|r| r.wind_ms).fold(f64::INFINITY, f64::min);
    let wind_max = table.iter().map(|r| r.wind_ms).fold(0.0, f64::max);
    assert_eq!((wind_min, wind_max), (2.0, 7.8));
    let special = view
        .six_hour
        .iter()
        .find(|w| (w.wind_mean_ms - 27.8 / 6.0).abs() < 1e-9)
        .expect("hand-checked wind window present");
    assert_eq!(special.wind_max_ms, Some(7.8));
    let p_max = view.daily.iter().map(|w| w.precip_sum_mm).fold(0.0, f64::max);
    assert!((p_max - 5.4).abs() < 0.05, "got {p_max}");
    // cooling slope from the hand oracle over these maxima: -1.27 C/day
    let slope = hiermet_core::evidence::lsq_slope(&maxima).unwrap();
    assert!((slope - (-1.27)).abs() < 1e-9);
    let cooling = view.evidence(Keyword::CoolingTrend, &cfg);
    assert!(cooling.fired);

    // Chennai: peak daily 27.7 mm, 6h means up to 9.7 with hourly past 10,
    // an E -> NW shift.
    let ctx = chennai().context(RequestedMode::Auto);
    assert!(validate_context(&ctx).is_empty());
    let view = ContextView::new(&ctx).unwrap();
    let p0 = view.daily[0].precip_sum_mm;
    assert!((p0 - 27.7).abs() < 0.05, "got {p0}");
    let mean_max = view.six_hour.iter().map(|w| w.wind_mean_ms).fold(0.0, f64::max);
    assert!((mean_max - 9.7).abs() < 1e-9);
    assert!(mean_max < 10.0);
    let table = chennai().hourly_table();
    let hourly_peak = table.iter().map(|r| r.wind_ms).fold(0.0, f64::max);
    assert!(hourly_peak > 10.0);

    // Da Nang: extreme daily total 130.4 mm, winds to 9.2 m/s, RH to 96 %.
    let ctx = da_nang().context(RequestedMode::Auto);
    assert!(validate_context(&ctx).is_empty());
    let view = ContextView::new(&ctx).unwrap();
    let p_peak = view.daily.iter().map(|w| w.precip_sum_mm).fold(0.0, f64::max);
    assert!((p_peak - 130.4).abs() < 0.05, "got {p_peak}");
    assert!(p_peak > 130.0);
    let wind_peak = view.six_hour.iter().map(|w| w.wind_mean_ms).fold(0.0, f64::max);
    assert!((wind_peak - 9.2).abs() < 1e-9);
    let table = da_nang().hourly_table();
    let rh_peak = table.iter().map(|r| r.rh_pct).fold(0.0, f64::max);
    assert!((rh_peak - 96.0).abs() < 1e-9);

    // Manila: maxima 27.6..31.8, humidity 66..90, light rain only.
    let ctx = manila().context(RequestedMode::Auto);
    assert!(validate_context(&ctx).is_empty());
    let view = ContextView::new(&ctx).unwrap();
    let t_hi = view.daily.iter().map(|w| w.t_max_c).fold(0.0, f64::max);
    let t_lo = view.daily.iter().map(|w| w.t_max_c).fold(f64::INFINITY, f64::min);
    assert_eq!((t_lo, t_hi), (27.6, 31.8));
    let p_max = view.daily.iter().map(|w| w.precip_sum_mm).fold(0.0, f64::max);
    assert!(p_max < 5.0, "got {p_max}");
    let table = manila().hourly_table();
    let rh_hi = table.iter().map(|r| r.rh_pct).fold(0.0, f64::max);
    let rh_lo = table.iter().map(|r| r.rh_pct).fold(f64::INFINITY, f64::min);
    assert!((66.0..=67.5).contains(&rh_lo), "got {rh_lo}");
    assert!((88.5..=90.0).contains(&rh_hi), "got {rh_hi}");
}

#[test]
fn cork_recovers_the_reported_keywords() {
    let kws = keywords_of(&cork().context(RequestedMode::Auto));
    for want in [Keyword::CoolingTrend, Keyword::LightRain, Keyword::MoistConditions] {
        assert!(kws.contains(&want), "missing {want} in {kws:?}");
    }
    // the full rule-derived set for this scenario
    assert_eq!(
        kws,
        vec![
            Keyword::FrontalPassage,
            Keyword::CoolingTrend,
            Keyword::LightRain,
            Keyword::MoistConditions,
            Keyword::AutumnTransition,
        ]
    );
}

#[test]
fn chennai_recovers_the_reported_keywords() {
    let kws = keywords_of(&chennai().context(RequestedMode::Auto));
    for want in [Keyword::HeavyRain, Keyword::StrongWind, Keyword::FrontalPassage] {
        assert!(kws.contains(&want), "missing {want} in {kws:?}");
    }
}

#[test]
fn da_nang_recovers_the_reported_keywords() {
    let kws = keywords_of(&da_nang().context(RequestedMode::Auto));
    for want in [Keyword::HeavyRain, Keyword::StrongWind] {
        assert!(kws.contains(&want), "missing {want} in {kws:?}");
    }
    assert!(kws.contains(&Keyword::UnstableAirmass), "got {kws:?}");
}

#[test]
fn manila_recovers_the_reported_keywords() {
    let kws = keywords_of(&manila().context(RequestedMode::Auto));
    for want in [Keyword::LightRain, Keyword::StableConditions] {
        assert!(kws.contains(&want), "missing {want} in {kws:?}");
    }
    // the borderline tropical case: neither anomaly fires
    assert!(!kws.contains(&Keyword::WarmAnomaly));
    assert!(!kws.contains(&Keyword::ColdAnomaly));
}

#[test]
fn warnings_trigger_only_for_da_nang() {
    let cfg = PredicateConfig::default();
    for (name, scenario) in all_scenarios() {
        let ctx = scenario.context(RequestedMode::Auto);
        let analysis = deterministic_analysis(&ctx, &cfg).unwrap();
        let verdict = check_warning_adequacy(&analysis, &ctx, &cfg).unwrap();
        assert!(!verdict.skipped, "{name}: climatology present");
        assert!(verdict.missing.is_empty(), "{name}: {:?}", verdict.missing);
        assert!(verdict.unjustified.is_empty(), "{name}: {:?}", verdict.unjustified);
        if name == "da_nang" {
            assert!(
                analysis.warnings.iter().any(|w| w.kind == WarningKind::HeavyRain),
                "da_nang must warn about heavy rain"
            );
        } else {
            assert!(analysis.warnings.is_empty(), "{name}: {:?}", analysis.warnings);
        }
    }
}

#[test]
fn paper_cases_validate_clean() {
    let cfg = PredicateConfig::default();
    for (name, scenario) in all_scenarios() {
        let ctx = scenario.context(RequestedMode::Auto);
        let analysis = deterministic_analysis(&ctx, &cfg).unwrap();
        assert!(validate_analysis(&analysis).is_empty(), "{name}: schema");
        let report = check_keyword_alignment(&analysis, &ctx, &cfg).unwrap();
        assert_ne!(report.overall, OverallVerdict::Fail, "{name}: {report:?}");
        for f in &report.keywords {
            assert!(f.proof_linked, "{name}: {f:?}");
        }
    }
}

#[test]
fn rule_based_output_never_fails_validation_on_random_contexts() {
    let cfg = PredicateConfig::default();
    for seed in 0..100u64 {
        let ctx = random_context(seed);
        let analysis = deterministic_analysis(&ctx, &cfg).unwrap();
        assert!(
            validate_analysis(&analysis).is_empty(),
            "seed {seed}: structural violation"
        );
        let report = check_keyword_alignment(&analysis, &ctx, &cfg).unwrap();
        assert_ne!(
            report.overall,
            OverallVerdict::Fail,
            "seed {seed}: {report:?}"
        );
    }
}

#[test]
fn deterministic_analysis_is_byte_stable() {
    let ctx = cork().context(RequestedMode::Auto);
    let cfg = PredicateConfig::default();
    let a = deterministic_analysis(&ctx, &cfg).unwrap();
    let b = deterministic_analysis(&ctx, &cfg).unwrap();
    assert_eq!(
        hiermet_core::canonical::canonical_bytes(&a).unwrap(),
        hiermet_core::canonical::canonical_bytes(&b).unwrap()
    );
}

#[test]
fn baseline_context_gets_aggregates_derived_on_the_fly() {
    let scenario = cork();
    let hourly = scenario.hourly_table();
    let decision =
        hiermet_core::context::select_mode(hourly.len() as u32, RequestedMode::Baseline).unwrap();
    let ctx = hiermet_core::context::build_context(
        scenario.location.clone(),
        Some(scenario.climatology.clone()),
        hourly,
        decision,
        scenario.start_utc,
    )
    .unwrap();
    let analysis = deterministic_analysis(&ctx, &PredicateConfig::default()).unwrap();
    assert!(analysis.keywords.contains(&Keyword::CoolingTrend));
}

#[test]
fn manila_borderline_anomaly_claim_warns_not_fails() {
    // keywords that claim a warm anomaly on near-normal data should be
    // graded threshold-sensitive, not wrong
    let cfg = PredicateConfig::default();
    let ctx = manila().context(RequestedMode::Auto);
    let mut analysis = deterministic_analysis(&ctx, &cfg).unwrap();
    analysis.keywords.truncate(4);
    analysis.keywords.push(Keyword::WarmAnomaly);
    analysis.proof.push(hiermet_core::ProofEntry {
        claim: "maxima sit near the seasonal reference".into(),
        signals: vec![hiermet_core::Signal {
            variable: hiermet_core::SignalVariable::T,
            window_ref: hiermet_core::WindowRef {
                start_utc: ctx.issued_at_utc,
                window_len_h: 24,
            },
            pattern: hiermet_core::SignalPattern::Exceedance,
        }],
    });
    let report = check_keyword_alignment(&analysis, &ctx, &cfg).unwrap();
    assert_eq!(report.overall, OverallVerdict::Warn, "{report:?}");
}

#[test]
fn unsupported_hard_keyword_fails_validation() {
    let cfg = PredicateConfig::default();
    let ctx = manila().context(RequestedMode::Auto);
    let mut analysis = deterministic_analysis(&ctx, &cfg).unwrap();
    // heavy rain on a light-rain-only context is decidably wrong
    analysis.keywords.truncate(4);
    analysis.keywords.push(Keyword::HeavyRain);
    let report = check_keyword_alignment(&analysis, &ctx, &cfg).unwrap();
    assert_eq!(report.overall, OverallVerdict::Fail);
}
