//! Evidence predicates: one deterministic rule per vocabulary token that
//! decides whether the forecast tables support the keyword, and the
//! signal signature used to link keywords to proof entries.
//!
//! The same predicate table drives both the deterministic analyst and the
//! semantic validator, which is what makes rule-based reports validate by
//! construction. Every numeric threshold lives in [`PredicateConfig`]
//! (config key `validator.predicates`) so regional tuning never needs a
//! code change.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use chrono::{Datelike, Duration, NaiveDate};
use serde::{Deserialize, Serialize};

use crate::aggregate::{
    aggregate_daily, aggregate_six_hour, circular_distance_deg, WindowSpec,
};
use crate::error::CoreError;
use crate::model::{
    ForecastContext, HourlyRecord, MonthlyClimatology, Signal, SignalPattern, SignalVariable,
    WarningKind, WeatherCategory, WindowAggregate, WindowRef,
};
use crate::vocab::{Keyword, PredicateStrength};

/// Thresholds for every evidence predicate and the warning rules.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct PredicateConfig {
    /// cooling_trend fires when the daily t_max slope is at or below this, °C/day.
    pub cooling_slope_c_per_day: f64,
    /// warming_trend fires at or above this slope, °C/day.
    pub warming_slope_c_per_day: f64,
    /// heavy_rain: any daily precipitation sum at or above this, mm.
    pub heavy_rain_daily_mm: f64,
    /// light_rain: some daily sum in (0, this] and none at heavy level, mm.
    pub light_rain_daily_max_mm: f64,
    /// strong_wind: any 6 h wind mean at or above this, m/s.
    pub strong_wind_mean_ms: f64,
    /// strong_wind alternative: any hourly gust at or above this, m/s.
    pub strong_wind_gust_ms: f64,
    /// calm_wind: every 6 h wind mean below this, m/s.
    pub calm_wind_mean_ms: f64,
    /// moist_conditions: horizon-mean RH at or above this, percent.
    pub moist_rh_pct: f64,
    /// dry_conditions: horizon-mean RH at or below this, percent.
    pub dry_rh_pct: f64,
    /// frontal_passage: circular distance between consecutive defined
    /// 6 h direction means at or above this, degrees.
    pub frontal_shift_deg: f64,
    /// frontal_passage corroboration: wind-mean rise across the shift, m/s.
    pub frontal_wind_rise_ms: f64,
    /// overcast/clear_sky: share of hours in the category class.
    pub sky_share: f64,
    /// warm_anomaly: horizon-mean daily t_max minus climatological t_max, °C.
    pub warm_anomaly_c: f64,
    /// cold_anomaly: same difference at or below this, °C.
    pub cold_anomaly_c: f64,
    /// unstable_airmass: number of frontal-grade direction shifts.
    pub unstable_shift_count: u32,
    /// unstable_airmass alternative: consecutive 6 h windows with
    /// alternating wet/dry precipitation.
    pub unstable_alternating_windows: u32,
    /// fog_risk: 6 h RH mean at or above this with near-calm wind, percent.
    pub fog_rh_pct: f64,
    /// fog_risk: wind mean below this counts as near-calm, m/s.
    pub fog_wind_ms: f64,
    /// Heavy-rain warning floor, mm per day.
    pub warn_rain_daily_mm: f64,
    /// Heavy-rain warning: multiple of the climatological daily-mean
    /// precipitation for the month.
    pub warn_rain_clim_factor: f64,
    /// Wind warning: any 6 h wind mean at or above this, m/s.
    pub warn_wind_mean_ms: f64,
    /// Wind warning alternative: any hourly gust at or above this, m/s.
    pub warn_gust_ms: f64,
}

impl Default for PredicateConfig {
    fn default() -> Self {
        Self {
            cooling_slope_c_per_day: -0.5,
            warming_slope_c_per_day: 0.5,
            heavy_rain_daily_mm: 20.0,
            light_rain_daily_max_mm: 10.0,
            strong_wind_mean_ms: 8.0,
            strong_wind_gust_ms: 15.0,
            calm_wind_mean_ms: 3.0,
            moist_rh_pct: 80.0,
            dry_rh_pct: 40.0,
            frontal_shift_deg: 60.0,
            frontal_wind_rise_ms: 2.0,
            sky_share: 0.6,
            warm_anomaly_c: 1.0,
            cold_anomaly_c: -1.0,
            unstable_shift_count: 2,
            unstable_alternating_windows: 4,
            fog_rh_pct: 95.0,
            fog_wind_ms: 2.0,
            warn_rain_daily_mm: 30.0,
            warn_rain_clim_factor: 3.0,
            warn_wind_mean_ms: 10.0,
            warn_gust_ms: 17.0,
        }
    }
}

/// Outcome of evaluating one keyword's predicate against a context.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Evidence {
    pub keyword: Keyword,
    pub fired: bool,
    pub strength: PredicateStrength,
    /// Concrete table-derived signals (window refs and patterns) backing
    /// the keyword when it fired.
    pub signals: Vec<Signal>,
    /// Human-readable account of the evaluation.
    pub detail: String,
}

/// The (variable, pattern) pairs a proof signal may use to support each
/// keyword. This is the structural proof-linkage mapping: the Writer may
/// rephrase prose freely, signals are the stable substrate.
pub fn keyword_signature(kw: Keyword) -> &'static [(SignalVariable, SignalPattern)] {
    use SignalPattern::*;
    use SignalVariable::*;
    match kw {
        Keyword::ThunderstormRisk => &[(P, Exceedance), (U, Exceedance)],
        Keyword::Snow => &[(P, Exceedance), (P, Persistence)],
        Keyword::HeavyRain => &[(P, Exceedance)],
        Keyword::StrongWind => &[(U, Exceedance)],
        Keyword::FrontalPassage => &[(Theta, Shift)],
        Keyword::UnstableAirmass => &[(Theta, Shift), (P, Shift)],
        Keyword::FogRisk => &[(Vis, Exceedance), (Rh, Persistence)],
        Keyword::CoolingTrend => &[(T, TrendDown)],
        Keyword::WarmingTrend => &[(T, TrendUp)],
        Keyword::WarmAnomaly => &[(T, Exceedance)],
        Keyword::ColdAnomaly => &[(T, Exceedance)],
        Keyword::LightRain => &[(P, Persistence)],
        Keyword::MoistConditions => &[(Rh, Persistence)],
        Keyword::DryConditions => &[(Rh, Persistence)],
        Keyword::Overcast => &[(Vis, Persistence)],
        Keyword::ClearSky => &[(Vis, Persistence)],
        Keyword::CalmWind => &[(U, Persistence)],
        Keyword::AutumnTransition => &[(T, TrendDown)],
        Keyword::MarineInfluence => &[(Rh, Persistence), (U, Persistence)],
        Keyword::StableConditions => &[(T, Persistence), (P, Persistence), (U, Persistence)],
    }
}

/// A context with its aggregate tables materialized, ready for predicate
/// evaluation. Baseline contexts get their aggregates derived on demand.
pub struct ContextView<'a> {
    pub ctx: &'a ForecastContext,
    pub daily: Vec<WindowAggregate>,
    pub six_hour: Vec<WindowAggregate>,
}

impl<'a> ContextView<'a> {
    pub fn new(ctx: &'a ForecastContext) -> Result<Self, CoreError> {
        let (daily, six_hour) = match (&ctx.daily, &ctx.six_hour) {
            (Some(d), Some(s)) => (d.clone(), s.clone()),
            _ => {
                let hourly = ctx.hourly.as_ref().ok_or(CoreError::MissingAggregates)?;
                let offset = ctx.location.utc_offset_s;
                (
                    aggregate_daily(hourly, WindowSpec::daily(), offset)?,
                    aggregate_six_hour(hourly, WindowSpec::six_hour(), offset)?,
                )
            }
        };
        Ok(Self { ctx, daily, six_hour })
    }

    pub fn hourly(&self) -> Option<&[HourlyRecord]> {
        self.ctx.hourly.as_deref()
    }

    fn local_month_of(&self, w: &WindowAggregate) -> u32 {
        (w.window_start_utc + Duration::seconds(self.ctx.location.utc_offset_s as i64))
            .date_naive()
            .month()
    }

    /// Hour-weighted mean relative humidity over the whole horizon;
    /// identical to the plain hourly mean when the hourly table exists.
    fn horizon_mean_rh(&self) -> f64 {
        let mut sum = 0.0;
        let mut hours = 0.0;
        for w in &self.six_hour {
            sum += w.rh_mean_pct * w.hours as f64;
            hours += w.hours as f64;
        }
        sum / hours
    }

    /// Evaluates every vocabulary keyword, in severity order.
    pub fn evaluate_all(&self, cfg: &PredicateConfig) -> Vec<Evidence> {
        Keyword::ALL.iter().map(|kw| self.evidence(*kw, cfg)).collect()
    }

    /// Evaluates one keyword's predicate.
    pub fn evidence(&self, kw: Keyword, cfg: &PredicateConfig) -> Evidence {
        match kw {
            Keyword::CoolingTrend => self.trend(kw, cfg, true),
            Keyword::WarmingTrend => self.trend(kw, cfg, false),
            Keyword::HeavyRain => self.heavy_rain(cfg),
            Keyword::LightRain => self.light_rain(cfg),
            Keyword::StrongWind => self.strong_wind(cfg),
            Keyword::CalmWind => self.calm_wind(cfg),
            Keyword::MoistConditions => self.humidity(kw, cfg),
            Keyword::DryConditions => self.humidity(kw, cfg),
            Keyword::FrontalPassage => self.frontal_passage(cfg),
            Keyword::Overcast => self.sky_share(kw, cfg, WeatherCategory::Overcast),
            Keyword::ClearSky => self.sky_share(kw, cfg, WeatherCategory::Clear),
            Keyword::WarmAnomaly => self.anomaly(kw, cfg, true),
            Keyword::ColdAnomaly => self.anomaly(kw, cfg, false),
            Keyword::UnstableAirmass => self.unstable_airmass(cfg),
            Keyword::StableConditions => self.stable_conditions(cfg),
            Keyword::FogRisk => self.fog_risk(cfg),
            Keyword::Snow => self.hourly_category(kw, WeatherCategory::Snow),
            Keyword::ThunderstormRisk => self.hourly_category(kw, WeatherCategory::Thunderstorm),
            Keyword::MarineInfluence => self.marine_influence(),
            Keyword::AutumnTransition => self.autumn_transition(cfg),
        }
    }

    fn not_fired(&self, kw: Keyword, detail: String) -> Evidence {
        Evidence { keyword: kw, fired: false, strength: kw.strength(), signals: Vec::new(), detail }
    }

    fn fired(&self, kw: Keyword, signals: Vec<Signal>, detail: String) -> Evidence {
        Evidence { keyword: kw, fired: true, strength: kw.strength(), signals, detail }
    }

    fn trend(&self, kw: Keyword, cfg: &PredicateConfig, cooling: bool) -> Evidence {
        let maxima: Vec<f64> = self.daily.iter().map(|w| w.t_max_c).collect();
        let Some(slope) = lsq_slope(&maxima) else {
            return self.not_fired(kw, String::from("fewer than two daily windows"));
        };
        let fires = if cooling {
            slope <= cfg.cooling_slope_c_per_day
        } else {
            slope >= cfg.warming_slope_c_per_day
        };
        let threshold =
            if cooling { cfg.cooling_slope_c_per_day } else { cfg.warming_slope_c_per_day };
        let detail = format!(
            "least-squares slope of daily t_max is {slope:.3} degC/day over {} days (threshold {threshold})",
            maxima.len()
        );
        if fires {
            let last = self.daily.last().expect("non-empty daily table");
            let pattern = if cooling { SignalPattern::TrendDown } else { SignalPattern::TrendUp };
            self.fired(kw, alloc::vec![signal(SignalVariable::T, last, pattern)], detail)
        } else {
            self.not_fired(kw, detail)
        }
    }

    fn heavy_rain(&self, cfg: &PredicateConfig) -> Evidence {
        let kw = Keyword::HeavyRain;
        let signals: Vec<Signal> = self
            .daily
            .iter()
            .filter(|w| w.precip_sum_mm >= cfg.heavy_rain_daily_mm)
            .map(|w| signal(SignalVariable::P, w, SignalPattern::Exceedance))
            .collect();
        if signals.is_empty() {
            let max = self.daily.iter().map(|w| w.precip_sum_mm).fold(0.0, f64::max);
            self.not_fired(
                kw,
                format!(
                    "max daily precipitation {max:.1} mm below threshold {} mm",
                    cfg.heavy_rain_daily_mm
                ),
            )
        } else {
            let detail = format!(
                "{} day(s) at or above {} mm of precipitation",
                signals.len(),
                cfg.heavy_rain_daily_mm
            );
            self.fired(kw, signals, detail)
        }
    }

    fn light_rain(&self, cfg: &PredicateConfig) -> Evidence {
        let kw = Keyword::LightRain;
        let any_heavy = self.daily.iter().any(|w| w.precip_sum_mm >= cfg.heavy_rain_daily_mm);
        if any_heavy {
            return self.not_fired(kw, String::from("a heavy-rain day dominates the horizon"));
        }
        let signals: Vec<Signal> = self
            .daily
            .iter()
            .filter(|w| w.precip_sum_mm > 0.0 && w.precip_sum_mm <= cfg.light_rain_daily_max_mm)
            .map(|w| signal(SignalVariable::P, w, SignalPattern::Persistence))
            .collect();
        if signals.is_empty() {
            self.not_fired(
                kw,
                format!("no daily totals in (0, {}] mm", cfg.light_rain_daily_max_mm),
            )
        } else {
            let detail = format!(
                "{} day(s) with light totals up to {} mm",
                signals.len(),
                cfg.light_rain_daily_max_mm
            );
            self.fired(kw, signals, detail)
        }
    }

    fn strong_wind(&self, cfg: &PredicateConfig) -> Evidence {
        let kw = Keyword::StrongWind;
        let mut signals: Vec<Signal> = self
            .six_hour
            .iter()
            .filter(|w| w.wind_mean_ms >= cfg.strong_wind_mean_ms)
            .map(|w| signal(SignalVariable::U, w, SignalPattern::Exceedance))
            .collect();
        if let Some(hourly) = self.hourly() {
            signals.extend(
                hourly
                    .iter()
                    .filter(|r| r.gust_ms.is_some_and(|g| g >= cfg.strong_wind_gust_ms))
                    .map(|r| hour_signal(SignalVariable::U, r, SignalPattern::Exceedance)),
            );
        }
        if signals.is_empty() {
            let max = self.six_hour.iter().map(|w| w.wind_mean_ms).fold(0.0, f64::max);
            self.not_fired(
                kw,
                format!(
                    "max 6h wind mean {max:.1} m/s below {} m/s and no qualifying gusts",
                    cfg.strong_wind_mean_ms
                ),
            )
        } else {
            let detail = format!(
                "wind means >= {} m/s or gusts >= {} m/s",
                cfg.strong_wind_mean_ms, cfg.strong_wind_gust_ms
            );
            self.fired(kw, signals, detail)
        }
    }

    fn calm_wind(&self, cfg: &PredicateConfig) -> Evidence {
        let kw = Keyword::CalmWind;
        let max_window = self
            .six_hour
            .iter()
            .max_by(|a, b| a.wind_mean_ms.total_cmp(&b.wind_mean_ms))
            .expect("non-empty six-hour table");
        if max_window.wind_mean_ms < cfg.calm_wind_mean_ms {
            let detail = format!(
                "every 6h wind mean below {} m/s (max {:.1})",
                cfg.calm_wind_mean_ms, max_window.wind_mean_ms
            );
            self.fired(
                kw,
                alloc::vec![signal(SignalVariable::U, max_window, SignalPattern::Persistence)],
                detail,
            )
        } else {
            self.not_fired(
                kw,
                format!(
                    "a 6h wind mean of {:.1} m/s reaches {} m/s or more",
                    max_window.wind_mean_ms, cfg.calm_wind_mean_ms
                ),
            )
        }
    }

    fn humidity(&self, kw: Keyword, cfg: &PredicateConfig) -> Evidence {
        let mean = self.horizon_mean_rh();
        let (fires, threshold, relation) = if kw == Keyword::MoistConditions {
            (mean >= cfg.moist_rh_pct, cfg.moist_rh_pct, ">=")
        } else {
            (mean <= cfg.dry_rh_pct, cfg.dry_rh_pct, "<=")
        };
        let detail = format!("horizon-mean RH {mean:.1} % ({relation} {threshold} % required)");
        if fires {
            let witness = self
                .six_hour
                .iter()
                .max_by(|a, b| {
                    if kw == Keyword::MoistConditions {
                        a.rh_mean_pct.total_cmp(&b.rh_mean_pct)
                    } else {
                        b.rh_mean_pct.total_cmp(&a.rh_mean_pct)
                    }
                })
                .expect("non-empty six-hour table");
            self.fired(
                kw,
                alloc::vec![signal(SignalVariable::Rh, witness, SignalPattern::Persistence)],
                detail,
            )
        } else {
            self.not_fired(kw, detail)
        }
    }

    /// Frontal-grade direction shifts between consecutive defined 6 h
    /// direction means, with corroborating wind rise or nearby precip.
    fn frontal_shifts(&self, cfg: &PredicateConfig) -> Vec<(usize, f64, bool)> {
        let mut shifts = Vec::new();
        let defined: Vec<(usize, f64)> = self
            .six_hour
            .iter()
            .enumerate()
            .filter_map(|(i, w)| w.wind_dir_mean_deg.map(|d| (i, d)))
            .collect();
        for pair in defined.windows(2) {
            let (i, a) = pair[0];
            let (j, b) = pair[1];
            let dist = circular_distance_deg(a, b);
            if dist >= cfg.frontal_shift_deg {
                let wind_rise = self.six_hour[j].wind_mean_ms - self.six_hour[i].wind_mean_ms;
                let adjacent_precip =
                    self.six_hour[i].precip_sum_mm > 0.0 || self.six_hour[j].precip_sum_mm > 0.0;
                let corroborated = wind_rise >= cfg.frontal_wind_rise_ms || adjacent_precip;
                shifts.push((j, dist, corroborated));
            }
        }
        shifts
    }

    fn frontal_passage(&self, cfg: &PredicateConfig) -> Evidence {
        let kw = Keyword::FrontalPassage;
        let shifts = self.frontal_shifts(cfg);
        let corroborated: Vec<&(usize, f64, bool)> =
            shifts.iter().filter(|(_, _, ok)| *ok).collect();
        if corroborated.is_empty() {
            return self.not_fired(
                kw,
                format!(
                    "no corroborated direction shift of {} deg or more between consecutive 6h windows",
                    cfg.frontal_shift_deg
                ),
            );
        }
        let mut signals = Vec::new();
        for (idx, _, _) in &corroborated {
            let w = &self.six_hour[*idx];
            signals.push(signal(SignalVariable::Theta, w, SignalPattern::Shift));
            signals.push(signal(SignalVariable::U, w, SignalPattern::TrendUp));
        }
        let detail = format!(
            "{} direction shift(s) of {} deg or more with wind rise or adjacent precipitation",
            corroborated.len(),
            cfg.frontal_shift_deg
        );
        self.fired(kw, signals, detail)
    }

    fn sky_share(&self, kw: Keyword, cfg: &PredicateConfig, class: WeatherCategory) -> Evidence {
        let Some(hourly) = self.hourly() else {
            return self.not_fired(kw, String::from("hourly categories unavailable at this horizon"));
        };
        let hits = hourly.iter().filter(|r| r.category == Some(class)).count();
        let share = hits as f64 / hourly.len() as f64;
        let detail = format!(
            "{hits}/{} hours in class ({:.0} % needed)",
            hourly.len(),
            cfg.sky_share * 100.0
        );
        if share >= cfg.sky_share {
            let witness = &self.six_hour[0];
            self.fired(
                kw,
                alloc::vec![signal(SignalVariable::Vis, witness, SignalPattern::Persistence)],
                detail,
            )
        } else {
            self.not_fired(kw, detail)
        }
    }

    fn anomaly(&self, kw: Keyword, cfg: &PredicateConfig, warm: bool) -> Evidence {
        let Some(clim) = &self.ctx.climatology else {
            return self.not_fired(kw, String::from("climatology absent; anomaly not decidable"));
        };
        let mut deltas = Vec::with_capacity(self.daily.len());
        for w in &self.daily {
            let month = self.local_month_of(w) as u8;
            match clim.month(month) {
                Some(normal) => deltas.push((w, w.t_max_c - normal.t_max_c)),
                None => {
                    return self.not_fired(kw, format!("climatology missing month {month}"));
                }
            }
        }
        let mean = deltas.iter().map(|(_, d)| d).sum::<f64>() / deltas.len() as f64;
        let (fires, threshold) = if warm {
            (mean >= cfg.warm_anomaly_c, cfg.warm_anomaly_c)
        } else {
            (mean <= cfg.cold_anomaly_c, cfg.cold_anomaly_c)
        };
        let detail = format!(
            "horizon-mean daily t_max deviates {mean:+.2} degC from climatology (threshold {threshold:+})"
        );
        if fires {
            let witness = deltas
                .iter()
                .max_by(|a, b| if warm { a.1.total_cmp(&b.1) } else { b.1.total_cmp(&a.1) })
                .expect("non-empty daily table")
                .0;
            self.fired(
                kw,
                alloc::vec![signal(SignalVariable::T, witness, SignalPattern::Exceedance)],
                detail,
            )
        } else {
            self.not_fired(kw, detail)
        }
    }

    fn unstable_airmass(&self, cfg: &PredicateConfig) -> Evidence {
        let kw = Keyword::UnstableAirmass;
        let shifts = self.frontal_shifts(cfg);
        if shifts.len() as u32 >= cfg.unstable_shift_count {
            let signals: Vec<Signal> = shifts
                .iter()
                .map(|(idx, _, _)| {
                    signal(SignalVariable::Theta, &self.six_hour[*idx], SignalPattern::Shift)
                })
                .collect();
            let detail = format!("{} frontal-grade wind-direction shifts", shifts.len());
            return self.fired(kw, signals, detail);
        }
        // Alternating wet/dry 6 h windows: a run of flips covering at
        // least `unstable_alternating_windows` windows.
        let wet: Vec<bool> = self.six_hour.iter().map(|w| w.precip_sum_mm > 0.0).collect();
        let mut run = 1u32; // windows in the current alternating run
        for i in 1..wet.len() {
            if wet[i] != wet[i - 1] {
                run += 1;
            } else {
                run = 1;
            }
            if run >= cfg.unstable_alternating_windows {
                let w = &self.six_hour[i + 1 - run as usize];
                let detail =
                    format!("{run} consecutive 6h windows alternate between wet and dry");
                return self.fired(
                    kw,
                    alloc::vec![signal(SignalVariable::P, w, SignalPattern::Shift)],
                    detail,
                );
            }
        }
        self.not_fired(
            kw,
            format!(
                "{} shift(s) and no alternating precipitation run of {} windows",
                shifts.len(),
                cfg.unstable_alternating_windows
            ),
        )
    }

    fn stable_conditions(&self, cfg: &PredicateConfig) -> Evidence {
        let kw = Keyword::StableConditions;
        let disruptors = [
            Keyword::HeavyRain,
            Keyword::StrongWind,
            Keyword::FrontalPassage,
            Keyword::UnstableAirmass,
            Keyword::ThunderstormRisk,
            Keyword::Snow,
        ];
        let firing: Vec<&'static str> = disruptors
            .into_iter()
            .filter(|d| self.evidence(*d, cfg).fired)
            .map(|d| d.token())
            .collect();
        if firing.is_empty() {
            let t_witness = &self.daily[0];
            let u_witness = &self.six_hour[0];
            self.fired(
                kw,
                alloc::vec![
                    signal(SignalVariable::T, t_witness, SignalPattern::Persistence),
                    signal(SignalVariable::U, u_witness, SignalPattern::Persistence),
                ],
                String::from("no heavy precipitation, strong wind, or airmass transition fires"),
            )
        } else {
            self.not_fired(kw, format!("disrupted by: {}", firing.join(", ")))
        }
    }

    fn fog_risk(&self, cfg: &PredicateConfig) -> Evidence {
        let kw = Keyword::FogRisk;
        let mut signals = Vec::new();
        if let Some(hourly) = self.hourly() {
            signals.extend(
                hourly
                    .iter()
                    .filter(|r| r.category == Some(WeatherCategory::Fog))
                    .map(|r| hour_signal(SignalVariable::Vis, r, SignalPattern::Exceedance)),
            );
        }
        signals.extend(
            self.six_hour
                .iter()
                .filter(|w| w.rh_mean_pct >= cfg.fog_rh_pct && w.wind_mean_ms < cfg.fog_wind_ms)
                .map(|w| signal(SignalVariable::Rh, w, SignalPattern::Persistence)),
        );
        if signals.is_empty() {
            self.not_fired(
                kw,
                format!(
                    "no fog hours and no 6h window with RH >= {} % under {} m/s wind",
                    cfg.fog_rh_pct, cfg.fog_wind_ms
                ),
            )
        } else {
            let detail = String::from("fog-categorized hours or saturated near-calm windows");
            self.fired(kw, signals, detail)
        }
    }

    fn hourly_category(&self, kw: Keyword, class: WeatherCategory) -> Evidence {
        let Some(hourly) = self.hourly() else {
            return self.not_fired(kw, String::from("hourly categories unavailable at this horizon"));
        };
        let signals: Vec<Signal> = hourly
            .iter()
            .filter(|r| r.category == Some(class))
            .map(|r| hour_signal(SignalVariable::P, r, SignalPattern::Exceedance))
            .collect();
        if signals.is_empty() {
            self.not_fired(kw, format!("no hour categorized {class:?}"))
        } else {
            let detail = format!("{} hour(s) categorized {class:?}", signals.len());
            self.fired(kw, signals, detail)
        }
    }

    fn marine_influence(&self) -> Evidence {
        let kw = Keyword::MarineInfluence;
        const HINTS: &[&str] =
            &["coast", "port", "harbour", "harbor", "bay", "island", "sea", "peninsula", "beach"];
        let description = self.ctx.location.description.as_deref().unwrap_or("");
        let lowered = description.to_lowercase();
        let coastal = HINTS.iter().any(|h| lowered.contains(h));
        if coastal {
            let witness = &self.six_hour[0];
            self.fired(
                kw,
                alloc::vec![signal(SignalVariable::Rh, witness, SignalPattern::Persistence)],
                String::from("location description indicates a coastal setting (contextual)"),
            )
        } else {
            self.not_fired(kw, String::from("no coastal indication in the location metadata"))
        }
    }

    fn autumn_transition(&self, cfg: &PredicateConfig) -> Evidence {
        let kw = Keyword::AutumnTransition;
        let month = (self.ctx.issued_at_utc
            + Duration::seconds(self.ctx.location.utc_offset_s as i64))
        .date_naive()
        .month();
        let autumn = (9..=11).contains(&month);
        if !autumn {
            return self.not_fired(kw, format!("month {month} outside September-November"));
        }
        let cooling = self.evidence(Keyword::CoolingTrend, cfg);
        if cooling.fired {
            let detail = String::from("autumn month with a cooling trend (contextual)");
            self.fired(kw, cooling.signals, detail)
        } else {
            self.not_fired(kw, String::from("autumn month but no cooling trend"))
        }
    }
}

/// Least-squares slope of evenly spaced samples; `None` for fewer than 2.
pub fn lsq_slope(values: &[f64]) -> Option<f64> {
    let n = values.len();
    if n < 2 {
        return None;
    }
    let nf = n as f64;
    let x_mean = (nf - 1.0) / 2.0;
    let y_mean = values.iter().sum::<f64>() / nf;
    let mut num = 0.0;
    let mut den = 0.0;
    for (i, y) in values.iter().enumerate() {
        let dx = i as f64 - x_mean;
        num += dx * (y - y_mean);
        den += dx * dx;
    }
    Some(num / den)
}

fn signal(variable: SignalVariable, w: &WindowAggregate, pattern: SignalPattern) -> Signal {
    Signal {
        variable,
        window_ref: WindowRef { start_utc: w.window_start_utc, window_len_h: w.window_len_h },
        pattern,
    }
}

fn hour_signal(variable: SignalVariable, r: &HourlyRecord, pattern: SignalPattern) -> Signal {
    Signal {
        variable,
        window_ref: WindowRef { start_utc: r.ts_utc, window_len_h: 1 },
        pattern,
    }
}

/// One warning the rules expect given the tables and climatology.
#[derive(Debug, Clone, PartialEq)]
pub struct ExpectedWarning {
    pub kind: WarningKind,
    pub window: WindowRef,
    /// The observed value that tripped the rule.
    pub value: f64,
    /// The threshold it tripped.
    pub threshold: f64,
    pub detail: String,
}

/// Computes the warning set the data demands. Returns `None` when the
/// context carries no climatology (the check is then skipped, degraded).
///
/// Heavy-rain: some daily sum at or above
/// `max(warn_rain_daily_mm, warn_rain_clim_factor x climatological
/// daily-mean precipitation for that month)`. Wind: any 6 h wind mean at
/// or above `warn_wind_mean_ms`, or any hourly gust at or above
/// `warn_gust_ms`.
pub fn expected_warnings(
    view: &ContextView<'_>,
    cfg: &PredicateConfig,
) -> Option<Vec<ExpectedWarning>> {
    let clim = view.ctx.climatology.as_ref()?;
    let mut out = Vec::new();

    if let Some(w) = rain_warning_window(view, clim, cfg) {
        out.push(w);
    }

    let mut wind: Option<ExpectedWarning> = None;
    for w in &view.six_hour {
        if w.wind_mean_ms >= cfg.warn_wind_mean_ms
            && wind.as_ref().is_none_or(|prev| w.wind_mean_ms > prev.value)
        {
            wind = Some(ExpectedWarning {
                kind: WarningKind::StrongWind,
                window: WindowRef { start_utc: w.window_start_utc, window_len_h: w.window_len_h },
                value: w.wind_mean_ms,
                threshold: cfg.warn_wind_mean_ms,
                detail: format!(
                    "6h wind mean {:.1} m/s at or above {} m/s",
                    w.wind_mean_ms, cfg.warn_wind_mean_ms
                ),
            });
        }
    }
    if wind.is_none() {
        if let Some(hourly) = view.hourly() {
            for r in hourly {
                let Some(g) = r.gust_ms else { continue };
                if g >= cfg.warn_gust_ms && wind.as_ref().is_none_or(|prev| g > prev.value) {
                    wind = Some(ExpectedWarning {
                        kind: WarningKind::StrongWind,
                        window: WindowRef { start_utc: r.ts_utc, window_len_h: 1 },
                        value: g,
                        threshold: cfg.warn_gust_ms,
                        detail: format!("gust {g:.1} m/s at or above {} m/s", cfg.warn_gust_ms),
                    });
                }
            }
        }
    }
    out.extend(wind);

    Some(out)
}

fn rain_warning_window(
    view: &ContextView<'_>,
    clim: &MonthlyClimatology,
    cfg: &PredicateConfig,
) -> Option<ExpectedWarning> {
    let mut best: Option<ExpectedWarning> = None;
    for w in &view.daily {
        let local =
            w.window_start_utc + Duration::seconds(view.ctx.location.utc_offset_s as i64);
        let date = local.date_naive();
        let month = date.month() as u8;
        let normal = clim.month(month)?;
        let daily_mean = normal.precip_total_mm / days_in_month(date) as f64;
        let threshold = cfg.warn_rain_daily_mm.max(cfg.warn_rain_clim_factor * daily_mean);
        let exceed = w.precip_sum_mm - threshold;
        if w.precip_sum_mm >= threshold
            && best.as_ref().is_none_or(|b| exceed > b.value - b.threshold)
        {
            best = Some(ExpectedWarning {
                kind: WarningKind::HeavyRain,
                window: WindowRef { start_utc: w.window_start_utc, window_len_h: w.window_len_h },
                value: w.precip_sum_mm,
                threshold,
                detail: format!(
                    "daily precipitation {:.1} mm at or above max({} mm, {} x climatological daily mean {:.1} mm)",
                    w.precip_sum_mm, cfg.warn_rain_daily_mm, cfg.warn_rain_clim_factor, daily_mean
                ),
            });
        }
    }
    best
}

fn days_in_month(date: NaiveDate) -> u32 {
    let (y, m) = (date.year(), date.month());
    let first = NaiveDate::from_ymd_opt(y, m, 1).expect("valid month start");
    let next = if m == 12 {
        NaiveDate::from_ymd_opt(y + 1, 1, 1)
    } else {
        NaiveDate::from_ymd_opt(y, m + 1, 1)
    }
    .expect("valid next month");
    (next - first).num_days() as u32
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn slope_matches_hand_computation() {
        // Hand least-squares over {15.5, 14.4, 13.0, 11.7, 10.5}:
        // x_mean = 2, y_mean = 13.02, sum dx*dy = -12.70, sum dx^2 = 10.
        let slope = lsq_slope(&[15.5, 14.4, 13.0, 11.7, 10.5]).unwrap();
        assert!((slope - (-1.27)).abs() < 1e-12, "got {slope}");
    }

    #[test]
    fn slope_needs_two_points() {
        assert_eq!(lsq_slope(&[1.0]), None);
        assert_eq!(lsq_slope(&[]), None);
    }

    #[test]
    fn flat_series_has_zero_slope() {
        assert_eq!(lsq_slope(&[5.0, 5.0, 5.0, 5.0]), Some(0.0));
    }

    #[test]
    fn days_in_month_handles_leap_years() {
        assert_eq!(days_in_month(NaiveDate::from_ymd_opt(2025, 10, 5).unwrap()), 31);
        assert_eq!(days_in_month(NaiveDate::from_ymd_opt(2024, 2, 5).unwrap()), 29);
        assert_eq!(days_in_month(NaiveDate::from_ymd_opt(2025, 2, 5).unwrap()), 28);
        assert_eq!(days_in_month(NaiveDate::from_ymd_opt(2025, 12, 5).unwrap()), 31);
    }

    #[test]
    fn every_keyword_has_a_signature() {
        for kw in Keyword::ALL {
            assert!(!keyword_signature(*kw).is_empty());
        }
    }
}
