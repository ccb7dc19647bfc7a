//! The controlled weather-keyword vocabulary.
//!
//! Twenty tokens: the set observed in real reports plus symmetric
//! complements, each tied to exactly one evidence predicate in
//! [`crate::evidence`]. Hard tokens are decidable from the forecast
//! tables; contextual tokens (coastal setting, seasonal framing) are
//! not, so the validator warns on them instead of failing.

use alloc::string::String;
use serde::{Deserialize, Serialize};

/// How strictly a keyword's evidence predicate is enforced.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PredicateStrength {
    /// Fully decidable from aggregates; unsupported use fails validation.
    Hard,
    /// Not decidable from tables alone; unsupported use only warns.
    Contextual,
}

macro_rules! keywords {
    ($( $variant:ident => $token:literal ),+ $(,)?) => {
        /// One token of the controlled vocabulary.
        #[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
        pub enum Keyword {
            $( #[serde(rename = $token)] $variant, )+
        }

        impl Keyword {
            /// Every vocabulary token, in severity order (most severe first).
            pub const ALL: &'static [Keyword] = &[ $( Keyword::$variant, )+ ];

            /// The wire token, e.g. `cooling_trend`.
            pub fn token(self) -> &'static str {
                match self {
                    $( Keyword::$variant => $token, )+
                }
            }

            /// Parses a wire token; `None` when outside the vocabulary.
            pub fn parse(s: &str) -> Option<Keyword> {
                match s {
                    $( $token => Some(Keyword::$variant), )+
                    _ => None,
                }
            }
        }
    };
}

// Order matters: this is the fixed severity ranking used when the
// deterministic analyst picks its top 3-5 keywords.
keywords! {
    ThunderstormRisk => "thunderstorm_risk",
    Snow => "snow",
    HeavyRain => "heavy_rain",
    StrongWind => "strong_wind",
    FrontalPassage => "frontal_passage",
    UnstableAirmass => "unstable_airmass",
    FogRisk => "fog_risk",
    CoolingTrend => "cooling_trend",
    WarmingTrend => "warming_trend",
    WarmAnomaly => "warm_anomaly",
    ColdAnomaly => "cold_anomaly",
    LightRain => "light_rain",
    MoistConditions => "moist_conditions",
    DryConditions => "dry_conditions",
    Overcast => "overcast",
    ClearSky => "clear_sky",
    CalmWind => "calm_wind",
    AutumnTransition => "autumn_transition",
    MarineInfluence => "marine_influence",
    StableConditions => "stable_conditions",
}

impl Keyword {
    /// Position in the fixed severity ranking; lower is more severe.
    pub fn severity_rank(self) -> usize {
        Self::ALL.iter().position(|k| *k == self).unwrap_or(usize::MAX)
    }

    pub fn strength(self) -> PredicateStrength {
        match self {
            Keyword::MarineInfluence | Keyword::AutumnTransition => PredicateStrength::Contextual,
            _ => PredicateStrength::Hard,
        }
    }
}

impl core::fmt::Display for Keyword {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.write_str(self.token())
    }
}

impl core::str::FromStr for Keyword {
    type Err = crate::CoreError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Keyword::parse(s).ok_or_else(|| crate::CoreError::UnknownKeyword(String::from(s)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn vocabulary_has_twenty_tokens() {
        assert_eq!(Keyword::ALL.len(), 20);
    }

    #[test]
    fn tokens_round_trip() {
        for kw in Keyword::ALL {
            assert_eq!(Keyword::parse(kw.token()), Some(*kw));
        }
        assert_eq!(Keyword::parse("sunny_spells"), None);
    }

    #[test]
    fn exactly_two_contextual_tokens() {
        let contextual: alloc::vec::Vec<_> = Keyword::ALL
            .iter()
            .filter(|k| k.strength() == PredicateStrength::Contextual)
            .collect();
        assert_eq!(contextual.len(), 2);
    }
}
