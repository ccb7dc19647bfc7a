//! Location metadata: reverse geocoding, elevation, and the optional
//! encyclopedia blurb. Every sub-lookup degrades rather than fails; a
//! fully failed geocode still yields a coordinate-labeled location so a
//! report stays producible.

use serde_json::Value;

use hiermet_core::model::GeoLocation;

use super::{codes, request_with_retries, Ingestor, RawResponse, SourceName, SourceStatus};

pub async fn fetch_location_meta(
    ing: &Ingestor,
    api_key: &str,
    lat: f64,
    lon: f64,
) -> (GeoLocation, Vec<SourceStatus>, Vec<RawResponse>) {
    let mut statuses = Vec::new();
    let mut raws = Vec::new();

    let geo_url = format!(
        "{}/geo/1.0/reverse",
        ing.sources.geocode_base.trim_end_matches('/')
    );
    let (geo_body, geo_attempts) = request_with_retries(&ing.client, &ing.retry, || {
        ing.client.get(&geo_url).query(&[
            ("lat", lat.to_string()),
            ("lon", lon.to_string()),
            ("limit", "1".to_string()),
            ("appid", api_key.to_string()),
        ])
    })
    .await;

    let mut location = GeoLocation {
        city: String::new(),
        region: String::new(),
        country: String::new(),
        latitude: lat,
        longitude: lon,
        elevation_m: 0.0,
        // estimated; the forecast response's timezone_offset overrides it
        utc_offset_s: ((lon / 15.0).round() as i32 * 3600).clamp(-50_400, 50_400),
        description: None,
    };

    let mut geocoded = false;
    if let Ok(body) = &geo_body {
        if let Ok(parsed) = serde_json::from_slice::<Value>(body) {
            if let Some(first) = parsed.as_array().and_then(|a| a.first()) {
                let s = |k: &str| {
                    first.get(k).and_then(Value::as_str).unwrap_or_default().to_string()
                };
                location.city = s("name");
                location.region = s("state");
                location.country = s("country");
                geocoded = !location.city.is_empty();
            }
        }
        raws.push(("geocode.json".to_string(), body.clone()));
    }
    if geocoded {
        statuses.push(SourceStatus::ok(SourceName::Openweather, geo_attempts));
    } else {
        // coordinate-labeled location, e.g. "16.05 N, 108.22 E"
        location.city = format!(
            "{:.2} {}, {:.2} {}",
            lat.abs(),
            if lat >= 0.0 { "N" } else { "S" },
            lon.abs(),
            if lon >= 0.0 { "E" } else { "W" },
        );
        statuses.push(SourceStatus::degraded(
            SourceName::Openweather,
            codes::GEO_COORDINATE_LABEL,
            geo_attempts,
        ));
    }

    let elev_url = format!(
        "{}/api/v1/lookup",
        ing.sources.elevation_base.trim_end_matches('/')
    );
    let (elev_body, elev_attempts) = request_with_retries(&ing.client, &ing.retry, || {
        ing.client
            .get(&elev_url)
            .query(&[("locations", format!("{lat},{lon}"))])
    })
    .await;
    let elevation = elev_body.ok().and_then(|body| {
        let parsed = serde_json::from_slice::<Value>(&body).ok()?;
        raws.push(("elevation.json".to_string(), body));
        parsed
            .get("results")?
            .as_array()?
            .first()?
            .get("elevation")?
            .as_f64()
    });
    match elevation {
        Some(e) => location.elevation_m = e,
        None => statuses.push(SourceStatus::degraded(
            SourceName::Openweather,
            codes::ELEVATION_UNAVAILABLE,
            elev_attempts,
        )),
    }

    // The description lookup can only degrade, never fail the location.
    if geocoded {
        let wiki_url = format!(
            "{}/api/rest_v1/page/summary/{}",
            ing.sources.wikipedia_base.trim_end_matches('/'),
            urlencode(&location.city)
        );
        let (wiki_body, wiki_attempts) =
            request_with_retries(&ing.client, &ing.retry, || ing.client.get(&wiki_url)).await;
        let description = wiki_body.ok().and_then(|body| {
            let parsed = serde_json::from_slice::<Value>(&body).ok()?;
            raws.push(("wikipedia.json".to_string(), body));
            let extract = parsed.get("extract")?.as_str()?.trim().to_string();
            (!extract.is_empty()).then(|| truncate_words(&extract, 280))
        });
        match description {
            Some(d) => {
                location.description = Some(d);
                statuses.push(SourceStatus::ok(SourceName::Wikipedia, wiki_attempts));
            }
            None => statuses.push(SourceStatus::degraded(
                SourceName::Wikipedia,
                codes::DESCRIPTION_UNAVAILABLE,
                wiki_attempts,
            )),
        }
    } else {
        statuses.push(SourceStatus::degraded(
            SourceName::Wikipedia,
            codes::DESCRIPTION_UNAVAILABLE,
            0,
        ));
    }

    (location, statuses, raws)
}

fn urlencode(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for b in s.bytes() {
        match b {
            b'A'..=b'Z' | b'a'..=b'z' | b'0'..=b'9' | b'-' | b'_' | b'.' | b'~' => {
                out.push(b as char)
            }
            b' ' => out.push('_'),
            _ => out.push_str(&format!("%{b:02X}")),
        }
    }
    out
}

fn truncate_words(s: &str, max: usize) -> String {
    if s.len() <= max {
        return s.to_string();
    }
    let mut cut = max;
    while cut > 0 && !s.is_char_boundary(cut) {
        cut -= 1;
    }
    match s[..cut].rfind(' ') {
        Some(i) => format!("{}...", &s[..i]),
        None => format!("{}...", &s[..cut]),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn urlencode_keeps_wiki_titles_readable() {
        assert_eq!(urlencode("Da Nang"), "Da_Nang");
        assert_eq!(urlencode("Cork"), "Cork");
    }

    #[test]
    fn truncate_respects_char_boundaries() {
        let s = "ré".repeat(200);
        let t = truncate_words(&s, 281);
        assert!(t.len() <= 284);
    }
}
