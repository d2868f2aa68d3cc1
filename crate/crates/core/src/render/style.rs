use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Fill for counties with no affiliation under the current layer.
pub const NEUTRAL: &str = "#f0f0f0";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RampId {
    Rigo,
    Msa,
    Both,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Ramps {
    pub rigo: Vec<String>,
    pub msa: Vec<String>,
    pub both: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StrokeWidths {
    pub national: f64,
    pub state: f64,
    pub region: f64,
    pub county: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HatchStyle {
    pub angle: f64,
    pub spacing: f64,
    pub stroke_width: f64,
    pub color: String,
    pub opacity: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StyleConfig {
    pub ramps: Ramps,
    pub strokes: StrokeWidths,
    pub hatch: HatchStyle,
    /// Stroke colour for every boundary line.
    pub line_color: String,
}

fn hexes(v: &[&str]) -> Vec<String> {
    v.iter().map(|s| s.to_string()).collect()
}

impl Default for StyleConfig {
    fn default() -> Self {
        StyleConfig {
            ramps: Ramps {
                rigo: hexes(&["#edf8e9", "#bae4b3", "#74c476", "#31a354", "#006d2c"]),
                msa: hexes(&["#f2f0f7", "#cbc9e2", "#9e9ac8", "#756bb1", "#54278f"]),
                both: hexes(&["#f0f9e8", "#bae4bc", "#7bccc4", "#43a2ca", "#0868ac"]),
            },
            strokes: StrokeWidths {
                national: 2.0,
                state: 2.0,
                region: 1.2,
                county: 0.25,
            },
            hatch: HatchStyle {
                angle: 45.0,
                spacing: 4.0,
                stroke_width: 1.0,
                color: "#333333".into(),
                opacity: 0.6,
            },
            line_color: "#252525".into(),
        }
    }
}

fn is_hex(s: &str) -> bool {
    s.len() == 7 && s.starts_with('#') && s[1..].bytes().all(|b| b.is_ascii_hexdigit())
}

impl StyleConfig {
    pub fn ramp(&self, id: RampId) -> &[String] {
        match id {
            RampId::Rigo => &self.ramps.rigo,
            RampId::Msa => &self.ramps.msa,
            RampId::Both => &self.ramps.both,
        }
    }

    /// Every colour this style can emit, neutral included.
    pub fn palette(&self) -> Vec<&str> {
        let mut v: Vec<&str> = [RampId::Rigo, RampId::Msa, RampId::Both]
            .iter()
            .flat_map(|&r| self.ramp(r).iter().map(String::as_str))
            .collect();
        v.extend([NEUTRAL, self.hatch.color.as_str(), self.line_color.as_str()]);
        v
    }

    /// Same style with every ramp stretched or thinned to `k` steps by
    /// nearest-step sampling; the lightest and darkest colours are kept.
    pub fn resampled(&self, k: usize) -> StyleConfig {
        let sample = |ramp: &[String]| -> Vec<String> {
            let n = ramp.len();
            (0..k)
                .map(|i| {
                    let j = if k <= 1 { n - 1 } else { (i * (n - 1) + (k - 1) / 2) / (k - 1) };
                    ramp[j].clone()
                })
                .collect()
        };
        StyleConfig {
            ramps: Ramps {
                rigo: sample(&self.ramps.rigo),
                msa: sample(&self.ramps.msa),
                both: sample(&self.ramps.both),
            },
            ..self.clone()
        }
    }

    pub fn check(&self, k: usize) -> Result<()> {
        for id in [RampId::Rigo, RampId::Msa, RampId::Both] {
            let ramp = self.ramp(id);
            if ramp.len() != k {
                return Err(Error::BadStyle(format!("{id:?} ramp has {} steps, expected {k}", ramp.len())));
            }
        }
        if let Some(bad) = self.palette().into_iter().find(|c| !is_hex(c)) {
            return Err(Error::BadStyle(format!("{bad:?} is not a #rrggbb colour")));
        }
        let s = &self.strokes;
        if !(s.national > s.region && s.state > s.region && s.region > s.county && s.county > 0.0) {
            return Err(Error::BadStyle(
                "stroke widths must decrease from national/state to region to county".into(),
            ));
        }
        if !(self.hatch.spacing > 0.0 && self.hatch.stroke_width > 0.0 && (0.0..=1.0).contains(&self.hatch.opacity)) {
            return Err(Error::BadStyle("hatch spacing and width must be positive, opacity in [0, 1]".into()));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_are_valid() {
        StyleConfig::default().check(5).unwrap();
        assert_eq!(StyleConfig::default().check(4).unwrap_err().code(), "E_BAD_STYLE");
    }

    #[test]
    fn rejects_bad_strokes_and_colours() {
        let mut s = StyleConfig::default();
        s.strokes.county = 1.5;
        assert!(s.check(5).is_err());
        let mut s = StyleConfig::default();
        s.ramps.msa[2] = "purple".into();
        assert!(s.check(5).is_err());
    }

    #[test]
    fn resampling_keeps_ends() {
        let s = StyleConfig::default();
        let three = s.resampled(3);
        assert_eq!(three.ramps.rigo, ["#edf8e9", "#74c476", "#006d2c"]);
        three.check(3).unwrap();
        assert_eq!(s.resampled(5), s);
        assert_eq!(s.resampled(7).ramps.msa.len(), 7);
    }
}
