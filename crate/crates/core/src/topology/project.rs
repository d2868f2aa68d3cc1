//! Map projection from geographic degrees to planar coordinates.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Mean Earth radius in kilometres; projected units are kilometres.
pub const EARTH_RADIUS_KM: f64 = 6371.0088;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum ProjectionParams {
    /// Spherical Albers equal-area conic. Angles in degrees.
    Albers {
        standard_parallel_1: f64,
        standard_parallel_2: f64,
        origin_lat: f64,
        origin_lon: f64,
        radius: f64,
    },
    Identity,
}

impl ProjectionParams {
    /// Conventional conterminous-US setup: parallels 29.5°N / 45.5°N,
    /// origin 23°N 96°W.
    pub fn us_albers() -> Self {
        ProjectionParams::Albers {
            standard_parallel_1: 29.5,
            standard_parallel_2: 45.5,
            origin_lat: 23.0,
            origin_lon: -96.0,
            radius: EARTH_RADIUS_KM,
        }
    }

    pub fn projector(&self) -> Projector {
        match *self {
            ProjectionParams::Identity => Projector::Identity,
            ProjectionParams::Albers {
                standard_parallel_1,
                standard_parallel_2,
                origin_lat,
                origin_lon,
                radius,
            } => {
                let (s1, s2) = (standard_parallel_1.to_radians(), standard_parallel_2.to_radians());
                let n = (s1.sin() + s2.sin()) / 2.0;
                let c = s1.cos().powi(2) + 2.0 * n * s1.sin();
                let rho0 = radius * (c - 2.0 * n * origin_lat.to_radians().sin()).sqrt() / n;
                Projector::Albers {
                    n,
                    c,
                    rho0,
                    lon0: origin_lon.to_radians(),
                    radius,
                }
            }
        }
    }
}

/// Projection with its constants precomputed.
#[derive(Debug, Clone, Copy)]
pub enum Projector {
    Albers {
        n: f64,
        c: f64,
        rho0: f64,
        lon0: f64,
        radius: f64,
    },
    Identity,
}

impl Projector {
    pub fn project(&self, lon: f64, lat: f64) -> Result<(f64, f64)> {
        match *self {
            Projector::Identity => Ok((lon, lat)),
            Projector::Albers {
                n,
                c,
                rho0,
                lon0,
                radius,
            } => {
                if lat.is_nan() || lat.abs() >= 90.0 {
                    return Err(Error::Pole(lat));
                }
                let rho = radius * (c - 2.0 * n * lat.to_radians().sin()).sqrt() / n;
                let theta = n * (lon.to_radians() - lon0);
                Ok((rho * theta.sin(), rho0 - rho * theta.cos()))
            }
        }
    }
}

pub fn project(lon: f64, lat: f64, params: &ProjectionParams) -> Result<(f64, f64)> {
    params.projector().project(lon, lat)
}
