//! Concurrence as a function of separation, by any of the three methods.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::chain::ChainParams;
use crate::entanglement::concurrence_xstate;
use crate::error::{Error, Result};
use crate::magnon::truncated_rdm;
use crate::oracle::{two_site_rdm_exact, ThermalState};

/// How the pair density is obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    /// Dense diagonalization of every magnetization block.
    Exact,
    /// Ground state plus the one-magnon band, exact finite sums.
    Truncated,
    /// Saddle-point closed form.
    Gaussian,
}

impl Method {
    pub const ALL: [Method; 3] = [Method::Exact, Method::Truncated, Method::Gaussian];

    pub fn as_str(&self) -> &'static str {
        match self {
            Method::Exact => "exact",
            Method::Truncated => "truncated",
            Method::Gaussian => "gaussian",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exact" => Ok(Method::Exact),
            "truncated" => Ok(Method::Truncated),
            "gaussian" => Ok(Method::Gaussian),
            other => Err(Error::param(
                "method",
                format!("unknown method `{other}` (expected exact, truncated or gaussian)"),
            )),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProfilePoint {
    pub d: usize,
    pub c: f64,
}

/// Ordered `(distance, concurrence)` pairs with their provenance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConcurrenceProfile {
    params: ChainParams,
    method: Method,
    points: Vec<ProfilePoint>,
}

impl ConcurrenceProfile {
    pub fn new(params: ChainParams, method: Method, points: Vec<ProfilePoint>) -> Result<Self> {
        if points.windows(2).any(|w| w[0].d >= w[1].d) {
            return Err(Error::param(
                "distances",
                "distances must be strictly increasing",
            ));
        }
        if let Some(p) = points.iter().find(|p| !(0.0..=1.0).contains(&p.c)) {
            return Err(Error::Numerical(format!(
                "concurrence {} at d = {} lies outside [0, 1]",
                p.c, p.d
            )));
        }
        Ok(Self {
            params,
            method,
            points,
        })
    }

    pub fn params(&self) -> &ChainParams {
        &self.params
    }

    pub fn method(&self) -> Method {
        self.method
    }

    pub fn points(&self) -> &[ProfilePoint] {
        &self.points
    }

    pub fn concurrence(&self, d: usize) -> Option<f64> {
        self.points.iter().find(|p| p.d == d).map(|p| p.c)
    }
}

/// `1..=⌊N/2⌋`, every distinct ring separation.
pub fn default_distances(n_sites: usize) -> Vec<usize> {
    (1..=n_sites / 2).collect()
}

/// Profile from the exact thermal state, measured between site 0 and site `d`.
pub fn exact_profile(state: &ThermalState, distances: &[usize]) -> Result<ConcurrenceProfile> {
    let points = distances
        .iter()
        .map(|&d| {
            state.params().check_distance(d)?;
            let rdm = two_site_rdm_exact(state, 0, d)?;
            Ok(ProfilePoint {
                d,
                c: concurrence_xstate(&rdm),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    ConcurrenceProfile::new(*state.params(), Method::Exact, points)
}

pub fn truncated_profile(params: &ChainParams, distances: &[usize]) -> Result<ConcurrenceProfile> {
    let points = distances
        .iter()
        .map(|&d| {
            Ok(ProfilePoint {
                d,
                c: concurrence_xstate(&truncated_rdm(params, d)?),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    ConcurrenceProfile::new(*params, Method::Truncated, points)
}
