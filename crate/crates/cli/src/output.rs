//! Text, CSV and JSON renderings.

use serde::{Deserialize, Serialize};
use spinring::{ChainParams, ConcurrenceProfile, Method, ProfilePoint, TruncationReport};

pub const CSV_HEADER: &str = "distance,concurrence,method,n_sites,beta_j,beta_mub";

/// Twelve significant digits, scientific notation.
pub fn num(x: f64) -> String {
    format!("{x:.11e}")
}

pub fn profile_csv_rows(profile: &ConcurrenceProfile, out: &mut String) {
    let p = profile.params();
    for pt in profile.points() {
        out.push_str(&format!(
            "{},{},{},{},{},{}\n",
            pt.d,
            num(pt.c),
            profile.method(),
            p.n_sites(),
            num(p.beta_j()),
            num(p.beta_mub()),
        ));
    }
}

pub fn profiles_csv(profiles: &[ConcurrenceProfile]) -> String {
    let mut out = format!("{CSV_HEADER}\n");
    for p in profiles {
        profile_csv_rows(p, &mut out);
    }
    out
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Diagnostics {
    pub retained_weight: f64,
    pub leading_neglected_weight: f64,
    pub warnings: Vec<String>,
}

impl Diagnostics {
    pub fn new(report: TruncationReport, warnings: Vec<String>) -> Self {
        Self {
            retained_weight: report.retained_weight,
            leading_neglected_weight: report.leading_neglected_weight,
            warnings,
        }
    }
}

/// Serialized form of one profile.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProfileDocument {
    pub params: ChainParams,
    pub method: Method,
    pub points: Vec<ProfilePoint>,
    pub diagnostics: Diagnostics,
}

impl ProfileDocument {
    pub fn new(profile: &ConcurrenceProfile, diagnostics: Diagnostics) -> Self {
        Self {
            params: *profile.params(),
            method: profile.method(),
            points: profile.points().to_vec(),
            diagnostics,
        }
    }
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("output types serialize");
    s.push('\n');
    s
}
