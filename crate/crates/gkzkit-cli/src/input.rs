//! Input files, fixtures and their validation.

use gkzkit::arith::sign_pow;
use gkzkit::fan::{enhanced_fan, Fan};
use gkzkit::gkz::ModuliChart;
use gkzkit::intlat::{ivec, BraneData, IntVector, Polytope};
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub const FIXTURES: [(&str, &str); 3] = [
    ("quintic", include_str!("../fixtures/quintic.json")),
    ("p22211", include_str!("../fixtures/p22211.json")),
    ("p72221", include_str!("../fixtures/p72221.json")),
];

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("{pointer}: {message}")]
pub struct InputError {
    /// JSON pointer into the input document, empty for the whole document.
    pub pointer: String,
    pub message: String,
}

impl InputError {
    pub fn new(pointer: impl Into<String>, message: impl Into<String>) -> Self {
        InputError { pointer: pointer.into(), message: message.into() }
    }
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct ToricInput {
    pub name: String,
    /// Integral points, origin first.
    pub points: Vec<Vec<i64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weights: Option<Vec<i64>>,
    pub fan: FanSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub brane: Option<BraneSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub chart: Option<ChartSpec>,
    #[serde(default)]
    pub options: Options,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct FanSpec {
    /// Maximal cones as indices into `points`.
    pub max_cones: Vec<Vec<usize>>,
    #[serde(default = "yes")]
    pub complete: bool,
}

fn yes() -> bool {
    true
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct BraneSpec {
    pub q: Vec<i64>,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct ChartSpec {
    pub basis: Vec<Vec<i64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub signs: Option<Vec<i64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub names: Option<Vec<String>>,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq, Default)]
#[serde(deny_unknown_fields)]
pub struct Options {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub order: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t_exp: Option<u32>,
}

fn pointer_of(path: &serde_path_to_error::Path) -> String {
    use serde_path_to_error::Segment;
    let mut out = String::new();
    for seg in path.iter() {
        match seg {
            Segment::Seq { index } => out.push_str(&format!("/{index}")),
            Segment::Map { key } => out.push_str(&format!("/{}", key.replace('~', "~0").replace('/', "~1"))),
            Segment::Enum { variant } => out.push_str(&format!("/{variant}")),
            Segment::Unknown => {}
        }
    }
    out
}

pub fn parse(text: &str) -> Result<ToricInput, InputError> {
    let de = &mut serde_json::Deserializer::from_str(text);
    let input: ToricInput = serde_path_to_error::deserialize(de).map_err(|e| {
        let pointer = pointer_of(e.path());
        InputError::new(pointer, e.into_inner().to_string())
    })?;
    input.validate()?;
    Ok(input)
}

pub fn fixture(name: &str) -> Result<ToricInput, InputError> {
    let (_, text) = FIXTURES
        .iter()
        .find(|(n, _)| *n == name)
        .ok_or_else(|| InputError::new("", format!("unknown fixture '{name}' (expected quintic, p22211 or p72221)")))?;
    parse(text)
}

impl ToricInput {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("plain data")
    }

    /// Number of entries in a relation vector of the working configuration.
    pub fn ambient(&self) -> usize {
        self.points.len() + if self.brane.is_some() { 2 } else { 0 }
    }

    pub fn validate(&self) -> Result<(), InputError> {
        let Some(first) = self.points.first() else {
            return Err(InputError::new("/points", "at least one point is required"));
        };
        let dim = first.len();
        for (i, p) in self.points.iter().enumerate() {
            if p.len() != dim {
                return Err(InputError::new(format!("/points/{i}"), format!("expected {dim} coordinates")));
            }
        }
        if first.iter().any(|x| *x != 0) {
            return Err(InputError::new("/points/0", "the first point must be the origin"));
        }
        if let Some(w) = &self.weights {
            if w.len() != dim + 1 || w.iter().any(|x| *x <= 0) {
                return Err(InputError::new("/weights", format!("expected {} positive weights", dim + 1)));
            }
        }
        for (i, c) in self.fan.max_cones.iter().enumerate() {
            for (j, k) in c.iter().enumerate() {
                if *k == 0 || *k >= self.points.len() {
                    return Err(InputError::new(
                        format!("/fan/max_cones/{i}/{j}"),
                        format!("point index {k} out of range 1..{}", self.points.len() - 1),
                    ));
                }
            }
        }
        if let Some(b) = &self.brane {
            if b.q.len() != self.points.len() {
                return Err(InputError::new("/brane/q", format!("expected {} entries", self.points.len())));
            }
            if b.q.iter().sum::<i64>() != 0 {
                return Err(InputError::new("/brane/q", "entries must sum to zero"));
            }
        }
        if let Some(c) = &self.chart {
            let n = self.ambient();
            for (i, v) in c.basis.iter().enumerate() {
                if v.len() != n {
                    return Err(InputError::new(format!("/chart/basis/{i}"), format!("expected {n} entries")));
                }
            }
            if c.signs.as_ref().is_some_and(|s| s.len() != c.basis.len()) {
                return Err(InputError::new("/chart/signs", "one sign per basis vector"));
            }
            if c.names.as_ref().is_some_and(|s| s.len() != c.basis.len()) {
                return Err(InputError::new("/chart/names", "one name per basis vector"));
            }
        }
        Ok(())
    }
}

/// Validated geometric data; the working configuration is the enhanced one
/// when a brane is present.
pub struct Model {
    pub input: ToricInput,
    pub base: Polytope,
    pub base_fan: Fan,
    pub brane: Option<BraneData>,
    pub polytope: Polytope,
    pub fan: Fan,
}

impl Model {
    pub fn build(input: ToricInput) -> Result<Self, InputError> {
        let base = Polytope::reflexive_style(input.points.iter().map(|p| ivec(p)).collect())
            .map_err(|e| InputError::new("/points", e.to_string()))?;
        let rays: Vec<IntVector> = base.points()[1..].to_vec();
        let cones = input.fan.max_cones.iter().map(|c| c.iter().map(|k| k - 1).collect()).collect();
        let base_fan = Fan::new(rays, cones, input.fan.complete).map_err(|e| InputError::new("/fan", e.to_string()))?;
        let (brane, polytope, fan) = match &input.brane {
            None => (None, base.clone(), base_fan.clone()),
            Some(b) => {
                let brane = BraneData::from_i64(&b.q).map_err(|e| InputError::new("/brane/q", e.to_string()))?;
                let polytope = gkzkit::intlat::enhance_polytope(&base, &brane)
                    .map_err(|e| InputError::new("/brane/q", e.to_string()))?;
                let fan = enhanced_fan(&base_fan, &base, &brane).map_err(|e| InputError::new("/brane", e.to_string()))?;
                (Some(brane), polytope, fan)
            }
        };
        Ok(Model { input, base, base_fan, brane, polytope, fan })
    }

    /// Chart from `--chart` (semicolon-separated relation vectors), the file,
    /// or the canonical lattice basis, in that order of preference.
    pub fn chart(&self, flag: Option<&str>) -> Result<ModuliChart, InputError> {
        let n = self.polytope.len();
        if let Some(text) = flag {
            let mut basis = Vec::new();
            for (i, part) in text.split(';').enumerate() {
                let v: Result<Vec<i64>, _> = part.split(',').map(|x| x.trim().parse::<i64>()).collect();
                let v = v.map_err(|_| InputError::new(format!("--chart/{i}"), "expected comma-separated integers"))?;
                if v.len() != n {
                    return Err(InputError::new(format!("--chart/{i}"), format!("expected {n} entries")));
                }
                basis.push(ivec(&v));
            }
            return standard_chart(basis).map_err(|m| InputError::new("--chart", m));
        }
        match &self.input.chart {
            Some(c) => {
                let basis: Vec<IntVector> = c.basis.iter().map(|v| ivec(v)).collect();
                let signs = c.signs.clone().unwrap_or_else(|| basis.iter().map(|b| sign_pow(&b[0])).collect());
                let names = c.names.clone().unwrap_or_else(|| default_names(basis.len()));
                ModuliChart::new(basis, signs, names).map_err(|e| InputError::new("/chart", e.to_string()))
            }
            None => standard_chart(self.polytope.relation_lattice().basis().to_vec()).map_err(|m| InputError::new("", m)),
        }
    }

    pub fn order(&self, flag: Option<u32>) -> u32 {
        flag.or(self.input.options.order).unwrap_or(8)
    }
}

fn default_names(n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("x{i}")).collect()
}

fn standard_chart(basis: Vec<IntVector>) -> Result<ModuliChart, String> {
    let names = default_names(basis.len());
    ModuliChart::standard(basis, names).map_err(|e| e.to_string())
}

/// Reads an integer vector entry back as `i64` for JSON output.
pub fn int_vec(v: &[gkzkit::arith::Int]) -> Vec<serde_json::Value> {
    v.iter()
        .map(|x| match gkzkit::arith::to_i64(x) {
            Some(k) => serde_json::Value::from(k),
            None => serde_json::Value::from(x.to_string()),
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixtures_round_trip() {
        for (name, _) in FIXTURES {
            let a = fixture(name).unwrap();
            let b = parse(&a.to_json()).unwrap();
            assert_eq!(a, b, "{name}");
            assert!(Model::build(a).is_ok(), "{name}");
        }
    }

    #[test]
    fn schema_errors_carry_pointers() {
        let mut v: serde_json::Value = serde_json::from_str(FIXTURES[0].1).unwrap();
        v["fan"]["max_cones"][2][1] = serde_json::Value::from("x");
        let e = parse(&v.to_string()).unwrap_err();
        assert_eq!(e.pointer, "/fan/max_cones/2/1");
        let mut v: serde_json::Value = serde_json::from_str(FIXTURES[0].1).unwrap();
        v["fan"]["max_cones"][0][3] = serde_json::Value::from(17);
        assert_eq!(parse(&v.to_string()).unwrap_err().pointer, "/fan/max_cones/0/3");
        let mut v: serde_json::Value = serde_json::from_str(FIXTURES[0].1).unwrap();
        v["brane"]["q"] = serde_json::json!([1, 0]);
        assert_eq!(parse(&v.to_string()).unwrap_err().pointer, "/brane/q");
    }

    #[test]
    fn chart_flag_is_parsed() {
        let m = Model::build(fixture("quintic").unwrap()).unwrap();
        let c = m.chart(Some("-5,1,1,1,1,1,0,0; -1,0,0,0,0,1,1,-1")).unwrap();
        assert_eq!(c.rank(), 2);
        assert_eq!(m.chart(Some("1,2")).unwrap_err().pointer, "--chart/0");
    }
}
