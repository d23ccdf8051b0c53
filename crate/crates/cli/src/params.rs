//! Layered experiment parameters: defaults, then the config file, then flags.

use std::collections::BTreeMap;
use std::path::Path;

use fblab_core::fields::{DomainKind, GraphAmplitude, TwistLaw, TwistProfile};
use fblab_core::{Side, Vec3};
use ini::Ini;

use crate::error::{CliError, CliResult};

#[derive(Clone, Copy, Debug)]
pub struct ParamDef {
    pub key: &'static str,
    pub default: &'static str,
    pub help: &'static str,
}

pub const fn p(key: &'static str, default: &'static str, help: &'static str) -> ParamDef {
    ParamDef { key, default, help }
}

/// Keys accepted in the `[global]` section.
pub const GLOBAL_KEYS: &[&str] = &["seed", "threads"];

pub fn load_config(path: &Path) -> CliResult<Ini> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
    Ini::load_from_str(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
}

/// Effective parameters of one experiment.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Params {
    pub experiment: String,
    pub values: BTreeMap<String, String>,
}

impl Params {
    pub fn resolve(experiment: &str, defs: &[ParamDef], file: Option<&Ini>, flags: &[(String, String)]) -> CliResult<Self> {
        let mut values: BTreeMap<String, String> =
            defs.iter().map(|d| (d.key.to_string(), d.default.to_string())).collect();
        if let Some(ini) = file {
            for (section, props) in ini.iter() {
                match section {
                    None => {
                        if props.iter().next().is_some() {
                            return Err(CliError::Config("keys outside a [section]".into()));
                        }
                    }
                    Some("global") => {
                        if let Some((k, _)) = props.iter().find(|(k, _)| !GLOBAL_KEYS.contains(k)) {
                            return Err(CliError::Config(format!("unknown key '{k}' in [global]")));
                        }
                    }
                    Some(s) if s == experiment => {
                        for (k, v) in props.iter() {
                            if !values.contains_key(k) {
                                return Err(CliError::Config(format!("unknown key '{k}' in [{s}]")));
                            }
                            values.insert(k.to_string(), v.trim().to_string());
                        }
                    }
                    Some(_) => {}
                }
            }
        }
        for (k, v) in flags {
            values.insert(k.clone(), v.trim().to_string());
        }
        Ok(Self { experiment: experiment.to_string(), values })
    }

    pub fn str(&self, key: &str) -> &str {
        self.values.get(key).map(String::as_str).unwrap_or("")
    }

    fn parse<T: std::str::FromStr>(&self, key: &str, what: &str) -> CliResult<T> {
        self.str(key).parse().map_err(|_| CliError::param(key, format!("expected {what}, got '{}'", self.str(key))))
    }

    pub fn f64(&self, key: &str) -> CliResult<f64> {
        let v: f64 = self.parse(key, "a number")?;
        if !v.is_finite() {
            return Err(CliError::param(key, "must be finite"));
        }
        Ok(v)
    }

    pub fn positive(&self, key: &str) -> CliResult<f64> {
        let v = self.f64(key)?;
        if v <= 0.0 {
            return Err(CliError::param(key, format!("must be positive, got {v}")));
        }
        Ok(v)
    }

    pub fn optional_f64(&self, key: &str) -> CliResult<Option<f64>> {
        match self.str(key) {
            "" | "none" | "auto" => Ok(None),
            _ => self.f64(key).map(Some),
        }
    }

    pub fn usize(&self, key: &str) -> CliResult<usize> {
        // accept 1e6-style counts
        let v = self.f64(key)?;
        if v < 0.0 || v.fract() != 0.0 || v > 1e15 {
            return Err(CliError::param(key, format!("expected a nonnegative integer, got '{}'", self.str(key))));
        }
        Ok(v as usize)
    }

    pub fn bool(&self, key: &str) -> CliResult<bool> {
        match self.str(key) {
            "true" | "yes" | "1" | "on" => Ok(true),
            "false" | "no" | "0" | "off" => Ok(false),
            o => Err(CliError::param(key, format!("expected true or false, got '{o}'"))),
        }
    }

    pub fn f64_list(&self, key: &str) -> CliResult<Vec<f64>> {
        let out: CliResult<Vec<f64>> = self
            .str(key)
            .split(',')
            .map(|s| {
                s.trim()
                    .parse::<f64>()
                    .ok()
                    .filter(|v| v.is_finite())
                    .ok_or_else(|| CliError::param(key, format!("bad list entry '{}'", s.trim())))
            })
            .collect();
        let out = out?;
        if out.is_empty() {
            return Err(CliError::param(key, "empty list"));
        }
        Ok(out)
    }

    /// Comma-separated integers; `a..b` expands inclusively.
    pub fn i64_list(&self, key: &str) -> CliResult<Vec<i64>> {
        let bad = |s: &str| CliError::param(key, format!("bad integer list entry '{s}'"));
        let mut out = Vec::new();
        for part in self.str(key).split(',').map(str::trim) {
            if let Some((a, b)) = part.split_once("..") {
                let a: i64 = a.trim().parse().map_err(|_| bad(part))?;
                let b: i64 = b.trim().parse().map_err(|_| bad(part))?;
                if b < a || b - a > 10_000 {
                    return Err(bad(part));
                }
                out.extend(a..=b);
            } else {
                out.push(part.parse().map_err(|_| bad(part))?);
            }
        }
        Ok(out)
    }

    /// `a:b`, with `a <= b`.
    pub fn range(&self, key: &str) -> CliResult<(f64, f64)> {
        let s = self.str(key);
        let (a, b) = s.split_once(':').ok_or_else(|| CliError::param(key, format!("expected a:b, got '{s}'")))?;
        let a: f64 = a.trim().parse().map_err(|_| CliError::param(key, format!("bad range '{s}'")))?;
        let b: f64 = b.trim().parse().map_err(|_| CliError::param(key, format!("bad range '{s}'")))?;
        if !(a.is_finite() && b.is_finite() && a <= b) {
            return Err(CliError::param(key, format!("bad range '{s}'")));
        }
        Ok((a, b))
    }

    /// `10^a, ..., 10^b` with `per_decade` points per decade.
    pub fn decades(&self, key: &str, per_decade: usize) -> CliResult<Vec<f64>> {
        let (a, b) = self.range(key)?;
        if per_decade == 0 {
            return Err(CliError::param("per-decade", "must be at least 1"));
        }
        let n = ((b - a) * per_decade as f64).round() as usize;
        Ok((0..=n).map(|i| 10f64.powf(a + i as f64 / per_decade as f64)).collect())
    }

    pub fn vec3(&self, key: &str) -> CliResult<Vec3> {
        let v = self.f64_list(key)?;
        if v.len() != 3 {
            return Err(CliError::param(key, "expected three comma-separated numbers"));
        }
        Ok(Vec3::new(v[0], v[1], v[2]))
    }

    pub fn side(&self) -> CliResult<Side> {
        self.str("side").parse().map_err(|_| CliError::param("side", "expected plus or minus"))
    }

    pub fn profile(&self) -> CliResult<TwistProfile> {
        let law: TwistLaw = self.str("profile").parse().map_err(|e: fblab_core::Error| CliError::param("profile", e.to_string()))?;
        Ok(TwistProfile::new(law))
    }

    pub fn amplitude(&self) -> CliResult<GraphAmplitude> {
        self.str("amplitude").parse().map_err(|e: fblab_core::Error| CliError::param("amplitude", e.to_string()))
    }

    pub fn domain(&self) -> CliResult<DomainKind> {
        match self.str("domain") {
            "twist" | "szulkin" => Ok(DomainKind::TwistedSzulkin(self.profile()?)),
            "graph" => Ok(DomainKind::OscillatingGraph(self.amplitude()?)),
            o => Err(CliError::param("domain", format!("expected twist or graph, got '{o}'"))),
        }
    }

    /// The effective configuration as an INI document that reproduces this run.
    pub fn to_ini(&self, seed: u64) -> String {
        let mut out = format!("[global]\nseed = {seed}\n\n[{}]\n", self.experiment);
        for (k, v) in &self.values {
            out.push_str(&format!("{k} = {v}\n"));
        }
        out
    }
}
