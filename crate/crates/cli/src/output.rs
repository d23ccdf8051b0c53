//! Output directory and artifact writers.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use fblab_core::potential::GridSolution;
use fblab_core::Vec3;

use crate::error::{CliError, CliResult};
use crate::manifest::{self, FileEntry, RunManifest};
use crate::params::Params;

pub fn unix_now() -> u64 {
    SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0)
}

/// Shortest round-trip decimal form; non-finite values as `inf`, `-inf`, `nan`.
pub fn num(x: f64) -> String {
    format!("{x}")
}

/// One run's output directory. Every artifact carries the manifest ID.
pub struct RunDir {
    pub path: PathBuf,
    pub manifest_id: String,
    pub seed: u64,
    files: Vec<String>,
    started: u64,
}

impl RunDir {
    pub fn create(path: &Path, manifest_id: String, seed: u64, force: bool) -> CliResult<Self> {
        if path.exists() {
            let occupied = !path.is_dir() || fs::read_dir(path)?.next().is_some();
            if occupied && !force {
                return Err(CliError::Collision(path.to_path_buf()));
            }
        }
        fs::create_dir_all(path)?;
        Ok(Self { path: path.to_path_buf(), manifest_id, seed, files: Vec::new(), started: unix_now() })
    }

    fn write(&mut self, name: &str, bytes: &[u8]) -> CliResult<PathBuf> {
        let p = self.path.join(name);
        fs::write(&p, bytes)?;
        if !self.files.iter().any(|f| f == name) {
            self.files.push(name.to_string());
        }
        Ok(p)
    }

    /// CSV with a header row; the first column is the manifest ID.
    pub fn csv(&mut self, name: &str, header: &[&str], rows: &[Vec<String>]) -> CliResult<PathBuf> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let mut head = vec!["manifest_id"];
        head.extend_from_slice(header);
        w.write_record(&head)?;
        for r in rows {
            if r.len() != header.len() {
                return Err(CliError::Io(std::io::Error::other(format!("{name}: row of {} fields for {} columns", r.len(), header.len()))));
            }
            let mut rec = vec![self.manifest_id.clone()];
            rec.extend(r.iter().cloned());
            w.write_record(&rec)?;
        }
        let bytes = w.into_inner().map_err(|e| CliError::Io(e.into_error()))?;
        self.write(name, &bytes)
    }

    pub fn ply(&mut self, name: &str, points: &[Vec3]) -> CliResult<PathBuf> {
        let bytes = ply_bytes(points, &self.manifest_id, self.seed);
        self.write(name, &bytes)
    }

    pub fn svg(&mut self, name: &str, doc: &str) -> CliResult<PathBuf> {
        self.write(name, doc.as_bytes())
    }

    pub fn text(&mut self, name: &str, text: &str) -> CliResult<PathBuf> {
        self.write(name, text.as_bytes())
    }

    pub fn grid(&mut self, name: &str, sol: &GridSolution) -> CliResult<PathBuf> {
        let bytes = grid_bytes(sol, &self.manifest_id, self.seed);
        self.write(name, &bytes)
    }

    /// Write `config.ini` and `manifest.json`; returns the manifest.
    pub fn finish(mut self, params: &Params, tolerance_tags: BTreeMap<String, String>) -> CliResult<RunManifest> {
        self.text("config.ini", &params.to_ini(self.seed))?;
        let mut files = Vec::new();
        for name in &self.files {
            let data = fs::read(self.path.join(name))?;
            files.push(FileEntry { path: name.clone(), sha256: manifest::sha256_hex(&data), bytes: data.len() as u64 });
        }
        let m = RunManifest {
            id: self.manifest_id.clone(),
            experiment: params.experiment.clone(),
            parameters: params.values.clone(),
            master_seed: self.seed,
            profile: manifest::profile_label(params),
            interpolation: manifest::interpolation(),
            tool_version: manifest::TOOL_VERSION.to_string(),
            csv_schema: manifest::CSV_SCHEMA,
            started_unix: self.started,
            finished_unix: unix_now(),
            tolerance_tags,
            files,
        };
        let json = serde_json::to_string_pretty(&m).map_err(|e| CliError::Io(e.into()))?;
        fs::write(self.path.join("manifest.json"), json + "\n")?;
        Ok(m)
    }
}

/// Binary little-endian PLY, positions only.
pub fn ply_bytes(points: &[Vec3], manifest_id: &str, seed: u64) -> Vec<u8> {
    let mut out = format!(
        "ply\nformat binary_little_endian 1.0\ncomment manifest {manifest_id}\ncomment seed {seed}\nelement vertex {}\nproperty double x\nproperty double y\nproperty double z\nend_header\n",
        points.len()
    )
    .into_bytes();
    out.reserve(points.len() * 24);
    for p in points {
        for c in [p.x, p.y, p.z] {
            out.extend_from_slice(&c.to_le_bytes());
        }
    }
    out
}

/// Read a PLY written by [`ply_bytes`]; returns the points and the manifest comment.
pub fn read_ply(path: &Path) -> CliResult<(Vec<Vec3>, Option<String>)> {
    let data = fs::read(path)?;
    let bad = |m: &str| CliError::MissingArtifact(format!("{}: {m}", path.display()));
    let marker = b"end_header\n";
    let end = data.windows(marker.len()).position(|w| w == marker).ok_or_else(|| bad("no PLY header"))? + marker.len();
    let header = std::str::from_utf8(&data[..end]).map_err(|_| bad("header is not UTF-8"))?;
    if !header.starts_with("ply\nformat binary_little_endian 1.0\n") {
        return Err(bad("not a binary little-endian PLY"));
    }
    let mut count = None;
    let mut manifest = None;
    let mut props = 0;
    for line in header.lines() {
        if let Some(n) = line.strip_prefix("element vertex ") {
            count = n.trim().parse::<usize>().ok();
        } else if let Some(id) = line.strip_prefix("comment manifest ") {
            manifest = Some(id.trim().to_string());
        } else if line.starts_with("property double ") {
            props += 1;
        } else if line.starts_with("property ") {
            return Err(bad("only double properties are supported"));
        }
    }
    let n = count.ok_or_else(|| bad("no vertex element"))?;
    if props != 3 || data.len() != end + n * 24 {
        return Err(bad("truncated vertex data"));
    }
    let f = |i: usize| f64::from_le_bytes(data[end + 8 * i..end + 8 * i + 8].try_into().unwrap());
    let points = (0..n).map(|i| Vec3::new(f(3 * i), f(3 * i + 1), f(3 * i + 2))).collect();
    Ok((points, manifest))
}

/// Flat binary grid: a text header ending in `end_header\n`, then `f64` values
/// and `u8` mask codes, both little-endian and x-fastest.
pub fn grid_bytes(sol: &GridSolution, manifest_id: &str, seed: u64) -> Vec<u8> {
    let g = &sol.grid;
    let mut out = format!(
        "fblab-grid 1\nmanifest {manifest_id}\nseed {seed}\ndims {} {} {}\norigin {} {} {}\nspacing {}\nmask 0=exterior 1=active 2=dirichlet\nlayout f64le values then u8 mask, x fastest\nend_header\n",
        g.dims[0], g.dims[1], g.dims[2], g.origin.x, g.origin.y, g.origin.z, g.h
    )
    .into_bytes();
    for v in &sol.values {
        out.extend_from_slice(&v.to_le_bytes());
    }
    out.extend_from_slice(&sol.mask);
    out
}
