//! Output plumbing: where files go, atomic writes, and the `M(N)` plot.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use crate::CliError;

/// Settings shared by every subcommand.
pub struct Ctx {
    pub json: bool,
    pub seed: u64,
    pub float: bool,
    pub out_dir: Option<PathBuf>,
}

impl Ctx {
    /// Relative output paths land in `--out-dir` when one is given.
    pub fn out_path(&self, p: &Path) -> PathBuf {
        match &self.out_dir {
            Some(dir) if p.is_relative() => dir.join(p),
            _ => p.to_path_buf(),
        }
    }

    /// Writes through a sibling temporary file and a rename, so readers
    /// never see a partial file.
    pub fn write(&self, p: &Path, contents: &str) -> Result<PathBuf, CliError> {
        let path = self.out_path(p);
        if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
            fs::create_dir_all(dir).map_err(|e| CliError::Internal(format!("{}: {e}", dir.display())))?;
        }
        let name = path.file_name().ok_or_else(|| CliError::Usage(format!("{} is not a file name", path.display())))?;
        let tmp = path.with_file_name(format!(".{}.tmp-{}", name.to_string_lossy(), std::process::id()));
        let io = |e: std::io::Error| CliError::Internal(format!("{}: {e}", path.display()));
        let mut f = fs::File::create(&tmp).map_err(io)?;
        f.write_all(contents.as_bytes()).map_err(io)?;
        f.sync_all().map_err(io)?;
        drop(f);
        fs::rename(&tmp, &path).map_err(io)?;
        Ok(path)
    }

    pub fn log_seed(&self) {
        eprintln!("seed = {}", self.seed);
    }
}

pub fn read(p: &Path) -> Result<String, CliError> {
    fs::read_to_string(p).map_err(|e| CliError::Usage(format!("cannot read {}: {e}", p.display())))
}

pub fn read_json(p: &Path) -> Result<serde_json::Value, CliError> {
    serde_json::from_str(&read(p)?).map_err(|e| CliError::Data(format!("{}: {e}", p.display())))
}

pub fn pretty(v: &serde_json::Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("JSON values always serialize");
    s.push('\n');
    s
}

/// `M(N)` against `log10 N` as a single polyline.
pub fn cesaro_svg(cesaro: &[f64]) -> String {
    let (w, h, pad) = (640.0, 400.0, 40.0);
    let top = cesaro.iter().copied().fold(0.0f64, f64::max).max(1e-300);
    let span = (cesaro.len() as f64).log10().max(1e-9);
    // thin out long curves: keep about 2000 log-spaced points
    let mut idx: Vec<usize> = (0..2000)
        .map(|i| ((10f64.powf(span * i as f64 / 1999.0)) as usize).clamp(1, cesaro.len()) - 1)
        .collect();
    idx.dedup();
    let pts: Vec<String> = idx
        .iter()
        .map(|&i| {
            let x = pad + (w - 2.0 * pad) * ((i + 1) as f64).log10() / span;
            let y = h - pad - (h - 2.0 * pad) * cesaro[i] / top;
            format!("{x:.2},{y:.2}")
        })
        .collect();
    format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{w}\" height=\"{h}\" viewBox=\"0 0 {w} {h}\">\n\
         <rect width=\"{w}\" height=\"{h}\" fill=\"white\"/>\n\
         <line x1=\"{pad}\" y1=\"{b}\" x2=\"{r}\" y2=\"{b}\" stroke=\"black\"/>\n\
         <line x1=\"{pad}\" y1=\"{pad}\" x2=\"{pad}\" y2=\"{b}\" stroke=\"black\"/>\n\
         <text x=\"{pad}\" y=\"{t}\" font-size=\"12\">M(N), max {top:.4}</text>\n\
         <text x=\"{r}\" y=\"{u}\" font-size=\"12\" text-anchor=\"end\">log10 N up to {span:.2}</text>\n\
         <polyline fill=\"none\" stroke=\"steelblue\" stroke-width=\"1.5\" points=\"{}\"/>\n</svg>\n",
        pts.join(" "),
        b = h - pad,
        r = w - pad,
        t = pad - 10.0,
        u = h - 12.0,
    )
}
