//! CSV output with 15 significant digits under a configurable root.

use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use sgn_core::{GaugeRecord, Profile, StepRecord};

/// Environment variable overriding the output root (default: current directory).
pub const OUTPUT_ROOT_VAR: &str = "SGN_OUTPUT_ROOT";

/// Significant digits of every floating-point CSV field.
pub const SIG_DIGITS: usize = 15;

pub fn output_root() -> PathBuf {
    std::env::var_os(OUTPUT_ROOT_VAR).map_or_else(|| PathBuf::from("."), PathBuf::from)
}

/// `dir` under the output root (absolute paths are kept).
pub fn resolve(dir: &Path) -> PathBuf {
    if dir.is_absolute() {
        dir.to_path_buf()
    } else {
        output_root().join(dir)
    }
}

/// `%.15g`: fixed notation for moderate exponents, scientific otherwise,
/// trailing zeros trimmed.
pub fn fmt_sig(v: f64) -> String {
    if v == 0.0 {
        return "0".into();
    }
    if !v.is_finite() {
        return format!("{v}");
    }
    let sci = format!("{:.*e}", SIG_DIGITS - 1, v);
    let (mantissa, exp) = sci.split_once('e').unwrap();
    let exp: i32 = exp.parse().unwrap();
    if (-5..SIG_DIGITS as i32).contains(&exp) {
        let decimals = (SIG_DIGITS as i32 - 1 - exp).max(0) as usize;
        trim(format!("{v:.decimals$}"))
    } else {
        format!("{}e{exp}", trim(mantissa.to_string()))
    }
}

fn trim(s: String) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}

/// A CSV writer that creates its parent directory.
pub struct Table {
    writer: csv::Writer<std::fs::File>,
    path: PathBuf,
}

impl Table {
    pub fn create(path: &Path, header: &[&str]) -> Result<Self> {
        if let Some(parent) = path.parent() {
            std::fs::create_dir_all(parent).with_context(|| format!("cannot create {}", parent.display()))?;
        }
        let mut writer = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_path(path)
            .with_context(|| format!("cannot write {}", path.display()))?;
        writer.write_record(header)?;
        Ok(Self { writer, path: path.to_path_buf() })
    }

    pub fn row(&mut self, fields: &[Field]) -> Result<()> {
        self.writer.write_record(fields.iter().map(Field::render))?;
        Ok(())
    }

    pub fn finish(mut self) -> Result<PathBuf> {
        self.writer.flush()?;
        Ok(self.path)
    }
}

/// One CSV cell.
pub enum Field {
    Num(f64),
    Int(usize),
    Text(String),
}

impl Field {
    fn render(&self) -> String {
        match self {
            Field::Num(v) => fmt_sig(*v),
            Field::Int(v) => v.to_string(),
            Field::Text(s) => s.clone(),
        }
    }
}

impl From<f64> for Field {
    fn from(v: f64) -> Self {
        Field::Num(v)
    }
}

impl From<usize> for Field {
    fn from(v: usize) -> Self {
        Field::Int(v)
    }
}

impl From<&str> for Field {
    fn from(v: &str) -> Self {
        Field::Text(v.to_string())
    }
}

impl From<Option<f64>> for Field {
    fn from(v: Option<f64>) -> Self {
        v.map_or(Field::Text(String::new()), Field::Num)
    }
}

/// Columns `x,h,u,eta,w,b,zeta`.
pub fn write_profile(path: &Path, p: &Profile) -> Result<PathBuf> {
    let mut t = Table::create(path, &["x", "h", "u", "eta", "w", "b", "zeta"])?;
    for i in 0..p.x.len() {
        t.row(&[p.x[i].into(), p.h[i].into(), p.u[i].into(), p.eta[i].into(), p.w[i].into(), p.b[i].into(), (p.h[i] + p.b[i]).into()])?;
    }
    t.finish()
}

/// Columns `t,<x of each gauge>`; every gauge shares the step times.
pub fn write_gauges(path: &Path, gauges: &[GaugeRecord]) -> Result<PathBuf> {
    let names: Vec<String> = gauges.iter().map(|g| format!("zeta@{}", fmt_sig(g.x_gauge))).collect();
    let mut header = vec!["t"];
    header.extend(names.iter().map(String::as_str));
    let mut t = Table::create(path, &header)?;
    if let Some(first) = gauges.first() {
        for k in 0..first.times.len() {
            let mut row: Vec<Field> = vec![first.times[k].into()];
            row.extend(gauges.iter().map(|g| Field::Num(g.surface_elevation[k])));
            t.row(&row)?;
        }
    }
    t.finish()
}

/// Columns `t,dt,cfl,mcfl,kappa_min`.
pub fn write_steps(path: &Path, steps: &[StepRecord]) -> Result<PathBuf> {
    let mut t = Table::create(path, &["t", "dt", "cfl", "mcfl", "kappa_min"])?;
    for s in steps {
        t.row(&[s.t.into(), s.dt.into(), s.cfl.into(), s.mcfl.into(), s.kappa_min.into()])?;
    }
    t.finish()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fifteen_significant_digits() {
        assert_eq!(fmt_sig(0.0), "0");
        assert_eq!(fmt_sig(1.0), "1");
        assert_eq!(fmt_sig(-2.5), "-2.5");
        assert_eq!(fmt_sig(std::f64::consts::PI), "3.14159265358979");
        assert_eq!(fmt_sig(1.0 / 3.0), "0.333333333333333");
        assert_eq!(fmt_sig(123456.789), "123456.789");
        assert_eq!(fmt_sig(1e-7), "1e-7");
        assert_eq!(fmt_sig(2.0 / 3.0 * 1e-9), "6.66666666666667e-10");
        assert_eq!(fmt_sig(1e20), "1e20");
        assert_eq!(fmt_sig(0.0001234), "0.0001234");
    }

    #[test]
    fn round_trip_within_precision() {
        for v in [9.81, 1.0 / 7.0, -3.3e-12, 6.02e23, 0.1 + 0.2] {
            let back: f64 = fmt_sig(v).parse().unwrap();
            assert!((back - v).abs() <= 5e-15 * v.abs(), "{v} {back}");
        }
    }
}
