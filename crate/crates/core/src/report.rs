//! CSV / JSON persistence, the log-log least-squares fit of r(N), and SVG
//! scatter charts.

use std::fmt::Write as _;
use std::fs::File;
use std::io::{BufWriter, Read, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::goldbach::RepSeries;
use crate::invariant_suite::InvariantRecord;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegressionFit {
    pub slope: f64,
    pub intercept: f64,
    pub n_points: usize,
    pub residual_mean: f64,
    pub residual_std: f64,
    /// Mean residual over points with N prime; NaN when there are none.
    pub prime_subset_mean_residual: f64,
    /// N in range left out because r(N) = 0.
    pub excluded: Vec<u64>,
}

impl RegressionFit {
    pub fn predict_ln(&self, ln_n: f64) -> f64 {
        self.slope * ln_n + self.intercept
    }
}

/// Ordinary least squares `y = slope·x + intercept`.
pub fn ols(points: &[(f64, f64)]) -> Result<(f64, f64)> {
    if points.len() < 2 {
        return Err(Error::Fit(points.len()));
    }
    let k = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / k;
    let my = points.iter().map(|p| p.1).sum::<f64>() / k;
    let (mut sxy, mut sxx) = (0.0, 0.0);
    for &(x, y) in points {
        sxy += (x - mx) * (y - my);
        sxx += (x - mx) * (x - mx);
    }
    if sxx == 0.0 {
        return Err(Error::Domain("all x values coincide".into()));
    }
    let slope = sxy / sxx;
    Ok((slope, my - slope * mx))
}

/// Least-squares line through `(ln N, ln r(N))` for odd N in `[n_lo, n_hi]`.
pub fn fit_loglog(
    series: &RepSeries,
    n_lo: u64,
    n_hi: u64,
    is_prime: impl Fn(u64) -> bool,
) -> Result<RegressionFit> {
    let mut excluded = Vec::new();
    let mut pts = Vec::new();
    for (&n, &r) in series.counts.range(n_lo..=n_hi) {
        if r == 0 {
            excluded.push(n);
        } else {
            pts.push((n, (n as f64).ln(), (r as f64).ln()));
        }
    }
    let xy: Vec<(f64, f64)> = pts.iter().map(|&(_, x, y)| (x, y)).collect();
    let (slope, intercept) = ols(&xy)?;
    let resid: Vec<(u64, f64)> = pts
        .iter()
        .map(|&(n, x, y)| (n, y - (slope * x + intercept)))
        .collect();
    let k = resid.len() as f64;
    let residual_mean = resid.iter().map(|r| r.1).sum::<f64>() / k;
    let residual_std = (resid
        .iter()
        .map(|r| (r.1 - residual_mean).powi(2))
        .sum::<f64>()
        / k)
        .sqrt();
    let prime: Vec<f64> = resid
        .iter()
        .filter(|r| is_prime(r.0))
        .map(|r| r.1)
        .collect();
    let prime_subset_mean_residual = if prime.is_empty() {
        f64::NAN
    } else {
        prime.iter().sum::<f64>() / prime.len() as f64
    };
    Ok(RegressionFit {
        slope,
        intercept,
        n_points: pts.len(),
        residual_mean,
        residual_std,
        prime_subset_mean_residual,
        excluded,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeriesRow {
    #[serde(rename = "N")]
    pub n: u64,
    pub r: u64,
    pub is_prime: bool,
}

pub fn series_rows(series: &RepSeries, is_prime: impl Fn(u64) -> bool) -> Vec<SeriesRow> {
    series
        .counts
        .iter()
        .map(|(&n, &r)| SeriesRow {
            n,
            r,
            is_prime: is_prime(n),
        })
        .collect()
}

/// Header + one row per item, LF line endings.
pub fn write_csv<T: Serialize, W: Write>(out: W, header: &[&str], rows: &[T]) -> csv::Result<()> {
    let mut w = csv::WriterBuilder::new()
        .has_headers(false)
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(out);
    w.write_record(header)?;
    for r in rows {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

pub const RECORD_HEADER: [&str; 7] = ["n", "p", "f", "g", "e", "u", "s"];
pub const SERIES_HEADER: [&str; 3] = ["N", "r", "is_prime"];

pub fn read_csv<T: for<'de> Deserialize<'de>, R: Read>(input: R) -> csv::Result<Vec<T>> {
    csv::Reader::from_reader(input).deserialize().collect()
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    File::create(path)
        .map(BufWriter::new)
        .map_err(|e| Error::io(path, e))
}

fn csv_err(path: &Path, e: csv::Error) -> Error {
    Error::Format {
        path: path.to_path_buf(),
        message: e.to_string(),
    }
}

pub fn emit_records_csv(records: &[InvariantRecord], path: &Path) -> Result<()> {
    write_csv(create(path)?, &RECORD_HEADER, records).map_err(|e| csv_err(path, e))
}

pub fn emit_series_csv(rows: &[SeriesRow], path: &Path) -> Result<()> {
    write_csv(create(path)?, &SERIES_HEADER, rows).map_err(|e| csv_err(path, e))
}

pub fn load_records_csv(path: &Path) -> Result<Vec<InvariantRecord>> {
    let f = File::open(path).map_err(|e| Error::io(path, e))?;
    read_csv(f).map_err(|e| csv_err(path, e))
}

pub fn load_series_csv(path: &Path) -> Result<Vec<SeriesRow>> {
    let f = File::open(path).map_err(|e| Error::io(path, e))?;
    read_csv(f).map_err(|e| csv_err(path, e))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Meta {
    pub kind: String,
    pub range: (u64, u64),
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub window: Option<String>,
    pub version: String,
}

impl Meta {
    pub fn new(kind: &str, range: (u64, u64), window: Option<String>) -> Self {
        Meta {
            kind: kind.to_owned(),
            range,
            window,
            version: VERSION.to_owned(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Document<T> {
    pub meta: Meta,
    pub rows: Vec<T>,
}

pub fn to_json<T: Serialize>(meta: Meta, rows: &[T]) -> String {
    #[derive(Serialize)]
    struct Doc<'a, T> {
        meta: Meta,
        rows: &'a [T],
    }
    let mut s = serde_json::to_string_pretty(&Doc { meta, rows }).expect("plain data serializes");
    s.push('\n');
    s
}

pub fn emit_json<T: Serialize>(meta: Meta, rows: &[T], path: &Path) -> Result<()> {
    let mut w = create(path)?;
    w.write_all(to_json(meta, rows).as_bytes())
        .and_then(|_| w.flush())
        .map_err(|e| Error::io(path, e))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ChartMode {
    Linear,
    LogLog,
}

const WIDTH: f64 = 960.0;
const HEIGHT: f64 = 640.0;
const LEFT: f64 = 80.0;
const RIGHT: f64 = 30.0;
const TOP: f64 = 40.0;
const BOTTOM: f64 = 60.0;
const NEUTRAL: &str = "#4d4d4d";
const PRIME: &str = "#d62728";
const FIT: &str = "#2ca02c";

struct Axis {
    lo: f64,
    hi: f64,
    log: bool,
}

impl Axis {
    fn new(lo: f64, hi: f64, log: bool) -> Self {
        let (lo, hi) = if log { (lo.ln(), hi.ln()) } else { (lo, hi) };
        let (lo, hi) = if hi > lo {
            (lo, hi)
        } else {
            let pad = if lo == 0.0 { 1.0 } else { lo.abs() * 0.1 };
            (lo - pad, hi + pad)
        };
        Axis { lo, hi, log }
    }

    /// Value (already in axis space) to [0, 1].
    fn frac(&self, v: f64) -> f64 {
        (v - self.lo) / (self.hi - self.lo)
    }

    fn to_axis(&self, v: f64) -> f64 {
        if self.log {
            v.ln()
        } else {
            v
        }
    }

    /// Tick values in data space.
    fn ticks(&self) -> Vec<f64> {
        if self.log {
            let (lo, hi) = (self.lo.exp(), self.hi.exp());
            let mut out = Vec::new();
            let mut decade = 10f64.powi(lo.log10().floor() as i32);
            while decade <= hi * 1.000_001 {
                for m in [1.0, 2.0, 5.0] {
                    let v = decade * m;
                    if v >= lo * 0.999_999 && v <= hi * 1.000_001 {
                        out.push(v);
                    }
                }
                decade *= 10.0;
            }
            if out.len() < 2 {
                out = vec![lo, hi];
            }
            out
        } else {
            let span = self.hi - self.lo;
            let raw = span / 6.0;
            let mag = 10f64.powf(raw.log10().floor());
            let step = [1.0, 2.0, 5.0, 10.0]
                .into_iter()
                .map(|m| m * mag)
                .find(|&s| s >= raw)
                .unwrap_or(10.0 * mag);
            let mut v = (self.lo / step).ceil() * step;
            let mut out = Vec::new();
            while v <= self.hi + step * 1e-9 {
                out.push(v);
                v += step;
            }
            out
        }
    }
}

fn fmt_tick(v: f64) -> String {
    if (v - v.round()).abs() < 1e-9 {
        format!("{}", v.round() as i64)
    } else {
        format!("{v:.2}")
    }
}

/// Standalone SVG scatter of `(N, r(N))`. Prime N are drawn red on top of the
/// neutral points; `fit` adds the green least-squares line (log-log only).
pub fn render_chart(
    series: &RepSeries,
    mode: ChartMode,
    fit: Option<&RegressionFit>,
    is_prime: impl Fn(u64) -> bool,
) -> Result<String> {
    let log = mode == ChartMode::LogLog;
    let pts: Vec<(u64, u64)> = series
        .counts
        .iter()
        .filter(|&(_, &r)| !log || r > 0)
        .map(|(&n, &r)| (n, r))
        .collect();
    if pts.is_empty() {
        return Err(Error::Domain("nothing to plot".into()));
    }
    let (n_min, n_max) = (pts[0].0 as f64, pts[pts.len() - 1].0 as f64);
    let r_max = pts.iter().map(|p| p.1).max().expect("nonempty") as f64;
    let r_min = pts.iter().map(|p| p.1).min().expect("nonempty") as f64;
    let x = Axis::new(n_min, n_max, log);
    let y = if log {
        Axis::new(r_min, r_max, true)
    } else {
        Axis::new(0.0, r_max, false)
    };
    let pw = WIDTH - LEFT - RIGHT;
    let ph = HEIGHT - TOP - BOTTOM;
    let sx = |v: f64| LEFT + x.frac(v) * pw;
    let sy = |v: f64| TOP + (1.0 - y.frac(v)) * ph;

    let mut s = String::new();
    let title = if log {
        "log-log diagram of r(N)"
    } else {
        "number r(N) of representations"
    };
    writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">"#
    )
    .unwrap();
    writeln!(
        s,
        r#"<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#
    )
    .unwrap();
    writeln!(
        s,
        r#"<text x="{:.1}" y="24" font-family="sans-serif" font-size="16" text-anchor="middle">{title}</text>"#,
        WIDTH / 2.0
    )
    .unwrap();
    // axes
    writeln!(
        s,
        r#"<g stroke="black" stroke-width="1"><line x1="{LEFT}" y1="{:.1}" x2="{:.1}" y2="{:.1}"/><line x1="{LEFT}" y1="{TOP}" x2="{LEFT}" y2="{:.1}"/></g>"#,
        TOP + ph,
        LEFT + pw,
        TOP + ph,
        TOP + ph
    )
    .unwrap();
    s.push_str(r#"<g font-family="sans-serif" font-size="11" fill="black">"#);
    s.push('\n');
    for t in x.ticks() {
        let px = sx(x.to_axis(t));
        writeln!(
            s,
            r#"<line x1="{px:.1}" y1="{:.1}" x2="{px:.1}" y2="{:.1}" stroke="black"/><text x="{px:.1}" y="{:.1}" text-anchor="middle">{}</text>"#,
            TOP + ph,
            TOP + ph + 5.0,
            TOP + ph + 18.0,
            fmt_tick(t)
        )
        .unwrap();
    }
    for t in y.ticks() {
        let py = sy(y.to_axis(t));
        writeln!(
            s,
            r#"<line x1="{:.1}" y1="{py:.1}" x2="{LEFT}" y2="{py:.1}" stroke="black"/><text x="{:.1}" y="{:.1}" text-anchor="end">{}</text>"#,
            LEFT - 5.0,
            LEFT - 8.0,
            py + 4.0,
            fmt_tick(t)
        )
        .unwrap();
    }
    writeln!(
        s,
        r#"<text x="{:.1}" y="{:.1}" text-anchor="middle" font-size="13">N</text>"#,
        LEFT + pw / 2.0,
        HEIGHT - 15.0
    )
    .unwrap();
    writeln!(
        s,
        r#"<text x="18" y="{:.1}" text-anchor="middle" font-size="13" transform="rotate(-90 18 {:.1})">r(N)</text>"#,
        TOP + ph / 2.0,
        TOP + ph / 2.0
    )
    .unwrap();
    s.push_str("</g>\n");

    for (colour, want_prime) in [(NEUTRAL, false), (PRIME, true)] {
        writeln!(s, r#"<g fill="{colour}" stroke="none">"#).unwrap();
        for &(n, r) in &pts {
            if is_prime(n) == want_prime {
                writeln!(
                    s,
                    r#"<circle cx="{:.2}" cy="{:.2}" r="1.3"/>"#,
                    sx(x.to_axis(n as f64)),
                    sy(y.to_axis(r as f64))
                )
                .unwrap();
            }
        }
        s.push_str("</g>\n");
    }

    if let (Some(fit), true) = (fit, log) {
        let (x0, x1) = (x.lo, x.hi);
        writeln!(
            s,
            r#"<line x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}" stroke="{FIT}" stroke-width="2"/>"#,
            sx(x0),
            sy(fit.predict_ln(x0)),
            sx(x1),
            sy(fit.predict_ln(x1))
        )
        .unwrap();
    }
    s.push_str("</svg>\n");
    Ok(s)
}

pub fn emit_chart(
    series: &RepSeries,
    mode: ChartMode,
    fit: Option<&RegressionFit>,
    is_prime: impl Fn(u64) -> bool,
    path: &Path,
) -> Result<()> {
    let svg = render_chart(series, mode, fit, is_prime)?;
    std::fs::write(path, svg).map_err(|e| Error::io(path, e))
}
