//! JSON, CSV and SVG writers.

use std::io;

use serde::{Deserialize, Serialize};

/// Version of the output layout.
pub const SCHEMA_VERSION: u32 = 1;

/// Top-level JSON document.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct Envelope<C, R> {
    pub schema: u32,
    pub command: String,
    pub config: C,
    pub result: R,
}

/// Compact JSON with every float written with 17 significant digits, so
/// output is byte-stable and parses back to the same bits.
struct FixedFloats;

impl serde_json::ser::Formatter for FixedFloats {
    fn write_f64<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        writer.write_all(fmt_f64(value).as_bytes())
    }

    fn write_f32<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f32) -> io::Result<()> {
        self.write_f64(writer, value as f64)
    }
}

pub fn fmt_f64(v: f64) -> String {
    format!("{:.16e}", v + 0.0)
}

pub fn to_json<T: Serialize>(value: &T) -> serde_json::Result<String> {
    let mut out = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut out, FixedFloats);
    value.serialize(&mut ser)?;
    Ok(String::from_utf8(out).expect("serde_json writes UTF-8"))
}

/// A flat table for CSV output.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(header: &[&str]) -> Self {
        Self {
            header: header.iter().map(|s| s.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    /// CSV with the config as a leading `#` comment line.
    pub fn to_csv(&self, config_json: &str) -> csv::Result<String> {
        let mut w = csv::WriterBuilder::new().from_writer(Vec::new());
        w.write_record(&self.header)?;
        for row in &self.rows {
            w.write_record(row)?;
        }
        let body = w.into_inner().map_err(|e| e.into_error())?;
        Ok(format!("# {config_json}\n{}", String::from_utf8_lossy(&body)))
    }

    /// Reads back the output of [`Table::to_csv`], returning the config line
    /// and the table.
    pub fn from_csv(text: &str) -> csv::Result<(String, Table)> {
        let config = text
            .lines()
            .next()
            .and_then(|l| l.strip_prefix("# "))
            .unwrap_or_default()
            .to_string();
        let mut r = csv::ReaderBuilder::new()
            .comment(Some(b'#'))
            .from_reader(text.as_bytes());
        let header = r.headers()?.iter().map(str::to_string).collect();
        let rows = r
            .records()
            .map(|rec| rec.map(|rec| rec.iter().map(str::to_string).collect()))
            .collect::<csv::Result<Vec<Vec<String>>>>()?;
        Ok((config, Table { header, rows }))
    }
}

pub fn cell_f64(v: f64) -> String {
    fmt_f64(v)
}

pub fn cell_opt(v: Option<f64>) -> String {
    v.map(fmt_f64).unwrap_or_default()
}

/// One coloured point set.
#[derive(Debug, Clone)]
pub struct Series {
    pub label: String,
    pub color: &'static str,
    pub points: Vec<(f64, f64)>,
}

/// The static figures the CLI can draw.
#[derive(Debug, Clone)]
pub enum Plot {
    Scatter {
        title: String,
        x_label: String,
        y_label: String,
        series: Vec<Series>,
        unit_circle: bool,
    },
    /// Cells row-major with x fastest; values are mapped to colours by
    /// `palette`.
    Heatmap {
        title: String,
        bounds: (f64, f64, f64, f64),
        nx: usize,
        ny: usize,
        values: Vec<Option<f64>>,
        palette: Palette,
    },
}

#[derive(Debug, Clone, Copy)]
pub enum Palette {
    /// Linear grey ramp between the finite minimum and maximum.
    Ramp,
    /// Sign of the value: positive, negative or missing.
    Sign,
}

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 640.0;
const MARGIN: f64 = 60.0;

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

fn ramp(t: f64) -> String {
    let v = (255.0 * t.clamp(0.0, 1.0)).round() as u8;
    format!("#{v:02x}{v:02x}{v:02x}")
}

impl Plot {
    pub fn to_svg(&self, config_json: &str) -> String {
        let mut s = String::new();
        s.push_str(&format!(
            "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{WIDTH}\" height=\"{HEIGHT}\" viewBox=\"0 0 {WIDTH} {HEIGHT}\">\n"
        ));
        s.push_str(&format!("<desc>{}</desc>\n", escape(config_json)));
        s.push_str("<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n");
        let inner = WIDTH - 2.0 * MARGIN;
        match self {
            Plot::Scatter {
                title,
                x_label,
                y_label,
                series,
                unit_circle,
            } => {
                let pts = series.iter().flat_map(|se| se.points.iter());
                let (mut x0, mut x1, mut y0, mut y1) = (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
                for &(x, y) in pts.filter(|p| p.0.is_finite() && p.1.is_finite()) {
                    x0 = x0.min(x);
                    x1 = x1.max(x);
                    y0 = y0.min(y);
                    y1 = y1.max(y);
                }
                if *unit_circle {
                    x0 = x0.min(-1.0);
                    x1 = x1.max(1.0);
                    y0 = y0.min(-1.0);
                    y1 = y1.max(1.0);
                }
                if !x0.is_finite() {
                    (x0, x1, y0, y1) = (-1.0, 1.0, -1.0, 1.0);
                }
                let pad = |a: f64, b: f64| {
                    let w = (b - a).max(1e-12);
                    (a - 0.05 * w, b + 0.05 * w)
                };
                let (x0, x1) = pad(x0, x1);
                let (y0, y1) = pad(y0, y1);
                let px = |x: f64| MARGIN + (x - x0) / (x1 - x0) * inner;
                let py = |y: f64| HEIGHT - MARGIN - (y - y0) / (y1 - y0) * inner;
                s.push_str(&format!(
                    "<rect x=\"{MARGIN}\" y=\"{MARGIN}\" width=\"{inner}\" height=\"{inner}\" fill=\"none\" stroke=\"black\"/>\n"
                ));
                if *unit_circle {
                    s.push_str(&format!(
                        "<ellipse cx=\"{:.3}\" cy=\"{:.3}\" rx=\"{:.3}\" ry=\"{:.3}\" fill=\"none\" stroke=\"#999999\" stroke-dasharray=\"4 3\"/>\n",
                        px(0.0),
                        py(0.0),
                        px(1.0) - px(0.0),
                        py(0.0) - py(1.0)
                    ));
                }
                for (i, se) in series.iter().enumerate() {
                    for &(x, y) in se.points.iter().filter(|p| p.0.is_finite() && p.1.is_finite()) {
                        s.push_str(&format!(
                            "<circle cx=\"{:.3}\" cy=\"{:.3}\" r=\"3\" fill=\"{}\"/>\n",
                            px(x),
                            py(y),
                            se.color
                        ));
                    }
                    s.push_str(&format!(
                        "<text x=\"{:.1}\" y=\"{:.1}\" font-size=\"12\" fill=\"{}\">{}</text>\n",
                        MARGIN + 8.0,
                        MARGIN + 16.0 + 14.0 * i as f64,
                        se.color,
                        escape(&se.label)
                    ));
                }
                s.push_str(&axis_text(title, x_label, y_label, (x0, x1, y0, y1)));
            }
            Plot::Heatmap {
                title,
                bounds,
                nx,
                ny,
                values,
                palette,
            } => {
                let finite: Vec<f64> = values.iter().flatten().copied().filter(|v| v.is_finite()).collect();
                let lo = finite.iter().copied().fold(f64::INFINITY, f64::min);
                let hi = finite.iter().copied().fold(f64::NEG_INFINITY, f64::max);
                let cw = inner / *nx as f64;
                let ch = inner / *ny as f64;
                for j in 0..*ny {
                    for i in 0..*nx {
                        let fill = match (values[j * nx + i], palette) {
                            (None, _) => "#ff00ff".to_string(),
                            (Some(v), Palette::Sign) if v > 0.0 => "#4477aa".to_string(),
                            (Some(v), Palette::Sign) if v < 0.0 => "#ee6677".to_string(),
                            (Some(_), Palette::Sign) => "#bbbbbb".to_string(),
                            (Some(v), Palette::Ramp) => {
                                ramp(if hi > lo { (v - lo) / (hi - lo) } else { 0.5 })
                            }
                        };
                        s.push_str(&format!(
                            "<rect x=\"{:.3}\" y=\"{:.3}\" width=\"{:.3}\" height=\"{:.3}\" fill=\"{fill}\"/>\n",
                            MARGIN + i as f64 * cw,
                            HEIGHT - MARGIN - (j + 1) as f64 * ch,
                            cw,
                            ch
                        ));
                    }
                }
                s.push_str(&axis_text(title, "Re λ", "Im λ", *bounds));
            }
        }
        s.push_str("</svg>\n");
        s
    }
}

fn axis_text(title: &str, x_label: &str, y_label: &str, (x0, x1, y0, y1): (f64, f64, f64, f64)) -> String {
    format!(
        "<text x=\"{:.1}\" y=\"30\" font-size=\"16\" text-anchor=\"middle\">{}</text>\n\
         <text x=\"{:.1}\" y=\"{:.1}\" font-size=\"12\" text-anchor=\"middle\">{} [{:.4}, {:.4}]</text>\n\
         <text x=\"15\" y=\"{:.1}\" font-size=\"12\" text-anchor=\"middle\" transform=\"rotate(-90 15 {:.1})\">{} [{:.4}, {:.4}]</text>\n",
        WIDTH / 2.0,
        escape(title),
        WIDTH / 2.0,
        HEIGHT - 20.0,
        escape(x_label),
        x0,
        x1,
        HEIGHT / 2.0,
        HEIGHT / 2.0,
        escape(y_label),
        y0,
        y1
    )
}
