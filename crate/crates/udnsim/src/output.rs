//! Result emission: a diff-stable CSV table and an SVG chart of mean sum
//! rate versus density, one series per scheme with 95% CI whiskers.

use crate::engine::SweepResult;
use crate::error::{Error, Result};
use std::fmt::Write as _;
use std::path::Path;

pub const CSV_HEADER: &str =
    "density_per_km2,scheme,trials,mean_sum_rate_bps,std_dev_bps,ci95_low_bps,ci95_high_bps";

/// Canonical float rendering: six significant digits, exponent notation.
fn fmt6(x: f64) -> String {
    format!("{x:.5e}")
}

/// Renders the sweep as CSV, one row per (density, scheme) in sweep order.
pub fn csv_string(result: &SweepResult) -> String {
    let mut out = String::with_capacity(64 * (result.rows.len() + 1));
    out.push_str(CSV_HEADER);
    out.push('\n');
    for row in &result.rows {
        writeln!(
            out,
            "{},{},{},{},{},{},{}",
            fmt6(row.density_per_km2),
            row.scheme,
            row.trials,
            fmt6(row.mean_sum_rate_bps),
            fmt6(row.std_dev_bps),
            fmt6(row.ci95_low_bps),
            fmt6(row.ci95_high_bps),
        )
        .unwrap();
    }
    out
}

pub fn write_csv(result: &SweepResult, path: &Path) -> Result<()> {
    std::fs::write(path, csv_string(result)).map_err(|source| Error::Io {
        path: path.display().to_string(),
        source,
    })
}

const PLOT_W: f64 = 800.0;
const PLOT_H: f64 = 520.0;
const MARGIN_L: f64 = 90.0;
const MARGIN_R: f64 = 170.0;
const MARGIN_T: f64 = 40.0;
const MARGIN_B: f64 = 60.0;
const SERIES_COLORS: [&str; 3] = ["#1f77b4", "#ff7f0e", "#2ca02c"];

fn coord(v: f64) -> String {
    format!("{v:.2}")
}

/// Renders the sweep as a standalone SVG: one polyline per scheme when it
/// has at least two points, a marker per row, and a CI whisker per row.
pub fn svg_string(result: &SweepResult) -> Result<String> {
    if result.rows.is_empty() {
        return Err(Error::InvalidParameter(
            "cannot plot an empty sweep result".into(),
        ));
    }

    let x_min = result
        .rows
        .iter()
        .map(|r| r.density_per_km2)
        .fold(f64::INFINITY, f64::min);
    let x_max = result
        .rows
        .iter()
        .map(|r| r.density_per_km2)
        .fold(f64::NEG_INFINITY, f64::max);
    let y_peak = result
        .rows
        .iter()
        .map(|r| r.ci95_high_bps)
        .fold(0.0, f64::max);
    let y_top = if y_peak > 0.0 { y_peak * 1.05 } else { 1.0 };

    let inner_w = PLOT_W - MARGIN_L - MARGIN_R;
    let inner_h = PLOT_H - MARGIN_T - MARGIN_B;
    let map_x = |d: f64| {
        if x_max > x_min {
            MARGIN_L + (d - x_min) / (x_max - x_min) * inner_w
        } else {
            MARGIN_L + inner_w / 2.0
        }
    };
    let map_y = |v: f64| MARGIN_T + (1.0 - v / y_top) * inner_h;

    let mut s = String::new();
    writeln!(
        s,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{PLOT_W}\" height=\"{PLOT_H}\" viewBox=\"0 0 {PLOT_W} {PLOT_H}\">"
    )
    .unwrap();
    writeln!(
        s,
        "<style>text{{font-family:sans-serif;font-size:12px;fill:#222}}.axis{{stroke:#222;stroke-width:1}}.tick{{stroke:#222;stroke-width:1}}.ci{{stroke-width:1.5;opacity:0.7}}</style>"
    )
    .unwrap();
    writeln!(
        s,
        "<rect width=\"{PLOT_W}\" height=\"{PLOT_H}\" fill=\"white\"/>"
    )
    .unwrap();

    // axes
    let x0 = coord(MARGIN_L);
    let y0 = coord(PLOT_H - MARGIN_B);
    let x1 = coord(PLOT_W - MARGIN_R);
    let y1 = coord(MARGIN_T);
    writeln!(
        s,
        "<line class=\"axis\" x1=\"{x0}\" y1=\"{y0}\" x2=\"{x1}\" y2=\"{y0}\"/>"
    )
    .unwrap();
    writeln!(
        s,
        "<line class=\"axis\" x1=\"{x0}\" y1=\"{y0}\" x2=\"{x0}\" y2=\"{y1}\"/>"
    )
    .unwrap();

    // x ticks at each distinct density
    let mut densities: Vec<f64> = result.rows.iter().map(|r| r.density_per_km2).collect();
    densities.sort_by(f64::total_cmp);
    densities.dedup();
    for &d in &densities {
        let x = coord(map_x(d));
        let yb = PLOT_H - MARGIN_B;
        writeln!(
            s,
            "<line class=\"tick\" x1=\"{x}\" y1=\"{}\" x2=\"{x}\" y2=\"{}\"/>",
            coord(yb),
            coord(yb + 5.0)
        )
        .unwrap();
        writeln!(
            s,
            "<text x=\"{x}\" y=\"{}\" text-anchor=\"middle\">{d}</text>",
            coord(yb + 20.0)
        )
        .unwrap();
    }

    // y ticks on an even grid from zero
    for k in 0..=5 {
        let v = y_top * k as f64 / 5.0;
        let y = coord(map_y(v));
        writeln!(
            s,
            "<line class=\"tick\" x1=\"{}\" y1=\"{y}\" x2=\"{x0}\" y2=\"{y}\"/>",
            coord(MARGIN_L - 5.0)
        )
        .unwrap();
        writeln!(
            s,
            "<text x=\"{}\" y=\"{}\" text-anchor=\"end\">{:.2e}</text>",
            coord(MARGIN_L - 10.0),
            coord(map_y(v) + 4.0),
            v
        )
        .unwrap();
    }

    // axis labels
    writeln!(
        s,
        "<text x=\"{}\" y=\"{}\" text-anchor=\"middle\">density [per km^2]</text>",
        coord(MARGIN_L + inner_w / 2.0),
        coord(PLOT_H - 15.0)
    )
    .unwrap();
    writeln!(
        s,
        "<text x=\"20\" y=\"{}\" text-anchor=\"middle\" transform=\"rotate(-90 20 {})\">mean sum rate [bit/s]</text>",
        coord(MARGIN_T + inner_h / 2.0),
        coord(MARGIN_T + inner_h / 2.0)
    )
    .unwrap();

    // series
    for (k, scheme) in result.schemes().into_iter().enumerate() {
        let color = SERIES_COLORS[k % SERIES_COLORS.len()];
        let rows: Vec<_> = result.rows.iter().filter(|r| r.scheme == scheme).collect();

        if rows.len() >= 2 {
            let points: Vec<String> = rows
                .iter()
                .map(|r| {
                    format!(
                        "{},{}",
                        coord(map_x(r.density_per_km2)),
                        coord(map_y(r.mean_sum_rate_bps))
                    )
                })
                .collect();
            writeln!(
                s,
                "<polyline class=\"series\" fill=\"none\" stroke=\"{color}\" stroke-width=\"2\" points=\"{}\"/>",
                points.join(" ")
            )
            .unwrap();
        }
        for r in &rows {
            let x = coord(map_x(r.density_per_km2));
            writeln!(
                s,
                "<line class=\"ci\" stroke=\"{color}\" x1=\"{x}\" y1=\"{}\" x2=\"{x}\" y2=\"{}\"/>",
                coord(map_y(r.ci95_low_bps)),
                coord(map_y(r.ci95_high_bps))
            )
            .unwrap();
            writeln!(
                s,
                "<circle cx=\"{x}\" cy=\"{}\" r=\"3\" fill=\"{color}\"/>",
                coord(map_y(r.mean_sum_rate_bps))
            )
            .unwrap();
        }

        // legend entry
        let lx = PLOT_W - MARGIN_R + 20.0;
        let ly = MARGIN_T + 10.0 + 22.0 * k as f64;
        writeln!(
            s,
            "<line stroke=\"{color}\" stroke-width=\"2\" x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\"/>",
            coord(lx),
            coord(ly),
            coord(lx + 24.0),
            coord(ly)
        )
        .unwrap();
        writeln!(
            s,
            "<text class=\"legend\" x=\"{}\" y=\"{}\">{}</text>",
            coord(lx + 30.0),
            coord(ly + 4.0),
            scheme.label()
        )
        .unwrap();
    }

    writeln!(s, "</svg>").unwrap();
    Ok(s)
}

pub fn render_plot(result: &SweepResult, path: &Path) -> Result<()> {
    let svg = svg_string(result)?;
    std::fs::write(path, svg).map_err(|source| Error::Io {
        path: path.display().to_string(),
        source,
    })
}
