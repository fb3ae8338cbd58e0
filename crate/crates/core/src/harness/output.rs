use std::fmt::Write as _;
use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::analysis::{Estimate, ExponentFit};
use crate::Result;

pub const CSV_HEADER: &str = "statistic,n,p,estimate,stderr,replicas,seed";

/// One CSV result row. Missing fields are written empty.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Row {
    pub statistic: String,
    pub n: Option<i64>,
    pub p: Option<f64>,
    pub estimate: f64,
    pub stderr: Option<f64>,
    pub replicas: usize,
    pub seed: u64,
}

impl Row {
    pub fn value(statistic: impl Into<String>, n: Option<i64>, p: Option<f64>, estimate: f64, seed: u64) -> Self {
        Row { statistic: statistic.into(), n, p, estimate, stderr: None, replicas: 1, seed }
    }

    pub fn estimate(statistic: impl Into<String>, n: Option<i64>, p: Option<f64>, e: &Estimate, seed: u64) -> Self {
        Row { statistic: statistic.into(), n, p, estimate: e.mean, stderr: Some(e.stderr), replicas: e.replicas, seed }
    }
}

/// Decimal with 17 significant digits.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn write_csv<W: Write>(rows: &[Row], mut out: W) -> Result<()> {
    writeln!(out, "{CSV_HEADER}")?;
    for r in rows {
        writeln!(
            out,
            "{},{},{},{},{},{},{}",
            r.statistic,
            r.n.map(|n| n.to_string()).unwrap_or_default(),
            r.p.map(fmt_f64).unwrap_or_default(),
            fmt_f64(r.estimate),
            r.stderr.map(fmt_f64).unwrap_or_default(),
            r.replicas,
            r.seed
        )?;
    }
    Ok(())
}

/// Gnuplot script drawing each fit against its points in log-log axes.
pub fn gnuplot_script(fits: &[(String, ExponentFit)]) -> String {
    let mut s = String::from("set logscale xy 2\nset key left top\nset xlabel 'n'\n");
    for (name, fit) in fits {
        let _ = writeln!(s, "\nset title '{name}: slope {:.4}'", fit.slope);
        let _ = writeln!(s, "f(x) = 2**({:.16e}) * x**({:.16e})", fit.intercept, fit.slope);
        s.push_str("plot '-' using 1:2 with points title 'data', f(x) title 'fit'\n");
        for &(x, y) in &fit.points {
            let _ = writeln!(s, "{} {}", fmt_f64(x.exp2()), fmt_f64(y.exp2()));
        }
        s.push_str("e\n");
    }
    s
}

/// Static SVG scatter of `(log2 n, log2 value)` with the fitted line.
pub fn svg_plot(title: &str, fit: &ExponentFit) -> String {
    const W: f64 = 480.0;
    const H: f64 = 360.0;
    const PAD: f64 = 48.0;
    let xs = fit.points.iter().map(|p| p.0);
    let ys = fit.points.iter().map(|p| p.1);
    let (x0, x1) = (xs.clone().fold(f64::INFINITY, f64::min), xs.fold(f64::NEG_INFINITY, f64::max));
    let (y0, y1) = (ys.clone().fold(f64::INFINITY, f64::min), ys.fold(f64::NEG_INFINITY, f64::max));
    let span = |a: f64, b: f64| if b > a { b - a } else { 1.0 };
    let px = |x: f64| PAD + (x - x0) / span(x0, x1) * (W - 2.0 * PAD);
    let py = |y: f64| H - PAD - (y - y0) / span(y0, y1) * (H - 2.0 * PAD);
    let mut s = format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{W}\" height=\"{H}\" viewBox=\"0 0 {W} {H}\">\n\
         <rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n\
         <text x=\"{PAD}\" y=\"24\" font-family=\"sans-serif\" font-size=\"14\">{title}: slope {:.4} [{:.4}, {:.4}]</text>\n\
         <line x1=\"{PAD}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"black\"/>\n\
         <line x1=\"{PAD}\" y1=\"{PAD}\" x2=\"{PAD}\" y2=\"{}\" stroke=\"black\"/>\n",
        fit.slope,
        fit.ci95.0,
        fit.ci95.1,
        H - PAD,
        W - PAD,
        H - PAD,
        H - PAD
    );
    let line = |x: f64| fit.intercept + fit.slope * x;
    let _ = writeln!(
        s,
        "<line x1=\"{:.2}\" y1=\"{:.2}\" x2=\"{:.2}\" y2=\"{:.2}\" stroke=\"steelblue\" stroke-width=\"2\"/>",
        px(x0),
        py(line(x0)),
        px(x1),
        py(line(x1))
    );
    for &(x, y) in &fit.points {
        let _ = writeln!(s, "<circle cx=\"{:.2}\" cy=\"{:.2}\" r=\"3\" fill=\"firebrick\"/>", px(x), py(y));
    }
    let _ = writeln!(
        s,
        "<text x=\"{}\" y=\"{}\" font-family=\"sans-serif\" font-size=\"12\">log2 n</text>",
        W / 2.0,
        H - 12.0
    );
    s.push_str("</svg>\n");
    s
}

/// Run record written next to the results.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub experiment: String,
    pub version: String,
    pub seed: u64,
    /// The configuration with every default filled in.
    pub config: crate::harness::ExperimentConfig,
    pub failures: usize,
    pub wall_time_seconds: f64,
    pub outputs: Vec<String>,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_uses_seventeen_digits_and_blank_fields() {
        let rows = [Row::value("x", Some(3), None, 0.1, 9)];
        let mut buf = Vec::new();
        write_csv(&rows, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text, format!("{CSV_HEADER}\nx,3,,1.0000000000000001e-1,,1,9\n"));
        let parsed: f64 = text.lines().nth(1).unwrap().split(',').nth(3).unwrap().parse().unwrap();
        assert_eq!(parsed, 0.1);
    }

    #[test]
    fn svg_is_well_formed_enough() {
        let fit = ExponentFit {
            slope: 1.0,
            intercept: 0.0,
            slope_stderr: 0.0,
            ci95: (1.0, 1.0),
            points: vec![(1.0, 1.0), (2.0, 2.0)],
        };
        let s = svg_plot("t", &fit);
        assert!(s.starts_with("<svg") && s.trim_end().ends_with("</svg>"));
        assert_eq!(s.matches("<circle").count(), 2);
    }
}
