//! Thermodynamic curves over a `T/m` grid for several `α`, as CSV and SVG.

use diracosc_core::spectrum::{build_spectrum, default_energy_cutoff, Branch};
use diracosc_core::statmech::{linspace, thermo_sweep, PartitionSource, SimplifiedSpectrumCoeffs, ThermoPoint};
use diracosc_core::OscillatorParams;

use crate::config::{Method, PartitionOptions, TemperatureGrid};
use crate::error::CliResult;
use crate::table::{format_float, Table};

/// Energy cutoff, in units of `m`, for `α = 0`, where no boundary momentum
/// exists. Levels above it carry weight below `e^{-50}` on `T/m ≤ 2`.
pub const REFERENCE_CUTOFF_OVER_M: f64 = 100.0;

pub const DEFAULT_ALPHAS: [f64; 4] = [0.05, 0.1, 0.2, 0.3];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Quantity {
    F,
    U,
    S,
    CV,
}

impl Quantity {
    pub const ALL: [Quantity; 4] = [Quantity::F, Quantity::U, Quantity::S, Quantity::CV];

    pub fn label(self) -> &'static str {
        match self {
            Quantity::F => "F",
            Quantity::U => "U",
            Quantity::S => "S",
            Quantity::CV => "C_V",
        }
    }

    /// Column header; energies are reported in units of `m`.
    pub fn column(self) -> &'static str {
        match self {
            Quantity::F => "F_over_m",
            Quantity::U => "U_over_m",
            Quantity::S => "S",
            Quantity::CV => "C_V",
        }
    }

    fn value(self, point: &ThermoPoint, m: f64) -> f64 {
        match self {
            Quantity::F => point.f / m,
            Quantity::U => point.u / m,
            Quantity::S => point.s,
            Quantity::CV => point.c_v,
        }
    }
}

/// One `α` worth of thermodynamic functions. Failed temperatures are `None`.
#[derive(Debug, Clone)]
pub struct Curve {
    pub alpha: f64,
    pub m: f64,
    pub t_over_m: Vec<f64>,
    pub points: Vec<Option<ThermoPoint>>,
    pub failures: Vec<(f64, String)>,
}

impl Curve {
    pub fn series(&self, q: Quantity) -> Vec<Option<f64>> {
        self.points
            .iter()
            .map(|p| p.as_ref().map(|p| q.value(p, self.m)))
            .collect()
    }

    pub fn table(&self, q: Quantity) -> Table {
        let mut t = Table::new(["T_over_m", q.column()]);
        for (x, y) in self.t_over_m.iter().zip(self.series(q)) {
            t.push(vec![Some(*x), y]);
        }
        t
    }

    pub fn gaps(&self) -> usize {
        self.points.iter().filter(|p| p.is_none()).count()
    }
}

pub fn file_stem(q: Quantity, alpha: f64) -> String {
    format!("fig1_{}_alpha{}", q.label(), alpha)
}

/// Energy cutoff used for a curve: the explicit one, else `√(m² + P_b²)`,
/// else the reference cutoff when `α = 0`.
pub fn curve_cutoff(params: &OscillatorParams, options: &PartitionOptions) -> CliResult<f64> {
    if let Some(e) = options.e_cut {
        return Ok(e);
    }
    if params.alpha() == 0.0 {
        return Ok(REFERENCE_CUTOFF_OVER_M * params.m());
    }
    Ok(default_energy_cutoff(params)?)
}

/// The `Z` evaluator selected by `options`.
pub fn partition_source(
    params: &OscillatorParams,
    options: &PartitionOptions,
    e_cut: f64,
) -> CliResult<PartitionSource> {
    let coeffs = SimplifiedSpectrumCoeffs::new(params, options.variant.into());
    Ok(match options.method {
        Method::Direct => PartitionSource::Direct(build_spectrum(Branch::ZeroGroundState, params, e_cut)?),
        Method::EmClosed => PartitionSource::ClosedForm {
            coeffs,
            m: params.m(),
            convention: options.convention.into(),
        },
        Method::EmNumeric => {
            let n_max = match options.n_max {
                Some(n) => n,
                None => build_spectrum(Branch::ZeroGroundState, params, e_cut)?.n_max,
            };
            PartitionSource::NumericIntegral {
                coeffs,
                m: params.m(),
                n_max,
            }
        }
    })
}

/// Thermodynamic functions at `α` with `m`, `ω`, `γ` taken from `base`.
pub fn curve(
    base: &OscillatorParams,
    alpha: f64,
    options: &PartitionOptions,
    temperatures: &TemperatureGrid,
) -> CliResult<Curve> {
    let params = base.with_alpha(alpha)?;
    let e_cut = curve_cutoff(&params, options)?;
    let source = partition_source(&params, options, e_cut)?;
    let t_over_m = linspace(temperatures.t_min, temperatures.t_max, temperatures.t_steps);
    let temps: Vec<f64> = t_over_m.iter().map(|x| x * params.m()).collect();
    let mut failures = Vec::new();
    let points = thermo_sweep(&source, &temps)
        .into_iter()
        .zip(&temps)
        .map(|(r, &t)| match r {
            Ok(p) => Some(p),
            Err(e) => {
                failures.push((t, e.to_string()));
                None
            }
        })
        .collect();
    Ok(Curve {
        alpha,
        m: params.m(),
        t_over_m,
        points,
        failures,
    })
}

/// Largest `|ΔU/m|` between two curves on the same grid, over points both have.
pub fn max_internal_energy_gap(a: &Curve, b: &Curve) -> f64 {
    a.series(Quantity::U)
        .iter()
        .zip(b.series(Quantity::U))
        .filter_map(|(x, y)| Some((x.as_ref()? - y?).abs()))
        .fold(0.0, f64::max)
}

const DASHES: [&str; 4] = ["", "8 3 2 3", "6 4", "2 3"];
const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 420.0;
const MARGIN: f64 = 60.0;

fn fmt_px(x: f64) -> String {
    format!("{x:.2}")
}

/// Line chart of one quantity for all curves. Missing points break the line.
pub fn svg(q: Quantity, curves: &[Curve]) -> String {
    let finite = || {
        curves
            .iter()
            .flat_map(|c| c.t_over_m.iter().copied().zip(c.series(q)))
            .filter_map(|(x, y)| y.filter(|v| v.is_finite()).map(|y| (x, y)))
    };
    let (mut x0, mut x1, mut y0, mut y1) = (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
    for (x, y) in finite() {
        x0 = x0.min(x);
        x1 = x1.max(x);
        y0 = y0.min(y);
        y1 = y1.max(y);
    }
    if x0 >= x1 {
        (x0, x1) = (0.0, 1.0);
    }
    if y0 >= y1 {
        let c = if y0.is_finite() { y0 } else { 0.0 };
        (y0, y1) = (c - 1.0, c + 1.0);
    }
    let pad = 0.05 * (y1 - y0);
    let (y0, y1) = (y0 - pad, y1 + pad);
    let sx = |x: f64| MARGIN + (x - x0) / (x1 - x0) * (WIDTH - 2.0 * MARGIN);
    let sy = |y: f64| HEIGHT - MARGIN - (y - y0) / (y1 - y0) * (HEIGHT - 2.0 * MARGIN);

    let mut out = String::new();
    out.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{WIDTH}\" height=\"{HEIGHT}\" viewBox=\"0 0 {WIDTH} {HEIGHT}\">\n"
    ));
    out.push_str("<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n");
    out.push_str(&format!(
        "<path d=\"M{l} {t} L{l} {b} L{r} {b}\" fill=\"none\" stroke=\"black\"/>\n",
        l = fmt_px(MARGIN),
        t = fmt_px(MARGIN),
        b = fmt_px(HEIGHT - MARGIN),
        r = fmt_px(WIDTH - MARGIN)
    ));
    for i in 0..=4 {
        let fx = x0 + (x1 - x0) * i as f64 / 4.0;
        let fy = y0 + (y1 - y0) * i as f64 / 4.0;
        out.push_str(&format!(
            "<text x=\"{}\" y=\"{}\" font-size=\"11\" text-anchor=\"middle\">{}</text>\n",
            fmt_px(sx(fx)),
            fmt_px(HEIGHT - MARGIN + 16.0),
            format_float((fx * 1e3).round() / 1e3)
        ));
        out.push_str(&format!(
            "<text x=\"{}\" y=\"{}\" font-size=\"11\" text-anchor=\"end\">{}</text>\n",
            fmt_px(MARGIN - 6.0),
            fmt_px(sy(fy) + 4.0),
            format_float((fy * 1e3).round() / 1e3)
        ));
    }
    out.push_str(&format!(
        "<text x=\"{}\" y=\"{}\" font-size=\"13\" text-anchor=\"middle\">T/m</text>\n",
        fmt_px(WIDTH / 2.0),
        fmt_px(HEIGHT - 18.0)
    ));
    out.push_str(&format!(
        "<text x=\"{}\" y=\"{}\" font-size=\"13\" text-anchor=\"middle\">{}</text>\n",
        fmt_px(WIDTH / 2.0),
        fmt_px(MARGIN - 24.0),
        q.column()
    ));

    let mut styled = 0;
    for (i, c) in curves.iter().enumerate() {
        let (stroke, dash) = if c.alpha == 0.0 {
            ("#888888", "")
        } else {
            let d = DASHES[styled % DASHES.len()];
            styled += 1;
            ("black", d)
        };
        let dash_attr = if dash.is_empty() {
            String::new()
        } else {
            format!(" stroke-dasharray=\"{dash}\"")
        };
        let mut segment: Vec<String> = Vec::new();
        let flush = |segment: &mut Vec<String>, out: &mut String| {
            if segment.len() > 1 {
                out.push_str(&format!(
                    "<polyline fill=\"none\" stroke=\"{stroke}\" stroke-width=\"1.5\"{dash_attr} points=\"{}\"/>\n",
                    segment.join(" ")
                ));
            }
            segment.clear();
        };
        for (x, y) in c.t_over_m.iter().zip(c.series(q)) {
            match y.filter(|v| v.is_finite()) {
                Some(y) => segment.push(format!("{},{}", fmt_px(sx(*x)), fmt_px(sy(y)))),
                None => flush(&mut segment, &mut out),
            }
        }
        flush(&mut segment, &mut out);
        let ly = MARGIN + 16.0 * i as f64;
        out.push_str(&format!(
            "<line x1=\"{}\" y1=\"{ly2}\" x2=\"{}\" y2=\"{ly2}\" stroke=\"{stroke}\" stroke-width=\"1.5\"{dash_attr}/>\n",
            fmt_px(WIDTH - MARGIN - 110.0),
            fmt_px(WIDTH - MARGIN - 80.0),
            ly2 = fmt_px(ly)
        ));
        out.push_str(&format!(
            "<text x=\"{}\" y=\"{}\" font-size=\"11\">α = {}</text>\n",
            fmt_px(WIDTH - MARGIN - 74.0),
            fmt_px(ly + 4.0),
            c.alpha
        ));
    }
    out.push_str("</svg>\n");
    out
}
