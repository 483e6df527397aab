//! Scenario files.
//!
//! A scenario is a TOML document:
//!
//! ```toml
//! [model]
//! L = 2
//!
//! [geometry]                  # either a transit-time matrix ...
//! tau = [[0.0, 5.0], [5.0, 0.0]]
//! # positions = [[0, 0, 0], [5, 0, 0]]   # ... or positions and a speed
//! # speed = 1.0
//!
//! [bath]
//! s = 5.0
//! T = 0.3333333333333333
//!
//! [bath.cut]                  # optional for time sweeps
//! alpha = 1.0                 # observed band [alpha, alpha + delta)
//! delta = 2.0
//!
//! [sweep]
//! kind = "time"               # or "cut" (grid over alpha, needs bath.cut.delta)
//! grid = { start = 0.0, stop = 20.0, step = 0.05 }   # or an explicit list
//! t_asym = 100.0              # cut sweeps only
//!
//! [pairs]
//! class = ["single", "singlet", "ghz"]   # two-qubit classes, or
//! # explicit = [["+-", "-+"]]
//!
//! [output]
//! csv = "out.csv"             # relative to the scenario file
//! plot = "out.svg"            # optional
//! ```
//!
//! The geometry section may be omitted for `L = 1`.

use std::ops::Range;
use std::path::{Path, PathBuf};

use serde::Deserialize;
use spinreg::analysis::PairClass;
use spinreg::{BathSpec, Geometry, RegisterLabel, SpectralDensity};
use toml::Spanned;

use crate::error::{CliError, Result};

/// Default asymptotic time of cut sweeps.
pub const DEFAULT_T_ASYM: f64 = 100.0;

/// Macrofraction name of the observed band in cut baths.
pub const BAND_MACROFRACTION: &str = "band";

#[derive(Debug, Clone, PartialEq)]
pub enum SweepKind {
    /// Grid over time.
    Time,
    /// Grid over the lower band edge `alpha` at fixed `delta` and `t_asym`.
    Cut { delta: f64, t_asym: f64 },
}

/// A named pair of pointer labels, as it appears in CSV headers.
#[derive(Debug, Clone, PartialEq)]
pub struct NamedPair {
    pub name: String,
    pub eps: RegisterLabel,
    pub eps_prime: RegisterLabel,
}

#[derive(Debug, Clone)]
pub struct Scenario {
    pub len: usize,
    pub geometry: Geometry,
    pub s: f64,
    pub temperature: f64,
    /// Observed band `(alpha, delta)` for time sweeps on a cut bath.
    pub band: Option<(f64, f64)>,
    pub sweep: SweepKind,
    pub grid: Vec<f64>,
    pub pairs: Vec<NamedPair>,
    pub csv: PathBuf,
    pub plot: Option<PathBuf>,
}

impl Scenario {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        let base = path.parent().unwrap_or_else(|| Path::new("."));
        Self::parse(&text, base)
    }

    /// Parse scenario text; relative output paths are resolved against `base`.
    pub fn parse(text: &str, base: &Path) -> Result<Self> {
        let raw: RawScenario = toml::from_str(text).map_err(|e| {
            let line = e.span().map(|s| line_of(text, s.start));
            CliError::parse(line, "scenario", e.message().trim())
        })?;
        let at = |span: Range<usize>| Some(line_of(text, span.start));

        let len = *raw.model.len.get_ref();
        if len == 0 {
            return Err(CliError::parse(at(raw.model.len.span()), "model.L", "must be >= 1"));
        }

        let geometry = match raw.geometry {
            None if len == 1 => Geometry::collective(1)?,
            None => return Err(CliError::parse(None, "geometry", "required for L > 1")),
            Some(g) => build_geometry(g, len, &at)?,
        };

        let s = *raw.bath.s.get_ref();
        SpectralDensity::new(s).map_err(|e| CliError::parse(at(raw.bath.s.span()), "bath.s", e.to_string()))?;
        let temperature = *raw.bath.temperature.get_ref();
        if !temperature.is_finite() || temperature < 0.0 {
            return Err(CliError::parse(at(raw.bath.temperature.span()), "bath.T", "must be finite and >= 0"));
        }

        let kind = raw.sweep.kind.get_ref().as_str();
        let (sweep, band) = match kind {
            "time" => {
                if let Some(t) = &raw.sweep.t_asym {
                    return Err(CliError::parse(at(t.span()), "sweep.t_asym", "only valid for cut sweeps"));
                }
                let band = match &raw.bath.cut {
                    None => None,
                    Some(cut) => {
                        let alpha = cut.alpha.as_ref().ok_or_else(|| {
                            CliError::parse(None, "bath.cut.alpha", "required for time sweeps on a cut bath")
                        })?;
                        let delta = *cut.delta.get_ref();
                        let a = *alpha.get_ref();
                        check_band(a, delta, &at(alpha.span()), "bath.cut.alpha")?;
                        check_band(0.0, delta, &at(cut.delta.span()), "bath.cut.delta")?;
                        Some((a, delta))
                    }
                };
                (SweepKind::Time, band)
            }
            "cut" => {
                let cut = raw
                    .bath
                    .cut
                    .as_ref()
                    .ok_or_else(|| CliError::parse(None, "bath.cut.delta", "required for cut sweeps"))?;
                if let Some(a) = &cut.alpha {
                    return Err(CliError::parse(at(a.span()), "bath.cut.alpha", "cut sweeps take alpha from sweep.grid"));
                }
                let delta = *cut.delta.get_ref();
                check_band(0.0, delta, &at(cut.delta.span()), "bath.cut.delta")?;
                let t_asym = match &raw.sweep.t_asym {
                    None => DEFAULT_T_ASYM,
                    Some(t) if *t.get_ref() >= 0.0 && t.get_ref().is_finite() => *t.get_ref(),
                    Some(t) => return Err(CliError::parse(at(t.span()), "sweep.t_asym", "must be finite and >= 0")),
                };
                (SweepKind::Cut { delta, t_asym }, None)
            }
            other => {
                return Err(CliError::parse(
                    at(raw.sweep.kind.span()),
                    "sweep.kind",
                    format!("unknown kind `{other}` (expected `time` or `cut`)"),
                ))
            }
        };

        let grid_span = at(raw.sweep.grid.span());
        let grid = raw.sweep.grid.into_inner().points().map_err(|m| CliError::parse(grid_span, "sweep.grid", m))?;
        if let Some(bad) = grid.iter().find(|v| !v.is_finite() || **v < 0.0) {
            return Err(CliError::parse(grid_span, "sweep.grid", format!("point {bad} must be finite and >= 0")));
        }
        if grid.windows(2).any(|w| w[1] <= w[0]) {
            return Err(CliError::parse(grid_span, "sweep.grid", "must be strictly increasing"));
        }

        let pairs = build_pairs(raw.pairs, len, &at)?;

        let resolve = |p: String| {
            let p = PathBuf::from(p);
            if p.is_absolute() {
                p
            } else {
                base.join(p)
            }
        };
        Ok(Self {
            len,
            geometry,
            s,
            temperature,
            band,
            sweep,
            grid,
            pairs,
            csv: resolve(raw.output.csv),
            plot: raw.output.plot.map(resolve),
        })
    }

    /// Bath for time sweeps: uncut, or cut with the configured observed band.
    pub fn time_bath(&self) -> Result<BathSpec> {
        let sd = SpectralDensity::new(self.s)?;
        Ok(match self.band {
            None => BathSpec::uncut(sd, self.temperature)?,
            Some((alpha, delta)) => {
                BathSpec::with_observed_band(sd, self.temperature, BAND_MACROFRACTION, alpha, delta)?
            }
        })
    }

    /// Bath of a cut sweep at band edge `alpha`.
    pub fn cut_bath(&self, alpha: f64, delta: f64) -> Result<BathSpec> {
        let sd = SpectralDensity::new(self.s)?;
        Ok(BathSpec::with_observed_band(sd, self.temperature, BAND_MACROFRACTION, alpha, delta)?)
    }
}

fn line_of(text: &str, offset: usize) -> usize {
    text[..offset.min(text.len())].bytes().filter(|&b| b == b'\n').count() + 1
}

fn check_band(lo: f64, delta: f64, line: &Option<usize>, field: &str) -> Result<()> {
    if !lo.is_finite() || lo < 0.0 || !delta.is_finite() || delta < 0.0 {
        return Err(CliError::parse(*line, field, "band edges must be finite and >= 0"));
    }
    Ok(())
}

fn build_geometry(g: RawGeometry, len: usize, at: &impl Fn(Range<usize>) -> Option<usize>) -> Result<Geometry> {
    match (g.tau, g.positions, g.speed) {
        (Some(tau), None, None) => {
            let line = at(tau.span());
            let rows = tau.into_inner();
            if rows.len() != len || rows.iter().any(|r| r.len() != len) {
                return Err(CliError::parse(line, "geometry.tau", format!("must be a {len}x{len} matrix")));
            }
            Geometry::from_rows(&rows).map_err(|e| CliError::parse(line, "geometry.tau", e.to_string()))
        }
        (None, Some(pos), Some(speed)) => {
            let line = at(pos.span());
            let pos = pos.into_inner();
            if pos.len() != len {
                return Err(CliError::parse(line, "geometry.positions", format!("expected {len} positions")));
            }
            Geometry::from_positions(&pos, *speed.get_ref())
                .map_err(|e| CliError::parse(at(speed.span()), "geometry.speed", e.to_string()))
        }
        (None, Some(pos), None) => Err(CliError::parse(at(pos.span()), "geometry.speed", "required with positions")),
        (None, None, _) => Err(CliError::parse(None, "geometry", "give either tau or positions + speed")),
        (Some(tau), Some(_), _) | (Some(tau), None, Some(_)) => Err(CliError::parse(
            at(tau.span()),
            "geometry",
            "tau excludes positions/speed",
        )),
    }
}

fn build_pairs(
    raw: Option<RawPairs>,
    len: usize,
    at: &impl Fn(Range<usize>) -> Option<usize>,
) -> Result<Vec<NamedPair>> {
    let Some(raw) = raw else {
        return Ok(Vec::new());
    };
    match (raw.class, raw.explicit) {
        (Some(_), Some(e)) => Err(CliError::parse(at(e.span()), "pairs", "give either class or explicit")),
        (None, None) => Ok(Vec::new()),
        (Some(classes), None) => {
            let line = at(classes.span());
            classes
                .into_inner()
                .into_iter()
                .map(|name| {
                    let class: PairClass =
                        name.parse().map_err(|e: spinreg::Error| CliError::parse(line, "pairs.class", e.to_string()))?;
                    let (eps, eps_prime) = match (len, class) {
                        (2, c) => c.representative(),
                        (1, PairClass::SingleQubit) => (RegisterLabel::parse("+")?, RegisterLabel::parse("-")?),
                        _ => {
                            return Err(CliError::parse(
                                line,
                                "pairs.class",
                                format!("class `{name}` needs L = 2 (L = 1 allows only `single`)"),
                            ))
                        }
                    };
                    Ok(NamedPair {
                        name: class.name().to_string(),
                        eps,
                        eps_prime,
                    })
                })
                .collect()
        }
        (None, Some(explicit)) => {
            let line = at(explicit.span());
            explicit
                .into_inner()
                .into_iter()
                .map(|[a, b]| {
                    let parse = |s: &str| {
                        RegisterLabel::parse(s)
                            .map_err(|e| CliError::parse(line, "pairs.explicit", format!("`{s}`: {e}")))
                    };
                    let (eps, eps_prime) = (parse(&a)?, parse(&b)?);
                    if eps.len() != len || eps_prime.len() != len {
                        return Err(CliError::parse(line, "pairs.explicit", format!("labels must have {len} spins")));
                    }
                    Ok(NamedPair {
                        name: format!("{a}/{b}"),
                        eps,
                        eps_prime,
                    })
                })
                .collect()
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawScenario {
    model: RawModel,
    geometry: Option<RawGeometry>,
    bath: RawBath,
    sweep: RawSweep,
    pairs: Option<RawPairs>,
    output: RawOutput,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawModel {
    #[serde(rename = "L")]
    len: Spanned<usize>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawGeometry {
    tau: Option<Spanned<Vec<Vec<f64>>>>,
    positions: Option<Spanned<Vec<[f64; 3]>>>,
    speed: Option<Spanned<f64>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawBath {
    s: Spanned<f64>,
    #[serde(rename = "T")]
    temperature: Spanned<f64>,
    cut: Option<RawCut>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawCut {
    alpha: Option<Spanned<f64>>,
    delta: Spanned<f64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSweep {
    kind: Spanned<String>,
    grid: Spanned<RawGrid>,
    t_asym: Option<Spanned<f64>>,
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum RawGrid {
    List(Vec<f64>),
    Range { start: f64, stop: f64, step: f64 },
}

impl RawGrid {
    fn points(self) -> std::result::Result<Vec<f64>, String> {
        match self {
            RawGrid::List(v) if v.is_empty() => Err("grid is empty".into()),
            RawGrid::List(v) => Ok(v),
            RawGrid::Range { start, stop, step } => {
                if step.is_nan() || step <= 0.0 || !start.is_finite() || !stop.is_finite() || stop < start {
                    return Err("range needs finite start <= stop and step > 0".into());
                }
                // points are start + k·step, not accumulated, so the grid is exact
                // up to one rounding per point
                let n = ((stop - start) / step + 1e-9).floor() as usize;
                Ok((0..=n).map(|k| start + k as f64 * step).collect())
            }
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawPairs {
    class: Option<Spanned<Vec<String>>>,
    explicit: Option<Spanned<Vec<[String; 2]>>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawOutput {
    csv: String,
    plot: Option<String>,
}

#[cfg(test)]
mod tests {
    use super::*;

    const BASE: &str = r#"
[model]
L = 2

[geometry]
tau = [[0.0, 5.0], [5.0, 0.0]]

[bath]
s = 5.0
T = 0.25

[sweep]
kind = "time"
grid = { start = 0.0, stop = 1.0, step = 0.25 }

[pairs]
class = ["single", "singlet", "ghz"]

[output]
csv = "out.csv"
"#;

    fn parse(text: &str) -> Result<Scenario> {
        Scenario::parse(text, Path::new("/tmp/x"))
    }

    fn parse_err(text: &str) -> (Option<usize>, String) {
        match parse(text).unwrap_err() {
            CliError::Parse { line, field, .. } => (line, field),
            other => panic!("unexpected error {other}"),
        }
    }

    #[test]
    fn parses_base_scenario() {
        let sc = parse(BASE).unwrap();
        assert_eq!(sc.len, 2);
        assert_eq!(sc.grid, vec![0.0, 0.25, 0.5, 0.75, 1.0]);
        assert_eq!(sc.pairs.iter().map(|p| p.name.as_str()).collect::<Vec<_>>(), ["single", "singlet", "ghz"]);
        assert_eq!(sc.csv, PathBuf::from("/tmp/x/out.csv"));
        assert_eq!(sc.geometry.tau(0, 1), 5.0);
        assert!(sc.time_bath().unwrap().is_uncut());
    }

    #[test]
    fn reports_lines_and_fields() {
        let bad = BASE.replace("s = 5.0", "s = \"five\"");
        let (line, _) = parse_err(&bad);
        assert_eq!(line, Some(9));

        let bad = BASE.replace("kind = \"time\"", "kind = \"space\"");
        assert_eq!(parse_err(&bad), (Some(13), "sweep.kind".to_string()));

        let bad = BASE.replace("grid = { start = 0.0, stop = 1.0, step = 0.25 }", "grid = [0.0, 2.0, 1.0]");
        assert_eq!(parse_err(&bad), (Some(14), "sweep.grid".to_string()));

        let bad = BASE.replace("[[0.0, 5.0], [5.0, 0.0]]", "[[0.0, 5.0], [4.0, 0.0]]");
        assert_eq!(parse_err(&bad).1, "geometry.tau");

        let bad = BASE.replace("\"ghz\"", "\"w-state\"");
        assert_eq!(parse_err(&bad).1, "pairs.class");

        let bad = BASE.replace("[output]", "[output]\nformat = \"png\"");
        assert_eq!(parse_err(&bad).0, Some(20));
    }

    #[test]
    fn cut_sweep_settings() {
        let text = BASE
            .replace("T = 0.25", "T = 0.25\n[bath.cut]\ndelta = 2.0")
            .replace("kind = \"time\"", "kind = \"cut\"");
        let sc = parse(&text).unwrap();
        assert_eq!(
            sc.sweep,
            SweepKind::Cut {
                delta: 2.0,
                t_asym: DEFAULT_T_ASYM
            }
        );
        // cut sweeps need a band width
        assert_eq!(parse_err(&BASE.replace("kind = \"time\"", "kind = \"cut\"")).1, "bath.cut.delta");
    }

    #[test]
    fn explicit_pairs_and_single_qubit() {
        let text = BASE.replace("class = [\"single\", \"singlet\", \"ghz\"]", "explicit = [[\"++\", \"--\"]]");
        let sc = parse(&text).unwrap();
        assert_eq!(sc.pairs[0].name, "++/--");

        let one = "[model]\nL = 1\n[bath]\ns = 3.0\nT = 0.0\n[sweep]\nkind = \"time\"\ngrid = [1.0]\n\
                   [pairs]\nclass = [\"single\"]\n[output]\ncsv = \"a.csv\"\n";
        let sc = parse(one).unwrap();
        assert_eq!(sc.pairs[0].eps.len(), 1);
        assert_eq!(parse_err(&one.replace("single", "singlet")).1, "pairs.class");
    }

    #[test]
    fn positions_geometry() {
        let text = BASE.replace(
            "tau = [[0.0, 5.0], [5.0, 0.0]]",
            "positions = [[0.0, 0.0, 0.0], [0.0, 10.0, 0.0]]\nspeed = 2.0",
        );
        assert_eq!(parse(&text).unwrap().geometry.tau(0, 1), 5.0);
    }
}
