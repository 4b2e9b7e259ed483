//! Job configuration: the JSON file layout and the flag overrides.

use std::f64::consts::PI;

use residuum_core::{
    make_keyhole, Complex, Contour, PathSegment, PlanarDomain, RadiiSchedule, SectorDecomposition,
};
use serde::Deserialize;

use crate::error::CliError;
use crate::format::OutputFormat;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Command {
    Winding,
    Integrate,
    Residue,
    Improper,
    Verify,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Winding => "winding",
            Command::Integrate => "integrate",
            Command::Residue => "residue",
            Command::Improper => "improper",
            Command::Verify => "verify",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum MeasureArg {
    Dz,
    Dzbar,
    Area,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum ConventionArg {
    Interior,
    Exterior,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum ResidueTable {
    Res,
    ResStar,
}

/// A complex number: `{"re": …, "im": …}`, the text `"re,im"`, or a real.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(untagged)]
pub enum ComplexIn {
    Parts { re: f64, im: f64 },
    Real(f64),
    Text(String),
}

impl ComplexIn {
    pub fn value(&self, field: &str) -> Result<Complex, CliError> {
        match self {
            ComplexIn::Parts { re, im } => Ok(Complex::new(*re, *im)),
            ComplexIn::Real(x) => Ok(Complex::new(*x, 0.0)),
            ComplexIn::Text(s) => parse_complex(s, field),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase", deny_unknown_fields)]
pub enum SegmentIn {
    Segment {
        from: ComplexIn,
        to: ComplexIn,
    },
    Arc {
        center: ComplexIn,
        radius: f64,
        theta_start: f64,
        theta_end: f64,
    },
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(untagged)]
pub enum ContourIn {
    Spec(String),
    Segments { segments: Vec<SegmentIn> },
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum DomainShape {
    Disc {
        center: ComplexIn,
        radius: f64,
    },
    Annulus {
        center: ComplexIn,
        inner: f64,
        outer: f64,
    },
    Rectangle {
        x_lo: f64,
        x_hi: f64,
        y_lo: f64,
        y_hi: f64,
    },
    AnnularSector {
        center: ComplexIn,
        inner: f64,
        outer: f64,
        phi_lo: f64,
        phi_hi: f64,
    },
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(untagged)]
pub enum DomainIn {
    Spec(String),
    Shape(DomainShape),
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SectorsIn {
    #[serde(default)]
    pub center: Option<ComplexIn>,
    pub angles: Vec<f64>,
}

#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeometryIn {
    pub contour: Option<ContourIn>,
    pub domain: Option<DomainIn>,
    pub sectors: Option<SectorsIn>,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Tolerances {
    pub tol: Option<f64>,
    pub boundary_tol: Option<f64>,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScheduleIn {
    pub eps0: Option<f64>,
    pub ratio: Option<f64>,
    pub steps: Option<usize>,
}

impl ScheduleIn {
    pub fn is_set(&self) -> bool {
        self.eps0.is_some() || self.ratio.is_some() || self.steps.is_some()
    }

    /// The default with any given field replaced.
    pub fn resolve(&self, default: RadiiSchedule) -> Result<RadiiSchedule, CliError> {
        RadiiSchedule::new(
            self.eps0.unwrap_or(default.eps0),
            self.ratio.unwrap_or(default.ratio),
            self.steps.unwrap_or(default.steps),
        )
        .map_err(|e| CliError::validation("schedule", e.to_string()))
    }
}

#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputIn {
    pub format: Option<OutputFormat>,
    pub path: Option<String>,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IntervalIn {
    pub a: Option<f64>,
    pub b: Option<f64>,
}

/// Everything a run needs. Every field is optional here; each command checks
/// for the ones it uses.
#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JobConfig {
    pub command: Option<Command>,
    pub expression: Option<String>,
    #[serde(default)]
    pub geometry: GeometryIn,
    pub points: Option<Vec<ComplexIn>>,
    pub singularities: Option<Vec<ComplexIn>>,
    #[serde(default)]
    pub interval: IntervalIn,
    pub measure: Option<MeasureArg>,
    pub convention: Option<ConventionArg>,
    pub at_infinity: Option<bool>,
    pub residue_table: Option<ResidueTable>,
    pub suite: Option<String>,
    #[serde(default)]
    pub tolerances: Tolerances,
    #[serde(default)]
    pub schedule: ScheduleIn,
    #[serde(default)]
    pub output: OutputIn,
}

impl JobConfig {
    pub fn from_json(text: &str) -> Result<JobConfig, CliError> {
        serde_json::from_str(text)
            .map_err(|e| CliError::validation("config", format!("invalid config: {e}")))
    }

    pub fn tol(&self) -> Result<f64, CliError> {
        let t = self.tolerances.tol.unwrap_or(1e-10);
        if !(t > 0.0 && t.is_finite()) {
            return Err(CliError::validation("tol", "tolerance must be positive"));
        }
        Ok(t)
    }

    pub fn format(&self) -> OutputFormat {
        self.output.format.unwrap_or(OutputFormat::Json)
    }

    pub fn require_expression(&self) -> Result<&str, CliError> {
        self.expression
            .as_deref()
            .ok_or_else(|| CliError::validation("expression", "an expression is required"))
    }

    pub fn contour(&self) -> Result<Contour, CliError> {
        let c = self
            .geometry
            .contour
            .as_ref()
            .ok_or_else(|| CliError::validation("contour", "a contour is required"))?;
        build_contour(c).map_err(|e| e.with_field("contour"))
    }

    pub fn domain(&self) -> Result<Option<PlanarDomain>, CliError> {
        self.geometry
            .domain
            .as_ref()
            .map(build_domain)
            .transpose()
            .map_err(|e| e.with_field("domain"))
    }

    pub fn sectors(
        &self,
        default_center: Complex,
    ) -> Result<Option<SectorDecomposition>, CliError> {
        let Some(s) = &self.geometry.sectors else {
            return Ok(None);
        };
        let center = match &s.center {
            Some(c) => c.value("sectors.center")?,
            None => default_center,
        };
        Ok(Some(
            SectorDecomposition::new(center, s.angles.clone())
                .map_err(|e| CliError::from(e).with_field("sectors"))?,
        ))
    }

    pub fn points(&self) -> Result<Vec<Complex>, CliError> {
        complex_list(self.points.as_deref().unwrap_or(&[]), "points")
    }

    pub fn singularities(&self) -> Result<Vec<Complex>, CliError> {
        complex_list(
            self.singularities.as_deref().unwrap_or(&[]),
            "singularities",
        )
    }
}

fn complex_list(v: &[ComplexIn], field: &str) -> Result<Vec<Complex>, CliError> {
    v.iter().map(|c| c.value(field)).collect()
}

pub fn parse_complex(s: &str, field: &str) -> Result<Complex, CliError> {
    let nums = parse_reals(s, field)?;
    match nums[..] {
        [re] => Ok(Complex::new(re, 0.0)),
        [re, im] => Ok(Complex::new(re, im)),
        _ => Err(CliError::validation(
            field,
            format!("expected `re,im`, got `{s}`"),
        )),
    }
}

pub fn parse_reals(s: &str, field: &str) -> Result<Vec<f64>, CliError> {
    s.split(',')
        .map(|t| {
            let t = t.trim();
            parse_real(t)
                .ok_or_else(|| CliError::validation(field, format!("`{t}` is not a number")))
        })
        .collect()
}

// Accepts plain numbers plus `pi` multiples such as `-pi/2` or `2pi`.
fn parse_real(t: &str) -> Option<f64> {
    if let Ok(x) = t.parse::<f64>() {
        return x.is_finite().then_some(x);
    }
    let (neg, body) = match t.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, t),
    };
    let (num, den) = match body.split_once('/') {
        Some((n, d)) => (n, d.parse::<f64>().ok()?),
        None => (body, 1.0),
    };
    let k = num.strip_suffix("pi")?;
    let k = if k.is_empty() {
        1.0
    } else {
        k.trim_end_matches('*').parse::<f64>().ok()?
    };
    let x = k * PI / den;
    Some(if neg { -x } else { x })
}

fn expect_len(field: &'static str, kind: &str, v: &[f64], n: usize) -> Result<(), CliError> {
    if v.len() != n {
        return Err(CliError::validation(
            field,
            format!("`{kind}` takes {n} numbers, got {}", v.len()),
        ));
    }
    Ok(())
}

/// Short contour syntax: `circle:cx,cy,r`, `rect:x_lo,x_hi,y_lo,y_hi`,
/// `square:cx,cy,half_side`, `polygon:x,y;x,y;…`,
/// `keyhole:cx,cy,R,delta,cut_angle,gap`.
pub fn parse_contour_spec(spec: &str) -> Result<Contour, CliError> {
    let (kind, rest) = spec.split_once(':').ok_or_else(|| {
        CliError::validation("contour", format!("expected `kind:params`, got `{spec}`"))
    })?;
    let c = |x: f64, y: f64| Complex::new(x, y);
    let contour = match kind {
        "circle" => {
            let v = parse_reals(rest, "contour")?;
            expect_len("contour", kind, &v, 3)?;
            Contour::circle(c(v[0], v[1]), v[2])?
        }
        "rect" => {
            let v = parse_reals(rest, "contour")?;
            expect_len("contour", kind, &v, 4)?;
            Contour::rectangle(v[0], v[1], v[2], v[3])?
        }
        "square" => {
            let v = parse_reals(rest, "contour")?;
            expect_len("contour", kind, &v, 3)?;
            Contour::rectangle(v[0] - v[2], v[0] + v[2], v[1] - v[2], v[1] + v[2])?
        }
        "polygon" => {
            let vertices: Vec<Complex> = rest
                .split(';')
                .map(|p| parse_complex(p, "contour"))
                .collect::<Result<_, _>>()?;
            Contour::polygon(&vertices)?
        }
        "keyhole" => {
            let v = parse_reals(rest, "contour")?;
            expect_len("contour", kind, &v, 6)?;
            make_keyhole(c(v[0], v[1]), v[2], v[3], v[4], v[5])?
        }
        _ => {
            return Err(CliError::validation(
                "contour",
                format!("unknown contour kind `{kind}`"),
            ))
        }
    };
    Ok(contour)
}

/// Short domain syntax: `disc:cx,cy,r`, `annulus:cx,cy,inner,outer`,
/// `rect:x_lo,x_hi,y_lo,y_hi`, `sector:cx,cy,inner,outer,phi_lo,phi_hi`.
pub fn parse_domain_spec(spec: &str) -> Result<PlanarDomain, CliError> {
    let (kind, rest) = spec.split_once(':').ok_or_else(|| {
        CliError::validation("domain", format!("expected `kind:params`, got `{spec}`"))
    })?;
    let v = parse_reals(rest, "domain")?;
    let c = |x: f64, y: f64| Complex::new(x, y);
    let dom = match kind {
        "disc" => {
            expect_len("domain", kind, &v, 3)?;
            PlanarDomain::Disc {
                center: c(v[0], v[1]),
                radius: v[2],
            }
        }
        "annulus" => {
            expect_len("domain", kind, &v, 4)?;
            PlanarDomain::Annulus {
                center: c(v[0], v[1]),
                inner: v[2],
                outer: v[3],
            }
        }
        "rect" => {
            expect_len("domain", kind, &v, 4)?;
            PlanarDomain::Rectangle {
                x_lo: v[0],
                x_hi: v[1],
                y_lo: v[2],
                y_hi: v[3],
            }
        }
        "sector" => {
            expect_len("domain", kind, &v, 6)?;
            PlanarDomain::AnnularSector {
                center: c(v[0], v[1]),
                inner: v[2],
                outer: v[3],
                phi_lo: v[4],
                phi_hi: v[5],
            }
        }
        _ => {
            return Err(CliError::validation(
                "domain",
                format!("unknown domain kind `{kind}`"),
            ))
        }
    };
    dom.validate()?;
    Ok(dom)
}

pub fn build_contour(c: &ContourIn) -> Result<Contour, CliError> {
    match c {
        ContourIn::Spec(s) => parse_contour_spec(s),
        ContourIn::Segments { segments } => {
            let segs = segments
                .iter()
                .map(|s| {
                    Ok(match s {
                        SegmentIn::Segment { from, to } => {
                            PathSegment::segment(from.value("contour")?, to.value("contour")?)
                        }
                        SegmentIn::Arc {
                            center,
                            radius,
                            theta_start,
                            theta_end,
                        } => PathSegment::arc(
                            center.value("contour")?,
                            *radius,
                            *theta_start,
                            *theta_end,
                        ),
                    })
                })
                .collect::<Result<Vec<_>, CliError>>()?;
            Ok(Contour::new(segs)?)
        }
    }
}

pub fn build_domain(d: &DomainIn) -> Result<PlanarDomain, CliError> {
    let dom = match d {
        DomainIn::Spec(s) => return parse_domain_spec(s),
        DomainIn::Shape(DomainShape::Disc { center, radius }) => PlanarDomain::Disc {
            center: center.value("domain")?,
            radius: *radius,
        },
        DomainIn::Shape(DomainShape::Annulus {
            center,
            inner,
            outer,
        }) => PlanarDomain::Annulus {
            center: center.value("domain")?,
            inner: *inner,
            outer: *outer,
        },
        DomainIn::Shape(DomainShape::Rectangle {
            x_lo,
            x_hi,
            y_lo,
            y_hi,
        }) => PlanarDomain::Rectangle {
            x_lo: *x_lo,
            x_hi: *x_hi,
            y_lo: *y_lo,
            y_hi: *y_hi,
        },
        DomainIn::Shape(DomainShape::AnnularSector {
            center,
            inner,
            outer,
            phi_lo,
            phi_hi,
        }) => PlanarDomain::AnnularSector {
            center: center.value("domain")?,
            inner: *inner,
            outer: *outer,
            phi_lo: *phi_lo,
            phi_hi: *phi_hi,
        },
    };
    dom.validate()?;
    Ok(dom)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reals_accept_pi_multiples() {
        assert_eq!(
            parse_reals("0, -pi/2, 2pi, 3*pi/4", "x").unwrap(),
            vec![0.0, -PI / 2.0, 2.0 * PI, 0.75 * PI]
        );
        assert!(parse_reals("1,,2", "x").is_err());
        assert!(parse_reals("nan", "x").is_err());
    }

    #[test]
    fn complex_inputs() {
        assert_eq!(
            parse_complex("1.5,-2", "p").unwrap(),
            Complex::new(1.5, -2.0)
        );
        assert_eq!(parse_complex("3", "p").unwrap(), Complex::new(3.0, 0.0));
        assert!(parse_complex("1,2,3", "p").is_err());
        let v: Vec<ComplexIn> = serde_json::from_str(r#"[{"re":1,"im":2},"0,1",4]"#).unwrap();
        let z: Vec<Complex> = v.iter().map(|c| c.value("p").unwrap()).collect();
        assert_eq!(
            z,
            vec![
                Complex::new(1.0, 2.0),
                Complex::new(0.0, 1.0),
                Complex::new(4.0, 0.0)
            ]
        );
    }

    #[test]
    fn contour_specs() {
        assert_eq!(
            parse_contour_spec("circle:0,0,1").unwrap().segments().len(),
            1
        );
        assert_eq!(
            parse_contour_spec("square:0,0,1").unwrap().segments().len(),
            4
        );
        assert_eq!(
            parse_contour_spec("keyhole:0,0,1,0.1,pi,0.01")
                .unwrap()
                .segments()
                .len(),
            4
        );
        assert_eq!(
            parse_contour_spec("polygon:0,0;1,0;0,1")
                .unwrap()
                .segments()
                .len(),
            3
        );
        let e = parse_contour_spec("circle:0,0,-1").unwrap_err();
        assert_eq!(e.code, crate::error::ErrorCode::Validation);
        assert!(parse_contour_spec("blob:1").is_err());
    }

    #[test]
    fn segment_list_contour() {
        let json = r#"{"segments":[{"type":"arc","center":{"re":0,"im":0},"radius":1,"theta_start":0,"theta_end":6.283185307179586}]}"#;
        let c: ContourIn = serde_json::from_str(json).unwrap();
        assert!(build_contour(&c).unwrap().is_closed());
    }

    #[test]
    fn unknown_fields_are_rejected() {
        assert!(JobConfig::from_json(r#"{"command":"winding","bogus":1}"#).is_err());
        let cfg = JobConfig::from_json(
            r#"{"command":"improper","expression":"log(z)","interval":{"a":-1,"b":1}}"#,
        )
        .unwrap();
        assert_eq!(cfg.command, Some(Command::Improper));
        assert_eq!(cfg.interval.b, Some(1.0));
    }
}
