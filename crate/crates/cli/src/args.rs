//! Command-line flags. Every flag overrides the matching config-file field.

use clap::{Args, Parser, Subcommand};

use crate::config::{
    parse_complex, parse_reals, Command, ComplexIn, ContourIn, ConventionArg, DomainIn, JobConfig,
    MeasureArg, ResidueTable, SectorsIn,
};
use crate::error::CliError;
use crate::format::OutputFormat;

#[derive(Debug, Parser)]
#[command(
    name = "residuum",
    version,
    about = "Contour potentials, partial residues and total values of improper integrals"
)]
pub struct Cli {
    /// JSON job file; flags given on the command line override its fields.
    #[arg(long, global = true, value_name = "PATH")]
    pub config: Option<String>,
    /// Quadrature tolerance; for `verify`, the pass threshold applied to every report.
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    /// Write the report to this file instead of stdout.
    #[arg(long, global = true, value_name = "PATH")]
    pub out: Option<String>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<OutputFormat>,
    #[command(subcommand)]
    pub command: Option<Sub>,
}

#[derive(Debug, Subcommand)]
pub enum Sub {
    /// Potential (2πi × winding number, or iα on the contour) of points.
    Winding(WindingArgs),
    /// Contour or area integral, with principal values about declared points.
    Integrate(IntegrateArgs),
    /// Residue pair at a point, from sectors, or at infinity.
    Residue(ResidueArgs),
    /// Principal, singular and total value of a 1-D improper integral.
    Improper(ImproperArgs),
    /// Run the identity verification suite.
    Verify(VerifyArgs),
}

#[derive(Debug, Default, Args)]
pub struct ScheduleArgs {
    /// First excision radius (or inverse radius at infinity).
    #[arg(long)]
    pub eps0: Option<f64>,
    /// Ratio between successive radii.
    #[arg(long)]
    pub ratio: Option<f64>,
    /// Number of refinements after the first radius.
    #[arg(long)]
    pub steps: Option<usize>,
}

#[derive(Debug, Args)]
pub struct WindingArgs {
    /// Contour, e.g. `circle:0,0,1`, `square:0,0,1`, `keyhole:0,0,1,0.1,pi,0.01`.
    #[arg(long, allow_hyphen_values = true)]
    pub contour: Option<String>,
    /// Query point `re,im`; repeatable.
    #[arg(long = "point", allow_hyphen_values = true)]
    pub points: Vec<String>,
    /// Distance under which a point counts as on the contour.
    #[arg(long)]
    pub boundary_tol: Option<f64>,
    #[arg(long, value_enum)]
    pub convention: Option<ConventionArg>,
}

#[derive(Debug, Args)]
pub struct IntegrateArgs {
    #[arg(long = "expr", allow_hyphen_values = true)]
    pub expression: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub contour: Option<String>,
    /// Domain for area integrals, e.g. `disc:0,0,1`.
    #[arg(long, allow_hyphen_values = true)]
    pub domain: Option<String>,
    #[arg(long, value_enum)]
    pub measure: Option<MeasureArg>,
    /// Singular point `re,im` to excise; repeatable.
    #[arg(long = "sing", allow_hyphen_values = true)]
    pub sing: Vec<String>,
    #[command(flatten)]
    pub schedule: ScheduleArgs,
}

#[derive(Debug, Args)]
pub struct ResidueArgs {
    #[arg(long = "expr", allow_hyphen_values = true)]
    pub expression: Option<String>,
    /// The singular point `re,im`.
    #[arg(long, allow_hyphen_values = true)]
    pub at: Option<String>,
    /// Sector boundary angles `φ1,φ2,…` (radians, `pi` allowed).
    #[arg(long, allow_hyphen_values = true)]
    pub sectors: Option<String>,
    /// Residue at infinity; `--sing` lists every finite singular point.
    #[arg(long)]
    pub at_infinity: bool,
    #[arg(long = "sing", allow_hyphen_values = true)]
    pub sing: Vec<String>,
    /// Which convergence table `--format csv` writes.
    #[arg(long, value_enum)]
    pub table: Option<ResidueTable>,
    #[command(flatten)]
    pub schedule: ScheduleArgs,
}

#[derive(Debug, Args)]
pub struct ImproperArgs {
    /// Antiderivative F; the integrand is F'.
    #[arg(long = "F", alias = "expr", allow_hyphen_values = true)]
    pub antiderivative: Option<String>,
    #[arg(long, allow_negative_numbers = true)]
    pub a: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub b: Option<f64>,
    /// Interior singular points, comma separated; repeatable.
    #[arg(long = "sing", allow_hyphen_values = true)]
    pub sing: Vec<String>,
    #[command(flatten)]
    pub schedule: ScheduleArgs,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// `all`, a group (planar, boundary, keyhole, vector, lemmas) or a case name.
    #[arg(long)]
    pub suite: Option<String>,
    /// List the cases instead of running them.
    #[arg(long)]
    pub list: bool,
}

fn points(v: &[String], field: &str) -> Result<Vec<ComplexIn>, CliError> {
    v.iter()
        .map(|s| parse_complex(s, field).map(|z| ComplexIn::Parts { re: z.re, im: z.im }))
        .collect()
}

fn schedule(s: &ScheduleArgs, cfg: &mut JobConfig) {
    if s.eps0.is_some() {
        cfg.schedule.eps0 = s.eps0;
    }
    if s.ratio.is_some() {
        cfg.schedule.ratio = s.ratio;
    }
    if s.steps.is_some() {
        cfg.schedule.steps = s.steps;
    }
}

impl Cli {
    /// Layers the flags over `cfg`. Returns whether `--list` was given.
    pub fn apply(&self, cfg: &mut JobConfig) -> Result<bool, CliError> {
        if let Some(t) = self.tol {
            cfg.tolerances.tol = Some(t);
        }
        if let Some(o) = &self.out {
            cfg.output.path = Some(o.clone());
        }
        if let Some(f) = self.format {
            cfg.output.format = Some(f);
        }
        let Some(sub) = &self.command else {
            return Ok(false);
        };
        let command = match sub {
            Sub::Winding(_) => Command::Winding,
            Sub::Integrate(_) => Command::Integrate,
            Sub::Residue(_) => Command::Residue,
            Sub::Improper(_) => Command::Improper,
            Sub::Verify(_) => Command::Verify,
        };
        if let Some(file_cmd) = cfg.command {
            if file_cmd != command {
                return Err(CliError::validation(
                    "command",
                    format!(
                        "config is for `{}` but `{}` was requested",
                        file_cmd.name(),
                        command.name()
                    ),
                ));
            }
        }
        cfg.command = Some(command);
        let mut list = false;
        match sub {
            Sub::Winding(a) => {
                if let Some(c) = &a.contour {
                    cfg.geometry.contour = Some(ContourIn::Spec(c.clone()));
                }
                if !a.points.is_empty() {
                    cfg.points = Some(points(&a.points, "point")?);
                }
                if a.boundary_tol.is_some() {
                    cfg.tolerances.boundary_tol = a.boundary_tol;
                }
                if a.convention.is_some() {
                    cfg.convention = a.convention;
                }
            }
            Sub::Integrate(a) => {
                if let Some(e) = &a.expression {
                    cfg.expression = Some(e.clone());
                }
                if let Some(c) = &a.contour {
                    cfg.geometry.contour = Some(ContourIn::Spec(c.clone()));
                }
                if let Some(d) = &a.domain {
                    cfg.geometry.domain = Some(DomainIn::Spec(d.clone()));
                }
                if a.measure.is_some() {
                    cfg.measure = a.measure;
                }
                if !a.sing.is_empty() {
                    cfg.singularities = Some(points(&a.sing, "sing")?);
                }
                schedule(&a.schedule, cfg);
            }
            Sub::Residue(a) => {
                if let Some(e) = &a.expression {
                    cfg.expression = Some(e.clone());
                }
                if let Some(p) = &a.at {
                    cfg.points = Some(points(std::slice::from_ref(p), "at")?);
                }
                if let Some(s) = &a.sectors {
                    let center = cfg.geometry.sectors.as_ref().and_then(|s| s.center.clone());
                    cfg.geometry.sectors = Some(SectorsIn {
                        center,
                        angles: parse_reals(s, "sectors")?,
                    });
                }
                if a.at_infinity {
                    cfg.at_infinity = Some(true);
                }
                if !a.sing.is_empty() {
                    cfg.singularities = Some(points(&a.sing, "sing")?);
                }
                if a.table.is_some() {
                    cfg.residue_table = a.table;
                }
                schedule(&a.schedule, cfg);
            }
            Sub::Improper(a) => {
                if let Some(e) = &a.antiderivative {
                    cfg.expression = Some(e.clone());
                }
                if a.a.is_some() {
                    cfg.interval.a = a.a;
                }
                if a.b.is_some() {
                    cfg.interval.b = a.b;
                }
                if !a.sing.is_empty() {
                    let mut v = Vec::new();
                    for s in &a.sing {
                        v.extend(parse_reals(s, "sing")?.into_iter().map(ComplexIn::Real));
                    }
                    cfg.singularities = Some(v);
                }
                schedule(&a.schedule, cfg);
            }
            Sub::Verify(a) => {
                if let Some(s) = &a.suite {
                    cfg.suite = Some(s.clone());
                }
                list = a.list;
            }
        }
        Ok(list)
    }
}
