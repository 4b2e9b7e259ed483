use std::fmt::Write as _;

use rayon::prelude::*;
use residuum_core::identities::suite::{self, SuiteCase};
use residuum_core::improper::default_schedule as improper_schedule;
use residuum_core::quad::TableRow;
use residuum_core::{
    default_infinity_schedule, default_schedule, integrate_area, integrate_path, potential_2d_with,
    residue_at_infinity, residue_from_sectors, residue_small_circle, sector_limits,
    vp_integrate_area, vp_integrate_path, vt_1d, BoundaryConvention, Complex, ExcisedIntegral,
    ExcisionSpec, Expr, ExtendedComplex, Limit, LimitPoint, Measure, RadiiSchedule, Status,
    VerificationReport,
};
use serde_json::{json, Value};

use crate::config::{ConventionArg, JobConfig, MeasureArg, ResidueTable};
use crate::error::{CliError, ErrorCode};
use crate::format::{complex, fmt_complex, fmt_real, real, table_json, Rendered};

/// A finished command and the exit code it asks for.
pub struct Outcome {
    pub rendered: Rendered,
    pub failure: Option<CliError>,
}

impl Outcome {
    fn ok(rendered: Rendered) -> Outcome {
        Outcome {
            rendered,
            failure: None,
        }
    }
}

fn expression(cfg: &JobConfig) -> Result<Expr, CliError> {
    Ok(Expr::parse(cfg.require_expression()?)?)
}

// ε₀ = 0.1·min(1, half the smallest gap, distance to `edge`).
fn excision_default(points: &[Complex], edge: impl Fn(Complex) -> f64) -> RadiiSchedule {
    let mut room: f64 = 1.0;
    for (i, &p) in points.iter().enumerate() {
        room = room.min(edge(p));
        for &q in &points[..i] {
            room = room.min(0.5 * (p - q).norm());
        }
    }
    RadiiSchedule::halving(0.1 * room)
}

pub fn winding(cfg: &JobConfig) -> Result<Outcome, CliError> {
    let contour = cfg.contour()?;
    contour
        .require_closed()
        .map_err(|e| CliError::from(e).with_field("contour"))?;
    let points = cfg.points()?;
    if points.is_empty() {
        return Err(CliError::validation(
            "points",
            "at least one point is required",
        ));
    }
    let tol = cfg
        .tolerances
        .boundary_tol
        .unwrap_or_else(|| contour.default_tolerance());
    let convention = match cfg.convention.unwrap_or(ConventionArg::Interior) {
        ConventionArg::Interior => BoundaryConvention::InteriorArc,
        ConventionArg::Exterior => BoundaryConvention::ExteriorArc,
    };
    let mut out = Vec::new();
    let mut text = String::new();
    for &p in &points {
        let pot = potential_2d_with(&contour, p, tol, convention)?;
        let mut obj =
            json!({ "value": complex(pot.value), "kind": pot.kind.name(), "winding": pot.winding });
        if let Some(alpha) = pot.interior_angle {
            obj["interior_angle"] = real(alpha);
        }
        if let Some(c) = pot.complement {
            obj["complement"] = complex(c);
        }
        if pot.non_simple {
            obj["non_simple"] = Value::Bool(true);
        }
        if points.len() > 1 {
            obj["point"] = complex(p);
        }
        let _ = writeln!(
            text,
            "{}  {}  winding {}  potential {}",
            fmt_complex(p),
            pot.kind.name(),
            pot.winding,
            fmt_complex(pot.value)
        );
        out.push(obj);
    }
    let json = if out.len() == 1 {
        out.pop().unwrap()
    } else {
        Value::Array(out)
    };
    Ok(Outcome::ok(Rendered {
        json,
        table: None,
        text,
    }))
}

fn excised_json(measure: &str, r: &ExcisedIntegral) -> Result<(Value, String), CliError> {
    let mut obj = json!({ "measure": measure, "principal_value": true });
    let text = match r.limit {
        Limit::Finite { value, error } => {
            obj["limit"] = json!("finite");
            obj["value"] = complex(value);
            obj["error_estimate"] = real(error);
            format!(
                "v.p. = {} (error {})\n",
                fmt_complex(value),
                fmt_real(error)
            )
        }
        Limit::Divergent { direction } => {
            obj["limit"] = json!("divergent");
            obj["direction"] = complex(direction);
            format!("v.p. diverges in direction {}\n", fmt_complex(direction))
        }
        Limit::Unstable { best, .. } => {
            return Err(CliError::non_convergence(format!(
                "excision limit does not settle (best estimate {})",
                fmt_complex(best)
            )))
        }
    };
    obj["evaluations"] = json!(r.evaluations);
    obj["table"] = table_json(&r.table);
    Ok((obj, text))
}

pub fn integrate(cfg: &JobConfig) -> Result<Outcome, CliError> {
    let f = expression(cfg)?;
    let tol = cfg.tol()?;
    let sing = cfg.singularities()?;
    let measure = cfg.measure.unwrap_or(MeasureArg::Dz);
    if measure == MeasureArg::Area {
        let dom = cfg
            .domain()?
            .ok_or_else(|| CliError::validation("domain", "area integrals need a domain"))?;
        if sing.is_empty() {
            let r = integrate_area(&f, &dom, tol)?;
            return Ok(plain(
                "area",
                r.value,
                r.abs_error_estimate,
                r.evaluations,
                r.converged,
            ));
        }
        let boundary = dom.boundary()?;
        let sched = cfg
            .schedule
            .resolve(excision_default(&sing, |p| boundary.distance(p)))?;
        let r = vp_integrate_area(&f, &dom, &ExcisionSpec::new(sing, sched), tol)?;
        let (json, text) = excised_json("area", &r)?;
        return Ok(Outcome::ok(Rendered {
            json,
            table: Some(r.table),
            text,
        }));
    }
    let (m, name) = match measure {
        MeasureArg::Dzbar => (Measure::Dzbar, "dzbar"),
        _ => (Measure::Dz, "dz"),
    };
    let contour = cfg.contour()?;
    if sing.is_empty() {
        let r = integrate_path(&f, &contour, m, tol)?;
        return Ok(plain(
            name,
            r.value,
            r.abs_error_estimate,
            r.evaluations,
            r.converged,
        ));
    }
    let sched = cfg.schedule.resolve(excision_default(&sing, |_| 1.0))?;
    let r = vp_integrate_path(&f, &contour, &sing, m, &sched, tol)?;
    let (json, text) = excised_json(name, &r)?;
    Ok(Outcome::ok(Rendered {
        json,
        table: Some(r.table),
        text,
    }))
}

fn plain(
    measure: &str,
    value: Complex,
    error: f64,
    evaluations: usize,
    converged: bool,
) -> Outcome {
    let json = json!({
        "measure": measure,
        "value": complex(value),
        "error_estimate": real(error),
        "evaluations": evaluations,
        "converged": converged,
    });
    let text = format!(
        "∫ f {measure} = {} (error {})\n",
        fmt_complex(value),
        fmt_real(error)
    );
    Outcome::ok(Rendered {
        json,
        table: None,
        text,
    })
}

pub fn residue(cfg: &JobConfig) -> Result<Outcome, CliError> {
    let f = expression(cfg)?;
    let sing = cfg.singularities()?;
    let at_infinity = cfg.at_infinity.unwrap_or(false);
    let at = match cfg.points()?.as_slice() {
        [] if at_infinity => Complex::new(0.0, 0.0),
        [] => {
            return Err(CliError::validation(
                "points",
                "the residue point is required (`--at re,im`)",
            ))
        }
        [p] => *p,
        _ => {
            return Err(CliError::validation(
                "points",
                "give exactly one residue point",
            ))
        }
    };

    if let Some(d) = cfg.sectors(at)? {
        let (limit_point, default) = if at_infinity {
            (LimitPoint::Infinity, default_infinity_schedule(&sing))
        } else {
            let others: Vec<Complex> = sing.iter().copied().filter(|&s| s != at).collect();
            (LimitPoint::Zero, default_schedule(at, &others))
        };
        let sched = cfg.schedule.resolve(default)?;
        let limits = sector_limits(&f, &d, limit_point, &sched)?;
        let pair = residue_from_sectors(&limits);
        let err = limits.limits.iter().map(|l| l.error).fold(0.0, f64::max);
        let per_sector: Vec<Value> = limits
            .limits
            .iter()
            .enumerate()
            .map(|(k, l)| {
                let (lo, hi) = d.bounds(k);
                json!({
                    "sector": k + 1,
                    "phi_lo": real(lo),
                    "phi_hi": real(hi),
                    "z_component": complex(l.z_component),
                    "zbar_component": complex(l.zbar_component),
                    "error_estimate": real(l.error),
                    "uniform_z": l.uniform_z,
                    "uniform_zbar": l.uniform_zbar,
                })
            })
            .collect();
        let json = json!({
            "res": complex(pair.res),
            "res_star": complex(pair.res_star),
            "method": if at_infinity { "sectors_at_infinity" } else { "sectors" },
            "error_estimate": real(err),
            "per_sector": per_sector,
        });
        let text = format!(
            "Res = {}\nRes* = {}\n",
            fmt_complex(pair.res),
            fmt_complex(pair.res_star)
        );
        return Ok(Outcome::ok(Rendered {
            json,
            table: None,
            text,
        }));
    }

    if at_infinity {
        let sched = cfg.schedule.resolve(default_infinity_schedule(&sing))?;
        let r = residue_at_infinity(&f, &sing, &sched)?;
        let secondary = match &r.secondary {
            Some(s) => json!({
                "res": complex(s.pair.res),
                "res_star": complex(s.pair.res_star),
                "method": s.method,
                "error_estimate": real(s.error),
            }),
            None => Value::Null,
        };
        let json = json!({
            "res": complex(r.primary.res),
            "res_star": complex(r.primary.res_star),
            "method": "minus_sum_of_finite",
            "error_estimate": real(r.primary_error),
            "per_sector": [],
            "secondary": secondary,
            "discrepancy": r.discrepancy.map(real),
        });
        let table = r
            .secondary
            .as_ref()
            .map(|s| pick(cfg, &s.table_res, &s.table_res_star));
        let text = format!(
            "Res∞ = {}\nRes*∞ = {}\n",
            fmt_complex(r.primary.res),
            fmt_complex(r.primary.res_star)
        );
        return Ok(Outcome::ok(Rendered { json, table, text }));
    }

    let others: Vec<Complex> = sing.iter().copied().filter(|&s| s != at).collect();
    let sched = cfg.schedule.resolve(default_schedule(at, &others))?;
    let r = residue_small_circle(&f, at, &sched)?;
    let json = json!({
        "res": complex(r.pair.res),
        "res_star": complex(r.pair.res_star),
        "method": r.method,
        "error_estimate": real(r.error),
        "per_sector": [],
    });
    let text = format!(
        "Res = {}\nRes* = {}\n",
        fmt_complex(r.pair.res),
        fmt_complex(r.pair.res_star)
    );
    let table = pick(cfg, &r.table_res, &r.table_res_star);
    Ok(Outcome::ok(Rendered {
        json,
        table: Some(table),
        text,
    }))
}

fn pick(cfg: &JobConfig, res: &[TableRow], res_star: &[TableRow]) -> Vec<TableRow> {
    match cfg.residue_table.unwrap_or(ResidueTable::Res) {
        ResidueTable::Res => res.to_vec(),
        ResidueTable::ResStar => res_star.to_vec(),
    }
}

fn extended(v: &ExtendedComplex) -> Value {
    match v {
        ExtendedComplex::Finite(z) => json!({ "kind": "finite", "value": complex(*z) }),
        ExtendedComplex::Infinite { direction } => {
            json!({ "kind": "infinite", "direction": complex(*direction) })
        }
    }
}

fn extended_text(v: &ExtendedComplex) -> String {
    match v {
        ExtendedComplex::Finite(z) => fmt_complex(*z),
        ExtendedComplex::Infinite { direction } => format!("∞·({})", fmt_complex(*direction)),
    }
}

pub fn improper(cfg: &JobConfig) -> Result<Outcome, CliError> {
    let f = expression(cfg)?;
    let tol = cfg.tol()?;
    let a = cfg
        .interval
        .a
        .ok_or_else(|| CliError::validation("a", "the lower limit is required"))?;
    let b = cfg
        .interval
        .b
        .ok_or_else(|| CliError::validation("b", "the upper limit is required"))?;
    let mut sing = Vec::new();
    for z in cfg.singularities()? {
        if z.im != 0.0 {
            return Err(CliError::validation(
                "singularities",
                "singular points of a 1-D integral must be real",
            ));
        }
        sing.push(z.re);
    }
    let sched = cfg.schedule.resolve(improper_schedule(a, b, &sing))?;
    let r = vt_1d(&f, a, b, &sing, &sched, tol)?;
    let table: Vec<Value> = r
        .table
        .iter()
        .map(|row| {
            json!({
                "step": row.step,
                "delta": real(row.delta),
                "excised": complex(row.excised),
                "jumps": complex(row.jumps),
                "total": complex(row.total),
                "err_estimate": real(row.error),
            })
        })
        .collect();
    let json = json!({
        "antiderivative": f.to_string(),
        "a": real(a),
        "b": real(b),
        "singularities": sing.iter().map(|&s| real(s)).collect::<Vec<_>>(),
        "branch": "principal logarithm, imaginary part in (-pi, pi]",
        "vp": extended(&r.vp),
        "vs": extended(&r.vs),
        "vt": complex(r.vt),
        "vt_check": complex(r.vt_check),
        "agreement": real(r.agreement),
        "table": table,
    });
    let text = format!(
        "v.p. = {}\nv.s. = {}\nv.t. = {}\nv.t. (matched radii) = {}\n",
        extended_text(&r.vp),
        extended_text(&r.vs),
        fmt_complex(r.vt),
        fmt_complex(r.vt_check)
    );
    Ok(Outcome::ok(Rendered {
        json,
        table: Some(r.convergence_table()),
        text,
    }))
}

fn report_json(case: &SuiteCase, r: &VerificationReport) -> Value {
    let details: Vec<Value> = r
        .details
        .iter()
        .map(|t| json!({ "name": t.name, "side": t.side.name(), "value": complex(t.value) }))
        .collect();
    let (conj_lhs, conj_rhs) = match r.conj {
        Some((l, rr)) => (complex(l), complex(rr)),
        None => (Value::Null, Value::Null),
    };
    json!({
        "name": r.name,
        "group": case.group,
        "status": r.status.name(),
        "pass": r.pass,
        "expect": case.expect.name(),
        "expectation_met": case.expect.met_by(r.status),
        "lhs": complex(r.lhs),
        "rhs": complex(r.rhs),
        "conj_lhs": conj_lhs,
        "conj_rhs": conj_rhs,
        "abs_gap": real(r.abs_gap),
        "tolerance": real(r.tolerance),
        "details": details,
        "notes": r.notes,
    })
}

// Applies a caller tolerance to a finished report.
fn rejudge(r: &mut VerificationReport, tol: f64) {
    if r.status == Status::NotApplicable {
        return;
    }
    r.tolerance = tol;
    r.pass = r.abs_gap <= tol;
    r.status = if r.pass { Status::Pass } else { Status::Fail };
}

/// Runs suite cases; `--tol`, when given, replaces each report's tolerance.
pub fn verify(cfg: &JobConfig, list: bool) -> Result<Outcome, CliError> {
    let selector = cfg.suite.as_deref().unwrap_or("all");
    let cases = suite::cases(selector).ok_or_else(|| {
        CliError::validation(
            "suite",
            format!("no suite, group or case named `{selector}`"),
        )
    })?;
    if list {
        let json = Value::Array(
            cases
                .iter()
                .map(|c| json!({ "name": c.name, "group": c.group, "expect": c.expect.name() }))
                .collect(),
        );
        let mut text = String::new();
        for c in &cases {
            let _ = writeln!(
                text,
                "{:<48} {:<9} expect {}",
                c.name,
                c.group,
                c.expect.name()
            );
        }
        return Ok(Outcome::ok(Rendered {
            json,
            table: None,
            text,
        }));
    }

    // Fan out; `collect` keeps suite declaration order.
    let results: Vec<_> = cases.par_iter().map(|c| c.run()).collect();
    let mut out = Vec::new();
    let mut text = format!(
        "{:<64} {:<15} {:<15} {:>10} {:>8}\n",
        "report", "status", "expect", "abs_gap", "tol"
    );
    let (mut unmet, mut errors, mut total) = (0usize, 0usize, 0usize);
    for (case, result) in cases.iter().zip(results) {
        match result {
            Ok(mut reports) => {
                if let Some(t) = cfg.tolerances.tol {
                    reports.iter_mut().for_each(|r| rejudge(r, t));
                }
                for r in &reports {
                    total += 1;
                    let met = case.expect.met_by(r.status);
                    unmet += usize::from(!met);
                    let _ = writeln!(
                        text,
                        "{:<64} {:<15} {:<15} {:>10} {:>8}{}",
                        r.name,
                        r.status.name(),
                        case.expect.name(),
                        format!("{:.2e}", r.abs_gap),
                        format!("{:.0e}", r.tolerance),
                        if met { "" } else { "  <- unexpected" }
                    );
                    out.push(report_json(case, r));
                }
            }
            Err(e) => {
                total += 1;
                errors += 1;
                let _ = writeln!(
                    text,
                    "{:<64} {:<15} {:<15}  {}",
                    case.name,
                    "error",
                    case.expect.name(),
                    e
                );
                out.push(json!({
                    "name": case.name,
                    "group": case.group,
                    "status": "error",
                    "pass": false,
                    "expect": case.expect.name(),
                    "expectation_met": false,
                    "error": CliError::from(e).to_json()["error"].clone(),
                }));
            }
        }
    }
    let _ = writeln!(
        text,
        "\n{} reports, {} unexpected, {} errors",
        total, unmet, errors
    );
    let failure = if errors > 0 {
        Some(CliError {
            code: ErrorCode::NonConvergence,
            message: format!("{errors} case(s) could not be computed"),
            field: Some("suite".into()),
        })
    } else if unmet > 0 {
        Some(CliError {
            code: ErrorCode::Verification,
            message: format!("{unmet} of {total} report(s) did not meet their expectation"),
            field: Some("suite".into()),
        })
    } else {
        None
    };
    Ok(Outcome {
        rendered: Rendered {
            json: Value::Array(out),
            table: None,
            text,
        },
        failure,
    })
}
