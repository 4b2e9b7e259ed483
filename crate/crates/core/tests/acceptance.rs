//! Acceptance checks. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any criterion fails.

use std::f64::consts::{PI, TAU};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use residuum_core::identities::catalog::{Family, CATALOG};
use residuum_core::identities::suite;
use residuum_core::{
    check_boundary_singularity_identity, check_keyhole_log, check_planar_residue_identity,
    default_infinity_schedule, default_schedule, integrate_path, make_keyhole, potential_2d,
    residue_at_infinity, residue_from_sectors, residue_small_circle, sector_limits, vt_1d, Complex,
    Contour, Expr, ExtendedComplex, LimitPoint, Measure, PathSegment, PlanarDomain, PotentialKind,
    RadiiSchedule, SectorDecomposition, Side, Status,
};

type Outcome = Result<String, String>;
type Check = fn() -> Outcome;
type Membership = Box<dyn Fn(Complex) -> bool>;

fn c(re: f64, im: f64) -> Complex {
    Complex::new(re, im)
}

fn e(s: &str) -> Expr {
    Expr::parse(s).unwrap()
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn timed(limit: Duration, f: impl FnOnce() -> Outcome) -> Outcome {
    let t = Instant::now();
    let detail = f()?;
    let took = t.elapsed();
    ensure(took < limit, || format!("took {took:.2?}, limit {limit:?}"))?;
    Ok(format!("{detail}; {took:.2?}"))
}

fn potential_dichotomy() -> Outcome {
    timed(Duration::from_secs(5), || {
        let (r_out, r_in, cut, gap) = (1.0, 0.2, PI, 0.1);
        let cases: Vec<(&str, Contour, Membership)> = vec![
            (
                "circle",
                Contour::circle(c(0.0, 0.0), 1.0).unwrap(),
                Box::new(|p: Complex| p.norm() < 1.0),
            ),
            (
                "square",
                Contour::rectangle(-1.0, 1.0, -1.0, 1.0).unwrap(),
                Box::new(|p: Complex| p.re.abs() < 1.0 && p.im.abs() < 1.0),
            ),
            (
                "keyhole",
                make_keyhole(c(0.0, 0.0), r_out, r_in, cut, gap).unwrap(),
                Box::new(move |p: Complex| {
                    let off_cut = (p.arg() - cut).rem_euclid(TAU);
                    p.norm() > r_in && p.norm() < r_out && off_cut > gap && off_cut < TAU - gap
                }),
            ),
        ];
        let mut worst: f64 = 0.0;
        let mut checked = 0;
        for (name, contour, inside) in &cases {
            let tol = contour.default_tolerance();
            for i in 0..41 {
                for j in 0..41 {
                    let p = c(-1.5 + 3.0 * i as f64 / 40.0, -1.5 + 3.0 * j as f64 / 40.0);
                    if contour.distance(p) <= 1e-9 {
                        continue;
                    }
                    let pot =
                        potential_2d(contour, p, tol).map_err(|e| format!("{name} at {p}: {e}"))?;
                    let expect = if inside(p) { c(0.0, TAU) } else { c(0.0, 0.0) };
                    let want_kind = if inside(p) {
                        PotentialKind::Interior
                    } else {
                        PotentialKind::Exterior
                    };
                    ensure(pot.kind == want_kind, || {
                        format!("{name} at {p}: kind {:?}", pot.kind)
                    })?;
                    worst = worst.max((pot.value - expect).norm());
                    checked += 1;
                }
            }
        }
        ensure(worst <= 1e-10, || format!("gap {worst:e}"))?;
        Ok(format!("{checked} points, max gap {worst:e}"))
    })
}

const AB: [(f64, f64); 3] = [(1.0, 1.0), (1.0, 2.0), (3.0, 0.5)];

fn excision(a: f64, b: f64) -> RadiiSchedule {
    RadiiSchedule::halving(0.1 * a.min(b).min(1.0))
}

fn log_total_value() -> Outcome {
    let f = e("log(z)");
    let mut worst: f64 = 0.0;
    for (a, b) in AB {
        let r = vt_1d(&f, -a, b, &[0.0], &excision(a, b), 1e-10).map_err(|e| e.to_string())?;
        let want = c((b / a).ln(), -PI);
        let vp = r.vp.finite().ok_or("vp is infinite")?;
        worst = worst
            .max((r.vt - want).norm())
            .max((r.vt_check - want).norm())
            .max((vp - (b / a).ln()).norm());
    }
    ensure(worst <= 1e-8, || format!("max error {worst:e}"))?;
    Ok(format!("max error {worst:e}"))
}

fn is_infinite(v: ExtendedComplex, dir: f64) -> bool {
    matches!(v, ExtendedComplex::Infinite { direction } if (direction - c(dir, 0.0)).norm() < 1e-12)
}

fn reciprocal_total_value() -> Outcome {
    let minus = e("-1/z");
    let plus = e("1/z");
    let mut worst: f64 = 0.0;
    for (a, b) in AB {
        let s = excision(a, b);
        let r = vt_1d(&minus, -a, b, &[0.0], &s, 1e-10).map_err(|e| e.to_string())?;
        worst = worst.max((r.vt - c(-(a + b) / (a * b), 0.0)).norm());
        worst = worst.max((r.vt_check - r.vt).norm());
        // F = 1/x: integrand −1/x², v.p. runs to −∞ while the jump runs to +∞.
        let q = vt_1d(&plus, -a, b, &[0.0], &s, 1e-10).map_err(|e| e.to_string())?;
        ensure(is_infinite(q.vp, -1.0) && is_infinite(q.vs, 1.0), || {
            format!("vp {} vs {}", q.vp, q.vs)
        })?;
        worst = worst.max((q.vt - c((a + b) / (a * b), 0.0)).norm());
    }
    ensure(worst <= 1e-8, || format!("max error {worst:e}"))?;
    Ok(format!("max error {worst:e}; vp ∞·(−1), vs ∞·(+1)"))
}

fn keyhole_log() -> Outcome {
    let reports = check_keyhole_log(1.0, &RadiiSchedule::halving(0.25), 1e-9, 1e-6)
        .map_err(|e| e.to_string())?;
    let mut worst: f64 = 0.0;
    for r in &reports {
        let tol = if r.name.starts_with("log_circle") {
            1e-8
        } else {
            1e-6
        };
        ensure(r.status == Status::Pass && r.abs_gap <= tol, || {
            format!("{}: gap {:e}", r.name, r.abs_gap)
        })?;
        worst = worst.max(r.abs_gap);
    }
    let circle = integrate_path(
        &e("log(z)"),
        &[PathSegment::arc(c(0.0, 0.0), 1.0, -PI, PI)],
        Measure::Dz,
        1e-12,
    )
    .map_err(|e| e.to_string())?;
    let gap = (circle.value - c(0.0, -TAU)).norm();
    ensure(gap <= 1e-8, || format!("circle gap {gap:e}"))?;
    Ok(format!(
        "{} reports, max gap {worst:e}; circle gap {gap:e}",
        reports.len()
    ))
}

fn planar_catalog() -> Outcome {
    timed(Duration::from_secs(60), || {
        let mut worst: f64 = 0.0;
        for entry in CATALOG {
            let contour = entry.contour().map_err(|e| e.to_string())?;
            let r = check_planar_residue_identity(
                &entry.expr(),
                &contour,
                &entry.domain,
                &entry.singular_points(),
                1e-6,
            )
            .map_err(|e| format!("{}: {e}", entry.name))?;
            ensure(r.status == Status::Pass, || {
                format!("{}: gap {:e}", entry.name, r.abs_gap)
            })?;
            worst = worst.max(r.abs_gap);
        }
        let area = CATALOG.iter().filter(|e| e.has_area_term()).count();
        ensure(area >= 3, || {
            format!("only {area} entries with an area term")
        })?;
        Ok(format!(
            "{} entries ({area} with area term), max gap {worst:e}",
            CATALOG.len()
        ))
    })
}

fn boundary_singularity() -> Outcome {
    let unit = PlanarDomain::Disc {
        center: c(0.0, 0.0),
        radius: 1.0,
    };
    let circle = unit.boundary().unwrap();
    let one = [c(1.0, 0.0)];
    let mut out = Vec::new();
    for (src, rhs) in [
        ("1/(z-1)", c(0.0, PI)),
        ("1/((z-1)*(z+2))", c(0.0, PI / 3.0)),
    ] {
        let r = check_boundary_singularity_identity(&e(src), &circle, &unit, &[], &one, 1e-6)
            .map_err(|e| e.to_string())?;
        let rhs_gap = (r.side_total(Side::Rhs) - rhs).norm();
        ensure(r.status == Status::Pass && rhs_gap <= 1e-6, || {
            format!("{src}: gap {:e}, rhs {}", r.abs_gap, r.rhs)
        })?;
        out.push(format!("{src} gap {:e}", r.abs_gap));
    }
    Ok(out.join(", "))
}

fn sector_residues() -> Outcome {
    let mut compared = 0;
    let mut skipped = 0;
    let mut worst: f64 = 0.0;
    for entry in CATALOG {
        let f = entry.expr();
        let pts = entry.singular_points();
        for &p in &pts {
            let sched = default_schedule(p, &pts);
            let direct = residue_small_circle(&f, p, &sched)
                .map_err(|e| format!("{} at {p}: {e}", entry.name))?;
            for k in [1, 2, 4] {
                let d = SectorDecomposition::uniform(p, k, 0.3).unwrap();
                match sector_limits(&f, &d, LimitPoint::Zero, &sched) {
                    Ok(lim) => {
                        let gap = residue_from_sectors(&lim).distance(&direct.pair);
                        ensure(gap <= 1e-6, || {
                            format!("{} at {p}, K = {k}: gap {gap:e}", entry.name)
                        })?;
                        worst = worst.max(gap);
                        compared += 1;
                    }
                    Err(_) => skipped += 1,
                }
            }
        }
    }
    ensure(compared > 0, || "no sector limits exist".into())?;
    Ok(format!(
        "{compared} decompositions compared, {skipped} without limits, max gap {worst:e}"
    ))
}

fn residue_infinity_routes() -> Outcome {
    let mut worst: f64 = 0.0;
    let mut n = 0;
    for entry in CATALOG.iter().filter(|e| e.family == Family::Rational) {
        let pts = entry.singular_points();
        let r = residue_at_infinity(&entry.expr(), &pts, &default_infinity_schedule(&pts))
            .map_err(|e| format!("{}: {e}", entry.name))?;
        let gap = r
            .discrepancy
            .ok_or_else(|| format!("{}: no inversion route", entry.name))?;
        ensure(gap <= 1e-6, || {
            format!("{}: discrepancy {gap:e}", entry.name)
        })?;
        worst = worst.max(gap);
        n += 1;
    }
    Ok(format!("{n} rational entries, max discrepancy {worst:e}"))
}

fn lemma_suite() -> Outcome {
    let mut n = 0;
    let mut half_plane = None;
    for case in suite::cases("lemmas").unwrap() {
        for r in case.run().map_err(|e| format!("{}: {e}", case.name))? {
            ensure(case.expect.met_by(r.status), || {
                format!("{}: {:?}, gap {:e}", r.name, r.status, r.abs_gap)
            })?;
            ensure(
                r.status != Status::Pass || r.abs_gap <= suite::LEMMA_TOL,
                || format!("{}: gap {:e}", r.name, r.abs_gap),
            )?;
            if case.name == "lemmas.vt_sector.half_plane" {
                half_plane = Some(r.lhs);
            }
            n += 1;
        }
    }
    let lhs = half_plane.ok_or("half-plane case missing")?;
    let gap = (lhs - c(PI, 0.0)).norm();
    ensure(gap <= 1e-6, || format!("half-plane lhs {lhs}, gap {gap:e}"))?;
    Ok(format!("{n} reports as expected; half-plane gap {gap:e}"))
}

fn wirtinger_fd(rng: &mut ChaCha8Rng) -> Result<f64, String> {
    let exprs = [
        "z*conj(z)^2",
        "exp(z)*conj(z)",
        "sin(z)/(conj(z)+3)",
        "log(z*conj(z)+1)",
        "cos(conj(z))*z^3",
    ];
    let mut worst: f64 = 0.0;
    for src in exprs {
        let f = e(src);
        let (dz, db) = (f.wirtinger_dz(), f.wirtinger_dzbar());
        for _ in 0..20 {
            let z = c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
            let h = 1e-6;
            let ev = |w: Complex| f.eval(w).unwrap();
            let fx = (ev(z + h) - ev(z - h)) / (2.0 * h);
            let fy = (ev(z + c(0.0, h)) - ev(z - c(0.0, h))) / (2.0 * h);
            let i = c(0.0, 1.0);
            let want_dz = 0.5 * (fx - i * fy);
            let want_db = 0.5 * (fx + i * fy);
            let scale = 1.0 + want_dz.norm().max(want_db.norm());
            let gap = ((dz.eval(z).unwrap() - want_dz).norm())
                .max((db.eval(z).unwrap() - want_db).norm())
                / scale;
            worst = worst.max(gap);
        }
    }
    ensure(worst <= 1e-5, || format!("Wirtinger gap {worst:e}"))?;
    Ok(worst)
}

fn orientation_additivity(rng: &mut ChaCha8Rng) -> Result<f64, String> {
    let tol = 1e-10;
    let f = e("exp(z)*conj(z) + 1/(z-3)");
    let mut worst: f64 = 0.0;
    for _ in 0..20 {
        let a = c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        let b = c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        let t = rng.gen_range(0.1..0.9);
        let m = a + (b - a) * t;
        for measure in [Measure::Dz, Measure::Dzbar] {
            let int = |p: Complex, q: Complex| {
                integrate_path(&f, &[PathSegment::segment(p, q)], measure, tol)
                    .unwrap()
                    .value
            };
            let whole = int(a, b);
            worst = worst
                .max((whole + int(b, a)).norm())
                .max((whole - int(a, m) - int(m, b)).norm());
        }
        let (t0, t1) = (rng.gen_range(-PI..0.0), rng.gen_range(0.0..PI));
        let arc = |s: f64, e: f64| {
            integrate_path(
                &f,
                &[PathSegment::arc(c(0.0, 0.0), 1.5, s, e)],
                Measure::Dz,
                tol,
            )
            .unwrap()
            .value
        };
        worst = worst
            .max((arc(t0, t1) + arc(t1, t0)).norm())
            .max((arc(t0, t1) - arc(t0, 0.0) - arc(0.0, t1)).norm());
    }
    ensure(worst <= 2.0 * tol, || {
        format!("orientation/additivity gap {worst:e}")
    })?;
    Ok(worst)
}

fn residue_linearity(rng: &mut ChaCha8Rng) -> Result<f64, String> {
    let f = e("1/z + 2/z^2 + 1/conj(z)");
    let g = e("exp(z)/z + cos(z)/conj(z)");
    let o = c(0.0, 0.0);
    let sched = RadiiSchedule::halving(0.1);
    let res = |h: &Expr, p: Complex| residue_small_circle(h, p, &sched).unwrap().pair;
    let (rf, rg) = (res(&f, o), res(&g, o));
    let mut worst: f64 = 0.0;
    for _ in 0..5 {
        let (alpha, beta) = (
            c(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0)),
            c(rng.gen_range(-2.0..2.0), 0.0),
        );
        let combo = Expr::parse(&format!(
            "({})*({}) + ({})*({})",
            fmt_c(alpha),
            "1/z + 2/z^2 + 1/conj(z)",
            fmt_c(beta),
            "exp(z)/z + cos(z)/conj(z)"
        ))
        .unwrap();
        let want = rf.scale(alpha).add(rg.scale(beta));
        worst = worst.max(res(&combo, o).distance(&want));
        let s = c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        worst = worst.max(res(&f.translate(-s), s).distance(&rf));
    }
    ensure(worst <= 1e-8, || {
        format!("linearity/translation gap {worst:e}")
    })?;
    Ok(worst)
}

fn fmt_c(z: Complex) -> String {
    format!("{:?}+({:?})*i", z.re, z.im)
}

fn matched_radius() -> Result<f64, String> {
    let mut worst: f64 = 0.0;
    for (src, a, b) in [
        ("log(z)", -1.0, 2.0),
        ("1/z", -1.0, 2.0),
        ("1/z^2+3*z", -0.5, 1.0),
        ("2/z+log(z)", -2.0, 1.0),
    ] {
        let tol = 1e-10;
        let r = vt_1d(&e(src), a, b, &[0.0], &RadiiSchedule::halving(0.05), tol)
            .map_err(|e| e.to_string())?;
        for row in &r.table {
            // The excised integral and the jumps each grow like the
            // singularity, so the quadrature tolerance is relative to them.
            let gap = (row.total - r.vt).norm() / (1.0 + row.excised.norm() + row.jumps.norm());
            ensure(gap <= (10.0 * tol).max(row.error), || {
                format!("{src} step {}: gap {gap:e}", row.step)
            })?;
            worst = worst.max(gap);
        }
    }
    Ok(worst)
}

fn cli_determinism() -> Result<usize, String> {
    let jobs: &[&[&str]] = &[
        &[
            "winding",
            "--contour",
            "square:0,0,1",
            "--point",
            "0,0",
            "--point",
            "1,0",
            "--point",
            "1,1",
        ],
        &[
            "integrate",
            "--expr",
            "conj(z)",
            "--domain",
            "disc:0,0,1",
            "--measure",
            "area",
        ],
        &[
            "residue",
            "--expr",
            "1/z+conj(z)/z^2",
            "--at",
            "0,0",
            "--sectors",
            "0,2",
        ],
        &[
            "improper", "--F", "log(z)", "--a", "-1", "--b", "2", "--sing", "0",
        ],
        &["verify", "--suite", "boundary"],
    ];
    for job in jobs {
        let args: Vec<String> = std::iter::once("residuum")
            .chain(job.iter().copied())
            .map(String::from)
            .collect();
        let runs: Vec<(u8, Vec<u8>)> = (0..2)
            .map(|_| {
                let (mut out, mut err) = (Vec::new(), Vec::new());
                (residuum_cli::run(&args, &mut out, &mut err), out)
            })
            .collect();
        ensure(runs[0].0 == 0, || format!("{job:?}: exit {}", runs[0].0))?;
        ensure(runs[0] == runs[1], || {
            format!("{job:?}: output differs between runs")
        })?;
    }
    Ok(jobs.len())
}

fn property_suites() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(20240611);
    let w = wirtinger_fd(&mut rng)?;
    let q = orientation_additivity(&mut rng)?;
    let r = residue_linearity(&mut rng)?;
    let m = matched_radius()?;
    let jobs = cli_determinism()?;
    Ok(format!("wirtinger {w:e}, quadrature {q:e}, residue {r:e}, matched {m:e}, {jobs} CLI jobs byte-identical"))
}

fn main() -> ExitCode {
    let criteria: [(&str, Check); 10] = [
        (
            "potential dichotomy on circle, square and keyhole grids",
            potential_dichotomy,
        ),
        ("total value of log over [-a, b]", log_total_value),
        ("total value of 1/x^2 over [-a, b]", reciprocal_total_value),
        ("keyhole log identities", keyhole_log),
        ("planar residue identity on the catalog", planar_catalog),
        ("boundary singularity identity", boundary_singularity),
        ("sector residues against small circles", sector_residues),
        ("residue at infinity routes", residue_infinity_routes),
        ("lemma suite", lemma_suite),
        ("property suites and CLI determinism", property_suites),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        match check() {
            Ok(detail) => println!("PASS {:>2} {name}: {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {why}", i + 1);
            }
        }
    }
    println!(
        "{} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
