//! Subcommand implementations. Each produces a CSV table, a plot and summary lines.

use npms_core::caustics::{
    caustic_curve, critical_curve, critical_point, critical_points_kappa1, cusp_angles, image_count_survey, reduce,
    Caustic, SourceGrid,
};
use npms_core::imcf::{imcf_flow, verify_capacity_bound};
use npms_core::lens::{find_images, lens_map, light_curve, rotate, ComplexPoint, LensModel};
use npms_core::spherical::{
    adm_mass, capacity_of_center, hawking_mass_sphere, mass_report, parse_tabulated, radial_capacity, scalar_curvature,
    AreaProfile, RadialProfile, RegularMass,
};
use npms_core::weyl::{
    adm_flux, cylinder_area, cylinder_area_exponent, energy_exponent, level_set_energy_on_level,
    level_set_mass_integrand, vacuum_residuals, zv_potentials, WeylGrid, WeylPoint, ZVModel,
};
use num_complex::Complex64;

use crate::cli::{Command, Lens, Profile, ProfileName};
use crate::error::{CliError, CliResult};
use crate::svg::{Plot, Series};
use crate::table::{Cell, Table};

/// Survey cells closer than this to the caustic are flagged.
const SURVEY_MARGIN: f64 = 1e-3;
const IMCF_INITIAL_STEP: f64 = 1e-2;

pub struct Report {
    pub table: Table,
    pub plot: Plot,
    pub summary: Vec<String>,
}

pub fn run(command: &Command) -> CliResult<Report> {
    match command {
        Command::LensImages { lens, y, .. } => lens_images(lens, y),
        Command::LensLightcurve { m, d, t0, t1, n, .. } => lens_lightcurve(*m, *d, *t0, *t1, *n),
        Command::LensCritical { lens, samples, .. } => lens_critical(lens, *samples),
        Command::LensCaustics { lens, samples, .. } => lens_caustics(lens, *samples),
        Command::LensCusps { lens, .. } => lens_cusps(lens),
        Command::LensSurvey {
            lens, radius, samples, ..
        } => lens_survey(lens, *radius, *samples),
        Command::SphericalReport {
            profile,
            r0,
            radius,
            samples,
            ..
        } => spherical_report(profile, *r0, *radius, *samples),
        Command::ImcfFlow { profile, r0, t_end, .. } => imcf(profile, *r0, *t_end),
        Command::WeylZv {
            m,
            a,
            rho,
            radius,
            samples,
            ..
        } => weyl(*m, *a, *rho, *radius, *samples),
    }
}

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

fn plot(title: String, x: &str, y: &str, series: Vec<Series>, equal_aspect: bool) -> Plot {
    Plot {
        title,
        x_label: x.into(),
        y_label: y.into(),
        series,
        equal_aspect,
    }
}

fn xy(z: ComplexPoint) -> (f64, f64) {
    (z.re, z.im)
}

const GAP: (f64, f64) = (f64::NAN, f64::NAN);

fn model(lens: &Lens) -> CliResult<LensModel> {
    Ok(LensModel::new(lens.m, lens.kappa, lens.gamma, lens.theta)?)
}

fn lens_title(kind: &str, l: &Lens) -> String {
    format!(
        "{kind}: m={}, kappa={}, gamma={}, theta={}",
        l.m, l.kappa, l.gamma, l.theta
    )
}

fn parse_pair(s: &str) -> CliResult<Complex64> {
    let bad = || usage(format!("--y: expected `y1,y2`, got `{s}`"));
    let (a, b) = s.split_once(',').ok_or_else(bad)?;
    let a: f64 = a.trim().parse().map_err(|_| bad())?;
    let b: f64 = b.trim().parse().map_err(|_| bad())?;
    Ok(Complex64::new(a, b))
}

fn lens_images(lens: &Lens, y: &str) -> CliResult<Report> {
    let y = parse_pair(y)?;
    let model = model(lens)?;
    let set = find_images(y, &model)?;
    let mut table = Table::new(vec!["x1", "x2", "signed_magnification", "parity", "residual"]);
    for im in &set.images {
        table.push(vec![
            im.position.re.into(),
            im.position.im.into(),
            Cell::opt(Some(im.signed_magnification)),
            Cell::Int(im.parity as i64),
            im.residual.into(),
        ]);
    }
    let mut summary = vec![format!("images = {}", set.len())];
    let f = set.flags;
    for (on, name) in [
        (f.inside_caustic, "source inside caustic"),
        (f.on_caustic, "source on caustic"),
        (f.degenerate_linear_part, "kappa = 1: degenerate linear part"),
    ] {
        if on {
            summary.push(name.to_string());
        }
    }
    let series = vec![
        Series::markers("images", set.images.iter().map(|i| xy(i.position)).collect()),
        Series::markers("source", vec![xy(y)]),
    ];
    Ok(Report {
        table,
        plot: plot(lens_title("images", lens), "x1", "x2", series, true),
        summary,
    })
}

fn lens_lightcurve(m: f64, d: f64, t0: f64, t1: f64, n: usize) -> CliResult<Report> {
    if n < 2 {
        return Err(usage(format!("--n must be at least 2, got {n}")));
    }
    for (name, v) in [("--m", m), ("--t0", t0), ("--t1", t1)] {
        if !v.is_finite() {
            return Err(usage(format!("{name} must be finite")));
        }
    }
    if !(d >= 0.0 && d.is_finite()) {
        return Err(usage(format!("--d must be a non-negative impact parameter, got {d}")));
    }
    let times: Vec<f64> = (0..n).map(|i| t0 + (t1 - t0) * i as f64 / (n - 1) as f64).collect();
    let curve = light_curve(m, d, &times);
    let mut table = Table::new(vec!["t", "mu"]);
    let mut pts = Vec::with_capacity(n);
    for &(t, mu) in &curve {
        table.push(vec![t.into(), Cell::opt(mu)]);
        pts.push((t, mu.unwrap_or(f64::NAN)));
    }
    let missing = curve.iter().filter(|c| c.1.is_none()).count();
    Ok(Report {
        table,
        plot: plot(
            format!("light curve: m={m}, d={d}"),
            "t",
            "mu",
            vec![Series::line("mu", pts)],
            false,
        ),
        summary: vec![format!("samples without images = {missing}")],
    })
}

fn curve_header(x: &'static str) -> Vec<&'static str> {
    match x {
        "x" => vec!["phi", "x1_plus", "x2_plus", "x1_minus", "x2_minus"],
        _ => vec!["phi", "y1_plus", "y2_plus", "y1_minus", "y2_minus"],
    }
}

/// Rows ordered by `phi`, with NA rows at the gaps.
struct CurveRows {
    rows: Vec<(f64, Option<(ComplexPoint, ComplexPoint)>)>,
}

impl CurveRows {
    fn into_report(self, header: Vec<&'static str>, title: String, axis: (&str, &str)) -> Report {
        let mut table = Table::new(header);
        let (mut plus, mut minus) = (Vec::new(), Vec::new());
        for (phi, pair) in &self.rows {
            let phi = Cell::opt(Some(*phi));
            match pair {
                Some((a, b)) => {
                    table.push(vec![phi, a.re.into(), a.im.into(), b.re.into(), b.im.into()]);
                    plus.push(xy(*a));
                    minus.push(xy(*b));
                }
                None => {
                    table.push(vec![phi, Cell::Missing, Cell::Missing, Cell::Missing, Cell::Missing]);
                    plus.push(GAP);
                    minus.push(GAP);
                }
            }
        }
        let gaps = self.rows.iter().filter(|r| r.1.is_none()).count();
        Report {
            table,
            plot: plot(
                title,
                axis.0,
                axis.1,
                vec![Series::line("+", plus), Series::line("-", minus)],
                true,
            ),
            summary: vec![format!("samples = {}, gaps = {gaps}", self.rows.len() - gaps)],
        }
    }
}

fn point_rows(points: Vec<(ComplexPoint, ComplexPoint)>, header: Vec<&'static str>, title: String) -> Report {
    let mut table = Table::new(header);
    let mut pts = Vec::new();
    for pair in points.chunks(2) {
        let (a, b) = (pair[0], pair.get(1).copied().unwrap_or(pair[0]));
        table.push(vec![
            Cell::Missing,
            a.0.re.into(),
            a.0.im.into(),
            b.0.re.into(),
            b.0.im.into(),
        ]);
        pts.push(xy(a.0));
        pts.push(xy(b.0));
    }
    Report {
        table,
        plot: plot(title, "1", "2", vec![Series::markers("points", pts)], true),
        summary: vec![format!("kappa = 1: {} isolated points", points.len())],
    }
}

fn lens_critical(lens: &Lens, samples: usize) -> CliResult<Report> {
    let model = model(lens)?;
    let title = lens_title("critical curve", lens);
    if model.kappa == 1.0 {
        let pts = critical_points_kappa1(model.m, model.gamma)?
            .into_iter()
            .map(|z| {
                let z = rotate(z, model.theta);
                (z, z)
            })
            .collect();
        return Ok(point_rows(pts, curve_header("x"), title));
    }
    let curve = critical_curve(&reduce(&model)?, samples)?;
    let mut rows: Vec<_> = curve
        .samples
        .iter()
        .map(|s| {
            (
                s.phi,
                Some((rotate(s.z_plus, model.theta), rotate(s.z_minus, model.theta))),
            )
        })
        .chain(curve.gaps.iter().map(|&g| (g, None)))
        .collect();
    rows.sort_by(|a, b| a.0.total_cmp(&b.0));
    Ok(CurveRows { rows }.into_report(curve_header("x"), title, ("x1", "x2")))
}

fn lens_caustics(lens: &Lens, samples: usize) -> CliResult<Report> {
    let model = model(lens)?;
    let title = lens_title("caustic", lens);
    match caustic_curve(&model, samples)? {
        Caustic::Points(pts) => Ok(point_rows(
            pts.into_iter().map(|(_, y)| (y, y)).collect(),
            curve_header("y"),
            title,
        )),
        Caustic::Curve(curve) => {
            let mut rows: Vec<_> = curve
                .samples
                .iter()
                .map(|s| (s.phi, s.caustic))
                .chain(curve.gaps.iter().map(|&g| (g, None)))
                .collect();
            rows.sort_by(|a, b| a.0.total_cmp(&b.0));
            Ok(CurveRows { rows }.into_report(curve_header("y"), title, ("y1", "y2")))
        }
    }
}

fn lens_cusps(lens: &Lens) -> CliResult<Report> {
    let model = model(lens)?;
    let reduced = reduce(&model)?;
    let set = cusp_angles(&reduced)?;
    let aligned = model.aligned();
    let mut table = Table::new(vec!["phi", "label", "branch", "x1", "x2", "y1", "y2"]);
    let mut marks = Vec::new();
    for &(phi, label) in &set.angles {
        let z = critical_point(&reduced, phi)
            .ok_or_else(|| CliError::Core(npms_core::Error::Numerical(format!("cusp at phi={phi} lies in a gap"))))?;
        for branch in [1i64, -1] {
            let zb = z * branch as f64;
            let y = rotate(lens_map(zb, &aligned)?, model.theta);
            let x = rotate(zb, model.theta);
            table.push(vec![
                phi.into(),
                Cell::Text(label.name().into()),
                Cell::Int(branch),
                x.re.into(),
                x.im.into(),
                y.re.into(),
                y.im.into(),
            ]);
            marks.push(xy(y));
        }
    }
    let mut series = Vec::new();
    if let Caustic::Curve(c) = caustic_curve(&model, 720)? {
        let (mut plus, mut minus) = (Vec::new(), Vec::new());
        for s in &c.samples {
            if let Some((a, b)) = s.caustic {
                plus.push(xy(a));
                minus.push(xy(b));
            }
        }
        series.push(Series::line("caustic +", plus));
        series.push(Series::line("caustic -", minus));
    }
    series.push(Series::markers("cusps", marks));
    let mut summary = vec![format!("cusps = {}", set.count), format!("regime = {:?}", set.regime)];
    if set.degenerate_point {
        summary.push("caustic degenerates to a point".into());
    }
    Ok(Report {
        table,
        plot: plot(lens_title("cusps", lens), "y1", "y2", series, true),
        summary,
    })
}

fn lens_survey(lens: &Lens, radius: f64, samples: usize) -> CliResult<Report> {
    if !(radius > 0.0 && radius.is_finite()) {
        return Err(usage(format!("--radius must be positive, got {radius}")));
    }
    if samples == 0 {
        return Err(usage("--samples must be positive"));
    }
    let model = model(lens)?;
    let survey = image_count_survey(&model, &SourceGrid::square(radius, samples), SURVEY_MARGIN)?;
    let mut table = Table::new(vec!["y1", "y2", "count", "unreliable"]);
    let mut by_count: std::collections::BTreeMap<usize, Vec<(f64, f64)>> = Default::default();
    for c in &survey.cells {
        table.push(vec![
            c.source.re.into(),
            c.source.im.into(),
            Cell::Int(c.count as i64),
            Cell::Int(c.unreliable as i64),
        ]);
        by_count.entry(c.count).or_default().push(xy(c.source));
    }
    let summary = by_count
        .iter()
        .map(|(k, v)| format!("{k} images: {} sources", v.len()))
        .collect();
    let series = by_count
        .into_iter()
        .map(|(k, v)| Series::markers(format!("{k} images"), v))
        .collect();
    Ok(Report {
        table,
        plot: plot(lens_title("image counts", lens), "y1", "y2", series, true),
        summary,
    })
}

fn build_profile(p: &Profile) -> CliResult<RadialProfile> {
    Ok(match p.profile {
        ProfileName::Flat => RadialProfile::flat(),
        ProfileName::NegSchwarzschild => {
            if !(p.mass < 0.0) {
                return Err(usage(format!(
                    "--mass must be negative for neg-schwarzschild, got {}",
                    p.mass
                )));
            }
            RadialProfile::schwarzschild(p.mass)?
        }
        ProfileName::PowerLaw => RadialProfile::power_law(p.k, p.p, true)?,
        ProfileName::Tabulated => {
            let path = p
                .file
                .as_ref()
                .ok_or_else(|| usage("--file is required for --profile tabulated"))?;
            let text = std::fs::read_to_string(path).map_err(|e| usage(format!("--file {}: {e}", path.display())))?;
            parse_tabulated(&text)?
        }
    })
}

fn log_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    let (a, b) = (lo.ln(), hi.ln());
    (0..n)
        .map(|i| (a + (b - a) * i as f64 / (n - 1) as f64).exp())
        .collect()
}

fn regular_text(m: RegularMass) -> String {
    match m {
        RegularMass::Finite(v) => format!("{v:.16e}"),
        RegularMass::Zero => "0 (zero mass)".into(),
        RegularMass::MinusInfinity => "-inf".into(),
    }
}

fn spherical_report(p: &Profile, r0: f64, radius: f64, samples: usize) -> CliResult<Report> {
    if !(r0 > 0.0 && radius > r0 && radius.is_finite()) {
        return Err(usage(format!("need 0 < --r0 < --radius, got {r0}, {radius}")));
    }
    if samples < 2 {
        return Err(usage("--samples must be at least 2"));
    }
    let profile = build_profile(p)?;
    let mut table = Table::new(vec!["r", "area", "scalar_curvature", "hawking_mass", "capacity"]);
    let mut pts = Vec::new();
    for r in log_grid(r0, radius, samples) {
        let area = profile.area(r)?;
        let m_h = hawking_mass_sphere(&profile, r)?;
        table.push(vec![
            r.into(),
            area.into(),
            scalar_curvature(&profile, r)?.into(),
            m_h.into(),
            Cell::opt(radial_capacity(&profile, r).ok()),
        ]);
        pts.push((r.log10(), m_h));
    }
    let mut summary = Vec::new();
    if profile.singular_inner() {
        let rep = mass_report(&profile)?;
        summary.push(format!(
            "adm_mass = {}",
            rep.adm.map_or("NA".to_string(), |v| format!("{v:.16e}"))
        ));
        summary.push(format!("regular_mass = {}", regular_text(rep.regular_mass)));
        summary.push(format!("capacity_center = {:.16e}", rep.capacity_center));
        summary.push(format!("classification = {:?}", rep.classification));
    } else {
        summary.push(format!(
            "adm_mass = {}",
            adm_mass(&profile).map_or("NA".to_string(), |v| format!("{v:.16e}"))
        ));
        summary.push("regular center".into());
        if let Ok(c) = capacity_of_center(&profile) {
            summary.push(format!("capacity_center = {c:.16e}"));
        }
    }
    Ok(Report {
        table,
        plot: plot(
            format!("Hawking mass of coordinate spheres ({:?})", p.profile),
            "log10 r",
            "m_H",
            vec![Series::line("m_H", pts)],
            false,
        ),
        summary,
    })
}

fn imcf(p: &Profile, r0: f64, t_end: f64) -> CliResult<Report> {
    let profile = build_profile(p)?;
    let trace = imcf_flow(&profile, r0, t_end, IMCF_INITIAL_STEP)?;
    let mut table = Table::new(vec!["t", "r", "area", "hawking_mass", "mean_curvature"]);
    let mut pts = Vec::new();
    for s in &trace.states {
        table.push(vec![
            s.t.into(),
            s.r.into(),
            s.area.into(),
            s.hawking.into(),
            s.mean_curvature.into(),
        ]);
        pts.push((s.t, s.hawking));
    }
    let mut summary = vec![format!("monotonicity violations = {}", trace.violations.len())];
    if trace.horizon_reached {
        summary.push("flow halted: A' vanished ahead of the surface".into());
    }
    let check = verify_capacity_bound(&profile, r0)?;
    summary.push(format!(
        "capacity = {:.16e}, bound = {:.16e}, holds = {}",
        check.capacity, check.bound, check.holds
    ));
    Ok(Report {
        table,
        plot: plot(
            format!("Hawking mass along the flow ({:?}, r0={r0})", p.profile),
            "t",
            "m_H",
            vec![Series::line("m_H", pts)],
            false,
        ),
        summary,
    })
}

fn weyl(m: f64, a: f64, rho: f64, radius: f64, samples: usize) -> CliResult<Report> {
    let zv = ZVModel::new(m, a)?;
    if !(rho > 0.0 && rho.is_finite()) {
        return Err(usage(format!("--rho must be positive, got {rho}")));
    }
    if samples < 2 {
        return Err(usage("--samples must be at least 2"));
    }
    let mut table = Table::new(vec!["rho", "area", "energy", "integrand"]);
    let (mut area_pts, mut energy_pts) = (Vec::new(), Vec::new());
    for r in log_grid(rho, rho * 1e-3, samples) {
        let area = cylinder_area(&zv, r)?;
        let energy = level_set_energy_on_level(&zv, r)?;
        let p = WeylPoint::new(r, 0.0);
        let integrand = if m == 0.0 {
            0.0
        } else {
            level_set_mass_integrand(&zv, p, zv_potentials(p, &zv)?.0.exp())?
        };
        table.push(vec![r.into(), area.into(), energy.into(), integrand.into()]);
        area_pts.push((r.log10(), area.log10()));
        energy_pts.push((r.log10(), energy.log10()));
    }
    let grid = WeylGrid {
        rho_min: 0.1 * a,
        rho_max: 5.0 * a,
        z_min: -5.0 * a,
        z_max: 5.0 * a,
        n_rho: 50,
        n_z: 50,
    };
    let mut summary = vec![
        format!("adm_flux(radius={radius}) = {:.16e}", adm_flux(&zv, radius)?),
        format!("max vacuum residual = {:.3e}", vacuum_residuals(&zv, &grid)?.max()),
    ];
    match cylinder_area_exponent(&zv) {
        Ok(e) => summary.push(format!("cylinder_area_exponent = {e:.16e}")),
        Err(e) => summary.push(format!("cylinder_area_exponent: {e}")),
    }
    match energy_exponent(&zv) {
        Ok((e, c)) => summary.push(format!("energy_exponent = {e:.16e} ({c:?})")),
        Err(e) => summary.push(format!("energy_exponent: {e}")),
    }
    let mut series = vec![Series::line("log10 area", area_pts)];
    if m != 0.0 {
        series.push(Series::line("log10 energy", energy_pts));
    }
    Ok(Report {
        table,
        plot: plot(
            format!("Zipoy-Voorhees cylinders: m={m}, a={a}"),
            "log10 rho",
            "log10",
            series,
            false,
        ),
        summary,
    })
}
