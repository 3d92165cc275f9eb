//! One function per subcommand, each either emitting data or, with `--check`,
//! a report of its invariant checks.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use num_complex::Complex64;
use serde::Serialize;

use sholo_core::analysis::{check_riemann_bv, check_sholomorphic, compute_h, quiet_anchor, verify_mean_value, HField};
use sholo_core::continuum::{
    mix_to_pole_t_closed, mix_to_pole_t_normalized, pole_to_mix_t_closed, Extremity, PurePoleTable, Quadrature,
};
use sholo_core::geometry::{BoundaryPart, Orientation};
use sholo_core::harmonic::{harmonic_measure, Carrier, HarmonicMeasure};
use sholo_core::harness::{
    default_rect, h_spread, inner_product_table, pole_convergence_table, strip_convergence_table, ErrorTable,
    ScalingSequence, H_BOUND_RATIO,
};
use sholo_core::output::{
    format_f64, heatmap_svg, loglog_svg, table_series, write_document, write_table_csv, write_table_json, Cell, Heatmap,
};
use sholo_core::slit::{SingularParts, SingularSystem};
use sholo_core::strip::{propagate, solve_frequency, Direction};
use sholo_core::{
    inner_product, reflect, CrossSectionFn, EdgeField, ModeIndex, SpectralBasis, StripKind, StripSpec, Window,
};

use crate::{
    mode_index, parse_rect, parse_rows, positive_index, CarrierArg, Cli, Command, Common, ConvergeTable, Failure,
    Format, Ladder,
};

/// Destination of the primary output.
struct Sink<'a> {
    out: Option<&'a Path>,
}

impl Sink<'_> {
    fn write(&self, bytes: &[u8]) -> Result<(), Failure> {
        match self.out {
            Some(p) => fs::write(p, bytes)?,
            None => std::io::stdout().lock().write_all(bytes)?,
        }
        Ok(())
    }

    /// A second file next to `--out`, named `<stem>.<suffix>`.
    fn sibling(&self, suffix: &str) -> Option<PathBuf> {
        let p = self.out?;
        let stem = p.file_stem()?.to_string_lossy().into_owned();
        Some(p.with_file_name(format!("{stem}.{suffix}")))
    }
}

#[derive(Serialize)]
struct CheckItem {
    name: String,
    value: f64,
    tol: f64,
    pass: bool,
}

/// Named invariant checks; `--tol` replaces every default tolerance.
struct Checks {
    command: &'static str,
    tol: Option<f64>,
    items: Vec<CheckItem>,
}

impl Checks {
    fn new(command: &'static str, common: &Common) -> Self {
        Self { command, tol: common.tol, items: Vec::new() }
    }

    /// Passes when `value ≤ tol`.
    fn at_most(&mut self, name: impl Into<String>, value: f64, tol: f64) {
        let tol = self.tol.unwrap_or(tol);
        self.items.push(CheckItem { name: name.into(), value, tol, pass: value <= tol });
    }

    fn holds(&mut self, name: impl Into<String>, value: f64, pass: bool) {
        self.items.push(CheckItem { name: name.into(), value, tol: f64::NAN, pass });
    }

    fn finish(self, common: &Common) -> Result<(), Failure> {
        let failed = self.items.iter().filter(|c| !c.pass).count();
        let passed = self.items.len() - failed;
        let mut buf = Vec::new();
        match common.format {
            Format::Csv => {
                writeln!(buf, "name,value,tol,pass")?;
                for c in &self.items {
                    let tol = if c.tol.is_nan() { String::new() } else { format!("{:e}", c.tol) };
                    writeln!(buf, "{},{},{tol},{}", c.name, format_f64(c.value), c.pass)?;
                }
                writeln!(buf, "# {}: {passed} passed, {failed} failed", self.command)?;
            }
            _ => {
                #[derive(Serialize)]
                struct Meta {
                    command: &'static str,
                    passed: usize,
                    failed: usize,
                }
                write_document(&mut buf, &Meta { command: self.command, passed, failed }, &self.items)?;
            }
        }
        Sink { out: common.out.as_deref() }.write(&buf)?;
        if failed > 0 {
            return Err(Failure {
                code: 3,
                kind: "check_failed",
                message: format!("{}: {failed} of {} checks failed", self.command, self.items.len()),
            });
        }
        Ok(())
    }
}

#[derive(Serialize)]
struct SpecMeta {
    command: &'static str,
    a: i32,
    b: i32,
    len: usize,
    kind: &'static str,
}

fn spec_meta(command: &'static str, spec: &StripSpec) -> SpecMeta {
    let kind = if spec.is_slit() { "slit_strip" } else { "strip" };
    SpecMeta { command, a: spec.a(), b: spec.b(), len: spec.width(), kind }
}

#[derive(Serialize)]
struct PointRow {
    x_prime: f64,
    re: f64,
    im: f64,
}

fn cross_section_rows(f: &CrossSectionFn) -> Vec<PointRow> {
    f.spec()
        .cross_section_x2()
        .zip(f.values())
        .map(|(x2, z)| PointRow { x_prime: x2 as f64 / 2.0, re: z.re, im: z.im })
        .collect()
}

#[derive(Serialize)]
struct EdgeRow {
    orientation: &'static str,
    x2: i32,
    y2: i32,
    slit_side: &'static str,
    re: f64,
    im: f64,
}

fn edge_rows(field: &EdgeField) -> Vec<EdgeRow> {
    field
        .iter()
        .map(|(e, z)| EdgeRow {
            orientation: match e.orientation {
                Orientation::Horizontal => "horizontal",
                Orientation::Vertical => "vertical",
            },
            x2: e.x2,
            y2: e.y2,
            slit_side: e.side.as_str(),
            re: z.re,
            im: z.im,
        })
        .collect()
}

#[derive(Serialize)]
struct ValueRow {
    carrier: &'static str,
    x2: i32,
    y2: i32,
    value: f64,
}

fn emit_cross_section(common: &Common, meta: &SpecMeta, f: &CrossSectionFn) -> Result<(), Failure> {
    let mut buf = Vec::new();
    match common.format {
        Format::Csv => f.write_csv(&mut buf)?,
        Format::Json => write_document(&mut buf, meta, &cross_section_rows(f))?,
        Format::Svg => return Err(Failure::invalid("svg needs an extension; pass --rows")),
    }
    Sink { out: common.out.as_deref() }.write(&buf)
}

fn field_heatmap(title: String, field: &EdgeField) -> String {
    let cells = field
        .iter()
        .map(|(e, z)| {
            let m = e.midpoint();
            Cell { x: m.re, y: m.im, value: z.norm() }
        })
        .collect();
    heatmap_svg(&Heatmap { title, cells, size: 0.5, log: true })
}

fn emit_field(common: &Common, meta: &SpecMeta, title: String, field: &EdgeField) -> Result<(), Failure> {
    let mut buf = Vec::new();
    match common.format {
        Format::Csv => field.write_csv(&mut buf)?,
        Format::Json => write_document(&mut buf, meta, &edge_rows(field))?,
        Format::Svg => buf = field_heatmap(title, field).into_bytes(),
    }
    Sink { out: common.out.as_deref() }.write(&buf)
}

fn sholo_checks(checks: &mut Checks, field: &EdgeField) {
    let s = check_sholomorphic(field);
    checks.at_most("corner_projection_rel", s.projection.rel, 1e-10);
    checks.at_most("cauchy_riemann_rel", s.cauchy_riemann.rel, 1e-10);
    checks.at_most("riemann_boundary_rel", check_riemann_bv(field).max().rel, 1e-10);
}

fn h_checks(checks: &mut Checks, h: &HField) {
    checks.at_most("loop_closure_rel", h.loop_residual.rel, 1e-9);
    checks.at_most("edge_increment_rel", h.edge_residual.rel, 1e-9);
    for (part, r) in &h.boundary_spread {
        checks.at_most(format!("constant_on_{}_rel", part.as_str()), r.rel, 1e-9);
    }
    let mv = verify_mean_value(h);
    checks.at_most("domination_rel", mv.domination.rel, 1e-12);
    checks.at_most("vertex_mean_value_rel", mv.vertex.rel, 1e-10);
    checks.at_most("face_mean_value_rel", mv.face.rel, 1e-10);
}

pub fn dispatch(cli: &Cli) -> Result<(), Failure> {
    let c = &cli.common;
    match &cli.command {
        Command::Spectrum { geometry } => spectrum(c, geometry.spec(StripKind::Strip)?),
        Command::Eigenfunction { geometry, k, rows } => {
            let window = rows.as_deref().map(parse_rows).transpose()?;
            eigenfunction(c, geometry.spec(StripKind::Strip)?, mode_index(*k)?, window)
        }
        Command::Propagate { geometry, k, input, steps, down } => {
            let spec = geometry.spec(StripKind::Strip)?;
            let k = k.map(mode_index).transpose()?;
            propagate_cmd(c, spec, k, input.as_deref(), *steps, *down)
        }
        Command::Pole { geometry, which, k, rows } => {
            let window = rows.as_deref().map(parse_rows).transpose()?;
            pole(c, geometry.spec(StripKind::SlitStrip)?, (*which).into(), positive_index(*k)?, window)
        }
        Command::Hfield { geometry, which, k, rows } => {
            let window = rows.as_deref().map(parse_rows).transpose()?;
            let kind = if which.is_some() { StripKind::SlitStrip } else { StripKind::Strip };
            hfield(c, geometry.spec(kind)?, which.map(Into::into), mode_index(*k)?, window)
        }
        Command::HarmonicMeasure { geometry, rows, zero, carrier, slit } => {
            let kind = if *slit { StripKind::SlitStrip } else { StripKind::Strip };
            let carrier = match carrier {
                CarrierArg::Vertices => Carrier::Vertices,
                CarrierArg::Faces => Carrier::Faces,
            };
            let zero: Vec<BoundaryPart> = zero.iter().map(|p| (*p).into()).collect();
            harmonic(c, geometry.spec(kind)?, parse_rows(rows)?, &zero, carrier)
        }
        Command::Coeffs { which, kmax } => coeffs(c, (*which).into(), positive_index(*kmax)?),
        Command::Converge { table } => converge(c, table),
    }
}

fn spectrum(common: &Common, spec: StripSpec) -> Result<(), Failure> {
    let basis = SpectralBasis::new(spec)?;
    let l = spec.width() as f64;
    if common.check {
        let mut checks = Checks::new("spectrum", common);
        for m in basis.modes() {
            let k = m.k.value();
            let (lo, hi) = ((k - 0.5) * std::f64::consts::PI / l, k * std::f64::consts::PI / l);
            checks.holds(format!("bracket_k{k}"), m.omega, lo < m.omega && m.omega < hi);
            let r = ((l + 0.5) * m.omega).cos() / ((l - 0.5) * m.omega).cos() - (3.0 - 2.0 * 2f64.sqrt());
            checks.at_most(format!("frequency_k{k}"), r.abs(), 1e-10);
            let d = m.lambda_plus * m.lambda_plus + (2.0 * m.omega.cos() - 4.0) * m.lambda_plus + 1.0;
            checks.at_most(format!("dispersion_k{k}"), d.abs(), 1e-12);
            checks.at_most(format!("reciprocal_k{k}"), (m.lambda_plus * m.lambda_minus - 1.0).abs(), 1e-12);
        }
        return checks.finish(common);
    }
    let mut buf = Vec::new();
    match common.format {
        Format::Csv => basis.write_spectrum_csv(&mut buf)?,
        Format::Json => {
            #[derive(Serialize)]
            struct Row {
                k: f64,
                omega: f64,
                lambda_plus: f64,
                lambda_minus: f64,
            }
            let rows: Vec<Row> = basis
                .modes()
                .iter()
                .map(|m| Row {
                    k: m.k.value(),
                    omega: m.omega,
                    lambda_plus: m.lambda_plus,
                    lambda_minus: m.lambda_minus,
                })
                .collect();
            write_document(&mut buf, &spec_meta("spectrum", &spec), &rows)?;
        }
        Format::Svg => {
            let series = sholo_core::output::Series {
                label: "Λ_k − 1".into(),
                points: basis.modes().iter().map(|m| (m.k.value(), m.lambda_plus - 1.0)).collect(),
            };
            buf = loglog_svg(&format!("spectrum, ℓ = {}", spec.width()), "k", "Λ − 1", &[series]).into_bytes();
        }
    }
    Sink { out: common.out.as_deref() }.write(&buf)
}

fn default_window(spec: &StripSpec, depth: usize) -> Result<Window, Failure> {
    let d = (depth * spec.width()) as i32;
    Ok(Window::new(-d, d)?)
}

fn eigenfunction(common: &Common, spec: StripSpec, k: ModeIndex, window: Option<Window>) -> Result<(), Failure> {
    let basis = SpectralBasis::new(spec)?;
    let f = basis.eigenfunction(k)?;
    if common.check {
        let mut checks = Checks::new("eigenfunction", common);
        let lambda = basis.eigenvalue(k)?;
        let pf = propagate(&spec, f, Direction::Up)?;
        checks.at_most("eigen_residual", pf.sub(&f.scale(lambda))?.norm(), 1e-10);
        checks.at_most("unit_norm", (f.norm() - 1.0).abs(), 1e-10);
        let other = basis.eigenfunction(-k)?;
        checks.at_most("orthogonal_to_reflection", inner_product(f, other)?.abs(), 1e-10);
        let r = reflect(f);
        let d = r.values().iter().zip(other.values()).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
        checks.at_most("reflection", d, 1e-14);
        let w = match window {
            Some(w) => w,
            None => default_window(&spec, 2)?,
        };
        sholo_checks(&mut checks, &basis.extend_mode(k, w)?);
        return checks.finish(common);
    }
    let meta = spec_meta("eigenfunction", &spec);
    match (window, common.format) {
        (None, Format::Csv | Format::Json) => emit_cross_section(common, &meta, f),
        (w, _) => {
            let w = match w {
                Some(w) => w,
                None => default_window(&spec, 1)?,
            };
            let field = basis.extend_mode(k, w)?;
            emit_field(common, &meta, format!("|f_{k}|, ℓ = {}", spec.width()), &field)
        }
    }
}

fn read_cross_section(spec: StripSpec, path: &Path) -> Result<CrossSectionFn, Failure> {
    let text = fs::read_to_string(path)?;
    let mut values = Vec::new();
    for (n, line) in text.lines().enumerate().skip(1) {
        if line.trim().is_empty() {
            continue;
        }
        let cols: Vec<&str> = line.split(',').map(str::trim).collect();
        let parse =
            |s: &str| s.parse::<f64>().map_err(|_| Failure::invalid(format!("line {}: bad number {s:?}", n + 1)));
        if cols.len() != 3 {
            return Err(Failure::invalid(format!("line {}: expected x_prime,re,im", n + 1)));
        }
        let (x, re, im) = (parse(cols[0])?, parse(cols[1])?, parse(cols[2])?);
        let want = spec.cross_section_x2().nth(values.len()).map(|x2| x2 as f64 / 2.0);
        if want != Some(x) {
            return Err(Failure::invalid(format!("line {}: x_prime {x} does not match the cross-section", n + 1)));
        }
        values.push(Complex64::new(re, im));
    }
    Ok(CrossSectionFn::new(spec, values)?)
}

fn propagate_cmd(
    common: &Common,
    spec: StripSpec,
    k: Option<ModeIndex>,
    input: Option<&Path>,
    steps: usize,
    down: bool,
) -> Result<(), Failure> {
    let f = match (k, input) {
        (Some(k), None) => sholo_core::strip::eigenfunction(&spec, k)?,
        (None, Some(p)) => read_cross_section(spec, p)?,
        _ => return Err(Failure::invalid("give exactly one of --k and --input")),
    };
    let (there, back) = if down { (Direction::Down, Direction::Up) } else { (Direction::Up, Direction::Down) };
    let mut g = f.clone();
    for _ in 0..steps {
        g = propagate(&spec, &g, there)?;
    }
    if common.check {
        let mut checks = Checks::new("propagate", common);
        let mut h = g.clone();
        for _ in 0..steps {
            h = propagate(&spec, &h, back)?;
        }
        checks.at_most("round_trip_rel", h.sub(&f)?.norm() / f.norm().max(f64::MIN_POSITIVE), 1e-10);
        if let Some(k) = k {
            let lambda = SpectralBasis::new(spec)?.eigenvalue(k)?;
            let power = if down { lambda.powi(-(steps as i32)) } else { lambda.powi(steps as i32) };
            let want = f.scale(power);
            checks.at_most("eigen_residual_rel", g.sub(&want)?.norm() / want.norm(), 1e-10);
        }
        return checks.finish(common);
    }
    emit_cross_section(common, &spec_meta("propagate", &spec), &g)
}

fn pole(
    common: &Common,
    spec: StripSpec,
    which: Extremity,
    k: ModeIndex,
    window: Option<Window>,
) -> Result<(), Failure> {
    let system = SingularSystem::new(spec)?;
    let p = system.pole_function(which, k)?;
    if common.check {
        let mut checks = Checks::new("pole", common);
        let g = SingularParts::unit(&spec, which, k)?;
        checks.at_most("singular_part", system.singular_parts(&p.cross_section)?.max_abs_diff(&g), 1e-8);
        checks.at_most("condition", system.condition_estimate(), 1e10);
        let w = match window {
            Some(w) => w,
            None => default_window(&spec, 2)?,
        };
        sholo_checks(&mut checks, &system.extend_pole(&p, w)?);
        return checks.finish(common);
    }
    let meta = spec_meta("pole", &spec);
    match (window, common.format) {
        (None, Format::Csv | Format::Json) => emit_cross_section(common, &meta, &p.cross_section),
        (w, format) => {
            let w = match w {
                Some(w) => w,
                None => default_window(&spec, 1)?,
            };
            let field = system.extend_pole(&p, w)?;
            let title = format!("|p{}_{k}|, ℓ = {}", which.letter(), spec.width());
            emit_field(common, &meta, title, &field)?;
            let sink = Sink { out: common.out.as_deref() };
            if format == Format::Svg {
                if let Some(path) = sink.sibling("cross_section.csv") {
                    let mut buf = Vec::new();
                    p.cross_section.write_csv(&mut buf)?;
                    fs::write(path, buf)?;
                }
            }
            Ok(())
        }
    }
}

fn hfield(
    common: &Common,
    spec: StripSpec,
    which: Option<Extremity>,
    k: ModeIndex,
    window: Option<Window>,
) -> Result<(), Failure> {
    let w = match window {
        Some(w) => w,
        None => default_window(&spec, 1)?,
    };
    let (field, label) = match which {
        Some(which) => {
            if !k.is_positive() {
                return Err(Failure::invalid("pole index must be positive"));
            }
            let system = SingularSystem::new(spec)?;
            let p = system.pole_function(which, k)?;
            (system.extend_pole(&p, w)?, format!("p{}_{k}", which.letter()))
        }
        None => {
            let basis = SpectralBasis::new(spec)?;
            (basis.extend_mode(k, w)?, format!("f_{k}"))
        }
    };
    let h = compute_h(&field, quiet_anchor(&field))?;
    if common.check {
        let mut checks = Checks::new("hfield", common);
        h_checks(&mut checks, &h);
        return checks.finish(common);
    }
    let mut buf = Vec::new();
    match common.format {
        Format::Csv => h.write_csv(&mut buf)?,
        Format::Json => {
            let mut rows: Vec<ValueRow> =
                h.vertex_values().map(|(v, x)| ValueRow { carrier: "vertex", x2: v.x2, y2: v.y2, value: x }).collect();
            rows.extend(h.face_values().map(|(p, x)| ValueRow { carrier: "face", x2: p.x2, y2: p.y2, value: x }));
            write_document(&mut buf, &spec_meta("hfield", &spec), &rows)?;
        }
        Format::Svg => {
            let mut cells: Vec<Cell> =
                h.vertex_values().map(|(v, x)| Cell { x: v.x2 as f64 / 2.0, y: v.y2 as f64 / 2.0, value: x }).collect();
            cells.extend(h.face_values().map(|(p, x)| Cell { x: p.x2 as f64 / 2.0, y: p.y2 as f64 / 2.0, value: x }));
            let title = format!("H of {label}, ℓ = {}", spec.width());
            buf = heatmap_svg(&Heatmap { title, cells, size: 0.5, log: false }).into_bytes();
        }
    }
    Sink { out: common.out.as_deref() }.write(&buf)
}

fn harmonic_values(m: &HarmonicMeasure, spec: &StripSpec, window: Window) -> Vec<ValueRow> {
    match m.carrier {
        Carrier::Vertices => window
            .vertices(spec)
            .iter()
            .zip(m.values())
            .map(|(v, x)| ValueRow { carrier: "vertex", x2: v.x2, y2: v.y2, value: *x })
            .collect(),
        Carrier::Faces => window
            .faces(spec)
            .iter()
            .zip(m.values())
            .map(|(p, x)| ValueRow { carrier: "face", x2: p.x2, y2: p.y2, value: *x })
            .collect(),
    }
}

fn harmonic(
    common: &Common,
    spec: StripSpec,
    window: Window,
    zero: &[BoundaryPart],
    carrier: Carrier,
) -> Result<(), Failure> {
    let m = harmonic_measure(&spec, window, zero, carrier)?;
    let rows = harmonic_values(&m, &spec, window);
    if common.check {
        let mut checks = Checks::new("harmonic-measure", common);
        checks.at_most("residual", m.residual, sholo_core::harmonic::TOLERANCE);
        let below = rows.iter().map(|r| -r.value).fold(0.0, f64::max);
        let above = rows.iter().map(|r| r.value - 1.0).fold(0.0, f64::max);
        checks.at_most("below_zero", below, 1e-12);
        checks.at_most("above_one", above, 1e-12);
        return checks.finish(common);
    }
    let mut buf = Vec::new();
    match common.format {
        Format::Csv => m.write_csv(&mut buf)?,
        Format::Json => write_document(&mut buf, &spec_meta("harmonic-measure", &spec), &rows)?,
        Format::Svg => {
            let cells =
                rows.iter().map(|r| Cell { x: r.x2 as f64 / 2.0, y: r.y2 as f64 / 2.0, value: r.value }).collect();
            let title = format!("harmonic measure, ℓ = {}", spec.width());
            buf = heatmap_svg(&Heatmap { title, cells, size: 1.0, log: false }).into_bytes();
        }
    }
    Sink { out: common.out.as_deref() }.write(&buf)
}

fn coeffs(common: &Common, which: Extremity, k_max: ModeIndex) -> Result<(), Failure> {
    let table = PurePoleTable::new(which, k_max, &Quadrature::default())?;
    let n = table.size();
    if common.check {
        let mut checks = Checks::new("coeffs", common);
        checks.at_most("inverse_defect", table.inverse_defect(), 1e-8);
        if which == Extremity::Top {
            let (mut a, mut m, mut r) = (0.0f64, 0.0f64, 0.0f64);
            for i in 0..n {
                for j in 0..n {
                    let (ki, kj) = (ModeIndex::positive(i), ModeIndex::positive(j));
                    a = a.max((table.pole_to_mix()[(i, j)] - pole_to_mix_t_closed(ki, kj)).abs());
                    m = m.max((table.mix_to_pole()[(i, j)] - mix_to_pole_t_closed(ki, kj)).abs());
                    let row = table.mix_to_pole()[(i, j)] / table.mix_to_pole()[(i, i)];
                    r = r.max((row - mix_to_pole_t_normalized(ki, kj)).abs());
                }
            }
            checks.at_most("pole_to_mix_closed_form", a, 1e-6);
            checks.at_most("mix_to_pole_closed_form", m, 1e-6);
            checks.at_most("mix_to_pole_row_normalized", r, 1e-6);
        }
        return checks.finish(common);
    }
    let mut buf = Vec::new();
    match common.format {
        Format::Csv => table.write_csv(&mut buf)?,
        Format::Json => {
            #[derive(Serialize)]
            struct Meta {
                command: &'static str,
                which: Extremity,
                k_max: ModeIndex,
            }
            #[derive(Serialize)]
            struct Row {
                k: ModeIndex,
                k_prime: ModeIndex,
                mix_to_pole: f64,
                pole_to_mix: f64,
            }
            let rows: Vec<Row> = (0..n)
                .flat_map(|i| (0..=i).map(move |j| (i, j)))
                .map(|(i, j)| Row {
                    k: ModeIndex::positive(i),
                    k_prime: ModeIndex::positive(j),
                    mix_to_pole: table.mix_to_pole()[(i, j)],
                    pole_to_mix: table.pole_to_mix()[(i, j)],
                })
                .collect();
            write_document(&mut buf, &Meta { command: "coeffs", which, k_max }, &rows)?;
        }
        Format::Svg => return Err(Failure::invalid("coeffs has no svg form")),
    }
    Sink { out: common.out.as_deref() }.write(&buf)
}

fn ladder(l: &Ladder) -> Result<ScalingSequence, Failure> {
    if l.lmin < 2 || l.lmin > l.lmax {
        return Err(Failure::invalid(format!("need 2 ≤ lmin ≤ lmax, got {}..{}", l.lmin, l.lmax)));
    }
    Ok(ScalingSequence::doubling(l.lmin, l.lmax)?)
}

fn converge(common: &Common, which: &ConvergeTable) -> Result<(), Failure> {
    let (table, title): (ErrorTable, String) = match which {
        ConvergeTable::Strip { k, ladder: l } => {
            let k = positive_index(*k)?;
            let seq = ladder(l)?;
            for len in seq.lens() {
                solve_frequency(len, k)?;
            }
            (strip_convergence_table(k, &seq)?, format!("strip f_{k}"))
        }
        ConvergeTable::Pole { which, k, rect, ladder: l } => {
            let which: Extremity = (*which).into();
            let rect = match rect {
                Some(s) => parse_rect(s)?,
                None => default_rect(which),
            };
            let k = positive_index(*k)?;
            (
                pole_convergence_table(which, k, &ladder(l)?, rect)?,
                format!("p{}_{k} on {}", which.letter(), rect.describe()),
            )
        }
        ConvergeTable::Ip { kmax, ladder: l } => {
            let k_max = positive_index(*kmax)?;
            (inner_product_table(&ladder(l)?, k_max)?, format!("inner products, k ≤ {k_max}"))
        }
    };
    if common.check {
        let mut checks = Checks::new("converge", common);
        for t in &table.trends {
            let (first, last) = (t.errors[0], t.errors[t.errors.len() - 1]);
            checks.holds(format!("trend {}", t.quantity), last / first, t.decreasing);
        }
        if !table.errors("h_max").is_empty() {
            checks.at_most("h_max spread", h_spread(&table), H_BOUND_RATIO);
        }
        return checks.finish(common);
    }
    let mut buf = Vec::new();
    match common.format {
        Format::Csv => write_table_csv(&mut buf, &table)?,
        Format::Json => write_table_json(&mut buf, &table)?,
        Format::Svg => buf = loglog_svg(&title, "ℓ", "error", &table_series(&table)).into_bytes(),
    }
    Sink { out: common.out.as_deref() }.write(&buf)
}
