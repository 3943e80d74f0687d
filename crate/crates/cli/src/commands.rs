//! One function per subcommand.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use xyep::asymptotics::{convergence_report, fit_rates};
use xyep::ed::exact_diagonalization;
use xyep::ep::{find_eps, gap_landscape, trivial_points, verify_ep, LambdaRect, Ring, VerifyLevel};
use xyep::fermion::{assemble_spectrum, quasi_energies_matrix};
use xyep::matching::spectra_match;
use xyep::pt::{pt_spectrum_check, SpectrumRoute};
use xyep::quasimomentum::quasi_energies_from_momenta;
use xyep::topology::phase_diagram;
use xyep::{ModelParams, C64};

use crate::args::*;
use crate::dto::*;
use crate::output::{to_json, Envelope, SCHEMA_VERSION};
use crate::render::Render;
use crate::CliError;

/// Configuration embedded in every output.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct RunConfig<A> {
    pub allow_odd: bool,
    pub format: Format,
    pub args: A,
}

/// Header shared by the CSV comment line and the SVG description.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct Header<A> {
    pub schema: u32,
    pub command: String,
    pub config: RunConfig<A>,
}

fn emit<A, R>(command: &str, global: &GlobalOpts, args: &A, result: R) -> Result<String, CliError>
where
    A: Serialize + Clone,
    R: Serialize + Render,
{
    let config = RunConfig {
        allow_odd: global.allow_odd,
        format: global.format,
        args: args.clone(),
    };
    let json_err = |e: serde_json::Error| CliError::Output(e.to_string());
    let header = Header {
        schema: SCHEMA_VERSION,
        command: command.into(),
        config: config.clone(),
    };
    let header_json = to_json(&header).map_err(json_err)?;
    Ok(match global.format {
        Format::Json => {
            let env = Envelope {
                schema: SCHEMA_VERSION,
                command: command.into(),
                config,
                result,
            };
            to_json(&env).map_err(json_err)? + "\n"
        }
        Format::Csv => result
            .table()
            .to_csv(&header_json)
            .map_err(|e| CliError::Output(e.to_string()))?,
        Format::Svg => result.plot().to_svg(&header_json),
    })
}

fn model(size: usize, lambda: C64, allow_odd: bool) -> Result<ModelParams, CliError> {
    Ok(if allow_odd {
        ModelParams::allow_odd(size, lambda)?
    } else {
        ModelParams::new(size, lambda)?
    })
}

fn positive(tol: f64, name: &str) -> Result<(), CliError> {
    if tol > 0.0 && tol.is_finite() {
        Ok(())
    } else {
        Err(CliError::Usage(format!("{name} must be positive, got {tol}")))
    }
}

/// Even-size check shared by the commands that take only `L`.
fn check_size(size: usize, allow_odd: bool) -> Result<(), CliError> {
    model(size, C64::new(0.0, 0.0), allow_odd).map(|_| ())
}

pub fn dispatch(command: &Command, global: &GlobalOpts) -> Result<String, CliError> {
    let name = command.name();
    match command {
        Command::Quasi(a) => emit(name, global, a, quasi(a, global)?),
        Command::Spectrum(a) => emit(name, global, a, spectrum(a, global)?),
        Command::Eps(a) => emit(name, global, a, eps(a, global)?),
        Command::Rings(a) => emit(name, global, a, rings(a, global)?),
        Command::Gap(a) => emit(name, global, a, gap(a, global)?),
        Command::Pt(a) => emit(name, global, a, pt(a)?),
        Command::Phase(a) => emit(name, global, a, phase(a)?),
        Command::Verify(a) => emit(name, global, a, verify(a, global)?),
    }
}

pub fn quasi(a: &QuasiArgs, g: &GlobalOpts) -> Result<QuasiResult, CliError> {
    let p = model(a.size, a.lambda.into(), g.allow_odd)?;
    let q = match a.route {
        QuasiRoute::Matrix => quasi_energies_matrix(&p)?,
        QuasiRoute::Momentum => quasi_energies_from_momenta(&p)?,
    };
    Ok(QuasiResult::new(a.size, p.lambda(), &q))
}

pub fn spectrum(a: &SpectrumArgs, g: &GlobalOpts) -> Result<SpectrumResult, CliError> {
    positive(a.tol, "--tol")?;
    let p = model(a.size, a.lambda.into(), g.allow_odd)?;
    if a.compare_ed && a.size > xyep::ed::MAX_ED_SIZE {
        return Err(xyep::Error::Capacity {
            what: "exact diagonalization",
            max: xyep::ed::MAX_ED_SIZE,
            got: a.size,
        }
        .into());
    }
    let ff = assemble_spectrum(&quasi_energies_matrix(&p)?)?;
    let (exact, comparison) = if a.compare_ed {
        let ed = exact_diagonalization(&p)?;
        let report = spectra_match(&ff, &ed, a.tol)?;
        (
            Some(ed.sorted().into_iter().map(Cplx::from).collect()),
            Some(MatchResult::from(&report)),
        )
    } else {
        (None, None)
    };
    Ok(SpectrumResult {
        size: a.size,
        lambda: a.lambda,
        energies: ff.sorted().into_iter().map(Cplx::from).collect(),
        exact,
        comparison,
    })
}

pub fn eps(a: &EpsArgs, g: &GlobalOpts) -> Result<EpsResult, CliError> {
    positive(a.axis_tol, "--axis-tol")?;
    check_size(a.size, g.allow_odd)?;
    let mut records = find_eps(a.size)?;
    if a.on_axis {
        records = xyep::pt::on_axis_from(&records, a.axis_tol);
    }
    let entries: Vec<EpEntry> = records.iter().map(|r| EpEntry::new(r, a.axis_tol)).collect();
    Ok(EpsResult {
        size: a.size,
        count: entries.len(),
        inner_count: records.iter().filter(|r| r.ring == Ring::Inner).count(),
        outer_count: records.iter().filter(|r| r.ring == Ring::Outer).count(),
        on_axis_count: entries.iter().filter(|e| e.on_axis).count(),
        records: entries,
    })
}

pub fn rings(a: &RingsArgs, g: &GlobalOpts) -> Result<RingsResult, CliError> {
    if a.sizes.is_empty() {
        return Err(CliError::Usage("--L needs at least one size".into()));
    }
    for &size in &a.sizes {
        check_size(size, g.allow_odd)?;
    }
    let reports = a
        .sizes
        .iter()
        .map(|&size| convergence_report(size))
        .collect::<Result<Vec<_>, _>>()?;
    let monotone = reports.windows(2).all(|w| {
        w[1].inner_max_dev < w[0].inner_max_dev && w[1].outer_max_dev < w[0].outer_max_dev
    });
    Ok(RingsResult {
        reports: reports.iter().map(RingEntry::from).collect(),
        monotone,
        fit: fit_rates(&reports).map(RateEntry::from),
    })
}

pub fn gap(a: &GapArgs, g: &GlobalOpts) -> Result<GapResult, CliError> {
    check_size(a.size, g.allow_odd)?;
    let rect = LambdaRect::new(a.grid.re_min, a.grid.re_max, a.grid.im_min, a.grid.im_max)?;
    let landscape = gap_landscape(a.size, rect, a.res, a.res)?;
    Ok(GapResult::from(&landscape))
}

pub fn pt(a: &PtArgs) -> Result<PtResult, CliError> {
    positive(a.tol, "--tol")?;
    let route = if a.ed {
        SpectrumRoute::ExactDiag
    } else {
        SpectrumRoute::QuasiEnergy
    };
    let reports = a
        .sweep
        .values()
        .par_iter()
        .map(|&li| pt_spectrum_check(a.size, li, a.tol, route))
        .collect::<Result<Vec<_>, _>>()?;
    let points: Vec<PtEntry> = reports.iter().map(PtEntry::from).collect();
    Ok(PtResult {
        size: a.size,
        route: route.as_str().into(),
        tol: a.tol,
        max_defect: points.iter().map(|p| p.conjugation_defect).fold(0.0, f64::max),
        all_passed: points.iter().all(|p| p.passed),
        points,
    })
}

pub fn phase(a: &PhaseArgs) -> Result<PhaseResult, CliError> {
    let rect = LambdaRect::new(a.grid.re_min, a.grid.re_max, a.grid.im_min, a.grid.im_max)?;
    let d = phase_diagram(rect, a.res, a.res, a.nk)?;
    Ok(PhaseResult::from(&d))
}

pub fn verify(a: &VerifyArgs, g: &GlobalOpts) -> Result<VerifyResult, CliError> {
    positive(a.tol, "--tol")?;
    check_size(a.size, g.allow_odd)?;
    let level = if a.hamiltonian {
        VerifyLevel::Hamiltonian
    } else {
        VerifyLevel::Matrix
    };
    let (lambdas, trivial) = match a.lambda {
        Some(l) => (vec![C64::from(l)], Vec::new()),
        None => (
            find_eps(a.size)?.iter().map(|r| r.lambda_ep).collect(),
            trivial_points(a.size)?,
        ),
    };
    let checks = lambdas
        .par_iter()
        .map(|&l| verify_ep(l, a.size, a.tol, level))
        .collect::<Result<Vec<_>, _>>()?;
    let checks: Vec<VerifyEntry> = checks.iter().map(VerifyEntry::from).collect();
    let trivial_points: Vec<TrivialEntry> = trivial.iter().map(TrivialEntry::from).collect();
    Ok(VerifyResult {
        size: a.size,
        tol: a.tol,
        level: match level {
            VerifyLevel::Matrix => "matrix",
            VerifyLevel::Hamiltonian => "hamiltonian",
        }
        .into(),
        all_passed: checks.iter().all(|c| c.passed) && trivial_points.iter().all(|t| !t.is_ep),
        checks,
        trivial_points,
    })
}
