mod cli;
mod report;

use std::fs;
use std::path::Path;
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::Parser;
use germcalc::calculus::{comp_inverse, compose, solvable2_test, DiffeoGerm};
use germcalc::coprimality::{decide_coprime, default_d_max, milnor_dim_estimate};
use germcalc::flows::{flow_series, ode_solve, OdeSpec, VectorField};
use germcalc::foliation::{
    blowup_data, generator_loops, holonomy, singular_data, solvability_report, BlownField,
    FoliationPair, HolonomyConfig, LinearModel, SolvabilityStatus,
};
use germcalc::io::{float_json, parse_series, parse_series_list, scalar_json, NamedSeries};
use germcalc::norms::{a_norm, a_norm_exact, deriv_constant, WeightSequence};
use germcalc::{GaussianRational, GermError, Scalar, Series};
use num_complex::Complex64;
use serde_json::{json, Value};

use cli::{Cli, Command, FoliationArgs, Mode};
use report::Report;

/// Exit status when the inputs are at fault.
const EXIT_DOMAIN: u8 = 2;
/// Exit status when a numerical result is not trustworthy.
const EXIT_NUMERIC: u8 = 3;

/// Points on each generator circle.
const LOOP_VERTICES: usize = 64;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            let numeric = e
                .downcast_ref::<GermError>()
                .is_some_and(GermError::is_numeric);
            ExitCode::from(if numeric { EXIT_NUMERIC } else { EXIT_DOMAIN })
        }
    }
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

fn load<S: Scalar>(path: &Path) -> Result<NamedSeries<S>> {
    parse_series(&read(path)?).with_context(|| format!("in {}", path.display()))
}

fn load_list<S: Scalar>(path: &Path) -> Result<Vec<NamedSeries<S>>> {
    parse_series_list(&read(path)?).with_context(|| format!("in {}", path.display()))
}

fn run(cli: &Cli) -> Result<u8> {
    let mode = cli.mode.unwrap_or(Mode::Exact);
    let (report, code) = match (&cli.command, mode) {
        (Command::Foliation(args), _) => foliation(cli, args)?,
        (Command::Coprime { .. }, Mode::Approx) => {
            bail!(GermError::Domain("coprime needs exact arithmetic".into()))
        }
        (
            Command::Coprime {
                inputs,
                dmax,
                milnor,
            },
            Mode::Exact,
        ) => (coprime(cli, inputs, *dmax, *milnor)?, 0),
        (Command::Dconst { k, alpha, beta }, _) => {
            let mut r = Report::new("dconst", cli);
            r.value("constant", deriv_constant(*k, *alpha, *beta)?);
            (r, 0)
        }
        (_, Mode::Exact) => (generic::<GaussianRational>(cli)?, 0),
        (_, Mode::Approx) => (generic::<Complex64>(cli)?, 0),
    };
    let text = report.render(cli.format);
    match &cli.out {
        Some(path) => {
            fs::write(path, text).with_context(|| format!("cannot write {}", path.display()))?
        }
        None => print!("{text}"),
    }
    Ok(code)
}

/// Subcommands that run over either scalar type.
fn generic<S: Scalar>(cli: &Cli) -> Result<Report> {
    match &cli.command {
        Command::Norm { input, alpha } => {
            let f = load::<S>(input)?;
            let mut r = Report::new("norm", cli);
            r.value(
                "norm",
                a_norm(&f.series, &WeightSequence::factorial(*alpha)?)?,
            );
            if alpha.fract() == 0.0 && *alpha >= 0.0 {
                if let Some(exact) = a_norm_exact(&f.series, *alpha as u32) {
                    r.value("exact", exact.to_string());
                }
            }
            Ok(r)
        }
        Command::Compose { f, g, order } => {
            let f = load::<S>(f)?;
            let g = load_list::<S>(g)?;
            let vars = g.first().map(|s| s.vars.clone()).unwrap_or_default();
            let inner: Vec<Series<S>> = g.into_iter().map(|s| s.series).collect();
            let out = jet_to(compose(&f.series, &inner)?, *order)?;
            let mut r = Report::new("compose", cli);
            r.series("composition", &out, &vars);
            Ok(r)
        }
        Command::Invert { d, order } => {
            let d = load::<S>(d)?;
            let germ = DiffeoGerm::new(jet_to(d.series, *order)?)?;
            let inv = comp_inverse(&germ)?;
            let mut r = Report::new("invert", cli);
            r.series("inverse", inv.series(), &d.vars);
            Ok(r)
        }
        Command::Solvable2 { f, g, order } => {
            let f = load::<S>(f)?;
            let g = load::<S>(g)?;
            let rep = solvable2_test(
                &DiffeoGerm::new(f.series)?,
                &DiffeoGerm::new(g.series)?,
                *order,
            )?;
            let mut r = Report::new("solvable2", cli);
            r.value("passes", rep.passes())
                .value("order", rep.order)
                .value("first_failure", rep.first_failure)
                .series("defect", &rep.defect, &f.vars);
            Ok(r)
        }
        Command::Flow { x, order } => {
            let x = load_list::<S>(x)?;
            let mut vars = x.first().map(|s| s.vars.clone()).unwrap_or_default();
            vars.push("t".into());
            let field = VectorField::new(x.into_iter().map(|s| s.series).collect())?;
            let flow = flow_series(&field, *order)?;
            let mut r = Report::new("flow", cli);
            for (j, c) in flow.components().iter().enumerate() {
                r.series(&format!("phi{j}"), c, &vars);
            }
            Ok(r)
        }
        Command::Odesolve { p, k, jet, order } => {
            let p = load::<S>(p)?;
            let (j, vars) = match jet {
                Some(path) => {
                    let j = load::<S>(path)?;
                    (j.series, j.vars)
                }
                None => (Series::zero(1, *order), vec!["z".to_string()]),
            };
            let spec = OdeSpec::new(*k, p.series)?;
            let sol = ode_solve(&j, &spec, *order)?;
            let mut r = Report::new("odesolve", cli);
            r.series("solution", &sol, &vars);
            Ok(r)
        }
        Command::Dconst { .. } | Command::Coprime { .. } | Command::Foliation(_) => {
            unreachable!("dispatched before the scalar choice")
        }
    }
}

fn jet_to<S: Scalar>(s: Series<S>, order: Option<u32>) -> Result<Series<S>> {
    match order {
        Some(n) if n > s.trunc() => Err(GermError::InsufficientTruncation {
            needed: n,
            available: s.trunc(),
        }
        .into()),
        Some(n) => Ok(s.jet(n)),
        None => Ok(s),
    }
}

fn coprime(
    cli: &Cli,
    inputs: &[std::path::PathBuf],
    dmax: Option<u32>,
    milnor: Option<u32>,
) -> Result<Report> {
    let f = inputs
        .iter()
        .map(|p| load::<GaussianRational>(p).map(|s| s.series))
        .collect::<Result<Vec<_>>>()?;
    let d_max = dmax.unwrap_or_else(|| default_d_max(&f));
    let verdict = decide_coprime(&f, d_max)?;
    let mut r = Report::new("coprime", cli);
    r.value("d_max", d_max).value("verdict", &verdict);
    if let Some(n) = milnor {
        r.value("milnor", milnor_dim_estimate(&f, n)?);
    }
    Ok(r)
}

fn c64(z: Complex64) -> Value {
    scalar_json(&z)
}

fn foliation(cli: &Cli, args: &FoliationArgs) -> Result<(Report, u8)> {
    let p = load::<GaussianRational>(&args.p)?.series;
    let q = load::<GaussianRational>(&args.q)?.series;
    let xu = ["x".to_string(), "u".to_string()];
    if args.check {
        let pair = FoliationPair::assess(p, q)?;
        let data = blowup_data(&pair)?;
        let mut r = Report::new("foliation", cli);
        r.series("blown_x", &data.field.components()[0], &xu)
            .series("blown_u", &data.field.components()[1], &xu)
            .value("phi", data.phi.iter().map(scalar_json).collect::<Vec<_>>())
            .scalar("discriminant", &data.discriminant)
            .value("rnd_star", &data.rnd_star)
            .value("coprimality", pair.coprimality());
        return Ok((r, 0));
    }
    let pair = FoliationPair::new(p, q)?;
    if args.singular {
        let mut r = Report::new("foliation", cli);
        r.value("singular_points", singular_json(&pair)?);
        return Ok((r, 0));
    }
    if cli.mode == Some(Mode::Exact) {
        bail!(GermError::Domain(
            "holonomy is numerical; drop --mode exact".into()
        ));
    }
    let cfg = HolonomyConfig {
        samples: args.samples,
        fit_degree: args.fit_degree,
        rtol: args.tol,
        ..HolonomyConfig::default()
    };
    let mut r = Report::new("foliation", cli);
    r.value("singular_points", singular_json(&pair)?);
    let code = match &args.loop_spec {
        Some(spec) => {
            let j = parse_around(spec)?;
            let points = singular_data(&pair)?;
            let point = points
                .get(j)
                .ok_or_else(|| anyhow!(GermError::Domain(format!("no singular point {j}"))))?;
            let field = BlownField::new(&pair)?;
            let layout = generator_loops(&field_points(&points), LOOP_VERTICES)?;
            let h = holonomy(&field, &layout.generator(j), &cfg)?;
            let model = LinearModel {
                lambda_x: point.lambda_x,
                lambda_u: point.lambda_u,
                center: point.u,
            };
            r.value("base", c64(layout.base))
                .value("multiplier", c64(h.multiplier()))
                .value("linear_multiplier", c64(model.multiplier()))
                .value(
                    "coefficients",
                    h.fit
                        .coefficients
                        .iter()
                        .map(|&c| c64(c))
                        .collect::<Vec<_>>(),
                )
                .value(
                    "uncertainty",
                    h.fit
                        .uncertainty
                        .iter()
                        .map(|&u| float_json(u))
                        .collect::<Vec<_>>(),
                )
                .value("residual", float_json(h.fit.residual))
                .value("r_max", float_json(h.fit.r_max))
                .value("low_confidence", h.low_confidence);
            if h.low_confidence {
                EXIT_NUMERIC
            } else {
                0
            }
        }
        None => {
            let order = args.order.unwrap_or(args.fit_degree);
            let rep = solvability_report(&pair, order, &cfg)?;
            let status = match &rep.status {
                SolvabilityStatus::Consistent { through } => {
                    json!({"consistent": {"through": through}})
                }
                SolvabilityStatus::Fails {
                    degree,
                    defect,
                    uncertainty,
                } => json!({"fails": {
                    "degree": degree, "defect": float_json(*defect), "uncertainty": float_json(*uncertainty)}}),
                SolvabilityStatus::Inconclusive { reason } => json!({"inconclusive": reason}),
            };
            r.value("status", status)
                .value("generators", [rep.generators.0, rep.generators.1])
                .value(
                    "multipliers",
                    [c64(rep.multipliers.0), c64(rep.multipliers.1)],
                )
                .value(
                    "residuals",
                    [float_json(rep.residuals.0), float_json(rep.residuals.1)],
                )
                .value("defect", &rep.defect)
                .value("uncertainty", &rep.uncertainty);
            if matches!(rep.status, SolvabilityStatus::Inconclusive { .. }) {
                EXIT_NUMERIC
            } else {
                0
            }
        }
    };
    Ok((r, code))
}

fn field_points(points: &[germcalc::foliation::SingularPoint]) -> Vec<Complex64> {
    points.iter().map(|p| p.u).collect()
}

fn singular_json(pair: &FoliationPair) -> Result<Vec<Value>> {
    Ok(singular_data(pair)?
        .iter()
        .map(|p| {
            json!({
                "u": c64(p.u),
                "lambda_x": c64(p.lambda_x),
                "lambda_u": c64(p.lambda_u),
                "ratio": c64(p.ratio),
                "residual": float_json(p.residual),
            })
        })
        .collect())
}

fn parse_around(spec: &str) -> Result<usize> {
    spec.strip_prefix("around:")
        .and_then(|j| j.parse().ok())
        .ok_or_else(|| {
            anyhow!(GermError::InvalidParameters(format!(
                "expected around:<index>, got {spec:?}"
            )))
        })
}
