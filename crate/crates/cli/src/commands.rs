//! The `spectrum` and `verify` commands. Each returns the command name, the
//! resolved parameters, the result rows and the checks.

use std::collections::BTreeMap;

use monopole_core::algebra::{aux_exponents, boundary_energy, degeneracy_count, solve_unirrep};
use monopole_core::duality::{
    cylindrical_energy, euler_energy, identity_grid, kepler_from_oscillator, oscillator_from_kepler,
    spectrum_identity_check, GridSize,
};
use monopole_core::fock::analyze;
use monopole_core::ode::oracle;
use monopole_core::ode::spectra::{
    cylindrical_spectrum, kepler_angular_spectrum, kepler_radial_spectrum, oscillator_angular_spectrum,
    oscillator_radial_spectrum, parabolic_spectrum,
};
use monopole_core::special::{angular_residual, radial_residual, ParabolicSide};
use monopole_core::{
    AngularCase, AngularPicture, Convention, EigenResult, HalfInt, ModelParams, OscillatorParams, QuantumNumbers,
    RadialCase, SpectraError,
};
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::args::{Cli, Command, ConventionArg, Grid, OdePicture, Options, SpectrumKind, VerifyKind};
use crate::report::{Check, Row};
use crate::CliError;

/// Algebraic energies against the boundary root of the expanded structure function.
pub const SPECTRUM_TOL: f64 = 1e-12;
pub const CLOSURE_TOL: f64 = 1e-9;
pub const CASIMIR_SCALAR_TOL: f64 = 1e-8;
pub const CALIBRATION_TOL: f64 = 1e-8;
/// Richardson-extrapolated eigenvalues against closed forms.
pub const ODE_TOL: f64 = 1e-6;
pub const IDENTITY_TOL: f64 = 1e-12;
pub const ROUND_TRIP_ULPS: f64 = 2.0;
pub const RESIDUAL_TOL: f64 = 1e-7;

pub const DEFAULT_MESH: usize = 2000;
pub const DEFAULT_KEPLER_RADIAL_MESH: usize = 4000;
pub const DEFAULT_RESIDUAL_POINTS: usize = 2001;

pub type Params = BTreeMap<String, Value>;
pub type Payload = (String, Params, Vec<Row>, Vec<Check>);

pub fn dispatch(cli: &Cli) -> Result<Payload, CliError> {
    let o = &cli.opts;
    match cli.command {
        Command::Spectrum(SpectrumKind::Kepler5d) => spectrum_kepler5d(o),
        Command::Spectrum(SpectrumKind::Osc8d) => spectrum_osc8d(o),
        Command::Verify(VerifyKind::Algebra) => verify_algebra(o),
        Command::Verify(VerifyKind::Ode) => verify_ode(o),
        Command::Verify(VerifyKind::Duality) => verify_duality(o),
        Command::Verify(VerifyKind::Residuals) => verify_residuals(o),
    }
}

fn half_int(name: &str, v: f64) -> Result<HalfInt, CliError> {
    HalfInt::new(v).map_err(|_| CliError::Invalid(format!("--{name} must be a non-negative multiple of 1/2, got {v}")))
}

fn model(o: &Options) -> Result<ModelParams, CliError> {
    Ok(ModelParams::new(o.c0, o.c1, o.c2, o.hbar)?)
}

fn oscillator(o: &Options) -> Result<OscillatorParams, CliError> {
    let osc = OscillatorParams {
        omega: o.omega,
        lambda1: o.lambda1,
        lambda2: o.lambda2,
        hbar: o.hbar,
    };
    osc.validate()?;
    Ok(osc)
}

fn convention(o: &Options) -> Convention {
    match o.convention {
        ConventionArg::AsPrinted => Convention::AsPrinted,
        ConventionArg::Consistent => Convention::Consistent,
    }
}

fn params_of(entries: &[(&str, Value)]) -> Params {
    entries.iter().map(|(k, v)| (k.to_string(), v.clone())).collect()
}

fn kepler_params(o: &Options) -> Vec<(&'static str, Value)> {
    vec![("c0", json!(o.c0)), ("c1", json!(o.c1)), ("c2", json!(o.c2)), ("hbar", json!(o.hbar))]
}

fn oscillator_params(o: &Options) -> Vec<(&'static str, Value)> {
    vec![
        ("omega", json!(o.omega)),
        ("lambda1", json!(o.lambda1)),
        ("lambda2", json!(o.lambda2)),
        ("hbar", json!(o.hbar)),
    ]
}

fn spectrum_kepler5d(o: &Options) -> Result<Payload, CliError> {
    let params = model(o)?;
    let qn = QuantumNumbers::new(o.l4, half_int("T", o.t)?)?;
    let (j, l) = (half_int("J", o.j)?, half_int("L", o.l)?);
    aux_exponents(&params, &qn)?;

    let levels: Vec<(u32, Result<Row, SpectraError>)> = (o.p_min..=o.p_max)
        .into_par_iter()
        .map(|p| {
            let row = solve_unirrep(p, &params, &qn).and_then(|sol| {
                let oracle = boundary_energy(p, &params, &qn)?;
                let labels = vec![("p", json!(p)), ("l4", json!(o.l4)), ("T", json!(o.t))];
                Ok(Row::new(labels, sol.energy, oracle, SPECTRUM_TOL, "boundary_root")
                    .with_degeneracy(degeneracy_count(p + 1, j, l)))
            });
            (p, row)
        })
        .collect();

    let mut rows = Vec::new();
    let mut skipped = Vec::new();
    for (p, r) in levels {
        match r {
            Ok(row) => rows.push(row),
            Err(SpectraError::PositivityViolation { .. }) => skipped.push(p),
            Err(e) => return Err(e.into()),
        }
    }
    let mut entries = kepler_params(o);
    entries.extend([
        ("l4", json!(o.l4)),
        ("T", json!(o.t)),
        ("J", json!(o.j)),
        ("L", json!(o.l)),
        ("p_min", json!(o.p_min)),
        ("p_max", json!(o.p_max)),
        ("skipped_p", json!(skipped)),
    ]);
    let checks = vec![Check::rows("energy matches boundary root", &rows)];
    Ok(("spectrum kepler5d".into(), params_of(&entries), rows, checks))
}

fn spectrum_osc8d(o: &Options) -> Result<Payload, CliError> {
    let osc = oscillator(o)?;
    let (t, k) = (half_int("T", o.t)?, half_int("K", o.k)?);
    let base = 0.5 * (t.value() + k.value());

    let mut rows = Vec::new();
    let mut spread = 0.0_f64;
    for level in 0..o.levels as u32 {
        let fillings: Vec<f64> = (0..=level)
            .map(|n| euler_energy(n, base + (level - n) as f64, t, k, &osc))
            .collect();
        let value = fillings[0];
        for e in &fillings {
            spread = spread.max((e - value).abs() / value.abs());
        }
        let oracle = cylindrical_energy(level, 0, t, k, &osc);
        let dual = kepler_from_oscillator(value, osc.omega, osc.lambda1, osc.lambda2);
        let labels = vec![
            ("N", json!(level)),
            ("T", json!(o.t)),
            ("K", json!(o.k)),
            ("kepler_c0", json!(dual.c0)),
        ];
        rows.push(Row::new(labels, value, oracle, SPECTRUM_TOL, "cylindrical_level").with_degeneracy(fillings.len() as u32));
    }
    let mut entries = oscillator_params(o);
    entries.extend([("T", json!(o.t)), ("K", json!(o.k)), ("levels", json!(o.levels))]);
    let checks = vec![
        Check::rows("energy matches cylindrical level", &rows),
        Check::at_most("fillings of n + lambda share one energy", spread, SPECTRUM_TOL),
    ];
    Ok(("spectrum osc8d".into(), params_of(&entries), rows, checks))
}

fn verify_algebra(o: &Options) -> Result<Payload, CliError> {
    let params = model(o)?;
    let qn = QuantumNumbers::new(o.l4, half_int("T", o.t)?)?;
    let conv = convention(o);
    let sol = solve_unirrep(o.p, &params, &qn)?;
    let r = analyze(o.p, &params, &qn, conv)?;

    let quantity = |q: &str| vec![("quantity", json!(q))];
    let mut rows = vec![
        Row::new(quantity("energy"), sol.energy, boundary_energy(o.p, &params, &qn)?, SPECTRUM_TOL, "boundary_root"),
        Row::new(quantity("residual [A,B]"), r.residual_q1, 0.0, CLOSURE_TOL, "zero"),
        Row::new(quantity("residual [A,C]"), r.residual_q2, 0.0, CLOSURE_TOL, "zero"),
        Row::new(quantity("residual [B,C]"), r.residual_q3, 0.0, CLOSURE_TOL, "zero"),
        Row::new(quantity("casimir off-diagonal"), r.casimir_offdiag, 0.0, CLOSURE_TOL, "zero"),
        Row::new(quantity("casimir scalar mismatch"), r.casimir_scalar_mismatch, 0.0, CASIMIR_SCALAR_TOL, "zero"),
    ];
    if conv == Convention::Consistent {
        rows.push(Row::new(quantity("rho calibration"), r.calibration_or_one(), 1.0, CALIBRATION_TOL, "unit"));
    }
    let checks = rows
        .iter()
        .map(|row| Check::rows(row.label("quantity").and_then(Value::as_str).unwrap_or_default(), std::slice::from_ref(row)))
        .collect();

    let mut entries = kepler_params(o);
    entries.extend([
        ("p", json!(o.p)),
        ("l4", json!(o.l4)),
        ("T", json!(o.t)),
        ("convention", json!(conv)),
        ("rho_calibration", json!(r.rho_calibration)),
        ("residual_bc_uncalibrated", json!(r.residual_q3_raw)),
    ]);
    Ok(("verify algebra".into(), params_of(&entries), rows, checks))
}

fn eigen_rows(result: &EigenResult, oracle: &[f64], oracle_id: &str) -> Vec<Row> {
    result
        .richardson
        .iter()
        .zip(oracle)
        .enumerate()
        .map(|(i, (&v, &e))| Row::new(vec![("level", json!(i))], v, e, ODE_TOL, oracle_id))
        .collect()
}

fn verify_ode(o: &Options) -> Result<Payload, CliError> {
    let k = o.levels;
    let (j, l) = (half_int("J", o.j)?, half_int("L", o.l)?);
    let (t, kk) = (half_int("T", o.t)?, half_int("K", o.k)?);
    let mesh = o.mesh.unwrap_or(match o.picture {
        OdePicture::KeplerRadial => DEFAULT_KEPLER_RADIAL_MESH,
        _ => DEFAULT_MESH,
    });
    let mut entries: Vec<(&str, Value)> = vec![
        ("picture", json!(format!("{:?}", o.picture))),
        ("levels", json!(k)),
        ("mesh", json!(mesh)),
    ];

    let rows = match o.picture {
        OdePicture::KeplerRadial => {
            let params = model(o)?;
            entries.extend(kepler_params(o));
            entries.push(("Lambda", json!(o.lambda_sep)));
            let r = kepler_radial_spectrum(o.lambda_sep, &params, k, mesh)?;
            eigen_rows(&r, &oracle::kepler_radial(o.lambda_sep, &params, k), "kepler_radial")
        }
        OdePicture::KeplerAngular => {
            let params = model(o)?;
            entries.extend(kepler_params(o));
            entries.extend([("J", json!(o.j)), ("L", json!(o.l))]);
            let r = kepler_angular_spectrum(j, l, &params, k, mesh)?;
            eigen_rows(&r, &oracle::kepler_angular(j, l, &params, k), "kepler_angular")
        }
        OdePicture::OscRadial => {
            let osc = oscillator(o)?;
            entries.extend(oscillator_params(o));
            entries.push(("Gamma", json!(o.gamma_sep)));
            let r = oscillator_radial_spectrum(o.gamma_sep, osc.omega, osc.hbar, k, mesh)?;
            eigen_rows(&r, &oracle::oscillator_radial(o.gamma_sep, osc.omega, osc.hbar, k), "oscillator_radial")
        }
        OdePicture::OscAngular => {
            let osc = oscillator(o)?;
            entries.extend(oscillator_params(o));
            entries.extend([("T", json!(o.t)), ("K", json!(o.k))]);
            let lambdas = (osc.lambda1, osc.lambda2);
            let r = oscillator_angular_spectrum(t, kk, lambdas, osc.hbar, k, mesh)?;
            eigen_rows(&r, &oracle::oscillator_angular(t, kk, lambdas, osc.hbar, k), "oscillator_angular")
        }
        OdePicture::Cylindrical => {
            let osc = oscillator(o)?;
            entries.extend(oscillator_params(o));
            entries.push(("T", json!(o.t)));
            let r = cylindrical_spectrum(t, osc.lambda1, osc.omega, osc.hbar, k, mesh)?;
            eigen_rows(&r, &oracle::cylindrical(t, osc.lambda1, osc.omega, osc.hbar, k), "cylindrical")
        }
        OdePicture::Parabolic => {
            let params = model(o)?;
            entries.extend(kepler_params(o));
            entries.extend([("J", json!(o.j)), ("L", json!(o.l))]);
            parabolic_spectrum(j, l, &params, k, mesh)?
                .iter()
                .enumerate()
                .map(|(i, lv)| {
                    let labels = vec![
                        ("level", json!(i)),
                        ("n1", json!(lv.n1)),
                        ("n2", json!(lv.n2)),
                        ("kappa", json!(lv.kappa)),
                    ];
                    let e = oracle::parabolic(lv.n1, lv.n2, j, l, &params);
                    Row::new(labels, lv.energy, e, ODE_TOL, "parabolic")
                })
                .collect()
        }
    };
    let checks = vec![Check::rows("extrapolated eigenvalues match closed form", &rows)];
    Ok(("verify ode".into(), params_of(&entries), rows, checks))
}

/// Top-level scalar fields of a serialized case become row labels.
fn case_labels(case: &Value) -> Vec<(String, Value)> {
    case.as_object()
        .map(|m| m.iter().filter(|(_, v)| !v.is_object()).map(|(k, v)| (k.clone(), v.clone())).collect())
        .unwrap_or_default()
}

fn verify_duality(o: &Options) -> Result<Payload, CliError> {
    let size = match o.grid {
        Grid::Small => GridSize::Small,
        Grid::Full => GridSize::Full,
    };
    let cases = identity_grid(size);
    let rows: Vec<Row> = cases
        .par_iter()
        .map(|case| {
            let r = spectrum_identity_check(case)?;
            let mut row = Row::new(vec![], r.picture_energy, r.algebraic_energy, IDENTITY_TOL, "algebraic_level");
            row.labels = case_labels(&serde_json::to_value(case).expect("case serializes"));
            row.labels.push(("p".into(), json!(r.p)));
            Ok(row)
        })
        .collect::<Result<_, SpectraError>>()?;

    // Kepler -> oscillator -> Kepler over every computed energy
    let mut worst_ulps = 0.0_f64;
    for row in &rows {
        for (c0, c1, c2) in [(1.0, 0.0, 0.0), (1.0, 0.5, 1.5)] {
            let osc = oscillator_from_kepler(c0, row.value, c1, c2)?;
            let back = kepler_from_oscillator(osc.epsilon, osc.omega, osc.lambda1, osc.lambda2);
            for (a, b) in [(back.c0, c0), (back.energy, row.value), (back.c1, c1), (back.c2, c2)] {
                worst_ulps = worst_ulps.max((a - b).abs() / (f64::EPSILON * b.abs().max(f64::MIN_POSITIVE)));
            }
        }
    }
    let checks = vec![
        Check::rows("picture energies match algebraic levels", &rows),
        Check::at_most("duality round trip (ulp)", worst_ulps, ROUND_TRIP_ULPS),
    ];
    let entries = [
        ("grid", json!(format!("{:?}", o.grid).to_lowercase())),
        ("cases", json!(cases.len())),
        ("c0", json!(1.0)),
        ("omega", json!(1.0)),
        ("hbar", json!(1.0)),
    ];
    Ok(("verify duality".into(), params_of(&entries), rows, checks))
}

enum ResidualCase {
    Angular(AngularCase),
    Radial(RadialCase),
}

fn verify_residuals(o: &Options) -> Result<Payload, CliError> {
    let params = model(o)?;
    let osc = oscillator(o)?;
    let (j, l) = (half_int("J", o.j)?, half_int("L", o.l)?);
    let (t, kk) = (half_int("T", o.t)?, half_int("K", o.k)?);
    let conv = convention(o);
    let points = o.mesh.unwrap_or(DEFAULT_RESIDUAL_POINTS);
    let levels = o.levels as u32;

    let kepler_angular = |k: u32| AngularCase {
        picture: AngularPicture::KeplerHyperspherical,
        lambda: 0.5 * (j.value() + l.value()) + k as f64,
        z1: j,
        z2: l,
        couplings: (params.c1, params.c2),
        hbar: params.hbar,
    };
    let euler_angular = |k: u32| AngularCase {
        picture: AngularPicture::OscillatorEuler,
        lambda: 0.5 * (t.value() + kk.value()) + k as f64,
        z1: t,
        z2: kk,
        couplings: (osc.lambda1, osc.lambda2),
        hbar: osc.hbar,
    };
    let (ka, ea) = (kepler_angular(0), euler_angular(0));

    let mut cases: Vec<(Vec<(&str, Value)>, ResidualCase)> = Vec::new();
    for i in 0..levels {
        cases.push((vec![("equation", json!("kepler_angular")), ("k", json!(i))], ResidualCase::Angular(kepler_angular(i))));
        cases.push((vec![("equation", json!("euler_angular")), ("k", json!(i))], ResidualCase::Angular(euler_angular(i))));
        cases.push((
            vec![("equation", json!("kepler_radial")), ("n", json!(i))],
            ResidualCase::Radial(RadialCase::kepler(i, ka.lambda, &ka.deltas(), &params)),
        ));
        cases.push((
            vec![("equation", json!("oscillator_radial")), ("n", json!(i))],
            ResidualCase::Radial(RadialCase::oscillator(i, ea.lambda, &ea.deltas(), osc.omega, osc.hbar)),
        ));
        cases.push((
            vec![("equation", json!("cylindrical")), ("n", json!(i))],
            ResidualCase::Radial(RadialCase::Cylindrical { n: i, z: t, coupling: osc.lambda1, hbar: osc.hbar }),
        ));
    }
    let total = levels.min(3);
    for n1 in 0..total {
        for n2 in 0..total - n1 {
            for (side, name) in [(ParabolicSide::Mu, "parabolic_mu"), (ParabolicSide::Nu, "parabolic_nu")] {
                cases.push((
                    vec![("equation", json!(name)), ("n1", json!(n1)), ("n2", json!(n2))],
                    ResidualCase::Radial(RadialCase::Parabolic { side, n1, n2, j, l, params }),
                ));
            }
        }
    }

    let rows: Vec<Row> = cases
        .into_par_iter()
        .map(|(labels, case)| {
            let r = match &case {
                ResidualCase::Angular(a) => angular_residual(a, conv, points)?,
                ResidualCase::Radial(r) => radial_residual(r, conv, points)?,
            };
            Ok(Row::new(labels, r, 0.0, RESIDUAL_TOL, "zero"))
        })
        .collect::<Result<_, SpectraError>>()?;

    let mut entries = kepler_params(o);
    entries.extend(oscillator_params(o));
    entries.extend([
        ("J", json!(o.j)),
        ("L", json!(o.l)),
        ("T", json!(o.t)),
        ("K", json!(o.k)),
        ("levels", json!(o.levels)),
        ("points", json!(points)),
        ("convention", json!(conv)),
    ]);
    let checks = vec![Check::rows("interior residual", &rows)];
    Ok(("verify residuals".into(), params_of(&entries), rows, checks))
}
