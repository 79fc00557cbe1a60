use std::path::Path;

use qcollide::channels::is_indivisible_family;
use qcollide::collision::{ru_collision, Backend, DEFAULT_DENSE_CAP};
use qcollide::dynamics::{
    coeff_extract, coeff_printed, family_det3, family_map, generator_numeric, singular_times, step_bound,
    step_delta_estimate,
};
use qcollide::{AffineQubitMap, CollisionConfig, DensityOperator, FamilyParams, GeneratorCoeffs};

use crate::args::{
    parse_state, state_label, Command, DistanceArgs, DivisibleArgs, FormatArg, GeneratorArgs, RandomUnitaryArgs,
    SimulateArgs, TrajectoryArgs,
};
use crate::format::{num, to_json, Csv};
use crate::records::{matrix_to_json, ChannelRecord, EndpointRecord, SpecFile, StateFile};
use crate::{emit, CliError, Output, DENSE_CAP_VAR};

pub(crate) fn execute(cmd: &Command) -> Result<(), CliError> {
    match cmd {
        Command::Simulate(a) => emit(simulate(a)?, a.out.as_deref()),
        Command::Trajectory(a) => emit(trajectory(a)?, a.out.as_deref()),
        Command::Distance(a) => emit(distance(a)?, a.out.as_deref()),
        Command::Generator(a) => emit(generator(a)?, a.out.as_deref()),
        Command::Divisible(a) => emit(divisible(a)?, None),
        Command::Randomunitary(a) => emit(random_unitary(a)?, a.out.as_deref()),
    }
}

fn dense_cap() -> Result<usize, CliError> {
    match std::env::var(DENSE_CAP_VAR) {
        Ok(v) => v
            .trim()
            .parse::<usize>()
            .map_err(|_| CliError::Invalid(format!("{DENSE_CAP_VAR} must be a non-negative integer, got {v:?}"))),
        Err(_) => Ok(DEFAULT_DENSE_CAP),
    }
}

fn destination(out: Option<&Path>) -> String {
    match out {
        Some(p) if p.as_os_str() != "-" => p.display().to_string(),
        _ => "<stdout>".to_string(),
    }
}

fn fmt_vec(v: &[f64]) -> String {
    let parts: Vec<String> = v.iter().map(|x| format!("{x:.6}")).collect();
    format!("({})", parts.join(", "))
}

fn check_samples(samples: usize) -> Result<(), CliError> {
    if samples < 2 {
        return Err(CliError::Invalid(format!("a grid needs at least 2 samples, got {samples}")));
    }
    Ok(())
}

fn grid(end: f64, samples: usize) -> impl Iterator<Item = f64> {
    (0..samples).map(move |i| end * i as f64 / (samples - 1) as f64)
}

fn simulate(a: &SimulateArgs) -> Result<Output, CliError> {
    let q = a.q.weights()?;
    let r0 = parse_state(&a.state)?;
    let rho0 = DensityOperator::from_bloch(r0)?;
    let j = a.j.unwrap_or(a.n);
    let backend: Backend = a.backend.into();
    let mut cfg = CollisionConfig::target(a.n, backend)?.with_dense_cap(dense_cap()?);
    if let Some(eta) = a.eta_override {
        if !eta.is_finite() {
            return Err(CliError::Invalid("eta override must be finite".into()));
        }
        cfg = cfg.with_eta(eta);
    }
    if j > a.n {
        return Err(CliError::Invalid(format!("--j {j} exceeds --n {}", a.n)));
    }

    let final_state = cfg.simulate(&rho0, &q, j)?;
    let final_bloch = final_state.bloch()?;
    let body = match a.format {
        FormatArg::Json => {
            let map = cfg.channel(&q, j)?;
            to_json(&ChannelRecord {
                q: q.as_array(),
                n: a.n,
                j,
                eta: cfg.eta,
                backend: format!("{:?}", a.backend).to_lowercase(),
                initial_bloch: r0,
                final_bloch,
                final_state: matrix_to_json(final_state.matrix()),
                affine: map.matrix().0,
            })
        }
        FormatArg::Csv => {
            let mut header = vec!["j".to_string(), "rx".into(), "ry".into(), "rz".into()];
            header.extend((0..16).map(|k| format!("m{}{}", k / 4, k % 4)));
            let header: Vec<&str> = header.iter().map(String::as_str).collect();
            let mut csv = Csv::new(&header);
            for step in 0..=j {
                let r = cfg.simulate(&rho0, &q, step)?.bloch()?;
                let m = cfg.channel(&q, step)?;
                let mut row = vec![step.to_string(), num(r[0]), num(r[1]), num(r[2])];
                row.extend(m.matrix().0.iter().flatten().map(|&v| num(v)));
                csv.row(&row);
            }
            csv.finish()
        }
    };
    Ok(Output {
        body: Some(body),
        summary: format!(
            "simulate: n={} j={j} backend={:?} final_bloch={} -> {}",
            a.n,
            a.backend,
            fmt_vec(&final_bloch),
            destination(a.out.as_deref())
        )
        .to_lowercase(),
    })
}

fn trajectory(a: &TrajectoryArgs) -> Result<Output, CliError> {
    let q = a.q.weights()?;
    check_samples(a.samples)?;
    let p = FamilyParams::new(q, a.n)?;
    let states = a
        .states
        .iter()
        .filter(|s| !s.trim().is_empty())
        .map(|s| Ok((state_label(s), parse_state(s)?)))
        .collect::<Result<Vec<_>, CliError>>()?;
    if states.is_empty() {
        return Err(CliError::Invalid("no initial states given".into()));
    }
    let maps: Vec<(f64, AffineQubitMap)> = grid(a.n as f64, a.samples).map(|t| (t, family_map(t, &p))).collect();
    let mut csv = Csv::new(&["t", "state", "rx", "ry", "rz"]);
    for (label, r0) in &states {
        for (t, m) in &maps {
            let r = m.apply_bloch(*r0);
            csv.row(&[num(*t), label.clone(), num(r[0]), num(r[1]), num(r[2])]);
        }
    }
    Ok(Output {
        body: Some(csv.finish()),
        summary: format!(
            "trajectory: n={} samples={} states={} -> {}",
            a.n,
            a.samples,
            states.len(),
            destination(a.out.as_deref())
        ),
    })
}

fn distance(a: &DistanceArgs) -> Result<Output, CliError> {
    let q = a.q.weights()?;
    if a.n == 0 {
        return Err(CliError::Invalid("--n must be at least 1".into()));
    }
    let mut csv = Csv::new(&["j", "delta_lower", "c_coef", "d_coef", "bound"]);
    let mut worst: f64 = 0.0;
    for j in 0..a.n {
        let delta = step_delta_estimate(j, a.n, &q, a.trials, a.seed)?;
        let sb = step_bound::<f64>(j, a.n)?;
        worst = worst.max(delta);
        csv.row(&[j.to_string(), num(delta), num(sb.c_next), num(sb.d_next), num(sb.bound)]);
    }
    let bound = step_bound::<f64>(0, a.n)?.bound;
    Ok(Output {
        body: Some(csv.finish()),
        summary: format!(
            "distance: n={} trials={} seed={} max_delta={worst:.6} bound={bound:.6} -> {}",
            a.n,
            a.trials,
            a.seed,
            destination(a.out.as_deref())
        ),
    })
}

fn generator(a: &GeneratorArgs) -> Result<Output, CliError> {
    let q = a.q.weights()?;
    let p = FamilyParams::new(q, a.n)?;
    let times: Vec<f64> = match a.t {
        Some(t) if t.is_finite() => vec![t],
        Some(_) => return Err(CliError::Invalid("--t must be finite".into())),
        None => {
            check_samples(a.samples)?;
            grid(p.end_time(), a.samples).collect()
        }
    };
    let lo = times.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = times.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let margin = p.singular_margin();
    let poles = singular_times(&p, lo - margin, hi + margin);

    let mut csv =
        Csv::new(&["t", "b_num", "c_num", "d_num", "residual", "b_printed", "c_printed", "d_printed", "det3"]);
    let mut max_residual: f64 = 0.0;
    let mut skipped = 0usize;
    for &t in &times {
        let det = family_det3(t, &p);
        let near_pole = poles.iter().any(|&ts| (t - ts).abs() < margin);
        let numeric = if near_pole {
            Err(qcollide::Error::SingularAt { t, det })
        } else {
            generator_numeric(t, &p).map(|l| coeff_extract(&l))
        };
        let (coeffs, residual) = match numeric {
            Ok(ex) => (Some(ex.coeffs), ex.residual),
            Err(e @ qcollide::Error::SingularAt { .. }) if !a.segment => return Err(e.into()),
            Err(qcollide::Error::SingularAt { .. }) => {
                skipped += 1;
                (None, f64::NAN)
            }
            Err(e) => return Err(e.into()),
        };
        if residual.is_finite() {
            max_residual = max_residual.max(residual);
        }
        let printed = coeff_printed(t, p.alpha).ok();
        let split = |k: Option<GeneratorCoeffs>| k.map_or([f64::NAN; 3], |k| [k.b, k.c, k.d]);
        let n = split(coeffs);
        let pr = split(printed);
        csv.row(&[num(t), num(n[0]), num(n[1]), num(n[2]), num(residual), num(pr[0]), num(pr[1]), num(pr[2]), num(det)]);
    }
    Ok(Output {
        body: Some(csv.finish()),
        summary: format!(
            "generator: n={} rows={} singular_rows={skipped} max_residual={max_residual:.3e} -> {}",
            a.n,
            times.len(),
            destination(a.out.as_deref())
        ),
    })
}

fn divisible(a: &DivisibleArgs) -> Result<Output, CliError> {
    let q = a.q.weights()?;
    Ok(Output { body: None, summary: is_indivisible_family(&q).to_string() })
}

fn random_unitary(a: &RandomUnitaryArgs) -> Result<Output, CliError> {
    let spec = SpecFile::load(&a.spec)?;
    let rho0 = StateFile::load(&a.state_file)?;
    if rho0.dim() != spec.dim() {
        return Err(CliError::Invalid(format!("state has dimension {}, spec has d = {}", rho0.dim(), spec.dim())));
    }
    if a.k > spec.steps() {
        return Err(CliError::Invalid(format!("--k {} exceeds n = {}", a.k, spec.steps())));
    }
    let rho = ru_collision(&rho0, &spec, a.k)?;
    let rec = EndpointRecord { d: spec.dim(), n: spec.steps(), k: a.k, rho: matrix_to_json(rho.matrix()) };
    Ok(Output {
        body: Some(to_json(&rec)),
        summary: format!(
            "randomunitary: d={} n={} k={} purity={:.6} -> {}",
            rec.d,
            rec.n,
            rec.k,
            rho.purity(),
            destination(a.out.as_deref())
        ),
    })
}
