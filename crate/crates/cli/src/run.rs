use std::fs::{self, File};
use std::io::{BufReader, BufWriter, Write};
use std::path::Path;

use nlsphere::models::{
    cesaro_apply, constant, cos10xy_initial, death_star_rhs, energy_grid, ginzburg_landau_energy, random_coeffs,
    solve_poisson, AllenCahnConfig, BrusselatorConfig, ModelSystem, PoissonProblem,
};
use nlsphere::models::poisson::apply_pinned;
use nlsphere::sht::relative_error;
use nlsphere::{synthesis, Error, EvalMethod, Kernel, KernelParams, SphHarmCoeffs, Spectrum};

use crate::args::{Command, EvolveArgs, KernelArgs, Method, Model, PoissonArgs, SpectrumArgs};

/// Residual above which a Poisson solve is reported as a numerical failure.
const POISSON_RESIDUAL_TOL: f64 = 1e-10;

#[derive(Debug)]
pub enum Failure {
    /// Bad flags or inputs; exit code 1.
    Invalid(String),
    /// Blow-up or failed residual check; exit code 2.
    Numerical(String),
}

impl Failure {
    pub fn code(&self) -> u8 {
        match self {
            Failure::Invalid(_) => 1,
            Failure::Numerical(_) => 2,
        }
    }
}

impl std::fmt::Display for Failure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Failure::Invalid(m) | Failure::Numerical(m) => f.write_str(m),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::BlowUp { .. } => Failure::Numerical(e.to_string()),
            other => Failure::Invalid(other.to_string()),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Invalid(e.to_string())
    }
}

type Outcome = Result<(), Failure>;

pub fn run(command: Command) -> Outcome {
    match command {
        Command::Spectrum(a) => spectrum(&a),
        Command::Poisson(a) => poisson(&a),
        Command::Evolve(a) => evolve(&a),
    }
}

fn method(k: &KernelArgs) -> EvalMethod {
    match k.method {
        Method::Rec => EvalMethod::Recurrence,
        Method::Asy => EvalMethod::Asymptotic,
        Method::Hybrid => EvalMethod::Hybrid {
            switch_degree: k.switch_degree,
        },
    }
}

fn kernel(k: &KernelArgs, default_alpha: f64, default_delta: f64) -> Result<Kernel<f64>, Failure> {
    if k.local {
        if k.alpha.is_some() || k.delta.is_some() {
            return Err(Failure::Invalid("--local cannot be combined with --alpha/--delta".into()));
        }
        return Ok(Kernel::Local);
    }
    let params = KernelParams::new(k.alpha.unwrap_or(default_alpha), k.delta.unwrap_or(default_delta))?;
    Ok(Kernel::Nonlocal(params))
}

fn create(dir: &Path, name: &str) -> Result<BufWriter<File>, Failure> {
    let path = dir.join(name);
    let file = File::create(&path).map_err(|e| Failure::Invalid(format!("{}: {e}", path.display())))?;
    Ok(BufWriter::new(file))
}

fn prepare_dir(dir: &Path) -> Outcome {
    fs::create_dir_all(dir).map_err(|e| Failure::Invalid(format!("{}: {e}", dir.display())))
}

fn write_coeffs(dir: &Path, name: &str, u: &SphHarmCoeffs<f64>) -> Outcome {
    let mut w = create(dir, name)?;
    u.write_csv(&mut w)?;
    w.flush()?;
    Ok(())
}

fn write_grid(dir: &Path, name: &str, u: &SphHarmCoeffs<f64>) -> Outcome {
    let grid = nlsphere::SphereGrid::new(u.degree())?;
    let values = synthesis(u, &grid)?;
    let mut w = create(dir, name)?;
    values.write_csv(&grid, &mut w)?;
    w.flush()?;
    Ok(())
}

fn spectrum(a: &SpectrumArgs) -> Outcome {
    let kernel = kernel(&a.kernel, -0.5, 1.0)?;
    let spec = Spectrum::compute(a.degree, kernel, method(&a.kernel))?;
    prepare_dir(&a.output_dir)?;
    let mut w = create(&a.output_dir, "spectrum.csv")?;
    spec.write_csv(&mut w)?;
    w.flush()?;
    Ok(())
}

fn poisson(a: &PoissonArgs) -> Outcome {
    let kernel = kernel(&a.kernel, 0.0, 1.5)?;
    let rhs = if a.rhs == "death-star" {
        death_star_rhs(a.degree)?
    } else {
        let file = File::open(&a.rhs).map_err(|e| Failure::Invalid(format!("{}: {e}", a.rhs)))?;
        let rhs = SphHarmCoeffs::read_csv(BufReader::new(file))?;
        if rhs.degree() != a.degree {
            return Err(Failure::Invalid(format!(
                "right-hand side has degree {} but --degree is {}",
                rhs.degree(),
                a.degree
            )));
        }
        rhs
    };
    let spec = Spectrum::compute(a.degree, kernel, method(&a.kernel))?;
    let u = solve_poisson(&PoissonProblem::new(rhs.clone(), spec.clone())?)?;
    let residual = relative_error(&apply_pinned(&u, &spec)?, &rhs);

    prepare_dir(&a.output_dir)?;
    write_coeffs(&a.output_dir, "rhs.csv", &rhs)?;
    write_coeffs(&a.output_dir, "solution.csv", &u)?;
    write_grid(&a.output_dir, "solution_grid.csv", &u)?;
    println!("relative residual {residual:.3e}");
    if residual.is_nan() || residual > POISSON_RESIDUAL_TOL {
        return Err(Failure::Numerical(format!(
            "residual {residual:.3e} exceeds {POISSON_RESIDUAL_TOL:e}"
        )));
    }
    Ok(())
}

enum InitialCondition {
    Cos10xy,
    Random { cap: usize, scale: f64 },
    Equilibrium,
}

fn parse_ic(s: &str) -> Result<InitialCondition, Failure> {
    match s {
        "cos10xy" => Ok(InitialCondition::Cos10xy),
        "equilibrium" => Ok(InitialCondition::Equilibrium),
        _ => {
            let parts: Vec<&str> = s.split(':').collect();
            match parts.as_slice() {
                ["random", cap, scale] => {
                    let cap = cap
                        .parse()
                        .map_err(|_| Failure::Invalid(format!("bad degree cap in '{s}'")))?;
                    let scale = parse_scale(scale).ok_or_else(|| Failure::Invalid(format!("bad scale in '{s}'")))?;
                    Ok(InitialCondition::Random { cap, scale })
                }
                _ => Err(Failure::Invalid(format!(
                    "unknown initial condition '{s}' (expected cos10xy, random:<cap>:<scale> or equilibrium)"
                ))),
            }
        }
    }
}

/// Accepts a float or a fraction such as `1/128`.
fn parse_scale(s: &str) -> Option<f64> {
    match s.split_once('/') {
        Some((a, b)) => Some(a.trim().parse::<f64>().ok()? / b.trim().parse::<f64>().ok()?),
        None => s.trim().parse().ok(),
    }
}

fn step_count(dt: f64, t_final: f64) -> Result<usize, Failure> {
    if !(dt > 0.0 && t_final > 0.0) {
        return Err(Failure::Invalid("--dt and --t-final must be positive".into()));
    }
    let steps = (t_final / dt).round();
    if steps < 1.0 || (steps * dt - t_final).abs() > 1e-9 * t_final {
        return Err(Failure::Invalid(format!(
            "--t-final {t_final} is not a whole number of --dt {dt} steps"
        )));
    }
    Ok(steps as usize)
}

fn evolve(a: &EvolveArgs) -> Outcome {
    let steps = step_count(a.dt, a.t_final)?;
    let method = method(&a.kernel);
    let ic = a.ic.as_deref().map(parse_ic).transpose()?;
    prepare_dir(&a.output_dir)?;
    match a.model {
        Model::AllenCahn => {
            let kernel = kernel(&a.kernel, -0.5, 1.0)?;
            let cfg = AllenCahnConfig::new(a.epsilon.unwrap_or(0.1), kernel, a.degree, a.dt, steps)?;
            let initial = match ic.unwrap_or(InitialCondition::Cos10xy) {
                InitialCondition::Cos10xy => cos10xy_initial(a.degree)?,
                InitialCondition::Random { cap, scale } => random_coeffs(cap, a.degree, scale, a.seed)?,
                InitialCondition::Equilibrium => {
                    return Err(Failure::Invalid("equilibrium initial condition is Brusselator-only".into()))
                }
            };
            let system = cfg.system(method)?;
            let grid = energy_grid(a.degree)?;
            let mut energy = create(&a.output_dir, "energy.csv")?;
            writeln!(energy, "t,energy")?;
            let finals = drive(a, &system, vec![initial], &["u"], steps, |t, state| {
                let e = ginzburg_landau_energy(&state[0], &system.spectrum, cfg.epsilon, &grid)?;
                writeln!(energy, "{:.16e},{:.16e}", t, e)?;
                Ok(())
            })?;
            energy.flush()?;
            finish(a, &finals, &["u"])
        }
        Model::Brusselator => {
            let kernel = kernel(&a.kernel, 0.0, 1.0)?;
            let cfg = BrusselatorConfig::new(a.e, a.epsilon.unwrap_or(0.075), a.tau, a.f, kernel, a.degree, a.dt, steps)?
                .with_linear_decay(a.linear_decay);
            let (ue, ve) = cfg.equilibrium();
            let initial = match ic.unwrap_or(InitialCondition::Equilibrium) {
                InitialCondition::Equilibrium => cfg.equilibrium_initial(),
                InitialCondition::Random { cap, scale } => {
                    // independent perturbations of each steady state
                    let du = random_coeffs(cap, a.degree, scale, a.seed)?;
                    let dv = random_coeffs(cap, a.degree, scale, a.seed.wrapping_add(1))?;
                    vec![add(&constant(a.degree, ue), &du), add(&constant(a.degree, ve), &dv)]
                }
                InitialCondition::Cos10xy => {
                    return Err(Failure::Invalid("cos10xy initial condition is Allen–Cahn-only".into()))
                }
            };
            let system = cfg.system(method)?;
            let finals = drive(a, &system, initial, &["u", "v"], steps, |_, _| Ok(()))?;
            finish(a, &finals, &["u", "v"])
        }
    }
}

fn add(a: &SphHarmCoeffs<f64>, b: &SphHarmCoeffs<f64>) -> SphHarmCoeffs<f64> {
    let mut out = a.clone();
    for (x, y) in out.as_mut_slice().iter_mut().zip(b.as_slice()) {
        *x += y;
    }
    out
}

/// Runs the system, writing snapshots at the requested stride and calling
/// `record` after every step (and at t = 0).
fn drive(
    a: &EvolveArgs,
    system: &ModelSystem<f64>,
    initial: Vec<SphHarmCoeffs<f64>>,
    names: &[&str],
    steps: usize,
    mut record: impl FnMut(f64, &[SphHarmCoeffs<f64>]) -> Result<(), Error>,
) -> Result<Vec<SphHarmCoeffs<f64>>, Failure> {
    let mut io_error: Option<Failure> = None;
    let result = system.evolve(initial, steps, 1, |step, t, state| {
        record(t, state)?;
        if a.snapshot_stride > 0 && step % a.snapshot_stride == 0 {
            for (u, name) in state.iter().zip(names) {
                let snap = if a.cesaro_kappa > 0 { cesaro_apply(u, a.cesaro_kappa) } else { u.clone() };
                if let Err(e) = write_coeffs(&a.output_dir, &format!("snapshot_{name}_{step:06}.csv"), &snap) {
                    io_error = Some(e);
                    return Err(Error::InvalidParameter("snapshot write failed".into()));
                }
            }
        }
        Ok(())
    });
    match (result, io_error) {
        (_, Some(e)) => Err(e),
        (Ok(state), None) => Ok(state),
        (Err(e), None) => Err(e.into()),
    }
}

fn finish(a: &EvolveArgs, finals: &[SphHarmCoeffs<f64>], names: &[&str]) -> Outcome {
    for (u, name) in finals.iter().zip(names) {
        write_coeffs(&a.output_dir, &format!("final_{name}.csv"), u)?;
        let shown = if a.cesaro_kappa > 0 { cesaro_apply(u, a.cesaro_kappa) } else { u.clone() };
        write_grid(&a.output_dir, &format!("final_{name}_grid.csv"), &shown)?;
    }
    Ok(())
}
