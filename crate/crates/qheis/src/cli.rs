//! Command-line driver: self-tests, demo pipelines and artifact dumps.

use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

use crate::config::{flag_value, RunConfig};
use crate::efourier::PsiOptions;
use crate::error::{Error, Result};
use crate::factory::{self, TestFunction};
use crate::field::Field;
use crate::gft;
use crate::grid::GridSpec;
use crate::radon::{inv_radon_lrl, inv_radon_thm7, lizorkin_gate, radon_fft};
use crate::report::{Mode, Record, Report};
use crate::suites::{run_selftest, Suite};
use crate::wavelet;

#[derive(Debug, Parser)]
#[command(name = "qheis", version, about = "Fourier, Radon and wavelet transforms on the quaternion Heisenberg group")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Flat JSON configuration file.
    #[arg(long, global = true, value_name = "PATH")]
    pub config: Option<PathBuf>,
    /// Nodes per x-axis and per t-axis.
    #[arg(long, global = true, value_name = "NX,NT", value_parser = parse_grid)]
    pub grid: Option<(usize, usize)>,
    /// Highest Fock degree kept in group Fourier checks and spectrum dumps
    #[arg(long, global = true, value_name = "L")]
    pub fock_degree: Option<usize>,
    /// Seed for randomised cases
    #[arg(long, global = true, value_name = "N")]
    pub seed: Option<u64>,
    /// Factor applied to every tolerance; 0 fails all inexact checks
    #[arg(long, global = true, value_name = "S")]
    pub tol_scale: Option<f64>,
    /// Run directory for reports and fields.
    #[arg(long, global = true, value_name = "PATH")]
    pub out: Option<PathBuf>,
    /// Any other configuration key; the value is read as JSON when it parses.
    #[arg(long = "set", global = true, value_name = "KEY=VALUE")]
    pub set: Vec<String>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run invariant suites; exits nonzero when a check fails.
    Selftest {
        #[arg(value_enum, default_value = "all")]
        suite: Suite,
    },
    /// Radon transform of a test function and every inversion route.
    RadonDemo,
    /// Wavelet coefficients, calibration and reconstruction of a test function.
    WaveletDemo,
    /// Write an artifact of the run directory in its exchange format.
    Dump {
        #[arg(value_enum)]
        what: DumpKind,
        /// Destination file.
        path: PathBuf,
        /// Source field inside the run directory.
        #[arg(long, default_value = "input.qhf")]
        field: String,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum DumpKind {
    Spectrum,
    Field,
    Coeffs,
}

fn parse_grid(s: &str) -> std::result::Result<(usize, usize), String> {
    let (a, b) = s.split_once(',').ok_or("expected NX,NT")?;
    let p = |v: &str| v.trim().parse::<usize>().map_err(|e| e.to_string());
    Ok((p(a)?, p(b)?))
}

impl Cli {
    /// Configuration from defaults, the file, `--set` pairs and then the
    /// named flags.
    pub fn config(&self) -> Result<RunConfig> {
        let mut kv: Vec<(String, Value)> = Vec::new();
        for s in &self.set {
            let (k, v) =
                s.split_once('=').ok_or_else(|| Error::Config(format!("--set expects KEY=VALUE, got `{s}`")))?;
            kv.push((k.trim().to_string(), flag_value(v.trim())));
        }
        if let Some((nx, nt)) = self.grid {
            kv.push(("n_x".into(), nx.into()));
            kv.push(("n_t".into(), nt.into()));
        }
        if let Some(l) = self.fock_degree {
            kv.push(("fock_degree".into(), l.into()));
        }
        if let Some(s) = self.seed {
            kv.push(("seed".into(), s.into()));
        }
        if let Some(t) = self.tol_scale {
            kv.push(("tol_scale".into(), t.into()));
        }
        if let Some(o) = &self.out {
            kv.push(("out".into(), o.display().to_string().into()));
        }
        RunConfig::load(self.config.as_deref(), &kv)
    }
}

/// Executes the parsed command and returns the process exit code.
pub fn run(cli: &Cli) -> Result<i32> {
    let cfg = cli.config()?;
    let report = match &cli.command {
        Command::Selftest { suite } => {
            let r = run_selftest(&cfg, *suite)?;
            r.save(&cfg.out, &format!("selftest-{}", suite.name()))?;
            r
        }
        Command::RadonDemo => radon_demo(&cfg)?,
        Command::WaveletDemo => wavelet_demo(&cfg)?,
        Command::Dump { what, path, field } => {
            dump(&cfg, *what, field, path)?;
            println!("wrote {}", path.display());
            return Ok(0);
        }
    };
    print!("{}", report.summary());
    println!("{} checks, {}", report.records.len(), if report.pass { "all passed" } else { "FAILURES" });
    Ok(if report.pass { 0 } else { 1 })
}

fn demo_input(cfg: &RunConfig, g: &GridSpec) -> Result<TestFunction> {
    if cfg.lizorkin {
        Ok(factory::default_lizorkin(g))
    } else {
        factory::gaussian(1.0, 0.5)
    }
}

fn save_field(rep: &mut Report, dir: &Path, name: &str, f: &Field) -> Result<()> {
    let p = dir.join(name);
    f.save(&p)?;
    rep.artifacts.push(p.display().to_string());
    Ok(())
}

/// Builds the test function, runs every inversion route and returns
/// (route, error) pairs. Fields are saved when `save` is set.
fn radon_routes(cfg: &RunConfig, g: GridSpec, rep: &mut Report, save: Option<&Path>) -> Result<Vec<(String, f64)>> {
    let f = demo_input(cfg, &g)?.sample(g)?;
    let gate = lizorkin_gate(&f, 1e-6)?;
    if gate.flagged {
        rep.warnings.push(format!(
            "input carries {:.3e} of its central energy at a = 0; inversion needs a Lizorkin function",
            gate.zero_fraction
        ));
    }
    let opts = PsiOptions::accurate();
    let rf = radon_fft(&f, opts)?;
    if rf.ood > 0 {
        rep.warnings.push(format!("{} mixing lookups fell outside the frequency box", rf.ood));
    }
    let mut routes = vec![("thm7".to_string(), inv_radon_thm7(&rf.field, opts)?)];
    for (mu, nu) in [(1.0, 1.0), (2.0, 0.0), (0.0, 2.0)] {
        routes.push((format!("lrl_{mu}_{nu}"), inv_radon_lrl(&rf.field, mu, nu, opts)?));
    }
    if let Some(dir) = save {
        save_field(rep, dir, "input.qhf", &f)?;
        save_field(rep, dir, "radon.qhf", &rf.field)?;
        for (name, inv) in &routes {
            save_field(rep, dir, &format!("inv_{name}.qhf"), inv)?;
        }
    }
    routes.into_iter().map(|(n, inv)| Ok((n, inv.rel_l2_error(&f)?))).collect()
}

pub fn radon_demo(cfg: &RunConfig) -> Result<Report> {
    cfg.validate()?;
    let mut rep = Report::new("radon-demo", cfg);
    std::fs::create_dir_all(&cfg.out)?;
    let tol = 0.1 * cfg.tol("radon");
    let g = cfg.grid()?;
    let base = radon_routes(cfg, g, &mut rep, Some(&cfg.out))?;
    for (name, e) in &base {
        rep.push(Record::bound(0, &format!("round trip {name}"), "R⁻¹R = id", *e, tol));
    }
    if cfg.refine {
        let fine = GridSpec { n_x: g.n_x * 4 / 3, ..g };
        let refined = radon_routes(cfg, fine, &mut rep, None)?;
        let mut worse = 0;
        for ((name, e0), (_, e1)) in base.iter().zip(&refined) {
            rep.push(Record::bound(0, &format!("round trip {name}, refined grid"), "R⁻¹R = id", *e1, tol));
            worse += usize::from(e1 >= e0);
        }
        rep.push(Record::bound(
            0,
            "routes not improved by refinement",
            "error decreases with spacing",
            worse as f64,
            0.0,
        ));
    }
    rep.finish();
    rep.save(&cfg.out, "radon-demo")?;
    Ok(rep)
}

pub fn wavelet_demo(cfg: &RunConfig) -> Result<Report> {
    cfg.validate()?;
    let mut rep = Report::new("wavelet-demo", cfg);
    std::fs::create_dir_all(&cfg.out)?;
    let s = cfg.tol("wavelet");
    let profile = cfg.profile()?;
    let (c_quad, m4_quad) = profile.quadrature_constants()?;
    let c_want = if cfg.is_default_profile() { std::f64::consts::PI } else { profile.c_eta() };
    rep.push(Record::new(0, "C_eta", "admissibility constant", Mode::Rel, c_quad, c_want, 1e-6 * s));
    let phi = wavelet::build_phi_eta(profile, cfg.wavelet_degree)?;
    rep.push(Record::new(
        0,
        "wavelet norm",
        "‖φ_η‖² = m4/45",
        Mode::Rel,
        phi.norm_sq_quadrature(),
        m4_quad / 45.0,
        2e-2 * s,
    ));

    let g = cfg.grid()?;
    let f = demo_input(cfg, &g)?.sample(g)?;
    let adm = wavelet::admissibility(&f, cfg.wavelet_degree)?;
    if adm.diverging {
        rep.warnings.push(format!(
            "input carries {:.3e} of its central energy at a = 0; the wavelet integrals diverge",
            adm.zero_slice_fraction
        ));
    }
    let rho = cfg.rho_grid()?;
    let kappa = wavelet::calibrate_kappa(&phi, &f, &rho)?;
    rep.push(Record::new(0, "kappa", "κ = 1/(4π)", Mode::Rel, kappa, 0.25 / std::f64::consts::PI, 5e-2 * s));
    let coeffs = wavelet::coefficients(&f, &phi, &rho)?;
    rep.push(Record::new(
        0,
        "energy ratio",
        "‖Wf‖² = κC_η‖f‖²",
        Mode::Rel,
        coeffs.energy() / f.l2norm()?.powi(2),
        kappa * phi.c_eta(),
        3e-2 * s,
    ));
    let rec = wavelet::reconstruct(&coeffs, &phi, kappa)?;
    rep.push(Record::bound(0, "reconstruction", "f = (κC_η)⁻¹ ∫ W U φ", rec.rel_l2_error(&f)?, 0.1 * s));

    save_field(&mut rep, &cfg.out, "input.qhf", &f)?;
    save_field(&mut rep, &cfg.out, "reconstruction.qhf", &rec)?;
    let p = cfg.out.join("coeffs.json");
    std::fs::write(&p, serde_json::to_string(&coeffs.records(&sample_nodes(cfg, &g))?)?)?;
    rep.artifacts.push(p.display().to_string());
    rep.finish();
    rep.save(&cfg.out, "wavelet-demo")?;
    Ok(rep)
}

/// 16 seeded grid nodes with |x| ≤ 1.5.
fn sample_nodes(cfg: &RunConfig, g: &GridSpec) -> Vec<usize> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut out = Vec::with_capacity(16);
    while out.len() < 16 {
        let k = rng.gen_range(0..g.len());
        if g.point(k).x.norm() <= 1.5 {
            out.push(k);
        }
    }
    out
}

/// Writes `what` for the field `name` of the run directory to `dest`.
pub fn dump(cfg: &RunConfig, what: DumpKind, name: &str, dest: &Path) -> Result<()> {
    let src = cfg.out.join(name);
    if !src.exists() {
        return Err(Error::Io(std::io::Error::new(
            std::io::ErrorKind::NotFound,
            format!("{} not found; run a demo first", src.display()),
        )));
    }
    let f = Field::load(&src)?;
    match what {
        DumpKind::Field => f.save(dest),
        DumpKind::Spectrum => {
            let spec = gft::gft(&f, &cfg.a_nodes(), cfg.fock_degree)?;
            Ok(std::fs::write(dest, spec.to_json(Some(name))?)?)
        }
        DumpKind::Coeffs => {
            let phi = wavelet::build_phi_eta(cfg.profile()?, cfg.wavelet_degree)?;
            let c = wavelet::coefficients(&f, &phi, &cfg.rho_grid()?)?;
            Ok(std::fs::write(dest, serde_json::to_string(&c.records(&sample_nodes(cfg, f.grid()))?)?)?)
        }
    }
}
