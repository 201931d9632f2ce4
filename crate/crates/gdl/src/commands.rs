//! Command dispatch. Every command reads a [`ProblemDocument`] and returns JSON outputs.
//!
//! Signals missing from `task_params` are drawn with the random window generator, seeded
//! from `--seed` plus a fixed per-parameter offset.

use std::path::PathBuf;
use std::time::Instant;

use gdl_core::duality_suite::{bessel_duality_check, duality_certificate, figa, wexler_raz_check};
use gdl_core::frame_construction::{gram_schmidt, orthonormality_residual, refine_until_frame, window_generator, StopRule, WindowKind};
use gdl_core::gabor_engine::{
    canonical_dual, canonical_tight, density_check, frame_bounds, riesz_bounds, BoundsReport, GaborSystem, WindowFamily,
};
use gdl_core::group_core::weil_verify;
use gdl_core::module_algebra::{block_associativity_residual, module_norm, module_norm_adjoint};
use gdl_core::phase_space::PhaseSpace;
use gdl_core::{Complex64, Signal};
use serde_json::{json, Value};

use crate::document::{from_pairs, subgroup_doc, ProblemDocument, ResultDocument, WindowsDoc};
use crate::error::CliError;
use crate::spectrogram::Spectrogram;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Command {
    Adjoint,
    Covolume,
    Bounds,
    RieszBounds,
    Dual,
    Tight,
    CheckFiga,
    CheckWexlerRaz,
    CheckDuality,
    CheckAssociativity,
    CheckWeil,
    Construct,
    ModuleNorm,
    Spectrogram,
}

impl Command {
    pub const ALL: [Command; 14] = [
        Command::Adjoint,
        Command::Covolume,
        Command::Bounds,
        Command::RieszBounds,
        Command::Dual,
        Command::Tight,
        Command::CheckFiga,
        Command::CheckWexlerRaz,
        Command::CheckDuality,
        Command::CheckAssociativity,
        Command::CheckWeil,
        Command::Construct,
        Command::ModuleNorm,
        Command::Spectrogram,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Command::Adjoint => "adjoint",
            Command::Covolume => "covolume",
            Command::Bounds => "bounds",
            Command::RieszBounds => "riesz-bounds",
            Command::Dual => "dual",
            Command::Tight => "tight",
            Command::CheckFiga => "check-figa",
            Command::CheckWexlerRaz => "check-wexler-raz",
            Command::CheckDuality => "check-duality",
            Command::CheckAssociativity => "check-associativity",
            Command::CheckWeil => "check-weil",
            Command::Construct => "construct",
            Command::ModuleNorm => "module-norm",
            Command::Spectrogram => "spectrogram",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Options {
    pub seed: u64,
    pub tolerance: f64,
    /// Spectrogram image path; overrides `task_params.path`.
    pub image: Option<PathBuf>,
}

impl Default for Options {
    fn default() -> Self {
        Options { seed: 0, tolerance: gdl_core::DEFAULT_TOLERANCE, image: None }
    }
}

pub fn run(command: Command, doc: &ProblemDocument, opts: &Options) -> Result<ResultDocument, CliError> {
    if let Some(task) = &doc.task {
        if task != command.name() {
            return Err(CliError::Invalid(format!("document task {task:?} does not match command {:?}", command.name())));
        }
    }
    if !(opts.tolerance.is_finite() && opts.tolerance > 0.0) {
        return Err(CliError::Invalid(format!("tolerance must be positive, got {}", opts.tolerance)));
    }
    let start = Instant::now();
    let ctx = Context { doc, opts, space: doc.space()? };
    let outputs = match command {
        Command::Adjoint => ctx.adjoint()?,
        Command::Covolume => ctx.covolume()?,
        Command::Bounds => ctx.bounds()?,
        Command::RieszBounds => ctx.riesz_bounds()?,
        Command::Dual => ctx.dual(false)?,
        Command::Tight => ctx.dual(true)?,
        Command::CheckFiga => ctx.check_figa()?,
        Command::CheckWexlerRaz => ctx.check_wexler_raz()?,
        Command::CheckDuality => ctx.check_duality()?,
        Command::CheckAssociativity => ctx.check_associativity()?,
        Command::CheckWeil => ctx.check_weil()?,
        Command::Construct => ctx.construct()?,
        Command::ModuleNorm => ctx.module_norm()?,
        Command::Spectrogram => ctx.spectrogram()?,
    };
    Ok(ResultDocument {
        task: command.name().to_string(),
        outputs,
        tool_version: env!("CARGO_PKG_VERSION").to_string(),
        seed: opts.seed,
        wall_time_ms: start.elapsed().as_secs_f64() * 1e3,
    })
}

fn bounds_json(b: &BoundsReport, tol: f64) -> Value {
    json!({
        "lower": b.lower,
        "upper": b.upper,
        "spectrum": b.spectrum,
        "holds": b.holds(tol),
        "tight": b.is_tight(tol),
    })
}

fn ratio_json(r: num_rational::Ratio<u64>) -> Value {
    json!({ "numer": r.numer(), "denom": r.denom() })
}

struct Context<'a> {
    doc: &'a ProblemDocument,
    opts: &'a Options,
    space: PhaseSpace,
}

impl Context<'_> {
    fn system(&self) -> Result<GaborSystem, CliError> {
        let lattice = self.doc.lattice(&self.space)?;
        let windows = self.doc.windows(&self.space)?;
        Ok(GaborSystem::with_space(self.space.clone(), windows, lattice)?)
    }

    fn param(&self, key: &str) -> Option<&Value> {
        self.doc.task_params.get(key)
    }

    fn param_f64(&self, key: &str) -> Result<Option<f64>, CliError> {
        match self.param(key) {
            None => Ok(None),
            Some(v) => v
                .as_f64()
                .filter(|x| x.is_finite())
                .map(Some)
                .ok_or_else(|| CliError::Invalid(format!("task_params.{key} must be a finite number"))),
        }
    }

    /// A signal of `blocks · |G|` samples from `task_params[key]`, or a random one.
    fn param_signal(&self, key: &str, blocks: usize, salt: u64) -> Result<Signal, CliError> {
        let len = blocks * self.space.n();
        match self.param(key) {
            Some(v) => {
                let pairs: Vec<[f64; 2]> = serde_json::from_value(v.clone())
                    .map_err(|e| CliError::Invalid(format!("task_params.{key}: {e}")))?;
                if pairs.len() != len {
                    return Err(CliError::Invalid(format!("task_params.{key} has {} samples, expected {len}", pairs.len())));
                }
                from_pairs(&pairs, key)
            }
            None => {
                let mut out = Vec::with_capacity(len);
                for b in 0..blocks as u64 {
                    let seed = self.opts.seed.wrapping_add(salt.wrapping_mul(1000)).wrapping_add(b);
                    out.extend(window_generator(WindowKind::Random { seed }, self.space.group())?);
                }
                Ok(out)
            }
        }
    }

    /// A family of the given shape from `task_params[key]`, or a random one.
    fn param_family(&self, key: &str, d: usize, n: usize, salt: u64) -> Result<WindowFamily, CliError> {
        match self.param(key) {
            Some(v) => {
                let doc: WindowsDoc = serde_json::from_value(v.clone())
                    .map_err(|e| CliError::Invalid(format!("task_params.{key}: {e}")))?;
                let family = doc.to_family(self.space.group())?;
                if family.d() != d || family.n() != n {
                    return Err(CliError::Invalid(format!("task_params.{key} must have shape ({d}, {n})")));
                }
                Ok(family)
            }
            None => {
                let data = self.param_signal(&format!("{key}.random"), d * n, salt)?;
                Ok(WindowFamily::new(self.space.group().clone(), d, n, data)?)
            }
        }
    }

    fn adjoint(&self) -> Result<Value, CliError> {
        let lattice = self.doc.lattice(&self.space)?;
        let adjoint = self.space.adjoint_subgroup(&lattice);
        let mut out = subgroup_doc(&self.space, &adjoint);
        let extra = json!({
            "lattice_size": lattice.len(),
            "covolume": self.space.covolume(&lattice),
            "counting_covolume": ratio_json(self.space.counting_covolume(&lattice)),
            "adjoint_counting_covolume": ratio_json(self.space.counting_covolume(&adjoint)),
        });
        merge(&mut out, extra);
        Ok(out)
    }

    fn covolume(&self) -> Result<Value, CliError> {
        let lattice = self.doc.lattice(&self.space)?;
        Ok(json!({
            "covolume": self.space.covolume(&lattice),
            "counting_covolume": ratio_json(self.space.counting_covolume(&lattice)),
            "size": lattice.len(),
            "weight": lattice.weight(),
            "group_order": self.space.n(),
        }))
    }

    fn bounds(&self) -> Result<Value, CliError> {
        let sys = self.system()?;
        let tol = self.opts.tolerance;
        let mut out = bounds_json(&frame_bounds(&sys), tol);
        let density = density_check(&sys, tol);
        let conditions: Vec<Value> = density
            .conditions
            .iter()
            .map(|c| json!({ "name": c.name, "holds": c.holds, "detail": c.detail }))
            .collect();
        merge(
            &mut out,
            json!({
                "covolume": sys.covolume(),
                "density": { "verdict": density.verdict.as_str(), "conditions": conditions },
            }),
        );
        Ok(out)
    }

    fn riesz_bounds(&self) -> Result<Value, CliError> {
        let sys = self.system()?;
        let reference = match self.param_f64("reference_covolume")? {
            Some(s) => s,
            None => 1.0 / sys.lattice().weight(),
        };
        let report = riesz_bounds(&sys, reference)?;
        let mut out = bounds_json(&report, self.opts.tolerance);
        merge(&mut out, json!({ "reference_covolume": reference }));
        Ok(out)
    }

    fn dual(&self, tight: bool) -> Result<Value, CliError> {
        let sys = self.system()?;
        let tol = self.opts.tolerance;
        let windows = if tight { canonical_tight(&sys, tol)? } else { canonical_dual(&sys, tol)? };
        let check = GaborSystem::with_space(self.space.clone(), windows.clone(), sys.lattice().clone())?;
        Ok(json!({
            "windows": WindowsDoc::from_family(&windows),
            "frame_bounds": bounds_json(&frame_bounds(&sys), tol),
            "output_bounds": bounds_json(&frame_bounds(&check), tol),
        }))
    }

    fn check_figa(&self) -> Result<Value, CliError> {
        let sys = self.system()?;
        let g = sys.windows();
        let h = self.param_family("dual_windows", g.d(), g.n(), 3)?;
        let f1 = self.param_signal("f1", g.d(), 1)?;
        let f2 = self.param_signal("f2", g.d(), 2)?;
        let report = figa(&self.space, &f1, &f2, g, &h, sys.lattice())?;
        Ok(json!({
            "lhs": [report.lhs.re, report.lhs.im],
            "rhs": [report.rhs.re, report.rhs.im],
            "residual": report.residual,
            "pass": report.residual < 1e-10 * report.lhs.norm().max(1.0),
        }))
    }

    fn check_wexler_raz(&self) -> Result<Value, CliError> {
        let sys = self.system()?;
        let h = match self.param("dual_windows") {
            Some(_) => self.param_family("dual_windows", sys.windows().d(), sys.windows().n(), 3)?,
            None => canonical_dual(&sys, self.opts.tolerance)?,
        };
        let report = wexler_raz_check(&self.space, sys.windows(), &h, sys.lattice())?;
        Ok(json!({
            "residual": report.residual,
            "is_dual_pair": report.is_dual_pair,
            "operator_residual": report.operator_residual,
            "covolume": report.covolume,
        }))
    }

    fn check_duality(&self) -> Result<Value, CliError> {
        let sys = self.system()?;
        let cert = duality_certificate(&sys, self.opts.tolerance)?;
        Ok(json!({
            "frame_bounds": [cert.frame_bounds.0, cert.frame_bounds.1],
            "riesz_bounds": [cert.riesz_bounds.0, cert.riesz_bounds.1],
            "covolume": cert.covolume,
            "max_deviation": cert.max_deviation,
            "frame_holds": cert.frame_holds,
            "riesz_holds": cert.riesz_holds,
            "verdict": if cert.pass { "pass" } else { "fail" },
        }))
    }

    fn check_associativity(&self) -> Result<Value, CliError> {
        let sys = self.system()?;
        let g = sys.windows();
        let f = self.param_family("f", g.d(), g.n(), 4)?;
        let h = self.param_family("h", g.d(), g.n(), 5)?;
        let residual = block_associativity_residual(&self.space, &f, g, &h, sys.lattice())?;
        Ok(json!({ "residual": residual, "pass": residual < 1e-10 }))
    }

    fn check_weil(&self) -> Result<Value, CliError> {
        let lattice = self.doc.lattice(&self.space)?;
        let f = self.param_signal("function", self.space.n(), 6)?;
        let residual = weil_verify(self.space.mass(), &lattice, &f)?;
        Ok(json!({ "residual": residual, "pass": residual < 1e-10 }))
    }

    fn construct(&self) -> Result<Value, CliError> {
        let lattice = self.doc.lattice(&self.space)?;
        let seed = self.doc.windows(&self.space)?;
        if seed.n() != 1 {
            return Err(CliError::Invalid("construct needs a single d-super seed window (n = 1)".into()));
        }
        let rule = match self.param("mode").map(|v| v.as_str()) {
            None | Some(Some("criterion")) => StopRule::Criterion,
            Some(Some("spectral")) => StopRule::Spectral,
            Some(_) => return Err(CliError::Invalid("task_params.mode must be \"criterion\" or \"spectral\"".into())),
        };
        let orthonormalize = match self.param("orthonormalize") {
            None => true,
            Some(v) => v.as_bool().ok_or_else(|| CliError::Invalid("task_params.orthonormalize must be a boolean".into()))?,
        };
        let parts: Vec<Signal> = (0..seed.d()).map(|k| seed.window(k, 0).to_vec()).collect();
        let parts = if orthonormalize { gram_schmidt(&parts, 1e-10)? } else { parts };
        let seed_family = WindowFamily::super_window(self.space.group().clone(), &parts)?;
        let out = refine_until_frame(&self.space, &seed_family, &lattice, rule, self.opts.tolerance)?;
        let cert = &out.certificate;
        Ok(json!({
            "windows": WindowsDoc::from_family(&out.windows),
            "n": out.windows.n(),
            "refined": subgroup_doc(&self.space, &out.refined),
            "chain_sizes": out.chain.iter().map(|s| s.len()).collect::<Vec<_>>(),
            "seed_orthonormality_residual": orthonormality_residual(&parts),
            "certificate": {
                "bounds": bounds_json(&cert.bounds, self.opts.tolerance),
                "criterion_value": cert.criterion_value,
                "criterion_met": cert.criterion_met,
                "estimate": cert.estimate,
                "neumann_residual": cert.neumann_residual,
            },
        }))
    }

    fn module_norm(&self) -> Result<Value, CliError> {
        let sys = self.system()?;
        let g = sys.windows();
        let lattice_norm = module_norm(&self.space, g, sys.lattice())?;
        let adjoint_norm = module_norm_adjoint(&self.space, g, sys.lattice())?;
        let bessel = bessel_duality_check(&self.space, g, sys.lattice())?;
        let gap = (lattice_norm - adjoint_norm).abs();
        Ok(json!({
            "lattice_norm": lattice_norm,
            "adjoint_norm": adjoint_norm,
            "norm_gap": gap,
            "norms_agree": gap < 1e-9 * lattice_norm.max(1.0),
            "bessel_frame_side": bessel.frame_side,
            "bessel_adjoint_side": bessel.adjoint_side,
            "bessel_residual": bessel.residual,
        }))
    }

    fn spectrogram(&self) -> Result<Value, CliError> {
        let windows = self.doc.windows(&self.space)?;
        let g: Vec<Complex64> = windows.window(0, 0).to_vec();
        let f = self.param_signal("signal", 1, 7)?;
        let path = match (&self.opts.image, self.param("path")) {
            (Some(p), _) => p.clone(),
            (None, Some(Value::String(p))) => PathBuf::from(p),
            _ => return Err(CliError::Invalid("spectrogram needs --image or task_params.path".into())),
        };
        let s = Spectrogram::new(&self.space, &g, &f)?;
        let csv = s.write(&path)?;
        Ok(json!({
            "width": s.size,
            "height": s.size,
            "max": s.max(),
            "pgm": path.display().to_string(),
            "csv": csv.display().to_string(),
        }))
    }
}

fn merge(target: &mut Value, extra: Value) {
    if let (Value::Object(t), Value::Object(e)) = (target, extra) {
        t.extend(e);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use clap::ValueEnum;

    #[test]
    fn names_match_the_command_line() {
        for c in Command::ALL {
            assert_eq!(c.to_possible_value().unwrap().get_name(), c.name());
        }
        assert_eq!(Command::value_variants().len(), Command::ALL.len());
    }

    #[test]
    fn rejects_a_mismatched_task() {
        let doc = crate::parse_problem(r#"{"group":{"orders":[2]},"task":"dual"}"#).unwrap();
        let err = run(Command::Covolume, &doc, &Options::default()).unwrap_err();
        assert_eq!(err.exit_code(), 2);
    }
}
