//! Constructive existence of multi-window super Gabor frames.
//!
//! The refinement walks a chain `Λ = Λ_1 ⊂ Λ_2 ⊂ ... ⊂ G x Ĝ`. Each step adjoins the phase
//! point that gives the smallest index increase, ties going to the lexicographically
//! smallest point. The chain stops at the first `Λ_N` whose adjoint satisfies
//! `Σ_{λ° ∈ Λ_N°, λ° ≠ 0} |⟨g_k, π(λ°) g_{k'}⟩| < 1/d` for all `k, k'`; the full plane always
//! does. The frame over `Λ` then uses the windows `π(χ_j) √s(Λ_N) g_k`, with `χ_j` running
//! over `Λ_N / Λ`.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;

use crate::error::{invalid, Error, Result};
use crate::gabor_engine::{frame_bounds, frame_operator, BoundsReport, GaborSystem, WindowFamily};
use crate::group_core::{coset_transversal, GroupSpec, Subgroup};
use crate::linalg::op_norm;
use crate::phase_space::{inner, norm_sqr, PhaseSpace};
use crate::{Operator, Signal};

/// Modified Gram-Schmidt in input order.
pub fn gram_schmidt(windows: &[Signal], rel_tol: f64) -> Result<Vec<Signal>> {
    let mut out: Vec<Signal> = Vec::with_capacity(windows.len());
    for (index, w) in windows.iter().enumerate() {
        if let Some(first) = windows.first() {
            if first.len() != w.len() {
                return Err(Error::ShapeMismatch(format!("vector {index} has length {}", w.len())));
            }
        }
        let original = libm::sqrt(norm_sqr(w));
        let mut v = w.clone();
        for q in &out {
            let c = inner(&v, q);
            v.iter_mut().zip(q).for_each(|(a, b)| *a -= c * b);
        }
        let norm = libm::sqrt(norm_sqr(&v));
        if original == 0.0 || norm <= rel_tol * original {
            return Err(Error::LinearDependence { index });
        }
        v.iter_mut().for_each(|a| *a /= norm);
        out.push(v);
    }
    Ok(out)
}

/// Largest deviation of the Gram matrix of `windows` from the identity.
pub fn orthonormality_residual(windows: &[Signal]) -> f64 {
    let mut worst: f64 = 0.0;
    for (i, a) in windows.iter().enumerate() {
        for (j, b) in windows.iter().enumerate() {
            let target = if i == j { 1.0 } else { 0.0 };
            worst = worst.max((inner(a, b) - target).norm());
        }
    }
    worst
}

#[derive(Debug, Clone)]
pub struct FullPlaneFrame {
    /// `d` super components `δ_0, ..., δ_{d-1}`, one window.
    pub windows: WindowFamily,
    /// The full phase space with weight `1/|G|`.
    pub lattice: Subgroup,
    pub bounds: BoundsReport,
}

/// A tight `d`-super frame for `L²(G x Z_d)` over the full phase space.
pub fn full_plane_tight(group: &GroupSpec, d: usize) -> Result<FullPlaneFrame> {
    let n = group.order();
    if d == 0 || d > n {
        return Err(Error::Dimension(format!("need 1 <= d <= |G| = {n}, got d = {d}")));
    }
    let deltas: Vec<Signal> = (0..d)
        .map(|k| (0..n).map(|t| Complex64::new(if t == k { 1.0 } else { 0.0 }, 0.0)).collect())
        .collect();
    let parts = gram_schmidt(&deltas, 1e-12)?;
    let windows = WindowFamily::super_window(group.clone(), &parts)?;
    let space = PhaseSpace::new(group.clone());
    let lattice = space.full(1.0 / n as f64)?;
    let bounds = frame_bounds(&GaborSystem::with_space(space, windows.clone(), lattice.clone())?);
    Ok(FullPlaneFrame { windows, lattice, bounds })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum StopRule {
    /// Stop once the adjoint sums drop below `1/d`.
    #[default]
    Criterion,
    /// Stop once the assembled system is a frame.
    Spectral,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RefinementCertificate {
    pub bounds: BoundsReport,
    /// `max_{k,k'} Σ_{λ° ≠ 0} |⟨g_k, π(λ°) g_{k'}⟩|` over `Λ_N°`.
    pub criterion_value: f64,
    pub criterion_met: bool,
    /// Schur-test bound `sqrt(max row sum · max column sum)` of those sums; `< 1` whenever the
    /// criterion holds.
    pub estimate: f64,
    /// `‖Id − S‖` of the assembled system.
    pub neumann_residual: f64,
}

#[derive(Debug, Clone)]
pub struct Refinement {
    /// Shape `(d, n)` with `n = [Λ_N : Λ]`.
    pub windows: WindowFamily,
    pub refined: Subgroup,
    pub chain: Vec<Subgroup>,
    pub transversal: Vec<usize>,
    pub certificate: RefinementCertificate,
}

/// Order of `p` modulo the subgroup.
fn relative_order(space: &PhaseSpace, sub: &Subgroup, p: usize) -> usize {
    let mut acc = p;
    let mut m = 1;
    while !sub.contains_index(acc) {
        acc = space.add(acc, p);
        m += 1;
    }
    m
}

/// The next subgroup of the chain, or `None` at the full plane.
pub fn next_refinement(space: &PhaseSpace, current: &Subgroup) -> Option<Subgroup> {
    let mut best: Option<(usize, usize)> = None;
    for p in 0..space.points() {
        if current.contains_index(p) {
            continue;
        }
        let m = relative_order(space, current, p);
        if best.is_none_or(|(bm, _)| m < bm) {
            best = Some((m, p));
        }
    }
    best.map(|(_, p)| current.extended_by(p))
}

/// `[Σ_{λ° ≠ 0} |⟨g_k, π(λ°) g_{k'}⟩|]_{k,k'}` over the adjoint of `sub`.
fn adjoint_sums(space: &PhaseSpace, seed: &[Signal], sub: &Subgroup) -> Vec<Vec<f64>> {
    let adjoint = space.adjoint_subgroup(sub);
    let d = seed.len();
    let mut sums = vec![vec![0.0; d]; d];
    for &q in adjoint.indices().iter().filter(|&&q| q != 0) {
        let shifted: Vec<Signal> = seed.iter().map(|g| space.tf_shift(q, g)).collect();
        for (k, row) in sums.iter_mut().enumerate() {
            for (kp, cell) in row.iter_mut().enumerate() {
                *cell += inner(&seed[k], &shifted[kp]).norm();
            }
        }
    }
    sums
}

fn assemble(space: &PhaseSpace, seed: &[Signal], lattice: &Subgroup, refined: &Subgroup) -> Result<(WindowFamily, Vec<usize>)> {
    let phase = space.phase();
    let reps: Vec<usize> = coset_transversal(&refined.elements(), lattice)?.iter().map(|e| phase.index_of(e)).collect();
    let scale = libm::sqrt(space.covolume(refined));
    let d = seed.len();
    let windows = WindowFamily::from_fn(space.group().clone(), d, reps.len(), |k, j, t| {
        space.tf_shift(reps[j], &seed[k])[t] * scale
    })?;
    Ok((windows, reps))
}

/// Builds an `n`-multi-window `d`-super frame over `lattice` from an orthonormal seed.
pub fn refine_until_frame(space: &PhaseSpace, seed: &WindowFamily, lattice: &Subgroup, rule: StopRule, tol: f64) -> Result<Refinement> {
    if seed.n() != 1 || seed.group() != space.group() {
        return Err(invalid("seed must be a single d-super window on the same group"));
    }
    space.check_lattice(lattice)?;
    let parts: Vec<Signal> = (0..seed.d()).map(|k| seed.window(k, 0).to_vec()).collect();
    let residual = orthonormality_residual(&parts);
    if residual > 1e-10 {
        return Err(invalid(format!("seed components are not orthonormal (Gram deviation {residual:e})")));
    }
    let d = parts.len();
    let threshold = 1.0 / d as f64;

    let mut chain = vec![lattice.clone()];
    loop {
        let current = chain.last().expect("chain is never empty");
        let sums = adjoint_sums(space, &parts, current);
        let criterion_value = sums.iter().flatten().fold(0.0, |m: f64, &v| m.max(v));
        let criterion_met = criterion_value < threshold;
        let last = current.len() == space.points();
        let (windows, transversal) = assemble(space, &parts, lattice, current)?;
        let done = match rule {
            StopRule::Criterion => criterion_met || last,
            StopRule::Spectral => last || {
                let sys = GaborSystem::with_space(space.clone(), windows.clone(), lattice.clone())?;
                frame_bounds(&sys).holds(tol)
            },
        };
        if done {
            let sys = GaborSystem::with_space(space.clone(), windows.clone(), lattice.clone())?;
            let bounds = frame_bounds(&sys);
            let s = frame_operator(&sys, None)?;
            let neumann_residual = op_norm(&(Operator::identity(s.nrows(), s.ncols()) - s));
            let row = sums.iter().map(|r| r.iter().sum::<f64>()).fold(0.0, f64::max);
            let col = (0..d).map(|kp| sums.iter().map(|r| r[kp]).sum::<f64>()).fold(0.0, f64::max);
            let certificate = RefinementCertificate {
                bounds,
                criterion_value,
                criterion_met,
                estimate: libm::sqrt(row * col),
                neumann_residual,
            };
            let refined = current.clone();
            return Ok(Refinement { windows, refined, chain, transversal, certificate });
        }
        let next = next_refinement(space, current).expect("a proper subgroup has a refinement");
        chain.push(next);
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum WindowKind {
    Delta,
    Constant,
    DiscreteGaussian { sigma: f64 },
    Random { seed: u64 },
}

/// `Σ_m exp(−π (t + m N)² / σ²)` for `t = 0..N`.
fn periodized_gaussian(order: usize, sigma: f64) -> Vec<f64> {
    let n = order as f64;
    (0..order)
        .map(|t| {
            let term = |m: f64| {
                let x = t as f64 + m * n;
                libm::exp(-core::f64::consts::PI * x * x / (sigma * sigma))
            };
            let mut total = term(0.0);
            let mut m = 1.0;
            loop {
                let add = term(m) + term(-m);
                total += add;
                if add < 1e-15 * total {
                    break;
                }
                m += 1.0;
            }
            total
        })
        .collect()
}

fn normalized(mut v: Signal) -> Signal {
    let norm = libm::sqrt(norm_sqr(&v));
    if norm > 0.0 {
        v.iter_mut().for_each(|a| *a /= norm);
    }
    v
}

/// A unit-norm signal on `group`.
pub fn window_generator(kind: WindowKind, group: &GroupSpec) -> Result<Signal> {
    let n = group.order();
    let v: Signal = match kind {
        WindowKind::Delta => (0..n).map(|t| Complex64::new(if t == 0 { 1.0 } else { 0.0 }, 0.0)).collect(),
        WindowKind::Constant => vec![Complex64::new(1.0, 0.0); n],
        WindowKind::DiscreteGaussian { sigma } => {
            if !(sigma.is_finite() && sigma > 0.0) {
                return Err(invalid(format!("gaussian width must be positive, got {sigma}")));
            }
            let factors: Vec<Vec<f64>> = group.orders().iter().map(|&o| periodized_gaussian(o as usize, sigma)).collect();
            (0..n)
                .map(|i| {
                    let value: f64 = group.coords_of(i).zip(&factors).map(|(c, f)| f[c as usize]).product();
                    Complex64::new(value, 0.0)
                })
                .collect()
        }
        WindowKind::Random { seed } => {
            let mut rng = ChaCha20Rng::seed_from_u64(seed);
            (0..n)
                .map(|_| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
                .collect()
        }
    };
    Ok(normalized(v))
}

#[derive(Debug, Clone)]
pub struct MinimalWindows {
    pub windows: WindowFamily,
    pub bounds: BoundsReport,
    /// `⌈d |G| / |Λ|⌉`, the density lower limit on `n`.
    pub density_limit: usize,
}

/// Randomized search for a frame with as few windows as possible, starting at the density
/// limit. Heuristic: a failure at some `n` only means no random trial succeeded.
pub fn minimal_window_search(
    space: &PhaseSpace,
    d: usize,
    lattice: &Subgroup,
    trials: usize,
    seed: u64,
    tol: f64,
) -> Result<MinimalWindows> {
    if d == 0 {
        return Err(invalid("d must be positive"));
    }
    space.check_lattice(lattice)?;
    let size = space.n();
    let density_limit = (d * size).div_ceil(lattice.len()).max(1);
    let max_n = d * size;
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    for n in density_limit..=max_n {
        for _ in 0..trials.max(1) {
            let data = (0..d * n * size)
                .map(|_| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
                .collect();
            let windows = WindowFamily::new(space.group().clone(), d, n, data)?;
            let bounds = frame_bounds(&GaborSystem::with_space(space.clone(), windows.clone(), lattice.clone())?);
            if bounds.holds(tol) {
                return Ok(MinimalWindows { windows, bounds, density_limit });
            }
        }
    }
    Err(Error::NotAFrame { lower: 0.0, upper: 0.0 })
}
