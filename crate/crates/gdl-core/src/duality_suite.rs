//! Verifiers for the duality theory: the Janssen function, the fundamental identity of Gabor
//! analysis (FIGA), Wexler-Raz relations, frame/Riesz duality and Bessel duality.
//!
//! Signals `f1, f2` live on `G x Z_d` (`d` consecutive blocks of length `|G|`); window
//! families `g, h` have shape `(d, n)`.
//!
//! Sign convention for the Janssen function: with
//! `ψ(χ) = Σ_j (C_g f1)(χ,j) conj((C_h f2)(χ,j))` one has
//! `F_s ψ(χ) = Σ_{k,l} ⟨f1_k, π(χ) f2_l⟩ Σ_j ⟨π(χ) h_{l,j}, g_{k,j}⟩`, while the
//! reflected form `Σ_{k,l} ⟨π(χ) f1_k, f2_l⟩ Σ_j ⟨h_{l,j}, π(χ) g_{k,j}⟩` equals
//! `F_s ψ(−χ)`. Both are checked. Sums over the symmetric set `Λ°` do not see the difference.

use alloc::format;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::error::{shape, Result};
use crate::gabor_engine::{
    analysis, frame_bounds, frame_operator, riesz_bounds, synthesis_matrix, BoundsReport, GaborSystem, WindowFamily,
};
use crate::group_core::{coset_transversal, Subgroup};
use crate::linalg::op_norm;
use crate::module_algebra::{projection_check, ProjectionCheck};
use crate::phase_space::{inner, PhaseSpace};
use crate::{Operator, Signal};

fn check_shapes(space: &PhaseSpace, f1: &[Complex64], f2: &[Complex64], g: &WindowFamily, h: &WindowFamily) -> Result<()> {
    if !g.same_shape(h) || g.group() != space.group() {
        return Err(shape("windows g and h must share group and (d, n)"));
    }
    let len = g.d() * space.n();
    if f1.len() != len || f2.len() != len {
        return Err(shape(format!("signals must have length |G|·d = {len}")));
    }
    Ok(())
}

fn max_dist(a: &[Complex64], b: &[Complex64]) -> f64 {
    a.iter().zip(b).fold(0.0, |m: f64, (x, y)| m.max((x - y).norm()))
}

/// `Σ_{k,l} ⟨f1_k, π(χ) f2_l⟩ Σ_j ⟨π(χ) h_{l,j}, g_{k,j}⟩`, or with `reflected` the form
/// `Σ_{k,l} ⟨π(χ) f1_k, f2_l⟩ Σ_j ⟨h_{l,j}, π(χ) g_{k,j}⟩`.
fn janssen_term(
    space: &PhaseSpace,
    f1: &[Complex64],
    f2: &[Complex64],
    g: &WindowFamily,
    h: &WindowFamily,
    p: usize,
    reflected: bool,
) -> Complex64 {
    let size = space.n();
    let block = |f: &[Complex64], k: usize| -> Signal { f[k * size..(k + 1) * size].to_vec() };
    let mut total = Complex64::new(0.0, 0.0);
    for k in 0..g.d() {
        let f1k = block(f1, k);
        for l in 0..g.d() {
            let f2l = block(f2, l);
            let signals = if reflected {
                inner(&space.tf_shift(p, &f1k), &f2l)
            } else {
                inner(&f1k, &space.tf_shift(p, &f2l))
            };
            if signals == Complex64::new(0.0, 0.0) {
                continue;
            }
            let windows: Complex64 = (0..g.n())
                .map(|j| {
                    if reflected {
                        inner(h.window(l, j), &space.tf_shift(p, g.window(k, j)))
                    } else {
                        inner(&space.tf_shift(p, h.window(l, j)), g.window(k, j))
                    }
                })
                .sum();
            total += signals * windows;
        }
    }
    total
}

/// `ψ(χ) = Σ_j (C_g f1)(χ,j) conj((C_h f2)(χ,j))` over all phase points.
fn psi_values(space: &PhaseSpace, f1: &[Complex64], f2: &[Complex64], g: &WindowFamily, h: &WindowFamily) -> Result<Vec<Complex64>> {
    let full = space.full(1.0)?;
    let cg = analysis(&GaborSystem::with_space(space.clone(), g.clone(), full.clone())?, f1)?;
    let ch = analysis(&GaborSystem::with_space(space.clone(), h.clone(), full)?, f2)?;
    let n = g.n();
    Ok((0..space.points())
        .map(|p| (0..n).map(|j| cg[p * n + j] * ch[p * n + j].conj()).sum())
        .collect())
}

#[derive(Debug, Clone, PartialEq)]
pub struct JanssenReport {
    /// `ψ` indexed by phase point.
    pub psi: Vec<Complex64>,
    /// `F_s ψ` evaluated by the symplectic Fourier transform.
    pub transform: Vec<Complex64>,
    /// `F_s ψ` evaluated by the closed form.
    pub closed_form: Vec<Complex64>,
    /// `max |closed_form − transform|`.
    pub transform_residual: f64,
    /// `max_χ |reflected form(χ) − F_s ψ(−χ)|`.
    pub reflection_residual: f64,
}

pub fn janssen_psi(
    space: &PhaseSpace,
    f1: &[Complex64],
    f2: &[Complex64],
    g: &WindowFamily,
    h: &WindowFamily,
) -> Result<JanssenReport> {
    check_shapes(space, f1, f2, g, h)?;
    let psi = psi_values(space, f1, f2, g, h)?;
    let transform = space.symplectic_fourier(&psi)?;
    let closed_form: Vec<Complex64> = (0..space.points()).map(|p| janssen_term(space, f1, f2, g, h, p, false)).collect();
    let transform_residual = max_dist(&closed_form, &transform);
    let reflection_residual = (0..space.points())
        .map(|p| (janssen_term(space, f1, f2, g, h, p, true) - transform[space.neg(p)]).norm())
        .fold(0.0, f64::max);
    Ok(JanssenReport { psi, transform, closed_form, transform_residual, reflection_residual })
}

#[derive(Debug, Clone, PartialEq)]
pub struct PeriodizationReport {
    /// `Pψ(χ) = w Σ_λ ψ(χ + λ)` over all phase points.
    pub periodized: Vec<Complex64>,
    /// Fourier transform of `Pψ` on the quotient by `Λ`, indexed like `Λ°`.
    pub quotient_transform: Vec<Complex64>,
    /// Closed-form `F_s ψ` restricted to `Λ°`.
    pub restriction: Vec<Complex64>,
    /// `max |quotient_transform − restriction|`.
    pub restriction_residual: f64,
    /// `max_χ |⟨C_g π(χ) f1, C_h π(χ) f2⟩_Λ − Pψ(−χ)|`.
    pub coefficient_residual: f64,
}

/// The `Λ`-periodization of `ψ` and its Fourier coefficients on `Λ°`.
pub fn janssen_periodization(
    space: &PhaseSpace,
    f1: &[Complex64],
    f2: &[Complex64],
    g: &WindowFamily,
    h: &WindowFamily,
    lattice: &Subgroup,
) -> Result<PeriodizationReport> {
    check_shapes(space, f1, f2, g, h)?;
    space.check_lattice(lattice)?;
    let w = lattice.weight();
    let psi = psi_values(space, f1, f2, g, h)?;
    let periodized: Vec<Complex64> = (0..space.points())
        .map(|p| lattice.indices().iter().map(|&l| psi[space.add(p, l)]).sum::<Complex64>() * w)
        .collect();

    let phase = space.phase();
    let all: Vec<_> = phase.elements().collect();
    let reps: Vec<usize> = coset_transversal(&all, lattice)?.iter().map(|e| phase.index_of(e)).collect();
    let quotient_measure = 1.0 / (space.n() as f64 * w);
    let adjoint = space.adjoint_subgroup(lattice);
    let quotient_transform: Vec<Complex64> = adjoint
        .indices()
        .iter()
        .map(|&q| reps.iter().map(|&r| periodized[r] * space.symplectic_cocycle_at(r, q)).sum::<Complex64>() * quotient_measure)
        .collect();
    let restriction: Vec<Complex64> = adjoint.indices().iter().map(|&q| janssen_term(space, f1, f2, g, h, q, false)).collect();
    let restriction_residual = max_dist(&quotient_transform, &restriction);

    let sys_g = GaborSystem::with_space(space.clone(), g.clone(), lattice.clone())?;
    let sys_h = GaborSystem::with_space(space.clone(), h.clone(), lattice.clone())?;
    let ug = synthesis_matrix(&sys_g);
    let uh = synthesis_matrix(&sys_h);
    let mut coefficient_residual: f64 = 0.0;
    for p in 0..space.points() {
        let s1 = crate::gabor_engine::tf_shift_blocks(space, p, f1);
        let s2 = crate::gabor_engine::tf_shift_blocks(space, p, f2);
        let c1 = ug.adjoint() * nalgebra::DVector::from_column_slice(&s1);
        let c2 = uh.adjoint() * nalgebra::DVector::from_column_slice(&s2);
        let phi = c2.dotc(&c1) * w;
        coefficient_residual = coefficient_residual.max((phi - periodized[space.neg(p)]).norm());
    }
    Ok(PeriodizationReport { periodized, quotient_transform, restriction, restriction_residual, coefficient_residual })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FigaReport {
    pub lhs: Complex64,
    pub rhs: Complex64,
    pub residual: f64,
}

/// `w Σ_{λ,j} (C_g f1)(λ,j) conj((C_h f2)(λ,j))` against
/// `(1/s(Λ)) Σ_{λ°} Σ_{k,l} ⟨π(λ°) f1_k, f2_l⟩ Σ_j ⟨h_{l,j}, π(λ°) g_{k,j}⟩`.
pub fn figa(
    space: &PhaseSpace,
    f1: &[Complex64],
    f2: &[Complex64],
    g: &WindowFamily,
    h: &WindowFamily,
    lattice: &Subgroup,
) -> Result<FigaReport> {
    check_shapes(space, f1, f2, g, h)?;
    let cg = analysis(&GaborSystem::with_space(space.clone(), g.clone(), lattice.clone())?, f1)?;
    let ch = analysis(&GaborSystem::with_space(space.clone(), h.clone(), lattice.clone())?, f2)?;
    let lhs = cg.iter().zip(&ch).map(|(a, b)| a * b.conj()).sum::<Complex64>() * lattice.weight();
    let adjoint = space.adjoint_subgroup(lattice);
    let rhs = adjoint
        .indices()
        .iter()
        .map(|&q| janssen_term(space, f1, f2, g, h, q, true))
        .sum::<Complex64>()
        / space.covolume(lattice);
    Ok(FigaReport { lhs, rhs, residual: (lhs - rhs).norm() })
}

pub fn figa_residual(
    space: &PhaseSpace,
    f1: &[Complex64],
    f2: &[Complex64],
    g: &WindowFamily,
    h: &WindowFamily,
    lattice: &Subgroup,
) -> Result<f64> {
    Ok(figa(space, f1, f2, g, h, lattice)?.residual)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WexlerRazReport {
    /// `max |Σ_j ⟨h_{l,j}, π(λ°) g_{k,j}⟩ − s(Λ) δ_{λ°,0} δ_{k,l}|`.
    pub residual: f64,
    pub is_dual_pair: bool,
    /// `‖S_{g,h} − Id‖`.
    pub operator_residual: f64,
    pub covolume: f64,
}

pub const WEXLER_RAZ_TOLERANCE: f64 = 1e-9;

pub fn wexler_raz_check(space: &PhaseSpace, g: &WindowFamily, h: &WindowFamily, lattice: &Subgroup) -> Result<WexlerRazReport> {
    if !g.same_shape(h) || g.group() != space.group() {
        return Err(shape("windows g and h must share group and (d, n)"));
    }
    space.check_lattice(lattice)?;
    let s = space.covolume(lattice);
    let adjoint = space.adjoint_subgroup(lattice);
    let mut residual: f64 = 0.0;
    for &q in adjoint.indices() {
        for k in 0..g.d() {
            let shifted: Vec<Signal> = (0..g.n()).map(|j| space.tf_shift(q, g.window(k, j))).collect();
            for l in 0..g.d() {
                let sum: Complex64 = (0..g.n()).map(|j| inner(h.window(l, j), &shifted[j])).sum();
                let target = if q == 0 && k == l { s } else { 0.0 };
                residual = residual.max((sum - target).norm());
            }
        }
    }
    let sys_g = GaborSystem::with_space(space.clone(), g.clone(), lattice.clone())?;
    let sys_h = GaborSystem::with_space(space.clone(), h.clone(), lattice.clone())?;
    let mixed = frame_operator(&sys_g, Some(&sys_h))?;
    let operator_residual = op_norm(&(&mixed - Operator::identity(mixed.nrows(), mixed.ncols())));
    Ok(WexlerRazReport { residual, is_dual_pair: residual < WEXLER_RAZ_TOLERANCE, operator_residual, covolume: s })
}

#[derive(Debug, Clone, PartialEq)]
pub struct DualityCertificate {
    pub frame_bounds: (f64, f64),
    pub riesz_bounds: (f64, f64),
    pub covolume: f64,
    pub max_deviation: f64,
    pub frame_holds: bool,
    pub riesz_holds: bool,
    pub pass: bool,
}

/// Frame bounds of `g` over `Λ` against the Riesz bounds of the transposed family over `Λ°`.
pub fn duality_certificate(sys: &GaborSystem, tol: f64) -> Result<DualityCertificate> {
    let space = sys.space();
    let s = sys.covolume();
    let adjoint = space.adjoint_subgroup(sys.lattice());
    let frame = frame_bounds(sys);
    let riesz_sys = GaborSystem::with_space(space.clone(), sys.windows().transpose(), adjoint)?;
    let riesz = riesz_bounds(&riesz_sys, s)?;
    Ok(certificate_from(&frame, &riesz, s, tol))
}

fn certificate_from(frame: &BoundsReport, riesz: &BoundsReport, s: f64, tol: f64) -> DualityCertificate {
    let max_deviation = (riesz.lower - frame.lower).abs().max((riesz.upper - frame.upper).abs());
    DualityCertificate {
        frame_bounds: (frame.lower, frame.upper),
        riesz_bounds: (riesz.lower, riesz.upper),
        covolume: s,
        max_deviation,
        frame_holds: frame.holds(tol),
        riesz_holds: riesz.holds(tol),
        pass: max_deviation < 1e-8 * frame.upper.max(1.0),
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BesselDuality {
    pub frame_side: f64,
    pub adjoint_side: f64,
    pub residual: f64,
}

/// Optimal Bessel bound of `g` over `Λ` and of the transposed family over `Λ°`.
pub fn bessel_duality_check(space: &PhaseSpace, g: &WindowFamily, lattice: &Subgroup) -> Result<BesselDuality> {
    let frame_side = frame_bounds(&GaborSystem::with_space(space.clone(), g.clone(), lattice.clone())?).upper;
    let adjoint = space.adjoint_subgroup(lattice);
    let adjoint_side = frame_bounds(&GaborSystem::with_space(space.clone(), g.transpose(), adjoint)?).upper;
    Ok(BesselDuality { frame_side, adjoint_side, residual: (frame_side - adjoint_side).abs() })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProjectionChain {
    pub check: ProjectionCheck,
    /// `⟨g,h⟩_{Λ°}` is the identity.
    pub identity_holds: bool,
    /// `⟨g,h⟩_Λ` is idempotent with the expected range.
    pub projection_holds: bool,
}

impl ProjectionChain {
    pub fn consistent(&self) -> bool {
        self.identity_holds == self.projection_holds
    }
}

/// Identity of `⟨g,h⟩_{Λ°}` against idempotence of `⟨g,h⟩_Λ` onto the adjoint-system span.
pub fn projection_chain(space: &PhaseSpace, g: &WindowFamily, h: &WindowFamily, lattice: &Subgroup, tol: f64) -> Result<ProjectionChain> {
    let check = projection_check(space, g, h, lattice, tol)?;
    Ok(ProjectionChain {
        check,
        identity_holds: check.identity_residual < tol,
        projection_holds: check.idempotent_residual < tol && check.range_residual < tol,
    })
}

/// The Moyal-type special case: `Σ_j ⟨h_j, g_j⟩` for families with `d = 1`.
pub fn window_pairing(g: &WindowFamily, h: &WindowFamily) -> Result<Complex64> {
    if !g.same_shape(h) {
        return Err(shape("windows g and h must share (d, n)"));
    }
    Ok((0..g.d())
        .flat_map(|k| (0..g.n()).map(move |j| (k, j)))
        .map(|(k, j)| inner(h.window(k, j), g.window(k, j)))
        .sum())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gabor_engine::canonical_dual;
    use crate::group_core::{enumerate_subgroups, make_group};
    use crate::testutil::{random_signal, rng};
    use alloc::vec;
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn family(space: &PhaseSpace, d: usize, n: usize, r: &mut ChaCha8Rng) -> WindowFamily {
        WindowFamily::new(space.group().clone(), d, n, random_signal(d * n * space.n(), r)).unwrap()
    }

    fn delta(space: &PhaseSpace) -> Signal {
        let mut v = vec![c(0.0); space.n()];
        v[0] = c(1.0);
        v
    }

    #[test]
    fn janssen_examples() {
        let space = PhaseSpace::new(make_group(&[2]).unwrap());
        let d = delta(&space);
        let g = WindowFamily::single(space.group().clone(), &d).unwrap();
        let report = janssen_psi(&space, &d, &d, &g, &g).unwrap();
        // Phase index p = 2x + ω: ψ = [x = 0].
        assert_eq!(report.psi, vec![c(1.0), c(1.0), c(0.0), c(0.0)]);
        assert!(report.transform_residual < 1e-14);

        let space = PhaseSpace::new(make_group(&[6]).unwrap());
        let mut r = rng(30);
        for (d, n) in [(1, 1), (2, 1), (1, 2), (2, 2)] {
            let (g, h) = (family(&space, d, n, &mut r), family(&space, d, n, &mut r));
            let (f1, f2) = (random_signal(6 * d, &mut r), random_signal(6 * d, &mut r));
            let report = janssen_psi(&space, &f1, &f2, &g, &h).unwrap();
            assert!(report.transform_residual < 1e-10, "{}", report.transform_residual);
            assert!(report.reflection_residual < 1e-10, "{}", report.reflection_residual);
            // The unreflected display evaluated at χ differs from F_s ψ(χ) in general.
            let reflected: Vec<Complex64> = (0..36).map(|p| janssen_term(&space, &f1, &f2, &g, &h, p, true)).collect();
            assert!(max_dist(&reflected, &report.transform) > 1e-3);
        }

        let zero = vec![c(0.0); 6];
        let g = family(&space, 1, 1, &mut r);
        let report = janssen_psi(&space, &zero, &random_signal(6, &mut r), &g, &g).unwrap();
        assert!(report.psi.iter().all(|v| v.norm() == 0.0));
        assert!(janssen_psi(&space, &zero[..5], &zero, &g, &g).is_err());
    }

    #[test]
    fn periodization_matches_restriction() {
        let space = PhaseSpace::new(make_group(&[4]).unwrap());
        let mut r = rng(31);
        for lattice in enumerate_subgroups(space.phase()) {
            let lattice = lattice.with_weight(0.75).unwrap();
            let (g, h) = (family(&space, 2, 2, &mut r), family(&space, 2, 2, &mut r));
            let (f1, f2) = (random_signal(8, &mut r), random_signal(8, &mut r));
            let report = janssen_periodization(&space, &f1, &f2, &g, &h, &lattice).unwrap();
            assert!(report.restriction_residual < 1e-10, "{}", report.restriction_residual);
            assert!(report.coefficient_residual < 1e-10, "{}", report.coefficient_residual);
        }
    }

    #[test]
    fn figa_examples() {
        let space = PhaseSpace::new(make_group(&[6]).unwrap());
        let mut r = rng(32);
        let full = space.full(1.0 / 6.0).unwrap();
        let (g, h) = (family(&space, 1, 2, &mut r), family(&space, 1, 2, &mut r));
        let (f1, f2) = (random_signal(6, &mut r), random_signal(6, &mut r));
        let report = figa(&space, &f1, &f2, &g, &h, &full).unwrap();
        let moyal = inner(&f1, &f2) * window_pairing(&g, &h).unwrap();
        assert!((report.lhs - moyal).norm() < 1e-10 && report.residual < 1e-10);

        let lattice = space.subgroup(&[&[2, 0], &[0, 3]], 1.0).unwrap();
        let (g, h) = (family(&space, 1, 1, &mut r), family(&space, 1, 1, &mut r));
        assert!(figa_residual(&space, &f1, &f2, &g, &h, &lattice).unwrap() < 1e-10);

        let space = PhaseSpace::new(make_group(&[4]).unwrap());
        for lattice in enumerate_subgroups(space.phase()) {
            let (g, h) = (family(&space, 2, 2, &mut r), family(&space, 2, 2, &mut r));
            let (f1, f2) = (random_signal(8, &mut r), random_signal(8, &mut r));
            assert!(figa_residual(&space, &f1, &f2, &g, &h, &lattice).unwrap() < 1e-10);
        }
    }

    #[test]
    fn wexler_raz_examples() {
        let space = PhaseSpace::new(make_group(&[6]).unwrap());
        let mut r = rng(33);
        let full = space.full(1.0 / 6.0).unwrap();
        let g = random_signal(6, &mut r);
        let pairing = inner(&g, &g);
        let h: Signal = g.iter().map(|v| v / pairing.conj()).collect();
        let gw = WindowFamily::single(space.group().clone(), &g).unwrap();
        let hw = WindowFamily::single(space.group().clone(), &h).unwrap();
        let report = wexler_raz_check(&space, &gw, &hw, &full).unwrap();
        assert!(report.is_dual_pair && report.operator_residual < 1e-9);

        let lattice = space.subgroup(&[&[1, 0], &[0, 2]], 1.0).unwrap();
        let g = family(&space, 1, 2, &mut r);
        let sys = GaborSystem::with_space(space.clone(), g.clone(), lattice.clone()).unwrap();
        let h = canonical_dual(&sys, 1e-9).unwrap();
        let report = wexler_raz_check(&space, &g, &h, &lattice).unwrap();
        assert!(report.is_dual_pair && report.operator_residual < 1e-9, "{report:?}");
        let doubled = wexler_raz_check(&space, &g, &h.scaled(c(2.0)), &lattice).unwrap();
        assert!(!doubled.is_dual_pair);
        assert!((doubled.residual - report.covolume).abs() < 1e-9);
        assert!(doubled.operator_residual > 0.5);

        // Biorthogonality on the adjoint side after rescaling by s(Λ).
        let adjoint = space.adjoint_subgroup(&lattice);
        let scaled = h.transpose().scaled(c(1.0 / report.covolume));
        let residual = crate::gabor_engine::biorthogonality_residual(&space, &g.transpose(), &scaled, &adjoint).unwrap();
        assert!(residual < 1e-9);
    }

    #[test]
    fn duality_certificate_examples() {
        let space = PhaseSpace::new(make_group(&[2]).unwrap());
        let lattice = space.subgroup(&[&[1, 1]], 1.0).unwrap();
        let g = WindowFamily::single(space.group().clone(), &delta(&space)).unwrap();
        let cert = duality_certificate(&GaborSystem::with_space(space, g, lattice).unwrap(), 1e-9).unwrap();
        assert!(cert.pass);
        assert!((cert.frame_bounds.0 - 1.0).abs() < 1e-12 && (cert.riesz_bounds.1 - 1.0).abs() < 1e-12);

        let space = PhaseSpace::new(make_group(&[4]).unwrap());
        let lattice = space.subgroup(&[&[1, 0], &[0, 2]], 1.0).unwrap();
        let mut r = rng(34);
        let g = family(&space, 1, 1, &mut r);
        let cert = duality_certificate(&GaborSystem::with_space(space.clone(), g, lattice).unwrap(), 1e-9).unwrap();
        assert!((cert.covolume - 0.5).abs() < 1e-15);
        assert!(cert.pass && cert.frame_holds && cert.riesz_holds, "{cert:?}");

        let lattice = space.subgroup(&[&[1, 0]], 1.0).unwrap();
        let g = family(&space, 2, 1, &mut r);
        let cert = duality_certificate(&GaborSystem::with_space(space.clone(), g, lattice).unwrap(), 1e-9).unwrap();
        assert!(cert.pass, "{cert:?}");
        assert!(!cert.frame_holds && !cert.riesz_holds);
        assert!(cert.frame_bounds.0 < 1e-10 && cert.riesz_bounds.0 < 1e-10);

        for (d, n) in [(2, 3), (3, 2)] {
            for lattice in enumerate_subgroups(space.phase()) {
                let g = family(&space, d, n, &mut r);
                let cert = duality_certificate(&GaborSystem::with_space(space.clone(), g, lattice).unwrap(), 1e-9).unwrap();
                assert!(cert.pass, "{cert:?}");
                assert_eq!(cert.frame_holds, cert.riesz_holds);
            }
        }
    }

    #[test]
    fn bessel_duality_examples() {
        let space = PhaseSpace::new(make_group(&[6]).unwrap());
        let lattice = space.subgroup(&[&[2, 0], &[0, 3]], 1.0).unwrap();
        let mut r = rng(35);
        let g = family(&space, 1, 1, &mut r);
        let report = bessel_duality_check(&space, &g, &lattice).unwrap();
        assert!(report.residual < 1e-9 * report.frame_side.max(1.0));

        let space = PhaseSpace::new(make_group(&[4]).unwrap());
        for lattice in enumerate_subgroups(space.phase()) {
            let g = family(&space, 2, 3, &mut r);
            let report = bessel_duality_check(&space, &g, &lattice).unwrap();
            assert!(report.residual < 1e-9 * report.frame_side.max(1.0), "{report:?}");
        }
        let zero = WindowFamily::zeros(space.group().clone(), 2, 3).unwrap();
        let report = bessel_duality_check(&space, &zero, &space.full(1.0).unwrap()).unwrap();
        assert_eq!((report.frame_side, report.adjoint_side), (0.0, 0.0));
    }

    #[test]
    fn projection_chain_on_dual_pairs() {
        let space = PhaseSpace::new(make_group(&[4]).unwrap());
        let mut r = rng(36);
        let lattice = space.subgroup(&[&[1, 0], &[0, 2]], 1.0).unwrap();
        let g = family(&space, 2, 3, &mut r);
        let sys = GaborSystem::with_space(space.clone(), g.clone(), lattice.clone()).unwrap();
        let h = canonical_dual(&sys, 1e-9).unwrap();
        let chain = projection_chain(&space, &g, &h, &lattice, 1e-9).unwrap();
        assert!(chain.identity_holds && chain.projection_holds, "{chain:?}");
        let other = family(&space, 2, 3, &mut r);
        let chain = projection_chain(&space, &g, &other, &lattice, 1e-9).unwrap();
        assert!(chain.consistent() && !chain.identity_holds);
    }
}
