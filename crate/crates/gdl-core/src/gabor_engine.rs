//! Multi-window super Gabor systems `{π(λ) g_{·,j}}` on `L²(G x Z_d)`.
//!
//! A [`WindowFamily`] holds `d·n` signals `g_{k,j}` (super index `k`, window index `j`).
//! Coefficient vectors are indexed by `(λ, j)` with `λ` outer in lexicographic order.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;
use num_rational::Ratio;

use crate::error::{shape, Error, Result};
use crate::group_core::{GroupSpec, Subgroup};
use crate::linalg::{hermitian_eigen, hermitian_function, hermitian_spectrum, rank};
use crate::phase_space::{norm_sqr, PhaseSpace};
use crate::{Operator, Signal};

#[derive(Debug, Clone, PartialEq)]
pub struct WindowFamily {
    group: GroupSpec,
    d: usize,
    n: usize,
    data: Vec<Complex64>,
}

impl WindowFamily {
    /// `data` is laid out as `[k][j][t]`.
    pub fn new(group: GroupSpec, d: usize, n: usize, data: Vec<Complex64>) -> Result<Self> {
        if d == 0 || n == 0 {
            return Err(Error::InvalidInput(format!("window family needs d, n >= 1, got d={d}, n={n}")));
        }
        let expected = d * n * group.order();
        if data.len() != expected {
            return Err(shape(format!("window data has {} values, expected {expected}", data.len())));
        }
        if data.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::InvalidInput("window data must be finite".into()));
        }
        Ok(WindowFamily { group, d, n, data })
    }

    pub fn zeros(group: GroupSpec, d: usize, n: usize) -> Result<Self> {
        let len = d * n * group.order();
        Self::new(group, d, n, vec![Complex64::new(0.0, 0.0); len])
    }

    pub fn from_fn(
        group: GroupSpec,
        d: usize,
        n: usize,
        mut f: impl FnMut(usize, usize, usize) -> Complex64,
    ) -> Result<Self> {
        let size = group.order();
        let mut data = Vec::with_capacity(d * n * size);
        for k in 0..d {
            for j in 0..n {
                for t in 0..size {
                    data.push(f(k, j, t));
                }
            }
        }
        Self::new(group, d, n, data)
    }

    /// A single window, `d = n = 1`.
    pub fn single(group: GroupSpec, g: &[Complex64]) -> Result<Self> {
        Self::new(group, 1, 1, g.to_vec())
    }

    /// `n = 1` family from the `d` super components.
    pub fn super_window(group: GroupSpec, parts: &[Signal]) -> Result<Self> {
        let data = parts.iter().flat_map(|p| p.iter().copied()).collect();
        Self::new(group, parts.len(), 1, data)
    }

    pub fn group(&self) -> &GroupSpec {
        &self.group
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn data(&self) -> &[Complex64] {
        &self.data
    }

    fn offset(&self, k: usize, j: usize) -> usize {
        (k * self.n + j) * self.group.order()
    }

    pub fn window(&self, k: usize, j: usize) -> &[Complex64] {
        let o = self.offset(k, j);
        &self.data[o..o + self.group.order()]
    }

    pub fn window_mut(&mut self, k: usize, j: usize) -> &mut [Complex64] {
        let o = self.offset(k, j);
        let len = self.group.order();
        &mut self.data[o..o + len]
    }

    /// `g_{·,j}` as a signal on `G x Z_d`.
    pub fn column(&self, j: usize) -> Signal {
        (0..self.d).flat_map(|k| self.window(k, j).iter().copied()).collect()
    }

    /// `g_{k,·}` as a signal on `G x Z_n`.
    pub fn row(&self, k: usize) -> Signal {
        (0..self.n).flat_map(|j| self.window(k, j).iter().copied()).collect()
    }

    /// Replaces column `j` by a signal on `G x Z_d`.
    pub fn set_column(&mut self, j: usize, column: &[Complex64]) {
        let size = self.group.order();
        for k in 0..self.d {
            self.window_mut(k, j).copy_from_slice(&column[k * size..(k + 1) * size]);
        }
    }

    /// `g'_{j,k} = g_{k,j}`: a `n`-super, `d`-window family.
    pub fn transpose(&self) -> WindowFamily {
        WindowFamily::from_fn(self.group.clone(), self.n, self.d, |j, k, t| self.window(k, j)[t])
            .expect("transpose keeps a valid shape")
    }

    pub fn scaled(&self, c: Complex64) -> WindowFamily {
        WindowFamily { data: self.data.iter().map(|z| z * c).collect(), ..self.clone() }
    }

    /// `Σ_{k,j} ‖g_{k,j}‖²`.
    pub fn norm_sqr(&self) -> f64 {
        norm_sqr(&self.data)
    }

    pub fn same_shape(&self, other: &WindowFamily) -> bool {
        self.group == other.group && self.d == other.d && self.n == other.n
    }
}

/// Windows together with the lattice they are shifted along.
#[derive(Debug, Clone)]
pub struct GaborSystem {
    space: PhaseSpace,
    windows: WindowFamily,
    lattice: Subgroup,
}

impl GaborSystem {
    pub fn new(windows: WindowFamily, lattice: Subgroup) -> Result<Self> {
        let space = PhaseSpace::new(windows.group().clone());
        Self::with_space(space, windows, lattice)
    }

    pub fn with_space(space: PhaseSpace, windows: WindowFamily, lattice: Subgroup) -> Result<Self> {
        if space.group() != windows.group() {
            return Err(shape("windows live on a different group"));
        }
        space.check_lattice(&lattice)?;
        Ok(GaborSystem { space, windows, lattice })
    }

    pub fn space(&self) -> &PhaseSpace {
        &self.space
    }

    pub fn windows(&self) -> &WindowFamily {
        &self.windows
    }

    pub fn lattice(&self) -> &Subgroup {
        &self.lattice
    }

    pub fn covolume(&self) -> f64 {
        self.space.covolume(&self.lattice)
    }

    /// Dimension of the signal space `L²(G x Z_d)`.
    pub fn signal_len(&self) -> usize {
        self.space.n() * self.windows.d()
    }

    /// Number of coefficients, `|Λ|·n`.
    pub fn coeff_len(&self) -> usize {
        self.lattice.len() * self.windows.n()
    }

    fn check_signal(&self, f: &[Complex64]) -> Result<()> {
        if f.len() == self.signal_len() {
            Ok(())
        } else {
            Err(shape(format!("signal has length {}, expected |G|·d = {}", f.len(), self.signal_len())))
        }
    }
}

/// `π(χ)` applied to each of the `blocks` consecutive length-`|G|` blocks of `v`.
pub fn tf_shift_blocks(space: &PhaseSpace, p: usize, v: &[Complex64]) -> Signal {
    v.chunks(space.n()).flat_map(|b| space.tf_shift(p, b)).collect()
}

/// `π(χ) ⊕ ... ⊕ π(χ)` (`blocks` copies) as a matrix.
pub fn tf_shift_blocks_matrix(space: &PhaseSpace, p: usize, blocks: usize) -> Operator {
    let n = space.n();
    let single = space.tf_shift_matrix(p);
    let mut m = Operator::zeros(n * blocks, n * blocks);
    for b in 0..blocks {
        m.view_mut((b * n, b * n), (n, n)).copy_from(&single);
    }
    m
}

/// Columns `⊕_k π(λ) g_{k,j}` for every `(λ, j)`, `λ` outer.
pub fn synthesis_matrix(sys: &GaborSystem) -> Operator {
    let w = sys.windows();
    let columns: Vec<Signal> = (0..w.n()).map(|j| w.column(j)).collect();
    let mut m = Operator::zeros(sys.signal_len(), sys.coeff_len());
    let mut c = 0;
    for &p in sys.lattice().indices() {
        for col in &columns {
            let shifted = tf_shift_blocks(sys.space(), p, col);
            for (r, v) in shifted.into_iter().enumerate() {
                m[(r, c)] = v;
            }
            c += 1;
        }
    }
    m
}

/// `(C f)(λ, j) = Σ_k ⟨f_k, π(λ) g_{k,j}⟩`.
pub fn analysis(sys: &GaborSystem, f: &[Complex64]) -> Result<Vec<Complex64>> {
    sys.check_signal(f)?;
    let u = synthesis_matrix(sys);
    let f = nalgebra::DVector::from_column_slice(f);
    Ok((u.adjoint() * f).iter().copied().collect())
}

/// `D c = w Σ_{λ,j} c(λ,j) π(λ) g_{·,j}`.
pub fn synthesis(sys: &GaborSystem, c: &[Complex64]) -> Result<Signal> {
    if c.len() != sys.coeff_len() {
        return Err(shape(format!("coefficient vector has length {}, expected |Λ|·n = {}", c.len(), sys.coeff_len())));
    }
    let u = synthesis_matrix(sys);
    let c = nalgebra::DVector::from_column_slice(c);
    Ok((u * c * Complex64::new(sys.lattice().weight(), 0.0)).iter().copied().collect())
}

/// `S_{g,h} = w Σ_{λ,j} (π(λ) h_{·,j}) (π(λ) g_{·,j})*`; `h` defaults to `g`.
pub fn frame_operator(g: &GaborSystem, h: Option<&GaborSystem>) -> Result<Operator> {
    let ug = synthesis_matrix(g);
    let uh = match h {
        None => ug.clone(),
        Some(h) => {
            if !h.windows().same_shape(g.windows()) || h.lattice() != g.lattice() {
                return Err(shape("mixed frame operator needs matching shapes and lattice"));
            }
            synthesis_matrix(h)
        }
    };
    Ok(uh * ug.adjoint() * Complex64::new(g.lattice().weight(), 0.0))
}

/// `Γ[(λ,j),(μ,j')] = Σ_k ⟨π(μ) g_{k,j'}, π(λ) g_{k,j}⟩`.
pub fn gram_matrix(sys: &GaborSystem) -> Operator {
    let u = synthesis_matrix(sys);
    u.adjoint() * u
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundsKind {
    Frame,
    Riesz,
    Bessel,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BoundsReport {
    pub lower: f64,
    pub upper: f64,
    pub spectrum: Vec<f64>,
    pub kind: BoundsKind,
}

impl BoundsReport {
    /// Builds a report from eigenvalues of a positive semidefinite operator; round-off below
    /// zero is reported as zero.
    pub fn from_spectrum(mut spectrum: Vec<f64>, kind: BoundsKind) -> Self {
        for v in spectrum.iter_mut() {
            *v = v.max(0.0);
        }
        spectrum.sort_by(f64::total_cmp);
        let lower = spectrum.first().copied().unwrap_or(0.0);
        let upper = spectrum.last().copied().unwrap_or(0.0);
        BoundsReport { lower, upper, spectrum, kind }
    }

    /// Whether the lower bound is positive: `A > tol·B`.
    pub fn holds(&self, tol: f64) -> bool {
        self.upper > 0.0 && self.lower > tol * self.upper
    }

    pub fn is_tight(&self, tol: f64) -> bool {
        self.holds(tol) && self.upper - self.lower <= tol * self.upper
    }
}

pub fn frame_bounds(sys: &GaborSystem) -> BoundsReport {
    let s = frame_operator(sys, None).expect("a system is compatible with itself");
    BoundsReport::from_spectrum(hermitian_spectrum(&s), BoundsKind::Frame)
}

/// Spectrum of `Γ / s` for the system shifted along `sys.lattice()` (typically an adjoint
/// subgroup) with reference covolume `s`.
pub fn riesz_bounds(sys: &GaborSystem, reference_covolume: f64) -> Result<BoundsReport> {
    if !(reference_covolume.is_finite() && reference_covolume > 0.0) {
        return Err(Error::InvalidInput(format!("reference covolume must be positive, got {reference_covolume}")));
    }
    let gram = gram_matrix(sys) / Complex64::new(reference_covolume, 0.0);
    Ok(BoundsReport::from_spectrum(hermitian_spectrum(&gram), BoundsKind::Riesz))
}

fn invertible_frame_operator(sys: &GaborSystem, tol: f64) -> Result<(Vec<f64>, Operator)> {
    let s = frame_operator(sys, None)?;
    let (values, vectors) = hermitian_eigen(&s);
    let lower = values.first().copied().unwrap_or(0.0);
    let upper = values.last().copied().unwrap_or(0.0);
    if !(upper > 0.0 && lower > tol * upper) {
        return Err(Error::NotAFrame { lower, upper });
    }
    Ok((values, vectors))
}

fn apply_to_columns(windows: &WindowFamily, op: &Operator) -> WindowFamily {
    let mut out = windows.clone();
    for j in 0..windows.n() {
        let col = nalgebra::DVector::from_column_slice(&windows.column(j));
        let mapped = op * col;
        out.set_column(j, mapped.as_slice());
    }
    out
}

/// `h_{·,j} = S^{-1} g_{·,j}`.
pub fn canonical_dual(sys: &GaborSystem, tol: f64) -> Result<WindowFamily> {
    let (values, vectors) = invertible_frame_operator(sys, tol)?;
    let inv = hermitian_function(&values, &vectors, |x| 1.0 / x);
    Ok(apply_to_columns(sys.windows(), &inv))
}

/// `S^{-1/2} g_{·,j}`.
pub fn canonical_tight(sys: &GaborSystem, tol: f64) -> Result<WindowFamily> {
    let (values, vectors) = invertible_frame_operator(sys, tol)?;
    let inv_sqrt = hermitian_function(&values, &vectors, |x| 1.0 / libm::sqrt(x));
    Ok(apply_to_columns(sys.windows(), &inv_sqrt))
}

#[derive(Debug, Clone, PartialEq)]
pub struct DensityCondition {
    pub name: &'static str,
    pub holds: bool,
    pub detail: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DensityVerdict {
    FrameImpossible,
    RieszImpossible,
    BasisCandidate,
    Open,
}

impl DensityVerdict {
    pub fn as_str(&self) -> &'static str {
        match self {
            DensityVerdict::FrameImpossible => "frame impossible",
            DensityVerdict::RieszImpossible => "Riesz impossible",
            DensityVerdict::BasisCandidate => "basis candidate",
            DensityVerdict::Open => "open",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DensityReport {
    /// `|G| / |Λ|`.
    pub counting_covolume: Ratio<u64>,
    /// `s(Λ)` with the lattice's own weight.
    pub covolume: f64,
    pub frame: BoundsReport,
    /// Spectrum of `w Γ`, the Riesz bounds of the system with respect to its own weight.
    pub riesz: BoundsReport,
    pub conditions: Vec<DensityCondition>,
    pub frame_impossible: bool,
    pub riesz_impossible: bool,
    pub verdict: DensityVerdict,
}

/// Necessary conditions for the system to be a frame or a Riesz sequence.
///
/// With `A, B` the frame bounds, the norm bracket `A s d ≤ ‖g‖² ≤ B s d` holds for every system;
/// a frame additionally needs `s d ≤ n` under counting weight, and a Riesz sequence `s d ≥ n`.
pub fn density_check(sys: &GaborSystem, tol: f64) -> DensityReport {
    let (d, n) = (sys.windows().d(), sys.windows().n());
    let size = sys.space().n();
    let len = sys.lattice().len();
    let w = sys.lattice().weight();
    let s = sys.covolume();
    let norm = sys.windows().norm_sqr();
    let frame = frame_bounds(sys);
    let gram = gram_matrix(sys) * Complex64::new(w, 0.0);
    let riesz = BoundsReport::from_spectrum(hermitian_spectrum(&gram), BoundsKind::Riesz);
    let frame_rank = rank(&frame_operator(sys, None).expect("self-compatible"), tol);
    let riesz_rank = rank(&gram, tol);
    let slack = |x: f64| tol * x.abs().max(1.0);

    let mut conditions = Vec::new();
    let frame_density = size * d <= n * len;
    conditions.push(DensityCondition {
        name: "frame density s(Λ)·d ≤ n",
        holds: frame_density,
        detail: format!("|G|·d = {}, n·|Λ| = {}", size * d, n * len),
    });
    let frame_rank_ok = frame_rank >= size * d;
    conditions.push(DensityCondition {
        name: "frame rank ≥ |G|·d",
        holds: frame_rank_ok,
        detail: format!("rank S = {frame_rank}, |G|·d = {}", size * d),
    });
    let (lo, hi) = (frame.lower * s * d as f64, frame.upper * s * d as f64);
    conditions.push(DensityCondition {
        name: "frame norm bracket A·s·d ≤ ‖g‖² ≤ B·s·d",
        holds: lo <= norm + slack(norm) && norm <= hi + slack(hi),
        detail: format!("{lo:e} ≤ {norm:e} ≤ {hi:e}"),
    });
    let riesz_density = size * d >= n * len;
    conditions.push(DensityCondition {
        name: "Riesz density s(Λ)·d ≥ n",
        holds: riesz_density,
        detail: format!("|G|·d = {}, n·|Λ| = {}", size * d, n * len),
    });
    let riesz_rank_ok = riesz_rank >= n * len;
    conditions.push(DensityCondition {
        name: "Riesz rank = |Λ|·n",
        holds: riesz_rank_ok,
        detail: format!("rank Γ = {riesz_rank}, |Λ|·n = {}", n * len),
    });
    let (lo, hi) = (riesz.lower * n as f64, riesz.upper * n as f64);
    let wn = w * norm;
    conditions.push(DensityCondition {
        name: "Riesz norm bracket A·n ≤ w‖g‖² ≤ B·n",
        holds: lo <= wn + slack(wn) && wn <= hi + slack(hi),
        detail: format!("{lo:e} ≤ {wn:e} ≤ {hi:e}"),
    });

    let frame_impossible = !frame_density || !frame_rank_ok;
    let riesz_impossible = !riesz_density || !riesz_rank_ok;
    let verdict = if frame_impossible {
        DensityVerdict::FrameImpossible
    } else if riesz_impossible {
        DensityVerdict::RieszImpossible
    } else if size * d == n * len {
        DensityVerdict::BasisCandidate
    } else {
        DensityVerdict::Open
    };
    DensityReport {
        counting_covolume: Ratio::new(size as u64, len as u64),
        covolume: s,
        frame,
        riesz,
        conditions,
        frame_impossible,
        riesz_impossible,
        verdict,
    }
}

/// `max |Σ_k ⟨π(λ) g_{k,j}, π(μ) h_{k,j'}⟩ − δ_{(λ,j),(μ,j')}|` over the given lattice.
pub fn biorthogonality_residual(
    space: &PhaseSpace,
    g: &WindowFamily,
    h: &WindowFamily,
    lattice: &Subgroup,
) -> Result<f64> {
    if !g.same_shape(h) {
        return Err(shape("biorthogonality needs families of the same shape"));
    }
    let ug = synthesis_matrix(&GaborSystem::with_space(space.clone(), g.clone(), lattice.clone())?);
    let uh = synthesis_matrix(&GaborSystem::with_space(space.clone(), h.clone(), lattice.clone())?);
    let cross = uh.adjoint() * ug;
    let mut worst: f64 = 0.0;
    for r in 0..cross.nrows() {
        for c in 0..cross.ncols() {
            let target = if r == c { 1.0 } else { 0.0 };
            worst = worst.max((cross[(r, c)] - target).norm());
        }
    }
    Ok(worst)
}
