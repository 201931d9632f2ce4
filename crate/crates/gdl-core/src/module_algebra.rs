//! Twisted group algebras on `Λ` and `Λ°` and the Heisenberg module structure of `L²(G)`.
//!
//! Side `A` lives on `Λ` with cocycle `c` and acts from the left through `w Σ a(λ) π(λ)`.
//! Side `B` lives on `Λ°` with cocycle `conj(c)` and acts from the right through
//! `f · b = (1/s(Λ)) Σ b(λ°) π(λ°)* f`. As matrices the `B` action reverses products:
//! `represent(b1 ♮ b2) = represent(b2) · represent(b1)`.
//!
//! The measure weight of a coefficient function is the weight of its subgroup, so an adjoint
//! subgroup produced by [`PhaseSpace::adjoint_subgroup`] already carries `1/s(Λ)`.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::cell::OnceCell;

use num_complex::Complex64;

use crate::error::{shape, Result};
use crate::gabor_engine::{synthesis_matrix, GaborSystem, WindowFamily};
use crate::group_core::Subgroup;
use crate::linalg::{column_projector, op_norm};
use crate::phase_space::{inner, PhaseSpace};
use crate::Operator;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    A,
    B,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TwistedCoefficients {
    lattice: Subgroup,
    values: Vec<Complex64>,
    side: Side,
}

impl TwistedCoefficients {
    /// `values[i]` belongs to the `i`-th element of `lattice` in sorted order.
    pub fn new(lattice: Subgroup, values: Vec<Complex64>, side: Side) -> Result<Self> {
        if values.len() != lattice.len() {
            return Err(shape(format!("{} coefficients for a subgroup of size {}", values.len(), lattice.len())));
        }
        Ok(TwistedCoefficients { lattice, values, side })
    }

    pub fn zeros(lattice: Subgroup, side: Side) -> Self {
        let len = lattice.len();
        TwistedCoefficients { lattice, values: vec![Complex64::new(0.0, 0.0); len], side }
    }

    /// Point mass at the phase point with ambient index `point`.
    pub fn delta(lattice: Subgroup, point: usize, side: Side) -> Result<Self> {
        let pos = lattice.position(point).ok_or_else(|| shape("point is not in the subgroup"))?;
        let mut out = Self::zeros(lattice, side);
        out.values[pos] = Complex64::new(1.0, 0.0);
        Ok(out)
    }

    pub fn lattice(&self) -> &Subgroup {
        &self.lattice
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn side(&self) -> Side {
        self.side
    }

    /// Value at an ambient phase index (zero off the subgroup).
    pub fn at(&self, point: usize) -> Complex64 {
        self.lattice.position(point).map_or(Complex64::new(0.0, 0.0), |i| self.values[i])
    }

    fn compatible(&self, other: &Self) -> Result<()> {
        if self.side != other.side || self.lattice != other.lattice {
            return Err(shape("twisted coefficients live on different subgroups or sides"));
        }
        Ok(())
    }

    fn map(&self, f: impl Fn(Complex64) -> Complex64) -> Self {
        TwistedCoefficients { values: self.values.iter().map(|&v| f(v)).collect(), ..self.clone() }
    }

    pub fn scaled(&self, c: Complex64) -> Self {
        self.map(|v| v * c)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.compatible(other)?;
        let values = self.values.iter().zip(&other.values).map(|(a, b)| a + b).collect();
        Ok(TwistedCoefficients { values, ..self.clone() })
    }
}

/// `(F1 ♮ F2)(λ) = w Σ_{λ'} F1(λ') F2(λ − λ') c(λ', λ − λ')`, with `conj(c)` on side `B`.
pub fn twisted_convolve(space: &PhaseSpace, f1: &TwistedCoefficients, f2: &TwistedCoefficients) -> Result<TwistedCoefficients> {
    f1.compatible(f2)?;
    space.check_lattice(&f1.lattice)?;
    let lattice = &f1.lattice;
    let w = lattice.weight();
    let mut out = TwistedCoefficients::zeros(lattice.clone(), f1.side);
    for (i, &l) in lattice.indices().iter().enumerate() {
        let mut acc = Complex64::new(0.0, 0.0);
        for (a, &lp) in lattice.indices().iter().enumerate() {
            let rest = space.sub(l, lp);
            let c = space.cocycle_at(lp, rest);
            let c = if f1.side == Side::A { c } else { c.conj() };
            acc += f1.values[a] * f2.at(rest) * c;
        }
        out.values[i] = acc * w;
    }
    Ok(out)
}

/// `F*(λ) = c(λ,λ) conj(F(−λ))` on side `A`, `conj(c(λ,λ) F(−λ))` on side `B`.
pub fn twisted_involution(space: &PhaseSpace, f: &TwistedCoefficients) -> TwistedCoefficients {
    let mut out = f.clone();
    for (i, &l) in f.lattice.indices().iter().enumerate() {
        let c = space.cocycle_at(l, l);
        let v = f.at(space.neg(l));
        out.values[i] = match f.side {
            Side::A => c * v.conj(),
            Side::B => (c * v).conj(),
        };
    }
    out
}

/// `w Σ a(λ) π(λ)` on side `A`, `w Σ b(λ°) π(λ°)*` on side `B`.
pub fn represent(space: &PhaseSpace, f: &TwistedCoefficients) -> Operator {
    let n = space.n();
    let mut m = Operator::zeros(n, n);
    for (&p, &v) in f.lattice.indices().iter().zip(&f.values) {
        if v == Complex64::new(0.0, 0.0) {
            continue;
        }
        let shift = space.tf_shift_matrix(p);
        match f.side {
            Side::A => m += shift * v,
            Side::B => m += shift.adjoint() * v,
        }
    }
    m * Complex64::new(f.lattice.weight(), 0.0)
}

fn apply(op: &Operator, f: &[Complex64]) -> Vec<Complex64> {
    (op * nalgebra::DVector::from_column_slice(f)).iter().copied().collect()
}

/// `⟨f,g⟩_Λ`: coefficients `a(λ) = ⟨f, π(λ) g⟩`.
pub fn lhs_inner(space: &PhaseSpace, f: &[Complex64], g: &[Complex64], lattice: &Subgroup) -> Result<TwistedCoefficients> {
    space.check_signal(f)?;
    space.check_signal(g)?;
    space.check_lattice(lattice)?;
    let values = lattice.indices().iter().map(|&p| inner(f, &space.tf_shift(p, g))).collect();
    TwistedCoefficients::new(lattice.clone(), values, Side::A)
}

/// `⟨f,g⟩_{Λ°}`: coefficients `b(λ°) = ⟨g, π(λ°)* f⟩` on the adjoint subgroup.
pub fn rhs_inner(space: &PhaseSpace, f: &[Complex64], g: &[Complex64], adjoint: &Subgroup) -> Result<TwistedCoefficients> {
    space.check_signal(f)?;
    space.check_signal(g)?;
    space.check_lattice(adjoint)?;
    let values = adjoint.indices().iter().map(|&p| inner(g, &space.tf_shift_adjoint(p, f))).collect();
    TwistedCoefficients::new(adjoint.clone(), values, Side::B)
}

/// `a · h`.
pub fn apply_left(space: &PhaseSpace, a: &TwistedCoefficients, h: &[Complex64]) -> Vec<Complex64> {
    apply(&represent(space, a), h)
}

/// `f · b`.
pub fn apply_right(space: &PhaseSpace, f: &[Complex64], b: &TwistedCoefficients) -> Vec<Complex64> {
    apply(&represent(space, b), f)
}

/// `‖⟨f,g⟩_Λ · h − f · ⟨g,h⟩_{Λ°}‖₂`.
pub fn associativity_residual(
    space: &PhaseSpace,
    f: &[Complex64],
    g: &[Complex64],
    h: &[Complex64],
    lattice: &Subgroup,
) -> Result<f64> {
    space.check_signal(h)?;
    let adjoint = space.adjoint_subgroup(lattice);
    let left = apply_left(space, &lhs_inner(space, f, g, lattice)?, h);
    let right = apply_right(space, f, &rhs_inner(space, g, h, &adjoint)?);
    Ok(distance(&left, &right))
}

fn distance(a: &[Complex64], b: &[Complex64]) -> f64 {
    libm::sqrt(a.iter().zip(b).map(|(x, y)| (x - y).norm_sqr()).sum())
}

/// `tr_A(a) = a(0)`.
pub fn trace_a(f: &TwistedCoefficients) -> Complex64 {
    f.at(0)
}

/// `tr_B(b) = b(0)`.
pub fn trace_b(f: &TwistedCoefficients) -> Complex64 {
    f.at(0)
}

/// Matrix-valued inner product: an `n x n` grid over side `A` or a `d x d` grid over side `B`,
/// replicated along the block diagonal.
#[derive(Debug, Clone)]
pub struct BlockInnerProduct {
    side: Side,
    d: usize,
    n: usize,
    blocks: Vec<TwistedCoefficients>,
    realized: OnceCell<Operator>,
}

impl BlockInnerProduct {
    pub fn side(&self) -> Side {
        self.side
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Side of the square grid: `n` for `A`, `d` for `B`.
    pub fn grid(&self) -> usize {
        match self.side {
            Side::A => self.n,
            Side::B => self.d,
        }
    }

    pub fn block(&self, row: usize, col: usize) -> &TwistedCoefficients {
        &self.blocks[row * self.grid() + col]
    }

    /// `tr_{M(A)} = (1/d) Σ diag` and `tr_{M(B)} = (1/n) Σ diag` over the full block-diagonal
    /// matrix; the replication cancels the normalization.
    pub fn trace(&self) -> Complex64 {
        (0..self.grid()).map(|i| self.block(i, i).at(0)).sum()
    }

    /// The operator on `L²(G x Z_d x Z_n)`, layout `[k][j][t]`: the left action `A · h` on
    /// side `A`, the right action `h · B` on side `B`.
    pub fn realize(&self, space: &PhaseSpace) -> &Operator {
        self.realized.get_or_init(|| {
            let size = space.n();
            let dim = self.d * self.n * size;
            let at = |k: usize, j: usize| (k * self.n + j) * size;
            let mut m = Operator::zeros(dim, dim);
            for r in 0..self.grid() {
                for c in 0..self.grid() {
                    let rep = represent(space, self.block(r, c));
                    match self.side {
                        Side::A => {
                            for k in 0..self.d {
                                m.view_mut((at(k, r), at(k, c)), (size, size)).copy_from(&rep);
                            }
                        }
                        Side::B => {
                            for j in 0..self.n {
                                m.view_mut((at(c, j), at(r, j)), (size, size)).copy_from(&rep);
                            }
                        }
                    }
                }
            }
            m
        })
    }

    /// Applies the realized operator to a family of the same `(d, n)` shape.
    pub fn act(&self, space: &PhaseSpace, h: &WindowFamily) -> Result<WindowFamily> {
        if h.d() != self.d || h.n() != self.n || h.group() != space.group() {
            return Err(shape("family shape does not match the block inner product"));
        }
        let out = apply(self.realize(space), h.data());
        WindowFamily::new(h.group().clone(), self.d, self.n, out)
    }
}

fn check_pair(space: &PhaseSpace, f: &WindowFamily, g: &WindowFamily) -> Result<()> {
    if !f.same_shape(g) || f.group() != space.group() {
        return Err(shape("families must share group and (d, n)"));
    }
    Ok(())
}

/// `A[i][j] = Σ_k ⟨f_{k,i}, g_{k,j}⟩_Λ`.
pub fn matrix_lhs(space: &PhaseSpace, f: &WindowFamily, g: &WindowFamily, lattice: &Subgroup) -> Result<BlockInnerProduct> {
    check_pair(space, f, g)?;
    let (d, n) = (f.d(), f.n());
    let mut blocks = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            let mut acc = TwistedCoefficients::zeros(lattice.clone(), Side::A);
            for k in 0..d {
                acc = acc.add(&lhs_inner(space, f.window(k, i), g.window(k, j), lattice)?)?;
            }
            blocks.push(acc);
        }
    }
    Ok(BlockInnerProduct { side: Side::A, d, n, blocks, realized: OnceCell::new() })
}

/// `B[i][k] = Σ_j ⟨f_{i,j}, g_{k,j}⟩_{Λ°}` over the adjoint subgroup.
pub fn matrix_rhs(space: &PhaseSpace, f: &WindowFamily, g: &WindowFamily, adjoint: &Subgroup) -> Result<BlockInnerProduct> {
    check_pair(space, f, g)?;
    let (d, n) = (f.d(), f.n());
    let mut blocks = Vec::with_capacity(d * d);
    for i in 0..d {
        for k in 0..d {
            let mut acc = TwistedCoefficients::zeros(adjoint.clone(), Side::B);
            for j in 0..n {
                acc = acc.add(&rhs_inner(space, f.window(i, j), g.window(k, j), adjoint)?)?;
            }
            blocks.push(acc);
        }
    }
    Ok(BlockInnerProduct { side: Side::B, d, n, blocks, realized: OnceCell::new() })
}

/// `‖⟨f,g⟩_Λ · h − f · ⟨g,h⟩_{Λ°}‖₂` for matrix-valued inner products.
pub fn block_associativity_residual(
    space: &PhaseSpace,
    f: &WindowFamily,
    g: &WindowFamily,
    h: &WindowFamily,
    lattice: &Subgroup,
) -> Result<f64> {
    check_pair(space, f, h)?;
    let adjoint = space.adjoint_subgroup(lattice);
    let left = matrix_lhs(space, f, g, lattice)?.act(space, h)?;
    let right = matrix_rhs(space, g, h, &adjoint)?.act(space, f)?;
    Ok(distance(left.data(), right.data()))
}

/// `‖P² − P‖` in operator norm.
pub fn idempotent_residual(p: &Operator) -> Result<f64> {
    if p.nrows() != p.ncols() {
        return Err(shape("idempotent check needs a square operator"));
    }
    Ok(op_norm(&(p * p - p)))
}

/// `‖g‖_Λ = ‖⟨g,g⟩_Λ‖^{1/2}`.
pub fn module_norm(space: &PhaseSpace, g: &WindowFamily, lattice: &Subgroup) -> Result<f64> {
    let a = matrix_lhs(space, g, g, lattice)?;
    Ok(libm::sqrt(op_norm(a.realize(space))))
}

/// `‖g‖_{Λ°} = ‖⟨g,g⟩_{Λ°}‖^{1/2}`, for the adjoint of `lattice`.
pub fn module_norm_adjoint(space: &PhaseSpace, g: &WindowFamily, lattice: &Subgroup) -> Result<f64> {
    let adjoint = space.adjoint_subgroup(lattice);
    let b = matrix_rhs(space, g, g, &adjoint)?;
    Ok(libm::sqrt(op_norm(b.realize(space))))
}

/// Residuals for the projection statements about a pair `(g, h)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProjectionCheck {
    /// `‖⟨g,h⟩_{Λ°} − Id‖`: zero exactly for dual pairs.
    pub identity_residual: f64,
    /// `‖P² − P‖` for `P = ⟨g,h⟩_Λ`.
    pub idempotent_residual: f64,
    /// Distance between the projector onto the range of `P` and the projector onto
    /// `⊕_k span{⊕_j π(λ°) g_{k,j}}`.
    pub range_residual: f64,
}

pub fn projection_check(
    space: &PhaseSpace,
    g: &WindowFamily,
    h: &WindowFamily,
    lattice: &Subgroup,
    rel_tol: f64,
) -> Result<ProjectionCheck> {
    check_pair(space, g, h)?;
    let adjoint = space.adjoint_subgroup(lattice);
    let b = matrix_rhs(space, g, h, &adjoint)?;
    let rb = b.realize(space);
    let identity_residual = op_norm(&(rb - Operator::identity(rb.nrows(), rb.ncols())));
    let a = matrix_lhs(space, g, h, lattice)?;
    let p = a.realize(space);
    let idempotent = idempotent_residual(p)?;

    let adjoint_system = GaborSystem::with_space(space.clone(), g.transpose(), adjoint)?;
    let v = column_projector(&synthesis_matrix(&adjoint_system), rel_tol);
    let block = v.nrows();
    let mut target = Operator::zeros(p.nrows(), p.ncols());
    for k in 0..g.d() {
        target.view_mut((k * block, k * block), (block, block)).copy_from(&v);
    }
    let range_residual = op_norm(&(column_projector(p, rel_tol) - target));
    Ok(ProjectionCheck { identity_residual, idempotent_residual: idempotent, range_residual })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gabor_engine::{canonical_dual, frame_bounds, frame_operator};
    use crate::group_core::make_group;
    use crate::linalg::hermitian_spectrum;
    use crate::phase_space::norm_sqr;
    use crate::testutil::{random_signal, rng};
    use crate::Signal;
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn setup(gens: &[&[i64]], weight: f64) -> (PhaseSpace, Subgroup, Subgroup) {
        let space = PhaseSpace::new(make_group(&[6]).unwrap());
        let lattice = space.subgroup(gens, weight).unwrap();
        let adjoint = space.adjoint_subgroup(&lattice);
        (space, lattice, adjoint)
    }

    fn random_coeffs(lattice: &Subgroup, side: Side, r: &mut ChaCha8Rng) -> TwistedCoefficients {
        TwistedCoefficients::new(lattice.clone(), random_signal(lattice.len(), r), side).unwrap()
    }

    fn random_family(space: &PhaseSpace, d: usize, n: usize, r: &mut ChaCha8Rng) -> WindowFamily {
        WindowFamily::new(space.group().clone(), d, n, random_signal(d * n * space.n(), r)).unwrap()
    }

    #[test]
    fn convolution_examples() {
        let (space, lattice, _) = setup(&[&[1, 2], &[0, 3]], 0.5);
        let (l1, l2) = (lattice.indices()[3], lattice.indices()[5]);
        let d1 = TwistedCoefficients::delta(lattice.clone(), l1, Side::A).unwrap();
        let d2 = TwistedCoefficients::delta(lattice.clone(), l2, Side::A).unwrap();
        let prod = twisted_convolve(&space, &d1, &d2).unwrap();
        let expected = TwistedCoefficients::delta(lattice.clone(), space.add(l1, l2), Side::A)
            .unwrap()
            .scaled(space.cocycle_at(l1, l2) * 0.5);
        assert!(distance(prod.values(), expected.values()) < 1e-14);

        let mut r = rng(20);
        let f = random_coeffs(&lattice, Side::A, &mut r);
        let unit = TwistedCoefficients::delta(lattice.clone(), 0, Side::A).unwrap();
        let left = twisted_convolve(&space, &unit, &f).unwrap();
        assert!(distance(left.values(), f.scaled(c(0.5)).values()) < 1e-14);

        let other = TwistedCoefficients::zeros(lattice.clone(), Side::B);
        assert!(twisted_convolve(&space, &f, &other).is_err());
    }

    #[test]
    fn algebra_laws_both_sides() {
        let (space, lattice, adjoint) = setup(&[&[1, 2], &[0, 3]], 0.7);
        let mut r = rng(21);
        for (sub, side) in [(&lattice, Side::A), (&adjoint, Side::B)] {
            let f1 = random_coeffs(sub, side, &mut r);
            let f2 = random_coeffs(sub, side, &mut r);
            let f3 = random_coeffs(sub, side, &mut r);
            let left = twisted_convolve(&space, &twisted_convolve(&space, &f1, &f2).unwrap(), &f3).unwrap();
            let right = twisted_convolve(&space, &f1, &twisted_convolve(&space, &f2, &f3).unwrap()).unwrap();
            assert!(distance(left.values(), right.values()) < 1e-10);

            let star = twisted_involution(&space, &f1);
            assert!(distance(twisted_involution(&space, &star).values(), f1.values()) < 1e-12);
            let prod_star = twisted_involution(&space, &twisted_convolve(&space, &f1, &f2).unwrap());
            let star_prod = twisted_convolve(&space, &twisted_involution(&space, &f2), &star).unwrap();
            assert!(distance(prod_star.values(), star_prod.values()) < 1e-12);

            let (r1, r2) = (represent(&space, &f1), represent(&space, &f2));
            let r12 = represent(&space, &twisted_convolve(&space, &f1, &f2).unwrap());
            let expected = match side {
                Side::A => &r1 * &r2,
                Side::B => &r2 * &r1,
            };
            assert!((r12 - expected).norm() < 1e-10);
            assert!((represent(&space, &star) - r1.adjoint()).norm() < 1e-12);
        }
    }

    #[test]
    fn module_laws() {
        let (space, lattice, adjoint) = setup(&[&[2, 0], &[0, 3]], 1.0);
        let mut r = rng(22);
        let f = random_signal(6, &mut r);
        let (a1, a2) = (random_coeffs(&lattice, Side::A, &mut r), random_coeffs(&lattice, Side::A, &mut r));
        let nested = apply_left(&space, &a1, &apply_left(&space, &a2, &f));
        let direct = apply_left(&space, &twisted_convolve(&space, &a1, &a2).unwrap(), &f);
        assert!(distance(&nested, &direct) < 1e-10);

        let (b1, b2) = (random_coeffs(&adjoint, Side::B, &mut r), random_coeffs(&adjoint, Side::B, &mut r));
        let nested = apply_right(&space, &apply_right(&space, &f, &b1), &b2);
        let direct = apply_right(&space, &f, &twisted_convolve(&space, &b1, &b2).unwrap());
        assert!(distance(&nested, &direct) < 1e-10);
    }

    #[test]
    fn represent_examples() {
        let (space, lattice, _) = setup(&[&[2, 0], &[0, 3]], 1.0);
        let unit = TwistedCoefficients::delta(lattice.clone(), 0, Side::A).unwrap();
        assert!((represent(&space, &unit) - Operator::identity(6, 6)).norm() < 1e-15);
        let p = lattice.indices()[4];
        let point = TwistedCoefficients::delta(lattice.with_weight(0.3).unwrap(), p, Side::A).unwrap();
        assert!((represent(&space, &point) - space.tf_shift_matrix(p) * c(0.3)).norm() < 1e-15);

        let mut r = rng(23);
        for _ in 0..10 {
            let f = random_coeffs(&lattice, Side::A, &mut r);
            let rep = represent(&space, &f);
            // The shifts are orthogonal for the trace form, so ‖rep‖_F² = w² |G| Σ|a|².
            let expected = norm_sqr(f.values()) * 6.0;
            assert!((rep.norm_squared() - expected).abs() < 1e-10 * expected);
            assert!(op_norm(&rep) > 0.0);
        }
    }

    #[test]
    fn inner_product_examples() {
        let (space, lattice, adjoint) = setup(&[&[2, 0], &[0, 3]], 1.0);
        let mut r = rng(24);
        let (f, g, h) = (random_signal(6, &mut r), random_signal(6, &mut r), random_signal(6, &mut r));
        let a = lhs_inner(&space, &f, &g, &lattice).unwrap();
        assert!((trace_a(&a) - inner(&f, &g)).norm() < 1e-12);
        let b = rhs_inner(&space, &g, &f, &adjoint).unwrap();
        assert!((trace_b(&b) - inner(&f, &g)).norm() < 1e-12);
        let gg = lhs_inner(&space, &g, &g, &lattice).unwrap();
        assert!((gg.at(0) - c(norm_sqr(&g))).norm() < 1e-12);
        assert!(hermitian_spectrum(&represent(&space, &gg)).iter().all(|&v| v > -1e-10));

        assert!(associativity_residual(&space, &f, &g, &h, &lattice).unwrap() < 1e-10);
        let zero = vec![c(0.0); 6];
        assert!(associativity_residual(&space, &f, &zero, &h, &lattice).unwrap() == 0.0);

        // Full plane with w = 1/|G|: ⟨f,g⟩_Λ · h = ⟨h,g⟩ f.
        let full = space.full(1.0 / 6.0).unwrap();
        let left = apply_left(&space, &lhs_inner(&space, &f, &g, &full).unwrap(), &h);
        let expected: Signal = f.iter().map(|z| z * inner(&h, &g)).collect();
        assert!(distance(&left, &expected) < 1e-12);
        assert!(associativity_residual(&space, &f, &g, &h, &full).unwrap() < 1e-12);
    }

    #[test]
    fn trace_examples() {
        let (space, lattice, _) = setup(&[&[1, 2], &[0, 3]], 1.0);
        let unit = TwistedCoefficients::delta(lattice.clone(), 0, Side::A).unwrap();
        assert_eq!(trace_a(&unit), c(1.0));
        let mut r = rng(25);
        let f1 = random_coeffs(&lattice, Side::A, &mut r);
        let f2 = random_coeffs(&lattice, Side::A, &mut r);
        let t12 = trace_a(&twisted_convolve(&space, &f1, &f2).unwrap());
        let t21 = trace_a(&twisted_convolve(&space, &f2, &f1).unwrap());
        assert!((t12 - t21).norm() < 1e-12);
    }

    #[test]
    fn block_inner_products() {
        let space = PhaseSpace::new(make_group(&[4]).unwrap());
        let lattice = space.subgroup(&[&[1, 2]], 1.0).unwrap();
        let adjoint = space.adjoint_subgroup(&lattice);
        let mut r = rng(26);
        let (f, g, h) = (random_family(&space, 2, 3, &mut r), random_family(&space, 2, 3, &mut r), random_family(&space, 2, 3, &mut r));
        let a = matrix_lhs(&space, &f, &g, &lattice).unwrap();
        assert_eq!(a.grid(), 3);
        let b = matrix_rhs(&space, &g, &f, &adjoint).unwrap();
        assert_eq!(b.grid(), 2);
        let fg = inner(f.data(), g.data());
        assert!((a.trace() - fg).norm() < 1e-10);
        assert!((b.trace() - fg).norm() < 1e-10);
        assert!(block_associativity_residual(&space, &f, &g, &h, &lattice).unwrap() < 1e-10);

        // Direct evaluation of the left and right actions from their defining sums.
        let left = a.act(&space, &h).unwrap();
        let right = b.act(&space, &h).unwrap();
        for k in 0..2 {
            for j in 0..3 {
                let mut expected = vec![c(0.0); 4];
                let mut expected_r = vec![c(0.0); 4];
                for kp in 0..2 {
                    for jp in 0..3 {
                        let coeff = lhs_inner(&space, f.window(kp, j), g.window(kp, jp), &lattice).unwrap();
                        let term = apply_left(&space, &coeff, h.window(k, jp));
                        expected.iter_mut().zip(&term).for_each(|(e, t)| *e += t);
                        let coeff = rhs_inner(&space, g.window(kp, jp), f.window(k, jp), &adjoint).unwrap();
                        let term = apply_right(&space, h.window(kp, j), &coeff);
                        expected_r.iter_mut().zip(&term).for_each(|(e, t)| *e += t);
                    }
                }
                assert!(distance(left.window(k, j), &expected) < 1e-10);
                assert!(distance(right.window(k, j), &expected_r) < 1e-10);
            }
        }

        let f1 = random_family(&space, 1, 1, &mut r);
        let g1 = random_family(&space, 1, 1, &mut r);
        let a1 = matrix_lhs(&space, &f1, &g1, &lattice).unwrap();
        let plain = lhs_inner(&space, f1.data(), g1.data(), &lattice).unwrap();
        assert_eq!(a1.block(0, 0), &plain);
    }

    #[test]
    fn idempotent_examples() {
        let id = Operator::identity(5, 5);
        assert_eq!(idempotent_residual(&id).unwrap(), 0.0);
        assert!((idempotent_residual(&(id * c(2.0))).unwrap() - 2.0).abs() < 1e-14);
        assert!(idempotent_residual(&Operator::zeros(2, 3)).is_err());
    }

    #[test]
    fn dual_pairs_give_projections() {
        let space = PhaseSpace::new(make_group(&[4]).unwrap());
        let lattice = space.subgroup(&[&[1, 0], &[0, 2]], 1.0).unwrap();
        let mut r = rng(27);
        let g = random_family(&space, 1, 3, &mut r);
        let sys = GaborSystem::with_space(space.clone(), g.clone(), lattice.clone()).unwrap();
        assert!(frame_bounds(&sys).holds(1e-9));
        let h = canonical_dual(&sys, 1e-9).unwrap();
        let check = projection_check(&space, &g, &h, &lattice, 1e-9).unwrap();
        assert!(check.identity_residual < 1e-9, "{check:?}");
        assert!(check.idempotent_residual < 1e-9, "{check:?}");
        assert!(check.range_residual < 1e-9, "{check:?}");

        let bad = projection_check(&space, &g, &h.scaled(c(2.0)), &lattice, 1e-9).unwrap();
        assert!(bad.identity_residual > 0.5 && bad.idempotent_residual > 0.5);

        // Resolution f = Σ_j ⟨f, g_j⟩_Λ · h_j.
        let f = random_signal(4, &mut r);
        let mut back = vec![c(0.0); 4];
        for j in 0..3 {
            let a = lhs_inner(&space, &f, g.window(0, j), &lattice).unwrap();
            let term = apply_left(&space, &a, h.window(0, j));
            back.iter_mut().zip(&term).for_each(|(e, t)| *e += t);
        }
        assert!(distance(&back, &f) < 1e-9);

        // Σ_j tr_A(⟨f,g_j⟩ ♮ ⟨f,g_j⟩*) = ⟨S f, f⟩ lies between the frame bounds.
        let bounds = frame_bounds(&sys);
        let mut energy = c(0.0);
        for j in 0..3 {
            let a = lhs_inner(&space, &f, g.window(0, j), &lattice).unwrap();
            energy += trace_a(&twisted_convolve(&space, &a, &twisted_involution(&space, &a)).unwrap());
        }
        let s = frame_operator(&sys, None).unwrap();
        let sf = apply(&s, &f);
        assert!((energy - inner(&sf, &f)).norm() < 1e-10);
        let nf = norm_sqr(&f);
        assert!(energy.re >= bounds.lower * nf - 1e-10 && energy.re <= bounds.upper * nf + 1e-10);
    }

    #[test]
    fn module_norms() {
        let space = PhaseSpace::new(make_group(&[6]).unwrap());
        let full = space.full(1.0 / 6.0).unwrap();
        let mut r = rng(28);
        let g = random_family(&space, 1, 1, &mut r);
        let norm = module_norm(&space, &g, &full).unwrap();
        assert!((norm - libm::sqrt(g.norm_sqr())).abs() < 1e-12);
        let zero = WindowFamily::zeros(space.group().clone(), 2, 2).unwrap();
        assert_eq!(module_norm(&space, &zero, &full).unwrap(), 0.0);

        let lattice = space.subgroup(&[&[1, 3], &[2, 0]], 1.0).unwrap();
        let g = random_family(&space, 2, 3, &mut r);
        let left = module_norm(&space, &g, &lattice).unwrap();
        let right = module_norm_adjoint(&space, &g, &lattice).unwrap();
        assert!((left - right).abs() < 1e-9 * left.max(1.0));
        let sys = GaborSystem::with_space(space.clone(), g, lattice).unwrap();
        let bessel = frame_bounds(&sys).upper;
        assert!((left * left - bessel).abs() < 1e-9 * bessel.max(1.0));
    }
}
