//! The phase space `G x Ĝ`: time-frequency shifts, cocycles, the short-time Fourier
//! transform, the symplectic Fourier transform and adjoint subgroups.
//!
//! A phase point `(x, ω)` is numbered `x·|G| + ω`, which is the lexicographic index of the
//! concatenated coordinate tuple. Characters are identified with group elements through
//! `ω(x) = exp(2πi Σ x_i ω_i / N_i)`.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;
use num_rational::Ratio;

use crate::error::{shape, Result};
use crate::group_core::{self, root_of_unity, GroupElement, GroupSpec, Subgroup};
use crate::{Operator, Signal};

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PhasePoint {
    pub x: GroupElement,
    pub omega: GroupElement,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PhaseSpace {
    group: GroupSpec,
    phase: GroupSpec,
    // coordinates of every element of G, row-major
    coords: Vec<u64>,
    // exponent / N_i for every factor
    scale: Vec<u64>,
    roots: Vec<Complex64>,
}

/// `⟨f, g⟩ = Σ f(t) conj(g(t))`.
pub fn inner(f: &[Complex64], g: &[Complex64]) -> Complex64 {
    f.iter().zip(g).map(|(a, b)| a * b.conj()).sum()
}

pub fn norm_sqr(f: &[Complex64]) -> f64 {
    f.iter().map(|a| a.norm_sqr()).sum()
}

impl PhaseSpace {
    pub fn new(group: GroupSpec) -> Self {
        let phase = group.product(&group);
        let coords = (0..group.order()).flat_map(|i| group.coords_of(i).collect::<Vec<_>>()).collect();
        let l = group.exponent();
        let scale = group.orders().iter().map(|&n| l / n).collect();
        let roots = (0..l).map(|k| root_of_unity(k, l)).collect();
        PhaseSpace { group, phase, coords, scale, roots }
    }

    pub fn group(&self) -> &GroupSpec {
        &self.group
    }

    /// `G x Ĝ` as a group, coordinates of `x` first.
    pub fn phase(&self) -> &GroupSpec {
        &self.phase
    }

    /// `|G|`.
    pub fn n(&self) -> usize {
        self.group.order()
    }

    /// Number of phase points, `|G|²`.
    pub fn points(&self) -> usize {
        self.phase.order()
    }

    /// Total Haar mass of the phase space, `M = |G|`.
    pub fn mass(&self) -> f64 {
        self.n() as f64
    }

    pub fn split(&self, p: usize) -> (usize, usize) {
        (p / self.n(), p % self.n())
    }

    pub fn join(&self, x: usize, omega: usize) -> usize {
        x * self.n() + omega
    }

    pub fn point(&self, p: usize) -> PhasePoint {
        let (x, w) = self.split(p);
        PhasePoint { x: self.group.element_at(x), omega: self.group.element_at(w) }
    }

    pub fn point_index(&self, p: &PhasePoint) -> Result<usize> {
        self.group.check(&p.x)?;
        self.group.check(&p.omega)?;
        Ok(self.join(self.group.index_of(&p.x), self.group.index_of(&p.omega)))
    }

    pub fn add(&self, p: usize, q: usize) -> usize {
        self.phase.add_index(p, q)
    }

    pub fn sub(&self, p: usize, q: usize) -> usize {
        self.phase.sub_index(p, q)
    }

    pub fn neg(&self, p: usize) -> usize {
        self.phase.neg_index(p)
    }

    /// Subgroup of the phase space from generator tuples `(x_1..x_k, ω_1..ω_k)`.
    pub fn subgroup(&self, generators: &[&[i64]], weight: f64) -> Result<Subgroup> {
        let gens = generators
            .iter()
            .map(|g| self.phase.element(g))
            .collect::<Result<Vec<_>>>()?;
        group_core::subgroup_closure(&self.phase, &gens, weight)
    }

    pub fn full(&self, weight: f64) -> Result<Subgroup> {
        let k = self.group.rank();
        let gens: Vec<GroupElement> = (0..2 * k)
            .map(|i| {
                let mut c = vec![0u64; 2 * k];
                c[i] = 1 % self.phase.orders()[i];
                GroupElement::new(c)
            })
            .collect();
        group_core::subgroup_closure(&self.phase, &gens, weight)
    }

    pub fn trivial(&self, weight: f64) -> Result<Subgroup> {
        group_core::subgroup_closure(&self.phase, &[], weight)
    }

    /// Angle of `ω(x)` in units of `1/exponent` turns.
    pub fn pair(&self, x: usize, omega: usize) -> u64 {
        let k = self.group.rank();
        let l = self.group.exponent();
        let xs = &self.coords[x * k..(x + 1) * k];
        let ws = &self.coords[omega * k..(omega + 1) * k];
        let mut acc: u64 = 0;
        for i in 0..k {
            let n = self.group.orders()[i];
            acc = (acc + (xs[i] * ws[i] % n) * self.scale[i]) % l;
        }
        acc
    }

    fn turns(&self, t: u64) -> Complex64 {
        self.roots[(t % self.group.exponent()) as usize]
    }

    fn minus(&self, t: u64) -> u64 {
        let l = self.group.exponent();
        (l - t % l) % l
    }

    pub fn character(&self, x: usize, omega: usize) -> Complex64 {
        self.turns(self.pair(x, omega))
    }

    /// Angle of `c(χ1, χ2) = conj(ω2(x1))`.
    pub fn cocycle_turns(&self, p: usize, q: usize) -> u64 {
        let (x1, _) = self.split(p);
        let (_, w2) = self.split(q);
        self.minus(self.pair(x1, w2))
    }

    /// Angle of `c_s(χ1, χ2) = c(χ1,χ2) conj(c(χ2,χ1)) = conj(ω2(x1)) ω1(x2)`.
    pub fn symplectic_turns(&self, p: usize, q: usize) -> u64 {
        let (x1, w1) = self.split(p);
        let (x2, w2) = self.split(q);
        (self.minus(self.pair(x1, w2)) + self.pair(x2, w1)) % self.group.exponent()
    }

    pub fn cocycle_at(&self, p: usize, q: usize) -> Complex64 {
        self.turns(self.cocycle_turns(p, q))
    }

    pub fn symplectic_cocycle_at(&self, p: usize, q: usize) -> Complex64 {
        self.turns(self.symplectic_turns(p, q))
    }

    pub fn cocycle(&self, a: &PhasePoint, b: &PhasePoint) -> Result<Complex64> {
        Ok(self.cocycle_at(self.point_index(a)?, self.point_index(b)?))
    }

    pub fn symplectic_cocycle(&self, a: &PhasePoint, b: &PhasePoint) -> Result<Complex64> {
        Ok(self.symplectic_cocycle_at(self.point_index(a)?, self.point_index(b)?))
    }

    /// `(π(x,ω) f)(t) = ω(t) f(t − x)`.
    pub fn tf_shift(&self, p: usize, f: &[Complex64]) -> Signal {
        let mut out = vec![Complex64::new(0.0, 0.0); self.n()];
        self.tf_shift_into(p, f, &mut out);
        out
    }

    pub fn tf_shift_into(&self, p: usize, f: &[Complex64], out: &mut [Complex64]) {
        let (x, w) = self.split(p);
        for (t, o) in out.iter_mut().enumerate() {
            *o = self.character(t, w) * f[self.group.sub_index(t, x)];
        }
    }

    /// `(π(x,ω)* f)(t) = conj(ω(t + x)) f(t + x)`.
    pub fn tf_shift_adjoint(&self, p: usize, f: &[Complex64]) -> Signal {
        let (x, w) = self.split(p);
        (0..self.n())
            .map(|t| {
                let s = self.group.add_index(t, x);
                self.character(s, w).conj() * f[s]
            })
            .collect()
    }

    pub fn tf_shift_matrix(&self, p: usize) -> Operator {
        let (x, w) = self.split(p);
        let n = self.n();
        let mut m = Operator::zeros(n, n);
        for t in 0..n {
            m[(t, self.group.sub_index(t, x))] = self.character(t, w);
        }
        m
    }

    /// `V_g f(χ) = ⟨f, π(χ) g⟩` over all phase points.
    pub fn stft(&self, g: &[Complex64], f: &[Complex64]) -> Result<Vec<Complex64>> {
        self.check_signal(g)?;
        self.check_signal(f)?;
        let mut shifted = vec![Complex64::new(0.0, 0.0); self.n()];
        Ok((0..self.points())
            .map(|p| {
                self.tf_shift_into(p, g, &mut shifted);
                inner(f, &shifted)
            })
            .collect())
    }

    /// `F_s F(x,ω) = (1/|G|) Σ_{(t,ξ)} F(t,ξ) c_s((t,ξ),(x,ω))`.
    pub fn symplectic_fourier(&self, f: &[Complex64]) -> Result<Vec<Complex64>> {
        let n = self.n();
        if f.len() != self.points() {
            return Err(shape(format!("phase-space function has {} values, expected {}", f.len(), self.points())));
        }
        // c_s((t,ξ),(x,ω)) = conj(ω(t)) ξ(x) separates into two character sums.
        let mut partial = vec![Complex64::new(0.0, 0.0); n * n];
        for t in 0..n {
            for x in 0..n {
                partial[t * n + x] = (0..n).map(|xi| f[t * n + xi] * self.character(x, xi)).sum();
            }
        }
        let scale = 1.0 / n as f64;
        let mut out = vec![Complex64::new(0.0, 0.0); n * n];
        for x in 0..n {
            for w in 0..n {
                let s: Complex64 = (0..n).map(|t| partial[t * n + x] * self.character(t, w).conj()).sum();
                out[x * n + w] = s * scale;
            }
        }
        Ok(out)
    }

    /// `∫_{G x Ĝ} F = (1/|G|) Σ F`.
    pub fn integrate(&self, f: &[Complex64]) -> Complex64 {
        f.iter().sum::<Complex64>() / self.n() as f64
    }

    /// `Λ° = {χ : c_s(χ, λ) = 1 for all λ ∈ Λ}` with the orthogonal weight `1/s(Λ)`.
    pub fn adjoint_subgroup(&self, lattice: &Subgroup) -> Subgroup {
        let gens: Vec<usize> = lattice.generators().iter().map(|g| self.phase.index_of(g)).collect();
        let members: Vec<usize> = (0..self.points())
            .filter(|&p| gens.iter().all(|&q| self.symplectic_turns(p, q) == 0))
            .collect();
        Subgroup::from_indices(&self.phase, members, 1.0 / self.covolume(lattice))
            .expect("the commutant of a subgroup is a subgroup")
    }

    /// `s(Λ) = |G| / (w |Λ|)`.
    pub fn covolume(&self, lattice: &Subgroup) -> f64 {
        group_core::covolume(self.mass(), lattice)
    }

    /// `|G| / |Λ|`, the covolume under counting weight, exactly.
    pub fn counting_covolume(&self, lattice: &Subgroup) -> Ratio<u64> {
        group_core::counting_covolume(self.n() as u64, lattice)
    }

    /// Poisson summation: `|w Σ_Λ F − (1/s(Λ)) Σ_{Λ°} F_s F|`.
    pub fn poisson_residual(&self, lattice: &Subgroup, f: &[Complex64]) -> Result<f64> {
        let fs = self.symplectic_fourier(f)?;
        let adjoint = self.adjoint_subgroup(lattice);
        let lhs: Complex64 = lattice.indices().iter().map(|&p| f[p]).sum::<Complex64>() * lattice.weight();
        let rhs: Complex64 = adjoint.indices().iter().map(|&p| fs[p]).sum::<Complex64>() / self.covolume(lattice);
        Ok((lhs - rhs).norm())
    }

    pub fn check_signal(&self, f: &[Complex64]) -> Result<()> {
        if f.len() == self.n() {
            Ok(())
        } else {
            Err(shape(format!("signal has length {}, group has order {}", f.len(), self.n())))
        }
    }

    pub(crate) fn check_lattice(&self, lattice: &Subgroup) -> Result<()> {
        if lattice.ambient() == &self.phase {
            Ok(())
        } else {
            Err(shape("subgroup does not live in this phase space"))
        }
    }
}
