//! Finite abelian groups `Z_{N1} x ... x Z_{Nk}`, their subgroups, cosets and measures.
//!
//! Elements are coordinate tuples reduced componentwise. They are numbered in lexicographic
//! order, which is the mixed-radix number with the first coordinate most significant.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;
use num_rational::Ratio;

use crate::error::{invalid, shape, Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GroupSpec {
    orders: Vec<u64>,
    strides: Vec<usize>,
    order: usize,
    exponent: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GroupElement {
    pub coords: Vec<u64>,
}

impl GroupElement {
    pub fn new(coords: Vec<u64>) -> Self {
        GroupElement { coords }
    }
}

/// Builds `Z_{N1} x ... x Z_{Nk}`.
pub fn make_group(orders: &[u64]) -> Result<GroupSpec> {
    GroupSpec::new(orders)
}

impl GroupSpec {
    pub fn new(orders: &[u64]) -> Result<Self> {
        if orders.is_empty() {
            return Err(invalid("group needs at least one cyclic factor"));
        }
        if let Some(bad) = orders.iter().find(|&&n| n == 0) {
            return Err(invalid(format!("cyclic factor of order {bad}")));
        }
        let mut order: usize = 1;
        for &n in orders {
            order = usize::try_from(n)
                .ok()
                .and_then(|n| order.checked_mul(n))
                .ok_or_else(|| invalid("group order overflows"))?;
        }
        let mut strides = vec![1usize; orders.len()];
        for i in (0..orders.len().saturating_sub(1)).rev() {
            strides[i] = strides[i + 1] * orders[i + 1] as usize;
        }
        let exponent = orders.iter().fold(1u64, |acc, &n| num_integer::lcm(acc, n));
        Ok(GroupSpec { orders: orders.to_vec(), strides, order, exponent })
    }

    pub fn orders(&self) -> &[u64] {
        &self.orders
    }

    /// Number of cyclic factors.
    pub fn rank(&self) -> usize {
        self.orders.len()
    }

    pub fn order(&self) -> usize {
        self.order
    }

    /// Least common multiple of the factor orders; every character value is a root of unity of
    /// this order.
    pub fn exponent(&self) -> u64 {
        self.exponent
    }

    /// `G x H` with the coordinates of `self` first.
    pub fn product(&self, other: &GroupSpec) -> GroupSpec {
        let mut orders = self.orders.clone();
        orders.extend_from_slice(&other.orders);
        GroupSpec::new(&orders).expect("product of valid groups")
    }

    /// Reduces arbitrary integer coordinates into an element.
    pub fn element(&self, coords: &[i64]) -> Result<GroupElement> {
        if coords.len() != self.rank() {
            return Err(shape(format!(
                "element has {} coordinates, group has {} factors",
                coords.len(),
                self.rank()
            )));
        }
        Ok(GroupElement {
            coords: coords
                .iter()
                .zip(&self.orders)
                .map(|(&c, &n)| c.rem_euclid(n as i64) as u64)
                .collect(),
        })
    }

    pub fn is_valid(&self, e: &GroupElement) -> bool {
        e.coords.len() == self.rank() && e.coords.iter().zip(&self.orders).all(|(c, n)| c < n)
    }

    pub fn check(&self, e: &GroupElement) -> Result<()> {
        if self.is_valid(e) {
            Ok(())
        } else {
            Err(invalid(format!("{:?} is not an element of Z{:?}", e.coords, self.orders)))
        }
    }

    pub fn identity(&self) -> GroupElement {
        GroupElement { coords: vec![0; self.rank()] }
    }

    pub fn index_of(&self, e: &GroupElement) -> usize {
        e.coords.iter().zip(&self.strides).map(|(&c, &s)| c as usize * s).sum()
    }

    pub fn element_at(&self, index: usize) -> GroupElement {
        GroupElement { coords: self.coords_of(index).collect() }
    }

    pub fn coords_of(&self, index: usize) -> impl Iterator<Item = u64> + '_ {
        self.strides
            .iter()
            .zip(&self.orders)
            .map(move |(&s, &n)| ((index / s) as u64) % n)
    }

    pub fn elements(&self) -> impl Iterator<Item = GroupElement> + '_ {
        (0..self.order).map(|i| self.element_at(i))
    }

    pub fn add(&self, a: &GroupElement, b: &GroupElement) -> GroupElement {
        GroupElement {
            coords: a
                .coords
                .iter()
                .zip(&b.coords)
                .zip(&self.orders)
                .map(|((&x, &y), &n)| (x + y) % n)
                .collect(),
        }
    }

    pub fn neg(&self, a: &GroupElement) -> GroupElement {
        GroupElement {
            coords: a.coords.iter().zip(&self.orders).map(|(&x, &n)| (n - x) % n).collect(),
        }
    }

    pub fn sub(&self, a: &GroupElement, b: &GroupElement) -> GroupElement {
        self.add(a, &self.neg(b))
    }

    pub fn add_index(&self, a: usize, b: usize) -> usize {
        self.combine(a, b, |x, y, n| (x + y) % n)
    }

    pub fn sub_index(&self, a: usize, b: usize) -> usize {
        self.combine(a, b, |x, y, n| (x + n - y) % n)
    }

    pub fn neg_index(&self, a: usize) -> usize {
        self.combine(a, a, |x, _, n| (n - x) % n)
    }

    fn combine(&self, a: usize, b: usize, op: impl Fn(usize, usize, usize) -> usize) -> usize {
        let mut out = 0;
        for (&s, &n) in self.strides.iter().zip(&self.orders) {
            let n = n as usize;
            out += op((a / s) % n, (b / s) % n, n) * s;
        }
        out
    }
}

/// Rational angle of `ω(x)` in turns, as a numerator over [`GroupSpec::exponent`].
pub fn character_turns(group: &GroupSpec, x: &GroupElement, omega: &GroupElement) -> u64 {
    let l = group.exponent as u128;
    let mut acc: u128 = 0;
    for ((&xi, &wi), &n) in x.coords.iter().zip(&omega.coords).zip(&group.orders) {
        acc = (acc + (xi as u128 * wi as u128 % n as u128) * (l / n as u128)) % l;
    }
    acc as u64
}

/// `exp(2πi num/den)`, exact at multiples of a quarter turn.
pub fn root_of_unity(num: u64, den: u64) -> Complex64 {
    let r = num % den;
    if (4 * r as u128).is_multiple_of(den as u128) {
        return match (4 * r as u128 / den as u128) as u8 {
            0 => Complex64::new(1.0, 0.0),
            1 => Complex64::new(0.0, 1.0),
            2 => Complex64::new(-1.0, 0.0),
            _ => Complex64::new(0.0, -1.0),
        };
    }
    let angle = 2.0 * core::f64::consts::PI * (r as f64) / (den as f64);
    Complex64::new(libm::cos(angle), libm::sin(angle))
}

/// `ω(x) = exp(2πi Σ x_i ω_i / N_i)`.
pub fn character(group: &GroupSpec, x: &GroupElement, omega: &GroupElement) -> Result<Complex64> {
    group.check(x)?;
    group.check(omega)?;
    Ok(root_of_unity(character_turns(group, x, omega), group.exponent))
}

/// An enumerated subgroup with per-point measure weight.
#[derive(Debug, Clone, PartialEq)]
pub struct Subgroup {
    ambient: GroupSpec,
    generators: Vec<GroupElement>,
    indices: Vec<usize>,
    weight: f64,
}

/// Smallest subgroup of `ambient` containing `generators`.
pub fn subgroup_closure(ambient: &GroupSpec, generators: &[GroupElement], weight: f64) -> Result<Subgroup> {
    check_weight(weight)?;
    for g in generators {
        ambient.check(g)?;
    }
    let gens: Vec<usize> = generators.iter().map(|g| ambient.index_of(g)).collect();
    let mut member = vec![false; ambient.order()];
    close(ambient, &mut member, &gens);
    Ok(Subgroup {
        ambient: ambient.clone(),
        generators: generators.to_vec(),
        indices: member_indices(&member),
        weight,
    })
}

fn check_weight(weight: f64) -> Result<()> {
    if weight.is_finite() && weight > 0.0 {
        Ok(())
    } else {
        Err(invalid(format!("subgroup weight must be positive and finite, got {weight}")))
    }
}

fn member_indices(member: &[bool]) -> Vec<usize> {
    member.iter().enumerate().filter_map(|(i, &m)| m.then_some(i)).collect()
}

/// Extends a membership mask (which must already describe a subgroup, or be empty) to the
/// subgroup generated by it and `gens`.
fn close(ambient: &GroupSpec, member: &mut [bool], gens: &[usize]) {
    let mut queue: Vec<usize> = member_indices(member);
    if !member[0] {
        member[0] = true;
        queue.push(0);
    }
    let mut head = 0;
    while head < queue.len() {
        let e = queue[head];
        head += 1;
        for &g in gens {
            let s = ambient.add_index(e, g);
            if !member[s] {
                member[s] = true;
                queue.push(s);
            }
        }
    }
}

impl Subgroup {
    /// Builds a subgroup from an element set that is already known to be closed, choosing a
    /// greedy lexicographic generating set.
    pub fn from_indices(ambient: &GroupSpec, mut indices: Vec<usize>, weight: f64) -> Result<Subgroup> {
        check_weight(weight)?;
        indices.sort_unstable();
        indices.dedup();
        let mut member = vec![false; ambient.order()];
        member[0] = true;
        let mut generators = Vec::new();
        for &i in &indices {
            if i >= ambient.order() {
                return Err(invalid("element index outside the ambient group"));
            }
            if !member[i] {
                generators.push(ambient.element_at(i));
                close(ambient, &mut member, &[i]);
            }
        }
        if member_indices(&member) != indices {
            return Err(invalid("element set is not a subgroup"));
        }
        Ok(Subgroup { ambient: ambient.clone(), generators, indices, weight })
    }

    pub fn ambient(&self) -> &GroupSpec {
        &self.ambient
    }

    pub fn generators(&self) -> &[GroupElement] {
        &self.generators
    }

    /// Sorted ambient indices of the elements.
    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    pub fn elements(&self) -> Vec<GroupElement> {
        self.indices.iter().map(|&i| self.ambient.element_at(i)).collect()
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    pub fn weight(&self) -> f64 {
        self.weight
    }

    pub fn with_weight(&self, weight: f64) -> Result<Subgroup> {
        check_weight(weight)?;
        Ok(Subgroup { weight, ..self.clone() })
    }

    pub fn contains_index(&self, index: usize) -> bool {
        self.indices.binary_search(&index).is_ok()
    }

    pub fn contains(&self, e: &GroupElement) -> bool {
        self.ambient.is_valid(e) && self.contains_index(self.ambient.index_of(e))
    }

    /// Position of an ambient index inside [`Subgroup::indices`].
    pub fn position(&self, index: usize) -> Option<usize> {
        self.indices.binary_search(&index).ok()
    }

    pub fn is_subgroup_of(&self, other: &Subgroup) -> bool {
        self.ambient == other.ambient && self.indices.iter().all(|&i| other.contains_index(i))
    }

    /// The subgroup generated by `self` and one more element, keeping the weight.
    pub fn extended_by(&self, index: usize) -> Subgroup {
        let mut member = vec![false; self.ambient.order()];
        for &i in &self.indices {
            member[i] = true;
        }
        close(&self.ambient, &mut member, &[index]);
        let mut generators = self.generators.clone();
        generators.push(self.ambient.element_at(index));
        Subgroup {
            ambient: self.ambient.clone(),
            generators,
            indices: member_indices(&member),
            weight: self.weight,
        }
    }
}

/// One representative per coset of `sub` inside the ambient set, first the identity.
pub fn coset_transversal(ambient_elements: &[GroupElement], sub: &Subgroup) -> Result<Vec<GroupElement>> {
    let group = sub.ambient();
    let mut ambient: Vec<usize> = Vec::with_capacity(ambient_elements.len());
    for e in ambient_elements {
        group.check(e)?;
        ambient.push(group.index_of(e));
    }
    ambient.sort_unstable();
    ambient.dedup();
    if sub.indices().iter().any(|i| ambient.binary_search(i).is_err()) {
        return Err(Error::NotContained);
    }
    let mut covered = vec![false; group.order()];
    let mut reps = Vec::new();
    for &a in &ambient {
        if covered[a] {
            continue;
        }
        reps.push(group.element_at(a));
        for &s in sub.indices() {
            let t = group.add_index(a, s);
            if ambient.binary_search(&t).is_err() {
                return Err(invalid("ambient set is not closed under the subgroup"));
            }
            covered[t] = true;
        }
    }
    Ok(reps)
}

/// `s(Λ) = M / (w |Λ|)`.
pub fn covolume(mass: f64, sub: &Subgroup) -> f64 {
    mass / (sub.weight() * sub.len() as f64)
}

/// `s(Λ) = M / |Λ|` for the counting weight, exactly.
pub fn counting_covolume(mass: u64, sub: &Subgroup) -> Ratio<u64> {
    Ratio::new(mass, sub.len() as u64)
}

/// Weil's formula: `|∫F − Σ_cosets μ_Q Σ_Λ w F(χ+λ)|` with Haar measure of total mass `mass`
/// on the ambient group and `μ_Q = M / (#cosets · w · |Λ|)`.
pub fn weil_verify(mass: f64, sub: &Subgroup, f: &[Complex64]) -> Result<f64> {
    let group = sub.ambient();
    if f.len() != group.order() {
        return Err(shape(format!("function has {} values, group has {}", f.len(), group.order())));
    }
    let total: Complex64 = f.iter().sum::<Complex64>() * (mass / group.order() as f64);
    let reps = coset_transversal(&group.elements().collect::<Vec<_>>(), sub)?;
    let mu_q = mass / (reps.len() as f64 * sub.weight() * sub.len() as f64);
    let mut quotient = Complex64::new(0.0, 0.0);
    for r in &reps {
        let r = group.index_of(r);
        let inner: Complex64 = sub.indices().iter().map(|&l| f[group.add_index(r, l)]).sum();
        quotient += inner * sub.weight() * mu_q;
    }
    Ok((total - quotient).norm())
}

/// Every subgroup of `ambient`, each with counting weight, sorted by size and then by
/// element list.
pub fn enumerate_subgroups(ambient: &GroupSpec) -> Vec<Subgroup> {
    let trivial = subgroup_closure(ambient, &[], 1.0).expect("trivial subgroup");
    let mut seen: BTreeSet<Vec<usize>> = BTreeSet::new();
    seen.insert(trivial.indices.clone());
    let mut found = vec![trivial];
    let mut head = 0;
    while head < found.len() {
        let current = found[head].clone();
        head += 1;
        for p in 0..ambient.order() {
            if current.contains_index(p) {
                continue;
            }
            let bigger = current.extended_by(p);
            if seen.insert(bigger.indices.clone()) {
                found.push(bigger);
            }
        }
    }
    found.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.indices.cmp(&b.indices)));
    found
}

#[cfg(test)]
mod tests {
    use super::*;

    fn el(c: &[u64]) -> GroupElement {
        GroupElement::new(c.to_vec())
    }

    #[test]
    fn make_group_examples() {
        assert_eq!(make_group(&[6]).unwrap().order(), 6);
        let g = make_group(&[2, 3]).unwrap();
        assert_eq!(g.order(), 6);
        assert_eq!(g.exponent(), 6);
        assert!(matches!(make_group(&[0]), Err(Error::InvalidInput(_))));
        assert!(make_group(&[]).is_err());
        assert_eq!(make_group(&[1]).unwrap().order(), 1);
    }

    #[test]
    fn character_examples() {
        let z4 = make_group(&[4]).unwrap();
        assert_eq!(character(&z4, &el(&[1]), &el(&[1])).unwrap(), Complex64::new(0.0, 1.0));
        assert_eq!(character(&z4, &el(&[2]), &el(&[2])).unwrap(), Complex64::new(1.0, 0.0));
        let z23 = make_group(&[2, 3]).unwrap();
        let v = character(&z23, &el(&[1, 1]), &el(&[1, 1])).unwrap();
        let expected = Complex64::from_polar(1.0, 5.0 * core::f64::consts::PI / 3.0);
        assert!((v - expected).norm() < 1e-15);
        assert!(character(&z4, &el(&[4]), &el(&[0])).is_err());
    }

    #[test]
    fn closure_examples() {
        let a = make_group(&[6, 6]).unwrap();
        let s = subgroup_closure(&a, &[el(&[2, 0]), el(&[0, 3])], 1.0).unwrap();
        let expected: Vec<GroupElement> = [0, 2, 4]
            .iter()
            .flat_map(|&x| [0, 3].iter().map(move |&w| el(&[x, w])))
            .collect();
        assert_eq!(s.elements(), expected);

        let b = make_group(&[4, 4]).unwrap();
        assert_eq!(subgroup_closure(&b, &[], 1.0).unwrap().elements(), vec![el(&[0, 0])]);

        let c = make_group(&[2, 2]).unwrap();
        let s = subgroup_closure(&c, &[el(&[1, 1])], 1.0).unwrap();
        assert_eq!(s.elements(), vec![el(&[0, 0]), el(&[1, 1])]);

        assert!(subgroup_closure(&c, &[], 0.0).is_err());
        assert!(subgroup_closure(&c, &[], -1.0).is_err());
    }

    #[test]
    fn from_indices_recovers_closure() {
        let a = make_group(&[6, 6]).unwrap();
        let s = subgroup_closure(&a, &[el(&[2, 3])], 1.0).unwrap();
        let t = Subgroup::from_indices(&a, s.indices().to_vec(), 1.0).unwrap();
        assert_eq!(s.indices(), t.indices());
        let again = subgroup_closure(&a, t.generators(), 1.0).unwrap();
        assert_eq!(again.indices(), s.indices());
        assert!(Subgroup::from_indices(&a, vec![0, 1], 1.0).is_err());
    }

    #[test]
    fn transversal_examples() {
        let a = make_group(&[4, 4]).unwrap();
        let all: Vec<GroupElement> = a.elements().collect();
        let sub = subgroup_closure(&a, &[el(&[2, 0]), el(&[0, 2])], 1.0).unwrap();
        let reps = coset_transversal(&all, &sub).unwrap();
        assert_eq!(reps, vec![el(&[0, 0]), el(&[0, 1]), el(&[1, 0]), el(&[1, 1])]);

        let reps = coset_transversal(&sub.elements(), &sub).unwrap();
        assert_eq!(reps, vec![el(&[0, 0])]);

        let other = subgroup_closure(&a, &[el(&[1, 0])], 1.0).unwrap();
        assert_eq!(coset_transversal(&sub.elements(), &other), Err(Error::NotContained));
    }

    #[test]
    fn covolume_examples() {
        let a = make_group(&[6, 6]).unwrap();
        let s = subgroup_closure(&a, &[el(&[2, 0]), el(&[0, 3])], 1.0).unwrap();
        assert_eq!(covolume(6.0, &s), 1.0);
        let b = make_group(&[4, 4]).unwrap();
        let s = subgroup_closure(&b, &[el(&[1, 0]), el(&[0, 2])], 1.0).unwrap();
        assert_eq!(s.len(), 8);
        assert_eq!(covolume(4.0, &s), 0.5);
        assert_eq!(counting_covolume(4, &s), Ratio::new(1, 2));
        let full = subgroup_closure(&b, &[el(&[1, 0]), el(&[0, 1])], 0.25).unwrap();
        assert_eq!(covolume(4.0, &full), 1.0);
    }

    #[test]
    fn weil_examples() {
        let z2 = make_group(&[2, 2]).unwrap();
        let trivial = subgroup_closure(&z2, &[], 1.0).unwrap();
        let ones = vec![Complex64::new(1.0, 0.0); 4];
        assert!(weil_verify(2.0, &trivial, &ones).unwrap() < 1e-15);

        let a = make_group(&[6, 6]).unwrap();
        let s = subgroup_closure(&a, &[el(&[2, 0]), el(&[0, 3])], 1.0).unwrap();
        let mut indicator = vec![Complex64::new(0.0, 0.0); 36];
        for &i in s.indices() {
            indicator[a.add_index(i, 1)] = Complex64::new(1.0, 0.0);
        }
        assert!(weil_verify(6.0, &s, &indicator).unwrap() < 1e-10);
    }

    #[test]
    fn subgroup_counts() {
        // Z_2^2 has 5 subgroups, Z_4^2 has 15, Z_6^2 has 30.
        assert_eq!(enumerate_subgroups(&make_group(&[2, 2]).unwrap()).len(), 5);
        assert_eq!(enumerate_subgroups(&make_group(&[4, 4]).unwrap()).len(), 15);
        assert_eq!(enumerate_subgroups(&make_group(&[6, 6]).unwrap()).len(), 30);
    }

    #[test]
    fn index_arithmetic_matches_coordinates() {
        let g = make_group(&[2, 3, 4]).unwrap();
        for a in 0..g.order() {
            assert_eq!(g.index_of(&g.element_at(a)), a);
            for b in 0..g.order() {
                let sum = g.add(&g.element_at(a), &g.element_at(b));
                assert_eq!(g.add_index(a, b), g.index_of(&sum));
                let diff = g.sub(&g.element_at(a), &g.element_at(b));
                assert_eq!(g.sub_index(a, b), g.index_of(&diff));
            }
            assert_eq!(g.neg_index(a), g.index_of(&g.neg(&g.element_at(a))));
        }
    }
}
