//! Finitely generated abelian groups in canonical form `Z^d x Z_m1 x ... x Z_mr`,
//! their elements, and finite subsets with sumsets and expansion ratios.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{int, Rational};

/// The ambient group `Z^free_rank x prod Z_{torsion[j]}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GroupSpec {
    pub free_rank: usize,
    pub torsion: Vec<i64>,
}

impl GroupSpec {
    pub fn new(free_rank: usize, torsion: Vec<i64>) -> Result<Self> {
        if let Some(m) = torsion.iter().find(|&&m| m < 2) {
            return Err(Error::Spec(format!("torsion modulus {m} is smaller than 2")));
        }
        Ok(GroupSpec { free_rank, torsion })
    }

    /// The integers.
    pub fn integers() -> Self {
        GroupSpec {
            free_rank: 1,
            torsion: Vec::new(),
        }
    }

    pub fn lattice(d: usize) -> Self {
        GroupSpec {
            free_rank: d,
            torsion: Vec::new(),
        }
    }

    /// Number of coordinates of a flattened element: free coordinates first.
    pub fn arity(&self) -> usize {
        self.free_rank + self.torsion.len()
    }

    pub fn torsion_order(&self) -> i64 {
        self.torsion.iter().product()
    }

    pub fn is_infinite(&self) -> bool {
        self.free_rank >= 1
    }

    /// Means and densities only make sense on infinite groups.
    pub fn require_infinite(&self) -> Result<()> {
        if self.is_infinite() {
            Ok(())
        } else {
            Err(Error::Spec("a group of free rank 0 is finite; free rank >= 1 required".into()))
        }
    }

    pub fn require_integers(&self) -> Result<()> {
        if self.free_rank == 1 && self.torsion.is_empty() {
            Ok(())
        } else {
            Err(Error::Spec(format!("operation needs the group Z, got {self}")))
        }
    }

    pub fn check_same(&self, other: &GroupSpec) -> Result<()> {
        if self == other {
            Ok(())
        } else {
            Err(Error::Spec(format!("mismatched groups {self} and {other}")))
        }
    }

    pub fn zero(&self) -> GroupElement {
        GroupElement {
            free: vec![0; self.free_rank],
            tors: vec![0; self.torsion.len()],
        }
    }

    /// Builds an element, reducing torsion residues into `[0, m_j)`.
    pub fn element(&self, free: Vec<i64>, tors: Vec<i64>) -> Result<GroupElement> {
        if free.len() != self.free_rank || tors.len() != self.torsion.len() {
            return Err(Error::Spec(format!(
                "element with {} free and {} torsion coordinates does not belong to {self}",
                free.len(),
                tors.len()
            )));
        }
        let tors = tors
            .iter()
            .zip(&self.torsion)
            .map(|(&r, &m)| r.rem_euclid(m))
            .collect();
        Ok(GroupElement { free, tors })
    }

    /// Builds an element from the flat `[free..., tors...]` layout.
    pub fn from_flat(&self, coords: &[i64]) -> Result<GroupElement> {
        if coords.len() != self.arity() {
            return Err(Error::Spec(format!(
                "element {coords:?} has {} coordinates, {self} needs {}",
                coords.len(),
                self.arity()
            )));
        }
        let (free, tors) = coords.split_at(self.free_rank);
        self.element(free.to_vec(), tors.to_vec())
    }

    /// Shorthand for an element of `Z`.
    pub fn int(&self, x: i64) -> GroupElement {
        self.from_flat(&[x]).expect("group of arity one")
    }

    pub fn add(&self, a: &GroupElement, b: &GroupElement) -> GroupElement {
        GroupElement {
            free: a.free.iter().zip(&b.free).map(|(x, y)| x + y).collect(),
            tors: a
                .tors
                .iter()
                .zip(&b.tors)
                .zip(&self.torsion)
                .map(|((x, y), m)| (x + y).rem_euclid(*m))
                .collect(),
        }
    }

    pub fn neg(&self, a: &GroupElement) -> GroupElement {
        GroupElement {
            free: a.free.iter().map(|x| -x).collect(),
            tors: a
                .tors
                .iter()
                .zip(&self.torsion)
                .map(|(x, m)| (-x).rem_euclid(*m))
                .collect(),
        }
    }

    pub fn sub(&self, a: &GroupElement, b: &GroupElement) -> GroupElement {
        self.add(a, &self.neg(b))
    }

    pub fn scale(&self, a: &GroupElement, k: i64) -> GroupElement {
        GroupElement {
            free: a.free.iter().map(|x| x * k).collect(),
            tors: a
                .tors
                .iter()
                .zip(&self.torsion)
                .map(|(x, m)| (x * k).rem_euclid(*m))
                .collect(),
        }
    }

    /// All elements of the torsion factor in lexicographic order.
    pub fn torsion_elements(&self) -> Vec<Vec<i64>> {
        mixed_radix(&self.torsion)
    }
}

impl fmt::Display for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        match self.free_rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            d => parts.push(format!("Z^{d}")),
        }
        parts.extend(self.torsion.iter().map(|m| format!("Z_{m}")));
        if parts.is_empty() {
            write!(f, "{{0}}")
        } else {
            write!(f, "{}", parts.join(" x "))
        }
    }
}

/// All vectors `v` with `0 <= v[i] < radix[i]`, lexicographic.
pub(crate) fn mixed_radix(radix: &[i64]) -> Vec<Vec<i64>> {
    let total: i64 = radix.iter().product();
    let mut out = Vec::with_capacity(total.max(0) as usize);
    let mut cur = vec![0i64; radix.len()];
    for _ in 0..total {
        out.push(cur.clone());
        for i in (0..radix.len()).rev() {
            cur[i] += 1;
            if cur[i] < radix[i] {
                break;
            }
            cur[i] = 0;
        }
    }
    out
}

/// An element of a [`GroupSpec`]. Ordering is lexicographic on free
/// coordinates, then torsion residues.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroupElement {
    pub free: Vec<i64>,
    pub tors: Vec<i64>,
}

impl GroupElement {
    pub fn flat(&self) -> Vec<i64> {
        self.free.iter().chain(&self.tors).copied().collect()
    }

    /// Largest absolute value of a free coordinate.
    pub fn free_norm(&self) -> i64 {
        self.free.iter().map(|x| x.abs()).max().unwrap_or(0)
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let flat = self.flat();
        if flat.len() == 1 {
            write!(f, "{}", flat[0])
        } else {
            let parts: Vec<String> = flat.iter().map(|x| x.to_string()).collect();
            write!(f, "({})", parts.join(","))
        }
    }
}

/// A finite subset of a group, kept sorted and deduplicated.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteSubset {
    group: GroupSpec,
    elements: Vec<GroupElement>,
}

impl FiniteSubset {
    pub fn new(group: &GroupSpec, elements: impl IntoIterator<Item = GroupElement>) -> Result<Self> {
        let mut elements: Vec<GroupElement> = elements
            .into_iter()
            .map(|e| group.element(e.free, e.tors))
            .collect::<Result<_>>()?;
        elements.sort();
        elements.dedup();
        Ok(FiniteSubset {
            group: group.clone(),
            elements,
        })
    }

    pub fn from_flat(group: &GroupSpec, coords: &[Vec<i64>]) -> Result<Self> {
        let elems = coords
            .iter()
            .map(|c| group.from_flat(c))
            .collect::<Result<Vec<_>>>()?;
        Self::new(group, elems)
    }

    /// A subset of `Z` from integers.
    pub fn integers(values: impl IntoIterator<Item = i64>) -> Self {
        let g = GroupSpec::integers();
        let elems: Vec<GroupElement> = values.into_iter().map(|x| g.int(x)).collect();
        Self::new(&g, elems).expect("integers form a subset of Z")
    }

    /// `{lo, ..., hi}` in `Z`.
    pub fn interval(lo: i64, hi: i64) -> Self {
        Self::integers(lo..=hi)
    }

    /// `{0..side-1}^d x torsion`.
    pub fn box_set(group: &GroupSpec, side: i64) -> Self {
        Self::offset_box(group, 0, side)
    }

    /// `{start..start+side-1}^d x torsion`.
    pub fn offset_box(group: &GroupSpec, start: i64, side: i64) -> Self {
        let free = mixed_radix(&vec![side.max(0); group.free_rank]);
        let tors = group.torsion_elements();
        let mut elements = Vec::with_capacity(free.len() * tors.len());
        for fr in &free {
            for t in &tors {
                elements.push(GroupElement {
                    free: fr.iter().map(|x| x + start).collect(),
                    tors: t.clone(),
                });
            }
        }
        FiniteSubset {
            group: group.clone(),
            elements,
        }
    }

    pub fn group(&self) -> &GroupSpec {
        &self.group
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[GroupElement] {
        &self.elements
    }

    pub fn iter(&self) -> impl Iterator<Item = &GroupElement> {
        self.elements.iter()
    }

    pub fn contains(&self, x: &GroupElement) -> bool {
        self.elements.binary_search(x).is_ok()
    }

    pub fn require_nonempty(&self, what: &str) -> Result<()> {
        if self.is_empty() {
            Err(Error::Domain(format!("{what} must be a nonempty finite set")))
        } else {
            Ok(())
        }
    }

    /// Largest absolute free coordinate over the set.
    pub fn free_radius(&self) -> i64 {
        self.elements.iter().map(GroupElement::free_norm).max().unwrap_or(0)
    }

    pub fn translate(&self, t: &GroupElement) -> FiniteSubset {
        let mut elements: Vec<_> = self.elements.iter().map(|x| self.group.add(x, t)).collect();
        elements.sort();
        FiniteSubset {
            group: self.group.clone(),
            elements,
        }
    }

    pub fn to_flat(&self) -> Vec<Vec<i64>> {
        self.elements.iter().map(GroupElement::flat).collect()
    }
}

impl fmt::Display for FiniteSubset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.elements.iter().map(|e| e.to_string()).collect();
        write!(f, "[{}]", parts.join(","))
    }
}

/// `X + Y = {x + y}`, deduplicated.
pub fn sumset(x: &FiniteSubset, y: &FiniteSubset) -> Result<FiniteSubset> {
    x.group.check_same(&y.group)?;
    let g = &x.group;
    let mut out = Vec::with_capacity(x.len() * y.len());
    for a in &x.elements {
        for b in &y.elements {
            out.push(g.add(a, b));
        }
    }
    out.sort();
    out.dedup();
    Ok(FiniteSubset {
        group: g.clone(),
        elements: out,
    })
}

/// `X - Y = {x - y}`, deduplicated.
pub fn difference_set(x: &FiniteSubset, y: &FiniteSubset) -> Result<FiniteSubset> {
    x.group.check_same(&y.group)?;
    let neg: Vec<_> = y.elements.iter().map(|b| y.group.neg(b)).collect();
    let neg = FiniteSubset::new(&y.group, neg)?;
    sumset(x, &neg)
}

/// `|B + T| / |B|` as an exact rational. Always at least 1.
pub fn expansion_ratio(b: &FiniteSubset, t: &FiniteSubset) -> Result<Rational> {
    b.require_nonempty("B")?;
    t.require_nonempty("T")?;
    let s = sumset(b, t)?;
    Ok(int(s.len() as i64) / int(b.len() as i64))
}

impl PartialOrd for FiniteSubset {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for FiniteSubset {
    fn cmp(&self, other: &Self) -> Ordering {
        self.elements.cmp(&other.elements)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    #[test]
    fn sumset_examples() {
        let s = sumset(&FiniteSubset::integers([0, 2, 3]), &FiniteSubset::integers([0, 1])).unwrap();
        assert_eq!(s, FiniteSubset::integers(0..=4));
        let s = sumset(&FiniteSubset::integers([0, 5]), &FiniteSubset::integers([0, 1])).unwrap();
        assert_eq!(s, FiniteSubset::integers([0, 1, 5, 6]));
    }

    #[test]
    fn sumset_in_finite_cyclic_group() {
        let z4 = GroupSpec::new(0, vec![4]).unwrap();
        let x = FiniteSubset::from_flat(&z4, &[vec![1]]).unwrap();
        let y = FiniteSubset::from_flat(&z4, &[vec![3]]).unwrap();
        assert_eq!(sumset(&x, &y).unwrap(), FiniteSubset::from_flat(&z4, &[vec![0]]).unwrap());
    }

    #[test]
    fn mismatched_groups_rejected() {
        let z2 = FiniteSubset::box_set(&GroupSpec::lattice(2), 2);
        let z = FiniteSubset::interval(0, 1);
        assert!(matches!(sumset(&z, &z2), Err(Error::Spec(_))));
    }

    #[test]
    fn expansion_ratio_examples() {
        let t01 = FiniteSubset::integers([0, 1]);
        assert_eq!(expansion_ratio(&FiniteSubset::interval(0, 8), &t01).unwrap(), rat(10, 9));
        assert_eq!(expansion_ratio(&FiniteSubset::integers([0, 5]), &t01).unwrap(), int(2));
        assert_eq!(
            expansion_ratio(&FiniteSubset::interval(0, 99), &FiniteSubset::interval(-2, 2)).unwrap(),
            rat(26, 25)
        );
    }

    #[test]
    fn expansion_ratio_rejects_empty() {
        let empty = FiniteSubset::integers([]);
        assert!(matches!(
            expansion_ratio(&empty, &FiniteSubset::integers([0])),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn torsion_reduced_and_bad_modulus_rejected() {
        let g = GroupSpec::new(1, vec![3]).unwrap();
        let e = g.from_flat(&[4, -1]).unwrap();
        assert_eq!(e.tors, vec![2]);
        assert!(GroupSpec::new(1, vec![1]).is_err());
    }

    #[test]
    fn boxes_include_torsion() {
        let g = GroupSpec::new(2, vec![2]).unwrap();
        assert_eq!(FiniteSubset::box_set(&g, 3).len(), 18);
    }
}
