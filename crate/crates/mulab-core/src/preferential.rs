//! Preferential structures with copies and an arbitrary binary relation.
//!
//! A structure carries indexed copies `<x,i>` of ground elements and a
//! relation `≺` on copies (`below ≺ above`). Nothing is assumed about `≺`:
//! no irreflexivity, no transitivity. `mu(X)` selects the elements of `X`
//! owning at least one copy that no copy of an `X`-element sits below.

use alloc::vec::Vec;
use core::fmt;

use crate::sets::{elements, ChoiceFunction, GroundSet, Mask, SetFamily};

/// Copies are capped so that per-copy domination sets fit one mask word.
pub const MAX_COPIES: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum StructureError {
    TooManyCopies { got: usize },
    DuplicateCopy { element: usize, index: u32 },
    UndeclaredCopy { element: usize, index: u32 },
    UnknownElement(usize),
    GroundMismatch,
}

impl fmt::Display for StructureError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StructureError::TooManyCopies { got } => {
                write!(f, "{got} copies exceed the limit of {MAX_COPIES}")
            }
            StructureError::DuplicateCopy { element, index } => {
                write!(f, "duplicate copy <{element},{index}>")
            }
            StructureError::UndeclaredCopy { element, index } => {
                write!(f, "relation endpoint <{element},{index}> is not a declared copy")
            }
            StructureError::UnknownElement(e) => write!(f, "element position {e} out of range"),
            StructureError::GroundMismatch => {
                write!(f, "structure and family use different ground sets")
            }
        }
    }
}

/// An indexed occurrence of a ground element.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct Copy {
    pub element: usize,
    pub index: u32,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PreferentialStructure {
    ground: GroundSet,
    copies: Vec<Copy>,
    /// Bit `i` of `below[j]`: copy `i ≺ copy j`.
    below: Vec<Mask>,
    /// Original relation edges `(below, above)` as copy positions, in
    /// insertion order, for serialization.
    edges: Vec<(usize, usize)>,
}

impl PreferentialStructure {
    /// Build from explicit copies and relation pairs `(below, above)`.
    pub fn new(
        ground: GroundSet,
        copies: Vec<Copy>,
        relation: &[(Copy, Copy)],
    ) -> Result<Self, StructureError> {
        if copies.len() > MAX_COPIES {
            return Err(StructureError::TooManyCopies { got: copies.len() });
        }
        for (i, c) in copies.iter().enumerate() {
            if c.element >= ground.len() {
                return Err(StructureError::UnknownElement(c.element));
            }
            if copies[..i].contains(c) {
                return Err(StructureError::DuplicateCopy { element: c.element, index: c.index });
            }
        }
        let pos = |c: &Copy| {
            copies.iter().position(|d| d == c).ok_or(StructureError::UndeclaredCopy {
                element: c.element,
                index: c.index,
            })
        };
        let mut below = alloc::vec![0 as Mask; copies.len()];
        let mut edges = Vec::with_capacity(relation.len());
        for (lo, hi) in relation {
            let (i, j) = (pos(lo)?, pos(hi)?);
            below[j] |= 1 << i;
            edges.push((i, j));
        }
        Ok(PreferentialStructure { ground, copies, below, edges })
    }

    /// One copy (index 0) per element; the relation is given on element
    /// labels. This is the injective base case.
    pub fn one_copy_from_labels(
        ground: GroundSet,
        relation: &[(&str, &str)],
    ) -> Result<Self, StructureError> {
        let copies: Vec<Copy> =
            (0..ground.len()).map(|e| Copy { element: e, index: 0 }).collect();
        let mut rel = Vec::with_capacity(relation.len());
        for (lo, hi) in relation {
            let find = |l: &str| {
                ground
                    .index_of(l)
                    .map(|element| Copy { element, index: 0 })
                    .ok_or(StructureError::UnknownElement(usize::MAX))
            };
            rel.push((find(lo)?, find(hi)?));
        }
        PreferentialStructure::new(ground, copies, &rel)
    }

    pub fn ground(&self) -> &GroundSet {
        &self.ground
    }

    pub fn copies(&self) -> &[Copy] {
        &self.copies
    }

    pub fn edges(&self) -> impl Iterator<Item = (Copy, Copy)> + '_ {
        self.edges.iter().map(|&(i, j)| (self.copies[i], self.copies[j]))
    }

    pub fn is_one_copy(&self) -> bool {
        let mut seen: Mask = 0;
        for c in &self.copies {
            if seen & (1 << c.element) != 0 {
                return false;
            }
            seen |= 1 << c.element;
        }
        true
    }

    /// Copies whose element lies in `x`, as a bit mask over copy positions.
    fn copies_in(&self, x: Mask) -> Mask {
        let mut m = 0;
        for (j, c) in self.copies.iter().enumerate() {
            if x & (1 << c.element) != 0 {
                m |= 1 << j;
            }
        }
        m
    }

    /// The set of minimal elements of `x`.
    ///
    /// `x ∈ mu(X)` iff some copy of `x` has no copy of an `X`-element below
    /// it. Elements without copies never appear in the output.
    pub fn mu(&self, x: Mask) -> Mask {
        let live = self.copies_in(x);
        let mut out = 0;
        for (j, c) in self.copies.iter().enumerate() {
            if live & (1 << j) != 0 && self.below[j] & live == 0 {
                out |= 1 << c.element;
            }
        }
        out
    }

    /// The copy-free variant of `mu`, defined only for one-copy structures:
    /// `{x ∈ X ∩ U : no x' ∈ X ∩ U with x' ≺ x}`.
    pub fn mu_without_copies(&self, x: Mask) -> Option<Mask> {
        if !self.is_one_copy() {
            return None;
        }
        let live = self.copies_in(x);
        let mut out = 0;
        for (j, c) in self.copies.iter().enumerate() {
            if live & (1 << j) != 0 && self.below[j] & live == 0 {
                out |= 1 << c.element;
            }
        }
        Some(out)
    }

    /// Relation properties of `≺` itself.
    pub fn relation_properties(&self) -> RelationProperties {
        let n = self.copies.len();
        let mut transitive = true;
        'outer: for j in 0..n {
            for i in elements(self.below[j]) {
                if self.below[i] & !self.below[j] != 0 {
                    transitive = false;
                    break 'outer;
                }
            }
        }
        let irreflexive = (0..n).all(|j| self.below[j] & (1 << j) == 0);
        RelationProperties { transitive, irreflexive }
    }

    /// The same structure with `≺` replaced by its transitive closure.
    pub fn transitive_closure(&self) -> Self {
        let n = self.copies.len();
        let mut below = self.below.clone();
        loop {
            let mut changed = false;
            for j in 0..n {
                let mut acc = below[j];
                for i in elements(below[j]) {
                    acc |= below[i];
                }
                if acc != below[j] {
                    below[j] = acc;
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }
        let mut edges = Vec::new();
        for j in 0..n {
            for i in elements(below[j]) {
                edges.push((i, j));
            }
        }
        PreferentialStructure {
            ground: self.ground.clone(),
            copies: self.copies.clone(),
            below,
            edges,
        }
    }

    /// Smoothness over `family`: in every member `X`, every copy of an
    /// `X`-element is either undominated within `X` or dominated by some copy
    /// that is itself undominated within `X`.
    ///
    /// The witness on failure is the member and the stranded copy, i.e. one
    /// with only non-minimal dominators.
    pub fn is_smooth(&self, family: &SetFamily) -> Result<SmoothReport, StructureError> {
        if family.ground() != &self.ground {
            return Err(StructureError::GroundMismatch);
        }
        for &x in family.members() {
            let live = self.copies_in(x);
            for j in elements(live) {
                let doms = self.below[j] & live;
                if doms == 0 {
                    continue;
                }
                let ok = elements(doms).any(|k| self.below[k] & live == 0);
                if !ok {
                    return Ok(SmoothReport {
                        witness: Some(SmoothWitness { set: x, copy: self.copies[j] }),
                    });
                }
            }
        }
        Ok(SmoothReport { witness: None })
    }

    /// Restrict `mu` to a family, memoizing one value per member.
    pub fn induced_choice(&self, family: &SetFamily) -> Result<ChoiceFunction, StructureError> {
        if family.ground() != &self.ground {
            return Err(StructureError::GroundMismatch);
        }
        let table: Vec<Mask> = family.members().iter().map(|&m| self.mu(m)).collect();
        ChoiceFunction::from_table(family.clone(), table).map_err(|_| StructureError::GroundMismatch)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RelationProperties {
    pub transitive: bool,
    pub irreflexive: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SmoothWitness {
    pub set: Mask,
    pub copy: Copy,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SmoothReport {
    pub witness: Option<SmoothWitness>,
}

impl SmoothReport {
    pub fn is_smooth(&self) -> bool {
        self.witness.is_none()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn ground(labels: &[&str]) -> GroundSet {
        GroundSet::new(labels.iter().copied()).unwrap()
    }

    #[test]
    fn empty_relation_leaves_everything_minimal() {
        let g = ground(&["a", "b", "c"]);
        let s = PreferentialStructure::one_copy_from_labels(g.clone(), &[]).unwrap();
        let x = g.mask_of(["a", "c"]).unwrap();
        assert_eq!(s.mu(x), x);
        let props = s.relation_properties();
        assert!(props.transitive && props.irreflexive);
    }

    #[test]
    fn chain_without_transitive_closure() {
        // c ≺ b ≺ a, one copy each, no closure: mu({a,b,c}) = {c}.
        let g = ground(&["a", "b", "c"]);
        let s = PreferentialStructure::one_copy_from_labels(g.clone(), &[("c", "b"), ("b", "a")])
            .unwrap();
        assert_eq!(s.mu(g.full_mask()), g.mask_of(["c"]).unwrap());
        let props = s.relation_properties();
        assert!(!props.transitive);
        assert!(props.irreflexive);
        // mu({a,c}) = {a,c}: b is absent and the relation is not transitive.
        let ac = g.mask_of(["a", "c"]).unwrap();
        assert_eq!(s.mu(ac), ac);
    }

    #[test]
    fn elements_without_copies_never_selected() {
        let g = ground(&["a", "b"]);
        let copies = vec![Copy { element: 0, index: 0 }];
        let s = PreferentialStructure::new(g.clone(), copies, &[]).unwrap();
        assert_eq!(s.mu(g.full_mask()), g.mask_of(["a"]).unwrap());
    }

    #[test]
    fn one_copy_agreement_with_copy_free_mu() {
        let g = ground(&["a", "b", "c"]);
        let s = PreferentialStructure::one_copy_from_labels(g.clone(), &[("a", "b"), ("b", "c")])
            .unwrap();
        for x in 0..8u64 {
            assert_eq!(s.mu(x), s.mu_without_copies(x).unwrap());
        }
    }

    #[test]
    fn two_copy_cycle_is_not_smooth() {
        // Two copies of e dominating each other: neither dominator is
        // minimal, so {e} violates smoothness at copy <e,0>.
        let g = ground(&["e"]);
        let c0 = Copy { element: 0, index: 0 };
        let c1 = Copy { element: 0, index: 1 };
        let s = PreferentialStructure::new(g.clone(), vec![c0, c1], &[(c0, c1), (c1, c0)])
            .unwrap();
        let fam = SetFamily::new(g.clone(), vec![("X", 0b1)]).unwrap();
        let report = s.is_smooth(&fam).unwrap();
        let w = report.witness.unwrap();
        assert_eq!(w.set, 0b1);
        assert_eq!(w.copy, c0);
        // mu({e}) is empty even though {e} is not.
        assert_eq!(s.mu(0b1), 0);
    }

    #[test]
    fn empty_relation_is_smooth_for_any_family() {
        let g = ground(&["a", "b"]);
        let s = PreferentialStructure::one_copy_from_labels(g.clone(), &[]).unwrap();
        let fam = SetFamily::full_powerset(g);
        assert!(s.is_smooth(&fam).unwrap().is_smooth());
    }

    #[test]
    fn transitive_closure_adds_skips() {
        let g = ground(&["a", "b", "c"]);
        let s = PreferentialStructure::one_copy_from_labels(g.clone(), &[("a", "b"), ("b", "c")])
            .unwrap();
        let t = s.transitive_closure();
        assert!(t.relation_properties().transitive);
        // After closure a ≺ c, so mu({a,c}) = {a}.
        let ac = g.mask_of(["a", "c"]).unwrap();
        assert_eq!(t.mu(ac), g.mask_of(["a"]).unwrap());
    }

    #[test]
    fn induced_choice_tabulates_mu() {
        let g = ground(&["a", "b"]);
        let s = PreferentialStructure::one_copy_from_labels(g.clone(), &[("a", "b")]).unwrap();
        let fam = SetFamily::full_powerset(g.clone());
        let f = s.induced_choice(&fam).unwrap();
        assert_eq!(f.eval(0b11).unwrap(), g.mask_of(["a"]).unwrap());
        assert_eq!(f.eval(0b10).unwrap(), 0b10);
        let empty_fam = SetFamily::new(g, Vec::<(&str, Mask)>::new()).unwrap();
        let f2 = s.induced_choice(&empty_fam).unwrap();
        assert!(f2.table().is_empty());
    }
}
