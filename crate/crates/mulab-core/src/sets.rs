//! Ground sets, subsets as bit masks, named set families and choice functions.
//!
//! A [`GroundSet`] fixes an ordered list of distinct labels; every subset is a
//! [`Mask`] whose bit `i` is the element at position `i`. All set algebra is
//! word-level, which is what keeps the exhaustive quantifier loops in
//! [`crate::conditions`] and [`crate::search`] cheap. The ground set is frozen
//! once a family is built; families deduplicate members by extension and keep
//! names as metadata only.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

/// A subset of a ground set, one bit per element position.
pub type Mask = u64;

/// Maximum number of elements a ground set may carry (one mask word).
pub const MAX_GROUND: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SetError {
    TooManyElements { got: usize },
    DuplicateLabel(String),
    UnknownLabel(String),
    DuplicateName(String),
    NotSubsetOfGround { name: String },
    NotInDomain { set: Mask },
    GroundMismatch,
}

impl fmt::Display for SetError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SetError::TooManyElements { got } => {
                write!(f, "ground set has {got} elements, the limit is {MAX_GROUND}")
            }
            SetError::DuplicateLabel(l) => write!(f, "duplicate ground label {l:?}"),
            SetError::UnknownLabel(l) => write!(f, "unknown ground label {l:?}"),
            SetError::DuplicateName(n) => write!(f, "duplicate member name {n:?}"),
            SetError::NotSubsetOfGround { name } => {
                write!(f, "member {name:?} is not a subset of the ground set")
            }
            SetError::NotInDomain { set } => {
                write!(f, "not-in-domain: set {set:#x} is not a family member")
            }
            SetError::GroundMismatch => write!(f, "operands built over different ground sets"),
        }
    }
}

/// A finite, ordered universe of distinct labels.
///
/// Iteration order is the declared order and is what the bit positions of a
/// [`Mask`] refer to, so it is stable across runs by construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroundSet {
    labels: Vec<String>,
}

impl GroundSet {
    pub fn new<I, S>(labels: I) -> Result<Self, SetError>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let labels: Vec<String> = labels.into_iter().map(Into::into).collect();
        if labels.len() > MAX_GROUND {
            return Err(SetError::TooManyElements { got: labels.len() });
        }
        for (i, l) in labels.iter().enumerate() {
            if labels[..i].contains(l) {
                return Err(SetError::DuplicateLabel(l.clone()));
            }
        }
        Ok(GroundSet { labels })
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    /// The subset containing every element.
    pub fn full_mask(&self) -> Mask {
        if self.labels.len() == MAX_GROUND {
            !0
        } else {
            (1u64 << self.labels.len()) - 1
        }
    }

    pub fn mask_of<'a, I: IntoIterator<Item = &'a str>>(&self, labels: I) -> Result<Mask, SetError> {
        let mut m = 0;
        for l in labels {
            match self.index_of(l) {
                Some(i) => m |= 1 << i,
                None => return Err(SetError::UnknownLabel(l.into())),
            }
        }
        Ok(m)
    }

    /// Labels of a mask, in ground order.
    pub fn labels_of(&self, m: Mask) -> Vec<&str> {
        self.labels
            .iter()
            .enumerate()
            .filter(|(i, _)| m & (1 << i) != 0)
            .map(|(_, l)| l.as_str())
            .collect()
    }
}

/// Iterate the element positions of a mask, lowest first.
pub fn elements(mut m: Mask) -> impl Iterator<Item = usize> {
    core::iter::from_fn(move || {
        if m == 0 {
            None
        } else {
            let i = m.trailing_zeros() as usize;
            m &= m - 1;
            Some(i)
        }
    })
}

/// A finite named family of subsets of one ground set.
///
/// Members are stored deduplicated by extension and sorted ascending by mask
/// value; that ordering is the canonical member order used everywhere
/// (witness selection, enumeration, serialization).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SetFamily {
    ground: GroundSet,
    names: Vec<String>,
    members: Vec<Mask>,
}

impl SetFamily {
    pub fn new<I, S>(ground: GroundSet, entries: I) -> Result<Self, SetError>
    where
        I: IntoIterator<Item = (S, Mask)>,
        S: Into<String>,
    {
        let full = ground.full_mask();
        let mut pairs: Vec<(String, Mask)> = Vec::new();
        for (name, mask) in entries {
            let name = name.into();
            if mask & !full != 0 {
                return Err(SetError::NotSubsetOfGround { name });
            }
            if pairs.iter().any(|(n, _)| *n == name) {
                return Err(SetError::DuplicateName(name));
            }
            // Dedup by extension: the first name for a given subset wins.
            if !pairs.iter().any(|(_, m)| *m == mask) {
                pairs.push((name, mask));
            }
        }
        pairs.sort_by_key(|(_, m)| *m);
        let (names, members) = pairs.into_iter().unzip();
        Ok(SetFamily { ground, names, members })
    }

    /// Family over `ground` containing every subset.
    pub fn full_powerset(ground: GroundSet) -> Self {
        let n = ground.len();
        let mut names = Vec::with_capacity(1 << n);
        let mut members = Vec::with_capacity(1 << n);
        for m in 0..(1u64 << n) {
            let mut name = String::from("s");
            push_u64(&mut name, m);
            names.push(name);
            members.push(m);
        }
        SetFamily { ground, names, members }
    }

    pub fn ground(&self) -> &GroundSet {
        &self.ground
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn members(&self) -> &[Mask] {
        &self.members
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }

    pub fn member(&self, i: usize) -> Mask {
        self.members[i]
    }

    /// Position of a subset in canonical member order.
    pub fn position(&self, m: Mask) -> Option<usize> {
        self.members.binary_search(&m).ok()
    }

    pub fn contains_member(&self, m: Mask) -> bool {
        self.position(m).is_some()
    }

    pub fn mask_by_name(&self, name: &str) -> Option<Mask> {
        self.names.iter().position(|n| n == name).map(|i| self.members[i])
    }

    /// Name of a member if it has one (members are always named).
    pub fn name_of(&self, m: Mask) -> Option<&str> {
        self.position(m).map(|i| self.names[i].as_str())
    }
}

fn push_u64(out: &mut String, mut v: u64) {
    let mut digits = [0u8; 20];
    let mut n = 0;
    loop {
        digits[n] = b'0' + (v % 10) as u8;
        v /= 10;
        n += 1;
        if v == 0 {
            break;
        }
    }
    for i in (0..n).rev() {
        out.push(digits[i] as char);
    }
}

/// The four closure predicates a family may satisfy.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ClosureOp {
    FiniteIntersection,
    FiniteUnion,
    SetDifference,
    Complement,
}

impl ClosureOp {
    pub fn tag(self) -> &'static str {
        match self {
            ClosureOp::FiniteIntersection => "finite-intersection",
            ClosureOp::FiniteUnion => "finite-union",
            ClosureOp::SetDifference => "set-difference",
            ClosureOp::Complement => "complement",
        }
    }
}

/// A violating pair and the set the family is missing.
///
/// For the unary complement operation both pair slots carry the same member.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClosureWitness {
    pub left: Mask,
    pub right: Mask,
    pub missing: Mask,
}

/// Check whether `family` is closed under `op`; on failure return the first
/// violating pair in canonical member order.
pub fn is_closed_under(family: &SetFamily, op: ClosureOp) -> Option<ClosureWitness> {
    let members = family.members();
    let full = family.ground().full_mask();
    match op {
        ClosureOp::Complement => {
            for &a in members {
                let missing = full & !a;
                if !family.contains_member(missing) {
                    return Some(ClosureWitness { left: a, right: a, missing });
                }
            }
            None
        }
        _ => {
            for &a in members {
                for &b in members {
                    let missing = match op {
                        ClosureOp::FiniteIntersection => a & b,
                        ClosureOp::FiniteUnion => a | b,
                        ClosureOp::SetDifference => a & !b,
                        ClosureOp::Complement => unreachable!(),
                    };
                    if !family.contains_member(missing) {
                        return Some(ClosureWitness { left: a, right: b, missing });
                    }
                }
            }
            None
        }
    }
}

/// Least superset of `family` closed under pairwise (hence arbitrary)
/// intersection. The empty set is kept if it arises.
///
/// Every new member equals the intersection of all input members containing
/// it, so its name is the canonical join of those input names.
pub fn close_under_intersections(family: &SetFamily) -> SetFamily {
    let mut sets: Vec<Mask> = family.members().to_vec();
    let mut frontier: Vec<Mask> = sets.clone();
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for &a in &frontier {
            for &b in family.members() {
                let c = a & b;
                if !sets.contains(&c) && !next.contains(&c) {
                    next.push(c);
                }
            }
        }
        sets.extend_from_slice(&next);
        frontier = next;
    }
    sets.sort_unstable();
    let mut entries: Vec<(String, Mask)> = Vec::with_capacity(sets.len());
    for &s in &sets {
        let name = match family.name_of(s) {
            Some(n) => String::from(n),
            None => {
                let mut joined = String::new();
                for (i, &m) in family.members().iter().enumerate() {
                    if s & !m == 0 {
                        if !joined.is_empty() {
                            joined.push('∩');
                        }
                        joined.push_str(family.name(i));
                    }
                }
                joined
            }
        };
        entries.push((name, s));
    }
    SetFamily::new(family.ground().clone(), entries)
        .expect("closure of a valid family is valid")
}

/// A (total-on-its-domain) choice function `f: family -> P(ground)`.
///
/// Outputs are subsets of the ground set and are not required to be family
/// members themselves.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChoiceFunction {
    family: SetFamily,
    table: Vec<Mask>,
}

impl ChoiceFunction {
    /// Build from explicit `(member, value)` entries; every family member
    /// must be covered exactly once.
    pub fn new(family: SetFamily, entries: &[(Mask, Mask)]) -> Result<Self, SetError> {
        let full = family.ground().full_mask();
        let mut table: Vec<Option<Mask>> = alloc::vec![None; family.len()];
        for &(m, v) in entries {
            let idx = family.position(m).ok_or(SetError::NotInDomain { set: m })?;
            if v & !full != 0 {
                return Err(SetError::NotSubsetOfGround { name: String::from("choice value") });
            }
            table[idx] = Some(v);
        }
        let table: Option<Vec<Mask>> = table.into_iter().collect();
        match table {
            Some(table) => Ok(ChoiceFunction { family, table }),
            None => Err(SetError::NotInDomain { set: 0 }),
        }
    }

    /// Build from a value table aligned with the family's canonical order.
    pub fn from_table(family: SetFamily, table: Vec<Mask>) -> Result<Self, SetError> {
        if table.len() != family.len() {
            return Err(SetError::GroundMismatch);
        }
        let full = family.ground().full_mask();
        if table.iter().any(|&v| v & !full != 0) {
            return Err(SetError::NotSubsetOfGround { name: String::from("choice value") });
        }
        Ok(ChoiceFunction { family, table })
    }

    /// The identity choice on a family.
    pub fn identity(family: SetFamily) -> Self {
        let table = family.members().to_vec();
        ChoiceFunction { family, table }
    }

    pub fn family(&self) -> &SetFamily {
        &self.family
    }

    pub fn table(&self) -> &[Mask] {
        &self.table
    }

    pub fn value_at(&self, idx: usize) -> Mask {
        self.table[idx]
    }

    /// In-place table update for the enumeration scratch function.
    pub(crate) fn set_value(&mut self, idx: usize, v: Mask) {
        debug_assert_eq!(v & !self.family.ground().full_mask(), 0);
        self.table[idx] = v;
    }

    /// Image of a family member; `not-in-domain` for anything else.
    pub fn eval(&self, x: Mask) -> Result<Mask, SetError> {
        self.family
            .position(x)
            .map(|i| self.table[i])
            .ok_or(SetError::NotInDomain { set: x })
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
    fn ground_rejects_duplicates() {
        assert_eq!(
            GroundSet::new(["a", "a"]),
            Err(SetError::DuplicateLabel("a".into()))
        );
    }

    #[test]
    fn masks_round_trip_labels() {
        let g = ground(&["a", "b", "c"]);
        let m = g.mask_of(["a", "c"]).unwrap();
        assert_eq!(m, 0b101);
        assert_eq!(g.labels_of(m), vec!["a", "c"]);
        assert!(g.mask_of(["d"]).is_err());
    }

    #[test]
    fn family_dedups_by_extension_and_sorts() {
        let g = ground(&["a", "b"]);
        let fam = SetFamily::new(
            g.clone(),
            vec![("B", 0b11), ("A", 0b01), ("A2", 0b01)],
        )
        .unwrap();
        assert_eq!(fam.members(), &[0b01, 0b11]);
        assert_eq!(fam.name_of(0b01), Some("A"));
    }

    #[test]
    fn powerset_is_closed_under_union() {
        let g = ground(&["a", "b"]);
        let fam = SetFamily::full_powerset(g);
        assert!(is_closed_under(&fam, ClosureOp::FiniteUnion).is_none());
        assert!(is_closed_under(&fam, ClosureOp::FiniteIntersection).is_none());
        assert!(is_closed_under(&fam, ClosureOp::Complement).is_none());
        assert!(is_closed_under(&fam, ClosureOp::SetDifference).is_none());
    }

    #[test]
    fn union_gap_is_witnessed() {
        let g = ground(&["a", "b", "c"]);
        let ac = g.mask_of(["a", "c"]).unwrap();
        let bc = g.mask_of(["b", "c"]).unwrap();
        let fam = SetFamily::new(g, vec![("P", ac), ("Q", bc)]).unwrap();
        let w = is_closed_under(&fam, ClosureOp::FiniteUnion).unwrap();
        assert_eq!(w.missing, 0b111);
    }

    #[test]
    fn singleton_family_already_closed() {
        let g = ground(&["1", "2"]);
        let fam = SetFamily::new(g, vec![("A", 0b11)]).unwrap();
        let closed = close_under_intersections(&fam);
        assert_eq!(closed.members(), fam.members());
        assert_eq!(closed.names(), fam.names());
    }

    #[test]
    fn closure_of_kappa1_generators() {
        // U = {a,c,x0}, X_0 = {c,x0,x'0,x1}, X'_1 = {a,b,c,x1,x'1,x2}
        let g = ground(&["a", "b", "c", "x0", "x1", "x2", "x'0", "x'1"]);
        let u = g.mask_of(["a", "c", "x0"]).unwrap();
        let x0 = g.mask_of(["c", "x0", "x'0", "x1"]).unwrap();
        let x1p = g.mask_of(["a", "b", "c", "x1", "x'1", "x2"]).unwrap();
        let fam = SetFamily::new(g.clone(), vec![("U", u), ("X_0", x0), ("X'_1", x1p)]).unwrap();
        let closed = close_under_intersections(&fam);
        let expect = |labels: &[&str]| g.mask_of(labels.iter().copied()).unwrap();
        for add in [
            expect(&["c", "x0"]),
            expect(&["a", "c"]),
            expect(&["c", "x1"]),
            expect(&["c"]),
        ] {
            assert!(closed.contains_member(add), "missing {add:#b}");
        }
        assert_eq!(closed.len(), 7);
        assert!(is_closed_under(&closed, ClosureOp::FiniteIntersection).is_none());
        // Not union closed: that is the point of the construction.
        assert!(is_closed_under(&closed, ClosureOp::FiniteUnion).is_some());
        // Canonical join names for derived members.
        assert_eq!(closed.name_of(expect(&["c", "x1"])), Some("X_0∩X'_1"));
        assert_eq!(closed.name_of(expect(&["c"])), Some("U∩X_0∩X'_1"));
        // Idempotent.
        let twice = close_under_intersections(&closed);
        assert_eq!(twice.members(), closed.members());
    }

    #[test]
    fn choice_eval_and_domain_error() {
        let g = ground(&["a", "b"]);
        let fam = SetFamily::full_powerset(g);
        let f = ChoiceFunction::identity(fam);
        assert_eq!(f.eval(0b11).unwrap(), 0b11);
        let g2 = ground(&["a", "b"]);
        let small = SetFamily::new(g2, vec![("A", 0b01)]).unwrap();
        let f2 = ChoiceFunction::identity(small);
        assert_eq!(f2.eval(0b10), Err(SetError::NotInDomain { set: 0b10 }));
    }
}
