//! Connective-free sequent logic: saturation under the four rules and the
//! preferential model semantics over atom-set models.
//!
//! A sequent `X |~ Y` relates two finite atom sets, read conjunctively on
//! the left and disjunctively on the right. The derivability table stores,
//! per left set, a bit row over all right sets; saturation closes the table
//! under
//!
//! - inclusion: `X |~ {a}` for `a ∈ X`,
//! - right monotony: `X |~ Y` gives `X |~ Y ∪ {a}`,
//! - cautious left monotony: `X |~ {a}` and `X |~ Y` give `X ∪ {a} |~ Y`,
//! - cautious cut in its full n-ary form: `X ∪ A |~ Y` together with
//!   `X |~ {a} ∪ Y` for every `a ∈ A` gives `X |~ Y`.
//!
//! Cut fires by scanning, per goal `X`, the proper supersets `X' ⊇ X`
//! (3^n pairs overall); rounds repeat until no bit changes. An empty right
//! side is representable and allowed in axioms but never derivable from
//! inclusion alone.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::preferential::{Copy, PreferentialStructure, StructureError};
use crate::sets::{elements, GroundSet, Mask};

/// Atom-count cap: the table is a `2^n × 2^n` bit grid.
pub const MAX_ATOMS: usize = 10;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PlError {
    TooManyAtoms { got: usize },
    DuplicateAtom(String),
    AtomUnknown(String),
    SequentOutOfRange { left: u16, right: u16 },
    Structure(StructureError),
    ModelOutOfRange { model: u16 },
}

impl fmt::Display for PlError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PlError::TooManyAtoms { got } => {
                write!(f, "{got} atoms exceed the limit of {MAX_ATOMS}")
            }
            PlError::DuplicateAtom(a) => write!(f, "duplicate atom {a:?}"),
            PlError::AtomUnknown(a) => write!(f, "atom-unknown: {a:?}"),
            PlError::SequentOutOfRange { left, right } => {
                write!(f, "sequent {left:#x} |~ {right:#x} mentions undeclared atoms")
            }
            PlError::Structure(e) => write!(f, "{e}"),
            PlError::ModelOutOfRange { model } => {
                write!(f, "model {model:#x} mentions undeclared atoms")
            }
        }
    }
}

impl From<StructureError> for PlError {
    fn from(e: StructureError) -> Self {
        PlError::Structure(e)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlLanguage {
    atoms: Vec<String>,
}

impl PlLanguage {
    pub fn new<I, S>(atoms: I) -> Result<Self, PlError>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let atoms: Vec<String> = atoms.into_iter().map(Into::into).collect();
        if atoms.len() > MAX_ATOMS {
            return Err(PlError::TooManyAtoms { got: atoms.len() });
        }
        for (i, a) in atoms.iter().enumerate() {
            if atoms[..i].contains(a) {
                return Err(PlError::DuplicateAtom(a.clone()));
            }
        }
        Ok(PlLanguage { atoms })
    }

    pub fn atoms(&self) -> &[String] {
        &self.atoms
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn index_of(&self, atom: &str) -> Option<usize> {
        self.atoms.iter().position(|a| a == atom)
    }

    pub fn atom_set<'a, I: IntoIterator<Item = &'a str>>(&self, atoms: I) -> Result<u16, PlError> {
        let mut m = 0u16;
        for a in atoms {
            match self.index_of(a) {
                Some(i) => m |= 1 << i,
                None => return Err(PlError::AtomUnknown(a.into())),
            }
        }
        Ok(m)
    }

    pub fn labels_of(&self, m: u16) -> Vec<&str> {
        self.atoms
            .iter()
            .enumerate()
            .filter(|(i, _)| m & (1 << i) != 0)
            .map(|(_, a)| a.as_str())
            .collect()
    }

    fn full(&self) -> u16 {
        ((1u32 << self.atoms.len()) - 1) as u16
    }
}

/// A sequent over atom-set masks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct Sequent {
    pub left: u16,
    pub right: u16,
}

/// Per-left-set derivability rows, one bit per right set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SequentTable {
    n_atoms: usize,
    rows: Vec<Vec<u64>>,
}

impl SequentTable {
    fn empty(n_atoms: usize) -> Self {
        let lefts = 1usize << n_atoms;
        let words = (1usize << n_atoms).div_ceil(64);
        SequentTable { n_atoms, rows: alloc::vec![alloc::vec![0u64; words]; lefts] }
    }

    pub fn n_atoms(&self) -> usize {
        self.n_atoms
    }

    pub fn derivable(&self, s: Sequent) -> bool {
        self.bit(s.left as usize, s.right as usize)
    }

    fn bit(&self, left: usize, right: usize) -> bool {
        self.rows[left][right / 64] & (1 << (right % 64)) != 0
    }

    fn set_bit(&mut self, left: usize, right: usize) -> bool {
        let w = &mut self.rows[left][right / 64];
        let m = 1 << (right % 64);
        let fresh = *w & m == 0;
        *w |= m;
        fresh
    }

    /// Number of derivable sequents.
    pub fn count(&self) -> u64 {
        self.rows.iter().flatten().map(|w| w.count_ones() as u64).sum()
    }

    /// All derivable sequents, lexicographic by (left, right).
    pub fn sequents(&self) -> impl Iterator<Item = Sequent> + '_ {
        let lefts = 1u32 << self.n_atoms;
        let rights = 1u32 << self.n_atoms;
        (0..lefts).flat_map(move |l| {
            (0..rights).filter_map(move |r| {
                if self.bit(l as usize, r as usize) {
                    Some(Sequent { left: l as u16, right: r as u16 })
                } else {
                    None
                }
            })
        })
    }
}

fn validate_sequents(lang: &PlLanguage, axioms: &[Sequent]) -> Result<(), PlError> {
    let full = lang.full();
    for s in axioms {
        if s.left & !full != 0 || s.right & !full != 0 {
            return Err(PlError::SequentOutOfRange { left: s.left, right: s.right });
        }
    }
    Ok(())
}

/// Least table containing the axioms and all inclusion instances, closed
/// under the four rules. Terminates on the finite grid; idempotent.
pub fn saturate(lang: &PlLanguage, axioms: &[Sequent]) -> Result<SequentTable, PlError> {
    validate_sequents(lang, axioms)?;
    let n = lang.len();
    let lefts = 1usize << n;
    let mut t = SequentTable::empty(n);

    // Inclusion plus right monotony seed: X |~ Y whenever X ∩ Y ≠ ∅.
    for x in 0..lefts {
        for y in 0..lefts {
            if x & y != 0 {
                t.set_bit(x, y);
            }
        }
    }
    for s in axioms {
        t.set_bit(s.left as usize, s.right as usize);
    }

    loop {
        let mut changed = false;
        // Right monotony.
        for x in 0..lefts {
            for y in 0..lefts {
                if !t.bit(x, y) {
                    continue;
                }
                for a in 0..n {
                    let up = y | (1 << a);
                    if up != y && !t.bit(x, up) {
                        t.set_bit(x, up);
                        changed = true;
                    }
                }
            }
        }
        // Cautious left monotony: X |~ {a} and X |~ Y give X ∪ {a} |~ Y.
        for x in 0..lefts {
            for a in 0..n {
                let xa = x | (1 << a);
                if xa == x || !t.bit(x, 1 << a) {
                    continue;
                }
                for w in 0..t.rows[x].len() {
                    let add = t.rows[x][w] & !t.rows[xa][w];
                    if add != 0 {
                        t.rows[xa][w] |= add;
                        changed = true;
                    }
                }
            }
        }
        // Cautious cut: X ∪ A |~ Y and X |~ {a} ∪ Y for all a ∈ A give
        // X |~ Y. Scan proper supersets of each X.
        for x in 0..lefts {
            let comp = (!x) & (lefts - 1);
            let mut a_set = 0usize;
            loop {
                a_set = a_set.wrapping_sub(comp) & comp;
                if a_set == 0 {
                    break;
                }
                let sup = x | a_set;
                for y in 0..lefts {
                    if t.bit(x, y) || !t.bit(sup, y) {
                        continue;
                    }
                    let ok = elements(a_set as Mask).all(|a| t.bit(x, y | (1 << a)));
                    if ok {
                        t.set_bit(x, y);
                        changed = true;
                    }
                }
            }
        }
        if !changed {
            break;
        }
    }
    Ok(t)
}

/// Reference engines kept deliberately naive; the bit-table engine is
/// checked against them bit for bit at small sizes.
pub mod oracle {
    use super::*;
    use alloc::collections::BTreeSet;

    /// Round-robin application of the four rules on an explicit sequent set,
    /// no indexing tricks, until a full pass adds nothing.
    pub fn naive_saturate(lang: &PlLanguage, axioms: &[Sequent]) -> Result<SequentTable, PlError> {
        validate_sequents(lang, axioms)?;
        let n = lang.len();
        let atoms: Vec<u16> = (0..n as u16).map(|a| 1 << a).collect();
        let mut derived: BTreeSet<(u16, u16)> =
            axioms.iter().map(|s| (s.left, s.right)).collect();
        let full = lang.full();
        // Inclusion.
        for x in 0..=full {
            for &a in &atoms {
                if x & a != 0 {
                    derived.insert((x, a));
                }
            }
        }
        loop {
            let mut fresh: Vec<(u16, u16)> = Vec::new();
            let have = |s: &(u16, u16), fresh: &Vec<(u16, u16)>| {
                derived.contains(s) || fresh.contains(s)
            };
            // Right monotony.
            for &(x, y) in &derived {
                for &a in &atoms {
                    let s = (x, y | a);
                    if !have(&s, &fresh) {
                        fresh.push(s);
                    }
                }
            }
            // Cautious left monotony.
            for &(x, y) in &derived {
                for &a in &atoms {
                    if derived.contains(&(x, a)) {
                        let s = (x | a, y);
                        if !have(&s, &fresh) {
                            fresh.push(s);
                        }
                    }
                }
            }
            // Cautious cut, n-ary.
            for &(xa, y) in &derived {
                // Every proper subset x of xa is a candidate goal.
                let mut x = xa;
                loop {
                    x = x.wrapping_sub(1) & xa;
                    let a_set = xa & !x;
                    let all = elements(a_set as Mask).all(|a| derived.contains(&(x, y | (1 << a))));
                    if all {
                        let s = (x, y);
                        if !have(&s, &fresh) {
                            fresh.push(s);
                        }
                    }
                    if x == 0 {
                        break;
                    }
                }
            }
            if fresh.is_empty() {
                break;
            }
            derived.extend(fresh);
        }
        let mut t = SequentTable::empty(n);
        for (x, y) in derived {
            t.set_bit(x as usize, y as usize);
        }
        Ok(t)
    }
}

/// A preferential structure whose worlds are atom-set models.
///
/// The ground set names the declared models `m0, m1, …`; `model_atoms`
/// keeps each model's atom mask, aligned with ground positions.
#[derive(Debug, Clone)]
pub struct PlModelStructure {
    pub lang: PlLanguage,
    pub structure: PreferentialStructure,
    pub model_atoms: Vec<u16>,
}

impl PlModelStructure {
    /// Build over explicit models with given copies and relation; copies and
    /// relation address models by position.
    pub fn new(
        lang: PlLanguage,
        models: Vec<u16>,
        copies: Vec<Copy>,
        relation: &[(Copy, Copy)],
    ) -> Result<Self, PlError> {
        let full = lang.full();
        for &m in &models {
            if m & !full != 0 {
                return Err(PlError::ModelOutOfRange { model: m });
            }
        }
        let ground = GroundSet::new((0..models.len()).map(|i| {
            let mut s = String::from("m");
            push_usize(&mut s, i);
            s
        }))
        .expect("model names are distinct");
        let structure = PreferentialStructure::new(ground, copies, relation)?;
        Ok(PlModelStructure { lang, structure, model_atoms: models })
    }

    /// One copy per model.
    pub fn one_copy(
        lang: PlLanguage,
        models: Vec<u16>,
        relation: &[(usize, usize)],
    ) -> Result<Self, PlError> {
        let copies: Vec<Copy> =
            (0..models.len()).map(|element| Copy { element, index: 0 }).collect();
        let rel: Vec<(Copy, Copy)> = relation
            .iter()
            .map(|&(lo, hi)| (Copy { element: lo, index: 0 }, Copy { element: hi, index: 0 }))
            .collect();
        PlModelStructure::new(lang, models, copies, &rel)
    }

    /// Ground mask of the models satisfying `x`, i.e. those containing it.
    pub fn models_of(&self, x: u16) -> Mask {
        let mut m = 0;
        for (i, &atoms) in self.model_atoms.iter().enumerate() {
            if x & !atoms == 0 {
                m |= 1 << i;
            }
        }
        m
    }

    /// Minimal models of `x`.
    pub fn mu_of(&self, x: u16) -> Mask {
        self.structure.mu(self.models_of(x))
    }

    /// Does `X |~ Y` hold in this structure?
    ///
    /// Evaluated through both equivalent readings: every minimal model of
    /// `X` meets `Y`, and the minimal models of `X` lie below the union of
    /// the single-atom model sets of `Y`. The two must agree.
    pub fn semantic_holds(&self, x: u16, y: u16) -> bool {
        let mu = self.mu_of(x);
        // (d)-clause reading.
        let pointwise =
            elements(mu).all(|i| self.model_atoms[i] & y != 0);
        // Union-of-satisfiers reading.
        let mut union = 0 as Mask;
        for b in elements(y as Mask) {
            union |= self.models_of(1 << b);
        }
        let by_union = mu & !union == 0;
        assert_eq!(pointwise, by_union, "the two sequent-validity readings diverged");
        pointwise
    }
}

fn push_usize(out: &mut String, mut v: usize) {
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

/// Outcome of checking a saturated table against a structure.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SoundnessOutcome {
    Sound,
    /// Precondition failure: the structure does not validate this axiom.
    AxiomViolated(Sequent),
    /// A derivable sequent fails semantically.
    Unsound(Sequent),
}

/// Verify that every table-derivable sequent holds in the structure. The
/// structure must validate the axioms; the first violated axiom is reported
/// instead of a soundness verdict.
pub fn soundness_check(
    structure: &PlModelStructure,
    axioms: &[Sequent],
    table: &SequentTable,
) -> SoundnessOutcome {
    for &s in axioms {
        if !structure.semantic_holds(s.left, s.right) {
            return SoundnessOutcome::AxiomViolated(s);
        }
    }
    for s in table.sequents() {
        if !structure.semantic_holds(s.left, s.right) {
            return SoundnessOutcome::Unsound(s);
        }
    }
    SoundnessOutcome::Sound
}

/// Enumerate preferential structures over the given models: every copy
/// assignment with `1..=max_copies` copies per model and at most
/// `total_copy_cap` copies overall, crossed with every relation on the
/// copies. The visitor returns `false` to stop; the return value is the
/// number of structures visited.
pub fn for_each_model_structure<F>(
    lang: &PlLanguage,
    models: &[u16],
    max_copies: u32,
    total_copy_cap: u32,
    mut visit: F,
) -> Result<u64, PlError>
where
    F: FnMut(&PlModelStructure) -> bool,
{
    let k = models.len();
    let mut counts = alloc::vec![1u32; k];
    let mut visited = 0u64;
    'assignments: loop {
        let total: u32 = counts.iter().sum();
        if total <= total_copy_cap {
            let mut copies = Vec::with_capacity(total as usize);
            for (element, &c) in counts.iter().enumerate() {
                for index in 0..c {
                    copies.push(Copy { element, index });
                }
            }
            let c = copies.len();
            let rel_bits = c * c;
            for rel_mask in 0..(1u64 << rel_bits) {
                let mut relation = Vec::new();
                for b in elements(rel_mask) {
                    relation.push((copies[b / c], copies[b % c]));
                }
                let s = PlModelStructure::new(
                    lang.clone(),
                    models.to_vec(),
                    copies.clone(),
                    &relation,
                )?;
                visited += 1;
                if !visit(&s) {
                    return Ok(visited);
                }
            }
        }
        // Next copy assignment, last model fastest.
        for i in (0..k).rev() {
            if counts[i] < max_copies {
                counts[i] += 1;
                continue 'assignments;
            }
            counts[i] = 1;
        }
        break;
    }
    Ok(visited)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lang3() -> PlLanguage {
        PlLanguage::new(["a", "b", "c"]).unwrap()
    }

    fn seq(lang: &PlLanguage, left: &[&str], right: &[&str]) -> Sequent {
        Sequent {
            left: lang.atom_set(left.iter().copied()).unwrap(),
            right: lang.atom_set(right.iter().copied()).unwrap(),
        }
    }

    #[test]
    fn no_axioms_gives_exactly_the_overlap_sequents() {
        let lang = lang3();
        let t = saturate(&lang, &[]).unwrap();
        for x in 0..8u16 {
            for y in 0..8u16 {
                assert_eq!(t.derivable(Sequent { left: x, right: y }), x & y != 0);
            }
        }
    }

    #[test]
    fn axiom_with_unknown_atom_is_rejected() {
        let lang = lang3();
        assert!(lang.atom_set(["z"]).is_err());
        let bad = Sequent { left: 1 << 5, right: 1 };
        assert_eq!(
            saturate(&lang, &[bad]),
            Err(PlError::SequentOutOfRange { left: 1 << 5, right: 1 })
        );
    }

    #[test]
    fn right_monotony_closure_holds_rowwise() {
        let lang = lang3();
        let axioms = [seq(&lang, &["a"], &["b"])];
        let t = saturate(&lang, &axioms).unwrap();
        for x in 0..8u16 {
            for y in 0..8u16 {
                if t.derivable(Sequent { left: x, right: y }) {
                    for a in 0..3 {
                        assert!(t.derivable(Sequent { left: x, right: y | (1 << a) }));
                    }
                }
            }
        }
    }

    #[test]
    fn empty_right_side_axioms_are_kept() {
        let lang = lang3();
        let none = saturate(&lang, &[]).unwrap();
        assert!(!none.derivable(Sequent { left: 0b111, right: 0 }));
        let t = saturate(&lang, &[Sequent { left: 0b011, right: 0 }]).unwrap();
        assert!(t.derivable(Sequent { left: 0b011, right: 0 }));
    }

    #[test]
    fn saturation_is_idempotent_and_monotone() {
        let lang = lang3();
        let ax1 = [seq(&lang, &["a"], &["b"])];
        let ax2 = [seq(&lang, &["a"], &["b"]), seq(&lang, &["b", "c"], &["a"])];
        let t1 = saturate(&lang, &ax1).unwrap();
        let t2 = saturate(&lang, &ax2).unwrap();
        // Monotone: more axioms never remove sequents.
        for s in t1.sequents() {
            assert!(t2.derivable(s));
        }
        // Idempotent: re-saturating from the full sequent list is stable.
        let all: Vec<Sequent> = t1.sequents().collect();
        assert_eq!(saturate(&lang, &all).unwrap(), t1);
    }

    #[test]
    fn bit_engine_matches_naive_oracle_exhaustively_small() {
        // Two atoms: all single-axiom tables, bit for bit.
        let lang = PlLanguage::new(["a", "b"]).unwrap();
        for left in 0..4u16 {
            for right in 0..4u16 {
                let ax = [Sequent { left, right }];
                assert_eq!(
                    saturate(&lang, &ax).unwrap(),
                    oracle::naive_saturate(&lang, &ax).unwrap(),
                    "diverged on axiom {left:#b} |~ {right:#b}"
                );
            }
        }
    }

    #[test]
    fn single_model_semantics() {
        // One model {a,b}, no relation: a |~ b holds, a |~ c fails.
        let lang = lang3();
        let m = lang.atom_set(["a", "b"]).unwrap();
        let s = PlModelStructure::one_copy(lang.clone(), alloc::vec![m], &[]).unwrap();
        assert!(s.semantic_holds(lang.atom_set(["a"]).unwrap(), lang.atom_set(["b"]).unwrap()));
        assert!(!s.semantic_holds(lang.atom_set(["a"]).unwrap(), lang.atom_set(["c"]).unwrap()));
        // Vacuous when no model satisfies X.
        assert!(s.semantic_holds(lang.atom_set(["c"]).unwrap(), 0));
    }

    #[test]
    fn soundness_check_flags_violated_axiom() {
        let lang = lang3();
        let m = lang.atom_set(["a"]).unwrap();
        let s = PlModelStructure::one_copy(lang.clone(), alloc::vec![m], &[]).unwrap();
        let ax = seq(&lang, &["a"], &["b"]);
        let t = saturate(&lang, &[ax]).unwrap();
        assert_eq!(soundness_check(&s, &[ax], &t), SoundnessOutcome::AxiomViolated(ax));
    }

    #[test]
    fn no_axiom_table_is_sound_everywhere() {
        let lang = lang3();
        let models = alloc::vec![
            lang.atom_set(["a"]).unwrap(),
            lang.atom_set(["a", "b"]).unwrap(),
            lang.atom_set(["b", "c"]).unwrap(),
        ];
        let s = PlModelStructure::one_copy(lang.clone(), models, &[(0, 1), (1, 2)]).unwrap();
        let t = saturate(&lang, &[]).unwrap();
        assert_eq!(soundness_check(&s, &[], &t), SoundnessOutcome::Sound);
    }

    #[test]
    fn structure_enumeration_counts_relations() {
        let lang = PlLanguage::new(["a"]).unwrap();
        let models = [lang.atom_set(["a"]).unwrap()];
        // One model, one copy: 2^(1) relations; with up to two copies and
        // cap 2: plus 2^4 relations.
        let n = for_each_model_structure(&lang, &models, 2, 2, |_| true).unwrap();
        assert_eq!(n, 2 + 16);
    }
}
