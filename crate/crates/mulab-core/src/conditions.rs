//! Checkers for the algebraic conditions on choice functions.
//!
//! Every checker quantifies its condition body over the members of the choice
//! function's domain family, in canonical member order, and stops at the
//! first failing tuple; the reported witness is therefore the
//! lexicographically least one. Whenever a condition applies `f` to a
//! compound set (a union, an intersection, a pair set) that is not a family
//! member, the tuple is skipped and counted, never evaluated off-domain. The
//! premise of a conditional body is evaluated first, so a tuple is only
//! skipped when deciding it would actually require an off-domain application.
//!
//! Two exceptions to plain member quantification, both documented on the
//! checkers: the side sets `A`, `B` of `mu-ResM` range over all subsets of
//! the ground set, and the existential partner in `mu-in` ranges over the
//! pair sets present in the family.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::sets::{elements, ChoiceFunction, Mask};

/// Identifier of a checkable condition.
///
/// `CumAlpha`/`CumtAlpha` carry the chain length parameter; everything else
/// is a fixed condition from the catalog.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ConditionId {
    /// f(X) ⊆ X
    Subset,
    /// X ⊆ Y ⇒ f(Y) ∩ X ⊆ f(X)
    Pr,
    /// f(X) ∩ Y ⊆ f(X ∩ Y)
    PrPrime,
    /// f(X ∪ Y) ⊆ f(X) ∪ f(Y)
    Or,
    /// f(X ∪ Y) ⊆ f(X) ∪ Y
    WOr,
    /// X ∩ Y = ∅ ⇒ f(X ∪ Y) ⊆ f(X) ∪ f(Y)
    DisjOr,
    /// f(X) = ∅ ⇒ X = ∅
    Empty,
    /// X ≠ ∅ ⇒ f(X) ≠ ∅ (every member here is finite)
    EmptyFin,
    /// f(X) ⊆ Y ⊆ X ⇒ f(X) ⊆ f(Y)
    Cut,
    /// f(X) ⊆ Y ⊆ X ⇒ f(Y) ⊆ f(X)
    Cm,
    /// f(X) ⊆ A ∩ B ⇒ f(X ∩ A) ⊆ B
    ResM,
    /// f(X) ⊆ Y ⊆ X ⇒ f(Y) = f(X)
    Cum,
    /// f(X) ⊆ Y, f(Y) ⊆ X ⇒ f(X) = f(Y)
    SubsetSupset,
    /// X ⊆ Y, X ∩ f(Y) ≠ ∅ ⇒ f(X) ⊆ f(Y) ∩ X
    RatM,
    /// X ⊆ Y, X ∩ f(Y) ≠ ∅ ⇒ f(X) = f(Y) ∩ X
    Eq,
    /// f(Y) ∩ X ≠ ∅ ⇒ f(Y ∩ X) = f(Y) ∩ X
    EqPrime,
    /// f(X ∪ Y) is one of f(X), f(Y), f(X) ∪ f(Y)
    Parallel,
    /// f(Y) ∩ (X − f(X)) ≠ ∅ ⇒ f(X ∪ Y) ∩ Y = ∅
    Cup,
    /// f(Y) ∩ (X − f(X)) ≠ ∅ ⇒ f(X ∪ Y) = f(X)
    CupPrime,
    /// a ∈ X − f(X) ⇒ ∃ b ∈ X. a ∉ f({a,b})
    In,
    /// Chain condition: prerequisites f(X_β) ⊆ U ∪ ⋃{X_γ : γ < β} for all
    /// β ≤ α imply ⋂{X_γ : γ ≤ α} ∩ f(U) ⊆ f(X_α).
    CumAlpha(u32),
    /// Same prerequisites, conclusion X_α ∩ f(U) ⊆ f(X_α).
    CumtAlpha(u32),
}

/// The fixed (non-parameterized) conditions in catalog order.
pub const FIXED_CONDITIONS: [ConditionId; 20] = [
    ConditionId::Subset,
    ConditionId::Pr,
    ConditionId::PrPrime,
    ConditionId::Or,
    ConditionId::WOr,
    ConditionId::DisjOr,
    ConditionId::Empty,
    ConditionId::EmptyFin,
    ConditionId::Cut,
    ConditionId::Cm,
    ConditionId::ResM,
    ConditionId::Cum,
    ConditionId::SubsetSupset,
    ConditionId::RatM,
    ConditionId::Eq,
    ConditionId::EqPrime,
    ConditionId::Parallel,
    ConditionId::Cup,
    ConditionId::CupPrime,
    ConditionId::In,
];

impl ConditionId {
    pub fn tag(self) -> &'static str {
        match self {
            ConditionId::Subset => "mu-subset",
            ConditionId::Pr => "mu-PR",
            ConditionId::PrPrime => "mu-PR'",
            ConditionId::Or => "mu-OR",
            ConditionId::WOr => "mu-wOR",
            ConditionId::DisjOr => "mu-disjOR",
            ConditionId::Empty => "mu-empty",
            ConditionId::EmptyFin => "mu-empty-fin",
            ConditionId::Cut => "mu-CUT",
            ConditionId::Cm => "mu-CM",
            ConditionId::ResM => "mu-ResM",
            ConditionId::Cum => "mu-CUM",
            ConditionId::SubsetSupset => "mu-subset-supset",
            ConditionId::RatM => "mu-RatM",
            ConditionId::Eq => "mu-eq",
            ConditionId::EqPrime => "mu-eq'",
            ConditionId::Parallel => "mu-parallel",
            ConditionId::Cup => "mu-cup",
            ConditionId::CupPrime => "mu-cup'",
            ConditionId::In => "mu-in",
            ConditionId::CumAlpha(_) => "mu-cum",
            ConditionId::CumtAlpha(_) => "mu-cumt",
        }
    }

    pub fn alpha(self) -> Option<u32> {
        match self {
            ConditionId::CumAlpha(a) | ConditionId::CumtAlpha(a) => Some(a),
            _ => None,
        }
    }

    /// Parse a tag as printed by [`ConditionId::tag`]; parameterized tags
    /// take the parameter separately.
    pub fn parse(tag: &str, alpha: Option<u32>) -> Option<ConditionId> {
        let fixed = FIXED_CONDITIONS.iter().copied().find(|c| c.tag() == tag);
        match (fixed, tag, alpha) {
            (Some(c), _, None) => Some(c),
            (None, "mu-cum", Some(a)) => Some(ConditionId::CumAlpha(a)),
            (None, "mu-cumt", Some(a)) => Some(ConditionId::CumtAlpha(a)),
            _ => None,
        }
    }
}

impl fmt::Display for ConditionId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.alpha() {
            Some(a) => write!(f, "{}({})", self.tag(), a),
            None => f.write_str(self.tag()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Holds,
    Fails,
}

/// A fully instantiated binding of a condition's quantifiers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Binding {
    Set(Mask),
    Seq(Vec<Mask>),
    Element(usize),
}

/// Replayable refutation of a condition: named bindings plus the element on
/// which an inclusion or equality breaks, when there is a single such.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Witness {
    pub bindings: Vec<(&'static str, Binding)>,
    pub offending: Option<usize>,
}

impl Witness {
    pub fn set(&self, name: &str) -> Option<Mask> {
        self.bindings.iter().find_map(|(n, b)| match b {
            Binding::Set(m) if *n == name => Some(*m),
            _ => None,
        })
    }

    pub fn seq(&self, name: &str) -> Option<&[Mask]> {
        self.bindings.iter().find_map(|(n, b)| match b {
            Binding::Seq(s) if *n == name => Some(s.as_slice()),
            _ => None,
        })
    }

    pub fn element(&self, name: &str) -> Option<usize> {
        self.bindings.iter().find_map(|(n, b)| match b {
            Binding::Element(e) if *n == name => Some(*e),
            _ => None,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConditionReport {
    pub condition: ConditionId,
    pub verdict: Verdict,
    pub witness: Option<Witness>,
    /// Tuples whose body was evaluated, up to and including the witness.
    pub tuples: u64,
    /// Tuples skipped under the domain-partiality rule.
    pub skipped: u64,
}

impl ConditionReport {
    pub fn holds(&self) -> bool {
        self.verdict == Verdict::Holds
    }
}

/// Outcome of evaluating one condition body on one tuple of bindings.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Tuple {
    Holds,
    /// An off-domain application of `f` would be required.
    Skip,
    /// The body is violated; carries the offending element if single-valued.
    Fails(Option<usize>),
}

fn first_elem(m: Mask) -> Option<usize> {
    if m == 0 {
        None
    } else {
        Some(m.trailing_zeros() as usize)
    }
}

fn viol(m: Mask) -> Tuple {
    if m == 0 {
        Tuple::Holds
    } else {
        Tuple::Fails(first_elem(m))
    }
}

fn eval_unary(f: &ChoiceFunction, cond: ConditionId, x: Mask) -> Tuple {
    let fx = f.eval(x).expect("quantified set is a member");
    eval_unary_with(cond, x, fx)
}

fn eval_unary_with(cond: ConditionId, x: Mask, fx: Mask) -> Tuple {
    match cond {
        ConditionId::Subset => viol(fx & !x),
        ConditionId::Empty => {
            if fx == 0 && x != 0 {
                Tuple::Fails(first_elem(x))
            } else {
                Tuple::Holds
            }
        }
        ConditionId::EmptyFin => {
            if x != 0 && fx == 0 {
                Tuple::Fails(first_elem(x))
            } else {
                Tuple::Holds
            }
        }
        _ => unreachable!("not a unary condition"),
    }
}

fn eval_binary(f: &ChoiceFunction, cond: ConditionId, x: Mask, y: Mask) -> Tuple {
    let fx = f.eval(x).expect("quantified set is a member");
    let fy = f.eval(y).expect("quantified set is a member");
    eval_binary_with(f, cond, x, fx, y, fy)
}

/// Binary condition body with the images already at hand; only compound
/// arguments still resolve through the family.
fn eval_binary_with(f: &ChoiceFunction, cond: ConditionId, x: Mask, fx: Mask, y: Mask, fy: Mask) -> Tuple {
    match cond {
        ConditionId::Pr => {
            if x & !y == 0 {
                viol(fy & x & !fx)
            } else {
                Tuple::Holds
            }
        }
        ConditionId::PrPrime => {
            if fx & y == 0 {
                return Tuple::Holds;
            }
            match f.eval(x & y) {
                Ok(fxy) => viol(fx & y & !fxy),
                Err(_) => Tuple::Skip,
            }
        }
        ConditionId::Or => match f.eval(x | y) {
            Ok(fu) => viol(fu & !(fx | fy)),
            Err(_) => Tuple::Skip,
        },
        ConditionId::WOr => match f.eval(x | y) {
            Ok(fu) => viol(fu & !(fx | y)),
            Err(_) => Tuple::Skip,
        },
        ConditionId::DisjOr => {
            if x & y != 0 {
                return Tuple::Holds;
            }
            match f.eval(x | y) {
                Ok(fu) => viol(fu & !(fx | fy)),
                Err(_) => Tuple::Skip,
            }
        }
        ConditionId::Cut => {
            if fx & !y == 0 && y & !x == 0 {
                viol(fx & !fy)
            } else {
                Tuple::Holds
            }
        }
        ConditionId::Cm => {
            if fx & !y == 0 && y & !x == 0 {
                viol(fy & !fx)
            } else {
                Tuple::Holds
            }
        }
        ConditionId::Cum => {
            if fx & !y == 0 && y & !x == 0 {
                viol(fy ^ fx)
            } else {
                Tuple::Holds
            }
        }
        ConditionId::SubsetSupset => {
            if fx & !y == 0 && fy & !x == 0 {
                viol(fx ^ fy)
            } else {
                Tuple::Holds
            }
        }
        ConditionId::RatM => {
            if x & !y == 0 && x & fy != 0 {
                viol(fx & !(fy & x))
            } else {
                Tuple::Holds
            }
        }
        ConditionId::Eq => {
            if x & !y == 0 && x & fy != 0 {
                viol(fx ^ (fy & x))
            } else {
                Tuple::Holds
            }
        }
        ConditionId::EqPrime => {
            if fy & x == 0 {
                return Tuple::Holds;
            }
            match f.eval(y & x) {
                Ok(fyx) => viol(fyx ^ (fy & x)),
                Err(_) => Tuple::Skip,
            }
        }
        ConditionId::Parallel => match f.eval(x | y) {
            Ok(fu) => {
                if fu == fx || fu == fy || fu == fx | fy {
                    Tuple::Holds
                } else {
                    Tuple::Fails(None)
                }
            }
            Err(_) => Tuple::Skip,
        },
        ConditionId::Cup => {
            if fy & (x & !fx) == 0 {
                return Tuple::Holds;
            }
            match f.eval(x | y) {
                Ok(fu) => viol(fu & y),
                Err(_) => Tuple::Skip,
            }
        }
        ConditionId::CupPrime => {
            if fy & (x & !fx) == 0 {
                return Tuple::Holds;
            }
            match f.eval(x | y) {
                Ok(fu) => viol(fu ^ fx),
                Err(_) => Tuple::Skip,
            }
        }
        _ => unreachable!("not a binary condition"),
    }
}

/// Body of `mu-ResM` on explicit side sets `A`, `B` (arbitrary subsets of
/// the ground set, not necessarily members).
fn eval_resm(f: &ChoiceFunction, x: Mask, a: Mask, b: Mask) -> Tuple {
    let fx = f.eval(x).expect("quantified set is a member");
    if fx & !(a & b) != 0 {
        return Tuple::Holds;
    }
    match f.eval(x & a) {
        Ok(fxa) => viol(fxa & !b),
        Err(_) => Tuple::Skip,
    }
}

/// Body of `mu-in` for a fixed `X` and `a ∈ X − f(X)`.
///
/// The existential partner `b` ranges over the elements of `X` whose pair
/// set `{a,b}` is present in the family; pair sets absent from the family
/// are never evaluated. The tuple fails when at least one partner was
/// evaluable and none witnessed the existential, and is skipped when no
/// partner was evaluable at all.
fn eval_in(f: &ChoiceFunction, x: Mask, a: usize) -> Tuple {
    let fx = f.eval(x).expect("quantified set is a member");
    if x & (1 << a) == 0 || fx & (1 << a) != 0 {
        return Tuple::Holds;
    }
    let mut evaluated = false;
    for b in elements(x) {
        let pair = (1 << a) | (1 << b);
        if let Ok(fp) = f.eval(pair) {
            evaluated = true;
            if fp & (1 << a) == 0 {
                return Tuple::Holds;
            }
        }
    }
    if evaluated {
        Tuple::Fails(Some(a))
    } else {
        Tuple::Skip
    }
}

/// Body of the chain conditions on an explicit sequence. Used for replay;
/// the checker proper prunes prefixes instead of re-testing whole sequences.
fn eval_cum_seq(f: &ChoiceFunction, u: Mask, seq: &[Mask], transitive: bool) -> Tuple {
    let fu = f.eval(u).expect("U is a member");
    let mut reachable = u;
    for &x in seq {
        let fx = f.eval(x).expect("X_beta is a member");
        if fx & !reachable != 0 {
            return Tuple::Holds;
        }
        reachable |= x;
    }
    let last = *seq.last().expect("nonempty sequence");
    let flast = f.eval(last).expect("X_alpha is a member");
    let lhs = if transitive {
        last & fu
    } else {
        seq.iter().fold(!0, |acc, &x| acc & x) & fu
    };
    viol(lhs & !flast)
}

/// Check one condition, quantifying over the domain family of `f`.
pub fn check(f: &ChoiceFunction, cond: ConditionId) -> ConditionReport {
    match cond {
        ConditionId::CumAlpha(a) => check_cum(f, a, false),
        ConditionId::CumtAlpha(a) => check_cum(f, a, true),
        ConditionId::Subset | ConditionId::Empty | ConditionId::EmptyFin => {
            let mut tuples = 0;
            for (i, &x) in f.family().members().iter().enumerate() {
                tuples += 1;
                if let Tuple::Fails(off) = eval_unary_with(cond, x, f.value_at(i)) {
                    return ConditionReport {
                        condition: cond,
                        verdict: Verdict::Fails,
                        witness: Some(Witness {
                            bindings: alloc::vec![("X", Binding::Set(x))],
                            offending: off,
                        }),
                        tuples,
                        skipped: 0,
                    };
                }
            }
            ConditionReport { condition: cond, verdict: Verdict::Holds, witness: None, tuples, skipped: 0 }
        }
        ConditionId::ResM => check_resm(f),
        ConditionId::In => check_in(f),
        _ => {
            let mut tuples = 0;
            let mut skipped = 0;
            let members = f.family().members();
            let table = f.table();
            for (i, &x) in members.iter().enumerate() {
                for (j, &y) in members.iter().enumerate() {
                    match eval_binary_with(f, cond, x, table[i], y, table[j]) {
                        Tuple::Holds => tuples += 1,
                        Tuple::Skip => skipped += 1,
                        Tuple::Fails(off) => {
                            tuples += 1;
                            return ConditionReport {
                                condition: cond,
                                verdict: Verdict::Fails,
                                witness: Some(Witness {
                                    bindings: alloc::vec![
                                        ("X", Binding::Set(x)),
                                        ("Y", Binding::Set(y)),
                                    ],
                                    offending: off,
                                }),
                                tuples,
                                skipped,
                            };
                        }
                    }
                }
            }
            ConditionReport { condition: cond, verdict: Verdict::Holds, witness: None, tuples, skipped }
        }
    }
}

/// `mu-ResM` with `A`, `B` ranging over all subsets of the ground set.
///
/// Scanning that space directly is wasteful: for fixed `X`, the strongest
/// instance takes `B = f(X)` and any `A ⊇ f(X)`, and then `X ∩ A` ranges
/// exactly over the members `W` with `X ∩ f(X) ⊆ W ⊆ X`. The loop below
/// walks those `(X, W)` pairs; the reported witness carries the
/// corresponding `A = W ∪ f(X)` and `B = f(X)` and replays through
/// [`eval_resm`]. `tuples` counts the `(X, W)` pairs evaluated.
fn check_resm(f: &ChoiceFunction) -> ConditionReport {
    let mut tuples = 0;
    let members = f.family().members();
    let table = f.table();
    for (i, &x) in members.iter().enumerate() {
        let fx = table[i];
        for (j, &w) in members.iter().enumerate() {
            if (x & fx) & !w != 0 || w & !x != 0 {
                continue;
            }
            tuples += 1;
            let fw = table[j];
            if fw & !fx != 0 {
                let a = w | fx;
                debug_assert_eq!(eval_resm(f, x, a, fx), Tuple::Fails(first_elem(fw & !fx)));
                return ConditionReport {
                    condition: ConditionId::ResM,
                    verdict: Verdict::Fails,
                    witness: Some(Witness {
                        bindings: alloc::vec![
                            ("X", Binding::Set(x)),
                            ("A", Binding::Set(a)),
                            ("B", Binding::Set(fx)),
                        ],
                        offending: first_elem(fw & !fx),
                    }),
                    tuples,
                    skipped: 0,
                };
            }
        }
    }
    ConditionReport {
        condition: ConditionId::ResM,
        verdict: Verdict::Holds,
        witness: None,
        tuples,
        skipped: 0,
    }
}

fn check_in(f: &ChoiceFunction) -> ConditionReport {
    let mut tuples = 0;
    let mut skipped = 0;
    for &x in f.family().members() {
        let fx = f.eval(x).expect("member");
        for a in elements(x & !fx) {
            match eval_in(f, x, a) {
                Tuple::Holds => tuples += 1,
                Tuple::Skip => skipped += 1,
                Tuple::Fails(off) => {
                    tuples += 1;
                    return ConditionReport {
                        condition: ConditionId::In,
                        verdict: Verdict::Fails,
                        witness: Some(Witness {
                            bindings: alloc::vec![
                                ("X", Binding::Set(x)),
                                ("a", Binding::Element(a)),
                            ],
                            offending: off,
                        }),
                        tuples,
                        skipped,
                    };
                }
            }
        }
    }
    ConditionReport { condition: ConditionId::In, verdict: Verdict::Holds, witness: None, tuples, skipped }
}

/// Check the chain condition of length `alpha + 1`.
///
/// `U` and each `X_β` range over the family, repetitions allowed, `U` itself
/// admissible among the `X_β`. The search extends prefixes whose running
/// prerequisite holds and prunes branches that can no longer fail:
/// once `f(U)` is disjoint from the running intersection (plain variant
/// only), every completion satisfies the conclusion vacuously. `tuples`
/// counts evaluated conclusions.
pub fn check_cum(f: &ChoiceFunction, alpha: u32, transitive: bool) -> ConditionReport {
    let cond = if transitive { ConditionId::CumtAlpha(alpha) } else { ConditionId::CumAlpha(alpha) };
    let members = f.family().members();
    let mut tuples = 0u64;
    let mut seq: Vec<Mask> = Vec::with_capacity(alpha as usize + 1);

    fn dfs(
        f: &ChoiceFunction,
        members: &[Mask],
        fu: Mask,
        transitive: bool,
        alpha: u32,
        depth: u32,
        reachable: Mask,
        inter: Mask,
        seq: &mut Vec<Mask>,
        tuples: &mut u64,
    ) -> Option<(Vec<Mask>, usize)> {
        for &x in members {
            let fx = f.eval(x).expect("member");
            if fx & !reachable != 0 {
                continue;
            }
            seq.push(x);
            if depth == alpha {
                *tuples += 1;
                let lhs = if transitive { x & fu } else { inter & x & fu };
                let flast = fx;
                let bad = lhs & !flast;
                if bad != 0 {
                    let witness_seq = seq.clone();
                    seq.pop();
                    return Some((witness_seq, bad.trailing_zeros() as usize));
                }
            } else {
                let next_inter = inter & x;
                // Plain variant: a dead running intersection cannot revive.
                if !(!transitive && next_inter & fu == 0) {
                    if let Some(found) = dfs(
                        f,
                        members,
                        fu,
                        transitive,
                        alpha,
                        depth + 1,
                        reachable | x,
                        next_inter,
                        seq,
                        tuples,
                    ) {
                        seq.pop();
                        return Some(found);
                    }
                }
            }
            seq.pop();
        }
        None
    }

    for &u in members {
        let fu = f.eval(u).expect("member");
        if fu == 0 {
            continue;
        }
        if let Some((witness_seq, off)) =
            dfs(f, members, fu, transitive, alpha, 0, u, !0, &mut seq, &mut tuples)
        {
            debug_assert!(matches!(
                eval_cum_seq(f, u, &witness_seq, transitive),
                Tuple::Fails(_)
            ));
            return ConditionReport {
                condition: cond,
                verdict: Verdict::Fails,
                witness: Some(Witness {
                    bindings: alloc::vec![
                        ("U", Binding::Set(u)),
                        ("X", Binding::Seq(witness_seq)),
                    ],
                    offending: Some(off),
                }),
                tuples,
                skipped: 0,
            };
        }
    }
    ConditionReport { condition: cond, verdict: Verdict::Holds, witness: None, tuples, skipped: 0 }
}

/// Run every fixed condition plus both chain variants for `α ≤ alpha_max`,
/// in a fixed order.
pub fn check_all(f: &ChoiceFunction, alpha_max: u32) -> Vec<ConditionReport> {
    let mut out = Vec::with_capacity(FIXED_CONDITIONS.len() + 2 * (alpha_max as usize + 1));
    for cond in FIXED_CONDITIONS {
        out.push(check(f, cond));
    }
    for a in 0..=alpha_max {
        out.push(check(f, ConditionId::CumAlpha(a)));
        out.push(check(f, ConditionId::CumtAlpha(a)));
    }
    out
}

/// Convenience wrapper for premise filtering in sweeps.
pub fn holds(f: &ChoiceFunction, cond: ConditionId) -> bool {
    check(f, cond).holds()
}

/// Re-evaluate a condition body on a witness's bindings; `true` means the
/// violation reproduces.
pub fn replay(f: &ChoiceFunction, cond: ConditionId, witness: &Witness) -> bool {
    let failed = |t: Tuple| matches!(t, Tuple::Fails(_));
    match cond {
        ConditionId::Subset | ConditionId::Empty | ConditionId::EmptyFin => witness
            .set("X")
            .map(|x| failed(eval_unary(f, cond, x)))
            .unwrap_or(false),
        ConditionId::ResM => match (witness.set("X"), witness.set("A"), witness.set("B")) {
            (Some(x), Some(a), Some(b)) => failed(eval_resm(f, x, a, b)),
            _ => false,
        },
        ConditionId::In => match (witness.set("X"), witness.element("a")) {
            (Some(x), Some(a)) => failed(eval_in(f, x, a)),
            _ => false,
        },
        ConditionId::CumAlpha(_) | ConditionId::CumtAlpha(_) => {
            match (witness.set("U"), witness.seq("X")) {
                (Some(u), Some(seq)) if !seq.is_empty() => failed(eval_cum_seq(
                    f,
                    u,
                    seq,
                    matches!(cond, ConditionId::CumtAlpha(_)),
                )),
                _ => false,
            }
        }
        _ => match (witness.set("X"), witness.set("Y")) {
            (Some(x), Some(y)) => failed(eval_binary(f, cond, x, y)),
            _ => false,
        },
    }
}

/// Pretty description of a witness against a ground set, for summaries.
pub fn describe_witness(w: &Witness, ground: &crate::sets::GroundSet) -> String {
    use core::fmt::Write;
    let mut out = String::new();
    for (i, (name, b)) in w.bindings.iter().enumerate() {
        if i > 0 {
            out.push_str(", ");
        }
        match b {
            Binding::Set(m) => {
                let _ = write!(out, "{name}={{{}}}", ground.labels_of(*m).join(","));
            }
            Binding::Seq(seq) => {
                let _ = write!(out, "{name}=[");
                for (j, m) in seq.iter().enumerate() {
                    if j > 0 {
                        out.push_str("; ");
                    }
                    let _ = write!(out, "{{{}}}", ground.labels_of(*m).join(","));
                }
                out.push(']');
            }
            Binding::Element(e) => {
                let _ = write!(out, "{name}={}", ground.label(*e));
            }
        }
    }
    if let Some(e) = w.offending {
        let _ = write!(out, ", element={}", ground.label(e));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sets::{GroundSet, SetFamily};
    use alloc::vec;

    fn ground(labels: &[&str]) -> GroundSet {
        GroundSet::new(labels.iter().copied()).unwrap()
    }

    fn powerset_choice(labels: &[&str], table: &[(Mask, Mask)]) -> ChoiceFunction {
        let fam = SetFamily::full_powerset(ground(labels));
        let mut full: Vec<(Mask, Mask)> = fam.members().iter().map(|&m| (m, m)).collect();
        for &(x, v) in table {
            full[fam.position(x).unwrap()] = (x, v);
        }
        ChoiceFunction::new(fam, &full).unwrap()
    }

    #[test]
    fn identity_satisfies_cum_and_friends() {
        let f = ChoiceFunction::identity(SetFamily::full_powerset(ground(&["a", "b"])));
        for cond in FIXED_CONDITIONS {
            // Identity violates nothing except mu-empty on the empty set,
            // which is vacuous here because f(∅)=∅ and ∅=∅.
            assert!(check(&f, cond).holds(), "{cond} should hold for identity");
        }
        assert!(check(&f, ConditionId::CumAlpha(2)).holds());
        assert!(check(&f, ConditionId::CumtAlpha(2)).holds());
    }

    #[test]
    fn subset_violation_is_witnessed_and_replays() {
        // f({a}) = {b} breaks mu-subset.
        let f = powerset_choice(&["a", "b"], &[(0b01, 0b10)]);
        let report = check(&f, ConditionId::Subset);
        assert_eq!(report.verdict, Verdict::Fails);
        let w = report.witness.unwrap();
        assert_eq!(w.set("X"), Some(0b01));
        assert_eq!(w.offending, Some(1));
        assert!(replay(&f, ConditionId::Subset, &w));
    }

    #[test]
    fn pr_violation_found_at_least_pair() {
        // f({a,b}) = {a,b}, f({a}) = ∅: PR fails at X={a} ⊆ Y={a,b}.
        let f = powerset_choice(&["a", "b"], &[(0b01, 0)]);
        let report = check(&f, ConditionId::Pr);
        assert_eq!(report.verdict, Verdict::Fails);
        let w = report.witness.unwrap();
        assert_eq!(w.set("X"), Some(0b01));
        assert_eq!(w.set("Y"), Some(0b11));
        assert!(replay(&f, ConditionId::Pr, &w));
    }

    #[test]
    fn or_tuples_skip_when_union_absent() {
        let g = ground(&["a", "b"]);
        let fam = SetFamily::new(g, vec![("A", 0b01), ("B", 0b10)]).unwrap();
        let f = ChoiceFunction::identity(fam);
        let report = check(&f, ConditionId::Or);
        assert!(report.holds());
        // (A,B) and (B,A) need {a,b}; (A,A) and (B,B) do not.
        assert_eq!(report.skipped, 2);
        assert_eq!(report.tuples, 2);
    }

    #[test]
    fn mu_in_fails_only_on_evaluable_partners() {
        // Family {a}, {a,b}, {a,b,c}; f: {a}→{a}, {a,b}→{a}, {a,b,c}→∅.
        // For X = {a,b,c}, a: the pair {a,c} is absent, the present pairs
        // {a} and {a,b} both keep a, so mu-in fails at (X, a).
        let g = ground(&["a", "b", "c"]);
        let fam = SetFamily::new(
            g,
            vec![("A", 0b001), ("AB", 0b011), ("ABC", 0b111)],
        )
        .unwrap();
        let f = ChoiceFunction::new(
            fam,
            &[(0b001, 0b001), (0b011, 0b001), (0b111, 0)],
        )
        .unwrap();
        let report = check(&f, ConditionId::In);
        assert_eq!(report.verdict, Verdict::Fails);
        let w = report.witness.unwrap();
        assert_eq!(w.set("X"), Some(0b111));
        assert_eq!(w.element("a"), Some(0));
        assert!(replay(&f, ConditionId::In, &w));
    }

    #[test]
    fn mu_in_skips_when_no_pair_evaluable() {
        let g = ground(&["a", "b", "c"]);
        let fam = SetFamily::new(g, vec![("ABC", 0b111)]).unwrap();
        let f = ChoiceFunction::new(fam, &[(0b111, 0b100)]).unwrap();
        let report = check(&f, ConditionId::In);
        assert!(report.holds());
        assert_eq!(report.skipped, 2);
    }

    #[test]
    fn resm_follows_cm_under_subset() {
        // f(X) ⊆ X everywhere and CM holds ⇒ ResM holds.
        let f = powerset_choice(&["a", "b", "c"], &[(0b111, 0b001), (0b011, 0b001), (0b101, 0b001)]);
        if check(&f, ConditionId::Cm).holds() {
            assert!(check(&f, ConditionId::ResM).holds());
        }
    }

    #[test]
    fn resm_witness_replays_through_original_body() {
        // f({a,b}) = {a}, f({a}) = {a}? identity elsewhere. Break CM:
        // f({a,b}) = {a}, f({a}) = {a} fine; force f({a}) ⊄ f({a,b}):
        let f = powerset_choice(&["a", "b"], &[(0b11, 0b01), (0b01, 0b11)]);
        // f({a}) = {a,b} violates mu-subset but ResM only needs the bodies.
        let report = check(&f, ConditionId::ResM);
        assert_eq!(report.verdict, Verdict::Fails);
        let w = report.witness.unwrap();
        assert!(replay(&f, ConditionId::ResM, &w));
    }

    #[test]
    fn cum_chain_identity_holds_any_alpha() {
        let f = ChoiceFunction::identity(SetFamily::full_powerset(ground(&["a", "b"])));
        for a in 0..4 {
            assert!(check_cum(&f, a, false).holds());
            assert!(check_cum(&f, a, true).holds());
        }
    }

    #[test]
    fn cum_zero_variants_coincide() {
        let f = powerset_choice(&["a", "b", "c"], &[(0b111, 0b001), (0b011, 0b010)]);
        let plain = check_cum(&f, 0, false);
        let trans = check_cum(&f, 0, true);
        assert_eq!(plain.verdict, trans.verdict);
        assert_eq!(
            plain.witness.map(|w| (w.set("U"), w.seq("X").map(<[Mask]>::to_vec))),
            trans.witness.map(|w| (w.set("U"), w.seq("X").map(<[Mask]>::to_vec)))
        );
    }

    #[test]
    fn check_all_orders_reports_deterministically() {
        let f = ChoiceFunction::identity(SetFamily::full_powerset(ground(&["a"])));
        let reports = check_all(&f, 1);
        assert_eq!(reports.len(), FIXED_CONDITIONS.len() + 4);
        assert_eq!(reports[0].condition, ConditionId::Subset);
        assert_eq!(reports[FIXED_CONDITIONS.len()].condition, ConditionId::CumAlpha(0));
        assert_eq!(reports.last().unwrap().condition, ConditionId::CumtAlpha(1));
    }

    #[test]
    fn condition_tags_round_trip() {
        for cond in FIXED_CONDITIONS {
            assert_eq!(ConditionId::parse(cond.tag(), None), Some(cond));
        }
        assert_eq!(ConditionId::parse("mu-cum", Some(3)), Some(ConditionId::CumAlpha(3)));
        assert_eq!(ConditionId::parse("mu-cumt", Some(0)), Some(ConditionId::CumtAlpha(0)));
        assert_eq!(ConditionId::parse("mu-cum", None), None);
    }
}
