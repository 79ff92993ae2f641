//! Finite propositional semantics: theories as model sets, the induced
//! consequence operation, and the logical-rule checkers that pair with the
//! algebraic ones in [`crate::conditions`].
//!
//! In a finite language a deductively closed theory and its model set
//! determine each other exactly, so theories never materialize as formula
//! sets here: a [`TheoryRep`] is a subset of the `2^n` models and every rule
//! is stated through that bijection. Two consequences of the representation:
//! theory inclusion flips to model-set inclusion (`T ⊆ S` iff
//! `M(S) ⊆ M(T)`), and the rules `AND`, `RW`, `CCL`, `LLE` hold outright
//! because every represented theory is closed.
//!
//! The checkers quantify theories over the members of the consequence
//! operation's family and skip tuples whose compound theory (`T ∪ T'`
//! intersects model sets, `T ∨ T'` unions them) falls outside it, mirroring
//! the domain-partiality rule of the algebraic checkers.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::conditions::{Binding, Tuple as CondTuple, Verdict, Witness};
use crate::preferential::PreferentialStructure;
use crate::sets::{ChoiceFunction, GroundSet, Mask, SetError, SetFamily};

/// Languages are capped so the full powerset family stays enumerable.
pub const MAX_VARS: usize = 4;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LogicError {
    TooManyVars { got: usize },
    NoVars,
    DuplicateVar(String),
    Set(SetError),
}

impl fmt::Display for LogicError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LogicError::TooManyVars { got } => {
                write!(f, "{got} propositional variables exceed the limit of {MAX_VARS}")
            }
            LogicError::NoVars => write!(f, "a language needs at least one variable"),
            LogicError::DuplicateVar(v) => write!(f, "duplicate variable {v:?}"),
            LogicError::Set(e) => write!(f, "{e}"),
        }
    }
}

impl From<SetError> for LogicError {
    fn from(e: SetError) -> Self {
        LogicError::Set(e)
    }
}

/// A classical propositional language with at most [`MAX_VARS`] variables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PropLanguage {
    vars: Vec<String>,
}

impl PropLanguage {
    pub fn new<I, S>(vars: I) -> Result<Self, LogicError>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let vars: Vec<String> = vars.into_iter().map(Into::into).collect();
        if vars.is_empty() {
            return Err(LogicError::NoVars);
        }
        if vars.len() > MAX_VARS {
            return Err(LogicError::TooManyVars { got: vars.len() });
        }
        for (i, v) in vars.iter().enumerate() {
            if vars[..i].contains(v) {
                return Err(LogicError::DuplicateVar(v.clone()));
            }
        }
        Ok(PropLanguage { vars })
    }

    /// `n` variables named from `p, q, r, s`.
    pub fn with_var_count(n: usize) -> Result<Self, LogicError> {
        const NAMES: [&str; MAX_VARS] = ["p", "q", "r", "s"];
        if n == 0 {
            return Err(LogicError::NoVars);
        }
        if n > MAX_VARS {
            return Err(LogicError::TooManyVars { got: n });
        }
        PropLanguage::new(NAMES[..n].iter().copied())
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn model_count(&self) -> usize {
        1 << self.vars.len()
    }

    /// Literal notation for a model: each variable in order, with a combining
    /// macron when false. Model `0b01` over `p, q` prints as `pq̄`.
    pub fn model_label(&self, model: usize) -> String {
        let mut s = String::new();
        for (i, v) in self.vars.iter().enumerate() {
            s.push_str(v);
            if model & (1 << i) == 0 {
                s.push('\u{0304}');
            }
        }
        s
    }

    /// The ground set of all models, in valuation order.
    pub fn model_ground(&self) -> GroundSet {
        GroundSet::new((0..self.model_count()).map(|m| self.model_label(m)))
            .expect("model labels are distinct")
    }
}

/// A deductively closed theory, represented losslessly by its model set.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TheoryRep {
    pub model_set: Mask,
}

/// `Th(X)` for a set of models: in this representation the closure is the
/// identity on model sets.
pub fn theory_of(models: &[usize]) -> TheoryRep {
    let mut m = 0;
    for &i in models {
        m |= 1 << i;
    }
    TheoryRep { model_set: m }
}

/// Models of a theory, as valuation indices.
pub fn models_of(t: TheoryRep) -> Vec<usize> {
    crate::sets::elements(t.model_set).collect()
}

/// A nonmonotonic consequence operation: a choice function over a family of
/// model sets. The induced relation is defined exactly on theories whose
/// model set lies in the family.
#[derive(Debug, Clone)]
pub struct ConsequenceOp {
    lang: PropLanguage,
    choice: ChoiceFunction,
}

impl ConsequenceOp {
    pub fn new(lang: PropLanguage, choice: ChoiceFunction) -> Result<Self, LogicError> {
        if choice.family().ground() != &lang.model_ground() {
            return Err(LogicError::Set(SetError::GroundMismatch));
        }
        Ok(ConsequenceOp { lang, choice })
    }

    /// The operation induced by a preferential structure over the model
    /// ground, on the family of all model sets.
    pub fn from_structure(
        lang: PropLanguage,
        structure: &PreferentialStructure,
    ) -> Result<Self, LogicError> {
        let family = SetFamily::full_powerset(lang.model_ground());
        let choice = structure
            .induced_choice(&family)
            .map_err(|_| LogicError::Set(SetError::GroundMismatch))?;
        ConsequenceOp::new(lang, choice)
    }

    pub fn lang(&self) -> &PropLanguage {
        &self.lang
    }

    pub fn choice(&self) -> &ChoiceFunction {
        &self.choice
    }

    /// The nonmonotonic consequences of `t`: the theory of the chosen models.
    pub fn consequences(&self, t: TheoryRep) -> Result<TheoryRep, SetError> {
        self.choice.eval(t.model_set).map(|m| TheoryRep { model_set: m })
    }
}

/// The logical rules checkable on a consequence operation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RuleId {
    And,
    Rw,
    Ccl,
    Lle,
    Sc,
    Ref,
    Cp,
    Pr,
    Cut,
    Cm,
    ResM,
    Cum,
    SubsetSupset,
    RatM,
    RatMEq,
    LogEqPrime,
    LogParallel,
    LogCup,
    LogCupPrime,
    Or,
    WOr,
    DisjOr,
}

pub const ALL_RULES: [RuleId; 22] = [
    RuleId::And,
    RuleId::Rw,
    RuleId::Ccl,
    RuleId::Lle,
    RuleId::Sc,
    RuleId::Ref,
    RuleId::Cp,
    RuleId::Pr,
    RuleId::Cut,
    RuleId::Cm,
    RuleId::ResM,
    RuleId::Cum,
    RuleId::SubsetSupset,
    RuleId::RatM,
    RuleId::RatMEq,
    RuleId::LogEqPrime,
    RuleId::LogParallel,
    RuleId::LogCup,
    RuleId::LogCupPrime,
    RuleId::Or,
    RuleId::WOr,
    RuleId::DisjOr,
];

impl RuleId {
    pub fn tag(self) -> &'static str {
        match self {
            RuleId::And => "AND",
            RuleId::Rw => "RW",
            RuleId::Ccl => "CCL",
            RuleId::Lle => "LLE",
            RuleId::Sc => "SC",
            RuleId::Ref => "REF",
            RuleId::Cp => "CP",
            RuleId::Pr => "PR",
            RuleId::Cut => "CUT",
            RuleId::Cm => "CM",
            RuleId::ResM => "ResM",
            RuleId::Cum => "CUM",
            RuleId::SubsetSupset => "subset-supset",
            RuleId::RatM => "RatM",
            RuleId::RatMEq => "RatM=",
            RuleId::LogEqPrime => "Log='",
            RuleId::LogParallel => "Log-parallel",
            RuleId::LogCup => "Log-cup",
            RuleId::LogCupPrime => "Log-cup'",
            RuleId::Or => "OR",
            RuleId::WOr => "wOR",
            RuleId::DisjOr => "disjOR",
        }
    }

    pub fn parse(tag: &str) -> Option<RuleId> {
        ALL_RULES.iter().copied().find(|r| r.tag() == tag)
    }

    /// Rules that hold by the model-set representation itself.
    pub fn holds_by_representation(self) -> bool {
        matches!(self, RuleId::And | RuleId::Rw | RuleId::Ccl | RuleId::Lle)
    }
}

impl fmt::Display for RuleId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

/// Report shape shared with the algebraic checkers; theory bindings are
/// model sets named `T`, `T'`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RuleReport {
    pub rule: RuleId,
    pub verdict: Verdict,
    pub witness: Option<Witness>,
    pub tuples: u64,
    pub skipped: u64,
}

impl RuleReport {
    pub fn holds(&self) -> bool {
        self.verdict == Verdict::Holds
    }
}

fn viol(m: Mask) -> CondTuple {
    if m == 0 {
        CondTuple::Holds
    } else {
        CondTuple::Fails(Some(m.trailing_zeros() as usize))
    }
}

/// Evaluate one rule body on the theories with model sets `mt`, `mt2`.
///
/// Theory-level statements translate as: `cons(T)` is the model set of the
/// consequence theory, i.e. `f(M_T)`; `T ∪ T'` has model set `mt & mt2`;
/// `T ∨ T'` has model set `mt | mt2`; an inclusion between closed theories
/// reverses into one between their model sets; `Con(…)` is nonemptiness of
/// the corresponding model set.
fn eval_rule(f: &ChoiceFunction, rule: RuleId, mt: Mask, mt2: Mask) -> CondTuple {
    let cons_t = f.eval(mt).expect("quantified theory is in the family");
    let cons_t2 = f.eval(mt2).expect("quantified theory is in the family");
    match rule {
        RuleId::And | RuleId::Rw | RuleId::Ccl | RuleId::Lle => CondTuple::Holds,
        // SC: the classical closure of T is among its consequences, i.e. the
        // chosen models all satisfy T. REF reads the same at theory level.
        RuleId::Sc | RuleId::Ref => viol(cons_t & !mt),
        // CP: an inconsistent consequence set forces an inconsistent T.
        RuleId::Cp => {
            if cons_t == 0 && mt != 0 {
                CondTuple::Fails(Some(mt.trailing_zeros() as usize))
            } else {
                CondTuple::Holds
            }
        }
        // PR: consequences of T ∪ T' stay below the closure of cons(T) ∪ T'.
        // cons(T) ∪ T' has model set cons_t & mt2; T ∪ T' has mt & mt2.
        RuleId::Pr => {
            if cons_t & mt2 == 0 {
                return CondTuple::Holds;
            }
            match f.eval(mt & mt2) {
                Ok(cons_union) => viol((cons_t & mt2) & !cons_union),
                Err(_) => CondTuple::Skip,
            }
        }
        // CUT / CM / CUM share the premise T ⊆ closure(T') ⊆ cons(T),
        // i.e. cons_t ⊆ mt2 ⊆ mt on model sets.
        RuleId::Cut => {
            if cons_t & !mt2 == 0 && mt2 & !mt == 0 {
                viol(cons_t & !cons_t2)
            } else {
                CondTuple::Holds
            }
        }
        RuleId::Cm => {
            if cons_t & !mt2 == 0 && mt2 & !mt == 0 {
                viol(cons_t2 & !cons_t)
            } else {
                CondTuple::Holds
            }
        }
        RuleId::Cum => {
            if cons_t & !mt2 == 0 && mt2 & !mt == 0 {
                viol(cons_t ^ cons_t2)
            } else {
                CondTuple::Holds
            }
        }
        // (⊆⊇): T ⊆ cons(T') and T' ⊆ cons(T) force equal consequences.
        RuleId::SubsetSupset => {
            if cons_t2 & !mt == 0 && cons_t & !mt2 == 0 {
                viol(cons_t ^ cons_t2)
            } else {
                CondTuple::Holds
            }
        }
        // RatM: T consistent with cons(T') and T ⊢ T' pull cons(T) under
        // the closure of cons(T') ∪ T. `T ⊢ T'` is read as M_T ⊆ M_T'.
        RuleId::RatM => {
            if mt & !mt2 == 0 && mt & cons_t2 != 0 {
                viol(cons_t & !(cons_t2 & mt))
            } else {
                CondTuple::Holds
            }
        }
        RuleId::RatMEq => {
            if mt & !mt2 == 0 && mt & cons_t2 != 0 {
                viol(cons_t ^ (cons_t2 & mt))
            } else {
                CondTuple::Holds
            }
        }
        // Log=': consistency of cons(T') with T makes T ∪ T' conclude
        // exactly the closure of cons(T') ∪ T.
        RuleId::LogEqPrime => {
            if cons_t2 & mt == 0 {
                return CondTuple::Holds;
            }
            match f.eval(mt2 & mt) {
                Ok(cons_union) => viol(cons_union ^ (cons_t2 & mt)),
                Err(_) => CondTuple::Skip,
            }
        }
        // Log-parallel: the consequences of T ∨ T' are those of T, of T',
        // or of their theory intersection (model-set union).
        RuleId::LogParallel => match f.eval(mt | mt2) {
            Ok(cons_or) => {
                if cons_or == cons_t || cons_or == cons_t2 || cons_or == cons_t | cons_t2 {
                    CondTuple::Holds
                } else {
                    CondTuple::Fails(None)
                }
            }
            Err(_) => CondTuple::Skip,
        },
        // Log-cup / Log-cup': cons(T') consistent with T but not with
        // cons(T) decides the consequences of T ∨ T'.
        RuleId::LogCup => {
            if !(cons_t2 & mt != 0 && cons_t2 & cons_t == 0) {
                return CondTuple::Holds;
            }
            match f.eval(mt | mt2) {
                Ok(cons_or) => viol(cons_or & mt2),
                Err(_) => CondTuple::Skip,
            }
        }
        RuleId::LogCupPrime => {
            if !(cons_t2 & mt != 0 && cons_t2 & cons_t == 0) {
                return CondTuple::Holds;
            }
            match f.eval(mt | mt2) {
                Ok(cons_or) => viol(cons_or ^ cons_t),
                Err(_) => CondTuple::Skip,
            }
        }
        // OR family: common consequences of the disjuncts survive
        // disjunction (weakened or guarded as stated).
        RuleId::Or => match f.eval(mt | mt2) {
            Ok(cons_or) => viol(cons_or & !(cons_t | cons_t2)),
            Err(_) => CondTuple::Skip,
        },
        RuleId::WOr => match f.eval(mt | mt2) {
            Ok(cons_or) => viol(cons_or & !(cons_t | mt2)),
            Err(_) => CondTuple::Skip,
        },
        RuleId::DisjOr => {
            if mt & mt2 != 0 {
                return CondTuple::Holds;
            }
            match f.eval(mt | mt2) {
                Ok(cons_or) => viol(cons_or & !(cons_t | cons_t2)),
                Err(_) => CondTuple::Skip,
            }
        }
        RuleId::ResM => unreachable!("ResM is checked by its own loop"),
    }
}

/// Check one logical rule over all theory tuples representable in the
/// operation's family.
pub fn check_rule(op: &ConsequenceOp, rule: RuleId) -> RuleReport {
    let f = op.choice();
    if rule.holds_by_representation() {
        return RuleReport { rule, verdict: Verdict::Holds, witness: None, tuples: 0, skipped: 0 };
    }
    match rule {
        RuleId::Sc | RuleId::Ref | RuleId::Cp => {
            let mut tuples = 0;
            for &mt in f.family().members() {
                tuples += 1;
                if let CondTuple::Fails(off) = eval_rule(f, rule, mt, mt) {
                    return RuleReport {
                        rule,
                        verdict: Verdict::Fails,
                        witness: Some(Witness {
                            bindings: alloc::vec![("T", Binding::Set(mt))],
                            offending: off,
                        }),
                        tuples,
                        skipped: 0,
                    };
                }
            }
            RuleReport { rule, verdict: Verdict::Holds, witness: None, tuples, skipped: 0 }
        }
        RuleId::ResM => check_resm_rule(op),
        _ => {
            let mut tuples = 0;
            let mut skipped = 0;
            for &mt in f.family().members() {
                for &mt2 in f.family().members() {
                    match eval_rule(f, rule, mt, mt2) {
                        CondTuple::Holds => tuples += 1,
                        CondTuple::Skip => skipped += 1,
                        CondTuple::Fails(off) => {
                            tuples += 1;
                            return RuleReport {
                                rule,
                                verdict: Verdict::Fails,
                                witness: Some(Witness {
                                    bindings: alloc::vec![
                                        ("T", Binding::Set(mt)),
                                        ("T'", Binding::Set(mt2)),
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
            RuleReport { rule, verdict: Verdict::Holds, witness: None, tuples, skipped }
        }
    }
}

/// ResM at theory level: consequences below two formulas let the stronger
/// premise keep the second, `Δ |~ α ∧ β ⇒ Δ, α |~ β`. The formula sets
/// range over all model sets; as in the algebraic checker the strongest
/// instances are walked through the members `W` between `M_Δ ∩ cons(Δ)`
/// and `M_Δ`.
fn check_resm_rule(op: &ConsequenceOp) -> RuleReport {
    let f = op.choice();
    let mut tuples = 0;
    for &mt in f.family().members() {
        let cons_t = f.eval(mt).expect("member");
        for &w in f.family().members() {
            if (mt & cons_t) & !w != 0 || w & !mt != 0 {
                continue;
            }
            tuples += 1;
            let cons_w = f.eval(w).expect("member");
            if cons_w & !cons_t != 0 {
                return RuleReport {
                    rule: RuleId::ResM,
                    verdict: Verdict::Fails,
                    witness: Some(Witness {
                        bindings: alloc::vec![
                            ("T", Binding::Set(mt)),
                            ("A", Binding::Set(w | cons_t)),
                            ("B", Binding::Set(cons_t)),
                        ],
                        offending: Some((cons_w & !cons_t).trailing_zeros() as usize),
                    }),
                    tuples,
                    skipped: 0,
                };
            }
        }
    }
    RuleReport { rule: RuleId::ResM, verdict: Verdict::Holds, witness: None, tuples, skipped: 0 }
}

/// Check every rule, in `ALL_RULES` order.
pub fn check_all_rules(op: &ConsequenceOp) -> Vec<RuleReport> {
    ALL_RULES.iter().map(|&r| check_rule(op, r)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::conditions::{self, ConditionId};
    use alloc::vec;

    fn two_model_op(table: &[(Mask, Mask)]) -> ConsequenceOp {
        let lang = PropLanguage::with_var_count(1).unwrap();
        let fam = SetFamily::full_powerset(lang.model_ground());
        let mut entries: Vec<(Mask, Mask)> = fam.members().iter().map(|&m| (m, m)).collect();
        for &(x, v) in table {
            entries[fam.position(x).unwrap()] = (x, v);
        }
        let choice = ChoiceFunction::new(fam, &entries).unwrap();
        ConsequenceOp::new(lang, choice).unwrap()
    }

    #[test]
    fn model_labels_use_macron_for_false() {
        let lang = PropLanguage::with_var_count(2).unwrap();
        assert_eq!(lang.model_label(0b00), "p\u{304}q\u{304}");
        assert_eq!(lang.model_label(0b01), "pq\u{304}");
        assert_eq!(lang.model_label(0b11), "pq");
    }

    #[test]
    fn theory_and_models_are_mutually_inverse() {
        let t = theory_of(&[0, 2]);
        assert_eq!(t.model_set, 0b101);
        assert_eq!(models_of(t), vec![0, 2]);
        // All models: the tautologies-only theory.
        assert_eq!(theory_of(&[0, 1, 2, 3]).model_set, 0b1111);
        // No models: the inconsistent theory.
        assert_eq!(models_of(TheoryRep { model_set: 0 }), Vec::<usize>::new());
    }

    #[test]
    fn identity_choice_makes_all_rules_classical() {
        let op = two_model_op(&[]);
        for rule in ALL_RULES {
            assert!(check_rule(&op, rule).holds(), "{rule} should hold for identity");
        }
    }

    #[test]
    fn preference_for_one_model_yields_nonmonotonic_consequence() {
        // One variable p; prefer the p̄ model below the p model... here:
        // models 0 = p̄, 1 = p. Structure: 0 ≺ 1 over theory "all models".
        let lang = PropLanguage::with_var_count(1).unwrap();
        let ground = lang.model_ground();
        let labels: Vec<&str> = ground.labels().iter().map(|s| s.as_str()).collect();
        let s =
            PreferentialStructure::one_copy_from_labels(ground.clone(), &[(labels[0], labels[1])])
                .unwrap();
        let op = ConsequenceOp::from_structure(lang, &s).unwrap();
        let top = TheoryRep { model_set: 0b11 };
        let cons = op.consequences(top).unwrap();
        assert_eq!(cons.model_set, 0b01);
        // Idempotent once (mu-subset)+(mu-CUM) hold.
        assert!(conditions::check(op.choice(), ConditionId::Subset).holds());
        assert!(conditions::check(op.choice(), ConditionId::Cum).holds());
        assert_eq!(op.consequences(cons).unwrap(), cons);
    }

    #[test]
    fn sc_fails_when_choice_leaves_the_theory() {
        // cons({model 0}) = {model 1}: supraclassicality breaks.
        let op = two_model_op(&[(0b01, 0b10)]);
        let report = check_rule(&op, RuleId::Sc);
        assert_eq!(report.verdict, Verdict::Fails);
        let w = report.witness.unwrap();
        assert_eq!(w.set("T"), Some(0b01));
        // The paired algebraic condition agrees.
        assert!(!conditions::check(op.choice(), ConditionId::Subset).holds());
    }

    #[test]
    fn cp_flags_empty_choice_on_consistent_theory() {
        let op = two_model_op(&[(0b01, 0)]);
        let report = check_rule(&op, RuleId::Cp);
        assert_eq!(report.verdict, Verdict::Fails);
        assert!(!conditions::check(op.choice(), ConditionId::Empty).holds());
    }

    #[test]
    fn consequences_outside_family_error() {
        let lang = PropLanguage::with_var_count(1).unwrap();
        let ground = lang.model_ground();
        let fam = SetFamily::new(ground, vec![("top", 0b11)]).unwrap();
        let choice = ChoiceFunction::identity(fam);
        let op = ConsequenceOp::new(lang, choice).unwrap();
        assert!(op.consequences(TheoryRep { model_set: 0b01 }).is_err());
    }
}
