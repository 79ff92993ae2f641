//! Builders for the two reference instances and the end-to-end claim
//! verifier behind the `verify` command.
//!
//! The first builder produces, for a finite parameter `kappa ≥ 1`, the
//! non-transitive structure whose intersection-closed family satisfies the
//! whole cumulativity ladder below `kappa` but breaks exactly at
//! `mu-cum(kappa)`. The second produces the three-element smooth structure
//! that separates the transitive chain variant already at length one.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::conditions::{self, Binding, ConditionId, ConditionReport, Witness};
use crate::preferential::PreferentialStructure;
use crate::sets::{
    close_under_intersections, is_closed_under, ChoiceFunction, ClosureOp, GroundSet, Mask,
    SetFamily,
};

/// Default upper bound for `kappa`: the chain search is
/// `|family|^(kappa+2)` in the worst case.
pub const DEFAULT_KAPPA_GUARD: u32 = 6;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BuildError {
    KappaOutOfRange { kappa: u32, guard: u32 },
    AlphaOutOfRange { alpha: u32 },
}

impl core::fmt::Display for BuildError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            BuildError::KappaOutOfRange { kappa, guard } => {
                write!(f, "kappa-out-of-range: kappa={kappa}, allowed 1..={guard}")
            }
            BuildError::AlphaOutOfRange { alpha } => {
                write!(f, "alpha must be >= 1, got {alpha}")
            }
        }
    }
}

/// The chain-separation instance for a finite `kappa`.
#[derive(Debug, Clone)]
pub struct CumExampleInstance {
    pub kappa: u32,
    pub structure: PreferentialStructure,
    pub generators: SetFamily,
    pub closed_family: SetFamily,
    pub choice: ChoiceFunction,
}

/// Build the instance for `1 ≤ kappa ≤ guard`.
///
/// Ground set, in declared order: `a, b, c, x0..x{kappa+1}, x'0..x'{kappa}`.
/// Relation (one copy per element, deliberately not transitively closed):
/// `a ≺ b`, `b ≺ c`, `x_i ≺ x_{i+1}` and `x_i ≺ x'_i` for `i ≤ kappa`.
/// Generators: `U = {a,c,x0}`, `X_i = {c,x_i,x'_i,x_{i+1}}` for `i < kappa`,
/// and `X'_kappa = {a,b,c,x_kappa,x'_kappa,x_{kappa+1}}`.
/// The choice function is `mu` restricted to the intersection closure of the
/// generators.
pub fn build_cum_example(kappa: u32, guard: u32) -> Result<CumExampleInstance, BuildError> {
    if kappa < 1 || kappa > guard {
        return Err(BuildError::KappaOutOfRange { kappa, guard });
    }
    let k = kappa as usize;
    let mut labels: Vec<String> = Vec::with_capacity(3 + (k + 2) + (k + 1));
    labels.push("a".into());
    labels.push("b".into());
    labels.push("c".into());
    for i in 0..=k + 1 {
        labels.push(format!("x{i}"));
    }
    for i in 0..=k {
        labels.push(format!("x'{i}"));
    }
    let ground = GroundSet::new(labels).expect("small distinct label set");

    let mut relation: Vec<(String, String)> = Vec::new();
    relation.push(("a".into(), "b".into()));
    relation.push(("b".into(), "c".into()));
    for i in 0..=k {
        relation.push((format!("x{i}"), format!("x{}", i + 1)));
        relation.push((format!("x{i}"), format!("x'{i}")));
    }
    let rel_refs: Vec<(&str, &str)> =
        relation.iter().map(|(l, h)| (l.as_str(), h.as_str())).collect();
    let structure = PreferentialStructure::one_copy_from_labels(ground.clone(), &rel_refs)
        .expect("all endpoints declared");

    let mut entries: Vec<(String, Mask)> = Vec::new();
    entries.push(("U".into(), ground.mask_of(["a", "c", "x0"]).unwrap()));
    for i in 0..k {
        let xi = format!("x{i}");
        let xpi = format!("x'{i}");
        let xn = format!("x{}", i + 1);
        let m = ground
            .mask_of(["c", xi.as_str(), xpi.as_str(), xn.as_str()])
            .unwrap();
        entries.push((format!("X_{i}"), m));
    }
    let xk = format!("x{k}");
    let xpk = format!("x'{k}");
    let xk1 = format!("x{}", k + 1);
    let top = ground
        .mask_of(["a", "b", "c", xk.as_str(), xpk.as_str(), xk1.as_str()])
        .unwrap();
    entries.push((format!("X'_{k}"), top));

    let generators = SetFamily::new(ground, entries).expect("distinct generators");
    let closed_family = close_under_intersections(&generators);
    let choice = structure
        .induced_choice(&closed_family)
        .expect("same ground");
    Ok(CumExampleInstance { kappa, structure, generators, closed_family, choice })
}

/// The three-element instance: ground `{a,b,c}`, order `c ≺ b ≺ a` without
/// transitive closure, family `U = {a,c}`, `X_0 = {b,c}`, `X_1 = … = X_alpha
/// = {a,b}` plus all their intersections `{a}`, `{b}`, `{c}`, `∅`.
///
/// The repeated chain sets collapse to a single member by extension; `alpha`
/// only lengthens the chain the caller will test.
pub fn build_fact_instance(alpha: u32) -> Result<(PreferentialStructure, SetFamily), BuildError> {
    if alpha < 1 {
        return Err(BuildError::AlphaOutOfRange { alpha });
    }
    let ground = GroundSet::new(["a", "b", "c"]).unwrap();
    let structure =
        PreferentialStructure::one_copy_from_labels(ground.clone(), &[("c", "b"), ("b", "a")])
            .unwrap();
    let mut entries: Vec<(String, Mask)> = Vec::new();
    entries.push(("U".into(), ground.mask_of(["a", "c"]).unwrap()));
    entries.push(("X_0".into(), ground.mask_of(["b", "c"]).unwrap()));
    for i in 1..=alpha {
        entries.push((format!("X_{i}"), ground.mask_of(["a", "b"]).unwrap()));
    }
    entries.push(("{a}".into(), ground.mask_of(["a"]).unwrap()));
    entries.push(("{b}".into(), ground.mask_of(["b"]).unwrap()));
    entries.push(("{c}".into(), ground.mask_of(["c"]).unwrap()));
    entries.push(("∅".into(), 0));
    let family = SetFamily::new(ground, entries).unwrap();
    Ok((structure, family))
}

/// One verified claim about a built instance.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClaimOutcome {
    pub id: &'static str,
    pub description: String,
    pub confirmed: bool,
}

/// Verdicts for the five claims, plus the failure witness of the last one.
#[derive(Debug, Clone)]
pub struct CumExampleReport {
    pub kappa: u32,
    pub claims: Vec<ClaimOutcome>,
    /// The `mu-cum(kappa)` refutation, present when claim (e) confirmed.
    pub cum_failure: Option<ConditionReport>,
}

impl CumExampleReport {
    pub fn all_confirmed(&self) -> bool {
        self.claims.iter().all(|c| c.confirmed)
    }

    pub fn first_violated(&self) -> Option<&ClaimOutcome> {
        self.claims.iter().find(|c| !c.confirmed)
    }
}

#[derive(Debug, Clone)]
pub struct ClaimViolated {
    pub claim: &'static str,
    pub report: CumExampleReport,
}

impl core::fmt::Display for ClaimViolated {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        write!(f, "claim-violated: {}", self.claim)
    }
}

/// Check the five claims about a built instance:
///
/// (a) `mu-subset` and `mu-PR` hold, (b) `mu-CUM` holds, (c) the family is
/// intersection closed, (d) `mu-cumt(α)` holds for every `α < kappa`,
/// (e) `mu-cum(kappa)` fails with offending element `c` on the witness
/// sequence `U, X_0, …, X_{kappa-1}, X'_kappa`.
pub fn verify_cum_example(
    instance: &CumExampleInstance,
) -> Result<CumExampleReport, ClaimViolated> {
    let f = &instance.choice;
    let fam = &instance.closed_family;
    let ground = fam.ground();
    let kappa = instance.kappa;
    let mut claims = Vec::new();

    let subset = conditions::check(f, ConditionId::Subset).holds();
    let pr = conditions::check(f, ConditionId::Pr).holds();
    claims.push(ClaimOutcome {
        id: "a",
        description: "mu-subset and mu-PR hold".into(),
        confirmed: subset && pr,
    });

    claims.push(ClaimOutcome {
        id: "b",
        description: "mu-CUM holds".into(),
        confirmed: conditions::check(f, ConditionId::Cum).holds(),
    });

    claims.push(ClaimOutcome {
        id: "c",
        description: "family is closed under finite intersections".into(),
        confirmed: is_closed_under(fam, ClosureOp::FiniteIntersection).is_none(),
    });

    let mut cumt_ok = true;
    for alpha in 0..kappa {
        if !conditions::check_cum(f, alpha, true).holds() {
            cumt_ok = false;
            break;
        }
    }
    claims.push(ClaimOutcome {
        id: "d",
        description: format!("mu-cumt(alpha) holds for every alpha < {kappa}"),
        confirmed: cumt_ok,
    });

    let cum_report = conditions::check_cum(f, kappa, false);
    let expected = expected_failure_witness(instance);
    let (e_ok, cum_failure) = match (&cum_report.witness, expected) {
        (Some(got), Some(want)) => {
            let matches = got.set("U") == want.set("U")
                && got.seq("X") == want.seq("X")
                && got.offending == ground.index_of("c");
            (matches && !cum_report.holds(), Some(cum_report.clone()))
        }
        _ => (false, None),
    };
    claims.push(ClaimOutcome {
        id: "e",
        description: format!(
            "mu-cum({kappa}) fails at element c on the sequence U, X_0, …, X'_{kappa}"
        ),
        confirmed: e_ok,
    });

    let report = CumExampleReport { kappa, claims, cum_failure };
    match report.first_violated() {
        Some(c) => Err(ClaimViolated { claim: c.id, report: report.clone() }),
        None => Ok(report),
    }
}

/// The witness claim (e) expects: `U` bound to the generator `U`, the chain
/// running through every `X_i` and ending at `X'_kappa`.
fn expected_failure_witness(instance: &CumExampleInstance) -> Option<Witness> {
    let gens = &instance.generators;
    let u = gens.mask_by_name("U")?;
    let mut seq = Vec::with_capacity(instance.kappa as usize + 1);
    for i in 0..instance.kappa {
        seq.push(gens.mask_by_name(&format!("X_{i}"))?);
    }
    seq.push(gens.mask_by_name(&format!("X'_{}", instance.kappa))?);
    Some(Witness {
        bindings: alloc::vec![("U", Binding::Set(u)), ("X", Binding::Seq(seq))],
        offending: instance.closed_family.ground().index_of("c"),
    })
}
