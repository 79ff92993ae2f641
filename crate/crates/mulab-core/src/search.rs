//! Brute-force implication laboratory: exhaustive enumeration of small
//! instances and the catalog runner for implication rows.
//!
//! An instance is a pair of a set family over a synthetic ground set
//! `e0, e1, …` and a choice function on it, either free-standing or induced
//! by an enumerated preferential structure. Enumeration order is canonical
//! and total: families ascending by their subset-selection mask, choice
//! tables lexicographic with the first member most significant (each digit
//! running over submasks in ascending numeric value when subset pruning is
//! on), relations ascending by edge mask. Every instance owns a raw cursor
//! index in that order; refutation searches report the least raw index, so
//! results do not depend on how the entry list is partitioned across
//! workers.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::conditions::{self, ConditionId, ConditionReport};
use crate::preferential::{Copy, PreferentialStructure};
use crate::sets::{ChoiceFunction, GroundSet, Mask, SetFamily};

/// Enumeration is exhaustive only for small grounds; past this the family
/// space alone is not iterable.
pub const MAX_ENUM_GROUND: u32 = 4;

/// Default cap on raw instances per search.
pub const DEFAULT_MAX_INSTANCES: u64 = 1 << 28;

/// Default plan-entry granularity: large family blocks are split into
/// cursor ranges of this size so workers stay balanced.
pub const DEFAULT_CHUNK: u64 = 1 << 18;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SearchError {
    GroundTooLarge { ground_size: u32 },
    SpaceTooLarge { cardinality: u128, guard: u64 },
}

impl fmt::Display for SearchError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SearchError::GroundTooLarge { ground_size } => write!(
                f,
                "ground size {ground_size} is beyond exhaustive enumeration (max {MAX_ENUM_GROUND})"
            ),
            SearchError::SpaceTooLarge { cardinality, guard } => write!(
                f,
                "search-space-too-large: {cardinality} raw instances exceed the guard of {guard}"
            ),
        }
    }
}

/// Closure-style requirements on the enumerated families.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FamilyConstraint {
    IntersectionClosed,
    UnionClosed,
    DifferenceClosed,
    ContainsSingletons,
    FullPowerset,
}

impl FamilyConstraint {
    pub fn tag(self) -> &'static str {
        match self {
            FamilyConstraint::IntersectionClosed => "intersection-closed",
            FamilyConstraint::UnionClosed => "union-closed",
            FamilyConstraint::DifferenceClosed => "difference-closed",
            FamilyConstraint::ContainsSingletons => "contains-singletons",
            FamilyConstraint::FullPowerset => "full-powerset",
        }
    }

    pub fn parse(tag: &str) -> Option<Self> {
        [
            FamilyConstraint::IntersectionClosed,
            FamilyConstraint::UnionClosed,
            FamilyConstraint::DifferenceClosed,
            FamilyConstraint::ContainsSingletons,
            FamilyConstraint::FullPowerset,
        ]
        .into_iter()
        .find(|c| c.tag() == tag)
    }

    fn satisfied(self, members: &[Mask], ground_size: u32) -> bool {
        match self {
            FamilyConstraint::IntersectionClosed => pairwise(members, |a, b| a & b),
            FamilyConstraint::UnionClosed => pairwise(members, |a, b| a | b),
            FamilyConstraint::DifferenceClosed => pairwise(members, |a, b| a & !b),
            FamilyConstraint::ContainsSingletons => {
                (0..ground_size).all(|i| members.binary_search(&(1 << i)).is_ok())
            }
            FamilyConstraint::FullPowerset => members.len() == 1usize << ground_size,
        }
    }
}

fn pairwise(members: &[Mask], op: impl Fn(Mask, Mask) -> Mask) -> bool {
    members.iter().all(|&a| {
        members
            .iter()
            .all(|&b| members.binary_search(&op(a, b)).is_ok())
    })
}

/// Where the enumerated choice functions come from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Origin {
    /// Every table (subset-pruned when `mu-subset` is required).
    ArbitraryChoice,
    /// Induced by every relation over the copies.
    Preferential,
    /// Relations whose structure is smooth for the instance family.
    SmoothPreferential,
    /// Smooth and transitive.
    SmoothTransitivePreferential,
}

impl Origin {
    pub fn tag(self) -> &'static str {
        match self {
            Origin::ArbitraryChoice => "arbitrary-choice",
            Origin::Preferential => "preferential",
            Origin::SmoothPreferential => "smooth-preferential",
            Origin::SmoothTransitivePreferential => "smooth-transitive-preferential",
        }
    }

    pub fn parse(tag: &str) -> Option<Self> {
        [
            Origin::ArbitraryChoice,
            Origin::Preferential,
            Origin::SmoothPreferential,
            Origin::SmoothTransitivePreferential,
        ]
        .into_iter()
        .find(|o| o.tag() == tag)
    }

    fn is_preferential(self) -> bool {
        !matches!(self, Origin::ArbitraryChoice)
    }
}

#[derive(Debug, Clone)]
pub struct InstanceSpec {
    pub ground_size: u32,
    pub constraints: Vec<FamilyConstraint>,
    pub origin: Origin,
    pub required: Vec<ConditionId>,
    /// Copies per element for preferential origins.
    pub max_copies: u32,
    /// Raw-instance guard; exceeding it is an error, not a truncation.
    pub max_instances: u64,
    /// Enumerate only submask tables when `mu-subset` is required.
    pub prune_subset: bool,
    /// Skip families that are not the least representative under ground
    /// relabelling. Off by default: it changes counts and may change which
    /// witness is reported, never whether one exists.
    pub symmetry_reduction: bool,
    /// Plan-entry granularity. Purely a load-balancing knob: neither the
    /// instance order nor any reported count depends on it.
    pub chunk: u64,
}

impl InstanceSpec {
    pub fn new(ground_size: u32) -> Self {
        InstanceSpec {
            ground_size,
            constraints: Vec::new(),
            origin: Origin::ArbitraryChoice,
            required: Vec::new(),
            max_copies: 1,
            max_instances: DEFAULT_MAX_INSTANCES,
            prune_subset: true,
            symmetry_reduction: false,
            chunk: DEFAULT_CHUNK,
        }
    }

    fn subset_pruned(&self) -> bool {
        self.prune_subset && self.required.contains(&ConditionId::Subset)
    }
}

/// One contiguous range of the raw cursor space: a family (and, for
/// preferential origins, a copy assignment) with a cursor window into its
/// block.
#[derive(Debug, Clone)]
pub struct PlanEntry {
    pub family_mask: u64,
    pub copy_counts: Vec<u32>,
    pub base_index: u64,
    pub count: u64,
    /// Cursor offset of this range within its family block.
    pub offset: u64,
}

#[derive(Debug, Clone)]
pub struct SearchPlan {
    pub entries: Vec<PlanEntry>,
    pub total: u64,
}

fn family_members(family_mask: u64, ground_size: u32) -> Vec<Mask> {
    (0..(1u64 << ground_size))
        .filter(|&s| family_mask & (1 << s) != 0)
        .collect()
}

fn synth_ground(ground_size: u32) -> GroundSet {
    GroundSet::new((0..ground_size).map(|i| format!("e{i}"))).expect("small ground")
}

fn build_family(family_mask: u64, ground_size: u32) -> SetFamily {
    let ground = synth_ground(ground_size);
    let entries: Vec<(String, Mask)> = family_members(family_mask, ground_size)
        .into_iter()
        .map(|m| (format!("s{m}"), m))
        .collect();
    SetFamily::new(ground, entries).expect("synthetic members are valid")
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut idx: Vec<usize> = (0..n).collect();
    fn heap(k: usize, idx: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if k <= 1 {
            out.push(idx.clone());
            return;
        }
        for i in 0..k {
            heap(k - 1, idx, out);
            if k % 2 == 0 {
                idx.swap(i, k - 1);
            } else {
                idx.swap(0, k - 1);
            }
        }
    }
    heap(n, &mut idx, &mut out);
    out
}

fn apply_perm(mask: Mask, perm: &[usize]) -> Mask {
    let mut out = 0;
    for (from, &to) in perm.iter().enumerate() {
        if mask & (1 << from) != 0 {
            out |= 1 << to;
        }
    }
    out
}

fn family_mask_is_canonical(family_mask: u64, ground_size: u32, perms: &[Vec<usize>]) -> bool {
    let members = family_members(family_mask, ground_size);
    for perm in perms {
        let mut image = 0u64;
        for &m in &members {
            image |= 1 << apply_perm(m, perm);
        }
        if image < family_mask {
            return false;
        }
    }
    true
}

/// Raw instance count for one family under the spec, in the arbitrary
/// origin: the product of per-member value counts.
fn arbitrary_count(members: &[Mask], ground_size: u32, pruned: bool) -> u128 {
    let mut total = 1u128;
    for &m in members {
        let digit = if pruned { 1u128 << m.count_ones() } else { 1u128 << ground_size };
        total = total.saturating_mul(digit);
    }
    total
}

fn copy_total(counts: &[u32]) -> u32 {
    counts.iter().sum()
}

fn relation_count(copies: u32) -> u128 {
    let bits = (copies as u32) * (copies as u32);
    if bits >= 128 {
        u128::MAX
    } else {
        1u128 << bits
    }
}

/// Lay out the raw cursor space. Fails fast when the space exceeds the
/// spec's guard, reporting the cardinality accumulated so far.
pub fn plan(spec: &InstanceSpec) -> Result<SearchPlan, SearchError> {
    if spec.ground_size == 0 || spec.ground_size > MAX_ENUM_GROUND {
        return Err(SearchError::GroundTooLarge { ground_size: spec.ground_size });
    }
    let g = spec.ground_size;
    let perms = if spec.symmetry_reduction { permutations(g as usize) } else { Vec::new() };
    let family_space = 1u64 << (1u64 << g);
    let pruned = spec.subset_pruned();
    let chunk = spec.chunk.max(1);
    let mut entries = Vec::new();
    let mut total: u128 = 0;

    let push_block = |entries: &mut Vec<PlanEntry>,
                          total: &mut u128,
                          family_mask: u64,
                          copy_counts: Vec<u32>,
                          block: u128|
     -> Result<(), SearchError> {
        if *total + block > spec.max_instances as u128 {
            return Err(SearchError::SpaceTooLarge {
                cardinality: *total + block,
                guard: spec.max_instances,
            });
        }
        let block = block as u64;
        let mut offset = 0u64;
        while offset < block {
            let count = chunk.min(block - offset);
            entries.push(PlanEntry {
                family_mask,
                copy_counts: copy_counts.clone(),
                base_index: *total as u64 + offset,
                count,
                offset,
            });
            offset += count;
        }
        *total += block as u128;
        Ok(())
    };

    for family_mask in 0..family_space {
        let members = family_members(family_mask, g);
        if !spec.constraints.iter().all(|c| c.satisfied(&members, g)) {
            continue;
        }
        if spec.symmetry_reduction && !family_mask_is_canonical(family_mask, g, &perms) {
            continue;
        }
        if spec.origin.is_preferential() {
            let mut counts = alloc::vec![1u32; g as usize];
            loop {
                let c = copy_total(&counts);
                push_block(&mut entries, &mut total, family_mask, counts.clone(), relation_count(c))?;
                let mut done = true;
                for i in (0..counts.len()).rev() {
                    if counts[i] < spec.max_copies {
                        counts[i] += 1;
                        done = false;
                        break;
                    }
                    counts[i] = 1;
                }
                if done {
                    break;
                }
            }
        } else {
            let block = arbitrary_count(&members, g, pruned);
            push_block(&mut entries, &mut total, family_mask, Vec::new(), block)?;
        }
    }
    Ok(SearchPlan { entries, total: total as u64 })
}

/// The `n`-th submask of `m` in ascending numeric order: the bits of `n`
/// spread over the set bits of `m`, lowest first.
fn nth_submask(mut n: u64, m: Mask) -> Mask {
    let mut out = 0;
    for bit in crate::sets::elements(m) {
        if n & 1 != 0 {
            out |= 1 << bit;
        }
        n >>= 1;
    }
    out
}

/// Seed a table at a given cursor position: the cursor is a mixed-radix
/// numeral, first member most significant, each digit indexing the member's
/// value in ascending order.
fn seed_table(family: &SetFamily, subset_pruned: bool, ground_size: u32, cursor: u64) -> Vec<Mask> {
    let mut rest = cursor;
    let mut table = alloc::vec![0 as Mask; family.len()];
    for p in (0..family.len()).rev() {
        let m = family.member(p);
        let radix = if subset_pruned { 1u64 << m.count_ones() } else { 1u64 << ground_size };
        let digit = rest % radix;
        rest /= radix;
        table[p] = if subset_pruned { nth_submask(digit, m) } else { digit };
    }
    debug_assert_eq!(rest, 0, "cursor beyond the table space");
    table
}

/// Enumerate `len` choice tables on `family` in canonical order, starting
/// at cursor `start`. The visitor gets the cursor position and may return
/// `false` to stop; the return value is the number of tables visited.
pub fn for_each_choice_range<F>(
    family: &SetFamily,
    subset_pruned: bool,
    ground_size: u32,
    start: u64,
    len: u64,
    mut visit: F,
) -> u64
where
    F: FnMut(u64, &ChoiceFunction) -> bool,
{
    if len == 0 {
        return 0;
    }
    let k = family.len();
    let full = family.ground().full_mask();
    let table = seed_table(family, subset_pruned, ground_size, start);
    let mut f = ChoiceFunction::from_table(family.clone(), table).expect("seed table is valid");
    let mut step = 0u64;
    loop {
        if !visit(start + step, &f) {
            return step + 1;
        }
        step += 1;
        if step == len || k == 0 {
            return step;
        }
        let mut p = k;
        loop {
            if p == 0 {
                return step;
            }
            p -= 1;
            let bound = if subset_pruned { family.member(p) } else { full };
            let cur = f.value_at(p);
            let next = if subset_pruned {
                cur.wrapping_sub(bound) & bound
            } else if cur == bound {
                0
            } else {
                cur + 1
            };
            f.set_value(p, next);
            if next != 0 {
                break;
            }
        }
    }
}

/// Enumerate every choice table on `family`, from the start.
pub fn for_each_choice<F>(family: &SetFamily, subset_pruned: bool, visit: F) -> u64
where
    F: FnMut(u64, &ChoiceFunction) -> bool,
{
    let g = family.ground().len() as u32;
    let len = arbitrary_count(family.members(), g, subset_pruned).min(u64::MAX as u128) as u64;
    for_each_choice_range(family, subset_pruned, g, 0, len, visit)
}

/// Visit the raw instances of one plan entry, already filtered by origin
/// (but not by required conditions). The visitor's first argument is the
/// global raw index; returning `false` stops the entry.
pub fn visit_entry<F>(spec: &InstanceSpec, entry: &PlanEntry, mut visit: F)
where
    F: FnMut(u64, &ChoiceFunction) -> bool,
{
    let family = build_family(entry.family_mask, spec.ground_size);
    // Cursor positions are block-relative; the block starts at
    // `base_index - offset` in the global order.
    let block_start = entry.base_index - entry.offset;
    if spec.origin.is_preferential() {
        let mut copies = Vec::new();
        for (element, &n) in entry.copy_counts.iter().enumerate() {
            for index in 0..n {
                copies.push(Copy { element, index });
            }
        }
        let c = copies.len();
        for rel_mask in entry.offset..entry.offset + entry.count {
            let mut relation = Vec::new();
            for b in crate::sets::elements(rel_mask) {
                relation.push((copies[b / c], copies[b % c]));
            }
            let s = PreferentialStructure::new(family.ground().clone(), copies.clone(), &relation)
                .expect("copies declared");
            let keep = match spec.origin {
                Origin::Preferential => true,
                Origin::SmoothPreferential => s.is_smooth(&family).unwrap().is_smooth(),
                Origin::SmoothTransitivePreferential => {
                    s.relation_properties().transitive
                        && s.is_smooth(&family).unwrap().is_smooth()
                }
                Origin::ArbitraryChoice => unreachable!(),
            };
            if keep {
                let f = s.induced_choice(&family).expect("same ground");
                if !visit(block_start + rel_mask, &f) {
                    return;
                }
            }
        }
    } else {
        let pruned = spec.subset_pruned();
        for_each_choice_range(
            &family,
            pruned,
            spec.ground_size,
            entry.offset,
            entry.count,
            |cursor, f| visit(block_start + cursor, f),
        );
    }
}

/// Does the instance satisfy every required condition?
pub fn instance_meets(f: &ChoiceFunction, required: &[ConditionId]) -> bool {
    required.iter().all(|&c| conditions::holds(f, c))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EnumerationSummary {
    /// Raw cursor positions scanned.
    pub raw: u64,
    /// Instances passing origin and required-condition filters.
    pub visited: u64,
}

/// The deterministic instance stream: canonical order, filtered by the
/// spec's origin and required conditions. The visitor may return `false`
/// to stop.
pub fn enumerate_instances<F>(
    spec: &InstanceSpec,
    mut visit: F,
) -> Result<EnumerationSummary, SearchError>
where
    F: FnMut(u64, &ChoiceFunction) -> bool,
{
    let plan = plan(spec)?;
    let mut visited = 0u64;
    let mut stopped = false;
    for entry in &plan.entries {
        if stopped {
            break;
        }
        visit_entry(spec, entry, |idx, f| {
            if instance_meets(f, &spec.required) {
                visited += 1;
                if !visit(idx, f) {
                    stopped = true;
                    return false;
                }
            }
            true
        });
    }
    Ok(EnumerationSummary { raw: plan.total, visited })
}

/// A premise-satisfying instance violating the conclusion.
#[derive(Debug, Clone)]
pub struct Refutation {
    pub index: u64,
    pub choice: ChoiceFunction,
    pub report: ConditionReport,
}

/// Per-entry outcome of an implication scan; counts stop at the entry's
/// first refutation.
#[derive(Debug, Clone)]
pub struct EntryOutcome {
    pub raw: u64,
    pub satisfying: u64,
    pub refuted: Option<Refutation>,
}

/// Scan one plan entry for the implication `premises ⇒ conclusion`.
pub fn run_entry(
    spec: &InstanceSpec,
    entry: &PlanEntry,
    premises: &[ConditionId],
    conclusion: ConditionId,
) -> EntryOutcome {
    let mut out = EntryOutcome { raw: 0, satisfying: 0, refuted: None };
    visit_entry(spec, entry, |idx, f| {
        out.raw = idx - entry.base_index + 1;
        if !instance_meets(f, premises) {
            return true;
        }
        out.satisfying += 1;
        let report = conditions::check(f, conclusion);
        if report.holds() {
            return true;
        }
        out.refuted = Some(Refutation { index: idx, choice: f.clone(), report });
        false
    });
    // Raw counts cover skipped origin-filtered cursor positions too.
    if out.refuted.is_none() {
        out.raw = entry.count;
    }
    out
}

#[derive(Debug, Clone)]
pub enum ImplicationVerdict {
    /// No counterexample in the enumerated space. Not a proof.
    ConfirmedAtScale,
    Refuted(Refutation),
    NotTestable,
}

#[derive(Debug, Clone)]
pub struct ImplicationOutcome {
    pub verdict: ImplicationVerdict,
    /// Raw cursor positions scanned (stops at the refutation).
    pub raw: u64,
    /// Premise-satisfying instances scanned.
    pub satisfying: u64,
}

/// Fold per-entry outcomes, in entry order, into the search verdict.
pub fn merge_outcomes<I: IntoIterator<Item = EntryOutcome>>(outcomes: I) -> ImplicationOutcome {
    let mut raw = 0u64;
    let mut satisfying = 0u64;
    for o in outcomes {
        raw += o.raw;
        satisfying += o.satisfying;
        if let Some(r) = o.refuted {
            return ImplicationOutcome { verdict: ImplicationVerdict::Refuted(r), raw, satisfying };
        }
    }
    ImplicationOutcome { verdict: ImplicationVerdict::ConfirmedAtScale, raw, satisfying }
}

/// What the catalog says a row should do.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Expectation {
    Implies,
    NotImplies,
    NotTestable,
}

impl Expectation {
    pub fn tag(self) -> &'static str {
        match self {
            Expectation::Implies => "implies",
            Expectation::NotImplies => "not-implies",
            Expectation::NotTestable => "not-testable",
        }
    }

    pub fn parse(tag: &str) -> Option<Self> {
        [Expectation::Implies, Expectation::NotImplies, Expectation::NotTestable]
            .into_iter()
            .find(|e| e.tag() == tag)
    }
}

/// One implication row: premises and family-level side constraints against
/// a single conclusion.
#[derive(Debug, Clone)]
pub struct ImplicationQuery {
    pub id: String,
    pub premises: Vec<ConditionId>,
    pub constraints: Vec<FamilyConstraint>,
    pub conclusion: ConditionId,
    pub expected: Expectation,
}

/// Specialize a base spec to a row: merge side constraints and require the
/// premises during enumeration.
pub fn row_spec(query: &ImplicationQuery, base: &InstanceSpec) -> InstanceSpec {
    let mut spec = base.clone();
    for &c in &query.constraints {
        if !spec.constraints.contains(&c) {
            spec.constraints.push(c);
        }
    }
    for &p in &query.premises {
        if !spec.required.contains(&p) {
            spec.required.push(p);
        }
    }
    spec
}

/// Exhaustively test one implication row at the base spec's scale.
pub fn test_implication(
    query: &ImplicationQuery,
    base: &InstanceSpec,
) -> Result<ImplicationOutcome, SearchError> {
    if query.expected == Expectation::NotTestable {
        return Ok(ImplicationOutcome {
            verdict: ImplicationVerdict::NotTestable,
            raw: 0,
            satisfying: 0,
        });
    }
    let spec = row_spec(query, base);
    let plan = plan(&spec)?;
    let mut outcomes = Vec::with_capacity(plan.entries.len());
    for entry in &plan.entries {
        let o = run_entry(&spec, entry, &spec.required, query.conclusion);
        let stop = o.refuted.is_some();
        outcomes.push(o);
        if stop {
            break;
        }
    }
    Ok(merge_outcomes(outcomes))
}

#[derive(Debug, Clone)]
pub struct MatrixRow {
    pub id: String,
    pub expected: Expectation,
    pub outcome: ImplicationOutcome,
}

/// Run a batch of rows against one base spec.
pub fn implication_matrix(
    rows: &[ImplicationQuery],
    base: &InstanceSpec,
) -> Result<Vec<MatrixRow>, SearchError> {
    rows.iter()
        .map(|q| {
            Ok(MatrixRow {
                id: q.id.clone(),
                expected: q.expected,
                outcome: test_implication(q, base)?,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn ground1_subset_respecting_space_has_two_instances() {
        let mut spec = InstanceSpec::new(1);
        spec.constraints.push(FamilyConstraint::FullPowerset);
        spec.required.push(ConditionId::Subset);
        let summary = enumerate_instances(&spec, |_, _| true).unwrap();
        assert_eq!(summary.raw, 2);
        assert_eq!(summary.visited, 2);
    }

    #[test]
    fn ground2_space_matches_per_member_product() {
        let mut spec = InstanceSpec::new(2);
        spec.constraints.push(FamilyConstraint::FullPowerset);
        spec.required.push(ConditionId::Subset);
        // Oracle: the product of 2^|X| over the members of the powerset.
        let family = build_family((1u64 << 4) - 1, 2);
        let expected: u64 =
            family.members().iter().map(|m| 1u64 << m.count_ones()).product();
        assert_eq!(expected, 16);
        let summary = enumerate_instances(&spec, |_, _| true).unwrap();
        assert_eq!(summary.raw, expected);
        assert_eq!(summary.visited, expected);
    }

    #[test]
    fn pruning_changes_counts_but_not_verdicts() {
        // mu-subset + mu-CUM vs mu-subset-supset at ground 2, both modes.
        let q = ImplicationQuery {
            id: "probe".into(),
            premises: vec![ConditionId::Subset, ConditionId::Cum],
            constraints: vec![],
            conclusion: ConditionId::SubsetSupset,
            expected: Expectation::NotImplies,
        };
        let pruned_base = InstanceSpec::new(2);
        let mut unpruned_base = InstanceSpec::new(2);
        unpruned_base.prune_subset = false;
        let a = test_implication(&q, &pruned_base).unwrap();
        let b = test_implication(&q, &unpruned_base).unwrap();
        assert_ne!(a.raw, b.raw);
        assert_eq!(
            matches!(a.verdict, ImplicationVerdict::Refuted(_)),
            matches!(b.verdict, ImplicationVerdict::Refuted(_))
        );
        assert_eq!(a.satisfying, b.satisfying);
    }

    #[test]
    fn symmetry_reduction_preserves_refutability() {
        let q = ImplicationQuery {
            id: "probe".into(),
            premises: vec![ConditionId::Subset, ConditionId::Cum],
            constraints: vec![],
            conclusion: ConditionId::SubsetSupset,
            expected: Expectation::NotImplies,
        };
        let plain = InstanceSpec::new(2);
        let mut reduced = InstanceSpec::new(2);
        reduced.symmetry_reduction = true;
        let a = test_implication(&q, &plain).unwrap();
        let b = test_implication(&q, &reduced).unwrap();
        assert!(b.raw < a.raw);
        assert_eq!(
            matches!(a.verdict, ImplicationVerdict::Refuted(_)),
            matches!(b.verdict, ImplicationVerdict::Refuted(_))
        );
    }

    #[test]
    fn subset_cum_does_not_give_subset_supset_at_ground3() {
        let q = ImplicationQuery {
            id: "probe".into(),
            premises: vec![ConditionId::Subset, ConditionId::Cum],
            constraints: vec![],
            conclusion: ConditionId::SubsetSupset,
            expected: Expectation::NotImplies,
        };
        let base = InstanceSpec::new(3);
        let out = test_implication(&q, &base).unwrap();
        let r = match out.verdict {
            ImplicationVerdict::Refuted(r) => r,
            other => panic!("expected refutation, got {other:?}"),
        };
        // The witness replays: premises hold, conclusion fails.
        assert!(conditions::holds(&r.choice, ConditionId::Subset));
        assert!(conditions::holds(&r.choice, ConditionId::Cum));
        let w = r.report.witness.as_ref().unwrap();
        assert!(conditions::replay(&r.choice, ConditionId::SubsetSupset, w));
    }

    #[test]
    fn preferential_stream_contains_the_three_element_chain() {
        // Ground e0,e1,e2: the family of all proper subsets together with
        // the mu table of the chain e2 ≺ e1 ≺ e0 (no transitive closure)
        // must appear as an instance.
        let mut spec = InstanceSpec::new(3);
        spec.origin = Origin::Preferential;
        let chain_table: [(Mask, Mask); 7] = [
            (0b000, 0b000),
            (0b001, 0b001),
            (0b010, 0b010),
            (0b011, 0b010),
            (0b100, 0b100),
            (0b101, 0b101),
            (0b110, 0b100),
        ];
        let mut found = false;
        enumerate_instances(&spec, |_, f| {
            let fam_mask: u64 =
                f.family().members().iter().fold(0, |acc, &m| acc | (1 << m));
            if fam_mask == 0b0111_1111
                && chain_table.iter().all(|&(x, v)| f.eval(x).unwrap() == v)
            {
                found = true;
                return false;
            }
            true
        })
        .unwrap();
        assert!(found, "the chain instance never appeared");
    }

    #[test]
    fn guard_rejects_oversized_spaces() {
        let mut spec = InstanceSpec::new(3);
        spec.prune_subset = false;
        spec.max_instances = 1000;
        assert!(matches!(
            plan(&spec),
            Err(SearchError::SpaceTooLarge { .. })
        ));
        let spec5 = InstanceSpec::new(5);
        assert!(matches!(plan(&spec5), Err(SearchError::GroundTooLarge { .. })));
    }

    #[test]
    fn entry_outcomes_merge_like_a_sequential_scan() {
        let q = ImplicationQuery {
            id: "probe".into(),
            premises: vec![ConditionId::Subset, ConditionId::Cum],
            constraints: vec![],
            conclusion: ConditionId::SubsetSupset,
            expected: Expectation::NotImplies,
        };
        let base = InstanceSpec::new(2);
        let spec = row_spec(&q, &base);
        let sequential = test_implication(&q, &base).unwrap();
        let p = plan(&spec).unwrap();
        // Compute every entry independently (as workers would), then merge.
        let outcomes: Vec<EntryOutcome> = p
            .entries
            .iter()
            .map(|e| run_entry(&spec, e, &spec.required, q.conclusion))
            .collect();
        let merged = merge_outcomes(outcomes);
        assert_eq!(merged.raw, sequential.raw);
        assert_eq!(merged.satisfying, sequential.satisfying);
        match (&merged.verdict, &sequential.verdict) {
            (ImplicationVerdict::Refuted(a), ImplicationVerdict::Refuted(b)) => {
                assert_eq!(a.index, b.index)
            }
            (ImplicationVerdict::ConfirmedAtScale, ImplicationVerdict::ConfirmedAtScale) => {}
            (a, b) => panic!("verdicts diverged: {a:?} vs {b:?}"),
        }
    }

    #[test]
    fn chunking_changes_nothing_observable() {
        let q = ImplicationQuery {
            id: "probe".into(),
            premises: vec![ConditionId::Subset, ConditionId::Cum],
            constraints: vec![],
            conclusion: ConditionId::SubsetSupset,
            expected: Expectation::NotImplies,
        };
        let mut coarse = InstanceSpec::new(3);
        coarse.chunk = u64::MAX;
        let mut fine = InstanceSpec::new(3);
        fine.chunk = 7;
        let a = test_implication(&q, &coarse).unwrap();
        let b = test_implication(&q, &fine).unwrap();
        assert_eq!(a.raw, b.raw);
        assert_eq!(a.satisfying, b.satisfying);
        match (&a.verdict, &b.verdict) {
            (ImplicationVerdict::Refuted(x), ImplicationVerdict::Refuted(y)) => {
                assert_eq!(x.index, y.index);
                assert_eq!(x.choice, y.choice);
            }
            (x, y) => panic!("expected refutations, got {x:?} vs {y:?}"),
        }
    }

    #[test]
    fn range_enumeration_matches_full_enumeration() {
        let family = build_family(0b1011_0110, 3);
        for pruned in [true, false] {
            let mut all: Vec<Vec<Mask>> = Vec::new();
            for_each_choice(&family, pruned, |_, f| {
                all.push(f.table().to_vec());
                true
            });
            // Stitch ranges of width 5 together.
            let mut stitched: Vec<Vec<Mask>> = Vec::new();
            let total = all.len() as u64;
            let mut start = 0u64;
            while start < total {
                let len = 5.min(total - start);
                for_each_choice_range(&family, pruned, 3, start, len, |cursor, f| {
                    assert_eq!(cursor as usize, stitched.len());
                    stitched.push(f.table().to_vec());
                    true
                });
                start += len;
            }
            assert_eq!(all, stitched);
        }
    }

    #[test]
    fn parallel_merge_agrees_on_a_refutable_row_at_ground3() {
        let q = ImplicationQuery {
            id: "probe".into(),
            premises: vec![ConditionId::Subset, ConditionId::Cum],
            constraints: vec![],
            conclusion: ConditionId::SubsetSupset,
            expected: Expectation::NotImplies,
        };
        let base = InstanceSpec::new(3);
        let spec = row_spec(&q, &base);
        let sequential = test_implication(&q, &base).unwrap();
        let p = plan(&spec).unwrap();
        let outcomes: Vec<EntryOutcome> = p
            .entries
            .iter()
            .map(|e| run_entry(&spec, e, &spec.required, q.conclusion))
            .collect();
        let merged = merge_outcomes(outcomes);
        match (&merged.verdict, &sequential.verdict) {
            (ImplicationVerdict::Refuted(a), ImplicationVerdict::Refuted(b)) => {
                assert_eq!(a.index, b.index);
                assert_eq!(a.choice, b.choice);
            }
            (a, b) => panic!("expected refutations, got {a:?} vs {b:?}"),
        }
        assert_eq!(merged.raw, sequential.raw);
        assert_eq!(merged.satisfying, sequential.satisfying);
    }
}
