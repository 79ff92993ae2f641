//! The six-atom sequent system: saturation facts, the oracle comparison at
//! small sizes, and the bounded search showing no smooth structure can
//! validate the seven axioms while refuting `a |~ e`.

use mulab_core::plausibility::{
    self, oracle, saturate, PlLanguage, PlModelStructure, Sequent,
};
use mulab_core::sets::elements;

fn lang6() -> PlLanguage {
    PlLanguage::new(["a", "b", "c", "d", "e", "f"]).unwrap()
}

fn seq(lang: &PlLanguage, left: &[&str], right: &[&str]) -> Sequent {
    Sequent {
        left: lang.atom_set(left.iter().copied()).unwrap(),
        right: lang.atom_set(right.iter().copied()).unwrap(),
    }
}

/// The seven axioms of the six-atom system.
fn axioms6(lang: &PlLanguage) -> Vec<Sequent> {
    vec![
        seq(lang, &["a"], &["b"]),
        seq(lang, &["b"], &["a"]),
        seq(lang, &["a"], &["c"]),
        seq(lang, &["a"], &["f", "d"]),
        seq(lang, &["d", "c"], &["b", "a"]),
        seq(lang, &["d", "c"], &["e"]),
        seq(lang, &["f", "c", "b", "a"], &["e"]),
    ]
}

#[test]
fn six_atom_saturation_facts() {
    let lang = lang6();
    let axioms = axioms6(&lang);
    let t = saturate(&lang, &axioms).unwrap();

    // Every overlap sequent is present.
    for x in 0..(1u16 << 6) {
        for y in 0..(1u16 << 6) {
            if x & y != 0 {
                assert!(t.derivable(Sequent { left: x, right: y }));
            }
        }
    }
    // Direct consequences of the axioms.
    assert!(t.derivable(seq(&lang, &["a"], &["b"])));
    assert!(t.derivable(seq(&lang, &["a"], &["b", "e"])));
    assert!(t.derivable(seq(&lang, &["d", "c"], &["b", "a", "e"])));
    // The separating non-consequence.
    assert!(!t.derivable(seq(&lang, &["a"], &["e"])));
    // Saturation is a fixpoint.
    let all: Vec<Sequent> = t.sequents().collect();
    assert_eq!(saturate(&lang, &all).unwrap(), t);
}

#[test]
fn bit_engine_matches_naive_oracle_on_axiom_pairs() {
    // |L| = 2: every axiom pair. |L| = 3: every single axiom.
    let lang2 = PlLanguage::new(["a", "b"]).unwrap();
    let sequents2: Vec<Sequent> = (0..4u16)
        .flat_map(|l| (0..4u16).map(move |r| Sequent { left: l, right: r }))
        .collect();
    for &s1 in &sequents2 {
        for &s2 in &sequents2 {
            let ax = [s1, s2];
            assert_eq!(
                saturate(&lang2, &ax).unwrap(),
                oracle::naive_saturate(&lang2, &ax).unwrap(),
                "diverged on {s1:?}, {s2:?}"
            );
        }
    }
    let lang3 = PlLanguage::new(["a", "b", "c"]).unwrap();
    for l in 0..8u16 {
        for r in 0..8u16 {
            let ax = [Sequent { left: l, right: r }];
            assert_eq!(
                saturate(&lang3, &ax).unwrap(),
                oracle::naive_saturate(&lang3, &ax).unwrap(),
                "diverged on {l:#b} |~ {r:#b}"
            );
        }
    }
}

/// The relevant three-model universe: the two models of `a,b,c,d` with and
/// without `e`, and the bare `c,d` model.
fn relevant_models(lang: &PlLanguage) -> Vec<u16> {
    vec![
        lang.atom_set(["a", "b", "c", "d"]).unwrap(),
        lang.atom_set(["a", "b", "c", "d", "e"]).unwrap(),
        lang.atom_set(["c", "d"]).unwrap(),
    ]
}

fn validates_axioms(s: &PlModelStructure, axioms: &[Sequent]) -> bool {
    axioms.iter().all(|&a| s.semantic_holds(a.left, a.right))
}

/// Smoothness over every definable model set of the language.
fn smooth_for_definable_sets(s: &PlModelStructure) -> bool {
    let mut seen = std::collections::BTreeSet::new();
    let mut entries = Vec::new();
    for x in 0..(1u16 << s.lang.len()) {
        let m = s.models_of(x);
        if seen.insert(m) {
            entries.push((format!("M{x}"), m));
        }
    }
    let fam =
        mulab_core::sets::SetFamily::new(s.structure.ground().clone(), entries).unwrap();
    s.structure.is_smooth(&fam).unwrap().is_smooth()
}

#[test]
fn no_smooth_structure_on_relevant_models_refutes_a_entails_e() {
    let lang = lang6();
    let axioms = axioms6(&lang);
    let models = relevant_models(&lang);
    let a = lang.atom_set(["a"]).unwrap();
    let e = lang.atom_set(["e"]).unwrap();
    let t_cd = lang.atom_set(["c", "d"]).unwrap();
    let r_a = a;
    let s_b = lang.atom_set(["b"]).unwrap();

    let mut smooth_validating = 0u64;
    let mut nonsmooth_refuters = 0u64;
    let total = plausibility::for_each_model_structure(&lang, &models, 2, 4, |s| {
        if !validates_axioms(s, &axioms) {
            return true;
        }
        let refutes = !s.semantic_holds(a, e);
        if smooth_for_definable_sets(s) {
            smooth_validating += 1;
            assert!(
                !refutes,
                "a smooth structure validated the axioms yet refuted a |~ e: {:?}",
                s.structure.edges().collect::<Vec<_>>()
            );
            // The length-one chain fact instance used by the argument:
            // T = M(cd), R = M(a), S = M(b).
            let (t, r, sm) = (s.models_of(t_cd), s.models_of(r_a), s.models_of(s_b));
            let mu = |m| s.structure.mu(m);
            if mu(t) & !(r | sm) == 0 && mu(sm) & !r == 0 {
                assert_eq!(sm & t & mu(r) & !mu(t), 0, "chain fact violated");
            }
        } else if refutes {
            nonsmooth_refuters += 1;
        }
        true
    })
    .unwrap();

    // Copy assignments (1,1,1) and the three with one doubled model.
    assert_eq!(total, 512 + 3 * 65536);
    assert!(smooth_validating > 0, "no smooth structure validated the axioms at all");
    assert!(
        nonsmooth_refuters > 0,
        "the refutation pattern requires dropping smoothness; none was found"
    );
}

#[test]
fn minimal_models_persist_into_satisfied_supersets() {
    // m ∈ mu(X), X ⊆ X', m ⊨ X' imply m ∈ mu(X'): random structures over
    // random model universes.
    use rand::{Rng, SeedableRng};
    let lang = PlLanguage::new(["a", "b", "c", "d"]).unwrap();
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0x91c);
    for _ in 0..500 {
        let k = rng.gen_range(1..=5usize);
        let models: Vec<u16> = (0..k).map(|_| rng.gen_range(0..16u16)).collect();
        let mut rel = Vec::new();
        for i in 0..k {
            for j in 0..k {
                if rng.gen_bool(0.3) {
                    rel.push((i, j));
                }
            }
        }
        let s = PlModelStructure::one_copy(lang.clone(), models, &rel).unwrap();
        for x in 0..16u16 {
            for extra in 0..16u16 {
                let x2 = x | extra;
                let mu_x = s.mu_of(x);
                let m_x2 = s.models_of(x2);
                let mu_x2 = s.mu_of(x2);
                assert_eq!(mu_x & m_x2 & !mu_x2, 0, "persistence failed");
            }
        }
    }
}

#[test]
fn the_cycle_structure_is_the_expected_nonsmooth_refuter() {
    // m5 ≺ m1 ≺ m5 with m3 untouched: every axiom holds, a |~ e fails,
    // smoothness fails at M(cd).
    let lang = lang6();
    let models = relevant_models(&lang);
    let s = PlModelStructure::one_copy(lang.clone(), models, &[(2, 0), (0, 2)]).unwrap();
    assert!(validates_axioms(&s, &axioms6(&lang)));
    let a = lang.atom_set(["a"]).unwrap();
    let e = lang.atom_set(["e"]).unwrap();
    assert!(!s.semantic_holds(a, e));
    assert!(!smooth_for_definable_sets(&s));
    // mu(M(a)) keeps the e-free model: that is the refutation.
    let mu_a = s.mu_of(a);
    assert!(elements(mu_a).any(|i| s.model_atoms[i] & e == 0));
}
