//! One PASS/FAIL line per acceptance criterion. Exact criteria (1-4, 9-11)
//! fail the target; the stochastic reproductions (5-8) are reported only.

mod common;

use std::collections::BTreeSet;
use std::process::ExitCode;

use common::oracle::{readings, Cat, Rules};
use gcgsim::categorial::{all_permutations, parse_category_string, permute_once, Category, RuleSchema};
use gcgsim::evolution::{random_genome, reproduce_genome, Preference};
use gcgsim::experiments::{
    emergence, learn_effect, pref_evolution, resolve_genome, trial_rng, wml_rank, EmergenceConfig, EmergenceMode, LearnEffectConfig,
    PrefConfig, WmlMode,
};
use gcgsim::language::{enumerate_grammars, is_subset_language, language_of, parse_sentence, stringset, GrammarSpace, NamedLanguage};
use gcgsim::learner::{learn_step, LearnerKind, LearnerState, SessionConfig};
use gcgsim::parser::{parse, RuleSet, Step};
use gcgsim::psetting::{decode, ParamId, Status};
use rand::Rng;

struct Outcome {
    hard: bool,
    pass: bool,
}

fn report(n: u32, hard: bool, pass: bool, detail: String) -> Outcome {
    let kind = if hard { "exact" } else { "directional, reported" };
    println!("criterion {n:>2} {}: {detail} [{kind}]", if pass { "PASS" } else { "FAIL" });
    Outcome { hard, pass }
}

fn to_oracle(cats: &[Category]) -> Vec<Cat> {
    cats.iter().map(|c| Cat::parse(&c.to_string())).collect()
}

const PERM_ONLY: RuleSet = RuleSet { application: true, composition: false, permutation: true };

fn worked_example() -> Outcome {
    let cats = parse_category_string(r"NP (S\NP)/NP NP").unwrap();
    let plain = parse(&cats, &RuleSet::APPLICATION);
    let perm = parse(&cats, &PERM_ONLY);
    let pass = plain.success && plain.wml_record == [1, 3, 6, 5, 1] && plain.total_wml == 16 && perm.success && perm.total_wml == 9;
    report(1, true, pass, format!("record {:?} total {}, with permutation total {}", plain.wml_record, plain.total_wml, perm.total_wml))
}

fn derivation_fidelity() -> Outcome {
    let cats = parse_category_string(r"NP (S\NP)/NP NP").unwrap();
    let plain = parse(&cats, &RuleSet::APPLICATION);
    let perm = parse(&cats, &PERM_ONLY);
    let reduces: Vec<(RuleSchema, bool)> = perm
        .derivation
        .iter()
        .filter_map(|s| match s {
            Step::Reduce { rule, perm } => Some((*rule, perm.is_some())),
            _ => None,
        })
        .collect();
    let order_ok = reduces == [(RuleSchema::BA, true), (RuleSchema::FA, false)];
    let lf_ok = perm.lf.is_some() && perm.lf == plain.lf;
    let steps: Vec<String> = perm.derivation.iter().map(|s| s.to_string()).collect();
    report(2, true, order_ok && lf_ok, format!("{} ; LF {}", steps.join(", "), perm.lf.map(|l| l.to_string()).unwrap_or_default()))
}

fn oracle_suite() -> Outcome {
    let mut types = 0;
    let mut bad = Vec::new();
    for l in NamedLanguage::ALL {
        let g = l.grammar();
        let rules = Rules { comp: g.rules.composition, perm: g.rules.permutation };
        for st in l.language() {
            types += 1;
            let out = parse_sentence(&st, &g);
            let all = readings(&to_oracle(&st.categories), rules);
            let want: BTreeSet<String> = out.lf.iter().map(|lf| lf.to_string()).collect();
            if !out.success || all != want {
                bad.push(st.name.clone());
            }
        }
    }
    report(3, true, bad.is_empty(), format!("{types} sentence types, mismatches {bad:?}"))
}

fn subset_identity() -> Outcome {
    let english = language_of(&NamedLanguage::English.genome()).unwrap();
    let no_comp = language_of(&resolve_genome("english-COMP").unwrap()).unwrap();
    let no_perm_ps = resolve_genome("english-GWP").unwrap();
    let no_perm = language_of(&no_perm_ps).unwrap();
    let proper = is_subset_language(&no_comp, &english) && stringset(&no_comp).len() < stringset(&english).len();
    let identical = stringset(&no_perm) == stringset(&english);
    let (g, gp) = (NamedLanguage::English.grammar(), decode(&no_perm_ps).unwrap());
    let mut differing = 0;
    let mut same_lf = true;
    for st in &english {
        let a = parse_sentence(st, &g);
        let b = parse_sentence(st, &gp);
        differing += usize::from(a.derivation != b.derivation);
        same_lf &= a.lf.is_some() && a.lf == b.lf;
    }
    report(
        4,
        true,
        proper && identical && differing >= 1 && same_lf,
        format!(
            "without composition {}/{} types, proper subset {proper}; without permutation stringset-identical {identical}, {differing} differing derivations, identical LFs {same_lf}",
            no_comp.len(),
            english.len()
        ),
    )
}

fn learning_effect() -> Outcome {
    // reference cells: (language, unset, default)
    let table = [
        (NamedLanguage::English, 60, 60),
        (NamedLanguage::Welsh, 80, 60),
        (NamedLanguage::Malagasy, 70, 60),
        (NamedLanguage::Tagalog, 80, 60),
        (NamedLanguage::Japanese, 70, 60),
        (NamedLanguage::German, 70, 60),
        (NamedLanguage::Hixkaryana, 70, 80),
        (NamedLanguage::Osv, 70, 70),
    ];
    let median = |language, kind| {
        let cfg = LearnEffectConfig { language, kind, trials: 100, seed: 0, session: SessionConfig::default() };
        learn_effect(&cfg).unwrap().summary.median
    };
    let mut pass = true;
    let mut cells = Vec::new();
    for (lang, ref_unset, ref_default) in table {
        let (u, d) = (median(lang, LearnerKind::Unset), median(lang, LearnerKind::Default));
        let within = |m: Option<usize>, p: i64| m.is_some_and(|m| (m as i64 - p).abs() <= 30);
        let direction = match (lang, u, d) {
            (NamedLanguage::Osv, _, _) => true,
            (NamedLanguage::Hixkaryana, Some(u), Some(d)) => d > u,
            (_, Some(u), Some(d)) => d <= u,
            _ => false,
        };
        let ok = direction && within(u, ref_unset) && within(d, ref_default);
        pass &= ok;
        let show = |m: Option<usize>| m.map_or("-".to_string(), |m| m.to_string());
        cells.push(format!("{} {}/{}{}", lang.family(), show(u), show(d), if ok { "" } else { "!" }));
    }
    report(5, false, pass, format!("unset/default medians {}", cells.join(", ")))
}

fn pref_counts(language: NamedLanguage, wml: WmlMode, runs: usize) -> (usize, usize, usize) {
    let report = pref_evolution(&PrefConfig::new(language, wml, runs, 0)).unwrap();
    let c = |p| report.counts.get(&p).copied().unwrap_or(0);
    (c(Preference::Default), c(Preference::None), c(Preference::Unset))
}

fn preference_evolution() -> Outcome {
    let mut with = (0, 0, 0);
    let mut without = (0, 0, 0);
    let mut svo_vos = Vec::new();
    for l in NamedLanguage::ALL {
        let w = pref_counts(l, WmlMode::Both, 5);
        let n = pref_counts(l, WmlMode::None, 5);
        with = (with.0 + w.0, with.1 + w.1, with.2 + w.2);
        without = (without.0 + n.0, without.1 + n.1, without.2 + n.2);
        if matches!(l, NamedLanguage::English | NamedLanguage::Malagasy) {
            svo_vos.push((l.family(), w.0));
        }
    }
    let pass = with.0 > with.2 && without.2 > without.0 && svo_vos.iter().all(|(_, d)| *d >= 3);
    report(
        6,
        false,
        pass,
        format!(
            "default/none/unset with WML {}/{}/{}, without {}/{}/{}; default runs {}",
            with.0,
            with.1,
            with.2,
            without.0,
            without.1,
            without.2,
            svo_vos.iter().map(|(f, d)| format!("{f} {d}/5")).collect::<Vec<_>>().join(", ")
        ),
    )
}

fn memory_ablation() -> Outcome {
    let runs = 10;
    let learn = pref_counts(NamedLanguage::English, WmlMode::Learn, runs).0;
    let parse = pref_counts(NamedLanguage::English, WmlMode::Parse, runs).0;
    report(
        7,
        false,
        2 * learn > runs && parse < learn,
        format!("English default runs: learning-only {learn}/{runs}, parsing-only {parse}/{runs}"),
    )
}

fn emergence_property() -> Outcome {
    let r = emergence(&EmergenceConfig::new(EmergenceMode::SeededGerman, 5, 0)).unwrap();
    let s = &r.summary;
    let pass = s.survived > 0 && 2 * s.sov_v2 > s.survived && s.change.default > 0.0 && s.change.unset < 0.0;
    report(
        8,
        false,
        pass,
        format!(
            "{} of 5 survived, {} SOVv2-dominant, default share change {:+.1}, unset share change {:+.1}",
            s.survived, s.sov_v2, s.change.default, s.change.unset
        ),
    )
}

fn wml_ranking() -> Outcome {
    let specs: Vec<String> = ["english", "english-GWP", "mixed"].map(String::from).to_vec();
    let rows = wml_rank(&specs).unwrap();
    let (e, np, mixed) = (rows[0].mean_wml, rows[1].mean_wml, rows[2].mean_wml);
    let excess = (mixed / e - 1.0) * 100.0;
    report(
        9,
        true,
        e < np && excess >= 10.0,
        format!("English {e:.3} < without permutation {np:.3}; mixed {mixed:.3} is {excess:.1}% above English"),
    )
}

fn enumeration() -> Outcome {
    let e = enumerate_grammars(GrammarSpace::Ordering);
    let families = e.families();
    let pass = (200..=400).contains(&e.count()) && families.keys().any(|f| f.starts_with("OVS"));
    report(10, true, pass, format!("{} distinct grammars; families {:?}", e.count(), families))
}

fn properties() -> Outcome {
    let mut failures = Vec::new();

    let cats: BTreeSet<Category> = NamedLanguage::ALL.iter().flat_map(|l| l.language()).flat_map(|st| st.categories).collect();
    let closed = cats.iter().all(|c| {
        let rots = all_permutations(c);
        let mut cur = c.clone();
        for _ in 0..c.arity() {
            cur = permute_once(&cur).unwrap_or(cur);
        }
        cur == *c && rots.iter().all(|r| all_permutations(r).len() == rots.len())
    });
    if !closed {
        failures.push("rotation closure");
    }

    let mut one_shot = true;
    let mut error_driven = true;
    let mut absolutes = true;
    for (i, l) in NamedLanguage::ALL.iter().enumerate() {
        for kind in [LearnerKind::Default, LearnerKind::Unset] {
            let mut rng = trial_rng(7, i as u64);
            let target = l.language();
            let mut st = LearnerState::new(kind.genome(), true);
            for step in 0..200u32 {
                st.age_cycles = 1 + step / 10;
                let trig = &target[rng.gen_range(0..target.len())];
                let before = st.clone();
                let r = learn_step(&mut st, trig, &mut rng);
                if r.parsed || !r.admissible {
                    error_driven &= st == before;
                }
                for id in ParamId::ALL {
                    if before.touched[id.index()] {
                        one_shot &= before.current.get(id) == st.current.get(id);
                    }
                    if st.genome.get(id).status == Status::Absolute {
                        absolutes &= st.current.get(id) == st.genome.get(id);
                    }
                }
            }
        }
    }
    for (ok, name) in [(one_shot, "one-shot resetting"), (error_driven, "error-drivenness"), (absolutes, "absolute immutability")] {
        if !ok {
            failures.push(name);
        }
    }

    let mut rng = trial_rng(8, 0);
    let inherits = (0..200).all(|_| {
        let (a, b) = (random_genome(&mut rng), random_genome(&mut rng));
        let child = reproduce_genome(&a, &b, 1.0, 0.0, &mut rng);
        ParamId::ALL.iter().all(|id| child.get(*id) == a.get(*id) || child.get(*id) == b.get(*id))
    });
    if !inherits {
        failures.push("inheritance");
    }

    let le = LearnEffectConfig {
        language: NamedLanguage::German,
        kind: LearnerKind::Unset,
        trials: 10,
        seed: 3,
        session: SessionConfig::default(),
    };
    let mut pc = PrefConfig::new(NamedLanguage::Tagalog, WmlMode::Both, 2, 3);
    pc.sim.cycles = 3;
    let mut ec = EmergenceConfig::new(EmergenceMode::Random, 2, 3);
    ec.sim.cycles = 3;
    ec.sim.interactions_per_cycle = 300;
    let deterministic = learn_effect(&le).unwrap() == learn_effect(&le).unwrap()
        && pref_evolution(&pc).unwrap() == pref_evolution(&pc).unwrap()
        && emergence(&ec).unwrap() == emergence(&ec).unwrap();
    if !deterministic {
        failures.push("seed determinism");
    }

    report(
        11,
        true,
        failures.is_empty(),
        if failures.is_empty() { "all property checks hold".into() } else { format!("failed: {failures:?}") },
    )
}

fn main() -> ExitCode {
    let outcomes = [
        worked_example(),
        derivation_fidelity(),
        oracle_suite(),
        subset_identity(),
        learning_effect(),
        preference_evolution(),
        memory_ablation(),
        emergence_property(),
        wml_ranking(),
        enumeration(),
        properties(),
    ];
    let hard_failures = outcomes.iter().filter(|o| o.hard && !o.pass).count();
    let reported = outcomes.iter().filter(|o| !o.hard && !o.pass).count();
    println!("exact criteria failing: {hard_failures}; directional criteria failing: {reported}");
    if hard_failures > 0 {
        ExitCode::FAILURE
    } else {
        ExitCode::SUCCESS
    }
}
