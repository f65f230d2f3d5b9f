//! Pruned and targeted searches must find exactly what plain saturation finds.

use std::collections::BTreeSet;

use cowordism::acg::acg_to_llg;
use cowordism::grammar::fixtures;
use cowordism::llg::{generate_with, member, single_label, Llg, SearchOptions};
use cowordism::mcfg::{mcfg_to_llg, random_mcfg};
use cowordism::{Alphabet, Word};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn words(g: &Llg, opts: &SearchOptions) -> BTreeSet<Word> {
    generate_with(g, opts)
        .unwrap()
        .judgements
        .iter()
        .filter_map(|j| single_label(&j.body))
        .collect()
}

fn all_words(a: &Alphabet, max: usize) -> Vec<Word> {
    let tokens: Vec<_> = a.tokens().cloned().collect();
    let mut out = vec![Word::empty()];
    let mut layer = vec![Word::empty()];
    for _ in 0..max {
        layer = layer
            .iter()
            .flat_map(|w| tokens.iter().map(move |t| w.concat(&Word::single(t.clone()))))
            .collect();
        out.extend(layer.iter().cloned());
    }
    out
}

fn check(name: &str, g: &Llg, budget: usize, max_len: usize, probe_len: usize) {
    let plain: BTreeSet<Word> = words(g, &SearchOptions::budget(budget))
        .into_iter()
        .filter(|w| w.len() <= max_len)
        .collect();
    let pruned = words(g, &SearchOptions::budget(budget).with_max_len(max_len).pruned());
    let pruned: BTreeSet<Word> = pruned.into_iter().filter(|w| w.len() <= max_len).collect();
    assert_eq!(plain, pruned, "{name}: length pruning changed the language");
    for w in all_words(&g.alphabet, probe_len.min(max_len)) {
        let m = member(g, &w, Some(budget)).unwrap();
        assert_eq!(
            m.is_yes(),
            plain.contains(&w),
            "{name}: membership of {w:?} at budget {budget}"
        );
    }
}

#[test]
fn subset_sum_grammars() {
    check("ssp", &fixtures::ssp(), 9, 6, 4);
    check("ssp flat", &fixtures::ssp_flat(), 9, 6, 4);
}

#[test]
fn love_grammar() {
    let g = acg_to_llg(&fixtures::love()).unwrap();
    check("love", &g, 9, 5, 2);
}

#[test]
fn translated_mcfgs() {
    check("wawb", &mcfg_to_llg(&fixtures::wawb()), 7, 4, 4);
    let a = Alphabet::new(["a", "b"]).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for k in 0..10 {
        let g = mcfg_to_llg(&random_mcfg(&mut rng, &a));
        check(&format!("random {k}"), &g, 7, 4, 3);
    }
}

#[test]
fn budgets_are_monotone() {
    let g = fixtures::ssp();
    let mut last = BTreeSet::new();
    for b in [5, 7, 9, 11] {
        let l = cowordism::llg::language_with(&g, &SearchOptions::budget(b).with_max_len(6).pruned())
            .unwrap()
            .words;
        assert!(last.is_subset(&l), "budget {b}");
        last = l;
    }
    let acg = fixtures::love();
    let mut last = BTreeSet::new();
    for b in [5, 9, 13] {
        let l = cowordism::acg::acg_language_native(&acg, b).unwrap();
        assert!(last.is_subset(&l), "budget {b}");
        last = l;
    }
    assert!(!last.is_empty());
}
