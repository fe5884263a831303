//! The nine acceptance criteria, each run against its time limit. One line
//! is printed per criterion.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use cshift::chl::{certify_t1, certify_t2, verify_fm_brute, verify_fm_classes, verify_witness, ChlBudget, ContinuityVerdict};
use cshift::fds::{
    cylinder_to_trie, cylinders_to_trie, trie_complement, trie_intersect, trie_to_cylinders, trie_union, Node, Trie,
};
use cshift::gallery::{self, GalleryBudget, Params, Property, Verdict};
use cshift::hbc::{check_hbc_corollary_rowfinite, check_hbc_corollary_sup, xi, xi_inverse, XiCode};
use cshift::point::{Alphabet, Length, Letter, Point, Sym};
use cshift::rules::ClassTable;
use cshift::sbc::{check_empty_image_constant, check_length_bound, check_period_preserved, check_shift_commute, SlidingBlockCode};
use cshift::shiftspace::ShiftPresentation;
use cshift::symset::{LetterSet, SymSet};
use cshift::text;
use cshift::topology::{cyl_contains, Cylinder};

const SEED: u64 = 20_240_611;

type Outcome = Result<String, String>;

fn run_criterion(n: usize, limit: Duration, name: &str, f: impl FnOnce() -> Outcome) -> bool {
    let start = Instant::now();
    let r = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|e| {
        let msg = e.downcast_ref::<String>().cloned().or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()));
        Err(format!("panicked: {}", msg.unwrap_or_default()))
    });
    let took = start.elapsed();
    let (ok, detail) = match r {
        Ok(d) if took <= limit => (true, d),
        Ok(d) => (false, format!("{d}; over the {limit:?} limit")),
        Err(e) => (false, e),
    };
    println!(
        "criterion {n} [{}] {name}: {} in {:.2}s ({detail})",
        if ok { "PASS" } else { "FAIL" },
        if ok { "pass" } else { "fail" },
        took.as_secs_f64()
    );
    ok
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

/// The examples that are sliding block codes, with their domains.
fn gallery_codes() -> Vec<(&'static str, SlidingBlockCode)> {
    gallery::IDS
        .iter()
        .filter(|&&id| id != "b")
        .map(|&id| (id, gallery::code_by_name(id, Params::default()).expect("gallery code")))
        .collect()
}

fn gallery_shifts() -> Vec<(&'static str, ShiftPresentation)> {
    ["a", "b", "c", "f", "g", "h", "i"]
        .iter()
        .map(|&id| (id, gallery::shift_by_name(id, Params::default()).expect("gallery shift")))
        .collect()
}

fn samples(shift: &ShiftPresentation, n: usize, rng: &mut ChaCha8Rng) -> Vec<Point> {
    let mut pts = shift.enumerate_finite_points(3, 3);
    pts.extend(shift.sample_points(n.saturating_sub(pts.len()), 12, rng));
    pts
}

fn c1_shift_commutation() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut total = 0;
    for (id, code) in gallery_codes() {
        let pts = samples(&code.domain, 1000, &mut rng);
        ensure(pts.len() >= 1000, || format!("{id}: only {} samples", pts.len()))?;
        let r = check_shift_commute(|p| code.apply(p), &pts).map_err(|e| format!("{id}: {e}"))?;
        ensure(r.passed(), || format!("{id}: {r:?}"))?;
        total += pts.len();
    }
    Ok(format!("{total} samples over 8 codes"))
}

fn c2_corollaries() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 2);
    let mut periodic = 0;
    let mut bounded = 0;
    for (id, code) in gallery_codes() {
        let pts = samples(&code.domain, 500, &mut rng);
        for p in &pts {
            if let Point::Evp { pre, period } = p {
                let q = p.shift_n(pre.len());
                let ok = check_period_preserved(&code, &q, period.len()).map_err(|e| format!("{id}: {e}"))?;
                ensure(ok, || format!("{id}: period of {q} not preserved"))?;
                periodic += 1;
            }
        }
        let e = check_empty_image_constant(&code).map_err(|e| format!("{id}: {e}"))?;
        if e == Letter::Empty {
            let r = check_length_bound(&code, &pts).map_err(|e| format!("{id}: {e}"))?;
            ensure(r.passed(), || format!("{id}: {r:?}"))?;
            bounded += 1;
        }
    }
    Ok(format!("{periodic} periodic samples, length bound on {bounded} codes fixing the empty sequence"))
}

fn random_cylinder(rng: &mut ChaCha8Rng) -> Cylinder {
    let base: Vec<Sym> = (0..rng.gen_range(0..=3)).map(|_| rng.gen_range(-2..=6)).collect();
    let excluded: Vec<Sym> = (0..rng.gen_range(0..=2)).map(|_| rng.gen_range(-2..=6)).collect();
    Cylinder::new(base, excluded)
}

fn random_guard(rng: &mut ChaCha8Rng) -> LetterSet {
    let lo = rng.gen_range(-3..=6);
    let hi = lo + rng.gen_range(0..=3);
    let mut syms = SymSet::range(lo, hi);
    if rng.gen_bool(0.2) {
        syms = syms.union(&SymSet::at_least(rng.gen_range(5..=9)));
    }
    LetterSet { syms, empty: rng.gen_bool(0.2) }
}

fn random_node(rng: &mut ChaCha8Rng, depth: usize) -> Node<bool> {
    if depth == 0 || rng.gen_bool(0.3) {
        return Node::Leaf(rng.gen_bool(0.5));
    }
    let edges = (0..rng.gen_range(1..=3)).map(|_| (random_guard(rng), random_node(rng, depth - 1))).collect();
    Node::branch(edges, random_node(rng, depth - 1))
}

fn random_point(rng: &mut ChaCha8Rng) -> Point {
    let pre: Vec<Sym> = (0..rng.gen_range(0..=5)).map(|_| rng.gen_range(-3..=9)).collect();
    if rng.gen_bool(0.4) {
        Point::finite(pre)
    } else {
        let period: Vec<Sym> = (0..rng.gen_range(1..=3)).map(|_| rng.gen_range(-3..=9)).collect();
        Point::evp(pre, period)
    }
}

fn c3_fds_algebra() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 3);
    let mut probes: Vec<Point> = vec![Point::empty()];
    while probes.len() < 100 {
        probes.push(random_point(&mut rng));
    }
    for i in 0..1000 {
        // cylinder unions and their tries
        let cs: Vec<Cylinder> = (0..rng.gen_range(1..=3)).map(|_| random_cylinder(&mut rng)).collect();
        let t = cylinders_to_trie(&cs);
        let back = trie_to_cylinders(&t).map_err(|e| format!("case {i}: {e}"))?;
        let t2 = cylinders_to_trie(&back);
        // arbitrary tries with overlapping guards
        let raw_a = Trie { root: random_node(&mut rng, 3) };
        let a = Trie::new(raw_a.root.clone());
        let b = Trie::new(random_node(&mut rng, 3));
        let not_a = trie_complement(&a);
        let not_b = trie_complement(&b);
        let lhs = trie_complement(&trie_union(&a, &b));
        let rhs = trie_intersect(&not_a, &not_b);
        let lhs2 = trie_complement(&trie_intersect(&a, &b));
        let rhs2 = trie_union(&not_a, &not_b);
        let twice = trie_complement(&not_a);
        for p in &probes {
            let direct = cs.iter().any(|c| cyl_contains(c, p));
            ensure(*t.eval(p) == direct, || format!("case {i}: trie of {cs:?} at {p}"))?;
            ensure(back.iter().any(|c| cyl_contains(c, p)) == direct, || format!("case {i}: {back:?} at {p}"))?;
            ensure(*t2.eval(p) == direct, || format!("case {i}: second trie at {p}"))?;
            let (x, y) = (*a.eval(p), *b.eval(p));
            ensure(*raw_a.eval(p) == x, || format!("case {i}: normalization changed the value at {p}"))?;
            ensure(*lhs.eval(p) == (!x && !y) && *rhs.eval(p) == (!x && !y), || format!("case {i}: De Morgan at {p}"))?;
            ensure(*lhs2.eval(p) == (!x || !y) && *rhs2.eval(p) == (!x || !y), || format!("case {i}: De Morgan at {p}"))?;
            ensure(*twice.eval(p) == x, || format!("case {i}: double complement at {p}"))?;
            for tr in [&a, &t, &lhs] {
                let used = tr.eval_at(p, 1).1;
                ensure(used <= tr.anticipation() + 1, || format!("case {i}: read {used} letters at {p}"))?;
            }
        }
        for c in &cs {
            let expect = c.base.len() + usize::from(!c.excluded.is_empty());
            let got = cylinder_to_trie(c).anticipation();
            ensure(got == expect.max(1) - 1, || format!("case {i}: anticipation of {c} is {got}"))?;
        }
    }
    Ok("1000 cases x 100 probes".into())
}

fn c4_theorem_1() -> Outcome {
    let budget = ChlBudget::default();
    let full = gallery::full_naturals();
    for code in [gallery::code_d(), gallery::identity_code(full.clone())] {
        let v = certify_t1(&code, budget).map_err(|e| e.to_string())?;
        ensure(v.is_continuous(), || format!("{}: {}", code.name, v.label()))?;
    }
    for code in [gallery::code_c(), gallery::code_f(), gallery::shift_code(full)] {
        match certify_t1(&code, budget).map_err(|e| e.to_string())? {
            ContinuityVerdict::CertifiedDiscontinuous(w) => {
                ensure(verify_witness(&w, budget).map_err(|e| e.to_string())?, || {
                    format!("{}: witness did not verify", code.name)
                })?;
            }
            v => return Err(format!("{}: {}", code.name, v.label())),
        }
    }
    Ok("d and identity continuous; c, f and the shift map refuted with verified witnesses".into())
}

fn c5_theorem_2() -> Outcome {
    let budget = ChlBudget::default();
    let p = Params::default();
    for code in [gallery::code_h(p).map_err(|e| e.to_string())?, gallery::code_i(p).map_err(|e| e.to_string())?] {
        let v = certify_t2(&code, p.d, 5, budget).map_err(|e| e.to_string())?;
        let ContinuityVerdict::CertifiedContinuous { fm_table: Some(table), .. } = &v else {
            return Err(format!("{}: {}", code.name, v.label()));
        };
        ensure(table.entries.len() == 5, || format!("{}: {} table rows", code.name, table.entries.len()))?;
        for (m, f) in &table.entries {
            let expect: Vec<Sym> = (1..=p.k + *m as Sym - 1).collect();
            ensure(*f == expect, || format!("{}: F_{m} = {f:?}", code.name))?;
            let classes = verify_fm_classes(&code, p.d, *m, f, budget.words);
            let brute = verify_fm_brute(&code, p.d, *m, f, budget.words);
            ensure(classes == Some(true) && brute == Some(true), || {
                format!("{}: F_{m} classes {classes:?} brute {brute:?}", code.name)
            })?;
        }
    }
    match certify_t2(&gallery::code_f(), 0, 3, budget).map_err(|e| e.to_string())? {
        ContinuityVerdict::CertifiedDiscontinuous(w) => {
            ensure(verify_witness(&w, budget).map_err(|e| e.to_string())?, || "f: witness did not verify".into())?;
        }
        v => return Err(format!("f: {}", v.label())),
    }
    Ok("h and i certified with F_1..F_5 agreeing by both methods; f refuted".into())
}

fn c6_negative_claims() -> Outcome {
    let budget = GalleryBudget::default();
    let checks = [
        ("b", Property::NotSlidingBlock),
        ("g", Property::InverseNotSlidingBlock),
        ("i", Property::InverseNotSlidingBlock),
        ("g", Property::ImageNotShiftSpace),
    ];
    for (id, prop) in checks {
        let case = gallery::build(id).map_err(|e| e.to_string())?;
        let v = case.check_one(prop, budget, SEED);
        ensure(v == Verdict::Pass, || format!("{id} {}: {v:?}", prop.as_str()))?;
    }
    Ok(format!("b refuted at every depth up to {}; g, i inverses refuted; g image fails extension", budget.depth))
}

fn c7_higher_block() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 7);
    let budget = ChlBudget::default();
    let mut roundtrips = 0;
    for (id, s) in gallery_shifts() {
        for m in 1..=3 {
            let mut pts: Vec<Point> = samples(&s, 1500, &mut rng)
                .into_iter()
                .filter(|p| p.length() >= Length::Finite(m))
                .collect();
            pts.truncate(1000);
            ensure(pts.len() == 1000, || format!("{id}: only {} long samples", pts.len()))?;
            for p in &pts {
                let back = xi(m, p).and_then(|q| xi_inverse(m, &q)).map_err(|e| format!("{id}: {e}"))?;
                ensure(back == *p, || format!("{id}, M = {m}: {p} came back as {back}"))?;
            }
            roundtrips += pts.len();
        }
        let v = certify_t1(&XiCode::new(s.clone(), 2).map_err(|e| e.to_string())?, budget).map_err(|e| e.to_string())?;
        ensure(v.is_continuous(), || format!("{id}: xi {}", v.label()))?;
        for m in 2..=3 {
            let sup = check_hbc_corollary_sup(&s, m, &mut rng).map_err(|e| e.to_string())?;
            ensure(sup.agree(), || format!("{id}, M = {m}: {sup:?}"))?;
            let rf = check_hbc_corollary_rowfinite(&s, m, 300, &mut rng).map_err(|e| e.to_string())?;
            ensure(rf.equivalence_holds(), || format!("{id}, M = {m}: {rf:?}"))?;
        }
    }
    Ok(format!("{roundtrips} roundtrips; corollaries checked for M = 2, 3 on 7 shifts"))
}

// ---- criterion 8: independent oracles on finite sub-alphabets

/// A presentation together with an independent description of its
/// admissible words.
struct Oracle {
    shift: ShiftPresentation,
    kind: OracleKind,
    /// Letters probed; for infinite alphabets the last one is outside
    /// every listed word and class.
    letters: Vec<Sym>,
}

enum OracleKind {
    /// Forbidden words over an infinite alphabet: any word free of them
    /// continues with a fresh letter forever.
    OpenForbidden(Vec<Vec<Sym>>),
    /// Forbidden words over `{0..n-1}`.
    FiniteForbidden(Vec<Vec<Sym>>, u32),
    /// Classes (the last one is the remainder) and allowed class pairs.
    Table(Vec<SymSet>, Vec<(usize, usize)>),
}

fn has_factor(w: &[Sym], words: &[Vec<Sym>]) -> bool {
    words.iter().any(|f| f.len() <= w.len() && w.windows(f.len()).any(|x| x == f.as_slice()))
}

impl Oracle {
    fn in_language(&self, w: &[Sym]) -> bool {
        match &self.kind {
            OracleKind::OpenForbidden(words) => {
                let fresh = 1_000_000;
                let mut v = w.to_vec();
                let longest = words.iter().map(Vec::len).max().unwrap_or(0);
                v.extend(std::iter::repeat(fresh).take(longest + 1));
                !has_factor(&v, words)
            }
            OracleKind::FiniteForbidden(words, n) => {
                // depth-first search for a lasso: a path longer than the
                // number of windows repeats one
                let longest = words.iter().map(Vec::len).max().unwrap_or(1).max(1);
                let states = (*n as usize).pow(longest as u32 - 1).max(1);
                fn dfs(v: &mut Vec<Sym>, left: usize, n: u32, words: &[Vec<Sym>], seen: &mut std::collections::HashSet<(Vec<Sym>, usize)>, keep: usize) -> bool {
                    if has_factor(&v[v.len().saturating_sub(keep + 1)..], words) {
                        return false;
                    }
                    if left == 0 {
                        return true;
                    }
                    let key = (v[v.len().saturating_sub(keep)..].to_vec(), left);
                    if !seen.insert(key) {
                        return false;
                    }
                    (0..n as Sym).any(|b| {
                        v.push(b);
                        let r = dfs(v, left - 1, n, words, seen, keep);
                        v.pop();
                        r
                    })
                }
                if has_factor(w, words) {
                    return false;
                }
                let mut v = w.to_vec();
                dfs(&mut v, states + 1, *n, words, &mut Default::default(), longest)
            }
            OracleKind::Table(classes, allowed) => {
                let class = |a: Sym| classes.iter().position(|c| c.contains(a));
                let step = |a: usize, b: usize| allowed.contains(&(a, b)) && !classes[b].is_empty();
                let Some(cls) = w.iter().map(|&a| class(a)).collect::<Option<Vec<usize>>>() else { return false };
                if cls.windows(2).any(|p| !step(p[0], p[1])) {
                    return false;
                }
                // some path of length #classes from the last class
                let k = classes.len();
                let mut frontier: Vec<usize> = match cls.last() {
                    Some(&c) => vec![c],
                    None => (0..k).filter(|&c| !classes[c].is_empty()).collect(),
                };
                for _ in 0..k {
                    let mut next: Vec<usize> = frontier.iter().flat_map(|&a| (0..k).filter(move |&b| step(a, b))).collect();
                    next.sort_unstable();
                    next.dedup();
                    frontier = next;
                }
                !frontier.is_empty()
            }
        }
    }
}

fn random_words(rng: &mut ChaCha8Rng, letters: &[Sym]) -> Vec<Vec<Sym>> {
    (0..rng.gen_range(1..=4))
        .map(|_| (0..rng.gen_range(1..=3)).map(|_| letters[rng.gen_range(0..letters.len())]).collect())
        .collect()
}

fn random_oracle(rng: &mut ChaCha8Rng, i: usize) -> Oracle {
    match i % 3 {
        0 => {
            let words = random_words(rng, &[1, 2, 3, 4]);
            let shift = ShiftPresentation::forbidden(Alphabet::Naturals, words.clone()).expect("valid");
            Oracle { shift, kind: OracleKind::OpenForbidden(words), letters: vec![1, 2, 3, 4, 9] }
        }
        1 => {
            let n = rng.gen_range(2..=5u32);
            let letters: Vec<Sym> = (0..n as Sym).collect();
            let words = random_words(rng, &letters);
            let shift = ShiftPresentation::forbidden(Alphabet::Finite(n), words.clone()).expect("valid");
            Oracle { shift, kind: OracleKind::FiniteForbidden(words, n), letters }
        }
        _ => {
            let cut1 = rng.gen_range(1..=2);
            let cut2 = rng.gen_range(cut1 + 1..=4);
            let named = vec![("p".to_string(), SymSet::range(1, cut1)), ("q".to_string(), SymSet::range(cut1 + 1, cut2))];
            let allowed: Vec<(usize, usize)> =
                (0..3).flat_map(|a| (0..3).map(move |b| (a, b))).filter(|_| rng.gen_bool(0.45)).collect();
            let mut classes: Vec<SymSet> = named.iter().map(|(_, s)| s.clone()).collect();
            classes.push(SymSet::at_least(cut2 + 1));
            let table = ClassTable::new(Alphabet::Naturals, named, &allowed).expect("valid");
            let shift = ShiftPresentation::edges(Alphabet::Naturals, std::sync::Arc::new(table)).expect("valid");
            Oracle { shift, kind: OracleKind::Table(classes, allowed), letters: vec![1, 2, 3, 4, 9] }
        }
    }
}

fn words_upto(letters: &[Sym], len: usize) -> Vec<Vec<Sym>> {
    let mut all = vec![Vec::new()];
    let mut level = vec![Vec::new()];
    for _ in 0..len {
        level = level
            .iter()
            .flat_map(|w: &Vec<Sym>| {
                letters.iter().map(move |&a| {
                    let mut v = w.clone();
                    v.push(a);
                    v
                })
            })
            .collect();
        all.extend(level.iter().cloned());
    }
    all
}

fn c8_oracles() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 8);
    let mut compared = 0usize;
    for i in 0..200 {
        let o = random_oracle(&mut rng, i);
        let words = words_upto(&o.letters, 6);
        for w in &words {
            let got = o.shift.block_in_language(w).map_err(|e| e.to_string())?;
            let want = o.in_language(w);
            ensure(got == want, || format!("{}: language at {w:?}: {got} vs {want}", o.shift))?;
            compared += 1;
            if w.len() <= 4 && want {
                let fol = o.shift.follower(w).map_err(|e| e.to_string())?;
                let pre = o.shift.predecessor(w).map_err(|e| e.to_string())?;
                for &b in &o.letters {
                    let mut wb = w.clone();
                    wb.push(b);
                    let mut bw = vec![b];
                    bw.extend_from_slice(w);
                    ensure(fol.contains(b) == o.in_language(&wb), || format!("{}: follower of {w:?} at {b}", o.shift))?;
                    ensure(pre.contains(b) == o.in_language(&bw), || format!("{}: predecessor of {w:?} at {b}", o.shift))?;
                    compared += 2;
                }
            }
        }
    }
    Ok(format!("{compared} comparisons over 200 presentations"))
}

fn c9_cli() -> Outcome {
    let exe = env!("CARGO_BIN_EXE_cshift");
    let run = |args: &[&str]| {
        let out = std::process::Command::new(exe).args(args).output().map_err(|e| e.to_string())?;
        Ok::<_, String>((out.status.code(), String::from_utf8_lossy(&out.stdout).into_owned()))
    };
    let (code, first) = run(&["gallery", "run"])?;
    ensure(code == Some(0), || format!("gallery run exited with {code:?}:\n{first}"))?;
    let lines = first.lines().count();
    ensure(
        first.lines().all(|l| l.contains(" pass ") || l.contains(" unknown(declared) ")),
        || format!("unexpected verdicts:\n{first}"),
    )?;
    let (_, second) = run(&["gallery", "run"])?;
    ensure(first == second, || "reports differ between runs".into())?;
    let corpus = roundtrip_corpus();
    for (i, doc) in corpus.iter().enumerate() {
        let d = text::parse(doc).map_err(|e| format!("document {i}: {e}"))?;
        let printed = text::print(&d);
        let again = text::parse(&printed).map_err(|e| format!("document {i} reprinted: {e}"))?;
        ensure(again == d, || format!("document {i} does not roundtrip:\n{printed}"))?;
        ensure(text::print(&again) == printed, || format!("document {i}: printing is not stable"))?;
    }
    Ok(format!("{lines} report lines, byte-identical reruns, {} documents roundtrip", corpus.len()))
}

/// Documents covering every literal form.
fn roundtrip_corpus() -> Vec<String> {
    let mut docs: Vec<String> = [
        "p = [1|2,3]",
        "p = []",
        "p = [|3]",
        "p = [-4,-3,-2,-1]",
        "p = [5, 6 ,7]   # spaces and a comment",
        "q = [[1,2],[2,3]]",
        "q = [[5,1]|[1,2],[2,1]]",
        "q = [|[7,7,7]]",
        "c = Z([1]; {5})",
        "c = Z()",
        "c = Z(; {1,2})",
        "c = Z([3,1,4] ; {-1, 9})",
        "s = shift { alphabet = naturals; forbidden = [[1,1]] }",
        "s = shift { alphabet = finite(2); forbidden = [[0,0],[1,1,1]] }",
        "s = shift { alphabet = integers; forbidden = [] }",
        "s = shift { alphabet = naturals; edges = gallery:b }",
        "s = shift { alphabet = naturals; edges = gallery:c }",
        "s = shift { alphabet = integers; edges = gallery:f }",
        "s = shift { alphabet = integers; edges = gallery:g(k=3) }",
        "s = shift { alphabet = naturals; edges = gallery:h(k=2) }",
        "s = shift { alphabet = naturals; edges = gallery:i(k=4) }",
        "s = shift { alphabet = naturals; edges = table { class low = {1..3}; low -> rest; rest -> rest; } }",
        "s = shift { alphabet = integers; edges = table { class neg = {..-1}; class zero = {0}; neg -> zero; zero -> neg; zero -> rest; rest -> rest; } }",
        "t = trie in",
        "t = trie {1..3:in, _:out}",
        "t = trie {empty:out, ..0|5..:{1:in, _:out}, _:in}",
        "r = trie {empty:empty, _:id@0}",
        "r = trie {1..2:{1..2:id@0, _:3}, _:3}",
        "r = trie {empty:0, ..-1:0, 0:empty, _:id@0}",
        "r = trie {empty:empty, _:halfup.offset(-1)@1}",
        "k = gallery:d",
        "k = gallery:h(k=2,d=3)",
        "k = gallery:i(k=3,d=5)",
        "k = code { domain = shift { alphabet = naturals; forbidden = [] }; out = naturals; rule = {empty:empty, _:halfup@0} }",
        "a = [1]\nb = Z([2])\n# trailing comment\nc = gallery:a",
    ]
    .iter()
    .map(|s| s.to_string())
    .collect();
    for id in gallery::IDS {
        let code = gallery::code_by_name(id, Params::default()).expect("gallery code");
        docs.push(format!("s = {}", code.domain));
        if let Some(spec) = text::code_spec_of(&code) {
            docs.push(format!("k = {spec}"));
        }
    }
    docs
}

fn main() {
    let s = Duration::from_secs;
    let results = [
        run_criterion(1, s(10), "shift commutation", c1_shift_commutation),
        run_criterion(2, s(10), "period, empty image and length corollaries", c2_corollaries),
        run_criterion(3, s(30), "finitely defined set algebra", c3_fds_algebra),
        run_criterion(4, s(30), "continuity certificates, first theorem", c4_theorem_1),
        run_criterion(5, s(60), "continuity certificates, second theorem", c5_theorem_2),
        run_criterion(6, s(60), "negative claims", c6_negative_claims),
        run_criterion(7, s(30), "higher block codes", c7_higher_block),
        run_criterion(8, s(60), "class abstraction against brute force", c8_oracles),
        run_criterion(9, s(120), "command line", c9_cli),
    ];
    let failed: Vec<usize> = results.iter().enumerate().filter(|(_, ok)| !**ok).map(|(i, _)| i + 1).collect();
    if failed.is_empty() {
        println!("acceptance: all 9 criteria pass");
    } else {
        println!("acceptance: failed criteria {failed:?}");
        std::process::exit(1);
    }
}
