use lexiscan::scdawg::{deserialize, oracle::substring_class_oracle, serialize, Lexicon, Scdawg};
use lexiscan::{render, symbols, Symbol};

fn d3() -> (Lexicon, Scdawg) {
    let (lex, _) = Lexicon::from_entries(["ear", "lead", "real"]).unwrap();
    let idx = Scdawg::build(&lex).unwrap();
    (lex, idx)
}

/// Symbols of a display string where a leading `#` and trailing `$` are
/// the delimiters.
fn marked(x: &str) -> Vec<Symbol> {
    let mut v = symbols(x);
    if x.starts_with('#') {
        v[0] = Symbol::HASH;
    }
    if x.len() > 1 && x.ends_with('$') || x == "$" {
        let n = v.len();
        v[n - 1] = Symbol::DOLLAR;
    }
    v
}

/// Our state for the class numbered `n` in the reference listing.
fn listed_state(idx: &Scdawg, n: usize) -> u32 {
    let canon = ["", "l", "#", "$", "ea", "r", "#lead$", "#real$", "#ear$"][n];
    (0..idx.state_count() as u32)
        .find(|&q| render(idx.forward().canonical(q), true) == canon)
        .unwrap()
}

#[test]
fn listed_classes() {
    let (_, idx) = d3();
    assert_eq!(idx.state_count(), 9);
    let listing: [&[&str]; 9] = [
        &[""],
        &["l"],
        &["#"],
        &["$"],
        &["a", "ea"],
        &["r"],
        &["d$", "ad$", "lead$", "#lead$"],
        &["l$", "al$", "eal$", "real$", "#real$"],
        &["r$", "ar$", "ear$", "#ear$"],
    ];
    for (n, members) in listing.iter().enumerate() {
        let q = listed_state(&idx, n);
        for m in *members {
            let c = idx.locate(&marked(m)).unwrap_or_else(|| panic!("{m} not found"));
            assert_eq!(c.state, q, "{m} should be in class {n}");
        }
    }
}

#[test]
fn classes_agree_with_oracle() {
    let (lex, idx) = d3();
    let oracle = substring_class_oracle(&lex);
    assert_eq!(oracle.class_count(), 9);
    for (canon, members) in &oracle.classes {
        let states: Vec<u32> = members.iter().map(|m| idx.locate(m).unwrap().state).collect();
        assert!(states.iter().all(|&q| q == states[0]));
        assert_eq!(idx.forward().canonical(states[0]), canon.as_slice());
    }
}

#[test]
fn e_transition_and_right_extensions() {
    let (_, idx) = d3();
    let four = listed_state(&idx, 4);
    let e = idx.extend_right(idx.root_cursor(), Symbol::from('e')).unwrap();
    assert_eq!(e.state, four);
    assert_eq!(e.len, 1);
    assert_eq!(e.pos, idx.forward().end_pos(four).unwrap() - 1);
    let mut rights = Vec::new();
    idx.forward().for_each_step(e, |s, c| rights.push((s, c)));
    assert_eq!(rights.len(), 1);
    let (sym, ea) = rights[0];
    assert_eq!(sym, Symbol::from('a'));
    assert_eq!(ea.state, four);
    assert_eq!(ea.pos, e.pos);
    assert_eq!(idx.cursor_string(ea), "ea");
    assert_eq!(render(idx.forward().canonical(four), false), "ea");
    // past the canonical occurrence: goes through edges
    assert_eq!(ea.pos + ea.len, idx.forward().end_pos(four).unwrap() + 1);
    let mut next: Vec<String> = Vec::new();
    idx.forward()
        .for_each_step(ea, |_, c| next.push(idx.cursor_string_marked(c)));
    next.sort();
    assert_eq!(next, ["ead", "eal", "ear"]);
}

#[test]
fn left_extensions_of_e() {
    let (_, idx) = d3();
    let e = idx.locate(&symbols("e")).unwrap();
    let mut got = Vec::new();
    for sym in [
        Symbol::HASH,
        Symbol::DOLLAR,
        Symbol::from('a'),
        Symbol::from('d'),
        Symbol::from('e'),
        Symbol::from('l'),
        Symbol::from('r'),
    ] {
        if let Some(c) = idx.extend_left(e, sym) {
            got.push((sym, c.state));
        }
    }
    assert_eq!(
        got,
        vec![
            (Symbol::HASH, listed_state(&idx, 8)),
            (Symbol::from('l'), listed_state(&idx, 6)),
            (Symbol::from('r'), listed_state(&idx, 7)),
        ]
    );
    let re = idx.extend_left(e, Symbol::from('r')).unwrap();
    assert_eq!(re.pos, idx.forward().start_pos(listed_state(&idx, 7)) + 1);
    assert!(idx.extend_left(re, Symbol::from('d')).is_none());
}

#[test]
fn left_right_commute() {
    let (_, idx) = d3();
    let ea = idx.locate(&symbols("ea")).unwrap();
    let a = idx.extend_left(ea, Symbol::from('r')).unwrap();
    let re = idx.locate(&symbols("re")).unwrap();
    let b = idx.extend_right(re, Symbol::from('a')).unwrap();
    assert_eq!(a, b);
    assert_eq!(idx.cursor_string(a), "rea");
}

#[test]
fn palindromic_class_maps_to_itself() {
    let (_, idx) = d3();
    let e = idx.locate(&symbols("e")).unwrap();
    let rev = idx.reverse().locate(&symbols("e")).unwrap();
    assert_eq!(idx.b_map(e.state), rev.state);
    assert_eq!(idx.b_inv(rev.state), e.state);
    assert_eq!(idx.b_map(0), 0);
}

#[test]
fn entries_and_strings() {
    let (_, idx) = d3();
    assert!(idx.is_entry(idx.locate(&symbols("real")).unwrap()));
    assert!(!idx.is_entry(idx.locate(&symbols("rea")).unwrap()));
    assert!(!idx.is_entry(idx.locate(&symbols("ea")).unwrap()));
    assert!(!idx.is_entry(idx.root_cursor()));
    assert_eq!(idx.cursor_string(idx.root_cursor()), "");
    assert!(idx.extend_right(idx.root_cursor(), Symbol::HASH).is_some());
}

#[test]
fn serialized_index_behaves_the_same() {
    let (lex, idx) = d3();
    let back = deserialize(&serialize(&idx)).unwrap();
    for x in substring_class_oracle(&lex).substrings() {
        assert_eq!(back.locate(&x), idx.locate(&x));
    }
    assert!(back.locate(&symbols("re")).is_some());
}
