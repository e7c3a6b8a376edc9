//! Alphabets, words, generating lists, partitionings, and the word-level
//! bordering classification, plus the list transformations (fragmentation,
//! sum, symbol expansion) that the family constructions are built from.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::{Error, Result};

/// A single alphabet symbol. Tokens are non-empty and contain no whitespace.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Symbol(String);

impl Symbol {
    /// Panics on an empty token or one containing whitespace; callers that
    /// handle untrusted text validate first (see [`parse_list`]).
    pub fn new(token: impl Into<String>) -> Self {
        let token = token.into();
        assert!(
            !token.is_empty() && !token.chars().any(char::is_whitespace),
            "bad symbol token {token:?}"
        );
        Symbol(token)
    }

    pub fn token(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// A finite word. The empty word is a valid value but never a generator.
#[derive(Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Word(Vec<Symbol>);

impl Word {
    pub fn new(symbols: Vec<Symbol>) -> Self {
        Word(symbols)
    }

    pub fn empty() -> Self {
        Word(Vec::new())
    }

    /// One symbol per character; test and CLI shorthand.
    pub fn letters(s: &str) -> Self {
        Word(s.chars().map(|c| Symbol::new(c.to_string())).collect())
    }

    pub fn from_tokens(tokens: &[&str]) -> Self {
        Word(tokens.iter().map(|t| Symbol::new(*t)).collect())
    }

    pub fn symbols(&self) -> &[Symbol] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn reversed(&self) -> Word {
        Word(self.0.iter().rev().cloned().collect())
    }

    pub fn slice(&self, range: std::ops::Range<usize>) -> Word {
        Word(self.0[range].to_vec())
    }

    pub fn concat<'a>(parts: impl IntoIterator<Item = &'a Word>) -> Word {
        let mut out = Vec::new();
        for p in parts {
            out.extend_from_slice(&p.0);
        }
        Word(out)
    }

    pub fn push(&mut self, s: Symbol) {
        self.0.push(s);
    }

    /// Tokens joined without separator when every token is a single
    /// character, otherwise joined by spaces. The empty word prints as `ε`.
    pub fn display(&self) -> String {
        if self.0.is_empty() {
            return "ε".to_string();
        }
        if self.0.iter().all(|s| s.token().chars().count() == 1) {
            self.0.iter().map(|s| s.token()).collect()
        } else {
            self.0
                .iter()
                .map(|s| s.token())
                .collect::<Vec<_>>()
                .join(" ")
        }
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display())
    }
}

/// A finite, de-duplicated set of non-empty generating words.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct GeneratingList {
    words: Vec<Word>,
    alphabet: Vec<Symbol>,
}

impl GeneratingList {
    pub fn new(words: impl IntoIterator<Item = Word>) -> Result<Self> {
        let set: BTreeSet<Word> = words.into_iter().collect();
        if set.iter().any(|w| w.is_empty()) {
            return Err(Error::EmptyWord(0));
        }
        if set.is_empty() {
            return Err(Error::EmptyList);
        }
        let alphabet: BTreeSet<Symbol> = set
            .iter()
            .flat_map(|w| w.symbols().iter().cloned())
            .collect();
        Ok(GeneratingList {
            words: set.into_iter().collect(),
            alphabet: alphabet.into_iter().collect(),
        })
    }

    /// Char-split shorthand: `GeneratingList::of(&["aa", "aaa", "b"])`.
    pub fn of(words: &[&str]) -> Self {
        GeneratingList::new(words.iter().map(|w| Word::letters(w))).expect("nonempty list")
    }

    pub fn words(&self) -> &[Word] {
        &self.words
    }

    pub fn alphabet(&self) -> &[Symbol] {
        &self.alphabet
    }

    pub fn contains_symbol(&self, s: &Symbol) -> bool {
        self.alphabet.binary_search(s).is_ok()
    }

    pub fn total_len(&self) -> usize {
        self.words.iter().map(Word::len).sum()
    }

    pub fn min_word_len(&self) -> usize {
        self.words.iter().map(Word::len).min().unwrap_or(0)
    }

    pub fn reversed(&self) -> GeneratingList {
        GeneratingList::new(self.words.iter().map(Word::reversed)).expect("same cardinality")
    }

    /// One word per line, tokens space-separated; reparses with `--multichar`
    /// semantics regardless of token shape.
    pub fn to_file_format(&self) -> String {
        let mut out = String::new();
        for w in &self.words {
            let line: Vec<&str> = w.symbols().iter().map(Symbol::token).collect();
            out.push_str(&line.join(" "));
            out.push('\n');
        }
        out
    }

    pub fn display(&self) -> String {
        let items: Vec<String> = self.words.iter().map(Word::display).collect();
        format!("{{{}}}", items.join(", "))
    }
}

/// Parses the list file format: `#` starts a comment line, each other
/// non-blank line is one word. A line with internal whitespace is split into
/// tokens; a line without is split into single-character symbols unless
/// `multichar` is set, in which case the whole line is one symbol.
pub fn parse_list(text: &str, multichar: bool) -> Result<GeneratingList> {
    let mut words = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let word = if line.contains(char::is_whitespace) {
            Word(line.split_whitespace().map(Symbol::new).collect())
        } else if multichar {
            Word(vec![Symbol::new(line)])
        } else {
            if line.contains('#') {
                // reserved for comments; spell multi-char tokens out with spaces
                return Err(Error::MalformedLine(idx + 1));
            }
            Word::letters(line)
        };
        if word.is_empty() {
            return Err(Error::EmptyWord(idx + 1));
        }
        words.push(word);
    }
    GeneratingList::new(words)
}

fn default_fresh(s: &Symbol, k: usize) -> Vec<Symbol> {
    (1..=k)
        .map(|i| Symbol::new(format!("{}#{}", s.token(), i)))
        .collect()
}

fn check_fresh(list: &GeneratingList, fresh: &[Symbol]) -> Result<()> {
    let mut seen = BTreeSet::new();
    for f in fresh {
        if list.contains_symbol(f) || !seen.insert(f.clone()) {
            return Err(Error::FreshSymbolCollision(f.token().to_string()));
        }
    }
    Ok(())
}

/// Fragments `s` into `k` fresh symbols: every word with `l` occurrences of
/// `s` expands to the `k^l` words obtained by resymbolling each occurrence
/// independently (the preimage of the symbol-collapsing map).
pub fn fragment(
    list: &GeneratingList,
    s: &Symbol,
    k: usize,
    fresh: Option<&[Symbol]>,
) -> Result<GeneratingList> {
    assert!(k >= 1, "fragmentation arity must be positive");
    if !list.contains_symbol(s) {
        return Err(Error::SymbolNotInAlphabet(s.token().to_string()));
    }
    let fresh: Vec<Symbol> = match fresh {
        Some(f) => {
            assert_eq!(f.len(), k, "need exactly k fresh symbols");
            f.to_vec()
        }
        None => default_fresh(s, k),
    };
    check_fresh(list, &fresh)?;
    let mut out = Vec::new();
    for w in list.words() {
        let mut expansions = vec![Vec::new()];
        for sym in w.symbols() {
            if sym == s {
                expansions = expansions
                    .into_iter()
                    .flat_map(|prefix| {
                        fresh.iter().map(move |f| {
                            let mut p = prefix.clone();
                            p.push(f.clone());
                            p
                        })
                    })
                    .collect();
            } else {
                for e in &mut expansions {
                    e.push(sym.clone());
                }
            }
        }
        out.extend(expansions.into_iter().map(Word));
    }
    GeneratingList::new(out)
}

/// Renames symbols through `map` (identity where unmapped) and de-duplicates;
/// mapping every fresh symbol of a fragmentation back to its source recovers
/// the original list exactly.
pub fn collapse_symbols(
    list: &GeneratingList,
    map: &BTreeMap<Symbol, Symbol>,
) -> Result<GeneratingList> {
    GeneratingList::new(list.words().iter().map(|w| {
        Word(
            w.symbols()
                .iter()
                .map(|s| map.get(s).unwrap_or(s).clone())
                .collect(),
        )
    }))
}

/// Union of two generating lists, flagged with whether their alphabets were
/// disjoint (several constructions downstream require disjointness).
#[derive(Clone, Debug)]
pub struct ListSum {
    pub list: GeneratingList,
    pub alphabets_disjoint: bool,
}

pub fn sum_lists(l1: &GeneratingList, l2: &GeneratingList) -> ListSum {
    let disjoint = l1.alphabet().iter().all(|s| !l2.contains_symbol(s));
    let list = GeneratingList::new(l1.words().iter().chain(l2.words()).cloned())
        .expect("union of nonempty lists");
    ListSum {
        list,
        alphabets_disjoint: disjoint,
    }
}

/// Replaces every occurrence of `s` by the word `fresh[0] .. fresh[p-1]`.
/// The generated shift is flow equivalent to the original; the invariant
/// pipeline is the test of that, not the construction.
pub fn symbol_expand(
    list: &GeneratingList,
    s: &Symbol,
    p: usize,
    fresh: Option<&[Symbol]>,
) -> Result<GeneratingList> {
    if p < 2 {
        return Err(Error::ExpansionTooShort(p));
    }
    if !list.contains_symbol(s) {
        return Err(Error::SymbolNotInAlphabet(s.token().to_string()));
    }
    let fresh: Vec<Symbol> = match fresh {
        Some(f) => {
            assert_eq!(f.len(), p, "need exactly p fresh symbols");
            f.to_vec()
        }
        None => default_fresh(s, p),
    };
    check_fresh(list, &fresh)?;
    GeneratingList::new(list.words().iter().map(|w| {
        let mut out = Vec::new();
        for sym in w.symbols() {
            if sym == s {
                out.extend(fresh.iter().cloned());
            } else {
                out.push(sym.clone());
            }
        }
        Word(out)
    }))
}

/// A decomposition of a word as a window into a concatenation of generators.
///
/// The beginning is a proper prefix of the first generator used and the end
/// a proper suffix of the last, so every generator in the run contributes at
/// least one letter to the word. Stripping the beginning from the first
/// generator and the end from the last reassembles the partitioned word.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub struct Partitioning {
    pub beginning: Word,
    pub generators: Vec<usize>,
    pub end: Word,
}

impl Partitioning {
    /// Reassembles the word this partitioning decomposes.
    pub fn reassemble(&self, list: &GeneratingList) -> Word {
        let full = Word::concat(self.generators.iter().map(|&i| &list.words()[i]));
        full.slice(self.beginning.len()..full.len() - self.end.len())
    }
}

/// All partitionings of `w` as a factor of concatenations of at most
/// `max_generators` generators. Complete whenever `max_generators >= |w|`,
/// since every generator in a run contributes at least one letter.
pub fn enumerate_partitionings(
    list: &GeneratingList,
    w: &Word,
    max_generators: usize,
) -> Vec<Partitioning> {
    assert!(max_generators >= 1);
    let mut found = BTreeSet::new();
    if w.is_empty() {
        return Vec::new();
    }
    let ws = w.symbols();
    for (first, g1) in list.words().iter().enumerate() {
        let g1s = g1.symbols();
        for b in 0..g1s.len() {
            let rest = &g1s[b..];
            if rest.len() >= ws.len() {
                if &rest[..ws.len()] == ws {
                    found.insert(Partitioning {
                        beginning: g1.slice(0..b),
                        generators: vec![first],
                        end: g1.slice(b + ws.len()..g1s.len()),
                    });
                }
            } else if ws.starts_with(rest) {
                extend_partitioning(
                    list,
                    ws,
                    rest.len(),
                    g1.slice(0..b),
                    vec![first],
                    max_generators,
                    &mut found,
                );
            }
        }
    }
    found.into_iter().collect()
}

fn extend_partitioning(
    list: &GeneratingList,
    ws: &[Symbol],
    pos: usize,
    beginning: Word,
    generators: Vec<usize>,
    max_generators: usize,
    found: &mut BTreeSet<Partitioning>,
) {
    if generators.len() == max_generators {
        return;
    }
    let remaining = ws.len() - pos;
    for (idx, g) in list.words().iter().enumerate() {
        let gs = g.symbols();
        if gs.len() >= remaining {
            if gs[..remaining] == ws[pos..] {
                let mut gens = generators.clone();
                gens.push(idx);
                found.insert(Partitioning {
                    beginning: beginning.clone(),
                    generators: gens,
                    end: g.slice(remaining..gs.len()),
                });
            }
        } else if ws[pos..pos + gs.len()] == *gs {
            let mut gens = generators.clone();
            gens.push(idx);
            extend_partitioning(list, ws, pos + gs.len(), beginning.clone(), gens, max_generators, found);
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Side {
    Left,
    Right,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum BorderingStatus {
    StronglyBordering,
    Bordering,
    NotBordering,
}

/// Classifies a word as (strongly) left- or right-bordering. Exact: the
/// partitionings of a fixed word are finitely enumerable, and a word is in
/// the language if and only if it has at least one partitioning.
pub fn bordering_status(list: &GeneratingList, w: &Word, side: Side) -> Result<BorderingStatus> {
    match side {
        Side::Right => bordering_status(&list.reversed(), &w.reversed(), Side::Left),
        Side::Left => {
            let parts = enumerate_partitionings(list, w, w.len().max(1));
            if parts.is_empty() {
                return Err(Error::NotInLanguage(w.display()));
            }
            let empty_beginnings = parts.iter().filter(|p| p.beginning.is_empty()).count();
            Ok(if empty_beginnings == parts.len() {
                BorderingStatus::StronglyBordering
            } else if empty_beginnings > 0 {
                BorderingStatus::Bordering
            } else {
                BorderingStatus::NotBordering
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sym(s: &str) -> Symbol {
        Symbol::new(s)
    }

    #[test]
    fn parse_char_split() {
        let l = parse_list("aa\naaa\nb", false).unwrap();
        assert_eq!(l, GeneratingList::of(&["aa", "aaa", "b"]));
        assert_eq!(l.alphabet().len(), 2);
    }

    #[test]
    fn parse_space_separated() {
        let l = parse_list("a a\nb", false).unwrap();
        assert_eq!(l, GeneratingList::of(&["aa", "b"]));
    }

    #[test]
    fn parse_empty_is_error() {
        assert_eq!(parse_list("", false), Err(Error::EmptyList));
        assert_eq!(parse_list("# only a comment\n\n", false), Err(Error::EmptyList));
    }

    #[test]
    fn parse_multichar() {
        let l = parse_list("ab\nc", true).unwrap();
        assert_eq!(l.words()[0].len(), 1);
        assert_eq!(l.alphabet().len(), 2);
    }

    #[test]
    fn parse_dedups() {
        let l = parse_list("b\naa\nb", false).unwrap();
        assert_eq!(l.words().len(), 2);
    }

    #[test]
    fn fragment_single_occurrence() {
        let l = GeneratingList::of(&["ab"]);
        let f = fragment(&l, &sym("a"), 2, None).unwrap();
        assert_eq!(
            f.words(),
            &[
                Word::from_tokens(&["a#1", "b"]),
                Word::from_tokens(&["a#2", "b"])
            ]
        );
    }

    #[test]
    fn fragment_enumerates_preimages() {
        // {aa} with a -> {a#1, a#2}: all 2^2 resymbollings, frozen by hand.
        let l = GeneratingList::of(&["aa"]);
        let f = fragment(&l, &sym("a"), 2, None).unwrap();
        let expect: BTreeSet<Word> = [
            Word::from_tokens(&["a#1", "a#1"]),
            Word::from_tokens(&["a#1", "a#2"]),
            Word::from_tokens(&["a#2", "a#1"]),
            Word::from_tokens(&["a#2", "a#2"]),
        ]
        .into_iter()
        .collect();
        assert_eq!(f.words().iter().cloned().collect::<BTreeSet<_>>(), expect);
    }

    #[test]
    fn fragment_missing_symbol() {
        let l = GeneratingList::of(&["aa", "b"]);
        assert_eq!(
            fragment(&l, &sym("c"), 2, None),
            Err(Error::SymbolNotInAlphabet("c".into()))
        );
    }

    #[test]
    fn fragment_fresh_collision() {
        let l = GeneratingList::of(&["ab"]);
        let fresh = [sym("b"), sym("c")];
        assert_eq!(
            fragment(&l, &sym("a"), 2, Some(&fresh)),
            Err(Error::FreshSymbolCollision("b".into()))
        );
    }

    #[test]
    fn fragment_size_formula() {
        // |fragment(L,s,k)| = sum over words of k^count(s,w)
        let l = GeneratingList::of(&["aba", "bb", "a"]);
        let f = fragment(&l, &sym("a"), 3, None).unwrap();
        assert_eq!(f.words().len(), 9 + 1 + 3);
    }

    #[test]
    fn fragment_then_collapse_roundtrip() {
        let l = GeneratingList::of(&["aba", "bb", "a"]);
        let f = fragment(&l, &sym("a"), 3, None).unwrap();
        let mut back = BTreeMap::new();
        for i in 1..=3 {
            back.insert(sym(&format!("a#{i}")), sym("a"));
        }
        assert_eq!(collapse_symbols(&f, &back).unwrap(), l);
    }

    #[test]
    fn sum_disjoint_and_idempotent() {
        let l1 = GeneratingList::of(&["aa", "aaa", "b"]);
        let l2 = GeneratingList::of(&["cc", "ccc", "d"]);
        let s = sum_lists(&l1, &l2);
        assert_eq!(s.list.words().len(), 6);
        assert!(s.alphabets_disjoint);

        let again = sum_lists(&l1, &l1);
        assert_eq!(again.list, l1);
        assert!(!again.alphabets_disjoint);

        let s3 = sum_lists(&GeneratingList::of(&["aa", "b"]), &GeneratingList::of(&["e"]));
        assert_eq!(s3.list, GeneratingList::of(&["aa", "b", "e"]));
        assert!(s3.alphabets_disjoint);
    }

    #[test]
    fn expand_examples() {
        let l = GeneratingList::of(&["ab"]);
        let e = symbol_expand(&l, &sym("a"), 2, None).unwrap();
        assert_eq!(e.words(), &[Word::from_tokens(&["a#1", "a#2", "b"])]);

        let l = GeneratingList::of(&["aa", "b"]);
        let e = symbol_expand(&l, &sym("a"), 2, None).unwrap();
        assert_eq!(
            e.words(),
            &[
                Word::from_tokens(&["a#1", "a#2", "a#1", "a#2"]),
                Word::letters("b"),
            ]
        );
        assert_eq!(
            symbol_expand(&l, &sym("a"), 1, None),
            Err(Error::ExpansionTooShort(1))
        );
    }

    // Partitionings of words of X({aa, aaa, b}), frozen from exhaustive hand
    // enumeration; these pin the normalization (beginning a proper prefix of
    // the first generator, end a proper suffix of the last).
    #[test]
    fn partitionings_of_b() {
        let l = GeneratingList::of(&["aa", "aaa", "b"]);
        let parts = enumerate_partitionings(&l, &Word::letters("b"), 3);
        assert_eq!(
            parts,
            vec![Partitioning {
                beginning: Word::empty(),
                generators: vec![2],
                end: Word::empty(),
            }]
        );
    }

    #[test]
    fn partitionings_of_ab_have_nonempty_beginnings() {
        let l = GeneratingList::of(&["aa", "aaa", "b"]);
        let parts = enumerate_partitionings(&l, &Word::letters("ab"), 4);
        assert!(!parts.is_empty());
        let beginnings: BTreeSet<Word> = parts.iter().map(|p| p.beginning.clone()).collect();
        let expect: BTreeSet<Word> = [Word::letters("a"), Word::letters("aa")].into_iter().collect();
        assert_eq!(beginnings, expect);
    }

    #[test]
    fn partitionings_of_aab() {
        let l = GeneratingList::of(&["aa", "aaa", "b"]);
        let parts = enumerate_partitionings(&l, &Word::letters("aab"), 4);
        assert!(parts.contains(&Partitioning {
            beginning: Word::empty(),
            generators: vec![0, 2],
            end: Word::empty(),
        }));
        assert!(parts.iter().any(|p| p.beginning == Word::letters("a")));
    }

    #[test]
    fn partitionings_reassemble() {
        let l = GeneratingList::of(&["aa", "aaa", "b"]);
        for w in ["b", "ab", "aab", "aabaa", "baab"] {
            let w = Word::letters(w);
            for p in enumerate_partitionings(&l, &w, w.len()) {
                assert_eq!(p.reassemble(&l), w);
            }
        }
    }

    #[test]
    fn bordering_examples() {
        let l = GeneratingList::of(&["aa", "aaa", "b"]);
        assert_eq!(
            bordering_status(&l, &Word::letters("b"), Side::Left).unwrap(),
            BorderingStatus::StronglyBordering
        );
        assert_eq!(
            bordering_status(&l, &Word::letters("aab"), Side::Left).unwrap(),
            BorderingStatus::Bordering
        );
        assert_eq!(
            bordering_status(&l, &Word::letters("ab"), Side::Left).unwrap(),
            BorderingStatus::NotBordering
        );
        assert_eq!(
            bordering_status(&l, &Word::letters("bab"), Side::Left),
            Err(Error::NotInLanguage("bab".into()))
        );
    }

    #[test]
    fn bordering_right_via_reversal() {
        let l = GeneratingList::of(&["aa", "aaa", "b"]);
        for w in ["b", "ab", "ba", "aab", "baa"] {
            let w = Word::letters(w);
            assert_eq!(
                bordering_status(&l, &w, Side::Right).unwrap(),
                bordering_status(&l.reversed(), &w.reversed(), Side::Left).unwrap()
            );
        }
    }
}
