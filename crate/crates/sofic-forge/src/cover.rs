//! SFT decision with memory certificate, left Krieger/Fischer covers via
//! m-block predecessor classes, minimal forbidden words, and the
//! block-language oracle.
//!
//! The cover pipeline first collapses sibling symbols: letters that are
//! interchangeable throughout the list (pairwise transpositions fix the
//! list, and the resymbolling count matches exactly) generate the same
//! shift as a fragmentation of the collapsed list, so covers of the
//! original are the collapsed covers with each sibling-class edge expanded
//! into one parallel edge per sibling. This keeps heavily fragmented
//! family instances at the size of their unfragmented skeletons. The
//! m-block predecessor-class construction itself is exact and runs on the
//! collapsed alphabet.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};

use crate::bits::Bits;
use crate::graph::{loop_graph, right_resolving_presentation, Dfa, LabelledGraph};
use crate::lang::{collapse_symbols, GeneratingList, Symbol, Word};
use crate::{Error, Result};

/// Internal word over sibling-class ids. Class ids are ordered by
/// representative token, so comparing id vectors is comparing the
/// representative token sequences.
pub(crate) type QWord = Vec<u16>;

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum CoverKind {
    Fischer,
    Krieger,
}

/// Two distinct equally labelled cycles in the right-resolving
/// presentation; the replayable witness that a shift is strictly sofic.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SoficWitness {
    pub label: Word,
    pub cycle_a: Vec<String>,
    pub cycle_b: Vec<String>,
}

impl SoficWitness {
    /// Checks both cycles against a presentation: same label word, closed,
    /// vertex-disjoint at every position.
    pub fn replays_on(&self, g: &LabelledGraph) -> bool {
        let desc_index: BTreeMap<&str, usize> = (0..g.vertex_count())
            .map(|v| (g.descriptor(v), v))
            .collect();
        let edges: BTreeSet<(usize, usize, Symbol)> = g.edges().cloned().collect();
        let k = self.label.len();
        if self.cycle_a.len() != k + 1 || self.cycle_b.len() != k + 1 {
            return false;
        }
        if self.cycle_a[0] != self.cycle_a[k] || self.cycle_b[0] != self.cycle_b[k] {
            return false;
        }
        for cycle in [&self.cycle_a, &self.cycle_b] {
            for (i, sym) in self.label.symbols().iter().enumerate() {
                let (Some(&s), Some(&d)) = (
                    desc_index.get(cycle[i].as_str()),
                    desc_index.get(cycle[i + 1].as_str()),
                ) else {
                    return false;
                };
                if !edges.contains(&(s, d, sym.clone())) {
                    return false;
                }
            }
        }
        (0..k).all(|i| self.cycle_a[i] != self.cycle_b[i])
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum SftVerdict {
    IsSft { memory: usize },
    NotSft { witness: SoficWitness },
}

/// Verdict plus the deterministic presentation it was decided on.
#[derive(Clone, Debug)]
pub struct SftCertificate {
    pub verdict: SftVerdict,
    pub presentation: LabelledGraph,
}

impl SftCertificate {
    pub fn memory(&self) -> Result<usize> {
        match &self.verdict {
            SftVerdict::IsSft { memory } => Ok(*memory),
            SftVerdict::NotSft { witness } => Err(Error::NotSft(
                witness.cycle_a.join(","),
                witness.cycle_b.join(","),
                witness.label.display(),
            )),
        }
    }
}

/// Everything the downstream modules need about one renewal system:
/// sibling classes, the collapsed list and loop graph, and the
/// right-resolving presentation of the collapsed system.
#[derive(Clone, Debug)]
pub(crate) struct System {
    pub list: GeneratingList,
    pub classes: Vec<Vec<Symbol>>,
    pub qalpha: Vec<Symbol>,
    pub qlist: GeneratingList,
    pub qloop: LabelledGraph,
    pub dfa: Dfa,
}

impl System {
    pub fn analyze(list: &GeneratingList) -> Result<System> {
        let classes = sibling_classes(list);
        let mut map = BTreeMap::new();
        for class in &classes {
            for s in class {
                map.insert(s.clone(), class[0].clone());
            }
        }
        let qlist = collapse_symbols(list, &map)?;
        let qalpha: Vec<Symbol> = qlist.alphabet().to_vec();
        let qloop = loop_graph(&qlist);
        let det = right_resolving_presentation(&qloop)?;
        let dfa = Dfa::from_graph(&det);
        // Every symbol occurs in some word, so the presentation's alphabet
        // is the whole quotient alphabet and dfa symbol ids are class ids.
        assert_eq!(dfa.symbols, qalpha);
        Ok(System {
            list: list.clone(),
            classes,
            qalpha,
            qlist,
            qloop,
            dfa,
        })
    }

    pub fn class_count(&self) -> usize {
        self.qalpha.len()
    }

    pub fn class_of(&self, s: &Symbol) -> Option<u16> {
        self.classes
            .iter()
            .position(|c| c.contains(s))
            .map(|i| i as u16)
    }

    pub fn qword(&self, w: &Word) -> Option<QWord> {
        w.symbols().iter().map(|s| self.class_of(s)).collect()
    }

    pub fn word_of(&self, q: &[u16]) -> Word {
        Word::new(q.iter().map(|&i| self.qalpha[i as usize].clone()).collect())
    }

    /// Expands collapsed edges back to one parallel edge per sibling.
    pub fn expand_graph(&self, g: &LabelledGraph) -> LabelledGraph {
        let by_rep: BTreeMap<&Symbol, &Vec<Symbol>> =
            self.classes.iter().map(|c| (&c[0], c)).collect();
        let mut edges = Vec::new();
        for (s, d, l) in g.edges() {
            for t in by_rep[l] {
                edges.push((*s, *d, t.clone()));
            }
        }
        LabelledGraph::new(g.descriptors().to_vec(), edges).expect("expansion preserves shape")
    }

    /// Quotient words of the generating list, deduplicated and sorted.
    pub fn qgenerators(&self) -> Vec<QWord> {
        let set: BTreeSet<QWord> = self
            .qlist
            .words()
            .iter()
            .map(|w| self.qword(w).expect("list words are in the alphabet"))
            .collect();
        set.into_iter().collect()
    }
}

/// Groups symbols that the list cannot tell apart: the transposition of any
/// two symbols in a group fixes the list, and the group-collapsing map has
/// an exact resymbolling count, so the list is the full preimage of its
/// collapse. Falls back to singletons when the count check fails.
fn sibling_classes(list: &GeneratingList) -> Vec<Vec<Symbol>> {
    let alphabet = list.alphabet();
    let n = alphabet.len();
    let words: BTreeSet<&Word> = list.words().iter().collect();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut Vec<usize>, mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for i in 0..n {
        for j in i + 1..n {
            if find(&mut parent, i) == find(&mut parent, j) {
                continue;
            }
            let swapped_fixes_list = list.words().iter().all(|w| {
                let sw = Word::new(
                    w.symbols()
                        .iter()
                        .map(|s| {
                            if *s == alphabet[i] {
                                alphabet[j].clone()
                            } else if *s == alphabet[j] {
                                alphabet[i].clone()
                            } else {
                                s.clone()
                            }
                        })
                        .collect(),
                );
                words.contains(&sw)
            });
            if swapped_fixes_list {
                let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                parent[a.max(b)] = a.min(b);
            }
        }
    }
    let mut groups: BTreeMap<usize, Vec<Symbol>> = BTreeMap::new();
    for i in 0..n {
        let root = find(&mut parent, i);
        groups.entry(root).or_default().push(alphabet[i].clone());
    }
    let classes: Vec<Vec<Symbol>> = groups.into_values().collect();

    // Exactness: |L| must equal the resymbolling count of its collapse.
    let size_of: BTreeMap<&Symbol, usize> = classes
        .iter()
        .flat_map(|c| c.iter().map(move |s| (s, c.len())))
        .collect();
    let rep_of: BTreeMap<&Symbol, &Symbol> = classes
        .iter()
        .flat_map(|c| c.iter().map(move |s| (s, &c[0])))
        .collect();
    let mut collapsed: BTreeMap<Vec<&Symbol>, usize> = BTreeMap::new();
    for w in list.words() {
        let key: Vec<&Symbol> = w.symbols().iter().map(|s| rep_of[s]).collect();
        let count: usize = w.symbols().iter().map(|s| size_of[s]).product();
        collapsed.insert(key, count);
    }
    let expected: usize = collapsed.values().sum();
    if expected == list.words().len() {
        classes
    } else {
        alphabet.iter().map(|s| vec![s.clone()]).collect()
    }
}

/// Builds the right-resolving presentation, forms the label-synchronised
/// off-diagonal pair graph, and either certifies the memory (longest pair
/// path plus one) or returns a replayable strictly-sofic witness cycle.
pub fn sft_certificate(list: &GeneratingList) -> Result<SftCertificate> {
    let sys = System::analyze(list)?;
    Ok(certificate_of(&sys))
}

pub(crate) fn certificate_of(sys: &System) -> SftCertificate {
    let presentation = sys.expand_graph(&sys.dfa.to_graph()).canonical();
    let n = sys.dfa.state_count();
    let k = sys.class_count();
    if n <= 1 {
        return SftCertificate {
            verdict: SftVerdict::IsSft { memory: 0 },
            presentation,
        };
    }
    // Ordered off-diagonal pairs.
    let pair_id = |p: usize, q: usize| p * n + q;
    let mut edges: Vec<Vec<(usize, u16)>> = vec![Vec::new(); n * n];
    let mut out_deg = vec![0usize; n * n];
    let mut in_deg = vec![0usize; n * n];
    for p in 0..n {
        for q in 0..n {
            if p == q {
                continue;
            }
            for s in 0..k {
                if let (Some(p2), Some(q2)) = (sys.dfa.delta[p][s], sys.dfa.delta[q][s]) {
                    if p2 != q2 {
                        edges[pair_id(p, q)].push((pair_id(p2, q2), s as u16));
                        out_deg[pair_id(p, q)] += 1;
                        in_deg[pair_id(p2, q2)] += 1;
                    }
                }
            }
        }
    }
    let off_diag: Vec<usize> = (0..n * n).filter(|&id| id / n != id % n).collect();

    // Peel states with no outgoing pair edge; leftovers feed a cycle.
    let mut alive: Vec<bool> = vec![false; n * n];
    for &id in &off_diag {
        alive[id] = true;
    }
    let mut out_left = out_deg.clone();
    let mut rev: Vec<Vec<usize>> = vec![Vec::new(); n * n];
    for &id in &off_diag {
        for &(t, _) in &edges[id] {
            rev[t].push(id);
        }
    }
    let mut queue: VecDeque<usize> = off_diag.iter().cloned().filter(|&v| out_left[v] == 0).collect();
    while let Some(v) = queue.pop_front() {
        alive[v] = false;
        for &u in &rev[v] {
            out_left[u] -= 1;
            if out_left[u] == 0 && alive[u] {
                queue.push_back(u);
            }
        }
    }
    if let Some(&start) = off_diag.iter().find(|&&v| alive[v]) {
        // Walk forward through live states until one repeats, then cut.
        let mut path = vec![start];
        let mut labels: Vec<u16> = Vec::new();
        let mut seen_at: HashMap<usize, usize> = HashMap::new();
        seen_at.insert(start, 0);
        let mut cur = start;
        loop {
            let &(next, sym) = edges[cur]
                .iter()
                .filter(|(t, _)| alive[*t])
                .min()
                .expect("live state keeps a live successor");
            labels.push(sym);
            path.push(next);
            if let Some(&at) = seen_at.get(&next) {
                let cycle = &path[at..];
                let labels = &labels[at..];
                let word = sys.word_of(labels);
                let desc =
                    |id: usize| sys.dfa.descriptors[id].clone();
                let witness = SoficWitness {
                    label: word,
                    cycle_a: cycle.iter().map(|&v| desc(v / n)).collect(),
                    cycle_b: cycle.iter().map(|&v| desc(v % n)).collect(),
                };
                debug_assert!(witness.replays_on(&presentation));
                return SftCertificate {
                    verdict: SftVerdict::NotSft { witness },
                    presentation,
                };
            }
            seen_at.insert(next, path.len() - 1);
            cur = next;
        }
    }

    // Acyclic: memory = longest pair path + 1.
    let mut topo: Vec<usize> = Vec::new();
    let mut indeg = in_deg.clone();
    let mut q: VecDeque<usize> = off_diag.iter().cloned().filter(|&v| indeg[v] == 0).collect();
    while let Some(v) = q.pop_front() {
        topo.push(v);
        for &(t, _) in &edges[v] {
            indeg[t] -= 1;
            if indeg[t] == 0 {
                q.push_back(t);
            }
        }
    }
    let mut longest = vec![0usize; n * n];
    let mut best = 0;
    for &v in &topo {
        for &(t, _) in &edges[v] {
            longest[t] = longest[t].max(longest[v] + 1);
            best = best.max(longest[t]);
        }
    }
    SftCertificate {
        verdict: SftVerdict::IsSft { memory: best + 1 },
        presentation,
    }
}

/// Backward-subset tables: for every allowed collapsed block of length up
/// to `upto`, the set of presentation states the block is readable from.
pub(crate) fn i_levels(dfa: &Dfa, upto: usize) -> Vec<HashMap<QWord, Bits>> {
    let n = dfa.state_count();
    let k = dfa.symbols.len();
    let mut levels: Vec<HashMap<QWord, Bits>> = Vec::with_capacity(upto + 1);
    levels.push([(QWord::new(), Bits::full(n))].into_iter().collect());
    for j in 1..=upto {
        let mut next: HashMap<QWord, Bits> = HashMap::new();
        for (w, iset) in &levels[j - 1] {
            for s in 0..k {
                let pre = dfa.pre(iset, s);
                if !pre.is_empty() {
                    let mut w2 = QWord::with_capacity(j);
                    w2.push(s as u16);
                    w2.extend_from_slice(w);
                    next.insert(w2, pre);
                }
            }
        }
        levels.push(next);
    }
    levels
}

/// Forward-subset table for blocks of exactly length `len`: endpoint sets.
pub(crate) fn t_level(dfa: &Dfa, len: usize) -> HashMap<QWord, Bits> {
    let n = dfa.state_count();
    let k = dfa.symbols.len();
    let mut level: HashMap<QWord, Bits> = [(QWord::new(), Bits::full(n))].into_iter().collect();
    for j in 1..=len {
        let mut next: HashMap<QWord, Bits> = HashMap::new();
        for (w, tset) in &level {
            for s in 0..k {
                let post = dfa.post(tset, s);
                if !post.is_empty() {
                    let mut w2 = QWord::with_capacity(j);
                    w2.extend_from_slice(w);
                    w2.push(s as u16);
                    next.insert(w2, post);
                }
            }
        }
        level = next;
    }
    level
}

/// Interned tables of all allowed collapsed blocks up to a length bound.
/// Block ids per level are lexicographic; each entry records its length
/// minus-one prefix, its one-step suffix (`tail`), its end state set
/// (`tset`, forward) and its start state set (`iset`, backward).
pub(crate) struct BlockTable {
    pub prefix: Vec<Vec<u32>>,
    pub last: Vec<Vec<u16>>,
    pub first: Vec<Vec<u16>>,
    pub tail: Vec<Vec<u32>>,
    pub tset: Vec<Vec<u128>>,
    pub iset: Vec<Vec<u128>>,
}

impl BlockTable {
    pub fn build(dfa: &Dfa, upto: usize) -> BlockTable {
        let full = dfa.full_mask();
        let k = dfa.symbols.len();
        let mut bt = BlockTable {
            prefix: vec![vec![0]],
            last: vec![vec![0]],
            first: vec![vec![0]],
            tail: vec![vec![0]],
            tset: vec![vec![full]],
            iset: vec![vec![full]],
        };
        let mut prev_map: HashMap<(u32, u16), u32> = HashMap::new();
        for j in 1..=upto {
            let mut prefix = Vec::new();
            let mut last = Vec::new();
            let mut first = Vec::new();
            let mut tail = Vec::new();
            let mut tset = Vec::new();
            let mut map: HashMap<(u32, u16), u32> = HashMap::new();
            for p in 0..bt.tset[j - 1].len() {
                for s in 0..k {
                    let t = dfa.post_mask(bt.tset[j - 1][p], s);
                    if t == 0 {
                        continue;
                    }
                    let tl = if j == 1 {
                        0
                    } else {
                        prev_map[&(bt.tail[j - 1][p], s as u16)]
                    };
                    let f = if j == 1 { s as u16 } else { bt.first[j - 1][p] };
                    map.insert((p as u32, s as u16), prefix.len() as u32);
                    prefix.push(p as u32);
                    last.push(s as u16);
                    first.push(f);
                    tail.push(tl);
                    tset.push(t);
                }
            }
            let iset = (0..prefix.len())
                .map(|id| dfa.pre_mask(bt.iset[j - 1][tail[id] as usize], first[id] as usize))
                .collect();
            bt.prefix.push(prefix);
            bt.last.push(last);
            bt.first.push(first);
            bt.tail.push(tail);
            bt.tset.push(tset);
            bt.iset.push(iset);
            prev_map = map;
        }
        bt
    }

    pub fn len(&self, level: usize) -> usize {
        self.tset[level].len()
    }

    pub fn qword(&self, level: usize, id: usize) -> QWord {
        let mut out = QWord::with_capacity(level);
        let mut l = level;
        let mut cur = id;
        while l > 0 {
            out.push(self.last[l][cur]);
            cur = self.prefix[l][cur] as usize;
            l -= 1;
        }
        out.reverse();
        out
    }
}

/// A left Krieger or Fischer cover: the labelled graph plus, per vertex,
/// its canonical representative m-block; predecessor fingerprints (the set
/// of length-m blocks that may precede a vertex) are answered from state
/// sets and only materialised on demand.
#[derive(Clone, Debug)]
pub struct Cover {
    pub graph: LabelledGraph,
    pub kind: CoverKind,
    pub memory: usize,
    blocks: Vec<Word>,
    scc_count: usize,
    pub(crate) sys: System,
    pub(crate) class_isets: Vec<u128>,
    pub(crate) iset_to_class: HashMap<u128, usize>,
}

impl Cover {
    pub fn vertex_count(&self) -> usize {
        self.graph.vertex_count()
    }

    pub fn vertex_block(&self, v: usize) -> &Word {
        &self.blocks[v]
    }

    pub fn scc_count(&self) -> usize {
        self.scc_count
    }

    /// The cover vertex whose class contains this length-m block.
    pub fn vertex_of_block(&self, w: &Word) -> Option<usize> {
        let q = self.sys.qword(w)?;
        self.vertex_of_qblock(&q)
    }

    pub(crate) fn vertex_of_qblock(&self, q: &QWord) -> Option<usize> {
        if q.len() != self.memory {
            return None;
        }
        let mut mask = self.sys.dfa.full_mask();
        for &s in q.iter().rev() {
            mask = self.sys.dfa.pre_mask(mask, s as usize);
            if mask == 0 {
                return None;
            }
        }
        self.iset_to_class.get(&mask).copied()
    }

    /// Membership of a length-m collapsed block in a vertex fingerprint,
    /// decided on state sets rather than materialised word sets.
    pub(crate) fn fingerprint_contains(&self, v: usize, q: &QWord) -> bool {
        let mut mask = self.sys.dfa.full_mask();
        for &s in q {
            mask = self.sys.dfa.post_mask(mask, s as usize);
            if mask == 0 {
                return false;
            }
        }
        mask & self.class_isets[v] != 0
    }

    /// The full predecessor fingerprint of a vertex as words; exponential
    /// in the memory, intended for reports and the JSON dump.
    pub fn fingerprint_blocks(&self, v: usize) -> Vec<Word> {
        let bt = BlockTable::build(&self.sys.dfa, self.memory);
        let m = self.memory;
        (0..bt.len(m))
            .filter(|&id| bt.tset[m][id] & self.class_isets[v] != 0)
            .map(|id| self.sys.word_of(&bt.qword(m, id)))
            .collect()
    }

    pub fn to_json(&self) -> serde_json::Value {
        let vertices: Vec<serde_json::Value> = (0..self.vertex_count())
            .map(|v| {
                serde_json::json!({
                    "id": v,
                    "descriptor": self.graph.descriptor(v),
                    "block": self.blocks[v].display(),
                    "fingerprint": self.fingerprint_blocks(v)
                        .iter().map(Word::display).collect::<Vec<_>>(),
                })
            })
            .collect();
        let edges: Vec<serde_json::Value> = self
            .graph
            .edges()
            .map(|(s, d, l)| serde_json::json!({"src": s, "dst": d, "label": l.token()}))
            .collect();
        serde_json::json!({
            "kind": match self.kind { CoverKind::Fischer => "fischer", CoverKind::Krieger => "krieger" },
            "memory": self.memory,
            "vertices": vertices,
            "edges": edges,
        })
    }
}

pub fn left_fischer_cover(list: &GeneratingList) -> Result<Cover> {
    left_cover(list, CoverKind::Fischer)
}

/// Vertices are the classes of allowed length-m blocks under equal
/// predecessor fingerprint; there is an edge labelled `a` from
/// `class(prefix_m(a u))` to `class(u)` whenever `a u` is allowed. With
/// `kind = Krieger` the irreducibility requirement is skipped and the
/// component count is reported instead.
pub fn left_cover(list: &GeneratingList, kind: CoverKind) -> Result<Cover> {
    let sys = System::analyze(list)?;
    let cert = certificate_of(&sys);
    let m = cert.memory()?;
    build_cover(sys, m, kind)
}

fn build_cover(sys: System, m: usize, kind: CoverKind) -> Result<Cover> {
    let ilevels = i_levels(&sys.dfa, m);
    let tlevel = t_level(&sys.dfa, m);
    let mut blocks: Vec<QWord> = ilevels[m].keys().cloned().collect();
    blocks.sort();
    debug_assert_eq!(
        blocks.iter().collect::<BTreeSet<_>>(),
        tlevel.keys().collect::<BTreeSet<_>>()
    );

    // Fingerprint classes of I-sets, separated by which T-sets they meet.
    let mut iset_ids: HashMap<Bits, usize> = HashMap::new();
    let mut isets: Vec<Bits> = Vec::new();
    let mut block_iset: Vec<usize> = Vec::with_capacity(blocks.len());
    for b in &blocks {
        let iset = &ilevels[m][b];
        let id = *iset_ids.entry(iset.clone()).or_insert_with(|| {
            isets.push(iset.clone());
            isets.len() - 1
        });
        block_iset.push(id);
    }
    let mut tset_ids: HashMap<Bits, usize> = HashMap::new();
    let mut tsets: Vec<Bits> = Vec::new();
    for b in &blocks {
        let t = &tlevel[b];
        if !tset_ids.contains_key(t) {
            tset_ids.insert(t.clone(), tsets.len());
            tsets.push(t.clone());
        }
    }
    let signature: Vec<Vec<bool>> = isets
        .iter()
        .map(|s| tsets.iter().map(|t| t.intersects(s)).collect())
        .collect();
    // Class numbering follows the first block (in sorted order) of each
    // class, which keeps everything deterministic.
    let mut class_of_sig: HashMap<&Vec<bool>, usize> = HashMap::new();
    let mut class_isets: Vec<Bits> = Vec::new();
    for (bi, _) in blocks.iter().enumerate() {
        let id = block_iset[bi];
        let fresh = class_of_sig.len();
        let c = *class_of_sig.entry(&signature[id]).or_insert(fresh);
        if c == class_isets.len() {
            class_isets.push(isets[id].clone());
        }
    }
    let class_count = class_of_sig.len();
    let iset_class: Vec<usize> = (0..isets.len())
        .map(|id| class_of_sig[&signature[id]])
        .collect();

    let block_class_raw: Vec<usize> = block_iset.iter().map(|&id| iset_class[id]).collect();

    // Representative block and fingerprint per class.
    let mut rep_block: Vec<Option<&QWord>> = vec![None; class_count];
    for (bi, b) in blocks.iter().enumerate() {
        let c = block_class_raw[bi];
        if rep_block[c].is_none() {
            rep_block[c] = Some(b); // blocks sorted: first hit is least
        }
    }
    let fingerprints_raw: Vec<Vec<QWord>> = (0..class_count)
        .map(|c| {
            blocks
                .iter()
                .filter(|v| tlevel[*v].intersects(&class_isets[c]))
                .cloned()
                .collect()
        })
        .collect();

    // Edges on the collapsed alphabet; left-resolving by construction, and
    // the uniqueness of each (target, label) source is asserted.
    let k = sys.class_count();
    let mut qedges: BTreeSet<(usize, usize, u16)> = BTreeSet::new();
    let mut source_of: HashMap<(usize, u16), usize> = HashMap::new();
    for (bi, b) in blocks.iter().enumerate() {
        let dst = block_class_raw[bi];
        for s in 0..k {
            let pre = sys.dfa.pre(&ilevels[m][b], s);
            if pre.is_empty() {
                continue;
            }
            let mut src_block = QWord::with_capacity(m);
            src_block.push(s as u16);
            src_block.extend_from_slice(b);
            src_block.truncate(m);
            let sbi = blocks.binary_search(&src_block).map_err(|_| Error::NotWellDefined)?;
            let src = block_class_raw[sbi];
            match source_of.entry((dst, s as u16)) {
                std::collections::hash_map::Entry::Occupied(e) => {
                    if *e.get() != src {
                        return Err(Error::NotWellDefined);
                    }
                }
                std::collections::hash_map::Entry::Vacant(e) => {
                    e.insert(src);
                }
            }
            qedges.insert((src, dst, s as u16));
        }
    }

    // Descriptors from representative blocks; compact join only when the
    // whole alphabet is single-character tokens, so descriptors stay unique.
    let compact = sys
        .list
        .alphabet()
        .iter()
        .all(|s| s.token().chars().count() == 1);
    let display = |q: &QWord| -> String {
        if q.is_empty() {
            return "ε".to_string();
        }
        let tokens: Vec<&str> = q.iter().map(|&i| sys.qalpha[i as usize].token()).collect();
        if compact {
            tokens.concat()
        } else {
            tokens.join(" ")
        }
    };
    let descriptors: Vec<String> = (0..class_count)
        .map(|c| display(rep_block[c].expect("class nonempty")))
        .collect();

    // Canonical order: sort by descriptor.
    let mut order: Vec<usize> = (0..class_count).collect();
    order.sort_by(|&a, &b| descriptors[a].cmp(&descriptors[b]));
    let mut position = vec![0usize; class_count];
    for (new, &old) in order.iter().enumerate() {
        position[old] = new;
    }

    let qgraph = LabelledGraph::new(
        order.iter().map(|&c| descriptors[c].clone()).collect(),
        qedges
            .iter()
            .map(|&(s, d, l)| (position[s], position[d], sys.qalpha[l as usize].clone())),
    )?;
    let graph = sys.expand_graph(&qgraph);

    let scc_count = graph.strongly_connected_components().len();
    if kind == CoverKind::Fischer && scc_count != 1 {
        return Err(Error::NotIrreducible);
    }
    debug_assert!(graph.is_left_resolving());

    let blocks_out: Vec<Word> = order
        .iter()
        .map(|&c| sys.word_of(rep_block[c].expect("class nonempty")))
        .collect();
    let fingerprints: Vec<Vec<Word>> = order
        .iter()
        .map(|&c| fingerprints_raw[c].iter().map(|q| sys.word_of(q)).collect())
        .collect();
    let class_isets_out: Vec<Bits> = order.iter().map(|&c| class_isets[c].clone()).collect();
    let block_class: HashMap<QWord, usize> = blocks
        .iter()
        .enumerate()
        .map(|(bi, b)| (b.clone(), position[block_class_raw[bi]]))
        .collect();

    Ok(Cover {
        graph,
        kind,
        memory: m,
        blocks: blocks_out,
        fingerprints,
        scc_count,
        sys,
        block_class,
        class_isets: class_isets_out,
        tlevel,
    })
}

/// All minimal forbidden words: not in the language, with both maximal
/// proper windows allowed. For an SFT with memory m these have length at
/// most m + 1 and regenerate the shift.
pub fn infer_forbidden_words(list: &GeneratingList) -> Result<Vec<Word>> {
    let sys = System::analyze(list)?;
    let m = certificate_of(&sys).memory()?;
    let ilevels = i_levels(&sys.dfa, m + 1);
    let k = sys.class_count();
    let mut out: BTreeSet<Word> = BTreeSet::new();
    for len in 1..=m + 1 {
        for w in ilevels[len - 1].keys() {
            for s in 0..k {
                if !sys.dfa.pre(&ilevels[len - 1][w], s).is_empty() {
                    continue; // s·w allowed
                }
                let mut u = QWord::with_capacity(len);
                u.push(s as u16);
                u.extend_from_slice(w);
                let prefix = &u[..len - 1];
                if len > 1 && !ilevels[len - 1].contains_key(prefix) {
                    continue;
                }
                // Expand over sibling classes.
                let mut expansions: Vec<Vec<Symbol>> = vec![Vec::new()];
                for &ci in &u {
                    let class = &sys.classes[ci as usize];
                    expansions = expansions
                        .into_iter()
                        .flat_map(|p| {
                            class.iter().map(move |t| {
                                let mut p2 = p.clone();
                                p2.push(t.clone());
                                p2
                            })
                        })
                        .collect();
                }
                out.extend(expansions.into_iter().map(Word::new));
            }
        }
    }
    Ok(out.into_iter().collect())
}

/// Exact B_n of the renewal system via path labels in the loop graph of
/// the original, uncollapsed list. This is the brute-force oracle every
/// other construction is tested against.
pub fn block_language(list: &GeneratingList, n: usize) -> BTreeSet<Word> {
    loop_graph(list).block_labels(n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lang::fragment;

    fn fig1_graph() -> LabelledGraph {
        // Left Fischer cover of X({aa, aaa, b}), vertices P0, P1, P2.
        let a = Symbol::new("a");
        let b = Symbol::new("b");
        LabelledGraph::new(
            vec!["P0".into(), "P1".into(), "P2".into()],
            vec![
                (0, 0, b.clone()),
                (0, 1, b),
                (1, 1, a.clone()),
                (1, 2, a.clone()),
                (2, 0, a),
            ],
        )
        .unwrap()
    }

    #[test]
    fn certificate_examples() {
        let cert = sft_certificate(&GeneratingList::of(&["aa", "aaa", "b"])).unwrap();
        assert_eq!(cert.memory().unwrap(), 2);

        let cert = sft_certificate(&GeneratingList::of(&["a", "b"])).unwrap();
        assert_eq!(cert.memory().unwrap(), 0);

        let cert = sft_certificate(&GeneratingList::of(&["a", "bb"])).unwrap();
        match cert.verdict {
            SftVerdict::NotSft { ref witness } => {
                assert!(witness.replays_on(&cert.presentation));
                assert!(!witness.label.is_empty());
            }
            _ => panic!("even shift must not be SFT"),
        }
    }

    #[test]
    fn fischer_cover_fig1() {
        let cover = left_fischer_cover(&GeneratingList::of(&["aa", "aaa", "b"])).unwrap();
        assert_eq!(cover.vertex_count(), 3);
        assert_eq!(cover.memory, 2);
        assert!(crate::graph::labelled_iso(&cover.graph, &fig1_graph()).is_some());
        assert!(cover.graph.is_left_resolving());
        assert!(cover.graph.is_irreducible());

        // Krieger flag agrees on irreducible SFT input.
        let krieger = left_cover(&GeneratingList::of(&["aa", "aaa", "b"]), CoverKind::Krieger).unwrap();
        assert_eq!(krieger.scc_count(), 1);
        assert!(crate::graph::labelled_iso(&cover.graph, &krieger.graph).is_some());
    }

    #[test]
    fn fischer_cover_not_sft_errors() {
        match left_fischer_cover(&GeneratingList::of(&["a", "bb"])) {
            Err(Error::NotSft(..)) => {}
            other => panic!("expected NotSft, got {other:?}"),
        }
    }

    #[test]
    fn fischer_cover_full_shift() {
        let cover = left_fischer_cover(&GeneratingList::of(&["a", "b"])).unwrap();
        assert_eq!(cover.vertex_count(), 1);
        assert_eq!(cover.memory, 0);
        assert_eq!(cover.graph.edge_count(), 2);
    }

    #[test]
    fn forbidden_words_examples() {
        let f = infer_forbidden_words(&GeneratingList::of(&["aa", "aaa", "b"])).unwrap();
        assert_eq!(f, vec![Word::letters("bab")]);

        let f = infer_forbidden_words(&GeneratingList::of(&["a", "b"])).unwrap();
        assert!(f.is_empty());
    }

    #[test]
    fn block_language_examples() {
        let l = GeneratingList::of(&["aa", "aaa", "b"]);
        let b3 = block_language(&l, 3);
        assert_eq!(b3.len(), 7);
        assert!(!b3.contains(&Word::letters("bab")));

        let l = GeneratingList::of(&["a", "bb"]);
        let b2 = block_language(&l, 2);
        assert_eq!(b2.len(), 4);

        assert_eq!(
            block_language(&GeneratingList::of(&["ab"]), 0),
            [Word::empty()].into_iter().collect()
        );
    }

    #[test]
    fn forbidden_words_regenerate_language() {
        for words in [vec!["aa", "aaa", "b"], vec!["a", "ab"], vec!["ba", "b"]] {
            let list = GeneratingList::of(&words);
            let m = sft_certificate(&list).unwrap().memory().unwrap();
            let forbidden = infer_forbidden_words(&list).unwrap();
            let alphabet = list.alphabet().to_vec();
            // Every word up to length m+2 avoiding the forbidden set is in
            // the language, and vice versa.
            let mut all = vec![Word::empty()];
            for len in 1..=m + 2 {
                let mut next = Vec::new();
                for w in &all {
                    if w.len() == len - 1 {
                        for s in &alphabet {
                            let mut w2 = w.clone();
                            w2.push(s.clone());
                            next.push(w2);
                        }
                    }
                }
                let lang = block_language(&list, len);
                for w in &next {
                    let clean = !forbidden.iter().any(|f| {
                        w.len() >= f.len()
                            && (0..=w.len() - f.len())
                                .any(|i| &w.slice(i..i + f.len()) == f)
                    });
                    assert_eq!(clean, lang.contains(w), "{words:?} {w}");
                }
                all = next;
            }
        }
    }

    #[test]
    fn cover_blocks_and_fingerprints_fig1() {
        let cover = left_fischer_cover(&GeneratingList::of(&["aa", "aaa", "b"])).unwrap();
        // Canonical order sorts descriptors: aa < ab < ba.
        assert_eq!(cover.vertex_block(0), &Word::letters("aa"));
        assert_eq!(cover.vertex_block(1), &Word::letters("ab"));
        assert_eq!(cover.vertex_block(2), &Word::letters("ba"));
        assert_eq!(cover.fingerprint(0).len(), 4); // P1 sees everything
        assert_eq!(
            cover.fingerprint(1),
            &[Word::letters("aa"), Word::letters("ba")]
        );
        assert_eq!(cover.fingerprint(2).len(), 3);
        assert_eq!(cover.vertex_of_block(&Word::letters("bb")), Some(2));
    }

    #[test]
    fn sibling_collapse_matches_plain_pipeline() {
        // Fragmented golden mean: cover must be the plain cover with
        // sibling-parallel edges, and the certificate must agree.
        let base = GeneratingList::of(&["a", "ab"]);
        let fragged = fragment(&base, &Symbol::new("b"), 3, None).unwrap();
        let sys = System::analyze(&fragged).unwrap();
        assert_eq!(sys.classes.iter().filter(|c| c.len() == 3).count(), 1);

        let cover = left_fischer_cover(&fragged).unwrap();
        assert_eq!(cover.memory, 1);
        assert_eq!(cover.vertex_count(), 2);
        // 2 a-edges + 3 parallel b-edges
        assert_eq!(cover.graph.edge_count(), 5);

        // Language check against the uncollapsed loop graph.
        for n in 0..=4 {
            assert_eq!(
                cover.graph.block_labels(n),
                block_language(&fragged, n),
                "n={n}"
            );
        }
    }

    #[test]
    fn sibling_collapse_rejects_lookalikes() {
        // {a1 a1, a2 a2} is closed under the swap but is not a full
        // preimage; the count check must fall back to singletons.
        let list = GeneratingList::new(vec![
            Word::from_tokens(&["a1", "a1"]),
            Word::from_tokens(&["a2", "a2"]),
        ])
        .unwrap();
        let sys = System::analyze(&list).unwrap();
        assert!(sys.classes.iter().all(|c| c.len() == 1));
    }

    #[test]
    fn memory_minimality() {
        // Two equally labelled paths of length m-1 with distinct endpoints.
        let list = GeneratingList::of(&["aa", "aaa", "b"]);
        let sys = System::analyze(&list).unwrap();
        let m = certificate_of(&sys).memory().unwrap();
        assert!(m >= 1);
        let t = t_level(&sys.dfa, m - 1);
        assert!(
            t.values().any(|set| set.iter_ones().count() > 1),
            "some (m-1)-block must end at two distinct states"
        );
        let t = t_level(&sys.dfa, m);
        assert!(t.values().all(|set| set.iter_ones().count() == 1));
    }
}
