//! Border points, universal border points, generators, modularity, and the
//! two Fischer-cover surgeries (modular sum, diagonal plus modular sum).
//!
//! A cover vertex is a border point when it is the predecessor class of a
//! left-bordering right-ray; with memory m those are exactly the classes
//! of length-m labels of paths leaving the loop graph's central vertex.
//! Universality is decided by an exact lasso search over reading
//! configurations: track the set of loop-graph positions consistent with
//! the ray read so far, once from the central vertex and once from all
//! other starts together. A strongly left-bordering ray exists iff a
//! configuration is reachable in which the non-central side is dead and
//! the central side can still run through a cycle.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};

use crate::bits::Bits;
use crate::cover::{i_levels, left_fischer_cover, Cover, QWord};
use crate::graph::{scc_of_adjacency, LabelledGraph};
use crate::lang::{GeneratingList, Side, Symbol, Word};
use crate::{Error, Result};

/// An eventually periodic strongly left-bordering ray, prefix then cycle.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Lasso {
    pub prefix: Word,
    pub cycle: Word,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct GeneratorInfo {
    pub word: Word,
    pub minimal: bool,
}

#[derive(Clone, Debug)]
pub struct BorderReport {
    pub border_vertices: BTreeSet<usize>,
    pub universal_vertex: Option<usize>,
    pub universal_witness: Option<Lasso>,
    /// The m-block shadow of P_0(L): length-m suffixes of concatenations.
    pub p0_fingerprint: Vec<Word>,
    pub generators: BTreeMap<usize, Vec<GeneratorInfo>>,
    /// Generator words were enumerated completely up to this length.
    pub search_bound: usize,
}

/// NFA view of the quotient loop graph, transitions indexed by class id.
struct LoopNfa {
    n: usize,
    by_class: Vec<Vec<(usize, usize)>>,
}

impl LoopNfa {
    fn new(cover: &Cover) -> LoopNfa {
        let g = &cover.sys.qloop;
        let mut by_class = vec![Vec::new(); cover.sys.class_count()];
        for (s, d, l) in g.edges() {
            let ci = cover
                .sys
                .qalpha
                .binary_search(l)
                .expect("loop label is a class representative");
            by_class[ci].push((*s, *d));
        }
        LoopNfa {
            n: g.vertex_count(),
            by_class,
        }
    }

    fn step(&self, cur: &Bits, class: usize) -> Bits {
        let mut out = Bits::empty(self.n);
        for &(s, d) in &self.by_class[class] {
            if cur.get(s) {
                out.set(d);
            }
        }
        out
    }
}

/// Length-m labels of paths leaving (or entering, when `into` is set) the
/// central vertex of the quotient loop graph.
fn central_path_labels(cover: &Cover, m: usize, into: bool) -> Vec<QWord> {
    let nfa = LoopNfa::new(&cover_rev_fix(cover, into));
    let mut level: HashMap<QWord, Bits> = HashMap::new();
    level.insert(QWord::new(), Bits::singleton(nfa.n, 0));
    for _ in 0..m {
        let mut next: HashMap<QWord, Bits> = HashMap::new();
        for (w, cur) in &level {
            for ci in 0..nfa.by_class.len() {
                let stepped = nfa.step(cur, ci);
                if !stepped.is_empty() {
                    let mut w2 = w.clone();
                    w2.push(ci as u16);
                    next.entry(w2)
                        .and_modify(|b| b.union_with(&stepped))
                        .or_insert(stepped);
                }
            }
        }
        level = next;
    }
    let mut words: Vec<QWord> = if into {
        level.into_keys().map(|w| w.iter().rev().cloned().collect()).collect()
    } else {
        level.into_keys().collect()
    };
    words.sort();
    words
}

/// For suffix enumeration we walk the reversed loop graph; the vertex
/// numbering (central = 0) survives reversal.
fn cover_rev_fix(cover: &Cover, reverse: bool) -> Cover {
    if !reverse {
        return cover.clone();
    }
    let mut c = cover.clone();
    c.sys.qloop = cover.sys.qloop.reversed();
    c
}

struct ConfigGraph {
    configs: Vec<(Bits, Bits)>,
    edges: Vec<Vec<(usize, u16)>>,
    parent: Vec<Option<(usize, u16)>>,
}

fn explore_configs(nfa: &LoopNfa, k: usize) -> ConfigGraph {
    let mut central = Bits::empty(nfa.n);
    central.set(0);
    let mut others = Bits::empty(nfa.n);
    for v in 1..nfa.n {
        others.set(v);
    }
    let init = (central, others);
    let mut ids: HashMap<(Bits, Bits), usize> = HashMap::new();
    ids.insert(init.clone(), 0);
    let mut configs = vec![init];
    let mut edges: Vec<Vec<(usize, u16)>> = Vec::new();
    let mut parent: Vec<Option<(usize, u16)>> = vec![None];
    let mut queue = VecDeque::from([0usize]);
    while let Some(q) = queue.pop_front() {
        let mut out = Vec::new();
        for ci in 0..k {
            let sc = nfa.step(&configs[q].0, ci);
            let so = nfa.step(&configs[q].1, ci);
            if sc.is_empty() && so.is_empty() {
                continue;
            }
            let key = (sc, so);
            let id = *ids.entry(key.clone()).or_insert_with(|| {
                configs.push(key);
                parent.push(Some((q, ci as u16)));
                queue.push_back(configs.len() - 1);
                configs.len() - 1
            });
            out.push((id, ci as u16));
        }
        while edges.len() <= q {
            edges.push(Vec::new());
        }
        edges[q] = out;
    }
    ConfigGraph {
        configs,
        edges,
        parent,
    }
}

/// Exact decision of strongly-left-bordering-ray existence, with witness.
fn lasso_search(cover: &Cover) -> Option<Lasso> {
    let nfa = LoopNfa::new(cover);
    let k = cover.sys.class_count();
    let cg = explore_configs(&nfa, k);
    let n = cg.configs.len();
    let live = |i: usize| !cg.configs[i].0.is_empty();
    // Cycles within the live region.
    let adj: Vec<Vec<usize>> = (0..n)
        .map(|i| {
            if !live(i) {
                return Vec::new();
            }
            cg.edges[i]
                .iter()
                .filter(|(t, _)| live(*t))
                .map(|(t, _)| *t)
                .collect()
        })
        .collect();
    let comps = scc_of_adjacency(&adj);
    let mut cyclic = vec![false; n];
    for comp in &comps {
        let nontrivial = comp.len() > 1
            || (comp.len() == 1 && adj[comp[0]].contains(&comp[0]));
        if nontrivial {
            for &v in comp {
                cyclic[v] = live(v) && cyclic_marker(&comp[..], v);
            }
        }
    }
    // Back-propagate "can reach a cycle" through the live region.
    let mut radj: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (i, outs) in adj.iter().enumerate() {
        for &t in outs {
            radj[t].push(i);
        }
    }
    let mut reaches_cycle = cyclic.clone();
    let mut queue: VecDeque<usize> = (0..n).filter(|&i| reaches_cycle[i]).collect();
    while let Some(v) = queue.pop_front() {
        for &u in &radj[v] {
            if !reaches_cycle[u] {
                reaches_cycle[u] = true;
                queue.push_back(u);
            }
        }
    }
    // First reachable target in BFS id order.
    let target = (0..n).find(|&i| {
        cg.configs[i].1.is_empty() && live(i) && reaches_cycle[i]
    })?;
    // Prefix: initial -> target.
    let mut prefix_syms: Vec<u16> = Vec::new();
    let mut cur = target;
    while let Some((p, s)) = cg.parent[cur] {
        prefix_syms.push(s);
        cur = p;
    }
    prefix_syms.reverse();
    // Walk target -> some cyclic config within the live region.
    let (path_to_cycle, cycle_entry) = bfs_path(&cg, &adj, target, |i| cyclic[i])?;
    // Cycle at cycle_entry within the live region.
    let cycle_syms = cycle_at(&cg, &adj, cycle_entry)?;
    prefix_syms.extend(path_to_cycle);
    Some(Lasso {
        prefix: cover.sys.word_of(&prefix_syms),
        cycle: cover.sys.word_of(&cycle_syms),
    })
}

fn cyclic_marker(_comp: &[usize], _v: usize) -> bool {
    true
}

fn bfs_path(
    cg: &ConfigGraph,
    adj: &[Vec<usize>],
    from: usize,
    goal: impl Fn(usize) -> bool,
) -> Option<(Vec<u16>, usize)> {
    let n = adj.len();
    let mut prev: Vec<Option<(usize, u16)>> = vec![None; n];
    let mut seen = vec![false; n];
    seen[from] = true;
    let mut queue = VecDeque::from([from]);
    while let Some(v) = queue.pop_front() {
        if goal(v) {
            let mut syms = Vec::new();
            let mut cur = v;
            while cur != from {
                let (p, s) = prev[cur].expect("path recorded");
                syms.push(s);
                cur = p;
            }
            syms.reverse();
            return Some((syms, v));
        }
        for &(t, s) in &cg.edges[v] {
            if !adj[v].contains(&t) {
                continue; // dead side
            }
            if !seen[t] {
                seen[t] = true;
                prev[t] = Some((v, s));
                queue.push_back(t);
            }
        }
    }
    None
}

fn cycle_at(cg: &ConfigGraph, adj: &[Vec<usize>], v: usize) -> Option<Vec<u16>> {
    // Shortest live path from a live successor of v back to v.
    for &(t, s) in &cg.edges[v] {
        if !adj[v].contains(&t) {
            continue;
        }
        if t == v {
            return Some(vec![s]);
        }
        if let Some((mut syms, _)) = bfs_path(cg, adj, t, |i| i == v) {
            let mut out = vec![s];
            out.append(&mut syms);
            return Some(out);
        }
    }
    None
}

/// Pumps `prefix . cycle^inf` out to its first `m` letters.
fn ray_prefix_block(lasso: &Lasso, m: usize, cover: &Cover) -> QWord {
    let mut q: QWord = cover
        .sys
        .qword(&lasso.prefix)
        .expect("lasso labels are representatives");
    let cyc = cover.sys.qword(&lasso.cycle).expect("cycle labels");
    while q.len() < m {
        q.extend_from_slice(&cyc);
    }
    q.truncate(m);
    q
}

/// Enumerates distinct words of `L^*` by breadth-first concatenation, up
/// to the length bound and a global budget; returns the words and the
/// length through which the enumeration is complete.
fn lstar_words(cover: &Cover, bound: usize, budget: usize) -> (BTreeSet<QWord>, usize) {
    let gens = cover.sys.qgenerators();
    let mut seen: BTreeSet<QWord> = BTreeSet::new();
    let mut frontier: Vec<QWord> = vec![QWord::new()];
    let mut complete_len = bound;
    'grow: loop {
        let mut next = Vec::new();
        for w in &frontier {
            for g in &gens {
                if w.len() + g.len() > bound {
                    continue;
                }
                let mut w2 = w.clone();
                w2.extend_from_slice(g);
                if seen.len() >= budget {
                    // Everything strictly shorter than the smallest word we
                    // may now be missing stays complete.
                    complete_len = w2.len().saturating_sub(1);
                    break 'grow;
                }
                if seen.insert(w2.clone()) {
                    next.push(w2);
                }
            }
        }
        if next.is_empty() {
            break;
        }
        frontier = next;
    }
    (seen, complete_len)
}

/// Intrinsic synchronisation for words shorter than the memory: checked
/// against all context pairs of length at most m.
fn is_intrinsically_synchronising(cover: &Cover, w: &QWord, contexts: &[QWord]) -> bool {
    let dfa = &cover.sys.dfa;
    let allows = |parts: &[&QWord]| -> bool {
        let joined: Vec<usize> = parts
            .iter()
            .flat_map(|p| p.iter().map(|&c| c as usize))
            .collect();
        dfa.allows(&joined)
    };
    let left: Vec<&QWord> = contexts.iter().filter(|u| allows(&[u, w])).collect();
    let right: Vec<&QWord> = contexts.iter().filter(|v| allows(&[w, v])).collect();
    left.iter()
        .all(|u| right.iter().all(|v| allows(&[u, w, v])))
}

/// Border vertices, the universal point with its witness ray, the m-block
/// shadow of P_0(L), and the generator table.
pub fn border_report(cover: &Cover, generator_bound: Option<usize>) -> Result<BorderReport> {
    let m = cover.memory;
    let prefixes = central_path_labels(cover, m, false);
    let border_vertices: BTreeSet<usize> = prefixes
        .iter()
        .map(|q| {
            cover
                .vertex_of_qblock(q)
                .expect("prefixes of concatenations are allowed blocks")
        })
        .collect();
    let p0_blocks = central_path_labels(cover, m, true);
    let p0_fingerprint: Vec<Word> = p0_blocks.iter().map(|q| cover.sys.word_of(q)).collect();

    // Universal point: fast path through strongly left-bordering words of
    // length m, then the exact lasso search.
    let mut universal_witness = None;
    if m >= 1 {
        for q in &prefixes {
            let w = cover.sys.word_of(q);
            if crate::lang::bordering_status(&cover.sys.qlist, &w, Side::Left)
                == Ok(crate::lang::BorderingStatus::StronglyBordering)
            {
                universal_witness = Some(extend_to_lasso(cover, q));
                break;
            }
        }
    }
    if universal_witness.is_none() {
        universal_witness = lasso_search(cover);
    }
    let universal_vertex = universal_witness
        .as_ref()
        .map(|l| {
            cover
                .vertex_of_qblock(&ray_prefix_block(l, m, cover))
                .expect("witness ray is allowed")
        });
    debug_assert_eq!(universal_witness.is_some(), lasso_search(cover).is_some());

    // Generators: words of L^* grouped by the class of prefix_m(w^inf).
    let bound = generator_bound.unwrap_or(3 * m + cover.sys.qlist.total_len());
    let (words, complete_len) = lstar_words(cover, bound, 50_000);
    let contexts: Vec<QWord> = {
        let levels = i_levels(&cover.sys.dfa, m);
        let mut all: Vec<QWord> = levels.iter().flat_map(|l| l.keys().cloned()).collect();
        all.sort();
        all
    };
    let mut generators: BTreeMap<usize, Vec<GeneratorInfo>> = BTreeMap::new();
    let mut vertex_of: HashMap<&QWord, usize> = HashMap::new();
    let mut is_gen: HashMap<&QWord, bool> = HashMap::new();
    for w in &words {
        if w.is_empty() {
            continue;
        }
        let ok = w.len() >= m || is_intrinsically_synchronising(cover, w, &contexts);
        is_gen.insert(w, ok);
        if !ok {
            continue;
        }
        let mut block = w.clone();
        while block.len() < m {
            block.extend_from_slice(w);
        }
        block.truncate(m);
        let v = cover
            .vertex_of_qblock(&block)
            .expect("powers of list words are allowed");
        vertex_of.insert(w, v);
    }
    for w in &words {
        if w.is_empty() || !is_gen[w] {
            continue;
        }
        let v = vertex_of[w];
        let minimal = !(1..w.len()).any(|cut| {
            let p: QWord = w[..cut].to_vec();
            match (is_gen.get(&p), vertex_of.get(&p)) {
                (Some(true), Some(&pv)) => pv == v && words.contains(&p),
                _ => false,
            }
        });
        generators.entry(v).or_default().push(GeneratorInfo {
            word: cover.sys.word_of(w),
            minimal,
        });
    }
    for list in generators.values_mut() {
        list.sort_by_key(|g| (g.word.len(), g.word.clone()));
    }
    Ok(BorderReport {
        border_vertices,
        universal_vertex,
        universal_witness,
        p0_fingerprint,
        generators,
        search_bound: complete_len,
    })
}

/// A strongly left-bordering word extends to a strongly left-bordering
/// ray along any continuation; complete the current loop and repeat the
/// least generator.
fn extend_to_lasso(cover: &Cover, w: &QWord) -> Lasso {
    let cycle = cover.sys.qgenerators()[0].clone();
    Lasso {
        prefix: cover.sys.word_of(w),
        cycle: cover.sys.word_of(&cycle),
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Modularity {
    Yes,
    /// A counterexample path label: either a border-to-universal path whose
    /// label is not a concatenation of generators, or a non-border-to
    /// universal path whose label is one.
    No(Word),
}

/// Quotient-label adjacency of the cover graph.
fn cover_qedges(cover: &Cover) -> Vec<Vec<(usize, usize)>> {
    let mut by_class = vec![Vec::new(); cover.sys.class_count()];
    for (s, d, l) in cover.graph.edges() {
        let ci = cover.sys.class_of(l).expect("cover label in alphabet") as usize;
        by_class[ci].push((*s, *d));
    }
    for v in &mut by_class {
        v.sort_unstable();
        v.dedup();
    }
    by_class
}

/// Deterministic acceptor of L^*: subset construction on the quotient
/// loop graph from the central vertex, accepting when the subset contains
/// the central vertex again.
struct LStarDfa {
    delta: Vec<Vec<Option<usize>>>,
    accepting: Vec<bool>,
}

fn lstar_dfa(cover: &Cover) -> LStarDfa {
    let nfa = LoopNfa::new(cover);
    let k = cover.sys.class_count();
    let init = Bits::singleton(nfa.n, 0);
    let mut ids: HashMap<Bits, usize> = HashMap::new();
    ids.insert(init.clone(), 0);
    let mut states = vec![init];
    let mut delta: Vec<Vec<Option<usize>>> = Vec::new();
    let mut queue = VecDeque::from([0usize]);
    while let Some(q) = queue.pop_front() {
        let mut row = vec![None; k];
        for (ci, slot) in row.iter_mut().enumerate() {
            let stepped = nfa.step(&states[q], ci);
            if stepped.is_empty() {
                continue; // missing transition = reject sink
            }
            let id = *ids.entry(stepped.clone()).or_insert_with(|| {
                states.push(stepped.clone());
                queue.push_back(states.len() - 1);
                states.len() - 1
            });
            *slot = Some(id);
        }
        while delta.len() <= q {
            delta.push(Vec::new());
        }
        delta[q] = row;
    }
    let accepting = states.iter().map(|s| s.get(0)).collect();
    LStarDfa { delta, accepting }
}

/// Decides left- or right-modularity by two product-automaton emptiness
/// checks: labels of paths from border points into the universal point
/// must all lie in L^*, labels from non-border points must all avoid it.
pub fn is_modular(list: &GeneratingList, side: Side) -> Result<Modularity> {
    if side == Side::Right {
        return is_modular(&list.reversed(), Side::Left);
    }
    let cover = left_fischer_cover(list)?;
    let report = border_report(&cover, Some(0))?;
    let universal = report
        .universal_vertex
        .ok_or(Error::UniversalPointMissing)?;
    let dfa = lstar_dfa(&cover);
    let qedges = cover_qedges(&cover);
    let k = cover.sys.class_count();
    let nv = cover.graph.vertex_count();

    let run = |starts: &BTreeSet<usize>, violating_accept: bool| -> Option<Word> {
        // Product BFS over (cover vertex, L* DFA state).
        let id = |v: usize, q: usize| v * (dfa.delta.len() + 1) + q;
        let mut prev: HashMap<usize, (usize, u16)> = HashMap::new();
        let mut seen: BTreeSet<usize> = BTreeSet::new();
        let mut queue: VecDeque<(usize, usize)> = VecDeque::new();
        for &s in starts {
            seen.insert(id(s, 0));
            queue.push_back((s, 0));
        }
        let accepted = |q: Option<usize>| q.map(|s| dfa.accepting[s]).unwrap_or(false);
        let check = |v: usize, q: Option<usize>| v == universal && accepted(q) == violating_accept;
        // The empty path: only relevant when a start is already universal.
        for &s in starts {
            if check(s, Some(0)) {
                return Some(Word::empty());
            }
        }
        while let Some((v, q)) = queue.pop_front() {
            for ci in 0..k {
                let q2 = dfa.delta[q][ci];
                for &(s, d) in &qedges[ci] {
                    if s != v {
                        continue;
                    }
                    if check(d, q2) {
                        // Reconstruct and append the final step.
                        let mut syms = vec![ci as u16];
                        let mut cur = id(v, q);
                        while let Some(&(p, sym)) = prev.get(&cur) {
                            syms.push(sym);
                            cur = p;
                        }
                        syms.reverse();
                        return Some(cover.sys.word_of(&syms));
                    }
                    if let Some(q2) = q2 {
                        if seen.insert(id(d, q2)) {
                            prev.insert(id(d, q2), (id(v, q), ci as u16));
                            queue.push_back((d, q2));
                        }
                    }
                    // A dead DFA side can never later violate either check:
                    // border runs need the label in L*, non-border runs need
                    // acceptance too.
                }
            }
        }
        None
    };

    let border_starts = report.border_vertices.clone();
    let non_border: BTreeSet<usize> =
        (0..nv).filter(|v| !border_starts.contains(v)).collect();
    if let Some(w) = run(&border_starts, false) {
        return Ok(Modularity::No(w));
    }
    if let Some(w) = run(&non_border, true) {
        return Ok(Modularity::No(w));
    }
    Ok(Modularity::Yes)
}

/// A left-resolving presentation together with its universal border point
/// and border set; what the surgeries consume and produce.
#[derive(Clone, Debug)]
pub struct ModularPresentation {
    pub graph: LabelledGraph,
    pub universal: usize,
    pub border: BTreeSet<usize>,
}

impl ModularPresentation {
    pub fn from_cover(cover: &Cover, report: &BorderReport) -> Result<Self> {
        let universal = report
            .universal_vertex
            .ok_or(Error::UniversalPointMissing)?;
        Ok(ModularPresentation {
            graph: cover.graph.clone(),
            universal,
            border: report.border_vertices.clone(),
        })
    }
}

/// The modular sum surgery: disjoint union with the universal border
/// points identified, plus, for every edge into one universal point and
/// every non-universal border point on the other side, a parallel edge
/// with the same source and label.
pub fn sum_surgery_fischer(
    a: &ModularPresentation,
    b: &ModularPresentation,
) -> Result<ModularPresentation> {
    let alpha_a = a.graph.alphabet();
    let alpha_b = b.graph.alphabet();
    if let Some(shared) = alpha_a.intersection(&alpha_b).next() {
        return Err(Error::AlphabetsOverlap(shared.token().to_string()));
    }
    let mut descriptors = vec!["P+".to_string()];
    let map_side = |side: usize,
                    g: &LabelledGraph,
                    universal: usize,
                    descriptors: &mut Vec<String>|
     -> Vec<usize> {
        (0..g.vertex_count())
            .map(|v| {
                if v == universal {
                    0
                } else {
                    descriptors.push(format!("{}:{}", side, g.descriptor(v)));
                    descriptors.len() - 1
                }
            })
            .collect()
    };
    let map_a = map_side(1, &a.graph, a.universal, &mut descriptors);
    let map_b = map_side(2, &b.graph, b.universal, &mut descriptors);

    let mut edges: Vec<(usize, usize, Symbol)> = Vec::new();
    for (s, d, l) in a.graph.edges() {
        edges.push((map_a[*s], map_a[*d], l.clone()));
    }
    for (s, d, l) in b.graph.edges() {
        edges.push((map_b[*s], map_b[*d], l.clone()));
    }
    for (s, d, l) in a.graph.edges() {
        if *d == a.universal {
            for &p in b.border.iter().filter(|&&p| p != b.universal) {
                edges.push((map_a[*s], map_b[p], l.clone()));
            }
        }
    }
    for (s, d, l) in b.graph.edges() {
        if *d == b.universal {
            for &p in a.border.iter().filter(|&&p| p != a.universal) {
                edges.push((map_b[*s], map_a[p], l.clone()));
            }
        }
    }
    let graph = LabelledGraph::new(descriptors, edges)?;
    let border: BTreeSet<usize> = a
        .border
        .iter()
        .map(|&p| map_a[p])
        .chain(b.border.iter().map(|&p| map_b[p]))
        .collect();
    Ok(ModularPresentation {
        graph,
        universal: 0,
        border,
    })
}

/// The diagonal-plus-modular surgery: the diagonal cover (chains of
/// length n_i - 1 per letter) glued to a left-modular cover by copying
/// every edge into the modular universal point onto each chain head, and
/// connecting each chain head to every border point by its own letter.
pub fn diag_sum_cover(
    ns: &[usize],
    diag_symbols: &[Symbol],
    inner: &ModularPresentation,
) -> Result<LabelledGraph> {
    let k = ns.len();
    if k < 2 || diag_symbols.len() != k || ns.iter().any(|&n| n < 2) || !ns.iter().any(|&n| n > 2)
    {
        return Err(Error::InvalidParams(
            "diagonal family needs k >= 2 letters, all n_i >= 2, some n_i > 2".into(),
        ));
    }
    let inner_alpha = inner.graph.alphabet();
    if let Some(shared) = diag_symbols.iter().find(|s| inner_alpha.contains(s)) {
        return Err(Error::AlphabetsOverlap(shared.token().to_string()));
    }

    let mut descriptors: Vec<String> = (0..inner.graph.vertex_count())
        .map(|v| format!("m:{}", inner.graph.descriptor(v)))
        .collect();
    // Chain vertex (i, l) is the class of a_i^l a_j...; head is l = 1.
    let mut chain: Vec<Vec<usize>> = Vec::new();
    for (i, &n) in ns.iter().enumerate() {
        let mut row = Vec::new();
        for l in 1..n {
            descriptors.push(format!("d:{}^{}", diag_symbols[i].token(), l));
            row.push(descriptors.len() - 1);
        }
        chain.push(row);
    }
    let mut edges: Vec<(usize, usize, Symbol)> = Vec::new();
    for (s, d, l) in inner.graph.edges() {
        edges.push((*s, *d, l.clone()));
    }
    for i in 0..k {
        // a_i-labelled chain: (i, l) -> (i, l-1).
        for l in 2..ns[i] {
            edges.push((chain[i][l - 1], chain[i][l - 2], diag_symbols[i].clone()));
        }
        // Head of chain i fans out over every other chain.
        for j in 0..k {
            if i == j {
                continue;
            }
            for l in 1..ns[j] {
                edges.push((chain[i][0], chain[j][l - 1], diag_symbols[i].clone()));
            }
        }
        // Every edge into the modular universal point is copied onto the
        // head; every border point receives the head's letter.
        for (s, d, l) in inner.graph.edges() {
            if *d == inner.universal {
                edges.push((*s, chain[i][0], l.clone()));
            }
        }
        for &p in &inner.border {
            edges.push((chain[i][0], p, diag_symbols[i].clone()));
        }
    }
    LabelledGraph::new(descriptors, edges)
}

/// Checks the structural border-point properties on a finished report;
/// returns human-readable violations (empty means all hold). Bound-limited
/// checks that merely run out of generators are reported as warnings by
/// the caller, not violations.
pub fn verify_border_properties(cover: &Cover, report: &BorderReport) -> Vec<String> {
    let mut bad = Vec::new();
    let m = cover.memory;
    // (1) p0 shadow is contained in every border fingerprint, and equals
    // the universal fingerprint exactly.
    let p0: Vec<QWord> = report
        .p0_fingerprint
        .iter()
        .map(|w| cover.sys.qword(w).expect("report blocks collapse"))
        .collect();
    for &v in &report.border_vertices {
        for q in &p0 {
            if !cover.fingerprint_contains(v, q) {
                bad.push(format!(
                    "p0 block {} missing from border vertex {}",
                    cover.sys.word_of(q),
                    cover.graph.descriptor(v)
                ));
            }
        }
    }
    if let Some(u) = report.universal_vertex {
        let fp: BTreeSet<&Word> = cover.fingerprint(u).iter().collect();
        let p0w: BTreeSet<&Word> = report.p0_fingerprint.iter().collect();
        if fp != p0w {
            bad.push("universal fingerprint differs from the P0 shadow".into());
        }
    }
    // (2) every generator of border P1 labels a path from P1 to each
    // border P2.
    let qedges = cover_qedges(&cover.clone());
    let walk = |from: usize, w: &QWord| -> BTreeSet<usize> {
        let mut cur: BTreeSet<usize> = [from].into();
        for &ci in w {
            let mut next = BTreeSet::new();
            for &(s, d) in &qedges[ci as usize] {
                if cur.contains(&s) {
                    next.insert(d);
                }
            }
            cur = next;
        }
        cur
    };
    for (&p1, gens) in &report.generators {
        if !report.border_vertices.contains(&p1) {
            continue;
        }
        for g in gens.iter().take(4) {
            let q = cover.sys.qword(&g.word).expect("generator collapses");
            for &p2 in &report.border_vertices {
                if !walk(p1, &q).contains(&p2) {
                    bad.push(format!(
                        "no path labelled {} from {} to border {}",
                        g.word,
                        cover.graph.descriptor(p1),
                        cover.graph.descriptor(p2)
                    ));
                }
            }
        }
    }
    // (3) backward determinism: for border P1 and w in L^*, exactly one
    // border P2 reaches P1 along w (left-resolving makes the path unique,
    // so the content is existence plus border membership).
    let back = |to: usize, w: &QWord| -> Option<usize> {
        let mut cur = to;
        for &ci in w.iter().rev() {
            let sources: Vec<usize> = qedges[ci as usize]
                .iter()
                .filter(|(_, d)| *d == cur)
                .map(|(s, _)| *s)
                .collect();
            debug_assert!(sources.len() <= 1, "left-resolving violated");
            cur = *sources.first()?;
        }
        Some(cur)
    };
    let sample: Vec<QWord> = report
        .generators
        .values()
        .flatten()
        .take(8)
        .map(|g| cover.sys.qword(&g.word).expect("collapses"))
        .collect();
    for &p1 in &report.border_vertices {
        for w in &sample {
            match back(p1, w) {
                Some(p2) if report.border_vertices.contains(&p2) => {}
                other => bad.push(format!(
                    "backward run of a generator from {} lands at {:?}",
                    cover.graph.descriptor(p1),
                    other
                )),
            }
        }
    }
    // (5) with a strongly right-bordering word, border vertices are
    // exactly the classes of bordering-ray prefixes.
    let has_srb = central_path_labels(cover, m, true).iter().any(|q| {
        let w = cover.sys.word_of(q);
        crate::lang::bordering_status(&cover.sys.qlist, &w, Side::Right)
            == Ok(crate::lang::BorderingStatus::StronglyBordering)
    });
    if has_srb && m >= 1 {
        let prefix_set: BTreeSet<QWord> =
            central_path_labels(cover, m, false).into_iter().collect();
        let levels = i_levels(&cover.sys.dfa, m);
        for u in levels[m].keys() {
            let v = cover.vertex_of_qblock(u).expect("allowed block");
            if report.border_vertices.contains(&v) && !prefix_set.iter().any(|p| {
                cover.vertex_of_qblock(p) == Some(v)
            }) {
                bad.push(format!("border class without a bordering prefix: {v}"));
            }
        }
    }
    bad
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cover::left_fischer_cover;
    use crate::graph::labelled_iso;

    fn example1() -> (Cover, BorderReport) {
        let cover = left_fischer_cover(&GeneratingList::of(&["aa", "aaa", "b"])).unwrap();
        let report = border_report(&cover, None).unwrap();
        (cover, report)
    }

    #[test]
    fn example1_border_structure() {
        let (cover, report) = example1();
        // Canonical order: aa = P1, ab = P2, ba = P0.
        let p0 = cover.vertex_of_block(&Word::letters("ba")).unwrap();
        let p1 = cover.vertex_of_block(&Word::letters("aa")).unwrap();
        let p2 = cover.vertex_of_block(&Word::letters("ab")).unwrap();
        assert_eq!(report.border_vertices, [p0, p1].into());
        assert!(!report.border_vertices.contains(&p2));
        assert_eq!(report.universal_vertex, Some(p0));
        assert!(verify_border_properties(&cover, &report).is_empty());
    }

    #[test]
    fn example1_generators() {
        let (cover, report) = example1();
        let p0 = cover.vertex_of_block(&Word::letters("ba")).unwrap();
        let p1 = cover.vertex_of_block(&Word::letters("aa")).unwrap();
        let g0 = &report.generators[&p0];
        assert_eq!(g0[0].word, Word::letters("b"));
        assert!(g0[0].minimal);
        let g1 = &report.generators[&p1];
        assert_eq!(g1[0].word, Word::letters("aa"));
        assert!(g1[0].minimal);
        let aab = g1.iter().find(|g| g.word == Word::letters("aab")).unwrap();
        assert!(!aab.minimal);
        // bb generates P0 but is not minimal (prefix b already does).
        let bb = g0.iter().find(|g| g.word == Word::letters("bb")).unwrap();
        assert!(!bb.minimal);
    }

    #[test]
    fn example1_modular_both_sides() {
        let l = GeneratingList::of(&["aa", "aaa", "b"]);
        assert_eq!(is_modular(&l, Side::Left).unwrap(), Modularity::Yes);
        assert_eq!(is_modular(&l, Side::Right).unwrap(), Modularity::Yes);
    }

    #[test]
    fn surgery_example1_plus_letter() {
        let l1 = GeneratingList::of(&["aa", "aaa", "b"]);
        let l2 = GeneratingList::of(&["e"]);
        let c1 = left_fischer_cover(&l1).unwrap();
        let r1 = border_report(&c1, None).unwrap();
        let c2 = left_fischer_cover(&l2).unwrap();
        let r2 = border_report(&c2, None).unwrap();
        let m1 = ModularPresentation::from_cover(&c1, &r1).unwrap();
        let m2 = ModularPresentation::from_cover(&c2, &r2).unwrap();
        let sum = sum_surgery_fischer(&m1, &m2).unwrap();
        assert_eq!(sum.graph.vertex_count(), 3);
        assert_eq!(sum.graph.edge_count(), 7);

        let direct = left_fischer_cover(&GeneratingList::of(&["aa", "aaa", "b", "e"])).unwrap();
        assert!(labelled_iso(&sum.graph, &direct.graph).is_some());
    }

    #[test]
    fn surgery_rejects_overlap() {
        let l = GeneratingList::of(&["aa", "aaa", "b"]);
        let c = left_fischer_cover(&l).unwrap();
        let r = border_report(&c, None).unwrap();
        let m = ModularPresentation::from_cover(&c, &r).unwrap();
        assert!(matches!(
            sum_surgery_fischer(&m, &m),
            Err(Error::AlphabetsOverlap(_))
        ));
    }
}
