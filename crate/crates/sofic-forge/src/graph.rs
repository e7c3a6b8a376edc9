//! Labelled directed graphs and the automata transforms the covers are
//! built from: loop graphs, determinization with follower separation,
//! labelled isomorphism, block-label enumeration, and DOT export.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};

use crate::bits::Bits;
use crate::lang::{GeneratingList, Symbol, Word};
use crate::{Error, Result};

/// A finite directed graph with edge labels. Vertices carry a descriptor
/// text; the canonical form sorts vertices by descriptor and edges
/// lexicographically, which makes every exported artifact byte-exact.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct LabelledGraph {
    descriptors: Vec<String>,
    edges: BTreeSet<(usize, usize, Symbol)>,
}

impl LabelledGraph {
    pub fn new(
        descriptors: Vec<String>,
        edges: impl IntoIterator<Item = (usize, usize, Symbol)>,
    ) -> Result<Self> {
        let n = descriptors.len();
        let uniq: BTreeSet<&String> = descriptors.iter().collect();
        assert_eq!(uniq.len(), n, "vertex descriptors must be unique");
        let edges: BTreeSet<_> = edges.into_iter().collect();
        for &(s, d, _) in &edges {
            if s >= n || d >= n {
                return Err(Error::UnknownVertexId(s.max(d)));
            }
        }
        Ok(LabelledGraph { descriptors, edges })
    }

    pub fn vertex_count(&self) -> usize {
        self.descriptors.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn descriptor(&self, v: usize) -> &str {
        &self.descriptors[v]
    }

    pub fn descriptors(&self) -> &[String] {
        &self.descriptors
    }

    pub fn edges(&self) -> impl Iterator<Item = &(usize, usize, Symbol)> {
        self.edges.iter()
    }

    pub fn alphabet(&self) -> BTreeSet<Symbol> {
        self.edges.iter().map(|(_, _, l)| l.clone()).collect()
    }

    pub fn reversed(&self) -> LabelledGraph {
        LabelledGraph {
            descriptors: self.descriptors.clone(),
            edges: self
                .edges
                .iter()
                .map(|(s, d, l)| (*d, *s, l.clone()))
                .collect(),
        }
    }

    /// Vertices sorted by descriptor, edges re-indexed accordingly.
    pub fn canonical(&self) -> LabelledGraph {
        let mut order: Vec<usize> = (0..self.vertex_count()).collect();
        order.sort_by(|&a, &b| self.descriptors[a].cmp(&self.descriptors[b]));
        let mut position = vec![0; order.len()];
        for (new, &old) in order.iter().enumerate() {
            position[old] = new;
        }
        LabelledGraph {
            descriptors: order.iter().map(|&v| self.descriptors[v].clone()).collect(),
            edges: self
                .edges
                .iter()
                .map(|(s, d, l)| (position[*s], position[*d], l.clone()))
                .collect(),
        }
    }

    /// No vertex receives two equally labelled edges.
    pub fn is_left_resolving(&self) -> bool {
        let mut seen = BTreeSet::new();
        self.edges.iter().all(|(_, d, l)| seen.insert((*d, l.clone())))
    }

    /// No vertex emits two equally labelled edges.
    pub fn is_deterministic(&self) -> bool {
        let mut seen = BTreeSet::new();
        self.edges.iter().all(|(s, _, l)| seen.insert((*s, l.clone())))
    }

    /// Every vertex has in- and out-degree at least one.
    pub fn is_essential(&self) -> bool {
        let mut indeg = vec![0usize; self.vertex_count()];
        let mut outdeg = vec![0usize; self.vertex_count()];
        for &(s, d, _) in &self.edges {
            outdeg[s] += 1;
            indeg[d] += 1;
        }
        (0..self.vertex_count()).all(|v| indeg[v] > 0 && outdeg[v] > 0)
    }

    pub fn strongly_connected_components(&self) -> Vec<Vec<usize>> {
        let n = self.vertex_count();
        let mut adj = vec![Vec::new(); n];
        for &(s, d, _) in &self.edges {
            adj[s].push(d);
        }
        for a in &mut adj {
            a.sort_unstable();
            a.dedup();
        }
        scc_of_adjacency(&adj)
    }

    pub fn is_irreducible(&self) -> bool {
        self.vertex_count() > 0 && self.strongly_connected_components().len() == 1
    }

    /// All labels of length-`n` paths. Exponential in `n`; oracle use only.
    pub fn block_labels(&self, n: usize) -> BTreeSet<Word> {
        let nv = self.vertex_count();
        let by_symbol = self.edges_by_symbol();
        let mut level: HashMap<Word, Bits> = HashMap::new();
        level.insert(Word::empty(), Bits::full(nv));
        for _ in 0..n {
            let mut next: HashMap<Word, Bits> = HashMap::new();
            for (w, ends) in &level {
                for (sym, edges) in &by_symbol {
                    let mut tgt = Bits::empty(nv);
                    let mut any = false;
                    for &(s, d) in edges {
                        if ends.get(s) {
                            tgt.set(d);
                            any = true;
                        }
                    }
                    if any {
                        let mut w2 = w.clone();
                        w2.push(sym.clone());
                        next.entry(w2)
                            .and_modify(|b| b.union_with(&tgt))
                            .or_insert(tgt);
                    }
                }
            }
            level = next;
        }
        level.into_keys().collect()
    }

    fn edges_by_symbol(&self) -> BTreeMap<Symbol, Vec<(usize, usize)>> {
        let mut by: BTreeMap<Symbol, Vec<(usize, usize)>> = BTreeMap::new();
        for (s, d, l) in &self.edges {
            by.entry(l.clone()).or_default().push((*s, *d));
        }
        by
    }
}

/// Tarjan's algorithm, iterative, on a plain adjacency list.
pub(crate) fn scc_of_adjacency(adj: &[Vec<usize>]) -> Vec<Vec<usize>> {
    let n = adj.len();
    let mut index = vec![usize::MAX; n];
    let mut low = vec![0usize; n];
    let mut on_stack = vec![false; n];
    let mut stack = Vec::new();
    let mut next_index = 0;
    let mut comps = Vec::new();
    for root in 0..n {
        if index[root] != usize::MAX {
            continue;
        }
        let mut work = vec![(root, 0usize)];
        while let Some(&mut (v, ref mut ei)) = work.last_mut() {
            if *ei == 0 {
                index[v] = next_index;
                low[v] = next_index;
                next_index += 1;
                stack.push(v);
                on_stack[v] = true;
            }
            if *ei < adj[v].len() {
                let w = adj[v][*ei];
                *ei += 1;
                if index[w] == usize::MAX {
                    work.push((w, 0));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
            } else {
                if low[v] == index[v] {
                    let mut comp = Vec::new();
                    while let Some(w) = stack.pop() {
                        on_stack[w] = false;
                        comp.push(w);
                        if w == v {
                            break;
                        }
                    }
                    comp.sort_unstable();
                    comps.push(comp);
                }
                work.pop();
                if let Some(&mut (parent, _)) = work.last_mut() {
                    low[parent] = low[parent].min(low[v]);
                }
            }
        }
    }
    comps.sort();
    comps
}

/// The standard loop graph presentation: one central vertex and, for each
/// generator of length n, a labelled loop through n-1 fresh interior
/// vertices. The central vertex is vertex 0.
pub fn loop_graph(list: &GeneratingList) -> LabelledGraph {
    let mut descriptors = vec!["@".to_string()];
    let mut edges = Vec::new();
    for w in list.words() {
        let syms = w.symbols();
        let mut prev = 0;
        for (i, sym) in syms.iter().enumerate() {
            let target = if i + 1 == syms.len() {
                0
            } else {
                descriptors.push(format!("{}|{}", w.display(), i + 1));
                descriptors.len() - 1
            };
            edges.push((prev, target, sym.clone()));
            prev = target;
        }
    }
    LabelledGraph::new(descriptors, edges).expect("loop graph is well formed")
}

/// Deterministic automaton view of a graph whose out-edges are
/// label-functional. States and symbol ids index into `delta`.
#[derive(Clone, Debug)]
pub(crate) struct Dfa {
    pub symbols: Vec<Symbol>,
    pub delta: Vec<Vec<Option<usize>>>, // [state][symbol]
    pub descriptors: Vec<String>,
}

impl Dfa {
    pub fn state_count(&self) -> usize {
        self.delta.len()
    }

    pub fn symbol_index(&self, s: &Symbol) -> Option<usize> {
        self.symbols.binary_search(s).ok()
    }

    pub fn from_graph(g: &LabelledGraph) -> Dfa {
        assert!(g.is_deterministic());
        let symbols: Vec<Symbol> = g.alphabet().into_iter().collect();
        let mut delta = vec![vec![None; symbols.len()]; g.vertex_count()];
        for (s, d, l) in g.edges() {
            let si = symbols.binary_search(l).unwrap();
            delta[*s][si] = Some(*d);
        }
        Dfa {
            symbols,
            delta,
            descriptors: g.descriptors().to_vec(),
        }
    }

    pub fn to_graph(&self) -> LabelledGraph {
        let mut edges = Vec::new();
        for (s, row) in self.delta.iter().enumerate() {
            for (si, tgt) in row.iter().enumerate() {
                if let Some(d) = tgt {
                    edges.push((s, *d, self.symbols[si].clone()));
                }
            }
        }
        LabelledGraph::new(self.descriptors.clone(), edges).expect("dfa graph")
    }

    /// States from which `word` is readable, as a backward subset step.
    pub fn pre(&self, set: &Bits, sym: usize) -> Bits {
        let mut out = Bits::empty(self.state_count());
        for (s, row) in self.delta.iter().enumerate() {
            if let Some(d) = row[sym] {
                if set.get(d) {
                    out.set(s);
                }
            }
        }
        out
    }

    pub fn post(&self, set: &Bits, sym: usize) -> Bits {
        let mut out = Bits::empty(self.state_count());
        for s in set.iter_ones() {
            if let Some(d) = self.delta[s][sym] {
                out.set(d);
            }
        }
        out
    }

    /// Whether `word` labels some path.
    pub fn allows(&self, word: &[usize]) -> bool {
        let mut cur = Bits::full(self.state_count());
        for &sym in word {
            cur = self.post(&cur, sym);
            if cur.is_empty() {
                return false;
            }
        }
        true
    }

    /// Mask-based subset steps for the interned block tables; callers
    /// guarantee at most 128 states.
    pub fn full_mask(&self) -> u128 {
        assert!(self.state_count() <= 128, "presentation too large for masks");
        if self.state_count() == 128 {
            u128::MAX
        } else {
            (1u128 << self.state_count()) - 1
        }
    }

    pub fn post_mask(&self, mask: u128, sym: usize) -> u128 {
        let mut out = 0u128;
        let mut rest = mask;
        while rest != 0 {
            let s = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            if let Some(d) = self.delta[s][sym] {
                out |= 1u128 << d;
            }
        }
        out
    }

    pub fn pre_mask(&self, mask: u128, sym: usize) -> u128 {
        let mut out = 0u128;
        for (s, row) in self.delta.iter().enumerate() {
            if let Some(d) = row[sym] {
                if mask >> d & 1 == 1 {
                    out |= 1u128 << s;
                }
            }
        }
        out
    }
}

/// Deterministic, essential, follower-separated presentation of the same
/// shift: subset construction from the full vertex set, Moore partition
/// refinement on follower languages, then restriction to the unique
/// terminal strongly connected component. For an irreducible sofic input
/// this is its right Fischer cover.
pub fn right_resolving_presentation(g: &LabelledGraph) -> Result<LabelledGraph> {
    if g.vertex_count() == 0 {
        return Err(Error::EmptyGraph);
    }
    let nv = g.vertex_count();
    let by_symbol = g.edges_by_symbol();
    let symbols: Vec<Symbol> = by_symbol.keys().cloned().collect();
    let step: Vec<Vec<(usize, usize)>> = symbols
        .iter()
        .map(|s| by_symbol[s].clone())
        .collect();

    // Subset construction from the full set.
    let mut states: Vec<Bits> = vec![Bits::full(nv)];
    let mut index: HashMap<Bits, usize> = HashMap::new();
    index.insert(states[0].clone(), 0);
    let mut delta: Vec<Vec<Option<usize>>> = Vec::new();
    let mut queue = VecDeque::from([0usize]);
    while let Some(q) = queue.pop_front() {
        let mut row = vec![None; symbols.len()];
        for (si, edges) in step.iter().enumerate() {
            let mut tgt = Bits::empty(nv);
            let mut any = false;
            for &(s, d) in edges {
                if states[q].get(s) {
                    tgt.set(d);
                    any = true;
                }
            }
            if any {
                let id = *index.entry(tgt.clone()).or_insert_with(|| {
                    states.push(tgt.clone());
                    queue.push_back(states.len() - 1);
                    states.len() - 1
                });
                row[si] = Some(id);
            }
        }
        while delta.len() <= q {
            delta.push(Vec::new());
        }
        delta[q] = row;
    }

    // Moore refinement: merge states with equal follower languages.
    let n = states.len();
    let mut class: Vec<usize> = vec![0; n];
    loop {
        let mut signature: BTreeMap<Vec<Option<usize>>, usize> = BTreeMap::new();
        let mut next = vec![0; n];
        for q in 0..n {
            let mut sig: Vec<Option<usize>> = vec![class[q]].into_iter().map(Some).collect();
            sig.extend(delta[q].iter().map(|t| t.map(|d| class[d])));
            let fresh = signature.len();
            next[q] = *signature.entry(sig).or_insert(fresh);
        }
        if next == class {
            break;
        }
        class = next;
    }
    let class_count = class.iter().max().unwrap() + 1;
    // Deterministic representative per class: least subset state id.
    let mut rep = vec![usize::MAX; class_count];
    for q in 0..n {
        rep[class[q]] = rep[class[q]].min(q);
    }
    let mut qdelta = vec![vec![None; symbols.len()]; class_count];
    for c in 0..class_count {
        for (si, t) in delta[rep[c]].iter().enumerate() {
            qdelta[c][si] = t.map(|d| class[d]);
        }
    }

    // Unique terminal SCC of the merged automaton.
    let mut cedges = Vec::new();
    for (c, row) in qdelta.iter().enumerate() {
        for (si, t) in row.iter().enumerate() {
            if let Some(d) = t {
                cedges.push((c, *d, symbols[si].clone()));
            }
        }
    }
    let cgraph = LabelledGraph::new(
        (0..class_count).map(|c| format!("q{c}")).collect(),
        cedges.clone(),
    )?;
    let comps = cgraph.strongly_connected_components();
    let mut comp_of = vec![0; class_count];
    for (i, comp) in comps.iter().enumerate() {
        for &v in comp {
            comp_of[v] = i;
        }
    }
    let terminal: Vec<usize> = (0..comps.len())
        .filter(|&i| {
            cedges
                .iter()
                .all(|(s, d, _)| comp_of[*s] != i || comp_of[*d] == i)
        })
        .collect();
    if terminal.len() != 1 {
        return Err(Error::NotIrreducible);
    }
    let keep: BTreeSet<usize> = comps[terminal[0]].iter().cloned().collect();
    let mut remap = BTreeMap::new();
    let mut descriptors = Vec::new();
    for &c in &keep {
        remap.insert(c, descriptors.len());
        let content: Vec<&str> = states[rep[c]]
            .iter_ones()
            .map(|v| g.descriptor(v))
            .collect();
        descriptors.push(format!("{{{}}}", content.join(",")));
    }
    let edges: Vec<(usize, usize, Symbol)> = cedges
        .into_iter()
        .filter(|(s, d, _)| keep.contains(s) && keep.contains(d))
        .map(|(s, d, l)| (remap[&s], remap[&d], l))
        .collect();
    Ok(LabelledGraph::new(descriptors, edges)?.canonical())
}

/// A label- and structure-preserving vertex bijection, or `None`.
///
/// Colour refinement narrows the candidates, then a deterministic
/// backtracking search settles the rest; the graphs at desk scale are small.
pub fn labelled_iso(g: &LabelledGraph, h: &LabelledGraph) -> Option<Vec<usize>> {
    if g.vertex_count() != h.vertex_count() || g.edge_count() != h.edge_count() {
        return None;
    }
    let labels_g: BTreeMap<Symbol, usize> = count_labels(g);
    if labels_g != count_labels(h) {
        return None;
    }
    let n = g.vertex_count();
    let cg = refine_colors(g);
    let ch = refine_colors(h);
    let mut by_color_g: BTreeMap<u64, Vec<usize>> = BTreeMap::new();
    let mut by_color_h: BTreeMap<u64, Vec<usize>> = BTreeMap::new();
    for v in 0..n {
        by_color_g.entry(cg[v]).or_default().push(v);
        by_color_h.entry(ch[v]).or_default().push(v);
    }
    if by_color_g.len() != by_color_h.len()
        || by_color_g
            .iter()
            .zip(&by_color_h)
            .any(|((c1, v1), (c2, v2))| c1 != c2 || v1.len() != v2.len())
    {
        return None;
    }

    // Order: smallest colour classes first for early pruning.
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&v| (by_color_g[&cg[v]].len(), cg[v], v));

    let gout = out_map(g);
    let gin = in_map(g);
    let hedges: BTreeSet<(usize, usize, Symbol)> = h.edges().cloned().collect();

    let mut mapping = vec![usize::MAX; n];
    let mut used = vec![false; n];
    fn backtrack(
        pos: usize,
        order: &[usize],
        cg: &[u64],
        ch: &[u64],
        gout: &[Vec<(usize, Symbol)>],
        gin: &[Vec<(usize, Symbol)>],
        hedges: &BTreeSet<(usize, usize, Symbol)>,
        mapping: &mut Vec<usize>,
        used: &mut Vec<bool>,
    ) -> bool {
        if pos == order.len() {
            return true;
        }
        let v = order[pos];
        for w in 0..ch.len() {
            if used[w] || ch[w] != cg[v] {
                continue;
            }
            let ok = gout[v].iter().all(|(d, l)| {
                mapping[*d] == usize::MAX || hedges.contains(&(w, mapping[*d], l.clone()))
            }) && gin[v].iter().all(|(s, l)| {
                mapping[*s] == usize::MAX || hedges.contains(&(mapping[*s], w, l.clone()))
            });
            if !ok {
                continue;
            }
            mapping[v] = w;
            used[w] = true;
            if backtrack(pos + 1, order, cg, ch, gout, gin, hedges, mapping, used) {
                return true;
            }
            mapping[v] = usize::MAX;
            used[w] = false;
        }
        false
    }
    if backtrack(
        0, &order, &cg, &ch, &gout, &gin, &hedges, &mut mapping, &mut used,
    ) {
        // Edge counts match and all edges of g map into h, so this is onto.
        Some(mapping)
    } else {
        None
    }
}

fn count_labels(g: &LabelledGraph) -> BTreeMap<Symbol, usize> {
    let mut m = BTreeMap::new();
    for (_, _, l) in g.edges() {
        *m.entry(l.clone()).or_insert(0) += 1;
    }
    m
}

fn out_map(g: &LabelledGraph) -> Vec<Vec<(usize, Symbol)>> {
    let mut m = vec![Vec::new(); g.vertex_count()];
    for (s, d, l) in g.edges() {
        m[*s].push((*d, l.clone()));
    }
    m
}

fn in_map(g: &LabelledGraph) -> Vec<Vec<(usize, Symbol)>> {
    let mut m = vec![Vec::new(); g.vertex_count()];
    for (s, d, l) in g.edges() {
        m[*d].push((*s, l.clone()));
    }
    m
}

fn refine_colors(g: &LabelledGraph) -> Vec<u64> {
    let n = g.vertex_count();
    let gout = out_map(g);
    let gin = in_map(g);
    let mut colors = vec![0u64; n];
    for _ in 0..n.max(1) {
        let mut sigs: Vec<(u64, Vec<(Symbol, u64)>, Vec<(Symbol, u64)>)> = Vec::with_capacity(n);
        for v in 0..n {
            let mut outs: Vec<(Symbol, u64)> =
                gout[v].iter().map(|(d, l)| (l.clone(), colors[*d])).collect();
            outs.sort();
            let mut ins: Vec<(Symbol, u64)> =
                gin[v].iter().map(|(s, l)| (l.clone(), colors[*s])).collect();
            ins.sort();
            sigs.push((colors[v], outs, ins));
        }
        // Palette ids follow the sorted signature order, so colours are
        // comparable across different graphs.
        let sorted: BTreeSet<&(u64, Vec<(Symbol, u64)>, Vec<(Symbol, u64)>)> = sigs.iter().collect();
        let palette: BTreeMap<_, u64> = sorted
            .into_iter()
            .enumerate()
            .map(|(i, s)| (s, i as u64))
            .collect();
        let next: Vec<u64> = sigs.iter().map(|s| palette[s]).collect();
        if next == colors {
            break;
        }
        colors = next;
    }
    colors
}

fn dot_escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

/// Deterministic DOT export; highlighted vertices are filled grey.
pub fn to_dot(g: &LabelledGraph, highlights: &BTreeSet<usize>) -> Result<String> {
    for &v in highlights {
        if v >= g.vertex_count() {
            return Err(Error::UnknownVertexId(v));
        }
    }
    let mut order: Vec<usize> = (0..g.vertex_count()).collect();
    order.sort_by(|&a, &b| g.descriptor(a).cmp(g.descriptor(b)));
    let mut out = String::from("digraph cover {\n");
    for &v in &order {
        let style = if highlights.contains(&v) {
            " style=filled fillcolor=gray"
        } else {
            ""
        };
        out.push_str(&format!(
            "  \"{}\" [shape=box{}];\n",
            dot_escape(g.descriptor(v)),
            style
        ));
    }
    let mut edges: Vec<(&str, &str, &Symbol)> = g
        .edges()
        .map(|(s, d, l)| (g.descriptor(*s), g.descriptor(*d), l))
        .collect();
    edges.sort();
    for (s, d, l) in edges {
        out.push_str(&format!(
            "  \"{}\" -> \"{}\" [label=\"{}\"];\n",
            dot_escape(s),
            dot_escape(d),
            dot_escape(l.token())
        ));
    }
    out.push_str("}\n");
    Ok(out)
}

/// First word (shortest, then lexicographic) of length at most `n` that is a
/// path label of exactly one of the two graphs, or `None` when the block
/// languages agree up to length `n`.
pub fn language_difference(g1: &LabelledGraph, g2: &LabelledGraph, n: usize) -> Option<Word> {
    let by1 = g1.edges_by_symbol();
    let by2 = g2.edges_by_symbol();
    let symbols: BTreeSet<Symbol> = by1.keys().chain(by2.keys()).cloned().collect();
    // Pair of subset automata; a side is dead when its subset is empty.
    let start = (Bits::full(g1.vertex_count()), Bits::full(g2.vertex_count()));
    let mut seen: BTreeSet<(Bits, Bits)> = BTreeSet::new();
    seen.insert(start.clone());
    let mut frontier = vec![(start, Word::empty())];
    for _ in 0..n {
        let mut next = Vec::new();
        for (state, word) in frontier {
            for sym in &symbols {
                let s1 = step_subset(&by1, g1.vertex_count(), &state.0, sym);
                let s2 = step_subset(&by2, g2.vertex_count(), &state.1, sym);
                let mut w2 = word.clone();
                w2.push(sym.clone());
                match (s1.is_empty(), s2.is_empty()) {
                    (true, true) => continue,
                    (false, false) => {
                        if seen.insert((s1.clone(), s2.clone())) {
                            next.push(((s1, s2), w2));
                        }
                    }
                    _ => return Some(w2),
                }
            }
        }
        frontier = next;
        if frontier.is_empty() {
            break;
        }
    }
    None
}

fn step_subset(
    by: &BTreeMap<Symbol, Vec<(usize, usize)>>,
    n: usize,
    cur: &Bits,
    sym: &Symbol,
) -> Bits {
    let mut out = Bits::empty(n);
    if let Some(edges) = by.get(sym) {
        for &(s, d) in edges {
            if cur.get(s) {
                out.set(d);
            }
        }
    }
    out
}
