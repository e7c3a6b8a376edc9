use sofic_forge::cover::block_language;
use sofic_forge::family::{build_family, DiagParams, FamilyParams};
use sofic_forge::graph::{language_difference, loop_graph, right_resolving_presentation};
use sofic_forge::lang::{Symbol, Word};

fn main() {
    let list = build_family(&FamilyParams::Diag(DiagParams { n: vec![8, 4, 2] })).unwrap();
    println!("list size {} alphabet {}", list.words().len(), list.alphabet().len());

    // Determinization preserves the language?
    let lg = loop_graph(&list);
    let det = right_resolving_presentation(&lg).unwrap();
    println!("det states {}", det.vertex_count());
    match language_difference(&lg, &det, 10) {
        None => println!("loop vs det: agree to 10"),
        Some(w) => println!("loop vs det DIFFER: {w}"),
    }

    // Is B(X(L)) equal to the window language of F = {a1^8, a2^4, a3^2}?
    let syms: Vec<Symbol> = list.alphabet().to_vec();
    let forbidden: Vec<Word> = vec![
        Word::new(vec![syms[0].clone(); 8]),
        Word::new(vec![syms[1].clone(); 4]),
        Word::new(vec![syms[2].clone(); 2]),
    ];
    for n in 1..=10usize {
        let lang = block_language(&list, n);
        let mut diff = Vec::new();
        let mut all: Vec<Word> = vec![Word::empty()];
        for _ in 0..n {
            all = all
                .iter()
                .flat_map(|w| {
                    syms.iter().map(move |s| {
                        let mut w2 = w.clone();
                        w2.push(s.clone());
                        w2
                    })
                })
                .collect();
        }
        for w in all {
            let clean = !forbidden.iter().any(|f| {
                w.len() >= f.len() && (0..=w.len() - f.len()).any(|i| &w.slice(i..i + f.len()) == f)
            });
            if clean != lang.contains(&w) {
                diff.push((w, clean));
            }
        }
        println!(
            "n={n}: |B_n|={} mismatches={} first={:?}",
            lang.len(),
            diff.len(),
            diff.first().map(|(w, c)| (w.display(), *c))
        );
        if !diff.is_empty() {
            break;
        }
    }
}
