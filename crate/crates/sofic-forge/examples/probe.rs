use std::time::Instant;

use sofic_forge::algebra::{adjacency_matrix, signed_bowen_franks};
use sofic_forge::cover::{left_fischer_cover, sft_certificate};
use sofic_forge::family::{build_family, DiagParams, FamilyParams, RParams};

fn main() {
    for r in [2usize, 3, 4] {
        let p = RParams {
            r,
            alpha: 1,
            alpha_tilde: 1,
            beta: 1,
            gammas: vec![1; r - 1],
        };
        let list = build_family(&FamilyParams::R(p)).unwrap();
        let t = Instant::now();
        let cert = sft_certificate(&list).unwrap();
        let m = cert.memory().unwrap();
        println!(
            "R({r}): m={m} cert_in={:?} presentation_states={}",
            t.elapsed(),
            cert.presentation.vertex_count()
        );
        let t = Instant::now();
        let cover = left_fischer_cover(&list).unwrap();
        println!(
            "R({r}): cover {} vertices in {:?}",
            cover.vertex_count(),
            t.elapsed()
        );
        let a = adjacency_matrix(&cover.graph, None).unwrap();
        let t = Instant::now();
        let bf = signed_bowen_franks(&a);
        println!("R({r}): bf {} in {:?}", bf.display(), t.elapsed());
    }
    for n in [vec![4u64, 2], vec![8, 4, 2], vec![9, 3, 3]] {
        let list = build_family(&FamilyParams::Diag(DiagParams { n: n.clone() })).unwrap();
        let t = Instant::now();
        let cover = left_fischer_cover(&list).unwrap();
        let a = adjacency_matrix(&cover.graph, None).unwrap();
        let bf = signed_bowen_franks(&a);
        println!(
            "Diag({n:?}): m={} vertices={} {} in {:?}",
            cover.memory,
            cover.vertex_count(),
            bf.display(),
            t.elapsed()
        );
    }
}
