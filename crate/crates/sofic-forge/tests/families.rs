//! Formula-vs-pipeline cross-validation for the built-in families: the
//! closed forms evaluated exactly must match the from-scratch pipeline
//! (list -> cover -> adjacency -> signed Bowen-Franks) bit for bit.

use num_bigint::BigInt;
use sofic_forge::algebra::{adjacency_matrix, signed_bowen_franks, BowenFranksClass};
use sofic_forge::border::{border_report, is_modular, Modularity};
use sofic_forge::cover::left_fischer_cover;
use sofic_forge::family::{
    build_family, closed_form_invariant, DiagParams, FamilyParams, GroupPrediction, HSumParams,
    PosDetParams, RParams,
};
use sofic_forge::lang::Side;
use sofic_forge::GeneratingList;

fn pipeline_bf(list: &GeneratingList) -> (BowenFranksClass, BigInt) {
    let cover = left_fischer_cover(list).expect("SFT family");
    let a = adjacency_matrix(&cover.graph, None).unwrap();
    let det = a.sub_from_identity().determinant();
    (signed_bowen_franks(&a), det)
}

fn check_against_closed_form(p: &FamilyParams) {
    let list = build_family(p).unwrap();
    let cf = closed_form_invariant(p).unwrap();
    let (bf, det) = pipeline_bf(&list);
    assert_eq!(det, cf.det, "determinant mismatch for {p:?}");
    match &cf.group {
        GroupPrediction::Cyclic => assert!(bf.is_cyclic(), "group not cyclic for {p:?}: {bf:?}"),
        GroupPrediction::InvariantFactors(f) => {
            assert_eq!(&bf.torsion, f, "torsion mismatch for {p:?}");
            assert_eq!(bf.free_rank, 0, "unexpected free rank for {p:?}");
        }
        GroupPrediction::Unspecified => {}
    }
    let sign = match det.sign() {
        num_bigint::Sign::Plus => 1,
        num_bigint::Sign::NoSign => 0,
        num_bigint::Sign::Minus => -1,
    };
    assert_eq!(bf.sign, sign);
}

#[test]
fn r_family_unit_counts_cover_shape() {
    for r in [2usize, 3, 4] {
        let p = RParams {
            r,
            alpha: 1,
            alpha_tilde: 1,
            beta: 1,
            gammas: vec![1; r - 1],
        };
        let list = build_family(&FamilyParams::R(p.clone())).unwrap();
        let cover = left_fischer_cover(&list).unwrap();
        assert_eq!(cover.vertex_count(), 2 * r + 1, "r={r}");
        check_against_closed_form(&FamilyParams::R(p));
    }
}

#[test]
fn r_family_fragmented_counts() {
    for (a, t, b, g) in [(2, 1, 1, 1), (1, 2, 3, 1), (3, 3, 3, 3), (2, 3, 1, 2)] {
        check_against_closed_form(&FamilyParams::R(RParams {
            r: 2,
            alpha: a,
            alpha_tilde: t,
            beta: b,
            gammas: vec![g],
        }));
    }
    check_against_closed_form(&FamilyParams::R(RParams {
        r: 3,
        alpha: 2,
        alpha_tilde: 1,
        beta: 2,
        gammas: vec![3, 2],
    }));
}

#[test]
fn r_family_is_left_modular() {
    let p = RParams {
        r: 2,
        alpha: 1,
        alpha_tilde: 1,
        beta: 1,
        gammas: vec![1],
    };
    let list = build_family(&FamilyParams::R(p)).unwrap();
    assert_eq!(is_modular(&list, Side::Left).unwrap(), Modularity::Yes);
}

#[test]
fn r_family_border_vertices() {
    // P0 and P_{r+1}..P_{2r} are border points: r + 1 of the 2r + 1.
    for r in [2usize, 3] {
        let p = RParams {
            r,
            alpha: 1,
            alpha_tilde: 1,
            beta: 1,
            gammas: vec![1; r - 1],
        };
        let list = build_family(&FamilyParams::R(p)).unwrap();
        let cover = left_fischer_cover(&list).unwrap();
        let report = border_report(&cover, None).unwrap();
        assert_eq!(report.border_vertices.len(), r + 1, "r={r}");
        assert!(report.universal_vertex.is_some());
    }
}

#[test]
fn hsum_instances() {
    let block2 = RParams {
        r: 2,
        alpha: 1,
        alpha_tilde: 2,
        beta: 1,
        gammas: vec![2],
    };
    let block3 = RParams {
        r: 3,
        alpha: 1,
        alpha_tilde: 1,
        beta: 1,
        gammas: vec![1, 2],
    };
    for free in [1u64, 2, 3] {
        check_against_closed_form(&FamilyParams::HSum(HSumParams {
            blocks: vec![block2.clone()],
            free,
        }));
    }
    check_against_closed_form(&FamilyParams::HSum(HSumParams {
        blocks: vec![block2.clone(), block3.clone()],
        free: 2,
    }));
}

#[test]
fn diag_instances() {
    for n in [vec![4, 2], vec![3, 3], vec![3, 2], vec![5, 3]] {
        check_against_closed_form(&FamilyParams::Diag(DiagParams { n }));
    }
    // Chain cases with predicted torsion.
    for n in [vec![4, 2], vec![8, 4, 2], vec![9, 3, 3]] {
        check_against_closed_form(&FamilyParams::Diag(DiagParams { n }));
    }
}

#[test]
fn diag_cover_sizes() {
    // One chain of n_i - 1 vertices per letter.
    for (n, total) in [(vec![3u64, 3], 4usize), (vec![4, 2], 4), (vec![3, 2], 3)] {
        let list = build_family(&FamilyParams::Diag(DiagParams { n })).unwrap();
        let cover = left_fischer_cover(&list).unwrap();
        assert_eq!(cover.vertex_count(), total);
    }
}

#[test]
fn diag_forbidden_words() {
    let list = build_family(&FamilyParams::Diag(DiagParams { n: vec![3, 2] })).unwrap();
    let f = sofic_forge::cover::infer_forbidden_words(&list).unwrap();
    let expect: Vec<sofic_forge::Word> = vec![
        sofic_forge::Word::from_tokens(&["a1", "a1", "a1"]),
        sofic_forge::Word::from_tokens(&["a2", "a2"]),
    ];
    assert_eq!(f, expect);
}

#[test]
fn posdet_instances() {
    for (a, g) in [(1, 1), (2, 4), (3, 4), (1, 5), (8, 4)] {
        check_against_closed_form(&FamilyParams::PosDet(PosDetParams {
            a,
            alpha: 1,
            alpha_tilde: 1,
            beta: 1,
            gamma: g,
        }));
    }
    check_against_closed_form(&FamilyParams::PosDet(PosDetParams {
        a: 2,
        alpha: 2,
        alpha_tilde: 1,
        beta: 2,
        gamma: 3,
    }));
}

#[test]
fn posdet_is_left_modular() {
    let list = build_family(&FamilyParams::PosDet(PosDetParams {
        a: 1,
        alpha: 1,
        alpha_tilde: 1,
        beta: 1,
        gamma: 1,
    }))
    .unwrap();
    assert_eq!(is_modular(&list, Side::Left).unwrap(), Modularity::Yes);
}
