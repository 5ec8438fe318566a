mod common;

use common::golden;
use jamgame::lp::solve_ne_lp;
use jamgame::{epsilon_ne_check, solve};

fn check(name: &str) {
    let g = golden(name);
    let game = g.game.to_game().unwrap();
    let s = solve(&game).unwrap();
    assert!(
        (s.value - g.value).abs() <= 1e-12,
        "{name}: value {}",
        s.value
    );
    assert_eq!(s.segment_m, g.m, "{name}");
    for (a, b) in s.x_star.probs().iter().zip(&g.x) {
        assert!((a - b).abs() <= 1e-12, "{name}: x {:?}", s.x_star.probs());
    }
    for (a, b) in s.y_star.probs().iter().zip(&g.y) {
        assert!((a - b).abs() <= 1e-12, "{name}: y {:?}", s.y_star.probs());
    }
    assert!((s.breakpoints.j_th - g.j_th).abs() <= 1e-12);
    for (a, b) in s.breakpoints.j_ave_m.iter().zip(&g.breakpoints) {
        assert!((a - b).abs() <= 1e-12);
    }

    let lp = solve_ne_lp(&game).unwrap();
    assert!(
        (lp.value - g.value).abs() <= 1e-9,
        "{name}: lp value {}",
        lp.value
    );
    assert!(
        epsilon_ne_check(&game, &lp.x_star, &lp.y_star, 1e-9)
            .unwrap()
            .is_ne
    );
}

#[test]
fn two_by_two() {
    check("game_2x2");
}

#[test]
fn three_by_three() {
    check("game_3x3");
}
