use isobound_core::explorer::{instances, min_slack, sweep, Family, FamilySpec, Grid};
use isobound_core::inequalities::{CheckId, Status};

#[test]
fn random_family_is_reproducible() {
    let fam = FamilySpec::new(Family::FourierRandom { count: 6, bound: 0.15, seed: 7 }, vec![CheckId::StekSum]);
    let a = sweep(&fam).unwrap();
    let b = sweep(&fam).unwrap();
    assert_eq!(a, b);
    let other = FamilySpec::new(Family::FourierRandom { count: 6, bound: 0.15, seed: 8 }, vec![CheckId::StekSum]);
    assert_ne!(instances(&fam).unwrap(), instances(&other).unwrap());
    for (i, row) in a.iter().enumerate() {
        assert_eq!(row.index, i);
    }
}

#[test]
fn tension_sum_slack_vanishes_at_the_disk_and_grows_away() {
    let fam = FamilySpec::new(Family::Ellipse { grid: Grid::new(1.0, 2.0, 21) }, vec![CheckId::T4Sum]);
    let rows = sweep(&fam).unwrap();
    let slacks: Vec<f64> = rows.iter().map(|r| r.report(CheckId::T4Sum).unwrap().slack).collect();
    assert!(slacks[0].abs() < 1e-6);
    for w in slacks.windows(2) {
        assert!(w[1] > w[0], "{slacks:?}");
    }
}

#[test]
fn fail_rows_exceed_their_error_bar() {
    let fam = FamilySpec::new(
        Family::PerturbedDisk { grid: Grid::new(0.0, 0.3, 7), waves: 2 },
        vec![CheckId::Conj21, CheckId::Rem22, CheckId::HenrotProd, CheckId::Conj32],
    );
    for row in sweep(&fam).unwrap() {
        for e in row.checks.unwrap() {
            let c = e.report().unwrap();
            assert_eq!(c.status == Status::Fail, c.slack < -c.err);
            assert_ne!(c.status, Status::Fail, "{} at {}", c.id, row.param);
        }
    }
}

#[test]
fn moment_product_is_extremal_across_the_ellipse_grid() {
    let fam = FamilySpec::new(Family::Ellipse { grid: Grid::new(1.0, 2.0, 11) }, vec![CheckId::JProd]);
    for row in sweep(&fam).unwrap() {
        assert!(row.report(CheckId::JProd).unwrap().rel_slack.abs() <= 1e-8);
    }
}

#[test]
fn min_slack_finds_the_disk() {
    let fam = FamilySpec::new(Family::Ellipse { grid: Grid::new(1.0, 2.0, 11) }, vec![CheckId::T7Sum]);
    let m = min_slack(&fam, CheckId::T7Sum).unwrap();
    assert!((m.param - 1.0).abs() < 1e-3);
    let fam = FamilySpec::new(Family::PerturbedDisk { grid: Grid::new(0.0, 0.3, 7), waves: 3 }, vec![CheckId::Rem22]);
    let m = min_slack(&fam, CheckId::Rem22).unwrap();
    assert!(m.param.abs() < 1e-3);
}
