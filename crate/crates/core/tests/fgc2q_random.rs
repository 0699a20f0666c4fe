use netdesign_core::fgc2q::{solve_2q, two_cover_via_fgc2q};
use netdesign_core::instances::{feasible_cover, feasible_fgc, gen_cover, gen_fgc, FgcInstance};
use netdesign_core::num::int;
use netdesign_core::oracle::{opt_cover, opt_fgc};
use netdesign_core::small_cut_cover::exact_two_cover;
use netdesign_core::Error;

#[test]
fn random_instances_within_fifteen_times_optimum() {
    let mut solved = 0;
    for seed in 0..40u64 {
        let n = 3 + (seed % 5) as usize;
        let m = (3 * n).min(16);
        let q = 1 + (seed % 2) as u32;
        let inst = gen_fgc(seed, n, m, 2, q, 10, 0.5).unwrap();
        let (f, report) = match solve_2q(&inst, &exact_two_cover) {
            Err(Error::Infeasible(_)) => continue,
            other => other.unwrap(),
        };
        let opt = opt_fgc(&inst).unwrap();
        assert!(feasible_fgc(&inst, &f).unwrap());
        assert!(report.lp_value <= opt.cost, "seed {seed}");
        assert!(report.total_cost <= int(15) * &opt.cost, "seed {seed}");
        let bound = (int(4) * &report.alpha_used + int(11)) * &report.lp_value;
        assert!(report.total_cost <= bound, "seed {seed}");
        assert!(report.checks.all_hold(), "seed {seed}: {:?}", report.checks.failures().collect::<Vec<_>>());
        solved += 1;
    }
    assert!(solved > 10, "only {solved} feasible instances");
}

#[test]
fn reverse_reduction_within_three_times_optimum() {
    let oracle = |f: &FgcInstance| Ok(opt_fgc(f)?.witness);
    let mut solved = 0;
    for seed in 0..30u64 {
        let n = 3 + (seed % 4) as usize;
        let lambda = 3 + (seed % 2) as i64;
        let inst = gen_cover(seed, n, n + 2, 8, int(lambda), 2, 1, 10).unwrap();
        let got = match two_cover_via_fgc2q(&inst, &oracle) {
            Err(Error::Infeasible(_)) => continue,
            other => other.unwrap(),
        };
        let opt = opt_cover(&inst, 2).unwrap();
        assert!(feasible_cover(&inst, &got).unwrap());
        assert!(inst.cost(&got) <= int(3) * &opt.cost, "seed {seed}");
        solved += 1;
    }
    assert!(solved > 10, "only {solved} feasible instances");
}
