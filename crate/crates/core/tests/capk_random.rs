use netdesign_core::capk::solve_capk;
use netdesign_core::instances::{feasible_capk, gen_capk};
use netdesign_core::num::{ceil_log2, int, to_f64};
use netdesign_core::oracle::opt_capk;
use netdesign_core::Error;

#[test]
fn random_instances_keep_invariants_and_envelope() {
    let mut ratios = Vec::new();
    let mut restarts = 0;
    for seed in 0..60u64 {
        let n = 3 + (seed % 6) as usize;
        let m = (2 * n + 2).min(16);
        let k = [1, 2, 3, 4, 5, 7, 8, 11, 16][(seed % 9) as usize];
        let inst = gen_capk(seed, n, m, k, 10).unwrap();
        let (f, report) = match solve_capk(&inst) {
            Err(Error::Infeasible(_)) => continue,
            other => other.unwrap_or_else(|e| panic!("seed {seed}: {e}")),
        };
        let opt = opt_capk(&inst).unwrap();
        assert!(feasible_capk(&inst, &f).unwrap());
        assert!(report.lp_value <= opt.cost, "seed {seed}");
        assert!(opt.cost <= report.total_cost);
        let t = ceil_log2(k) as i64;
        assert!(report.total_cost <= int(40 * (1 + t)) * &opt.cost, "seed {seed}");
        assert!(report.ledger.all_hold(), "seed {seed}: {:?}", report.ledger.failures().collect::<Vec<_>>());
        restarts += report.restarts;
        if opt.cost > int(0) {
            ratios.push(to_f64(&(&report.total_cost / &opt.cost)));
        }
    }
    assert!(ratios.len() > 20, "only {} instances", ratios.len());
    eprintln!("restarts {restarts}, max ratio {:?}", ratios.iter().cloned().fold(0.0, f64::max));
}
