//! Acceptance gate: one PASS/FAIL line per criterion, nonzero exit on any
//! failure. Runs the full-size experiments, so it takes a few minutes.

use std::fs;
use std::path::Path;
use std::process::{Command, ExitCode};
use std::time::Instant;

use cellcap::cli::{evt_checks, oracle_rows, RunConfig, Scenario};
use cellcap::montecarlo::{run_sweep, Abscissa, Bound, FitSpec, SweepResult};

struct Gate {
    failures: usize,
}

impl Gate {
    fn report(&mut self, id: &str, name: &str, pass: bool, detail: String) {
        if !pass {
            self.failures += 1;
        }
        println!("{} criterion {id:>2} {name}: {detail}", if pass { "PASS" } else { "FAIL" });
    }
}

fn sweep(scenario: Scenario) -> (SweepResult, f64) {
    let mut cfg = RunConfig::default();
    cfg.network.scenario = scenario;
    let sc = cfg.sweep_config().expect("preset sweep config");
    let t = Instant::now();
    let res = run_sweep(&sc).expect("sweep");
    (res, t.elapsed().as_secs_f64())
}

fn fit(res: &SweepResult, bound: Bound, abscissa: Abscissa, window: Option<(usize, usize)>) -> (f64, f64) {
    let spec = FitSpec { bound, abscissa, window };
    let f = res.fit(&spec).expect("fit");
    (f.slope, f.r2)
}

// both gaps must be separated by more than either half-width
fn gap_shrinks(res: &SweepResult) -> (bool, String) {
    let lo = res.row(8).and_then(|r| r.relative_gap).expect("gap at U=8");
    let hi = res.row(16384).and_then(|r| r.relative_gap).expect("gap at U=16384");
    let pass = hi.mean < lo.mean && !lo.contains(hi.mean) && !hi.contains(lo.mean);
    (pass, format!("gap(8)={:.4}±{:.4} gap(16384)={:.4}±{:.4}", lo.mean, lo.ci_halfwidth, hi.mean, hi.ci_halfwidth))
}

fn run_cli(args: &[&str], threads: &str) -> bool {
    Command::new(env!("CARGO_BIN_EXE_cellcap"))
        .args(args)
        .env("CELLCAP_THREADS", threads)
        .output()
        .map(|o| o.status.success())
        .unwrap_or(false)
}

fn deterministic(dir: &Path, command: &str, extra: &[&str], csv: &str) -> bool {
    let mut outputs = Vec::new();
    for threads in ["1", "2", "4"] {
        let out = dir.join(format!("{command}-{threads}"));
        let mut args = vec![command, "--seed", "42", "--out", out.to_str().unwrap()];
        args.extend_from_slice(extra);
        if !run_cli(&args, threads) {
            return false;
        }
        match fs::read(out.join(csv)) {
            Ok(bytes) => outputs.push(bytes),
            Err(_) => return false,
        }
    }
    outputs.windows(2).all(|w| w[0] == w[1])
}

fn main() -> ExitCode {
    let mut gate = Gate { failures: 0 };
    let (sym, t_sym) = sweep(Scenario::Symmetric);
    let (disk, t_disk) = sweep(Scenario::Disk);
    let (excl, t_excl) = sweep(Scenario::Exclusion);
    println!("sweep runtimes: symmetric {t_sym:.1}s, disk {t_disk:.1}s, exclusion {t_excl:.1}s");

    let (_, r2_ub) = fit(&sym, Bound::Upper, Abscissa::LnLnU, None);
    let (_, r2_lb) = fit(&sym, Bound::Lower, Abscissa::LnLnU, None);
    let (s_ub, _) = fit(&sym, Bound::Upper, Abscissa::LnU, Some((512, 16384)));
    let (s_lb, _) = fit(&sym, Bound::Lower, Abscissa::LnU, Some((512, 16384)));
    gate.report(
        "1",
        "symmetric log-log scaling",
        r2_ub >= 0.98 && r2_lb >= 0.98 && s_ub <= 0.6 && s_lb <= 0.6 && t_sym <= 300.0,
        format!("R2(lnlnU) ub={r2_ub:.4} lb={r2_lb:.4}; top-half lnU slope ub={s_ub:.3} lb={s_lb:.3}; {t_sym:.1}s"),
    );

    let (d_ub, _) = fit(&disk, Bound::Upper, Abscissa::LnU, Some((512, 16384)));
    let (d_lb, _) = fit(&disk, Bound::Lower, Abscissa::LnU, Some((512, 16384)));
    gate.report(
        "2",
        "disk path-loss scaling",
        (1.6..=2.4).contains(&d_ub) && (1.5..=2.4).contains(&d_lb),
        format!("lnU slope over 512..16384 ub={d_ub:.3} lb={d_lb:.3}"),
    );

    let (low, _) = fit(&excl, Bound::Upper, Abscissa::LnU, Some((8, 64)));
    let (high, _) = fit(&excl, Bound::Upper, Abscissa::LnU, Some((2048, 16384)));
    gate.report(
        "3",
        "exclusion two-regime scaling",
        low >= 1.2 && high <= 0.6 && low > high + 0.5,
        format!("slope_low={low:.3} slope_high={high:.3}"),
    );

    let (p_sym, d_sym) = gap_shrinks(&sym);
    let (p_disk, d_disk) = gap_shrinks(&disk);
    gate.report("4", "interference gap vanishes", p_sym && p_disk, format!("symmetric {d_sym}; disk {d_disk}"));

    let t = Instant::now();
    let mut held = 0;
    let mut total = 0;
    for n in [2, 3] {
        let mut cfg = RunConfig::default();
        cfg.network.scenario = Scenario::Disk;
        cfg.oracle.n_cells = n;
        cfg.oracle.u_grid = vec![1, 2, 3, 4];
        cfg.oracle.trials = 1000;
        cfg.oracle.levels = vec![0.0, 0.5, 1.0];
        let rows = oracle_rows(&cfg).expect("oracle rows");
        total += rows.len();
        held += rows.iter().filter(|r| r.sandwiched()).count();
    }
    let t_oracle = t.elapsed().as_secs_f64();
    gate.report(
        "5",
        "oracle sandwich",
        held == total && total == 8000 && t_oracle <= 60.0,
        format!("{held}/{total} trials sandwiched; {t_oracle:.1}s"),
    );

    let t = Instant::now();
    let checks = evt_checks(&RunConfig::default()).expect("evt checks");
    let find = |check: &str, stat: &str| {
        checks.iter().find(|c| c.check == check && c.statistic.starts_with(stat)).expect(check).value
    };
    let ks = find("frechet_limit", "ks_U");
    gate.report("6", "Frechet limit of maxima", ks <= 0.05, format!("KS={ks:.4} (U=1000, 10^4 trials)"));

    let q99 = find("breiman_tail", "ratio_q0.99");
    let q999 = find("breiman_tail", "ratio_q0.999");
    gate.report(
        "7",
        "Breiman product tail",
        (0.9..=1.1).contains(&q99) && (0.9..=1.1).contains(&q999),
        format!("empirical/predicted at q=0.99 {q99:.4}, q=0.999 {q999:.4}"),
    );

    let derived = find("normalized_sinr_cdf", "sup_norm_derived");
    let scaled = find("normalized_sinr_cdf", "sup_norm_scaled");
    gate.report(
        "8",
        "normalized SINR cdf",
        derived <= 0.01,
        format!("sup-norm derived={derived:.5}; scaled-interference variant={scaled:.5} (informational)"),
    );
    println!("evt checks runtime {:.1}s", t.elapsed().as_secs_f64());

    let ratio = sym.row(16384).and_then(|r| r.snr_ratio).expect("snr ratio at U=16384");
    gate.report(
        "9",
        "normalized SNR growth",
        (0.8..=1.2).contains(&ratio.mean),
        format!("mean ratio at U=16384 = {:.4} ± {:.4}", ratio.mean, ratio.ci_halfwidth),
    );

    let tmp = tempfile::tempdir().expect("tempdir");
    let d_sweep = deterministic(tmp.path(), "sweep", &["--scenario", "disk", "--u-grid", "8,64,512", "--trials", "200"], "sweep_disk.csv");
    let d_evt = deterministic(tmp.path(), "evt-check", &["--u-grid", "100", "--trials", "500"], "evt_check.csv");
    let oracle_cfg = tmp.path().join("oracle.toml");
    fs::write(&oracle_cfg, "[oracle]\nn_cells = 3\nu_grid = [1, 2, 3]\ntrials = 200\n").expect("write config");
    let d_oracle = deterministic(tmp.path(), "oracle", &["--config", oracle_cfg.to_str().unwrap()], "oracle.csv");
    gate.report(
        "10",
        "thread-count determinism",
        d_sweep && d_evt && d_oracle,
        format!("byte-identical across CELLCAP_THREADS=1,2,4: sweep={d_sweep} evt-check={d_evt} oracle={d_oracle}"),
    );

    if gate.failures == 0 {
        println!("acceptance: all criteria passed");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: {} criteria failed", gate.failures);
        ExitCode::FAILURE
    }
}
