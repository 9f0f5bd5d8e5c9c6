use std::io::Write;
use std::path::PathBuf;

use clap::{Args, ValueEnum};
use fracwave::dispersion::{dispersion_constant_fit, strichartz_ensemble_member, strichartz_l4linf};
use fracwave::inequality::{
    brezis_gallouet_ratio, check_kpv, check_leibniz_lemma, coefficient_identity_defect, ensemble_max,
    gagliardo_nirenberg_check, hankel_bound_check, l1_interpolation_check, log_counterexample, phi_supremum, real_part,
    run_ensemble, write_ensemble_csv, EnsembleRow, InequalityVerdict, KpvExponents,
};
use fracwave::initial::random_field_from;
use fracwave::record::format_param;
use fracwave::torus::default_grid;
use fracwave::{Error, Result};

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Lemma {
    Leibniz,
    Phi,
    Kpv,
    Bg,
    L1,
    Hankel,
    Counterexample,
    Gn,
    Dispersion,
    Strichartz,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    #[arg(value_enum)]
    lemma: Lemma,
    /// Dispersion exponent (leibniz, phi, dispersion, strichartz).
    #[arg(long)]
    alpha: Option<f64>,
    /// Extra derivatives (leibniz).
    #[arg(long)]
    n: Option<u32>,
    /// Smoothness exponent (kpv, bg, gn).
    #[arg(long)]
    s: Option<f64>,
    /// Integrability exponent (kpv, gn).
    #[arg(long)]
    p: Option<f64>,
    #[arg(long, default_value_t = 1000)]
    members: usize,
    /// Band limit of the random fields, or the largest N for block lemmas.
    #[arg(long)]
    max_mode: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn rows(lemma: &str, params: String, resolution: usize, verdicts: Vec<InequalityVerdict>) -> Vec<EnsembleRow> {
    verdicts
        .into_iter()
        .enumerate()
        .map(|(member, verdict)| EnsembleRow {
            lemma: lemma.into(),
            params: params.clone(),
            resolution,
            member,
            verdict,
        })
        .collect()
}

fn summary(rows: &[EnsembleRow], constant: Option<f64>) {
    let verdicts: Vec<InequalityVerdict> = rows.iter().map(|r| r.verdict).collect();
    let max = ensemble_max(&verdicts);
    match constant {
        Some(c) => {
            let failed = verdicts.iter().filter(|v| !v.passed()).count();
            eprintln!(
                "{}: max ratio {max:?}, {failed} of {} above constant {c:?}",
                rows[0].lemma,
                verdicts.len()
            );
        }
        None => eprintln!("{}: max ratio {max:?} over {} members", rows[0].lemma, verdicts.len()),
    }
}

fn dyadic_up_to(lo: u32, max: usize) -> Vec<u64> {
    (lo..).map(|e| 1u64 << e).take_while(|&n| n as usize <= max).collect()
}

pub fn run(args: &VerifyArgs) -> Result<()> {
    let mut out = crate::output(args.out.as_ref())?;
    let m = args.members;
    let seed = args.seed;
    match args.lemma {
        Lemma::Leibniz => {
            let (alpha, n) = (args.alpha.unwrap_or(1.5), args.n.unwrap_or(0));
            let k = args.max_mode.unwrap_or(32);
            let sigma = alpha + n as f64 + 1.0;
            let v = run_ensemble(m, seed, |rng, _| {
                check_leibniz_lemma(&random_field_from(rng, k, sigma, 1.0), alpha, n)
            })?;
            let r = rows("leibniz", format!("alpha={};n={n}", format_param(alpha)), k, v);
            write_ensemble_csv(&r, &mut out)?;
            summary(&r, None);
        }
        Lemma::Phi => {
            writeln!(out, "alpha,sup,identity_defect")?;
            let alphas = match args.alpha {
                Some(a) => vec![a],
                None => vec![1.0, 1.25, 1.5, 1.75, 2.0],
            };
            for a in alphas {
                if !(1.0..=2.0).contains(&a) {
                    return Err(Error::InvalidParameter(format!("phi needs 1 <= alpha <= 2, got {a}")));
                }
                let sup = phi_supremum(a);
                writeln!(
                    out,
                    "{},{sup:?},{:?}",
                    format_param(a),
                    coefficient_identity_defect(a, 512)
                )?;
                eprintln!("phi: alpha = {} sup = {sup:.12}", format_param(a));
            }
        }
        Lemma::Kpv => {
            let s = args.s.unwrap_or(0.5);
            let exps = KpvExponents {
                s,
                s1: s / 2.0,
                s2: s / 2.0,
                p: args.p.unwrap_or(2.0),
                p1: 0.0,
                p2: 0.0,
            };
            let exps = KpvExponents {
                p1: 2.0 * exps.p,
                p2: 2.0 * exps.p,
                ..exps
            };
            let k = args.max_mode.unwrap_or(32);
            let grid = 8 * k;
            let v = run_ensemble(m, seed, |rng, _| {
                let f = random_field_from(rng, k, 2.0, 1.0);
                let g = random_field_from(rng, k, 2.0, 1.0);
                check_kpv(&f, &g, exps, grid)
            })?;
            let params = format!(
                "s={};p={};p1={};p2={}",
                format_param(s),
                format_param(exps.p),
                format_param(exps.p1),
                format_param(exps.p2)
            );
            let r = rows("kpv", params, k, v);
            write_ensemble_csv(&r, &mut out)?;
            summary(&r, None);
        }
        Lemma::Bg => {
            let s = args.s.unwrap_or(1.0);
            let k = args.max_mode.unwrap_or(64);
            let v = run_ensemble(m, seed, |rng, _| {
                let w = real_part(&random_field_from(rng, k, s + 0.5, 1.0));
                brezis_gallouet_ratio(&w, s, default_grid(k))
            })?;
            let r = rows("bg", format!("s={}", format_param(s)), k, v);
            write_ensemble_csv(&r, &mut out)?;
            summary(&r, None);
        }
        Lemma::L1 => {
            let k = args.max_mode.unwrap_or(64);
            let v = run_ensemble(m, seed, |rng, _| {
                l1_interpolation_check(&random_field_from(rng, k, 1.0, 1.0))
            })?;
            let r = rows("l1", String::new(), k, v);
            write_ensemble_csv(&r, &mut out)?;
            summary(&r, Some(1.0));
        }
        Lemma::Hankel => {
            let k = args.max_mode.unwrap_or(64);
            let v = run_ensemble(m, seed, |rng, _| {
                let a = random_field_from(rng, k, 1.0, 1.0).szego_project();
                let b = random_field_from(rng, k, 1.0, 1.0).szego_project();
                Ok(hankel_bound_check(&a, &b)?.proof_weight)
            })?;
            let r = rows("hankel", "weight=proof".into(), k, v);
            write_ensemble_csv(&r, &mut out)?;
            summary(&r, Some(1.0));
        }
        Lemma::Counterexample => {
            let max = args.max_mode.unwrap_or(1 << 16);
            writeln!(out, "n,ratio")?;
            let mut prev = f64::NEG_INFINITY;
            let mut increasing = true;
            for big_n in (8..).step_by(2).map(|e| 1usize << e).take_while(|&n| n <= max) {
                let (_, ratio) = log_counterexample(big_n)?;
                increasing &= ratio > prev;
                prev = ratio;
                writeln!(out, "{big_n},{ratio:?}")?;
            }
            eprintln!("counterexample: ratio strictly increasing = {increasing}");
        }
        Lemma::Gn => {
            let (s, p) = (args.s.unwrap_or(0.5), args.p.unwrap_or(4.0));
            let k = args.max_mode.unwrap_or(32);
            let v = run_ensemble(m, seed, |rng, _| {
                gagliardo_nirenberg_check(&real_part(&random_field_from(rng, k, 1.5, 1.0)), s, p, 8 * k)
            })?;
            let r = rows("gn", format!("s={};p={}", format_param(s), format_param(p)), k, v);
            write_ensemble_csv(&r, &mut out)?;
            summary(&r, None);
        }
        Lemma::Dispersion => {
            let alpha = args.alpha.unwrap_or(0.8);
            let ns = dyadic_up_to(6, args.max_mode.unwrap_or(1 << 10));
            let ts: Vec<f64> = (0..40).map(|i| 10f64.powf(-3.0 + 3.0 * i as f64 / 39.0)).collect();
            let fit = dispersion_constant_fit(alpha, &ns, &ts)?;
            writeln!(out, "n,constant")?;
            for (n, c) in &fit.per_n {
                writeln!(out, "{n},{c:?}")?;
            }
            eprintln!(
                "dispersion: constant {:?}, variation {:?}, {} (N, t) pairs below 4/N^alpha excluded",
                fit.constant,
                fit.variation,
                fit.excluded.len()
            );
        }
        Lemma::Strichartz => {
            let alpha = args.alpha.unwrap_or(0.8);
            let members = args.members.min(64);
            let mut all = Vec::new();
            let mut prev: Option<f64> = None;
            for big_n in dyadic_up_to(4, args.max_mode.unwrap_or(1 << 9)) {
                let tq = (8.0 * (big_n as f64).powf(alpha)).ceil() as usize;
                let v = run_ensemble(members, seed, |rng, mm| {
                    strichartz_l4linf(
                        &strichartz_ensemble_member(rng, big_n, mm, members),
                        big_n,
                        alpha,
                        tq,
                        16 * big_n as usize,
                    )
                })?;
                let max = ensemble_max(&v);
                match prev {
                    Some(p) => eprintln!(
                        "strichartz: N = {big_n} max ratio {max:?}, doubling factor {:?}",
                        max / p
                    ),
                    None => eprintln!("strichartz: N = {big_n} max ratio {max:?}"),
                }
                prev = Some(max);
                all.extend(rows(
                    "strichartz",
                    format!("alpha={}", format_param(alpha)),
                    big_n as usize,
                    v,
                ));
            }
            write_ensemble_csv(&all, &mut out)?;
        }
    }
    out.flush()?;
    Ok(())
}
