use serde::Serialize;

use squeeze_core::analytic::{contraction_limit_scan, default_scan_etas, proposition1_scan, LimitSequencePoint};
use squeeze_core::dicke::{evolve, DickePropagator, NORM_LEAK_LIMIT};
use squeeze_core::phasespace::{atom_husimi, field_q};
use squeeze_core::squeezing::{kitagawa_from_moments, min_variance_grid, evenodd_from_moments, SpinMoments};
use squeeze_core::{Basis, CatParity, DickeConfig, GridSpec, Plane, Spin, SqueezingReport};

use crate::table::{Cell, Table};
use crate::CliError;

/// A finished command: its output document plus any `--check` violations.
pub struct Outcome {
    pub body: Body,
    pub violations: Vec<String>,
}

pub enum Body {
    Table(Table),
    Json(String),
}

struct Checker {
    enabled: bool,
    violations: Vec<String>,
}

impl Checker {
    fn new(enabled: bool) -> Self {
        Checker { enabled, violations: Vec::new() }
    }

    fn require(&mut self, ok: bool, what: impl FnOnce() -> String) {
        if self.enabled && !ok {
            self.violations.push(what());
        }
    }
}

#[derive(Serialize)]
struct EvalDoc<'a> {
    state: &'a str,
    basis: String,
    n_max: Option<usize>,
    #[serde(flatten)]
    report: &'a SqueezingReport,
}

pub fn squeeze_eval(spec: &str, n_max: Option<usize>, json_out: bool, check: bool) -> Result<Outcome, CliError> {
    let (psi, nm) = crate::parse::state(spec, n_max)?;
    let report = SqueezingReport::for_state(&psi)?;
    let mut checker = Checker::new(check);
    if check {
        if let (Some(zeta), Basis::Fock { .. }) = (report.zeta, psi.basis()) {
            let (_, grid_min) = min_variance_grid(&psi)?;
            checker.require((grid_min - zeta).abs() <= 1e-10, || format!("zeta {zeta} differs from grid minimum {grid_min}"));
        }
        if let Basis::Dicke { .. } = psi.basis() {
            let m = SpinMoments::from_state(&psi)?;
            if let (Ok(ku), Ok(ax)) = (kitagawa_from_moments(&m), evenodd_from_moments(&m)) {
                checker.require((ku.xi - ax.xi).abs() <= 1e-9, || format!("covariance xi {} differs from axial xi {}", ku.xi, ax.xi));
            }
            if let (Some(xi), Some(xp)) = (report.xi, report.xi_prime) {
                checker.require(xp >= xi - 1e-12, || format!("xi' {xp} below xi {xi}"));
            }
        }
    }
    let body = if json_out {
        let doc = EvalDoc { state: spec, basis: psi.basis().to_string(), n_max: nm, report: &report };
        Body::Json(serde_json::to_string_pretty(&doc).expect("serialisable") + "\n")
    } else {
        let mut t = Table::new("squeeze-eval", &["zeta", "theta_star", "zeta_tilde", "xi", "xi_prime", "xi_tilde"]);
        t.echo("state", spec);
        if let Some(nm) = nm {
            t.echo("n_max", nm);
        }
        let cell = |x: Option<f64>| Cell::Num(x.unwrap_or(f64::NAN));
        t.push(vec![
            cell(report.zeta),
            cell(report.theta_star),
            cell(report.zeta_tilde),
            cell(report.xi),
            cell(report.xi_prime),
            cell(report.xi_tilde),
        ]);
        Body::Table(t)
    };
    Ok(Outcome { body, violations: checker.violations })
}

pub fn prop1(j_max: Spin, eta_step: f64, check: bool) -> Result<Outcome, CliError> {
    if j_max.two_j() < 2 {
        return Err(CliError::Invalid(format!("j-max must be at least 1, got {j_max}")));
    }
    let etas = default_scan_etas(eta_step)?;
    let spins: Vec<Spin> = (2..=j_max.two_j()).map(Spin::from_two_j).collect();
    let points = proposition1_scan(&spins, &etas)?;
    let mut t = Table::new("prop1", &["j", "eta", "parity", "xi", "xi_tilde", "F1", "F2"]);
    t.echo("j_max", j_max);
    t.echo("eta_step", eta_step);
    let mut checker = Checker::new(check);
    for p in &points {
        let j = p.spin.value();
        t.push(vec![
            j.into(),
            p.eta.into(),
            p.parity.to_string().as_str().into(),
            (1.0 + p.xi_tilde_closed / j).into(),
            p.xi_tilde_closed.into(),
            p.f1.into(),
            p.f2.into(),
        ]);
        let label = || format!("j={} eta={} {}", p.spin, p.eta, p.parity);
        let side = match p.parity {
            CatParity::Even => p.xi_tilde_closed < 0.0,
            CatParity::Odd => p.xi_tilde_closed > 0.0,
        };
        checker.require(side, || format!("{}: xi on the wrong side of 1 (xi_tilde {})", label(), p.xi_tilde_closed));
        let df = (p.f1 - p.f1_direct).abs().max((p.f2 - p.f2_direct).abs());
        checker.require(df <= 1e-10, || format!("{}: closed-form moments off by {df:e}", label()));
        let dx = (p.xi_tilde - p.xi_tilde_closed).abs();
        checker.require(dx <= 1e-9, || format!("{}: state-vector xi_tilde off by {dx:e}", label()));
        checker.require(p.lowering_pair_mean >= -1e-12, || format!("{}: negative <(2j-N)(2j-N-1)>", label()));
    }
    Ok(Outcome { body: Body::Table(t), violations: checker.violations })
}

pub fn limit(alpha2: f64, spins: &[Spin], parity: CatParity, check: bool) -> Result<Outcome, CliError> {
    if !(alpha2.is_finite() && alpha2 > 0.0) {
        return Err(CliError::Invalid(format!("alpha2 must be positive, got {alpha2}")));
    }
    if spins.is_empty() {
        return Err(CliError::Invalid("j list is empty".into()));
    }
    let points: Vec<LimitSequencePoint> = contraction_limit_scan(alpha2, spins, parity)?;
    let mut t = Table::new("limit", &["j", "eta", "xi", "zeta_target", "gap", "mean_excitation_fraction"]);
    t.echo("alpha2", alpha2);
    t.echo("j", spins.iter().map(|s| s.to_string()).collect::<Vec<_>>().join(","));
    t.echo("parity", parity);
    for p in &points {
        t.push(vec![
            p.spin.value().into(),
            p.eta_abs.into(),
            p.xi.into(),
            p.zeta_target.into(),
            p.gap.into(),
            p.mean_excitation_fraction.into(),
        ]);
    }
    let mut checker = Checker::new(check);
    for w in points.windows(2) {
        checker.require(w[1].spin <= w[0].spin || w[1].gap < w[0].gap, || {
            format!("gap does not decrease from j={} ({}) to j={} ({})", w[0].spin, w[0].gap, w[1].spin, w[1].gap)
        });
    }
    Ok(Outcome { body: Body::Table(t), violations: checker.violations })
}

fn echo_dicke(t: &mut Table, cfg: &DickeConfig, tau_text: &str) {
    t.echo("atoms", cfg.n_atoms);
    t.echo("alpha0", cfg.alpha0);
    t.echo("tau", tau_text);
    t.echo("n_max", cfg.photon_cutoff());
    t.echo("lambda", cfg.lambda);
    t.echo("blocks", cfg.use_blocks);
}

pub fn dicke(cfg: &DickeConfig, tau_text: &str, check: bool) -> Result<Outcome, CliError> {
    cfg.validate()?;
    let run = evolve(cfg)?;
    let mut t = Table::new(
        "dicke",
        &["tau", "zeta_field", "xi_atoms", "xi_prime_atoms", "parity", "total_excitation", "norm"],
    );
    echo_dicke(&mut t, cfg, tau_text);
    let mut checker = Checker::new(check);
    let e0 = run.rows[0].total_excitation;
    for r in &run.rows {
        t.push(vec![
            r.tau.into(),
            r.zeta_field.into(),
            r.xi_atoms.into(),
            r.xi_prime_atoms.unwrap_or(f64::NAN).into(),
            r.parity.into(),
            r.total_excitation.into(),
            r.norm.into(),
        ]);
        let at = r.tau;
        checker.require((r.norm - 1.0).abs() <= NORM_LEAK_LIMIT, || format!("tau={at}: norm {}", r.norm));
        checker.require((r.parity - 1.0).abs() <= 1e-9, || format!("tau={at}: parity {}", r.parity));
        checker.require((r.total_excitation - e0).abs() <= 1e-9, || format!("tau={at}: excitation {} != {e0}", r.total_excitation));
        checker.require(r.abs_mean_a <= 1e-10 && r.abs_mean_s_minus <= 1e-10, || {
            format!("tau={at}: |<a>| = {:e}, |<S->| = {:e}", r.abs_mean_a, r.abs_mean_s_minus)
        });
        if cfg.n_atoms == 1 {
            checker.require((r.xi_atoms - 1.0).abs() <= 1e-9, || format!("tau={at}: single-atom xi {}", r.xi_atoms));
        }
    }
    Ok(Outcome { body: Body::Table(t), violations: checker.violations })
}

pub fn qfunc(cfg: &DickeConfig, tau_text: &str, plane: Plane, grid: &GridSpec, check: bool) -> Result<Outcome, CliError> {
    cfg.validate()?;
    grid.validate()?;
    let prop = DickePropagator::new(cfg)?;
    let mut t = Table::new("qfunc", &["tau", "re", "im", "value"]);
    t.echo("plane", plane);
    echo_dicke(&mut t, cfg, tau_text);
    t.echo("grid", format!("{}:{}:{}", grid.lo, grid.hi, grid.points));
    let mut checker = Checker::new(check);
    for &tau in &cfg.tau_grid {
        let psi = prop.state_at(tau);
        let q = match plane {
            Plane::FieldAlpha => field_q(&psi, grid, tau)?,
            Plane::AtomEta => atom_husimi(&psi, grid, tau)?,
        };
        for (x, y, v) in q.points() {
            t.push(vec![tau.into(), x.into(), y.into(), v.into()]);
        }
        let min = q.min_value();
        checker.require(min >= -1e-12, || format!("tau={tau}: negative Q value {min:e}"));
        match q.parity_asymmetry() {
            Ok(a) => checker.require(a <= 1e-9, || format!("tau={tau}: |Q(x) - Q(-x)| = {a:e}")),
            Err(_) => checker.require(false, || format!("tau={tau}: parity check needs a grid symmetric about 0")),
        }
        if plane == Plane::FieldAlpha {
            let n = q.normalization();
            checker.require((n - 1.0).abs() <= 0.02, || format!("tau={tau}: field Q normalisation {n}"));
        }
    }
    Ok(Outcome { body: Body::Table(t), violations: checker.violations })
}
