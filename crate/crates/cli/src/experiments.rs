//! The named experiments. Each reads what it needs from the config and fills
//! a [`Report`] with results, assertions and CSV tables.

use std::f64::consts::PI;

use cnplab::drury::{counterexample_growth, da_norm_sq, hyponormality_gap, MonomialPoly};
use cnplab::export::{complex_json, complex_vec_json, write_matrix_csv, write_table_csv};
use cnplab::finsample::{containment_test, growth_certificate};
use cnplab::hardy::{constructive_hb_approx, pythagorean_mate, tstar_solve, DiskFunction};
use cnplab::kernels::{cnp_certificate_with, normalized_defect, CnpCertificate};
use cnplab::linalg::{rel_frobenius, CMatrix, HermitianSpectrum};
use cnplab::{FinSampleSpace, RepresentingPair, SampledMultiplier};
use num_complex::Complex64;
use serde_json::{json, Value};

use crate::config::ExperimentConfig;
use crate::error::{CliError, CliResult};
use crate::report::Report;

/// Relative slack for monotonicity along refinements.
const MONOTONE_SLACK: f64 = 1e-8;

pub struct Experiment {
    pub name: &'static str,
    pub summary: &'static str,
    run: fn(&ExperimentConfig, &mut Report) -> CliResult<()>,
}

pub const EXPERIMENTS: &[Experiment] = &[
    Experiment {
        name: "identity-suite",
        summary: "Dom T and Dom T* kernels by formula and by graph projection, Gram identity, T* eigenvectors",
        run: identity_suite,
    },
    Experiment {
        name: "cnp-check",
        summary: "finite-sample complete Pick certificate or witness",
        run: cnp_check,
    },
    Experiment {
        name: "pick",
        summary: "Pick matrix feasibility for target values",
        run: pick,
    },
    Experiment {
        name: "multnorm",
        summary: "multiplier norm on nested samples",
        run: multnorm,
    },
    Experiment {
        name: "corona",
        summary: "corona constant of a pair on nested samples, with a pointwise certificate",
        run: corona,
    },
    Experiment {
        name: "containment",
        summary: "contractive containment of Dom T and Dom T* in H, optional column contractivity",
        run: containment,
    },
    Experiment {
        name: "approx",
        summary: "constructive kernel-span approximation in Dom T* on the disk",
        run: approx,
    },
    Experiment {
        name: "mate",
        summary: "Pythagorean mate (a, b) of a symbol on a circle grid",
        run: mate,
    },
    Experiment {
        name: "counterexample",
        summary: "exact Drury-Arveson norms and the divergent partial sums",
        run: counterexample,
    },
    Experiment {
        name: "hyponormal",
        summary: "hyponormality gap of a polynomial multiplier on truncations",
        run: hyponormal,
    },
    Experiment {
        name: "growth",
        summary: "minimal growth constants C(x) = (1 - |x|) log|h(x)|",
        run: growth,
    },
];

pub fn find(name: &str) -> CliResult<&'static Experiment> {
    EXPERIMENTS
        .iter()
        .find(|e| e.name == name)
        .ok_or_else(|| CliError::Config(format!("unknown experiment `{name}`; see `cnplab list`")))
}

/// Runs the experiment named in `cfg`, without timing.
pub fn execute(cfg: &ExperimentConfig) -> CliResult<Report> {
    let exp = find(&cfg.experiment)?;
    let mut report = Report::new(cfg.clone());
    (exp.run)(cfg, &mut report).map_err(|e| CliError::Experiment {
        experiment: exp.name.to_string(),
        source: Box::new(e),
    })?;
    Ok(report)
}

fn close(got: f64, want: f64, tol: f64) -> bool {
    (got - want).abs() <= tol * want.abs().max(1.0)
}

fn matrix_csv(m: &CMatrix) -> CliResult<Vec<u8>> {
    let mut buf = Vec::new();
    write_matrix_csv(&mut buf, m)?;
    Ok(buf)
}

fn table_csv(header: &[&str], rows: &[Vec<f64>]) -> CliResult<Vec<u8>> {
    let mut buf = Vec::new();
    write_table_csv(&mut buf, header, rows)?;
    Ok(buf)
}

fn space(cfg: &ExperimentConfig) -> CliResult<FinSampleSpace> {
    Ok(FinSampleSpace::with_tolerances(
        &cfg.kernel()?,
        cfg.point_set()?,
        cfg.tolerances(),
    )?)
}

/// Prefix lengths to sweep, defaulting to the whole sample.
fn nested(cfg: &ExperimentConfig, len: usize) -> CliResult<Vec<usize>> {
    let ns = cfg.nested.clone().unwrap_or_else(|| vec![len]);
    if let Some(&bad) = ns.iter().find(|&&n| n == 0 || n > len) {
        return Err(CliError::Config(format!(
            "nested size {bad} outside 1..={len}"
        )));
    }
    Ok(ns)
}

fn prefix_space(
    cfg: &ExperimentConfig,
    full: &FinSampleSpace,
    n: usize,
) -> CliResult<FinSampleSpace> {
    Ok(FinSampleSpace::with_tolerances(
        &cfg.kernel()?,
        full.points().prefix(n),
        cfg.tolerances(),
    )?)
}

fn identity_suite(cfg: &ExperimentConfig, r: &mut Report) -> CliResult<()> {
    let s = space(cfg)?;
    let tol = cfg.tolerances();
    let h = cfg.symbol()?.sample(s.points())?;
    let kt = s.dom_t_kernel(&h)?;
    let kts = s.dom_t_star_kernel(&h)?;
    let g = s.graph_projection_kernels(&h)?;
    let n = s.len();

    let cross_t = rel_frobenius(&g.dom_t, &kt);
    let cross_ts = rel_frobenius(&g.dom_t_star, &kts.kernel);
    let c = s.frame_multiplier(&h)?;
    let id = CMatrix::identity(n, n);
    let gram_identity = rel_frobenius(&(&g.frame_dom_t_star * (&id + &c * c.adjoint())), &id);
    let adj = c.adjoint();
    let eigen = (0..n)
        .map(|x| {
            let k = s.frame_kernel(x);
            (&adj * &k - &k * h.values[x].conj()).norm() / k.norm()
        })
        .fold(0.0, f64::max);

    r.set("n", n);
    r.set("cond_estimate", s.cond_estimate());
    r.set("cross_method_dom_t", cross_t);
    r.set("cross_method_dom_t_star", cross_ts);
    r.set("gram_identity", gram_identity);
    r.set("eigen_residual", eigen);
    r.check(
        "cross-method",
        cross_t.max(cross_ts) <= tol.cross_method,
        format!("{:.3e} ≤ {:e}", cross_t.max(cross_ts), tol.cross_method),
    );
    r.check(
        "gram-identity",
        gram_identity <= tol.cross_method,
        format!("{gram_identity:.3e} ≤ {:e}", tol.cross_method),
    );
    r.check(
        "adjoint-eigenvectors",
        eigen <= tol.identity,
        format!("{eigen:.3e} ≤ {:e}", tol.identity),
    );

    let expect = cfg.expect();
    if let Some(want) = &expect.dom_t_star {
        if want.len() != n || want.iter().any(|row| row.len() != n) {
            return Err(CliError::Config(format!(
                "expected Dom T* kernel must be {n}×{n}"
            )));
        }
        let w = CMatrix::from_fn(n, n, |i, j| Complex64::new(want[i][j][0], want[i][j][1]));
        let dev = |m: &CMatrix| (m - &w).iter().map(|z| z.norm()).fold(0.0, f64::max);
        let (d1, d2) = (dev(&kts.kernel), dev(&g.dom_t_star));
        r.check(
            "dom-t-star-expected",
            d1.max(d2) <= expect.tol(),
            format!("formula {d1:.1e}, projection {d2:.1e} ≤ {:e}", expect.tol()),
        );
    }

    r.table("dom_t", matrix_csv(&kt)?);
    r.table("dom_t_star", matrix_csv(&kts.kernel)?);
    r.table("gram_b", matrix_csv(&kts.gram_b)?);
    Ok(())
}

fn cnp_check(cfg: &ExperimentConfig, r: &mut Report) -> CliResult<()> {
    let kernel = cfg.kernel()?;
    let pts = cfg.point_set()?;
    let base = cfg.base_index.unwrap_or(0);
    let tau = cfg.tolerances().psd_tau;
    let cert = cnp_certificate_with(&kernel, &pts, base, tau)?;
    let min_eig = HermitianSpectrum::new(&normalized_defect(&kernel, &pts, base)?).min();
    r.set("kernel", kernel.name());
    r.set("n", pts.len());
    r.set("base_index", base);
    r.set("accepted", cert.accepted());
    r.set("min_eigenvalue", min_eig);
    match &cert {
        CnpCertificate::Accept { factor, max_diag } => {
            r.set("max_diag", *max_diag);
            r.set("embedding_rank", factor.ncols());
        }
        CnpCertificate::Reject {
            reason,
            witness,
            max_diag,
            ..
        } => {
            r.set("max_diag", *max_diag);
            r.set(
                "reason",
                serde_json::to_value(reason).expect("reason serializes"),
            );
            r.set("witness", complex_vec_json(witness.as_slice()));
        }
    }
    let expect = cfg.expect();
    if let Some(want) = expect.accept {
        r.check(
            "decision",
            cert.accepted() == want,
            format!("accepted = {}, expected {want}", cert.accepted()),
        );
    }
    if let Some(want) = expect.min_eigenvalue {
        r.check(
            "min-eigenvalue",
            close(min_eig, want, expect.tol()),
            format!("{min_eig:e} vs {want:e} ± {:e}", expect.tol()),
        );
    }
    Ok(())
}

fn pick(cfg: &ExperimentConfig, r: &mut Report) -> CliResult<()> {
    let s = space(cfg)?;
    let w = cfg.symbol()?.sample(s.points())?;
    let v = s.pick_feasible(&w.values)?;
    let norm = s.multiplier_norm(&w)?;
    r.set("n", s.len());
    r.set("feasible", v.psd);
    r.set("min_eigenvalue", v.min_eigenvalue);
    r.set("threshold", v.threshold);
    r.set("multiplier_norm", norm);
    if !v.psd {
        r.set("witness", complex_vec_json(v.witness.as_slice()));
    }
    let expect = cfg.expect();
    if let Some(want) = expect.feasible {
        r.check(
            "feasibility",
            v.psd == want,
            format!("feasible = {}, expected {want}", v.psd),
        );
    }
    if let Some(want) = expect.norm {
        r.check(
            "norm",
            close(norm, want, expect.tol()),
            format!("{norm} vs {want} ± {:e}", expect.tol()),
        );
    }
    Ok(())
}

fn multnorm(cfg: &ExperimentConfig, r: &mut Report) -> CliResult<()> {
    let full = space(cfg)?;
    let sym = cfg.symbol()?;
    let mut rows = Vec::new();
    for n in nested(cfg, full.len())? {
        let s = prefix_space(cfg, &full, n)?;
        rows.push(vec![n as f64, s.multiplier_norm(&sym.sample(s.points())?)?]);
    }
    let norms: Vec<f64> = rows.iter().map(|row| row[1]).collect();
    let monotone = norms
        .windows(2)
        .all(|w| w[1] >= w[0] * (1.0 - MONOTONE_SLACK));
    r.set("norms", norms.clone());
    r.check(
        "nondecreasing",
        monotone,
        format!("norms {norms:?}, relative slack {MONOTONE_SLACK:e}"),
    );
    let expect = cfg.expect();
    if let Some(want) = expect.norm {
        let last = *norms.last().expect("at least one size");
        r.check(
            "norm",
            close(last, want, expect.tol()),
            format!("{last} vs {want} ± {:e}", expect.tol()),
        );
    }
    r.table("norms", table_csv(&["n", "norm"], &rows)?);
    Ok(())
}

fn corona(cfg: &ExperimentConfig, r: &mut Report) -> CliResult<()> {
    let full = space(cfg)?;
    let [sa, sb] = cfg.pair()?;
    let mut rows = Vec::new();
    let mut bounded = true;
    let mut worst_identity: f64 = 0.0;
    let mut identity_ok = true;
    for n in nested(cfg, full.len())? {
        let s = prefix_space(cfg, &full, n)?;
        let a = sa.sample(s.points())?;
        let b = sb.sample(s.points())?;
        let q: Vec<f64> = a
            .values
            .iter()
            .zip(&b.values)
            .map(|(a, b)| a.norm_sqr() + b.norm_sqr())
            .collect();
        let pointwise = q.iter().fold(f64::INFINITY, |m, x| m.min(x.sqrt()));
        let u = SampledMultiplier::new(
            "u",
            a.values.iter().zip(&q).map(|(a, q)| a.conj() / q).collect(),
        )?;
        let v = SampledMultiplier::new(
            "v",
            b.values.iter().zip(&q).map(|(b, q)| b.conj() / q).collect(),
        )?;
        let pair = RepresentingPair::new(a, b)?;
        let c = s.corona_constant(&pair)?;
        bounded &= c <= pointwise * (1.0 + MONOTONE_SLACK);
        let row_norm = match s.corona_certify(&pair, &u, &v) {
            Ok(cert) => {
                worst_identity = worst_identity.max(cert.max_residual);
                cert.row_norm
            }
            Err(cnplab::Error::IdentityViolated { residual, .. }) => {
                identity_ok = false;
                worst_identity = worst_identity.max(residual);
                f64::NAN
            }
            Err(e) => return Err(e.into()),
        };
        rows.push(vec![n as f64, c, pointwise, row_norm]);
    }
    let consts: Vec<f64> = rows.iter().map(|row| row[1]).collect();
    r.set("corona_constants", consts.clone());
    r.set("identity_residual", worst_identity);
    r.check(
        "nonincreasing",
        consts
            .windows(2)
            .all(|w| w[1] <= w[0] * (1.0 + MONOTONE_SLACK)),
        format!("{consts:?}"),
    );
    r.check(
        "pointwise-bound",
        bounded,
        "c ≤ min sqrt(|a|² + |b|²) on every sample",
    );
    r.check(
        "certificate-identity",
        identity_ok && worst_identity <= cfg.tolerances().identity,
        format!("a u + b v = 1 up to {worst_identity:.1e}"),
    );
    r.table(
        "corona",
        table_csv(
            &[
                "n",
                "corona_constant",
                "pointwise_min",
                "certificate_row_norm",
            ],
            &rows,
        )?,
    );
    Ok(())
}

fn containment(cfg: &ExperimentConfig, r: &mut Report) -> CliResult<()> {
    let s = space(cfg)?;
    let tau = cfg.tolerances().psd_tau;
    let h = cfg.symbol()?.sample(s.points())?;
    let kt = s.dom_t_kernel(&h)?;
    let kts = s.dom_t_star_kernel(&h)?.kernel;
    for (name, m) in [("dom-t", &kt), ("dom-t-star", &kts)] {
        let v = containment_test(m, s.gram(), tau)?;
        r.set(&format!("{name}_min_eigenvalue"), v.min_eigenvalue);
        r.check(
            format!("{name}-in-h"),
            v.psd,
            format!("λ_min(K − K') = {:e} ≥ {:e}", v.min_eigenvalue, v.threshold),
        );
    }
    if let Some([sa, sb]) = &cfg.pair {
        let mut pair =
            RepresentingPair::for_symbol(&h, sa.sample(s.points())?, sb.sample(s.points())?)?;
        let ok = pair.check_contractive(&s)?;
        let v = s.column_contractive(&pair)?;
        r.set("column_min_eigenvalue", v.min_eigenvalue);
        r.check(
            "column-contractive",
            ok,
            format!(
                "λ_min(K − D_a K D_aᴴ − D_b K D_bᴴ) = {:e}",
                v.min_eigenvalue
            ),
        );
    }
    Ok(())
}

fn approx(cfg: &ExperimentConfig, r: &mut Report) -> CliResult<()> {
    let s = space(cfg)?;
    if s.kernel_name() != "szego" {
        return Err(CliError::Config("approx runs on the Szegő kernel".into()));
    }
    let m = cfg.grid_size.unwrap_or(1024);
    let eps = cfg
        .eps
        .ok_or_else(|| CliError::Config("approx needs \"eps\"".into()))?;
    let sym = cfg.symbol()?;
    let mate = pythagorean_mate(&sym.boundary(m)?)?;
    let target: Vec<Complex64> = cfg
        .target
        .as_ref()
        .ok_or_else(|| CliError::Config("approx needs \"target\" coefficients".into()))?
        .iter()
        .map(|[re, im]| Complex64::new(*re, *im))
        .collect();
    let f = DiskFunction::from_coeffs(target.clone(), m)?;
    let tf = tstar_solve(&mate, &f, target.len().max(2) - 1)?;
    r.set("tstar_residual", tf.residual);
    r.set("tstar_f", complex_vec_json(tf.g.coeffs()));

    let zs = s.points().disk_coords();
    let h = sym.sample(s.points())?;
    let fv: Vec<Complex64> = zs.iter().map(|z| f.eval(*z)).collect();
    let tfv: Vec<Complex64> = zs.iter().map(|z| tf.g.eval(*z)).collect();
    let all: Vec<usize> = (0..s.len()).collect();
    let best = s.hb_best_approx(&h, &fv, &tfv, f.norm_sq() + tf.g.norm_sq(), &all)?;
    r.set("best_kernel_span_error", best.error_sq.max(0.0).sqrt());

    match constructive_hb_approx(&mate, &f, &tf.g, eps, &s) {
        Ok(c) => {
            r.set("unit_index", c.n);
            r.set("column_norm", c.column_norm);
            r.set("g1_error", c.g1_error);
            r.set("g2_error", c.g2_error);
            r.set("g_error", c.g_error);
            r.set("achieved_error", c.achieved_error);
            r.set("bound", c.bound);
            r.set("coefficients", complex_vec_json(&c.coefficients));
            r.check(
                "six-eps",
                c.achieved_error <= c.bound,
                format!("{:.3e} ≤ {:e}", c.achieved_error, c.bound),
            );
            let rows: Vec<Vec<f64>> = c
                .unit_steps
                .iter()
                .map(|u| vec![u.n, u.g1_error, u.g2_error])
                .collect();
            r.table(
                "unit_steps",
                table_csv(&["n", "g1_error", "g2_error"], &rows)?,
            );
        }
        Err(cnplab::Error::NotAchieved { stage, detail }) => {
            r.set("failed_stage", stage);
            r.check("six-eps", false, detail);
        }
        Err(e) => return Err(e.into()),
    }
    Ok(())
}

fn mate(cfg: &ExperimentConfig, r: &mut Report) -> CliResult<()> {
    let sym = cfg.symbol()?;
    let m = match sym {
        crate::symbols::SymbolSpec::Table(t) => t.table.len(),
        _ => cfg.grid_size.unwrap_or(4096),
    };
    let h = sym.boundary(m)?;
    let s = pythagorean_mate(&h)?;
    let pyth = s.pythagorean_residual();
    let mut modulus: f64 = 0.0;
    let mut rows = Vec::with_capacity(m);
    for (j, ((a, b), h)) in s.a.grid().iter().zip(s.b.grid()).zip(&h).enumerate() {
        let finite = h.re.is_finite() && h.im.is_finite();
        let want = if finite {
            1.0 / (1.0 + h.norm_sqr())
        } else {
            0.0
        };
        modulus = modulus.max((a.norm_sqr() - want).abs());
        let abs_h = if finite { h.norm() } else { f64::INFINITY };
        rows.push(vec![
            j as f64,
            2.0 * PI * j as f64 / m as f64,
            a.norm(),
            b.norm(),
            abs_h,
        ]);
    }
    r.set("grid_size", m);
    r.set("pythagorean_residual", pyth);
    r.set("modulus_residual", modulus);
    r.set("a0", complex_json(s.a.eval(Complex64::new(0.0, 0.0))));
    r.set("b0", complex_json(s.b.eval(Complex64::new(0.0, 0.0))));
    r.check(
        "pythagorean",
        pyth <= 1e-8,
        format!("max ||a|²+|b|²−1| = {pyth:.1e} ≤ 1e-8"),
    );
    r.check(
        "outer-modulus",
        modulus <= 1e-8,
        format!("max ||a|² − 1/(1+|h|²)| = {modulus:.1e} ≤ 1e-8"),
    );
    r.table(
        "boundary",
        table_csv(&["j", "theta", "abs_a", "abs_b", "abs_h"], &rows)?,
    );
    Ok(())
}

fn counterexample(cfg: &ExperimentConfig, r: &mut Report) -> CliResult<()> {
    let mut exact = true;
    let mut monomials = Vec::new();
    for n in 0..30u32 {
        let v = da_norm_sq(&MonomialPoly::monomial(
            vec![n, 1],
            Complex64::new(1.0, 0.0),
        )?)?;
        exact &= v == 1.0 / f64::from(n + 1);
        monomials.push(vec![f64::from(n), v]);
    }
    r.check(
        "monomial-norms",
        exact,
        "‖z₂ z₁ⁿ‖² = 1/(n+1) exactly for n ≤ 29",
    );

    let degrees = cfg
        .degrees
        .clone()
        .unwrap_or_else(|| vec![100, 1000, 10000]);
    let bound = PI * PI / 6.0 + 1e-9;
    let mut rows = Vec::new();
    let mut out = Vec::new();
    for &big_n in &degrees {
        let cs: Vec<Complex64> = (0..=big_n)
            .map(|k| Complex64::new(1.0 / (k as f64 + 1.0).sqrt(), 0.0))
            .collect();
        let g = counterexample_growth(&cs);
        let floor = ((big_n + 1) as f64).ln() - 1.0;
        r.check(
            format!("divergence-{big_n}"),
            g.g_norm_sq > floor && g.f1_norm_sq <= bound,
            format!(
                "‖P_N g‖² = {:.6} > {floor:.6}, ‖f₁‖² = {:.9} ≤ π²/6",
                g.g_norm_sq, g.f1_norm_sq
            ),
        );
        out.push(json!({"n": big_n, "g_norm_sq": g.g_norm_sq, "f1_norm_sq": g.f1_norm_sq}));
        rows.push(vec![big_n as f64, g.g_norm_sq, g.f1_norm_sq, floor]);
    }
    r.set("partial_sums", Value::Array(out));
    r.table("monomial_norms", table_csv(&["n", "norm_sq"], &monomials)?);
    r.table(
        "partial_sums",
        table_csv(&["n", "g_norm_sq", "f1_norm_sq", "log_floor"], &rows)?,
    );
    Ok(())
}

fn hyponormal(cfg: &ExperimentConfig, r: &mut Report) -> CliResult<()> {
    let dim = cfg.dim.unwrap_or(2);
    let cap = cfg.cap.unwrap_or(6);
    let phi = match &cfg.phi {
        None => MonomialPoly::coordinate(dim, 0)?,
        Some(terms) => terms.iter().try_fold(MonomialPoly::zero(dim), |acc, t| {
            acc.add(&MonomialPoly::monomial(
                t.alpha.clone(),
                Complex64::new(t.coeff[0], t.coeff[1]),
            )?)
        })?,
    };
    let mut rows = Vec::new();
    for c in 0..=cap {
        rows.push(vec![c as f64, hyponormality_gap(&phi, c)?]);
    }
    let gap = rows.last().expect("cap ≥ 0")[1];
    r.set("gap", gap);
    // Coordinates and constants have a nonnegative gap on every truncation.
    let terms = phi.terms();
    let simple = terms.len() <= 1 && terms.keys().all(|a| a.iter().sum::<u32>() <= 1);
    if simple {
        let worst = rows.iter().map(|row| row[1]).fold(f64::INFINITY, f64::min);
        r.check(
            "nonnegative-gap",
            worst >= -1e-12,
            format!("min gap over caps 0..={cap}: {worst:e}"),
        );
    }
    r.table("gap", table_csv(&["cap", "gap"], &rows)?);
    Ok(())
}

fn growth(cfg: &ExperimentConfig, r: &mut Report) -> CliResult<()> {
    let pts = cfg.point_set()?;
    let lm = cfg.symbol()?.log_modulus(&pts)?;
    let g = growth_certificate(&pts, &lm)?;
    r.set("per_point", g.per_point.clone());
    r.set("max", g.max);
    r.set("nondecreasing", g.nondecreasing);
    let expect = cfg.expect();
    if let Some(want) = &expect.growth {
        let ok = want.len() == g.per_point.len()
            && g.per_point
                .iter()
                .zip(want)
                .all(|(got, w)| close(*got, *w, expect.tol()));
        r.check(
            "growth-constants",
            ok,
            format!("{:?} vs {want:?} ± {:e}", g.per_point, expect.tol()),
        );
    }
    let rows: Vec<Vec<f64>> = pts
        .points()
        .iter()
        .zip(&lm)
        .zip(&g.per_point)
        .enumerate()
        .map(|(i, ((p, l), c))| vec![i as f64, p.z().norm(), *l, *c])
        .collect();
    r.table(
        "growth",
        table_csv(&["index", "radius", "log_abs_h", "c"], &rows)?,
    );
    Ok(())
}
