use num_rational::BigRational;
use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use qgraph_core::arith::parse_rational;
use qgraph_core::coloring::{
    build_coloring, clique_upper, hyperbola_annulus, p_table, simplex_clique, sphere_annulus_with, verify_proper,
    AnnulusRadii, ColoringScheme, DifferenceSet, P_TABLE_HEADER,
};
use qgraph_core::localfield::PadicNumber;
use qgraph_core::oscint::{
    j1_bruteforce_cost, j1_bruteforce_sum, j1_exact_sum, padic_mu_hat_rational, real_mu_hat, PadicChoppedMeasure,
};
use qgraph_core::qform::{classify as classify_form, parse_form, ClassifyReport, Isotropy, Place};
use qgraph_core::regular::{compute_cn, random_quadruples, regular_check as check_quadruples, DetSumRecord};
use qgraph_core::spectral::{
    padic_analytic_bound, padic_chopped_bound, real_analytic_bound, real_chopped_bound, SpectralBoundReport, CSV_HEADER,
};
use qgraph_core::Error;

use crate::config::RunConfig;
use crate::output::Report;
use crate::{CliError, DiffArgs};

type Res = Result<Report, CliError>;

fn parse_place(s: &str) -> Result<Place, CliError> {
    Ok(s.trim().parse::<Place>()?)
}

#[derive(Serialize)]
struct BoundRow {
    #[serde(rename = "T")]
    t: f64,
    analytic_bound: f64,
}

#[derive(Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
enum Consequence {
    /// Anisotropic: an explicit coloring with finitely many Borel colors.
    FiniteColoring { colors: String, scheme: ColoringScheme },
    /// Anisotropic and `Q` never takes the value 1: the graph has no edges.
    NoEdges { colors: u32 },
    /// Isotropic: the chromatic number is infinite; the bound grows with `T`.
    Unbounded { bound_table: Vec<BoundRow>, note: String },
    /// Global form: the verdict comes from the completions.
    Global { anisotropic_at: Option<Place>, note: String },
}

#[derive(Serialize)]
struct ClassifyOutput {
    classification: ClassifyReport,
    consequence: Consequence,
}

pub fn classify(cfg: &RunConfig, form: &str) -> Res {
    let q = parse_form(form)?;
    let report = classify_form(&q)?;
    let consequence = match (q.place(), report.verdict) {
        (Place::Global, _) => {
            let w = report.global.as_ref().and_then(|g| g.witness);
            let note = match w {
                Some(pl) => format!("anisotropic over {pl}, so anisotropic over Q"),
                None => "isotropic at every place, hence isotropic over Q".into(),
            };
            Consequence::Global { anisotropic_at: w, note }
        }
        (_, Isotropy::Anisotropic) => match sphere_annulus_with(&q, cfg.annulus_samples, cfg.seed) {
            Ok(radii) => {
                let scheme = build_coloring(&radii, q.dim())?;
                Consequence::FiniteColoring { colors: scheme.colors.to_string(), scheme }
            }
            Err(Error::EmptySphere) => Consequence::NoEdges { colors: 1 },
            Err(e) => return Err(e.into()),
        },
        (place, Isotropy::Isotropic) => {
            let (bound_table, note) = match place {
                Place::Real => (
                    [5.0, 10.0, 20.0, 40.0].iter().map(|&t| BoundRow { t, analytic_bound: real_analytic_bound(t) }).collect(),
                    "chi >= 1 + T/(8 sqrt(2/pi)) for every T, so the Borel chromatic number is infinite".to_string(),
                ),
                Place::Padic(p) if p != 2 => (
                    (1..=4).map(|t| BoundRow { t: t as f64, analytic_bound: padic_analytic_bound(t) }).collect(),
                    "chi >= 1 + (2T+1)/4 for every T, so the Borel chromatic number is infinite".to_string(),
                ),
                other => (
                    Vec::new(),
                    format!("isotropic over {other}: the Borel chromatic number is infinite (no numeric table is computed at this place)"),
                ),
            };
            Consequence::Unbounded { bound_table, note }
        }
    };
    Ok(Report::new("classify", ClassifyOutput { classification: report, consequence })?.seeded(cfg.seed))
}

pub fn bound(cfg: &RunConfig, place: &str, ts: &[f64]) -> Res {
    let place = parse_place(place)?;
    let reports: Vec<SpectralBoundReport> = ts
        .iter()
        .map(|&t| match place {
            Place::Real => Ok(real_chopped_bound(t, &cfg.grid_spec())?),
            Place::Padic(p) => {
                if !(t >= 1.0 && t.fract() == 0.0) {
                    return Err(CliError::Usage(format!("p-adic T must be a positive integer, got {t}")));
                }
                let t = t as u32;
                Ok(padic_chopped_bound(p, t, &cfg.corpus_spec(t))?)
            }
            other => Err(CliError::Usage(format!("spectral bounds are computed over R or Qp:<p>, not {other}"))),
        })
        .collect::<Result<_, _>>()?;
    let mut csv = String::from(CSV_HEADER);
    csv.push('\n');
    for r in &reports {
        csv.push_str(&r.csv_row());
        csv.push('\n');
    }
    Ok(Report::new("bound", serde_json::json!({ "reports": reports }))?.with_csv(csv))
}

#[derive(Serialize)]
struct PadicFourier {
    place: Place,
    #[serde(rename = "T")]
    t: u32,
    x: String,
    y: String,
    /// `J₁` as a combination of roots of unity.
    j1: String,
    j1_value: f64,
    normalizer: String,
    mu_hat: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    mu_hat_exact: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    check: Option<OracleCheck>,
}

#[derive(Serialize)]
struct OracleCheck {
    oracle: String,
    agree: bool,
    verdict: String,
}

fn rational_arg(s: Option<&str>, name: &str) -> Result<BigRational, CliError> {
    let s = s.ok_or_else(|| CliError::Usage(format!("--{name} is required")))?;
    Ok(parse_rational(s)?)
}

fn random_padic_pair(cfg: &RunConfig, p: u64, t: u32) -> Result<(PadicNumber, PadicNumber), CliError> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let r = t as i64 + 2;
    let m = p.checked_pow(8).ok_or_else(|| CliError::Usage(format!("prime {p} too large")))?;
    let draw = |rng: &mut ChaCha8Rng| -> Result<PadicNumber, CliError> {
        let v = rng.random_range(-r..=r + 1);
        if v == r + 1 {
            return Ok(PadicNumber::zero(p));
        }
        let u = loop {
            let u = rng.random_range(1..m);
            if u % p != 0 {
                break u;
            }
        };
        Ok(PadicNumber::from_parts(p, v, &u.into(), cfg.precision)?)
    };
    for _ in 0..10_000 {
        let (x, y) = (draw(&mut rng)?, draw(&mut rng)?);
        if j1_bruteforce_cost(&x, &y, t).is_some_and(|c| c <= cfg.oracle_budget) {
            return Ok((x, y));
        }
    }
    Err(Error::SearchExhausted("no random pair within the oracle budget".into()).into())
}

pub fn fourier(cfg: &RunConfig, place: &str, t: f64, x: Option<&str>, y: Option<&str>, check: bool, random: bool) -> Res {
    match parse_place(place)? {
        Place::Real => {
            if check || random {
                return Err(CliError::Usage("--check and --random apply to p-adic places only".into()));
            }
            let real = |s: Option<&str>, name: &str| -> Result<f64, CliError> {
                let s = s.ok_or_else(|| CliError::Usage(format!("--{name} is required")))?;
                s.trim().parse::<f64>().or_else(|_| {
                    Ok(parse_rational(s)?.to_f64().unwrap_or(f64::NAN))
                })
            };
            let (xv, yv) = (real(x, "x")?, real(y, "y")?);
            let v = real_mu_hat(t, xv, yv, cfg.tol)?;
            Report::new(
                "fourier",
                serde_json::json!({
                    "place": "R", "T": t, "x": xv, "y": yv, "tol": cfg.tol,
                    "mu_hat": v.value, "error_estimate": v.error_estimate, "panels": v.panels,
                }),
            )
        }
        Place::Padic(p) => {
            if !(t >= 1.0 && t.fract() == 0.0) {
                return Err(CliError::Usage(format!("p-adic T must be a positive integer, got {t}")));
            }
            let t = t as u32;
            let measure = PadicChoppedMeasure::new(p, t)?;
            let (xp, yp) = if random {
                random_padic_pair(cfg, p, t)?
            } else {
                let to_p = |r: BigRational| PadicNumber::from_ratio(&r, p, cfg.precision);
                (to_p(rational_arg(x, "x")?)?, to_p(rational_arg(y, "y")?)?)
            };
            let j1 = j1_exact_sum(&xp, &yp, t)?;
            let l = measure.normalizer();
            let j1_value = j1.value().re;
            let mu_hat = qgraph_core::oscint::padic_mu_hat(&xp, &yp, t)?;
            let mu_hat_exact = padic_mu_hat_rational(&xp, &yp, t)?.map(|r| r.to_string());
            let check = if check || random {
                let oracle = j1_bruteforce_sum(&xp, &yp, t, cfg.oracle_budget)?;
                let agree = oracle.exact_eq(&j1);
                let verdict = if agree { "exact == oracle" } else { "exact != oracle" }.to_string();
                Some(OracleCheck { oracle: oracle.to_string(), agree, verdict })
            } else {
                None
            };
            let failed = check.as_ref().is_some_and(|c| !c.agree);
            let out = PadicFourier {
                place: Place::Padic(p),
                t,
                x: xp.to_string(),
                y: yp.to_string(),
                j1: j1.to_string(),
                j1_value,
                normalizer: l.to_string(),
                mu_hat,
                mu_hat_exact,
                check,
            };
            Ok(Report::new("fourier", out)?.seeded(cfg.seed).fail_if(failed, "exact J1 disagrees with the oracle"))
        }
        other => Err(CliError::Usage(format!("no chopped hyperbola measure over {other}"))),
    }
}

fn difference_set(cfg: &RunConfig, d: &DiffArgs) -> Result<(DifferenceSet, AnnulusRadii), CliError> {
    if d.hyperbola {
        let place = parse_place(d.place.as_deref().unwrap_or_default())?;
        let t = d.t.unwrap_or_default();
        let radii = hyperbola_annulus(place, t)?;
        return Ok((DifferenceSet::ChoppedHyperbola { place, t }, radii));
    }
    let form = d.form.as_deref().ok_or_else(|| CliError::Usage("give --form or --hyperbola".into()))?;
    let q = parse_form(form)?;
    let radii = sphere_annulus_with(&q, cfg.annulus_samples, cfg.seed)?;
    Ok((DifferenceSet::Sphere(q), radii))
}

pub fn color_build(cfg: &RunConfig, d: &DiffArgs) -> Res {
    let (diffs, radii) = difference_set(cfg, d)?;
    let scheme = build_coloring(&radii, diffs.dim())?;
    Ok(Report::new(
        "color build",
        serde_json::json!({ "difference_set": diffs.describe(), "annulus_samples": cfg.annulus_samples, "scheme": scheme }),
    )?
    .seeded(cfg.seed))
}

pub fn color_verify(cfg: &RunConfig, d: &DiffArgs, samples: usize, undersized: bool) -> Res {
    if samples == 0 {
        return Err(CliError::Usage("--samples must be positive".into()));
    }
    let (diffs, radii) = difference_set(cfg, d)?;
    let mut scheme = build_coloring(&radii, diffs.dim())?;
    if undersized {
        scheme = scheme.undersized()?;
    }
    let report = verify_proper(&scheme, &diffs, samples, cfg.seed)?;
    let (failed, why) = if undersized {
        (report.violations == 0, "negative control found no violations")
    } else {
        (report.violations > 0, "sampled edge received a single color")
    };
    Ok(Report::new(
        "color verify",
        serde_json::json!({ "negative_control": undersized, "scheme": scheme, "verification": report }),
    )?
    .seeded(cfg.seed)
    .fail_if(failed, why))
}

pub fn clique(n: usize) -> Res {
    let cert = simplex_clique(n)?;
    let ok = cert.verify(1e-9) && cert.size() == clique_upper(n);
    Ok(Report::new(
        "clique",
        serde_json::json!({ "clique_upper": clique_upper(n), "tolerance": 1e-9, "verified": ok, "certificate": cert }),
    )?
    .fail_if(!ok, "clique certificate does not verify"))
}

pub fn regular_check(cfg: &RunConfig, samples: usize, show: usize) -> Res {
    let rep = check_quadruples(samples, cfg.seed);
    let records: Vec<DetSumRecord> = random_quadruples(show.min(samples), cfg.seed)
        .into_iter()
        .map(|[x1, y1, x2, y2]| DetSumRecord::check(x1, y1, x2, y2))
        .collect::<Result<_, _>>()?;
    let failed = rep.failures > 0;
    Ok(Report::new("regular check", serde_json::json!({ "summary": rep, "records": records }))?
        .seeded(cfg.seed)
        .fail_if(failed, "determinant identity or adjacency rule failed"))
}

pub fn regular_cn(n: u32) -> Res {
    let c = compute_cn(n)?;
    Report::new("regular cn", serde_json::json!({ "n": n, "C_n": c.to_string() }))
}

pub fn table(cfg: &RunConfig, max_p: u64, samples: usize) -> Res {
    let rows = p_table(max_p, samples, cfg.seed)?;
    let mut csv = String::from(P_TABLE_HEADER);
    csv.push('\n');
    for r in &rows {
        csv.push_str(&r.csv_row());
        csv.push('\n');
    }
    Ok(Report::new(
        "table",
        serde_json::json!({ "form": "x^2+y^2", "annulus_samples": samples, "rows": rows }),
    )?
    .seeded(cfg.seed)
    .with_csv(csv))
}
