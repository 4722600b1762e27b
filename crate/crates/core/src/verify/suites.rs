//! Corpus construction and the individual suites.

use super::continuity::continuity_probe;
use super::{Record, Relation, Slack};
use crate::asa::{ball_value, eval_asa, eval_lp, homogeneity_check, lp_function};
use crate::config::QuadratureConfig;
use crate::error::{Error, Result};
use crate::extremal::{certificate_rows, inner_max_bounds, CertificateRow, Theorem};
use crate::funclass::{classify, AdmissibleFunction, FunctionClassReport, FunctionSpec, DEFAULT_TOL};
use crate::geometry::{BodySpec, ConvexBody, Polygon2D, Transform};
use crate::numeric::log_grid;
use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use std::f64::consts::FRAC_PI_2;

const N: usize = 2;
const SCALES_DOWN: [f64; 3] = [0.25, 0.5, 0.9];
const SCALES_UP: [f64; 3] = [1.1, 2.0, 4.0];
const LP_EXPONENTS: [f64; 4] = [-1.0, 0.5, 1.0, 2.0];
const LAMBDAS: [f64; 2] = [0.5, 2.0];
const DUALITY_TOL: f64 = 1e-4;
const IDENTITY_TOL: f64 = 1e-6;
const CONTINUITY_EPS: [f64; 4] = [0.2, 0.1, 0.05, 0.01];
/// Random bodies added to the continuity fixtures.
const CONTINUITY_RANDOM: usize = 3;

/// A corpus body with its polar, or the reason it could not be built.
pub(crate) struct Entry {
    pub index: usize,
    pub spec: BodySpec,
    pub data: std::result::Result<(ConvexBody, ConvexBody), String>,
    pub smooth: bool,
}

impl Entry {
    fn build(index: usize, spec: BodySpec, cfg: &QuadratureConfig) -> Self {
        let data = ConvexBody::from_spec(&spec, cfg)
            .and_then(|k| {
                let p = k.polar(cfg)?;
                Ok((k, p))
            })
            .map_err(|e| e.to_string());
        let smooth = !matches!(spec, BodySpec::Polygon { .. });
        Entry { index, spec, data, smooth }
    }

    /// Runs `f` on the body and its polar, or reports every check in
    /// `ids` as failed.
    fn with(&self, ids: &[&str], f: impl FnOnce(&ConvexBody, &ConvexBody) -> Vec<Record>) -> Vec<Record> {
        match &self.data {
            Ok((k, p)) => f(k, p),
            Err(msg) => ids
                .iter()
                .map(|id| {
                    Record::failed(id, self.index, &self.spec, None, &Error::InternalConsistency(msg.clone()))
                })
                .collect(),
        }
    }
}

pub(crate) struct Func {
    pub f: AdmissibleFunction,
    pub report: FunctionClassReport,
}

impl Func {
    fn new(f: AdmissibleFunction) -> Result<Self> {
        let report = classify(&f, N, DEFAULT_TOL)?;
        Ok(Func { f, report })
    }

    fn spec(&self) -> Option<&FunctionSpec> {
        self.f.spec()
    }
}

pub(crate) struct Context<'a> {
    cfg: &'a QuadratureConfig,
    random: Vec<Entry>,
    fixtures: Vec<Entry>,
    phi: Vec<Func>,
    psi: Vec<Func>,
}

fn fixture_specs() -> Vec<BodySpec> {
    let ellipse = |a: f64, b: f64| BodySpec::Ellipsoid {
        n: 2,
        axes: vec![a, b],
        rotation_angle: Some(0.0),
        rotation: None,
    };
    let pentagon = Polygon2D::regular(5, 1.0, FRAC_PI_2).expect("regular pentagon");
    vec![
        BodySpec::Ball { n: 2, radius: 1.0 },
        ellipse(2.0, 0.5),
        ellipse(3.0, 1.0 / 3.0),
        BodySpec::Polygon {
            vertices: vec![[1.0, 1.0], [-1.0, 1.0], [-1.0, -1.0], [1.0, -1.0]],
        },
        BodySpec::Polygon {
            vertices: pentagon.vertices().to_vec(),
        },
    ]
}

/// Concave functions, then convex ones.
fn function_sets() -> Result<(Vec<AdmissibleFunction>, Vec<AdmissibleFunction>)> {
    let arctan = AdmissibleFunction::arctan(2)?;
    let phi = vec![
        AdmissibleFunction::power_phi(N, 1.0)?,
        AdmissibleFunction::power_phi(N, 0.5)?,
        AdmissibleFunction::power_phi(N, 4.0)?,
        arctan.dual(),
        arctan,
        AdmissibleFunction::arctan(3)?,
        AdmissibleFunction::arctan(4)?,
        AdmissibleFunction::log1p(),
    ];
    let psi = vec![
        AdmissibleFunction::power_psi(N, -1.0)?,
        AdmissibleFunction::power_psi(N, -0.5)?,
        AdmissibleFunction::log_recip(),
    ];
    Ok((phi, psi))
}

impl<'a> Context<'a> {
    pub fn new(seed: u64, trials: usize, cfg: &'a QuadratureConfig) -> Result<Self> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let seeds: Vec<u64> = (0..trials).map(|_| rng.random()).collect();
        let random = seeds
            .into_par_iter()
            .enumerate()
            .map(|(i, s)| {
                let spec = BodySpec::Random {
                    seed: s,
                    kmax: 6,
                    alpha: 0.25,
                };
                Entry::build(i, spec, cfg)
            })
            .collect();
        let fixtures = fixture_specs()
            .into_iter()
            .enumerate()
            .map(|(j, spec)| Entry::build(trials + j, spec, cfg))
            .collect();
        let (phi, psi) = function_sets()?;
        Ok(Context {
            cfg,
            random,
            fixtures,
            phi: phi.into_iter().map(Func::new).collect::<Result<_>>()?,
            psi: psi.into_iter().map(Func::new).collect::<Result<_>>()?,
        })
    }

    pub fn run(&self, suite: &str) -> Vec<Record> {
        match suite {
            "isoperimetric" => self.isoperimetric(),
            "duality" => self.duality(),
            "scaling" => self.scaling(),
            "ball_monotonicity" => self.ball_monotonicity(),
            "bs_type" => self.products(Theorem::BsType),
            "inverse_santalo" => self.products(Theorem::InverseSantalo),
            "lp_consistency" => self.lp_consistency(),
            "lp_homogeneity" => self.lp_homogeneity(),
            "linfty" => self.linfty(),
            "continuity" => self.continuity(),
            _ => unreachable!("suite names are validated by run_suite"),
        }
    }

    fn smooth(&self) -> impl Iterator<Item = &Entry> {
        self.random.iter().chain(self.fixtures.iter().filter(|e| e.smooth))
    }

    fn functions(&self) -> impl Iterator<Item = &Func> {
        self.phi.iter().chain(&self.psi)
    }

    /// Every function on every entry, in parallel over entries.
    fn over<'e>(
        &self,
        entries: impl Iterator<Item = &'e Entry>,
        ids: &[&str],
        per_body: impl Fn(&Entry, &ConvexBody, &ConvexBody) -> Vec<Record> + Sync,
    ) -> Vec<Record> {
        let entries: Vec<&Entry> = entries.collect();
        entries
            .into_par_iter()
            .flat_map_iter(|e| e.with(ids, |k, p| per_body(e, k, p)))
            .collect()
    }

    fn isoperimetric(&self) -> Vec<Record> {
        let ids = ["isoperimetric_phi", "isoperimetric_psi"];
        let all = self.random.iter().chain(&self.fixtures);
        self.over(all, &ids, |e, k, _| {
            let mut out = Vec::new();
            for (id, set, rel) in [(ids[0], &self.phi, Relation::Le), (ids[1], &self.psi, Relation::Ge)] {
                for g in set {
                    let rec = match eval_asa(k, &g.f, self.cfg) {
                        Ok(v) => {
                            let rhs = ball_value(N, k.vrad(), &g.f);
                            let r = Record::check(id, e.index, &e.spec, g.spec(), v.as_f64(), rhs, rel, Slack::DEFAULT);
                            if e.smooth {
                                r
                            } else {
                                r.with_note("polytope convention")
                            }
                        }
                        Err(err) => Record::failed(id, e.index, &e.spec, g.spec(), &err),
                    };
                    out.push(rec);
                }
            }
            out
        })
    }

    fn duality(&self) -> Vec<Record> {
        let id = "duality";
        self.over(self.random.iter(), &[id], |e, k, p| {
            self.functions()
                .map(|g| {
                    let pair = eval_asa(k, &g.f, self.cfg)
                        .and_then(|a| Ok((a.as_f64(), eval_asa(p, &g.f.dual(), self.cfg)?.as_f64())));
                    match pair {
                        Ok((own, dual)) => Record::check(
                            id,
                            e.index,
                            &e.spec,
                            g.spec(),
                            dual,
                            own,
                            Relation::Near(DUALITY_TOL),
                            Slack::NONE,
                        ),
                        Err(err) => Record::failed(id, e.index, &e.spec, g.spec(), &err),
                    }
                })
                .collect()
        })
    }

    fn scaling(&self) -> Vec<Record> {
        let ids = ["scaling_i", "scaling_ii", "scaling_iii", "scaling_iv"];
        self.over(self.random.iter(), &ids, |e, k, _| {
            let mut out = Vec::new();
            for (set, convex) in [(&self.phi, false), (&self.psi, true)] {
                for g in set {
                    let base = match eval_asa(k, &g.f, self.cfg) {
                        Ok(v) => v.as_f64(),
                        Err(err) => {
                            out.push(Record::failed(ids[0], e.index, &e.spec, g.spec(), &err));
                            continue;
                        }
                    };
                    let cases = SCALES_DOWN.iter().map(|&s| (s, true)).chain(SCALES_UP.iter().map(|&s| (s, false)));
                    for (s, down) in cases {
                        // as_φ(rK) ≥ rⁿ as_φ(K) for r ≤ 1, reversed for R ≥ 1 and for ψ
                        let (id, rel) = match (convex, down) {
                            (false, true) => (ids[0], Relation::Ge),
                            (false, false) => (ids[1], Relation::Le),
                            (true, true) => (ids[2], Relation::Le),
                            (true, false) => (ids[3], Relation::Ge),
                        };
                        let scaled = k
                            .transform(Transform::Scale(s), self.cfg)
                            .and_then(|ks| eval_asa(&ks, &g.f, self.cfg));
                        out.push(match scaled {
                            Ok(v) => Record::check(
                                id,
                                e.index,
                                &e.spec,
                                g.spec(),
                                v.as_f64(),
                                s.powi(N as i32) * base,
                                rel,
                                Slack::DEFAULT,
                            )
                            .with_note(format!("scale={s}")),
                            Err(err) => Record::failed(id, e.index, &e.spec, g.spec(), &err),
                        });
                    }
                }
            }
            out
        })
    }

    fn ball_monotonicity(&self) -> Vec<Record> {
        let radii = log_grid(0.25, 4.0, 17);
        let mut out = Vec::new();
        for g in self.phi.iter().filter(|g| g.report.in_conc_minus) {
            let dual = g.f.dual();
            for (j, w) in radii.windows(2).enumerate() {
                let body = BodySpec::Ball { n: N, radius: w[1] };
                let note = format!("r={} -> {}", w[0], w[1]);
                out.push(
                    Record::check(
                        "ball_monotonicity_phi",
                        j,
                        &body,
                        g.spec(),
                        ball_value(N, w[1], &g.f),
                        ball_value(N, w[0], &g.f),
                        Relation::Ge,
                        Slack::CLOSED_FORM,
                    )
                    .with_note(note.clone()),
                );
                out.push(
                    Record::check(
                        "ball_monotonicity_phi_star",
                        j,
                        &body,
                        g.spec(),
                        ball_value(N, w[1], &dual),
                        ball_value(N, w[0], &dual),
                        Relation::Le,
                        Slack::CLOSED_FORM,
                    )
                    .with_note(note),
                );
            }
        }
        // Conc⁻ and Conc⁺ are exchanged by duality, as sampled classes
        let unit = BodySpec::Ball { n: N, radius: 1.0 };
        for (j, g) in self.phi.iter().enumerate() {
            let flag = |b: bool| if b { 1.0 } else { 0.0 };
            match classify(&g.f.dual(), N, DEFAULT_TOL) {
                Ok(d) => {
                    for (id, a, b) in [
                        ("class_duality_minus", g.report.in_conc_minus, d.in_conc_plus),
                        ("class_duality_plus", g.report.in_conc_plus, d.in_conc_minus),
                    ] {
                        out.push(Record::check(id, j, &unit, g.spec(), flag(a), flag(b), Relation::Identical, Slack::NONE));
                    }
                }
                Err(err) => out.push(Record::failed("class_duality_minus", j, &unit, g.spec(), &err)),
            }
        }
        out
    }

    fn products(&self, theorem: Theorem) -> Vec<Record> {
        let funcs: Vec<&Func> = match theorem {
            Theorem::BsType => self
                .phi
                .iter()
                .filter(|g| g.report.in_conc_minus && g.report.submultiplicative)
                .collect(),
            Theorem::InverseSantalo => self.psi.iter().collect(),
        };
        let id = match theorem {
            Theorem::BsType => "bs_is_product",
            Theorem::InverseSantalo => "inverse_santalo_os_product",
        };
        self.over(self.smooth(), &[id], |e, k, p| {
            let mut out = Vec::new();
            for g in &funcs {
                match certificate_rows(k, p, &g.f, theorem, &g.report, self.cfg) {
                    Ok(rows) => out.extend(rows.into_iter().map(|r| from_row(r, e, g))),
                    Err(err) => out.push(Record::failed(id, e.index, &e.spec, g.spec(), &err)),
                }
            }
            out
        })
    }

    fn lp_consistency(&self) -> Vec<Record> {
        let ids = ["lp_same_path", "lp_is0_identity", "lp_isn_identity", "lp_is_product"];
        let sqrt = AdmissibleFunction::power_phi(N, N as f64).expect("√t");
        let one = AdmissibleFunction::power_phi(N, 0.0).expect("t⁰");
        let products: Vec<Func> = [0.5, 1.0]
            .into_iter()
            .map(|p| Func::new(AdmissibleFunction::power_phi(N, p).expect("power")).expect("classified"))
            .collect();
        self.over(self.random.iter(), &ids, |e, k, p| {
            let mut out = Vec::new();
            for &q in LP_EXPONENTS.iter().chain(&[-3.0]) {
                let pair = lp_function(N, q).and_then(|f| {
                    let direct = eval_asa(k, &f, self.cfg)?.as_f64();
                    Ok((f, eval_lp(k, q, self.cfg)?.value.as_f64(), direct))
                });
                out.push(match pair {
                    Ok((f, a, b)) => {
                        Record::check(ids[0], e.index, &e.spec, f.spec(), a, b, Relation::Identical, Slack::NONE)
                            .with_note(format!("p={q}"))
                    }
                    Err(err) => Record::failed(ids[0], e.index, &e.spec, None, &err),
                });
            }
            let n_volume = N as f64 * k.moments().volume;
            let sphere = crate::numeric::unit_sphere_area(N);
            for (id, f, target) in [(ids[1], &one, n_volume), (ids[2], &sqrt, sphere)] {
                match inner_max_bounds(k, f, self.cfg) {
                    Ok(b) => {
                        for (end, v) in [("lower", b.lower.as_f64()), ("upper", b.upper.as_f64())] {
                            out.push(
                                Record::check(id, e.index, &e.spec, f.spec(), v, target, Relation::Near(IDENTITY_TOL), Slack::NONE)
                                    .with_note(end),
                            );
                        }
                    }
                    Err(err) => out.push(Record::failed(id, e.index, &e.spec, f.spec(), &err)),
                }
            }
            for g in &products {
                match certificate_rows(k, p, &g.f, Theorem::BsType, &g.report, self.cfg) {
                    Ok(rows) => {
                        let row = rows.into_iter().find(|r| r.check == "bs_is_product").expect("product row");
                        let mut r = from_row(row, e, g);
                        r.check_id = ids[3].into();
                        out.push(r);
                    }
                    Err(err) => out.push(Record::failed(ids[3], e.index, &e.spec, g.spec(), &err)),
                }
            }
            out
        })
    }

    fn lp_homogeneity(&self) -> Vec<Record> {
        let id = "lp_homogeneity";
        self.over(self.random.iter(), &[id], |e, k, _| {
            let mut out = Vec::new();
            for &q in &LP_EXPONENTS {
                let spec = lp_function(N, q).ok().and_then(|f| f.spec().cloned());
                for &lambda in &LAMBDAS {
                    out.push(match homogeneity_check(k, q, lambda, self.cfg) {
                        Ok(ratio) => Record::check(
                            id,
                            e.index,
                            &e.spec,
                            spec.as_ref(),
                            ratio,
                            1.0,
                            Relation::Near(IDENTITY_TOL),
                            Slack::NONE,
                        )
                        .with_note(format!("p={q}, lambda={lambda}")),
                        Err(err) => Record::failed(id, e.index, &e.spec, spec.as_ref(), &err),
                    });
                }
            }
            out
        })
    }

    fn linfty(&self) -> Vec<Record> {
        let ids = ["linfty_inequality", "linfty_ellipse_identity"];
        let all = self.random.iter().chain(&self.fixtures);
        self.over(all, &ids, |e, k, _| {
            let mut out = Vec::new();
            match eval_lp(k, f64::INFINITY, self.cfg) {
                Ok(v) => {
                    let target = v.polar_identity.expect("reported for p = ∞");
                    let value = v.value.as_f64();
                    let r = Record::check(ids[0], e.index, &e.spec, None, value, target * (1.0 + IDENTITY_TOL), Relation::Le, Slack::NONE);
                    out.push(if e.smooth { r } else { r.with_note("polytope convention") });
                    if matches!(k, ConvexBody::Ball { .. } | ConvexBody::Ellipsoid(_)) {
                        out.push(
                            Record::check(ids[1], e.index, &e.spec, None, value, target, Relation::Near(DUALITY_TOL), Slack::NONE)
                                .with_note("closed form"),
                        );
                        // the same body sampled as a support function
                        let sampled = k
                            .to_support_body(self.cfg)
                            .and_then(|s| eval_lp(&ConvexBody::Support(s), f64::INFINITY, self.cfg));
                        out.push(match sampled {
                            Ok(s) => Record::check(
                                ids[1],
                                e.index,
                                &e.spec,
                                None,
                                s.value.as_f64(),
                                target,
                                Relation::Near(DUALITY_TOL),
                                Slack::NONE,
                            )
                            .with_note("quadrature"),
                            Err(err) => Record::failed(ids[1], e.index, &e.spec, None, &err),
                        });
                    }
                }
                Err(err) => out.push(Record::failed(ids[0], e.index, &e.spec, None, &err)),
            }
            out
        })
    }

    fn continuity(&self) -> Vec<Record> {
        let ids = ["continuity_shrink", "continuity_grow", "continuity_gap_monotone"];
        let funcs = [
            AdmissibleFunction::arctan(2).expect("arctan"),
            AdmissibleFunction::power_phi(N, 1.0).expect("power"),
        ];
        let entries = self.fixtures[..2].iter().chain(self.random.iter().take(CONTINUITY_RANDOM));
        self.over(entries, &ids, |e, k, _| {
            let mut out = Vec::new();
            for f in &funcs {
                let rows = match continuity_probe(k, f, &CONTINUITY_EPS, self.cfg) {
                    Ok(rows) => rows,
                    Err(err) => {
                        out.push(Record::failed(ids[0], e.index, &e.spec, f.spec(), &err));
                        continue;
                    }
                };
                let mut prev_gap: Option<f64> = None;
                for row in rows {
                    let note = format!("eps={}, hausdorff={}", row.eps, row.hausdorff.unwrap_or(f64::NAN));
                    if let (Some(s), Some(g)) = (row.shrink, row.grow) {
                        out.push(Record::check(ids[0], e.index, &e.spec, f.spec(), s[0], s[1], Relation::Le, Slack::DEFAULT).with_note(note.clone()));
                        out.push(Record::check(ids[1], e.index, &e.spec, f.spec(), g[0], g[1], Relation::Le, Slack::DEFAULT).with_note(note.clone()));
                    }
                    if let Some(gap) = row.gap {
                        if let Some(prev) = prev_gap {
                            // differences shrink with ε up to quadrature noise
                            let noise = Slack {
                                abs: IDENTITY_TOL * row.base_upper,
                                rel: 0.0,
                            };
                            out.push(Record::check(ids[2], e.index, &e.spec, f.spec(), gap, prev, Relation::Le, noise).with_note(note));
                        }
                        prev_gap = Some(gap);
                    }
                }
            }
            out
        })
    }
}

fn from_row(row: CertificateRow, e: &Entry, g: &Func) -> Record {
    Record {
        check_id: row.check,
        trial: e.index,
        body: e.spec.clone(),
        function: g.spec().cloned(),
        lhs: row.lhs,
        rhs: row.rhs,
        margin: row.margin,
        pass: row.pass,
        note: None,
    }
}
