//! Commands, the per-task context and report assembly.

use std::collections::{BTreeMap, BTreeSet};

use genkahler::clifford::{adjoint_on_section, courant, pairing};
use genkahler::coeffring::{RealField, Scalar};
use genkahler::deform::{
    bihermitian_first_order, build_torus_cp1_bivector, first_order_source, k2_membership, ks_class,
    obstruction_rank_test, solve_deformation, DeformationSeries,
};
use genkahler::gcs::{kahler_pair_check, GenMetric};
use genkahler::linalg::Matrix;
use genkahler::spinor::{induced_jpsi, is_nondegenerate, kernel_at_point, type_of_spinor_at_point, type_of_structure};
use genkahler::submanifold::{
    cubic_bivector, extends_to_projective, gamma_iso_check, group_invariant_ideal_check, induced_poisson,
    induced_structure_at, is_conormal_invariant, is_j_submanifold, is_poisson_submanifold,
};
use genkahler::{
    Clifford, Form, GCStructure, GaussRat, GenSection, ObstructionMatrix, PointForm, PolyIdeal, PolyScalar,
    Polyvector, Rational, SubmanifoldModel,
};
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Map, Value as Json};

use crate::error::{CliError, ErrorClass};
use crate::expr::{parse_value, print_form, print_poly, print_polyvector, Value, ValueKind};
use crate::scenario::{Scenario, Settings, Task};

type R<T> = Result<T, CliError>;

/// Core operations and the commands that reach them.
pub const COVERAGE: &[(&str, &[&str])] = &[
    ("eval_at", &["poisson-sub"]),
    ("ideal_membership", &["poisson-sub"]),
    ("exterior_d", &["deform", "brackets"]),
    ("interior", &["brackets"]),
    ("contract", &["brackets"]),
    ("lie_derivative", &["brackets"]),
    ("schouten", &["check-poisson", "brackets", "obstruction-rank"]),
    ("poisson_bracket", &["check-poisson"]),
    ("lefschetz_contract", &["deform"]),
    ("homotopy", &["deform"]),
    ("cl_product", &["brackets", "deform"]),
    ("spin_action", &["deform"]),
    ("adjoint_on_sections", &["brackets"]),
    ("exp_action", &["spinor-pullback", "kahler-pair"]),
    ("bch_log", &["deform"]),
    ("make_JJ", &["gcs-type", "kahler-pair"]),
    ("make_Jomega", &["gcs-type", "kahler-pair"]),
    ("make_J_beta_t", &["gcs-type", "conormal-invariant", "j-sub", "kahler-pair"]),
    ("eigenframe", &["gcs-type"]),
    ("integrability_check", &["gcs-type", "kahler-pair"]),
    ("type_at_point", &["gcs-type"]),
    ("gen_metric", &["kahler-pair"]),
    ("kahler_pair_check", &["kahler-pair"]),
    ("b_field_transform", &["gcs-type", "kahler-pair"]),
    ("kernel_at_point", &["spinor-pullback"]),
    ("is_nondegenerate", &["spinor-pullback"]),
    ("type_of_spinor_at_point", &["spinor-pullback"]),
    ("induced_Jpsi", &["spinor-pullback"]),
    ("pullback_at_point", &["spinor-pullback"]),
    ("conormal_frame", &["conormal-invariant"]),
    ("is_conormal_invariant", &["conormal-invariant"]),
    ("is_poisson_submanifold", &["poisson-sub", "spinor-pullback"]),
    ("is_J_submanifold", &["j-sub"]),
    ("induced_structure_at_point", &["j-sub"]),
    ("gamma_iso_check", &["kahler-pair"]),
    ("induced_poisson", &["poisson-sub"]),
    ("group_invariant_ideal_check", &["poisson-sub"]),
    ("extends_to_projective", &["extends-projective"]),
    ("first_order_source", &["deform"]),
    ("solve_order_k", &["deform"]),
    ("solve_deformation", &["deform", "spinor-pullback", "kahler-pair"]),
    ("k1_membership", &["deform"]),
    ("k2_membership", &["deform"]),
    ("ks_class", &["bihermitian"]),
    ("bihermitian_first_order", &["bihermitian"]),
    ("obstruction_rank_test", &["obstruction-rank"]),
    ("build_torus_cp1_bivector", &["obstruction-rank"]),
    ("parse_expr", &["*"]),
    ("run_command", &["*"]),
];

pub fn rat_string(q: &Rational) -> String {
    let (num, den) = q.to_frac_strings();
    if den == "1" {
        num
    } else {
        format!("{num}/{den}")
    }
}

pub fn gauss_json(c: &GaussRat) -> Json {
    json!({ "re": rat_string(&c.re()), "im": rat_string(&c.im()) })
}

fn point_json(p: &[Rational]) -> Json {
    Json::Array(p.iter().map(|q| Json::String(rat_string(q))).collect())
}

fn parse_rational(v: &Json) -> R<Rational> {
    match v {
        Json::Number(k) => k
            .as_i64()
            .map(|v| Rational::from_frac(v, 1))
            .ok_or_else(|| CliError::Parse(format!("`{k}` is not an integer; write fractions as \"p/q\""))),
        Json::String(s) => Rational::parse_frac(s).ok_or_else(|| CliError::Parse(format!("`{s}` is not a rational"))),
        other => Err(CliError::Parse(format!("expected a rational, found {other}"))),
    }
}

/// Mutable state of one task.
pub struct Ctx<'a> {
    scn: &'a Scenario,
    task: &'a Task,
    pub n: usize,
    pub settings: Settings,
    pub rng: ChaCha8Rng,
    pub trace: BTreeSet<&'static str>,
    inputs: Map<String, Json>,
}

pub struct Outcome {
    pub verdict: bool,
    pub details: Map<String, Json>,
}

impl<'a> Ctx<'a> {
    pub fn new(scn: &'a Scenario, task: &'a Task, index: usize, settings: Settings) -> R<Self> {
        let mut rng = ChaCha8Rng::seed_from_u64(settings.seed);
        rng.set_stream(index as u64);
        let n = match task.params.get("n") {
            Some(v) => v.as_u64().filter(|&k| (1..=8).contains(&k)).ok_or_else(|| CliError::Usage("bad `n`".into()))?
                as usize,
            None => scn.n,
        };
        let mut trace = BTreeSet::new();
        trace.insert("run_command");
        Ok(Ctx { scn, task, n, settings, rng, trace, inputs: Map::new() })
    }

    fn use_op(&mut self, op: &'static str) {
        self.trace.insert(op);
    }

    fn raw(&self, key: &str) -> Option<&'a Json> {
        self.task.params.get(key).map(|v| self.scn.resolve(v))
    }

    fn has(&self, key: &str) -> bool {
        self.task.params.contains_key(key)
    }

    fn echo(&mut self, key: &str, v: Json) {
        self.inputs.insert(key.to_string(), v);
    }

    fn parse(&mut self, text: &str) -> R<Value> {
        self.use_op("parse_expr");
        Ok(parse_value(text, self.n)?)
    }

    fn opt_value(&mut self, key: &str) -> R<Option<Value>> {
        let Some(raw) = self.raw(key) else { return Ok(None) };
        let Json::String(text) = raw else {
            return Err(CliError::Parse(format!("`{key}` must be an expression string")));
        };
        let v = self.parse(text)?;
        self.echo(key, Json::String(v.to_string()));
        Ok(Some(v))
    }

    fn value(&mut self, key: &str) -> R<Value> {
        self.opt_value(key)?.ok_or_else(|| CliError::Usage(format!("missing parameter `{key}`")))
    }

    fn opt_form(&mut self, key: &str) -> R<Option<Form>> {
        self.opt_value(key)?.map(|v| v.to_form().map_err(CliError::from)).transpose()
    }

    fn value_list(&mut self, key: &str) -> R<Option<Vec<Value>>> {
        let Some(raw) = self.raw(key) else { return Ok(None) };
        let items: Vec<&Json> = match raw {
            Json::Array(a) => a.iter().collect(),
            s @ Json::String(_) => vec![s],
            _ => return Err(CliError::Parse(format!("`{key}` must be a list of expressions"))),
        };
        let mut out = Vec::new();
        for it in items {
            match self.scn.resolve(it) {
                Json::String(text) => out.push(self.parse(text)?),
                _ => return Err(CliError::Parse(format!("`{key}` must be a list of expressions"))),
            }
        }
        self.echo(key, Json::Array(out.iter().map(|v| Json::String(v.to_string())).collect()));
        Ok(Some(out))
    }

    fn polys(&mut self, key: &str) -> R<Option<Vec<PolyScalar>>> {
        match self.value_list(key)? {
            Some(vs) => Ok(Some(vs.iter().map(|v| v.to_poly()).collect::<Result<_, _>>()?)),
            None => Ok(None),
        }
    }

    /// `beta`, or the cubic bivector `β_f` of `f` on `C³`.
    fn beta(&mut self) -> R<Polyvector> {
        if self.has("beta") {
            return Ok(self.value("beta")?.to_polyvector()?);
        }
        if self.has("f") {
            if self.n != 3 {
                return Err(CliError::Usage("`f` defines a bivector on C^3 only".into()));
            }
            let f = self.value("f")?.to_poly()?;
            let b = cubic_bivector(&f);
            self.echo("beta", Json::String(print_polyvector(&b)));
            return Ok(b);
        }
        Err(CliError::Usage("missing parameter `beta` (or `f`)".into()))
    }

    fn omega(&mut self) -> R<Form> {
        Ok(self.opt_form("omega")?.unwrap_or_else(|| Form::standard_kahler(self.n)))
    }

    fn rationals(&mut self, key: &str, default: &[(i64, i64)]) -> R<Vec<Rational>> {
        let out = match self.raw(key) {
            None => default.iter().map(|&(a, b)| Rational::from_frac(a, b)).collect(),
            Some(Json::Array(a)) => a.iter().map(parse_rational).collect::<R<Vec<_>>>()?,
            Some(v) => vec![parse_rational(v)?],
        };
        self.echo(key, point_json(&out));
        Ok(out)
    }

    fn int(&self, key: &str) -> R<Option<usize>> {
        match self.raw(key) {
            None => Ok(None),
            Some(v) => v.as_u64().map(|k| Some(k as usize)).ok_or_else(|| CliError::Usage(format!("`{key}` must be a count"))),
        }
    }

    fn samples(&self) -> R<usize> {
        Ok(self.int("samples")?.unwrap_or(self.settings.samples))
    }

    fn order(&self) -> R<usize> {
        Ok(self.int("order")?.unwrap_or(self.settings.order))
    }

    fn explicit_points(&mut self) -> R<Option<Vec<Vec<Rational>>>> {
        let Some(raw) = self.raw("points") else { return Ok(None) };
        let Json::Array(rows) = raw else {
            return Err(CliError::Parse("`points` must be a list of coordinate lists".into()));
        };
        let mut out = Vec::new();
        for r in rows {
            let Json::Array(cs) = r else {
                return Err(CliError::Parse("a point must be a list of 2n coordinates".into()));
            };
            if cs.len() != 2 * self.n {
                return Err(CliError::Usage(format!("a point needs {} real coordinates, got {}", 2 * self.n, cs.len())));
            }
            out.push(cs.iter().map(parse_rational).collect::<R<Vec<_>>>()?);
        }
        self.echo("points", Json::Array(out.iter().map(|p| point_json(p)).collect()));
        Ok(Some(out))
    }

    /// Explicit points, or random small rational points of the chart.
    fn ambient_points(&mut self) -> R<Vec<Vec<Rational>>> {
        if let Some(p) = self.explicit_points()? {
            return Ok(p);
        }
        let k = self.samples()?;
        let n = self.n;
        let rng = &mut self.rng;
        Ok((0..k)
            .map(|_| (0..2 * n).map(|_| Rational::from_frac(rng.gen_range(-4..=4), rng.gen_range(1..=3))).collect())
            .collect())
    }

    fn submanifold(&mut self) -> R<SubmanifoldModel<GaussRat>> {
        let gens = self.polys("ideal")?.ok_or_else(|| CliError::Usage("missing parameter `ideal`".into()))?;
        let n = self.n;
        let mut model = match self.int("real_codim")? {
            Some(c) => SubmanifoldModel::new(n, gens, c),
            None => SubmanifoldModel::complex(n, gens)?,
        };
        if let Some(phi) = self.polys("parametrization")? {
            model = model.with_parametrization(phi)?;
        }
        match self.explicit_points()? {
            Some(p) => model = model.with_points(p)?,
            None => {
                let k = self.samples()?;
                model = model.find_points(&mut self.rng, k, 200 * k.max(1))?;
            }
        }
        Ok(model)
    }

    /// `structure`: `beta` (default when a bivector is given), `complex` or
    /// `symplectic`, then an optional closed `bfield`.
    fn structure(&mut self) -> R<GCStructure<GaussRat>> {
        let kind = match self.raw("structure") {
            Some(Json::String(s)) => s.clone(),
            Some(_) => return Err(CliError::Usage("`structure` must be a string".into())),
            None if self.has("beta") || self.has("f") => "beta".into(),
            None => "complex".into(),
        };
        let j = match kind.as_str() {
            "beta" => {
                let b = self.beta()?;
                self.use_op("make_J_beta_t");
                GCStructure::make_j_beta_t(&b)?
            }
            "complex" => {
                self.use_op("make_JJ");
                GCStructure::make_jj(self.n)
            }
            "symplectic" => {
                let om = self.omega()?;
                self.use_op("make_Jomega");
                GCStructure::make_jomega(&om)?
            }
            other => return Err(CliError::Usage(format!("unknown structure `{other}`"))),
        };
        self.echo("structure", Json::String(kind));
        self.with_bfield(j)
    }

    fn with_bfield(&mut self, j: GCStructure<GaussRat>) -> R<GCStructure<GaussRat>> {
        match self.opt_form("bfield")? {
            Some(b) => {
                self.use_op("b_field_transform");
                Ok(j.b_field_transform(&b)?)
            }
            None => Ok(j),
        }
    }

    fn deformation(&mut self) -> R<DeformationSeries<GaussRat>> {
        let beta = self.beta()?;
        let omega = self.omega()?;
        let order = self.order()?;
        let shift = self.opt_form("shift")?;
        self.use_op("solve_deformation");
        self.use_op("solve_order_k");
        Ok(solve_deformation(&beta, &omega, order, shift.as_ref(), self.settings.degree_bound)?)
    }
}

fn indices_of(flags: &[bool], want: bool) -> Json {
    Json::Array(flags.iter().enumerate().filter(|(_, &f)| f == want).map(|(i, _)| json!(i)).collect())
}

fn check_poisson(ctx: &mut Ctx) -> R<Outcome> {
    let beta = ctx.beta()?;
    ctx.use_op("schouten");
    let s = beta.schouten(&beta)?;
    ctx.use_op("poisson_bracket");
    let mut brackets = Map::new();
    for a in 0..ctx.n {
        for b in (a + 1)..ctx.n {
            let v = beta.poisson_bracket(&PolyScalar::var(a), &PolyScalar::var(b))?;
            brackets.insert(format!("z{},z{}", a + 1, b + 1), Json::String(print_poly(ctx.n, &v)));
        }
    }
    let mut d = Map::new();
    d.insert("poisson".into(), json!(s.is_zero()));
    d.insert("schouten".into(), json!(print_polyvector(&s)));
    d.insert("brackets".into(), Json::Object(brackets));
    Ok(Outcome { verdict: s.is_zero(), details: d })
}

fn poisson_sub(ctx: &mut Ctx) -> R<Outcome> {
    let beta = ctx.beta()?;
    let gens = ctx.polys("ideal")?.ok_or_else(|| CliError::Usage("missing parameter `ideal`".into()))?;
    let ideal = PolyIdeal::new(gens.clone());
    ctx.use_op("is_poisson_submanifold");
    ctx.use_op("ideal_membership");
    let sub = is_poisson_submanifold(&beta, &ideal)?;
    let mut d = Map::new();
    d.insert("poisson_submanifold".into(), json!(sub));
    let mut verdict = sub;
    if let Some(points) = ctx.explicit_points()? {
        ctx.use_op("eval_at");
        let mut on = Vec::new();
        for p in &points {
            let mut ok = true;
            for g in &gens {
                ok &= g.eval_at(p)?.is_zero();
            }
            on.push(ok);
        }
        d.insert("on_m".into(), json!(on.iter().all(|&b| b)));
        verdict &= on.iter().all(|&b| b);
    }
    if let Some(phi) = ctx.polys("parametrization")? {
        let m = ctx.int("dim")?.unwrap_or(ctx.n - gens.len());
        ctx.use_op("induced_poisson");
        let r = induced_poisson(&beta, &phi, m)?;
        d.insert(
            "induced".into(),
            json!({
                "beta_m": print_polyvector(&r.beta_m),
                "nontrivial": r.nontrivial,
                "consistent": r.consistent,
            }),
        );
        verdict &= r.consistent;
    }
    if let Some(fields) = ctx.value_list("fields")? {
        let fields = fields.iter().map(|v| v.to_polyvector()).collect::<Result<Vec<_>, _>>()?;
        ctx.use_op("group_invariant_ideal_check");
        let inv = group_invariant_ideal_check(&fields, &ideal)?;
        d.insert("invariant".into(), json!(inv));
        verdict &= inv;
    }
    Ok(Outcome { verdict, details: d })
}

fn conormal_invariant(ctx: &mut Ctx) -> R<Outcome> {
    let j = ctx.structure()?;
    let ts = ctx.rationals("t", &[(1, 2), (1, 1), (-2, 1)])?;
    let model = ctx.submanifold()?;
    let mut d = Map::new();
    ctx.use_op("conormal_frame");
    let frame = model.conormal_frame(&model.points()[0])?;
    d.insert("conormal_rank".into(), json!(frame.len()));
    d.insert("samples".into(), json!(model.points().len()));
    ctx.use_op("is_conormal_invariant");
    let mut by_t = Vec::new();
    let mut verdict = true;
    for t in &ts {
        let r = is_conormal_invariant(&j, t, &model)?;
        verdict &= r.holds;
        by_t.push(json!({ "t": rat_string(t), "holds": r.holds, "failures": indices_of(&r.per_sample, false) }));
    }
    d.insert("by_t".into(), Json::Array(by_t));
    d.insert("holds".into(), json!(verdict));
    if !ctx.has("points") {
        d.insert("points".into(), Json::Array(model.points().iter().map(|p| point_json(p)).collect()));
    }
    Ok(Outcome { verdict, details: d })
}

fn j_sub(ctx: &mut Ctx) -> R<Outcome> {
    let j = ctx.structure()?;
    let ts = ctx.rationals("t", &[(1, 2)])?;
    let model = ctx.submanifold()?;
    let mut d = Map::new();
    let mut by_t = Vec::new();
    let mut verdict = true;
    ctx.use_op("is_J_submanifold");
    for t in &ts {
        let r = is_j_submanifold(&j, t, &model)?;
        verdict &= r.holds;
        let dims: BTreeSet<Vec<usize>> = r
            .per_sample
            .iter()
            .map(|s| vec![s.dim_l_m, s.dim_l_conormal, s.dim_q, s.dim_q_cap_conj])
            .collect();
        let mut entry = json!({
            "t": rat_string(t),
            "holds": r.holds,
            "constant_rank": r.constant_rank,
            "exact": r.per_sample.iter().all(|s| s.exact),
            "dims": dims.into_iter().collect::<Vec<_>>(),
        });
        if r.holds {
            ctx.use_op("induced_structure_at_point");
            let mut types = Vec::new();
            for x in model.points() {
                let jm = induced_structure_at(&j.matrix_at(t, x)?, &model, x)?;
                types.push(type_of_structure(&jm)?);
            }
            entry["induced_types"] = json!(types);
        }
        by_t.push(entry);
    }
    d.insert("by_t".into(), Json::Array(by_t));
    d.insert("holds".into(), json!(verdict));
    if !ctx.has("points") {
        d.insert("points".into(), Json::Array(model.points().iter().map(|p| point_json(p)).collect()));
    }
    Ok(Outcome { verdict, details: d })
}

fn gcs_type(ctx: &mut Ctx) -> R<Outcome> {
    let j = ctx.structure()?;
    let beta = if ctx.has("beta") || ctx.has("f") { Some(ctx.beta()?) } else { None };
    let t = ctx.rationals("t", &[(1, 2)])?.remove(0);
    let points = ctx.ambient_points()?;
    ctx.use_op("type_at_point");
    let mut types = Vec::new();
    let mut formula = Vec::new();
    for p in &points {
        types.push(j.type_at(&t, p)?);
        if let Some(b) = &beta {
            formula.push(ctx.n as i64 - 2 * b.rank_at(p)? as i64);
        }
    }
    let mut d = Map::new();
    let mut verdict = true;
    d.insert("types".into(), json!(types));
    if beta.is_some() && !ctx.has("bfield") {
        let agree = types.iter().zip(&formula).all(|(&a, &b)| a as i64 == b);
        d.insert("formula".into(), json!(formula));
        d.insert("formula_agrees".into(), json!(agree));
        verdict &= agree;
    }
    ctx.use_op("eigenframe");
    d.insert("eigenframe_dim".into(), json!(j.eigenframe_at(&t, &points[0])?.len()));
    d.insert("squares_to_minus_one".into(), json!(j.squares_to_minus_one()?));
    d.insert("orthogonal".into(), json!(j.is_orthogonal()?));
    ctx.use_op("integrability_check");
    let integrable = match j.integrability_check(&t, &points) {
        Ok(r) => json!(r.integrable),
        Err(genkahler::Error::Domain(_)) => Json::Null,
        Err(e) => return Err(e.into()),
    };
    d.insert("integrable".into(), integrable);
    if !ctx.has("points") {
        d.insert("points".into(), Json::Array(points.iter().map(|p| point_json(p)).collect()));
    }
    Ok(Outcome { verdict, details: d })
}

fn kahler_pair(ctx: &mut Ctx) -> R<Outcome> {
    let mut d = Map::new();
    let ts = ctx.rationals("t", &[(1, 3)])?;
    let points = ctx.ambient_points()?;
    let deformed = ctx.has("beta") || ctx.has("f");
    let mut verdict;
    if deformed {
        let series = ctx.deformation()?;
        ctx.use_op("make_J_beta_t");
        ctx.use_op("exp_action");
        let mut failures = Vec::new();
        for (ti, t) in ts.iter().enumerate() {
            for (pi, p) in points.iter().enumerate() {
                if !series.pair_report_at(t, p)?.holds() {
                    failures.push(json!([ti, pi]));
                }
            }
        }
        verdict = failures.is_empty();
        d.insert("pair_holds".into(), json!(verdict));
        d.insert("failures".into(), Json::Array(failures));
    } else {
        ctx.use_op("make_JJ");
        ctx.use_op("make_Jomega");
        let omega = ctx.omega()?;
        let j0 = ctx.with_bfield(GCStructure::make_jj(ctx.n))?;
        let j1 = ctx.with_bfield(GCStructure::make_jomega(&omega)?)?;
        ctx.use_op("kahler_pair_check");
        ctx.use_op("gen_metric");
        ctx.use_op("integrability_check");
        let r = kahler_pair_check(&j0, &j1, &ts, &points)?;
        verdict = r.holds();
        d.insert("commute".into(), json!(r.commute));
        d.insert("squares_to_identity".into(), json!(r.squares_to_identity));
        d.insert("positive".into(), json!(r.positive));
        d.insert(
            "integrable".into(),
            json!(r.integrable.iter().map(|x| x.as_ref().map(|x| x.integrable)).collect::<Vec<_>>()),
        );
        d.insert("pair_holds".into(), json!(verdict));
        let metric = GenMetric::new(&j0, &j1)?;
        let (g, b) = metric.metric_and_b_at(&ts[0], &points[0])?;
        d.insert("metric_symmetric".into(), json!(g == g.transpose()));
        d.insert("b_antisymmetric".into(), json!(b == -b.transpose()));
        if ctx.has("ideal") {
            let model = ctx.submanifold()?;
            ctx.use_op("gamma_iso_check");
            let mut flags = Vec::new();
            for x in model.points() {
                let r = gamma_iso_check(&j0.matrix_at(&ts[0], x)?, &j1.matrix_at(&ts[0], x)?, &model, x)?;
                flags.push(r.holds());
            }
            d.insert("gamma_iso".into(), json!(flags.iter().all(|&f| f)));
            verdict &= flags.iter().all(|&f| f);
        }
    }
    if !ctx.has("points") {
        d.insert("points".into(), Json::Array(points.iter().map(|p| point_json(p)).collect()));
    }
    Ok(Outcome { verdict, details: d })
}

fn spinor_pullback(ctx: &mut Ctx) -> R<Outcome> {
    let series = ctx.deformation()?;
    let ts = ctx.rationals("t", &[(1, 2)])?;
    let model = ctx.submanifold()?;
    ctx.use_op("is_poisson_submanifold");
    let sub = is_poisson_submanifold(&series.beta, model.ideal())?;
    let mut d = Map::new();
    d.insert("poisson_submanifold".into(), json!(sub));
    let mut verdict = sub;
    let mut by_t = Vec::new();
    for t in &ts {
        ctx.use_op("exp_action");
        let psi = series.spinor_at(t)?;
        ctx.use_op("pullback_at_point");
        let mut nonzero = Vec::new();
        let mut pure = Vec::new();
        let mut nondeg = Vec::new();
        let mut types = BTreeSet::new();
        for x in model.points() {
            let basis = model.real_tangent_basis(x)?;
            let pb = PointForm::from_form(&psi, x)?.pullback(&basis);
            nonzero.push(!pb.is_zero());
            pure.push(pb.kernel().is_ok());
            nondeg.push(pb.is_nondegenerate()?);
            if let Ok(k) = pb.spinor_type() {
                types.insert(k);
            }
        }
        let x0 = &model.points()[0];
        ctx.use_op("is_nondegenerate");
        ctx.use_op("kernel_at_point");
        ctx.use_op("type_of_spinor_at_point");
        ctx.use_op("induced_Jpsi");
        let ambient_nondeg = is_nondegenerate(&psi, model.points())?;
        let kdim = kernel_at_point(&psi, x0)?.len();
        let jpsi = &induced_jpsi(&psi, std::slice::from_ref(x0))?[0];
        let dim = jpsi.rows();
        let squares = jpsi.try_mul(jpsi)? == -Matrix::<GaussRat>::identity(dim);
        let ok = nonzero.iter().chain(&pure).chain(&nondeg).all(|&b| b) && ambient_nondeg && squares;
        verdict &= ok;
        by_t.push(json!({
            "t": rat_string(t),
            "nonzero": nonzero.iter().all(|&b| b),
            "pure": pure.iter().all(|&b| b),
            "nondegenerate": nondeg.iter().all(|&b| b),
            "pullback_types": types.into_iter().collect::<Vec<_>>(),
            "ambient_nondegenerate": ambient_nondeg,
            "ambient_type": type_of_spinor_at_point(&psi, x0)?,
            "ambient_kernel_dim": kdim,
            "jpsi_squares_to_minus_one": squares,
        }));
    }
    d.insert("by_t".into(), Json::Array(by_t));
    d.insert("residual_zero_through".into(), json!(series.residual_zero_through));
    if !ctx.has("points") {
        d.insert("points".into(), Json::Array(model.points().iter().map(|p| point_json(p)).collect()));
    }
    Ok(Outcome { verdict, details: d })
}

/// `b(t) = Σ t^k/k! (h_k + p_k)` as a `t`-series.
fn b_series(series: &DeformationSeries<GaussRat>) -> Value {
    let n = series.omega.n();
    let mut coeffs = vec![Form::zero(n)];
    let mut fact = GaussRat::one();
    for (k, bk) in series.b.iter().enumerate() {
        fact = fact * GaussRat::from_frac(k as i64 + 1, 1);
        coeffs.push(bk.form().scale(&fact.inv()));
    }
    Value::from_form_series(&coeffs)
}

fn deform(ctx: &mut Ctx) -> R<Outcome> {
    let series = ctx.deformation()?;
    let order = series.order;
    ctx.use_op("spin_action");
    ctx.use_op("exterior_d");
    ctx.use_op("homotopy");
    ctx.use_op("lefschetz_contract");
    ctx.use_op("k1_membership");
    ctx.use_op("k2_membership");
    ctx.use_op("first_order_source");
    let source = first_order_source(&series.beta, &series.omega)?;
    let psi = series.psi()?;
    let in_k2 = source.is_zero() || k2_membership(&source, &series.omega)?;
    let in_k1 = series.b_in_k1()?;
    let mut d = Map::new();
    d.insert("order".into(), json!(order));
    d.insert("degree_bound".into(), json!(series.degree_bound));
    d.insert("residual_zero_through".into(), json!(series.residual_zero_through));
    d.insert("b_series".into(), json!(b_series(&series).to_string()));
    d.insert(
        "b".into(),
        Json::Array(
            series
                .b
                .iter()
                .map(|bk| json!({ "h": print_poly(ctx.n, &bk.h), "p": print_form(&bk.p), "real": bk.is_real() }))
                .collect(),
        ),
    );
    d.insert("b_in_k1".into(), json!(in_k1));
    d.insert("source".into(), json!(print_form(&source)));
    d.insert("source_in_k2".into(), json!(in_k2));
    d.insert("psi".into(), json!(print_form(&psi)));
    let mut verdict = series.residual_zero_through == Some(order) && in_k1 && in_k2;
    if matches!(ctx.raw("bch"), Some(Json::Bool(true))) {
        ctx.use_op("bch_log");
        ctx.use_op("cl_product");
        let ok = series.bch_consistent()?;
        d.insert("bch_consistent".into(), json!(ok));
        verdict &= ok;
    }
    if ctx.has("shift") {
        let beta = series.beta.clone();
        let plain = solve_deformation(&beta, &series.omega, 1, None, ctx.settings.degree_bound)?;
        let distinct = plain.b.first().map(|b| &b.p) != series.b.first().map(|b| &b.p);
        d.insert("distinct_from_unshifted".into(), json!(distinct));
        verdict &= distinct;
    }
    Ok(Outcome { verdict, details: d })
}

fn bihermitian(ctx: &mut Ctx) -> R<Outcome> {
    let beta = ctx.beta()?;
    let omega = ctx.omega()?;
    let n = ctx.n;
    let frame = match ctx.value_list("frame")? {
        Some(vs) => vs.iter().map(|v| v.to_polyvector()).collect::<Result<Vec<_>, _>>()?,
        None => (0..n).map(|j| Polyvector::d_z(n, j)).collect(),
    };
    ctx.use_op("ks_class");
    let ks = ks_class(&beta, &omega)?;
    ctx.use_op("bihermitian_first_order");
    let fr = bihermitian_first_order(&beta, &omega, &frame)?;
    let mut d = Map::new();
    d.insert("ks_class".into(), json!(ks.components.iter().map(print_form).collect::<Vec<_>>()));
    d.insert("delbar_closed".into(), json!(ks.delbar_closed));
    d.insert("velocity".into(), json!(fr.velocity.iter().map(print_polyvector).collect::<Vec<_>>()));
    d.insert("frames_agree".into(), json!(fr.agree()));
    Ok(Outcome { verdict: ks.delbar_closed, details: d })
}

fn matrix_rows(v: &Json, cols: Option<usize>) -> R<Vec<Vec<GaussRat>>> {
    let Json::Array(rows) = v else { return Err(CliError::Parse("expected a matrix (list of rows)".into())) };
    let mut out = Vec::new();
    for r in rows {
        let Json::Array(cs) = r else { return Err(CliError::Parse("expected a matrix row".into())) };
        if let Some(c) = cols {
            if cs.len() != c {
                return Err(genkahler::Error::DimensionMismatch { expected: c, found: cs.len() }.into());
            }
        }
        out.push(cs.iter().map(|c| Ok(GaussRat::from_real(parse_rational(c)?))).collect::<R<Vec<_>>>()?);
    }
    Ok(out)
}

fn random_obstruction(rng: &mut ChaCha8Rng, k: usize, low_rank: bool) -> ObstructionMatrix<GaussRat> {
    let g = |v: i64| GaussRat::from_frac(v, 1);
    let p: Vec<[GaussRat; 3]> = if low_rank {
        let v: [i64; 3] = [rng.gen_range(-2..=2), rng.gen_range(-2..=2), rng.gen_range(-2..=2)];
        (0..k)
            .map(|_| {
                let u = rng.gen_range(-1..=1i64);
                [g(u * v[0]), g(u * v[1]), g(u * v[2])]
            })
            .collect()
    } else {
        (0..k).map(|_| [g(rng.gen_range(-2..=2)), g(rng.gen_range(-2..=2)), g(rng.gen_range(-2..=2))]).collect()
    };
    let mut lambda = Matrix::zeros(k, k);
    for a in 0..k {
        for b in (a + 1)..k {
            let v = g(rng.gen_range(-2..=2));
            lambda[(a, b)] = v.clone();
            lambda[(b, a)] = -v;
        }
    }
    ObstructionMatrix { p, lambda }
}

fn obstruction_rank(ctx: &mut Ctx) -> R<Outcome> {
    let mut d = Map::new();
    ctx.use_op("obstruction_rank_test");
    ctx.use_op("build_torus_cp1_bivector");
    ctx.use_op("schouten");
    if let Some(sweep) = ctx.raw("sweep") {
        let count = sweep.get("count").and_then(Json::as_u64).unwrap_or(200) as usize;
        let sizes: Vec<usize> = match sweep.get("sizes") {
            Some(Json::Array(a)) => a.iter().filter_map(Json::as_u64).map(|k| k as usize).collect(),
            _ => vec![2, 3, 4],
        };
        if sizes.is_empty() || sizes.iter().any(|&k| k == 0 || k > 6) {
            return Err(CliError::Usage("sweep sizes must lie in 1..=6".into()));
        }
        ctx.echo("sweep", json!({ "count": count, "sizes": sizes }));
        let mut disagreements = Vec::new();
        let mut ranks: BTreeMap<String, usize> = BTreeMap::new();
        for i in 0..count {
            let k = sizes[i % sizes.len()];
            let m = random_obstruction(&mut ctx.rng, k, i % 2 == 1);
            let r = obstruction_rank_test(&m)?;
            *ranks.entry(r.rank.to_string()).or_default() += 1;
            if !r.consistent {
                disagreements.push(i);
            }
        }
        d.insert("count".into(), json!(count));
        d.insert("rank_counts".into(), json!(ranks));
        d.insert("disagreements".into(), json!(disagreements.len()));
        d.insert("disagreeing_samples".into(), json!(disagreements));
        return Ok(Outcome { verdict: disagreements.is_empty(), details: d });
    }
    let p = matrix_rows(ctx.raw("P").ok_or_else(|| CliError::Usage("missing parameter `P` or `sweep`".into()))?, Some(3))?;
    let k = p.len();
    let p: Vec<[GaussRat; 3]> = p.into_iter().map(|r| [r[0].clone(), r[1].clone(), r[2].clone()]).collect();
    let m = match ctx.raw("lambda") {
        Some(l) => ObstructionMatrix::new(p, Matrix::from_rows(matrix_rows(l, Some(k))?))?,
        None => ObstructionMatrix::with_zero_lambda(p),
    };
    let r = obstruction_rank_test(&m)?;
    d.insert("rank".into(), json!(r.rank));
    d.insert("schouten_zero".into(), json!(r.schouten_zero));
    d.insert("criterion_consistent".into(), json!(r.consistent));
    d.insert("bivector".into(), json!(print_polyvector(&build_torus_cp1_bivector(&m))));
    Ok(Outcome { verdict: r.consistent, details: d })
}

fn extends_projective(ctx: &mut Ctx) -> R<Outcome> {
    let beta = ctx.beta()?;
    let proj: Vec<usize> = match ctx.raw("projective") {
        None => (0..ctx.n).collect(),
        Some(Json::Array(a)) => a
            .iter()
            .map(|v| match v.as_u64() {
                Some(k) if k >= 1 && (k as usize) <= ctx.n => Ok(k as usize - 1),
                _ => Err(CliError::Usage(format!("projective index {v} outside 1..={}", ctx.n))),
            })
            .collect::<R<_>>()?,
        Some(_) => return Err(CliError::Usage("`projective` must be a list of indices".into())),
    };
    ctx.echo("projective", json!(proj.iter().map(|k| k + 1).collect::<Vec<_>>()));
    ctx.use_op("extends_to_projective");
    let r = extends_to_projective(&beta, &proj)?;
    let mut d = Map::new();
    d.insert("extends".into(), json!(r.extends));
    d.insert("failing_charts".into(), json!(r.failing_charts.iter().map(|k| k + 1).collect::<Vec<_>>()));
    d.insert("coefficient_degree".into(), json!(beta.max_poly_degree()));
    Ok(Outcome { verdict: r.extends, details: d })
}

fn section(ctx: &mut Ctx, key: &str) -> R<GenSection<GaussRat>> {
    let n = ctx.n;
    let raw = ctx.raw(key).ok_or_else(|| CliError::Usage(format!("missing parameter `{key}`")))?;
    let part = |ctx: &mut Ctx, v: Option<&Json>| -> R<Option<Value>> {
        match v.map(|v| ctx.scn.resolve(v)) {
            None => Ok(None),
            Some(Json::String(s)) => Ok(Some(ctx.parse(s)?)),
            Some(_) => Err(CliError::Parse(format!("`{key}` parts must be expressions"))),
        }
    };
    let (vector, form) = match raw {
        Json::String(s) => {
            let v = ctx.parse(s)?;
            match v.kind() {
                ValueKind::Vector => (v.to_polyvector()?, Form::zero(n)),
                _ => (Polyvector::zero(n), v.to_form()?),
            }
        }
        Json::Object(o) => {
            let v = part(ctx, o.get("vector"))?.map(|v| v.to_polyvector()).transpose()?;
            let f = part(ctx, o.get("form"))?.map(|v| v.to_form()).transpose()?;
            (v.unwrap_or_else(|| Polyvector::zero(n)), f.unwrap_or_else(|| Form::zero(n)))
        }
        _ => return Err(CliError::Parse(format!("`{key}` must be an expression or {{vector, form}}"))),
    };
    if !vector.is_homogeneous(1) && !vector.is_zero() || !form.is_homogeneous(1) && !form.is_zero() {
        return Err(genkahler::Error::Domain(format!("`{key}` is not a section of T ⊕ T*")).into());
    }
    let s = GenSection::new(vector, form);
    ctx.echo(key, section_json(&s));
    Ok(s)
}

fn section_json(s: &GenSection<GaussRat>) -> Json {
    json!({ "vector": print_polyvector(&s.vector), "form": print_form(&s.form) })
}

fn brackets(ctx: &mut Ctx) -> R<Outcome> {
    let kind = match ctx.raw("kind") {
        Some(Json::String(s)) => s.clone(),
        _ => return Err(CliError::Usage("`kind` must be `courant` or `schouten`".into())),
    };
    let mut d = Map::new();
    let mut verdict = true;
    match kind.as_str() {
        "schouten" => {
            let a = ctx.value("a")?.to_polyvector()?;
            let b = ctx.value("b")?.to_polyvector()?;
            ctx.use_op("schouten");
            let ab = a.schouten(&b)?;
            d.insert("bracket".into(), json!(print_polyvector(&ab)));
            if let Some(phi) = ctx.opt_form("form")? {
                ctx.use_op("contract");
                d.insert("contracted".into(), json!(print_form(&phi.contract(&ab)?)));
            }
        }
        "courant" => {
            let a = section(ctx, "a")?;
            let b = section(ctx, "b")?;
            ctx.use_op("interior");
            ctx.use_op("lie_derivative");
            ctx.use_op("exterior_d");
            let ab = courant(&a, &b)?;
            d.insert("bracket".into(), section_json(&ab));
            d.insert("pairing".into(), json!(print_poly(ctx.n, &pairing(&a, &b)?)));
            if let Some(bf) = ctx.opt_form("bfield")? {
                if !bf.is_homogeneous(2) || !bf.is_closed() {
                    return Err(genkahler::Error::Domain("bfield must be a closed 2-form".into()).into());
                }
                ctx.use_op("adjoint_on_sections");
                ctx.use_op("cl_product");
                let x = Clifford::from_form(&bf);
                let lhs = adjoint_on_section(&x, &ab)?;
                let rhs = courant(&adjoint_on_section(&x, &a)?, &adjoint_on_section(&x, &b)?)?;
                d.insert("b_symmetry".into(), json!(lhs == rhs));
                verdict &= lhs == rhs;
            }
        }
        other => return Err(CliError::Usage(format!("unknown bracket `{other}`"))),
    }
    ctx.echo("kind", Json::String(kind));
    Ok(Outcome { verdict, details: d })
}

pub fn dispatch(ctx: &mut Ctx, command: &str) -> R<Outcome> {
    match command {
        "check-poisson" => check_poisson(ctx),
        "poisson-sub" => poisson_sub(ctx),
        "conormal-invariant" => conormal_invariant(ctx),
        "j-sub" => j_sub(ctx),
        "gcs-type" => gcs_type(ctx),
        "kahler-pair" => kahler_pair(ctx),
        "spinor-pullback" => spinor_pullback(ctx),
        "deform" => deform(ctx),
        "bihermitian" => bihermitian(ctx),
        "obstruction-rank" => obstruction_rank(ctx),
        "extends-projective" => extends_projective(ctx),
        "brackets" => brackets(ctx),
        other => Err(CliError::Usage(format!("unknown command `{other}`"))),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Verdict {
    Pass,
    Fail,
    Undecided,
    Error,
}

impl Verdict {
    fn as_str(self) -> &'static str {
        match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
            Verdict::Undecided => "undecided",
            Verdict::Error => "error",
        }
    }
}

pub struct TaskReport {
    pub verdict: Verdict,
    /// Set for usage and parse errors.
    pub input_error: bool,
    pub json: Json,
    pub trace: BTreeSet<&'static str>,
}

fn expectation_met(expect: &BTreeMap<String, Json>, details: &Map<String, Json>, error: Option<&str>) -> bool {
    expect.iter().all(|(k, v)| match (k.as_str(), error) {
        ("error", Some(code)) => v == code,
        ("error", None) => false,
        (_, Some(_)) => false,
        (_, None) => details.get(k) == Some(v),
    })
}

pub fn run_task(scn: &Scenario, index: usize, settings: Settings) -> TaskReport {
    let task = &scn.tasks[index];
    let mut trace = BTreeSet::new();
    let mut inputs = Map::new();
    let result = Ctx::new(scn, task, index, settings).and_then(|mut ctx| {
        let r = dispatch(&mut ctx, &task.command);
        trace = std::mem::take(&mut ctx.trace);
        inputs = std::mem::take(&mut ctx.inputs);
        r
    });
    let mut obj = Map::new();
    obj.insert("index".into(), json!(index));
    obj.insert("command".into(), json!(task.command));
    obj.insert("inputs".into(), Json::Object(inputs));
    let (verdict, input_error) = match result {
        Ok(out) => {
            let ok = match &task.expect {
                Some(e) => expectation_met(e, &out.details, None),
                None => out.verdict,
            };
            obj.insert("details".into(), Json::Object(out.details));
            (if ok { Verdict::Pass } else { Verdict::Fail }, false)
        }
        Err(e) => {
            obj.insert("error".into(), json!({ "code": e.code(), "message": e.to_string() }));
            let expected = task.expect.as_ref().is_some_and(|x| expectation_met(x, &Map::new(), Some(e.code())));
            match e.class() {
                _ if expected => (Verdict::Pass, false),
                ErrorClass::Input => (Verdict::Error, true),
                ErrorClass::Undecided => (Verdict::Undecided, false),
                ErrorClass::Failed => (Verdict::Error, false),
            }
        }
    };
    if let Some(e) = &task.expect {
        obj.insert("expect".into(), json!(e));
    }
    obj.insert("verdict".into(), json!(verdict.as_str()));
    TaskReport { verdict, input_error, json: Json::Object(obj), trace }
}

pub struct RunReport {
    pub json: Json,
    pub exit_code: i32,
    pub trace: BTreeSet<&'static str>,
}

/// Run every task; `jobs > 1` runs tasks on that many threads. Reports are
/// ordered by task index either way.
pub fn run_scenario(scn: &Scenario, settings: Settings, jobs: usize) -> RunReport {
    let count = scn.tasks.len();
    let mut reports: Vec<Option<TaskReport>> = (0..count).map(|_| None).collect();
    if jobs <= 1 {
        for (i, slot) in reports.iter_mut().enumerate() {
            *slot = Some(run_task(scn, i, settings));
        }
    } else {
        let next = std::sync::atomic::AtomicUsize::new(0);
        let done = std::sync::Mutex::new(&mut reports);
        std::thread::scope(|s| {
            for _ in 0..jobs.min(count) {
                s.spawn(|| loop {
                    let i = next.fetch_add(1, std::sync::atomic::Ordering::SeqCst);
                    if i >= count {
                        break;
                    }
                    let r = run_task(scn, i, settings);
                    done.lock().expect("report lock")[i] = Some(r);
                });
            }
        });
    }
    let reports: Vec<TaskReport> = reports.into_iter().map(|r| r.expect("every task ran")).collect();
    let mut summary: BTreeMap<&str, usize> = ["pass", "fail", "undecided", "error"].into_iter().map(|k| (k, 0)).collect();
    let mut trace = BTreeSet::new();
    for r in &reports {
        *summary.get_mut(r.verdict.as_str()).expect("known verdict") += 1;
        trace.extend(r.trace.iter().copied());
    }
    let exit_code = if reports.iter().any(|r| r.input_error) {
        2
    } else if reports.iter().any(|r| matches!(r.verdict, Verdict::Fail | Verdict::Error)) {
        1
    } else if reports.iter().any(|r| r.verdict == Verdict::Undecided) {
        3
    } else {
        0
    };
    let json = json!({
        "scenario": scn.name,
        "n": scn.n,
        "seed": settings.seed,
        "order": settings.order,
        "samples": settings.samples,
        "degree_bound": settings.degree_bound,
        "tasks": reports.into_iter().map(|r| r.json).collect::<Vec<_>>(),
        "summary": summary,
    });
    RunReport { json, exit_code, trace }
}
